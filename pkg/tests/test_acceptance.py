"""Acceptance criteria 1-12.

Each test times its own work, records a PASS/FAIL line (printed again in the
terminal summary) and counts a run over its time budget as a failure.
"""

import time

from obliquity.catalog import entries
from obliquity.lattice import all_subgroups
from obliquity.permcore.constructions import cyclic
from obliquity.towers import (branch_bound_report, build_cyclic_tower, build_wreath_tower, ob_profile,
                              theorem_c_check, theorem_c_tower_check)
from obliquity.verify import (check_chief_covers, check_cyclic_closed_form, check_cyclic_kh, check_decomposition,
                              check_elemab_nonexample, check_height_residual, check_invariant_oracle,
                              check_normal_oracle, check_ob_oracle, check_phi_monotone, check_quotient_monotone,
                              check_squeeze, check_trichotomy)


def over_catalog(max_order, *checks):
    """(number of groups, failures as (name, message)) for the given checks."""
    fails, count = [], 0
    for e in entries(max_order):
        count += 1
        G = e.group
        for check in checks:
            fails += [(e.name, m) for m in check(G)]
    return count, fails


def finish(record, k, budget, start, fails, detail):
    secs = time.perf_counter() - start
    ok = not fails and secs < budget
    if fails:
        detail += f"; first failure: {fails[0]}"
    record(k, ok, secs, budget, detail)
    assert not fails, fails[:5]
    assert secs < budget, f"took {secs:.1f}s, budget {budget}s"


def test_criterion_01_cyclic_closed_form(record):
    t0 = time.perf_counter()
    fails = check_cyclic_closed_form(2, 8, 64) + check_cyclic_closed_form(3, 5, 81)
    finish(record, 1, 5, t0, fails, "stable ob(n) = p^floor(log_p n): p=2 n<=64, p=3 n<=81")


def test_criterion_02_kh_stable_count(record):
    t0 = time.perf_counter()
    fails = check_cyclic_kh(2, 7, range(1, 6)) + check_cyclic_kh(3, 6, range(1, 6))
    finish(record, 2, 1, t0, fails, "kh count stabilises at k for index p^k, p in {2,3}, k<=5")


def test_criterion_03_decomposition_equivalence(record):
    t0 = time.perf_counter()
    n, fails = over_catalog(2000, check_decomposition)
    finish(record, 3, 120, t0, fails, f"Phi trivial <=> simple-product decomposition on {n} groups")


def test_criterion_04_phi_monotone_and_height_residual(record):
    t0 = time.perf_counter()
    n, fails = over_catalog(500, check_phi_monotone, check_height_residual)
    finish(record, 4, 120, t0, fails, f"monotonicity and height-residual identity on {n} groups")


def test_criterion_05_quotient_monotone(record):
    t0 = time.perf_counter()
    n, fails = over_catalog(200, check_quotient_monotone)
    finish(record, 5, 300, t0, fails, f"I_n, OI_n, OI*_n images on {n} groups, all normal N")


def test_criterion_06_squeeze(record):
    t0 = time.perf_counter()
    n, fails = over_catalog(120, check_squeeze)
    finish(record, 6, 300, t0, fails, f"I_n(G) >= I_n(H) >= I_(t n^h)(G), index <= 6, n <= 12, {n} groups")


def test_criterion_07_trichotomy(record):
    t0 = time.perf_counter()
    n, fails = over_catalog(60, check_trichotomy)
    finish(record, 7, 300, t0, fails, f"some clause holds for every (M, N, H) on {n} groups")


def test_criterion_08_chief_covers(record):
    t0 = time.perf_counter()
    n, fails = over_catalog(128, check_chief_covers)
    finish(record, 8, 120, t0, fails, f"Phi(K1) <= K2 and K1/K2 = S^k on {n} groups")


def test_criterion_09_oracles(record):
    t0 = time.perf_counter()
    n1, fails = over_catalog(64, check_normal_oracle, check_ob_oracle)
    n2, more = over_catalog(48, check_invariant_oracle)
    finish(record, 9, 120, t0, fails + more,
           f"normal lattice and ob vs oracles on {n1} groups, invariant survey on {n2}")


def test_criterion_10_wreath_tower(record):
    t0 = time.perf_counter()
    t = build_wreath_tower(cyclic(2), 4)
    fails = []
    if t.orders() != [2, 8, 128, 32768]:
        fails.append(f"level orders {t.orders()}")
    depths = set()
    for n in range(1, 9):
        p = ob_profile(t, n)
        depths.add((p.computed_depth, p.truncated))
        if any(a > b for a, b in zip(p.per_level, p.per_level[1:])):
            fails.append(f"ob({n}) not level-monotone: {p.per_level}")
    b = branch_bound_report(t, 8)
    if not (b.c < float("inf") and b.c >= 1):
        fails.append(f"bound c = {b.c}")
    (depth, truncated), = depths
    if depth < 4 and not truncated:
        fails.append("profile stopped early without the truncation marker")
    finish(record, 10, 600, t0, fails,
           f"orders {t.orders()}, ob values {b.values} at depth {depth} (truncated={truncated}), c={b.c:.3f}")


def test_criterion_11_subgroup_inequalities(record):
    t0 = time.perf_counter()
    reports = 0
    for e in entries(60):
        G = e.group
        for H in all_subgroups(G):
            if H.index > 4:
                continue
            for n in (1, 2, 3):
                theorem_c_check(G, H, n, threshold=False)
                reports += 1
    fails = []
    # deep enough that the ob_G(t n^h) side settles for each n
    for p, L, n_max in ((2, 8, 6), (3, 6, 6), (5, 5, 2)):
        t = build_cyclic_tower(p, L)
        for n in range(1, n_max + 1):
            r = theorem_c_tower_check(t, n)
            if not (r.sides_stabilized and r.clause_ii and r.clause_iii_plain and r.clause_iii_star):
                fails.append(f"cyclictower({p},{L}) n={n}: {r}")
    finish(record, 11, 300, t0, fails,
           f"{reports} reports on catalog groups <= 60; (ii), (iii) hold on cyclic towers p in {{2,3,5}}")


def test_criterion_12_elemab_nonexample(record):
    t0 = time.perf_counter()
    fails = check_elemab_nonexample(2, 4)
    finish(record, 12, 1, t0, fails, "elementary-abelian tower flagged not consistent at n=2 (2,4,8,16)")
