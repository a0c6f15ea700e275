"""End-to-end acceptance gate: nine numbered criteria, one verdict line each.

Each test prints "ACCEPTANCE <k> PASS: ..." on success; a failing assertion
leaves the corresponding FAIL visible in the pytest report.  Tolerances and
parameter sets are fixed — do not loosen them to make a run green.
"""

import math
import random
import time

import numpy as np
import pytest

from ilim import (
    BackwardPoint,
    BlockModel,
    QuadraticMap,
    RenormTower,
    TentMap,
    adjacency_ok,
    arc_to_salient,
    block_model_entropy,
    build_chain,
    detect_renormalization,
    entropy_bowen,
    entropy_lap,
    entropy_spectrum,
    folding_pattern_prefix,
    itinerary_upper_bound,
    lap_table,
    mandatory_ok,
    metric,
    refines,
    sample_points,
    separated_count,
    shift,
    spectrum_membership,
    verify_plevel_alignment,
)
from test_bowen import conflict_masks, mis_size

LOG2 = math.log(2.0)
A_STAR = 1.5436890126920764


def _verdict(k: int, detail: str) -> None:
    print(f"ACCEPTANCE {k} PASS: {detail}")


def test_1_lap_entropy_converges_to_log_slope():
    details = []
    for s in (1.5, 1.8, 2.0):
        t0 = time.perf_counter()
        est = entropy_lap(TentMap(s), 24, method="ratio")
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0
        assert abs(est.value - math.log(s)) < 0.02
        if s == 2.0:
            assert est.value == LOG2  # counts are exactly 2^n
        details.append(f"s={s}: {est.value:.6f} in {elapsed:.1f}s")
    _verdict(1, "; ".join(details))


def test_2_full_slope_lap_counts_are_powers_of_two():
    table = lap_table(TentMap(2.0), 20)
    for n in range(1, 21):
        assert table.lap(n) == 2**n
    _verdict(2, "lap(n) = 2^n exactly for n = 1..20 at s = 2")


def test_3_folding_pattern_prefix_and_salient_levels():
    want = (math.inf, 0, 1, 0, 2, 0, 1)
    for s in (1.6, 1.8, 2.0):
        assert folding_pattern_prefix(s, 7).entries == want
        for i in range(1, 11):
            pattern = arc_to_salient(s, i)
            assert pattern.entries[-1] == i  # the arc ends at the i-th salient
    _verdict(3, "prefix inf 0 1 0 2 0 1 at s in {1.6, 1.8, 2.0}; salient levels 1..10 exact")


def test_4_shift_power_entropy_at_desk_scale():
    t0 = time.perf_counter()
    e1 = entropy_bowen(2.0, 1, depth=12, n_max=10)
    e2 = entropy_bowen(2.0, 2, depth=12, n_max=10)
    e0 = entropy_bowen(2.0, 0, depth=12, n_max=10)
    elapsed = time.perf_counter() - t0
    assert elapsed < 180.0
    assert 0.55 <= e1.value <= 0.80
    assert abs(e2.value - 2.0 * e1.value) <= 0.15 * (2.0 * e1.value)
    assert e0.value == 0.0
    _verdict(4, f"R=1: {e1.value:.4f}, R=2: {e2.value:.4f} "
                f"({e2.value / (2 * e1.value):.3f} of doubled), R=0: 0 in {elapsed:.0f}s")


def test_5_projection_alignment_of_shift_powers():
    for s, q, p, R in ((2.0, 6, 3, 1), (1.8, 8, 4, 2)):
        report = verify_plevel_alignment(s, q, p, R, n=8)
        assert report.all_pass, report.failures
        assert report.M == R + q - p
    _verdict(5, "alignment 100% at (2, 6, 3, 1) M=4 and (1.8, 8, 4, 2) M=6, n=8")


def test_6_chain_axioms_hold_through_level_four():
    for s in (1.6, 1.8, 2.0):
        coarse = build_chain(s, 0, 0.2)
        assert adjacency_ok(coarse)
        assert mandatory_ok(coarse)
        for p in range(1, 5):
            fine = build_chain(s, p, 0.2 / 2**p)
            assert adjacency_ok(fine)
            assert mandatory_ok(fine)
            assert refines(fine, coarse)
            coarse = fine
    _verdict(6, "adjacency, mandatory breakpoints, refinement: p <= 4, s in {1.6, 1.8, 2.0}")


def test_7_admissible_entropy_spectrum():
    tower = RenormTower((1, 2), (0.5, 0.8))
    values = entropy_spectrum(tower, 1.3)
    assert values == pytest.approx([0.0, 0.5, 0.8, 1.0, 1.2], abs=1e-9)
    assert not spectrum_membership(tower, 0.4, tol=1e-9).member

    pure = RenormTower((1, 2), (LOG2 / 2, LOG2))
    grid = entropy_spectrum(pure, 2.2)
    assert grid == pytest.approx([k * LOG2 / 2 for k in range(7)], abs=1e-9)

    rng = random.Random(20260816)
    for _ in range(1000):
        depth = rng.randint(2, 4)
        periods = [1]
        for _ in range(depth - 1):
            periods.append(periods[-1] * rng.choice((2, 2, 3)))
        hs = [0.0] * depth
        hs[-1] = rng.uniform(0.1, 1.5)
        for i in range(depth - 2, -1, -1):
            lo = (periods[i] / periods[i + 1]) * hs[i + 1]
            hs[i] = lo if rng.random() < 0.3 else rng.uniform(lo, hs[i + 1] + 0.3)
        t = RenormTower(tuple(periods), tuple(hs))
        t.validate()
        j = rng.randint(0, depth - 2)
        p_rel = t.periods[j + 1] // t.periods[j]
        model = BlockModel(R=rng.randint(0, 6),
                           powers=tuple(rng.randint(0, 5) for _ in range(p_rel)),
                           level=j)
        assert spectrum_membership(t, block_model_entropy(t, model), tol=1e-9).member
    _verdict(7, "example spectra exact (0.4 rejected); 1000 random block models admissible")


def test_8_renormalization_detection():
    t0 = time.perf_counter()
    full = detect_renormalization(2.0)
    assert full.periods == (1,)
    assert full.entropies[0] == pytest.approx(LOG2, abs=0.02)

    low = detect_renormalization(1.3, max_period=2)
    assert low.periods == (1, 2)
    assert low.entropies == (0.0, 0.0)

    split = detect_renormalization(A_STAR, max_period=2)
    assert split.periods == (1, 2)
    assert split.entropies[0] == pytest.approx(LOG2 / 2, abs=0.03)
    assert split.entropies[1] == pytest.approx(LOG2, abs=0.03)
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    _verdict(8, f"a=2 trivial; a=1.3 -> (1,2) zeros; a*={A_STAR:.10f} -> "
                f"({split.entropies[0]:.4f}, {split.entropies[1]:.4f}) in {elapsed:.0f}s")


def test_9_property_suites():
    # metric triangle inequality and the shift Lipschitz bound (s + 1/2)
    s = 1.8
    cloud = sample_points(s, 8, per_branch_cap=4, n_seeds=300)
    points = cloud.points
    rng = random.Random(99)
    lip = s + 0.5
    for _ in range(1000):
        x, y, z = (points[rng.randrange(len(points))] for _ in range(3))
        assert metric(x, z) <= metric(x, y) + metric(y, z) + 1e-12
        assert metric(shift(x), shift(y)) <= lip * metric(x, y) + 1e-12

    # lap submultiplicativity on every recorded pair
    for map_ in (TentMap(1.5), TentMap(1.9), QuadraticMap(1.9)):
        table = lap_table(map_, 14)
        for m in range(1, 14):
            for n in range(1, 14 - m + 1):
                assert table.lap(m + n) <= table.lap(m) * table.lap(n)

    # greedy separated counts sit within a factor two of the exact maximum
    base = sample_points(1.9, 8, per_branch_cap=4, n_seeds=128)
    sub = base.subcloud(200)
    greedy = separated_count(sub, 1, 4, 2.0**-4)
    exact = mis_size(conflict_masks(sub, 1, 4, 2.0**-4))
    assert greedy <= exact <= 2 * greedy

    # block itineraries dominate separated counts at the matched scale
    deep = sample_points(2.0, 14, per_branch_cap=4, n_seeds=256)
    eps0 = 2.0**-5
    for R, m in ((1, 1), (1, 2)):
        for n in (2, 4, 6):
            ub = itinerary_upper_bound(deep, R, m, eps0, n)
            assert ub >= separated_count(deep, R * m, n, 2.0 * eps0)
    _verdict(9, f"triangle+Lipschitz on 1000 triples; submultiplicativity on 3 maps; "
                f"greedy {greedy} vs exact {exact} on 200 points; coding bound dominates")
