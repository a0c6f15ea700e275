"""Separated-set entropy: sampling, greedy counts, growth fits, coding bound.

The greedy counter is cross-checked two independent ways: against a
straight-from-the-definition rescan built on the backward-point metric, and
against an exact maximum-independent-set solver (bitset branch and bound) on
small subclouds, where the greedy answer must sit within a factor two.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ilim import (
    BackwardPoint,
    DepthError,
    DomainError,
    PartitionError,
    ResourceCapError,
    SeparationCurve,
    TentMap,
    build_chain,
    entropy_bowen,
    estimate_from_curves,
    itinerary_upper_bound,
    limit_diameter,
    metric,
    partition_blocks,
    sample_points,
    separated_count,
    separation_curves,
    validate,
)

# ---------------------------------------------------------------------------
# independent oracles


def greedy_by_definition(sub, R, n, eps):
    """Rescan the greedy separated-set construction straight from the metric.

    Forward images are appended with the tent map itself and every step
    distance is evaluated through BackwardPoint/metric, so nothing here
    shares code with the vectorised prefix-sum path under test.
    """
    arr = sub.array
    ends = sub.depth + R * np.arange(n)
    steps = int(ends.max()) - sub.depth
    tm = TentMap(sub.slope)
    rows = []
    for row in arr:
        coords = list(row)
        x = coords[-1]
        for _ in range(max(steps, 0)):
            x = tm(x)
            coords.append(x)
        rows.append(coords)
    kept = []
    for i, coords in enumerate(rows):
        ok = True
        for j in kept:
            other = rows[j]
            dmax = 0.0
            for e in ends:
                a = BackwardPoint(sub.slope, tuple(coords[: e + 1]))
                b = BackwardPoint(sub.slope, tuple(other[: e + 1]))
                dmax = max(dmax, metric(a, b))
            if dmax <= eps:
                ok = False
                break
        if ok:
            kept.append(i)
    return len(kept)


def conflict_masks(sub, R, n, eps):
    """Bitmask adjacency of the closeness graph: edge when eps-close at all k < n."""
    arr = sub.array
    N, W = arr.shape
    ends = sub.depth + R * np.arange(n)
    steps = int(ends.max()) - sub.depth
    s = sub.slope
    ext = np.empty((N, W + max(steps, 0)))
    ext[:, :W] = arr
    x = arr[:, -1].copy()
    for k in range(max(steps, 0)):
        x = np.minimum(s * x, s * (1.0 - x))
        ext[:, W + k] = x
    neigh = [0] * N
    for i in range(N):
        close = np.ones(N, dtype=bool)
        for e in ends:
            w = 2.0 ** (np.arange(e + 1) - e)
            dk = np.abs(ext[:, : e + 1] - ext[i, : e + 1]) @ w
            close &= dk <= eps
        close[i] = False
        m = 0
        for j in np.nonzero(close)[0]:
            m |= 1 << int(j)
        neigh[i] = m
    return neigh


def mis_size(neigh):
    """Exact maximum independent set size, branch and bound on bitsets."""

    def component(avail):
        start = avail & -avail
        reach, frontier = start, start
        while frontier:
            nxt = 0
            f = frontier
            while f:
                v = (f & -f).bit_length() - 1
                f &= f - 1
                nxt |= neigh[v]
            nxt &= avail & ~reach
            reach |= nxt
            frontier = nxt
        return reach

    def solve(avail):
        total = 0
        changed = True
        while changed:  # degree-0/1 vertices are always safe to take
            changed = False
            a = avail
            while a:
                v = (a & -a).bit_length() - 1
                a &= a - 1
                if not (avail >> v) & 1:
                    continue
                nb = neigh[v] & avail
                if nb == 0:
                    avail &= ~(1 << v)
                    total += 1
                    changed = True
                elif nb & (nb - 1) == 0:
                    avail &= ~((1 << v) | nb)
                    total += 1
                    changed = True
        if avail == 0:
            return total
        comp = component(avail)
        if comp != avail:
            return total + solve(comp) + solve(avail & ~comp)
        best_v, best_deg = -1, -1
        a = avail
        while a:
            v = (a & -a).bit_length() - 1
            a &= a - 1
            deg = bin(neigh[v] & avail).count("1")
            if deg > best_deg:
                best_v, best_deg = v, deg
        inc = 1 + solve(avail & ~(neigh[best_v] | (1 << best_v)))
        exc = solve(avail & ~(1 << best_v))
        return total + max(inc, exc)

    return solve((1 << len(neigh)) - 1)


# ---------------------------------------------------------------------------
# sampling


def test_small_cloud_is_the_full_backward_tree():
    # at s=2 both preimage branches exist everywhere, so depth 3 with a roomy
    # cap gives all 2^3 branches for each of the 3 seeds
    cloud = sample_points(2.0, 3, per_branch_cap=8, n_seeds=3)
    assert len(cloud) == 3 * 8
    assert cloud.array.shape == (24, 4)


def test_sampled_rows_are_genuine_backward_orbits():
    cloud = sample_points(1.8, 7, per_branch_cap=4, n_seeds=16)
    assert all(validate(p) for p in cloud.points)


def test_sampled_rows_stay_in_the_invariant_interval():
    for s in (1.5, 1.8, 2.0):
        cloud = sample_points(s, 6, per_branch_cap=8, n_seeds=20)
        assert cloud.array.min() >= 0.0
        assert cloud.array.max() <= TentMap(s).top + 1e-12


def test_sampling_is_deterministic_and_deduplicated():
    a = sample_points(2.0, 5, per_branch_cap=6, n_seeds=40)
    b = sample_points(2.0, 5, per_branch_cap=6, n_seeds=40)
    assert np.array_equal(a.array, b.array)
    uniq = np.unique(a.array, axis=0)
    assert uniq.shape == a.array.shape


def test_branch_cap_limits_cloud_size():
    cloud = sample_points(2.0, 10, per_branch_cap=4, n_seeds=32)
    assert len(cloud) <= 32 * 4


def test_sampling_rejects_bad_parameters():
    with pytest.raises(DomainError):
        sample_points(2.0, 31)
    with pytest.raises(DomainError):
        sample_points(2.0, 5, per_branch_cap=0)
    with pytest.raises(DomainError):
        sample_points(2.0, 5, n_seeds=0)


def test_sampling_respects_node_budget(monkeypatch):
    monkeypatch.setenv("ILIM_MAX_NODES", "50")
    with pytest.raises(ResourceCapError):
        sample_points(2.0, 12, per_branch_cap=64, n_seeds=64)


def test_subcloud_identity_when_large_enough():
    cloud = sample_points(1.8, 5, per_branch_cap=4, n_seeds=10)
    assert cloud.subcloud(10 * 4) is cloud


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=10_000))
def test_subcloud_size_and_membership(k):
    cloud = sample_points(1.8, 6, per_branch_cap=4, n_seeds=24)
    size = 1 + k % len(cloud)
    sub = cloud.subcloud(size)
    assert len(sub) == size
    rows = {tuple(r) for r in cloud.array}
    assert all(tuple(r) in rows for r in sub.array)


# ---------------------------------------------------------------------------
# separated counts


def test_huge_eps_separates_nothing():
    cloud = sample_points(2.0, 6, per_branch_cap=4, n_seeds=32)
    # the whole space has diameter below 2, so one point dominates everything
    assert separated_count(cloud, 1, 1, 3.0) == 1


def test_identity_power_gives_constant_counts():
    cloud = sample_points(2.0, 8, per_branch_cap=4, n_seeds=64)
    for eps in (2.0**-3, 2.0**-4):
        counts = [separated_count(cloud, 0, n, eps) for n in range(1, 7)]
        assert len(set(counts)) == 1


def test_counts_do_not_drop_as_eps_shrinks():
    cloud = sample_points(2.0, 10, per_branch_cap=4, n_seeds=512)
    vals = [separated_count(cloud, 1, 6, e) for e in (2.0**-3, 2.0**-4, 2.0**-5, 2.0**-6)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_counts_grow_with_time_horizon_then_saturate():
    cloud = sample_points(2.0, 10, per_branch_cap=4, n_seeds=512)
    counts = [separated_count(cloud, 1, n, 2.0**-5) for n in range(1, 9)]
    assert all(a <= b for a, b in zip(counts, counts[1:]))
    assert counts[0] < counts[4]  # genuine growth before saturation
    assert all(c <= len(cloud) for c in counts)


def test_greedy_count_matches_definition_rescan():
    cloud = sample_points(1.8, 6, per_branch_cap=4, n_seeds=32)
    sub = cloud.subcloud(25)
    for R, n, eps in ((1, 3, 0.1), (-1, 3, 0.1), (2, 2, 0.05), (1, 4, 0.02)):
        assert separated_count(sub, R, n, eps) == greedy_by_definition(sub, R, n, eps)


def test_inverse_power_needs_enough_history():
    cloud = sample_points(2.0, 5, per_branch_cap=4, n_seeds=16)
    with pytest.raises(DepthError):
        separated_count(cloud, -2, 4, 0.1)
    # the same horizon is fine one step shallower in time
    assert separated_count(cloud, -1, 4, 0.1) >= 1


def test_separated_count_rejects_bad_parameters():
    cloud = sample_points(2.0, 5, per_branch_cap=4, n_seeds=16)
    with pytest.raises(DomainError):
        separated_count(cloud, 1, 0, 0.1)
    with pytest.raises(DomainError):
        separated_count(cloud, 1, 3, 0.0)


def test_greedy_sits_within_factor_two_of_exact_maximum():
    cloud = sample_points(1.9, 8, per_branch_cap=4, n_seeds=128)
    for size, eps in ((80, 2.0**-2), (80, 2.0**-3), (200, 2.0**-4)):
        sub = cloud.subcloud(size)
        greedy = separated_count(sub, 1, 4, eps)
        exact = mis_size(conflict_masks(sub, 1, 4, eps))
        assert greedy <= exact
        assert 2 * greedy >= exact


# ---------------------------------------------------------------------------
# growth fits


def test_growth_rate_near_log_two_at_full_slope():
    cloud = sample_points(2.0, 10, per_branch_cap=4, n_seeds=512)
    (curve,) = separation_curves(cloud, 1, (2.0**-5,), n_max=5)
    assert curve.window == (1, 5)
    assert 0.55 <= curve.estimate <= 0.70


def test_saturated_tail_does_not_swallow_the_growth_window():
    # once the greedy count hits the sample's packing capacity the curve goes
    # flat; that plateau would otherwise be the longest "linear" window and
    # drag the rate to zero
    cloud = sample_points(2.0, 10, per_branch_cap=4, n_seeds=512)
    (curve,) = separation_curves(cloud, 1, (2.0**-5,), n_max=10)
    counts = [c for _, c in curve.counts]
    assert counts[-1] == counts[-2]  # the plateau is really there
    assert 0.55 <= curve.estimate <= 0.70
    assert curve.window[1] <= 6


def test_constant_counts_give_estimate_exactly_zero():
    cloud = sample_points(2.0, 8, per_branch_cap=4, n_seeds=64)
    (curve,) = separation_curves(cloud, 0, (2.0**-4,), n_max=6)
    assert curve.estimate == 0.0
    assert curve.window == (1, 6)
    assert curve.residual == 0.0


def test_kinked_counts_flag_a_warning():
    # saturation right inside the only 4-point window leaves no clean regime
    cloud = sample_points(2.0, 8, per_branch_cap=4, n_seeds=128)
    sub = cloud.subcloud(11)
    with pytest.warns(UserWarning, match="no linear regime"):
        separation_curves(sub, 1, (0.25,), n_max=4)


def test_curves_need_four_points():
    cloud = sample_points(2.0, 5, per_branch_cap=4, n_seeds=16)
    with pytest.raises(DomainError):
        separation_curves(cloud, 1, (0.1,), n_max=3)


def test_forward_and_inverse_growth_rates_agree():
    # the shift and its inverse generate the same orbit structure; a cloud
    # rich in both seeds and branches sees matching growth within ten percent
    cloud = sample_points(2.0, 12, per_branch_cap=128, n_seeds=192)
    (fwd,) = separation_curves(cloud, 1, (2.0**-3,), n_max=9)
    (bwd,) = separation_curves(cloud, -1, (2.0**-3,), n_max=9)
    assert 0.35 <= fwd.estimate <= 0.65
    assert 0.35 <= bwd.estimate <= 0.65
    rel = abs(fwd.estimate - bwd.estimate) / max(fwd.estimate, bwd.estimate)
    assert rel <= 0.10


def test_estimate_reduction_takes_largest_rate():
    curves = [
        SeparationCurve(0.25, ((1, 2), (2, 3)), 0.31, (2, 7), 0.004),
        SeparationCurve(0.125, ((1, 2), (2, 5)), 0.62, (1, 5), 0.001),
    ]
    est = estimate_from_curves(curves)
    assert est.value == 0.62
    assert est.method == "bowen"
    assert est.n_used == 5
    assert est.residual == 0.001


def test_estimate_reduction_clamps_negative_rates():
    curves = [SeparationCurve(0.25, ((1, 5), (2, 4)), -0.02, (1, 4), 0.002)]
    assert estimate_from_curves(curves).value == 0.0


def test_entropy_of_identity_power_is_zero():
    est = entropy_bowen(1.7, 0, depth=8, eps_list=(2.0**-3, 2.0**-4), n_max=5, n_seeds=128)
    assert est.value == 0.0
    assert est.method == "bowen"


def test_shallow_cloud_against_fine_eps_warns():
    with pytest.warns(UserWarning, match="truncation"):
        entropy_bowen(1.8, 1, depth=6, eps_list=(2.0**-5, 2.0**-4), n_max=5, n_seeds=64)


# ---------------------------------------------------------------------------
# coding partition and itinerary bound


@pytest.mark.parametrize("s,eps0", [(2.0, 2.0**-5), (1.7, 2.0**-4)])
def test_partition_blocks_land_on_the_target_scale(s, eps0):
    bounds, q = partition_blocks(s, eps0)
    tent = TentMap(s)
    assert bounds[0] == 0.0
    assert bounds[-1] == pytest.approx(tent.top)
    assert np.all(np.diff(bounds) > 0)
    chain = build_chain(s, q, eps0 / 4.0)
    diams = [limit_diameter(chain, bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]
    for d in diams[:-1]:
        assert eps0 < d <= 2.0 * eps0
    assert diams[-1] <= 2.0 * eps0


def test_partition_level_resolves_the_scale():
    _, q = partition_blocks(2.0, 2.0**-5)
    assert q == 7  # 2^-q must come in under eps0 / (4 top)


def test_partition_rejects_nonpositive_scale():
    with pytest.raises(PartitionError):
        partition_blocks(2.0, 0.0)


def test_itinerary_count_dominates_separated_count():
    cloud = sample_points(2.0, 14, per_branch_cap=4, n_seeds=256)
    eps0 = 2.0**-5
    for R, m in ((1, 1), (1, 2)):
        for n in (2, 4, 6, 8):
            ub = itinerary_upper_bound(cloud, R, m, eps0, n)
            assert ub >= separated_count(cloud, R * m, n, 2.0 * eps0)


def test_single_symbol_itineraries_fit_in_the_partition():
    cloud = sample_points(2.0, 10, per_branch_cap=4, n_seeds=64)
    eps0 = 2.0**-4
    bounds, _ = partition_blocks(2.0, eps0)
    count = itinerary_upper_bound(cloud, 1, 1, eps0, 1)
    assert 1 <= count <= len(bounds) - 1


def test_itinerary_bound_needs_coding_depth():
    cloud = sample_points(2.0, 5, per_branch_cap=4, n_seeds=16)
    with pytest.raises(DepthError):
        itinerary_upper_bound(cloud, 1, 1, 2.0**-5, 3)  # wants depth 7


def test_itinerary_bound_rejects_bad_parameters():
    cloud = sample_points(2.0, 10, per_branch_cap=4, n_seeds=16)
    with pytest.raises(DomainError):
        itinerary_upper_bound(cloud, 1, 0, 2.0**-3, 3)
    with pytest.raises(DomainError):
        itinerary_upper_bound(cloud, 1, 1, 2.0**-3, 0)
