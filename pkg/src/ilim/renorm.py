"""Renormalization towers of quadratic maps and the entropy values that
self-maps of the associated inverse limits can realize.

Detection is numeric: a map is renormalizable with period p when an interval
around the critical point, bounded by an orientation-preserving fixed point
of the p-th iterate and its mirror image, maps into itself under the p-th
iterate while its first p images stay pairwise disjoint in the interior.  A
kneading cross-check (periodicity of the critical itinerary away from the
multiples of p) guards against tolerance artifacts: the symbolic test is
necessary, so a numerically accepted period that fails it is flagged.

The admissible entropy values of a tower are 0 together with all numbers
N * (p_j / p_i) * log s_i where N is an integer at least
(p_i / p_k) * (log s_k / log s_i) for every level k between j and i.  Block
models — rotate the level-(j+1) subcontinua by R and act on each orbit by
powers of the shift — realize exactly such values through the orbit-average
formula implemented here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, TowerError, charge
from .lap_entropy import entropy_lap, lap_table
from .maps import QuadraticMap, itinerary

_LOG2 = math.log(2.0)
#: two-step ratio below this, together with polynomial lap growth, classifies
#: a return map as zero-entropy
_ZERO_RATIO = 0.08
_POLY_FACTOR = 4


@dataclass(frozen=True)
class RenormTower:
    """Nested periodic-interval periods with the entropy of each return map."""

    periods: tuple[int, ...]
    entropies: tuple[float, ...]
    notes: tuple[str, ...] = field(default=(), compare=False)

    def validate(self, tol: float = 5e-3) -> None:
        if not self.periods or self.periods[0] != 1:
            raise TowerError("tower must start with period 1")
        if len(self.periods) != len(self.entropies):
            raise TowerError("periods and entropies must pair up")
        for p, q in zip(self.periods, self.periods[1:]):
            if q % p != 0 or q <= p:
                raise TowerError(f"period {q} must be a proper multiple of {p}")
        for h in self.entropies:
            if h < -tol:
                raise TowerError(f"entropy {h} is negative")
        for (pa, ha), (pb, hb) in zip(
            zip(self.periods, self.entropies), zip(self.periods[1:], self.entropies[1:])
        ):
            if ha < (pa / pb) * hb - tol:
                raise TowerError(
                    f"entropy {ha} at period {pa} cannot fall below "
                    f"{pa}/{pb} of the next level's {hb}"
                )

    def __len__(self) -> int:
        return len(self.periods)


# ---------------------------------------------------------------------------
# detection


def _iterate(a: float, x: np.ndarray, k: int) -> np.ndarray:
    y = np.array(x, dtype=float, copy=True)
    for _ in range(k):
        y = 1.0 - a * y * y
    return y


def _fixed_points(a: float, p: int, bound: float, grid: int = 4001) -> list[float]:
    """Fixed points of the p-th iterate in [-bound, bound], by scan + bisection."""
    xs = np.linspace(-bound, bound, grid)
    g = _iterate(a, xs, p) - xs
    roots = [float(xs[i]) for i in np.flatnonzero(np.abs(g) <= 1e-12)]
    sign_change = np.flatnonzero(g[:-1] * g[1:] < 0)
    if sign_change.size:
        lo = xs[sign_change].copy()
        hi = xs[sign_change + 1].copy()
        glo = g[sign_change].copy()
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            gm = _iterate(a, mid, p) - mid
            same = (gm > 0) == (glo > 0)
            lo = np.where(same, mid, lo)
            glo = np.where(same, gm, glo)
            hi = np.where(same, hi, mid)
        roots.extend(float(r) for r in 0.5 * (lo + hi))
    dedup: list[float] = []
    for r in sorted(roots):
        if not dedup or abs(r - dedup[-1]) > 1e-9:
            dedup.append(r)
    return dedup


def _zero_preimage_layers(a: float, depth: int) -> list[np.ndarray]:
    """layers[j] = solutions of q^j(x) = 0 with minimal j, within [-1, 1]."""
    layers = [np.array([0.0])]
    seen = np.array([0.0])
    used = 1
    for _ in range(depth):
        y = layers[-1]
        rad = (1.0 - y) / a
        rad = rad[rad >= 0.0]
        r = np.sqrt(rad)
        r = r[r <= 1.0 + 1e-13]
        cand = np.unique(np.concatenate([-r, r]))
        used = charge(cand.size, used)
        if seen.size and cand.size:
            idx = np.searchsorted(seen, cand)
            near_r = np.abs(seen[np.minimum(idx, seen.size - 1)] - cand) <= 1e-12
            near_l = np.abs(seen[np.maximum(idx - 1, 0)] - cand) <= 1e-12
            cand = cand[~(near_l | near_r)]
        layers.append(cand)
        seen = np.sort(np.concatenate([seen, cand]))
    return layers


def _iterate_range(a: float, lo: float, hi: float, k: int, layers) -> tuple[float, float]:
    """Exact range of the k-th iterate over [lo, hi] via interior critical points."""
    pts = [lo, hi]
    for j in range(min(k, len(layers))):
        inside = layers[j][(layers[j] > lo) & (layers[j] < hi)]
        pts.extend(float(v) for v in inside)
    vals = _iterate(a, np.array(pts), k)
    return float(vals.min()), float(vals.max())


def _restrictive_bound(a: float, p: int, z_cur: float, tol: float) -> float | None:
    """Smallest |w| bounding a period-p restrictive interval inside [-z_cur, z_cur]."""
    layers = _zero_preimage_layers(a, p - 1)
    candidates = [w for w in _fixed_points(a, p, z_cur + 1e-12) if abs(w) > 1e-7]
    for w in sorted(candidates, key=abs):
        cycle = [w]
        for _ in range(p - 1):
            cycle.append(1.0 - a * cycle[-1] * cycle[-1])
        deriv = 1.0
        for x in cycle:
            deriv *= -2.0 * a * x
        if deriv <= 0:
            continue
        z = abs(w)
        lo, hi = _iterate_range(a, -z, z, p, layers)
        if lo < -z - tol or hi > z + tol:
            continue
        ranges = [(-z, z)]
        for i in range(1, p):
            ranges.append(_iterate_range(a, -z, z, i, layers))
        disjoint = True
        for i in range(p):
            for j in range(i + 1, p):
                overlap = min(ranges[i][1], ranges[j][1]) - max(ranges[i][0], ranges[j][0])
                if overlap > 1e-9:
                    disjoint = False
                    break
            if not disjoint:
                break
        if disjoint:
            return z
    return None


def _kneading_periodic(a: float, p: int, horizon: int) -> bool:
    """Necessary symbolic condition: the critical itinerary repeats with
    period p away from the multiples of p (critical hits are wildcards)."""
    q = QuadraticMap(a)
    first = q(q.critical)
    syms = itinerary(q, first, horizon, tol=1e-9)  # syms[k-1] codes iterate k
    for k in range(1, horizon + 1):
        if k % p == 0:
            continue
        s1, s2 = syms[k - 1], syms[(k % p) - 1]
        if "C" in (s1, s2):
            continue
        if s1 != s2:
            return False
    return True


def _return_map_entropy(a: float, p: int, z: float) -> float:
    """Entropy of the p-th-iterate return map on [-z, z], from its lap growth."""
    n_ret = max(5, min(12, 22 // p + 1))
    depth = p * (n_ret - 1)
    layers = _zero_preimage_layers(a, depth)
    counts = []
    total = 0
    for j in range(n_ret):
        layer = layers[p * j]
        total += int(np.count_nonzero((layer > -z + 1e-12) & (layer < z - 1e-12)))
        counts.append(1 + total)
    ratio2 = 0.5 * math.log(counts[-1] / counts[-3])
    poly = counts[-1] <= _POLY_FACTOR * n_ret * n_ret
    diffs = [b - c for b, c in zip(counts[1:], counts)]
    # an eventually-affine lap sequence is a zero-entropy signature that the
    # two-step ratio only reaches asymptotically
    affine_tail = len(diffs) >= 3 and diffs[-1] == diffs[-2] == diffs[-3]
    if poly and (ratio2 < _ZERO_RATIO or affine_tail):
        return 0.0
    return min(max(ratio2, 0.0), _LOG2)


def _base_entropy(a: float) -> float:
    q = QuadraticMap(a)
    est = entropy_lap(q, n_max=20, method="ratio2")
    counts = lap_table(q, 20).counts
    if est.value < _ZERO_RATIO and counts[-1] <= _POLY_FACTOR * 400:
        return 0.0
    return min(max(est.value, 0.0), _LOG2)


def detect_renormalization(a: float, max_period: int = 16, tol: float = 1e-9) -> RenormTower:
    """Renormalization tower of the quadratic map with parameter ``a``.

    Candidate periods are multiples of the last accepted period, tried in
    increasing order; each accepted level shrinks the search interval to the
    new restrictive interval.  Entropies come from return-map lap growth with
    a subexponential-growth cutoff for the zero-entropy regime.
    """
    if max_period > 64:
        raise DomainError("max_period capped at 64")
    quad = QuadraticMap(a)
    periods = [1]
    entropies = [_base_entropy(a)]
    notes: list[str] = []
    z_cur = quad.fixed_point_positive()
    while True:
        base = periods[-1]
        accepted = None
        k = 2
        while base * k <= max_period:
            p = base * k
            z = _restrictive_bound(a, p, z_cur, tol)
            symbolic = _kneading_periodic(a, p, horizon=min(6 * p, 48))
            if z is not None:
                if not symbolic:
                    notes.append(
                        f"period {p}: numeric acceptance not confirmed symbolically"
                    )
                accepted = (p, z)
                break
            if symbolic:
                notes.append(
                    f"period {p}: symbolic periodicity without a restrictive interval"
                )
            k += 1
        if accepted is None:
            break
        p, z = accepted
        periods.append(p)
        entropies.append(_return_map_entropy(a, p, z))
        z_cur = z
    tower = RenormTower(tuple(periods), tuple(entropies), tuple(notes))
    tower.validate()
    return tower


# ---------------------------------------------------------------------------
# admissible entropy values


def _n_floor(tower: RenormTower, j: int, i: int) -> float:
    """Smallest admissible multiplier for the level pair (j, i)."""
    hi = tower.entropies[i]
    bound = 1.0
    for k in range(j, i + 1):
        if tower.entropies[k] <= 0:
            continue
        bound = max(bound, (tower.periods[i] / tower.periods[k]) * (tower.entropies[k] / hi))
    return bound


def entropy_spectrum(tower: RenormTower, h_max: float) -> list[float]:
    """All admissible entropy values up to h_max, sorted and deduplicated."""
    tower.validate()
    if h_max <= 0:
        raise DomainError("h_max must be positive")
    values = [0.0]
    for i in range(len(tower)):
        hi = tower.entropies[i]
        if hi <= 0:
            continue
        for j in range(i + 1):
            unit = (tower.periods[j] / tower.periods[i]) * hi
            n = max(1, math.ceil(_n_floor(tower, j, i) - 1e-9))
            v = n * unit
            while v <= h_max + 1e-12:
                values.append(v)
                n += 1
                v = n * unit
    values.sort()
    out = [values[0]]
    for v in values[1:]:
        if v - out[-1] > 1e-12:
            out.append(v)
    return out


@dataclass(frozen=True)
class BlockModel:
    """Self-map model on one tower step: rotate the level+1 subcontinua by R,
    act along each rotation orbit by the given shift powers."""

    R: int
    powers: tuple[int, ...]
    level: int = 0

    def orbit_partition(self) -> tuple[tuple[int, ...], ...]:
        p_rel = len(self.powers)
        seen = [False] * p_rel
        orbits = []
        for start in range(p_rel):
            if seen[start]:
                continue
            orb = []
            k = start
            while not seen[k]:
                seen[k] = True
                orb.append(k)
                k = (k + self.R) % p_rel
            orbits.append(tuple(orb))
        return tuple(orbits)


def block_model_entropy(tower: RenormTower, model: BlockModel) -> float:
    """Entropy of a block model: the base rotation cost R * log s_j against
    the best orbit-averaged shift power on the level above."""
    tower.validate()
    j = model.level
    if j + 1 >= len(tower):
        raise TowerError(f"tower has no level {j + 1} for the permuted layer")
    p_rel = tower.periods[j + 1] // tower.periods[j]
    if len(model.powers) != p_rel:
        raise TowerError(
            f"model needs {p_rel} shift powers for the level-{j + 1} layer, "
            f"got {len(model.powers)}"
        )
    if model.R < 0 or any(n < 0 for n in model.powers):
        raise TowerError("rotation and shift powers must be nonnegative")
    base = model.R * tower.entropies[j]
    best_orbit = 0.0
    for orb in model.orbit_partition():
        avg = sum(model.powers[l] for l in orb) / len(orb) * tower.entropies[j + 1]
        best_orbit = max(best_orbit, avg)
    return max(base, best_orbit)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    witness: tuple[int, int, int] | None = None


def spectrum_membership(tower: RenormTower, value: float, tol: float = 1e-9) -> MembershipResult:
    """Decide whether ``value`` is an admissible entropy, with a witness.

    Zero is always admissible.  Otherwise a witness (j, i, N) certifies
    value = N * (p_j/p_i) * log s_i with N above the level-consistency floor.
    """
    tower.validate()
    if value < -tol:
        raise DomainError("entropy values are nonnegative")
    if abs(value) <= tol:
        return MembershipResult(True, None)
    for i in range(len(tower)):
        hi = tower.entropies[i]
        if hi <= 0:
            continue
        for j in range(i + 1):
            unit = (tower.periods[j] / tower.periods[i]) * hi
            floor = _n_floor(tower, j, i)
            for n in {math.floor(value / unit), math.ceil(value / unit)}:
                if n < 1 or n + 1e-9 < floor:
                    continue
                if abs(value - n * unit) <= tol:
                    return MembershipResult(True, (j, i, int(n)))
    return MembershipResult(False, None)
