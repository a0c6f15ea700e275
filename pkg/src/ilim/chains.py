"""Chain covers of [0, top] by consecutive half-open links, and their lift
to the inverse limit through the depth-p projection.

A chain at level p is a sorted breakpoint list on [0, top] whose links only
meet their neighbours, whose breakpoints contain every point that reaches
the critical point within p steps, and whose image under the map refines the
chain one level up.  Building the level-0 grid from power-of-two uniform
cells and pulling it back p times gives all three properties by
construction: each pullback divides gaps by the slope, preimages of the
critical point appear automatically, and the image of a pulled-back cell is
a cell of the previous level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DepthError, DomainError, charge
from .inverse_limit import (
    BackwardPoint,
    arc_records,
    p_level,
    projection,
    salient_positions,
    shift,
)
from .maps import TentMap

_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class IntervalChain:
    """Sorted breakpoints 0 = b_0 < ... < b_m = top at pullback level p."""

    slope: float
    index: int
    breakpoints: tuple[float, ...]

    @property
    def mesh(self) -> float:
        b = self.breakpoints
        return max(b[i + 1] - b[i] for i in range(len(b) - 1))

    @property
    def n_links(self) -> int:
        return len(self.breakpoints) - 1

    def to_json(self) -> dict:
        return {
            "slope": self.slope,
            "p": self.index,
            "breakpoints": list(self.breakpoints),
            "mesh": self.mesh,
        }


def _dedup(a: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    a = np.sort(a)
    if a.size == 0:
        return a
    keep = np.empty(a.size, dtype=bool)
    keep[0] = True
    np.greater(np.diff(a), tol, out=keep[1:])
    return a[keep]


def _base_grid(tent: TentMap, eps: float) -> np.ndarray:
    """Level-0 breakpoints: 0, critical, top, plus a power-of-two uniform grid
    with gap below eps/2.  Power-of-two cell counts nest across eps halvings."""
    cells = 1
    while tent.top / cells >= eps / 2.0:
        cells *= 2
    grid = np.linspace(0.0, tent.top, cells + 1)
    return _dedup(np.concatenate([grid, [tent.critical, tent.top]]))


def _pullback(tent: TentMap, breaks: np.ndarray) -> np.ndarray:
    """Preimages of the breakpoints within [0, top], endpoints re-added."""
    s = tent.slope
    y = breaks[breaks <= tent.top + _EDGE_TOL]
    left = y / s
    right = 1.0 - y[y >= tent.second_image - _EDGE_TOL] / s
    pre = np.concatenate([left, right, [0.0, tent.top]])
    pre = pre[(pre >= -_EDGE_TOL) & (pre <= tent.top + _EDGE_TOL)]
    return _dedup(np.clip(pre, 0.0, tent.top))


def build_chain(s: float, p: int, eps: float) -> IntervalChain:
    """Chain of level p with interval gaps below eps * s**-p / 2.

    The level-0 grid already has gaps below eps/2 and each pullback contracts
    them by the slope, so the projected links on the inverse limit have
    diameter below eps once 2**-p is small against eps (see limit_mesh).
    """
    if p < 0:
        raise DomainError("chain level must be nonnegative")
    if eps <= 0:
        raise DomainError("eps must be positive")
    tent = TentMap(s)
    breaks = _base_grid(tent, eps)
    used = charge(breaks.size, 0)
    for _ in range(p):
        breaks = _pullback(tent, breaks)
        used = charge(breaks.size, used)
    return IntervalChain(s, p, tuple(float(b) for b in breaks))


def limit_diameter(chain: IntervalChain, lo: float, hi: float) -> float:
    """Diameter on the inverse limit of the lift of [lo, hi] through depth index.

    A coordinate m steps above the deepest varies by at most s**m * (hi-lo),
    weighted 2**-(p-m); the unconstrained history below depth p adds 2**-p * top.
    """
    s, p = chain.slope, chain.index
    width = hi - lo
    coef = sum(2.0 ** (m - p) * s**m for m in range(p + 1))
    return coef * width + 2.0**-p * (s / 2.0)


def limit_mesh(chain: IntervalChain) -> float:
    """Largest lifted-link diameter on the inverse limit."""
    return limit_diameter(chain, 0.0, chain.mesh)


def link_of(chain: IntervalChain, x: BackwardPoint) -> int:
    """Index of the half-open link [b_j, b_{j+1}) containing the depth-p
    coordinate of x; the final link is closed on the right."""
    if chain.index > x.depth:
        raise DepthError(f"chain level {chain.index} exceeds point depth {x.depth}")
    if x.slope != chain.slope:
        raise DomainError("point and chain live over different slopes")
    value = projection(x, chain.index)
    breaks = chain.breakpoints
    if value >= breaks[-1]:
        return chain.n_links - 1
    j = int(np.searchsorted(np.asarray(breaks), value, side="right")) - 1
    return min(max(j, 0), chain.n_links - 1)


def refines(fine: IntervalChain, coarse: IntervalChain, tol: float = _EDGE_TOL) -> bool:
    """True when the image of every fine link lies inside one coarse closed link."""
    if fine.slope != coarse.slope:
        raise DomainError("chains live over different slopes")
    if fine.index != coarse.index + 1:
        raise DomainError(
            f"refinement compares level p+1 against p, got {fine.index} vs {coarse.index}"
        )
    tent = TentMap(fine.slope)
    fb = np.asarray(fine.breakpoints)
    cb = np.asarray(coarse.breakpoints)
    left_img = np.minimum(tent.slope * fb[:-1], tent.slope * (1.0 - fb[:-1]))
    right_img = np.minimum(tent.slope * fb[1:], tent.slope * (1.0 - fb[1:]))
    lo = np.minimum(left_img, right_img)
    hi = np.maximum(left_img, right_img)
    # a link straddling the critical point folds; its image tops out at top
    straddles = (fb[:-1] < tent.critical - tol) & (fb[1:] > tent.critical + tol)
    hi[straddles] = tent.top
    j = np.searchsorted(cb, 0.5 * (lo + hi)) - 1
    j = np.clip(j, 0, len(cb) - 2)
    ok = (lo >= cb[j] - tol) & (hi <= cb[j + 1] + tol)
    return bool(ok.all())


def adjacency_ok(chain: IntervalChain) -> bool:
    """Closed links meet exactly when their indices are adjacent.

    For an interval chain this reduces to the breakpoints being strictly
    increasing: equal neighbours would glue non-adjacent links together.
    """
    b = chain.breakpoints
    return all(b[i] < b[i + 1] for i in range(len(b) - 1))


def mandatory_ok(chain: IntervalChain, tol: float = 1e-9) -> bool:
    """Every point reaching the critical point within p steps is a breakpoint."""
    tent = TentMap(chain.slope)
    layer = np.array([tent.critical])
    required = [layer]
    for _ in range(chain.index):
        y = layer[layer <= tent.top + _EDGE_TOL]
        left = y / tent.slope
        right = 1.0 - y[y >= tent.second_image - _EDGE_TOL] / tent.slope
        layer = _dedup(np.concatenate([left, right]))
        layer = layer[(layer >= -_EDGE_TOL) & (layer <= tent.top + _EDGE_TOL)]
        required.append(layer)
    need = _dedup(np.concatenate(required))
    breaks = np.asarray(chain.breakpoints)
    idx = np.searchsorted(breaks, need)
    lo = np.abs(breaks[np.maximum(idx - 1, 0)] - need)
    hi = np.abs(breaks[np.minimum(idx, breaks.size - 1)] - need)
    return bool((np.minimum(lo, hi) <= tol).all())


@dataclass(frozen=True)
class AlignmentReport:
    """Outcome of the level-alignment check for a power of the shift."""

    slope: float
    q: int
    p: int
    R: int
    n: int
    M: int
    checks: int
    passed: int
    failures: tuple[str, ...]

    @property
    def all_pass(self) -> bool:
        return self.checks > 0 and self.passed == self.checks

    def to_json(self) -> dict:
        return {
            "slope": self.slope,
            "q": self.q,
            "p": self.p,
            "R": self.R,
            "n": self.n,
            "M": self.M,
            "checks": self.checks,
            "passed": self.passed,
            "failures": list(self.failures),
            "all_pass": self.all_pass,
        }


def verify_plevel_alignment(
    s: float, q: int, p: int, R: int, n: int, tol: float = 1e-9
) -> AlignmentReport:
    """Check that R shifts raise fold levels by exactly M = R + q - p.

    Every fold point of level l on the arc (read at reference depth q) must,
    after R shifts, be a fold point of level l + M at reference depth p, and
    its depth-p coordinate must agree with the depth-p coordinate of the
    salient point of level l + M — same value up to tol, hence the same link
    of any level-p chain.
    """
    if not (q >= p >= 0):
        raise DomainError("need q >= p >= 0")
    if R < 0 or n < 1:
        raise DomainError("need R >= 0 and n >= 1")
    M = R + q - p
    tent = TentMap(s)
    records = arc_records(s, n)
    reference = build_chain(s, p, eps=0.05)
    salients = salient_positions(s, n + M) if n + M >= 1 else []
    checks = 0
    passed = 0
    failures: list[str] = []
    for rec in records:
        pt = BackwardPoint.from_deepest(s, rec.position, q + n)
        image = pt
        for _ in range(R):
            image = shift(image)
        checks += 1
        lv = p_level(image, p, tol)
        if lv != rec.level + M:
            failures.append(
                f"position {rec.position:.12g}: level {lv} after {R} shifts, "
                f"expected {rec.level + M}"
            )
            continue
        target_level = rec.level + M
        if target_level == 0:
            ref_value = tent.critical
            same_link = True
        else:
            sal_pt = BackwardPoint.from_deepest(
                s, salients[target_level - 1], p + n + M
            )
            ref_value = projection(sal_pt, p)
            same_link = link_of(reference, sal_pt) == link_of(reference, image)
        value = projection(image, p)
        if abs(value - ref_value) <= tol or same_link:
            passed += 1
        else:
            failures.append(
                f"position {rec.position:.12g}: depth-{p} coordinate {value:.12g} "
                f"vs salient {ref_value:.12g}"
            )
    return AlignmentReport(
        slope=s, q=q, p=p, R=R, n=n, M=M,
        checks=checks, passed=passed, failures=tuple(failures),
    )
