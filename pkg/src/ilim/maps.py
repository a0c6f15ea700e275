"""Tent and quadratic interval maps: evaluation, preimages, critical data.

The tent map with slope ``s`` is ``x -> min(s*x, s*(1-x))`` on [0, 1]; its
critical point is 1/2 and the image of the critical point is ``s/2``.  The
quadratic map with parameter ``a`` is ``x -> 1 - a*x**2`` on [-1, 1] with
critical point 0.  Both expose the same small protocol (``__call__``,
``preimages``, ``critical``, ``domain``) so that lap counting and itinerary
code can stay generic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import DomainError

#: default absolute tolerance for comparisons against the critical point
#: and for preimage deduplication.
TOL = 1e-12


@dataclass(frozen=True)
class Preimages:
    """Sorted preimage set of a single value, with a double-root marker.

    When both inverse branches land on the same point (the value sits exactly
    at the top of the map) the point is listed once and ``double_root`` is
    set instead of reporting two equal entries.
    """

    points: tuple[float, ...]
    double_root: bool = False

    def __iter__(self) -> Iterator[float]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> float:
        return self.points[i]


@dataclass(frozen=True)
class TentMap:
    """Symmetric tent map ``x -> min(s*x, s*(1-x))`` with slope in (1, 2]."""

    slope: float

    def __post_init__(self) -> None:
        if not 1.0 < self.slope <= 2.0:
            raise DomainError(f"tent slope must lie in (1, 2], got {self.slope}")

    # -- critical data ------------------------------------------------------

    critical: float = 0.5

    @property
    def top(self) -> float:
        """Image of the critical point, ``s/2``; the map sends [0,1] onto [0, top]."""
        return self.slope / 2.0

    @property
    def second_image(self) -> float:
        """Second image of the critical point, ``s - s**2/2``."""
        return self.slope - self.slope * self.slope / 2.0

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, 1.0)

    # -- dynamics -----------------------------------------------------------

    def __call__(self, x: float) -> float:
        if not -TOL <= x <= 1.0 + TOL:
            raise DomainError(f"tent map input {x} outside [0, 1]")
        return min(self.slope * x, self.slope * (1.0 - x))

    def preimages(self, y: float, tol: float = TOL) -> Preimages:
        """Solutions of ``T(x) = y`` in [0, 1], ascending.

        Empty when ``y`` exceeds the top of the map; a single point with
        ``double_root=True`` when ``y`` equals the top.
        """
        if y < -tol:
            raise DomainError(f"tent map never takes the value {y}")
        if y > self.top + tol:
            return Preimages(())
        lo = y / self.slope
        hi = 1.0 - y / self.slope
        if abs(hi - lo) <= tol:
            return Preimages((self.critical,), double_root=True)
        return Preimages((lo, hi))


@dataclass(frozen=True)
class QuadraticMap:
    """Real quadratic map ``x -> 1 - a*x**2`` on [-1, 1], parameter in (0, 2]."""

    parameter: float

    def __post_init__(self) -> None:
        if not 0.0 < self.parameter <= 2.0:
            raise DomainError(
                f"quadratic parameter must lie in (0, 2], got {self.parameter}"
            )

    critical: float = 0.0

    @property
    def domain(self) -> tuple[float, float]:
        return (-1.0, 1.0)

    @property
    def top(self) -> float:
        """Image of the critical point (always 1)."""
        return 1.0

    def fixed_point_positive(self) -> float:
        """The fixed point in (0, 1]: root of ``a*x**2 + x - 1 = 0``."""
        a = self.parameter
        return (-1.0 + math.sqrt(1.0 + 4.0 * a)) / (2.0 * a)

    def fixed_point_negative(self) -> float:
        """The orientation-reversing fixed point left of the critical point."""
        a = self.parameter
        return (-1.0 - math.sqrt(1.0 + 4.0 * a)) / (2.0 * a)

    def __call__(self, x: float) -> float:
        if not -1.0 - TOL <= x <= 1.0 + TOL:
            raise DomainError(f"quadratic map input {x} outside [-1, 1]")
        return 1.0 - self.parameter * x * x

    def preimages(self, y: float, tol: float = TOL) -> Preimages:
        """Solutions of ``q(x) = y`` in [-1, 1], ascending."""
        rad = (1.0 - y) / self.parameter
        if rad < -tol:
            return Preimages(())
        if rad <= tol:
            return Preimages((0.0,), double_root=True)
        r = math.sqrt(rad)
        pts = tuple(x for x in (-r, r) if -1.0 - tol <= x <= 1.0 + tol)
        return Preimages(tuple(min(max(x, -1.0), 1.0) for x in pts))


UnimodalMap = Union[TentMap, QuadraticMap]


def tent_eval(map_: TentMap, x: float) -> float:
    """Evaluate a tent map at ``x`` (thin functional wrapper)."""
    return map_(x)


def tent_preimages(map_: TentMap, y: float, tol: float = TOL) -> Preimages:
    """Preimage set of ``y`` under a tent map."""
    return map_.preimages(y, tol)


def quad_eval(map_: QuadraticMap, x: float) -> float:
    """Evaluate a quadratic map at ``x``."""
    return map_(x)


def critical_orbit(map_: UnimodalMap, n: int) -> list[float]:
    """Forward orbit of the critical point: the first ``n`` images."""
    if n < 1:
        raise DomainError("orbit length must be at least 1")
    out = []
    x = map_.critical
    for _ in range(n):
        x = map_(x)
        out.append(x)
    return out


def itinerary(map_: UnimodalMap, x: float, n: int, tol: float = TOL) -> str:
    """Kneading symbols of ``x, f(x), ..., f^(n-1)(x)`` against the critical point.

    ``L`` strictly left, ``R`` strictly right, ``C`` within ``tol`` of the
    critical point (the ``C`` test wins over the strict ones).
    """
    if n < 1:
        raise DomainError("itinerary length must be at least 1")
    syms = []
    for _ in range(n):
        if abs(x - map_.critical) <= tol:
            syms.append("C")
        elif x < map_.critical:
            syms.append("L")
        else:
            syms.append("R")
        x = map_(x)
    return "".join(syms)


def core_interval(map_: TentMap) -> tuple[float, float]:
    """The invariant interval [second image, first image] of the critical point."""
    return (map_.second_image, map_.top)
