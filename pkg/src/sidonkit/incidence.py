"""Hyperbolic incidence counts and weighted Moebius incidences, over Q."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

from . import kernels
from .core import CapacityError, DomainError, RationalSet, as_rational_set, budget

DEFAULT_QUADRUPLE_BUDGET = 10**8


@dataclass(frozen=True)
class MobiusCoeffs:
    """x -> (u1 x + u2) / (x + u3) with u2 != u1 u3."""

    u1: Fraction
    u2: Fraction
    u3: Fraction

    def __post_init__(self) -> None:
        for name in ("u1", "u2", "u3"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.u2 == self.u1 * self.u3:
            raise DomainError(f"degenerate Moebius map: u2 = u1*u3 for {self.as_tuple()}")

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.u1, self.u2, self.u3


def mobius_apply(u: MobiusCoeffs, x: Fraction | int) -> Fraction:
    x = Fraction(x)
    den = x + u.u3
    if den == 0:
        raise DomainError(f"x = {x} is the pole of the map")
    return (u.u1 * x + u.u2) / den


@dataclass(frozen=True)
class IncidenceInstance:
    X: RationalSet
    Y: RationalSet
    lam: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "X", as_rational_set(self.X))
        object.__setattr__(self, "Y", as_rational_set(self.Y))
        lam = Fraction(self.lam)
        if lam == 0:
            raise DomainError("lambda must be nonzero")
        object.__setattr__(self, "lam", lam)


def _instance(inst_or_X, Y=None, lam=1) -> IncidenceInstance:
    if isinstance(inst_or_X, IncidenceInstance):
        return inst_or_X
    return IncidenceInstance(inst_or_X, Y, lam)


def hyperbolic_count_brute(inst, Y=None, lam=1, limit: int | None = None) -> int:
    """Direct enumeration of (x1, x2, y1, y2) with (x1-y1)(x2-y2) = lambda."""
    inst = _instance(inst, Y, lam)
    nx, ny = len(inst.X), len(inst.Y)
    limit = budget(DEFAULT_QUADRUPLE_BUDGET) if limit is None else limit
    if nx * nx * ny * ny > limit:
        raise CapacityError(f"{nx * nx * ny * ny} quadruples exceeds budget {limit}")
    # scale by a common denominator D: (X1-Y1)(X2-Y2) * den(lam) = num(lam) * D^2
    D = lcm(1, *(x.denominator for x in inst.X), *(y.denominator for y in inst.Y))
    xs = [int(x * D) for x in inst.X]
    ys = [int(y * D) for y in inst.Y]
    return kernels.hyperbolic_brute(xs, ys, inst.lam.numerator * D * D, inst.lam.denominator)


def difference_counts(X: Iterable[Fraction], Y: Iterable[Fraction]) -> Counter:
    Y = list(Y)
    return Counter(x - y for x in X for y in Y)


def hyperbolic_count_fast(inst, Y=None, lam=1) -> int:
    """Sum over nonzero d of r(d) * r(lambda / d), r(d) = #{x - y = d}."""
    inst = _instance(inst, Y, lam)
    r = difference_counts(inst.X, inst.Y)
    return sum(c * r.get(inst.lam / d, 0) for d, c in r.items() if d != 0)


def weighted_mobius_incidences(X, H: Iterable[MobiusCoeffs],
                               w: Mapping[MobiusCoeffs, int] | None = None) -> int:
    """sum over x1, x2 in X and u in H of [x2 = M_u(x1)] * w(u); poles count 0."""
    X = as_rational_set(X)
    members = set(X.elements)
    total = 0
    for u in H:
        weight = 1 if w is None else w[u]
        if weight <= 0:
            raise DomainError("weights must be positive integers")
        for x in X.elements:
            if x + u.u3 == 0:
                continue
            if mobius_apply(u, x) in members:
                total += weight
    return total


def _iroot_ceil(v: int, k: int) -> int:
    """Smallest integer r >= 0 with r**k >= v (integer Newton iteration)."""
    if v <= 0:
        return 0
    r = 1 << -(-v.bit_length() // k)
    while True:
        t = ((k - 1) * r + v // r ** (k - 1)) // k
        if t >= r:
            break
        r = t
    return r if r**k == v else r + 1


@dataclass(frozen=True)
class TheoremRatio:
    H: int
    bound_value: int
    K: int
    in_regime: bool


def theorem_ratio(inst, Y=None, lam=1) -> TheoremRatio:
    """H next to ceil(|X|^(7/6) |Y|^(3/2)), compared through sixth powers.

    ``K`` is ceil(H^6 / (|X|^7 |Y|^9)), the smallest integer constant with
    H^6 <= K |X|^7 |Y|^9. Nothing is asserted: the implied constant is unknown.
    """
    inst = _instance(inst, Y, lam)
    H = hyperbolic_count_fast(inst)
    nx, ny = len(inst.X), len(inst.Y)
    base = nx**7 * ny**9
    bound_value = _iroot_ceil(base, 6)
    K = -(-(H**6) // base) if base else 0
    in_regime = ny * ny <= nx <= ny**3
    return TheoremRatio(H, bound_value, K, in_regime)
