"""Ordered representation counts, energies and iterated sum/product sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import kernels
from .core import DomainError, GroundSet, Mode, as_ground_set, require_nonzero


@dataclass(frozen=True)
class RepProfile:
    """value -> number of ordered s-tuples from A with that sum/product."""

    mode: Mode
    arity: int
    counts: dict[int, int] = field(compare=True)

    @property
    def mass(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, n: int) -> int:
        return self.counts.get(n, 0)

    def moment(self, k: int) -> int:
        return sum(c**k for c in self.counts.values())


@dataclass(frozen=True)
class EnergyValue:
    mode: Mode
    s: int
    k: int
    value: int

    def __int__(self) -> int:
        return self.value


def _check_arity(s: int, name: str = "s") -> None:
    if not isinstance(s, int) or s < 1:
        raise DomainError(f"{name} must be a positive integer, got {s!r}")


def _fold_profile(A: GroundSet, s: int, mul: bool) -> dict[int, int]:
    base = {x: 1 for x in A}
    result = base
    for _ in range(s - 1):
        result = kernels.convolve(result, base, mul)
    return result


def rep_profile(A, s: int, mode: Mode | str = Mode.ADDITIVE) -> RepProfile:
    A = as_ground_set(A)
    mode = Mode.parse(mode)
    _check_arity(s)
    require_nonzero(A, mode)
    counts = _fold_profile(A, s, mode is Mode.MULTIPLICATIVE)
    return RepProfile(mode, s, counts)


def energy(A, s: int, k: int, mode: Mode | str = Mode.ADDITIVE) -> EnergyValue:
    """E_{s,k}(A) (additive) or M_{s,k}(A) (multiplicative), exactly."""
    _check_arity(k, "k")
    prof = rep_profile(A, s, mode)
    return EnergyValue(prof.mode, s, k, prof.moment(k))


def sup_rep(A, s: int, mode: Mode | str = Mode.ADDITIVE) -> tuple[int, int]:
    """Largest representation count and the smallest value attaining it."""
    A = as_ground_set(A)
    if not len(A):
        raise DomainError("sup_rep of the empty set is undefined")
    prof = rep_profile(A, s, mode)
    best = max(prof.counts.values())
    value = min(n for n, c in prof.counts.items() if c == best)
    return value, best


def iterated_sumset(A, h: int) -> GroundSet:
    A = as_ground_set(A)
    _check_arity(h, "h")
    return GroundSet(tuple(sorted(_fold_profile(A, h, False))))


def iterated_productset(A, h: int) -> GroundSet:
    """A^(h); zero is allowed here since no division is involved."""
    A = as_ground_set(A)
    _check_arity(h, "h")
    return GroundSet(tuple(sorted(_fold_profile(A, h, True))))


def mixed_additive_count(sets: Sequence) -> int:
    """#{(a_1..a_2s) in A_1 x .. x A_2s : a_1+..+a_s = a_{s+1}+..+a_2s}."""
    if len(sets) == 0 or len(sets) % 2:
        raise DomainError(f"need an even, positive number of sets, got {len(sets)}")
    s = len(sets) // 2
    left = {0: 1}
    right = {0: 1}
    for X in sets[:s]:
        left = kernels.convolve(left, {x: 1 for x in as_ground_set(X)}, False)
    for X in sets[s:]:
        right = kernels.convolve(right, {x: 1 for x in as_ground_set(X)}, False)
    if len(right) < len(left):
        left, right = right, left
    return sum(c * right.get(n, 0) for n, c in left.items())
