"""B_h[g] verification, certification and an exact maximum-subset oracle.

Two representations count as the same solution when they are equal as
multisets; a multiset is stored as a non-decreasing tuple of elements.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import factorial, prod

from . import kernels
from .core import (
    CapacityError,
    DomainError,
    GroundSet,
    Mode,
    as_ground_set,
    budget,
    require_nonzero,
)

DEFAULT_MULTISET_BUDGET = 10**8
MAX_EXACT_SUBSET = 20

Multiset = tuple[int, ...]


@dataclass(frozen=True)
class SidonCertificate:
    h: int
    mode: Mode
    g_measured: int
    witness: int | None
    witness_multisets: tuple[Multiset, ...]

    @classmethod
    def vacuous(cls, h: int, mode: Mode) -> "SidonCertificate":
        """Certificate for the empty set: no value has any representation."""
        return cls(h, mode, 0, None, ())


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: int | None = None
    witness_multisets: tuple[Multiset, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def evaluate(ms: Multiset, mode: Mode) -> int:
    return prod(ms) if mode is Mode.MULTIPLICATIVE else sum(ms)


def permutation_count(ms: Multiset) -> int:
    """Number of distinct orderings of a multiset."""
    out = factorial(len(ms))
    for c in Counter(ms).values():
        out //= factorial(c)
    return out


def _check(A, h: int, mode) -> tuple[GroundSet, Mode]:
    A = as_ground_set(A)
    mode = Mode.parse(mode)
    if not isinstance(h, int) or h < 1:
        raise DomainError(f"h must be a positive integer, got {h!r}")
    require_nonzero(A, mode)
    return A, mode


def _guard(n: int, h: int, limit: int | None) -> None:
    limit = budget(DEFAULT_MULTISET_BUDGET) if limit is None else limit
    need = kernels.multiset_count(n, h)
    if need > limit:
        raise CapacityError(f"C({n}+{h}-1, {h}) = {need} multisets exceeds budget {limit}")


def multisets_with_value(A, h: int, mode, n: int) -> list[Multiset]:
    """All h-multisets over A evaluating to n, in lexicographic order."""
    A, mode = _check(A, h, mode)
    els = A.elements
    index = {x: i for i, x in enumerate(els)}
    mul = mode is Mode.MULTIPLICATIVE
    out: list[Multiset] = []
    prefix: list[int] = []

    def close(start: int, acc: int) -> None:
        # the final element is determined by the target
        if mul:
            if acc == 0 or n % acc:
                return
            last = n // acc
        else:
            last = n - acc
        i = index.get(last)
        if i is not None and i >= start:
            out.append((*prefix, last))

    def walk(start: int, depth: int, acc: int) -> None:
        if depth == h - 1:
            close(start, acc)
            return
        for i in range(start, len(els)):
            prefix.append(els[i])
            walk(i, depth + 1, acc * els[i] if mul else acc + els[i])
            prefix.pop()

    walk(0, 0, 1 if mul else 0)
    return out


def unordered_rep_count(A, h: int, mode, n: int) -> int:
    return len(multisets_with_value(A, h, mode, n))


def value_counts(A, h: int, mode, limit: int | None = None) -> dict[int, int]:
    """value -> number of h-multisets over A attaining it."""
    A, mode = _check(A, h, mode)
    _guard(len(A), h, limit)
    return kernels.multiset_value_counts(A.elements, h, mode is Mode.MULTIPLICATIVE)


def measure_g(A, h: int, mode=Mode.ADDITIVE, limit: int | None = None) -> SidonCertificate:
    """Smallest g for which A is a B_h[g] set, with a witness attaining it."""
    A, mode = _check(A, h, mode)
    if not len(A):
        raise DomainError("measure_g of the empty set is undefined")
    counts = value_counts(A, h, mode, limit)
    g = max(counts.values())
    witness = min(n for n, c in counts.items() if c == g)
    reps = tuple(multisets_with_value(A, h, mode, witness))
    return SidonCertificate(h, mode, g, witness, reps)


def is_Bhg(A, h: int, g: int, mode=Mode.ADDITIVE, limit: int | None = None) -> Verdict:
    """True iff no value has more than g representations.

    Stops at the first value to collect g + 1 multisets in enumeration order;
    on failure that value and g + 1 of its multisets are returned.
    """
    A, mode = _check(A, h, mode)
    if g < 1:
        raise DomainError(f"g must be a positive integer, got {g!r}")
    if not len(A):
        return Verdict(True)
    _guard(len(A), h, limit)
    v = kernels.first_violation(A.elements, h, mode is Mode.MULTIPLICATIVE, g)
    if v is None:
        return Verdict(True)
    reps = multisets_with_value(A, h, mode, v)
    return Verdict(False, v, tuple(reps[: g + 1]))


def max_sidon_subset_exact(A, h: int, g: int, mode=Mode.ADDITIVE) -> GroundSet:
    """Largest B_h[g] subset of A by branch and bound (|A| <= 20).

    Among maximum subsets the lexicographically smallest is returned; the
    include-first search order visits them first.
    """
    A, mode = _check(A, h, mode)
    if len(A) > MAX_EXACT_SUBSET:
        raise CapacityError(f"exact search is capped at |A| <= {MAX_EXACT_SUBSET}, got {len(A)}")
    mul = mode is Mode.MULTIPLICATIVE
    els = A.elements
    n = len(els)
    chosen: list[int] = []
    counts: Counter[int] = Counter()
    best: list[int] = []

    def new_values(x: int) -> list[int]:
        # multisets over chosen + {x} containing x at least once
        vals = []
        for j in range(1, h + 1):
            xpart = x**j if mul else x * j
            for rest in combinations_with_replacement(chosen, h - j):
                vals.append(xpart * prod(rest) if mul else xpart + sum(rest))
        return vals

    def search(i: int) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if i == n or len(chosen) + (n - i) <= len(best):
            return
        x = els[i]
        added = new_values(x)
        counts.update(added)
        if all(counts[v] <= g for v in added):
            chosen.append(x)
            search(i + 1)
            chosen.pop()
        counts.subtract(added)
        search(i + 1)

    search(0)
    return GroundSet(tuple(best))
