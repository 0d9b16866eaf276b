"""Counting solutions with a prescribed number of distinct entries.

A flat tuple of length k*s is split into k consecutive blocks of length s.
It is (k, l)-complex when it has exactly l distinct entries and its blocks
are pairwise distinct as multisets. ``sigma_count`` counts such tuples whose
blocks all share one sum (or product).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import factorial, lcm
from typing import Sequence

from . import kernels
from .core import CapacityError, DomainError, Mode, as_ground_set, budget, require_nonzero
from .sidon import evaluate, permutation_count

DEFAULT_BLOCK_BUDGET = 10**7
DEFAULT_LINEAR_BUDGET = 10**7


@dataclass(frozen=True)
class ComplexityClass:
    k: int
    s: int
    l: int
    blocks_pairwise_distinct: bool


def classify_tuple(t: Sequence[int], s: int, k: int) -> ComplexityClass:
    if len(t) != k * s:
        raise DomainError(f"expected a tuple of length k*s = {k * s}, got {len(t)}")
    blocks = [tuple(sorted(t[i * s:(i + 1) * s])) for i in range(k)]
    return ComplexityClass(k, s, len(set(t)), len(set(blocks)) == k)


def _check_blocks(n: int, s: int, limit: int | None) -> None:
    limit = budget(DEFAULT_BLOCK_BUDGET) if limit is None else limit
    if n**s > limit:
        raise CapacityError(f"|A|^s = {n ** s} ordered blocks exceeds budget {limit}")


def sigma_profile(A, s: int, k: int, mode=Mode.ADDITIVE, limit: int | None = None) -> dict[int, int]:
    """l -> Sigma_{l,s,k}(A) for every l with a nonzero count.

    Ordered blocks with the same multiset are grouped, so each bucket of
    equal-valued blocks is handled as a list of (multiset, #orderings).
    An ordered k-tuple of pairwise distinct multisets contributes the product
    of their ordering counts; unordered k-subsets are enumerated and scaled
    by k!.
    """
    A = as_ground_set(A)
    mode = Mode.parse(mode)
    if s < 1 or k < 1:
        raise DomainError("s and k must be positive")
    require_nonzero(A, mode)
    _check_blocks(len(A), s, limit)
    buckets: dict[int, list[tuple[frozenset[int], int]]] = defaultdict(list)
    for ms in combinations_with_replacement(A.elements, s):
        buckets[evaluate(ms, mode)].append((frozenset(ms), permutation_count(ms)))
    out: dict[int, int] = defaultdict(int)
    kf = factorial(k)
    for members in buckets.values():
        if len(members) < k:
            continue
        for combo in combinations(members, k):
            support: frozenset[int] = frozenset().union(*(m[0] for m in combo))
            weight = kf
            for _, perms in combo:
                weight *= perms
            out[len(support)] += weight
    return dict(sorted(out.items()))


def sigma_count(A, l: int, s: int, k: int, mode=Mode.ADDITIVE, limit: int | None = None) -> int:
    if not 1 <= l <= k * s:
        raise DomainError(f"l must lie in [1, k*s] = [1, {k * s}], got {l}")
    return sigma_profile(A, s, k, mode, limit).get(l, 0)


@dataclass(frozen=True)
class ExactMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.rows)
        if not rows or not rows[0]:
            raise ValueError("matrix dimensions must be positive")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows) -> "ExactMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])


def _as_matrix(M) -> ExactMatrix:
    return M if isinstance(M, ExactMatrix) else ExactMatrix.of(M)


def row_echelon(M) -> list[list[Fraction]]:
    """Row echelon form by exact Gaussian elimination over the rationals."""
    rows = [list(r) for r in _as_matrix(M).rows]
    m, n = len(rows), len(rows[0])
    pivot_row = 0
    for col in range(n):
        pivot = next((r for r in range(pivot_row, m) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        p = rows[pivot_row][col]
        for r in range(pivot_row + 1, m):
            f = rows[r][col] / p
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        if pivot_row == m:
            break
    return rows


def matrix_rank(M) -> int:
    return sum(1 for r in row_echelon(M) if any(r))


def linear_system_count(M, u: Sequence, A, limit: int | None = None) -> int:
    """Brute-force #{a in A^n : M a = u}."""
    M = _as_matrix(M)
    A = as_ground_set(A)
    m, n = M.shape
    if len(u) != m:
        raise DomainError(f"right-hand side has length {len(u)}, expected {m}")
    limit = budget(DEFAULT_LINEAR_BUDGET) if limit is None else limit
    if len(A) ** n > limit:
        raise CapacityError(f"|A|^n = {len(A) ** n} exceeds budget {limit}")
    # clear denominators row by row so the kernel sees integers only
    int_rows, int_u = [], []
    for row, b in zip(M.rows, u):
        b = Fraction(b)
        scale = lcm(*(x.denominator for x in row), b.denominator)
        int_rows.append([int(x * scale) for x in row])
        int_u.append(int(b * scale))
    return kernels.linear_count(int_rows, int_u, A.elements)
