"""Explicit set families and the multiplication-graph cycle device."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import CapacityError, GroundSet, RationalSet, RegimeError, as_ground_set, budget

DEFAULT_CYCLE_BUDGET = 10**7
FAMILIES = ("prime_product", "power_sumset", "balog_wooley", "incidence_lb_one", "incidence_lb_two")


def _sieve(limit: int) -> np.ndarray:
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime)


def first_primes(n: int) -> list[int]:
    """The first n primes; the sieve range doubles until it holds enough."""
    if n < 1:
        raise RegimeError(f"n must be positive, got {n}")
    # Rosser's bound p_n < n (ln n + ln ln n) for n >= 6
    limit = 15 if n < 6 else int(n * (math.log(n) + math.log(math.log(n)))) + 1
    while True:
        primes = _sieve(limit)
        if primes.size >= n:
            return [int(p) for p in primes[:n]]
        limit *= 2


def _positive(**params: int) -> None:
    for name, v in params.items():
        if not isinstance(v, int) or v < 1:
            raise RegimeError(f"{name} must be a positive integer, got {v!r}")


def build_prime_product(size_p: int, size_q: int) -> tuple[GroundSet, GroundSet, GroundSet]:
    """P = first size_p primes, Q = the next size_q, A = {pq}."""
    _positive(size_p=size_p, size_q=size_q)
    primes = first_primes(size_p + size_q)
    P = GroundSet(tuple(primes[:size_p]), "P")
    Q = GroundSet(tuple(primes[size_p:]), "Q")
    A = GroundSet.of((p * q for p in P for q in Q), "A")
    return A, P, Q


def build_power_sumset(N: int, M: int) -> tuple[GroundSet, GroundSet, GroundSet]:
    """P = {2^0..2^N}, Q = {2^(N+1)..2^(N+M)}, A = P + Q."""
    if not isinstance(N, int) or N < 0:
        raise RegimeError(f"N must be a nonnegative integer, got {N!r}")
    _positive(M=M)
    P = GroundSet(tuple(1 << j for j in range(N + 1)), "P")
    Q = GroundSet(tuple(1 << j for j in range(N + 1, N + M + 1)), "Q")
    A = GroundSet.of((p + q for p in P for q in Q), "A")
    return A, P, Q


def build_balog_wooley(M: int, N: int) -> GroundSet:
    """{(2i + 1) 2^j : 1 <= i <= M, 1 <= j <= N}."""
    _positive(M=M, N=N)
    return GroundSet.of(((2 * i + 1) << j for i in range(1, M + 1) for j in range(1, N + 1)),
                        f"A_{M},{N}")


def build_incidence_lb_one(N: int, M: int) -> tuple[RationalSet, RationalSet]:
    """Y = [N], X = [M] u (Y + 1/[M]); needs M >= 2N."""
    _positive(N=N, M=M)
    if M < 2 * N:
        raise RegimeError(f"incidence_lb_one needs M >= 2N, got N={N}, M={M}")
    Y = RationalSet.of(range(1, N + 1))
    Z = range(1, M + 1)
    X = RationalSet.of([*Z, *(y + Fraction(1, z) for y in Y for z in Z)])
    return X, Y


def build_incidence_lb_two(N: int, M: int, interval: bool = False
                           ) -> tuple[RationalSet, RationalSet, Fraction]:
    """X = {2^0..2^N}, Y = {2^0..2^M}, lambda = 2^M; needs N >= M + 1.

    With ``interval=True`` the sets are the integer ranges [1, 2^N] and
    [1, 2^M] instead of the geometric progressions.
    """
    _positive(N=N, M=M)
    if N < M + 1:
        raise RegimeError(f"incidence_lb_two needs N >= M + 1, got N={N}, M={M}")
    if interval:
        X = RationalSet.of(range(1, (1 << N) + 1))
        Y = RationalSet.of(range(1, (1 << M) + 1))
    else:
        X = RationalSet.of(1 << j for j in range(N + 1))
        Y = RationalSet.of(1 << j for j in range(M + 1))
    return X, Y, Fraction(1 << M)


@dataclass(frozen=True)
class BipartiteGraph:
    left: tuple
    right: tuple
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if not (0 <= i < len(self.left) and 0 <= j < len(self.right)):
                raise ValueError(f"edge {(i, j)} out of range")

    @property
    def n_edges(self) -> int:
        return len(self.edges)


def multiplication_graph(C, P, Q) -> BipartiteGraph:
    """Edge (p, q) whenever pq lies in C."""
    C, P, Q = as_ground_set(C), as_ground_set(P), as_ground_set(Q)
    edges = frozenset((i, j) for i, p in enumerate(P) for j, q in enumerate(Q) if p * q in C)
    return BipartiteGraph(P.elements, Q.elements, edges)


def has_even_cycle(G: BipartiteGraph, h: int, limit: int | None = None) -> bool:
    """Whether G has a cycle of length exactly 2h.

    Each cycle is searched from its smallest vertex, extending simple paths
    through larger vertices only; ``limit`` caps the number of extensions.
    """
    if h < 2:
        raise RegimeError(f"h must be at least 2, got {h}")
    length = 2 * h
    nl, nr = len(G.left), len(G.right)
    if length > nl + nr:
        return False
    limit = budget(DEFAULT_CYCLE_BUDGET) if limit is None else limit
    # vertices 0..nl-1 are left, nl..nl+nr-1 right
    adj: list[list[int]] = [[] for _ in range(nl + nr)]
    for i, j in G.edges:
        adj[i].append(nl + j)
        adj[nl + j].append(i)
    for nbrs in adj:
        nbrs.sort()
    steps = 0
    on_path = [False] * (nl + nr)

    def extend(start: int, v: int, depth: int) -> bool:
        nonlocal steps
        for w in adj[v]:
            if w == start and depth == length:
                return True
            if w <= start or on_path[w] or depth == length:
                continue
            steps += 1
            if steps > limit:
                raise CapacityError(f"cycle search exceeded {limit} path extensions")
            on_path[w] = True
            found = extend(start, w, depth + 1)
            on_path[w] = False
            if found:
                return True
        return False

    for start in range(nl + nr):
        on_path[start] = True
        found = extend(start, start, 1)
        on_path[start] = False
        if found:
            return True
    return False


def turan_bound_holds(n_edges: int, m: int, n: int, h: int) -> bool:
    """Edge count against the known upper bound for C_2h-free m x n bipartite graphs.

    Odd h:  e <= (2h-3) ((mn)^((h+1)/2h) + m + n)
    Even h: e <= (2h-3) (m^((h+2)/2h) n^(1/2) + m + n), with m <= n.
    Decided exactly by raising the irrational term's side to the 2h-th power.
    """
    if h < 2:
        raise RegimeError(f"h must be at least 2, got {h}")
    m, n = min(m, n), max(m, n)
    c = 2 * h - 3
    slack = n_edges - c * (m + n)
    if slack <= 0:
        return True
    if h % 2:
        rhs = c ** (2 * h) * (m * n) ** (h + 1)
    else:
        rhs = c ** (2 * h) * m ** (h + 2) * n**h
    return slack ** (2 * h) <= rhs


def construct(family: str, **params: int):
    """Dispatch by family name; returns the family's own tuple/set."""
    if family == "prime_product":
        return build_prime_product(params["size_p"], params["size_q"])
    if family == "power_sumset":
        return build_power_sumset(params["N"], params["M"])
    if family == "balog_wooley":
        return build_balog_wooley(params["M"], params["N"])
    if family == "incidence_lb_one":
        return build_incidence_lb_one(params["N"], params["M"])
    if family == "incidence_lb_two":
        return build_incidence_lb_two(params["N"], params["M"], bool(params.get("interval", 0)))
    raise RegimeError(f"unknown family {family!r}; expected one of {FAMILIES}")
