"""Random sampling followed by deletion, as an executable procedure.

Sampling uses a counter-based SplitMix64 stream: element ``i`` of the sorted
input draws

    z = mix64(seed + (i + 1) * 0x9E3779B97F4A7C15 mod 2**64)

where ``mix64`` is the SplitMix64 finaliser (shifts 30/27/31, multipliers
0xBF58476D1CE4E5B9 and 0x94D049BB133111EB). The element is kept iff
``z < ceil(p * 2**64)``, an exact integer comparison, so the sample depends
only on (A, p, seed).
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .core import DomainError, GroundSet, Mode, as_ground_set
from .representation import energy
from .sidon import (
    Multiset,
    SidonCertificate,
    measure_g,
    multisets_with_value,
    value_counts,
)
from .sigma import sigma_profile

log = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MAX_P_DENOMINATOR = 10**6
MAX_EXHAUSTIVE_SPLIT = 16


def splitmix64(seed: int, counter: int) -> int:
    """The ``counter``-th draw (0-based) of the SplitMix64 stream for ``seed``."""
    z = (seed + (counter + 1) * GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def splitmix64_array(seed: int, n: int) -> np.ndarray:
    z = np.uint64(seed & MASK64) + np.arange(1, n + 1, dtype=np.uint64) * np.uint64(GOLDEN_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class SamplingParams:
    p: Fraction | None = None
    seed: int = 0
    delta: Fraction | None = None

    def __post_init__(self) -> None:
        if self.p is not None:
            p = Fraction(self.p)
            if not 0 < p <= 1:
                raise DomainError(f"p must lie in (0, 1], got {p}")
            object.__setattr__(self, "p", p)
        if self.delta is not None:
            d = Fraction(self.delta)
            if d < 0:
                raise DomainError(f"delta must be nonnegative, got {d}")
            object.__setattr__(self, "delta", d)
        if not 0 <= self.seed <= MASK64:
            raise DomainError("seed must be an unsigned 64-bit integer")


def sample_subset(A, params: SamplingParams) -> GroundSet:
    A = as_ground_set(A)
    if params.p is None:
        raise DomainError("sample_subset needs an explicit p")
    if params.p == 1 or not len(A):
        return A
    p = params.p
    threshold = -(-(p.numerator << 64) // p.denominator)  # ceil(p * 2^64) < 2^64
    keep = splitmix64_array(params.seed, len(A)) < np.uint64(threshold)
    return GroundSet(tuple(x for x, k in zip(A.elements, keep.tolist()) if k), A.label)


@dataclass(frozen=True)
class Violation:
    value: int
    multisets: tuple[Multiset, ...]


def enumerate_violations(A, s: int, g: int, mode=Mode.ADDITIVE, limit: int | None = None) -> list[Violation]:
    """Every value with more than g representations, ascending."""
    A = as_ground_set(A)
    mode = Mode.parse(mode)
    if not len(A):
        return []
    counts = value_counts(A, s, mode, limit)
    bad = sorted(n for n, c in counts.items() if c > g)
    return [Violation(n, tuple(multisets_with_value(A, s, mode, n))) for n in bad]


def choose_deletions(violations: list[Violation], g: int) -> list[int]:
    """One pass of deletions.

    Witnesses are visited in value order. A witness already brought down to
    at most g surviving multisets by earlier deletions in the pass is skipped;
    otherwise the largest element among its surviving multisets is removed.
    """
    deleted: set[int] = set()
    order: list[int] = []
    for v in violations:
        alive = [m for m in v.multisets if deleted.isdisjoint(m)]
        if len(alive) <= g:
            continue
        victim = max(max(m) for m in alive)
        deleted.add(victim)
        order.append(victim)
    return order


@dataclass(frozen=True)
class DeletionPass:
    violations: tuple[Violation, ...]
    deleted: tuple[int, ...]
    remaining: GroundSet


def deletion_passes(A, s: int, g: int, mode=Mode.ADDITIVE, limit: int | None = None) -> Iterator[DeletionPass]:
    current = as_ground_set(A)
    while True:
        viol = enumerate_violations(current, s, g, mode, limit)
        if not viol:
            return
        removed = choose_deletions(viol, g)
        current = current.without(removed)
        yield DeletionPass(tuple(viol), tuple(removed), current)


@dataclass(frozen=True)
class ExtractionOutcome:
    subset: GroundSet
    params: SamplingParams
    deletions: int
    certificate: SidonCertificate
    passes: int
    sampled: int = 0


def _delta_from_c(c: float, s: int, k: int) -> float:
    if k == 2:
        return c / (2 * s)
    if s == 2:
        return c / (2 * k)
    if k >= 3 * s:
        return min((k - 2 * s) * c / k, 1 / s) / (s * k)
    return c / (s * k)


def energy_exponent_gap(A, s: int, k: int, mode=Mode.ADDITIVE) -> float:
    """c = (sk - k + 1/s) - log E_{s,k}(A) / log |A|, floored at 0."""
    A = as_ground_set(A)
    if len(A) < 2:
        return 0.0
    e = energy(A, s, k, mode).value
    c = (s * k - k + 1 / s) - math.log(e) / math.log(len(A))
    return max(0.0, c)


def derive_p(A, s: int, g: int, mode=Mode.ADDITIVE, delta: Fraction | None = None) -> Fraction:
    """p = |A|^(1/s - 1 + delta), as a rational with denominator <= 10^6."""
    A = as_ground_set(A)
    n = len(A)
    if n < 2:
        return Fraction(1)
    k = g + 1
    d = float(delta) if delta is not None else _delta_from_c(energy_exponent_gap(A, s, k, mode), s, k)
    exponent = 1 / s - 1 + d
    if exponent >= 0:
        return Fraction(1)
    p = Fraction(n**exponent).limit_denominator(MAX_P_DENOMINATOR)
    return max(p, Fraction(1, MAX_P_DENOMINATOR))


def extract_sidon(A, s: int, g: int, mode=Mode.ADDITIVE, params: SamplingParams | None = None,
                  limit: int | None = None) -> ExtractionOutcome:
    """Sample, then delete until the survivor is a B_s[g] set, then certify."""
    A = as_ground_set(A)
    mode = Mode.parse(mode)
    if mode is Mode.MULTIPLICATIVE and 0 in A:
        raise DomainError("multiplicative mode requires every element to be nonzero")
    params = params or SamplingParams()
    if params.p is None:
        params = SamplingParams(derive_p(A, s, g, mode, params.delta), params.seed, params.delta)
    sampled = sample_subset(A, params)
    current = sampled
    deletions = passes = 0
    for record in deletion_passes(sampled, s, g, mode, limit):
        passes += 1
        deletions += len(record.deleted)
        current = record.remaining
    cert = measure_g(current, s, mode, limit) if len(current) else SidonCertificate.vacuous(s, mode)
    if cert.g_measured > g:  # pragma: no cover - the loop exits only when certified
        raise AssertionError("extraction produced an uncertified subset")
    log.debug("extract: |A|=%d sampled=%d deleted=%d passes=%d", len(A), len(sampled), deletions, passes)
    return ExtractionOutcome(current, params, deletions, cert, passes, len(sampled))


@dataclass(frozen=True)
class ExpectationReport:
    expected_size: Fraction
    penalty: Fraction
    margin: Fraction
    sigma: dict[int, int] = field(compare=False)


def expected_count_report(A, s: int, k: int, mode=Mode.ADDITIVE, p: Fraction | int = 1,
                          limit: int | None = None) -> ExpectationReport:
    """p|A|, sum_l p^l Sigma_{l,s,k}(A) over l >= 2, and p|A| - 2 * that sum."""
    A = as_ground_set(A)
    p = Fraction(p)
    prof = sigma_profile(A, s, k, mode, limit)
    penalty = sum((p**l * c for l, c in prof.items() if l >= 2), Fraction(0))
    size = p * len(A)
    return ExpectationReport(size, penalty, size - 2 * penalty, prof)


# --------------------------------------------------------------------------
# low-energy decomposition (heuristic, with an exhaustive oracle)

@dataclass(frozen=True)
class DecompositionOutcome:
    B: GroundSet
    C: GroundSet
    e_value: int
    m_value: int
    objective: Fraction
    exhaustive: bool = False
    s: int = 2

    @property
    def normalized(self) -> float:
        """objective / |A|^(1/s); this is max(E, M) / |A|^(2s - 2 + 1/s)."""
        n = len(self.B) + len(self.C)
        return float(self.objective) / n ** (1 / self.s) if n else 0.0


def _objective_key(e: int, m: int) -> tuple[int, int]:
    return max(e, m), e + m


def _split_energies(B: list[int], C: list[int], s: int) -> tuple[int, int]:
    e = energy(B, s, 2, Mode.ADDITIVE).value if B else 0
    m = energy(C, s, 2, Mode.MULTIPLICATIVE).value if C else 0
    return e, m


def _finish(A: GroundSet, B, C, e: int, m: int, s: int, exhaustive: bool) -> DecompositionOutcome:
    n = len(A)
    objective = Fraction(max(e, m), n ** (2 * s - 2)) if n else Fraction(0)
    return DecompositionOutcome(GroundSet.of(B), GroundSet.of(C), e, m, objective, exhaustive, s)


def _exhaustive_s2(free: list[int], pinned_b: list[int]) -> tuple[list[int], list[int], int, int]:
    # Gray-code walk; moving one element updates both energies in O(|A|)
    sums: dict[int, int] = {}
    prods: dict[int, int] = {}
    state = {"e": 0, "m": 0}

    def bump(table: dict[int, int], key: int, delta: int, slot: str) -> None:
        c = table.get(key, 0)
        state[slot] += (2 * c + 1) if delta > 0 else -(2 * c - 1)
        table[key] = c + delta

    def move(x: int, members: list[int], table, op, slot: str, sign: int) -> None:
        for y in members:
            bump(table, op(x, y), sign, slot)
            bump(table, op(x, y), sign, slot)
        bump(table, op(x, x), sign, slot)

    add = lambda a, b: a + b  # noqa: E731
    mul = lambda a, b: a * b  # noqa: E731
    B: list[int] = []
    C: list[int] = []
    for x in pinned_b:
        move(x, B, sums, add, "e", 1)
        B.append(x)
    for x in free:
        move(x, C, prods, mul, "m", 1)
        C.append(x)
    in_b = [False] * len(free)
    best = (_objective_key(state["e"], state["m"]), list(B), list(C), state["e"], state["m"])
    for i in range(1, 1 << len(free)):
        bit = (i & -i).bit_length() - 1
        x = free[bit]
        if in_b[bit]:
            B.remove(x)
            move(x, B, sums, add, "e", -1)
            move(x, C, prods, mul, "m", 1)
            C.append(x)
        else:
            C.remove(x)
            move(x, C, prods, mul, "m", -1)
            move(x, B, sums, add, "e", 1)
            B.append(x)
        in_b[bit] = not in_b[bit]
        key = _objective_key(state["e"], state["m"])
        if key < best[0]:
            best = (key, list(B), list(C), state["e"], state["m"])
    return best[1], best[2], best[3], best[4]


def low_energy_decomposition(A, s: int = 2, trials: int = 4, seed: int = 0,
                             exhaustive: bool = False) -> DecompositionOutcome:
    """Split A = B u C with small E_{s,2}(B) and M_{s,2}(C).

    Local search over bipartitions minimising max(E_{s,2}(B), M_{s,2}(C))
    (ties broken by the sum), restarted from the two trivial splits and
    ``trials`` seeded random ones. Zero can only sit in B. With
    ``exhaustive=True`` (|A| <= 16) every bipartition is scored instead.
    This is a heuristic: it carries no power-saving guarantee.
    """
    A = as_ground_set(A)
    pinned = [x for x in A if x == 0]
    free = [x for x in A if x != 0]
    if exhaustive:
        if len(A) > MAX_EXHAUSTIVE_SPLIT:
            raise DomainError(f"exhaustive split is capped at |A| <= {MAX_EXHAUSTIVE_SPLIT}")
        if s == 2:
            B, C, e, m = _exhaustive_s2(free, pinned)
            return _finish(A, B, C, e, m, s, True)
        best = None
        for mask in range(1 << len(free)):
            B = pinned + [x for i, x in enumerate(free) if mask >> i & 1]
            C = [x for i, x in enumerate(free) if not mask >> i & 1]
            e, m = _split_energies(B, C, s)
            if best is None or _objective_key(e, m) < best[0]:
                best = (_objective_key(e, m), B, C, e, m)
        assert best is not None
        return _finish(A, best[1], best[2], best[3], best[4], s, True)

    rng = random.Random(seed)
    starts = [[False] * len(free), [True] * len(free)]
    starts += [[rng.random() < 0.5 for _ in free] for _ in range(trials)]
    best = None
    for in_b in starts:
        B = pinned + [x for x, b in zip(free, in_b) if b]
        C = [x for x, b in zip(free, in_b) if not b]
        e, m = _split_energies(B, C, s)
        key = _objective_key(e, m)
        improved = True
        while improved:
            improved = False
            for i in rng.sample(range(len(free)), len(free)):
                in_b[i] = not in_b[i]
                B2 = pinned + [x for x, b in zip(free, in_b) if b]
                C2 = [x for x, b in zip(free, in_b) if not b]
                e2, m2 = _split_energies(B2, C2, s)
                key2 = _objective_key(e2, m2)
                if key2 < key:
                    B, C, e, m, key = B2, C2, e2, m2, key2
                    improved = True
                else:
                    in_b[i] = not in_b[i]
        if best is None or key < best[0]:
            best = (key, B, C, e, m)
    assert best is not None
    return _finish(A, best[1], best[2], best[3], best[4], s, False)


# --------------------------------------------------------------------------
# end-to-end pipeline

@dataclass(frozen=True)
class PipelineRun:
    source: str
    side: Mode
    p: Fraction
    seed: int
    size: int


@dataclass(frozen=True)
class PipelineOutcome:
    best: ExtractionOutcome
    side: Mode
    source: str
    exponent: float
    decomposition: DecompositionOutcome
    runs: tuple[PipelineRun, ...]


def theorem_pipeline(A, h: int, g_budget: int = 1, seeds: int = 3, trials: int = 4,
                     seed: int = 0, limit: int | None = None) -> PipelineOutcome:
    """Decompose, extract on both sides, keep the larger certified subset.

    Sources are the decomposition halves (B additively, C multiplicatively)
    and, because the split is only heuristic, A itself in both modes. Each
    source is run once per seed at the energy-derived p and once at p = 1.
    Earlier candidates win ties.
    """
    A = as_ground_set(A)
    if h < 2:
        raise DomainError("the pipeline needs h >= 2")
    dec = low_energy_decomposition(A, h, trials, seed)
    nonzero = A.without([0])
    sources = [
        ("B", Mode.ADDITIVE, dec.B),
        ("C", Mode.MULTIPLICATIVE, dec.C),
        ("A", Mode.ADDITIVE, A),
        ("A", Mode.MULTIPLICATIVE, nonzero),
    ]
    best: tuple[ExtractionOutcome, Mode, str] | None = None
    runs = []
    for name, mode, S in sources:
        if not len(S):
            continue
        p_derived = derive_p(S, h, g_budget, mode)
        schedule = [SamplingParams(p_derived, (seed + i) & MASK64) for i in range(seeds)]
        schedule.append(SamplingParams(Fraction(1), seed & MASK64))
        for params in schedule:
            out = extract_sidon(S, h, g_budget, mode, params, limit)
            runs.append(PipelineRun(name, mode, params.p, params.seed, len(out.subset)))
            if best is None or len(out.subset) > len(best[0].subset):
                best = (out, mode, name)
    if best is None:
        empty = ExtractionOutcome(A, SamplingParams(Fraction(1), seed), 0,
                                  SidonCertificate.vacuous(h, Mode.ADDITIVE), 0)
        best = (empty, Mode.ADDITIVE, "A")
    size = len(best[0].subset)
    exponent = math.log(size) / math.log(len(A)) if len(A) > 1 and size > 0 else 0.0
    return PipelineOutcome(best[0], best[1], best[2], exponent, dec, tuple(runs))
