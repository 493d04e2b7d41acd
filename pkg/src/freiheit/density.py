"""Random subsets at density d and random relator sets.

Two permutation-invariant models over a finite universe E:

* Bernoulli: every element included independently with probability
  p = |E|^(d-1), defined for 0 < d <= 1.
* UniformCount: a uniformly chosen subset of exactly floor(|E|^d) elements,
  defined for d in [0, 1].

For small explicit universes the Bernoulli model flips one coin per element.
The relator universe B_l is far too large to enumerate for interesting l, so
there the subset size is drawn from a normal approximation of
Binomial(|E|, p) (Poisson for small means) and that many distinct elements
are then drawn uniformly by index; conditioned on its size a Bernoulli
subset is exactly a uniform subset of that size, so only the size law is
approximate.

The density of a subset A of E is log_|E|(|A|), with -inf for the empty set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

from .errors import DomainError, FeasibilityError
from .seeds import as_rng
from .words import Word, count_cyclically_reduced_upto, word_tables

ModelKind = Literal["bernoulli", "count"]

EXACT_FLIP_LIMIT = 100_000
MATERIALIZE_LIMIT = 200_000


@dataclass(frozen=True)
class DensityModel:
    """A named random-subset model at density d with its master seed."""

    kind: ModelKind
    d: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("bernoulli", "count"):
            raise DomainError(f"unknown model kind {self.kind!r}")
        if not 0.0 <= self.d <= 1.0:
            raise DomainError(f"density must be in [0, 1], got {self.d}")
        if self.kind == "bernoulli" and self.d <= 0.0:
            raise DomainError("the Bernoulli model requires d > 0")


@dataclass(frozen=True)
class RelatorSet:
    """A deduplicated set of nonempty cyclically reduced words of length <= maxlen."""

    m: int
    maxlen: int
    relators: tuple[Word, ...]
    provenance: DensityModel | None = field(default=None, compare=False)

    def __post_init__(self):
        seen = set()
        for w in self.relators:
            if not w.letters:
                raise DomainError("relators must be nonempty")
            if len(w) > self.maxlen:
                raise DomainError(f"relator of length {len(w)} exceeds maxlen {self.maxlen}")
            if not w.is_cyclically_reduced():
                raise DomainError(f"relator {w.text()} is not cyclically reduced")
            if max(abs(x) for x in w.letters) > self.m:
                raise DomainError(f"relator {w.text()} uses letters beyond m={self.m}")
            if w.letters in seen:
                raise DomainError(f"duplicate relator {w.text()}")
            seen.add(w.letters)

    def __len__(self) -> int:
        return len(self.relators)

    def __iter__(self):
        return iter(self.relators)


def make_relator_set(m: int, maxlen: int, words: Iterable[Word | tuple[int, ...]],
                     provenance: DensityModel | None = None) -> RelatorSet:
    """Deduplicate and sort words into a RelatorSet."""
    uniq = {(len(w), tuple(w)) for w in words if len(tuple(w)) > 0}
    rels = tuple(Word(t) for _, t in sorted(uniq))
    return RelatorSet(m, maxlen, rels, provenance)


def inclusion_probability(universe_size: int, d: float) -> float:
    """p = |E|^(d-1), computed in the log domain."""
    if universe_size < 2:
        raise DomainError("universe must have at least 2 elements")
    if not 0.0 < d <= 1.0:
        raise DomainError(f"Bernoulli density must satisfy 0 < d <= 1, got {d}")
    return math.exp((d - 1.0) * math.log(universe_size))


def floor_power(n: int, d: float) -> int:
    """floor(n^d) for a possibly huge integer n; exact at d in {0, 1}."""
    if d == 0.0:
        return 1
    if d == 1.0:
        return n
    return min(n, math.floor(math.exp(d * math.log(n))))


def bernoulli_subset(elements: Sequence, d: float, seed_or_rng) -> list:
    """Exact Bernoulli sampling over an explicit universe: one coin per element."""
    rng = as_rng(seed_or_rng)
    p = inclusion_probability(len(elements), d)
    return [e for e in elements if rng.random() < p]


def _approx_binomial(n: int, p: float, rng) -> int:
    """Size of a Bernoulli(p) subset of n elements, approximated by its law.

    Poisson (Knuth's product method, exact for the Poisson law) when the mean
    is small, normal approximation otherwise; clamped to [0, n].
    """
    mean = n * p if n < 1 << 52 else math.exp(math.log(n) + math.log(p))
    if mean < 50.0:
        limit = math.exp(-mean)
        k, prod = 0, rng.random()
        while prod > limit:
            k += 1
            prod *= rng.random()
        return min(k, n)
    sigma = math.sqrt(mean * max(0.0, 1.0 - p))
    k = round(rng.gauss(mean, sigma))
    return max(0, min(n, k))


def bernoulli_index_subset(universe_size: int, d: float, seed_or_rng) -> list[int]:
    """Bernoulli subset of range(universe_size), returned as a sorted index list.

    Exact per-element flips up to EXACT_FLIP_LIMIT; beyond that the size is
    drawn from the approximate binomial law and the members uniformly.
    """
    rng = as_rng(seed_or_rng)
    p = inclusion_probability(universe_size, d)
    if universe_size <= EXACT_FLIP_LIMIT:
        return [i for i in range(universe_size) if rng.random() < p]
    k = _approx_binomial(universe_size, p, rng)
    return sorted(rng.sample(range(universe_size), k))


def uniform_count_subset(elements: Sequence, d: float, seed_or_rng) -> list:
    """A uniformly random subset of exactly floor(|E|^d) elements."""
    rng = as_rng(seed_or_rng)
    k = floor_power(len(elements), d)
    return rng.sample(list(elements), k)


def uniform_count_index_subset(universe_size: int, d: float, seed_or_rng) -> list[int]:
    rng = as_rng(seed_or_rng)
    k = floor_power(universe_size, d)
    return sorted(rng.sample(range(universe_size), k))


def density_estimate(subset_size: int, universe_size: int) -> float:
    """log_|E|(|A|); -inf for the empty subset."""
    if universe_size < 2:
        raise DomainError("universe must have at least 2 elements")
    if subset_size < 0:
        raise DomainError("subset size cannot be negative")
    if subset_size == 0:
        return float("-inf")
    return math.log(subset_size) / math.log(universe_size)


def densable_window_flag(subset_size: int, universe_size: int, d: float, eps: float) -> bool:
    """Whether |E|^(d-eps) <= |A| <= |E|^(d+eps): the conditioning event of
    density estimation, exposed per trial."""
    ln = math.log(universe_size)
    lo = math.exp((d - eps) * ln)
    hi = math.exp((d + eps) * ln)
    return lo <= subset_size <= hi


def sample_relator_indices(m: int, maxlen: int, model: DensityModel, seed_or_rng) -> list[int]:
    """Indices into the length-then-lex order of B_maxlen."""
    n = count_cyclically_reduced_upto(m, maxlen)
    if model.kind == "bernoulli":
        return bernoulli_index_subset(n, model.d, seed_or_rng)
    return uniform_count_index_subset(n, model.d, seed_or_rng)


def expected_relator_count(m: int, maxlen: int, d: float) -> float:
    """|B_maxlen|^d, the concentration point of |R|."""
    n = count_cyclically_reduced_upto(m, maxlen)
    return math.exp(d * math.log(n))


def sample_relator_set(m: int, maxlen: int, model: DensityModel, seed_or_rng,
                       *, materialize_limit: int = MATERIALIZE_LIMIT) -> RelatorSet:
    """Materialize a sampled relator set; guarded against huge expected sizes."""
    expected = expected_relator_count(m, maxlen, model.d)
    if expected > materialize_limit:
        raise FeasibilityError(
            f"expected relator count {expected:.3g} exceeds materialization "
            f"limit {materialize_limit}; use the statistical trial path",
            estimate=expected,
        )
    tables = word_tables(m, maxlen)
    indices = sample_relator_indices(m, maxlen, model, seed_or_rng)
    words = tuple(tables.unrank(i) for i in indices)
    return RelatorSet(m, maxlen, words, model)


@dataclass(frozen=True)
class IntersectionRow:
    maxlen: int
    d_a: float
    d_b: float
    trial: int
    size_a: int
    size_b: int
    size_intersection: int
    density_est: float


def intersection_experiment(d_a: float, d_b: float, m: int, lengths: Iterable[int],
                            trials: int, seed: int,
                            kind: ModelKind = "bernoulli") -> list[IntersectionRow]:
    """Sample independent subsets A, B of B_l and report |A ∩ B| per trial.

    When d_a + d_b > 1 the intersection densities trend to d_a + d_b - 1;
    when d_a + d_b < 1 the intersection is almost always empty.
    """
    from .seeds import rng_for

    rows = []
    for li, maxlen in enumerate(lengths):
        n = count_cyclically_reduced_upto(m, maxlen)
        for t in range(trials):
            rng_a = rng_for(seed, "intersection", li, t, "A")
            rng_b = rng_for(seed, "intersection", li, t, "B")
            if kind == "bernoulli":
                a = bernoulli_index_subset(n, d_a, rng_a)
                b = bernoulli_index_subset(n, d_b, rng_b)
            else:
                a = uniform_count_index_subset(n, d_a, rng_a)
                b = uniform_count_index_subset(n, d_b, rng_b)
            inter = set(a) & set(b)
            rows.append(IntersectionRow(
                maxlen, d_a, d_b, t, len(a), len(b), len(inter),
                density_estimate(len(inter), n)))
    return rows


def relator_words_from_indices(m: int, maxlen: int, indices: Iterable[int]) -> list[Word]:
    tables = word_tables(m, maxlen)
    return [tables.unrank(i) for i in indices]


__all__ = [
    "DensityModel", "RelatorSet", "IntersectionRow", "ModelKind",
    "make_relator_set", "inclusion_probability", "floor_power",
    "bernoulli_subset", "bernoulli_index_subset",
    "uniform_count_subset", "uniform_count_index_subset",
    "density_estimate", "densable_window_flag",
    "sample_relator_indices", "sample_relator_set", "expected_relator_count",
    "intersection_experiment", "relator_words_from_indices",
]
