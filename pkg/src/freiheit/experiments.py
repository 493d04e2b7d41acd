"""Phase-transition experiments.

The critical density for r chosen generators out of m is
d_r = min(1/2, 1 - log_{2m-1}(2r-1)).  Above it, sampled presentations
almost always contain relators that rewrite the remaining generators into
the first r; below it, small subgroup graphs embed without distortion.
Desk-scale surrogates:

* collapse probe: scan relators (up to rotation and inversion) for the form
  x_i * w with w over the first r generators, for every i > r;
* triviality probe: scan for pairs (w, x_i w) both sampled, per generator;
* freeness probe: bounded word-problem search over loop words of a graph.

When the expected relator count is too large to materialize, trials are
simulated exactly on the relevant sub-universes: a Bernoulli subset
restricted to a fixed class is Bernoulli on that class, so the number of
qualifying relators is binomial with an exactly computed class size (the
binomial is drawn by Poisson/normal approximation, the same approximation
the sampler itself uses).  Witnesses on that path are resampled
representatives of the qualifying class, not members of a materialized set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .density import (DensityModel, RelatorSet, _approx_binomial,
                      expected_relator_count, make_relator_set, sample_relator_set)
from .diagrams import TrivialityVerdict, bounded_triviality
from .errors import DomainError
from .seeds import rng_for
from .stallings import LabeledGraph, iter_reduced_loops, wedge_of_words
from .words import (Word, count_cyclically_reduced_upto, cyclic_reduce,
                    min_cyclic_rotation, sample_cyclically_reduced)


class CriticalDensity(NamedTuple):
    d_r: float
    c_r: float


def critical_density(m: int, r: int) -> CriticalDensity:
    """d_r = min(1/2, 1 - c_r) with c_r = log_{2m-1}(2r-1)."""
    if m < 2 or not 1 <= r <= m - 1:
        raise DomainError(f"need m >= 2 and 1 <= r <= m-1, got m={m}, r={r}")
    c_r = math.log(2 * r - 1) / math.log(2 * m - 1)
    return CriticalDensity(min(0.5, 1.0 - c_r), c_r)


def epsilon_d(m: int, r: int, d: float) -> float:
    """(d_r - d) / 5 for d strictly below the critical density."""
    d_r = critical_density(m, r).d_r
    if d >= d_r:
        raise DomainError(f"d={d} is not below the critical density {d_r}")
    return (d_r - d) / 5.0


def fillability_bound(K: int, maxlen: int, m: int, r: int, d: float) -> float:
    """log of maxlen^(10 K^3) * (2m-1)^(-2 eps_d maxlen); vacuous (> 0) for
    small maxlen, eventually decreasing."""
    eps = epsilon_d(m, r, d)
    return 10 * K ** 3 * math.log(maxlen) - 2 * eps * maxlen * math.log(2 * m - 1)


def fillability_crossover(K: int, m: int, r: int, d: float,
                          max_scan: int = 10_000_000) -> int | None:
    """Smallest maxlen past the bound's peak at which it drops below 1.

    The log-bound rises like 10 K^3 log(maxlen) before the linear term wins,
    so the scan starts at the peak 10 K^3 / (2 eps_d ln(2m-1))."""
    eps = epsilon_d(m, r, d)
    c = 2 * eps * math.log(2 * m - 1)
    peak = max(1, math.ceil(10 * K ** 3 / c))
    for maxlen in range(peak, min(max_scan, 100 * peak + 1000)):
        if fillability_bound(K, maxlen, m, r, d) < 0:
            return maxlen
    return None


# ---------------------------------------------------------------------------
# Exact class-size counters (transfer-matrix DP on cyclically reduced strings).


def count_collapse_class(m: int, r: int, gen: int, maxlen: int) -> int:
    """Cyclically reduced words of length <= maxlen containing exactly one
    letter +-gen and otherwise only letters of absolute value <= r.

    Rotating such a relator to start at its big letter exhibits x_gen (or its
    inverse) as a word over the first r generators.
    """
    if not (1 <= r < gen <= m):
        raise DomainError(f"need 1 <= r < gen <= m, got r={r}, gen={gen}, m={m}")
    letters = [x for x in range(-r, r + 1) if x != 0] + [gen, -gen]
    big = {gen, -gen}
    # state: (first, last, used_big) -> count of reduced strings
    state: dict[tuple[int, int, bool], int] = {}
    total = 0
    for x in letters:
        state[(x, x, x in big)] = 1
        if x in big:
            total += 1  # single-letter word (x_gen = 1 outright)
    for _ in range(2, maxlen + 1):
        nxt: dict[tuple[int, int, bool], int] = {}
        for (first, last, used), cnt in state.items():
            for x in letters:
                if x == -last or (x in big and used):
                    continue
                key = (first, x, used or x in big)
                nxt[key] = nxt.get(key, 0) + cnt
        state = nxt
        total += sum(cnt for (first, last, used), cnt in state.items()
                     if used and last != -first)
    return total


def count_triviality_pairs(m: int, gen: int, maxlen: int) -> int:
    """Words w in B_(maxlen-1) such that x_gen * w is also cyclically
    reduced of length <= maxlen (the exact-concatenation pair class)."""
    if not 1 <= gen <= m:
        raise DomainError(f"generator {gen} out of range")
    letters = [x for x in range(-m, m + 1) if x != 0]
    state: dict[tuple[int, int], int] = {}
    total = 0
    for x in letters:
        if x != -gen:  # first- and last-letter constraints coincide at length 1
            state[(x, x)] = 1
            total += 1
    for _ in range(2, maxlen):
        nxt: dict[tuple[int, int], int] = {}
        for (first, last), cnt in state.items():
            for x in letters:
                if x == -last:
                    continue
                key = (first, x)
                nxt[key] = nxt.get(key, 0) + cnt
        state = nxt
        total += sum(cnt for (first, last), cnt in state.items()
                     if last != -first and last != -gen)
    return total


def _class_success_probability(class_size: int, universe_size: int, d: float,
                               per_element_power: int = 1) -> float:
    """P(a Bernoulli(|E|^(d-1)) subset meets a class), with the element
    probability raised to ``per_element_power`` for pair classes."""
    if class_size <= 0:
        return 0.0
    log_p = per_element_power * (d - 1.0) * math.log(universe_size)
    if log_p >= 0:
        return 1.0
    p = math.exp(log_p)
    return -math.expm1(class_size * math.log1p(-p))


def collapse_success_probability(m: int, r: int, maxlen: int, d: float) -> dict[int, float]:
    """Exact per-generator probability that a Bernoulli sample at density d
    contains a collapse-qualifying relator."""
    n = count_cyclically_reduced_upto(m, maxlen)
    return {gen: _class_success_probability(
        count_collapse_class(m, r, gen, maxlen), n, d)
        for gen in range(r + 1, m + 1)}


# ---------------------------------------------------------------------------
# Probes on materialized relator sets.


@dataclass(frozen=True)
class CollapseWitness:
    generator: int
    relator: Word
    rotation: int
    inverted: bool  # big letter carried a minus sign
    substitution: Word  # x_generator equals this word over the first r letters


@dataclass(frozen=True)
class CollapseResult:
    substitutions: dict[int, Word] | None
    witnesses: dict[int, CollapseWitness | None]
    sampled_witnesses: bool = False

    @property
    def success(self) -> bool:
        return self.substitutions is not None


def collapse_probe(relators: RelatorSet, r: int) -> CollapseResult:
    """Scan for relators that are, up to rotation and inversion, of the form
    x_i * w with w over the first r generators, for every i > r."""
    m = relators.m
    if not 1 <= r <= m - 1:
        raise DomainError(f"need 1 <= r <= m-1, got r={r}, m={m}")
    witnesses: dict[int, CollapseWitness | None] = {
        i: None for i in range(r + 1, m + 1)}
    missing = set(witnesses)
    for rel in relators.relators:
        if not missing:
            break
        big = [(pos, x) for pos, x in enumerate(rel.letters) if abs(x) > r]
        if len(big) != 1:
            continue
        pos, x = big[0]
        gen = abs(x)
        if gen not in missing:
            continue
        rotated = rel.letters[pos:] + rel.letters[:pos]
        w = Word(rotated[1:])
        substitution = w.inverse() if x > 0 else w
        witnesses[gen] = CollapseWitness(gen, rel, pos, x < 0, substitution)
        missing.discard(gen)
    if missing:
        return CollapseResult(None, witnesses)
    return CollapseResult({g: wit.substitution for g, wit in witnesses.items()},
                          witnesses)


@dataclass(frozen=True)
class TrivialityWitness:
    generator: int
    relator: Word
    rotation: int
    partner: Word | None  # None when the rotated relator is the bare generator
    partner_rotation: int


@dataclass(frozen=True)
class TrivialityEvidence:
    witnesses: dict[int, TrivialityWitness | None]

    @property
    def all_trivial(self) -> bool:
        return all(w is not None for w in self.witnesses.values())

    @property
    def any_evidence(self) -> bool:
        return any(w is not None for w in self.witnesses.values())


def triviality_probe(relators: RelatorSet) -> TrivialityEvidence:
    """For each generator x_i, search for a pair (w, x_i w), both in the
    relator set up to cyclic rotation; a bare relator x_i also counts."""
    m = relators.m
    by_rotation: dict[tuple[int, ...], tuple[Word, int]] = {}
    for rel in relators.relators:
        canon = min_cyclic_rotation(rel.letters)
        by_rotation.setdefault(canon, (rel, 0))
    witnesses: dict[int, TrivialityWitness | None] = {i: None for i in range(1, m + 1)}
    missing = set(witnesses)
    for rel in relators.relators:
        if not missing:
            break
        letters = rel.letters
        k = len(letters)
        for pos in range(k):
            gen = letters[pos]
            if gen <= 0 or gen not in missing:
                continue
            w = letters[pos + 1:] + letters[:pos]
            if not w:
                witnesses[gen] = TrivialityWitness(gen, rel, pos, None, 0)
                missing.discard(gen)
                continue
            hit = by_rotation.get(min_cyclic_rotation(w))
            if hit is not None:
                partner, _ = hit
                shift = _rotation_offset(partner.letters, w)
                witnesses[gen] = TrivialityWitness(gen, rel, pos, partner, shift)
                missing.discard(gen)
    return TrivialityEvidence(witnesses)


def _rotation_offset(base: tuple[int, ...], target: tuple[int, ...]) -> int:
    for s in range(len(base)):
        if base[s:] + base[:s] == target:
            return s
    return -1


# ---------------------------------------------------------------------------
# Presentation rewriting (generator elimination).


@dataclass(frozen=True)
class RewriteResult:
    relators: RelatorSet
    dropped_trivial: int
    r: int


def rewrite_presentation(relators: RelatorSet, substitutions: dict[int, Word]) -> RewriteResult:
    """Replace every x_i (i > r) by its substitution word over the first r
    generators, freely and cyclically reduce, and deduplicate.

    Output lengths never exceed maxlen * (maxlen - 1).
    """
    m = relators.m
    if not substitutions:
        raise DomainError("no substitutions supplied")
    r = min(substitutions) - 1
    if set(substitutions) != set(range(r + 1, m + 1)):
        raise DomainError(
            f"substitutions must cover generators {r + 1}..{m} exactly")
    for gen, w in substitutions.items():
        if len(w) > relators.maxlen - 1:
            raise DomainError(
                f"substitution for x_{gen} longer than maxlen-1")
        if any(abs(x) > r for x in w.letters):
            raise DomainError(f"substitution for x_{gen} leaves X_{r}")
    max_out = relators.maxlen * max(1, relators.maxlen - 1)
    out: list[Word] = []
    dropped = 0
    for rel in relators.relators:
        expanded: list[int] = []
        for x in rel.letters:
            if abs(x) <= r:
                expanded.append(x)
            else:
                w = substitutions[abs(x)]
                expanded.extend(w.letters if x > 0 else w.inverse().letters)
        reduced = cyclic_reduce(expanded)
        if len(reduced) > max_out:
            raise AssertionError("length bookkeeping violated")
        if reduced.letters:
            out.append(reduced)
        else:
            dropped += 1
    return RewriteResult(make_relator_set(r, max_out, out), dropped, r)


# ---------------------------------------------------------------------------
# Freeness probe.


@dataclass(frozen=True)
class FreenessReport:
    collapse_found: bool
    collapse_word: Word | None
    verdict: TrivialityVerdict | None
    words_checked: int
    budget_exhausted_words: int


def freeness_probe(relators: RelatorSet, graph: LabeledGraph,
                   budget: dict | None = None) -> FreenessReport:
    """Run the bounded word problem on every reduced loop word of the graph
    up to the budgeted length; ``no collapse found`` is not a proof."""
    budget = dict(budget or {})
    word_length = budget.pop("word_length", 6)
    seen: set[tuple[int, ...]] = set()
    checked = 0
    exhausted = 0
    for loop_word in iter_reduced_loops(graph, word_length):
        core = cyclic_reduce(loop_word)
        if not core.letters:
            continue
        key = min_cyclic_rotation(core.letters)
        if key in seen:
            continue
        seen.add(key)
        checked += 1
        verdict = bounded_triviality(relators, core, budget)
        if verdict.status == "trivial":
            return FreenessReport(True, loop_word, verdict, checked, exhausted)
        if verdict.budget_exhausted:
            exhausted += 1
    return FreenessReport(False, None, None, checked, exhausted)


# ---------------------------------------------------------------------------
# Trials and the sweep harness.


@dataclass(frozen=True)
class SweepBudgets:
    materialize_limit: int = 50_000
    freeness_word_length: int = 0  # 0 disables the freeness probe
    freeness_max_steps: int = 200
    freeness_relator_limit: int = 400


@dataclass(frozen=True)
class TransitionConfig:
    m: int
    r: int
    lengths: tuple[int, ...]
    densities: tuple[float, ...]
    trials: int
    kind: str = "bernoulli"
    seed: int = 0
    budgets: SweepBudgets = SweepBudgets()

    def __post_init__(self):
        if self.m < 2:
            raise DomainError(f"m must be >= 2, got {self.m}")
        if not 1 <= self.r <= self.m - 1:
            raise DomainError(f"r must satisfy 1 <= r <= m-1, got r={self.r}, m={self.m}")
        if any(l < 1 for l in self.lengths):
            raise DomainError("lengths must be >= 1")
        if any(not 0.0 <= d <= 1.0 for d in self.densities):
            raise DomainError("densities must lie in [0, 1]")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if self.kind not in ("bernoulli", "count"):
            raise DomainError(f"unknown model kind {self.kind!r}")


@dataclass(frozen=True)
class TrialResult:
    collapse: bool
    trivial: bool
    free_no_collapse: bool | None
    relator_count: float
    fast_path: bool
    collapse_result: CollapseResult | None = None


def _sample_collapse_witness(m: int, r: int, gen: int, maxlen: int, rng) -> CollapseWitness:
    if r == 1:
        sign = rng.choice((1, -1))
        w = Word((sign,) * (maxlen - 1))
    else:
        w = sample_cyclically_reduced(r, maxlen - 1, rng)
    relator = Word((gen,) + w.letters)
    return CollapseWitness(gen, relator, 0, False, w.inverse())


def run_trial(m: int, r: int, maxlen: int, d: float, kind: str, rng,
              budgets: SweepBudgets = SweepBudgets()) -> TrialResult:
    """One sampled presentation, probed; falls back to the exact
    sub-universe simulation when materializing the set is infeasible."""
    expected = expected_relator_count(m, maxlen, d)
    n = count_cyclically_reduced_upto(m, maxlen)
    if expected <= budgets.materialize_limit:
        model = DensityModel(kind, d, 0)
        relators = sample_relator_set(m, maxlen, model, rng,
                                      materialize_limit=10 * budgets.materialize_limit)
        collapse = collapse_probe(relators, r)
        trivial = triviality_probe(relators)
        free = None
        if (budgets.freeness_word_length > 0
                and len(relators) <= budgets.freeness_relator_limit):
            graph = wedge_of_words([Word((i,)) for i in range(1, r + 1)])
            report = freeness_probe(relators, graph, {
                "word_length": budgets.freeness_word_length,
                "max_steps": budgets.freeness_max_steps})
            free = not report.collapse_found
        return TrialResult(collapse.success, trivial.all_trivial, free,
                           float(len(relators)), False, collapse)

    if kind == "count":
        size = float(expected)
    else:
        size = float(_approx_binomial(n, math.exp((d - 1.0) * math.log(n)), rng))

    def class_hits(class_size: int, power: int) -> int:
        if class_size <= 0:
            return 0
        if kind == "bernoulli":
            log_p = power * (d - 1.0) * math.log(n)
            return _approx_binomial(class_size, math.exp(log_p), rng)
        # uniform count: hypergeometric-like; binomial approximation
        frac = math.exp(power * (math.log(max(size, 1e-300)) - math.log(n)))
        return _approx_binomial(class_size, min(1.0, frac), rng)

    witnesses: dict[int, CollapseWitness | None] = {}
    collapse_ok = True
    for gen in range(r + 1, m + 1):
        hits = class_hits(count_collapse_class(m, r, gen, maxlen), 1)
        if hits >= 1:
            witnesses[gen] = _sample_collapse_witness(m, r, gen, maxlen, rng)
        else:
            witnesses[gen] = None
            collapse_ok = False
    trivial_ok = True
    for gen in range(1, m + 1):
        pair_hits = class_hits(count_triviality_pairs(m, gen, maxlen), 2)
        single = class_hits(1, 1)
        if pair_hits + single < 1:
            trivial_ok = False
            break
    subs = ({g: w.substitution for g, w in witnesses.items()}
            if collapse_ok else None)
    collapse_res = CollapseResult(subs, witnesses, sampled_witnesses=True)
    return TrialResult(collapse_ok, trivial_ok, None, size, True, collapse_res)


SWEEP_COLUMNS = ("m", "r", "l", "d", "trials", "collapse_freq", "trivial_freq",
                 "free_freq", "mean_relator_count", "seed")


def _run_cell(args) -> dict:
    cfg, li, di = args
    maxlen = cfg.lengths[li]
    d = cfg.densities[di]
    collapse = trivial = 0
    free_ok = 0
    free_ran = 0
    sizes = 0.0
    for t in range(cfg.trials):
        rng = rng_for(cfg.seed, "sweep", li, di, t)
        res = run_trial(cfg.m, cfg.r, maxlen, d, cfg.kind, rng, cfg.budgets)
        collapse += res.collapse
        trivial += res.trivial
        sizes += res.relator_count
        if res.free_no_collapse is not None:
            free_ran += 1
            free_ok += res.free_no_collapse
    return {
        "m": cfg.m, "r": cfg.r, "l": maxlen, "d": d, "trials": cfg.trials,
        "collapse_freq": collapse / cfg.trials,
        "trivial_freq": trivial / cfg.trials,
        "free_freq": (free_ok / free_ran) if free_ran else float("nan"),
        "mean_relator_count": sizes / cfg.trials,
        "seed": cfg.seed,
    }


def transition_sweep(cfg: TransitionConfig, jobs: int = 1) -> list[dict]:
    """One row per (length, density) cell, in grid order; bit-reproducible
    for a fixed config and seed regardless of parallelism."""
    cells = [(cfg, li, di) for li in range(len(cfg.lengths))
             for di in range(len(cfg.densities))]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_cell, cells))
    return [_run_cell(cell) for cell in cells]
