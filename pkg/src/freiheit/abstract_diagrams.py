"""Abstract (distortion) van Kampen diagrams.

Faces carry signed integer placeholders instead of relators; faces sharing
one placeholder must have equal boundary length.  Every undirected edge is
decorated by the abstract letters (i, j) of its adjacent face occurrences,
with a direction.  In a reduced, fillable diagram all decorations on one
edge are distinct letters, the lexicographically least of them names the
edge's preferred face, and each abstract letter is classified as
free-to-fill, semi-free-to-fill (it decorates an edge of the boundary
subpath p) or not free-to-fill.

Elementary segments cut the cyclic letter sequence of each abstract relator
at positions whose diagram vertices are distinguished (degree >= 3, a face
starting point, or an endpoint of p); letters inside one segment share one
class, which is what makes segment-by-segment filling counts multiply.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import math
from typing import Iterator, Sequence

from .complexes import (PlanarComplex, canonical_map_code, mirror_cycle,
                        rotation_next)
from .diagrams import VanKampenDiagram
from .errors import DomainError, FeasibilityError, NotFillableError
from .stallings import LabeledGraph, is_readable
from .words import Word

MAX_ABSTRACT_FACES = 2
MAX_ABSTRACT_LENGTH = 6
FILLING_PRODUCT_LIMIT = 2_000_000


@dataclass(frozen=True)
class AbstractDiagram:
    """face_labels[i] = (abstract index >= 1, sign)."""

    complex: PlanarComplex
    face_labels: tuple[tuple[int, int], ...]

    def __post_init__(self):
        lengths: dict[int, int] = {}
        for (idx, sign), cycle in zip(self.face_labels, self.complex.faces):
            if idx < 1 or sign not in (1, -1):
                raise DomainError(f"bad abstract face label ({idx}, {sign})")
            if idx in lengths and lengths[idx] != len(cycle):
                raise DomainError(
                    f"faces labeled {idx} have unequal boundary lengths")
            lengths.setdefault(idx, len(cycle))

    @property
    def num_faces(self) -> int:
        return len(self.face_labels)

    def indices(self) -> list[int]:
        return sorted({idx for idx, _ in self.face_labels})

    def lengths(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (idx, _), cycle in zip(self.face_labels, self.complex.faces):
            out[idx] = len(cycle)
        return out

    def max_length(self) -> int:
        return max(self.lengths().values())

    def positive_boundary(self, face_pos: int) -> tuple[int, ...]:
        cycle = self.complex.faces[face_pos]
        _, sign = self.face_labels[face_pos]
        return cycle if sign > 0 else mirror_cycle(cycle)

    def boundary_length(self) -> int:
        return len(self.complex.outer)


@dataclass(frozen=True)
class AbstractDistortionDiagram:
    base: AbstractDiagram
    p_start: int = 0
    p_length: int = 0

    def __post_init__(self):
        n = self.base.boundary_length()
        if not 0 <= self.p_length <= n:
            raise DomainError(f"p length {self.p_length} out of range 0..{n}")
        if not 0 <= self.p_start < max(n, 1):
            raise DomainError(f"p start {self.p_start} out of range")

    def p_darts(self) -> tuple[int, ...]:
        outer = self.base.complex.outer
        n = len(outer)
        return tuple(outer[(self.p_start + i) % n] for i in range(self.p_length))

    def p_edges(self) -> frozenset[int]:
        return frozenset(d >> 1 for d in self.p_darts())

    def p_endpoints(self) -> frozenset[int]:
        if self.p_length == 0:
            return frozenset()
        darts = self.p_darts()
        c = self.base.complex
        return frozenset({c.tail(darts[0]), c.head(darts[-1])})


@dataclass(frozen=True)
class DecorationEntry:
    letter: tuple[int, int]
    dart: int
    face_pos: int


def decorate(ad: AbstractDiagram) -> dict[int, list[DecorationEntry]]:
    """Per undirected edge, one decoration per adjacent face occurrence.

    An edge with no decoration is isolated, which is rejected; the total
    number of decorations is the sum of face boundary lengths.
    """
    decorations: dict[int, list[DecorationEntry]] = {
        e: [] for e in range(ad.complex.num_edges)}
    for fpos, (idx, _) in enumerate(ad.face_labels):
        for j, dart in enumerate(ad.positive_boundary(fpos), start=1):
            decorations[dart >> 1].append(DecorationEntry((idx, j), dart, fpos))
    for e, entries in decorations.items():
        if not entries:
            raise DomainError(f"isolated edge {e}")
        entries.sort(key=lambda rec: rec.letter)
    return decorations


FREE = "free-to-fill"
SEMI = "semi-free-to-fill"
NOT = "not-free-to-fill"


@dataclass(frozen=True)
class LetterClassification:
    classes: dict[tuple[int, int], str]
    alpha: dict[int, int]
    eta: dict[int, int]
    eta_prime: dict[int, int]
    lengths: dict[int, int]

    def not_free(self) -> set[tuple[int, int]]:
        return {letter for letter, cls in self.classes.items() if cls == NOT}


def check_fillable_shape(ad: AbstractDiagram) -> dict[int, list[DecorationEntry]]:
    """Reject single-edge certificates of unfillability; returns the
    decoration table.

    Two patterns force a contradiction on any filling word: an edge
    decorated twice by one abstract letter (same direction is a reducible
    pair, opposite directions force a letter equal to its own inverse), and
    an edge decorated by cyclically consecutive letters (i, j), (i, j+1) of
    one relator with opposite directions, which forces the filling word to
    cancel at position j and so never be (cyclically) reduced.
    """
    decorations = decorate(ad)
    lengths = ad.lengths()
    for e, entries in decorations.items():
        letters = [rec.letter for rec in entries]
        if len(letters) != len(set(letters)):
            raise NotFillableError(
                f"edge {e} decorated twice by abstract letter {letters[0]}")
        for a in range(len(entries)):
            for b in range(len(entries)):
                if a == b:
                    continue
                (ia, ja), (ib, jb) = entries[a].letter, entries[b].letter
                if ia != ib or entries[a].dart == entries[b].dart:
                    continue
                if jb == ja % lengths[ia] + 1:
                    raise NotFillableError(
                        f"edge {e} forces letter {ja}+1 of relator {ia} to "
                        f"cancel letter {ja}")
    return decorations


def classify(add: AbstractDistortionDiagram) -> LetterClassification:
    ad = add.base
    decorations = check_fillable_shape(ad)
    p_edges = add.p_edges()

    edge_min: dict[int, tuple[int, int]] = {
        e: entries[0].letter for e, entries in decorations.items()}
    decorated_edges: dict[tuple[int, int], set[int]] = {}
    for e, entries in decorations.items():
        for rec in entries:
            decorated_edges.setdefault(rec.letter, set()).add(e)

    lengths = ad.lengths()
    classes: dict[tuple[int, int], str] = {}
    for idx, li in lengths.items():
        for j in range(1, li + 1):
            letter = (idx, j)
            edges = decorated_edges[letter]
            if any(edge_min[e] != letter for e in edges):
                classes[letter] = NOT
            elif edges & p_edges:
                classes[letter] = SEMI
            else:
                classes[letter] = FREE

    alpha: dict[int, int] = {idx: 0 for idx in lengths}
    for idx, _ in ad.face_labels:
        alpha[idx] += 1
    eta = {idx: sum(1 for j in range(1, lengths[idx] + 1)
                    if classes[(idx, j)] == FREE) for idx in lengths}
    eta_prime = {idx: sum(1 for j in range(1, lengths[idx] + 1)
                          if classes[(idx, j)] == SEMI) for idx in lengths}
    return LetterClassification(classes, alpha, eta, eta_prime, lengths)


def edge_partition(ad: AbstractDiagram) -> dict[int, set[int]]:
    """E_f: undirected edges preferring each face occurrence; a partition."""
    decorations = check_fillable_shape(ad)
    parts: dict[int, set[int]] = {fpos: set() for fpos in range(ad.num_faces)}
    for e, entries in decorations.items():
        parts[entries[0].face_pos].add(e)
    return parts


@dataclass(frozen=True)
class ElementarySegment:
    relator: int
    start: int  # 1-based position of the first letter
    letters: tuple[tuple[int, int], ...]
    cls: str | None  # uniform class, or None if mixed (an invariant failure)


def distinguished_vertices(add: AbstractDistortionDiagram) -> set[int]:
    c = add.base.complex
    degs = [0] * c.num_vertices
    for v in c.dart_vertex:
        degs[v] += 1
    out = {v for v in range(c.num_vertices) if degs[v] >= 3}
    for fpos in range(add.base.num_faces):
        out.add(c.tail(add.base.positive_boundary(fpos)[0]))
    out |= add.p_endpoints()
    return out


def elementary_segments(add: AbstractDistortionDiagram,
                        relator: int) -> list[ElementarySegment]:
    """Cut positions 1..l_i cyclically at marked vertices.

    The vertex before position j is marked when some face occurrence labeled
    i has a distinguished diagram vertex there; the face starting point
    always marks position 1.
    """
    ad = add.base
    lengths = ad.lengths()
    if relator not in lengths:
        raise DomainError(f"no abstract relator {relator}")
    classification = classify(add)
    special = distinguished_vertices(add)
    li = lengths[relator]
    c = ad.complex

    marked: set[int] = set()
    for fpos, (idx, _) in enumerate(ad.face_labels):
        if idx != relator:
            continue
        boundary = ad.positive_boundary(fpos)
        for j in range(1, li + 1):
            if c.tail(boundary[j - 1]) in special:
                marked.add(j)
    marks = sorted(marked)
    segments = []
    for a, start in enumerate(marks):
        end = marks[(a + 1) % len(marks)]
        span = (end - start) % li or li
        letters = tuple((relator, (start - 1 + t) % li + 1) for t in range(span))
        kinds = {classification.classes[letter] for letter in letters}
        segments.append(ElementarySegment(
            relator, start, letters, kinds.pop() if len(kinds) == 1 else None))
    return segments


@dataclass(frozen=True)
class CountReport:
    """Both sides of the counting inequalities.

    ``per_face_ok`` and ``global_ok`` are the literal forms: for every face
    f labeled i, eta'_i <= |E_f ∩ p| and eta_i <= |E_f \\ p|, and the
    alpha-weighted global sums.  These can fail when one abstract relator
    labels several faces that share an edge: a letter minimal on all its
    edges may take its p-certificate from one face while another face of
    the same relator contributes nothing (two bigons over one relator glued
    along an edge already do this).  The occurrence-summed forms
    (``per_relator_ok``: eta'_i bounded by the sum of |E_f ∩ p| over all
    faces labeled i, and the unweighted global sums) are always valid and
    reported alongside.
    """

    sum_alpha_eta_prime: int
    sum_alpha_eta: int
    p_edges: int
    total_edges: int
    per_face_ok: bool
    global_ok: bool
    per_relator_ok: bool
    global_unweighted_ok: bool


def count_inequalities(add: AbstractDistortionDiagram) -> CountReport:
    ad = add.base
    cl = classify(add)
    parts = edge_partition(ad)
    p_edges = add.p_edges()

    per_face_ok = True
    in_p_by_relator: dict[int, int] = {i: 0 for i in cl.alpha}
    off_p_by_relator: dict[int, int] = {i: 0 for i in cl.alpha}
    for fpos, (idx, _) in enumerate(ad.face_labels):
        ef = parts[fpos]
        in_p = len(ef & p_edges)
        in_p_by_relator[idx] += in_p
        off_p_by_relator[idx] += len(ef) - in_p
        if cl.eta_prime[idx] > in_p or cl.eta[idx] > len(ef) - in_p:
            per_face_ok = False

    per_relator_ok = all(
        cl.eta_prime[i] <= in_p_by_relator[i]
        and cl.eta[i] <= off_p_by_relator[i] for i in cl.alpha)

    s1 = sum(cl.alpha[i] * cl.eta_prime[i] for i in cl.alpha)
    s2 = sum(cl.alpha[i] * cl.eta[i] for i in cl.alpha)
    total = ad.complex.num_edges
    global_ok = s1 <= len(p_edges) and s2 <= total - len(p_edges)
    unweighted_ok = (sum(cl.eta_prime.values()) <= len(p_edges)
                     and sum(cl.eta.values()) <= total - len(p_edges))
    return CountReport(s1, s2, len(p_edges), total, per_face_ok, global_ok,
                       per_relator_ok, unweighted_ok)


# ---------------------------------------------------------------------------
# Between concrete and abstract diagrams.


def underlying_abstract(d: VanKampenDiagram) -> tuple[AbstractDiagram, list[int]]:
    """Relators renamed 1..k in first-use order; returns the diagram and the
    relator indices (1-based, into the original set) in that order."""
    rename: dict[int, int] = {}
    order: list[int] = []
    labels = []
    for idx, sign in d.face_labels:
        if idx not in rename:
            rename[idx] = len(rename) + 1
            order.append(idx)
        labels.append((rename[idx], sign))
    return AbstractDiagram(d.complex, tuple(labels)), order


def fill(ad: AbstractDiagram, relator_words: Sequence[Word]) -> VanKampenDiagram:
    """Fill abstract relator i with relator_words[i-1]; raises DomainError if
    the words are inconsistent with the shared edges."""
    lengths = ad.lengths()
    for idx, li in lengths.items():
        if idx > len(relator_words):
            raise DomainError(f"no word supplied for abstract relator {idx}")
        if len(relator_words[idx - 1]) != li:
            raise DomainError(
                f"abstract relator {idx} has length {li}, word has "
                f"{len(relator_words[idx - 1])}")
    labels: dict[int, int] = {}
    for fpos, (idx, _) in enumerate(ad.face_labels):
        word = relator_words[idx - 1].letters
        for j, dart in enumerate(ad.positive_boundary(fpos)):
            x = word[j]
            for dd, val in ((dart, x), (dart ^ 1, -x)):
                if labels.setdefault(dd, val) != val:
                    raise DomainError("words do not fill this diagram")
    if len(labels) != ad.complex.num_darts:
        raise DomainError("fill left unlabeled darts (isolated edge)")
    dart_labels = tuple(labels[i] for i in range(ad.complex.num_darts))
    return VanKampenDiagram(ad.complex, dart_labels, ad.face_labels)


# ---------------------------------------------------------------------------
# Fillings enumeration.


def _cyc_words_of_length(m: int, length: int) -> list[Word]:
    letters = list(range(-m, 0)) + list(range(1, m + 1))
    out: list[Word] = []

    def rec(prefix: list[int]):
        if len(prefix) == length:
            if length == 1 or prefix[0] != -prefix[-1]:
                out.append(Word(tuple(prefix)))
            return
        for x in letters:
            if prefix and x == -prefix[-1]:
                continue
            prefix.append(x)
            rec(prefix)
            prefix.pop()

    rec([])
    return out


def fillings_with_boundary(ad: AbstractDiagram, m: int,
                           *, limit: int = FILLING_PRODUCT_LIMIT
                           ) -> list[tuple[tuple[Word, ...], tuple[int, ...]]]:
    """All tuples of distinct cyclically reduced words consistent with the
    diagram, paired with the outer-walk labels they induce."""
    if ad.num_faces > MAX_ABSTRACT_FACES:
        raise FeasibilityError(
            f"filling enumeration capped at {MAX_ABSTRACT_FACES} faces")
    lengths = ad.lengths()
    if any(li > MAX_ABSTRACT_LENGTH for li in lengths.values()):
        raise FeasibilityError(
            f"filling enumeration capped at face length {MAX_ABSTRACT_LENGTH}")
    indices = ad.indices()
    if indices != list(range(1, len(indices) + 1)):
        raise DomainError("abstract indices must be 1..k")
    pools = {idx: _cyc_words_of_length(m, lengths[idx]) for idx in indices}
    estimate = math.prod(len(pool) for pool in pools.values())
    if estimate > limit:
        raise FeasibilityError(
            f"filling search space {estimate} exceeds limit {limit}",
            estimate=estimate)

    # Positions of each abstract letter on each dart.
    dart_letter: dict[int, list[tuple[int, int, int]]] = {}
    for fpos, (idx, _) in enumerate(ad.face_labels):
        for j, dart in enumerate(ad.positive_boundary(fpos)):
            dart_letter.setdefault(dart, []).append((idx, j, 1))
            dart_letter.setdefault(dart ^ 1, []).append((idx, j, -1))

    outer = ad.complex.outer
    results: list[tuple[tuple[Word, ...], tuple[int, ...]]] = []

    def assign(tuple_words: list[Word]) -> tuple[int, ...] | None:
        labels: dict[int, int] = {}
        for dart, refs in dart_letter.items():
            for idx, j, direction in refs:
                val = direction * tuple_words[idx - 1].letters[j]
                if labels.setdefault(dart, val) != val:
                    return None
        return tuple(labels[d] for d in outer)

    for combo in product(*(pools[idx] for idx in indices)):
        if len({w.letters for w in combo}) != len(combo):
            continue
        boundary = assign(list(combo))
        if boundary is None:
            continue
        results.append((tuple(combo), boundary))
    return results


def enumerate_fillings(add: AbstractDistortionDiagram, m: int, maxlen: int,
                       graph: LabeledGraph) -> list[tuple[Word, ...]]:
    """Fillings of (D, p) by (B_maxlen, graph): distinct cyclically reduced
    relators inducing consistent edge labels with the label of p readable on
    the graph."""
    if add.base.max_length() > maxlen:
        raise DomainError("face length exceeds maxlen")
    n = len(add.base.complex.outer)
    out = []
    for combo, boundary in fillings_with_boundary(add.base, m):
        p_word = tuple(boundary[(add.p_start + i) % n] for i in range(add.p_length))
        if is_readable(graph, Word(p_word)):
            out.append(combo)
    return out


def filling_bound_exact(add: AbstractDistortionDiagram, m: int, r: int,
                        gamma_size: int) -> Fraction:
    """(2m/(2m-1))^k (2|G|)^(3|D|^2 k) (2m-1)^(sum eta) (2r-1)^(sum eta')."""
    cl = classify(add)
    k = len(cl.alpha)
    size = add.base.num_faces
    sum_eta = sum(cl.eta.values())
    sum_eta_p = sum(cl.eta_prime.values())
    return (Fraction(2 * m, 2 * m - 1) ** k
            * Fraction(2 * gamma_size) ** (3 * size * size * k)
            * Fraction(2 * m - 1) ** sum_eta
            * Fraction(2 * r - 1) ** sum_eta_p)


def filling_bound(add: AbstractDistortionDiagram, m: int, r: int,
                  gamma_size: int) -> float:
    """Natural log of the filling-count bound."""
    cl = classify(add)
    k = len(cl.alpha)
    size = add.base.num_faces
    return (k * (math.log(2 * m) - math.log(2 * m - 1))
            + 3 * size * size * k * math.log(2 * gamma_size)
            + sum(cl.eta.values()) * math.log(2 * m - 1)
            + sum(cl.eta_prime.values()) * math.log(max(2 * r - 1, 1)))


# ---------------------------------------------------------------------------
# Enumeration of abstract diagrams (arc gluings) and distortion diagrams.


def _one_face_abstract(length: int, sign: int = 1) -> AbstractDiagram:
    dart_vertex = []
    for i in range(length):
        dart_vertex += [i, (i + 1) % length]
    cycle = tuple(2 * i for i in range(length))
    outer = tuple((2 * i) ^ 1 for i in reversed(range(length)))
    c = PlanarComplex(length, tuple(dart_vertex), (cycle,), outer)
    return AbstractDiagram(c, ((1, sign),))


def abstract_is_reduced(ad: AbstractDiagram) -> bool:
    by_idx: dict[int, list[int]] = {}
    for fpos, (idx, _) in enumerate(ad.face_labels):
        by_idx.setdefault(idx, []).append(fpos)
    for members in by_idx.values():
        boundaries = [{d: j for j, d in enumerate(ad.positive_boundary(f))}
                      for f in members]
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                for dart, ja in boundaries[a].items():
                    if boundaries[b].get(dart) == ja:
                        return False
    return True


def _abstract_fillable_shaped(ad: AbstractDiagram) -> bool:
    try:
        check_fillable_shape(ad)
        return True
    except (NotFillableError, DomainError):
        return False


def _abstract_keys(ad: AbstractDiagram):
    infos = [((idx, sign), len(cycle))
             for (idx, sign), cycle in zip(ad.face_labels, ad.complex.faces)]
    mirror_infos = [((idx, -sign), period) for (idx, sign), period in infos]
    iso = canonical_map_code(ad.complex, infos, mirror_face_infos=mirror_infos,
                             relabel_first_use=True)
    labeled = canonical_map_code(ad.complex, infos, use_mirror=False)
    return iso, labeled


def _abstract_glue_candidates(ad: AbstractDiagram, maxlen: int) -> Iterator[AbstractDiagram]:
    c = ad.complex
    outer = c.outer
    n = len(outer)
    lengths = ad.lengths()
    k = len(lengths)
    for length in range(1, maxlen + 1):
        label_choices = [(idx, sign) for idx in lengths if lengths[idx] == length
                         for sign in (1, -1)]
        label_choices += [(k + 1, 1), (k + 1, -1)]
        for a in range(n):
            for s in range(1, min(length - 1, n) + 1):
                arc = tuple(outer[(a + i) % n] for i in range(s))
                for omega in range(length):
                    for label in label_choices:
                        yield _build_abstract_glued(ad, label, length, arc, a, s, omega)


def _build_abstract_glued(ad: AbstractDiagram, label: tuple[int, int], length: int,
                          arc: tuple[int, ...], a: int, s: int, omega: int
                          ) -> AbstractDiagram:
    c = ad.complex
    outer = c.outer
    n = len(outer)
    fresh_count = length - s
    nd = c.num_darts
    nv = c.num_vertices
    dart_vertex = list(c.dart_vertex)
    v_start = c.head(arc[-1])
    v_end = c.tail(arc[0])
    fresh = []
    prev = v_start
    for j in range(fresh_count):
        head = v_end if j == fresh_count - 1 else nv
        if head == nv:
            nv += 1
        dart_vertex += [prev, head]
        fresh.append(nd + 2 * j)
        prev = head
    glued_cycle = arc + tuple(fresh)
    kk = (length - omega) % length
    stored_cycle = glued_cycle[kk:] + glued_cycle[:kk]
    rest = tuple(outer[(a + s + i) % n] for i in range(n - s))
    new_outer = tuple((f ^ 1) for f in reversed(fresh)) + rest
    new_complex = PlanarComplex(nv, tuple(dart_vertex), c.faces + (stored_cycle,),
                                new_outer)
    idx, sign = label
    return AbstractDiagram(new_complex, ad.face_labels + ((idx, sign),))


@dataclass(frozen=True)
class AbstractEnumeration:
    representatives: tuple[AbstractDiagram, ...]
    iso_count: int
    labeled_count: int


def enumerate_abstract_diagrams(max_faces: int, maxlen: int) -> AbstractEnumeration:
    """All reduced, fillable-shaped disk-like abstract diagrams with at most
    max_faces faces and face lengths <= maxlen, built by arc gluings.

    Representatives are one per isomorphism class (outer re-rooting, mirror,
    first-use index renaming); ``labeled_count`` counts classes under outer
    re-rooting only, since the intended equivalence is left open.
    """
    if max_faces > MAX_ABSTRACT_FACES:
        raise FeasibilityError(
            f"abstract enumeration capped at {MAX_ABSTRACT_FACES} faces")
    if maxlen > MAX_ABSTRACT_LENGTH:
        raise FeasibilityError(
            f"abstract enumeration capped at face length {MAX_ABSTRACT_LENGTH}")
    reps: list[AbstractDiagram] = []
    iso_seen: set = set()
    labeled_seen: set = set()
    frontier: list[AbstractDiagram] = []
    for length in range(1, maxlen + 1):
        for sign in (1, -1):
            ad = _one_face_abstract(length, sign)
            iso, labeled = _abstract_keys(ad)
            if labeled in labeled_seen:
                continue
            labeled_seen.add(labeled)
            frontier.append(ad)
            if iso not in iso_seen:
                iso_seen.add(iso)
                reps.append(ad)
    for _level in range(2, max_faces + 1):
        nxt = []
        for ad in frontier:
            for cand in _abstract_glue_candidates(ad, maxlen):
                if not abstract_is_reduced(cand):
                    continue
                if not _abstract_fillable_shaped(cand):
                    continue
                iso, labeled = _abstract_keys(cand)
                if labeled in labeled_seen:
                    continue
                labeled_seen.add(labeled)
                nxt.append(cand)
                if iso not in iso_seen:
                    iso_seen.add(iso)
                    reps.append(cand)
        frontier = nxt
    return AbstractEnumeration(tuple(reps), len(iso_seen), len(labeled_seen))


def enumerate_abstract_distortion_diagrams(max_faces: int, maxlen: int
                                           ) -> Iterator[AbstractDistortionDiagram]:
    """Each representative abstract diagram with every boundary subpath
    choice: the empty p once, then every (start, length) pair."""
    enum = enumerate_abstract_diagrams(max_faces, maxlen)
    for ad in enum.representatives:
        n = ad.boundary_length()
        yield AbstractDistortionDiagram(ad, 0, 0)
        for plen in range(1, n + 1):
            for start in range(n):
                yield AbstractDistortionDiagram(ad, start, plen)


# ---------------------------------------------------------------------------
# JSON.


def abstract_to_json(add: AbstractDistortionDiagram) -> str:
    ad = add.base
    c = ad.complex
    nxt = rotation_next(c)
    data = {
        "type": "abstract_diagram",
        "num_vertices": c.num_vertices,
        "darts": [
            {"id": i, "inverse": i ^ 1, "vertex": c.dart_vertex[i],
             "next_at_vertex": nxt[i]}
            for i in range(c.num_darts)
        ],
        "faces": [
            {"id": i, "darts": list(cycle), "relator": ad.face_labels[i][0],
             "sign": ad.face_labels[i][1]}
            for i, cycle in enumerate(c.faces)
        ],
        "outer_face": {"id": len(c.faces), "darts": list(c.outer)},
        "p": {"start": add.p_start, "length": add.p_length},
    }
    return json.dumps(data, indent=1)


def abstract_from_json(text: str) -> AbstractDistortionDiagram:
    data = json.loads(text)
    darts = sorted(data["darts"], key=lambda rec: rec["id"])
    if [rec["id"] for rec in darts] != list(range(len(darts))):
        raise DomainError("dart ids must be 0..2E-1")
    for rec in darts:
        if rec["inverse"] != rec["id"] ^ 1:
            raise DomainError("dart pairing must be 2i <-> 2i+1")
    dart_vertex = tuple(rec["vertex"] for rec in darts)
    faces = tuple(tuple(f["darts"]) for f in sorted(data["faces"], key=lambda f: f["id"]))
    labels = tuple((f["relator"], f["sign"])
                   for f in sorted(data["faces"], key=lambda f: f["id"]))
    outer = tuple(data["outer_face"]["darts"])
    c = PlanarComplex(data["num_vertices"], dart_vertex, faces, outer)
    p = data.get("p", {"start": 0, "length": 0})
    return AbstractDistortionDiagram(AbstractDiagram(c, labels),
                                     p["start"], p["length"])
