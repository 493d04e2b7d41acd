"""Van Kampen diagrams over a presentation.

A diagram is a planar complex whose darts carry letters and whose inner
faces carry signed relator indices: a face stored with sign +1 reads its
relator verbatim around its stored cycle, and with sign -1 reads the
inverse word (its positive boundary is the reversed cycle of inverse
darts).  Faces come in inverse pairs in the underlying theory; the stored
orientation is the one compatible with the global face permutation.

Reducibility: two distinct faces with the same relator form a reducible
(mirror) pair when some shared dart sits at the same position of both
positive boundaries; positions are compared as whole-word rotations so the
test is insensitive to re-rooting a face along a periodic relator.

Diagram isomorphism identifies re-rootings of the outer walk, reflections,
and face re-rootings along relator periods.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .complexes import (PlanarComplex, canonical_map_code, check_complex,
                        mirror_cycle, rotation_next)
from .density import RelatorSet
from .errors import DomainError, FeasibilityError
from .stallings import LabeledGraph
from .words import Word, as_word, canonical_cyclic, cyclic_reduce
from .words import letter_to_char, char_to_letter, min_cyclic_rotation

MAX_DIAGRAM_FACES = 3
DEFAULT_CANDIDATE_LIMIT = 2_000_000


@dataclass(frozen=True)
class VanKampenDiagram:
    """face_labels[i] = (relator_index, sign); relator_index is 1-based."""

    complex: PlanarComplex
    dart_labels: tuple[int, ...]
    face_labels: tuple[tuple[int, int], ...]

    @property
    def num_faces(self) -> int:
        return len(self.complex.faces)

    def boundary_length(self) -> int:
        return len(self.complex.outer)

    def positive_boundary(self, face_idx: int) -> tuple[int, ...]:
        cycle = self.complex.faces[face_idx]
        _, sign = self.face_labels[face_idx]
        return cycle if sign > 0 else mirror_cycle(cycle)

    def dart_word(self, darts: Sequence[int]) -> Word:
        return Word(tuple(self.dart_labels[d] for d in darts))


@dataclass(frozen=True)
class DistortionDiagram:
    """A diagram with a boundary subpath p = outer[start : start+length]."""

    diagram: VanKampenDiagram
    p_start: int
    p_length: int

    def p_darts(self) -> tuple[int, ...]:
        outer = self.diagram.complex.outer
        n = len(outer)
        return tuple(outer[(self.p_start + i) % n] for i in range(self.p_length))

    def p_word(self) -> Word:
        return self.diagram.dart_word(self.p_darts())


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: str | None = None
    detail: str = ""


def validate(d: VanKampenDiagram, relators: RelatorSet) -> ValidationReport:
    """Planarity (Euler), connectivity, involution consistency and
    face/relator label agreement; reports the first violation found."""
    c = d.complex
    if len(d.dart_labels) != c.num_darts:
        return ValidationReport(False, "involution", "label array length mismatch")
    for e in range(c.num_edges):
        if d.dart_labels[2 * e] != -d.dart_labels[2 * e + 1]:
            return ValidationReport(False, "involution",
                                    f"edge {e} labels are not mutually inverse")
    rep = check_complex(c)
    if not rep.ok:
        return ValidationReport(False, rep.violation, rep.detail)
    if len(d.face_labels) != len(c.faces):
        return ValidationReport(False, "face-label", "face label count mismatch")
    for i, cycle in enumerate(c.faces):
        idx, sign = d.face_labels[i]
        if not 1 <= idx <= len(relators.relators) or sign not in (1, -1):
            return ValidationReport(False, "face-label", f"face {i}: bad label {d.face_labels[i]}")
        rel = relators.relators[idx - 1]
        want = rel.letters if sign > 0 else rel.inverse().letters
        got = tuple(d.dart_labels[x] for x in cycle)
        if got != want:
            return ValidationReport(False, "face-label",
                                    f"face {i} reads {got}, expected {want}")
    return ValidationReport(True)


def boundary_word(d: VanKampenDiagram) -> Word:
    """Outer walk label, canonicalized over cyclic rotations and inversion."""
    return canonical_cyclic(d.dart_word(d.complex.outer))


def _word_period(letters: tuple[int, ...]) -> int:
    n = len(letters)
    for p in range(1, n + 1):
        if n % p == 0 and letters[p:] + letters[:p] == letters:
            return p
    return n


def is_reduced(d: VanKampenDiagram, relators: RelatorSet) -> bool:
    """True iff no two faces with one relator are glued mirror-wise along an
    edge at the same boundary position."""
    by_relator: dict[int, list[int]] = {}
    for i, (idx, _) in enumerate(d.face_labels):
        by_relator.setdefault(idx, []).append(i)
    for idx, members in by_relator.items():
        if len(members) < 2:
            continue
        word = relators.relators[idx - 1].letters
        period = _word_period(word)
        positions: list[dict[int, int]] = []
        for i in members:
            positions.append({dart: j for j, dart in enumerate(d.positive_boundary(i))})
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                for dart, ja in positions[a].items():
                    jb = positions[b].get(dart)
                    if jb is not None and (ja - jb) % period == 0:
                        return False
    return True


def isoperimetric_ratio(d: VanKampenDiagram, maxlen: int) -> float:
    """|boundary| / (maxlen * |faces|), the quantity compared to 1 - 2d - s."""
    if d.num_faces < 1:
        raise DomainError("isoperimetric ratio needs at least one face")
    return d.boundary_length() / (maxlen * d.num_faces)


# ---------------------------------------------------------------------------
# Construction and enumeration.


def one_face_diagram(relators: RelatorSet, relator_index: int, sign: int = 1) -> VanKampenDiagram:
    rel = relators.relators[relator_index - 1]
    word = rel.letters if sign > 0 else rel.inverse().letters
    n = len(word)
    dart_vertex = []
    labels = []
    for i in range(n):
        dart_vertex += [i, (i + 1) % n]
        labels += [word[i], -word[i]]
    cycle = tuple(2 * i for i in range(n))
    outer = tuple((2 * i) ^ 1 for i in reversed(range(n)))
    c = PlanarComplex(n, tuple(dart_vertex), (cycle,), outer)
    return VanKampenDiagram(c, tuple(labels), ((relator_index, sign),))


def diagram_canonical_key(d: VanKampenDiagram, relators: RelatorSet):
    infos = []
    mirror_infos = []
    for i, cycle in enumerate(d.complex.faces):
        idx, sign = d.face_labels[i]
        rel = relators.relators[idx - 1].letters
        word = rel if sign > 0 else tuple(-x for x in reversed(rel))
        period = _word_period(word)
        infos.append(((idx, sign), period))
        mirror_infos.append(((idx, -sign), period))
    return canonical_map_code(d.complex, infos, dart_labels=d.dart_labels,
                              mirror_face_infos=mirror_infos)


def _glue_candidates(d: VanKampenDiagram, relators: RelatorSet) -> Iterator[VanKampenDiagram]:
    """All diagrams obtained by gluing one face along an arc of the boundary."""
    c = d.complex
    outer = c.outer
    n = len(outer)
    nd = c.num_darts
    for idx in range(1, len(relators.relators) + 1):
        rel = relators.relators[idx - 1]
        for sign in (1, -1):
            word = rel.letters if sign > 0 else rel.inverse().letters
            L = len(word)
            doubled_word = word + word
            for a in range(n):
                for s in range(1, min(L - 1, n) + 1):
                    arc = tuple(outer[(a + i) % n] for i in range(s))
                    arc_word = tuple(d.dart_labels[x] for x in arc)
                    for omega in range(L):
                        if doubled_word[omega:omega + s] != arc_word:
                            continue
                        yield _build_glued(d, idx, sign, word, arc, a, s, omega)


def _build_glued(d: VanKampenDiagram, idx: int, sign: int, word: tuple[int, ...],
                 arc: tuple[int, ...], a: int, s: int, omega: int) -> VanKampenDiagram:
    c = d.complex
    outer = c.outer
    n = len(outer)
    L = len(word)
    fresh_count = L - s
    nd = c.num_darts
    nv = c.num_vertices

    dart_vertex = list(c.dart_vertex)
    labels = list(d.dart_labels)
    rotated = word[omega:] + word[:omega]

    v_start = c.head(arc[-1])
    v_end = c.tail(arc[0])
    fresh = []
    prev = v_start
    for j in range(fresh_count):
        tail = prev
        head = v_end if j == fresh_count - 1 else nv
        if head == nv:
            nv += 1
        dart_id = nd + 2 * j
        dart_vertex += [tail, head]
        letter = rotated[s + j]
        labels += [letter, -letter]
        fresh.append(dart_id)
        prev = head

    glued_cycle = arc + tuple(fresh)
    k = (L - omega) % L
    stored_cycle = glued_cycle[k:] + glued_cycle[:k]

    rest = tuple(outer[(a + s + i) % n] for i in range(n - s))
    new_outer = tuple((f ^ 1) for f in reversed(fresh)) + rest

    new_complex = PlanarComplex(nv, tuple(dart_vertex),
                                c.faces + (stored_cycle,), new_outer)
    return VanKampenDiagram(new_complex, tuple(labels),
                            d.face_labels + ((idx, sign),))


def enumerate_reduced_disk_diagrams(relators: RelatorSet, max_faces: int,
                                    *, candidate_limit: int = DEFAULT_CANDIDATE_LIMIT
                                    ) -> Iterator[VanKampenDiagram]:
    """Every reduced disk diagram with <= max_faces faces built by successive
    arc gluings, one per isomorphism class.

    A new face is glued along a contiguous arc of the current boundary; the
    fresh part of its boundary is embedded without self-identifications.
    """
    if max_faces > MAX_DIAGRAM_FACES:
        raise FeasibilityError(
            f"disk diagram enumeration capped at {MAX_DIAGRAM_FACES} faces, "
            f"got {max_faces}", estimate=max_faces)
    if max_faces < 1:
        return
    total = sum(len(r) for r in relators.relators)
    lmax = max((len(r) for r in relators.relators), default=1)
    estimate = (2 * total) * (2 * total * (max_faces * lmax) ** 2) ** (max_faces - 1)
    candidates = 0
    seen = set()
    frontier: list[VanKampenDiagram] = []
    for idx in range(1, len(relators.relators) + 1):
        for sign in (1, -1):
            diag = one_face_diagram(relators, idx, sign)
            key = diagram_canonical_key(diag, relators)
            if key not in seen:
                seen.add(key)
                frontier.append(diag)
                yield diag
    for _level in range(2, max_faces + 1):
        nxt: list[VanKampenDiagram] = []
        for diag in frontier:
            for cand in _glue_candidates(diag, relators):
                candidates += 1
                if candidates > candidate_limit:
                    raise FeasibilityError(
                        f"disk diagram enumeration exceeded {candidate_limit} "
                        f"candidates (upfront estimate {estimate:.3g})",
                        estimate=estimate)
                if not is_reduced(cand, relators):
                    continue
                key = diagram_canonical_key(cand, relators)
                if key not in seen:
                    seen.add(key)
                    nxt.append(cand)
                    yield cand
        frontier = nxt


# ---------------------------------------------------------------------------
# Bounded word problem by relator rewriting on cyclic words.


@dataclass(frozen=True)
class RewriteStep:
    before: tuple[int, ...]
    after: tuple[int, ...]
    relator_index: int
    inverted: bool
    rotation: int
    position: int
    overlap: int


@dataclass(frozen=True)
class TrivialityVerdict:
    status: str  # "trivial" | "unknown"
    witness: tuple[RewriteStep, ...] | None
    steps_used: int
    budget_exhausted: bool


def default_budget(relators: RelatorSet) -> dict:
    return {"max_length": 3 * relators.maxlen, "max_steps": 1_000_000}


def _cyclic_reduce_raw(letters) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    i, j = 0, len(out)
    while j - i >= 2 and out[i] == -out[j - 1]:
        i += 1
        j -= 1
    return tuple(out[i:j])


def bounded_triviality(relators: RelatorSet, w: Word | Iterable[int],
                       budget: dict | None = None) -> TrivialityVerdict:
    """Breadth-first search for a rewrite path from w to the empty word.

    States are cyclic words (canonical rotation of the cyclically reduced
    form).  A rewrite replaces a match u of a rotation prefix of a relator
    (or inverse relator) by the inverse of the remainder.  ``trivial`` comes
    with a replayable witness; ``unknown`` is never a proof of nontriviality.
    """
    word = as_word(w)
    if not word.is_cyclically_reduced():
        raise DomainError("bounded_triviality expects a cyclically reduced word")
    budget = dict(budget or {})
    max_length = budget.get("max_length", 3 * relators.maxlen)
    max_steps = budget.get("max_steps", 1_000_000)
    # Constructing successor states dominates the cost, so small budgets also
    # cap the number of states ever built, not just those expanded.
    max_states = budget.get("max_states", max(2000, 10 * max_steps))

    oriented: list[tuple[int, bool, tuple[int, ...]]] = []
    for ridx, rel in enumerate(relators.relators, start=1):
        oriented.append((ridx, False, rel.letters))
        oriented.append((ridx, True, rel.inverse().letters))

    start = min_cyclic_rotation(cyclic_reduce(word).letters)
    if not start:
        return TrivialityVerdict("trivial", (), 0, False)

    parents: dict[tuple[int, ...], RewriteStep | None] = {start: None}
    queue = [start]
    qi = 0
    steps = 0
    built = 0
    clipped = False
    while qi < len(queue):
        state = queue[qi]
        qi += 1
        steps += 1
        if steps > max_steps:
            return TrivialityVerdict("unknown", None, steps - 1, True)
        if built > max_states:
            return TrivialityVerdict("unknown", None, steps - 1, True)
        k = len(state)
        doubled = state + state
        for ridx, invflag, rword in oriented:
            Lr = len(rword)
            rdoubled = rword + rword
            for rot in range(Lr):
                for pos in range(k):
                    q = 0
                    limit = min(Lr, k)
                    while q < limit and rdoubled[rot + q] == doubled[pos + q]:
                        q += 1
                    for overlap in range(1, q + 1):
                        if built > max_states:
                            break
                        built += 1
                        remainder = doubled[pos + overlap: pos + k]
                        tail = rdoubled[rot + overlap: rot + Lr]
                        replacement = tuple(-x for x in reversed(tail))
                        new_state = min_cyclic_rotation(
                            _cyclic_reduce_raw(remainder + replacement))
                        if len(new_state) > max_length:
                            clipped = True
                            continue
                        if new_state in parents:
                            continue
                        step = RewriteStep(state, new_state, ridx, invflag, rot,
                                           pos, overlap)
                        parents[new_state] = step
                        if not new_state:
                            witness = []
                            cur: tuple[int, ...] = new_state
                            while parents[cur] is not None:
                                st = parents[cur]
                                witness.append(st)
                                cur = st.before
                            return TrivialityVerdict(
                                "trivial", tuple(reversed(witness)), steps, False)
                        queue.append(new_state)
    return TrivialityVerdict("unknown", None, steps, clipped)


def replay_witness(relators: RelatorSet, w: Word, witness: Sequence[RewriteStep]) -> bool:
    """Re-derive each step of a triviality witness; True iff it reaches ()."""
    state = min_cyclic_rotation(cyclic_reduce(w).letters)
    for step in witness:
        if step.before != state:
            return False
        rel = relators.relators[step.relator_index - 1]
        rword = rel.inverse().letters if step.inverted else rel.letters
        rdoubled = rword + rword
        doubled = state + state
        if rdoubled[step.rotation: step.rotation + step.overlap] != \
                doubled[step.position: step.position + step.overlap]:
            return False
        remainder = doubled[step.position + step.overlap: step.position + len(state)]
        tail = rdoubled[step.rotation + step.overlap: step.rotation + len(rword)]
        new_linear = remainder + tuple(-x for x in reversed(tail))
        state = min_cyclic_rotation(cyclic_reduce(Word(new_linear)).letters)
        if state != step.after:
            return False
    return state == ()


# ---------------------------------------------------------------------------
# Distortion certification.


@dataclass(frozen=True)
class BilipschitzReport:
    holds: bool
    lam: float
    threshold: float
    max_ratio: float
    worst: DistortionDiagram | None
    diagrams_checked: int


def longest_readable_subpaths(d: VanKampenDiagram, graph: LabeledGraph) -> list[int]:
    """For each outer start position, the longest boundary subpath whose
    label is readable on the graph (capped at the boundary length)."""
    outer = d.complex.outer
    n = len(outer)
    out = graph.out_map()
    if out is None:
        raise DomainError("certification requires a label-deterministic graph")
    result = []
    for start in range(n):
        best = 0
        for v0 in range(graph.num_vertices):
            v = v0
            t = 0
            while t < n:
                nv = out.get((v, d.dart_labels[outer[(start + t) % n]]))
                if nv is None:
                    break
                v = nv
                t += 1
            best = max(best, t)
        result.append(best)
    return result


def certify_bilipschitz(relators: RelatorSet, graph: LabeledGraph, max_faces: int,
                        lam: float) -> BilipschitzReport:
    """Check |p| <= lam/(1+lam) * |dD| over all reduced disk distortion
    diagrams with at most max_faces faces; vacuously true with no diagrams."""
    threshold = lam / (1.0 + lam)
    max_ratio = 0.0
    worst = None
    checked = 0
    for diag in enumerate_reduced_disk_diagrams(relators, max_faces):
        checked += 1
        n = diag.boundary_length()
        longest = longest_readable_subpaths(diag, graph)
        for start, plen in enumerate(longest):
            if plen == 0:
                continue
            ratio = plen / n
            if ratio > max_ratio:
                max_ratio = ratio
                worst = DistortionDiagram(diag, start, plen)
    return BilipschitzReport(max_ratio <= threshold, lam, threshold, max_ratio,
                             worst, checked)


# ---------------------------------------------------------------------------
# JSON serialization.


def diagram_to_json(d: VanKampenDiagram) -> str:
    c = d.complex
    nxt = rotation_next(c)
    data = {
        "type": "diagram",
        "num_vertices": c.num_vertices,
        "darts": [
            {"id": i, "inverse": i ^ 1, "vertex": c.dart_vertex[i],
             "next_at_vertex": nxt[i], "label": letter_to_char(d.dart_labels[i])}
            for i in range(c.num_darts)
        ],
        "faces": [
            {"id": i, "darts": list(cycle), "relator": d.face_labels[i][0],
             "sign": d.face_labels[i][1]}
            for i, cycle in enumerate(c.faces)
        ],
        "outer_face": {"id": len(c.faces), "darts": list(c.outer)},
    }
    return json.dumps(data, indent=1)


def diagram_from_json(text: str) -> VanKampenDiagram:
    data = json.loads(text)
    darts = sorted(data["darts"], key=lambda rec: rec["id"])
    ids = [rec["id"] for rec in darts]
    if ids != list(range(len(ids))):
        raise DomainError("dart ids must be 0..2E-1")
    for rec in darts:
        if rec["inverse"] != rec["id"] ^ 1:
            raise DomainError("dart pairing must be 2i <-> 2i+1")
    dart_vertex = tuple(rec["vertex"] for rec in darts)
    labels = tuple(char_to_letter(rec["label"]) for rec in darts)
    faces = tuple(tuple(f["darts"]) for f in sorted(data["faces"], key=lambda f: f["id"]))
    face_labels = tuple((f["relator"], f["sign"])
                        for f in sorted(data["faces"], key=lambda f: f["id"]))
    outer = tuple(data["outer_face"]["darts"])
    c = PlanarComplex(data["num_vertices"], dart_vertex, faces, outer)
    return VanKampenDiagram(c, labels, face_labels)
