"""Planar 2-complexes as combinatorial maps.

A complex stores darts (directed edge sides) with the involution given by
pairing dart 2i with 2i+1, the tail vertex of every dart, the inner face
boundaries as dart cycles, and the designated outer face walk.  Every dart
belongs to exactly one stored cycle; the cycles are the orbits of the face
permutation, so the vertex rotation system is derived rather than stored.

For a connected map the stored data describes a planar, simply connected
complex exactly when Euler's formula V - E + F = 2 holds with the outer face
counted and the derived rotation orbits match the declared vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DomainError


@dataclass(frozen=True)
class PlanarComplex:
    num_vertices: int
    dart_vertex: tuple[int, ...]
    faces: tuple[tuple[int, ...], ...]
    outer: tuple[int, ...]

    @property
    def num_darts(self) -> int:
        return len(self.dart_vertex)

    @property
    def num_edges(self) -> int:
        return len(self.dart_vertex) // 2

    def head(self, d: int) -> int:
        return self.dart_vertex[d ^ 1]

    def tail(self, d: int) -> int:
        return self.dart_vertex[d]

    def degree(self, v: int) -> int:
        return sum(1 for t in self.dart_vertex if t == v)

    def all_cycles(self) -> tuple[tuple[int, ...], ...]:
        return self.faces + (self.outer,)


@dataclass(frozen=True)
class ComplexReport:
    ok: bool
    violation: str | None = None
    detail: str = ""


def face_permutation(c: PlanarComplex) -> list[int] | None:
    """phi: dart -> next dart in its cycle; None if darts are not partitioned."""
    phi = [-1] * c.num_darts
    for cycle in c.all_cycles():
        for i, d in enumerate(cycle):
            if not 0 <= d < c.num_darts or phi[d] != -1:
                return None
            phi[d] = cycle[(i + 1) % len(cycle)]
    if any(x == -1 for x in phi):
        return None
    return phi


def check_complex(c: PlanarComplex) -> ComplexReport:
    if c.num_darts % 2 != 0:
        return ComplexReport(False, "involution", "odd number of darts")
    if any(not 0 <= v < c.num_vertices for v in c.dart_vertex):
        return ComplexReport(False, "involution", "dart tail out of range")
    if any(len(cycle) == 0 for cycle in c.all_cycles()):
        return ComplexReport(False, "involution", "empty face cycle")
    phi = face_permutation(c)
    if phi is None:
        return ComplexReport(False, "involution",
                             "darts are not partitioned by the face cycles")
    # Walk consistency: the head of each dart is the tail of its successor.
    for cycle in c.all_cycles():
        for i, d in enumerate(cycle):
            nxt = cycle[(i + 1) % len(cycle)]
            if c.head(d) != c.tail(nxt):
                return ComplexReport(False, "involution",
                                     f"cycle breaks at dart {d} -> {nxt}")
    # Derived rotation orbits must match the declared vertex set.
    sigma = [phi[d ^ 1] for d in range(c.num_darts)]
    seen = [False] * c.num_darts
    orbits = 0
    for d in range(c.num_darts):
        if not seen[d]:
            orbits += 1
            x = d
            while not seen[x]:
                seen[x] = True
                x = sigma[x]
    if orbits != c.num_vertices:
        return ComplexReport(False, "euler",
                             f"rotation orbits {orbits} != vertices {c.num_vertices}")
    # Connectivity over alpha and phi.
    if c.num_darts:
        stack = [0]
        reach = {0}
        while stack:
            d = stack.pop()
            for e in (d ^ 1, phi[d]):
                if e not in reach:
                    reach.add(e)
                    stack.append(e)
        if len(reach) != c.num_darts:
            return ComplexReport(False, "connectivity", "complex is disconnected")
    euler = c.num_vertices - c.num_edges + len(c.faces) + 1
    if euler != 2:
        return ComplexReport(False, "euler", f"V - E + F = {euler} != 2")
    return ComplexReport(True)


def face_has_backtrack(cycle: Sequence[int]) -> bool:
    k = len(cycle)
    return any(cycle[(i + 1) % k] == (cycle[i] ^ 1) for i in range(k))


def mirror_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    return tuple((d ^ 1) for d in reversed(cycle))


def mirror_complex(c: PlanarComplex) -> PlanarComplex:
    """The reflected map: every cycle reversed through the involution."""
    return PlanarComplex(
        c.num_vertices,
        c.dart_vertex,
        tuple(mirror_cycle(f) for f in c.faces),
        mirror_cycle(c.outer),
    )


def rotation_next(c: PlanarComplex) -> list[int]:
    """sigma = phi o alpha: the next dart counterclockwise at each tail vertex."""
    phi = face_permutation(c)
    if phi is None:
        raise DomainError("complex darts are not partitioned by face cycles")
    return [phi[d ^ 1] for d in range(c.num_darts)]


# ---------------------------------------------------------------------------
# Traversal codes.  A code is a renumbering-invariant serialization rooted at
# one outer position; canonical forms minimize over roots (and mirrors, and
# face-root rotations where the caller grants that freedom).


def _rotations(cycle: tuple[int, ...], step: int) -> Iterator[tuple[int, ...]]:
    k = len(cycle)
    for off in range(0, k, step):
        yield cycle[off:] + cycle[:off]


def map_code(c: PlanarComplex,
             face_infos: Sequence[tuple],
             start_idx: int,
             dart_labels: Sequence[int] | None = None,
             p: tuple[int, int] | None = None,
             relabel_first_use: bool = False):
    """Serialize the rooted map.

    ``face_infos`` holds one (label, period) pair per inner face: ``label``
    is an arbitrary comparable tag and ``period`` the rotation step under
    which the face cycle may be re-rooted without changing the object.
    With ``relabel_first_use`` the first components of face labels are
    renamed 1..k in order of first appearance (abstract-diagram isomorphism).
    """
    phi = face_permutation(c)
    if phi is None:
        raise DomainError("cannot encode: darts not partitioned")
    start = c.outer[start_idx]
    order: dict[int, int] = {start: 0}
    queue = [start]
    qi = 0
    while qi < len(queue):
        d = queue[qi]
        qi += 1
        for e in (d ^ 1, phi[d]):
            if e not in order:
                order[e] = len(order)
                queue.append(e)
    if len(order) != c.num_darts:
        raise DomainError("cannot encode: complex is disconnected")

    vert_id: dict[int, int] = {}
    vert_part = []
    for d in queue:
        v = c.dart_vertex[d]
        if v not in vert_id:
            vert_id[v] = len(vert_id)
        vert_part.append(vert_id[v])

    alpha_part = tuple(order[queue[i] ^ 1] for i in range(len(queue)))

    faces_part = []
    for cycle, (label, period) in zip(c.faces, face_infos):
        best = min(tuple(order[d] for d in rot) for rot in _rotations(cycle, period))
        faces_part.append((best, label))
    faces_part.sort()
    if relabel_first_use:
        rename: dict[int, int] = {}
        renamed = []
        for best, label in faces_part:
            idx, sign = label
            if idx not in rename:
                rename[idx] = len(rename) + 1
            renamed.append((best, (rename[idx], sign)))
        faces_part = renamed

    n = len(c.outer)
    outer_part = tuple(order[c.outer[(start_idx + i) % n]] for i in range(n))

    label_part = None
    if dart_labels is not None:
        label_part = tuple(dart_labels[queue[i]] for i in range(len(queue)))

    p_part = None
    if p is not None:
        p_start, p_len = p
        p_part = (((p_start - start_idx) % n) if p_len else 0, p_len)

    return (c.num_darts, tuple(vert_part), alpha_part, tuple(faces_part),
            outer_part, label_part, p_part)


def canonical_map_code(c: PlanarComplex,
                       face_infos: Sequence[tuple],
                       dart_labels: Sequence[int] | None = None,
                       p: tuple[int, int] | None = None,
                       mirror_face_infos: Sequence[tuple] | None = None,
                       relabel_first_use: bool = False,
                       use_mirror: bool = True):
    """Minimum code over outer roots and (optionally) the mirror map.

    ``mirror_face_infos`` supplies the face labels of the reflected object
    (signs flip there); ``p`` is carried through the reflection.
    """
    variants = [(c, face_infos, p)]
    if use_mirror:
        mc = mirror_complex(c)
        n = len(c.outer)
        mp = None
        if p is not None:
            p_start, p_len = p
            mp = (((n - p_start - p_len) % n) if p_len else 0, p_len)
        variants.append((mc, mirror_face_infos if mirror_face_infos is not None
                         else face_infos, mp))
    best = None
    for cc, infos, pp in variants:
        for start_idx in range(len(cc.outer)):
            code = map_code(cc, infos, start_idx, dart_labels, pp, relabel_first_use)
            if best is None or code < best:
                best = code
    return best
