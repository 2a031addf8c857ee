"""Surfaces S_{g,n}, ideal triangulations and flips.

Edges are numbered 0..E-1.  Each edge has two sides, ``e`` and ``~e``
(``~e == -e - 1``), one in each incident triangle.  A triangle is a triple of
sides listed anticlockwise; side ``s`` runs from the triangle's vertex A to B,
``next(s)`` from B to C and ``prev(s)`` from C back to A.  Points of a normal
curve on side ``s`` are indexed from A, so index ``k`` on ``s`` is index
``w - 1 - k`` on ``~s``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

SCHEMA_VERSION = 1


class ComplexityError(ValueError):
    pass


class TriangulationError(ValueError):
    pass


def inv(s: int) -> int:
    return ~s


def edge_of(s: int) -> int:
    return s if s >= 0 else ~s


@dataclass(frozen=True)
class SurfaceSpec:
    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 0:
            raise ComplexityError("genus and punctures must be nonnegative")
        if self.complexity < 1:
            raise ComplexityError(
                f"S_{{{self.genus},{self.punctures}}} has complexity {self.complexity} < 1")

    @property
    def complexity(self) -> int:
        return 3 * self.genus + self.punctures - 3

    @property
    def xi(self) -> int:
        return self.complexity

    @property
    def edge_count(self) -> int:
        return 6 * self.genus + 3 * self.punctures - 6

    @property
    def triangle_count(self) -> int:
        return 4 * self.genus + 2 * self.punctures - 4

    @property
    def label(self) -> str:
        return f"{self.genus},{self.punctures}"

    def __str__(self):
        return f"S_{{{self.genus},{self.punctures}}}"


def make_surface(genus: int, punctures: int) -> SurfaceSpec:
    return SurfaceSpec(genus, punctures)


def parse_surface(text: str) -> SurfaceSpec:
    g, n = (int(t) for t in text.replace("S", "").strip("_{}() ").split(","))
    return make_surface(g, n)


@dataclass(frozen=True, eq=False)
class Triangulation:
    triangles: tuple
    ident: str = "custom"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        tris = tuple(tuple(int(s) for s in t) for t in self.triangles)
        object.__setattr__(self, "triangles", tris)
        seen = sorted(s for t in tris for s in t)
        E = len(seen) // 2
        if len(seen) != 2 * E or seen != list(range(-E, E)):
            raise TriangulationError("every edge needs exactly two sides")
        if any(len(t) != 3 for t in tris):
            raise TriangulationError("triangles must have three sides")
        if len(self._components()) != 1:
            raise TriangulationError("triangulation is disconnected")

    # -- combinatorics -------------------------------------------------
    @cached_property
    def edge_count(self) -> int:
        return len(self.triangles) * 3 // 2

    @cached_property
    def _where(self) -> dict:
        out = {}
        for ti, t in enumerate(self.triangles):
            for pos, s in enumerate(t):
                out[s] = (ti, pos)
        return out

    def triangle_of(self, s: int) -> int:
        return self._where[s][0]

    def next(self, s: int) -> int:
        ti, pos = self._where[s]
        return self.triangles[ti][(pos + 1) % 3]

    def prev(self, s: int) -> int:
        ti, pos = self._where[s]
        return self.triangles[ti][(pos + 2) % 3]

    @cached_property
    def nxt(self) -> dict:
        return {s: self.next(s) for s in self._where}

    @cached_property
    def prv(self) -> dict:
        return {s: self.prev(s) for s in self._where}

    @cached_property
    def tri_index(self) -> dict:
        return {s: w[0] for s, w in self._where.items()}

    @property
    def sides(self) -> list:
        return list(range(-self.edge_count, self.edge_count))

    def gluing(self) -> list:
        return [(e, ~e) for e in range(self.edge_count)]

    def _components(self):
        parent = list(range(len(self.triangles)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        where = {}
        for ti, t in enumerate(self.triangles):
            for s in t:
                where[s] = ti
        for s, ti in where.items():
            parent[find(ti)] = find(where[~s])
        return {find(i) for i in range(len(self.triangles))}

    @cached_property
    def vertex_classes(self) -> list:
        """Punctures, as lists of sides whose start vertex is that puncture."""
        parent = {s: s for s in self._where}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for s in self._where:
            # start(next(s)) = end(s) = start(~s)
            parent[find(self.next(s))] = find(~s)
        classes = {}
        for s in self._where:
            classes.setdefault(find(s), []).append(s)
        return sorted((sorted(v) for v in classes.values()), key=lambda v: v[0])

    @cached_property
    def punctures(self) -> int:
        return len(self.vertex_classes)

    @cached_property
    def genus(self) -> int:
        chi = self.punctures - self.edge_count + len(self.triangles)  # closed surface
        g2 = 2 - chi
        if g2 < 0 or g2 % 2:
            raise TriangulationError("inconsistent Euler characteristic")
        return g2 // 2

    @cached_property
    def surface(self) -> SurfaceSpec:
        return make_surface(self.genus, self.punctures)

    def self_folded(self) -> bool:
        return any(~s in t for t in self.triangles for s in t)

    def same_type(self, other: "Triangulation") -> bool:
        """Combinatorial equivalence up to relabelling and rotation."""
        if len(self.triangles) != len(other.triangles):
            return False
        return _shape_key(self) == _shape_key(other)

    # -- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "id": self.ident,
            "surface": self.surface.label,
            "triangles": [list(t) for t in self.triangles],
            "gluing": [list(p) for p in self.gluing()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Triangulation":
        tri = cls(tuple(tuple(t) for t in d["triangles"]), d.get("id", "custom"))
        for a, b in d.get("gluing", tri.gluing()):
            if b != ~a:
                raise TriangulationError("gluing pairs must be (e, ~e)")
        return tri

    def __hash__(self):
        return hash(self.triangles)

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.triangles == other.triangles


def _shape_key(tri: Triangulation):
    # canonical relabelling by a BFS from every starting side; the minimum wins
    best = None
    for start in tri.sides:
        label = {}
        order = []
        queue = [start]
        while queue:
            s = queue.pop(0)
            if s in label:
                continue
            cur = s
            for _ in range(3):
                if cur not in label:
                    label[cur] = len(label)
                    order.append(cur)
                    queue.append(~cur)
                cur = tri.next(cur)
        key = tuple(sorted((label[s], label[~s], label[tri.next(s)]) for s in tri.sides))
        if best is None or key < best:
            best = key
    return best


# Anticlockwise triangle lists, chosen without self-folded triangles.
_STANDARD = {
    (1, 1): [(-3, -1, -2), (0, 1, 2)],
    # tetrahedron on vertices 0..3; edges 01,02,03,12,13,23 are 0..5
    (0, 4): [(1, -4, -1), (0, 4, -3), (2, -6, -2), (3, 5, -5)],
    (0, 5): [(-9, 4, -6), (-8, 3, -5), (-7, -1, -4), (-3, 1, 7), (-2, 0, 6), (2, 8, 5)],
    (1, 2): [(-6, -3, -1), (-5, -4, 5), (-2, 3, 4), (0, 1, 2)],
}

_STD_CACHE: dict = {}


def standard_triangulation(spec: SurfaceSpec) -> Triangulation:
    key = (spec.genus, spec.punctures)
    if key not in _STANDARD:
        raise TriangulationError(f"no standard triangulation for {spec}")
    if key not in _STD_CACHE:
        tri = Triangulation(tuple(_STANDARD[key]), ident=f"std-{key[0]}-{key[1]}")
        assert tri.surface == spec
        _STD_CACHE[key] = tri
    return _STD_CACHE[key]


def supported_surfaces() -> list:
    return [make_surface(g, n) for g, n in _STANDARD]


def _rotate_to(t: tuple, s: int) -> tuple:
    i = t.index(s)
    return t[i:] + t[:i]


def flip(tri: Triangulation, edge: int) -> Triangulation:
    """Exchange the diagonal ``edge`` of the square formed by its two triangles."""
    e, f = edge, ~edge
    ti, tj = tri.triangle_of(e), tri.triangle_of(f)
    if ti == tj:
        raise TriangulationError(f"edge {edge} lies in a self-folded triangle")
    _, a, b = _rotate_to(tri.triangles[ti], e)
    _, c, d = _rotate_to(tri.triangles[tj], f)
    # boundary of the square anticlockwise is c, d, a, b; new diagonal joins C and D
    new = [t for k, t in enumerate(tri.triangles) if k not in (ti, tj)]
    new.insert(min(ti, tj), (e, b, c))
    new.insert(max(ti, tj), (f, d, a))
    return Triangulation(tuple(new), ident=f"{tri.ident}/f{edge}")


def flip_weights(tri: Triangulation, edge: int, weights) -> list:
    """Weight transfer for a curve across ``flip(tri, edge)``."""
    e = edge
    ti, tj = tri.triangle_of(e), tri.triangle_of(~e)
    if ti == tj:
        raise TriangulationError(f"edge {edge} lies in a self-folded triangle")
    _, a, b = _rotate_to(tri.triangles[ti], e)
    _, c, d = _rotate_to(tri.triangles[tj], ~e)
    w = list(weights)
    W = lambda s: w[edge_of(s)]
    w[e] = max(W(a) + W(c), W(b) + W(d)) - W(e)
    return w
