"""The ordered A/B-labelled tree of approximant bands and the boundary energy map.

A vertex at level k with label A has c_{k+1} - 1 A-children at level k+1
and c_{k+1} B-children at level k+2; a B vertex has one more of each.
Children alternate B, A, B, ..., A, B from left to right, and every
descendant inherits the position of its ancestor, so vertices are
ordered by comparing their child-index paths.
"""
from __future__ import annotations

import json
import math
import threading
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .bandscan import Band, precedes, spectrum, strictly_inside, strictly_left
from .bandtype import band_labels
from .contfrac import alpha_expansion, denominators
from .errors import DepthExceeded

DEPTH_CAP = 40


@dataclass
class Vertex:
    id: int
    level: int
    label: str
    parent: int | None
    order: int
    path: tuple[int, ...]
    children: list[int] | None = None


@dataclass
class SpectralTree:
    alpha_digits: tuple[int, ...]
    depth: int
    vertices: list[Vertex] = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _levels: dict = field(default_factory=dict, repr=False)

    @property
    def root(self) -> Vertex:
        return self.vertices[0]

    def _new(self, level: int, label: str, parent: int | None, order: int, path: tuple[int, ...]) -> int:
        v = Vertex(len(self.vertices), level, label, parent, order, path)
        self.vertices.append(v)
        return v.id

    def children(self, vid: int) -> list[int]:
        """Ordered outgoing edges of a vertex, created on first request."""
        v = self.vertices[vid]
        if v.children is not None:
            return v.children
        with self._lock:
            if v.children is not None:
                return v.children
            if v.label == "root":
                kids = [self._new(0, "A", vid, 0, v.path + (0,)), self._new(1, "B", vid, 1, v.path + (1,))]
            else:
                if v.level + 1 > len(self.alpha_digits):
                    raise DepthExceeded(f"no digit for level {v.level + 1}")
                d = self.alpha_digits[v.level]
                M = d - 1 if v.label == "A" else d
                kids = []
                for pos in range(2 * M + 1):
                    if pos % 2 == 0:
                        kids.append(self._new(v.level + 2, "B", vid, pos, v.path + (pos,)))
                    else:
                        kids.append(self._new(v.level + 1, "A", vid, pos, v.path + (pos,)))
            v.children = kids
            return kids

    def grow(self, depth: int) -> None:
        """Materialise every vertex up to the given level."""
        if depth > min(DEPTH_CAP, len(self.alpha_digits)):
            raise DepthExceeded(f"depth {depth} exceeds the cap or the digit supply")
        i = 0
        while i < len(self.vertices):
            v = self.vertices[i]
            if v.level <= depth - 1:
                self.children(v.id)
            i += 1
        self.depth = max(self.depth, depth)

    def level(self, k: int) -> list[Vertex]:
        """Vertices at level k in left-to-right order."""
        if k > self.depth:
            self.grow(k)
        if k not in self._levels:
            self._levels[k] = sorted((v for v in self.vertices if v.level == k), key=lambda v: v.path)
        return self._levels[k]

    def counts(self, k: int) -> tuple[int, int]:
        vs = self.level(k)
        return sum(v.label == "A" for v in vs), sum(v.label == "B" for v in vs)

    def vertex_at(self, path: Sequence[int]) -> Vertex:
        vid = 0
        for step in path:
            kids = self.children(vid)
            if not 0 <= step < len(kids):
                raise IndexError(f"vertex {vid} has {len(kids)} children, asked for {step}")
            vid = kids[step]
        return self.vertices[vid]

    def walk(self, path: Sequence[int]) -> list[Vertex]:
        out = [self.root]
        vid = 0
        for step in path:
            kids = self.children(vid)
            if not 0 <= step < len(kids):
                raise IndexError(f"vertex {vid} has {len(kids)} children, asked for {step}")
            vid = kids[step]
            out.append(self.vertices[vid])
        return out

    def edges(self):
        for v in self.vertices:
            for k in v.children or ():
                yield v, self.vertices[k]

    def precedes(self, u: Vertex, w: Vertex) -> bool | None:
        """Tree order; None when one vertex is an ancestor of the other."""
        n = min(len(u.path), len(w.path))
        if u.path[:n] == w.path[:n]:
            return None
        return u.path < w.path

    def to_json(self) -> str:
        return json.dumps(
            {
                "alpha": list(self.alpha_digits[: self.depth]),
                "vertices": [
                    {"id": v.id, "level": v.level, "label": v.label, "parent": v.parent, "order": v.order}
                    for v in self.vertices
                    if v.level <= self.depth
                ],
            },
            sort_keys=True,
        )

    def to_dot(self) -> str:
        lines = ["digraph spectral_tree {"]
        for v in self.vertices:
            if v.level <= self.depth:
                lines.append(f'  v{v.id} [label="{v.label}{v.level}"];')
        for u, w in self.edges():
            if w.level <= self.depth:
                lines.append(f'  v{u.id} -> v{w.id} [label="{w.order}"];')
        lines.append("}")
        return "\n".join(lines)


def build_tree(alpha_digits: Sequence[int], depth: int) -> SpectralTree:
    tree = SpectralTree(tuple(alpha_digits), 0)
    tree._new(-1, "root", None, 0, ())
    tree.grow(depth)
    return tree


def rank_in_label(tree: SpectralTree, v: Vertex) -> int:
    return [w.id for w in tree.level(v.level) if w.label == v.label].index(v.id)


@lru_cache(maxsize=256)
def _labelled(digits: tuple[int, ...], V: float) -> tuple[tuple[Band, str | None], ...]:
    c = alpha_expansion(digits, len(digits))
    return tuple(zip(spectrum(c, V).bands, band_labels(c, V)))


def psi(tree: SpectralTree, v: Vertex, V: float) -> Band:
    """Band of the same label and same rank among that label, at the vertex's level."""
    if v.level > tree.depth or v.level > len(tree.alpha_digits):
        raise DepthExceeded(f"level {v.level} beyond built depth {tree.depth}")
    c = alpha_expansion(tree.alpha_digits, v.level)
    if v.label == "root":
        return spectrum(c, V)[0]
    same = [b for b, lab in _labelled(tree.alpha_digits[: v.level], V) if lab == v.label]
    return same[rank_in_label(tree, v)]


@lru_cache(maxsize=None)
def _descendants(digits: tuple[int, ...], level: int, label: str, target: int) -> int:
    """Number of vertices at level target below (and including) a vertex at the given level."""
    if level == target:
        return 1
    if level > target:
        return 0
    M = digits[level] - 1 if label == "A" else digits[level]
    return M * _descendants(digits, level + 1, "A", target) + (M + 1) * _descendants(digits, level + 2, "B", target)


def position(tree: SpectralTree, path: Sequence[int]) -> int:
    """Index of a vertex among all vertices of its level, without enumerating the level."""
    walk = tree.walk(path)
    target = walk[-1].level
    before = 0
    for parent, step in zip(walk, path):
        for sib in tree.children(parent.id)[:step]:
            s = tree.vertices[sib]
            before += _descendants(tree.alpha_digits, s.level, s.label, target)
    return before


def psi_by_position(tree: SpectralTree, v: Vertex, V: float) -> Band:
    """Band whose index equals the vertex's position in its level."""
    if v.label == "root":
        return psi(tree, v, V)
    c = alpha_expansion(tree.alpha_digits, v.level)
    return spectrum(c, V)[position(tree, v.path)]


@dataclass(frozen=True)
class EnergyInterval:
    """Returned when a finite path runs out before the band width meets the tolerance."""

    left: float
    right: float
    steps: int
    depth_exhausted: bool = True

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.left + self.right)


def boundary_energy(tree: SpectralTree, path: Sequence[int], V: float, tol: float = 1e-8) -> float | EnergyInterval:
    """Nested-band limit along a path; an EnergyInterval if the path ends first.

    Bands are looked up by position, which agrees with the label-rank
    lookup of psi and avoids typing every band at deep levels.
    """
    band = psi(tree, tree.root, V)
    for v in tree.walk(path)[1:]:
        if v.level > DEPTH_CAP:
            raise DepthExceeded(f"level {v.level} beyond the cap {DEPTH_CAP}")
        band = psi_by_position(tree, v, V)
        if band.width < tol:
            return 0.5 * (band.left + band.right)
    return EnergyInterval(band.left, band.right, len(path))


def energy_value(result: float | EnergyInterval) -> float:
    return result.midpoint if isinstance(result, EnergyInterval) else result


def make_path(tree: SpectralTree, rule: Callable[[Vertex, int], int], max_level: int) -> tuple[int, ...]:
    """Follow rule(vertex, n_children) -> child index until the next step would pass max_level."""
    path: list[int] = []
    vid = 0
    while True:
        kids = tree.children(vid)
        step = rule(tree.vertices[vid], len(kids))
        nxt = tree.vertices[kids[step]]
        if nxt.level > max_level:
            return tuple(path)
        path.append(step)
        vid = nxt.id


def leftmost_path(tree: SpectralTree, max_level: int) -> tuple[int, ...]:
    return make_path(tree, lambda v, n: 0, max_level)


def rightmost_path(tree: SpectralTree, max_level: int) -> tuple[int, ...]:
    return make_path(tree, lambda v, n: n - 1, max_level)


def random_path(tree: SpectralTree, max_level: int, rng) -> tuple[int, ...]:
    return make_path(tree, lambda v, n: int(rng.integers(n)), max_level)


def compare_paths(p1: Sequence[int], p2: Sequence[int]) -> str:
    for a, b in zip(p1, p2):
        if a != b:
            return "less" if a < b else "greater"
    return "equal"


def lipschitz_check(tree: SpectralTree, path: Sequence[int], V1: float, V2: float, tol: float = 1e-8) -> bool:
    e1 = energy_value(boundary_energy(tree, path, V1, tol))
    e2 = energy_value(boundary_energy(tree, path, V2, tol))
    w1 = _width(boundary_energy(tree, path, V1, tol), tol)
    w2 = _width(boundary_energy(tree, path, V2, tol), tol)
    return abs(e1 - e2) <= abs(V1 - V2) + w1 + w2


def _width(res, tol: float) -> float:
    return res.right - res.left if isinstance(res, EnergyInterval) else tol


@dataclass(frozen=True)
class InjectivityReport:
    divergence_level: int | None
    separation_step: int | None
    bound_fails_at: int | None

    @property
    def ok(self) -> bool:
        if self.divergence_level is None:
            return True
        return self.bound_fails_at is None or self.separation_step is not None


def injectivity_bound_check(tree: SpectralTree, p1: Sequence[int], p2: Sequence[int], V: float) -> InjectivityReport:
    """Check that two diverging paths end up in disjoint bands once the digit-sum bound fails.

    The bound is 2m <= sum of the 2m digits after the divergence level < 2/|V|.
    """
    n = 0
    while n < min(len(p1), len(p2)) and p1[n] == p2[n]:
        n += 1
    if n == min(len(p1), len(p2)):
        return InjectivityReport(None, None, None)
    k0 = tree.walk(p1[:n])[-1].level
    ds = tree.alpha_digits
    fails = None
    m = 1
    while k0 + 2 * m <= len(ds):
        s = sum(ds[k0 : k0 + 2 * m])
        if not s < 2 / abs(V):
            fails = m
            break
        m += 1
    sep = None
    w1, w2 = tree.walk(p1), tree.walk(p2)
    for i in range(n + 1, min(len(w1), len(w2))):
        b1, b2 = psi(tree, w1[i], V), psi(tree, w2[i], V)
        if strictly_left(b1, b2) or strictly_left(b2, b1):
            sep = i
            break
    return InjectivityReport(k0, sep, fails)


def ancestor_contains(tree: SpectralTree, V: float) -> bool:
    """Every tree edge u -> w has psi(w) strictly inside psi(u)."""
    return all(strictly_inside(psi(tree, w, V), psi(tree, u, V)) for u, w in tree.edges() if w.level <= tree.depth)


def order_preserved(tree: SpectralTree, V: float, max_gap: int = 1) -> list[tuple[Vertex, Vertex]]:
    """Pairs with tree order u < w and level difference <= max_gap whose bands are not ordered."""
    bad = []
    for k in range(0, tree.depth + 1):
        for dk in range(0, max_gap + 1):
            if k + dk > tree.depth:
                continue
            for u in tree.level(k):
                for w in tree.level(k + dk):
                    rel = tree.precedes(u, w)
                    if rel is None:
                        continue
                    first, second = (u, w) if rel else (w, u)
                    if not precedes(psi(tree, first, V), psi(tree, second, V)):
                        bad.append((first, second))
    return bad


def ids_by_counting(tree: SpectralTree, v: Vertex) -> float:
    """Fraction of same-level vertices to the left of v."""
    q = denominators(tree.alpha_digits, v.level)[-1]
    before = [w.id for w in tree.level(v.level)].index(v.id)
    return before / q if q else math.nan
