"""Finitely described rooted leafless directed trees.

A tree is stored as a finite skeleton (root, parent map, skeleton depth D)
together with the ray-continuation convention: every skeleton leaf sits at
depth >= D and continues as an infinite path of degree-1 vertices, so the
continued tree is leafless.  Branching is confined to depths < D, which
makes the generation branching degrees j_k vanish for k > D.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

RAY_SEPARATOR = ":r"


class TreeValidationError(ValueError):
    """Malformed skeleton (cycle, multiple parents, stranded leaf, ...)."""


class TreeSkeleton:
    """Immutable rooted tree skeleton with ray continuation.

    Vertex labels are opaque strings.  Children are ordered
    lexicographically so matrix truncations are reproducible.
    """

    def __init__(self, root: str, parent: Mapping[str, str], skeleton_depth: int):
        root = str(root)
        parent = {str(v): str(u) for v, u in parent.items()}
        if skeleton_depth < 0:
            raise TreeValidationError("skeleton_depth must be >= 0")
        if root in parent:
            raise TreeValidationError(f"root {root!r} has a parent")
        vertices = {root, *parent.keys(), *parent.values()}
        for u in parent.values():
            if u != root and u not in parent:
                raise TreeValidationError(f"vertex {u!r} is used as a parent but has no parent itself")

        children: dict[str, list[str]] = {v: [] for v in vertices}
        for v, u in parent.items():
            children[u].append(v)
        for u in children:
            children[u].sort()

        # Depth of every vertex; also detects cycles / unreachable vertices.
        depth = {root: 0}
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for v in children[u]:
                    depth[v] = depth[u] + 1
                    nxt.append(v)
            frontier = nxt
        if len(depth) != len(vertices):
            missing = sorted(vertices - set(depth))
            raise TreeValidationError(f"vertices not reachable from root (cycle?): {missing}")

        for v in vertices:
            if not children[v] and depth[v] < skeleton_depth:
                raise TreeValidationError(
                    f"leaf {v!r} at depth {depth[v]} < skeleton_depth {skeleton_depth}: "
                    "no ray continuation"
                )
            if depth[v] >= skeleton_depth and len(children[v]) > 1:
                raise TreeValidationError(
                    f"vertex {v!r} branches at depth {depth[v]} >= skeleton_depth {skeleton_depth}"
                )

        self.root = root
        self.parent = parent
        self.skeleton_depth = int(skeleton_depth)
        self.children = {u: tuple(vs) for u, vs in children.items()}
        self.depth = depth
        self.vertices = frozenset(vertices)

    # -- construction -------------------------------------------------

    @classmethod
    def from_edges(cls, root: str, edges: Iterable[tuple[str, str]], skeleton_depth: int) -> "TreeSkeleton":
        parent: dict[str, str] = {}
        for u, v in edges:
            u, v = str(u), str(v)
            if v in parent:
                raise TreeValidationError(f"vertex {v!r} has multiple parents")
            parent[v] = u
        return cls(root, parent, skeleton_depth)

    @classmethod
    def from_json(cls, data: dict) -> "TreeSkeleton":
        try:
            return cls.from_edges(data["root"], data["edges"], data["skeleton_depth"])
        except KeyError as exc:
            raise TreeValidationError(f"tree JSON missing key {exc}") from exc

    @classmethod
    def load(cls, path) -> "TreeSkeleton":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        edges = sorted([u, v] for v, u in self.parent.items())
        return {"root": self.root, "edges": edges, "skeleton_depth": self.skeleton_depth}

    # -- structure queries ---------------------------------------------

    def skeleton_generation(self, n: int) -> tuple[str, ...]:
        return tuple(sorted(v for v in self.vertices if self.depth[v] == n))

    def degree(self, v: str) -> int:
        """Degree in the ray-continued tree (skeleton leaves have one ray child)."""
        return max(1, len(self.children[v]))

    def is_ray_label(self, v: str) -> bool:
        return RAY_SEPARATOR in v

    def expand(self, depth: int) -> "ExpandedTree":
        return ExpandedTree(self, depth)


class ExpandedTree:
    """Finite truncation of the ray-continued tree to generations 0..depth-1.

    Ray vertices get synthetic labels ``"<leaf>:r<i>"``; generations are
    lexicographically ordered.
    """

    def __init__(self, tree: TreeSkeleton, depth: int):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.tree = tree
        self.depth = depth
        gens: list[list[str]] = [[tree.root]]
        parent: dict[str, str] = {}
        generation_of: dict[str, int] = {tree.root: 0}
        ray_origin: dict[str, tuple[str, int]] = {}
        for n in range(1, depth):
            gen: list[str] = []
            for u in gens[n - 1]:
                if u in tree.children and tree.children[u]:
                    kids = tree.children[u]
                else:
                    # ray continuation of a skeleton leaf (or of a ray vertex)
                    base, idx = ray_origin.get(u, (u, 0))
                    child = f"{base}{RAY_SEPARATOR}{idx + 1}"
                    ray_origin[child] = (base, idx + 1)
                    kids = (child,)
                for v in kids:
                    parent[v] = u
                    generation_of[v] = n
                    gen.append(v)
            gen.sort()
            gens.append(gen)
        self.generations = [tuple(g) for g in gens]
        self.ray_origin = ray_origin
        self.parent = parent
        self.generation_of = generation_of
        self.labels = [v for g in self.generations for v in g]
        self.index = {v: i for i, v in enumerate(self.labels)}
        children: dict[str, list[str]] = {v: [] for v in self.labels}
        for v, u in parent.items():
            children[u].append(v)
        self.children = {u: tuple(sorted(vs)) for u, vs in children.items()}


@dataclass(frozen=True)
class BranchingDegrees:
    """Finitely supported sequence j_1, j_2, ... of generation branching degrees."""

    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", _strip_trailing_zeros(self.entries))

    def __getitem__(self, k: int) -> int:
        if k < 1:
            raise IndexError("branching degrees are indexed from k = 1")
        return self.entries[k - 1] if k <= len(self.entries) else 0

    def total(self) -> int:
        return sum(self.entries)

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, j in enumerate(self.entries, start=1) if j)

    def to_json(self) -> list[list[int]]:
        return [[k, self[k]] for k in self.support()]

    @classmethod
    def from_json(cls, pairs: Iterable[Iterable[int]]) -> "BranchingDegrees":
        items = {int(k): int(j) for k, j in pairs}
        if any(k < 1 or j < 0 for k, j in items.items()):
            raise ValueError("branching degree pairs must have k >= 1, j_k >= 0")
        top = max(items, default=0)
        return cls(tuple(items.get(k, 0) for k in range(1, top + 1)))


def _strip_trailing_zeros(entries: Iterable[int]) -> tuple[int, ...]:
    out = [int(j) for j in entries]
    if any(j < 0 for j in out):
        raise ValueError("branching degrees must be nonnegative")
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def generation(tree: TreeSkeleton, n: int) -> frozenset[str]:
    """Vertices at depth n of the ray-continued tree (synthetic ray labels included)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return frozenset(tree.expand(n + 1).generations[n])


def branching_degrees(tree: TreeSkeleton, up_to: int | None = None) -> BranchingDegrees:
    """j_k = sum over generation k-1 of (deg(u) - 1), on the ray-continued tree."""
    top = tree.skeleton_depth if up_to is None else up_to
    entries = []
    for k in range(1, top + 1):
        if k <= tree.skeleton_depth:
            entries.append(sum(tree.degree(u) - 1 for u in tree.skeleton_generation(k - 1)))
        else:
            entries.append(0)
    return BranchingDegrees(tuple(entries))


def make_eta_kappa(eta: int, kappa: int) -> TreeSkeleton:
    """The tree with a chain of kappa vertices above a single branching vertex
    of degree eta, each branch continuing as an infinite ray."""
    if eta < 2:
        raise TreeValidationError(f"eta must be >= 2, got {eta}")
    if kappa < 0:
        raise TreeValidationError(f"kappa must be >= 0, got {kappa}")
    edges = [(str(-k), str(-k + 1)) for k in range(1, kappa + 1)]
    edges += [("0", f"({i},1)") for i in range(1, eta + 1)]
    return TreeSkeleton.from_edges(str(-kappa), edges, skeleton_depth=kappa + 1)


def example_2_plus_3() -> tuple[TreeSkeleton, TreeSkeleton]:
    """The two non-graph-isomorphic trees with j = (1, 2, 0, ...).

    The first splits 1+3 at the second generation, the second 2+2.
    """
    t1 = TreeSkeleton.from_edges(
        "r",
        [("r", "a"), ("r", "b"), ("a", "a1"), ("a", "a2"), ("a", "a3"), ("b", "b1")],
        skeleton_depth=2,
    )
    t2 = TreeSkeleton.from_edges(
        "r",
        [("r", "a"), ("r", "b"), ("a", "a1"), ("a", "a2"), ("b", "b1"), ("b", "b2")],
        skeleton_depth=2,
    )
    return t1, t2


_RAY = "RAY"


def _canonical_form(tree: TreeSkeleton, v: str):
    kids = tree.children[v]
    if not kids:
        return _RAY
    sub = sorted((_canonical_form(tree, w) for w in kids), key=repr)
    if sub == [_RAY]:
        # a bare chain below v is indistinguishable from a ray
        return _RAY
    return tuple(sub)


def canonical_form(tree: TreeSkeleton):
    """Canonical encoding of the ray-continued tree, root-preserving.

    Recursive sorted-multiset encoding; infinite rays collapse to a single
    atom so different finite presentations of the same tree agree.
    """
    return _canonical_form(tree, tree.root)


def graph_isomorphic(t1: TreeSkeleton, t2: TreeSkeleton) -> bool:
    """Root-preserving directed-graph isomorphism of the ray-continued trees."""
    return canonical_form(t1) == canonical_form(t2)
