"""Shared helpers: seeded random tree skeletons used across test modules."""

import numpy as np

from treeshift import TreeSkeleton


def random_skeleton(rng: np.random.Generator, max_depth: int = 5,
                    max_degree: int = 4, max_branchers: int = 3) -> TreeSkeleton:
    """Random rooted skeleton: bounded depth and degree, with at most
    ``max_branchers`` branching vertices so expanded truncations stay small.
    Every leaf is padded down to the skeleton depth (ray continuation)."""
    depth = int(rng.integers(1, max_depth + 1))
    edges = []
    frontier = ["v0"]
    counter = 1
    branchers_left = max_branchers
    for level in range(depth):
        next_frontier = []
        for u in frontier:
            if branchers_left > 0 and rng.random() < 0.4:
                deg = int(rng.integers(2, max_degree + 1))
                branchers_left -= 1
            else:
                deg = 1
            for _ in range(deg):
                v = f"v{counter}"
                counter += 1
                edges.append((u, v))
                next_frontier.append(v)
        frontier = next_frontier
    return TreeSkeleton.from_edges("v0", edges, skeleton_depth=depth)


def skeleton_corpus(seed: int = 20240817, count: int = 20) -> list[TreeSkeleton]:
    rng = np.random.default_rng(seed)
    return [random_skeleton(rng) for _ in range(count)]
