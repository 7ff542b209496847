"""Connected-component knots of the graphical lasso path.

Scanning the ordered ``|S_ij|`` from the top and keeping only edges that join
two different components reproduces the values of the regularization
parameter at which the components of the estimate change. No graphical lasso
solve is needed.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .correlation import OrderedEdges


class UnionFind:
    """Disjoint sets over ``0..size-1`` with path compression and union by size."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size
        self.count = size

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True


@dataclass(frozen=True)
class Knot:
    rho: float
    i: int
    j: int
    components_before: int
    components_after: int

    @property
    def edge(self) -> tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class KnotSequence:
    knots: tuple[Knot, ...]
    p: int
    n: int
    rho: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rho = np.array([k.rho for k in self.knots], dtype=float)
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def M(self) -> int:
        return len(self.knots)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [k.edge for k in self.knots]

    def to_records(self, names=None) -> list[dict]:
        out = []
        for k, knot in enumerate(self.knots, start=1):
            rec = {"k": k, "rho": knot.rho, "i": knot.i, "j": knot.j,
                   "components_after": knot.components_after}
            if names is not None:
                rec["name_i"], rec["name_j"] = names[knot.i], names[knot.j]
            out.append(rec)
        return out

    def to_json(self, names=None, indent=2) -> str:
        return json.dumps(self.to_records(names), indent=indent)


def knot_sequence(e: OrderedEdges) -> KnotSequence:
    uf = UnionFind(e.p)
    knots = []
    for value, i, j in e:
        if value <= 0.0:
            # |S_ij| = 0 never enters for rho >= 0
            break
        before = uf.count
        if uf.union(i, j):
            knots.append(Knot(value, i, j, before, uf.count))
            if uf.count == 1:
                # later edges all close cycles
                break
    return KnotSequence(tuple(knots), e.p, e.n)


def _component_labels(p: int, adjacency: list[list[int]]) -> list[int]:
    label = [-1] * p
    for start in range(p):
        if label[start] >= 0:
            continue
        label[start] = start
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adjacency[u]:
                if label[w] < 0:
                    label[w] = start
                    queue.append(w)
    return label


def knot_sequence_bruteforce(e: OrderedEdges) -> KnotSequence:
    """Same contract as :func:`knot_sequence`, recomputing all components by BFS
    before every candidate edge. Slow; intended as a test oracle."""
    adjacency: list[list[int]] = [[] for _ in range(e.p)]
    knots = []
    for value, i, j in e:
        if value <= 0.0:
            break
        label = _component_labels(e.p, adjacency)
        if label[i] != label[j]:
            before = len(set(label))
            adjacency[i].append(j)
            adjacency[j].append(i)
            after = len(set(_component_labels(e.p, adjacency)))
            knots.append(Knot(value, i, j, before, after))
    return KnotSequence(tuple(knots), e.p, e.n)


def components_at(ks: KnotSequence, rho: float) -> list[list[int]]:
    """Components formed by knots with value strictly above ``rho``.

    Returned as sorted index lists, ordered by smallest member.
    """
    uf = UnionFind(ks.p)
    for knot in ks.knots:
        if knot.rho > rho:
            uf.union(knot.i, knot.j)
    groups: dict[int, list[int]] = {}
    for v in range(ks.p):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values(), key=lambda g: g[0])
