"""Single-linkage clustering of variables on absolute correlation.

Each connected-component knot is a merge: the two components joined by the
knot edge are exactly the two clusters whose largest cross correlation is the
current maximum, so the dendrogram is read straight off the knot sequence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .correlation import CorrelationMatrix, ordered_edges
from .knotpath import KnotSequence, UnionFind, knot_sequence


@dataclass(frozen=True)
class Merge:
    height: float
    left: int
    right: int
    new_node: int
    size: int


@dataclass(frozen=True)
class Dendrogram:
    """Leaves are ``0..p-1``; merge ``t`` creates internal node ``p + t``."""

    merges: tuple[Merge, ...]
    leaves: int

    @property
    def heights(self) -> list[float]:
        return [m.height for m in self.merges]

    def members(self, node: int) -> list[int]:
        if node < self.leaves:
            return [node]
        m = self.merges[node - self.leaves]
        return sorted(self.members(m.left) + self.members(m.right))

    def roots(self) -> list[int]:
        used = {m.left for m in self.merges} | {m.right for m in self.merges}
        total = self.leaves + len(self.merges)
        return [v for v in range(total) if v not in used]

    def to_json(self, indent=2) -> str:
        rows = [{"height": m.height, "left": m.left, "right": m.right,
                 "new_node": m.new_node, "size": m.size} for m in self.merges]
        return json.dumps({"leaves": self.leaves, "merges": rows}, indent=indent)

    def to_newick(self, names=None) -> str:
        """Newick text, one tree per line.

        Branch lengths are in distance units ``1 - height`` so leaves sit at 0.
        """
        label = (lambda v: str(v)) if names is None else (lambda v: _newick_label(names[v]))

        def depth(node):
            return 0.0 if node < self.leaves else 1.0 - self.merges[node - self.leaves].height

        def render(node):
            if node < self.leaves:
                return label(node)
            m = self.merges[node - self.leaves]
            d = depth(node)
            parts = [f"{render(c)}:{d - depth(c):.12g}" for c in (m.left, m.right)]
            return "(" + ",".join(parts) + ")"

        return "\n".join(render(r) + ";" for r in self.roots())


def _newick_label(name: str) -> str:
    if any(ch in name for ch in " ,:;()[]'"):
        return "'" + name.replace("'", "''") + "'"
    return name


def dendrogram_from_knots(ks: KnotSequence) -> Dendrogram:
    uf = UnionFind(ks.p)
    node_of_root = list(range(ks.p))
    merges = []
    for t, knot in enumerate(ks.knots):
        ra, rb = uf.find(knot.i), uf.find(knot.j)
        left, right = sorted((node_of_root[ra], node_of_root[rb]))
        uf.union(ra, rb)
        root = uf.find(ra)
        new_node = ks.p + t
        node_of_root[root] = new_node
        merges.append(Merge(knot.rho, left, right, new_node, uf.size[root]))
    return Dendrogram(tuple(merges), ks.p)


def single_linkage(c: CorrelationMatrix) -> Dendrogram:
    return dendrogram_from_knots(knot_sequence(ordered_edges(c)))
