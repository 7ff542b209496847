import json

import numpy as np
import pytest

from glassoknots.correlation import ordered_edges
from glassoknots.knotpath import components_at, knot_sequence
from glassoknots.slink import single_linkage

from conftest import matrix_from_upper, random_correlation
from oracles import naive_single_linkage


def test_two_variables():
    tree = single_linkage(matrix_from_upper(2, {(0, 1): -0.3}))
    assert tree.heights == [0.3]
    assert (tree.merges[0].left, tree.merges[0].right, tree.merges[0].new_node) == (0, 1, 2)


def test_three_variables(three_var):
    tree = single_linkage(three_var)
    assert tree.heights == [0.9, 0.8]
    assert tree.members(tree.merges[-1].new_node) == [0, 1, 2]
    assert tree.merges[1].left == 2 and tree.merges[1].right == 3


@pytest.mark.parametrize("p", [2, 5, 11, 20])
def test_heights_equal_knots_and_naive_oracle(rng, p):
    for _ in range(10):
        c = random_correlation(rng, p, n=p + 3)
        tree = single_linkage(c)
        ks = knot_sequence(ordered_edges(c))
        assert tree.heights == list(ks.rho)
        heights, merged = naive_single_linkage(c.s, p)
        assert tree.heights == heights
        assert [tree.members(m.new_node) for m in tree.merges] == merged


def test_subtrees_are_components(rng):
    c = random_correlation(rng, 9)
    tree = single_linkage(c)
    ks = knot_sequence(ordered_edges(c))
    for t, merge in enumerate(tree.merges):
        level = merge.height
        # just below this merge the components are the current subtrees
        comps = components_at(ks, np.nextafter(level, -1.0))
        subtrees = []
        for root in range(tree.leaves + t + 1):
            used = {m.left for m in tree.merges[:t + 1]} | {m.right for m in tree.merges[:t + 1]}
            if root not in used:
                subtrees.append(tree.members(root))
        assert sorted(comps) == sorted(subtrees)


def test_json_and_newick(three_var):
    tree = single_linkage(three_var)
    data = json.loads(tree.to_json())
    assert data["leaves"] == 3
    assert [m["height"] for m in data["merges"]] == [0.9, 0.8]
    text = tree.to_newick(["a", "b", "c d"])
    assert text == "('c d':0.2,(a:0.1,b:0.1):0.1);"


def test_newick_forest():
    tree = single_linkage(matrix_from_upper(4, {(0, 1): 0.5, (2, 3): 0.4}))
    lines = tree.to_newick().splitlines()
    assert lines == ["(0:0.5,1:0.5);", "(2:0.6,3:0.6);"]
