import math

import pytest

from activerank.errors import EmptyList
from activerank.pit import NEG_INF, POS_INF, build_pit, locate_interval, order_from_ranking, pit_depth


def check_tree(tree, items):
    """Structural invariants of a PIT built from the most-preferred-first list ``items``."""
    pos = {x: k for k, x in enumerate(items)}
    # rank key: larger is more preferred, sentinels at the extremes
    key = {NEG_INF: -1, POS_INF: len(items) + 1}
    key.update({x: len(items) - pos[x] for x in items})

    leaves = tree.leaves()
    assert len(leaves) == len(items) + 1
    expected = list(zip([NEG_INF] + items[::-1], items[::-1] + [POS_INF]))
    assert [(int(tree.left[u]), int(tree.right[u])) for u in leaves] == expected
    for u in range(len(tree)):
        lo, hi = key[int(tree.left[u])], key[int(tree.right[u])]
        assert lo < hi
        if not tree.is_leaf(u):
            a, b = int(tree.lchild[u]), int(tree.rchild[u])
            m = int(tree.mid[u])
            assert lo < key[m] < hi
            assert (tree.left[a], tree.right[a]) == (tree.left[u], m)
            assert (tree.left[b], tree.right[b]) == (m, tree.right[u])
            assert tree.parent[a] == tree.parent[b] == u
            assert tree.node_depth[a] == tree.node_depth[u] + 1
    assert tree.depth == pit_depth(len(items))


def test_three_item_tree():
    tree = build_pit([3, 2, 1])
    root = tree.node(0)
    assert (root.left, root.right, root.mid) == (NEG_INF, POS_INF, 2)
    lc, rc = tree.node(root.lchild), tree.node(root.rchild)
    assert (lc.left, lc.right, lc.mid) == (NEG_INF, 2, 1)
    assert (rc.left, rc.right, rc.mid) == (2, POS_INF, 3)
    bounds = [(tree.left[u], tree.right[u]) for u in tree.leaves()]
    assert bounds == [(NEG_INF, 1), (1, 2), (2, 3), (3, POS_INF)]
    assert tree.depth == 3


def test_three_item_dump():
    assert build_pit([3, 2, 1]).dump().splitlines() == [
        "1 0: (-inf, +inf) mid=2 parent=-",
        "2 1: (-inf, 2) mid=1 parent=0",
        "2 2: (2, +inf) mid=3 parent=0",
        "3 3: (-inf, 1) mid=- parent=1",
        "3 4: (1, 2) mid=- parent=1",
        "3 5: (2, 3) mid=- parent=2",
        "3 6: (3, +inf) mid=- parent=2",
    ]


def test_single_item():
    tree = build_pit([5])
    assert tree.depth == 2
    assert [(tree.left[u], tree.right[u]) for u in tree.leaves()] == [(NEG_INF, 5), (5, POS_INF)]
    assert tree.node(0).mid == 5 and tree.node(1).is_leaf


def test_seven_items():
    tree = build_pit(list(range(1, 8)))
    assert len(tree.leaves()) == 8 and tree.depth == 4


def test_depth_formula_matches_logarithm():
    for size in range(1, 1 << 16):
        assert pit_depth(size) == math.ceil(1 + math.log2(size + 1))


@pytest.mark.parametrize("size", list(range(1, 130)) + [255, 256, 257, 511, 512, 1000, 1023, 1024])
def test_invariants(size):
    items = list(range(size, 0, -1))
    check_tree(build_pit(items), items)


def test_invariants_on_shuffled_labels():
    items = [7, 3, 11, 1, 9]
    check_tree(build_pit(items), items)


def test_locate_matches_linear_scan():
    items = [9, 14, 2, 7, 15, 1, 12, 5, 3, 11, 8, 13, 6, 10]  # 4 is missing: it becomes the probe
    full = list(items)
    tree = build_pit(items)
    for probe_pos in range(len(items) + 1):
        ranking = full[:probe_pos] + [4] + full[probe_pos:]
        leaf = locate_interval(tree, 4, order_from_ranking(ranking))
        scan = [u for u in tree.leaves() if tree.insertion_index(u) == probe_pos]
        assert scan == [leaf]
        k = tree.insertion_index(leaf)
        assert items[:k] + [4] + items[k:] == ranking


def test_empty_list():
    with pytest.raises(EmptyList):
        build_pit([])


def test_arrays_read_only():
    tree = build_pit([1, 2])
    with pytest.raises(ValueError):
        tree.left[0] = 3
