import numpy as np
import pytest

from horst.solver import nested_dissection

pytestmark = pytest.mark.smoke


def test_permutation_covers_every_unknown():
    permutation, tree = nested_dissection((10, 6, 4), leaf_size=32)
    assert tree.n_dof == 240
    np.testing.assert_array_equal(np.sort(permutation), np.arange(240))
    np.testing.assert_array_equal(tree.rank[permutation], np.arange(240))


def test_root_separator_is_the_middle_plane_of_the_longest_axis():
    _, tree = nested_dissection((10, 6, 4))
    root = tree[tree.root]
    coordinates = tree.coordinates(root.variables)
    assert root.size == 24
    assert np.all(coordinates[:, 0] == 5)
    assert len(root.children) == 2


def test_nodes_are_postordered():
    _, tree = nested_dissection((9, 9, 9), leaf_size=50)
    for node in tree.nodes:
        for child in node.children:
            assert child < node.index
            assert tree.parent[child] == node.index
            assert tree.is_ancestor(node.index, child)
    assert tree.parent[tree.root] == -1
    assert tree.subtree_dofs()[tree.root] == 729


def test_leaves_respect_the_leaf_size():
    _, tree = nested_dissection((9, 9, 9), leaf_size=50)
    leaves = [node for node in tree.nodes if not node.children]
    assert all(node.size <= 50 for node in leaves)
    assert tree.depth() >= 3


def test_subtrees_are_contiguous_in_the_elimination_order():
    _, tree = nested_dissection((8, 8, 8), leaf_size=40)
    for v in tree.postorder:
        first = tree.first_descendant[v]
        assert tree.start[first] < tree.stop[v]
        inside = np.isin(tree.node_of[tree.permutation[
            tree.start[first]:tree.stop[v]]], np.arange(first, v + 1))
        assert inside.all()


def test_top_level_subtree_labels():
    _, tree = nested_dissection((8, 8, 8), leaf_size=40)
    labels = tree.top_level_subtree(np.arange(len(tree)))
    assert labels[tree.root] == -1
    assert set(labels[:-1]) == set(tree[tree.root].children)


def test_path_to_root():
    _, tree = nested_dissection((8, 8, 8), leaf_size=40)
    path = tree.path_to_root(0)
    assert path[0] == 0 and path[-1] == tree.root
    assert len(path) <= tree.depth()


def test_small_grids_are_a_single_leaf():
    _, tree = nested_dissection((3, 3, 3))
    assert len(tree) == 1


@pytest.mark.parametrize("dims, leaf_size", [((0, 4, 4), 8), ((4, 4, 4), 0)])
def test_invalid_arguments(dims, leaf_size):
    with pytest.raises(ValueError):
        nested_dissection(dims, leaf_size=leaf_size)


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
