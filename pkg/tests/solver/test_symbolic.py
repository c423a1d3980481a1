import numpy as np
import pytest
import scipy.sparse as sp

from horst.discretize import ImpedanceMatrix
from horst.solver import (Factorization, UnsymmetricPatternError,
                          nested_dissection, symbolic_factorize)

pytestmark = pytest.mark.smoke


def test_borders_belong_to_ancestors(helmholtz: ImpedanceMatrix):
    _, tree = nested_dissection(helmholtz.dims, leaf_size=64)
    symbolic = symbolic_factorize(helmholtz.matrix, tree)
    assert len(symbolic.fronts) == len(tree)
    for front in symbolic.fronts:
        owners = tree.node_of[front.border]
        assert all(tree.is_ancestor(int(a), front.node) and a != front.node
                   for a in owners)
        assert np.all(np.diff(tree.rank[front.border]) > 0)


def test_root_front_has_no_border(helmholtz: ImpedanceMatrix):
    _, tree = nested_dissection(helmholtz.dims, leaf_size=64)
    symbolic = symbolic_factorize(helmholtz.matrix, tree)
    root = symbolic.fronts[tree.root]
    assert root.n_border == 0
    assert root.factor_entries == root.n_fully_summed ** 2
    assert symbolic.max_front_size >= root.size


def test_prediction_matches_the_dense_factors(
        fr_factorization: Factorization):
    stats = fr_factorization.stats
    assert stats.factor_entries == stats.predicted_factor_entries


def test_extend_add_map(helmholtz: ImpedanceMatrix):
    _, tree = nested_dissection(helmholtz.dims, leaf_size=64)
    symbolic = symbolic_factorize(helmholtz.matrix, tree)
    child = tree[tree.root].children[0]
    parent = symbolic.fronts[tree.root]
    variables = np.concatenate([parent.fully_summed, parent.border])
    position = symbolic.extend_add_map(child, variables)
    np.testing.assert_array_equal(variables[position],
                                  symbolic.fronts[child].border)


def test_unsymmetric_pattern_is_rejected():
    matrix = sp.csc_matrix(np.array([[1.0, 1.0, 0.0],
                                     [0.0, 1.0, 0.0],
                                     [0.0, 0.0, 1.0]]))
    _, tree = nested_dissection((3, 1, 1))
    with pytest.raises(UnsymmetricPatternError):
        symbolic_factorize(matrix, tree)


def test_size_mismatch():
    _, tree = nested_dissection((4, 1, 1))
    with pytest.raises(ValueError):
        symbolic_factorize(sp.identity(3, format='csc'), tree)


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
