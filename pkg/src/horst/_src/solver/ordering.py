"""
Geometric nested dissection of regular grids
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

# Third-party core
import numpy as np

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

DEFAULT_LEAF_SIZE = 128

Box = Tuple[Tuple[int, int], ...]


@dataclass
class TreeNode:
    """One separator (or leaf subdomain) of the elimination tree

    Parameters
    ----------
    index
        postorder position of the node
    variables
        grid unknowns eliminated at this node, flat indices
    box
        half-open index ranges the node's subtree covers per axis
    children
        indices of the child nodes
    parent
        index of the parent node, -1 for the root
    """
    index: int
    variables: np.ndarray
    box: Box
    children: List[int] = field(default_factory=list)
    parent: int = -1

    @property
    def size(self) -> int:
        return self.variables.size


class EliminationTree:
    """Postordered tree of separators

    Node ids equal postorder positions, so every subtree occupies the id
    range ``[first_descendant[v], v]`` and its unknowns are contiguous in the
    elimination order.

    Parameters
    ----------
    nodes
        tree nodes in postorder
    dims
        grid dimensions the unknowns live on
    """

    def __init__(self, nodes: Sequence[TreeNode], dims: Tuple[int, ...]):
        self.nodes = list(nodes)
        self.dims = tuple(int(n) for n in dims)
        self.n_dof = int(np.prod(self.dims))

        self.parent = np.array([node.parent for node in self.nodes],
                               dtype=np.int64)
        self.permutation = np.concatenate(
            [node.variables for node in self.nodes]).astype(np.int64)
        self.rank = np.empty(self.n_dof, dtype=np.int64)
        self.rank[self.permutation] = np.arange(self.n_dof)

        sizes = np.array([node.size for node in self.nodes], dtype=np.int64)
        self.start = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        self.stop = self.start + sizes

        self.node_of = np.empty(self.n_dof, dtype=np.int64)
        for node in self.nodes:
            self.node_of[node.variables] = node.index

        self.first_descendant = np.arange(len(self.nodes))
        for node in self.nodes:
            for child in node.children:
                self.first_descendant[node.index] = min(
                    self.first_descendant[node.index],
                    self.first_descendant[child])

    def __len__(self) -> int:
        return len(self.nodes)

    def __getitem__(self, index: int) -> TreeNode:
        return self.nodes[index]

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def postorder(self) -> range:
        return range(len(self.nodes))

    def depth(self) -> int:
        """Number of nodes on the longest root-to-leaf path"""
        level = np.zeros(len(self.nodes), dtype=np.int64)
        for v in reversed(self.postorder):
            p = self.parent[v]
            level[v] = 1 if p < 0 else level[p] + 1
        return int(level.max())

    def subtree_dofs(self) -> np.ndarray:
        """Number of unknowns in the subtree of each node"""
        return self.stop - self.start[self.first_descendant]

    def is_ancestor(self, a: int, v: int) -> bool:
        """True when a is v or one of its ancestors"""
        return self.first_descendant[a] <= v <= a

    def path_to_root(self, v: int) -> List[int]:
        path = []
        while v >= 0:
            path.append(int(v))
            v = self.parent[v]
        return path

    def coordinates(self, variables: np.ndarray) -> np.ndarray:
        """Grid indices (ix, iy, iz) of flat unknowns, shape (n, 3)"""
        return np.column_stack(np.unravel_index(variables, self.dims))

    def top_level_subtree(self, v: np.ndarray) -> np.ndarray:
        """Child of the root containing each node, -1 for the root itself"""
        v = np.asarray(v)
        label = np.full(v.shape, -1, dtype=np.int64)
        for child in self.nodes[self.root].children:
            inside = (self.first_descendant[child] <= v) & (v <= child)
            label[inside] = child
        return label


def _box_variables(box: Box, dims) -> np.ndarray:
    ranges = [np.arange(lo, hi) for lo, hi in box]
    mesh = np.meshgrid(*ranges, indexing='ij')
    return np.ravel_multi_index([m.ravel() for m in mesh], dims)


def _box_size(box: Box) -> int:
    return int(np.prod([hi - lo for lo, hi in box]))


def nested_dissection(dims: Sequence[int],
                      leaf_size: int = DEFAULT_LEAF_SIZE,
                      separator_width: int = 1
                      ) -> Tuple[np.ndarray, EliminationTree]:
    """Recursive bisection of the grid by separator planes

    Each box is cut along its longest axis (the first one on ties) by
    ``separator_width`` planes starting at the middle index; boxes holding
    at most ``leaf_size`` unknowns become leaves.

    Parameters
    ----------
    dims
        grid dimensions (nx, ny, nz)
    leaf_size, optional
        largest leaf subdomain, by default 128
    separator_width, optional
        number of planes per separator, by default 1

    Returns
    -------
    Tuple[np.ndarray, EliminationTree]
        elimination order of the flat unknowns and the postordered tree
    """
    dims = tuple(int(n) for n in dims)
    if min(dims) < 1:
        raise ValueError(f"Grid dimensions must be positive, got {dims}")
    if leaf_size < 1 or separator_width < 1:
        raise ValueError("leaf_size and separator_width must be >= 1")

    nodes: List[TreeNode] = []

    def build(box: Box) -> int:
        lengths = [hi - lo for lo, hi in box]
        if _box_size(box) <= leaf_size or max(lengths) <= separator_width:
            node = TreeNode(len(nodes), _box_variables(box, dims), box)
            nodes.append(node)
            return node.index

        axis = int(np.argmax(lengths))
        lo, hi = box[axis]
        mid = lo + lengths[axis] // 2
        cut = min(mid + separator_width, hi)

        children = []
        for part in ((lo, mid), (cut, hi)):
            if part[1] > part[0]:
                sub = tuple(part if a == axis else box[a] for a in range(3))
                children.append(build(sub))

        separator = tuple((mid, cut) if a == axis else box[a]
                          for a in range(3))
        node = TreeNode(len(nodes), _box_variables(separator, dims), box,
                        children=children)
        nodes.append(node)
        for child in children:
            nodes[child].parent = node.index
        return node.index

    full = tuple((0, n) for n in dims)
    build(full)
    tree = EliminationTree(nodes, dims)
    return tree.permutation, tree
