"""Maximal and rainbow subgraph families of coloured flag graphs.

For a colour set S, the S-maximal subgraphs are the connected components
of the S-coloured edge restriction.  An S-rainbow subgraph touches every
one of its vertices with exactly one witness edge of each colour in S.
Two-colour rainbow supports form the cycle space of the clique graph
(one node per single-colour clique, one edge per flag), so a fundamental
cycle basis generates all of them; multi-colour rainbow families are
computed as kernel intersections within each S-maximal component.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import gf2
from .gf2 import BitMatrix
from .graphs import GraphError
from .products import SimplexGraph


@dataclass(frozen=True)
class Subgraph:
    """Vertex support of one maximal or rainbow subgraph.

    `witness` lists (u, v, colour) edges demonstrating the rainbow
    property; it stays None for maximal subgraphs.
    """

    kind: str
    colours: frozenset[int]
    support: tuple[int, ...]
    witness: tuple[tuple[int, int, int], ...] | None = None


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _validate_colours(g: SimplexGraph, colours) -> frozenset[int]:
    cs = frozenset(int(c) for c in colours)
    bad = [c for c in cs if not 0 <= c < g.n_colours]
    if bad:
        raise GraphError(f"colours {sorted(bad)} out of range 0..{g.n_colours - 1}")
    return cs


def _components(g: SimplexGraph, colours: frozenset[int]) -> list[tuple[int, ...]]:
    dsu = _DSU(g.n_flags)
    for u, v, c in g.edges:
        if c in colours:
            dsu.union(u, v)
    groups: dict[int, list[int]] = defaultdict(list)
    for f in range(g.n_flags):
        groups[dsu.find(f)].append(f)
    return [tuple(groups[root]) for root in sorted(groups)]


def maximal_subgraphs(g: SimplexGraph, colours) -> list[Subgraph]:
    """Connected components of the restriction to the given colours."""
    cs = _validate_colours(g, colours)
    return [
        Subgraph(kind="maximal", colours=cs, support=comp)
        for comp in _components(g, cs)
    ]


def supports_matrix(subgraphs, n_flags: int) -> BitMatrix:
    """Stack subgraph supports as rows of a bit matrix."""
    return BitMatrix.from_supports([s.support for s in subgraphs], n_flags)


def clique_census(g: SimplexGraph, colour: int) -> dict[int, int]:
    """Sizes of the single-colour components, verified to be cliques."""
    (colour,) = _validate_colours(g, [colour])
    dsu = _DSU(g.n_flags)
    edge_count: dict[int, int] = defaultdict(int)
    for u, v, c in g.edges:
        if c == colour:
            dsu.union(u, v)
    for u, v, c in g.edges:
        if c == colour:
            edge_count[dsu.find(u)] += 1
    sizes: dict[int, int] = defaultdict(int)
    for comp in _components(g, frozenset([colour])):
        s = len(comp)
        if edge_count[dsu.find(comp[0])] != s * (s - 1) // 2:
            raise GraphError(
                f"colour-{colour} component {comp[:8]}... is not a clique; "
                "not a valid flag graph"
            )
        sizes[s] += 1
    return dict(sorted(sizes.items()))


# ---------------------------------------------------------------------------
# two-colour rainbow generating sets via the clique graph
# ---------------------------------------------------------------------------


def _clique_ids(g: SimplexGraph, colour: int) -> tuple[list[tuple[int, ...]], list[int]]:
    """Single-colour cliques plus a flag -> clique-index map."""
    comps = _components(g, frozenset([colour]))
    owner = [0] * g.n_flags
    for ci, comp in enumerate(comps):
        for f in comp:
            owner[f] = ci
    return comps, owner


def rainbow_two(g: SimplexGraph, pair) -> list[Subgraph]:
    """Generating set of two-colour rainbow supports, one per clique-graph
    fundamental cycle.

    The clique graph has one node per single-colour clique and one edge
    per flag (joining the flag's two cliques).  Its simple cycles are
    exactly the witness-valid rainbow supports: around a cycle each
    visited clique contains two chosen flags, which pair up as the
    witness edge of that clique's colour.
    """
    a, b = (int(c) for c in pair)
    if a == b:
        raise GraphError(f"rainbow pair must be two distinct colours, got ({a},{b})")
    _validate_colours(g, [a, b])
    a_cliques, a_owner = _clique_ids(g, a)
    b_cliques, b_owner = _clique_ids(g, b)
    n_a = len(a_cliques)

    # clique-graph adjacency: node -> [(flag, other_node)] in flag order
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_a + len(b_cliques))]
    for f in range(g.n_flags):
        x, y = a_owner[f], n_a + b_owner[f]
        adj[x].append((f, y))
        adj[y].append((f, x))
    for lst in adj:
        lst.sort()

    parent_node = [-1] * len(adj)
    parent_flag = [-1] * len(adj)
    depth = [0] * len(adj)
    visited = [False] * len(adj)
    tree_flags: set[int] = set()

    for f_start in range(g.n_flags):
        root = a_owner[f_start]
        if visited[root]:
            continue
        visited[root] = True
        queue = [root]
        while queue:
            nxt = []
            for x in queue:
                for f, y in adj[x]:
                    if not visited[y]:
                        visited[y] = True
                        parent_node[y] = x
                        parent_flag[y] = f
                        depth[y] = depth[x] + 1
                        tree_flags.add(f)
                        nxt.append(y)
            queue = nxt

    out = []
    for f in range(g.n_flags):
        if f in tree_flags:
            continue
        x, y = a_owner[f], n_a + b_owner[f]
        cycle = {f}
        while depth[x] > depth[y]:
            cycle.symmetric_difference_update({parent_flag[x]})
            x = parent_node[x]
        while depth[y] > depth[x]:
            cycle.symmetric_difference_update({parent_flag[y]})
            y = parent_node[y]
        while x != y:
            cycle.symmetric_difference_update({parent_flag[x], parent_flag[y]})
            x, y = parent_node[x], parent_node[y]
        support = tuple(sorted(cycle))
        witness = _pair_witnesses(support, a, a_owner, b, b_owner)
        out.append(
            Subgraph(
                kind="rainbow",
                colours=frozenset((a, b)),
                support=support,
                witness=witness,
            )
        )
    return out


def _pair_witnesses(support, a, a_owner, b, b_owner):
    """Pair the two flags a simple clique-graph cycle picks in each clique."""
    witness = []
    for colour, owner in ((a, a_owner), (b, b_owner)):
        groups: dict[int, list[int]] = defaultdict(list)
        for f in support:
            groups[owner[f]].append(f)
        for members in groups.values():
            if len(members) != 2:
                raise GraphError(
                    f"cycle meets a colour-{colour} clique {len(members)} times"
                )
            witness.append((members[0], members[1], colour))
    return tuple(sorted(witness))


def rainbow_rank(g: SimplexGraph) -> int:
    """Independent rainbow supports of a connected two-coloured graph."""
    used = sorted({c for _, _, c in g.edges})
    if len(used) != 2:
        raise GraphError(f"expected exactly two edge colours, found {used}")
    a, b = used
    if len(_components(g, frozenset(used))) != 1:
        raise GraphError("rainbow rank is defined on a single connected component")
    n_cliques = len(_components(g, frozenset([a]))) + len(
        _components(g, frozenset([b]))
    )
    return g.n_flags - n_cliques + 1


# ---------------------------------------------------------------------------
# multi-colour rainbow spans
# ---------------------------------------------------------------------------


def rainbow_multi(g: SimplexGraph, colours, hz: BitMatrix) -> BitMatrix:
    """Echelonized span of the S-rainbow family for |S| > 2.

    Within each S-maximal component f, the family is the intersection of
    kernel(hz) with the coordinate span of f; restricting hz to the
    columns of f and lifting its kernel back gives the same subspace
    without forming either big span explicitly.
    """
    cs = _validate_colours(g, colours)
    if len(cs) <= 2:
        raise GraphError(f"need more than two colours, got {sorted(cs)}")
    if hz.ncols != g.n_flags:
        raise ValueError(
            f"hz has {hz.ncols} columns but the graph has {g.n_flags} flags"
        )
    pieces = []
    for comp in _components(g, cs):
        cols = np.asarray(comp, dtype=np.int64)
        restricted = gf2.select_columns(hz, cols)
        nonzero = restricted.data.any(axis=1)
        restricted = BitMatrix(restricted.data[nonzero], restricted.ncols)
        ker = gf2.kernel(restricted)
        if ker.nrows:
            pieces.append(gf2.scatter_columns(ker, cols, g.n_flags))
    if not pieces:
        return BitMatrix.zeros(0, g.n_flags)
    return gf2.rref(gf2.vstack(pieces))[0]
