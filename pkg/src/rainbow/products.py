"""Cartesian products of levelled graphs and their flag graphs.

A product of D levelled graphs has vertices graded by total level 0..D.
A flag is a level-increasing path visiting one vertex of every level;
flags carry the qubits.  The simplex graph joins two flags with an edge
of colour c_i exactly when their cell tuples differ at position i, so
each colour class decomposes into cliques.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

from .graphs import GraphError, LevelledGraph


@dataclass(frozen=True, order=True)
class Flag:
    """Cells of a level-increasing path; cells[i] has product level i."""

    cells: tuple[int, ...]


class ProductGraph:
    """Cartesian product of levelled factors, vertices graded by level sum."""

    __slots__ = ("factors", "vertices", "levels", "_index")

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise GraphError("a product needs at least one factor")
        self.factors = factors
        self.vertices = tuple(
            itertools.product(*[range(f.n_vertices) for f in factors])
        )
        self.levels = tuple(
            sum(f.levels[c] for f, c in zip(factors, cell))
            for cell in self.vertices
        )
        self._index = {cell: i for i, cell in enumerate(self.vertices)}

    @property
    def dimension(self) -> int:
        return len(self.factors)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def index(self, cell: tuple[int, ...]) -> int:
        return self._index[cell]

    def level_census(self) -> dict[int, int]:
        census: dict[int, int] = {}
        for l in self.levels:
            census[l] = census.get(l, 0) + 1
        return dict(sorted(census.items()))

    def neighbours(self, i: int) -> list[int]:
        """Product vertices differing in exactly one coordinate by a factor edge."""
        cell = self.vertices[i]
        out = []
        for k, f in enumerate(self.factors):
            for w in f.neighbours(cell[k]):
                out.append(self._index[cell[:k] + (w,) + cell[k + 1 :]])
        return sorted(out)

    def up_neighbours(self, i: int) -> list[int]:
        """Neighbours one level higher (the factor moved goes 0 -> 1)."""
        lvl = self.levels[i]
        return [j for j in self.neighbours(i) if self.levels[j] == lvl + 1]


def cartesian_product(factors) -> ProductGraph:
    return ProductGraph(factors)


def enumerate_flags(p: ProductGraph) -> list[Flag]:
    """All level-increasing paths 0 -> 1 -> ... -> D, in cell-tuple order."""
    flags: list[Flag] = []
    dim = p.dimension

    def extend(path: list[int]) -> None:
        if p.levels[path[-1]] == dim:
            flags.append(Flag(tuple(path)))
            return
        for w in p.up_neighbours(path[-1]):
            extend(path + [w])

    for v in range(p.n_vertices):
        if p.levels[v] == 0:
            extend([v])
    return flags


def predicted_flag_count(factors) -> int:
    """Closed-form flag count n0 * D! * prod(d_i) for regular factors."""
    factors = list(factors)
    if not factors:
        raise GraphError("a product needs at least one factor")
    n0 = 1
    dprod = 1
    for i, f in enumerate(factors):
        degs = set(f.degrees())
        if len(degs) != 1:
            raise GraphError(
                f"factor {i} is not regular (degrees {sorted(degs)}); "
                "count its flags by enumeration instead"
            )
        n0 *= f.levels.count(0)
        dprod *= degs.pop()
    return n0 * math.factorial(len(factors)) * dprod


class SimplexGraph:
    """Flag adjacency with one colour per cell position.

    Edges are stored as sorted (u, v, colour) triples.  Colour classes of
    a valid flag graph are disjoint unions of cliques.  Product-built
    graphs join each flag pair at most once, but imported graphs may
    connect the same pair in two colours (a two-flag rainbow pair).
    """

    __slots__ = ("flags", "n_colours", "edges", "_adj")

    def __init__(self, flags, n_colours: int, edges):
        self.flags = tuple(flags)
        self.n_colours = int(n_colours)
        nf = len(self.flags)
        seen: set[tuple[int, int, int]] = set()
        norm = []
        for u, v, c in edges:
            u, v, c = int(u), int(v), int(c)
            if u == v:
                raise GraphError(f"self-loop at flag {u}")
            if not (0 <= u < nf and 0 <= v < nf):
                raise GraphError(f"edge ({u},{v}) references a missing flag")
            if not 0 <= c < self.n_colours:
                raise GraphError(f"colour {c} out of range 0..{self.n_colours - 1}")
            e = (min(u, v), max(u, v), c)
            if e in seen:
                raise GraphError(f"duplicate edge {e[:2]} of colour {c}")
            seen.add(e)
            norm.append(e)
        self.edges = tuple(sorted(norm))
        self._adj = None

    @property
    def n_flags(self) -> int:
        return len(self.flags)

    def colour_adjacency(self) -> tuple:
        """Per-colour sorted adjacency lists, built once and cached."""
        if self._adj is None:
            adj = [
                [[] for _ in range(self.n_flags)] for _ in range(self.n_colours)
            ]
            for u, v, c in self.edges:
                adj[c][u].append(v)
                adj[c][v].append(u)
            self._adj = tuple(
                tuple(tuple(sorted(x)) for x in per_colour) for per_colour in adj
            )
        return self._adj

    def edge_colour(self, u: int, v: int) -> int | None:
        e = (min(u, v), max(u, v))
        for a, b, c in self.edges:
            if (a, b) == e:
                return c
        return None

    def check_colour_consistency(self) -> None:
        """Verify each edge colour equals the unique differing cell position."""
        for u, v, c in self.edges:
            cu, cv = self.flags[u].cells, self.flags[v].cells
            differ = [i for i in range(len(cu)) if cu[i] != cv[i]]
            if differ != [c]:
                raise GraphError(
                    f"edge ({u},{v}) coloured {c} but cells differ at {differ}"
                )

    def __repr__(self):
        return (
            f"SimplexGraph({self.n_flags} flags, {len(self.edges)} edges, "
            f"{self.n_colours} colours)"
        )


def build_simplex_graph(p: ProductGraph) -> SimplexGraph:
    """Flags of the product plus all same-cells-but-one adjacencies."""
    flags = enumerate_flags(p)
    n_colours = p.dimension + 1
    edges = []
    for colour in range(n_colours):
        buckets: dict[tuple, list[int]] = defaultdict(list)
        for idx, fl in enumerate(flags):
            buckets[fl.cells[:colour] + fl.cells[colour + 1 :]].append(idx)
        for members in buckets.values():
            for a, b in itertools.combinations(members, 2):
                edges.append((a, b, colour))
    return SimplexGraph(flags, n_colours, edges)


def induced_subgraph(g: SimplexGraph, support) -> SimplexGraph:
    """Restriction of g to a flag subset, flags re-indexed in sorted order."""
    keep = sorted(set(int(f) for f in support))
    remap = {old: new for new, old in enumerate(keep)}
    flags = [g.flags[old] for old in keep]
    edges = [
        (remap[u], remap[v], c)
        for u, v, c in g.edges
        if u in remap and v in remap
    ]
    return SimplexGraph(flags, g.n_colours, edges)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def simplex_to_json_dict(g: SimplexGraph) -> dict:
    return {
        "flags": [list(f.cells) for f in g.flags],
        "edges": [[u, v, c] for u, v, c in g.edges],
    }


def simplex_from_json_dict(doc: dict) -> SimplexGraph:
    try:
        flags = [Flag(tuple(int(c) for c in cells)) for cells in doc["flags"]]
        edges = [(int(u), int(v), int(c)) for u, v, c in doc["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed simplex graph document: {exc}") from exc
    if not edges:
        raise GraphError("simplex graph document has no edges")
    n_colours = max(c for _, _, c in edges) + 1
    return SimplexGraph(flags, n_colours, edges)


def save_simplex(g: SimplexGraph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(simplex_to_json_dict(g), fh, sort_keys=True)
        fh.write("\n")


def load_simplex(path: str | Path) -> SimplexGraph:
    with open(path, encoding="utf-8") as fh:
        return simplex_from_json_dict(json.load(fh))
