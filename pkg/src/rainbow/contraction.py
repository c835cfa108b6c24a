"""Edge contraction of simplex graphs and contracted-code assembly.

Contracting colour c removes every c-coloured edge and glues each
connected component of the colour-c subgraph into a single vertex.
Contractions of different colours commute, so a contracted graph is
described by the base graph plus the set of removed colours.  Qubits of
a contracted code live on the contracted vertices and stabiliser
supports are images of base-graph subgraph families under the vertex
map, taken as sets: a family may freely reference removed colours,
since it is enumerated on the base graph before mapping.

Not every colour is safe to contract.  The screening rule checks that
all two-colour rainbow generators through the candidate colour have
size divisible by four; odd-halved generators signal images that stop
commuting.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import gf2
from .assembly import AssemblyError, CssCode, RowOrigin
from .gf2 import BitMatrix
from .graphs import GraphError
from .products import SimplexGraph
from .subgraphs import maximal_subgraphs, rainbow_two, supports_matrix


@dataclass(frozen=True)
class ContractedGraph:
    """A simplex graph with some colours contracted away.

    `vertex_map[f]` is the contracted vertex carrying base flag f.
    Vertices are labelled in order of their smallest base flag, so
    contracting the same colour set in any order yields equal objects.
    `edges` keeps one (u, v, colour) triple per surviving coloured
    adjacency; internal edges of a glued class are dropped.
    """

    base: SimplexGraph
    removed: frozenset[int]
    vertex_map: tuple[int, ...]
    n_vertices: int
    edges: tuple[tuple[int, int, int], ...]

    @property
    def n_colours(self) -> int:
        return self.base.n_colours

    def classes(self) -> list[tuple[int, ...]]:
        """Base flags of each contracted vertex, indexed by vertex."""
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for f, v in enumerate(self.vertex_map):
            out[v].append(f)
        return [tuple(c) for c in out]

    def map_support(self, support) -> tuple[int, ...]:
        """Image of a base flag set: the contracted vertices it touches."""
        return tuple(sorted({self.vertex_map[f] for f in support}))

    def __repr__(self) -> str:
        return (
            f"ContractedGraph({self.n_vertices} vertices, "
            f"{len(self.edges)} edges, removed={sorted(self.removed)})"
        )


def _as_contracted(g: SimplexGraph | ContractedGraph) -> ContractedGraph:
    if isinstance(g, ContractedGraph):
        return g
    return ContractedGraph(
        base=g,
        removed=frozenset(),
        vertex_map=tuple(range(g.n_flags)),
        n_vertices=g.n_flags,
        edges=g.edges,
    )


def contract(g: SimplexGraph | ContractedGraph, colour: int) -> ContractedGraph:
    """Contract every edge of one colour, gluing its components.

    Accepts a plain simplex graph or an already contracted one, so
    chains compose; the result is independent of the order in which
    colours are removed.
    """
    cg = _as_contracted(g)
    colour = int(colour)
    if not 0 <= colour < cg.n_colours:
        raise GraphError(f"colour {colour} out of range 0..{cg.n_colours - 1}")
    if colour in cg.removed:
        raise GraphError(f"colour {colour} is already contracted")

    adj: dict[int, list[int]] = {}
    for u, v, c in cg.edges:
        if c == colour:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
    group = list(range(cg.n_vertices))
    for start in range(cg.n_vertices):
        if group[start] != start or start not in adj:
            continue
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj.get(u, ()):
                if group[w] > start:
                    group[w] = start
                    queue.append(w)

    composed = [group[cg.vertex_map[f]] for f in range(len(cg.vertex_map))]
    order: dict[int, int] = {}
    for root in composed:
        if root not in order:
            order[root] = len(order)
    vertex_map = tuple(order[root] for root in composed)
    relabel = {old: order[group[old]] for old in range(cg.n_vertices)}
    edges = sorted(
        {
            (min(relabel[u], relabel[v]), max(relabel[u], relabel[v]), c)
            for u, v, c in cg.edges
            if c != colour and relabel[u] != relabel[v]
        }
    )
    return ContractedGraph(
        base=cg.base,
        removed=cg.removed | {colour},
        vertex_map=vertex_map,
        n_vertices=len(order),
        edges=tuple(edges),
    )


@dataclass(frozen=True)
class ContractibilityReport:
    """Mod-4 screening of two-colour rainbow generators through a colour.

    Each violation is (pair, generator index, size) for a rainbow
    generator whose support size is not divisible by four.
    """

    colour: int
    violations: tuple[tuple[tuple[int, int], int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __repr__(self) -> str:
        state = "ok" if self.ok else f"{len(self.violations)} violations"
        return f"ContractibilityReport(colour={self.colour}, {state})"


def contractibility_check(g: SimplexGraph, colour: int) -> ContractibilityReport:
    """Screen a colour for contraction on the base simplex graph.

    For every colour pair through `colour`, each generating two-colour
    rainbow support must have size 0 mod 4; violating generators are
    reported with their pair and size.
    """
    colour = int(colour)
    if not 0 <= colour < g.n_colours:
        raise GraphError(f"colour {colour} out of range 0..{g.n_colours - 1}")
    violations = []
    for other in range(g.n_colours):
        if other == colour:
            continue
        pair = (min(colour, other), max(colour, other))
        for idx, sub in enumerate(rainbow_two(g, pair)):
            size = len(sub.support)
            if size % 4:
                violations.append((pair, idx, size))
    return ContractibilityReport(colour, tuple(violations))


def _family_rows(cg: ContractedGraph, colours, kind: str):
    cs = tuple(sorted(int(c) for c in colours))
    if kind == "maximal":
        subs = maximal_subgraphs(cg.base, cs)
    elif kind == "rainbow":
        if len(cs) != 2:
            raise AssemblyError(
                "contracted rainbow families are generated for colour "
                "pairs; larger sets need the opposing checks of the "
                "base code"
            )
        subs = rainbow_two(cg.base, cs)
    else:
        raise AssemblyError(f"unknown family kind {kind!r}")
    rows = []
    origins = []
    for idx, sub in enumerate(subs):
        image = cg.map_support(sub.support)
        if not image:
            continue
        rows.append(image)
        origins.append(RowOrigin(family=kind, colours=cs, index=idx))
    return rows, origins


def contracted_code(cg: ContractedGraph, family_spec) -> CssCode:
    """Assemble a CSS code on the contracted vertices from family images.

    `family_spec` lists (side, colours, kind) with side "x" or "z",
    kind "maximal" or "rainbow"; colour sets may include removed
    colours because every family is enumerated on the base graph and
    mapped through the contraction.  Commutation of the images is
    verified; the first anticommuting pair is reported on rejection.
    """
    sides: dict[str, list] = {"x": [], "z": []}
    origins: dict[str, list] = {"x": [], "z": []}
    for side, colours, kind in family_spec:
        s = str(side).lower()
        if s not in sides:
            raise AssemblyError(f"side must be X or Z, got {side!r}")
        rows, row_origins = _family_rows(cg, colours, str(kind).lower())
        sides[s].extend(rows)
        origins[s].extend(row_origins)
    if not sides["x"] or not sides["z"]:
        raise AssemblyError("need at least one family per side")
    n = cg.n_vertices
    hx = BitMatrix.from_supports(sides["x"], n)
    hz = BitMatrix.from_supports(sides["z"], n)
    offending = gf2.first_odd_overlap(hx, hz)
    if offending is not None:
        i, j = offending
        raise AssemblyError(
            f"contracted X row {i} ({origins['x'][i]}) anticommutes with "
            f"Z row {j} ({origins['z'][j]})",
            pair=(i, j),
        )
    return CssCode(
        n=n,
        hx=hx,
        hz=hz,
        assignment=None,
        x_origins=tuple(origins["x"]),
        z_origins=tuple(origins["z"]),
    )
