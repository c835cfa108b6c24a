"""Geometric coloured string logicals on three-factor products.

Z logicals of codes built from D=3 products admit a labelled
description: a string of colour c running in direction k wraps the
edges of factor k while holding one edge of each transverse factor
fixed.  The flags of the string use a restricted set of step orders
depending on the colour: colour 0 moves the wrap axis first, colour 3
moves it last, and the middle colours each combine two bridging
orders, which doubles their weight.  The four colours of a fixed
direction sum to zero, so colour 3 is dropped from the bases.

On a product of single cycles every colour wraps the whole factor.  On
a product of two-lobe factors (figure-eight graphs) the mixed code
splits differently: middle-colour strings wrap a single lobe, while
colour-0 strings must wrap both lobes of their direction and carry one
label per choice of transverse lobes.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gf2
from .assembly import AssemblyError, CssCode, rebase_z_logicals
from .gf2 import BitMatrix
from .graphs import LevelledGraph, cycle_decomposition
from .products import ProductGraph, enumerate_flags

_ORDERS_BY_COLOUR = {
    0: ((0, 1, 2),),
    1: ((0, 1, 2), (1, 0, 2)),
    2: ((1, 0, 2), (1, 2, 0)),
    3: ((1, 2, 0),),
}


@dataclass(frozen=True, order=True)
class StringLabel:
    """Colour, wrap direction, and the lobe choices of one string.

    `lobes` is empty on single-cycle factors; for two-lobe factors it
    holds the wrapped lobe (middle colours) or the transverse lobes in
    increasing axis order (colour 0).
    """

    colour: int
    direction: int
    lobes: tuple[int, ...] = ()

    def __repr__(self) -> str:
        tag = f"c{self.colour}d{self.direction}"
        if self.lobes:
            tag += "l" + "".join(str(l) for l in self.lobes)
        return tag


def factor_cycles(factor: LevelledGraph) -> list[list[tuple[int, int]]]:
    """Edge sets of a cycle decomposition, each sorted, cycles by min edge."""
    cycles = []
    for walk in cycle_decomposition(factor):
        edges = sorted(
            (min(u, v), max(u, v)) for u, v in zip(walk, walk[1:])
        )
        cycles.append(edges)
    return sorted(cycles)


def _low_high(factor: LevelledGraph, edge: tuple[int, int]) -> tuple[int, int]:
    u, v = edge
    return (u, v) if factor.levels[u] == 0 else (v, u)


def _flag_index(p: ProductGraph) -> dict[tuple[int, ...], int]:
    return {f.cells: i for i, f in enumerate(enumerate_flags(p))}


def _string_support(p, flag_id, colour, k, trans_edges, wrap_edges):
    """Flag set of the (colour, direction k) string.

    `trans_edges` pins one edge per transverse axis; `wrap_edges` is
    the edge range of factor k.  Step orders are the colour's bridging
    orders with the wrap axis substituted first and the transverse axes
    in increasing order after it.
    """
    s1, s2 = (a for a in range(3) if a != k)
    axis_of = {0: k, 1: s1, 2: s2}
    support = set()
    for wrap in wrap_edges:
        edges = {k: wrap, s1: trans_edges[s1], s2: trans_edges[s2]}
        for order in _ORDERS_BY_COLOUR[colour]:
            cell = [_low_high(p.factors[a], edges[a])[0] for a in range(3)]
            cells = [p.index(tuple(cell))]
            for slot in order:
                a = axis_of[slot]
                cell[a] = _low_high(p.factors[a], edges[a])[1]
                cells.append(p.index(tuple(cell)))
            support.add(flag_id[tuple(cells)])
    return sorted(support)


def cycle_string_basis(p: ProductGraph):
    """Nine labelled strings (colour, direction) on a D=3 cycle product.

    Colour-0 strings have weight equal to the cycle length, middle
    colours twice that.  Valid for every assignment class since pure
    cycle products build one and the same colour code.
    """
    if p.dimension != 3:
        raise AssemblyError("string bases cover three-factor products only")
    cycles = [factor_cycles(f) for f in p.factors]
    if any(len(c) != 1 for c in cycles):
        raise AssemblyError("every factor must decompose into one cycle")
    flag_id = _flag_index(p)
    trans = {a: cycles[a][0][0] for a in range(3)}
    labels, rows = [], []
    for colour in range(3):
        for k in range(3):
            labels.append(StringLabel(colour, k))
            rows.append(
                _string_support(p, flag_id, colour, k, trans, cycles[k][0])
            )
    n = len(flag_id)
    return labels, BitMatrix.from_supports(rows, n)


def two_lobe_string_basis(p: ProductGraph):
    """Labelled strings of the mixed code on a D=3 two-lobe product.

    Middle-colour strings wrap one lobe each (two per direction per
    colour); colour-0 strings wrap both lobes of their direction and
    are labelled by the transverse lobe pair, four per direction.
    """
    if p.dimension != 3:
        raise AssemblyError("string bases cover three-factor products only")
    cycles = [factor_cycles(f) for f in p.factors]
    if any(len(c) != 2 for c in cycles):
        raise AssemblyError("every factor must decompose into two lobes")
    flag_id = _flag_index(p)
    labels, rows = [], []
    for colour in (1, 2):
        for k in range(3):
            for lobe in range(2):
                trans = {a: cycles[a][0][0] for a in range(3)}
                labels.append(StringLabel(colour, k, (lobe,)))
                rows.append(
                    _string_support(
                        p, flag_id, colour, k, trans, cycles[k][lobe]
                    )
                )
    for k in range(3):
        s1, s2 = (a for a in range(3) if a != k)
        for la in range(2):
            for lb in range(2):
                trans = {s1: cycles[s1][la][0], s2: cycles[s2][lb][0]}
                labels.append(StringLabel(0, k, (la, lb)))
                rows.append(
                    _string_support(
                        p, flag_id, 0, k, trans,
                        cycles[k][0] + cycles[k][1],
                    )
                )
    n = len(flag_id)
    return labels, BitMatrix.from_supports(rows, n)


def install_strings(code: CssCode, p: ProductGraph) -> list[StringLabel]:
    """Rebase the code's Z logicals onto a labelled string basis.

    Chooses the cycle basis when every factor is a single cycle and the
    two-lobe mixed basis when every factor has two lobes and the code
    is mixed.  Returns the labels in row order of the new lz; lx is
    re-paired so row i of lx is the partner of string i.
    """
    cycles = [len(factor_cycles(f)) for f in p.factors]
    if p.dimension == 3 and all(c == 1 for c in cycles):
        labels, mat = cycle_string_basis(p)
    elif (
        p.dimension == 3
        and all(c == 2 for c in cycles)
        and code.assignment.kind == "mixed"
    ):
        labels, mat = two_lobe_string_basis(p)
    else:
        raise AssemblyError(
            "no labelled string basis for this factor family and class"
        )
    rebase_z_logicals(code, mat)
    return labels


def labelled_interactions(code: CssCode, a, labels):
    """CCZ census as label triples, sorted."""
    from .transversal import ccz_interactions

    triples = ccz_interactions(code, a)
    return sorted(
        tuple(sorted(labels[i] for i in t)) for t in triples
    )
