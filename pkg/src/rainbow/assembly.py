"""CSS code assembly from maximal and rainbow subgraph families.

Stabilizer generators are indicator vectors of subgraph supports.  Four
assignment classes trade maximal families (pinned sets) against rainbow
families on each side.  Check matrices keep one raw row per generating
subgraph so that row weights stay inspectable; echelonization happens
only inside rank and logical computations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .gf2 import BitMatrix
from .products import SimplexGraph
from .subgraphs import (
    maximal_subgraphs,
    rainbow_multi,
    rainbow_two,
    supports_matrix,
)

KINDS = ("pin", "generic", "anti_generic", "mixed")


class AssemblyError(ValueError):
    """Invalid assignment, or generators that fail to commute.

    `pair` carries the offending (x_row, z_row) indices when commutation
    verification fails.
    """

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class Assignment:
    """Stabilizer class plus the (x, z) subgraph sizes."""

    kind: str
    x: int
    z: int

    def validate(self, n_colours: int) -> None:
        d = n_colours - 1
        if self.kind not in KINDS:
            raise AssemblyError(
                f"unknown class {self.kind!r}; expected one of {KINDS}"
            )
        if not (2 <= self.x <= d) or not (2 <= self.z <= d):
            raise AssemblyError(
                f"need 2 <= x,z <= {d} for {n_colours} colours, got "
                f"x={self.x}, z={self.z}"
            )
        if self.x + self.z < d + 2:
            raise AssemblyError(
                f"need x+z >= {d + 2} for {n_colours} colours, got "
                f"{self.x}+{self.z}"
            )
        if self.kind == "mixed":
            if d < 3:
                raise AssemblyError(
                    "mixed assignment needs at least 3 dimensions: with "
                    "d=2 the two-colour families appear on both sides"
                )
            if self.x != d or self.z != 2:
                raise AssemblyError(
                    f"mixed assignment is defined for x={d}, z=2 only"
                )


@dataclass(frozen=True)
class RowOrigin:
    """Which subgraph family produced one raw check row."""

    family: str  # "maximal" | "rainbow" | "rainbow_span"
    colours: tuple[int, ...]
    index: int


@dataclass
class CssCode:
    """A CSS code on the flags of a simplex graph.

    hx/hz hold raw generator rows (one per subgraph, spans for multi
    colour rainbow families); lx/lz are filled by `logical_basis`.
    """

    n: int
    hx: BitMatrix
    hz: BitMatrix
    assignment: Assignment | None
    x_origins: tuple[RowOrigin, ...]
    z_origins: tuple[RowOrigin, ...]
    lx: BitMatrix | None = None
    lz: BitMatrix | None = None
    _ranks: tuple[int, int] | None = field(default=None, repr=False)

    def ranks(self) -> tuple[int, int]:
        if self._ranks is None:
            self._ranks = (gf2.rank(self.hx), gf2.rank(self.hz))
        return self._ranks

    @property
    def k(self) -> int:
        rx, rz = self.ranks()
        return self.n - rx - rz

    def generator_weight_max(self) -> int:
        weights = [0]
        if self.hx.nrows:
            weights.append(int(self.hx.row_weights().max()))
        if self.hz.nrows:
            weights.append(int(self.hz.row_weights().max()))
        return max(weights)

    def __repr__(self):
        kind = self.assignment.kind if self.assignment else "contracted"
        return (
            f"CssCode(n={self.n}, |hx|={self.hx.nrows}, |hz|={self.hz.nrows}, "
            f"{kind})"
        )


def _maximal_family(g: SimplexGraph, size: int):
    rows, origins = [], []
    for colours in itertools.combinations(range(g.n_colours), size):
        comps = maximal_subgraphs(g, colours)
        rows.append(supports_matrix(comps, g.n_flags))
        origins.extend(
            RowOrigin("maximal", colours, i) for i in range(len(comps))
        )
    return gf2.vstack(rows), tuple(origins)


def _rainbow_family(g: SimplexGraph, size: int, checks: BitMatrix | None):
    rows, origins = [], []
    for colours in itertools.combinations(range(g.n_colours), size):
        if size == 2:
            found = rainbow_two(g, colours)
            rows.append(supports_matrix(found, g.n_flags))
            origins.extend(
                RowOrigin("rainbow", colours, i) for i in range(len(found))
            )
        else:
            if checks is None:
                raise AssemblyError(
                    "multi-colour rainbow families need the opposing checks"
                )
            span = rainbow_multi(g, colours, checks)
            rows.append(span)
            origins.extend(
                RowOrigin("rainbow_span", colours, i)
                for i in range(span.nrows)
            )
    return gf2.vstack(rows), tuple(origins)


def _mixed_z_family(g: SimplexGraph, d: int):
    rows, origins = [], []
    for pair in itertools.combinations(range(g.n_colours), 2):
        if pair == (0, d):
            comps = maximal_subgraphs(g, pair)
            rows.append(supports_matrix(comps, g.n_flags))
            origins.extend(
                RowOrigin("maximal", pair, i) for i in range(len(comps))
            )
        else:
            found = rainbow_two(g, pair)
            rows.append(supports_matrix(found, g.n_flags))
            origins.extend(
                RowOrigin("rainbow", pair, i) for i in range(len(found))
            )
    return gf2.vstack(rows), tuple(origins)


def _mixed_x_family(g: SimplexGraph, d: int, hz: BitMatrix):
    rainbow_sets = (tuple(range(d)), tuple(range(1, d + 1)))
    rows, origins = [], []
    for colours in itertools.combinations(range(g.n_colours), d):
        if colours in rainbow_sets:
            span = rainbow_multi(g, colours, hz)
            rows.append(span)
            origins.extend(
                RowOrigin("rainbow_span", colours, i)
                for i in range(span.nrows)
            )
        else:
            comps = maximal_subgraphs(g, colours)
            rows.append(supports_matrix(comps, g.n_flags))
            origins.extend(
                RowOrigin("maximal", colours, i) for i in range(len(comps))
            )
    return gf2.vstack(rows), tuple(origins)


def assemble(g: SimplexGraph, a: Assignment) -> CssCode:
    """Build and verify the CSS code of an assignment on a flag graph.

    X rows come from x-sized colour sets and Z rows from z-sized ones;
    rainbow families of more than two colours are generated inside the
    kernel of the opposing side, so the maximal side is built first.
    """
    a.validate(g.n_colours)
    d = g.n_colours - 1
    if a.kind == "pin":
        hx, xo = _maximal_family(g, a.x)
        hz, zo = _maximal_family(g, a.z)
    elif a.kind == "generic":
        hx, xo = _maximal_family(g, a.x)
        hz, zo = _rainbow_family(g, a.z, hx)
    elif a.kind == "anti_generic":
        hz, zo = _maximal_family(g, a.z)
        hx, xo = _rainbow_family(g, a.x, hz)
    else:
        hz, zo = _mixed_z_family(g, d)
        hx, xo = _mixed_x_family(g, d, hz)

    offending = gf2.first_odd_overlap(hx, hz)
    if offending is not None:
        i, j = offending
        raise AssemblyError(
            f"X row {i} ({xo[i]}) anticommutes with Z row {j} ({zo[j]}); "
            f"the {a.kind} assignment is invalid on this graph",
            pair=(i, j),
        )
    return CssCode(
        n=g.n_flags, hx=hx, hz=hz, assignment=a, x_origins=xo, z_origins=zo
    )


def predicted_k(a: Assignment, factor_ranks, d: int) -> int:
    """Closed-form logical count from factor circuit ranks.

    The formulas cover the string-logical regime x=d, z=2; pin codes
    have no closed form (their extra seam logicals are rank-counted
    only).
    """
    ranks = [int(r) for r in factor_ranks]
    if len(ranks) != d:
        raise AssemblyError(f"expected {d} factor ranks, got {len(ranks)}")
    if a.kind == "pin":
        raise AssemblyError("no closed form for pin codes; use rank-based k")
    if a.kind not in KINDS:
        raise AssemblyError(f"unknown class {a.kind!r}")
    if a.x != d or a.z != 2:
        raise AssemblyError(
            f"closed forms cover x={d}, z=2 only, got x={a.x}, z={a.z}"
        )

    def others(i: int) -> int:
        p = 1
        for j, r in enumerate(ranks):
            if j != i:
                p *= r
        return p

    if a.kind == "generic":
        return d * sum(ranks)
    if a.kind == "anti_generic":
        return sum(d * others(i) for i in range(d))
    return sum((d - 1) * ranks[i] + others(i) for i in range(d))


# ---------------------------------------------------------------------------
# logical operators
# ---------------------------------------------------------------------------


def _coset_basis(kernel: BitMatrix, stabs: BitMatrix) -> BitMatrix:
    """Independent logical representatives: kernel rows modulo the
    stabilizer span, echelon-selected."""
    basis, pivots = gf2.rref(stabs)
    residual = gf2.reduce_against(kernel, basis, pivots)
    keep = residual.data.any(axis=1)
    return gf2.rref(BitMatrix(residual.data[keep], residual.ncols))[0]


def _reduce_weights(rows: BitMatrix, stabs: BitMatrix) -> BitMatrix:
    """Greedy coset weight descent: repeatedly add the first stabilizer
    row that lowers the weight (id order, first improvement)."""
    if rows.nrows == 0 or stabs.nrows == 0:
        return rows
    out = rows.copy()
    sd = stabs.data
    for i in range(out.nrows):
        row = out.data[i].copy()
        weight = int(np.bitwise_count(row).sum())
        while True:
            candidates = row[None, :] ^ sd
            weights = np.bitwise_count(candidates).sum(axis=1)
            better = weights < weight
            if not better.any():
                break
            j = int(np.argmax(better))
            row = candidates[j]
            weight = int(weights[j])
        out.data[i] = row
    return out


def logical_basis(code: CssCode, reduce_weights: bool = True):
    """Symplectically paired logical bases (lx, lz), cached on the code.

    lx rows commute with hz, lz rows with hx, lx_i overlaps lz_j oddly
    iff i == j.  Representatives are echelon-derived, then optionally
    weight-reduced inside their stabilizer cosets (which preserves the
    pairing).
    """
    if code.lx is not None and code.lz is not None:
        return code.lx, code.lz
    lx0 = _coset_basis(gf2.kernel(code.hz), code.hx)
    lz0 = _coset_basis(gf2.kernel(code.hx), code.hz)
    if lx0.nrows != lz0.nrows or lx0.nrows != code.k:
        raise AssemblyError(
            f"logical extraction mismatch: {lx0.nrows} X vs {lz0.nrows} Z "
            f"candidates for k={code.k}"
        )
    if code.k:
        pairing = BitMatrix.from_dense(gf2.matmul_t(lx0, lz0))
        correction = gf2.transpose(gf2.invert(pairing))
        lz0 = gf2.matmul(correction, lz0)
        if reduce_weights:
            lx0 = _reduce_weights(lx0, code.hx)
            lz0 = _reduce_weights(lz0, code.hz)
    code.lx, code.lz = lx0, lz0
    return lx0, lz0


def rebase_z_logicals(code: CssCode, new_lz: BitMatrix) -> None:
    """Replace lz by an equivalent labelled basis, re-pairing lx.

    `new_lz` rows must span the same logical cosets (each a product of
    current lz rows and Z stabilizers).  lx is transformed so that the
    symplectic pairing stays the identity.
    """
    lx, lz = logical_basis(code)
    if new_lz.nrows != code.k:
        raise AssemblyError(
            f"need {code.k} rows to rebase, got {new_lz.nrows}"
        )
    if gf2.matmul_t(code.hx, new_lz).any():
        raise AssemblyError("proposed Z rows anticommute with X checks")
    pairing = BitMatrix.from_dense(gf2.matmul_t(lx, new_lz))
    try:
        correction = gf2.invert(pairing)
    except ValueError as exc:
        raise AssemblyError(
            "proposed rows do not span the logical Z cosets"
        ) from exc
    code.lx = gf2.matmul(correction, lx)
    code.lz = new_lz


def coloured_logicals(
    code: CssCode, g: SimplexGraph, colours, side: str
) -> BitMatrix:
    """Logical representatives of a colour type, one side at a time.

    Inverting the colour set and intersecting the span of the inverted
    maximal supports with the stabilizer-plus-logical span yields the
    operators whose supports respect the colouring; rows lying inside
    the plain stabilizer span are dropped.
    """
    cs = frozenset(int(c) for c in colours)
    if not cs <= set(range(g.n_colours)):
        raise AssemblyError(
            f"colours {sorted(cs)} outside 0..{g.n_colours - 1}"
        )
    side = side.lower()
    if side not in ("x", "z"):
        raise AssemblyError(f"side must be X or Z, got {side!r}")
    lx, lz = logical_basis(code)
    checks, logicals = (code.hz, lz) if side == "z" else (code.hx, lx)
    inverted = sorted(set(range(g.n_colours)) - cs)
    m = supports_matrix(maximal_subgraphs(g, inverted), g.n_flags)
    stack = gf2.vstack([checks, logicals])
    intersection = gf2.span_intersection(m, stack)
    if intersection.nrows == 0:
        return BitMatrix.zeros(0, g.n_flags)
    basis, pivots = gf2.rref(checks)
    keep = ~gf2.rows_in_span(intersection, basis, pivots)
    return BitMatrix(intersection.data[keep], g.n_flags)
