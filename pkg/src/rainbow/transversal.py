"""Transversal T/T-dagger gates from bipartitioned qubit sets.

A depth-one circuit applying T on one half of the qubits and T-dagger on
the other implements a logical gate exactly when five counting
conditions hold between the bipartition, the X stabiliser supports and
the X logical supports.  This module finds a candidate bipartition by
2-colouring the simplex graph, evaluates the five conditions with a
first-counterexample report, and enumerates the logical triples coupled
by CCZ when the gate exists.

Condition 5 quantifies over rows and pairwise sums of the stacked
(hx; lx) matrix.  The scan splits into a mod-4 pass over single rows
and, once that passes, a parity pass over pair sums: for rows u, v and
an X check x with both singles satisfied, the pair-sum condition
reduces to |x ∧ u ∧ v| being even.  The parity pass restricts every
row to the support of x first, so each candidate pair costs a couple
of word operations instead of a sweep over the full row.
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels, gf2
from .assembly import CssCode, logical_basis
from .gf2 import BitMatrix
from .graphs import GraphError, cycle_decomposition
from .products import ProductGraph, SimplexGraph, enumerate_flags


class TransversalError(ValueError):
    """Raised for malformed gate queries, e.g. census of a failing code."""


@dataclass(frozen=True)
class Bipartition:
    """T/T-dagger assignment: ``a[q] = 1`` gets T, ``a[q] = 0`` gets T-dagger."""

    a: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.a, dtype=np.uint8) & 1)
        if arr.ndim != 1:
            raise TransversalError("bipartition must be a flat 0/1 vector")
        object.__setattr__(self, "a", arr)

    @property
    def n(self) -> int:
        return int(self.a.shape[0])

    def complement(self) -> "Bipartition":
        """Swap the T and T-dagger halves."""
        return Bipartition(self.a ^ 1)

    def halves(self) -> tuple[int, int]:
        """Sizes of the (T, T-dagger) halves."""
        ones = int(self.a.sum())
        return ones, self.n - ones

    def __repr__(self) -> str:
        t, td = self.halves()
        return f"Bipartition({t} T, {td} T-dagger)"


@dataclass(frozen=True)
class ConditionStatus:
    """Outcome of one of the five counting conditions.

    ``counterexample`` holds row indices pinning the first failure:
    condition 1 a pair of hx rows, condition 2 an (hx row, lx row)
    pair, condition 3 an ordered pair of lx rows (equal indices mean
    the row itself), condition 4 a single hx row,
    condition 5 either (hx row, stacked row) for a single-row failure
    or (hx row, stacked row, stacked row) for a pair-sum failure, where
    stacked means hx rows followed by lx rows.
    """

    number: int
    ok: bool
    counterexample: tuple[int, ...] | None = None
    note: str = ""


@dataclass(frozen=True)
class TriorthReport:
    """Per-condition verdicts for a candidate transversal gate."""

    conditions: tuple[ConditionStatus, ...]

    @property
    def gate_found(self) -> bool:
        return all(c.ok for c in self.conditions)

    def condition(self, number: int) -> ConditionStatus:
        for c in self.conditions:
            if c.number == number:
                return c
        raise KeyError(number)

    def __repr__(self) -> str:
        flags = ", ".join(
            f"{c.number}:{'ok' if c.ok else 'FAIL'}" for c in self.conditions
        )
        return f"TriorthReport({flags}, gate_found={self.gate_found})"


def find_bipartition(g: SimplexGraph) -> Bipartition:
    """Proper 2-colouring of the flags, anchored at flag 0 in the T half.

    Every connected component is anchored at its smallest flag.  Raises
    GraphError when some cycle of the simplex graph is odd; the caller
    may still supply a bipartition by hand.
    """
    nf = g.n_flags
    adj: list[list[int]] = [[] for _ in range(nf)]
    for u, v, _ in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    side = np.full(nf, -1, dtype=np.int8)
    for start in range(nf):
        if side[start] >= 0:
            continue
        side[start] = 1
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if side[v] < 0:
                    side[v] = 1 - side[u]
                    queue.append(v)
                elif side[v] == side[u]:
                    raise GraphError(
                        "simplex graph has an odd cycle; no proper "
                        "2-colouring exists",
                        vertex=v,
                    )
    return Bipartition(side.astype(np.uint8))


def _edge_alternation(factor) -> dict[tuple[int, int], int]:
    """Alternating 0/1 edge labels along each cycle of a decomposition.

    Within one cycle consecutive edges get opposite labels, so the two
    edges meeting at any simple cycle vertex disagree.  Requires every
    vertex degree even (a cycle decomposition must exist).
    """
    labels: dict[tuple[int, int], int] = {}
    for walk in cycle_decomposition(factor):
        for i in range(len(walk) - 1):
            u, v = walk[i], walk[i + 1]
            labels[(min(u, v), max(u, v))] = i & 1
    return labels


def orientation_bipartition(p: ProductGraph) -> Bipartition:
    """T/T-dagger split from flag orientations, for glued products.

    Each flag is read as a step-order permutation plus one edge per
    factor; its class is the permutation parity plus the sum of
    alternating edge labels along each factor's cycle decomposition.
    On products whose simplex graph is 2-colourable this reproduces a
    proper 2-colouring.  On glued products, where vertices of degree
    above two make the simplex graph non-bipartite, it restricts to a
    proper 2-colouring of every component lattice, which is what the
    counting conditions consume.  Factors must have all degrees even.
    """
    alternation = [_edge_alternation(f) for f in p.factors]
    bits = []
    for flag in enumerate_flags(p):
        cells = [p.vertices[c] for c in flag.cells]
        order = []
        label_sum = 0
        for low, high in zip(cells, cells[1:]):
            moved = [k for k in range(p.dimension) if low[k] != high[k]]
            if len(moved) != 1:
                raise GraphError(
                    f"cells {low} -> {high} differ in {len(moved)} factors"
                )
            k = moved[0]
            order.append(k)
            u, v = low[k], high[k]
            label_sum += alternation[k][(min(u, v), max(u, v))]
        inversions = sum(
            1
            for s, t in itertools.combinations(range(len(order)), 2)
            if order[s] > order[t]
        )
        bits.append((inversions + label_sum) & 1)
    out = np.asarray(bits, dtype=np.uint8)
    if out.size and out[0] == 0:
        out ^= 1
    return Bipartition(out)


def _as_vector(a, n: int) -> np.ndarray:
    vec = a.a if isinstance(a, Bipartition) else np.asarray(a, dtype=np.uint8) & 1
    if vec.shape != (n,):
        raise TransversalError(
            f"bipartition length {vec.shape} does not match {n} qubits"
        )
    return np.ascontiguousarray(vec)


def _pack_vector(vec: np.ndarray) -> np.ndarray:
    return BitMatrix.from_dense([vec]).data[0].copy()


def _first_unreduced(products: np.ndarray, basis: BitMatrix, pivots) -> int:
    """Index of the first row of `products` outside span(basis), or -1."""
    if products.shape[0] == 0:
        return -1
    work = np.ascontiguousarray(products.copy())
    _kernels.reduce_rows_inplace(work, basis.data, pivots)
    bad = np.nonzero(work.any(axis=1))[0]
    return int(bad[0]) if bad.size else -1


def _product_membership(rows: BitMatrix, others: BitMatrix, basis: BitMatrix,
                        pivots) -> tuple[int, int] | None:
    """First (i, j) with rows_i ∧ others_j outside span(basis), or None.

    When `others is rows` only pairs i < j are scanned.  Zero products
    are skipped without a reduction; overlapping pairs are reduced in
    per-row batches.
    """
    same = others is rows
    rd, od = rows.data, others.data
    for i in range(rows.nrows):
        block = od[i + 1 :] if same else od
        if block.shape[0] == 0:
            continue
        masked = rd[i][None, :] & block
        live = np.nonzero(masked.any(axis=1))[0]
        if live.size == 0:
            continue
        bad = _first_unreduced(masked[live], basis, pivots)
        if bad >= 0:
            j = int(live[bad]) + (i + 1 if same else 0)
            return i, j
    return None


def _condition_one(code: CssCode, hz_r: BitMatrix, hz_p) -> ConditionStatus:
    hit = _product_membership(code.hx, code.hx, hz_r, hz_p)
    if hit is None:
        return ConditionStatus(1, True)
    return ConditionStatus(
        1, False, hit,
        "X-check intersection is not a Z stabiliser",
    )


def _condition_two(code: CssCode, lx: BitMatrix, hz_r: BitMatrix,
                   hz_p) -> ConditionStatus:
    hit = _product_membership(code.hx, lx, hz_r, hz_p)
    if hit is None:
        return ConditionStatus(2, True)
    return ConditionStatus(
        2, False, hit,
        "X-check and X-logical intersection is not a Z stabiliser",
    )


def _condition_three(code: CssCode, lx: BitMatrix, lz: BitMatrix,
                     hz_r: BitMatrix, hz_p) -> ConditionStatus:
    """Products of X logicals must land on Z operators, at least one of
    them a logical.

    Intersections distribute over sums, so quantifying over the span of
    the logicals reduces to ordered basis pairs i <= j; the self-pair
    (i, i) is the row itself and carries the linear part of the induced
    phase polynomial, without which a pattern of bare T gates would be
    misread as the identity.
    """
    if lx.nrows == 0:
        return ConditionStatus(
            3, False, None,
            "no logicals; the pattern acts as a global phase",
        )
    full_r, full_p = gf2.rref(gf2.vstack([code.hz, lz]))
    nontrivial = False
    for i in range(lx.nrows):
        masked = lx.data[i][None, :] & lx.data[i:]
        live = np.nonzero(masked.any(axis=1))[0]
        if live.size == 0:
            continue
        bad = _first_unreduced(masked[live], hz_r, hz_p)
        if bad < 0:
            continue
        nontrivial = True
        hit = _first_unreduced(masked[live], full_r, full_p)
        if hit >= 0:
            j = int(live[hit]) + i
            return ConditionStatus(
                3, False, (i, j),
                "X-logical intersection is outside the Z operator span",
            )
    if not nontrivial:
        return ConditionStatus(
            3, False, None,
            "every product of X logicals is a Z stabiliser; the induced "
            "diagonal gate acts as the logical identity",
        )
    return ConditionStatus(3, True)


def _condition_four(code: CssCode, a_words: np.ndarray) -> ConditionStatus:
    p = np.bitwise_count(code.hx.data).sum(axis=1, dtype=np.int64)
    q = np.bitwise_count(code.hx.data & a_words[None, :]).sum(
        axis=1, dtype=np.int64
    )
    bad = np.nonzero((p - 2 * q) % 8)[0]
    if bad.size == 0:
        return ConditionStatus(4, True)
    return ConditionStatus(
        4, False, (int(bad[0]),),
        "T and T-dagger counts unbalanced mod 8 on an X check",
    )


def _restrict_rows(data: np.ndarray, support: list[int]) -> np.ndarray:
    """Rows of packed `data` restricted to `support`, repacked in words."""
    cols = np.asarray(support, dtype=np.int64)
    bits = (
        (data[:, cols >> 6] >> (cols & 63).astype(np.uint64)) & np.uint64(1)
    ).astype(np.uint8)
    packed = np.packbits(bits, axis=1, bitorder="little")
    pad = (-packed.shape[1]) % 8
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    return np.ascontiguousarray(packed).view(np.uint64)


def _pair_sum_scan(code: CssCode, stacked: BitMatrix,
                   workers: int) -> tuple[int, int, int] | None:
    """First (i, u, v) with |hx_i ∧ stacked_u ∧ stacked_v| odd, or None."""
    hxd = code.hx.data
    sd = stacked.data

    def run(i: int) -> tuple[int, int, int] | None:
        support = code.hx.row_support(i)
        if len(support) < 2:
            return None
        words = _restrict_rows(sd, support)
        u, v = _kernels.odd_pair_scan(words)
        if u < 0:
            return None
        return i, u, v

    if workers <= 1:
        for i in range(code.hx.nrows):
            hit = run(i)
            if hit is not None:
                return hit
        return None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for hit in pool.map(run, range(code.hx.nrows)):
            if hit is not None:
                return hit
    return None


def _condition_five(code: CssCode, lx: BitMatrix,
                    a_words: np.ndarray) -> ConditionStatus:
    stacked = gf2.vstack([code.hx, lx])
    i, j = _kernels.mod4_pairs_scan(code.hx.data, stacked.data, a_words)
    if i >= 0:
        return ConditionStatus(
            5, False, (int(i), int(j)),
            "T and T-dagger counts unbalanced mod 4 on a check/operator "
            "intersection",
        )
    workers = max(1, int(os.environ.get("RAINBOW_THREADS", "1")))
    hit = _pair_sum_scan(code, stacked, workers)
    if hit is None:
        return ConditionStatus(5, True)
    return ConditionStatus(
        5, False, hit,
        "odd triple intersection between an X check and a pair sum",
    )


def check_triorthogonality(code: CssCode, a) -> TriorthReport:
    """Evaluate the five counting conditions for a transversal T-pattern.

    Conditions 1-3 place check and logical intersections inside the
    right Z operator spans; conditions 4-5 balance the bipartition
    counts mod 8 on checks and mod 4 on pairwise intersections.  The
    gate exists exactly when all five pass.  Failures are recorded with
    a first counterexample, never raised.
    """
    vec = _as_vector(a, code.n)
    a_words = _pack_vector(vec)
    lx, lz = logical_basis(code)
    hz_r, hz_p = gf2.rref(code.hz)
    conditions = (
        _condition_one(code, hz_r, hz_p),
        _condition_two(code, lx, hz_r, hz_p),
        _condition_three(code, lx, lz, hz_r, hz_p),
        _condition_four(code, a_words),
        _condition_five(code, lx, a_words),
    )
    return TriorthReport(conditions)


def ccz_interactions(code: CssCode, a) -> list[tuple[int, int, int]]:
    """Logical triples coupled by CCZ under the transversal T-pattern.

    For each unordered triple of X logicals the coefficient is the
    signed count of triple-overlap qubits, T counting +1 and T-dagger
    -1, taken mod 2; odd triples are coupled.  Requires a passing
    triorthogonality report and returns the empty list when k < 3.
    """
    report = check_triorthogonality(code, a)
    if not report.gate_found:
        failing = [c.number for c in report.conditions if not c.ok]
        raise TransversalError(
            f"no transversal gate: condition(s) {failing} fail"
        )
    vec = _as_vector(a, code.n)
    a_words = _pack_vector(vec)
    lx, _ = logical_basis(code)
    k = lx.nrows
    if k < 3:
        return []
    lxd = lx.data
    coupled: list[tuple[int, int, int]] = []
    for i, j in itertools.combinations(range(k), 2):
        pair = lxd[i] & lxd[j]
        if not pair.any():
            continue
        masked = pair[None, :] & lxd[j + 1 :]
        p = np.bitwise_count(masked).sum(axis=1, dtype=np.int64)
        q = np.bitwise_count(masked & a_words[None, :]).sum(
            axis=1, dtype=np.int64
        )
        odd = np.nonzero((2 * q - p) % 2)[0]
        coupled.extend((i, j, j + 1 + int(m)) for m in odd)
    return coupled
