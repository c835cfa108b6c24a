"""Minimum-distance searches: exhaustive weight sweeps and seeded
information-set sampling.

Exhaustive search certifies floors (no logical below a weight); the
randomized search only ever produces upper bounds.  Every witness is
re-verified against both check matrices before it is reported.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels, gf2
from .assembly import CssCode, logical_basis

DEFAULT_BUDGET = 10**9
SIDES = ("x", "z", "both")


class DistanceError(ValueError):
    """Search rejected; `required` carries the candidate-count estimate
    when a weight budget is exceeded."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


@dataclass(frozen=True)
class DistanceReport:
    """Outcome of a distance search on one or both sides.

    exact_floor is the largest weight w such that the exhaustive sweep
    proved no logical of weight <= w exists (None for pure sampling
    runs); best_upper is the lightest verified logical found.
    """

    side: str
    exact_floor: int | None
    best_upper: int | None
    witness: tuple[int, ...] | None
    wmax: int | None = None
    iterations: int | None = None
    seed: int | None = None
    method: str = "exact"

    @property
    def certified(self) -> bool:
        return (
            self.exact_floor is not None
            and self.best_upper is not None
            and self.best_upper == self.exact_floor + 1
        )


def _side_matrices(code: CssCode, side: str):
    """(opposing checks, own stabilizers, own logicals) for one side."""
    lx, lz = logical_basis(code)
    if side == "x":
        return code.hz, code.hx, lx
    return code.hx, code.hz, lz


def _verify_witness(code: CssCode, side: str, support) -> None:
    opposing, own, _ = _side_matrices(code, side)
    v = gf2.BitMatrix.from_supports([support], code.n)
    if gf2.matmul_t(opposing, v).any():
        raise DistanceError(f"witness {support} has nonzero syndrome")
    basis, pivots = gf2.rref(own)
    if bool(gf2.rows_in_span(v, basis, pivots)[0]):
        raise DistanceError(f"witness {support} is a stabilizer")


def candidate_count(n: int, wmax: int) -> int:
    return sum(math.comb(n, w) for w in range(1, wmax + 1))


def _exact_side(code: CssCode, side: str, wmax: int):
    opposing, own, _ = _side_matrices(code, side)
    cols = gf2.transpose(opposing).data
    basis, pivots = gf2.rref(own)
    n_words = gf2.n_words(code.n)
    for w in range(1, wmax + 1):
        out = np.empty(w, dtype=np.int64)
        if _kernels.search_weight(cols, w, basis.data, pivots, n_words, out):
            support = tuple(int(i) for i in out)
            _verify_witness(code, side, support)
            return w - 1, support
    return wmax, None


def exact_distance_upto(
    code: CssCode, side: str = "both", wmax: int = 4,
    budget: int = DEFAULT_BUDGET,
) -> DistanceReport:
    """Exhaustive sweep over all supports of weight <= wmax.

    Enumerates in lexicographic order with incremental syndromes; a hit
    is the lightest logical on that side.  For side "both" the Z sweep
    runs first and its result tightens the X sweep.  Rejects up front
    when the candidate count would exceed the budget.
    """
    if side not in SIDES:
        raise DistanceError(f"side must be one of {SIDES}, got {side!r}")
    if wmax < 1:
        raise DistanceError(f"wmax must be positive, got {wmax}")
    required = candidate_count(code.n, wmax)
    if required > budget:
        raise DistanceError(
            f"weight sweep needs {required} candidates, over the budget "
            f"of {budget}; lower wmax or raise the budget",
            required=required,
        )
    if side in ("x", "z"):
        floor, witness = _exact_side(code, side, wmax)
        return DistanceReport(
            side=side, exact_floor=floor,
            best_upper=None if witness is None else len(witness),
            witness=witness, wmax=wmax, method="exact",
        )
    floor_z, wit_z = _exact_side(code, "z", wmax)
    wmax_x = wmax if wit_z is None else min(wmax, len(wit_z) - 1)
    floor_x, wit_x = (wmax_x, None)
    if wmax_x >= 1:
        floor_x, wit_x = _exact_side(code, "x", wmax_x)
    best = min(
        (w for w in (wit_z, wit_x) if w is not None),
        key=len, default=None,
    )
    return DistanceReport(
        side="both", exact_floor=min(floor_z, floor_x),
        best_upper=None if best is None else len(best),
        witness=best, wmax=wmax, method="exact",
    )


def _isd_iteration(args):
    n, stack, own_basis, own_pivots, seed, it, cutoff = args
    rng = np.random.default_rng(np.random.SeedSequence([seed, it]))
    order = rng.permutation(n).astype(np.int64)
    data = stack.data.copy()
    _kernels.rref_inplace(data, order)
    weights = _kernels.popcount_rows(data)
    for i in np.argsort(weights, kind="stable"):
        w = int(weights[i])
        if w == 0:
            continue
        if cutoff is not None and w > cutoff:
            return None
        row = gf2.BitMatrix(data[i : i + 1].copy(), n)
        if bool(gf2.rows_in_span(row, own_basis, own_pivots)[0]):
            continue
        return (w, tuple(int(c) for c in row.row_support(0)))
    return None


def _isd_side(code: CssCode, side: str, iterations: int, seed: int):
    _, own, logicals = _side_matrices(code, side)
    own_basis, own_pivots = gf2.rref(own)
    stack = gf2.vstack([own_basis, logicals])
    workers = max(1, int(os.environ.get("RAINBOW_THREADS", "1")))
    best: tuple[int, tuple[int, ...]] | None = None

    def run(block):
        nonlocal best
        cutoff = None if best is None else best[0]
        args = [
            (code.n, stack, own_basis, own_pivots, seed, it, cutoff)
            for it in block
        ]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                found = list(pool.map(_isd_iteration, args))
        else:
            found = [_isd_iteration(a) for a in args]
        for item in found:
            if item is not None and (best is None or item < best):
                best = item

    step = max(64, workers * 16)
    for start in range(0, iterations, step):
        run(range(start, min(start + step, iterations)))
    return best


def isd_upper_bound(
    code: CssCode, side: str = "both", iterations: int = 1000,
    seed: int = 0,
) -> DistanceReport:
    """Randomized permuted-echelon sampling for a distance upper bound.

    Each iteration echelonizes the stacked stabilizer-plus-logical
    generators over a freshly permuted column order and keeps the
    lightest row that is not a pure stabilizer.  Results are merged by
    (weight, support), so the outcome depends only on the seed and the
    iteration count, not on execution order.
    """
    if side not in SIDES:
        raise DistanceError(f"side must be one of {SIDES}, got {side!r}")
    if code.k == 0:
        return DistanceReport(
            side=side, exact_floor=None, best_upper=None, witness=None,
            iterations=iterations, seed=seed, method="isd",
        )
    sides = [side] if side in ("x", "z") else ["z", "x"]
    best = None
    best_side = side
    for s in sides:
        found = _isd_side(code, s, iterations, seed)
        if found is not None and (best is None or found < best):
            best = found
            best_side = s
    witness = None if best is None else best[1]
    if witness is not None:
        _verify_witness(code, best_side if side == "both" else side, witness)
    return DistanceReport(
        side=side, exact_floor=None,
        best_upper=None if best is None else best[0],
        witness=witness, iterations=iterations, seed=seed, method="isd",
    )
