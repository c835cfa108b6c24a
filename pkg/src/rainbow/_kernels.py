"""Bit-level kernels for packed GF(2) matrices.

Rows are stored as contiguous ``uint64`` words, least significant bit
first, so column ``c`` lives at bit ``c & 63`` of word ``c >> 6``.  The
hot loops are compiled with numba when it is importable; the numpy
fallbacks keep everything working (slower, same results) without it.
"""

from __future__ import annotations

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_ONE = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_S1 = np.uint64(1)
_S2 = np.uint64(2)
_S4 = np.uint64(4)
_S56 = np.uint64(56)


# ---------------------------------------------------------------------------
# numpy fallbacks
# ---------------------------------------------------------------------------


def _rref_numpy(data: np.ndarray, col_order: np.ndarray):
    """In-place reduced row echelon form; returns (rank, pivot columns)."""
    m = data.shape[0]
    pivots: list[int] = []
    r = 0
    for c in map(int, col_order):
        if r == m:
            break
        wd = c >> 6
        b = np.uint64(c & 63)
        colbits = (data[r:, wd] >> b) & _ONE
        nz = np.nonzero(colbits)[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
        mask = ((data[:, wd] >> b) & _ONE).astype(bool)
        mask[r] = False
        if mask.any():
            data[mask] ^= data[r]
        pivots.append(c)
        r += 1
    return r, np.asarray(pivots, dtype=np.int64)


def _reduce_rows_numpy(targets: np.ndarray, basis: np.ndarray, pivots: np.ndarray) -> None:
    """Reduce every target row in place against an echelonized basis."""
    for bi in range(pivots.shape[0]):
        c = int(pivots[bi])
        wd = c >> 6
        b = np.uint64(c & 63)
        mask = ((targets[:, wd] >> b) & _ONE).astype(bool)
        if mask.any():
            targets[mask] ^= basis[bi]


def _popcount_rows_numpy(data: np.ndarray) -> np.ndarray:
    if data.shape[1] == 0:
        return np.zeros(data.shape[0], dtype=np.int64)
    return np.bitwise_count(data).sum(axis=1, dtype=np.int64)


def _matmul_parity_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0], b.shape[0]), dtype=np.uint8)
    if a.shape[1] == 0:
        return out
    for i in range(a.shape[0]):
        acc = np.bitwise_xor.reduce(a[i][None, :] & b, axis=1)
        out[i] = (np.bitwise_count(acc) & _ONE).astype(np.uint8)
    return out


def _first_odd_pair_numpy(a: np.ndarray, b: np.ndarray):
    if a.shape[1] == 0:
        return -1, -1
    for i in range(a.shape[0]):
        acc = np.bitwise_xor.reduce(a[i][None, :] & b, axis=1)
        nz = np.nonzero(np.bitwise_count(acc) & _ONE)[0]
        if nz.size:
            return i, int(nz[0])
    return -1, -1


def _kernel_from_rref_numpy(
    rdata: np.ndarray, pivots: np.ndarray, free_cols: np.ndarray, out: np.ndarray
) -> None:
    """Fill `out` (pre-zeroed) with one kernel vector per free column."""
    for fi in range(free_cols.shape[0]):
        f = int(free_cols[fi])
        out[fi, f >> 6] |= _ONE << np.uint64(f & 63)
    if free_cols.shape[0] == 0:
        return
    fw = (free_cols >> 6).astype(np.int64)
    fb = (free_cols & 63).astype(np.uint64)
    for i in range(rdata.shape[0]):
        p = int(pivots[i])
        sel = ((rdata[i, fw] >> fb) & _ONE).astype(bool)
        if sel.any():
            out[sel, p >> 6] |= _ONE << np.uint64(p & 63)


def _mod4_pairs_scan_numpy(rows, stack, a):
    """First (i, j) with |rows_i ∧ stack_j| - 2|rows_i ∧ stack_j ∧ a|
    nonzero mod 4, else (-1, -1)."""
    for i in range(rows.shape[0]):
        masked = rows[i][None, :] & stack
        p = np.bitwise_count(masked).sum(axis=1, dtype=np.int64)
        q = np.bitwise_count(masked & a[None, :]).sum(axis=1, dtype=np.int64)
        bad = np.nonzero((p - 2 * q) % 4)[0]
        if bad.size:
            return i, int(bad[0])
    return -1, -1


def _odd_pair_scan_numpy(words):
    """First (u, v), u < v, with odd |words_u ∧ words_v|, else (-1, -1)."""
    m = words.shape[0]
    for u in range(m - 1):
        acc = words[u][None, :] & words[u + 1 :]
        odd = np.nonzero(np.bitwise_count(acc).sum(axis=1) & np.uint64(1))[0]
        if odd.size:
            return u, u + 1 + int(odd[0])
    return -1, -1


def _search_weight_numpy(cols, weight, basis, pivots, n_words, out_support):
    """Lexicographic enumeration of weight-`weight` supports; see numba twin."""
    n, ws = cols.shape
    idx = np.full(weight, -1, dtype=np.int64)
    syn = np.zeros((weight + 1, ws), dtype=np.uint64)
    pos = 0
    idx[0] = -1
    while pos >= 0:
        idx[pos] += 1
        if idx[pos] > n - (weight - pos):
            pos -= 1
            continue
        syn[pos + 1] = syn[pos] ^ cols[idx[pos]]
        if pos == weight - 1:
            if not syn[pos + 1].any():
                scratch = np.zeros(n_words, dtype=np.uint64)
                for q in range(weight):
                    c = int(idx[q])
                    scratch[c >> 6] |= _ONE << np.uint64(c & 63)
                _reduce_rows_numpy(scratch[None, :], basis, pivots)
                if scratch.any():
                    out_support[:] = idx
                    return True
        else:
            pos += 1
            idx[pos] = idx[pos - 1]
    return False


# ---------------------------------------------------------------------------
# numba twins
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True, inline="always")
    def _popcount64(x):
        x = x - ((x >> _S1) & _M1)
        x = (x & _M2) + ((x >> _S2) & _M2)
        x = (x + (x >> _S4)) & _M4
        return (x * _H01) >> _S56

    @numba.njit(cache=True, nogil=True)
    def _rref_numba(data, col_order):
        m, w = data.shape
        cap = m if m < col_order.shape[0] else col_order.shape[0]
        pivots = np.empty(cap, dtype=np.int64)
        r = 0
        for oi in range(col_order.shape[0]):
            if r == m:
                break
            c = col_order[oi]
            wd = c >> 6
            msk = _ONE << np.uint64(c & 63)
            p = -1
            for i in range(r, m):
                if data[i, wd] & msk:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                for t in range(w):
                    tmp = data[r, t]
                    data[r, t] = data[p, t]
                    data[p, t] = tmp
            for i in range(m):
                if i != r and (data[i, wd] & msk):
                    for t in range(w):
                        data[i, t] ^= data[r, t]
            pivots[r] = c
            r += 1
        return r, pivots[:r]

    @numba.njit(cache=True, nogil=True)
    def _reduce_rows_numba(targets, basis, pivots):
        mt, w = targets.shape
        nb = pivots.shape[0]
        for i in range(mt):
            for b in range(nb):
                c = pivots[b]
                wd = c >> 6
                msk = _ONE << np.uint64(c & 63)
                if targets[i, wd] & msk:
                    for t in range(w):
                        targets[i, t] ^= basis[b, t]

    @numba.njit(cache=True, nogil=True)
    def _popcount_rows_numba(data):
        m, w = data.shape
        out = np.empty(m, dtype=np.int64)
        for i in range(m):
            s = np.uint64(0)
            for t in range(w):
                s += _popcount64(data[i, t])
            out[i] = s
        return out

    @numba.njit(cache=True, nogil=True)
    def _matmul_parity_numba(a, b):
        ma, w = a.shape
        mb = b.shape[0]
        out = np.zeros((ma, mb), dtype=np.uint8)
        for i in range(ma):
            for j in range(mb):
                acc = np.uint64(0)
                for t in range(w):
                    acc ^= a[i, t] & b[j, t]
                out[i, j] = np.uint8(_popcount64(acc) & _ONE)
        return out

    @numba.njit(cache=True, nogil=True)
    def _first_odd_pair_numba(a, b):
        ma, w = a.shape
        mb = b.shape[0]
        for i in range(ma):
            for j in range(mb):
                acc = np.uint64(0)
                for t in range(w):
                    acc ^= a[i, t] & b[j, t]
                if _popcount64(acc) & _ONE:
                    return i, j
        return -1, -1

    @numba.njit(cache=True, nogil=True)
    def _kernel_from_rref_numba(rdata, pivots, free_cols, out):
        nf = free_cols.shape[0]
        for fi in range(nf):
            f = free_cols[fi]
            out[fi, f >> 6] |= _ONE << np.uint64(f & 63)
        for i in range(rdata.shape[0]):
            p = pivots[i]
            pw = p >> 6
            pmsk = _ONE << np.uint64(p & 63)
            for fi in range(nf):
                f = free_cols[fi]
                if rdata[i, f >> 6] & (_ONE << np.uint64(f & 63)):
                    out[fi, pw] |= pmsk

    @numba.njit(cache=True, nogil=True)
    def _mod4_pairs_scan_numba(rows, stack, a):
        mr, w = rows.shape
        ms = stack.shape[0]
        for i in range(mr):
            for j in range(ms):
                p = np.int64(0)
                q = np.int64(0)
                for t in range(w):
                    masked = rows[i, t] & stack[j, t]
                    p += _popcount64(masked)
                    q += _popcount64(masked & a[t])
                if (p - 2 * q) % 4:
                    return i, j
        return -1, -1

    @numba.njit(cache=True, nogil=True)
    def _odd_pair_scan_numba(words):
        m, w = words.shape
        for u in range(m - 1):
            for v in range(u + 1, m):
                acc = np.int64(0)
                for t in range(w):
                    acc += _popcount64(words[u, t] & words[v, t])
                if acc & 1:
                    return u, v
        return -1, -1

    @numba.njit(cache=True, nogil=True)
    def _search_weight_numba(cols, weight, basis, pivots, n_words, out_support):
        n, ws = cols.shape
        idx = np.empty(weight, dtype=np.int64)
        syn = np.zeros((weight + 1, ws), dtype=np.uint64)
        scratch = np.empty(n_words, dtype=np.uint64)
        nb = pivots.shape[0]
        pos = 0
        idx[0] = -1
        while pos >= 0:
            idx[pos] += 1
            if idx[pos] > n - (weight - pos):
                pos -= 1
                continue
            for t in range(ws):
                syn[pos + 1, t] = syn[pos, t] ^ cols[idx[pos], t]
            if pos == weight - 1:
                zero = True
                for t in range(ws):
                    if syn[pos + 1, t]:
                        zero = False
                        break
                if zero:
                    for t in range(n_words):
                        scratch[t] = np.uint64(0)
                    for q in range(weight):
                        c = idx[q]
                        scratch[c >> 6] |= _ONE << np.uint64(c & 63)
                    for b in range(nb):
                        c = pivots[b]
                        if scratch[c >> 6] & (_ONE << np.uint64(c & 63)):
                            for t in range(n_words):
                                scratch[t] ^= basis[b, t]
                    for t in range(n_words):
                        if scratch[t]:
                            for q in range(weight):
                                out_support[q] = idx[q]
                            return True
            else:
                pos += 1
                idx[pos] = idx[pos - 1]
        return False

    rref_inplace = _rref_numba
    reduce_rows_inplace = _reduce_rows_numba
    popcount_rows = _popcount_rows_numba
    matmul_parity = _matmul_parity_numba
    first_odd_pair = _first_odd_pair_numba
    kernel_from_rref = _kernel_from_rref_numba
    mod4_pairs_scan = _mod4_pairs_scan_numba
    odd_pair_scan = _odd_pair_scan_numba
    search_weight = _search_weight_numba
else:  # pragma: no cover - exercised only without numba
    rref_inplace = _rref_numpy
    reduce_rows_inplace = _reduce_rows_numpy
    popcount_rows = _popcount_rows_numpy
    matmul_parity = _matmul_parity_numpy
    first_odd_pair = _first_odd_pair_numpy
    kernel_from_rref = _kernel_from_rref_numpy
    mod4_pairs_scan = _mod4_pairs_scan_numpy
    odd_pair_scan = _odd_pair_scan_numpy
    search_weight = _search_weight_numpy
