"""GF(2) linear block codes: generator-matrix encoding, sum-product
belief-propagation decoding, repetition-extended low-rate codes, and the
alist interchange format for sparse parity-check matrices.

Bit vectors are plain numpy arrays with values in {0, 1}; LLR vectors are
float arrays with the package-wide sign convention (positive favours bit 0).

Code objects are immutable after construction.  Decoding allocates its own
message buffers per call, so codes can be shared freely across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Message/input clip used by the BP decoder.  tanh(LLR_MAX/2) is still
#: strictly inside (-1, 1) in float64, which keeps the check update finite.
LLR_MAX = 30.0

_TANH_CAP = 1.0 - 1e-13  # keeps arctanh finite for degree-1 checks


class AlistFormatError(ValueError):
    """Malformed alist file; message carries path and 1-based line number."""


class RankDeficiencyError(ValueError):
    """Parity-check matrix with linearly dependent rows."""

    def __init__(self, achieved_rank: int, rows: int):
        self.achieved_rank = achieved_rank
        self.rows = rows
        super().__init__(
            f"parity-check matrix is rank deficient: rank {achieved_rank} < {rows} rows"
        )


# ---------------------------------------------------------------------------
# GF(2) linear algebra
# ---------------------------------------------------------------------------

def gf2_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over GF(2).  Accumulates in float64 (exact below 2^53)."""
    prod = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
    return (prod % 2.0).astype(np.uint8)


def gf2_rref(a: np.ndarray):
    """Reduced row echelon form over GF(2).

    Returns ``(rref, pivot_cols)``.  Pivoting takes the first nonzero column
    left to right, so the result is deterministic.
    """
    r = np.array(a, dtype=np.uint8, copy=True) & 1
    rows, cols = r.shape
    pivots = []
    rank = 0
    for col in range(cols):
        hot = np.nonzero(r[rank:, col])[0]
        if hot.size == 0:
            continue
        pivot = rank + hot[0]
        if pivot != rank:
            r[[rank, pivot]] = r[[pivot, rank]]
        others = np.nonzero(r[:, col])[0]
        others = others[others != rank]
        if others.size:
            r[others] ^= r[rank]
        pivots.append(col)
        rank += 1
        if rank == rows:
            break
    return r, np.array(pivots, dtype=np.int64)


def gf2_rank(a: np.ndarray) -> int:
    return len(gf2_rref(a)[1])


def gf2_inv(a: np.ndarray) -> np.ndarray:
    """Inverse of a square GF(2) matrix."""
    a = np.asarray(a, dtype=np.uint8)
    k = a.shape[0]
    if a.shape != (k, k):
        raise ValueError(f"matrix must be square, got {a.shape}")
    aug = np.concatenate([a & 1, np.eye(k, dtype=np.uint8)], axis=1)
    rref, pivots = gf2_rref(aug)
    if len(pivots) < k or np.any(pivots[:k] != np.arange(k)):
        raise ValueError("matrix is singular over GF(2)")
    return rref[:, k:]


# ---------------------------------------------------------------------------
# Code objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecodeStatus:
    """Outcome of one decode: converged at iteration `iterations`, or not."""

    converged: bool
    iterations: int


class _BpGraph:
    """Edge-list view of a parity-check matrix, precomputed for BP.

    Edges are kept in variable-major order; a stable permutation regroups
    them check-major.  All arrays are immutable after construction.
    """

    def __init__(self, parity: np.ndarray):
        m, n = parity.shape
        check_of, var_of = np.nonzero(parity)
        order = np.lexsort((check_of, var_of))  # variable-major
        self.var_of_edge = var_of[order]
        self.check_of_edge = check_of[order]
        self.n_edges = self.var_of_edge.size
        self.n_vars = n
        self.n_checks = m

        counts_v = np.bincount(self.var_of_edge, minlength=n)
        if np.any(counts_v == 0):
            raise ValueError("parity-check matrix has an unconnected column")
        self.var_starts = np.concatenate(([0], np.cumsum(counts_v)[:-1]))

        self.perm_to_check = np.argsort(self.check_of_edge, kind="stable")
        self.perm_from_check = np.argsort(self.perm_to_check, kind="stable")
        counts_c = np.bincount(self.check_of_edge, minlength=m)
        if np.any(counts_c == 0):
            raise ValueError("parity-check matrix has an empty row")
        self.check_starts = np.concatenate(([0], np.cumsum(counts_c)[:-1]))
        self.var_of_edge_c = self.var_of_edge[self.perm_to_check]
        self.check_of_edge_c = self.check_of_edge[self.perm_to_check]


@dataclass(frozen=True)
class BinaryCode:
    """A binary linear block code given by its generator matrix.

    ``generator`` is k x n over GF(2) with full row rank.  ``parity`` is the
    optional m x n check matrix satisfying G H^T = 0; BP decoding requires it.
    ``info_positions``, when given, are n-indices where the codeword equals
    the info word (systematic placement, possibly permuted).
    """

    generator: np.ndarray
    parity: np.ndarray | None = None
    name: str = ""
    info_positions: np.ndarray | None = None
    _graph: _BpGraph | None = field(default=None, repr=False, compare=False)
    _recovery: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        g = np.ascontiguousarray(np.asarray(self.generator, dtype=np.uint8) & 1)
        object.__setattr__(self, "generator", g)
        k, n = g.shape
        if k == 0 or n == 0 or k >= n:
            raise ValueError(f"generator must be k x n with 0 < k < n, got {g.shape}")
        if self.parity is not None:
            h = np.ascontiguousarray(np.asarray(self.parity, dtype=np.uint8) & 1)
            if h.shape[1] != n:
                raise ValueError(
                    f"parity width {h.shape[1]} does not match code length {n}"
                )
            if np.any(gf2_matmul(g, h.T)):
                raise ValueError("generator and parity are inconsistent: G H^T != 0")
            object.__setattr__(self, "parity", h)
            object.__setattr__(self, "_graph", _BpGraph(h))
        if self.info_positions is not None:
            pos = np.asarray(self.info_positions, dtype=np.int64)
            if pos.shape != (k,):
                raise ValueError("info_positions must list one column per info bit")
            if not np.array_equal(g[:, pos], np.eye(k, dtype=np.uint8)):
                raise ValueError("generator columns at info_positions must be identity")
            object.__setattr__(self, "info_positions", pos)
            object.__setattr__(self, "_recovery", (pos, None))
        else:
            rref, pivots = gf2_rref(g)
            if len(pivots) < k:
                raise ValueError(f"generator rows are dependent: rank {len(pivots)} < {k}")
            ainv = gf2_inv(g[:, pivots])
            object.__setattr__(self, "_recovery", (pivots, ainv))

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def rate(self) -> float:
        return self.k / self.n

    def info_from_codeword(self, codeword: np.ndarray) -> np.ndarray:
        """Recover the info word from a (possibly batched) codeword."""
        cols, ainv = self._recovery
        picked = np.asarray(codeword, dtype=np.uint8)[..., cols]
        if ainv is None:
            return picked
        return gf2_matmul(picked, ainv)


@dataclass(frozen=True)
class RepetitionExtendedCode:
    """Lower-rate code built by repeating every code bit of a base code.

    Copies of bit m occupy the adjacent output positions
    [m*k_rep, (m+1)*k_rep); AWGN is memoryless so block placement costs
    nothing and keeps the expansion map trivial.
    """

    base: BinaryCode
    k_rep: int

    def __post_init__(self):
        if self.k_rep < 1:
            raise ValueError(f"k_rep must be >= 1, got {self.k_rep}")

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def n(self) -> int:
        return self.base.n * self.k_rep

    @property
    def rate(self) -> float:
        return self.base.rate / self.k_rep

    @property
    def name(self) -> str:
        return f"{self.base.name or 'code'}x{self.k_rep}"

    def expansion_map(self) -> np.ndarray:
        """(base length, k_rep) array of output indices per base code bit."""
        return np.arange(self.n, dtype=np.int64).reshape(self.base.n, self.k_rep)


def extend_repetition(base: BinaryCode, k_rep: int) -> RepetitionExtendedCode:
    """Repeat each code bit of ``base`` k_rep times (rate divides by k_rep)."""
    return RepetitionExtendedCode(base=base, k_rep=k_rep)


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

def encode(code, info: np.ndarray) -> np.ndarray:
    """Codeword(s) for info word(s); last axis must equal code.k."""
    info = np.asarray(info, dtype=np.uint8)
    if info.shape[-1] != code.k:
        raise ValueError(f"info length {info.shape[-1]} != code dimension {code.k}")
    if isinstance(code, RepetitionExtendedCode):
        inner = gf2_matmul(info, code.base.generator)
        return np.repeat(inner, code.k_rep, axis=-1)
    return gf2_matmul(info, code.generator)


# ---------------------------------------------------------------------------
# Belief-propagation decoding
# ---------------------------------------------------------------------------

def _bp_batch(graph: _BpGraph, llr: np.ndarray, max_iter: int):
    """Sum-product decoding of a batch of LLR rows.

    Check updates use the tanh product in log-magnitude/sign form with
    explicit zero counting, so exact-zero messages (erasures) propagate as
    exact zeros instead of being floored to small values.  A frame converges
    when its hard decision satisfies every check and its posterior carries
    any information at all; a total erasure therefore reports max-iter.

    Returns (hard codewords, converged flags, iteration counts).
    """
    b = llr.shape[0]
    llr_clipped = np.clip(llr, -LLR_MAX, LLR_MAX)

    bits = np.zeros((b, graph.n_vars), dtype=np.uint8)
    converged = np.zeros(b, dtype=bool)
    iterations = np.full(b, max_iter, dtype=np.int64)

    starts = graph.check_starts
    edge_check = graph.check_of_edge_c

    # rows still iterating; converged rows are dropped from the working set
    rows = np.arange(b)
    base = llr_clipped
    lq = np.clip(base[:, graph.var_of_edge], -LLR_MAX, LLR_MAX)

    for it in range(1, max_iter + 1):
        # check update, edges regrouped check-major
        t = np.tanh(lq[:, graph.perm_to_check] / 2.0)
        zero = t == 0.0
        log_abs = np.log(np.where(zero, 1.0, np.abs(t)))
        neg = (t < 0.0).astype(np.int64)

        log_sum = np.add.reduceat(log_abs, starts, axis=1)[:, edge_check]
        zero_sum = np.add.reduceat(zero.astype(np.int64), starts, axis=1)[:, edge_check]
        neg_sum = np.add.reduceat(neg, starts, axis=1)[:, edge_check]

        ext_prod = np.exp(log_sum - log_abs)
        ext_prod[(zero_sum - zero) > 0] = 0.0
        ext_prod[((neg_sum - neg) % 2) == 1] *= -1.0
        lr_c = 2.0 * np.arctanh(np.clip(ext_prod, -_TANH_CAP, _TANH_CAP))
        lr = lr_c[:, graph.perm_from_check]

        # variable update and posterior
        post = base + np.add.reduceat(lr, graph.var_starts, axis=1)
        lq = np.clip(post[:, graph.var_of_edge] - lr, -LLR_MAX, LLR_MAX)

        new_bits = (post < 0).astype(np.uint8)
        par = np.add.reduceat(new_bits[:, graph.var_of_edge_c].astype(np.int64),
                              starts, axis=1)
        ok = ~np.any(par % 2, axis=1) & np.any(post != 0.0, axis=1)

        bits[rows] = new_bits
        if np.any(ok):
            done = rows[ok]
            iterations[done] = it
            converged[done] = True
            keep = ~ok
            if not np.any(keep):
                break
            rows = rows[keep]
            base = base[keep]
            lq = lq[keep]

    return bits, converged, iterations


def decode_bp(code: BinaryCode, llr_in: np.ndarray, max_iter: int = 50):
    """Sum-product decode one LLR vector; returns (info bits, DecodeStatus).

    Early exit on a zero syndrome.  Inputs and messages are clipped at
    +-LLR_MAX; a posterior that is identically zero is treated as carrying
    no decision, so a total erasure reports MaxIter rather than success.
    """
    if code.parity is None:
        raise ValueError("decode_bp requires a code with a parity-check matrix")
    llr_in = np.asarray(llr_in, dtype=np.float64)
    if llr_in.shape != (code.n,):
        raise ValueError(f"llr length {llr_in.shape} != code length {code.n}")
    bits, conv, iters = _bp_batch(code._graph, llr_in[None, :], max_iter)
    status = DecodeStatus(converged=bool(conv[0]), iterations=int(iters[0]))
    return code.info_from_codeword(bits[0]), status


def decode_repetition(code: RepetitionExtendedCode, llr_in: np.ndarray,
                      max_iter: int = 50):
    """Soft-combine the repeated copies, then BP-decode the base code.

    Copies of one base bit are independent observations of the same bit, so
    their LLRs add; k_rep identical copies of LLR x are equivalent to a
    single observation at k_rep * x.
    """
    llr_in = np.asarray(llr_in, dtype=np.float64)
    if llr_in.shape != (code.n,):
        raise ValueError(f"llr length {llr_in.shape} != code length {code.n}")
    combined = llr_in.reshape(code.base.n, code.k_rep).sum(axis=1)
    return decode_bp(code.base, combined, max_iter=max_iter)


def decode_soft_batch(code, llrs: np.ndarray, max_iter: int = 50):
    """Batched decode; rows of ``llrs`` are independent frames.

    Same arithmetic per row as :func:`decode_bp` / :func:`decode_repetition`.
    Returns (info bits (B, k), converged (B,), iterations (B,)).
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.ndim != 2 or llrs.shape[1] != code.n:
        raise ValueError(f"expected (B, {code.n}) LLRs, got {llrs.shape}")
    if isinstance(code, RepetitionExtendedCode):
        llrs = llrs.reshape(llrs.shape[0], code.base.n, code.k_rep).sum(axis=2)
        inner = code.base
    else:
        inner = code
    if inner.parity is None:
        raise ValueError("BP decoding requires a code with a parity-check matrix")
    bits, conv, iters = _bp_batch(inner._graph, llrs, max_iter)
    return inner.info_from_codeword(bits), conv, iters


# ---------------------------------------------------------------------------
# Parity -> generator and the alist interchange format
# ---------------------------------------------------------------------------

def generator_from_parity(h: np.ndarray, name: str = "") -> BinaryCode:
    """Systematic (up to column choice) generator for a parity-check matrix.

    Gaussian elimination over GF(2), pivoting on the first nonzero column.
    The non-pivot columns carry the info bits.  Raises RankDeficiencyError
    when the rows of H are dependent.
    """
    h = np.asarray(h, dtype=np.uint8) & 1
    m, n = h.shape
    rref, pivots = gf2_rref(h)
    if len(pivots) < m:
        raise RankDeficiencyError(achieved_rank=len(pivots), rows=m)
    free = np.setdiff1d(np.arange(n), pivots)
    k = free.size
    g = np.zeros((k, n), dtype=np.uint8)
    g[np.arange(k), free] = 1
    # codeword constraint: bits at pivot columns equal rref[:, free] @ info
    g[:, pivots] = rref[:, free].T
    return BinaryCode(generator=g, parity=h, name=name, info_positions=free)


def load_alist(path) -> BinaryCode:
    """Read a parity-check matrix in alist format and derive its generator.

    Field order: ``n m``, max degrees, column degrees, row degrees, then one
    adjacency line per column and per row with 1-based indices (zero padding
    tolerated).
    """
    path = str(path)
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()

    def ints(lineno: int, expect: int | None = None) -> list[int]:
        if lineno >= len(lines):
            raise AlistFormatError(f"{path}:{lineno + 1}: unexpected end of file")
        try:
            vals = [int(tok) for tok in lines[lineno].split()]
        except ValueError:
            raise AlistFormatError(f"{path}:{lineno + 1}: non-integer token") from None
        if expect is not None and len(vals) != expect:
            raise AlistFormatError(
                f"{path}:{lineno + 1}: expected {expect} values, got {len(vals)}"
            )
        return vals

    if not lines or not lines[0].split():
        raise AlistFormatError(f"{path}:1: empty file")
    n, m = ints(0, 2)
    if n <= 0 or m <= 0:
        raise AlistFormatError(f"{path}:1: non-positive dimensions {n} x {m}")
    ints(1, 2)  # declared max degrees; actual lists are authoritative
    col_deg = ints(2, n)
    row_deg = ints(3, m)

    h = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        lineno = 4 + j
        entries = [v for v in ints(lineno) if v != 0]
        if len(entries) != col_deg[j]:
            raise AlistFormatError(
                f"{path}:{lineno + 1}: column {j + 1} lists {len(entries)} rows, "
                f"degree says {col_deg[j]}"
            )
        for v in entries:
            if not 1 <= v <= m:
                raise AlistFormatError(
                    f"{path}:{lineno + 1}: row index {v} out of range 1..{m}"
                )
            if h[v - 1, j]:
                raise AlistFormatError(
                    f"{path}:{lineno + 1}: duplicate entry for row {v}"
                )
            h[v - 1, j] = 1
    for i in range(m):
        lineno = 4 + n + i
        entries = [v for v in ints(lineno) if v != 0]
        cols = np.nonzero(h[i])[0] + 1
        if sorted(entries) != sorted(cols.tolist()) or len(entries) != row_deg[i]:
            raise AlistFormatError(
                f"{path}:{lineno + 1}: row {i + 1} adjacency disagrees with columns"
            )

    import os
    return generator_from_parity(h, name=os.path.basename(path))


def save_alist(code_or_parity, path) -> None:
    """Write a parity-check matrix in canonical padded alist form.

    Adjacency lines are padded with 0 to the maximum degree, entries in
    ascending order, single spaces, trailing newline: load followed by save
    reproduces a canonical file byte for byte.
    """
    if isinstance(code_or_parity, BinaryCode):
        h = code_or_parity.parity
        if h is None:
            raise ValueError("code has no parity-check matrix to save")
    else:
        h = np.asarray(code_or_parity, dtype=np.uint8) & 1
    m, n = h.shape
    col_lists = [list(np.nonzero(h[:, j])[0] + 1) for j in range(n)]
    row_lists = [list(np.nonzero(h[i, :])[0] + 1) for i in range(m)]
    max_col = max(len(c) for c in col_lists)
    max_row = max(len(r) for r in row_lists)

    def pad(vals: list[int], width: int) -> str:
        return " ".join(str(v) for v in vals + [0] * (width - len(vals)))

    out = [f"{n} {m}", f"{max_col} {max_row}",
           " ".join(str(len(c)) for c in col_lists),
           " ".join(str(len(r)) for r in row_lists)]
    out += [pad(c, max_col) for c in col_lists]
    out += [pad(r, max_row) for r in row_lists]
    with open(str(path), "w", encoding="ascii") as fh:
        fh.write("\n".join(out) + "\n")
