"""Lifting a rank-metric code into a subspace code, and back.

A codeword matrix X becomes the row space of [I_n | X], an n-dimensional
subspace of F_q^(n+m).  Decoding a received space splits its canonical
basis at the identity/payload column boundary: payload-pivot rows yield
row-space side information (inserted dimensions), missing header pivots
yield column-space side information (lost dimensions), and the payload
parts of the header-pivot rows form the received word handed to the
rank-metric decoder.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import ParameterError
from .field import ExtFieldElement
from .gabidulin import (
    DecodeFailure,
    GabidulinCode,
    RankCodeword,
)
from .linalg import MatrixFq, Subspace, subspace_distance


@dataclass(frozen=True)
class LiftedCode:
    """The subspace code { <[I_n | X]> : X in the inner Gabidulin code }."""

    inner: GabidulinCode

    @property
    def ambient_dim(self) -> int:
        return self.inner.n + self.inner.params.m

    @property
    def min_subspace_distance(self) -> int:
        """Twice the inner minimum rank distance (verified exhaustively in tests)."""
        return 2 * self.inner.min_rank_distance


@dataclass(frozen=True)
class LiftedDecodeResult:
    matrix: MatrixFq
    message: tuple[ExtFieldElement, ...]


def lift(inner: GabidulinCode, codeword) -> Subspace:
    """Row space of [I_n | X]; already in reduced row echelon form."""
    if isinstance(codeword, RankCodeword):
        matrix = codeword.as_matrix()
    else:
        matrix = codeword
    n, m = inner.n, inner.params.m
    if matrix.rows != n or matrix.cols != m or matrix.q != inner.params.q:
        raise ParameterError(f"codeword matrix must be {n}x{m} over F_{inner.params.q}")
    rows = []
    for i in range(n):
        header = [0] * n
        header[i] = 1
        rows.append(tuple(header) + matrix.entries[i])
    basis = MatrixFq(inner.params.q, n, n + m, tuple(rows))
    return Subspace(n + m, basis)


def reduce_received(code: LiftedCode, received: Subspace):
    """Split a received space into (received word, row hints, column hints).

    Returns (r, row_erasures, col_erasures) where r is an n x m received
    word with erased rows zeroed, row_erasures rows span the payloads of
    the pure-payload basis vectors, and col_erasures rows span the header
    directions lost by the channel.
    """
    inner = code.inner
    n, m, q = inner.n, inner.params.m, inner.params.q
    if received.ambient_dim != code.ambient_dim:
        raise ParameterError(
            f"received space ambient {received.ambient_dim} != {code.ambient_dim}"
        )
    header_pivot_rows: dict[int, tuple[int, ...]] = {}
    payload_rows = []
    for row in received.basis.entries:
        pivot = next(c for c, x in enumerate(row) if x)
        if pivot < n:
            header_pivot_rows[pivot] = row
        else:
            payload_rows.append(row[n:])
    erased = [j for j in range(n) if j not in header_pivot_rows]

    word_rows = []
    for i in range(n):
        if i in header_pivot_rows:
            word_rows.append(header_pivot_rows[i][n:])
        else:
            word_rows.append((0,) * m)
    word = RankCodeword.from_matrix(inner.params, MatrixFq(q, n, m, tuple(word_rows)))

    row_hints = MatrixFq(q, len(payload_rows), m, tuple(payload_rows))

    col_rows = []
    for j in erased:
        vec = [0] * n
        vec[j] = q - 1
        for i, row in header_pivot_rows.items():
            vec[i] = row[j]
        col_rows.append(tuple(vec))
    col_hints = MatrixFq(q, len(col_rows), n, tuple(col_rows))
    return word, row_hints, col_hints


def subspace_decode(code: LiftedCode, received: Subspace):
    """Recover (X, message) from a received space, or DecodeFailure.

    Succeeds whenever 2 d_S(V, received) < d_S(code) for some codeword V;
    beyond that radius success is opportunistic.
    """
    word, row_hints, col_hints = reduce_received(code, received)
    outcome = code.inner.decode_bounded(
        word, row_erasures=row_hints, col_erasures=col_hints
    )
    if isinstance(outcome, DecodeFailure):
        return outcome
    return LiftedDecodeResult(code.inner.encode(outcome).as_matrix(), outcome)


@dataclass(frozen=True)
class SubspaceOracleResult:
    codeword: Subspace
    matrix: MatrixFq
    message: tuple[ExtFieldElement, ...]


@lru_cache(maxsize=16)
def codeword_subspaces(code: LiftedCode, cap: int = 1 << 20):
    """All (subspace, matrix, message) triples of the lifted code."""
    out = []
    for message in code.inner.iter_messages(cap):
        matrix = code.inner.encode(message).as_matrix()
        out.append((lift(code.inner, matrix), matrix, message))
    return tuple(out)


def brute_force_subspace_decode(code: LiftedCode, received: Subspace, cap: int = 1 << 20):
    """Minimum subspace-distance decoding by full enumeration; ties fail."""
    if received.ambient_dim != code.ambient_dim:
        raise ParameterError("ambient dimension mismatch")
    best = None
    best_dist = None
    tie = False
    for subspace, matrix, message in codeword_subspaces(code, cap):
        dist = subspace_distance(subspace, received)
        if best_dist is None or dist < best_dist:
            best = SubspaceOracleResult(subspace, matrix, message)
            best_dist, tie = dist, False
        elif dist == best_dist:
            tie = True
    if tie:
        return DecodeFailure("tie", f"multiple codewords at distance {best_dist}")
    return best
