"""Simulation of the operator channel: U = (V ∩ U) ⊕ E.

Exact mode deletes exactly rho dimensions of the transmitted space and
inserts exactly t error dimensions disjoint from it, so the requested
and realized (rho, t) coincide and d_S(V, U) = rho + t.  Matrix mode
mimics a receiver collecting random linear combinations plus corrupt
packets; there (rho, t) are emergent and only reported.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapacityError, ParameterError
from .linalg import (
    MatrixFq,
    Subspace,
    intersection,
    random_subspace_of,
    row_space,
)

_INSERTION_ATTEMPT_CAP = 1000


@dataclass(frozen=True)
class ChannelSpec:
    """Requested erasure count rho, error count t, mode and seed."""

    rho: int
    t: int
    mode: str = "exact"
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.rho < 0 or self.t < 0:
            raise ParameterError("rho and t must be non-negative")
        if self.mode not in ("exact", "matrix"):
            raise ParameterError(f"unknown channel mode {self.mode!r}")


@dataclass(frozen=True)
class ChannelOutcome:
    """Received space plus ground truth for oracles."""

    U: Subspace
    realized_rho: int
    realized_t: int
    V: Subspace


def apply_exact(v: Subspace, spec: ChannelSpec, rng) -> ChannelOutcome:
    """Sample U with exactly the requested erasures and insertions.

    V' is a uniform full-rank-combination subspace of V with dim(V) - rho
    dimensions; E is built by rejection sampling of vectors independent
    of V, which forces E ∩ V = {0} and hence realized == requested.
    """
    if spec.rho > v.dim:
        raise ParameterError(f"rho = {spec.rho} exceeds dim(V) = {v.dim}")
    if spec.t > v.ambient_dim - v.dim:
        raise ParameterError(
            f"t = {spec.t} exceeds ambient - dim(V) = {v.ambient_dim - v.dim}"
        )
    q = v.q
    kept = random_subspace_of(v, v.dim - spec.rho, rng)

    picked: list[tuple[int, ...]] = []
    span = v  # insertions must stay independent of all of V, not just the kept part
    for _ in range(spec.t):
        for _attempt in range(_INSERTION_ATTEMPT_CAP):
            cand = tuple(rng.randbelow(q) for _ in range(v.ambient_dim))
            if not span.contains_vector(cand):
                picked.append(cand)
                span = row_space(
                    span.basis.vstack(MatrixFq(q, 1, v.ambient_dim, (cand,))),
                    v.ambient_dim,
                )
                break
        else:
            raise CapacityError("insertion sampling exceeded its attempt cap")

    stacked = list(kept.basis.entries) + picked
    u = row_space(
        MatrixFq(q, len(stacked), v.ambient_dim, tuple(stacked)),
        v.ambient_dim,
    )
    if u.dim != v.dim - spec.rho + spec.t:
        raise CapacityError("channel sampling produced a dependent insertion")
    return ChannelOutcome(U=u, realized_rho=spec.rho, realized_t=spec.t, V=v)


def apply_matrix(v: Subspace, collected_packets: int, error_packets: int, rng) -> ChannelOutcome:
    """Receiver-side model: U = rowspace(A B + D Z) with uniform A, D, Z."""
    if collected_packets < 0 or error_packets < 0:
        raise ParameterError("packet counts must be non-negative")
    q = v.q
    b = v.basis
    a = MatrixFq.random(q, collected_packets, v.dim, rng)
    y = a @ b
    if error_packets:
        z = MatrixFq.random(q, error_packets, v.ambient_dim, rng)
        d = MatrixFq.random(q, collected_packets, error_packets, rng)
        y = y + (d @ z)
    u = row_space(y, v.ambient_dim)
    inter = intersection(v, u).dim
    return ChannelOutcome(
        U=u, realized_rho=v.dim - inter, realized_t=u.dim - inter, V=v
    )
