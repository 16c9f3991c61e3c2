"""Quantum channels in Kraus form: construction, application and classification.

A channel acts as ``Phi(rho) = sum_m K_m rho K_m^dagger``. Unitality,
``Phi(1) == 1``, is decided two ways that share no intermediate results:

* :func:`unitality_defect_direct` sums ``K_m K_m^dagger`` over the Kraus family;
* :func:`unitality_defect_commutator` works from the reservoir blocks ``F_ji``
  of a joint unitary and the reservoir state, summing traces of commutators
  ``[F_{j'i}^dagger, F_ji]`` weighted by the reservoir state.

For a channel generated by a joint unitary the two must agree to roundoff.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from .exceptions import ChannelError, DimensionError, InvalidStateError
from .linalg import (
    DEFAULT_TOL,
    DensityMatrix,
    UnitaryOperator,
    _frozen,
    as_matrix,
    identity,
    validate_density,
)

#: max-abs defect of ``Phi(1) - 1`` below which a channel is called unital
UNITALITY_TOL = 1e-10
#: reservoir eigenvalues below this carry no Kraus operator
KRAUS_WEIGHT_CUTOFF = 1e-14


@dataclass(frozen=True)
class QuantumChannel:
    """A square Kraus family.

    The constructor only checks shapes, so that non-trace-preserving sets can
    still be inspected (see :func:`is_trace_preserving`). Use
    :func:`kraus_channel` or one of the builders to get a validated channel.
    """

    kraus_ops: Tuple[np.ndarray, ...]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.kraus_ops)
        if not ops:
            raise ChannelError("Kraus family is empty")
        dims = {k.shape[0] for k in ops}
        if len(dims) != 1:
            raise DimensionError(f"Kraus operators have differing dimensions {sorted(dims)}")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    def __call__(self, m) -> np.ndarray:
        """Apply the map to an arbitrary operator (no state validation)."""
        m = np.asarray(m, dtype=np.complex128)
        if m.shape != (self.dim, self.dim):
            raise DimensionError(f"operator shape {m.shape} does not match channel dim {self.dim}")
        return _frozen(sum(k @ m @ k.conj().T for k in self.kraus_ops))


@dataclass(frozen=True)
class UnitalityReport:
    defect_matrix: np.ndarray
    max_abs_defect: float
    is_unital: bool
    method: Literal["direct", "commutator"]


@dataclass(frozen=True)
class FOperatorFamily:
    """Reservoir blocks ``F_ji`` of a joint unitary in the system basis ``basis``.

    ``ops[(j, i)]`` acts on the reservoir; ``i`` labels the initial and ``j``
    the final system basis state. ``basis`` holds the system basis vectors as
    columns.
    """

    ops: Dict[Tuple[int, int], np.ndarray]
    sys_dim: int
    res_dim: int
    basis: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.basis is None:
            object.__setattr__(self, "basis", identity(self.sys_dim))
        missing = [(j, i) for j in range(self.sys_dim) for i in range(self.sys_dim)
                   if (j, i) not in self.ops]
        if missing:
            raise ChannelError(f"F-operator family is missing index pairs {missing}")

    def reconstruct(self) -> np.ndarray:
        """``sum_{i,j} |psi_j><psi_i| (x) F_ji``."""
        b = self.basis
        u = np.zeros((self.sys_dim * self.res_dim,) * 2, dtype=np.complex128)
        for (j, i), f in self.ops.items():
            u += np.kron(np.outer(b[:, j], b[:, i].conj()), f)
        return _frozen(u)


def kraus_channel(ops: Sequence, tol: float = DEFAULT_TOL,
                  require_trace_preserving: bool = True) -> QuantumChannel:
    channel = QuantumChannel(tuple(ops), tol)
    if require_trace_preserving:
        ok, defect = is_trace_preserving(channel, tol)
        if not ok:
            raise ChannelError(f"Kraus family is not trace preserving (defect {defect:.3e})")
    return channel


def identity_channel(dim: int) -> QuantumChannel:
    return QuantumChannel((identity(dim),))


def is_trace_preserving(channel: QuantumChannel, tol: Optional[float] = None) -> Tuple[bool, float]:
    """Return ``(max|sum K^dagger K - 1| <= tol, that defect)``."""
    tol = channel.tol if tol is None else tol
    s = sum(k.conj().T @ k for k in channel.kraus_ops)
    defect = float(np.max(np.abs(s - np.eye(channel.dim))))
    return defect <= tol, defect


def apply(channel: QuantumChannel, rho: DensityMatrix) -> DensityMatrix:
    """``Phi(rho)``, re-validated as a state."""
    if channel.dim != rho.dim:
        raise DimensionError(f"channel acts on dim {channel.dim}, state has dim {rho.dim}")
    out = channel(rho.matrix)
    try:
        return validate_density(out, max(rho.tol, channel.tol))
    except InvalidStateError as exc:
        raise ChannelError(f"channel output is not a state ({exc}); the channel is broken") from exc


def stinespring_channel(u: UnitaryOperator, pi0: DensityMatrix,
                        cutoff: float = KRAUS_WEIGHT_CUTOFF) -> QuantumChannel:
    """Kraus form of ``rho -> Tr_res[U (rho (x) pi0) U^dagger]``.

    With ``pi0 = sum_k lam_k |k><k|`` the Kraus operators are
    ``sqrt(lam_k) <m|U|k>`` for every reservoir basis vector ``|m>`` and every
    eigenvector with ``lam_k > cutoff``.
    """
    if pi0.dim != u.res_dim:
        raise DimensionError(f"reservoir state dim {pi0.dim} != unitary res_dim {u.res_dim}")
    lam, vecs = np.linalg.eigh(0.5 * (pi0.matrix + pi0.matrix.conj().T))
    blocks = u.matrix.reshape(u.sys_dim, u.res_dim, u.sys_dim, u.res_dim)
    ops = []
    for weight, v in zip(lam, vecs.T):
        if weight <= cutoff:
            continue
        # <m|U|v> for all m at once: shape (sys, res_m, sys)
        contracted = np.einsum("ambn,n->amb", blocks, v)
        for m in range(u.res_dim):
            ops.append(np.sqrt(weight) * contracted[:, m, :])
    return kraus_channel(ops, tol=max(u.tol, pi0.tol))


def stinespring_dilation(channel: QuantumChannel) -> Tuple[UnitaryOperator, DensityMatrix]:
    """A joint unitary and pure reservoir state that generate ``channel``.

    The reservoir has one level per Kraus operator and starts in ``|0>``.
    The isometry ``|psi> -> sum_a K_a|psi> (x) |a>`` fills the columns with
    reservoir input ``0``; the remaining columns are an orthonormal completion.
    """
    ok, defect = is_trace_preserving(channel)
    if not ok:
        raise ChannelError(f"only trace-preserving channels have a dilation (defect {defect:.3e})")
    d, n = channel.dim, len(channel.kraus_ops)
    v = np.stack(channel.kraus_ops, axis=1).reshape(d * n, d)
    u = np.zeros((d * n, d * n), dtype=np.complex128)
    cols = np.arange(d) * n
    u[:, cols] = v
    if n > 1:
        rest = [c for c in range(d * n) if c % n]
        u[:, rest] = scipy.linalg.null_space(v.conj().T)
    pi0 = np.zeros((n, n), dtype=np.complex128)
    pi0[0, 0] = 1.0
    return UnitaryOperator(u, d, n, tol=max(channel.tol, 1e-9)), validate_density(pi0)


def _check_projectors(projectors: Sequence[np.ndarray], tol: float) -> None:
    dim = projectors[0].shape[0]
    total = sum(projectors)
    completeness = float(np.max(np.abs(total - np.eye(dim))))
    if completeness > tol:
        raise ChannelError(f"projectors do not sum to identity (defect {completeness:.3e})")
    for a, pa in enumerate(projectors):
        for b, pb in enumerate(projectors):
            target = pa if a == b else np.zeros_like(pa)
            err = float(np.max(np.abs(pa @ pb - target)))
            if err > tol:
                raise ChannelError(f"projectors {a} and {b} violate P_a P_b = delta_ab P_a (defect {err:.3e})")


def measurement_feedback_channel(projectors: Sequence, feedbacks: Sequence,
                                 tol: float = DEFAULT_TOL) -> QuantumChannel:
    """Projective measurement followed by an outcome-dependent unitary.

    Kraus operators are ``U_a P_a``. ``feedbacks`` may be
    :class:`UnitaryOperator` instances or plain unitary matrices.
    """
    if len(projectors) != len(feedbacks):
        raise ChannelError(f"{len(projectors)} projectors but {len(feedbacks)} feedback unitaries")
    if not projectors:
        raise ChannelError("empty projector family")
    ps = [as_matrix(p) for p in projectors]
    us = [f if isinstance(f, UnitaryOperator) else UnitaryOperator.local(f, tol) for f in feedbacks]
    if len({p.shape for p in ps} | {u.matrix.shape for u in us}) != 1:
        raise DimensionError("projectors and feedback unitaries must share one dimension")
    _check_projectors(ps, tol)
    return kraus_channel([u.matrix @ p for u, p in zip(us, ps)], tol)


def extract_f_operators(u: UnitaryOperator, sys_basis=None, tol: float = DEFAULT_TOL) -> FOperatorFamily:
    """Decompose ``U = sum_{i,j} |psi_j><psi_i| (x) F_ji``.

    ``F_ji[m, k] = <psi_j, m| U |psi_i, k>``. ``sys_basis`` holds the basis
    vectors as columns; the computational basis is used when omitted.
    """
    b = identity(u.sys_dim) if sys_basis is None else np.asarray(sys_basis, dtype=np.complex128)
    if b.shape != (u.sys_dim, u.sys_dim):
        raise DimensionError(f"basis shape {b.shape} does not match sys_dim {u.sys_dim}")
    err = float(np.max(np.abs(b.conj().T @ b - np.eye(u.sys_dim))))
    if err > tol:
        raise ValueError(f"system basis is not orthonormal (defect {err:.3e})")
    bb = np.kron(b, np.eye(u.res_dim))
    blocks = (bb.conj().T @ u.matrix @ bb).reshape(u.sys_dim, u.res_dim, u.sys_dim, u.res_dim)
    ops = {(j, i): _frozen(np.ascontiguousarray(blocks[j, :, i, :]))
           for j in range(u.sys_dim) for i in range(u.sys_dim)}
    return FOperatorFamily(ops, u.sys_dim, u.res_dim, _frozen(b.copy()))


def unitality_defect_commutator(f: FOperatorFamily, pi0: DensityMatrix,
                                tol: float = UNITALITY_TOL) -> UnitalityReport:
    """``[Phi(1) - 1]_{jj'} = sum_i Tr(pi0 [F_{j'i}^dagger, F_ji])``.

    Matrix elements are taken in the family's system basis.
    """
    if pi0.dim != f.res_dim:
        raise DimensionError(f"reservoir state dim {pi0.dim} != F-family res_dim {f.res_dim}")
    n = f.sys_dim
    defect = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        for jp in range(n):
            acc = 0.0j
            for i in range(n):
                fji = f.ops[(j, i)]
                fjpi_dag = f.ops[(jp, i)].conj().T
                acc += np.trace(pi0.matrix @ (fjpi_dag @ fji - fji @ fjpi_dag))
            defect[j, jp] = acc
    worst = float(np.max(np.abs(defect)))
    return UnitalityReport(_frozen(defect), worst, worst <= tol, "commutator")


def unitality_defect_direct(channel: QuantumChannel, tol: float = UNITALITY_TOL) -> UnitalityReport:
    """``Phi(1) - 1 = sum_m K_m K_m^dagger - 1``."""
    defect = sum(k @ k.conj().T for k in channel.kraus_ops) - np.eye(channel.dim)
    worst = float(np.max(np.abs(defect)))
    return UnitalityReport(_frozen(defect), worst, worst <= tol, "direct")


def choi_matrix(channel: Union[QuantumChannel, Callable], dim: Optional[int] = None) -> np.ndarray:
    """``sum_ij |i><j| (x) Phi(|i><j|)``; PSD exactly when ``Phi`` is completely positive.

    Any linear map on ``dim x dim`` matrices may be passed as a callable,
    which is how maps without a Kraus form (e.g. the transpose) are checked.
    """
    if isinstance(channel, QuantumChannel):
        dim = channel.dim
    elif dim is None:
        raise ValueError("dim is required when passing a bare map")
    c = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for i in range(dim):
        for j in range(dim):
            e = np.zeros((dim, dim), dtype=np.complex128)
            e[i, j] = 1.0
            c += np.kron(e, np.asarray(channel(e)))
    return _frozen(c)
