"""Dense complex linear algebra for small composite systems.

Operators are plain ``numpy`` arrays of dtype ``complex128`` that are marked
read-only on construction; every function returns a fresh array.

Basis ordering convention: for a bipartite space ``system (x) reservoir`` the
composite index is ``i_sys * res_dim + i_res``, i.e. the system index is the
slow one. This is the ordering produced by ``np.kron(a_sys, b_res)`` and is
used everywhere in the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .exceptions import DimensionError, InvalidStateError, NotHermitianError, NotUnitaryError

DEFAULT_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a read-only square complex matrix with finite entries."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return _frozen(a)


def identity(dim: int) -> np.ndarray:
    return _frozen(np.eye(dim, dtype=np.complex128))


def ket_bra(dim: int, i: int, j: int) -> np.ndarray:
    """The matrix unit |i><j| in a ``dim``-dimensional space."""
    a = np.zeros((dim, dim), dtype=np.complex128)
    a[i, j] = 1.0
    return _frozen(a)


def diag(*values) -> np.ndarray:
    return _frozen(np.diag(np.asarray(values, dtype=np.complex128)))


def dagger(m) -> np.ndarray:
    return _frozen(np.array(np.asarray(m, dtype=np.complex128).conj().T))


def kron(a, b) -> np.ndarray:
    """Tensor product ``a (x) b`` with ``a`` as the slow index."""
    a, b = as_matrix(a), as_matrix(b)
    return _frozen(np.kron(a, b))


def partial_trace(m, sys_dim: int, res_dim: int,
                  keep: Literal["system", "reservoir"] = "system") -> np.ndarray:
    """Reduce a bipartite operator to one factor.

    :param m: operator on ``system (x) reservoir`` of dimension ``sys_dim * res_dim``.
    :param keep: which factor survives; the other is traced out.
    """
    m = as_matrix(m)
    if m.shape[0] != sys_dim * res_dim:
        raise DimensionError(f"matrix dim {m.shape[0]} != sys_dim*res_dim = {sys_dim * res_dim}")
    t = m.reshape(sys_dim, res_dim, sys_dim, res_dim)
    if keep == "system":
        out = np.einsum("ikjk->ij", t)
    elif keep == "reservoir":
        out = np.einsum("kikj->ij", t)
    else:
        raise ValueError(f"keep must be 'system' or 'reservoir', got {keep!r}")
    return _frozen(np.ascontiguousarray(out))


def swap_factors(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Re-express an operator on ``A (x) B`` as the same operator on ``B (x) A``."""
    m = as_matrix(m)
    if m.shape[0] != dim_a * dim_b:
        raise DimensionError(f"matrix dim {m.shape[0]} != {dim_a}*{dim_b}")
    t = m.reshape(dim_a, dim_b, dim_a, dim_b).transpose(1, 0, 3, 2)
    return _frozen(np.ascontiguousarray(t.reshape(dim_a * dim_b, dim_a * dim_b)))


def hermiticity_defect(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigenvalues(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    Raises :class:`NotHermitianError` if ``max|M - M^dagger| > tol``.
    """
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitianError(defect, tol)
    # symmetrize so roundoff-level anti-Hermitian parts are discarded
    return _frozen(np.linalg.eigvalsh(0.5 * (m + m.conj().T)))


@dataclass(frozen=True)
class DensityMatrix:
    """A validated state: Hermitian, unit trace and positive semidefinite within ``tol``.

    Build instances with :func:`validate_density`.
    """

    matrix: np.ndarray
    tol: float = DEFAULT_TOL

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigenvalues(self.matrix, self.tol)


def validate_density(m, tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Check the three density-matrix invariants and wrap ``m``.

    Raises :class:`InvalidStateError` naming the first violated invariant
    (checked in the order hermiticity, trace, positivity) with its defect.
    """
    m = as_matrix(m)
    herm = hermiticity_defect(m)
    if herm > tol:
        raise InvalidStateError("hermiticity", herm, tol)
    trace_defect = abs(np.trace(m) - 1.0)
    if trace_defect > tol:
        raise InvalidStateError("trace", float(trace_defect), tol)
    lam_min = float(hermitian_eigenvalues(m, tol)[0])
    if lam_min < -tol:
        raise InvalidStateError("positivity", -lam_min, tol)
    return DensityMatrix(m, tol)


@dataclass(frozen=True)
class UnitaryOperator:
    """A unitary on ``system (x) reservoir``; ``res_dim == 1`` when no split is declared."""

    matrix: np.ndarray
    sys_dim: int
    res_dim: int = 1
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if self.sys_dim < 1 or self.res_dim < 1 or m.shape[0] != self.sys_dim * self.res_dim:
            raise DimensionError(
                f"matrix dim {m.shape[0]} incompatible with sys_dim={self.sys_dim}, res_dim={self.res_dim}")
        defect = float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
        if defect > self.tol:
            raise NotUnitaryError(defect, self.tol)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def local(cls, m, tol: float = DEFAULT_TOL) -> "UnitaryOperator":
        m = as_matrix(m)
        return cls(m, m.shape[0], 1, tol)

    def swapped(self) -> "UnitaryOperator":
        """The same unitary with the roles of system and reservoir exchanged."""
        return UnitaryOperator(swap_factors(self.matrix, self.sys_dim, self.res_dim),
                               self.res_dim, self.sys_dim, self.tol)


# ---------------------------------------------------------------------------
# random sampling, used by property suites and the CLI self-checks
# ---------------------------------------------------------------------------

def random_unitary(dim: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix with phase fix."""
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return _frozen(q * (d / np.abs(d)))


def random_density(dim: int, rank: Optional[int] = None,
                   rng: Optional[np.random.Generator] = None) -> DensityMatrix:
    """Random state of the given rank (full rank by default) from a Ginibre ensemble."""
    rng = np.random.default_rng(rng)
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T) / np.trace(rho).real
    return validate_density(rho)


def random_hermitian(dim: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return _frozen(0.5 * (g + g.conj().T))
