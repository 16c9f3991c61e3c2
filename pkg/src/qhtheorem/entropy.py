"""Von Neumann entropy in nats."""
from __future__ import annotations

import numpy as np

from .channels import QuantumChannel, apply
from .exceptions import DimensionError, InvalidStateError
from .linalg import DensityMatrix


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """``S = -sum(lam * ln lam)`` over the eigenvalues of ``rho``.

    Eigenvalues in ``[-tol, 0)`` are roundoff and count as zero; anything
    more negative means ``rho`` is not a state and raises.
    """
    lam = np.array(rho.eigenvalues())
    if lam[0] < -rho.tol:
        raise InvalidStateError("positivity", float(-lam[0]), rho.tol)
    lam = lam[lam > 0.0]
    s = float(-np.sum(lam * np.log(lam)))
    # clip -0.0 and the tiny negative left by an eigenvalue of 1 + ulp
    return s if s > 0.0 else 0.0


def entropy_change(channel: QuantumChannel, rho: DensityMatrix) -> float:
    """``S(Phi(rho)) - S(rho)``."""
    if channel.dim != rho.dim:
        raise DimensionError(f"channel acts on dim {channel.dim}, state has dim {rho.dim}")
    return von_neumann_entropy(apply(channel, rho)) - von_neumann_entropy(rho)
