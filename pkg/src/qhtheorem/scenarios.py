"""Qubit experiments: Maxwell demons, two-qubit cooling/heating and the
entropy cost of weak initial classical correlations.

Basis identification for every qubit: ``|g>`` (ground) is index 0 and ``|e>``
is index 1; for a demon or reservoir qubit ``|0>`` is index 0 and ``|1>``
is index 1. Joint operators are ordered ``system (x) reservoir``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import linalg as la
from .channels import (
    QuantumChannel,
    UnitalityReport,
    extract_f_operators,
    measurement_feedback_channel,
    stinespring_channel,
    stinespring_dilation,
    unitality_defect_commutator,
    unitality_defect_direct,
    UNITALITY_TOL,
)
from .entropy import von_neumann_entropy
from .exceptions import ParameterError
from .linalg import DensityMatrix, UnitaryOperator

G, E = 0, 1

SIGMA_X = la.as_matrix([[0, 1], [1, 0]])


def _proj(i: int, j: Optional[int] = None) -> np.ndarray:
    return la.ket_bra(2, i, i if j is None else j)


@dataclass(frozen=True)
class ScenarioParams:
    """``p0``: system ground population, ``q0``: reservoir ``|0>`` population,
    ``eps``: correlation strength. The complements are derived, never stored."""

    p0: float = 0.5
    q0: float = 0.5
    eps: float = 0.0

    def __post_init__(self):
        for name in ("p0", "q0", "eps"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ParameterError(name, value, "must be a finite real number")
            if not 0.0 <= value <= 1.0:
                raise ParameterError(name, value, "must lie in [0, 1]")
            object.__setattr__(self, name, float(value))

    @property
    def p1(self) -> float:
        return 1.0 - self.p0

    @property
    def q1(self) -> float:
        return 1.0 - self.q0


@dataclass(frozen=True)
class ExperimentReport:
    """Outcome of one scenario run from the point of view of one system.

    ``joint_initial``/``joint_final`` are ordered ``system (x) reservoir`` for
    this report's choice of system; ``res_dim == 1`` when the scenario has no
    explicit reservoir. ``unitality_commutator`` is computed from the F-blocks
    of the generating unitary, ``unitality_direct`` from the Kraus family.
    """

    scenario_id: str
    label: str
    params: ScenarioParams
    sys_dim: int
    res_dim: int
    initial_state: DensityMatrix
    final_state: DensityMatrix
    joint_initial: DensityMatrix
    joint_final: DensityMatrix
    s_initial: float
    s_final: float
    delta_s: float
    channel: QuantumChannel
    unitality_direct: UnitalityReport
    unitality_commutator: UnitalityReport

    @property
    def is_unital(self) -> bool:
        if self.unitality_direct.is_unital != self.unitality_commutator.is_unital:
            raise AssertionError(
                f"{self.scenario_id}/{self.label}: unitality routes disagree "
                f"(direct {self.unitality_direct.max_abs_defect:.3e}, "
                f"commutator {self.unitality_commutator.max_abs_defect:.3e})")
        return self.unitality_direct.is_unital

    def reservoir_final(self) -> DensityMatrix:
        return la.validate_density(
            la.partial_trace(self.joint_final.matrix, self.sys_dim, self.res_dim, keep="reservoir"))


@dataclass(frozen=True)
class ExpansionResult:
    eps: float
    c1: float
    c2: float
    exact_diff: float
    expansion_diff: float
    residual: float


def _report(scenario_id: str, label: str, params: ScenarioParams, u: UnitaryOperator,
            joint_initial: np.ndarray, pi0: DensityMatrix, tol: float) -> ExperimentReport:
    """Evolve ``joint_initial`` by ``u`` and classify the channel ``u`` generates with ``pi0``."""
    r0 = la.validate_density(joint_initial)
    rf = la.validate_density(u.matrix @ r0.matrix @ u.matrix.conj().T)
    rho0 = la.validate_density(la.partial_trace(r0.matrix, u.sys_dim, u.res_dim))
    rhof = la.validate_density(la.partial_trace(rf.matrix, u.sys_dim, u.res_dim))
    channel = stinespring_channel(u, pi0)
    s0, sf = von_neumann_entropy(rho0), von_neumann_entropy(rhof)
    return ExperimentReport(
        scenario_id=scenario_id, label=label, params=params,
        sys_dim=u.sys_dim, res_dim=u.res_dim,
        initial_state=rho0, final_state=rhof, joint_initial=r0, joint_final=rf,
        s_initial=s0, s_final=sf, delta_s=sf - s0,
        channel=channel,
        unitality_direct=unitality_defect_direct(channel, tol),
        unitality_commutator=unitality_defect_commutator(extract_f_operators(u), pi0, tol),
    )


# ---------------------------------------------------------------------------
# Maxwell demon
# ---------------------------------------------------------------------------

def demon_measurement_feedback() -> Tuple[Tuple[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]:
    """Projectors ``(M_g, M_e)`` and feedback unitaries ``(U_g, U_e)``."""
    m_g, m_e = _proj(G), _proj(E)
    u_g = la.as_matrix(_proj(G) + _proj(E))
    u_e = la.as_matrix(_proj(G, E) + _proj(E, G))
    return (m_g, m_e), (u_g, u_e)


def semiclassical_demon_channel() -> QuantumChannel:
    projectors, feedbacks = demon_measurement_feedback()
    return measurement_feedback_channel(projectors, feedbacks)


def semiclassical_demon(params: ScenarioParams, tol: float = UNITALITY_TOL) -> ExperimentReport:
    """Measure the qubit, flip it to ``|g>`` when found in ``|e>``.

    There is no physical reservoir; the commutator route runs on a
    Stinespring dilation of the measurement-feedback Kraus family.
    """
    channel = semiclassical_demon_channel()
    rho0 = la.validate_density(la.diag(params.p0, params.p1))
    rhof = la.validate_density(channel(rho0.matrix))
    u, pi0 = stinespring_dilation(channel)
    s0, sf = von_neumann_entropy(rho0), von_neumann_entropy(rhof)
    return ExperimentReport(
        scenario_id="semiclassical_demon", label="qubit", params=params,
        sys_dim=2, res_dim=1,
        initial_state=rho0, final_state=rhof, joint_initial=rho0, joint_final=rhof,
        s_initial=s0, s_final=sf, delta_s=sf - s0,
        channel=channel,
        unitality_direct=unitality_defect_direct(channel, tol),
        unitality_commutator=unitality_defect_commutator(extract_f_operators(u), pi0, tol),
    )


def demon_measurement_unitary() -> UnitaryOperator:
    """``U_1``: the demon flips from ``|0>`` to ``|1>`` iff the qubit is excited."""
    m = la.kron(_proj(G), la.identity(2)) + la.kron(_proj(E), SIGMA_X)
    return UnitaryOperator(m, 2, 2)


def demon_feedback_unitary() -> UnitaryOperator:
    """``U_2``: flip the qubit iff the demon holds ``|1>``."""
    m = la.kron(la.identity(2), _proj(0)) + la.kron(SIGMA_X, _proj(1))
    return UnitaryOperator(m, 2, 2)


def demon_unitary() -> UnitaryOperator:
    """``U = U_2 U_1``; also the partial-swap used for cooling/heating and correlations."""
    return UnitaryOperator(demon_feedback_unitary().matrix @ demon_measurement_unitary().matrix, 2, 2)


def quantum_demon(params: ScenarioParams, tol: float = UNITALITY_TOL) -> ExperimentReport:
    """Demon as a qubit that records the measurement and drives the feedback unitarily."""
    pi0 = la.validate_density(_proj(0))
    r0 = la.kron(la.diag(params.p0, params.p1), pi0.matrix)
    return _report("quantum_demon", "qubit", params, demon_unitary(), r0, pi0, tol)


# ---------------------------------------------------------------------------
# two-qubit cooling / heating
# ---------------------------------------------------------------------------

def cool_heat(params: Optional[ScenarioParams] = None,
              tol: float = UNITALITY_TOL) -> Tuple[ExperimentReport, ExperimentReport]:
    """Qubit 1 starts maximally mixed, qubit 2 in ``|g>``; the partial swap
    cools qubit 1 to ``|g>`` and heats qubit 2 to maximal mixing.

    Returns ``(qubit-1 report, qubit-2 report)``. In the second report the
    joint operators are reordered so that qubit 2 comes first.
    """
    params = ScenarioParams() if params is None else params
    u = demon_unitary()
    r0 = la.kron(0.5 * la.identity(2), _proj(G))
    first = _report("cool_heat", "qubit1", params, u, r0, la.validate_density(_proj(G)), tol)
    second = _report("cool_heat", "qubit2", params, u.swapped(), la.swap_factors(r0, 2, 2),
                     la.validate_density(0.5 * la.identity(2)), tol)
    return first, second


# ---------------------------------------------------------------------------
# weak initial classical correlations
# ---------------------------------------------------------------------------

def uncorrelated_initial_state(params: ScenarioParams) -> np.ndarray:
    return la.kron(la.diag(params.p0, params.p1), la.diag(params.q0, params.q1))


def correlated_initial_state(params: ScenarioParams) -> np.ndarray:
    """``(1 - eps) rho0 (x) pi0 + eps (p0 |g0><g0| + p1 |e1><e1|)``."""
    classical = params.p0 * la.kron(_proj(G), _proj(0)) + params.p1 * la.kron(_proj(E), _proj(1))
    r0 = (1.0 - params.eps) * uncorrelated_initial_state(params) + params.eps * classical
    return la.as_matrix(r0)


def expansion_coefficients(p0: float, q0: float) -> Tuple[float, float]:
    """First- and second-order coefficients of ``S_f - S_f^(0)`` in ``eps``.

    ``c1 = (q0 - p0) ln(q0 / (1 - q0))`` and ``c2 = -(p0 - q0)^2 / (2 q0 (1 - q0))``.
    """
    if not 0.0 <= p0 <= 1.0:
        raise ParameterError("p0", p0, "must lie in [0, 1]")
    if not 0.0 < q0 < 1.0:
        raise ParameterError("q0", q0, "must lie strictly inside (0, 1): ln(q0/(1-q0)) and "
                                       "1/(q0(1-q0)) are singular at the endpoints")
    q1 = 1.0 - q0
    c1 = (q0 - p0) * math.log(q0 / q1)
    c2 = -((p0 - q0) ** 2) / (2.0 * q0 * q1)
    return c1, c2


def correlated_entropy_experiment(
        params: ScenarioParams, tol: float = UNITALITY_TOL,
) -> Tuple[ExperimentReport, ExperimentReport, ExpansionResult]:
    """Run the partial swap from an uncorrelated and from a classically
    correlated initial state with the same marginals.

    A correlated initial state does not define a channel on the system. The
    correlated report therefore classifies the channel generated by the
    reservoir marginal of its initial state, which reduces to the
    uncorrelated channel at ``eps = 0``.
    """
    c1, c2 = expansion_coefficients(params.p0, params.q0)
    u = demon_unitary()
    pi0 = la.validate_density(la.diag(params.q0, params.q1))
    uncorrelated = _report("correlations", "uncorrelated", params, u,
                           uncorrelated_initial_state(params), pi0, tol)
    r0 = la.validate_density(correlated_initial_state(params))
    pi0_marginal = la.validate_density(la.partial_trace(r0.matrix, 2, 2, keep="reservoir"))
    correlated = _report("correlations", "correlated", params, u, r0.matrix, pi0_marginal, tol)
    exact = correlated.s_final - uncorrelated.s_final
    approx = c1 * params.eps + c2 * params.eps ** 2
    expansion = ExpansionResult(params.eps, c1, c2, exact, approx, abs(exact - approx))
    return uncorrelated, correlated, expansion
