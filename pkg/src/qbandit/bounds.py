"""Closed-form bound calculators and inequality checkers.

Every ``check_*`` function returns a signed margin (bound side minus the
side it must dominate), so verification sweeps can record how close each
inequality comes to violation instead of collapsing to a boolean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distance import fidelity, sqrt_fidelity, trace_distance
from .linalg import dagger
from .oracles import (
    RewardFamily,
    RewardVector,
    arm_projector,
    make_arm_oracle,
    make_channel_e,
    make_channel_f,
)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def complexity_h(p: RewardVector | np.ndarray | tuple[float, ...]) -> float:
    """Hardness sum of inverse squared gaps against the unique best arm."""
    means = np.sort(np.asarray(p.means if isinstance(p, RewardVector) else p, dtype=float))[::-1]
    if len(means) < 2:
        return 0.0
    if means[0] - means[1] <= 0.0:
        raise ValueError("best arm not unique")
    return float(np.sum((means[0] - means[1:]) ** -2.0))


def grover_lower_bound(n_arms: int, p: float, delta: float) -> float:
    """Query floor (1-p)(1-4 delta(1-delta))^2 N / p for the noisy search channel."""
    if not 0.0 < p < 1.0:
        raise ValueError("bound undefined or vacuous for p in {0, 1}")
    if not 0.0 <= delta < 0.5:
        raise ValueError("delta must lie in [0, 1/2)")
    return (1.0 - p) * (1.0 - 4.0 * delta * (1.0 - delta)) ** 2 * n_arms / p


def optimal_constant(delta: float, eta: float) -> float:
    """Explicit constant (eta (1 - 2 sqrt(delta(1-delta))) / 20)^2.

    ``delta`` must lie in [0, 1/2].  ``eta`` is accepted up to 1 so the
    formula can be evaluated standalone; the bandit setting uses
    ``eta <= 1/2``.
    """
    if not 0.0 <= delta <= 0.5:
        raise ValueError("delta must lie in [0, 1/2]")
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    return (eta * (1.0 - 2.0 * np.sqrt(delta * (1.0 - delta))) / 20.0) ** 2


# ---------------------------------------------------------------------------
# projection estimate
# ---------------------------------------------------------------------------


def check_projection_lemma(
    o: np.ndarray, p: np.ndarray, phi: np.ndarray, sigma: np.ndarray
) -> float:
    """Margin of |<phi|(O sigma O^dag - sigma)|phi>| <= 2 ||P phi|| ||phi|| (tr(..)^2)^(1/2).

    Requires O to act trivially on the complement of P's image.
    """
    dim = o.shape[0]
    eye = np.eye(dim)
    if np.max(np.abs((eye - p) @ o - (eye - p))) > 1e-10:
        raise ValueError("projector/operator incompatible")
    diff = o @ sigma @ dagger(o) - sigma
    lhs = abs(np.vdot(phi, diff @ phi))
    trace_term = np.sqrt(max(np.trace(diff @ diff).real, 0.0))
    rhs = 2.0 * np.linalg.norm(p @ phi) * np.linalg.norm(phi) * trace_term
    return float(rhs - lhs)


# ---------------------------------------------------------------------------
# scalar inequalities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarLemmaReport:
    n_samples: int
    min_margin_cos: float
    min_margin_sin: float
    min_margin_sqrt: float

    @property
    def min_margin(self) -> float:
        return min(self.min_margin_cos, self.min_margin_sin, self.min_margin_sqrt)


def scalar_cos_margin(p: np.ndarray, q: np.ndarray, c: np.ndarray) -> np.ndarray:
    lhs = np.sqrt((1 - p) * (1 - q)) + np.sqrt(p * q)
    rhs = 1.0 - (p - q) ** 2 / (4.0 * c * (1.0 - c))
    return lhs - rhs


def scalar_sin_margin(p: np.ndarray, q: np.ndarray, c: np.ndarray) -> np.ndarray:
    lhs = np.abs(np.sqrt((1 - p) * q) - np.sqrt((1 - q) * p))
    rhs = np.abs(p - q) / (2.0 * np.sqrt(c * (1.0 - c)))
    return rhs - lhs


def scalar_sqrt_margin(s: np.ndarray, t: np.ndarray) -> np.ndarray:
    lhs = np.sqrt(1.0 + s + t)
    rhs = 1.0 - np.abs(s) + t / 2.0 - t**2 / 2.0
    return lhs - rhs


def check_scalar_lemmas(n_samples: int, rng: np.random.Generator) -> ScalarLemmaReport:
    """Randomized sweep of the two trigonometric bounds and the sqrt bound."""
    c = rng.uniform(0.02, 0.49, size=n_samples)
    p = c + (1.0 - 2.0 * c) * rng.random(n_samples)
    q = c + (1.0 - 2.0 * c) * rng.random(n_samples)
    m_cos = scalar_cos_margin(p, q, c)
    m_sin = scalar_sin_margin(p, q, c)
    s = rng.uniform(-3.0, 3.0, size=n_samples)
    t = rng.uniform(-3.0, 3.0, size=n_samples)
    keep = s + t >= -1.0
    retry = 0
    while not np.all(keep) and retry < 64:
        s[~keep] = rng.uniform(-3.0, 3.0, size=int(np.sum(~keep)))
        t[~keep] = rng.uniform(-3.0, 3.0, size=int(np.sum(~keep)))
        keep = s + t >= -1.0
        retry += 1
    s, t = s[keep], t[keep]
    m_sqrt = scalar_sqrt_margin(s, t)
    return ScalarLemmaReport(
        n_samples=n_samples,
        min_margin_cos=float(np.min(m_cos)),
        min_margin_sin=float(np.min(m_sin)),
        min_margin_sqrt=float(np.min(m_sqrt)),
    )


def reward_family_h_margins(family: RewardFamily) -> tuple[float, float]:
    """Margins of H(p0)/4 <= H(pj) <= 2 H(p0) over all members j >= 1."""
    h0 = complexity_h(family.member(0))
    lower = np.inf
    upper = np.inf
    for j in range(1, family.n_arms + 1):
        hj = complexity_h(family.member(j))
        lower = min(lower, hj - h0 / 4.0)
        upper = min(upper, 2.0 * h0 - hj)
    return float(lower), float(upper)


# ---------------------------------------------------------------------------
# fidelity-loss inequalities for the lever-pull channels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FidelityLemmaMargins:
    stated: float  # with constant 1/(eta (1-eta))
    sharp: float  # with the tighter constant 1/(2 eta (1-eta))


def check_fidelity_lemma(
    rho: np.ndarray,
    sigma: np.ndarray,
    p: float,
    q: float,
    i: int,
    eta: float,
    flip: str = "bit",
    work_dim: int | None = None,
) -> FidelityLemmaMargins:
    """Single-arm fidelity-loss bound for channels with nearby means.

    sqrt F drops by at most (p-q)^2/(eta(1-eta)) sqrt(tr(P_i rho) tr(P_i sigma));
    the tighter constant 1/(2 eta (1-eta)) is reported alongside.
    """
    if eta <= 0.0 or not (eta - 1e-12 <= p <= 1 - eta + 1e-12) or not (
        eta - 1e-12 <= q <= 1 - eta + 1e-12
    ):
        raise ValueError("p, q must lie in [eta, 1-eta] with eta > 0")
    wd = (2 if flip == "bit" else 1) if work_dim is None else work_dim
    n_arms = rho.shape[0] // wd
    f_p = make_channel_f(i, p, n_arms, flip, wd)
    f_q = make_channel_f(i, q, n_arms, flip, wd)
    proj = arm_projector(i, n_arms, wd)
    before = sqrt_fidelity(rho, sigma)
    after = sqrt_fidelity(f_p.apply(rho), f_q.apply(sigma))
    weight = np.sqrt(
        max(np.trace(proj @ rho).real, 0.0) * max(np.trace(proj @ sigma).real, 0.0)
    )
    loss_stated = (p - q) ** 2 / (eta * (1.0 - eta)) * weight
    loss_sharp = (p - q) ** 2 / (2.0 * eta * (1.0 - eta)) * weight
    return FidelityLemmaMargins(
        stated=float(after - (before - loss_stated)),
        sharp=float(after - (before - loss_sharp)),
    )


def check_fid_corollary1(
    rho: np.ndarray,
    sigma: np.ndarray,
    p_vec: np.ndarray | tuple[float, ...],
    q_vec: np.ndarray | tuple[float, ...],
    eta: float,
    flip: str = "bit",
) -> tuple[float, float]:
    """Vector version: loss summed over arms with constant 1/(2 eta (1-eta)).

    Returns ``(margin, marginal_invariance_residual)`` where the residual is
    the largest |tr(P_i F_j(rho)) - tr(P_i rho)| over i != j.
    """
    p_vec = np.asarray(p_vec, dtype=float)
    q_vec = np.asarray(q_vec, dtype=float)
    n_arms = len(p_vec)
    wd = rho.shape[0] // n_arms
    before = sqrt_fidelity(rho, sigma)
    after = sqrt_fidelity(
        make_channel_e(tuple(p_vec), flip, wd).apply(rho),
        make_channel_e(tuple(q_vec), flip, wd).apply(sigma),
    )
    loss = 0.0
    for i in range(n_arms):
        proj = arm_projector(i, n_arms, wd)
        weight = np.sqrt(
            max(np.trace(proj @ rho).real, 0.0) * max(np.trace(proj @ sigma).real, 0.0)
        )
        loss += (p_vec[i] - q_vec[i]) ** 2 / (2.0 * eta * (1.0 - eta)) * weight
    margin = float(after - (before - loss))

    residual = 0.0
    for i in range(n_arms):
        proj = arm_projector(i, n_arms, wd)
        t0 = np.trace(proj @ rho).real
        for j in range(n_arms):
            if j == i:
                continue
            f_j = make_channel_f(j, float(p_vec[j]), n_arms, flip, wd)
            residual = max(residual, abs(np.trace(proj @ f_j.apply(rho)).real - t0))
    return margin, float(residual)


# ---------------------------------------------------------------------------
# transcripts: purity ledger and accumulation bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PurityLedgerReport:
    margins: np.ndarray  # per oracle call, first inequality
    equalities: np.ndarray  # |rhs2 - rhs1| per call (should vanish)
    purity_identity_residuals: np.ndarray

    @property
    def min_margin(self) -> float:
        return float(np.min(self.margins)) if len(self.margins) else np.inf

    @property
    def max_residual(self) -> float:
        return (
            float(np.max(self.purity_identity_residuals))
            if len(self.purity_identity_residuals)
            else 0.0
        )


def check_purity_fidelity_ledger(paired, i: int, p: float, n_arms: int, flip: str = "bit") -> PurityLedgerReport:
    """Per-call check that fidelity loss is paid for by purity loss.

    ``paired`` is a :class:`qbandit.simulator.PairedRun` of the noisy arm
    channel against the trivial oracle on the same circuit, recorded with
    states kept.  For each oracle call the squared-fidelity drop is bounded
    by ``2 p ||P_i psi|| (tr(rho - O rho O)^2)^(1/2)``, which equals
    ``2 ||P_i psi|| sqrt(p/(1-p)) sqrt(purity drop)`` through the exact
    purity decrement identity.
    """
    steps_a = paired.transcript_a.steps
    steps_b = paired.transcript_b.steps
    wd = steps_a[0].state.shape[0] // n_arms
    o = make_arm_oracle(i, n_arms, flip, wd)
    proj = arm_projector(i, n_arms, wd)
    margins, equalities, residuals = [], [], []
    for k, step in enumerate(steps_a):
        if step.kind != "oracle":
            continue
        rho_pre = steps_a[k - 1].state
        psi_pre = steps_b[k - 1].state
        diff = rho_pre - o @ rho_pre @ dagger(o)
        trace_term = np.sqrt(max(np.trace(diff @ diff).real, 0.0))
        norm_proj = np.sqrt(max(np.trace(proj @ psi_pre).real, 0.0))
        f_drop = paired.fidelities[k - 1] - paired.fidelities[k]
        rhs1 = 2.0 * p * norm_proj * trace_term
        margins.append(rhs1 - f_drop)
        purity_drop = steps_a[k - 1].purity - step.purity
        residuals.append(abs(purity_drop - p * (1.0 - p) * trace_term**2))
        if 0.0 < p < 1.0:
            rhs2 = 2.0 * norm_proj * np.sqrt(p / (1.0 - p)) * np.sqrt(max(purity_drop, 0.0))
            equalities.append(abs(rhs2 - rhs1))
    return PurityLedgerReport(
        margins=np.array(margins),
        equalities=np.array(equalities),
        purity_identity_residuals=np.array(residuals),
    )


def check_fidelity_accumulation(paired, i: int, gap: float, eta: float, n_arms: int) -> float:
    """Accumulated fidelity-loss bound along a paired run of two oracles.

    Checks ``1 - sqrtF(final) <= sum_t 4 gap^2/(eta(1-eta))
    sqrt(tr(P_i rho_t^a) tr(P_i rho_t^b))`` with the traces taken right
    before each oracle invocation.  Returns the margin.
    """
    steps_a = paired.transcript_a.steps
    steps_b = paired.transcript_b.steps
    wd = steps_a[0].state.shape[0] // n_arms
    proj = arm_projector(i, n_arms, wd)
    acc = 0.0
    for k, step in enumerate(steps_a):
        if step.kind != "oracle":
            continue
        ta = max(np.trace(proj @ steps_a[k - 1].state).real, 0.0)
        tb = max(np.trace(proj @ steps_b[k - 1].state).real, 0.0)
        acc += 4.0 * gap**2 / (eta * (1.0 - eta)) * np.sqrt(ta * tb)
    lhs = 1.0 - np.sqrt(paired.fidelities[-1])
    return float(acc - lhs)


def helstrom_fidelity_consistency(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Margin of F <= 4 delta (1-delta) at the optimal discrimination error.

    With ``delta = 1/2 - T/2`` achieved by the optimal measurement, the
    squared fidelity can be at most ``4 delta (1 - delta) = 1 - T^2``.
    """
    t = trace_distance(rho, sigma)
    delta = 0.5 - 0.5 * t
    return float(4.0 * delta * (1.0 - delta) - fidelity(rho, sigma))
