"""Constructive state decompositions and transcript ledgers.

``build_coupling`` splits the action of the probabilistic-flip channel on a
density matrix and on a pure state into matched branches whose pairwise
fidelities control the fidelity of the mixtures.  ``build_history_decomposition``
extends that split along whole reward histories, and ``classical_ledger``
runs the analogous bookkeeping for classical transcript distributions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .distance import sqrt_fidelity, total_variation
from .linalg import dagger, hermitian_eig, projector
from .oracles import RewardFamily, make_arm_oracle, make_channel_e, make_ox


def _trace_norm(a: np.ndarray) -> float:
    w = hermitian_eig(0.5 * (a + a.conj().T))[0]
    return float(np.sum(np.abs(w)))


def _coupling_angle(p: float, q: float) -> tuple[float, float]:
    """cos/sin of the rotation aligning the two channel purifications.

    ``p`` parametrizes the channel on the density matrix, ``q`` the channel
    on the pure state; ``p == q`` gives an exactly zero sine.
    """
    cos_a = np.sqrt(p * q) + np.sqrt((1.0 - p) * (1.0 - q))
    sin_a = np.sqrt((1.0 - p) * q) - np.sqrt((1.0 - q) * p)
    return float(cos_a), float(sin_a)


@dataclass(frozen=True)
class CouplingDecomposition:
    p: float
    q: float
    cos_alpha: float
    sin_alpha: float
    rho0: np.ndarray
    rho1: np.ndarray
    psi0: np.ndarray
    psi1: np.ndarray
    q_prime: float
    initial_overlap: float  # S
    split_value: float  # weighted branch-fidelity sum
    mixture_value: float  # sqrtF of the two channel outputs
    margin_concavity: float  # mixture_value - split_value
    margin_bound: float  # split_value - closed-form lower bound
    residual_rho: float  # trace-norm reconstruction error, density side
    residual_psi: float  # trace-norm reconstruction error, pure side
    angle_residual: float  # |cos^2 + sin^2 - 1|


def build_coupling(
    rho: np.ndarray,
    psi: np.ndarray,
    u: np.ndarray,
    p: float,
    q: float,
    eta: float,
) -> CouplingDecomposition:
    """Branch split of ``E^p`` on ``rho`` against ``E^q`` on ``psi``.

    ``u`` must be a self-adjoint unitary.  The split keeps
    ``(1-p) rho0 + p rho1`` equal to the channel output on the density side
    and reproduces the pure side as a two-point mixture with weight
    ``q_prime``; the weighted branch fidelities then dominate

        S - (p-q)^2 |<psi|(U rho U - rho)|psi>| / (2 eta S)
          - (p-q)^2 (Re<psi|U rho|psi> - <psi|rho|psi>)^2 / (8 eta^2 S^3).

    The degenerate ``||psi1_raw|| = 0`` case cannot occur for
    ``p, q in [eta, 1-eta]``; it is guarded by falling back to
    ``psi1 = U psi`` with ``q_prime = q``.
    """
    if eta <= 0.0 or eta > 0.5 + 1e-12:
        raise ValueError("eta must lie in (0, 1/2]")
    for val in (p, q):
        if not eta - 1e-12 <= val <= 1.0 - eta + 1e-12:
            raise ValueError("p, q must lie in [eta, 1-eta]")
    psi = np.asarray(psi, dtype=np.complex128)
    rho = np.asarray(rho, dtype=np.complex128)
    s = np.sqrt(max(np.vdot(psi, rho @ psi).real, 0.0))
    if s <= 0.0:
        raise ValueError("initial overlap S must be positive")

    cos_a, sin_a = _coupling_angle(p, q)
    u_psi = u @ psi
    psi0_raw = np.sqrt(1.0 - q) * cos_a * psi + np.sqrt(q) * sin_a * u_psi
    psi1_raw = np.sqrt(q) * cos_a * u_psi - np.sqrt(1.0 - q) * sin_a * psi
    q_prime = float(np.vdot(psi1_raw, psi1_raw).real)
    if q_prime > 1e-28:
        psi1 = psi1_raw / np.sqrt(q_prime)
    else:  # unreachable for in-band p, q; kept as a loud-but-safe branch
        psi1 = u_psi
        q_prime = q
    norm0 = float(np.vdot(psi0_raw, psi0_raw).real)
    psi0 = psi0_raw / np.sqrt(norm0)

    rho0 = rho
    rho1 = u @ rho @ dagger(u)
    mix_rho = (1.0 - p) * rho0 + p * rho1
    chan_rho = (1.0 - p) * rho + p * (u @ rho @ dagger(u))
    residual_rho = _trace_norm(mix_rho - chan_rho)
    mix_psi = q_prime * projector(psi1) + (1.0 - q_prime) * projector(psi0)
    chan_psi = (1.0 - q) * projector(psi) + q * projector(u_psi)
    residual_psi = _trace_norm(mix_psi - chan_psi)

    split = np.sqrt((1.0 - p) * (1.0 - q_prime)) * np.sqrt(
        max(np.vdot(psi0, rho0 @ psi0).real, 0.0)
    ) + np.sqrt(p * q_prime) * np.sqrt(max(np.vdot(psi1, rho1 @ psi1).real, 0.0))
    mixture = sqrt_fidelity(chan_rho, chan_psi)

    first = abs(np.vdot(psi, (rho1 - rho) @ psi)) / (2.0 * eta * s)
    second = (np.vdot(psi, u @ rho @ psi).real - np.vdot(psi, rho @ psi).real) ** 2 / (
        8.0 * eta**2 * s**3
    )
    bound = s - (p - q) ** 2 * first - (p - q) ** 2 * second

    return CouplingDecomposition(
        p=p,
        q=q,
        cos_alpha=cos_a,
        sin_alpha=sin_a,
        rho0=rho0,
        rho1=rho1,
        psi0=psi0,
        psi1=psi1,
        q_prime=q_prime,
        initial_overlap=float(s),
        split_value=float(split),
        mixture_value=float(mixture),
        margin_concavity=float(mixture - split),
        margin_bound=float(split - bound),
        residual_rho=residual_rho,
        residual_psi=residual_psi,
        angle_residual=abs(cos_a**2 + sin_a**2 - 1.0),
    )


@dataclass(frozen=True)
class PerturbedCoupling:
    q_prime: float
    split_value: float
    margin: float
    min_eigenvalue: float


def build_coupling_perturbed(
    rho: np.ndarray,
    psi: np.ndarray,
    u: np.ndarray,
    p: float,
    q: float,
    eta: float,
    sigma: np.ndarray,
) -> PerturbedCoupling:
    """Coupling split with branch states displaced by a traceless operator.

    Branches become ``rho0 = rho + p sigma`` and
    ``rho1 = U rho U^dag + (1-p) sigma`` (both must stay positive
    semidefinite) and the lower bound picks up the extra penalty
    ``(p |<psi0_raw|sigma|psi0_raw>| + (1-p) |<psi1_raw|sigma|psi1_raw>|)/S``
    with the unnormalized branch vectors.
    """
    sigma = np.asarray(sigma, dtype=np.complex128)
    if abs(np.trace(sigma).real) > 1e-10 or np.max(np.abs(sigma - sigma.conj().T)) > 1e-10:
        raise ValueError("sigma must be traceless Hermitian")
    psi = np.asarray(psi, dtype=np.complex128)
    rho = np.asarray(rho, dtype=np.complex128)
    s = np.sqrt(max(np.vdot(psi, rho @ psi).real, 0.0))
    if s <= 0.0:
        raise ValueError("initial overlap S must be positive")

    rho0 = rho + p * sigma
    rho1 = u @ rho @ dagger(u) + (1.0 - p) * sigma
    min_eig = min(
        float(hermitian_eig(rho0)[0][0]), float(hermitian_eig(rho1)[0][0])
    )
    if min_eig < -1e-10:
        raise ValueError("perturbation too large")

    cos_a, sin_a = _coupling_angle(p, q)
    u_psi = u @ psi
    psi0_raw = np.sqrt(1.0 - q) * cos_a * psi + np.sqrt(q) * sin_a * u_psi
    psi1_raw = np.sqrt(q) * cos_a * u_psi - np.sqrt(1.0 - q) * sin_a * psi
    q_prime = float(np.vdot(psi1_raw, psi1_raw).real)
    psi0 = psi0_raw / np.linalg.norm(psi0_raw)
    psi1 = psi1_raw / np.sqrt(q_prime) if q_prime > 1e-28 else u_psi

    split = np.sqrt((1.0 - p) * (1.0 - q_prime)) * np.sqrt(
        max(np.vdot(psi0, rho0 @ psi0).real, 0.0)
    ) + np.sqrt(p * q_prime) * np.sqrt(max(np.vdot(psi1, rho1 @ psi1).real, 0.0))

    first = abs(np.vdot(psi, (u @ rho @ dagger(u) - rho) @ psi)) / (2.0 * eta * s)
    second = (np.vdot(psi, u @ rho @ psi).real - np.vdot(psi, rho @ psi).real) ** 2 / (
        8.0 * eta**2 * s**3
    )
    extra = (
        p * abs(np.vdot(psi0_raw, sigma @ psi0_raw))
        + (1.0 - p) * abs(np.vdot(psi1_raw, sigma @ psi1_raw))
    ) / s
    bound = s - (p - q) ** 2 * first - (p - q) ** 2 * second - extra
    return PerturbedCoupling(
        q_prime=q_prime,
        split_value=float(split),
        margin=float(split - bound),
        min_eigenvalue=min_eig,
    )


# ---------------------------------------------------------------------------
# history decomposition
# ---------------------------------------------------------------------------

HISTORY_MAX_T = 4
HISTORY_MAX_ARMS = 3


@dataclass
class HistoryLevel:
    weights_p: np.ndarray  # probability of each history under the shifted model
    weights_q: np.ndarray  # constructed measure for the reference model
    rho_states: list[np.ndarray]
    psi_states: list[np.ndarray]
    recon_p_residual: float
    recon_q_residual: float
    sum_p: float
    sum_q: float


@dataclass
class HistoryDecomposition:
    arm: int  # 1-based family member index
    levels: list[HistoryLevel] = field(default_factory=list)
    purity_margins: list[float] = field(default_factory=list)

    @property
    def max_reconstruction_residual(self) -> float:
        return max(
            max(lv.recon_p_residual for lv in self.levels),
            max(lv.recon_q_residual for lv in self.levels),
        )

    @property
    def max_weight_residual(self) -> float:
        return max(
            max(abs(lv.sum_p - 1.0) for lv in self.levels),
            max(abs(lv.sum_q - 1.0) for lv in self.levels),
        )

    @property
    def min_purity_margin(self) -> float:
        return min(self.purity_margins) if self.purity_margins else np.inf


def build_history_decomposition(
    family: RewardFamily,
    i: int,
    unitaries: list[np.ndarray],
    psi0: np.ndarray,
) -> HistoryDecomposition:
    """Per-history split of the shifted and reference channel evolutions.

    Enumerates all reward histories of the interleaved circuit, splitting
    the shifted-arm run into slightly perturbed branch states and the
    reference run into pure states, and verifies at every depth that the
    weighted branches reassemble the exact channel states.  Also records the
    per-branch purity margins ``(R(z_t) - R(z_{t+1}))/(2 Delta^2) -
    tr(rho - O rho O)^2``.

    Hard caps: at most 4 rounds and 3 arms (history count grows as 2^(N T)).
    """
    n = family.n_arms
    t_max = len(unitaries)
    if t_max > HISTORY_MAX_T or n > HISTORY_MAX_ARMS:
        raise ValueError("cap exceeded")
    if not 1 <= i <= n:
        raise ValueError("arm out of range")
    eta = family.eta
    delta = family.gap(i)
    if family.gap(n) ** 2 / eta > 0.5 + 1e-12:
        raise ValueError("requires gap_N^2 / eta <= 1/2")

    p0 = family.base[0]
    p_ref = family.member(0).as_array()  # reference means; entry i-1 is p_i
    p_i = float(p_ref[i - 1])
    arm = i - 1  # code index
    dim = 2 * n
    o_i = make_arm_oracle(arm, n, "bit")
    cos_a, sin_a = _coupling_angle(p0, p_i)
    beta0 = p0 * delta**2 / eta
    beta1 = (1.0 - p0) * delta**2 / eta

    # exact channel states for the reconstruction checks
    chan_i = make_channel_e(tuple(family.member(i).means), "bit")
    chan_0 = make_channel_e(tuple(p_ref), "bit")

    rho_exact = projector(psi0)
    ref_exact = projector(psi0)

    # per-x factors shared by both measures on the arms other than i
    other_weights = np.empty(2**n)
    ox_mats: list[np.ndarray] = []
    x_bit_i = np.empty(2**n, dtype=np.int64)
    for code in range(2**n):
        bits = [(code >> k) & 1 for k in range(n)]
        x_bit_i[code] = bits[arm]
        w = 1.0
        for k in range(n):
            if k == arm:
                continue
            w *= p_ref[k] if bits[k] else 1.0 - p_ref[k]
        other_weights[code] = w
        hat = list(bits)
        hat[arm] = 0
        ox_mats.append(make_ox(np.array(hat, dtype=np.uint8)))

    result = HistoryDecomposition(arm=i)
    weights_p = np.array([1.0])
    weights_q = np.array([1.0])
    rho_states = [projector(psi0)]
    psi_states = [np.asarray(psi0, dtype=np.complex128)]

    for t in range(t_max):
        u = unitaries[t]
        rho_exact = chan_i.apply(u @ rho_exact @ dagger(u))
        ref_exact = chan_0.apply(u @ ref_exact @ dagger(u))

        new_wp, new_wq = [], []
        new_rho, new_psi = [], []
        for wp, wq, rho_z, psi_z in zip(weights_p, weights_q, rho_states, psi_states):
            rho_t = u @ rho_z @ dagger(u)
            psi_t = u @ psi_z
            o_rho = o_i @ rho_t @ dagger(o_i)
            o_psi = o_i @ psi_t
            branch_rho = (
                (1.0 - beta0) * rho_t + beta0 * o_rho,
                (1.0 - beta1) * o_rho + beta1 * rho_t,
            )
            psi1_raw = np.sqrt(p_i) * cos_a * o_psi - np.sqrt(1.0 - p_i) * sin_a * psi_t
            psi0_raw = np.sqrt(1.0 - p_i) * cos_a * psi_t + np.sqrt(p_i) * sin_a * o_psi
            q1 = float(np.vdot(psi1_raw, psi1_raw).real)
            branch_psi = (psi0_raw / np.sqrt(1.0 - q1), psi1_raw / np.sqrt(q1))

            # purity ledger for both branches of this node
            r_before = np.trace(rho_t @ rho_t).real
            diff = rho_t - o_rho
            trace_sq = np.trace(diff @ diff).real
            if delta > 0.0:
                for br in branch_rho:
                    r_after = np.trace(br @ br).real
                    result.purity_margins.append(
                        float((r_before - r_after) / (2.0 * delta**2) - trace_sq)
                    )

            for code in range(2**n):
                c = int(x_bit_i[code])
                w_p = wp * other_weights[code] * (p0 if c else 1.0 - p0)
                w_q = wq * other_weights[code] * (q1 if c else 1.0 - q1)
                ox = ox_mats[code]
                new_wp.append(w_p)
                new_wq.append(w_q)
                new_rho.append(ox @ branch_rho[c] @ dagger(ox))
                new_psi.append(ox @ branch_psi[c])

        weights_p = np.array(new_wp)
        weights_q = np.array(new_wq)
        rho_states = new_rho
        psi_states = new_psi

        mix_p = sum(w * r for w, r in zip(weights_p, rho_states))
        mix_q = sum(w * projector(v) for w, v in zip(weights_q, psi_states))
        result.levels.append(
            HistoryLevel(
                weights_p=weights_p,
                weights_q=weights_q,
                rho_states=rho_states,
                psi_states=psi_states,
                recon_p_residual=float(np.max(np.abs(mix_p - rho_exact))),
                recon_q_residual=float(np.max(np.abs(mix_q - ref_exact))),
                sum_p=float(np.sum(weights_p)),
                sum_q=float(np.sum(weights_q)),
            )
        )
    return result


# ---------------------------------------------------------------------------
# classical transcript ledger
# ---------------------------------------------------------------------------


class RoundRobinPolicy:
    """Deterministic cyclic pulls, arm ``t mod N`` at step ``t``."""

    def __init__(self, n_arms: int) -> None:
        self.n_arms = n_arms

    def choose(self, t: int, pulls: np.ndarray, sums: np.ndarray) -> np.ndarray:
        return np.full(pulls.shape[0], t % self.n_arms, dtype=np.int64)


class GreedyPolicy:
    """One warmup pull per arm, then the empirical best (lowest index wins ties)."""

    def __init__(self, n_arms: int) -> None:
        self.n_arms = n_arms

    def choose(self, t: int, pulls: np.ndarray, sums: np.ndarray) -> np.ndarray:
        if t < self.n_arms:
            return np.full(pulls.shape[0], t, dtype=np.int64)
        means = np.where(pulls > 0, sums / np.maximum(pulls, 1), -np.inf)
        return np.argmax(means, axis=1).astype(np.int64)


class FixedSequencePolicy:
    def __init__(self, sequence: list[int]) -> None:
        self.sequence = list(sequence)

    def choose(self, t: int, pulls: np.ndarray, sums: np.ndarray) -> np.ndarray:
        return np.full(pulls.shape[0], self.sequence[t], dtype=np.int64)


LEDGER_MAX_T = 16


@dataclass
class LedgerReport:
    arm: int  # 1-based family index of the shifted arm
    delta: float
    final_sqrt_fidelity: float
    decision_gap: float  # P^j(decide j) - P^0(decide j)
    key_margins: np.ndarray  # per-step recursion margins
    ledgered_key_margins: np.ndarray  # per-step recursion with decay weights
    geom_margins: np.ndarray  # per final history
    tv_link_margin: float
    fvg_link_margin: float
    ledger_link_margin: float  # sqrtF >= decay-weighted Bhattacharyya sum
    telescoped_margin: float
    bound_margin_d1: float
    bound_margin_d2: float  # informational, printed form of the final bound
    geom_skipped: bool = False
    notice: str = ""

    @property
    def min_margin(self) -> float:
        vals = [
            self.key_margins.min() if len(self.key_margins) else np.inf,
            self.ledgered_key_margins.min() if len(self.ledgered_key_margins) else np.inf,
            self.tv_link_margin,
            self.fvg_link_margin,
            self.ledger_link_margin,
            self.telescoped_margin,
        ]
        if not self.geom_skipped:
            vals.append(self.geom_margins.min() if len(self.geom_margins) else np.inf)
            vals.append(self.bound_margin_d1)
        return float(min(vals))


def classical_ledger(
    p_shift: np.ndarray | tuple[float, ...],
    p_ref: np.ndarray | tuple[float, ...],
    j: int,
    eta: float,
    policy,
    horizon: int,
) -> LedgerReport:
    """Exhaustive transcript ledger for one shifted-arm pair of reward vectors.

    ``p_shift`` and ``p_ref`` differ (at most) in code arm ``j - 1``; the
    policy is deterministic, so histories branch only over rewards and the
    2^T transcripts are enumerated exactly.  Verifies the per-step fidelity
    recursion, the decay-weighted variant, the geometric pull-count sum, and
    the assembled final bound with the decision error of the
    empirical-best rule standing in for the confidence parameter.

    When the shifted gap is zero the decay factors are identically one and
    the geometric bound is infinite; those checks are skipped with a notice.
    """
    p_a = np.asarray(p_shift, dtype=float)
    p_b = np.asarray(p_ref, dtype=float)
    n_arms = len(p_a)
    arm = j - 1
    if not 0 <= arm < n_arms:
        raise ValueError("arm out of range")
    if np.any(np.delete(p_a, arm) != np.delete(p_b, arm)):
        raise ValueError("vectors may differ only in the shifted arm")
    if horizon > LEDGER_MAX_T:
        raise ValueError("cap exceeded")
    delta = float(p_a[arm] - p_b[arm])
    rate = delta**2 / (4.0 * eta * (1.0 - eta))
    decay = 1.0 - rate

    n_nodes = 1
    prob_a = np.array([1.0])
    prob_b = np.array([1.0])
    d = np.array([1.0])
    gsum = np.array([0.0])  # running sum of d^2 over pulls of the shifted arm
    led_sum_d1 = 0.0  # sum_t sum_z sqrt(Pa Pb) d(z) 1[a_t = j]
    led_sum_d2 = 0.0
    pulls = np.zeros((1, n_arms), dtype=np.int64)
    sums = np.zeros((1, n_arms), dtype=np.int64)
    sqrt_f = [1.0]
    sqrt_f_led = [1.0]
    key_margins = []
    led_key_margins = []

    for t in range(horizon):
        arms_t = policy.choose(t, pulls, sums)
        mask = arms_t == arm
        root = np.sqrt(prob_a * prob_b)
        pull_term = float(np.sum(root[mask]))
        pull_term_led = float(np.sum((root * d)[mask]))
        led_sum_d1 += pull_term_led
        led_sum_d2 += float(np.sum((root * d**2)[mask]))

        # branch on the reward bit (appended as the high bit)
        pa_pull = p_a[arms_t]
        pb_pull = p_b[arms_t]
        prob_a = np.concatenate([prob_a * (1.0 - pa_pull), prob_a * pa_pull])
        prob_b = np.concatenate([prob_b * (1.0 - pb_pull), prob_b * pb_pull])
        d_next = np.where(mask, d * decay, d)
        gsum_next = gsum + np.where(mask, d**2, 0.0)
        d = np.concatenate([d_next, d_next])
        gsum = np.concatenate([gsum_next, gsum_next])
        reward = np.concatenate(
            [np.zeros(n_nodes, dtype=np.int64), np.ones(n_nodes, dtype=np.int64)]
        )
        arms_rep = np.concatenate([arms_t, arms_t])
        pulls = np.vstack([pulls, pulls])
        sums = np.vstack([sums, sums])
        rows = np.arange(2 * n_nodes)
        pulls[rows, arms_rep] += 1
        sums[rows, arms_rep] += reward
        n_nodes *= 2

        f_now = float(np.sum(np.sqrt(prob_a * prob_b)))
        f_led_now = float(np.sum(np.sqrt(prob_a * prob_b) * d))
        key_margins.append(f_now - (sqrt_f[-1] - rate * pull_term))
        led_key_margins.append(
            f_led_now - (sqrt_f_led[-1] - 2.0 * rate * pull_term_led)
        )
        sqrt_f.append(f_now)
        sqrt_f_led.append(f_led_now)

    # empirical-best decision rule, lowest index wins ties
    means = np.where(pulls > 0, sums / np.maximum(pulls, 1), -np.inf)
    decision = np.argmax(means, axis=1)
    decide_j = decision == arm
    decision_gap = float(np.sum(prob_a[decide_j]) - np.sum(prob_b[decide_j]))
    tv = total_variation(prob_a, prob_b)
    f_final = sqrt_f[-1]
    tv_link = tv - decision_gap
    fvg_link = float(np.sqrt(max(1.0 - f_final**2, 0.0)) - tv)
    ledger_link = f_final - sqrt_f_led[-1]
    telescoped = sqrt_f_led[-1] - (1.0 - 2.0 * rate * led_sum_d1)

    if delta == 0.0:
        return LedgerReport(
            arm=j,
            delta=delta,
            final_sqrt_fidelity=f_final,
            decision_gap=decision_gap,
            key_margins=np.array(key_margins),
            ledgered_key_margins=np.array(led_key_margins),
            geom_margins=np.array([]),
            tv_link_margin=tv_link,
            fvg_link_margin=fvg_link,
            ledger_link_margin=ledger_link,
            telescoped_margin=telescoped,
            bound_margin_d1=np.inf,
            bound_margin_d2=np.inf,
            geom_skipped=True,
            notice="zero gap: decay factor is identically 1, geometric bound infinite",
        )

    geom_margins = 4.0 * eta * (1.0 - eta) / delta**2 - gsum
    delta_eff = 0.5 * (1.0 - max(decision_gap, 0.0))
    lhs = (1.0 - 2.0 * np.sqrt(delta_eff * (1.0 - delta_eff))) * 2.0 * eta * (
        1.0 - eta
    ) / delta**2
    return LedgerReport(
        arm=j,
        delta=delta,
        final_sqrt_fidelity=f_final,
        decision_gap=decision_gap,
        key_margins=np.array(key_margins),
        ledgered_key_margins=np.array(led_key_margins),
        geom_margins=geom_margins,
        tv_link_margin=tv_link,
        fvg_link_margin=fvg_link,
        ledger_link_margin=ledger_link,
        telescoped_margin=telescoped,
        bound_margin_d1=float(led_sum_d1 - lhs),
        bound_margin_d2=float(led_sum_d2 - lhs),
    )


def family_ledger(
    family: RewardFamily, j: int, policy, horizon: int
) -> LedgerReport:
    """Ledger for family member ``j`` against the reference member 0."""
    return classical_ledger(
        family.member(j).as_array(),
        family.member(0).as_array(),
        j,
        family.eta,
        policy,
        horizon,
    )
