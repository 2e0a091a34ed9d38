"""Exact circuit simulation with transcript recording and query accounting.

A circuit is an ordered list of steps over one register layout: arbitrary
unitaries, oracle invocations, and an optional terminal measurement.  The
oracle slot is filled at run time by one of the oracle models: the one-time
channel applies its Kraus composition, the reusable model applies the
sampled unitary of the requested round, and the full-superposition table
oracle applies its fixed unitary.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from . import config
from .distance import purity, sqrt_fidelity
from .linalg import projector, validate_pure_state
from .oracles import ErmOracle, OneTimeOracle, ReusableOracle


@dataclass(frozen=True)
class Unitary:
    matrix: np.ndarray


@dataclass(frozen=True)
class OracleCall:
    """Oracle invocation; ``reuse`` re-invokes a previous reusable round."""

    reuse: int | None = None


@dataclass(frozen=True)
class Measure:
    projectors: tuple[np.ndarray, ...]


Step = Unitary | OracleCall | Measure


@dataclass(frozen=True)
class Circuit:
    dim: int
    steps: tuple[Step, ...]

    def __post_init__(self) -> None:
        for s in self.steps:
            if isinstance(s, Unitary) and s.matrix.shape != (self.dim, self.dim):
                raise ValueError("dim mismatch")
            if isinstance(s, Measure):
                for p in s.projectors:
                    if p.shape != (self.dim, self.dim):
                        raise ValueError("dim mismatch")

    @property
    def n_oracle_calls(self) -> int:
        return sum(isinstance(s, OracleCall) for s in self.steps)


@dataclass
class TranscriptStep:
    index: int
    kind: str  # "initial" | "unitary" | "oracle" | "measure"
    queries: int
    purity: float
    fidelity: float | None = None
    state: np.ndarray | None = None


@dataclass
class Transcript:
    steps: list[TranscriptStep] = field(default_factory=list)
    outcome_distribution: np.ndarray | None = None
    final_state: np.ndarray | None = None

    @property
    def queries(self) -> int:
        return self.steps[-1].queries if self.steps else 0

    def purities(self) -> np.ndarray:
        return np.array([s.purity for s in self.steps])

    def fidelities(self) -> np.ndarray:
        return np.array([np.nan if s.fidelity is None else s.fidelity for s in self.steps])

    def to_json(self) -> str:
        rows = [
            {
                "step": s.index,
                "purity": s.purity,
                "fidelity": s.fidelity,
                "queries": s.queries,
            }
            for s in self.steps
        ]
        return json.dumps(rows, sort_keys=True)


@dataclass
class TrajectorySample:
    seed: int
    history: list[np.ndarray]
    final_state: np.ndarray
    outcome: int | None


def _oracle_dim(oracle) -> int:
    return oracle.dim


def _apply_oracle(
    oracle,
    rho: np.ndarray,
    call: OracleCall,
    round_counter: list[int],
) -> np.ndarray:
    if isinstance(oracle, OneTimeOracle):
        return oracle.apply(rho)
    if isinstance(oracle, ReusableOracle):
        t = round_counter[0] if call.reuse is None else call.reuse
        if call.reuse is None:
            round_counter[0] += 1
        u = oracle.invoke(t)
        return u @ rho @ u.conj().T
    if isinstance(oracle, ErmOracle):
        u = oracle.unitary()
        return u @ rho @ u.conj().T
    raise TypeError(f"unsupported oracle model {type(oracle).__name__}")


def run_exact(
    circuit: Circuit,
    oracle,
    initial: np.ndarray,
    *,
    reference: np.ndarray | None = None,
    keep_states: bool = False,
) -> Transcript:
    """Exact density-matrix evolution of ``circuit`` against one oracle model.

    Each oracle call increments the query counter by one.  Trace drift
    beyond the configured threshold aborts with "numerical blowup".  When
    ``reference`` is given, every step records the fidelity against that
    fixed state (used by tests; paired evolution lives in
    :func:`run_paired`).
    """
    if oracle is not None and _oracle_dim(oracle) != circuit.dim:
        raise ValueError("dim mismatch")
    rho = np.asarray(initial, dtype=np.complex128)
    if rho.shape != (circuit.dim, circuit.dim):
        raise ValueError("dim mismatch")
    transcript = Transcript()
    queries = 0
    round_counter = [0]

    def record(idx: int, kind: str) -> None:
        fid = None if reference is None else sqrt_fidelity(rho, reference) ** 2
        transcript.steps.append(
            TranscriptStep(
                index=idx,
                kind=kind,
                queries=queries,
                purity=purity(rho),
                fidelity=fid,
                state=rho.copy() if keep_states else None,
            )
        )

    record(0, "initial")
    for idx, step in enumerate(circuit.steps, start=1):
        if isinstance(step, Unitary):
            rho = step.matrix @ rho @ step.matrix.conj().T
            kind = "unitary"
        elif isinstance(step, OracleCall):
            if oracle is None:
                raise ValueError("circuit has oracle calls but no oracle was given")
            rho = _apply_oracle(oracle, rho, step, round_counter)
            queries += 1
            kind = "oracle"
        elif isinstance(step, Measure):
            transcript.outcome_distribution = measure(rho, step.projectors)
            kind = "measure"
        else:  # pragma: no cover - defensive
            raise TypeError(f"unknown step {step!r}")
        drift = abs(np.trace(rho).real - 1.0)
        if drift > config.TOLS.trace_drift:
            raise RuntimeError("numerical blowup")
        record(idx, kind)
    transcript.final_state = rho.copy()
    return transcript


@dataclass
class PairedRun:
    transcript_a: Transcript
    transcript_b: Transcript
    fidelities: np.ndarray  # fidelity (squared) per recorded step

    def sqrt_fidelities(self) -> np.ndarray:
        return np.sqrt(self.fidelities)


def run_paired(
    circuit: Circuit,
    oracle_a,
    oracle_b,
    initial: np.ndarray,
    *,
    keep_states: bool = True,
) -> PairedRun:
    """Synchronized evolution under two oracle models on the same circuit.

    Both runs share every unitary; only the oracle slots differ.  Records
    per-step purities of both states and the squared fidelity between them.
    """
    rho_a = np.asarray(initial, dtype=np.complex128)
    rho_b = rho_a.copy()
    ta, tb = Transcript(), Transcript()
    fids: list[float] = []
    queries = 0
    counter_a, counter_b = [0], [0]

    def record(idx: int, kind: str) -> None:
        f = sqrt_fidelity(rho_a, rho_b) ** 2
        fids.append(f)
        for t, rho in ((ta, rho_a), (tb, rho_b)):
            t.steps.append(
                TranscriptStep(
                    index=idx,
                    kind=kind,
                    queries=queries,
                    purity=purity(rho),
                    fidelity=f,
                    state=rho.copy() if keep_states else None,
                )
            )

    record(0, "initial")
    for idx, step in enumerate(circuit.steps, start=1):
        if isinstance(step, Unitary):
            rho_a = step.matrix @ rho_a @ step.matrix.conj().T
            rho_b = step.matrix @ rho_b @ step.matrix.conj().T
            kind = "unitary"
        elif isinstance(step, OracleCall):
            rho_a = _apply_oracle(oracle_a, rho_a, step, counter_a)
            rho_b = _apply_oracle(oracle_b, rho_b, step, counter_b)
            queries += 1
            kind = "oracle"
        elif isinstance(step, Measure):
            ta.outcome_distribution = measure(rho_a, step.projectors)
            tb.outcome_distribution = measure(rho_b, step.projectors)
            kind = "measure"
        else:  # pragma: no cover - defensive
            raise TypeError(f"unknown step {step!r}")
        for rho in (rho_a, rho_b):
            if abs(np.trace(rho).real - 1.0) > config.TOLS.trace_drift:
                raise RuntimeError("numerical blowup")
        record(idx, kind)
    ta.final_state = rho_a.copy()
    tb.final_state = rho_b.copy()
    return PairedRun(ta, tb, np.array(fids))


def run_trajectories(
    circuit: Circuit,
    oracle: OneTimeOracle,
    initial: np.ndarray,
    n_samples: int,
    seed: int,
) -> list[TrajectorySample]:
    """Kraus unraveling of the one-time channel on a pure initial state.

    Every oracle call draws one reward realization X ~ prod Ber(p_i) and
    applies the matching unitary, so each trajectory stays pure; averaging
    the trajectory projectors reproduces the exact channel state.  Sample
    ``k`` uses the independent stream ``SeedSequence([seed, k])``.
    """
    psi0 = np.asarray(initial, dtype=np.complex128)
    validate_pure_state(psi0)
    samples: list[TrajectorySample] = []
    for k in range(n_samples):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), k]))
        psi = psi0.copy()
        history: list[np.ndarray] = []
        outcome: int | None = None
        for step in circuit.steps:
            if isinstance(step, Unitary):
                psi = step.matrix @ psi
            elif isinstance(step, OracleCall):
                x = oracle.sample_x(rng)
                history.append(x)
                psi = oracle.unitary_for(x) @ psi
            elif isinstance(step, Measure):
                probs = measure(projector(psi), step.projectors)
                outcome = int(rng.choice(len(probs), p=probs))
        samples.append(TrajectorySample(k, history, psi, outcome))
    return samples


def average_state(samples: list[TrajectorySample]) -> np.ndarray:
    acc = np.zeros(
        (len(samples[0].final_state), len(samples[0].final_state)), dtype=np.complex128
    )
    for s in samples:
        acc += projector(s.final_state)
    return acc / len(samples)


def measure(state: np.ndarray, projectors: tuple[np.ndarray, ...]) -> np.ndarray:
    """Outcome probabilities tr(E_k rho) for a projective/POVM measurement."""
    state = np.asarray(state, dtype=np.complex128)
    dim = state.shape[0]
    total = np.zeros((dim, dim), dtype=np.complex128)
    for p in projectors:
        total += p
    if np.max(np.abs(total - np.eye(dim))) > config.TOLS.completeness:
        raise ValueError("incomplete projector set")
    probs = np.array([np.trace(p @ state).real for p in projectors])
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def trajectories_to_csv(samples: list[TrajectorySample]) -> str:
    """CSV export with header seed,step,history_bits,outcome."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["seed", "step", "history_bits", "outcome"])
    for s in samples:
        outcome = "" if s.outcome is None else str(s.outcome)
        for t, x in enumerate(s.history):
            bits = "".join(str(int(b)) for b in x)
            writer.writerow([s.seed, t, bits, outcome])
    return buf.getvalue()
