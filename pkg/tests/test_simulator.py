import json

import numpy as np
import pytest

from qbandit.distance import purity, sqrt_fidelity, trace_distance, total_variation
from qbandit.linalg import basis_state, dagger, projector
from qbandit.oracles import (
    OneTimeOracle,
    ReusableOracle,
    RewardVector,
    make_arm_oracle,
)
from qbandit.rand import random_density_matrix, random_pure_state, random_unitary, spawn_rng
from qbandit.simulator import (
    Circuit,
    Measure,
    OracleCall,
    Unitary,
    average_state,
    measure,
    run_exact,
    run_paired,
    run_trajectories,
    trajectories_to_csv,
)


def comp_basis_projectors(dim):
    return tuple(projector(basis_state(dim, k)) for k in range(dim))


def test_empty_circuit():
    rho = np.eye(4) / 4
    t = run_exact(Circuit(4, ()), None, rho)
    assert t.queries == 0
    assert len(t.steps) == 1
    assert t.steps[0].purity == pytest.approx(0.25, abs=1e-12)


def test_single_oracle_call_purity_drop():
    # one noisy pull on a pure state: exact purity decrement identity
    rng = spawn_rng(41)
    for trial in range(20):
        n, p = 3, float(rng.uniform(0.05, 0.95))
        psi = random_pure_state(2 * n, rng)
        rho0 = projector(psi)
        oracle = OneTimeOracle(RewardVector((0.0, p, 0.0)))
        t = run_exact(Circuit(2 * n, (OracleCall(),)), oracle, rho0)
        o = make_arm_oracle(1, n, "bit")
        drop_pred = p * (1 - p) * np.trace(
            (rho0 - o @ rho0 @ dagger(o)) @ (rho0 - o @ rho0 @ dagger(o))
        ).real
        drop = t.steps[0].purity - t.steps[1].purity
        assert drop == pytest.approx(drop_pred, abs=1e-12)
        assert t.queries == 1


def test_trace_blowup_detected():
    bad = Unitary(2.0 * np.eye(2, dtype=complex))
    with pytest.raises(RuntimeError, match="numerical blowup"):
        run_exact(Circuit(2, (bad,)), None, np.eye(2, dtype=complex) / 2)


def test_paired_identical_oracles():
    rng = spawn_rng(42)
    n = 2
    oracle = OneTimeOracle(RewardVector((0.3, 0.6)))
    steps = []
    for _ in range(3):
        steps.append(Unitary(random_unitary(2 * n, rng)))
        steps.append(OracleCall())
    pr = run_paired(Circuit(2 * n, tuple(steps)), oracle, oracle, projector(random_pure_state(2 * n, rng)))
    assert np.max(np.abs(pr.fidelities - 1.0)) <= 1e-9


def test_paired_fidelity_purity_ledger():
    # noisy arm pull vs trivial oracle: every fidelity loss is paid in purity
    rng = spawn_rng(43)
    n, p, arm, t_steps = 3, 0.4, 1, 6
    dim = 2 * n
    oracle = OneTimeOracle(RewardVector(tuple(p if j == arm else 0.0 for j in range(n))))
    trivial = OneTimeOracle(RewardVector((0.0,) * n))
    steps = [Unitary(random_unitary(dim, rng))]
    for _ in range(t_steps):
        steps.append(OracleCall())
        steps.append(Unitary(random_unitary(dim, rng)))
    pr = run_paired(Circuit(dim, tuple(steps)), oracle, trivial, projector(random_pure_state(dim, rng)))
    o = make_arm_oracle(arm, n, "bit")
    p_i = np.zeros((dim, dim), dtype=complex)
    p_i[2 * arm : 2 * arm + 2, 2 * arm : 2 * arm + 2] = np.eye(2)
    for k, step in enumerate(pr.transcript_a.steps):
        if step.kind != "oracle":
            continue
        rho_pre = pr.transcript_a.steps[k - 1].state
        psi_state = pr.transcript_b.steps[k - 1].state
        f_before = pr.fidelities[k - 1]
        f_after = pr.fidelities[k]
        diff = rho_pre - o @ rho_pre @ dagger(o)
        trace_term = np.sqrt(np.trace(diff @ diff).real)
        norm_pi_psi = np.sqrt(np.trace(p_i @ psi_state).real)
        rhs = 2 * p * norm_pi_psi * trace_term
        assert rhs - (f_before - f_after) >= -1e-9
        # second form ties the trace term to the purity decrement exactly
        drop = pr.transcript_a.steps[k - 1].purity - step.purity
        rhs2 = 2 * norm_pi_psi * np.sqrt(p / (1 - p)) * np.sqrt(max(drop, 0.0))
        assert rhs2 == pytest.approx(rhs, abs=1e-9)


def test_reusable_oracle_in_circuit_reuses_rows():
    rewards = RewardVector((0.5, 0.5))
    oracle = ReusableOracle(rewards, spawn_rng(44))
    rho = projector(random_pure_state(4, spawn_rng(45)))
    circ = Circuit(4, (OracleCall(), OracleCall(reuse=0)))
    t = run_exact(circ, oracle, rho)
    # invoking the same row twice undoes the bit write
    assert np.max(np.abs(t.final_state - rho)) <= 1e-12
    assert t.queries == 2
    assert oracle.queries == 2


def test_trajectories_zero_vector_deterministic():
    n = 2
    rng = spawn_rng(46)
    u = random_unitary(2 * n, rng)
    psi0 = random_pure_state(2 * n, rng)
    oracle = OneTimeOracle(RewardVector((0.0, 0.0)))
    circ = Circuit(2 * n, (Unitary(u), OracleCall()))
    samples = run_trajectories(circ, oracle, psi0, 5, seed=7)
    for s in samples:
        assert np.max(np.abs(s.final_state - u @ psi0)) <= 1e-12
        assert len(s.history) == 1


def test_trajectories_match_exact_channel():
    n = 2
    rng = spawn_rng(47)
    psi0 = random_pure_state(2 * n, rng)
    u1, u2 = random_unitary(2 * n, rng), random_unitary(2 * n, rng)
    oracle = OneTimeOracle(RewardVector((0.7, 0.3)))
    circ = Circuit(2 * n, (Unitary(u1), OracleCall(), Unitary(u2), OracleCall()))
    exact = run_exact(circ, oracle, projector(psi0)).final_state
    samples = run_trajectories(circ, oracle, psi0, 3000, seed=11)
    assert trace_distance(average_state(samples), exact) <= 0.03
    assert all(len(s.history) == 2 for s in samples)


def test_trajectory_mixture_rate_improves_with_samples():
    n = 2
    rng = spawn_rng(48)
    psi0 = random_pure_state(2 * n, rng)
    oracle = OneTimeOracle(RewardVector((0.5, 0.5)))
    circ = Circuit(2 * n, (Unitary(random_unitary(2 * n, rng)), OracleCall()))
    exact = run_exact(circ, oracle, projector(psi0)).final_state
    d_small = trace_distance(average_state(run_trajectories(circ, oracle, psi0, 200, seed=3)), exact)
    d_large = trace_distance(average_state(run_trajectories(circ, oracle, psi0, 6400, seed=3)), exact)
    # ~ n^{-1/2} decay: 32x samples should cut the distance by ~5.6x; allow slack
    assert d_large <= d_small / 1.8


def test_measure_examples():
    probs = measure(projector(basis_state(4, 0)), comp_basis_projectors(4))
    assert np.allclose(probs, [1, 0, 0, 0], atol=1e-12)
    n = 5
    s = np.repeat(1 / np.sqrt(n), n)
    probs = measure(projector(s), comp_basis_projectors(n))
    assert np.allclose(probs, np.repeat(1 / n, n), atol=1e-12)


def test_measure_incomplete_set():
    with pytest.raises(ValueError, match="incomplete projector set"):
        measure(np.eye(2) / 2, (projector(basis_state(2, 0)),))


def test_outcome_tv_bounded_by_trace_distance():
    rng = spawn_rng(49)
    worst = np.inf
    for _ in range(500):
        d = int(rng.integers(2, 7))
        rho = random_density_matrix(d, rng)
        sigma = random_density_matrix(d, rng)
        projs = comp_basis_projectors(d)
        tv = total_variation(measure(rho, projs), measure(sigma, projs))
        worst = min(worst, trace_distance(rho, sigma) - tv)
    assert worst >= -1e-9


def test_transcript_json_and_csv_exports():
    n = 2
    rng = spawn_rng(50)
    oracle = OneTimeOracle(RewardVector((0.5, 0.5)))
    circ = Circuit(2 * n, (Unitary(random_unitary(2 * n, rng)), OracleCall()))
    t = run_exact(circ, oracle, np.eye(2 * n, dtype=complex) / (2 * n))
    rows = json.loads(t.to_json())
    assert [r["step"] for r in rows] == [0, 1, 2]
    assert rows[-1]["queries"] == 1
    assert set(rows[0]) == {"step", "purity", "fidelity", "queries"}

    psi0 = random_pure_state(2 * n, rng)
    samples = run_trajectories(circ, oracle, psi0, 3, seed=9)
    csv_text = trajectories_to_csv(samples)
    lines = csv_text.strip().split("\n")
    assert lines[0] == "seed,step,history_bits,outcome"
    assert len(lines) == 1 + 3  # one oracle call per trajectory


def test_trace_preservation_along_run():
    rng = spawn_rng(51)
    n = 3
    oracle = OneTimeOracle(RewardVector((0.2, 0.5, 0.8)))
    steps = []
    for _ in range(4):
        steps.append(Unitary(random_unitary(2 * n, rng)))
        steps.append(OracleCall())
    t = run_exact(Circuit(2 * n, tuple(steps)), oracle, projector(random_pure_state(2 * n, rng)), keep_states=True)
    for s in t.steps:
        assert abs(np.trace(s.state).real - 1.0) <= 1e-10
        assert 0.0 < s.purity <= 1.0 + 1e-12
