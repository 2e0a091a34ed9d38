import numpy as np
import pytest

from qbandit.linalg import basis_state, dagger
from qbandit.oracles import (
    OneTimeOracle,
    ReusableOracle,
    RewardFamily,
    RewardTable,
    RewardVector,
    arm_projector,
    channel_e_mixture,
    make_arm_oracle,
    make_channel_e,
    make_channel_f,
    make_erm_oracle,
    make_ox,
    make_self_indicating_oracle,
    reward_table_from_kv,
    reward_table_to_kv,
    reward_vector_from_kv,
    reward_vector_to_kv,
    sample_coupled_tables,
    table_diff_oracle,
    table_diff_projector,
)
from qbandit.rand import random_density_matrix, spawn_rng


def ket(n_arms, arm, c, work_dim=2):
    return basis_state(n_arms * work_dim, arm * work_dim + c)


def test_bit_flip_defining_action():
    o1 = make_arm_oracle(1, 3, "bit")
    assert np.allclose(o1 @ ket(3, 1, 0), ket(3, 1, 1))
    assert np.allclose(o1 @ ket(3, 2, 0), ket(3, 2, 0))


def test_phase_flip_defining_action():
    oi = make_arm_oracle(0, 2, "phase", work_dim=2)
    assert np.allclose(oi @ ket(2, 0, 1), -ket(2, 0, 1))
    assert np.allclose(oi @ ket(2, 1, 1), ket(2, 1, 1))


def test_arm_oracles_are_involutions():
    for flip in ("bit", "phase"):
        for i in range(3):
            o = make_arm_oracle(i, 3, flip)
            d = o.shape[0]
            assert np.max(np.abs(o @ o - np.eye(d))) <= 1e-12
            assert np.max(np.abs(o - dagger(o))) <= 1e-12


def test_arm_oracle_out_of_range():
    with pytest.raises(ValueError, match="arm out of range"):
        make_arm_oracle(3, 3, "bit")


def test_make_ox_zero_is_identity():
    assert np.allclose(make_ox([0, 0, 0]), np.eye(6))


def test_make_ox_defining_action():
    ox = make_ox([0, 0, 1, 0])
    assert np.allclose(ox @ ket(4, 2, 0), ket(4, 2, 1))
    assert np.allclose(ox @ ket(4, 1, 0), ket(4, 1, 0))


def test_make_ox_equals_product_of_arm_oracles():
    rng = spawn_rng(21)
    for _ in range(5):
        x = (rng.random(4) < 0.5).astype(np.uint8)
        prod = np.eye(8, dtype=complex)
        for i in np.flatnonzero(x):
            prod = make_arm_oracle(int(i), 4, "bit") @ prod
        assert np.max(np.abs(make_ox(x) - prod)) <= 1e-12


def test_erm_oracle_all_zero_table():
    table = RewardTable(np.zeros((2, 3), dtype=np.uint8))
    assert np.allclose(make_erm_oracle(table), np.eye(12))


def test_erm_oracle_branch_norms():
    # N=2, M=4, means (1/2, 1/4); uniform-omega query on each arm
    table = RewardTable.from_means((0.5, 0.25), 4)
    o = make_erm_oracle(table)
    for arm, want in ((0, 0.5), (1, 0.25)):
        psi = np.zeros(16, dtype=complex)
        for w in range(4):
            psi[(arm * 4 + w) * 2] = 0.5
        out = o @ psi
        reward_one = out[1::2]
        assert np.vdot(reward_one, reward_one).real == pytest.approx(want, abs=1e-12)
    assert np.max(np.abs(o @ o - np.eye(16))) <= 1e-12


def test_erm_oracle_requires_exact_means():
    with pytest.raises(ValueError, match="table size incompatible"):
        RewardTable.from_means((0.3,), 4)


def test_channel_f_edges():
    rng = spawn_rng(22)
    rho = random_density_matrix(6, rng)
    ident = make_channel_f(0, 0.0, 3, "bit")
    assert np.max(np.abs(ident.apply(rho) - rho)) <= 1e-12
    flip = make_channel_f(0, 1.0, 3, "bit")
    o = make_arm_oracle(0, 3, "bit")
    assert np.max(np.abs(flip.apply(rho) - o @ rho @ dagger(o))) <= 1e-12
    with pytest.raises(ValueError, match="probability outside"):
        make_channel_f(0, 1.5, 3)


def test_channel_f_commutation():
    rng = spawn_rng(23)
    rho = random_density_matrix(8, rng)
    fa = make_channel_f(1, 0.3, 4, "bit")
    fb = make_channel_f(2, 0.7, 4, "bit")
    ab = fa.apply(fb.apply(rho))
    ba = fb.apply(fa.apply(rho))
    assert np.max(np.abs(ab - ba)) <= 1e-12


def test_channel_e_identity_when_all_zero():
    rng = spawn_rng(24)
    rho = random_density_matrix(6, rng)
    chan = make_channel_e((0.0, 0.0, 0.0))
    assert np.max(np.abs(chan.apply(rho) - rho)) <= 1e-12


def test_channel_e_matches_explicit_mixture():
    rng = spawn_rng(25)
    p = tuple(rng.random(3))
    rho = random_density_matrix(6, rng)
    seq = make_channel_e(p).apply(rho)
    mix = np.zeros_like(rho)
    terms = channel_e_mixture(p)
    weights = [w for w, _ in terms]
    assert sum(weights) == pytest.approx(1.0, abs=1e-12)
    for w, ox in terms:
        mix += w * ox @ rho @ dagger(ox)
    assert np.max(np.abs(seq - mix)) <= 1e-11


def test_channel_e_mixture_cap():
    with pytest.raises(ValueError, match="use sequential composition"):
        channel_e_mixture(tuple(0.5 for _ in range(13)))


def test_self_indicating_oracle():
    o = make_self_indicating_oracle(1, 4)
    assert np.allclose(o @ ket(4, 1, 0), -ket(4, 1, 1))
    assert np.allclose(o @ ket(4, 2, 0), ket(4, 2, 1))
    assert np.max(np.abs(o @ o - np.eye(8))) <= 1e-12
    assert np.max(np.abs(o - dagger(o))) <= 1e-12


def test_self_indicating_matches_grover_oracle_step():
    # acting on uniform |s>|0> and projecting flag=1 reproduces the phase
    # oracle applied to |s>, i.e. the first Grover step
    n = 4
    o = make_self_indicating_oracle(2, n)
    s = np.repeat(1 / np.sqrt(n), n)
    psi = np.kron(s, np.array([1.0, 0.0]))
    out = (o @ psi)[1::2]
    phase_oracle = np.eye(n)
    phase_oracle[2, 2] = -1
    assert np.max(np.abs(out - phase_oracle @ s)) <= 1e-12


def test_reward_vector_validation():
    v = RewardVector((0.6, 0.4), eta=0.3)
    assert v.gaps == (0.0, pytest.approx(0.2))
    with pytest.raises(ValueError, match="eta"):
        RewardVector((0.1, 0.5), eta=0.2)


def test_reward_family_members():
    fam = RewardFamily((0.6, 0.55, 0.5, 0.45), eta=0.3)
    assert fam.n_arms == 3
    assert fam.member(0).means == (0.55, 0.5, 0.45)
    assert fam.member(2).means == (0.55, 0.6, 0.45)
    assert fam.gap(2) == pytest.approx(0.1)
    with pytest.raises(ValueError, match="p0 - p1 == p1 - p2"):
        RewardFamily((0.6, 0.5, 0.45), eta=0.2)


def test_oracle_unitarity_sweep():
    rng = spawn_rng(26)
    table = RewardTable.from_means((0.5, 0.25, 0.75), 4, rng=rng)
    mats = [
        make_arm_oracle(1, 3, "bit"),
        make_arm_oracle(2, 3, "phase"),
        make_ox([1, 0, 1]),
        make_erm_oracle(table),
        make_self_indicating_oracle(0, 3),
    ]
    for u in mats:
        d = u.shape[0]
        assert np.linalg.norm(u @ dagger(u) - np.eye(d)) <= 1e-11


def test_coupled_tables_zero_gap_branch():
    # family gap applies only to arm i; other columns always match
    fam = RewardFamily((0.75, 0.5, 0.25, 0.25), eta=0.25)
    r0, ri = sample_coupled_tables(fam, 2, 4, spawn_rng(31))
    assert np.array_equal(r0.bits[0], ri.bits[0])
    assert np.array_equal(r0.bits[2], ri.bits[2])


def test_coupled_tables_exhaustive_counts():
    fam = RewardFamily((0.75, 0.5, 0.25, 0.25), eta=0.25)
    for seed in range(40):
        r0, ri = sample_coupled_tables(fam, 1, 4, spawn_rng(32, seed))
        assert r0.bits[0].sum() == 2  # p_i = 0.5, M = 4
        assert ri.bits[0].sum() == 3  # p_0 = 0.75
        assert np.all(r0.bits <= ri.bits)
        assert np.max(np.abs(r0.means - np.array([0.5, 0.25, 0.25]))) == 0
        assert np.max(np.abs(ri.means - np.array([0.75, 0.25, 0.25]))) == 0


def test_coupled_tables_conditional_law():
    fam = RewardFamily((0.6, 0.5, 0.4, 0.3), eta=0.3)
    i, m, n_samples = 1, 10, 4000
    rng = spawn_rng(33)
    hits = trials = 0
    for _ in range(n_samples):
        r0, ri = sample_coupled_tables(fam, i, m, rng)
        zero_mask = r0.bits[i - 1] == 0
        trials += zero_mask.sum()
        hits += (ri.bits[i - 1][zero_mask] == 1).sum()
    # P(ri=1 | r0=0) = Delta_i / (1 - p_i) = 0.1 / 0.5
    want = fam.gap(i) / (1.0 - fam.member(0).means[i - 1])
    freq = hits / trials
    sigma = np.sqrt(want * (1 - want) / trials)
    assert abs(freq - want) <= 4 * sigma


def test_coupled_tables_integrality_error():
    fam = RewardFamily((0.6, 0.55, 0.5, 0.45), eta=0.3)
    with pytest.raises(ValueError, match="table size incompatible"):
        sample_coupled_tables(fam, 1, 7, spawn_rng(34))


def test_projector_identity_on_coupled_tables():
    fam = RewardFamily((0.75, 0.5, 0.25, 0.25), eta=0.25)
    for seed in range(5):
        r0, ri = sample_coupled_tables(fam, 1, 4, spawn_rng(35, seed))
        p = table_diff_projector(r0, ri)
        o = table_diff_oracle(r0, ri)
        ident = np.eye(p.shape[0])
        assert np.max(np.abs((ident - p) @ o - (ident - p))) <= 1e-12


def test_reusable_oracle_rows_are_stable():
    oracle = ReusableOracle(RewardVector((0.5, 0.5)), spawn_rng(36))
    row0 = oracle.row(0).copy()
    oracle.invoke(0)
    oracle.invoke(0)
    assert np.array_equal(oracle.row(0), row0)
    assert oracle.queries == 2


def test_one_time_oracle_sampling_matches_channel():
    rewards = RewardVector((0.8, 0.2))
    oracle = OneTimeOracle(rewards)
    rng = spawn_rng(37)
    rho = random_density_matrix(4, rng)
    acc = np.zeros_like(rho)
    n = 4000
    for _ in range(n):
        x = oracle.sample_x(rng)
        u = oracle.unitary_for(x)
        acc += u @ rho @ dagger(u)
    assert np.max(np.abs(acc / n - oracle.apply(rho))) <= 0.05


def test_serialization_roundtrip():
    v = RewardVector((0.6, 0.5, 0.4), eta=0.25)
    assert reward_vector_from_kv(reward_vector_to_kv(v)) == v
    t = RewardTable.from_means((0.5, 0.25), 4, eta=0.1)
    back = reward_table_from_kv(reward_table_to_kv(t))
    assert np.array_equal(back.bits, t.bits)
    assert back.eta == t.eta
