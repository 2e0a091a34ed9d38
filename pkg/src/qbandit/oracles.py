"""Bandit oracle models over the arm (x) internal-randomness (x) reward registers.

Register conventions, slow index first:

* plain oracles act on arm (dim N) tensor work (dim ``work_dim``); for the
  bit flip the reward qubit is the last (fastest) factor of the work space,
  so ``work_dim`` must be even; the phase flip allows ``work_dim == 1``;
* the full-superposition oracle acts on arm (N) tensor randomness (M)
  tensor reward (2).

Arms are indexed 0..N-1 in code.  Reward families keep the lower-bound
convention of a base vector ``(p_0, ..., p_N)`` whose member ``j >= 1``
replaces entry ``j`` with the elevated mean ``p_0``; the arm register for
those experiments carries the N physical arms only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import config
from .linalg import DimensionCapError

FLIP_KINDS = ("bit", "phase")


# ---------------------------------------------------------------------------
# reward data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RewardVector:
    """Mean rewards with an eta margin keeping them away from 0 and 1."""

    means: tuple[float, ...]
    eta: float = 0.0

    def __post_init__(self) -> None:
        means = tuple(float(p) for p in self.means)
        object.__setattr__(self, "means", means)
        if self.eta < 0.0:
            raise ValueError("eta must be nonnegative")
        if not all(0.0 <= p <= 1.0 for p in means):
            raise ValueError("means must lie in [0, 1]")
        if self.eta > 0.0 and not all(
            self.eta - 1e-12 <= p <= 1.0 - self.eta + 1e-12 for p in means
        ):
            raise ValueError("means must lie in [eta, 1 - eta]")

    @property
    def n_arms(self) -> int:
        return len(self.means)

    @property
    def best_arm(self) -> int:
        return int(np.argmax(self.means))

    @property
    def gaps(self) -> tuple[float, ...]:
        best = max(self.means)
        return tuple(best - p for p in self.means)

    def as_array(self) -> np.ndarray:
        return np.array(self.means, dtype=float)


@dataclass(frozen=True)
class RewardFamily:
    """Base vector ``(p_0, ..., p_N)`` and its N+1 single-entry variants.

    Requires ``p_0 > p_1 > p_2 >= ... >= p_N`` with equally spaced top gaps
    ``p_0 - p_1 == p_1 - p_2``; member ``j >= 1`` equals the base tail with
    entry ``j`` raised to ``p_0``, member 0 is the unmodified tail.
    """

    base: tuple[float, ...]
    eta: float

    def __post_init__(self) -> None:
        base = tuple(float(p) for p in self.base)
        object.__setattr__(self, "base", base)
        if len(base) < 3:
            raise ValueError("family needs at least two physical arms")
        p = base
        if not (p[0] > p[1] > p[2]):
            raise ValueError("family requires p0 > p1 > p2")
        if any(p[i] < p[i + 1] for i in range(2, len(p) - 1)):
            raise ValueError("family tail must be nonincreasing")
        if abs((p[0] - p[1]) - (p[1] - p[2])) > 1e-12:
            raise ValueError("family requires p0 - p1 == p1 - p2")
        if self.eta > 0.0 and not all(
            self.eta - 1e-12 <= q <= 1.0 - self.eta + 1e-12 for q in p
        ):
            raise ValueError("family means must lie in [eta, 1 - eta]")

    @property
    def n_arms(self) -> int:
        return len(self.base) - 1

    def gap(self, j: int) -> float:
        """Delta_j = p_0 - p_j for 1 <= j <= N."""
        return self.base[0] - self.base[j]

    def member(self, j: int) -> RewardVector:
        """Member ``j`` as a reward vector over the N physical arms."""
        if not 0 <= j <= self.n_arms:
            raise ValueError("family member out of range")
        means = list(self.base[1:])
        if j >= 1:
            means[j - 1] = self.base[0]
        return RewardVector(tuple(means), self.eta)

    def members(self) -> list[RewardVector]:
        return [self.member(j) for j in range(self.n_arms + 1)]


@dataclass(frozen=True)
class RewardTable:
    """Deterministic reward bits ``r_i(omega)``, one row per arm.

    Row means are exact rationals: building a table from mean rewards
    requires every ``p_i * M`` to be an integer.
    """

    bits: np.ndarray  # shape (n_arms, n_omega), dtype uint8
    eta: float = 0.0

    def __post_init__(self) -> None:
        bits = np.asarray(self.bits, dtype=np.uint8)
        if bits.ndim != 2:
            raise ValueError("table must be two-dimensional")
        if not np.all((bits == 0) | (bits == 1)):
            raise ValueError("table entries must be bits")
        object.__setattr__(self, "bits", bits)

    @property
    def n_arms(self) -> int:
        return self.bits.shape[0]

    @property
    def n_omega(self) -> int:
        return self.bits.shape[1]

    @property
    def means(self) -> np.ndarray:
        return self.bits.mean(axis=1)

    @staticmethod
    def from_means(
        means: tuple[float, ...] | np.ndarray,
        n_omega: int,
        rng: np.random.Generator | None = None,
        eta: float = 0.0,
    ) -> "RewardTable":
        means = np.asarray(means, dtype=float)
        counts = means * n_omega
        rounded = np.rint(counts)
        if np.max(np.abs(counts - rounded)) > 1e-9:
            raise ValueError("table size incompatible with means")
        bits = np.zeros((len(means), n_omega), dtype=np.uint8)
        for i, c in enumerate(rounded.astype(int)):
            bits[i, :c] = 1
            if rng is not None:
                rng.shuffle(bits[i])
        return RewardTable(bits, eta=eta)


# ---------------------------------------------------------------------------
# oracle unitaries
# ---------------------------------------------------------------------------


def _check_flip(flip: str) -> None:
    if flip not in FLIP_KINDS:
        raise ValueError(f"unknown flip kind {flip!r}")


def _check_dim(dim: int) -> None:
    if dim > config.DIM_CAP:
        raise DimensionCapError("dimension cap exceeded")


def default_work_dim(flip: str) -> int:
    return 2 if flip == "bit" else 1


def arm_projector(i: int, n_arms: int, work_dim: int = 2) -> np.ndarray:
    """P_i = |i><i| tensor Id on the work space."""
    if not 0 <= i < n_arms:
        raise ValueError("arm out of range")
    dim = n_arms * work_dim
    _check_dim(dim)
    p = np.zeros((dim, dim), dtype=np.complex128)
    lo = i * work_dim
    p[lo : lo + work_dim, lo : lo + work_dim] = np.eye(work_dim)
    return p


def make_arm_oracle(
    i: int, n_arms: int, flip: str = "bit", work_dim: int | None = None
) -> np.ndarray:
    """Self-adjoint unitary acting on arm ``i``'s block only.

    ``bit``: flips the reward qubit (last work factor) inside block ``i``;
    ``phase``: multiplies block ``i`` by -1.  Identity on every other block.
    """
    _check_flip(flip)
    if work_dim is None:
        work_dim = default_work_dim(flip)
    if not 0 <= i < n_arms:
        raise ValueError("arm out of range")
    dim = n_arms * work_dim
    _check_dim(dim)
    if flip == "phase":
        block = -np.eye(work_dim, dtype=np.complex128)
    else:
        if work_dim % 2 != 0:
            raise ValueError("bit flip needs an even work dimension (reward qubit last)")
        x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
        block = np.kron(np.eye(work_dim // 2, dtype=np.complex128), x)
    o = np.eye(dim, dtype=np.complex128)
    lo = i * work_dim
    o[lo : lo + work_dim, lo : lo + work_dim] = block
    return o


def make_ox(x: np.ndarray | list[int], work_dim: int = 2) -> np.ndarray:
    """Unitary writing the sampled reward bits: |i>|c> -> |i>|c + x_i mod 2>."""
    x = np.asarray(x, dtype=np.uint8)
    n_arms = len(x)
    dim = n_arms * work_dim
    _check_dim(dim)
    o = np.eye(dim, dtype=np.complex128)
    for i in np.flatnonzero(x):
        o = make_arm_oracle(int(i), n_arms, "bit", work_dim) @ o
    return o


def make_erm_oracle(table: RewardTable) -> np.ndarray:
    """Permutation unitary |i, omega, c> -> |i, omega, c + r_i(omega) mod 2>."""
    n, m = table.n_arms, table.n_omega
    dim = n * m * 2
    _check_dim(dim)
    o = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(n):
        for w in range(m):
            base = (i * m + w) * 2
            r = int(table.bits[i, w])
            o[base + r, base] = 1.0
            o[base + (1 - r) % 2, base + 1] = 1.0
    return o


def make_self_indicating_oracle(i: int, n_arms: int) -> np.ndarray:
    """Failure-flagging oracle on arm tensor flag-qubit space.

    Maps |i>|0> -> -|i>|1> and |j>|0> -> |j>|1> for j != i; the involutive
    completion acts likewise on the flag-1 states, so the matrix is
    self-adjoint and squares to the identity.
    """
    if not 0 <= i < n_arms:
        raise ValueError("arm out of range")
    dim = 2 * n_arms
    _check_dim(dim)
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    signs = np.ones(n_arms)
    signs[i] = -1.0
    return np.kron(np.diag(signs).astype(np.complex128), x)


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KrausChannel:
    """Channel rho -> sum_k A_k rho A_k^dagger."""

    ops: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        dim = self.ops[0].shape[0]
        acc = np.zeros((dim, dim), dtype=np.complex128)
        for a in self.ops:
            acc += a.conj().T @ a
        if np.max(np.abs(acc - np.eye(dim))) > 1e-10:
            raise ValueError("Kraus set is not trace preserving")

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho, dtype=np.complex128)
        for a in self.ops:
            out += a @ rho @ a.conj().T
        return out


@dataclass(frozen=True)
class SequentialChannel:
    """Composition of channels, applied left factor last."""

    parts: tuple[KrausChannel, ...]

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = rho
        for part in reversed(self.parts):
            out = part.apply(out)
        return out


def make_channel_f(
    i: int, p: float, n_arms: int, flip: str = "bit", work_dim: int | None = None
) -> KrausChannel:
    """One noisy lever pull: applies arm ``i``'s flip with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("probability outside [0, 1]")
    if work_dim is None:
        work_dim = default_work_dim(flip)
    o = make_arm_oracle(i, n_arms, flip, work_dim)
    dim = o.shape[0]
    return KrausChannel(
        (np.sqrt(1.0 - p) * np.eye(dim, dtype=np.complex128), np.sqrt(p) * o)
    )


def make_channel_e(
    p: RewardVector | np.ndarray | tuple[float, ...],
    flip: str = "bit",
    work_dim: int | None = None,
) -> SequentialChannel:
    """Single-use oracle channel: the composition F_1 o ... o F_N."""
    means = p.means if isinstance(p, RewardVector) else tuple(float(v) for v in p)
    n_arms = len(means)
    parts = tuple(
        make_channel_f(i, means[i], n_arms, flip, work_dim) for i in range(n_arms)
    )
    return SequentialChannel(parts)


def channel_e_mixture(
    p: RewardVector | np.ndarray | tuple[float, ...],
    flip: str = "bit",
    work_dim: int | None = None,
) -> list[tuple[float, np.ndarray]]:
    """Explicit 2^N-term mixture (weight, O_X) realizing the one-time channel."""
    means = p.means if isinstance(p, RewardVector) else tuple(float(v) for v in p)
    n_arms = len(means)
    if n_arms > 12:
        raise ValueError("use sequential composition")
    if work_dim is None:
        work_dim = default_work_dim(flip)
    terms = []
    for code in range(2**n_arms):
        x = np.array([(code >> i) & 1 for i in range(n_arms)], dtype=np.uint8)
        weight = float(
            np.prod([means[i] if x[i] else 1.0 - means[i] for i in range(n_arms)])
        )
        if flip == "bit":
            ox = make_ox(x, work_dim)
        else:
            ox = np.eye(n_arms * work_dim, dtype=np.complex128)
            for i in np.flatnonzero(x):
                ox = make_arm_oracle(int(i), n_arms, "phase", work_dim) @ ox
        terms.append((weight, ox))
    return terms


# ---------------------------------------------------------------------------
# oracle models used by the simulator and the algorithms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OneTimeOracle:
    """Oracle channel with fresh internal randomness at every invocation."""

    rewards: RewardVector
    flip: str = "bit"
    work_dim: int | None = None
    channel: SequentialChannel = field(init=False, repr=False)

    def __post_init__(self) -> None:
        _check_flip(self.flip)
        wd = default_work_dim(self.flip) if self.work_dim is None else self.work_dim
        object.__setattr__(self, "work_dim", wd)
        object.__setattr__(
            self, "channel", make_channel_e(self.rewards, self.flip, wd)
        )

    @property
    def dim(self) -> int:
        return self.rewards.n_arms * self.work_dim

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return self.channel.apply(rho)

    def sample_x(self, rng: np.random.Generator) -> np.ndarray:
        return (rng.random(self.rewards.n_arms) < self.rewards.as_array()).astype(np.uint8)

    def unitary_for(self, x: np.ndarray) -> np.ndarray:
        if self.flip == "bit":
            return make_ox(x, self.work_dim)
        out = np.eye(self.dim, dtype=np.complex128)
        for i in np.flatnonzero(np.asarray(x)):
            out = make_arm_oracle(int(i), self.rewards.n_arms, "phase", self.work_dim) @ out
        return out


class ReusableOracle:
    """Sequence of sampled reward unitaries O_{X_t}, re-invocable by index.

    Rows are sampled lazily from Ber(p_i) per arm and cached, so invoking
    the same index twice (to uncompute) sees the same bits.  Every
    invocation, fresh or repeated, counts one query.
    """

    def __init__(
        self,
        rewards: RewardVector,
        rng: np.random.Generator,
        flip: str = "bit",
        work_dim: int | None = None,
    ) -> None:
        _check_flip(flip)
        self.rewards = rewards
        self.flip = flip
        self.work_dim = default_work_dim(flip) if work_dim is None else work_dim
        self._rng = rng
        self._rows: list[np.ndarray] = []
        self.queries = 0

    @property
    def dim(self) -> int:
        return self.rewards.n_arms * self.work_dim

    @property
    def n_rows(self) -> int:
        return len(self._rows)

    def row(self, t: int) -> np.ndarray:
        """Reward bits of round ``t``, sampling forward as needed."""
        p = self.rewards.as_array()
        while len(self._rows) <= t:
            self._rows.append((self._rng.random(len(p)) < p).astype(np.uint8))
        return self._rows[t]

    def draw_rows(self, k: int) -> np.ndarray:
        """The next ``k`` fresh rows as a (k, n_arms) bit array."""
        start = len(self._rows)
        return np.stack([self.row(start + j) for j in range(k)])

    def invoke(self, t: int) -> np.ndarray:
        """Unitary for round ``t``; counts one query."""
        bits = self.row(t)
        self.queries += 1
        if self.flip == "bit":
            return make_ox(bits, self.work_dim)
        out = np.eye(self.dim, dtype=np.complex128)
        for i in np.flatnonzero(bits):
            out = make_arm_oracle(int(i), self.rewards.n_arms, "phase", self.work_dim) @ out
        return out

    def count(self, n: int = 1) -> None:
        """Account for ``n`` invocations performed without materializing matrices."""
        self.queries += int(n)


@dataclass(frozen=True)
class ErmOracle:
    """Fixed reward-table unitary over arm tensor randomness tensor reward."""

    table: RewardTable

    @property
    def dim(self) -> int:
        return self.table.n_arms * self.table.n_omega * 2

    def unitary(self) -> np.ndarray:
        return make_erm_oracle(self.table)


# ---------------------------------------------------------------------------
# coupled reward tables
# ---------------------------------------------------------------------------


def sample_coupled_tables(
    family: RewardFamily, i: int, n_omega: int, rng: np.random.Generator
) -> tuple[RewardTable, RewardTable]:
    """Jointly sampled tables for members 0 and ``i`` with matched randomness.

    Per arm, i.i.d. uniforms are ranked and a bit is 1 when its rank falls
    inside the arm's quantile, so both tables share every column except
    arm ``i``'s, where the member-``i`` quantile strictly contains the
    member-0 one.  Guarantees ``r0 <= ri`` entrywise, exact row means, and
    the conditional laws Delta_i/(1-p_i) and Delta_i/p_0.
    """
    if not 1 <= i <= family.n_arms:
        raise ValueError("arm out of range")
    p0_vec = family.member(0).as_array()
    pi_vec = family.member(i).as_array()
    counts0 = p0_vec * n_omega
    counts_i = pi_vec * n_omega
    if (
        np.max(np.abs(counts0 - np.rint(counts0))) > 1e-9
        or np.max(np.abs(counts_i - np.rint(counts_i))) > 1e-9
    ):
        raise ValueError("table size incompatible with means")
    n = family.n_arms
    u = rng.random((n, n_omega))
    ranks = np.argsort(np.argsort(u, axis=1), axis=1)  # 0 = smallest
    bits0 = (ranks < np.rint(counts0).astype(int)[:, None]).astype(np.uint8)
    bits_i = (ranks < np.rint(counts_i).astype(int)[:, None]).astype(np.uint8)
    return (
        RewardTable(bits0, eta=family.eta),
        RewardTable(bits_i, eta=family.eta),
    )


def table_diff_projector(r0: RewardTable, ri: RewardTable) -> np.ndarray:
    """Diagonal projector onto basis states where the two tables disagree."""
    if r0.bits.shape != ri.bits.shape:
        raise ValueError("dim mismatch")
    disagree = (r0.bits != ri.bits).astype(float)
    diag = np.repeat(disagree.reshape(-1), 2)
    return np.diag(diag).astype(np.complex128)


def table_diff_oracle(r0: RewardTable, ri: RewardTable) -> np.ndarray:
    """O^{ri - r0}: writes the bit difference of the two tables."""
    diff = (ri.bits.astype(np.int8) - r0.bits.astype(np.int8)) % 2
    return make_erm_oracle(RewardTable(diff.astype(np.uint8)))


# ---------------------------------------------------------------------------
# plain-text serialization
# ---------------------------------------------------------------------------


def reward_vector_to_kv(v: RewardVector) -> str:
    lines = [
        f"n_arms={v.n_arms}",
        "means=" + ",".join(format(p, ".17g") for p in v.means),
        f"eta={format(v.eta, '.17g')}",
    ]
    return "\n".join(lines) + "\n"


def reward_table_to_kv(t: RewardTable, eta: float | None = None) -> str:
    eta = t.eta if eta is None else eta
    rows = ",".join("".join(str(int(b)) for b in row) for row in t.bits)
    lines = [
        f"n_arms={t.n_arms}",
        "means=" + ",".join(format(p, ".17g") for p in t.means),
        f"eta={format(eta, '.17g')}",
        f"table={rows}",
    ]
    return "\n".join(lines) + "\n"


def _parse_kv(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad key=value line: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def reward_vector_from_kv(text: str) -> RewardVector:
    kv = _parse_kv(text)
    means = tuple(float(x) for x in kv["means"].split(","))
    if int(kv["n_arms"]) != len(means):
        raise ValueError("n_arms does not match means")
    return RewardVector(means, float(kv.get("eta", "0")))


def reward_table_from_kv(text: str) -> RewardTable:
    kv = _parse_kv(text)
    rows = kv["table"].split(",")
    bits = np.array([[int(c) for c in row] for row in rows], dtype=np.uint8)
    if int(kv["n_arms"]) != bits.shape[0]:
        raise ValueError("n_arms does not match table")
    return RewardTable(bits, eta=float(kv.get("eta", "0")))
