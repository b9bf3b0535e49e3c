"""Black-box devices and the two randomness-generation protocols.

Protocol P: a preparation device emits one of four qubit states keyed by
(x0, x1); a measurement device with setting y in {0, 1, 2} returns a bit.
Rounds are binned into Check (y < 2, drives the self-test statistic), Rand
(x in {01, 10}, y = 2, the output bits) and False (x in {00, 11}, y = 2,
deterministic outcomes).

Protocol Q: the preparation is keyed by (x0, x1) and the measurement setting
is x2; even-weight rounds form the Check bin and must win the game's
even-weight condition, odd-weight rounds form the Rand bin, a gamma-fraction
of which is spent testing Pr[b = x1] = 1/2 before the rest is released.

Devices are stateless across rounds apart from an explicit shared-randomness
coin; everything a run does is a pure function of (config, devices), so two
runs with the same seed are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import analysis, qcore
from .errors import DeviceArityMismatch, InsufficientRounds, UnknownKind
from .games import ClassicalStrategy, GameId
from .qcore import Gate1Q, PureState, QubitBasis

A_STAR = 0.5 * (1.0 + 1.0 / math.sqrt(2.0))

_SETTINGS = {"P": 3, "Q": 2}
_PREP_STATES_P = {
    (0, 0): qcore.KET_PLUS,
    (0, 1): qcore.KET_ZERO,
    (1, 0): qcore.KET_ONE,
    (1, 1): qcore.KET_MINUS,
}
_PREP_STATES_Q = {
    (0, 0): qcore.KET_PLUS,
    (0, 1): qcore.KET_PLUS_I,
    (1, 0): qcore.KET_MINUS_I,
    (1, 1): qcore.KET_MINUS,
}


@dataclass(frozen=True)
class PrepDevice:
    """Preparation black box: (x0, x1, coin) -> carrier.

    The carrier is a PureState for quantum devices or a one-bit classical
    message for classical ones.  Stateless across rounds; any correlation
    with the paired measurement device flows through the coin.
    """

    name: str
    behavior: Callable[[int, int, int], PureState | int]

    def emit(self, x0: int, x1: int, coin: int = 0) -> PureState | int:
        return self.behavior(x0, x1, coin)


@dataclass(frozen=True)
class MeasDevice:
    """Measurement black box: (setting, carrier, coin) -> Pr[b = 1].

    The behavior returns the output-bit probability so that exact
    deterministic responses stay exact; a concrete bit is drawn from it with
    one uniform as ``b = 0 iff u < Pr[b = 0]``.
    """

    name: str
    behavior: Callable[[int, PureState | int, int], float]

    def output_probability(self, setting: int, carrier, coin: int = 0) -> float:
        return self.behavior(setting, carrier, coin)

    def output(self, setting: int, carrier, coin: int, randomness: float) -> int:
        p1 = self.output_probability(setting, carrier, coin)
        return 0 if randomness < 1.0 - p1 else 1


@dataclass(frozen=True)
class DevicePair:
    """A preparation/measurement pair plus its shared-randomness contract."""

    prep: PrepDevice
    meas: MeasDevice
    protocol: str | None = None     # "P", "Q", or None when either fits
    uses_coin: bool = False
    coin_per_round: bool = True
    caveat: str | None = None

    def response_table(self, protocol: str) -> np.ndarray:
        """Pr[b = 1] indexed as [coin, x, setting] with x = 2*x0 + x1."""
        if self.protocol is not None and self.protocol != protocol:
            raise DeviceArityMismatch(
                f"device pair is built for protocol {self.protocol}, not {protocol}"
            )
        n_settings = _SETTINGS[protocol]
        n_coins = 2 if self.uses_coin else 1
        table = np.zeros((n_coins, 4, n_settings))
        for coin in range(n_coins):
            for x in range(4):
                carrier = self.prep.emit(x >> 1, x & 1, coin)
                for setting in range(n_settings):
                    table[coin, x, setting] = self.meas.output_probability(setting, carrier, coin)
        if np.any(table < -1e-12) or np.any(table > 1 + 1e-12):
            raise DeviceArityMismatch("device emitted probabilities outside [0, 1]")
        return np.clip(table, 0.0, 1.0)


def _quantum_meas_probability(state: PureState, gates: tuple[Gate1Q, ...], basis: QubitBasis) -> float:
    for gate in gates:
        state = qcore.apply_gate(state, gate, 0)
    return qcore.outcome_distribution(state, basis, 0)[1]


def honest_devices(protocol: str) -> DevicePair:
    """The paper-faithful quantum devices for protocol P or Q."""
    if protocol == "P":
        bases = {0: qcore.PSI, 1: qcore.PHI, 2: qcore.HADAMARD}

        def respond(setting: int, carrier, coin: int) -> float:
            # b = 0 on |psi>, |phi>, |+>; b = 1 on their complements
            return _quantum_meas_probability(carrier, (), bases[setting])

        return DevicePair(
            prep=PrepDevice("honest-P-prep", lambda x0, x1, coin: _PREP_STATES_P[(x0, x1)]),
            meas=MeasDevice("honest-P-meas", respond),
            protocol="P",
        )
    if protocol == "Q":
        gates = {0: (qcore.H,), 1: (qcore.S, qcore.H)}

        def respond(setting: int, carrier, coin: int) -> float:
            return _quantum_meas_probability(carrier, gates[setting], qcore.COMPUTATIONAL)

        return DevicePair(
            prep=PrepDevice("honest-Q-prep", lambda x0, x1, coin: _PREP_STATES_Q[(x0, x1)]),
            meas=MeasDevice("honest-Q-meas", respond),
            protocol="Q",
        )
    raise DeviceArityMismatch(f"unknown protocol {protocol!r}")


ADVERSARY_KINDS = (
    "always_zero",
    "x1_forwarder",
    "perfect_even_family_A",
    "perfect_even_family_B",
    "mixed_perfect_even",
    "input_guesser",
)

_MIXED_CAVEAT = (
    "mixed_perfect_even passes both statistical conditions while every output "
    "bit is a deterministic function of the shared coin and the public inputs; "
    "the run records the scores without adjudicating the certification claim."
)


def adversarial_devices(kind: str, coin_per_round: bool = True) -> DevicePair:
    """Classical device pairs implementing the named cheat.

    ``mixed_perfect_even`` flips a shared coin between the two perfect-even
    deterministic families; by default the coin is resampled every round
    (preserving i.i.d. behavior), ``coin_per_round=False`` draws it once per
    run.
    """
    if kind == "always_zero":
        return DevicePair(
            prep=PrepDevice("always-zero-prep", lambda x0, x1, coin: 0),
            meas=MeasDevice("always-zero-meas", lambda setting, m, coin: 0.0),
        )
    if kind == "x1_forwarder":
        return DevicePair(
            prep=PrepDevice("x1-forwarder-prep", lambda x0, x1, coin: x1),
            meas=MeasDevice("x1-forwarder-meas", lambda setting, m, coin: float(m)),
        )
    if kind == "perfect_even_family_A":
        # message m = x1, b = m: wins every even-weight round, b == x1 on odd
        return DevicePair(
            prep=PrepDevice("perfect-even-A-prep", lambda x0, x1, coin: x1),
            meas=MeasDevice("perfect-even-A-meas", lambda setting, m, coin: float(m)),
            protocol="Q",
        )
    if kind == "perfect_even_family_B":
        # message m = x0, b = m ^ x2: wins every even-weight round, b != x1 on odd
        return DevicePair(
            prep=PrepDevice("perfect-even-B-prep", lambda x0, x1, coin: x0),
            meas=MeasDevice("perfect-even-B-meas", lambda setting, m, coin: float(m ^ setting)),
            protocol="Q",
        )
    if kind == "mixed_perfect_even":
        def emit(x0: int, x1: int, coin: int):
            return x1 if coin == 0 else x0

        def respond(setting: int, m: int, coin: int) -> float:
            return float(m) if coin == 0 else float(m ^ setting)

        return DevicePair(
            prep=PrepDevice("mixed-perfect-even-prep", emit),
            meas=MeasDevice("mixed-perfect-even-meas", respond),
            protocol="Q",
            uses_coin=True,
            coin_per_round=coin_per_round,
            caveat=_MIXED_CAVEAT,
        )
    if kind == "input_guesser":
        # no information crosses the channel; the guess is the shared coin
        return DevicePair(
            prep=PrepDevice("input-guesser-prep", lambda x0, x1, coin: 0),
            meas=MeasDevice("input-guesser-meas", lambda setting, m, coin: float(coin)),
            uses_coin=True,
        )
    raise UnknownKind(f"unknown adversarial device kind {kind!r}")


def classical_pair_from_strategy(strategy: ClassicalStrategy, protocol: str) -> DevicePair:
    """Wrap a deterministic prepare-and-measure strategy as protocol devices.

    For protocol P the measurement table only covers y in {0, 1}; the y = 2
    setting forwards the one-bit message, which cannot influence the
    self-test statistic that decides the verdict.
    """
    if not strategy.tables:
        raise DeviceArityMismatch("only deterministic strategies can back a device pair")
    expected_game = GameId.TAVAKOLI if protocol == "P" else GameId.GAME_G2
    if strategy.game is not expected_game:
        raise DeviceArityMismatch(
            f"protocol {protocol} devices need a {expected_game.value} strategy"
        )
    prep_table, meas_table = strategy.tables

    def emit(x0: int, x1: int, coin: int) -> int:
        return prep_table[2 * x0 + x1]

    def respond(setting: int, m: int, coin: int) -> float:
        if protocol == "P" and setting == 2:
            return float(m)
        return float(meas_table[2 * m + setting])

    return DevicePair(
        prep=PrepDevice("table-prep", emit),
        meas=MeasDevice("table-meas", respond),
        protocol=protocol,
    )


# ---------------------------------------------------------------------------
# round storage
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RoundRecord:
    """One executed round: its position in the run, inputs, and output bit."""

    round_index: int
    inputs: tuple[int, ...]
    output: int


class RoundBatch(Sequence):
    """Columnar storage for a bin's rounds, iterable as RoundRecord values."""

    def __init__(self, index: np.ndarray, inputs: np.ndarray, output: np.ndarray):
        self._index = np.asarray(index, dtype=np.int64)
        self._inputs = np.asarray(inputs, dtype=np.int8)
        self._output = np.asarray(output, dtype=np.int8)
        for arr in (self._index, self._inputs, self._output):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return int(self._index.size)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return RoundRecord(
            int(self._index[i]), tuple(int(v) for v in self._inputs[i]), int(self._output[i])
        )

    @property
    def index(self) -> np.ndarray:
        return self._index

    @property
    def inputs(self) -> np.ndarray:
        return self._inputs

    @property
    def output(self) -> np.ndarray:
        return self._output

    def cell_index(self) -> tuple[np.ndarray, np.ndarray]:
        """Encode (x0, x1, y) as 4*x0 + 2*x1 + y for the self-test statistic."""
        cells = (
            4 * self._inputs[:, 0].astype(np.int64)
            + 2 * self._inputs[:, 1].astype(np.int64)
            + self._inputs[:, 2].astype(np.int64)
        )
        return cells, self._output.astype(np.int64)


@dataclass(frozen=True)
class BinStore:
    """The Check/Rand/False partition of a run's rounds."""

    check: RoundBatch
    rand: RoundBatch
    false_bin: RoundBatch | None = None

    def counts(self) -> dict[str, int]:
        out = {"check": len(self.check), "rand": len(self.rand)}
        if self.false_bin is not None:
            out["false"] = len(self.false_bin)
        return out


def _draw_space(protocol: str, mode: str) -> tuple[tuple[int, int], ...]:
    """The (x, setting) pairs a round may draw, x encoding x0x1 big-endian."""
    if protocol == "P":
        if mode == "generate":
            return ((1, 2), (2, 2))
        return tuple((x, y) for x in range(4) for y in range(3))
    return tuple((x, x2) for x in range(4) for x2 in range(2))


@dataclass(frozen=True)
class ProtocolConfig:
    """Parameters of one protocol run.

    ``input_weights`` optionally overrides the uniform per-round input draw:
    a mapping from (x0, x1, setting) to probability, supported on the
    protocol/mode's valid pairs and summing to 1.
    """

    protocol: str
    rounds: int
    seed: int
    mode: str = "test"
    delta: float = 1e-6
    gamma: float = 0.5
    input_weights: dict | None = None

    def __post_init__(self) -> None:
        if self.protocol not in ("P", "Q"):
            raise ValueError(f"protocol must be 'P' or 'Q', got {self.protocol!r}")
        if self.mode not in ("test", "generate"):
            raise ValueError(f"mode must be 'test' or 'generate', got {self.mode!r}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not 0.5 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0.5, 1], got {self.gamma}")
        if self.input_weights is not None:
            space = set(_draw_space(self.protocol, self.mode))
            weights = {}
            for key, value in self.input_weights.items():
                x0, x1, setting = key
                pair = (2 * int(x0) + int(x1), int(setting))
                if pair not in space:
                    raise ValueError(f"input {tuple(key)} invalid for protocol {self.protocol} {self.mode} mode")
                if value < 0:
                    raise ValueError("input weights must be nonnegative")
                weights[pair] = weights.get(pair, 0.0) + float(value)
            if abs(sum(weights.values()) - 1.0) > 1e-12:
                raise ValueError("input weights must sum to 1")
            object.__setattr__(self, "input_weights", dict(self.input_weights))


@dataclass(frozen=True)
class ConditionCheck:
    """One certification condition with its estimate and decision."""

    name: str
    estimate: float
    ci_low: float
    ci_high: float
    target: float
    satisfied: bool
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CertificationVerdict:
    """Pass/abort decision with per-condition evidence."""

    decision: str
    conditions: tuple[ConditionCheck, ...]
    output_bits: np.ndarray
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        bits = np.asarray(self.output_bits, dtype=np.uint8)
        bits.setflags(write=False)
        object.__setattr__(self, "output_bits", bits)
        if self.decision == "ABORT" and bits.size:
            raise ValueError("ABORT verdicts carry no output bits")


def _condition_from_counts(
    name: str, count: int, trials: int, target: float, satisfied: bool, delta: float, **detail
) -> ConditionCheck:
    lo, hi = analysis.wilson_interval(count, trials, 1.0 - delta)
    return ConditionCheck(
        name=name,
        estimate=count / trials,
        ci_low=lo,
        ci_high=hi,
        target=target,
        satisfied=satisfied,
        detail={"count": count, "trials": trials, **detail},
    )


def _structural_condition(name: str, ok: bool) -> ConditionCheck:
    return ConditionCheck(
        name=name,
        estimate=float(ok),
        ci_low=float(ok),
        ci_high=float(ok),
        target=1.0,
        satisfied=ok,
        detail={},
    )


def run_protocol(config: ProtocolConfig, devices: DevicePair) -> tuple[BinStore, CertificationVerdict]:
    """Execute a full protocol run: sampling, binning, certification.

    Deterministic given (config.seed, devices): inputs, the shared coin, and
    the measurement randomness are drawn from three fixed substreams of the
    seed, in round order.
    """
    if config.rounds < 1:
        raise InsufficientRounds("a run needs at least one round")
    table = devices.response_table(config.protocol)

    seq = np.random.SeedSequence(config.seed)
    input_rng, coin_rng, meas_rng = (np.random.default_rng(s) for s in seq.spawn(3))
    n = config.rounds

    if config.input_weights is not None:
        space = _draw_space(config.protocol, config.mode)
        probs = np.zeros(len(space))
        for (x0, x1, s), w in config.input_weights.items():
            probs[space.index((2 * int(x0) + int(x1), int(s)))] += float(w)
        probs /= probs.sum()
        drawn = input_rng.choice(len(space), size=n, p=probs)
        pairs = np.asarray(space, dtype=np.int64)
        x = pairs[drawn, 0]
        setting = pairs[drawn, 1]
    elif config.protocol == "P":
        if config.mode == "test":
            x = input_rng.integers(0, 4, size=n)
            setting = input_rng.integers(0, 3, size=n)
        else:
            x = input_rng.integers(1, 3, size=n)          # x in {01, 10}
            setting = np.full(n, 2, dtype=np.int64)
    else:
        x = input_rng.integers(0, 4, size=n)
        setting = input_rng.integers(0, 2, size=n)

    if devices.uses_coin:
        if devices.coin_per_round:
            coin = coin_rng.integers(0, 2, size=n)
        else:
            coin = np.full(n, int(coin_rng.integers(0, 2)), dtype=np.int64)
    else:
        coin = np.zeros(n, dtype=np.int64)

    p1 = table[coin, x, setting]
    u = meas_rng.random(n)
    b = (u >= 1.0 - p1).astype(np.int8)

    index = np.arange(n, dtype=np.int64)
    x0 = (x >> 1).astype(np.int8)
    x1 = (x & 1).astype(np.int8)
    inputs = np.column_stack([x0, x1, setting.astype(np.int8)])

    def batch(mask: np.ndarray) -> RoundBatch:
        return RoundBatch(index[mask], inputs[mask], b[mask])

    notes = (devices.caveat,) if devices.caveat else ()

    if config.protocol == "P":
        check_mask = setting < 2
        rand_mask = (setting == 2) & ((x == 1) | (x == 2))
        false_mask = (setting == 2) & ((x == 0) | (x == 3))
        bins = BinStore(check=batch(check_mask), rand=batch(rand_mask), false_bin=batch(false_mask))
        if config.mode == "generate":
            verdict = _generate_verdict(bins.rand, notes)
            return bins, verdict
        verdict = _certify_p(bins, config, notes)
        return bins, verdict

    even_mask = (x0 + x1 + setting) % 2 == 0
    bins = BinStore(check=batch(even_mask), rand=batch(~even_mask))
    if config.mode == "generate":
        verdict = _generate_verdict(bins.rand, notes)
        return bins, verdict
    verdict = _certify_q(bins, config, notes)
    return bins, verdict


def _generate_verdict(rand: RoundBatch, notes: tuple[str, ...]) -> CertificationVerdict:
    ok = len(rand) > 0
    condition = _structural_condition("rand_nonempty", ok)
    return CertificationVerdict(
        decision="PASS" if ok else "ABORT",
        conditions=(condition,),
        output_bits=rand.output if ok else np.array([], dtype=np.uint8),
        notes=notes,
    )


def _certify_p(bins: BinStore, config: ProtocolConfig, notes: tuple[str, ...]) -> CertificationVerdict:
    if len(bins.check) == 0:
        raise InsufficientRounds("check bin is empty")
    try:
        a_hat = analysis.statistic_A(bins.check, confidence=1.0 - config.delta)
    except analysis.MissingCell as exc:
        raise InsufficientRounds(str(exc)) from exc

    radius = analysis.hoeffding_radius(config.delta, len(bins.check))
    conditions = [
        ConditionCheck(
            name="A_statistic",
            estimate=a_hat.point,
            ci_low=a_hat.ci_low,
            ci_high=a_hat.ci_high,
            target=A_STAR,
            satisfied=abs(a_hat.point - A_STAR) <= radius,
            detail={"radius": radius, "trials": len(bins.check)},
        )
    ]

    false_x = 2 * bins.false_bin.inputs[:, 0] + bins.false_bin.inputs[:, 1]
    for name, sel, want_bit in (
        ("false_b0_given_x00", false_x == 0, 0),
        ("false_b1_given_x11", false_x == 3, 1),
    ):
        outputs = bins.false_bin.output[sel]
        if outputs.size == 0:
            raise InsufficientRounds(f"false bin has no x={'00' if want_bit == 0 else '11'} rounds")
        hits = int(np.count_nonzero(outputs == want_bit))
        radius_f = analysis.hoeffding_radius(config.delta, int(outputs.size))
        conditions.append(
            _condition_from_counts(
                name,
                hits,
                int(outputs.size),
                1.0,
                hits / outputs.size >= 1.0 - radius_f,
                config.delta,
                radius=radius_f,
                exceptions=int(outputs.size) - hits,
            )
        )

    conditions.append(_structural_condition("rand_nonempty", len(bins.rand) > 0))
    passed = all(c.satisfied for c in conditions)
    return CertificationVerdict(
        decision="PASS" if passed else "ABORT",
        conditions=tuple(conditions),
        output_bits=bins.rand.output if passed else np.array([], dtype=np.uint8),
        notes=notes,
    )


def _q_even_wins(check: RoundBatch) -> np.ndarray:
    x0 = check.inputs[:, 0].astype(np.int64)
    x1 = check.inputs[:, 1].astype(np.int64)
    x2 = check.inputs[:, 2].astype(np.int64)
    b = check.output.astype(np.int64)
    return (x0 + x1 + x2) // 2 == b + (x0 & (x0 ^ x1))


def _certify_q(bins: BinStore, config: ProtocolConfig, notes: tuple[str, ...]) -> CertificationVerdict:
    if len(bins.check) == 0:
        raise InsufficientRounds("check bin is empty")
    wins = _q_even_wins(bins.check)
    n_check = len(bins.check)
    win_count = int(np.count_nonzero(wins))
    radius_even = analysis.hoeffding_radius(config.delta, n_check)
    conditions = [
        _condition_from_counts(
            "even_win",
            win_count,
            n_check,
            1.0,
            win_count / n_check >= 1.0 - radius_even,
            config.delta,
            radius=radius_even,
            exceptions=n_check - win_count,
        )
    ]

    n_rand = len(bins.rand)
    test_len = math.ceil(config.gamma * n_rand)
    if test_len > 0:
        head_b = bins.rand.output[:test_len].astype(np.int64)
        head_x1 = bins.rand.inputs[:test_len, 1].astype(np.int64)
        matches = int(np.count_nonzero(head_b == head_x1))
        radius_odd = analysis.hoeffding_radius(config.delta, test_len)
        conditions.append(
            _condition_from_counts(
                "odd_guess_half",
                matches,
                test_len,
                0.5,
                abs(matches / test_len - 0.5) <= radius_odd,
                config.delta,
                radius=radius_odd,
                gamma=config.gamma,
                test_portion=test_len,
            )
        )
    else:
        conditions.append(
            ConditionCheck(
                name="odd_guess_half",
                estimate=0.0,
                ci_low=0.0,
                ci_high=0.0,
                target=0.5,
                satisfied=False,
                detail={"trials": 0, "gamma": config.gamma, "test_portion": 0},
            )
        )

    conditions.append(_structural_condition("rand_nonempty", n_rand > 0))
    passed = all(c.satisfied for c in conditions)
    return CertificationVerdict(
        decision="PASS" if passed else "ABORT",
        conditions=tuple(conditions),
        output_bits=bins.rand.output[test_len:] if passed else np.array([], dtype=np.uint8),
        notes=notes,
    )


# ---------------------------------------------------------------------------
# guessing-game bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundCheck:
    name: str
    empirical: float
    expected: float
    stderr: float
    trials: int
    within_four_se: bool


@dataclass(frozen=True)
class GuessingBoundsReport:
    checks: tuple[BoundCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.within_four_se for c in self.checks)


AUGMENTED_CHSH_SCORE = (2.0 / 3.0) * A_STAR + 1.0 / 3.0


def _bound_check(name: str, hits: int, trials: int, expected: float) -> BoundCheck:
    empirical = hits / trials
    stderr = math.sqrt(expected * (1.0 - expected) / trials)
    return BoundCheck(
        name, empirical, expected, stderr, trials, abs(empirical - expected) <= 4.0 * stderr
    )


def guessing_game_bound_check(trials: int, rng: np.random.Generator) -> GuessingBoundsReport:
    """Simulate the three no-signaling bound experiments on honest P devices.

    (a) the augmented-game reading of protocol P, uniform over the six
    (x', y) settings, whose success rate is (2/3)cos^2(pi/8) + 1/3 -- the
    y = 2 settings contribute the deterministic x' = 0 match and the
    condition-free x' = 1 cell;
    (b) the adversary that guesses the preparation's output from the observed
    y = 2 outcome, capped at 3/4;
    (c) an eavesdropper guessing a Rand-round bit from the preparation label,
    capped at 1/2.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    table = honest_devices("P").response_table("P")[0]

    def draw_bits(x: np.ndarray, setting: np.ndarray) -> np.ndarray:
        p1 = table[x, setting]
        return (rng.random(x.size) >= 1.0 - p1).astype(np.int64)

    # (a) augmented game, six settings
    x = rng.integers(0, 4, size=trials)
    setting = rng.integers(0, 3, size=trials)
    b = draw_bits(x, setting)
    a = x >> 1                      # the preparation's in-basis index
    xp = (x >> 1) ^ (x & 1)
    chsh_win = ((xp & setting) == (a ^ b)) & (setting < 2)
    det_win = (setting == 2) & (xp == 0) & (b == a)
    free_win = (setting == 2) & (xp == 1)
    aug_hits = int(np.count_nonzero(chsh_win | det_win | free_win))
    checks = [_bound_check("augmented_chsh_score", aug_hits, trials, AUGMENTED_CHSH_SCORE)]

    # (b) output-guessing adversary: guess = observed c2
    x = rng.integers(0, 4, size=trials)
    b = draw_bits(x, np.full(trials, 2))
    hits = int(np.count_nonzero(b == (x >> 1)))
    checks.append(_bound_check("output_guess_rate", hits, trials, 0.75))

    # (c) Eve guesses a Rand bit knowing the prepared label
    x = rng.integers(1, 3, size=trials)
    b = draw_bits(x, np.full(trials, 2))
    hits = int(np.count_nonzero(b == (x >> 1)))
    checks.append(_bound_check("rand_bit_guess_rate", hits, trials, 0.5))

    return GuessingBoundsReport(tuple(checks))
