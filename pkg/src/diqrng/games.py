"""The five nonlocal / self-testing games and their strategies.

Covers game definitions (winning predicates and valid input sets), the
optimal quantum strategies, deterministic classical strategy spaces with
exhaustive search, exact win-probability evaluation by branch enumeration,
round sampling, and the empirical game-equivalence checks.

Game roster:
  * CHSH          two-party, win iff x & y == a ^ b, standard strategy;
  * CHSH1         same predicate, relabeled measurement strategy;
  * GAME_G        two-party with two-bit input for Alice, win iff
                  (x0 ^ x1) & y == a ^ b;
  * TAVAKOLI      prepare-and-measure self-test, success iff b == x_y;
  * PSEUDO_TELEPATHY3  three-party GHZ parity game on even-weight inputs;
  * GAME_G2       prepare-and-measure self-test reduced from the GHZ game,
                  with an even-weight winning condition and an odd-weight
                  unpredictability condition.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from . import qcore
from .errors import ArityMismatch, BadDistribution, BadInput
from .qcore import Gate1Q, PureState, QubitBasis

QUANTUM_WIN = 0.5 * (1.0 + 1.0 / math.sqrt(2.0))   # cos^2(pi/8), the CHSH quantum value


class GameId(Enum):
    CHSH = "chsh"
    CHSH1 = "chsh1"
    GAME_G = "g"
    TAVAKOLI = "tavakoli"
    PSEUDO_TELEPATHY3 = "pt3"
    GAME_G2 = "g2"


class ScoreKind(Enum):
    WIN_PROBABILITY = "win_probability"
    STATISTIC_A = "statistic_A"
    EVEN_WIN = "even_win"
    ODD_GUESS = "odd_guess"
    AUGMENTED = "augmented"


@dataclass(frozen=True)
class GameScore:
    value: float
    kind: ScoreKind

    def __post_init__(self) -> None:
        if not -1e-12 <= self.value <= 1 + 1e-12:
            raise ValueError(f"score {self.value} outside [0, 1]")


@dataclass(frozen=True)
class G2Score:
    """The G2 score triple: even-weight win, odd-weight guess rate, their mean."""

    even_win: GameScore
    odd_guess: GameScore
    augmented: GameScore


@dataclass(frozen=True)
class RoundIO:
    """One round's classical transcript: the dealt inputs and produced outputs."""

    inputs: tuple[int, ...]
    outputs: tuple[int, ...]


_INPUT_ARITY = {
    GameId.CHSH: 2,
    GameId.CHSH1: 2,
    GameId.GAME_G: 3,
    GameId.TAVAKOLI: 3,
    GameId.PSEUDO_TELEPATHY3: 3,
    GameId.GAME_G2: 3,
}

_OUTPUT_ARITY = {
    GameId.CHSH: 2,
    GameId.CHSH1: 2,
    GameId.GAME_G: 2,
    GameId.TAVAKOLI: 1,
    GameId.PSEUDO_TELEPATHY3: 3,
    GameId.GAME_G2: 1,
}


def input_space(game: GameId) -> tuple[tuple[int, ...], ...]:
    """All valid input tuples of a game, in lexicographic order."""
    if game in (GameId.CHSH, GameId.CHSH1):
        return tuple(itertools.product((0, 1), repeat=2))
    if game in (GameId.GAME_G, GameId.TAVAKOLI, GameId.GAME_G2):
        return tuple(itertools.product((0, 1), repeat=3))
    if game is GameId.PSEUDO_TELEPATHY3:
        return tuple(x for x in itertools.product((0, 1), repeat=3) if sum(x) % 2 == 0)
    raise ArityMismatch(f"unknown game {game}")


def _check_io(game: GameId, io: RoundIO) -> None:
    if game is GameId.PSEUDO_TELEPATHY3:
        # the parity predicate is n-agnostic; only the n = 3 strategies exist
        if len(io.inputs) < 3 or len(io.outputs) != len(io.inputs):
            raise ArityMismatch(
                f"{game.value} expects one output per player (>= 3), got "
                f"{len(io.inputs)} inputs and {len(io.outputs)} outputs"
            )
    else:
        if len(io.inputs) != _INPUT_ARITY[game]:
            raise ArityMismatch(
                f"{game.value} expects {_INPUT_ARITY[game]} inputs, got {len(io.inputs)}"
            )
        if len(io.outputs) != _OUTPUT_ARITY[game]:
            raise ArityMismatch(
                f"{game.value} expects {_OUTPUT_ARITY[game]} outputs, got {len(io.outputs)}"
            )
    if any(v not in (0, 1) for v in io.inputs + io.outputs):
        raise ArityMismatch("inputs and outputs must be bits")


def winning_predicate(game: GameId, io: RoundIO) -> bool:
    """Whether the round transcript wins the game.

    For GAME_G2 the even-weight branch tests the integer identity
    (x0+x1+x2)/2 == b + (x0 & (x0 ^ x1)) and the odd-weight branch tests
    b == x1.  PSEUDO_TELEPATHY3 accepts only even-weight inputs here; the
    odd-weight extension lives in :func:`pt3_odd_extension_score`.
    """
    _check_io(game, io)
    if game in (GameId.CHSH, GameId.CHSH1):
        x, y = io.inputs
        a, b = io.outputs
        return (x & y) == (a ^ b)
    if game is GameId.GAME_G:
        x0, x1, y = io.inputs
        a, b = io.outputs
        return ((x0 ^ x1) & y) == (a ^ b)
    if game is GameId.TAVAKOLI:
        x0, x1, y = io.inputs
        (b,) = io.outputs
        return b == (x0, x1)[y]
    if game is GameId.PSEUDO_TELEPATHY3:
        weight = sum(io.inputs)
        if weight % 2 != 0:
            raise BadInput("pseudo-telepathy inputs must have even weight")
        return sum(io.outputs) % 2 == (weight // 2) % 2
    if game is GameId.GAME_G2:
        x0, x1, x2 = io.inputs
        (b,) = io.outputs
        weight = x0 + x1 + x2
        if weight % 2 == 0:
            return weight // 2 == b + (x0 & (x0 ^ x1))
        return b == x1
    raise ArityMismatch(f"unknown game {game}")


# ---------------------------------------------------------------------------
# strategies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureSpec:
    """One party's measurement for a given classical input.

    Optional gates are applied to the party's qubit first, then the basis is
    measured; ``outputs`` relabels (outcome 0, outcome 1) to reported bits.
    """

    basis: QubitBasis
    gates: tuple[Gate1Q, ...] = ()
    outputs: tuple[int, int] = (0, 1)


@dataclass(frozen=True)
class QuantumStrategy:
    """A game's quantum strategy.

    Entangled games use ``shared_state`` plus one measurement rule per party
    (keyed by that party's classical input).  Prepare-and-measure games use
    ``preparation`` (input pair -> emitted qubit) plus a single measurement
    rule keyed by the measurement setting.
    """

    game: GameId
    shared_state: PureState | None = None
    party_rules: tuple[Mapping[object, MeasureSpec], ...] = ()
    preparation: Mapping[tuple[int, int], PureState] | None = None
    measurement: Mapping[int, MeasureSpec] | None = None


def paper_strategy(game: GameId) -> QuantumStrategy:
    """The optimal quantum strategy for each game."""
    psi_meas = {0: MeasureSpec(qcore.PSI), 1: MeasureSpec(qcore.PHI)}
    if game is GameId.CHSH:
        return QuantumStrategy(
            game,
            shared_state=qcore.BELL_PHI_PLUS,
            party_rules=(
                {0: MeasureSpec(qcore.COMPUTATIONAL), 1: MeasureSpec(qcore.HADAMARD)},
                # b = 0 on |psi> and on |phi_perp>
                {0: MeasureSpec(qcore.PSI), 1: MeasureSpec(qcore.PHI, outputs=(1, 0))},
            ),
        )
    if game is GameId.CHSH1:
        return QuantumStrategy(
            game,
            shared_state=qcore.BELL_PHI_PLUS,
            party_rules=(
                {0: MeasureSpec(qcore.HADAMARD), 1: MeasureSpec(qcore.COMPUTATIONAL)},
                dict(psi_meas),
            ),
        )
    if game is GameId.GAME_G:
        alice = {
            (x0, x1): MeasureSpec(qcore.HADAMARD if x0 == x1 else qcore.COMPUTATIONAL)
            for x0 in (0, 1)
            for x1 in (0, 1)
        }
        return QuantumStrategy(
            game, shared_state=qcore.BELL_PHI_PLUS, party_rules=(alice, dict(psi_meas))
        )
    if game is GameId.TAVAKOLI:
        return QuantumStrategy(
            game,
            preparation={
                (0, 0): qcore.KET_PLUS,
                (0, 1): qcore.KET_ZERO,
                (1, 0): qcore.KET_ONE,
                (1, 1): qcore.KET_MINUS,
            },
            measurement=dict(psi_meas),
        )
    if game is GameId.PSEUDO_TELEPATHY3:
        per_player = {
            0: MeasureSpec(qcore.COMPUTATIONAL, gates=(qcore.H,)),
            1: MeasureSpec(qcore.COMPUTATIONAL, gates=(qcore.S, qcore.H)),
        }
        return QuantumStrategy(
            game,
            shared_state=qcore.GHZ3,
            party_rules=tuple(dict(per_player) for _ in range(3)),
        )
    if game is GameId.GAME_G2:
        return QuantumStrategy(
            game,
            preparation={
                (0, 0): qcore.KET_PLUS,
                (0, 1): qcore.KET_PLUS_I,
                (1, 0): qcore.KET_MINUS_I,
                (1, 1): qcore.KET_MINUS,
            },
            measurement={
                0: MeasureSpec(qcore.COMPUTATIONAL, gates=(qcore.H,)),
                1: MeasureSpec(qcore.COMPUTATIONAL, gates=(qcore.S, qcore.H)),
            },
        )
    raise ArityMismatch(f"unknown game {game}")


_TABLE_SHAPES = {
    # (number of tables, entries per table); tables are tuples of output bits
    # indexed by the canonical (lexicographic) order of that party's inputs
    GameId.CHSH: (2, (2, 2)),
    GameId.CHSH1: (2, (2, 2)),
    GameId.GAME_G: (2, (4, 2)),
    GameId.TAVAKOLI: (2, (4, 4)),
    GameId.PSEUDO_TELEPATHY3: (3, (2, 2, 2)),
    GameId.GAME_G2: (2, (4, 4)),
}


@dataclass(frozen=True)
class ClassicalStrategy:
    """Deterministic response tables, or a finite mixture of them.

    Table layout per game (all indices lexicographic over that party's
    inputs):
      * CHSH/CHSH1:  (a by x), (b by y)
      * GAME_G:      (a by x0x1), (b by y)
      * TAVAKOLI:    preparer (message by x0x1), measurer (b by message,y)
      * GAME_G2:     preparer (message by x0x1), measurer (b by message,x2)
      * PSEUDO_TELEPATHY3: (y_i by x_i) for each of the three players
    """

    game: GameId
    tables: tuple[tuple[int, ...], ...] = ()
    mixture: tuple[tuple[float, "ClassicalStrategy"], ...] = ()

    def __post_init__(self) -> None:
        if bool(self.tables) == bool(self.mixture):
            raise ValueError("provide exactly one of tables or mixture")
        if self.tables:
            count, sizes = _TABLE_SHAPES[self.game]
            if len(self.tables) != count or tuple(len(t) for t in self.tables) != sizes:
                raise ArityMismatch(
                    f"{self.game.value} strategy tables must have sizes {sizes}"
                )
            if any(bit not in (0, 1) for t in self.tables for bit in t):
                raise ArityMismatch("table entries must be bits")
        else:
            weights = [w for w, _ in self.mixture]
            if any(w < 0 for w in weights):
                raise BadDistribution("mixture weights must be nonnegative")
            if abs(sum(weights) - 1.0) > 1e-12:
                raise BadDistribution("mixture weights must sum to 1")
            if any(s.game is not self.game for _, s in self.mixture):
                raise ArityMismatch("mixture components must play the same game")

    def renormalized(self, factor: float) -> "ClassicalStrategy":
        """Scale all mixture weights by a positive factor, then renormalize."""
        if not self.mixture:
            return self
        if factor <= 0:
            raise BadDistribution("scale factor must be positive")
        scaled = [(w * factor, s) for w, s in self.mixture]
        total = sum(w for w, _ in scaled)
        return ClassicalStrategy(
            self.game, mixture=tuple((w / total, s) for w, s in scaled)
        )


def _classical_outputs(strategy: ClassicalStrategy, inputs: tuple[int, ...]) -> tuple[int, ...]:
    t = strategy.tables
    game = strategy.game
    if game in (GameId.CHSH, GameId.CHSH1):
        x, y = inputs
        return (t[0][x], t[1][y])
    if game is GameId.GAME_G:
        x0, x1, y = inputs
        return (t[0][2 * x0 + x1], t[1][y])
    if game is GameId.TAVAKOLI:
        x0, x1, y = inputs
        m = t[0][2 * x0 + x1]
        return (t[1][2 * m + y],)
    if game is GameId.GAME_G2:
        x0, x1, x2 = inputs
        m = t[0][2 * x0 + x1]
        return (t[1][2 * m + x2],)
    if game is GameId.PSEUDO_TELEPATHY3:
        return tuple(t[i][inputs[i]] for i in range(3))
    raise ArityMismatch(f"unknown game {game}")


# ---------------------------------------------------------------------------
# exact evaluation
# ---------------------------------------------------------------------------

def _measure_branches(state: PureState, spec: MeasureSpec, target: int) -> list[tuple[int, float, PureState | None]]:
    """Enumerate (reported bit, probability, collapsed state) for one measurement.

    Zero-probability branches are dropped so that deterministic outcomes stay
    exactly deterministic downstream.
    """
    for gate in spec.gates:
        state = qcore.apply_gate(state, gate, target)
    branches = []
    for outcome, (prob, collapsed) in enumerate(qcore.measurement_branches(state, spec.basis, target)):
        if prob > 0.0:
            branches.append((spec.outputs[outcome], prob, collapsed))
    return branches


def branch_distribution(strategy: QuantumStrategy | ClassicalStrategy, inputs: tuple[int, ...]) -> dict[tuple[int, ...], float]:
    """Exact output distribution of a strategy on fixed inputs."""
    if isinstance(strategy, ClassicalStrategy):
        if strategy.tables:
            return {_classical_outputs(strategy, inputs): 1.0}
        dist: dict[tuple[int, ...], float] = {}
        for weight, component in strategy.mixture:
            for outputs, p in branch_distribution(component, inputs).items():
                dist[outputs] = dist.get(outputs, 0.0) + weight * p
        return dist

    game = strategy.game
    if strategy.preparation is not None:
        x0, x1, setting = inputs
        state = strategy.preparation[(x0, x1)]
        spec = strategy.measurement[setting]
        return {(bit,): prob for bit, prob, _ in _measure_branches(state, spec, 0)}

    if game in (GameId.CHSH, GameId.CHSH1, GameId.GAME_G):
        alice_key = inputs[0] if game is not GameId.GAME_G else (inputs[0], inputs[1])
        bob_key = inputs[-1]
        alice_spec = strategy.party_rules[0][alice_key]
        bob_spec = strategy.party_rules[1][bob_key]
        dist = {}
        for a_bit, pa, collapsed in _measure_branches(strategy.shared_state, alice_spec, 0):
            for b_bit, pb, _ in _measure_branches(collapsed, bob_spec, 0):
                key = (a_bit, b_bit)
                dist[key] = dist.get(key, 0.0) + pa * pb
        return dist

    if game is GameId.PSEUDO_TELEPATHY3:
        dist = {}
        # measuring always collapses away qubit 0, so the remaining players'
        # qubits renumber to the front as the cascade proceeds
        def walk(state: PureState | None, player: int, prob: float, outs: tuple[int, ...]) -> None:
            if player == 3:
                dist[outs] = dist.get(outs, 0.0) + prob
                return
            spec = strategy.party_rules[player][inputs[player]]
            for bit, p, collapsed in _measure_branches(state, spec, 0):
                walk(collapsed, player + 1, prob * p, outs + (bit,))

        walk(strategy.shared_state, 0, 1.0, ())
        return dist

    raise ArityMismatch(f"unknown game {game}")


def _normalize_distribution(game: GameId, input_distribution) -> dict[tuple[int, ...], float]:
    space = input_space(game)
    if input_distribution is None:
        return {x: 1.0 / len(space) for x in space}
    dist = {tuple(k): float(v) for k, v in dict(input_distribution).items()}
    if any(k not in space for k in dist):
        raise BadDistribution("distribution supported outside the game's valid inputs")
    if any(v < 0 for v in dist.values()):
        raise BadDistribution("weights must be nonnegative")
    total = sum(dist.values())
    if abs(total - 1.0) > 1e-12:
        raise BadDistribution(f"weights sum to {total}, not 1")
    return dist


Strategy = QuantumStrategy | ClassicalStrategy


def exact_score(game: GameId, strategy: Strategy, input_distribution=None) -> GameScore | G2Score:
    """Exact expected score by enumerating inputs and measurement branches.

    For GAME_G2 returns the (even_win, odd_guess, augmented) triple, the
    even/odd scores being conditional on the input parity class.
    """
    if strategy.game is not game:
        raise ArityMismatch(f"strategy plays {strategy.game.value}, not {game.value}")
    weights = _normalize_distribution(game, input_distribution)

    def win_mass(selected: dict[tuple[int, ...], float]) -> float:
        total = 0.0
        for inputs, w in selected.items():
            if w == 0.0:
                continue
            for outputs, p in branch_distribution(strategy, inputs).items():
                if winning_predicate(game, RoundIO(inputs, outputs)):
                    total += w * p
        return total

    if game is GameId.GAME_G2:
        even = {x: w for x, w in weights.items() if sum(x) % 2 == 0}
        odd = {x: w for x, w in weights.items() if sum(x) % 2 == 1}
        even_mass, odd_mass = sum(even.values()), sum(odd.values())
        if even_mass == 0.0 or odd_mass == 0.0:
            raise BadDistribution("G2 needs mass on both parity classes")
        even_win = win_mass(even) / even_mass
        odd_guess = win_mass(odd) / odd_mass
        return G2Score(
            even_win=GameScore(even_win, ScoreKind.EVEN_WIN),
            odd_guess=GameScore(odd_guess, ScoreKind.ODD_GUESS),
            augmented=GameScore(0.5 * even_win + 0.5 * odd_guess, ScoreKind.AUGMENTED),
        )

    kind = ScoreKind.STATISTIC_A if game is GameId.TAVAKOLI else ScoreKind.WIN_PROBABILITY
    return GameScore(win_mass(weights), kind)


def pt3_odd_extension_score(strategy: Strategy) -> float:
    """Pr[y2 == x1] of the GHZ-game strategy over the four odd-weight inputs.

    This is the odd-weight reading of the three-party game that backs GAME_G2's
    second condition; the dealer never sends these inputs in the game proper.
    """
    if strategy.game is not GameId.PSEUDO_TELEPATHY3:
        raise ArityMismatch("odd-weight extension is defined for the GHZ game")
    odd_inputs = [x for x in itertools.product((0, 1), repeat=3) if sum(x) % 2 == 1]
    total = 0.0
    for inputs in odd_inputs:
        for outputs, p in branch_distribution(strategy, inputs).items():
            if outputs[2] == inputs[1]:
                total += p / len(odd_inputs)
    return total


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

class RoundSampler:
    """Draws rounds from a strategy's exact branch distributions.

    Per-input output distributions are enumerated once at construction
    (mixtures fold into their averaged distribution, which is identical for
    i.i.d. rounds); each sampled round then consumes exactly one uniform
    draw from the caller's rng stream.
    """

    def __init__(self, game: GameId, strategy: Strategy):
        if strategy.game is not game:
            raise ArityMismatch(f"strategy plays {strategy.game.value}, not {game.value}")
        self.game = game
        self.strategy = strategy
        self._outputs: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        self._cdf: dict[tuple[int, ...], np.ndarray] = {}
        for inputs in input_space(game):
            dist = branch_distribution(strategy, inputs)
            outputs = sorted(dist)
            probs = np.array([dist[o] for o in outputs])
            self._outputs[inputs] = outputs
            self._cdf[inputs] = np.cumsum(probs)

    def sample(self, inputs: tuple[int, ...], rng: np.random.Generator) -> RoundIO:
        inputs = tuple(inputs)
        if inputs not in self._outputs:
            raise BadInput(f"{inputs} is not a valid {self.game.value} input")
        u = rng.random()
        idx = int(np.searchsorted(self._cdf[inputs], u, side="right"))
        idx = min(idx, len(self._outputs[inputs]) - 1)
        return RoundIO(inputs, self._outputs[inputs][idx])

    def sample_many(self, n: int, rng: np.random.Generator) -> list[RoundIO]:
        """n rounds with uniform inputs; vectorized draws, stable round order."""
        space = list(self._outputs)
        input_idx = rng.integers(0, len(space), size=n)
        u = rng.random(n)
        rounds: list = [None] * n
        for k, inputs in enumerate(space):
            mask = np.flatnonzero(input_idx == k)
            if mask.size == 0:
                continue
            branch = np.searchsorted(self._cdf[inputs], u[mask], side="right")
            branch = np.minimum(branch, len(self._outputs[inputs]) - 1)
            outs = self._outputs[inputs]
            for pos, br in zip(mask, branch):
                rounds[pos] = RoundIO(inputs, outs[br])
        return rounds


def sample_round(game: GameId, strategy: Strategy, inputs: tuple[int, ...], rng: np.random.Generator) -> RoundIO:
    """One round of the game; outputs drawn from the strategy's branch probabilities."""
    return RoundSampler(game, strategy).sample(inputs, rng)


# ---------------------------------------------------------------------------
# classical brute force
# ---------------------------------------------------------------------------

def enumerate_deterministic(game: GameId) -> Iterator[ClassicalStrategy]:
    """All deterministic strategies of a game, in lexicographic table order."""
    _, sizes = _TABLE_SHAPES[game]
    pools = [itertools.product((0, 1), repeat=size) for size in sizes]
    for tables in itertools.product(*pools):
        yield ClassicalStrategy(game, tables=tuple(tables))


@functools.lru_cache(maxsize=None)
def _winning_outputs(game: GameId) -> dict[tuple[int, ...], frozenset[tuple[int, ...]]]:
    """Per input, the set of output tuples that win the game."""
    table = {}
    for x in input_space(game):
        table[x] = frozenset(
            outputs
            for outputs in itertools.product((0, 1), repeat=_OUTPUT_ARITY[game])
            if winning_predicate(game, RoundIO(x, outputs))
        )
    return table


def _rational_score(game: GameId, strategy: ClassicalStrategy) -> Fraction:
    """Deterministic strategy score as an exact count over the input space.

    For GAME_G2 this is the augmented score: both parity classes hold four
    inputs, so the mean of the two conditional scores reduces to wins over
    all eight.
    """
    wins = 0
    table = _winning_outputs(game)
    for x, winners in table.items():
        wins += _classical_outputs(strategy, x) in winners
    return Fraction(wins, len(table))


def best_classical(game: GameId) -> tuple[float, ClassicalStrategy]:
    """Exhaustive deterministic maximum and its (lexicographically first) argmax.

    By convexity the deterministic maximum bounds every shared-randomness
    mixture of the same score kind.  Counts are exact rationals; the returned
    float is exact for every value these games produce.
    """
    best: Fraction | None = None
    argmax: ClassicalStrategy | None = None
    for strategy in enumerate_deterministic(game):
        score = _rational_score(game, strategy)
        if best is None or score > best:
            best, argmax = score, strategy
    assert best is not None and argmax is not None
    return float(best), argmax


def g2_deterministic_frontier() -> tuple[tuple[float, float, ClassicalStrategy], ...]:
    """(even_win, odd_guess) of every deterministic G2 strategy."""
    out = []
    for strategy in enumerate_deterministic(GameId.GAME_G2):
        even = Fraction(0)
        odd = Fraction(0)
        for x in input_space(GameId.GAME_G2):
            win = winning_predicate(
                GameId.GAME_G2, RoundIO(x, _classical_outputs(strategy, x))
            )
            if sum(x) % 2 == 0:
                even += Fraction(int(win), 4)
            else:
                odd += Fraction(int(win), 4)
        out.append((float(even), float(odd), strategy))
    return tuple(out)


# ---------------------------------------------------------------------------
# equivalence checks
# ---------------------------------------------------------------------------

class EquivalencePair(Enum):
    G_VS_TAVAKOLI = "g-vs-tavakoli"
    G_VS_CHSH1 = "g-vs-chsh1"
    G1_VS_G2 = "g1-vs-g2"


@dataclass(frozen=True)
class EquivalenceAssertion:
    name: str
    passed: bool
    observed: float
    expected: float


@dataclass(frozen=True)
class EquivalenceReport:
    pair: EquivalencePair
    assertions: tuple[EquivalenceAssertion, ...]

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)


_STATE_TOL = 1e-9
_SCORE_TOL = 1e-12


def _state_assert(name: str, got: PureState, want: PureState) -> EquivalenceAssertion:
    ov = qcore.overlap(got, want)
    return EquivalenceAssertion(name, ov >= 1 - _STATE_TOL, ov, 1.0)


def _score_assert(name: str, got: float, want: float) -> EquivalenceAssertion:
    return EquivalenceAssertion(name, abs(got - want) <= _SCORE_TOL, got, want)


def _check_g_vs_tavakoli() -> tuple[EquivalenceAssertion, ...]:
    g = paper_strategy(GameId.GAME_G)
    tav = paper_strategy(GameId.TAVAKOLI)
    assertions = []
    conditional_cells = []
    for x0, x1 in itertools.product((0, 1), repeat=2):
        alice_spec = g.party_rules[0][(x0, x1)]
        # conditioning on a = x0 selects Alice's outcome index x0
        _, bob_state = qcore.collapse(g.shared_state, alice_spec.basis, 0, x0)
        assertions.append(
            _state_assert(f"bob_state_x{x0}{x1}", bob_state, tav.preparation[(x0, x1)])
        )
        for y in (0, 1):
            spec = g.party_rules[1][y]
            probs = qcore.outcome_distribution(bob_state, spec.basis, 0)
            target_bit = (x0, x1)[y]
            p_match = probs[spec.outputs.index(target_bit)]
            tav_dist = branch_distribution(tav, (x0, x1, y))
            p_tav = tav_dist.get((target_bit,), 0.0)
            assertions.append(_score_assert(f"cell_x{x0}{x1}_y{y}", p_match, p_tav))
            conditional_cells.append(p_match)
    mean_conditional = sum(conditional_cells) / len(conditional_cells)
    a_stat = exact_score(GameId.TAVAKOLI, tav).value
    assertions.append(_score_assert("conditional_score_equals_A", mean_conditional, a_stat))
    return tuple(assertions)


def _check_g_vs_chsh1() -> tuple[EquivalenceAssertion, ...]:
    g = paper_strategy(GameId.GAME_G)
    chsh1 = paper_strategy(GameId.CHSH1)
    assertions = []
    for x, y in itertools.product((0, 1), repeat=2):
        p_chsh1 = sum(
            p
            for outputs, p in branch_distribution(chsh1, (x, y)).items()
            if winning_predicate(GameId.CHSH1, RoundIO((x, y), outputs))
        )
        # x0 uniform, x1 = x0 ^ x
        p_g = 0.0
        for x0 in (0, 1):
            inputs = (x0, x0 ^ x, y)
            p_g += 0.5 * sum(
                p
                for outputs, p in branch_distribution(g, inputs).items()
                if winning_predicate(GameId.GAME_G, RoundIO(inputs, outputs))
            )
        assertions.append(_score_assert(f"setting_x{x}_y{y}", p_g, p_chsh1))
    total_g = exact_score(GameId.GAME_G, g).value
    total_chsh1 = exact_score(GameId.CHSH1, chsh1).value
    assertions.append(_score_assert("total_score", total_g, total_chsh1))
    return tuple(assertions)


def _check_g1_vs_g2() -> tuple[EquivalenceAssertion, ...]:
    ghz = paper_strategy(GameId.PSEUDO_TELEPATHY3)
    g2 = paper_strategy(GameId.GAME_G2)
    assertions = []
    for x0, x1 in itertools.product((0, 1), repeat=2):
        # run players 0 and 1, conditioning on y0 = 0, y1 = x0 & (x0 ^ x1)
        y1_target = x0 & (x0 ^ x1)
        state = qcore.GHZ3
        spec0 = ghz.party_rules[0][x0]
        for gate in spec0.gates:
            state = qcore.apply_gate(state, gate, 0)
        p0, state = qcore.collapse(state, spec0.basis, 0, 0)
        spec1 = ghz.party_rules[1][x1]
        for gate in spec1.gates:
            state = qcore.apply_gate(state, gate, 0)
        p1, state = qcore.collapse(state, spec1.basis, 0, y1_target)
        assertions.append(
            EquivalenceAssertion(f"branch_prob_x{x0}{x1}", abs(p0 * p1 - 0.25) <= _SCORE_TOL, p0 * p1, 0.25)
        )
        assertions.append(
            _state_assert(f"a2_state_x{x0}{x1}", state, g2.preparation[(x0, x1)])
        )
    even_g1 = exact_score(GameId.PSEUDO_TELEPATHY3, ghz).value
    g2_scores = exact_score(GameId.GAME_G2, g2)
    assertions.append(_score_assert("even_score", even_g1, g2_scores.even_win.value))
    odd_g1 = pt3_odd_extension_score(ghz)
    assertions.append(_score_assert("odd_score", odd_g1, g2_scores.odd_guess.value))
    return tuple(assertions)


def equivalence_check(pair: EquivalencePair) -> EquivalenceReport:
    """Empirical probability-equivalence check for one of the game reductions."""
    if pair is EquivalencePair.G_VS_TAVAKOLI:
        return EquivalenceReport(pair, _check_g_vs_tavakoli())
    if pair is EquivalencePair.G_VS_CHSH1:
        return EquivalenceReport(pair, _check_g_vs_chsh1())
    if pair is EquivalencePair.G1_VS_G2:
        return EquivalenceReport(pair, _check_g1_vs_g2())
    raise ArityMismatch(f"unknown pair {pair}")
