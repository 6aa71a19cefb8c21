"""Dense state-vector simulation of n fermionic modes (2n Majorana modes).

Basis and sign conventions, fixed globally:

* Basis states are occupation bitstrings; fermion mode 1 is the least
  significant bit.  |n1 n2 ...> = (f1^dag)^n1 (f2^dag)^n2 ... |0>.
* f_j acting on a bitstring carries the Jordan-Wigner sign
  (-1)^(n1 + ... + n_{j-1}).
* gamma_{2j-1} = f_j^dag + f_j and gamma_{2j} = i (f_j^dag - f_j).

States are values: every public operation returns a fresh FockState.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ImpossibleOutcomeError, StateTooLargeError
from .majorana_algebra import BraidWord, MajoranaMonomial

MAX_MODES = 14
PROJECTION_EPS = 1e-12

__all__ = [
    "FockState",
    "MeasurementRecord",
    "RandomSource",
    "vacuum",
    "basis_state",
    "apply_monomial",
    "apply_pair_rotation",
    "apply_braid_word",
    "measure_pair",
    "project_quad",
    "overlap",
    "expectation",
    "majorana_matrix",
    "monomial_matrix",
    "braid_matrix",
    "add_vacuum_mode",
    "factor_out_mode",
    "state_to_json_dict",
    "state_from_json_dict",
]


@dataclass
class FockState:
    """Complex amplitude vector over occupation bitstrings of n modes."""

    n_modes: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (2**self.n_modes,):
            raise ValueError(
                f"amplitude vector has length {self.amplitudes.size}, expected {2**self.n_modes}"
            )

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "FockState":
        return FockState(self.n_modes, self.amplitudes.copy())

    def normalized(self) -> "FockState":
        n = self.norm()
        if n < PROJECTION_EPS:
            raise ImpossibleOutcomeError("cannot normalize a (near) zero state")
        return FockState(self.n_modes, self.amplitudes / n)


@dataclass(frozen=True)
class MeasurementRecord:
    observable: MajoranaMonomial
    outcome: int
    pre_probability: float
    label: str = ""


class RandomSource:
    """Seeded, counted random stream; identical seeds replay identical runs."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.draws = 0
        self._gen = np.random.default_rng(self.seed)

    def uniform(self) -> float:
        self.draws += 1
        return float(self._gen.random())

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, draws={self.draws})"


def _check_size(n_modes: int, max_modes: int = MAX_MODES) -> None:
    if n_modes < 1:
        raise ValueError("need at least one mode")
    if n_modes > max_modes:
        raise StateTooLargeError(f"{n_modes} modes exceeds the dense cap of {max_modes}")


def vacuum(n_modes: int, max_modes: int = MAX_MODES) -> FockState:
    _check_size(n_modes, max_modes)
    amps = np.zeros(2**n_modes, dtype=np.complex128)
    amps[0] = 1.0
    return FockState(n_modes, amps)


def basis_state(occupations: Sequence[int], max_modes: int = MAX_MODES) -> FockState:
    n_modes = len(occupations)
    _check_size(n_modes, max_modes)
    idx = sum((1 << k) for k, occ in enumerate(occupations) if occ)
    amps = np.zeros(2**n_modes, dtype=np.complex128)
    amps[idx] = 1.0
    return FockState(n_modes, amps)


def _jw_parity(n_modes: int, mode: int) -> np.ndarray:
    """(-1)^(n1+...+n_{mode-1}) for every basis index."""
    idx = np.arange(2**n_modes, dtype=np.uint32)
    below = idx & np.uint32((1 << (mode - 1)) - 1)
    return np.where(np.bitwise_count(below) & 1, -1.0, 1.0)


def _apply_gamma(amps: np.ndarray, n_modes: int, a: int) -> np.ndarray:
    """Apply one Majorana operator gamma_a to raw amplitudes."""
    mode = (a + 1) // 2
    bit = 1 << (mode - 1)
    idx = np.arange(amps.size, dtype=np.intp)
    sign = _jw_parity(n_modes, mode)
    out = np.empty_like(amps)
    if a % 2 == 1:  # f^dag + f: flips the bit, sign from the JW string only
        out[idx ^ bit] = sign * amps
    else:  # i (f^dag - f): +i on 0 -> 1, -i on 1 -> 0
        occ = (idx & bit).astype(bool)
        coef = np.where(occ, -1j, 1j) * sign
        out[idx ^ bit] = coef * amps
    return out


def apply_monomial(state: FockState, m: MajoranaMonomial) -> FockState:
    """Apply i^phase * gamma_{m1} ... gamma_{mk}; unitary, so norm-preserving."""
    if m.max_mode() > 2 * state.n_modes:
        raise ValueError(f"mode {m.max_mode()} out of range for {state.n_modes} fermion modes")
    amps = state.amplitudes
    for a in reversed(m.modes):  # rightmost operator acts first
        amps = _apply_gamma(amps, state.n_modes, a)
    return FockState(state.n_modes, m.coefficient * amps)


def apply_pair_rotation(state: FockState, i: int, j: int, theta: float) -> FockState:
    """Apply exp(theta gamma_i gamma_j) = cos(theta) + sin(theta) gamma_i gamma_j.

    theta = -pi/4 realizes one clockwise exchange of modes (i, j).
    """
    if i == j:
        raise ValueError("pair rotation needs two distinct Majorana modes")
    rotated = apply_monomial(state, MajoranaMonomial.from_product((i, j)))
    amps = np.cos(theta) * state.amplitudes + np.sin(theta) * rotated.amplitudes
    return FockState(state.n_modes, amps)


def apply_braid_word(state: FockState, word: BraidWord) -> FockState:
    for gen in word:
        theta = -np.pi / 4 if gen.clockwise else np.pi / 4
        state = apply_pair_rotation(state, gen.i, gen.j, theta)
    return state


def expectation(state: FockState, m: MajoranaMonomial) -> complex:
    return complex(np.vdot(state.amplitudes, apply_monomial(state, m).amplitudes))


def measure_pair(
    state: FockState,
    i: int,
    j: int,
    rng: RandomSource | None,
    forced_outcome: int | None = None,
    label: str = "",
) -> tuple[MeasurementRecord, FockState]:
    """Projective measurement of F = -i gamma_i gamma_j, Born-rule sampled.

    The outcome is drawn from a single uniform variate against the +1
    probability; pass forced_outcome to postselect a branch instead.
    """
    if i == j:
        raise ValueError("pair measurement needs two distinct Majorana modes")
    observable = MajoranaMonomial.from_product((i, j), 3)
    f_amps = apply_monomial(state, observable).amplitudes
    mean = float(np.real(np.vdot(state.amplitudes, f_amps)))
    p_plus = min(1.0, max(0.0, (1.0 + mean) / 2.0))
    if forced_outcome is None:
        if rng is None:
            raise ValueError("need a RandomSource unless the outcome is forced")
        outcome = 1 if rng.uniform() < p_plus else -1
    else:
        outcome = int(forced_outcome)
        if outcome not in (1, -1):
            raise ValueError("forced outcome must be +1 or -1")
    prob = p_plus if outcome == 1 else 1.0 - p_plus
    if prob < PROJECTION_EPS:
        raise ImpossibleOutcomeError(
            f"projection onto outcome {outcome:+d} of -i*g{i}*g{j} has probability {prob:.3e}"
        )
    amps = (state.amplitudes + outcome * f_amps) / 2.0
    post = FockState(state.n_modes, amps / np.linalg.norm(amps))
    return MeasurementRecord(observable, outcome, prob, label), post


def project_quad(
    state: FockState, i: int, j: int, k: int, l: int, sign: int
) -> tuple[float, FockState]:
    """Apply (1 + sign * gamma_i gamma_j gamma_k gamma_l)/2 and renormalize.

    Returns the pre-projection probability together with the projected
    state; a (near) zero-norm result raises ImpossibleOutcomeError.
    """
    if len({i, j, k, l}) != 4:
        raise ValueError("quad projection needs four distinct Majorana modes")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    q_amps = apply_monomial(state, MajoranaMonomial.from_product((i, j, k, l))).amplitudes
    amps = (state.amplitudes + sign * q_amps) / 2.0
    prob = float(np.vdot(amps, state.amplitudes).real)
    if prob < PROJECTION_EPS:
        raise ImpossibleOutcomeError(
            f"projection onto 1/2(1 {'+' if sign > 0 else '-'} g{i}g{j}g{k}g{l}) has probability {prob:.3e}"
        )
    return prob, FockState(state.n_modes, amps / np.linalg.norm(amps))


def overlap(a: FockState, b: FockState) -> complex:
    if a.n_modes != b.n_modes:
        raise ValueError(f"mode count mismatch: {a.n_modes} vs {b.n_modes}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


# --- dense operator matrices (small n; used by oracles and cross-checks) ---


def majorana_matrix(n_modes: int, a: int) -> np.ndarray:
    """Dense matrix of gamma_a on 2^n_modes amplitudes."""
    if not 1 <= a <= 2 * n_modes:
        raise ValueError(f"gamma index {a} out of range for {n_modes} modes")
    dim = 2**n_modes
    mode = (a + 1) // 2
    bit = 1 << (mode - 1)
    idx = np.arange(dim, dtype=np.intp)
    sign = _jw_parity(n_modes, mode)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    if a % 2 == 1:
        mat[idx ^ bit, idx] = sign
    else:
        occ = (idx & bit).astype(bool)
        mat[idx ^ bit, idx] = np.where(occ, -1j, 1j) * sign
    return mat


def monomial_matrix(n_modes: int, m: MajoranaMonomial) -> np.ndarray:
    mat = np.eye(2**n_modes, dtype=np.complex128)
    for a in m.modes:
        mat = mat @ majorana_matrix(n_modes, a)
    return m.coefficient * mat


def braid_matrix(n_modes: int, word: BraidWord) -> np.ndarray:
    """Dense unitary of a braid word (first generator rightmost)."""
    mat = np.eye(2**n_modes, dtype=np.complex128)
    for gen in word:
        pair = monomial_matrix(n_modes, gen.pair_monomial)
        theta = -np.pi / 4 if gen.clockwise else np.pi / 4
        mat = (np.cos(theta) * np.eye(2**n_modes) + np.sin(theta) * pair) @ mat
    return mat


# --- mode bookkeeping helpers ---


def tensor_product(low: FockState, high: FockState) -> FockState:
    """Joint state with `low` occupying the lower-numbered modes.

    With the ordered-creation basis convention the amplitudes combine
    without extra fermionic signs: joint[hi << n_low | lo] = low[lo] * high[hi].
    """
    _check_size(low.n_modes + high.n_modes)
    return FockState(low.n_modes + high.n_modes, np.kron(high.amplitudes, low.amplitudes))


def add_vacuum_mode(state: FockState) -> FockState:
    """Append one empty fermion mode (becomes the new most significant bit)."""
    _check_size(state.n_modes + 1)
    amps = np.zeros(2 ** (state.n_modes + 1), dtype=np.complex128)
    amps[: state.dim] = state.amplitudes
    return FockState(state.n_modes + 1, amps)


def factor_out_mode(state: FockState, mode: int, atol: float = 1e-9) -> tuple[int, FockState]:
    """Remove a fermion mode that is in a definite occupation state.

    Returns (occupation, reduced state).  For an occupied mode the
    Jordan-Wigner sign of pulling f_mode^dag to the front is folded into
    the remaining amplitudes so phases stay exact.  Raises ValueError if
    the mode is entangled with the rest (neither slice is negligible).
    """
    if not 1 <= mode <= state.n_modes:
        raise ValueError(f"mode {mode} out of range")
    bit = 1 << (mode - 1)
    idx = np.arange(state.dim, dtype=np.intp)
    empty = state.amplitudes[(idx & bit) == 0]
    filled = state.amplitudes[(idx & bit) != 0]
    w_empty, w_filled = np.linalg.norm(empty), np.linalg.norm(filled)
    if w_empty > atol and w_filled > atol:
        raise ValueError(f"mode {mode} is not in a definite occupation state")
    occ = 0 if w_empty >= w_filled else 1
    sub = empty if occ == 0 else filled
    if occ == 1 and mode > 1:
        low = np.arange(sub.size, dtype=np.uint32) & np.uint32(bit - 1)
        sub = sub * np.where(np.bitwise_count(low) & 1, -1.0, 1.0)
    return occ, FockState(state.n_modes - 1, sub.copy())


# --- JSON state dump/load: {n_modes, amplitudes: [[re, im], ...]} ---


def state_to_json_dict(state: FockState) -> dict:
    return {
        "n_modes": state.n_modes,
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }


def state_from_json_dict(data: dict) -> FockState:
    n_modes = int(data["n_modes"])
    pairs = data["amplitudes"]
    if len(pairs) != 2**n_modes:
        raise ValueError("amplitude list length does not match mode count")
    amps = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    return FockState(n_modes, amps)
