"""Exact symbolic algebra of Majorana monomials and braid conjugation.

Everything in this module is exact: phases are stored as integer powers
of i, and products are normalized with gamma_a gamma_b = -gamma_b gamma_a
(a != b) and gamma_a^2 = 1.  Mode indices are 1-based.

Conventions (fixed once, used everywhere):

* A clockwise exchange of modes (i, j) acts by conjugation as
  gamma_i -> gamma_j, gamma_j -> -gamma_i and fixes all other modes; the
  anticlockwise exchange is its inverse.
* A braid word lists generators in the order they act on states, i.e.
  the word [g1, g2, ..., gk] corresponds to the operator U = Uk ... U2 U1
  and conjugation applies g1 first.
* As a matrix, a clockwise exchange is exp(-(pi/4) gamma_i gamma_j);
  its fourth power is -1 while its conjugation action is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import BraidParseError

__all__ = [
    "MajoranaMonomial",
    "BraidGenerator",
    "BraidWord",
    "SignedPauli",
    "normalize",
    "braid_conjugate",
    "decompose_nonlocal",
    "braid_commutator",
    "verify_braid_relations",
    "RelationCheck",
    "RelationReport",
    "pauli_to_monomial",
    "monomial_to_pauli",
    "constraint_monomial",
    "pauli_image",
    "parse_braid_program",
]


def _normalize_factors(modes: Sequence[int], phase_power: int) -> tuple[int, tuple[int, ...]]:
    """Sort a product of gammas, tracking the sign of each transposition.

    Insertion sort moves each index left past strictly greater ones
    (each adjacent swap of distinct indices contributes a factor -1);
    equal indices end up adjacent and cancel pairwise via gamma^2 = 1.
    """
    work = list(modes)
    swaps = 0
    for pos in range(1, len(work)):
        cur = work[pos]
        k = pos
        while k > 0 and work[k - 1] > cur:
            work[k] = work[k - 1]
            k -= 1
            swaps += 1
        work[k] = cur
    out: list[int] = []
    for m in work:
        if out and out[-1] == m:
            out.pop()
        else:
            out.append(m)
    return (phase_power + 2 * swaps) % 4, tuple(out)


@dataclass(frozen=True)
class MajoranaMonomial:
    """i^phase_power times an ordered product of distinct Majorana modes."""

    phase_power: int
    modes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "phase_power", self.phase_power % 4)
        object.__setattr__(self, "modes", tuple(self.modes))
        if any(b <= a for a, b in zip(self.modes, self.modes[1:])):
            raise ValueError("modes must be strictly increasing; use from_product to normalize")
        if self.modes and self.modes[0] < 1:
            raise ValueError("mode indices are 1-based")

    @classmethod
    def identity(cls) -> "MajoranaMonomial":
        return cls(0, ())

    @classmethod
    def gamma(cls, k: int) -> "MajoranaMonomial":
        return cls(0, (k,))

    @classmethod
    def from_product(cls, modes: Sequence[int], phase_power: int = 0) -> "MajoranaMonomial":
        phase, sorted_modes = _normalize_factors(modes, phase_power)
        return cls(phase, sorted_modes)

    def __mul__(self, other: "MajoranaMonomial") -> "MajoranaMonomial":
        return MajoranaMonomial.from_product(
            self.modes + other.modes, self.phase_power + other.phase_power
        )

    def times_phase(self, power: int) -> "MajoranaMonomial":
        return MajoranaMonomial(self.phase_power + power, self.modes)

    def adjoint(self) -> "MajoranaMonomial":
        """Hermitian adjoint; equals the inverse since monomials are unitary."""
        return MajoranaMonomial.from_product(tuple(reversed(self.modes)), -self.phase_power)

    inverse = adjoint

    @property
    def coefficient(self) -> complex:
        return (1j) ** self.phase_power

    @property
    def weight(self) -> int:
        return len(self.modes)

    @property
    def parity(self) -> int:
        """0 for an even number of modes, 1 for odd."""
        return len(self.modes) % 2

    @property
    def is_identity(self) -> bool:
        return not self.modes and self.phase_power == 0

    def max_mode(self) -> int:
        return max(self.modes, default=0)

    def __repr__(self) -> str:
        coeff = {0: "", 1: "i*", 2: "-", 3: "-i*"}[self.phase_power]
        body = "*".join(f"g{m}" for m in self.modes) if self.modes else "1"
        return f"{coeff}{body}"


def normalize(modes: Sequence[int], phase_power: int = 0) -> MajoranaMonomial:
    """Canonical form of i^phase_power * gamma_{m1} ... gamma_{mk}."""
    return MajoranaMonomial.from_product(modes, phase_power)


@dataclass(frozen=True)
class BraidGenerator:
    """Exchange of modes i < j; clockwise means gamma_i -> gamma_j, gamma_j -> -gamma_i."""

    i: int
    j: int
    clockwise: bool = True

    def __post_init__(self):
        if not (0 < self.i < self.j):
            raise ValueError(f"need 0 < i < j, got ({self.i}, {self.j})")

    def inverse(self) -> "BraidGenerator":
        return BraidGenerator(self.i, self.j, not self.clockwise)

    def image(self, mode: int) -> tuple[int, int]:
        """Conjugation image of gamma_mode as (sign_power, mode)."""
        if mode == self.i:
            return (0, self.j) if self.clockwise else (2, self.j)
        if mode == self.j:
            return (2, self.i) if self.clockwise else (0, self.i)
        return (0, mode)

    @property
    def pair_monomial(self) -> MajoranaMonomial:
        return MajoranaMonomial(0, (self.i, self.j))

    def __repr__(self) -> str:
        return f"B({self.i},{self.j})" if self.clockwise else f"Binv({self.i},{self.j})"


@dataclass(frozen=True)
class BraidWord:
    """Sequence of exchanges; index 0 acts first (on states and by conjugation)."""

    generators: tuple[BraidGenerator, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[BraidGenerator]:
        return iter(self.generators)

    def __add__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.generators + other.generators)

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple(g.inverse() for g in reversed(self.generators)))

    def max_mode(self) -> int:
        return max((g.j for g in self.generators), default=0)

    def to_text(self) -> str:
        lines = [f"{'B' if g.clockwise else 'Binv'} {g.i} {g.j}" for g in self.generators]
        return "\n".join(lines) + ("\n" if lines else "")


def parse_braid_program(text: str) -> BraidWord:
    """Parse the braid program format: `B i j`, `Binv i j`, `#` comments."""
    gens: list[BraidGenerator] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("B", "Binv"):
            raise BraidParseError(line_no, f"expected 'B i j' or 'Binv i j', got {raw!r}")
        try:
            i, j = int(parts[1]), int(parts[2])
        except ValueError:
            raise BraidParseError(line_no, f"mode indices must be integers, got {raw!r}") from None
        if not 0 < i < j:
            raise BraidParseError(line_no, f"need 0 < i < j, got ({i}, {j})")
        gens.append(BraidGenerator(i, j, clockwise=(parts[0] == "B")))
    return BraidWord(tuple(gens))


def braid_conjugate(word: BraidWord, m: MajoranaMonomial, n_modes: int | None = None) -> MajoranaMonomial:
    """Return U m U^dagger computed symbolically, generators applied in word order."""
    if n_modes is not None:
        top = max(m.max_mode(), word.max_mode())
        if top > n_modes:
            raise ValueError(f"mode index {top} exceeds declared mode count {n_modes}")
    phase = m.phase_power
    modes = list(m.modes)
    for gen in word:
        for pos, mode in enumerate(modes):
            dp, new_mode = gen.image(mode)
            phase += dp
            modes[pos] = new_mode
    return MajoranaMonomial.from_product(modes, phase)


def decompose_nonlocal(i: int, j: int) -> BraidWord:
    """Nearest-neighbor word realizing the exchange of distant modes i, j.

    Conjugating by the returned word equals conjugating by the nonlocal
    clockwise exchange of (i, j); the word has length 2(j - i - 1) + 1.
    """
    if i >= j - 1:
        raise ValueError(f"({i}, {j}) is already nearest-neighbor or invalid")
    down = [BraidGenerator(k, k + 1, clockwise=False) for k in range(j - 1, i, -1)]
    up = [BraidGenerator(k, k + 1) for k in range(i + 1, j)]
    return BraidWord(tuple(down) + (BraidGenerator(i, i + 1),) + tuple(up))


def braid_commutator(a: BraidGenerator, b: BraidGenerator) -> MajoranaMonomial | None:
    """Symbolic commutator [B_a, B_b]; None when it vanishes.

    With B = (1 - gamma gamma')/sqrt(2) the linear terms cancel and
    [B_a, B_b] = (PQ - QP)/2 for the pair monomials P, Q; this is zero
    when P and Q commute and equals PQ when they anticommute.
    """
    p = a.pair_monomial if a.clockwise else a.pair_monomial.times_phase(2)
    q = b.pair_monomial if b.clockwise else b.pair_monomial.times_phase(2)
    pq = p * q
    qp = q * p
    if pq == qp:
        return None
    return pq


# --- braid-relation verification (exact symbolic expansion) ---

_TermSum = dict[tuple[int, ...], complex]


def _sum_product(factors: Sequence[Sequence[tuple[complex, MajoranaMonomial]]]) -> _TermSum:
    """Expand a product of monomial sums into a combined term dictionary."""
    acc: _TermSum = {(): 1.0 + 0.0j}
    for factor in factors:
        nxt: _TermSum = {}
        for modes, coeff in acc.items():
            left = MajoranaMonomial(0, modes)
            for weight, mono in factor:
                prod = left * mono
                key = prod.modes
                nxt[key] = nxt.get(key, 0.0 + 0.0j) + coeff * weight * prod.coefficient
        acc = {k: v for k, v in nxt.items() if v != 0}
    return acc


def _braid_factor(gen: BraidGenerator) -> list[tuple[complex, MajoranaMonomial]]:
    # sqrt(2) B = 1 - gamma_i gamma_j (clockwise); scale factors cancel in
    # relation checks because both sides have equal word length.
    sign = -1.0 if gen.clockwise else 1.0
    return [(1.0, MajoranaMonomial.identity()), (sign, gen.pair_monomial)]


@dataclass(frozen=True)
class RelationCheck:
    relation: str
    pair: tuple[int, int]
    passed: bool


@dataclass(frozen=True)
class RelationReport:
    n_modes: int
    checks: tuple[RelationCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def verify_braid_relations(n_modes: int) -> RelationReport:
    """Check far commutation and the Yang-Baxter relation exactly.

    Both sides are expanded symbolically via sqrt(2) B = 1 - gamma gamma',
    so equality is exact integer arithmetic, not floating point.
    """
    if n_modes < 4:
        raise ValueError("need at least 4 modes to exercise both relations")
    gens = [BraidGenerator(i, i + 1) for i in range(1, n_modes)]
    checks: list[RelationCheck] = []
    for ia, a in enumerate(gens):
        for b in gens[ia + 1:]:
            fa, fb = _braid_factor(a), _braid_factor(b)
            if b.i - a.i > 1:
                lhs = _sum_product([fa, fb])
                rhs = _sum_product([fb, fa])
                checks.append(RelationCheck("far_commutation", (a.i, b.i), lhs == rhs))
            elif b.i - a.i == 1:
                lhs = _sum_product([fa, fb, fa])
                rhs = _sum_product([fb, fa, fb])
                checks.append(RelationCheck("yang_baxter", (a.i, b.i), lhs == rhs))
    return RelationReport(n_modes, tuple(checks))


# --- logical Pauli dictionary on the 4-Majorana-per-qubit layout ---
#
# Qubit q owns modes (4q-3, 4q-2, 4q-1, 4q) with the code constraint
# gamma_{4q-3} gamma_{4q-2} gamma_{4q-1} gamma_{4q} = -1.  Z and X follow
# the -i gamma gamma dictionary; Y carries +i so that X*Y = i*Z holds as
# an operator identity (the -i choice for Y is inconsistent with Z, X).

_PAULI_PHASE = {"Z": 3, "X": 3, "Y": 1}
_PAULI_PAIR = {"Z": (0, 1), "X": (1, 2), "Y": (0, 2)}
_PAIR_TO_LETTER = {(0, 1): "Z", (1, 2): "X", (0, 2): "Y"}


def pauli_to_monomial(qubit: int, letter: str) -> MajoranaMonomial:
    """Majorana monomial realizing a logical Pauli letter on one qubit."""
    if letter not in _PAULI_PAIR:
        raise ValueError(f"letter must be X, Y or Z, got {letter!r}")
    base = 4 * (qubit - 1)
    a, b = _PAULI_PAIR[letter]
    return MajoranaMonomial(_PAULI_PHASE[letter], (base + 1 + a, base + 1 + b))


def constraint_monomial(qubit: int) -> MajoranaMonomial:
    base = 4 * (qubit - 1)
    return MajoranaMonomial(0, (base + 1, base + 2, base + 3, base + 4))


@dataclass(frozen=True)
class SignedPauli:
    """A phase in {1, i, -1, -i} times one Pauli letter per (listed) qubit."""

    phase_power: int
    letters: tuple[tuple[int, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "phase_power", self.phase_power % 4)
        ordered = tuple(sorted(self.letters))
        for q, letter in ordered:
            if letter not in ("X", "Y", "Z"):
                raise ValueError(f"letter must be X, Y or Z, got {letter!r} on qubit {q}")
        if len({q for q, _ in ordered}) != len(ordered):
            raise ValueError("duplicate qubit in letters")
        object.__setattr__(self, "letters", ordered)

    @classmethod
    def from_map(cls, letters: Mapping[int, str], sign: complex = 1) -> "SignedPauli":
        power = {1: 0, 1j: 1, -1: 2, -1j: 3}.get(sign)
        if power is None:
            raise ValueError(f"sign must be one of 1, i, -1, -i, got {sign!r}")
        return cls(power, tuple((q, l) for q, l in letters.items() if l != "I"))

    @property
    def sign(self) -> complex:
        return (1j) ** self.phase_power

    def letter(self, qubit: int) -> str:
        for q, l in self.letters:
            if q == qubit:
                return l
        return "I"

    def to_monomial(self) -> MajoranaMonomial:
        m = MajoranaMonomial(self.phase_power, ())
        for q, letter in self.letters:
            m = m * pauli_to_monomial(q, letter)
        return m

    def __repr__(self) -> str:
        coeff = {0: "+", 1: "+i*", 2: "-", 3: "-i*"}[self.phase_power]
        body = "*".join(f"{l}{q}" for q, l in self.letters) if self.letters else "I"
        return f"{coeff}{body}"


def monomial_to_pauli(m: MajoranaMonomial, n_qubits: int) -> SignedPauli:
    """Rewrite a monomial as a signed Pauli on the constraint subspace.

    Uses gamma_{4q-3}..gamma_{4q} = -1 to reduce each qubit's overlap to
    a canonical pair.  Raises LeakageError if the monomial has odd
    overlap with some quadruple (then it maps code states out of the
    logical subspace) or touches modes outside the layout.
    """
    from .errors import LeakageError

    if m.max_mode() > 4 * n_qubits:
        raise LeakageError(f"monomial touches mode {m.max_mode()} outside {n_qubits}-qubit layout")
    for q in range(1, n_qubits + 1):
        lo = 4 * (q - 1)
        overlap = [x for x in m.modes if lo < x <= lo + 4]
        if len(overlap) % 2:
            raise LeakageError(f"monomial leaves logical subspace on qubit {q}: {m!r}")
        if (lo + 4) in overlap:
            # multiply by -constraint to fold mode 4q away
            m = (m * constraint_monomial(q)).times_phase(2)
    letters: dict[int, str] = {}
    peel = MajoranaMonomial.identity()
    for q in range(1, n_qubits + 1):
        lo = 4 * (q - 1)
        overlap = tuple(x - lo - 1 for x in m.modes if lo < x <= lo + 4)
        if not overlap:
            continue
        letters[q] = _PAIR_TO_LETTER[overlap]
        peel = peel * pauli_to_monomial(q, letters[q])
    residue = peel.adjoint() * m
    if residue.modes:
        raise LeakageError(f"monomial is not a Pauli on the logical subspace: {m!r}")
    return SignedPauli(residue.phase_power, tuple(letters.items()))


def pauli_image(word: BraidWord, p: SignedPauli, n_qubits: int) -> SignedPauli:
    """Image of a signed Pauli under conjugation by a braid word.

    The Pauli is expanded into its Majorana monomial, conjugated
    symbolically, and folded back through the constraint; closure in the
    Pauli group is asserted, not assumed.
    """
    if word.max_mode() > 4 * n_qubits:
        raise ValueError(f"word touches mode {word.max_mode()} outside {n_qubits}-qubit layout")
    conj = braid_conjugate(word, p.to_monomial())
    return monomial_to_pauli(conj, n_qubits)
