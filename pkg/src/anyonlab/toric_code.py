"""Square-lattice stabilizer model on a torus: star/plaquette Hamiltonian,
string operators creating anyon pairs, and braiding-phase extraction.

Geometry: an Lx x Ly torus with one spin on every edge (2 Lx Ly spins).
Horizontal edge h(x, y) points from vertex (x, y) to (x+1, y); vertical
edge v(x, y) from (x, y) to (x, y+1); both indices wrap.  A_s is the
product of sigma_x over the four edges touching vertex s, B_p the
product of sigma_z over the four boundary edges of the plaquette whose
lower-left vertex is p.

An open sigma_z string on lattice edges flips the star eigenvalues at
its endpoints (electric charges); an open sigma_x string on dual-lattice
edges flips the plaquette eigenvalues at its endpoints (magnetic
vortices).  Transporting a charge cluster around a flux cluster is a
closed z-loop, whose eigenvalue on a stabilizer eigenstate is the
product of the enclosed plaquette eigenvalues.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .honeycomb import pauli_product

__all__ = [
    "SquareLattice",
    "StringOperator",
    "j_eff",
    "build_toric_hamiltonian",
    "stabilizer_ground_state",
    "apply_string",
    "string_between_vertices",
    "dual_string_between_plaquettes",
    "loop_around_plaquettes",
    "braiding_phase",
]

MAX_EDGES = 14


def j_eff(jx: float, jy: float, jz: float) -> float:
    """Effective coupling jx^2 jy^2 / (16 jz^3) of the gapped-phase model."""
    if jz <= 0:
        raise ValueError("jz must be positive")
    return jx**2 * jy**2 / (16.0 * jz**3)


@dataclass(frozen=True)
class SquareLattice:
    lx: int
    ly: int

    def __post_init__(self):
        if self.lx < 2 or self.ly < 2:
            raise ValueError("torus needs lx, ly >= 2")
        if self.n_edges > MAX_EDGES:
            raise ValueError(f"{self.n_edges} spins exceeds the dense cap of {MAX_EDGES}")

    @property
    def n_edges(self) -> int:
        return 2 * self.lx * self.ly

    def h_edge(self, x: int, y: int) -> int:
        return (y % self.ly) * self.lx + (x % self.lx)

    def v_edge(self, x: int, y: int) -> int:
        return self.lx * self.ly + (y % self.ly) * self.lx + (x % self.lx)

    def star(self, x: int, y: int) -> tuple[int, ...]:
        return (
            self.h_edge(x, y),
            self.h_edge(x - 1, y),
            self.v_edge(x, y),
            self.v_edge(x, y - 1),
        )

    def plaquette(self, x: int, y: int) -> tuple[int, ...]:
        return (
            self.h_edge(x, y),
            self.h_edge(x, y + 1),
            self.v_edge(x, y),
            self.v_edge(x + 1, y),
        )

    def vertices(self):
        return [(x, y) for y in range(self.ly) for x in range(self.lx)]

    def plaquette_coords(self):
        return [(x, y) for y in range(self.ly) for x in range(self.lx)]


@dataclass(frozen=True)
class StringOperator:
    kind: str  # "electric" (sigma_z on edges) or "magnetic" (sigma_x on edges)
    edges: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("electric", "magnetic"):
            raise ValueError("kind must be electric or magnetic")


def build_toric_hamiltonian(
    lat: SquareLattice, j_effective: float
) -> tuple[sp.csr_matrix, list[sp.csr_matrix], list[sp.csr_matrix]]:
    """H = -j_eff (sum_s A_s + sum_p B_p) plus the stabilizer lists."""
    n = lat.n_edges
    stars = [
        pauli_product(n, {e: "x" for e in lat.star(x, y)}) for x, y in lat.vertices()
    ]
    plaqs = [
        pauli_product(n, {e: "z" for e in lat.plaquette(x, y)})
        for x, y in lat.plaquette_coords()
    ]
    h = sp.csr_matrix((2**n, 2**n), dtype=np.complex128)
    for op in itertools.chain(stars, plaqs):
        h = h - j_effective * op
    return h.tocsr(), stars, plaqs


def stabilizer_ground_state(lat: SquareLattice) -> np.ndarray:
    """The +1 common eigenstate of all stabilizers reachable from |0...0>.

    |0...0> already satisfies every B_p; projecting with (1 + A_s)/2 for
    all stars gives a definite ground state (one of the four on the torus).
    """
    n = lat.n_edges
    vec = np.zeros(2**n, dtype=np.complex128)
    vec[0] = 1.0
    for x, y in lat.vertices():
        op = pauli_product(n, {e: "x" for e in lat.star(x, y)})
        vec = (vec + op @ vec) / 2.0
    return vec / np.linalg.norm(vec)


def apply_string(state: np.ndarray, lat: SquareLattice, s: StringOperator) -> np.ndarray:
    if any(e < 0 or e >= lat.n_edges for e in s.edges):
        raise ValueError("string touches edges outside the lattice")
    letter = "z" if s.kind == "electric" else "x"
    op = pauli_product(lat.n_edges, {e: letter for e in s.edges})
    return op @ state


def string_between_vertices(lat: SquareLattice, a, b) -> StringOperator:
    """A z-string along a staircase lattice path from vertex a to vertex b."""
    (x0, y0), (x1, y1) = a, b
    edges = []
    x = x0
    while x != x1 % lat.lx:
        edges.append(lat.h_edge(x, y0))
        x = (x + 1) % lat.lx
    y = y0
    while y != y1 % lat.ly:
        edges.append(lat.v_edge(x, y))
        y = (y + 1) % lat.ly
    return StringOperator("electric", tuple(edges))


def dual_string_between_plaquettes(lat: SquareLattice, a, b) -> StringOperator:
    """An x-string along a dual staircase path from plaquette a to plaquette b.

    Crossing from plaquette (x, y) to (x+1, y) flips the shared vertical
    edge v(x+1, y); moving to (x, y+1) flips the shared horizontal edge
    h(x, y+1).
    """
    (x0, y0), (x1, y1) = a, b
    edges = []
    x = x0
    while x != x1 % lat.lx:
        edges.append(lat.v_edge(x + 1, y0))
        x = (x + 1) % lat.lx
    y = y0
    while y != y1 % lat.ly:
        edges.append(lat.h_edge(x, y + 1))
        y = (y + 1) % lat.ly
    return StringOperator("magnetic", tuple(edges))


def loop_around_plaquettes(lat: SquareLattice, plaquettes) -> StringOperator:
    """Closed z-loop bounding a set of plaquettes (XOR of their boundaries)."""
    count: dict[int, int] = {}
    for x, y in plaquettes:
        for e in lat.plaquette(x, y):
            count[e] = count.get(e, 0) + 1
    edges = tuple(sorted(e for e, c in count.items() if c % 2 == 1))
    return StringOperator("electric", edges)


def _flux_cluster(lat: SquareLattice, n_fluxes: int) -> tuple[list, list]:
    """Cluster plaquettes along the bottom row, partners one row up."""
    if n_fluxes > lat.lx:
        raise ValueError("flux cluster does not fit the lattice")
    cluster = [(x, 0) for x in range(n_fluxes)]
    partners = [(x, 1) for x in range(n_fluxes)]
    return cluster, partners


def braiding_phase(
    lat: SquareLattice,
    n_charges: int,
    n_fluxes: int,
    wide_loop: bool = False,
) -> complex:
    """Phase from carrying a charge cluster around a flux cluster.

    Prepares the stabilizer ground state, creates n_fluxes vortex pairs
    (cluster in the bottom plaquette row, partners one row up) and
    n_charges charge pairs, then applies the enclosing z-loop once per
    charge and returns <initial | final>.  Expected (-1)^(charges * fluxes).
    With wide_loop the enclosing region gains a flux-free plaquette,
    exercising path independence (needs lx >= n_fluxes + 1).
    """
    if n_charges < 0 or n_fluxes < 0:
        raise ValueError("cluster sizes must be nonnegative")
    if n_charges > lat.lx:
        raise ValueError("charge cluster does not fit the lattice")
    state = stabilizer_ground_state(lat)
    cluster, partners = _flux_cluster(lat, n_fluxes)
    for p, q in zip(cluster, partners):
        state = apply_string(state, lat, dual_string_between_plaquettes(lat, p, q))
    # charge pairs well away from the loop support are spectators; they
    # ride along so the transported cluster actually exists in the state
    for k in range(n_charges):
        a = (k, 0)
        b = (k, lat.ly - 1)
        state = apply_string(state, lat, string_between_vertices(lat, a, b))
    region = list(cluster)
    if wide_loop:
        if n_fluxes + 1 > lat.lx:
            raise ValueError("wide loop does not fit the lattice")
        region.append((n_fluxes, 0))
    if not set(cluster) <= set(region):
        raise ValueError("loop does not enclose the flux cluster")
    loop = loop_around_plaquettes(lat, region)
    final = state.copy()
    for _ in range(n_charges):
        final = apply_string(final, lat, loop)
    return complex(np.vdot(state, final))
