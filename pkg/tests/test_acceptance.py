"""Acceptance suite: one test per release criterion, each printing a verdict.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Tolerances are fixed here and not tuned anywhere else.
"""

import itertools

import numpy as np
import pytest
from scipy.linalg import expm

import anyonlab.fock_simulator as fock
import anyonlab.honeycomb as hc
import anyonlab.protocols as proto
import anyonlab.qubit_encoding as enc
import anyonlab.toric_code as tc
from anyonlab.majorana_algebra import (
    BraidGenerator,
    BraidWord,
    MajoranaMonomial,
    braid_commutator,
    braid_conjugate,
    verify_braid_relations,
)


def report(criterion: int, text: str) -> None:
    print(f"ACCEPTANCE {criterion} PASS: {text}")


def haar_vec(dim, gen):
    v = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    return v / np.linalg.norm(v)


def test_criterion_1_braid_relations_exact():
    """Far commutation, Yang-Baxter, and the non-commuting exchange pair."""
    worst = 0.0
    for n_modes in (4, 5, 6):
        assert verify_braid_relations(n_modes).all_passed
        n_f = (n_modes + 1) // 2
        mats = {
            i: fock.braid_matrix(n_f, BraidWord((BraidGenerator(i, i + 1),)))
            for i in range(1, n_modes)
        }
        for i, j in itertools.combinations(mats, 2):
            if j - i > 1:
                err = np.max(np.abs(mats[i] @ mats[j] - mats[j] @ mats[i]))
            else:
                err = np.max(
                    np.abs(mats[i] @ mats[j] @ mats[i] - mats[j] @ mats[i] @ mats[j])
                )
            worst = max(worst, err)
            assert err < 1e-12
        for i in range(2, n_modes - 1):
            a, b = BraidGenerator(i - 1, i), BraidGenerator(i, i + 1)
            assert braid_commutator(a, b) == MajoranaMonomial(0, (i - 1, i + 1))
            comm = mats[i - 1] @ mats[i] - mats[i] @ mats[i - 1]
            oracle = fock.monomial_matrix(n_f, MajoranaMonomial(0, (i - 1, i + 1)))
            err = np.max(np.abs(comm - oracle))
            worst = max(worst, err)
            assert err < 1e-12
    report(1, f"braid relations exact for 4..6 modes, worst matrix error {worst:.2e}")


def test_criterion_2_exchange_action():
    """gamma_i -> gamma_j, B^2 = -gg, B^4 = -1 (matrix) with identity action."""
    worst = 0.0
    for n_modes in (4, 6):
        n_f = n_modes // 2
        for i in range(1, n_modes):
            g = BraidGenerator(i, i + 1)
            w = BraidWord((g,))
            assert braid_conjugate(w, MajoranaMonomial.gamma(i)) == MajoranaMonomial.gamma(i + 1)
            assert braid_conjugate(w, MajoranaMonomial.gamma(i + 1)) == MajoranaMonomial(2, (i,))
            w4 = BraidWord((g,) * 4)
            for k in range(1, n_modes + 1):
                assert braid_conjugate(w4, MajoranaMonomial.gamma(k)) == MajoranaMonomial.gamma(k)
            b = fock.braid_matrix(n_f, w)
            ident = np.eye(2**n_f)
            pair = fock.monomial_matrix(n_f, MajoranaMonomial(2, (i, i + 1)))
            checks = (
                np.max(np.abs(np.linalg.matrix_power(b, 2) - pair)),
                np.max(np.abs(np.linalg.matrix_power(b, 4) + ident)),
                np.max(np.abs(np.linalg.matrix_power(b, 8) - ident)),
            )
            worst = max(worst, *checks)
            assert all(c < 1e-12 for c in checks)
    report(2, f"exchange action and B^2/B^4/B^8 identities, worst error {worst:.2e}")


def test_criterion_3_phase_diagram():
    """Classifier vs direct inequality oracle; gapless vs gapped minima."""
    gen = np.random.default_rng(2024)
    agree = 0
    n = 10_000
    for _ in range(n):
        jx, jy, jz = gen.uniform(0.02, 3.0, size=3)
        label = hc.classify_phase(jx, jy, jz)
        if jx > jy + jz:
            oracle = "Ax"
        elif jy > jz + jx:
            oracle = "Ay"
        elif jz > jx + jy:
            oracle = "Az"
        elif jx == jy + jz or jy == jz + jx or jz == jx + jy:
            oracle = "boundary"
        else:
            oracle = "B_gapless"
        agree += label == oracle
    assert agree == n
    gap_iso, _ = hc.bz_min_gap(hc.HoneycombCouplings(1, 1, 1), 240)
    assert gap_iso < 1e-6
    gap_az, _ = hc.bz_min_gap(hc.HoneycombCouplings(0.1, 0.1, 1.0), 121)
    assert gap_az > 0.1
    report(
        3,
        f"classifier agreement {agree}/{n}, isotropic min gap {gap_iso:.1e}, "
        f"Az min gap {gap_az:.3f}",
    )


def test_criterion_4_field_induced_gap():
    """Minimal BZ gap equals 2 sqrt(3) t^3 within 2% for t in {0.02, 0.05, 0.1}."""
    rel_errors = []
    for t in (0.02, 0.05, 0.1):
        c = hc.HoneycombCouplings(1, 1, 1, t, t, t)
        gap, _ = hc.bz_min_gap(c, 241, refine_rounds=10)
        target = 2 * np.sqrt(3) * t**3
        rel = abs(gap - target) / target
        rel_errors.append(rel)
        assert rel < 0.02
    report(4, "cubic field gap 2*sqrt(3)t^3, relative errors "
              + ", ".join(f"{e:.2e}" for e in rel_errors))


def test_criterion_5_honeycomb_ed_cross_check():
    """Conserved plaquettes and JW-vs-ED ground energies on 6..12 spins."""
    import scipy.sparse.linalg as spla

    shapes = [(2, 3), (2, 4), (2, 5), (2, 6)]
    c = hc.HoneycombCouplings(0.9, 1.05, 1.2)
    diffs = []
    for shape in shapes:
        lat = hc.LatticeSpec(*shape)
        h, plaqs = hc.build_spin_hamiltonian(lat, c)
        for w in plaqs:
            assert spla.norm(h @ w - w @ h) < 1e-12
        ed = hc.spin_ground_energy_in_sector(lat, c)
        jw = hc.vortex_free_ground_energy(lat, c)
        diffs.append(abs(ed - jw))
        assert diffs[-1] < 1e-8
    report(
        5,
        f"{len(shapes)} lattices (6-12 spins), max |E_ed - E_jw| = {max(diffs):.2e}",
    )


def test_criterion_6_toric_code():
    """Four-fold degeneracy, 4 j_eff gap, braiding phases, path independence."""
    lat = tc.SquareLattice(2, 2)
    j = tc.j_eff(0.1, 0.1, 1.0)
    h, stars, plaqs = tc.build_toric_hamiltonian(lat, j)
    evals = np.linalg.eigvalsh(h.toarray())
    assert abs(evals[3] - evals[0]) < 1e-10 * j
    assert abs((evals[4] - evals[0]) - 4 * j) < 1e-10
    phase_11 = tc.braiding_phase(lat, 1, 1)
    phase_22 = tc.braiding_phase(lat, 2, 2)
    assert abs(phase_11 + 1.0) < 1e-10
    assert abs(phase_22 - 1.0) < 1e-10
    loops = [
        tc.braiding_phase(lat, 1, 1, wide_loop=False),
        tc.braiding_phase(lat, 1, 1, wide_loop=True),
        tc.braiding_phase(tc.SquareLattice(2, 3), 1, 1, wide_loop=True),
    ]
    assert max(abs(p - loops[0]) for p in loops) < 1e-10
    report(
        6,
        f"degeneracy 4, gap {evals[4]-evals[0]:.3e} = 4 j_eff, "
        f"phases ({phase_11.real:+.1f}, {phase_22.real:+.1f}), {len(loops)} loops agree",
    )


def test_criterion_7_ideal_protocols():
    """pi8 and cz exact in every branch on 100 random inputs; ZZ unbiased."""
    gen = np.random.default_rng(7)
    worst = 1.0
    for _ in range(100):
        vec = haar_vec(2, gen)
        ideal = proto.T_GATE @ vec
        ideal /= np.linalg.norm(ideal)
        reg = enc.register_from_logical(vec, 1)
        branches = proto.enumerate_branches(
            lambda forced: proto.pi8_gate(reg.copy(), proto.magic_a4_state(), None, forced), 4
        )
        assert abs(sum(p for p, _, _ in branches) - 1.0) < 1e-10
        for _, out, _ in branches:
            worst = min(worst, abs(np.vdot(ideal, enc.decode(out))))
    for _ in range(100):
        vec = haar_vec(4, gen)
        ideal = proto.CZ_GATE @ vec
        ideal /= np.linalg.norm(ideal)
        reg = enc.register_from_logical(vec, 2)
        branches = proto.enumerate_branches(
            lambda forced: proto.controlled_phase(reg.copy(), None, forced), 2
        )
        assert abs(sum(p for p, _, _ in branches) - 1.0) < 1e-10
        for _, out, _ in branches:
            worst = min(worst, abs(np.vdot(ideal, enc.decode(out))))
    assert worst > 1 - 1e-9

    # ZZ outcome statistics over 10^4 seeded joint measurements
    rng = fock.RandomSource(2718)
    vec = haar_vec(2, gen)
    joint = fock.tensor_product(
        enc.register_from_logical(vec, 1).state, proto.magic_a4_state()
    )
    n, plus = 10_000, 0
    quad = MajoranaMonomial.from_product((1, 2, 5, 6))
    mean = float(fock.expectation(joint, quad).real)
    p_plus = (1.0 + mean) / 2.0
    assert abs(p_plus - 0.5) < 1e-12
    for _ in range(n):
        plus += rng.uniform() < p_plus
    freq = plus / n
    assert abs(freq - 0.5) <= 0.02
    report(
        7,
        f"100 inputs x all branches: worst overlap 1 - {1-worst:.1e}; "
        f"ZZ(+1) frequency {freq:.4f}",
    )


def test_criterion_8_noise_sweep():
    """Monotone fidelity sweeps; exact 1 - eps for dephasing pi8 on |+>."""
    epsilons = [0.0, 0.05, 0.1, 0.14]
    rows = proto.gate_fidelity_sweep(
        "pi8", epsilons, 1, fock.RandomSource(5), input_state="plus"
    )
    for row in rows:
        assert abs(row["fidelity"] - (1 - row["epsilon"])) < 1e-12
    for kind, model in itertools.product(("pi8", "cz"), ("dephase_to_orthogonal", "depolarize")):
        sweep = proto.gate_fidelity_sweep(
            kind, epsilons, 10, fock.RandomSource(6), noise_model=model
        )
        fids = [r["fidelity"] for r in sweep]
        for a, b in zip(fids, fids[1:]):
            assert b <= a + 1e-9  # exact branch averaging leaves no sampling noise
    report(8, "sweeps monotone for pi8/cz x both noise models; dephasing pi8 |+> = 1 - eps exactly")


def test_criterion_9_clifford_limitation_witness():
    """Braid-only words never entangle a decoded 2-qubit register; CZ does."""
    gen = np.random.default_rng(99)
    pairs = list(itertools.combinations(range(1, 5), 2))

    def schmidt_rank(vec4, tol=1e-8):
        return int(np.sum(np.linalg.svd(vec4.reshape(2, 2), compute_uv=False) > tol))

    max_rank = 1
    for _ in range(1000):
        state = enc.encode_basis([0, 0]).state
        length = int(gen.integers(1, 21))
        for _ in range(length):
            off = 4 * int(gen.integers(0, 2))
            a, b = pairs[gen.integers(len(pairs))]
            theta = -np.pi / 4 if gen.integers(2) else np.pi / 4
            state = fock.apply_pair_rotation(state, a + off, b + off, theta)
        decoded = enc.decode(enc.EncodedRegister(2, state))
        max_rank = max(max_rank, schmidt_rank(decoded))
    assert max_rank == 1

    reg = enc.register_from_logical([1, 1, 1, 1], 2)
    out, _ = proto.controlled_phase(reg, fock.RandomSource(1))
    cz_rank = schmidt_rank(enc.decode(out))
    assert cz_rank > 1
    report(
        9,
        f"1000 braid words of length <= 20: Schmidt rank {max_rank}; "
        f"one controlled-phase on |+,+>: rank {cz_rank}",
    )
