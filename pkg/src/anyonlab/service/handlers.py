"""Request handlers shared by the HTTP endpoints and the local CLI path.

Every handler is a pure function from a request model to a response
model; all randomness flows through the request seed.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse.linalg as spla

from .. import fock_simulator as fock
from .. import honeycomb as hc
from .. import protocols as proto
from .. import qubit_encoding as enc
from .. import toric_code as tc
from ..majorana_algebra import SignedPauli, parse_braid_program, pauli_image
from . import schemas as sc


def _linspace(r: sc.Range) -> np.ndarray:
    return np.linspace(r.start, r.stop, r.num)


def run_phase_scan(req: sc.PhaseScanRequest) -> sc.PhaseScanResponse:
    rows = []
    for jx in _linspace(req.jx):
        for jy in _linspace(req.jy):
            for jz in _linspace(req.jz):
                label = hc.classify_phase(jx, jy, jz)
                gap, _ = hc.bz_min_gap(
                    hc.HoneycombCouplings(jx, jy, jz), req.grid_n, req.refine_rounds
                )
                rows.append(
                    sc.PhaseScanRow(
                        jx=float(jx), jy=float(jy), jz=float(jz), label=label, min_gap=gap
                    )
                )
    return sc.PhaseScanResponse(seed=req.seed, grid_n=req.grid_n, rows=rows)


def run_spectrum(req: sc.SpectrumRequest) -> sc.SpectrumResponse:
    c = hc.HoneycombCouplings(req.jx, req.jy, req.jz, req.hx, req.hy, req.hz)
    qs = np.linspace(-np.pi, np.pi, req.grid_n, endpoint=False)
    rows = []
    for qx in qs:
        for qy in qs:
            s = hc.dispersion(c, float(qx), float(qy))
            rows.append(
                sc.SpectrumRow(
                    qx=s.qx,
                    qy=s.qy,
                    eps=s.eps,
                    delta=s.delta,
                    delta_tilde=s.delta_tilde,
                    energy=s.energy,
                )
            )
    return sc.SpectrumResponse(seed=req.seed, rows=rows)


def run_ed_verify(req: sc.EdVerifyRequest) -> sc.EdVerifyResponse:
    c = hc.HoneycombCouplings(req.jx, req.jy, req.jz)
    rows = []
    for shape in req.lattices:
        lat = hc.LatticeSpec(shape.rows, shape.cols)
        h, plaqs = hc.build_spin_hamiltonian(lat, c)
        comm = max(
            (float(spla.norm(h @ w - w @ h)) for w in plaqs), default=0.0
        )
        ed = hc.spin_ground_energy_in_sector(lat, c)
        jw = hc.vortex_free_ground_energy(lat, c)
        diff = abs(ed - jw)
        rows.append(
            sc.EdVerifyRow(
                rows=shape.rows,
                cols=shape.cols,
                n_spins=lat.n_sites,
                max_commutator_norm=comm,
                ed_ground_energy=ed,
                jw_ground_energy=jw,
                abs_difference=diff,
                ok=bool(diff <= req.tolerance and comm <= 1e-12),
            )
        )
    return sc.EdVerifyResponse(seed=req.seed, rows=rows, all_ok=all(r.ok for r in rows))


def run_braid(req: sc.BraidRunRequest) -> sc.BraidRunResponse:
    word = parse_braid_program(req.program)
    bits = req.initial_bits if req.initial_bits is not None else [0] * req.qubits
    if len(bits) != req.qubits:
        raise ValueError(f"initial_bits must list {req.qubits} bits")
    reg = enc.encode_basis(bits)
    reg = enc.apply_logical(reg, word)
    decoded = enc.decode(reg)
    frame = {}
    for q in range(1, req.qubits + 1):
        for letter in ("X", "Z"):
            image = pauli_image(word, SignedPauli.from_map({q: letter}), req.qubits)
            frame[f"{letter}{q}"] = repr(image)
    return sc.BraidRunResponse(
        seed=req.seed,
        qubits=req.qubits,
        n_generators=len(word),
        final_logical_amplitudes=[[float(a.real), float(a.imag)] for a in decoded],
        measurements=[],
        pauli_frame=frame,
        constraint_expectations=[
            reg.constraint_expectation(q) for q in range(1, req.qubits + 1)
        ],
        state=fock.state_to_json_dict(reg.state) if req.include_state else None,
    )


def run_protocol(req: sc.ProtocolRequest) -> sc.ProtocolResponse:
    rng = fock.RandomSource(req.seed)
    rows = proto.gate_fidelity_sweep(
        req.kind,
        req.epsilons,
        req.trials,
        rng,
        noise_model=req.noise_model,
        input_state=req.input_state,
        method=req.method,
    )
    runs: list[sc.ProtocolRunReport] = []
    if req.emit_runs > 0:
        run_rng = fock.RandomSource(req.seed + 1)
        gen = run_rng.generator
        for k in range(req.emit_runs):
            eps = req.epsilons[k % len(req.epsilons)]
            model = req.noise_model if eps > 0 else "none"
            if req.kind == "pi8":
                vec = gen.normal(size=2) + 1j * gen.normal(size=2)
                vec /= np.linalg.norm(vec)
                ancilla = proto.prepare_a4(proto.AncillaSpec("a4", eps, model))
                reg, trace = proto.pi8_gate(
                    enc.register_from_logical(vec, 1), ancilla, run_rng
                )
                ideal = proto.T_GATE @ vec
            else:
                vec = gen.normal(size=4) + 1j * gen.normal(size=4)
                vec /= np.linalg.norm(vec)
                errors = proto.cz_error_ensemble(eps, req.noise_model)
                u = run_rng.uniform()
                acc, ins = 0.0, None
                for w, cand in errors:
                    acc += w
                    if u < acc:
                        ins = cand
                        break
                reg, trace = proto.controlled_phase(
                    enc.register_from_logical(vec, 2), run_rng, error_insertion=ins
                )
                ideal = proto.CZ_GATE @ vec
            ideal = ideal / np.linalg.norm(ideal)
            n_q = 1 if req.kind == "pi8" else 2
            fid = proto.register_fidelity(ideal, n_q, reg)
            runs.append(
                sc.ProtocolRunReport(
                    protocol=req.kind,
                    seed=req.seed,
                    epsilon=float(eps),
                    outcomes=[
                        sc.MeasurementReport(
                            label=ev.label, outcome=ev.outcome, probability=ev.probability
                        )
                        for ev in trace.outcomes
                    ],
                    branch_probability=trace.branch_probability,
                    fidelity=fid,
                )
            )
    return sc.ProtocolResponse(
        kind=req.kind,
        seed=req.seed,
        noise_model=req.noise_model,
        input_state=req.input_state,
        method=req.method,
        rows=[sc.SweepRow(**r) for r in rows],
        runs=runs,
    )


def run_toric_braid(req: sc.ToricBraidRequest) -> sc.ToricBraidResponse:
    lat = tc.SquareLattice(req.lx, req.ly)
    phase = tc.braiding_phase(lat, req.charges, req.fluxes, wide_loop=req.wide_loop)
    return sc.ToricBraidResponse(
        seed=req.seed,
        charges=req.charges,
        fluxes=req.fluxes,
        phase_re=float(phase.real),
        phase_im=float(phase.imag),
    )
