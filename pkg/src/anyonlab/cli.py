"""Thin command-line client for the simulation service.

Each subcommand builds a request model and either runs the handler
in-process (default) or POSTs it to a running service via --url.  All
outputs are deterministic for a fixed seed.

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import NumericalError
from .reporting import csv_lines, stable_json
from .service import handlers
from .service import schemas as sc

USAGE_EXIT = 2
NUMERICAL_EXIT = 3


def _parse_range(text: str) -> sc.Range:
    parts = text.split(":")
    if len(parts) == 1:
        value = float(parts[0])
        return sc.Range(start=value, stop=value, num=1)
    if len(parts) == 3:
        return sc.Range(start=float(parts[0]), stop=float(parts[1]), num=int(parts[2]))
    raise argparse.ArgumentTypeError(f"expected VALUE or START:STOP:NUM, got {text!r}")


def _parse_lattice(text: str) -> sc.LatticeShape:
    try:
        rows, cols = text.lower().split("x")
        return sc.LatticeShape(rows=int(rows), cols=int(cols))
    except Exception:
        raise argparse.ArgumentTypeError(f"expected ROWSxCOLS, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anyonlab",
        description="Majorana braiding, magic-state protocols, and anyon lattice models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, default_format: str) -> None:
        p.add_argument("--seed", type=int, default=0, help="random seed, echoed to output")
        p.add_argument("--out", type=Path, default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("--url", default=None, help="POST to a running service instead")

    p = sub.add_parser("phase-scan", help="classify phases over coupling ranges")
    p.add_argument("--jx", type=_parse_range, required=True, metavar="START:STOP:NUM")
    p.add_argument("--jy", type=_parse_range, required=True, metavar="START:STOP:NUM")
    p.add_argument("--jz", type=_parse_range, required=True, metavar="START:STOP:NUM")
    p.add_argument("--grid-n", type=int, default=41)
    p.add_argument("--refine", type=int, default=4, help="min-gap refinement rounds")
    common(p, "csv")

    p = sub.add_parser("spectrum", help="dump the quasiparticle dispersion over the BZ")
    for name in ("jx", "jy", "jz"):
        p.add_argument(f"--{name}", type=float, default=1.0)
    for name in ("hx", "hy", "hz"):
        p.add_argument(f"--{name}", type=float, default=0.0)
    p.add_argument("--grid-n", type=int, default=32)
    common(p, "csv")

    p = sub.add_parser("ed-verify", help="cross-check exact diagonalization vs quadratic form")
    p.add_argument(
        "--lattice",
        type=_parse_lattice,
        action="append",
        required=True,
        metavar="ROWSxCOLS",
        dest="lattices",
    )
    for name in ("jx", "jy", "jz"):
        p.add_argument(f"--{name}", type=float, default=1.0)
    p.add_argument("--tolerance", type=float, default=1e-8)
    common(p, "json")

    p = sub.add_parser("braid-run", help="execute a braid program on encoded qubits")
    p.add_argument("program", type=Path, help="braid program file (B i j / Binv i j / #)")
    p.add_argument("--qubits", type=int, default=1)
    p.add_argument("--bits", default=None, help="initial logical bits, e.g. 01")
    p.add_argument("--state-out", type=Path, default=None, help="write raw state JSON here")
    common(p, "json")

    p = sub.add_parser("protocol", help="fidelity sweep for the pi8 or cz protocol")
    p.add_argument("--kind", choices=("pi8", "cz"), required=True)
    p.add_argument(
        "--epsilon",
        type=float,
        action="append",
        dest="epsilons",
        help="ancilla infidelity; repeatable",
    )
    p.add_argument("--trials", type=int, default=100)
    p.add_argument(
        "--noise-model",
        choices=("dephase_to_orthogonal", "depolarize"),
        default="dephase_to_orthogonal",
    )
    p.add_argument("--input", choices=("random", "plus"), default="random")
    p.add_argument("--method", choices=("exact", "sampled"), default="sampled")
    p.add_argument("--emit-runs", type=int, default=0, help="include this many per-run reports")
    common(p, "json")

    p = sub.add_parser("toric-braid", help="braiding phase of charge and flux clusters")
    p.add_argument("--lx", type=int, default=2)
    p.add_argument("--ly", type=int, default=2)
    p.add_argument("--charges", type=int, default=1)
    p.add_argument("--fluxes", type=int, default=1)
    p.add_argument("--wide-loop", action="store_true", help="use a larger enclosing loop")
    common(p, "json")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


_ENDPOINTS = {
    "phase-scan": ("/phase-scan", sc.PhaseScanRequest, sc.PhaseScanResponse, handlers.run_phase_scan),
    "spectrum": ("/spectrum", sc.SpectrumRequest, sc.SpectrumResponse, handlers.run_spectrum),
    "ed-verify": ("/ed-verify", sc.EdVerifyRequest, sc.EdVerifyResponse, handlers.run_ed_verify),
    "braid-run": ("/braid-run", sc.BraidRunRequest, sc.BraidRunResponse, handlers.run_braid),
    "protocol": ("/protocol", sc.ProtocolRequest, sc.ProtocolResponse, handlers.run_protocol),
    "toric-braid": ("/toric-braid", sc.ToricBraidRequest, sc.ToricBraidResponse, handlers.run_toric_braid),
}


def _build_request(args: argparse.Namespace):
    cmd = args.command
    if cmd == "phase-scan":
        return sc.PhaseScanRequest(
            jx=args.jx, jy=args.jy, jz=args.jz,
            grid_n=args.grid_n, refine_rounds=args.refine, seed=args.seed,
        )
    if cmd == "spectrum":
        return sc.SpectrumRequest(
            jx=args.jx, jy=args.jy, jz=args.jz,
            hx=args.hx, hy=args.hy, hz=args.hz,
            grid_n=args.grid_n, seed=args.seed,
        )
    if cmd == "ed-verify":
        return sc.EdVerifyRequest(
            lattices=args.lattices, jx=args.jx, jy=args.jy, jz=args.jz,
            tolerance=args.tolerance, seed=args.seed,
        )
    if cmd == "braid-run":
        bits = [int(b) for b in args.bits] if args.bits is not None else None
        return sc.BraidRunRequest(
            program=args.program.read_text(),
            qubits=args.qubits,
            initial_bits=bits,
            seed=args.seed,
            include_state=args.state_out is not None,
        )
    if cmd == "protocol":
        return sc.ProtocolRequest(
            kind=args.kind,
            epsilons=args.epsilons if args.epsilons else [0.0],
            trials=args.trials,
            seed=args.seed,
            noise_model=args.noise_model,
            input_state=args.input,
            method=args.method,
            emit_runs=args.emit_runs,
        )
    if cmd == "toric-braid":
        return sc.ToricBraidRequest(
            lx=args.lx, ly=args.ly, charges=args.charges, fluxes=args.fluxes,
            wide_loop=args.wide_loop, seed=args.seed,
        )
    raise ValueError(f"unknown command {cmd!r}")


def _execute(args: argparse.Namespace, request):
    path, _, response_model, local = _ENDPOINTS[args.command]
    if args.url is None:
        return local(request)
    import httpx

    reply = httpx.post(args.url.rstrip("/") + path, json=request.model_dump(), timeout=600.0)
    if reply.status_code >= 500:
        raise NumericalError(f"service error {reply.status_code}: {reply.text}")
    if reply.status_code >= 400:
        raise ValueError(f"service rejected request ({reply.status_code}): {reply.text}")
    return response_model.model_validate(reply.json())


def _render(args: argparse.Namespace, response) -> str:
    cmd = args.command
    if args.format == "csv":
        seed_comment = [f"seed={response.seed}"]
        if cmd == "phase-scan":
            return csv_lines(
                ("Jx", "Jy", "Jz", "label", "min_gap"),
                [(r.jx, r.jy, r.jz, r.label, r.min_gap) for r in response.rows],
                comments=seed_comment,
            )
        if cmd == "spectrum":
            return csv_lines(
                ("qx", "qy", "eps", "delta", "delta_tilde", "energy"),
                [
                    (r.qx, r.qy, r.eps, r.delta, r.delta_tilde, r.energy)
                    for r in response.rows
                ],
                comments=seed_comment,
            )
        if cmd == "ed-verify":
            return csv_lines(
                (
                    "rows", "cols", "n_spins", "max_commutator_norm",
                    "ed_ground_energy", "jw_ground_energy", "abs_difference", "ok",
                ),
                [
                    (
                        r.rows, r.cols, r.n_spins, r.max_commutator_norm,
                        r.ed_ground_energy, r.jw_ground_energy, r.abs_difference, r.ok,
                    )
                    for r in response.rows
                ],
                comments=seed_comment,
            )
        raise ValueError(f"{cmd} has no CSV form; use --format json")
    return stable_json(response.model_dump())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    try:
        request = _build_request(args)
        response = _execute(args, request)
        text = _render(args, response)
        if args.command == "braid-run" and args.state_out is not None:
            if response.state is None:
                raise NumericalError("service response carried no state dump")
            args.state_out.write_text(stable_json(response.state))
    except NumericalError as exc:
        print(f"anyonlab: numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_EXIT
    except ValueError as exc:
        print(f"anyonlab: {exc}", file=sys.stderr)
        return USAGE_EXIT
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
    if args.command == "ed-verify" and not response.all_ok:
        print("anyonlab: ed-verify found disagreements beyond tolerance", file=sys.stderr)
        return NUMERICAL_EXIT
    return 0


if __name__ == "__main__":
    sys.exit(main())
