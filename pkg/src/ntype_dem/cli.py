"""Command-line front end: ``ntype-dem {evolve,steady,sweep,dressed,compare}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .analytic import compare_analytic_numeric
from .config import ConfigError, RunConfig, dump_config, load_config
from .dynamics import (
    ConvergenceError,
    DegenerateSteadyStateError,
    IntegrationError,
    evolve,
    steady_state_evolve,
    steady_state_linear,
)
from .model import COHERENCES, ParameterError, SystemParams, hamiltonian_resonant
from .observables import DegenerateBasisError, dressed_basis, populations, von_neumann_dem
from .output import metadata_lines, render, render_gnuplot_matrix, write_text
from .sweep import run_sweep

log = logging.getLogger("ntype_dem")

BARE_COLUMNS = [f"rho{i}{i}" for i in range(1, 5)]
COHERENCE_COLUMNS = [
    f"{part}_rho{i + 1}{j + 1}" for i, j in COHERENCES for part in ("re", "im")
]


def _state_row(m: np.ndarray) -> list[float]:
    row = [m[i, i].real for i in range(4)]
    for i, j in COHERENCES:
        row += [m[i, j].real, m[i, j].imag]
    return row


def _dressed_applicable(p: SystemParams) -> bool:
    return p.rabi_31 == p.rabi_32 and p.rabi_31 > 0 and p.rabi_41 > 0


def evolve_table(cfg: RunConfig):
    params = cfg.system_params()
    traj = evolve(params, cfg.initial_rho(), cfg.integrator())
    basis = dressed_basis(params.rabi_31, params.rabi_41) if _dressed_applicable(params) else None
    columns = ["t", "DEM"] + BARE_COLUMNS
    if basis is not None:
        columns += [f"P_D{k}" for k in range(1, 5)]
    columns += COHERENCE_COLUMNS
    rows = []
    for t, state in zip(traj.times, traj.states):
        row = [t, von_neumann_dem(state)] + [state.matrix[i, i].real for i in range(4)]
        if basis is not None:
            row += list(populations(state, basis))
        row += _state_row(state.matrix)[4:]
        rows.append(row)
    extra = {}
    if basis is not None:
        extra["dressed_order"] = " ".join(f"P_D{k + 1}={lab}" for k, lab in enumerate(basis.labels))
    return columns, rows, extra


def cmd_evolve(cfg: RunConfig, args) -> str:
    columns, rows, extra = evolve_table(cfg)
    return render(cfg.format, columns, rows, metadata_lines("evolve", cfg, extra))


def cmd_steady(cfg: RunConfig, args) -> str:
    params = cfg.system_params()
    try:
        state, route = steady_state_linear(params), "linear"
    except DegenerateSteadyStateError:
        state, route = steady_state_evolve(params, cfg.initial_rho(), cfg.steady_tol), "evolve"
    m = state.matrix
    columns = ["route", "DEM"] + BARE_COLUMNS + COHERENCE_COLUMNS
    row = [route, von_neumann_dem(state)] + _state_row(m)
    return render(cfg.format, columns, [row], metadata_lines("steady", cfg))


def cmd_sweep(cfg: RunConfig, args) -> str:
    grid = run_sweep(
        cfg.omega_values(),
        cfg.delta_values(),
        template=cfg.system_params(),
        workers=args.threads,
        steady_tol=cfg.steady_tol,
    )
    meta = metadata_lines("sweep", cfg)
    for err in grid.errors:
        log.warning("sweep cell failed: %s", err)
    rows = [[w, d, v, ok] for w, d, v, ok in grid.cells()]
    text = render(cfg.format, ["omega", "delta", "dem", "converged"], rows, meta)
    if args.out and args.out != "-":
        matrix_path = Path(args.out).with_suffix(".matrix")
        write_text(matrix_path, render_gnuplot_matrix(grid.delta_axis, grid.omega_axis, grid.dem, meta))
    return text


def cmd_compare(cfg: RunConfig, args) -> str:
    table = compare_analytic_numeric(cfg.omega_values(), cfg.system_params(), workers=args.threads or 1)
    rows = [
        [r.omega, r.dem_numeric, r.dem_analytic, r.abs_diff, r.analytic_valid] for r in table
    ]
    columns = ["omega", "dem_numeric", "dem_analytic", "abs_diff", "analytic_valid"]
    return render(cfg.format, columns, rows, metadata_lines("compare", cfg))


def cmd_dressed(cfg: RunConfig, args) -> str:
    omega3 = cfg.rabi_31 if args.omega3 is None else args.omega3
    omega41 = cfg.rabi_41 if args.omega41 is None else args.omega41
    basis = dressed_basis(omega3, omega41)
    h = hamiltonian_resonant(SystemParams(rabi_31=omega3, rabi_32=omega3, rabi_41=omega41))
    v = basis.vectors
    diag = v.conj().T @ h @ v
    offdiag = float(np.max(np.abs(diag - np.diag(np.diag(diag)))))
    columns = ["state", "label", "energy", "c1", "c2", "c3", "c4"]
    rows = [
        [f"P_D{k + 1}", basis.labels[k], basis.energies[k]] + [c.real for c in v[:, k]]
        for k in range(4)
    ]
    extra = {
        "omega3": omega3,
        "omega41": omega41,
        "A": basis.A,
        "B": basis.B,
        "C": basis.C,
        "hamiltonian_eigenvalues": " ".join(f"{e:.9g}" for e in np.linalg.eigvalsh(h)),
        "gram_residual": f"{basis.gram_residual():.3e}",
        "offdiag_residual": f"{offdiag:.3e}",
    }
    return render(cfg.format, columns, rows, metadata_lines("dressed", None, extra))


COMMANDS = {
    "evolve": cmd_evolve,
    "steady": cmd_steady,
    "sweep": cmd_sweep,
    "dressed": cmd_dressed,
    "compare": cmd_compare,
}


def _parse_set(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ntype-dem",
        description="Atom-photon entanglement in a driven four-level N-type atom (units of gamma).",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--out", help="output path ('-' or omitted: stdout)")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--threads", type=int, default=None, help="worker processes for sweep/compare")
    parser.add_argument("--seed", type=int, default=None, help="reserved; all computation is deterministic")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    parser.add_argument("--omega3", type=float, help="dressed: common rabi_31 = rabi_32")
    parser.add_argument("--omega41", type=float, help="dressed: rabi_41")
    parser.add_argument("--dump-config", action="store_true", help="print the resolved config and exit")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        overrides = _parse_set(args.set)
        if args.format:
            overrides["format"] = args.format
        if args.out:
            overrides["out"] = args.out
        cfg = load_config(args.config, overrides)
        if args.dump_config:
            sys.stdout.write(dump_config(cfg))
            return 0
        if args.out is None and cfg.out:
            args.out = cfg.out
        if args.threads is not None and args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.threads is None and args.command == "sweep":
            args.threads = os.cpu_count() or 1
        text = COMMANDS[args.command](cfg, args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        DegenerateBasisError,
        DegenerateSteadyStateError,
        ConvergenceError,
        IntegrationError,
        ParameterError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    write_text(args.out, text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
