"""Command-line front end: ``gkpkit {convert|wavefunction|wigner|sweep|selftest}``.

Every command writes a table.  CSV output has a header row and prints
floats with 17 significant digits, so values round-trip exactly and
identical configurations give byte-identical files.  JSON output is an
object ``{"columns": [...], "rows": [[...], ...], "meta": {...}}``.

Exit codes: 0 success, 1 self-test failure, 2 invalid input, 3 I/O failure.

Sweep points are evaluated on a thread pool whose size is capped by the
``GKPKIT_THREADS`` environment variable; rows are always written in axis
order.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .observables import avg_photon, inner_product, normalization, photon_estimate
from .params import (Approx1Params, Approx2Params, Approx3Params, CodeLabel, ParameterRangeError,
                     StandardParams, SymmetricParams, approx1_from_standard, approx2_from_approx1,
                     db_from_sigma2, remark1_convert, sigma2_from_db, standard_from_approx1,
                     standard_from_approx2, standard_from_approx3, theorem1_parameters)
from .states import momentum_amplitude, position_amplitude
from .theta import SeriesControl, ThetaConvergenceError
from .wigner import PhaseSpaceGrid, wigner_grid

EXIT_OK, EXIT_SELFTEST, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3
SWEEP_QUANTITIES = ("overlap", "photon", "normalization")


class InputError(ValueError):
    """Invalid command-line input; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every command."""

    tol: float = 1e-16
    max_terms: int = 2000
    output_path: str = "-"
    format: str = "csv"

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise InputError(f"--tol must be > 0, got {self.tol!r}")
        if self.max_terms < 1:
            raise InputError(f"--max-terms must be >= 1, got {self.max_terms!r}")
        if self.format not in ("csv", "json"):
            raise InputError(f"--format must be csv or json, got {self.format!r}")

    @property
    def ctrl(self) -> SeriesControl:
        return SeriesControl(self.tol, self.max_terms)


@dataclass(frozen=True)
class SweepSpec:
    """Observable sweep over the squeezing level of the symmetric code."""

    quantity: str
    d: int
    j: int
    j_prime: int
    db_min: float
    db_max: float
    db_steps: int

    def __post_init__(self) -> None:
        if self.quantity not in SWEEP_QUANTITIES:
            raise InputError(f"quantity must be one of {SWEEP_QUANTITIES}, got {self.quantity!r}")
        if not 0 < self.db_min < self.db_max:
            raise InputError(f"sweep needs 0 < db_min < db_max, got {self.db_min!r}, {self.db_max!r}")
        if self.db_steps < 2:
            raise InputError(f"db_steps must be >= 2, got {self.db_steps!r}")
        CodeLabel(self.d, self.j)
        CodeLabel(self.d, self.j_prime)

    @property
    def levels(self) -> np.ndarray:
        return np.linspace(self.db_min, self.db_max, self.db_steps)


@dataclass
class Table:
    """Column names, rows and metadata of one command's output."""

    columns: List[str]
    rows: List[List[Any]]
    meta: Dict[str, Any]


def format_float(x: float) -> str:
    """Seventeen significant digits, enough to round-trip a double."""
    return format(float(x), ".17g")


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def render_csv(table: Table) -> str:
    lines = [",".join(table.columns)]
    lines.extend(",".join(_cell(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def render_json(table: Table) -> str:
    def clean(v):
        if isinstance(v, (float, np.floating)):
            # JSON has no literal for non-finite floats; keep them as strings.
            return float(v) if math.isfinite(v) else format_float(v)
        if isinstance(v, np.integer):
            return int(v)
        return v

    rows = [[clean(v) for v in row] for row in table.rows]
    meta = {k: clean(v) for k, v in table.meta.items()}
    return json.dumps({"columns": table.columns, "rows": rows, "meta": meta}, indent=1) + "\n"


def write_table(table: Table, cfg: RunConfig) -> None:
    text = render_csv(table) if cfg.format == "csv" else render_json(table)
    if cfg.output_path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def thread_count() -> int:
    """Worker threads for sweeps: ``GKPKIT_THREADS`` if set, else the CPU count."""
    raw = os.environ.get("GKPKIT_THREADS")
    if raw is None or raw == "":
        return max(1, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"GKPKIT_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise InputError(f"GKPKIT_THREADS must be a positive integer, got {raw!r}")
    return value


# -- state parameters -------------------------------------------------------

def _add_state_arguments(parser: argparse.ArgumentParser, with_approx: bool) -> None:
    group = parser.add_argument_group("code state")
    group.add_argument("--d", type=int, default=2, help="logical dimension (default 2)")
    group.add_argument("--j", type=int, default=0, help="logical index (default 0)")
    form = group.add_mutually_exclusive_group()
    form.add_argument("--symmetric", action="store_true",
                      help="symmetric code given by --sigma2 or --db (the default form)")
    form.add_argument("--standard", action="store_true",
                      help="standard form given by --sigma-q2, --sigma-p2, --gamma-spacing")
    if with_approx:
        form.add_argument("--approx1", action="store_true", help="Approximation 1: --kappa, --Delta")
        form.add_argument("--approx2", action="store_true", help="Approximation 2: --gamma, --delta")
        form.add_argument("--approx3", action="store_true", help="Approximation 3: --beta")
    group.add_argument("--sigma2", type=float, help="spike variance of the symmetric code")
    group.add_argument("--db", type=float, help="squeezing level of the symmetric code in dB")
    group.add_argument("--sigma-q2", type=float, help="position spike variance")
    group.add_argument("--sigma-p2", type=float, help="momentum spike variance")
    group.add_argument("--gamma-spacing", type=float, help="position comb period")
    if with_approx:
        group.add_argument("--kappa", type=float, help="Approximation-1 envelope parameter")
        group.add_argument("--Delta", type=float, help="Approximation-1 spike width")
        group.add_argument("--gamma", type=float, help="Approximation-2 momentum smearing")
        group.add_argument("--delta", type=float, help="Approximation-2 position smearing")
        group.add_argument("--beta", type=float, help="Approximation-3 damping parameter")
        group.add_argument("--alpha", type=float,
                           help="lattice unit of the approximation (default sqrt(2 pi / d))")


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = ["--" + n.replace("_", "-") for n in names if getattr(args, n, None) is None]
    if missing:
        raise InputError(f"missing required option(s): {', '.join(missing)}")


def _symmetric_sigma2(args: argparse.Namespace) -> float:
    if (args.sigma2 is None) == (args.db is None):
        raise InputError("the symmetric code needs exactly one of --sigma2 or --db")
    return args.sigma2 if args.sigma2 is not None else sigma2_from_db(args.db)


def resolve_state(args: argparse.Namespace):
    """Parsed arguments to ``(input_params, StandardParams)``."""
    label = CodeLabel(args.d, args.j)
    if getattr(args, "approx1", False):
        _require(args, "kappa", "Delta")
        p = Approx1Params(args.kappa, args.Delta, args.alpha, label)
        return p, standard_from_approx1(p)
    if getattr(args, "approx2", False):
        _require(args, "gamma", "delta")
        p = Approx2Params(args.gamma, args.delta, args.alpha, label)
        return p, standard_from_approx2(p)
    if getattr(args, "approx3", False):
        _require(args, "beta")
        p = Approx3Params(args.beta, args.alpha, label)
        return p, standard_from_approx3(p)
    if args.standard:
        _require(args, "sigma_q2", "sigma_p2", "gamma_spacing")
        p = StandardParams(args.sigma_q2, args.sigma_p2, args.gamma_spacing, label)
        return p, p
    p = SymmetricParams(_symmetric_sigma2(args), label)
    return p, p.to_standard()


# -- commands ---------------------------------------------------------------

def cmd_convert(args: argparse.Namespace, cfg: RunConfig) -> Table:
    """All equivalent parametrisations of one codeword.

    Rows are ``(group, name, value)``.  The Approximation-1 and 2 rows
    describe the same state as the input; the Approximation-3 row describes
    it after the squeeze ``zeta`` of row ``squeeze.zeta``.  When the input is
    Approximation 3, a ``theorem1`` group lists the Approximation-1 and 2
    parameters for which all three approximations coincide (see
    ``theorem1_parameters``).
    """
    source, std = resolve_state(args)
    a1 = approx1_from_standard(std)
    a2 = approx2_from_approx1(a1)
    _, zeta, a3 = remark1_convert(a2)
    rows: List[List[Any]] = [
        ["label", "d", std.label.d],
        ["label", "j", std.label.j],
        ["standard", "sigma_q2", std.sigma_q2],
        ["standard", "sigma_p2", std.sigma_p2],
        ["standard", "gamma_spacing", std.gamma_spacing],
        ["standard", "Lambda", std.Lambda],
    ]
    if math.isclose(std.sigma_q2, std.sigma_p2, rel_tol=1e-14):
        rows.append(["standard", "level_db", db_from_sigma2(std.sigma_q2)])
    rows += [
        ["approx1", "kappa", a1.kappa],
        ["approx1", "Delta", a1.delta_sq_param],
        ["approx1", "alpha", a1.alpha],
        ["approx2", "gamma", a2.gamma],
        ["approx2", "delta", a2.delta],
        ["approx2", "alpha", a2.alpha],
        ["squeeze", "zeta", zeta],
        ["approx3", "beta", a3.beta],
        ["approx3", "alpha", a3.alpha],
    ]
    if isinstance(source, Approx3Params):
        kappa, Delta, gamma, delta = theorem1_parameters(source.beta)
        rows += [["theorem1", "kappa", kappa], ["theorem1", "Delta", Delta],
                 ["theorem1", "gamma", gamma], ["theorem1", "delta", delta],
                 ["theorem1", "squeeze", math.cosh(source.beta)]]
    return Table(["group", "name", "value"], rows,
                 {"command": "convert", "input": type(source).__name__})


def _axis(lo: Optional[float], hi: Optional[float], span: float, period: float, points: int):
    if points < 2:
        raise InputError(f"--points must be >= 2, got {points}")
    lo = -span * period if lo is None else lo
    hi = span * period if hi is None else hi
    if not lo < hi:
        raise InputError(f"axis bounds must satisfy min < max, got {lo!r}, {hi!r}")
    return np.linspace(lo, hi, points)


def cmd_wavefunction(args: argparse.Namespace, cfg: RunConfig) -> Table:
    """Position or momentum amplitude on a uniform grid, schema ``x,re,im``."""
    _, std = resolve_state(args)
    if args.representation == "position":
        period = std.gamma_spacing
        x = _axis(args.x_min, args.x_max, args.span, period, args.points)
        values = np.asarray(position_amplitude(std, x, True, cfg.ctrl, args.route), dtype=complex)
    else:
        period = 2.0 * math.pi * std.Lambda / std.gamma_spacing
        x = _axis(args.x_min, args.x_max, args.span, period, args.points)
        values = np.asarray(momentum_amplitude(std, x, True, cfg.ctrl, args.route), dtype=complex)
    rows = [[float(a), float(v.real), float(v.imag)] for a, v in zip(x, values)]
    return Table(["x", "re", "im"], rows, _state_meta("wavefunction", std, cfg,
                                                      representation=args.representation,
                                                      route=args.route))


def cmd_wigner(args: argparse.Namespace, cfg: RunConfig) -> Table:
    """Wigner function of ``|j><j'|`` on a grid, schema ``q,p,re,im``.

    Rows run over ``q`` (outer) and ``p`` (inner), both ascending.  Values are
    point samples without cell-area weights.
    """
    _, std = resolve_state(args)
    j_prime = std.label.j if args.j_prime is None else args.j_prime
    CodeLabel(std.label.d, j_prime)
    q = _axis(args.q_min, args.q_max, args.span, std.gamma_spacing, args.nq)
    p = _axis(args.p_min, args.p_max, args.span, std.gamma_spacing, args.np)
    grid = PhaseSpaceGrid(float(q[0]), float(q[-1]), float(p[0]), float(p[-1]), args.nq, args.np)
    values = wigner_grid(std, std.label.j, j_prime, grid, cfg.ctrl, args.route)
    qv, pv = grid.q_values, grid.p_values
    rows = [[float(qv[a]), float(pv[b]), float(values[a, b].real), float(values[a, b].imag)]
            for a in range(len(qv)) for b in range(len(pv))]
    return Table(["q", "p", "re", "im"], rows,
                 _state_meta("wigner", std, cfg, j_prime=j_prime, route=args.route))


def sweep_point(spec: SweepSpec, level_db: float, ctrl: SeriesControl) -> List[float]:
    """One sweep row ``[db, sigma2, value(, estimate)]``."""
    sigma2 = sigma2_from_db(level_db)
    p = SymmetricParams(sigma2, CodeLabel(spec.d, spec.j)).to_standard()
    if spec.quantity == "overlap":
        overlap = abs(inner_product(p, spec.j, spec.j_prime, ctrl))
        return [level_db, sigma2, -math.log(overlap) if overlap > 0 else math.inf]
    if spec.quantity == "photon":
        return [level_db, sigma2, avg_photon(p, "theta_formula", ctrl).n_avg, photon_estimate(sigma2)]
    return [level_db, sigma2, normalization(p, ctrl)]


def cmd_sweep(args: argparse.Namespace, cfg: RunConfig) -> Table:
    """Observable against squeezing level, schema ``db,sigma2,value[,estimate]``.

    ``overlap`` reports ``-ln|<j'|j>|``, ``photon`` the average photon number
    with the large-squeezing estimate, ``normalization`` the constant
    ``N_j``.
    """
    spec = SweepSpec(args.quantity, args.d, args.j, args.j_prime, args.db_min, args.db_max,
                     args.db_steps)
    levels = [float(x) for x in spec.levels]
    ctrl = cfg.ctrl
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        rows = list(pool.map(lambda db: sweep_point(spec, db, ctrl), levels))
    columns = ["db", "sigma2", "value"] + (["estimate"] if spec.quantity == "photon" else [])
    return Table(columns, rows, {"command": "sweep", "quantity": spec.quantity, "d": spec.d,
                                 "j": spec.j, "j_prime": spec.j_prime, "tol": cfg.tol,
                                 "max_terms": cfg.max_terms})


def cmd_selftest(args: argparse.Namespace, cfg: RunConfig) -> Table:
    """Run the built-in checks; rows are ``check_name,residual,tolerance,pass``."""
    from .selftest import run_checks

    only = [item for chunk in (args.only or []) for item in chunk.split(",") if item]
    try:
        results = run_checks(cfg.ctrl, only or None, args.check_tol)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rows = [[r.check_name, r.residual, r.tolerance, "true" if r.passed else "false"] for r in results]
    return Table(["check_name", "residual", "tolerance", "pass"], rows,
                 {"command": "selftest", "all_pass": all(r.passed for r in results),
                  "checks": len(results), "seconds": round(sum(r.seconds for r in results), 3)})


def _state_meta(command: str, std: StandardParams, cfg: RunConfig, **extra) -> Dict[str, Any]:
    meta = {"command": command, "d": std.label.d, "j": std.label.j, "sigma_q2": std.sigma_q2,
            "sigma_p2": std.sigma_p2, "gamma_spacing": std.gamma_spacing, "tol": cfg.tol,
            "max_terms": cfg.max_terms}
    meta.update(extra)
    return meta


# -- parser -----------------------------------------------------------------

def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    parser.add_argument("--tol", type=float, default=default(1e-16),
                        help="series truncation tolerance relative to the largest term (default 1e-16)")
    parser.add_argument("--max-terms", type=int, default=default(2000),
                        help="cap on the one-sided summation range (default 2000)")
    parser.add_argument("--out", default=default("-"), help="output file, '-' for stdout (default)")
    parser.add_argument("--format", choices=("csv", "json"), default=default("csv"),
                        help="output format (default csv)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkpkit",
        allow_abbrev=False,
        description="Approximate GKP code states through theta-function closed forms.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""examples:
  gkpkit convert --approx3 --beta 0.2 --d 2
  gkpkit wavefunction --db 10 --d 2 --points 601 --out psi.csv
  gkpkit wigner --sigma2 0.05 --d 2 --nq 201 --np 201 --out wigner.csv
  gkpkit sweep --quantity photon --d 2 --db-min 2 --db-max 18 --db-steps 33
  gkpkit selftest --only theta
""")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("convert", parents=[common], allow_abbrev=False, help="convert between parametrisations")
    _add_state_arguments(p, with_approx=True)
    p.set_defaults(handler=cmd_convert)

    p = sub.add_parser("wavefunction", parents=[common], allow_abbrev=False, help="sample a wave function")
    _add_state_arguments(p, with_approx=True)
    p.add_argument("--representation", choices=("position", "momentum"), default="position")
    p.add_argument("--points", type=int, default=601, help="number of samples (default 601)")
    p.add_argument("--span", type=float, default=3.0,
                   help="half-width of the window in comb periods (default 3)")
    p.add_argument("--x-min", type=float, help="explicit lower bound, overrides --span")
    p.add_argument("--x-max", type=float, help="explicit upper bound, overrides --span")
    p.add_argument("--route", choices=("theta", "direct"), default="theta")
    p.set_defaults(handler=cmd_wavefunction)

    p = sub.add_parser("wigner", parents=[common], allow_abbrev=False, help="sample a Wigner function")
    _add_state_arguments(p, with_approx=True)
    p.add_argument("--j-prime", type=int, help="bra index (default: same as --j)")
    p.add_argument("--nq", type=int, default=201, help="samples along q (default 201)")
    p.add_argument("--np", type=int, default=201, help="samples along p (default 201)")
    p.add_argument("--span", type=float, default=2.0,
                   help="half-width of both axes in position comb periods (default 2)")
    for name in ("q-min", "q-max", "p-min", "p-max"):
        p.add_argument(f"--{name}", type=float, help="explicit bound, overrides --span")
    p.add_argument("--route", choices=("comb", "theta", "riemann", "check"), default="comb")
    p.set_defaults(handler=cmd_wigner)

    p = sub.add_parser("sweep", parents=[common], allow_abbrev=False, help="observable against squeezing level")
    p.add_argument("--quantity", choices=SWEEP_QUANTITIES, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--j-prime", type=int, default=1, help="bra index for overlaps (default 1)")
    p.add_argument("--db-min", type=float, default=1.0)
    p.add_argument("--db-max", type=float, default=18.0)
    p.add_argument("--db-steps", type=int, default=35, help="number of levels, ends included")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("selftest", parents=[common], allow_abbrev=False, help="run the built-in checks")
    p.add_argument("--only", action="append",
                   help="group or check name to run; repeat or comma-separate")
    p.add_argument("--check-tol", type=float, help="replace every check tolerance")
    p.set_defaults(handler=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(raw)
    # The self-test report is JSON unless a format was asked for explicitly.
    fmt = args.format
    if args.command == "selftest" and not any(a == "--format" or a.startswith("--format=") for a in raw):
        fmt = "json"
    try:
        cfg = RunConfig(args.tol, args.max_terms, args.out, fmt)
        table = args.handler(args, cfg)
    except ThetaConvergenceError as exc:
        print(f"gkpkit: error: {exc} (raise --max-terms or loosen --tol)", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, ParameterRangeError, ValueError) as exc:
        print(f"gkpkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        write_table(table, cfg)
    except OSError as exc:
        print(f"gkpkit: error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.command == "selftest" and not table.meta["all_pass"]:
        return EXIT_SELFTEST
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
