"""opctl: run one experiment and emit its table as JSON or CSV.

JSON output is ``{config, results, verdict, tolerances}``.  CSV output is the
experiment's table with a header row.  Random suites draw from a Philox
generator seeded by ``--seed`` (falling back to ``$OPSPECTRA_SEED``, then 0),
so a fixed seed gives byte-identical output.

Exit status: 0 on success, 2 on invalid input or usage, 1 on numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import experiments as ex
from . import io as oio
from .errors import InputError, NumericalError


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("OPSPECTRA_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"OPSPECTRA_SEED must be an integer, got {env!r}")


def _sweep(fn, rng, ns, **kw) -> ex.Outcome:
    """Run a random suite once per matrix size and merge the outcomes."""
    parts = [(n, fn(rng, n=n, **kw)) for n in ns]
    results = {str(n): o.results for n, o in parts}
    header = ["n"] + list(parts[0][1].results)
    rows = [[n] + list(o.results.values()) for n, o in parts]
    return ex.Outcome(results, all(o.verdict for _, o in parts), parts[0][1].tolerances, header, rows)


def _tol(args, default):
    return default if args.tol is None else args.tol


# Each entry: (help, argument adder, runner(args, rng) -> Outcome)
def _add_balmer(p):
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--l-max", type=int, default=7)


def _add_planck(p):
    p.add_argument("--temp", type=float, default=5000.0)
    p.add_argument("--lambda-min", type=float, default=1e-6)
    p.add_argument("--lambda-max", type=float, default=1e-2)
    p.add_argument("--points", type=int, default=400)


def _add_debroglie(p):
    p.add_argument("--mass", type=float, default=None, help="grams (default: electron)")
    p.add_argument("--speed", type=float, default=None, help="cm/s (default: c/3)")


def _add_bohr(p):
    p.add_argument("--k-max", type=int, default=5)


def _add_random_suite(p, default_n="2,4,8,16", trials=200):
    p.add_argument("--n", type=_ints, default=_ints(default_n), help="comma-separated sizes")
    p.add_argument("--trials", type=int, default=trials)


def _add_ccr_obstruction(p):
    _add_random_suite(p)
    p.add_argument("--hbar", type=float, default=1.0)


def _add_oscillator(p):
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--hbar", type=float, default=1.0)


def _add_truncation(p):
    p.add_argument("--n", type=int, default=64, help="grid points")
    p.add_argument("--left", type=float, default=-4.0)
    p.add_argument("--right", type=float, default=4.0)
    p.add_argument("--mode", choices=("central", "spectral"), default="spectral")
    p.add_argument("--cutoffs", type=_floats, default=[5.0, 10.0, 20.0])


def _add_preclosed(p):
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--dim", type=int, default=20)


def _add_grid_heisenberg(p):
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--mode", choices=("central", "spectral"), default="spectral")
    p.add_argument("--left", type=float, default=-10.0)
    p.add_argument("--right", type=float, default=10.0)


def _add_jump(p):
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--left", type=float, default=-2.0)
    p.add_argument("--right", type=float, default=2.0)


def _add_domain(p):
    p.add_argument("--function", choices=("gaussian", "step", "zero"), default="gaussian")
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--left", type=float, default=-10.0)
    p.add_argument("--right", type=float, default=10.0)


def _add_grid_random(p):
    p.add_argument("--n", type=int, default=256, help="grid points on [0, 1]")
    p.add_argument("--trials", type=int, default=100)


def _add_averaging(p):
    p.add_argument("--function", choices=("gaussian", "step"), default="gaussian")
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--steps", type=_ints, default=[64, 32, 16, 8, 4, 2, 1],
                   help="averaging lengths in grid steps")


def _add_bernstein_approx(p):
    p.add_argument("--function", choices=sorted(ex.BERNSTEIN_FUNCTIONS), default="sin")
    p.add_argument("--n", type=int, default=40)


def _add_bernstein_ids(p):
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--x", type=_floats, default=[0.5], help="comma-separated points in [0, 1]")


def _add_matrix_suite(p):
    _add_random_suite(p, default_n="2,4,8,16,32", trials=20)


def _add_vn(p):
    p.add_argument("--blocks", type=_ints, default=[2, 3, 4])
    p.add_argument("--trials", type=int, default=200)


COMMANDS = {
    "balmer": ("Balmer series wavelengths", _add_balmer,
               lambda a, r: ex.balmer(a.k, a.l_max, a.paper_compat, _tol(a, 1.0))),
    "planck": ("Planck vs Rayleigh-Jeans densities", _add_planck,
               lambda a, r: ex.planck(a.temp, a.lambda_min, a.lambda_max, a.points)),
    "debroglie": ("de Broglie wavelength", _add_debroglie,
                  lambda a, r: ex.debroglie(a.mass, a.speed)),
    "bohr": ("Bohr orbit radii and energies", _add_bohr, lambda a, r: ex.bohr(a.k_max)),
    "ccr-obstruction": ("trace obstruction on random pairs", _add_ccr_obstruction,
                        lambda a, r: _sweep(ex.ccr_obstruction, r, a.n, trials=a.trials,
                                            hbar=a.hbar, tol=_tol(a, 1e-9))),
    "spectrum-symmetry": ("char_poly(AB) vs char_poly(BA)", _add_random_suite,
                          lambda a, r: _sweep(ex.spectrum_symmetry, r, a.n, trials=a.trials,
                                              tol=_tol(a, 1e-9))),
    "wielandt": ("inverse of I - BA from (I - AB)^-1", _add_random_suite,
                 lambda a, r: _sweep(ex.wielandt, r, a.n, trials=a.trials, tol=_tol(a, 1e-9))),
    "oscillator-truncation": ("truncated oscillator commutator", _add_oscillator,
                              lambda a, r: ex.oscillator_truncation(a.n_max, a.hbar, _tol(a, 1e-12))),
    "truncation-identity": ("spectral cutoff identity for grid P, Q", _add_truncation,
                            lambda a, r: ex.truncation_identity(a.n, a.left, a.right, a.mode, a.cutoffs)),
    "preclosed-demo": ("exact non-preclosed product example", _add_preclosed,
                       lambda a, r: ex.preclosed_demo(a.m_max, a.dim)),
    "grid-heisenberg": ("grid commutator residual", _add_grid_heisenberg,
                        lambda a, r: ex.grid_heisenberg(a.n, a.mode, a.left, a.right, a.tol)),
    "jump-profile": ("difference quotients of a unit step", _add_jump,
                     lambda a, r: ex.jump_profile(a.grid, a.left, a.right)),
    "domain-diagnostic": ("difference-quotient convergence verdict", _add_domain,
                          lambda a, r: ex.domain_diagnostic(a.function, a.n, a.left, a.right)),
    "volterra": ("Volterra operator norm bound", _add_grid_random,
                 lambda a, r: ex.volterra(r, a.n, a.trials)),
    "d3-skew": ("skew-symmetry of the derivative on K f + a u", _add_grid_random,
                lambda a, r: ex.d3_skew(r, a.n, a.trials, _tol(a, 1e-6))),
    "averaging": ("convergence of A_t f to f", _add_averaging,
                  lambda a, r: ex.averaging(a.function, a.n, steps=a.steps)),
    "bernstein-approx": ("Bernstein approximation errors", _add_bernstein_approx,
                         lambda a, r: ex.bernstein_approx(a.function, a.n)),
    "bernstein-identities": ("Bernstein moment identities", _add_bernstein_ids,
                             lambda a, r: ex.bernstein_identities(a.n, a.x)),
    "spectral-decompose": ("spectral resolution properties", _add_matrix_suite,
                           lambda a, r: _sweep(ex.spectral_decompose, r, a.n, trials=a.trials,
                                               tol=_tol(a, 1e-9))),
    "polar": ("polar decomposition and range/null identities", _add_matrix_suite,
              lambda a, r: _sweep(ex.polar, r, a.n, trials=a.trials, tol=_tol(a, 1e-9))),
    "vn-lattice": ("dimension function and projection lattice", _add_vn,
                   lambda a, r: ex.vn_lattice(r, tuple(a.blocks), a.trials, _tol(a, 1e-8))),
    "vn-trace": ("center-valued trace of commutators", _add_vn,
                 lambda a, r: ex.vn_trace(r, tuple(a.blocks), a.trials, _tol(a, 1e-9))),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default $OPSPECTRA_SEED or 0)")
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default json)")
    common.add_argument("--csv", dest="format", action="store_const", const="csv",
                        help="shorthand for --format csv")
    common.add_argument("--out", default=None,
                        help="output path (default: stdout for JSON, ./out/<command>.csv for CSV)")
    common.add_argument("--paper-compat", action="store_true",
                        help="round quoted values the way the historical tables do")
    common.add_argument("--tol", type=float, default=None, help="override the pass tolerance")

    parser = argparse.ArgumentParser(prog="opctl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name, (help_text, add, _) in COMMANDS.items():
        add(sub.add_parser(name, help=help_text, parents=[common]))
    return parser


def _config(args, seed: int) -> dict:
    skip = {"out", "command"}
    cfg = {"command": args.command, "seed": seed}
    cfg.update({k: v for k, v in sorted(vars(args).items()) if k not in skip and k != "seed"})
    return cfg


def _csv_text(outcome: ex.Outcome) -> str:
    if outcome.header:
        return oio.rows_to_csv(outcome.header, outcome.rows)
    flat = oio.to_jsonable(outcome.results)
    return oio.rows_to_csv(["key", "value"], sorted((k, v) for k, v in flat.items()
                                                     if not isinstance(v, (dict, list))))


def run(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    fmt = args.format or "json"
    try:
        seed = _seed(args)
        rng = ex.make_rng(seed)
        outcome = COMMANDS[args.command][2](args, rng)
    except InputError as exc:
        print(f"opctl {args.command}: invalid input: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"opctl {args.command}: numerical failure: {exc}", file=sys.stderr)
        for key in ("residuals", "singular_value"):
            if getattr(exc, key, None) is not None:
                print(f"  {key}: {getattr(exc, key)}", file=sys.stderr)
        return 1

    if fmt == "json":
        text = oio.dumps({"config": _config(args, seed), "results": outcome.results,
                          "verdict": "pass" if outcome.verdict else "fail",
                          "tolerances": outcome.tolerances})
        if args.out is None:
            stdout.write(text)
        else:
            oio.write_atomic(args.out, text)
    else:
        path = Path(args.out) if args.out else Path("out") / f"{args.command}.csv"
        oio.write_atomic(path, _csv_text(outcome))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
