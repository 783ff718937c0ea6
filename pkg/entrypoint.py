import argparse
import logging
import sys

from source import settings
from source.cli import cli_model
from source.errors import ConfigurationError, DomainError, DomainMismatchError, RMTError
from source.verify.suites import SUITE_NAMES

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

SPACES = ["herm", "io_even", "io_odd", "usp", "chiral", "herm_plus", "unitary"]


def run_command(args):
    """
    Dispatches a parsed command line.
    Returns:
        Exit code
    """
    if args.command == "sample":
        cli_model.cmd_sample(
            space=args.space,
            n=args.n,
            nu=args.nu,
            density=args.density,
            scale=args.scale,
            dof=args.dof,
            count=args.count,
            seed=args.seed,
            aux=args.aux,
            coords=args.coords,
            out=args.out,
            workers=args.workers
        )
    elif args.command == "density":
        cli_model.cmd_density(
            space=args.space,
            n=args.n,
            nu=args.nu,
            builtin=args.builtin,
            weight_file=args.weight_file,
            grid=args.grid,
            scale=args.scale,
            dof=args.dof,
            out=args.out
        )
    elif args.command == "convolve":
        cli_model.cmd_convolve(
            space=args.space,
            n=args.n,
            weight_a=args.weight_a,
            weight_b=args.weight_b,
            nu=args.nu,
            grid=args.grid,
            scale=args.scale,
            out=args.out
        )
    elif args.command == "verify":
        _, passed = cli_model.cmd_verify(
            suite=args.suite,
            budget=args.budget,
            seed=args.seed,
            negative_control=args.negative_control,
            out=args.out,
            workers=args.workers
        )
        return EXIT_OK if passed else EXIT_FAILURE
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=str, help="Output file (default under res/<command>/)")
    common.add_argument("--log-level", type=str, default=settings.log_level(),
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level (env RMT_LOG_LEVEL)")

    parser = argparse.ArgumentParser(description="Derivative principles of invariant random-matrix ensembles")
    commands = parser.add_subparsers(dest="command", required=True)

    sample = commands.add_parser("sample", parents=[common], help="Sample spectra of an ensemble to CSV")
    sample.add_argument("--space", type=str, choices=SPACES, required=True, help="Matrix space")
    sample.add_argument("--n", type=int, required=True, help="Number of spectral values")
    sample.add_argument("--nu", type=str, help="Chiral parameter nu (0, 1, 2, ...)")
    sample.add_argument("--density", type=str, default="gaussian", help="gaussian, ginibre, wishart or haar")
    sample.add_argument("--scale", type=float, default=1.0, help="Gaussian / Ginibre scale")
    sample.add_argument("--dof", type=int, help="Wishart degrees of freedom (default n)")
    sample.add_argument("--count", type=int, default=1000, help="Number of samples")
    sample.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="Root seed")
    sample.add_argument("--aux", type=str, choices=["none", "pseudo", "lu"], default="none",
                        help="Auxiliary columns: pseudo-diagonal entries or LU diagonals / minor moduli")
    sample.add_argument("--coords", type=str, choices=["none", "angles", "appendixB"], default="none",
                        help="Append the alpha/phi/psi angles of each unitary draw (appendixB: alias of angles)")
    sample.add_argument("--workers", type=int, help="Sampling threads (default RMT_THREADS)")

    density = commands.add_parser("density", parents=[common], help="Spectral density by the derivative principle")
    density.add_argument("--space", type=str, choices=SPACES, help="Matrix space (required with --weight-file)")
    density.add_argument("--n", type=int, default=2, help="Number of spectral values (builtins)")
    density.add_argument("--nu", type=str, help="Chiral parameter nu")
    source = density.add_mutually_exclusive_group(required=True)
    source.add_argument("--builtin", type=str, help="Built-in ensemble (gue, io_even, io_odd, usp, chiral, lue, wishart, cue)")
    source.add_argument("--weight-file", type=str, help="WeightFunction JSON file")
    density.add_argument("--grid", type=float, nargs=3, action="append", metavar=("LO", "HI", "COUNT"),
                         help="Output grid axis; repeat once per coordinate or give one for all")
    density.add_argument("--scale", type=float, default=1.0, help="Gaussian / Ginibre scale of builtins")
    density.add_argument("--dof", type=int, help="Degrees of freedom of the wishart builtin (default n)")

    convolve = commands.add_parser("convolve", parents=[common], help="Spectral density of A + B")
    convolve.add_argument("--space", type=str, choices=SPACES, required=True, help="herm or a Hankel-class space")
    convolve.add_argument("--n", type=int, required=True, help="Number of spectral values")
    convolve.add_argument("--nu", type=str, help="Chiral parameter nu")
    convolve.add_argument("--weight-a", type=str, required=True, help="Builtin name or WeightFunction JSON of A")
    convolve.add_argument("--weight-b", type=str, required=True, help="Builtin name or WeightFunction JSON of B")
    convolve.add_argument("--grid", type=float, nargs=3, action="append", metavar=("LO", "HI", "COUNT"),
                          help="Output grid axis")
    convolve.add_argument("--scale", type=float, default=1.0, help="Gaussian / Ginibre scale of builtins")

    verify = commands.add_parser("verify", parents=[common], help="Run a verification suite")
    verify.add_argument("--suite", type=str, choices=list(SUITE_NAMES) + ["all"], default="all", help="Suite to run")
    verify.add_argument("--budget", type=float, default=1e5, help="Monte Carlo sample budget (e.g. 1e5)")
    verify.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="Root seed")
    verify.add_argument("--negative-control", action="store_true",
                        help="Append a comparison against a deliberately wrong density")
    verify.add_argument("--workers", type=int, help="Sampling threads (default RMT_THREADS)")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    logging.basicConfig(level=getattr(logging, args.log_level), format="%(asctime)s - %(levelname)s - %(message)s")

    try:
        return run_command(args)
    except ConfigurationError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, DomainMismatchError) as e:
        print(f"Domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except RMTError as e:
        print(f"Error in {args.command}: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
