"""
Main CLI dispatcher for the volsplit command.

This module provides the entry point and argument parsing for all volsplit commands.
"""

import argparse
import sys

from . import __version__
from .utils import configure_logging, print_error


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    """Options shared by every command: run file, output and numerical overrides."""
    group = parser.add_argument_group("run options")
    group.add_argument("--config", "-c", default=None, help="JSON (or YAML) run file")
    group.add_argument("--output", "-o", default=None, help="Report path (default: stdout)")
    group.add_argument(
        "--format",
        "-f",
        choices=["json", "csv"],
        default=None,
        help="Report format (default: json)",
    )
    group.add_argument("--quad-order", type=int, default=None, help="Gauss nodes per panel")
    group.add_argument(
        "--tail-policy",
        choices=["geometric", "substitution"],
        default=None,
        help="Treatment of semi-infinite integrals",
    )


def _add_weights(parser: argparse.ArgumentParser, *names: str) -> None:
    helps = {
        "u": "Input weight u (DSL expression)",
        "v": "Output weight v (DSL expression)",
        "weight": "Weight to analyse (DSL expression)",
        "w": "Doubling weight for the mass set (DSL expression)",
        "phi": "Multiplier phi (DSL expression)",
    }
    for name in names:
        parser.add_argument(f"--{name}", default=None, metavar="EXPR", help=helps[name])


def _add_kernel(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--kernel",
        nargs="+",
        default=None,
        metavar="EXPR",
        help="Kernel coefficients a_0 .. a_n of K(x, t) = sum a_k(x) t^k",
    )


def _add_delta(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--delta", type=float, default=None, help="Smallest interval length considered (default 0)"
    )


def _add_ladder(parser: argparse.ArgumentParser, help_text: str) -> None:
    parser.add_argument(
        "--r-ladder", dest="r_ladder", nargs="+", type=float, default=None, help=help_text
    )


def _add_grid(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--N", type=int, default=None, help="Grid nodes (default: grid_size)")
    parser.add_argument("--grid-size", type=int, default=None, help="Default number of grid nodes")
    parser.add_argument(
        "--grid-scale", type=float, default=None, help="Length where grid panels turn uniform"
    )


def create_parser() -> argparse.ArgumentParser:
    """Create the main argument parser with all subcommands."""

    parser = argparse.ArgumentParser(
        prog="volsplit",
        description="volsplit - Weighted L2 boundedness of Volterra operators with degenerate kernels",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        allow_abbrev=False,
        epilog="""
Examples:
  volsplit check-doubling --weight "(1+x)^-1"          Doubling constant of a weight
  volsplit hardy --u 1 --v 1/x                         Hardy criterion supremum
  volsplit split-criteria --kernel 1 -1 --u 1 --v "(1+x)^-2"
  volsplit op-norm --kernel 1 --u 1 --v 1/x --R 1024 --N 2048
  volsplit orthopoly --weight 1 --r 1 --n 2            Shifted Legendre roots
  volsplit lemma35 --beta 0.75 --a 0.25
  volsplit counterexample                              Unbounded components, bounded sum

Exit status:
  0  clean verdict    1  error    2  inconclusive verdict

For more information on a command:
  volsplit <command> --help
        """,
    )

    parser.add_argument("--version", "-V", action="version", version=f"%(prog)s {__version__}")

    parser.add_argument(
        "--quiet", "-q", action="store_true", help="Suppress the summary on stderr"
    )

    parser.add_argument(
        "--verbose",
        "-v",
        action="count",
        default=0,
        help="Increase log verbosity (-v info, -vv debug)",
    )

    subparsers = parser.add_subparsers(dest="command", title="commands", metavar="<command>")

    def add(name: str, help_text: str, aliases: tuple[str, ...] = ()) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(
            name, aliases=list(aliases), help=help_text, description=help_text, allow_abbrev=False
        )
        _add_run_options(sub)
        return sub

    # =========================================================================
    # check-doubling
    # =========================================================================
    p = add("check-doubling", "Sample the doubling constant of a weight")
    _add_weights(p, "weight")
    _add_delta(p)
    p.add_argument(
        "--weak", action="store_true", help="Origin-anchored intervals [0, 2r] against [0, r]"
    )
    p.add_argument(
        "--pairs",
        action="append",
        default=None,
        metavar="JSON",
        help='Nested pair "[[a, b], [c, d]]" (inner, outer) for the ratio envelopes; repeatable',
    )
    p.add_argument(
        "--closure", action="store_true", help="Also check x^gamma w for gamma in {1, 2}"
    )

    # =========================================================================
    # criteria
    # =========================================================================
    p = add("hardy", "Criterion supremum for the Hardy operator")
    _add_weights(p, "u", "v")

    p = add("split-criteria", "Component suprema S_k of a degenerate kernel")
    _add_kernel(p)
    _add_weights(p, "u", "v")
    _add_delta(p)
    p.add_argument("--adjoint", action="store_true", help="Certify the adjoint operator")

    p = add("rl-criteria", "Criteria for fractional integration of order alpha")
    p.add_argument("--alpha", type=float, default=None, help="Order alpha >= 1")
    _add_weights(p, "u", "v")
    _add_delta(p)

    # =========================================================================
    # operators
    # =========================================================================
    p = add("op-norm", "Norm of the discretized operator on (0, R)")
    _add_kernel(p)
    _add_weights(p, "u", "v")
    p.add_argument("--R", type=float, default=None, help="Truncation point")
    _add_grid(p)
    p.add_argument("--adjoint", action="store_true", help="Discretize the adjoint operator")
    _add_ladder(p, "Radii for the split-witness lower bound")

    p = add("split-experiment", "Norm ladder of an operator and its components")
    _add_kernel(p)
    _add_weights(p, "u", "v")
    _add_delta(p)
    _add_ladder(p, "Truncation points R")
    _add_grid(p)

    p = add("counterexample", "Fractional integration where splitting fails")
    p.add_argument("--alpha", type=float, default=None, help="Integer order (default 2)")
    _add_weights(p, "u", "v")
    _add_ladder(p, "Truncation points R (default 2^4 .. 2^8)")
    _add_grid(p)

    # =========================================================================
    # orthopoly
    # =========================================================================
    p = add("orthopoly", "Orthogonal polynomial on [0, r], root spacing and mass sets")
    _add_weights(p, "weight", "w")
    p.add_argument("--r", type=float, default=None, help="Interval end")
    p.add_argument("--n", type=int, default=None, help="Degree")
    p.add_argument("--beta", type=float, default=None, help="Mass fraction (default: auto)")
    p.add_argument("--weak", action="store_true", help="Single split point instead of a mass set")
    _add_delta(p)
    _add_ladder(p, "Radii for the spacing check")

    p = add("gram", "Gram determinant ratio of x^k / u along a ladder")
    _add_weights(p, "u")
    p.add_argument("--n", type=int, default=None, help="Degree")
    p.add_argument("--r", type=float, default=None, help="Also report the ratio at this r")
    _add_delta(p)
    _add_ladder(p, "Radii")

    p = add("witness", "Split witness and its epsilon along a ladder")
    _add_weights(p, "u")
    p.add_argument("--n", type=int, default=None, help="Degree")
    p.add_argument("--r", type=float, default=None, help="Also report the witness at this r")
    _add_delta(p)
    _add_ladder(p, "Radii")

    p = add(
        "lemma35",
        "Closed-form constrained minimum (alias: constrained-min)",
        aliases=("constrained-min",),
    )
    p.add_argument("--beta", type=float, default=None, help="Constraint weight in (0, 1]")
    p.add_argument("--a", type=float, default=None, help="Objective weight in (0, 1)")
    p.add_argument("--gamma", type=float, default=None, help="Optional gamma > 0")

    # =========================================================================
    # multiplier
    # =========================================================================
    p = add("multiplier", "Pointwise multiplier between weighted Sobolev spaces")
    _add_weights(p, "phi", "u", "v")
    p.add_argument("--l", type=int, default=None, help="Order of the source space")
    p.add_argument("--m", type=int, default=None, help="Order of the target space")
    _add_delta(p)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Main entry point for the CLI."""

    parser = create_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 0

    configure_logging(args.verbose)

    # Import and run the appropriate command
    try:
        if args.command == "check-doubling":
            from .commands.doubling import run_check_doubling
            return run_check_doubling(args)

        elif args.command == "hardy":
            from .commands.criteria import run_hardy
            return run_hardy(args)

        elif args.command == "split-criteria":
            from .commands.criteria import run_split_criteria
            return run_split_criteria(args)

        elif args.command == "rl-criteria":
            from .commands.criteria import run_rl_criteria
            return run_rl_criteria(args)

        elif args.command == "op-norm":
            from .commands.operators import run_op_norm
            return run_op_norm(args)

        elif args.command == "split-experiment":
            from .commands.operators import run_split_experiment
            return run_split_experiment(args)

        elif args.command == "counterexample":
            from .commands.operators import run_counterexample
            return run_counterexample(args)

        elif args.command == "orthopoly":
            from .commands.orthopoly import run_orthopoly
            return run_orthopoly(args)

        elif args.command == "gram":
            from .commands.orthopoly import run_gram
            return run_gram(args)

        elif args.command == "witness":
            from .commands.orthopoly import run_witness
            return run_witness(args)

        elif args.command in ("lemma35", "constrained-min"):
            from .commands.orthopoly import run_constrained_min
            return run_constrained_min(args)

        elif args.command == "multiplier":
            from .commands.multiplier import run_multiplier
            return run_multiplier(args)

        else:
            parser.print_help()
            return 1

    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return 130
    except Exception as e:
        if args.verbose > 0:
            import traceback
            traceback.print_exc()
        else:
            print_error(f"Error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
