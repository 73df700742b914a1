import sys
from argparse import ArgumentParser
from pathlib import Path
from typing import Callable, Dict, List, Optional

from weighted_means.characterize.functional import (
    METHODS,
    AnchorMismatchError,
    PointOutsideDomainError,
    deficiency,
    matched_radius,
)
from weighted_means.characterize.recovery import recover_ball
from weighted_means.characterize.sweep import perturbation_sweep
from weighted_means.cli.run_config import RunConfig
from weighted_means.expr.evaluate import ExprEvaluationError
from weighted_means.expr.parser import ExprSyntaxError
from weighted_means.general.exceptions import CommandLineInputError
from weighted_means.general.logging import configure_logging
from weighted_means.general.numerical import (
    check_positive_float,
    check_positive_int,
    parse_float_list,
)
from weighted_means.geometry.constants import DimensionError
from weighted_means.geometry.domains import (
    DomainConstructionError,
    StarDomain,
)
from weighted_means.geometry.shapes import Ball
from weighted_means.harmonic.catalogue import FunctionSpecError
from weighted_means.harmonic.functions import PoleEvaluationError
from weighted_means.IO.domains import DomainSpecError
from weighted_means.IO.reports import write_json_lines, write_table
from weighted_means.meanvalue.bounds import (
    ContainmentError,
    derivative_bound_check,
)
from weighted_means.meanvalue.identities import (
    IDENTITIES,
    conjecture_probe,
    verify_gradient,
    verify_identity,
    verify_spherical_mean,
    verify_volume_mean,
)
from weighted_means.quadrature.integrate import EvaluationFailure
from weighted_means.quadrature.montecarlo import EmptyDomainError
from weighted_means.quadrature.rules import RuleConstructionError
from weighted_means.weights.validation import validate_weight
from weighted_means.weights.weights import (
    WeightDivergenceError,
    WeightParameterError,
    WeightSpecError,
)

# errors in what the user asked for, reported with exit code 2
INPUT_ERRORS = (
    CommandLineInputError,
    DomainSpecError,
    DomainConstructionError,
    DimensionError,
    ExprSyntaxError,
    ExprEvaluationError,
    FunctionSpecError,
    WeightSpecError,
    WeightParameterError,
    WeightDivergenceError,
    RuleConstructionError,
    ContainmentError,
    PointOutsideDomainError,
    AnchorMismatchError,
    PoleEvaluationError,
    EvaluationFailure,
    EmptyDomainError,
)


class WeightedMeansParser(ArgumentParser):
    """
    Overwrite argparse default behaviour to have usage errors
    print the command-line tool help, rather than throwing the
    error encountered.
    """

    def error(self, msg):
        sys.stderr.write(f"Error: {msg}\nSee usage instructions below:\n")
        self.print_help()
        sys.exit(2)


def emit(run: RunConfig, reports: List[dict]):
    """Write reports as JSON lines, each with the run's provenance."""
    provenance = run.provenance()
    write_json_lines(
        ({**report, "provenance": provenance} for report in reports),
        run.output,
    )


def run_verify(run: RunConfig, args) -> bool:
    reports = []
    for u in run.functions:
        if args.identity == "spherical":
            reports.append(
                verify_spherical_mean(u, run.ball, run.settings, run.tolerance)
            )
        elif args.identity == "volume":
            reports.append(
                verify_volume_mean(u, run.ball, run.settings, run.tolerance)
            )
        elif args.identity == "weighted":
            reports.append(
                verify_identity(
                    u, run.ball, run.weight, run.settings, run.tolerance
                )
            )
        else:
            for i in _axes(args.axis, run.m):
                reports.append(
                    verify_gradient(
                        u, run.ball, i, run.settings, run.tolerance
                    )
                )
    emit(run, [report.to_dict() for report in reports])
    return all(report.passed for report in reports)


def _axes(axis: Optional[int], m: int) -> List[int]:
    if axis is None:
        return list(range(1, m + 1))
    if not 1 <= axis <= m:
        raise CommandLineInputError(f"--axis must lie in 1..{m}, got {axis}")
    return [axis]


def run_bounds(run: RunConfig, args) -> bool:
    if args.inner_center is None:
        inner_center = run.ball.center
    else:
        inner_center = run.point(args.inner_center, "--inner-center")
    inner = Ball(inner_center, args.inner_r)
    x0 = None if args.x0 is None else run.point(args.x0, "--x0")
    reports = [
        derivative_bound_check(
            u, run.ball, inner, args.samples, run.settings.seed, x0
        )
        for u in run.functions
    ]
    emit(run, [report.to_dict() for report in reports])
    return all(report.passed for report in reports)


def run_characterize(run: RunConfig, args) -> bool:
    """
    A deficiency is a measurement. The ball verdict goes in the report
    (`is_ball`), and the exit code is 0 whenever the measurement completes.
    """
    domain = run.domain
    x = domain.center if args.x is None else run.point(args.x, "--x")
    r = args.r if args.r is not None else matched_radius(domain, run.settings)
    result = deficiency(
        domain, x, r, run.weight, args.method, run.settings, run.tolerance
    )
    emit(run, [result.to_dict()])
    return True


def run_recover(run: RunConfig, args) -> bool:
    """
    Fails only when the search does not converge. A converged search that
    ends on a non-ball reports `is_ball: false` and still exits 0.
    """
    if not isinstance(run.domain, StarDomain):
        raise CommandLineInputError(
            "recover needs a star domain (ball, star2d, star3d or "
            f"ellipsoid), got {run.domain.describe()}"
        )
    guess = None if args.guess is None else run.point(args.guess, "--guess")
    report = recover_ball(
        run.domain,
        run.weight,
        guess,
        run.tolerance,
        run.settings,
        max_iterations=args.max_iterations,
    )
    emit(run, [report.to_dict()])
    return report.converged


def run_sweep(run: RunConfig, args) -> bool:
    table = perturbation_sweep(
        args.r0,
        args.amplitudes,
        args.mode,
        run.weight,
        run.settings,
        run.tolerance,
        progress=args.progress,
    )
    write_table(table, run.output, run.provenance())
    return bool(table["consistent"].all())


def run_probe(run: RunConfig, args) -> bool:
    try:
        reports = [
            conjecture_probe(
                u, run.ball, run.weight, run.settings, run.tolerance
            )
            for u in run.functions
        ]
    except WeightDivergenceError as error:
        sys.stderr.write(f"Probe not run: {error}\n")
        return False
    emit(run, [report.to_dict() for report in reports])
    return all(report.passed for report in reports)


def run_validate_weight(run: RunConfig, args) -> bool:
    report = validate_weight(run.weight, args.r)
    emit(run, [report.to_dict()])
    return report.passed


SUBCOMMANDS: Dict[str, Callable[[RunConfig, object], bool]] = {
    "verify": run_verify,
    "bounds": run_bounds,
    "characterize": run_characterize,
    "recover": run_recover,
    "sweep": run_sweep,
    "probe": run_probe,
    "validate-weight": run_validate_weight,
}


def shared_parser() -> ArgumentParser:
    """Rule size, sampling, tolerance and output flags of every command."""
    parser = ArgumentParser(add_help=False)
    rules = parser.add_argument_group("quadrature and sampling")
    rules.add_argument(
        "--sphere-n",
        type=check_positive_int,
        help="Circle rule nodes (m = 2).",
    )
    rules.add_argument(
        "--sphere-polar",
        type=check_positive_int,
        help="Gauss-Legendre nodes in the polar angle (m = 3).",
    )
    rules.add_argument(
        "--sphere-azimuth",
        type=check_positive_int,
        help="Equispaced nodes in the azimuth (m = 3).",
    )
    rules.add_argument(
        "--radial-panels",
        type=check_positive_int,
        help="Maximum number of graded radial panels.",
    )
    rules.add_argument(
        "--radial-nodes",
        type=check_positive_int,
        help="Gauss-Legendre nodes per radial panel.",
    )
    rules.add_argument(
        "--mc-n",
        type=check_positive_int,
        help="Monte Carlo sample count.",
    )
    rules.add_argument("--seed", type=int, help="Base Monte Carlo seed.")
    rules.add_argument(
        "--workers",
        type=check_positive_int,
        help="Worker threads for chunked work. Results do not depend on it.",
    )
    parser.add_argument(
        "--tol",
        type=check_positive_float,
        help="Pass threshold overriding each check's default.",
    )
    parser.add_argument(
        "--config",
        type=Path,
        help="INI file overriding the packaged defaults.",
    )
    parser.add_argument(
        "--out",
        type=Path,
        help="Write reports to this file instead of stdout.",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Log at debug level.",
    )
    return parser


def _ball_arguments(parser: ArgumentParser, radius_help: str):
    parser.add_argument(
        "--m", type=int, required=True, help="Dimension, at least 2."
    )
    parser.add_argument(
        "--center",
        type=parse_float_list,
        help="Ball centre as comma separated coordinates (origin if unset).",
    )
    parser.add_argument(
        "--r", type=check_positive_float, default=1.0, help=radius_help
    )


def _function_argument(parser: ArgumentParser):
    parser.add_argument(
        "--fn",
        action="append",
        help="Test function spec, e.g. 're_z:3', 'poly:x2-y2', "
        "'fund:2,0', 'random:seed=7,deg=3'. Repeatable. All catalogue "
        "members if unset.",
    )


def build_parser() -> WeightedMeansParser:
    parser = WeightedMeansParser(
        prog="weighted-means",
        description="Numerical verification of weighted mean value "
        "identities for harmonic functions, and ball characterization by "
        "weighted means.",
    )
    subparsers = parser.add_subparsers(
        dest="subcommand", required=True, metavar="subcommand"
    )
    shared = [shared_parser()]

    verify = subparsers.add_parser(
        "verify",
        parents=shared,
        help="Check a mean value identity on a ball.",
    )
    _ball_arguments(verify, "Ball radius.")
    verify.add_argument(
        "--identity",
        choices=IDENTITIES,
        default="weighted",
        help="Which identity to check.",
    )
    verify.add_argument(
        "--weight",
        default="log",
        help="Weight spec: 'log', 'riesz:alpha=0.5', 'power:beta=2' or "
        "'custom:<expression in t, r>'.",
    )
    _function_argument(verify)
    verify.add_argument(
        "--axis",
        type=int,
        help="Gradient component, 1..m (all if unset).",
    )

    bounds = subparsers.add_parser(
        "bounds",
        parents=shared,
        help="Check the derivative bounds on a pair of nested balls.",
    )
    _ball_arguments(bounds, "Radius of the outer ball.")
    bounds.add_argument(
        "--inner-center",
        type=parse_float_list,
        help="Centre of the inner ball (outer centre if unset).",
    )
    bounds.add_argument(
        "--inner-r",
        type=check_positive_float,
        required=True,
        help="Radius of the inner ball.",
    )
    bounds.add_argument(
        "--x0",
        type=parse_float_list,
        help="Point for the nonnegative bound (outer centre if unset).",
    )
    bounds.add_argument(
        "--samples",
        type=check_positive_int,
        help="Samples per region.",
    )
    _function_argument(bounds)

    characterize = subparsers.add_parser(
        "characterize",
        parents=shared,
        help="Deficiency of a domain at a point.",
    )
    characterize.add_argument(
        "--domain",
        type=Path,
        required=True,
        help="Domain spec file (JSON or YAML).",
    )
    characterize.add_argument("--weight", default="log", help="Weight spec.")
    characterize.add_argument(
        "--x",
        type=parse_float_list,
        help="Evaluation point (domain centre if unset).",
    )
    characterize.add_argument(
        "--r",
        type=check_positive_float,
        help="Weight radius (volume-matched radius if unset).",
    )
    characterize.add_argument(
        "--method",
        choices=METHODS,
        default="auto",
        help="Evaluation path of the functional.",
    )

    recover = subparsers.add_parser(
        "recover",
        parents=shared,
        help="Search for the centre minimising the deficiency.",
    )
    recover.add_argument(
        "--domain",
        type=Path,
        required=True,
        help="Star domain spec file (JSON or YAML).",
    )
    recover.add_argument("--weight", default="log", help="Weight spec.")
    recover.add_argument(
        "--guess",
        type=parse_float_list,
        help="Initial centre guess inside the domain (anchor if unset).",
    )
    recover.add_argument(
        "--max-iterations",
        type=check_positive_int,
        help="Optimiser iteration cap.",
    )

    sweep = subparsers.add_parser(
        "sweep",
        parents=shared,
        help="Deficiency of perturbed discs, as CSV.",
    )
    sweep.add_argument(
        "--r0",
        type=check_positive_float,
        default=1.0,
        help="Unperturbed radius.",
    )
    sweep.add_argument(
        "--amplitudes",
        type=parse_float_list,
        required=True,
        help="Comma separated perturbation amplitudes.",
    )
    sweep.add_argument(
        "--mode",
        type=check_positive_int,
        default=3,
        help="Fourier index of the perturbation.",
    )
    sweep.add_argument("--weight", default="log", help="Weight spec.")
    sweep.add_argument(
        "--progress", action="store_true", help="Show a progress bar."
    )

    probe = subparsers.add_parser(
        "probe",
        parents=shared,
        help="Test whether a custom weight gives a mean value identity.",
    )
    _ball_arguments(probe, "Ball radius.")
    probe.add_argument(
        "--weight", required=True, help="Weight spec, usually 'custom:...'."
    )
    _function_argument(probe)

    validate = subparsers.add_parser(
        "validate-weight",
        parents=shared,
        help="Check the sign and integrability conditions of a weight.",
    )
    validate.add_argument(
        "--m", type=int, required=True, help="Dimension, at least 2."
    )
    validate.add_argument(
        "--r",
        type=check_positive_float,
        default=1.0,
        help="Radius the weight is checked at.",
    )
    validate.add_argument("--weight", required=True, help="Weight spec.")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Returns
    -------
    int
        0 if every check passed, 1 if a verification failed or a recovery
        did not converge, 2 on an input error. The characterize and recover
        verdicts on the domain are fields of the report, not exit codes.
        Argparse usage errors exit with 2 directly.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        run = RunConfig.from_args(args)
        passed = SUBCOMMANDS[args.subcommand](run, args)
    except INPUT_ERRORS as error:
        sys.stderr.write(f"Error: {error}\n")
        return 2
    return 0 if passed else 1


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
