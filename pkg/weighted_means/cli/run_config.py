import logging
from argparse import Namespace
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import weighted_means
from weighted_means.general.config import load_config
from weighted_means.general.exceptions import CommandLineInputError
from weighted_means.general.system import (
    catch_input_file_error,
    ensure_directory_exists,
)
from weighted_means.geometry.constants import check_dimension
from weighted_means.geometry.domains import Domain
from weighted_means.geometry.shapes import Ball, Point
from weighted_means.harmonic.catalogue import catalogue, parse_function_spec
from weighted_means.harmonic.functions import HarmonicFn
from weighted_means.IO.domains import domain_to_spec, load_domain
from weighted_means.quadrature.rules import RuleSettings
from weighted_means.weights.weights import Weight, parse_weight_spec

RULE_FLAGS = (
    "sphere_n",
    "sphere_polar",
    "sphere_azimuth",
    "radial_panels",
    "radial_nodes",
    "mc_n",
    "seed",
    "workers",
)


@dataclass
class RunConfig:
    """
    Everything one CLI run needs, parsed and validated before any
    computation starts.

    Attributes
    ----------
    subcommand : str
        The subcommand being run.
    settings : RuleSettings
        Rule sizes after applying the config file and explicit flags.
    tolerance : float, optional
        ``--tol``; None leaves each check's own default in place.
    m : int, optional
        Dimension.
    ball : Ball, optional
        The ball of ``verify``, ``bounds`` and ``probe`` (outer ball for
        ``bounds``).
    domain : StarDomain or ImplicitDomain, optional
        The domain of ``characterize`` and ``recover``.
    weight : Weight, optional
        Parsed ``--weight``.
    functions : list of HarmonicFn
        Parsed ``--fn`` values (the catalogue when none given).
    output : pathlib.Path, optional
        ``--out``; stdout if None.
    config_path : pathlib.Path, optional
        ``--config``.
    specs : dict
        The raw spec strings, echoed into the provenance.
    """

    subcommand: str
    settings: RuleSettings
    tolerance: Optional[float] = None
    m: Optional[int] = None
    ball: Optional[Ball] = None
    domain: Optional[Domain] = None
    weight: Optional[Weight] = None
    functions: List[HarmonicFn] = field(default_factory=list)
    output: Optional[Path] = None
    config_path: Optional[Path] = None
    specs: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: Namespace) -> "RunConfig":
        """
        Parse every spec of a subcommand's arguments.

        Raises
        ------
        CommandLineInputError
            On inconsistent arguments.
        DomainSpecError, WeightSpecError, WeightParameterError,
        ExprSyntaxError, FunctionSpecError, DimensionError
            On malformed specs.
        """
        config_path = getattr(args, "config", None)
        if config_path is not None:
            catch_input_file_error(config_path)
        settings = RuleSettings.from_config(load_config(config_path))
        settings = settings.with_overrides(
            **{flag: getattr(args, flag, None) for flag in RULE_FLAGS}
        )
        run = cls(
            subcommand=args.subcommand,
            settings=settings,
            tolerance=getattr(args, "tol", None),
            output=getattr(args, "out", None),
            config_path=config_path,
        )
        if run.output is not None:
            ensure_directory_exists(Path(run.output).parent)

        domain_path = getattr(args, "domain", None)
        if domain_path is not None:
            run.domain = load_domain(domain_path)
            run.m = run.domain.dim
            run.specs["domain"] = _domain_spec(run.domain)
        elif args.subcommand == "sweep":
            run.m = 2
        else:
            run.m = check_dimension(args.m)

        if getattr(args, "r", None) is not None and hasattr(args, "center"):
            run.ball = Ball(_point(args.center, run.m, "--center"), args.r)
            run.specs["ball"] = run.ball.to_dict()

        weight_spec = getattr(args, "weight", None)
        if weight_spec is not None:
            run.weight = parse_weight_spec(weight_spec, run.m)
            run.specs["weight"] = run.weight.describe()

        if hasattr(args, "fn"):
            if args.fn:
                run.functions = [
                    parse_function_spec(spec, run.m) for spec in args.fn
                ]
            else:
                run.functions = catalogue(run.m)
            run.specs["functions"] = [u.describe() for u in run.functions]

        logging.debug(
            f"Run configuration for {run.subcommand}: {run.specs}, "
            f"rules {run.settings.to_dict()}"
        )
        return run

    def point(self, values: Optional[List[float]], flag: str) -> Point:
        """A point given as a flag, checked against the run's dimension."""
        return _point(values, self.m, flag)

    def provenance(self) -> Dict[str, Any]:
        """Version, effective rule sizes, seed and tolerance of the run."""
        return {
            "version": getattr(weighted_means, "__version__", "unknown"),
            "subcommand": self.subcommand,
            "m": self.m,
            "rules": self.settings.to_dict(),
            "seed": self.settings.seed,
            "tolerance": self.tolerance,
            "config": str(self.config_path) if self.config_path else None,
            **self.specs,
        }


def _point(values: Optional[List[float]], m: int, flag: str) -> Point:
    if values is None:
        return Point((0.0,) * m)
    if len(values) != m:
        raise CommandLineInputError(
            f"{flag} needs {m} coordinates, got {len(values)}"
        )
    return Point(tuple(values))


def _domain_spec(domain: Domain):
    try:
        return domain_to_spec(domain)
    except ValueError:
        return domain.describe()
