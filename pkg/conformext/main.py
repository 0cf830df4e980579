# conformext/main.py

import argparse
import logging
import sys
from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from .config import init_logging, settings
from .crud.reports import RunRepository
from .exceptions import ConfigError, ConformextError
from .models.crosscut import CROSSCUT_COLUMNS
from .models.integral_report import ANNULUS_COLUMNS
from .models.metrics import METRIC_SAMPLE_COLUMNS
from .models.run_config import CounterexampleRun, ExtensionRun, IntegrabilityRun, RunConfig
from .services.bad_parametrization import bad_parametrization, parametrization_from_plan, w11_lowerbound_probe
from .services.boundary import OwnTrace
from .services.counterexample import (
    DEFAULT_TRUNCATION,
    SPOT_CHECKS,
    build_counterexample_plan,
    verify_counterexample,
)
from .services.crosscuts import FamilyImages, build_dyadic_cycles, crosscut_sum
from .services.domains import load_domain
from .services.extension import build_extension
from .services.integrability import phi_hyperbolic_area_integral
from .services.layout import TubeDistanceOracle, layout_polylines, unfolded_chain
from .services.metrics import comparability_report
from .utils.parsing import parse_phi, parse_point
from .utils.svg import SvgCanvas

logger = logging.getLogger(__name__)

FIGURE_GENERATIONS = 4
UNFOLDED_TRAPEZOIDS = 8
METRIC_PAIRS = 8


class _Parser(argparse.ArgumentParser):
    """Usage errors surface as ConfigError (exit 1) instead of argparse's exit 2."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="conformext", description="Conformal extension experiments on Jordan domains")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    for name, help_text in [
        ("integrability", "area integral of phi(h(z0, z)) over the domain"),
        ("extension", "dyadic crosscut sum and finite-depth extension energy"),
        ("counterexample", "folded trapezoid domain, its verification and the extension probe"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--domain", default="square", help="vertex JSON file, or `disk` / `square`")
        cmd.add_argument("--phi", default="alpha:1", help="alpha:X or table:PATH")
        cmd.add_argument("--basepoint", default="0,0", help="X,Y")
        cmd.add_argument("--p", type=float, default=1.5)
        cmd.add_argument("--depth", type=int, default=10)
        cmd.add_argument("--groups", type=int, default=6)
        cmd.add_argument("--pitch", type=float, default=settings.default_pitch)
        cmd.add_argument("--out", default=settings.get_out_dir())
        cmd.add_argument("--seed", type=int, default=settings.seed)
        cmd.add_argument("--truncation", type=int, default=None, help="sequence length N")
        cmd.add_argument("--log-level", default=None)
    return parser


def parse_config(argv: Optional[List[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    init_logging(args.log_level)
    try:
        return RunConfig(
            command=args.command,
            domain=args.domain,
            phi=args.phi,
            basepoint=parse_point(args.basepoint),
            p=args.p,
            depth=args.depth,
            groups=args.groups,
            pitch=args.pitch,
            out=args.out,
            seed=args.seed,
            truncation=args.truncation,
        )
    except ValidationError as err:
        raise ConfigError(str(err)) from err


def _outline(canvas: SvgCanvas, vertices: np.ndarray) -> None:
    canvas.polygon(vertices[:, 0] + 1j * vertices[:, 1], color="#000000")


def cmd_integrability(config: RunConfig) -> int:
    domain, cmap = load_domain(config.domain, config.basepoint)
    spec = parse_phi(config.phi)
    report = phi_hyperbolic_area_integral(cmap, spec)
    comparability = comparability_report(cmap, domain, METRIC_PAIRS, config.pitch, config.seed)
    repo = RunRepository(config.out)
    repo.save_report(IntegrabilityRun(config=config, integral=report, comparability=comparability))
    repo.save_table("annuli", ANNULUS_COLUMNS, report.annulus_rows())
    repo.save_table("metric_samples", METRIC_SAMPLE_COLUMNS, [s.to_row() for s in comparability.samples])
    canvas = SvgCanvas()
    _outline(canvas, domain.vertices)
    canvas.circle(config.basepoint, 0.01 * float(np.ptp(domain.vertices[:, 0])), fill="#c00000")
    repo.save_figure("domain", canvas)
    return report.exit_code


def cmd_extension(config: RunConfig) -> int:
    domain, cmap = load_domain(config.domain, config.basepoint)
    param = OwnTrace(cmap)
    family = build_dyadic_cycles(param, cmap, config.depth)
    images = FamilyImages(cmap, family)
    table = crosscut_sum(cmap, family, config.p, images=images)
    extension = build_extension(cmap, param, family, p=config.p, images=images)
    run = ExtensionRun(config=config, crosscut_sum=table, extension=extension)

    repo = RunRepository(config.out)
    repo.save_report(run)
    repo.save_table("crosscut_lengths", CROSSCUT_COLUMNS, table.length_rows())
    repo.save_table(
        "generations",
        ["n", "term", "partial"],
        [[n, float(t), float(s)] for n, t, s in zip(table.generations, table.terms, table.partials)],
    )
    repo.save_table(
        "energies", ["depth", "energy"], [[d, float(e)] for d, e in zip(extension.depths, extension.energies)]
    )
    canvas = SvgCanvas()
    _outline(canvas, domain.vertices)
    top = min(family.N, family.n0 + FIGURE_GENERATIONS - 1)
    palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"]
    for k, n in enumerate(range(family.n0, top + 1)):
        canvas.polylines(images.polylines(n), color=palette[k % len(palette)])
    repo.save_figure("crosscuts", canvas)
    return run.exit_code


def cmd_counterexample(config: RunConfig) -> int:
    spec = parse_phi(config.phi)
    plan = build_counterexample_plan(spec, config.groups, config.truncation or DEFAULT_TRUNCATION)
    verification = verify_counterexample(plan, config.pitch, SPOT_CHECKS, config.seed)

    layout = plan.layout
    oracle = TubeDistanceOracle(layout)
    bad = bad_parametrization(layout.domain, oracle, config.depth, omega0=layout.end_point)
    probe = w11_lowerbound_probe(bad, parametrization_from_plan(layout.domain, bad), oracle)
    run = CounterexampleRun(
        config=config,
        c_M=plan.c_M,
        grouping=plan.grouping,
        widths=list(layout.widths),
        verification=verification,
        parametrization=bad,
        probe=probe,
    )

    repo = RunRepository(config.out)
    repo.save_report(run)
    repo.save_plan(plan)
    last = int(plan.i[-1])
    repo.save_table(
        "sequences",
        ["n", "a_n", "a_hat_n", "b_n"],
        [[n, float(plan.sequences.a[n]), float(plan.a[n]), float(plan.b[n])] for n in range(1, last + 1)],
    )
    ends = np.concatenate([[0], layout.groups])
    repo.save_table(
        "groups",
        ["n", "last_index", "tube_length", "diameter_lower", "diameter_upper"],
        [
            [int(n), int(plan.i[n]), float(verification.tube_lengths[k]), float(verification.diameters[k]),
             float(verification.diameter_upper[k])]
            for k, n in enumerate(ends)
        ],
    )
    repo.save_table("probe", ["n", "L_n", "partial"], [
        [n, float(L), float(s)] for n, L, s in zip(probe.n, probe.L, probe.partials)
    ])

    chain = unfolded_chain(plan.a, plan.c_M, UNFOLDED_TRAPEZOIDS)
    canvas = SvgCanvas()
    _outline(canvas, chain.vertices)
    repo.save_figure("unfolded_chain", canvas)

    canvas = SvgCanvas()
    _outline(canvas, layout.domain.vertices)
    canvas.polylines(layout_polylines(layout), color="#bbbbbb", width=0.5)
    repo.save_figure("folded_layout", canvas)

    canvas = SvgCanvas()
    _outline(canvas, layout.domain.vertices)
    param = parametrization_from_plan(layout.domain, bad)
    for lo, hi in bad.source_arcs:
        canvas.polyline(param(np.linspace(lo, hi, 17)), color="#d62728", width=2.0)
    canvas.circle(layout.base, 0.25 * layout.cap_radius, fill="#1f77b4")
    repo.save_figure("bad_parametrization", canvas)

    if not verification.passed:
        logger.warning("verification incomplete: %s failed", ", ".join(verification.failures()))
    return run.exit_code


COMMANDS = {
    "integrability": cmd_integrability,
    "extension": cmd_extension,
    "counterexample": cmd_counterexample,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = parse_config(argv)
        return COMMANDS[config.command](config)
    except ConformextError as err:
        logger.error("%s: %s", err.__class__.__name__, err.detail)
        print(f"error: {err.detail}", file=sys.stderr)
        return err.exit_code
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
