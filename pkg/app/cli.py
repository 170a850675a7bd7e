"""
auditgap command line

Scores security concerns found in compliance standards, checks coder
agreement, applies the expert panel and renders the report tables.

Examples:
  # Check a concern sheet before scoring it
  python main.py validate concerns.csv

  # Comparative metrics per standard as markdown
  python main.py metrics concerns.csv --format md

  # Inter-coder reliability of a root-cause coding round
  python main.py alpha coders.csv
"""

import argparse
import logging
import sys

from pydantic import ValidationError

from app import __version__
from app.core.pipeline import run_pipeline
from app.core.riskmatrix import ClassificationMode
from app.core.schemas import RunConfig
from app.services.file_service import write_output
from config import settings

logger = logging.getLogger(__name__)

FORMAT_CHOICES = ["json", "csv", "md", "markdown", "svg", "text"]


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=FORMAT_CHOICES, default=None,
                        help="Output format (default depends on the command)")
    common.add_argument("--out", default=None, help="Write output here instead of standard output")
    common.add_argument("-v", "--verbose", action="store_true", help="Log debug messages to standard error")
    return common


def _concern_options() -> argparse.ArgumentParser:
    concern = argparse.ArgumentParser(add_help=False)
    concern.add_argument("inputs", nargs="+", help="Concern CSV file(s)")
    concern.add_argument("--map", dest="column_map", action="append", default=[], metavar="COL=FIELD",
                         help="Rename a source column to a canonical one; repeatable")
    concern.add_argument("--mode", choices=[m.value for m in ClassificationMode], default=settings.classification_mode,
                         help="Tier classifier: the CRM grid or the E/H rules")
    concern.add_argument("--threshold", type=float, default=settings.consensus_threshold,
                         help="Expert concurrence needed to keep a concern (default 0.75)")
    concern.add_argument("--panel", dest="panel_size", type=int, default=None,
                         help="Experts on the panel (default: experts found in the input)")
    return concern


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="auditgap",
        description="Security-gap metrics for compliance standards",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common, concern = _common_options(), _concern_options()

    sub.add_parser("validate", parents=[common, concern], help="Check concern CSVs and list diagnostics")

    metrics = sub.add_parser("metrics", parents=[common, concern], help="RSI, RCVS, AVPI and CSGP per standard")
    metrics.add_argument("--by", choices=["standard", "overall"], default="standard",
                         help="One summary per standard, or one over everything")

    sub.add_parser("classify", parents=[common, concern], help="Grid and rule tier for every concern")

    consensus = sub.add_parser("consensus", parents=[common, concern], help="Tally expert verdicts")
    consensus.add_argument("--kind", choices=["rows", "dataset"], default="rows",
                           help="Verdict table, or the filtered dataset as CSV")

    plan = sub.add_parser("plan", parents=[common, concern], help="Pick concerns for expert review")
    plan.add_argument("--budget", type=int, default=None, help="How many to pick (default: all Active)")
    plan.add_argument("--seed", type=int, default=settings.seed, help="Shuffle seed within a tier")

    report = sub.add_parser("report", parents=[common, concern], help="Tier counts and heatmap grids")
    report.add_argument("--kind", choices=["tiers", "matrix", "rootcause", "rootcause-probability"],
                        default="tiers", help="Which table or grid to render")
    report.add_argument("--standard", default=None, help="Restrict the table or grid to one standard")

    alpha = sub.add_parser("alpha", parents=[common], help="Krippendorff's alpha for a coder table")
    alpha.add_argument("inputs", nargs=1, help="Coder CSV file")

    sub.add_parser("matrix-dump", parents=[common], help="Print the risk matrix and codebook")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.model_fields and v is not None}
    if "by" in vars(args):
        fields["by_standard"] = args.by == "standard"
    return RunConfig(**fields)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = _run_config(args)
    except ValidationError as exc:
        for error in exc.errors():
            print(f"auditgap: error: {error['msg']}", file=sys.stderr)
        return 2

    result = run_pipeline(config)
    for message in result.errors:
        print(f"auditgap: error: {message}", file=sys.stderr)

    if result.output is not None:
        try:
            write_output(result.output, config.out)
        except OSError as exc:
            print(f"auditgap: error: {exc}", file=sys.stderr)
            return 2
    return result.exit_code
