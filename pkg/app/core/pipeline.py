import logging
import os

from app.core.consensus import (
    ConsensusReport,
    apply_consensus,
    consensus_rows,
    plan_validation,
)
from app.core.errors import AuditError, MalformedFile, UnsupportedFormat
from app.core.ingest import parse_coder_table, parse_concern_files, write_concerns
from app.core.metrics import summarize
from app.core.model import AuditDataset
from app.core.reliability import krippendorff_alpha_nominal
from app.core.report import (
    MetricsReport,
    classification_table,
    matrix_dump,
    matrix_grid,
    rootcause_heatmap,
    tier_counts,
)
from app.core.riskmatrix import classification_diff
from app.core.schemas import PipelineResult, RunConfig
from app.formatters.render import OutputFormat, render
from app.services.file_service import read_input

logger = logging.getLogger(__name__)

DEFAULT_FORMATS = {
    "validate": OutputFormat.TEXT,
    "metrics": OutputFormat.JSON,
    "classify": OutputFormat.CSV,
    "alpha": OutputFormat.TEXT,
    "consensus": OutputFormat.MARKDOWN,
    "plan": OutputFormat.TEXT,
    "report": OutputFormat.MARKDOWN,
    "matrix-dump": OutputFormat.JSON,
}

# Commands that read concern CSVs; alpha reads a coder table, matrix-dump nothing.
CONCERN_COMMANDS = {"validate", "metrics", "classify", "consensus", "plan", "report"}

# MalformedFile and bad format choices are usage problems, everything else a domain error.
USAGE_ERRORS = (MalformedFile, UnsupportedFormat)


def exit_code_for(exc: Exception) -> int:
    if isinstance(exc, (OSError, *USAGE_ERRORS)):
        return 2
    return 1


def output_format(config: RunConfig) -> OutputFormat:
    if config.output_format:
        return OutputFormat.parse(config.output_format)
    if config.command == "consensus" and config.kind == "dataset":
        return OutputFormat.CSV
    return DEFAULT_FORMATS[config.command]


def _panel_size(config: RunConfig, dataset: AuditDataset) -> int | None:
    if config.panel_size is not None:
        return config.panel_size
    experts = {e for c in dataset.concerns if c.ballot for e in c.ballot.verdicts}
    return len(experts) or None


def _disagreements(dataset: AuditDataset) -> int:
    cells = {(cell.probability, cell.severity) for cell in classification_diff()}
    return sum(1 for c in dataset.active() if (c.probability, c.severity) in cells)


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Run one command as a sequence of named steps.

    Steps share a small state dict. An ``AuditError`` or ``OSError`` in any
    step stops the run and is reported on the result with its exit code;
    rendered bytes are returned, never written here.
    """
    warnings: list[str] = []
    errors: list[str] = []
    state: dict = {}
    fmt = None

    def ingest():
        sources = [(os.path.basename(path), read_input(path)) for path in config.inputs]
        dataset, report = parse_concern_files(sources, config.column_map)
        state["dataset"], state["ingest"] = dataset, report
        warnings.extend(f"{d.source}: row {d.row} {d.field}: {d.message}" for d in report.warnings)
        if report.has_errors and config.command != "validate":
            errors.extend(f"{d.source}: row {d.row} {d.field}: {d.message}" for d in report.errors)
            raise AuditError(f"{len(report.errors)} row error(s) in input; run 'validate' for details")

    def consensus():
        dataset = state["dataset"]
        if not any(c.ballot for c in dataset.concerns):
            return
        state["panel_size"] = _panel_size(config, dataset)
        state["dataset"] = apply_consensus(dataset, config.threshold, state["panel_size"])

    def aggregate():
        command, dataset = config.command, state.get("dataset")
        if command == "validate":
            state["aggregate"] = state["ingest"]
        elif command == "metrics":
            disagreeing = _disagreements(dataset)
            if disagreeing:
                message = f"{disagreeing} concern(s) sit where grid and rule tiers disagree"
                logger.warning(message)
                warnings.append(message)
            summaries = summarize(dataset, by_standard=config.by_standard, mode=config.mode)
            state["aggregate"] = MetricsReport(standards=tuple(summaries), diff_cells=tuple(classification_diff()))
        elif command == "classify":
            state["aggregate"] = classification_table(dataset)
        elif command == "consensus":
            if config.kind == "dataset":
                state["aggregate"] = dataset
            else:
                state["aggregate"] = ConsensusReport(
                    rows=tuple(consensus_rows(dataset)),
                    threshold=config.threshold,
                    panel_size=state.get("panel_size"),
                )
        elif command == "plan":
            budget = config.budget if config.budget is not None else len(dataset.active())
            state["aggregate"] = plan_validation(dataset, budget, seed=config.seed, mode=config.mode)
        elif command == "report":
            kind = config.kind or "tiers"
            if kind == "tiers":
                state["aggregate"] = tier_counts(dataset, config.mode, config.standard)
            elif kind == "matrix":
                state["aggregate"] = matrix_grid(dataset, config.standard)
            elif kind in ("rootcause", "rootcause-probability"):
                columns = "probability" if kind == "rootcause-probability" else "tier"
                state["aggregate"] = rootcause_heatmap(dataset, config.standard, config.mode, columns)
            else:
                raise UnsupportedFormat(f"Unknown report kind '{kind}'")
        elif command == "alpha":
            table = parse_coder_table(read_input(config.inputs[0]))
            state["aggregate"] = krippendorff_alpha_nominal(table)
        elif command == "matrix-dump":
            state["aggregate"] = matrix_dump()

    def emit():
        target = state["aggregate"]
        if isinstance(target, AuditDataset):
            if fmt is not OutputFormat.CSV:
                raise UnsupportedFormat("The filtered dataset is only written as CSV")
            state["output"] = write_concerns(target)
        else:
            state["output"] = render(target, fmt)

    steps = []
    if config.command in CONCERN_COMMANDS:
        steps.append(("ingest", ingest))
    if config.command in CONCERN_COMMANDS - {"validate"}:
        steps.append(("consensus", consensus))
    steps.extend([("aggregate", aggregate), ("render", emit)])

    step_name = "format"
    try:
        fmt = output_format(config)
        for step_name, step_fn in steps:
            logger.debug(f"Running step '{step_name}' for '{config.command}'")
            step_fn()
    except (AuditError, OSError) as e:
        logger.error(f"Step '{step_name}' failed: {e}")
        errors.append(str(e))
        return PipelineResult(
            success=False, exit_code=exit_code_for(e),
            warnings=warnings, errors=errors, ingest=state.get("ingest"),
        )

    report = state.get("ingest")
    failed = report is not None and report.has_errors
    return PipelineResult(
        success=not failed, exit_code=1 if failed else 0,
        warnings=warnings, errors=errors, ingest=report, output=state["output"],
    )
