"""
dtanma Command Line Interface
"""

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click
from rich import traceback
from rich.console import Console
from rich.table import Table
from rich.text import Text
from rich_click import RichCommand, RichGroup, rich_click

from dtanma._version import __application__, __version__
from dtanma.config import (
    CovarianceStructure,
    FileConfig,
    ModelChoice,
    PosteriorConfig,
    PriorPreset,
    logging_config,
)
from dtanma.config.logging_config import run_log, set_up_logging
from dtanma.containers import AccuracySummary, Diagnostics, RunConfig, format_interval
from dtanma.dataset import (
    build_network,
    check_connected,
    missingness_matrix,
    read_dataset,
    restrict_to_comparative,
    serialize_dataset,
    studywise_proportions,
)
from dtanma.exceptions import (
    ConfigurationError,
    DtaNmaError,
    SamplerInitializationError,
)
from dtanma.pipeline import (
    StoredRun,
    fit_run,
    load_run,
    summarize_draws,
    write_run,
)
from dtanma.report import (
    forest_plot,
    network_plot,
    ranking_frame,
    trace_plot,
    write_frame,
)
from dtanma.sampler import diagnostics
from dtanma.simulate import impose_mar, load_truth, simulate_network
from dtanma.utils import describe_labels, log_dtanma, read_yaml

logging.Logger.dtanma = log_dtanma  # type: ignore[attr-defined]
logger = logging.getLogger(__name__)

rich_click.STYLE_OPTION = "bold green"
rich_click.STYLE_SWITCH = "bold blue"
rich_click.STYLE_METAVAR = "bold red"
rich_click.STYLE_HELPTEXT_FIRST_LINE = "bold blue"
rich_click.STYLE_HELPTEXT = ""
rich_click.STYLE_HEADER_TEXT = "bold green"
rich_click.STYLE_OPTION_DEFAULT = "bold yellow"
rich_click.STYLE_OPTION_HELP = ""
rich_click.STYLE_ERRORS_SUGGESTION = "bold red"
rich_click.STYLE_OPTIONS_TABLE_BOX = "SIMPLE_HEAVY"
rich_click.STYLE_COMMANDS_TABLE_BOX = "SIMPLE_HEAVY"
if logging_config.LOG_HANDLER == "python":
    rich_click.COLOR_SYSTEM = None


class ExitCodes:
    """
    Process Exit Statuses
    """

    OK: int = 0
    ERROR: int = 1
    SAMPLER: int = 2
    USAGE: int = 64


class DtaNmaGroup(RichGroup):
    """
    Command group that turns dtanma errors into exit statuses
    """

    def main(  # type: ignore[override]
        self,
        args: Optional[Sequence[str]] = None,
        prog_name: Optional[str] = None,
        complete_var: Optional[str] = None,
        standalone_mode: bool = True,
        **extra: Any,
    ) -> int:
        try:
            result = super().main(
                args=args,
                prog_name=prog_name,
                complete_var=complete_var,
                standalone_mode=False,
                **extra,
            )
            exit_code = result if isinstance(result, int) else ExitCodes.OK
        except click.UsageError as error:
            error.show()
            exit_code = ExitCodes.USAGE
        except click.ClickException as error:
            error.show()
            exit_code = error.exit_code
        except click.exceptions.Abort:
            logger.debug("Handling Exit Request")
            exit_code = ExitCodes.ERROR
        except ConfigurationError as error:
            logger.error("Usage error: %s", error)
            exit_code = ExitCodes.USAGE
        except SamplerInitializationError as error:
            logger.error("Sampler initialization failed: %s", error)
            exit_code = ExitCodes.SAMPLER
        except (DtaNmaError, OSError) as error:
            logger.error("%s: %s", error.__class__.__name__, error)
            exit_code = ExitCodes.ERROR
        if standalone_mode:
            sys.exit(exit_code)
        return exit_code


@dataclass
class DtaNmaContext:
    """
    Context Object Passed Around Application
    """

    debug: Optional[bool] = None
    config_file: Optional[Path] = None


debug_option = click.option(
    "--debug/--no-debug", default=None, help="Enable extra debugging output"
)


def _set_up_debug(debug: Optional[bool] = None) -> None:
    """
    Set up the dtanma Debugging Mode
    """
    if debug is None:
        debug = False
    if debug is True:
        set_up_logging(log_level=logging.DEBUG)
        logger.debug("Setting up dtanma debugging")
        logger.debug("dtanma Version: %s", __version__)
        logger.debug("Python Version: %s", sys.version.split(" ")[0])
        logger.debug("Platform: %s", sys.platform)
    traceback.install(show_locals=debug, suppress=[click, rich_click])


def _command_debug(context: DtaNmaContext, debug: Optional[bool]) -> None:
    if context.debug is None:
        context.debug = debug
        _set_up_debug(debug=context.debug)


def _print_table(title: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    table = Table(title=title, box=None, header_style="bold green")
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*[Text(str(value)) for value in row])
    Console().print(table)


@click.group(cls=DtaNmaGroup)
@debug_option
@click.option(
    "--config",
    "config_file",
    default=None,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="YAML or JSON file of `fit` settings. Flags take precedence.",
    envvar="DTA_NMA_CONFIG",
)
@click.version_option(version=__version__, prog_name=__application__)
@click.pass_context
def dtanma_command_line(
    ctx: click.core.Context, debug: Optional[bool], config_file: Optional[Path]
) -> None:
    """
    Network meta-analysis of diagnostic test accuracy.

    dtanma fits arm-based and contrast-based hierarchical models to
    study-level 2x2 counts of several diagnostic tests, summarises
    sensitivities, specificities, relative measures and test rankings,
    and draws forest, network and trace plots as SVG.
    """
    set_up_logging(log_level=None if debug is not True else logging.DEBUG)
    logger.dtanma("dtanma, network meta-analysis of test accuracy")  # type: ignore[attr-defined]
    ctx.obj = DtaNmaContext(debug=debug, config_file=config_file)
    _set_up_debug(debug=debug)


# Shared Arguments
data_option = click.option(
    "--data",
    default=None,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Study-arm CSV file",
)
stratum_option = click.option(
    "--stratum",
    default=None,
    help="Analyse only the rows of this stratum (e.g. a disease threshold)",
)
outdir_option = click.option(
    "--outdir",
    default=None,
    type=click.Path(file_okay=False, path_type=Path),
    help="Directory for the output files",
)
seed_option = click.option(
    "--seed",
    default=None,
    type=click.IntRange(min=0),
    help="Random seed. Defaults to DTA_NMA_SEED, then a fixed constant.",
)
run_dir_argument = click.argument(
    "run_dir", type=click.Path(exists=True, file_okay=False, path_type=Path)
)


@dtanma_command_line.command(cls=RichCommand)
@click.option(
    "--model",
    default=None,
    type=click.Choice([item.value for item in ModelChoice]),
    help="Arm-based (ab) or contrast-based (cb) model. Default ab.",
)
@data_option
@stratum_option
@click.option(
    "--covariance",
    default=None,
    type=click.Choice([item.value for item in CovarianceStructure]),
    help="Within-study covariance: compound symmetry (cs) or unstructured (un)",
)
@click.option(
    "--prior",
    default=None,
    type=click.Choice([item.value for item in PriorPreset]),
    help="Prior preset. Default eq14.",
)
@click.option(
    "--fixed-tau",
    default=None,
    type=click.FloatRange(min=0, min_open=True),
    help="Hold the within-study SDs at this constant",
)
@click.option(
    "--pooled-tau/--per-test-tau",
    default=None,
    help="Marginal accuracies use one within-study SD per outcome, "
    "the root mean square over tests",
)
@click.option("--chains", default=None, type=click.IntRange(min=1), help="Number of chains")
@click.option(
    "--warmup", default=None, type=click.IntRange(min=1), help="Warmup iterations per chain"
)
@click.option(
    "--samples",
    default=None,
    type=click.IntRange(min=1),
    help="Post-warmup iterations per chain",
)
@click.option("--thin", default=None, type=click.IntRange(min=1), help="Keep every n-th draw")
@click.option(
    "--target-accept",
    default=None,
    type=click.FloatRange(min=0, max=1, min_open=True, max_open=True),
    help="Target acceptance statistic of the step size adaptation",
)
@click.option(
    "--max-tree-depth", default=None, type=click.IntRange(min=1), help="Maximum tree depth"
)
@seed_option
@outdir_option
@click.option(
    "--baseline",
    default=None,
    type=int,
    help="Common comparator test (required by --model cb and --comparative-only)",
)
@click.option(
    "--reference", default=None, help="Reference test of the relative measures"
)
@click.option(
    "--comparative-only/--all-studies",
    default=None,
    help="Fit only studies comparing the baseline with another test",
)
@click.option(
    "--mc-samples",
    default=None,
    type=click.IntRange(min=1),
    help="Monte Carlo samples per draw for marginal accuracies",
)
@click.option(
    "--covariate",
    "covariates",
    multiple=True,
    type=float,
    help="Covariate value for the accuracy summary, once per covariate",
)
@debug_option
@click.pass_obj
def fit(context: DtaNmaContext, debug: Optional[bool], **flags: Any) -> None:
    """
    Fit a model and write draws, diagnostics and a summary table

    The output directory receives the draws CSV, the summary CSV and a
    JSON run bundle carrying the diagnostics, the posterior summaries and
    the exact run configuration.
    """
    _command_debug(context, debug)
    file_values = read_yaml(context.config_file) if context.config_file else None
    config = RunConfig.resolve(flags=flags, file_values=file_values)
    log_level = logging.DEBUG if context.debug else logging.INFO
    with run_log(config.outdir, log_level=log_level) as log_path:
        result = fit_run(config)
        paths = write_run(result, config)
        _log_summary(result.summary)
        logger.dtanma(  # type: ignore[attr-defined]
            "Max R-hat %.3f (all <= 1.1: %s), %d divergent transitions",
            result.diagnostics.max_rhat,
            result.diagnostics.all_rhat_ok,
            result.diagnostics.n_divergent,
        )
        for path in paths.values():
            logger.info("Wrote %s", path)
    logger.info("Run log: %s", log_path)


def _log_summary(summary: AccuracySummary) -> None:
    for test in summary.tests:
        logger.dtanma(  # type: ignore[attr-defined]
            "Test %s: sensitivity %s, specificity %s",
            test,
            summary.lookup(test, "sensitivity").interval,
            summary.lookup(test, "specificity").interval,
        )


@dtanma_command_line.command(cls=RichCommand)
@click.option(
    "--truth",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="YAML or JSON file of true parameters and the study design",
)
@click.option(
    "--keep-prob",
    multiple=True,
    type=click.FloatRange(min=0, max=1),
    help="Delete arms at random: one probability for all tests or one per test",
)
@click.option(
    "--mar-seed",
    default=None,
    type=click.IntRange(min=0),
    help="Seed of the arm deletion. Defaults to the data seed plus one.",
)
@seed_option
@outdir_option
@debug_option
@click.pass_obj
def simulate(
    context: DtaNmaContext,
    debug: Optional[bool],
    truth: Path,
    keep_prob: Tuple[float, ...],
    mar_seed: Optional[int],
    seed: Optional[int],
    outdir: Optional[Path],
) -> None:
    """
    Simulate a network from known parameters

    Writes the simulated dataset in the study-arm CSV schema and the
    latent study effects, arm errors and probabilities beside it. With
    --keep-prob, arms are deleted at random and the complete network is
    kept as a separate file.
    """
    _command_debug(context, debug)
    spec = load_truth(truth)
    if seed is not None:
        spec = spec.copy(update={"seed": seed})
    directory = outdir if outdir is not None else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    ds, latent = simulate_network(spec)
    latent_path = directory / FileConfig.LATENT_FILE
    write_frame(latent.to_frame(), latent_path)
    if keep_prob:
        complete_path = directory / FileConfig.COMPLETE_DATA_FILE
        complete_path.write_text(serialize_dataset(ds), encoding="utf-8")
        deletion = impose_mar(
            ds,
            keep_prob=keep_prob[0] if len(keep_prob) == 1 else list(keep_prob),
            seed=mar_seed if mar_seed is not None else spec.seed + 1,
        )
        ds = deletion.dataset
        logger.info("Wrote %s", complete_path)
    data_path = directory / FileConfig.SIMULATED_DATA_FILE
    data_path.write_text(serialize_dataset(ds), encoding="utf-8")
    logger.dtanma(  # type: ignore[attr-defined]
        "Simulated %d studies, %d tests, %d arms", ds.n_studies, ds.n_tests, ds.n_arms
    )
    logger.info("Wrote %s", data_path)


@dtanma_command_line.command(cls=RichCommand)
@run_dir_argument
@click.option(
    "--reference", default=None, help="Reference test. Defaults to the fitted run's."
)
@click.option(
    "--tie-tol",
    default=PosteriorConfig.TIE_TOLERANCE,
    show_default=True,
    type=click.FloatRange(min=0),
    help="Accuracy differences up to this size count as ties",
)
@outdir_option
@debug_option
@click.pass_obj
def rank(
    context: DtaNmaContext,
    debug: Optional[bool],
    run_dir: Path,
    reference: Optional[str],
    tie_tol: float,
    outdir: Optional[Path],
) -> None:
    """
    Rank the tests of a fitted run by DOR and superiority index
    """
    _command_debug(context, debug)
    run = load_run(run_dir)
    summary, _ = summarize_draws(
        run.draws,
        reference=reference if reference is not None else run.config.reference,
        stratum=run.config.stratum,
        mc_samples=run.config.mc_samples,
        seed=run.config.seed,
        covariates=run.config.covariates,
        tie_tol=tie_tol,
        pooled_tau=run.config.pooled_tau,
    )
    frame = ranking_frame(summary)
    directory = outdir if outdir is not None else run_dir
    directory.mkdir(parents=True, exist_ok=True)
    write_frame(frame, directory / FileConfig.RANKING_FILE)
    superiority = {item.test: item for item in summary.superiority}
    rows: List[List[Any]] = []
    for row in summary.dor:
        index = superiority.get(row.test)
        rows.append(
            [
                row.test,
                row.interval,
                "-"
                if index is None
                else format_interval(index.median, index.lower, index.upper),
                "-" if index is None else index.n_infinite,
            ]
        )
    rows.sort(key=lambda item: -summary.lookup(item[0], "dor").mean)
    _print_table(
        f"Test ranking ({summary.kind})",
        ["test", "DOR", "superiority index", "infinite draws"],
        rows,
    )


def _diagnostics_rows(result: Diagnostics) -> List[List[Any]]:
    return [
        [
            item.name,
            f"{item.mean:.3f}",
            f"{item.sd:.3f}",
            f"{item.rhat:.3f}",
            f"{item.n_eff:.0f}",
            f"{item.mcse:.4f}",
        ]
        for item in result.parameters
    ]


@dtanma_command_line.command(cls=RichCommand)
@run_dir_argument
@click.option(
    "--parameter",
    "parameters",
    multiple=True,
    help="Only these parameters (repeatable). Default all.",
)
@debug_option
@click.pass_obj
def diagnose(
    context: DtaNmaContext,
    debug: Optional[bool],
    run_dir: Path,
    parameters: Tuple[str, ...],
) -> None:
    """
    Print R-hat, effective sample size and MCSE of a fitted run
    """
    _command_debug(context, debug)
    run = load_run(run_dir)
    unknown = [name for name in parameters if name not in run.draws.layout.names]
    if unknown:
        raise ConfigurationError(f"unknown parameter(s): {describe_labels(unknown)}")
    result = diagnostics(run.draws, names=list(parameters) or None)
    _print_table(
        f"Convergence diagnostics: {result.n_chains} chains x {result.n_draws} draws",
        ["parameter", "mean", "sd", "R-hat", "n_eff", "MCSE"],
        _diagnostics_rows(result),
    )
    logger.dtanma(  # type: ignore[attr-defined]
        "Max R-hat %.3f (all <= 1.1: %s), %d divergent transitions",
        result.max_rhat,
        result.all_rhat_ok,
        result.n_divergent,
    )


def _plot_dataset(run: StoredRun, data: Optional[Path]):
    path = data if data is not None else run.config.data
    if path is None or not Path(path).is_file():
        logger.info("No dataset available: forest plot without study points")
        return None
    ds = read_dataset(path, stratum_filter=run.config.stratum)
    if run.config.comparative_only and data is None:
        ds = restrict_to_comparative(ds, baseline_test=int(run.config.baseline))  # type: ignore[arg-type]
    return ds


@dtanma_command_line.command(cls=RichCommand)
@click.argument(
    "run_dirs",
    nargs=-1,
    required=True,
    type=click.Path(exists=True, file_okay=False, path_type=Path),
)
@data_option
@click.option(
    "--label",
    "labels",
    multiple=True,
    help="Legend entry per run directory (repeatable)",
)
@click.option(
    "--trace/--no-trace",
    default=True,
    show_default=True,
    help="Also draw trace plots of the first run",
)
@click.option(
    "--trace-parameter",
    "trace_parameters",
    multiple=True,
    help="Parameters of the trace plot (repeatable)",
)
@outdir_option
@debug_option
@click.pass_obj
def plot(
    context: DtaNmaContext,
    debug: Optional[bool],
    run_dirs: Tuple[Path, ...],
    data: Optional[Path],
    labels: Tuple[str, ...],
    trace: bool,
    trace_parameters: Tuple[str, ...],
    outdir: Optional[Path],
) -> None:
    """
    Draw forest, network and trace plots as SVG

    Up to three run directories are overlaid on the forest plot in black,
    red and blue, for instance an all-studies fit, a comparative-subset
    fit and a contrast-based fit. Study points and the network diagram
    come from the first run's dataset, or from --data.
    """
    _command_debug(context, debug)
    if len(run_dirs) > 3:
        raise ConfigurationError("the forest plot overlays at most three runs")
    if labels and len(labels) != len(run_dirs):
        raise ConfigurationError("give one --label per run directory")
    runs = [load_run(run_dir) for run_dir in run_dirs]
    directory = outdir if outdir is not None else run_dirs[0]
    directory.mkdir(parents=True, exist_ok=True)
    ds = _plot_dataset(runs[0], data)
    written: Dict[str, Path] = {
        "forest": forest_plot(
            [run.summary for run in runs],
            studywise_proportions(ds) if ds is not None else None,
            directory / FileConfig.FOREST_PLOT_FILE,
            labels=list(labels) or [run.directory.name for run in runs],
        )
    }
    if ds is not None:
        written["network"] = network_plot(
            build_network(ds), directory / FileConfig.NETWORK_PLOT_FILE
        )
    if trace:
        written["trace"] = trace_plot(
            runs[0].draws, list(trace_parameters), directory / FileConfig.TRACE_PLOT_FILE
        )
    for path in written.values():
        logger.info("Wrote %s", path)


@dtanma_command_line.command(cls=RichCommand)
@click.option(
    "--data",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Study-arm CSV file",
)
@stratum_option
@debug_option
@click.pass_obj
def validate(
    context: DtaNmaContext,
    debug: Optional[bool],
    data: Path,
    stratum: Optional[str],
) -> None:
    """
    Check a dataset and print its network report

    A disconnected network is reported with a warning but is not an
    error.
    """
    _command_debug(context, debug)
    ds = read_dataset(data, stratum_filter=stratum)
    graph = build_network(ds)
    report = check_connected(graph)
    matrix = missingness_matrix(ds)
    observed = matrix.as_array()
    _print_table(
        f"Network: {ds.n_studies} studies, {ds.n_tests} tests, {ds.n_arms} arms",
        ["test", "studies", "compared with"],
        [
            [
                label,
                count,
                ", ".join(
                    f"{other} ({graph.edge_weight(label, other)})"
                    for other in graph.nodes
                    if other != label and graph.edge_weight(label, other) > 0
                )
                or "-",
            ]
            for label, count in sorted(graph.nodes.items())
        ],
    )
    Console().print(
        Text(
            f"connected: {str(report.connected).lower()}; components: "
            + "; ".join(describe_labels(component) for component in report.components)
        )
    )
    logger.dtanma(  # type: ignore[attr-defined]
        "%d of %d study-test cells observed",
        int(observed.sum()),
        observed.size,
    )
    if ds.n_covariates:
        logger.info("Studies carry %d covariate(s)", ds.n_covariates)


def cli():
    """
    dtanma Command Line Utility Wrapper
    """
    try:
        dtanma_command_line()
    except KeyboardInterrupt:
        logger.debug("Handling Exit Request")


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line without exiting the interpreter

    Parameters
    ----------
    argv: Optional[Sequence[str]]
        Arguments after the program name (default `sys.argv[1:]`)

    Returns
    -------
    int
        0 on success, 1 on dataset or validation errors, 2 when the
        sampler finds no starting point, 64 on usage errors
    """
    return dtanma_command_line.main(
        args=list(argv) if argv is not None else None,
        prog_name=__application__,
        standalone_mode=False,
    )


if __name__ == "__main__":
    cli()
