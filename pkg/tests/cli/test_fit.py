"""
CLI Testing: `dtanma fit ...`
"""

import json
import logging
from pathlib import Path

import pandas as pd

from dtanma.config import FileConfig
from tests.conftest import DtaNmaRunner, cli_status_checker, write_text

logger = logging.getLogger(__name__)


def test_fit_outputs(fitted_run_dir: Path) -> None:
    """
    Draws, summary table and run bundle are written
    """
    for name in (FileConfig.DRAWS_FILE, FileConfig.SUMMARY_FILE, FileConfig.DIAGNOSTICS_FILE):
        assert (fitted_run_dir / name).is_file()
    bundle = json.loads((fitted_run_dir / FileConfig.DIAGNOSTICS_FILE).read_text())
    assert isinstance(bundle["all_rhat_ok"], bool)
    assert bundle["config"]["seed"] == 5
    assert bundle["config"]["model"] == "ab"
    assert bundle["summary"]["kind"] == "marginal"
    assert bundle["variance"] is not None
    draws = pd.read_csv(fitted_run_dir / FileConfig.DRAWS_FILE)
    assert len(draws) == 2 * 100
    assert "mu[1,2]" in draws.columns
    summary = pd.read_csv(fitted_run_dir / FileConfig.SUMMARY_FILE)
    assert {"sensitivity", "specificity", "dor", "rho"} <= set(summary["measure"])
    run_log = (fitted_run_dir / FileConfig.RUN_LOG_FILE).read_text(encoding="utf-8")
    assert "Sampling 2 chain(s)" in run_log
    assert "Max R-hat" in run_log


def test_cb_requires_baseline(cli_runner: DtaNmaRunner, two_test_csv: Path) -> None:
    """
    --model cb without --baseline is a usage error
    """
    test_command = f"""
    dtanma fit \
        --model cb \
        --data {two_test_csv}
    """
    result = cli_runner.run_dtanma_command(command=test_command)
    assert result.exit_code == 64
    cli_status_checker(result=result, exit_code_zero=False)


def test_unknown_flag(cli_runner: DtaNmaRunner, two_test_csv: Path) -> None:
    """
    Unknown flags are usage errors
    """
    result = cli_runner.run_dtanma_command(
        command=f"dtanma fit --data {two_test_csv} --no-such-flag"
    )
    assert result.exit_code == 64


def test_missing_data(cli_runner: DtaNmaRunner) -> None:
    """
    A fit without a dataset is a usage error
    """
    result = cli_runner.run_dtanma_command(command="dtanma fit --chains 1")
    assert result.exit_code == 64


def test_cb_rejects_single_test_studies(
    cli_runner: DtaNmaRunner, two_test_csv: Path, tmp_path: Path
) -> None:
    """
    Studies without the baseline make the contrast-based fit fail
    """
    test_command = f"""
    dtanma fit \
        --model cb \
        --baseline 1 \
        --data {two_test_csv} \
        --outdir {tmp_path / "cb"}
    """
    result = cli_runner.run_dtanma_command(command=test_command)
    assert result.exit_code == 1
    assert "s3" in result.output


def test_cb_fit_on_comparative_subset(
    cli_runner: DtaNmaRunner, two_test_csv: Path, tmp_path: Path
) -> None:
    """
    The contrast-based model reports conditional accuracies
    """
    outdir = tmp_path / "cb"
    test_command = f"""
    dtanma fit \
        --model cb \
        --baseline 1 \
        --comparative-only \
        --data {two_test_csv} \
        --chains 2 \
        --warmup 60 \
        --samples 40 \
        --seed 3 \
        --outdir {outdir}
    """
    result = cli_runner.run_dtanma_command(command=test_command)
    cli_status_checker(result=result)
    bundle = json.loads((outdir / FileConfig.DIAGNOSTICS_FILE).read_text())
    assert bundle["summary"]["kind"] == "conditional"
    assert bundle["variance"] is None
    assert bundle["config"]["baseline"] == 1


def test_config_file(cli_runner: DtaNmaRunner, two_test_csv: Path, tmp_path: Path) -> None:
    """
    Settings come from the configuration file, flags win
    """
    outdir = tmp_path / "from_file"
    config_file = write_text(
        tmp_path / "fit.yaml",
        f"""
        data: {two_test_csv}
        chains: 1
        warmup: 40
        samples: 20
        seed: 8
        mc-samples: 20
        outdir: {outdir}
        """,
    )
    test_command = f"""
    dtanma --config {config_file} \
        fit \
        --seed 9
    """
    result = cli_runner.run_dtanma_command(command=test_command)
    cli_status_checker(result=result)
    bundle = json.loads((outdir / FileConfig.DIAGNOSTICS_FILE).read_text())
    assert bundle["config"]["chains"] == 1
    assert bundle["config"]["seed"] == 9


def test_config_file_unknown_key(cli_runner: DtaNmaRunner, tmp_path: Path) -> None:
    """
    Unknown configuration keys are usage errors
    """
    config_file = write_text(tmp_path / "fit.yaml", "chainz: 2\n")
    result = cli_runner.run_dtanma_command(command=f"dtanma --config {config_file} fit")
    assert result.exit_code == 64
    assert "chainz" in result.output


def test_bad_seed_environment(
    cli_runner: DtaNmaRunner, two_test_csv: Path, monkeypatch
) -> None:
    """
    DTA_NMA_SEED must be an integer
    """
    monkeypatch.setenv(FileConfig.SEED_ENVIRONMENT_VARIABLE, "abc")
    result = cli_runner.run_dtanma_command(command=f"dtanma fit --data {two_test_csv}")
    assert result.exit_code == 64


def test_fit_is_byte_reproducible(
    cli_runner: DtaNmaRunner, two_test_csv: Path, tmp_path: Path
) -> None:
    """
    Identical configuration and seed give an identical draws file
    """
    contents = []
    for name in ("first", "second"):
        test_command = f"""
        dtanma fit \
            --data {two_test_csv} \
            --chains 2 \
            --warmup 60 \
            --samples 20 \
            --seed 13 \
            --mc-samples 50 \
            --outdir {tmp_path / name}
        """
        result = cli_runner.run_dtanma_command(command=test_command)
        cli_status_checker(result=result)
        contents.append((tmp_path / name / FileConfig.DRAWS_FILE).read_bytes())
    assert contents[0] == contents[1]


def test_pooled_tau_flag(
    cli_runner: DtaNmaRunner, two_test_csv: Path, tmp_path: Path
) -> None:
    """
    --pooled-tau reaches the run bundle and is reused by `rank`
    """
    outdir = tmp_path / "pooled"
    test_command = f"""
    dtanma fit \
        --data {two_test_csv} \
        --covariance un \
        --pooled-tau \
        --chains 2 \
        --warmup 60 \
        --samples 20 \
        --mc-samples 50 \
        --outdir {outdir}
    """
    result = cli_runner.run_dtanma_command(command=test_command)
    cli_status_checker(result=result)
    bundle = json.loads((outdir / FileConfig.DIAGNOSTICS_FILE).read_text())
    assert bundle["config"]["pooled_tau"] is True
    result = cli_runner.run_dtanma_command(command=f"dtanma rank {outdir}")
    cli_status_checker(result=result)


def test_pooled_tau_is_arm_based_only(cli_runner: DtaNmaRunner, two_test_csv: Path) -> None:
    """
    The contrast-based model has no within-study SDs to pool
    """
    result = cli_runner.run_dtanma_command(
        command=f"dtanma fit --data {two_test_csv} --model cb --baseline 1 --pooled-tau"
    )
    assert result.exit_code == 64
