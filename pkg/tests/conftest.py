"""
Pytest Fixtures Shared Across all Unit Tests
"""

import logging
from pathlib import Path
from textwrap import dedent

import numpy as np
import pytest
from click.testing import CliRunner, Result

from dtanma.cli import dtanma_command_line
from dtanma.containers import NetworkDataset, SamplerConfig
from dtanma.dataset import parse_dataset
from dtanma.models.layout import ParameterLayout
from dtanma.sampler import Draws
from dtanma.simulate import TruthSpec, simulate_network

logger = logging.getLogger(__name__)
[logging.getLogger(loggo).setLevel(logging.WARNING) for loggo in ["jax", "absl"]]
session_scope = pytest.fixture(scope="session")

TWO_TEST_CSV = """
study_id,test_id,tp,n_diseased,tn,n_healthy
s1,1,40,50,80,100
s1,2,35,50,85,100
s2,1,18,25,60,70
s2,2,20,25,55,70
s3,1,45,60,90,110
s4,2,30,40,70,80
s5,1,27,30,44,50
s5,2,22,30,46,50
"""

THREE_TEST_CSV = """
# three tests, test 3 only compared with test 1
study_id,test_id,tp,n_diseased,tn,n_healthy,stratum,cov_1
a,1,40,50,80,100,CIN2,0.5
a,2,35,50,85,100,CIN2,0.5
b,1,18,25,60,70,CIN2,-1.0
b,3,21,25,50,70,CIN2,-1.0
c,2,30,40,70,80,CIN2,0.0
c,1,31,40,72,80,CIN2,0.0
d,3,12,15,33,40,CIN2,1.2
d,1,11,15,35,40,CIN2,1.2
a,1,30,40,90,110,CIN3,0.5
"""

DISCONNECTED_CSV = """
study_id,test_id,tp,n_diseased,tn,n_healthy
s1,1,40,50,80,100
s1,2,35,50,85,100
s2,3,18,25,60,70
s3,3,20,25,55,70
"""

TRUTH_YAML = """
n_studies: 12
n_tests: 2
mu: [[1.5, 1.0], [1.0, 1.5]]
sigma: [0.5, 0.5]
rho: -0.3
tau: [0.2, 0.2]
n_diseased: [40, 80]
n_healthy: 100
seed: 7
"""


class DtaNmaRunner(CliRunner):
    """
    Custom CLI Runner for dtanma
    """

    def run_dtanma_command(self, command: str) -> Result:
        """
        Run a dtanma Command and Return the Result

        Parameters
        ----------
        command: str

        Returns
        -------
        Result
        """
        parsed_command = self.parse_dtanma_command(command=command)
        logger.debug("dtanma CLI: %s", parsed_command)
        return self.invoke(cli=dtanma_command_line, args=parsed_command)

    @classmethod
    def parse_dtanma_command(cls, command: str) -> str:
        """
        Parse a dtanma CLI Command to a Parseable Str
        """
        command_parsed = dedent(command).strip()
        for r in (("\\", ""), ("\n", ""), ("\t", " "), ("  ", " "), ("dtanma ", "")):
            command_parsed = command_parsed.replace(*r)
        return command_parsed


@pytest.fixture
def cli_runner() -> DtaNmaRunner:
    """
    Fixture for invoking command-line interfaces.
    """
    return DtaNmaRunner()


def cli_status_checker(result: Result, exit_code_zero: bool = True) -> None:
    """
    Handle Exceptions from the CLI

    Parameters
    ----------
    result : Result
        CliRunner Invoke Result
    exit_code_zero: bool
        Whether the exit code should be `0` - defaults to True
    """
    try:
        assert (result.exit_code == 0) == exit_code_zero
    except AssertionError as e:
        logger.exception(result.exception, exc_info=result.exc_info)
        raise AssertionError(result.output) from e


def write_text(path: Path, text: str) -> Path:
    path.write_text(dedent(text).lstrip(), encoding="utf-8")
    return path


@pytest.fixture
def two_test_dataset() -> NetworkDataset:
    """
    Five studies over two tests, with two single-test studies
    """
    return parse_dataset(TWO_TEST_CSV)


@pytest.fixture
def three_test_dataset() -> NetworkDataset:
    """
    The CIN2 stratum of a three-test network with one covariate
    """
    return parse_dataset(THREE_TEST_CSV, stratum_filter="CIN2")


@pytest.fixture
def two_test_csv(tmp_path: Path) -> Path:
    return write_text(tmp_path / "two_tests.csv", TWO_TEST_CSV)


@pytest.fixture
def three_test_csv(tmp_path: Path) -> Path:
    return write_text(tmp_path / "three_tests.csv", THREE_TEST_CSV)


@pytest.fixture
def disconnected_csv(tmp_path: Path) -> Path:
    return write_text(tmp_path / "disconnected.csv", DISCONNECTED_CSV)


@pytest.fixture
def truth_yaml(tmp_path: Path) -> Path:
    return write_text(tmp_path / "truth.yaml", TRUTH_YAML)


@pytest.fixture
def quick_sampler() -> SamplerConfig:
    """
    Short runs for unit tests
    """
    return SamplerConfig(n_chains=2, n_warmup=150, n_samples=100, seed=11)


def make_draws(values: np.ndarray, layout: ParameterLayout) -> Draws:
    """
    Draws from a (chain, draw, parameter) array, without sampler bookkeeping
    """
    values = np.asarray(values, dtype=float)
    n_chains, n_draws = values.shape[:2]
    return Draws(
        constrained=values,
        layout=layout,
        log_density=np.zeros((n_chains, n_draws)),
        divergent=np.zeros((n_chains, n_draws), dtype=bool),
        tree_depth=np.ones((n_chains, n_draws), dtype=int),
    )


@session_scope
def fitted_run_dir(tmp_path_factory: pytest.TempPathFactory) -> Path:
    """
    An arm-based fit of the two-test network written by `dtanma fit`
    """
    directory = tmp_path_factory.mktemp("fit")
    data_path = write_text(directory / "data.csv", TWO_TEST_CSV)
    outdir = directory / "run"
    result = DtaNmaRunner().run_dtanma_command(
        f"""
        dtanma fit \
            --data {data_path} \
            --chains 2 \
            --warmup 150 \
            --samples 100 \
            --seed 5 \
            --mc-samples 200 \
            --outdir {outdir}
        """
    )
    cli_status_checker(result=result)
    return outdir


def simulated_dataset(n_studies: int, n_tests: int, n_covariates: int = 0) -> NetworkDataset:
    """
    A complete simulated network of the given shape
    """
    truth = TruthSpec(
        n_studies=n_studies,
        n_tests=n_tests,
        n_covariates=n_covariates,
        mu=[np.linspace(0.5, 1.5, n_tests).tolist(), np.linspace(1.5, 0.5, n_tests).tolist()],
        theta=np.full((n_covariates, 2, n_tests), 0.2).tolist() if n_covariates else None,
        sigma=(0.6, 0.5),
        rho=-0.4,
        tau=(0.3, 0.2),
        n_diseased=(30, 80),
        n_healthy=(50, 150),
        seed=n_studies * 10 + n_tests,
    )
    ds, _ = simulate_network(truth)
    return ds


def max_gradient_error(model, n_points: int, seed: int, step: float = 1e-4) -> float:
    """
    Largest error of the autodiff gradient against a five-point central
    difference, relative to max(1, |gradient|)
    """
    worst = 0.0
    for u in np.random.default_rng(seed).normal(scale=0.7, size=(n_points, model.dim)):
        _, gradient = model.log_posterior_and_grad(u)
        numeric = np.empty(model.dim)
        for index, e in enumerate(np.eye(model.dim) * step):
            f = [model.log_density_and_grad(u + m * e)[0] for m in (-2, -1, 1, 2)]
            numeric[index] = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * step)
        error = np.abs(gradient - numeric) / np.maximum(1.0, np.abs(gradient))
        worst = max(worst, float(error.max()))
    return worst
