"""
Project Configuration for File Locations and Output Names
"""

from os import getenv
from os.path import abspath, join
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from dtanma.exceptions import ConfigurationError


class FileConfig:
    """
    File Path Storage Class
    """

    HOME_PATH = abspath(Path.home())
    DOT_DTANMA_FILE = join(HOME_PATH, ".dtanma")
    _file_config_file = Path(abspath(__file__))
    _config_dir = _file_config_file.parent

    DTANMA_DIRECTORY = _config_dir.parent
    ROOT_DIRECTORY = DTANMA_DIRECTORY.parent

    DRAWS_FILE: str = "draws.csv"
    SUMMARY_FILE: str = "summary.csv"
    DIAGNOSTICS_FILE: str = "diagnostics.json"
    RANKING_FILE: str = "ranking.csv"
    FOREST_PLOT_FILE: str = "forest.svg"
    NETWORK_PLOT_FILE: str = "network.svg"
    TRACE_PLOT_FILE: str = "trace.svg"
    SIMULATED_DATA_FILE: str = "simulated.csv"
    COMPLETE_DATA_FILE: str = "complete.csv"
    LATENT_FILE: str = "latent.csv"
    RUN_LOG_FILE: str = "dtanma.log"

    SEED_ENVIRONMENT_VARIABLE: str = "DTA_NMA_SEED"
    DEFAULT_SEED: int = 20160901


load_dotenv(FileConfig.DOT_DTANMA_FILE, override=False)


def environment_seed() -> Optional[int]:
    """
    Read the default seed from the environment, if one is set

    Returns
    -------
    Optional[int]

    Raises
    ------
    ConfigurationError
        When the variable is not a nonnegative integer
    """
    value = getenv(FileConfig.SEED_ENVIRONMENT_VARIABLE, None)
    if value is None or value.strip() == "":
        return None
    if not value.strip().isdigit():
        raise ConfigurationError(
            f"{FileConfig.SEED_ENVIRONMENT_VARIABLE} must be a nonnegative integer, got {value!r}"
        )
    return int(value)
