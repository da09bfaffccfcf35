"""
YAML Utilities for dtanma
"""

import logging
import os
from pathlib import Path
from re import compile
from typing import Any, Dict, Union

import yaml
from yaml import SafeLoader, load

from dtanma.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

_ENVIRONMENT_PATTERN = compile(r".*?\${(\w+)}.*?")


class _EnvironmentLoader(SafeLoader):
    """
    SafeLoader that expands ${VAR_NAME} references
    """


def _env_var_constructor(safe_loader: yaml.Loader, node: Any) -> Any:
    """
    Extracts the environment variable from the node's value

    Parameters
    ----------
    safe_loader: yaml.Loader
    node: Any
        The current node in the yaml

    Returns
    -------
    Any
        the parsed string that contains the value of the environment variable
    """
    value = safe_loader.construct_scalar(node=node)
    match = _ENVIRONMENT_PATTERN.findall(string=value)
    if match:
        full_value = value
        for item in match:
            full_value = full_value.replace(
                "${{{key}}}".format(key=item), os.getenv(key=item, default=item)
            )
        return yaml.safe_load(full_value)
    return value


_EnvironmentLoader.add_implicit_resolver(
    tag="!environment", regexp=_ENVIRONMENT_PATTERN, first=None
)
_EnvironmentLoader.add_constructor(tag="!environment", constructor=_env_var_constructor)


def read_yaml(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a YAML (or JSON) File

    Load a configuration file and resolve any environment
    variables. The environment variables must be in this
    format to be parsed: ${VAR_NAME}.

    Parameters
    ----------
    path: Union[str, Path]
        File Path of YAML Object to Read

    Examples
    --------
    model: ab
    seed: ${DTA_NMA_SEED}
    outdir: runs/${STRATUM}
    """
    path = os.path.abspath(path)
    with open(path) as conf_data:
        content = load(stream=conf_data, Loader=_EnvironmentLoader)
    if content is None:
        content = {}
    if not isinstance(content, dict):
        raise ConfigurationError(f"{Path(path).name} must contain a mapping")
    logger.debug("Configuration File Parsed: %s", Path(path).name)
    return content
