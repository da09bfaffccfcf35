"""
Reading and Writing the Study-Arm CSV Schema
"""

import csv
import io
import logging
import math
import re
from pathlib import Path
from typing import Dict, List, Optional, TextIO, Tuple, Union

import pandas as pd
from pydantic import ValidationError

from dtanma.config import DatasetColumns
from dtanma.containers import NetworkDataset, StudyArm
from dtanma.exceptions import DatasetParseError, DatasetValidationError

logger = logging.getLogger(__name__)

_PANDAS_LINE_PATTERN = re.compile(r"line (\d+)")
_COVARIATE_PATTERN = re.compile(rf"^{DatasetColumns.COVARIATE_PREFIX}(\d+)$")


def _strip_comments(text: str) -> Tuple[str, List[int]]:
    """
    Drop comment and blank lines, remembering original line numbers

    Returns
    -------
    Tuple[str, List[int]]
        The remaining text and, for each remaining line, its 1-based
        line number in the original source
    """
    kept: List[str] = []
    line_numbers: List[int] = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped == "" or stripped.startswith(DatasetColumns.COMMENT):
            continue
        kept.append(line)
        line_numbers.append(number)
    return "\n".join(kept) + "\n", line_numbers


def _check_field_counts(cleaned: str, line_numbers: List[int]) -> None:
    """
    Every data row holds exactly as many fields as the header
    """
    rows = csv.reader(io.StringIO(cleaned), skipinitialspace=True)
    expected = len(next(rows))
    for row_number, row in enumerate(rows, start=1):
        if len(row) != expected:
            raise DatasetParseError(
                f"malformed row: {len(row)} fields, header has {expected}",
                line_number=line_numbers[row_number],
            )


def _covariate_columns(columns: List[str], header_line: int) -> List[str]:
    """
    Ordered covariate columns cov_1..cov_P
    """
    numbered: Dict[int, str] = {}
    for column in columns:
        match = _COVARIATE_PATTERN.match(column)
        if match is not None:
            numbered[int(match.group(1))] = column
    expected = list(range(1, len(numbered) + 1))
    if sorted(numbered) != expected:
        raise DatasetParseError(
            f"covariate columns must be numbered cov_1..cov_{len(numbered)}, "
            f"got {sorted(numbered.values())}",
            line_number=header_line,
        )
    return [numbered[index] for index in expected]


def _parse_integer(value: str, column: str, line_number: int) -> int:
    try:
        return int(value)
    except ValueError as ve:
        raise DatasetParseError(
            f"{column} is not an integer: {value!r}", line_number=line_number
        ) from ve


def _parse_float(value: str, column: str, line_number: int) -> float:
    try:
        parsed = float(value)
    except ValueError as ve:
        raise DatasetParseError(
            f"{column} is not a number: {value!r}", line_number=line_number
        ) from ve
    if not math.isfinite(parsed):
        raise DatasetParseError(
            f"{column} is not finite: {value!r}", line_number=line_number
        )
    return parsed


def _validation_message(error: ValidationError) -> str:
    return "; ".join(str(item["msg"]) for item in error.errors())


def parse_dataset(
    source: Union[str, TextIO], stratum_filter: Optional[str] = None
) -> NetworkDataset:
    """
    Parse Study Arms from CSV Text

    Parameters
    ----------
    source: Union[str, TextIO]
        CSV text (or an open text stream) with the columns
        study_id,test_id,tp,n_diseased,tn,n_healthy and the optional
        stratum and cov_1..cov_P columns. Lines starting with `#` are ignored.
    stratum_filter: Optional[str]
        Keep only rows of this stratum

    Returns
    -------
    NetworkDataset

    Raises
    ------
    DatasetParseError
        A malformed row, reported with its line number
    DatasetValidationError
        Counts or network structure break an invariant
    """
    text = source if isinstance(source, str) else source.read()
    text = text.removeprefix("\ufeff")
    cleaned, line_numbers = _strip_comments(text)
    if not line_numbers:
        raise DatasetParseError("no header row found")
    header_line = line_numbers[0]
    _check_field_counts(cleaned, line_numbers)
    try:
        frame = pd.read_csv(
            io.StringIO(cleaned),
            dtype=str,
            index_col=False,
            keep_default_na=False,
            skipinitialspace=True,
        )
    except pd.errors.ParserError as pe:
        match = _PANDAS_LINE_PATTERN.search(str(pe))
        line_number = (
            line_numbers[int(match.group(1)) - 1]
            if match is not None and int(match.group(1)) <= len(line_numbers)
            else None
        )
        raise DatasetParseError("malformed row", line_number=line_number) from pe
    frame.columns = [str(column).strip() for column in frame.columns]
    missing = [
        column for column in DatasetColumns.REQUIRED if column not in frame.columns
    ]
    if missing:
        raise DatasetParseError(
            f"missing required column(s): {', '.join(missing)}",
            line_number=header_line,
        )
    covariate_columns = _covariate_columns(list(frame.columns), header_line)
    known = {*DatasetColumns.REQUIRED, DatasetColumns.STRATUM, *covariate_columns}
    ignored = [column for column in frame.columns if column not in known]
    if ignored:
        logger.warning("Ignoring unknown column(s): %s", ", ".join(ignored))
    has_stratum = DatasetColumns.STRATUM in frame.columns
    if stratum_filter is not None and not has_stratum:
        raise DatasetValidationError(
            f"stratum {stratum_filter!r} requested but the file has no stratum column"
        )
    arms: List[StudyArm] = []
    for row_number, record in enumerate(frame.to_dict(orient="records")):
        line_number = line_numbers[row_number + 1]
        values = {key: str(value).strip() for key, value in record.items()}
        for column in DatasetColumns.REQUIRED:
            if values[column] == "":
                raise DatasetParseError(
                    f"{column} is empty", line_number=line_number
                )
        stratum = values[DatasetColumns.STRATUM] if has_stratum else ""
        try:
            arm = StudyArm(
                study_id=values[DatasetColumns.STUDY_ID],
                test_id=_parse_integer(
                    values[DatasetColumns.TEST_ID], DatasetColumns.TEST_ID, line_number
                ),
                tp=_parse_integer(
                    values[DatasetColumns.TRUE_POSITIVES],
                    DatasetColumns.TRUE_POSITIVES,
                    line_number,
                ),
                n_diseased=_parse_integer(
                    values[DatasetColumns.N_DISEASED],
                    DatasetColumns.N_DISEASED,
                    line_number,
                ),
                tn=_parse_integer(
                    values[DatasetColumns.TRUE_NEGATIVES],
                    DatasetColumns.TRUE_NEGATIVES,
                    line_number,
                ),
                n_healthy=_parse_integer(
                    values[DatasetColumns.N_HEALTHY],
                    DatasetColumns.N_HEALTHY,
                    line_number,
                ),
                covariates=tuple(
                    _parse_float(values[column], column, line_number)
                    for column in covariate_columns
                ),
                stratum=stratum or None,
            )
        except ValidationError as ve:
            raise DatasetValidationError(
                f"line {line_number}: study {values[DatasetColumns.STUDY_ID]!r}, "
                f"test {values[DatasetColumns.TEST_ID]}: {_validation_message(ve)}"
            ) from ve
        arms.append(arm)
    if stratum_filter is not None:
        arms = [arm for arm in arms if arm.stratum == stratum_filter]
        if not arms:
            raise DatasetValidationError(f"no rows found for stratum {stratum_filter!r}")
    try:
        dataset = NetworkDataset(arms=tuple(arms))
    except ValidationError as ve:
        message = _validation_message(ve)
        if stratum_filter is None and len({arm.stratum for arm in arms}) > 1:
            message += " (the file holds several strata; select one with a stratum filter)"
        raise DatasetValidationError(message) from ve
    logger.info(
        "Parsed %s arms from %s studies over %s tests",
        dataset.n_arms,
        dataset.n_studies,
        dataset.n_tests,
    )
    return dataset


def read_dataset(
    path: Union[str, Path], stratum_filter: Optional[str] = None
) -> NetworkDataset:
    """
    Parse a dataset file (UTF-8, with or without a byte-order mark)
    """
    with open(path, encoding="utf-8-sig") as stream:
        return parse_dataset(stream, stratum_filter=stratum_filter)


def dataset_to_frame(ds: NetworkDataset) -> pd.DataFrame:
    """
    The dataset as a DataFrame in the CSV schema
    """
    columns = list(DatasetColumns.REQUIRED)
    include_stratum = any(arm.stratum is not None for arm in ds.arms)
    if include_stratum:
        columns.append(DatasetColumns.STRATUM)
    covariate_columns = [
        f"{DatasetColumns.COVARIATE_PREFIX}{index}"
        for index in range(1, ds.n_covariates + 1)
    ]
    columns.extend(covariate_columns)
    records = []
    for arm in ds.arms:
        record = {
            DatasetColumns.STUDY_ID: arm.study_id,
            DatasetColumns.TEST_ID: arm.test_id,
            DatasetColumns.TRUE_POSITIVES: arm.tp,
            DatasetColumns.N_DISEASED: arm.n_diseased,
            DatasetColumns.TRUE_NEGATIVES: arm.tn,
            DatasetColumns.N_HEALTHY: arm.n_healthy,
        }
        if include_stratum:
            record[DatasetColumns.STRATUM] = arm.stratum or ""
        record.update(dict(zip(covariate_columns, arm.covariates)))
        records.append(record)
    return pd.DataFrame(records, columns=columns)


def serialize_dataset(ds: NetworkDataset) -> str:
    """
    Write a dataset back to CSV text

    Parameters
    ----------
    ds: NetworkDataset

    Returns
    -------
    str
        CSV text that `parse_dataset` reads back to an equal dataset
    """
    return dataset_to_frame(ds).to_csv(index=False, lineterminator="\n")
