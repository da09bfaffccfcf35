"""
Result Files: Summary CSV, Ranking CSV and the JSON Run Bundle
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import pandas as pd

from dtanma.config import FileConfig, SummaryColumns
from dtanma.containers import AccuracySummary, Diagnostics, VarianceReport
from dtanma.exceptions import DomainError
from dtanma.models.layout import ParameterLayout

logger = logging.getLogger(__name__)

BUNDLE_VERSION = 1


def json_safe(value: Any) -> Any:
    """
    Replace non-finite floats so the result is strict JSON

    +inf, -inf and NaN become the strings "inf", "-inf" and "nan", which
    pydantic float fields parse back.
    """
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {str(key): json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(item) for item in value]
    return value


def summary_frame(
    summary: AccuracySummary, variance: Optional[VarianceReport] = None
) -> pd.DataFrame:
    """
    Summary table rows followed by variance rows
    """
    frames = [summary.to_frame()]
    if variance is not None:
        frames.append(variance.to_frame())
    return pd.concat(frames, ignore_index=True)[SummaryColumns.ALL]


def ranking_frame(summary: AccuracySummary) -> pd.DataFrame:
    """
    DOR and superiority index side by side, one row per test
    """
    records = []
    superiority = {item.test: item for item in summary.superiority}
    for row in summary.dor:
        record: Dict[str, Any] = {
            SummaryColumns.STRATUM: summary.stratum,
            SummaryColumns.TEST: row.test,
            "dor_mean": row.mean,
            "dor_lower": row.lower,
            "dor_upper": row.upper,
        }
        index = superiority.get(row.test)
        if index is not None:
            record.update(
                {
                    "superiority_median": index.median,
                    "superiority_lower": index.lower,
                    "superiority_upper": index.upper,
                    "superiority_infinite_draws": index.n_infinite,
                    "superiority_undefined_draws": index.n_undefined,
                }
            )
        records.append(record)
    return pd.DataFrame(records)


def write_frame(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.info("Table written: %s", path)
    return path


def export_results(
    summary: AccuracySummary,
    variance: Optional[VarianceReport],
    outpath: Union[str, Path],
    diagnostics: Optional[Diagnostics] = None,
    config: Optional[Dict[str, Any]] = None,
    layout: Optional[ParameterLayout] = None,
) -> Tuple[Path, Path]:
    """
    Write the summary CSV and the JSON run bundle into a directory

    Parameters
    ----------
    summary: AccuracySummary
    variance: Optional[VarianceReport]
        Absent for contrast-based fits
    outpath: Union[str, Path]
        Output directory (created if needed)
    diagnostics: Optional[Diagnostics]
    config: Optional[Dict[str, Any]]
        The run configuration, echoed verbatim
    layout: Optional[ParameterLayout]
        Layout of the draws file, needed to read it back

    Returns
    -------
    Tuple[Path, Path]
        The CSV and JSON paths
    """
    if not summary.accuracy:
        raise DomainError("nothing to export: the summary is empty")
    directory = Path(outpath)
    directory.mkdir(parents=True, exist_ok=True)
    csv_path = write_frame(
        summary_frame(summary, variance), directory / FileConfig.SUMMARY_FILE
    )
    bundle: Dict[str, Any] = {
        "version": BUNDLE_VERSION,
        "config": config or {},
        "diagnostics": diagnostics.as_json_dict() if diagnostics is not None else None,
        "all_rhat_ok": diagnostics.all_rhat_ok if diagnostics is not None else None,
        "summary": summary.dict(),
        "variance": variance.dict() if variance is not None else None,
        "layout": layout.to_dict() if layout is not None else None,
    }
    json_path = directory / FileConfig.DIAGNOSTICS_FILE
    json_path.write_text(
        json.dumps(json_safe(bundle), indent=2, allow_nan=False) + "\n", encoding="utf-8"
    )
    logger.info("Run bundle written: %s", json_path)
    return csv_path, json_path


def read_bundle(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Load a run bundle; a directory means its diagnostics file
    """
    path = Path(path)
    if path.is_dir():
        path = path / FileConfig.DIAGNOSTICS_FILE
    return json.loads(path.read_text(encoding="utf-8"))


def bundle_layout(bundle: Dict[str, Any]) -> ParameterLayout:
    """
    The draws layout stored in a run bundle
    """
    if not bundle.get("layout"):
        raise DomainError("the run bundle carries no parameter layout")
    return ParameterLayout.from_dict(bundle["layout"])
