"""
Posterior Result Containers
"""

import logging
from typing import Any, Dict, List, Optional

import pandas as pd

from dtanma.config import PosteriorConfig, SummaryColumns
from dtanma.containers.base_container import DtaNmaModel

logger = logging.getLogger(__name__)


def format_interval(
    mean: float, lower: float, upper: float, decimals: int = PosteriorConfig.DECIMALS
) -> str:
    """
    Format a posterior summary as `value [lower, upper]`

    Parameters
    ----------
    mean: float
    lower: float
    upper: float
    decimals: int
        Digits after the decimal point

    Returns
    -------
    str
    """
    return f"{mean:.{decimals}f} [{lower:.{decimals}f}, {upper:.{decimals}f}]"


class IntervalSummary(DtaNmaModel):
    """
    Posterior mean with an equal-tailed 95% credible interval
    """

    mean: float
    lower: float
    upper: float

    def __str__(self) -> str:
        return format_interval(self.mean, self.lower, self.upper)


class SummaryRow(DtaNmaModel):
    """
    One row of an exported summary table
    """

    stratum: Optional[str] = None
    test: Optional[str] = None
    measure: str
    mean: float
    lower: float
    upper: float

    @property
    def interval(self) -> IntervalSummary:
        return IntervalSummary(mean=self.mean, lower=self.lower, upper=self.upper)


def rows_to_frame(rows: List[SummaryRow]) -> pd.DataFrame:
    """
    Summary rows as a DataFrame with the exported column order
    """
    return pd.DataFrame([row.dict() for row in rows], columns=SummaryColumns.ALL)


class SuperioritySummary(DtaNmaModel):
    """
    Per-draw superiority index of one test, summarised

    Draws where a test dominates every comparable test are infinite;
    draws where no test is comparable are undefined and excluded from the
    percentiles.
    """

    test: str
    median: float
    lower: float
    upper: float
    n_infinite: int
    n_undefined: int
    n_draws: int


class AccuracySummary(DtaNmaModel):
    """
    Accuracy, Relative Measures, DOR and Superiority of Every Test

    `kind` is `marginal` for population-averaged accuracies or
    `conditional` for accuracies at zero random effects.
    """

    kind: str
    stratum: Optional[str] = None
    reference: Optional[str] = None
    accuracy: List[SummaryRow] = []
    relative: List[SummaryRow] = []
    dor: List[SummaryRow] = []
    superiority: List[SuperioritySummary] = []

    @property
    def tests(self) -> List[str]:
        return list(dict.fromkeys(row.test for row in self.accuracy if row.test))

    def lookup(self, test: str, measure: str) -> SummaryRow:
        """
        Find the row for one test and measure
        """
        for row in [*self.accuracy, *self.relative, *self.dor]:
            if row.test == str(test) and row.measure == measure:
                return row
        raise KeyError(f"no summary for test {test!r}, measure {measure!r}")

    def table_rows(self) -> List[SummaryRow]:
        """
        Rows written to the summary CSV

        The reference test is left out of the relative measures.
        """
        relative = [row for row in self.relative if row.test != self.reference]
        return [*self.accuracy, *relative, *self.dor]

    def to_frame(self) -> pd.DataFrame:
        return rows_to_frame(self.table_rows())

    def superiority_frame(self) -> pd.DataFrame:
        return pd.DataFrame([item.dict() for item in self.superiority])


class VarianceReport(DtaNmaModel):
    """
    Between/Within-Study Variance Partition on the Logit Scale
    """

    stratum: Optional[str] = None
    rows: List[SummaryRow] = []
    rho: Optional[IntervalSummary] = None

    def lookup(self, measure: str, test: Optional[str] = None) -> SummaryRow:
        for row in self.rows:
            if row.measure == measure and row.test == test:
                return row
        raise KeyError(f"no variance summary for {measure!r} (test {test!r})")

    def formatted(self) -> Dict[str, str]:
        """
        Every component in `value [lower, upper]` form
        """
        values = {
            row.measure if row.test is None else f"{row.measure}[{row.test}]": str(
                row.interval
            )
            for row in self.rows
        }
        if self.rho is not None:
            values["rho"] = str(self.rho)
        return values

    def to_frame(self) -> pd.DataFrame:
        return rows_to_frame(self.rows)


class ParameterDiagnostics(DtaNmaModel):
    """
    Convergence summary of one parameter
    """

    name: str
    mean: float
    sd: float
    rhat: float
    n_eff: float
    mcse: float


class Diagnostics(DtaNmaModel):
    """
    Convergence Diagnostics of a Set of Draws
    """

    parameters: List[ParameterDiagnostics]
    n_chains: int
    n_draws: int
    n_divergent: int
    max_rhat: float
    all_rhat_ok: bool

    def get(self, name: str) -> ParameterDiagnostics:
        for item in self.parameters:
            if item.name == name:
                return item
        raise KeyError(name)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([item.dict() for item in self.parameters])

    def as_json_dict(self) -> Dict[str, Any]:
        return self.dict()
