"""Exact q-series and congruence checks for bipartitions with odd parts distinct."""

from podq.pseries import BivariateSeries, Series
from podq.report import CheckReport

__all__ = ["BivariateSeries", "CheckReport", "Series"]
__version__ = "0.1.0"
