"""Canard-existence analysis for slow-fast systems with one fast variable.

The heavy lifting lives in the compiled extension `canard._core`; this
package re-exports it and adds a small dict-returning convenience wrapper
around the JSON analysis report.
"""

import json as _json

from canard._core import *  # noqa: F401,F403
from canard._core import analysis_report_json as _analysis_report_json


def analyze(system, scan_bound=1.0, free_value=0.0):
    """Run the full pipeline and return the analysis report as a dict."""
    return _json.loads(_analysis_report_json(system, scan_bound, free_value))


__all__ = [name for name in dir() if not name.startswith("_")]
