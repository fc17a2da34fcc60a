"""CSV tables and the text evaluation report."""
from .service import (
    EVAL_COLUMNS,
    eval_frame,
    records_frame,
    render_report,
    summarize,
    viz_frame,
    write_eval_outputs,
    write_table,
)

__all__ = [
    "EVAL_COLUMNS",
    "eval_frame",
    "records_frame",
    "render_report",
    "summarize",
    "viz_frame",
    "write_eval_outputs",
    "write_table",
]
