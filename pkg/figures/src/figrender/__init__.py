"""Figure rendering for lpncsim experiment CSVs."""

from .render import (
    FIGURE_IDS,
    EmptyDataError,
    FigureSpec,
    MissingColumnError,
    render,
)

__version__ = "0.1.0"
