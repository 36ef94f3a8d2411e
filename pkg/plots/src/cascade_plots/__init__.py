"""Figure regeneration for cascade sweep data.

Consumes only the CSV tables exported by the simulation harness; see
figures.FigureId for the five standard figures.
"""

from .figures import (
    CsvSchemaError,
    FigureId,
    FigureSpec,
    RenderResult,
    render_figure,
)

__version__ = "0.1.0"
