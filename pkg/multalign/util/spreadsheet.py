# Licensed under the MIT License.
"""
Functions for exporting result tables to Excel workbooks
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping

import openpyxl
import pandas as pd
from openpyxl.styles import Font
from openpyxl.utils import get_column_letter
from openpyxl.worksheet.worksheet import Worksheet

from multalign.exceptions import MultalignSpreadsheetError


LOGGER = logging.getLogger(__name__)

HEADER_FONT = Font(bold=True)


class WorksheetWrapper:
    """
    Wrapper for openpyxl worksheet
    Consolidates common worksheet logic
    """

    def __init__(self, worksheet: Worksheet, headers: Iterable[str]) -> None:
        self.worksheet = worksheet
        self.worksheet.append(list(headers))
        for cell in self.worksheet[1]:
            cell.font = HEADER_FONT
        self.worksheet.freeze_panes = "A2"

    @lru_cache  # noqa: B019
    def get_column(self, name: str) -> int:
        """Get column index by header"""
        return next(cell for cell in self.worksheet[1] if cell.value == name).column

    def append(self, row: Dict[str, Any]) -> None:
        """
        Given a dictionary with column headers as keys, format and append to worksheet
        """
        self.worksheet.append({self.get_column(key): value for key, value in row.items()})

    def fit_columns(self) -> None:
        """Widen columns to their longest value"""

        for column in self.worksheet.iter_cols():
            width = max(len(str(cell.value)) for cell in column if cell.value is not None)
            letter = get_column_letter(column[0].column)
            self.worksheet.column_dimensions[letter].width = min(width + 2, 60)


def export_workbook(tables: Mapping[str, pd.DataFrame], out_file: Path) -> None:
    """
    Write each table to its own worksheet, named by its key
    """

    out_file = Path(out_file)
    if out_file.suffix.lower() != ".xlsx":
        raise MultalignSpreadsheetError(f"Workbook '{out_file}' must have an .xlsx suffix")
    if not tables:
        raise MultalignSpreadsheetError("No tables to export")

    workbook = openpyxl.Workbook()
    workbook.remove(workbook.active)

    for name, frame in tables.items():
        LOGGER.debug("Exporting %d rows to worksheet '%s'", len(frame), name)
        worksheet = WorksheetWrapper(workbook.create_sheet(title=name[:31]), frame.columns)
        for record in frame.to_dict(orient="records"):
            worksheet.append({key: _cell_value(value) for key, value in record.items()})
        worksheet.fit_columns()

    out_file.parent.mkdir(parents=True, exist_ok=True)
    try:
        workbook.save(out_file)
    except OSError as e:
        raise MultalignSpreadsheetError(f"Unable to save workbook '{out_file}': {e}") from e

    LOGGER.info("Exported %d worksheets to %s", len(tables), out_file)


def _cell_value(value: Any) -> Any:
    """Convert numpy scalars to plain Python values openpyxl accepts"""
    return value.item() if hasattr(value, "item") else value
