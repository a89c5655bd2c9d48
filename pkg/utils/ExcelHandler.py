import io

from openpyxl import Workbook, load_workbook
from openpyxl.styles import Alignment, Border, Font, Side
from openpyxl.utils import get_column_letter

THIN = Side(style="thin")
BORDER = Border(left=THIN, right=THIN, top=THIN, bottom=THIN)


def prepareCells(worksheet, start, end):
    for row in worksheet[f"{start}:{end}"]:
        for cell in row:
            cell.border = BORDER


def _toBytes(wb):
    buf = io.BytesIO()
    wb.save(buf)
    return buf.getvalue()


def createChartWorkbook(categories, values, series_name="Series 1"):
    """Workbook that backs an embedded chart: categories in A, values in B."""
    wb = Workbook()
    ws = wb.active
    ws.title = "Sheet1"
    ws["A1"] = ""
    ws["B1"] = series_name
    for row, (category, value) in enumerate(zip(categories, values), start=2):
        ws[f"A{row}"] = category
        ws[f"B{row}"] = value
    return _toBytes(wb)


def readChartWorkbook(data):
    """(categories, values) from a workbook written by createChartWorkbook."""
    wb = load_workbook(io.BytesIO(data), read_only=True)
    try:
        ws = wb["Sheet1"] if "Sheet1" in wb.sheetnames else wb.active
        rows = list(ws.iter_rows(min_row=2, values_only=True))
    finally:
        wb.close()
    return [r[0] for r in rows], [r[1] for r in rows]


def createAccuracyWorkbook(table, path=None, title="Accuracy"):
    """
    Write an accuracy table ({"columns": [...], "rows": [{"system", "cells"}]})
    to a workbook. Missing cells are written as N/A. Returns the bytes when
    no path is given.
    """
    wb = Workbook()
    ws = wb.active
    ws.title = title

    headers = ["System"] + list(table["columns"])
    for col, header in enumerate(headers, start=1):
        cell = ws.cell(row=1, column=col, value=header)
        cell.font = Font(bold=True, name="Calibri", size=11)
        cell.alignment = Alignment(horizontal="center", vertical="center", wrap_text=True)

    for r, row in enumerate(table["rows"], start=2):
        ws.cell(row=r, column=1, value=row["system"]).font = Font(bold=True)
        for c, value in enumerate(row["cells"], start=2):
            cell = ws.cell(row=r, column=c, value="N/A" if value is None else value)
            cell.alignment = Alignment(horizontal="center", vertical="center")
            if value is not None:
                cell.number_format = "0.0"

    last = f"{get_column_letter(len(headers))}{len(table['rows']) + 1}"
    prepareCells(ws, "A1", last)
    ws.column_dimensions["A"].width = 24

    if path is None:
        return _toBytes(wb)
    wb.save(path)
    return path
