import csv
from pathlib import Path
from typing import Any

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, Side
from openpyxl.utils import get_column_letter

from app.models import Report
from app.utils.files import artifact_path, get_unique_filename

Table = list[dict[str, Any]]


def _cell(value: Any) -> Any:
	"""Значение для ячейки: числа как есть, остальное строкой"""
	if value is None or isinstance(value, (bool, int, float, str)):
		return value
	return str(value)


def _columns(rows: Table) -> list[str]:
	columns: list[str] = []
	for row in rows:
		columns.extend(key for key in row if key not in columns)
	return columns


def write_csv(rows: Table, out_dir: Path, name: str) -> Path:
	"""CSV с шапкой из объединения ключей строк"""
	path = artifact_path(out_dir, name, ".csv")
	with path.open("w", newline="", encoding="utf-8") as handle:
		writer = csv.DictWriter(handle, fieldnames=_columns(rows), lineterminator="\n")
		writer.writeheader()
		for row in rows:
			writer.writerow({key: _cell(value) for key, value in row.items()})
	return path


def report_path(out_dir: Path, name: str) -> Path:
	return artifact_path(out_dir, f"{name}-report", ".json")


def write_report(report: Report, out_dir: Path, name: str | None = None) -> Path:
	"""Отчёт в JSON без отметок времени: одинаковая конфигурация даёт одинаковые байты"""
	path = report_path(out_dir, name or report.command)
	path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
	return path


def export_tables_to_xlsx(
		tables: dict[str, Table],
		out_dir: Path,
		name: str,
		title: str = "Таблицы отчёта",
) -> Path | None:
	"""
	Все таблицы отчёта в одну книгу XLSX, по листу на таблицу.

	Args:
		tables: Имя листа -> строки таблицы
		out_dir: Папка для сохранения
		name: Базовое имя файла
		title: Заголовок на каждом листе

	Returns:
		Путь к файлу или None, если таблиц нет
	"""
	tables = {sheet: rows for sheet, rows in tables.items() if rows}
	if not tables:
		return None

	wb = Workbook()
	wb.remove(wb.active)
	thin = Side(style='thin')
	medium = Side(style='medium')

	for sheet_name, rows in tables.items():
		# Имя листа в Excel не длиннее 31 символа
		ws = wb.create_sheet(sheet_name[:31])
		ws.sheet_view.showGridLines = False

		ws['A1'] = f"{title}: {sheet_name}"
		ws['A1'].font = Font(bold=True, size=14)

		headers = _columns(rows)
		for col_num, header in enumerate(headers, 1):
			cell = ws.cell(row=3, column=col_num, value=header)
			cell.font = Font(bold=True)
			cell.alignment = Alignment(horizontal='center', vertical='center')
			cell.border = Border(left=medium, right=medium, top=medium, bottom=medium)

		for row_num, row in enumerate(rows, 4):
			for col_num, header in enumerate(headers, 1):
				cell = ws.cell(row=row_num, column=col_num, value=_cell(row.get(header)))
				cell.border = Border(left=thin, right=thin, bottom=thin)
				if isinstance(cell.value, (int, float)):
					cell.alignment = Alignment(horizontal='right')

		# Автоподбор ширины колонок
		for col_num, header in enumerate(headers, 1):
			values = [header, *(row.get(header) for row in rows)]
			width = max(len(str(v)) for v in values if v is not None)
			ws.column_dimensions[get_column_letter(col_num)].width = min(width + 2, 40)

	path = get_unique_filename(out_dir, name, extension=".xlsx")
	wb.save(path)
	return path
