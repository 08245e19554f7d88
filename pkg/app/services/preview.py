from typing import Any

from app.config import settings
from app.models import AcceptanceCheck, CriterionVerdict, Report
from app.utils.base import format_number
from app.utils.console import console, format_verdict, print_summary, print_table


def preview_verdicts(verdicts: list[CriterionVerdict]) -> None:
	if not verdicts:
		return
	table = print_table(
		"Критерии на конечной глубине",
		Критерий="cyan", Значение="white", Порог="dim", Окно="dim", Вердикт="bold",
	)
	for verdict in verdicts:
		table.add_row(
			verdict.kind.value,
			format_number(verdict.value),
			format_number(verdict.threshold),
			f"{verdict.window[0]}..{verdict.window[1]}",
			format_verdict(verdict.verdict.value),
		)
	console.print(table)


def preview_rows(title: str, rows: list[dict[str, Any]], batch_size: int | None = None) -> None:
	"""Первые batch_size строк таблицы (трассы, профили, счётчики)"""
	if not rows:
		return
	batch_size = batch_size or settings.CONSOLE_OUTPUT_BATCH_SIZE
	columns = list(rows[0])
	table = print_table(title, **{column: "white" for column in columns})
	for row in rows[:batch_size]:
		table.add_row(*(format_number(row.get(column)) for column in columns))
	console.print(table)
	if len(rows) > batch_size:
		console.print(f"   ... ещё строк: {len(rows) - batch_size}", style="dim")


def preview_checks(checks: list[AcceptanceCheck]) -> None:
	if not checks:
		return
	table = print_table("Проверки примера", Проверка="cyan", Значение="white", Ожидание="dim", Итог="bold")
	for check in checks:
		table.add_row(
			check.name,
			format_number(check.value),
			check.expected,
			"✅ [green]ok[/green]" if check.passed else "❌ [red]нет[/red]",
		)
	console.print(table)


def preview_report(report: Report, batch_size: int | None = None) -> None:
	"""Таблицы отчёта и итоговый блок"""
	for name, value in report.results.items():
		if isinstance(value, list) and value and isinstance(value[0], dict):
			preview_rows(name, value, batch_size)
		elif isinstance(value, dict):
			preview_rows(name, [{"поле": key, "значение": item} for key, item in value.items()], batch_size)
		else:
			console.print(f"[cyan]{name}[/cyan]: {format_number(value)}")

	preview_verdicts(report.verdicts)
	preview_checks(report.checks)

	print_summary(
		f"Итог команды {report.command}",
		Статус=report.status,
		**{"Код выхода": report.exit_code, "Артефакты": len(report.artifacts)},
	)
	for path in report.artifacts:
		console.print(f"   - [blue][link={path}]{path}[/link][/blue]")
