from pathlib import Path

import typer
from rich.console import Console
from rich.table import Table

from app.core.errors import MoranError

console = Console()

YES_ANSWERS = {"д", "да", "y", "yes"}
NO_ANSWERS = {"н", "нет", "n", "no"}

VERDICT_STYLES = {
	"holds_at_depth": ("✅", "green"),
	"fails_at_depth": ("❌", "red"),
	"inconclusive": ("❔", "yellow"),
}


def print_success(message: str) -> None:
	console.print(f"✅  [green]{message}[/green]")


def print_error(error: str | MoranError) -> None:
	"""Сообщение об ошибке; для MoranError с именем класса и деталями"""
	if isinstance(error, MoranError):
		console.print(f"❌ [red]{error.name}[/red]: {error.message}")
		for key, value in error.details.items():
			console.print(f"   [dim]{key}[/dim] = {value}")
		return
	console.print(f"❌ [red]{error}[/red]")


def print_warning(message: str) -> None:
	console.print(f"⚠️  [yellow]{message}[/yellow]")


def print_table(title: str, **columns: str) -> Table:
	"""Пустая таблица с колонками имя=стиль"""
	table = Table(title=title, title_justify="left")
	for name, style in columns.items():
		table.add_column(name, style=style, overflow="fold")
	return table


def confirm_prompt(message: str, default: bool = True) -> bool:
	"""Подтверждение д/н; Enter возвращает default"""
	prompt = f"{message} [{'Д/н' if default else 'д/Н'}]: "
	while True:
		try:
			answer = console.input(prompt).strip().lower()
		except (KeyboardInterrupt, EOFError):
			console.print("\n❌ Отменено пользователем", style="red")
			raise typer.Abort()
		if not answer:
			return default
		if answer in YES_ANSWERS or answer in NO_ANSWERS:
			return answer in YES_ANSWERS
		console.print("❌ Введите 'д' или 'н'", style="red")


def ask_specs_dir(default: Path) -> Path | None:
	"""Папка со спецификациями: Enter оставляет default, несуществующая папка даёт None"""
	console.print(f"💾 Папка со спецификациями: [cyan]{default.absolute()}[/cyan]", style="bold")
	answer = console.input("🔍 Другой путь (или Enter): ").strip()
	directory = Path(answer) if answer else default
	if not directory.is_dir():
		print_error(f"Папка {directory} не существует")
		return None
	return directory


def format_verdict(verdict: str) -> str:
	icon, color = VERDICT_STYLES.get(verdict, ("•", "white"))
	return f"{icon} [{color}]{verdict}[/{color}]"


def print_summary(title: str, **values) -> None:
	"""Итоговый блок в рамке из '='"""
	console.print("\n" + "=" * 50, style="dim")
	console.print(f"📊 {title}:", style="bold")
	for name, value in values.items():
		console.print(f"   {name}: {value}")
	console.print("=" * 50, style="dim")
