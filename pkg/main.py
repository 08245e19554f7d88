from pathlib import Path

from app.config import settings
from app.core.examples import REGISTRY
from app.core.pipeline import run
from app.models import RunConfig
from app.services.preview import preview_report
from app.utils.console import ask_specs_dir, confirm_prompt, console, print_error, print_warning
from app.utils.files import find_spec_files

try:
	import questionary

	HAS_QUESTIONARY = True
except ImportError:
	HAS_QUESTIONARY = False
	print_warning(
		"Для возможности работать с интерактивным меню установите библиотеку в окружение: pip install questionary"
	)


def choose_specs() -> list[Path]:
	"""Выбор файлов спецификаций из папки"""
	specs_dir = ask_specs_dir(settings.SPECS_DIR)
	if not specs_dir:
		return []

	files = find_spec_files(specs_dir)
	if not files:
		print_error("Файлы спецификаций не найдены")
		return []

	if HAS_QUESTIONARY:
		return questionary.checkbox(
			"📄 Отметьте спецификации:",
			choices=[questionary.Choice(str(path.relative_to(specs_dir)), value=path) for path in files],
		).ask() or []

	for index, path in enumerate(files, 1):
		console.print(f"{index}. {path.relative_to(specs_dir)}")
	picked = console.input("\nНомера через запятую: ").replace(" ", "").split(",")
	return [files[int(i) - 1] for i in picked if i.isdigit() and 0 < int(i) <= len(files)]


def choose_example() -> str | None:
	if HAS_QUESTIONARY:
		return questionary.select("📚 Пример:", choices=list(REGISTRY), pointer="👉").ask()
	console.print(", ".join(REGISTRY))
	return console.input("Пример: ").strip() or None


def run_command(command: str, specs: list[Path] | None = None, **options) -> int:
	config = RunConfig(
		command=command,
		spec_paths=[str(path) for path in specs or []],
		depth=settings.DEFAULT_DEPTH,
		seed=settings.DEFAULT_SEED,
		out_dir=str(settings.OUTPUT_DIR),
		options=options,
	)
	report = run(config)
	preview_report(report)
	return report.exit_code


def main():
	console.print("\n" + "=" * 45, style="dim")
	console.print("🧮 Конструкции Морана: расчёты и примеры", style="bold blue")
	console.print("=" * 45, style="dim")

	while True:
		if HAS_QUESTIONARY:
			choice = questionary.select(
				"🎯 Выберите действие:",
				choices=[
					questionary.Choice("✅ Проверка спецификаций", value="validate"),
					questionary.Choice("📐 Размерности", value="dims"),
					questionary.Choice("📚 Воспроизвести пример", value="reproduce"),
					questionary.Choice("🖼 Рисунки SVG", value="render"),
					questionary.Choice("🚪 Выйти", value="exit")
				],
				pointer="👉"
			).ask()
		else:
			console.print("\n🎯 Выберите действие:", style="bold")
			console.print("1. ✅ Проверка спецификаций")
			console.print("2. 📐 Размерности")
			console.print("3. 📚 Воспроизвести пример")
			console.print("4. 🖼 Рисунки SVG")
			console.print("5. 🚪 Выйти")

			choice_map = {"1": "validate", "2": "dims", "3": "reproduce", "4": "render", "5": "exit"}
			choice_input = console.input("\nВаш выбор (1-5): ").strip()
			choice = choice_map.get(choice_input, "")

		if choice in ("validate", "dims", "render"):
			specs = choose_specs()
			if specs:
				run_command(choice, specs)

		elif choice == "reproduce":
			example = choose_example()
			if example:
				run_command("reproduce", example=example)

		elif choice == "exit":
			console.print("👋 До свидания!", style="green")
			break

		else:
			print_warning("Неверный выбор, попробуйте снова")
			continue

		if not confirm_prompt("\nВыполнить еще одну операцию?", default=False):
			console.print("👋 До свидания!", style="green")
			break


if __name__ == "__main__":
	main()
