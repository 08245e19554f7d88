import json
from pathlib import Path
from typing import Optional

import typer

from app.config import settings
from app.core.examples import ALIASES, REGISTRY
from app.core.pipeline import run
from app.models import RunConfig
from app.services.preview import preview_report
from app.services.spec_loader import spec_schema
from app.utils.console import console, print_success, print_table

app = typer.Typer(help="🧮 Конструкции Морана: размерности, профили, критерии и вложения")

SPEC_HELP = "Файл спецификации (JSON), можно указать несколько раз"
DEPTH_HELP = f"Глубина K (по умолчанию: {settings.DEFAULT_DEPTH})"
OUT_HELP = f"Папка для отчёта и артефактов (по умолчанию: {settings.OUTPUT_DIR})"
SEED_HELP = f"Seed для выборочных вычислений (по умолчанию: {settings.DEFAULT_SEED})"


def execute(
		command: str,
		spec: list[Path],
		depth: Optional[int],
		out: Optional[Path],
		seed: Optional[int],
		batch_size: Optional[int] = None,
		tolerances: Optional[dict[str, float]] = None,
		**options,
) -> None:
	"""Общий запуск: конфигурация, конвейер, таблицы в консоль, код выхода"""
	config = RunConfig(
		command=command,
		spec_paths=[str(path) for path in spec],
		depth=depth or settings.DEFAULT_DEPTH,
		seed=settings.DEFAULT_SEED if seed is None else seed,
		out_dir=str(out or settings.OUTPUT_DIR),
		options={key: value for key, value in options.items() if value is not None},
		tolerances={key: value for key, value in (tolerances or {}).items() if value is not None},
	)
	report = run(config)
	preview_report(report, batch_size)
	raise typer.Exit(report.exit_code)


@app.command()
def validate(
		spec: list[Path] = typer.Option(..., help=SPEC_HELP),
		out: Optional[Path] = typer.Option(None, help=OUT_HELP),
):
	"""Проверяет спецификации: n_k ≥ 2, c_* > 0, n_k·c_k^d ≤ 1"""
	execute("validate", spec, None, out, None)


@app.command()
def dims(
		spec: list[Path] = typer.Option(..., help=SPEC_HELP),
		depth: Optional[int] = typer.Option(None, help=DEPTH_HELP),
		out: Optional[Path] = typer.Option(None, help=OUT_HELP),
		window_fraction: Optional[float] = typer.Option(
			None, help=f"Начало окна как доля K (по умолчанию: {settings.WINDOW_FRACTION})"
		),
		xlsx: bool = typer.Option(False, help="Дополнительно сохранить таблицы в XLSX"),
):
	"""Оценки dim_H и dim_P по окну α-профиля и точный предел, если он известен"""
	execute("dims", spec, depth, out, None, window_fraction=window_fraction, xlsx=xlsx)


@app.command()
def profile(
		spec: list[Path] = typer.Option(..., help=SPEC_HELP),
		depth: Optional[int] = typer.Option(None, help=DEPTH_HELP),
		out: Optional[Path] = typer.Option(None, help=OUT_HELP),
		range_str: Optional[str] = typer.Option(
			None, "--levels", help="Уровни для профиля покрытий: 1-10, :8, 5-, all (по умолчанию: все)"
		),
		oracle: bool = typer.Option(False, help="Сверять жадные счётчики с переборными оракулами"),
		batch_size: Optional[int] = typer.Option(
			None, help=f"Строк таблицы в консоли (по умолчанию: {settings.CONSOLE_OUTPUT_BATCH_SIZE})"
		),
		xlsx: bool = typer.Option(False, help="Дополнительно сохранить таблицы в XLSX"),
):
	"""α-профиль, профиль покрытий f(r) и проверка f ∼ α"""
	execute("profile", spec, depth, out, None, batch_size, levels=range_str, oracle=oracle, xlsx=xlsx)


@app.command()
def chi(
		spec: list[Path] = typer.Option(..., help="Две спецификации: A и B"),
		depth: Optional[int] = typer.Option(None, help=DEPTH_HELP),
		out: Optional[Path] = typer.Option(None, help=OUT_HELP),
		tail_fraction: Optional[float] = typer.Option(None, help="Хвост сетки: log r ≤ доля·log r_min (по умолчанию: 0.5)"),
):
	"""Псевдорасстояние χ(A, B) с трассой супремумов по декадам"""
	execute("chi", spec, depth, out, None, tail_fraction=tail_fraction)


@app.command()
def criteria(
		spec: list[Path] = typer.Option(..., help=SPEC_HELP),
		depth: Optional[int] = typer.Option(None, help=DEPTH_HELP),
		out: Optional[Path] = typer.Option(None, help=OUT_HELP),
		seed: Optional[int] = typer.Option(None, help=SEED_HELP),
		ud: bool = typer.Option(True, help="Равномерная несвязность (достаточное условие и зазоры)"),
		k0: int = typer.Option(1, help="Длина окна k0 достаточного условия"),
		homogeneity: bool = typer.Option(False, help="Оценки λ, δ, Δ и пробы меры шаров"),
		probes: Optional[int] = typer.Option(None, help=f"Число проб (по умолчанию: {settings.DEFAULT_PROBES})"),
		kappa: Optional[float] = typer.Option(None, help="κ для δ и Δ (по умолчанию: c_*^5)"),
		aligned: bool = typer.Option(False, help="Выровненные масштабы r_j|J| вместо случайных"),
		pair: bool = typer.Option(True, help="Для двух спецификаций: условие вложения и трасса эквивалентности"),
		s: Optional[float] = typer.Option(None, help="Показатель s для сертификата невложимости (блочное ветвление)"),
		blocks: int = typer.Option(4, help="Число блоков сертификата"),
		slack: Optional[float] = typer.Option(None, help=f"Запас строгих неравенств (по умолчанию: {settings.STRICT_SLACK})"),
		trace_slack: Optional[float] = typer.Option(None, help=f"Порог трассы (по умолчанию: {settings.TRACE_SLACK})"),
):
	"""Критерии на конечной глубине с трёхзначными вердиктами"""
	execute(
		"criteria", spec, depth, out, seed,
		tolerances={"slack": slack, "trace_slack": trace_slack},
		ud=ud, k0=k0, homogeneity=homogeneity, probes=probes, kappa=kappa, aligned=aligned,
		pair=pair, s=s, blocks=blocks,
	)


@app.command()
def embed(
		spec: list[Path] = typer.Option(..., help="Источник и цель (для --pack достаточно одной)"),
		depth: Optional[int] = typer.Option(None, help=DEPTH_HELP),
		out: Optional[Path] = typer.Option(None, help=OUT_HELP),
		seed: Optional[int] = typer.Option(None, help=SEED_HELP),
		eta: str = typer.Option("1/5", help="Масштаб η, например 1/5"),
		schedule: Optional[str] = typer.Option(
			None, help="linear: дерево Морана источника; quadratic: части равномерной несвязности на η^{k²}"
		),
		pack: bool = typer.Option(False, help="Построить упаковочное подмножество A(η) и модель E(η)"),
		levels: Optional[int] = typer.Option(None, help="Уровней упаковки (по умолчанию: до разрешения глубины K)"),
		pairs: Optional[int] = typer.Option(None, help=f"Бюджет пар для искажения (по умолчанию: {settings.PAIR_BUDGET:g})"),
		xlsx: bool = typer.Option(False, help="Дополнительно сохранить таблицы в XLSX"),
):
	"""Билипшицево вложение шарами или упаковочное подмножество"""
	execute(
		"embed", spec, depth, out, seed,
		eta=eta, schedule=schedule, pack=pack, levels=levels, pairs=pairs, xlsx=xlsx,
	)


@app.command()
def ql(
		spec: list[Path] = typer.Option(..., help="Две спецификации: A и B"),
		depth: Optional[int] = typer.Option(None, help=DEPTH_HELP),
		out: Optional[Path] = typer.Option(None, help=OUT_HELP),
		seed: Optional[int] = typer.Option(None, help=SEED_HELP),
		eta: str = typer.Option("1/6", help="Масштаб η разбиений на η^{k²}"),
		pairs: Optional[int] = typer.Option(None, help="Бюджет пар для искажения"),
		xlsx: bool = typer.Option(False, help="Дополнительно сохранить таблицы в XLSX"),
):
	"""Квазилипшицева биекция через пространство последовательностей"""
	execute("ql", spec, depth, out, seed, eta=eta, pairs=pairs, xlsx=xlsx)


@app.command()
def render(
		spec: list[Path] = typer.Option(..., help=SPEC_HELP),
		depth: Optional[int] = typer.Option(None, help=DEPTH_HELP),
		out: Optional[Path] = typer.Option(None, help=OUT_HELP),
		render_depth: Optional[int] = typer.Option(None, help="Глубина рисунка (по умолчанию: K)"),
		width: int = typer.Option(1000, help="Ширина рисунка в пикселях"),
):
	"""SVG-рисунки реализаций и α-профилей"""
	execute("render", spec, depth, out, None, render_depth=render_depth, width=width)


@app.command()
def reproduce(
		example: str = typer.Argument(..., help=f"Пример: {', '.join([*REGISTRY, *ALIASES])}"),
		out: Optional[Path] = typer.Option(None, help=OUT_HELP),
		xlsx: bool = typer.Option(False, help="Дополнительно сохранить таблицы в XLSX"),
):
	"""Прогон примера из реестра с проверками"""
	execute("reproduce", [], None, out, None, example=example, xlsx=xlsx)


@app.command()
def schema():
	"""Печатает JSON-схему файла спецификации"""
	console.print_json(json.dumps(spec_schema(), ensure_ascii=False))


@app.command()
def examples():
	"""Список воспроизводимых примеров"""
	table = print_table("📚 Примеры", Пример="cyan", Псевдонимы="white", Описание="dim")
	for name, func in REGISTRY.items():
		aliases = ", ".join(alias for alias, target in ALIASES.items() if target == name)
		table.add_row(name, aliases or "—", (func.__doc__ or "").strip())
	console.print(table)
	print_success(f"Всего примеров: {len(REGISTRY)}")


if __name__ == "__main__":
	app()
