from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np
from rich.progress import BarColumn, Progress, TextColumn

from app.config import settings
from app.core.criteria import (
	check_homogeneity,
	embed_condition,
	non_embeddability_certificate,
	ql_equivalent,
	ud_direct,
	ud_sufficient,
)
from app.core.embedding import (
	Schedule,
	build_embedding,
	decompose_ud,
	distortion,
	pack_subset,
	pair_table,
	ql_bijection,
)
from app.core.errors import MoranError, ParseError, PreconditionViolated
from app.core.examples import DOCUMENTS, resolve_example, run_example
from app.core.measure import ball_measure_bounds, random_probes
from app.core.profiles import (
	aligned_scales,
	alpha_profile,
	box_dimension,
	chi,
	compare_profiles,
	counting_chain,
	covering_profile,
	dims,
)
from app.core.realization import realize
from app.models import AcceptanceCheck, CriterionVerdict, Report, RunConfig, Verdict
from app.services.export import export_tables_to_xlsx, report_path, write_csv, write_report
from app.services.render import profile_svg, realization_svg, write_svg
from app.services.spec_loader import LoadedSpec, load_specs, to_number
from app.utils.base import canonical_json, levels_from_range, sha256_text, slugify_name
from app.utils.console import console, print_error, print_warning

COMMANDS = ("validate", "dims", "profile", "chi", "criteria", "embed", "ql", "render", "reproduce")

EXIT_SUCCESS = 0
EXIT_FAILS = 1
EXIT_INCONCLUSIVE = 2
EXIT_ERROR = 3


@dataclass
class StepOutput:
	"""Всё, что команда отдаёт в отчёт и в артефакты"""
	results: dict[str, Any] = field(default_factory=dict)
	verdicts: list[CriterionVerdict] = field(default_factory=list)
	checks: list[AcceptanceCheck] = field(default_factory=list)
	tables: dict[str, list[dict]] = field(default_factory=dict)
	svgs: dict[str, str] = field(default_factory=dict)


def plain(value: Any) -> Any:
	"""Значение, пригодное для JSON: дроби строкой, numpy в числа Python"""
	if isinstance(value, Fraction):
		return str(value)
	if isinstance(value, np.generic):
		return value.item()
	if isinstance(value, dict):
		return {str(key): plain(item) for key, item in value.items()}
	if isinstance(value, (list, tuple)):
		return [plain(item) for item in value]
	return value


def exit_code_for(verdicts: list[CriterionVerdict], checks: list[AcceptanceCheck]) -> int:
	"""0 выполнено, 1 провал на глубине (или непрошедшая проверка примера), 2 неопределённо"""
	states = {verdict.verdict for verdict in verdicts}
	if Verdict.FAILS in states or not all(check.passed for check in checks):
		return EXIT_FAILS
	if Verdict.INCONCLUSIVE in states:
		return EXIT_INCONCLUSIVE
	return EXIT_SUCCESS


def _status(code: int) -> str:
	return {
		EXIT_SUCCESS: "success",
		EXIT_FAILS: Verdict.FAILS.value,
		EXIT_INCONCLUSIVE: Verdict.INCONCLUSIVE.value,
	}.get(code, "error")


def _require(specs: list[LoadedSpec], count: int, command: str) -> None:
	if len(specs) < count:
		raise PreconditionViolated(f"Команде {command} нужно спецификаций: {count}, передано {len(specs)}")


def _eta(config: RunConfig, default: str = "1/5") -> Fraction | float:
	return to_number(config.options.get("eta") or default)


# Команды

def run_validate(specs: list[LoadedSpec], config: RunConfig) -> StepOutput:
	output = StepOutput()
	output.results["specs"] = [{**loaded.spec.describe(), "placement": loaded.placement.describe()} for loaded in specs]
	return output


def run_dims(specs: list[LoadedSpec], config: RunConfig) -> StepOutput:
	output = StepOutput()
	estimates = [dims(loaded.spec, config.depth, config.options.get("window_fraction")) for loaded in specs]
	output.tables["dims"] = [estimate.model_dump() for estimate in estimates]
	for loaded in specs:
		output.tables[f"alpha-{loaded.spec.name}"] = alpha_profile(loaded.spec, config.depth).rows()
	return output


def _profile_levels(config: RunConfig) -> list[int]:
	"""Уровни k, для которых r_k|J|/4 ещё выше разрешения дерева глубины K"""
	try:
		return levels_from_range(config.options.get("levels"), max(config.depth - 3, 1))
	except ValueError as e:
		raise ParseError(str(e), key="levels") from e


def run_profile(specs: list[LoadedSpec], config: RunConfig) -> StepOutput:
	"""α-профиль, профиль покрытий f и их сравнение; счётная цепочка на выровненных масштабах"""
	output = StepOutput()
	profiles = []
	for loaded in specs:
		spec = loaded.spec
		alpha = alpha_profile(spec, config.depth)
		profiles.append(alpha)
		output.tables[f"alpha-{spec.name}"] = alpha.rows()
		if spec.dimension != 1:
			print_warning(f"{spec.name}: профиль покрытий строится только в ℝ¹")
			continue

		levels = [
			k for k in _profile_levels(config)
			if spec.phi_level(k) <= settings.MAX_LEAVES
		]
		if not levels:
			print_warning(f"{spec.name}: нет уровней с допустимым числом элементов")
			continue
		real = realize(spec, loaded.placement, config.depth)
		scales = aligned_scales(spec, levels)
		covering, counts = covering_profile(real, scales, oracle=config.options.get("oracle", False))
		profiles.append(covering)
		output.tables[f"covering-{spec.name}"] = [
			{"k": k, **result.model_dump(), "f": float(value)} for k, result, value in zip(levels, counts, covering.values)
		]
		chain = []
		for k, r in zip(levels, scales):
			wide, packing, narrow = counting_chain(real, r)
			chain.append({"k": k, "r": float(r), "N(2r)": wide, "P(r)": packing, "N(r/2)": narrow, "ordered": wide <= packing <= narrow})
		output.tables[f"chain-{spec.name}"] = chain
		output.results[spec.name] = {
			"comparison": compare_profiles(covering, alpha).model_dump(),
			"box_dimension": box_dimension(real, scales).model_dump() if len(scales) > 1 else None,
			"chain_ordered": all(row["ordered"] for row in chain),
		}

	output.svgs["profiles"] = profile_svg(profiles)
	return output


def run_chi(specs: list[LoadedSpec], config: RunConfig) -> StepOutput:
	_require(specs, 2, "chi")
	output = StepOutput()
	a, b = specs[0].spec, specs[1].spec
	estimate = chi(a, b, config.depth, config.options.get("tail_fraction") or 0.5)
	output.results["chi"] = {"source": a.name, "target": b.name, "estimate": estimate.estimate, "window": estimate.window}
	output.tables["chi-trace"] = [row.model_dump() for row in estimate.trace]
	output.svgs["alpha"] = profile_svg([alpha_profile(a, config.depth), alpha_profile(b, config.depth)])
	return output


def run_criteria(specs: list[LoadedSpec], config: RunConfig) -> StepOutput:
	"""Критерии одной спецификации; для пары дополнительно вложение и эквивалентность"""
	output = StepOutput()
	options = config.options
	slack = config.tolerances.get("slack")

	for loaded in specs:
		spec = loaded.spec
		if options.get("ud", True):
			output.verdicts.append(ud_sufficient(spec, options.get("k0") or 1, config.depth, slack))
			if spec.dimension == 1:
				output.verdicts.append(ud_direct(realize(spec, loaded.placement, config.depth)))

		if options.get("homogeneity") and spec.dimension == 1:
			real = realize(spec, loaded.placement, config.depth)
			report = check_homogeneity(real, options.get("probes"), options.get("kappa"), config.seed, options.get("aligned", False))
			output.results[f"homogeneity-{spec.name}"] = report.model_dump()
			if not report.aligned:
				print_warning(f"{spec.name}: выборочные оценки однородности не сертифицированы")

			rows = []
			for probe in random_probes(real, options.get("probes") or settings.DEFAULT_PROBES, config.seed):
				lower, upper = ball_measure_bounds(spec, probe.level)
				rows.append({
					"x": float(probe.center), "r": float(probe.radius), "k": probe.level,
					"lo": float(probe.lo), "hi": float(probe.hi),
					"within_bounds": lower <= probe.lo <= probe.hi <= upper,
				})
			output.tables[f"ball-probes-{spec.name}"] = rows

	if len(specs) >= 2 and options.get("pair", True):
		a, b = specs[0].spec, specs[1].spec
		output.verdicts.append(embed_condition(a, b, depth=config.depth, slack=slack))
		output.verdicts.append(ql_equivalent(a, b, depth=config.depth, slack=config.tolerances.get("trace_slack")))

	if options.get("s") is not None:
		output.verdicts.append(non_embeddability_certificate(options["s"], specs[-1].spec, options.get("blocks") or 4))

	for verdict in output.verdicts:
		if verdict.trace:
			output.tables[f"{verdict.kind.value}-{verdict.details.get('spec', verdict.details.get('target', ''))}"] = verdict.trace
	return output


def run_embed(specs: list[LoadedSpec], config: RunConfig) -> StepOutput:
	"""Упаковочное подмножество A(η) или вложение первой спецификации во вторую"""
	output = StepOutput()
	eta = _eta(config)
	source = specs[0]

	if config.options.get("pack"):
		packed = pack_subset(realize(source.spec, source.placement, config.depth), eta, config.options.get("levels"))
		source_depth = source.spec.scale_index(packed.eta ** packed.levels)
		estimate = chi(packed.spec, source.spec, packed.levels, depth_b=source_depth)
		output.results["packed"] = {
			"eta": eta,
			"levels": packed.levels,
			"counts": packed.counts,
			"floor_bounds": packed.floor_bounds,
			"hausdorff": packed.hausdorff,
			"hausdorff_slack": packed.hausdorff_slack,
			"chi": estimate.estimate,
			"model": packed.spec.describe(),
		}
		output.tables["packed-centers"] = [
			{"path": ".".join(map(str, path)), "x": float(x)} for path, x in sorted(packed.centers.items())
		]
		return output

	_require(specs, 2, "embed")
	target = specs[1]
	schedule = config.options.get("schedule")
	real = realize(source.spec, source.placement, config.depth)
	if schedule == Schedule.QUADRATIC.value:
		tree = decompose_ud(real, eta, Schedule.QUADRATIC)
		levels = tree.levels
	else:
		tree, levels = real, config.depth

	target_depth = target.spec.scale_index(eta ** levels) + settings.COUNT_REFINEMENT_MARGIN
	embedding = build_embedding(tree, realize(target.spec, target.placement, target_depth), eta, levels)
	pairs = config.options.get("pairs")
	if pairs:
		embedding.stats = distortion(embedding, pairs, config.seed)

	condition = embed_condition(source.spec, target.spec, depth=config.depth)
	output.results["embedding"] = {
		"construction": embedding.construction.value,
		"eta": eta,
		"levels": embedding.depth,
		"target_depth": target_depth,
		"stats": embedding.stats.model_dump(),
		"condition": {"value": condition.value, "verdict": condition.verdict.value},
	}
	output.tables["map"] = embedding.rows()
	output.tables["distortion"] = pair_table(embedding, pairs, config.seed)
	return output


def run_ql(specs: list[LoadedSpec], config: RunConfig) -> StepOutput:
	_require(specs, 2, "ql")
	output = StepOutput()
	a, b = specs
	bijection = ql_bijection(a.spec, b.spec, _eta(config, "1/6"), config.depth, a.placement, b.placement)
	pairs = config.options.get("pairs")
	if pairs:
		bijection.stats = distortion(bijection, pairs, config.seed)

	trace = ql_equivalent(a.spec, b.spec, depth=config.depth)
	output.results["bijection"] = {
		"construction": bijection.construction.value,
		"levels": bijection.depth,
		"cells": len(bijection.source_points),
		"source_parts": len(bijection.source.leaf_parts()),
		"target_parts": len(bijection.target.leaf_parts()),
		"stats": bijection.stats.model_dump(),
		"trace": {"value": trace.value, "verdict": trace.verdict.value},
	}
	output.tables["map"] = bijection.rows()
	output.tables["distortion"] = pair_table(bijection, pairs, config.seed)
	return output


def run_render(specs: list[LoadedSpec], config: RunConfig) -> StepOutput:
	output = StepOutput()
	depth = config.options.get("render_depth") or config.depth
	for loaded in specs:
		real = realize(loaded.spec, loaded.placement, depth)
		output.svgs[f"realization-{loaded.spec.name}"] = realization_svg(real, depth, config.options.get("width") or 1000)
	output.svgs["alpha"] = profile_svg([alpha_profile(loaded.spec, config.depth) for loaded in specs])
	return output


def run_reproduce(specs: list[LoadedSpec], config: RunConfig) -> StepOutput:
	example = run_example(config.options.get("example", ""))
	output = StepOutput(
		results={"example": example.example, **example.results},
		verdicts=example.verdicts,
		checks=example.checks,
		tables=example.tables,
	)
	output.results["specs"] = [loaded.spec.describe() for loaded in example.specs]
	return output


HANDLERS: dict[str, Callable[[list[LoadedSpec], RunConfig], StepOutput]] = {
	"validate": run_validate,
	"dims": run_dims,
	"profile": run_profile,
	"chi": run_chi,
	"criteria": run_criteria,
	"embed": run_embed,
	"ql": run_ql,
	"render": run_render,
	"reproduce": run_reproduce,
}


def report_name(config: RunConfig) -> str:
	if config.command == "reproduce":
		return f"reproduce-{config.options.get('example', '')}"
	return config.command


def _digests(config: RunConfig, specs: list[LoadedSpec]) -> dict[str, str]:
	digests = {"config": sha256_text(canonical_json(config.model_dump(exclude={"out_dir"})))}
	for loaded in specs:
		digests[loaded.source] = loaded.digest
	if config.command == "reproduce":
		digests["example"] = sha256_text(canonical_json(DOCUMENTS))
	return digests


def _write_artifacts(output: StepOutput, out_dir: Path, prefix: str, xlsx: bool) -> list[str]:
	artifacts = []
	for name, rows in output.tables.items():
		if rows:
			artifacts.append(str(write_csv([plain(row) for row in rows], out_dir, f"{prefix}-{name}")))
	for name, content in output.svgs.items():
		artifacts.append(str(write_svg(content, out_dir, f"{prefix}-{name}")))
	if xlsx:
		path = export_tables_to_xlsx(
			{slugify_name(name): [plain(row) for row in rows] for name, rows in output.tables.items()},
			out_dir, prefix, title=f"moranlab {prefix}",
		)
		if path:
			artifacts.append(str(path))
	return artifacts


def run(config: RunConfig) -> Report:
	"""
	Универсальный запуск команды: загрузка спецификаций, вычисление, артефакты и отчёт.
	Ошибки вычислительного ядра попадают в отчёт с кодом выхода 3.
	"""
	if config.command not in HANDLERS:
		raise PreconditionViolated(f"Неизвестная команда '{config.command}'. Доступны: {', '.join(COMMANDS)}")

	out_dir = Path(config.out_dir)
	prefix = slugify_name(report_name(config))
	report = Report(command=config.command, config=config)

	with Progress(
		TextColumn("[progress.description]{task.description}"),
		BarColumn(),
		TextColumn(" {task.completed}/{task.total}"),
		console=console,
		transient=True,
	) as progress:
		task = progress.add_task(f"🧮 {config.command}...", total=3)
		try:
			if config.command == "reproduce":
				resolve_example(config.options.get("example", ""))
			specs = load_specs([Path(path) for path in config.spec_paths])
			if config.command != "reproduce":
				_require(specs, 1, config.command)
			report.digests = _digests(config, specs)
			progress.advance(task)

			output = HANDLERS[config.command](specs, config)
			progress.advance(task)

			report.results = plain(output.results)
			report.verdicts = output.verdicts
			report.checks = output.checks
			report.artifacts = _write_artifacts(output, out_dir, prefix, config.options.get("xlsx", False))
			# Код выхода reproduce задают только проверки примера
			counted = [] if config.command == "reproduce" else output.verdicts
			report.exit_code = exit_code_for(counted, output.checks)
			report.status = _status(report.exit_code)
		except MoranError as e:
			print_error(e)
			report.results = {"error": {"name": e.name, "message": e.message, "details": plain({k: str(v) for k, v in e.details.items()})}}
			report.status = "error"
			report.exit_code = EXIT_ERROR
		progress.advance(task)

	report.artifacts.append(str(report_path(out_dir, prefix)))
	write_report(report, out_dir, prefix)
	return report
