"""
SVG-рисунки: уровни реализации в ℝ¹ полосами, квадраты реализации в ℝ²,
график профилей по |ln r|.
"""
from pathlib import Path

import numpy as np

from app.core.profiles import Profile
from app.core.realization import Realization
from app.utils.console import print_warning
from app.utils.files import artifact_path

# Больше элементов в одной полосе не рисуется
MAX_ELEMENTS_PER_ROW = 4096
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]


class SVG:
	def __init__(self):
		self.svg = ""

	def header(self, width: int, height: int) -> None:
		self.svg += f"""<?xml version="1.0" standalone="no"?>
<svg version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" xmlns="http://www.w3.org/2000/svg">
<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>
"""

	def group_start(self, attr: dict[str, str]) -> None:
		g_attr = [f'{key}="{value}"' for key, value in attr.items() if key in ['id', 'class']]
		self.svg += f'<g {" ".join(g_attr)}>\n'
		if 'title' in attr:
			self.svg += f'<title>{attr["title"]}</title>\n'

	def group_end(self) -> None:
		self.svg += '</g>\n'

	def filled_rectangle(self, x1: float, y1: float, x2: float, y2: float, fill: str, extra: str = "") -> None:
		width = x2 - x1
		height = y2 - y1
		self.svg += f'<rect x="{x1:.3f}" y="{y1:.3f}" width="{width:.3f}" height="{height:.3f}" fill="{fill}" {extra}/>\n'

	def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str = "black", extra: str = "") -> None:
		self.svg += f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="{stroke}" {extra}/>\n'

	def polyline(self, points: list[tuple[float, float]], stroke: str, extra: str = "") -> None:
		coordinates = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
		self.svg += f'<polyline points="{coordinates}" fill="none" stroke="{stroke}" {extra}/>\n'

	def string_ttf(self, x: float, y: float, string: str, extra: str = "") -> None:
		self.svg += f'<text x="{x:.2f}" y="{y:.2f}" font-family="monospace" font-size="12" {extra}>{string}</text>\n'

	def get_svg(self) -> str:
		return f"{self.svg}</svg>\n"


def realization_svg(real: Realization, depth: int | None = None, width: int = 1000) -> str:
	"""Полосы уровней 0..depth (ℝ¹) или квадраты глубины depth (ℝ²)"""
	depth = min(depth or real.depth, real.depth)
	scale = width / float(real.spec.diameter)
	svg = SVG()

	if real.dimension == 2:
		svg.header(width, width)
		elements = list(real.leaves(min(depth, _drawable_depth(real, depth))))
		for element in elements:
			x, y = (float(v) * scale for v in element.origin)
			size = float(element.extent) * scale
			svg.filled_rectangle(x, width - y - size, x + size, width - y, PALETTE[0])
		return svg.get_svg()

	row, margin = 24, 30
	svg.header(width + 2 * margin, (depth + 1) * row + 2 * margin)
	for level in range(_drawable_depth(real, depth) + 1):
		svg.group_start({"id": f"level-{level}", "title": f"k = {level}"})
		y = margin + level * row
		for element in real.leaves(level):
			x1 = margin + float(element.left) * scale
			x2 = margin + float(element.right) * scale
			svg.filled_rectangle(x1, y, max(x2, x1 + 0.5), y + row * 0.6, PALETTE[level % len(PALETTE)])
		svg.string_ttf(2, y + row * 0.5, str(level), 'fill="gray"')
		svg.group_end()
	return svg.get_svg()


def _drawable_depth(real: Realization, depth: int) -> int:
	drawable = depth
	while drawable > 0 and real.spec.phi_level(drawable) > MAX_ELEMENTS_PER_ROW:
		drawable -= 1
	if drawable < depth:
		print_warning(f"Рисунок ограничен глубиной {drawable}: на глубине {depth} слишком много элементов")
	return drawable


def profile_svg(profiles: list[Profile], width: int = 800, height: int = 400) -> str:
	"""Профили против |ln r|, ось значений от 0 до максимума"""
	margin = 50
	svg = SVG()
	svg.header(width, height)

	xs = np.concatenate([np.abs(p.log_scales) for p in profiles])
	ys = np.concatenate([p.values[np.isfinite(p.values)] for p in profiles])
	x_max = float(xs.max()) if xs.size else 1.0
	y_max = float(ys.max()) * 1.1 if ys.size and ys.max() > 0 else 1.0
	to_x = lambda v: margin + v / x_max * (width - 2 * margin)
	to_y = lambda v: height - margin - v / y_max * (height - 2 * margin)

	svg.line(margin, height - margin, width - margin, height - margin)
	svg.line(margin, margin, margin, height - margin)
	svg.string_ttf(width / 2, height - 10, "|ln r|")
	svg.string_ttf(5, margin - 10, f"max {y_max:.3f}")

	for index, profile in enumerate(profiles):
		color = PALETTE[index % len(PALETTE)]
		points = [
			(to_x(abs(float(x))), to_y(float(y)))
			for x, y in zip(profile.log_scales, profile.values) if np.isfinite(y)
		]
		if not points:
			continue
		if profile.step:
			# Значение узла r_k держится на [r_k, r_{k−1})
			stepped = []
			previous = points[0][0]
			for x, y in points:
				stepped.extend([(previous, y), (x, y)])
				previous = x
			points = stepped
		svg.polyline(points, color, 'stroke-width="1.5"')
		svg.string_ttf(width - margin - 150, margin + 15 * index, profile.label or profile.kind.value, f'fill="{color}"')
	return svg.get_svg()


def write_svg(content: str, out_dir: Path, name: str) -> Path:
	path = artifact_path(out_dir, name, ".svg")
	path.write_text(content, encoding="utf-8")
	return path
