from pathlib import Path

from app.config import settings
from app.utils.base import slugify_name


def artifact_path(directory: Path, base_name: str, extension: str, postfix: str = "") -> Path:
	"""Путь артефакта со slug-именем; папка создаётся при необходимости"""
	directory.mkdir(parents=True, exist_ok=True)
	return directory / f"{slugify_name(base_name)}{postfix}{extension}"


def get_unique_filename(
		directory: Path,
		base_name: str,
		extension: str = ".xlsx",
		overwrite: bool | None = None,
) -> Path:
	"""
	Путь для книги XLSX. При overwrite=False к занятому имени добавляется
	индекс -02, -03, ... (по умолчанию settings.REWRITE_FILE_ON_CONFLICT).
	"""
	overwrite = settings.REWRITE_FILE_ON_CONFLICT if overwrite is None else overwrite
	path = artifact_path(directory, base_name, extension)
	index = 1
	while not overwrite and path.exists():
		index += 1
		path = artifact_path(directory, base_name, extension, f"-{index:02d}")
	return path


def find_spec_files(directory: Path) -> list[Path]:
	"""Все файлы спецификаций *.json в папке (рекурсивно), в стабильном порядке"""
	return sorted(directory.glob("**/*.json"))
