"""
Записывает файлы спецификаций примеров в папку specs/.

Запуск: python -m scripts.make_examples [--out PATH]
"""
import json
from pathlib import Path
from typing import Optional

import typer

from app.config import settings
from app.core.examples import DOCUMENTS
from app.services.spec_loader import build_spec, parse_spec_data, spec_file_name
from app.utils.console import print_success


def make_examples(out: Optional[Path] = typer.Option(None, help=f"Папка (по умолчанию: {settings.SPECS_DIR})")):
	out = out or settings.SPECS_DIR
	out.mkdir(parents=True, exist_ok=True)
	for data in DOCUMENTS.values():
		document = parse_spec_data(data, source=data["name"])
		build_spec(document)
		path = out / spec_file_name(document)
		path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
		print_success(f"{path.name}")


if __name__ == "__main__":
	typer.run(make_examples)
