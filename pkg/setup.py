from pathlib import Path

from setuptools import find_packages, setup

requirements = [
	line.strip()
	for line in Path(__file__).with_name("requirements.txt").read_text(encoding="utf-8").splitlines()
	if line.strip() and line.strip() != "pytest"
]

setup(
	name="moranlab",
	version="0.1.0",
	description="Конструкции Морана: размерности, профили масштаба, критерии и вложения",
	python_requires=">=3.10",
	packages=find_packages(include=["app", "app.*", "scripts"]),
	py_modules=["cli", "main"],
	install_requires=requirements,
	extras_require={"test": ["pytest"]},
	entry_points={"console_scripts": ["moranlab=cli:app"]},
)
