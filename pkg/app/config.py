from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
	model_config = SettingsConfigDict(
		env_file='.env',
		env_file_encoding='utf-8',
		case_sensitive=False,
		extra='ignore',
	)

	# Paths
	BASE_DIR: Path = Field(default_factory=lambda: Path(__file__).parent.parent)
	SPECS_DIR: Path = Field(default_factory=lambda: Path(__file__).parent.parent / "specs")
	OUTPUT_DIR: Path = Field(default_factory=lambda: Path(__file__).parent.parent / "output")

	# Глубина и воспроизводимость
	DEFAULT_DEPTH: int = 12
	DEFAULT_SEED: int = 20240601
	VALIDATION_DEPTH: int = 100_000
	EXACT_CHECK_LIMIT: int = 1_000
	MAX_LEAVES: int = 200_000

	# Допуски вердиктов
	STRICT_SLACK: float = 0.02
	TRACE_SLACK: float = 0.01
	EQUAL_TOLERANCE: float = 1e-9
	CHI_GRID_SLACK: float = 1e-12
	WINDOW_FRACTION: float = 0.5

	# Мера и счёт покрытий
	REFINEMENT_MARGIN: int = 12
	COUNT_REFINEMENT_MARGIN: int = 6
	DEFAULT_PROBES: int = 200
	PROFILE_GROWTH_FACTOR: float = 1.5

	# Равномерная несвязность
	UD_GAP_EPSILON: float = 1e-2
	UD_RECORD_LOWS: int = 3

	# Вложения
	PAIR_BUDGET: int = 1_000_000
	PAIRS_PER_LEVEL: int = 200
	QL_DEVIATION_BINS: int = 4

	# Консоль
	CONSOLE_OUTPUT_BATCH_SIZE: int = 20
	REWRITE_FILE_ON_CONFLICT: bool = True

	def __init__(self, **data):
		super().__init__(**data)
		self.OUTPUT_DIR.mkdir(parents=True, exist_ok=True)


settings = Settings()
