from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings


SCHEMA_VERSION = "1"
DEFAULT_CORPUS = Path(__file__).resolve().parents[2] / "corpus"
LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"


class Settings(BaseSettings):
    """Runtime configuration loaded from environment variables."""

    corpus: Path = Field(default=DEFAULT_CORPUS)
    theory: str = Field(default="bn")
    field: str = Field(default="q")
    jobs: int = Field(default=1)
    seed: int = Field(default=7)
    verify_cases: int = Field(default=200)
    max_pole_depth: int = Field(default=64)
    log_level: str = Field(default="INFO")

    class Config:
        env_file = ".env"
        env_prefix = "KHMIX_"
        extra = "ignore"


settings = Settings()
