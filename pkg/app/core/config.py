from typing import Optional
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

load_dotenv()  # Loads environment variables from .env file


class Settings(BaseSettings):
    PROJECT_NAME: str = "mwquery"
    VERSION: str = "0.1.0"
    DEBUG: bool = False

    # Diagnostics
    MWQ_COLOR: str = "auto"  # never, auto
    LOG_LEVEL: Optional[str] = None  # overrides the DEBUG-derived console level
    LOG_FORMAT: str = "standard"  # standard, json
    LOG_TO_FILE: bool = False
    LOG_DIR: str = "logs"

    # Oracle
    ORACLE_DEPTH: int = 3
    ORACLE_MAX_DOMAIN: int = 64

    # Fuzzing
    FUZZ_SEEDS: int = 100
    FUZZ_BASE_SEED: int = 0
    REPRO_DIR: str = "repro"

    # Time stamps are signed 64-bit; the bit comparator uses this many magnitude bits
    TIME_BITS: int = 62

    @field_validator("MWQ_COLOR", "LOG_FORMAT", mode="before")
    @classmethod
    def normalize_choice(cls, v: str):
        if isinstance(v, str):
            v = v.strip().lower()
        return v

    @field_validator("MWQ_COLOR")
    @classmethod
    def check_color(cls, v: str):
        if v not in ("never", "auto"):
            raise ValueError("MWQ_COLOR must be 'never' or 'auto'")
        return v

    @field_validator("LOG_FORMAT")
    @classmethod
    def check_log_format(cls, v: str):
        if v not in ("standard", "json"):
            raise ValueError("LOG_FORMAT must be 'standard' or 'json'")
        return v

    @field_validator("TIME_BITS")
    @classmethod
    def check_time_bits(cls, v: int):
        if not 1 <= v <= 63:
            raise ValueError("TIME_BITS must lie in 1..63")
        return v

    model_config = SettingsConfigDict(
        case_sensitive=True,
        env_file=".env",
        extra="ignore",
    )


settings = Settings()
