"""Module with library settings, read from .env file and environment"""

from functools import lru_cache
from typing import Literal

from loguru import logger
from pydantic import Field
from pydantic_settings import BaseSettings
from pydantic_settings import SettingsConfigDict
from pydantic_settings import SettingsError


class SettingsNotValidError(Exception):
    def __init__(self, details: str):
        super().__init__(
            f"Settings from .env file and environment variables "
            f"are not valid: {details}"
        )


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file='.env',
        env_file_encoding='utf-8',
        env_prefix='EXSYNTH_',
        extra="ignore"
    )

    workers: int = Field(default=4, ge=1)

    frame_len: int = Field(default=1024, gt=0)
    hop: int = Field(default=256, gt=0)
    window: Literal['hann', 'rectangular'] = 'hann'

    # Used for analysis documents without sample_rate field
    sample_rate: int = Field(default=22050, gt=0)

    gl_iters: int = Field(default=50, ge=1)
    neighbors: int = Field(default=10, ge=1)
    lambda_v: float = Field(default=1.0, ge=0)

    log_level: str = 'INFO'


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return settings instance, shared by the whole process"""
    try:
        settings = Settings()
    except (SettingsError, ValueError) as e:
        raise SettingsNotValidError(str(e)) from e
    logger.debug(f'Settings loaded: {settings.model_dump()}')
    return settings
