"""
Конфигурация sslvm.
Загрузка переменных окружения через pydantic-settings.
"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Настройки процесса (CLI и библиотека)."""

    # Режим отладки: уровень DEBUG и трейсбеки в выводе CLI
    debug: bool = False

    # Число потоков для Ψ₂ и вывода по тестовым точкам (1 = детерминированный режим)
    threads: int = Field(default=1, ge=1)

    # Необязательный файловый лог
    log_file: str | None = None

    model_config = SettingsConfigDict(
        env_prefix="SSLVM_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


settings = Settings()
