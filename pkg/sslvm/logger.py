"""
Логирование sslvm через loguru.

Консоль (stderr) получает только записи пакета sslvm: stdout занят отчётами eval.
Файловый лог пишет JSON-строки, по одной записи на строку, чтобы прогоны обучения
можно было разбирать после завершения.
"""

import sys

from loguru import logger

from sslvm.config import settings

CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> <level>{level: <7}</level> "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan> {message}"
)


def setup_logger() -> None:
    """
    Пересоздать sink'и loguru для запуска CLI.

    Уровень консоли: DEBUG при settings.debug, иначе INFO. Файл из settings.log_file
    получает всё начиная с DEBUG.
    """
    logger.remove()
    logger.add(
        sys.stderr,
        format=CONSOLE_FORMAT,
        level="DEBUG" if settings.debug else "INFO",
        filter="sslvm",
    )
    if settings.log_file:
        # Блоки Ψ₂ и вывод по точкам пишут из рабочих потоков
        logger.add(
            settings.log_file,
            level="DEBUG",
            filter="sslvm",
            serialize=True,
            enqueue=True,
            rotation="50 MB",
        )
