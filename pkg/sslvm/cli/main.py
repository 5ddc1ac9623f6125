"""
Точка входа CLI sslvm.

Коды возврата: 0 — успех, 1 — численный сбой (пишется diagnostics.json),
2 — ошибка использования или ввода-вывода.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from loguru import logger
from pydantic import ValidationError

from sslvm.cli.commands import cmd_eval, cmd_infer, cmd_synth, cmd_train, report_row
from sslvm.cli.schemas import CommonOptions, EvalOptions, InferOptions, SynthOptions, TrainOptions
from sslvm.config import settings
from sslvm.data.csv_io import format_matrix_csv
from sslvm.errors import NumericalError, OptimizationError, SSLVMError
from sslvm.evaluation.schemas import EvalMode, ReportFormat
from sslvm.kernels.schemas import KernelFamily
from sslvm.logger import setup_logger
from sslvm.model.initialization import InitStrategy

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

_OPTIONS: dict[str, type[CommonOptions]] = {
    "synth": SynthOptions,
    "train": TrainOptions,
    "infer": InferOptions,
    "eval": EvalOptions,
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON-файл с параметрами (флаги важнее)")
    parser.add_argument("--threads", type=int, help="Число потоков (1 — детерминированный режим)")
    parser.add_argument("--diagnostics", help="Куда писать diagnostics.json при численном сбое")
    parser.add_argument("--debug", action="store_true", default=None, help="Уровень DEBUG")


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--normalize", action="store_true", default=None, help="Стандартизировать столбцы")
    parser.add_argument("--header", action="store_true", default=None, help="Пропустить первую строку CSV")
    parser.add_argument("--replicate", help="Множители повторения столбцов по видам, через запятую")


def build_parser() -> argparse.ArgumentParser:
    """Парсер аргументов с подкомандами synth, train, infer, eval."""
    parser = argparse.ArgumentParser(
        prog="sslvm",
        description="SSGP-LVM и SSMRD: обучение, вывод латентных координат и оценка",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    synth = subparsers.add_parser("synth", help="Сгенерировать синтетический набор")
    synth.add_argument("--seed", type=int)
    synth.add_argument("--out-dir")
    _add_common(synth)

    train = subparsers.add_parser("train", help="Обучить модель")
    train.add_argument("--data", help="CSV вида или несколько через запятую (SSMRD)")
    train.add_argument("--q", type=int, help="Число латентных измерений")
    train.add_argument("--m", type=int, help="Число индуцирующих точек")
    train.add_argument("--kernel", choices=[family.value for family in KernelFamily])
    train.add_argument("--init", choices=[strategy.value for strategy in InitStrategy])
    train.add_argument("--iters", type=int)
    train.add_argument("--seed", type=int)
    train.add_argument("--checkpoint")
    train.add_argument("--trace", help="CSV журнала iter,elbo,grad_norm")
    train.add_argument("--labels", help="Метки для --init simplex")
    _add_data_flags(train)
    _add_common(train)

    infer = subparsers.add_parser("infer", help="Вывести латентные координаты новых точек")
    infer.add_argument("--checkpoint")
    infer.add_argument("--data", help="CSV тестовых точек")
    infer.add_argument("--train-data", help="Обучающие CSV всех видов через запятую")
    infer.add_argument("--view", type=int)
    infer.add_argument("--out")
    infer.add_argument("--iters", type=int)
    infer.add_argument("--seed", type=int)
    _add_data_flags(infer)
    _add_common(infer)

    evaluate = subparsers.add_parser("eval", help="Посчитать метрики")
    evaluate.add_argument("--checkpoint")
    evaluate.add_argument("--mode", choices=[mode.value for mode in EvalMode])
    evaluate.add_argument("--view", type=int)
    evaluate.add_argument("--threshold", type=float)
    evaluate.add_argument("--labels")
    evaluate.add_argument("--test-latents")
    evaluate.add_argument("--test-labels")
    evaluate.add_argument("--queries")
    evaluate.add_argument("--truth")
    evaluate.add_argument("--header", action="store_true", default=None)
    evaluate.add_argument("--out", help="Файл отчёта (иначе stdout)")
    evaluate.add_argument(
        "--format",
        dest="report_format",
        choices=[fmt.value for fmt in ReportFormat],
        help="json — полный отчёт, csv — строка чисел без заголовка",
    )
    evaluate.add_argument("--curve", help="CSV кривой precision-recall (режим retrieve)")
    _add_common(evaluate)
    return parser


def resolve_options(args: argparse.Namespace) -> CommonOptions:
    """
    Собрать параметры команды: флаги > --config > значения по умолчанию.

    Raises:
        ValidationError: Параметры не проходят проверку
        OSError, ValueError: --config не читается или не является JSON-объектом
    """
    values: dict[str, Any] = {}
    if args.config:
        document = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(document, dict):
            raise ValueError("--config должен содержать JSON-объект")
        values.update(document)
    flags = {
        key: value
        for key, value in vars(args).items()
        if value is not None and key not in ("command", "config", "debug")
    }
    values.update(flags)
    return _OPTIONS[args.command].model_validate(values)


def _write_diagnostics(path: str, error: SSLVMError) -> None:
    document: dict[str, Any] = {"error": type(error).__name__, "message": str(error)}
    if isinstance(error, NumericalError):
        document["matrix_name"] = error.matrix_name
    if isinstance(error, OptimizationError):
        document["state"] = error.state
    try:
        Path(path).write_text(json.dumps(document, ensure_ascii=False, indent=2, default=str), encoding="utf-8")
    except OSError as e:
        logger.error(f"❌ Не удалось записать {path}: {e}")


def _dump(report: dict, options: EvalOptions) -> None:
    if options.report_format == ReportFormat.CSV:
        text = format_matrix_csv(report_row(report))
    else:
        text = json.dumps(report, ensure_ascii=False, indent=2) + "\n"
    if options.out:
        Path(options.out).write_text(text, encoding="utf-8")
        print(f"✅ Отчёт записан: {options.out}")
    else:
        print(text, end="")


def run(options: CommonOptions) -> None:
    """Выполнить команду по типу параметров."""
    match options:
        case SynthOptions():
            cmd_synth(options)
        case TrainOptions():
            cmd_train(options)
        case InferOptions():
            cmd_infer(options)
        case EvalOptions():
            _dump(cmd_eval(options), options)


def main(argv: list[str] | None = None) -> int:
    """
    Разобрать аргументы и выполнить команду.

    Returns:
        Код возврата
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.debug:
        settings.debug = True
    setup_logger()

    try:
        options = resolve_options(args)
    except ValidationError as e:
        parser.error(str(e))
    except (OSError, ValueError) as e:
        parser.error(f"--config: {e}")

    if options.threads is not None:
        settings.threads = options.threads

    try:
        run(options)
    except (NumericalError, OptimizationError) as e:
        logger.error(f"❌ Численный сбой: {e}")
        _write_diagnostics(options.diagnostics, e)
        return EXIT_NUMERICAL
    except (SSLVMError, OSError, ValueError) as e:
        if settings.debug:
            logger.exception(e)
        logger.error(f"❌ {e}")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
