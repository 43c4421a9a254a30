"""Исполнители точек свипа: последовательный и на пуле потоков.

Оба сохраняют порядок входных точек, поэтому результаты свипа не зависят от числа
исполнителей.
"""

import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor

from igo_toolkit.contracts.ports.executor import SweepExecutorPort

logger = logging.getLogger(__name__)


class SequentialExecutor(SweepExecutorPort):
    """Вычисление точек по очереди в текущем потоке."""

    def map[T, R](self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """Применить ``fn`` к точкам последовательно."""
        return [fn(item) for item in items]

    def close(self) -> None:
        """Ресурсов нет."""


class ThreadPoolSweepExecutor(SweepExecutorPort):
    """Вычисление точек на пуле потоков ``concurrent.futures``.

    Параметры
    ----------
    max_workers: int
        Число потоков пула.
    """

    def __init__(self, max_workers: int) -> None:
        """Создать пул из ``max_workers`` потоков."""
        self._pool = ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="igo-sweep")
        self._max_workers = max_workers
        logger.debug("Создан пул свипа на %d потоков", max_workers)

    def map[T, R](self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """Применить ``fn`` к точкам в пуле; ``Executor.map`` сохраняет порядок."""
        return list(self._pool.map(fn, items))

    def close(self) -> None:
        """Дождаться завершения задач и остановить пул."""
        self._pool.shutdown(wait=True)


def make_executor(workers: int) -> SweepExecutorPort:
    """Последовательный исполнитель для ``workers == 1``, иначе пул потоков."""
    return SequentialExecutor() if workers <= 1 else ThreadPoolSweepExecutor(max_workers=workers)
