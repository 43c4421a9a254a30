from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable
from types import TracebackType
from typing import Self


class SweepExecutorPort(ABC):
    """Абстракция исполнителя точек свипа.

    Гарантирует, что результат ``map`` упорядочен так же, как входные точки, независимо
    от числа исполнителей. Реализации располагаются в ``igo_toolkit.toolkit.executors``.
    """

    @abstractmethod
    def map[T, R](self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """Применить ``fn`` к каждой точке и вернуть результаты в исходном порядке.

        Параметры
        ----------
        fn: Callable[[T], R]
            Чистая функция одной точки; не должна разделять изменяемое состояние.
        items: Iterable[T]
            Точки свипа.
        """
        ...

    @abstractmethod
    def close(self) -> None:
        """Освободить ресурсы исполнителя (пулы потоков и т.п.)."""
        ...

    def __enter__(self) -> Self:
        """Вернуть исполнитель для использования в ``with``."""
        return self

    def __exit__(
        self, exc_t: type[BaseException] | None, exc: BaseException | None, tb: TracebackType | None
    ) -> None:
        """Закрыть исполнитель при выходе из контекста."""
        self.close()
