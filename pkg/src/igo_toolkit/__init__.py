"""Синтез и анализ импульсного осциллятора Гудвина."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("igo-toolkit")
except PackageNotFoundError:
    __version__ = "0.1.0"
