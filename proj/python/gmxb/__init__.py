"""Python interface to the gmxb pricing engine.

Configurations are plain dictionaries with the same schema as the JSON files
read by the ``gmxb`` command-line tool. Keyword ``overrides`` take dotted
assignments such as ``"market.rate=0.03"``.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping, Optional

from . import _core
from ._core import ConfigError, NumericalError

__version__ = _core.__version__

__all__ = [
    "ConfigError",
    "NumericalError",
    "bench_cells",
    "default_config",
    "fair_fee",
    "gauss_hermite",
    "greeks",
    "price",
    "resolve",
]


def _text(config: Optional[Mapping[str, Any]]) -> str:
    return "" if config is None else json.dumps(config)


def _list(overrides: Optional[Iterable[str]]) -> list:
    return [] if overrides is None else list(overrides)


def default_config() -> dict:
    """Every configuration key with its default value."""
    return json.loads(_core.default_config())


def resolve(config: Optional[Mapping[str, Any]] = None, overrides: Optional[Iterable[str]] = None) -> dict:
    """Validate a configuration and return it with defaults filled in."""
    return json.loads(_core.resolved_config(_text(config), _list(overrides)))


def price(config: Optional[Mapping[str, Any]] = None, overrides: Optional[Iterable[str]] = None) -> dict:
    """Contract value at the configured state and fee."""
    return _core.price(_text(config), _list(overrides))


def fair_fee(
    config: Optional[Mapping[str, Any]] = None,
    overrides: Optional[Iterable[str]] = None,
    guess: Optional[float] = None,
) -> dict:
    """Fee rate at which the contract is worth the premium."""
    return _core.fair_fee(_text(config), _list(overrides), guess)


def greeks(config: Optional[Mapping[str, Any]] = None, overrides: Optional[Iterable[str]] = None) -> dict:
    """Likelihood-ratio and bump-and-reprice sensitivities."""
    return _core.greeks(_text(config), _list(overrides))


def bench_cells(table: int) -> list:
    """Cells of a built-in benchmark table with their reference fees in bp."""
    cells = _core.bench_cells(table)
    for cell in cells:
        cell["config"] = json.loads(cell["config"])
    return cells


def gauss_hermite(q: int):
    """Nodes and weights of the q-point rule for the weight exp(-x^2)."""
    return _core.gauss_hermite(q)
