"""Argument checks shared by the estimator and the CLI."""
from __future__ import annotations

import numbers

from .families import CurveInstance, Registry, default_registry


def check_choice(name: str, value, choices) -> None:
    if value not in choices:
        raise ValueError(f"{name} must be one of {tuple(choices)}, got {value!r}")


def check_positive_int(name: str, value, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be at least {minimum}, got {value}")
    return int(value)


def check_seed(value) -> int:
    return check_positive_int("seed", value, minimum=0)


def as_instance(item, registry: Registry | None = None) -> CurveInstance:
    """Accept a CurveInstance or a registered curve name."""
    if isinstance(item, CurveInstance):
        return item
    if isinstance(item, str):
        return (registry or default_registry()).curve(item)
    raise TypeError(f"expected a CurveInstance or curve name, got {type(item).__name__}")


def as_instances(X, registry: Registry | None = None) -> list[CurveInstance]:
    if isinstance(X, (CurveInstance, str)):
        X = [X]
    out = [as_instance(x, registry) for x in X]
    if not out:
        raise ValueError("no curves given")
    return out
