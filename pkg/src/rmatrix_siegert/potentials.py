"""Potential handles and the ``name:key=val,...`` spec parser used by the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError
from .oracles import BargmannParams, bargmann_potential

__all__ = ["Potential", "zero", "constant", "bargmann", "parse_potential", "bargmann_params", "POTENTIALS"]


@dataclass(frozen=True)
class Potential:
    """A radial potential ``V(r)`` plus the metadata the solvers need."""

    name: str
    func: Callable[[float], float] = field(repr=False)
    short_range: bool = True
    params: dict = field(default_factory=dict)

    def __call__(self, r):
        return self.func(r)

    @property
    def spec(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}:{args}"


def zero() -> Potential:
    return Potential("zero", lambda r: 0.0 * np.asarray(r, dtype=float))


def constant(v0: float) -> Potential:
    # a constant does not vanish at large r, but is finite on [0, a]
    return Potential("constant", lambda r: v0 + 0.0 * np.asarray(r, dtype=float), short_range=False, params={"v0": v0})


def bargmann(b: float, c: float) -> Potential:
    p = BargmannParams(b, c)
    return Potential("bargmann", lambda r: bargmann_potential(p, r), params={"b": b, "c": c})


POTENTIALS = {
    "zero": (zero, ()),
    "constant": (constant, ("v0",)),
    "bargmann": (bargmann, ("b", "c")),
}


def bargmann_params(potential: Potential) -> BargmannParams | None:
    if potential.name != "bargmann":
        return None
    return BargmannParams(potential.params["b"], potential.params["c"])


def parse_potential(spec: str) -> Potential:
    """Parse e.g. ``"bargmann:b=2,c=-1"`` or ``"zero"``."""
    name, _, rest = spec.strip().partition(":")
    name = name.strip().lower()
    if name not in POTENTIALS:
        raise InvalidArgumentError(f"unknown potential {name!r}; available: {', '.join(sorted(POTENTIALS))}")
    factory, keys = POTENTIALS[name]
    values = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in keys:
            raise InvalidArgumentError(f"unknown parameter {item!r} for potential {name!r}; expected {keys}")
        try:
            values[key] = float(val)
        except ValueError:
            raise InvalidArgumentError(f"parameter {key!r} is not a number: {val!r}") from None
    missing = [k for k in keys if k not in values]
    if missing:
        raise InvalidArgumentError(f"potential {name!r} needs parameter(s) {missing}")
    return factory(*(values[k] for k in keys))
