"""Example systems, and a registry that turns model names into atomic systems.

Names: ``shift:unilateral[:formula]``, ``shift:bilateral[:formula]``,
``shift:corollary32``, ``odometer:m``, ``partition-z:n`` and
``interval:<name or pieces>`` (its wandering-orbit partition). Disk
automorphisms ``disk:a,theta`` have no atomic form and are handled on their
own.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..dynamics import AtomMap
from ..measure import AtomicSpace, MeasurableSet
from .odometer import build_odometer
from .partition import build_partition_example
from .shift import WeightedShiftSpec, build_shift, corollary32_block_starts
from .interval import parse_interval_system, wandering_partition


@dataclass(frozen=True)
class ModelInstance:
    name: str
    space: AtomicSpace
    f: AtomMap
    default_A: MeasurableSet | None = None  # None: the whole space
    extras: dict = field(default_factory=dict, compare=False)


DEFAULT_HORIZON = {"shift": 64, "corollary32": 420, "partition-z": 20, "interval": 40}


def parse_model(name: str, depth: int | None = None) -> ModelInstance:
    """Build the atomic system behind a model name; ``depth`` overrides the window."""
    family, _, arg = name.partition(":")
    if family == "shift":
        side, _, formula = arg.partition(":")
        if side == "corollary32":
            n = depth or DEFAULT_HORIZON["corollary32"]
            space, f = build_shift(WeightedShiftSpec("unilateral", "corollary32", n))
            starts = [s for s in corollary32_block_starts(64) if s < n]
            return ModelInstance(name, space, f, space.block_set(0, 1), {"block_starts": starts})
        if side not in ("unilateral", "bilateral"):
            raise ValueError(f"unknown shift {arg!r}")
        formula = formula or "geometric"
        space, f = build_shift(WeightedShiftSpec(side, formula, depth or DEFAULT_HORIZON["shift"]))
        A = None if space.is_finite else space.block_set(0, 1)
        return ModelInstance(name, space, f, A)
    if family == "odometer":
        m = int(arg) if arg else (depth or 4)
        space, f = build_odometer(m)
        return ModelInstance(name, space, f, None, {"wrap_atom": space.n_atoms - 1})
    if family == "partition-z":
        n = int(arg) if arg else (depth or DEFAULT_HORIZON["partition-z"])
        space, f = build_partition_example(n)
        return ModelInstance(name, space, f, None)
    if family == "interval":
        sys = parse_interval_system(arg)
        space, f = wandering_partition(sys, depth or DEFAULT_HORIZON["interval"])
        return ModelInstance(name, space, f, None, {"system": sys})
    raise ValueError(f"unknown model {name!r}")


__all__ = ["ModelInstance", "parse_model"]
