"""This module contains the sweep description and small helpers shared by
the reproduction driver."""

import itertools
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, List, Tuple

import numpy as np

from entanglement_transfer.config import Config
from entanglement_transfer.errors import SweepSpecError

QUANTITIES = [
    "bs-entangle",
    "bs-lossy-bound",
    "fiber-estimate",
    "fiber-bound",
    "fiber-distance",
    "compare",
    "available-entanglement",
]


class Timer:
    "This is a simple context manager to measure execution time."

    def __init__(self):
        self.start_time = None
        self.end_time = None

    @contextmanager
    def measure(self):
        """Measure execution time of a code bloc. Store results in start_time
        and end_time properties."""
        self.start_time = datetime.now()
        yield
        self.end_time = datetime.now()

    @property
    def duration(self):
        "Return the duration of the measured interval."
        return self.end_time - self.start_time


@dataclass(frozen=True)
class GridAxis:
    "One swept parameter and the values it takes, in order."

    name: str
    values: Tuple[float, ...]

    def __post_init__(self):
        if len(self.values) < 2:
            raise SweepSpecError(
                f"axis {self.name} needs at least 2 steps, got {len(self.values)}"
            )

    @classmethod
    def parse(cls, text):
        """Parse `name=min:max:steps` (linearly spaced) or `name=v1,v2,...`.

        :raises SweepSpecError: on malformed input or fewer than 2 steps.
        """
        name, value = parse_assignment(text)
        if ":" in value:
            parts = value.split(":")
            if len(parts) != 3:
                raise SweepSpecError(f"axis {name} must read min:max:steps, got {value!r}")
            low, high = _number(name, parts[0]), _number(name, parts[1])
            try:
                steps = int(parts[2])
            except ValueError as error:
                raise SweepSpecError(f"axis {name} has a non-integer step count") from error
            if steps < 2:
                raise SweepSpecError(f"axis {name} needs at least 2 steps, got {steps}")
            values = np.linspace(low, high, steps)
        else:
            values = [_number(name, part) for part in value.split(",") if part.strip()]
        return cls(name, tuple(float(v) for v in values))


@dataclass
class SweepSpec:
    "A quantity evaluated over the Cartesian product of its grid axes."

    quantity: str
    axes: List[GridAxis] = field(default_factory=list)
    fixed: Dict[str, float] = field(default_factory=dict)
    cutoff: int = Config.CUTOFF
    seed: int = Config.SEED
    units: str = Config.UNITS
    jobs: int = Config.JOBS

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise SweepSpecError(
                f"unknown quantity {self.quantity!r}, expected one of {QUANTITIES}"
            )
        if self.units not in Config.VALID_UNITS:
            raise SweepSpecError(
                f"unknown units {self.units!r}, expected one of {Config.VALID_UNITS}"
            )
        if self.cutoff < 1:
            raise SweepSpecError(f"cutoff must be positive, got {self.cutoff}")
        if self.jobs < 1:
            raise SweepSpecError(f"jobs must be positive, got {self.jobs}")
        names = [axis.name for axis in self.axes]
        if len(set(names)) != len(names):
            raise SweepSpecError(f"axis names must be distinct, got {names}")
        for name in names:
            if name in self.fixed:
                raise SweepSpecError(f"{name} is both swept and fixed")

    @property
    def axis_names(self):
        return [axis.name for axis in self.axes]

    def points(self):
        "Parameter dictionaries in grid order, the last axis varying fastest."
        for combination in itertools.product(*(axis.values for axis in self.axes)):
            point = dict(self.fixed)
            point.update(zip(self.axis_names, combination))
            yield point


def parse_assignment(text):
    "Split `key=value` into its stripped parts."
    key, sep, value = text.partition("=")
    if not sep or not key.strip() or not value.strip():
        raise SweepSpecError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def _number(name, text):
    try:
        value = float(text)
    except ValueError as error:
        raise SweepSpecError(f"{name}: {text!r} is not a number") from error
    if not math.isfinite(value):
        raise SweepSpecError(f"{name}: {text!r} is not finite")
    return value
