"""Symmetric finite-range interaction potentials for the 1D gas.

A potential is a positive combination of three component kinds, all defined
on |x| so the result is symmetric by construction:

* ``HardCoreBand(x1, x2)``   -- infinite wall for |x| in [x1, x2]
* ``DeltaSpike(x0, strength)`` -- the symmetric pair h*(delta_{-x0} + delta_{x0});
  x0 = 0 means a single contact spike of strength h
* ``StepPotential(breakpoints, values)`` -- piecewise-constant repulsion on
  |x| in [0, t_m), values v_k >= 0 on [t_{k-1}, t_k)

Delta spikes and hard cores are kept exact (never mollified): mollifying a
measure changes its scattering length.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

__all__ = [
    "HardCoreBand",
    "DeltaSpike",
    "StepPotential",
    "Potential",
    "PotentialError",
    "ConfigError",
    "make_lieb_liniger",
    "make_hard_core",
    "make_square_barrier",
    "regular_mass",
    "is_impenetrable",
    "load_potential",
    "loads_potential",
    "dumps_potential",
]


class PotentialError(ValueError):
    """Invalid potential parameter (negative strength, bad radii, ...)."""


class ConfigError(PotentialError):
    """Malformed potential config file; carries a 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class HardCoreBand:
    """Infinite repulsion on |x| in [x1, x2]; x1 == x2 encodes a zero
    boundary condition at |x| = x1 (an impenetrable delta pair)."""

    x1: float
    x2: float

    def __post_init__(self):
        if self.x1 < 0:
            raise PotentialError(f"hard-core inner radius must be >= 0, got {self.x1}")
        if self.x2 < self.x1:
            raise PotentialError(
                f"hard-core outer radius {self.x2} below inner radius {self.x1}"
            )

    @property
    def outer_radius(self) -> float:
        return self.x2


@dataclass(frozen=True)
class DeltaSpike:
    """Point interaction h*(delta_{-x0} + delta_{x0}); a single h*delta_0
    when x0 = 0."""

    x0: float
    strength: float

    def __post_init__(self):
        if self.x0 < 0:
            raise PotentialError(f"delta location must be >= 0, got {self.x0}")
        if self.strength <= 0:
            raise PotentialError(f"delta strength must be > 0, got {self.strength}")

    @property
    def outer_radius(self) -> float:
        return self.x0


@dataclass(frozen=True)
class StepPotential:
    """Piecewise-constant v on |x|: value values[k] on [t_{k-1}, t_k) with
    t_0 = 0 implicit and breakpoints = (t_1, ..., t_m) strictly increasing."""

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(float(t) for t in self.breakpoints))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.breakpoints) != len(self.values):
            raise PotentialError(
                f"{len(self.breakpoints)} breakpoints need {len(self.breakpoints)} "
                f"values, got {len(self.values)}"
            )
        if not self.breakpoints:
            raise PotentialError("step potential needs at least one breakpoint")
        prev = 0.0
        for t in self.breakpoints:
            if t <= prev:
                raise PotentialError(
                    f"breakpoints must be strictly increasing from 0, got {self.breakpoints}"
                )
            prev = t
        for v in self.values:
            if v < 0:
                raise PotentialError(f"step value must be >= 0, got {v}")

    @property
    def outer_radius(self) -> float:
        return self.breakpoints[-1]

    def value_at(self, r: float) -> float:
        """Step value at radius r >= 0 (0 outside the support)."""
        lo = 0.0
        for t, v in zip(self.breakpoints, self.values):
            if lo <= r < t:
                return v
            lo = t
        return 0.0


Component = Union[HardCoreBand, DeltaSpike, StepPotential]

_KIND_ORDER = {HardCoreBand: 0, DeltaSpike: 1, StepPotential: 2}


def _component_key(c: Component):
    if isinstance(c, HardCoreBand):
        return (0, c.x1, c.x2)
    if isinstance(c, DeltaSpike):
        return (1, c.x0, c.strength)
    return (2, c.breakpoints, c.values)


@dataclass(frozen=True)
class Potential:
    """Immutable bag of components with derived range R0.

    Components are canonically sorted and exact duplicates dropped, so two
    potentials built from the same physical input compare (and hash) equal.
    """

    components: tuple[Component, ...]

    def __init__(self, components):
        comps = sorted(set(components), key=_component_key)
        object.__setattr__(self, "components", tuple(comps))

    @property
    def range(self) -> float:
        """Support radius R0: v(x) = 0 for |x| > R0."""
        if not self.components:
            return 0.0
        return max(c.outer_radius for c in self.components)

    @property
    def hard_core_bands(self) -> tuple[HardCoreBand, ...]:
        return tuple(c for c in self.components if isinstance(c, HardCoreBand))

    @property
    def delta_spikes(self) -> tuple[DeltaSpike, ...]:
        return tuple(c for c in self.components if isinstance(c, DeltaSpike))

    @property
    def steps(self) -> tuple[StepPotential, ...]:
        return tuple(c for c in self.components if isinstance(c, StepPotential))

    def regular_value_at(self, r: float) -> float:
        """Piecewise-constant part of v at radius r (delta spikes and hard
        cores excluded)."""
        return sum(s.value_at(r) for s in self.steps)

    def with_component(self, component: Component) -> "Potential":
        return Potential(self.components + (component,))

    def digest(self) -> str:
        """Short deterministic text form, used in reports."""
        if not self.components:
            return "free"
        parts = []
        for c in self.components:
            if isinstance(c, HardCoreBand):
                parts.append(f"core[{c.x1:g},{c.x2:g}]")
            elif isinstance(c, DeltaSpike):
                parts.append(f"delta(x0={c.x0:g},h={c.strength:g})")
            else:
                bps = ",".join(f"{t:g}" for t in c.breakpoints)
                vals = ",".join(f"{v:g}" for v in c.values)
                parts.append(f"steps(t=[{bps}],v=[{vals}])")
        return "+".join(parts)


def make_lieb_liniger(c: float) -> Potential:
    """Contact repulsion 2c*delta_0 (pairwise strength 2c, coupling c > 0)."""
    if c <= 0:
        raise PotentialError(f"coupling must be > 0, got {c}")
    return Potential([DeltaSpike(0.0, 2.0 * c)])


def make_hard_core(diameter: float) -> Potential:
    """Impenetrable core of the given diameter: wall on |x| in [0, diameter]."""
    if diameter <= 0:
        raise PotentialError(f"diameter must be > 0, got {diameter}")
    return Potential([HardCoreBand(0.0, diameter)])


def make_square_barrier(height: float, radius: float) -> Potential:
    """Constant repulsion of the given height on |x| < radius."""
    if height < 0:
        raise PotentialError(f"height must be >= 0, got {height}")
    if radius <= 0:
        raise PotentialError(f"radius must be > 0, got {radius}")
    return Potential([StepPotential((radius,), (height,))])


def regular_mass(p: Potential) -> float:
    """Total mass of the regular part, integral of v_reg over the whole line.

    A spike at x0 > 0 is a pair, so it contributes 2h; the contact spike
    contributes h once. Hard-core bands are constraints, not mass: 0.
    """
    total = 0.0
    for c in p.components:
        if isinstance(c, DeltaSpike):
            total += c.strength if c.x0 == 0.0 else 2.0 * c.strength
        elif isinstance(c, StepPotential):
            lo = 0.0
            for t, v in zip(c.breakpoints, c.values):
                total += 2.0 * v * (t - lo)  # both signs of x
                lo = t
    return total


def is_impenetrable(p: Potential) -> bool:
    """True iff a hard-core band touches contact (x1 = 0), forcing the wave
    function to vanish when two particles meet."""
    return any(b.x1 == 0.0 for b in p.hard_core_bands)


# ---------------------------------------------------------------------------
# Config text format
#
#   [potential.delta]
#   x0 = 0.0
#   strength = 2.0
#
#   [potential.hardcore]
#   x1 = 0.0
#   x2 = 0.3
#
#   [potential.steps]
#   breakpoints = 0.1 0.25
#   values = 5.0 1.5
#
# Sections may repeat. '#' starts a comment. Lists are whitespace-separated.
# ---------------------------------------------------------------------------

_SECTION_KEYS = {
    "potential.delta": {"x0", "strength"},
    "potential.hardcore": {"x1", "x2"},
    "potential.steps": {"breakpoints", "values"},
}


def _parse_float(lineno: int, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(lineno, f"{key}: expected a number, got {raw!r}") from None


def _finish_section(lineno: int, name: str, fields: dict) -> Component:
    missing = _SECTION_KEYS[name] - set(fields)
    if missing:
        raise ConfigError(lineno, f"[{name}] missing key(s): {', '.join(sorted(missing))}")
    try:
        if name == "potential.delta":
            return DeltaSpike(fields["x0"], fields["strength"])
        if name == "potential.hardcore":
            return HardCoreBand(fields["x1"], fields["x2"])
        return StepPotential(tuple(fields["breakpoints"]), tuple(fields["values"]))
    except PotentialError as exc:
        raise ConfigError(lineno, str(exc)) from None


def loads_potential(text: str) -> Potential:
    """Parse the config text format. Raises ConfigError with a line number
    on malformed input or negative strengths."""
    components: list[Component] = []
    section: str | None = None
    fields: dict = {}
    section_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(lineno, f"unterminated section header {line!r}")
            if section is not None:
                components.append(_finish_section(section_line, section, fields))
            section = line[1:-1].strip()
            if section not in _SECTION_KEYS:
                raise ConfigError(lineno, f"unknown section [{section}]")
            fields = {}
            section_line = lineno
            continue
        if section is None:
            raise ConfigError(lineno, f"key outside any section: {line!r}")
        if "=" not in line:
            raise ConfigError(lineno, f"expected 'key = value', got {line!r}")
        key, _, rhs = line.partition("=")
        key = key.strip()
        rhs = rhs.strip()
        if key not in _SECTION_KEYS[section]:
            raise ConfigError(lineno, f"unknown key {key!r} in [{section}]")
        if key in ("breakpoints", "values"):
            fields[key] = [_parse_float(lineno, key, tok) for tok in rhs.split()]
        else:
            fields[key] = _parse_float(lineno, key, rhs)
    if section is not None:
        components.append(_finish_section(section_line, section, fields))
    return Potential(components)


def load_potential(path: str | Path) -> Potential:
    return loads_potential(Path(path).read_text())


def dumps_potential(p: Potential) -> str:
    """Serialize to the config text format; round-trips through
    loads_potential up to component order."""
    lines: list[str] = []
    for c in p.components:
        if isinstance(c, DeltaSpike):
            lines += ["[potential.delta]", f"x0 = {c.x0!r}", f"strength = {c.strength!r}"]
        elif isinstance(c, HardCoreBand):
            lines += ["[potential.hardcore]", f"x1 = {c.x1!r}", f"x2 = {c.x2!r}"]
        else:
            lines += [
                "[potential.steps]",
                "breakpoints = " + " ".join(repr(t) for t in c.breakpoints),
                "values = " + " ".join(repr(v) for v in c.values),
            ]
        lines.append("")
    return "\n".join(lines)
