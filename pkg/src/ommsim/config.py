"""Sectioned key-value configuration documents.

Grammar
-------
A document is a sequence of ``[section]`` headers and ``key = value`` lines;
``#`` starts a comment.  Sections are ``[modes]``, ``[drives]``,
``[couplings]``, ``[environment]`` and the optional ``[sweep]`` (whose
presence makes the document a sweep specification).

Values are one of
  * ``<number> <unit>`` with unit in Hz kHz MHz GHz THz rad/s (frequencies,
    rates), K mK (temperature) or T (bias field, magnon frequencies only);
  * ``<number> <key>`` -- a multiple of another frequency-like key, e.g.
    ``kappa_a = 0.4 omega_b`` (resolved after parsing, cycles rejected);
  * ``default`` -- the documented default for that key.

Every frequency-like key also exists in an ``_over_2pi`` spelling whose
value is read as frequency/2pi; plain Hz-family units denote cyclic
frequencies and are converted to angular internally, ``rad/s`` is taken
verbatim.  Unknown keys or sections are hard errors with line numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .model import (
    GYROMAGNETIC_RATIO,
    TWO_PI,
    CouplingParams,
    DetuningConvention,
    DriveParams,
    MicrowaveDrive,
    ModeParams,
    SystemConfig,
    default_config,
)
from .sweep import SweepAxis, SweepSpec

_HZ_UNITS = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12}
_TEMP_UNITS = {"K": 1.0, "mK": 1e-3}

_MODE_KEYS = tuple(
    f"{kind}_{m}" for m in ("a", "b", "A1", "m1", "A2", "m2")
    for kind in ("omega", "kappa")
)
_DRIVE_KEYS = (
    "rabi_a", "rabi_m1", "rabi_m2",
    "detuning_a", "detuning_A1", "detuning_A2", "detuning_m1", "detuning_m2",
)
_COUPLING_KEYS = ("g_ab", "g_A1b", "g_A2b", "g_1", "g_2")

#: canonical frequency-like keys, all stored internally as rad/s
_FREQ_KEYS = _MODE_KEYS + _DRIVE_KEYS + _COUPLING_KEYS

_SECTION_KEYS = {
    "modes": set(_MODE_KEYS),
    "drives": set(_DRIVE_KEYS) | {"detuning_convention"},
    "couplings": set(_COUPLING_KEYS),
    "environment": {"temperature"},
}

_AXIS_FIELDS = ("", "_start", "_stop", "_count", "_scale")
_SWEEP_KEYS = {"pairs", "extra_columns"} | {
    f"axis{i}{suffix}" for i in (1, 2) for suffix in _AXIS_FIELDS
}

# keys whose value may be a sign-carrying quantity
_CANONICAL_TO_SECTION = {}
for _sec, _keys in _SECTION_KEYS.items():
    for _k in _keys:
        _CANONICAL_TO_SECTION[_k] = _sec


def _defaults() -> dict[str, object]:
    cfg = default_config()
    out = {}
    for m, mp in cfg.modes.items():
        out[f"omega_{m}"] = mp.eigenfrequency
        out[f"kappa_{m}"] = mp.decay
    out.update(
        rabi_a=cfg.optical_drive.rabi,
        rabi_m1=cfg.mw_drive_1.rabi,
        rabi_m2=cfg.mw_drive_2.rabi,
        detuning_a=cfg.optical_drive.detuning,
        detuning_A1=cfg.mw_drive_1.cavity_detuning,
        detuning_A2=cfg.mw_drive_2.cavity_detuning,
        detuning_m1=cfg.mw_drive_1.magnon_detuning,
        detuning_m2=cfg.mw_drive_2.magnon_detuning,
        g_ab=cfg.couplings.g_ab,
        g_A1b=cfg.couplings.g_A1b,
        g_A2b=cfg.couplings.g_A2b,
        g_1=cfg.couplings.g_1,
        g_2=cfg.couplings.g_2,
        temperature=cfg.temperature,
        detuning_convention=cfg.detuning_convention.value,
    )
    return out


DEFAULTS = _defaults()


@dataclass
class _RawValue:
    text: str
    line: int
    over_2pi: bool = False


def _tokenize(text: str):
    """Yield (line_number, kind, payload) with kind in section/pair."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            yield lineno, "section", line[1:-1].strip()
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = line.split("=", 1)
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError("expected 'key = value'", line=lineno)
        yield lineno, "pair", (key, value)


def _collect(text: str):
    """First pass: collect raw key/value strings grouped by section."""
    sections: dict[str, dict[str, _RawValue]] = {}
    current = None
    for lineno, kind, payload in _tokenize(text):
        if kind == "section":
            if payload not in _SECTION_KEYS and payload != "sweep":
                raise ConfigError(f"unknown section [{payload}]", line=lineno)
            current = payload
            sections.setdefault(current, {})
            continue
        key, value = payload
        if current is None:
            raise ConfigError(
                f"key {key!r} appears before any [section]", line=lineno)
        if current == "sweep":
            if key not in _SWEEP_KEYS:
                raise ConfigError(f"unknown key {key!r} in [sweep]", line=lineno)
            canonical, over = key, False
        else:
            over = key.endswith("_over_2pi")
            canonical = key[: -len("_over_2pi")] if over else key
            if canonical not in _SECTION_KEYS[current]:
                raise ConfigError(
                    f"unknown key {key!r} in [{current}]", line=lineno)
            if over and canonical not in _FREQ_KEYS:
                raise ConfigError(
                    f"_over_2pi is not valid on {canonical!r}", line=lineno)
        store = sections[current]
        if canonical in store:
            raise ConfigError(f"duplicate key {key!r}", line=lineno)
        store[canonical] = _RawValue(value, lineno, over)
    return sections


def _parse_number(token: str, line: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ConfigError(f"malformed number {token!r}", line=line) from None


class _Resolver:
    """Resolves frequency-like values, following key references."""

    def __init__(self, raw_freq: dict[str, tuple[str, bool, int]]):
        # canonical key -> (value text, over_2pi flag, line)
        self.raw = raw_freq
        self.resolved: dict[str, float] = {}
        self.in_progress: set[str] = set()

    def value(self, key: str) -> float:
        if key in self.resolved:
            return self.resolved[key]
        if key not in self.raw:
            # not given in the file: fall back to zero (undriven / uncoupled)
            # for drives and couplings; modes are validated for presence
            # before resolution starts.
            self.resolved[key] = 0.0
            return 0.0
        if key in self.in_progress:
            text, _, line = self.raw[key]
            raise ConfigError(
                f"circular reference while resolving {key!r}", line=line)
        self.in_progress.add(key)
        text, over_2pi, line = self.raw[key]
        self.resolved[key] = self._evaluate(key, text, over_2pi, line)
        self.in_progress.discard(key)
        return self.resolved[key]

    def _evaluate(self, key, text, over_2pi, line) -> float:
        if text == "default":
            if over_2pi or key not in DEFAULTS:
                raise ConfigError(
                    f"no default is defined for {key!r}", line=line)
            return float(DEFAULTS[key])
        parts = text.split()
        if len(parts) != 2:
            raise ConfigError(
                f"expected '<number> <unit-or-key>', got {text!r} "
                "(every frequency needs a unit)", line=line)
        number = _parse_number(parts[0], line)
        unit = parts[1]
        if unit in _HZ_UNITS:
            # cyclic frequency; _over_2pi keys state omega/2pi explicitly,
            # plain keys state the frequency, both land on the same angular
            # value
            return TWO_PI * number * _HZ_UNITS[unit]
        if unit == "rad/s":
            if over_2pi:
                raise ConfigError(
                    "rad/s makes no sense on an _over_2pi key", line=line)
            return number
        if unit == "T":
            if key not in ("omega_m1", "omega_m2"):
                raise ConfigError(
                    "bias-field units are only valid for magnon "
                    "frequencies", line=line)
            if over_2pi:
                raise ConfigError(
                    "bias-field units are not valid on an _over_2pi key",
                    line=line)
            return GYROMAGNETIC_RATIO * number
        if unit in _FREQ_KEYS or unit == "temperature":
            if unit == "temperature" or unit == key:
                raise ConfigError(
                    f"invalid reference {unit!r}", line=line)
            return number * self.value(unit)
        raise ConfigError(f"unknown unit or reference {unit!r}", line=line)


def _freq_map(sections) -> dict[str, tuple[str, bool, int]]:
    raw = {}
    for sec in ("modes", "drives", "couplings"):
        for key, rv in sections.get(sec, {}).items():
            if key == "detuning_convention":
                continue
            raw[key] = (rv.text, rv.over_2pi, rv.line)
    return raw


def _parse_temperature(sections) -> float:
    rv = sections.get("environment", {}).get("temperature")
    if rv is None:
        return 0.0
    if rv.text == "default":
        return float(DEFAULTS["temperature"])
    parts = rv.text.split()
    if len(parts) != 2 or parts[1] not in _TEMP_UNITS:
        raise ConfigError(
            f"temperature needs a K or mK unit, got {rv.text!r}", line=rv.line)
    value = _parse_number(parts[0], rv.line) * _TEMP_UNITS[parts[1]]
    if value < 0:
        raise ConfigError("temperature must be non-negative", line=rv.line)
    return value


def _parse_convention(sections) -> DetuningConvention:
    rv = sections.get("drives", {}).get("detuning_convention")
    if rv is None:
        return DetuningConvention.EFFECTIVE
    if rv.text == "default":
        return DetuningConvention(DEFAULTS["detuning_convention"])
    try:
        return DetuningConvention(rv.text)
    except ValueError:
        raise ConfigError(
            f"detuning_convention must be 'effective' or 'bare', "
            f"got {rv.text!r}", line=rv.line) from None


def _build_config(sections) -> SystemConfig:
    freq_raw = _freq_map(sections)
    # all twelve mode parameters must be stated (or 'default')
    missing = [k for k in _MODE_KEYS if k not in freq_raw]
    if missing:
        raise ConfigError(
            f"missing [modes] keys: {', '.join(sorted(missing))}")
    resolver = _Resolver(freq_raw)
    val = resolver.value

    convention = _parse_convention(sections)
    modes = {
        m: ModeParams(val(f"omega_{m}"), val(f"kappa_{m}"))
        for m in ("a", "b", "A1", "m1", "A2", "m2")
    }
    return SystemConfig(
        modes=modes,
        optical_drive=DriveParams(val("rabi_a"), convention, val("detuning_a")),
        mw_drive_1=MicrowaveDrive(
            val("rabi_m1"), convention, val("detuning_A1"), val("detuning_m1")),
        mw_drive_2=MicrowaveDrive(
            val("rabi_m2"), convention, val("detuning_A2"), val("detuning_m2")),
        couplings=CouplingParams(
            g_ab=val("g_ab"), g_A1b=val("g_A1b"), g_A2b=val("g_A2b"),
            g_1=val("g_1"), g_2=val("g_2")),
        temperature=_parse_temperature(sections),
    )


def _axis_quantity(resolver, text, line) -> float:
    """Axis endpoints take the same quantity forms as config values,
    plus temperature units."""
    parts = text.split()
    if len(parts) == 2 and parts[1] in _TEMP_UNITS:
        return _parse_number(parts[0], line) * _TEMP_UNITS[parts[1]]
    return resolver._evaluate("<axis>", text, False, line)


def _build_sweep(sections, base: SystemConfig) -> SweepSpec:
    sweep_raw = sections["sweep"]
    resolver = _Resolver(_freq_map(sections))

    if "pairs" not in sweep_raw:
        raise ConfigError("[sweep] requires a 'pairs' key")
    rv = sweep_raw["pairs"]
    pairs = []
    for item in rv.text.split(","):
        parts = item.strip().split(":")
        if len(parts) != 2:
            raise ConfigError(
                f"pairs are written s1:s2, got {item.strip()!r}", line=rv.line)
        pairs.append((parts[0].strip(), parts[1].strip()))

    axes = []
    for i in (1, 2):
        prefix = f"axis{i}"
        if prefix not in sweep_raw:
            if any(k.startswith(prefix + "_") for k in sweep_raw):
                line = next(
                    rv.line for k, rv in sweep_raw.items()
                    if k.startswith(prefix + "_"))
                raise ConfigError(
                    f"{prefix}_* keys present but {prefix} is missing",
                    line=line)
            continue
        target_rv = sweep_raw[prefix]
        targets = tuple(t.strip() for t in target_rv.text.split(","))
        for suffix in ("_start", "_stop", "_count"):
            if prefix + suffix not in sweep_raw:
                raise ConfigError(
                    f"missing {prefix}{suffix}", line=target_rv.line)
        start = _axis_quantity(
            resolver, sweep_raw[prefix + "_start"].text,
            sweep_raw[prefix + "_start"].line)
        stop = _axis_quantity(
            resolver, sweep_raw[prefix + "_stop"].text,
            sweep_raw[prefix + "_stop"].line)
        count_rv = sweep_raw[prefix + "_count"]
        try:
            count = int(count_rv.text)
        except ValueError:
            raise ConfigError(
                f"malformed count {count_rv.text!r}", line=count_rv.line
            ) from None
        scale = "linear"
        if prefix + "_scale" in sweep_raw:
            scale = sweep_raw[prefix + "_scale"].text
        axes.append(SweepAxis(
            parameter=targets if len(targets) > 1 else targets[0],
            start=start, stop=stop, count=count, scale=scale))

    if not axes:
        raise ConfigError("[sweep] requires at least axis1")

    extras = ()
    if "extra_columns" in sweep_raw:
        extras = tuple(
            c.strip() for c in sweep_raw["extra_columns"].text.split(","))

    return SweepSpec(base=base, axes=tuple(axes), pairs=tuple(pairs),
                     extra_columns=extras)


def parse_config(text: str) -> SystemConfig | SweepSpec:
    """Parse a configuration document.

    Returns a SystemConfig, or a SweepSpec when a [sweep] section is
    present.  All errors carry the offending line number.
    """
    sections = _collect(text)
    base = _build_config(sections)
    if "sweep" in sections:
        return _build_sweep(sections, base)
    return base


def parse_config_file(path) -> SystemConfig | SweepSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


# ---------------------------------------------------------------------------
# canonical serialization
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def serialize_config(obj: SystemConfig | SweepSpec) -> str:
    """Canonical text form; parsing it back yields an equal value."""
    if isinstance(obj, SweepSpec):
        base, spec = obj.base, obj
    else:
        base, spec = obj, None

    lines = ["[modes]"]
    for m in ("a", "b", "A1", "m1", "A2", "m2"):
        mp = base.modes[m]
        lines.append(f"omega_{m} = {_fmt(mp.eigenfrequency)} rad/s")
        lines.append(f"kappa_{m} = {_fmt(mp.decay)} rad/s")
    lines.append("")
    lines.append("[drives]")
    lines.append(f"detuning_convention = {base.detuning_convention.value}")
    lines.append(f"rabi_a = {_fmt(base.optical_drive.rabi)} rad/s")
    lines.append(f"rabi_m1 = {_fmt(base.mw_drive_1.rabi)} rad/s")
    lines.append(f"rabi_m2 = {_fmt(base.mw_drive_2.rabi)} rad/s")
    lines.append(f"detuning_a = {_fmt(base.optical_drive.detuning)} rad/s")
    lines.append(f"detuning_A1 = {_fmt(base.mw_drive_1.cavity_detuning)} rad/s")
    lines.append(f"detuning_A2 = {_fmt(base.mw_drive_2.cavity_detuning)} rad/s")
    lines.append(f"detuning_m1 = {_fmt(base.mw_drive_1.magnon_detuning)} rad/s")
    lines.append(f"detuning_m2 = {_fmt(base.mw_drive_2.magnon_detuning)} rad/s")
    lines.append("")
    lines.append("[couplings]")
    c = base.couplings
    for name in ("g_ab", "g_A1b", "g_A2b", "g_1", "g_2"):
        lines.append(f"{name} = {_fmt(getattr(c, name))} rad/s")
    lines.append("")
    lines.append("[environment]")
    lines.append(f"temperature = {_fmt(base.temperature)} K")

    if spec is not None:
        lines.append("")
        lines.append("[sweep]")
        lines.append(
            "pairs = " + ", ".join(f"{s1}:{s2}" for s1, s2 in spec.pairs))
        for i, ax in enumerate(spec.axes, start=1):
            lines.append(f"axis{i} = " + ", ".join(ax.targets))
            if ax.targets[0] == "temperature":
                lines.append(f"axis{i}_start = {_fmt(ax.start)} K")
                lines.append(f"axis{i}_stop = {_fmt(ax.stop)} K")
            else:
                lines.append(f"axis{i}_start = {_fmt(ax.start)} rad/s")
                lines.append(f"axis{i}_stop = {_fmt(ax.stop)} rad/s")
            lines.append(f"axis{i}_count = {ax.count}")
            lines.append(f"axis{i}_scale = {ax.scale}")
        if spec.extra_columns:
            lines.append("extra_columns = " + ", ".join(spec.extra_columns))

    return "\n".join(lines) + "\n"
