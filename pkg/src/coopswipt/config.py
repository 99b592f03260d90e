"""Simulation configuration: defaults, validation, and key=value parsing.

Defaults reproduce the reference operating point: 50 secondary nodes, 4000
slots of 1 ms over 1 MHz, eta 0.8, kappa 0.01 uW/Hz, P_s 0.1 uW/Hz, E_p
50 uJ per slot, 5 relays.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .errors import ConfigError

SCHEME_NAMES = ("first", "second", "third", "fourth", "fifth")
BASELINE_SCHEME = "pt_alone"

DEFAULT_ALPHA_GRID = tuple(round(0.05 + 0.1 * k, 10) for k in range(10))


@dataclass(frozen=True)
class SimConfig:
    """All scalar parameters of one simulation run."""

    n_secondary: int = 50
    slots: int = 4000
    slot_seconds: float = 1e-3
    bandwidth_hz: float = 1e6
    eta: float = 0.8
    kappa: float = 0.01e-6
    p_s: float = 0.1e-6
    p_c: float | None = None  # cooperation power budget; None means p_s
    e_p: float = 50e-6
    k_r: int = 5
    k_beam: int | None = None  # powering-set size; None means n_secondary - 2
    alpha: float = 0.5
    scheme: str = "first"
    seed: int = 12345
    e_p_is_per_hz: bool = False
    paper_literal_interference: bool = False
    paper_literal_r: bool = False
    paper_literal_rate: bool = False
    omp_raw_correlation: bool = False

    @property
    def e_p_per_hz(self) -> float:
        """Constant per-slot energy supply normalized to J/Hz."""
        return self.e_p if self.e_p_is_per_hz else self.e_p / self.bandwidth_hz

    @property
    def cooperation_power(self) -> float:
        return self.p_s if self.p_c is None else self.p_c

    @property
    def beam_set_size(self) -> int:
        return self.n_secondary - 2 if self.k_beam is None else self.k_beam

    def validate(self) -> "SimConfig":
        def fail(key, why):
            raise ConfigError(f"{key}: {why}")

        if self.n_secondary < 2 or self.n_secondary % 2 != 0:
            fail("n_secondary", f"must be an even integer >= 2, got {self.n_secondary}")
        if self.slots < 1:
            fail("slots", f"must be >= 1, got {self.slots}")
        if not self.slot_seconds > 0:
            fail("slot_seconds", f"must be positive, got {self.slot_seconds}")
        if not self.bandwidth_hz > 0:
            fail("bandwidth_hz", f"must be positive, got {self.bandwidth_hz}")
        if not 0.0 <= self.eta <= 1.0:
            fail("eta", f"must be in [0, 1], got {self.eta}")
        if not self.kappa > 0:
            fail("kappa", f"must be positive, got {self.kappa}")
        if not self.p_s > 0:
            fail("p_s", f"must be positive, got {self.p_s}")
        if self.p_c is not None and not self.p_c > 0:
            fail("p_c", f"must be positive, got {self.p_c}")
        if self.e_p < 0:
            fail("e_p", f"must be >= 0, got {self.e_p}")
        if not 0 <= self.k_r <= self.n_secondary:
            fail("k_r", f"must be in [0, n_secondary], got {self.k_r}")
        if self.k_beam is not None and self.k_beam < 0:
            fail("k_beam", f"must be >= 0, got {self.k_beam}")
        if not 0.0 <= self.alpha < 1.0:
            fail("alpha", f"must be in [0, 1), got {self.alpha}")
        if self.scheme not in SCHEME_NAMES:
            fail("scheme", f"must be one of {SCHEME_NAMES}, got {self.scheme!r}")
        if self.seed < 0:
            fail("seed", f"must be >= 0, got {self.seed}")
        return self


_BOOL_WORDS = {
    "true": True, "1": True, "yes": True, "on": True,
    "false": False, "0": False, "no": False, "off": False,
}


def _convert(key: str, raw: str, target_type):
    raw = raw.strip()
    try:
        if target_type is bool:
            word = raw.lower()
            if word not in _BOOL_WORDS:
                raise ValueError(f"not a boolean: {raw!r}")
            return _BOOL_WORDS[word]
        if target_type is int:
            return int(raw)
        if target_type is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None


def _field_types() -> dict[str, type]:
    types = {}
    for f in fields(SimConfig):
        t = {"int": int, "float": float, "str": str, "bool": bool,
             "float | None": float, "int | None": int}.get(f.type)
        if t is None:
            raise AssertionError(f"unhandled config field type: {f.type}")
        types[f.name] = t
    return types


FIELD_TYPES = _field_types()


def parse_config_text(text: str) -> dict:
    """Parse `key = value` lines ('#' comments) into typed config values."""
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.rstrip()!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw, FIELD_TYPES[key])
    return values


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> SimConfig:
    """Defaults, then config-file values, then explicit overrides; validated."""
    merged: dict = {}
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if key not in FIELD_TYPES:
                raise ConfigError(f"unknown key {key!r}")
            merged[key] = value
    return SimConfig(**merged).validate()


def with_updates(cfg: SimConfig, **updates) -> SimConfig:
    return replace(cfg, **updates).validate()
