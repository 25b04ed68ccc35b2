"""INI configuration for the command line.

A run file has a ``[problem]`` section (dimension, orders, centers and the
six data functions as expressions), a ``[numeric]`` section for solver and
table tuning, an ``[output]`` section, and optionally ``[sweep]``.  Sweep
parameters are addressed as ``section.key`` into the same file.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace

from .errors import ConfigError
from .expressions import parse_func_1d, parse_func_2d
from .problem import ProblemSpec
from .quadrature import LimitPolicy, RadialGrid

__all__ = ["RunConfig", "SweepSpec", "load_config", "config_from_text"]

_ACTIONS = ("validate", "solve", "classify", "verify")


@dataclass(frozen=True)
class SweepSpec:
    parameter: str  # "section.key"
    values: tuple[str, ...]
    action: str = "classify"
    parallel: int = 1


@dataclass(frozen=True)
class RunConfig:
    problem: ProblemSpec
    radius: float = 3.0
    nodes: int = 601
    tol: float = 1e-10
    max_sweeps: int = 60
    blowup_ceiling: float = 1e12
    grid_kind: str = "uniform"
    growth: float = 1.05
    s_max: float | None = None
    r_max: float = float(2**20)
    window_count: int = 3
    decay_threshold: float = 0.75
    out_dir: str = "."
    formats: tuple[str, ...] = ("json", "csv")
    plot_data: bool = False
    sweep: SweepSpec | None = None
    raw: tuple = ()  # frozen (section, key, value) triples for sweep rebuilds

    def limit_policy(self) -> LimitPolicy:
        return LimitPolicy(
            r_max=self.r_max,
            window_count=self.window_count,
            decay_threshold=self.decay_threshold,
        )

    def make_grid(self) -> RadialGrid:
        if self.grid_kind == "uniform":
            return RadialGrid.uniform(self.radius, self.nodes)
        if self.grid_kind == "geometric":
            return RadialGrid.geometric(self.radius, self.nodes, self.growth)
        raise ConfigError(f"unknown grid kind {self.grid_kind!r}")

    def with_overrides(
        self,
        *,
        tol: float | None = None,
        nodes: int | None = None,
        radius: float | None = None,
        s_max: float | None = None,
        out_dir: str | None = None,
    ) -> "RunConfig":
        cfg = self
        if tol is not None:
            cfg = replace(cfg, tol=float(tol))
        if nodes is not None:
            cfg = replace(cfg, nodes=int(nodes))
        if radius is not None:
            cfg = replace(cfg, radius=float(radius))
        if s_max is not None:
            cfg = replace(cfg, s_max=float(s_max))
        if out_dir is not None:
            cfg = replace(cfg, out_dir=str(out_dir))
        return cfg

    def resweep(self, parameter: str, value: str) -> "RunConfig":
        """Rebuild this configuration with one ``section.key`` replaced."""
        triples = dict({(s, k): v for s, k, v in self.raw})
        try:
            section, key = parameter.split(".", 1)
        except ValueError:
            raise ConfigError(
                f"sweep parameter must look like section.key, got {parameter!r}"
            ) from None
        triples[(section, key)] = value
        cp = configparser.ConfigParser()
        for (sec, key_), val in triples.items():
            if not cp.has_section(sec):
                cp.add_section(sec)
            cp.set(sec, key_, val)
        cfg = _build(cp)
        return replace(cfg, sweep=None)


def _get(cp, section, key, default=None):
    if cp.has_option(section, key):
        value = cp.get(section, key).strip()
        return value if value != "" else default
    return default


def _get_typed(cp, section, key, cast, default):
    raw = _get(cp, section, key)
    if raw is None:
        return default
    try:
        if cast is bool:
            lowered = raw.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return cast(raw)
    except ValueError:
        raise ConfigError(
            f"[{section}] {key} = {raw!r} is not a valid {cast.__name__}"
        ) from None


def _build(cp: configparser.ConfigParser) -> RunConfig:
    if not cp.has_section("problem"):
        raise ConfigError("configuration needs a [problem] section")

    def func1(key, default):
        return parse_func_1d(_get(cp, "problem", key, default))

    def func2(key, default):
        return parse_func_2d(_get(cp, "problem", key, default))

    problem = ProblemSpec(
        dim=_get_typed(cp, "problem", "N", int, 3),
        k1=_get_typed(cp, "problem", "k1", int, 1),
        k2=_get_typed(cp, "problem", "k2", int, 1),
        a1=_get_typed(cp, "problem", "a1", float, 0.0),
        a2=_get_typed(cp, "problem", "a2", float, 0.0),
        b1=func1("b1", "0"),
        b2=func1("b2", "0"),
        p1=func1("p1", "1"),
        p2=func1("p2", "1"),
        f1=func2("f1", "1"),
        f2=func2("f2", "1"),
    )

    sweep = None
    if cp.has_section("sweep"):
        parameter = _get(cp, "sweep", "parameter")
        values_raw = _get(cp, "sweep", "values")
        if not parameter or not values_raw:
            raise ConfigError("[sweep] needs both parameter and values")
        action = _get(cp, "sweep", "action", "classify")
        if action not in _ACTIONS:
            raise ConfigError(
                f"[sweep] action must be one of {_ACTIONS}, got {action!r}"
            )
        sweep = SweepSpec(
            parameter=parameter,
            values=tuple(v.strip() for v in values_raw.split(",") if v.strip()),
            action=action,
            parallel=_get_typed(cp, "sweep", "parallel", int, 1),
        )

    formats_raw = _get(cp, "output", "formats", "json,csv")
    formats = tuple(f.strip().lower() for f in formats_raw.split(",") if f.strip())
    for fmt in formats:
        if fmt not in ("json", "csv"):
            raise ConfigError(f"unknown output format {fmt!r}")

    raw = tuple(
        (section, key, cp.get(section, key))
        for section in cp.sections()
        for key in cp.options(section)
    )
    grid_kind = _get(cp, "numeric", "grid", "uniform")
    if grid_kind not in ("uniform", "geometric"):
        raise ConfigError(f"[numeric] grid must be uniform or geometric, got {grid_kind!r}")

    def pick(section, names):
        """First spelling present in the file; short aliases are accepted."""
        for name in names:
            if _get(cp, section, name) is not None:
                return name
        return names[0]

    return RunConfig(
        problem=problem,
        radius=_get_typed(cp, "numeric", pick("numeric", ("radius", "r")), float, 3.0),
        nodes=_get_typed(cp, "numeric", "nodes", int, 601),
        tol=_get_typed(cp, "numeric", "tol", float, 1e-10),
        max_sweeps=_get_typed(
            cp, "numeric", pick("numeric", ("max_sweeps", "max_iter")), int, 60
        ),
        blowup_ceiling=_get_typed(cp, "numeric", "blowup_ceiling", float, 1e12),
        grid_kind=grid_kind,
        growth=_get_typed(cp, "numeric", "growth", float, 1.05),
        s_max=_get_typed(cp, "numeric", "s_max", float, None),
        r_max=_get_typed(cp, "numeric", "r_max", float, float(2**20)),
        window_count=_get_typed(cp, "numeric", "window_count", int, 3),
        decay_threshold=_get_typed(cp, "numeric", "decay_threshold", float, 0.75),
        out_dir=_get(cp, "output", "directory", "."),
        formats=formats,
        plot_data=_get_typed(
            cp, "output", pick("output", ("plot_data", "emit_plot_data")), bool, False
        ),
        sweep=sweep,
        raw=raw,
    )


def config_from_text(text: str) -> RunConfig:
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"could not parse configuration: {exc}") from exc
    return _build(cp)


def load_config(path: str) -> RunConfig:
    cp = configparser.ConfigParser()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            cp.read_file(handle)
    except FileNotFoundError:
        raise ConfigError(f"configuration file not found: {path}") from None
    except OSError as exc:
        raise ConfigError(f"could not read {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"could not parse {path}: {exc}") from exc
    return _build(cp)
