"""Parameter sweeps over (gamma, B, kT) for the XY chain, with CSV output."""

from __future__ import annotations

import logging
import math
import string
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from . import minkit
from .minkit import GridSpec
from .qmat import mutual_information, von_neumann_entropy
from .xychain import ChainParams, ThermalPoint, critical_field, thermal_state

log = logging.getLogger(__name__)

MEASURES = ("geometric", "entropic", "mutual_info", "entropy")
CSV_HEADER = ("gamma", "B", "kT", "Ns", "Nv", "mutual_info", "entropy", "Bc")
ORACLE_TOL = 1e-3
AUDIT_GRID = GridSpec(50, 100)


class ConfigError(ValueError):
    """Invalid sweep configuration."""


@dataclass(frozen=True)
class Range:
    min: float
    max: float
    steps: int

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.min])
        return np.linspace(self.min, self.max, self.steps)

    @classmethod
    def parse(cls, text: str) -> "Range":
        """Parse ``min:max:steps``; a bare number is a single point."""
        parts = text.split(":")
        try:
            if len(parts) == 1:
                v = float(parts[0])
                return cls(v, v, 1)
            if len(parts) == 3:
                return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError:
            pass
        raise ConfigError(f"range must be 'min:max:steps' or a single number, got {text!r}")

    def __str__(self):
        return f"{self.min:g}:{self.max:g}:{self.steps}"


@dataclass(frozen=True)
class SweepConfig:
    J: float = 1.0
    gammas: tuple[float, ...] = (0.0,)
    B_range: Range = Range(0.0, 3.0, 81)
    kT_range: Range = Range(0.01, 2.0, 81)
    measures: frozenset[str] = frozenset(MEASURES)
    oracle_check: bool = False
    output_path: str | None = None

    def validate(self) -> None:
        if not math.isfinite(self.J) or self.J == 0:
            raise ConfigError(f"J must be finite and nonzero, got {self.J}")
        if not self.gammas:
            raise ConfigError("at least one gamma is required")
        for g in self.gammas:
            if not math.isfinite(g):
                raise ConfigError(f"gamma must be finite, got {g}")
        for name, r in (("B", self.B_range), ("kT", self.kT_range)):
            if not (math.isfinite(r.min) and math.isfinite(r.max)):
                raise ConfigError(f"{name} range must be finite")
            # a single point is allowed (used by the `point` command); a range needs >= 2 steps
            if r.steps == 1:
                if r.min != r.max:
                    raise ConfigError(f"{name} range with one step must have min == max")
            elif r.steps < 2:
                raise ConfigError(f"{name} range needs at least 2 steps, got {r.steps}")
            elif not r.min < r.max:
                raise ConfigError(f"{name} range needs min < max, got {r}")
        if self.kT_range.min < 0:
            raise ConfigError(f"kT must be >= 0, got minimum {self.kT_range.min}")
        unknown = set(self.measures) - set(MEASURES)
        if unknown:
            raise ConfigError(f"unknown measures: {sorted(unknown)}; choose from {MEASURES}")

    def n_points(self) -> int:
        return len(self.gammas) * self.B_range.steps * self.kT_range.steps


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    B: float
    kT: float
    Ns: float | None = None
    Nv: float | None = None
    mutual_info: float | None = None
    entropy: float | None = None
    Bc: float | None = None

    def as_tuple(self) -> tuple:
        return (self.gamma, self.B, self.kT, self.Ns, self.Nv, self.mutual_info, self.entropy, self.Bc)


@dataclass
class OracleDiscrepancy:
    row: SweepRow
    measure: str
    closed_form: float
    oracle: float

    @property
    def gap(self) -> float:
        return abs(self.closed_form - self.oracle)


@dataclass(frozen=True)
class _Task:
    J: float
    gamma: float
    B: float
    kT: float
    measures: frozenset[str]
    oracle_check: bool


def _evaluate(task: _Task) -> tuple[SweepRow, list[tuple[str, float, float]]]:
    p = ChainParams(task.J, task.gamma, task.B)
    rho = thermal_state(ThermalPoint(p, task.kT))
    ms = task.measures
    ns = minkit.geometric_min(rho).value if "geometric" in ms else None
    nv = minkit.entropic_min(rho).value if "entropic" in ms else None
    row = SweepRow(
        gamma=task.gamma,
        B=task.B,
        kT=task.kT,
        Ns=ns,
        Nv=nv,
        mutual_info=mutual_information(rho) if "mutual_info" in ms else None,
        entropy=von_neumann_entropy(rho) if "entropy" in ms else None,
        Bc=critical_field(p) if abs(task.gamma) <= 1 else None,
    )
    gaps = []
    if task.oracle_check:
        if ns is not None:
            gaps.append(("geometric", ns, minkit.geometric_min_oracle(rho, AUDIT_GRID)))
        if nv is not None:
            gaps.append(("entropic", nv, minkit.entropic_min_oracle(rho, AUDIT_GRID)))
    return row, gaps


def _tasks(cfg: SweepConfig) -> list[_Task]:
    return [
        _Task(cfg.J, float(g), float(B), float(kT), frozenset(cfg.measures), cfg.oracle_check)
        for g in cfg.gammas
        for B in cfg.B_range.values()
        for kT in cfg.kT_range.values()
    ]


def run_sweep(
    cfg: SweepConfig,
    discrepancies: list[OracleDiscrepancy] | None = None,
    jobs: int = 1,
) -> list[SweepRow]:
    """Evaluate every grid point of ``cfg``; rows ordered by (gamma, B, kT).

    With ``cfg.oracle_check`` each MIN value is compared against its
    brute-force oracle on a reduced grid. Gaps above 1e-3 are logged and
    appended to ``discrepancies`` when a list is given.
    """
    cfg.validate()
    tasks = _tasks(cfg)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate, tasks, chunksize=64))
    else:
        results = [_evaluate(t) for t in tasks]

    rows = []
    for row, gaps in results:
        rows.append(row)
        for measure, value, oracle in gaps:
            if abs(value - oracle) > ORACLE_TOL:
                d = OracleDiscrepancy(row, measure, value, oracle)
                log.warning(
                    "oracle mismatch at gamma=%g B=%g kT=%g: %s %.6g vs oracle %.6g",
                    row.gamma, row.B, row.kT, measure, value, oracle,
                )
                if discrepancies is not None:
                    discrepancies.append(d)
    return rows


def format_value(v: float | None) -> str:
    if v is None:
        return ""
    s = format(float(v), ".12g")
    return "0" if s == "-0" else s


def format_row(row: SweepRow) -> str:
    return ",".join(format_value(v) for v in row.as_tuple())


def write_csv(rows: Iterable[SweepRow], fh) -> None:
    fh.write(",".join(CSV_HEADER) + "\n")
    for row in rows:
        fh.write(format_row(row) + "\n")


def emit_csv(rows: Iterable[SweepRow], path: str) -> None:
    """Write rows as UTF-8 CSV with LF endings and 12 significant digits.

    Measures that were not computed are left as empty fields.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_csv(rows, fh)


FIGURE_GAMMAS = (0.0, 0.5, 0.8, 1.0)
PANEL_SUFFIXES = string.ascii_lowercase


def preset_figure(fig_id: str, resolution: int = 81) -> SweepConfig:
    """Sweep reproducing one of the published surface figures.

    ``fig1`` is the geometric MIN and ``fig2`` the entropic MIN, each over
    B in [0, 3] and kT in [0.01, 2] for gamma in (0, 0.5, 0.8, 1) with J = 1.
    """
    measures = {"fig1": "geometric", "fig2": "entropic"}
    if fig_id not in measures:
        raise ConfigError(f"unknown figure id {fig_id!r}; expected 'fig1' or 'fig2'")
    return SweepConfig(
        J=1.0,
        gammas=FIGURE_GAMMAS,
        B_range=Range(0.0, 3.0, resolution),
        kT_range=Range(0.01, 2.0, resolution),
        measures=frozenset({measures[fig_id]}),
    )


def panels(cfg: SweepConfig) -> list[tuple[str, SweepConfig]]:
    """Split a multi-gamma config into single-gamma panels labelled a, b, c, ..."""
    if len(cfg.gammas) > len(PANEL_SUFFIXES):
        raise ConfigError(f"at most {len(PANEL_SUFFIXES)} panels are supported")
    return [(PANEL_SUFFIXES[i], replace(cfg, gammas=(g,))) for i, g in enumerate(cfg.gammas)]


# --- flat ``key = value`` config files -------------------------------------

_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def parse_measures(text: str) -> frozenset[str]:
    items = frozenset(m.strip() for m in text.split(",") if m.strip())
    unknown = items - set(MEASURES)
    if unknown:
        raise ConfigError(f"unknown measures: {sorted(unknown)}; choose from {MEASURES}")
    return items


def read_config_file(path: str) -> dict:
    """Read a flat ``key = value`` file into SweepConfig keyword arguments.

    Recognized keys: J, gamma (comma separated), B and kT (``min:max:steps``),
    measures (comma separated), oracle_check, out. Blank lines and lines
    starting with ``#`` are ignored.
    """
    out: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            try:
                if key == "J":
                    out["J"] = float(value)
                elif key in ("gamma", "gammas"):
                    out["gammas"] = tuple(float(g) for g in value.split(",") if g.strip())
                elif key == "B":
                    out["B_range"] = Range.parse(value)
                elif key == "kT":
                    out["kT_range"] = Range.parse(value)
                elif key == "measures":
                    out["measures"] = parse_measures(value)
                elif key in ("oracle_check", "oracle-check"):
                    out["oracle_check"] = _BOOL[value.lower()]
                elif key in ("out", "output_path"):
                    out["output_path"] = value
                else:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            except (ValueError, KeyError) as exc:
                if isinstance(exc, ConfigError):
                    raise
                raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {value!r}") from exc
    return out


# --- revival of the geometric MIN above the critical field -----------------

def revival_depth(gamma: float, kT: float, J: float = 1.0, B_range: Range = Range(0.0, 3.0, 601)) -> float:
    """Depth of the deepest dip in N^s(B) that is followed by a rise.

    For each interior point the depth is min(max before - value, max after - value);
    a monotone curve gives 0.
    """
    cfg = SweepConfig(J=J, gammas=(gamma,), B_range=B_range, kT_range=Range(kT, kT, 1), measures=frozenset({"geometric"}))
    v = np.array([r.Ns for r in run_sweep(cfg)])
    if len(v) < 3:
        return 0.0
    before = np.maximum.accumulate(v)[:-2]
    after = np.maximum.accumulate(v[::-1])[::-1][2:]
    depth = np.minimum(before - v[1:-1], after - v[1:-1])
    return float(max(0.0, depth.max()))


def locate_critical_anisotropy(
    kT: float,
    margin: float = 1e-3,
    J: float = 1.0,
    B_range: Range = Range(0.0, 3.0, 601),
    tol: float = 1e-3,
    gamma_max: float = 0.95,
) -> float | None:
    """Smallest gamma in [0, gamma_max] whose N^s(B) curve shows a revival deeper than ``margin``.

    Found by bisection, which assumes the revival depth grows with gamma.
    gamma_max stays below 1 because at gamma = 1 the critical field is 0 and
    the dip sits on the boundary of the B range. Returns None if gamma_max
    shows no revival.
    """
    if revival_depth(gamma_max, kT, J, B_range) < margin:
        return None
    lo, hi = 0.0, gamma_max
    if revival_depth(lo, kT, J, B_range) >= margin:
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if revival_depth(mid, kT, J, B_range) >= margin:
            hi = mid
        else:
            lo = mid
    return hi
