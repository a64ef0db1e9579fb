"""Parameter sweeps, threshold search and tabular output."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

import numpy as np

from . import boson, fermi
from .errors import FuzzyEntError, InvalidSpec, NoBracket
from .qmat import negativity
from .quadrature import QuadratureConfig

log = logging.getLogger(__name__)

COLUMNS = ("model", "p_f", "sigma", "d", "tau", "f", "g",
           "negativity_closed", "negativity_eigen", "singlet_fraction", "entangled")
MODELS = ("fermi-ideal", "fermi-fuzzy", "boson-hom", "boson-general")
# which grids each model actually uses
_AXES = {
    "fermi-ideal": ("p_f", "d"),
    "fermi-fuzzy": ("p_f", "sigma", "d"),
    "boson-hom": ("sigma", "tau"),
    "boson-general": ("sigma", "tau"),
}


def parse_grid(text) -> list:
    """Parse ``min:max:steps``, a comma list, a single number, or a list of numbers."""
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidSpec(f"grid {text!r} is not min:max:steps")
        lo, hi, steps = float(parts[0]), float(parts[1]), parts[2]
        try:
            n = int(steps)
        except ValueError:
            raise InvalidSpec(f"steps in {text!r} must be an integer") from None
        if n < 1:
            raise InvalidSpec("steps must be >= 1")
        if lo > hi:
            raise InvalidSpec(f"grid {text!r} has min > max")
        if n == 1:
            return [lo]
        return [float(x) for x in np.linspace(lo, hi, n)]
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidSpec(f"cannot parse grid {text!r}") from None


@dataclass
class SweepSpec:
    model: str
    p_f: Sequence[float] = (1.0,)
    sigma: Sequence[float] = (1.0,)
    d: Sequence[float] = (0.0,)
    tau: Sequence[float] = (0.0,)
    amplitude: Optional[boson.SpectralAmplitude] = None
    pbs: Optional[boson.PBSCoefficients] = None
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    workers: int = 1

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidSpec(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        axes = _AXES[self.model]
        for name in axes:
            vals = list(getattr(self, name))
            if not vals:
                raise InvalidSpec(f"empty grid for {name}")
            if not all(math.isfinite(v) for v in vals):
                raise InvalidSpec(f"non-finite value in {name}")
        if all(len(getattr(self, name)) <= 1 for name in axes):
            raise InvalidSpec("at least one parameter must vary")
        if self.workers < 1:
            raise InvalidSpec("workers must be >= 1")

    def points(self):
        names = _AXES[self.model]
        for combo in product(*(getattr(self, n) for n in names)):
            yield dict(zip(names, combo))


def _row(model, **values):
    row = {c: None for c in COLUMNS}
    row["model"] = model
    row.update(values)
    return row


def _fill_report(row, state, closed):
    rep = negativity(state)
    row.update(negativity_closed=closed, negativity_eigen=rep.negativity_eigen,
               singlet_fraction=rep.singlet_fraction, entangled=rep.ppt_entangled)
    return row


def _x_state_negativity(m) -> Optional[float]:
    """Negativity of an X-shaped state, or None if ``m`` is not X-shaped."""
    mask = np.ones((4, 4), bool)
    mask[np.diag_indices(4)] = False
    mask[0, 3] = mask[3, 0] = mask[1, 2] = mask[2, 1] = False
    if np.abs(m[mask]).max() > 1e-12:
        return None
    a = abs(m[0, 3]) - math.sqrt(max(m[1, 1].real, 0.0) * max(m[2, 2].real, 0.0))
    b = abs(m[1, 2]) - math.sqrt(max(m[0, 0].real, 0.0) * max(m[3, 3].real, 0.0))
    return 2.0 * max(0.0, a, b)


def evaluate_point(spec: SweepSpec, point: dict) -> dict:
    model = spec.model
    if model == "fermi-ideal":
        p_f, d = point["p_f"], point["d"]
        F = fermi.ideal_f(p_f, d)
        row = _row(model, p_f=p_f, d=d, f=1.0, g=F * F)
        return _fill_report(row, fermi.ideal_pair_state(p_f, d), fermi.ideal_negativity_closed(p_f, d))
    if model == "fermi-fuzzy":
        p_f, s, d = point["p_f"], point["sigma"], point["d"]
        f, g = fermi.fuzzy_correlations(p_f, s, d, spec.quad)
        row = _row(model, p_f=p_f, sigma=s, d=d, f=f, g=g)
        return _fill_report(row, fermi.state_from_correlations(f, g), fermi.closed_negativity(f, g))
    if model == "boson-hom":
        s, tau = point["sigma"], point["tau"]
        row = _row(model, sigma=s, tau=tau, f=boson.hom_f(s, tau))
        return _fill_report(row, boson.hom_state(s, tau), boson.hom_negativity(s, tau))
    s, tau = point["sigma"], point["tau"]
    scn = boson.BosonScenario(
        tau=tau, sigma=s,
        pbs=spec.pbs or boson.PBSCoefficients.ideal(),
        amplitude=spec.amplitude or boson.SpectralAmplitude.constant(),
    )
    state = boson.general_pair_state(scn)
    m = state.entries
    row = _row(model, sigma=s, tau=tau, f=2.0 * abs(m[0, 3]))
    return _fill_report(row, state, _x_state_negativity(m))


def _safe_evaluate(spec, point):
    try:
        return evaluate_point(spec, point)
    except FuzzyEntError as exc:
        row = _row(spec.model, **point)
        row["error"] = f"{type(exc).__name__}: {exc}"
        log.error("point %s failed: %s", point, row["error"])
        return row


def run_sweep(spec: SweepSpec) -> list:
    """Evaluate every grid point; row order follows the grid regardless of ``workers``.

    Rows whose evaluation raised carry an ``error`` key and empty numeric columns.
    """
    points = list(spec.points())
    if spec.workers == 1:
        return [_safe_evaluate(spec, p) for p in points]
    with ThreadPoolExecutor(max_workers=spec.workers) as pool:
        return list(pool.map(lambda p: _safe_evaluate(spec, p), points))


def _indicator(model, p_f, sigma, cfg):
    """Positive where entangled: F^2 - 1/2 (ideal) or g/f - 1/2 (fuzzy)."""
    if model == "fermi-ideal":
        return lambda d: fermi.ideal_f(p_f, d) ** 2 - 0.5
    if model == "fermi-fuzzy":
        if sigma is None:
            raise InvalidSpec("fermi-fuzzy threshold needs sigma")

        def h(d):
            f, g = fermi.fuzzy_correlations(p_f, sigma, d, cfg)
            return g / f - 0.5
        return h
    if model == "boson-hom":
        if sigma is None:
            raise InvalidSpec("boson-hom threshold needs sigma")
        return lambda tau: boson.hom_negativity(sigma, tau)
    raise InvalidSpec(f"no threshold search for model {model!r}")


def find_threshold(model: str, p_f: float = 1.0, sigma: float | None = None, d_max: float = 20.0,
                   tol: float = 1e-8, scan_points: int = 2000, cfg: QuadratureConfig | None = None) -> float:
    """Smallest separation at which the pair stops being entangled.

    Scans [0, d_max] for the first sign change of the entanglement indicator
    and refines it by bisection to ``tol``.

    Raises
    ------
    NoBracket
        If the indicator never changes sign on the scan.
    """
    h = _indicator(model, p_f, sigma, cfg)
    grid = np.linspace(0.0, d_max, scan_points + 1)
    prev_x, prev_h = grid[0], h(grid[0])
    for x in grid[1:]:
        hx = h(x)
        if prev_h > 0 >= hx:
            lo, hi = prev_x, x
            break
        prev_x, prev_h = x, hx
    else:
        raise NoBracket(f"{model}: no entangled-to-separable transition on [0, {d_max}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if h(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def format_rows(rows, fmt: str = "csv") -> str:
    """Render rows as CSV (fixed header, 17 significant digits) or a JSON array."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row.get(c)) for c in COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([{c: row.get(c) for c in COLUMNS} for row in rows], indent=1) + "\n"
    raise InvalidSpec(f"unknown output format {fmt!r}")


def emit(rows, fmt: str = "csv", destination=None) -> str:
    """Write formatted rows to ``destination`` (path or text stream); returns the text."""
    text = format_rows(rows, fmt)
    if destination is None:
        return text
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", newline="") as fh:
            fh.write(text)
    return text


def parse_csv(text: str) -> list:
    """Inverse of the CSV emitter (used for round-trip checks)."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for k, v in rec.items():
            if v == "":
                row[k] = None
            elif k == "model":
                row[k] = v
            elif k == "entangled":
                row[k] = v == "true"
            else:
                row[k] = float(v)
        out.append(row)
    return out
