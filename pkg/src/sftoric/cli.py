"""Command-line front end: config parsing, verification suites, sample emission.

Usage::

    sftoric {validate,verify,asympt,killing,example,emit} [--config PATH] [options]

Exit codes: 0 all checks pass, 1 invalid config or polygon, 2 a suite check
failed, 3 an input or output file could not be read or written.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import asymptotics as asy
from . import geometry as geo
from . import momentum as mom
from . import potentials as pot
from .polygon import FAMILIES, LabeledPolygon, classify_polygon, validate_polygon

EXIT_OK, EXIT_INVALID, EXIT_FAILED, EXIT_IO = 0, 1, 2, 3
SUITES = ("validate", "verify", "asympt", "killing", "example")
BUILTINS = ("disk", "h2s2")
CSV_COLUMNS = (
    "x", "y", "r", "theta", "phi1", "phi2", "A11", "A12", "A21", "A22",
    "detA", "V", "lambda", "K_sigma", "s4", "q_model",
)


class ConfigError(ValueError):
    """Schema or polygon validation failure; the message names the field path."""


@dataclass(frozen=True)
class RaySpec:
    thetas: tuple[float, ...] = (math.pi / 4, math.pi / 2, 3 * math.pi / 4)
    r_min: float = 1e2
    r_max: float = 1e4
    n: int = 12


@dataclass(frozen=True)
class RunConfig:
    polygon: LabeledPolygon = field(default_factory=lambda: LabeledPolygon.taub_nut())
    grid: geo.GridSpec = field(default_factory=geo.GridSpec)
    rays: RaySpec = field(default_factory=RaySpec)
    tol: float = 1e-6
    fd_step: float = geo.DEFAULT_STEP
    model: bool = False
    out: str | None = None
    fmt: str = "csv"
    jobs: int = 1
    builtin: str | None = None


@dataclass(frozen=True)
class ReportRecord:
    check: str
    value: float
    reference: float
    residual: float
    tol: float
    note: str

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)

    def as_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


def record(check, value, reference, tol, note, residual=None) -> ReportRecord:
    value, reference = float(value), float(reference)
    if residual is None:
        residual = abs(value - reference)
    residual = float(residual)
    if math.isnan(residual):
        residual = math.inf
    return ReportRecord(check, value, reference, residual, float(tol), note)


# ----------------------------------------------------------------- config parsing

_TOP_KEYS = {
    "family", "alpha", "beta", "s0", "sd", "lipschitz_points", "vertices",
    "grid", "fd_step", "tol", "rays", "model",
}
_GRID_KEYS = {"x_min", "x_max", "y_min", "y_max", "nx", "ny"}
_RAY_KEYS = {"thetas", "r_min", "r_max", "n"}


def _num(value, path, positive=False, nonneg=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{path}: must be finite")
    if positive and value <= 0:
        raise ConfigError(f"{path}: must be positive")
    if nonneg and value < 0:
        raise ConfigError(f"{path}: must be non-negative")
    return value


def _int(value, path, minimum):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{path}: must be at least {minimum}")
    return value


def _table(value, path, keys):
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a table")
    extra = sorted(set(value) - keys)
    if extra:
        raise ConfigError(f"{path}.{extra[0]}: unknown key")
    return value


def _load(path: str) -> dict:
    try:
        text = Path(path).read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        if path.endswith(".json"):
            return json.loads(text)
        return tomllib.loads(text.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config {path} is not well-formed: {exc}") from exc


def config_from_dict(raw: dict) -> RunConfig:
    """Validate a parsed config mapping and fill in defaults."""
    raw = _table(raw, "config", _TOP_KEYS)
    family = raw.get("family", "taub_nut")
    if family not in FAMILIES:
        raise ConfigError(f"family: unknown tag {family!r}; valid tags: {', '.join(FAMILIES)}")
    params = {k: _num(raw[k], k) for k in ("alpha", "beta", "s0", "sd") if k in raw}
    fd_step = _num(raw.get("fd_step", geo.DEFAULT_STEP), "fd_step", positive=True)
    tol = _num(raw.get("tol", 1e-6), "tol", positive=True)

    if "lipschitz_points" in raw:
        xs = raw["lipschitz_points"]
        if not isinstance(xs, list):
            raise ConfigError("lipschitz_points: expected an array")
        xs = [_num(v, f"lipschitz_points[{i}]") for i, v in enumerate(xs)]
        for i in range(1, len(xs)):
            if not xs[i] > xs[i - 1]:
                raise ConfigError(f"lipschitz_points[{i}]: not strictly increasing")
    elif family == "taub_nut":
        xs = [0.0]
    else:
        raise ConfigError("lipschitz_points: required for this family")
    if "vertices" in raw:
        vs = raw["vertices"]
        if not isinstance(vs, list):
            raise ConfigError("vertices: expected an array of [m, n] pairs")
        verts = []
        for i, v in enumerate(vs):
            if not (isinstance(v, list) and len(v) == 2):
                raise ConfigError(f"vertices[{i}]: expected an [m, n] pair")
            verts.append((_num(v[0], f"vertices[{i}][0]"), _num(v[1], f"vertices[{i}][1]")))
    elif family == "taub_nut":
        verts = [(0.0, 0.0)]
    else:
        raise ConfigError("vertices: required for this family")

    poly = LabeledPolygon(tuple(xs), tuple(verts), family=family, **params)
    report = validate_polygon(poly)
    if not report.ok:
        raise ConfigError("; ".join(report.errors))

    g = _table(raw.get("grid", {}), "grid", _GRID_KEYS)
    gkw = {k: _num(g[k], f"grid.{k}") for k in ("x_min", "x_max", "y_min", "y_max") if k in g}
    gkw.update({k: _int(g[k], f"grid.{k}", 3) for k in ("nx", "ny") if k in g})
    try:
        grid = geo.GridSpec(h=fd_step, **gkw)
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from exc

    r = _table(raw.get("rays", {}), "rays", _RAY_KEYS)
    rkw = {}
    if "thetas" in r:
        if not isinstance(r["thetas"], list) or not r["thetas"]:
            raise ConfigError("rays.thetas: expected a non-empty array")
        rkw["thetas"] = tuple(_num(t, f"rays.thetas[{i}]") for i, t in enumerate(r["thetas"]))
    rkw.update({k: _num(r[k], f"rays.{k}", positive=True) for k in ("r_min", "r_max") if k in r})
    if "n" in r:
        rkw["n"] = _int(r["n"], "rays.n", 8)
    rays = RaySpec(**rkw)
    if rays.r_max <= rays.r_min:
        raise ConfigError("rays.r_max: must exceed rays.r_min")
    model = raw.get("model", False)
    if not isinstance(model, bool):
        raise ConfigError("model: expected true or false")
    return RunConfig(poly, grid, rays, tol, fd_step, model)


def parse_config(path: str) -> RunConfig:
    raw = _load(path)
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be a table")
    return config_from_dict(raw)


# ---------------------------------------------------------------- grid sampling

def _sample_row(family, model, xs, y, h):
    """All CSV columns for one grid row; rows are the unit of parallel work."""
    u = np.stack([xs, np.full_like(xs, y)], axis=-1)
    smp = geo.field_sample(family, u, h, model)
    a = smp.jacobian
    cols = [
        xs, u[:, 1], np.hypot(xs, u[:, 1]), np.arctan2(u[:, 1], xs),
        smp.phi[:, 0], smp.phi[:, 1], a[:, 0, 0], a[:, 0, 1], a[:, 1, 0], a[:, 1, 1],
        smp.detA, smp.blocks.V, smp.blocks.lam, smp.K_sigma, smp.s,
    ]
    rows = np.stack(cols, axis=-1)
    q = smp.quotient if model is not None else None
    return rows, q


def emit_samples(cfg: RunConfig, model: mom.MomentumFamily | None = None) -> tuple[list, list]:
    """Evaluate the grid in y-outer, x-inner order; returns (rows, quotients)."""
    family = mom.family_for(cfg.polygon)
    if model is None and cfg.model:
        model = mom.model_for(cfg.polygon)
    xs, ys = cfg.grid.axes()
    args = [(family, model, xs, float(y), cfg.grid.h) for y in ys]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            parts = list(ex.map(_sample_row, *zip(*args)))
    else:
        parts = [_sample_row(*a) for a in args]
    rows, quot = [], []
    for r, q in parts:
        rows.extend(r)
        quot.extend(q if q is not None else [None] * len(r))
    return rows, quot


def _fmt(v) -> str:
    return "" if v is None else format(float(v), ".17g")


def render_samples(rows, quot, fmt="csv") -> str:
    if fmt == "json":
        out = []
        for r, q in zip(rows, quot):
            d = {k: float(v) for k, v in zip(CSV_COLUMNS[:-1], r)}
            d["q_model"] = None if q is None else float(q)
            out.append(d)
        return json.dumps(out, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for r, q in zip(rows, quot):
        buf.write(",".join([_fmt(v) for v in r] + [_fmt(q)]) + "\n")
    return buf.getvalue()


# --------------------------------------------------------------------- suites

def suite_validate(cfg: RunConfig) -> list[ReportRecord]:
    poly = cfg.polygon
    rep = validate_polygon(poly)
    recs = [record("polygon.valid", float(rep.ok), 1.0, 0.0, "; ".join(rep.errors) or "all invariants hold")]
    if rep.ok:
        recs.append(record("polygon.convex", float(bool(rep.convex)), 1.0, 0.0,
                           "turning-direction signs along the boundary polyline"))
        for i, s in enumerate(rep.edge_labels):
            recs.append(record(f"edge_label[{i + 1}]", s, s, 0.0,
                               "|p_{i+1} - p_i| / (x_{i+1} - x_i); positive and finite",
                               residual=0.0 if (math.isfinite(s) and s > 0) else math.inf))
        fam = mom.family_for(poly)
        bx = np.asarray(poly.lipschitz_points)
        err = float(np.abs(fam.phi(bx, 0.0) - np.asarray(poly.vertices)).max())
        recs.append(record("boundary.vertices", err, 0.0, 1e-12, "boundary map hits each vertex"))
        cls = classify_polygon(poly)
        recs.append(record(f"class.{cls.kind}.{cls.asymptotic_family}", 1.0, 1.0, 0.0,
                           "classification by ray directions and free parameters"))
    return recs


def suite_verify(cfg: RunConfig) -> list[ReportRecord]:
    fam = mom.family_for(cfg.polygon)
    u = cfg.grid.points()
    h = cfg.grid.h
    x, y = u[..., 0], u[..., 1]
    b = geo.metric_blocks(fam, x, y)
    recs = [
        record("volumetric.V_eq_y2", float(np.max(np.abs(b.V - y * y) / (y * y))), 0.0, 1e-12,
               "oracle: V = det G^ij equals y^2 for every closed-form family"),
    ]
    eye = geo.mul2(b.G_dn, b.G_up)
    eye[..., 0, 0] -= 1
    eye[..., 1, 1] -= 1
    recs.append(record("metric.inverse", float(np.abs(eye).max()), 0.0, 1e-10,
                       "G_dn G_up = identity"))
    s1 = np.asarray(geo.scalar_curvature_4d(fam, u, h).s)
    s2 = np.asarray(geo.scalar_curvature_4d(fam, u, h / 2).s)
    extrap = np.abs(geo.richardson(s1, s2)).max()
    raw, half = np.abs(s1).max(), np.abs(s2).max()
    recs.append(record("scalar_flat.richardson", extrap, 0.0, cfg.tol,
                       f"s = -d_i(G^ij d_j log V) extrapolated from h and h/2; raw max |s| = {raw:.3g}, "
                       f"halving ratio {raw / half:.3g}"))
    c1, c2 = geo.christoffels(fam, u, h), geo.christoffels(fam, u, h / 2)
    trace = geo.richardson(c1.trace, c2.trace)
    resid = np.abs(trace - geo.richardson(c1.log_volume_side, c2.log_volume_side)).max(axis=-1)
    scale = np.maximum(1.0, np.abs(trace).max(axis=-1))
    recs.append(record("christoffel.trace_identity", float(np.max(resid / scale)), 0.0, 1e-6,
                       "Gamma^k = -G^ks d_s log V^(1/2); both sides extrapolated from h and h/2, "
                       f"raw residual at h {float(np.max(c1.residual)):.3g}"))
    conf = geo.conformal_scalar(fam, u, h, extrapolate=True)
    rel = conf.residual / np.maximum(1.0, np.abs(conf.via_surface))
    recs.append(record("conformal.pipelines", float(np.max(rel)), 0.0, 1e-4,
                       "conformal scalar via Christoffels vs FD curvature of V^(1/2) g_Sigma, "
                       "extrapolated from h and h/2, relative to max(1, |value|)"))
    recs.append(record("conformal.nonnegative", float(np.min(conf.via_christoffels)), 0.0, 1e-6,
                       "s_tilde >= 0 on scalar-flat samples",
                       residual=max(0.0, -float(np.min(conf.via_christoffels)))))
    smp = geo.field_sample(fam, u, h)
    recs.append(record("wminus.identity", float(np.max(smp.wminus_sq)), 0.0, 0.0,
                       "|W-|^2 = 24 K_Sigma^2 on every sample",
                       residual=float(np.max(np.abs(smp.wminus_sq - 24 * smp.K_sigma * smp.K_sigma)))))
    return recs


def suite_asympt(cfg: RunConfig) -> list[ReportRecord]:
    poly = cfg.polygon
    cls = classify_polygon(poly)
    fam, model = mom.family_for(poly), mom.model_for(poly)
    rays = cfg.rays
    if poly.family in ("taub_nut", "r2s2_model"):
        x, y = asy.ray_points(rays.thetas[0], rays.r_max)
        q = asy.comparison_quotient(fam, model, x, y)
        return [record("quotient.self_model", q, 0.0, 1e-12,
                       "the family is its own asymptotic model; no decay to fit")]
    recs = []
    for th in rays.thetas:
        tag = f"theta={th:.6g}"
        try:
            fit = asy.fit_decay(fam, model, th, rays.r_min, rays.r_max, rays.n)
        except asy.ZeroSignalError as exc:
            recs.append(record(f"decay.{tag}", math.nan, -1.0, 0.05, str(exc)))
            continue
        if cls.kind == "general":
            ref = asy.leading_coefficient(poly, th)
            recs.append(record(f"decay.exponent.{tag}", fit.exponent, -1.0, 0.05,
                               f"log-log fit over r in [{rays.r_min:g}, {rays.r_max:g}], rms {fit.rms_residual:.2g}"))
            recs.append(record(f"decay.coefficient.{tag}", fit.coefficient, abs(ref), 0.01,
                               "leading 1/r coefficient (translation-invariant form)",
                               residual=abs(fit.coefficient - abs(ref)) / max(abs(ref), 1e-300)))
            x, y = asy.ray_points(th, rays.r_max)
            lim = rays.r_max * float(asy.det_ratio_deviation(fam, model, x, y))
            recs.append(record(f"decay.limit.{tag}", lim, ref, 10.0 / rays.r_max * max(1.0, abs(ref)),
                               "r (1 - det A / det A~) at the largest radius"))
        else:
            recs.append(record(f"decay.exponent.{tag}", fit.exponent, -1.0, 0.1,
                               f"two-point model comparison; rms {fit.rms_residual:.2g}"))
            x, y = asy.ray_points(th, np.array([rays.r_min, rays.r_max]))
            q = asy.comparison_quotient(fam, model, x, y)
            recs.append(record(f"decay.decreasing.{tag}", q[1], q[0], 0.0,
                               "quotient strictly smaller at r_max than at r_min",
                               residual=0.0 if q[1] < q[0] else math.inf))
    return recs


def suite_killing(cfg: RunConfig) -> list[ReportRecord]:
    poly = cfg.polygon
    fam = mom.family_for(poly)
    recs = []
    lo, hi = float(fam.centers.min()), float(fam.centers.max())
    if fam.kind in ("general", "taub_nut"):
        for branch, x, p, s in (("left", lo - 1e6, poly.alpha, poly.s0), ("right", hi + 1e6, poly.beta, poly.sd)):
            v = asy.killing_norm_polar(fam, branch, x)
            if p > 0:
                recs.append(record(f"killing.{branch}.limit", v, s / p, 1e-5,
                                   f"first-principles limit s/param = {s / p:.6g}; the printed display gives 1/param = {1 / p:.6g}"))
            else:
                recs.append(record(f"killing.{branch}.unbounded", v, 0.0, 0.0,
                                   "norm grows without bound when the free parameter vanishes",
                                   residual=0.0 if v > 1e5 else math.inf))
    else:
        for branch, xs in (("left", lo - np.geomspace(1, 1e3, 60)), ("right", hi + np.geomspace(1, 1e3, 60))):
            v = asy.killing_norm_polar(fam, branch, xs)
            inc = bool(np.all(np.diff(v) > 0))
            recs.append(record(f"killing.{branch}.monotone", float(v[-1]), float(v[0]), 0.0,
                               "norm increases monotonically away from the polygon",
                               residual=0.0 if inc else math.inf))
    for branch, side in (("left", -1.0), ("right", 1.0)):
        edge = lo if side < 0 else hi
        r = np.geomspace(1e2, 1e4, 16)
        v = np.sqrt(asy.killing_norm_polar(fam, branch, edge + side * r))
        verdict = asy.closedness_criteria(asy.PolarProfile(r, v))
        recs.append(record(f"closedness.{branch}.decay", verdict.C1, verdict.threshold, 0.0,
                           f"inf |X| r over tail r in [{verdict.tail[0]:g}, {verdict.tail[1]:g}]",
                           residual=0.0 if verdict.decay_ok else math.inf))
    return recs


def suite_example(name: str) -> list[ReportRecord]:
    recs = []
    if name == "disk":
        d = pot.disk_potential()
        recs.append(record("R(0).closed", pot.disk_R(0.0), 8.0, 0.0, "displayed R formula at the origin"))
        sc = geo.scalar_curvature_4d(d, np.zeros(2))
        recs.append(record("R(0).hessian_field", sc.s / 2, 8.0, 1e-4,
                           "half of -d_i(G^ij d_j log V) from the Hessian field"))
        recs.append(record("R(0).curvature_form", pot.curvature_form_scalar(d, np.zeros(2)), 8.0, 1e-4,
                           "curvature-form contraction, calibrated once at the origin"))
        recs.append(record("R(0.6,0).closed", pot.disk_R(0.6), 0.1980460, 1e-6, "displayed R formula"))
        recs.append(record("norm(0)", pot.disk_curvature_norm(0.0), 96.0, 1e-12, "displayed curvature norm"))
        recs.append(record("norm(1)", pot.disk_curvature_norm(1.0), 36.0, 1e-12, "displayed curvature norm as rho -> 1"))
        recs.append(record("R(1).closed", pot.disk_R(1.0), -3.0, 1e-12, "displayed R formula as rho -> 1"))
        g = pot.disk_example(0.6, 0.0)
        recs.append(record("G(0.6,0)", g.G, -0.5 * math.log(0.64), 1e-12, "G = -1/2 log(1 - rho^2)"))
        lp = pot.legendre_transform(d, np.array([[0.6, 0.0]]))
        recs.append(record("xi(0.6,0)", lp.xi[0, 0], 0.9375, 1e-12, "xi = phi / (1 - rho^2)"))
        recs.append(record("F(0.6,0)", lp.F[0], 0.9375 * 0.6 + 0.5 * math.log(0.64), 1e-10, "F = <xi, phi> - G"))
    elif name == "h2s2":
        poly = LabeledPolygon.h2s2()
        fam = mom.family_for(poly)
        p = mom.h2s2_inverse(0.0, 1.0)
        recs.append(record("inverse(0,1).phi1", p[0], math.sqrt(2), 1e-12, "inverse chart"))
        recs.append(record("inverse(1,1.5).phi1", mom.h2s2_inverse(1.0, 1.5)[0], 2.0, 1e-12, "inverse chart"))
        f = mom.h2s2_forward(math.acosh(2.0), math.acos(-0.5))
        recs.append(record("forward(2,1/2).y", f[3], 1.5, 1e-12, "direct chart"))
        rng = np.random.default_rng(0)
        xs, ys = rng.uniform(-5, 5, 1000), rng.uniform(0, 5, 1000)
        p1, p2 = mom.h2s2_inverse(xs, ys)
        diff = np.abs(fam.phi(xs, ys) - np.stack([p1, p2], axis=-1)).max()
        recs.append(record("inverse_vs_model", diff, 0.0, 1e-12, "inverse chart equals the two-point model"))
        b = geo.reduced_metric(fam, (0.0, 1.0))
        recs.append(record("lambda(0,1)", b.lam, 0.5, 1e-12, "|det A| / y"))
        recs.append(record("killing.right(3)", asy.killing_norm_polar(fam, "right", 3.0), 8.0, 1e-10,
                           "(phi1)^2 - 1 with phi1 = 3"))
    else:
        raise ConfigError(f"--builtin: unknown example {name!r}; valid: {', '.join(BUILTINS)}")
    return recs


def run_suite(cfg: RunConfig, suite: str) -> tuple[list[ReportRecord], int]:
    if suite == "example":
        recs = suite_example(cfg.builtin or "disk")
    else:
        recs = {"validate": suite_validate, "verify": suite_verify, "asympt": suite_asympt,
                "killing": suite_killing}[suite](cfg)
    if suite == "validate" and not all(r.passed for r in recs):
        return recs, EXIT_INVALID
    return recs, EXIT_OK if all(r.passed for r in recs) else EXIT_FAILED


def render_records(recs, fmt="csv") -> str:
    if fmt == "json":
        return json.dumps([r.as_dict() for r in recs], indent=1) + "\n"
    buf = io.StringIO()
    buf.write("check,value,reference,residual,tol,passed,note\n")
    for r in recs:
        note = '"' + r.note.replace('"', "'") + '"'
        buf.write(",".join([r.check, _fmt(r.value), _fmt(r.reference), _fmt(r.residual),
                            _fmt(r.tol), str(r.passed).lower(), note]) + "\n")
    return buf.getvalue()


# ------------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sftoric", description=__doc__.split("\n")[0])
    p.add_argument("command", choices=SUITES + ("emit",))
    p.add_argument("--config")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--grid", help="NX,NY")
    p.add_argument("--fd-step", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--theta", help="comma-separated angles in radians")
    p.add_argument("--rmin", type=float)
    p.add_argument("--rmax", type=float)
    p.add_argument("--rsamples", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--builtin", choices=BUILTINS)
    p.add_argument("--with-model", action="store_true", help="fill q_model against the asymptotic model")
    return p


def _apply_flags(cfg: RunConfig, a) -> RunConfig:
    grid, rays = cfg.grid, cfg.rays
    try:
        if a.grid:
            nx, ny = (int(v) for v in a.grid.split(","))
            grid = replace(grid, nx=nx, ny=ny)
        if a.fd_step is not None:
            grid = replace(grid, h=a.fd_step)
    except ValueError as exc:
        raise ConfigError(f"--grid/--fd-step: {exc}") from exc
    if a.theta:
        try:
            rays = replace(rays, thetas=tuple(float(t) for t in a.theta.split(",")))
        except ValueError as exc:
            raise ConfigError(f"--theta: {exc}") from exc
    if a.rmin is not None:
        rays = replace(rays, r_min=a.rmin)
    if a.rmax is not None:
        rays = replace(rays, r_max=a.rmax)
    if a.rsamples is not None:
        if a.rsamples < 8:
            raise ConfigError("--rsamples: need at least 8 radii")
        rays = replace(rays, n=a.rsamples)
    if rays.r_max <= rays.r_min:
        raise ConfigError("--rmax: must exceed --rmin")
    tol = cfg.tol if a.tol is None else a.tol
    if not tol > 0:
        raise ConfigError("--tol: must be positive")
    if a.jobs < 1:
        raise ConfigError("--jobs: must be at least 1")
    return replace(cfg, grid=grid, rays=rays, tol=tol, fd_step=grid.h,
                   model=cfg.model or a.with_model, out=a.out, fmt=a.format,
                   jobs=a.jobs, builtin=a.builtin)


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        cfg = parse_config(a.config) if a.config else RunConfig()
        cfg = _apply_flags(cfg, a)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        if a.command == "emit":
            rows, quot = emit_samples(cfg)
            text, code = render_samples(rows, quot, cfg.fmt), EXIT_OK
        else:
            recs, code = run_suite(cfg, a.command)
            text = render_records(recs, cfg.fmt)
            for r in recs:
                mark = "PASS" if r.passed else "FAIL"
                print(f"{mark} {r.check}: value={r.value:.6g} ref={r.reference:.6g} "
                      f"residual={r.residual:.3g} tol={r.tol:.3g}", file=sys.stderr)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        _write(text, cfg.out)
    except OSError as exc:
        print(f"error: cannot write {cfg.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
