"""Verification suites: run checks, collect fitted constants and slopes, emit reports."""

from __future__ import annotations

import csv
import json
import math
import platform
import time
import traceback
import warnings
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

import numpy as np
import scipy

from . import model
from .model import PRESETS, GroupParams
from .multiplier import (
    CutoffFamily,
    IndeterminateError,
    MultiplierContext,
    NotInStripClass,
    default_heat_time,
    dphhat_bound_check,
    dyadic_piece,
    full_kernel,
    heat_multiplier,
    kernel_kh,
    local_kernel,
    local_multiplier_horm_check,
    parabolic_region_contains,
    resolvent_exp_multiplier,
    resolvent_pole_strip_test,
    strip_class_check,
    weighted_l1_norm,
)
from .profiles import gaussian
from .spherical import (
    check_lemma21_bound,
    check_phi0_bound,
    phi,
    radial_eigen_residual,
)
from .transforms import (
    abel_forward,
    abel_inverse,
    abel_profile_of,
    fourier_line,
    heat_spectral,
    spherical_inverse,
    spherical_transform,
)

__all__ = [
    "SCHEMA_VERSION",
    "ConfigError",
    "SuiteConfig",
    "CheckRecord",
    "VerificationReport",
    "SUITES",
    "run_suite",
    "decay_fit",
    "parse_config_file",
    "make_config",
]

SCHEMA_VERSION = "1.0"
FAMILIES = ("heat", "resolvent-exp")
STABILITY_FACTOR = 2.0


class ConfigError(ValueError):
    """Invalid suite configuration (maps to exit status 2)."""


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "paper-core"
    preset: str | None = "real-hyp"
    m_v: int | None = None
    m_z: int | None = None
    family: str = "heat"
    t: float | None = None
    c: float | None = None
    alpha: float = 1.0
    p: float = 4.0
    beta: int = 3
    h_min: int = 4
    h_max: int = 20
    r_max: float = 10.0
    lambdas: tuple = (0.0, 0.5, 1.0, 2.0, 0.3j)
    profile: str = "gaussian"
    tol: float | None = None
    seed: int = 0
    samples: int = 60

    def __post_init__(self) -> None:
        if self.preset is not None and (self.m_v is not None or self.m_z is not None):
            raise ConfigError("give either a preset or (m_v, m_z), not both")
        if self.preset is None and (self.m_v is None or self.m_z is None):
            raise ConfigError("m_v and m_z are both required without a preset")
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}; choose from {sorted(PRESETS)}")
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.alpha == 0 or not math.isfinite(self.alpha):
            raise ConfigError("alpha must be a nonzero real")
        if not (self.p > 1 and self.p != 2 and math.isfinite(self.p)):
            raise ConfigError("p must lie in (1, inf) minus {2}")
        if int(self.beta) != self.beta or self.beta < 1:
            raise ConfigError("beta must be a positive integer")
        if self.h_min < 3:
            raise ConfigError("the h range must start at 3 or later")
        if self.h_max - self.h_min < 4:
            raise ConfigError("the h range needs at least 5 points")
        if self.t is not None and self.t <= 0:
            raise ConfigError("heat time t must be positive")
        if self.c is not None and self.c <= 0:
            raise ConfigError("resolvent parameter c must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tolerances must be positive")
        if self.r_max <= 0:
            raise ConfigError("r_max must be positive")
        if self.profile != "gaussian":
            raise ConfigError(f"unknown profile {self.profile!r} (only 'gaussian')")
        try:
            self.group()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def group(self) -> GroupParams:
        if self.preset is not None:
            return model.preset(self.preset)
        return GroupParams(int(self.m_v), int(self.m_z))

    def context(self, g: GroupParams | None = None) -> MultiplierContext:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return MultiplierContext(g or self.group(), self.alpha, self.p, int(self.beta))

    def multiplier(self):
        if self.family == "heat":
            t = self.t if self.t is not None else default_heat_time(self.h_max)
            return heat_multiplier(t, self.alpha)
        c = self.c if self.c is not None else 2 * self.context().W
        return resolvent_exp_multiplier(c, self.alpha)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambdas"] = [_complex_str(z) for z in self.lambdas]
        return d


def _complex_str(z) -> str:
    z = complex(z)
    return f"{z.real:g}" if z.imag == 0 else f"{z.real:g}{z.imag:+g}j"


@dataclass
class CheckRecord:
    """One check result.  ``estimate`` names the inequality or identity being checked."""

    name: str
    estimate: str
    measured: float | None
    tolerance: str
    passed: bool
    runtime: float = 0.0
    detail: str = ""
    table: list | None = None

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "name": self.name,
            "estimate": self.estimate,
            "measured": _json_number(self.measured),
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
            "detail": self.detail,
        }
        if timing:
            d["runtime_s"] = round(self.runtime, 6)
        if self.table is not None:
            d["table"] = [[_json_number(v) for v in row] for row in self.table]
        return d


def _json_number(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else str(v)


@dataclass
class VerificationReport:
    suite: str
    config: dict
    records: list[CheckRecord] = field(default_factory=list)
    timestamp: str = ""

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "timestamp": self.timestamp,
            "environment": environment(),
            "config": self.config,
            "passed": self.passed,
            "records": [r.to_dict(timing) for r in self.records],
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    def write_json(self, path, timing: bool = True) -> None:
        Path(path).write_text(self.to_json(timing) + "\n")

    def write_csv(self, directory) -> list[Path]:
        """One CSV per record carrying a table; returns the written paths."""
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for r in self.records:
            if not r.table:
                continue
            path = out / f"{self.suite}_{r.name}.csv"
            with path.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["h", "norm"])
                w.writerows(r.table)
            written.append(path)
        return written

    def format_table(self) -> str:
        width = max([len(r.name) for r in self.records] + [5])
        lines = [f"{'check':<{width}}  {'result':<6}  {'measured':>12}  {'time[s]':>8}  tolerance"]
        for r in self.records:
            m = "-" if r.measured is None else f"{r.measured:12.4g}"
            lines.append(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {m:>12}  "
                         f"{r.runtime:8.2f}  {r.tolerance}")
            if not r.passed and r.detail:
                lines.append(f"{'':<{width}}    {r.detail}")
        n_pass = sum(r.passed for r in self.records)
        lines.append(f"{self.suite}: {n_pass}/{len(self.records)} checks passed")
        return "\n".join(lines)


def environment() -> dict:
    from . import __version__
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "platform": platform.platform(terse=True),
        "drlab": __version__,
    }


# ---------------------------------------------------------------------------
# decay fit


def decay_fit(values) -> tuple[float, float, float]:
    """Least-squares line through ``(log h, log norm)``: ``(slope, intercept, residual)``.

    ``residual`` is the root-mean-square deviation of the fit in log space.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("values must be a sequence of (h, norm) pairs")
    if arr.shape[0] < 5:
        raise ValueError(f"a decay fit needs at least 5 points, got {arr.shape[0]}")
    h, norm = arr[:, 0], arr[:, 1]
    if np.any(h <= 0):
        raise ValueError("h values must be positive")
    if np.any(~(norm > 0)):
        raise ValueError("norms must be positive for a log-log fit")
    x, y = np.log(h), np.log(norm)
    (slope, intercept), res, *_ = np.polyfit(x, y, 1, full=True)
    rms = float(np.sqrt(res[0] / len(x))) if len(res) else 0.0
    return float(slope), float(intercept), rms


# ---------------------------------------------------------------------------
# checks


class _Result:
    """What a check function returns before timing and bookkeeping."""

    def __init__(self, measured, passed, tolerance: str, detail: str = "", table=None):
        self.measured = measured
        self.passed = bool(passed)
        self.tolerance = tolerance
        self.detail = detail
        self.table = table


@dataclass(frozen=True)
class _Check:
    name: str
    estimate: str
    func: Callable[[SuiteConfig], _Result]


def _tol(cfg: SuiteConfig, default: float) -> float:
    return cfg.tol if cfg.tol is not None else default


def _stable(a: float, b: float) -> bool:
    if not (math.isfinite(a) and math.isfinite(b)) or a <= 0 or b <= 0:
        return False
    return max(a, b) / min(a, b) < STABILITY_FACTOR


def _stable_result(a: float, b: float, what: str) -> _Result:
    ok = _stable(a, b)
    return _Result(b, ok, f"finite, <{STABILITY_FACTOR:g}x change under grid doubling",
                   f"{what}: {a:.6g} -> {b:.6g}")


# geometry

def _chk_radius_log_a(cfg):
    t = np.linspace(-5, 5, 201)
    err = float(np.max(np.abs(model.radius((0.0, 0.0, np.exp(t))) - np.abs(t))))
    tol = _tol(cfg, 1e-12)
    return _Result(err, err <= tol, f"<= {tol:g}")


def _random_points(cfg, n=None):
    rng = np.random.default_rng(cfg.seed)
    n = n or 10 * cfg.samples
    x = rng.uniform(0, 40, n)
    z = rng.uniform(0, 40, n)
    a = np.exp(rng.uniform(-6, 6, n))
    return x, z, a


def _chk_ball_norm(cfg):
    norm = model.ball_image_norm(_random_points(cfg), cfg.group())
    worst = float(np.max(norm))
    return _Result(worst, worst < 1.0, "< 1", f"seed {cfg.seed}")


def _chk_radius_a_bounds(cfg):
    x, z, a = _random_points(cfg)
    r = model.radius((x, z, a))
    excess = float(np.max(np.abs(np.log(a)) - r))
    return _Result(excess, excess <= 1e-12, "|log a| - r <= 1e-12", f"seed {cfg.seed}")


def _chk_density_bound(cfg):
    g = cfg.group()
    coarse = model.density_bound_constant(g, np.linspace(0, 30, 301)[1:])
    fine = model.density_bound_constant(g, np.linspace(0, 30, 601)[1:])
    return _stable_result(coarse, fine, "fitted constant")


def _chk_modular(cfg):
    g = cfg.group()
    pts = _random_points(cfg)
    lhs = model.left_haar_density(pts, g)
    rhs = model.modular_delta(pts, g) * model.right_haar_density(pts, g)
    err = float(np.max(np.abs(lhs / rhs - 1)))
    tol = _tol(cfg, 1e-12)
    return _Result(err, err <= tol, f"<= {tol:g} relative")


# transforms

def _test_profile(cfg):
    return gaussian(1.0, 1.0, cutoff=1e-19)


def _chk_abel_roundtrip(cfg):
    g = cfg.group()
    f = _test_profile(cfg)
    start = time.perf_counter()
    F = abel_profile_of(f, g)
    r = np.linspace(0, cfg.r_max, 201)
    err = float(np.max(np.abs(abel_inverse(F, r, g) - f(r))) / np.max(np.abs(f(r))))
    elapsed = time.perf_counter() - start
    tol = _tol(cfg, 1e-4 if g.even_center else 1e-3)
    return _Result(err, err <= tol and elapsed < 30, f"<= {tol:g} relative, < 30 s",
                   f"{elapsed:.2f} s")


def _chk_abel_even(cfg):
    g = cfg.group()
    f = _test_profile(cfg)
    t = np.linspace(0.1, 4, 12)
    fwd, bwd = abel_forward(f, t, g), abel_forward(f, -t, g)
    err = float(np.max(np.abs(fwd - bwd)) / np.max(np.abs(fwd)))
    tol = _tol(cfg, 1e-6)
    return _Result(err, err <= tol, f"<= {tol:g} relative")


def _chk_fourier_gaussian(cfg):
    s = np.linspace(0, 6, 13)
    got = fourier_line(lambda x: np.exp(-x * x), s, support=(-7.0, 7.0))
    err = float(np.max(np.abs(got - np.sqrt(np.pi) * np.exp(-s * s / 4))))
    tol = _tol(cfg, 1e-8)
    return _Result(err, err <= tol, f"<= {tol:g}")


def _chk_two_route(cfg):
    g = cfg.group()
    f = _test_profile(cfg)
    F = abel_profile_of(f, g)
    worst, rows = 0.0, []
    for lam in cfg.lambdas:
        res = spherical_transform(f, lam, g, route="both", abel_values=F)
        worst = max(worst, res.rel_err)
        rows.append(f"{_complex_str(lam)}:{res.rel_err:.1e}")
    tol = _tol(cfg, 1e-3)
    return _Result(worst, worst <= tol, f"<= {tol:g} relative", " ".join(rows))


def _chk_spherical_inverse(cfg):
    g = cfg.group()
    m = heat_spectral(0.5)
    f = spherical_inverse(m, g)
    errs = [abs(spherical_transform(f, lam, g) - m.func(lam)) / abs(m.func(lam))
            for lam in (0.0, 0.5, 1.0, 2.0)]
    worst = float(max(errs))
    tol = _tol(cfg, 1e-3)
    return _Result(worst, worst <= tol, f"<= {tol:g} relative")


# spherical

def _chk_closed_form(cfg):
    g = GroupParams(2, 0)
    r = np.linspace(0, 20, 401)[1:]
    worst = 0.0
    for lam in (0.5, 1.0, 2.0, 0.3j):
        exact = np.sin(lam * r) / (2 * lam * np.sinh(r / 2))
        worst = max(worst, float(np.max(np.abs(phi(lam, r, g) - exact))))
    tol = _tol(cfg, 1e-8)
    return _Result(worst, worst <= tol, f"<= {tol:g}", "preset (2,0)")


def _chk_trivial_phi(cfg):
    r = np.linspace(0, 25, 251)
    worst = 0.0
    groups = {cfg.group(), *(model.preset(k) for k in PRESETS)}
    for g in groups:
        worst = max(worst, float(np.max(np.abs(phi(0.5j * g.Q, r, g) - 1))))
    tol = _tol(cfg, 1e-10)
    return _Result(worst, worst <= tol, f"<= {tol:g}")


def _chk_phi0_bound(cfg):
    g = cfg.group()
    coarse = check_phi0_bound(g, np.linspace(0, 25, 251)[1:])
    fine = check_phi0_bound(g, np.linspace(0, 25, 501)[1:])
    return _stable_result(coarse, fine, "fitted constant")


def _chk_lemma21(cfg):
    g = cfg.group()
    worst_a, worst_b, rows = 0.0, 0.0, []
    lams = [0.0, 1.0, 0.25j * g.Q, 0.5j * g.Q, 1.0 + 0.25j * g.Q]
    lams += [z for z in map(complex, cfg.lambdas) if abs(z.imag) <= g.Q / 2 and z not in lams]
    for lam in lams:
        a = check_lemma21_bound(lam, g, np.linspace(0, 25, 251)[1:])
        b = check_lemma21_bound(lam, g, np.linspace(0, 25, 501)[1:])
        if not _stable(a, b):
            return _Result(b, False, f"<{STABILITY_FACTOR:g}x under grid doubling",
                           f"lambda={_complex_str(lam)}: {a:.4g} -> {b:.4g}")
        worst_a, worst_b = max(worst_a, a), max(worst_b, b)
        rows.append(f"{_complex_str(lam)}:{b:.3g}")
    res = _stable_result(worst_a, worst_b, "max constant")
    res.detail += " | " + " ".join(rows)
    return res


def _chk_eigen_residual(cfg):
    g = cfg.group()
    r = np.linspace(0.5, 10, 39)
    res = float(np.max(radial_eigen_residual(1.0, r, g)))
    tol = _tol(cfg, 1e-6)
    return _Result(res, res <= tol, f"<= {tol:g}", "lambda=1")


# multiplier

def _chk_partition(cfg):
    cut = CutoffFamily()
    t = np.linspace(-50, 50, 20001)
    err = float(np.max(np.abs(cut.partition_sum(t) - 1)))
    tol = _tol(cfg, 1e-12)
    return _Result(err, err <= tol, f"<= {tol:g}")


def _chk_piece_sum(cfg):
    cut = CutoffFamily()
    M = cfg.multiplier()
    t = np.linspace(0, 30, 3001)
    total = (cut.eta() * M.hat)(t) + sum(dyadic_piece(M, cut, h)(t) for h in range(3, 40))
    err = float(np.max(np.abs(total - M.hat(t))) / np.max(np.abs(M.hat(t))))
    tol = _tol(cfg, 1e-10)
    return _Result(err, err <= tol, f"<= {tol:g} relative")


def _chk_local_support(cfg):
    g = cfg.group()
    ell = local_kernel(cfg.multiplier(), CutoffFamily(), g)
    r = np.linspace(0, 6, 601)
    v = np.abs(ell(r))
    ratio = float(np.max(v[r > 2.2]) / np.max(v))
    tol = 1e-6
    return _Result(ratio, ratio <= tol, f"|l(r)|/peak <= {tol:g} for r > 2.2")


def _chk_piece_support(cfg):
    g = cfg.group()
    M, cut = cfg.multiplier(), CutoffFamily()
    worst, rows = 0.0, []
    for h in range(4, 13):
        k = kernel_kh(M, cut, h, g)
        r = np.linspace(0, h + 3, 40 * (h + 3) + 1)
        v = np.abs(k(r))
        outside = (r >= h) | (r <= h - 2) if g.even_center else (r >= h)
        ratio = float(np.max(v[outside]) / np.max(v)) if np.max(v) > 0 else 0.0
        worst = max(worst, ratio)
        rows.append(f"{h}:{ratio:.1e}")
    tol = 1e-12 if g.even_center else 1e-8
    return _Result(worst, worst <= tol, f"outside/peak <= {tol:g}", " ".join(rows))


def _all_pq(beta: int) -> list[tuple[int, int]]:
    return [(p, q) for p in range(beta + 1) for q in range(beta + 1) if 1 <= p + q <= min(beta, 3)]


def _chk_dphhat(cfg):
    g = cfg.group()
    ctx = cfg.context(g)
    M, cut = cfg.multiplier(), CutoffFamily()
    pq = _all_pq(ctx.beta)
    worst = 0.0
    for h in (5, 10, 15):
        a = dphhat_bound_check(M, cut, h, ctx, pq, n=200)
        b = dphhat_bound_check(M, cut, h, ctx, pq, n=400)
        for key in pq:
            if a[key] == 0 and b[key] == 0:
                continue
            if not _stable(a[key], b[key]):
                return _Result(b[key], False, "finite, stable under grid doubling",
                               f"h={h} (p,q)={key}: {a[key]:.4g} -> {b[key]:.4g}")
            worst = max(worst, b[key])
    return _Result(worst, True, "finite, stable under grid doubling",
                   f"h in (5,10,15), {len(pq)} (p,q) pairs")


def _decay_table(cfg) -> list[list[float]]:
    g = cfg.group()
    ctx = cfg.context(g)
    M, cut = cfg.multiplier(), CutoffFamily()
    return [[h, weighted_l1_norm(kernel_kh(M, cut, h, g), ctx)]
            for h in range(cfg.h_min, cfg.h_max + 1)]


def _chk_decay(cfg):
    table = _decay_table(cfg)
    slope, _, resid = decay_fit(table)
    bound = 1 - cfg.beta + 0.3
    return _Result(slope, slope <= bound, f"slope <= {bound:g}",
                   f"{cfg.family}, h={cfg.h_min}..{cfg.h_max}, rms {resid:.3g}", table=table)


def _chk_reconstruction(cfg):
    g = cfg.group()
    M, cut = cfg.multiplier(), CutoffFamily()
    H_top = min(cfg.h_max, 20)
    r = np.linspace(0, H_top - 2, 20 * (H_top - 2) + 1)
    K = full_kernel(M, g)(r)
    acc = local_kernel(M, cut, g)(r)
    # errors are relative to the largest summand: the pieces cancel to the much smaller K
    scale = max(float(np.max(np.abs(K))), float(np.max(np.abs(acc))))
    errs = []
    for H in range(3, H_top + 1):
        piece = kernel_kh(M, cut, H, g)(r)
        scale = max(scale, float(np.max(np.abs(piece))))
        acc = acc + piece
        mask = r <= H - 2
        errs.append(float(np.max(np.abs(acc[mask] - K[mask]))))
    errs = [e / scale for e in errs]
    floor = 1e-11
    ok = errs[-1] <= floor
    for a, b in zip(errs, errs[1:]):
        if a > floor and b > a / 2:
            ok = False
    detail = " ".join(f"{e:.1e}" for e in errs)
    return _Result(errs[-1], ok, f"halving per H until <= {floor:g}", detail)


def _chk_horm(cfg):
    g = cfg.group()
    ctx = cfg.context(g)
    rep = local_multiplier_horm_check(cfg.multiplier(), ctx)
    ok = rep.stable
    return _Result(max(rep.val0_fine, rep.val_inf_fine), ok,
                   f"finite, (s0,s_inf)=({rep.s0},{rep.s_inf}), stable under doubling",
                   f"val0 {rep.val0:.4g}->{rep.val0_fine:.4g}, "
                   f"val_inf {rep.val_inf:.4g}->{rep.val_inf_fine:.4g}")


# region

def _chk_region_examples(cfg):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ctx = MultiplierContext(GroupParams(2, 0), 2.0, 4.0)
    got = (bool(parabolic_region_contains(1, 0, ctx)), bool(parabolic_region_contains(0.5, 0, ctx)))
    return _Result(None, got == (True, False), "(1,0) inside, (0.5,0) outside",
                   f"alpha=2, p=4: {got}")


def _chk_equivalence(cfg):
    ctx = cfg.context()
    rng = np.random.default_rng(cfg.seed)
    scale = max(1.0, cfg.alpha**2)
    mismatches = tested = 0
    while tested < cfg.samples:
        w = complex(rng.uniform(-2, 4) * scale, rng.uniform(-3, 3) * scale)
        try:
            res = resolvent_pole_strip_test(w, ctx)
        except IndeterminateError:
            continue
        tested += 1
        mismatches += not res.agree
    return _Result(mismatches, mismatches == 0 and tested >= 50, "0 mismatches over >= 50 points",
                   f"{tested} points, seed {cfg.seed}")


def _chk_strip(cfg):
    ctx = cfg.context()
    M = cfg.multiplier()
    try:
        C = strip_class_check(M, ctx)
    except NotInStripClass as exc:
        return _Result(None, False, "finite constant", f"not in class: {exc}")
    return _Result(C, math.isfinite(C), "finite constant", f"{M.family} {M.params}")


def _chk_strip_consistency(cfg):
    ctx = cfg.context()
    W = ctx.W
    bad = []
    for c in W * np.array([0.3, 0.6, 0.9, 1.1, 1.5, 2.0, 3.0]):
        M = resolvent_exp_multiplier(float(c), cfg.alpha)
        try:
            strip_class_check(M, ctx, S=20.0, n=401)
            in_class = True
        except NotInStripClass:
            in_class = False
        poles = resolvent_pole_strip_test(cfg.alpha**2 / 4 - c * c, ctx).poles_in_strip
        if in_class == poles:
            bad.append(f"c={c:.3g}")
    return _Result(len(bad), not bad, "strip check fails iff poles in strip", " ".join(bad))


_GEOMETRY = [
    _Check("radius_log_a", "radius of (0,0,a) equals |log a|", _chk_radius_log_a),
    _Check("ball_norm", "Cayley image lies in the unit ball", _chk_ball_norm),
    _Check("radius_a_bounds", "exp(-r) <= a <= exp(r)", _chk_radius_a_bounds),
    _Check("density_bound", "A(r) <~ (r/(1+r))^(n-1) exp(Qr)", _chk_density_bound),
    _Check("modular", "left Haar = modular function x right Haar", _chk_modular),
]
_ABEL = [
    _Check("abel_roundtrip", "inverse Abel formula (parity branch)", _chk_abel_roundtrip),
    _Check("abel_even", "Abel transform of a radial function is even", _chk_abel_even),
]
_TRANSFORMS = _ABEL + [
    _Check("fourier_gaussian", "Gaussian Fourier pair", _chk_fourier_gaussian),
    _Check("two_route", "spherical transform = Fourier o Abel", _chk_two_route),
    _Check("spherical_inverse", "inverse spherical transform = inverse Abel o inverse Fourier",
           _chk_spherical_inverse),
]
_SPHERICAL = [
    _Check("closed_form", "closed-form spherical function on (2,0)", _chk_closed_form),
    _Check("trivial_phi", "phi at lambda = iQ/2 is constant 1", _chk_trivial_phi),
    _Check("phi0_bound", "phi_0(r) <~ (1+r) exp(-Qr/2)", _chk_phi0_bound),
    _Check("lemma21_bound", "|phi_lambda| <~ exp(|Im lambda| r)(1+r)exp(-Qr/2)", _chk_lemma21),
    _Check("eigen_residual", "radial eigen-equation residual", _chk_eigen_residual),
]
_MULTIPLIER = [
    _Check("partition", "integer translates of omega sum to 1", _chk_partition),
    _Check("piece_sum", "local + dyadic pieces reassemble the Fourier profile", _chk_piece_sum),
    _Check("local_support", "local kernel supported in the ball of radius 2", _chk_local_support),
    _Check("piece_support", "dyadic kernel supports", _chk_piece_support),
    _Check("dphhat_bound", "derivative bound on dyadic pieces", _chk_dphhat),
    _Check("weighted_l1_decay", "weighted L1 norm of k_h <~ h^(1-beta)", _chk_decay),
    _Check("reconstruction", "local + global kernels reassemble the full kernel",
           _chk_reconstruction),
    _Check("horm_local", "local symbol in the mixed Mihlin-Hormander class", _chk_horm),
]
_REGION = [
    _Check("region_examples", "parabolic region membership", _chk_region_examples),
    _Check("pole_region_equivalence", "poles in strip iff w in parabolic region", _chk_equivalence),
    _Check("strip_class", "multiplier in the strip class", _chk_strip),
    _Check("strip_pole_consistency", "strip failure iff resolvent poles in strip",
           _chk_strip_consistency),
]

SUITES: dict[str, list[_Check]] = {
    "geometry": _GEOMETRY,
    "abel": _ABEL,
    "transforms": _TRANSFORMS,
    "spherical": _SPHERICAL,
    "multiplier": _MULTIPLIER,
    "region": _REGION,
    "kernel": [_MULTIPLIER[5]],
    "paper-core": _GEOMETRY + _TRANSFORMS + _SPHERICAL + _MULTIPLIER + _REGION,
}


def _run_check(check: _Check, cfg: SuiteConfig) -> CheckRecord:
    start = time.perf_counter()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = check.func(cfg)
        rec = CheckRecord(check.name, check.estimate, res.measured, res.tolerance, res.passed,
                          detail=res.detail, table=res.table)
    except Exception as exc:  # recorded, never fatal to the suite
        tb = traceback.extract_tb(exc.__traceback__)[-1]
        rec = CheckRecord(check.name, check.estimate, None, "-", False,
                          detail=f"{type(exc).__name__}: {exc} ({Path(tb.filename).name}:{tb.lineno})")
    rec.runtime = time.perf_counter() - start
    return rec


def run_suite(cfg: SuiteConfig, checks: list[str] | None = None, progress=None) -> VerificationReport:
    """Run the suite named in ``cfg`` (or only the listed check names)."""
    if cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose from {sorted(SUITES)}")
    selected = SUITES[cfg.suite]
    if checks is not None:
        known = {c.name for c in selected}
        missing = [c for c in checks if c not in known]
        if missing:
            raise ConfigError(f"unknown checks for suite {cfg.suite!r}: {missing}")
        selected = [c for c in selected if c.name in checks]
    report = VerificationReport(cfg.suite, cfg.to_dict(),
                                timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"))
    for check in selected:
        rec = _run_check(check, cfg)
        report.records.append(rec)
        if progress is not None:
            progress(rec)
    return report


# ---------------------------------------------------------------------------
# config files

_CONFIG_KEYS = {f.name for f in fields(SuiteConfig)}
_ALIASES = {"mv": "m_v", "mz": "m_z", "hmax": "h_max", "hmin": "h_min", "rmax": "r_max"}


def _convert(key: str, raw: str):
    if key in ("preset", "family", "suite", "profile"):
        return raw
    if key in ("m_v", "m_z", "beta", "h_min", "h_max", "seed", "samples"):
        return int(raw)
    if key == "lambdas":
        return tuple(complex(x.strip()) if "j" in x else float(x) for x in raw.split(",") if x.strip())
    return float(raw)


def parse_config_file(path) -> dict:
    """Read ``key = value`` lines (``#`` comments) into SuiteConfig keyword arguments."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        key = _ALIASES.get(key, key)
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _convert(key, value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def make_config(base: dict | None = None, **overrides) -> SuiteConfig:
    """Build a config from file values with non-None overrides applied on top."""
    kw = dict(base or {})
    given = {k: v for k, v in overrides.items() if v is not None}
    if "preset" in given:
        kw.pop("m_v", None)
        kw.pop("m_z", None)
    elif "m_v" in given or "m_z" in given:
        kw["preset"] = None
    elif "preset" not in kw and ("m_v" in kw or "m_z" in kw):
        kw["preset"] = None
    kw.update(given)
    try:
        return SuiteConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
