"""Experiment configuration and the batch runs behind the command line.

A configuration is a JSON document merged over ``DEFAULTS``; ``--set``
overrides and explicit flags are merged on top (flags > file > defaults).
``run`` performs sampling and reconstruction, ``verify_suite`` runs every
checker.  Both return a ``RunArtifacts`` of named JSON reports and CSV
tables.  Each report carries a ``guarantee`` flag: only guaranteed checks
decide the exit status; the rest are diagnostics.
"""
from __future__ import annotations

import ast
import copy
import json
import math
import operator
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, NamedTuple, Optional

import numpy as np

from .errors import ConfigError, NoConvergence, PWError, PoleError, SlowDecay
from .lattice import BandParameters, GridFunction, max_holomorphicity_residual
from .sampling import (
    SamplingSet,
    approximation_bounds_check,
    bernstein_check,
    beurling_lower_density,
    bound_ratio,
    density_trajectory,
    full_set,
    gaps,
    necessary_condition,
    random_gaps_set,
    reconstruct,
    sample,
    sampling_inequality_check,
    sufficient_condition,
    two_progression_set,
    wirtinger_check,
)
from .spectral import (
    CheckResult,
    PWFunction,
    SpectralFunction,
    anchor_identity_check,
    bump_spectrum,
    decimate_check,
    growth_envelope_check,
    indicator_spectrum,
    isometry_check,
    kernel,
    kernel_closed_form,
    plancherel_polya_check,
    random_smooth_spectrum,
    reproduce,
    single_frequency_spectrum,
    synthesize,
)

__all__ = [
    "DEFAULTS",
    "POLE_MARGIN",
    "GROWTH_LIMIT",
    "ExperimentConfig",
    "Table",
    "RunArtifacts",
    "parse_real",
    "load_config",
    "build_band",
    "build_spectrum",
    "build_sampling_set",
    "run",
    "verify_suite",
]

# alpha closer than this to pi/2 is rejected as a pole of the discrete exponential
POLE_MARGIN = 1e-2
# largest admissible growth_base ** max|n| over the window; beyond it the top
# layers carry no significant digits of the height-0 data
GROWTH_LIMIT = 1e12

F_KINDS = ("bump", "indicator", "single_frequency", "custom_grid", "random")
LAMBDA_KINDS = ("full", "two_progression", "random_gaps", "explicit")
RUN_OUTPUTS = ("reconstruction", "sampling_set", "convergence", "density", "error_vs_delta")

DEFAULTS: dict = {
    "name": "default",
    "alpha": "pi/8",
    "L": 4096,
    "window": [-256, 256, -8, 8],
    "f_spec": {"kind": "bump", "center": 0.0, "halfwidth": None, "sharpness": 8.0, "mirror": False},
    "lambda_spec": {"kind": "two_progression", "delta_e": 4, "delta_o": 4},
    "tol": 1e-9,
    "max_iter": 200,
    "seed": 0,
    "outputs": list(RUN_OUTPUTS),
    "sweep_deltas": [2, 4, 6],
    "r_max": 120,
}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_NAMES = {"pi": math.pi, "e": math.e}


def parse_real(value, field_name: str = "value") -> float:
    """A number, or an arithmetic expression in ``pi`` such as ``"pi/8"``."""
    if isinstance(value, bool):
        raise ConfigError(f"expected a real number, got {value!r}", field_name)
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"expected a real number, got {value!r}", field_name)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ValueError(node)

    try:
        return float(ev(ast.parse(value.strip(), mode="eval")))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError):
        raise ConfigError(f"cannot read {value!r} as a real number", field_name) from None


def _int(value, field_name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(f"expected an integer, got {value!r}", field_name)
    return int(value)


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    alpha: float
    L: int
    window: tuple[int, int, int, int]
    f_spec: dict
    lambda_spec: dict
    tol: float
    max_iter: int
    seed: Optional[int]
    outputs: tuple[str, ...]
    sweep_deltas: tuple[int, ...]
    r_max: int
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        merged = _merge(DEFAULTS, data)
        unknown = sorted(set(merged) - set(DEFAULTS))
        if unknown:
            raise ConfigError(f"unknown key(s) {unknown}", unknown[0])
        alpha = parse_real(merged["alpha"], "alpha")
        if not 0 < alpha < math.pi / 2:
            raise ConfigError(f"alpha must lie in (0, pi/2), got {alpha}", "alpha")
        L = _int(merged["L"], "L")
        if L < 8 or L % 2:
            raise ConfigError(f"L must be even and >= 8, got {L}", "L")
        win = merged["window"]
        if not isinstance(win, (list, tuple)) or len(win) != 4:
            raise ConfigError("window must be [m_min, m_max, n_min, n_max]", "window")
        window = tuple(_int(v, f"window[{i}]") for i, v in enumerate(win))
        if window[1] < window[0] or window[3] < window[2]:
            raise ConfigError(f"empty window {list(window)}", "window")
        if not window[2] <= 0 <= window[3]:
            raise ConfigError("window heights must include n = 0", "window")
        width = window[1] - window[0] + 1
        if L < 4 * width:
            raise ConfigError(f"L={L} is below 4 x window width {width}", "L")
        tol = parse_real(merged["tol"], "tol")
        if not tol > 0:
            raise ConfigError("tol must be positive", "tol")
        max_iter = _int(merged["max_iter"], "max_iter")
        if max_iter < 1:
            raise ConfigError("max_iter must be >= 1", "max_iter")
        seed = merged["seed"]
        if seed is not None:
            seed = _int(seed, "seed")
        outputs = merged["outputs"]
        if not isinstance(outputs, (list, tuple)) or any(o not in RUN_OUTPUTS for o in outputs):
            raise ConfigError(f"outputs must be a list drawn from {list(RUN_OUTPUTS)}", "outputs")
        sweep = tuple(_int(d, "sweep_deltas") for d in merged["sweep_deltas"])
        if any(d < 2 or d % 2 for d in sweep):
            raise ConfigError("sweep_deltas must be even integers >= 2", "sweep_deltas")
        r_max = _int(merged["r_max"], "r_max")
        f_spec = _check_f_spec(merged["f_spec"])
        lambda_spec = _check_lambda_spec(merged["lambda_spec"], seed)
        cfg = cls(str(merged["name"]), alpha, L, window, f_spec, lambda_spec, tol, max_iter, seed,
                  tuple(outputs), sweep, r_max, raw=merged)
        _check_pole(cfg)
        return cfg

    def to_dict(self) -> dict:
        return {"name": self.name, "alpha": self.alpha, "L": self.L, "window": list(self.window),
                "f_spec": self.f_spec, "lambda_spec": self.lambda_spec, "tol": self.tol,
                "max_iter": self.max_iter, "seed": self.seed, "outputs": list(self.outputs),
                "sweep_deltas": list(self.sweep_deltas), "r_max": self.r_max}


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in over.items():
        if key in ("f_spec", "lambda_spec") and isinstance(val, dict):
            cur = out.get(key) or {}
            # a different kind starts from a clean parameter set
            out[key] = dict(val) if val.get("kind", cur.get("kind")) != cur.get("kind") else {**cur, **val}
        else:
            out[key] = copy.deepcopy(val)
    return out


def _check_f_spec(spec) -> dict:
    if not isinstance(spec, dict) or spec.get("kind") not in F_KINDS:
        raise ConfigError(f"f_spec.kind must be one of {list(F_KINDS)}", "f_spec.kind")
    spec = dict(spec)
    kind = spec["kind"]
    if kind == "bump":
        spec["center"] = parse_real(spec.get("center", 0.0), "f_spec.center")
        if spec.get("halfwidth") is not None:
            spec["halfwidth"] = parse_real(spec["halfwidth"], "f_spec.halfwidth")
            if spec["halfwidth"] <= 0:
                raise ConfigError("halfwidth must be positive", "f_spec.halfwidth")
        spec["sharpness"] = parse_real(spec.get("sharpness", 8.0), "f_spec.sharpness")
        spec["mirror"] = bool(spec.get("mirror", False))
    elif kind == "single_frequency":
        if "t0" not in spec:
            raise ConfigError("single_frequency needs t0", "f_spec.t0")
        spec["t0"] = parse_real(spec["t0"], "f_spec.t0")
    elif kind == "custom_grid":
        if ("values" in spec) == ("path" in spec):
            raise ConfigError("custom_grid needs exactly one of values or path", "f_spec.values")
    elif kind == "random":
        spec["n_components"] = _int(spec.get("n_components", 3), "f_spec.n_components")
        spec["sharpness"] = parse_real(spec.get("sharpness", 8.0), "f_spec.sharpness")
    return spec


def _check_lambda_spec(spec, seed) -> dict:
    if not isinstance(spec, dict) or spec.get("kind") not in LAMBDA_KINDS:
        raise ConfigError(f"lambda_spec.kind must be one of {list(LAMBDA_KINDS)}", "lambda_spec.kind")
    spec = dict(spec)
    kind = spec["kind"]
    if kind in ("two_progression", "random_gaps"):
        for key in ("delta_e", "delta_o"):
            if key not in spec:
                raise ConfigError(f"{kind} needs {key}", f"lambda_spec.{key}")
            d = _int(spec[key], f"lambda_spec.{key}")
            if d < 2 or d % 2:
                raise ConfigError(f"{key} must be an even integer >= 2", f"lambda_spec.{key}")
            spec[key] = d
    if kind == "two_progression":
        spec["offset_e"] = _int(spec.get("offset_e", 0), "lambda_spec.offset_e")
        spec["offset_o"] = _int(spec.get("offset_o", 1), "lambda_spec.offset_o")
    if kind == "random_gaps":
        if spec.get("seed") is None:
            if seed is None:
                raise ConfigError("random_gaps needs a seed", "lambda_spec.seed")
            spec["seed"] = seed
        spec["seed"] = _int(spec["seed"], "lambda_spec.seed")
    if kind == "explicit" and not isinstance(spec.get("lambda"), list):
        raise ConfigError("explicit needs a list lambda", "lambda_spec.lambda")
    return spec


def _check_pole(cfg: ExperimentConfig) -> None:
    gap = math.pi / 2 - cfg.alpha
    if gap < POLE_MARGIN:
        raise PoleError(f"[{cfg.name}] alpha: {cfg.alpha} lies {gap:.3e} from the pole pi/2")
    base = math.cos(cfg.alpha) / (1 - math.sin(cfg.alpha))
    top = max(abs(cfg.window[2]), abs(cfg.window[3]))
    if top and top * math.log10(base) > math.log10(GROWTH_LIMIT):
        raise PoleError(f"[{cfg.name}] alpha: growth base {base:.4g} to the power {top} exceeds "
                        f"{GROWTH_LIMIT:.0e}; alpha is too close to the pole pi/2 for this window")


def _parse_override(text: str):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise ConfigError(f"override {text!r} is not KEY=VALUE", "--set")
    try:
        parsed = json.loads(value)
    except json.JSONDecodeError:
        parsed = value
    return key.strip(), parsed


def load_config(path=None, overrides=(), seed: Optional[int] = None) -> ExperimentConfig:
    """Defaults, then the JSON file at ``path``, then ``KEY=VALUE`` overrides
    (dotted keys reach into f_spec / lambda_spec), then ``seed``."""
    data: dict = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}", "--config") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}", "--config") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object", "--config")
    data = _merge(DEFAULTS, data)
    for text in overrides:
        key, value = _parse_override(text)
        parts = key.split(".")
        if len(parts) == 1:
            data = _merge(data, {key: value})
        elif len(parts) == 2 and parts[0] in ("f_spec", "lambda_spec"):
            data = _merge(data, {parts[0]: {**data[parts[0]], parts[1]: value}})
        else:
            raise ConfigError(f"cannot override {key!r}", key)
    if seed is not None:
        data["seed"] = seed
        if data["lambda_spec"].get("kind") == "random_gaps":
            data["lambda_spec"] = {**data["lambda_spec"], "seed": seed}
    return ExperimentConfig.from_dict(data)


# -- builders ---------------------------------------------------------------

@contextmanager
def _context(cfg: ExperimentConfig, field_name: str):
    """Prefix module errors with the experiment name and the responsible config field."""
    try:
        yield
    except ConfigError:
        raise
    except PWError as exc:
        exc.experiment, exc.field = cfg.name, field_name
        if exc.args and isinstance(exc.args[0], str) and not exc.args[0].startswith("["):
            exc.args = (f"[{cfg.name}] {field_name}: {exc.args[0]}",) + exc.args[1:]
        raise


def build_band(cfg: ExperimentConfig) -> BandParameters:
    return BandParameters(cfg.alpha)


def build_spectrum(cfg: ExperimentConfig, band: BandParameters) -> tuple[SpectralFunction, bool]:
    """The spectral test function and whether it is smooth (rapidly decreasing F)."""
    spec = cfg.f_spec
    kind = spec["kind"]
    try:
        if kind == "bump":
            hw = spec.get("halfwidth")
            c = spec["center"]
            dist = min(abs(c), abs(abs(c) - math.pi))
            if hw is not None and dist + hw > band.alpha + 1e-12:
                raise ConfigError(f"bump support {dist}+{hw} leaves D_alpha", "f_spec.halfwidth")
            amp = complex(*spec["amplitude"]) if isinstance(spec.get("amplitude"), list) else complex(spec.get("amplitude", 1.0))
            return bump_spectrum(cfg.L, band, c, hw, spec["sharpness"], amp, spec["mirror"]), True
        if kind == "indicator":
            return indicator_spectrum(cfg.L, band), False
        if kind == "single_frequency":
            return single_frequency_spectrum(cfg.L, band, spec["t0"]), False
        if kind == "random":
            rng = np.random.default_rng(spec.get("seed", cfg.seed))
            return random_smooth_spectrum(rng, cfg.L, band, spec["n_components"], spec["sharpness"]), True
        # custom_grid
        if "path" in spec:
            data = json.loads(Path(spec["path"]).read_text())
            pairs = np.asarray(data["values"] if isinstance(data, dict) else data, dtype=float)
        else:
            pairs = np.asarray(spec["values"], dtype=float)
        pairs = pairs.reshape(-1, 2)
        if pairs.shape[0] != cfg.L:
            raise ConfigError(f"expected {cfg.L} values, got {pairs.shape[0]}", "f_spec.values")
        return SpectralFunction(cfg.L, pairs[:, 0] + 1j * pairs[:, 1], band), bool(spec.get("smooth", False))
    except ConfigError:
        raise
    except (ValueError, OSError, KeyError, TypeError) as exc:
        if isinstance(exc, PWError):
            raise
        raise ConfigError(str(exc), f"f_spec.{kind}") from None


def build_sampling_set(cfg: ExperimentConfig, spec: Optional[dict] = None) -> SamplingSet:
    spec = cfg.lambda_spec if spec is None else spec
    kind = spec["kind"]
    win = cfg.window[:2]
    try:
        if kind == "full":
            return full_set(win)
        if kind == "two_progression":
            return two_progression_set(win, spec["delta_e"], spec["delta_o"],
                                       spec.get("offset_e", 0), spec.get("offset_o", 1))
        if kind == "random_gaps":
            return random_gaps_set(np.random.default_rng(spec["seed"]), win, spec["delta_e"], spec["delta_o"])
        return gaps(spec["lambda"], win, pattern="explicit")
    except (PWError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), "lambda_spec") from None


# -- artifacts --------------------------------------------------------------

class Table(NamedTuple):
    columns: tuple[str, ...]
    rows: list


@dataclass
class RunArtifacts:
    """Named JSON reports and CSV tables of one run.

    ``grid`` keeps the synthesized function for the heat-map figure.
    """

    reports: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    grid: Optional[GridFunction] = None

    @property
    def failures(self) -> list[str]:
        return [name for name, rep in self.reports.items()
                if isinstance(rep, dict) and rep.get("guarantee") and rep.get("ok") is False]

    @property
    def ok(self) -> bool:
        return not self.failures


def _check_report(result: CheckResult, guarantee: bool, **extra) -> dict:
    out = result.to_dict()
    out["guarantee"] = bool(guarantee)
    out.update(extra)
    return out


def _setup(cfg: ExperimentConfig):
    band = build_band(cfg)
    f, smooth = build_spectrum(cfg, band)
    with _context(cfg, "f_spec"):
        F = synthesize(f, cfg.window)
    return band, f, smooth, F


def _reconstruction_row(F, s, band, cfg):
    try:
        _, rep = reconstruct(sample(F, s), s, band, cfg.L, cfg.tol, cfg.max_iter, reference=F)
    except NoConvergence as exc:
        rep = exc.report
    return rep


def run(cfg: ExperimentConfig) -> RunArtifacts:
    """Sample the configured function on Lambda and reconstruct it."""
    band, f, smooth, F = _setup(cfg)
    s = build_sampling_set(cfg)
    art = RunArtifacts(grid=F.grid)
    guarantee = sufficient_condition(s, band)
    with _context(cfg, "lambda_spec"):
        _, rep = reconstruct(sample(F, s), s, band, cfg.L, cfg.tol, cfg.max_iter,
                             heights=(0, 0), reference=F)
    if "reconstruction" in cfg.outputs:
        doc = rep.to_dict()
        doc.update({
            "name": "reconstruction", "experiment": cfg.name, "seed": cfg.seed,
            "lambda_kind": cfg.lambda_spec["kind"], "smooth": smooth,
            "guarantee": bool(rep.guarantee and smooth),
            "ok": bool(rep.converged and rep.measured_ratio <= rep.bound_ratio * 1.05),
            "sufficient_condition": guarantee, "necessary_condition": necessary_condition(s, band),
        })
        art.reports["reconstruction"] = doc
    if "sampling_set" in cfg.outputs:
        art.reports["sampling_set"] = {**s.to_dict(), "seed": cfg.lambda_spec.get("seed", cfg.seed)}
    if "convergence" in cfg.outputs:
        rows = [(0, rep.residuals[0], None)]
        rows += [(k + 1, r, ratio) for k, (r, ratio) in enumerate(zip(rep.residuals[1:], rep.ratios))]
        art.tables["convergence"] = Table(("iteration", "residual", "ratio"), rows)
    if "density" in cfg.outputs:
        art.reports["density"], art.tables["density"] = _density_outputs(cfg, s, band)
    if "error_vs_delta" in cfg.outputs:
        rows = []
        for d in cfg.sweep_deltas:
            spec = dict(cfg.lambda_spec)
            if spec["kind"] not in ("two_progression", "random_gaps"):
                spec = {"kind": "two_progression"}
            spec.update(delta_e=d, delta_o=d)
            if spec["kind"] == "random_gaps":
                spec.setdefault("seed", cfg.seed)
            sd = build_sampling_set(cfg, spec)
            r = _reconstruction_row(F, sd, band, cfg)
            rows.append((d, sd.delta, r.bound_ratio, r.measured_ratio, r.iterations, r.final_error,
                         r.true_error, int(r.guarantee), int(r.converged)))
        art.tables["error_vs_delta"] = Table(
            ("delta", "delta_actual", "bound_ratio", "measured_ratio", "iterations", "final_error",
             "true_error", "guarantee", "converged"), rows)
    return art


def _density_outputs(cfg: ExperimentConfig, s: SamplingSet, band: BandParameters):
    radius = (s.window[1] - s.window[0]) // 2
    r_max = min(cfg.r_max, radius // 2)
    with _context(cfg, "r_max"):
        dens = beurling_lower_density(s, r_max)
        traj = density_trajectory(s, r_max)
    nominal = 1.0 / s.delta_e + 1.0 / s.delta_o
    slack = 2.0 / (2 * r_max + 1) + 1.0 / r_max
    structured = s.pattern == "two_progression"
    report = {
        "name": "density", "lhs": abs(dens - nominal) if structured else dens,
        "bound": slack if structured else None, "ok": bool(abs(dens - nominal) <= slack) if structured else True,
        "tolerance": slack, "guarantee": structured, "density": dens, "r_max": r_max,
        "nominal": nominal, "necessary_threshold": 2 * band.alpha / math.pi,
        "necessary_condition": necessary_condition(s, band),
        "sufficient_condition": sufficient_condition(s, band),
        "delta_e": s.delta_e, "delta_o": s.delta_o, "pattern": s.pattern,
    }
    return report, Table(("r", "ratio"), list(traj))


def _kernel_report(band: BandParameters, L: int, heights) -> dict:
    worst = 0.0
    diag_exact = True
    for n in heights:
        for k in range(-8, 9):
            q = kernel(((0, n), (k, -n)), band, L)
            worst = max(worst, abs(q - kernel_closed_form(k, band.alpha)))
        diag_exact &= kernel_closed_form(0, band.alpha) == 2 * band.alpha / math.pi
    return {"name": "kernel", "lhs": worst, "bound": 1e-6, "ok": bool(worst <= 1e-6 and diag_exact),
            "tolerance": 1e-6, "guarantee": True, "diagonal_exact": bool(diag_exact),
            "diagonal": kernel_closed_form(0, band.alpha), "k_range": [-8, 8]}


def verify_suite(cfg: ExperimentConfig) -> RunArtifacts:
    """Run every checker on the configured function and sampling set."""
    band, f, smooth, F = _setup(cfg)
    s = build_sampling_set(cfg)
    suff = sufficient_condition(s, band)
    art = RunArtifacts(grid=F.grid)
    R = art.reports
    scale = float(np.max(np.abs(F.grid.values)))
    res = max_holomorphicity_residual(F.grid)
    R["holomorphicity"] = {"name": "holomorphicity", "lhs": res, "bound": 1e-12 * scale,
                           "ok": bool(res <= 1e-12 * scale), "tolerance": 1e-12, "guarantee": True}
    R["isometry"] = _check_report(isometry_check(F, f), smooth)
    heights = sorted({0, 1, cfg.window[3]} | ({cfg.window[2]} if cfg.window[2] < 0 else set()))
    R["kernel"] = _kernel_report(band, cfg.L, heights)

    pts = [(m, n) for m in (-3, 0, 5) for n in heights]
    err = max(abs(reproduce(F, p) - F.grid.at(*p)) / band.growth(p[1]) for p in pts)
    R["reproducing_kernel"] = {"name": "reproducing_kernel", "lhs": err, "bound": 1e-8 * scale,
                               "ok": bool(err <= 1e-8 * scale), "tolerance": 1e-8, "guarantee": smooth,
                               "points": [list(p) for p in pts]}

    worst, eq0 = 0.0, 0.0
    pp_ok = True
    for n in range(cfg.window[2], cfg.window[3] + 1):
        c = plancherel_polya_check(F, n)
        pp_ok &= c.ok
        worst = max(worst, c.lhs / c.bound if c.bound > 0 else 0.0)
        if n == 0:
            eq0 = abs(c.lhs - c.bound) / c.bound if c.bound > 0 else 0.0
    R["plancherel_polya"] = {"name": "plancherel_polya", "lhs": worst, "bound": 1.0,
                             "ok": bool(pp_ok and eq0 <= 1e-10), "tolerance": 1e-8, "guarantee": smooth,
                             "equality_at_0": eq0}
    for order in (1, 2):
        R[f"bernstein_order{order}"] = _check_report(bernstein_check(F, order), smooth)

    rng = np.random.default_rng(cfg.seed)
    w_ok, w_worst = True, 0.0
    for _ in range(200):
        N = int(rng.integers(3, 65))
        x = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
        x[0] = x[-1] = 0
        c = wirtinger_check(x)
        w_ok &= c.ok
        w_worst = max(w_worst, c.lhs / c.bound)
    hat = wirtinger_check([0.0, 1.0, 0.0])
    R["wirtinger"] = {"name": "wirtinger", "lhs": w_worst, "bound": 1.0,
                      "ok": bool(w_ok and abs(hat.lhs - hat.bound) <= 1e-12), "tolerance": 1e-12,
                      "guarantee": True, "hat_lhs": hat.lhs, "hat_rhs": hat.bound, "trials": 200}

    for n in (1, 2, 3):
        if n > cfg.window[3]:
            continue
        try:
            R[f"anchor_identity_n{n}"] = _check_report(anchor_identity_check(F, n), smooth)
        except SlowDecay as exc:
            R[f"anchor_identity_n{n}"] = {"name": "anchor_identity", "lhs": None, "bound": None, "ok": False,
                                          "guarantee": False, "note": str(exc)}
    for parity in ("even", "odd"):
        R[f"decimation_{parity}"] = _check_report(decimate_check(F, parity), smooth)
    R["density"], art.tables["density"] = _density_outputs(cfg, s, band)

    ratios = sampling_inequality_check(F, s)
    rho = bound_ratio(band.alpha, s.delta)
    frame_lower = (1 - rho) ** 2 / (4 * s.delta) if rho < 1 else 0.0
    R["sampling_inequality"] = {
        "name": "sampling_inequality", "lhs": ratios.lower_ratio, "bound": frame_lower,
        "ok": bool(ratios.ok and (ratios.zero_function or ratios.lower_ratio >= frame_lower)),
        "tolerance": 1e-10, "guarantee": bool(smooth and suff), "upper_ratio": ratios.upper_ratio,
        "upper_ok": bool(ratios.ok), "zero_function": ratios.zero_function}
    a1, a2 = approximation_bounds_check(F, s)
    R["approximation_A1"] = _check_report(a1, smooth)
    R["approximation_A2"] = _check_report(a2, smooth and suff)
    eps = min(0.1, (math.pi / 2 - band.alpha) / 2)
    R["growth_envelope"] = _check_report(growth_envelope_check(F, 4, eps), False)

    guaranteed = [r for r in R.values() if r.get("guarantee")]
    R["summary"] = {"name": "summary", "experiment": cfg.name, "seed": cfg.seed, "smooth": smooth,
                    "sufficient_condition": suff, "checks": len(R), "guaranteed": len(guaranteed),
                    "failures": art.failures, "ok": art.ok, "guarantee": False}
    art.tables["checks"] = Table(("name", "lhs", "bound", "ok", "guarantee"),
                                 [(k, r.get("lhs"), r.get("bound"), int(bool(r.get("ok"))),
                                   int(bool(r.get("guarantee")))) for k, r in R.items() if k != "summary"])
    return art
