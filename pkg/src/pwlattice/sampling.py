"""Nonuniform sampling of PW_alpha at height 0 and iterative reconstruction.

A sampling set Lambda is split into its even points p_k and odd points q_k.
The interpolation operator T joins consecutive samples of each parity by
straight lines, P is the orthogonal projection onto PW_alpha, and A = P T.
When max(delta_e, delta_o) < pi / alpha the operator I - A is a contraction
with norm at most sin^2(alpha) / sin^2(pi / delta), so the Neumann series

    phi_0 = A F,   phi_{k+1} = phi_k - A phi_k,   F = sum_k phi_k

recovers F from its samples.

Finite windows.  Every parity class must contain the first and last point of
its parity inside the window, so that every interpolation cell is interior.
The iteration runs on the L-periodic line of the spectral model; the columns
outside the window are treated as sampled with value 0 (a truncation prior),
which keeps A an operator on the periodic model with the same contraction
bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    BadEndpoints,
    BoundaryGap,
    CoverageGap,
    EmptyParity,
    GridTooCoarse,
    LengthMismatch,
    NoConvergence,
    OutOfWindow,
    WindowTooSmall,
)
from .lattice import BandParameters
from .spectral import (
    CheckResult,
    PWFunction,
    _coefficients_to_grid,
    _layer_from_coefficients,
    _layer_spectrum,
    project,
)

__all__ = [
    "SamplingSet",
    "ReconstructionReport",
    "SamplingRatios",
    "gaps",
    "two_progression_set",
    "random_gaps_set",
    "full_set",
    "sufficient_condition",
    "necessary_condition",
    "bound_ratio",
    "beurling_lower_density",
    "density_trajectory",
    "sample",
    "interpolate_T",
    "approx_A",
    "reconstruct",
    "sampling_inequality_check",
    "approximation_bounds_check",
    "bernstein_check",
    "wirtinger_check",
]


def _layer_range(window) -> tuple[int, int]:
    m_min, m_max = int(window[0]), int(window[1])
    if m_max < m_min:
        raise ValueError(f"empty window {window!r}")
    return m_min, m_max


def _parity_edges(m_min: int, m_max: int, parity: int) -> tuple[int, int]:
    first = m_min if m_min % 2 == parity else m_min + 1
    last = m_max if m_max % 2 == parity else m_max - 1
    return first, last


def _max_gap(pts: np.ndarray) -> int:
    return int(np.max(np.diff(pts))) if pts.size > 1 else 0


@dataclass(frozen=True, eq=False)
class SamplingSet:
    """Strictly increasing integers Lambda inside a layer-0 window.

    ``evens``/``odds`` are the parity classes and ``delta_e``/``delta_o``
    their largest consecutive gaps.  ``pattern`` records how the set was
    generated (``"two_progression"`` makes ``necessary_condition`` binding).
    """

    lam: np.ndarray
    window: tuple[int, int]
    evens: np.ndarray
    odds: np.ndarray
    delta_e: int
    delta_o: int
    pattern: Optional[str] = None

    @property
    def delta(self) -> int:
        return max(self.delta_e, self.delta_o)

    def __len__(self) -> int:
        return int(self.lam.size)

    def to_dict(self) -> dict:
        return {"lambda": [int(v) for v in self.lam], "delta_e": self.delta_e,
                "delta_o": self.delta_o, "window": list(self.window), "pattern": self.pattern}

    @classmethod
    def from_dict(cls, data: dict, window=None) -> "SamplingSet":
        lam = data["lambda"]
        if window is None:
            window = data.get("window") or (min(lam), max(lam))
        s = gaps(lam, window, pattern=data.get("pattern"))
        for key in ("delta_e", "delta_o"):
            if key in data and int(data[key]) != getattr(s, key):
                raise ValueError(f"{key}={data[key]} does not match the gaps of lambda ({getattr(s, key)})")
        return s


def gaps(lam, window, pattern: Optional[str] = None) -> SamplingSet:
    """Split ``lam`` by parity and measure the gaps delta_e, delta_o.

    ``window`` is (m_min, m_max) or a full (m_min, m_max, n_min, n_max).
    """
    m_min, m_max = _layer_range(window)
    lam = np.asarray(lam, dtype=np.int64).ravel()
    if lam.size and np.any(np.diff(lam) <= 0):
        raise ValueError("lambda must be strictly increasing")
    if lam.size and (lam[0] < m_min or lam[-1] > m_max):
        raise OutOfWindow(f"lambda leaves the window [{m_min}, {m_max}]")
    classes = []
    for parity, name in ((0, "even"), (1, "odd")):
        pts = lam[lam % 2 == parity]
        if pts.size == 0:
            raise EmptyParity(f"lambda has no {name} points")
        first, last = _parity_edges(m_min, m_max, parity)
        if pts[0] != first or pts[-1] != last:
            raise BoundaryGap(f"{name} points must include the window edges {first} and {last}, "
                              f"got {int(pts[0])} .. {int(pts[-1])}")
        classes.append(pts)
    evens, odds = classes
    for arr in (lam, evens, odds):
        arr.setflags(write=False)
    return SamplingSet(lam, (m_min, m_max), evens, odds, max(_max_gap(evens), 2),
                       max(_max_gap(odds), 2), pattern)


def full_set(window) -> SamplingSet:
    m_min, m_max = _layer_range(window)
    return gaps(np.arange(m_min, m_max + 1), (m_min, m_max), pattern="full")


def two_progression_set(window, delta_e: int, delta_o: int, offset_e: int = 0,
                        offset_o: int = 1, cover_edges: bool = True) -> SamplingSet:
    """(offset_e + delta_e Z) U (offset_o + delta_o Z) restricted to the window.

    Gaps must be even and the offsets of the right parity.  With
    ``cover_edges`` the window-edge points of each parity are added, which
    can only shorten the first and last gap.
    """
    m_min, m_max = _layer_range(window)
    for d, off, parity, name in ((delta_e, offset_e, 0, "delta_e"), (delta_o, offset_o, 1, "delta_o")):
        if d < 2 or d % 2:
            raise ValueError(f"{name} must be an even integer >= 2, got {d}")
        if off % 2 != parity:
            raise ValueError(f"offset for {name} has the wrong parity: {off}")
    ms = np.arange(m_min, m_max + 1)
    keep = ((ms - offset_e) % delta_e == 0) | ((ms - offset_o) % delta_o == 0)
    if cover_edges:
        for parity in (0, 1):
            for edge in _parity_edges(m_min, m_max, parity):
                keep |= ms == edge
    return gaps(ms[keep], (m_min, m_max), pattern="two_progression")


def random_gaps_set(rng: np.random.Generator, window, delta_e: int, delta_o: int) -> SamplingSet:
    """Each parity class walks from its first window point by gaps drawn
    uniformly from {2, 4, ..., delta}, closing on its last window point."""
    m_min, m_max = _layer_range(window)
    pts = []
    for parity, d in ((0, delta_e), (1, delta_o)):
        if d < 2 or d % 2:
            raise ValueError(f"gap bound must be an even integer >= 2, got {d}")
        first, last = _parity_edges(m_min, m_max, parity)
        choices = np.arange(2, d + 1, 2)
        p = first
        pts.append(p)
        while p < last:
            p = min(p + int(rng.choice(choices)), last)
            pts.append(p)
    return gaps(np.sort(np.array(pts)), (m_min, m_max), pattern="random_gaps")


# -- conditions and density -------------------------------------------------

def sufficient_condition(s: SamplingSet, band: BandParameters) -> bool:
    """max(delta_e, delta_o) < pi / alpha."""
    return s.delta < math.pi / band.alpha


def necessary_condition(s: SamplingSet, band: BandParameters) -> bool:
    """1/delta_e + 1/delta_o >= 2 alpha / pi (binding for two-progression sets)."""
    return 1.0 / s.delta_e + 1.0 / s.delta_o >= 2 * band.alpha / math.pi - 1e-12


def bound_ratio(alpha: float, delta: int) -> float:
    """sin^2(alpha) / sin^2(pi / delta), the contraction bound for ||I - A||."""
    return math.sin(alpha) ** 2 / math.sin(math.pi / delta) ** 2


def _density_at(counts: np.ndarray, r: int) -> float:
    # counts[k] = number of Lambda points among the first k window columns
    ball = counts[2 * r + 1:] - counts[: counts.size - 2 * r - 1]
    return float(ball.min()) / (2 * r + 1)


def _cumulative_counts(s: SamplingSet) -> np.ndarray:
    m_min, m_max = s.window
    hit = np.zeros(m_max - m_min + 1, dtype=np.int64)
    hit[s.lam - m_min] = 1
    return np.concatenate([[0], np.cumsum(hit)])


def _check_radius(s: SamplingSet, r_max: int) -> None:
    radius = (s.window[1] - s.window[0]) // 2
    if r_max < 1 or r_max > radius // 2:
        raise WindowTooSmall(f"r_max={r_max} needs 1 <= r_max <= {radius // 2} for window {s.window}")


def beurling_lower_density(s: SamplingSet, r_max: int) -> float:
    """min over balls [m - r_max, m + r_max] inside the window of #(Lambda in ball) / (2 r_max + 1).

    A finite-radius proxy for the lower Beurling density.
    """
    _check_radius(s, r_max)
    return _density_at(_cumulative_counts(s), int(r_max))


def density_trajectory(s: SamplingSet, r_max: int) -> list[tuple[int, float]]:
    """Counting ratios at r = 8, 16, ... up to r_max (r_max itself always included)."""
    _check_radius(s, r_max)
    counts = _cumulative_counts(s)
    radii = list(range(8, r_max + 1, 8))
    if not radii or radii[-1] != r_max:
        radii.append(int(r_max))
    return [(r, _density_at(counts, r)) for r in radii]


# -- the operators T and A --------------------------------------------------

def sample(F: PWFunction, s: SamplingSet) -> np.ndarray:
    """F(lambda, 0) for every lambda in the set."""
    return np.asarray(F.grid.at(s.lam, np.zeros_like(s.lam)))


def interpolate_T(samples, s: SamplingSet, window=None) -> np.ndarray:
    """Parity-wise piecewise-linear interpolation of the samples on the window.

    Returns the height-0 sequence over ``window`` (default: the set's window);
    it equals the samples on Lambda exactly.
    """
    samples = np.asarray(samples, dtype=complex).ravel()
    if samples.size != s.lam.size:
        raise LengthMismatch(f"{samples.size} samples for {s.lam.size} sampling points")
    m_min, m_max = s.window if window is None else _layer_range(window)
    ms = np.arange(m_min, m_max + 1)
    out = np.empty(ms.size, dtype=complex)
    for parity in (0, 1):
        sel = s.lam % 2 == parity
        pts, vals = s.lam[sel], samples[sel]
        targets = ms[ms % 2 == parity]
        if targets.size and (targets[0] < pts[0] or targets[-1] > pts[-1]):
            raise CoverageGap(f"window [{m_min}, {m_max}] reaches beyond the parity-{parity} samples "
                              f"[{int(pts[0])}, {int(pts[-1])}]")
        out[ms % 2 == parity] = np.interp(targets, pts, vals.real) + 1j * np.interp(targets, pts, vals.imag)
    # np.interp reproduces the nodes up to rounding of the weights; pin them exactly
    out[s.lam - m_min] = samples
    return out


def approx_A(samples, s: SamplingSet, band: BandParameters, L: int = 4096, heights=(0, 0)) -> PWFunction:
    """A = P T applied to samples on Lambda (zero outside the window)."""
    return project(interpolate_T(samples, s), s.window[0], band, L, heights=heights)


def _check_grid(s: SamplingSet, L: int) -> int:
    width = s.window[1] - s.window[0] + 1
    if L < 4 * width:
        raise GridTooCoarse(f"grid size {L} is below 4 x window width {width}")
    return width


def _apply_A(c: np.ndarray, s: SamplingSet, mask: np.ndarray, width: int) -> np.ndarray:
    """A on the periodic model: T inside the window, identity on the
    (sampled) columns outside it, then the band mask."""
    L = c.size
    ms = s.window[0] + np.arange(L)
    g = _layer_from_coefficients(c, ms, 0)
    g[:width] = interpolate_T(g[s.lam - s.window[0]], s)
    return mask * _layer_spectrum(g, s.window[0], L)


def _pw_norm(c: np.ndarray) -> float:
    return math.sqrt(float(np.sum(np.abs(c) ** 2)) / c.size)


@dataclass
class ReconstructionReport:
    """Trace of the Neumann-series reconstruction.

    ``residuals[k]`` is ||phi_k||.  ``measured_ratio`` is the largest
    ||phi_{k+1}|| / ||phi_k|| over k >= 1 (the single ratio r_1/r_0 when the
    series stopped after one step).  ``final_error`` is the a-posteriori
    bound ||phi_K|| / ((1 - bound_ratio) ||phi_0||) on the relative error of
    the partial sum; ``true_error`` is measured against a reference when one
    is supplied.
    """

    iterations: int
    residuals: list
    measured_ratio: float
    bound_ratio: float
    final_error: float
    frame_lower: float
    frame_lower_empirical: float
    guarantee: bool
    converged: bool
    delta: int
    tol: float
    true_error: Optional[float] = None
    ratios: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"iterations": self.iterations, "residuals": [float(r) for r in self.residuals],
                "measured_ratio": float(self.measured_ratio), "bound_ratio": float(self.bound_ratio),
                "final_error": float(self.final_error), "frame_lower": float(self.frame_lower),
                "frame_lower_empirical": float(self.frame_lower_empirical),
                "guarantee": bool(self.guarantee), "converged": bool(self.converged),
                "delta": int(self.delta), "tol": float(self.tol),
                "true_error": None if self.true_error is None else float(self.true_error)}


def reconstruct(samples, s: SamplingSet, band: BandParameters, L: int = 4096, tol: float = 1e-9,
                max_iter: int = 200, heights=(0, 0), reference: Optional[PWFunction] = None
                ) -> tuple[PWFunction, ReconstructionReport]:
    """Recover F from F(Lambda) by phi_0 = A F, phi_{k+1} = phi_k - A phi_k.

    Stops once ||phi_k|| <= tol ||phi_0|| or after ``max_iter`` updates.
    Outside the sufficient condition the run is experimental: the report has
    ``guarantee=False`` and non-convergence is returned rather than raised.
    """
    samples = np.asarray(samples, dtype=complex).ravel()
    width = _check_grid(s, L)
    guarantee = sufficient_condition(s, band)
    rho = bound_ratio(band.alpha, s.delta)
    mask = band.mask(L)

    phi_c = mask * _layer_spectrum(interpolate_T(samples, s), s.window[0], L)
    total = phi_c.copy()
    residuals = [_pw_norm(phi_c)]
    converged = residuals[0] == 0.0
    k = 0
    while not converged and k < max_iter:
        phi_c = phi_c - _apply_A(phi_c, s, mask, width)
        total += phi_c
        k += 1
        residuals.append(_pw_norm(phi_c))
        converged = residuals[-1] <= tol * residuals[0]

    ratios = [b / a if a > 0 else 0.0 for a, b in zip(residuals, residuals[1:])]
    measured = max(ratios[1:]) if len(ratios) > 1 else (ratios[0] if ratios else 0.0)
    r0 = residuals[0]
    rel_last = residuals[-1] / r0 if r0 > 0 else 0.0
    final_error = rel_last / (1 - rho) if rho < 1 else rel_last

    window = (s.window[0], s.window[1], int(heights[0]), int(heights[1]))
    result = PWFunction(_coefficients_to_grid(total, window), band, total)
    energy = float(np.sum(np.abs(samples) ** 2))
    norm0 = _pw_norm(total)
    report = ReconstructionReport(
        iterations=k, residuals=residuals, measured_ratio=measured, bound_ratio=rho,
        final_error=final_error,
        frame_lower=(1 - rho) ** 2 / (4 * s.delta) if rho < 1 else 0.0,
        frame_lower_empirical=energy / norm0 ** 2 if norm0 > 0 else 0.0,
        guarantee=guarantee, converged=converged, delta=s.delta, tol=tol, ratios=ratios)
    if reference is not None:
        ref0 = np.asarray(reference.evaluate(np.arange(s.window[0], s.window[1] + 1), 0))
        got0 = _layer_from_coefficients(total, np.arange(s.window[0], s.window[1] + 1), 0)
        denom = float(np.linalg.norm(ref0))
        report.true_error = float(np.linalg.norm(got0 - ref0)) / denom if denom > 0 else float(np.linalg.norm(got0))
    if not converged and guarantee:
        raise NoConvergence(f"residual {rel_last:.3e} above tol {tol:.1e} after {k} iterations "
                            f"although max(delta_e, delta_o)={s.delta} < pi/alpha", report)
    return result, report


# -- verifiers --------------------------------------------------------------

class SamplingRatios(NamedTuple):
    """sum_Lambda |F|^2 / ||F||^2 read as a lower-frame estimate and against the upper bound 1."""

    lower_ratio: float
    upper_ratio: float
    ok: bool
    zero_function: bool


def sampling_inequality_check(F: PWFunction, s: SamplingSet, rel_tol: float = 1e-10) -> SamplingRatios:
    """Sample energy on Lambda relative to the height-0 window norm of F."""
    cols = np.arange(s.window[0], s.window[1] + 1)
    norm2 = float(np.sum(np.abs(F.grid.at(cols, np.zeros_like(cols))) ** 2))
    energy = float(np.sum(np.abs(sample(F, s)) ** 2))
    if norm2 == 0.0:
        return SamplingRatios(float("nan"), float("nan"), True, True)
    ratio = energy / norm2
    return SamplingRatios(ratio, ratio, ratio <= 1 + rel_tol, False)


def approximation_bounds_check(F: PWFunction, s: SamplingSet, slack_a1: float = 1e-6,
                               slack_a2: float = 0.05) -> tuple[CheckResult, CheckResult]:
    """Norm bounds for A on exact samples of F.

    A_1: ||A F|| <= 2 sqrt(delta) (sum_Lambda |F|^2)^(1/2).
    A_2: ||F - A F|| <= sin^2(alpha)/sin^2(pi/delta) ||F||.
    Norms are full-period height-0 norms of the periodic model, so F must
    carry coefficients on the same grid L.
    """
    if F.coefficients is None:
        raise ValueError("F needs spectral coefficients")
    L = F.L
    _check_grid(s, L)
    AF = approx_A(sample(F, s), s, F.band, L)
    energy = math.sqrt(float(np.sum(np.abs(sample(F, s)) ** 2)))
    a1_lhs = AF.pw_norm
    a1_bound = 2 * math.sqrt(s.delta) * energy
    rho = bound_ratio(F.band.alpha, s.delta)
    a2_lhs = _pw_norm(F.coefficients - AF.coefficients)
    a2_bound = rho * F.pw_norm
    a1 = CheckResult("approximation_A1", a1_lhs, a1_bound, a1_lhs <= a1_bound * (1 + slack_a1),
                     tolerance=slack_a1, details={"delta": s.delta})
    a2 = CheckResult("approximation_A2", a2_lhs, a2_bound, a2_lhs <= a2_bound * (1 + slack_a2),
                     tolerance=slack_a2, details={"delta": s.delta, "bound_ratio": rho})
    return a1, a2


def bernstein_check(F: PWFunction, order: int = 1, rel_tol: float = 1e-8) -> CheckResult:
    """||nabla_2 F|| <= 2 sin(alpha) ||F|| (order 1) or ||nabla_2^2 F|| <= 4 sin^2(alpha) ||F|| (order 2).

    nabla_2 F(m) = F(m) - F(m + 2) at height 0, summed over the m whose
    stencil stays in the window; a window spanning exactly one period L of
    the spectral model uses circular differences instead.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    g = F.layer(0)
    norm = float(np.linalg.norm(g))
    periodic = F.L is not None and g.size == F.L
    if periodic:
        d = g - np.roll(g, -2)
        if order == 2:
            d = d - np.roll(d, -2)
    else:
        if g.size <= 2 * order:
            raise OutOfWindow(f"window {F.window} is too narrow for nabla_2 of order {order}")
        d = g[:-2] - g[2:]
        if order == 2:
            d = d[:-2] - d[2:]
    lhs = float(np.linalg.norm(d))
    s2 = 2 * math.sin(F.band.alpha)
    bound = (s2 if order == 1 else s2 ** 2) * norm
    return CheckResult(f"bernstein_order{order}", lhs, bound, lhs <= bound * (1 + rel_tol),
                       tolerance=rel_tol,
                       details={"ratio": lhs / norm if norm > 0 else 0.0, "periodic": periodic})


def wirtinger_check(s, rel_tol: float = 1e-12) -> CheckResult:
    """sum_{l=0}^N |s(l)|^2 <= 1/(16 sin^4(pi/(2N))) sum_{l=0}^{N-2} |nabla_1^2 s(l)|^2 for s(0) = s(N) = 0."""
    s = np.asarray(s, dtype=complex).ravel()
    N = s.size - 1
    if N < 2:
        raise ValueError("need N >= 2, i.e. at least three entries")
    if s[0] != 0 or s[-1] != 0:
        raise BadEndpoints("the sequence must vanish at both endpoints")
    lhs = float(np.sum(np.abs(s) ** 2))
    d2 = s[2:] - 2 * s[1:-1] + s[:-2]
    rhs = float(np.sum(np.abs(d2) ** 2)) / (16 * math.sin(math.pi / (2 * N)) ** 4)
    return CheckResult("wirtinger", lhs, rhs, lhs <= rhs * (1 + rel_tol), tolerance=rel_tol,
                       details={"N": int(N)})
