"""Fourier side of the discrete Paley-Wiener space PW_alpha.

Frequencies live on the uniform torus grid t_j = -pi + 2 pi j / L.  A
function F in PW_alpha is carried by its coefficient vector c (length L):

    F(m, n) = (1/L) sum_j c_j e_{t_j}(m, n),

a finite combination of discrete exponentials, hence exactly discrete entire.
``synthesize`` builds c from samples f(t_j) with trapezoid weights over
D_alpha, which is the quadrature for (1/2pi) int_{D_alpha} f(t) e_t dt.

Layer-0 sequences are L-periodic in this model; windows are views into one
period.  ``project`` is the exact orthogonal projection of that periodic
model (0/1 mask over the closed band) unless trapezoid weights are requested.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BadEpsilon, BandLeakage, GridTooCoarse, OutOfWindow, PoleError, SlowDecay
from .lattice import (
    BAND_EDGE_TOL,
    POLE_TOL,
    BandParameters,
    GridFunction,
    LatticePoint,
    _as_window,
    phi,
    torus_grid,
)

__all__ = [
    "TAU_LEAK",
    "SpectralFunction",
    "PWFunction",
    "KernelQuery",
    "CheckResult",
    "bump",
    "bump_spectrum",
    "indicator_spectrum",
    "single_frequency_spectrum",
    "random_smooth_spectrum",
    "synthesize",
    "analyze",
    "project",
    "kernel",
    "kernel_closed_form",
    "kernel_row",
    "reproduce",
    "isometry_check",
    "plancherel_polya_check",
    "envelope_constant",
    "growth_envelope_check",
    "anchor_identity_check",
    "decimate_check",
]

TAU_LEAK = 1e-8


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Samples f(t_j) on the L-point torus grid.

    With a ``band`` attached the samples must vanish off D_alpha.  ``band``
    is None only for raw transforms (``analyze(..., enforce_band=False)``).
    """

    L: int
    values: np.ndarray
    band: Optional[BandParameters] = None
    leakage: float = 0.0

    def __post_init__(self):
        L = int(self.L)
        if L < 8 or L % 2:
            raise ValueError(f"grid size L must be even and >= 8, got {self.L}")
        values = np.asarray(self.values, dtype=complex).ravel()
        if values.size != L:
            raise ValueError(f"expected {L} spectral values, got {values.size}")
        if self.band is not None:
            outside = self.band.mask(L) == 0
            if np.any(values[outside] != 0):
                raise ValueError("spectral values must vanish outside D_alpha")
        values.setflags(write=False)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "values", values)

    @property
    def grid(self) -> np.ndarray:
        return torus_grid(self.L)

    @property
    def norm(self) -> float:
        """Rectangle-rule L^2(T) norm, (2 pi / L * sum |f_j|^2) ** 0.5."""
        return math.sqrt(2 * math.pi / self.L * float(np.sum(np.abs(self.values) ** 2)))

    def to_dict(self) -> dict:
        return {"L": self.L,
                "alpha": None if self.band is None else self.band.alpha,
                "values": [[float(v.real), float(v.imag)] for v in self.values]}

    @classmethod
    def from_dict(cls, data: dict) -> "SpectralFunction":
        pairs = np.asarray(data["values"], dtype=float).reshape(-1, 2)
        alpha = data.get("alpha")
        band = None if alpha is None else BandParameters(alpha)
        return cls(int(data["L"]), pairs[:, 0] + 1j * pairs[:, 1], band)


@dataclass(frozen=True, eq=False)
class PWFunction:
    """A member of PW_alpha: grid values on a window plus its coefficient vector.

    ``coefficients`` (length L, zero off the band) give the exact
    representation; ``grid`` is the window view of it.
    """

    grid: GridFunction
    band: BandParameters
    coefficients: Optional[np.ndarray] = None
    layer0_norm: float = field(init=False)

    def __post_init__(self):
        if self.coefficients is not None:
            c = np.asarray(self.coefficients, dtype=complex).ravel()
            c.setflags(write=False)
            object.__setattr__(self, "coefficients", c)
        if self.grid.window[2] <= 0 <= self.grid.window[3]:
            norm = float(np.linalg.norm(self.grid.layer(0)))
        else:
            norm = float("nan")
        object.__setattr__(self, "layer0_norm", norm)

    @property
    def L(self) -> Optional[int]:
        return None if self.coefficients is None else self.coefficients.size

    @property
    def window(self):
        return self.grid.window

    @property
    def pw_norm(self) -> float:
        """Height-0 l^2 norm over a full period (exact in the periodic model)."""
        if self.coefficients is None:
            return self.layer0_norm
        return math.sqrt(float(np.sum(np.abs(self.coefficients) ** 2)) / self.coefficients.size)

    def layer(self, n: int) -> np.ndarray:
        return self.grid.layer(n)

    def evaluate(self, ms, n: int) -> np.ndarray:
        """F(ms, n) from the coefficients, for heights or columns off the window."""
        if self.coefficients is None:
            return self.grid.at(np.asarray(ms), np.full(np.shape(ms), n))
        return _layer_from_coefficients(self.coefficients, np.asarray(ms), int(n))


class KernelQuery(tuple):
    """Pair (center, probe) of lattice points for K_center(probe)."""

    def __new__(cls, center, probe):
        return super().__new__(cls, (LatticePoint(*center), LatticePoint(*probe)))

    @property
    def center(self) -> LatticePoint:
        return self[0]

    @property
    def probe(self) -> LatticePoint:
        return self[1]


@dataclass
class CheckResult:
    """Outcome of a numerical verifier: ``ok`` iff ``lhs`` respects ``bound``."""

    name: str
    lhs: float
    bound: float
    ok: bool
    tail_estimate: float = 0.0
    tolerance: float = 0.0
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"name": self.name, "lhs": _jsonable(self.lhs), "bound": _jsonable(self.bound),
               "ok": bool(self.ok), "tail_estimate": float(self.tail_estimate),
               "tolerance": float(self.tolerance)}
        out.update({k: _jsonable(v) for k, v in self.details.items()})
        return out


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


# -- test functions ---------------------------------------------------------

def bump(x, sharpness: float = 1.0) -> np.ndarray:
    """C-infinity bump exp(-a x^2 / (1 - x^2)) on |x| < 1, peak 1 at x = 0.

    For a = 1 this is e * exp(-1 / (1 - x^2)).  Larger ``sharpness`` trades
    a narrower profile for faster decay of the Fourier coefficients.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    xi = x[inside]
    out[inside] = np.exp(-sharpness * xi ** 2 / (1.0 - xi ** 2))
    return out


def _circular_offset(t, center):
    return (t - center + math.pi) % (2 * math.pi) - math.pi


def bump_spectrum(L: int, band: BandParameters, center: float = 0.0, halfwidth: Optional[float] = None,
                  sharpness: float = 1.0, amplitude: complex = 1.0, mirror: bool = False) -> SpectralFunction:
    """Bump centred at ``center`` (circular distance) with the given half-width.

    The support [center - halfwidth, center + halfwidth] must fit in D_alpha.
    ``mirror`` adds a copy shifted by pi into the other component of the band.
    """
    if halfwidth is None:
        halfwidth = band.alpha - abs(center) if abs(center) <= band.alpha else band.alpha
    t = torus_grid(L)
    vals = amplitude * bump(_circular_offset(t, center) / halfwidth, sharpness)
    if mirror:
        vals = vals + amplitude * bump(_circular_offset(t, center + math.pi) / halfwidth, sharpness)
    vals = np.where(band.mask(L) > 0, vals, 0.0)
    return SpectralFunction(L, vals, band)


def indicator_spectrum(L: int, band: BandParameters, amplitude: complex = 1.0) -> SpectralFunction:
    return SpectralFunction(L, amplitude * band.mask(L), band)


def single_frequency_spectrum(L: int, band: BandParameters, t0: float, amplitude: complex = 1.0) -> SpectralFunction:
    """One nonzero grid value at the grid point nearest ``t0``."""
    t = torus_grid(L)
    j0 = int(np.argmin(np.abs(_circular_offset(t, t0))))
    if band.mask(L)[j0] == 0:
        raise ValueError(f"frequency {t0} is outside D_alpha")
    vals = np.zeros(L, dtype=complex)
    vals[j0] = amplitude
    return SpectralFunction(L, vals, band)


def random_smooth_spectrum(rng: np.random.Generator, L: int, band: BandParameters, n_components: int = 3,
                           sharpness: float = 8.0, min_width: float = 0.6) -> SpectralFunction:
    """Sum of bumps with random centres, widths and complex amplitudes inside D_alpha.

    Each half-width is drawn from [min_width * alpha, alpha] and its support
    kept inside one component of the band.
    """
    alpha = band.alpha
    vals = np.zeros(L, dtype=complex)
    t = torus_grid(L)
    for _ in range(n_components):
        w = rng.uniform(min_width, 1.0) * alpha
        c = rng.uniform(-(alpha - w), alpha - w)
        if rng.random() < 0.5:
            c = c + math.pi
        amp = complex(rng.normal(), rng.normal())
        vals += amp * bump(_circular_offset(t, c) / w, sharpness)
    vals = np.where(band.mask(L) > 0, vals, 0.0)
    return SpectralFunction(L, vals, band)


# -- synthesis and analysis -------------------------------------------------

def _layer_from_coefficients(c: np.ndarray, ms: np.ndarray, n: int) -> np.ndarray:
    """(1/L) sum_j c_j e_{t_j}(m, n) for every m in ``ms`` via one inverse FFT."""
    L = c.size
    nz = np.flatnonzero(c)
    weighted = np.zeros(L, dtype=complex)
    if nz.size:
        t = torus_grid(L)
        weighted[nz] = c[nz] * phi(t[nz], n)
    # e^{i m t_j} = (-1)^m e^{2 pi i j m / L}
    y = np.fft.ifft(weighted)
    ms = np.asarray(ms)
    return np.where(ms % 2 == 0, 1.0, -1.0) * y[ms % L]


def _coefficients_to_grid(c: np.ndarray, window) -> GridFunction:
    m_min, m_max, n_min, n_max = _as_window(window)
    ms = np.arange(m_min, m_max + 1)
    cols = [_layer_from_coefficients(c, ms, n) for n in range(n_min, n_max + 1)]
    return GridFunction((m_min, m_max, n_min, n_max), np.stack(cols, axis=1))


def _check_in_band_poles(c: np.ndarray) -> None:
    t = torus_grid(c.size)
    nz = c != 0
    dist = np.minimum(np.abs(t - math.pi / 2), np.abs(t + math.pi / 2))
    if np.any(nz & (dist < POLE_TOL)):
        raise PoleError("a nonzero spectral value sits on a pole of the discrete exponential")


def synthesize(f: SpectralFunction, window) -> PWFunction:
    """F(m, n) = (1/L) sum_j w_j f(t_j) e_{t_j}(m, n) on ``window``.

    The weights w_j are the trapezoid weights of D_alpha.  The result is a
    finite combination of discrete exponentials, so it is discrete entire
    however coarse the grid is.
    """
    if f.band is None:
        raise ValueError("synthesize needs a band-limited SpectralFunction")
    c = f.values * f.band.quadrature_weights(f.L)
    _check_in_band_poles(c)
    return PWFunction(_coefficients_to_grid(c, window), f.band, c)


def _layer_spectrum(g: np.ndarray, m_min: int, L: int) -> np.ndarray:
    """sum_m g(m) e^{-i m t_j} on the L-grid (periodic wrap for wide windows)."""
    ms = m_min + np.arange(g.size)
    buf = np.zeros(L, dtype=complex)
    np.add.at(buf, ms % L, np.where(ms % 2 == 0, 1.0, -1.0) * g)
    return np.fft.fft(buf)


def analyze(F: PWFunction, L: Optional[int] = None, enforce_band: bool = True,
            tau_leak: float = TAU_LEAK) -> SpectralFunction:
    """Height-0 transform f(t_j) = sum_{m in window} F(m, 0) e^{-i m t_j}.

    With ``enforce_band`` the out-of-band part is measured against
    ``tau_leak`` (relative spectral mass), zeroed, and the mass recorded as
    ``leakage``; otherwise the raw transform is returned without a band.
    """
    L = L or F.L or 4096
    layer = F.layer(0)
    spec = _layer_spectrum(layer, F.window[0], L)
    if not enforce_band:
        return SpectralFunction(L, spec, None)
    inside = F.band.mask(L) > 0
    total = float(np.sum(np.abs(spec) ** 2))
    outside = float(np.sum(np.abs(spec[~inside]) ** 2))
    leak = outside / total if total > 0 else 0.0
    if leak > tau_leak:
        raise BandLeakage(f"out-of-band spectral mass {leak:.3e} exceeds {tau_leak:.1e}", leak)
    return SpectralFunction(L, np.where(inside, spec, 0.0), F.band, leakage=leak)


def project(g, m_min: Optional[int] = None, band: Optional[BandParameters] = None, L: Optional[int] = None,
            heights=(0, 0), weights: str = "indicator") -> PWFunction:
    """Orthogonal projection of a layer-0 sequence onto PW_alpha.

    ``g`` lives on [m_min, m_min + len(g) - 1] and is zero-extended to the
    L-periodic line.  Its discrete Fourier series is multiplied by the
    indicator of the closed band (``weights="indicator"``, an exact
    projection of the periodic model) or by the trapezoid weights
    (``"trapezoid"``, which reproduces the continuous sinc kernel to
    O(L^-2)), and the result is synthesized on heights ``heights``.

    A ``PWFunction`` argument is projected through its coefficients, i.e.
    on the whole period rather than its window; this is what makes
    ``project(project(g))`` equal ``project(g)``.
    """
    if isinstance(g, PWFunction):
        band = band or g.band
        L = L or g.L
        m_min = g.window[0] if m_min is None else m_min
        width = g.window[1] - g.window[0] + 1
        if g.coefficients is None or g.L != L:
            return project(g.layer(0), m_min, band, L, heights, weights)
        spectrum = g.coefficients
    else:
        g = np.asarray(g, dtype=complex).ravel()
        width = g.size
        if m_min is None or band is None or L is None:
            raise ValueError("a plain sequence needs m_min, band and L")
        if L < 4 * width:
            raise GridTooCoarse(f"grid size {L} is below 4 x window width {width}")
        spectrum = _layer_spectrum(g, m_min, L)
    if weights == "indicator":
        w = band.mask(L)
    elif weights == "trapezoid":
        w = band.quadrature_weights(L)
    else:
        raise ValueError(f"unknown weights {weights!r}")
    c = w * spectrum
    window = (m_min, m_min + width - 1, int(heights[0]), int(heights[1]))
    return PWFunction(_coefficients_to_grid(c, window), band, c)


# -- reproducing kernel -----------------------------------------------------

def kernel(q, band: BandParameters, L: int) -> complex:
    """K_{(m,n)}(u, v) = (1/L) sum_j w_j e_{t_j}(u - m, v + n) with trapezoid weights."""
    (m, n), (u, v) = q
    grid_w, edge_t, edge_w = band.quadrature_nodes(L)
    nz = np.flatnonzero(grid_w)
    t = np.concatenate([torus_grid(L)[nz], edge_t])
    w = np.concatenate([grid_w[nz], edge_w])
    vals = w * np.exp(1j * t * (u - m)) * phi(t, v + n)
    return complex(np.sum(vals) / L)


def kernel_closed_form(k, alpha: float):
    """(alpha/pi)(1 + (-1)^k) sinc(alpha k), the kernel on the line v = -n with k = u - m."""
    k = np.asarray(k)
    # np.sinc(x) = sin(pi x) / (pi x)
    val = alpha / math.pi * (1 + np.where(k % 2 == 0, 1.0, -1.0)) * np.sinc(alpha * k / math.pi)
    return val if val.ndim else float(val)


def kernel_row(center, us, band: BandParameters, L: int) -> np.ndarray:
    """K_center(u, 0) for every u in ``us`` (one FFT)."""
    m, n = center
    grid_w, edge_t, edge_w = band.quadrature_nodes(L)
    k = np.asarray(us) - m
    row = _layer_from_coefficients(grid_w.astype(complex), k, n)
    if edge_t.size:
        row = row + np.exp(1j * np.multiply.outer(k, edge_t)) @ (edge_w * phi(edge_t, n)) / L
    return row


def reproduce(F: PWFunction, p, L: Optional[int] = None) -> complex:
    """Value at ``p`` rebuilt from layer 0 through the reproducing kernel.

    F(m, n) = <F, K_(m,n)> = sum_u F(u, 0) conj(K_(m,n)(u, 0)); only the
    height-0 window values of F are read, so ``p`` may lie on any height.
    """
    m, n = int(p[0]), int(p[1])
    if not F.window[0] <= m <= F.window[1]:
        raise OutOfWindow(f"column {m} outside window {F.window}")
    L = L or F.L or 4096
    us = F.grid.m_range
    row = kernel_row((m, n), us, F.band, L)
    return complex(np.sum(F.layer(0) * np.conj(row)))


# -- inequality and identity verifiers --------------------------------------

def isometry_check(F: PWFunction, f: SpectralFunction, rel_tol: float = 1e-8) -> CheckResult:
    """Height-0 l^2 norm of F on its window against (2 pi)^(-1/2) ||f||_{L^2}.

    The window sum stands in for the sum over Z, so the check also covers
    the truncation of a rapidly decreasing layer.
    """
    target = f.norm / math.sqrt(2 * math.pi)
    lhs = abs(F.layer0_norm - target)
    bound = rel_tol * f.norm
    return CheckResult("isometry", lhs, bound, lhs <= bound, tolerance=rel_tol,
                       details={"layer0_norm": F.layer0_norm, "pw_norm": F.pw_norm, "spectral_norm": f.norm})


def plancherel_polya_check(F: PWFunction, n: int, rel_tol: float = 1e-8) -> CheckResult:
    """sum_m |F(m, n)|^2 against growth_base^(2|n|) * ||F||^2."""
    lhs = float(np.sum(np.abs(F.layer(n)) ** 2))
    bound = float(F.band.growth(n) ** 2 * F.layer0_norm ** 2)
    return CheckResult("plancherel_polya", lhs, bound, lhs <= bound * (1 + rel_tol),
                       tolerance=rel_tol, details={"n": int(n)})


def envelope_constant(F: PWFunction, k: int, eps: float, m_radius: Optional[int] = None,
                      heights=None) -> float:
    """Smallest c with |F(m,n)| <= c (1+|m|)^-k growth_base(alpha+eps)^|n| on the window.

    ``m_radius`` restricts to |m| <= m_radius; ``heights`` to a subset of n.
    """
    alpha = F.band.alpha
    if eps <= 0 or alpha + eps >= math.pi / 2:
        raise BadEpsilon(f"need 0 < eps and alpha + eps < pi/2, got alpha={alpha}, eps={eps}")
    gb = math.cos(alpha + eps) / (1 - math.sin(alpha + eps))
    ms = F.grid.m_range
    ns = F.grid.n_range if heights is None else np.asarray(heights)
    sel_m = np.ones(ms.size, bool) if m_radius is None else np.abs(ms) <= m_radius
    vals = np.abs(F.grid.values[np.ix_(sel_m, ns - F.window[2])])
    weight = (1.0 + np.abs(ms[sel_m]))[:, None] ** k / gb ** np.abs(ns)[None, :]
    return float(np.max(vals * weight)) if vals.size else 0.0


def growth_envelope_check(F: PWFunction, k: int, eps: float) -> CheckResult:
    """Fit the decay/growth envelope constant and report whether it stabilizes.

    ``ok`` is finiteness of the fitted constant (always true on a window);
    ``stable`` compares the fit on the full window with the inner half, a
    regression diagnostic for rapid decay.
    """
    c_full = envelope_constant(F, k, eps)
    half = max(abs(F.window[0]), abs(F.window[1])) // 2
    c_half = envelope_constant(F, k, eps, m_radius=half)
    stable = c_full <= 1.05 * c_half if c_half > 0 else c_full == 0
    return CheckResult("growth_envelope", c_full, float("inf"), bool(np.isfinite(c_full)),
                       details={"k": int(k), "eps": float(eps), "c_inner_half": c_half, "stable": bool(stable)})


def _tail_estimate(layer_pos: np.ndarray) -> tuple[float, bool]:
    """Bound on 2 sum_{k > K} |F(k)| from the best power-law envelope of the
    window values, and whether the k=4 envelope is stable."""
    ms = np.arange(layer_pos.size)
    K = layer_pos.size - 1
    a = np.abs(layer_pos)
    best = math.inf
    stable4 = True
    for k in range(4, 13):
        weighted = a * (1.0 + ms) ** k
        c_full = float(weighted.max())
        if k == 4:
            c_half = float(weighted[: K // 2 + 1].max())
            stable4 = c_full <= 1.05 * c_half if c_half > 0 else c_full == 0
        best = min(best, 2 * c_full / ((k - 1) * (1.0 + K) ** (k - 1)))
    return best, stable4


def anchor_identity_check(F: PWFunction, n: int) -> CheckResult:
    """F(0, n) against -i F(0, n-1) - 2i sum_{k>=1} i^k F(k, n-1), truncated to the window."""
    n = int(n)
    if n < 1:
        raise ValueError("the anchor identity is stated for positive heights")
    if F.window[0] > 0 or F.window[1] < 1:
        raise OutOfWindow(f"window {F.window} does not contain columns 0 and 1")
    prev = F.layer(n - 1)
    pos = prev[-F.window[0]:]          # F(k, n-1), k = 0..m_max
    k = np.arange(pos.size)
    ipow = np.array([1, 1j, -1, -1j])[k % 4]
    lhs = complex(F.grid.at(0, n))
    rhs = complex(-1j * pos[0] - 2j * np.sum(ipow[1:] * pos[1:]))
    tail, stable = _tail_estimate(pos)
    if not stable:
        raise SlowDecay(f"height-{n - 1} layer is not rapidly decreasing on window {F.window}")
    scale = float(np.max(np.abs(prev))) if prev.size else 0.0
    tol = tail + 1e-12 * max(scale, abs(lhs))
    diff = abs(lhs - rhs)
    return CheckResult("anchor_identity", diff, tol, diff <= tol, tail_estimate=tail, tolerance=tol,
                       details={"n": n, "value_lhs": lhs, "value_rhs": rhs})


def decimate_check(F: PWFunction, parity: str = "even", L: Optional[int] = None) -> CheckResult:
    """Spectral mass of m -> F(2m) (or F(2m+1)) outside |s| <= 2 alpha.

    ``lhs`` is the out-of-band mass relative to the total; ``details`` carry
    omega_alpha = 2 sin^2 alpha and the consistency of the graph band
    2 arcsin(sqrt(omega/2)) with 2 alpha.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    layer = F.layer(0)
    ms = F.grid.m_range
    off = 0 if parity == "even" else 1
    sel = (ms - off) % 2 == 0
    dec = layer[sel]
    j_min = (int(ms[sel][0]) - off) // 2 if dec.size else 0
    L = L or F.L or 4096
    spec = _layer_spectrum(dec, j_min, L)
    s = torus_grid(L)
    alpha = F.band.alpha
    omega = F.band.omega
    graph_band = 2 * math.asin(math.sqrt(omega / 2))
    outside = np.abs(s) > 2 * alpha + BAND_EDGE_TOL
    total = float(np.sum(np.abs(spec) ** 2))
    # a decimated sequence that is zero up to rounding of the layer has no spectrum to judge
    floor = (1e-14 * F.layer0_norm) ** 2 * L
    mass = float(np.sum(np.abs(spec[outside]) ** 2)) / total if total > floor else 0.0
    band_ok = abs(graph_band - 2 * alpha) <= 1e-12
    return CheckResult("decimation_" + parity, mass, TAU_LEAK, mass <= TAU_LEAK and band_ok,
                       details={"omega_alpha": omega, "graph_band": graph_band, "band_consistent": band_ok,
                                "total_mass": total})
