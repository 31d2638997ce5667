"""Discrete complex analysis on the square lattice Z^2.

A function F on Z^2 is discrete holomorphic on the plaquette with lower-left
corner (m, n) when

    F(m+1, n+1) - F(m, n) + i (F(m, n+1) - F(m+1, n)) = 0,

and discrete entire when this holds on every plaquette.  This module holds the
primitives built on that identity: discrete exponentials, residual checks,
the layer-by-layer continuation formulas and the discrete contour integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateContour, LengthMismatch, OutOfWindow, PoleError

__all__ = [
    "LatticePoint",
    "GridFunction",
    "DiscreteContour",
    "BandParameters",
    "POLE_TOL",
    "BAND_EDGE_TOL",
    "torus_grid",
    "phi",
    "discrete_exponential",
    "holomorphicity_residual",
    "max_holomorphicity_residual",
    "extend_layer",
    "contour_integral",
    "square_contour",
    "sample_exponentials",
]

POLE_TOL = 1e-9
BAND_EDGE_TOL = 1e-12

# i**k for k mod 4, kept exact so the layer recursion does not pick up
# rounding from complex powers.
_I_POW = np.array([1, 1j, -1, -1j], dtype=complex)


class LatticePoint(NamedTuple):
    m: int
    n: int


def _as_window(window) -> tuple[int, int, int, int]:
    if len(window) != 4:
        raise ValueError(f"window must be (m_min, m_max, n_min, n_max), got {window!r}")
    m_min, m_max, n_min, n_max = (int(v) for v in window)
    if m_max < m_min or n_max < n_min:
        raise ValueError(f"empty window {window!r}")
    return m_min, m_max, n_min, n_max


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex values of a lattice function on an inclusive rectangular window.

    ``values[m - m_min, n - n_min]`` holds F(m, n).
    """

    window: tuple[int, int, int, int]
    values: np.ndarray

    def __post_init__(self):
        window = _as_window(self.window)
        values = np.asarray(self.values, dtype=complex)
        shape = (window[1] - window[0] + 1, window[3] - window[2] + 1)
        if values.shape != shape:
            raise LengthMismatch(f"values shape {values.shape} does not match window {window} -> {shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("GridFunction values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, func: Callable, window) -> "GridFunction":
        """Sample ``func(m, n)`` (broadcasting over integer arrays) on ``window``."""
        m_min, m_max, n_min, n_max = _as_window(window)
        mm, nn = np.meshgrid(np.arange(m_min, m_max + 1), np.arange(n_min, n_max + 1), indexing="ij")
        vals = np.broadcast_to(np.asarray(func(mm, nn), dtype=complex), mm.shape)
        return cls((m_min, m_max, n_min, n_max), np.array(vals))

    @property
    def m_range(self) -> np.ndarray:
        return np.arange(self.window[0], self.window[1] + 1)

    @property
    def n_range(self) -> np.ndarray:
        return np.arange(self.window[2], self.window[3] + 1)

    @property
    def width(self) -> int:
        return self.window[1] - self.window[0] + 1

    def contains(self, m, n) -> bool:
        m_min, m_max, n_min, n_max = self.window
        return bool(np.all((m_min <= np.asarray(m)) & (np.asarray(m) <= m_max)
                           & (n_min <= np.asarray(n)) & (np.asarray(n) <= n_max)))

    def at(self, m, n):
        """Value(s) at (m, n); integer arrays broadcast."""
        if not self.contains(m, n):
            raise OutOfWindow(f"point(s) {m!r},{n!r} outside window {self.window}")
        return self.values[np.asarray(m) - self.window[0], np.asarray(n) - self.window[2]]

    def layer(self, n: int) -> np.ndarray:
        """F(., n) over the window's m range."""
        if not self.window[2] <= n <= self.window[3]:
            raise OutOfWindow(f"height {n} outside window {self.window}")
        return self.values[:, n - self.window[2]]

    def to_dict(self) -> dict:
        flat = self.values.ravel()
        return {"window": list(self.window),
                "values": [[float(v.real), float(v.imag)] for v in flat]}

    @classmethod
    def from_dict(cls, data: dict) -> "GridFunction":
        window = _as_window(data["window"])
        pairs = np.asarray(data["values"], dtype=float).reshape(-1, 2)
        shape = (window[1] - window[0] + 1, window[3] - window[2] + 1)
        if pairs.shape[0] != shape[0] * shape[1]:
            raise LengthMismatch(f"expected {shape[0] * shape[1]} values, got {pairs.shape[0]}")
        return cls(window, (pairs[:, 0] + 1j * pairs[:, 1]).reshape(shape))


@dataclass(frozen=True)
class DiscreteContour:
    """Lattice path z_0, ..., z_M with unit steps; closed iff z_M == z_0."""

    vertices: tuple[LatticePoint, ...]

    def __post_init__(self):
        verts = tuple(LatticePoint(int(m), int(n)) for m, n in self.vertices)
        if len(verts) < 2:
            raise DegenerateContour("a contour needs at least two vertices")
        for a, b in zip(verts, verts[1:]):
            if abs(a.m - b.m) + abs(a.n - b.n) != 1:
                raise DegenerateContour(f"non-unit step {a} -> {b}")
        object.__setattr__(self, "vertices", verts)

    @property
    def closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]

    def reversed(self) -> "DiscreteContour":
        return DiscreteContour(self.vertices[::-1])

    def to_list(self) -> list:
        return [[v.m, v.n] for v in self.vertices]

    @classmethod
    def from_list(cls, data: Sequence[Sequence[int]]) -> "DiscreteContour":
        return cls(tuple(tuple(p) for p in data))


def square_contour(m0: int, n0: int, size: int) -> DiscreteContour:
    """Counter-clockwise boundary of the square [m0, m0+size] x [n0, n0+size]."""
    if size < 1:
        raise DegenerateContour("square side must be positive")
    pts = [(m0 + k, n0) for k in range(size)]
    pts += [(m0 + size, n0 + k) for k in range(size)]
    pts += [(m0 + size - k, n0 + size) for k in range(size)]
    pts += [(m0, n0 + size - k) for k in range(size)]
    pts.append((m0, n0))
    return DiscreteContour(tuple(pts))


@dataclass(frozen=True)
class BandParameters:
    """Band-limit alpha in (0, pi/2) and the frequency set D_alpha it defines.

    D_alpha = {|t| <= alpha} U {pi - alpha <= |t| <= pi} on the torus [-pi, pi).
    """

    alpha: float
    growth_base: float = field(init=False)

    def __post_init__(self):
        alpha = float(self.alpha)
        if not 0.0 < alpha < math.pi / 2:
            raise ValueError(f"alpha must lie in (0, pi/2), got {alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "growth_base", math.cos(alpha) / (1.0 - math.sin(alpha)))

    def contains(self, t) -> np.ndarray:
        """Membership in the closed band; edge points within BAND_EDGE_TOL count as inside."""
        at = np.abs(_wrap(np.asarray(t, dtype=float)))
        return (at <= self.alpha + BAND_EDGE_TOL) | (at >= math.pi - self.alpha - BAND_EDGE_TOL)

    def mask(self, L: int) -> np.ndarray:
        """0/1 indicator of D_alpha on the L-point torus grid."""
        return self.contains(torus_grid(L)).astype(float)

    def quadrature_nodes(self, L: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Trapezoid rule for (1/2pi) int_{D_alpha} g dt ~ (1/L) sum w g(node).

        Each band component is integrated with the trapezoid rule on the grid
        points it contains plus its two exact edges.  Returns the weights of
        the grid points (length L) and the off-grid edge nodes with their
        weights; edges that fall on the grid are folded into the grid weights
        (they then get weight 1/2).
        """
        h = 2.0 * math.pi / L
        tol = BAND_EDGE_TOL / h
        grid_w = np.zeros(L)
        edge_t, edge_w = [], []
        # component intervals in grid-index units x = (t + pi) / h
        for a, b in ((L / 2 - self.alpha / h, L / 2 + self.alpha / h),
                     (L - self.alpha / h, L + self.alpha / h)):
            j_lo, j_hi = math.ceil(a - tol), math.floor(b + tol)
            nodes = [(float(j), j) for j in range(j_lo, j_hi + 1)]
            if abs(j_lo - a) > tol:
                nodes.insert(0, (a, None))
            if abs(j_hi - b) > tol:
                nodes.append((b, None))
            x = np.array([pos for pos, _ in nodes])
            w = np.empty_like(x)
            w[0] = (x[1] - x[0]) / 2
            w[-1] = (x[-1] - x[-2]) / 2
            w[1:-1] = (x[2:] - x[:-2]) / 2
            for (pos, j), wk in zip(nodes, w):
                if j is None:
                    edge_t.append(pos * h - math.pi)
                    edge_w.append(wk)
                else:
                    grid_w[j % L] += wk
        return grid_w, _wrap(np.array(edge_t)), np.array(edge_w)

    def quadrature_weights(self, L: int) -> np.ndarray:
        """Grid part of the trapezoid rule over D_alpha (see ``quadrature_nodes``).

        Interior grid points get 1 and edge points on the grid get 1/2; next
        to an off-grid edge the weight is (1 + d)/2 for fractional gap d.
        """
        return self.quadrature_nodes(L)[0]

    def growth(self, n) -> np.ndarray:
        """growth_base ** |n|, the per-height factor of the exponential growth bound."""
        return self.growth_base ** np.abs(np.asarray(n))

    @property
    def omega(self) -> float:
        """omega_alpha = 2 sin^2(alpha), the graph-Laplacian band of the parity-decimated layer."""
        return 2.0 * math.sin(self.alpha) ** 2


def torus_grid(L: int) -> np.ndarray:
    """Uniform grid t_j = -pi + 2 pi j / L, j = 0..L-1."""
    return -math.pi + 2.0 * math.pi * np.arange(L) / L


def _wrap(t):
    return (np.asarray(t, dtype=float) + math.pi) % (2.0 * math.pi) - math.pi


def _check_pole(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    w = _wrap(t)
    dist = np.minimum(np.abs(w - math.pi / 2), np.abs(w + math.pi / 2))
    if np.any(dist < POLE_TOL):
        bad = t[dist < POLE_TOL] if t.ndim else t
        raise PoleError(f"frequency {np.ravel(bad)[0]!r} is within {POLE_TOL} of +-pi/2")
    return t


def _phi_ratio(t: np.ndarray, inverse: bool = False) -> np.ndarray:
    # (1 + i e^{it}) / (i + e^{it}) is the real number cos t / (1 + sin t)
    # = (1 - sin t) / cos t; pick the form without cancellation.
    s, c = np.sin(t), np.cos(t)
    if inverse:
        # cos t / (1 - sin t) = (1 + sin t) / cos t
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(s <= 0, c / (1.0 - s), (1.0 + s) / c)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(s >= 0, c / (1.0 + s), (1.0 - s) / c)


def phi(t, n: int):
    """Height factor phi_t(n) = ((1 + i e^{it}) / (i + e^{it}))**n of the discrete exponential.

    Negative heights use the reciprocal closed form rather than a complex
    power, so there is no branch cut to cross.  ``t`` may be an array.
    """
    t = _check_pole(t)
    n = int(n)
    base = _phi_ratio(t, inverse=n < 0)
    out = np.power(base, abs(n)).astype(complex)
    return out if out.ndim else complex(out)


def discrete_exponential(t, p) -> complex:
    """e_t(m, n) = e^{i t m} phi_t(n), the discrete entire extension of e^{i t m}."""
    m, n = p
    t = _check_pole(t)
    val = np.exp(1j * t * int(m)) * phi(t, int(n))
    return val if np.ndim(val) else complex(val)


def holomorphicity_residual(F: GridFunction, p) -> complex:
    """F(m+1,n+1) - F(m,n) + i (F(m,n+1) - F(m+1,n)) on the plaquette at ``p``."""
    m, n = int(p[0]), int(p[1])
    if not (F.contains(m, n) and F.contains(m + 1, n + 1)):
        raise OutOfWindow(f"plaquette at ({m},{n}) leaves window {F.window}")
    return complex(F.at(m + 1, n + 1) - F.at(m, n) + 1j * (F.at(m, n + 1) - F.at(m + 1, n)))


def _residual_field(values: np.ndarray) -> np.ndarray:
    v = values
    return v[1:, 1:] - v[:-1, :-1] + 1j * (v[:-1, 1:] - v[1:, :-1])


def max_holomorphicity_residual(F: GridFunction) -> float:
    """Largest plaquette residual modulus over the whole window."""
    if F.values.shape[0] < 2 or F.values.shape[1] < 2:
        raise OutOfWindow(f"window {F.window} contains no plaquette")
    return float(np.max(np.abs(_residual_field(F.values))))


def _extend_up_right(boundary: np.ndarray, anchor: complex) -> np.ndarray:
    M = boundary.size - 1
    k = np.arange(M + 1)
    ipow = _I_POW[k % 4]
    # partial[m] = sum_{k=1}^{m-1} i^k b[k]
    terms = ipow * boundary
    partial = np.zeros(M + 1, dtype=complex)
    if M >= 2:
        partial[2:] = np.cumsum(terms[1:M])
    inner = anchor + 2j * partial + 1j * boundary[0] + _I_POW[(k + 1) % 4] * boundary
    out = _I_POW[(-k) % 4] * inner
    out[0] = anchor
    return out


_DIRECTIONS = ("up_right", "up_left", "down_right", "down_left")


def extend_layer(boundary, anchor: complex, direction: str = "up_right") -> np.ndarray:
    """Continue a discrete entire function one layer from a neighbouring layer.

    ``boundary[m]`` holds the known layer for m = 0..M, read along the
    direction of travel, and ``anchor`` the value F(0, n) on the new layer:

    ============  =====================  ==================
    direction     boundary[m]            returned [m]
    ============  =====================  ==================
    up_right      F(m, n-1)              F(m, n)
    up_left       F(-m, n-1)             F(-m, n)
    down_right    F(m, n+1)              F(m, n)
    down_left     F(-m, n+1)             F(-m, n)
    ============  =====================  ==================

    The three reflected directions reduce to ``up_right`` through the entire
    functions (-1)^(m+n) F(-m, n), (-1)^(m+n) F(m, -n) and F(-m, -n).
    """
    b = np.asarray(boundary, dtype=complex).ravel()
    if b.size == 0:
        raise LengthMismatch("boundary layer is empty")
    if direction not in _DIRECTIONS:
        raise ValueError(f"direction must be one of {_DIRECTIONS}, got {direction!r}")
    anchor = complex(anchor)
    if direction == "down_left":
        return _extend_up_right(b, anchor)
    if direction == "up_right":
        return _extend_up_right(b, anchor)
    # up_left and down_right share the alternating-sign reflection
    sign = np.where(np.arange(b.size) % 2 == 0, 1.0, -1.0)
    return sign * _extend_up_right(-sign * b, anchor)


def contour_integral(F: GridFunction, G: GridFunction, gamma: DiscreteContour) -> complex:
    """Discrete contour pairing (1/4) sum_k (F(z_k)+F(z_k+1)) (G(z_k)+G(z_k+1)) (z_k - z_k+1).

    Orientation matters: reversing ``gamma`` negates the result.
    """
    pts = np.array(gamma.vertices, dtype=int)
    ms, ns = pts[:, 0], pts[:, 1]
    for H in (F, G):
        if not H.contains(ms, ns):
            raise OutOfWindow(f"contour leaves window {H.window}")
    fv = F.at(ms, ns)
    gv = G.at(ms, ns)
    z = ms + 1j * ns
    total = np.sum((fv[:-1] + fv[1:]) * (gv[:-1] + gv[1:]) * (z[:-1] - z[1:]))
    return complex(total / 4.0)


def sample_exponentials(ts: Iterable[float], coeffs: Iterable[complex], window) -> GridFunction:
    """Finite combination sum_j c_j e_{t_j} sampled on ``window``."""
    ts = np.asarray(list(ts), dtype=float)
    coeffs = np.asarray(list(coeffs), dtype=complex)
    _check_pole(ts)

    def func(mm, nn):
        out = np.zeros(mm.shape, dtype=complex)
        for t, c in zip(ts, coeffs):
            for n in np.unique(nn):
                sel = nn == n
                out[sel] += c * np.exp(1j * t * mm[sel]) * phi(t, int(n))
        return out

    return GridFunction.from_callable(func, window)
