"""Causal, retarded and advanced Green operators built by functional calculus.

Conventions (fixed here, used by every test):

* the causal kernel is
  G(t; x, y) = (2/pi) int s(xi^2 + k^2, t) phi(x; xi) phi(y; xi) dxi
             + s(lam_b, t) e(x) e(y)
  with s(lam, t) = sin(sqrt(lam) t)/sqrt(lam) continued through lam <= 0
  (t at lam = 0, sinh for lam < 0); it is odd in t, symmetric in (x, y),
  vanishes at t = 0 and has a delta-type time derivative there;
* the retarded applier integrates sources over past times only and its
  output vanishes before the source; the advanced applier is its mirror and
  vanishes after the source; retarded - advanced = causal;
* both one-sided appliers are two-sided inverses of d_tt + A on compactly
  supported sources.

Truncating the frequency integral at xi_max leaves an oscillatory tail of
size O(1/(xi_max * c)), c the distance to the nearest characteristic, far
too large for pointwise kernel work.  For the k = 0 trigonometric families
the tail has closed form in sine-integral and exponential-integral
functions, and ``causal_kernel`` adds it back by default, leaving pure
quadrature error (about 1e-6 at the default resolution, quartering when the
node count doubles).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.special import exp1, sici

from .model import WarpedProfile, conformal_factors
from .quadrature import TruncationWarning, check_decay
from .spectral import ExtendedState, SpectralResolution

_SERIES_CUT = 1e-4


def sin_propagator(lam, t):
    """s(lam, t) = sin(sqrt(lam) t)/sqrt(lam), continued through lam <= 0.

    Equals t at lam = 0 and sinh(sqrt(-lam) t)/sqrt(-lam) for lam < 0.  A
    series branch handles |lam| t^2 < 1e-4 without cancellation; the series
    is one and the same for both signs of lam.
    """
    lam, t = np.broadcast_arrays(np.asarray(lam, dtype=float),
                                 np.asarray(t, dtype=float))
    z = lam * t * t
    out = np.empty(z.shape)
    small = np.abs(z) < _SERIES_CUT
    zs = z[small]
    out[small] = t[small] * (1.0 - zs / 6.0 + zs * zs / 120.0)
    big = ~small
    lb, tb = lam[big], t[big]
    rb = np.sqrt(np.abs(lb))
    out[big] = np.where(lb > 0, np.sin(rb * tb), np.sinh(rb * tb)) / np.where(rb == 0, 1.0, rb)
    return out


def cos_propagator(lam, t):
    """cos(sqrt(lam) t) continued through lam <= 0 (cosh for lam < 0)."""
    lam, t = np.broadcast_arrays(np.asarray(lam, dtype=float),
                                 np.asarray(t, dtype=float))
    z = lam * t * t
    out = np.empty(z.shape)
    small = np.abs(z) < _SERIES_CUT
    zs = z[small]
    out[small] = 1.0 - zs / 2.0 + zs * zs / 24.0
    big = ~small
    lb, tb = lam[big], t[big]
    rb = np.sqrt(np.abs(lb))
    out[big] = np.where(lb > 0, np.cos(rb * tb), np.cosh(rb * tb))
    return out


# ---------------------------------------------------------------------------
# closed-form frequency tails (k = 0 trigonometric families)

def _si_tail(c, xi_max):
    # int_X^inf sin(xi c)/xi dxi
    c = np.asarray(c, dtype=float)
    s, _ = sici(xi_max * np.abs(c))
    return np.sign(c) * (np.pi / 2 - s)


def _exp1_pair(c, a, xi_max):
    # int_X^inf e^{i c xi}/(xi -+ i a) dxi for c > 0, a > 0
    p = -1j * c
    plus = np.exp(p * (-1j * a)) * exp1(p * (xi_max - 1j * a))
    minus = np.exp(p * (1j * a)) * exp1(p * (xi_max + 1j * a))
    return plus, minus


def _cos_frac_tail(c, a, xi_max):
    # int_X^inf cos(xi c)/(xi^2 + a^2) dxi, even in c
    c = np.abs(np.asarray(c, dtype=float))
    a = abs(a)
    out = np.empty(c.shape)
    zero = c == 0
    out[zero] = (np.pi / 2 - np.arctan(xi_max / a)) / a
    if np.any(~zero):
        plus, minus = _exp1_pair(c[~zero], a, xi_max)
        out[~zero] = ((plus - minus) / (2j * a)).real
    return out


def _sin_frac_tail(c, a, xi_max):
    # int_X^inf sin(xi c) xi/(xi^2 + a^2) dxi, odd in c
    c = np.asarray(c, dtype=float)
    sgn = np.sign(c)
    ca = np.abs(c)
    a = abs(a)
    out = np.zeros(ca.shape)
    nz = ca > 0
    if np.any(nz):
        plus, minus = _exp1_pair(ca[nz], a, xi_max)
        out[nz] = ((plus + minus) / 2).imag
    return sgn * out


def _kernel_tail(kind, alpha, t, x, y, xi_max):
    """Exact xi > xi_max completion of the k = 0 kernel integral.

    Derived from the product decomposition of the family: with u = x - y and
    v = x + y the Dirichlet product is (cos(xi u) - cos(xi v))/2, and the
    Robin product adds correction terms with 1/(xi^2 + alpha^2) envelopes.
    Returns the raw tail integral (the caller applies the 2/pi weight).
    """
    u = x - y
    v = x + y
    tail = 0.25 * (_si_tail(t + u, xi_max) + _si_tail(t - u, xi_max))
    if kind == "dirichlet":
        return tail - 0.25 * (_si_tail(t + v, xi_max) + _si_tail(t - v, xi_max))
    if alpha == 0.0:
        return tail + 0.25 * (_si_tail(t + v, xi_max) + _si_tail(t - v, xi_max))
    a = alpha
    tail = tail - 0.25 * (_si_tail(t + v, xi_max) + _si_tail(t - v, xi_max))
    tail = tail + (a / 2.0) * (_cos_frac_tail(t - v, a, xi_max)
                               - _cos_frac_tail(t + v, a, xi_max))
    tail = tail + 0.5 * (_sin_frac_tail(t + v, a, xi_max)
                         + _sin_frac_tail(t - v, a, xi_max))
    return tail


def causal_kernel(res: SpectralResolution, t, x, y, tails: Optional[bool] = None):
    """Sample the causal kernel G(t; x, y) at broadcastable points.

    Points need not lie on the resolution's x grid: the eigenfamily has a
    closed form.  ``tails`` controls the analytic completion of the truncated
    frequency integral; it defaults to on whenever the closed form exists
    (static families at k = 0) and off otherwise.  For extended resolutions
    this is the bulk-bulk block of the extended kernel; the boundary channel
    enters through the source lift in :func:`wentzell_apply`.
    """
    if tails is None:
        tails = res.k == 0.0 and not res.extended
    if tails and (res.k != 0.0 or res.extended):
        raise ValueError("tail completion only exists for static families at k = 0")
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast_shapes(t.shape, x.shape, y.shape)
    tt = np.broadcast_to(t, shape).ravel()
    xx = np.broadcast_to(x, shape).ravel()
    yy = np.broadcast_to(y, shape).ravel()
    out = np.zeros(tt.size)
    w = res.xi_weights()
    for i0 in range(0, res.xi.size, 256):
        sl = slice(i0, min(i0 + 256, res.xi.size))
        phi_x, _ = res.family_block(sl, points=xx)
        phi_y, _ = res.family_block(sl, points=yy)
        lam = (res.xi[sl] ** 2 + res.k ** 2)[:, None]
        s = sin_propagator(lam, tt[None, :])
        out += (w[sl][:, None] * s * phi_x * phi_y).sum(axis=0)
    out *= res.weight
    if res.bound is not None:
        b = res.bound
        out += (sin_propagator(b.lam, tt) * b.profile(xx) * b.profile(yy))
    if tails:
        out += res.weight * _kernel_tail(res.kind, res.alpha, tt, xx, yy,
                                         float(res.xi[-1]))
    return out.reshape(shape)


@dataclass
class KernelGrid:
    """Causal kernel sampled on a (t, x, y) tensor grid."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def to_csv(self, path) -> None:
        """Rows (t, x, y, value) at full round-trip precision."""
        with open(path, "w") as fh:
            fh.write("t,x,y,value\n")
            for i, tv in enumerate(self.t):
                for j, xv in enumerate(self.x):
                    for l, yv in enumerate(self.y):
                        fh.write(f"{tv:.17g},{xv:.17g},{yv:.17g},"
                                 f"{self.values[i, j, l]:.17g}\n")

    def to_binary(self, path_base) -> None:
        """Raw row-major doubles plus a JSON sidecar describing the axes."""
        self.values.astype("<f8").tofile(str(path_base) + ".bin")
        sidecar = {
            "dtype": "<f8",
            "order": "C",
            "shape": list(self.values.shape),
            "axes": {
                "t": [float(self.t[0]), float(self.t[-1]), int(self.t.size)],
                "x": [float(self.x[0]), float(self.x[-1]), int(self.x.size)],
                "y": [float(self.y[0]), float(self.y[-1]), int(self.y.size)],
            },
            "meta": self.meta,
        }
        with open(str(path_base) + ".json", "w") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)

    @classmethod
    def from_binary(cls, path_base) -> "KernelGrid":
        with open(str(path_base) + ".json") as fh:
            sidecar = json.load(fh)
        values = np.fromfile(str(path_base) + ".bin", dtype=sidecar["dtype"])
        values = values.reshape(sidecar["shape"])
        ax = sidecar["axes"]
        return cls(t=np.linspace(*ax["t"][:2], ax["t"][2]),
                   x=np.linspace(*ax["x"][:2], ax["x"][2]),
                   y=np.linspace(*ax["y"][:2], ax["y"][2]),
                   values=values, meta=sidecar.get("meta", {}))


def build_kernel_grid(res: SpectralResolution, t, x, y,
                      tails: Optional[bool] = None) -> KernelGrid:
    """Evaluate the causal kernel on the tensor grid t (x) x (x) y."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    T, X, Y = np.meshgrid(t, x, y, indexing="ij")
    values = causal_kernel(res, T, X, Y, tails=tails)
    meta = {
        "kind": res.kind,
        "alpha": res.alpha,
        "k": res.k,
        "quadrature": {"xi_max": float(res.xi[-1]), "nodes": int(res.xi.size)},
        "tails": bool(tails) if tails is not None
                 else (res.k == 0.0 and not res.extended),
    }
    return KernelGrid(t=t, x=x, y=y, values=values, meta=meta)


# ---------------------------------------------------------------------------
# space-time appliers

def _source_coefficients(res: SpectralResolution, f, extend: bool):
    """Per-mode coefficients c_xi(t) of a space-time source (nt, nx)."""
    f = np.asarray(f, dtype=float)
    fb = f[:, 0] if extend else 0.0
    return res.analyze(f, fb)


def _check_source_window(res, f, t):
    f = np.asarray(f)
    if f.size == 0 or np.max(np.abs(f)) == 0:
        return
    scale = np.max(np.abs(f))
    edge = max(np.max(np.abs(f[0])), np.max(np.abs(f[-1])))
    if edge > 1e-8 * scale:
        warnings.warn(
            f"source support touches the time window edge "
            f"(edge/peak = {edge / scale:.2e}); one-sided appliers lose "
            "contributions from outside the window",
            TruncationWarning, stacklevel=3)
    check_decay(f, res.dx, what="source spatial support")


def _harmonics(res, t):
    om = np.sqrt(res.omega_sq())
    pos = om > 0
    omc = np.where(pos, om, 1.0)
    s = np.where(pos[None, :], np.sin(np.multiply.outer(t, om)),
                 np.broadcast_to(t[:, None], (t.size, om.size)))
    c = np.where(pos[None, :], np.cos(np.multiply.outer(t, om)), 1.0)
    return om, pos, omc, s, c


def _bound_harmonics(res, t):
    # sin/sinh share the addition formula the appliers factor through
    if res.bound.lam < 0:
        mu = np.sqrt(-res.bound.lam)
        return np.sinh(mu * t), np.cosh(mu * t), mu
    om = np.sqrt(res.bound.lam)
    return np.sin(om * t), np.cos(om * t), om


def _apply(res: SpectralResolution, f, t, support: str):
    """Shared machinery behind the causal/retarded/advanced appliers.

    The time convolution with s(lam, t - t') factorizes through the addition
    formulas of sin/sinh, so each mode costs two cumulative integrals over
    the source instead of a dense (t, t') contraction.
    """
    t = np.asarray(t, dtype=float)
    dt = float(t[1] - t[0])
    f = np.asarray(f, dtype=float)
    if f.shape != (t.size, res.x.size):
        raise ValueError("source must be sampled on the (t, x) grid of the call")
    _check_source_window(res, f, t)
    coeffs, cb = _source_coefficients(res, f, res.extended)

    om, pos, omc, s, c = _harmonics(res, t)

    def pair_integrals(a, b):
        # returns I_a, I_b: integrals of a*coeffs and b*coeffs over the window
        # dictated by `support`
        if support == "causal":
            Ia = np.trapezoid(a * coeffs, dx=dt, axis=0)[None, :] * np.ones((t.size, 1))
            Ib = np.trapezoid(b * coeffs, dx=dt, axis=0)[None, :] * np.ones((t.size, 1))
            return Ia, Ib
        pre_a = cumulative_trapezoid(a * coeffs, dx=dt, axis=0, initial=0.0)
        pre_b = cumulative_trapezoid(b * coeffs, dx=dt, axis=0, initial=0.0)
        if support == "retarded":
            return pre_a, pre_b
        return pre_a[-1] - pre_a, pre_b[-1] - pre_b  # suffix integrals

    Ic, Is = pair_integrals(c, s)
    if support in ("causal", "retarded"):
        D = (s * Ic - c * Is) / omc[None, :]
    else:
        D = (c * Is - s * Ic) / omc[None, :]
    # omega = 0 node: s(0, t - t') = t - t'
    if np.any(~pos):
        idx = np.where(~pos)[0]
        if support == "causal":
            m0 = np.trapezoid(coeffs[:, idx], dx=dt, axis=0)
            m1 = np.trapezoid(t[:, None] * coeffs[:, idx], dx=dt, axis=0)
            D[:, idx] = t[:, None] * m0[None, :] - m1[None, :]
        else:
            p0 = cumulative_trapezoid(coeffs[:, idx], dx=dt, axis=0, initial=0.0)
            p1 = cumulative_trapezoid(t[:, None] * coeffs[:, idx], dx=dt, axis=0,
                                      initial=0.0)
            if support == "retarded":
                D[:, idx] = t[:, None] * p0 - p1
            else:
                D[:, idx] = (p1[-1] - p1) - t[:, None] * (p0[-1] - p0)

    Db = None
    if res.bound is not None:
        sb, cbh, rate = _bound_harmonics(res, t)
        if support == "causal":
            Icb = np.full(t.size, np.trapezoid(cbh * cb, dx=dt))
            Isb = np.full(t.size, np.trapezoid(sb * cb, dx=dt))
        else:
            pc = cumulative_trapezoid(cbh * cb, dx=dt, initial=0.0)
            ps = cumulative_trapezoid(sb * cb, dx=dt, initial=0.0)
            if support == "retarded":
                Icb, Isb = pc, ps
            else:
                Icb, Isb = pc[-1] - pc, ps[-1] - ps
        Db = (sb * Icb - cbh * Isb) / rate
        if support == "advanced":
            Db = -Db

    out = res.synthesize(D, Db)
    return out[0] if res.extended else out


def apply_causal(res: SpectralResolution, f, t):
    """Field of the causal propagator for a space-time source f(t, x).

    Annihilates sources of the form (d_tt + A) g for compactly supported g,
    and solves the homogeneous equation away from the source support.
    """
    return _apply(res, f, t, "causal")


def apply_retarded(res: SpectralResolution, f, t):
    """Retarded solution of (d_tt + A) u = f; vanishes before the source."""
    return _apply(res, f, t, "retarded")


def apply_advanced(res: SpectralResolution, f, t):
    """Advanced solution of (d_tt + A) u = f; vanishes after the source."""
    return _apply(res, f, t, "advanced")


def wentzell_apply(res: SpectralResolution, f, t, support: str = "retarded"):
    """Field of the dynamical-condition propagator for a bulk source.

    The source is lifted to the extended space by pairing it with its own
    boundary trace, propagated through the extended family, and projected
    back to the bulk.  The output obeys the dynamical boundary condition
    u'(0) = (d_tt + k^2) u(0) up to discretization error.
    """
    if not res.extended:
        raise ValueError("needs an extended (dynamical) resolution")
    if support not in ("causal", "retarded", "advanced"):
        raise ValueError(f"unknown support {support!r}")
    return _apply(res, f, t, support)


def evolve_cauchy(res: SpectralResolution, u0, v0, times):
    """Homogeneous evolution from initial data (u0, v0).

    u(t) = cos-propagator(t) u0 + sin-propagator(t) v0 through the
    resolution; u(0) = u0 exactly and du/dt(0) = v0.  Extended resolutions
    accept :class:`halfwave.spectral.ExtendedState` data (plain arrays are
    lifted compatibly).
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if isinstance(u0, ExtendedState):
        fb0, u0 = u0.v, u0.u
    else:
        u0 = np.asarray(u0, dtype=float)
        fb0 = u0[0] if res.extended else 0.0
    if isinstance(v0, ExtendedState):
        fb1, v0 = v0.v, v0.u
    else:
        v0 = np.asarray(v0, dtype=float)
        fb1 = v0[0] if res.extended else 0.0
    a, ab = res.analyze(u0, fb0)
    b, bb = res.analyze(v0, fb1)
    lam = res.omega_sq()
    coeff = (cos_propagator(lam[None, :], times[:, None]) * a[None, :]
             + sin_propagator(lam[None, :], times[:, None]) * b[None, :])
    cbt = None
    if res.bound is not None:
        lb = res.bound.lam
        cbt = (cos_propagator(lb, times) * ab + sin_propagator(lb, times) * bb)
    out = res.synthesize(coeff, cbt)
    return out[0] if res.extended else out


def kernel_time_derivative_apply(res: SpectralResolution, g):
    """Apply the t = 0 time derivative of the causal kernel to a function.

    The equal-time derivative is a reproducing (delta-type) kernel, so the
    output should reproduce ``g`` up to quadrature residuals.
    """
    c, cb = res.analyze(np.asarray(g, dtype=float),
                        g[0] if res.extended else 0.0)
    out = res.synthesize(c, cb)
    return out[0] if res.extended else out


def conformal_wrap(apply_fn: Callable, profile: WarpedProfile) -> Callable:
    """Wrap a reduced-model applier into the warped-metric one.

    Returns ``f -> pre * apply_fn(post * f)`` with the pointwise multipliers
    of :func:`halfwave.model.conformal_factors`.  For beta identically 1 the
    wrapped applier equals the original.
    """
    pre, post = conformal_factors(profile)

    def wrapped(f, *args, **kwargs):
        f = np.asarray(f, dtype=float)
        return pre * apply_fn(f * post, *args, **kwargs)

    return wrapped
