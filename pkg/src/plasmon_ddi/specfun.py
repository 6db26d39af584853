"""Special functions for the spherical multipole machinery.

Spherical Bessel/Hankel functions of complex argument, their Riccati
derivatives d/dz[z f_n(z)], and associated Legendre functions (with the
Condon-Shortley phase; all downstream angular formulas assume it).

Everything is recurrence based.  Two layers are provided:

* plain arrays of ``complex`` values -- the public surface, adequate up to
  orders where the functions stay inside double range (n ~ 120 for small
  arguments);
* scaled families ``(mantissa, 2**exponent)`` -- used by the Green-tensor
  expansion, which needs orders up to 200 where the raw Hankel values
  overflow and the Bessel values underflow.

All functions are pure; identical inputs give bit-identical outputs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_LN2 = math.log(2.0)
# rescale recurrences once values pass 2**500 (headroom to 2**1023)
_BIG_EXP = 500
_SHIFT = 512


# ---------------------------------------------------------------------------
# scaled-number helpers
# ---------------------------------------------------------------------------

def _ldexp_c(mant: np.ndarray, expo: np.ndarray) -> np.ndarray:
    """Elementwise mant * 2**expo for complex arrays; saturates to 0 below range."""
    e = np.clip(expo, -2400, 2400).astype(np.int64)
    # split the shift to stay inside ldexp's argument range
    e1 = np.clip(e, -1200, 1200)
    e2 = e - e1
    re = np.ldexp(np.ldexp(mant.real, e1), e2)
    im = np.ldexp(np.ldexp(mant.imag, e1), e2)
    return re + 1j * im


def _norm_scalar(m: complex, e: int) -> tuple[complex, int]:
    a = abs(m)
    if a == 0.0 or not math.isfinite(a):
        return m, e
    ex = math.frexp(a)[1]
    return m * math.ldexp(1.0, -ex), e + ex


def _norm_vec(mant: np.ndarray, expo: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.abs(mant)
    ok = np.isfinite(a) & (a > 0.0)
    ex = np.zeros(mant.shape, dtype=np.int64)
    _, ex_ok = np.frexp(np.where(ok, a, 1.0))
    ex[ok] = ex_ok[ok]
    return _ldexp_c(mant, -ex), expo + ex


def scaled_to_complex(mant: np.ndarray, expo: np.ndarray) -> np.ndarray:
    """Collapse a scaled family to plain complex (inf/0 outside double range)."""
    return _ldexp_c(mant, expo)


def _exp_i_scaled(z: complex) -> tuple[complex, int]:
    """exp(i z) as (mantissa, exponent); robust for large |Im z|."""
    # |exp(iz)| = exp(-Im z) = 2**(-Im z / ln 2)
    E = -z.imag / _LN2
    e_int = math.floor(E)
    mant = cmath.exp(1j * z.real) * math.pow(2.0, E - e_int)
    return _norm_scalar(mant, e_int)


def _sin_scaled(z: complex) -> tuple[complex, int]:
    mp_, ep = _exp_i_scaled(z)
    mm_, em = _exp_i_scaled(-z)
    e = max(ep, em)
    m = (mp_ * math.ldexp(1.0, ep - e) - mm_ * math.ldexp(1.0, em - e)) / 2j
    return _norm_scalar(m, e)


def _cos_scaled(z: complex) -> tuple[complex, int]:
    mp_, ep = _exp_i_scaled(z)
    mm_, em = _exp_i_scaled(-z)
    e = max(ep, em)
    m = (mp_ * math.ldexp(1.0, ep - e) + mm_ * math.ldexp(1.0, em - e)) / 2.0
    return _norm_scalar(m, e)


# ---------------------------------------------------------------------------
# scaled spherical Bessel / Hankel families
# ---------------------------------------------------------------------------

def hankel_h1_scaled(lmax: int, z: complex) -> tuple[np.ndarray, np.ndarray]:
    """h_n^(1)(z), n = 0..lmax, as a scaled family.

    Upward recurrence from the closed forms; upward is stable for the
    Hankel family because |h_n| grows with n.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("spherical Hankel function is singular at z = 0")
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    mant = np.zeros(lmax + 1, dtype=np.complex128)
    expo = np.zeros(lmax + 1, dtype=np.int64)

    em, ee = _exp_i_scaled(z)
    h0, e0 = _norm_scalar(-1j * em / z, ee)
    mant[0], expo[0] = h0, e0
    if lmax == 0:
        return mant, expo

    h1, e1 = _norm_scalar(h0 * (1.0 / z - 1j), e0)
    mant[1], expo[1] = h1, e1

    prev, eprev = h0, e0
    cur, ecur = h1, e1
    for n in range(1, lmax):
        e = max(eprev, ecur)
        pv = prev * math.ldexp(1.0, eprev - e)
        cv = cur * math.ldexp(1.0, ecur - e)
        nxt = (2 * n + 1) / z * cv - pv
        nxt, en = _norm_scalar(nxt, e)
        mant[n + 1], expo[n + 1] = nxt, en
        prev, eprev = cur, ecur
        cur, ecur = nxt, en
    return mant, expo


def bessel_j_scaled(lmax: int, z: complex, method: str = "auto") -> tuple[np.ndarray, np.ndarray]:
    """j_n(z), n = 0..lmax, as a scaled family.

    Downward recurrence with closed-form renormalization for |z| < lmax,
    upward otherwise (``method`` can force either path for cross-checks).
    z = 0 returns the exact limit values [1, 0, 0, ...].
    """
    z = complex(z)
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    mant = np.zeros(lmax + 1, dtype=np.complex128)
    expo = np.zeros(lmax + 1, dtype=np.int64)
    if z == 0:
        mant[0] = 1.0
        return mant, expo

    if method == "auto":
        method = "down" if abs(z) < lmax else "up"
    if method not in ("up", "down"):
        raise ValueError(f"unknown method {method!r}")

    s_m, s_e = _sin_scaled(z)
    c_m, c_e = _cos_scaled(z)
    j0_m, j0_e = _norm_scalar(s_m / z, s_e)

    if method == "up":
        mant[0], expo[0] = j0_m, j0_e
        if lmax == 0:
            return mant, expo
        # j_1 = sin z / z^2 - cos z / z
        e = max(s_e, c_e)
        j1 = s_m / (z * z) * math.ldexp(1.0, s_e - e) - c_m / z * math.ldexp(1.0, c_e - e)
        j1_m, j1_e = _norm_scalar(j1, e)
        mant[1], expo[1] = j1_m, j1_e
        prev, eprev = j0_m, j0_e
        cur, ecur = j1_m, j1_e
        for n in range(1, lmax):
            e = max(eprev, ecur)
            pv = prev * math.ldexp(1.0, eprev - e)
            cv = cur * math.ldexp(1.0, ecur - e)
            nxt, en = _norm_scalar((2 * n + 1) / z * cv - pv, e)
            mant[n + 1], expo[n + 1] = nxt, en
            prev, eprev = cur, ecur
            cur, ecur = nxt, en
        return mant, expo

    # downward pass from a start order with stability margin
    nstart = lmax + max(15, math.ceil(10.0 * math.sqrt(abs(z))))
    up_m, up_e = 0.0 + 0.0j, 0
    cur_m, cur_e = 1.0 + 0.0j, -600
    for n in range(nstart, 0, -1):
        if n <= lmax:
            mant[n], expo[n] = cur_m, cur_e
        e = max(up_e, cur_e)
        uv = up_m * math.ldexp(1.0, up_e - e)
        cv = cur_m * math.ldexp(1.0, cur_e - e)
        dn, en = _norm_scalar((2 * n + 1) / z * cv - uv, e)
        up_m, up_e = cur_m, cur_e
        cur_m, cur_e = dn, en
    mant[0], expo[0] = cur_m, cur_e

    # renormalize against whichever closed form is larger (j_0 can sit on a zero)
    e = max(s_e, c_e)
    j1 = s_m / (z * z) * math.ldexp(1.0, s_e - e) - c_m / z * math.ldexp(1.0, c_e - e)
    j1_m, j1_e = _norm_scalar(j1, e)
    size0 = math.log2(abs(j0_m)) + j0_e if j0_m != 0 else -math.inf
    size1 = math.log2(abs(j1_m)) + j1_e if j1_m != 0 else -math.inf
    if lmax >= 1 and size1 > size0:
        ref_m, ref_e, raw_m, raw_e = j1_m, j1_e, mant[1], expo[1]
    else:
        ref_m, ref_e, raw_m, raw_e = j0_m, j0_e, mant[0], expo[0]
    ratio_m, ratio_e = _norm_scalar(ref_m / raw_m, ref_e - raw_e)
    mant *= ratio_m
    expo += ratio_e
    return _norm_vec(mant, expo)


def riccati_scaled(mant: np.ndarray, expo: np.ndarray, z: complex) -> tuple[np.ndarray, np.ndarray]:
    """d/dz[z f_n(z)] for a scaled family (needs orders 0..1 at least)."""
    if mant.shape[0] < 2:
        raise ValueError("need at least orders 0..1 to form the Riccati derivative")
    z = complex(z)
    n = np.arange(mant.shape[0], dtype=np.float64)
    e = np.maximum(expo[:-1], expo[1:])
    lo = _ldexp_c(mant[:-1], expo[:-1] - e)
    hi = _ldexp_c(mant[1:], expo[1:] - e)
    out_m = np.empty_like(mant)
    out_e = np.empty_like(expo)
    # D_n = z f_{n-1} - n f_n  (n >= 1);  D_0 = f_0 - z f_1 from the same recurrence
    out_m[1:] = z * lo - n[1:] * hi
    out_e[1:] = e
    e0 = max(expo[0], expo[1])
    out_m[0] = mant[0] * math.ldexp(1.0, int(expo[0] - e0)) - z * mant[1] * math.ldexp(1.0, int(expo[1] - e0))
    out_e[0] = e0
    return _norm_vec(out_m, out_e)


# ---------------------------------------------------------------------------
# plain public surface
# ---------------------------------------------------------------------------

def spherical_bessel_j(lmax: int, z: complex) -> np.ndarray:
    """j_0(z)..j_lmax(z) for complex z (z = 0 returns the exact limits)."""
    return scaled_to_complex(*bessel_j_scaled(lmax, z))


def spherical_hankel_h1(lmax: int, z: complex) -> np.ndarray:
    """h_0^(1)(z)..h_lmax^(1)(z) for complex z != 0."""
    return scaled_to_complex(*hankel_h1_scaled(lmax, z))


def riccati_derivative(f: np.ndarray, z: complex) -> np.ndarray:
    """d/dz[z f_n(z)] from the family values f_0..f_lmax at z.

    Uses D_n = z f_{n-1} - n f_n for n >= 1; the n = 0 entry follows from
    the same three-term recurrence as D_0 = f_0 - z f_1, which reduces to
    the closed forms cos z (j family) and exp(iz) (h1 family).
    """
    f = np.asarray(f, dtype=np.complex128)
    if f.ndim != 1 or f.shape[0] < 2:
        raise ValueError("f must hold at least orders 0..1 of one Bessel family")
    z = complex(z)
    n = np.arange(f.shape[0], dtype=np.float64)
    out = np.empty_like(f)
    out[1:] = z * f[:-1] - n[1:] * f[1:]
    out[0] = f[0] - z * f[1]
    return out


@dataclass
class SphericalBesselSet:
    """Bundle of j, h1 and their Riccati derivatives at one argument."""

    order_max: int
    argument: complex
    values_j: np.ndarray
    values_h1: np.ndarray
    ricatti_dj: np.ndarray
    ricatti_dh1: np.ndarray


def spherical_bessel_set(lmax: int, z: complex) -> SphericalBesselSet:
    z = complex(z)
    vj = spherical_bessel_j(lmax, z)
    vh = spherical_hankel_h1(lmax, z)
    return SphericalBesselSet(
        order_max=lmax,
        argument=z,
        values_j=vj,
        values_h1=vh,
        ricatti_dj=riccati_derivative(vj, z),
        ricatti_dh1=riccati_derivative(vh, z),
    )


# ---------------------------------------------------------------------------
# associated Legendre functions
# ---------------------------------------------------------------------------

@dataclass
class LegendreSet:
    """P_l^m(x), dP_l^m/dtheta and m/sin(theta)*P_l^m on (l, m) grids.

    Arrays are (order_max+1, order_max+1), entry [l, m] valid for m <= l.
    Condon-Shortley phase included: P_1^1(cos t) = -sin t.  The
    ``m_p_over_sin`` combination is built by its own recurrence so the
    polar limits x -> +-1 are finite.
    """

    order_max: int
    argument: float
    p: np.ndarray
    dp_dtheta: np.ndarray
    m_p_over_sin: np.ndarray


def associated_legendre(lmax: int, x: float) -> LegendreSet:
    if abs(x) > 1.0:
        raise ValueError("argument must satisfy |x| <= 1")
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    L = lmax
    s = math.sqrt(max(0.0, 1.0 - x * x))
    p = np.zeros((L + 1, L + 1))
    pi_ = np.zeros((L + 1, L + 1))
    tau = np.zeros((L + 1, L + 1))

    p[0, 0] = 1.0
    for m in range(1, L + 1):
        p[m, m] = -(2 * m - 1) * s * p[m - 1, m - 1]
    if L >= 1:
        pi_[1, 1] = -1.0
    for m in range(2, L + 1):
        pi_[m, m] = -(2 * m - 1) * s * pi_[m - 1, m - 1] * m / (m - 1)

    for n in range(1, L + 1):
        for m in range(0, n):
            pnm2 = p[n - 2, m] if n >= 2 else 0.0
            p[n, m] = ((2 * n - 1) * x * p[n - 1, m] - (n - 1 + m) * pnm2) / (n - m)
            if m >= 1:
                pim2 = pi_[n - 2, m] if n >= 2 else 0.0
                pi_[n, m] = ((2 * n - 1) * x * pi_[n - 1, m] - (n - 1 + m) * pim2) / (n - m)
        for m in range(1, n + 1):
            prev = pi_[n - 1, m] if m <= n - 1 else 0.0
            tau[n, m] = (n * x * pi_[n, m] - (n + m) * prev) / m
        tau[n, 0] = p[n, 1] if n >= 1 else 0.0

    return LegendreSet(order_max=L, argument=float(x), p=p, dp_dtheta=tau, m_p_over_sin=pi_)


@lru_cache(maxsize=32)
def _angular_coeffs(lmax: int):
    L = lmax
    n = np.arange(L + 1, dtype=np.float64)[:, None]
    m = np.arange(L + 1, dtype=np.float64)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.sqrt((4.0 * n * n - 1.0) / (n * n - m * m))
    a[~np.isfinite(a)] = 0.0
    c = np.sqrt(np.maximum(0.0, (2.0 * n + 1.0) * (n + m) * (n - m) / np.maximum(2.0 * n - 1.0, 1.0)))
    return a, c


def angular_harmonics(lmax: int, costheta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthonormalized P, m P/sin and dP/dtheta for the multipole expansion.

    Normalization sqrt((2n+1)(n-m)!/2/(n+m)!) keeps every entry inside
    double range up to very high orders; the plain functions overflow
    around l ~ 150.  Condon-Shortley phase as in :func:`associated_legendre`;
    the phase cancels in the products the Green-tensor expansion forms.
    """
    if abs(costheta) > 1.0:
        raise ValueError("costheta must satisfy |x| <= 1")
    L = max(lmax, 1)
    x = float(costheta)
    s = math.sqrt(max(0.0, 1.0 - x * x))
    a, cco = _angular_coeffs(L)

    pbar = np.zeros((L + 1, L + 1))
    pibar = np.zeros((L + 1, L + 1))
    taubar = np.zeros((L + 1, L + 1))

    pbar[0, 0] = math.sqrt(0.5)
    for m in range(1, L + 1):
        pbar[m, m] = -math.sqrt((2 * m + 1) / (2.0 * m)) * s * pbar[m - 1, m - 1]
    pibar[1, 1] = -math.sqrt(3.0) / 2.0
    for m in range(2, L + 1):
        pibar[m, m] = -math.sqrt((2 * m + 1) / (2.0 * m)) * (m / (m - 1.0)) * s * pibar[m - 1, m - 1]

    mm = np.arange(L + 1, dtype=np.float64)
    zrow = np.zeros(L + 1)
    for n in range(1, L + 1):
        row2 = pbar[n - 2] if n >= 2 else zrow
        prow2 = pibar[n - 2] if n >= 2 else zrow
        an = a[n]
        bn = a[n] / np.where(a[n - 1] == 0.0, 1.0, a[n - 1])
        sl = slice(0, n)
        pbar[n, sl] = an[sl] * x * pbar[n - 1, sl] - bn[sl] * row2[sl]
        if n >= 2:
            sl1 = slice(1, n)
            pibar[n, sl1] = an[sl1] * x * pibar[n - 1, sl1] - bn[sl1] * prow2[sl1]
        sl2 = slice(1, n + 1)
        taubar[n, sl2] = (n * x * pibar[n, sl2] - cco[n, sl2] * pibar[n - 1, sl2]) / mm[sl2]
        taubar[n, 0] = math.sqrt(n * (n + 1.0)) * pbar[n, 1]
    return pbar, pibar, taubar
