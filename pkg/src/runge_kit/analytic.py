"""Numerical certification of the estimates for j and Siegel functions near infinity.

Evaluation is vectorised over numpy arrays of sample points. Reports are
deterministic functions of ``(samples, seed)``: every sample is drawn up front
from one seeded generator and the worst case is a max/min reduction, so the
result does not depend on how the evaluation is chunked.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np

from .exactmath import ell
from .gl2 import UnitLabel, label_classes

__all__ = [
    "DEFAULT_TERMS",
    "UpperHalfPoint",
    "VerificationReport",
    "reduce_to_D",
    "in_D",
    "j_coefficients",
    "eval_j",
    "j_remainder",
    "eval_siegel",
    "log_abs_siegel",
    "siegel_deviation",
    "prop_j_ratio",
    "sample_D",
    "sample_strip",
    "check_prop_j",
    "check_cor_j",
    "check_siegel_D",
    "check_siegel_global",
    "PROP_J_CONSTANT",
]

DEFAULT_TERMS = 40
PROP_J_CONSTANT = 330000.0
PROP_J_QMAX = 0.005
TWO_PI = 2.0 * math.pi
SQRT3_2 = math.sqrt(3.0) / 2.0
# smallest imaginary part with |q| <= 0.005
PROP_J_IM_MIN = math.log(1.0 / PROP_J_QMAX) / TWO_PI


@dataclass(frozen=True)
class UpperHalfPoint:
    re: float
    im: float

    def __post_init__(self):
        if not self.im > 0:
            raise ValueError(f"imaginary part must be positive, got {self.im}")

    @property
    def tau(self) -> complex:
        return complex(self.re, self.im)

    @property
    def q(self) -> complex:
        return np.exp(2j * np.pi * self.tau)

    @classmethod
    def of(cls, tau) -> "UpperHalfPoint":
        if isinstance(tau, UpperHalfPoint):
            return tau
        tau = complex(tau)
        return cls(tau.real, tau.imag)


@dataclass
class VerificationReport:
    check_name: str
    sample_count: int
    worst_value: float
    worst_witness: dict[str, Any]
    passed: bool
    seed: int
    threshold: float | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


# -- fundamental domain --------------------------------------------------------

_EPS = 1e-12


def reduce_to_D(tau) -> tuple[complex, tuple[int, int, int, int]]:
    """Move ``tau`` into the closed fundamental domain.

    Returns ``(tau', (a, b, c, d))`` with ``tau' = (a tau + b) / (c tau + d)``.
    Boundary points are sent to the left half: ``re = -1/2`` rather than ``+1/2``
    and the arc ``|tau| = 1`` only for ``re <= 0``.
    """
    z = UpperHalfPoint.of(tau).tau
    a, b, c, d = 1, 0, 0, 1
    for _ in range(10_000):
        n = math.floor(z.real + 0.5)
        if n:
            z -= n
            a, b = a - n * c, b - n * d
        if abs(z) < 1.0 - _EPS:
            z = -1.0 / z
            a, b, c, d = -c, -d, a, b
            continue
        break
    else:
        raise RuntimeError("reduction did not terminate")
    if z.real >= 0.5 - _EPS:
        z -= 1
        a, b = a - c, b - d
    if abs(abs(z) - 1.0) <= _EPS and z.real > _EPS:
        z = -1.0 / z
        a, b, c, d = -c, -d, a, b
    return z, (a, b, c, d)


def in_D(tau, tol: float = 1e-12) -> bool:
    z = complex(tau)
    return -0.5 - tol <= z.real <= 0.5 + tol and abs(z) >= 1 - tol and z.imag > 0


# -- j -------------------------------------------------------------------------

@lru_cache(maxsize=None)
def j_coefficients(n_terms: int) -> tuple[int, ...]:
    """Exact Fourier coefficients ``c(-1), c(0), ..., c(n_terms - 2)`` of j."""
    L = n_terms
    sigma3 = [0] * L
    for d in range(1, L):
        for m in range(d, L, d):
            sigma3[m] += d ** 3
    e4 = [1] + [240 * sigma3[n] for n in range(1, L)]
    e4_3 = _mul(_mul(e4, e4, L), e4, L)
    # prod (1 - q^n)^24
    eta24 = [1] + [0] * (L - 1)
    for n in range(1, L):
        for _ in range(24):
            for k in range(L - 1, n - 1, -1):
                eta24[k] -= eta24[k - n]
    # e4^3 / eta24, leading coefficient 1 so the division is exact
    out = [0] * L
    for k in range(L):
        out[k] = e4_3[k] - sum(out[i] * eta24[k - i] for i in range(k))
    return tuple(out)


def _mul(a, b, L):
    out = [0] * L
    for i, x in enumerate(a[:L]):
        if x:
            for j in range(L - i):
                out[i + j] += x * b[j]
    return out


def _terms_needed(qabs: float, terms: int, power: int = 3) -> int:
    """At least ``terms``, more when ``|q|`` is large enough that the tail matters."""
    if qabs <= 0:
        return terms
    n = terms
    while n < 4000 and n ** power * qabs ** n > 1e-18:
        n += 1
    return n


def eval_j(tau, terms: int = DEFAULT_TERMS):
    """``j = (12 c2)^3 / Delta`` from the Eisenstein and product series.

    Accepts a scalar or an array of points; requires ``|q| <= 0.5``.
    """
    t = np.asarray(tau, dtype=complex)
    q = np.exp(2j * np.pi * t)
    qmax = float(np.max(np.abs(q))) if q.size else 0.0
    if qmax > 0.5:
        raise ValueError(f"|q| = {qmax:.3g} > 0.5; reduce to the fundamental domain first")
    n_terms = _terms_needed(qmax, terms)
    n = np.arange(1, n_terms + 1)
    qn = q[..., None] ** n
    s = np.sum(n ** 3 * qn / (1 - qn), axis=-1)
    e4 = 1 + 240 * s
    prod = np.exp(24 * np.sum(np.log1p(-qn), axis=-1))
    out = e4 ** 3 / (q * prod)
    return out if out.ndim else complex(out)


def j_remainder(tau, terms: int = DEFAULT_TERMS):
    """``j - 1/q - 744`` summed from exact Fourier coefficients (no cancellation).

    Requires ``|q| <= 0.01``; the truncation error is below ``1e-18 |q|``.
    """
    t = np.asarray(tau, dtype=complex)
    q = np.exp(2j * np.pi * t)
    qmax = float(np.max(np.abs(q))) if q.size else 0.0
    if qmax > 0.01:
        raise ValueError("j_remainder needs |q| <= 0.01")
    coeffs = j_coefficients(terms + 2)[2:]  # c(1), c(2), ...
    acc = np.zeros_like(q)
    for c in reversed(coeffs):
        acc = acc * q + float(c)
    out = acc * q
    return out if out.ndim else complex(out)


def prop_j_ratio(tau, terms: int = DEFAULT_TERMS):
    """``|j - 1/q - 744| / |q|``."""
    t = np.asarray(tau, dtype=complex)
    q = np.exp(2j * np.pi * t)
    out = np.abs(j_remainder(t, terms)) / np.abs(q)
    return out if np.ndim(out) else float(out)


# -- Siegel functions ------------------------------------------------------------

def _label_parts(a) -> tuple[float, float, Fraction]:
    if isinstance(a, UnitLabel):
        f1, f2 = a.as_fractions()
    else:
        f1, f2 = Fraction(a[0]) % 1, Fraction(a[1]) % 1
        if f1 == 0 and f2 == 0:
            raise ValueError("Siegel function of the zero label")
    return float(f1), float(f2), f1


def _log_abs_one_minus(w):
    # log|1 - w| = 0.5 * log1p(|w|^2 - 2 Re w), accurate for small w
    return 0.5 * np.log1p(w.real * w.real + w.imag * w.imag - 2.0 * w.real)


def _deviation_arrays(a1, a2, tau, terms: int):
    """``log|g_a(tau)| - B2(a1)/2 * log|q|`` for broadcastable arrays, ``0 <= a1 < 1``."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    tau = np.asarray(tau, dtype=complex)
    qabs_max = float(np.max(np.exp(-TWO_PI * tau.imag))) if tau.size else 0.0
    zeta = np.exp(TWO_PI * 1j * a2)
    x1 = np.exp(TWO_PI * 1j * a1 * tau) * zeta          # q^a1 zeta
    x2 = np.exp(TWO_PI * 1j * (1.0 - a1) * tau) / zeta  # q^(1-a1) zeta^-1
    q = np.exp(TWO_PI * 1j * tau)
    total = _log_abs_one_minus(x1) + _log_abs_one_minus(x2)
    qn = np.ones_like(q)
    n_terms = _terms_needed(qabs_max, terms, power=0) if qabs_max > 0.05 else terms
    for _ in range(1, n_terms):
        qn = qn * q
        if float(np.max(np.abs(qn))) < 1e-30:
            break
        total = total + _log_abs_one_minus(qn * x1) + _log_abs_one_minus(qn * x2)
    return total


def siegel_deviation(a, tau, terms: int = DEFAULT_TERMS):
    """``log|g_a(tau)| - ell_a log|q_tau|`` from the product expansion."""
    f1, f2, _ = _label_parts(a)
    out = _deviation_arrays(f1, f2, tau, terms)
    return out if np.ndim(out) else float(out)


def log_abs_siegel(a, tau, terms: int = DEFAULT_TERMS):
    f1, f2, fr = _label_parts(a)
    tau_arr = np.asarray(tau, dtype=complex)
    lead = float(ell((fr, Fraction(f2)))) if fr or f2 else 0.0
    out = lead * (-TWO_PI * tau_arr.imag) + _deviation_arrays(f1, f2, tau_arr, terms)
    return out if np.ndim(out) else float(out)


def eval_siegel(a, tau, terms: int = DEFAULT_TERMS):
    """Siegel function ``g_a(tau)`` by its truncated product, first coordinate in ``[0, 1)``.

    ``-q^(B2(a1)/2) e^(pi i a2 (a1 - 1)) prod_n (1 - q^(n+a1) zeta)(1 - q^(n+1-a1) / zeta)``
    """
    f1, f2, fr = _label_parts(a)
    t = np.asarray(tau, dtype=complex)
    b2 = f1 * f1 - f1 + 1.0 / 6.0
    pref = -np.exp(TWO_PI * 1j * (b2 / 2.0) * t) * np.exp(1j * math.pi * f2 * (f1 - 1.0))
    zeta = np.exp(TWO_PI * 1j * f2)
    q = np.exp(TWO_PI * 1j * t)
    qabs_max = float(np.max(np.abs(q))) if q.size else 0.0
    n_terms = _terms_needed(qabs_max, terms, power=0)
    prod = np.ones_like(t)
    x1 = np.exp(TWO_PI * 1j * f1 * t) * zeta
    x2 = np.exp(TWO_PI * 1j * (1 - f1) * t) / zeta
    qn = np.ones_like(q)
    for _ in range(n_terms):
        prod = prod * (1 - qn * x1) * (1 - qn * x2)
        qn = qn * q
    out = pref * prod
    return out if out.ndim else complex(out)


# -- sampling ----------------------------------------------------------------

def sample_strip(n: int, seed: int, im_min: float) -> np.ndarray:
    """``re`` uniform on ``[-1/2, 1/2)``, ``im = im_min + Exp(1)``."""
    rng = np.random.default_rng(seed)
    re = rng.uniform(-0.5, 0.5, n)
    im = im_min + rng.exponential(1.0, n)
    return re + 1j * im


def sample_D(n: int, seed: int) -> np.ndarray:
    """Points of the fundamental domain by rejection from the strip above sqrt(3)/2."""
    rng = np.random.default_rng(seed)
    out = []
    have = 0
    while have < n:
        m = max(2 * (n - have), 64)
        re = rng.uniform(-0.5, 0.5, m)
        im = SQRT3_2 + rng.exponential(1.0, m)
        z = re + 1j * im
        z = z[np.abs(z) >= 1.0]
        out.append(z)
        have += z.size
    return np.concatenate(out)[:n]


def sample_H(n: int, seed: int, im_range=(0.05, 10.0), re_range=(-2.0, 2.0)) -> np.ndarray:
    """Points anywhere in a box of the upper half-plane, log-uniform in ``im``."""
    rng = np.random.default_rng(seed)
    re = rng.uniform(*re_range, n)
    im = np.exp(rng.uniform(math.log(im_range[0]), math.log(im_range[1]), n))
    return re + 1j * im


def _witness(z: complex, **extra) -> dict:
    return {"re": float(z.real), "im": float(z.imag), **extra}


# -- checks ------------------------------------------------------------------

def check_prop_j(samples: int = 10_000, seed: int = 0, terms: int = DEFAULT_TERMS,
                 hi_prec: bool = False) -> VerificationReport:
    """Worst ``|j - 1/q - 744| / |q|`` over points with ``|q| <= 0.005``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    z = sample_strip(samples, seed, PROP_J_IM_MIN)
    ratio = np.asarray(prop_j_ratio(z, terms))
    k = int(np.argmax(ratio))
    worst = float(ratio[k])
    rep = VerificationReport("prop-j", samples, worst, _witness(z[k]), worst <= PROP_J_CONSTANT,
                             seed, PROP_J_CONSTANT)
    if hi_prec:
        rep.details["hi_prec_worst"] = _hp_prop_j(z[k])
    return rep


def check_cor_j(samples: int = 10_000, seed: int = 0, terms: int = DEFAULT_TERMS,
                hi_prec: bool = False) -> VerificationReport:
    """The three consequences for points of the fundamental domain.

    1. ``|log|q|| <= log(|j| + 2400)``
    2. ``|j| <= 3500`` or ``|q| < 0.001``
    3. if ``|j| > 3500``: ``|j - 1/q| <= 1100`` and ``|j|/2 <= |1/q| <= 3|j|/2``
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    z = sample_D(samples, seed)
    j = np.asarray(eval_j(z, terms))
    q = np.exp(2j * np.pi * z)
    aj = np.abs(j)
    aq = np.abs(q)
    slack1 = np.log(aj + 2400.0) - np.abs(np.log(aq))
    # near infinity both logs are ~ -log|q|; use log(|jq| + 2400|q|) with
    # jq = 1 + x, x = 744 q + q * remainder, to avoid cancellation
    small = aq < 0.01
    if np.any(small):
        qs = q[small]
        x = qs * (744.0 + np.asarray(j_remainder(z[small], terms)))
        ax2 = x.real * x.real + x.imag * x.imag
        abs1x_m1 = (2.0 * x.real + ax2) / (np.sqrt(1.0 + 2.0 * x.real + ax2) + 1.0)
        slack1[small] = np.log1p(abs1x_m1 + 2400.0 * aq[small])
    ok2 = (aj <= 3500.0) | (aq < 0.001)
    big = aj > 3500.0
    # j - 1/q = 744 + remainder; the remainder route avoids cancellation
    diff = np.full(z.shape, np.nan)
    if np.any(big):
        diff[big] = np.abs(744.0 + np.asarray(j_remainder(z[big], terms)))
    inv = 1.0 / aq
    slack3a = np.where(big, 1100.0 - np.nan_to_num(diff), np.inf)
    slack3b = np.where(big, np.minimum(1.5 * aj - inv, inv - 0.5 * aj), np.inf)
    # item 3 is stated relatively: scale the sandwich slack by |j|
    rel3b = np.where(big, slack3b / np.where(big, aj, 1.0), np.inf)
    items = {
        "item1_min_slack": float(np.min(slack1)),
        "item2_violations": int(np.count_nonzero(~ok2)),
        "item3_count": int(np.count_nonzero(big)),
        "item3_min_slack_1100": float(np.min(slack3a)) if np.any(big) else None,
        "item3_min_rel_slack_sandwich": float(np.min(rel3b)) if np.any(big) else None,
    }
    passed = (items["item1_min_slack"] >= 0 and items["item2_violations"] == 0
              and (not np.any(big) or (np.min(slack3a) >= 0 and np.min(slack3b) >= 0)))
    k = int(np.argmin(slack1))
    rep = VerificationReport("cor-j", samples, float(slack1[k]), _witness(z[k]), bool(passed),
                             seed, 0.0, items)
    if hi_prec:
        rep.details["hi_prec_worst"] = _hp_cor_j(z[k])
    return rep


def _labels_arrays(N: int):
    labs = label_classes(N)
    k1 = np.array([a.k1 for a in labs])
    k2 = np.array([a.k2 for a in labs])
    ells = np.array([float(ell(a)) for a in labs])
    return labs, k1, k2, ells


def check_siegel_D(N: int, samples: int = 1000, seed: int = 0, terms: int = DEFAULT_TERMS,
                   hi_prec: bool = False, chunk: int = 64) -> VerificationReport:
    """Worst slack ``log N - |log|g_a| - ell_a log|q||`` over labels of level N and
    sampled points of the fundamental domain.

    For N = 2 the inequality is known to fail marginally near ``tau = i``; the
    report is produced with ``details["informational"] = True``.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    z = sample_D(samples, seed)
    labs, k1, k2, _ = _labels_arrays(N)
    logN = math.log(N)
    best = (math.inf, 0, 0)
    for s in range(0, len(labs), chunk):
        a1 = (k1[s:s + chunk] / N)[:, None]
        a2 = (k2[s:s + chunk] / N)[:, None]
        dev = np.abs(_deviation_arrays(a1, a2, z[None, :], terms))
        slack = logN - dev
        i, j = np.unravel_index(int(np.argmin(slack)), slack.shape)
        if slack[i, j] < best[0]:
            best = (float(slack[i, j]), s + int(i), int(j))
    worst, li, zi = best
    lab = labs[li]
    rep = VerificationReport("siegel-d", samples, worst,
                             _witness(z[zi], label=[lab.k1, lab.k2], level=N),
                             worst >= 0, seed, 0.0, {"label_classes": len(labs)})
    if N == 2:
        rep.details["informational"] = True
    if hi_prec:
        rep.details["hi_prec_worst"] = logN - abs(_hp_deviation(lab, z[zi]))
    return rep


def _reduce_many(z: np.ndarray):
    zz = np.empty_like(z)
    gam = np.empty((z.size, 4), dtype=np.int64)
    for i, t in enumerate(z):
        zz[i], g = reduce_to_D(t)
        gam[i] = g
    return zz, gam


def check_siegel_global(N: int, samples: int = 1000, seed: int = 0, terms: int = DEFAULT_TERMS,
                        hi_prec: bool = False) -> VerificationReport:
    """``|log|g_a(tau)|| <= log(|j(tau)| + 2400) / 12 + log N`` for tau anywhere in H.

    Each point is reduced to the fundamental domain by some gamma; then
    ``|g_a(tau)| = |g_{a gamma^-1}(gamma tau)|``.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    z = sample_H(samples, seed)
    zr, gam = _reduce_many(z)
    j = np.asarray(eval_j(zr, terms))
    rhs = np.log(np.abs(j) + 2400.0) / 12.0 + math.log(N)
    labs, k1, k2, _ = _labels_arrays(N)
    a, b, c, d = (gam[:, i] for i in range(4))
    best = (math.inf, 0, 0)
    for li in range(len(labs)):
        # a . gamma^-1 with gamma^-1 = [[d, -b], [-c, a]]
        m1 = (k1[li] * d - k2[li] * c) % N
        m2 = (-k1[li] * b + k2[li] * a) % N
        f1 = m1 / N
        f2 = m2 / N
        b2 = f1 * f1 - f1 + 1.0 / 6.0
        lhs = np.abs(b2 / 2.0 * (-TWO_PI * zr.imag) + _deviation_arrays(f1, f2, zr, terms))
        slack = rhs - lhs
        i = int(np.argmin(slack))
        if slack[i] < best[0]:
            best = (float(slack[i]), li, i)
    worst, li, zi = best
    lab = labs[li]
    rep = VerificationReport("siegel-global", samples, worst,
                             _witness(z[zi], label=[lab.k1, lab.k2], level=N),
                             worst >= 0, seed, 0.0)
    if hi_prec:
        rep.details["hi_prec_worst"] = _hp_global(lab, z[zi])
    return rep


# -- high precision re-checks (mpmath) --------------------------------------------

def _mp():
    import mpmath

    mpmath.mp.dps = 40
    return mpmath


def _hp_j(tau):
    mp = _mp()
    return 1728 * mp.kleinj(mp.mpc(tau.real, tau.imag))


def _hp_prop_j(tau) -> float:
    mp = _mp()
    t = mp.mpc(tau.real, tau.imag)
    q = mp.exp(2j * mp.pi * t)
    return float(abs(_hp_j(tau) - 1 / q - 744) / abs(q))


def _hp_cor_j(tau) -> float:
    mp = _mp()
    t = mp.mpc(tau.real, tau.imag)
    q = mp.exp(2j * mp.pi * t)
    return float(mp.log(abs(_hp_j(tau)) + 2400) - abs(mp.log(abs(q))))


def _hp_deviation(a: UnitLabel, tau) -> float:
    mp = _mp()
    f1, f2 = (mp.mpf(x.numerator) / x.denominator for x in a.as_fractions())
    t = mp.mpc(tau.real, tau.imag)
    q = mp.exp(2j * mp.pi * t)
    zeta = mp.exp(2j * mp.pi * f2)
    x1 = mp.exp(2j * mp.pi * f1 * t) * zeta
    x2 = mp.exp(2j * mp.pi * (1 - f1) * t) / zeta
    tot = mp.mpf(0)
    qn = mp.mpf(1)
    for _ in range(400):
        tot += mp.log(abs(1 - qn * x1)) + mp.log(abs(1 - qn * x2))
        qn *= q
        if abs(qn) < mp.mpf(10) ** -45:
            break
    return float(tot)


def _hp_global(a: UnitLabel, tau) -> float:
    mp = _mp()
    zr, (ga, gb, gc, gd) = reduce_to_D(tau)
    N = a.level
    lab = UnitLabel(N, a.k1 * gd - a.k2 * gc, -a.k1 * gb + a.k2 * ga)
    lead = float(ell(lab)) * (-2 * math.pi * zr.imag)
    lhs = abs(lead + _hp_deviation(lab, zr))
    rhs = mp.log(abs(_hp_j(zr)) + 2400) / 12 + mp.log(N)
    return float(rhs - lhs)
