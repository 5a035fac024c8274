"""Small dense spectral kernel for the recurrence criterion.

The classifier needs the eigenvalue magnitudes of the monodromy matrix: the
ordered product of one companion-style matrix per residue of the environment.
Companion entries are ratios of step probabilities, so products can mix
scales over many orders of magnitude, and trace-recurrence characteristic
polynomials computed in floating point cancel catastrophically there.  Step
probabilities are dyadic rationals, however, so this module computes the
matrix product and the characteristic polynomial in exact rational
arithmetic, rounds the coefficients to 80-bit floats, and finds all roots by
simultaneous Aberth iteration started on Newton-polygon circles.  The
backward error of the computed roots doubles as a quality metric.

Public matrices are plain float64 numpy arrays; the exact pipeline runs
underneath ``eigen_magnitudes`` and the kernel-level entry points.
"""

from __future__ import annotations

import math

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ConvergenceFailure, DegenerateDistribution
from .kernels import EnvironmentKernel, StepDistribution

MAX_ORDER = 64
RESIDUAL_LIMIT = 1e-6

FractionMatrix = list[list[Fraction]]


# ------------------------------------------------------------------ exact layer

def _scaled_a_matrix(dist: StepDistribution, R: int, L: int) -> tuple[list[list[int]], Fraction]:
    # e(-L) * A as exact dyadic entries, scaled to integers by a power of two;
    # returns the integer matrix and the total scalar it carries relative to A.
    e_left = dist.probs.get(-L, 0.0)
    if e_left <= 0.0:
        raise DegenerateDistribution(f"no probability mass on the extremal left step -{L}")
    n = R + L
    rows = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        offset = j + 1 - L
        if offset == 0:
            rows[0][j] = 1 - Fraction(dist.probs.get(0, 0.0))
        else:
            rows[0][j] = -Fraction(dist.probs.get(offset, 0.0))
    for i in range(1, n):
        rows[i][i - 1] = Fraction(e_left)
    ints, scale = _integer_matrix(rows)
    return ints, scale * Fraction(e_left)


def _integer_matrix(rows: FractionMatrix) -> tuple[list[list[int]], int]:
    scale = 1
    for row in rows:
        for entry in row:
            d = entry.denominator
            scale = scale * d // math.gcd(scale, d)
    return [[int(e * scale) for e in row] for row in rows], scale


def _int_matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _berkowitz(m: list[list[int]]) -> list[int]:
    # Division-free characteristic polynomial: the coefficient vector of an
    # n x n matrix is a Toeplitz product with the vector of its trailing
    # principal submatrix, so integer input stays integer throughout.
    n = len(m)
    if n == 1:
        return [1, -m[0][0]]
    row = m[0][1:]
    sub = [r[1:] for r in m[1:]]
    diags = [1, -m[0][0]]
    v = [m[i][0] for i in range(1, n)]
    for _ in range(n - 1):
        diags.append(-sum(rj * vj for rj, vj in zip(row, v)))
        v = [sum(sub_i[k] * v[k] for k in range(n - 1)) for sub_i in sub]
    prev = _berkowitz(sub)
    out = []
    for i in range(n + 1):
        lo = max(0, i - len(diags) + 1)
        out.append(sum(diags[i - j] * prev[j] for j in range(lo, min(i, n - 1) + 1)))
    return out


def _char_poly_scaled(ints: list[list[int]], scalar: Fraction) -> list[Fraction]:
    # char poly of M from the integer matrix Z = scalar * M:
    # chi_M coefficient of degree n-k is chi_Z's integer coefficient / scalar^k.
    n = len(ints)
    if n > MAX_ORDER:
        raise ValueError(f"order {n} exceeds supported bound {MAX_ORDER}")
    raw = _berkowitz(ints)
    return [Fraction(c) / scalar ** k for k, c in enumerate(raw)]


def _matrix_fractions(m: np.ndarray) -> FractionMatrix:
    a = np.asarray(m, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return [[Fraction(float(v)) for v in row] for row in a]


def _char_poly_exact(m: np.ndarray) -> list[Fraction]:
    ints, scale = _integer_matrix(_matrix_fractions(m))
    return _char_poly_scaled(ints, Fraction(scale))


def kernel_char_poly(kernel: EnvironmentKernel) -> list[Fraction]:
    """Exact characteristic polynomial of the kernel's monodromy matrix."""
    scaled = [_scaled_a_matrix(dist, kernel.R, kernel.L) for dist in kernel.steps]
    order = list(range(1, kernel.period)) + [0]
    m, scalar = scaled[order[0]]
    for k in order[1:]:
        m = _int_matmul(m, scaled[k][0])
        scalar *= scaled[k][1]
    return _char_poly_scaled(m, scalar)


def _longdouble_from_int(n: int) -> np.longdouble:
    if n < 0:
        return -_longdouble_from_int(-n)
    bits = n.bit_length()
    if bits <= 63:
        return np.longdouble(n)
    shift = bits - 63
    return np.longdouble(n >> shift) * np.longdouble(2.0) ** shift


def _longdouble_from_fraction(f: Fraction) -> np.longdouble:
    return _longdouble_from_int(f.numerator) / _longdouble_from_int(f.denominator)


# ------------------------------------------------------------------ float64 surface

def build_A(dist: StepDistribution, R: int, L: int) -> np.ndarray:
    """Companion-style (R+L) x (R+L) matrix of one residue's step law.

    Row 0 solves the backward master equation for the deepest left value:
    column j holds -e(-L + j + 1)/e(-L), except the column of offset 0 which
    holds (1 - e(0))/e(-L).  Rows below carry an identity subdiagonal.
    """
    e_left = dist.probs.get(-L, 0.0)
    if e_left <= 0.0:
        raise DegenerateDistribution(f"no probability mass on the extremal left step -{L}")
    n = R + L
    m = np.zeros((n, n))
    for j in range(n):
        offset = j + 1 - L
        if offset == 0:
            m[0, j] = (1.0 - dist.probs.get(0, 0.0)) / e_left
        else:
            m[0, j] = -dist.probs.get(offset, 0.0) / e_left
    for i in range(1, n):
        m[i, i - 1] = 1.0
    return m


def a_matrices(kernel: EnvironmentKernel) -> list[np.ndarray]:
    """One companion matrix per residue, in residue order 0..N-1."""
    return [build_A(dist, kernel.R, kernel.L) for dist in kernel.steps]


def monodromy(kernel: EnvironmentKernel) -> np.ndarray:
    """Ordered product A_1 A_2 ... A_{N-1} A_0 (a single A_0 when N = 1).

    Any cyclic rotation of the factors is similar to this one, so the sorted
    eigenvalue magnitudes do not depend on the convention.
    """
    mats = a_matrices(kernel)
    order = list(range(1, kernel.period)) + [0]
    m = mats[order[0]]
    for k in order[1:]:
        m = m @ mats[k]
    return m


def char_poly(m: np.ndarray) -> np.ndarray:
    """Monic characteristic polynomial coefficients, highest power first."""
    return np.array([float(c) for c in _char_poly_exact(m)])


# ------------------------------------------------------------------ root finding

def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full(np.shape(z), coeffs[0], dtype=np.result_type(coeffs, z))
    for c in coeffs[1:]:
        acc = acc * z + c
    return acc


def _initial_guesses(c: np.ndarray) -> np.ndarray:
    """Newton-polygon starting points for Aberth.

    Root magnitudes track the slopes of the upper convex hull of
    (k, log|a_k|) over the ascending coefficients a_k; one circle per hull
    segment copes with root sets spanning many orders of magnitude, where a
    single-circle start stalls.  Angles carry a deterministic golden-ratio
    jitter so no guess lands on a symmetry axis.
    """
    deg = len(c) - 1
    ascending = c[::-1]
    points = [(k, float(np.log(np.abs(ascending[k]))))
              for k in range(deg + 1) if ascending[k] != 0.0]
    hull = [points[0]]
    for pt in points[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (pt[0] - x1) * (y2 - y1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    radii = np.empty(deg)
    pos = 0
    for (k1, y1), (k2, y2) in zip(hull, hull[1:]):
        count = k2 - k1
        radii[pos:pos + count] = np.exp((y1 - y2) / count)
        pos += count
    k = np.arange(deg)
    angles = 2 * np.pi * ((k * 0.6180339887498949) % 1.0 + (k + 0.3531) / deg)
    return radii * np.exp(1j * angles)


def _aberth(coeffs: np.ndarray, max_iter: int = 500) -> np.ndarray:
    """Aberth simultaneous iteration in the complex companion of the input dtype.

    Converged roots get two guarded Newton polish steps.  Multiple roots come
    out as tight clusters, which is fine downstream: only magnitudes and pair
    products are consumed.
    """
    c = np.asarray(coeffs)
    ctype = np.clongdouble if c.dtype == np.longdouble else np.complex128
    if c.ndim != 1 or len(c) < 1 or c[0] == 0.0:
        raise ValueError("expected coefficients with a nonzero leading term")
    if c[0] != 1.0:
        c = c / c[0]
    zero_roots = 0
    while len(c) > 1 and c[-1] == 0.0:
        c = c[:-1]
        zero_roots += 1
    deg = len(c) - 1
    if deg == 0:
        return np.zeros(zero_roots, dtype=ctype)
    if deg == 1:
        return np.append(np.array([-c[1]], dtype=ctype), np.zeros(zero_roots, ctype))

    deriv = c[:-1] * np.arange(deg, 0, -1)
    z = _initial_guesses(c).astype(ctype)

    eps = float(np.finfo(c.dtype).eps)
    tiny = np.finfo(c.dtype).tiny
    for _ in range(max_iter):
        pv = _horner(c, z)
        dv = _horner(deriv, z)
        w = pv / np.where(np.abs(dv) < tiny, tiny, dv)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repulse = (1.0 / diff).sum(axis=1)
        denom = 1.0 - w * repulse
        delta = w / np.where(np.abs(denom) < tiny, tiny, denom)
        z = z - delta
        if np.all(np.abs(delta) <= 8 * eps * (1.0 + np.abs(z))):
            break
    for _ in range(2):
        pv = _horner(c, z)
        dv = _horner(deriv, z)
        candidate = z - pv / np.where(np.abs(dv) < tiny, tiny, dv)
        improved = np.abs(_horner(c, candidate)) < np.abs(pv)
        z = np.where(improved, candidate, z)
    if zero_roots:
        z = np.append(z, np.zeros(zero_roots, ctype))
    return z


def polynomial_roots(coeffs, max_iter: int = 500) -> np.ndarray:
    """All complex roots of a real polynomial, as complex128."""
    c = np.asarray(coeffs)
    if c.dtype != np.longdouble:
        c = c.astype(np.longdouble)
    return _aberth(c, max_iter).astype(np.complex128)


# ------------------------------------------------------------------ spectra

@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue magnitudes in ascending order plus the root backward error."""

    magnitudes: tuple[float, ...]
    residual: float


def spectrum_from_char_poly(coeffs: Sequence[Fraction]) -> Spectrum:
    """Root magnitudes of an exact characteristic polynomial."""
    c = np.array([_longdouble_from_fraction(f) for f in coeffs], dtype=np.longdouble)
    roots = _aberth(c)
    # Backward error per root: |chi(z)| relative to sum |c_k| |z|^k, the
    # rounding floor of evaluating chi there.
    numer = np.abs(_horner(c, roots))
    denom = _horner(np.abs(c), np.abs(roots).astype(np.longdouble))
    residual = float(np.max(numer / np.maximum(denom, np.finfo(np.longdouble).tiny)))
    if residual > RESIDUAL_LIMIT:
        raise ConvergenceFailure(residual)
    return Spectrum(tuple(sorted(float(v) for v in np.abs(roots))), residual)


def eigen_magnitudes(m: np.ndarray) -> Spectrum:
    """All eigenvalue magnitudes of ``m`` (with multiplicity), ascending."""
    return spectrum_from_char_poly(_char_poly_exact(m))


def kernel_spectrum(kernel: EnvironmentKernel) -> tuple[Spectrum, list[Fraction]]:
    """Monodromy spectrum straight from the kernel, plus the exact char poly."""
    coeffs = kernel_char_poly(kernel)
    return spectrum_from_char_poly(coeffs), coeffs


def double_root_from_char_poly(coeffs: Sequence[Fraction], tol: float) -> bool:
    """True iff chi(1) and chi'(1) both vanish within tol (evaluated exactly)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = len(coeffs) - 1
    at_one = sum(coeffs)
    deriv_at_one = sum((n - k) * c for k, c in enumerate(coeffs[:-1]))
    return abs(float(at_one)) <= tol and abs(float(deriv_at_one)) <= tol


def double_root_at_one(m: np.ndarray, tol: float) -> bool:
    """True iff the characteristic polynomial of ``m`` has a double root at 1 within tol."""
    return double_root_from_char_poly(_char_poly_exact(m), tol)
