"""Eigenvalues, eigenvectors, spectral projector, periodic orbits, fixed-point lattice."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import scalars as sc
from .model import MapModel, evaluate

DEFAULT_MAX_ITER = 10**6
RECENTER_EVERY = 64
EXACT_BRACKET_STEPS = 256
FLOAT_BRACKET_STEPS = 4096


class NotConverged(RuntimeError):
    """Iteration budget exhausted; `point` holds the last iterate."""

    def __init__(self, message, point=None, residual=None):
        super().__init__(message)
        self.point = point
        self.residual = residual


@dataclass(frozen=True)
class EigenResult:
    lam: sc.Scalar
    v: tuple
    residual: sc.Scalar
    iterations: int
    status: str  # converged | max_iter
    lower: sc.Scalar = None
    upper: sc.Scalar = None

    @property
    def converged(self) -> bool:
        return self.status == "converged"


@dataclass(frozen=True)
class OrbitResult:
    period: int
    points: tuple
    residual: sc.Scalar
    iterations: int


def _tol(m: MapModel, tol):
    if tol is None:
        return 0 if m.mode == sc.EXACT else sc.DEFAULT_FLOAT_TOL
    return tol


def _shift(x, c):
    return tuple(a - c for a in x)


def verify_eigenpair(m: MapModel, lam, v, tol=None):
    """``(|f(v) - lam - v|_inf <= tol, residual)``; exact models default to tol 0."""
    tol = _tol(m, tol)
    v = sc.vector(v, m.mode)
    lam = sc.convert(lam, m.mode)
    fv = evaluate(m, v)
    residual = max(abs(a - lam - b) for a, b in zip(fv, v))
    return residual <= tol, residual


def eigenvalue_bounds(m: MapModel, x0, k: int):
    """``(min, max)`` of ``f^k(x0) - f^(k-1)(x0)``; brackets the eigenvalue."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = sc.vector(x0, m.mode)
    for _ in range(k - 1):
        x = evaluate(m, x)
    y = evaluate(m, x)
    d = [a - b for a, b in zip(y, x)]
    return min(d), max(d)


def _rationalize(values, max_den=10**6):
    return tuple(Fraction(v).limit_denominator(max_den) for v in values)


def find_eigenvector(m: MapModel, tol=None, max_iter: int = DEFAULT_MAX_ITER, x0=None) -> EigenResult:
    """Heuristic eigenpair search.

    Bracket the eigenvalue with ``f^k(x0) - f^(k-1)(x0)``, widening k until the
    bracket is narrower than tol/10; an exactly constant difference yields an
    exact eigenvector. Otherwise run the averaged iteration
    ``x <- (x + f(x) - lam)/2`` in floats, re-centring on the last coordinate
    every 64 steps. For exact models a rational reconstruction of the float
    answer is returned when it verifies exactly.
    """
    tol = _tol(m, tol)
    x = sc.vector(x0 if x0 is not None else [0] * m.n, m.mode)
    bracket_steps = EXACT_BRACKET_STEPS if m.mode == sc.EXACT else FLOAT_BRACKET_STEPS
    evals = 0
    lo = hi = None
    k = 0
    while evals < max_iter and k < bracket_steps:
        y = evaluate(m, x)
        evals += 1
        k += 1
        d = [a - b for a, b in zip(y, x)]
        lo, hi = min(d), max(d)
        if hi == lo:
            return EigenResult(lo, x, hi - lo, evals, "converged", lo, hi)
        if k & (k - 1) == 0 and hi - lo < tol / 10:
            break
        x = _shift(y, y[-1])

    fm = m.to_float()
    xf = tuple(float(a) for a in x)
    lam = (float(lo) + float(hi)) / 2 if lo is not None else 0.0
    best = (float("inf"), xf, lam)
    step = 0
    while evals < max_iter:
        fx = evaluate(fm, xf)
        evals += 1
        d = [a - b for a, b in zip(fx, xf)]
        lo_f, hi_f = min(d), max(d)
        res = (hi_f - lo_f) / 2
        if res < best[0]:
            best = (res, xf, (lo_f + hi_f) / 2)
        if res <= max(tol, 1e-13):
            break
        xf = tuple((a + b - lam) / 2 for a, b in zip(xf, fx))
        step += 1
        if step % RECENTER_EVERY == 0:
            xf = _shift(xf, xf[-1])
            lam = (lo_f + hi_f) / 2

    res, xf, lam = best
    if m.mode == sc.EXACT:
        v_q = _rationalize(_shift(xf, xf[-1]))
        for den in (1000, 10**6):
            lam_q = Fraction(lam).limit_denominator(den)
            ok, r = verify_eigenpair(m, lam_q, v_q, 0)
            if ok:
                return EigenResult(lam_q, v_q, r, evals, "converged", lam_q, lam_q)
    status = "converged" if res <= tol else "max_iter"
    return EigenResult(lam, xf, res, evals, status, lam - res, lam + res)


def _normalized_step(m, lam):
    def g(x):
        return tuple(a - lam for a in evaluate(m, x))
    return g


def spectral_projector(m: MapModel, lam, z, tol=None, max_iter: int = DEFAULT_MAX_ITER) -> tuple:
    """Limit of the nonincreasing sequence ``(f - lam)^k(z)`` for ``f(z) <= lam + z``."""
    tol = _tol(m, tol)
    lam = sc.convert(lam, m.mode)
    z = sc.vector(z, m.mode)
    g = _normalized_step(m, lam)
    gz = g(z)
    slack = 0 if m.mode == sc.EXACT else tol
    if any(a > b + slack for a, b in zip(gz, z)):
        raise ValueError("spectral_projector needs f(z) <= lam + z")
    x, gx = z, gz
    for _ in range(max_iter):
        step = sc.sup_norm(gx, x)
        if step <= tol:
            return gx
        x, gx = gx, g(gx)
    raise NotConverged("spectral projector did not converge", x, sc.sup_norm(gx, x))


def _divisors(c):
    return [d for d in range(1, c + 1) if c % d == 0]


def periodic_limit(m: MapModel, lam, x, cyclicity: int, tol=None,
                   max_iter: int = DEFAULT_MAX_ITER) -> OrbitResult:
    """Iterate ``g = f - lam`` until ``|g^(k+c)(x) - g^k(x)| <= tol``, then
    extract the minimal period among the divisors of c."""
    tol = _tol(m, tol)
    c = int(cyclicity)
    if c < 1:
        raise ValueError("cyclicity must be >= 1")
    lam = sc.convert(lam, m.mode)
    g = _normalized_step(m, lam)
    window = [sc.vector(x, m.mode)]
    for _ in range(c):
        window.append(g(window[-1]))
    k = 0
    while sc.sup_norm(window[-1], window[0]) > tol:
        if k >= max_iter:
            raise NotConverged("no periodic limit detected", window[0],
                               sc.sup_norm(window[-1], window[0]))
        window.pop(0)
        window.append(g(window[-1]))
        k += 1
    for p in _divisors(c):
        if all(sc.sup_norm(window[i + p], window[i]) <= tol for i in range(c - p + 1)):
            break
    points = tuple(window[:p])
    residual = max(sc.sup_norm(g(points[i]), points[(i + 1) % p]) for i in range(p))
    return OrbitResult(p, points, residual, k + c)


def _check_fixed(m, lam, x, tol, name):
    ok, res = verify_eigenpair(m, lam, x, tol)
    if not ok:
        raise ValueError(f"{name} is not a fixed point of f - lam (residual {res})")


def _monotone_limit(m, lam, start, tol, max_iter):
    g = _normalized_step(m, lam)
    x = start
    for _ in range(max_iter):
        gx = g(x)
        if sc.sup_norm(gx, x) <= tol:
            return gx
        x = gx
    raise NotConverged("lattice iteration did not converge", x)


def lattice_meet(m: MapModel, lam, x, y, tol=None, max_iter: int = DEFAULT_MAX_ITER) -> tuple:
    """Greatest fixed point of ``f - lam`` below both x and y."""
    tol = _tol(m, tol)
    lam = sc.convert(lam, m.mode)
    x, y = sc.vector(x, m.mode), sc.vector(y, m.mode)
    _check_fixed(m, lam, x, tol, "x")
    _check_fixed(m, lam, y, tol, "y")
    return _monotone_limit(m, lam, tuple(min(a, b) for a, b in zip(x, y)), tol, max_iter)


def lattice_join(m: MapModel, lam, x, y, tol=None, max_iter: int = DEFAULT_MAX_ITER) -> tuple:
    """Least fixed point of ``f - lam`` above both x and y."""
    tol = _tol(m, tol)
    lam = sc.convert(lam, m.mode)
    x, y = sc.vector(x, m.mode), sc.vector(y, m.mode)
    _check_fixed(m, lam, x, tol, "x")
    _check_fixed(m, lam, y, tol, "y")
    return _monotone_limit(m, lam, tuple(max(a, b) for a, b in zip(x, y)), tol, max_iter)
