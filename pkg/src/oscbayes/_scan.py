"""Sign-scan plus bisection for the crossing points of two densities."""

import math

import numpy as np

from . import model
from ._errors import NumericalError

ROOT_TOL = 1e-10


def common_domain(a, b):
    (fa, ta), (fb, tb) = a, b
    lo_a, hi_a = model.support(fa, ta)
    lo_b, hi_b = model.support(fb, tb)
    return min(lo_a, lo_b), max(hi_a, hi_b)


def scan_size(a, b, lo, hi, base=64):
    """Grid size 64 * (1 + periods across the domain) for the faster of the two densities."""
    freq = max(model.frequency(*a), model.frequency(*b))
    return int(base * (1 + math.ceil(freq * (hi - lo) / (2.0 * math.pi))))


def difference(a, b):
    (fa, ta), (fb, tb) = a, b
    return lambda x: model.pdf(fa, ta, x) - model.pdf(fb, tb, x)


def _bisect(fun, lo, hi, flo, tol, max_iter=200):
    """Vectorised bisection on brackets [lo, hi] with sign(f(lo)) = sign(flo)."""
    lo, hi = lo.copy(), hi.copy()
    for _ in range(max_iter):
        if np.all(hi - lo <= tol):
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    if np.all(hi - lo <= 10 * tol):
        return 0.5 * (lo + hi)
    raise NumericalError("bisection did not bracket roots to tolerance", width=float(np.max(hi - lo)))


def crossings(a, b, tol=ROOT_TOL, grid_size=None):
    """Sign changes of f_a - f_b on the common domain.

    Returns (domain, grid, signs, roots) where ``signs`` are the signs of the
    difference on the scan grid and ``roots`` the bisected crossing points,
    one per strict sign change between consecutive nonzero grid signs.
    """
    lo, hi = common_domain(a, b)
    n = grid_size or scan_size(a, b, lo, hi)
    grid = np.linspace(lo, hi, n)
    diff = difference(a, b)
    d = diff(grid)
    s = np.sign(d)
    nz = np.flatnonzero(s != 0)
    if len(nz) < 2:
        return (lo, hi), grid, s, np.empty(0)
    left, right = nz[:-1], nz[1:]
    change = s[left] != s[right]
    left, right = left[change], right[change]
    if len(left) == 0:
        return (lo, hi), grid, s, np.empty(0)
    roots = _bisect(diff, grid[left], grid[right], s[left], tol)
    return (lo, hi), grid, s, roots
