"""Small numerical kernels: adaptive Simpson, golden-section search, finite differences."""

import math

from .errors import NonConvergenceError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1 / phi
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1 / phi^2


def adaptive_simpson(f, a, b, tol=1e-9, max_depth=40):
    """Integrate ``f`` over [a, b] with recursive adaptive Simpson.

    Returns ``(value, error_estimate)``. Raises NonConvergenceError when a
    panel at ``max_depth`` still misses its share of the tolerance.
    """
    if a == b:
        return 0.0, 0.0
    if a > b:
        value, err = adaptive_simpson(f, b, a, tol, max_depth)
        return -value, err

    def simpson(fa, fm, fb, h):
        return h / 6.0 * (fa + 4.0 * fm + fb)

    failed = []

    def recurse(a, b, fa, fm, fb, whole, depth, tol):
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = f(lm)
        frm = f(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        delta = left + right - whole
        # depth 0 is the whole interval; always refine it once
        if depth > 0 and abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0, abs(delta) / 15.0
        if depth >= max_depth:
            failed.append((a, b))
            return left + right + delta / 15.0, abs(delta) / 15.0
        lv, le = recurse(a, m, fa, flm, fm, left, depth + 1, tol / 2.0)
        rv, re = recurse(m, b, fm, frm, fb, right, depth + 1, tol / 2.0)
        return lv + rv, le + re

    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    value, err = recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), 0, tol)
    if failed:
        raise NonConvergenceError(
            f"adaptive Simpson hit depth {max_depth} on {len(failed)} panel(s)",
            best_estimate=value,
            error_bound=err,
        )
    return value, err


def golden_section(f, a, b, tol=1e-5):
    """Golden-section search for a minimum of a unimodal ``f`` on [a, b].

    Returns ``(x_min, f(x_min))`` with the final bracket narrower than ``tol``.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    while h > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + INV_PHI * h
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def central_difference(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def richardson_derivative(f, x, h):
    """Central difference with one Richardson step (error O(h^4))."""
    d1 = central_difference(f, x, h)
    d2 = central_difference(f, x, h / 2.0)
    return (4.0 * d2 - d1) / 3.0
