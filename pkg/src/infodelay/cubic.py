"""Closed-form roots of a monic cubic with one Newton polish step.

The closed-form (Cardano) evaluation keeps the root count and ordering
deterministic; the single polish step removes the last few ulps of
cancellation error without introducing iteration-count nondeterminism.
"""
from __future__ import annotations

import cmath

__all__ = ["cubic_roots", "real_positive_roots"]

# primitive cube roots of unity
_W1 = complex(-0.5, 0.8660254037844386467637231707529362)
_W2 = _W1.conjugate()


def _polish(z: complex, m: float, n: float, h: float) -> complex:
    value = ((z + m) * z + n) * z + h
    deriv = (3.0 * z + 2.0 * m) * z + n
    if deriv == 0:
        return z
    step = value / deriv
    # an oversized step marks a (near) multiple root; leave those alone
    if abs(step) > 0.1 * (1.0 + abs(z)):
        return z
    return z - step


def cubic_roots(m: float, n: float, h: float) -> list[complex]:
    """All three roots of z**3 + m*z**2 + n*z + h, Newton polished.

    Roots are ordered by ascending real part, ties by imaginary part.
    Real roots of a real cubic come out with imaginary parts at the
    rounding level, not exactly zero; callers filter as needed.
    """
    # depressed form y^3 + p*y + q with z = y - m/3
    shift = m / 3.0
    p = n - m * m / 3.0
    q = (2.0 * m * m / 9.0 - n) * shift + h

    if p == 0.0 and q == 0.0:
        roots = [complex(-shift)] * 3
    else:
        disc = cmath.sqrt(0.25 * q * q + p * p * p / 27.0)
        # pick the branch that avoids cancellation in -q/2 +- disc
        t1 = -0.5 * q + disc
        t2 = -0.5 * q - disc
        t = t1 if abs(t1) >= abs(t2) else t2
        c = t ** (1.0 / 3.0)
        roots = []
        for w in (1.0 + 0.0j, _W1, _W2):
            cw = c * w
            roots.append(cw - p / (3.0 * cw) - shift)

    roots = [_polish(z, m, n, h) for z in roots]
    roots.sort(key=lambda z: (z.real, z.imag))
    return roots


def real_positive_roots(m: float, n: float, h: float,
                        rel_imag: float = 1e-9,
                        min_real: float = 1e-9) -> list[float]:
    """Real positive roots of the cubic, ascending.

    A root is accepted when its imaginary part is below ``rel_imag``
    relative to its modulus (guards against spurious complex pairs that
    merely graze the real axis) and its real part exceeds ``min_real``.
    """
    out = []
    for z in cubic_roots(m, n, h):
        if abs(z.imag) <= rel_imag * abs(z) and z.real > min_real:
            out.append(z.real)
    return out
