"""Exact rational polynomial helpers and Durand-Kerner root finding.

Coefficient lists are ascending: ``[c0, c1, ..., cn]``.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Sequence

from .errors import EstimatorError

Coeffs = list[Fraction]


def trim(p: Sequence[Fraction]) -> Coeffs:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence[Fraction]) -> int:
    p = trim(p)
    return -1 if p == [0] else len(p) - 1


def monic(p: Sequence[Fraction]) -> Coeffs:
    p = trim(p)
    lead = p[-1]
    return [c / lead for c in p]


def derivative(p: Sequence[Fraction]) -> Coeffs:
    return trim([k * c for k, c in enumerate(p)][1:] or [Fraction(0)])


def poly_divmod(num: Sequence[Fraction], den: Sequence[Fraction]) -> tuple[Coeffs, Coeffs]:
    num, den = trim(num), trim(den)
    if degree(den) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in num]
    dd = len(den) - 1
    q = [Fraction(0)] * max(len(num) - dd, 1)
    for k in range(len(num) - 1 - dd, -1, -1):
        coef = rem[k + dd] / den[-1]
        q[k] = coef
        if coef:
            for i, d in enumerate(den):
                rem[k + i] -= coef * d
    return trim(q), trim(rem[:dd] or [Fraction(0)])


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> Coeffs:
    a, b = trim(a), trim(b)
    while degree(b) >= 0:
        a, b = b, poly_divmod(a, b)[1]
    return monic(a)


def squarefree_factors(p: Sequence[Fraction]) -> list[tuple[Coeffs, int]]:
    """Yun's square-free decomposition: ``p = lead * prod(f_k ** k)``.

    Returns ``(f_k, k)`` for each non-constant ``f_k`` (monic).
    """
    p = monic(p)
    if degree(p) < 1:
        return []
    dp = derivative(p)
    a = poly_gcd(p, dp)
    b = poly_divmod(p, a)[0]
    c = poly_divmod(dp, a)[0]
    d = [x - y for x, y in _pad(c, derivative(b))]
    out = []
    k = 1
    while degree(b) >= 1:
        a = poly_gcd(b, d)
        if degree(a) >= 1:
            out.append((a, k))
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = [x - y for x, y in _pad(c, derivative(b))]
        k += 1
    return out


def _pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def horner(coeffs: Sequence, z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def durand_kerner(
    coeffs: Sequence, tol: float = 1e-12, max_sweeps: int = 1000
) -> list[complex]:
    """All roots of a polynomial by Weierstrass/Durand-Kerner iteration.

    Seeds are ``(0.4 + 0.9j) ** k`` for ``k = 1..n``; every sweep updates all
    iterates from the previous sweep's values. Stops once each displacement
    is below ``tol * (1 + |z|)``. Best for square-free input; multiple roots
    converge only linearly.
    """
    c = [complex(x) for x in trim(coeffs)]
    n = len(c) - 1
    if n < 1:
        raise ValueError("polynomial has no roots")
    lead = c[-1]
    c = [x / lead for x in c]
    if n == 1:
        return [-c[0]]

    z = [(0.4 + 0.9j) ** k for k in range(1, n + 1)]
    for _ in range(max_sweeps):
        new = []
        for i, zi in enumerate(z):
            denom = 1 + 0j
            for j, zj in enumerate(z):
                if j != i:
                    denom *= zi - zj
            if denom == 0:
                denom = 1e-300 + 0j
            new.append(zi - horner(c, zi) / denom)
        done = all(abs(a - b) <= tol * (1 + abs(a)) for a, b in zip(new, z))
        z = new
        if done:
            return z
    raise EstimatorError(
        f"Durand-Kerner did not settle in {max_sweeps} sweeps",
        best=z,
        residuals=[abs(horner(c, x)) for x in z],
    )


def clean_root(z: complex, tol: float = 1e-12) -> complex:
    """Drop rounding-level imaginary (and real) parts."""
    scale = 1 + abs(z)
    re = 0.0 if abs(z.real) <= tol * scale else z.real
    im = 0.0 if abs(z.imag) <= tol * scale else z.imag
    return complex(re, im)


def root_sort_key(z: complex):
    # descending magnitude, then ascending argument in (-pi, pi]
    return (-round(abs(z), 10), cmath.phase(z))
