"""Spectral diagnostics for link matrices.

Gerschgorin discs and the unit bound, exact characteristic polynomials
(Faddeev-LeVerrier over the rationals), Durand-Kerner roots, two
second-eigenvalue estimators that never touch the characteristic
polynomial, and the realistic-matrix verdict.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import polynomial as poly
from .errors import EstimatorError, ExactModeCapError, LinkRankError
from .power_engine import IterationTrace, VerdictKind, pagerank_vector
from .stochastic_matrix import ColumnStochasticMatrix, matvec

log = logging.getLogger(__name__)

EXACT_MODE_CAP = 16
SCHEMA_SPECTRUM = "linkrank.spectrum/v1"


@dataclass(frozen=True)
class GerschgorinDisc:
    center: Fraction
    radius: Fraction

    @property
    def reach(self) -> Fraction:
        return abs(self.center) + self.radius

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return abs(z - float(self.center)) <= float(self.radius) + slack


def gerschgorin_discs(M: ColumnStochasticMatrix, side: str = "transpose") -> list[GerschgorinDisc]:
    """Discs from the rows of ``H`` (``side="rows"``) or of ``H.T`` (``"transpose"``).

    Rows of ``H.T`` are the columns of ``H``, so each of those discs has
    radius equal to a column sum.
    """
    centers = [M.entry(i, i) for i in range(M.n)]
    radii = [Fraction(0)] * M.n
    for j, col in enumerate(M.columns):
        for i, w in col:
            if i == j:
                continue
            if side == "transpose":
                radii[j] += abs(w)
            elif side == "rows":
                radii[i] += abs(w)
            else:
                raise ValueError(f"side must be 'rows' or 'transpose', not {side!r}")
    return [GerschgorinDisc(c, r) for c, r in zip(centers, radii)]


def spectral_bound(M: ColumnStochasticMatrix) -> Fraction:
    """Smaller of the two Gerschgorin bounds on ``max |lambda|``."""
    bounds = []
    for side in ("rows", "transpose"):
        discs = gerschgorin_discs(M, side)
        bounds.append(max((d.reach for d in discs), default=Fraction(0)))
    return min(bounds)


@dataclass(frozen=True)
class CharPoly:
    """Monic characteristic polynomial, ascending exact coefficients ``c_0..c_n``."""

    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        return poly.horner(self.coefficients, z)

    def exact_value(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def divide(self, divisor) -> tuple[list[Fraction], list[Fraction]]:
        return poly.poly_divmod(self.coefficients, divisor)

    def multiplicity(self, x) -> int:
        """Exact multiplicity of the rational root ``x`` (0 if not a root)."""
        p = list(self.coefficients)
        m = 0
        while poly.degree(p) >= 1 and _eval(p, x) == 0:
            p = poly.poly_divmod(p, [-Fraction(x), Fraction(1)])[0]
            m += 1
        return m

    def __str__(self):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            coef = "" if (mag == 1 and k > 0) else str(mag)
            var = "" if k == 0 else ("λ" if k == 1 else f"λ^{k}")
            body = f"({coef})" if "/" in coef and var else coef
            terms.append((sign, body + var))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out


def _eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def char_poly(M: ColumnStochasticMatrix, cap: int = EXACT_MODE_CAP, force: bool = False) -> CharPoly:
    """``det(lambda*E - H)`` with exact rational coefficients via Faddeev-LeVerrier.

    ``M_1 = E``, ``c_{n-k} = -tr(H M_k) / k``, ``M_{k+1} = H M_k + c_{n-k} E``.
    Refuses dimensions above ``cap`` unless ``force`` is set.
    """
    n = M.n
    if n > cap and not force:
        raise ExactModeCapError(
            f"{n} pages exceeds the exact-mode cap of {cap}; "
            "use the second-eigenvalue estimators instead"
        )
    # sparse rows of H: row i -> [(j, H_ij)]
    rows: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
    for j, col in enumerate(M.columns):
        for i, w in col:
            rows[i].append((j, w))

    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        AM = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            out = AM[i]
            for l, w in rows[i]:
                src = Mk[l]
                for j in range(n):
                    if src[j]:
                        out[j] += w * src[j]
        c = -sum((AM[i][i] for i in range(n)), Fraction(0)) / k
        coeffs[n - k] = c
        if k < n:
            for i in range(n):
                AM[i][i] += c
            Mk = AM
    return CharPoly(tuple(coeffs))


def poly_roots(p: CharPoly, tol: float = 1e-12, max_sweeps: int = 1000) -> list[complex]:
    """All ``degree`` roots with multiplicity, largest magnitude first.

    The polynomial is split exactly into square-free factors first, and
    Durand-Kerner runs on each factor, so repeated eigenvalues come out at
    full precision rather than smeared into a cluster.
    """
    if p.degree < 1:
        raise ValueError("polynomial must have degree >= 1")
    roots: list[complex] = []
    for factor, mult in poly.squarefree_factors(p.coefficients):
        found = [poly.clean_root(z) for z in poly.durand_kerner(factor, tol, max_sweeps)]
        roots.extend(found * mult)

    bound = tol * (1 + max(abs(float(c)) for c in p.coefficients))
    residuals = [abs(p(z)) for z in roots]
    if any(r > bound for r in residuals):
        raise EstimatorError("root residual above tolerance", best=roots, residuals=residuals)
    return sorted(roots, key=poly.root_sort_key)


@dataclass(frozen=True)
class Lambda2Estimate:
    """Second-eigenvalue estimate.

    ``value`` is complex for the root method, a signed real for deflation,
    and a magnitude for the ratio method or whenever ``flag`` is
    ``"complex-pair-suspected"``. ``flag`` is ``None`` for a clean estimate.
    """

    value: Optional[complex]
    method: str
    flag: Optional[str] = None
    steps: int = 0

    @property
    def magnitude(self) -> Optional[float]:
        return None if self.value is None else abs(self.value)

    def to_dict(self) -> dict:
        v = self.value
        if v is None:
            val = None
        elif isinstance(v, complex):
            val = [v.real, v.imag]
        else:
            val = float(v)
        return {"method": self.method, "value": val, "magnitude": self.magnitude,
                "flag": self.flag, "steps": self.steps}


def estimate_lambda2_ratio(trace: IterationTrace) -> Lambda2Estimate:
    """|lambda2| from the geometric-mean residual ratio over the last quarter of a run."""
    res = trace.residuals
    if res and min(res) == 0.0:
        return Lambda2Estimate(None, "ratio", "below-resolution", len(res))
    if len(res) < 10:
        raise EstimatorError(f"need at least 10 residuals, trace has {len(res)}")
    tail = res[-max(2, len(res) // 4) - 1:]
    k = len(tail) - 1
    value = math.exp((math.log(tail[-1]) - math.log(tail[0])) / k)
    flag = None
    if trace.verdict.kind is VerdictKind.OSCILLATING:
        log.warning("ratio estimate taken from an oscillating trace; expect ~1")
        flag = "oscillating"
    elif trace.verdict.kind is VerdictKind.EXHAUSTED:
        flag = "not-converged"
    return Lambda2Estimate(value, "ratio", flag, len(res))


def deflated_matvec(M: ColumnStochasticMatrix, I, v) -> np.ndarray:
    """``B v = H v - I * sum(v)``; removes the eigenvalue-1 direction."""
    return matvec(M, v) - np.asarray(I, dtype=float) * float(np.sum(v))


def estimate_lambda2_deflation(
    M: ColumnStochasticMatrix,
    I,
    tol: float = 1e-12,
    max_iters: int = 10000,
) -> Lambda2Estimate:
    """Signed lambda2 by power iteration on the deflated operator.

    The all-ones vector is the left eigenvector for eigenvalue 1, so with a
    stochastic ``I`` the rank-one update is exact. Magnitude is the growth
    ``||B u||`` of a unit iterate; the sign comes from whether successive
    iterates align (+) or anti-align (-). If they do neither, the dominant
    remainder is a complex pair and only its magnitude is reported.
    """
    n = M.n
    I = np.asarray(I, dtype=float)
    w = 1.0 / np.arange(1, n + 1)
    v = w - I * w.sum()
    norm = np.linalg.norm(v)
    if norm == 0:
        return Lambda2Estimate(0.0, "deflation", "below-resolution", 0)
    u = v / norm

    prev_est = None
    growth: list[float] = []
    cosines: list[float] = []
    for k in range(1, max_iters + 1):
        y = deflated_matvec(M, I, u)
        g = float(np.linalg.norm(y))
        if g == 0.0:
            return Lambda2Estimate(0.0, "deflation", None, k)
        u_next = y / g
        cos = float(u_next @ u)
        growth.append(g)
        cosines.append(cos)
        est = math.copysign(g, cos)
        aligned = abs(abs(cos) - 1.0) <= 1e-8
        if prev_est is not None and aligned and abs(est - prev_est) <= tol * max(1.0, abs(est)):
            return Lambda2Estimate(est, "deflation", None, k)
        prev_est = est
        u = u_next

    window = max(2, len(growth) // 4)
    if np.mean(np.abs(cosines[-window:])) < 0.999:
        mag = math.exp(float(np.mean(np.log(growth[-window:]))))
        return Lambda2Estimate(mag, "deflation", "complex-pair-suspected", max_iters)
    raise EstimatorError(
        f"deflated power iteration did not settle in {max_iters} steps",
        best=prev_est,
        residuals=growth[-10:],
    )


@dataclass(frozen=True)
class RealisticVerdict:
    realistic: bool
    gap: Optional[float]
    lambda2: Lambda2Estimate
    method: str
    unit_root_simple: Optional[bool]

    def to_dict(self) -> dict:
        return {
            "realistic": self.realistic,
            "gap": self.gap,
            "method": self.method,
            "unit_root_simple": self.unit_root_simple,
            "lambda2": self.lambda2.to_dict(),
        }


def second_root(roots: list[complex]) -> complex:
    """Largest-magnitude root after removing one copy of the root nearest 1."""
    rest = list(roots)
    rest.pop(min(range(len(rest)), key=lambda i: abs(rest[i] - 1)))
    return rest[0] if rest else 0j


def is_realistic(M: ColumnStochasticMatrix, tol: float = 1e-9, cap: int = EXACT_MODE_CAP) -> RealisticVerdict:
    """Check that 1 is a simple eigenvalue and every other one has modulus < 1 - tol.

    Up to ``cap`` pages the check is exact-then-numeric (characteristic
    polynomial roots). Larger matrices use the deflation estimate, which
    cannot certify simplicity (``unit_root_simple`` is then ``None``).
    """
    if M.n <= cap:
        cp = char_poly(M, cap)
        simple = cp.multiplicity(1) == 1
        roots = poly_roots(cp)
        lam2 = second_root(roots) if M.n > 1 else 0j
        est = Lambda2Estimate(lam2, "roots")
        gap = 1.0 - abs(lam2)
        return RealisticVerdict(simple and abs(lam2) < 1 - tol, gap, est, "roots", simple)

    try:
        pr = pagerank_vector(M)
        est = estimate_lambda2_deflation(M, pr.scores)
    except LinkRankError as exc:
        raise EstimatorError(f"realistic check on {M.n} pages failed: {exc}") from exc
    mag = est.magnitude
    return RealisticVerdict(mag < 1 - tol, 1.0 - mag, est, "deflation", None)


@dataclass
class SpectrumReport:
    discs: list[GerschgorinDisc]
    bound: Fraction
    charpoly: Optional[CharPoly]
    roots: list[complex]
    root_residuals: list[float]
    lambda2: Lambda2Estimate
    verdict: RealisticVerdict
    labels: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_SPECTRUM,
            "pages": len(self.discs),
            "discs": [
                {"center": _frac(d.center), "radius": _frac(d.radius)} for d in self.discs
            ],
            "bound": _frac(self.bound),
            "charpoly": None if self.charpoly is None else {
                "coefficients": [_frac(c) for c in self.charpoly.coefficients],
                "text": str(self.charpoly),
            },
            "roots": [[z.real, z.imag] for z in self.roots],
            "root_residuals": self.root_residuals,
            "lambda2": self.lambda2.to_dict(),
            "realistic": self.verdict.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"pages: {len(self.discs)}"]
        lines.append(f"Gerschgorin bound on |lambda|: {_frac(self.bound)}")
        uniq = sorted({(d.center, d.radius) for d in self.discs})
        for c, r in uniq:
            count = sum(1 for d in self.discs if (d.center, d.radius) == (c, r))
            lines.append(f"  H^T discs: center {_frac(c)}, radius {_frac(r)} (x{count})")
        if self.charpoly is not None:
            lines.append(f"characteristic polynomial: {self.charpoly}")
        if self.roots:
            lines.append("eigenvalues:")
            for k, (z, res) in enumerate(zip(self.roots, self.root_residuals), start=1):
                lines.append(f"  lambda_{k} = {format_complex(z)}   |z| = {abs(z):.4f}   |f(z)| = {res:.1e}")
        lam = self.lambda2
        val = "n/a" if lam.value is None else (
            format_complex(lam.value) if isinstance(lam.value, complex) else f"{lam.value:.4f}")
        flag = f" [{lam.flag}]" if lam.flag else ""
        lines.append(f"lambda2 ({lam.method}): {val}{flag}")
        v = self.verdict
        simple = {True: "yes", False: "no", None: "unknown"}[v.unit_root_simple]
        gap = "n/a" if v.gap is None else f"{v.gap:.4f}"
        lines.append(f"realistic: {'yes' if v.realistic else 'no'} (gap {gap}, eigenvalue 1 simple: {simple})")
        return "\n".join(lines) + "\n"

    def to_tsv(self) -> str:
        lines = ["k\treal\timag\tabs\tresidual"]
        for k, (z, r) in enumerate(zip(self.roots, self.root_residuals), start=1):
            lines.append(f"{k}\t{z.real!r}\t{z.imag!r}\t{abs(z)!r}\t{r!r}")
        return "\n".join(lines) + "\n"


def _frac(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_complex(z: complex, digits: int = 4) -> str:
    re, im = round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0
    if im == 0:
        return f"{re:.{digits}f}"
    sign = "-" if im < 0 else "+"
    return f"{re:.{digits}f}{sign}{abs(im):.{digits}f}i"


def spectrum_report(
    M: ColumnStochasticMatrix,
    exact: Optional[bool] = None,
    cap: int = EXACT_MODE_CAP,
    tol: float = 1e-9,
) -> SpectrumReport:
    """Full report. ``exact=None`` means exact work iff ``n <= cap``; ``True`` forces it."""
    discs = gerschgorin_discs(M, "transpose")
    bound = spectral_bound(M)
    use_exact = M.n <= cap if exact is None else exact
    if use_exact:
        cp = char_poly(M, cap, force=True)
        roots = poly_roots(cp)
        residuals = [abs(cp(z)) for z in roots]
        simple = cp.multiplicity(1) == 1
        lam2 = second_root(roots) if M.n > 1 else 0j
        est = Lambda2Estimate(lam2, "roots")
        verdict = RealisticVerdict(simple and abs(lam2) < 1 - tol, 1.0 - abs(lam2), est, "roots", simple)
        return SpectrumReport(discs, bound, cp, roots, residuals, est, verdict, M.labels)
    verdict = is_realistic(M, tol, cap=min(cap, M.n - 1))
    return SpectrumReport(discs, bound, None, [], [], verdict.lambda2, verdict, M.labels)
