"""Multivariate lattice distributions, the discretized Gaussian, total
variation distances, and the computable terms of the local-CLT bound.

Lattice distributions carry exact rational masses; only the Gaussian side of
the bridge uses floating point, and every float it produces travels with an
explicit error term.  Assertions on real-valued quantities always compare
error-aware: (value + err) against (other - err).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .dist import IntDist, as_fraction, format_fraction


def norm_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def norm_sf(z: float) -> float:
    """Upper tail 1 - cdf(z) via erfc: no cancellation for large z."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


class LatticeDist:
    """Finite distribution on integer vectors with exact rational masses."""

    __slots__ = ("_atoms", "_dim")

    def __init__(self, atoms: Iterable[tuple[Sequence[int], object]]):
        merged: dict[tuple[int, ...], Fraction] = {}
        dim = None
        for site, mass in atoms:
            key = tuple(int(v) for v in site)
            if dim is None:
                dim = len(key)
            elif len(key) != dim:
                raise ValueError("mixed dimensions")
            mass = as_fraction(mass)
            if mass < 0:
                raise ValueError(f"negative mass at {key}")
            if key in merged:
                raise ValueError(f"duplicate site {key}")
            if mass > 0:
                merged[key] = mass
        if not merged:
            raise ValueError("empty distribution")
        if sum(merged.values()) != 1:
            raise ValueError("masses must sum to 1")
        object.__setattr__(self, "_atoms", tuple(sorted(merged.items())))
        object.__setattr__(self, "_dim", dim)

    @property
    def atoms(self) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
        return self._atoms

    @property
    def dim(self) -> int:
        return self._dim

    def mass(self, site: Sequence[int]) -> Fraction:
        key = tuple(int(v) for v in site)
        for s, m in self._atoms:
            if s == key:
                return m
        return Fraction(0)

    def __len__(self) -> int:
        return len(self._atoms)

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticeDist) and self._atoms == other._atoms

    def __hash__(self) -> int:
        return hash(self._atoms)

    def __setattr__(self, name, value):
        raise AttributeError("LatticeDist is immutable")

    def __repr__(self) -> str:
        inner = ", ".join(f"{s}: {format_fraction(m)}" for s, m in self._atoms)
        return f"LatticeDist({{{inner}}})"

    def mean(self) -> tuple[Fraction, ...]:
        d = self._dim
        out = [Fraction(0)] * d
        for s, m in self._atoms:
            for i in range(d):
                out[i] += m * s[i]
        return tuple(out)

    def cov(self) -> tuple[tuple[Fraction, ...], ...]:
        d = self._dim
        mu = self.mean()
        out = [[Fraction(0)] * d for _ in range(d)]
        for s, m in self._atoms:
            c = [Fraction(s[i]) - mu[i] for i in range(d)]
            for i in range(d):
                for j in range(d):
                    out[i][j] += m * c[i] * c[j]
        return tuple(tuple(row) for row in out)

    def shifted(self, vector: Sequence[int]) -> "LatticeDist":
        v = tuple(int(x) for x in vector)
        return LatticeDist((tuple(a + b for a, b in zip(s, v)), m) for s, m in self._atoms)

    def to_json_obj(self) -> dict:
        return {"atoms": [[list(s), format_fraction(m)] for s, m in self._atoms]}

    @staticmethod
    def from_json_obj(obj: dict) -> "LatticeDist":
        return LatticeDist((site, Fraction(str(mass))) for site, mass in obj["atoms"])

    @staticmethod
    def from_dist(mu: IntDist) -> "LatticeDist":
        return LatticeDist(((s,), m) for s, m in mu.atoms)


def lattice_delta(site: Sequence[int]) -> LatticeDist:
    return LatticeDist([(tuple(site), Fraction(1))])


def lconv(a: LatticeDist, b: LatticeDist) -> LatticeDist:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    da = 1
    for _, m in a.atoms:
        da = da * m.denominator // math.gcd(da, m.denominator)
    db = 1
    for _, m in b.atoms:
        db = db * m.denominator // math.gcd(db, m.denominator)
    na = [(s, int(m * da)) for s, m in a.atoms]
    nb = [(s, int(m * db)) for s, m in b.atoms]
    out: dict[tuple[int, ...], int] = {}
    for sa, wa in na:
        for sb, wb in nb:
            key = tuple(x + y for x, y in zip(sa, sb))
            out[key] = out.get(key, 0) + wa * wb
    den = da * db
    return LatticeDist((s, Fraction(w, den)) for s, w in out.items())


def pow_conv(a: LatticeDist, m: int) -> LatticeDist:
    """m-fold convolution by binary exponentiation."""
    if m < 1:
        raise ValueError("m must be >= 1")
    result: Optional[LatticeDist] = None
    base = a
    while m:
        if m & 1:
            result = base if result is None else lconv(result, base)
        m >>= 1
        if m:
            base = lconv(base, base)
    assert result is not None
    return result


def tv_exact(a: LatticeDist, b: LatticeDist) -> Fraction:
    """Half the L1 distance between the mass functions, exact."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    keys = {s for s, _ in a.atoms} | {s for s, _ in b.atoms}
    return sum((abs(a.mass(s) - b.mass(s)) for s in keys), Fraction(0)) / 2


# -- discretized Gaussian ------------------------------------------------------


@dataclass(frozen=True)
class GaussSpec:
    """Mean vector and symmetric positive-definite covariance."""

    mean: tuple[float, ...]
    cov: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        c = np.asarray(self.cov, dtype=float)
        if c.shape != (len(self.mean), len(self.mean)):
            raise ValueError("covariance shape mismatch")
        if not np.allclose(c, c.T):
            raise ValueError("covariance must be symmetric")
        if np.linalg.eigvalsh(c).min() <= 0:
            raise ValueError("covariance must be positive definite")

    @property
    def dim(self) -> int:
        return len(self.mean)


def _cell_prob_1d(mu: float, sigma: float, x: int) -> tuple[float, float]:
    p = norm_cdf((x + 0.5 - mu) / sigma) - norm_cdf((x - 0.5 - mu) / sigma)
    return max(p, 0.0), 1e-14


def _cell_prob_2d(spec: GaussSpec, x: tuple[int, int], epsabs: float) -> tuple[float, float]:
    m1, m2 = spec.mean
    s11 = spec.cov[0][0]
    s12 = spec.cov[0][1]
    s22 = spec.cov[1][1]
    sd1 = math.sqrt(s11)
    cond_var = s22 - s12 * s12 / s11
    cond_sd = math.sqrt(cond_var)
    a1, b1 = x[0] - 0.5, x[0] + 0.5
    a2, b2 = x[1] - 0.5, x[1] + 0.5

    def integrand(t: float) -> float:
        density = math.exp(-0.5 * ((t - m1) / sd1) ** 2) / (sd1 * math.sqrt(2 * math.pi))
        c = m2 + s12 / s11 * (t - m1)
        return density * (norm_cdf((b2 - c) / cond_sd) - norm_cdf((a2 - c) / cond_sd))

    value, err = quad(integrand, a1, b1, epsabs=epsabs, limit=200)
    return max(value, 0.0), max(err, 1e-15)


def _tail_bound_outside_box(spec: GaussSpec, box: Sequence[tuple[int, int]]) -> float:
    """Upper bound on the Gaussian mass outside the union of box cells.

    Uses the better of the quadratic-norm tail bound (when its dimension
    precondition holds) and the exact per-coordinate union bound.
    """
    d = spec.dim
    union = 0.0
    radius = math.inf
    for j, (lo, hi) in enumerate(box):
        sd = math.sqrt(spec.cov[j][j])
        upper = (hi + 0.5 - spec.mean[j]) / sd
        lower = (spec.mean[j] - (lo - 0.5)) / sd
        union += norm_sf(upper) + norm_sf(lower)
    # a hair of inflation keeps the union a valid bound despite erfc rounding
    bound = min(union * (1 + 1e-12), 1.0)
    for j, (lo, hi) in enumerate(box):
        radius = min(radius, hi + 0.5 - spec.mean[j], spec.mean[j] - (lo - 0.5))
    if radius > 0:
        t = radius * radius
        sigma1 = float(np.linalg.eigvalsh(np.asarray(spec.cov)).max())
        if d <= t / (16 * sigma1):
            bound = min(bound, math.exp(-t / (4 * sigma1)))
    return bound


@dataclass(frozen=True)
class CellTable:
    """Rounded-Gaussian cell probabilities with per-cell certified errors and
    a bound on the mass outside the box."""

    cells: dict
    tail_bound: float
    spec: GaussSpec

    def prob(self, site: Sequence[int]) -> tuple[float, float]:
        return self.cells.get(tuple(int(v) for v in site), (0.0, 0.0))


def discretized_gaussian(
    spec: GaussSpec,
    box: Sequence[tuple[int, int]],
    tol: float,
    seed: int = 0,
    samples: Optional[int] = None,
) -> CellTable:
    """Cell probabilities P(rounded Gaussian = x) for x in the box.

    d <= 2 uses quadrature (closed form in d = 1) with certified absolute
    error at most tol per cell; d = 3 uses seeded Monte Carlo, reporting a
    three-standard-error confidence half-width and requiring it to be at most
    tol.  Larger d is unsupported by design.
    """
    d = spec.dim
    if len(box) != d:
        raise ValueError("box dimension mismatch")
    if tol <= 0:
        raise ValueError("tol must be positive")
    cells: dict[tuple[int, ...], tuple[float, float]] = {}
    if d == 1:
        mu, sigma = spec.mean[0], math.sqrt(spec.cov[0][0])
        for x in range(box[0][0], box[0][1] + 1):
            cells[(x,)] = _cell_prob_1d(mu, sigma, x)
    elif d == 2:
        for x0 in range(box[0][0], box[0][1] + 1):
            for x1 in range(box[1][0], box[1][1] + 1):
                p, err = _cell_prob_2d(spec, (x0, x1), epsabs=min(tol / 10, 1e-11))
                if err > tol:
                    raise ValueError(f"quadrature error {err} exceeds tol {tol} at {(x0, x1)}")
                cells[(x0, x1)] = (p, err)
    elif d == 3:
        n = samples if samples is not None else int(math.ceil((1.5 / tol) ** 2))
        if n > 5 * 10**7:
            raise ValueError("tol too small for the Monte Carlo budget")
        rng = np.random.default_rng(seed)
        chol = np.linalg.cholesky(np.asarray(spec.cov))
        draws = rng.standard_normal((n, 3)) @ chol.T + np.asarray(spec.mean)
        rounded = np.floor(draws + 0.5).astype(int)
        for x0 in range(box[0][0], box[0][1] + 1):
            for x1 in range(box[1][0], box[1][1] + 1):
                for x2 in range(box[2][0], box[2][1] + 1):
                    hits = np.all(rounded == (x0, x1, x2), axis=1).sum()
                    p = hits / n
                    half = 3 * math.sqrt(max(p * (1 - p), 1.0 / n) / n)
                    cells[(x0, x1, x2)] = (p, half)
    else:
        raise ValueError("dimension above 3 unsupported")
    return CellTable(cells, _tail_bound_outside_box(spec, box), spec)


@dataclass(frozen=True)
class TVResult:
    value: float
    err: float
    cells: int
    tail_bound: float
    spec: GaussSpec

    def upper(self) -> float:
        return self.value + self.err

    def lower(self) -> float:
        return self.value - self.err


def fit_gauss_spec(s: LatticeDist) -> GaussSpec:
    mean = tuple(float(x) for x in s.mean())
    cov_exact = s.cov()
    d = s.dim
    if d == 1:
        degenerate = cov_exact[0][0] == 0
    elif d == 2:
        degenerate = cov_exact[0][0] * cov_exact[1][1] - cov_exact[0][1] ** 2 <= 0
    else:
        degenerate = np.linalg.matrix_rank(np.asarray(cov_exact, dtype=float)) < d
    if degenerate:
        raise ValueError("degenerate covariance: rank below dimension")
    return GaussSpec(mean, tuple(tuple(float(v) for v in row) for row in cov_exact))


def tv_to_discretized_gaussian(s: LatticeDist, tol: float = 1e-6) -> TVResult:
    """Total variation between an exact lattice distribution and the rounded
    Gaussian with matching mean and covariance, with a certified error.

    The sum runs over the support plus a 6.5-sigma box; outside that set the
    exact side is zero, so the remainder is at most half the Gaussian tail
    bound and is folded into the reported error interval.
    """
    d = s.dim
    if d > 2:
        raise ValueError("exact side supported only for d <= 2")
    spec = fit_gauss_spec(s)
    sites = [site for site, _ in s.atoms]
    box = []
    for j in range(d):
        sd = math.sqrt(spec.cov[j][j])
        lo = min(min(x[j] for x in sites), math.floor(spec.mean[j] - 6.5 * sd))
        hi = max(max(x[j] for x in sites), math.ceil(spec.mean[j] + 6.5 * sd))
        box.append((lo, hi))
    ncells = 1
    for lo, hi in box:
        ncells *= hi - lo + 1
    table = discretized_gaussian(spec, box, tol=max(tol / ncells, 1e-13))
    half_l1 = 0.0
    err_sum = 0.0
    for site, (p, err) in table.cells.items():
        half_l1 += abs(float(s.mass(site)) - p)
        err_sum += err
    tail = table.tail_bound
    value = 0.5 * half_l1 + 0.25 * tail
    err = 0.5 * err_sum + 0.25 * tail + 1e-12
    return TVResult(value, err, ncells, tail, spec)


# -- local-CLT terms -----------------------------------------------------------


@dataclass(frozen=True)
class LLTTerms:
    """Computable ingredients of the lattice local-CLT total-variation bound.

    u[i] is one minus the smallest-shift total variation of the i-th summand;
    s_tilde is their sum less the largest one; chi is the third absolute
    moment of a uniformly mixed independent difference; L normalizes chi by
    the trace of twice the average covariance, to the 3/2 power.  applicable
    is False when s_tilde vanishes (the bound then says nothing).
    """

    L: float
    chi: float
    s_tilde: float
    u: tuple[float, ...]
    applicable: bool


def llt_terms(ys: Sequence[LatticeDist]) -> LLTTerms:
    if not ys:
        raise ValueError("empty summand list")
    d = ys[0].dim
    if any(y.dim != d for y in ys):
        raise ValueError("dimension mismatch")
    m = len(ys)

    u_exact = []
    for y in ys:
        shifts = []
        for j in range(d):
            e = [0] * d
            e[j] = 1
            shifts.append(1 - tv_exact(y, y.shifted(e)))
        u_exact.append(min(shifts))
    s_tilde_exact = sum(u_exact, Fraction(0)) - max(u_exact)

    chi = 0.0
    for y in ys:
        for sa, ma in y.atoms:
            for sb, mb in y.atoms:
                dist_sq = sum((a - b) ** 2 for a, b in zip(sa, sb))
                chi += float(ma * mb) * dist_sq**1.5
    chi /= m

    trace = Fraction(0)
    for y in ys:
        c = y.cov()
        trace += sum(c[i][i] for i in range(d))
    denom = (2.0 * float(trace) / m) ** 1.5
    big_l = (chi / math.sqrt(m)) / denom if denom > 0 else math.inf

    return LLTTerms(
        L=big_l,
        chi=chi,
        s_tilde=float(s_tilde_exact),
        u=tuple(float(x) for x in u_exact),
        applicable=s_tilde_exact > 0,
    )


def tv_convergence_curve(base: LatticeDist, ms: Sequence[int], tol: float = 1e-6) -> list[dict]:
    """TV-to-rounded-Gaussian and local-CLT terms for m-fold self sums."""
    rows = []
    for m in ms:
        s = pow_conv(base, m)
        tv = tv_to_discretized_gaussian(s, tol)
        terms = llt_terms([base] * m)
        rows.append(
            {
                "m": m,
                "tv": tv.value,
                "tv_err": tv.err,
                "L": terms.L,
                "chi": terms.chi,
                "s_tilde": terms.s_tilde,
            }
        )
    return rows


# -- appendix utilities ---------------------------------------------------------


@dataclass(frozen=True)
class SingularBoundReport:
    bound: float
    sigma_min: float
    holds: bool
    column_norm_max: float


def singular_lower_bound(a) -> SingularBoundReport:
    """Check the determinant-based lower bound for the smallest singular
    value of an integer matrix of full column rank: (sqrt(n) R)**-(n-1) with
    R the largest column norm."""
    mat = np.asarray(a, dtype=float)
    if mat.ndim != 2:
        raise ValueError("need a matrix")
    m, n = mat.shape
    if n > m or np.linalg.matrix_rank(mat) < n:
        raise ValueError("matrix must have full column rank")
    r = float(np.linalg.norm(mat, axis=0).max())
    bound = (math.sqrt(n) * r) ** (-(n - 1)) if n > 1 else 1.0
    sigma_min = float(np.linalg.svd(mat, compute_uv=False).min())
    slack = 1e-9 * max(1.0, sigma_min)
    return SingularBoundReport(bound, sigma_min, sigma_min >= bound - slack, r)


def gaussian_tail_bound(sigma, t: float) -> float:
    """exp(-t / (4 sigma_1)) bound for P(|X|^2 >= t), valid when the
    dimension is at most t / (16 sigma_1)."""
    mat = np.asarray(sigma, dtype=float)
    d = mat.shape[0]
    sigma1 = float(np.linalg.eigvalsh(mat).max())
    if sigma1 <= 0:
        raise ValueError("covariance must be positive definite")
    if d > t / (16 * sigma1):
        raise ValueError(f"precondition fails: d={d} > t/(16 sigma_1)={t / (16 * sigma1)}")
    return math.exp(-t / (4 * sigma1))


@dataclass(frozen=True)
class TailCheckReport:
    bound: float
    empirical: float
    std_err: float
    holds: bool
    samples: int
    seed: int


def gaussian_tail_check(sigma, t: float, samples: int, seed: int = 0) -> TailCheckReport:
    """Empirical exceedance of the squared-norm tail versus its bound.

    Verifies empirical <= bound + 3 binomial standard errors (computed at the
    bound, the null rate)."""
    bound = gaussian_tail_bound(sigma, t)
    mat = np.asarray(sigma, dtype=float)
    rng = np.random.default_rng(seed)
    chol = np.linalg.cholesky(mat)
    draws = rng.standard_normal((samples, mat.shape[0])) @ chol.T
    exceed = float((np.sum(draws**2, axis=1) >= t).mean())
    se = math.sqrt(bound * (1 - bound) / samples)
    return TailCheckReport(bound, exceed, se, exceed <= bound + 3 * se, samples, seed)


@dataclass(frozen=True)
class BEGapReport:
    """Exact CDF-versus-normal gap for a sum, with the third-moment ratio
    bound (the proportionality constant is configured by the caller)."""

    max_cdf_gap: float
    bound: float
    third_moment: Fraction
    variance: Fraction


def berry_esseen_gap(mus: Sequence[IntDist]) -> BEGapReport:
    from .dist import convolve_all, mean, third_abs_moment, variance

    if not mus:
        raise ValueError("empty summand list")
    total = convolve_all(list(mus))
    var = variance(total)
    if var == 0:
        raise ValueError("zero variance")
    m3 = sum((third_abs_moment(mu) for mu in mus), Fraction(0))
    bound = float(m3) / float(var) ** 1.5
    mu1 = float(mean(total))
    sd = math.sqrt(float(var))
    acc = Fraction(0)
    gap = 0.0
    for site, mass in total.atoms:
        phi = norm_cdf((site - mu1) / sd)
        gap = max(gap, abs(float(acc) - phi))
        acc += mass
        gap = max(gap, abs(float(acc) - phi))
    return BEGapReport(gap, bound, m3, var)
