"""Exact finite probability distributions on the integers.

The central type is :class:`IntDist`: an immutable list of (site, mass) atoms
with strictly increasing integer sites and positive rational masses summing to
exactly one.  Every probabilistic quantity in this package (concentration
functionals, moments, rearrangements, structural predicates) is computed in
exact rational arithmetic on these values; floating point never enters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and 'num/den' strings to Fraction."""
    if isinstance(value, float):
        raise TypeError("floating-point masses are not accepted; use exact rationals")
    return Fraction(value)


def format_fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class SpanResult:
    """Maximum span of a distribution: a positive integer, or infinite for a
    single atom."""

    value: int | None

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __repr__(self) -> str:
        return "SpanResult(INFINITE)" if self.is_infinite else f"SpanResult({self.value})"


INFINITE_SPAN = SpanResult(None)


class IntDist:
    """Finite probability distribution on Z with exact rational masses.

    Immutable value type: all operations return fresh instances.  Atoms are
    stored as a tuple of (site, mass) pairs with sites strictly increasing,
    every mass positive, and the masses summing to exactly 1.
    """

    __slots__ = ("_atoms",)

    def __init__(self, atoms: Iterable[tuple[int, object]]):
        merged: dict[int, Fraction] = {}
        for site, mass in atoms:
            site = int(site)
            mass = as_fraction(mass)
            if mass < 0:
                raise ValueError(f"negative mass {mass} at site {site}")
            if site in merged:
                raise ValueError(f"duplicate site {site}")
            if mass > 0:
                merged[site] = mass
        if not merged:
            raise ValueError("empty distribution")
        total = sum(merged.values())
        if total != 1:
            raise ValueError(f"masses sum to {total}, expected 1")
        object.__setattr__(self, "_atoms", tuple(sorted(merged.items())))

    # -- basic accessors -------------------------------------------------

    @property
    def atoms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._atoms

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self._atoms)

    @property
    def masses(self) -> tuple[Fraction, ...]:
        return tuple(m for _, m in self._atoms)

    def mass(self, site: int) -> Fraction:
        for s, m in self._atoms:
            if s == site:
                return m
            if s > site:
                break
        return Fraction(0)

    def __len__(self) -> int:
        return len(self._atoms)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntDist) and self._atoms == other._atoms

    def __hash__(self) -> int:
        return hash(self._atoms)

    def __repr__(self) -> str:
        inner = ", ".join(f"{s}: {format_fraction(m)}" for s, m in self._atoms)
        return f"IntDist({{{inner}}})"

    def __setattr__(self, name, value):
        raise AttributeError("IntDist is immutable")

    def denominator(self) -> int:
        """Least common denominator of all masses."""
        d = 1
        for m in self.masses:
            d = d * m.denominator // gcd(d, m.denominator)
        return d

    # -- serialization ---------------------------------------------------

    def to_json_obj(self) -> dict:
        return {"atoms": [[s, format_fraction(m)] for s, m in self._atoms]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def to_text(self) -> str:
        return "\n".join(f"{s}: {format_fraction(m)}" for s, m in self._atoms) + "\n"

    @staticmethod
    def from_json_obj(obj: dict) -> "IntDist":
        if not isinstance(obj, dict) or "atoms" not in obj:
            raise ValueError("distribution JSON must be an object with an 'atoms' key")
        return IntDist((site, Fraction(str(mass))) for site, mass in obj["atoms"])

    @staticmethod
    def from_json(text: str) -> "IntDist":
        return IntDist.from_json_obj(json.loads(text))

    @staticmethod
    def from_text(text: str) -> "IntDist":
        atoms = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                site_s, mass_s = line.split(":")
                atoms.append((int(site_s.strip()), Fraction(mass_s.strip())))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"line {lineno}: cannot parse {line!r}") from exc
        return IntDist(atoms)


# -- constructors ---------------------------------------------------------


def delta(site: int) -> IntDist:
    return IntDist([(site, Fraction(1))])


def uniform(sites: Sequence[int]) -> IntDist:
    sites = list(sites)
    if not sites:
        raise ValueError("uniform distribution needs at least one site")
    p = Fraction(1, len(sites))
    return IntDist((s, p) for s in sites)


def uniform_interval(lo: int, hi: int) -> IntDist:
    if hi < lo:
        raise ValueError("empty interval")
    return uniform(range(lo, hi + 1))


# -- operations ------------------------------------------------------------


def convolve(a: IntDist, b: IntDist) -> IntDist:
    """Exact distribution of the sum of independent draws from a and b.

    Masses are accumulated as integer numerators over the product of the two
    common denominators, so only one gcd normalization happens per output
    atom instead of one per term.
    """
    da, db = a.denominator(), b.denominator()
    na = [(s, int(m * da)) for s, m in a.atoms]
    nb = [(s, int(m * db)) for s, m in b.atoms]
    out: dict[int, int] = {}
    for sa, wa in na:
        for sb, wb in nb:
            key = sa + sb
            out[key] = out.get(key, 0) + wa * wb
    den = da * db
    return IntDist((s, Fraction(w, den)) for s, w in out.items())


def convolve_all(dists: Sequence[IntDist]) -> IntDist:
    if not dists:
        raise ValueError("empty convolution")
    acc = dists[0]
    for d in dists[1:]:
        acc = convolve(acc, d)
    return acc


def convolve_power(mu: IntDist, n: int) -> IntDist:
    """n-fold self-convolution by binary exponentiation."""
    if n < 1:
        raise ValueError("n must be >= 1")
    result: IntDist | None = None
    base = mu
    while n:
        if n & 1:
            result = base if result is None else convolve(result, base)
        n >>= 1
        if n:
            base = convolve(base, base)
    assert result is not None
    return result


def q_max(mu: IntDist) -> Fraction:
    """Largest single atom mass."""
    return max(mu.masses)


def q_k(mu: IntDist, k: int) -> Fraction:
    """Sum of the k largest masses (1 once k reaches the atom count)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(mu.masses, reverse=True)
    return sum(ranked[:k], Fraction(0))


def q_interval(mu: IntDist, t: int) -> Fraction:
    """Maximum total mass on any window of t consecutive integers.

    An open real interval of length t contains at most t integers and that
    count is attained, so the sliding-window maximum realizes the open-interval
    concentration at scale t; q_interval(mu, 1) == q_max(mu).
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    sites = mu.sites
    masses = mu.masses
    best = Fraction(0)
    j = 0
    window = Fraction(0)
    for i in range(len(sites)):
        window += masses[i]
        while sites[i] - sites[j] >= t:
            window -= masses[j]
            j += 1
        if window > best:
            best = window
    return best


def mean(mu: IntDist) -> Fraction:
    return sum((Fraction(s) * m for s, m in mu.atoms), Fraction(0))


def variance(mu: IntDist) -> Fraction:
    mu1 = mean(mu)
    return sum((m * (Fraction(s) - mu1) ** 2 for s, m in mu.atoms), Fraction(0))


def third_abs_moment(mu: IntDist) -> Fraction:
    """E|X - EX|**3, exact (used by the normal-approximation bound)."""
    mu1 = mean(mu)
    return sum((m * abs(Fraction(s) - mu1) ** 3 for s, m in mu.atoms), Fraction(0))


def shift(mu: IntDist, c: int) -> IntDist:
    return IntDist((s + c, m) for s, m in mu.atoms)


def negate(mu: IntDist) -> IntDist:
    return IntDist((-s, m) for s, m in mu.atoms)


def has_contiguous_support(mu: IntDist) -> bool:
    sites = mu.sites
    return sites[-1] - sites[0] + 1 == len(sites)


def is_log_concave(mu: IntDist) -> bool:
    """Squared-mass inequality on a contiguous support.

    The inequality m(i)**2 >= m(i-1)*m(i+1) is required at every integer i, so
    a zero between two positive masses fails it; hence contiguous support is
    part of the predicate.
    """
    if not has_contiguous_support(mu):
        return False
    ms = mu.masses
    return all(ms[i] ** 2 >= ms[i - 1] * ms[i + 1] for i in range(1, len(ms) - 1))


def is_unimodal(mu: IntDist) -> bool:
    """Masses nondecreasing up to some site, nonincreasing after."""
    if len(mu) == 1:
        return True
    if not has_contiguous_support(mu):
        return False
    ms = mu.masses
    i = 0
    while i + 1 < len(ms) and ms[i + 1] >= ms[i]:
        i += 1
    while i + 1 < len(ms) and ms[i + 1] <= ms[i]:
        i += 1
    return i == len(ms) - 1


def modes(mu: IntDist) -> list[int]:
    """All sites carrying the maximal mass."""
    peak = q_max(mu)
    return [s for s, m in mu.atoms if m == peak]


def max_span(mu: IntDist) -> SpanResult:
    """gcd of pairwise site differences; infinite for a single atom."""
    sites = mu.sites
    if len(sites) == 1:
        return INFINITE_SPAN
    base = sites[0]
    g = 0
    for s in sites[1:]:
        g = gcd(g, s - base)
    return SpanResult(g)


def squeeze(mu: IntDist) -> IntDist:
    """Remap the sites, in order, onto the maximally centered interval.

    The mass multiset is preserved: the j-th smallest site keeps its mass and
    moves to position j - 1 - floor((N-1)/2), so an N-atom distribution lands
    on {-floor((N-1)/2), ..., ceil((N-1)/2)}.
    """
    n = len(mu)
    start = -((n - 1) // 2)
    return IntDist((start + j, m) for j, (_, m) in enumerate(mu.atoms))


def is_sharp_log_concave(mu: IntDist) -> bool:
    return is_log_concave(squeeze(mu))
