"""Mass rearrangements, ball functions, nested medians, and the dominating
coupling.

The plus-rearrangement of a measure places its masses, sorted in decreasing
order, at 0, 1, -1, 2, -2, ...; the minus-rearrangement mirrors that layout.
A measure with integer-scaled masses can be laid out as "balls" on an index
interval (the ball function), whose group medians form a nested chain; that
chain is what makes the explicit dominating coupling construction work.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

from .dist import IntDist, as_fraction, format_fraction, q_k


class IntMeasure:
    """Finite nonnegative measure on Z with exact rational masses.

    Unlike :class:`IntDist` the total mass may be any positive rational.
    """

    __slots__ = ("_atoms", "_total")

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
            raise ValueError("zero measure")
        object.__setattr__(self, "_atoms", tuple(sorted(merged.items())))
        object.__setattr__(self, "_total", sum(merged.values()))

    @property
    def atoms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._atoms

    @property
    def total(self) -> Fraction:
        return self._total

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMeasure) and self._atoms == other._atoms

    def __hash__(self) -> int:
        return hash(self._atoms)

    def __repr__(self) -> str:
        inner = ", ".join(f"{s}: {format_fraction(m)}" for s, m in self._atoms)
        return f"IntMeasure({{{inner}}})"

    def __setattr__(self, name, value):
        raise AttributeError("IntMeasure is immutable")

    @staticmethod
    def from_dist(mu: IntDist) -> "IntMeasure":
        return IntMeasure(mu.atoms)

    def scaled_integer_atoms(self) -> tuple[list[tuple[int, int]], int]:
        """Atoms with masses scaled by the common denominator to integers.

        Returns (list of (site, count), scale) with count = scale * mass.
        """
        scale = 1
        for _, m in self._atoms:
            scale = scale * m.denominator // gcd(scale, m.denominator)
        return [(s, int(m * scale)) for s, m in self._atoms], scale


# -- rearrangements --------------------------------------------------------


def _plus_position(rank: int) -> int:
    """Position of the rank-th largest mass in the plus layout 0,1,-1,2,-2,..."""
    return (rank + 1) // 2 if rank % 2 == 1 else -(rank // 2)


def _ranked_atoms(atoms) -> list[tuple[int, Fraction]]:
    """Atoms sorted by decreasing mass; ties broken by ascending site."""
    return sorted(atoms, key=lambda a: (-a[1], a[0]))


def plus_rearrange(mu: IntDist) -> IntDist:
    """Masses sorted descending, placed at 0, 1, -1, 2, -2, ...

    Among equal masses, original sites are placed in ascending site order;
    all quantities consumed downstream (q_k profiles, masses of centered
    intervals) are invariant under this tie-break.
    """
    ranked = _ranked_atoms(mu.atoms)
    return IntDist((_plus_position(r), m) for r, (_, m) in enumerate(ranked))


def minus_rearrange(mu: IntDist) -> IntDist:
    """Mirror layout 0, -1, 1, -2, 2, ...; pointwise the reflection of
    plus_rearrange."""
    ranked = _ranked_atoms(mu.atoms)
    return IntDist((-_plus_position(r), m) for r, (_, m) in enumerate(ranked))


def sym_rearrange(mu: IntDist) -> Optional[IntDist]:
    """The symmetric decreasing rearrangement, when it exists.

    Exists exactly when the plus and minus rearrangements agree as
    distributions; returns None otherwise.
    """
    plus = plus_rearrange(mu)
    return plus if plus == minus_rearrange(mu) else None


def measure_plus_rearrange(nu: IntMeasure) -> IntMeasure:
    ranked = _ranked_atoms(nu.atoms)
    return IntMeasure((_plus_position(r), m) for r, (_, m) in enumerate(ranked))


# -- ball functions and medians ---------------------------------------------


@dataclass(frozen=True)
class BallFunction:
    """Nondecreasing layout of integer-scaled masses over an index interval.

    groups[i] = (value, (lo, hi)): the balls with indices lo..hi sit at the
    plus-rearranged site `value`; the index intervals partition the domain.
    """

    groups: tuple[tuple[int, tuple[int, int]], ...]
    domain: tuple[int, int]

    def value_at(self, index: int) -> int:
        for value, (lo, hi) in self.groups:
            if lo <= index <= hi:
                return value
        raise KeyError(f"index {index} outside domain {self.domain}")

    def group_for_value(self, value: int) -> tuple[int, int]:
        for v, span in self.groups:
            if v == value:
                return span
        raise KeyError(f"value {value} not in range")

    @property
    def size(self) -> int:
        return self.domain[1] - self.domain[0] + 1

    def to_json_obj(self) -> dict:
        return {
            "domain": list(self.domain),
            "groups": [[v, [lo, hi]] for v, (lo, hi) in self.groups],
        }


def _layout(scaled_atoms: list[tuple[int, int]], start: int) -> BallFunction:
    """Lay out (site, count) atoms, ascending by site, from index `start`."""
    groups = []
    idx = start
    for site, count in scaled_atoms:
        groups.append((site, (idx, idx + count - 1)))
        idx += count
    total = idx - start
    return BallFunction(tuple(groups), (start, start + total - 1))


def ball_function(nu: IntMeasure) -> BallFunction:
    """Ball layout of the plus-rearranged measure on the canonical domain.

    Masses are scaled by their common denominator to integer counts N*mass;
    the domain is {1, ..., N}.  The layout is the unique nondecreasing
    function whose level-set sizes match the scaled plus-rearranged masses.
    """
    plus = measure_plus_rearrange(nu)
    scaled, _ = plus.scaled_integer_atoms()
    return _layout(scaled, 1)


def centered_interval(j: int) -> tuple[int, int]:
    """The maximally centered interval of j integers: {-floor((j-1)/2), ...,
    ceil((j-1)/2)}."""
    if j < 1:
        raise ValueError("j must be >= 1")
    return (-((j - 1) // 2), (j - 1) - (j - 1) // 2)


@dataclass(frozen=True)
class MedianChain:
    """Medians of the nested centered level sets of a ball function.

    m is the median of the whole domain; level_medians[j-1] is the median of
    the ball indices whose value lies in the centered interval of j sites.
    All medians are half-integers stored exactly.
    """

    m: Fraction
    level_medians: tuple[Fraction, ...]

    def median(self, j: int) -> Fraction:
        if j < 1:
            raise ValueError("j must be >= 1")
        if j <= len(self.level_medians):
            return self.level_medians[j - 1]
        return self.m


def _interval_median(lo: int, hi: int) -> Fraction:
    return Fraction(lo + hi, 2)


def nested_medians(nu: IntMeasure) -> MedianChain:
    bf = ball_function(nu)
    lo, hi = bf.domain
    m = _interval_median(lo, hi)
    values = sorted(v for v, _ in bf.groups)
    meds = []
    for j in range(1, len(values) + 1):
        ilo, ihi = centered_interval(j)
        spans = [bf.group_for_value(v) for v in values if ilo <= v <= ihi]
        meds.append(_interval_median(min(s[0] for s in spans), max(s[1] for s in spans)))
    return MedianChain(m, tuple(meds))


# -- the dominating coupling -------------------------------------------------


@dataclass(frozen=True)
class JointCoupling:
    """Joint law of (Z, X', event flag) realizing the dominating coupling.

    cells hold (z, x_prime, in_A, mass) with exact masses summing to 1; the
    audit dict records the even denominator N, the event size K, epsilon, and
    how many times N had to be doubled to make both N and K even.
    """

    cells: tuple[tuple[int, int, bool, Fraction], ...]
    audit: dict = field(default_factory=dict, compare=False)

    def prob_a(self) -> Fraction:
        return sum((m for _, _, flag, m in self.cells if flag), Fraction(0))

    def marginal_z(self, in_a: bool | None = None) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        total = Fraction(0)
        for z, _, flag, m in self.cells:
            if in_a is not None and flag is not in_a:
                continue
            out[z] = out.get(z, Fraction(0)) + m
            total += m
        if in_a is not None:
            if total == 0:
                return {}
            out = {z: m / total for z, m in out.items()}
        return out

    def marginal_x_prime(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for _, x, _, m in self.cells:
            out[x] = out.get(x, Fraction(0)) + m
        return out

    def to_json_rows(self) -> list:
        return [[z, x, flag, format_fraction(m)] for z, x, flag, m in self.cells]

    def to_json(self) -> str:
        return json.dumps(
            {
                "cells": self.to_json_rows(),
                "audit": {k: str(v) for k, v in self.audit.items()},
            }
        )


def is_symmetric_unimodal(mu: IntDist) -> bool:
    """Symmetric about 0 and unimodal."""
    from .dist import is_unimodal

    for s, m in mu.atoms:
        if mu.mass(-s) != m:
            return False
    return is_unimodal(mu)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def dominating_coupling(mu: IntDist, mu_prime: IntDist, eps) -> JointCoupling:
    """Couple Z ~ plus_rearrange(mu) with X' ~ mu_prime on a shared uniform
    index.

    Requires mu_prime symmetric and unimodal and the concentration profile of
    mu bounded by (1+eps) times that of mu_prime.  The returned coupling has
    an event A with P(A) >= 1/(1+eps) on which every cell satisfies
    0 <= x' <= z or z-1 <= x' <= 0, and on the complement Z and X' are
    independent with Z still distributed as plus_rearrange(mu).
    """
    eps = as_fraction(eps)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    if not is_symmetric_unimodal(mu_prime):
        raise ValueError("mu_prime must be symmetric about 0 and unimodal")
    for j in range(1, max(len(mu), len(mu_prime)) + 1):
        if q_k(mu, j) > (1 + eps) * q_k(mu_prime, j):
            raise ValueError(f"domination fails at j={j}")

    c = 1 / (1 + eps)
    plus = plus_rearrange(mu)
    n_den = 1
    for _, m in plus.atoms:
        n_den = _lcm(n_den, m.denominator)
        n_den = _lcm(n_den, (c * m).denominator)
    for _, m in mu_prime.atoms:
        n_den = _lcm(n_den, m.denominator)
    doublings = 0
    big_n = n_den
    if big_n % 2 == 1:
        big_n *= 2
        doublings += 1
    big_k = big_n * c
    assert big_k.denominator == 1
    if int(big_k) % 2 == 1:
        big_n *= 2
        doublings += 1
        big_k = big_n * c
    big_k = int(big_k)

    scaled_z = [(s, int(m * c * big_n)) for s, m in plus.atoms]
    f = _layout(scaled_z, -(big_k // 2) + 1)
    scaled_x = [(s, int(m * big_n)) for s, m in mu_prime.atoms]
    f_prime = _layout(scaled_x, -(big_n // 2) + 1)

    # Merge the two run partitions instead of walking every index: the cell
    # mass is the overlap length over N, so the work is quadratic in the atom
    # counts, not linear in the denominator.
    cells: dict[tuple[int, int, bool], Fraction] = {}
    for z, (zlo, zhi) in f.groups:
        for x, (xlo, xhi) in f_prime.groups:
            lo, hi = max(zlo, xlo), min(zhi, xhi)
            if lo <= hi:
                key = (z, x, True)
                cells[key] = cells.get(key, Fraction(0)) + Fraction(hi - lo + 1, big_n)
    complement = [
        (-(big_n // 2) + 1, -(big_k // 2)),
        (big_k // 2 + 1, big_n // 2),
    ]
    for clo, chi in complement:
        if chi < clo:
            continue
        for x, (xlo, xhi) in f_prime.groups:
            lo, hi = max(clo, xlo), min(chi, xhi)
            if lo <= hi:
                weight = Fraction(hi - lo + 1, big_n)
                for z, w in plus.atoms:
                    key = (z, x, False)
                    cells[key] = cells.get(key, Fraction(0)) + weight * w

    ordered = tuple(
        (z, x, flag, m)
        for (z, x, flag), m in sorted(cells.items(), key=lambda kv: (not kv[0][2], kv[0][0], kv[0][1]))
    )
    audit = {"N": big_n, "K": big_k, "epsilon": eps, "doublings": doublings}
    return JointCoupling(ordered, audit)
