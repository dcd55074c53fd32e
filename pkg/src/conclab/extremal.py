"""Minimum-variance extremal measures and the optimal concentration
functionals.

For a concentration cap alpha in (0, 1], the benchmark distribution nu(alpha)
puts mass alpha on 0..floor(1/alpha)-1 and the residue on the next site; it
has minimum variance among integer distributions whose largest atom is at
most alpha.  This module provides nu, its closed-form variance, the
extremal/standard-extremal predicates, the balanced-sequence machinery, and
the sign-search / windowed brute-force functionals over these families.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .dist import (
    IntDist,
    as_fraction,
    convolve_all,
    format_fraction,
    negate,
    q_max,
    shift,
)


class AlphaSeq:
    """A sequence of concentration caps in (0, 1], stored nonincreasing.

    The constructor sorts the values and records the permutation from the
    input order to the canonical order.
    """

    __slots__ = ("_alphas", "_perm")

    def __init__(self, alphas: Iterable[object]):
        raw = [as_fraction(a) for a in alphas]
        if not raw:
            raise ValueError("empty alpha sequence")
        for a in raw:
            if not (0 < a <= 1):
                raise ValueError(f"alpha {a} outside (0, 1]")
        order = sorted(range(len(raw)), key=lambda i: (-raw[i], i))
        object.__setattr__(self, "_alphas", tuple(raw[i] for i in order))
        object.__setattr__(self, "_perm", tuple(order))

    @property
    def alphas(self) -> tuple[Fraction, ...]:
        return self._alphas

    @property
    def permutation(self) -> tuple[int, ...]:
        return self._perm

    def __len__(self) -> int:
        return len(self._alphas)

    def __iter__(self):
        return iter(self._alphas)

    def __eq__(self, other) -> bool:
        return isinstance(other, AlphaSeq) and self._alphas == other._alphas

    def __hash__(self) -> int:
        return hash(self._alphas)

    def __repr__(self) -> str:
        return "AlphaSeq(" + ", ".join(format_fraction(a) for a in self._alphas) + ")"

    def __setattr__(self, name, value):
        raise AttributeError("AlphaSeq is immutable")


@dataclass(frozen=True)
class SESelection:
    """A sign and shift per index, selecting one standard extremal measure
    for each cap."""

    signs: tuple[int, ...]
    shifts: tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) != len(self.shifts):
            raise ValueError("signs and shifts must have equal length")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be -1 or +1")


def _validate_alpha(alpha: Fraction) -> Fraction:
    if not (0 < alpha <= 1):
        raise ValueError(f"alpha {alpha} outside (0, 1]")
    return alpha


def inverse_floor(alpha: Fraction) -> int:
    return int(Fraction(1) / alpha)


def nu(alpha) -> IntDist:
    """Mass alpha on 0..k-1 plus the residue 1 - k*alpha at k (when positive),
    k = floor(1/alpha)."""
    alpha = _validate_alpha(as_fraction(alpha))
    k = inverse_floor(alpha)
    atoms = [(i, alpha) for i in range(k)]
    residue = 1 - k * alpha
    if residue > 0:
        atoms.append((k, residue))
    return IntDist(atoms)


def nu_centered(alpha) -> IntDist:
    """nu(alpha) for alpha = 1/k with k odd, translated to be symmetric."""
    alpha = as_fraction(alpha)
    k = inverse_floor(alpha)
    if alpha * k != 1 or k % 2 == 0:
        raise ValueError("centered form needs alpha = 1/k with k odd")
    return shift(nu(alpha), -(k - 1) // 2)


def variance_nu(alpha) -> Fraction:
    """Closed-form variance of nu(alpha):
    (-3 a^2 k^2 (k+1)^2 + 2 a k (k+1) (2k+1)) / 12 with k = floor(1/a)."""
    alpha = _validate_alpha(as_fraction(alpha))
    k = inverse_floor(alpha)
    return Fraction(-3 * alpha**2 * k**2 * (k + 1) ** 2 + 2 * alpha * k * (k + 1) * (2 * k + 1), 12)


def variance_slope_bracket(k: int) -> tuple[Fraction, Fraction]:
    """Bounds on the derivative of alpha -> variance_nu(alpha) on
    (1/(k+1), 1/k): [-k(k+1)(k+2)/6, -k(k^2-1)/6]."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return (Fraction(-k * (k + 1) * (k + 2), 6), Fraction(-k * (k**2 - 1), 6))


def is_extremal(mu: IntDist, alpha) -> bool:
    """Exactly floor(1/alpha) atoms of mass alpha, plus one residual atom when
    1 - alpha*floor(1/alpha) > 0; sites anywhere on Z."""
    alpha = as_fraction(alpha)
    if not (0 < alpha <= 1):
        return False
    k = inverse_floor(alpha)
    residue = 1 - k * alpha
    big = [m for m in mu.masses if m == alpha]
    small = [m for m in mu.masses if m == residue]
    if residue > 0:
        return len(big) == k and len(small) == 1 and len(mu) == k + 1
    return len(big) == k and len(mu) == k


def is_standard_extremal(mu: IntDist, alpha) -> bool:
    """A translate of nu(alpha) or of its reflection."""
    alpha = as_fraction(alpha)
    if not (0 < alpha <= 1):
        return False
    base = nu(alpha)
    lo = mu.sites[0]
    return mu == shift(base, lo) or mu == shift(negate(base), lo - negate(base).sites[0])


def _alpha_counts(alphas: Sequence[Fraction]) -> dict[Fraction, int]:
    counts: dict[Fraction, int] = {}
    for a in alphas:
        counts[a] = counts.get(a, 0) + 1
    return counts


def _has_odd_integer_inverse(alpha: Fraction) -> bool:
    inv = 1 / alpha
    return inv.denominator == 1 and inv.numerator % 2 == 1


def is_balanced(alphas: AlphaSeq) -> bool:
    """Each value either has an odd-integer inverse or occurs an even number
    of times."""
    return all(
        count % 2 == 0 or _has_odd_integer_inverse(a)
        for a, count in _alpha_counts(alphas.alphas).items()
    )


def is_strongly_balanced(alphas: AlphaSeq) -> bool:
    """Every value occurs an even number of times."""
    return all(count % 2 == 0 for count in _alpha_counts(alphas.alphas).values())


def balanced_sequence(alphas: AlphaSeq, flip: bool = False) -> list[IntDist]:
    """A balanced standard extremal sequence for a balanced cap sequence.

    Equal caps are paired as (nu, -nu); a leftover cap with odd-integer
    inverse contributes its centered uniform, which is its own reflection.
    With flip=True the roles inside each pair are swapped and even groups of
    odd-inverse caps use centered uniforms — a genuinely different balanced
    sequence used to cross-check pairing independence.
    """
    if not is_balanced(alphas):
        raise ValueError("alpha sequence is not balanced")
    out: list[IntDist] = []
    for a, count in sorted(_alpha_counts(alphas.alphas).items(), reverse=True):
        pairs, leftover = divmod(count, 2)
        if flip and _has_odd_integer_inverse(a):
            out.extend(nu_centered(a) for _ in range(count))
            continue
        for _ in range(pairs):
            first, second = (negate(nu(a)), nu(a)) if flip else (nu(a), negate(nu(a)))
            out.extend((first, second))
        if leftover:
            out.append(nu_centered(a))
    return out


def tsebal(alphas: AlphaSeq) -> Fraction:
    """Mass at 0 of the convolution of a balanced standard extremal sequence.

    The value does not depend on which balanced sequence is chosen; this is
    asserted by evaluating a second, differently paired sequence.
    """
    seq = balanced_sequence(alphas)
    value = convolve_all(seq).mass(0)
    alt = convolve_all(balanced_sequence(alphas, flip=True)).mass(0)
    assert alt == value, "balanced value must be pairing-independent"
    return value


def tse(alphas: AlphaSeq) -> tuple[Fraction, SESelection]:
    """Exact maximum of q_max over sign assignments of the nu measures.

    Indices whose cap has an integer inverse are pruned from the sign search
    (the reflection of a uniform distribution is one of its translates, and
    translating any summand does not change the concentration of the sum).
    Ties resolve to the lexicographically smallest sign vector; shifts are
    reported as 0 since the value is translation invariant.
    """
    base = [nu(a) for a in alphas]
    free = [i for i, a in enumerate(alphas) if (1 / a).denominator != 1]
    best: Fraction | None = None
    best_signs: tuple[int, ...] = ()
    for pattern in itertools.product((-1, 1), repeat=len(free)):
        signs = [1] * len(base)
        for i, s in zip(free, pattern):
            signs[i] = s
        value = q_max(convolve_all([negate(d) if s < 0 else d for d, s in zip(base, signs)]))
        if best is None or value > best:
            best = value
            best_signs = tuple(signs)
    assert best is not None
    return best, SESelection(best_signs, (0,) * len(base))


# -- windowed brute-force oracle ---------------------------------------------


def _window_sites(window: tuple[int, int]) -> list[int]:
    lo, hi = window
    if hi < lo:
        raise ValueError("empty window")
    return list(range(lo, hi + 1))


def extremal_enumerate(alpha, window: tuple[int, int]) -> list[IntDist]:
    """All extremal measures for alpha supported inside the window.

    The window must hold floor(1/alpha) sites, plus one more when the
    residual atom is present.
    """
    alpha = _validate_alpha(as_fraction(alpha))
    k = inverse_floor(alpha)
    residue = 1 - k * alpha
    sites = _window_sites(window)
    needed = k + (1 if residue > 0 else 0)
    if len(sites) < needed:
        raise ValueError(f"window holds {len(sites)} sites; {needed} needed for alpha={alpha}")
    out = []
    for support in itertools.combinations(sites, k):
        if residue == 0:
            out.append(IntDist((s, alpha) for s in support))
            continue
        for b in sites:
            if b not in support:
                out.append(IntDist([*((s, alpha) for s in support), (b, residue)]))
    return out


def t_oracle(alphas: AlphaSeq, window: tuple[int, int]) -> tuple[Fraction, list[IntDist]]:
    """Exact maximum of q_max over tuples of window-supported extremal
    measures, one per cap, with a witness tuple attaining it.

    Exact only relative to the window class; callers report the window along
    with the value.
    """
    choices = [extremal_enumerate(a, window) for a in alphas]
    best: Fraction | None = None
    witness: list[IntDist] = []
    for combo in itertools.product(*choices):
        value = q_max(convolve_all(list(combo)))
        if best is None or value > best:
            best = value
            witness = list(combo)
    assert best is not None
    return best, witness


def t_oracle_curve(alphas: AlphaSeq, windows: Sequence[tuple[int, int]]) -> list[dict]:
    """Windowed optimum across a family of windows.

    There is no finite-support reduction for the unrestricted supremum, so
    instead of claiming convergence the oracle reports how the value moves as
    the window grows; each row carries its window.
    """
    rows = []
    for window in windows:
        value, _ = t_oracle(alphas, window)
        rows.append({"window": list(window), "value": format_fraction(value)})
    return rows


def tse_report_json_obj(alphas: AlphaSeq) -> dict:
    """CLI-facing report: alphas, tse value and signs, tsebal when balanced."""
    value, sel = tse(alphas)
    balanced = is_balanced(alphas)
    return {
        "alphas": [format_fraction(a) for a in alphas],
        "tse": format_fraction(value),
        "signs": list(sel.signs),
        "tsebal": format_fraction(tsebal(alphas)) if balanced else None,
    }
