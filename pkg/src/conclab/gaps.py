"""Symmetric generalized arithmetic progressions, two-point decompositions,
integer lattice bases, and exact Rademacher-sum concentration.

GAP membership and properness are decided by bounded enumeration over the
coefficient box rather than by lattice algebra: the use cases only involve
small constant-volume GAPs, and an explicit budget keeps every operation
total.  Budget overflow raises; it is never silently approximated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Optional, Sequence

from .dist import IntDist, as_fraction, convolve_all, format_fraction, q_max

DEFAULT_ENUM_BUDGET = 10**6


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class SymGAP:
    """Symmetric generalized arithmetic progression.

    The underlying set is {sum_i j_i * g_i : |j_i| <= M_i, j_i integer}.
    Generators are either rational scalars or integer vectors sharing one
    dimension; dims are positive integers so the volume prod(2*M_i + 1) is
    exact.
    """

    dims: tuple[int, ...]
    generators: tuple

    def __post_init__(self):
        if len(self.dims) != len(self.generators):
            raise ValueError("dims and generators must have equal length")
        if any(int(m) <= 0 for m in self.dims):
            raise ValueError("dims must be positive integers")
        kinds = {self._kind_of(g) for g in self.generators}
        if len(kinds) > 1:
            raise ValueError("generators must all be scalars or all vectors of one dimension")

    @staticmethod
    def _kind_of(g):
        if isinstance(g, tuple):
            return ("vec", len(g))
        return ("scalar",)

    @property
    def rank(self) -> int:
        return len(self.dims)

    @property
    def kind(self):
        return self._kind_of(self.generators[0]) if self.generators else None

    def volume(self) -> int:
        v = 1
        for m in self.dims:
            v *= 2 * m + 1
        return v

    def _zero(self):
        if self.kind is not None and self.kind[0] == "vec":
            return (0,) * self.kind[1]
        return Fraction(0)

    def elements(self, budget: int = DEFAULT_ENUM_BUDGET) -> set:
        """The underlying set, by exhaustive enumeration of the coefficient
        box."""
        if self.volume() > budget:
            raise ValueError(f"volume {self.volume()} exceeds enumeration budget {budget}")
        if self.rank == 0:
            return {self._zero()}
        out = set()
        ranges = [range(-m, m + 1) for m in self.dims]
        vector = self.kind[0] == "vec"
        for js in itertools.product(*ranges):
            if vector:
                d = self.kind[1]
                out.add(tuple(sum(j * g[i] for j, g in zip(js, self.generators)) for i in range(d)))
            else:
                out.add(sum((j * as_fraction(g) for j, g in zip(js, self.generators)), Fraction(0)))
        return out

    def to_json_obj(self) -> dict:
        gens = [list(g) if isinstance(g, tuple) else format_fraction(as_fraction(g)) for g in self.generators]
        return {"rank": self.rank, "dims": list(self.dims), "generators": gens}

    @staticmethod
    def from_json_obj(obj: dict) -> "SymGAP":
        gens = []
        for g in obj["generators"]:
            gens.append(tuple(int(v) for v in g) if isinstance(g, list) else Fraction(str(g)))
        return SymGAP(tuple(int(m) for m in obj["dims"]), tuple(gens))


def gap_dilate(a: SymGAP, t: int) -> SymGAP:
    """Scale all dims by the positive integer t; generators unchanged."""
    if t < 1:
        raise ValueError("dilation factor must be a positive integer")
    return SymGAP(tuple(m * t for m in a.dims), a.generators)


def gap_sumset(a: SymGAP, b: SymGAP) -> SymGAP:
    """Concatenate generators and dims; represents the elementwise sumset."""
    if a.generators and b.generators and a.kind != b.kind:
        raise ValueError("incompatible generator kinds")
    return SymGAP(a.dims + b.dims, a.generators + b.generators)


def gap_volume(a: SymGAP) -> int:
    return a.volume()


def gap_is_proper(a: SymGAP, budget: int = DEFAULT_ENUM_BUDGET) -> bool:
    """All coefficient combinations give distinct elements."""
    return len(a.elements(budget)) == a.volume()


def gap_contains(a: SymGAP, x, budget: int = DEFAULT_ENUM_BUDGET) -> bool:
    if isinstance(x, (list, tuple)):
        x = tuple(int(v) for v in x)
    else:
        x = as_fraction(x)
    return x in a.elements(budget)


def gap_cover(a: SymGAP, dists: Sequence[IntDist], budget: int = DEFAULT_ENUM_BUDGET) -> Fraction:
    """Fraction of distributions whose whole support lies inside the GAP."""
    if not dists:
        raise ValueError("empty distribution list")
    elems = a.elements(budget)
    covered = sum(1 for d in dists if all(Fraction(s) in elems for s in d.sites))
    return Fraction(covered, len(dists))


def gap_fit_rank1(values: Sequence[int], eps=0) -> Optional[SymGAP]:
    """Smallest-volume rank-1 symmetric GAP covering at least a (1 - eps)
    fraction of the values (with multiplicity).

    Candidate steps are the divisors of the nonzero values: a symmetric
    rank-1 GAP with step g contains exactly the multiples of g up to M*g, so
    only divisors can cover anything.  Ties resolve to the smallest step.
    When the needed quorum consists of zeros alone the rank-0 GAP {0} is
    returned.
    """
    values = [int(v) for v in values]
    if not values:
        return None
    eps = as_fraction(eps)
    if not (0 <= eps <= 1):
        raise ValueError("eps must be in [0, 1]")
    need_frac = (1 - eps) * len(values)
    need = _ceil_div(need_frac.numerator, need_frac.denominator)
    if need <= 0:
        need = 1

    candidates: set[int] = {1}
    for v in values:
        v = abs(v)
        if v == 0:
            continue
        for d in range(1, isqrt(v) + 1):
            if v % d == 0:
                candidates.update((d, v // d))

    best: Optional[tuple[int, int, int]] = None  # (volume, g, M)
    for g in sorted(candidates):
        scaled = sorted(abs(v) // g for v in values if v % g == 0)
        if len(scaled) < need:
            continue
        m = scaled[need - 1]
        vol = 2 * m + 1
        if best is None or (vol, g) < (best[0], best[1]):
            best = (vol, g, m)
    if best is None:
        return None
    _, g, m = best
    if m == 0:
        return SymGAP((), ())
    return SymGAP((m,), (Fraction(g),))


# -- connected two-point decomposition ---------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """Weighted two-point uniform parts reconstructing a distribution, whose
    edge multiset forms a connected graph on the support."""

    parts: tuple[tuple[Fraction, tuple[int, int]], ...]

    @property
    def graph_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(pair for _, pair in self.parts)

    def reconstruct(self) -> IntDist:
        masses: dict[int, Fraction] = {}
        for w, (a, b) in self.parts:
            masses[a] = masses.get(a, Fraction(0)) + w / 2
            masses[b] = masses.get(b, Fraction(0)) + w / 2
        return IntDist(masses.items())

    def is_connected(self) -> bool:
        vertices = {v for _, pair in self.parts for v in pair}
        if not vertices:
            return False
        adjacency: dict[int, set[int]] = {v: set() for v in vertices}
        for _, (a, b) in self.parts:
            adjacency[a].add(b)
            adjacency[b].add(a)
        seen = set()
        stack = [next(iter(vertices))]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adjacency[v] - seen)
        return seen == vertices

    def to_json_obj(self) -> dict:
        return {"parts": [[format_fraction(w), list(pair)] for w, pair in self.parts]}


def _components(vertices: set[int], edges: Sequence[tuple[int, int]]) -> list[set[int]]:
    adjacency: dict[int, set[int]] = {v: set() for v in vertices}
    for a, b in edges:
        adjacency[a].add(b)
        adjacency[b].add(a)
    out = []
    seen: set[int] = set()
    for start in sorted(vertices):
        if start in seen:
            continue
        comp = set()
        stack = [start]
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend(adjacency[v] - comp)
        seen |= comp
        out.append(comp)
    return out


def connected_decomposition(mu: IntDist) -> Decomposition:
    """Decompose into weighted two-point uniforms with a connected edge graph.

    Requires at least two atoms and largest atom at most 1/2.  The common
    denominator is doubled first when odd, so the unit count is always even.
    Mass units are listed left to right and unit i is paired with unit
    i + N/2; equal pairs are collected, and when the resulting graph is
    disconnected one 1/N unit of weight per component is rerouted along a
    cycle through all components (smallest vertex orders the components, the
    lexicographically smallest edge represents each).
    """
    if len(mu) < 2:
        raise ValueError("need at least two atoms")
    if q_max(mu) > Fraction(1, 2):
        raise ValueError("largest atom exceeds 1/2")
    n = mu.denominator()
    if n % 2 == 1:
        n *= 2
    unit_sites: list[int] = []
    for site, mass in mu.atoms:
        unit_sites.extend([site] * int(mass * n))
    half = n // 2
    pair_counts: dict[tuple[int, int], int] = {}
    for i in range(half):
        a, b = unit_sites[i], unit_sites[i + half]
        assert a != b, "largest atom at most 1/2 forbids equal pairs"
        key = (a, b) if a < b else (b, a)
        pair_counts[key] = pair_counts.get(key, 0) + 1

    weights: dict[tuple[int, int], Fraction] = {
        pair: Fraction(2 * count, n) for pair, count in pair_counts.items()
    }
    support = {s for s, _ in mu.atoms}
    comps = _components(support, list(weights))
    if len(comps) > 1:
        reps = []
        for comp in comps:
            edges_in = sorted(pair for pair in weights if pair[0] in comp)
            reps.append(edges_in[0])
        t = len(reps)
        for l in range(t):
            weights[reps[l]] -= Fraction(1, n)
            y = reps[l][0]
            z = reps[(l + 1) % t][1]
            key = (y, z) if y < z else (z, y)
            weights[key] = weights.get(key, Fraction(0)) + Fraction(1, n)

    parts = tuple(sorted((w, pair) for pair, w in weights.items() if w > 0))
    return Decomposition(tuple((w, pair) for w, pair in parts))


# -- integer span bases -------------------------------------------------------


@dataclass(frozen=True)
class LatticeBasis:
    """Hermite-style basis of the integer span of a vector set.

    matrix rows are ambient coordinates; columns are the basis vectors, so
    matrix @ coords(x) == x for every input vector.  coord_bound_ok reports
    whether every coordinate vector satisfies the Korkin-Zolotarev-style
    length bound d**(d-1) * R**(2d-1); the bound is asserted softly because
    this basis is Hermite-reduced, not KZ-reduced.
    """

    matrix: tuple[tuple[int, ...], ...]
    coords: dict
    rank: int
    coord_bound_sq: int
    coord_bound_ok: bool

    def apply(self, coord: tuple[int, ...]) -> tuple[int, ...]:
        d = len(self.matrix)
        return tuple(sum(self.matrix[i][j] * coord[j] for j in range(self.rank)) for i in range(d))


def _row_hermite(rows: list[list[int]]) -> list[list[int]]:
    """Integer row reduction to a Hermite-style echelon basis of the row
    lattice."""
    mat = [row[:] for row in rows if any(row)]
    if not mat:
        return []
    ncols = len(mat[0])
    top = 0
    for col in range(ncols):
        live = [i for i in range(top, len(mat)) if mat[i][col] != 0]
        if not live:
            continue
        while True:
            live = [i for i in range(top, len(mat)) if mat[i][col] != 0]
            if len(live) <= 1:
                break
            live.sort(key=lambda i: abs(mat[i][col]))
            pivot = live[0]
            for i in live[1:]:
                q = mat[i][col] // mat[pivot][col]
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[pivot])]
        live = [i for i in range(top, len(mat)) if mat[i][col] != 0]
        if not live:
            continue
        pivot = live[0]
        mat[top], mat[pivot] = mat[pivot], mat[top]
        if mat[top][col] < 0:
            mat[top] = [-a for a in mat[top]]
        for i in range(top):
            q = mat[i][col] // mat[top][col]
            if q:
                mat[i] = [a - q * b for a, b in zip(mat[i], mat[top])]
        top += 1
    return [row for row in mat[:top] if any(row)]


def integer_span_basis(vectors: Sequence[Sequence[int]]) -> LatticeBasis:
    """Basis of the lattice generated by the input vectors, with exact
    coordinates.

    The input must contain the zero vector (the natural base point).  The
    basis is obtained by integer row reduction; coordinates are recovered by
    exact back-substitution, and matrix @ coords(x) == x is checked for every
    input vector.
    """
    vecs = [tuple(int(v) for v in x) for x in vectors]
    if not vecs:
        raise ValueError("empty vector set")
    d = len(vecs[0])
    if any(len(v) != d for v in vecs):
        raise ValueError("vectors must share one dimension")
    if tuple([0] * d) not in vecs:
        raise ValueError("vector set must contain the zero vector")

    basis_rows = _row_hermite([list(v) for v in vecs])
    rank = len(basis_rows)
    pivots = []
    for row in basis_rows:
        pivots.append(next(j for j, a in enumerate(row) if a != 0))

    def solve(x: tuple[int, ...]) -> tuple[int, ...]:
        residue = list(x)
        out = []
        for row, p in zip(basis_rows, pivots):
            if residue[p] % row[p] != 0:
                raise ValueError(f"{x} is not in the generated lattice")
            c = residue[p] // row[p]
            residue = [a - c * b for a, b in zip(residue, row)]
            out.append(c)
        if any(residue):
            raise ValueError(f"{x} is not in the generated lattice")
        return tuple(out)

    coords = {v: solve(v) for v in vecs}
    matrix = tuple(tuple(basis_rows[j][i] for j in range(rank)) for i in range(d))

    r_sq = max(sum(a * a for a in v) for v in vecs)
    bound_sq = (d ** (2 * (d - 1))) * (r_sq ** (2 * d - 1)) if r_sq > 0 else 0
    ok = all(sum(c * c for c in coord) <= bound_sq for coord in coords.values())
    basis = LatticeBasis(matrix, coords, rank, bound_sq, ok)
    for v, c in coords.items():
        assert basis.apply(c) == v
    return basis


@dataclass(frozen=True)
class VecSpanResult:
    """Span data for a multivariate support: infinite for a point mass,
    otherwise the basis of the lattice generated by the support
    differences."""

    infinite: bool
    basis: Optional[LatticeBasis]


def max_span_vec(mu) -> VecSpanResult:
    """Vector analogue of the maximum span.

    mu is any object exposing vector atoms (site tuples); differences are
    taken from the lexicographically smallest support point.
    """
    sites = sorted(tuple(int(v) for v in s) for s, _ in mu.atoms)
    if len(sites) == 1:
        return VecSpanResult(True, None)
    base = sites[0]
    diffs = [tuple(a - b for a, b in zip(s, base)) for s in sites]
    return VecSpanResult(False, integer_span_basis(diffs))


# -- Rademacher sums ----------------------------------------------------------


def rademacher_q(multipliers: Sequence[int]) -> Fraction:
    """Exact largest atom of sum(v_i * xi_i) for independent signs xi_i.

    Computed by convolving the two-point laws; the classical central-binomial
    bound C(n, floor(n/2)) / 2**n is asserted on the result.
    """
    vs = [int(v) for v in multipliers]
    if not vs:
        raise ValueError("empty multiplier list")
    if any(v == 0 for v in vs):
        raise ValueError("multipliers must be nonzero")
    half = Fraction(1, 2)
    dists = [IntDist([(-abs(v), half), (abs(v), half)]) for v in vs]
    value = q_max(convolve_all(dists))
    n = len(vs)
    assert value <= Fraction(comb(n, n // 2), 2**n)
    return value
