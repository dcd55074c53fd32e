"""Brute-force conjecture scanning and one exact checker per inequality
lemma.

Every checker takes a fully concrete instance, validates the lemma's stated
hypotheses exactly, and reports pass/fail with exact margins.  Hypotheses are
never weakened to force applicability: a failed precondition yields a
"not-applicable" report.  Inequalities involving irrational constants are
decided against directed-rounding rational enclosures; when the enclosure
straddles the comparison the outcome is "indeterminate", which never counts
as a failure but is tallied separately.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .dist import (
    IntDist,
    as_fraction,
    convolve,
    convolve_all,
    convolve_power,
    delta,
    format_fraction,
    is_log_concave,
    max_span,
    modes,
    negate,
    q_k,
    q_max,
    shift,
    uniform_interval,
    variance,
)
from .domination import dominates
from .extremal import (
    AlphaSeq,
    balanced_sequence,
    inverse_floor,
    is_balanced,
    is_strongly_balanced,
    nu,
    t_oracle,
    tse,
    tsebal,
    variance_nu,
)
from .rearrange import is_symmetric_unimodal, sym_rearrange
from .roots import Interval, power_interval

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"
INDETERMINATE = "indeterminate"


def canonical(obj):
    """Recursively convert an instance to JSON-able canonical form."""
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, IntDist):
        return obj.to_json_obj()
    if isinstance(obj, AlphaSeq):
        return [format_fraction(a) for a in obj]
    if isinstance(obj, (list, tuple)):
        return [canonical(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (int, str, bool)) or obj is None:
        return obj
    if isinstance(obj, float):
        return repr(obj)
    if hasattr(obj, "to_json_obj"):
        return obj.to_json_obj()
    raise TypeError(f"cannot canonicalize {type(obj)}")


def instance_digest(instance) -> str:
    blob = json.dumps(canonical(instance), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one lemma check on one concrete instance.

    Inequalities are normalized to the form lhs <= rhs, so margin = rhs - lhs
    is nonnegative exactly when the check passes.  For interval-decided
    checks, lhs and rhs hold the adverse enclosure endpoints actually
    compared.
    """

    name: str
    outcome: str
    lhs: Optional[Fraction]
    rhs: Optional[Fraction]
    margin: Optional[Fraction]
    preconditions_ok: bool
    instance_digest: str
    details: dict = field(default_factory=dict, compare=False)

    @property
    def holds(self) -> Optional[bool]:
        if self.outcome == PASS:
            return True
        if self.outcome == FAIL:
            return False
        return None

    def to_json_obj(self) -> dict:
        def fr(x):
            return None if x is None else format_fraction(x)

        return {
            "name": self.name,
            "outcome": self.outcome,
            "lhs": fr(self.lhs),
            "rhs": fr(self.rhs),
            "margin": fr(self.margin),
            "preconditions_ok": self.preconditions_ok,
            "instance_digest": self.instance_digest,
            "details": canonical(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def _na(name: str, instance, reason: str) -> CheckReport:
    return CheckReport(
        name, NOT_APPLICABLE, None, None, None, False, instance_digest(instance), {"reason": reason}
    )


def _exact(name: str, instance, lhs: Fraction, rhs: Fraction, details=None) -> CheckReport:
    margin = rhs - lhs
    outcome = PASS if margin >= 0 else FAIL
    return CheckReport(
        name, outcome, lhs, rhs, margin, True, instance_digest(instance), details or {}
    )


def _interval(name: str, instance, lhs: Interval, rhs: Interval, details=None) -> CheckReport:
    """Decide lhs <= rhs with enclosure endpoints; straddle is
    indeterminate."""
    details = dict(details or {})
    details["mode"] = "interval"
    if rhs.lo >= lhs.hi:
        outcome = PASS
    elif rhs.hi < lhs.lo:
        outcome = FAIL
    else:
        outcome = INDETERMINATE
    return CheckReport(
        name,
        outcome,
        lhs.hi,
        rhs.lo,
        rhs.lo - lhs.hi,
        True,
        instance_digest(instance),
        details,
    )


def summarize(reports: Sequence[CheckReport]) -> dict:
    """Counts per lemma name over the four outcomes."""
    out: dict[str, dict[str, int]] = {}
    for r in reports:
        bucket = out.setdefault(r.name, {PASS: 0, FAIL: 0, NOT_APPLICABLE: 0, INDETERMINATE: 0})
        bucket[r.outcome] += 1
    return out


# -- domination-style conclusions ----------------------------------------------


def _min_profile_slack(mu1: IntDist, mu2: IntDist, eps: Fraction) -> tuple[int, Fraction, Fraction]:
    """The j minimizing (1+eps)*Q_j(mu2) - Q_j(mu1), with both sides."""
    from .domination import q_profile

    p1 = q_profile(mu1).values
    p2 = q_profile(mu2).values
    one = Fraction(1)
    best = None
    for j in range(1, max(len(p1), len(p2)) + 1):
        lhs = p1[j - 1] if j <= len(p1) else one
        rhs = (1 + eps) * (p2[j - 1] if j <= len(p2) else one)
        if best is None or rhs - lhs < best[2] - best[1]:
            best = (j, lhs, rhs)
    assert best is not None
    return best


# -- the conjecture scan ---------------------------------------------------------


@dataclass(frozen=True)
class ScanConfig:
    """Configuration of a conjecture scan over quantized extremal tuples."""

    denominator: int
    window: tuple[int, int]
    n: int
    seed: int = 0
    budget: int = 200_000

    def __post_init__(self):
        if self.denominator < 2:
            raise ValueError("denominator must be >= 2")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.window[1] < self.window[0]:
            raise ValueError("empty window")
        if self.budget < 1:
            raise ValueError("budget must be positive")


@dataclass(frozen=True)
class ScanRecord:
    index: int
    alphas: tuple[Fraction, ...]
    lhs: Fraction
    rhs: Fraction
    violation: bool
    instance: tuple[IntDist, ...]

    def to_json_obj(self) -> dict:
        return {
            "index": self.index,
            "alphas": [format_fraction(a) for a in self.alphas],
            "lhs": format_fraction(self.lhs),
            "rhs": format_fraction(self.rhs),
            "margin": format_fraction(self.rhs - self.lhs),
            "violation": self.violation,
            "instance": [d.to_json_obj() for d in self.instance],
        }


def quantized_extremal_measures(denominator: int, window: tuple[int, int]) -> list[IntDist]:
    """Extremal measures with masses j/D and support in the window, one
    representative per translation class (minimum site at the window start).

    Point masses (cap 1) are excluded: convolving with one translates the sum
    without changing any concentration value, so they add nothing to a scan.
    """
    lo, hi = window
    width = hi - lo
    out = []
    for j in range(1, denominator):
        alpha = Fraction(j, denominator)
        k = inverse_floor(alpha)
        residue = 1 - k * alpha
        if k + (1 if residue > 0 else 0) > width + 1:
            continue
        offsets = range(width + 1)
        if residue == 0:
            for support in itertools.combinations(offsets, k):
                if support[0] == 0:
                    out.append(IntDist((lo + s, alpha) for s in support))
        else:
            for support in itertools.combinations(offsets, k):
                for b in offsets:
                    if b in support or min(support[0], b) != 0:
                        continue
                    out.append(IntDist([*((lo + s, alpha) for s in support), (lo + b, residue)]))
    return out


def conjecture_scan(cfg: ScanConfig, threads: int = 1) -> Iterator[ScanRecord]:
    """Compare q_max of extremal-tuple sums against the sign-search optimum.

    Exhaustive over unordered tuples when their count fits the budget,
    otherwise a deterministic seeded sample of budget tuples (`scan_mode`
    reports which).  Records stream in instance-index order regardless of the
    worker count.  Any violation is a counterexample candidate and must fail
    the build loudly.
    """
    measures = quantized_extremal_measures(cfg.denominator, cfg.window)
    if not measures:
        return
    total = _multiset_count(len(measures), cfg.n)
    tse_cache: dict[tuple[Fraction, ...], Fraction] = {}
    lock = threading.Lock()

    def record(item: tuple[int, tuple[IntDist, ...]]) -> ScanRecord:
        idx, combo = item
        alphas = tuple(sorted((q_max(m) for m in combo), reverse=True))
        with lock:
            cached = tse_cache.get(alphas)
        if cached is None:
            cached = tse(AlphaSeq(alphas))[0]
            with lock:
                tse_cache[alphas] = cached
        lhs = q_max(convolve_all(list(combo)))
        return ScanRecord(idx, alphas, lhs, cached, lhs > cached, combo)

    if total <= cfg.budget:
        items = enumerate(itertools.combinations_with_replacement(measures, cfg.n))
    else:
        rng = random.Random(cfg.seed)
        items = (
            (idx, tuple(rng.choice(measures) for _ in range(cfg.n))) for idx in range(cfg.budget)
        )
    if threads <= 1:
        for item in items:
            yield record(item)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(record, items)


def scan_mode(cfg: ScanConfig) -> str:
    measures = quantized_extremal_measures(cfg.denominator, cfg.window)
    total = _multiset_count(len(measures), cfg.n)
    return "exhaustive" if total <= cfg.budget else f"sampled({cfg.budget} of {total})"


def _multiset_count(m: int, n: int) -> int:
    from math import comb

    return comb(m + n - 1, n) if m > 0 else 0


# -- lemma checkers ---------------------------------------------------------------


def thm_tse_check(alphas: AlphaSeq, delta, window: tuple[int, int]) -> CheckReport:
    """Windowed optimum against (1 + delta) times the sign-search optimum."""
    delta = as_fraction(delta)
    instance = {"alphas": alphas, "delta": delta, "window": list(window)}
    if delta < 0:
        return _na("thm_tse", instance, "delta must be nonnegative")
    lhs = t_oracle(alphas, window)[0]
    rhs = (1 + delta) * tse(alphas)[0]
    return _exact("thm_tse", instance, lhs, rhs, {"window": list(window)})


def logconcmode_check(mu: IntDist, i: int, gamma) -> CheckReport:
    """Near-flatness at distance i from a mode of a log-concave distribution."""
    gamma = as_fraction(gamma)
    instance = {"mu": mu, "i": i, "gamma": gamma}
    if i < 1:
        return _na("logconcmode", instance, "i must be a positive integer")
    if not (0 <= gamma < 1):
        return _na("logconcmode", instance, "gamma outside [0, 1)")
    if not is_log_concave(mu):
        return _na("logconcmode", instance, "distribution not log-concave")
    p0 = q_max(mu)
    threshold = Fraction(2) * (gamma + 1) * i**3 * p0 / (1 - gamma) ** 3
    if variance(mu) < threshold:
        return _na("logconcmode", instance, "variance below the lemma threshold")
    worst = min(max(mu.mass(x0 - i), mu.mass(x0 + i)) for x0 in modes(mu))
    return _exact("logconcmode", instance, p0 * gamma, worst)


def logconcdomination_check(x: IntDist, y: IntDist, eps) -> CheckReport:
    """Adding a low-variance independent term barely dents the concentration."""
    eps = as_fraction(eps)
    instance = {"x": x, "y": y, "eps": eps}
    if eps <= 0:
        return _na("logconcdomination", instance, "eps must be positive")
    if not is_log_concave(x):
        return _na("logconcdomination", instance, "x not log-concave")
    if variance(y) > eps * variance(x):
        return _na("logconcdomination", instance, "Var y exceeds eps * Var x")
    factor = Interval.exact(1) - Interval.exact(3) * power_interval(2, 4, 9) * power_interval(
        eps, 1, 3
    )
    lhs = factor.scale(q_max(x))
    rhs = Interval.exact(q_max(convolve(x, y)))
    return _interval("logconcdomination", instance, lhs, rhs)


def few_dropped_check(alphas: AlphaSeq, k: int, big_k: int, delta, signs=None) -> CheckReport:
    """Dropping the first k high-cap terms costs at most a (1 - delta)
    factor, given enough total variance."""
    delta = as_fraction(delta)
    instance = {"alphas": alphas, "k": k, "K": big_k, "delta": delta, "signs": signs}
    n = len(alphas)
    if not (0 <= k <= n) or big_k < 1:
        return _na("few_dropped", instance, "bad k or K")
    if not (0 < delta < 1):
        return _na("few_dropped", instance, "delta outside (0, 1)")
    caps = list(alphas)
    if any(caps[i] < Fraction(1, big_k) for i in range(k)):
        return _na("few_dropped", instance, "a dropped cap is below 1/K")
    total_var = sum((variance_nu(a) for a in caps), Fraction(0))
    if total_var < Fraction(70) / delta**3 * k * big_k**2:
        return _na("few_dropped", instance, "variance below the lemma threshold")
    seq = _signed_sequence(caps, signs)
    rhs = q_max(convolve_all(seq))
    tail = seq[k:] if k < n else [delta_zero()]
    lhs = (1 - delta) * q_max(convolve_all(tail))
    return _exact("few_dropped", instance, lhs, rhs)


def delta_zero() -> IntDist:
    return delta(0)


def _signed_sequence(caps: Sequence[Fraction], signs) -> list[IntDist]:
    if signs is None:
        signs = [1] * len(caps)
    if len(signs) != len(caps):
        raise ValueError("signs length mismatch")
    return [negate(nu(a)) if s < 0 else nu(a) for a, s in zip(caps, signs)]


def balanced_continuous_check(alphas: AlphaSeq, alpha, alpha_prime) -> CheckReport:
    """Continuity of the balanced optimum in a duplicated high cap."""
    alpha = as_fraction(alpha)
    alpha_prime = as_fraction(alpha_prime)
    instance = {"alphas": alphas, "alpha": alpha, "alpha_prime": alpha_prime}
    if not (Fraction(1, 2) <= alpha <= 1 and Fraction(1, 2) <= alpha_prime <= 1):
        return _na("balanced_continuous", instance, "caps outside [1/2, 1]")
    if alpha_prime <= alpha:
        return _na("balanced_continuous", instance, "alpha_prime must exceed alpha")
    if not is_balanced(alphas):
        return _na("balanced_continuous", instance, "prefix sequence not balanced")
    eps = alpha_prime / alpha - 1
    lhs = tsebal(AlphaSeq([*alphas, alpha_prime, alpha_prime]))
    rhs = (1 + 8 * alpha * eps) * tsebal(AlphaSeq([*alphas, alpha, alpha]))
    return _exact("balanced_continuous", instance, lhs, rhs, {"eps": eps})


def _balanced_sum_with(extra: IntDist, alphas: AlphaSeq) -> Fraction:
    """Mass at 0 of (balanced standard extremal sum for alphas) + extra."""
    seq = balanced_sequence(alphas)
    return convolve_all([*seq, extra]).mass(0)


def midsize_continuity_check(
    big_k: int, alphas: AlphaSeq, alphas_prime: AlphaSeq, y: IntDist
) -> CheckReport:
    """Grid rounding of mid-sized caps moves the balanced optimum by at most
    a 39 K^(-1/6) fraction."""
    instance = {"K": big_k, "alphas": alphas, "alphas_prime": alphas_prime, "y": y}
    if big_k < 2:
        return _na("midsize_alpha_continuity", instance, "K must be >= 2")
    if len(alphas) != len(alphas_prime):
        return _na("midsize_alpha_continuity", instance, "length mismatch")
    if not (is_strongly_balanced(alphas) and is_strongly_balanced(alphas_prime)):
        return _na("midsize_alpha_continuity", instance, "sequences not strongly balanced")
    if not (is_symmetric_unimodal(y) and is_log_concave(y)):
        return _na("midsize_alpha_continuity", instance, "y not symmetric log-concave")
    grid = Fraction(1, big_k**2)
    for a, ap in zip(alphas, alphas_prime):
        t = a / grid
        if t.denominator != 1:
            return _na("midsize_alpha_continuity", instance, "a cap is off the 1/K^2 grid")
        if not (Fraction(1, big_k) <= ap <= a <= 1 - Fraction(1, big_k)):
            return _na("midsize_alpha_continuity", instance, "cap outside [1/K, 1 - 1/K]")
        if ap < a - grid:
            return _na("midsize_alpha_continuity", instance, "a cap moved more than one grid step")
    p = _balanced_sum_with(y, alphas)
    p_prime = _balanced_sum_with(y, alphas_prime)
    factor = Interval.exact(1) - Interval.exact(39) * power_interval(big_k, -1, 6)
    return _interval("midsize_alpha_continuity", instance, factor.scale(p), Interval.exact(p_prime))


def large_continuity_check(big_k: int, ks: Sequence[int], y: IntDist) -> CheckReport:
    """Replacing centered uniforms on k_i points by ones on k_i + 2 points
    costs at most a 14 K^(-1/5) fraction (and never gains)."""
    instance = {"K": big_k, "ks": list(ks), "y": y}
    if big_k < 1:
        return _na("balanced_continuity_large", instance, "K must be positive")
    if not ks:
        return _na("balanced_continuity_large", instance, "empty k list")
    if any(k < big_k or k % 2 == 0 for k in ks):
        return _na("balanced_continuity_large", instance, "each k must be an odd integer >= K")
    if not (is_symmetric_unimodal(y) and is_log_concave(y)):
        return _na("balanced_continuity_large", instance, "y not symmetric log-concave")
    xs = [uniform_interval(-(k - 1) // 2, (k - 1) // 2) for k in ks]
    xs_prime = [uniform_interval(-(k + 1) // 2, (k + 1) // 2) for k in ks]
    p = convolve_all([*xs, y]).mass(0)
    p_prime = convolve_all([*xs_prime, y]).mass(0)
    upper_ok = p >= p_prime
    factor = Interval.exact(1) - Interval.exact(14) * power_interval(big_k, -1, 5)
    report = _interval(
        "balanced_continuity_large",
        instance,
        factor.scale(p),
        Interval.exact(p_prime),
        {"upper_ok": upper_ok},
    )
    if report.outcome == PASS and not upper_ok:
        return CheckReport(
            report.name,
            FAIL,
            report.lhs,
            report.rhs,
            report.margin,
            True,
            report.instance_digest,
            {**report.details, "reason": "wider uniforms increased the mass at 0"},
        )
    return report


def peakedness1_check(x: IntDist, ys: Sequence[IntDist], z: IntDist, eps) -> CheckReport:
    """Swapping a dominated term and rearranging companions keeps the profile
    within a (1 + 4 eps) factor."""
    eps = as_fraction(eps)
    instance = {"x": x, "ys": list(ys), "z": z, "eps": eps}
    if not (0 < eps < 1):
        return _na("peakednessl1", instance, "eps outside (0, 1)")
    y_stars = []
    for i, yi in enumerate(ys):
        star = sym_rearrange(yi)
        if star is None:
            return _na("peakednessl1", instance, f"ys[{i}] has no symmetric rearrangement")
        if not is_log_concave(star):
            return _na("peakednessl1", instance, f"rearranged ys[{i}] not log-concave")
        y_stars.append(star)
    if not (is_symmetric_unimodal(z) and is_log_concave(z)):
        return _na("peakednessl1", instance, "z not symmetric log-concave")
    if not dominates(x, z, eps).holds:
        return _na("peakednessl1", instance, "x not eps-dominated by z")
    star_sum = convolve_all(y_stars) if y_stars else delta_zero()
    min_var = min(variance(z), variance(star_sum))
    threshold = Interval.exact(Fraction(65536)) * power_interval(2, 2, 3) * Interval.exact(
        1 / eps**4
    )
    if min_var < threshold.hi:
        return _na("peakednessl1", instance, "variance below the lemma threshold")
    left = convolve_all([x, *ys]) if ys else x
    right = convolve_all([z, *y_stars]) if y_stars else z
    j, lhs, rhs = _min_profile_slack(left, right, 4 * eps)
    return _exact("peakednessl1", instance, lhs, rhs, {"j": j})


def peakedness2_check(x: IntDist, y: IntDist, x_prime: IntDist, y_prime: IntDist, eps) -> CheckReport:
    """Replacing both summands by dominating symmetric log-concave ones keeps
    q_max within a (1 + 20 eps) factor."""
    eps = as_fraction(eps)
    instance = {"x": x, "y": y, "x_prime": x_prime, "y_prime": y_prime, "eps": eps}
    if not (0 < eps < Fraction(1, 2)):
        return _na("peakednessl2", instance, "eps outside (0, 1/2)")
    for label, d in (("x_prime", x_prime), ("y_prime", y_prime)):
        if not (is_symmetric_unimodal(d) and is_log_concave(d)):
            return _na("peakednessl2", instance, f"{label} not symmetric log-concave")
    if not dominates(x, x_prime, eps).holds:
        return _na("peakednessl2", instance, "x not eps-dominated by x_prime")
    if not dominates(y, y_prime, eps).holds:
        return _na("peakednessl2", instance, "y not eps-dominated by y_prime")
    v0 = Interval.exact(Fraction(320)) * power_interval(2, 1, 3) * Interval.exact(1 / eps**2)
    if variance(x_prime) < v0.hi or variance(y_prime) < v0.hi:
        return _na("peakednessl2", instance, "a variance is below the lemma threshold")
    lhs = q_max(convolve(x, y))
    rhs = (1 + 20 * eps) * q_max(convolve(x_prime, y_prime))
    return _exact("peakednessl2", instance, lhs, rhs)


def odlyzko_richmond_check(p: IntDist, n: int, delta) -> CheckReport:
    """Log-concavity of the central window of an n-fold convolution."""
    delta = as_fraction(delta)
    instance = {"p": p, "n": n, "delta": delta}
    if n < 1:
        return _na("odlyzko_richmond", instance, "n must be positive")
    if delta <= 0:
        return _na("odlyzko_richmond", instance, "delta must be positive")
    span = max_span(p)
    if span.is_infinite or span.value != 1:
        return _na("odlyzko_richmond", instance, "maximum span is not 1")
    base = shift(p, -p.sites[0])
    d = base.sites[-1]
    conv = convolve_power(base, n)
    k_lo_f = delta * n
    k_hi_f = (d - delta) * n
    k_lo = -((-k_lo_f.numerator) // k_lo_f.denominator)
    k_hi = k_hi_f.numerator // k_hi_f.denominator
    if k_hi < k_lo:
        return _na("odlyzko_richmond", instance, "empty window")
    worst = None
    for k in range(k_lo, k_hi + 1):
        lhs = conv.mass(k - 1) * conv.mass(k + 1)
        rhs = conv.mass(k) ** 2
        if worst is None or rhs - lhs < worst[2] - worst[1]:
            worst = (k, lhs, rhs)
    assert worst is not None
    k, lhs, rhs = worst
    return _exact("odlyzko_richmond", instance, lhs, rhs, {"k": k, "window": [k_lo, k_hi]})


# -- seeded instance generators -----------------------------------------------


def random_instance(seed: int, kind: str, **params):
    """Deterministic instance generator; identical (seed, kind, params) give
    identical instances.

    Kinds: log-concave, sharp-log-concave, symmetric-unimodal,
    symmetric-unimodal-chain, alpha-grid, alpha-grid-balanced, coupling-pair,
    integer-measure, split-admissible, distribution, integer-matrix.
    """
    rng = random.Random(f"{kind}#{seed}")
    gen = _GENERATORS.get(kind)
    if gen is None:
        raise ValueError(f"unknown instance kind {kind!r}")
    return gen(rng, **params)


def _gen_log_concave(rng: random.Random, max_len: int = 8, spread: int = 2, offset: int = 20):
    """Masses 2**l_i for a random concave integer sequence l: rejection-free
    log-concavity."""
    n = rng.randint(1, max_len)
    diffs = sorted((rng.randint(-spread, spread) for _ in range(n - 1)), reverse=True)
    levels = [0]
    for d in diffs:
        levels.append(levels[-1] + d)
    lo = min(levels)
    weights = [2 ** (l - lo) for l in levels]
    total = sum(weights)
    start = rng.randint(-offset, offset)
    return IntDist((start + i, Fraction(w, total)) for i, w in enumerate(weights))


def _gen_sharp_log_concave(rng: random.Random, max_len: int = 6, offset: int = 10):
    base = _gen_log_concave(rng, max_len=max_len, offset=0)
    site = rng.randint(-offset, offset)
    sites = []
    for _ in base.atoms:
        sites.append(site)
        site += rng.randint(1, 4)
    return IntDist((s, m) for s, (_, m) in zip(sites, base.atoms))


def _gen_symmetric_unimodal(rng: random.Random, max_radius: int = 4, max_weight: int = 6):
    radius = rng.randint(0, max_radius)
    levels = []
    current = rng.randint(1, max_weight)
    for _ in range(radius + 1):
        levels.append(current)
        current = rng.randint(1, current)
    total = levels[0] + 2 * sum(levels[1:])
    atoms = [(0, Fraction(levels[0], total))]
    for i in range(1, radius + 1):
        atoms.append((i, Fraction(levels[i], total)))
        atoms.append((-i, Fraction(levels[i], total)))
    return IntDist(atoms)


def _gen_symmetric_unimodal_chain(rng: random.Random, n: int = 3, **kw):
    """Pairs (mu_prime, mu), each symmetric unimodal with mu_prime exactly
    dominated: mu_prime = mu * (an independent symmetric unimodal spreader)."""
    pairs = []
    for _ in range(n):
        mu = _gen_symmetric_unimodal(rng, **kw)
        spreader = _gen_symmetric_unimodal(rng, **kw)
        pairs.append((convolve(mu, spreader), mu))
    return pairs


def _gen_alpha_grid(rng: random.Random, denominator: int = 6, n: int = 3):
    return AlphaSeq(Fraction(rng.randint(1, denominator), denominator) for _ in range(n))


def _gen_alpha_grid_balanced(rng: random.Random, denominator: int = 6, pairs: int = 2):
    values = [Fraction(rng.randint(1, denominator), denominator) for _ in range(pairs)]
    return AlphaSeq([v for v in values for _ in range(2)])


def _gen_distribution(rng: random.Random, max_len: int = 6, offset: int = 10, max_weight: int = 9):
    n = rng.randint(1, max_len)
    sites = rng.sample(range(-offset, offset + 1), n)
    weights = [rng.randint(1, max_weight) for _ in range(n)]
    total = sum(weights)
    return IntDist((s, Fraction(w, total)) for s, w in zip(sorted(sites), weights))


def _gen_coupling_pair(rng: random.Random, **kw):
    """(mu, mu_prime, eps) with mu_prime symmetric unimodal and eps the
    smallest rational slack making the profile domination hold (tight)."""
    mu = _gen_distribution(rng)
    mu_prime = _gen_symmetric_unimodal(rng, **kw)
    eps = Fraction(0)
    for j in range(1, max(len(mu), len(mu_prime)) + 1):
        ratio = q_k(mu, j) / q_k(mu_prime, j)
        eps = max(eps, ratio - 1)
    return mu, mu_prime, eps


def _gen_integer_measure(rng: random.Random, max_len: int = 6, offset: int = 8, max_weight: int = 5):
    from .rearrange import IntMeasure

    n = rng.randint(1, max_len)
    sites = rng.sample(range(-offset, offset + 1), n)
    return IntMeasure((s, Fraction(rng.randint(1, max_weight))) for s in sorted(sites))


def _gen_split_admissible(rng: random.Random, max_len: int = 6, offset: int = 10, max_weight: int = 9):
    """Random distribution with at least two atoms and largest atom <= 1/2."""
    while True:
        candidate = _gen_distribution(rng, max_len=max_len, offset=offset, max_weight=max_weight)
        if len(candidate) >= 2 and q_max(candidate) <= Fraction(1, 2):
            return candidate


def _gen_integer_matrix(rng: random.Random, max_rows: int = 4, max_cols: int = 3, entry: int = 9):
    import numpy as np

    while True:
        n = rng.randint(1, max_cols)
        m = rng.randint(n, max_rows)
        mat = [[rng.randint(-entry, entry) for _ in range(n)] for _ in range(m)]
        if np.linalg.matrix_rank(np.asarray(mat, dtype=float)) == n:
            return mat


_GENERATORS = {
    "log-concave": _gen_log_concave,
    "sharp-log-concave": _gen_sharp_log_concave,
    "symmetric-unimodal": _gen_symmetric_unimodal,
    "symmetric-unimodal-chain": _gen_symmetric_unimodal_chain,
    "alpha-grid": _gen_alpha_grid,
    "alpha-grid-balanced": _gen_alpha_grid_balanced,
    "coupling-pair": _gen_coupling_pair,
    "integer-measure": _gen_integer_measure,
    "split-admissible": _gen_split_admissible,
    "distribution": _gen_distribution,
    "integer-matrix": _gen_integer_matrix,
}
