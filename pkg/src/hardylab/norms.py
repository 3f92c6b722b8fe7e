"""Lp norms with propagated error bounds, plus numeric fallback operators.

The driver integrates products of powers of atom sums,

    const * x**c0 * prod_j (sum of atoms_j)(x) ** q_j,

which covers g**p for the norm itself as well as the two alternative
integral identities (integration by parts, Fubini) used as cross-checks.

Machinery, per piece of the partition:

  * compact interior segments use an adaptive Gauss7/Kronrod15 pair; the
    pair difference is the local error estimate and the global error is the
    sum of local estimates.
  * the ends 0 and infinity are handled in log coordinates (t = -ln x and
    t = ln x) where an endpoint-singular or slowly-decaying integrand turns
    into a smooth exponentially-decaying one.  The cutoff in t is chosen so
    the analytic remainder bound of the leading-atom envelope
    M * exp(-s*t) * t**q, an upper incomplete gamma value, drops below the
    local budget; half of the bound is added to the value and half to the
    error, which keeps the result inside [value - err, value + err].
  * divergence is decided up front by the leading-exponent tests: at zero
    a_min * p <= -1 diverges, on the unbounded piece a_max * p >= -1 does.

Raising an atom sum to a real power is always done pointwise inside the
quadrature; ln(x)**(k*p) has no closed antiderivative for non-integer k*p.
Integrand values are computed in log space throughout so that norms of
functions spanning hundreds of orders of magnitude neither overflow nor
silently lose their far-field mass.

All results are estimates validated by refinement, not certified enclosures.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import gammaincc

from .errors import (
    BadExponent,
    DivergentAtInfinity,
    DivergentAtZero,
    NormDiverges,
    NotConverged,
)
from .funcmodel import PiecewiseFn, PowerLogAtom
from .operators import cumulative_integral, dual_hardy, hardy

DEFAULT_TOL = 1e-9

#: Relative error floor: budgets below this fraction of the value are treated
#: as met, since double precision cannot resolve them anyway.
_REL_FLOOR = 1e-12

_LN_HUGE = 700.0
_E = math.e


@dataclass(frozen=True)
class QuadResult:
    """A numerical value with an absolute error bound.

    For converged results the true quantity lies in [value - err, value + err]
    up to the estimate quality of the Gauss/Kronrod pair; the bound is
    validated by refinement (recomputing at tol/10 stays within err), not
    certified by interval arithmetic.
    """

    value: float
    err: float
    converged: bool = True

    def __post_init__(self):
        if self.err < 0.0:
            raise ValueError("error bound must be nonnegative")


@dataclass(frozen=True)
class CallableFn:
    """A black-box function on (0, inf) with just enough side information.

    ``singular_points`` lists locations where the function or its derivative
    blows up; the exponent hints describe the asymptotic powers at 0 and
    infinity and drive integrability checks and tail estimates.
    """

    evaluator: Callable[[float], float]
    singular_points: tuple[float, ...] = ()
    tail_exponent_hint: float = 0.0
    zero_exponent_hint: float = 0.0

    def __call__(self, x: float) -> float:
        return self.evaluator(x)


# ---------------------------------------------------------------------------
# Gauss 7 / Kronrod 15 pair (nodes and weights on [-1, 1], QUADPACK values)

_GK15 = (
    # node                  Gauss weight            Kronrod weight
    (0.0000000000000000, 0.4179591836734694, 0.2094821410847278),
    (+0.2077849550078985, 0.0000000000000000, 0.2044329400752989),
    (-0.2077849550078985, 0.0000000000000000, 0.2044329400752989),
    (+0.4058451513773972, 0.3818300505051189, 0.1903505780647854),
    (-0.4058451513773972, 0.3818300505051189, 0.1903505780647854),
    (+0.5860872354676911, 0.0000000000000000, 0.1690047266392679),
    (-0.5860872354676911, 0.0000000000000000, 0.1690047266392679),
    (+0.7415311855993944, 0.2797053914892767, 0.1406532597155259),
    (-0.7415311855993944, 0.2797053914892767, 0.1406532597155259),
    (+0.8648644233597691, 0.0000000000000000, 0.1047900103222502),
    (-0.8648644233597691, 0.0000000000000000, 0.1047900103222502),
    (+0.9491079123427585, 0.1294849661688697, 0.0630920926299785),
    (-0.9491079123427585, 0.1294849661688697, 0.0630920926299785),
    (+0.9914553711208126, 0.0000000000000000, 0.0229353220105292),
    (-0.9914553711208126, 0.0000000000000000, 0.0229353220105292),
)


def _gk15(fn: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """Kronrod-15 value and |K15 - G7| error estimate on [a, b]."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    s_g = 0.0
    s_k = 0.0
    for xi, wg, wk in _GK15:
        fv = fn(mid + half * xi)
        if not math.isfinite(fv):
            raise NotConverged(f"non-finite integrand value near x={mid + half * xi}")
        s_g += wg * fv
        s_k += wk * fv
    return s_k * half, abs(s_k - s_g) * abs(half)


def _adaptive(fn, seeds: Sequence[tuple[float, float]], budget: float,
              max_intervals: int = 4096) -> tuple[float, float, bool]:
    """Adaptive bisection over the seed segments.

    Splits the worst segment until the summed error estimate meets the budget,
    the interval cap is reached, or further splitting is below the floating
    floor.  Returns (value, err, converged); the value is re-summed in
    left-to-right order so results do not depend on the split schedule.
    """
    heap = []
    count = 0
    value = err = 0.0
    for a, b in seeds:
        if b <= a:
            continue
        v, e = _gk15(fn, a, b)
        heap.append((-e, count, a, b, v))
        value += v
        err += e
        count += 1
    heapq.heapify(heap)
    while err > budget and err > _REL_FLOOR * abs(value) and len(heap) < max_intervals:
        neg_e, _, a, b, v = heapq.heappop(heap)
        if -neg_e <= 1e-16 * (abs(value) + 1e-300) or (b - a) <= 1e-15 * abs(a):
            # splitting is below double precision resolution
            heapq.heappush(heap, (neg_e, count, a, b, v))
            count += 1
            break
        value -= v
        err += neg_e
        mid = 0.5 * (a + b)
        for lo, hi in ((a, mid), (mid, b)):
            vv, ee = _gk15(fn, lo, hi)
            heapq.heappush(heap, (-ee, count, lo, hi, vv))
            value += vv
            err += ee
            count += 1
    # re-sum in spatial order: deterministic and free of heap-update drift
    segments = sorted(heap, key=lambda item: item[2])
    value = sum(item[4] for item in segments)
    err = sum(-item[0] for item in segments)
    converged = err <= budget or err <= _REL_FLOOR * abs(value)
    return value, err, converged


def _geom_seeds(a: float, b: float) -> list[tuple[float, float]]:
    """Seed segments for a compact interval, log-subdivided when it is wide."""
    if a <= 0.0 or b / a <= 16.0:
        return [(a, b)]
    n = min(24, max(2, int(math.ceil(math.log2(b / a)))))
    edges = np.geomspace(a, b, n + 1)
    return list(zip(edges[:-1], edges[1:]))


def _doubling_seeds(t0: float, t1: float) -> list[tuple[float, float]]:
    """Doubling-width seed segments, finest near t0 where the mass sits."""
    seeds = []
    left = t0
    width = 1.0
    while left < t1:
        right = min(left + width, t1)
        seeds.append((left, right))
        left = right
        width *= 2.0
    return seeds


# ---------------------------------------------------------------------------
# Product-of-powers integrand over one piece, evaluated in log space


@dataclass(frozen=True)
class _ProductIntegrand:
    """const * x**x_power * prod_j (atom-sum_j)(x)**power_j on one piece."""

    const: float
    x_power: float
    factors: tuple[tuple[tuple[PowerLogAtom, ...], float], ...]


def _pi_eval(pi: _ProductIntegrand, lx: float, extra: float) -> float:
    """Integrand at x = exp(lx), times exp(extra), computed via logs.

    Factors are expected to be nonnegative; a sum that rounds to <= 0 is
    treated as exactly 0.  Returns 0 on underflow and +inf past overflow so
    the quadrature can reject the segment.
    """
    log_h = math.log(pi.const) + pi.x_power * lx + extra
    for atoms, power in pi.factors:
        best = -math.inf
        mags = []
        signs = []
        for at in atoms:
            if at.log_power and lx == 0.0:
                continue
            m = math.log(abs(at.coef)) + at.exponent * lx
            if at.log_power:
                m += at.log_power * math.log(abs(lx))
            sign = 1.0 if at.coef > 0 else -1.0
            if lx < 0.0 and at.log_power % 2:
                sign = -sign
            mags.append(m)
            signs.append(sign)
            if m > best:
                best = m
        if best == -math.inf:
            return 0.0
        s = 0.0
        for m, sign in zip(mags, signs):
            s += sign * math.exp(m - best)
        if s <= 0.0:
            return 0.0
        log_h += power * (best + math.log(s))
    if log_h >= _LN_HUGE:
        return math.inf
    if log_h <= -745.0:
        return 0.0
    return math.exp(log_h)


def _envelope(pi: _ProductIntegrand, at_zero: bool) -> tuple[float, float, float]:
    """(log M, s, q) of the bound M * exp(-s*t) * t**q in log coordinates.

    Valid for t >= 1, i.e. x <= 1/e on the zero side and x >= e on the tail:
    each atom is dominated there by (sum |c|) * x**a_ext * |ln x|**k_max with
    a_ext the extreme exponent of its factor.
    """
    log_m = math.log(pi.const)
    expo = pi.x_power
    q = 0.0
    for atoms, power in pi.factors:
        exts = [a.exponent for a in atoms]
        a_ext = min(exts) if at_zero else max(exts)
        expo += power * a_ext
        q += power * max(a.log_power for a in atoms)
        log_m += power * math.log(sum(abs(a.coef) for a in atoms))
    s = (expo + 1.0) if at_zero else -(expo + 1.0)
    return log_m, s, q


def _log_gamma_tail(log_m: float, s: float, q: float, t: float) -> float:
    """log of M * integral of exp(-s*u) * u**q over (t, inf), s > 0, q >= 0."""
    quot = gammaincc(q + 1.0, s * t)
    if quot <= 0.0:
        return -math.inf
    return log_m - (q + 1.0) * math.log(s) + math.lgamma(q + 1.0) + math.log(quot)


def _choose_cutoff(log_m: float, s: float, q: float, t0: float,
                   target: float) -> float:
    log_target = math.log(target) if target > 0.0 else -745.0
    t = max(t0, 1.0)
    for _ in range(240):
        if _log_gamma_tail(log_m, s, q, t) <= log_target:
            return t
        t = t * 1.6 + 1.0
    raise NotConverged("remainder bound does not reach the error budget")


def _integrate_log_end(pi, t0, budget, max_intervals, at_zero):
    """Integrate the (0, e**-t0] or [e**t0, inf) end in log coordinates.

    A first pass runs to the cutoff dictated by the absolute budget; the
    cutoff is then pushed further until the analytic remainder is also small
    relative to the mass actually found, so tiny integrals (extremal families
    at small eps) are not polluted by an absolute-scale remainder term.
    """
    log_m, s, q = _envelope(pi, at_zero)
    if s <= 0.0:
        where = "zero" if at_zero else "infinity"
        raise NormDiverges(f"integral diverges at {where}")
    sign = -1.0 if at_zero else 1.0
    fn = lambda t: _pi_eval(pi, sign * t, sign * t)
    t_cut = _choose_cutoff(log_m, s, q, t0, 0.5 * budget)
    value = err = 0.0
    ok = True
    if t_cut > t0:
        value, err, ok = _adaptive(fn, _doubling_seeds(t0, t_cut),
                                   0.5 * budget, max_intervals)
    rem = math.exp(min(_log_gamma_tail(log_m, s, q, t_cut), _LN_HUGE))
    for _ in range(6):
        goal = max(0.1 * _REL_FLOOR * (abs(value) + rem), 1e-320)
        if rem <= goal:
            break
        t_new = _choose_cutoff(log_m, s, q, t_cut, goal)
        if t_new <= t_cut:
            break
        v, e, o = _adaptive(fn, _doubling_seeds(t_cut, t_new),
                            max(0.5 * rem, 1e-320), max_intervals)
        value += v
        err += e
        ok = ok and o
        t_cut = t_new
        rem = math.exp(min(_log_gamma_tail(log_m, s, q, t_cut), _LN_HUGE))
    return value + 0.5 * rem, err + 0.5 * rem, ok


def _integrate_piece(pi: _ProductIntegrand, lo: float, hi: float,
                     budget: float, max_intervals: int = 4096):
    """Integrate the product integrand over (lo, hi); returns (value, err, ok)."""
    if any(not atoms for atoms, _ in pi.factors):
        return 0.0, 0.0, True
    if lo == 0.0 and math.isinf(hi):
        v1, e1, ok1 = _integrate_piece(pi, 0.0, 1.0, 0.5 * budget, max_intervals)
        v2, e2, ok2 = _integrate_piece(pi, 1.0, math.inf, 0.5 * budget, max_intervals)
        return v1 + v2, e1 + e2, ok1 and ok2

    value = err = 0.0
    ok = True
    if lo == 0.0:
        x0 = min(hi, 1.0 / _E)
        share = 0.5 if x0 < hi else 1.0
        v, e, o = _integrate_log_end(pi, -math.log(x0), share * budget,
                                     max_intervals, at_zero=True)
        value += v
        err += e
        ok = ok and o
        lo = x0
        budget *= share
    x1 = hi
    tail_budget = 0.0
    if math.isinf(hi):
        x1 = max(lo, _E)
        tail_budget = 0.5 * budget if lo < x1 else budget
    if lo < x1:
        fn = lambda x: _pi_eval(pi, math.log(x), 0.0)
        v, e, o = _adaptive(fn, _geom_seeds(lo, x1), budget - tail_budget,
                            max_intervals)
        value += v
        err += e
        ok = ok and o
    if math.isinf(hi):
        v, e, o = _integrate_log_end(pi, math.log(x1), tail_budget,
                                     max_intervals, at_zero=False)
        value += v
        err += e
        ok = ok and o
    return value, err, ok


def _integrate_tasks(tasks, tol: float) -> tuple[float, float]:
    """Sum piece integrals, allocating the remaining budget evenly."""
    total_v = total_e = 0.0
    ok_all = True
    n = len(tasks)
    for idx, (pi, lo, hi) in enumerate(tasks):
        room = max(tol - total_e, tol * 1e-3)
        v, e, ok = _integrate_piece(pi, lo, hi, room / max(n - idx, 1))
        total_v += v
        total_e += e
        ok_all = ok_all and ok
    total_e += 1e-16 * abs(total_v)
    if not ok_all and total_e > max(tol, _REL_FLOOR * abs(total_v)):
        raise NotConverged(
            f"error budget {tol} not met (reached {total_e})",
            partial=QuadResult(total_v, total_e, False),
        )
    return total_v, total_e


# ---------------------------------------------------------------------------
# Public norm interface


def _leading_exponents(atoms) -> tuple[float, float]:
    exts = [a.exponent for a in atoms]
    return min(exts), max(exts)


def check_lp_defined(g: PiecewiseFn, p: float) -> None:
    """Leading-exponent integrability tests; raises NormDiverges on failure."""
    if g.pieces[0]:
        a_min, _ = _leading_exponents(g.pieces[0])
        if a_min * p <= -1.0:
            raise NormDiverges(
                f"norm diverges at zero: leading exponent {a_min} with p={p}"
            )
    if g.pieces[-1]:
        _, a_max = _leading_exponents(g.pieces[-1])
        if a_max * p >= -1.0:
            raise NormDiverges(
                f"norm diverges at infinity: leading exponent {a_max} with p={p}"
            )


def _norm_from_power(vp: float, ep: float, p: float) -> QuadResult:
    """Propagate the error on integral(g**p) to the norm itself.

    Uses the derivative bound |d v**(1/p)| <= v**(1/p-1)/p * err evaluated at
    the low end of the interval; when the interval reaches 0 the exact
    interval endpoints are used instead.
    """
    value = vp ** (1.0 / p)
    if vp - ep > 0.0:
        nerr = (vp - ep) ** (1.0 / p - 1.0) / p * ep
    else:
        nerr = max((vp + ep) ** (1.0 / p) - value, value)
    return QuadResult(value, nerr, True)


def lp_norm(g: PiecewiseFn, p: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """(integral of g**p over (0, inf))**(1/p) with an error bound.

    ``g`` must be nonnegative (use the operators' certified outputs or
    ``make_piecewise(require_nonneg=True)``); ``tol`` is an absolute budget
    on the p-th power of the norm, with a 1e-12 relative floor for values
    too large for double precision to do better.
    """
    if not p > 1.0:
        raise BadExponent(f"p must exceed 1, got {p}")
    check_lp_defined(g, p)
    tasks = [
        (_ProductIntegrand(1.0, 0.0, ((atoms, p),)),
         g.breakpoints[i], g.breakpoints[i + 1])
        for i, atoms in enumerate(g.pieces) if atoms
    ]
    if not tasks:
        return QuadResult(0.0, 0.0, True)
    vp, ep = _integrate_tasks(tasks, tol)
    return _norm_from_power(vp, ep, p)


def ip_via_parts(f: PiecewiseFn, p: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """integral of (Hf)**p computed by the integration-by-parts identity

        p' * integral of x**(1-p) * f(x) * (integral of f over (0,x))**(p-1)

    Must agree with lp_norm(hardy(f), p)**p; keeping the two routes separate
    is the point, so this one never calls the norm of Hf.
    """
    if not p > 1.0:
        raise BadExponent(f"p must exceed 1, got {p}")
    check_lp_defined(hardy(f), p)
    big_f = cumulative_integral(f)
    p_conj = p / (p - 1.0)
    tasks = []
    for i, atoms in enumerate(f.pieces):
        if atoms and big_f.pieces[i]:
            pi = _ProductIntegrand(p_conj, 1.0 - p,
                                   ((atoms, 1.0), (big_f.pieces[i], p - 1.0)))
            tasks.append((pi, f.breakpoints[i], f.breakpoints[i + 1]))
    if not tasks:
        return QuadResult(0.0, 0.0, True)
    v, e = _integrate_tasks(tasks, tol)
    return QuadResult(v, e, True)


def ipstar_via_fubini(f: PiecewiseFn, p: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """integral of (H*f)**p computed by the Fubini identity

        p * integral of f(x) * (integral of f(u)/u over (x, inf))**(p-1)

    Must agree with lp_norm(dual_hardy(f), p)**p.
    """
    if not p > 1.0:
        raise BadExponent(f"p must exceed 1, got {p}")
    hstar = dual_hardy(f)
    check_lp_defined(hstar, p)
    tasks = []
    for i, atoms in enumerate(f.pieces):
        if atoms and hstar.pieces[i]:
            pi = _ProductIntegrand(p, 0.0,
                                   ((atoms, 1.0), (hstar.pieces[i], p - 1.0)))
            tasks.append((pi, f.breakpoints[i], f.breakpoints[i + 1]))
    if not tasks:
        return QuadResult(0.0, 0.0, True)
    v, e = _integrate_tasks(tasks, tol)
    return QuadResult(v, e, True)


# ---------------------------------------------------------------------------
# Numeric oracle path for black-box functions


def _plain_quad(fn, a, b, budget):
    v, e, _ = _adaptive(fn, _geom_seeds(a, b) if a > 0 else [(a, b)], budget)
    return v, e


def _quad_with_singularities(fn, a, b, singular, budget):
    """Adaptive quadrature on [a, b], geometric refinement toward singular points.

    Oracle-grade: band recursion stops on a relative plateau, and the last
    band is carried as the sliver estimate.
    """
    inner = sorted(s for s in singular if a < s < b)
    edges = [a, *inner, b]
    sing = set(singular)
    total_v = total_e = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        sub_budget = budget / (len(edges) - 1)
        l_sing = lo in sing
        r_sing = hi in sing
        if l_sing and r_sing:
            mid = 0.5 * (lo + hi)
            for seg, toward_left in (((lo, mid), True), ((mid, hi), False)):
                v, e = _banded_quad(fn, *seg, toward_left, 0.5 * sub_budget)
                total_v += v
                total_e += e
        elif l_sing or r_sing:
            v, e = _banded_quad(fn, lo, hi, l_sing, sub_budget)
            total_v += v
            total_e += e
        else:
            v, e = _plain_quad(fn, lo, hi, sub_budget)
            total_v += v
            total_e += e
    return total_v, total_e


def _banded_quad(fn, lo, hi, toward_left, budget, ratio=0.25, max_bands=400):
    """Geometric bands shrinking toward one (integrable-)singular endpoint.

    Bands never collapse below the ulp of the endpoint, so the singular
    point itself is never evaluated.
    """
    total_v = total_e = 0.0
    width = hi - lo
    ulp = max(4e-16 * max(abs(lo), abs(hi)), 1e-280)
    last_band = 0.0
    for k in range(max_bands):
        w_out, w_in = width * ratio ** k, width * ratio ** (k + 1)
        if w_out <= ulp:
            break
        if toward_left:
            a, b = lo + w_in, lo + w_out
        else:
            a, b = hi - w_out, hi - w_in
        v, e = _plain_quad(fn, a, b, budget * 0.1)
        total_v += v
        total_e += e
        last_band = abs(v)
        if k >= 4 and last_band <= max(1e-16 * abs(total_v), 1e-300):
            break
    total_e += 2.0 * last_band  # sliver estimate for the uncovered band
    return total_v, total_e


def numeric_hardy(f: CallableFn, grid) -> CallableFn:
    """Tabulated average of a black-box nonnegative function.

    The cumulative integral is accumulated node to node with singular-aware
    quadrature, interpolated by a monotone cubic (cumulative integrals of
    nonnegative integrands are monotone, and shape beats raw accuracy here),
    and divided by x.  Below the grid the hinted power is used; beyond it the
    cumulative is frozen, which is exact for compactly supported inputs.
    """
    if f.zero_exponent_hint <= -1.0:
        raise DivergentAtZero(
            f"hinted exponent {f.zero_exponent_hint} at 0 is not integrable"
        )
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or len(g) < 2 or g[0] <= 0.0 or np.any(np.diff(g) <= 0.0):
        raise ValueError("grid must be an increasing sequence of positive reals")
    cum = np.zeros(len(g))
    v0, _ = _banded_quad(f.evaluator, 0.0, g[0], True, 1e-12)
    cum[0] = v0
    for i in range(1, len(g)):
        v, _ = _quad_with_singularities(f.evaluator, g[i - 1], g[i],
                                        f.singular_points, 1e-12)
        cum[i] = cum[i - 1] + v
    interp = PchipInterpolator(g, cum)
    g0, g_last = float(g[0]), float(g[-1])
    cum0, cum_last = float(cum[0]), float(cum[-1])
    zh = f.zero_exponent_hint

    def ev(x: float) -> float:
        if x <= 0.0:
            raise ValueError("average is defined for x > 0 only")
        if x < g0:
            return cum0 * (x / g0) ** (zh + 1.0) / x
        if x <= g_last:
            return float(interp(x)) / x
        return cum_last / x

    return CallableFn(ev, (), tail_exponent_hint=-1.0, zero_exponent_hint=zh)


def numeric_dual_hardy(f: CallableFn, grid) -> CallableFn:
    """Tabulated dual average: backward cumulative of f(t)/t, interpolated.

    The tail beyond the last node is accumulated by doubling segments with a
    hint-based remainder estimate; a nonnegative hint is accepted only when
    the function actually vanishes out there (compact support).
    """
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or len(g) < 2 or g[0] <= 0.0 or np.any(np.diff(g) <= 0.0):
        raise ValueError("grid must be an increasing sequence of positive reals")
    g_last = float(g[-1])
    if f.tail_exponent_hint >= 0.0:
        if any(f.evaluator(g_last * m) > 0.0 for m in (2.0, 10.0, 100.0)):
            raise DivergentAtInfinity(
                f"hinted tail exponent {f.tail_exponent_hint} is not integrable"
            )
    over_t = lambda t: f.evaluator(t) / t
    tail = 0.0
    x = g_last
    for _ in range(200):
        v, _ = _quad_with_singularities(over_t, x, 2.0 * x, f.singular_points, 1e-12)
        tail += v
        x *= 2.0
        fx = abs(f.evaluator(x))
        rem = fx / max(-f.tail_exponent_hint, 0.5)
        if rem <= 1e-14 * max(tail, 1.0) or (fx == 0.0 and v == 0.0):
            break
    vals = np.zeros(len(g))
    vals[-1] = tail
    for i in range(len(g) - 2, -1, -1):
        v, _ = _quad_with_singularities(over_t, g[i], g[i + 1],
                                        f.singular_points, 1e-12)
        vals[i] = vals[i + 1] + v
    interp = PchipInterpolator(g, vals)
    g0 = float(g[0])
    s0, s_last = float(vals[0]), float(vals[-1])
    th = min(f.tail_exponent_hint, 0.0)

    def ev(x: float) -> float:
        if x <= 0.0:
            raise ValueError("dual average is defined for x > 0 only")
        if x < g0:
            return s0
        if x <= g_last:
            return float(interp(x))
        return s_last * (x / g_last) ** th

    return CallableFn(ev, (), tail_exponent_hint=th,
                      zero_exponent_hint=0.0)


def lp_norm_callable(f: CallableFn, p: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """Oracle-grade Lp norm of a black-box nonnegative function.

    Integrability at the ends is decided from the exponent hints; error
    estimates come from the quadrature pair and hint-based tail remainders,
    so this is a cross-check tool, not a bound certificate.
    """
    if not p > 1.0:
        raise BadExponent(f"p must exceed 1, got {p}")
    if f.zero_exponent_hint * p <= -1.0:
        raise NormDiverges("norm diverges at zero by the hinted exponent")
    gp = lambda x: max(f.evaluator(x), 0.0) ** p
    positive_sing = [s for s in f.singular_points if s > 0.0]
    anchor = min(1.0, *(s / 2.0 for s in positive_sing)) if positive_sing else 1.0
    value, err = _banded_quad(gp, 0.0, anchor, True, tol / 4.0)
    far = max(1.0, *(2.0 * s for s in positive_sing)) if positive_sing else 1.0
    if far > anchor:
        v, e = _quad_with_singularities(gp, anchor, far, f.singular_points, tol / 4.0)
        value += v
        err += e
    x = far
    tp = f.tail_exponent_hint * p
    for _ in range(200):
        v, e = _plain_quad(gp, x, 2.0 * x, tol / 8.0)
        value += v
        err += e
        x *= 2.0
        gx = gp(x)
        rem = gx * x / max(-tp - 1.0, 0.1)
        if tp < -1.0 and rem <= tol / 4.0:
            err += rem
            break
        if gx == 0.0 and v == 0.0:
            break
    else:
        raise NormDiverges("tail mass does not settle; hinted exponent too slow")
    return _norm_from_power(value, err, p)
