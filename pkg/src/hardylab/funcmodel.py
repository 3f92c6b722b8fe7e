"""Piecewise power-log function algebra on the positive half-line.

A function is a partition 0 = b_0 < b_1 < ... < b_n = inf together with one
atom list per piece; on the half-open piece (b_i, b_{i+1}] its value is
sum(c * x**a * ln(x)**k) over the atoms.  An empty list is the zero function
on that piece.  The class contains characteristic functions, powers, and the
logarithms produced by averaging steps, and it is closed under
differentiation, antidifferentiation, and the averaging operators built on
top (see operators).

Conventions:
  * pieces are half-open (lo, hi]; at a breakpoint the piece ending there
    wins.  The choice only matters on a measure-zero set.
  * infinity is always the last breakpoint and is handled by explicit
    ``math.isinf`` branches, never by evaluating atoms at it.
  * values are immutable after construction and every operation is pure.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import LogPowerCapExceeded, MalformedPartition, NegativityDetected

#: Hard cap on ln-powers; each averaging step raises k by at most one, so the
#: cap bounds coefficient growth in the integration-by-parts recurrence.
LOG_POWER_CAP = 8

#: Atom coefficients below this magnitude are dropped during term collection.
COEF_FLOOR = 1e-300

#: Default tolerance for sampled sign and monotonicity checks.
TOL_EVAL = 1e-9

_SAMPLES_PER_PIECE = 256


@dataclass(frozen=True)
class PowerLogAtom:
    """One term c * x**a * ln(x)**k with integer k >= 0."""

    coef: float
    exponent: float
    log_power: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.coef) and math.isfinite(self.exponent)):
            raise ValueError("atom coefficient and exponent must be finite")
        k = self.log_power
        if k != int(k) or k < 0:
            raise ValueError("log_power must be a nonnegative integer")
        if k > LOG_POWER_CAP:
            raise LogPowerCapExceeded(
                f"log power {k} exceeds the supported cap {LOG_POWER_CAP}"
            )
        object.__setattr__(self, "coef", float(self.coef))
        object.__setattr__(self, "exponent", float(self.exponent))
        object.__setattr__(self, "log_power", int(k))

    def value_at(self, x: float) -> float:
        try:
            v = self.coef * x ** self.exponent
        except OverflowError:
            return math.copysign(math.inf, self.coef)
        if self.log_power:
            v *= math.log(x) ** self.log_power
        return v


def as_atom(obj) -> PowerLogAtom:
    """Coerce an atom given as PowerLogAtom, (c, a, k) tuple, or mapping."""
    if isinstance(obj, PowerLogAtom):
        return obj
    if isinstance(obj, dict):
        return PowerLogAtom(obj.get("c", obj.get("coef", 0.0)),
                            obj.get("a", obj.get("exponent", 0.0)),
                            obj.get("k", obj.get("log_power", 0)))
    c, a, *rest = obj
    return PowerLogAtom(c, a, rest[0] if rest else 0)


def collect_atoms(atoms) -> tuple[PowerLogAtom, ...]:
    """Merge atoms sharing (exponent, log_power); drop negligible coefficients."""
    acc: dict[tuple[float, int], float] = {}
    for at in atoms:
        key = (at.exponent, at.log_power)
        acc[key] = acc.get(key, 0.0) + at.coef
    return tuple(
        PowerLogAtom(c, a, k)
        for (a, k), c in sorted(acc.items())
        if abs(c) >= COEF_FLOOR
    )


def atoms_value(atoms, x: float) -> float:
    return sum(at.value_at(x) for at in atoms)


@dataclass(frozen=True)
class PiecewiseFn:
    """A validated piecewise power-log function on (0, inf).

    ``nonneg`` records that nonnegativity has been certified, either by dense
    sampling at construction time or analytically (the averaging operators
    preserve nonnegativity).
    """

    breakpoints: tuple[float, ...]
    pieces: tuple[tuple[PowerLogAtom, ...], ...]
    nonneg: bool = False

    @property
    def n_pieces(self) -> int:
        return len(self.pieces)

    def __call__(self, x: float) -> float:
        return evaluate(self, x)


def make_piecewise(breakpoints, pieces, require_nonneg: bool = False) -> PiecewiseFn:
    """Build and validate a PiecewiseFn.

    ``breakpoints`` must increase strictly from 0 to math.inf; ``pieces`` is
    one atom list per interval (atoms may be PowerLogAtom instances, (c, a, k)
    tuples, or {"c","a","k"} mappings).  With ``require_nonneg`` the function
    is sampled densely on every piece and NegativityDetected is raised if any
    sample falls below -TOL_EVAL (scaled); nonnegativity of mixed-sign atom
    sums is not decidable symbolically, so sampling is the certificate.
    """
    bps = tuple(float(b) for b in breakpoints)
    if len(bps) < 2 or bps[0] != 0.0 or not math.isinf(bps[-1]):
        raise MalformedPartition(
            "breakpoints must start at 0 and end at +inf"
        )
    for lo, hi in zip(bps, bps[1:]):
        if not lo < hi:
            raise MalformedPartition(f"breakpoints not strictly increasing at {lo!r}")
    for b in bps[1:-1]:
        if not math.isfinite(b):
            raise MalformedPartition("interior breakpoints must be finite")
    if len(pieces) != len(bps) - 1:
        raise MalformedPartition(
            f"{len(bps) - 1} pieces expected, got {len(pieces)}"
        )
    norm_pieces = tuple(collect_atoms(as_atom(a) for a in piece) for piece in pieces)
    f = PiecewiseFn(bps, norm_pieces, nonneg=False)
    if require_nonneg:
        _certify_nonneg(f)
        f = replace(f, nonneg=True)
    return f


def piece_samples(lo: float, hi: float, n: int = _SAMPLES_PER_PIECE) -> np.ndarray:
    """Log-spaced sample points inside (lo, hi], endpoint-adjacent included."""
    if math.isinf(hi):
        hi = max(1.0, lo) * 1e9
    if lo <= 0.0:
        lo_eff = hi * 1e-12
    else:
        lo_eff = lo * (1.0 + 1e-12)
    base = np.geomspace(lo_eff, hi, n)
    extra = np.array([lo_eff, hi * (1.0 - 1e-12)])
    return np.unique(np.concatenate([base, extra]))


def _certify_nonneg(f: PiecewiseFn, tol: float = TOL_EVAL) -> None:
    for i, atoms in enumerate(f.pieces):
        if not atoms:
            continue
        lo, hi = f.breakpoints[i], f.breakpoints[i + 1]
        xs = piece_samples(lo, hi)
        vals = [atoms_value(atoms, x) for x in xs]
        scale = max(1.0, max(abs(v) for v in vals))
        for x, v in zip(xs, vals):
            if v < -tol * scale:
                raise NegativityDetected(
                    f"function evaluates to {v} < 0 at x={x}", x=x, value=v
                )


def piece_index(f: PiecewiseFn, x: float) -> int:
    """Index of the piece containing x under the (lo, hi] convention."""
    i = bisect.bisect_left(f.breakpoints, x) - 1
    return min(max(i, 0), f.n_pieces - 1)


def evaluate(f: PiecewiseFn, x: float) -> float:
    """Value of f at x > 0.  At a breakpoint the piece ending there is used."""
    if not (x > 0.0 and math.isfinite(x)):
        raise ValueError(f"evaluation point must be a positive finite real, got {x!r}")
    return atoms_value(f.pieces[piece_index(f, x)], x)


def antiderivative_atoms(atom: PowerLogAtom) -> list[PowerLogAtom]:
    """Atoms of an antiderivative of the given atom (no integration constant).

    For exponent a != -1 the integration-by-parts recurrence produces
    x**(a+1) times a degree-k polynomial in ln x; for a == -1 the result is
    c * ln(x)**(k+1) / (k+1), which raises the log power by one.
    """
    c, a, k = atom.coef, atom.exponent, atom.log_power
    if a == -1.0:
        if k + 1 > LOG_POWER_CAP:
            raise LogPowerCapExceeded(
                f"antidifferentiating ln^{k}/x exceeds the log power cap"
            )
        return [PowerLogAtom(c / (k + 1), 0.0, k + 1)]
    out = []
    coef = c / (a + 1.0)
    for j in range(k, -1, -1):
        out.append(PowerLogAtom(coef, a + 1.0, j))
        coef *= -j / (a + 1.0)
    return out


def derivative_atoms(atom: PowerLogAtom) -> list[PowerLogAtom]:
    c, a, k = atom.coef, atom.exponent, atom.log_power
    out = []
    if a != 0.0:
        out.append(PowerLogAtom(c * a, a - 1.0, k))
    if k > 0:
        out.append(PowerLogAtom(c * k, a - 1.0, k - 1))
    return out


def derivative(f: PiecewiseFn) -> PiecewiseFn:
    """Piecewise derivative on the same partition.

    Jumps at breakpoints are not represented; the result is the classical
    derivative on the open interior of each piece, which is all the integral
    identities here need.
    """
    pieces = tuple(
        collect_atoms(d for at in piece for d in derivative_atoms(at))
        for piece in f.pieces
    )
    return PiecewiseFn(f.breakpoints, pieces, nonneg=False)


def left_value(f: PiecewiseFn, i: int) -> float:
    """Limit of f at breakpoint i from the left (piece i-1's closed form)."""
    return atoms_value(f.pieces[i - 1], f.breakpoints[i])


def right_value(f: PiecewiseFn, i: int) -> float:
    """Limit of f at breakpoint i from the right (piece i's closed form)."""
    return atoms_value(f.pieces[i], f.breakpoints[i])


def is_nonincreasing(f: PiecewiseFn, tol: float = TOL_EVAL) -> bool:
    """Sampled monotonicity check.

    True iff x*f'(x) stays below tol (scaled by |f|) at interior samples and
    f does not jump upward at any breakpoint.  The x-weighting makes the test
    invariant under dilation and coefficient scaling.
    """
    d = derivative(f)
    for i, atoms in enumerate(f.pieces):
        datoms = d.pieces[i]
        if not datoms:
            continue
        lo, hi = f.breakpoints[i], f.breakpoints[i + 1]
        for x in piece_samples(lo, hi, 128):
            slope = atoms_value(datoms, x)
            if slope * x > tol * max(1.0, abs(atoms_value(atoms, x))):
                return False
    for i in range(1, len(f.breakpoints) - 1):
        lv, rv = left_value(f, i), right_value(f, i)
        if rv > lv + tol * max(1.0, abs(lv), abs(rv)):
            return False
    return True


def _covering_piece(f: PiecewiseFn, lo: float) -> int:
    """Piece of f whose interval contains (lo, next-merged-breakpoint]."""
    i = bisect.bisect_right(f.breakpoints, lo) - 1
    return min(max(i, 0), f.n_pieces - 1)


def linear_combination(f: PiecewiseFn, g: PiecewiseFn,
                       cf: float = 1.0, cg: float = 1.0) -> PiecewiseFn:
    """cf*f + cg*g on the merged partition."""
    bps = tuple(sorted(set(f.breakpoints) | set(g.breakpoints)))
    pieces = []
    for lo in bps[:-1]:
        fi = _covering_piece(f, lo)
        gi = _covering_piece(g, lo)
        atoms = [PowerLogAtom(cf * a.coef, a.exponent, a.log_power)
                 for a in f.pieces[fi]]
        atoms += [PowerLogAtom(cg * a.coef, a.exponent, a.log_power)
                  for a in g.pieces[gi]]
        pieces.append(collect_atoms(atoms))
    nonneg = f.nonneg and g.nonneg and cf >= 0.0 and cg >= 0.0
    return PiecewiseFn(bps, tuple(pieces), nonneg=nonneg)


def add(f: PiecewiseFn, g: PiecewiseFn) -> PiecewiseFn:
    return linear_combination(f, g, 1.0, 1.0)


def subtract(f: PiecewiseFn, g: PiecewiseFn) -> PiecewiseFn:
    return linear_combination(f, g, 1.0, -1.0)


def scale(f: PiecewiseFn, c: float) -> PiecewiseFn:
    pieces = tuple(
        collect_atoms(PowerLogAtom(c * a.coef, a.exponent, a.log_power) for a in piece)
        for piece in f.pieces
    )
    return PiecewiseFn(f.breakpoints, pieces, nonneg=f.nonneg and c >= 0.0)


def dilate(f: PiecewiseFn, lam: float) -> PiecewiseFn:
    """The function x -> f(lam * x), staying inside the algebra.

    c*x**a*ln(x)**k composed with lam*x expands binomially in ln(lam), so the
    atom list per piece grows by at most a factor k+1.
    """
    if not lam > 0.0:
        raise ValueError("dilation factor must be positive")
    bps = tuple(0.0 if b == 0.0 else b / lam for b in f.breakpoints)
    llam = math.log(lam)
    pieces = []
    for piece in f.pieces:
        atoms = []
        for at in piece:
            base = at.coef * lam ** at.exponent
            for j in range(at.log_power + 1):
                atoms.append(PowerLogAtom(
                    base * math.comb(at.log_power, j) * llam ** (at.log_power - j),
                    at.exponent, j))
        pieces.append(collect_atoms(atoms))
    return PiecewiseFn(bps, tuple(pieces), nonneg=f.nonneg)
