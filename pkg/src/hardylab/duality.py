"""Equivalence between the operator pair and the monotone difference form.

For nonincreasing, nonnegative, locally absolutely continuous phi with
phi(+inf) = 0, the density f(u) = u * |phi'(u)| satisfies

    H(phi)(x) - phi(x) = (Hf)(x)        and        phi(x) = (H*f)(x),

which transports the sharp two-sided inequalities between the two settings.
This module implements the transform in both directions, the sliding-window
mollifier that turns a stepped phi into an admissible continuous one from
below, and a combined numeric check of both identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EquivalenceViolated,
    JumpDiscontinuity,
    NoDecayAtInfinity,
    NotMonotone,
    NotRepresentable,
)
from .funcmodel import (
    TOL_EVAL,
    PiecewiseFn,
    PowerLogAtom,
    collect_atoms,
    derivative,
    evaluate,
    is_nonincreasing,
    left_value,
    piece_index,
    right_value,
)
from .norms import DEFAULT_TOL, lp_norm
from .operators import cumulative_integral, dual_hardy, hardy, hardy_minus_identity


def has_jumps(phi: PiecewiseFn, tol: float = TOL_EVAL) -> bool:
    """True when phi is discontinuous at some interior breakpoint."""
    for i in range(1, len(phi.breakpoints) - 1):
        lv, rv = left_value(phi, i), right_value(phi, i)
        if abs(lv - rv) > tol * max(1.0, abs(lv), abs(rv)):
            return True
    return False


def _check_decay(phi: PiecewiseFn) -> None:
    for atom in phi.pieces[-1]:
        if atom.exponent >= 0.0:
            raise NoDecayAtInfinity(
                "phi does not vanish at infinity (unbounded-piece exponent "
                f"{atom.exponent} >= 0)"
            )


def phi_to_f(phi: PiecewiseFn) -> PiecewiseFn:
    """The generating density f(u) = u * |phi'(u)| of a nonincreasing phi.

    Jumps of phi would put point masses into f, which the atom algebra
    cannot represent; stepped inputs must be mollified first.
    """
    if not is_nonincreasing(phi):
        raise NotMonotone("phi must be nonincreasing")
    _check_decay(phi)
    for i in range(1, len(phi.breakpoints) - 1):
        lv, rv = left_value(phi, i), right_value(phi, i)
        if abs(lv - rv) > TOL_EVAL * max(1.0, abs(lv), abs(rv)):
            raise JumpDiscontinuity(
                f"phi jumps at x={phi.breakpoints[i]}; mollify first",
                x=phi.breakpoints[i],
            )
    d = derivative(phi)
    pieces = tuple(
        collect_atoms(
            PowerLogAtom(-a.coef, a.exponent + 1.0, a.log_power) for a in piece
        )
        for piece in d.pieces
    )
    return PiecewiseFn(phi.breakpoints, pieces, nonneg=True)


def f_to_phi(f: PiecewiseFn) -> PiecewiseFn:
    """The inverse direction of the equivalence: phi = H*f.

    Any nonnegative f that is locally integrable and has an integrable tail
    of f(u)/u generates a continuous nonincreasing phi with decay.
    """
    return dual_hardy(f)


def _is_polynomial_piece(atoms) -> bool:
    return all(
        a.log_power == 0
        and a.exponent >= 0.0
        and abs(a.exponent - round(a.exponent)) < 1e-12
        for a in atoms
    )


def _binomial_shift(atoms, h: float):
    """Atoms of x -> sum c*(x+h)**m for polynomial atoms, expanded exactly."""
    out = []
    for at in atoms:
        m = int(round(at.exponent))
        for j in range(m + 1):
            out.append(PowerLogAtom(
                at.coef * math.comb(m, j) * h ** (m - j), float(j), 0))
    return out


def mollify(phi: PiecewiseFn, n: int) -> PiecewiseFn:
    """The sliding-window average phi_n(x) = n * integral of phi over [x, x+1/n].

    Exact within the algebra for piecewise-polynomial phi (which covers the
    stepped and piecewise-affine inputs the mollifier exists for): the window
    antiderivative shift (x + 1/n) expands binomially.  General power-log
    pieces would leave the algebra, so they are rejected.

    The result is continuous, nonincreasing, nonnegative, below phi, and
    increases pointwise in n.
    """
    if n < 1 or n != int(n):
        raise ValueError("n must be a positive integer")
    if not is_nonincreasing(phi):
        raise NotMonotone("phi must be nonincreasing")
    for i, piece in enumerate(phi.pieces):
        if not _is_polynomial_piece(piece):
            raise NotRepresentable(
                "mollification of non-polynomial pieces leaves the power-log "
                f"algebra (piece {i})"
            )
    h = 1.0 / n
    big_a = cumulative_integral(phi)
    bps = set(phi.breakpoints)
    bps |= {b - h for b in phi.breakpoints if math.isfinite(b) and b - h > 0.0}
    new_bps = tuple(sorted(bps))
    pieces = []
    for lo, hi in zip(new_bps[:-1], new_bps[1:]):
        x_rep = lo + 1.0 if math.isinf(hi) else 0.5 * (lo + hi)
        i = piece_index(big_a, x_rep)
        j = piece_index(big_a, x_rep + h)
        shifted = _binomial_shift(big_a.pieces[j], h)
        atoms = [PowerLogAtom(n * a.coef, a.exponent, a.log_power) for a in shifted]
        atoms += [PowerLogAtom(-n * a.coef, a.exponent, a.log_power)
                  for a in big_a.pieces[i]]
        pieces.append(collect_atoms(atoms))
    return PiecewiseFn(new_bps, tuple(pieces), nonneg=phi.nonneg)


def sample_grid(phi: PiecewiseFn, n: int = 64) -> np.ndarray:
    """Log-spaced identity-check grid spanning the breakpoints, off-breakpoint.

    Spans [smallest positive breakpoint / 10, 10 * largest finite breakpoint]
    and nudges any collision with a breakpoint, so the measure-zero piece
    convention never enters the comparison.
    """
    finite = [b for b in phi.breakpoints if math.isfinite(b) and b > 0.0]
    lo = min(finite) / 10.0 if finite else 0.1
    hi = max(finite) * 10.0 if finite else 10.0
    pts = np.geomspace(lo, hi, n)
    bps = set(phi.breakpoints)
    return np.array([x * 1.0000001 if x in bps else x for x in pts])


@dataclass(frozen=True)
class EquivalenceReport:
    max_gap_difference_identity: float
    max_gap_dual_identity: float
    norm_gap_difference: float
    norm_gap_phi: float
    norm_budget_difference: float
    norm_budget_phi: float
    verdict: str

    def to_dict(self) -> dict:
        return {
            "max_pointwise_gap_monot1": self.max_gap_difference_identity,
            "max_pointwise_gap_monot2": self.max_gap_dual_identity,
            "norm_gaps": [self.norm_gap_difference, self.norm_gap_phi],
            "verdict": self.verdict,
        }


def _rel_gap(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    if scale < 1e-290:
        return 0.0
    return abs(a - b) / max(scale, 1.0e-300)


def check_equivalence(phi: PiecewiseFn, p: float,
                      tol: float = 1e-8) -> EquivalenceReport:
    """Verify both transport identities for one phi, pointwise and in norm.

    Checks, at 64 log-spaced samples, that H(phi)-phi agrees with Hf and that
    H*f reproduces phi for f = phi_to_f(phi); then that the corresponding
    norms agree within their combined quadrature errors.  A failure raises
    EquivalenceViolated carrying the worst sample point: the identities are
    exact, so a violation means an implementation bug, never a property of
    the input.
    """
    f = phi_to_f(phi)
    lhs_diff = hardy_minus_identity(phi)
    rhs_diff = hardy(f)
    phi_back = f_to_phi(f)
    worst_x1 = worst_x2 = math.nan
    gap1 = gap2 = 0.0
    for x in sample_grid(phi):
        g1 = _rel_gap(evaluate(lhs_diff, x), evaluate(rhs_diff, x))
        if g1 > gap1:
            gap1, worst_x1 = g1, x
        g2 = _rel_gap(evaluate(phi_back, x), evaluate(phi, x))
        if g2 > gap2:
            gap2, worst_x2 = g2, x
    quad_tol = min(tol, DEFAULT_TOL) * 0.1
    n_diff = lp_norm(lhs_diff, p, quad_tol)
    n_hf = lp_norm(rhs_diff, p, quad_tol)
    n_phi = lp_norm(phi, p, quad_tol)
    n_hsf = lp_norm(phi_back, p, quad_tol)
    norm_gap_diff = abs(n_diff.value - n_hf.value)
    norm_gap_phi = abs(n_phi.value - n_hsf.value)
    budget_diff = n_diff.err + n_hf.err + 1e-12 * max(n_diff.value, n_hf.value, 1.0)
    budget_phi = n_phi.err + n_hsf.err + 1e-12 * max(n_phi.value, n_hsf.value, 1.0)
    if gap1 > tol:
        raise EquivalenceViolated(
            f"difference identity off by {gap1} at x={worst_x1}",
            x=worst_x1, gap=gap1)
    if gap2 > tol:
        raise EquivalenceViolated(
            f"dual identity off by {gap2} at x={worst_x2}",
            x=worst_x2, gap=gap2)
    if norm_gap_diff > budget_diff:
        raise EquivalenceViolated(
            f"norm transport ||H(phi)-phi|| vs ||Hf|| off by {norm_gap_diff}",
            gap=norm_gap_diff)
    if norm_gap_phi > budget_phi:
        raise EquivalenceViolated(
            f"norm transport ||phi|| vs ||H*f|| off by {norm_gap_phi}",
            gap=norm_gap_phi)
    return EquivalenceReport(
        max_gap_difference_identity=gap1,
        max_gap_dual_identity=gap2,
        norm_gap_difference=norm_gap_diff,
        norm_gap_phi=norm_gap_phi,
        norm_budget_difference=budget_diff,
        norm_budget_phi=budget_phi,
        verdict="pass",
    )
