"""Coherent-state realization of the hidden-matching retrieval games.

The sender encodes x by splitting a coherent state of total mean photon
number alpha**2 across n modes with per-mode amplitude (-1)^(x_i) alpha /
sqrt(n).  An honest receiver interferes the two modes of each edge of one
matching on a balanced beam splitter; with transmission eta and interference
quality nu (visibility 2 nu - 1), the output pair carries energy-conserving
amplitudes sqrt(2 eta nu / n) alpha on the detector matching the parity
x_i XOR x_j and sqrt(2 eta (1 - nu) / n) alpha on the other.

Winning probabilities come in two analytic variants that differ in how the
per-edge error probability p_1 is normalized: ``paper_exact`` uses the raw
per-slot expression p_w (1 - p_c) + p_w p_c / 2, while ``conditional``
divides it by the per-slot click probability, which is the error rate of the
strategy that picks a uniformly random clicked slot (the one the Monte Carlo
module simulates).

A cheating receiver is limited only by the states themselves: the optimal
joint-answer measurement is a discrimination SDP over the 2**n coherent
signals, carried out exactly in the finite-dimensional span obtained from
their Gram matrix (pairwise overlaps exp(-2 alpha**2 d_H(x, y) / n)), so
detector imperfections never enter the cheating side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import game as gm
from . import matchings as mt
from . import numerics as la
from . import sdp

__all__ = [
    "CoherentGameParams",
    "ClickModel",
    "CurveRow",
    "signal_amplitudes",
    "overlap",
    "gram_matrix",
    "cheating_problem",
    "cheating_value",
    "cheating_selective_value",
    "beam_splitter_pair",
    "ideal_winning",
    "click_model",
    "imperfect_winning",
    "curve",
    "curve_to_csv",
    "CURVE_CSV_HEADER",
]

MAX_CHEATING_NODES = 6
MAX_CURVE_POINTS = 512

CURVE_CSV_HEADER = "alpha,winning_paper,winning_conditional,cheating,threshold"

_VARIANTS = ("paper_exact", "conditional")


@dataclass(frozen=True)
class CoherentGameParams:
    """Independent matching family plus pulse and detection parameters."""

    family: tuple[mt.Matching, ...]
    alpha: float
    eta: float = 1.0
    nu: float = 1.0

    def __post_init__(self) -> None:
        fam = tuple(self.family)
        object.__setattr__(self, "family", fam)
        ok, witness = mt.is_independent(fam)
        if not ok:
            raise ValueError(f"family is not independent; cycle witness: {witness}")
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError(f"nu must lie in [0, 1], got {self.nu}")

    @property
    def n(self) -> int:
        return self.family[0].n

    @property
    def k(self) -> int:
        return len(self.family)

    @property
    def visibility(self) -> float:
        return 2.0 * self.nu - 1.0

    def with_alpha(self, alpha: float) -> "CoherentGameParams":
        return CoherentGameParams(self.family, alpha, self.eta, self.nu)


@dataclass(frozen=True)
class ClickModel:
    """Per-edge detector statistics of the honest interferometric measurement.

    p_correct / p_wrong are the click probabilities of the parity-matching
    and parity-violating detectors of one edge, p_no_click the probability
    that the whole pulse yields no click anywhere, and p_error the per-edge
    probability of reporting the wrong parity under the chosen variant.
    """

    p_correct: float
    p_wrong: float
    p_no_click: float
    p_error: float
    variant: str


def signal_amplitudes(
    x: str | tuple[int, ...] | list[int], params: CoherentGameParams
) -> np.ndarray:
    """Per-mode amplitudes (-1)^(x_i) alpha / sqrt(n) of the encoded pulse."""
    return gm.signal_state(x) * params.alpha


def overlap(
    x: str | tuple[int, ...] | list[int],
    y: str | tuple[int, ...] | list[int],
    alpha: float,
    n: int,
) -> float:
    """Inner product of the coherent encodings of x and y: exp(-2 alpha^2 d_H / n)."""
    xb, yb = gm._as_bits(x), gm._as_bits(y)
    if len(xb) != n or len(yb) != n:
        raise ValueError("bit strings must have length n")
    d_h = sum(a != b for a, b in zip(xb, yb))
    return math.exp(-2.0 * alpha * alpha * d_h / n)


def gram_matrix(alpha: float, n: int) -> np.ndarray:
    """Gram matrix of all 2**n coherent encodings, indexed by the integer encoding."""
    if n > MAX_CHEATING_NODES:
        raise ValueError(f"Gram carrier capped at n={MAX_CHEATING_NODES}, got {n}")
    idx = np.arange(1 << n)
    bits = (idx[:, None] >> np.arange(n)[None, :]) & 1
    d_h = (bits[:, None, :] != bits[None, :, :]).sum(axis=2)
    return np.exp(-2.0 * alpha * alpha * d_h / n)


def _embedded_states(params: CoherentGameParams) -> np.ndarray:
    return la.gram_embed(gram_matrix(params.alpha, params.n))


def cheating_problem(params: CoherentGameParams) -> sdp.DiscriminationProblem:
    """Joint-answer discrimination instance over the exact span of the signals.

    Uniform prior over the 2**n strings; answer a collects the states whose
    parities match every edge of a.  Detector parameters eta and nu are
    irrelevant here: the adversary is limited only by the states.
    """
    n = params.n
    vectors = _embedded_states(params)
    answers = list(gm.joint_answers(params.family))
    if len(answers) > sdp.MAX_ANSWERS:
        raise ValueError(f"answer count {len(answers)} exceeds cap {sdp.MAX_ANSWERS}")
    weight = 1.0 / (1 << n)
    ops = []
    for ans in answers:
        rows = vectors[gm.consistent_mask(n, ans)]
        ops.append(la.hermitian(rows.T @ rows.conj() * weight))
    total = la.hermitian(vectors.T @ vectors.conj() * weight)
    return sdp.DiscriminationProblem(
        operators=tuple(ops), labels=tuple(answers), total_state=total
    )


def cheating_value(params: CoherentGameParams, tol: float = 1e-6) -> sdp.SDPSolution:
    """Optimal cheating probability (solved discrimination SDP)."""
    return sdp.physical_value(cheating_problem(params), tol=tol)


def cheating_selective_value(params: CoherentGameParams) -> float:
    """Post-measurement relaxation of the cheating value (upper bound on it)."""
    n = params.n
    vectors = _embedded_states(params)
    weight = 1.0 / (1 << n)
    rho = la.hermitian(vectors.T @ vectors.conj() * weight)
    w = la.pinv_sqrt(rho)
    best = 0.0
    for ans in gm.joint_answers(params.family):
        rows = vectors[gm.consistent_mask(n, ans)]
        op = la.hermitian(rows.T @ rows.conj() * weight)
        best = max(best, la.spectral_norm(w @ op @ w))
    return best


def beam_splitter_pair(
    x_i: int, x_j: int, params: CoherentGameParams
) -> tuple[float, float]:
    """Output amplitudes (correct detector, wrong detector) for one edge.

    The parity x_i XOR x_j selects which physical detector is the correct
    one; the returned magnitudes are parity-independent.  Energy is
    conserved: the squares sum to eta times the 2 alpha^2 / n input energy.
    """
    if x_i not in (0, 1) or x_j not in (0, 1):
        raise ValueError("x_i and x_j must be bits")
    base = 2.0 * params.alpha * params.alpha / params.n
    return (
        math.sqrt(base * params.eta * params.nu),
        math.sqrt(base * params.eta * (1.0 - params.nu)),
    )


def ideal_winning(alpha: float) -> float:
    """Honest winning probability with perfect detection: 1 - exp(-alpha^2)/2."""
    return 1.0 - math.exp(-alpha * alpha) / 2.0


def click_model(params: CoherentGameParams, variant: str = "paper_exact") -> ClickModel:
    """Detector statistics for one edge of the measured matching."""
    if variant not in _VARIANTS:
        raise ValueError(f"variant must be one of {_VARIANTS}, got {variant!r}")
    n, alpha, eta, nu = params.n, params.alpha, params.eta, params.nu
    a2 = alpha * alpha
    p_c = 1.0 - math.exp(-2.0 * eta * nu * a2 / n)
    p_w = 1.0 - math.exp(-2.0 * eta * (1.0 - nu) * a2 / n)
    p_0 = math.exp(-eta * a2)
    raw = p_w * (1.0 - p_c) + 0.5 * p_w * p_c
    if variant == "paper_exact":
        p_err = raw
    else:
        denom = p_c + p_w - p_c * p_w
        p_err = raw / denom if denom > 0.0 else 0.0
    return ClickModel(
        p_correct=p_c, p_wrong=p_w, p_no_click=p_0, p_error=p_err, variant=variant
    )


def imperfect_winning(params: CoherentGameParams, variant: str = "paper_exact") -> float:
    """Honest winning probability with loss and imperfect interference.

    No click anywhere (probability p_0) costs a coin flip; otherwise the
    answer is wrong with the per-edge error probability of the variant.
    """
    model = click_model(params, variant)
    return (
        1.0
        - 0.5 * model.p_no_click
        - (1.0 - model.p_no_click) * model.p_error
    )


@dataclass(frozen=True)
class CurveRow:
    alpha: float
    winning_paper: float
    winning_conditional: float
    cheating: float | None
    threshold: float | None


def curve(
    alphas,
    family: tuple[mt.Matching, ...],
    eta: float = 1.0,
    nu: float = 1.0,
    tol: float = 1e-6,
) -> list[CurveRow]:
    """Winning and cheating probabilities over an alpha grid.

    The cheating column is the solved discrimination value and its threshold
    (1 + cheating) / 2 the break-even honest probability; rows where the
    solver fails to converge carry None there and parse back as NA.
    """
    grid = [float(a) for a in alphas]
    if not grid or len(grid) > MAX_CURVE_POINTS:
        raise ValueError(f"alpha grid must hold 1..{MAX_CURVE_POINTS} points")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("alpha grid must be nondecreasing")
    rows = []
    for alpha in grid:
        params = CoherentGameParams(tuple(family), alpha, eta, nu)
        w_paper = imperfect_winning(params, "paper_exact")
        w_cond = imperfect_winning(params, "conditional")
        try:
            solution = cheating_value(params, tol=tol)
            cheat = solution.primal_value if solution.converged else None
        except (ValueError, np.linalg.LinAlgError):
            cheat = None
        threshold = (1.0 + cheat) / 2.0 if cheat is not None else None
        rows.append(CurveRow(alpha, w_paper, w_cond, cheat, threshold))
    return rows


def _fmt(v: float | None) -> str:
    return "NA" if v is None else f"{v:.9g}"


def curve_to_csv(rows: list[CurveRow]) -> str:
    lines = [CURVE_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.alpha),
                    _fmt(r.winning_paper),
                    _fmt(r.winning_conditional),
                    _fmt(r.cheating),
                    _fmt(r.threshold),
                ]
            )
        )
    return "\n".join(lines) + "\n"
