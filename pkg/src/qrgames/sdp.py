"""Optimal-measurement discrimination values with dual certificates.

The physical (measurement-constrained) value of a retrieval game is the
semidefinite program

    maximize   sum_a Tr(M_a R_a)    over POVMs {M_a}
    subject to sum_a M_a = identity, M_a >= 0,

with R_a the prior-weighted sum of the states consistent with answer a.  We
solve the dual

    minimize   Tr Y
    subject to Y >= R_a for every a,

which has a single d x d variable, by a log-barrier path-following Newton
method: minimize t * Tr Y - sum_a logdet(Y - R_a) for growing t.  On the
central path the matrices (1/t) * (Y - R_a)^-1 form a POVM up to the Newton
residual, so the primal is recovered by a congruence that restores
sum_a M_a = identity exactly; the reported gap (dual minus primal value) is
therefore a genuine certificate, not an optimizer's self-assessment:
Y stays strictly dual feasible throughout and the POVM is feasible by
construction.

Dense and small on purpose: dimension is capped at 64 and the answer count at
256.  Line searches use the generalized eigenvalues of the step against the
current slacks, so barrier differences are evaluated without cancellation even
at large t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import game as gm
from . import numerics as la

__all__ = [
    "DiscriminationProblem",
    "SDPSolution",
    "physical_value",
    "dual_feasibility_margin",
    "hidden_matching_problem",
    "selective_vs_physical",
    "solution_report",
]

MAX_DIMENSION = 64
MAX_ANSWERS = 256

_PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DiscriminationProblem:
    """Answer operators R_a of a state-discrimination instance.

    ``operators[a]`` is the prior-weighted sum of state projectors consistent
    with answer a; each must be PSD.  ``total_state`` (the full prior-weighted
    average, unit trace) is optional and only used for validation, since it is
    not recoverable from the per-answer sums.
    """

    operators: tuple[np.ndarray, ...]
    labels: tuple | None = None
    total_state: np.ndarray | None = None

    def __post_init__(self) -> None:
        if not self.operators:
            raise ValueError("need at least one answer operator")
        if len(self.operators) > MAX_ANSWERS:
            raise ValueError(
                f"answer count {len(self.operators)} exceeds cap {MAX_ANSWERS}"
            )
        ops = tuple(la.hermitian(op) for op in self.operators)
        d = ops[0].shape[0]
        if d > MAX_DIMENSION:
            raise ValueError(f"dimension {d} exceeds cap {MAX_DIMENSION}")
        for op in ops:
            if op.shape != (d, d):
                raise ValueError("answer operators disagree on dimension")
            smallest = float(np.linalg.eigvalsh(op)[0])
            scale = max(1.0, la.spectral_norm(op))
            if smallest < -_PSD_TOL * scale:
                raise ValueError(f"answer operator not PSD: eigenvalue {smallest:.3e}")
        object.__setattr__(self, "operators", ops)
        if self.labels is not None and len(self.labels) != len(ops):
            raise ValueError("labels and operators disagree on length")
        if self.total_state is not None:
            rho = la.hermitian(self.total_state)
            # slack covers gram_embed's rank cut, which shaves O(1e-9) of
            # trace for nearly degenerate state sets; scaling bugs are O(1)
            if abs(float(np.trace(rho).real) - 1.0) > 1e-8:
                raise ValueError(f"total state trace {np.trace(rho).real!r} != 1")
            object.__setattr__(self, "total_state", rho)

    @property
    def dimension(self) -> int:
        return self.operators[0].shape[0]


@dataclass
class SDPSolution:
    """Primal/dual pair with a certified duality gap."""

    primal_value: float
    dual_value: float
    gap: float
    povm: tuple[np.ndarray, ...]
    dual_certificate: np.ndarray
    iterations: int
    converged: bool
    completeness_residual: float = 0.0
    message: str = ""

    @property
    def value(self) -> float:
        return self.primal_value


def _logdet_chol(mat: np.ndarray) -> tuple[np.ndarray, float]:
    chol = np.linalg.cholesky(mat)
    return chol, 2.0 * float(np.sum(np.log(np.diag(chol).real)))


def _hermitize(mat: np.ndarray) -> np.ndarray:
    return (mat + mat.conj().T) / 2.0


def _newton_direction(inverses: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Solve sum_a A_a X A_a = -grad for Hermitian X (A_a Hermitian PD)."""
    na, d, _ = inverses.shape
    # H[(i,l),(j,k)] = sum_a A[a,i,j] * conj(A[a,l,k]) acting on row-major vec
    t = np.tensordot(inverses, inverses.conj(), axes=(0, 0))  # [i,j,l,k]
    h = t.transpose(0, 2, 1, 3).reshape(d * d, d * d)
    rhs = (-grad).reshape(d * d)
    try:
        x = np.linalg.solve(h, rhs)
    except np.linalg.LinAlgError:
        x = np.linalg.lstsq(h, rhs, rcond=None)[0]
    return _hermitize(x.reshape(d, d))


def _center(
    stacked: np.ndarray,
    y: np.ndarray,
    t: float,
    budget: int,
    decrement_tol: float = 1e-10,
) -> tuple[np.ndarray, int]:
    """Damped Newton steps on t*TrY - sum logdet(Y - R_a); returns (Y, steps used)."""
    na, d, _ = stacked.shape
    eye = np.eye(d, dtype=stacked.dtype)
    steps = 0
    while steps < budget:
        slacks = y[None, :, :] - stacked
        try:
            chols = np.linalg.cholesky(slacks)
        except np.linalg.LinAlgError:
            break
        inverses = np.empty_like(slacks)
        for a in range(na):
            inv_l = np.linalg.inv(chols[a])
            inverses[a] = _hermitize(inv_l.conj().T @ inv_l)
        grad = t * eye - inverses.sum(axis=0)
        step = _newton_direction(inverses, grad)
        decrement_sq = float(-np.trace(grad @ step).real)
        if not np.isfinite(decrement_sq) or decrement_sq <= 0:
            break
        if decrement_sq / 2.0 <= decrement_tol:
            break
        steps += 1
        ok, delta = _safe_step(chols, step, t, grad, y, stacked)
        if not ok:
            break
        y = y + delta
    return y, steps


def _safe_step(
    chols: np.ndarray,
    step: np.ndarray,
    t: float,
    grad: np.ndarray,
    y: np.ndarray,
    stacked: np.ndarray,
) -> tuple[bool, np.ndarray]:
    """Backtracking line search along ``step`` using slack eigenvalues.

    The barrier difference along the step is
        t*s*Tr(step) - sum_a sum_i log(1 + s * w_{a,i})
    with w the eigenvalues of L_a^-1 step L_a^-H, which is exact and avoids
    subtracting two huge barrier values at large t.
    """
    na = chols.shape[0]
    ws = []
    for a in range(na):
        inv_l = np.linalg.inv(chols[a])
        ws.append(np.linalg.eigvalsh(_hermitize(inv_l @ step @ inv_l.conj().T)))
    w = np.concatenate(ws)
    w_min = float(w.min())
    s_max = 1.0 if w_min >= 0 else min(1.0, 0.99 / (-w_min))
    slope = float(np.trace(grad @ step).real)  # negative
    tr_step = float(np.trace(step).real)
    s = s_max
    for _ in range(60):
        if np.all(1.0 + s * w > 0):
            dphi = t * s * tr_step - float(np.sum(np.log1p(s * w)))
            if dphi <= 0.25 * s * slope:
                return True, s * step
        s *= 0.5
    return False, np.zeros_like(step)


def _recover(
    stacked: np.ndarray, y: np.ndarray, t: float, operators: tuple[np.ndarray, ...]
) -> tuple[tuple[np.ndarray, ...], float, float]:
    """POVM from the barrier gradient identity, with completeness restored exactly."""
    slacks = y[None, :, :] - stacked
    raw = np.linalg.inv(slacks) / t
    raw = (raw + raw.conj().transpose(0, 2, 1)) / 2.0
    total = la.hermitian(raw.sum(axis=0))
    w = la.pinv_sqrt(total, support_tol=1e-14)
    povm = tuple(_hermitize(w @ m @ w) for m in raw)
    primal = float(sum(np.trace(m @ r).real for m, r in zip(povm, operators)))
    residual = float(
        np.max(np.abs(sum(povm) - np.eye(y.shape[0], dtype=y.dtype)))
    )
    return povm, primal, residual


def physical_value(
    problem: DiscriminationProblem,
    tol: float = 1e-6,
    max_iterations: int = 500,
) -> SDPSolution:
    """Solve the discrimination SDP to a certified duality gap.

    Deterministic: starts from Y = (max_a ||R_a|| + 1) * identity, pushes the
    barrier parameter by a fixed factor, and stops once gap <= tol (or the
    Newton budget runs out, in which case the best certified pair so far is
    returned with ``converged=False``).
    """
    ops = problem.operators
    na, d = len(ops), problem.dimension
    norms = [la.spectral_norm(op) for op in ops]
    if max(norms) == 0.0:
        eye = np.eye(d)
        povm = tuple(eye / na for _ in ops)
        return SDPSolution(
            primal_value=0.0,
            dual_value=0.0,
            gap=0.0,
            povm=povm,
            dual_certificate=np.zeros((d, d)),
            iterations=0,
            converged=True,
            message="all answer operators vanish",
        )
    dtype = complex if any(np.iscomplexobj(op) for op in ops) else float
    stacked = np.stack([op.astype(dtype) for op in ops])
    y = (max(norms) + 1.0) * np.eye(d, dtype=dtype)
    t = 1.0
    mu = 10.0
    used = 0
    best: SDPSolution | None = None
    while used < max_iterations:
        y, steps = _center(stacked, y, t, budget=max_iterations - used)
        used += steps
        povm, primal, residual = _recover(stacked, y, t, ops)
        dual = float(np.trace(y).real)
        gap = dual - primal
        sol = SDPSolution(
            primal_value=primal,
            dual_value=dual,
            gap=gap,
            povm=povm,
            dual_certificate=y.copy(),
            iterations=used,
            converged=False,
            completeness_residual=residual,
        )
        if best is None or sol.gap < best.gap:
            best = sol
        if best.gap <= tol:
            best.converged = True
            break
        if t > 1e15:
            break
        t *= mu
    assert best is not None
    best.iterations = used
    if not best.converged:
        best.message = (
            f"stopped with gap {best.gap:.3e} > tol {tol:.1e} "
            f"after {used} Newton steps"
        )
    return best


def dual_feasibility_margin(
    solution: SDPSolution, problem: DiscriminationProblem
) -> float:
    """Smallest eigenvalue of Y - R_a over answers; >= 0 up to roundoff for a valid certificate."""
    y = solution.dual_certificate
    return float(
        min(np.linalg.eigvalsh(y - op)[0].real for op in problem.operators)
    )


def hidden_matching_problem(game: gm.HiddenMatchingGame) -> DiscriminationProblem:
    """Discrimination instance of a hidden-matching game in its n-dimensional carrier."""
    n = game.n
    p = game.prior_vector()
    idx = np.arange(1 << n, dtype=np.int64)
    signs = gm._sign_rows(n, idx) / np.sqrt(n)
    answers = list(gm.joint_answers(game.family))
    if len(answers) > MAX_ANSWERS:
        raise ValueError(f"answer count {len(answers)} exceeds cap {MAX_ANSWERS}")
    ops = []
    for ans in answers:
        mask = gm.consistent_mask(n, ans)
        rows = signs[mask]
        ops.append(la.hermitian((rows * p[mask, None]).T @ rows))
    total = la.hermitian((signs * p[:, None]).T @ signs)
    return DiscriminationProblem(
        operators=tuple(ops), labels=tuple(answers), total_state=total
    )


def selective_vs_physical(
    game: gm.HiddenMatchingGame, tol: float = 1e-6
) -> tuple[float, float, str]:
    """Compute both values and certify the ordering pv <= sv.

    Returns (sv, pv, flag) with flag 'equal' when the two coincide within
    1e-4 and 'strict' otherwise.  A physical value materially above the
    selective value would falsify the relaxation ordering and raises.
    """
    sv = gm.selective_value(game).sv
    solution = physical_value(hidden_matching_problem(game), tol=tol)
    pv = solution.primal_value
    if pv > sv + 1e-6:
        raise RuntimeError(
            f"physical value {pv!r} exceeds selective value {sv!r}: ordering violated"
        )
    flag = "equal" if abs(pv - sv) <= 1e-4 else "strict"
    return sv, pv, flag


def solution_report(solution: SDPSolution) -> str:
    """Stable key=value lines for logs and the command line."""
    lines = [
        f"primal={solution.primal_value:.9g}",
        f"dual={solution.dual_value:.9g}",
        f"gap={solution.gap:.3e}",
        f"iterations={solution.iterations}",
        f"converged={'true' if solution.converged else 'false'}",
        f"completeness_residual={solution.completeness_residual:.3e}",
    ]
    if solution.message:
        lines.append(f"message={solution.message}")
    return "\n".join(lines) + "\n"
