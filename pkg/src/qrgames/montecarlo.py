"""Monte Carlo simulation of the honest coherent-state strategy.

One trial samples a uniform input string, draws independent threshold-detector
clicks for both output arms of every edge of the measured matching (coherent
states make the per-detector clicks exactly Bernoulli with probability
1 - exp(-|amplitude|^2)), and answers the way the protocol prescribes: pick a
uniformly random clicked slot, read its parity off the detector that fired,
flip a fair coin on a double click, and fall back to a random edge plus a
coin when nothing clicked at all.

Randomness is counter based: every draw is SplitMix64 of (seed, trial, slot)
counters, so trials are reproducible in isolation, independent of execution
order and chunking.  ``run_trials`` consumes the draws vectorized;
``simulate_trial`` replays any single trial with full records, byte-for-byte
consistent with the aggregate run, which is what the replay audit checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import coherent as ch
from . import game as gm

__all__ = [
    "EstimateReport",
    "TrialOutcome",
    "AdjudicationReport",
    "run_trials",
    "simulate_trial",
    "adjudicate_p1",
    "report_to_csv",
    "REPORT_CSV_HEADER",
]

REPORT_CSV_HEADER = "trials,wins,estimate,stderr,seed,eta,nu,alpha,n,k"

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_CHUNK = 1 << 15


def _mix64(v: np.ndarray) -> np.ndarray:
    v = v + _GOLDEN
    v ^= v >> np.uint64(30)
    v *= _MIX1
    v ^= v >> np.uint64(27)
    v *= _MIX2
    v ^= v >> np.uint64(31)
    return v


def _raw64(seed: int, counters: np.ndarray) -> np.ndarray:
    base = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    return _mix64(base + counters.astype(np.uint64) * _GOLDEN)


def _uniforms(seed: int, counters: np.ndarray) -> np.ndarray:
    return (_raw64(seed, counters) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _draw_layout(n: int) -> int:
    # draw 0: input string; 1..n/2: correct arm; n/2+1..n: wrong arm;
    # n+1: slot choice; n+2: parity coin; n+3: fallback edge
    return n + 4


@dataclass(frozen=True)
class EstimateReport:
    trials: int
    wins: int
    estimate: float
    stderr: float
    seed: int
    eta: float
    nu: float
    alpha: float
    n: int
    k: int


@dataclass(frozen=True)
class TrialOutcome:
    """Full record of one replayed trial."""

    x: str
    matching_index: int
    slot_records: tuple[str, ...]  # 'correct' | 'wrong' | 'both' | 'none' per edge
    answer: tuple[int, int, int]
    correct: bool


@dataclass(frozen=True)
class AdjudicationReport:
    """Monte Carlo estimate against both analytic winning variants."""

    mc: EstimateReport
    paper_value: float
    conditional_value: float
    sigmas_paper: float
    sigmas_conditional: float

    @property
    def matching_variant(self) -> str:
        hit_paper = self.sigmas_paper <= 3.0
        hit_cond = self.sigmas_conditional <= 3.0
        if hit_paper and hit_cond:
            return "both"
        if hit_cond:
            return "conditional"
        if hit_paper:
            return "paper_exact"
        return "neither"


def _click_probabilities(params: ch.CoherentGameParams) -> tuple[float, float]:
    model = ch.click_model(params)
    return model.p_correct, model.p_wrong


def run_trials(
    params: ch.CoherentGameParams,
    matching_index: int,
    trials: int,
    seed: int,
) -> EstimateReport:
    """Estimate the honest winning probability over seeded trials.

    Deterministic in (seed, trials); per-trial substreams make the result
    independent of chunk size.  stderr is the binomial estimate
    sqrt(p (1 - p) / trials).
    """
    if trials <= 0:
        raise ValueError(f"trials must be positive, got {trials}")
    if not 0 <= matching_index < params.k:
        raise ValueError(f"matching index {matching_index} outside 0..{params.k - 1}")
    matching = params.family[matching_index]
    n = params.n
    slots = n // 2
    stride = _draw_layout(n)
    p_c, p_w = _click_probabilities(params)
    pair_i = np.array([i for i, _ in matching.pairs])
    pair_j = np.array([j for _, j in matching.pairs])

    wins = 0
    for lo in range(0, trials, _CHUNK):
        hi = min(lo + _CHUNK, trials)
        tau = np.arange(lo, hi, dtype=np.uint64)
        base = tau * np.uint64(stride)
        x = _raw64(seed, base) & np.uint64((1 << n) - 1)
        u_c = _uniforms(seed, base[:, None] + np.uint64(1) + np.arange(slots, dtype=np.uint64))
        u_w = _uniforms(
            seed, base[:, None] + np.uint64(1 + slots) + np.arange(slots, dtype=np.uint64)
        )
        u_sel = _uniforms(seed, base + np.uint64(n + 1))
        u_coin = _uniforms(seed, base + np.uint64(n + 2))
        u_edge = _uniforms(seed, base + np.uint64(n + 3))

        c_click = u_c < p_c
        w_click = u_w < p_w
        clicked = c_click | w_click
        n_clicked = clicked.sum(axis=1)
        parity = (
            (x[:, None] >> (pair_i - 1).astype(np.uint64))
            ^ (x[:, None] >> (pair_j - 1).astype(np.uint64))
        ).astype(np.int64) & 1
        b_guess = (u_coin < 0.5).astype(np.int64)

        # uniformly pick among clicked slots (slot order): rank = floor(u * count) + 1
        rank = np.floor(u_sel * np.maximum(n_clicked, 1)).astype(np.int64) + 1
        running = np.cumsum(clicked, axis=1)
        is_chosen = clicked & (running == rank[:, None])
        # first slot reaching the rank; rows without clicks fall back below
        chosen = np.argmax(is_chosen, axis=1)
        rows = np.arange(len(tau))
        chose_c = c_click[rows, chosen]
        chose_w = w_click[rows, chosen]
        par_chosen = parity[rows, chosen]
        win_clicked = np.where(
            chose_c & ~chose_w,
            True,
            np.where(chose_w & ~chose_c, False, b_guess == par_chosen),
        )
        fallback_edge = np.minimum(
            np.floor(u_edge * slots).astype(np.int64), slots - 1
        )
        par_fallback = parity[rows, fallback_edge]
        win = np.where(n_clicked > 0, win_clicked, b_guess == par_fallback)
        wins += int(win.sum())

    estimate = wins / trials
    stderr = float(np.sqrt(estimate * (1.0 - estimate) / trials))
    return EstimateReport(
        trials=trials,
        wins=wins,
        estimate=estimate,
        stderr=stderr,
        seed=seed,
        eta=params.eta,
        nu=params.nu,
        alpha=params.alpha,
        n=n,
        k=params.k,
    )


def simulate_trial(
    params: ch.CoherentGameParams,
    matching_index: int,
    seed: int,
    trial_index: int,
) -> TrialOutcome:
    """Replay a single trial from its substream, with full records."""
    matching = params.family[matching_index]
    n = params.n
    slots = n // 2
    stride = _draw_layout(n)
    p_c, p_w = _click_probabilities(params)
    base = np.uint64(trial_index) * np.uint64(stride)

    def u(offset: int) -> float:
        return float(_uniforms(seed, np.array([base + np.uint64(offset)]))[0])

    x_int = int(_raw64(seed, np.array([base]))[0] & np.uint64((1 << n) - 1))
    x = gm.index_to_string(x_int, n)
    records = []
    for s in range(slots):
        c = u(1 + s) < p_c
        w = u(1 + slots + s) < p_w
        records.append("both" if c and w else "correct" if c else "wrong" if w else "none")
    clicked = [s for s, r in enumerate(records) if r != "none"]
    b_guess = 1 if u(n + 2) < 0.5 else 0
    if clicked:
        rank = min(int(u(n + 1) * len(clicked)), len(clicked) - 1)
        slot = clicked[rank]
        i, j = matching.pairs[slot]
        par = int(x[i - 1] != x[j - 1])
        if records[slot] == "correct":
            b = par
        elif records[slot] == "wrong":
            b = 1 - par
        else:
            b = b_guess
    else:
        slot = min(int(u(n + 3) * slots), slots - 1)
        i, j = matching.pairs[slot]
        b = b_guess
    answer = (i, j, b)
    return TrialOutcome(
        x=x,
        matching_index=matching_index,
        slot_records=tuple(records),
        answer=answer,
        correct=gm.in_relation(x, answer, matching),
    )


def adjudicate_p1(
    params: ch.CoherentGameParams,
    trials: int,
    seed: int,
    matching_index: int = 0,
) -> AdjudicationReport:
    """Decide which winning-probability variant the simulated strategy follows.

    Distances are in units of the Monte Carlo standard error; at nu = 1 the
    variants coincide and both distances are small.
    """
    mc = run_trials(params, matching_index, trials, seed)
    paper = ch.imperfect_winning(params, "paper_exact")
    cond = ch.imperfect_winning(params, "conditional")
    denom = mc.stderr if mc.stderr > 0 else 1e-300
    return AdjudicationReport(
        mc=mc,
        paper_value=paper,
        conditional_value=cond,
        sigmas_paper=abs(mc.estimate - paper) / denom,
        sigmas_conditional=abs(mc.estimate - cond) / denom,
    )


def report_to_csv(report: EstimateReport) -> str:
    row = ",".join(
        [
            str(report.trials),
            str(report.wins),
            f"{report.estimate:.9g}",
            f"{report.stderr:.9g}",
            str(report.seed),
            f"{report.eta:.9g}",
            f"{report.nu:.9g}",
            f"{report.alpha:.9g}",
            str(report.n),
            str(report.k),
        ]
    )
    return REPORT_CSV_HEADER + "\n" + row + "\n"
