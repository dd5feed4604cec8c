"""Hidden-matching retrieval games.

A game is defined by k independent matchings on {1, ..., n} and a prior over
the 2**n bit strings (uniform unless stated).  The referee prepares the state
with amplitudes (-1)^(x_i) / sqrt(n); a valid answer names one edge (i, j) of
each matching together with the parity b = x_i XOR x_j.  An honest player
measuring in the basis (e_i +- e_j) / sqrt(2) of any single matching answers
that matching's relation with certainty.

The selective (post-measurement cheating) value equals the largest spectral
norm over joint answers of the answer operator built here; for independent
families with uniform prior the operator has the closed form
2**-k * (identity + signed parity couplings), whose connected blocks are rank
one, which is what pins the value at (largest block size) * 2**-k and yields
the certified bound (k+1) / 2**k.

Bit-string conventions: strings read left to right as x_1 x_2 ... x_n, and
the integer encoding of x places x_1 in the least significant bit; priors are
arrays indexed by that encoding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import matchings as mt
from . import numerics as la

__all__ = [
    "Answer",
    "HiddenMatchingGame",
    "ParityClosure",
    "GameValues",
    "string_to_index",
    "index_to_string",
    "signal_state",
    "in_relation",
    "honest_basis",
    "honest_success_probability",
    "relation_answers",
    "joint_answers",
    "answer_count",
    "consistent_mask",
    "count_consistent",
    "parity_closure",
    "answer_operator",
    "selective_value",
    "selective_value_sampled",
    "usefulness_condition",
]

Answer = tuple[tuple[int, int, int], ...]  # one (i, j, b) per matching

MAX_EXHAUSTIVE_BITS = 20
MAX_ANSWER_SPACE = 10**6


def _as_bits(x: str | tuple[int, ...] | list[int]) -> tuple[int, ...]:
    if isinstance(x, str):
        if not x or any(c not in "01" for c in x):
            raise ValueError(f"expected a nonempty 0/1 string, got {x!r}")
        return tuple(int(c) for c in x)
    bits = tuple(int(b) for b in x)
    if not bits or any(b not in (0, 1) for b in bits):
        raise ValueError(f"expected nonempty bits in {{0,1}}, got {x!r}")
    return bits


def string_to_index(x: str | tuple[int, ...] | list[int]) -> int:
    """Integer encoding with x_1 in the least significant bit."""
    bits = _as_bits(x)
    return sum(b << i for i, b in enumerate(bits))


def index_to_string(idx: int, n: int) -> str:
    if not 0 <= idx < (1 << n):
        raise ValueError(f"index {idx} outside 0..2**{n}-1")
    return "".join("1" if (idx >> i) & 1 else "0" for i in range(n))


def signal_state(x: str | tuple[int, ...] | list[int]) -> np.ndarray:
    """State vector with entries (-1)^(x_i) / sqrt(n)."""
    bits = _as_bits(x)
    n = len(bits)
    return np.array([(-1.0) ** b for b in bits]) / np.sqrt(n)


def in_relation(
    x: str | tuple[int, ...] | list[int],
    ans: tuple[int, int, int],
    matching: mt.Matching,
) -> bool:
    """Whether (x, (i, j, b)) satisfies the matching's parity relation."""
    bits = _as_bits(x)
    i, j, b = ans
    if len(bits) != matching.n:
        raise ValueError(f"string length {len(bits)} != node count {matching.n}")
    if b not in (0, 1):
        raise ValueError(f"parity must be 0 or 1, got {b}")
    edge = (min(i, j), max(i, j))
    return edge in matching.edge_set() and (bits[i - 1] ^ bits[j - 1]) == b


def honest_basis(matching: mt.Matching) -> np.ndarray:
    """Orthonormal measurement basis resolving the matching's relation, one row per outcome.

    Row 2s is (e_i + e_j)/sqrt(2) for edge s (outcome b = 0), row 2s + 1 the
    minus combination (outcome b = 1).
    """
    n = matching.n
    basis = np.zeros((n, n))
    for s, (i, j) in enumerate(matching.pairs):
        basis[2 * s, i - 1] = basis[2 * s, j - 1] = 1.0 / np.sqrt(2)
        basis[2 * s + 1, i - 1] = 1.0 / np.sqrt(2)
        basis[2 * s + 1, j - 1] = -1.0 / np.sqrt(2)
    return basis


def _sign_rows(n: int, indices: np.ndarray) -> np.ndarray:
    """(-1)^(x_i) sign pattern for each encoded string; shape (len(indices), n)."""
    bits = (indices[:, None] >> np.arange(n)[None, :]) & 1
    return 1.0 - 2.0 * bits


def honest_success_probability(matching: mt.Matching) -> float:
    """Worst-case Born-rule success of the honest basis over all inputs."""
    n = matching.n
    if n > 16:
        raise ValueError(f"exhaustive check capped at n=16, got {n}")
    basis = honest_basis(matching)
    states = _sign_rows(n, np.arange(1 << n)) / np.sqrt(n)
    probs = (states @ basis.T) ** 2  # (2**n, n) outcome probabilities
    idx = np.arange(1 << n)
    success = np.zeros(1 << n)
    for s, (i, j) in enumerate(matching.pairs):
        parity = ((idx >> (i - 1)) ^ (idx >> (j - 1))) & 1
        # outcome 2s asserts b=0, outcome 2s+1 asserts b=1
        success += np.where(parity == 0, probs[:, 2 * s], probs[:, 2 * s + 1])
    return float(np.min(success))


@dataclass(frozen=True, eq=False)
class HiddenMatchingGame:
    """k independent matchings on shared nodes plus a prior over bit strings."""

    family: tuple[mt.Matching, ...]
    prior: np.ndarray | None = None  # length 2**n, uniform when None

    def __post_init__(self) -> None:
        fam = tuple(self.family)
        object.__setattr__(self, "family", fam)
        ok, witness = mt.is_independent(fam)
        if not ok:
            raise ValueError(f"family is not independent; cycle witness: {witness}")
        if self.prior is not None:
            p = np.asarray(self.prior, dtype=float)
            if p.shape != (1 << self.n,):
                raise ValueError(
                    f"prior must have length 2**{self.n}, got shape {p.shape}"
                )
            if np.any(p < 0):
                raise ValueError("prior has negative entries")
            if abs(float(p.sum()) - 1.0) > 1e-12:
                raise ValueError(f"prior sums to {p.sum()!r}, expected 1")
            object.__setattr__(self, "prior", p)

    @property
    def n(self) -> int:
        return self.family[0].n

    @property
    def k(self) -> int:
        return len(self.family)

    def prior_vector(self) -> np.ndarray:
        if self.prior is not None:
            return self.prior
        return np.full(1 << self.n, 1.0 / (1 << self.n))


@dataclass
class ParityClosure:
    """Parities implied by one edge-with-parity per matching.

    ``anchored`` are the answer's own edges, ``implied`` the extra same-
    component pairs; ``sign`` maps each edge of both sets to +1 (parity 0
    along the connecting path) or -1.
    """

    anchored: tuple[tuple[int, int], ...]
    implied: tuple[tuple[int, int], ...]
    sign: dict[tuple[int, int], int]

    def signed_pairs(self):
        for e in self.anchored + self.implied:
            yield e[0], e[1], self.sign[e]


@dataclass(frozen=True)
class GameValues:
    sv: float
    bound: float
    argmax_answer: Answer | None = None
    pv: float | None = None


def relation_answers(matching: mt.Matching) -> list[tuple[int, int, int]]:
    """Valid single-relation answers (i, j, b), edge-major then parity."""
    return [(i, j, b) for i, j in matching.pairs for b in (0, 1)]


def joint_answers(family):
    """All joint answers in lexicographic (matching, edge, parity) order."""
    return itertools.product(*(relation_answers(m) for m in family))


def answer_count(family) -> int:
    out = 1
    for m in family:
        out *= 2 * len(m.pairs)
    return out


def consistent_mask(n: int, answer: Answer) -> np.ndarray:
    """Boolean mask over encoded strings satisfying every (i, j, b) of the answer."""
    if n > MAX_EXHAUSTIVE_BITS:
        raise ValueError(f"exhaustive string sums capped at n={MAX_EXHAUSTIVE_BITS}, got {n}")
    idx = np.arange(1 << n, dtype=np.int64)
    mask = np.ones(1 << n, dtype=bool)
    for i, j, b in answer:
        mask &= (((idx >> (i - 1)) ^ (idx >> (j - 1))) & 1) == b
    return mask


def count_consistent(game: HiddenMatchingGame, answer: Answer) -> int:
    """Number of strings consistent with a joint answer (2**(n-k) when independent)."""
    return int(consistent_mask(game.n, answer).sum())


def parity_closure(answer: Answer) -> ParityClosure:
    """Transitive closure of the answer's parity constraints.

    The answer's edges must be acyclic (guaranteed for independent families);
    within each connected component every node pair acquires a definite
    relative parity, recorded as a +-1 sign.
    """
    edges = [(min(i, j), max(i, j), b) for i, j, b in answer]
    nodes = sorted({v for i, j, _ in edges for v in (i, j)})
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in nodes}
    for i, j, b in edges:
        adj[i].append((j, b))
        adj[j].append((i, b))
    parity: dict[int, int] = {}
    comp: dict[int, int] = {}
    for root in nodes:
        if root in comp:
            continue
        comp[root] = root
        parity[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for v, b in adj[u]:
                if v in comp:
                    if parity[v] != parity[u] ^ b:
                        raise ValueError("answer parities are inconsistent along a cycle")
                    continue
                comp[v] = root
                parity[v] = parity[u] ^ b
                stack.append(v)
    anchored = tuple((i, j) for i, j, _ in edges)
    if len(set(anchored)) != len(anchored):
        raise ValueError("answer repeats an edge; family cannot be independent")
    # an acyclic edge set on these nodes is a forest: #edges = #nodes - #components
    if len(edges) != len(nodes) - len(set(comp.values())):
        raise ValueError("answer edges contain a cycle; family cannot be independent")
    sign: dict[tuple[int, int], int] = {}
    implied = []
    anchored_set = set(anchored)
    for u, v in itertools.combinations(nodes, 2):
        if comp[u] != comp[v]:
            continue
        s = -1 if (parity[u] ^ parity[v]) else 1
        if (u, v) in anchored_set:
            sign[(u, v)] = s
        else:
            implied.append((u, v))
            sign[(u, v)] = s
    return ParityClosure(anchored=anchored, implied=tuple(implied), sign=sign)


def answer_operator(
    game: HiddenMatchingGame, answer: Answer, mode: str = "closed_form"
) -> np.ndarray:
    """The operator whose spectral norm scores a joint answer.

    ``closed_form`` (uniform prior only) places 2**-k on the diagonal and the
    signed parities of the answer's closure off the diagonal.  ``numeric``
    forms W @ (sum of p(x) rho_x over consistent x) @ W with W the inverse
    square root of the average state, which also covers non-uniform priors;
    both routes agree to high precision on their common domain.
    """
    n, k = game.n, game.k
    if mode == "closed_form":
        if game.prior is not None:
            raise ValueError("closed_form requires the uniform prior")
        closure = parity_closure(answer)
        scale = 2.0**-k
        op = np.zeros((n, n))
        np.fill_diagonal(op, scale)
        for i, j, s in closure.signed_pairs():
            op[i - 1, j - 1] = op[j - 1, i - 1] = s * scale
        return op
    if mode == "numeric":
        p = game.prior_vector()
        idx = np.arange(1 << n, dtype=np.int64)
        signs = _sign_rows(n, idx)
        rho = (signs * p[:, None]).T @ signs / n
        mask = consistent_mask(n, answer)
        r = (signs[mask] * p[mask, None]).T @ signs[mask] / n
        w = la.pinv_sqrt(la.hermitian(rho))
        return la.hermitian(w @ r @ w)
    raise ValueError(f"unknown mode {mode!r}")


def _value_bound(k: int) -> float:
    return (k + 1) / 2.0**k


def _norms_of_answers(game: HiddenMatchingGame, answers, mode: str) -> np.ndarray:
    ops = np.stack([answer_operator(game, a, mode=mode) for a in answers])
    return np.max(np.abs(np.linalg.eigvalsh(ops)), axis=1)


def selective_value(game: HiddenMatchingGame, chunk: int = 2048) -> GameValues:
    """Exact selective value: the largest answer-operator norm over all joint answers.

    Exhaustive over the n**k joint answers (guarded at 10**6), lexicographic
    iteration; ties report the first attaining answer.
    """
    total = answer_count(game.family)
    if total > MAX_ANSWER_SPACE:
        raise ValueError(
            f"answer space {total} exceeds the exhaustive cap {MAX_ANSWER_SPACE}"
        )
    mode = "closed_form" if game.prior is None else "numeric"
    best = -np.inf
    best_answer: Answer | None = None
    buf: list[Answer] = []

    def flush() -> None:
        nonlocal best, best_answer
        if not buf:
            return
        norms = _norms_of_answers(game, buf, mode)
        i = int(np.argmax(norms))
        if norms[i] > best:
            best = float(norms[i])
            best_answer = buf[i]
        buf.clear()

    for ans in joint_answers(game.family):
        buf.append(ans)
        if len(buf) >= chunk:
            flush()
    flush()
    return GameValues(sv=best, bound=_value_bound(game.k), argmax_answer=best_answer)


def selective_value_sampled(
    game: HiddenMatchingGame, samples: int, seed: int
) -> GameValues:
    """Lower bound on the selective value from a seeded sample of joint answers.

    A spot check for games whose answer space is too large to enumerate; the
    reported value never exceeds the true selective value.
    """
    rng = np.random.default_rng(seed)
    mode = "closed_form" if game.prior is None else "numeric"
    per_matching = [relation_answers(m) for m in game.family]
    answers = [
        tuple(pm[rng.integers(len(pm))] for pm in per_matching)
        for _ in range(samples)
    ]
    best = -np.inf
    best_answer = None
    for lo in range(0, len(answers), 2048):
        batch = answers[lo : lo + 2048]
        norms = _norms_of_answers(game, batch, mode)
        i = int(np.argmax(norms))
        if norms[i] > best:
            best = float(norms[i])
            best_answer = batch[i]
    return GameValues(sv=best, bound=_value_bound(game.k), argmax_answer=best_answer)


def usefulness_condition(p: float, eps: float) -> bool:
    """Strict advantage test: honest winning p beats the (1 + eps)/2 cheating threshold."""
    return p > (1.0 + eps) / 2.0
