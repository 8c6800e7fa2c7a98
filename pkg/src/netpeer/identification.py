"""Executable non-identification checks for the peer-effects model.

Two completions of the observed data that differ only by swapping which
recruited unit an unobserved neighbor attaches to are both compatible
with the observed data. Whenever the two recruited units have different
true degrees and the two attached covariate values differ, the swapped
completions assign different likelihoods to the same observed outcomes,
so no estimator can tell them apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import graph as graphmod
from .errors import IsolatedVertexError, NoSlackError, ValidationError
from .graph import Graph
from .model import ModelParams, log_likelihood
from .sampling import RecruitmentSample


@dataclass
class CompletionCandidate:
    """A candidate completion: the recruitment subgraph plus attached units.

    Local indices 0..n-1 are the sampled units; appended units follow.
    attachments lists (sampled local id, appended local id) edges.
    """

    g_p: Graph
    x_tilde: np.ndarray
    attachments: tuple


@dataclass
class WitnessPair:
    """Two compatible completions that differ by one neighbor swap."""

    a: CompletionCandidate
    b: CompletionCandidate
    observed: RecruitmentSample
    j: int
    l: int
    u1: int
    u2: int
    d_j: int
    d_l: int
    x_u1: float
    x_u2: float


def is_compatible(candidate: CompletionCandidate, observed: RecruitmentSample) -> bool:
    """Check the three compatibility clauses against the observed data.

    The sampled vertices must be present, every recruitment edge must
    appear in the candidate, and the observed covariates must be the
    restriction of the candidate's.
    """
    n = observed.n
    if candidate.g_p.n_vertices < n or candidate.x_tilde.size < n:
        return False
    if not np.allclose(candidate.x_tilde[:n], observed.x_obs, rtol=0, atol=0):
        return False
    for j in range(n):
        have = set(int(k) for k in candidate.g_p.neighbors[j])
        if any(int(k) not in have for k in observed.g_r.neighbors[j]):
            return False
    return True


def build_swap_pair(
    observed: RecruitmentSample, j: int, l: int, x_u1: float, x_u2: float
) -> WitnessPair:
    """Attach two synthetic unsampled units to recruited units j and l, both ways.

    Candidate a carries edges (j, u1) and (l, u2); candidate b swaps
    them. Both are compatible with the observed data by construction.
    j and l are local (within-sample) indices and must have reported
    degree strictly above their observed degree.
    """
    n = observed.n
    if j == l:
        raise ValidationError("witness units must be distinct")
    if not (0 <= j < n and 0 <= l < n):
        raise ValidationError("witness unit index out of range")
    if x_u1 == x_u2:
        raise ValidationError("attached covariate values must differ")
    for v in (j, l):
        if observed.reported_degrees[v] <= observed.observed_degrees[v]:
            raise NoSlackError(v)
    u1, u2 = n, n + 1
    base = observed.g_r.edge_array()
    x_tilde = np.concatenate([observed.x_obs, [x_u1, x_u2]])

    def candidate(edge_j, edge_l):
        edges = np.concatenate(
            [base, np.array([[j, edge_j], [l, edge_l]], dtype=np.int64)]
        )
        return CompletionCandidate(
            g_p=graphmod.from_edges(n + 2, edges),
            x_tilde=x_tilde,
            attachments=((j, int(edge_j)), (l, int(edge_l))),
        )

    return WitnessPair(
        a=candidate(u1, u2),
        b=candidate(u2, u1),
        observed=observed,
        j=j,
        l=l,
        u1=u1,
        u2=u2,
        d_j=int(observed.reported_degrees[j]),
        d_l=int(observed.reported_degrees[l]),
        x_u1=float(x_u1),
        x_u2=float(x_u2),
    )


def candidate_means(
    candidate: CompletionCandidate, observed: RecruitmentSample, params: ModelParams
) -> np.ndarray:
    """Per-sampled-unit conditional means under a candidate completion.

    The peer term divides the sum over the candidate's neighbors by the
    unit's *reported* (true) degree.
    """
    n = observed.n
    means = np.empty(n)
    for r in range(n):
        d_r = observed.reported_degrees[r]
        if d_r == 0:
            raise IsolatedVertexError(r)
        nbrs = candidate.g_p.neighbors[r]
        means[r] = (
            params.beta0
            + params.beta1 * observed.x_obs[r]
            + params.beta2 * float(candidate.x_tilde[nbrs].sum()) / d_r
        )
    return means


def mean_sum_gap(pair: WitnessPair, params: ModelParams) -> float:
    """Difference of the summed conditional means between the two candidates.

    Closed form: beta2 * (1/d_j - 1/d_l) * (x_u1 - x_u2); zero exactly
    when the two recruited units have equal true degrees.
    """
    return params.beta2 * (1.0 / pair.d_j - 1.0 / pair.d_l) * (pair.x_u1 - pair.x_u2)


def likelihood_gap(pair: WitnessPair, y_obs, params: ModelParams) -> float:
    """Absolute log-likelihood difference of y under the two candidates."""
    mu_a = candidate_means(pair.a, pair.observed, params)
    mu_b = candidate_means(pair.b, pair.observed, params)
    return abs(
        log_likelihood(mu_a, y_obs, params.sigma2_eps)
        - log_likelihood(mu_b, y_obs, params.sigma2_eps)
    )


def find_witness(observed: RecruitmentSample, x_u1=None, x_u2=None):
    """First recruited pair (by index) with attachment slack and distinct degrees.

    Returns a WitnessPair, or None when no such pair exists. Attached
    covariate values default to the observed mean plus/minus one
    observed standard deviation (or 1.0 when degenerate).
    """
    slack = np.flatnonzero(observed.reported_degrees > observed.observed_degrees)
    if x_u1 is None or x_u2 is None:
        center = float(observed.x_obs.mean()) if observed.x_obs is not None else 0.0
        spread = float(observed.x_obs.std()) if observed.x_obs is not None else 1.0
        if spread == 0.0:
            spread = 1.0
        x_u1, x_u2 = center + spread, center - spread
    for a_pos in range(slack.size):
        for b_pos in range(a_pos + 1, slack.size):
            j, l = int(slack[a_pos]), int(slack[b_pos])
            if observed.reported_degrees[j] != observed.reported_degrees[l]:
                return build_swap_pair(observed, j, l, x_u1, x_u2)
    return None
