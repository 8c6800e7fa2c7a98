"""Random node sampling (RNS) and the subgraphs it induces.

Step 1 draws n units uniformly without replacement; step 2 keeps every
tie among the drawn units. Sampled units additionally report their true
population degree. The harmonic-mean degree ratio estimated from a
sample is the scaling factor used by the bias-corrected estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import graph as graphmod
from .errors import AllIsolatedSampleError, ValidationError
from .graph import Graph


@dataclass
class RecruitmentSample:
    """One RNS draw: sampled ids, recruitment subgraph and per-unit data.

    observed_degrees are degrees within g_r; reported_degrees are the
    true population degrees of the sampled units. Per-unit vectors are
    aligned with sampled_ids (ascending population index).
    """

    sampled_ids: np.ndarray
    g_r: Graph
    observed_degrees: np.ndarray
    reported_degrees: np.ndarray
    x_obs: np.ndarray = None
    y_obs: np.ndarray = None

    def __post_init__(self):
        n = self.sampled_ids.size
        if self.g_r.n_vertices != n:
            raise ValidationError("recruitment subgraph size mismatch")
        if np.any(self.observed_degrees > self.reported_degrees):
            raise ValidationError("observed degree exceeds reported degree")
        if not np.array_equal(self.observed_degrees, graphmod.degrees(self.g_r)):
            raise ValidationError("observed degrees disagree with recruitment subgraph")
        for vec in (self.x_obs, self.y_obs):
            if vec is not None and len(vec) != n:
                raise ValidationError("unit-data vector length mismatch")

    @property
    def n(self) -> int:
        return self.sampled_ids.size


@dataclass
class PopulationInducedSubgraph:
    """Recruitment subgraph plus unsampled neighbors and the connecting edges.

    Local indices 0..n-1 are the sampled units (same order as the
    sample); n..n+u-1 are the unsampled boundary units. origin maps
    local indices back to population indices.
    """

    g_p: Graph
    boundary_ids: np.ndarray
    origin: np.ndarray
    n_recruited: int

    @property
    def u(self) -> int:
        return self.boundary_ids.size


def sample_size(n_pop: int, fraction: float) -> int:
    """Sample size from a fraction, rounded half-up."""
    if not 0.0 < fraction <= 1.0:
        raise ValidationError("sample fraction must be in (0, 1]")
    return int(math.floor(fraction * n_pop + 0.5))


def rns_sample(
    g: Graph, n: int, rng: np.random.Generator, x=None, y=None
) -> RecruitmentSample:
    """Draw a uniform without-replacement sample of n units and induce G_R."""
    if not 1 <= n <= g.n_vertices:
        raise ValidationError(
            f"sample size {n} out of range for {g.n_vertices} vertices"
        )
    for vec in (x, y):
        if vec is not None and len(vec) != g.n_vertices:
            raise ValidationError("unit-data vector length must equal n_vertices")
    ids = np.sort(rng.choice(g.n_vertices, size=n, replace=False))
    g_r, _ = graphmod.induced_subgraph(g, ids)
    return RecruitmentSample(
        sampled_ids=ids,
        g_r=g_r,
        observed_degrees=graphmod.degrees(g_r),
        reported_degrees=graphmod.degrees(g)[ids],
        x_obs=None if x is None else np.asarray(x, dtype=float)[ids],
        y_obs=None if y is None else np.asarray(y, dtype=float)[ids],
    )


def population_induced(g: Graph, s: RecruitmentSample) -> PopulationInducedSubgraph:
    """Extend G_R with the unsampled neighbors of sampled units.

    V_U collects every unsampled unit adjacent to the sample; the added
    edges are exactly the sample-to-boundary edges of g (no boundary-
    boundary edges by construction).
    """
    ids = s.sampled_ids
    in_sample = np.zeros(g.n_vertices, dtype=bool)
    in_sample[ids] = True
    outside = [g.neighbors[j][~in_sample[g.neighbors[j]]] for j in ids]
    boundary = (
        np.unique(np.concatenate(outside)) if any(a.size for a in outside)
        else np.empty(0, dtype=np.int64)
    )
    n, u = ids.size, boundary.size
    local = np.full(g.n_vertices, -1, dtype=np.int64)
    local[ids] = np.arange(n)
    local[boundary] = n + np.arange(u)
    edges = list(s.g_r.edge_array())
    for i, j in enumerate(ids):
        for b in outside[i]:
            edges.append((i, local[b]))
    edges = np.array(edges, dtype=np.int64).reshape(-1, 2)
    g_p = graphmod.from_edges(n + u, edges)
    return PopulationInducedSubgraph(
        g_p=g_p,
        boundary_ids=boundary,
        origin=np.concatenate([ids, boundary]),
        n_recruited=n,
    )


def scaling_factor(s: RecruitmentSample) -> float:
    """Harmonic-sum degree ratio: sum(1/d_j) / sum(1/d^R_j).

    Units with observed degree 0 are excluded from both sums (an
    isolated unit would put an infinite term in the denominator).
    Summation uses exact accumulation, so unit order cannot change the
    result. Always in (0, 1] since d^R_j <= d_j.
    """
    mask = s.observed_degrees > 0
    if not mask.any():
        raise AllIsolatedSampleError()
    num = math.fsum(1.0 / d for d in s.reported_degrees[mask])
    den = math.fsum(1.0 / d for d in s.observed_degrees[mask])
    return num / den


def n_isolated(s: RecruitmentSample) -> int:
    """Number of sampled units with observed degree 0 (excluded from w_hat)."""
    return int(np.sum(s.observed_degrees == 0))


def write_sample_csv(s: RecruitmentSample, path) -> None:
    """Sample export: `unit_id,d_true,d_obs,x,y` rows, one per sampled unit."""
    with open(path, "w") as fh:
        fh.write("unit_id,d_true,d_obs,x,y\n")
        for i in range(s.n):
            x = "" if s.x_obs is None else repr(float(s.x_obs[i]))
            y = "" if s.y_obs is None else repr(float(s.y_obs[i]))
            fh.write(
                f"{s.sampled_ids[i]},{s.reported_degrees[i]},"
                f"{s.observed_degrees[i]},{x},{y}\n"
            )


def read_sample_csv(path, g_r: Graph) -> RecruitmentSample:
    """Rebuild a RecruitmentSample from the CSV export plus its edge list."""
    ids, d_true, d_obs, xs, ys = [], [], [], [], []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "unit_id,d_true,d_obs,x,y":
            raise ValidationError(f"{path}: unexpected sample CSV header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise ValidationError(f"{path}: malformed sample row {line!r}")
            ids.append(int(parts[0]))
            d_true.append(int(parts[1]))
            d_obs.append(int(parts[2]))
            xs.append(float(parts[3]) if parts[3] else np.nan)
            ys.append(float(parts[4]) if parts[4] else np.nan)
    x = np.array(xs)
    y = np.array(ys)
    return RecruitmentSample(
        sampled_ids=np.array(ids, dtype=np.int64),
        g_r=g_r,
        observed_degrees=np.array(d_obs, dtype=np.int64),
        reported_degrees=np.array(d_true, dtype=np.int64),
        x_obs=None if np.isnan(x).all() else x,
        y_obs=None if np.isnan(y).all() else y,
    )
