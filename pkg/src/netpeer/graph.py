"""Undirected simple graphs: Erdős–Rényi generation and structural queries.

Vertices are dense 0-based indices. Adjacency is stored as one sorted
integer array of neighbors per vertex; graphs are treated as immutable
after construction and are safe to share across worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConnectivityError, ValidationError

_EMPTY = np.empty(0, dtype=np.int64)


@dataclass
class Graph:
    """Undirected simple graph over vertices 0..n_vertices-1."""

    n_vertices: int
    neighbors: list  # list[np.ndarray], sorted, no duplicates, no self-loops
    _flat: tuple = field(default=None, repr=False, compare=False)

    def degree(self, j: int) -> int:
        return len(self.neighbors[j])

    def n_edges(self) -> int:
        return sum(len(a) for a in self.neighbors) // 2

    def flat(self):
        """Concatenated neighbor arrays plus per-vertex offsets (len n+1)."""
        if self._flat is None:
            degs = np.fromiter(
                (len(a) for a in self.neighbors), dtype=np.int64, count=self.n_vertices
            )
            offsets = np.zeros(self.n_vertices + 1, dtype=np.int64)
            np.cumsum(degs, out=offsets[1:])
            flat = np.concatenate(self.neighbors) if self.n_vertices else _EMPTY
            self._flat = (flat.astype(np.int64, copy=False), offsets)
        return self._flat

    def edge_array(self) -> np.ndarray:
        """All edges as an (m, 2) array with first column < second column."""
        rows = []
        for j, nbrs in enumerate(self.neighbors):
            upper = nbrs[nbrs > j]
            if upper.size:
                rows.append(np.column_stack([np.full(upper.size, j, dtype=np.int64), upper]))
        if not rows:
            return np.empty((0, 2), dtype=np.int64)
        return np.concatenate(rows)

    def validate(self) -> None:
        """Check the structural invariants; raises ValidationError on violation."""
        if self.n_vertices < 0:
            raise ValidationError("negative vertex count")
        if len(self.neighbors) != self.n_vertices:
            raise ValidationError("adjacency length does not match vertex count")
        edge_set = set()
        for j, nbrs in enumerate(self.neighbors):
            arr = np.asarray(nbrs)
            if arr.size and (arr.min() < 0 or arr.max() >= self.n_vertices):
                raise ValidationError(f"vertex {j}: neighbor index out of range")
            if np.any(arr == j):
                raise ValidationError(f"vertex {j}: self-loop")
            if arr.size != np.unique(arr).size:
                raise ValidationError(f"vertex {j}: duplicate neighbor")
            if not np.all(arr[:-1] <= arr[1:]):
                raise ValidationError(f"vertex {j}: neighbor list not sorted")
            edge_set.update((j, int(k)) for k in arr)
        for j, k in edge_set:
            if (k, j) not in edge_set:
                raise ValidationError(f"asymmetric edge ({j},{k})")


def _build_neighbors(n: int, edges: np.ndarray) -> list:
    """Adjacency lists from an (m, 2) edge array (each edge listed once)."""
    if len(edges) == 0:
        return [_EMPTY] * n
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    counts = np.bincount(src, minlength=n)
    return np.split(dst, np.cumsum(counts)[:-1])


def from_edges(n: int, edges: np.ndarray) -> Graph:
    """Build a Graph from an edge array, rejecting self-loops and duplicates."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size:
        if edges.min() < 0 or edges.max() >= n:
            raise ValidationError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ValidationError("self-loop in edge list")
        canon = np.sort(edges, axis=1)
        keys = canon[:, 0] * n + canon[:, 1]
        if np.unique(keys).size != keys.size:
            raise ValidationError("duplicate edge in edge list")
        edges = canon
    return Graph(n, _build_neighbors(n, edges))


def _pair_index_to_edges(idx: np.ndarray, n: int) -> np.ndarray:
    """Map linear indices over the n*(n-1)/2 unordered pairs to (i, j), i<j.

    Pairs are enumerated lexicographically: row i covers pairs (i, i+1..n-1).
    """
    rows = np.arange(n - 1, dtype=np.int64)
    starts = rows * n - rows * (rows + 1) // 2
    i = np.searchsorted(starts, idx, side="right") - 1
    j = idx - starts[i] + i + 1
    return np.column_stack([i, j])


def generate_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Draw G(n, p): each unordered pair carries an edge independently with prob p.

    Uses a geometric-skip scan over the linearized pair indices, which
    draws the exact G(n, p) distribution in O(edges) work. Deterministic
    per seed (algorithm version: geometric-skip v1).
    """
    if n < 0:
        raise ValidationError("n must be nonnegative")
    if not 0.0 <= p <= 1.0:
        raise ValidationError("p must be in [0, 1]")
    m_total = n * (n - 1) // 2
    if m_total == 0 or p == 0.0:
        return Graph(n, [_EMPTY] * n)
    if p == 1.0:
        tri = np.triu_indices(n, k=1)
        return from_edges(n, np.column_stack(tri))
    indices = []
    current = -1
    while True:
        remaining = m_total - current - 1
        batch = max(256, int(remaining * p * 1.2) + 16)
        skips = rng.geometric(p, size=batch).astype(np.int64)
        cand = current + np.cumsum(skips)
        hits = cand[cand < m_total]
        indices.append(hits)
        if hits.size < cand.size or cand[-1] >= m_total - 1:
            break
        current = int(cand[-1])
    idx = np.concatenate(indices)
    return Graph(n, _build_neighbors(n, _pair_index_to_edges(idx, n)))


def generate_connected_er(
    n: int, p: float, rng: np.random.Generator, max_attempts: int = 1000
) -> Graph:
    """Return the first connected G(n, p) draw; error out after max_attempts."""
    if max_attempts < 1:
        raise ValidationError("max_attempts must be >= 1")
    for _ in range(max_attempts):
        g = generate_er(n, p, rng)
        if is_connected(g):
            return g
    raise ConnectivityError(max_attempts, n, p)


def is_connected(g: Graph) -> bool:
    """True iff every vertex is reachable from vertex 0 (empty graph: True)."""
    n = g.n_vertices
    if n <= 1:
        return True
    flat, offsets = g.flat()
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    frontier = np.array([0], dtype=np.int64)
    count = 1
    while frontier.size:
        cand = np.concatenate([flat[offsets[v]:offsets[v + 1]] for v in frontier])
        cand = cand[~visited[cand]]
        if not cand.size:
            break
        cand = np.unique(cand)
        visited[cand] = True
        count += cand.size
        frontier = cand
    return count == n


def degrees(g: Graph) -> np.ndarray:
    """Degree of every vertex, as an int array of length n_vertices."""
    return np.fromiter(
        (len(a) for a in g.neighbors), dtype=np.int64, count=g.n_vertices
    )


def induced_subgraph(g: Graph, members) -> tuple:
    """Subgraph induced on a vertex set, plus the old->new index map.

    Returns (subgraph, mapping) where mapping is an array of length
    g.n_vertices with new indices for members and -1 elsewhere. Member
    order (sorted ascending) defines the new indexing.
    """
    members = np.unique(np.asarray(members, dtype=np.int64))
    if members.size and (members.min() < 0 or members.max() >= g.n_vertices):
        raise ValidationError("vertex set member out of range")
    mapping = np.full(g.n_vertices, -1, dtype=np.int64)
    mapping[members] = np.arange(members.size, dtype=np.int64)
    in_set = np.zeros(g.n_vertices, dtype=bool)
    in_set[members] = True
    new_neighbors = []
    for m in members:
        nb = g.neighbors[m]
        new_neighbors.append(mapping[nb[in_set[nb]]])
    return Graph(int(members.size), new_neighbors), mapping


def write_edge_list(g: Graph, path, tags=()) -> None:
    """Write the edge-list format: `# vertices=<n>` header then `j,k` lines, j<k."""
    with open(path, "w") as fh:
        fh.write(f"# vertices={g.n_vertices}\n")
        for tag in tags:
            fh.write(f"# {tag}\n")
        for j, k in g.edge_array():
            fh.write(f"{j},{k}\n")


def read_edge_list(path) -> Graph:
    """Read the edge-list format; rejects self-loops, duplicates and j>=k lines."""
    n = None
    edges = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("vertices="):
                    n = int(body.split("=", 1)[1])
                continue
            try:
                j_s, k_s = line.split(",")
                j, k = int(j_s), int(k_s)
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: malformed edge line {line!r}")
            if j >= k:
                raise ValidationError(
                    f"{path}:{lineno}: edge must satisfy j<k (got {j},{k})"
                )
            edges.append((j, k))
    if n is None:
        raise ValidationError(f"{path}: missing '# vertices=<n>' header")
    return from_edges(n, np.array(edges, dtype=np.int64).reshape(-1, 2))
