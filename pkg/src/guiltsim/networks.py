"""Interaction/imitation graphs: complete, periodic square lattice, and
Barabasi-Albert scale-free.

Networks are immutable CSR-style adjacency structures; interaction and
imitation always use the same graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

__all__ = [
    "Network",
    "BaSpec",
    "DegreeSummary",
    "build_lattice",
    "build_complete",
    "build_scale_free",
    "degree_summary",
    "save_edgelist",
    "load_edgelist",
]


@dataclass(frozen=True, eq=False)
class Network:
    """Undirected graph in CSR form: neighbors of node i are
    indices[indptr[i]:indptr[i+1]], sorted ascending."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    topology: str
    seed: int | None = None

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def edge_src(self) -> np.ndarray:
        """Source node of each directed adjacency entry (aligned with
        `indices`)."""
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)

    @property
    def edge_count(self) -> int:
        return int(self.indices.size // 2)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def validate(self) -> None:
        """Check symmetry, absence of self-loops/duplicates, and
        connectivity; raises ValueError on the first violation."""
        if self.indptr.shape != (self.n + 1,) or self.indptr[-1] != self.indices.size:
            raise ValueError("malformed CSR index arrays")
        if np.any(self.edge_src == self.indices):
            raise ValueError("self-loop detected")
        for i in range(self.n):
            row = self.neighbors(i)
            if row.size > 1 and np.any(np.diff(row) <= 0):
                raise ValueError(f"duplicate or unsorted neighbors at node {i}")
        fwd = np.lexsort((self.indices, self.edge_src))
        rev = np.lexsort((self.edge_src, self.indices))
        if not (
            np.array_equal(self.edge_src[fwd], self.indices[rev])
            and np.array_equal(self.indices[fwd], self.edge_src[rev])
        ):
            raise ValueError("adjacency is not symmetric")
        if not self._connected():
            raise ValueError("graph is not connected")

    def _connected(self) -> bool:
        if self.n == 0:
            return False
        seen = np.zeros(self.n, dtype=bool)
        seen[0] = True
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in self.neighbors(i):
                if not seen[j]:
                    seen[j] = True
                    queue.append(int(j))
        return bool(seen.all())


@dataclass(frozen=True, slots=True)
class BaSpec:
    """Growth parameters for preferential attachment: m edges per new node,
    starting from an m0-clique."""

    n: int
    m: int
    m0: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        m0 = self.m + 1 if self.m0 is None else self.m0
        if m0 < self.m:
            raise ValueError(f"m0 must be >= m, got m0={m0}, m={self.m}")
        if self.n <= m0:
            raise ValueError(f"N must exceed m0, got N={self.n}, m0={m0}")

    @property
    def initial_clique(self) -> int:
        return self.m + 1 if self.m0 is None else self.m0


def _from_edges(
    n: int, edges: list[tuple[int, int]], topology: str, seed: int | None = None
) -> Network:
    pairs = np.asarray(edges, dtype=np.int64)
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    indptr = np.cumsum(indptr)
    net = Network(n=n, indptr=indptr, indices=dst, topology=topology, seed=seed)
    net.validate()
    return net


def build_lattice(side: int) -> Network:
    """Square lattice of side x side nodes with von Neumann neighborhoods
    and periodic boundaries (every degree is exactly 4)."""
    if side < 3:
        raise ValueError(f"lattice side must be >= 3, got {side}")
    n = side * side
    idx = np.arange(n)
    row, col = idx // side, idx % side
    right = row * side + (col + 1) % side
    left = row * side + (col - 1) % side
    down = ((row + 1) % side) * side + col
    up = ((row - 1) % side) * side + col
    nbrs = np.sort(np.stack([right, left, down, up], axis=1), axis=1)
    indptr = np.arange(0, 4 * n + 1, 4, dtype=np.int64)
    net = Network(
        n=n, indptr=indptr, indices=nbrs.ravel().astype(np.int64), topology="lattice"
    )
    net.validate()
    return net


def build_complete(n: int) -> Network:
    """Complete graph (well-mixed baseline): every pair adjacent."""
    if n < 2:
        raise ValueError(f"complete graph needs N >= 2, got {n}")
    rows = [np.delete(np.arange(n, dtype=np.int64), i) for i in range(n)]
    indptr = np.arange(0, n * (n - 1) + 1, n - 1, dtype=np.int64)
    return Network(
        n=n, indptr=indptr, indices=np.concatenate(rows), topology="complete"
    )


def build_scale_free(spec: BaSpec) -> Network:
    """Grow a Barabasi-Albert graph: each arriving node links to m distinct
    existing nodes chosen with probability proportional to current degree.

    Starts from a fully interconnected m0-clique whose nodes join the
    degree-proportional pool immediately; deterministic given the seed.
    """
    rng = np.random.default_rng(spec.seed)
    m0 = spec.initial_clique
    edges: list[tuple[int, int]] = [
        (i, j) for i in range(m0) for j in range(i + 1, m0)
    ]
    # one entry per unit of degree; sampling an index uniformly is
    # preferential attachment
    repeated: list[int] = [i for i in range(m0) for _ in range(m0 - 1)]
    for new in range(m0, spec.n):
        targets: set[int] = set()
        while len(targets) < spec.m:
            targets.add(repeated[rng.integers(len(repeated))])
        for t in sorted(targets):
            edges.append((t, new))
            repeated.append(t)
        repeated.extend([new] * spec.m)
    return _from_edges(spec.n, edges, topology="scale_free", seed=spec.seed)


@dataclass(frozen=True, slots=True)
class DegreeSummary:
    min: int
    max: int
    mean: float
    histogram: dict[int, int]


def degree_summary(net: Network) -> DegreeSummary:
    """Exact degree statistics; mean degree equals 2*edges/N."""
    deg = net.degrees
    counts = np.bincount(deg)
    hist = {int(k): int(v) for k, v in enumerate(counts) if v > 0}
    return DegreeSummary(
        min=int(deg.min()),
        max=int(deg.max()),
        mean=float(deg.mean()),
        histogram=hist,
    )


def save_edgelist(net: Network, path: str | Path) -> None:
    """Write one `u v` pair per line (u < v, 0-based, sorted) for exact
    replay of pre-seeded networks."""
    mask = net.edge_src < net.indices
    pairs = sorted(zip(net.edge_src[mask].tolist(), net.indices[mask].tolist()))
    with open(path, "w", encoding="ascii") as fh:
        for u, v in pairs:
            fh.write(f"{u} {v}\n")


def load_edgelist(path: str | Path, topology: str = "imported") -> Network:
    """Rebuild a network saved by `save_edgelist`; validates on load."""
    edges = []
    n = 0
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            u_s, v_s = line.split()
            u, v = int(u_s), int(v_s)
            edges.append((u, v))
            n = max(n, u + 1, v + 1)
    if not edges:
        raise ValueError(f"no edges found in {path}")
    return _from_edges(n, edges, topology=topology)
