"""Clustering on dissimilarity matrices: PAM k-medoids, silhouettes and
agglomerative clustering with Lance-Williams updates."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


class Linkage(str, enum.Enum):
    SINGLE = "single"
    COMPLETE = "complete"
    AVERAGE = "average"


@dataclass
class ClusterResult:
    assignment: np.ndarray
    medoids: list[int] | None = None
    cost: float | None = None
    cost_trace: list[float] = field(default_factory=list)

    @property
    def k(self) -> int:
        return int(self.assignment.max()) + 1 if len(self.assignment) else 0

    def clusters(self) -> list[list[int]]:
        return [np.flatnonzero(self.assignment == c).tolist() for c in range(self.k)]

    def to_tsv(self, labels) -> str:
        medoids = set(self.medoids or ())
        lines = ["label\tcluster\tis_medoid"]
        for i, (label, c) in enumerate(zip(labels, self.assignment)):
            lines.append(f"{label}\t{int(c)}\t{int(i in medoids)}")
        return "\n".join(lines) + "\n"


def _matrix(delta):
    return np.asarray(getattr(delta, "d", delta), dtype=np.float64)


def _assign(d, medoids):
    # nearest medoid; argmin picks the lowest medoid position on ties,
    # and medoids are kept sorted so that is the lowest point index
    dist = d[:, medoids]
    nearest = np.argmin(dist, axis=1)
    for pos, m in enumerate(medoids):
        nearest[m] = pos
    return nearest, float(dist[np.arange(len(d)), nearest].sum())


def _build(d, k):
    n = len(d)
    medoids = [int(np.argmin(d.sum(axis=1)))]
    nearest = d[:, medoids[0]].copy()
    while len(medoids) < k:
        best, best_gain = -1, -np.inf
        for c in range(n):
            if c in medoids:
                continue
            gain = np.maximum(nearest - d[:, c], 0.0).sum()
            if gain > best_gain:
                best, best_gain = c, gain
        medoids.append(best)
        nearest = np.minimum(nearest, d[:, best])
    return sorted(medoids)


def pam(delta, k: int, seed: int = 0, init: str = "build", max_swaps: int = 10_000) -> ClusterResult:
    """Partitioning Around Medoids (BUILD then SWAP).

    SWAP evaluates every (medoid, non-medoid) exchange and applies the one
    with the largest strict cost reduction, until none is left. ``init="random"``
    replaces BUILD with ``k`` medoids drawn with ``seed``. Cluster indices
    follow the order of the (sorted) medoids.
    """
    d = _matrix(delta)
    n = len(d)
    if k < 1 or k > n:
        raise ValidationError(f"k must be between 1 and n={n}, got {k}")
    if init == "build":
        medoids = _build(d, k)
    elif init == "random":
        rng = np.random.default_rng(seed)
        medoids = sorted(rng.choice(n, size=k, replace=False).tolist())
    else:
        raise ValidationError(f"unknown init {init!r}")

    _, cost = _assign(d, medoids)
    trace = [cost]
    for _ in range(max_swaps):
        best_cost, best_swap = cost, None
        is_medoid = np.zeros(n, dtype=bool)
        is_medoid[medoids] = True
        for pos in range(k):
            rest = [m for j, m in enumerate(medoids) if j != pos]
            base = d[:, rest].min(axis=1) if rest else np.full(n, np.inf)
            for h in range(n):
                if is_medoid[h]:
                    continue
                c = float(np.minimum(base, d[:, h]).sum())
                if c < best_cost - 1e-12 * max(1.0, abs(best_cost)):
                    best_cost, best_swap = c, (pos, h)
        if best_swap is None:
            break
        pos, h = best_swap
        medoids[pos] = h
        medoids.sort()
        _, cost = _assign(d, medoids)
        if cost > trace[-1]:
            raise AssertionError("PAM swap increased the cost")
        trace.append(cost)
    assignment, cost = _assign(d, medoids)
    return ClusterResult(assignment, list(medoids), cost, trace)


def silhouette(delta, assignment) -> tuple[np.ndarray, float]:
    """Per-point silhouette widths and their mean; singletons score 0."""
    d = _matrix(delta)
    a_ = np.asarray(assignment)
    labels = np.unique(a_)
    if len(labels) < 2:
        raise ValidationError("silhouette needs at least 2 clusters")
    n = len(d)
    widths = np.zeros(n)
    masks = {c: a_ == c for c in labels}
    for i in range(n):
        own = masks[a_[i]]
        size = own.sum()
        if size == 1:
            continue
        a = d[i, own].sum() / (size - 1)
        b = min(d[i, m].mean() for c, m in masks.items() if c != a_[i])
        top = max(a, b)
        widths[i] = 0.0 if top == 0 else (b - a) / top
    return widths, float(widths.mean())


@dataclass
class Dendrogram:
    """Merge tree; leaves are 0..n-1 and merge ``i`` creates node ``n + i``."""

    merges: list[tuple[int, int, float, int]]
    leaves: int
    labels: tuple[str, ...] = ()
    linkage: Linkage = Linkage.AVERAGE

    def heights(self) -> list[float]:
        return [m[2] for m in self.merges]

    def leaf_order(self) -> list[int]:
        if self.leaves == 1:
            return [0]
        out = []
        stack = [self.leaves + len(self.merges) - 1]
        while stack:
            node = stack.pop()
            if node < self.leaves:
                out.append(node)
            else:
                left, right, _, _ = self.merges[node - self.leaves]
                stack.extend([right, left])
        return out

    def to_dict(self) -> dict:
        return {
            "leaves": self.leaves,
            "labels": list(self.labels),
            "linkage": self.linkage.value,
            "merges": [
                {"left": int(a), "right": int(b), "height": float(h), "size": int(s)}
                for a, b, h, s in self.merges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Dendrogram":
        try:
            doc = json.loads(text)
            merges = [(m["left"], m["right"], float(m["height"]), m["size"]) for m in doc["merges"]]
            dendro = cls(merges, int(doc["leaves"]), tuple(doc.get("labels", ())),
                         Linkage(doc.get("linkage", "average")))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed dendrogram document: {exc}") from None
        if len(dendro.merges) != dendro.leaves - 1:
            raise ValidationError("a dendrogram over n leaves needs n-1 merges")
        return dendro


def _lance_williams(linkage, d_ik, d_jk, size_i, size_j):
    if linkage is Linkage.SINGLE:
        return np.minimum(d_ik, d_jk)
    if linkage is Linkage.COMPLETE:
        return np.maximum(d_ik, d_jk)
    return (size_i * d_ik + size_j * d_jk) / (size_i + size_j)


def agglomerative(delta, linkage: Linkage | str = Linkage.AVERAGE) -> Dendrogram:
    """Agglomerative clustering with Lance-Williams distance updates.

    Each active cluster occupies the matrix slot of its lowest point index;
    ties between equally close pairs go to the lexicographically smallest
    slot pair.
    """
    linkage = Linkage(linkage)
    d = _matrix(delta).copy()
    n = len(d)
    if n < 2:
        raise ValidationError("need at least 2 points to cluster")
    active = np.ones(n, dtype=bool)
    node = list(range(n))
    size = np.ones(n, dtype=np.int64)
    np.fill_diagonal(d, np.inf)
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    merges = []
    for step in range(n - 1):
        cand = np.where(upper & active[:, None] & active[None, :], d, np.inf)
        # row-major argmin returns the lexicographically smallest (i, j), i < j
        i, j = divmod(int(np.argmin(cand)), n)
        h = float(d[i, j])
        new_size = int(size[i] + size[j])
        merges.append((node[i], node[j], h, new_size))
        row = _lance_williams(linkage, d[i], d[j], size[i], size[j])
        d[i, :] = row
        d[:, i] = row
        d[i, i] = np.inf
        active[j] = False
        d[j, :] = np.inf
        d[:, j] = np.inf
        size[i] = new_size
        node[i] = n + step
    labels = tuple(getattr(delta, "labels", ()))
    return Dendrogram(merges, n, labels, linkage)


def cut(dendrogram: Dendrogram, k: int) -> ClusterResult:
    """Flat clustering from undoing the last ``k - 1`` merges.

    Clusters are numbered by their lowest member index.
    """
    n = dendrogram.leaves
    if k < 1 or k > n:
        raise ValidationError(f"k must be between 1 and {n}, got {k}")
    parent = list(range(2 * n - 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for step, (a, b, _, _) in enumerate(dendrogram.merges[: n - k]):
        parent[find(a)] = n + step
        parent[find(b)] = n + step
    roots = {}
    assignment = np.empty(n, dtype=np.int64)
    for leaf in range(n):
        assignment[leaf] = roots.setdefault(find(leaf), len(roots))
    return ClusterResult(assignment)
