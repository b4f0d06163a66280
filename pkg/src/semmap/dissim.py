"""Dissimilarity matrices from corpus tables, binary tables and point clouds."""

from __future__ import annotations

import enum
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .corpus import (
    MISSING,
    BinaryTable,
    CorpusTable,
    KeyMode,
    PointCloud,
    _header_and_body,
    comparison_key,
)
from .errors import (
    DisconnectedGraphError,
    ParseError,
    ShapeError,
    UndefinedDistanceError,
    ValidationError,
)


class MissingPolicy(str, enum.Enum):
    PAIRWISE_DELETE = "delete"
    COUNT_AS_DIFFER = "differ"


@dataclass(frozen=True)
class DissimilarityMatrix:
    """Labelled square matrix: symmetric, zero diagonal, finite, non-negative."""

    labels: tuple[str, ...]
    d: np.ndarray

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        d = np.array(self.d, dtype=np.float64)
        n = len(labels)
        if d.shape != (n, n):
            raise ShapeError(f"matrix shape {d.shape} does not match {n} labels")
        if len(set(labels)) != n:
            raise ValidationError("dissimilarity labels must be unique")
        if not np.all(np.isfinite(d)):
            raise ValidationError("dissimilarities must be finite")
        if np.any(d < 0):
            i, j = np.argwhere(d < 0)[0]
            raise ValidationError(f"negative dissimilarity at ({labels[i]}, {labels[j]})")
        if np.any(np.diag(d) != 0):
            i = int(np.flatnonzero(np.diag(d))[0])
            raise ValidationError(f"nonzero diagonal at {labels[i]}")
        if not np.array_equal(d, d.T):
            i, j = np.argwhere(d != d.T)[0]
            raise ValidationError(
                f"matrix is not symmetric at ({labels[i]}, {labels[j]}): "
                f"{d[i, j]!r} vs {d[j, i]!r}"
            )
        d.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return len(self.labels)

    def __getitem__(self, key):
        i, j = key
        if isinstance(i, str):
            i = self.labels.index(i)
        if isinstance(j, str):
            j = self.labels.index(j)
        return float(self.d[i, j])

    def permuted(self, order) -> "DissimilarityMatrix":
        order = np.asarray(order)
        return DissimilarityMatrix([self.labels[i] for i in order], self.d[np.ix_(order, order)])

    def to_tsv(self) -> str:
        lines = ["\t".join(self.labels)]
        for row in self.d:
            lines.append("\t".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "DissimilarityMatrix":
        header, body = _header_and_body(text)
        labels = [h.strip() for h in header]
        if len(body) != len(labels):
            raise ParseError(f"expected {len(labels)} rows, found {len(body)}")
        rows = []
        for lineno, cells in body:
            try:
                rows.append([float(c) for c in cells])
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        return cls(labels, np.array(rows, dtype=np.float64).reshape(len(labels), len(labels)))


def symmetrize_upper(d: np.ndarray) -> np.ndarray:
    """Copy the strict upper triangle onto the lower one and zero the diagonal."""
    up = np.triu(d, 1)
    return up + up.T


@dataclass(frozen=True)
class FeatureWeights:
    """Positive per-position weights for weighted Hamming distances."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(not np.isfinite(v) or v <= 0 for v in vals):
            raise ValidationError(f"weights must be positive and finite, got {vals}")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    @classmethod
    def uniform(cls, n: int) -> "FeatureWeights":
        return cls((1.0,) * n)

    @classmethod
    def for_languages(cls, languages: Sequence[str], mapping: Mapping[str, float],
                      default: float = 1.0) -> "FeatureWeights":
        unknown = sorted(set(mapping) - set(languages))
        if unknown:
            raise ValidationError(f"weights given for unknown languages: {unknown}")
        return cls(tuple(mapping.get(lang, default) for lang in languages))

    @classmethod
    def from_tsv(cls, text: str, languages: Sequence[str]) -> "FeatureWeights":
        mapping = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            cells = raw.split("\t")
            if len(cells) != 2:
                raise ParseError("expected '<language>\\t<weight>'", lineno)
            try:
                mapping[cells[0].strip()] = float(cells[1])
            except ValueError:
                raise ParseError(f"bad weight {cells[1]!r}", lineno) from None
        return cls.for_languages(languages, mapping)


def _weights(weights, n) -> np.ndarray:
    if weights is None:
        return np.ones(n)
    if not isinstance(weights, FeatureWeights):
        weights = FeatureWeights(tuple(weights))
    if len(weights) != n:
        raise ShapeError(f"{len(weights)} weights for tuples of length {n}")
    return np.array(weights.values)


def hamming(u: Sequence, v: Sequence, weights=None,
            missing: MissingPolicy | str = MissingPolicy.PAIRWISE_DELETE) -> float:
    """Relative (optionally weighted) Hamming distance between two token tuples.

    Under PAIRWISE_DELETE, positions where either side is MISSING are dropped
    and the weights renormalised over what remains. Under COUNT_AS_DIFFER a
    MISSING position always counts as a difference, even against MISSING.
    """
    if len(u) != len(v):
        raise ShapeError(f"tuples differ in length: {len(u)} vs {len(v)}")
    w = _weights(weights, len(u))
    missing = MissingPolicy(missing)
    num = den = 0.0
    for wi, a, b in zip(w, u, v):
        gap = a is MISSING or b is MISSING
        if gap and missing is MissingPolicy.PAIRWISE_DELETE:
            continue
        den += wi
        if gap or a != b:
            num += wi
    if den == 0.0:
        raise UndefinedDistanceError("no position is defined in both tuples")
    return num / den


def context_distances(table: CorpusTable, mode: KeyMode | str = KeyMode.LEXEME,
                      weights=None,
                      missing: MissingPolicy | str = MissingPolicy.PAIRWISE_DELETE,
                      ) -> DissimilarityMatrix:
    """Hamming distances between contexts over their per-language tokens."""
    tokens = comparison_key(table, mode)
    codes = tokens.codes()
    n, n_lang = codes.shape
    w = _weights(weights, n_lang)
    missing = MissingPolicy(missing)
    num = np.zeros((n, n))
    den = np.zeros((n, n))
    for j in range(n_lang):
        col = codes[:, j]
        defined = (col >= 0)[:, None] & (col >= 0)[None, :]
        same = col[:, None] == col[None, :]
        if missing is MissingPolicy.PAIRWISE_DELETE:
            num += w[j] * (defined & ~same)
            den += w[j] * defined
        else:
            num += w[j] * ~(defined & same)
            den += w[j]
    off = ~np.eye(n, dtype=bool)
    bad = np.argwhere((den == 0) & off)
    if len(bad):
        i, k = bad[0]
        raise UndefinedDistanceError(
            f"contexts {table.context_ids[i]!r} and {table.context_ids[k]!r} "
            "share no language with a translation in both"
        )
    with np.errstate(invalid="ignore", divide="ignore"):
        d = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    return DissimilarityMatrix(table.context_ids, symmetrize_upper(d))


def coexpression_distances(table: BinaryTable) -> DissimilarityMatrix:
    """``1 - (#rows with Y in both columns) / #rows`` between columns."""
    k = table.cells.shape[0]
    if k < 1:
        raise ValidationError("need at least one row (form)")
    y = table.cells.astype(np.int64)
    shared = y.T @ y
    d = 1.0 - shared / k
    return DissimilarityMatrix(table.col_labels, symmetrize_upper(d))


def language_distances(table: CorpusTable,
                       mode: KeyMode | str = KeyMode.LEXEME) -> DissimilarityMatrix:
    """Distances between languages by disagreement in how they group contexts.

    For each language, two contexts are grouped together when they get the
    same token. The distance between two languages is the fraction of context
    pairs, defined in both languages, on which their groupings disagree.
    """
    if len(table.context_ids) < 2:
        raise ValidationError("language distances need at least 2 contexts")
    codes = comparison_key(table, mode).codes()
    n, n_lang = codes.shape
    iu = np.triu_indices(n, 1)
    same, defined = [], []
    for j in range(n_lang):
        col = codes[:, j]
        same.append((col[:, None] == col[None, :])[iu])
        defined.append(((col >= 0)[:, None] & (col >= 0)[None, :])[iu])
    d = np.zeros((n_lang, n_lang))
    for a in range(n_lang):
        for b in range(a + 1, n_lang):
            both = defined[a] & defined[b]
            total = int(both.sum())
            if total == 0:
                raise UndefinedDistanceError(
                    f"languages {table.languages[a]!r} and {table.languages[b]!r} "
                    "have no jointly translated context pair"
                )
            d[a, b] = np.count_nonzero((same[a] != same[b]) & both) / total
    return DissimilarityMatrix(table.languages, symmetrize_upper(d))


def euclidean_distances(points) -> np.ndarray:
    x = np.asarray(points, dtype=np.float64)
    diff = x[:, None, :] - x[None, :, :]
    return symmetrize_upper(np.sqrt((diff * diff).sum(axis=-1)))


def knn_graph(points, k: int) -> np.ndarray:
    """Dense weight matrix of the union-symmetrised k-nearest-neighbour graph (0 = no edge)."""
    e = euclidean_distances(points)
    n = e.shape[0]
    ranked = e + np.diag(np.full(n, np.inf))
    nearest = np.argsort(ranked, axis=1, kind="stable")[:, :k]
    adj = np.zeros((n, n), dtype=bool)
    adj[np.repeat(np.arange(n), k), nearest.ravel()] = True
    adj |= adj.T
    # coincident neighbours keep their edge; sparse graphs drop explicit zeros
    return np.where(adj, np.maximum(e, np.finfo(float).tiny), 0.0)


def geodesic_distances(cloud: PointCloud, k: int = 10) -> DissimilarityMatrix:
    """All-pairs shortest-path lengths through the k-NN graph of the cloud."""
    n = cloud.n
    if k < 1:
        raise ValidationError("k must be at least 1")
    if n < k + 1:
        raise ValidationError(f"need more than k={k} points, got {n}")
    g = csr_matrix(knn_graph(cloud.points, k))
    n_comp, comp = connected_components(g, directed=False)
    if n_comp > 1:
        sizes = sorted(np.bincount(comp).tolist(), reverse=True)
        raise DisconnectedGraphError(sizes)
    d = shortest_path(g, method="D", directed=False)
    return DissimilarityMatrix(cloud.labels, symmetrize_upper(d))
