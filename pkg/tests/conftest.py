import numpy as np
import pytest

from semmap.corpus import CorpusTable
from semmap.dissim import DissimilarityMatrix, euclidean_distances


def labels(n, prefix="p"):
    return [f"{prefix}{i}" for i in range(n)]


def euclidean_delta(points, prefix="p"):
    points = np.asarray(points, dtype=float)
    return DissimilarityMatrix(labels(len(points), prefix), euclidean_distances(points))


def naive_distances(points):
    # plain double loop, independent of the vectorized helper
    n = len(points)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = np.sqrt(sum((a - b) ** 2 for a, b in zip(points[i], points[j])))
    return out


def blob_points(sizes, dim=2, spread=0.3, gap=10.0, seed=0):
    rng = np.random.default_rng(seed)
    pts, truth = [], []
    for b, size in enumerate(sizes):
        center = np.zeros(dim)
        center[b % dim] = gap * (b + 1)
        pts.append(center + spread * rng.standard_normal((size, dim)))
        truth += [b] * size
    return np.vstack(pts), np.array(truth)


def nested_perfect_corpus(sizes=(10, 14, 18, 22, 26, 30, 34), n_contexts=40,
                          languages=("el", "en", "de", "nl", "es", "it", "fr")):
    """PERFECT used on the first |S| contexts of each language, PAST elsewhere."""
    ctx = [f"c{i:02d}" for i in range(n_contexts)]
    forms, feats = [], []
    for i in range(n_contexts):
        forms.append([f"w{i}_{lang}" for lang in languages])
        feats.append(["PERFECT" if i < s else "PAST" for s in sizes])
    return CorpusTable.from_forms(ctx, languages, forms, feats)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
