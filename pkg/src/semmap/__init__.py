"""Semantic maps from cross-linguistic data via multidimensional scaling."""

from .cluster import ClusterResult, Dendrogram, Linkage, agglomerative, cut, pam, silhouette
from .corpus import (
    MISSING,
    BinaryTable,
    CorpusTable,
    KeyMode,
    PointCloud,
    comparison_key,
    parse_binary_table,
    parse_corpus,
    swiss_roll,
)
from .dissim import (
    DissimilarityMatrix,
    FeatureWeights,
    MissingPolicy,
    coexpression_distances,
    context_distances,
    euclidean_distances,
    geodesic_distances,
    hamming,
    language_distances,
)
from .interpret import color_layers, dimension_regression, subset_report
from .linalg import EigenResult, double_center, mat_mul, sym_eigen
from .mds import Engine, MdsSolution, classic_scale, elbow_scan, kruskal_stress, per_point_stress, smacof

__version__ = "0.1.0"
