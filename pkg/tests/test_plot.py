import re
from pathlib import Path

import numpy as np
import pytest

from semmap.cluster import Dendrogram, Linkage, agglomerative
from semmap.dissim import DissimilarityMatrix, euclidean_distances
from semmap.errors import ValidationError
from semmap.interpret import color_layers
from semmap.mds import Engine, ElbowScan, MdsSolution, classic_scale, elbow_scan
from semmap.plot import plot_dendrogram, plot_elbow, plot_map

from conftest import euclidean_delta, nested_perfect_corpus

DATA = Path(__file__).parent / "data"
FILL = re.compile(r'fill="#[0-9a-f]{6}"')


def golden_dendrogram():
    return Dendrogram([(0, 1, 1.0, 2), (2, 3, 1.2, 2), (4, 5, 4.5, 4)], 4,
                      ("p0", "p1", "p2", "p3"), Linkage.AVERAGE)


def test_single_point_is_centred():
    sol = MdsSolution(("a",), np.zeros((1, 2)), 0.0, Engine.CLASSIC)
    svg = plot_map(sol)
    circles = re.findall(r'<circle cx="([\d.]+)" cy="([\d.]+)"', svg)
    assert len(circles) == 1
    cx, cy = map(float, circles[0])
    # plot area is [60, 620] x [20, 430]
    assert cx == pytest.approx(340.0) and cy == pytest.approx(225.0)


def test_map_markers_inside_frame():
    sol = classic_scale(euclidean_delta(np.random.default_rng(0).normal(size=(30, 3))), 3)
    svg = plot_map(sol, dims=(1, 3))
    for cx, cy in re.findall(r'<circle cx="([\d.]+)" cy="([\d.]+)"', svg):
        assert 60 <= float(cx) <= 620 and 20 <= float(cy) <= 430
    assert "dim 1 (" in svg and "dim 3 (" in svg


def test_seven_layers_differ_only_in_fill():
    table = nested_perfect_corpus()
    pts = np.random.default_rng(1).normal(size=(40, 2))
    sol = classic_scale(DissimilarityMatrix(table.context_ids, euclidean_distances(pts)), 2)
    svgs = [plot_map(sol, layer) for layer in color_layers(sol, table, "feature")]
    assert len(svgs) == 7
    assert len(set(svgs)) > 1
    stripped = {FILL.sub('fill=""', s) for s in svgs}
    assert len(stripped) == 1


def test_map_dims_out_of_range():
    sol = classic_scale(euclidean_delta(np.eye(3)), 2)
    with pytest.raises(ValidationError):
        plot_map(sol, dims=(1, 10))


def test_map_is_deterministic():
    sol = classic_scale(euclidean_delta(np.random.default_rng(2).normal(size=(10, 2))), 2)
    assert plot_map(sol) == plot_map(sol)


def test_two_leaf_dendrogram():
    svg = plot_dendrogram(agglomerative(euclidean_delta([[0.0], [1.0]])))
    assert svg.count('class="merge"') == 1
    assert ">p0<" in svg and ">p1<" in svg


def test_dendrogram_one_path_per_merge():
    dendro = agglomerative(euclidean_delta(np.random.default_rng(3).normal(size=(12, 2))))
    assert plot_dendrogram(dendro).count('class="merge"') == 11


def test_dendrogram_golden_file():
    expected = (DATA / "dendrogram_avg4.svg").read_text()
    assert plot_dendrogram(golden_dendrogram()) == expected


def test_elbow_polyline_vertices():
    scan = elbow_scan(euclidean_delta(np.random.default_rng(4).normal(size=(20, 3))), 5)
    svg = plot_elbow(scan)
    pts = re.search(r'<polyline points="([^"]+)"', svg).group(1).split()
    assert len(pts) == 5
    assert svg.count("<circle") == 1


def test_elbow_round_trip_renders_same():
    scan = elbow_scan(euclidean_delta(np.random.default_rng(5).normal(size=(15, 2))), 4)
    again = ElbowScan.from_tsv(scan.to_tsv())
    assert plot_elbow(again) == plot_elbow(scan)


def test_map_renders_far_dimension_pair():
    pts = np.random.default_rng(6).normal(size=(14, 12))
    sol = classic_scale(euclidean_delta(pts), 10)
    svg = plot_map(sol, dims=(1, 10))
    assert "dim 1 (" in svg and "dim 10 (" in svg
    assert svg.count("<circle") == 14
    assert svg != plot_map(sol, dims=(1, 2))
