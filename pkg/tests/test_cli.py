import io
import re

import numpy as np
import pytest

from semmap.cli import DEFAULTS, build_parser, run, write_atomic
from semmap.corpus import PointCloud

from conftest import nested_perfect_corpus

TOY = (
    "context\ten\tde\tfr\n"
    "c0\thave\thaben\tavoir\n"
    "c1\thave\thaben\têtre\n"
    "c2\thave\tsein\têtre\n"
    "c3\tbe\tsein\têtre\n"
    "c4\thave\thaben\tavoir\n"
)


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue().strip(), err.getvalue().strip()


@pytest.fixture
def toy(tmp_path):
    path = tmp_path / "corpus.tsv"
    path.write_text(TOY)
    return path


def blob_cloud(path):
    r = np.random.default_rng(0)
    pts = r.standard_normal((60, 3)) * np.array([3.0, 2.0, 1.5])
    path.write_text(PointCloud(pts).to_tsv())
    return path


def test_smoke_pipeline(toy, tmp_path):
    delta, sol = tmp_path / "delta.tsv", tmp_path / "sol.json"
    code, out, _ = cli("dist", "hamming", toy, "-o", delta)
    assert code == 0 and out == "dist hamming: n=5"
    code, out, _ = cli("mds", "classic", "--dims", 2, delta, "-o", sol)
    assert code == 0 and out.startswith("mds classic: n=5 dims=2 stress=")
    assert '"labels"' in sol.read_text()


def test_elbow_prints_three(tmp_path):
    cloud = blob_cloud(tmp_path / "blobs.tsv")
    delta = tmp_path / "delta.tsv"
    # geodesic distances with a large k reduce to Euclidean on this compact cloud
    assert cli("dist", "geodesic", "--k", 59, cloud, "-o", delta)[0] == 0
    code, out, _ = cli("elbow", "--max-dims", 6, delta, "-o", tmp_path / "elbow.tsv")
    assert (code, out) == (0, "elbow=3")
    assert cli("plot", "elbow", tmp_path / "elbow.tsv", "-o", tmp_path / "elbow.svg")[0] == 0


def test_plot_map_circle_count(toy, tmp_path):
    cli("dist", "hamming", toy, "-o", tmp_path / "d.tsv")
    cli("mds", "classic", tmp_path / "d.tsv", "-o", tmp_path / "s.json")
    code, _, _ = cli("plot", "map", tmp_path / "s.json", "--corpus", toy, "--color-by", "en",
                     "-o", tmp_path / "m.svg")
    assert code == 0
    assert (tmp_path / "m.svg").read_text().count("<circle") == 5


def full_pipeline(root, toy):
    steps = [
        ("synth", "swiss-roll", "--n", 120, "--seed", 3, "-o", root / "roll.tsv"),
        ("dist", "geodesic", "--k", 8, root / "roll.tsv", "-o", root / "geo.tsv"),
        ("dist", "hamming", "--missing", "differ", toy, "-o", root / "ham.tsv"),
        ("dist", "language", toy, "-o", root / "lang.tsv"),
        ("mds", "classic", root / "geo.tsv", "-o", root / "c.json"),
        ("mds", "smacof", "--init", "random", "--seed", 2, "--max-iter", 50,
         root / "ham.tsv", "-o", root / "s.json"),
        ("elbow", "--max-dims", 4, root / "geo.tsv", "-o", root / "e.tsv"),
        ("cluster", "pam", "--k", 3, root / "geo.tsv", "-o", root / "pam.tsv"),
        ("cluster", "hier", "--linkage", "complete", "--cut-k", 2, "--assignments",
         root / "cut.tsv", root / "ham.tsv", "-o", root / "tree.json"),
        ("plot", "map", root / "s.json", "--corpus", toy, "--color-by", "fr", "-o", root / "map.svg"),
        ("plot", "map", root / "c.json", "--dims", "2,1", "-o", root / "c.svg"),
        ("plot", "dendrogram", root / "tree.json", "-o", root / "tree.svg"),
        ("plot", "elbow", root / "e.tsv", "-o", root / "e.svg"),
    ]
    outs = []
    for argv in steps:
        code, out, err = cli(*argv)
        assert code == 0, (argv, err)
        outs.append(out)
    return outs


def test_reruns_are_byte_identical(toy, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    assert full_pipeline(a, toy) == full_pipeline(b, toy)
    files = sorted(p.name for p in a.iterdir())
    assert files == sorted(p.name for p in b.iterdir())
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_interpret_commands(tmp_path):
    corpus = tmp_path / "perfect.tsv"
    corpus.write_text(nested_perfect_corpus().to_tsv())
    code, out, _ = cli("interpret", "subset", corpus, "--category", "PERFECT", "-o", tmp_path / "sub.tsv")
    assert code == 0
    assert out == "subset PERFECT: chain=el < en < de < nl < es < it < fr violations=0"

    cli("dist", "hamming", "--mode", "feature", corpus, "-o", tmp_path / "d.tsv")
    cli("mds", "classic", tmp_path / "d.tsv", "-o", tmp_path / "s.json")
    ann = ["context\tearly"] + [f"c{i:02d}\t{int(i < 10)}" for i in range(40)]
    (tmp_path / "ann.tsv").write_text("\n".join(ann) + "\n")
    code, out, _ = cli("interpret", "regress", tmp_path / "s.json", "--annotations",
                       tmp_path / "ann.tsv", "-o", tmp_path / "reg.tsv")
    assert code == 0 and re.match(r"regress: top dim \d ~ early r2=", out)


def test_validation_exit_code(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("context\ten\nc0\ta\nc0\tb\n")
    code, _, err = cli("dist", "hamming", bad, "-o", tmp_path / "d.tsv")
    assert code == 1
    assert str(bad) in err
    assert not (tmp_path / "d.tsv").exists()


def test_missing_file_exit_code(tmp_path):
    assert cli("mds", "classic", tmp_path / "nope.tsv", "-o", tmp_path / "s.json")[0] == 1


def test_numeric_exit_code(tmp_path):
    pts = np.array([[0.0, 0.0], [0.0, 0.1], [50.0, 0.0], [50.0, 0.1]])
    (tmp_path / "c.tsv").write_text(PointCloud(pts).to_tsv())
    code, _, err = cli("dist", "geodesic", "--k", 1, tmp_path / "c.tsv", "-o", tmp_path / "g.tsv")
    assert code == 2 and "error:" in err


def test_unknown_flag_rejected(toy, tmp_path):
    code, _, err = cli("dist", "hamming", "--bogus", toy, "-o", tmp_path / "d.tsv")
    assert code == 1 and "bogus" in err
    assert cli("frobnicate")[0] == 1


def test_defaults_match_parser():
    ns = build_parser().parse_args(["mds", "smacof", "in.tsv", "-o", "out.json"])
    assert (ns.dims, ns.seed, ns.init, ns.max_iter, ns.eps) == (
        DEFAULTS.dims, DEFAULTS.seed, DEFAULTS.init, DEFAULTS.max_iter, DEFAULTS.eps)


def test_write_atomic_leaves_no_temp(tmp_path):
    target = tmp_path / "sub" / "x.txt"
    write_atomic(str(target), "hello\n")
    write_atomic(str(target), "again\n")
    assert target.read_text() == "again\n"
    assert [p.name for p in target.parent.iterdir()] == ["x.txt"]
