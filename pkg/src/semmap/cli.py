"""Command-line pipeline: synth -> dist -> mds/elbow -> cluster/interpret -> plot.

Every subcommand reads and writes files only. Outputs are written atomically
and are byte-identical across reruns on the same inputs.

Exit codes: 0 success, 1 validation error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass, fields
from pathlib import Path

from . import cluster as cl
from . import corpus, dissim, interpret, mds, plot
from .errors import NumericError, SemmapError, ValidationError


@dataclass
class PipelineConfig:
    command: str = ""
    action: str = ""
    input: str | None = None
    output: str | None = None
    # synth
    n: int = 800
    noise: float = 0.0
    # dist
    mode: str = "lexeme"
    missing: str = "delete"
    weights: str | None = None
    k: int = 10
    transpose: bool = False
    # mds / elbow
    dims: int = 2
    seed: int = 0
    init: str = "classic"
    max_iter: int = 300
    eps: float = 1e-9
    max_dims: int = 6
    engine: str = "classic"
    # cluster
    linkage: str = "average"
    cut_k: int | None = None
    assignments: str | None = None
    # interpret
    annotations: str | None = None
    category: str | None = None
    # plot
    corpus: str | None = None
    color_by: str | None = None
    plot_dims: str | None = None
    width: int | None = None
    height: int | None = None

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in vars(ns).items() if k in known})


DEFAULTS = PipelineConfig()


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def write_atomic(path: str, text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load(path, parse, *args):
    """Read and parse ``path``, naming the file in any validation error."""
    try:
        return parse(_read(path), *args)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def _load_delta(path) -> dissim.DissimilarityMatrix:
    return _load(path, dissim.DissimilarityMatrix.from_tsv)


def _load_solution(path) -> mds.MdsSolution:
    return _load(path, mds.MdsSolution.from_json)


def _size(cfg, w, h):
    return {"width": cfg.width or w, "height": cfg.height or h}


def cmd_synth(cfg: PipelineConfig) -> str:
    cloud = corpus.swiss_roll(cfg.n, cfg.noise, cfg.seed)
    write_atomic(cfg.output, cloud.to_tsv())
    return f"synth swiss-roll: n={cloud.n} noise={cfg.noise} seed={cfg.seed}"


def cmd_dist(cfg: PipelineConfig) -> str:
    if cfg.action == "hamming":
        table = _load(cfg.input, corpus.parse_corpus)
        weights = None
        if cfg.weights:
            weights = _load(cfg.weights, dissim.FeatureWeights.from_tsv, table.languages)
        delta = dissim.context_distances(table, cfg.mode, weights, cfg.missing)
    elif cfg.action == "coexpr":
        table = _load(cfg.input, corpus.parse_binary_table)
        if cfg.transpose:
            table = table.transpose()
        delta = dissim.coexpression_distances(table)
    elif cfg.action == "language":
        delta = dissim.language_distances(_load(cfg.input, corpus.parse_corpus), cfg.mode)
    else:
        delta = dissim.geodesic_distances(_load(cfg.input, corpus.parse_point_cloud), cfg.k)
    write_atomic(cfg.output, delta.to_tsv())
    return f"dist {cfg.action}: n={delta.n}"


def cmd_mds(cfg: PipelineConfig) -> str:
    delta = _load_delta(cfg.input)
    if cfg.action == "classic":
        sol = mds.classic_scale(delta, cfg.dims)
        extra = f" negative_mass={sol.negative_eigenvalue_mass:.6g}"
    else:
        sol = mds.smacof(delta, cfg.dims, init=cfg.init, seed=cfg.seed,
                         max_iter=cfg.max_iter, eps=cfg.eps)
        extra = f" iterations={sol.iterations} converged={sol.converged}"
    write_atomic(cfg.output, sol.to_json())
    return f"mds {cfg.action}: n={len(sol.labels)} dims={sol.dims} stress={sol.stress:.6g}{extra}"


def cmd_elbow(cfg: PipelineConfig) -> str:
    scan = mds.elbow_scan(_load_delta(cfg.input), cfg.max_dims, cfg.engine)
    if cfg.output:
        write_atomic(cfg.output, scan.to_tsv())
    return f"elbow={scan.elbow}"


def cmd_cluster(cfg: PipelineConfig) -> str:
    delta = _load_delta(cfg.input)
    if cfg.action == "pam":
        res = cl.pam(delta, cfg.k, seed=cfg.seed)
        write_atomic(cfg.output, res.to_tsv(delta.labels))
        summary = f"pam: k={cfg.k} cost={res.cost:.6g}"
    else:
        dendro = cl.agglomerative(delta, cfg.linkage)
        write_atomic(cfg.output, dendro.to_json())
        summary = f"hier {cfg.linkage}: merges={len(dendro.merges)}"
        if cfg.cut_k is None:
            return summary
        res = cl.cut(dendro, cfg.cut_k)
        if cfg.assignments:
            write_atomic(cfg.assignments, res.to_tsv(delta.labels))
        summary += f" k={cfg.cut_k}"
    if 2 <= res.k < delta.n:
        _, mean = cl.silhouette(delta, res.assignment)
        summary += f" silhouette={mean:.4f}"
    return summary


def cmd_interpret(cfg: PipelineConfig) -> str:
    if cfg.action == "regress":
        sol = _load_solution(cfg.input)
        ids, ann = _load(cfg.annotations, interpret.parse_annotations)
        report = interpret.dimension_regression(sol, ann, ids)
        write_atomic(cfg.output, report.to_tsv())
        top = report.rows[0]
        return f"regress: top dim {top.dimension} ~ {top.variable} r2={top.r2:.4f}"
    table = _load(cfg.input, corpus.parse_corpus)
    report = interpret.subset_report(table, cfg.category, cfg.mode or "feature")
    write_atomic(cfg.output, report.to_tsv())
    return f"subset {cfg.category}: chain={' < '.join(report.chain)} violations={sum(report.violations)}"


def _parse_dims(text):
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--dims expects 'I,J', got {text!r}") from None
    return i, j


def cmd_plot(cfg: PipelineConfig) -> str:
    if cfg.action == "map":
        sol = _load_solution(cfg.input)
        layer = None
        if cfg.color_by:
            if not cfg.corpus:
                raise UsageError("--color-by needs --corpus")
            table = _load(cfg.corpus, corpus.parse_corpus)
            layers = {ly.language: ly for ly in interpret.color_layers(sol, table, cfg.mode)}
            if cfg.color_by not in layers:
                raise ValidationError(f"unknown language {cfg.color_by!r}; have {sorted(layers)}")
            layer = layers[cfg.color_by]
        dims = _parse_dims(cfg.plot_dims) if cfg.plot_dims else None
        svg = plot.plot_map(sol, layer, dims, **_size(cfg, 640, 480))
        summary = f"plot map: points={len(sol.labels)}"
    elif cfg.action == "dendrogram":
        dendro = _load(cfg.input, cl.Dendrogram.from_json)
        svg = plot.plot_dendrogram(dendro, **_size(cfg, 640, 400))
        summary = f"plot dendrogram: leaves={dendro.leaves}"
    else:
        scan = _load(cfg.input, mds.ElbowScan.from_tsv)
        svg = plot.plot_elbow(scan, **_size(cfg, 480, 320))
        summary = f"plot elbow: elbow={scan.elbow}"
    write_atomic(cfg.output, svg)
    return summary


def build_parser() -> argparse.ArgumentParser:
    d = DEFAULTS
    p = _Parser(prog="semmap", description="Semantic maps through multidimensional scaling.")
    sub = p.add_subparsers(dest="command", required=True)

    def leaf(group, name, help_, inp=True, out=True):
        q = group.add_parser(name, help=help_)
        if inp:
            q.add_argument("input")
        if out:
            q.add_argument("-o", "--output", required=True)
        return q

    synth = sub.add_parser("synth", help="generate synthetic data").add_subparsers(
        dest="action", required=True)
    q = leaf(synth, "swiss-roll", "sample a Swiss roll point cloud", inp=False)
    q.add_argument("--n", type=int, default=d.n)
    q.add_argument("--noise", type=float, default=d.noise)
    q.add_argument("--seed", type=int, default=d.seed)

    dist = sub.add_parser("dist", help="build a dissimilarity matrix").add_subparsers(
        dest="action", required=True)
    for name, help_ in [("hamming", "context distances from a corpus table"),
                        ("language", "language distances from a corpus table")]:
        q = leaf(dist, name, help_)
        q.add_argument("--mode", choices=["lexeme", "feature"], default=d.mode)
        if name == "hamming":
            q.add_argument("--missing", choices=["delete", "differ"], default=d.missing)
            q.add_argument("--weights", default=d.weights)
    q = leaf(dist, "coexpr", "function distances from a Y/N table")
    q.add_argument("--transpose", action="store_true")
    q = leaf(dist, "geodesic", "shortest-path distances over a k-NN graph")
    q.add_argument("--k", type=int, default=d.k)

    scale = sub.add_parser("mds", help="multidimensional scaling").add_subparsers(
        dest="action", required=True)
    q = leaf(scale, "classic", "Torgerson scaling")
    q.add_argument("--dims", type=int, default=d.dims)
    q = leaf(scale, "smacof", "stress majorization")
    q.add_argument("--dims", type=int, default=d.dims)
    q.add_argument("--seed", type=int, default=d.seed)
    q.add_argument("--init", choices=["random", "classic"], default=d.init)
    q.add_argument("--max-iter", type=int, default=d.max_iter)
    q.add_argument("--eps", type=float, default=d.eps)

    q = sub.add_parser("elbow", help="stress by dimensionality")
    q.add_argument("input")
    q.add_argument("-o", "--output")
    q.add_argument("--max-dims", type=int, default=d.max_dims)
    q.add_argument("--engine", choices=["classic", "smacof"], default=d.engine)

    clus = sub.add_parser("cluster", help="cluster a dissimilarity matrix").add_subparsers(
        dest="action", required=True)
    q = leaf(clus, "pam", "k-medoids (PAM)")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--seed", type=int, default=d.seed)
    q = leaf(clus, "hier", "agglomerative clustering")
    q.add_argument("--linkage", choices=["single", "complete", "average"], default=d.linkage)
    q.add_argument("--cut-k", type=int, default=d.cut_k)
    q.add_argument("--assignments", default=d.assignments)

    interp = sub.add_parser("interpret", help="interpretation reports").add_subparsers(
        dest="action", required=True)
    q = leaf(interp, "regress", "regress 0/1 annotations on dimensions")
    q.add_argument("--annotations", required=True)
    q = leaf(interp, "subset", "subset relations for a category")
    q.add_argument("--category", required=True)
    q.add_argument("--mode", choices=["lexeme", "feature"], default=None)

    plt = sub.add_parser("plot", help="SVG output").add_subparsers(dest="action", required=True)
    q = leaf(plt, "map", "scatter map of a solution")
    q.add_argument("--corpus", default=d.corpus)
    q.add_argument("--color-by", default=d.color_by)
    q.add_argument("--mode", choices=["lexeme", "feature"], default=d.mode)
    q.add_argument("--dims", dest="plot_dims", default=d.plot_dims)
    q.add_argument("--width", type=int, default=d.width)
    q.add_argument("--height", type=int, default=d.height)
    for name in ("dendrogram", "elbow"):
        q = leaf(plt, name, f"{name} plot")
        q.add_argument("--width", type=int, default=d.width)
        q.add_argument("--height", type=int, default=d.height)
    return p


COMMANDS = {
    "synth": cmd_synth,
    "dist": cmd_dist,
    "mds": cmd_mds,
    "elbow": cmd_elbow,
    "cluster": cmd_cluster,
    "interpret": cmd_interpret,
    "plot": cmd_plot,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
        cfg = PipelineConfig.from_namespace(ns)
        summary = COMMANDS[cfg.command](cfg)
    except NumericError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (SemmapError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    print(summary, file=stdout)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
