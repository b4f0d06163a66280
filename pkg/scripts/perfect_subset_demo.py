"""Nested PERFECT/PAST corpus: subset chain, map and per-language colorings.

Builds seven languages whose PERFECT contexts are nested sets, optionally
moves a few contexts out of line, and writes the subset report plus one map
per language coloring to the output directory.
"""

import argparse
from pathlib import Path

import numpy as np

from semmap import CorpusTable, classic_scale, color_layers, context_distances, subset_report
from semmap.plot import plot_map

LANGS = ("el", "en", "de", "nl", "es", "it", "fr")


def build(sizes, n_contexts, crossing, seed):
    rng = np.random.default_rng(seed)
    ids = [f"c{i:02d}" for i in range(n_contexts)]
    forms = [[f"w{i}_{lang}" for lang in LANGS] for i in range(n_contexts)]
    feats = [["PERFECT" if i < s else "PAST" for s in sizes] for i in range(n_contexts)]
    # flip contexts just beyond the smallest set to PERFECT in the smallest language
    for i in rng.choice(np.arange(sizes[1], sizes[-1]), size=crossing, replace=False):
        feats[i][0] = "PERFECT"
    return CorpusTable.from_forms(ids, LANGS, forms, feats)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--contexts", type=int, default=40)
    ap.add_argument("--crossing", type=int, default=0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("perfect_out"))
    args = ap.parse_args()

    table = build((10, 14, 18, 22, 26, 30, 34), args.contexts, args.crossing, args.seed)
    report = subset_report(table, "PERFECT")
    print("chain:", " < ".join(report.chain))
    print("violations per link:", report.violations)

    sol = classic_scale(context_distances(table, "feature"), 2)
    print(f"2-D stress {sol.stress:.4f}")
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "subset.tsv").write_text(report.to_tsv())
    for layer in color_layers(sol, table, "feature"):
        (args.out / f"map_{layer.language}.svg").write_text(plot_map(sol, layer))


if __name__ == "__main__":
    main()
