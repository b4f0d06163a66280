"""Readings of MDS solutions: per-language map colorings, regression of binary
annotations on dimensions and subset relations between category uses."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import MISSING, CorpusTable, KeyMode, _header_and_body, comparison_key
from .errors import ParseError, ValidationError

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
    "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#000080", "#ffd700",
)
SHAPES = ("circle", "square", "triangle", "diamond")
MISSING_LABEL = "MISSING"


def _label(token) -> str:
    return MISSING_LABEL if token is MISSING else str(token)


def make_palette(labels) -> dict[str, tuple[str, str]]:
    """Deterministic label -> (color, shape); MISSING sorts last and shapes
    change every 12 labels."""
    ordered = sorted(set(labels), key=lambda x: (x == MISSING_LABEL, x))
    return {
        lab: (PALETTE[i % len(PALETTE)], SHAPES[(i // len(PALETTE)) % len(SHAPES)])
        for i, lab in enumerate(ordered)
    }


@dataclass(frozen=True)
class ColoringLayer:
    language: str
    labels: tuple[str, ...]  # one per point, in solution order
    palette: dict

    def color(self, i: int) -> str:
        return self.palette[self.labels[i]][0]

    def shape(self, i: int) -> str:
        return self.palette[self.labels[i]][1]


def _align(solution_labels, context_ids):
    sol, ctx = set(solution_labels), set(context_ids)
    if sol != ctx or len(solution_labels) != len(context_ids):
        diff = sorted(sol ^ ctx)
        raise ValidationError(f"solution and table labels differ: {diff}")
    pos = {c: i for i, c in enumerate(context_ids)}
    return [pos[label] for label in solution_labels]


def color_layers(solution, table: CorpusTable,
                 mode: KeyMode | str = KeyMode.LEXEME) -> list[ColoringLayer]:
    """One layer per language, labelling each point with that language's token.

    All layers share one palette so a label keeps its color across languages.
    """
    tokens = comparison_key(table, mode)
    rows = _align(solution.labels, table.context_ids)
    per_lang = []
    for j, lang in enumerate(table.languages):
        per_lang.append((lang, tuple(_label(tokens.tokens[r][j]) for r in rows)))
    palette = make_palette(lab for _, labs in per_lang for lab in labs)
    return [ColoringLayer(lang, labs, palette) for lang, labs in per_lang]


@dataclass(frozen=True)
class RegressionRow:
    dimension: int  # 1-based
    variable: str
    slope: float
    intercept: float
    r2: float
    t: float


@dataclass(frozen=True)
class DimensionReport:
    rows: tuple[RegressionRow, ...]
    n: int

    def best(self, variable: str) -> RegressionRow:
        return next(r for r in self.rows if r.variable == variable)

    def get(self, dimension: int, variable: str) -> RegressionRow:
        return next(r for r in self.rows if r.dimension == dimension and r.variable == variable)

    def to_tsv(self) -> str:
        lines = ["dimension\tvariable\tslope\tintercept\tr2\tt\tn"]
        for r in self.rows:
            lines.append(
                f"{r.dimension}\t{r.variable}\t{r.slope!r}\t{r.intercept!r}\t{r.r2!r}\t{r.t!r}\t{self.n}"
            )
        return "\n".join(lines) + "\n"


def parse_annotations(text: str) -> tuple[list[str], dict[str, np.ndarray]]:
    """TSV with a ``context`` column followed by 0/1 variable columns."""
    header, body = _header_and_body(text)
    names = [h.strip() for h in header[1:]]
    ids, values = [], []
    for lineno, cells in body:
        ids.append(cells[0].strip())
        row = []
        for name, raw in zip(names, cells[1:]):
            v = raw.strip()
            if v not in ("0", "1"):
                raise ParseError(f"annotation {name!r} must be 0 or 1, got {raw!r}", lineno)
            row.append(int(v))
        values.append(row)
    arr = np.array(values, dtype=np.float64).reshape(len(ids), len(names))
    return ids, {name: arr[:, j] for j, name in enumerate(names)}


def _ols(y, x):
    n = len(y)
    xm, ym = x.mean(), y.mean()
    sxx = ((x - xm) ** 2).sum()
    sxy = ((x - xm) * (y - ym)).sum()
    syy = ((y - ym) ** 2).sum()
    slope = sxy / sxx
    intercept = ym - slope * xm
    r2 = 0.0 if syy == 0 else min(1.0, sxy * sxy / (sxx * syy))
    resid = max(syy - slope * sxy, 0.0)
    if n > 2 and resid > 0:
        t = slope / np.sqrt(resid / (n - 2) / sxx)
    else:
        t = np.inf if slope != 0 else 0.0
    return float(slope), float(intercept), float(r2), float(t)


def dimension_regression(solution, annotations: dict, ids=None) -> DimensionReport:
    """Simple OLS of each coordinate (response) on each 0/1 annotation.

    ``annotations`` maps variable names to per-point 0/1 vectors in solution
    order, or in the order of ``ids`` when given. Rows are sorted by R²,
    highest first.
    """
    coords = np.asarray(solution.coords, dtype=np.float64)
    n = coords.shape[0]
    order = None if ids is None else _align(solution.labels, list(ids))
    rows = []
    for name, values in annotations.items():
        x = np.asarray(values, dtype=np.float64)
        if order is not None:
            x = x[order]
        if len(x) != n:
            raise ValidationError(f"annotation {name!r} has {len(x)} values for {n} points")
        if not np.all((x == 0) | (x == 1)):
            raise ValidationError(f"annotation {name!r} must be 0/1")
        if x.min() == x.max():
            raise ValidationError(f"annotation {name!r} is constant; correlation undefined")
        for dim in range(coords.shape[1]):
            rows.append(RegressionRow(dim + 1, name, *_ols(coords[:, dim], x)))
    rows.sort(key=lambda r: -r.r2)
    return DimensionReport(tuple(rows), n)


@dataclass(frozen=True)
class SubsetReport:
    category: str
    sets: dict  # language -> frozenset of context ids
    pairs: tuple  # (l1, l2, |S1|, |S2|, |S1 - S2|, containment)
    chain: tuple[str, ...]
    violations: tuple[int, ...]  # per consecutive chain link

    def link(self, smaller: str, larger: str) -> int:
        i = self.chain.index(smaller)
        if i + 1 >= len(self.chain) or self.chain[i + 1] != larger:
            raise KeyError(f"{smaller} -> {larger} is not a chain link")
        return self.violations[i]

    def to_tsv(self) -> str:
        lines = [f"# category\t{self.category}", "l1\tl2\tsize1\tsize2\tonly1\tcontainment"]
        for l1, l2, s1, s2, only, ratio in self.pairs:
            lines.append(f"{l1}\t{l2}\t{s1}\t{s2}\t{only}\t{ratio!r}")
        lines.append("# chain")
        lines.append("position\tlanguage\tsize\tviolations_to_next")
        for i, lang in enumerate(self.chain):
            v = self.violations[i] if i < len(self.violations) else ""
            lines.append(f"{i + 1}\t{lang}\t{len(self.sets[lang])}\t{v}")
        return "\n".join(lines) + "\n"


def subset_report(table: CorpusTable, category: str,
                  mode: KeyMode | str = KeyMode.FEATURE) -> SubsetReport:
    """Compare, across languages, the context sets where ``category`` is used.

    The chain lists languages by increasing set size (table order on ties);
    each link counts contexts of the smaller set missing from the larger one.
    """
    tokens = comparison_key(table, mode)
    sets = {}
    for j, lang in enumerate(table.languages):
        s = frozenset(c for c, row in zip(table.context_ids, tokens.tokens) if row[j] == category)
        if s:
            sets[lang] = s
    if not sets:
        raise ValidationError(f"category {category!r} does not occur in any language")
    langs = list(sets)
    pairs = []
    for a in langs:
        for b in langs:
            if a == b:
                continue
            sa, sb = sets[a], sets[b]
            pairs.append((a, b, len(sa), len(sb), len(sa - sb), len(sa & sb) / len(sa)))
    chain = tuple(sorted(langs, key=lambda lang: len(sets[lang])))
    violations = tuple(len(sets[a] - sets[b]) for a, b in zip(chain, chain[1:]))
    return SubsetReport(category, sets, tuple(pairs), chain, violations)
