"""Input tables: binary form x function tables, parallel-corpus translation
tables and synthetic point clouds.

All text formats are UTF-8 TSV. Lines starting with ``#`` are comments, the tab
is the only delimiter and there is no quoting.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError

FEATURE_SUFFIX = ":feature"
_TRUE = {"y", "1"}
_FALSE = {"n", "0"}


class _Missing:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MISSING"

    def __reduce__(self):
        return (_Missing, ())


MISSING = _Missing()


class KeyMode(str, enum.Enum):
    LEXEME = "lexeme"
    FEATURE = "feature"


def _rows(text: str):
    """Yield (line number, cells) for every non-comment, non-blank line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        yield lineno, raw.split("\t")


def _check_unique(labels, what):
    seen = set()
    dupes = sorted({x for x in labels if x in seen or seen.add(x)})
    if dupes:
        raise ValidationError(f"duplicate {what} labels: {dupes}")


def _header_and_body(text):
    rows = list(_rows(text))
    if not rows:
        raise ParseError("empty document")
    (hline, header), body = rows[0], rows[1:]
    width = len(header)
    for lineno, cells in body:
        if len(cells) != width:
            raise ParseError(f"expected {width} cells, found {len(cells)}", lineno)
    return header, body


@dataclass(frozen=True)
class BinaryTable:
    """Items (rows) by features (columns) Y/N table."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: np.ndarray  # bool, shape (rows, cols)

    def __post_init__(self):
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        cells = np.asarray(self.cells, dtype=bool)
        if cells.shape != (len(self.row_labels), len(self.col_labels)):
            raise ValidationError(
                f"cell matrix has shape {cells.shape}, labels imply "
                f"{(len(self.row_labels), len(self.col_labels))}"
            )
        _check_unique(self.row_labels, "row")
        _check_unique(self.col_labels, "column")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    def transpose(self) -> "BinaryTable":
        return BinaryTable(self.col_labels, self.row_labels, self.cells.T.copy())

    def empty_rows(self):
        return [r for r, row in zip(self.row_labels, self.cells) if not row.any()]

    def empty_cols(self):
        return [c for c, col in zip(self.col_labels, self.cells.T) if not col.any()]

    def drop_empty(self) -> "BinaryTable":
        keep_r = self.cells.any(axis=1)
        keep_c = self.cells.any(axis=0)
        return BinaryTable(
            [r for r, k in zip(self.row_labels, keep_r) if k],
            [c for c, k in zip(self.col_labels, keep_c) if k],
            self.cells[np.ix_(keep_r, keep_c)],
        )

    def to_tsv(self, corner: str = "form") -> str:
        lines = ["\t".join([corner, *self.col_labels])]
        for label, row in zip(self.row_labels, self.cells):
            lines.append("\t".join([label, *("Y" if v else "N" for v in row)]))
        return "\n".join(lines) + "\n"


def parse_binary_table(text: str, drop_empty: bool = False) -> BinaryTable:
    """Parse a Y/N (or 1/0) TSV table; first row and column hold labels.

    All-N rows and columns trigger a warning and are removed when
    ``drop_empty`` is set.
    """
    header, body = _header_and_body(text)
    col_labels = [c.strip() for c in header[1:]]
    row_labels = []
    cells = np.zeros((len(body), len(col_labels)), dtype=bool)
    for i, (lineno, row) in enumerate(body):
        label = row[0].strip()
        row_labels.append(label)
        for j, raw in enumerate(row[1:]):
            v = raw.strip().lower()
            if v in _TRUE:
                cells[i, j] = True
            elif v not in _FALSE:
                raise ParseError(
                    f"illegal cell value {raw!r} at row {label!r}, column {col_labels[j]!r}",
                    lineno,
                )
    table = BinaryTable(row_labels, col_labels, cells)
    empty_r, empty_c = table.empty_rows(), table.empty_cols()
    if empty_r or empty_c:
        warnings.warn(f"all-N rows {empty_r} / columns {empty_c}", stacklevel=2)
        if drop_empty:
            table = table.drop_empty()
    return table


@dataclass(frozen=True)
class Cell:
    form: object = MISSING  # str or MISSING
    feature: str | None = None


@dataclass(frozen=True)
class CorpusTable:
    """Contexts x languages table of translations with optional feature labels."""

    context_ids: tuple[str, ...]
    languages: tuple[str, ...]
    cells: tuple[tuple[Cell, ...], ...]  # cells[context][language]

    def __post_init__(self):
        object.__setattr__(self, "context_ids", tuple(self.context_ids))
        object.__setattr__(self, "languages", tuple(self.languages))
        object.__setattr__(self, "cells", tuple(tuple(r) for r in self.cells))
        _check_unique(self.context_ids, "context")
        _check_unique(self.languages, "language")
        if len(self.cells) != len(self.context_ids) or any(
            len(r) != len(self.languages) for r in self.cells
        ):
            raise ValidationError("need exactly one cell per (context, language) pair")

    @classmethod
    def from_forms(cls, context_ids, languages, forms, features=None):
        """Build from nested lists; ``None`` or ``""`` forms become MISSING."""
        rows = []
        for i, frow in enumerate(forms):
            row = []
            for j, f in enumerate(frow):
                feat = features[i][j] if features is not None else None
                row.append(Cell(MISSING if f in (None, "") else f, feat or None))
            rows.append(row)
        return cls(context_ids, languages, rows)

    def has_features(self, language) -> bool:
        j = self.languages.index(language)
        return any(r[j].feature is not None for r in self.cells)

    def to_tsv(self) -> str:
        header = ["context"]
        feat_langs = {lang for lang in self.languages if self.has_features(lang)}
        for lang in self.languages:
            header.append(lang)
            if lang in feat_langs:
                header.append(lang + FEATURE_SUFFIX)
        lines = ["\t".join(header)]
        for cid, row in zip(self.context_ids, self.cells):
            out = [cid]
            for lang, cell in zip(self.languages, row):
                out.append("" if cell.form is MISSING else cell.form)
                if lang in feat_langs:
                    out.append(cell.feature or "")
            lines.append("\t".join(out))
        return "\n".join(lines) + "\n"


def parse_corpus(text: str, feature_suffix: str = FEATURE_SUFFIX) -> CorpusTable:
    """Parse a contexts x languages TSV.

    The header is ``context`` followed by language names; a column named
    ``<lang><feature_suffix>`` carries feature labels for that language. Empty
    form cells are recorded as MISSING.
    """
    header, body = _header_and_body(text)
    header = [h.strip() for h in header]
    languages, form_col, feat_col = [], {}, {}
    for j, name in enumerate(header[1:], start=1):
        if feature_suffix and name.endswith(feature_suffix):
            feat_col[name[: -len(feature_suffix)]] = j
        else:
            languages.append(name)
            form_col[name] = j
    _check_unique(languages, "language")
    orphans = sorted(set(feat_col) - set(form_col))
    if orphans:
        raise ValidationError(f"feature columns without a language column: {orphans}")

    context_ids, rows = [], []
    for lineno, cells in body:
        context_ids.append(cells[0].strip())
        row = []
        for lang in languages:
            form = cells[form_col[lang]].strip()
            feat = cells[feat_col[lang]].strip() if lang in feat_col else ""
            row.append(Cell(form if form else MISSING, feat or None))
        rows.append(row)
    return CorpusTable(context_ids, languages, rows)


@dataclass(frozen=True)
class TokenTable:
    """Comparison tokens per (context, language); MISSING where no translation."""

    context_ids: tuple[str, ...]
    languages: tuple[str, ...]
    tokens: tuple[tuple[object, ...], ...]
    mode: KeyMode = KeyMode.LEXEME

    def column(self, language):
        j = self.languages.index(language)
        return [row[j] for row in self.tokens]

    def codes(self) -> np.ndarray:
        """Integer-encode tokens per language column; MISSING becomes -1."""
        out = np.full((len(self.context_ids), len(self.languages)), -1, dtype=np.int64)
        for j in range(len(self.languages)):
            seen = {}
            for i, row in enumerate(self.tokens):
                tok = row[j]
                if tok is not MISSING:
                    out[i, j] = seen.setdefault(tok, len(seen))
        return out


def _normalize(form: str) -> str:
    return " ".join(form.split()).casefold()


def comparison_key(table: CorpusTable, mode: KeyMode | str = KeyMode.LEXEME) -> TokenTable:
    """Map each cell to the token used for equality tests.

    LEXEME compares case-folded, whitespace-trimmed forms; FEATURE compares the
    annotated feature label and never looks at the form text.
    """
    mode = KeyMode(mode)
    rows = []
    unannotated = []
    for cid, row in zip(table.context_ids, table.cells):
        out = []
        for lang, cell in zip(table.languages, row):
            if cell.form is MISSING:
                out.append(MISSING)
            elif mode is KeyMode.LEXEME:
                out.append(_normalize(cell.form))
            elif cell.feature is None:
                unannotated.append((cid, lang))
                out.append(MISSING)
            else:
                out.append(cell.feature.strip())
        rows.append(tuple(out))
    if unannotated:
        shown = ", ".join(f"({c}, {lang})" for c, lang in unannotated[:20])
        more = "" if len(unannotated) <= 20 else f" and {len(unannotated) - 20} more"
        raise ValidationError(f"FEATURE mode needs a feature label on {shown}{more}")
    return TokenTable(table.context_ids, table.languages, tuple(rows), mode)


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray  # (n, dim)
    intrinsic: np.ndarray | None = None  # (n, p)
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValidationError("point cloud must be a nonempty 2-D array")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("point cloud contains non-finite coordinates")
        object.__setattr__(self, "points", pts)
        if self.intrinsic is not None:
            intr = np.asarray(self.intrinsic, dtype=np.float64)
            if intr.ndim == 1:
                intr = intr[:, None]
            if intr.shape[0] != pts.shape[0]:
                raise ValidationError("intrinsic parameters need one row per point")
            object.__setattr__(self, "intrinsic", intr)
        labels = tuple(self.labels) or tuple(f"p{i}" for i in range(pts.shape[0]))
        if len(labels) != pts.shape[0]:
            raise ValidationError("need one label per point")
        _check_unique(labels, "point")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self):
        return self.points.shape[0]

    def to_tsv(self) -> str:
        dim = self.points.shape[1]
        header = ["point", *(f"x{i + 1}" for i in range(dim))]
        p = 0 if self.intrinsic is None else self.intrinsic.shape[1]
        header += [f"intrinsic{i + 1}" for i in range(p)]
        lines = ["\t".join(header)]
        for i, label in enumerate(self.labels):
            vals = list(self.points[i])
            if p:
                vals += list(self.intrinsic[i])
            lines.append("\t".join([label, *(repr(float(v)) for v in vals)]))
        return "\n".join(lines) + "\n"


def parse_point_cloud(text: str) -> PointCloud:
    header, body = _header_and_body(text)
    header = [h.strip() for h in header]
    coord_idx = [j for j, h in enumerate(header) if j > 0 and not h.startswith("intrinsic")]
    intr_idx = [j for j, h in enumerate(header) if h.startswith("intrinsic")]
    labels, pts, intr = [], [], []
    for lineno, cells in body:
        labels.append(cells[0].strip())
        try:
            pts.append([float(cells[j]) for j in coord_idx])
            intr.append([float(cells[j]) for j in intr_idx])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return PointCloud(
        np.array(pts, dtype=np.float64).reshape(len(labels), len(coord_idx)),
        np.array(intr) if intr_idx else None,
        labels,
    )


def swiss_roll(n: int, noise_sd: float = 0.0, seed: int = 0) -> PointCloud:
    """Sample the Swiss roll ``(t cos t, y, t sin t)``.

    ``t`` is uniform on [1.5 pi, 4.5 pi] and ``y`` uniform on [0, 21]; the
    intrinsic parameters ``(t, y)`` are kept alongside the 3-D points.
    """
    if n < 10:
        raise ValidationError(f"swiss roll needs at least 10 points, got {n}")
    if noise_sd < 0:
        raise ValidationError("noise_sd must be non-negative")
    rng = np.random.default_rng(seed)
    t = 1.5 * np.pi * (1.0 + 2.0 * rng.random(n))
    y = 21.0 * rng.random(n)
    pts = np.column_stack([t * np.cos(t), y, t * np.sin(t)])
    if noise_sd > 0:
        pts = pts + noise_sd * rng.standard_normal(pts.shape)
    return PointCloud(pts, np.column_stack([t, y]))


def roll_arc_length(t):
    """Arc length of the spiral ``(t cos t, t sin t)`` from 0 to ``t``."""
    t = np.asarray(t, dtype=np.float64)
    return 0.5 * (t * np.sqrt(1.0 + t * t) + np.arcsinh(t))


def unroll_swiss_roll(cloud: PointCloud) -> np.ndarray:
    """Flat-sheet coordinates ``(arc length, y)`` of a noise-free Swiss roll."""
    if cloud.intrinsic is None or cloud.intrinsic.shape[1] != 2:
        raise ValidationError("cloud carries no (t, y) intrinsic parameters")
    t, y = cloud.intrinsic[:, 0], cloud.intrinsic[:, 1]
    return np.column_stack([roll_arc_length(t), y])


def gaussian_blobs(n, centers, scale=1.0, seed=0) -> PointCloud:
    """Isotropic Gaussian blobs around ``centers``; the intrinsic column is the blob index."""
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    rng = np.random.default_rng(seed)
    which = np.arange(n) % len(centers)
    pts = centers[which] + scale * rng.standard_normal((n, centers.shape[1]))
    return PointCloud(pts, which.astype(np.float64))
