"""Classic (Torgerson) scaling, SMACOF stress majorization and stress diagnostics."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .dissim import DissimilarityMatrix, euclidean_distances
from .errors import DegenerateInputError, ShapeError, ValidationError
from .linalg import EigenResult, double_center, sym_eigen

ELBOW_THRESHOLD = 0.05
# eigenvalues below this fraction of the spectrum's largest magnitude count as zero
EIGEN_RTOL = 1e-12


class Engine(str, enum.Enum):
    CLASSIC = "classic"
    SMACOF = "smacof"


@dataclass
class MdsSolution:
    labels: tuple[str, ...]
    coords: np.ndarray
    stress: float
    engine: Engine
    eigenvalues: np.ndarray | None = None
    negative_eigenvalue_mass: float | None = None
    iterations: int = 0
    converged: bool = True
    degenerate: bool = False
    stress_history: list[float] = field(default_factory=list)

    @property
    def dims(self) -> int:
        return self.coords.shape[1]

    def eigenvalue_share(self, i: int) -> float | None:
        """Fraction of the positive spectrum carried by dimension ``i`` (0-based)."""
        if self.eigenvalues is None or not len(self.eigenvalues):
            return None
        pos = self.eigenvalues[self.eigenvalues > 0].sum()
        if pos <= 0 or i >= len(self.eigenvalues):
            return None
        return float(max(self.eigenvalues[i], 0.0) / pos)

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "coords": [[float(v) for v in row] for row in self.coords],
            "eigenvalues": None if self.eigenvalues is None
            else [float(v) for v in self.eigenvalues],
            "negative_eigenvalue_mass": self.negative_eigenvalue_mass,
            "stress": float(self.stress),
            "engine": self.engine.value,
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "degenerate": bool(self.degenerate),
            "stress_history": [float(v) for v in self.stress_history],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "MdsSolution":
        try:
            labels = tuple(doc["labels"])
            coords = np.array(doc["coords"], dtype=np.float64).reshape(len(labels), -1)
            eig = doc.get("eigenvalues")
            return cls(
                labels=labels,
                coords=coords,
                stress=float(doc["stress"]),
                engine=Engine(doc["engine"]),
                eigenvalues=None if eig is None else np.array(eig, dtype=np.float64),
                negative_eigenvalue_mass=doc.get("negative_eigenvalue_mass"),
                iterations=int(doc.get("iterations", 0)),
                converged=bool(doc.get("converged", True)),
                degenerate=bool(doc.get("degenerate", False)),
                stress_history=list(doc.get("stress_history", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed MDS solution document: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "MdsSolution":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)


def _as_delta(delta) -> np.ndarray:
    return np.asarray(getattr(delta, "d", delta), dtype=np.float64)


def _check_coords(d, coords):
    x = np.asarray(coords, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] != d.shape[0]:
        raise ShapeError(f"coords of shape {x.shape} do not fit {d.shape[0]} points")
    return x


def kruskal_stress(delta, coords) -> float:
    """Stress-1: sqrt(sum (d_ij(X) - delta_ij)^2 / sum delta_ij^2) over i < j."""
    d = _as_delta(delta)
    x = _check_coords(d, coords)
    dx = euclidean_distances(x)
    iu = np.triu_indices(d.shape[0], 1)
    num = float(((dx[iu] - d[iu]) ** 2).sum())
    den = float((d[iu] ** 2).sum())
    if den == 0.0:
        if num == 0.0:
            return 0.0
        raise DegenerateInputError("stress is undefined for all-zero dissimilarities")
    return float(np.sqrt(num / den))


def per_point_stress(delta, coords) -> np.ndarray:
    """Stress-1 restricted to the pairs involving each point."""
    d = _as_delta(delta)
    x = _check_coords(d, coords)
    dx = euclidean_distances(x)
    num = ((dx - d) ** 2).sum(axis=1)
    den = (d ** 2).sum(axis=1)
    bad = (den == 0) & (num > 0)
    if bad.any():
        raise DegenerateInputError(
            f"point stress undefined for points {np.flatnonzero(bad).tolist()} "
            "(all their dissimilarities are zero)"
        )
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, np.sqrt(num / np.where(den > 0, den, 1.0)), 0.0)


def stress_outliers(delta, coords, labels=None) -> list[tuple[str, float]]:
    """Points sorted by decreasing per-point stress."""
    scores = per_point_stress(delta, coords)
    if labels is None:
        labels = getattr(delta, "labels", None) or [str(i) for i in range(len(scores))]
    order = np.argsort(-scores, kind="stable")
    return [(labels[i], float(scores[i])) for i in order]


def _labels(delta, n):
    return tuple(getattr(delta, "labels", ())) or tuple(str(i) for i in range(n))


def _spectrum(delta) -> EigenResult:
    return sym_eigen(double_center(delta))


def _zero_tol(values) -> float:
    return EIGEN_RTOL * float(np.abs(values).max(initial=0.0))


def negative_mass(values) -> float:
    tol = _zero_tol(values)
    mag = np.where(np.abs(values) > tol, np.abs(values), 0.0)
    total = mag.sum()
    if total == 0:
        return 0.0
    return float(mag[values < -tol].sum() / total)


def _classic_from_spectrum(delta, eig: EigenResult, dims: int) -> MdsSolution:
    d = _as_delta(delta)
    n = d.shape[0]
    if dims < 1 or dims > max(n - 1, 1):
        raise ValidationError(f"dims must be between 1 and n-1={n - 1}, got {dims}")
    vals = eig.eigenvalues
    tol = _zero_tol(vals)
    chosen = vals[:dims]
    positive = chosen > tol
    if not positive.any() and np.any(d != 0):
        raise DegenerateInputError(
            f"none of the {dims} leading eigenvalues is positive: {chosen.tolist()}"
        )
    scale = np.where(positive, np.sqrt(np.where(positive, chosen, 0.0)), 0.0)
    coords = eig.eigenvectors[:, :dims] * scale
    coords = coords - coords.mean(axis=0)
    return MdsSolution(
        labels=_labels(delta, n),
        coords=coords,
        stress=kruskal_stress(d, coords),
        engine=Engine.CLASSIC,
        eigenvalues=vals.copy(),
        negative_eigenvalue_mass=negative_mass(vals),
        degenerate=not positive.all(),
    )


def classic_scale(delta: DissimilarityMatrix, dims: int = 2) -> MdsSolution:
    """Torgerson scaling: double-centre the squared dissimilarities, keep the top
    ``dims`` eigenvectors scaled by the square roots of their eigenvalues.

    Non-positive eigenvalues among the selected ones give all-zero columns and
    set ``degenerate``; they are never clamped silently.
    """
    return _classic_from_spectrum(delta, _spectrum(delta), dims)


def _raw_stress(d, dx, iu):
    return float(((dx[iu] - d[iu]) ** 2).sum())


def guttman_transform(d, x, dx=None):
    """One majorization step ``(1/n) B(X) X``; pairs at distance 0 contribute nothing."""
    n = d.shape[0]
    if dx is None:
        dx = euclidean_distances(x)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(dx > 0, d / np.where(dx > 0, dx, 1.0), 0.0)
    b = -ratio
    np.fill_diagonal(b, 0.0)
    np.fill_diagonal(b, -b.sum(axis=1))
    return (b @ x) / n


def smacof(delta: DissimilarityMatrix, dims: int = 2, init="classic", seed: int = 0,
           max_iter: int = 300, eps: float = 1e-9) -> MdsSolution:
    """Metric MDS by iterated Guttman transforms (unweighted SMACOF).

    ``init`` is ``"classic"``, ``"random"`` (seeded standard normal) or an
    ``(n, dims)`` array. Stops when the relative decrease of raw stress falls
    below ``eps`` or after ``max_iter`` updates; ``eps=0`` runs to
    ``max_iter`` unless stress rises. ``stress_history`` holds
    Stress-1 of the starting configuration followed by one value per update.
    """
    d = _as_delta(delta)
    n = d.shape[0]
    if dims < 1 or dims > max(n - 1, 1):
        raise ValidationError(f"dims must be between 1 and n-1={n - 1}, got {dims}")
    if max_iter < 1:
        raise ValidationError("max_iter must be at least 1")
    if eps < 0:
        raise ValidationError("eps must be non-negative")

    if isinstance(init, str):
        if init == "classic":
            x = classic_scale(delta, dims).coords.copy()
        elif init == "random":
            x = np.random.default_rng(seed).standard_normal((n, dims))
        else:
            raise ValidationError(f"unknown init {init!r}")
    else:
        x = np.array(init, dtype=np.float64)
        if x.shape != (n, dims):
            raise ShapeError(f"initial configuration has shape {x.shape}, expected {(n, dims)}")
    x = x - x.mean(axis=0)

    iu = np.triu_indices(n, 1)
    norm = float((d[iu] ** 2).sum())
    dx = euclidean_distances(x)
    raw = _raw_stress(d, dx, iu)

    def stress1(r):
        return float(np.sqrt(r / norm)) if norm > 0 else 0.0

    history = [stress1(raw)]
    converged = raw == 0.0
    it = 0
    while not converged and it < max_iter:
        x = guttman_transform(d, x, dx)
        dx = euclidean_distances(x)
        new = _raw_stress(d, dx, iu)
        it += 1
        history.append(stress1(new))
        converged = new == 0.0 or (raw - new) / raw < eps
        raw = new

    x = x - x.mean(axis=0)
    return MdsSolution(
        labels=_labels(delta, n),
        coords=x,
        stress=kruskal_stress(d, x),
        engine=Engine.SMACOF,
        iterations=it,
        converged=converged,
        stress_history=history,
    )


@dataclass
class ElbowScan:
    engine: Engine
    rows: list[tuple[int, float]]
    elbow: int
    threshold: float = ELBOW_THRESHOLD

    def to_tsv(self) -> str:
        lines = ["dims\tstress"]
        lines += [f"{k}\t{s!r}" for k, s in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str, engine=Engine.CLASSIC, threshold=ELBOW_THRESHOLD):
        rows = []
        for raw in text.splitlines()[1:]:
            if raw.strip() and not raw.startswith("#"):
                k, s = raw.split("\t")
                rows.append((int(k), float(s)))
        return cls(Engine(engine), rows, pick_elbow([s for _, s in rows], threshold), threshold)


def pick_elbow(stresses, threshold: float = ELBOW_THRESHOLD) -> int:
    """Smallest dimensionality k after which stress drops by less than ``threshold``
    (relative); the last dimensionality if no such k exists."""
    for k in range(1, len(stresses)):
        cur, nxt = stresses[k - 1], stresses[k]
        if cur <= 0 or (cur - nxt) / cur < threshold:
            return k
    return len(stresses)


def elbow_scan(delta, max_dims: int, engine: Engine | str = Engine.CLASSIC,
               threshold: float = ELBOW_THRESHOLD, **smacof_kw) -> ElbowScan:
    """Stress at each dimensionality 1..max_dims plus the flagged elbow."""
    d = _as_delta(delta)
    n = d.shape[0]
    if max_dims < 1 or max_dims > max(n - 1, 1):
        raise ValidationError(f"max_dims must be between 1 and n-1={n - 1}")
    engine = Engine(engine)
    rows = []
    if engine is Engine.CLASSIC:
        eig = _spectrum(delta)
        for k in range(1, max_dims + 1):
            rows.append((k, _classic_from_spectrum(delta, eig, k).stress))
    else:
        for k in range(1, max_dims + 1):
            rows.append((k, smacof(delta, k, **smacof_kw).stress))
    return ElbowScan(engine, rows, pick_elbow([s for _, s in rows], threshold), threshold)
