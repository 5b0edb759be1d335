"""Monte Carlo harness: occupancy sweeps, 1-d heatmaps, reconstruction.

A sweep runs one trial per (n, M_r, M_eps, replication) cell: draw n
points, build the covering at radius r(n), classify against eps(n), and
count occupancy. Cells whose schedule violates 2 r(n) <= eps(n) < 1 are
skipped with a logged reason. Every trial's seed is derived from the base
seed and the cell's arithmetic index, so output is reproducible and
independent of execution order; rows are emitted sorted.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .covering import (
    BallClass,
    CLASS_NAMES,
    ClassifiedCovering,
    OccupancyReport,
    build_grid_covering,
    classify_covering,
    count_occupancy,
)
from .density import DensityModel, get_model
from .errors import InfeasibleError
from .geometry import ZeroSet
from .sampling import derive_trial_seed, sample

__all__ = [
    "SweepConfig",
    "SweepRow",
    "ReconstructionResult",
    "run_sweep",
    "write_sweep_csv",
    "sweep_csv_text",
    "heatmap_1d",
    "reconstruct_zero_set",
]

logger = logging.getLogger(__name__)

_CSV_HEADER = [
    "model", "n", "M_r", "M_eps", "eta", "psi", "replication",
    "class", "n_balls", "n_nonempty", "fraction", "event_A", "event_B",
]

# emit classes in this order within each trial
_CLASS_ORDER = (BallClass.EPS_INSIDE, BallClass.EPS_NEIGHBORING, BallClass.EPS_OUTSIDE)


@dataclass(frozen=True)
class SweepConfig:
    model_id: str
    ns: tuple[int, ...]
    m_r_values: tuple[float, ...]
    m_eps_values: tuple[float, ...]
    eta: float
    psi: float
    replications: int
    base_seed: int

    def __post_init__(self):
        object.__setattr__(self, "ns", tuple(int(n) for n in self.ns))
        object.__setattr__(self, "m_r_values", tuple(float(v) for v in self.m_r_values))
        object.__setattr__(self, "m_eps_values", tuple(float(v) for v in self.m_eps_values))
        if not (self.ns and self.m_r_values and self.m_eps_values):
            raise ValueError("ns, m_r_values and m_eps_values must be nonempty")
        if min(self.ns) < 1:
            raise ValueError("sample sizes must be positive")
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if not (self.eta > 0 and 0 < self.psi <= self.eta):
            raise ValueError("need eta > 0 and 0 < psi <= eta")

    def cells(self):
        """Deterministic enumeration of (index, n, m_r, m_eps, replication)."""
        idx = 0
        for n in self.ns:
            for m_r in self.m_r_values:
                for m_eps in self.m_eps_values:
                    for rep in range(self.replications):
                        yield idx, n, m_r, m_eps, rep
                        idx += 1


@dataclass(frozen=True, eq=False)
class SweepRow:
    n: int
    m_r: float
    m_eps: float
    replication: int
    seed: int
    r: float
    eps: float
    occupancy: OccupancyReport

    def sort_key(self):
        return (self.n, self.m_r, self.m_eps, self.replication)


def _cell_values(cfg: SweepConfig, n: int, m_r: float, m_eps: float) -> tuple[float, float]:
    r = m_r * n ** (-cfg.eta)
    eps = m_eps * n ** (-cfg.psi)
    if 2.0 * r > eps:
        raise InfeasibleError(f"2r(n)={2 * r:.6g} > eps(n)={eps:.6g}")
    if eps >= 1.0:
        raise InfeasibleError(f"eps(n)={eps:.6g} >= 1")
    return r, eps


def _run_cell(model: DensityModel, cfg: SweepConfig, idx: int, n: int,
              m_r: float, m_eps: float, rep: int) -> SweepRow:
    r, eps = _cell_values(cfg, n, m_r, m_eps)
    seed = derive_trial_seed(cfg.base_seed, idx)
    batch = sample(model, n, seed)
    covering = build_grid_covering(model.support, r)
    classified = classify_covering(covering, model.zero_set, eps)
    occupancy = count_occupancy(classified, batch)
    return SweepRow(n=n, m_r=m_r, m_eps=m_eps, replication=rep, seed=seed,
                    r=r, eps=eps, occupancy=occupancy)


def run_sweep(cfg: SweepConfig, threads: int = 1) -> list[SweepRow]:
    """All feasible cells of the sweep, sorted by (n, M_r, M_eps, replication)."""
    model = get_model(cfg.model_id)
    if model.support is None:
        raise InfeasibleError(f"{cfg.model_id}: sweeps need a compact support")

    runnable = []
    for idx, n, m_r, m_eps, rep in cfg.cells():
        try:
            _cell_values(cfg, n, m_r, m_eps)
        except InfeasibleError as exc:
            if rep == 0:
                logger.info("sweep cell skipped (n=%d, M_r=%g, M_eps=%g): %s", n, m_r, m_eps, exc)
            continue
        runnable.append((idx, n, m_r, m_eps, rep))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda args: _run_cell(model, cfg, *args), runnable))
    else:
        rows = [_run_cell(model, cfg, *args) for args in runnable]
    rows.sort(key=SweepRow.sort_key)
    return rows


def _sweep_rows(cfg: SweepConfig, rows: list[SweepRow]):
    for row in rows:
        occ = row.occupancy
        fractions = occ.filled_fractions
        for cls in _CLASS_ORDER:
            yield [
                cfg.model_id, row.n, repr(row.m_r), repr(row.m_eps), repr(cfg.eta),
                repr(cfg.psi), row.replication, CLASS_NAMES[cls],
                int(occ.class_counts[cls]), int(occ.class_nonempty[cls]),
                repr(float(fractions[cls])),
                int(occ.event_no_empty_outside), int(occ.event_all_inside_empty),
            ]


def sweep_csv_text(cfg: SweepConfig, rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    writer.writerows(_sweep_rows(cfg, rows))
    return buf.getvalue()


def write_sweep_csv(cfg: SweepConfig, rows: list[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(sweep_csv_text(cfg, rows))


def heatmap_1d(model, n: int, bins: int, seed: int) -> np.ndarray:
    """Bit per bin of an equal-width binning of [-1, 1]: set iff occupied.

    Samples falling outside [-1, 1] (possible for tail models) are ignored.
    """
    if isinstance(model, str):
        model = get_model(model)
    if model.dim != 1:
        raise ValueError("heatmaps are defined for univariate models only")
    if bins < 2:
        raise ValueError("need at least 2 bins")
    batch = sample(model, n, seed)
    counts, _ = np.histogram(batch.points[:, 0], bins=bins, range=(-1.0, 1.0))
    return counts > 0


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Empty-ball estimate of the zero set, scored by directed Hausdorff gaps.

    Distances are directed (sup over one set of the distance to the other)
    and reported as math.inf when either side is empty.
    """

    empty_centers: np.ndarray
    hausdorff_estimate_to_zero_set: float
    hausdorff_zero_set_to_estimate: float


def reconstruct_zero_set(classified: ClassifiedCovering, occupancy: OccupancyReport,
                         true_zero_set: ZeroSet | None, mesh_step: float = 1e-3) -> ReconstructionResult:
    """Collect all empty-ball centers as the estimate and score it.

    The estimate itself uses no knowledge of the true zero set; the true
    set only enters the evaluation distances. The zero set is densely
    meshed at `mesh_step` for the sup over it, so that direction carries a
    discretization error of at most mesh_step.
    """
    centers = classified.covering.centers[occupancy.per_ball_counts == 0]
    if len(centers) == 0 or true_zero_set is None:
        return ReconstructionResult(
            empty_centers=centers,
            hausdorff_estimate_to_zero_set=math.inf,
            hausdorff_zero_set_to_estimate=math.inf,
        )
    est_to_s0 = float(np.max(true_zero_set.distance(centers)))
    mesh = true_zero_set.mesh(mesh_step)
    dists, _ = cKDTree(centers).query(mesh, k=1)
    s0_to_est = float(np.max(dists))
    return ReconstructionResult(
        empty_centers=centers,
        hausdorff_estimate_to_zero_set=est_to_s0,
        hausdorff_zero_set_to_estimate=s0_to_est,
    )
