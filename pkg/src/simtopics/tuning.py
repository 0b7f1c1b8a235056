"""Alpha/beta grid search with one discovery trace per alpha.

Discovery depends on alpha alone, so each alpha is traced once and every
(k, beta) cell is carved out of that cached trace. Winners are chosen per
topic count k by coherence_cv; ties prefer the larger alpha, then the larger
beta, then the earlier cell.
"""

from dataclasses import dataclass

from .corpus import CorpusBundle
from .descriptors import descriptors_for_selection, rank_documents, selection_size
from .discovery import discover
from .errors import DomainError, SimtopicsError
from .metrics import MetricConfig, evaluate
from .schedule import ThresholdSchedule

DEFAULT_ALPHAS = (2e-2, 1e-2, 5e-3, 1e-3, 1e-4, 1e-5, 1e-6)
DEFAULT_BETAS = (0.2, 0.15, 0.1, 0.05, 0.03)

STATUS_OK = "ok"


@dataclass(frozen=True)
class GridSpec:
    alphas: tuple = DEFAULT_ALPHAS
    betas: tuple = DEFAULT_BETAS
    k_min: int = 5
    k_max: int = 25
    top_n: int = 10
    max_iters: int = 1000

    def __post_init__(self):
        if not self.alphas or not self.betas:
            raise DomainError("alphas and betas must be non-empty")
        if not 1 <= self.k_min <= self.k_max:
            raise DomainError(
                f"need 1 <= k_min <= k_max, got [{self.k_min}, {self.k_max}]"
            )
        if self.top_n < 1:
            raise DomainError("top_n must be >= 1")


@dataclass(frozen=True)
class GridCell:
    alpha: float
    beta: float
    k: int
    status: str
    cv: float = None
    npmi: float = None
    irbo: float = None
    weco: float = None
    ts: float = None
    td: float = None


@dataclass(frozen=True)
class GridResult:
    cells: tuple
    winners: dict
    notes: tuple = ()


def run_grid(
    bundle: CorpusBundle,
    spec: GridSpec = GridSpec(),
    metric_config: MetricConfig = MetricConfig(),
    store=None,
    threads: int = 1,
) -> GridResult:
    """Evaluate the full alpha x beta grid over snapshots with k in range.

    A cell that raises records its error class and the run continues; an
    alpha whose trace raises poisons only that alpha's cells. Traces with two
    snapshots at the same k keep the earliest and note the duplication.
    """
    cells = []
    notes = []
    for alpha in spec.alphas:
        try:
            trace = discover(
                bundle.matrix,
                ThresholdSchedule(alpha, spec.max_iters),
                threads=threads,
            )
        except SimtopicsError as exc:
            notes.append(f"alpha={alpha!r}: discovery failed: {type(exc).__name__}")
            for beta in spec.betas:
                cells.append(
                    GridCell(alpha, beta, 0, f"error:{type(exc).__name__}")
                )
            continue
        chosen = {}
        for snapshot in trace.snapshots:
            if snapshot.k in chosen:
                notes.append(
                    f"alpha={alpha!r}: k={snapshot.k} repeats at iteration "
                    f"{snapshot.iteration}; kept iteration "
                    f"{chosen[snapshot.k].iteration}"
                )
                continue
            chosen[snapshot.k] = snapshot
        for k in sorted(chosen, reverse=True):
            if not spec.k_min <= k <= spec.k_max:
                continue
            snapshot = chosen[k]
            # The document ranking depends only on the centroids, so the
            # beta loop below just takes longer or shorter prefixes of it.
            order = rank_documents(bundle.matrix, snapshot.centroids, threads)
            for beta in spec.betas:
                take = selection_size(beta, order.shape[1])
                selected = [row[:take].tolist() for row in order]
                cells.append(
                    _evaluate_cell(
                        bundle, snapshot, selected, alpha, beta, spec,
                        metric_config, store, threads,
                    )
                )
    winners = _pick_winners(cells)
    return GridResult(tuple(cells), winners, tuple(notes))


def _evaluate_cell(
    bundle, snapshot, selected, alpha, beta, spec, metric_config, store, threads
):
    try:
        desc = descriptors_for_selection(bundle, selected, spec.top_n)
        report = evaluate(
            bundle,
            snapshot.centroids,
            [list(words) for words in desc.per_topic_words],
            beta,
            metric_config,
            store=store,
            threads=threads,
            selected=selected,
        )
    except SimtopicsError as exc:
        return GridCell(alpha, beta, snapshot.k, f"error:{type(exc).__name__}")
    return GridCell(
        alpha,
        beta,
        snapshot.k,
        STATUS_OK,
        cv=report.cv,
        npmi=report.npmi,
        irbo=report.irbo,
        weco=report.weco,
        ts=report.ts,
        td=report.td,
    )


def _pick_winners(cells):
    """Best ok-cell per k by cv; ties: larger alpha, larger beta, first seen."""
    winners = {}
    for cell in cells:
        if cell.status != STATUS_OK or cell.cv is None:
            continue
        cur = winners.get(cell.k)
        if cur is None:
            winners[cell.k] = cell
            continue
        better = (cell.cv, cell.alpha, cell.beta) > (cur.cv, cur.alpha, cur.beta)
        if better:
            winners[cell.k] = cell
    return winners
