"""Iteration-indexed merge thresholds.

The threshold for iteration ``i`` is ``(i - alpha) / i``: it starts at
``1 - alpha`` and climbs toward (but never reaches) 1, so the first pass
merges the most and later passes only collapse near-identical centroids.
Smaller ``alpha`` means a stricter start and a slower collapse.
"""

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class ThresholdSchedule:
    """Hyperbolic threshold curve, evaluated lazily per iteration."""

    alpha: float
    max_iters: int = 1000

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie strictly in (0, 1), got {self.alpha!r}")
        if self.max_iters < 1:
            raise DomainError(f"max_iters must be >= 1, got {self.max_iters!r}")

    def value(self, iteration: int) -> float:
        """Threshold used at a 1-based iteration. Always in (0, 1)."""
        if not 1 <= iteration <= self.max_iters:
            raise DomainError(
                f"iteration must lie in [1, {self.max_iters}], got {iteration!r}"
            )
        # Evaluate in this exact form; do not rewrite as 1 - alpha/iteration.
        return (iteration - self.alpha) / iteration
