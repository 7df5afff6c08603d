"""Convex blending of subjective and objective weight vectors."""
from __future__ import annotations

from dataclasses import dataclass

from .core import ValidationError, WeightVector

SUM_TOL = 1e-6


@dataclass(frozen=True)
class FusionConfig:
    """Blend parameter: alpha = 1 keeps the subjective weights, 0 the objective."""

    alpha: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValidationError(f"alpha must be in [0, 1], got {self.alpha}")


def fuse(
    subjective: WeightVector,
    objective: WeightVector,
    cfg: FusionConfig = FusionConfig(),
) -> WeightVector:
    """Entrywise alpha * subjective + (1 - alpha) * objective over a shared id set."""
    if set(subjective.ids) != set(objective.ids):
        diff = sorted(set(subjective.ids) ^ set(objective.ids))
        raise ValidationError(f"weight vectors cover different ids: {diff}")
    for name, vec in (("subjective", subjective), ("objective", objective)):
        if abs(vec.total() - 1.0) > SUM_TOL:
            raise ValidationError(
                f"{name} weights must sum to 1, got {vec.total()}"
            )
    a = cfg.alpha
    return WeightVector(
        {k: a * subjective[k] + (1.0 - a) * objective[k] for k in subjective.ids}
    )
