"""Objective indicator weights from an observation matrix via information entropy.

Indicators whose observed values are more dispersed carry more information
(lower entropy) and receive a larger weight.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ValidationError, WeightVector


@dataclass(frozen=True)
class DecisionMatrix:
    """Non-negative observations: rows are alternatives, columns are indicators."""

    alternatives: tuple[str, ...]
    indicators: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        alts = tuple(self.alternatives)
        inds = tuple(self.indicators)
        vals = tuple(tuple(float(v) for v in row) for row in self.values)
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "indicators", inds)
        object.__setattr__(self, "values", vals)
        if len(alts) < 2:
            raise ValidationError("decision matrix needs at least 2 alternatives")
        if len(set(alts)) != len(alts) or len(set(inds)) != len(inds):
            raise ValidationError("decision matrix ids must be unique")
        if len(vals) != len(alts) or any(len(row) != len(inds) for row in vals):
            raise ValidationError(
                f"decision matrix shape mismatch: expected {len(alts)}x{len(inds)}"
            )
        for alt, row in zip(alts, vals):
            for ind, v in zip(inds, row):
                if v < 0:
                    raise ValidationError(
                        f"decision matrix ({alt}, {ind}): negative value {v}"
                    )

    def to_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


def column_shares(m: DecisionMatrix) -> np.ndarray:
    """Per-column shares p_ij = x_ij / column sum. Columns sum to 1."""
    x = m.to_array()
    sums = x.sum(axis=0)
    for ind, s in zip(m.indicators, sums):
        if s <= 0:
            raise ValidationError(f"degenerate indicator column {ind!r}: sum is zero")
    return x / sums


def information_entropy(shares: Sequence[float] | np.ndarray, n: int) -> float:
    """Normalized Shannon entropy of one column of shares, in [0, 1].

    Uses the continuity convention 0 * ln 0 = 0. `n` is the number of
    observations (rows), which fixes the 1 / ln(n) normalization.
    """
    p = np.asarray(shares, dtype=float)
    if np.any(p < 0):
        raise ValidationError("shares must be non-negative")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValidationError(f"shares must sum to 1, got {p.sum()}")
    if n < 2:
        raise ValidationError("entropy needs at least 2 observations")
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum() / np.log(n))


def entropy_weights(m: DecisionMatrix) -> WeightVector:
    """Entropy weights over the matrix columns, summing to 1.

    Fails when every column is uniform: then every entropy is 1 and the
    data carries no information to weight by.
    """
    p = column_shares(m)
    n = len(m.alternatives)
    entropies = [information_entropy(p[:, j], n) for j in range(len(m.indicators))]
    # Clamp float noise: e may exceed 1 by ~1e-16 for exactly uniform columns.
    divergences = [max(0.0, 1.0 - e) for e in entropies]
    total = sum(divergences)
    if total <= 1e-12:
        raise ValidationError("no information content: all indicator columns are uniform")
    return WeightVector(
        {ind: d / total for ind, d in zip(m.indicators, divergences)}
    )
