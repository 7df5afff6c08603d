"""Two-level fuzzy comprehensive evaluation and the max-membership verdict.

Level one composes each criterion's indicator weights with the membership
matrix rows; level two composes the criterion weights with the level-one
vectors. The default operator is the weighted average, which uses every
membership degree; a max-min composition is available as an alternative.
Result vectors are reported raw, without re-normalization, so an input whose
membership rows do not sum to 1 stays visible in the output.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .core import (
    GradeScale,
    IndicatorHierarchy,
    MembershipMatrix,
    ValidationError,
    WeightVector,
)

WEIGHTED_AVERAGE = "weighted-average"
MIN_MAX = "min-max"
OPERATORS = (WEIGHTED_AVERAGE, MIN_MAX)

TIE_TOL = 1e-12


@dataclass(frozen=True)
class FuzzyVector:
    """Membership degree per grade, in grade order."""

    memberships: Mapping[str, float]

    def __post_init__(self) -> None:
        cleaned = {str(g): float(v) for g, v in self.memberships.items()}
        if not cleaned:
            raise ValidationError("empty fuzzy vector")
        for g, v in cleaned.items():
            if not -1e-12 <= v <= 1.0 + 1e-9:
                raise ValidationError(f"membership for grade {g!r} outside [0, 1]: {v}")
        object.__setattr__(self, "memberships", cleaned)

    @property
    def grades(self) -> tuple[str, ...]:
        return tuple(self.memberships)

    def __getitem__(self, grade: str) -> float:
        return self.memberships[grade]

    def total(self) -> float:
        return sum(self.memberships.values())

    def as_dict(self) -> dict[str, float]:
        return dict(self.memberships)


@dataclass(frozen=True)
class Verdict:
    grade: str
    membership: float
    tied: bool
    full_vector: FuzzyVector


def _compose(weights: list[float], rows: list[list[float]], operator: str) -> list[float]:
    n_grades = len(rows[0]) if rows else 0
    if operator == WEIGHTED_AVERAGE:
        return [
            sum(w * row[g] for w, row in zip(weights, rows)) for g in range(n_grades)
        ]
    if operator == MIN_MAX:
        return [
            max(min(w, row[g]) for w, row in zip(weights, rows))
            for g in range(n_grades)
        ]
    raise ValidationError(f"unknown fuzzy operator {operator!r}")


def first_level(
    h: IndicatorHierarchy,
    within_criterion_weights: Mapping[str, WeightVector],
    r: MembershipMatrix,
    operator: str = WEIGHTED_AVERAGE,
) -> dict[str, FuzzyVector]:
    """Per-criterion fuzzy vectors from indicator weights and membership rows."""
    missing = [c.id for c in h.criteria if c.id not in within_criterion_weights]
    if missing:
        raise ValidationError(f"missing within-criterion weights for: {missing}")

    grades = r.grades
    out: dict[str, FuzzyVector] = {}
    for crit in h.criteria:
        weights = within_criterion_weights[crit.id]
        if set(weights.ids) != set(crit.children):
            diff = sorted(set(weights.ids) ^ set(crit.children))
            raise ValidationError(
                f"weights for criterion {crit.id!r} do not match its indicators: {diff}"
            )
        w = [weights[ind] for ind in crit.children]
        rows = [[r.row(ind)[g] for g in grades] for ind in crit.children]
        values = _compose(w, rows, operator)
        out[crit.id] = FuzzyVector(dict(zip(grades, values)))
    return out


def second_level(
    criterion_weights: WeightVector,
    first: Mapping[str, FuzzyVector],
    operator: str = WEIGHTED_AVERAGE,
) -> FuzzyVector:
    """Goal-level fuzzy vector from criterion weights and level-one vectors."""
    if set(criterion_weights.ids) != set(first):
        diff = sorted(set(criterion_weights.ids) ^ set(first))
        raise ValidationError(f"criterion weights do not match first-level vectors: {diff}")

    crit_ids = list(criterion_weights.ids)
    grades = first[crit_ids[0]].grades
    for cid in crit_ids:
        if first[cid].grades != grades:
            raise ValidationError(
                f"first-level vector for {cid!r} uses a different grade order"
            )
    w = [criterion_weights[cid] for cid in crit_ids]
    rows = [[first[cid][g] for g in grades] for cid in crit_ids]
    values = _compose(w, rows, operator)
    return FuzzyVector(dict(zip(grades, values)))


def verdict(b: FuzzyVector, scale: GradeScale) -> Verdict:
    """Grade with the largest membership; ties go to the better grade.

    Grades within TIE_TOL of the maximum count as tied, and the winner is the
    best-ranked of them in scale order, flagged tied=True rather than chosen
    silently.
    """
    for g in b.grades:
        scale.rank(g)  # raises on unknown grade
    peak = max(b.memberships.values())
    contenders = [g for g in scale.labels if g in b.memberships and b[g] >= peak - TIE_TOL]
    winner = contenders[0]
    return Verdict(
        grade=winner,
        membership=b[winner],
        tied=len(contenders) > 1,
        full_vector=b,
    )
