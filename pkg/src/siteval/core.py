"""Shared domain types: grade scale, indicator hierarchy, weight vectors, membership matrix.

Everything here is immutable after construction and safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

ROW_SUM_FLAG_TOL = 1e-6


class ValidationError(ValueError):
    """Input data violates a structural or numeric contract."""


@dataclass(frozen=True)
class GradeScale:
    """Ordered evaluation grades, best grade first."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) < 2:
            raise ValidationError("grade scale needs at least 2 grades")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("grade labels must be unique")

    def rank(self, label: str) -> int:
        """Position of a grade, 0 = best."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"unknown grade {label!r}") from None


@dataclass(frozen=True)
class Indicator:
    id: str
    name: str
    kind: str = "qualitative"

    def __post_init__(self) -> None:
        if self.kind not in ("qualitative", "quantitative"):
            raise ValidationError(
                f"indicator {self.id!r}: kind must be 'qualitative' or 'quantitative'"
            )


@dataclass(frozen=True)
class Criterion:
    id: str
    name: str
    children: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class IndicatorHierarchy:
    """Goal / criterion / indicator tree. Criteria partition the indicator set."""

    goal_name: str
    criteria: tuple[Criterion, ...]
    indicators: tuple[Indicator, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "criteria", tuple(self.criteria))
        object.__setattr__(self, "indicators", tuple(self.indicators))

    def criterion_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.criteria)

    def indicator_ids(self) -> tuple[str, ...]:
        """Indicator ids in criterion traversal order."""
        return tuple(i for c in self.criteria for i in c.children)

    def criterion_of(self, indicator_id: str) -> Criterion:
        for c in self.criteria:
            if indicator_id in c.children:
                return c
        raise ValidationError(f"indicator {indicator_id!r} not found in hierarchy")


def validate_hierarchy(h: IndicatorHierarchy) -> list[str]:
    """Check hierarchy invariants. Returns a violation list, empty when the tree is ok.

    Violations are data, not exceptions, so a caller can report them all at once.
    """
    violations: list[str] = []
    if not h.criteria:
        violations.append("hierarchy: empty criteria list")

    seen_crit: set[str] = set()
    for c in h.criteria:
        if c.id in seen_crit:
            violations.append(f"criterion {c.id!r}: duplicate criterion id")
        seen_crit.add(c.id)
        if not c.children:
            violations.append(f"criterion {c.id!r}: empty children list")

    declared = [i.id for i in h.indicators]
    declared_set = set(declared)
    if len(declared) != len(declared_set):
        dupes = sorted({i for i in declared if declared.count(i) > 1})
        violations.append(f"indicators: duplicate ids {dupes}")

    membership_count: dict[str, int] = {}
    for c in h.criteria:
        for ind in c.children:
            membership_count[ind] = membership_count.get(ind, 0) + 1
            if ind not in declared_set:
                violations.append(f"criterion {c.id!r} -> {ind!r}: unknown indicator")

    for ind, count in membership_count.items():
        if count > 1:
            violations.append(f"indicator {ind!r}: duplicate membership ({count} criteria)")
    for ind in declared:
        if ind not in membership_count:
            violations.append(f"indicator {ind!r}: not attached to any criterion")

    return violations


@dataclass(frozen=True)
class WeightVector:
    """Non-negative weights keyed by id. Key order is preserved."""

    weights: Mapping[str, float]

    def __post_init__(self) -> None:
        cleaned = {str(k): float(v) for k, v in self.weights.items()}
        for k, v in cleaned.items():
            if v < 0:
                raise ValidationError(f"negative weight for {k!r}: {v}")
        object.__setattr__(self, "weights", cleaned)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(self.weights)

    def __getitem__(self, key: str) -> float:
        return self.weights[key]

    def __contains__(self, key: str) -> bool:
        return key in self.weights

    def total(self) -> float:
        return sum(self.weights.values())

    def values(self, order: Sequence[str] | None = None) -> list[float]:
        keys = self.ids if order is None else order
        return [self.weights[k] for k in keys]

    def as_dict(self) -> dict[str, float]:
        return dict(self.weights)

    def normalize(self) -> "WeightVector":
        """Scale so the entries sum to 1. Requires at least one positive entry."""
        total = self.total()
        if total <= 0:
            raise ValidationError("degenerate weight vector: all entries zero")
        return WeightVector({k: v / total for k, v in self.weights.items()})


@dataclass(frozen=True)
class MembershipMatrix:
    """Indicator rows of membership degrees over a fixed grade set.

    Rows are expected to be (close to) row-stochastic; `row_sum_deviations`
    reports rows whose sum strays from 1 by more than a flagging tolerance.
    """

    rows: Mapping[str, Mapping[str, float]]

    def __post_init__(self) -> None:
        cleaned: dict[str, dict[str, float]] = {}
        grades: tuple[str, ...] | None = None
        for ind, row in self.rows.items():
            row_f = {str(g): float(v) for g, v in row.items()}
            row_grades = tuple(row_f)
            if grades is None:
                grades = row_grades
            elif set(row_grades) != set(grades):
                raise ValidationError(
                    f"membership row {ind!r}: grade set {sorted(row_grades)} "
                    f"differs from {sorted(grades)}"
                )
            for g, v in row_f.items():
                if not 0.0 <= v <= 1.0:
                    raise ValidationError(
                        f"membership row {ind!r}, grade {g!r}: entry {v} outside [0, 1]"
                    )
            total = sum(row_f.values())
            if total > 1.0 + 1e-9:
                raise ValidationError(
                    f"membership row {ind!r}: sum {total} exceeds 1"
                )
            cleaned[str(ind)] = row_f
        if grades is None:
            raise ValidationError("membership matrix has no rows")
        object.__setattr__(self, "rows", cleaned)
        object.__setattr__(self, "_grades", grades)

    @property
    def grades(self) -> tuple[str, ...]:
        return self._grades  # type: ignore[attr-defined]

    @property
    def indicator_ids(self) -> tuple[str, ...]:
        return tuple(self.rows)

    def row(self, indicator_id: str) -> dict[str, float]:
        try:
            return dict(self.rows[indicator_id])
        except KeyError:
            raise ValidationError(
                f"missing membership row for indicator {indicator_id!r}"
            ) from None

    def row_sum_deviations(self, tol: float = ROW_SUM_FLAG_TOL) -> dict[str, float]:
        """Rows whose sum deviates from 1 by more than `tol`, as id -> (sum - 1)."""
        out: dict[str, float] = {}
        for ind, row in self.rows.items():
            dev = sum(row.values()) - 1.0
            if abs(dev) > tol:
                out[ind] = dev
        return out
