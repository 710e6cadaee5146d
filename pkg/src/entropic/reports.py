"""Inequality reports and suite aggregates with their JSON and CSV forms."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .shapes import BipartitionShape, as_shape

MARGIN_TOL = 1e-9

REPORT_COLUMNS = ("name", "lhs", "rhs", "margin", "q", "shape", "satisfied", "seed", "unitary_label")


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of one inequality check; ``satisfied`` iff ``margin >= -1e-9``."""

    name: str
    lhs: float
    rhs: float
    margin: float
    q: float
    shape: BipartitionShape
    satisfied: bool
    seed: int | None = None
    unitary_label: str | None = None

    @classmethod
    def build(cls, name, lhs, rhs, q, shape, *, margin=None, seed=None, unitary_label=None,
              tol: float = MARGIN_TOL) -> "InequalityReport":
        lhs, rhs = float(lhs), float(rhs)
        margin = rhs - lhs if margin is None else float(margin)
        return cls(name, lhs, rhs, margin, float(q), as_shape(shape), bool(margin >= -tol),
                   None if seed is None else int(seed), unitary_label)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "q": self.q,
            "shape": [self.shape.n, self.shape.m],
            "satisfied": self.satisfied,
            "seed": self.seed,
            "unitary_label": self.unitary_label,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "InequalityReport":
        return cls(d["name"], float(d["lhs"]), float(d["rhs"]), float(d["margin"]), float(d["q"]),
                   as_shape(d["shape"]), bool(d["satisfied"]), d.get("seed"), d.get("unitary_label"))


@dataclass
class SuiteReport:
    config: dict
    reports: list[InequalityReport] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    wall_time: float | None = None

    @property
    def violations(self) -> int:
        return sum(not r.satisfied for r in self.reports)

    @property
    def worst_margin(self) -> float | None:
        return min((r.margin for r in self.reports), default=None)

    def aggregate(self) -> dict:
        return {
            "checks_run": len(self.reports),
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "wall_time": self.wall_time,
        }

    def to_dict(self) -> dict:
        out = {"config": self.config}
        out.update(self.extra)
        out["reports"] = [r.to_dict() for r in self.reports]
        out["aggregate"] = self.aggregate()
        return out


def dumps(obj) -> str:
    """Canonical JSON used for every emitted document."""
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in reports:
        d = r.to_dict()
        d["shape"] = f"{d['shape'][0]}x{d['shape'][1]}"
        w.writerow([_cell(d[c]) for c in REPORT_COLUMNS])
    return buf.getvalue()


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    cols = list(rows[0])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([_cell(row[c]) for c in cols])
    return buf.getvalue()
