"""Verification reports: a list of checked numerical claims."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import __version__

PROVENANCE = ("exact", "ascent-lower-bound", "brute-force")
RELATIONS = ("<=", "=", ">=")


@dataclass
class Claim:
    id: str
    description: str
    lhs: float
    rhs: float
    relation: str
    tol: float
    provenance: str
    anchor: str
    note: str = ""
    slack: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.provenance not in PROVENANCE:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        self.lhs, self.rhs = float(self.lhs), float(self.rhs)
        if self.relation == "<=":
            self.slack = self.rhs - self.lhs
        elif self.relation == ">=":
            self.slack = self.lhs - self.rhs
        else:
            self.slack = -abs(self.lhs - self.rhs)
        self.passed = bool(math.isfinite(self.slack) and self.slack >= -self.tol)

    def to_json(self) -> dict:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out

    def summary(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (f"[{mark}] {self.id}: {self.lhs:.12g} {self.relation} {self.rhs:.12g} "
                f"(slack {self.slack:.3g}, {self.provenance})")


@dataclass
class Report:
    name: str
    claims: list = field(default_factory=list)
    seed: Optional[int] = None
    meta: dict = field(default_factory=dict)
    wall_time: float = 0.0
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    def add(self, id, description, lhs, rhs, relation, tol, provenance, anchor, note="") -> Claim:
        c = Claim(id, description, lhs, rhs, relation, tol, provenance, anchor, note)
        self.claims.append(c)
        return c

    def extend(self, other: "Report") -> None:
        self.claims.extend(other.claims)

    @property
    def passed(self) -> bool:
        return bool(self.claims) and all(c.passed for c in self.claims)

    def failures(self) -> list:
        return [c for c in self.claims if not c.passed]

    def worst(self) -> Optional[Claim]:
        return min(self.claims, key=lambda c: c.slack, default=None)

    def finish(self) -> "Report":
        self.wall_time = time.perf_counter() - self._t0
        return self

    def to_json(self) -> dict:
        return {
            "report": self.name,
            "tool_version": __version__,
            "seed": self.seed,
            "pass": self.passed,
            "claims": [c.to_json() for c in self.claims],
            "meta": self.meta,
            "wall_time": self.wall_time,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, default=_jsonable, allow_nan=True) + "\n"

    def summary(self, limit: int = 20) -> str:
        lines = [f"{self.name}: {sum(c.passed for c in self.claims)}/{len(self.claims)} claims pass"]
        shown = self.failures()[:limit] or self.claims[:limit]
        lines += ["  " + c.summary() for c in shown]
        if len(self.claims) > len(shown):
            lines.append(f"  ... {len(self.claims) - len(shown)} more")
        return "\n".join(lines)


def _jsonable(obj):
    import numpy as np

    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")
