"""Solve reports and their JSON / CSV serialization.

A report captures one solver run: the tour, its weight, the instance
difficulty parameters, guess counters, and timing.  When the exact optimum
is attached, the approximation ratio is carried as an exact rational and
rendered with six decimals; re-parsing a serialized report reconstructs
the rational from the integer fields, so round-trips are lossless.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction


def render_ratio(ratio: Fraction) -> str:
    """Fixed six-decimal rendering, exact round-half-even on the rational."""
    scaled = ratio * 1_000_000
    whole = scaled.numerator // scaled.denominator
    rem = scaled - whole
    if rem > Fraction(1, 2) or (rem == Fraction(1, 2) and whole % 2 == 1):
        whole += 1
    return f"{whole // 1_000_000}.{whole % 1_000_000:06d}"


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one solver invocation on one instance."""

    algorithm: str
    tour: list[int]
    weight: int
    opt: int | None
    ratio: Fraction | None
    p: int
    q: int
    guesses_evaluated: int
    guesses_skipped: int
    wall_time_ms: int

    def __post_init__(self) -> None:
        if (self.opt is None) != (self.ratio is None):
            raise ValueError("ratio must be present exactly when opt is")
        if self.opt is not None and self.ratio != Fraction(self.weight, self.opt):
            raise ValueError("ratio does not equal weight/opt")

    def with_opt(self, opt: int) -> "SolveReport":
        return SolveReport(
            algorithm=self.algorithm,
            tour=self.tour,
            weight=self.weight,
            opt=opt,
            ratio=Fraction(self.weight, opt),
            p=self.p,
            q=self.q,
            guesses_evaluated=self.guesses_evaluated,
            guesses_skipped=self.guesses_skipped,
            wall_time_ms=self.wall_time_ms,
        )

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "tour": list(self.tour),
            "weight": self.weight,
            "opt": self.opt,
            "ratio": None if self.ratio is None else render_ratio(self.ratio),
            "p": self.p,
            "q": self.q,
            "guesses_evaluated": self.guesses_evaluated,
            "guesses_skipped": self.guesses_skipped,
            "wall_time_ms": self.wall_time_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SolveReport":
        opt = data["opt"]
        ratio = None if opt is None else Fraction(int(data["weight"]), int(opt))
        report = cls(
            algorithm=data["algorithm"],
            tour=[int(v) for v in data["tour"]],
            weight=int(data["weight"]),
            opt=None if opt is None else int(opt),
            ratio=ratio,
            p=int(data["p"]),
            q=int(data["q"]),
            guesses_evaluated=int(data["guesses_evaluated"]),
            guesses_skipped=int(data["guesses_skipped"]),
            wall_time_ms=int(data["wall_time_ms"]),
        )
        rendered = None if ratio is None else render_ratio(ratio)
        if data.get("ratio") != rendered:
            raise ValueError("serialized ratio does not match weight/opt")
        return report

    @classmethod
    def from_json(cls, text: str) -> "SolveReport":
        return cls.from_dict(json.loads(text))


CSV_COLUMNS = [
    "instance_id",
    "n",
    "p",
    "q",
    "algorithm",
    "weight",
    "opt",
    "ratio",
    "guesses_evaluated",
    "guesses_skipped",
    "wall_time_ms",
]


def reports_to_csv(rows: list[tuple[str, int, SolveReport]]) -> str:
    """Render (instance_id, n, report) rows in instance-id order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for instance_id, n, report in rows:
        writer.writerow(
            [
                instance_id,
                n,
                report.p,
                report.q,
                report.algorithm,
                report.weight,
                "" if report.opt is None else report.opt,
                "" if report.ratio is None else render_ratio(report.ratio),
                report.guesses_evaluated,
                report.guesses_skipped,
                report.wall_time_ms,
            ]
        )
    return buf.getvalue()
