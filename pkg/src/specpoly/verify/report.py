"""Verification records and their JSON/CSV serialization."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

HOLDS = "holds"
WITHIN = "holds-within-error"
VIOLATED = "violated"


def fmt(x) -> str:
    """Fixed number formatting for delimited output: 15 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".15g")
    if isinstance(x, int):
        return str(x)
    return str(x)


@dataclass
class Instance:
    """One inequality ``computed >= bound`` (``expect="ge"``) or identity (``expect="eq"``).

    ``error`` and ``bound_error`` are the error bars of the two sides.
    """

    index: int
    params: dict
    computed: float
    error: float
    bound: float
    bound_error: float = 0.0
    expect: str = "ge"
    sources: tuple = ("fem", "closed-form")
    flags: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.computed - self.bound

    @property
    def tolerance(self) -> float:
        return self.error + self.bound_error

    @property
    def verdict(self) -> str:
        if self.expect == "eq":
            return WITHIN if abs(self.margin) <= self.tolerance else VIOLATED
        if self.margin < -self.tolerance:
            return VIOLATED
        if self.margin > self.tolerance:
            return HOLDS
        return WITHIN

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "params": self.params,
            "computed": self.computed,
            "error": self.error,
            "bound": self.bound,
            "bound_error": self.bound_error,
            "margin": self.margin,
            "expect": self.expect,
            "sources": list(self.sources),
            "verdict": self.verdict,
            "flags": self.flags,
        }


@dataclass
class VerificationReport:
    theorem: str
    instances: list
    meta: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        verdicts = {inst.verdict for inst in self.instances}
        if VIOLATED in verdicts:
            return VIOLATED
        if WITHIN in verdicts:
            return WITHIN
        return HOLDS

    @property
    def violations(self) -> list:
        return [inst for inst in self.instances if inst.verdict == VIOLATED]

    def min_margin(self):
        return min(self.instances, key=lambda inst: inst.margin)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "verdict": self.verdict,
            "n_instances": len(self.instances),
            "n_violated": len(self.violations),
            "meta": self.meta,
            "instances": [inst.to_dict() for inst in self.instances],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_json_default)

    def to_csv(self) -> str:
        """One row per instance: parameters, computed, bound, margin, verdict, flags."""
        param_keys = []
        flag_keys = []
        for inst in self.instances:
            param_keys += [k for k in inst.params if k not in param_keys]
            flag_keys += [k for k in inst.flags if k not in flag_keys]
        header = (["index"] + param_keys + ["computed", "error", "bound", "bound_error", "margin", "verdict"]
                  + flag_keys)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for inst in self.instances:
            row = [inst.index] + [inst.params.get(k, "") for k in param_keys]
            row += [inst.computed, inst.error, inst.bound, inst.bound_error, inst.margin, inst.verdict]
            row += [inst.flags.get(k, "") for k in flag_keys]
            w.writerow([fmt(x) for x in row])
        return buf.getvalue()


def _json_default(o):
    try:
        return float(o)
    except (TypeError, ValueError):
        return str(o)
