"""Residual reports: rows of named checks with tolerances, serialized deterministically."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from importlib import resources

PROVENANCE = ("PAPER", "DERIVED", "TRIVIAL")

# Named tolerances; rows refer to these by name so overrides stay visible.
TOLERANCES = {
    "pointwise": 1e-8,  # jet-exact identities
    "integrated": 1e-6,  # ODE-integrated or Laplacian-of-field quantities
    "exact": 1e-12,  # closed-form algebra
    "radii": 1e-15,
    "totally_real": 1e-10,
    "gauge": 1e-9,
    "commutativity": 1e-5,
    "case3_invariants": 1e-4,
    "case3_pointwise": 1e-5,
    "nu_formula": 1e-9,
    "torsion": 1e-7,
    "sq": 1e-12,
    "proper": 1e-8,  # lower bound for |H|
    "controls": 1e-3,  # lower bound a negative control must exceed
    "bound_ratio": 1.0,  # |S| / bound must stay at or below this
}

CSV_COLUMNS = ["name", "value", "tol", "tol_name", "kind", "pass", "provenance", "control"]


def fmt(x) -> str:
    """17 significant digits, enough to round-trip a double."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


@dataclass
class Row:
    name: str
    value: float | None
    tol: float
    provenance: str
    kind: str = "upper"  # 'upper': value <= tol passes; 'lower': value > tol passes
    tol_name: str = ""
    control: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        if self.value is None or not math.isfinite(self.value):
            return False
        if self.kind == "upper":
            return self.value <= self.tol
        return self.value > self.tol

    @property
    def ok(self) -> bool:
        """Whether the row behaves as intended (controls must fail)."""
        return self.passed != self.control

    def to_dict(self) -> dict:
        value = None if self.value is None or not math.isfinite(self.value) else float(self.value)
        d = {
            "name": self.name,
            "value": value,
            "tol": float(self.tol),
            "tol_name": self.tol_name,
            "kind": self.kind,
            "pass": self.passed,
            "provenance": self.provenance,
            "control": self.control,
        }
        if self.note:
            d["note"] = self.note
        return d


class ResidualReport:
    """An ordered collection of :class:`Row` with run metadata."""

    def __init__(self, meta: dict | None = None, tolerances: dict | None = None):
        self.meta = dict(meta or {})
        self.tolerances = dict(TOLERANCES)
        if tolerances:
            unknown = set(tolerances) - set(TOLERANCES)
            if unknown:
                raise KeyError(f"unknown tolerance names: {sorted(unknown)}")
            self.tolerances.update(tolerances)
        self.rows: list[Row] = []
        self.extra: dict = {}

    def check(self, name: str, value, tol_name: str, provenance: str, kind: str = "upper",
              control: bool = False, note: str = "") -> Row:
        if provenance not in PROVENANCE:
            raise ValueError(f"provenance must be one of {PROVENANCE}")
        row = Row(name, None if value is None else float(value), self.tolerances[tol_name], provenance,
                  kind, tol_name, control, note)
        self.rows.append(row)
        return row

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> list[Row]:
        return [r for r in self.rows if not r.ok]

    def to_dict(self) -> dict:
        out = {"meta": self.meta, "rows": [r.to_dict() for r in self.rows]}
        if self.extra:
            out["data"] = self.extra
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            d = r.to_dict()
            w.writerow([fmt(d[c]) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_text(self) -> str:
        def short(x):
            if x is None:
                return "-"
            return repr(float(x)) if isinstance(x, float) else str(x)

        lines = [f"# {k}: {short(v) if not isinstance(v, (dict, list)) else json.dumps(v, sort_keys=True)}"
                 for k, v in self.meta.items()]
        width = max((len(r.name) for r in self.rows), default=4)
        for r in self.rows:
            status = "PASS" if r.passed else "FAIL"
            if r.control:
                status += " (control, expected FAIL)"
            op = "<=" if r.kind == "upper" else ">"
            lines.append(f"{r.name:<{width}}  {short(r.value):>23} {op} {short(r.tol):<8} [{r.provenance}] {status}")
        lines.append(f"overall: {'OK' if self.ok else 'FAILED'}")
        return "\n".join(lines) + "\n"

    def render(self, fmt_name: str) -> str:
        if fmt_name == "json":
            return self.to_json()
        if fmt_name == "csv":
            return self.to_csv()
        if fmt_name == "text":
            return self.to_text()
        raise ValueError(f"unknown format {fmt_name!r}")


def config_hash(config: dict) -> str:
    """SHA-256 of the canonical JSON form of a configuration."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def load_schema() -> dict:
    """The JSON schema that every JSON report validates against."""
    return json.loads(resources.files("cpn_biharmonic").joinpath("report_schema.json").read_text())
