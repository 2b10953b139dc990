"""Machine-readable outcomes of checks.

Status vocabulary is shared across the package: "pass"/"proven" map to CLI
exit code 0, "fail" to 1, "inapplicable" to 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

PASS = "pass"
FAIL = "fail"
INAPPLICABLE = "inapplicable"


def jsonable(value: Any) -> Any:
    """Recursively convert report values to plain JSON types.

    Fractions render as "num/den" strings except under a key named "nu",
    which uses the {num, den} object form.
    """
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            if k == "nu" and isinstance(v, Fraction):
                out[k] = {"num": v.numerator, "den": v.denominator}
            else:
                out[str(k)] = jsonable(v)
        return out
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, float):
        return value
    if hasattr(value, "to_json_dict"):
        return value.to_json_dict()
    if isinstance(value, int):
        return value
    return str(value)


@dataclass
class VerificationReport:
    """Outcome of a single check: status, the bound actually used, and the
    first counterexample (if any) plus check-specific context."""

    status: str
    kind: str
    bound: Optional[int] = None
    witnesses: list = field(default_factory=list)
    context: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json_dict(self) -> dict:
        return jsonable(
            {
                "status": self.status,
                "kind": self.kind,
                "bound": self.bound,
                "witnesses": self.witnesses,
                **self.context,
            }
        )
