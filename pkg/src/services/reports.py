from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


@dataclass
class CheckReport:
    ok: bool
    name: str = ""
    witness: Optional[tuple] = None
    rendered: str = ""
    details: dict = field(default_factory=dict)
    error: str = ""

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.name, "ok": self.ok}
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        if self.rendered:
            out["rendered"] = self.rendered
        if self.details:
            out["details"] = _plain(self.details)
        if self.error:
            out["error"] = self.error
        return out


@dataclass
class SuiteReport:
    ok: bool
    name: str = ""
    checks: List[CheckReport] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    error: str = ""

    @classmethod
    def of(cls, name: str, checks: List[CheckReport], **details) -> "SuiteReport":
        return cls(ok=all(c.ok for c in checks), name=name, checks=checks, details=details)

    def check(self, name: str) -> CheckReport:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> List[CheckReport]:
        return [c for c in self.checks if not c.ok]

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "name": self.name,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.details:
            out["details"] = _plain(self.details)
        if self.error:
            out["error"] = self.error
        return out


def _plain(value: Any) -> Any:
    """Turn tuples, sets and nested containers into JSON-friendly, ordered values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted((_plain(v) for v in value), key=repr)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)
