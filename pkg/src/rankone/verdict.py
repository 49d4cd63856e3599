"""Three-valued verdicts with replayable certificates."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Status(str, enum.Enum):
    PROVED = "Proved"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Certificate:
    """Rule identifier plus the witnesses needed to replay it."""

    rule: str
    payload: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"rule": self.rule, "payload": _jsonable(self.payload)}

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        return cls(rule=d["rule"], payload=dict(d.get("payload", {})))


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: Certificate | None = None
    # Verdict asserted in the literature for this exact family, if any.
    known: dict[str, Any] | None = None

    @classmethod
    def proved(cls, rule, **payload):
        return cls(Status.PROVED, Certificate(rule, payload))

    @classmethod
    def refuted(cls, rule, **payload):
        return cls(Status.REFUTED, Certificate(rule, payload))

    @classmethod
    def unknown(cls, rule="no_applicable_rule", **payload):
        return cls(Status.UNKNOWN, Certificate(rule, payload))

    @property
    def is_proved(self) -> bool:
        return self.status is Status.PROVED

    @property
    def is_refuted(self) -> bool:
        return self.status is Status.REFUTED

    def with_known(self, known):
        return Verdict(self.status, self.certificate, known)

    def to_dict(self) -> dict:
        d = {"status": self.status.value}
        d["certificate"] = self.certificate.to_dict() if self.certificate else None
        if self.known is not None:
            d["known"] = _jsonable(self.known)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        cert = d.get("certificate")
        return cls(
            Status(d["status"]),
            Certificate.from_dict(cert) if cert else None,
            d.get("known"),
        )


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = [_jsonable(v) for v in obj]
        return sorted(items) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, enum.Enum):
        return obj.value
    if hasattr(obj, "item"):  # numpy scalar
        return obj.item()
    return obj
