from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Outcome of an exhaustive (or sampled) identity check."""

    name: str
    ok: bool
    checked: int = 0
    witness: dict | None = None
    notes: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "checked": self.checked,
                "witness": self.witness, "notes": self.notes}
