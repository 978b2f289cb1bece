"""Domain errors shared by the duality maps and the command line."""

from __future__ import annotations


class DomainError(ValueError):
    """An input outside the domain of a map; ``code`` is a stable short tag."""

    def __init__(self, code: str, detail: str):
        super().__init__(f"{code}: {detail}")
        self.code = code
        self.detail = detail

    def to_json(self) -> dict:
        return {"error": self.code, "detail": self.detail}
