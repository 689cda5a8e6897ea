"""Layer labels and node-to-layer assignments."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Iterable, Mapping

from .errors import IncompleteAssignmentError


class Layer(IntEnum):
    LOWER = 1
    MIDDLE = 2
    UPPER = 3

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value: Any) -> "Layer":
        """Accept 1/2/3, "1", or the names lower/middle/upper (top is upper)."""
        text = str(value).strip().lower()
        if text in ("lower", "bottom"):
            return cls.LOWER
        if text == "middle":
            return cls.MIDDLE
        if text in ("upper", "top"):
            return cls.UPPER
        return cls(int(float(text)))


@dataclass(frozen=True)
class LayerAssignment:
    """Total mapping node id -> Layer, tagged with how it was produced.

    ``provenance`` is ``"rule"`` or ``"model"``; ``source`` holds the config
    snapshot or model description that produced the labels.
    """

    labels: Mapping[str, Layer]
    provenance: str = "rule"
    source: Mapping[str, Any] = field(default_factory=dict)

    def __getitem__(self, node_id: str) -> Layer:
        return self.labels[node_id]

    def __contains__(self, node_id: object) -> bool:
        return node_id in self.labels

    def __len__(self) -> int:
        return len(self.labels)

    def get(self, node_id: str, default=None):
        return self.labels.get(node_id, default)

    def items(self):
        return self.labels.items()

    @property
    def nodes(self) -> set[str]:
        return set(self.labels)

    def require_total(self, node_ids: Iterable[str]) -> None:
        missing = [n for n in node_ids if n not in self.labels]
        if missing:
            shown = ", ".join(sorted(missing)[:5])
            raise IncompleteAssignmentError(
                f"{len(missing)} node(s) have no layer: {shown}")

    def counts(self) -> dict[Layer, int]:
        out = {layer: 0 for layer in Layer}
        for layer in self.labels.values():
            out[layer] += 1
        return out
