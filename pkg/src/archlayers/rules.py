"""Rule-driven layer assignment.

Two stages. ``primary_label`` gives every node an in-degree partition and an
out-degree partition. ``refine_label`` keeps agreeing pairs and settles the
rest with ``up_down``, a fixed-precedence walk over the refinement rules.

Mind the threshold names: the "lower" in-degree bound ``delta_il`` is the
*high* cut (in > delta_il means lower layer) and the "upper" bound
``delta_iu`` the low cut (in < delta_iu means upper layer). Out-degree is the
mirror image: out > delta_ou means upper, out < delta_ol lower.
"""

from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, fields
from typing import Callable, Mapping, Sequence

from .centrality import CentralityRecord, CentralityTable
from .errors import ConfigError, SchemaError
from .layers import Layer, LayerAssignment
from .network import DependencyNetwork


@dataclass(frozen=True)
class LayerConfig:
    delta_il: float = 4
    delta_iu: float = 1
    delta_ol: float = 4
    delta_ou: float = 1
    delta_b: float = 6
    delta_c: float = 0.8
    delta_e: float = 0.6

    def validate(self) -> "LayerConfig":
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or value != value or value < 0:
                raise ConfigError(f"{f.name} must be a non-negative number, got {value!r}")
        if self.delta_iu > self.delta_il:
            raise ConfigError(f"delta_iu ({self.delta_iu}) exceeds delta_il ({self.delta_il})")
        # delta_ol > delta_ou is allowed: the shipped ConStore set (4 / 1) uses
        # it, and the out > delta_ou test simply takes precedence.
        for name in ("delta_c", "delta_e"):
            if getattr(self, name) > 1:
                raise ConfigError(f"{name} must lie in [0, 1]")
        return self

    def as_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def from_mapping(cls, values: Mapping[str, object], base: "LayerConfig | None" = None) -> "LayerConfig":
        known = {f.name for f in fields(cls)}
        current = (base or cls()).as_dict()
        for key, raw in values.items():
            if key not in known:
                continue
            try:
                current[key] = float(raw)
            except (TypeError, ValueError):
                raise ConfigError(f"{key}: {raw!r} is not a number") from None
        return cls(**current).validate()


# Threshold sets tuned for the ConStore, HealthWatcher and test-architecture systems.
PRESETS = {
    "constore": LayerConfig(4, 1, 4, 1, 6, 0.8, 0.6),
    "healthwatcher": LayerConfig(10, 1, 2, 5, 9, 0.8, 0.5),
    "testarch": LayerConfig(2, 1, 2, 2, 6, 0.6, 0.6),
}
DEFAULT_CONFIG = PRESETS["constore"]


def read_key_values(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` and ``;`` start comments."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"),
                                       interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string("[config]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable config: {exc}") from None
    return dict(parser["config"])


def load_config(text: str, base: LayerConfig | None = None) -> LayerConfig:
    values = read_key_values(text)
    return LayerConfig.from_mapping(values, base)


@dataclass(frozen=True)
class PartitionPair:
    node: str
    in_partition: Layer
    out_partition: Layer

    @property
    def conflicting(self) -> bool:
        return self.in_partition != self.out_partition


def primary_label(table: CentralityTable, config: LayerConfig = DEFAULT_CONFIG) -> list[PartitionPair]:
    config.validate()
    pairs = []
    for r in table.records:
        ind, outd = r.in_degree, r.out_degree
        if ind == 0 and outd == 0:
            pairs.append(PartitionPair(r.node, Layer.LOWER, Layer.LOWER))
            continue
        if ind > config.delta_il:
            in_part = Layer.LOWER
        elif ind < config.delta_iu:
            in_part = Layer.UPPER
        else:
            in_part = Layer.MIDDLE
        if outd > config.delta_ou:
            out_part = Layer.UPPER
        elif outd < config.delta_ol:
            out_part = Layer.LOWER
        else:
            out_part = Layer.MIDDLE
        pairs.append(PartitionPair(r.node, in_part, out_part))
    return pairs


Rule = Callable[[CentralityRecord, LayerConfig], "Layer | None"]

RULES: dict[str, Rule] = {
    "isolated": lambda r, c: Layer.LOWER if r.in_degree == 0 and r.out_degree == 0 else None,
    "eigen": lambda r, c: Layer.LOWER if r.eigenvector >= c.delta_e else None,
    "sink": lambda r, c: Layer.LOWER if r.out_degree == 0 and r.in_degree > 0 else None,
    "source": lambda r, c: Layer.UPPER if r.in_degree == 0 and r.out_degree > 0 else None,
    "betweenness": lambda r, c: Layer.MIDDLE if r.betweenness > c.delta_b else None,
    "closeness": lambda r, c: Layer.UPPER if r.closeness > c.delta_c else None,
    "in_degree": lambda r, c: Layer.LOWER if r.in_degree > c.delta_il else None,
    "out_degree": lambda r, c: Layer.UPPER if r.out_degree > c.delta_ou else None,
}

# Exact structural evidence first, then thresholds; lower before upper.
DEFAULT_RULE_ORDER: tuple[str, ...] = (
    "isolated", "eigen", "sink", "source", "betweenness", "closeness",
    "in_degree", "out_degree",
)


def up_down(pair: PartitionPair, record: CentralityRecord, config: LayerConfig = DEFAULT_CONFIG,
            order: Sequence[str] = DEFAULT_RULE_ORDER) -> Layer:
    """Resolve a conflicting pair: first rule that fires wins, else middle."""
    for name in order:
        try:
            rule = RULES[name]
        except KeyError:
            raise ConfigError(f"unknown rule {name!r}") from None
        layer = rule(record, config)
        if layer is not None:
            return layer
    return Layer.MIDDLE


def refine_label(pairs: Sequence[PartitionPair], table: CentralityTable,
                 config: LayerConfig = DEFAULT_CONFIG,
                 order: Sequence[str] = DEFAULT_RULE_ORDER) -> LayerAssignment:
    records = table.by_node()
    labels = {}
    for pair in pairs:
        if not pair.conflicting:
            labels[pair.node] = pair.out_partition
        else:
            labels[pair.node] = up_down(pair, records[pair.node], config, order)
    return LayerAssignment(labels, provenance="rule", source=config.as_dict())


def assign_rules(network: DependencyNetwork | None, table: CentralityTable,
                 config: LayerConfig = DEFAULT_CONFIG,
                 order: Sequence[str] = DEFAULT_RULE_ORDER) -> LayerAssignment:
    """Full rule pipeline. ``network`` only serves the coverage check."""
    if network is not None:
        covered = set(table.node_ids)
        missing = [n for n in network if n not in covered]
        if missing:
            raise SchemaError(f"centrality table misses {len(missing)} network node(s)")
    pairs = primary_label(table, config)
    return refine_label(pairs, table, config, order)
