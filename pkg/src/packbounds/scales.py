"""Conservative scales: DFF tuples, explicit size tables, and box stretching
under fixed edge presets."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import oracle
from .dff import IDENTITY, DffSpec
from .model import Box, EdgePresets, NormalizedInstance

__all__ = [
    "ConservativeScale", "EdgePresets", "apply_scale", "feasible_companions",
    "max_companion_width", "stretch",
]


@dataclass(frozen=True)
class ConservativeScale:
    """Either one dual feasible function per dimension, or an explicit table
    of transformed size vectors keyed by box id."""

    dffs: tuple[DffSpec, ...] | None = None
    table: Mapping[str, tuple[Fraction, ...]] | None = field(default=None, hash=False)
    provenance: str = ""

    def __post_init__(self):
        if (self.dffs is None) == (self.table is None):
            raise ValueError("a scale has either dffs or a table, not both")
        if self.table is not None:
            table = {k: tuple(Fraction(x) for x in v) for k, v in self.table.items()}
            for k, v in table.items():
                if any(not 0 <= x <= 1 for x in v):
                    raise ValueError(f"table entry for {k!r} leaves [0, 1]")
            object.__setattr__(self, "table", table)
        else:
            object.__setattr__(self, "dffs", tuple(self.dffs))
        if not self.provenance:
            object.__setattr__(self, "provenance", self._default_provenance())

    @classmethod
    def of(cls, *dffs: DffSpec, provenance: str = "") -> ConservativeScale:
        return cls(dffs=tuple(dffs), provenance=provenance)

    @classmethod
    def identity(cls, dim: int) -> ConservativeScale:
        return cls(dffs=(IDENTITY,) * dim)

    def _default_provenance(self) -> str:
        if self.dffs is not None:
            return "(" + ", ".join(str(f) for f in self.dffs) + ")"
        return "table"

    def describe(self) -> str:
        """Canonical text: the DFF tuple, or ``table``."""
        if self.dffs is not None:
            return " ".join(str(f) for f in self.dffs)
        return "table"

    def transform(self, box: Box) -> tuple[Fraction, ...]:
        if self.table is not None:
            try:
                return self.table[box.id]
            except KeyError:
                raise KeyError(f"scale table has no entry for box {box.id!r}") from None
        if len(self.dffs) != box.dim:
            raise ValueError(f"scale has arity {len(self.dffs)}, box has dimension {box.dim}")
        return tuple(f(x) for f, x in zip(self.dffs, box.size))


def apply_scale(inst: NormalizedInstance, s: ConservativeScale) -> NormalizedInstance:
    if s.dffs is not None and len(s.dffs) != inst.dim:
        raise ValueError(f"scale has arity {len(s.dffs)}, instance has dimension {inst.dim}")
    if s.table is not None:
        missing = [b.id for b in inst.boxes if b.id not in s.table]
        if missing:
            raise KeyError(f"scale table misses boxes {missing}")
        if any(len(s.table[b.id]) != inst.dim for b in inst.boxes):
            raise ValueError("scale table entries have the wrong arity")
    # zero sizes are legal after scaling, so bypass Box validation
    boxes = []
    for b in inst.boxes:
        nb = object.__new__(Box)
        object.__setattr__(nb, "id", b.id)
        object.__setattr__(nb, "size", s.transform(b))
        object.__setattr__(nb, "value", b.value)
        boxes.append(nb)
    return inst.with_boxes(boxes)


def _presets(inst: NormalizedInstance, edges: EdgePresets | None) -> EdgePresets:
    if edges is None:
        edges = inst.edges
    if edges is None:
        return EdgePresets.empty(inst.dim)
    if edges.dim != inst.dim:
        raise ValueError("edge presets have the wrong number of dimensions")
    return edges


def feasible_companions(inst: NormalizedInstance, edges: EdgePresets | None,
                        b: str, i: int) -> set[str]:
    """Boxes that may share a preset-free set with ``b`` in dimension ``i``:
    everything except ``b`` and its preset neighbours."""
    inst.box(b)
    e = _presets(inst, edges)
    return {c for c in inst.ids if c != b and not e.adjacent(b, c, i)}


def max_companion_width(inst: NormalizedInstance, edges: EdgePresets | None,
                        b: str, i: int) -> oracle.WeightBound:
    """Width of the widest i-feasible, preset-free set containing ``b``
    (or an upper bound on it when too many companions exist)."""
    e = _presets(inst, edges)
    companions = feasible_companions(inst, e, b, i)
    items = [(b, inst.box(b).size[i])] + [(c, inst.box(c).size[i]) for c in sorted(companions)]
    conflicts = [pair for pair in e.sets[i] if pair <= companions]
    return oracle.knapsack_max_weight(items, conflicts, b, Fraction(1))


def stretch(inst: NormalizedInstance, edges: EdgePresets | None, b: str, i: int,
            base: ConservativeScale | None = None) -> ConservativeScale:
    """Widen box ``b`` in dimension ``i`` by the slack ``1 - lam``.

    ``lam`` bounds the widest preset-free i-feasible set containing ``b``.
    With ``base`` given, the stretch is computed on the sizes produced by
    ``base`` and the result is the composed table.
    """
    current = apply_scale(inst, base) if base is not None else inst
    width = current.box(b).size[i]
    bound = max_companion_width(current, edges, b, i)
    lam = max(bound.value, width)
    table = {c.id: c.size for c in current.boxes}
    grown = list(table[b])
    grown[i] = width + (1 - lam)
    table[b] = tuple(grown)
    prefix = base.provenance + " then " if base is not None else ""
    how = "" if bound.exact else ", relaxed"
    return ConservativeScale(
        table=table,
        provenance=f"{prefix}stretch(box={b}, dim={i + 1}, lambda={lam}{how})")
