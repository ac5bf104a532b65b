"""Exact data model: boxes, containers, instances, normalization, volumes.

All sizes are :class:`fractions.Fraction`; nothing in the package rounds.
Dimensions are 0-based in the library and 1-based in the text format.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction
Edge = frozenset  # frozenset of exactly two box ids

__all__ = [
    "Rational", "Box", "EdgePresets", "Instance", "NormalizedInstance",
    "InstanceFormatError", "to_fraction", "edge", "normalize", "volume",
    "total_volume", "parse_instance", "serialize_instance",
]


class InstanceFormatError(ValueError):
    """Malformed instance text; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions and ``p/q`` strings. Floats are refused."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction or 'p/q' string")
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE "):
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(text)
    return Fraction(value)


def edge(a: str, b: str) -> frozenset:
    if a == b:
        raise ValueError(f"self-loop edge on box {a!r}")
    return frozenset((a, b))


@dataclass(frozen=True)
class Box:
    id: str
    size: tuple[Fraction, ...]
    value: Fraction | None = None

    def __post_init__(self):
        size = tuple(to_fraction(s) for s in self.size)
        if not size:
            raise ValueError(f"box {self.id!r} has an empty size vector")
        if any(s <= 0 for s in size):
            raise ValueError(f"box {self.id!r} has a nonpositive size")
        object.__setattr__(self, "size", size)
        if self.value is not None:
            object.__setattr__(self, "value", to_fraction(self.value))

    @property
    def dim(self) -> int:
        return len(self.size)


@dataclass(frozen=True)
class EdgePresets:
    """Per-dimension sets of box pairs fixed into the component graphs."""

    sets: tuple[frozenset, ...]

    def __post_init__(self):
        sets = tuple(frozenset(frozenset(e) for e in s) for s in self.sets)
        for s in sets:
            for e in s:
                if len(e) != 2:
                    raise ValueError(f"edge {sorted(e)} does not join two distinct boxes")
        object.__setattr__(self, "sets", sets)

    @classmethod
    def empty(cls, dim: int) -> EdgePresets:
        return cls(tuple(frozenset() for _ in range(dim)))

    @classmethod
    def from_pairs(cls, dim: int, pairs: Mapping[int, Iterable[tuple[str, str]]]) -> EdgePresets:
        """``pairs`` maps a 0-based dimension to an iterable of id pairs."""
        sets = [set() for _ in range(dim)]
        for i, items in pairs.items():
            for a, b in items:
                sets[i].add(edge(a, b))
        return cls(tuple(frozenset(s) for s in sets))

    @property
    def dim(self) -> int:
        return len(self.sets)

    def adjacent(self, a: str, b: str, i: int) -> bool:
        return frozenset((a, b)) in self.sets[i]

    def check_ids(self, ids: Iterable[str]) -> None:
        known = set(ids)
        for s in self.sets:
            for e in s:
                missing = e - known
                if missing:
                    raise ValueError(f"edge endpoint(s) {sorted(missing)} not in instance")


def _check_unique(boxes: Sequence[Box]) -> None:
    seen = set()
    for b in boxes:
        if b.id in seen:
            raise ValueError(f"duplicate box id {b.id!r}")
        seen.add(b.id)


@dataclass(frozen=True)
class Instance:
    dim: int
    container: tuple[Fraction, ...]
    boxes: tuple[Box, ...] = ()
    edges: EdgePresets | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        container = tuple(to_fraction(c) for c in self.container)
        if len(container) != self.dim or any(c <= 0 for c in container):
            raise ValueError("container needs exactly d positive sizes")
        boxes = tuple(self.boxes)
        _check_unique(boxes)
        for b in boxes:
            if b.dim != self.dim:
                raise ValueError(f"box {b.id!r} has {b.dim} sizes, expected {self.dim}")
            if any(s > c for s, c in zip(b.size, container)):
                raise ValueError(f"box {b.id!r} does not fit into the container")
        if self.edges is not None:
            if self.edges.dim != self.dim:
                raise ValueError("edge presets have the wrong number of dimensions")
            self.edges.check_ids(b.id for b in boxes)
            if not any(self.edges.sets):
                object.__setattr__(self, "edges", None)
        object.__setattr__(self, "container", container)
        object.__setattr__(self, "boxes", boxes)


@dataclass(frozen=True)
class NormalizedInstance:
    """Boxes scaled into the unit cube; every size lies in (0, 1]."""

    dim: int
    boxes: tuple[Box, ...] = ()
    edges: EdgePresets | None = None
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        boxes = tuple(self.boxes)
        _check_unique(boxes)
        for b in boxes:
            if b.dim != self.dim:
                raise ValueError(f"box {b.id!r} has {b.dim} sizes, expected {self.dim}")
            if any(s > 1 for s in b.size):
                raise ValueError(f"box {b.id!r} exceeds the unit container")
        if self.edges is not None:
            if self.edges.dim != self.dim:
                raise ValueError("edge presets have the wrong number of dimensions")
            self.edges.check_ids(b.id for b in boxes)
        object.__setattr__(self, "boxes", boxes)
        object.__setattr__(self, "_index", {b.id: b for b in boxes})

    @classmethod
    def from_sizes(cls, sizes: Iterable[Sequence], values: Sequence | None = None,
                   edges: EdgePresets | None = None) -> NormalizedInstance:
        """Build an instance with ids ``"1"``, ``"2"``, ... from raw size vectors."""
        sizes = [tuple(to_fraction(s) for s in v) for v in sizes]
        if not sizes:
            raise ValueError("from_sizes needs at least one box to infer the dimension")
        boxes = tuple(
            Box(str(k + 1), s, None if values is None else values[k])
            for k, s in enumerate(sizes))
        return cls(len(sizes[0]), boxes, edges)

    def __len__(self) -> int:
        return len(self.boxes)

    def box(self, box_id: str) -> Box:
        try:
            return self._index[box_id]
        except KeyError:
            raise KeyError(f"unknown box id {box_id!r}") from None

    @property
    def ids(self) -> list[str]:
        return [b.id for b in self.boxes]

    def with_boxes(self, boxes: Iterable[Box]) -> NormalizedInstance:
        return NormalizedInstance(self.dim, tuple(boxes), self.edges)

    def subset(self, ids: Iterable[str]) -> NormalizedInstance:
        keep = set(ids)
        edges = None
        if self.edges is not None:
            edges = EdgePresets(tuple(frozenset(e for e in s if e <= keep)
                                      for s in self.edges.sets))
        return NormalizedInstance(self.dim, tuple(b for b in self.boxes if b.id in keep), edges)


def normalize(inst: Instance | NormalizedInstance) -> NormalizedInstance:
    if isinstance(inst, NormalizedInstance):
        return inst
    boxes = []
    for b in inst.boxes:
        if any(s > c for s, c in zip(b.size, inst.container)):
            raise ValueError(f"box {b.id!r} does not fit into the container")
        boxes.append(Box(b.id, tuple(s / c for s, c in zip(b.size, inst.container)), b.value))
    return NormalizedInstance(inst.dim, tuple(boxes), inst.edges)


def volume(size: Iterable[Fraction]) -> Fraction:
    return math.prod(size, start=Fraction(1))


def total_volume(boxes: Iterable[Box]) -> Fraction:
    return sum((volume(b.size) for b in boxes), Fraction(0))


# --- text format -----------------------------------------------------------

def _parse_rational(token: str, lineno: int) -> Fraction:
    try:
        value = to_fraction(token)
    except (ValueError, ZeroDivisionError):
        raise InstanceFormatError(f"malformed rational {token!r}", lineno) from None
    return value


def parse_instance(text: str) -> Instance:
    dim = None
    container = None
    boxes: list[Box] = []
    ids: set[str] = set()
    edge_lines: list[tuple[int, int, list[str]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "d":
            if dim is not None:
                raise InstanceFormatError("dimension given twice", lineno)
            if len(rest) != 1 or not rest[0].isdigit() or int(rest[0]) < 1:
                raise InstanceFormatError("expected 'd <positive int>'", lineno)
            dim = int(rest[0])
        elif head == "container":
            if dim is None:
                raise InstanceFormatError("'container' before 'd'", lineno)
            if container is not None:
                raise InstanceFormatError("container given twice", lineno)
            if len(rest) != dim:
                raise InstanceFormatError(f"container needs {dim} sizes, got {len(rest)}", lineno)
            container = tuple(_parse_rational(t, lineno) for t in rest)
            if any(c <= 0 for c in container):
                raise InstanceFormatError("container sizes must be positive", lineno)
        elif head == "box":
            if dim is None:
                raise InstanceFormatError("'box' before 'd'", lineno)
            if not rest:
                raise InstanceFormatError("box without id", lineno)
            box_id, *tokens = rest
            if "-" in box_id:
                raise InstanceFormatError(f"box id {box_id!r} may not contain '-'", lineno)
            value = None
            if "value" in tokens:
                k = tokens.index("value")
                if k != len(tokens) - 2:
                    raise InstanceFormatError("'value' must be followed by exactly one rational", lineno)
                value = _parse_rational(tokens[k + 1], lineno)
                tokens = tokens[:k]
            if len(tokens) != dim:
                raise InstanceFormatError(
                    f"box {box_id!r} needs {dim} sizes, got {len(tokens)}", lineno)
            if box_id in ids:
                raise InstanceFormatError(f"duplicate box id {box_id!r}", lineno)
            size = tuple(_parse_rational(t, lineno) for t in tokens)
            if any(s <= 0 for s in size):
                raise InstanceFormatError(f"box {box_id!r} has a nonpositive size", lineno)
            ids.add(box_id)
            boxes.append(Box(box_id, size, value))
        elif head == "edges":
            if dim is None:
                raise InstanceFormatError("'edges' before 'd'", lineno)
            if not rest or not rest[0].isdigit() or not 1 <= int(rest[0]) <= dim:
                raise InstanceFormatError(f"expected 'edges <1..{dim}> a-b ...'", lineno)
            edge_lines.append((lineno, int(rest[0]) - 1, rest[1:]))
        else:
            raise InstanceFormatError(f"unknown directive {head!r}", lineno)

    if dim is None:
        raise InstanceFormatError("missing 'd' directive")
    if container is None:
        raise InstanceFormatError("missing 'container' directive")

    edges = None
    if edge_lines:
        sets = [set() for _ in range(dim)]
        for lineno, i, tokens in edge_lines:
            for tok in tokens:
                parts = tok.split("-")
                if len(parts) != 2 or not all(parts):
                    raise InstanceFormatError(f"malformed edge {tok!r}", lineno)
                a, b = parts
                for end in (a, b):
                    if end not in ids:
                        raise InstanceFormatError(f"edge endpoint {end!r} is not a box", lineno)
                if a == b:
                    raise InstanceFormatError(f"self-loop edge {tok!r}", lineno)
                sets[i].add(frozenset((a, b)))
        edges = EdgePresets(tuple(frozenset(s) for s in sets))

    for b in boxes:
        if any(s > c for s, c in zip(b.size, container)):
            raise InstanceFormatError(f"box {b.id!r} does not fit into the container")
    return Instance(dim, container, tuple(boxes), edges)


def _edge_key(e: frozenset, order: Mapping[str, int]) -> tuple[str, str]:
    a, b = sorted(e, key=lambda x: order[x])
    return a, b


def serialize_instance(inst: Instance) -> str:
    lines = [f"d {inst.dim}", "container " + " ".join(str(c) for c in inst.container)]
    for b in inst.boxes:
        line = f"box {b.id} " + " ".join(str(s) for s in b.size)
        if b.value is not None:
            line += f" value {b.value}"
        lines.append(line)
    if inst.edges is not None:
        order = {b.id: k for k, b in enumerate(inst.boxes)}
        for i, s in enumerate(inst.edges.sets):
            if s:
                pairs = sorted(_edge_key(e, order) for e in s)
                pairs.sort(key=lambda p: (order[p[0]], order[p[1]]))
                lines.append(f"edges {i + 1} " + " ".join(f"{a}-{b}" for a, b in pairs))
    return "\n".join(lines) + "\n"
