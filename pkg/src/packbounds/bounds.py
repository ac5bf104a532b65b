"""Lower bounds and infeasibility tests built on conservative scales.

Covers the transformed volume criterion, strip-packing and bin-packing
volume bounds, the Martello-Vigo style partial bounds in 2D and 3D with
their scale-based improvements, the composite bounds ``L_2d``/``L_3d``,
the OKP knapsack relaxation and the clique requirement for packing classes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, NamedTuple, Sequence

from . import oracle
from .dff import IDENTITY, DffSpec, PhiStep, Threshold, UStep, candidate_params
from .model import Box, NormalizedInstance, volume
from .scales import ConservativeScale

__all__ = [
    "BoundReport", "VolumeCheck", "transformed_volume", "volume_criterion",
    "bound_spp", "bound_obpp", "best_scale", "mv_partial_2d", "improved_2d",
    "l2d_scales", "bound_L2d", "mv_partial_3d", "improved_3d", "l3d_scales",
    "bound_L3d", "okp_relaxation_bound", "clique_requirement", "default_battery",
    "spp_battery",
]

HALF = Fraction(1, 2)
U1 = UStep(1)
KINDS = ("SPP", "OBPP", "OKP", "OPP-infeasibility", "clique")


@dataclass(frozen=True)
class BoundReport:
    kind: str
    value: Fraction | int
    scale: ConservativeScale
    family: str | None = None
    params: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")


class VolumeCheck(NamedTuple):
    infeasible: bool
    volume: Fraction
    scale: ConservativeScale

    @property
    def verdict(self) -> str:
        return "Infeasible" if self.infeasible else "Pass"


def transformed_volume(inst: NormalizedInstance, s: ConservativeScale) -> Fraction:
    return sum((volume(s.transform(b)) for b in inst.boxes), Fraction(0))


def volume_criterion(inst: NormalizedInstance, s: ConservativeScale) -> VolumeCheck:
    """Transformed volume above 1 proves that no packing exists (no packing
    class respecting the presets, for preset-aware scales)."""
    vol = transformed_volume(inst, s)
    return VolumeCheck(vol > 1, vol, s)


def best_scale(inst: NormalizedInstance, scales: Iterable[ConservativeScale]
               ) -> tuple[Fraction, ConservativeScale]:
    """Largest transformed volume and the first scale attaining it."""
    best = None
    for s in scales:
        vol = transformed_volume(inst, s)
        if best is None or vol > best[0]:
            best = (vol, s)
    if best is None:
        raise ValueError("the scale set is empty")
    return best


def bound_spp(inst: NormalizedInstance, scales: Iterable[ConservativeScale]) -> Fraction:
    """Strip height lower bound; the last axis is the strip axis and the
    scales must leave it untouched."""
    return best_scale(inst, scales)[0]


def bound_obpp(inst: NormalizedInstance, scales: Iterable[ConservativeScale]) -> int:
    return math.ceil(best_scale(inst, scales)[0])


# --- two dimensions ---------------------------------------------------------------

def _check_params(inst: NormalizedInstance, dim: int, *params: Fraction) -> None:
    if inst.dim != dim:
        raise ValueError(f"this bound needs a {dim}-dimensional instance, got {inst.dim}")
    for p in params:
        if not 0 < p <= HALF:
            raise ValueError(f"parameter {p} outside (0, 1/2]")


def mv_partial_2d(inst: NormalizedInstance, p, q) -> int:
    """The Martello-Vigo partial bound ``L(p, q)`` over the sets I1, I2, I3."""
    p, q = Fraction(p), Fraction(q)
    _check_params(inst, 2, p, q)
    fp, fq = math.floor(1 / p), math.floor(1 / q)
    i1 = [b for b in inst.boxes if b.size[0] > 1 - p and b.size[1] > 1 - q]
    in_i1 = {b.id for b in i1}
    i2 = [b for b in inst.boxes
          if b.id not in in_i1 and b.size[0] > HALF and b.size[1] > HALF]
    i3 = [b for b in inst.boxes if HALF >= b.size[0] >= p and HALF >= b.size[1] >= q]

    def m(b: Box) -> int:
        a1 = math.floor((1 - b.size[0]) / p)
        a2 = math.floor((1 - b.size[1]) / q)
        return fp * a2 + fq * a1 - a1 * a2

    slack = len(i3) - sum(m(b) for b in i2)
    return len(i1) + len(i2) + math.ceil(Fraction(slack, fp * fq))


def improved_2d(inst: NormalizedInstance, p, q) -> int:
    p, q = Fraction(p), Fraction(q)
    _check_params(inst, 2, p, q)
    return math.ceil(transformed_volume(inst, ConservativeScale.of(PhiStep(p), PhiStep(q))))


class _Family(NamedTuple):
    name: str
    # each slot: a fixed spec, or (maker, parameter index)
    slots: tuple


def _expand(inst: NormalizedInstance, families: Sequence[_Family]
            ) -> Iterator[tuple[str, tuple[Fraction, ...], ConservativeScale]]:
    cands = [candidate_params(inst, i) for i in range(inst.dim)]
    for fam in families:
        param_dims = {}
        for axis, slot in enumerate(fam.slots):
            if isinstance(slot, tuple):
                param_dims[slot[1]] = axis
        grids = [cands[param_dims[k]] for k in sorted(param_dims)]
        for params in product(*grids):
            specs = tuple(slot if isinstance(slot, DffSpec) else slot[0](params[slot[1]])
                          for slot in fam.slots)
            label = fam.name + ("(" + ",".join(str(x) for x in params) + ")" if params else "")
            yield fam.name, tuple(params), ConservativeScale.of(*specs, provenance=label)


def _extra_families(dim: int, extra_ustep: int) -> list[_Family]:
    if extra_ustep < 2:
        return []
    choices = [IDENTITY] + [UStep(k) for k in range(2, extra_ustep + 1)]
    fams = []
    for combo in product(choices, repeat=dim):
        if all(f is IDENTITY for f in combo):
            continue
        fams.append(_Family("u[" + ",".join(str(f) for f in combo) + "]", combo))
    return fams


L2D_FAMILIES = (
    _Family("w1", (U1, (Threshold, 0))),
    _Family("w2", ((Threshold, 0), U1)),
    _Family("w3", (U1, (PhiStep, 0))),
    _Family("w4", ((PhiStep, 0), U1)),
    _Family("w5", (IDENTITY, (Threshold, 0))),
    _Family("w6", ((Threshold, 0), IDENTITY)),
    _Family("w7", ((PhiStep, 0), (PhiStep, 1))),
)

L3D_FAMILIES = (
    _Family("w1", (U1, U1, (Threshold, 0))),
    _Family("w2", (U1, (Threshold, 0), U1)),
    _Family("w3", ((Threshold, 0), U1, U1)),
    _Family("w4", (U1, U1, (PhiStep, 0))),
    _Family("w5", (U1, (PhiStep, 0), U1)),
    _Family("w6", ((PhiStep, 0), U1, U1)),
    _Family("w7", ((Threshold, 0), (Threshold, 1), IDENTITY)),
    _Family("w8", ((Threshold, 0), IDENTITY, (Threshold, 1))),
    _Family("w9", (IDENTITY, (Threshold, 0), (Threshold, 1))),
)


def l2d_scales(inst: NormalizedInstance, extra_ustep: int = 0):
    """Yield ``(family, params, scale)`` for every member of the seven 2D
    families at candidate parameters."""
    _check_params(inst, 2)
    yield from _expand(inst, L2D_FAMILIES + tuple(_extra_families(2, extra_ustep)))


def l3d_scales(inst: NormalizedInstance, extra_ustep: int = 0):
    _check_params(inst, 3)
    yield from _expand(inst, L3D_FAMILIES + tuple(_extra_families(3, extra_ustep)))


def _best_report(inst: NormalizedInstance, members) -> BoundReport:
    best = None
    for family, params, scale in members:
        value = math.ceil(transformed_volume(inst, scale))
        if best is None or value > best.value:
            best = BoundReport("OBPP", value, scale, family, params)
    return best


def bound_L2d(inst: NormalizedInstance, extra_ustep: int = 0) -> BoundReport:
    return _best_report(inst, l2d_scales(inst, extra_ustep))


def mv_partial_3d(inst: NormalizedInstance, p, q) -> int:
    """The simplified 3D partial bound over the sets J1 and J2."""
    p, q = Fraction(p), Fraction(q)
    _check_params(inst, 3, p, q)
    total = Fraction(0)
    for b in inst.boxes:
        w1, w2, w3 = b.size
        if w1 > 1 - p and w2 > 1 - q:
            total += w3
        elif w1 > p and w2 > q:
            total += w1 * w2 * w3
    return math.ceil(total)


def improved_3d(inst: NormalizedInstance, p, q) -> int:
    p, q = Fraction(p), Fraction(q)
    _check_params(inst, 3, p, q)
    scale = ConservativeScale.of(Threshold(p), Threshold(q), IDENTITY)
    return math.ceil(transformed_volume(inst, scale))


def bound_L3d(inst: NormalizedInstance, extra_ustep: int = 0) -> BoundReport:
    return _best_report(inst, l3d_scales(inst, extra_ustep))


# --- knapsack and packing classes ----------------------------------------------------

def okp_relaxation_bound(inst: NormalizedInstance, s: ConservativeScale) -> Fraction:
    """Upper bound on the OKP optimum: a 0/1 knapsack with transformed
    volumes as weights, box values as profits and capacity 1."""
    missing = [b.id for b in inst.boxes if b.value is None]
    if missing:
        raise ValueError(f"boxes without value: {missing}")
    items = [(volume(s.transform(b)), b.value) for b in inst.boxes]
    return oracle.knapsack(items, Fraction(1))


def clique_requirement(boxes: Iterable[Box], s: ConservativeScale, i: int) -> int:
    """Clique size the i-th component graph must contain on ``boxes``."""
    return math.ceil(sum((s.transform(b)[i] for b in boxes), Fraction(0)))


# --- scale batteries --------------------------------------------------------------

def default_battery(inst: NormalizedInstance, extra_ustep: int = 0) -> list[ConservativeScale]:
    """Identity, uniform ``u(k)`` for k = 1..4, and the composite families
    in two and three dimensions."""
    d = inst.dim
    scales = [ConservativeScale.identity(d)]
    scales += [ConservativeScale.of(*(UStep(k),) * d) for k in range(1, 5)]
    if d == 2:
        scales += [s for _, _, s in l2d_scales(inst, extra_ustep)]
    elif d == 3:
        scales += [s for _, _, s in l3d_scales(inst, extra_ustep)]
    return scales


def spp_battery(inst: NormalizedInstance) -> list[ConservativeScale]:
    """Scales acting on the base axes only; the strip axis keeps its sizes."""
    d = inst.dim
    scales = [ConservativeScale.identity(d)]
    if d == 1:
        return scales
    for k in range(1, 5):
        scales.append(ConservativeScale.of(*(UStep(k),) * (d - 1), IDENTITY))
    for i in range(d - 1):
        for p in candidate_params(inst, i):
            for maker in (Threshold, PhiStep):
                specs = [IDENTITY] * d
                specs[i] = maker(p)
                scales.append(ConservativeScale.of(*specs))
    return scales

