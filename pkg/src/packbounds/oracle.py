"""Brute-force ground truth for desk-scale instances.

Everything here is deliberately simple and exhaustive; the bound modules are
tested against these engines, never the other way round.  Each engine has a
size guard and raises :class:`OracleTooLarge` instead of guessing.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Hashable, Iterable, NamedTuple, Sequence

import numpy as np

from .model import Box, NormalizedInstance, volume

__all__ = [
    "OracleTooLarge", "DffVerdict", "check_dff", "enumerate_dff_multisets",
    "find_packing", "exact_packable", "min_bins", "min_strip_height", "okp_optimum",
    "WeightBound", "knapsack_max_weight", "knapsack",
    "PackingClass", "PackingClassVerdict", "validate_packing_class",
    "packing_class_from_placement", "is_interval_graph", "exists_packing_class",
    "max_clique",
]

DP_GRID_LIMIT = 10**6
EXACT_COMPANION_LIMIT = 24


class OracleTooLarge(ValueError):
    """The instance exceeds the oracle's size guard."""


# --- dual feasibility ----------------------------------------------------------

class DffVerdict(NamedTuple):
    holds: bool
    counterexample: tuple[Fraction, ...] | None = None
    image_sum: Fraction | None = None


def _farey(max_denominator: int) -> list[Fraction]:
    return sorted({Fraction(p, q) for q in range(1, max_denominator + 1)
                   for p in range(1, q + 1)})


def check_dff(f: Callable[[Fraction], Fraction], max_denominator: int = 12) -> DffVerdict:
    """Search every multiset of rationals in (0, 1] with denominators up to
    ``max_denominator`` and sum at most 1 for one whose image sum exceeds 1.

    The search is an unbounded-knapsack dynamic program over the grid
    ``1/lcm(1..D)``; it covers exactly the same multisets as explicit
    enumeration and returns a maximizing multiset when the property fails.
    """
    if max_denominator < 2:
        raise ValueError("max_denominator must be at least 2")
    zero = Fraction(f(Fraction(0)))
    if zero > 0:
        copies = math.floor(1 / zero) + 1
        return DffVerdict(False, (Fraction(0),) * copies, copies * zero)
    points = _farey(max_denominator)
    images = [Fraction(f(x)) for x in points]
    for x, y in zip(points, images):
        if not 0 <= y <= 1:
            return DffVerdict(False, (x,), y)

    grid = reduce(math.lcm, range(1, max_denominator + 1))
    scale = reduce(math.lcm, (y.denominator for y in images), 1)
    weights = [int(x * grid) for x in points]
    values = [int(y * scale) for y in images]
    dtype = np.int64 if scale * max_denominator < 2**62 else object

    dp = np.zeros(grid + 1, dtype=dtype)
    layers = []
    for w, v in zip(weights, values):
        if v:
            # row j, column r holds capacity r + j*w; accumulate down the columns
            rows = -(-(grid + 1) // w)
            block = np.zeros(rows * w, dtype=dtype)
            block[:grid + 1] = dp
            block = block.reshape(rows, w)
            steps = (np.arange(rows, dtype=dtype) * v)[:, None]
            block = np.maximum.accumulate(block - steps, axis=0) + steps
            dp = block.reshape(-1)[:grid + 1].copy()
        layers.append(dp.copy())
    best = Fraction(int(dp[grid]), scale)
    if best <= 1:
        return DffVerdict(True, None, best)

    chosen = []
    k, c = len(points) - 1, grid
    while k >= 0 and layers[k][c] > 0:
        prev = layers[k - 1][c] if k else 0
        if layers[k][c] == prev:
            k -= 1
        else:
            chosen.append(points[k])
            c -= weights[k]
    return DffVerdict(False, tuple(sorted(chosen)), best)


def enumerate_dff_multisets(max_denominator: int) -> Iterable[tuple[Fraction, ...]]:
    """Yield every nonempty multiset (as a nonincreasing tuple) of rationals in
    (0, 1] with denominators up to ``max_denominator`` summing to at most 1."""
    points = sorted(_farey(max_denominator), reverse=True)

    def rec(start, remaining, prefix):
        for k in range(start, len(points)):
            x = points[k]
            if x <= remaining:
                chosen = prefix + (x,)
                yield chosen
                yield from rec(k, remaining - x, chosen)

    yield from rec(0, Fraction(1), ())


# --- exact packing -------------------------------------------------------------

def _subset_sums(values: Sequence[Fraction], cap: Fraction) -> list[Fraction]:
    sums = {Fraction(0)}
    for v in values:
        sums |= {s + v for s in sums if s + v <= cap}
    return sorted(sums)


def _overlap(pa, sa, pb, sb) -> bool:
    return all(a < b + wb and b < a + wa for a, wa, b, wb in zip(pa, sa, pb, sb))


def find_packing(inst: NormalizedInstance, max_boxes: int = 8,
                 container: Sequence[Fraction] | None = None) -> dict[str, tuple[Fraction, ...]] | None:
    """Return positions (lower corners) of a packing into the container, or None.

    Positions are restricted to normal patterns: every coordinate of a box is
    a sum of sizes of other boxes in that dimension.  Any packing can be
    pushed towards the origin until it has this form, so the search is exact.
    """
    n, d = len(inst.boxes), inst.dim
    if n > max_boxes:
        raise OracleTooLarge(f"{n} boxes exceed the packing oracle guard of {max_boxes}")
    cont = tuple(Fraction(1) for _ in range(d)) if container is None else tuple(container)
    if any(s > c for b in inst.boxes for s, c in zip(b.size, cont)):
        return None
    if n == 0:
        return {}
    if sum(volume(b.size) for b in inst.boxes) > volume(cont):
        return None

    order = sorted(inst.boxes, key=lambda b: (-volume(b.size), b.size, b.id))
    sizes = [b.size for b in order]
    candidates = []
    for k, b in enumerate(order):
        per_dim = []
        for i in range(d):
            others = [sizes[j][i] for j in range(n) if j != k]
            per_dim.append(_subset_sums(others, cont[i] - b.size[i]))
        candidates.append(list(itertools.product(*per_dim)))
    twin_of = [max((j for j in range(k) if sizes[j] == sizes[k]), default=None)
               for k in range(n)]
    placed: list[tuple[Fraction, ...]] = []

    def rec(k):
        if k == n:
            return True
        floor = placed[twin_of[k]] if twin_of[k] is not None else None
        for pos in candidates[k]:
            if floor is not None and pos <= floor:
                continue
            if any(_overlap(pos, sizes[k], placed[j], sizes[j]) for j in range(k)):
                continue
            placed.append(pos)
            if rec(k + 1):
                return True
            placed.pop()
        return False

    if not rec(0):
        return None
    return {b.id: p for b, p in zip(order, placed)}


def exact_packable(inst: NormalizedInstance, max_boxes: int = 8) -> bool:
    return find_packing(inst, max_boxes) is not None


def min_bins(inst: NormalizedInstance, max_boxes: int = 8) -> int:
    """Fewest unit containers holding all boxes, by search over set partitions."""
    boxes = list(inst.boxes)
    if len(boxes) > max_boxes:
        raise OracleTooLarge(f"{len(boxes)} boxes exceed the bin oracle guard of {max_boxes}")
    memo: dict[frozenset, bool] = {}

    def fits(group: frozenset) -> bool:
        if group not in memo:
            memo[group] = exact_packable(inst.subset(group), max_boxes)
        return memo[group]

    best = len(boxes)

    def rec(k, bins):
        nonlocal best
        if len(bins) >= best:
            return
        if k == len(boxes):
            best = len(bins)
            return
        b = boxes[k].id
        for j in range(len(bins)):
            grown = bins[j] | {b}
            if fits(grown):
                rec(k + 1, bins[:j] + [grown] + bins[j + 1:])
        rec(k + 1, bins + [frozenset({b})])

    if not boxes:
        return 0
    rec(0, [])
    return best


def min_strip_height(inst: NormalizedInstance, max_boxes: int = 8) -> Fraction:
    """Optimal strip height along the last axis, other axes of unit width.

    The optimum is a sum of box heights, so a bisection over the sorted
    subset sums (feasibility is monotone in the height) is exact.
    """
    if not inst.boxes:
        return Fraction(0)
    heights = [b.size[-1] for b in inst.boxes]
    total = sum(heights)
    cands = [h for h in _subset_sums(heights, total) if h >= max(heights)]
    d = inst.dim

    def ok(h):
        cont = (Fraction(1),) * (d - 1) + (h,)
        return find_packing(inst, max_boxes, container=cont) is not None

    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def okp_optimum(inst: NormalizedInstance, max_boxes: int = 8) -> Fraction:
    """Largest total value of a packable subset, by subset enumeration."""
    boxes = list(inst.boxes)
    if len(boxes) > max_boxes:
        raise OracleTooLarge(f"{len(boxes)} boxes exceed the knapsack oracle guard of {max_boxes}")
    if any(b.value is None for b in boxes):
        raise ValueError("every box needs a value")
    best = Fraction(0)
    for r in range(1, len(boxes) + 1):
        for combo in itertools.combinations(boxes, r):
            value = sum(b.value for b in combo)
            if value > best and exact_packable(inst.subset(b.id for b in combo), max_boxes):
                best = value
    return best


# --- one-dimensional knapsacks -----------------------------------------------------

class WeightBound(NamedTuple):
    value: Fraction
    exact: bool


def knapsack_max_weight(items: Sequence[tuple[Hashable, Fraction]], conflicts: Iterable[frozenset],
                        forced: Hashable, capacity: Fraction = Fraction(1)) -> WeightBound:
    """Heaviest conflict-free subset containing ``forced`` within ``capacity``.

    ``items`` must include ``forced``.  Exact when at most
    ``EXACT_COMPANION_LIMIT`` items may join ``forced``; otherwise the
    conflicts among the companions are ignored and the result is an upper
    bound (``exact=False``).
    """
    weights = {k: Fraction(w) for k, w in items}
    if forced not in weights:
        raise KeyError(f"forced item {forced!r} not among the items")
    conflicts = {frozenset(e) for e in conflicts}
    base = weights[forced]
    if base > capacity:
        raise ValueError("forced item alone exceeds the capacity")
    room = capacity - base
    free = [k for k in weights if k != forced and frozenset((k, forced)) not in conflicts
            and weights[k] <= room]

    if len(free) > EXACT_COMPANION_LIMIT:
        sums = _subset_sum_max([weights[k] for k in free], room)
        return WeightBound(base + sums, False)

    free.sort(key=lambda k: weights[k], reverse=True)
    suffix = [Fraction(0)] * (len(free) + 1)
    for j in range(len(free) - 1, -1, -1):
        suffix[j] = suffix[j + 1] + weights[free[j]]
    best = Fraction(0)

    def rec(j, load, chosen):
        nonlocal best
        if load > best:
            best = load
        if j == len(free) or load + suffix[j] <= best or best == room:
            return
        k = free[j]
        if load + weights[k] <= room and not any(frozenset((k, c)) in conflicts for c in chosen):
            rec(j + 1, load + weights[k], chosen + [k])
        rec(j + 1, load, chosen)

    rec(0, Fraction(0), [])
    return WeightBound(base + best, True)


def _subset_sum_max(weights: Sequence[Fraction], cap: Fraction) -> Fraction:
    grid = reduce(math.lcm, (w.denominator for w in weights), cap.denominator)
    limit = int(cap * grid)
    if limit > DP_GRID_LIMIT:
        return cap
    reach = 1
    mask = (1 << (limit + 1)) - 1
    for w in weights:
        reach |= (reach << int(w * grid)) & mask
    return Fraction(reach.bit_length() - 1, grid)


def knapsack(items: Sequence[tuple[Fraction, Fraction]], capacity: Fraction = Fraction(1)) -> Fraction:
    """Exact 0/1 knapsack optimum over rational weights and profits."""
    items = [(Fraction(w), Fraction(p)) for w, p in items]
    items = [(w, p) for w, p in items if w <= capacity and p > 0]
    if not items:
        return Fraction(0)
    grid = reduce(math.lcm, (w.denominator for w, _ in items), Fraction(capacity).denominator)
    limit = int(capacity * grid)
    pscale = reduce(math.lcm, (p.denominator for _, p in items), 1)
    profits = [int(p * pscale) for _, p in items]
    if limit <= DP_GRID_LIMIT and sum(profits) < 2**62:
        dp = np.zeros(limit + 1, dtype=np.int64)
        for (w, _), p in zip(items, profits):
            step = int(w * grid)
            if step == 0:
                dp += p
                continue
            shifted = dp[:-step] + p
            dp[step:] = np.maximum(dp[step:], shifted)
        return Fraction(int(dp[limit]), pscale)
    return _knapsack_bnb(items, Fraction(capacity))


def _knapsack_bnb(items, capacity):
    items = sorted(items, key=lambda it: it[1] / it[0] if it[0] else math.inf, reverse=True)
    best = Fraction(0)

    def relaxation(j, room):
        total = Fraction(0)
        for w, p in items[j:]:
            if w <= room:
                room -= w
                total += p
            else:
                return total + p * room / w
        return total

    def rec(j, room, value):
        nonlocal best
        if value > best:
            best = value
        if j == len(items) or value + relaxation(j, room) <= best:
            return
        w, p = items[j]
        if w <= room:
            rec(j + 1, room - w, value + p)
        rec(j + 1, room, value)

    rec(0, capacity, Fraction(0))
    return best


# --- packing classes ---------------------------------------------------------------

@dataclass(frozen=True)
class PackingClass:
    """One edge set per dimension over box ids (the component graphs)."""

    edges: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(frozenset(frozenset(e) for e in s)
                                                for s in self.edges))


class PackingClassVerdict(NamedTuple):
    valid: bool
    condition: str | None = None  # "P1", "P2" or "P3"
    dim: int | None = None
    detail: str = ""


def _adjacency(vertices, edges):
    adj = {v: set() for v in vertices}
    for e in edges:
        a, b = tuple(e)
        adj[a].add(b)
        adj[b].add(a)
    return adj


def is_interval_graph(vertices: Sequence, edges: Iterable[frozenset]) -> bool:
    """Brute-force recognition: search vertex orders v1..vn and give v_j the
    interval [j, r_j] with r_j the last later neighbour; accept if some order
    reproduces the edge set exactly."""
    vertices = list(vertices)
    adj = _adjacency(vertices, edges)
    n = len(vertices)
    order: list = []

    def consistent(prefix):
        # umbrella rule for the newest vertex w: u < v < w and uw in E imply uv in E
        w = prefix[-1]
        for a in range(len(prefix) - 1):
            u = prefix[a]
            if w in adj[u] and any(prefix[b] not in adj[u] for b in range(a + 1, len(prefix) - 1)):
                return False
        return True

    def intervals_match(seq):
        pos = {v: k for k, v in enumerate(seq)}
        right = {v: max([pos[u] for u in adj[v] if pos[u] > pos[v]], default=pos[v]) for v in seq}
        for a, b in itertools.combinations(seq, 2):
            lo, hi = (a, b) if pos[a] < pos[b] else (b, a)
            if (pos[hi] <= right[lo]) != (hi in adj[lo]):
                return False
        return True

    used = set()

    def rec():
        if len(order) == n:
            return intervals_match(order)
        for v in vertices:
            if v in used:
                continue
            order.append(v)
            used.add(v)
            if consistent(order) and rec():
                return True
            order.pop()
            used.discard(v)
        return False

    return rec()


def _stable_sets(vertices, adj):
    vertices = list(vertices)
    for r in range(1, len(vertices) + 1):
        for combo in itertools.combinations(vertices, r):
            if all(b not in adj[a] for a, b in itertools.combinations(combo, 2)):
                yield combo


def validate_packing_class(pc: PackingClass, inst: NormalizedInstance,
                           max_boxes: int = 8) -> PackingClassVerdict:
    ids = inst.ids
    if len(ids) > max_boxes:
        raise OracleTooLarge(f"{len(ids)} boxes exceed the packing-class guard of {max_boxes}")
    if len(pc.edges) != inst.dim:
        raise ValueError("packing class needs one edge set per dimension")
    known = set(ids)
    for s in pc.edges:
        for e in s:
            if len(e) != 2 or not e <= known:
                raise ValueError(f"edge {sorted(e)} is not a pair of instance boxes")

    for i, s in enumerate(pc.edges):
        if not is_interval_graph(ids, s):
            return PackingClassVerdict(False, "P1", i, "component graph is not an interval graph")
    for i, s in enumerate(pc.edges):
        adj = _adjacency(ids, s)
        for stable in _stable_sets(ids, adj):
            width = sum(inst.box(b).size[i] for b in stable)
            if width > 1:
                return PackingClassVerdict(
                    False, "P2", i, f"stable set {list(stable)} has width {width} > 1")
    common = frozenset.intersection(*pc.edges) if pc.edges else frozenset()
    if common:
        e = sorted(next(iter(common)))
        return PackingClassVerdict(False, "P3", None, f"edge {e[0]}-{e[1]} lies in every component graph")
    return PackingClassVerdict(True)


def packing_class_from_placement(inst: NormalizedInstance,
                                 positions: dict[str, Sequence[Fraction]]) -> PackingClass:
    """Component graphs of a placement: boxes are adjacent in dimension i when
    their projections on axis i overlap in an interval of positive length."""
    sets = []
    for i in range(inst.dim):
        s = set()
        for a, b in itertools.combinations(inst.boxes, 2):
            xa, xb = positions[a.id][i], positions[b.id][i]
            if xa < xb + b.size[i] and xb < xa + a.size[i]:
                s.add(frozenset((a.id, b.id)))
        sets.append(frozenset(s))
    return PackingClass(tuple(sets))


def exists_packing_class(inst: NormalizedInstance, max_boxes: int = 5) -> bool:
    """Exhaustive search over tuples of component graphs for (P1)-(P3)."""
    ids = inst.ids
    if len(ids) > max_boxes:
        raise OracleTooLarge(f"{len(ids)} boxes exceed the enumeration guard of {max_boxes}")
    pairs = [frozenset(p) for p in itertools.combinations(ids, 2)]
    per_dim = []
    for i in range(inst.dim):
        good = []
        for mask in range(1 << len(pairs)):
            s = frozenset(pairs[j] for j in range(len(pairs)) if mask >> j & 1)
            if not is_interval_graph(ids, s):
                continue
            adj = _adjacency(ids, s)
            if all(sum(inst.box(b).size[i] for b in st) <= 1 for st in _stable_sets(ids, adj)):
                good.append(mask)
        per_dim.append(good)
    full = (1 << len(pairs)) - 1
    if not pairs:
        return all(per_dim)

    def rec(i, common):
        if i == len(per_dim):
            return common == 0
        return any(rec(i + 1, common & m) for m in per_dim[i])

    return rec(0, full)


def max_clique(vertices: Sequence, edges: Iterable[frozenset], max_vertices: int = 12) -> int:
    vertices = list(vertices)
    n = len(vertices)
    if n > max_vertices:
        raise OracleTooLarge(f"{n} vertices exceed the clique guard of {max_vertices}")
    index = {v: k for k, v in enumerate(vertices)}
    adj = [0] * n
    for e in edges:
        a, b = (index[v] for v in e)
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        if all(mask & ~(1 << k) & ~adj[k] == 0 for k in range(n) if mask >> k & 1):
            best = size
    return best


def check_scale(inst: NormalizedInstance, scaled: NormalizedInstance,
                edges=None, max_boxes: int = 16) -> tuple[bool, tuple | None]:
    """Exhaustively confirm that every i-feasible set whose pairs avoid the
    presets of dimension i stays i-feasible under the scaled sizes.

    Returns ``(True, None)`` or ``(False, (i, ids))`` for a violating set.
    """
    boxes = list(inst.boxes)
    if len(boxes) > max_boxes:
        raise OracleTooLarge(f"{len(boxes)} boxes exceed the scale-check guard of {max_boxes}")
    if edges is None:
        edges = inst.edges
    new = {b.id: b.size for b in scaled.boxes}
    for i in range(inst.dim):
        preset = edges.sets[i] if edges is not None else frozenset()
        found = None

        def rec(j, chosen, width, scaled_width):
            nonlocal found
            if found is not None:
                return
            if scaled_width > 1:
                found = (i, tuple(chosen))
                return
            for k in range(j, len(boxes)):
                b = boxes[k]
                if width + b.size[i] > 1:
                    continue
                if any(frozenset((b.id, c)) in preset for c in chosen):
                    continue
                chosen.append(b.id)
                rec(k + 1, chosen, width + b.size[i], scaled_width + new[b.id][i])
                chosen.pop()

        rec(0, [], Fraction(0), Fraction(0))
        if found is not None:
            return False, found
    return True, None
