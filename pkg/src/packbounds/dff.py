"""Dual feasible functions on [0, 1] and their closure under composition
and convex combination.

A function ``u: [0,1] -> [0,1]`` is dual feasible when every finite multiset
summing to at most 1 still sums to at most 1 after applying ``u``.  Three
parametric families are provided (``UStep``, ``Threshold``, ``PhiStep``)
together with ``Compose`` and ``Convex``.  Every spec is an immutable value,
callable on a :class:`~fractions.Fraction`, and has a canonical text form::

    id   u(2)   U(1/3)   phi(1/4)   compose(u(1),U(1/3))   convex(1/2*u(2)+1/2*id)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .model import NormalizedInstance, to_fraction

__all__ = [
    "DffSpec", "Identity", "UStep", "Threshold", "PhiStep", "Compose", "Convex",
    "IDENTITY", "evaluate", "parse_dff", "candidate_params",
]

HALF = Fraction(1, 2)


class DffSpec:
    """Base class; subclasses implement ``_eval`` on x already checked in [0, 1]."""

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def _eval(self, x: Fraction) -> Fraction:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(DffSpec):
    def _eval(self, x):
        return x

    def __str__(self):
        return "id"


@dataclass(frozen=True)
class UStep(DffSpec):
    """``x`` where ``(k+1)x`` is integral, else ``floor((k+1)x) / k``."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"u(k) needs a positive integer k, got {self.k!r}")

    def _eval(self, x):
        scaled = (self.k + 1) * x
        if scaled.denominator == 1:
            return x
        return Fraction(math.floor(scaled), self.k)

    def __str__(self):
        return f"u({self.k})"


@dataclass(frozen=True)
class Threshold(DffSpec):
    """Drops items below ``eps`` and rounds items above ``1 - eps`` up to 1."""

    eps: Fraction

    def __post_init__(self):
        eps = to_fraction(self.eps)
        if not 0 <= eps <= HALF:
            raise ValueError(f"U(eps) needs eps in [0, 1/2], got {eps}")
        object.__setattr__(self, "eps", eps)

    def _eval(self, x):
        if x > 1 - self.eps:
            return Fraction(1)
        if x < self.eps:
            return Fraction(0)
        return x

    def __str__(self):
        return f"U({self.eps})"


@dataclass(frozen=True)
class PhiStep(DffSpec):
    """Step function: 0 below ``eps``, ``1/floor(1/eps)`` up to 1/2, stairs above.

    ``eps = 1/2`` is admitted; its dual feasibility is checked by the oracle.
    """

    eps: Fraction

    def __post_init__(self):
        eps = to_fraction(self.eps)
        if not 0 < eps <= HALF:
            raise ValueError(f"phi(eps) needs eps in (0, 1/2], got {eps}")
        object.__setattr__(self, "eps", eps)

    def _eval(self, x):
        steps = math.floor(1 / self.eps)
        if x > HALF:
            return 1 - Fraction(math.floor((1 - x) / self.eps), steps)
        if x >= self.eps:
            return Fraction(1, steps)
        return Fraction(0)

    def __str__(self):
        return f"phi({self.eps})"


@dataclass(frozen=True)
class Compose(DffSpec):
    """``outer(inner(x))``."""

    outer: DffSpec
    inner: DffSpec

    def _eval(self, x):
        return self.outer._eval(self.inner._eval(x))

    def __str__(self):
        return f"compose({self.outer},{self.inner})"


@dataclass(frozen=True)
class Convex(DffSpec):
    terms: tuple[tuple[Fraction, DffSpec], ...]

    def __post_init__(self):
        terms = tuple((to_fraction(w), f) for w, f in self.terms)
        if not terms:
            raise ValueError("convex combination needs at least one term")
        if any(w < 0 for w, _ in terms):
            raise ValueError("convex weights must be nonnegative")
        if sum(w for w, _ in terms) != 1:
            raise ValueError("convex weights must sum to exactly 1")
        object.__setattr__(self, "terms", terms)

    def _eval(self, x):
        return sum((w * f._eval(x) for w, f in self.terms), Fraction(0))

    def __str__(self):
        return "convex(" + "+".join(f"{w}*{f}" for w, f in self.terms) + ")"


IDENTITY = Identity()


def evaluate(f: DffSpec, x) -> Fraction:
    x = to_fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"argument {x} outside [0, 1]")
    return f._eval(x)


# --- text form ---------------------------------------------------------------

def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for pos, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {text!r}")
        elif ch == sep and depth == 0:
            parts.append(text[start:pos])
            start = pos + 1
    if depth:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    parts.append(text[start:])
    return parts


def parse_dff(text: str) -> DffSpec:
    """Inverse of ``str(spec)``; whitespace is ignored."""
    text = "".join(text.split())
    if text == "id":
        return IDENTITY
    head, paren, rest = text.partition("(")
    if not paren or not rest.endswith(")"):
        raise ValueError(f"cannot parse dual feasible function {text!r}")
    body = rest[:-1]
    if head == "u":
        if not body.isdigit():
            raise ValueError(f"u(k) needs an integer, got {body!r}")
        return UStep(int(body))
    if head == "U":
        return Threshold(to_fraction(body))
    if head == "phi":
        return PhiStep(to_fraction(body))
    if head == "compose":
        args = _split_top(body, ",")
        if len(args) != 2:
            raise ValueError(f"compose takes two arguments, got {len(args)}")
        return Compose(parse_dff(args[0]), parse_dff(args[1]))
    if head == "convex":
        terms = []
        for term in _split_top(body, "+"):
            weight, star, spec = term.partition("*")
            if not star:
                raise ValueError(f"convex term {term!r} lacks 'weight*'")
            terms.append((to_fraction(weight), parse_dff(spec)))
        return Convex(tuple(terms))
    raise ValueError(f"unknown dual feasible function {head!r}")


# --- parameters --------------------------------------------------------------

def candidate_params(inst: NormalizedInstance, i: int) -> list[Fraction]:
    """Finite parameter set in (0, 1/2] sufficient for maximizing the
    volume bounds over the ``U`` and ``phi`` families in dimension ``i``.

    Contains every size at most 1/2, every complement ``1 - w`` of a larger
    size that lands in (0, 1/2], the reciprocals ``1/t`` for
    ``2 <= t <= |V|``, and 1/2 itself.
    """
    found = {HALF}
    for b in inst.boxes:
        w = b.size[i]
        if w <= HALF:
            found.add(w)
        elif 0 < 1 - w <= HALF:
            found.add(1 - w)
    found.update(Fraction(1, t) for t in range(2, len(inst.boxes) + 1))
    return sorted(found)

