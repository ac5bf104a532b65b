"""Plain-text bound certificates and their independent re-verification.

A certificate is self-contained: header fields, the witnessing scale and
the instance it refers to.  Lines starting with ``#`` are comments::

    kind OBPP
    value 2
    family w7
    params 1/2 1/2
    scale phi(1/2) phi(1/2)
    provenance w7(1/2,1/2)
    instance
    d 2
    container 1 1
    box 1 2/3 1/2
    ...
    end

Table scales write ``scale table`` followed by one ``size <id> r1 .. rd``
line per box.  Clique certificates add ``dim <i>`` and ``subset <ids>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import oracle
from .bounds import KINDS, BoundReport, okp_relaxation_bound, transformed_volume
from .dff import IDENTITY, parse_dff
from .model import Instance, normalize, parse_instance, serialize_instance, to_fraction
from .scales import ConservativeScale, apply_scale

__all__ = ["Certificate", "Verification", "write_certificate", "read_certificate",
           "verify_certificate"]

_DFF_CHECK_DENOMINATOR = 12


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Certificate:
    kind: str
    value: Fraction
    scale: ConservativeScale
    instance: Instance
    family: str | None = None
    params: tuple[Fraction, ...] = ()
    dim: int | None = None  # 0-based, clique certificates only
    subset: tuple[str, ...] = ()


class Verification(NamedTuple):
    ok: bool
    message: str
    recomputed: Fraction | None = None


def write_certificate(report: BoundReport, inst: Instance, dim: int | None = None,
                      subset: tuple[str, ...] = ()) -> str:
    lines = [f"kind {report.kind}", f"value {report.value}"]
    if report.family:
        lines.append(f"family {report.family}")
    if report.params:
        lines.append("params " + " ".join(str(p) for p in report.params))
    if report.kind == "clique":
        lines.append(f"dim {dim + 1}")
        lines.append("subset " + " ".join(subset))
    lines.append("scale " + report.scale.describe())
    if report.scale.table is not None:
        for b in inst.boxes:
            lines.append(f"size {b.id} " + " ".join(str(x) for x in report.scale.table[b.id]))
    lines.append(f"provenance {report.scale.provenance}")
    lines.append("instance")
    lines.append(serialize_instance(inst).rstrip("\n"))
    lines.append("end")
    return "\n".join(lines) + "\n"


def read_certificate(text: str) -> Certificate:
    fields: dict[str, str] = {}
    sizes: dict[str, tuple[Fraction, ...]] = {}
    body: list[str] | None = None
    for raw in text.splitlines():
        if body is not None:
            if raw.strip() == "end":
                break
            body.append(raw)
            continue
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "instance":
            body = []
        elif head == "size":
            box_id, *tokens = rest.split()
            sizes[box_id] = tuple(to_fraction(t) for t in tokens)
        elif head in ("kind", "value", "family", "params", "scale", "provenance", "dim", "subset"):
            if head in fields:
                raise CertificateError(f"field {head!r} given twice")
            fields[head] = rest.strip()
        else:
            raise CertificateError(f"unknown certificate field {head!r}")
    else:
        if body is None:
            raise CertificateError("certificate has no instance section")
        raise CertificateError("instance section is not closed by 'end'")
    for key in ("kind", "value", "scale"):
        if key not in fields:
            raise CertificateError(f"certificate lacks the {key!r} field")
    if fields["kind"] not in KINDS:
        raise CertificateError(f"unknown kind {fields['kind']!r}")
    inst = parse_instance("\n".join(body))

    provenance = fields.get("provenance", "")
    if fields["scale"] == "table":
        scale = ConservativeScale(table=sizes, provenance=provenance)
    else:
        specs = tuple(parse_dff(tok) for tok in fields["scale"].split())
        scale = ConservativeScale(dffs=specs, provenance=provenance)
    params = tuple(to_fraction(t) for t in fields.get("params", "").split())
    dim = int(fields["dim"]) - 1 if "dim" in fields else None
    subset = tuple(fields.get("subset", "").split())
    return Certificate(fields["kind"], to_fraction(fields["value"]), scale, inst,
                       fields.get("family"), params, dim, subset)


def _scale_is_conservative(cert: Certificate) -> tuple[bool, str]:
    inst = normalize(cert.instance)
    scale = cert.scale
    if scale.dffs is not None:
        if len(scale.dffs) != inst.dim:
            return False, f"scale arity {len(scale.dffs)} does not match dimension {inst.dim}"
        for f in dict.fromkeys(scale.dffs):
            verdict = oracle.check_dff(f, _DFF_CHECK_DENOMINATOR)
            if not verdict.holds:
                return False, f"{f} is not dual feasible: {list(map(str, verdict.counterexample))}"
        return True, "every component is dual feasible"
    missing = [b.id for b in inst.boxes if b.id not in scale.table]
    if missing:
        return False, f"table misses boxes {missing}"
    ok, witness = oracle.check_scale(inst, apply_scale(inst, scale))
    if not ok:
        i, ids = witness
        return False, f"set {list(ids)} is feasible in dimension {i + 1} but not after scaling"
    return True, "table preserves every preset-free feasible set"


def recompute(cert: Certificate) -> Fraction:
    inst = normalize(cert.instance)
    vol = transformed_volume(inst, cert.scale)
    if cert.kind == "SPP":
        return vol * cert.instance.container[-1]
    if cert.kind == "OBPP":
        return Fraction(math.ceil(vol))
    if cert.kind == "OPP-infeasibility":
        return vol
    if cert.kind == "OKP":
        return okp_relaxation_bound(inst, cert.scale)
    boxes = [inst.box(b) for b in cert.subset]
    return Fraction(math.ceil(sum((cert.scale.transform(b)[cert.dim] for b in boxes), Fraction(0))))


def verify_certificate(text: str) -> Verification:
    try:
        cert = read_certificate(text)
    except (ValueError, KeyError) as exc:
        return Verification(False, f"unreadable certificate: {exc}")
    if cert.kind == "SPP" and cert.scale.dffs is not None and cert.scale.dffs[-1] != IDENTITY:
        return Verification(False, "strip-packing scales must keep the strip axis unchanged")
    if cert.kind == "SPP" and cert.scale.table is not None:
        return Verification(False, "strip-packing certificates need a DFF scale")
    if cert.kind == "clique" and (cert.dim is None or not cert.subset):
        return Verification(False, "clique certificate lacks dim or subset")
    try:
        ok, why = _scale_is_conservative(cert)
    except oracle.OracleTooLarge as exc:
        return Verification(False, f"cannot confirm the scale: {exc}")
    if not ok:
        return Verification(False, why)
    value = recompute(cert)
    if value != cert.value:
        return Verification(False, f"claimed value {cert.value} but the scale gives {value}", value)
    if cert.kind == "OPP-infeasibility" and not value > 1:
        return Verification(False, f"transformed volume {value} does not exceed 1", value)
    return Verification(True, f"{cert.kind} value {value} confirmed; {why}", value)
