"""JSON serialization of bodies, certificates and step logs.

Numbers are written with 17 significant digits, which round-trips binary64
exactly; the writer emits keys in a fixed order so equal inputs produce
byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np

from .approx import Certificate, StepRecord
from .body import BodyLike, ConvexBody, Polytope
from .sphere import GreatArc, SmallCircleArc


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _vec(v) -> str:
    return "[%s]" % ",".join(_num(c) for c in v)


def dumps_body(body: BodyLike) -> str:
    """Serialize a polytope or piecewise-circular body."""
    if isinstance(body, Polytope):
        verts = ",".join(_vec(v) for v in body.vertices)
        return '{"kind":"polytope","vertices":[%s]}' % verts
    parts = []
    for p in body.pieces:
        if isinstance(p, GreatArc):
            parts.append(
                '{"type":"great","from":%s,"to":%s}' % (_vec(p.start), _vec(p.end))
            )
        else:
            parts.append(
                '{"type":"circle","center":%s,"radius":%s,"az_from":%s,"az_to":%s}'
                % (_vec(p.center), _num(p.radius), _num(p.az_from), _num(p.az_to))
            )
    return '{"kind":"pc-body","interior":%s,"pieces":[%s]}' % (
        _vec(body.interior),
        ",".join(parts),
    )


def loads_body(text: str) -> BodyLike:
    obj = json.loads(text)
    kind = obj.get("kind")
    if kind == "polytope":
        return Polytope(np.asarray(obj["vertices"], dtype=float))
    if kind == "pc-body":
        pieces = []
        for rec in obj["pieces"]:
            if rec["type"] == "great":
                pieces.append(
                    GreatArc(np.asarray(rec["from"], float), np.asarray(rec["to"], float))
                )
            elif rec["type"] == "circle":
                pieces.append(
                    SmallCircleArc(
                        np.asarray(rec["center"], float),
                        float(rec["radius"]),
                        float(rec["az_from"]),
                        float(rec["az_to"]),
                    )
                )
            else:
                raise ValueError("unknown piece type %r" % rec.get("type"))
        return ConvexBody(pieces, np.asarray(obj["interior"], float))
    raise ValueError("unknown body kind %r" % kind)


def dumps_certificate(cert: Certificate, passed: bool = True) -> str:
    fields = [
        ('"epsilon":%s' % _num(cert.epsilon)),
        ('"hausdorff_bound":%s' % _num(cert.hausdorff_bound)),
        ('"width_min":%s' % _num(cert.width_min)),
        ('"width_max":%s' % _num(cert.width_max)),
        ('"self_duality_residual":%s' % _num(cert.self_duality_residual)),
        ('"steps":%d' % cert.steps),
        ('"rounds":%d' % cert.rounds),
        ('"passed":%s' % ("true" if passed else "false")),
    ]
    return "{%s}" % ",".join(fields)


def loads_certificate(text: str) -> Certificate:
    obj = json.loads(text)
    return Certificate(
        epsilon=obj["epsilon"],
        hausdorff_bound=obj["hausdorff_bound"],
        width_min=obj["width_min"],
        width_max=obj["width_max"],
        self_duality_residual=obj["self_duality_residual"],
        steps=obj["steps"],
        rounds=obj["rounds"],
    )


def dumps_step(rec: StepRecord) -> str:
    return (
        '{"p1":%s,"p2":%s,"q1":%s,"q2":%s,"r1":%s,'
        '"primal_piece_id":%d,"dual_piece_id":%d,"r1_distance":%s}'
        % (
            _vec(rec.p1),
            _vec(rec.p2),
            _vec(rec.q1),
            _vec(rec.q2),
            _vec(rec.r1),
            rec.primal_piece_id,
            rec.dual_piece_id,
            _num(rec.r1_distance),
        )
    )


def dumps_step_log(steps) -> str:
    """One step record per line (JSON lines)."""
    return "".join(dumps_step(s) + "\n" for s in steps)


def loads_step_log(text: str) -> list[StepRecord]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        out.append(
            StepRecord(
                p1=np.asarray(obj["p1"], float),
                p2=np.asarray(obj["p2"], float),
                q1=np.asarray(obj["q1"], float),
                q2=np.asarray(obj["q2"], float),
                r1=np.asarray(obj["r1"], float),
                primal_piece_id=obj["primal_piece_id"],
                dual_piece_id=obj["dual_piece_id"],
                r1_distance=obj["r1_distance"],
            )
        )
    return out
