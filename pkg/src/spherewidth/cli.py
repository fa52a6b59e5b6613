"""Command-line front end.

Verbs: generate | dual | metrics | approximate | certify | render.
Exit codes: 0 success, 1 invalid input or parameters, 2 certification
failure.  The violated invariant name goes to stderr.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .approx import ApproximationConfig, approximate_polytope, certify
from .body import as_body, polar_dual, validate, validate_polytope, Polytope
from .errors import CertificationFailed, SphereGeomError
from .formats import dumps_body, dumps_certificate, dumps_step_log, loads_body
from .generators import cap, complete_selfdual, octant, random_selfdual_polytope
from .metrics import diameter, is_constant_width, thickness
from .render import render_svg
from .sphere import unit


def _parse_vec(text: str) -> np.ndarray:
    parts = [float(t) for t in text.split(",")]
    if len(parts) != 3:
        raise ValueError("expected three comma-separated coordinates")
    return unit(parts)


def _read_body(path: str):
    body = loads_body(Path(path).read_text())
    rep = validate_polytope(body) if isinstance(body, Polytope) else validate(as_body(body))
    if not rep.ok:
        raise SphereGeomError("invalid body in %s: %s" % (path, ", ".join(rep.failed())))
    return body


def cmd_generate(args) -> int:
    if args.kind == "octant":
        body = octant()
    elif args.kind == "cap":
        body = cap(_parse_vec(args.center), args.radius)
    elif args.kind == "completion":
        body = complete_selfdual(
            cap(_parse_vec(args.center), args.radius), tol=args.tol, rng_seed=args.seed
        )
    else:
        body = random_selfdual_polytope(args.n, args.seed)
    text = dumps_body(body)
    Path(args.out).write_text(text)
    n = len(body.vertices) if isinstance(body, Polytope) else len(body.pieces)
    unit_name = "vertices" if isinstance(body, Polytope) else "pieces"
    print("wrote %s (%s, %d %s)" % (args.out, args.kind, n, unit_name))
    return 0


def cmd_dual(args) -> int:
    body = _read_body(args.input)
    Path(args.out).write_text(dumps_body(polar_dual(as_body(body))))
    print("wrote %s" % args.out)
    return 0


def cmd_metrics(args) -> int:
    body = _read_body(args.input)
    rep = is_constant_width(body, 0.5 * math.pi, tol=args.tol)
    print(
        '{"thickness":%.17g,"diameter":%.17g,"width_min":%.17g,'
        '"width_max":%.17g,"self_duality_residual":%.17g}'
        % (
            thickness(body),
            diameter(body),
            rep.width_min,
            rep.width_max,
            rep.self_duality_residual,
        )
    )
    return 0


def cmd_approximate(args) -> int:
    body = _read_body(args.input)
    config = ApproximationConfig(epsilon=args.epsilon, self_dual_tol=args.tol)
    poly, cert, steps = approximate_polytope(body, config)
    Path(args.out).write_text(dumps_body(poly))
    if args.certificate:
        Path(args.certificate).write_text(dumps_certificate(cert) + "\n")
    if args.log:
        Path(args.log).write_text(dumps_step_log(steps))
    print(
        "wrote %s (%d vertices, %d steps, hausdorff %.6g <= 2*eps %.6g)"
        % (args.out, len(poly), cert.steps, cert.hausdorff_bound, 2 * args.epsilon)
    )
    return 0


def cmd_certify(args) -> int:
    original = _read_body(args.original)
    result = _read_body(args.result)
    config = ApproximationConfig(epsilon=args.epsilon, self_dual_tol=args.tol)
    cert = certify(original, result, config)
    print(dumps_certificate(cert))
    return 0


def cmd_render(args) -> int:
    bodies = [_read_body(p) for p in args.inputs]
    svg = render_svg(bodies, projection=args.projection, view=_parse_vec(args.view))
    Path(args.out).write_text(svg)
    print("wrote %s" % args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="spherewidth",
        description="Constant-width spherical bodies: generation, duality, "
        "metrics, polytope approximation and rendering.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=1e-6, help="self-duality tolerance")
        p.add_argument("--seed", type=int, default=0, help="random seed")

    g = sub.add_parser("generate", help="write a body JSON file")
    g.add_argument("kind", choices=["octant", "cap", "completion", "random-polytope"])
    g.add_argument("--center", default="0,0,1", help="cap center x,y,z")
    g.add_argument("--radius", type=float, default=math.pi / 4, help="cap radius")
    g.add_argument("--n", type=int, default=6, help="target vertex count")
    g.add_argument("-o", "--out", required=True)
    common(g)
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("dual", help="write the polar dual of a body")
    d.add_argument("input")
    d.add_argument("-o", "--out", required=True)
    common(d)
    d.set_defaults(func=cmd_dual)

    m = sub.add_parser("metrics", help="print thickness/diameter/width JSON")
    m.add_argument("input")
    common(m)
    m.set_defaults(func=cmd_metrics)

    a = sub.add_parser("approximate", help="approximate by a constant-width polytope")
    a.add_argument("input")
    a.add_argument("--epsilon", type=float, required=True)
    a.add_argument("-o", "--out", required=True)
    a.add_argument("--certificate", help="write the certificate JSON here")
    a.add_argument("--log", help="write the step log (JSON lines) here")
    common(a)
    a.set_defaults(func=cmd_approximate)

    c = sub.add_parser("certify", help="re-check an (input, polytope) pair")
    c.add_argument("original")
    c.add_argument("result")
    c.add_argument("--epsilon", type=float, required=True)
    common(c)
    c.set_defaults(func=cmd_certify)

    r = sub.add_parser("render", help="render bodies to SVG")
    r.add_argument("inputs", nargs="+")
    r.add_argument("--projection", choices=["orthographic", "stereographic"],
                   default="orthographic")
    r.add_argument("--view", default="1,1,1", help="view direction x,y,z")
    r.add_argument("-o", "--out", required=True)
    common(r)
    r.set_defaults(func=cmd_render)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except CertificationFailed as exc:
        print("%s: %s" % (exc.bound or "certification", exc), file=sys.stderr)
        return 2
    except (SphereGeomError, ValueError, OSError) as exc:
        print("%s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
