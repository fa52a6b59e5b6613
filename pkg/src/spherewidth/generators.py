"""Constructors for test bodies: exact fixtures and randomized self-dual bodies.

The completion generator grows a body C with C inside its polar dual toward
a self-dual (constant width pi/2) body: adding a point x of the dual keeps
the invariant, because the hull of C and x is contained in the dual of that
hull.  Greedily inserting the farthest dual boundary point drives the
residual Hausdorff gap to zero.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BadRadius, BudgetExhausted, SeedNotSubdual
from .sphere import (
    BOUNDARY_EPS,
    TWO_PI,
    GreatArc,
    SmallCircleArc,
    Vec,
    dot,
    tangent_basis,
    unit,
)
from .body import (
    BodyLike,
    ConvexBody,
    Polytope,
    as_body,
    body_distance_many,
    interior_witness,
    merge_flat_junctions,
    polar_dual,
    require_valid,
    validate_polytope,
)
from .metrics import boundary_sup_distance, diameter


def octant() -> Polytope:
    """The canonical self-dual polytope with vertices e1, e2, e3."""
    return Polytope(np.eye(3))


def cap(center: Vec, radius: float) -> ConvexBody:
    """Spherical cap as a single full-circle boundary piece.

    Self-dual exactly when radius is pi/4.
    """
    if not (0.0 < radius < 0.5 * math.pi):
        raise BadRadius("cap radius must lie in (0, pi/2)")
    z = unit(center)
    piece = SmallCircleArc(z, radius, 0.0, TWO_PI)
    return ConvexBody([piece], z)


def rotation_from_seed(seed: int) -> np.ndarray:
    """Deterministic uniform-ish random rotation matrix."""
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(3, 3))
    q, r = np.linalg.qr(m)
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 2] = -q[:, 2]
    return q


def rotated(b: BodyLike, rot: np.ndarray) -> BodyLike:
    """Apply a rotation matrix to a body or polytope."""
    if isinstance(b, Polytope):
        return Polytope(b.vertices @ rot.T)
    pieces = []
    for p in b.pieces:
        if isinstance(p, GreatArc):
            pieces.append(GreatArc(rot @ p.start, rot @ p.end))
        else:
            # Rotation changes the canonical azimuth frame at the new center,
            # so re-anchor the span at the rotated start point.
            z = rot @ p.center
            probe = SmallCircleArc(z, p.radius, 0.0, TWO_PI)
            a0 = float(probe.azimuth_of(rot @ p.start))
            pieces.append(SmallCircleArc(z, p.radius, a0, a0 + p.span))
    return ConvexBody(pieces, rot @ b.interior)


# ------------------------------------------------------------ hull insertion


def _support_dot_roots(piece: SmallCircleArc, x: Vec) -> list[float]:
    """Interior azimuths where the support pole of the piece is orthogonal to x."""
    z = piece.center
    u, v = piece.frame()
    xu, xv = dot(x, u), dot(x, v)
    rho = math.hypot(xu, xv)
    if rho < 1e-15:
        return []
    m = math.tan(piece.radius) * dot(z, x) / rho
    if abs(m) > 1.0:
        return []
    phi0 = math.atan2(xv, xu)
    off = math.acos(m)
    roots = []
    for az in (phi0 + off, phi0 - off):
        rel = (az - piece.az_from) % TWO_PI
        if 1e-9 < rel < piece.span - 1e-9:
            roots.append(rel)
    return sorted(roots)


def _sub_piece(piece, lo: float, hi: float):
    if isinstance(piece, GreatArc):
        return GreatArc(piece.point_at(lo)[0], piece.point_at(hi)[0])
    return SmallCircleArc(piece.center, piece.radius, piece.az_from + lo, piece.az_from + hi)


def _piece_param_span(piece) -> float:
    return piece.length if isinstance(piece, GreatArc) else piece.span


def _support_dot_at(piece, rel: float, x: Vec) -> float:
    if isinstance(piece, GreatArc):
        return dot(piece.pole, x)
    return float(piece.support_pole_at(piece.az_from + rel)[0] @ x)


def convex_hull_with_point(body: ConvexBody, x: Vec) -> ConvexBody:
    """Spherical convex hull of the body and one exterior point.

    The boundary chunk visible from ``x`` (support pole dotted with x below
    zero) is one contiguous arc; it is replaced by the two tangent great arcs
    through ``x``.
    """
    x = unit(x)
    # split every piece at the azimuths where visibility can flip
    segments = []  # (point_start, point_end, piece, visible)
    for piece in body.pieces:
        span = _piece_param_span(piece)
        cuts = [0.0]
        if isinstance(piece, SmallCircleArc):
            cuts.extend(_support_dot_roots(piece, x))
        cuts.append(span)
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi - lo <= 1e-12:
                continue
            vis = _support_dot_at(piece, 0.5 * (lo + hi), x) < 0.0
            segments.append((_sub_piece(piece, lo, hi), vis))
    m = len(segments)
    if all(vis for _, vis in segments):
        raise ValueError("point sees the whole boundary; body is degenerate")
    if not any(vis for _, vis in segments):
        return body  # x adds nothing (inside or on a supporting circle)
    # rotate so the list starts with an invisible segment
    k = next(i for i, (_, vis) in enumerate(segments) if not vis)
    segments = segments[k:] + segments[:k]
    flips = [
        i
        for i in range(m)
        if segments[i][1] != segments[(i + 1) % m][1]
    ]
    if len(flips) != 2:
        raise ValueError("visible region is not a single arc (%d flips)" % len(flips))
    enter, leave = flips  # visibility turns on after `enter`, off after `leave`
    t_in = segments[enter][0].end
    t_out = segments[(leave + 1) % m][0].start
    new_pieces = [seg for seg, _ in segments[: enter + 1]]
    new_pieces.append(GreatArc(t_in, x))
    new_pieces.append(GreatArc(x, t_out))
    new_pieces.extend(seg for seg, _ in segments[leave + 1 :])
    new_pieces = merge_flat_junctions(new_pieces)
    return ConvexBody(new_pieces, interior_witness(new_pieces))


# ------------------------------------------------------------- completion


def complete_selfdual(
    seed: BodyLike,
    tol: float,
    rng_seed: int = 0,
    max_insertions: int = 10_000,
    sweep: int = 2048,
) -> ConvexBody:
    """Grow a sub-dual body into a self-dual one by farthest-point insertion.

    The seed must satisfy seed inside seed-dual (equivalently diameter at
    most pi/2).  Each round inserts the dual boundary point farthest from the
    current body; the residual is certified before returning.  Raises
    ``BudgetExhausted`` with the partial body if the insertion budget runs
    out.
    """
    body = as_body(seed)
    require_valid(body)
    if diameter(body) > 0.5 * math.pi + BOUNDARY_EPS:
        raise SeedNotSubdual("seed diameter exceeds pi/2; seed is not inside its dual")
    rng = np.random.default_rng(rng_seed)
    for _ in range(max_insertions):
        dual = polar_dual(body, check=False)
        total = sum(p.length for p in dual.pieces)
        pts = []
        for p in dual.pieces:
            n = max(4, int(round(sweep * p.length / max(total, 1e-12))))
            if isinstance(p, GreatArc):
                ts = np.linspace(0.0, p.length, n)
                jitter = rng.uniform(0, p.length / n)
                ts = np.clip(ts + jitter, 0.0, p.length)
            else:
                ts = np.linspace(p.az_from, p.az_to, n)
                jitter = rng.uniform(0, p.span / n)
                ts = np.clip(ts + jitter, p.az_from, p.az_to)
            pts.append(p.point_at(ts))
        pts = np.vstack(pts)
        gaps = body_distance_many(body, pts)
        i = int(np.argmax(gaps))
        if gaps[i] <= 0.9 * tol:
            # body is inside its dual, so the residual is one directed sup
            certified = boundary_sup_distance(dual, body, tol=0.1 * tol)
            if certified <= 0.9 * tol:
                return body
        if gaps[i] <= 1e-12:
            return body
        body = convex_hull_with_point(body, pts[i])
    raise BudgetExhausted(
        "completion did not reach tol %.1e in %d insertions" % (tol, max_insertions),
        partial=body,
    )


# --------------------------------------------------------------- randomized


def _gnomonic_hull(points: np.ndarray) -> Polytope:
    """Spherical convex hull of points inside one open hemisphere."""
    m = unit(points.sum(axis=0))
    a, b = tangent_basis(m)
    w = points @ m
    if np.any(w <= 1e-9):
        raise ValueError("points do not fit in the gnomonic chart")
    xy = np.column_stack([points @ a / w, points @ b / w])
    order = np.lexsort((xy[:, 1], xy[:, 0]))

    def turn(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    hull = []
    for idx in order:
        while len(hull) >= 2 and turn(xy[hull[-2]], xy[hull[-1]], xy[idx]) <= 1e-15:
            hull.pop()
        hull.append(int(idx))
    lower = len(hull) + 1
    for idx in order[::-1]:
        while len(hull) >= lower and turn(xy[hull[-2]], xy[hull[-1]], xy[idx]) <= 1e-15:
            hull.pop()
        hull.append(int(idx))
    hull = hull[:-1]
    poly = Polytope(points[hull])
    if not validate_polytope(poly).ok:
        poly = Polytope(points[hull[::-1]])
    return poly


def random_subdual_polytope_seed(n_target: int, rng_seed: int) -> Polytope:
    """Random polytope contained in its own dual, with about n_target vertices.

    For ``n_target`` of 3 the seed is a rotated orthonormal triple (the
    minimal self-dual polytope).  Larger targets cut a rotated quarter-pi cap
    down to a polytope of roughly the requested size and delete one vertex;
    any subset of a self-dual body is sub-dual.
    """
    from .approx import ApproximationConfig, approximate_polytope

    if n_target < 3:
        raise ValueError("n_target must be at least 3")
    rot = rotation_from_seed(rng_seed)
    if n_target == 3:
        return Polytope(rot.T)
    # empirical size of the cap approximation: about 2.6 / sqrt(eps) vertices
    eps = min(1.2, max(0.004, (2.6 / max(2.5, n_target - 1.5)) ** 2))
    base = rotated(cap(np.array([0.0, 0.0, 1.0]), 0.25 * math.pi), rot)
    poly, _, _ = approximate_polytope(base, ApproximationConfig(epsilon=eps))
    if len(poly) <= 3:
        return poly
    rng = np.random.default_rng(rng_seed)
    drop = int(rng.integers(len(poly)))
    return Polytope(np.delete(poly.vertices, drop, axis=0))


def random_selfdual_polytope(n_target: int, rng_seed: int = 0) -> Polytope:
    """Random polytope of constant width pi/2, deterministic in the seed."""
    from .approx import ApproximationConfig, approximate_polytope

    seed = random_subdual_polytope_seed(n_target, rng_seed)
    body = complete_selfdual(seed, tol=1e-7, rng_seed=rng_seed)
    # completion of a polytope seed stays a polytope; snapping through the
    # approximation pipeline re-checks constant width and is the identity
    poly, _, _ = approximate_polytope(
        as_body(body), ApproximationConfig(epsilon=0.05)
    )
    rep = validate_polytope(poly)
    if not rep.ok:
        raise RuntimeError("completion produced an invalid polytope: %s" % rep)
    return poly
