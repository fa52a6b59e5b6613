"""Spherical primitives on the unit sphere.

Points are unit 3-vectors (numpy arrays of shape (3,)).  Boundary pieces are
either minor great-circle arcs or small-circle arcs; both carry a natural
angle parameter used for sampling and for all closed-form distance queries.
Everything here is a pure function over immutable values and is safe to call
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np

from .errors import AmbiguousSide, DegenerateArc, DegenerateLune

# Single global degeneracy threshold on dot products (equality / antipodality).
DOT_EPS = 1e-12
# Tolerance for "point lies on a piece / boundary" predicates.
BOUNDARY_EPS = 1e-9

TWO_PI = 2.0 * math.pi

Vec = np.ndarray


def unit(v) -> Vec:
    """Normalize ``v`` to a unit 3-vector."""
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError("expected a 3-vector, got shape %s" % (a.shape,))
    n = float(np.linalg.norm(a))
    if n < DOT_EPS:
        raise ValueError("cannot normalize a near-zero vector")
    return a / n


def unit_rows(m) -> np.ndarray:
    """Normalize each row of an (n, 3) array."""
    a = np.asarray(m, dtype=float)
    n = np.linalg.norm(a, axis=-1, keepdims=True)
    return a / n


def dot(a: Vec, b: Vec) -> float:
    return float(a[0] * b[0] + a[1] * b[1] + a[2] * b[2])


def cross(a: Vec, b: Vec) -> Vec:
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


def acos_clamped(x) -> float:
    """arccos with the argument clamped to [-1, 1].

    Every inverse-trig call in the package goes through this (or its numpy
    twin) so that floating-point drift at orthogonality or antipodality can
    never produce NaN.
    """
    return math.acos(min(1.0, max(-1.0, x)))


def acos_clamped_np(x) -> np.ndarray:
    return np.arccos(np.clip(x, -1.0, 1.0))


def geodesic_distance(p: Vec, q: Vec) -> float:
    """Great-circle distance arccos(p . q) in [0, pi]."""
    return acos_clamped(dot(p, q))


def chord_distance(p: Vec, q: Vec) -> float:
    """Euclidean chord length; resolves tiny separations that arccos cannot.

    For unit vectors the chord 2 sin(d/2) agrees with the geodesic distance d
    to third order, so it is the right metric for near-coincidence tests at
    tolerances below 1e-8.
    """
    return float(np.linalg.norm(p - q))


def geodesic_distance_np(points: np.ndarray, q: Vec) -> np.ndarray:
    return acos_clamped_np(points @ q)


def lune_thickness(pole_a: Vec, pole_b: Vec) -> float:
    """Thickness pi - arccos(pole_a . pole_b) of the lune H(a) & H(b)."""
    d = dot(pole_a, pole_b)
    if abs(d) >= 1.0 - DOT_EPS:
        raise DegenerateLune("lune poles are equal or antipodal")
    return math.pi - acos_clamped(d)


def arc_pole(p1: Vec, p2: Vec, side_hint: Vec) -> Vec:
    """Unit normal of the great circle through p1, p2, signed by ``side_hint``.

    The result is orthogonal to both inputs and has positive dot with the
    hint.  Raises ``DegenerateArc`` for equal/antipodal inputs and
    ``AmbiguousSide`` when the hint lies on the great circle itself.
    """
    if abs(dot(p1, p2)) >= 1.0 - DOT_EPS:
        raise DegenerateArc("arc endpoints are equal or antipodal")
    n = unit(cross(p1, p2))
    s = dot(n, side_hint)
    if abs(s) < DOT_EPS:
        raise AmbiguousSide("side hint is orthogonal to the pole line")
    return n if s > 0 else -n


def tangent_basis(z: Vec) -> tuple[Vec, Vec]:
    """Deterministic right-handed tangent frame (u, v) at ``z``.

    u is the normalized projection of the coordinate axis least aligned with
    ``z``; v = z x u.  Azimuths about ``z`` are measured from u toward v, so
    the frame fixes the parametrization of every circle centered at ``z``.
    """
    k = int(np.argmin(np.abs(z)))
    axis = np.zeros(3)
    axis[k] = 1.0
    u = unit(axis - dot(axis, z) * z)
    v = cross(z, u)
    return u, v


def azimuth_about(z: Vec, u: Vec, v: Vec, p) -> np.ndarray:
    """Azimuth of point(s) ``p`` about ``z`` in [0, 2*pi), measured from u."""
    p = np.asarray(p, dtype=float)
    return np.mod(np.arctan2(p @ v, p @ u), TWO_PI)


def angle_in_span(az, az_from: float, span: float, tol: float = BOUNDARY_EPS):
    """True where azimuth ``az`` lies within [az_from, az_from + span]."""
    d = np.mod(np.asarray(az) - az_from, TWO_PI)
    return (d <= span + tol) | (d >= TWO_PI - tol)


def slerp(a: Vec, b: Vec, t) -> np.ndarray:
    """Geodesic interpolation between non-antipodal unit vectors."""
    ang = geodesic_distance(a, b)
    if ang < DOT_EPS:
        return np.broadcast_to(a, (np.size(t), 3)).copy()
    t = np.asarray(t, dtype=float)
    s = np.sin(ang)
    return (np.outer(np.sin((1.0 - t) * ang), a) + np.outer(np.sin(t * ang), b)) / s


@dataclass(frozen=True, eq=False)
class Hemisphere:
    """Closed half-sphere ``{q : pole . q >= 0}``."""

    pole: Vec

    def __post_init__(self):
        object.__setattr__(self, "pole", unit(self.pole))

    def contains(self, q: Vec, tol: float = 0.0) -> bool:
        return dot(self.pole, q) >= -tol


@dataclass(frozen=True, eq=False)
class Lune:
    """Intersection of two distinct, non-opposite hemispheres."""

    pole_a: Vec
    pole_b: Vec

    def __post_init__(self):
        object.__setattr__(self, "pole_a", unit(self.pole_a))
        object.__setattr__(self, "pole_b", unit(self.pole_b))
        # Raises DegenerateLune for equal/antipodal poles.
        lune_thickness(self.pole_a, self.pole_b)

    @property
    def thickness(self) -> float:
        return lune_thickness(self.pole_a, self.pole_b)


@dataclass(frozen=True, eq=False)
class GreatArc:
    """Minor geodesic arc between two non-antipodal endpoints.

    Spans of pi or more must be split by callers; the arc never contains the
    antipodes of its endpoints.
    """

    start: Vec
    end: Vec

    def __post_init__(self):
        s = unit(self.start)
        e = unit(self.end)
        if abs(dot(s, e)) >= 1.0 - DOT_EPS:
            raise DegenerateArc("great arc endpoints equal or antipodal")
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "end", e)

    @cached_property
    def length(self) -> float:
        return geodesic_distance(self.start, self.end)

    @cached_property
    def pole(self) -> Vec:
        """Pole of the supporting great circle, oriented start x end."""
        return unit(cross(self.start, self.end))

    @cached_property
    def _frame(self) -> tuple[Vec, Vec]:
        a = self.start
        b = unit(self.end - dot(a, self.end) * a)
        return a, b

    def frame(self) -> tuple[Vec, Vec]:
        """(a, b) with point(t) = cos(t) a + sin(t) b for t in [0, length]."""
        return self._frame

    def point_at(self, t) -> np.ndarray:
        a, b = self.frame()
        t = np.asarray(t, dtype=float)
        return np.outer(np.cos(t), a) + np.outer(np.sin(t), b)

    def param_of(self, p) -> np.ndarray:
        """Signed angle parameter of point(s) on the supporting circle."""
        a, b = self.frame()
        p = np.asarray(p, dtype=float)
        return np.arctan2(p @ b, p @ a)

    def midpoint(self) -> Vec:
        return unit(self.start + self.end)


@dataclass(frozen=True, eq=False)
class SmallCircleArc:
    """Arc of the circle at angular radius ``radius`` about ``center``.

    The azimuth span runs counterclockwise about the center (seen from
    outside the sphere along the center) in the deterministic frame of
    ``tangent_basis``; ``az_from`` is normalized into [0, 2*pi) and
    ``az_to - az_from`` must lie in (0, 2*pi].  Radius pi/2 is not allowed
    here: such arcs are great arcs and must be stored as ``GreatArc``.
    """

    center: Vec
    radius: float
    az_from: float
    az_to: float

    def __post_init__(self):
        z = unit(self.center)
        r = float(self.radius)
        if not (DOT_EPS < r < math.pi / 2 - DOT_EPS):
            raise ValueError("small circle radius must lie strictly in (0, pi/2)")
        span = self.az_to - self.az_from
        if not (DOT_EPS < span <= TWO_PI + DOT_EPS):
            raise ValueError("azimuth span must lie in (0, 2*pi]")
        span = min(span, TWO_PI)
        a0 = math.fmod(self.az_from, TWO_PI)
        if a0 < 0:
            a0 += TWO_PI
        object.__setattr__(self, "center", z)
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "az_from", a0)
        object.__setattr__(self, "az_to", a0 + span)

    @property
    def span(self) -> float:
        return self.az_to - self.az_from

    @property
    def is_full(self) -> bool:
        return self.span >= TWO_PI - DOT_EPS

    @property
    def length(self) -> float:
        return self.span * math.sin(self.radius)

    @cached_property
    def _frame(self) -> tuple[Vec, Vec]:
        return tangent_basis(self.center)

    def frame(self) -> tuple[Vec, Vec]:
        return self._frame

    def point_at(self, az) -> np.ndarray:
        u, v = self.frame()
        az = np.asarray(az, dtype=float)
        w = np.outer(np.cos(az), u) + np.outer(np.sin(az), v)
        return math.cos(self.radius) * self.center + math.sin(self.radius) * w

    def support_pole_at(self, az) -> np.ndarray:
        """Pole of the tangent great circle at azimuth ``az``.

        The pole lies in span{center, point} orthogonal to the point, on the
        center side, so H(pole) contains the local cap.
        """
        u, v = self.frame()
        az = np.asarray(az, dtype=float)
        w = np.outer(np.cos(az), u) + np.outer(np.sin(az), v)
        return math.sin(self.radius) * self.center - math.cos(self.radius) * w

    def azimuth_of(self, p) -> np.ndarray:
        u, v = self.frame()
        return azimuth_about(self.center, u, v, p)

    @cached_property
    def start(self) -> Vec:
        return self.point_at(self.az_from)[0]

    @cached_property
    def end(self) -> Vec:
        return self.point_at(self.az_to)[0]

    def midpoint(self) -> Vec:
        return self.point_at(0.5 * (self.az_from + self.az_to))[0]


Piece = Union[GreatArc, SmallCircleArc]


def piece_length(piece: Piece) -> float:
    return piece.length


def sample_piece(piece: Piece, n: int) -> np.ndarray:
    """``n`` points evenly spaced in the piece's angle parameter, endpoints included."""
    if n < 2:
        raise ValueError("need at least two sample points")
    if isinstance(piece, GreatArc):
        return piece.point_at(np.linspace(0.0, piece.length, n))
    return piece.point_at(np.linspace(piece.az_from, piece.az_to, n))


def point_to_piece_distance(p: Vec, piece: Piece) -> float:
    """Minimum geodesic distance from ``p`` to any point of the piece."""
    return float(distance_to_piece(np.asarray(p, dtype=float)[None, :], piece)[0])


def distance_to_piece(points: np.ndarray, piece: Piece) -> np.ndarray:
    """Vectorized minimum geodesic distance from each row of ``points``.

    Projects onto the supporting circle, clamps to the angular span, and
    measures the geodesic distance; endpoints take over when the projection
    falls outside the span.
    """
    x = np.asarray(points, dtype=float)
    if isinstance(piece, GreatArc):
        n = piece.pole
        a, b = piece.frame()
        s = x @ n
        circ = np.arcsin(np.clip(np.abs(s), 0.0, 1.0))
        t = np.arctan2(x @ b, x @ a)
        on = (t >= -BOUNDARY_EPS) & (t <= piece.length + BOUNDARY_EPS)
        d_ends = np.minimum(
            acos_clamped_np(x @ piece.start), acos_clamped_np(x @ piece.end)
        )
        return np.where(on, circ, d_ends)
    delta = acos_clamped_np(x @ piece.center)
    circ = np.abs(delta - piece.radius)
    az = piece.azimuth_of(x)
    on = angle_in_span(az, piece.az_from, piece.span)
    d_ends = np.minimum(
        acos_clamped_np(x @ piece.start), acos_clamped_np(x @ piece.end)
    )
    return np.where(on, circ, d_ends)


def max_distance_to_piece(points: np.ndarray, piece: Piece) -> np.ndarray:
    """Vectorized maximum geodesic distance from each row of ``points``.

    The maximum over a circular arc is attained either at the azimuth
    opposite the query point (when inside the span) or at an endpoint.
    """
    x = np.asarray(points, dtype=float)
    d_ends = np.maximum(
        acos_clamped_np(x @ piece.start), acos_clamped_np(x @ piece.end)
    )
    if isinstance(piece, GreatArc):
        a, b = piece.frame()
        t0 = np.arctan2(x @ b, x @ a)
        t_far = np.mod(t0 + math.pi, TWO_PI)
        on = t_far <= piece.length + BOUNDARY_EPS
        r = np.hypot(x @ a, x @ b)
        d_far = acos_clamped_np(-r)
        return np.where(on, np.maximum(d_far, d_ends), d_ends)
    az = piece.azimuth_of(x)
    az_far = np.mod(az + math.pi, TWO_PI)
    on = angle_in_span(az_far, piece.az_from, piece.span)
    delta = acos_clamped_np(x @ piece.center)
    d_far = acos_clamped_np(
        np.cos(delta) * math.cos(piece.radius)
        - np.sin(delta) * math.sin(piece.radius)
    )
    return np.where(on, np.maximum(d_far, d_ends), d_ends)


def farthest_point_on_piece(p: Vec, piece: Piece) -> tuple[Vec, float]:
    """Farthest point of the piece from ``p`` with its distance (closed form)."""
    cands = [piece.start, piece.end]
    if isinstance(piece, GreatArc):
        a, b = piece.frame()
        t_far = math.fmod(math.atan2(dot(p, b), dot(p, a)) + math.pi, TWO_PI)
        if t_far < 0:
            t_far += TWO_PI
        if t_far <= piece.length + BOUNDARY_EPS:
            cands.append(piece.point_at(min(t_far, piece.length))[0])
    else:
        az = float(piece.azimuth_of(p))
        az_far = math.fmod(az + math.pi, TWO_PI)
        if angle_in_span(az_far, piece.az_from, piece.span):
            d = math.fmod(az_far - piece.az_from, TWO_PI)
            if d < 0:
                d += TWO_PI
            d = min(d, piece.span)
            cands.append(piece.point_at(piece.az_from + d)[0])
    best, best_d = None, -1.0
    for c in cands:
        dd = geodesic_distance(p, c)
        if dd > best_d:
            best, best_d = c, dd
    return best, best_d


def arcs_intersect(a: GreatArc, b: GreatArc, tol: float = BOUNDARY_EPS) -> bool:
    """Closed intersection predicate for two minor great arcs.

    Candidate points are the two intersections of the supporting great
    circles; the arcs intersect iff one of them lies on both arcs (within
    ``tol``).  Shared endpoints count as intersections.
    """
    na = cross(a.start, a.end)
    nb = cross(b.start, b.end)
    x = cross(na, nb)
    nx = float(np.linalg.norm(x))
    if nx < DOT_EPS:
        # Same supporting circle: arcs overlap iff some endpoint of one lies
        # on the other.
        return (
            _on_arc(a, b.start, tol)
            or _on_arc(a, b.end, tol)
            or _on_arc(b, a.start, tol)
            or _on_arc(b, a.end, tol)
        )
    x = x / nx
    for cand in (x, -x):
        if _on_arc(a, cand, tol) and _on_arc(b, cand, tol):
            return True
    return False


def _on_arc(arc: GreatArc, p: Vec, tol: float) -> bool:
    if abs(dot(p, arc.pole)) > math.sin(tol) + DOT_EPS:
        return False
    t = float(arc.param_of(p))
    return -tol <= t <= arc.length + tol
