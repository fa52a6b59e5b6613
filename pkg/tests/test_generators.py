import math

import numpy as np
import pytest

from spherewidth.body import (
    Polytope,
    as_body,
    body_distance_many,
    polar_dual,
    validate,
    validate_polytope,
)
from spherewidth.errors import BadRadius, SeedNotSubdual
from spherewidth.generators import (
    cap,
    complete_selfdual,
    convex_hull_with_point,
    octant,
    random_selfdual_polytope,
    rotated,
    rotation_from_seed,
)
from spherewidth.metrics import (
    diameter,
    is_constant_width,
    self_duality_residual,
    thickness,
)
from spherewidth.sphere import SmallCircleArc, sample_piece, unit

E1, E2, E3 = np.eye(3)
PI = math.pi


# ------------------------------------------------------------------ fixtures


def test_octant_properties():
    p = octant()
    assert validate_polytope(p).ok
    assert self_duality_residual(p) < 1e-10
    assert thickness(p) == pytest.approx(PI / 2, abs=1e-12)
    assert diameter(p) == pytest.approx(PI / 2, abs=1e-12)


def test_cap_selfdual_and_thickness():
    assert self_duality_residual(cap(E3, PI / 4)) < 1e-10
    assert thickness(cap(E3, PI / 6)) == pytest.approx(PI / 3, abs=1e-9)


def test_cap_validates_random_centers():
    rng = np.random.default_rng(3)
    for _ in range(5):
        c = cap(unit(rng.normal(size=3)), rng.uniform(0.1, 1.4))
        assert validate(c).ok


def test_cap_bad_radius():
    with pytest.raises(BadRadius):
        cap(E3, 0.0)
    with pytest.raises(BadRadius):
        cap(E3, PI / 2)


def test_rotation_is_orthogonal_and_deterministic():
    r1 = rotation_from_seed(9)
    r2 = rotation_from_seed(9)
    assert np.array_equal(r1, r2)
    assert np.allclose(r1 @ r1.T, np.eye(3), atol=1e-14)
    assert np.linalg.det(r1) == pytest.approx(1.0, abs=1e-12)


def test_rotated_cap_keeps_geometry():
    rot = rotation_from_seed(4)
    c = rotated(cap(E3, 0.6), rot)
    assert validate(c).ok
    assert thickness(c) == pytest.approx(1.2, abs=1e-9)


# ---------------------------------------------------------------- completion


def test_completion_fixed_point_on_selfdual_cap():
    b = cap(E3, PI / 4)
    out = complete_selfdual(b, tol=1e-6)
    assert len(out.pieces) == 1
    assert self_duality_residual(out) < 1e-9


def test_completion_of_thin_polytope():
    seed = Polytope(np.array([E1, E2, unit(E1 + E2 + 0.4 * E3)]))
    out = complete_selfdual(seed, tol=1e-6, rng_seed=1)
    assert out.is_polytope()
    assert self_duality_residual(out) <= 1e-6
    rep = is_constant_width(out, PI / 2, 1e-5)
    assert rep.passed
    assert thickness(out) == pytest.approx(PI / 2, abs=1e-6)
    assert diameter(out) == pytest.approx(PI / 2, abs=1e-6)


def test_completion_of_shallow_cap_piece_radii():
    r = 0.7
    out = complete_selfdual(cap(E3, r), tol=1e-6, rng_seed=0)
    assert self_duality_residual(out) <= 1e-6
    radii = {round(p.radius, 9) for p in out.pieces if isinstance(p, SmallCircleArc)}
    # any surviving strictly convex arc keeps the seed radius or its dual
    assert radii <= {round(r, 9), round(PI / 2 - r, 9)}


def test_completion_invariants_per_iteration():
    # replay the greedy loop, checking the growing body stays inside its
    # dual and the residual never increases
    body = as_body(cap(E3, 0.7))
    last = np.inf
    for _ in range(40):
        dual = polar_dual(body, check=False)
        pts = np.vstack([sample_piece(p, 300) for p in dual.pieces])
        gaps = body_distance_many(body, pts)
        i = int(np.argmax(gaps))
        residual = float(gaps[i])
        assert residual <= last + 1e-9
        last = residual
        # sub-duality: the diameter never exceeds pi/2
        assert diameter(body) <= PI / 2 + 1e-9
        if residual <= 1e-9:
            break
        body = convex_hull_with_point(body, pts[i])
        assert validate(body).ok
    assert last <= 1e-9


def test_completion_rejects_superdual_seed():
    with pytest.raises(SeedNotSubdual):
        complete_selfdual(cap(E3, PI / 3), tol=1e-3)


def chopped_cap(gap=PI / 2):
    """Quarter-pi cap truncated by the hemisphere of one chord pole."""
    from spherewidth.body import ConvexBody
    from spherewidth.sphere import GreatArc

    circle = cap(E3, PI / 4).pieces[0]
    p1 = circle.point_at(0.0)[0]
    p2 = circle.point_at(gap)[0]
    arc = SmallCircleArc(E3, PI / 4, gap, 2 * PI)
    return ConvexBody([GreatArc(p1, p2), arc], E3)


def test_completion_produces_mixed_body_from_chopped_cap():
    seed = chopped_cap()
    assert validate(seed).ok
    out = complete_selfdual(seed, tol=1e-7, rng_seed=2)
    assert self_duality_residual(out) <= 1e-7
    kinds = {type(p).__name__ for p in out.pieces}
    assert kinds == {"GreatArc", "SmallCircleArc"}
    radii = {round(p.radius, 9) for p in out.pieces if isinstance(p, SmallCircleArc)}
    assert radii == {round(PI / 4, 9)}  # r and pi/2 - r coincide at pi/4


# ---------------------------------------------------------------- randomized


def test_random_polytope_n3_is_rotated_octant():
    p = random_selfdual_polytope(3, 11)
    assert len(p) == 3
    gram = p.vertices @ p.vertices.T
    assert np.allclose(gram, np.eye(3), atol=1e-12)
    assert self_duality_residual(p) <= 1e-6


def test_random_polytope_deterministic():
    a = random_selfdual_polytope(7, 42)
    b = random_selfdual_polytope(7, 42)
    assert np.array_equal(a.vertices, b.vertices)


@pytest.mark.parametrize("seed", [1, 2, 5, 9])
def test_random_polytope_constant_width(seed):
    p = random_selfdual_polytope(5 + seed % 4, seed)
    assert validate_polytope(p).ok
    rep = is_constant_width(p, PI / 2, 1e-5)
    assert rep.passed
    assert diameter(p) <= PI / 2 + 1e-9
