import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fracplane.exactnum import (
    COS_THETA, ONE, SIN_THETA, CollinearOverlap, FieldDivisionByZero, Orientation, Point, QuadExt,
    RotationSpec, dist2, lattice_point, orient, point, rotate, segments_cross, sign,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
elements = st.builds(QuadExt, small, small, small, small)
nonzero = elements.filter(lambda x: not x.is_zero())


def approx(x: QuadExt) -> float:
    return float(x)


@given(elements, elements, elements)
def test_ring_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x - y) + y == x


@given(elements, nonzero)
def test_division_inverts_multiplication(x, y):
    assert (x / y) * y == x
    assert y * y.inverse() == ONE


def test_division_by_zero():
    with pytest.raises(FieldDivisionByZero):
        QuadExt(1) / QuadExt(0)


@given(elements)
def test_sign_matches_floats_when_clear(x):
    f = approx(x)
    if abs(f) > 1e-6:
        assert sign(x) == (1 if f > 0 else -1)


def test_sign_on_near_cancellation():
    # 10 - sqrt(99) = 10 - 3 sqrt11 is about 0.0501
    assert sign(QuadExt(10, 0, -3)) == 1
    assert sign(QuadExt(-10, 0, 3)) == -1
    # sqrt3 * sqrt11 - sqrt33 is exactly zero
    assert sign(QuadExt(0, 1) * QuadExt(0, 0, 1) - QuadExt(0, 0, 0, 1)) == 0


@given(elements)
def test_json_round_trip(x):
    data = x.to_json()
    assert len(data) == 8 and all(isinstance(v, int) for v in data)
    assert QuadExt.from_json(data) == x


def test_rotation_angle():
    assert COS_THETA * COS_THETA + SIN_THETA * SIN_THETA == ONE
    # the angle subtended by a unit chord of a circle of radius sqrt3
    assert math.isclose(2 * math.sqrt(3) * math.sin(math.acos(5 / 6) / 2), 1.0)


@given(st.integers(-4, 4), st.integers(-4, 4), st.sampled_from(list(Orientation)))
def test_rotation_preserves_distance(i, j, o):
    c = lattice_point(0, 0)
    p = lattice_point(i, j)
    assert dist2(rotate(p, RotationSpec(c, o)), c) == dist2(p, c)


def test_spindle_tips_at_unit_distance():
    # top of a vertical diamond and its rotated image are exactly 1 apart
    top = lattice_point(1, 1)
    img = rotate(top, RotationSpec(lattice_point(0, 0)))
    assert dist2(top, img) == ONE


def test_orientation_and_crossing():
    a, b, c, d = point(0, 0), point(2, 0), point(1, 1), point(1, -1)
    assert orient(a, b, c) == 1 and orient(a, b, d) == -1
    assert segments_cross((a, b), (c, d))
    assert not segments_cross((a, c), (c, b))  # shared endpoint
    with pytest.raises(CollinearOverlap):
        segments_cross((a, b), (point(1, 0), point(3, 0)))


def test_point_json():
    p = Point(QuadExt(Fraction(1, 2), 3), QuadExt(0, 0, 1, Fraction(-2, 7)))
    assert Point.from_json(p.to_json()) == p
