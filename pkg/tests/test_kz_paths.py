"""Polyline path geometry: anchors, crossings, rotation numbers,
composition, subpaths."""

import math

import pytest

from kzfox import (
    Anchor,
    PLPath,
    PunctureConfig,
    compose,
    intersections,
    rotation_number,
    self_intersections,
    subpath,
)
from kzfox.errors import CompositionError, DomainError, ValidationError
from kzfox.kz_paths import REGULAR, TANGENTIAL, snap_half_integer

P3 = PunctureConfig([0.0, 1.0, 2.0])
BASE = Anchor.tangential(1, 1.0)


def _loop(points):
    return PLPath(P3, BASE, BASE, [complex(p) for p in points])


LOOP_A1 = [0.4, 0.4 + 0.3j, 1.5 + 0.3j, 1.5 - 0.3j, 0.4 - 0.3j, 0.4]
LOOP_B1 = [0.5, 0.5 + 0.5j, 2.5 + 0.5j, 2.5 - 0.4j, 0.2 - 0.4j, 0.2]
FIG8 = [
    0.25,
    0.2 + 0.3j,
    1.3 + 0.3j,
    1.3 + 0.55j,
    0.6 + 0.55j,
    0.6 - 0.3j,
    1.6 - 0.3j,
    1.6 + 0j,
]


# ---------------------------------------------------------------------------
# configuration and anchors
# ---------------------------------------------------------------------------
def test_puncture_config_validation():
    with pytest.raises(ValidationError):
        PunctureConfig([0.0, 0.0])
    with pytest.raises(ValidationError):
        PunctureConfig([])
    assert P3.n == 3
    assert P3.point(2) == 1.0
    assert P3.min_pairwise_distance() == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        P3.point(4)


def test_anchor_validation():
    with pytest.raises(ValidationError):
        Anchor.tangential(1, 2.0)  # direction must be unit modulus
    with pytest.raises(ValidationError):
        Anchor(TANGENTIAL, puncture=1)  # missing direction
    a = Anchor.tangential(2, 1j)
    assert a.location(P3) == 1.0
    r = Anchor.regular(0.5 + 0.5j)
    assert r.location(P3) == 0.5 + 0.5j


def test_path_validation_puncture_on_segment():
    with pytest.raises(ValidationError):
        # the closing run along the real axis passes through punctures
        _loop([0.4, 0.4 + 0.3j, 2.5 + 0.3j, 2.5, 0.4])


def test_path_validation_first_segment_direction():
    with pytest.raises(ValidationError):
        # first vertex off the start-anchor ray
        _loop([0.3 + 0.2j, 0.4 + 0.3j, 0.4])


# ---------------------------------------------------------------------------
# crossings
# ---------------------------------------------------------------------------
def test_embedded_loop_has_no_self_crossings():
    assert self_intersections(_loop(LOOP_A1)) == []


def test_figure_eight_has_one_self_crossing():
    end = Anchor.tangential(3, -1.0)
    path = PLPath(P3, BASE, end, [complex(p) for p in FIG8])
    crossings = self_intersections(path)
    assert len(crossings) == 1
    (c,) = crossings
    assert c.sign in (-1, 1)
    assert 0.0 < c.t < c.s < 1.0


def test_two_loop_crossing_count_and_signs():
    cuts = intersections(_loop(LOOP_A1), _loop(LOOP_B1))
    assert len(cuts) == 1
    assert cuts[0].sign in (-1, 1)


def test_identical_loops_rejected():
    with pytest.raises(ValidationError):
        intersections(_loop(LOOP_A1), _loop(LOOP_A1))


# ---------------------------------------------------------------------------
# rotation numbers
# ---------------------------------------------------------------------------
def test_rotation_number_of_simple_loop():
    # between tangential anchors the winding is a half-integer; a simple
    # loop carries -1/2 (clockwise interior travel) or +1/2
    assert snap_half_integer(rotation_number(_loop(LOOP_A1))) in (-0.5, 0.5)


def test_rotation_number_needs_tangential_ends():
    path = PLPath(
        P3,
        Anchor.regular(0.5 + 0.5j),
        Anchor.regular(0.5 - 0.5j),
        [1.5 + 0.5j, 1.5 - 0.5j],
    )
    with pytest.raises(DomainError):
        rotation_number(path)


def test_snap_half_integer():
    assert snap_half_integer(0.4999999999) == 0.5
    assert snap_half_integer(-1.0000000001) == -1.0
    with pytest.raises(ValidationError):
        snap_half_integer(0.3)


def test_composition_rotation_law():
    """rot(p2 p1) = rot(p1) + rot(p2) - 1/2 exactly after snapping."""
    g1, g2 = _loop(LOOP_A1), _loop(LOOP_B1)
    for a, b in ((g1, g2), (g2, g1), (g1, g1)):
        composite = compose(b, a)
        assert snap_half_integer(rotation_number(composite)) == snap_half_integer(
            rotation_number(a)
        ) + snap_half_integer(rotation_number(b)) - 0.5


def test_compose_validations():
    end3 = Anchor.tangential(3, -1.0)
    path = PLPath(P3, BASE, end3, [0.2, 0.25 + 0.35j, 1.75 + 0.35j, 1.8])
    with pytest.raises(CompositionError):
        compose(path, path)  # junction anchors differ (end at 3, start at 1)
    other = PLPath(PunctureConfig([0.0, 1.0]), Anchor.tangential(1, 1.0),
                   Anchor.tangential(2, -1.0), [])
    with pytest.raises(CompositionError):
        compose(_loop(LOOP_A1), other)


# ---------------------------------------------------------------------------
# subpaths
# ---------------------------------------------------------------------------
def test_subpath_interior_cut():
    loop = _loop(LOOP_A1)
    cut = subpath(loop, 0.25, 0.75)
    assert cut.start.kind == REGULAR
    assert cut.end.kind == REGULAR
    assert cut.punctures.points == loop.punctures.points


def test_subpath_preserves_anchors_at_ends():
    loop = _loop(LOOP_A1)
    assert subpath(loop, 0.0, 1.0).start.kind == TANGENTIAL
    assert subpath(loop, 0.0, 0.5).start.kind == TANGENTIAL
    assert subpath(loop, 0.5, 1.0).end.kind == TANGENTIAL


def test_subpath_splits_at_crossing_parameter():
    loop1, loop2 = _loop(LOOP_A1), _loop(LOOP_B1)
    (c,) = intersections(loop1, loop2)
    head = subpath(loop1, 0.0, c.t)
    tail = subpath(loop1, c.t, 1.0)
    assert head.end.kind == REGULAR
    assert abs(head.end.point - tail.start.point) < 1e-12
    assert abs(head.end.point - c.point) < 1e-9
