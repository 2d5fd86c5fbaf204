"""Transport engine, regularized holonomy, and the assembled identities."""

import cmath
import math

import pytest

from kzfox import (
    Anchor,
    ConnectionSpec,
    PLPath,
    PunctureConfig,
    associator,
    compose,
    holonomy_reg,
    mu_bar_kks,
    mu_bar_rhs,
    rho_kks,
    rho_paths,
    subpath,
    zeta,
)
from kzfox.errors import DomainError, ValidationError
from kzfox.kz_holonomy import goldman_bracket_check, pentagon_projection_check

P3 = PunctureConfig([0.0, 1.0, 2.0])
BASE = Anchor.tangential(1, 1.0)

LOOP_A1 = [0.4, 0.4 + 0.3j, 1.5 + 0.3j, 1.5 - 0.3j, 0.4 - 0.3j, 0.4]
LOOP_B1 = [0.5, 0.5 + 0.5j, 2.5 + 0.5j, 2.5 - 0.4j, 0.2 - 0.4j, 0.2]
LOOP_A4 = [0.3, 0.3 - 0.35j, 1.5 - 0.35j, 1.5 + 0.35j, 0.7 + 0.35j, 0.7]
LOOP_BUP = [
    0.15,
    0.15 + 0.5j,
    2.5 + 0.5j,
    2.5 - 0.45j,
    0.5 - 0.45j,
    0.5 + 0.25j,
    0.45 + 0.25j,
    0.45,
]


def _loop(points):
    return PLPath(P3, BASE, BASE, [complex(p) for p in points])


def test_connection_spec_validation():
    with pytest.raises(DomainError):
        ConnectionSpec(P3, -1)
    conn = ConnectionSpec(P3, 3)
    assert conn.n_generators == 3
    assert conn.generator(2).coefficient((2,)) == 1


def test_path_and_connection_punctures_must_agree():
    conn = ConnectionSpec(PunctureConfig([0.0, 1.0]), 3)
    with pytest.raises(ValidationError):
        holonomy_reg(conn, _loop(LOOP_A1))


# ---------------------------------------------------------------------------
# transport basics
# ---------------------------------------------------------------------------
def test_monodromy_degree_one_residue():
    """A regular loop once around puncture 2 picks up x_2 at degree one."""
    conn = ConnectionSpec(P3, 3)
    start = Anchor.regular(0.5 + 0.5j)
    loop = PLPath(
        P3,
        start,
        Anchor.regular(0.5 + 0.5j),
        [0.5 - 0.5j, 1.5 - 0.5j, 1.5 + 0.5j],
    )
    h = holonomy_reg(conn, loop).series
    g = h.log()
    assert abs(g.coefficient((2,)) - 1.0) < 1e-10
    assert abs(g.coefficient((1,))) < 1e-10
    assert abs(g.coefficient((3,))) < 1e-10


def test_holonomy_is_grouplike():
    conn = ConnectionSpec(P3, 4)
    h = holonomy_reg(conn, _loop(LOOP_A4)).series
    assert h.is_grouplike(1e-8)
    assert abs(h.coefficient(()) - 1.0) < 1e-12


def test_multiplicativity_regular_split():
    """Hol(full) = Hol(tail) * Hol(head) when cut at an interior point."""
    conn = ConnectionSpec(P3, 4)
    loop = _loop(LOOP_A4)
    h = holonomy_reg(conn, loop).series
    for t in (0.3, 0.62):
        head = holonomy_reg(conn, subpath(loop, 0.0, t)).series
        tail = holonomy_reg(conn, subpath(loop, t, 1.0)).series
        assert (h - tail * head).norm_inf() < 1e-8


def test_multiplicativity_tangential_composition():
    """Hol(gamma2 gamma1) = Hol(gamma2) * Hol(gamma1) for loops composed at
    a shared tangential base point."""
    conn = ConnectionSpec(P3, 4)
    a, b = _loop(LOOP_A1), _loop(LOOP_B1)
    ha = holonomy_reg(conn, a).series
    hb = holonomy_reg(conn, b).series
    hc = holonomy_reg(conn, compose(b, a)).series
    assert (hc - hb * ha).norm_inf() < 1e-6


def test_holonomy_report_fields():
    conn = ConnectionSpec(P3, 3)
    res = holonomy_reg(conn, _loop(LOOP_A1))
    data = res.to_json_dict()
    assert "series" in data and "report" in data
    assert data["report"]["rot"] in (-0.5, 0.5)
    assert data["report"]["crossings"] == []
    assert res.accuracy_estimate < 1e-6


# ---------------------------------------------------------------------------
# associator
# ---------------------------------------------------------------------------
def test_associator_degree_zero_and_one():
    s = associator(0)
    assert s.coefficient(()) == 1.0
    s1 = associator(1)
    assert abs(s1.coefficient((1,))) < 1e-10
    assert abs(s1.coefficient((2,))) < 1e-10


def test_associator_commutator_coefficient():
    """log of the associator starts with a multiple of [x1, x2] whose
    coefficient is zeta(2)/(2 pi i)^2 up to sign."""
    s = associator(2)
    g = s.log()
    c12 = g.coefficient((1, 2))
    c21 = g.coefficient((2, 1))
    expected = zeta(2) / abs(complex(0, 2 * math.pi)) ** 2
    assert abs(c12 + c21) < 1e-10  # commutator: opposite coefficients
    assert abs(abs(c12) - expected) < 1e-8


# ---------------------------------------------------------------------------
# assembled identities
# ---------------------------------------------------------------------------
def _mu_bar_discrepancy(conn, path):
    h = holonomy_reg(conn, path).series
    lhs = mu_bar_kks(h).with_degree(conn.trunc_degree - 1)
    rhs = mu_bar_rhs(conn, path, holonomy=h)
    return (lhs - rhs).norm_inf()


def test_mu_bar_identity_embedded_path():
    punctures = PunctureConfig([0.0, 1.0])
    conn = ConnectionSpec(punctures, 4)
    path = PLPath(
        punctures, Anchor.tangential(1, 1.0), Anchor.tangential(2, -1.0), []
    )
    assert _mu_bar_discrepancy(conn, path) < 1e-10


def test_mu_bar_identity_loop():
    conn = ConnectionSpec(P3, 4)
    assert _mu_bar_discrepancy(conn, _loop(LOOP_A4)) < 1e-10


# ---------------------------------------------------------------------------
# path pairing formula
# ---------------------------------------------------------------------------
def test_rho_paths_disjoint():
    punctures = PunctureConfig([0.0, 1.0, 2.0, 3.0])
    conn = ConnectionSpec(punctures, 4)
    p12 = PLPath(
        punctures, Anchor.tangential(1, 1.0), Anchor.tangential(2, -1.0), []
    )
    p34 = PLPath(
        punctures, Anchor.tangential(3, 1.0), Anchor.tangential(4, -1.0), []
    )
    h1 = holonomy_reg(conn, p12).series
    h2 = holonomy_reg(conn, p34).series
    rhs = rho_paths(conn, p34, p12)
    assert (rho_kks(h2, h1).with_degree(3) - rhs).norm_inf() < 1e-10


def test_rho_paths_shared_middle():
    # path2 must leave the shared puncture along path1's arrival ray,
    # resolving below it
    conn = ConnectionSpec(P3, 4)
    p12 = PLPath(P3, Anchor.tangential(1, 1.0), Anchor.tangential(2, -1.0), [])
    p23 = PLPath(
        P3,
        Anchor.tangential(2, -1.0),
        Anchor.tangential(3, 1.0),
        [0.9, 0.85 - 0.25j, 2.3 - 0.25j, 2.3],
    )
    h1 = holonomy_reg(conn, p12).series
    h2 = holonomy_reg(conn, p23).series
    rhs = rho_paths(conn, p23, p12)
    assert (rho_kks(h2, h1).with_degree(3) - rhs).norm_inf() < 1e-10


def test_rho_paths_loops():
    conn = ConnectionSpec(P3, 4)
    loop1, loop2 = _loop(LOOP_A4), _loop(LOOP_BUP)
    h1 = holonomy_reg(conn, loop1).series
    h2 = holonomy_reg(conn, loop2).series
    rhs = rho_paths(conn, loop2, loop1)
    assert (rho_kks(h2, h1).with_degree(3) - rhs).norm_inf() < 1e-10


def test_rho_paths_rejects_coinciding_endpoints():
    conn = ConnectionSpec(P3, 3)
    p12 = PLPath(P3, Anchor.tangential(1, 1.0), Anchor.tangential(2, -1.0), [])
    p21 = PLPath(
        P3,
        Anchor.tangential(2, -1.0),
        Anchor.tangential(1, 1.0),
        [0.9, 0.85 - 0.25j, 0.15 - 0.25j, 0.1],
    )
    with pytest.raises(ValidationError):
        rho_paths(conn, p21, p12)


# ---------------------------------------------------------------------------
# report-level checks (deeper tolerances exercised in the acceptance suite)
# ---------------------------------------------------------------------------
def test_goldman_bracket_check_report():
    conn = ConnectionSpec(P3, 4)
    report = goldman_bracket_check(conn, _loop(LOOP_B1), _loop(LOOP_A1))
    assert report["n_crossings"] == 1
    assert report["base_linking"] in (-1.0, 1.0)
    assert report["max_discrepancy"] < 1e-8


def test_pentagon_projection_check_report():
    conn = ConnectionSpec(P3, 4)
    end = Anchor.tangential(3, -1.0)
    fig8 = PLPath(
        P3,
        BASE,
        end,
        [0.25, 0.2 + 0.3j, 1.3 + 0.3j, 1.3 + 0.55j, 0.6 + 0.55j, 0.6 - 0.3j,
         1.6 - 0.3j, 1.6 + 0j],
    )
    report = pentagon_projection_check(conn, fig8)
    assert report["n_crossings"] == 1
    assert report["max_discrepancy"] < 1e-8
