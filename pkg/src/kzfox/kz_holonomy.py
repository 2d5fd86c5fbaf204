"""Numerical parallel transport and regularized holonomy of the logarithmic
flat connection  (1/2 pi i) sum_i x_i dlog(z - z_i)  along polyline paths.

The transport is computed degree by degree: the word coefficients of the
solution satisfy a triangular system of iterated integrals which is evaluated
on adaptive Gauss-Legendre panels, with the quadrature nodes shared across all
word coefficients of a given degree.  Tangential endpoints are regularized by
a cutoff, a branch-fixed local correction, and Richardson extrapolation in the
cutoff.  On top of the transport engine sit the assembled right-hand sides of
the holonomy identities: the reduced-coaction formula, the pairing formula for
two paths, the loop-bracket checks on cyclic words, and the projected pentagon
identity evaluated through the square-zero extension maps.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .brackets_coactions import (
    CyclicWedge,
    necklace_bracket,
    necklace_cobracket,
)
from .coefficients import TWO_PI_I, r_am_series, r_zeta_series
from .errors import AccuracyError, DomainError, ValidationError
from .fox_calculus import d_left, d_right
from .free_hopf import COMPLEX, CyclicSeries, FreeSeries
from .kz_paths import (
    Anchor,
    PLPath,
    PunctureConfig,
    TANGENTIAL,
    intersections,
    rotation_number,
    self_intersections,
    snap_half_integer,
    subpath,
)
from .trivial_extension import (
    SIDE_LEFT,
    SIDE_RIGHT,
    associator_tail,
    square_w,
    square_z,
    square_zw,
)

Word = Tuple[int, ...]

DEFAULT_ACCURACY = 1e-10
DEFAULT_DELTA = 1e-3
_MAX_DEPTH = 48
_GL_ORDER = 16


def _gauss_legendre_setup(order: int):
    """Nodes, weights, and the spectral integration matrix Q with
    Q[j, l] = integral of the l-th Lagrange cardinal from -1 to node j."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    vander = np.polynomial.legendre.legvander(nodes, order - 1)
    inv_vander = np.linalg.inv(vander)  # node values -> Legendre coefficients
    q = np.empty((order, order))
    for l in range(order):
        anti = np.polynomial.legendre.legint(inv_vander[:, l], lbnd=-1.0)
        q[:, l] = np.polynomial.legendre.legval(nodes, anti)
    return nodes, weights, q


_GL_NODES, _GL_WEIGHTS, _GL_INTMAT = _gauss_legendre_setup(_GL_ORDER)


def _words_by_length(n: int, degree: int) -> List[Word]:
    out: List[Word] = []
    for k in range(1, degree + 1):
        out.extend(product(range(1, n + 1), repeat=k))
    return out


class ConnectionSpec:
    """The connection data: punctures paired with generators, a truncation
    degree, and the floating backend."""

    def __init__(self, punctures: PunctureConfig, trunc_degree: int):
        if trunc_degree < 0:
            raise DomainError("truncation degree must be >= 0")
        self.punctures = punctures
        self.trunc_degree = trunc_degree
        self.backend = COMPLEX
        self._words = _words_by_length(punctures.n, trunc_degree)

    @property
    def n_generators(self) -> int:
        return self.punctures.n

    def unit(self) -> FreeSeries:
        return FreeSeries.unit(self.n_generators, self.trunc_degree, COMPLEX)

    def generator(self, i: int) -> FreeSeries:
        return FreeSeries.generator(i, self.n_generators, self.trunc_degree, COMPLEX)

    def _series(self, coeffs: Dict[Word, complex]) -> FreeSeries:
        terms = dict(coeffs)
        terms[()] = terms.get((), 0j)
        return FreeSeries(self.n_generators, self.trunc_degree, terms, COMPLEX)


@dataclass(frozen=True)
class HolonomyResult:
    """Regularized holonomy along a path, with an error report."""

    series: FreeSeries
    path: PLPath
    accuracy_estimate: float
    regularization_report: dict

    def to_json_dict(self) -> dict:
        report = {"accuracy": self.accuracy_estimate}
        report.update(self.regularization_report)
        if (
            self.path.start.kind == TANGENTIAL
            and self.path.end.kind == TANGENTIAL
        ):
            report["rot"] = snap_half_integer(rotation_number(self.path))
            report["crossings"] = [
                {"t": c.t, "s": c.s, "sign": c.sign}
                for c in self_intersections(self.path)
            ]
        return {"series": self.series.to_json_dict(), "report": report}


# ---------------------------------------------------------------------------
# transport engine
# ---------------------------------------------------------------------------
def _panel_transport(
    conn: ConnectionSpec,
    z0: complex,
    dz: complex,
    a: float,
    b: float,
    init: Dict[Word, complex],
) -> Dict[Word, complex]:
    """One Gauss-Legendre panel over the local parameter span [a, b] of the
    segment z(u) = z0 + dz*u; returns the word coefficients at u = b."""
    half = 0.5 * (b - a)
    u = 0.5 * (a + b) + half * _GL_NODES
    z = z0 + dz * u
    factors = []
    for i in range(1, conn.n_generators + 1):
        denom = z - conn.punctures.point(i)
        factors.append((dz * half / TWO_PI_I) / denom)
    scalar = init.get((), 0j)
    node_vals: Dict[Word, np.ndarray] = {(): np.full(_GL_ORDER, scalar)}
    end: Dict[Word, complex] = {(): scalar}
    for word in conn._words:
        g = factors[word[0] - 1] * node_vals[word[1:]]
        base = init.get(word, 0j)
        node_vals[word] = base + _GL_INTMAT @ g
        end[word] = base + complex(_GL_WEIGHTS @ g)
    return end


def _advance(
    conn: ConnectionSpec,
    z0: complex,
    dz: complex,
    a: float,
    b: float,
    init: Dict[Word, complex],
    tol: float,
    depth: int,
    seg_idx: int,
) -> Tuple[Dict[Word, complex], float]:
    whole = _panel_transport(conn, z0, dz, a, b, init)
    mid = 0.5 * (a + b)
    first = _panel_transport(conn, z0, dz, a, mid, init)
    halves = _panel_transport(conn, z0, dz, mid, b, first)
    err = max(abs(whole[w] - halves[w]) for w in whole)
    # the roundoff floor keeps deep subdivisions from demanding sub-epsilon
    # panel residuals
    if err <= max(tol, 1e-15):
        return halves, err
    if depth >= _MAX_DEPTH:
        raise AccuracyError(
            f"panel subdivision limit exceeded on segment {seg_idx} "
            f"(residual {err:.3e} > {tol:.3e}); the path may run too close "
            "to a puncture"
        )
    left, err_l = _advance(conn, z0, dz, a, mid, init, 0.5 * tol, depth + 1, seg_idx)
    right, err_r = _advance(conn, z0, dz, mid, b, left, 0.5 * tol, depth + 1, seg_idx)
    return right, err_l + err_r


def _transport_polyline(
    conn: ConnectionSpec, points: Sequence[complex], accuracy: float
) -> Tuple[Dict[Word, complex], float]:
    state: Dict[Word, complex] = {(): 1.0 + 0j}
    n_seg = len(points) - 1
    tol = accuracy / max(n_seg, 1)
    total_err = 0.0
    for k in range(n_seg):
        z0 = complex(points[k])
        dz = complex(points[k + 1]) - z0
        state, err = _advance(conn, z0, dz, 0.0, 1.0, state, tol, 0, k)
        total_err += err
    return state, total_err


def transport(
    conn: ConnectionSpec, path: PLPath, accuracy: float = DEFAULT_ACCURACY
) -> FreeSeries:
    """Parallel transport along a path with regular anchors."""
    if path.start.kind == TANGENTIAL or path.end.kind == TANGENTIAL:
        raise ValidationError("transport requires regular anchors at both ends")
    if path.punctures.points != conn.punctures.points:
        raise ValidationError("path and connection use different punctures")
    state, _ = _transport_polyline(conn, path.points, accuracy)
    return conn._series(state)


# ---------------------------------------------------------------------------
# regularized holonomy
# ---------------------------------------------------------------------------
def _panel_frame(
    conn: ConnectionSpec,
    puncture: int,
    zp: complex,
    v: complex,
    a: float,
    b: float,
    init: Dict[Word, complex],
) -> Dict[Word, complex]:
    """One panel of the analytic local frame U along the anchor ray
    z = zp + v*r, r in [a, b].  U solves the transport equation conjugated by
    the local monodromy factor r^{x_p/2pi i}; the conjugation replaces the
    simple pole at the puncture with the bounded commutator term
    (x_p U - U x_p)/r, so the integrand is analytic up to r = 0."""
    half = 0.5 * (b - a)
    r = 0.5 * (a + b) + half * _GL_NODES
    z = zp + v * r
    factors = []
    for i in range(1, conn.n_generators + 1):
        if i == puncture:
            factors.append((half / TWO_PI_I) / r)
        else:
            factors.append((v * half / TWO_PI_I) / (z - conn.punctures.point(i)))
    scalar = init.get((), 0j)
    node_vals: Dict[Word, np.ndarray] = {(): np.full(_GL_ORDER, scalar)}
    end: Dict[Word, complex] = {(): scalar}
    pole = factors[puncture - 1]
    for word in conn._words:
        g = factors[word[0] - 1] * node_vals[word[1:]]
        if word[-1] == puncture:
            g = g - pole * node_vals[word[:-1]]
        base = init.get(word, 0j)
        node_vals[word] = base + _GL_INTMAT @ g
        end[word] = base + complex(_GL_WEIGHTS @ g)
    return end


def _advance_frame(
    conn: ConnectionSpec,
    puncture: int,
    zp: complex,
    v: complex,
    a: float,
    b: float,
    init: Dict[Word, complex],
    tol: float,
    depth: int,
) -> Dict[Word, complex]:
    whole = _panel_frame(conn, puncture, zp, v, a, b, init)
    mid = 0.5 * (a + b)
    first = _panel_frame(conn, puncture, zp, v, a, mid, init)
    halves = _panel_frame(conn, puncture, zp, v, mid, b, first)
    err = max(abs(whole[w] - halves[w]) for w in whole)
    if err <= max(tol, 1e-15):
        return halves
    if depth >= _MAX_DEPTH:
        raise AccuracyError(
            f"local frame integration at puncture {puncture} did not converge "
            f"(residual {err:.3e} > {tol:.3e})"
        )
    left = _advance_frame(conn, puncture, zp, v, a, mid, init, 0.5 * tol, depth + 1)
    return _advance_frame(conn, puncture, zp, v, mid, b, left, 0.5 * tol, depth + 1)


def _local_frame(
    conn: ConnectionSpec, puncture: int, v: complex, length: float, accuracy: float
) -> FreeSeries:
    """Analytic frame U at distance `length` from the puncture along the unit
    ray direction v, normalized by U = 1 at the puncture."""
    zp = conn.punctures.point(puncture)
    init: Dict[Word, complex] = {(): 1.0 + 0j}
    state = _advance_frame(conn, puncture, zp, v, 0.0, length, init, accuracy, 0)
    return conn._series(state)


def _local_scale(conn: ConnectionSpec, puncture: int, tail_length: float) -> float:
    z = conn.punctures.point(puncture)
    dists = [
        abs(conn.punctures.point(j) - z)
        for j in range(1, conn.n_generators + 1)
        if j != puncture
    ]
    scale = min(dists) if dists else tail_length
    return min(scale, tail_length)


def _holonomy_at_delta(
    conn: ConnectionSpec, path: PLPath, delta: float, accuracy: float
) -> Tuple[FreeSeries, dict]:
    points = list(path.points)
    pre: Optional[FreeSeries] = None
    post: Optional[FreeSeries] = None
    report: dict = {}
    if path.start.kind == TANGENTIAL:
        p = path.start.puncture
        zp = conn.punctures.point(p)
        v = path.start.direction / abs(path.start.direction)
        d_abs = delta * _local_scale(conn, p, abs(points[1] - zp))
        points[0] = zp + v * d_abs
        # local coordinate (z - z_p)/v is real positive on the outgoing ray,
        # so the branch correction uses a real logarithm; the analytic frame
        # factor removes the O(delta * log delta) cutoff error entirely
        pre = _local_frame(conn, p, v, d_abs, accuracy) * conn.generator(p).scale(
            cmath.log(d_abs) / TWO_PI_I
        ).exp()
        report["cutoff_start"] = d_abs
    if path.end.kind == TANGENTIAL:
        q = path.end.puncture
        zq = conn.punctures.point(q)
        v = path.end.direction / abs(path.end.direction)
        d_abs = delta * _local_scale(conn, q, abs(points[-2] - zq))
        points[-1] = zq + v * d_abs
        post = conn.generator(q).scale(-cmath.log(d_abs) / TWO_PI_I).exp() * (
            _local_frame(conn, q, v, d_abs, accuracy).inverse()
        )
        report["cutoff_end"] = d_abs
    state, quad_err = _transport_polyline(conn, points, accuracy)
    series = conn._series(state)
    if pre is not None:
        series = series * pre
    if post is not None:
        series = post * series
    report["quadrature_error"] = quad_err
    return series, report


def holonomy_reg(
    conn: ConnectionSpec,
    path: PLPath,
    accuracy: float = DEFAULT_ACCURACY,
    delta: float = DEFAULT_DELTA,
) -> HolonomyResult:
    """Regularized holonomy: cutoff + branch-fixed correction at each
    tangential anchor, Richardson-extrapolated over two cutoff values."""
    if path.punctures.points != conn.punctures.points:
        raise ValidationError("path and connection use different punctures")
    if path.start.kind != TANGENTIAL and path.end.kind != TANGENTIAL:
        state, quad_err = _transport_polyline(conn, path.points, accuracy)
        return HolonomyResult(
            conn._series(state), path, quad_err, {"deltas": [], "quadrature_error": quad_err}
        )
    coarse, rep1 = _holonomy_at_delta(conn, path, delta, accuracy)
    fine, rep2 = _holonomy_at_delta(conn, path, 0.5 * delta, accuracy)
    raw = (fine - coarse).norm_inf()
    if raw > 0.25:
        raise AccuracyError(
            f"cutoff extrapolation did not converge (|H(d/2)-H(d)| = {raw:.3e})"
        )
    # extrapolate in the logarithm so the result stays exactly grouplike
    extrapolated = (2.0 * fine.log() - coarse.log()).exp()
    report = {
        "deltas": [delta, 0.5 * delta],
        "coarse": rep1,
        "fine": rep2,
        "raw_difference": raw,
    }
    return HolonomyResult(extrapolated, path, raw, report)


def associator(degree: int, accuracy: float = DEFAULT_ACCURACY) -> FreeSeries:
    """Regularized holonomy along the straight path between punctures 0 and 1
    on the real axis, in two generators."""
    punctures = PunctureConfig([0.0, 1.0])
    conn = ConnectionSpec(punctures, degree)
    path = PLPath(
        punctures,
        Anchor.tangential(1, 1.0),
        Anchor.tangential(2, -1.0),
        [],
    )
    return holonomy_reg(conn, path, accuracy=accuracy).series


# ---------------------------------------------------------------------------
# assembled identity right-hand sides
#
# The assembled formulas mix degree-preserving terms (products with holonomy
# factors) and degree-lowering terms (Fox derivatives, reduced coaction).  At
# word degree k the degree-lowering terms read the degree-(k+1) part of the
# holonomy, so at truncation degree D the identities are exact only through
# degree D-1; the assemblies below therefore return/compare series truncated
# to D-1.
# ---------------------------------------------------------------------------
def _norm_through(coeffs, degree: int, key_len=len) -> float:
    return max(
        (abs(c) for k, c in coeffs.items() if key_len(k) <= degree), default=0.0
    )


def _require_tangential(path: PLPath, which: str) -> int:
    anchor = path.start if which == "start" else path.end
    if anchor.kind != TANGENTIAL:
        raise ValidationError(f"{which} anchor must be tangential")
    return anchor.puncture


def _ray_germ(path: PLPath, which: str) -> float:
    """Resolved height of the on-ray tail strand of a loop near its
    tangential anchor.

    Near a tangential anchor every path runs exactly on the anchor ray, so
    polyline realizations degenerate: the smooth curves they stand for are
    separated by infinitesimal heights.  The resolution pushes each strand to
    the side it eventually departs to, with strands that leave the ray earlier
    lying farther from it.  The returned value is (departure side) / (contact
    span); comparing two such values reproduces the vertical order of the
    resolved strands.
    """
    anchor = path.start if which == "out" else path.end
    base = anchor.location(path.punctures)
    v = anchor.direction
    pts = path.points if which == "out" else tuple(reversed(path.points))
    span = 0.0
    side = 0.0
    for pt in pts[1:]:
        w = (pt - base) / v
        if abs(w.imag) <= 1e-12 * max(1.0, abs(w.real)):
            span = w.real
            continue
        side = 1.0 if w.imag > 0 else -1.0
        break
    if side == 0.0 or span <= 0.0:
        raise ValidationError(
            "cannot resolve the base strand: the tail never leaves the "
            "anchor ray"
        )
    return side / span


def _closure_shift(path: PLPath) -> float:
    """Extra tangent winding (+-1/2) picked up when a loop at a tangential
    anchor is closed through the base point in the resolved smooth model.

    The closing U-turn joins the incoming strand to the outgoing one on the
    far side of the base; it turns counterclockwise (+1/2) when the outgoing
    strand lies below the incoming one and clockwise (-1/2) otherwise.
    """
    g_out = _ray_germ(path, "out")
    g_in = _ray_germ(path, "in")
    if g_out == g_in:
        raise ValidationError(
            "ambiguous base-strand ordering: outgoing and incoming tails have "
            "equal ray-contact spans on the same side; perturb a turning point"
        )
    return 0.5 if g_out < g_in else -0.5


def _base_linking(path1: PLPath, path2: PLPath) -> float:
    """Sign of the crossing between two loops at their common base point in
    the resolved smooth model (0.0 when the resolved strands do not cross).

    Both loops pass through the base, so the base is always a geometric
    intersection; whether the resolved curves actually cross there depends on
    the vertical order of the four tail strands.  An alternating order makes
    the two closing U-turns link once; a nested order keeps them disjoint.
    """
    germs = [
        (_ray_germ(path1, "out"), 1, "out"),
        (_ray_germ(path1, "in"), 1, "in"),
        (_ray_germ(path2, "out"), 2, "out"),
        (_ray_germ(path2, "in"), 2, "in"),
    ]
    if len({g[0] for g in germs}) < 4:
        raise ValidationError(
            "ambiguous base-strand ordering: two tails have equal ray-contact "
            "spans on the same side; perturb a turning point"
        )
    order = sorted(germs, key=lambda g: -g[0])
    curves = [g[1] for g in order]
    if curves not in ([1, 2, 1, 2], [2, 1, 2, 1]):
        return 0.0
    i = next(k for k, g in enumerate(order) if g[1] == 1 and g[2] == "out")
    return -1.0 if order[(i + 1) % 4][2] == "out" else 1.0


def _crossing_sum(
    conn: ConnectionSpec,
    path: PLPath,
    accuracy: float,
    delta: float,
) -> FreeSeries:
    """Sum over self-intersections of sign * Hol(later piece) * Hol(earlier
    piece), the pieces being cut at the crossing."""
    total = FreeSeries.zero(conn.n_generators, conn.trunc_degree, COMPLEX)
    for c in self_intersections(path):
        front = holonomy_reg(conn, subpath(path, c.s, 1.0), accuracy, delta).series
        back = holonomy_reg(conn, subpath(path, 0.0, c.t), accuracy, delta).series
        total = total + float(c.sign) * (front * back)
    return total


def mu_bar_rhs(
    conn: ConnectionSpec,
    path: PLPath,
    accuracy: float = DEFAULT_ACCURACY,
    delta: float = DEFAULT_DELTA,
    holonomy: Optional[FreeSeries] = None,
) -> FreeSeries:
    """Right-hand side of the reduced-coaction formula for the holonomy of a
    path between tangential points p and q (p = q for loops); the result is
    truncated to degree D-1, the range on which the assembly is exact."""
    p = _require_tangential(path, "start")
    q = _require_tangential(path, "end")
    n, deg = conn.n_generators, conn.trunc_degree
    series = (
        holonomy
        if holonomy is not None
        else holonomy_reg(conn, path, accuracy, delta).series
    )
    rot = snap_half_integer(rotation_number(path))
    out = series * r_zeta_series(p, deg, n, negate_variable=True)
    out = out + rot * series
    out = out - r_zeta_series(q, deg, n) * series
    out = out + _crossing_sum(conn, path, accuracy, delta)
    out = out - d_left(p, series) - d_right(q, series)
    if p == q:
        # A loop's smooth model has one more self-intersection than the
        # polyline shows: the closing of the two tail strands through the
        # base point.  Its regularized contribution is a universal series in
        # the base generator, fixed by the closure turn direction.
        shift = _closure_shift(path)
        closure = r_am_series(p, deg, n) + (0.5 - shift) * FreeSeries.unit(
            n, deg, COMPLEX
        )
        out = out + closure
    return out.with_degree(deg - 1)


def rho_paths(
    conn: ConnectionSpec,
    path2: PLPath,
    path1: PLPath,
    accuracy: float = DEFAULT_ACCURACY,
    delta: float = DEFAULT_DELTA,
) -> FreeSeries:
    """Right-hand side of the pairing formula for the holonomies of two paths
    (first argument = second factor of the pairing, as in rho(H2, H1)).

    path1 runs from tangential p to q, path2 from tangential r to s; all
    anchor punctures distinct except possibly q = r.  When both paths are
    loops at a common tangential point the loop variant of the formula is
    assembled instead.  The result is truncated to degree D-1.
    """
    p = _require_tangential(path1, "start")
    q = _require_tangential(path1, "end")
    r = _require_tangential(path2, "start")
    s = _require_tangential(path2, "end")
    n, deg = conn.n_generators, conn.trunc_degree
    h1 = holonomy_reg(conn, path1, accuracy, delta).series
    h2 = holonomy_reg(conn, path2, accuracy, delta).series
    total = FreeSeries.zero(n, deg, COMPLEX)
    for c in intersections(path1, path2):
        front = holonomy_reg(conn, subpath(path2, c.s, 1.0), accuracy, delta).series
        back = holonomy_reg(conn, subpath(path1, 0.0, c.t), accuracy, delta).series
        total = total + float(c.sign) * (front * back)
    if p == q == r == s:
        m = p
        one = FreeSeries.unit(n, deg, COMPLEX)
        total = total + (h2 - one) * r_am_series(m, deg, n) * (h1 - one)
        total = total + d_left(m, h2) * (h1 - one) + (h2 - one) * d_right(m, h1)
        return total.with_degree(deg - 1)
    distinct = {p, q, r, s}
    if len(distinct) < 4 and not (q == r and len({p, q, s}) == 3):
        raise ValidationError(
            "anchor punctures must be distinct (except a shared middle point "
            "q = r, or two loops at a common point)"
        )
    if q == r:
        total = total + h2 * r_am_series(q, deg, n) * h1
    total = total - d_left(p, h2) - d_right(s, h1)
    total = total + d_left(q, h2) * h1 + h2 * d_right(r, h1)
    return total.with_degree(deg - 1)


def _rerooted(
    conn: ConnectionSpec,
    path: PLPath,
    t: float,
    accuracy: float,
    delta: float,
) -> FreeSeries:
    """Holonomy of a loop rerooted at the interior point path(t): run the
    tail [t, 1] back to the base first, then the head [0, t], so the product
    is Hol(path[0, t]) * Hol(path[t, 1])."""
    front = holonomy_reg(conn, subpath(path, t, 1.0), accuracy, delta).series
    back = holonomy_reg(conn, subpath(path, 0.0, t), accuracy, delta).series
    return back * front


def goldman_bracket_check(
    conn: ConnectionSpec,
    loop2: PLPath,
    loop1: PLPath,
    accuracy: float = DEFAULT_ACCURACY,
    delta: float = DEFAULT_DELTA,
) -> dict:
    """Compare the necklace bracket of two loop holonomies against the
    crossing formula on cyclic words, and each loop's necklace cobracket
    against its crossing-plus-rotation formula."""
    m1s = _require_tangential(loop1, "start")
    m1e = _require_tangential(loop1, "end")
    m2s = _require_tangential(loop2, "start")
    m2e = _require_tangential(loop2, "end")
    if not (m1s == m1e == m2s == m2e):
        raise ValidationError("both loops must share one tangential base point")
    n, deg = conn.n_generators, conn.trunc_degree
    h1 = holonomy_reg(conn, loop1, accuracy, delta).series
    h2 = holonomy_reg(conn, loop2, accuracy, delta).series
    lhs = necklace_bracket(h2, h1)
    rhs = CyclicSeries.zero(n, deg, COMPLEX)
    crossings = intersections(loop1, loop2)
    for c in crossings:
        r1 = _rerooted(conn, loop1, c.t, accuracy, delta)
        r2 = _rerooted(conn, loop2, c.s, accuracy, delta)
        rhs = rhs + float(c.sign) * (r1 * r2).cyclic_project()
    # The base point is itself an intersection of the two loops; the resolved
    # curves cross there once when the four tail strands alternate.
    base_sign = _base_linking(loop1, loop2)
    if base_sign:
        rhs = rhs + base_sign * (h1 * h2).cyclic_project()
    report = {
        "bracket_discrepancy": _norm_through((lhs - rhs).coeffs, deg - 1),
        "n_crossings": len(crossings),
        "base_linking": base_sign,
        "cobracket_discrepancy": [
            _cobracket_discrepancy(conn, loop, h, accuracy, delta)
            for loop, h in ((loop1, h1), (loop2, h2))
        ],
    }
    report["max_discrepancy"] = max(
        [report["bracket_discrepancy"]] + report["cobracket_discrepancy"]
    )
    return report


def _cobracket_discrepancy(
    conn: ConnectionSpec,
    loop: PLPath,
    h: FreeSeries,
    accuracy: float,
    delta: float,
) -> float:
    n, deg = conn.n_generators, conn.trunc_degree
    lhs = necklace_cobracket(h)
    # The rotation term uses the tangent winding of the closed-up smooth
    # curve: the polyline rotation number plus the closing turn at the base.
    rot = snap_half_integer(rotation_number(loop)) + _closure_shift(loop)
    one_cyc = FreeSeries.unit(n, deg, COMPLEX).cyclic_project()
    rhs = CyclicWedge.wedge(one_cyc, h.cyclic_project()).scale(rot)
    for c in self_intersections(loop):
        middle = holonomy_reg(conn, subpath(loop, c.t, c.s), accuracy, delta).series
        outer = _rerooted_at_crossing(conn, loop, c.t, c.s, accuracy, delta)
        rhs = rhs + CyclicWedge.wedge(
            middle.cyclic_project(), outer.cyclic_project()
        ).scale(float(c.sign))
    return _norm_through(
        (lhs - rhs).coeffs, deg - 1, key_len=lambda k: len(k[0]) + len(k[1])
    )


def _rerooted_at_crossing(
    conn: ConnectionSpec,
    loop: PLPath,
    t: float,
    s: float,
    accuracy: float,
    delta: float,
) -> FreeSeries:
    front = holonomy_reg(conn, subpath(loop, s, 1.0), accuracy, delta).series
    back = holonomy_reg(conn, subpath(loop, 0.0, t), accuracy, delta).series
    return front * back


def pentagon_projection_check(
    conn: ConnectionSpec,
    path: PLPath,
    accuracy: float = DEFAULT_ACCURACY,
    delta: float = DEFAULT_DELTA,
) -> dict:
    """Evaluate both sides of the projected pentagon identity for the
    holonomy of a path, using the square-zero extension maps and the
    associator corner terms."""
    p = _require_tangential(path, "start")
    q = _require_tangential(path, "end")
    n, deg = conn.n_generators, conn.trunc_degree
    h = holonomy_reg(conn, path, accuracy, delta).series
    rot = snap_half_integer(rotation_number(path))
    lhs = associator_tail(SIDE_LEFT, q, deg, n) * h
    lhs = lhs + square_zw(h)
    lhs = lhs + rot * h
    lhs = lhs + h * associator_tail(SIDE_RIGHT, p, deg, n)
    rhs = square_z(q, h) + square_w(p, h)
    rhs = rhs - _crossing_sum(conn, path, accuracy, delta)
    crossings = self_intersections(path)
    return {
        "max_discrepancy": _norm_through((lhs - rhs).coeffs, deg - 1),
        "rot": rot,
        "n_crossings": len(crossings),
    }
