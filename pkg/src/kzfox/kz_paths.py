"""Piecewise-linear path geometry on the punctured complex plane.

Paths are polylines whose endpoints are either regular points or tangential
anchors (a puncture plus a unit departure direction).  The module provides
transverse crossing detection with orientation signs, rotation numbers by
exterior-angle summation, clockwise-half-turn composition, and subpath
extraction.

Crossing predicates run in exact rational arithmetic (floats are rationals),
so detection never guesses: genuinely degenerate inputs raise a validation
error instead.  The only tolerated degeneracy is the unavoidable one: the
terminal segments of tangentially anchored paths lie exactly on the anchor
ray, so such tail segments may overlap each other; their interaction is
accounted for analytically by the regularization terms downstream and they
are never reported as crossings.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import CompositionError, DomainError, ValidationError

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PunctureConfig:
    points: Tuple[complex, ...]

    def __init__(self, points: Sequence[complex]):
        pts = tuple(complex(p) for p in points)
        if len(pts) != len(set(pts)):
            raise ValidationError("punctures must be pairwise distinct")
        if not pts:
            raise ValidationError("at least one puncture required")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    def point(self, i: int) -> complex:
        if not 1 <= i <= self.n:
            raise ValidationError(f"puncture index {i} out of range 1..{self.n}")
        return self.points[i - 1]

    def min_pairwise_distance(self) -> float:
        pts = self.points
        if len(pts) == 1:
            return math.inf
        return min(
            abs(pts[i] - pts[j])
            for i in range(len(pts))
            for j in range(i + 1, len(pts))
        )


REGULAR = "regular"
TANGENTIAL = "tangential"


@dataclass(frozen=True)
class Anchor:
    kind: str
    point: Optional[complex] = None  # regular anchors
    puncture: Optional[int] = None  # tangential anchors (1-based index)
    direction: Optional[complex] = None  # unit complex

    def __post_init__(self):
        if self.kind == REGULAR:
            if self.point is None:
                raise ValidationError("regular anchor needs a point")
        elif self.kind == TANGENTIAL:
            if self.puncture is None or self.direction is None:
                raise ValidationError("tangential anchor needs puncture and direction")
            if abs(abs(self.direction) - 1.0) > 1e-12:
                raise ValidationError("tangential direction must have modulus 1")
        else:
            raise ValidationError(f"unknown anchor kind {self.kind!r}")

    @classmethod
    def regular(cls, point: complex) -> "Anchor":
        return cls(REGULAR, point=complex(point))

    @classmethod
    def tangential(cls, puncture: int, direction: complex = 1.0) -> "Anchor":
        return cls(TANGENTIAL, puncture=puncture, direction=complex(direction))

    def location(self, punctures: PunctureConfig) -> complex:
        if self.kind == REGULAR:
            return self.point
        return punctures.point(self.puncture)


def _frac(x: float) -> Fraction:
    return Fraction(x)  # exact: binary floats are rationals


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


@dataclass(frozen=True)
class Crossing:
    """A transverse interior crossing; for self-intersections t < s."""

    t: float
    s: float
    point: complex
    sign: int
    seg_first: int = -1
    seg_second: int = -1


class PLPath:
    """Polyline path with anchors, arclength-parametrized on [0, 1]."""

    def __init__(
        self,
        punctures: PunctureConfig,
        start: Anchor,
        end: Anchor,
        vertices: Sequence[complex],
    ):
        self.punctures = punctures
        self.start = start
        self.end = end
        self.vertices = tuple(complex(v) for v in vertices)
        pts = [start.location(punctures)] + list(self.vertices) + [
            end.location(punctures)
        ]
        self.points = tuple(pts)
        if len(pts) < 2:
            raise ValidationError("path needs at least one segment")
        self._validate_segments()
        self._validate_anchor_directions()
        lengths = [abs(b - a) for a, b in zip(pts, pts[1:])]
        total = sum(lengths)
        self.segment_lengths = tuple(lengths)
        self.length = total
        cum = [0.0]
        for L in lengths:
            cum.append(cum[-1] + L)
        self.cum_params = tuple(c / total for c in cum)

    # -- validation ---------------------------------------------------------

    def _validate_segments(self):
        pts = self.points
        for k, (a, b) in enumerate(zip(pts, pts[1:])):
            if a == b:
                raise ValidationError(f"zero-length segment {k}")
            for idx, z in enumerate(self.punctures.points, start=1):
                # distance from puncture to the closed segment, excluding
                # anchor endpoints that are punctures by construction
                if self._touches(a, b, z, k, idx):
                    raise ValidationError(
                        f"segment {k} passes through puncture {idx}"
                    )

    def _touches(self, a: complex, b: complex, z: complex, k: int, idx: int) -> bool:
        # Exact test: z on segment [a, b]?
        ax, ay = _frac(a.real), _frac(a.imag)
        bx, by = _frac(b.real), _frac(b.imag)
        zx, zy = _frac(z.real), _frac(z.imag)
        if _cross(bx - ax, by - ay, zx - ax, zy - ay) != 0:
            return False
        dot = (bx - ax) * (zx - ax) + (by - ay) * (zy - ay)
        sq = (bx - ax) ** 2 + (by - ay) ** 2
        if dot < 0 or dot > sq:
            return False
        # the puncture lies on the segment; allowed only as the anchor
        # endpoint of the first/last segment
        if k == 0 and self.start.kind == TANGENTIAL and self.start.puncture == idx:
            if (zx, zy) == (ax, ay):
                return False
        if (
            k == len(self.points) - 2
            and self.end.kind == TANGENTIAL
            and self.end.puncture == idx
        ):
            if (zx, zy) == (bx, by):
                return False
        return True

    def _validate_anchor_directions(self):
        pts = self.points
        if self.start.kind == TANGENTIAL:
            v = self.start.direction
            ratio = (pts[1] - pts[0]) / v
            if abs(ratio.imag) > 1e-12 * abs(ratio) or ratio.real <= 0:
                raise ValidationError(
                    "first segment must leave the start anchor along its direction"
                )
        if self.end.kind == TANGENTIAL:
            v = self.end.direction
            ratio = (pts[-2] - pts[-1]) / v
            if abs(ratio.imag) > 1e-12 * abs(ratio) or ratio.real <= 0:
                raise ValidationError(
                    "last segment must approach the end anchor against its direction"
                )

    # -- parametrization ----------------------------------------------------

    @property
    def n_segments(self) -> int:
        return len(self.points) - 1

    def segment(self, k: int) -> Tuple[complex, complex]:
        return self.points[k], self.points[k + 1]

    def locate(self, t: float) -> Tuple[int, float]:
        """Map a global parameter to (segment index, local parameter)."""
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"parameter {t} outside [0, 1]")
        cum = self.cum_params
        for k in range(self.n_segments):
            if t <= cum[k + 1] or k == self.n_segments - 1:
                width = cum[k + 1] - cum[k]
                return k, (t - cum[k]) / width
        raise DomainError("unreachable")

    def point_at(self, t: float) -> complex:
        k, u = self.locate(t)
        a, b = self.segment(k)
        return a + (b - a) * u

    def velocity_at(self, t: float) -> complex:
        """Unit direction of the segment containing t."""
        k, _ = self.locate(t)
        a, b = self.segment(k)
        return (b - a) / abs(b - a)

    def global_param(self, k: int, u: float) -> float:
        cum = self.cum_params
        return cum[k] + (cum[k + 1] - cum[k]) * u

    def _is_tail_segment(self, k: int) -> bool:
        if k == 0 and self.start.kind == TANGENTIAL:
            return True
        if k == self.n_segments - 1 and self.end.kind == TANGENTIAL:
            return True
        return False

    # -- derived paths -------------------------------------------------------

    def reversed(self) -> "PLPath":
        def flip(anchor: Anchor) -> Anchor:
            if anchor.kind == REGULAR:
                return anchor
            return Anchor.tangential(anchor.puncture, anchor.direction)

        return PLPath(
            self.punctures, flip(self.end), flip(self.start), self.vertices[::-1]
        )

    def to_json_dict(self) -> dict:
        def anchor_dict(a: Anchor) -> dict:
            if a.kind == REGULAR:
                return {"type": "regular", "point": [a.point.real, a.point.imag]}
            return {
                "type": "tangential",
                "puncture": a.puncture,
                "direction": [a.direction.real, a.direction.imag],
            }

        return {
            "punctures": [[z.real, z.imag] for z in self.punctures.points],
            "start": anchor_dict(self.start),
            "vertices": [[v.real, v.imag] for v in self.vertices],
            "end": anchor_dict(self.end),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PLPath":
        try:
            punctures = PunctureConfig([complex(p[0], p[1]) for p in data["punctures"]])

            def anchor(d: dict) -> Anchor:
                if d["type"] == "regular":
                    return Anchor.regular(complex(d["point"][0], d["point"][1]))
                if d["type"] == "tangential":
                    dr = d.get("direction", [1.0, 0.0])
                    return Anchor.tangential(d["puncture"], complex(dr[0], dr[1]))
                raise ValidationError(f"unknown anchor type {d['type']!r}")

            vertices = [complex(v[0], v[1]) for v in data["vertices"]]
            return cls(punctures, anchor(data["start"]), anchor(data["end"]), vertices)
        except (KeyError, IndexError, TypeError) as exc:
            raise ValidationError(f"malformed path data: missing/bad field {exc}")

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "PLPath":
        return cls.from_json_dict(json.loads(text))


# -- crossing detection ------------------------------------------------------


def _segment_intersection(a, b, c, d):
    """Exact intersection of segments [a,b], [c,d].

    Returns ('proper', t, u) with Fractions strictly inside (0,1), or
    ('none',), ('touch', t, u) for endpoint contact, ('overlap',) for
    collinear overlap of positive length.
    """
    ax, ay = _frac(a.real), _frac(a.imag)
    bx, by = _frac(b.real), _frac(b.imag)
    cx, cy = _frac(c.real), _frac(c.imag)
    dx, dy = _frac(d.real), _frac(d.imag)
    rx, ry = bx - ax, by - ay
    sx, sy = dx - cx, dy - cy
    denom = _cross(rx, ry, sx, sy)
    qpx, qpy = cx - ax, cy - ay
    if denom == 0:
        if _cross(qpx, qpy, rx, ry) != 0:
            return ("none",)
        # collinear: check overlap extent via projection on r
        rr = rx * rx + ry * ry
        t0 = (qpx * rx + qpy * ry) / rr
        t1 = t0 + (sx * rx + sy * ry) / rr
        lo, hi = min(t0, t1), max(t0, t1)
        if hi < 0 or lo > 1:
            return ("none",)
        if hi == 0 or lo == 1:
            # touching at a single shared endpoint
            t = hi if hi == 0 else lo
            u = (t - t0) / (t1 - t0)
            return ("touch", t, u)
        return ("overlap",)
    t = _cross(qpx, qpy, sx, sy) / denom
    u = _cross(qpx, qpy, rx, ry) / denom
    if t < 0 or t > 1 or u < 0 or u > 1:
        return ("none",)
    if 0 < t < 1 and 0 < u < 1:
        return ("proper", t, u)
    return ("touch", t, u)


def _anchor_points(path: PLPath) -> set:
    out = set()
    if path.start.kind == TANGENTIAL:
        out.add(path.start.location(path.punctures))
    if path.end.kind == TANGENTIAL:
        out.add(path.end.location(path.punctures))
    return out


def _tangential_rays(path: PLPath) -> list:
    """(anchor point, unit ray direction, tail segment index) per tangential
    anchor.  The ray carries the terminal tail segment of the path."""
    rays = []
    if path.start.kind == TANGENTIAL:
        rays.append((path.start.location(path.punctures), path.start.direction, 0))
    if path.end.kind == TANGENTIAL:
        rays.append(
            (path.end.location(path.punctures), path.end.direction, path.n_segments - 1)
        )
    return rays


def _on_ray(pt: complex, z: complex, v: complex) -> bool:
    ratio = (pt - z) / v
    return abs(ratio.imag) <= 1e-12 * max(1.0, abs(ratio)) and ratio.real >= 0


def _segment_on_ray(path: PLPath, k: int, z: complex, v: complex) -> bool:
    a, b = path.segment(k)
    return _on_ray(a, z, v) and _on_ray(b, z, v)


def _qualifies_on_ray(path: PLPath, k: int, pt: complex, z: complex, v: complex) -> bool:
    """Segment k of the path participates in the strand bundle of ray (z, v)
    at contact point pt: it lies on the ray itself, or it meets pt at a
    vertex shared with an adjacent segment of the same path on that ray."""
    if _segment_on_ray(path, k, z, v):
        return True
    a, b = path.segment(k)
    for end in (a, b):
        if end != pt:
            continue
        for adj in (k - 1, k + 1):
            if 0 <= adj < path.n_segments and _segment_on_ray(path, adj, z, v):
                sa, sb = path.segment(adj)
                if end in (sa, sb):
                    return True
    return False


def _tail_contact_skippable(
    path_a: PLPath, i: int, path_b: PLPath, j: int, pt: Optional[complex]
) -> bool:
    """Contacts inside a shared anchor-ray strand bundle are not crossings:
    coinciding on-ray strands and their landing/leaving vertices are
    accounted for analytically by the regularization terms downstream."""
    for (za, va, _ka) in _tangential_rays(path_a):
        for (zb, vb, _kb) in _tangential_rays(path_b):
            if za != zb or abs(va - vb) > 1e-12:
                continue
            if pt is None:
                # collinear overlap: both segments on the shared ray
                if _segment_on_ray(path_a, i, za, va) and _segment_on_ray(
                    path_b, j, zb, vb
                ):
                    return True
                continue
            if not _on_ray(pt, za, va):
                continue
            if _qualifies_on_ray(path_a, i, pt, za, va) and _qualifies_on_ray(
                path_b, j, pt, zb, vb
            ):
                return True
    return False


def _sign_of_cross(a: complex, b: complex) -> int:
    ax, ay = _frac(a.real), _frac(a.imag)
    bx, by = _frac(b.real), _frac(b.imag)
    c = _cross(ax, ay, bx, by)
    if c > 0:
        return 1
    if c < 0:
        return -1
    raise ValidationError("tangential (non-transverse) crossing encountered")


def self_intersections(path: PLPath) -> List[Crossing]:
    """All transverse self-crossings, each once, with t < s."""
    out: List[Crossing] = []
    nseg = path.n_segments
    for i in range(nseg):
        a, b = path.segment(i)
        for j in range(i + 1, nseg):
            c, d = path.segment(j)
            res = _segment_intersection(a, b, c, d)
            kind = res[0]
            if kind == "none":
                continue
            if kind == "overlap":
                if _tail_contact_skippable(path, i, path, j, None):
                    continue  # anchor-ray tails; handled analytically
                raise ValidationError(
                    f"collinear overlap between segments {i} and {j}"
                )
            if kind == "touch":
                if j == i + 1:
                    continue  # shared vertex of adjacent segments
                t, u = res[1], res[2]
                pt = complex(
                    float(_frac(a.real) + t * (_frac(b.real) - _frac(a.real))),
                    float(_frac(a.imag) + t * (_frac(b.imag) - _frac(a.imag))),
                )
                if pt in _anchor_points(path):
                    continue  # both terminal segments meet at the anchor
                if _tail_contact_skippable(path, i, path, j, pt):
                    continue  # landing/leaving vertex on the anchor ray
                raise ValidationError(
                    f"non-transverse touching between segments {i} and {j}"
                )
            t, u = res[1], res[2]
            vel_i = (b - a) / abs(b - a)
            vel_j = (d - c) / abs(d - c)
            sign = _sign_of_cross(vel_i, vel_j)
            pt = a + (b - a) * float(t)
            out.append(
                Crossing(
                    t=path.global_param(i, float(t)),
                    s=path.global_param(j, float(u)),
                    point=pt,
                    sign=sign,
                    seg_first=i,
                    seg_second=j,
                )
            )
    out.sort(key=lambda cr: (cr.t, cr.s))
    return out


def intersections(path1: PLPath, path2: PLPath) -> List[Crossing]:
    """Transverse crossings between two paths; sign is the orientation of
    (velocity of path1, velocity of path2).  Crossing.t parametrizes path1
    and Crossing.s parametrizes path2."""
    out: List[Crossing] = []
    shared_anchors = _anchor_points(path1) & _anchor_points(path2)
    for i in range(path1.n_segments):
        a, b = path1.segment(i)
        for j in range(path2.n_segments):
            c, d = path2.segment(j)
            res = _segment_intersection(a, b, c, d)
            kind = res[0]
            if kind == "none":
                continue
            if kind == "overlap":
                if _tail_contact_skippable(path1, i, path2, j, None):
                    continue
                raise ValidationError(
                    f"collinear overlap between segments {i} (first path) "
                    f"and {j} (second path)"
                )
            if kind == "touch":
                t, u = res[1], res[2]
                pt = complex(
                    float(_frac(a.real) + t * (_frac(b.real) - _frac(a.real))),
                    float(_frac(a.imag) + t * (_frac(b.imag) - _frac(a.imag))),
                )
                if pt in shared_anchors:
                    continue  # common tangential base point
                if _tail_contact_skippable(path1, i, path2, j, pt):
                    continue  # tail-zone vertex on the shared anchor ray
                raise ValidationError(
                    f"non-transverse touching between segments {i} (first "
                    f"path) and {j} (second path)"
                )
            t, u = res[1], res[2]
            vel_i = (b - a) / abs(b - a)
            vel_j = (d - c) / abs(d - c)
            sign = _sign_of_cross(vel_i, vel_j)
            pt = a + (b - a) * float(t)
            out.append(
                Crossing(
                    t=path1.global_param(i, float(t)),
                    s=path2.global_param(j, float(u)),
                    point=pt,
                    sign=sign,
                    seg_first=i,
                    seg_second=j,
                )
            )
    out.sort(key=lambda cr: (cr.t, cr.s))
    return out


# -- rotation number ----------------------------------------------------------


def _turning_angle(v_in: complex, v_out: complex) -> float:
    ang = math.atan2((v_in.conjugate() * v_out).imag, (v_in.conjugate() * v_out).real)
    if abs(abs(ang) - math.pi) < 1e-12:
        raise ValidationError("cusp: turning angle of +-pi at a vertex")
    return ang


def rotation_number(path: PLPath) -> float:
    """Total tangent winding divided by 2*pi, between tangential anchors.

    The tangent starts along the start direction and ends along the reversed
    end direction; both boundary turning angles vanish by the path
    invariants, so the winding is the sum of interior exterior angles.
    """
    if path.start.kind != TANGENTIAL or path.end.kind != TANGENTIAL:
        raise DomainError("rotation number needs tangential anchors at both ends")
    total = 0.0
    pts = path.points
    for k in range(1, len(pts) - 1):
        v_in = pts[k] - pts[k - 1]
        v_out = pts[k + 1] - pts[k]
        total += _turning_angle(v_in / abs(v_in), v_out / abs(v_out))
    return total / _TWO_PI


def snap_half_integer(x: float, tol: float = 1e-9) -> float:
    """Round to the nearest half-integer; error if outside tolerance."""
    snapped = round(2.0 * x) / 2.0
    if abs(snapped - x) > tol:
        raise ValidationError(f"{x} is not a half-integer within {tol}")
    return snapped


# -- composition ---------------------------------------------------------------


def _nearest_scale(path1: PLPath, path2: PLPath, anchor_point: complex) -> float:
    dists = []
    for z in path1.punctures.points:
        if z != anchor_point:
            dists.append(abs(z - anchor_point))
    for p in (path1, path2):
        for v in p.points:
            if v != anchor_point:
                dists.append(abs(v - anchor_point))
    return min(dists)


def compose(path2: PLPath, path1: PLPath) -> PLPath:
    """Concatenation path2 after path1.

    At a shared tangential anchor the junction inserts a clockwise half-turn
    beside the puncture: the incoming strand is cut short and dips below the
    anchor ray, a vertical segment crosses the ray heading north (adding
    exactly -pi of tangent winding in total), and the outgoing strand rejoins
    the departing ray.  The four junction turning angles cancel in pairs, so
    the composite satisfies rot(p2 p1) = rot(p1) + rot(p2) - 1/2 exactly.
    """
    if path1.punctures.points != path2.punctures.points:
        raise CompositionError("paths live on different puncture configurations")
    e1, s2 = path1.end, path2.start
    if e1.kind != s2.kind:
        raise CompositionError("mismatched anchors at the junction")
    if e1.kind == REGULAR:
        if e1.point != s2.point:
            raise CompositionError("regular junction points differ")
        vertices = list(path1.vertices) + [e1.point] + list(path2.vertices)
        return PLPath(path1.punctures, path1.start, path2.end, vertices)
    if (e1.puncture, e1.direction) != (s2.puncture, s2.direction):
        raise CompositionError("tangential junction anchors differ")
    z = e1.location(path1.punctures)
    v = e1.direction
    scale = 0.25 * _nearest_scale(path1, path2, z)
    in_len = abs(path1.points[-2] - z)
    out_len = abs(path2.points[1] - z)
    r = min(scale, 0.5 * in_len, 0.5 * out_len)
    d = 0.8125 * r  # cut point on the incoming tail
    b = 0.78125 * r  # rejoin point on the outgoing tail
    rho = 0.375 * r  # horizontal offset of the vertical crossing segment
    eta = 0.234375 * r  # dip depth below / rise above the ray
    junction = [
        z + v * d,
        z + v * complex(rho, -eta),
        z + v * complex(rho, eta),
        z + v * b,
    ]
    vertices = list(path1.vertices) + junction + list(path2.vertices)
    return PLPath(path1.punctures, path1.start, path2.end, vertices)


# -- subpaths -------------------------------------------------------------------


def subpath(path: PLPath, t_from: float, t_to: float) -> PLPath:
    """Restriction of the path to [t_from, t_to].

    Cuts at interior parameters produce regular anchors; the original anchors
    are kept when the cut touches 0 or 1.
    """
    if not 0.0 <= t_from < t_to <= 1.0:
        raise DomainError(f"need 0 <= from < to <= 1, got {t_from}, {t_to}")
    k0, u0 = path.locate(t_from)
    k1, u1 = path.locate(t_to)
    a0, b0 = path.segment(k0)
    a1, b1 = path.segment(k1)
    p_from = a0 + (b0 - a0) * u0
    p_to = a1 + (b1 - a1) * u1
    start = path.start if t_from == 0.0 else Anchor.regular(p_from)
    end = path.end if t_to == 1.0 else Anchor.regular(p_to)
    inner = []
    # vertices strictly between the cut points
    if u1 == 0.0:
        k1_excl = k1  # p_to is the vertex before segment k1
    else:
        k1_excl = k1 + 1
    for k in range(k0 + 1, k1_excl):
        inner.append(path.points[k])
    if inner and inner[0] == p_from:
        inner = inner[1:]
    if inner and inner[-1] == p_to:
        inner = inner[:-1]
    return PLPath(path.punctures, start, end, inner)
