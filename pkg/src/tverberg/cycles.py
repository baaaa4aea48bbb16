"""Hamiltonian cycles built around a center point.

A center p induces a clockwise radial order of the points projected onto the
unit circle around p; joining each label to the label halfway around yields a
Hamiltonian cycle (a star polygon when the points are in convex position).
When p is itself one of the points it is represented on the circle by a
chosen direction and the same construction applies.

The violation profile of such a cycle counts the label pairs whose angle at p
falls short of a right angle; those pairs span "short arcs" on the unit
circle, and the solver moves p toward their common intersection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .geometry import DEFAULT_TOL, RIGHT_ANGLE, PointSet, _as_point

TWO_PI = 2.0 * math.pi

# Closed-arc containment grace for direction tests; far below any geometric
# tolerance, only to absorb atan2 rounding at arc endpoints.
_ARC_EPS = 1e-12


class RadialDegeneracyError(ValueError):
    """Two points of S project to the same direction around the center."""


class RepresentativeDegeneracyError(ValueError):
    """The representative direction coincides with a projected point."""


class BrokenCycleError(RuntimeError):
    """A constructed edge set is not a single Hamiltonian cycle."""


@dataclass(frozen=True)
class GeoGraph:
    """Undirected graph on point indices, stored as a deduplicated edge list."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        canon = []
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < self.n_vertices and 0 <= b < self.n_vertices):
                raise ValueError(f"edge ({a},{b}) out of range")
            e = (a, b) if a < b else (b, a)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            canon.append(e)
        object.__setattr__(self, "edges", tuple(canon))

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=int)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)


def geo_graph(n_vertices: int, edges: Iterable[Sequence[int]]) -> GeoGraph:
    return GeoGraph(n_vertices, tuple((int(a), int(b)) for a, b in edges))


def _assert_single_cycle(graph: GeoGraph) -> None:
    """Union-find check that the edge set is one cycle through every vertex."""
    n = graph.n_vertices
    if len(graph.edges) != n or np.any(graph.degrees() != 2):
        raise BrokenCycleError("edge set is not 2-regular")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = n
    for a, b in graph.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            components -= 1
    if components != 1:
        raise BrokenCycleError("edge set splits into multiple cycles")


class CycleKind(Enum):
    TYPE_I = "type_I"
    TYPE_II = "type_II"


@dataclass(frozen=True)
class RadialOrder:
    """Clockwise labeling of S around a center.

    ``labels[k]`` is the point index occupying clockwise slot k and
    ``directions[k]`` its unit direction from the center.  When the center is
    a point of S, its own index sits in the last slot with the representative
    direction standing in for its (undefined) projection.
    """

    center: np.ndarray
    labels: tuple[int, ...]
    directions: np.ndarray
    representative_dir: Optional[np.ndarray] = None
    center_index: Optional[int] = None

    def __len__(self) -> int:
        return len(self.labels)


def _angles_of(vectors: np.ndarray) -> np.ndarray:
    return np.arctan2(vectors[:, 1], vectors[:, 0])


def _unit(v) -> np.ndarray:
    v = _as_point(v)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("zero vector has no direction")
    return v / n


def radial_order(
    points: PointSet,
    center,
    rep_dir=None,
    tol: float = DEFAULT_TOL,
) -> RadialOrder:
    """Project S radially onto the unit circle around ``center`` and label
    the directions clockwise (screen convention: decreasing atan2 angle).

    ``rep_dir`` is required exactly when the center coincides with a point of
    S; the synthetic projection then occupies the last slot.  Angular ties
    raise RadialDegeneracyError (callers perturb instead of tie-breaking).
    """
    if points.dim != 2:
        raise ValueError("radial orders require planar input")
    p = _as_point(center)
    center_index = points.index_of(p)
    if center_index is None and rep_dir is not None:
        raise ValueError("rep_dir supplied but the center is not a point of S")
    if center_index is not None and rep_dir is None:
        raise ValueError("center is a point of S: a representative direction is required")

    others = [i for i in range(len(points)) if i != center_index]
    vecs = points.coords[others] - p
    norms = np.linalg.norm(vecs, axis=1)
    if np.any(norms == 0.0):
        raise RadialDegeneracyError("a point of S coincides with the center")
    dirs = vecs / norms[:, None]
    angles = _angles_of(dirs)

    idx = list(range(len(others)))
    entries = [(float(angles[k]), others[k], dirs[k]) for k in idx]
    syn_dir = None
    if center_index is not None:
        syn_dir = _unit(rep_dir)
        syn_angle = math.atan2(syn_dir[1], syn_dir[0])
        entries.append((float(syn_angle), center_index, syn_dir))

    entries.sort(key=lambda e: -e[0])
    thetas = [e[0] for e in entries]
    mm = len(entries)
    for k in range(mm if mm >= 2 else 0):
        gap = thetas[k] - thetas[(k + 1) % mm]
        if k == mm - 1:
            gap += TWO_PI
        if abs(gap) <= tol:
            a, b = entries[k][1], entries[(k + 1) % mm][1]
            if center_index is not None and center_index in (a, b):
                raise RepresentativeDegeneracyError(
                    f"representative direction coincides with the projection of point "
                    f"{b if a == center_index else a}"
                )
            raise RadialDegeneracyError(
                f"points {a} and {b} project to the same direction around the center"
            )

    if center_index is not None:
        syn_slot = next(k for k in range(mm) if entries[k][1] == center_index)
        entries = entries[syn_slot + 1:] + entries[: syn_slot + 1]

    labels = tuple(e[1] for e in entries)
    directions = np.array([e[2] for e in entries])
    directions.setflags(write=False)
    return RadialOrder(
        center=p,
        labels=labels,
        directions=directions,
        representative_dir=syn_dir,
        center_index=center_index,
    )


@dataclass(frozen=True)
class CyclePlan:
    """A radial order together with the Hamiltonian cycle it induces."""

    order: RadialOrder
    cycle: GeoGraph
    kind: CycleKind

    @property
    def center(self) -> np.ndarray:
        return self.order.center


def _star_cycle(order: RadialOrder, kind: CycleKind, n_vertices: int) -> CyclePlan:
    m = len(order)
    if m < 3 or m % 2 == 0:
        raise ValueError("cycle construction needs an odd number of labels >= 3")
    n = (m - 1) // 2
    edges = []
    seen = set()
    for i in range(m):
        for j in (i + n, i + n + 1):
            a, b = order.labels[i], order.labels[j % m]
            e = (a, b) if a < b else (b, a)
            if e not in seen:
                seen.add(e)
                edges.append(e)
    graph = GeoGraph(n_vertices, tuple(edges))
    _assert_single_cycle(graph)
    plan = CyclePlan(order=order, cycle=graph, kind=kind)
    return plan


def type1_cycle(points: PointSet, center, tol: float = DEFAULT_TOL) -> CyclePlan:
    """Hamiltonian cycle around a center not in S: label clockwise and join
    each label to the two labels halfway around.  Independent of which label
    is called first."""
    if len(points) % 2 == 0:
        raise ValueError("type I cycles need an odd number of points")
    order = radial_order(points, center, tol=tol)
    return _star_cycle(order, CycleKind.TYPE_I, len(points))


def type2_cycle(
    points: PointSet, p_index: int, rep_dir, tol: float = DEFAULT_TOL
) -> CyclePlan:
    """Hamiltonian cycle around the point S[p_index], which is represented on
    its own unit circle by ``rep_dir`` and occupies the last label slot.  The
    cycle depends only on the angular gap containing ``rep_dir``."""
    if len(points) % 2 == 0:
        raise ValueError("type II cycles need an odd number of points")
    order = radial_order(points, points.point(p_index), rep_dir=rep_dir, tol=tol)
    return _star_cycle(order, CycleKind.TYPE_II, len(points))


@dataclass(frozen=True)
class Arc:
    """Minor arc on the unit circle around a center, clockwise from start_dir
    to end_dir; the subtended angle never exceeds pi."""

    center: np.ndarray
    start_dir: np.ndarray
    end_dir: np.ndarray

    @property
    def width(self) -> float:
        a = math.atan2(self.start_dir[1], self.start_dir[0])
        b = math.atan2(self.end_dir[1], self.end_dir[0])
        return (a - b) % TWO_PI

    def contains(self, direction, tol: float = _ARC_EPS) -> bool:
        u = _unit(direction)
        a = math.atan2(self.start_dir[1], self.start_dir[0])
        t = math.atan2(u[1], u[0])
        return (a - t) % TWO_PI <= self.width + tol or (a - t) % TWO_PI >= TWO_PI - tol

    def midpoint_dir(self) -> np.ndarray:
        a = math.atan2(self.start_dir[1], self.start_dir[0])
        mid = a - self.width / 2.0
        return np.array([math.cos(mid), math.sin(mid)])

    def intersects(self, other: "Arc", tol: float = _ARC_EPS) -> bool:
        return (
            self.contains(other.start_dir, tol)
            or self.contains(other.end_dir, tol)
            or other.contains(self.start_dir, tol)
            or other.contains(self.end_dir, tol)
        )


def minor_arc(center, u, v) -> Arc:
    """The minor arc between directions u and v, stored canonically (start
    comes first clockwise)."""
    u = _unit(u)
    v = _unit(v)
    a = math.atan2(u[1], u[0])
    b = math.atan2(v[1], v[0])
    cw_u_to_v = (a - b) % TWO_PI
    if cw_u_to_v <= math.pi:
        return Arc(center=_as_point(center), start_dir=u, end_dir=v)
    return Arc(center=_as_point(center), start_dir=v, end_dir=u)


def arcs_common_intersection(arcs: Sequence[Arc]) -> Optional[Arc]:
    """Common intersection of arcs on one circle, or None when empty.

    Works by locating a direction not covered by any arc (the arcs here are
    short, so the union never covers the circle in valid inputs), unrolling
    every arc onto a line through that cut, and intersecting intervals.  The
    circular wraparound pitfall lives entirely in the cut search.
    """
    if not arcs:
        raise ValueError("need at least one arc")
    if len(arcs) == 1:
        return arcs[0]

    # Each arc as a counterclockwise interval [lo, lo + width).
    los = np.empty(len(arcs))
    widths = np.empty(len(arcs))
    for k, arc in enumerate(arcs):
        end = math.atan2(arc.end_dir[1], arc.end_dir[0])
        los[k] = end % TWO_PI
        widths[k] = arc.width

    def covered(angle: float) -> bool:
        rel = (angle - los) % TWO_PI
        return bool(np.any(rel <= widths + _ARC_EPS) or np.any(rel >= TWO_PI - _ARC_EPS))

    boundary = np.sort(np.unique(np.concatenate([los, (los + widths) % TWO_PI])))
    cut = None
    for k in range(len(boundary)):
        a = boundary[k]
        b = boundary[(k + 1) % len(boundary)]
        gap = (b - a) % TWO_PI
        if gap == 0.0:
            gap = TWO_PI if len(boundary) == 1 else 0.0
        mid = (a + gap / 2.0) % TWO_PI
        if gap > 0.0 and not covered(mid):
            cut = mid
            break
    if cut is None:
        return None

    lo_rel = (los - cut) % TWO_PI
    hi_rel = lo_rel + widths
    lo = float(lo_rel.max())
    hi = float(hi_rel.min())
    if lo > hi + _ARC_EPS:
        return None
    hi = max(hi, lo)
    start_angle = cut + hi  # ccw upper end = clockwise start
    end_angle = cut + lo
    start = np.array([math.cos(start_angle), math.sin(start_angle)])
    end = np.array([math.cos(end_angle), math.sin(end_angle)])
    return Arc(center=arcs[0].center, start_dir=start, end_dir=end)


@dataclass(frozen=True)
class ViolationProfile:
    """Count and angular mass of cycle pairs violating the right-angle test.

    ``ell`` counts label pairs (i, i+n) whose angle at the center is strictly
    below pi/2 (minus tol); ``f`` is the sum of those angles; ``short_arcs``
    are the corresponding minor arcs; pairs within tol of pi/2 are counted in
    ``boundary_count`` only.  For a type II plan the two pairs touching the
    representative slot are exempt.
    """

    ell: int
    f: float
    short_arcs: tuple[Arc, ...]
    boundary_count: int
    violated_slots: tuple[tuple[int, int], ...]

    def objective(self) -> tuple[int, float]:
        """Lexicographic key (ell, -f): smaller is better."""
        return (self.ell, -self.f)


def violation_profile(
    plan: CyclePlan, tol: float = DEFAULT_TOL, threshold: float = RIGHT_ANGLE
) -> ViolationProfile:
    """Profile of ``plan`` against the angle bar ``threshold`` (pi/2 for the
    standard disk test; the solver's polishing phase raises it slightly)."""
    order = plan.order
    m = len(order)
    n = (m - 1) // 2
    syn_slot = m - 1 if plan.kind is CycleKind.TYPE_II else None

    dirs = order.directions
    ell = 0
    f = 0.0
    boundary = 0
    arcs: list[Arc] = []
    slots: list[tuple[int, int]] = []
    for i in range(m):
        j = (i + n) % m
        if syn_slot is not None and (i == syn_slot or j == syn_slot):
            continue
        c = float(np.dot(dirs[i], dirs[j]))
        theta = math.acos(max(-1.0, min(1.0, c)))
        if theta < threshold - tol:
            ell += 1
            f += theta
            arcs.append(minor_arc(order.center, dirs[i], dirs[j]))
            slots.append((i, j))
        elif theta <= threshold + tol:
            boundary += 1

    profile = ViolationProfile(
        ell=ell,
        f=f,
        short_arcs=tuple(arcs),
        boundary_count=boundary,
        violated_slots=tuple(slots),
    )
    _assert_short_arc_structure(plan, profile)
    return profile


def _assert_short_arc_structure(plan: CyclePlan, profile: ViolationProfile) -> None:
    """Structural facts about short arcs: each spans at least n+1 labels
    (endpoints included) and no two are disjoint.  Violations indicate a bug,
    not bad input, hence assertions."""
    if profile.ell == 0:
        return
    order = plan.order
    m = len(order)
    n = (m - 1) // 2
    for arc in profile.short_arcs:
        spanned = sum(1 for k in range(m) if arc.contains(order.directions[k], 1e-9))
        assert spanned >= n + 1, (
            f"short arc spans {spanned} labels, expected at least {n + 1}"
        )
    if profile.ell >= 2:
        for a in range(profile.ell):
            for b in range(a + 1, profile.ell):
                assert profile.short_arcs[a].intersects(profile.short_arcs[b], 1e-9), (
                    "disjoint short arcs on an odd point set"
                )
