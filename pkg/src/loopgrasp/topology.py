"""Topological grasp classification: winding, linking, loop closure.

A grasp is topologically closed-loop when (1) the mechanism's tip is
grounded to the same system as its base, and (2) the object is inside
the loop the mechanism forms.  In the plane, "inside" is a nonzero
winding number of the closed mechanism curve about the object; in 3D,
a loop-shaped object interlocked with the mechanism loop (a Hopf-link
grasp) is detected by a nonzero Gauss linking number.

The linking number is computed two independent ways and cross-checked:
the exact solid-angle form of the Gauss double integral for polygon
segment pairs, and signed crossings in a randomized generic projection.
A topological invariant guards grasp-security claims, so a silent
numerical misfire is worse than an exception; disagreement raises
``PrecisionError``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from shapely.geometry import LineString, Polygon

from .errors import DomainError, GeometryError, PrecisionError

__all__ = [
    "MechanismPath",
    "Disk",
    "GraspClass",
    "GraspTopology",
    "winding_number",
    "linking_number",
    "classify_grasp",
]


class GraspClass(enum.Enum):
    OPEN_LOOP = "open_loop"
    CLOSED_LOOP = "closed_loop"


@dataclass(frozen=True)
class Disk:
    """A circular 2D object region."""

    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise DomainError(f"radius must be > 0, got {self.radius}")


@dataclass
class MechanismPath:
    """Geometric path of one grasping mechanism, base to tip.

    ``ground_closure`` optionally lists intermediate waypoints of the
    ground segment that closes the curve from the tip back to the base;
    by default the closure is the straight (shortest) segment.  Branching
    mechanisms are classified one path per tip; build one MechanismPath
    per chain.
    """

    vertices: np.ndarray
    tip_grounded: bool
    base_grounded: bool = True
    ground_closure: np.ndarray | None = None

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        if self.vertices.ndim != 2 or self.vertices.shape[1] not in (2, 3):
            raise DomainError("vertices must be an (n, 2) or (n, 3) array")
        if len(self.vertices) < 2:
            raise DomainError("a mechanism path needs at least 2 vertices")
        if np.any(np.linalg.norm(np.diff(self.vertices, axis=0), axis=1) == 0):
            raise DomainError("consecutive vertices must be distinct")
        if self.ground_closure is not None:
            self.ground_closure = np.asarray(self.ground_closure, dtype=float)
            if self.ground_closure.ndim != 2 or self.ground_closure.shape[1] != self.vertices.shape[1]:
                raise DomainError("ground_closure must match the path dimension")

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]

    def closed_curve(self) -> np.ndarray:
        """Vertex loop tip -> ground closure -> base, without the repeated
        first vertex at the end."""
        if not self.tip_grounded:
            raise DomainError("an open path (tip not grounded) has no closed curve")
        parts = [self.vertices]
        if self.ground_closure is not None and len(self.ground_closure):
            parts.append(self.ground_closure)
        curve = np.vstack(parts)
        # drop a duplicated closing vertex if the caller already looped back
        if np.allclose(curve[0], curve[-1]):
            curve = curve[:-1]
        return curve


@dataclass(frozen=True)
class GraspTopology:
    """Classification result with the invariants that produced it."""

    classification: GraspClass
    winding: int | None = None
    linking: int | None = None


# ---------------------------------------------------------------------------
# winding number


def winding_number(closed_curve, point) -> int:
    """Signed winding number of a closed polygonal curve about a point.

    Counts signed crossings of the horizontal ray from ``point`` toward
    +x with the usual half-open vertex rule, which is exact for any
    polygon, self-crossing or multiply wound included.  The sign follows
    the curve orientation (counterclockwise positive).
    """
    curve = np.asarray(closed_curve, dtype=float)
    if curve.ndim != 2 or curve.shape[1] != 2:
        raise DomainError("closed_curve must be an (n, 2) array")
    if len(curve) < 3:
        raise DomainError("a closed curve needs at least 3 vertices")
    p = np.asarray(point, dtype=float).reshape(2)

    span = curve.max(axis=0) - curve.min(axis=0)
    diameter = float(np.hypot(*span))
    if _point_curve_distance(curve, p) <= 1e-12 * max(diameter, 1.0):
        raise GeometryError("point lies on the curve; winding number undefined")

    a = curve
    b = np.roll(curve, -1, axis=0)
    winding = 0
    for (ax, ay), (bx, by) in zip(a, b):
        if ax == bx and ay == by:
            continue  # zero-length segment (repeated vertex at a joint)
        left = (bx - ax) * (p[1] - ay) - (p[0] - ax) * (by - ay)
        if ay <= p[1]:
            if by > p[1] and left > 0:
                winding += 1
        elif by <= p[1] and left < 0:
            winding -= 1
    return winding


def _point_curve_distance(curve: np.ndarray, p: np.ndarray) -> float:
    a = curve
    b = np.roll(curve, -1, axis=0)
    e = b - a
    ee = np.einsum("ij,ij->i", e, e)
    ee[ee == 0] = 1.0
    t = np.clip(np.einsum("ij,ij->i", p[None, :] - a, e) / ee, 0.0, 1.0)
    closest = a + t[:, None] * e
    return float(np.linalg.norm(closest - p[None, :], axis=1).min())


# ---------------------------------------------------------------------------
# linking number


def linking_number(loop_a, loop_b, *, seed: int = 0, integer_tol: float = 0.2) -> int:
    """Gauss linking number of two disjoint closed polygonal 3D loops.

    Evaluates the Gauss double integral exactly (segment-pair solid
    angles) and independently counts signed crossings in a randomized
    generic projection; the two must agree on the same integer or
    ``PrecisionError`` is raised.  ``integer_tol`` is the largest
    accepted distance of the numerical invariant from an integer.
    """
    A = _as_loop(loop_a, "loop_a")
    B = _as_loop(loop_b, "loop_b")
    if _loops_min_distance(A, B) <= 1e-9:
        raise GeometryError("loops touch or nearly touch; linking number undefined")

    gauss = _gauss_linking(A, B)
    rounded = round(gauss)
    if abs(gauss - rounded) > integer_tol:
        raise PrecisionError(
            f"Gauss integral {gauss:.6f} is farther than {integer_tol} from an "
            "integer; refine the loops"
        )
    crossings = _projected_linking(A, B, seed=seed)
    if crossings != rounded:
        raise PrecisionError(
            f"linking mismatch: Gauss integral gives {rounded}, projected "
            f"crossings give {crossings}"
        )
    return int(rounded)


def _as_loop(loop, name: str) -> np.ndarray:
    arr = np.asarray(loop, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DomainError(f"{name} must be an (n, 3) array")
    if np.allclose(arr[0], arr[-1]):
        arr = arr[:-1]
    if len(arr) < 3:
        raise DomainError(f"{name} needs at least 3 distinct vertices")
    return arr


def _loops_min_distance(A: np.ndarray, B: np.ndarray) -> float:
    best = np.inf
    for i in range(len(A)):
        p, q = A[i], A[(i + 1) % len(A)]
        for j in range(len(B)):
            r, s = B[j], B[(j + 1) % len(B)]
            best = min(best, _segment_distance(p, q, r, s))
    return best


def _segment_distance(p1, p2, q1, q2) -> float:
    """Minimum distance between two 3D segments."""
    u, v, w = p2 - p1, q2 - q1, p1 - q1
    a, b, c = u @ u, u @ v, v @ v
    d, e = u @ w, v @ w
    denom = a * c - b * b
    if denom > 1e-14 * max(a * c, 1e-300):
        s = np.clip((b * e - c * d) / denom, 0.0, 1.0)
    else:
        s = 0.0
    t = (b * s + e) / c if c > 0 else 0.0
    t = np.clip(t, 0.0, 1.0)
    s = np.clip((b * t - d) / a, 0.0, 1.0) if a > 0 else 0.0
    return float(np.linalg.norm(w + s * u - t * v))


def _gauss_linking(A: np.ndarray, B: np.ndarray) -> float:
    """Exact Gauss integral for polygonal loops via segment-pair solid
    angles (the standard closed form used for writhe/linking of chains)."""
    a1 = A
    a2 = np.roll(A, -1, axis=0)
    b1 = B
    b2 = np.roll(B, -1, axis=0)
    total = 0.0
    for p1, p2 in zip(a1, a2):
        r12 = p2 - p1
        for p3, p4 in zip(b1, b2):
            r34 = p4 - p3
            r13, r14 = p3 - p1, p4 - p1
            r23, r24 = p3 - p2, p4 - p2
            n1 = _unit(np.cross(r13, r14))
            n2 = _unit(np.cross(r14, r24))
            n3 = _unit(np.cross(r24, r23))
            n4 = _unit(np.cross(r23, r13))
            omega = (
                math.asin(_clip1(n1 @ n2))
                + math.asin(_clip1(n2 @ n3))
                + math.asin(_clip1(n3 @ n4))
                + math.asin(_clip1(n4 @ n1))
            )
            sign = np.sign(np.cross(r34, r12) @ r13)
            total += omega * sign
    return total / (4.0 * math.pi)


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    return v / n if n > 0 else v


def _clip1(x: float) -> float:
    return min(1.0, max(-1.0, float(x)))


def _projected_linking(A: np.ndarray, B: np.ndarray, seed: int, attempts: int = 32) -> int:
    """Half the signed crossing count between the two loops in a generic
    projection.  Non-generic directions (near-parallel crossings, hits at
    segment ends, ambiguous depths) are rejected and resampled."""
    rng = np.random.default_rng(seed)
    scale = max(
        float(np.abs(A).max(initial=0.0)), float(np.abs(B).max(initial=0.0)), 1.0
    )
    for _ in range(attempts):
        w = _unit(rng.standard_normal(3))
        u = _unit(np.cross(w, [1.0, 0.0, 0.0] if abs(w[0]) < 0.9 else [0.0, 1.0, 0.0]))
        v = np.cross(w, u)
        frame = np.column_stack([u, v, w])
        Ap, Bp = A @ frame, B @ frame
        result = _count_crossings(Ap, Bp, eps=1e-9 * scale)
        if result is None:
            continue  # degenerate projection, try another direction
        total = result
        if total % 2 != 0:
            continue
        return total // 2
    raise PrecisionError("no generic projection found; loops may be degenerate")


def _count_crossings(Ap: np.ndarray, Bp: np.ndarray, eps: float) -> int | None:
    """Sum of crossing signs between projected loops, or None if the
    projection is non-generic.  Coordinates: columns (x, y, depth); the
    viewer looks down from +depth."""
    total = 0
    na, nb = len(Ap), len(Bp)
    for i in range(na):
        p1, p2 = Ap[i], Ap[(i + 1) % na]
        r = p2[:2] - p1[:2]
        for j in range(nb):
            q1, q2 = Bp[j], Bp[(j + 1) % nb]
            s = q2[:2] - q1[:2]
            denom = r[0] * s[1] - r[1] * s[0]
            diff = q1[:2] - p1[:2]
            if abs(denom) < eps * max(np.linalg.norm(r), np.linalg.norm(s)):
                if abs(diff[0] * s[1] - diff[1] * s[0]) < eps:
                    return None  # parallel overlapping in projection
                continue
            t = (diff[0] * s[1] - diff[1] * s[0]) / denom
            uu = (diff[0] * r[1] - diff[1] * r[0]) / denom
            if not (0.0 < t < 1.0 and 0.0 < uu < 1.0):
                if min(abs(t), abs(t - 1)) < 1e-9 or min(abs(uu), abs(uu - 1)) < 1e-9:
                    return None  # crossing at a vertex, non-generic
                continue
            depth_a = p1[2] + t * (p2[2] - p1[2])
            depth_b = q1[2] + uu * (q2[2] - q1[2])
            if abs(depth_a - depth_b) < eps:
                return None
            # sign of (over-strand tangent) x (under-strand tangent), viewed
            # from +depth
            if depth_a > depth_b:
                cross = r[0] * s[1] - r[1] * s[0]
            else:
                cross = s[0] * r[1] - s[1] * r[0]
            total += 1 if cross > 0 else -1
    return total


# ---------------------------------------------------------------------------
# classification


def classify_grasp(path: MechanismPath, obj, *, seed: int = 0) -> GraspTopology:
    """Apply the two-criterion closed-loop test.

    2D: the object (a ``Disk`` or a simple polygon given as vertices) is
    inside the loop when the closed mechanism curve winds around its
    representative interior point.  3D: the object must be a closed loop,
    and interlocking is a nonzero linking number (``seed`` feeds the
    projection direction draw).  A self-intersecting 2D closed curve has
    no well-defined interior and raises ``GeometryError`` rather than
    guessing.
    """
    if not path.tip_grounded:
        return GraspTopology(GraspClass.OPEN_LOOP)

    if path.dimension == 2:
        curve = path.closed_curve()
        ring = np.vstack([curve, curve[:1]])
        if not LineString(ring).is_simple:
            raise GeometryError(
                "closed mechanism curve is self-intersecting; interior is ambiguous"
            )
        probe = _interior_point(obj)
        w = winding_number(curve, probe)
        cls = GraspClass.CLOSED_LOOP if w != 0 else GraspClass.OPEN_LOOP
        return GraspTopology(cls, winding=w)

    if isinstance(obj, (Disk, Polygon)):
        raise DomainError(
            "3D classification needs a loop-shaped object (an (n, 3) vertex "
            "array); general 3D interiority is out of scope"
        )
    curve = path.closed_curve()
    lk = linking_number(curve, obj, seed=seed)
    cls = GraspClass.CLOSED_LOOP if lk != 0 else GraspClass.OPEN_LOOP
    return GraspTopology(cls, linking=lk)


def _interior_point(obj) -> np.ndarray:
    if isinstance(obj, Disk):
        return np.asarray(obj.center, dtype=float)
    if isinstance(obj, Polygon):
        poly = obj
    else:
        arr = np.asarray(obj, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DomainError("2D object must be a Disk or an (n, 2) polygon")
        poly = Polygon(arr)
        if not poly.is_valid:
            raise GeometryError("object polygon is not simple")
    rep = poly.representative_point()
    return np.array([rep.x, rep.y])
