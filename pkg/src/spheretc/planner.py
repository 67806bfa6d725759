"""Explicit equivariant motion planners on linear Z/p spheres.

Three covers of S^n x S^n are implemented, each with closed-form planners:

* two-domain (n, k both odd): U1 = {x != -y} with the constant-speed
  shortest geodesic, U2 = {x != y} with a geodesic to -y followed by a half
  great circle directed by the rotation field v(y) = J y.
* three-domain (k >= 1): U1 as above; D2 = {x != y, y not in {+-e}} and
  D3 = {x != y, y not in {+-e'}} run a geodesic to -y and then a half
  circle toward the fixed basis vector e (resp. e').
* hemisphere product (k >= 0): W_ij = S_i x S_j over the collared
  hemispheres S_+/- = {<x, pole> > -1/2}; paths contract x to a pole,
  transit inside the fixed sphere when the poles differ (needs k >= 1),
  and expand to y.  Membership is total even for k = 0, where no
  equivariant planner can cross hemispheres (the fixed S^0 is
  disconnected).

Planners are selected by lowest domain index; every evaluated point is
renormalized, which commutes with the (orthogonal) action and keeps paths
on the sphere to machine precision.

Numerical note: geodesics are evaluated from the half-chords d = |x - y|,
m = |x + y| (theta = 2*atan2(d, m), sin theta = d*m/2).  Unlike the naive
arccos of the inner product, this keeps the evaluation error at the true
conditioning of the endpoint map (~eps/m rather than ~eps/m^2), which is
what makes the 1e-9 equivariance tolerance hold at sampled near-antipodal
pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .action import CyclicLinearAction, SpherePoint, fixed_basis_vector
from .errors import (
    AntipodalPair,
    DimensionMismatch,
    NoFixedCircle,
    NoFixedPoint,
    OutsideCollar,
    ParityMismatch,
)
from .vfield import j_field, projection_field

# Open-set membership tolerance; pairs closer than this to a domain
# boundary are flagged ambiguous.
MEMBERSHIP_ETA = 1e-9
# Endpoint exactness and norm tolerances for planned paths.
ENDPOINT_TOL = 1e-12
PATH_NORM_TOL = 1e-9
EQUIVARIANCE_TOL = 1e-9
# Hemisphere collar level: S_+ = {<x, pole> > COLLAR_LEVEL}.
COLLAR_LEVEL = -0.5
# Below this chord |x - y| the slerp denominator degenerates and normalized
# linear interpolation is exact to O(theta^2) ~ 1e-12; equivalent to the
# inner-product threshold <x,y> > 1 - 1e-12.
_LERP_CHORD = math.sqrt(2e-12)

PLANNER_KINDS = ("two", "three", "hemisphere")


class DomainId(IntEnum):
    """Open domains of the implemented covers, in selection priority order."""

    U1 = 0
    U2 = 1
    D2 = 2
    D3 = 3
    W11 = 4
    W12 = 5
    W21 = 6
    W22 = 7


# ---------------------------------------------------------------------------
# closed-form segment evaluation (shared by scalar paths and batch grids)
# ---------------------------------------------------------------------------

def _normalize_rows(p: np.ndarray) -> np.ndarray:
    return p / np.linalg.norm(p, axis=-1, keepdims=True)


def slerp_grid(xs: np.ndarray, ys: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """Constant-speed shortest arcs for a batch of non-antipodal pairs.

    xs, ys: (N, d) unit rows; taus: (T,) in [0, 1].  Returns (N, T, d).
    """
    d = np.linalg.norm(xs - ys, axis=1)
    m = np.linalg.norm(xs + ys, axis=1)
    if np.any(m <= MEMBERSHIP_ETA):
        raise AntipodalPair("antipodal pair in geodesic batch")
    theta = 2.0 * np.arctan2(d, m)
    sin_theta = 0.5 * d * m
    lerp = d <= _LERP_CHORD
    sin_theta = np.where(lerp, 1.0, sin_theta)

    a = np.sin(np.outer(theta, 1.0 - taus)) / sin_theta[:, None]
    b = np.sin(np.outer(theta, taus)) / sin_theta[:, None]
    if np.any(lerp):
        a[lerp] = 1.0 - taus
        b[lerp] = taus
    p = a[:, :, None] * xs[:, None, :] + b[:, :, None] * ys[:, None, :]
    return _normalize_rows(p)


def arc_grid(ys: np.ndarray, us: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """Half great circles -y -> y directed by unit tangents u (batch form)."""
    c = -np.cos(np.pi * taus)
    s = np.sin(np.pi * taus)
    p = c[None, :, None] * ys[:, None, :] + s[None, :, None] * us[:, None, :]
    return _normalize_rows(p)


def nlerp_grid(a: np.ndarray, b: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """Normalized straight-line interpolation (hemisphere contraction tracks)."""
    p = (1.0 - taus)[None, :, None] * a[:, None, :] + taus[None, :, None] * b[:, None, :]
    return _normalize_rows(p)


class GeodesicSegment:
    """Shortest-arc segment at constant speed on [t0, t1]."""

    kind = "geodesic"

    def __init__(self, start: np.ndarray, end: np.ndarray, t0: float, t1: float) -> None:
        self.start = np.asarray(start, dtype=float)
        self.end = np.asarray(end, dtype=float)
        self.t0, self.t1 = t0, t1
        if np.linalg.norm(self.start + self.end) <= MEMBERSHIP_ETA:
            raise AntipodalPair("no unique shortest arc between antipodal points")

    def eval_local(self, taus: np.ndarray) -> np.ndarray:
        return slerp_grid(self.start[None, :], self.end[None, :], taus)[0]


class FieldArcSegment:
    """Half great circle from -y to y in the plane spanned by y and u."""

    kind = "field_arc"

    def __init__(self, y: np.ndarray, u: np.ndarray, t0: float, t1: float) -> None:
        self.y = np.asarray(y, dtype=float)
        self.u = np.asarray(u, dtype=float)
        self.t0, self.t1 = t0, t1

    def eval_local(self, taus: np.ndarray) -> np.ndarray:
        return arc_grid(self.y[None, :], self.u[None, :], taus)[0]


class NlerpSegment:
    """Normalized linear interpolation a -> b (pole contraction legs)."""

    kind = "nlerp"

    def __init__(self, a: np.ndarray, b: np.ndarray, t0: float, t1: float) -> None:
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.t0, self.t1 = t0, t1

    def eval_local(self, taus: np.ndarray) -> np.ndarray:
        return nlerp_grid(self.a[None, :], self.b[None, :], taus)[0]


class PlannedPath:
    """A piecewise closed-form path on S^n, evaluable at any t in [0, 1]."""

    def __init__(self, segments, domain: DomainId, x: SpherePoint, y: SpherePoint) -> None:
        self.segments = tuple(segments)
        self.domain = domain
        self.x = x
        self.y = y
        self._starts = np.array([s.t0 for s in self.segments])

    def evaluate_grid(self, ts) -> np.ndarray:
        """Evaluate at an array of times; returns (len(ts), ambient_dim)."""
        ts = np.asarray(ts, dtype=float)
        if np.any(ts < 0.0) or np.any(ts > 1.0):
            raise ValueError("path parameter outside [0, 1]")
        idx = np.clip(np.searchsorted(self._starts, ts, side="right") - 1, 0, None)
        out = np.empty((ts.size, self.x.ambient_dim))
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if not np.any(mask):
                continue
            taus = (ts[mask] - seg.t0) / (seg.t1 - seg.t0)
            out[mask] = seg.eval_local(taus)
        return out

    def evaluate(self, t: float) -> SpherePoint:
        return SpherePoint(self.evaluate_grid(np.array([t]))[0])


# ---------------------------------------------------------------------------
# domain membership
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DomainMembership:
    """Membership verdict for one query pair under one cover."""

    domains: frozenset
    ambiguous: frozenset
    values: dict

    @property
    def selected(self) -> DomainId:
        return min(self.domains)


def _as_rows(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    return a[None, :] if a.ndim == 1 else a


def _check_kind(kind: str) -> None:
    if kind not in PLANNER_KINDS:
        raise ValueError(f"unknown planner kind {kind!r}; expected one of {PLANNER_KINDS}")


def membership_values(action: CyclicLinearAction, kind: str,
                      xs, ys) -> dict[DomainId, np.ndarray]:
    """Raw membership margins per domain for a batch of pairs.

    A pair belongs to a domain iff its margin exceeds MEMBERSHIP_ETA, and is
    flagged ambiguous below twice that.
    """
    _check_kind(kind)
    xs, ys = _as_rows(xs), _as_rows(ys)
    if xs.shape[1] != action.ambient_dim or ys.shape[1] != action.ambient_dim:
        raise DimensionMismatch("query dimension does not match the action")
    if kind == "two":
        return {
            DomainId.U1: np.linalg.norm(xs + ys, axis=1),
            DomainId.U2: np.linalg.norm(xs - ys, axis=1),
        }
    if kind == "three":
        if action.fixed_sphere_dim < 1:
            raise NoFixedCircle(
                f"three-domain cover needs k >= 1, got k = {action.fixed_sphere_dim}")
        e = fixed_basis_vector(action, 0).coords
        ep = fixed_basis_vector(action, 1).coords
        diff = np.linalg.norm(xs - ys, axis=1)
        away_e = np.minimum(np.linalg.norm(ys - e, axis=1), np.linalg.norm(ys + e, axis=1))
        away_ep = np.minimum(np.linalg.norm(ys - ep, axis=1), np.linalg.norm(ys + ep, axis=1))
        return {
            DomainId.U1: np.linalg.norm(xs + ys, axis=1),
            DomainId.D2: np.minimum(diff, away_e),
            DomainId.D3: np.minimum(diff, away_ep),
        }
    # hemisphere product cover
    if action.fixed_sphere_dim < 0:
        raise NoFixedPoint("hemisphere cover needs a fixed pole (k >= 0)")
    xplus = xs[:, 0] - COLLAR_LEVEL
    xminus = -xs[:, 0] - COLLAR_LEVEL
    yplus = ys[:, 0] - COLLAR_LEVEL
    yminus = -ys[:, 0] - COLLAR_LEVEL
    return {
        DomainId.W11: np.minimum(xplus, yplus),
        DomainId.W12: np.minimum(xplus, yminus),
        DomainId.W21: np.minimum(xminus, yplus),
        DomainId.W22: np.minimum(xminus, yminus),
    }


def domain_membership(action: CyclicLinearAction, x: SpherePoint, y: SpherePoint,
                      kind: str) -> DomainMembership:
    """Which domains of the cover contain (x, y), with boundary ambiguity flags."""
    values = membership_values(action, kind, x.coords, y.coords)
    scalars = {dom: float(v[0]) for dom, v in values.items()}
    members = frozenset(d for d, v in scalars.items() if v > MEMBERSHIP_ETA)
    ambiguous = frozenset(d for d, v in scalars.items() if v <= 2 * MEMBERSHIP_ETA)
    return DomainMembership(domains=members, ambiguous=ambiguous, values=scalars)


def select_domain(action: CyclicLinearAction, kind: str,
                  x: SpherePoint, y: SpherePoint) -> DomainId:
    """Lowest-index domain containing the pair (deterministic on overlaps)."""
    membership = domain_membership(action, x, y, kind)
    if not membership.domains:
        # impossible for exact sphere points; guard against corrupt input
        raise AntipodalPair(f"pair not covered by the {kind} cover: {membership.values}")
    return membership.selected


def select_planner_kind(action: CyclicLinearAction) -> str:
    """Planner used for an action: two if n, k odd; three if k >= 1; else hemisphere."""
    n, k = action.sphere_dim, action.fixed_sphere_dim
    if k >= 1 and n % 2 == 1 and k % 2 == 1:
        return "two"
    if k >= 1:
        return "three"
    if k == 0:
        return "hemisphere"
    raise NoFixedPoint("no planner is selected for free actions (k = -1)")


def planner_domains(action: CyclicLinearAction, kind: str) -> tuple[DomainId, ...]:
    """The domain repertoire of a planner (its cover, in priority order)."""
    _check_kind(kind)
    if kind == "two":
        return (DomainId.U1, DomainId.U2)
    if kind == "three":
        return (DomainId.U1, DomainId.D2, DomainId.D3)
    return (DomainId.W11, DomainId.W12, DomainId.W21, DomainId.W22)


# ---------------------------------------------------------------------------
# planners
# ---------------------------------------------------------------------------

def geodesic_planner(x: SpherePoint, y: SpherePoint) -> PlannedPath:
    """The U1 planner: unique shortest arc x -> y at constant speed."""
    if np.linalg.norm(x.coords + y.coords) <= MEMBERSHIP_ETA:
        raise AntipodalPair("geodesic planner is undefined on antipodal pairs")
    return PlannedPath([GeodesicSegment(x.coords, y.coords, 0.0, 1.0)],
                       DomainId.U1, x, y)


def _unit_projection(e: np.ndarray, y: np.ndarray) -> np.ndarray:
    w = e - (e @ y) * y
    return w / np.linalg.norm(w)


def two_domain_planner(action: CyclicLinearAction, x: SpherePoint,
                       y: SpherePoint) -> PlannedPath:
    """Geodesic/vector-field planner over {U1, U2}; needs n, k both odd."""
    n, k = action.sphere_dim, action.fixed_sphere_dim
    if n % 2 == 0 or k % 2 == 0:
        raise ParityMismatch(f"two-domain planner needs odd n and odd k, got n={n}, k={k}")
    if k < 1:
        raise NoFixedPoint("two-domain planner needs a non-empty fixed set (k >= 1)")
    domain = select_domain(action, "two", x, y)
    if domain == DomainId.U1:
        return geodesic_planner(x, y)
    direction = j_field(action).evaluate(y)
    direction = direction / np.linalg.norm(direction)
    return PlannedPath(
        [GeodesicSegment(x.coords, -y.coords, 0.0, 0.5),
         FieldArcSegment(y.coords, direction, 0.5, 1.0)],
        DomainId.U2, x, y)


def three_domain_planner(action: CyclicLinearAction, x: SpherePoint,
                         y: SpherePoint) -> PlannedPath:
    """Planner over {U1, D2, D3}; total cover whenever k >= 1."""
    if action.fixed_sphere_dim < 1:
        raise NoFixedCircle(
            f"three-domain planner needs k >= 1, got k = {action.fixed_sphere_dim}")
    domain = select_domain(action, "three", x, y)
    if domain == DomainId.U1:
        return geodesic_planner(x, y)
    index = 0 if domain == DomainId.D2 else 1
    e = fixed_basis_vector(action, index)
    w = projection_field(action, e).evaluate(y)
    direction = w / np.linalg.norm(w)
    return PlannedPath(
        [GeodesicSegment(x.coords, -y.coords, 0.0, 0.5),
         FieldArcSegment(y.coords, direction, 0.5, 1.0)],
        domain, x, y)


class HomotopyTrack:
    """Contraction of a collared hemisphere onto its pole, H(x, t)."""

    def __init__(self, x: SpherePoint, pole: np.ndarray) -> None:
        self.x = x
        self.pole = pole

    def _raw(self, ts: np.ndarray) -> np.ndarray:
        return (1.0 - ts)[:, None] * self.x.coords[None, :] + ts[:, None] * self.pole[None, :]

    def denominator_grid(self, ts) -> np.ndarray:
        """|(1-t) x + t pole|; bounded below by 1/2 on the collar."""
        return np.linalg.norm(self._raw(np.asarray(ts, dtype=float)), axis=1)

    def evaluate_grid(self, ts) -> np.ndarray:
        return _normalize_rows(self._raw(np.asarray(ts, dtype=float)))

    def evaluate(self, t: float) -> SpherePoint:
        return SpherePoint(self.evaluate_grid(np.array([t]))[0])


def hemisphere_cover(action: CyclicLinearAction, x: SpherePoint,
                     pole_sign: int = 1) -> HomotopyTrack:
    """The hemisphere contraction H_+- for x with <x, pole> > -1/2.

    The pole is the first fixed coordinate direction, so the track is
    equivariant whenever the action has a fixed point.
    """
    if action.fixed_sphere_dim < 0:
        raise NoFixedPoint("hemisphere contraction needs a fixed pole (k >= 0)")
    if pole_sign not in (1, -1):
        raise ValueError("pole_sign must be +1 or -1")
    pole = pole_sign * fixed_basis_vector(action, 0).coords
    if float(x.coords @ pole) <= COLLAR_LEVEL:
        raise OutsideCollar(
            f"<x, pole> = {float(x.coords @ pole)} is not above {COLLAR_LEVEL}")
    return HomotopyTrack(x, pole)


def hemisphere_product_planner(action: CyclicLinearAction, x: SpherePoint,
                               y: SpherePoint) -> PlannedPath:
    """Planner over the W_ij = S_i x S_j product cover (k >= 0).

    Contract x to its pole, transit to y's pole through the fixed sphere
    (k >= 1 needed when the poles differ), then expand to y.
    """
    if action.fixed_sphere_dim < 0:
        raise NoFixedPoint("hemisphere planner needs a fixed pole (k >= 0)")
    domain = select_domain(action, "hemisphere", x, y)
    i = 1 if domain in (DomainId.W11, DomainId.W12) else -1
    j = 1 if domain in (DomainId.W11, DomainId.W21) else -1
    pole = fixed_basis_vector(action, 0).coords
    pole_i, pole_j = i * pole, j * pole
    if i == j:
        transit = NlerpSegment(pole_i, pole_j, 1.0 / 3.0, 2.0 / 3.0)
    else:
        if action.fixed_sphere_dim < 1:
            raise NoFixedCircle(
                "fixed S^0 is disconnected: no equivariant transit between opposite poles")
        ep = fixed_basis_vector(action, 1).coords
        transit = FieldArcSegment(pole_j, ep, 1.0 / 3.0, 2.0 / 3.0)
    return PlannedPath(
        [NlerpSegment(x.coords, pole_i, 0.0, 1.0 / 3.0),
         transit,
         NlerpSegment(pole_j, y.coords, 2.0 / 3.0, 1.0)],
        domain, x, y)


def plan(action: CyclicLinearAction, kind: str, x: SpherePoint,
         y: SpherePoint) -> PlannedPath:
    """Dispatch to the planner of the given kind ('two'/'three'/'hemisphere')."""
    _check_kind(kind)
    if kind == "two":
        return two_domain_planner(action, x, y)
    if kind == "three":
        return three_domain_planner(action, x, y)
    return hemisphere_product_planner(action, x, y)


# ---------------------------------------------------------------------------
# batch path evaluation (verification harness backend)
# ---------------------------------------------------------------------------

def select_domains_batch(action: CyclicLinearAction, kind: str,
                         xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Lowest-index containing domain per pair, as an int array of DomainId."""
    values = membership_values(action, kind, xs, ys)
    order = planner_domains(action, kind)
    n = _as_rows(xs).shape[0]
    out = np.full(n, -1, dtype=int)
    for dom in order:
        mask = (out == -1) & (values[dom] > MEMBERSHIP_ETA)
        out[mask] = int(dom)
    if np.any(out == -1):
        raise AntipodalPair("batch contains a pair outside the cover")
    return out


def paths_grid(action: CyclicLinearAction, kind: str, xs: np.ndarray,
               ys: np.ndarray, ts: np.ndarray,
               domains: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the selected planner for every pair on a shared time grid.

    Returns (points, domains) with points of shape (N, len(ts), d).  This is
    the vectorized twin of :func:`plan` + :meth:`PlannedPath.evaluate_grid`
    and is exercised against it in the test suite.  ``domains`` overrides the
    lowest-index selection (the pairs must still belong to those domains);
    the continuity smoke check uses this to hold the domain fixed while
    perturbing the query.
    """
    xs, ys = _as_rows(xs), _as_rows(ys)
    ts = np.asarray(ts, dtype=float)
    if domains is None:
        domains = select_domains_batch(action, kind, xs, ys)
    else:
        domains = np.asarray(domains, dtype=int)
    out = np.empty((xs.shape[0], ts.size, xs.shape[1]))

    # leg assignment matches PlannedPath.evaluate_grid: a boundary time
    # belongs to the segment that starts there
    first = ts < 0.5
    tau_first = 2.0 * ts[first]
    tau_second = 2.0 * ts[~first] - 1.0

    for dom in np.unique(domains):
        rows = np.flatnonzero(domains == dom)
        gx, gy = xs[rows], ys[rows]
        dom = DomainId(dom)
        if dom == DomainId.U1:
            out[rows] = slerp_grid(gx, gy, ts)
        elif dom in (DomainId.U2, DomainId.D2, DomainId.D3):
            if dom == DomainId.U2:
                dirs = j_field(action).evaluate_many(gy)
            else:
                e = fixed_basis_vector(action, 0 if dom == DomainId.D2 else 1).coords
                dirs = e[None, :] - (gy @ e)[:, None] * gy
            dirs = _normalize_rows(dirs)
            out[np.ix_(rows, np.flatnonzero(first))] = slerp_grid(gx, -gy, tau_first)
            out[np.ix_(rows, np.flatnonzero(~first))] = arc_grid(gy, dirs, tau_second)
        else:
            out[rows] = _hemisphere_grid(action, dom, gx, gy, ts)
    return out, domains


def _hemisphere_grid(action: CyclicLinearAction, dom: DomainId, gx: np.ndarray,
                     gy: np.ndarray, ts: np.ndarray) -> np.ndarray:
    pole = fixed_basis_vector(action, 0).coords
    i = 1 if dom in (DomainId.W11, DomainId.W12) else -1
    j = 1 if dom in (DomainId.W11, DomainId.W21) else -1
    pi_, pj = i * pole, j * pole
    leg1 = ts < 1.0 / 3.0
    leg3 = ts >= 2.0 / 3.0
    leg2 = ~leg1 & ~leg3
    n = gx.shape[0]
    out = np.empty((n, ts.size, gx.shape[1]))
    poles_i = np.broadcast_to(pi_, gx.shape)
    poles_j = np.broadcast_to(pj, gx.shape)
    out[:, leg1] = nlerp_grid(gx, poles_i, 3.0 * ts[leg1])
    if i == j:
        out[:, leg2] = np.broadcast_to(pi_, (n, int(np.count_nonzero(leg2)), gx.shape[1]))
    else:
        if action.fixed_sphere_dim < 1:
            raise NoFixedCircle(
                "fixed S^0 is disconnected: no equivariant transit between opposite poles")
        ep = fixed_basis_vector(action, 1).coords
        out[:, leg2] = arc_grid(poles_j, np.broadcast_to(ep, gx.shape), 3.0 * ts[leg2] - 1.0)
    out[:, leg3] = nlerp_grid(poles_j, gy, 3.0 * ts[leg3] - 2.0)
    return out
