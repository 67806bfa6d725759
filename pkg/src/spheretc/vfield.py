"""Equivariant tangent vector fields on linear Z/p spheres.

Two constructions:

* ``j_field`` -- a linear field v(x) = J x where J rotates each consecutive
  pair of fixed coordinates, each rotation block, and each consecutive pair
  of sign coordinates by 90 degrees.  J is orthogonal and commutes with
  every matrix of the action, so the field is nowhere vanishing, exactly
  tangent, and exactly equivariant.  Exists iff n and k are both odd (then
  the fixed and non-fixed summands both have even dimension).

* ``projection_field`` -- w(y) = e - <e,y> y for a fixed unit vector e.
  Tangent and equivariant, with zero locus exactly {e, -e} and
  |w(y)|^2 = 1 - <e,y>^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .action import CyclicLinearAction, SpherePoint
from .errors import NotAFixedPoint, ParityMismatch

TANGENCY_TOL = 1e-12


def _j_matrix(action: CyclicLinearAction) -> np.ndarray:
    dim = action.ambient_dim
    j = np.zeros((dim, dim))
    # fixed coords, rotation blocks and sign coords all pair up consecutively
    for off in range(0, dim, 2):
        j[off, off + 1] = -1.0
        j[off + 1, off] = 1.0
    j.flags.writeable = False
    return j


@dataclass(frozen=True)
class TangentField:
    """A tangent vector field on the sphere of an action.

    ``kind`` is "rotation" (v(x) = J x) or "projection" (w(y) = e - <e,y> y).
    """

    action: CyclicLinearAction
    kind: str
    matrix: np.ndarray | None = None
    base_point: np.ndarray | None = None

    def __call__(self, x) -> np.ndarray:
        return self.evaluate_many(np.asarray(x, dtype=float))

    def evaluate(self, x: SpherePoint) -> np.ndarray:
        return self.evaluate_many(x.coords)

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate on one point (d,) or a batch (N, d)."""
        if self.kind == "rotation":
            return xs @ self.matrix.T
        dots = xs @ self.base_point
        return self.base_point - dots[..., None] * xs if xs.ndim > 1 \
            else self.base_point - dots * xs


def j_field(action: CyclicLinearAction) -> TangentField:
    """Nowhere-vanishing equivariant field v(x) = J x; needs n, k both odd."""
    n, k = action.sphere_dim, action.fixed_sphere_dim
    if n % 2 == 0 or k % 2 == 0:
        raise ParityMismatch(
            f"rotation field needs odd n and odd k, got n={n}, k={k}")
    return TangentField(action=action, kind="rotation", matrix=_j_matrix(action))


def projection_field(action: CyclicLinearAction, e: SpherePoint) -> TangentField:
    """Field w(y) = e - <e,y> y toward a fixed point e; vanishes only at +-e."""
    if not action.is_fixed(e):
        raise NotAFixedPoint(f"{e!r} is not fixed by the action")
    return TangentField(action=action, kind="projection", base_point=e.coords)


@dataclass(frozen=True)
class FieldCertificate:
    """Sampled evidence that a field is tangent, equivariant and non-degenerate."""

    kind: str
    seed: int
    samples: int
    tangency_max: float
    equivariance_max: float
    commutator_max: float | None  # rotation fields only; exact matrix identity
    min_norm: float
    min_norm_witness: list[float]
    zero_locus: list[list[float]]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "samples": self.samples,
            "tangency_max": self.tangency_max,
            "equivariance_max": self.equivariance_max,
            "commutator_max": self.commutator_max,
            "min_norm": self.min_norm,
            "min_norm_witness": self.min_norm_witness,
            "zero_locus": self.zero_locus,
        }


def field_certificate(action: CyclicLinearAction, fld: TangentField,
                      seed: int = 0, samples: int = 10_000) -> FieldCertificate:
    """Sample tangency, equivariance and norm statistics for a field.

    For projection fields the sample set is augmented with points near the
    zero locus so the reported min_norm actually witnesses the degeneration.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    dim = action.ambient_dim
    xs = rng.standard_normal((samples, dim))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)

    zero_locus: list[list[float]] = []
    if fld.kind == "projection":
        e = fld.base_point
        zero_locus = [e.tolist(), (-e).tolist()]
        # approach the poles along a tangent direction
        t = rng.standard_normal(dim)
        t -= (t @ e) * e
        t /= np.linalg.norm(t)
        near = np.array([s * e + eps * t
                         for s in (1.0, -1.0)
                         for eps in (1e-2, 1e-4, 1e-6)])
        near /= np.linalg.norm(near, axis=1, keepdims=True)
        xs = np.vstack([xs, near])

    vs = fld.evaluate_many(xs)
    tangency = float(np.max(np.abs(np.sum(vs * xs, axis=1))))

    equi = 0.0
    comm = None
    if fld.kind == "rotation":
        comm = 0.0
    for g in range(1, action.p):
        m = action.matrix(g)
        resid = np.max(np.abs(vs @ m.T - fld.evaluate_many(xs @ m.T)))
        equi = max(equi, float(resid))
        if fld.kind == "rotation":
            j = fld.matrix
            comm = max(comm, float(np.max(np.abs(j @ m - m @ j))))

    norms = np.linalg.norm(vs, axis=1)
    imin = int(np.argmin(norms))
    return FieldCertificate(
        kind=fld.kind,
        seed=seed,
        samples=int(xs.shape[0]),
        tangency_max=tangency,
        equivariance_max=equi,
        commutator_max=comm,
        min_norm=float(norms[imin]),
        min_norm_witness=xs[imin].tolist(),
        zero_locus=zero_locus,
    )
