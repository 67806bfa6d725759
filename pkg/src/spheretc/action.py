"""Linear Z/p actions on spheres.

An action is stored as an orthogonal block-diagonal representation of the
cyclic group Z/p on R^(n+1), restricted to the unit sphere S^n:

* ``fixed_dim`` trivial coordinates first (the fixed subspace, a standard
  unknotted S^k with k = fixed_dim - 1),
* one 2x2 rotation block per weight q (rotation by 2*pi*q/p), sorted by
  weight,
* ``sign_dim`` coordinates scaled by -1 per generator application
  (p = 2 only).

Group elements are plain integers taken mod p; composition is addition and
0 is the identity.  All values are immutable after construction and safe to
share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AmbientTooSmall,
    DimensionMismatch,
    NonPrime,
    NotOnSphere,
    SignBlockWithOddP,
    WeightOutOfRange,
)

# Construction accepts points this far from unit norm (and renormalizes).
POINT_NORM_TOL = 1e-12
# Geometric predicates (fixedness) use a looser tolerance.
FIXED_TOL = 1e-9


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class SpherePoint:
    """A unit vector in R^(n+1), renormalized on construction.

    Rejects input further than ``POINT_NORM_TOL`` from unit norm; use
    :meth:`from_vector` to project an arbitrary nonzero vector onto the
    sphere.
    """

    __slots__ = ("coords",)

    def __init__(self, coords) -> None:
        v = np.asarray(coords, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise NotOnSphere(f"expected a 1-d coordinate vector, got shape {v.shape}")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > POINT_NORM_TOL:
            raise NotOnSphere(f"|x| = {norm!r} deviates from 1 by more than {POINT_NORM_TOL}")
        v = v / norm
        v.flags.writeable = False
        object.__setattr__(self, "coords", v)

    @classmethod
    def from_vector(cls, coords) -> "SpherePoint":
        """Normalize an arbitrary nonzero vector onto the sphere."""
        v = np.asarray(coords, dtype=float)
        norm = float(np.linalg.norm(v))
        if norm == 0.0 or not math.isfinite(norm):
            raise NotOnSphere("cannot normalize a zero or non-finite vector")
        return cls(v / norm)

    @property
    def ambient_dim(self) -> int:
        return self.coords.size

    def __array__(self, dtype=None, copy=None):
        if dtype is not None:
            return self.coords.astype(dtype)
        return self.coords

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self) -> int:
        return self.coords.size

    def __neg__(self) -> "SpherePoint":
        return SpherePoint(-self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, SpherePoint) and np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash(self.coords.tobytes())

    def __repr__(self) -> str:
        return f"SpherePoint({self.coords.tolist()})"


@dataclass(frozen=True)
class CyclicLinearAction:
    """Orthogonal Z/p representation on R^(n+1), in canonical block order."""

    p: int
    fixed_dim: int
    weights: tuple[int, ...] = ()
    sign_dim: int = 0
    _matrices: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise NonPrime(f"p = {self.p} is not prime")
        if self.fixed_dim < 0 or self.sign_dim < 0:
            raise AmbientTooSmall("fixed_dim and sign_dim must be non-negative")
        object.__setattr__(self, "weights", tuple(sorted(int(q) for q in self.weights)))
        for q in self.weights:
            if not 1 <= q <= self.p - 1:
                raise WeightOutOfRange(f"weight {q} outside 1..{self.p - 1}")
        if self.sign_dim > 0 and self.p != 2:
            raise SignBlockWithOddP(f"sign_dim = {self.sign_dim} requires p = 2, got p = {self.p}")
        if self.ambient_dim < 2:
            raise AmbientTooSmall(f"ambient dimension {self.ambient_dim} < 2; need a sphere S^n, n >= 1")

    # --- dimensions ---------------------------------------------------

    @property
    def ambient_dim(self) -> int:
        return self.fixed_dim + 2 * len(self.weights) + self.sign_dim

    @property
    def sphere_dim(self) -> int:
        """n, the dimension of the sphere the action lives on."""
        return self.ambient_dim - 1

    @property
    def fixed_sphere_dim(self) -> int:
        """k, the dimension of the fixed subsphere; -1 means empty fixed set."""
        return self.fixed_dim - 1

    @property
    def is_trivial(self) -> bool:
        return not self.weights and self.sign_dim == 0

    # --- matrices -----------------------------------------------------

    def matrix(self, g: int) -> np.ndarray:
        """The orthogonal matrix of the group element g (exponent mod p)."""
        g = g % self.p
        cached = self._matrices.get(g)
        if cached is not None:
            return cached
        dim = self.ambient_dim
        m = np.zeros((dim, dim))
        f = self.fixed_dim
        m[:f, :f] = np.eye(f)
        off = f
        for q in self.weights:
            r = (q * g) % self.p
            if r == 0:
                c, s = 1.0, 0.0
            elif 2 * r == self.p:
                c, s = -1.0, 0.0  # rotation by pi, exact
            else:
                angle = 2.0 * math.pi * r / self.p
                c, s = math.cos(angle), math.sin(angle)
            m[off, off] = c
            m[off, off + 1] = -s
            m[off + 1, off] = s
            m[off + 1, off + 1] = c
            off += 2
        sign = 1.0 if g % 2 == 0 else -1.0
        for _ in range(self.sign_dim):
            m[off, off] = sign
            off += 1
        m.flags.writeable = False
        self._matrices[g] = m
        return m

    # --- operations -----------------------------------------------------

    def apply(self, g: int, x: SpherePoint) -> SpherePoint:
        """Act by the group element g on a point of S^n."""
        if x.ambient_dim != self.ambient_dim:
            raise DimensionMismatch(
                f"point has dimension {x.ambient_dim}, action needs {self.ambient_dim}")
        return SpherePoint(self.matrix(g) @ x.coords)

    def is_fixed(self, x: SpherePoint) -> bool:
        """True iff every coordinate outside the fixed block vanishes (tol 1e-9)."""
        if x.ambient_dim != self.ambient_dim:
            raise DimensionMismatch(
                f"point has dimension {x.ambient_dim}, action needs {self.ambient_dim}")
        tail = x.coords[self.fixed_dim:]
        return bool(tail.size == 0 or np.max(np.abs(tail)) <= FIXED_TOL)

    def orbit(self, x: SpherePoint) -> list[SpherePoint]:
        """[g.x for g in Z/p], in exponent order 0..p-1."""
        return [self.apply(g, x) for g in range(self.p)]

    # --- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "fixed_dim": self.fixed_dim,
            "weights": list(self.weights),
            "sign_dim": self.sign_dim,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CyclicLinearAction":
        return cls(
            p=int(d["p"]),
            fixed_dim=int(d["fixed_dim"]),
            weights=tuple(int(q) for q in d.get("weights", [])),
            sign_dim=int(d.get("sign_dim", 0)),
        )

    def __repr__(self) -> str:
        return (f"CyclicLinearAction(p={self.p}, fixed_dim={self.fixed_dim}, "
                f"weights={list(self.weights)}, sign_dim={self.sign_dim})")


def validate(spec: dict) -> CyclicLinearAction:
    """Validate raw action parameters (the JSON schema) into an action."""
    return CyclicLinearAction.from_dict(spec)


def standard_action(n: int, k: int, p: int) -> CyclicLinearAction:
    """The canonical linear Z/p action on S^n with fixed subsphere S^k.

    Uses sign coordinates for p = 2 and weight-1 rotation blocks for odd p,
    so the codimension n - k must be even when p is odd.
    """
    if not -1 <= k <= n:
        raise AmbientTooSmall(f"need -1 <= k <= n, got k={k}, n={n}")
    codim = n - k
    if p == 2:
        return CyclicLinearAction(p=2, fixed_dim=k + 1, weights=(), sign_dim=codim)
    if codim % 2 != 0:
        raise SignBlockWithOddP(
            f"odd p = {p} cannot realize odd codimension {codim} (no sign blocks)")
    return CyclicLinearAction(p=p, fixed_dim=k + 1, weights=(1,) * (codim // 2), sign_dim=0)


def fixed_basis_vector(action: CyclicLinearAction, index: int) -> SpherePoint:
    """The index-th standard basis vector of the fixed subspace."""
    if index >= action.fixed_dim:
        raise DimensionMismatch(
            f"fixed subspace has dimension {action.fixed_dim}, no basis vector {index}")
    e = np.zeros(action.ambient_dim)
    e[index] = 1.0
    return SpherePoint(e)
