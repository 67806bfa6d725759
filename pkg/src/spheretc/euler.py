"""Burnside-ring Euler characteristics of cyclic G-CW complexes.

Groups are cyclic Z/m, so the subgroup lattice is the divisor lattice of m
(a subgroup is identified by its order) and every Weyl group is the full
quotient.  Two routes to the equivariant Euler characteristic are
implemented:

* ``euler_definition`` -- the alternating sum of orbit-cell counts per
  isotropy type, straight from the cell inventory.
* ``euler_fixed_point_formula`` -- for each subgroup H, the difference of
  the classical Euler characteristics of the quotients (X^H)/W and
  (X^{>H})/W, each enumerated as its own cell complex.

The two must agree exactly on every input; the geometric cross-check is the
standard join cell structure on a linear sphere, whose coefficients are the
closed-form values chi(S^k) and (chi(S^n) - chi(S^k))/p.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .action import CyclicLinearAction
from .errors import NonIntegralQuotient

NEG_INF = float("-inf")  # dimension of the empty set


def divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def sphere_euler(dim: int) -> int:
    """Classical chi(S^dim); dim = -1 encodes the empty sphere."""
    if dim < 0:
        return 0
    return 2 if dim % 2 == 0 else 0


@dataclass(frozen=True)
class BurnsideElement:
    """Integer combination of basis elements [G/H], H running over subgroup orders."""

    group_order: int
    coefficients: tuple[tuple[int, int], ...]  # (subgroup order, coefficient)

    @classmethod
    def from_dict(cls, group_order: int, coeffs: dict[int, int]) -> "BurnsideElement":
        items = tuple(sorted((int(d), int(c)) for d, c in coeffs.items() if c != 0))
        for d, _ in items:
            if group_order % d != 0:
                raise ValueError(f"{d} does not divide the group order {group_order}")
        return cls(group_order=group_order, coefficients=items)

    @classmethod
    def zero(cls, group_order: int) -> "BurnsideElement":
        return cls(group_order=group_order, coefficients=())

    def coefficient(self, subgroup_order: int) -> int:
        return dict(self.coefficients).get(subgroup_order, 0)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        if self.group_order != other.group_order:
            raise ValueError("cannot add Burnside elements over different groups")
        merged = dict(self.coefficients)
        for d, c in other.coefficients:
            merged[d] = merged.get(d, 0) + c
        return BurnsideElement.from_dict(self.group_order, merged)

    def __neg__(self) -> "BurnsideElement":
        return BurnsideElement.from_dict(
            self.group_order, {d: -c for d, c in self.coefficients})

    def __sub__(self, other: "BurnsideElement") -> "BurnsideElement":
        return self + (-other)

    def to_dict(self) -> dict:
        return {"group_order": self.group_order,
                "coefficients": {str(d): c for d, c in self.coefficients}}

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(f"{c}*[G/C{d}]" for d, c in self.coefficients)


@dataclass(frozen=True)
class Cell:
    """nu orbit cells G/K x D^dim of one isotropy type K (given by its order)."""

    dim: int
    isotropy: int
    count: int


@dataclass(frozen=True)
class GCWComplex:
    """Cell inventory of a finite Z/m CW complex."""

    group_order: int
    cells: tuple[Cell, ...]

    def __post_init__(self) -> None:
        if self.group_order < 1:
            raise ValueError("group order must be positive")
        for c in self.cells:
            if c.dim < 0 or c.count < 0:
                raise ValueError(f"bad cell {c}")
            if self.group_order % c.isotropy != 0:
                raise ValueError(
                    f"isotropy order {c.isotropy} does not divide {self.group_order}")

    @classmethod
    def build(cls, group_order: int, cells) -> "GCWComplex":
        return cls(group_order=group_order,
                   cells=tuple(Cell(int(d), int(k), int(v)) for d, k, v in cells))

    def to_dict(self) -> dict:
        return {"group_order": self.group_order,
                "cells": [{"dim": c.dim, "isotropy": c.isotropy, "count": c.count}
                          for c in self.cells]}

    @classmethod
    def from_dict(cls, d: dict) -> "GCWComplex":
        return cls.build(int(d["group_order"]),
                         [(c["dim"], c["isotropy"], c["count"]) for c in d.get("cells", [])])

    def disjoint_union(self, other: "GCWComplex") -> "GCWComplex":
        if self.group_order != other.group_order:
            raise ValueError("disjoint union needs a common group")
        return GCWComplex(self.group_order, self.cells + other.cells)


def euler_definition(complex_: GCWComplex) -> BurnsideElement:
    """chi^G as the alternating sum of orbit-cell counts per isotropy type."""
    coeffs: dict[int, int] = {}
    for c in complex_.cells:
        coeffs[c.isotropy] = coeffs.get(c.isotropy, 0) + (-1) ** c.dim * c.count
    return BurnsideElement.from_dict(complex_.group_order, coeffs)


def euler_fixed_point_formula(complex_: GCWComplex) -> BurnsideElement:
    """chi^G via classical Euler characteristics of the W-quotients of X^H.

    An orbit cell G/K x D^d lies in X^H iff H is contained in K (for cyclic
    groups: iff the order of H divides the order of K), and descends to
    exactly ``count`` ordinary d-cells in the quotient by the Weyl group
    W = G/H, which permutes the |G/K| translates transitively.
    """
    coeffs: dict[int, int] = {}
    for h in divisors(complex_.group_order):
        chi_fixed = sum((-1) ** c.dim * c.count
                        for c in complex_.cells if c.isotropy % h == 0)
        chi_strict = sum((-1) ** c.dim * c.count
                         for c in complex_.cells if c.isotropy % h == 0 and c.isotropy != h)
        coeffs[h] = chi_fixed - chi_strict
    return BurnsideElement.from_dict(complex_.group_order, coeffs)


def linear_sphere_gcw(action: CyclicLinearAction) -> GCWComplex:
    """Join cell structure on S^n = S^k * S^(n-k-1) for a linear Z/p sphere.

    The fixed S^k carries two fixed cells per dimension 0..k; the unit
    sphere of the non-fixed summand is free with one orbit cell per
    dimension; each (fixed cell, free orbit cell) pair contributes one free
    join cell of dimension a + b + 1.
    """
    p = action.p
    k = action.fixed_sphere_dim
    free_dim = 2 * len(action.weights) + action.sign_dim - 1
    cells: list[tuple[int, int, int]] = []
    if k >= 0:
        cells.extend((d, p, 2) for d in range(k + 1))
    if free_dim >= 0:
        cells.extend((d, 1, 1) for d in range(free_dim + 1))
        for a in range(k + 1):
            for b in range(free_dim + 1):
                cells.append((a + b + 1, 1, 2))
    merged: dict[tuple[int, int], int] = {}
    for d, iso, cnt in cells:
        merged[(d, iso)] = merged.get((d, iso), 0) + cnt
    return GCWComplex.build(p, [(d, iso, cnt) for (d, iso), cnt in sorted(merged.items())])


def orbit_space_euler_dims(n: int, k: int, p: int) -> int:
    """chi(S^n / Z_p) = chi(S^k) + (chi(S^n) - chi(S^k)) / p from raw dimensions.

    Raises NonIntegralQuotient when p does not divide the free contribution,
    which signals an impossible (n, k, p) combination.
    """
    chi_n, chi_k = sphere_euler(n), sphere_euler(k)
    if (chi_n - chi_k) % p != 0:
        raise NonIntegralQuotient(
            f"(chi(S^{n}) - chi(S^{k})) = {chi_n - chi_k} is not divisible by p = {p}")
    return chi_k + (chi_n - chi_k) // p


def orbit_space_euler(action: CyclicLinearAction) -> int:
    """Euler characteristic of the orbit space of a linear Z/p sphere."""
    return orbit_space_euler_dims(action.sphere_dim, action.fixed_sphere_dim, action.p)


@dataclass(frozen=True)
class WeakGapEntry:
    isotropy: int
    dim_fixed: float
    dim_strict: float
    holds: bool


@dataclass(frozen=True)
class WeakGapReport:
    holds: bool
    entries: tuple[WeakGapEntry, ...]

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {"holds": self.holds,
                "entries": [{"isotropy": e.isotropy,
                             "dim_fixed": e.dim_fixed,
                             "dim_strict": e.dim_strict,
                             "holds": e.holds} for e in self.entries]}


def weak_gap_check(subject) -> WeakGapReport:
    """Check dim X^{>H} <= dim X^H - 2 for every occurring isotropy type H.

    Accepts a GCWComplex or a CyclicLinearAction (which is converted to its
    join cell structure).  Dimensions are taken over the whole space, with
    the empty set at dimension -inf so its condition is vacuously true.
    """
    if isinstance(subject, CyclicLinearAction):
        subject = linear_sphere_gcw(subject)
    occurring = sorted({c.isotropy for c in subject.cells if c.count > 0})
    entries = []
    for h in occurring:
        dims_fixed = [c.dim for c in subject.cells
                      if c.count > 0 and c.isotropy % h == 0]
        dims_strict = [c.dim for c in subject.cells
                       if c.count > 0 and c.isotropy % h == 0 and c.isotropy != h]
        dim_fixed = max(dims_fixed) if dims_fixed else NEG_INF
        dim_strict = max(dims_strict) if dims_strict else NEG_INF
        entries.append(WeakGapEntry(
            isotropy=h, dim_fixed=dim_fixed, dim_strict=dim_strict,
            holds=dim_strict <= dim_fixed - 2))
    return WeakGapReport(holds=all(e.holds for e in entries), entries=tuple(entries))


class VFieldExistence(Enum):
    """Verdict on nowhere-vanishing equivariant vector field existence."""

    GUARANTEED = "guaranteed"
    UNKNOWN = "unknown"
    IMPOSSIBLE_BY_PARITY = "impossible_by_parity"


def vector_field_exists_predicate(action: CyclicLinearAction) -> VFieldExistence:
    """Field existence verdict for a linear Z/p sphere.

    GUARANTEED when chi^G = 0 and the weak gap condition holds (a sufficient
    criterion).  IMPOSSIBLE_BY_PARITY when the fixed sphere is non-empty and
    even-dimensional: an equivariant field takes fixed values on fixed
    points, hence restricts to a tangent field on S^k, where the hairy-ball
    theorem forbids it.  Otherwise UNKNOWN; the sufficient criterion failing
    proves nothing.
    """
    k = action.fixed_sphere_dim
    if k >= 0 and k % 2 == 0:
        return VFieldExistence.IMPOSSIBLE_BY_PARITY
    chi = euler_definition(linear_sphere_gcw(action))
    if chi.is_zero and weak_gap_check(action).holds:
        return VFieldExistence.GUARANTEED
    return VFieldExistence.UNKNOWN
