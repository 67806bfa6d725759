"""Theorem-backed values and interval bounds for TC invariants of linear
Z/p spheres.

Values carry provenance strings naming the result they rest on.  Exact
values come from the classification of equivariant (TC_G) and invariant
(TC^G) topological complexity on linear cyclic sphere actions; everything
else is derived by a monotone interval-propagation engine over the standard
inequalities relating cat, cat_G, TC, TC_G and TC^G.

Conventions: non-reduced category (cat(S^n) = 2); an infinite value is an
explicit sentinel (math.inf), produced e.g. when the fixed set S^0 is
disconnected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .action import CyclicLinearAction, is_prime
from .errors import EmptyFixedSet, InconsistentFacts, InvalidQuery, NonPrime

INF = math.inf

# --- citations -------------------------------------------------------------

CITE_FARBER = "Farber 2003: TC(S^n) = 2 for n odd, 3 for n even"
CITE_CAT_SPHERE = "classical: cat(S^n) = 2 (non-reduced convention)"
CITE_GLO = ("Grant-Lupton-Oprea 2013: TC(X) = 2 iff X is homotopy equivalent "
            "to an odd-dimensional sphere")
CITE_CG_FIXED = "Colman-Grant 2012, Cor 5.4: TC(X^H) <= TC_G(X)"
CITE_CG_CAT = "Colman-Grant 2012, Cor 5.8: cat_G(X) <= TC_G(X) <= 2 cat_G(X) - 1"
CITE_LM_LOWER = "Lubawski-Marzantowicz 2014: max{TC(X^G), TC(X/G)} <= TC^G(X)"
CITE_LM_UPPER = "Lubawski-Marzantowicz 2014: TC^G(X) <= 2 cat_G(X) - 1"
CITE_CAT_LOWER = "fixed-point compression: max{cat(X), cat_G(X)} <= TC^G(X)"
CITE_GCONTRACT = "TC^G(X) = 1 iff X is G-contractible; spheres are not, so TC^G >= 2"
CITE_CAT_TC = "classical: cat(X) <= TC(X) <= 2 cat(X) - 1"
CITE_GCAT = ("linear action with a fixed point: cat_G(S^n) = 2 via collared "
             "hemisphere contractions")
CITE_LINEAR_WINDOW = ("linear G-connected sphere with a fixed point: "
                      "2 <= TC_G(S^n), TC^G(S^n) <= 3")
CITE_ETC = ("equivariant TC of a linear Z/p sphere with fixed S^k, 0 < k < n: "
            "2 if n and k are both odd, else 3")
CITE_ETC_PLANNER = ("two-domain equivariant planner (geodesic + vector-field arc) "
                    "witnesses the upper bound 2")
CITE_ITC = ("invariant TC of a linear Z/p sphere: 3 when k < n-2, or k = n-2 "
            "with n even, or k = n-1 with n odd")
CITE_ITC_UNSETTLED = ("open: invariant TC for k = n-2 with n odd and for "
                      "k = n-1 with n even; value lies in [2, 3]")
CITE_ORBIT_HOMOLOGY = ("for 0 < k < n-2 the orbit space S^n/Z_p has at least three "
                       "nonzero Z/p homology groups, hence is neither contractible "
                       "nor a homotopy sphere, so TC(S^n/Z_p) >= 3")
CITE_TC_DISCONNECTED = "TC of a space with a disconnected component pair is infinite"
CITE_TRIVIAL = "trivial action: equivariant and ordinary TC coincide"
CITE_TRIVIAL_ORBIT = "trivial action: the orbit space is S^n itself"
CITE_OUT_OF_SCOPE = ("outside the exact classification (k in {0, n}); "
                     "value obtained by bound propagation only")

# Documented conjecture, exposed as a flag and never as a value: whether
# 2 <= TC^{Z/p}(S^n) <= 3 characterizes smooth spheres that are equivariantly
# equivalent to linear ones (with non-empty connected fixed set).
OPEN_PROBLEM_LINEARITY = (
    "conjecture (open): a smooth Z/p sphere with non-empty path-connected "
    "fixed set is equivariantly equivalent to a linear sphere iff "
    "2 <= TC^{Z/p}(S^n) <= 3")


class Status(Enum):
    EXACT = "exact"
    UNSETTLED = "unsettled"
    INFINITE = "infinite"


@dataclass(frozen=True)
class TCValue:
    """An interval [lower, upper] with status and theorem citations."""

    lower: float
    upper: float
    status: Status
    provenance: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.lower < 1:
            raise ValueError("TC-type invariants are at least 1")
        if self.lower > self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")
        if self.status == Status.EXACT and self.lower != self.upper:
            raise ValueError("exact value must have lower == upper")
        if self.status == Status.INFINITE and not math.isinf(self.lower):
            raise ValueError("infinite status requires an infinite lower bound")

    @property
    def value(self) -> int:
        if self.status != Status.EXACT:
            raise ValueError(f"no single value for status {self.status.value}")
        return int(self.lower)

    @property
    def is_exact(self) -> bool:
        return self.status == Status.EXACT

    def render(self) -> str:
        if self.status == Status.INFINITE:
            return "inf"
        if self.status == Status.EXACT:
            return str(int(self.lower))
        hi = "inf" if math.isinf(self.upper) else str(int(self.upper))
        return f"{int(self.lower)}..{hi}"

    def to_dict(self) -> dict:
        return {
            "lower": "inf" if math.isinf(self.lower) else int(self.lower),
            "upper": "inf" if math.isinf(self.upper) else int(self.upper),
            "status": self.status.value,
            "provenance": list(self.provenance),
        }


def exact(v: int, provenance) -> TCValue:
    return TCValue(v, v, Status.EXACT, tuple(provenance))

def bounded(lower, upper, provenance) -> TCValue:
    if math.isinf(lower):
        return TCValue(INF, INF, Status.INFINITE, tuple(provenance))
    if lower == upper:
        return TCValue(lower, upper, Status.EXACT, tuple(provenance))
    return TCValue(lower, upper, Status.UNSETTLED, tuple(provenance))

def infinite(provenance) -> TCValue:
    return TCValue(INF, INF, Status.INFINITE, tuple(provenance))


@dataclass(frozen=True)
class SphereQuery:
    """A linear Z/p sphere S^n with fixed subsphere S^k (k = -1: free)."""

    n: int
    k: int
    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise NonPrime(f"p = {self.p} is not prime")
        if self.n < 1:
            raise InvalidQuery(f"n = {self.n} < 1")
        if not -1 <= self.k <= self.n:
            raise InvalidQuery(f"k = {self.k} outside -1..{self.n}")
        if self.p != 2 and 0 <= self.k < self.n and (self.n - self.k) % 2 != 0:
            raise InvalidQuery(
                f"odd p = {self.p} cannot realize odd codimension {self.n - self.k}")

    @classmethod
    def of_action(cls, action: CyclicLinearAction) -> "SphereQuery":
        return cls(n=action.sphere_dim, k=action.fixed_sphere_dim, p=action.p)


# --- exact theorem lookups ---------------------------------------------------

def tc_sphere(n: int) -> TCValue:
    """TC(S^n): 2 for odd n, 3 for even n."""
    if n < 1:
        raise InvalidQuery(f"n = {n} < 1")
    return exact(2 if n % 2 == 1 else 3, [CITE_FARBER])


def cat_g_sphere(query: SphereQuery) -> TCValue:
    """cat_G(S^n) = 2 for any linear action with a fixed point."""
    if query.k < 0:
        raise EmptyFixedSet("cat_G = 2 needs a non-empty fixed set (k >= 0)")
    return exact(2, [CITE_GCAT])


def tc_equivariant(query: SphereQuery) -> TCValue:
    """TC_G for a linear Z/p sphere; exact for k >= 0, infinite at k = 0."""
    n, k = query.n, query.k
    if k < 0:
        raise InvalidQuery("equivariant TC value requires 0 <= k <= n")
    if k == n:
        base = tc_sphere(n)
        return exact(base.value, [CITE_TRIVIAL, *base.provenance])
    if k == 0:
        return infinite([CITE_CG_FIXED, CITE_TC_DISCONNECTED])
    if n % 2 == 1 and k % 2 == 1:
        return exact(2, [CITE_ETC, CITE_ETC_PLANNER])
    return exact(3, [CITE_ETC, CITE_CG_FIXED, CITE_FARBER])


def tc_invariant(query: SphereQuery) -> TCValue:
    """TC^G for a linear Z/p sphere; [2,3] in the two open families.

    For k in {0, n} the classification does not apply and the returned value
    is whatever bound propagation yields, flagged as out of scope.
    """
    n, k = query.n, query.k
    if k < 0:
        raise InvalidQuery("invariant TC value requires 0 <= k <= n")
    if k in (0, n):
        report = propagate_bounds(query, standard_sphere_seeds(query))
        tcg = report.facts["TC^G"]
        return bounded(tcg.lower, tcg.upper, [CITE_OUT_OF_SCOPE, *tcg.provenance])
    if k < n - 2:
        return exact(3, [CITE_ITC, CITE_ORBIT_HOMOLOGY, CITE_GLO,
                         CITE_LM_LOWER, CITE_LM_UPPER])
    if (k == n - 2 and n % 2 == 0) or (k == n - 1 and n % 2 == 1):
        return exact(3, [CITE_ITC, CITE_FARBER, CITE_LM_LOWER, CITE_LM_UPPER])
    return TCValue(2, 3, Status.UNSETTLED, (CITE_ITC_UNSETTLED, CITE_LINEAR_WINDOW))


# --- bound propagation -------------------------------------------------------

QUANTITIES = ("cat", "cat_G", "TC", "TC_G", "TC^G", "TC_fixed", "TC_orbit")


@dataclass
class _Fact:
    lower: float = 1
    upper: float = INF
    provenance: set = field(default_factory=set)


@dataclass(frozen=True)
class PropagationStep:
    rule: str
    quantity: str
    bound: str
    before: float
    after: float

    def to_dict(self) -> dict:
        def enc(v):
            return "inf" if math.isinf(v) else int(v)
        return {"rule": self.rule, "quantity": self.quantity, "bound": self.bound,
                "before": enc(self.before), "after": enc(self.after)}


@dataclass(frozen=True)
class PropagationReport:
    facts: dict
    steps: tuple
    iterations: int

    def to_dict(self) -> dict:
        return {"facts": {k: v.to_dict() for k, v in self.facts.items()},
                "steps": [s.to_dict() for s in self.steps],
                "iterations": self.iterations}


def _double_minus_one(v: float) -> float:
    return INF if math.isinf(v) else 2 * v - 1


def _half_plus(v: float) -> float:
    # inverse of v -> 2v - 1 on lower bounds: smallest a with 2a - 1 >= v
    return INF if math.isinf(v) else (int(v) + 2) // 2


# (kind, a, b, citation, guard); "le" means a <= b, "doubling" means
# b <= 2a - 1.  Guards receive the query and gate hypotheses: k >= 0 for a
# non-empty fixed set, k >= 1 for G-connectedness with a fixed point.
_RELATIONS = (
    ("le", "TC", "TC_G", CITE_CG_FIXED, lambda q: True),
    ("le", "TC_fixed", "TC_G", CITE_CG_FIXED, lambda q: q.k >= 0),
    ("le", "cat_G", "TC_G", CITE_CG_CAT, lambda q: q.k >= 1),
    ("doubling", "cat_G", "TC_G", CITE_CG_CAT, lambda q: q.k >= 1),
    ("le", "TC_fixed", "TC^G", CITE_LM_LOWER, lambda q: q.k >= 0),
    ("le", "TC_orbit", "TC^G", CITE_LM_LOWER, lambda q: q.k >= 0),
    ("le", "cat", "TC^G", CITE_CAT_LOWER, lambda q: q.k >= 0),
    ("le", "cat_G", "TC^G", CITE_CAT_LOWER, lambda q: q.k >= 0),
    ("doubling", "cat_G", "TC^G", CITE_LM_UPPER, lambda q: q.k >= 1),
    ("le", "cat", "TC", CITE_CAT_TC, lambda q: True),
    ("doubling", "cat", "TC", CITE_CAT_TC, lambda q: True),
)


def standard_sphere_seeds(query: SphereQuery) -> dict:
    """Seed facts for a linear sphere: sphere TC/cat, cat_G, and orbit data."""
    n, k = query.n, query.k
    seeds = {
        "cat": exact(2, [CITE_CAT_SPHERE]),
        "TC": tc_sphere(n),
    }
    if k >= 0:
        seeds["cat_G"] = exact(2, [CITE_GCAT])
    if k >= 1:
        seeds["TC_fixed"] = tc_sphere(k)
    elif k == 0:
        seeds["TC_fixed"] = infinite([CITE_TC_DISCONNECTED])
    if k == n:
        base = tc_sphere(n)
        seeds["TC_orbit"] = exact(base.value, [CITE_TRIVIAL_ORBIT, *base.provenance])
    elif 0 < k < n - 2:
        seeds["TC_orbit"] = bounded(3, INF, [CITE_ORBIT_HOMOLOGY, CITE_GLO])
    return seeds


def _as_seed(value) -> TCValue:
    if isinstance(value, TCValue):
        return value
    if isinstance(value, tuple):
        return bounded(value[0], value[1], ["seed"])
    if math.isinf(value):
        return infinite(["seed"])
    return exact(int(value), ["seed"])


def propagate_bounds(query: SphereQuery, known: dict) -> PropagationReport:
    """Fixed-point interval propagation over the TC inequalities.

    ``known`` maps quantity names (see QUANTITIES) to TCValue, an int, inf,
    or an (lower, upper) tuple.  Bounds only ever tighten; each improvement
    is logged with the citation of the rule that produced it.  Raises
    InconsistentFacts when an interval empties.
    """
    facts = {name: _Fact() for name in QUANTITIES}
    steps: list[PropagationStep] = []

    def tighten(name: str, lower=None, upper=None, cite: str = "") -> bool:
        f = facts[name]
        changed = False
        if lower is not None and lower > f.lower:
            steps.append(PropagationStep(cite, name, "lower", f.lower, lower))
            f.lower = lower
            f.provenance.add(cite)
            changed = True
        if upper is not None and upper < f.upper:
            steps.append(PropagationStep(cite, name, "upper", f.upper, upper))
            f.upper = upper
            f.provenance.add(cite)
            changed = True
        if f.lower > f.upper:
            raise InconsistentFacts(
                f"{name} narrowed to the empty interval [{f.lower}, {f.upper}] "
                f"(last rule: {cite})")
        return changed

    for name, value in known.items():
        if name not in facts:
            raise InvalidQuery(f"unknown quantity {name!r}; expected one of {QUANTITIES}")
        v = _as_seed(value)
        primary = v.provenance[0] if v.provenance else "seed"
        if tighten(name, lower=v.lower, upper=v.upper, cite=primary):
            facts[name].provenance.update(v.provenance)

    if query.k >= 0:
        tighten("TC^G", lower=2, cite=CITE_GCONTRACT)

    iterations = 0
    changed = True
    while changed:
        iterations += 1
        if iterations > 8 * len(_RELATIONS):
            raise AssertionError("bound propagation failed to reach a fixed point")
        changed = False
        for kind, a, b, cite, guard in _RELATIONS:
            if not guard(query):
                continue
            if kind == "le":
                changed |= tighten(b, lower=facts[a].lower, cite=cite)
                changed |= tighten(a, upper=facts[b].upper, cite=cite)
            else:  # b <= 2a - 1
                changed |= tighten(b, upper=_double_minus_one(facts[a].upper), cite=cite)
                changed |= tighten(a, lower=_half_plus(facts[b].lower), cite=cite)

    final = {name: bounded(f.lower, f.upper, sorted(f.provenance))
             for name, f in facts.items()}
    return PropagationReport(facts=final, steps=tuple(steps), iterations=iterations)


# --- value dispatch and tables ----------------------------------------------

INVARIANT_NAMES = ("TC", "TC_G", "TC^G", "cat_G")


def query_value(query: SphereQuery, invariant: str) -> TCValue:
    """Look up one invariant by name: TC, TC_G, TC^G or cat_G."""
    if invariant == "TC":
        return tc_sphere(query.n)
    if invariant == "TC_G":
        return tc_equivariant(query)
    if invariant == "TC^G":
        return tc_invariant(query)
    if invariant == "cat_G":
        return cat_g_sphere(query)
    raise InvalidQuery(f"unknown invariant {invariant!r}; expected one of {INVARIANT_NAMES}")


def valid_queries(max_n: int, ps) -> list[SphereQuery]:
    """All realizable (n, k, p) with 1 <= n <= max_n and 0 <= k <= n."""
    out = []
    for n in range(1, max_n + 1):
        for p in ps:
            for k in range(0, n + 1):
                try:
                    out.append(SphereQuery(n=n, k=k, p=p))
                except InvalidQuery:
                    continue
    return out


def table_rows(max_n: int, ps) -> list[dict]:
    """Value grid used by the CLI table: one row per valid (n, k, p)."""
    rows = []
    for q in valid_queries(max_n, ps):
        rows.append({
            "n": q.n, "k": q.k, "p": q.p,
            "TC": tc_sphere(q.n).render(),
            "cat_G": cat_g_sphere(q).render(),
            "TC_G": tc_equivariant(q).render(),
            "TC^G": tc_invariant(q).render(),
        })
    return rows
