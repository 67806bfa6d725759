"""Seeded Monte-Carlo verification harness.

Every constructive claim of the planner/field modules is re-checked here by
sampling: domain coverage, endpoint exactness, unit norms along paths,
planner equivariance, invariance of domain membership under the diagonal
action, field tangency, a continuity smoke bound, and consistency of the
planner's domain count with the TC oracle.

Determinism: all randomness flows from numpy's PCG64 generator seeded by a
single 64-bit seed through named per-check streams, so identical config
plus seed reproduces a bit-identical report (timing excluded).

Random pairs almost never leave U1 under the lowest-index selection rule,
so the path checks add constructed batches: antipodal pairs (x = -y) to
exercise the U2/D2 arcs, and pairs with y at or next to the poles +-e to
force D3.  For k = 0 hemisphere covers, path checks restrict to
same-hemisphere pairs: the fixed S^0 is disconnected and no equivariant
planner crosses poles (coverage itself stays total).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import planner as pl
from .action import CyclicLinearAction, fixed_basis_vector, standard_action
from .errors import (
    InvalidQuery,
    NoFixedCircle,
    NoFixedPoint,
    ParityMismatch,
    SphereTCError,
)
from .tc_oracle import SphereQuery, tc_equivariant
from .vfield import field_certificate, j_field, projection_field

# Per-check stream indices; fixed order is part of the determinism contract.
_STREAMS = {
    "coverage": 0,
    "paths_random": 1,
    "paths_antipodal": 2,
    "paths_pole": 3,
    "tangency": 4,
    "continuity": 5,
}

# batch evaluation keeps (rows x t_grid x dim) float blocks near this size
_CHUNK_FLOATS = 2_000_000


def uniform_sphere_sampler(seed: int, ambient_dim: int, count: int) -> np.ndarray:
    """Uniform points on S^(ambient_dim - 1) via normalized standard normals."""
    if ambient_dim < 1:
        raise ValueError("ambient_dim must be >= 1")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return _sample_sphere(rng, ambient_dim, count)


def _sample_sphere(rng: np.random.Generator, ambient_dim: int, count: int) -> np.ndarray:
    v = rng.standard_normal((count, ambient_dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@dataclass(frozen=True)
class VerifyConfig:
    """Sample sizes, tolerances and the seed of one verification run."""

    seed: int = 0
    samples: int = 100_000       # membership-level checks
    pair_samples: int = 10_000   # path-grid checks, per batch
    t_grid: int = 1000
    endpoint_tol: float = 1e-12
    equivariance_tol: float = 1e-9
    tangency_tol: float = 1e-12
    norm_tol: float = 1e-9
    continuity_cap: float = 1e4

    def __post_init__(self) -> None:
        for name in ("endpoint_tol", "equivariance_tol", "tangency_tol",
                     "norm_tol", "continuity_cap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "pair_samples": self.pair_samples,
            "t_grid": self.t_grid,
            "tolerances": {
                "endpoint": self.endpoint_tol,
                "equivariance": self.equivariance_tol,
                # membership semantics are fixed by the planner module
                "membership": pl.MEMBERSHIP_ETA,
                "tangency": self.tangency_tol,
                "norm": self.norm_tol,
                "continuity_cap": self.continuity_cap,
            },
        }


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float | None = None
    witness: dict | None = None
    samples: int = 0
    note: str | None = None
    elapsed_s: float = 0.0

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {"name": self.name, "passed": self.passed, "worst": self.worst,
             "witness": self.witness, "samples": self.samples, "note": self.note}
        if include_timing:
            d["elapsed_s"] = self.elapsed_s
        return d


@dataclass
class VerifyReport:
    action: dict
    planner: str
    config: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self, include_timing: bool = True) -> dict:
        return {
            "action": self.action,
            "planner": self.planner,
            "config": self.config,
            "passed": self.passed,
            "checks": [c.to_dict(include_timing) for c in self.checks],
        }

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2)


def _pair_witness(x: np.ndarray, y: np.ndarray, **extra) -> dict:
    w = {"x": [float(v) for v in x], "y": [float(v) for v in y]}
    w.update(extra)
    return w


def _check_preconditions(action: CyclicLinearAction, kind: str) -> None:
    n, k = action.sphere_dim, action.fixed_sphere_dim
    if kind == "two":
        if n % 2 == 0 or k % 2 == 0:
            raise ParityMismatch(f"two-domain planner needs odd n, odd k; got n={n}, k={k}")
        if k < 1:
            raise NoFixedPoint("two-domain planner needs k >= 1")
    elif kind == "three":
        if k < 1:
            raise NoFixedCircle(f"three-domain planner needs k >= 1, got k = {k}")
    elif kind == "hemisphere":
        if k < 0:
            raise NoFixedPoint("hemisphere planner needs k >= 0")
    else:
        raise ValueError(f"unknown planner kind {kind!r}")


def _same_hemisphere_rows(action: CyclicLinearAction, xs: np.ndarray,
                          ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    doms = pl.select_domains_batch(action, "hemisphere", xs, ys)
    same = (doms == int(pl.DomainId.W11)) | (doms == int(pl.DomainId.W22))
    return xs[same], ys[same]


def _pair_batches(action: CyclicLinearAction, kind: str, config: VerifyConfig,
                  streams) -> list[tuple[str, np.ndarray, np.ndarray]]:
    """Random pairs plus constructed batches that force the non-U1 domains."""
    dim = action.ambient_dim
    n_pairs = config.pair_samples
    rng_random = np.random.Generator(np.random.PCG64(streams[_STREAMS["paths_random"]]))
    xs = _sample_sphere(rng_random, dim, n_pairs)
    ys = _sample_sphere(rng_random, dim, n_pairs)
    if kind == "hemisphere" and action.fixed_sphere_dim < 1:
        # no equivariant transit between the poles of a disconnected S^0
        xs, ys = _same_hemisphere_rows(action, xs, ys)
    batches = [("random", xs, ys)]

    rng_anti = np.random.Generator(np.random.PCG64(streams[_STREAMS["paths_antipodal"]]))
    ya = _sample_sphere(rng_anti, dim, n_pairs)
    if kind == "three":
        # keep the arc direction well conditioned: stay away from the poles
        # that D2 excludes (D3 is forced separately by the pole batch)
        e = fixed_basis_vector(action, 0).coords
        margin = np.minimum(np.linalg.norm(ya - e, axis=1), np.linalg.norm(ya + e, axis=1))
        ya = ya[margin > 1e-3]
    if kind in ("two", "three"):
        batches.append(("antipodal", -ya, ya))
    elif kind == "hemisphere" and action.fixed_sphere_dim >= 1:
        batches.append(("antipodal", -ya, ya))

    if kind == "three":
        # pairs with y at (or within eta of) the poles +-e select D3
        rng_pole = np.random.Generator(np.random.PCG64(streams[_STREAMS["paths_pole"]]))
        e = fixed_basis_vector(action, 0).coords
        tangents = _sample_sphere(rng_pole, dim, 6)
        ys_pole = [e, -e]
        for i, t in enumerate(tangents):
            t = t - (t @ e) * e
            t /= np.linalg.norm(t)
            sign = 1.0 if i % 2 == 0 else -1.0
            ys_pole.append(sign * e + 0.3 * pl.MEMBERSHIP_ETA * t)
        yp = np.array([y / np.linalg.norm(y) for y in ys_pole])
        batches.append(("pole", -yp, yp))
    return batches


def _grid_checks(action: CyclicLinearAction, kind: str, config: VerifyConfig,
                 batches, checks: list) -> None:
    """Endpoint, norm, equivariance and domain-invariance over path grids."""
    ts = np.linspace(0.0, 1.0, config.t_grid)
    dim = action.ambient_dim
    chunk = max(1, _CHUNK_FLOATS // (config.t_grid * dim))
    eta = pl.MEMBERSHIP_ETA

    endpoint = CheckResult("endpoint", True, worst=0.0)
    norm = CheckResult("unit_norm", True, worst=0.0)
    equiv = CheckResult("equivariance", True, worst=0.0)
    inv = CheckResult("domain_invariance", True, worst=0.0)

    started = time.perf_counter()
    for batch_name, xs, ys in batches:
        total = xs.shape[0]
        values = pl.membership_values(action, kind, xs, ys)
        ambiguous = np.zeros(total, dtype=bool)
        for v in values.values():
            ambiguous |= v <= 2 * eta
        for lo in range(0, total, chunk):
            hi = min(lo + chunk, total)
            cx, cy = xs[lo:hi], ys[lo:hi]
            paths, doms = pl.paths_grid(action, kind, cx, cy, ts)

            res_start = np.linalg.norm(paths[:, 0] - cx, axis=1)
            res_end = np.linalg.norm(paths[:, -1] - cy, axis=1)
            worst_ep = float(max(res_start.max(), res_end.max()))
            if worst_ep > (endpoint.worst or 0.0):
                endpoint.worst = worst_ep
                i = int(np.argmax(np.maximum(res_start, res_end)))
                endpoint.witness = _pair_witness(cx[i], cy[i], batch=batch_name)

            norms = np.abs(np.linalg.norm(paths, axis=2) - 1.0)
            worst_n = float(norms.max())
            if worst_n > (norm.worst or 0.0):
                norm.worst = worst_n
                i, j = np.unravel_index(int(np.argmax(norms)), norms.shape)
                norm.witness = _pair_witness(cx[i], cy[i], t=float(ts[j]), batch=batch_name)

            camb = ambiguous[lo:hi]
            for g in range(1, action.p):
                m = action.matrix(g)
                gx, gy = cx @ m.T, cy @ m.T
                paths_g, doms_g = pl.paths_grid(action, kind, gx, gy, ts)
                resid = np.linalg.norm(paths @ m.T - paths_g, axis=2).max(axis=1)
                worst_eq = float(resid.max())
                if worst_eq > (equiv.worst or 0.0):
                    equiv.worst = worst_eq
                    i = int(np.argmax(resid))
                    equiv.witness = _pair_witness(cx[i], cy[i], g=g, batch=batch_name)

                mismatch = (doms != doms_g) & ~camb
                if np.any(mismatch):
                    inv.passed = False
                    inv.worst = (inv.worst or 0.0) + float(np.count_nonzero(mismatch))
                    i = int(np.flatnonzero(mismatch)[0])
                    inv.witness = _pair_witness(
                        cx[i], cy[i], g=g, batch=batch_name,
                        domain=pl.DomainId(int(doms[i])).name,
                        domain_g=pl.DomainId(int(doms_g[i])).name)
            equiv.samples += (hi - lo) * (action.p - 1)
        endpoint.samples += total
        norm.samples += total
        inv.samples += total * (action.p - 1)

    endpoint.passed = (endpoint.worst or 0.0) <= config.endpoint_tol
    norm.passed = (norm.worst or 0.0) <= config.norm_tol
    equiv.passed = equiv.passed and (equiv.worst or 0.0) <= config.equivariance_tol
    elapsed = time.perf_counter() - started
    for c in (endpoint, norm, equiv, inv):
        c.elapsed_s = elapsed / 4.0
        checks.append(c)


def _coverage_check(action: CyclicLinearAction, kind: str, config: VerifyConfig,
                    stream) -> CheckResult:
    started = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(stream))
    xs = _sample_sphere(rng, action.ambient_dim, config.samples)
    ys = _sample_sphere(rng, action.ambient_dim, config.samples)
    values = pl.membership_values(action, kind, xs, ys)
    best = np.maximum.reduce(list(values.values()))
    covered = best > pl.MEMBERSHIP_ETA
    result = CheckResult("coverage", bool(np.all(covered)),
                         worst=float(best.min()), samples=config.samples)
    if not result.passed:
        i = int(np.flatnonzero(~covered)[0])
        result.witness = _pair_witness(xs[i], ys[i])
    result.elapsed_s = time.perf_counter() - started
    return result


def _tangency_check(action: CyclicLinearAction, kind: str, config: VerifyConfig,
                    stream) -> CheckResult:
    started = time.perf_counter()
    seed = int(np.random.Generator(np.random.PCG64(stream)).integers(2**63))
    fields = []
    if kind == "two":
        fields.append(("rotation", j_field(action)))
    elif kind == "three":
        for i in range(2):
            fields.append((f"projection_e{i}",
                           projection_field(action, fixed_basis_vector(action, i))))
    if not fields:
        return CheckResult("tangency", True, samples=0,
                           note="hemisphere planner uses no vector field",
                           elapsed_s=time.perf_counter() - started)
    worst = 0.0
    witness = None
    passed = True
    n_samples = max(1000, config.pair_samples // 10)
    for label, fld in fields:
        cert = field_certificate(action, fld, seed=seed, samples=n_samples)
        bad = cert.tangency_max > config.tangency_tol or cert.equivariance_max > 1e-12
        if fld.kind == "rotation":
            bad = bad or abs(cert.min_norm - 1.0) > 1e-12 or cert.commutator_max != 0.0
        if cert.tangency_max > worst:
            worst = cert.tangency_max
            witness = {"field": label, **cert.to_dict()}
        passed = passed and not bad
    return CheckResult("tangency", passed, worst=worst, witness=witness,
                       samples=n_samples * len(fields),
                       elapsed_s=time.perf_counter() - started)


def _continuity_check(action: CyclicLinearAction, kind: str, config: VerifyConfig,
                      stream) -> CheckResult:
    """Smoke bound sup_t |path(x,y) - path(x',y')| <= C * delta within a domain.

    Pairs near domain boundaries (selected margin <= 1e-3) are skipped: the
    planners are genuinely ill-conditioned there and the bound is a smoke
    test, not a proof.
    """
    started = time.perf_counter()
    delta = 1e-5
    rng = np.random.Generator(np.random.PCG64(stream))
    count = min(config.pair_samples, 2000)
    dim = action.ambient_dim
    xs = _sample_sphere(rng, dim, count)
    ys = _sample_sphere(rng, dim, count)
    if kind == "hemisphere" and action.fixed_sphere_dim < 1:
        xs, ys = _same_hemisphere_rows(action, xs, ys)
    values = pl.membership_values(action, kind, xs, ys)
    doms = pl.select_domains_batch(action, kind, xs, ys)
    margins = np.array([values[pl.DomainId(int(d))][i] for i, d in enumerate(doms)])
    keep = margins > 1e-3
    xs, ys, doms = xs[keep], ys[keep], doms[keep]

    def perturb(points):
        t = rng.standard_normal(points.shape)
        t -= np.sum(t * points, axis=1, keepdims=True) * points
        t /= np.linalg.norm(t, axis=1, keepdims=True)
        moved = points + delta * t
        return moved / np.linalg.norm(moved, axis=1, keepdims=True)

    xs2, ys2 = perturb(xs), perturb(ys)
    ts = np.linspace(0.0, 1.0, max(64, config.t_grid // 8))
    per_domain: dict[str, float] = {}
    worst = 0.0
    witness = None
    chunk = max(1, _CHUNK_FLOATS // (ts.size * dim))
    for lo in range(0, xs.shape[0], chunk):
        hi = min(lo + chunk, xs.shape[0])
        d = doms[lo:hi]
        p1, _ = pl.paths_grid(action, kind, xs[lo:hi], ys[lo:hi], ts, domains=d)
        p2, _ = pl.paths_grid(action, kind, xs2[lo:hi], ys2[lo:hi], ts, domains=d)
        dist = np.max(np.linalg.norm(p1 - p2, axis=2), axis=1)
        ratios = dist / delta
        for dom in np.unique(d):
            name = pl.DomainId(int(dom)).name
            r = float(ratios[d == dom].max())
            per_domain[name] = max(per_domain.get(name, 0.0), r)
        i = int(np.argmax(ratios))
        if ratios[i] > worst:
            worst = float(ratios[i])
            witness = _pair_witness(xs[lo + i], ys[lo + i],
                                    domain=pl.DomainId(int(d[i])).name)
    note = json.dumps({k: per_domain[k] for k in sorted(per_domain)}, sort_keys=True)
    return CheckResult("continuity", worst <= config.continuity_cap, worst=worst,
                       witness=witness, samples=int(xs.shape[0]),
                       note=f"max |dpath|/|dquery| per domain: {note}",
                       elapsed_s=time.perf_counter() - started)


def _oracle_check(action: CyclicLinearAction, kind: str) -> CheckResult:
    started = time.perf_counter()
    k = action.fixed_sphere_dim
    if k < 1:
        return CheckResult(
            "oracle_consistency", True, samples=0,
            note="k < 1: equivariant TC is infinite or undefined; no finite witness",
            elapsed_s=time.perf_counter() - started)
    selected = pl.select_planner_kind(action)
    count = len(pl.planner_domains(action, selected))
    upper = tc_equivariant(SphereQuery.of_action(action)).upper
    note = None if selected == kind else (
        f"forced planner {kind!r}; witness uses the selected planner {selected!r}")
    result = CheckResult("oracle_consistency", count == upper, worst=float(count),
                         samples=1, note=note,
                         elapsed_s=time.perf_counter() - started)
    if not result.passed:
        result.witness = {"domain_count": count, "oracle_upper": upper}
    return result


def run_verify(action: CyclicLinearAction, planner_kind: str = "auto",
               config: VerifyConfig | None = None) -> VerifyReport:
    """Run the full check suite; planner failures become report entries."""
    config = config or VerifyConfig()
    report = VerifyReport(action=action.to_dict(), planner=planner_kind,
                          config=config.to_dict())
    kind = planner_kind
    try:
        if kind == "auto":
            kind = pl.select_planner_kind(action)
        _check_preconditions(action, kind)
    except SphereTCError as exc:
        report.checks.append(CheckResult(
            "planner_precondition", False,
            witness={"error": type(exc).__name__, "message": str(exc)}))
        return report
    report.planner = kind

    streams = np.random.SeedSequence(config.seed).spawn(len(_STREAMS))
    report.checks.append(_coverage_check(action, kind, config,
                                         streams[_STREAMS["coverage"]]))
    batches = _pair_batches(action, kind, config, streams)
    _grid_checks(action, kind, config, batches, report.checks)
    report.checks.append(_tangency_check(action, kind, config,
                                         streams[_STREAMS["tangency"]]))
    report.checks.append(_continuity_check(action, kind, config,
                                           streams[_STREAMS["continuity"]]))
    report.checks.append(_oracle_check(action, kind))
    return report


def standard_suite(max_n: int, ps=(2, 3, 5), k_min: int = 0,
                   include_trivial: bool = False) -> list[CyclicLinearAction]:
    """Canonical actions over the valid (n, k, p) grid, one per query."""
    actions = []
    for n in range(1, max_n + 1):
        k_top = n if include_trivial else n - 1
        for k in range(k_min, k_top + 1):
            for p in ps:
                try:
                    SphereQuery(n=n, k=k, p=p)
                except InvalidQuery:
                    continue
                actions.append(standard_action(n, k, p))
    return actions
