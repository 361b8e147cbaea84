"""Norm evaluation engine for all space descriptors.

Every descriptor gets two primitives:

* ``norm(x)`` - the norm value (certified upper bound for optimizer
  branches, exact up to rounding for closed forms and the DP);
* ``norming(x)`` - a dual-feasible functional g with ||g||_* <= 1 and
  <x, g> equal to the norm up to the evaluator tolerance.

The two are mutually recursive across the descriptor tree and together
drive the Calderon-product solver: the norm of X^(1-t) Y^t at z is
minimized over the log-parameterization x_i = |z_i| e^{t s_i},
y_i = |z_i| e^{-(1-t) s_i} (which enforces |x|^(1-t) |y|^t = |z|
identically), and every iterate's norming functionals produce the
certified lower bound

    sum_i |z_i| gx_i^(1-t) gy_i^t  <=  ||z||_Z,

valid for any gx, gy in the respective dual balls.  The solver
terminates only when upper - lower <= tol * upper, else it raises a
ConvergenceError carrying the bracket.

Dual norms of the Schlumprecht space (and, generically, of any space
with an exact norming oracle) are computed by a cutting-plane LP over
the polyhedral unit ball: maximize <g, x> subject to lazily generated
partition-tree constraints; the separation oracle is the DP itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy import optimize as _sciopt

from .descriptors import (
    CalderonProduct,
    Convexified,
    Dual,
    DualSchlumprecht,
    Lp,
    Schlumprecht,
    SpaceDescriptor,
    YDistortion,
    dual_descriptor,
    space_to_str,
)
from .errors import (
    ConvergenceError,
    UnsupportedSpaceError,
    ValidationError,
)
from .schlumprecht import DEFAULT_DP_CAP, s_norm, s_norm_weights
from .vectors import SeqVector, lp_norm, pointwise_power

__all__ = [
    "NormingResult",
    "Factorization",
    "NormEvaluator",
    "get_evaluator",
    "calderon_norm",
    "contains_non_lattice",
]

# default relative tolerances by evaluation branch
TOL_CLOSED = 1e-12
TOL_DP = 1e-9
TOL_ITERATIVE = 1e-6

DEFAULT_BUDGET = 100_000


class NormingResult(NamedTuple):
    value: float
    functional: SeqVector
    pairing: float

    @property
    def gap(self) -> float:
        return self.value - self.pairing


@dataclass
class Factorization:
    """Witness |z| = |x|^(1-theta) |y|^theta with balanced norms."""

    x: SeqVector
    y: SeqVector
    achieved_value: float
    lower_bound: float

    @property
    def relative_gap(self) -> float:
        if self.achieved_value == 0.0:
            return 0.0
        return (self.achieved_value - self.lower_bound) / self.achieved_value


def contains_non_lattice(d: SpaceDescriptor) -> bool:
    if isinstance(d, YDistortion):
        return True
    if isinstance(d, Convexified):
        return contains_non_lattice(d.base)
    if isinstance(d, CalderonProduct):
        return contains_non_lattice(d.x) or contains_non_lattice(d.y)
    if isinstance(d, Dual):
        return contains_non_lattice(d.base)
    return False


def _normalize(d: SpaceDescriptor) -> SpaceDescriptor:
    """Push Dual constructors down to closed forms."""
    if isinstance(d, Dual):
        return _normalize(dual_descriptor(_normalize(d.base)))
    if isinstance(d, Convexified):
        return Convexified(_normalize(d.base), d.p)
    if isinstance(d, CalderonProduct):
        return CalderonProduct(_normalize(d.x), _normalize(d.y), d.theta)
    return d


class NormEvaluator:
    """Deterministic norm/norming evaluator with a per-vector cache."""

    def __init__(
        self,
        descriptor: SpaceDescriptor,
        tol: Optional[float] = None,
        dp_cap: int = DEFAULT_DP_CAP,
        budget: int = DEFAULT_BUDGET,
    ):
        self.descriptor = descriptor
        self.impl = _normalize(descriptor)
        self.dp_cap = dp_cap
        self.budget = budget
        self.tol = tol if tol is not None else self._default_tol()
        self._norm_cache: Dict[tuple, float] = {}
        self._sol_cache: Dict[tuple, "_CalderonSolution"] = {}
        self._dual_cuts: Dict[int, List[np.ndarray]] = {}
        self._children: Dict[str, NormEvaluator] = {}

    # -- configuration ----------------------------------------------------

    def _default_tol(self) -> float:
        d = self.impl
        if isinstance(d, (Lp, YDistortion)):
            return TOL_CLOSED
        if isinstance(d, (Schlumprecht, DualSchlumprecht)):
            return TOL_DP
        if isinstance(d, Convexified):
            return TOL_DP
        return TOL_ITERATIVE

    def _child(self, name: str, desc: SpaceDescriptor) -> "NormEvaluator":
        ev = self._children.get(name)
        if ev is None:
            tol = max(self.tol * 0.25, 1e-10)
            ev = get_evaluator(desc, tol=tol, dp_cap=self.dp_cap, budget=self.budget)
            self._children[name] = ev
        return ev

    def _key(self, x: SeqVector, signed: bool) -> tuple:
        if signed:
            return x.canonical()
        return tuple((i, abs(v)) for i, v in x.canonical())

    # -- norm ---------------------------------------------------------------

    def norm(self, x: SeqVector) -> float:
        if not x:
            return 0.0
        d = self.impl
        if isinstance(d, Lp):
            return lp_norm(x, d.p)
        if isinstance(d, YDistortion):
            fam = d.family
            hit = max(abs(_dot(x, z)) for z in fam.members)
            return max(lp_norm(x, 2.0), fam.r * hit)
        key = self._key(x, signed=False)
        got = self._norm_cache.get(key)
        if got is not None:
            return got
        if isinstance(d, Schlumprecht):
            val = s_norm(x, d.gauge, cap=self.dp_cap)[0]
        elif isinstance(d, DualSchlumprecht):
            val, _, _ = self._schlumprecht_dual(x)
        elif isinstance(d, Convexified):
            base = self._child("base", d.base)
            val = base.norm(pointwise_power(x, d.p)) ** (1.0 / d.p)
        elif isinstance(d, CalderonProduct):
            val = self._solve_product(x).value
        else:  # pragma: no cover
            raise UnsupportedSpaceError(f"cannot evaluate {space_to_str(d)}")
        self._norm_cache[key] = val
        return val

    # -- norming functionals -------------------------------------------------

    def norming(self, x: SeqVector) -> NormingResult:
        if not x:
            return NormingResult(0.0, SeqVector(), 0.0)
        d = self.impl
        if isinstance(d, Lp):
            return _lp_norming(x, d.p)
        if isinstance(d, Schlumprecht):
            val, cert = s_norm(x, d.gauge, cap=self.dp_cap)
            func = cert.functional()
            return NormingResult(val, func, _dot(x, func))
        if isinstance(d, DualSchlumprecht):
            val, maximizer, _ = self._schlumprecht_dual(x)
            return NormingResult(val, maximizer, _dot(x, maximizer))
        if isinstance(d, Convexified):
            return self._convexified_norming(x, d)
        if isinstance(d, CalderonProduct):
            sol = self._solve_product(x)
            func = SeqVector(
                (i, math.copysign(a, x[i]))
                for i, a in zip(sol.support, sol.gx ** (1.0 - d.theta) * sol.gy**d.theta)
            )
            return NormingResult(sol.value, func, _dot(x, func))
        raise UnsupportedSpaceError(f"no norming functional for {space_to_str(d)}")

    def _convexified_norming(self, x: SeqVector, d: Convexified) -> NormingResult:
        base = self._child("base", d.base)
        u = pointwise_power(x, d.p)
        rb = base.norming(u)
        nb = rb.value
        val = nb ** (1.0 / d.p)
        if val == 0.0:
            return NormingResult(0.0, SeqVector(), 0.0)
        scale = nb ** ((d.p - 1.0) / d.p)
        func = SeqVector(
            (i, math.copysign(abs(x[i]) ** (d.p - 1.0) * abs(rb.functional[i]) / scale, x[i]))
            for i, _ in x
        )
        return NormingResult(val, func, _dot(x, func))

    # -- Schlumprecht dual: cutting-plane LP ---------------------------------

    def _schlumprecht_dual(self, g: SeqVector) -> Tuple[float, SeqVector, float]:
        assert isinstance(self.impl, DualSchlumprecht)
        oracle = self._child("primal", Schlumprecht(self.impl.gauge))
        return _cutting_plane_dual(oracle, g, self._dual_cuts)

    # -- Calderon product solver ---------------------------------------------

    def _solve_product(self, z: SeqVector) -> "_CalderonSolution":
        d = self.impl
        assert isinstance(d, CalderonProduct)
        key = self._key(z, signed=False)
        sol = self._sol_cache.get(key)
        if sol is None:
            evx = self._child("x", d.x)
            evy = self._child("y", d.y)
            sol = _calderon_solve(evx, evy, d.theta, z, self.tol, self.budget)
            self._sol_cache[key] = sol
        if not sol.converged:
            raise ConvergenceError(
                f"Calderon solver did not certify {space_to_str(d)} "
                f"within {self.budget} norm evaluations",
                lower=sol.lower,
                upper=sol.value,
            )
        return sol

    def factorize(self, z: SeqVector) -> Tuple[float, Factorization]:
        """Norm plus the balanced witness factorization (products only)."""
        d = self.impl
        if not isinstance(d, CalderonProduct):
            raise UnsupportedSpaceError(
                f"factorize needs a Calderon product, got {space_to_str(d)}"
            )
        sol = self._solve_product(z)
        return sol.value, sol.factorization(d.theta)


def _dot(x: SeqVector, g: SeqVector) -> float:
    if len(x) > len(g):
        x, g = g, x
    return math.fsum(v * g[i] for i, v in x)


def _lp_norming(x: SeqVector, p: float) -> NormingResult:
    if math.isinf(p):
        idx = min(i for i, v in x if abs(v) == max(abs(w) for _, w in x))
        func = SeqVector.basis(idx, math.copysign(1.0, x[idx]))
        return NormingResult(abs(x[idx]), func, abs(x[idx]))
    if p == 1.0:
        func = SeqVector((i, math.copysign(1.0, v)) for i, v in x)
        val = lp_norm(x, 1.0)
        return NormingResult(val, func, _dot(x, func))
    val = lp_norm(x, p)
    func = SeqVector(
        (i, math.copysign((abs(v) / val) ** (p - 1.0), v)) for i, v in x
    )
    return NormingResult(val, func, _dot(x, func))


# -- cutting-plane dual norm ------------------------------------------------


def _cutting_plane_dual(
    oracle: NormEvaluator,
    g: SeqVector,
    cut_pool: Dict[int, List[np.ndarray]],
    feas_tol: float = 1e-9,
    gap_tol: float = 1e-7,
    max_rounds: int = 400,
) -> Tuple[float, SeqVector, float]:
    """max { <x, g> : ||x||_oracle <= 1 } with lazily generated cuts.

    Cuts are functionals with dual norm at most one, so each LP value is
    an upper bound; the final iterate rescaled onto the unit sphere is a
    feasible maximizer, giving a certified two-sided bracket (width
    feas_tol on polyhedral balls, where the oracle terminates the loop,
    and gap_tol on smooth ones, where the bracket closes gradually).
    Cut rows live in support-position space and are shared across
    vectors of the same support size (all implemented spaces are
    spreading-invariant).
    """
    support = g.support
    n = len(support)
    c = np.array([abs(g[i]) for i in support])
    scale = float(c.max())  # dual norms are homogeneous; keep the LP well scaled
    c = c / scale
    unit = oracle.norm(SeqVector.basis(1, 1.0))
    bounds = [(0.0, 1.0 / unit)] * n
    cuts = cut_pool.setdefault(n, [])

    best_val, best_vec = 0.0, SeqVector()
    lpval = math.inf
    healed = False
    for _ in range(max_rounds):
        a_ub = np.vstack(cuts) if cuts else None
        b_ub = np.ones(len(cuts)) if cuts else None
        res = _sciopt.linprog(-c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if res.status != 0:
            raise ConvergenceError(
                f"dual-norm LP failed with status {res.status}", best_val, lpval
            )
        if not healed and cuts and float(c @ np.maximum(res.x, 0.0)) < best_val * (1 - 1e-9):
            # a relaxation value below a feasible value means the shared
            # cut pool degraded numerically; rebuild it once from scratch
            cuts.clear()
            healed = True
            continue
        xstar = np.maximum(res.x, 0.0)
        lpval = float(c @ xstar)
        vec = SeqVector(zip(support, xstar))
        nv = oracle.norm(vec) if vec else 0.0
        if nv <= 1.0 + feas_tol:
            fix = 1.0 / nv if nv > 1.0 else 1.0
            return scale * lpval * fix, vec * fix, scale * lpval
        nr = oracle.norming(vec)
        row = np.array([abs(nr.functional[i]) for i in support])
        if best_val < lpval / nv:
            best_val, best_vec = lpval / nv, vec * (1.0 / nv)
        if lpval - best_val <= gap_tol * max(lpval, 1.0):
            return scale * best_val, best_vec, scale * lpval
        if float(row @ xstar) <= 1.0 + 0.5 * feas_tol:
            raise ConvergenceError("dual-norm LP stalled (oracle cut did not separate)",
                                   scale * best_val, scale * lpval)
        cuts.append(row)
    raise ConvergenceError("dual-norm LP exceeded round limit",
                           scale * best_val, scale * lpval)


# -- Calderon product solver --------------------------------------------------


@dataclass
class _CalderonSolution:
    support: Tuple[int, ...]
    v: np.ndarray
    s: np.ndarray
    value: float  # min observed balanced value (certified upper bound)
    lower: float
    nx: float
    ny: float
    gx: np.ndarray  # best certifying dual pair (unit dual balls)
    gy: np.ndarray
    evals: int
    converged: bool

    def factorization(self, theta: float) -> Factorization:
        xv = self.v * np.exp(theta * self.s)
        yv = self.v * np.exp(-(1.0 - theta) * self.s)
        # rebalance so both norms equal the achieved value
        c = math.log(self.ny / self.nx) if self.nx > 0 and self.ny > 0 else 0.0
        xv = xv * math.exp(theta * c)
        yv = yv * math.exp(-(1.0 - theta) * c)
        return Factorization(
            SeqVector(zip(self.support, xv)),
            SeqVector(zip(self.support, yv)),
            self.value,
            self.lower,
        )


class _BudgetExhausted(Exception):
    pass


def _calderon_solve(
    evx: NormEvaluator,
    evy: NormEvaluator,
    theta: float,
    z: SeqVector,
    tol: float,
    budget: int,
) -> _CalderonSolution:
    support = z.support
    v_raw = np.array([abs(z[i]) for i in support])
    zscale = float(v_raw.max())  # homogeneity: solve at unit scale
    v = v_raw / zscale
    n = len(support)
    thc = 1.0 - theta
    bound = 40.0 / max(theta, thc)

    pool_x: List[np.ndarray] = []
    pool_y: List[np.ndarray] = []
    seen_x: set = set()
    seen_y: set = set()
    history: List[Tuple[np.ndarray, float, np.ndarray, np.ndarray, np.ndarray]] = []
    state = {
        "evals": 0,
        "best_u": math.inf,
        "best": None,  # (s, nx, ny)
        "lower": 0.0,
    }

    def record_pool(pool: List[np.ndarray], arr: np.ndarray) -> None:
        seen = seen_x if pool is pool_x else seen_y
        key = np.round(arr, 12).tobytes()
        if key in seen:
            return
        seen.add(key)
        pool.append(arr)
        if len(pool) > 48:
            del pool[0]

    def flat_candidates(vals: np.ndarray, ev: NormEvaluator) -> List[np.ndarray]:
        # extra dual candidates for sup-norm sides: uniform weight over
        # near-maximal coordinates (any convex mix of vertices is feasible)
        if not (isinstance(ev.impl, Lp) and math.isinf(ev.impl.p)):
            return []
        m = vals.max()
        out = []
        for delta in (1e-12, 1e-9, 1e-6, 1e-3):
            mask = vals >= (1.0 - delta) * m
            k = int(mask.sum())
            if k > 1:
                out.append(mask.astype(float) / k)
        return out

    def norming_arr(ev: NormEvaluator, vals: np.ndarray) -> Tuple[float, np.ndarray]:
        d = ev.impl
        if isinstance(d, Lp):  # vals > 0 by construction
            if math.isinf(d.p):
                j = int(np.argmax(vals))
                g = np.zeros(n)
                g[j] = 1.0
                return float(vals[j]), g
            if d.p == 1.0:
                return float(vals.sum()), np.ones(n)
            nv = float(np.linalg.norm(vals, d.p))
            return nv, (vals / nv) ** (d.p - 1.0)
        if isinstance(d, Schlumprecht) and n <= ev.dp_cap:
            nv, w = s_norm_weights([float(t) for t in vals], d.gauge)
            return nv, np.array(w)
        res = ev.norming(SeqVector(zip(support, vals)))
        return res.value, np.array([abs(res.functional[i]) for i in support])

    def eval_point(s: np.ndarray) -> Tuple[float, np.ndarray]:
        if state["evals"] >= budget:
            raise _BudgetExhausted
        state["evals"] += 2
        xv = v * np.exp(theta * s)
        yv = v * np.exp(-thc * s)
        nx, gx = norming_arr(evx, xv)
        ny, gy = norming_arr(evy, yv)
        record_pool(pool_x, gx)
        record_pool(pool_y, gy)
        for cand in flat_candidates(xv, evx):
            record_pool(pool_x, cand)
        for cand in flat_candidates(yv, evy):
            record_pool(pool_y, cand)
        phi = thc * math.log(nx) + theta * math.log(ny)
        u = math.exp(phi)
        if u < state["best_u"]:
            state["best_u"] = u
            state["best"] = (s.copy(), nx, ny)
        grad = theta * thc * (xv * gx / nx - yv * gy / ny)
        history.append((s.copy(), phi, grad, gx, gy))
        if len(history) > 400:
            del history[0]
        return phi, grad

    best_pair: List[np.ndarray] = []

    def certified(apply_refresh: bool = True) -> bool:
        if apply_refresh and pool_x and pool_y:
            cands_x = pool_x + ([np.mean(pool_x, axis=0)] if len(pool_x) > 1 else [])
            cands_y = pool_y + ([np.mean(pool_y, axis=0)] if len(pool_y) > 1 else [])
            ax = np.asarray(cands_x) ** thc * v  # rows scaled by |z|
            by = np.asarray(cands_y) ** theta
            lb = ax @ by.T
            i, j = np.unravel_index(int(np.argmax(lb)), lb.shape)
            if lb[i, j] > state["lower"] or not best_pair:
                state["lower"] = max(state["lower"], float(lb[i, j]))
                best_pair[:] = [cands_x[i], cands_y[j]]
        u = state["best_u"]
        return u - state["lower"] <= tol * u

    def kkt_mixture() -> None:
        # At a kinked optimum the certifying pair is a convex mixture of
        # the active subgradient functionals.  Recover the weights from
        # the stationarity system sum_k lam_k x*g_k/Nx = sum_m mu_m
        # y*g_m/Ny (an LP minimizing the residual), over functionals
        # collected near the incumbent.
        s_best, nx_b, ny_b = state["best"]
        xv = v * np.exp(theta * s_best)
        yv = v * np.exp(-thc * s_best)
        for r in (1e-7, 1e-5, 1e-3, 1e-1):
            gxs: List[np.ndarray] = []
            gys: List[np.ndarray] = []
            seen_gx: set = set()
            seen_gy: set = set()
            for sj, _, _, gxj, gyj in history:
                if np.max(np.abs(sj - s_best)) > r:
                    continue
                kx = np.round(gxj, 12).tobytes()
                ky = np.round(gyj, 12).tobytes()
                if kx not in seen_gx and len(gxs) < 40:
                    seen_gx.add(kx)
                    gxs.append(gxj)
                if ky not in seen_gy and len(gys) < 40:
                    seen_gy.add(ky)
                    gys.append(gyj)
            if len(gxs) + len(gys) < 3:
                continue
            kx, ky = len(gxs), len(gys)
            xi = np.array([xv * g / max(float(np.dot(xv, g)), 1e-300) for g in gxs])
            eta = np.array([yv * g / max(float(np.dot(yv, g)), 1e-300) for g in gys])
            nv = kx + ky + 1
            c_lp = np.zeros(nv)
            c_lp[-1] = 1.0
            rows = []
            rhs = []
            for i in range(n):
                row = np.zeros(nv)
                row[:kx] = xi[:, i]
                row[kx : kx + ky] = -eta[:, i]
                row[-1] = -1.0
                rows.append(row)
                rhs.append(0.0)
                rows.append(-row.copy())
                rows[-1][-1] = -1.0
                rhs.append(0.0)
            a_eq = np.zeros((2, nv))
            a_eq[0, :kx] = 1.0
            a_eq[1, kx : kx + ky] = 1.0
            res = _sciopt.linprog(
                c_lp,
                A_ub=np.array(rows),
                b_ub=np.array(rhs),
                A_eq=a_eq,
                b_eq=np.ones(2),
                bounds=[(0.0, None)] * (nv - 1) + [(0.0, None)],
                method="highs",
            )
            if res.status != 0:
                continue
            lam = np.maximum(res.x[:kx], 0.0)
            mu = np.maximum(res.x[kx : kx + ky], 0.0)
            if lam.sum() > 0 and mu.sum() > 0:
                record_pool(pool_x, sum(l * g for l, g in zip(lam / lam.sum(), gxs)))
                record_pool(pool_y, sum(m * g for m, g in zip(mu / mu.sum(), gys)))

    def deep_certify() -> bool:
        if certified():
            return True
        kkt_mixture()
        return certified()

    def kelley_phase(rounds: int = 200) -> None:
        # Cutting-plane descent with an adaptive trust box.  The LP duals
        # give convex mixtures of recent norming functionals, fed back
        # into the certification pools (they certify flat optima).
        radius = 4.0
        for k in range(rounds):
            cuts = history[-120:]
            s_best = state["best"][0]
            lo = np.maximum(s_best - radius, -bound)
            hi = np.minimum(s_best + radius, bound)
            c_lp = np.zeros(n + 1)
            c_lp[n] = 1.0
            a_ub = np.zeros((len(cuts), n + 1))
            b_ub = np.zeros(len(cuts))
            for j, (sj, fj, gj, _, _) in enumerate(cuts):
                a_ub[j, :n] = gj
                a_ub[j, n] = -1.0
                b_ub[j] = float(gj @ sj) - fj
            lp_bounds = [(lo[i], hi[i]) for i in range(n)] + [(None, None)]
            res = _sciopt.linprog(
                c_lp, A_ub=a_ub, b_ub=b_ub, bounds=lp_bounds, method="highs"
            )
            if res.status != 0:
                return
            if res.ineqlin is not None:
                lam = np.abs(np.asarray(res.ineqlin.marginals))
                tot = lam.sum()
                if tot > 0:
                    lam = lam / tot
                    record_pool(pool_x, sum(l * c[3] for l, c in zip(lam, cuts)))
                    record_pool(pool_y, sum(l * c[4] for l, c in zip(lam, cuts)))
            prev_best = state["best_u"]
            phi_new, _ = eval_point(np.asarray(res.x[:n]))
            if math.exp(phi_new) < prev_best - 1e-14 * prev_best:
                radius = min(radius * 1.6, 16.0)
            else:
                radius = max(radius * 0.5, 1e-3)
            if k % 5 == 4 and certified():
                return
        certified()

    s0 = np.zeros(n)
    try:
        eval_point(s0)
        if not certified():
            _sciopt.minimize(
                eval_point,
                s0,
                jac=True,
                method="L-BFGS-B",
                bounds=[(-bound, bound)] * n,
                options={"maxiter": 80, "ftol": 1e-15, "gtol": 1e-12},
            )
        if not deep_certify():
            kelley_phase()
        if not deep_certify():
            _sciopt.minimize(
                lambda s: eval_point(np.clip(s, -bound, bound))[0],
                state["best"][0],
                method="Nelder-Mead",
                options={"maxfev": 1500, "xatol": 1e-13, "fatol": 1e-16},
            )
            deep_certify()
        if not certified():
            _polyak_phase(eval_point, certified, state, bound, tol, iters=300)
        if not deep_certify():
            kelley_phase(rounds=400)
            deep_certify()
    except _BudgetExhausted:
        deep_certify()

    s_best, nx, ny = state["best"]
    if not best_pair:
        best_pair[:] = [pool_x[0], pool_y[0]]
    return _CalderonSolution(
        support=support,
        v=v_raw,
        s=s_best,
        value=zscale * state["best_u"],
        lower=zscale * state["lower"],
        nx=zscale * nx,
        ny=zscale * ny,
        gx=best_pair[0],
        gy=best_pair[1],
        evals=state["evals"],
        converged=certified(apply_refresh=False),
    )


def _polyak_phase(eval_point, certified, state, bound, tol, iters: int = 2000) -> None:
    s = state["best"][0].copy()
    for k in range(iters):
        phi, grad = eval_point(s)
        gn2 = float(np.dot(grad, grad))
        if gn2 <= 1e-30:
            break
        target = math.log(max(state["lower"], 1e-300))
        step = (phi - target) / gn2
        step = min(step, 10.0 / math.sqrt(gn2))
        s = np.clip(s - step * grad, -bound, bound)
        if k % 10 == 9 and certified():
            return
    certified()


# -- public API ----------------------------------------------------------------


_registry: Dict[tuple, NormEvaluator] = {}


def get_evaluator(
    descriptor: SpaceDescriptor,
    tol: Optional[float] = None,
    dp_cap: int = DEFAULT_DP_CAP,
    budget: int = DEFAULT_BUDGET,
) -> NormEvaluator:
    """Shared evaluator instances (caches persist across calls)."""
    key = (descriptor, tol, dp_cap, budget)
    ev = _registry.get(key)
    if ev is None:
        ev = NormEvaluator(descriptor, tol=tol, dp_cap=dp_cap, budget=budget)
        _registry[key] = ev
    return ev


def convexified_norm(base: SpaceDescriptor, p: float, x: SeqVector) -> float:
    """The p-convexification N_base(|x|^p)^(1/p) of a base lattice norm."""
    if p == 1.0:
        return get_evaluator(base).norm(x)
    return get_evaluator(Convexified(base, p)).norm(x)


def calderon_norm(
    x_space: SpaceDescriptor,
    y_space: SpaceDescriptor,
    theta: float,
    z: SeqVector,
    tol: float = TOL_ITERATIVE,
    budget: int = DEFAULT_BUDGET,
) -> Tuple[float, Factorization]:
    """The Calderon product norm of z with a balanced witness.

    Raises UnsupportedSpaceError for non-lattice factors, ValidationError
    for an empty z, and ConvergenceError (carrying the bracket) if the
    certified gap cannot be closed within the evaluation budget.
    """
    if contains_non_lattice(x_space) or contains_non_lattice(y_space):
        raise UnsupportedSpaceError("Calderon product factors must be lattice norms")
    if not z:
        raise ValidationError("Calderon norm needs a nonzero vector")
    desc = CalderonProduct(x_space, y_space, theta)
    ev = get_evaluator(desc, tol=tol, budget=budget)
    return ev.factorize(z)
