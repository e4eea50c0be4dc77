"""Design-space search: normalization helpers, a full-factorial sweep harness,
a steady-state hypervolume-selection multi-objective EA, and a constrained
evolution strategy with stochastic ranking.

Both optimizers are deterministic under a fixed seed: a single RNG drives
every draw and evaluations happen in a fixed order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np


class OptimizerError(ValueError):
    pass


def normalize(values) -> np.ndarray:
    """Elementwise division by the maximum; requires a positive maximum."""
    v = np.asarray(values, dtype=float)
    m = float(np.max(v))
    if m <= 0.0:
        raise OptimizerError("normalize needs a positive maximum")
    return v / m


def combine(t1, t2, w1: float) -> np.ndarray:
    """Weighted blend of two normalized objective grids, renormalized."""
    if not (0.0 <= w1 <= 1.0):
        raise OptimizerError("weight must lie in [0, 1]")
    a = normalize(t1)
    b = normalize(t2)
    if a.shape != b.shape:
        raise OptimizerError("objective grids must have equal shape")
    return normalize((1.0 - w1) * a + w1 * b)


def inverse_mbsd(values, cap: float = 1e6) -> np.ndarray:
    """Elementwise reciprocal; zeros (perfect stealth) map to the cap."""
    v = np.asarray(values, dtype=float)
    out = np.full_like(v, cap)
    nz = v > 0.0
    out[nz] = 1.0 / v[nz]
    return out


@dataclass(frozen=True)
class SweepAxis:
    name: str
    lo: float
    hi: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepGrid:
    axes: tuple
    fixed: dict

    def points(self):
        grids = [ax.values() for ax in self.axes]
        names = [ax.name for ax in self.axes]
        for combo in itertools.product(*grids):
            point = dict(self.fixed)
            point.update(dict(zip(names, combo)))
            yield point


def sweep(grid: SweepGrid, evaluator) -> list[dict]:
    """Full-factorial evaluation; per-point failures are recorded, the sweep
    continues."""
    rows = []
    for point in grid.points():
        row = dict(point)
        try:
            row.update(evaluator(point))
            row["error"] = ""
        except Exception as exc:  # noqa: BLE001 - row-level fault isolation
            row["error"] = str(exc)
        rows.append(row)
    return rows


@dataclass
class Problem:
    """Bound-constrained problem over the design vector.

    evaluate(x) must return (objectives_min, feasible, violation): objectives
    already oriented for minimization, violation >= 0 and 0 when feasible.
    """
    bounds: np.ndarray          # (n, 2)
    evaluate: callable
    n_objectives: int
    integer_mask: np.ndarray | None = None

    def __post_init__(self):
        self.bounds = np.asarray(self.bounds, dtype=float)
        if np.any(self.bounds[:, 0] > self.bounds[:, 1]):
            raise OptimizerError("bounds must be ordered")
        if self.integer_mask is None:
            self.integer_mask = np.zeros(len(self.bounds), dtype=bool)

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def repair(self, x: np.ndarray) -> np.ndarray:
        x = np.clip(x, self.bounds[:, 0], self.bounds[:, 1])
        if self.integer_mask.any():
            x = x.copy()
            x[self.integer_mask] = np.rint(x[self.integer_mask])
        return x


@dataclass(frozen=True)
class Individual:
    x: np.ndarray
    objectives: np.ndarray
    feasible: bool
    violation: float
    eval_id: int
    generation: int


@dataclass
class Archive:
    individuals: list = field(default_factory=list)
    seed: int = 0

    def record(self, ind: Individual):
        self.individuals.append(ind)

    def table(self) -> np.ndarray:
        return np.array([np.concatenate([ind.x, ind.objectives,
                                         [float(ind.feasible), ind.violation]])
                         for ind in self.individuals])


def _dominates(a: Individual, b: Individual) -> bool:
    # feasibility-first dominance
    if a.feasible and not b.feasible:
        return True
    if not a.feasible and b.feasible:
        return False
    if not a.feasible and not b.feasible:
        return a.violation < b.violation
    return (np.all(a.objectives <= b.objectives)
            and np.any(a.objectives < b.objectives))


def _non_dominated_sort(pop: list) -> list:
    fronts = []
    remaining = list(range(len(pop)))
    while remaining:
        front = []
        for i in remaining:
            if not any(_dominates(pop[j], pop[i]) for j in remaining if j != i):
                front.append(i)
        if not front:  # all mutually non-comparable ties
            front = list(remaining)
        fronts.append(front)
        remaining = [i for i in remaining if i not in front]
    return fronts


def hypervolume_2d(points: np.ndarray, ref: np.ndarray) -> float:
    """Dominated hypervolume of a 2-D minimization front w.r.t. ref."""
    pts = np.asarray(points, dtype=float)
    pts = pts[np.all(pts <= ref, axis=1)]
    if len(pts) == 0:
        return 0.0
    order = np.argsort(pts[:, 0])
    pts = pts[order]
    hv = 0.0
    best_f2 = ref[1]
    for f1, f2 in pts:
        if f2 < best_f2:
            hv += (ref[0] - f1) * (best_f2 - f2)
            best_f2 = f2
    return hv


def _hv_contributions(front_pts: np.ndarray, ref: np.ndarray) -> np.ndarray:
    order = np.argsort(front_pts[:, 0], kind="stable")
    n = len(front_pts)
    contrib = np.empty(n)
    for pos, idx in enumerate(order):
        f1, f2 = front_pts[idx]
        right_f1 = front_pts[order[pos + 1]][0] if pos + 1 < n else ref[0]
        upper_f2 = front_pts[order[pos - 1]][1] if pos > 0 else ref[1]
        contrib[idx] = max(right_f1 - f1, 0.0) * max(upper_f2 - f2, 0.0)
    return contrib


def _sbx(rng, p1, p2, bounds, eta=15.0, p_cross=0.9):
    c1 = p1.copy()
    if rng.random() > p_cross:
        return c1
    for i in range(len(p1)):
        if rng.random() < 0.5 and abs(p1[i] - p2[i]) > 1e-14:
            u = rng.random()
            beta = (2 * u) ** (1 / (eta + 1)) if u <= 0.5 \
                else (1 / (2 * (1 - u))) ** (1 / (eta + 1))
            c1[i] = 0.5 * ((1 + beta) * p1[i] + (1 - beta) * p2[i])
    return c1


def _poly_mutation(rng, x, bounds, eta=20.0, p_mut=None):
    n = len(x)
    if p_mut is None:
        p_mut = 1.0 / n
    y = x.copy()
    for i in range(n):
        if rng.random() < p_mut:
            lo, hi = bounds[i]
            span = hi - lo
            if span <= 0:
                continue
            u = rng.random()
            if u < 0.5:
                delta = (2 * u) ** (1 / (eta + 1)) - 1
            else:
                delta = 1 - (2 * (1 - u)) ** (1 / (eta + 1))
            y[i] = x[i] + delta * span
    return y


@dataclass
class MoeaResult:
    archive: Archive
    front: list
    hypervolume_trace: list
    evaluations: int
    converged: bool


def moea_optimize(problem: Problem, pop_size: int = 200, seed: int = 0,
                  budget: int = 30000, plateau_gens: int = 20,
                  plateau_tol: float = 1e-3, ref_point=None) -> MoeaResult:
    """Steady-state multi-objective EA with hypervolume-contribution removal.

    One offspring per step (SBX + polynomial mutation, integer repair); the
    survivor cull removes the least hypervolume contributor of the worst
    non-dominated rank, with infeasible individuals culled by violation
    first. Every evaluated individual is archived.
    """
    if problem.n_objectives != 2:
        raise OptimizerError("hypervolume selection implemented for 2 objectives")
    rng = np.random.default_rng(seed)
    archive = Archive(seed=seed)
    eval_id = 0

    def make(x, gen):
        nonlocal eval_id
        objs, feas, viol = problem.evaluate(x)
        ind = Individual(x=x.copy(), objectives=np.asarray(objs, dtype=float),
                         feasible=bool(feas), violation=float(viol),
                         eval_id=eval_id, generation=gen)
        eval_id += 1
        archive.record(ind)
        return ind

    lo, hi = problem.bounds[:, 0], problem.bounds[:, 1]
    pop = [make(problem.repair(rng.uniform(lo, hi)), 0)
           for _ in range(pop_size)]

    def current_ref():
        if ref_point is not None:
            return np.asarray(ref_point, dtype=float)
        feas_pts = np.array([p.objectives for p in pop if p.feasible
                             and np.all(np.isfinite(p.objectives))])
        if len(feas_pts) == 0:
            return None
        worst = feas_pts.max(axis=0)
        return worst + 0.1 * (np.abs(worst) + 1.0)

    hv_trace = []
    stall = 0
    converged = False
    gen = 0
    while eval_id < budget:
        gen = eval_id // pop_size
        i, j = rng.integers(0, pop_size, size=2)
        child_x = _sbx(rng, pop[i].x, pop[j].x, problem.bounds)
        child_x = _poly_mutation(rng, child_x, problem.bounds)
        child = make(problem.repair(child_x), gen)
        pop.append(child)
        infeasible = [k for k, p in enumerate(pop) if not p.feasible]
        feasible = [k for k, p in enumerate(pop) if p.feasible]
        if infeasible and len(feasible) >= pop_size:
            worst = max(infeasible, key=lambda k: pop[k].violation)
            pop.pop(worst)
        elif infeasible and not feasible:
            worst = max(infeasible, key=lambda k: pop[k].violation)
            pop.pop(worst)
        else:
            fronts = _non_dominated_sort(pop)
            last = fronts[-1]
            if len(last) == 1:
                pop.pop(last[0])
            else:
                ref = current_ref()
                pts = np.array([pop[k].objectives for k in last])
                if ref is None or not np.all(np.isfinite(pts)):
                    drop = rng.integers(0, len(last))
                    pop.pop(last[drop])
                else:
                    contrib = _hv_contributions(pts, ref)
                    pop.pop(last[int(np.argmin(contrib))])
        if eval_id % pop_size == 0:
            ref = ref_point if ref_point is not None else current_ref()
            if ref is not None:
                pts = np.array([p.objectives for p in pop if p.feasible])
                hv = hypervolume_2d(pts, np.asarray(ref, dtype=float)) \
                    if len(pts) else 0.0
                if hv_trace and hv_trace[-1] > 0 \
                        and (hv - hv_trace[-1]) / hv_trace[-1] < plateau_tol:
                    stall += 1
                else:
                    stall = 0
                hv_trace.append(hv)
                if stall >= plateau_gens:
                    converged = True
                    break
    fronts = _non_dominated_sort([p for p in pop if p.feasible] or pop)
    base = [p for p in pop if p.feasible] or pop
    front = [base[k] for k in fronts[0]]
    return MoeaResult(archive=archive, front=front, hypervolume_trace=hv_trace,
                      evaluations=eval_id, converged=converged)


def _stochastic_rank(rng, objs, viols, pf=0.45, sweeps=None):
    """Stochastic-ranking bubble sort balancing objective and violation."""
    n = len(objs)
    idx = list(range(n))
    if sweeps is None:
        sweeps = n
    for _ in range(sweeps):
        swapped = False
        for k in range(n - 1):
            a, b = idx[k], idx[k + 1]
            both_ok = viols[a] == 0.0 and viols[b] == 0.0
            if both_ok or rng.random() < pf:
                if objs[a] > objs[b]:
                    idx[k], idx[k + 1] = b, a
                    swapped = True
            else:
                if viols[a] > viols[b]:
                    idx[k], idx[k + 1] = b, a
                    swapped = True
        if not swapped:
            break
    return idx


@dataclass
class EsResult:
    best_x: np.ndarray
    best_objective: float
    best_feasible: bool
    best_violation: float
    trace: list             # best-so-far objective per generation
    archive: Archive
    evaluations: int
    converged: bool


def isres_optimize(problem: Problem, pop_size: int = 400, gamma: float = 0.85,
                   alpha: float = 0.2, success_rule: float = 1.0 / 7.0,
                   seed: int = 0, budget: int = 30000,
                   plateau_gens: int = 20, plateau_tol: float = 1e-3,
                   rule_mode: str = "success_rate") -> EsResult:
    """Constrained (mu, lambda) evolution strategy with stochastic ranking.

    Log-normal self-adaptive per-coordinate step sizes plus a global step
    multiplier driven toward the 1/7 success rate (smoothing alpha); parents
    are the top (1 - gamma) fraction under stochastic ranking. rule_mode
    "parent_ratio" instead sizes the parent pool as pop/7.
    """
    if problem.n_objectives != 1:
        raise OptimizerError("the evolution strategy is single-objective")
    rng = np.random.default_rng(seed)
    n = problem.dim
    lo, hi = problem.bounds[:, 0], problem.bounds[:, 1]
    if rule_mode == "parent_ratio":
        mu = max(2, int(round(pop_size * success_rule)))
    else:
        mu = max(2, int(round(pop_size * (1.0 - gamma))))
    tau = 1.0 / math.sqrt(2.0 * math.sqrt(n))
    tau_prime = 1.0 / math.sqrt(2.0 * n)
    archive = Archive(seed=seed)
    eval_id = 0

    def evaluate(x, gen):
        nonlocal eval_id
        objs, feas, viol = problem.evaluate(x)
        ind = Individual(x=x.copy(), objectives=np.atleast_1d(
            np.asarray(objs, dtype=float)), feasible=bool(feas),
            violation=float(viol), eval_id=eval_id, generation=gen)
        eval_id += 1
        archive.record(ind)
        return ind

    xs = np.array([problem.repair(rng.uniform(lo, hi)) for _ in range(pop_size)])
    sigmas = np.tile((hi - lo) / math.sqrt(n), (pop_size, 1))
    inds = [evaluate(x, 0) for x in xs]
    g_mult = 1.0

    def better(a: Individual, b: Individual) -> bool:
        if (a.violation == 0.0) != (b.violation == 0.0):
            return a.violation == 0.0
        if a.violation > 0.0 and b.violation > 0.0:
            return a.violation < b.violation
        return a.objectives[0] < b.objectives[0]

    best = inds[0]
    for ind in inds[1:]:
        if better(ind, best):
            best = ind
    trace = [best.objectives[0]]
    stall = 0
    converged = False
    gen = 0
    while eval_id + pop_size <= budget:
        gen += 1
        order = _stochastic_rank(rng, [i.objectives[0] for i in inds],
                                 [i.violation for i in inds])
        parent_idx = order[:mu]
        new_xs = np.empty_like(xs)
        new_sigmas = np.empty_like(sigmas)
        new_inds = []
        successes = 0
        for k in range(pop_size):
            p = parent_idx[k % mu]
            global_draw = tau_prime * rng.standard_normal()
            sig = sigmas[p] * np.exp(global_draw
                                     + tau * rng.standard_normal(n)) * g_mult
            sig = np.minimum(sig, hi - lo)
            x = problem.repair(xs[p] + sig * rng.standard_normal(n))
            child = evaluate(x, gen)
            if better(child, inds[p]):
                successes += 1
            new_xs[k] = x
            new_sigmas[k] = sig
            new_inds.append(child)
        rate = successes / pop_size
        g_mult *= math.exp(alpha * (rate - success_rule))
        g_mult = min(max(g_mult, 1e-6), 1e3)
        xs, sigmas, inds = new_xs, new_sigmas, new_inds
        # elitist reinjection keeps the best-so-far in the gene pool
        worst = max(range(pop_size),
                    key=lambda k: (inds[k].violation, inds[k].objectives[0]))
        xs[worst] = best.x
        inds[worst] = best
        for ind in new_inds:
            if better(ind, best):
                best = ind
        improvement = trace[-1] - best.objectives[0]
        scale = max(abs(trace[-1]), 1e-12)
        if best.violation == 0.0 and improvement / scale < plateau_tol:
            stall += 1
        else:
            stall = 0
        trace.append(best.objectives[0])
        if stall >= plateau_gens:
            converged = True
            break
    return EsResult(best_x=best.x, best_objective=float(best.objectives[0]),
                    best_feasible=best.violation == 0.0,
                    best_violation=best.violation, trace=trace,
                    archive=archive, evaluations=eval_id, converged=converged)
