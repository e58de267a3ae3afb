"""Population metaheuristics maximizing a fitness over the unit hypercube.

Five algorithms share one contract: uniform random initialization in
[0,1]^D, offspring clamped to the box, greedy elitism, and a hard budget
of objective evaluations that stops a run mid-generation the instant it
is consumed. All randomness flows from the config seed, so the full
evaluation stream is reproducible.

Genotypes handed to the objective/callback may be views into internal
population arrays; consumers that retain them must copy.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


class BudgetExhausted(Exception):
    """Internal signal that the evaluation budget ran out mid-generation."""


@dataclass(frozen=True)
class DEParams:
    f: float = 0.5
    cr: float = 0.9

    def __post_init__(self):
        if not 0.0 <= self.f <= 1.0:
            raise ValueError(f"F must be in [0, 1], got {self.f}")
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError(f"CR must be in [0, 1], got {self.cr}")


@dataclass(frozen=True)
class GAParams:
    pm: float = 0.01
    pc: float = 0.8

    def __post_init__(self):
        if not 0.0 <= self.pm <= 1.0 or not 0.0 <= self.pc <= 1.0:
            raise ValueError(f"pm and pc must be in [0, 1], got {self.pm}, {self.pc}")


@dataclass(frozen=True)
class PSOParams:
    c1: float = 0.1
    c2: float = 0.1
    w: float = 0.8
    v_max: float = 0.2  # velocity clamp as a fraction of the unit range

    def __post_init__(self):
        if self.w < 0:
            raise ValueError(f"inertia weight must be >= 0, got {self.w}")
        if self.v_max <= 0:
            raise ValueError(f"v_max must be > 0, got {self.v_max}")


@dataclass(frozen=True)
class JDEParams:
    f0: float = 0.5
    cr0: float = 0.9
    tau: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must be in [0, 1], got {self.tau}")


@dataclass(frozen=True)
class LSHADEParams:
    """Success-history DE with linear population reduction.

    ``np_init=None`` means 18 * dimension, the customary initial size;
    set np_init/np_min explicitly for other schedules.
    """

    h: int = 5
    p: float = 0.1
    arc_rate: float = 2.0
    np_init: int | None = None
    np_min: int = 4

    def __post_init__(self):
        if self.h < 1:
            raise ValueError(f"memory size H must be >= 1, got {self.h}")
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"p must be in (0, 1], got {self.p}")
        if self.arc_rate < 0:
            raise ValueError(f"arc_rate must be >= 0, got {self.arc_rate}")
        if self.np_min < 4:
            raise ValueError(f"np_min must be >= 4, got {self.np_min}")
        if self.np_init is not None and self.np_init < self.np_min:
            raise ValueError(f"np_init {self.np_init} below np_min {self.np_min}")


_DEFAULT_PARAMS = {
    "de": DEParams,
    "ga": GAParams,
    "pso": PSOParams,
    "jde": JDEParams,
    "lshade": LSHADEParams,
}
ALGORITHM_NAMES = tuple(_DEFAULT_PARAMS)
_DE_FAMILY = ("de", "jde", "lshade")


@dataclass(frozen=True)
class OptimizerConfig:
    algorithm: str
    dimension: int
    population: int = 50
    max_fes: int = 10_000
    seed: int = 0
    params: object | None = None

    def __post_init__(self):
        if self.algorithm not in _DEFAULT_PARAMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}, expected one of {ALGORITHM_NAMES}"
            )
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        min_pop = 4 if self.algorithm in _DE_FAMILY else 2
        if self.population < min_pop:
            raise ValueError(
                f"{self.algorithm} needs a population of at least {min_pop}, got {self.population}"
            )
        if self.max_fes < self.population:
            raise ValueError(
                f"max_fes ({self.max_fes}) must cover the initial population ({self.population})"
            )
        if self.params is not None and not isinstance(self.params, _DEFAULT_PARAMS[self.algorithm]):
            raise ValueError(
                f"params for {self.algorithm} must be {_DEFAULT_PARAMS[self.algorithm].__name__}"
            )

    def resolved_params(self):
        return self.params if self.params is not None else _DEFAULT_PARAMS[self.algorithm]()


@dataclass
class RunTrace:
    best_genotype: np.ndarray | None
    best_fitness: float
    evaluations_used: int


class _Evaluator:
    """Budget-tracked objective; raises BudgetExhausted at the cap."""

    __slots__ = ("objective", "max_fes", "callback", "evaluations", "best_x", "best_f")

    def __init__(self, objective, max_fes, callback=None):
        self.objective = objective
        self.max_fes = max_fes
        self.callback = callback
        self.evaluations = 0
        self.best_x = None
        self.best_f = -np.inf

    @property
    def remaining(self) -> int:
        return self.max_fes - self.evaluations

    def __call__(self, x) -> float:
        if self.evaluations >= self.max_fes:
            raise BudgetExhausted
        f = float(self.objective(x))
        self.evaluations += 1
        if f > self.best_f:
            self.best_f = f
            self.best_x = np.array(x, copy=True)
        if self.callback is not None:
            self.callback(x, f)
        return f


def _distinct_indices(rng, n, forbidden, count):
    out = []
    while len(out) < count:
        r = int(rng.integers(n))
        if r != forbidden and r not in out:
            out.append(r)
    return out


def _binomial_crossover(rng, target, mutant, cr, dim):
    mask = rng.random(dim) <= cr
    mask[int(rng.integers(dim))] = True  # forced index keeps trial != target
    return np.where(mask, mutant, target)


class _DE:
    """rand/1/bin differential evolution with greedy one-to-one selection."""

    def __init__(self, config, rng):
        self.cfg = config
        self.rng = rng
        self.p = config.resolved_params()

    def initialize(self, evaluate):
        n, d = self.cfg.population, self.cfg.dimension
        self.pop = self.rng.random((n, d))
        self.fit = np.full(n, -np.inf)
        for i in range(n):
            self.fit[i] = evaluate(self.pop[i])

    def step(self, evaluate):
        rng = self.rng
        n, d = self.cfg.population, self.cfg.dimension
        parents = self.pop.copy()
        parent_fit = self.fit.copy()
        for i in range(n):
            r1, r2, r3 = _distinct_indices(rng, n, i, 3)
            mutant = parents[r1] + self.p.f * (parents[r2] - parents[r3])
            trial = _binomial_crossover(rng, parents[i], mutant, self.p.cr, d)
            np.clip(trial, 0.0, 1.0, out=trial)
            f = evaluate(trial)
            if f >= parent_fit[i]:
                self.pop[i] = trial
                self.fit[i] = f


class _GA:
    """Real-coded GA: size-2 tournaments, uniform crossover, gene-reset mutation,
    generational replacement with a single elite carried over unevaluated."""

    def __init__(self, config, rng):
        self.cfg = config
        self.rng = rng
        self.p = config.resolved_params()

    def initialize(self, evaluate):
        n, d = self.cfg.population, self.cfg.dimension
        self.pop = self.rng.random((n, d))
        self.fit = np.full(n, -np.inf)
        for i in range(n):
            self.fit[i] = evaluate(self.pop[i])

    def _tournament(self, fit):
        n = self.cfg.population
        a = int(self.rng.integers(n))
        b = int(self.rng.integers(n))
        return a if fit[a] >= fit[b] else b

    def step(self, evaluate):
        rng = self.rng
        n, d = self.cfg.population, self.cfg.dimension
        parents = self.pop.copy()
        parent_fit = self.fit.copy()
        elite = int(np.argmax(parent_fit))
        self.pop[0] = parents[elite]
        self.fit[0] = parent_fit[elite]
        for slot in range(1, n):
            a = self._tournament(parent_fit)
            b = self._tournament(parent_fit)
            if rng.random() < self.p.pc:
                take_a = rng.random(d) < 0.5
                child = np.where(take_a, parents[a], parents[b])
            else:
                child = parents[a].copy()
            reset = rng.random(d) < self.p.pm
            hits = int(reset.sum())
            if hits:
                child[reset] = rng.random(hits)
            f = evaluate(child)
            self.pop[slot] = child
            self.fit[slot] = f


class _PSO:
    """Global-best PSO with velocity clamping and reflection at the box walls."""

    def __init__(self, config, rng):
        self.cfg = config
        self.rng = rng
        self.p = config.resolved_params()

    def initialize(self, evaluate):
        n, d = self.cfg.population, self.cfg.dimension
        self.pos = self.rng.random((n, d))
        self.vel = np.zeros((n, d))
        fit = np.full(n, -np.inf)
        for i in range(n):
            fit[i] = evaluate(self.pos[i])
        self.pbest = self.pos.copy()
        self.pbest_fit = fit
        g = int(np.argmax(fit))
        self.gbest = self.pos[g].copy()
        self.gbest_fit = float(fit[g])

    def step(self, evaluate):
        rng = self.rng
        n, d = self.cfg.population, self.cfg.dimension
        p = self.p
        r1 = rng.random((n, d))
        r2 = rng.random((n, d))
        self.vel = (
            p.w * self.vel
            + p.c1 * r1 * (self.pbest - self.pos)
            + p.c2 * r2 * (self.gbest - self.pos)
        )
        np.clip(self.vel, -p.v_max, p.v_max, out=self.vel)
        self.pos += self.vel
        below = self.pos < 0.0
        above = self.pos > 1.0
        self.pos[below] = -self.pos[below]
        self.pos[above] = 2.0 - self.pos[above]
        self.vel[below | above] *= -1.0
        np.clip(self.pos, 0.0, 1.0, out=self.pos)
        for i in range(n):
            f = evaluate(self.pos[i])
            if f > self.pbest_fit[i]:
                self.pbest_fit[i] = f
                self.pbest[i] = self.pos[i].copy()
                if f > self.gbest_fit:
                    self.gbest_fit = f
                    self.gbest = self.pos[i].copy()


class _JDE:
    """DE with self-adapted per-individual F and CR, regenerated with
    probability tau before each trial and kept only on success."""

    F_LOW, F_SPAN = 0.1, 0.9

    def __init__(self, config, rng):
        self.cfg = config
        self.rng = rng
        self.p = config.resolved_params()

    def initialize(self, evaluate):
        n, d = self.cfg.population, self.cfg.dimension
        self.pop = self.rng.random((n, d))
        self.fit = np.full(n, -np.inf)
        self.f_vals = np.full(n, self.p.f0)
        self.cr_vals = np.full(n, self.p.cr0)
        for i in range(n):
            self.fit[i] = evaluate(self.pop[i])

    def step(self, evaluate):
        rng = self.rng
        n, d = self.cfg.population, self.cfg.dimension
        tau = self.p.tau
        parents = self.pop.copy()
        parent_fit = self.fit.copy()
        for i in range(n):
            f_i = self.F_LOW + self.F_SPAN * rng.random() if rng.random() < tau else self.f_vals[i]
            cr_i = rng.random() if rng.random() < tau else self.cr_vals[i]
            r1, r2, r3 = _distinct_indices(rng, n, i, 3)
            mutant = parents[r1] + f_i * (parents[r2] - parents[r3])
            trial = _binomial_crossover(rng, parents[i], mutant, cr_i, d)
            np.clip(trial, 0.0, 1.0, out=trial)
            f = evaluate(trial)
            if f >= parent_fit[i]:
                self.pop[i] = trial
                self.fit[i] = f
                self.f_vals[i] = f_i
                self.cr_vals[i] = cr_i


def lshade_population_size(np_init: int, np_min: int, evaluations: int, max_fes: int) -> int:
    """Linear schedule from np_init down to np_min over the budget."""
    return int(round(np_init + (np_min - np_init) * (evaluations / max_fes)))


class _LSHADE:
    """Success-history parameter adaptation, current-to-pbest/1 mutation with
    an external archive, and linear population size reduction."""

    def __init__(self, config, rng):
        self.cfg = config
        self.rng = rng
        self.p = config.resolved_params()
        self.np_init = self.p.np_init if self.p.np_init is not None else 18 * config.dimension

    def initialize(self, evaluate):
        d = self.cfg.dimension
        n = self.np_init
        self.pop = self.rng.random((n, d))
        self.fit = np.full(n, -np.inf)
        self.mem_f = np.full(self.p.h, 0.5)
        self.mem_cr = np.full(self.p.h, 0.5)
        self.mem_pos = 0
        self.archive: list[np.ndarray] = []
        for i in range(n):
            self.fit[i] = evaluate(self.pop[i])

    def _sample_f(self, loc: float) -> float:
        while True:
            f = loc + 0.1 * float(self.rng.standard_cauchy())
            if f > 0.0:
                return min(f, 1.0)

    def step(self, evaluate):
        rng = self.rng
        d = self.cfg.dimension
        n = len(self.pop)
        parents = self.pop.copy()
        parent_fit = self.fit.copy()
        order = np.argsort(parent_fit)[::-1]
        n_top = max(2, int(round(self.p.p * n)))
        s_f: list[float] = []
        s_cr: list[float] = []
        deltas: list[float] = []
        for i in range(n):
            slot = int(rng.integers(self.p.h))
            f_i = self._sample_f(self.mem_f[slot])
            cr_i = float(np.clip(rng.normal(self.mem_cr[slot], 0.1), 0.0, 1.0))
            pbest = int(order[int(rng.integers(n_top))])
            r1 = _distinct_indices(rng, n, i, 1)[0]
            r2 = r1
            while r2 == i or r2 == r1:
                r2 = int(rng.integers(n + len(self.archive)))
            donor2 = parents[r2] if r2 < n else self.archive[r2 - n]
            mutant = parents[i] + f_i * (parents[pbest] - parents[i]) + f_i * (parents[r1] - donor2)
            trial = _binomial_crossover(rng, parents[i], mutant, cr_i, d)
            np.clip(trial, 0.0, 1.0, out=trial)
            f = evaluate(trial)
            if f > parent_fit[i]:
                self.archive.append(parents[i].copy())
                s_f.append(f_i)
                s_cr.append(cr_i)
                deltas.append(f - parent_fit[i])
            if f >= parent_fit[i]:
                self.pop[i] = trial
                self.fit[i] = f
        if s_f:
            w = np.asarray(deltas)
            w = w / w.sum()
            sf = np.asarray(s_f)
            scr = np.asarray(s_cr)
            self.mem_f[self.mem_pos] = float((w * sf**2).sum() / (w * sf).sum())
            cr_den = float((w * scr).sum())
            self.mem_cr[self.mem_pos] = float((w * scr**2).sum() / cr_den) if cr_den > 0 else 0.0
            self.mem_pos = (self.mem_pos + 1) % self.p.h
        target = lshade_population_size(
            self.np_init, self.p.np_min, evaluate.evaluations, evaluate.max_fes
        )
        target = max(self.p.np_min, min(target, len(self.pop)))
        if target < len(self.pop):
            keep = np.sort(np.argsort(self.fit)[::-1][:target])
            self.pop = self.pop[keep]
            self.fit = self.fit[keep]
        max_archive = int(round(self.p.arc_rate * len(self.pop)))
        while len(self.archive) > max_archive:
            del self.archive[int(rng.integers(len(self.archive)))]


ALGORITHMS = {"de": _DE, "ga": _GA, "pso": _PSO, "jde": _JDE, "lshade": _LSHADE}


def optimize(config: OptimizerConfig, objective, callback=None) -> RunTrace:
    """Run the configured algorithm against a [0,1]^D -> [0,1] objective.

    ``callback(genotype, fitness)`` is invoked once per evaluation, in
    evaluation order. The run stops the instant max_fes evaluations have
    been spent, even mid-generation; partial generations keep whatever
    greedy selections were already made.
    """
    evaluator = _Evaluator(objective, config.max_fes, callback)
    rng = np.random.default_rng(config.seed)
    algorithm = ALGORITHMS[config.algorithm](config, rng)
    try:
        algorithm.initialize(evaluator)
        while evaluator.remaining > 0:
            algorithm.step(evaluator)
    except BudgetExhausted:
        pass
    return RunTrace(evaluator.best_x, evaluator.best_f, evaluator.evaluations)


def derived_config(config: OptimizerConfig, run_index: int) -> OptimizerConfig:
    """Per-run config: the documented seed derivation is seed + run index."""
    return replace(config, seed=config.seed + run_index)
