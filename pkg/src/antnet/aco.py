"""Ant colony solver for the minimal node-covering path of a class network.

Ants build node permutations guided by pheromone trails (weight alpha) and
inverse-distance desirability (weight beta); after each iteration the
iteration-best solution deposits pheromone scaled by 1/length while all
trails evaporate at rate rho. The best path length found is the network
feature reported by the rest of the package.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .core import DistanceMatrix, InputError, LogicError, NumericError, RngSeed
from .network import ClassNetwork

OPEN_PATH = "open_path"
CLOSED_TOUR = "closed_tour"

# distance floor for the inverse-distance desirability of duplicate points,
# and the desirability assigned to edges at or below it
MIN_DISTANCE = 1e-9
MAX_DESIRABILITY = 1e9

BRUTE_FORCE_MAX_NODES = 10


@dataclass(frozen=True)
class AcoParams:
    """Solver hyperparameters.

    n_ants=None resolves to min(n, 20) per network; tau0=None resolves to
    1 / (n * nearest-neighbor path length), keeping pheromone and
    desirability terms on comparable scales.
    """

    alpha: float = 1.0
    beta: float = 2.0
    rho: float = 0.1
    n_ants: int | None = None
    n_iters: int = 200
    tau0: float | None = None
    mode: str = OPEN_PATH
    seed: RngSeed = RngSeed(0)

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise InputError("alpha and beta must be non-negative")
        if not (0.0 <= self.rho <= 1.0):
            raise InputError(f"rho must lie in [0, 1], got {self.rho}")
        if self.n_ants is not None and self.n_ants < 1:
            raise InputError("n_ants must be >= 1")
        if self.n_iters < 1:
            raise InputError("n_iters must be >= 1")
        if self.tau0 is not None and self.tau0 <= 0:
            raise InputError("tau0 must be positive")
        if self.mode not in (OPEN_PATH, CLOSED_TOUR):
            raise InputError(f"mode must be {OPEN_PATH!r} or {CLOSED_TOUR!r}")

    def resolve_n_ants(self, n_nodes: int) -> int:
        return self.n_ants if self.n_ants is not None else min(n_nodes, 20)


@dataclass(frozen=True)
class TourSolution:
    """A node permutation and its total length (closing edge only in closed_tour)."""

    order: tuple[int, ...]
    length: float

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(i) for i in self.order))
        if sorted(self.order) != list(range(len(self.order))):
            raise InputError("order must be a permutation of 0..n-1")


@dataclass(frozen=True)
class TransitionContext:
    """One ant's decision point: current node, candidate set, and the
    pheromone/desirability rows at the current node."""

    current: int
    unvisited: tuple[int, ...]
    tau_row: np.ndarray
    eta_row: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "unvisited", tuple(int(j) for j in self.unvisited))
        if self.current in self.unvisited:
            raise InputError("current node must not be in the unvisited set")


def tour_length(dist: DistanceMatrix, order, mode: str = OPEN_PATH) -> float:
    """Total length of the path visiting `order`; adds the closing edge for closed_tour."""
    v = dist.values
    idx = np.asarray(order, dtype=np.intp)
    total = float(v[idx[:-1], idx[1:]].sum()) if len(idx) > 1 else 0.0
    if mode == CLOSED_TOUR and len(idx) > 1:
        total += float(v[idx[-1], idx[0]])
    return total


def heuristic_matrix(dist: DistanceMatrix) -> np.ndarray:
    """Inverse-distance desirability; distances at or below MIN_DISTANCE
    (duplicate points) get exactly MAX_DESIRABILITY, the diagonal is unused
    and set to 0."""
    d = dist.values
    with np.errstate(divide="ignore"):
        eta = np.where(d > MIN_DISTANCE, 1.0 / d, MAX_DESIRABILITY)
    np.fill_diagonal(eta, 0.0)
    return eta


def init_pheromone(n: int, tau0: float) -> np.ndarray:
    if tau0 <= 0:
        raise InputError("tau0 must be positive")
    return np.full((n, n), float(tau0))


def nearest_neighbor_length(dist: DistanceMatrix, mode: str = OPEN_PATH) -> float:
    """Length of the greedy nearest-neighbor path from node 0 (tau0 scale)."""
    n = dist.n
    if n <= 1:
        return 0.0
    v = dist.values
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    current, total = 0, 0.0
    for _ in range(n - 1):
        row = np.where(visited, np.inf, v[current])
        nxt = int(np.argmin(row))
        total += v[current, nxt]
        visited[nxt] = True
        current = nxt
    if mode == CLOSED_TOUR:
        total += v[current, 0]
    return float(total)


def resolve_tau0(dist: DistanceMatrix, params: AcoParams) -> float:
    if params.tau0 is not None:
        return params.tau0
    n = dist.n
    l_nn = nearest_neighbor_length(dist, params.mode)
    if n <= 1 or l_nn <= 0.0:
        return 1.0
    return 1.0 / (n * l_nn)


def transition_probabilities(ctx: TransitionContext, params: AcoParams) -> np.ndarray:
    """Edge-choice probabilities tau^alpha * eta^beta normalized over the
    candidate set; zero at every visited node. Returned as a full-length vector."""
    n = len(ctx.tau_row)
    if len(ctx.unvisited) == 0:
        raise LogicError("no unvisited candidates: tour already complete")
    w = np.zeros(n)
    cand = np.asarray(ctx.unvisited, dtype=np.intp)
    w[cand] = (ctx.tau_row[cand] ** params.alpha) * (ctx.eta_row[cand] ** params.beta)
    total = w.sum()
    if not np.isfinite(total) or total <= 0.0:
        raise NumericError(f"degenerate transition weights (sum={total})")
    return w / total


def _pick_from_cumulative(cum: np.ndarray, u: float) -> int:
    """First index whose cumulative probability exceeds u; rounding residue
    falls into the last positive-probability bucket."""
    idx = int((cum <= u).sum())
    if idx >= len(cum):
        idx = int(np.flatnonzero(np.diff(np.concatenate(([0.0], cum))) > 0)[-1])
    return idx


def _construct_batch(
    dist_values: np.ndarray,
    pheromone: np.ndarray,
    eta: np.ndarray,
    params: AcoParams,
    starts: np.ndarray,
    uniforms: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Build one tour per start node, all ants stepping in lockstep.

    uniforms[k, s] is ant k's roulette draw at step s; the math per ant is
    identical to transition_probabilities + cumulative-sum sampling, so a
    single ant here reproduces construct_solution exactly.
    """
    n = dist_values.shape[0]
    m = len(starts)
    order = np.empty((m, n), dtype=np.intp)
    order[:, 0] = starts
    visited = np.zeros((m, n), dtype=bool)
    visited[np.arange(m), starts] = True
    lengths = np.zeros(m)
    current = starts.astype(np.intp).copy()

    tau_a = pheromone if params.alpha == 1.0 else pheromone**params.alpha
    eta_b = eta if params.beta == 1.0 else eta**params.beta
    w_all = tau_a * eta_b

    for step in range(1, n):
        w = w_all[current]
        w[visited] = 0.0
        total = w.sum(axis=1)
        if not np.all(np.isfinite(total)) or np.any(total <= 0.0):
            raise NumericError("degenerate transition weights during construction")
        cum = np.cumsum(w / total[:, None], axis=1)
        u = uniforms[:, step - 1]
        nxt = (cum <= u[:, None]).sum(axis=1)
        overflow = nxt >= n
        if overflow.any():
            for k in np.flatnonzero(overflow):
                nxt[k] = _pick_from_cumulative(cum[k], u[k])
        order[:, step] = nxt
        lengths += dist_values[current, nxt]
        visited[np.arange(m), nxt] = True
        current = nxt.astype(np.intp)

    if params.mode == CLOSED_TOUR and n > 1:
        lengths += dist_values[current, order[:, 0]]
    return order, lengths


def construct_solution(
    dist: DistanceMatrix,
    pheromone: np.ndarray,
    params: AcoParams,
    start: int,
    rng: np.random.Generator,
) -> TourSolution:
    """One ant's tour: from `start`, repeatedly sample the next node from the
    transition probabilities until every node is visited."""
    n = dist.n
    if not (0 <= start < n):
        raise InputError(f"start node {start} out of range for n={n}")
    if n == 1:
        return TourSolution((0,), 0.0)
    eta = heuristic_matrix(dist)
    uniforms = rng.random(n - 1)
    order, lengths = _construct_batch(
        dist.values, pheromone, eta, params, np.array([start]), uniforms[None, :]
    )
    return TourSolution(tuple(order[0]), float(lengths[0]))


def _solution_edges(order: tuple[int, ...], mode: str):
    for a, b in itertools.pairwise(order):
        yield a, b
    if mode == CLOSED_TOUR and len(order) > 1:
        yield order[-1], order[0]


def update_pheromone(
    pheromone: np.ndarray, best: TourSolution, params: AcoParams
) -> np.ndarray:
    """Evaporate every trail, then deposit rho/length on the best solution's
    edges (both triangles). Exactly (1-rho)*tau + rho*delta with delta =
    1/length on solution edges and 0 elsewhere."""
    n = len(best.order)
    out = (1.0 - params.rho) * pheromone
    if n <= 1:
        return out
    if best.length <= 0.0:
        raise NumericError("cannot deposit pheromone for a zero-length solution")
    deposit = params.rho / best.length
    for a, b in _solution_edges(best.order, params.mode):
        out[a, b] += deposit
        out[b, a] += deposit
    return out


def solve(
    net: ClassNetwork, params: AcoParams, best_lengths: list | None = None
) -> TourSolution:
    """Best node-covering path found over n_iters iterations of n_ants ants.

    Ant k of an iteration starts at node k mod n and consumes row k of that
    iteration's pre-drawn uniform block, so runs are reproducible under the
    params seed no matter how ants are scheduled. Only the iteration-best
    solution deposits pheromone. If `best_lengths` is given, the best-so-far
    length is appended once per iteration.
    """
    n = len(net)
    if n == 0:
        raise InputError("cannot solve an empty network")
    if n == 1:
        if best_lengths is not None:
            best_lengths.extend([0.0] * params.n_iters)
        return TourSolution((0,), 0.0)

    dist = net.dist
    eta = heuristic_matrix(dist)
    tau = init_pheromone(n, resolve_tau0(dist, params))
    n_ants = params.resolve_n_ants(n)
    starts = np.arange(n_ants, dtype=np.intp) % n

    best: TourSolution | None = None
    for it in range(params.n_iters):
        gen = params.seed.generator(it)
        uniforms = gen.random((n_ants, n - 1))
        orders, lengths = _construct_batch(dist.values, tau, eta, params, starts, uniforms)
        k = int(np.argmin(lengths))
        iter_best = TourSolution(tuple(orders[k]), float(lengths[k]))
        if best is None or iter_best.length < best.length:
            best = iter_best
        if iter_best.length > 0.0:
            tau = update_pheromone(tau, iter_best, params)
        if best_lengths is not None:
            best_lengths.append(best.length)
    return best


def brute_force_optimum(net: ClassNetwork, mode: str = OPEN_PATH) -> TourSolution:
    """Exact optimum by exhaustive permutation enumeration (n <= 10).

    Deduplicates by reversal symmetry, and by rotation for closed tours.
    Independent of the ant solver: lengths are accumulated in plain Python.
    """
    n = len(net)
    if n > BRUTE_FORCE_MAX_NODES:
        raise InputError(f"brute force capped at {BRUTE_FORCE_MAX_NODES} nodes, got {n}")
    if n == 0:
        raise InputError("empty network")
    if n == 1:
        return TourSolution((0,), 0.0)
    if mode not in (OPEN_PATH, CLOSED_TOUR):
        raise InputError(f"unknown mode {mode!r}")

    d = net.dist.values.tolist()
    best_order: tuple[int, ...] | None = None
    best_len = math.inf

    if mode == OPEN_PATH:
        for perm in itertools.permutations(range(n)):
            if perm[0] > perm[-1]:  # reversal has the same length
                continue
            total = 0.0
            prev = perm[0]
            for node in perm[1:]:
                total += d[prev][node]
                prev = node
            if total < best_len:
                best_len = total
                best_order = perm
    else:
        for rest in itertools.permutations(range(1, n)):
            if n > 2 and rest[0] > rest[-1]:  # fix direction; rotation fixed by start=0
                continue
            total = d[0][rest[0]]
            prev = rest[0]
            for node in rest[1:]:
                total += d[prev][node]
                prev = node
            total += d[prev][0]
            if total < best_len:
                best_len = total
                best_order = (0,) + rest

    return TourSolution(best_order, best_len)


def with_seed(params: AcoParams, seed: RngSeed) -> AcoParams:
    return replace(params, seed=seed)


@dataclass(frozen=True)
class OracleRow:
    """One solver-vs-exact-optimum comparison on a random instance."""

    n: int
    trial: int
    aco_length: float
    optimum: float

    @property
    def gap(self) -> float:
        return self.aco_length - self.optimum

    @property
    def relative_gap(self) -> float:
        return self.gap / max(self.optimum, MIN_DISTANCE)


def oracle_comparison(
    n_max: int = 8,
    trials: int = 20,
    seed: RngSeed = RngSeed(0),
    params: AcoParams | None = None,
    n_min: int = 4,
) -> list[OracleRow]:
    """Solve random planar instances of every size in [n_min, n_max] and
    compare against the exhaustive optimum. The solver can never beat the
    optimum, so gap < 0 in any row indicates an implementation bug."""
    if n_max > BRUTE_FORCE_MAX_NODES:
        raise InputError(f"n_max capped at {BRUTE_FORCE_MAX_NODES}, got {n_max}")
    if not (2 <= n_min <= n_max):
        raise InputError(f"need 2 <= n_min <= n_max, got {n_min}..{n_max}")
    if trials < 1:
        raise InputError("trials must be >= 1")
    if params is None:
        params = AcoParams()
    rows = []
    for n in range(n_min, n_max + 1):
        for t in range(trials):
            pts = seed.generator(5, n, t).random((n, 2)) * 10.0
            net = ClassNetwork.from_points(0, pts)
            opt = brute_force_optimum(net, params.mode)
            sol = solve(net, with_seed(params, seed.derive(6, n, t)))
            rows.append(OracleRow(n, t, sol.length, opt.length))
    return rows
