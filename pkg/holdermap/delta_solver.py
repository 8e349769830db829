"""The Delta Solver module.

delta^s of a finite space is the minimum of Z^s over all orderings of its points.

This module provides the following functions:
- bound_theorem33
- delta_finite
- dimension_profile
- min_chain_exact
- min_chain_heuristic
- min_chain_line
- nearest_neighbor_order
- net_tree_order
- two_opt_order
"""

__all__ = [
    "bound_theorem33",
    "delta_finite",
    "dimension_profile",
    "min_chain_exact",
    "min_chain_heuristic",
    "min_chain_line",
    "nearest_neighbor_order",
    "net_tree_order",
    "two_opt_order",
]

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Union

import numpy as np

from holdermap.chain_energy import z_dp
from holdermap.cover_numbers import BALL_TOLERANCE, greedy_centers, in_ball
from holdermap.exceptions import (
    BudgetExceededError,
    DivergentSumError,
    DuplicatePointError,
    EmptyOrderError,
    InvalidInputError,
    TooManyPointsError,
)
from holdermap.metric_core import diameter, distance_matrix, min_distance
from holdermap.schemas.chain import DeltaMode, DeltaResult, NetTree, ProfileRow, SolverMethod
from holdermap.schemas.metric import MetricSample, PointCloud

LOGGER = logging.getLogger(__name__)
EXACT_MAX_POINTS = 12
DEFAULT_NODE_BUDGET = 10**6
TWO_OPT_MAX_EVALUATIONS = 100_000
# Relative margin: ties within rounding never count as improvements.
IMPROVEMENT_SLACK = 1e-12
LINE_TOLERANCE = 1e-12


def _check_size(sample: MetricSample) -> int:
    if sample.size == 0:
        raise EmptyOrderError("Cannot order an empty space")
    return sample.size


def _normalized(order: Sequence[int]) -> tuple[int, ...]:
    order = tuple(int(x) for x in order)
    return order[::-1] if order[0] > order[-1] else order


def nearest_neighbor_order(sample: MetricSample, start: int = 0) -> tuple[int, ...]:
    """Walk to the nearest unvisited point until every point is visited.

    Args:
        sample: A space or point cloud.
        start: Index of the first point.

    Returns:
        The visiting order; ties go to the lower index.
    """
    size = _check_size(sample)
    visited = np.zeros(size, dtype=bool)
    visited[start] = True
    order = [start]
    for _ in range(size - 1):
        gaps = np.where(visited, np.inf, sample.distances_from(order[-1]))
        step = int(np.argmin(gaps))
        visited[step] = True
        order.append(step)
    return tuple(order)


def two_opt_order(
    sample: MetricSample,
    s: float,
    order: Optional[Sequence[int]] = None,
    max_evaluations: int = TWO_OPT_MAX_EVALUATIONS,
) -> tuple[tuple[int, ...], float]:
    """Improve an order by segment reversals, accepting the first improvement found.

    Passes repeat until one full pass finds no improvement or the evaluation limit is
    reached; Z^s is recomputed for every candidate.

    Args:
        sample: A space or point cloud.
        s: Positive exponent.
        order: Starting order, the nearest-neighbor walk by default.
        max_evaluations: Largest number of candidate orders evaluated.

    Returns:
        The improved order and its Z^s, never above the starting value.
    """
    size = _check_size(sample)
    current = list(order) if order is not None else list(nearest_neighbor_order(sample))
    value = z_dp(sample, current, s)
    evaluations = 0
    improved = True
    while improved:
        improved = False
        for i in range(size - 1):
            for j in range(i + 1, size):
                if i == 0 and j == size - 1:
                    continue
                if evaluations >= max_evaluations:
                    LOGGER.warning("two_opt stopped after %d evaluations", evaluations)
                    return tuple(current), value
                evaluations += 1
                candidate = current[:i] + current[i : j + 1][::-1] + current[j + 1 :]
                candidate_value = z_dp(sample, candidate, s)
                if candidate_value < value * (1 - IMPROVEMENT_SLACK):
                    current, value = candidate, candidate_value
                    improved = True
    return tuple(current), value


class _SubtreeSearch:
    """Depth-first branch-and-bound over the orders starting with one fixed point.

    `reach[w]` is the best chain value into an unplaced w through the placed prefix; its
    maximum over unplaced points bounds every completion from below.
    """

    def __init__(self, weights: np.ndarray, first: int, incumbent: float, budget: int):
        self.weights = weights
        self.first = first
        self.incumbent = incumbent
        self.budget = budget
        self.best_order: Optional[tuple[int, ...]] = None
        self.nodes = 0
        self.exhausted = False

    def run(self) -> "_SubtreeSearch":
        placed = np.zeros(len(self.weights), dtype=bool)
        placed[self.first] = True
        self._descend([self.first], placed, self.weights[self.first].copy())
        return self

    def _descend(self, order: list[int], placed: np.ndarray, reach: np.ndarray) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return
        remaining = np.flatnonzero(~placed)
        for step in remaining.tolist():
            rest = remaining[remaining != step]
            if rest.size == 0:
                # Reversal symmetry: only orders whose last index exceeds the first.
                if step > self.first and reach[step] < self.incumbent:
                    self.incumbent = float(reach[step])
                    self.best_order = (*order, step)
                continue
            if rest.max() < self.first:
                continue
            extended = np.maximum(reach, reach[step] + self.weights[step])
            if extended[rest].max() >= self.incumbent:
                continue
            placed[step] = True
            self._descend([*order, step], placed, extended)
            placed[step] = False
            if self.exhausted:
                return


def min_chain_exact(
    sample: MetricSample,
    s: float,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_points: int = EXACT_MAX_POINTS,
    threads: int = 1,
    strict: bool = False,
) -> DeltaResult:
    """The exact minimum of Z^s over all orderings, by branch-and-bound.

    The search fixes the first point, extends prefixes in increasing index order, and
    keeps only orders whose last index exceeds the first. A prefix is pruned once the
    best chain value into some unplaced point reaches the incumbent, seeded just above
    the two_opt value. One independent search runs per first point, so the reported
    order, the lexicographically least optimal one, does not depend on `threads`.

    Args:
        sample: A space or point cloud.
        s: Positive exponent.
        node_budget: Node limit of each first-point search.
        max_points: Largest space accepted.
        threads: Worker threads for the first-point searches.
        strict: Raise instead of returning an inexact result when the budget runs out.

    Returns:
        The minimum and a minimizing order, exact unless the budget ran out.

    Raises:
        EmptyOrderError: If the space is empty.
        TooManyPointsError: If the space is larger than `max_points`.
        BudgetExceededError: In strict mode, carrying the best result found.
    """
    size = _check_size(sample)
    if size > max_points:
        raise TooManyPointsError(size, max_points)
    if size == 1:
        return DeltaResult(value=0.0, order=(0,), exact=True, method=SolverMethod.EXACT)
    weights = np.power(distance_matrix(sample), s)
    seed_order, seed_value = two_opt_order(sample, s)
    incumbent = seed_value * (1 + IMPROVEMENT_SLACK) + IMPROVEMENT_SLACK
    searches = [_SubtreeSearch(weights, first, incumbent, node_budget) for first in range(size - 1)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            list(executor.map(_SubtreeSearch.run, searches))
    else:
        for search in searches:
            search.run()
    found = [(x.incumbent, x.best_order) for x in searches if x.best_order is not None]
    value, order = min(found) if found else (seed_value, _normalized(seed_order))
    exhausted = any(x.exhausted for x in searches)
    result = DeltaResult(
        value=value,
        order=order,
        exact=not exhausted,
        method=SolverMethod.EXACT,
        nodes_explored=sum(x.nodes for x in searches),
    )
    LOGGER.info(
        "Exact search over %d points at s=%r: value %r after %d nodes",
        size,
        s,
        value,
        result.nodes_explored,
    )
    if exhausted:
        LOGGER.warning("Node budget of %d exhausted; result is an upper bound", node_budget)
        if strict:
            raise BudgetExceededError(result)
    return result


def min_chain_line(
    cloud: PointCloud, s: float, cross_check_max: int = EXACT_MAX_POINTS, threads: int = 1
) -> DeltaResult:
    """Z^s of the monotone order of points on the line.

    The monotone order is only certified optimal when the exact solver, run on the
    same points, agrees with it.

    Args:
        cloud: Points in R.
        s: Positive exponent.
        cross_check_max: Largest cloud cross-checked by the exact solver.
        threads: Worker threads for the cross-check.

    Returns:
        The sorted order, exact only after a successful cross-check.

    Raises:
        InvalidInputError: If the cloud is not one-dimensional.
    """
    if not isinstance(cloud, PointCloud) or cloud.arity != 1:
        raise InvalidInputError("The monotone order needs a point cloud in R")
    _check_size(cloud)
    order = tuple(int(x) for x in np.argsort(cloud.points[:, 0], kind="stable"))
    value = z_dp(cloud, order, s)
    exact = False
    if cloud.size <= cross_check_max:
        check = min_chain_exact(cloud, s, max_points=cross_check_max, threads=threads)
        exact = check.exact and abs(check.value - value) <= LINE_TOLERANCE * max(1.0, value)
        if not exact:
            LOGGER.warning(
                "Monotone order gives %r but the exact search gives %r", value, check.value
            )
    return DeltaResult(value=value, order=order, exact=exact, method=SolverMethod.SORTED)


def net_tree_order(sample: MetricSample, u: float) -> tuple[tuple[int, ...], NetTree]:
    """Order points lexicographically along a tree of nested greedy covers.

    Level n is a greedy cover by closed balls of radius diam * u^n; levels stop once the
    radius drops below the smallest distance, where every point is its own center. Each
    center links to the nearest center of the previous level whose ball contains it,
    ties going to the earlier one.

    Args:
        sample: A space or point cloud.
        u: Radius ratio in (0, 1).

    Returns:
        The order and the tree it came from.

    Raises:
        InvalidInputError: If u is outside (0, 1).
        DuplicatePointError: If two points coincide.
    """
    if not 0 < u < 1:
        raise InvalidInputError(f"Net tree ratio must be in (0, 1), got {u!r}")
    size = _check_size(sample)
    if size == 1:
        return (0,), NetTree(u=u, radii=[0.0], levels=[[0]], parents=[[]])
    diam = diameter(sample)
    floor = min_distance(sample)
    radii = [diam]
    while radii[-1] * (1 + BALL_TOLERANCE) >= floor:
        radii.append(diam * u ** len(radii))
    levels = [greedy_centers(sample, r) for r in radii]
    if len(levels[-1]) < size:
        missing = min(set(range(size)) - set(levels[-1]))
        twin = int(np.flatnonzero(sample.distances_from(missing) == 0)[0])
        raise DuplicatePointError(min(twin, missing), max(twin, missing))
    parents: list[list[int]] = [[]]
    for depth in range(1, len(levels)):
        upper = np.array(levels[depth - 1])
        links = []
        for center in levels[depth]:
            gaps = sample.distances_from(center)[upper]
            eligible = np.where(in_ball(gaps, radii[depth - 1]), gaps, np.inf)
            links.append(int(upper[np.argmin(eligible)]))
        parents.append(links)
    tree = NetTree(u=u, radii=radii, levels=levels, parents=parents)
    positions = [{center: k for k, center in enumerate(level)} for level in levels]

    def branch(point: int) -> tuple[int, ...]:
        key, center = [], point
        for depth in range(tree.depth, -1, -1):
            k = positions[depth][center]
            key.append(k)
            if depth:
                center = parents[depth][k]
        return tuple(reversed(key))

    LOGGER.debug("Net tree with u=%r has level sizes %s", u, tree.level_sizes)
    return tuple(sorted(range(size), key=branch)), tree


def bound_theorem33(
    levels: Union[NetTree, Sequence[int]],
    s: float,
    u: Optional[float] = None,
    diam: Optional[float] = None,
    tail_ratio: float = 1.0,
) -> float:
    """Covering bound (2 diam / (u (1 - u)))^s * sum_{n >= 1} a_n u^(ns) on delta^s.

    Sizes beyond the last given level continue as a_n = a_N * tail_ratio^(n - N), so the
    infinite sum is a finite head plus a geometric tail in closed form.

    Args:
        levels: A net tree, or the level sizes a_0, ..., a_N.
        s: Positive exponent.
        u: Radius ratio in (0, 1), taken from the tree by default.
        diam: Diameter of the space, taken from the tree by default.
        tail_ratio: Growth rate of the sizes after level N.

    Returns:
        The bound, 0 for a single point.

    Raises:
        InvalidInputError: If a parameter is missing or out of range.
        DivergentSumError: If tail_ratio * u^s >= 1.
    """
    if isinstance(levels, NetTree):
        u = levels.u if u is None else u
        diam = levels.radii[0] if diam is None else diam
        levels = levels.level_sizes
    if u is None or diam is None or not levels:
        raise InvalidInputError("Level sizes need both u and the diameter")
    if not 0 < u < 1 or not s > 0:
        raise InvalidInputError(f"Need u in (0, 1) and s > 0, got u={u!r}, s={s!r}")
    if diam == 0:
        return 0.0
    ratio = tail_ratio * u**s
    if ratio >= 1:
        raise DivergentSumError(f"Tail ratio {ratio!r} makes the covering sum diverge")
    depth = len(levels) - 1
    head = sum(size * u ** (n * s) for n, size in enumerate(levels) if n >= 1)
    tail = levels[-1] * u ** (depth * s) * ratio / (1 - ratio)
    return (2 * diam / (u * (1 - u))) ** s * (head + tail)


def min_chain_heuristic(
    sample: MetricSample,
    s: float,
    strategy: SolverMethod = SolverMethod.TWO_OPT,
    u: float = 0.5,
    max_evaluations: int = TWO_OPT_MAX_EVALUATIONS,
) -> DeltaResult:
    """Upper bound on delta^s from one constructive ordering.

    Args:
        sample: A space or point cloud.
        s: Positive exponent.
        strategy: nearest_neighbor, two_opt or net_tree.
        u: Radius ratio of the net tree.
        max_evaluations: Evaluation limit of two_opt.

    Returns:
        The order's value, flagged inexact.

    Raises:
        InvalidInputError: If the strategy is not a heuristic.
    """
    if strategy is SolverMethod.NEAREST_NEIGHBOR:
        order = nearest_neighbor_order(sample)
        value = z_dp(sample, order, s)
    elif strategy is SolverMethod.TWO_OPT:
        order, value = two_opt_order(sample, s, max_evaluations=max_evaluations)
    elif strategy is SolverMethod.NET_TREE:
        order, _ = net_tree_order(sample, u)
        value = z_dp(sample, order, s)
    else:
        raise InvalidInputError(f"{strategy.value} is not a heuristic strategy")
    return DeltaResult(value=value, order=order, exact=False, method=strategy)


def delta_finite(
    sample: MetricSample,
    s: float,
    mode: DeltaMode = DeltaMode.EXACT,
    u: float = 0.5,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_points: int = EXACT_MAX_POINTS,
    threads: int = 1,
    strict: bool = False,
) -> DeltaResult:
    """delta^s of a finite space, computed on the full point set.

    Args:
        sample: A space or point cloud.
        s: Positive exponent.
        mode: Solver to use; `heuristic` means two_opt.
        u: Radius ratio for the net-tree mode.
        node_budget: Node limit of the exact mode.
        max_points: Largest space the exact mode accepts.
        threads: Worker threads of the exact mode.
        strict: Raise when the exact mode runs out of budget.

    Returns:
        The delegate's result.
    """
    if not s > 0:
        raise InvalidInputError(f"Exponent must be positive, got {s!r}")
    if mode is DeltaMode.EXACT:
        return min_chain_exact(
            sample, s, node_budget=node_budget, max_points=max_points, threads=threads, strict=strict
        )
    if mode is DeltaMode.SORTED:
        return min_chain_line(sample, s, cross_check_max=max_points, threads=threads)
    strategy = {
        DeltaMode.HEURISTIC: SolverMethod.TWO_OPT,
        DeltaMode.TWO_OPT: SolverMethod.TWO_OPT,
        DeltaMode.NEAREST_NEIGHBOR: SolverMethod.NEAREST_NEIGHBOR,
        DeltaMode.NET_TREE: SolverMethod.NET_TREE,
    }[mode]
    return min_chain_heuristic(sample, s, strategy=strategy, u=u)


def _profile_delta(
    sample: MetricSample, s: float, tree_order: Sequence[int], threads: int
) -> DeltaResult:
    if isinstance(sample, PointCloud) and sample.arity == 1:
        return min_chain_line(sample, s, threads=threads)
    if sample.size <= EXACT_MAX_POINTS:
        return min_chain_exact(sample, s, threads=threads)
    candidates = [
        min_chain_heuristic(sample, s, strategy=SolverMethod.NEAREST_NEIGHBOR),
        DeltaResult(
            value=z_dp(sample, tree_order, s),
            order=tuple(tree_order),
            exact=False,
            method=SolverMethod.NET_TREE,
        ),
    ]
    return min(candidates, key=lambda x: x.value)


def dimension_profile(
    sample: MetricSample, s_grid: Sequence[float], u: float = 1 / 3, threads: int = 1
) -> list[ProfileRow]:
    """delta^s and the covering bound across a grid of exponents.

    Clouds in R use the monotone order, spaces up to the exact cap the exact solver,
    and larger ones the better of the nearest-neighbor and net-tree orders.

    Args:
        sample: A space or point cloud.
        s_grid: Exponents, at least one.
        u: Radius ratio of the net tree behind the bound.
        threads: Worker threads of exact searches.

    Returns:
        One row per exponent, in grid order.

    Raises:
        InvalidInputError: If the grid is empty.
    """
    if not s_grid:
        raise InvalidInputError("The exponent grid is empty")
    tree_order, tree = net_tree_order(sample, u)
    rows = []
    for s in s_grid:
        result = _profile_delta(sample, s, tree_order, threads)
        rows.append(
            ProfileRow(s=s, delta=result.value, exact=result.exact, bound=bound_theorem33(tree, s))
        )
    return rows
