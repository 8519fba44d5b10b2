"""Max-cut based clustering plus k-means.

A cut assignment is a 0/1 vector over graph nodes. cut_value counts the FULL
weight of every edge crossing the cut:

    cut(x) = sum_{(i,j) in E} w_ij * (x_i (1 - x_j) + x_j (1 - x_i))

The equivalent Ising form (z = 1 - 2x, so z in {+1, -1}) is
sum w_ij * (1 - z_i z_j) / 2, which agrees exactly, term by term. A
half-weight variant of the binary form exists in some formulations; it is
exposed read-only as half_weight_cut_value and used nowhere else.

maxcut_diagonal maps the problem onto a diagonal observable: entry
0.5 * (w_same - w_different) per bitstring, so minimizing the diagonal is
exactly maximizing the cut, which is what the variational solvers (QAOA,
VQE) do on the statevector simulator. Clustering into 2**k clusters runs
recursive bisection with any of the solvers; k-means over embedded points is
the classical alternative.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import qsim
from .errors import CapacityError, ValidationError
from .optimize import OptimizerConfig, minimize

BRUTE_FORCE_CAP = 24
MAXCUT_METHODS = ("bruteforce", "localsearch", "qaoa", "vqe")
ENTANGLEMENTS = ("linear", "full", "circular")


@dataclass(eq=False)
class WeightedGraph:
    """Undirected graph; edges are (i, j, weight) with i < j."""

    n: int
    edges: list[tuple[int, int, float]]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("graph needs at least one node", n=self.n)
        seen = set()
        normalized = []
        for i, j, w in self.edges:
            if i == j:
                raise ValidationError("self loops are not allowed", node=i)
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValidationError("edge endpoint out of range", edge=(i, j))
            if i > j:
                i, j = j, i
            if (i, j) in seen:
                raise ValidationError("duplicate edge", edge=(i, j))
            seen.add((i, j))
            w = float(w)
            if not math.isfinite(w) or w < 0:
                raise ValidationError("edge weight must be finite and >= 0", edge=(i, j))
            normalized.append((i, j, w))
        self.edges = normalized

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))


@dataclass(frozen=True)
class CutAssignment:
    bits: tuple[int, ...]
    value: float


@dataclass(eq=False)
class MaxCutDiagonal:
    n: int
    diagonal: np.ndarray


@dataclass(eq=False)
class VariationalCutResult:
    assignment: CutAssignment
    expectation: float
    trace: list[float]  # best-so-far expectation per optimizer iteration
    parameters: np.ndarray


@dataclass(eq=False)
class VqeResult:
    value: float              # best expectation seen (Rayleigh-Ritz bound)
    basis_state: int          # most probable basis state at the best parameters
    trace: list[float]        # best-so-far expectation per iteration
    parameters: np.ndarray


@dataclass(eq=False)
class ClusterLabels:
    entity_ids: list[str]
    labels: np.ndarray
    details: list[dict] = field(default_factory=list)


@dataclass(eq=False)
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    inertia: float
    iterations: int
    inertia_trace: list[float] = field(default_factory=list)


def _check_bits(graph: WeightedGraph, x: Sequence[int]) -> list[int]:
    bits = [int(b) for b in x]
    if len(bits) != graph.n or any(b not in (0, 1) for b in bits):
        raise ValidationError("assignment must be 0/1 of length n", n=graph.n)
    return bits


def cut_value(graph: WeightedGraph, x: Sequence[int]) -> float:
    """Total weight of edges crossing the cut (full weight per edge)."""
    bits = _check_bits(graph, x)
    total = 0.0
    for i, j, w in graph.edges:
        total += w * (bits[i] * (1 - bits[j]) + bits[j] * (1 - bits[i]))
    return total


def half_weight_cut_value(graph: WeightedGraph, x: Sequence[int]) -> float:
    """Read-only half-weight variant; not used by any solver here."""
    return 0.5 * cut_value(graph, x)


def ising_cost(graph: WeightedGraph, z: Sequence[int]) -> float:
    """sum w_ij (1 - z_i z_j) / 2 over edges, z entries in {+1, -1}."""
    spins = [int(s) for s in z]
    if len(spins) != graph.n or any(s not in (1, -1) for s in spins):
        raise ValidationError("spins must be +1/-1 of length n", n=graph.n)
    total = 0.0
    for i, j, w in graph.edges:
        total += w * (0.5 * (1 - spins[i] * spins[j]))
    return total


def _all_cut_values(graph: WeightedGraph) -> np.ndarray:
    """Cut value for every bitstring, accumulated in edge order."""
    idx = np.arange(2**graph.n, dtype=np.uint32)
    totals = np.zeros(2**graph.n, dtype=np.float64)
    for i, j, w in graph.edges:
        crossing = (((idx >> i) ^ (idx >> j)) & 1).astype(np.float64)
        totals += w * crossing
    return totals


def _bits_of(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> q) & 1 for q in range(n))


def brute_force_maxcut(graph: WeightedGraph) -> CutAssignment:
    """Exact maximum cut by enumeration; n <= 24.

    By complement symmetry only bitstrings with node 0 on side 0 are
    searched; ties resolve to the smallest bitstring value.
    """
    if graph.n < 2:
        raise ValidationError("max cut needs at least two nodes", n=graph.n)
    if graph.n > BRUTE_FORCE_CAP:
        raise CapacityError("graph too large for enumeration", n=graph.n, cap=BRUTE_FORCE_CAP)
    values = _all_cut_values(graph)
    evens = values[0::2]  # masks with bit 0 clear
    best_mask = 2 * int(np.argmax(evens))
    return CutAssignment(bits=_bits_of(best_mask, graph.n), value=float(values[best_mask]))


def maxcut_diagonal(graph: WeightedGraph, cap: int = qsim.QUBIT_CAP) -> MaxCutDiagonal:
    """Diagonal observable with entry 0.5 * (w_same - w_different) per bitstring.

    Minimizing this diagonal is exactly maximizing the cut; entries are
    symmetric under complementing the bitstring.
    """
    if graph.n > cap:
        raise CapacityError("graph too large for a diagonal observable", n=graph.n, cap=cap)
    idx = np.arange(2**graph.n, dtype=np.uint32)
    same = np.zeros(2**graph.n, dtype=np.float64)
    different = np.zeros(2**graph.n, dtype=np.float64)
    for i, j, w in graph.edges:
        crossing = (((idx >> i) ^ (idx >> j)) & 1).astype(np.float64)
        different += w * crossing
        same += w * (1.0 - crossing)
    return MaxCutDiagonal(n=graph.n, diagonal=0.5 * (same - different))


def local_search_maxcut(
    graph: WeightedGraph, restarts: int = 10, seed: int = 0
) -> CutAssignment:
    """Single-flip hill climbing from seeded random starts.

    Restart r draws its start from generator seed (seed + r). At a local
    optimum every node has at least half of its incident weight on the cut.
    The best cut over restarts wins; the result is canonicalized so node 0
    is on side 0.
    """
    if graph.n < 2:
        raise ValidationError("max cut needs at least two nodes", n=graph.n)
    if restarts < 1:
        raise ValidationError("restarts must be >= 1", restarts=restarts)
    incident: list[list[tuple[int, float]]] = [[] for _ in range(graph.n)]
    for i, j, w in graph.edges:
        incident[i].append((j, w))
        incident[j].append((i, w))

    best_bits: Optional[list[int]] = None
    best_value = -math.inf
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        bits = [int(b) for b in rng.integers(0, 2, size=graph.n)]
        improved = True
        while improved:
            improved = False
            best_gain = 0.0
            best_node = -1
            for node in range(graph.n):
                gain = 0.0
                for other, w in incident[node]:
                    # Flipping `node` toggles each incident edge's crossing.
                    gain += w if bits[node] == bits[other] else -w
                if gain > best_gain:
                    best_gain = gain
                    best_node = node
            if best_node >= 0:
                bits[best_node] = 1 - bits[best_node]
                improved = True
        value = cut_value(graph, bits)
        if value > best_value:
            best_value = value
            best_bits = bits
    assert best_bits is not None
    if best_bits[0] == 1:
        best_bits = [1 - b for b in best_bits]
    return CutAssignment(bits=tuple(best_bits), value=cut_value(graph, best_bits))


def _qaoa_state(
    graph_diag: np.ndarray, n: int, gammas: np.ndarray, betas: np.ndarray
) -> qsim.StateVector:
    state = qsim.new_state(n)
    for q in range(n):
        qsim.apply_gate(state, "h", [q])
    for gamma, beta in zip(gammas, betas):
        qsim.apply_diagonal_phase(state, graph_diag, gamma)
        for q in range(n):
            qsim.apply_gate(state, "rx", [q], 2.0 * beta)
    return state


def qaoa_expectation(graph: WeightedGraph, gammas, betas) -> float:
    """Cut-value expectation of the ansatz state at fixed parameters."""
    diag = _all_cut_values(graph)
    state = _qaoa_state(diag, graph.n, np.asarray(gammas), np.asarray(betas))
    return qsim.expectation_diagonal(state, diag)


def qaoa_maxcut(
    graph: WeightedGraph,
    reps: int = 1,
    optimizer: Optional[OptimizerConfig] = None,
    seed: Optional[int] = None,
    initial_parameters: Optional[Sequence[float]] = None,
) -> VariationalCutResult:
    """Alternating cost-phase / mixer ansatz over the cut-value diagonal.

    Parameters are [gamma_1..gamma_p, beta_1..beta_p], started at zero (the
    uniform superposition, whose expectation is the mean cut value) unless
    an explicit start is given. The optimizer minimizes -expectation; the
    returned assignment is the most probable basis state of the final state,
    ties to the smallest index.
    """
    if reps < 1:
        raise ValidationError("reps must be >= 1", reps=reps)
    if graph.n < 2:
        raise ValidationError("max cut needs at least two nodes", n=graph.n)
    if graph.n > qsim.QUBIT_CAP:
        raise CapacityError("graph too large to simulate", n=graph.n, cap=qsim.QUBIT_CAP)
    diag = _all_cut_values(graph)
    cfg = optimizer or OptimizerConfig(kind="spsa", seed=seed)
    if seed is not None and cfg.seed is None:
        cfg = replace(cfg, seed=seed)
    start = np.zeros(2 * reps)
    if initial_parameters is not None:
        start = np.asarray(initial_parameters, dtype=np.float64)
        if start.shape != (2 * reps,):
            raise ValidationError("initial parameters must have length 2*reps", reps=reps)

    def objective(params: np.ndarray) -> float:
        state = _qaoa_state(diag, graph.n, params[:reps], params[reps:])
        return -qsim.expectation_diagonal(state, diag)

    result = minimize(objective, start, cfg)
    state = _qaoa_state(diag, graph.n, result.x[:reps], result.x[reps:])
    winner = qsim.most_probable_state(state)
    bits = _bits_of(winner, graph.n)
    return VariationalCutResult(
        assignment=CutAssignment(bits=bits, value=cut_value(graph, bits)),
        expectation=-result.fun,
        trace=[-v for v in result.trace],
        parameters=result.x,
    )


def _entanglement_pairs(n: int, scheme: str) -> list[tuple[int, int]]:
    if scheme == "linear":
        return [(i, i + 1) for i in range(n - 1)]
    if scheme == "full":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if scheme == "circular":
        # Close the ring first, then the linear chain.
        return ([(n - 1, 0)] if n > 1 else []) + [(i, i + 1) for i in range(n - 1)]
    raise ValidationError("unknown entanglement scheme", scheme=scheme)


def vqe_ansatz_state(
    n: int, parameters: np.ndarray, reps: int, entanglement: str
) -> qsim.StateVector:
    """Hardware-efficient ansatz: per rep an RY layer then CNOT entanglement,
    closed by a final RY layer. Parameter count is (reps + 1) * n."""
    parameters = np.asarray(parameters, dtype=np.float64)
    if parameters.shape != ((reps + 1) * n,):
        raise ValidationError(
            "ansatz needs (reps + 1) * n parameters", n=n, reps=reps,
            got=parameters.shape,
        )
    pairs = _entanglement_pairs(n, entanglement)
    state = qsim.new_state(n)
    k = 0
    for _ in range(reps):
        for q in range(n):
            qsim.apply_gate(state, "ry", [q], float(parameters[k]))
            k += 1
        for control, target in pairs:
            qsim.apply_gate(state, "cnot", [control, target])
    for q in range(n):
        qsim.apply_gate(state, "ry", [q], float(parameters[k]))
        k += 1
    return state


def vqe_min_eigen(
    observable,
    reps: int = 1,
    entanglement: str = "linear",
    optimizer: Optional[OptimizerConfig] = None,
    seed: Optional[int] = None,
) -> VqeResult:
    """Variational minimum-eigenvalue search over a diagonal observable.

    The expectation of a diagonal observable is a convex combination of its
    entries, so every reported value is >= the true minimum (Rayleigh-Ritz).
    Accepts anything with fields `n` and `diagonal`.
    """
    if reps < 1:
        raise ValidationError("reps must be >= 1", reps=reps)
    n = int(observable.n)
    diag = np.asarray(observable.diagonal, dtype=np.float64)
    if diag.shape != (2**n,):
        raise ValidationError("diagonal length must be 2**n", n=n)
    if entanglement not in ENTANGLEMENTS:
        raise ValidationError("unknown entanglement scheme", scheme=entanglement)
    count = (reps + 1) * n
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(-math.pi, math.pi, size=count)
    cfg = optimizer or OptimizerConfig(kind="nelderMead", max_iterations=400)

    def objective(params: np.ndarray) -> float:
        state = vqe_ansatz_state(n, params, reps, entanglement)
        return qsim.expectation_diagonal(state, diag)

    result = minimize(objective, x0, cfg)
    state = vqe_ansatz_state(n, result.x, reps, entanglement)
    return VqeResult(
        value=result.fun,
        basis_state=qsim.most_probable_state(state),
        trace=list(result.trace),
        parameters=result.x,
    )


def graph_from_distance_matrix(
    values: np.ndarray, threshold: Optional[float] = None
) -> WeightedGraph:
    """Complete graph weighted by pairwise distance; edges below the
    threshold (if given) are dropped."""
    d = np.asarray(values, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValidationError("distance matrix must be square")
    n = d.shape[0]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            w = float(d[i, j])
            if threshold is not None and w < threshold:
                continue
            edges.append((i, j, w))
    return WeightedGraph(n=n, edges=edges)


def _solve_maxcut(
    graph: WeightedGraph,
    method: str,
    seed: int,
    reps: int,
    entanglement: str,
    optimizer: Optional[OptimizerConfig],
    restarts: int,
) -> tuple[CutAssignment, dict]:
    if method == "bruteforce":
        assignment = brute_force_maxcut(graph)
        return assignment, {"method": method, "cutValue": assignment.value}
    if method == "localsearch":
        assignment = local_search_maxcut(graph, restarts=restarts, seed=seed)
        return assignment, {"method": method, "cutValue": assignment.value}
    if method == "qaoa":
        cfg = optimizer or OptimizerConfig(kind="spsa", max_iterations=100, seed=seed)
        result = qaoa_maxcut(graph, reps=reps, optimizer=cfg, seed=seed)
        return result.assignment, {
            "method": method,
            "cutValue": result.assignment.value,
            "expectation": result.expectation,
            "trace": result.trace,
        }
    if method == "vqe":
        cfg = optimizer or OptimizerConfig(kind="nelderMead", max_iterations=400)
        diag = maxcut_diagonal(graph)
        result = vqe_min_eigen(
            diag, reps=reps, entanglement=entanglement, optimizer=cfg, seed=seed
        )
        bits = _bits_of(result.basis_state, graph.n)
        assignment = CutAssignment(bits=bits, value=cut_value(graph, bits))
        return assignment, {
            "method": method,
            "cutValue": assignment.value,
            "eigenvalue": result.value,
            "trace": result.trace,
        }
    raise ValidationError("unknown max-cut method", method=method)


def maxcut_cluster(
    values: np.ndarray,
    entity_ids: Optional[Sequence[str]] = None,
    method: str = "bruteforce",
    clusters: int = 2,
    seed: int = 0,
    reps: int = 1,
    entanglement: str = "linear",
    optimizer: Optional[OptimizerConfig] = None,
    restarts: int = 10,
) -> ClusterLabels:
    """Recursive max-cut bisection into a power-of-two number of clusters.

    Each split cuts the complete distance-weighted subgraph with the chosen
    method. A part too small to split keeps its label and is reported in the
    details. Labels are the binary path through the splits (first split is
    the most significant bit). Split s of the recursion uses seed (seed + s).
    """
    if clusters < 2 or clusters & (clusters - 1):
        raise ValidationError("cluster count must be a power of two >= 2", clusters=clusters)
    if method not in MAXCUT_METHODS:
        raise ValidationError("unknown max-cut method", method=method)
    d = np.asarray(values, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 2:
        raise ValidationError("distance matrix must be square with order >= 2")
    n = d.shape[0]
    ids = list(entity_ids) if entity_ids is not None else [str(i) for i in range(n)]
    levels = clusters.bit_length() - 1
    labels = np.zeros(n, dtype=np.int64)
    details: list[dict] = []
    split_counter = 0

    def split(indices: list[int], level: int):
        nonlocal split_counter
        if level == levels:
            return
        if len(indices) < 2:
            warnings.warn(
                f"part of size {len(indices)} cannot be split further", stacklevel=2
            )
            details.append({"indices": list(indices), "stopped": True, "level": level})
            return
        sub = d[np.ix_(indices, indices)]
        graph = graph_from_distance_matrix(sub)
        assignment, info = _solve_maxcut(
            graph, method, seed + split_counter, reps, entanglement, optimizer, restarts
        )
        split_counter += 1
        info.update({"level": level, "indices": list(indices)})
        details.append(info)
        side0 = [indices[k] for k, b in enumerate(assignment.bits) if b == 0]
        side1 = [indices[k] for k, b in enumerate(assignment.bits) if b == 1]
        for idx in side1:
            labels[idx] |= 1 << (levels - 1 - level)
        split(side0, level + 1)
        split(side1, level + 1)

    split(list(range(n)), 0)
    return ClusterLabels(entity_ids=ids, labels=labels, details=details)


def _kmeans_pp_centers(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]), dtype=np.float64)
    centers[0] = points[int(rng.integers(n))]
    closest = np.sum((points - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = closest.sum()
        if total <= 0:
            centers[c] = points[int(rng.integers(n))]
            continue
        probabilities = closest / total
        centers[c] = points[int(rng.choice(n, p=probabilities))]
        closest = np.minimum(closest, np.sum((points - centers[c]) ** 2, axis=1))
    return centers


def kmeans(
    points,
    k: int,
    max_iterations: int = 100,
    seed: Optional[int] = None,
) -> KMeansResult:
    """Lloyd iterations from k-means++ seeding.

    Inertia (sum of squared distances to the assigned center) never
    increases across iterations; an emptied cluster is re-seeded to the
    point farthest from its assigned center.
    """
    coords = points.coordinates if hasattr(points, "coordinates") else points
    x = np.asarray(coords, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValidationError("points must be a 2-D array")
    n = x.shape[0]
    if not 1 <= k <= n:
        raise ValidationError("k must satisfy 1 <= k <= points", k=k, points=n)
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_centers(x, k, rng)
    labels = np.zeros(n, dtype=np.int64)
    trace: list[float] = []
    iterations = 0
    for _ in range(max_iterations):
        iterations += 1
        squared = np.sum((x[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        new_labels = np.argmin(squared, axis=1)
        inertia = float(np.sum(squared[np.arange(n), new_labels]))
        trace.append(inertia)
        converged = bool(np.array_equal(new_labels, labels)) and iterations > 1
        labels = new_labels
        for c in range(k):
            members = x[labels == c]
            if len(members):
                centers[c] = members.mean(axis=0)
            else:
                nearest = squared[np.arange(n), labels]
                centers[c] = x[int(np.argmax(nearest))]
        if converged:
            break
    squared = np.sum((x[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    labels = np.argmin(squared, axis=1)
    inertia = float(np.sum(squared[np.arange(n), labels]))
    return KMeansResult(
        labels=labels, centers=centers, inertia=inertia,
        iterations=iterations, inertia_trace=trace,
    )
