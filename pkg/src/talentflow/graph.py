"""Weighted directed talent-flow graphs and their analysis.

Nodes are either jobs (normalized title within an industry, keyed as
"title|industry") or organizations; edge weights count hops. Includes
unweighted degree centralities, weighted PageRank with uniform
redistribution of dead-end mass, strongly/weakly connected components,
adjacency sparsity, CCDFs and a discrete power-law exponent fit.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from scipy.optimize import minimize_scalar
from scipy.special import zeta

from .hops import HopCorpus

JOB_MODE = "job"
ORG_MODE = "org"
STRONG = "strong"
WEAK = "weak"


def job_node_key(title: str, industry: str) -> str:
    return f"{title}|{industry}"


@dataclass(frozen=True)
class TalentGraph:
    """Immutable weighted digraph. `nodes` is sorted; `edges` maps
    (src, dst) pairs to positive integer weights; no self-loops."""

    mode: str
    nodes: tuple[str, ...]
    edges: Mapping[tuple[str, str], int]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def out_adjacency(self) -> dict[str, list[tuple[str, int]]]:
        adj: dict[str, list[tuple[str, int]]] = {v: [] for v in self.nodes}
        for (src, dst) in sorted(self.edges):
            adj[src].append((dst, self.edges[(src, dst)]))
        return adj


def build_graph(corpus: HopCorpus, mode: str, edge_min_sup: int = 2) -> TalentGraph:
    """Aggregate hops into a graph, drop edges below the weight threshold,
    then drop nodes left without edges.

    Job mode keys nodes by (title, industry); org mode by organization.
    Hops that stay on the same node (same organization, or same
    title-industry pair) contribute no edge.
    """
    if mode not in (JOB_MODE, ORG_MODE):
        raise ValueError(f"unknown graph mode {mode!r}")
    if edge_min_sup < 1:
        raise ValueError(f"edge_min_sup must be >= 1, got {edge_min_sup}")
    weights: Counter[tuple[str, str]] = Counter()
    for hop in corpus.hops:
        if mode == JOB_MODE:
            src = job_node_key(hop.src_title, hop.src.industry)
            dst = job_node_key(hop.dst_title, hop.dst.industry)
        else:
            src = hop.src.organization
            dst = hop.dst.organization
        if src == dst:
            continue
        weights[(src, dst)] += 1
    edges = {pair: w for pair, w in weights.items() if w >= edge_min_sup}
    nodes = sorted({v for pair in edges for v in pair})
    return TalentGraph(mode=mode, nodes=tuple(nodes), edges=edges)


def degree_centrality(g: TalentGraph) -> dict[str, tuple[int, int]]:
    """Unweighted (in_degree, out_degree) per node: distinct neighbor
    counts, ignoring edge weights."""
    in_deg = {v: 0 for v in g.nodes}
    out_deg = {v: 0 for v in g.nodes}
    for (src, dst) in g.edges:
        out_deg[src] += 1
        in_deg[dst] += 1
    return {v: (in_deg[v], out_deg[v]) for v in g.nodes}


@dataclass(frozen=True)
class PageRankResult:
    scores: dict[str, float]
    converged: bool
    iterations: int


def weighted_pagerank(g: TalentGraph, damping: float = 0.85,
                      tol: float = 1e-10, max_iter: int = 200) -> PageRankResult:
    """Weighted PageRank by power iteration.

    Transition probability from u to v is weight(u, v) over u's weighted
    out-degree; nodes without outgoing edges spread their mass uniformly
    over all nodes. Iterates until the L1 change drops below `tol`;
    returns unconverged scores (flagged) after `max_iter` sweeps. Scores
    are normalized to sum to one. Summation order is fixed, so results
    are bit-stable across runs.
    """
    if not g.nodes:
        raise ValueError("pagerank needs a non-empty graph")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not 0 < damping < 1:
        raise ValueError(f"damping must be in (0, 1), got {damping}")

    nodes = g.nodes
    n = len(nodes)
    out_weight = {v: 0 for v in nodes}
    for (src, _), w in g.edges.items():
        out_weight[src] += w
    out_edges = g.out_adjacency()
    dangling = [v for v in nodes if out_weight[v] == 0]

    rank = {v: 1.0 / n for v in nodes}
    base = (1.0 - damping) / n
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        nxt = {v: 0.0 for v in nodes}
        for u in nodes:
            share = rank[u]
            wout = out_weight[u]
            if wout == 0:
                continue
            for v, w in out_edges[u]:
                nxt[v] += share * (w / wout)
        dangling_mass = sum(rank[u] for u in dangling)
        spread = dangling_mass / n
        delta = 0.0
        for v in nodes:
            nxt[v] = base + damping * (nxt[v] + spread)
            delta += abs(nxt[v] - rank[v])
        rank = nxt
        if delta < tol:
            converged = True
            break

    total = sum(rank[v] for v in nodes)
    scores = {v: rank[v] / total for v in nodes}
    return PageRankResult(scores=scores, converged=converged, iterations=iterations)


def _tarjan_scc(nodes: Sequence[str], adj: Mapping[str, list[str]]) -> list[list[str]]:
    """Iterative Tarjan to keep deep graphs off the Python call stack."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            v, child_idx = work[-1]
            if child_idx == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            descended = False
            children = adj.get(v, [])
            for ci in range(child_idx, len(children)):
                w = children[ci]
                if w not in index:
                    work[-1] = (v, ci + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == v:
                        break
                components.append(component)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return components


def _union_find_wcc(nodes: Sequence[str], edges: Iterable[tuple[str, str]]) -> list[list[str]]:
    parent = {v: v for v in nodes}

    def find(v: str) -> str:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    for src, dst in edges:
        ra, rb = find(src), find(dst)
        if ra != rb:
            parent[rb] = ra

    groups: dict[str, list[str]] = {}
    for v in nodes:
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


@dataclass(frozen=True)
class ComponentReport:
    mode: str
    node_count: int
    components: tuple[tuple[str, ...], ...]

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def largest_size(self) -> int:
        return len(self.components[0]) if self.components else 0

    @property
    def second_largest_size(self) -> int:
        return len(self.components[1]) if len(self.components) > 1 else 0

    def size_pct(self, size: int) -> float:
        if self.node_count == 0:
            return 0.0
        return float(Fraction(size, self.node_count) * 100)


def connected_components(g: TalentGraph, mode: str = STRONG) -> ComponentReport:
    """Components of the graph: strong follows edge direction, weak
    ignores it. Components come sorted by size (largest first), ties by
    their smallest node key."""
    if mode == STRONG:
        adj: dict[str, list[str]] = {v: [] for v in g.nodes}
        for (src, dst) in sorted(g.edges):
            adj[src].append(dst)
        raw = _tarjan_scc(g.nodes, adj)
    elif mode == WEAK:
        raw = _union_find_wcc(g.nodes, sorted(g.edges))
    else:
        raise ValueError(f"unknown component mode {mode!r}")
    ordered = sorted((tuple(sorted(c)) for c in raw), key=lambda c: (-len(c), c[0] if c else ""))
    return ComponentReport(mode=mode, node_count=g.node_count, components=tuple(ordered))


def sparsity(g: TalentGraph) -> float:
    """Edge count over squared node count, as a percentage."""
    if g.node_count == 0:
        raise ValueError("sparsity undefined for an empty graph")
    return float(Fraction(g.edge_count, g.node_count ** 2) * 100)


def degree_ccdf(values: Sequence[int]) -> list[tuple[int, Fraction]]:
    """Points (x, P(X >= x)) over the observed support, descending in
    probability; the first point is exactly 1."""
    if not values:
        raise ValueError("ccdf needs at least one value")
    data = sorted(values)
    n = len(data)
    points: list[tuple[int, Fraction]] = []
    seen = 0
    previous = None
    for v in data:
        if v != previous:
            points.append((v, Fraction(n - seen, n)))
            previous = v
        seen += 1
    return points


class TailTooSmallError(ValueError):
    """Too few observations at or above x_min to fit a tail exponent."""


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    x_min: int
    n_tail: int


def fit_power_law(values: Iterable[int], x_min: int = 1,
                  min_tail: int = 50) -> PowerLawFit:
    """Maximum-likelihood exponent of a discrete power law p(x) ~ x^-alpha
    on integers x >= x_min.

    The zeta-normalized likelihood is maximized numerically; unlike the
    closed-form continuous approximation, this stays unbiased at small
    x_min. Raises TailTooSmallError when fewer than `min_tail` values lie
    in the tail.
    """
    if x_min < 1:
        raise ValueError(f"x_min must be >= 1, got {x_min}")
    tail = []
    for v in values:
        if v != int(v):
            raise ValueError(f"discrete power-law fit needs integer values, got {v!r}")
        if v >= x_min:
            tail.append(int(v))
    n = len(tail)
    if n < min_tail:
        raise TailTooSmallError(
            f"TAIL_TOO_SMALL: {n} values >= {x_min}, need {min_tail}")
    slog = sum(math.log(v) for v in tail)

    def nll(alpha: float) -> float:
        return n * math.log(zeta(alpha, x_min)) + alpha * slog

    result = minimize_scalar(nll, bounds=(1.0 + 1e-6, 25.0), method="bounded",
                             options={"xatol": 1e-9})
    return PowerLawFit(alpha=float(result.x), x_min=x_min, n_tail=n)


@dataclass(frozen=True)
class CentralityReport:
    nodes: tuple[str, ...]
    in_degree: dict[str, int]
    out_degree: dict[str, int]
    pagerank: dict[str, float]
    pagerank_converged: bool
    pagerank_iterations: int

    def measure(self, name: str) -> dict[str, float]:
        if name not in ("in_degree", "out_degree", "pagerank"):
            raise ValueError(f"unknown centrality measure {name!r}")
        return getattr(self, name)


def build_centrality_report(g: TalentGraph, damping: float = 0.85,
                            tol: float = 1e-10, max_iter: int = 200) -> CentralityReport:
    degrees = degree_centrality(g)
    pr = weighted_pagerank(g, damping=damping, tol=tol, max_iter=max_iter)
    return CentralityReport(
        nodes=g.nodes,
        in_degree={v: d[0] for v, d in degrees.items()},
        out_degree={v: d[1] for v, d in degrees.items()},
        pagerank=pr.scores,
        pagerank_converged=pr.converged,
        pagerank_iterations=pr.iterations,
    )


def top_k(report: CentralityReport, measure: str, k: int) -> list[tuple[str, float]]:
    """The k best nodes by a measure, ties broken by ascending node key."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    scores = report.measure(measure)
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def write_graph_csv(g: TalentGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src_key", "dst_key", "weight"])
        for (src, dst) in sorted(g.edges):
            writer.writerow([src, dst, g.edges[(src, dst)]])


def write_centrality_csv(report: CentralityReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node_key", "in_degree", "out_degree", "pagerank"])
        for v in report.nodes:
            writer.writerow([v, report.in_degree[v], report.out_degree[v],
                             repr(report.pagerank[v])])


def write_components_csv(reports: Iterable[ComponentReport], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["component_id", "size", "mode"])
        for report in reports:
            for cid, component in enumerate(report.components):
                writer.writerow([cid, len(component), report.mode])


def write_ccdf_csv(points: Sequence[tuple[int, Fraction]], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "ccdf"])
        for x, p in points:
            writer.writerow([x, repr(float(p))])
