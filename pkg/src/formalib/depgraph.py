"""Article dependency DAG: construction, reduction, layering, queries, export.

Edges point from an article to the articles it depends on, as declared in its
environment directives.  The graph must be acyclic; a cycle is corpus
corruption and construction fails with a witness cycle.
"""

from __future__ import annotations

import json
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .articles import Article
from .errors import CyclicDependency, NotADag, UnknownNode

#: Directive kinds that reference library articles.  ``vocabularies`` names
#: vocabulary files and ``requirements`` names built-in requirement units, so
#: neither contributes dependency edges by default.
DEFAULT_DIRECTIVE_KINDS = frozenset(
    {
        "notations",
        "constructors",
        "registrations",
        "definitions",
        "theorems",
        "schemes",
        "expansions",
        "equalities",
    }
)


@dataclass(frozen=True)
class DepGraph:
    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]
    layers: dict[str, int] | None = None
    reduced: bool = False
    warnings: tuple[str, ...] = ()

    def successors(self) -> dict[str, set[str]]:
        succ: dict[str, set[str]] = {v: set() for v in self.nodes}
        for u, v in self.edges:
            succ[u].add(v)
        return succ

    def predecessors(self) -> dict[str, set[str]]:
        pred: dict[str, set[str]] = {v: set() for v in self.nodes}
        for u, v in self.edges:
            pred[v].add(u)
        return pred


def _find_cycle(nodes: Iterable[str], succ: dict[str, set[str]]) -> list[str] | None:
    """Return one directed cycle as [v, ..., v], or None if acyclic."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in nodes}
    for root in sorted(color):
        if color[root] != WHITE:
            continue
        stack: list[tuple[str, Iterable[str]]] = [(root, iter(sorted(succ[root])))]
        path = [root]
        color[root] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GRAY:
                    return path[path.index(nxt) :] + [nxt]
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    path.append(nxt)
                    stack.append((nxt, iter(sorted(succ[nxt]))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return None


def _topo_sinks_first(g: DepGraph) -> list[str]:
    """Topological order processing dependency sinks before dependers."""
    succ = g.successors()
    pred = g.predecessors()
    outdeg = {v: len(succ[v]) for v in g.nodes}
    ready = deque(sorted(v for v in g.nodes if outdeg[v] == 0))
    order: list[str] = []
    while ready:
        v = ready.popleft()
        order.append(v)
        for u in sorted(pred[v]):
            outdeg[u] -= 1
            if outdeg[u] == 0:
                ready.append(u)
    if len(order) != len(g.nodes):
        raise NotADag("graph contains a cycle")
    return order


def build_graph(
    articles: Iterable[Article],
    directive_kinds: frozenset[str] | set[str] = DEFAULT_DIRECTIVE_KINDS,
) -> DepGraph:
    """Build the dependency graph over ``articles``.

    An edge (A, B) exists iff B is another corpus article named by a directive
    of A whose kind is in ``directive_kinds``.  Directive names that resolve
    to no corpus article are recorded as warnings, not nodes.  Raises
    :class:`CyclicDependency` with a witness cycle if the relation is cyclic.
    """
    articles = list(articles)
    nodes = {a.name for a in articles}
    edges: set[tuple[str, str]] = set()
    warnings: list[str] = []
    for article in articles:
        for directive in article.env:
            if directive.kind not in directive_kinds:
                continue
            for name in directive.names:
                if name == article.name:
                    continue
                if name not in nodes:
                    warnings.append(
                        f"{article.name}: directive {directive.kind} names "
                        f"{name}, which is not a corpus article"
                    )
                    continue
                edges.add((article.name, name))

    succ: dict[str, set[str]] = {v: set() for v in nodes}
    for u, v in edges:
        succ[u].add(v)
    cycle = _find_cycle(nodes, succ)
    if cycle is not None:
        raise CyclicDependency(cycle)
    return DepGraph(frozenset(nodes), frozenset(edges), warnings=tuple(warnings))


def transitive_reduction(g: DepGraph) -> DepGraph:
    """Cut every edge implied by a longer path.

    The result is the unique minimal subgraph with the same reachability
    relation: edge (u, v) survives iff no path u -> ... -> v of length >= 2
    exists.  Nodes in reverse topological order carry reachability bitsets, so
    the check per edge is a couple of integer operations.
    """
    order = _topo_sinks_first(g)
    index = {v: i for i, v in enumerate(sorted(g.nodes))}
    succ = g.successors()

    reach: dict[str, int] = {}
    for v in order:
        mask = 1 << index[v]
        for w in succ[v]:
            mask |= reach[w]
        reach[v] = mask

    kept: set[tuple[str, str]] = set()
    for u in g.nodes:
        for v in succ[u]:
            bit = 1 << index[v]
            if not any(reach[w] & bit for w in succ[u] if w != v):
                kept.add((u, v))
    return DepGraph(
        g.nodes, frozenset(kept), layers=g.layers, reduced=True, warnings=g.warnings
    )


def assign_layers(g: DepGraph) -> DepGraph:
    """Longest-path layering: a node sits one above its deepest dependency."""
    order = _topo_sinks_first(g)
    succ = g.successors()
    layers: dict[str, int] = {}
    for v in order:
        layers[v] = 1 + max((layers[w] for w in succ[v]), default=-1)
    return DepGraph(g.nodes, g.edges, layers=layers, reduced=g.reduced, warnings=g.warnings)


def neighborhood(g: DepGraph, center: str, radius: int) -> DepGraph:
    """Induced subgraph on nodes within undirected distance ``radius``."""
    if center not in g.nodes:
        raise UnknownNode(center)
    adjacency: dict[str, set[str]] = {v: set() for v in g.nodes}
    for u, v in g.edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    seen = {center}
    frontier = {center}
    for _ in range(radius):
        frontier = {w for v in frontier for w in adjacency[v]} - seen
        if not frontier:
            break
        seen |= frontier
    edges = frozenset((u, v) for u, v in g.edges if u in seen and v in seen)
    layers = None
    if g.layers is not None:
        layers = {v: g.layers[v] for v in seen}
    return DepGraph(frozenset(seen), edges, layers=layers, reduced=g.reduced)


def search_nodes(g: DepGraph, query: str) -> list[str]:
    """Rank nodes by match quality: exact, then prefix, then substring."""
    q = query.lower()
    tiers: tuple[list[str], list[str], list[str]] = ([], [], [])
    for name in sorted(g.nodes):
        lowered = name.lower()
        if lowered == q:
            tiers[0].append(name)
        elif lowered.startswith(q):
            tiers[1].append(name)
        elif q in lowered:
            tiers[2].append(name)
    return tiers[0] + tiers[1] + tiers[2]


def export_dot(g: DepGraph, *, sfdp: bool = False) -> str:
    """Serialize as deterministic DOT text; layers appear as a `rank` attr.

    With ``sfdp=True`` the header carries layout hints for force-directed
    rendering; the graph data itself is identical.
    """
    lines = ["digraph mml {"]
    if sfdp:
        lines.append('  graph [layout=sfdp, overlap=prism, splines=true];')
    for node in sorted(g.nodes):
        if g.layers is not None:
            lines.append(f'  "{node}" [rank={g.layers[node]}];')
        else:
            lines.append(f'  "{node}";')
    for u, v in sorted(g.edges):
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(g: DepGraph) -> str:
    """Serialize as the service's JSON graph format, lexicographically sorted."""
    payload = graph_payload(g)
    return json.dumps(payload, indent=None, separators=(",", ":")) + "\n"


def graph_payload(g: DepGraph) -> dict:
    nodes = [
        {"id": v, "layer": g.layers[v] if g.layers is not None else None}
        for v in sorted(g.nodes)
    ]
    edges = [{"from": u, "to": v} for u, v in sorted(g.edges)]
    return {"nodes": nodes, "edges": edges}
