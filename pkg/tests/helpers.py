"""Shared test utilities: random fixtures and independent oracles.

Everything here deliberately avoids the package's own scanning logic so that
oracle checks stay independent: the item-counting oracle is a dumb line scan,
the reachability oracle is a plain BFS, and the SVD oracle is a dense
decomposition.
"""

from __future__ import annotations

import random
import re

_TOK = re.compile(r"[;,]|[^\s;,]+")

ITEM_KEYWORDS = ("theorem", "definition", "scheme")

DIRECTIVES = (
    "vocabularies",
    "notations",
    "constructors",
    "registrations",
    "requirements",
    "definitions",
    "theorems",
    "schemes",
    "expansions",
    "equalities",
)


def count_item_openers(source: str) -> int:
    """Line-scan oracle: item keywords opening a line outside comments and
    outside proof bodies."""
    count = 0
    depth = 0
    prev = None
    for line in source.split("\n"):
        if line.lstrip().startswith("::"):
            continue
        toks = _TOK.findall(line)
        if toks and depth == 0 and toks[0] in ITEM_KEYWORDS:
            count += 1
        for tok in toks:
            if tok == "proof":
                depth += 1
            elif tok == ";" and prev == "end":
                depth = max(0, depth - 1)
            prev = tok
    return count


_EXPR_ATOMS = ("x", "y", "z", "A", "B", "X \\/ Y", "X /\\ Y", "x in y", "A c= B")


def _expr(rng: random.Random) -> str:
    left = rng.choice(_EXPR_ATOMS)
    right = rng.choice(_EXPR_ATOMS)
    op = rng.choice(("=", "<>", "c=", "in"))
    return f"{left} {op} {right}"


def _proof_body(rng: random.Random, depth: int = 0) -> list[str]:
    lines = []
    for _ in range(rng.randint(1, 4)):
        roll = rng.random()
        if roll < 0.15 and depth < 2:
            lines.append("  proof")
            lines.extend("  " + s for s in _proof_body(rng, depth + 1))
            lines.append("  end;")
        elif roll < 0.3:
            # decoy: an item keyword opening a line inside a proof body
            lines.append(f"  {rng.choice(ITEM_KEYWORDS)} {_expr(rng)};")
        elif roll < 0.4:
            lines.append(f"  :: note: {_expr(rng)}")
        else:
            lines.append(f"  {rng.choice(('assume', 'thus', 'then'))} {_expr(rng)};")
    return lines


def gen_article_source(
    rng: random.Random,
    name_pool: list[str] | None = None,
    max_items: int = 8,
) -> str:
    """A random article inside the supported grammar."""
    pool = name_pool or ["TARSKI", "XBOOLE_0", "SUBSET_1", "RELAT_1", "FUNCT_1"]
    lines = []
    if rng.random() < 0.3:
        lines.append(":: generated fixture")
    inline = rng.random() < 0.3
    n_dirs = rng.randint(0, 4)
    dirs = []
    for kind in rng.sample(DIRECTIVES, n_dirs):
        names = [rng.choice(pool) for _ in range(rng.randint(1, 3))]
        if rng.random() < 0.2 and len(names) > 1:
            # directive spanning two lines
            dirs.append(f" {kind} {names[0]},")
            dirs.append(f"   {', '.join(names[1:])};")
        else:
            dirs.append(f" {kind} {', '.join(names)};")
    if inline and dirs:
        lines.append("environ" + dirs[0])
        lines.extend(dirs[1:])
    else:
        lines.append("environ")
        lines.extend(dirs)
    lines.append("begin")
    lines.append("")

    for i in range(rng.randint(0, max_items)):
        kind = rng.choice(ITEM_KEYWORDS)
        if kind == "theorem":
            label = f"Th{i + 1}: " if rng.random() < 0.7 else ""
            if rng.random() < 0.5:
                lines.append(f"theorem {label}{_expr(rng)}")
                lines.append("proof")
                lines.extend(_proof_body(rng))
                lines.append("end;")
            else:
                lines.append(f"theorem {label}{_expr(rng)};")
        elif kind == "definition":
            lines.append("definition")
            lines.append(f"  let A be set;")
            kw = rng.choice(("func", "pred", "mode", "attr"))
            lines.append(f"  {kw} gen_{i} A -> set means {_expr(rng)};")
            if rng.random() < 0.3:
                lines.append("  correctness")
                lines.append("  proof")
                lines.extend(_proof_body(rng))
                lines.append("  end;")
            lines.append("end;")
        else:
            lines.append(f"scheme Sch{i + 1} {{ P[set] }} :")
            lines.append(f"  ex x st {_expr(rng)}")
            if rng.random() < 0.5:
                lines.append("proof")
                lines.extend(_proof_body(rng))
                lines.append("end;")
            lines.append("end;")
        if rng.random() < 0.3:
            lines.append(f":: {rng.choice(ITEM_KEYWORDS)} in a comment never opens")
        if rng.random() < 0.5:
            lines.append("")
    src = "\n".join(lines)
    if rng.random() < 0.8:
        src += "\n"
    return src


# -- graph oracles -------------------------------------------------------


def gen_random_dag(
    rng: random.Random, max_nodes: int = 50, density: float | None = None
) -> tuple[set[str], set[tuple[str, str]]]:
    """Random DAG: nodes over a random topological order, edges forward only."""
    n = rng.randint(2, max_nodes)
    names = [f"N{i:03d}" for i in range(n)]
    order = names[:]
    rng.shuffle(order)
    if density is None:
        density = rng.uniform(0.1, 0.5)
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                edges.add((order[j], order[i]))  # later depends on earlier
    return set(names), edges


def reachable_from(
    start: str, edges: set[tuple[str, str]], skip: tuple[str, str] | None = None
) -> set[str]:
    succ: dict[str, set[str]] = {}
    for u, v in edges:
        if (u, v) == skip:
            continue
        succ.setdefault(u, set()).add(v)
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for nxt in succ.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def brute_force_reduction(
    nodes: set[str], edges: set[tuple[str, str]]
) -> set[tuple[str, str]]:
    """Keep (u, v) iff v is unreachable from u once that edge is deleted."""
    succ: dict[str, set[str]] = {v: set() for v in nodes}
    for u, v in edges:
        succ[u].add(v)
    kept = set()
    for u, v in edges:
        succ[u].discard(v)
        found = False
        seen = {u}
        stack = [u]
        while stack and not found:
            x = stack.pop()
            for w in succ[x]:
                if w == v:
                    found = True
                    break
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        succ[u].add(v)
        if not found:
            kept.add((u, v))
    return kept


def all_reachability(
    nodes: set[str], edges: set[tuple[str, str]]
) -> dict[str, frozenset[str]]:
    """BFS closure from every node (excluding the node itself)."""
    succ: dict[str, set[str]] = {v: set() for v in nodes}
    for u, v in edges:
        succ[u].add(v)
    out = {}
    for start in nodes:
        seen: set[str] = set()
        stack = list(succ[start])
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(succ[x])
        out[start] = frozenset(seen)
    return out


def longest_path_layers(
    nodes: set[str], edges: set[tuple[str, str]]
) -> dict[str, int]:
    """Memoized DFS giving each node its longest path length to a sink."""
    succ: dict[str, set[str]] = {v: set() for v in nodes}
    for u, v in edges:
        succ[u].add(v)
    memo: dict[str, int] = {}

    def walk(v: str) -> int:
        if v not in memo:
            memo[v] = 1 + max((walk(w) for w in succ[v]), default=-1)
        return memo[v]

    for v in nodes:
        walk(v)
    return memo
