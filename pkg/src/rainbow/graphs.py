"""Levelled bipartite input graphs.

These are the raw ingredients every code is built from: simple graphs
whose vertices carry a level tag (0 or 1) and whose edges always join a
level-0 vertex to a level-1 vertex.  The module provides the example
families (even cycles, the figure-eight, complete bipartite graphs),
gluing and ungluing of vertices, and the graph statistics the
construction needs (circuit rank, girth, cycle decompositions).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path


class GraphError(ValueError):
    """Invalid graph input or operation; carries the offending vertex when known."""

    def __init__(self, message: str, vertex: int | None = None):
        super().__init__(message)
        self.vertex = vertex


class LevelledGraph:
    """Immutable simple graph with a 0/1 level per vertex.

    Vertex ids are dense integers 0..n-1; edges are stored as sorted
    (u, v) pairs in sorted order, so equal graphs compare equal.
    """

    __slots__ = ("levels", "edges")

    def __init__(self, levels, edges):
        levels = tuple(int(l) for l in levels)
        if any(l not in (0, 1) for l in levels):
            raise GraphError("vertex levels must be 0 or 1")
        n = len(levels)
        norm = []
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}", vertex=u)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) references a missing vertex")
            if levels[u] == levels[v]:
                raise GraphError(
                    f"edge ({u},{v}) joins two level-{levels[u]} vertices", vertex=u
                )
            e = (min(u, v), max(u, v))
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        self.levels = levels
        self.edges = tuple(sorted(norm))

    @property
    def n_vertices(self) -> int:
        return len(self.levels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbours(self, v: int) -> list[int]:
        out = [b if a == v else a for a, b in self.edges if v in (a, b)]
        return sorted(out)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return [sorted(x) for x in adj]

    def degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def level_counts(self) -> tuple[int, int]:
        return self.levels.count(0), self.levels.count(1)

    def __eq__(self, other):
        if not isinstance(other, LevelledGraph):
            return NotImplemented
        return self.levels == other.levels and self.edges == other.edges

    def __hash__(self):
        return hash((self.levels, self.edges))

    def __repr__(self):
        return f"LevelledGraph({self.n_vertices} vertices, {self.n_edges} edges)"


@dataclass(frozen=True)
class GluingRecord:
    """Everything needed to report and undo a single gluing step."""

    kept: int
    removed: int
    level: int
    moved_neighbours: tuple[int, ...]
    merged_parallel: bool


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def make_cycle(length: int) -> LevelledGraph:
    """Even cycle with levels alternating 0,1,0,1,... around the ring."""
    if length < 4 or length % 2:
        raise GraphError(f"cycle length must be even and >= 4, got {length}")
    levels = [i % 2 for i in range(length)]
    edges = [(i, (i + 1) % length) for i in range(length)]
    return LevelledGraph(levels, edges)


def make_figure_eight() -> LevelledGraph:
    """Two length-4 cycles sharing a single level-1 vertex (degree 4)."""
    g = disjoint_union(make_cycle(4), make_cycle(4))
    glued, _ = glue(g, 1, 5)
    return glued


def make_complete_bipartite(a: int, b: int) -> LevelledGraph:
    """All edges between a level-0 vertices and b level-1 vertices."""
    if a < 1 or b < 1:
        raise GraphError(f"part sizes must be >= 1, got ({a},{b})")
    levels = [0] * a + [1] * b
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return LevelledGraph(levels, edges)


def disjoint_union(g1: LevelledGraph, g2: LevelledGraph) -> LevelledGraph:
    """Both graphs side by side; g2's vertex ids are offset by g1's count."""
    off = g1.n_vertices
    levels = g1.levels + g2.levels
    edges = list(g1.edges) + [(u + off, v + off) for u, v in g2.edges]
    return LevelledGraph(levels, edges)


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------


def connected_components(g: LevelledGraph) -> list[list[int]]:
    adj = g.adjacency()
    seen = [False] * g.n_vertices
    comps = []
    for s in range(g.n_vertices):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def circuit_rank(g: LevelledGraph) -> int:
    """Independent cycle count: edges - vertices + connected components."""
    return g.n_edges - g.n_vertices + len(connected_components(g))


def girth(g: LevelledGraph) -> float:
    """Length of the shortest cycle; math.inf when the graph is a forest."""
    adj = g.adjacency()
    best = math.inf
    for s in range(g.n_vertices):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        while queue:
            nxt = []
            for u in queue:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        nxt.append(w)
                    elif w != parent[u]:
                        best = min(best, dist[u] + dist[w] + 1)
            queue = nxt
    return best


def is_all_even_degree(g: LevelledGraph) -> bool:
    return all(d % 2 == 0 for d in g.degrees())


def cycle_decomposition(g: LevelledGraph) -> list[list[int]]:
    """Partition the edges into closed walks with no repeated edge.

    Greedy trail following: repeatedly start at the lowest-id vertex
    that still has unused edges and always leave along the unused edge
    to the lowest-id neighbour.  With all degrees even a trail can only
    get stuck back at its start, so every walk closes.

    Returns closed walks as vertex lists with walk[0] == walk[-1].
    """
    for v, d in enumerate(g.degrees()):
        if d % 2:
            raise GraphError(f"vertex {v} has odd degree {d}", vertex=v)
    adj = g.adjacency()
    used: set[tuple[int, int]] = set()
    walks = []
    for start in range(g.n_vertices):
        while True:
            first = next(
                (w for w in adj[start] if (min(start, w), max(start, w)) not in used),
                None,
            )
            if first is None:
                break
            walk = [start]
            current = start
            while True:
                step = next(
                    (
                        w
                        for w in adj[current]
                        if (min(current, w), max(current, w)) not in used
                    ),
                    None,
                )
                if step is None:
                    break
                used.add((min(current, step), max(current, step)))
                walk.append(step)
                current = step
            if walk[0] != walk[-1]:
                raise GraphError(f"open trail from {walk[0]} to {walk[-1]}")
            walks.append(walk)
    return walks


# ---------------------------------------------------------------------------
# gluing
# ---------------------------------------------------------------------------


def glue(g: LevelledGraph, keep: int, remove: int) -> tuple[LevelledGraph, GluingRecord]:
    """Merge vertex `remove` into `keep`, re-targeting its edges.

    The two vertices must have the same level and must not be adjacent.
    Edges that become parallel after the merge are collapsed to one and
    flagged on the returned record.  Remaining ids above `remove` shift
    down by one to stay dense.
    """
    n = g.n_vertices
    if not (0 <= keep < n and 0 <= remove < n) or keep == remove:
        raise GraphError(f"bad gluing pair ({keep},{remove})")
    if g.levels[keep] != g.levels[remove]:
        raise GraphError(
            f"gluing pair ({keep},{remove}) has unequal levels", vertex=remove
        )
    moved = g.neighbours(remove)
    if keep in moved:
        raise GraphError(
            f"gluing pair ({keep},{remove}) is adjacent", vertex=remove
        )
    keep_nbrs = set(g.neighbours(keep))
    merged = any(x in keep_nbrs for x in moved)

    def shift(v: int) -> int:
        return v if v < remove else v - 1

    new_edges = set()
    for u, v in g.edges:
        if u == remove:
            u = keep
        if v == remove:
            v = keep
        e = (min(shift(u), shift(v)), max(shift(u), shift(v)))
        new_edges.add(e)
    levels = [l for i, l in enumerate(g.levels) if i != remove]
    record = GluingRecord(
        kept=keep,
        removed=remove,
        level=g.levels[keep],
        moved_neighbours=tuple(moved),
        merged_parallel=merged,
    )
    return LevelledGraph(levels, sorted(new_edges)), record


def unglue(g: LevelledGraph, v: int, moved_edges) -> LevelledGraph:
    """Split vertex `v`: a new vertex (appended id) takes `moved_edges`."""
    move = set()
    edge_set = set(g.edges)
    for a, b in moved_edges:
        e = (min(int(a), int(b)), max(int(a), int(b)))
        if v not in e or e not in edge_set:
            raise GraphError(f"edge {e} is not incident to vertex {v}", vertex=v)
        move.add(e)
    nv = g.n_vertices
    edges = []
    for e in g.edges:
        if e in move:
            other = e[0] if e[1] == v else e[1]
            edges.append((other, nv))
        else:
            edges.append(e)
    return LevelledGraph(g.levels + (g.levels[v],), edges)


def undo_glue(g: LevelledGraph, record: GluingRecord) -> LevelledGraph:
    """Exact inverse of `glue` for the graph it produced."""
    if record.merged_parallel:
        raise GraphError("cannot undo a gluing that merged parallel edges")

    def unshift(v: int) -> int:
        return v if v < record.removed else v + 1

    levels = list(g.levels)
    edges = [(unshift(u), unshift(v)) for u, v in g.edges]
    levels.insert(record.removed, record.level)
    out = []
    for u, v in edges:
        if u == record.kept and v in record.moved_neighbours:
            u = record.removed
        elif v == record.kept and u in record.moved_neighbours:
            v = record.removed
        out.append((u, v))
    return LevelledGraph(levels, out)


# ---------------------------------------------------------------------------
# serialization and factor shorthands
# ---------------------------------------------------------------------------


def to_json_dict(g: LevelledGraph) -> dict:
    return {
        "vertices": [{"id": i, "level": l} for i, l in enumerate(g.levels)],
        "edges": [[u, v] for u, v in g.edges],
    }


def from_json_dict(doc: dict) -> LevelledGraph:
    """Load a graph, re-mapping arbitrary vertex ids to dense 0..n-1."""
    try:
        raw = [(int(v["id"]), int(v["level"])) for v in doc["vertices"]]
        raw_edges = [(int(u), int(v)) for u, v in doc["edges"]]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph document: {exc}") from exc
    ids = [i for i, _ in raw]
    if len(set(ids)) != len(ids):
        raise GraphError("duplicate vertex ids")
    order = {old: new for new, old in enumerate(sorted(ids))}
    levels = [0] * len(raw)
    for old, level in raw:
        levels[order[old]] = level
    try:
        edges = [(order[u], order[v]) for u, v in raw_edges]
    except KeyError as exc:
        raise GraphError(f"edge references missing vertex {exc}") from exc
    return LevelledGraph(levels, edges)


def load_graph(path: str | Path) -> LevelledGraph:
    with open(path, encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))


def save_graph(g: LevelledGraph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(g), fh, indent=1, sort_keys=True)
        fh.write("\n")


def parse_factor(spec: str) -> LevelledGraph:
    """Resolve a factor shorthand ("cycle:6", "fig8", "kbip:4,4") or file path."""
    spec = spec.strip()
    if spec == "fig8":
        return make_figure_eight()
    if spec.startswith("cycle:"):
        return make_cycle(int(spec.split(":", 1)[1]))
    if spec.startswith("kbip:"):
        a, b = spec.split(":", 1)[1].split(",")
        return make_complete_bipartite(int(a), int(b))
    if Path(spec).exists():
        return load_graph(spec)
    raise GraphError(f"unknown factor spec {spec!r} (not a shorthand or file)")
