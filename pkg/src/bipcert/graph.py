"""Undirected graphs over dense vertex indices with adjacency stored as int bitsets.

Row ``adj[v]`` has bit ``w`` set iff ``vw`` is an edge.  Python ints give
word-sized ANDs/ORs for free, which is all the brute-force searches need.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from .errors import GraphParseError, InputError

MAX_VERTICES = 4096


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def lowest_bits(mask: int, k: int) -> list[int]:
    out = []
    for v in iter_bits(mask):
        if len(out) == k:
            break
        out.append(v)
    return out


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]
    parts: tuple[frozenset[int], frozenset[int]] | None = field(default=None)

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise InputError(f"vertex count {self.n} outside [0, {MAX_VERTICES}]")
        if len(self.adj) != self.n:
            raise InputError("adjacency row count does not match n")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise InputError(f"row {v} references a vertex >= n")
            if row >> v & 1:
                raise InputError(f"self-loop at {v}")
            for w in iter_bits(row):
                if not self.adj[w] >> v & 1:
                    raise InputError(f"asymmetric adjacency {v}-{w}")
        if self.parts is not None:
            a, b = self.parts
            if a & b or len(a) + len(b) != self.n or (a | b) != frozenset(range(self.n)):
                raise InputError("parts must be disjoint and cover all vertices")
            ma = to_mask(a)
            for v in a:
                if self.adj[v] & ma:
                    raise InputError(f"edge inside a part at vertex {v}")
            mb = to_mask(b)
            for v in b:
                if self.adj[v] & mb:
                    raise InputError(f"edge inside a part at vertex {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], parts=None) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InputError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {u}-{v} out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        if parts is not None:
            parts = (frozenset(map(int, parts[0])), frozenset(map(int, parts[1])))
        return cls(n, tuple(rows), parts)

    @classmethod
    def trusted(cls, n: int, adj, parts=None) -> "Graph":
        """Skip validation; for inner loops that maintain the invariants themselves."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", tuple(adj))
        object.__setattr__(g, "parts", parts)
        return g

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << v) for v in range(n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "Graph":
        edges = [(i, a + j) for i in range(a) for j in range(b)]
        return cls.from_edges(a + b, edges, (range(a), range(a, a + b)))

    # -- queries ---------------------------------------------------------

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            for v in iter_bits(self.adj[u] >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    @property
    def m(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def non_isolated(self) -> int:
        return to_mask(v for v in range(self.n) if self.adj[v])

    # -- derived graphs --------------------------------------------------

    def with_edges(self, add=(), remove=()) -> "Graph":
        rows = list(self.adj)
        for u, v in remove:
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        for u, v in add:
            if u == v:
                raise InputError(f"self-loop at {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))

    def restrict(self, vertices: int | Iterable[int]) -> "Graph":
        """Keep only edges inside ``vertices``; labels are unchanged."""
        mask = vertices if isinstance(vertices, int) else to_mask(vertices)
        rows = tuple(self.adj[v] & mask if mask >> v & 1 else 0 for v in range(self.n))
        return Graph(self.n, rows)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Relabelled induced subgraph; ``labels[i]`` is the original vertex."""
        labels = sorted(set(vertices))
        index = {v: i for i, v in enumerate(labels)}
        edges = [(index[u], index[v]) for u, v in self.edges() if u in index and v in index]
        return Graph.from_edges(len(labels), edges), labels

    # -- structure -------------------------------------------------------

    def two_coloring(self) -> list[int] | None:
        """BFS 2-colouring (component roots get colour 0), or None if an odd cycle exists."""
        color = [-1] * self.n
        for s in range(self.n):
            if color[s] >= 0:
                continue
            color[s] = 0
            stack = [s]
            while stack:
                x = stack.pop()
                for y in iter_bits(self.adj[x]):
                    if color[y] < 0:
                        color[y] = 1 - color[x]
                        stack.append(y)
                    elif color[y] == color[x]:
                        return None
        return color

    def is_bipartite(self) -> bool:
        return self.two_coloring() is not None

    def component_of(self, v: int, within: int | None = None) -> int:
        allowed = ((1 << self.n) - 1) if within is None else within
        seen = 1 << v
        frontier = seen
        while frontier:
            nxt = 0
            for x in iter_bits(frontier):
                nxt |= self.adj[x]
            nxt &= allowed & ~seen
            seen |= nxt
            frontier = nxt
        return seen

    def components(self) -> list[int]:
        left = (1 << self.n) - 1
        out = []
        while left:
            v = (left & -left).bit_length() - 1
            comp = self.component_of(v)
            out.append(comp)
            left &= ~comp
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or self.component_of(0) == (1 << self.n) - 1


# -- layer decomposition ------------------------------------------------


@dataclass(frozen=True)
class LayerDecomposition:
    root: int
    layers: tuple[frozenset[int], ...]

    @property
    def balls(self) -> list[frozenset[int]]:
        out, acc = [], frozenset()
        for layer in self.layers:
            acc = acc | layer
            out.append(acc)
        return out

    def sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]

    def depth_of(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}


def _check_vertex(g: Graph, u: int) -> None:
    if not (isinstance(u, int) and 0 <= u < g.n):
        raise InputError(f"vertex {u} out of range for n={g.n}")


def layer_masks(g: Graph, u: int, within: int | None = None, max_depth: int | None = None) -> list[int]:
    allowed = ((1 << g.n) - 1) if within is None else within
    seen = frontier = 1 << u
    layers = [frontier]
    while frontier and (max_depth is None or len(layers) <= max_depth):
        nxt = 0
        for x in iter_bits(frontier):
            nxt |= g.adj[x]
        nxt &= allowed & ~seen
        if not nxt:
            break
        seen |= nxt
        layers.append(nxt)
        frontier = nxt
    return layers


def bfs_layers(g: Graph, u: int) -> LayerDecomposition:
    _check_vertex(g, u)
    return LayerDecomposition(u, tuple(frozenset(iter_bits(m)) for m in layer_masks(g, u)))


def bfs_tree(g: Graph, u: int, within: int | None = None, max_depth: int | None = None) -> dict[int, int]:
    """Parent pointers of a BFS tree from ``u``; neighbours scanned in index order."""
    allowed = ((1 << g.n) - 1) if within is None else within
    parent = {u: u}
    depth = {u: 0}
    queue = [u]
    for x in queue:
        if max_depth is not None and depth[x] >= max_depth:
            continue
        for y in iter_bits(g.adj[x] & allowed):
            if y not in parent:
                parent[y] = x
                depth[y] = depth[x] + 1
                queue.append(y)
    return parent


def tree_path(parent: dict[int, int], v: int) -> list[int]:
    path = [v]
    while parent[path[-1]] != path[-1]:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def shortest_path_to(g: Graph, source: int, targets: int, within: int | None = None) -> list[int] | None:
    """Shortest path from ``source`` to the nearest vertex of the ``targets`` mask."""
    if targets >> source & 1:
        return [source]
    parent = bfs_tree(g, source, within)
    best = None
    for v in parent:  # insertion order is BFS order
        if targets >> v & 1:
            best = v
            break
    return None if best is None else tree_path(parent, best)


def distances_from(g: Graph, u: int, within: int | None = None) -> list[float]:
    dist = [math.inf] * g.n
    for d, layer in enumerate(layer_masks(g, u, within)):
        for v in iter_bits(layer):
            dist[v] = d
    return dist


def diameter(g: Graph) -> float:
    """Largest shortest-path distance; ``math.inf`` when disconnected."""
    if g.n <= 1:
        return 0
    best = 0
    for u in range(g.n):
        layers = layer_masks(g, u)
        if sum(m.bit_count() for m in layers) < g.n:
            return math.inf
        best = max(best, len(layers) - 1)
    return best


@dataclass(frozen=True)
class Peeling:
    graph: Graph
    kept: frozenset[int]
    removed: tuple[int, ...]
    removed_edges: int

    @property
    def empty(self) -> bool:
        return not self.kept


def min_degree_subgraph(g: Graph, d: int, within: int | None = None) -> Peeling:
    """Repeatedly delete the lowest-indexed vertex of current degree < d.

    Vertex labels are preserved; deleted vertices become isolated in the
    returned graph.  ``removed_edges`` counts edges incident to each vertex at
    the moment it was deleted.
    """
    if d < 0:
        raise InputError("d must be non-negative")
    alive = ((1 << g.n) - 1) if within is None else within
    deg = [(g.adj[v] & alive).bit_count() if alive >> v & 1 else 0 for v in range(g.n)]
    removed: list[int] = []
    removed_edges = 0
    while True:
        victim = next((v for v in iter_bits(alive) if deg[v] < d), None)
        if victim is None:
            break
        alive &= ~(1 << victim)
        removed.append(victim)
        removed_edges += deg[victim]
        for w in iter_bits(g.adj[victim] & alive):
            deg[w] -= 1
    return Peeling(g.restrict(alive), frozenset(iter_bits(alive)), tuple(removed), removed_edges)


def power_graph(g: Graph, ell: int) -> Graph:
    if ell < 1:
        raise InputError("power must be >= 1")
    rows = []
    for u in range(g.n):
        reach = 0
        for layer in layer_masks(g, u, max_depth=ell)[1:]:
            reach |= layer
        rows.append(reach)
    return Graph(g.n, tuple(rows))


# -- text format ---------------------------------------------------------


def _prefix_parts(g: Graph) -> int | None:
    """Size m of the first part when parts are exactly {0..m-1}, {m..n-1}."""
    if g.parts is None:
        return None
    a, b = g.parts
    if 0 not in a and g.n:
        a, b = b, a
    m = len(a)
    if a != frozenset(range(m)):
        return -1
    return m


def write_graph(g: Graph) -> str:
    m = _prefix_parts(g)
    if m == -1:
        raise InputError("parts are not of the form {0..m-1},{m..n-1}; relabel before writing")
    lines = [f"graph {g.n}" if m is None else f"bigraph {m} {g.n - m}"]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> Graph:
    header = None
    edges: list[tuple[int, int]] = []
    seen = set()
    n = 0
    m = None
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            header = tokens
            try:
                if tokens[0] == "graph" and len(tokens) == 2:
                    n = int(tokens[1])
                elif tokens[0] == "bigraph" and len(tokens) == 3:
                    m, rest = int(tokens[1]), int(tokens[2])
                    if m < 0 or rest < 0:
                        raise ValueError
                    n = m + rest
                else:
                    raise ValueError
            except ValueError:
                raise GraphParseError(line_no, f"malformed header {line!r}") from None
            if not 0 <= n <= MAX_VERTICES:
                raise GraphParseError(line_no, f"vertex count {n} out of range")
            continue
        if len(tokens) != 2:
            raise GraphParseError(line_no, f"expected '<u> <v>', got {line!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphParseError(line_no, f"non-integer vertex in {line!r}") from None
        if u == v:
            raise GraphParseError(line_no, f"self-loop at {u}")
        if not u < v:
            raise GraphParseError(line_no, f"edge must be written with u < v, got {u} {v}")
        if u < 0 or v >= n:
            raise GraphParseError(line_no, f"vertex out of range in {u} {v}")
        if (u, v) in seen:
            raise GraphParseError(line_no, f"duplicate edge {u} {v}")
        if m is not None and (u < m) == (v < m):
            raise GraphParseError(line_no, f"edge {u} {v} lies within a part")
        seen.add((u, v))
        edges.append((u, v))
    if header is None:
        raise GraphParseError(1, "missing header")
    parts = None if m is None else (range(m), range(m, n))
    return Graph.from_edges(n, edges, parts)


def edge_list(path: Sequence[int]) -> list[tuple[int, int]]:
    return list(zip(path, path[1:]))
