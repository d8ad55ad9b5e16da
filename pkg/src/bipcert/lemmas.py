"""Certificate-producing versions of the structural lemmas.

Asymptotic hypotheses ("n sufficiently large") are replaced by explicit
numeric parameters; each result records in ``fidelity`` whether the
textbook thresholds were met at the given size.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .certificates import ExpansionCert, FailureReport, PathFamily, inputs_hash
from .constants import as_fraction, derive_constants
from .errors import InputError, PreconditionError, StageFailure
from .extremal import SmoothnessParams
from .forbidden import find_cycle_exact
from .graph import Graph, _check_vertex, bfs_tree, iter_bits, layer_masks, to_mask, tree_path


# -- bipartite spanning subgraph --------------------------------------------------


@dataclass(frozen=True)
class BipartizeResult:
    h: Graph
    sides: tuple[frozenset[int], frozenset[int]]
    cut_history: tuple[int, ...] = field(default=())

    def side_of(self, v: int) -> int:
        return 0 if v in self.sides[0] else 1


def bipartize(g: Graph) -> BipartizeResult:
    """Spanning bipartite H with deg_H(v) >= deg_G(v)/2 that is connected.

    Local search: flip the vertex with the largest cut gain (lowest index on
    ties) until none gains; if H is then disconnected, flip the smallest
    H-component, which turns every G-edge leaving it into a cut edge.
    """
    if g.n == 0:
        return BipartizeResult(g, (frozenset(), frozenset()), (0,))
    if not g.is_connected():
        raise InputError("bipartize needs a connected graph; call it once per component")
    side = [0] * g.n
    for d, layer in enumerate(layer_masks(g, 0)):
        for v in iter_bits(layer):
            side[v] = d & 1
    masks = [0, 0]
    for v in range(g.n):
        masks[side[v]] |= 1 << v

    def cut() -> int:
        return sum((g.adj[v] & masks[1 - side[v]]).bit_count() for v in range(g.n)) // 2

    def flip(vs):
        for v in vs:
            masks[side[v]] &= ~(1 << v)
            side[v] ^= 1
            masks[side[v]] |= 1 << v

    history = [cut()]
    while True:
        best_v, best_gain = -1, 0
        for v in range(g.n):
            gain = (g.adj[v] & masks[side[v]]).bit_count() - (g.adj[v] & masks[1 - side[v]]).bit_count()
            if gain > best_gain:
                best_v, best_gain = v, gain
        if best_v >= 0:
            flip([best_v])
            history.append(cut())
            continue
        h = _cut_graph(g, masks)
        comps = h.components()
        if len(comps) == 1:
            break
        smallest = min(comps, key=lambda c: (c.bit_count(), (c & -c).bit_length()))
        flip(list(iter_bits(smallest)))
        history.append(cut())
    h = _cut_graph(g, masks)
    sides = (frozenset(iter_bits(masks[0])), frozenset(iter_bits(masks[1])))
    return BipartizeResult(Graph(g.n, h.adj, sides), sides, tuple(history))


def _cut_graph(g: Graph, masks) -> Graph:
    rows = tuple(g.adj[v] & (masks[1] if masks[0] >> v & 1 else masks[0]) for v in range(g.n))
    return Graph.trusted(g.n, rows)


# -- expansion ------------------------------------------------------------------


def _ceil_needed(threshold: float) -> int:
    return max(1, math.ceil(threshold - 1e-9))


def expansion_cert(g: Graph, u: int, delta, params: SmoothnessParams, *, n: int | None = None,
                   threshold: float | None = None, enforce_min_degree: bool = True):
    """Two consecutive large BFS layers from ``u`` within ell0 steps, or a FailureReport.

    ``threshold`` defaults to mu * n with mu from the constant formulas.
    """
    _check_vertex(g, u)
    if not g.is_bipartite():
        raise PreconditionError("expansion certificate needs a bipartite host")
    n = g.n if n is None else n
    consts = derive_constants(params.alpha, params.beta, params.rho, delta)
    floor_deg = float(as_fraction(delta)) * n ** (params.alpha - 1)
    low = [v for v in range(g.n) if g.degree(v) < floor_deg - 1e-9]
    if low and enforce_min_degree:
        raise PreconditionError(f"{len(low)} vertices below min degree {floor_deg:.4g}", payload=low)
    thr = consts.mu * n if threshold is None else float(threshold)
    needed = _ceil_needed(thr)
    sizes = [m.bit_count() for m in layer_masks(g, u)]
    balls = np.cumsum(sizes).tolist()
    absorption = [bool(params.bigC * b ** params.beta <= params.rho * b ** params.alpha + 1e-9)
                  for b in balls[:consts.ell0 + 1]]
    fidelity = {"min_degree_met": not low, "default_threshold": threshold is None,
                "absorption": absorption}
    tag = inputs_hash(g, root=u, delta=str(delta), params=vars(params), n=n, threshold=thr)
    padded = sizes + [0, 0]
    for j in range(consts.ell0 + 1):
        if padded[j] >= needed and padded[j + 1] >= needed:
            return ExpansionCert(u, j, (padded[j], padded[j + 1]), thr, needed, consts.ell0, sizes,
                                 all(absorption), fidelity, tag)
    stalled = next((j for j in range(len(padded)) if padded[j] < needed), len(padded))
    return FailureReport(
        "expansion",
        f"no two consecutive layers of size >= {needed} within {consts.ell0} steps; layer {stalled} stalled",
        {"layer_sizes": sizes, "threshold": thr, "needed": needed, "ell0": consts.ell0,
         "stalled_layer": stalled},
        tag,
    )


# -- robust reachability --------------------------------------------------------------


def default_cap(n: int) -> int:
    return math.ceil(n / math.log(n)) if n >= 3 else 1


def robust_reach(g: Graph, u: int, ell_max: int, cap: int | None = None, target: int | None = None,
                 *, strict: bool = False, within: int | None = None) -> PathFamily:
    """Greedy family of short root paths with every non-root vertex on <= cap paths.

    Each round BFS-es from ``u`` avoiding saturated vertices and adds newly
    reached vertices (all of them in batch mode, the first only when strict)
    as long as their BFS path has spare capacity everywhere.
    """
    _check_vertex(g, u)
    if ell_max < 1:
        raise InputError("ell_max must be >= 1")
    cap = default_cap(g.n) if cap is None else cap
    if cap < 1:
        raise InputError("cap must be >= 1")
    allowed = ((1 << g.n) - 1) if within is None else within
    paths: dict[int, tuple[int, ...]] = {}
    usage = [0] * g.n
    maximal = False
    while target is None or len(paths) < target:
        saturated = to_mask(v for v in range(g.n) if v != u and usage[v] >= cap)
        parent = bfs_tree(g, u, allowed & ~saturated, ell_max)
        fresh = [v for v in parent if v != u and v not in paths]
        if not fresh:
            maximal = True
            break
        for v in fresh:
            path = tree_path(parent, v)
            if any(usage[x] >= cap for x in path[1:]):
                continue
            for x in path[1:]:
                usage[x] += 1
            paths[v] = tuple(path)
            if strict or (target is not None and len(paths) >= target):
                break
    return PathFamily(u, paths, maximal=maximal,
                      fidelity={"cap": cap, "ell_max": ell_max, "strict": strict, "target": target},
                      inputs_hash=inputs_hash(g, root=u, ell_max=ell_max, cap=cap, target=target, strict=strict))


def augmenting_vertices(g: Graph, pf: PathFamily, ell_max: int, cap: int, within: int | None = None) -> set[int]:
    """Vertices outside the family reachable within ell_max while avoiding saturated vertices."""
    usage = pf.usage()
    blocked = {v for v, c in usage.items() if c >= cap and v != pf.root}
    dist = {pf.root: 0}
    queue = [pf.root]
    for x in queue:
        if dist[x] == ell_max:
            continue
        for y in g.neighbors(x):
            if within is not None and not within >> y & 1:
                continue
            if y not in dist and y not in blocked:
                dist[y] = dist[x] + 1
                queue.append(y)
    return {v for v in dist if v != pf.root and v not in pf.paths}


# -- C_{2l}-free lemmas -----------------------------------------------------------------


def _check_bipartite_mindeg(g: Graph, d: int) -> None:
    if not g.is_bipartite():
        raise PreconditionError("host must be bipartite")
    low = [v for v in range(g.n) if g.degree(v) < d]
    if low:
        raise PreconditionError(f"{len(low)} vertices have degree < {d}", payload=low)


def ball_floor(d: int, ell: int) -> int:
    return math.ceil(Fraction(d, 4 * ell) ** ell)


def c2l_ball(g: Graph, u: int, ell: int, d: int, *, check_free: bool = True) -> int:
    """|B_ell(u)|, asserted to be at least (d/4ell)^ell."""
    _check_vertex(g, u)
    if ell < 2:
        raise InputError("ell must be >= 2")
    _check_bipartite_mindeg(g, d)
    if check_free:
        w = find_cycle_exact(g, 2 * ell)
        if w is not None:
            raise PreconditionError(f"host contains C_{2 * ell}", payload=w)
    size = sum(m.bit_count() for m in layer_masks(g, u, max_depth=ell))
    if size < ball_floor(d, ell):
        w = find_cycle_exact(g, 2 * ell)
        if w is not None:
            raise PreconditionError(f"ball below (d/4l)^l exposes a C_{2 * ell}", payload=w)
        raise StageFailure("c2l_ball", "ball bound failed without a C_2l witness", {"size": size})
    return size


def c2l_reach(g: Graph, u: int, ell: int, d: int, seed: int, *, retries: int = 100,
              degree_factor: float = 15.0) -> PathFamily:
    """Tree-shaped family of length-ell root paths with bounded vertex usage.

    A seeded random ell-partition is redrawn until every vertex has at least
    d/2ell neighbours in each part; layer i+1 of the tree is grown inside part
    i+1, floor(d/2ell) fresh children per vertex.
    """
    _check_vertex(g, u)
    if ell < 2:
        raise InputError("ell must be >= 2")
    if d < 2 * ell:
        raise InputError(f"need d >= 2*ell = {2 * ell}")
    _check_bipartite_mindeg(g, d)
    need = math.ceil(Fraction(d, 2 * ell))
    children = d // (2 * ell)
    rng = np.random.default_rng(seed)
    worst = None
    for attempt in range(1, retries + 1):
        part = rng.integers(ell, size=g.n)
        # the root sits in no part, so every counted neighbour can become a fresh child
        part_masks = [to_mask(np.flatnonzero(part == i).tolist()) & ~(1 << u) for i in range(ell)]
        deficit = None
        for x in range(g.n):
            counts = [(g.adj[x] & pm).bit_count() for pm in part_masks]
            low = min(range(ell), key=lambda i: counts[i])
            if counts[low] < need and (deficit is None or need - counts[low] > deficit[2]):
                deficit = (x, low, need - counts[low])
        if deficit is None:
            break
        if worst is None or deficit[2] > worst[2]:
            worst = deficit
    else:
        raise StageFailure("c2l_reach.split", f"no valid {ell}-partition in {retries} draws",
                           {"worst_vertex": worst[0], "part": worst[1], "deficit": worst[2],
                            "needed": need})
    parent = {u: u}
    layer = [u]
    for i in range(ell):
        nxt = []
        for x in layer:
            fresh = [y for y in iter_bits(g.adj[x] & part_masks[i]) if y not in parent][:children]
            for y in fresh:
                parent[y] = x
            nxt.extend(fresh)
        layer = nxt
    paths = {v: tuple(tree_path(parent, v)) for v in layer}
    n = g.n
    size_floor = 0.5 * (d / (8 * ell * ell)) ** ell
    fidelity = {
        "attempts": attempt,
        "children_per_vertex": children,
        "usage_bound": (d / (2 * ell)) ** (ell - 1),
        "degree_threshold_met": d >= degree_factor * ell * math.log(max(n, 2)),
        "size_floor": size_floor,
        "size_floor_met": len(paths) >= size_floor,
        "parts": [sorted(iter_bits(pm)) for pm in part_masks],
    }
    return PathFamily(u, paths, maximal=False, endpoint_pure=True, fidelity=fidelity,
                      inputs_hash=inputs_hash(g, root=u, ell=ell, d=d, seed=seed, retries=retries))


def family_is_tree(pf: PathFamily) -> bool:
    parent = {}
    for path in pf.paths.values():
        for a, b in zip(path, path[1:]):
            if parent.setdefault(b, a) != a:
                return False
    return pf.root not in parent
