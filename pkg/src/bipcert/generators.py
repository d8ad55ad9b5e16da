"""Projective-plane graphs, the first-moment theta-free construction, and random test hosts."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import InputError, StageFailure
from .forbidden import DEFAULT_CAPS, Caps, Theta, find_theta
from .gf import PrimePower, dot_table, field as gf_field, projective_points
from .graph import Graph

THETA_MAX_VERTICES = 64
THETA_MAX_DELETIONS = 5000


def _q_of(q) -> int:
    if isinstance(q, PrimePower):
        return q.q
    return PrimePower.of(q).q


def incidence_graph(q) -> Graph:
    """Point-line incidence graph of PG(2,q): points 0..N-1, lines N..2N-1."""
    f = gf_field(_q_of(q))
    pts = projective_points(f)
    n_pts = len(pts)
    inc = dot_table(f, pts, pts) == 0
    edges = [(i, n_pts + j) for i, j in zip(*np.nonzero(inc))]
    return Graph.from_edges(2 * n_pts, edges, parts=(range(n_pts), range(n_pts, 2 * n_pts)))


def polarity_graph(q) -> Graph:
    """Orthogonal-polarity graph: points of PG(2,q), x ~ y iff x.y = 0 and x != y."""
    f = gf_field(_q_of(q))
    pts = projective_points(f)
    orth = dot_table(f, pts, pts) == 0
    edges = [(i, j) for i, j in zip(*np.nonzero(orth)) if i < j]
    return Graph.from_edges(len(pts), edges)


def absolute_points(q) -> list[int]:
    f = gf_field(_q_of(q))
    pts = projective_points(f)
    return np.flatnonzero(np.diag(dot_table(f, pts, pts)) == 0).tolist()


# -- first-moment theta-free graphs ---------------------------------------------------------


def theta_p_odd(m: int, n: int, t: int, ell: int) -> float:
    q = ell // 2
    return (m * n) ** (-t * q / (2 * t * q + t - 1))


def theta_p_even(m: int, n: int, t: int, ell: int) -> float:
    """Edge probability where the copy-count bound meets half the expected edge count.

    Solves (1/2) m^(t(q-1)+1) n^(tq+1) p^(2tq) = (1/2) m n p numerically in log p.
    """
    q = ell // 2

    def gap(lp):
        return ((t * (q - 1) + 1) * math.log(m) + (t * q + 1) * math.log(n) + 2 * t * q * lp
                - (math.log(m) + math.log(n) + lp))

    if gap(0.0) <= 0:
        return 1.0
    return math.exp(brentq(gap, -200.0, 0.0, xtol=1e-15, rtol=4 * np.finfo(float).eps))


def theta_copy_bound(m: int, n: int, t: int, ell: int, p: float) -> float:
    q = ell // 2
    if ell % 2:
        return 0.5 * m ** (t * q + 1) * n ** (t * q + 1) * p ** (t * (2 * q + 1))
    return 0.5 * m ** (t * (q - 1) + 1) * n ** (t * q + 1) * p ** (2 * t * q)


@dataclass
class ThetaReport:
    m: int
    n: int
    t: int
    ell: int
    seed: int
    p: float
    p_rule: str
    edges_before: int
    edges_after: int
    copies_destroyed: int
    expected_edges: float
    copy_bound: float
    floor: float | None
    floor_met: bool | None
    deleted: list = field(default_factory=list)

    kind = "theta_free"

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        out.update({k: getattr(self, k) for k in self.__dataclass_fields__})
        out["deleted"] = [list(e) for e in self.deleted]
        return out


def random_bipartite(m: int, n: int, p: float, rng: np.random.Generator) -> Graph:
    mask = rng.random((m, n)) < p
    edges = [(i, m + j) for i, j in zip(*np.nonzero(mask))]
    return Graph.from_edges(m + n, edges, parts=(range(m), range(m, m + n)))


def random_theta_free(m: int, n: int, t: int, ell: int, seed: int,
                      caps: Caps = DEFAULT_CAPS) -> tuple[Graph, ThetaReport]:
    """Sample G(m,n,p) at the first-moment density, then delete one edge per theta copy."""
    if t < 2 or ell < 2:
        raise InputError("need t >= 2 and ell >= 2")
    if m < 1 or n < 1:
        raise InputError("need m, n >= 1")
    if m + n > THETA_MAX_VERTICES:
        raise InputError(f"m+n={m + n} above the copy-search cap {THETA_MAX_VERTICES}; use a smaller instance")
    Theta(t, ell)  # validates against the pattern caps
    if ell % 2:
        p, rule = theta_p_odd(m, n, t, ell), "closed-form"
    else:
        p, rule = theta_p_even(m, n, t, ell), "numeric"
    rng = np.random.default_rng(seed)
    g = random_bipartite(m, n, p, rng)
    before = g.m
    deleted = []
    while True:
        w = find_theta(g, t, ell, caps)
        if w is None:
            break
        if len(deleted) >= THETA_MAX_DELETIONS:
            raise StageFailure("theta", "deletion cap reached; use a smaller instance",
                               {"deleted": len(deleted)})
        path = w.theta_paths()[0]
        e = (min(path[0], path[1]), max(path[0], path[1]))
        g = g.with_edges(remove=[e])
        deleted.append(e)
    floor = None
    if ell % 2:
        q = ell // 2
        floor = 0.5 * (m * n) ** ((t * q + t - 1) / (2 * t * q + t - 1))
    report = ThetaReport(m, n, t, ell, seed, p, rule, before, g.m, len(deleted), m * n * p,
                         theta_copy_bound(m, n, t, ell, p), floor,
                         None if floor is None else g.m >= floor, deleted)
    return g, report


# -- random hosts with a minimum degree ----------------------------------------------------------------


def random_mindeg_graph(n: int, d: int, seed: int, model: str = "matchings", attempts: int = 200) -> Graph:
    """Random graph with min degree >= d.

    ``matchings``: union of d edge-disjoint random perfect matchings (d-regular, n even).
    ``gnp``: G(n, 2d/n) with deficient vertices topped up by random new neighbours.
    """
    if not 0 <= d < n:
        raise InputError("need 0 <= d < n")
    rng = np.random.default_rng(seed)
    if model == "matchings":
        if n % 2:
            raise InputError("the matchings model needs even n")
        adj = [0] * n
        for _ in range(d):
            for _ in range(attempts):
                pairs = _random_matching(adj, n, rng)
                if pairs is not None:
                    break
            else:
                raise StageFailure("matchings", f"no new perfect matching in {attempts} tries",
                                   {"n": n, "d": d})
            for a, b in pairs:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
        return Graph(n, tuple(adj))
    if model == "gnp":
        p = min(1.0, 2 * d / n)
        upper = np.triu(rng.random((n, n)) < p, 1)
        adj = [0] * n
        for a, b in zip(*np.nonzero(upper)):
            adj[a] |= 1 << int(b)
            adj[b] |= 1 << int(a)
        for x in range(n):
            missing = d - adj[x].bit_count()
            if missing > 0:
                pool = [y for y in range(n) if y != x and not adj[x] >> y & 1]
                for y in rng.choice(pool, size=missing, replace=False).tolist():
                    adj[x] |= 1 << y
                    adj[y] |= 1 << x
        return Graph(n, tuple(adj))
    raise InputError(f"unknown model {model!r}")


def _random_matching(adj, n, rng):
    order = rng.permutation(n).tolist()
    free = set(order)
    pairs = []
    for a in order:
        if a not in free:
            continue
        free.discard(a)
        options = sorted(b for b in free if not adj[a] >> b & 1)
        if not options:
            return None
        b = options[int(rng.integers(len(options)))]
        free.discard(b)
        pairs.append((a, b))
    return pairs


def connect(g: Graph) -> Graph:
    """Join consecutive components by an edge between their lowest vertices."""
    comps = g.components()
    links = [((a & -a).bit_length() - 1, (b & -b).bit_length() - 1) for a, b in zip(comps, comps[1:])]
    return g.with_edges(add=[(min(x, y), max(x, y)) for x, y in links])


def random_connected(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < p, 1)
    return connect(Graph.from_edges(n, [(int(a), int(b)) for a, b in zip(*np.nonzero(upper))]))


def layered_graph(branch: int, depth: int) -> Graph:
    """Complete bipartite joins between consecutive layers of sizes 1, b, b, ..., b (depth+1 layers).

    Bipartite with girth 4 when branch >= 2; every vertex off the root has degree >= branch.
    """
    sizes = [1] + [branch] * depth
    start = np.cumsum([0] + sizes).tolist()
    edges = []
    for i in range(depth):
        for a in range(start[i], start[i + 1]):
            for b in range(start[i + 1], start[i + 2]):
                edges.append((a, b))
    return Graph.from_edges(start[-1], edges)


def regular_tree(branch: int, depth: int) -> Graph:
    """Rooted tree where every internal vertex has ``branch`` children."""
    edges, frontier, nxt = [], [0], 1
    for _ in range(depth):
        new = []
        for x in frontier:
            for _ in range(branch):
                edges.append((x, nxt))
                new.append(nxt)
                nxt += 1
        frontier = new
    return Graph.from_edges(nxt, edges)


def bipartite_with_noise(m: int, n: int, p: float, noise: int, noise_degree: int, seed: int) -> Graph:
    """Random bipartite core plus ``noise`` extra vertices each joined to ``noise_degree`` core vertices.

    Noise vertices are adjacent to both sides, so they create odd cycles.
    """
    rng = np.random.default_rng(seed)
    core = random_bipartite(m, n, p, rng)
    total = m + n + noise
    edges = core.edges()
    for i in range(noise):
        x = m + n + i
        for y in sorted(rng.choice(m + n, size=noise_degree, replace=False).tolist()):
            edges.append((y, x))
    return Graph.from_edges(total, edges)

