"""Odd-cycle construction through a same-side edge, and the peeling report.

The pipeline follows the proof recipe stage by stage.  Each asymptotic
threshold is a config knob whose default is the formula value at the given n
(``enforce=True``) or a small desk-scale value (``enforce=False``); knobs that
differ from the formula are listed in the result's ``deviations``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .certificates import (BipartiteCert, CycleWitness, FailureReport, PathFamily, inputs_hash,
                           validate_cycle)
from .constants import as_fraction, derive_constants, derive_constants_c2l, mu_of
from .errors import InputError, PreconditionError, StageFailure
from .extremal import SmoothnessParams
from .graph import (Graph, iter_bits, layer_masks, bfs_tree, min_degree_subgraph,
                    shortest_path_to, to_mask, tree_path)
from .lemmas import bipartize, c2l_reach, default_cap, expansion_cert, robust_reach

STAGES = ("bipartize", "certify", "pick_edge", "split", "reach", "pigeonhole", "coloring", "h2",
          "Q", "expansion", "W0", "hstar", "t", "T", "assemble")


def stage_rng(seed: int, stage: str) -> np.random.Generator:
    """PCG64 stream for one stage, keyed by (seed, stage index)."""
    return np.random.default_rng([seed, STAGES.index(stage)])


# -- building blocks ---------------------------------------------------------------------


def balanced_split(h: Graph, seed: int, retries: int = 100, fraction=Fraction(1, 4),
                   rng: np.random.Generator | None = None) -> tuple[frozenset[int], frozenset[int]]:
    """Uniform random halving with every vertex keeping >= fraction*deg neighbours on each side."""
    frac = as_fraction(fraction)
    need = [math.ceil(frac * d) for d in h.degrees()]
    for x, d in enumerate(h.degrees()):
        if 2 * need[x] > d:
            raise StageFailure("split", f"vertex {x} of degree {d} cannot have {need[x]} neighbours on both sides",
                               {"worst_vertex": x, "degree": d, "needed": need[x], "attempts": 0})
    rng = np.random.default_rng(seed) if rng is None else rng
    worst = None
    for attempt in range(1, retries + 1):
        bits = rng.integers(2, size=h.n)
        a_mask = to_mask(np.flatnonzero(bits == 0).tolist())
        b_mask = ((1 << h.n) - 1) & ~a_mask
        bad = None
        for x in range(h.n):
            low = min((h.adj[x] & a_mask).bit_count(), (h.adj[x] & b_mask).bit_count())
            if low < need[x] and (bad is None or need[x] - low > bad[1]):
                bad = (x, need[x] - low)
        if bad is None:
            return frozenset(iter_bits(a_mask)), frozenset(iter_bits(b_mask))
        if worst is None or bad[1] > worst[1]:
            worst = bad
    raise StageFailure("split", f"no balanced split in {retries} draws",
                       {"worst_vertex": worst[0], "deficit": worst[1], "attempts": retries})


def good_coloring_filter(pf: PathFamily, p: int, seed: int, retries: int = 100,
                         rng: np.random.Generator | None = None) -> PathFamily:
    """Keep paths whose endpoint gets colour 2 and every other vertex (root included) colour 1."""
    if any(len(path) - 1 != p for path in pf.paths.values()):
        raise InputError(f"all paths must have length {p}")
    if not pf.paths:
        return PathFamily(pf.root, {}, endpoint_pure=True, fidelity={"threshold": 0, "attempts": 0},
                          inputs_hash=pf.inputs_hash)
    need = math.ceil(Fraction(len(pf.paths), 2 ** (p + 1)))
    verts = sorted({v for path in pf.paths.values() for v in path})
    rng = np.random.default_rng(seed) if rng is None else rng
    best = 0
    for attempt in range(1, retries + 1):
        colour = dict(zip(verts, (rng.integers(2, size=len(verts)) + 1).tolist()))
        kept = {z: path for z, path in pf.paths.items()
                if colour[z] == 2 and all(colour[x] == 1 for x in path[:-1])}
        best = max(best, len(kept))
        if len(kept) >= need:
            return PathFamily(pf.root, kept, endpoint_pure=True,
                              fidelity={"threshold": need, "attempts": attempt},
                              inputs_hash=pf.inputs_hash)
    raise StageFailure("coloring", f"best colouring kept {best} < {need} paths",
                       {"best": best, "threshold": need, "attempts": retries})


def greedy_even_path(h: Graph, w: int, t: int, avoid=frozenset(), targets: int | None = None,
                     budget: int | None = None) -> list[int]:
    """Path of length exactly t from w ending in ``targets``, missing ``avoid``.

    Depth-first, lowest index first, with at most ``budget`` vertex expansions
    (default 10*(t+1)).
    """
    if t < 0 or t % 2:
        raise InputError("t must be even and non-negative")
    allowed = ((1 << h.n) - 1) & ~to_mask(x for x in avoid if x != w)
    targets = allowed if targets is None else targets & allowed
    if t == 0:
        if not targets >> w & 1:
            raise StageFailure("T", f"w={w} is not a valid endpoint", {"t": 0})
        return [w]
    budget = 10 * (t + 1) if budget is None else budget
    path = [w]
    used = 1 << w
    stack = [iter_bits(h.adj[w] & allowed)]
    expansions = 0
    while stack:
        nxt = next((y for y in stack[-1] if not used >> y & 1), None)
        if nxt is None:
            stack.pop()
            used &= ~(1 << path.pop())
            continue
        if len(path) == t:
            if targets >> nxt & 1:
                return path + [nxt]
            continue
        expansions += 1
        if expansions > budget:
            break
        path.append(nxt)
        used |= 1 << nxt
        stack.append(iter_bits(h.adj[nxt] & allowed))
    raise StageFailure("T", f"no path of length {t} from {w} within {budget} expansions",
                       {"t": t, "expansions": expansions, "budget": budget,
                        "min_degree": min((h.degree(x) for x in range(h.n) if h.adj[x]), default=0)})


# -- configuration ------------------------------------------------------------------------------


_KNOBS = ("split_fraction", "ell_max", "cap", "reach_degree", "h2_min_degree", "inner_degree",
          "r_max", "hstar_min_degree")


@dataclass(frozen=True)
class ConstructorConfig:
    k: int
    mode: str = "general"  # "general" | "c2l"
    alpha: float = 1.5
    beta: float = 1.0
    rho: float = 1.0
    bigC: float = 1.0
    delta: float = 1.0
    ell: int = 2  # c2l mode
    seed: int = 0
    enforce: bool = True
    split_retries: int = 100
    coloring_retries: int = 100
    reach_retries: int = 100
    path_budget: int | None = None  # default 10*k
    try_all_edges: bool = False
    # threshold knobs; None picks the formula value (enforce) or the desk default
    split_fraction: float | None = None
    ell_max: int | None = None
    cap: int | None = None
    reach_degree: int | None = None
    h2_min_degree: int | None = None
    inner_degree: int | None = None
    r_max: int | None = None
    hstar_min_degree: int | None = None

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 3 or self.k % 2 == 0:
            raise InputError("k must be an odd integer >= 3")
        if self.mode not in ("general", "c2l"):
            raise InputError("mode must be 'general' or 'c2l'")
        if self.mode == "c2l" and self.ell < 2:
            raise InputError("ell must be >= 2")
        if self.enforce and self.k < self.constants().k0:
            raise InputError(f"k={self.k} is below k0={self.constants().k0}; use enforce=false")

    def params(self) -> SmoothnessParams:
        return SmoothnessParams(self.alpha, self.beta, self.rho, self.bigC, self.rho)

    def constants(self):
        if self.mode == "c2l":
            return derive_constants_c2l(self.ell, self.delta)
        return derive_constants(self.alpha, self.beta, self.rho, self.delta)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "ConstructorConfig":
        unknown = set(obj) - set(cls.__dataclass_fields__)
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**obj)
        except TypeError as exc:
            raise InputError(str(exc)) from None


def formula_knobs(cfg: ConstructorConfig, n: int) -> dict:
    """Threshold values the proof prescribes at order n."""
    c = cfg.constants()
    delta = float(as_fraction(cfg.delta))
    if cfg.mode == "general":
        a = float(as_fraction(cfg.alpha))
        scale = n ** (a - 1)
        mu16 = mu_of(cfg.alpha, cfg.beta, cfg.rho, as_fraction(cfg.delta) / 16)
        gamma = mu16 * delta / (2 ** (c.ell0 + 4) * c.ell0)
        mu_gamma = mu_of(cfg.alpha, cfg.beta, cfg.rho, gamma)
        return {
            "split_fraction": 0.25, "ell_max": c.ell0, "cap": default_cap(n), "reach_degree": None,
            "h2_min_degree": math.ceil(gamma * scale), "inner_degree": None, "r_max": c.ell0 + 1,
            "hstar_min_degree": max(cfg.k, math.ceil(mu_gamma * delta * scale / 16)),
            "_reach_floor": mu16 * n, "_gamma": gamma, "_mu_gamma": mu_gamma, "_q_max": c.bigL,
            "_w_floor": 0.5 * mu_gamma * n,
        }
    ell = cfg.ell
    scale = n ** (1 / ell)
    gamma = c.gamma
    return {
        "split_fraction": 0.25, "ell_max": ell, "cap": None,
        "reach_degree": math.ceil(delta / 8 * scale),
        "h2_min_degree": math.ceil(gamma * scale), "inner_degree": math.ceil(gamma / 2 * scale),
        "r_max": ell,
        "hstar_min_degree": max(cfg.k, math.ceil(delta * gamma ** ell / (2 ** (4 * ell + 5) * ell ** (2 * ell)) * scale)),
        "_reach_floor": 0.5 * (delta / (64 * ell * ell)) ** ell * n, "_gamma": gamma, "_q_max": c.bigL + 1,
        "_w_floor": 0.25 * (gamma / (16 * ell * ell)) ** ell * n,
    }


def desk_knobs(cfg: ConstructorConfig, n: int) -> dict:
    c = cfg.constants()
    return {"split_fraction": 0.125, "ell_max": c.ell0, "cap": default_cap(n), "reach_degree": None,
            "h2_min_degree": 1, "inner_degree": None, "r_max": c.ell0 + 1, "hstar_min_degree": 1}


def resolve_knobs(cfg: ConstructorConfig, n: int) -> tuple[dict, dict]:
    paper = formula_knobs(cfg, n)
    base = paper if cfg.enforce else {**paper, **desk_knobs(cfg, n)}
    used = {}
    for name in _KNOBS:
        given = getattr(cfg, name)
        used[name] = base[name] if given is None else given
    deviations = {name: {"paper": paper[name], "used": used[name]}
                  for name in _KNOBS if paper[name] is not None and used[name] != paper[name]}
    if cfg.mode == "general":
        for name in ("reach_degree", "inner_degree"):
            deviations.pop(name, None)
    return used, deviations


# -- the pipeline -------------------------------------------------------------------------------------


class _Fail(Exception):
    def __init__(self, stage: str, message: str, data: dict | None = None):
        super().__init__(message)
        self.stage, self.message, self.data = stage, message, data or {}


def _bipartite_edges(h: Graph, left: int, right: int) -> Graph:
    """Edges of h with one end in ``left`` and the other in ``right``."""
    rows = [0] * h.n
    for x in iter_bits(left):
        rows[x] = h.adj[x] & right
        for y in iter_bits(rows[x]):
            rows[y] |= 1 << x
    return Graph.trusted(h.n, tuple(rows))


@dataclass
class _Run:
    g: Graph
    cfg: ConstructorConfig
    knobs: dict
    formula: dict
    deviations: dict
    trace: dict = field(default_factory=dict)

    def fail(self, stage, message, **data):
        raise _Fail(stage, message, data)

    def check(self, ok: bool, stage: str, message: str, **data):
        """Formula-level check: fatal under enforce, recorded otherwise."""
        if ok:
            return
        if self.cfg.enforce:
            self.fail(stage, message, **data)
        self.trace.setdefault("shortfalls", []).append({"stage": stage, "message": message, **data})


def find_odd_cycle(g: Graph, cfg: ConstructorConfig):
    """CycleWitness through a same-side edge, a BipartiteCert, or a FailureReport."""
    if g.n == 0 or not g.is_connected():
        raise InputError("find_odd_cycle needs a connected graph")
    tag = inputs_hash(g, config=cfg.to_json())
    try:
        bip = bipartize(g)
    except InputError as exc:
        return FailureReport("bipartize", str(exc), {"stage_index": 1}, tag)
    side = [bip.side_of(x) for x in range(g.n)]
    same = [(a, b) for a, b in g.edges() if side[a] == side[b]]
    if not same:
        return BipartiteCert(bip.sides, tag)
    formula = formula_knobs(cfg, g.n)
    knobs, deviations = resolve_knobs(cfg, g.n)
    first = None
    for u, v in (same if cfg.try_all_edges else same[:1]):
        run = _Run(g, cfg, knobs, formula, deviations, {"edge": [u, v], "cut_history": list(bip.cut_history)})
        try:
            return _pipeline(run, bip.h, u, v, tag)
        except _Fail as f:
            report = FailureReport(f.stage, f.message,
                                   {"stage_index": STAGES.index(f.stage) + 1, **f.data, "trace": run.trace,
                                    "deviations": deviations}, tag)
        except StageFailure as exc:
            report = FailureReport(exc.stage, str(exc),
                                   {"stage_index": STAGES.index(exc.stage) + 1 if exc.stage in STAGES else 0,
                                    **(exc.data or {}), "trace": run.trace, "deviations": deviations}, tag)
        first = first or report
    return first


def _pipeline(run: _Run, h: Graph, u: int, v: int, tag: str) -> CycleWitness:
    cfg, knobs, n = run.cfg, run.knobs, h.n
    # 4: random split, u goes to A
    a_set, b_set = balanced_split(h, cfg.seed, cfg.split_retries, Fraction(str(knobs["split_fraction"])),
                                  rng=stage_rng(cfg.seed, "split"))
    if u not in a_set:
        a_set, b_set = b_set, a_set
    a_mask, b_mask = to_mask(a_set), to_mask(b_set)
    run.trace["split"] = {"A": len(a_set), "B": len(b_set)}

    # 5-7: root family in H[A], endpoints used only as endpoints
    if cfg.mode == "general":
        fam, p = _general_family(run, h, u, a_mask)
    else:
        fam, p = _c2l_family(run, h, u, a_set)
    s_mask = to_mask(fam.paths)

    # 8: H'' = min-degree part of the S'-to-B edges
    h1 = _bipartite_edges(h, s_mask, b_mask)
    peel = min_degree_subgraph(h1, knobs["h2_min_degree"], within=h1.non_isolated())
    h2_mask = to_mask(peel.kept)
    if not h2_mask:
        run.fail("h2", f"no subgraph of min degree {knobs['h2_min_degree']} in the S'-B edges",
                 edges=h1.m, S=len(fam.paths), needed=knobs["h2_min_degree"])
    h2 = peel.graph
    run.trace["h2"] = {"vertices": len(peel.kept), "edges": h2.m, "min_degree": knobs["h2_min_degree"]}

    # 9: shortest path Q from v, avoiding u
    if cfg.mode == "general":
        q_targets = h2_mask
    else:  # the side of H' that shares u's colour class
        q_targets = h2_mask & (s_mask if cfg.ell % 2 == 0 else b_mask)
    within = ((1 << n) - 1) & ~(1 << u)
    q_path = shortest_path_to(h, v, q_targets, within)
    if q_path is None:
        run.fail("Q", f"{v} cannot reach H'' without passing {u}", targets=q_targets.bit_count())
    y, q = q_path[-1], len(q_path) - 1
    q_mask = to_mask(q_path)
    run.check(q <= run.formula["_q_max"], "Q", f"q={q} exceeds the diameter bound", q=q,
              bound=run.formula["_q_max"])
    run.trace["Q"] = {"y": y, "q": q}

    # 10: candidate layers W with paths R_w from y
    groups = _w_groups(run, h2, y, s_mask, q_mask, u)
    if not groups:
        run.fail("expansion", f"no layer of H'' from {y} lies in S''", y=y)

    budget = 10 * cfg.k if cfg.path_budget is None else cfg.path_budget
    attempts = []
    for r, w_paths in groups:
        # 11: drop W0
        w_all = set(w_paths)
        w0 = {w for w in w_all if q_mask & to_mask(fam.paths[w])}
        w_live = w_all - w0
        run.check(len(w_live) >= run.formula["_w_floor"], "W0",
                  f"|W - W0| = {len(w_live)} below {run.formula['_w_floor']:.4g}", r=r)
        if not w_live:
            attempts.append({"r": r, "stage": "W0", "W": len(w_all), "W0": len(w0)})
            continue
        # 12: H* inside the (W - W0, B) edges
        hs = _bipartite_edges(h, to_mask(w_live), b_mask)
        hpeel = min_degree_subgraph(hs, knobs["hstar_min_degree"], within=hs.non_isolated())
        star_w = to_mask(w_live) & to_mask(hpeel.kept)
        if not star_w:
            attempts.append({"r": r, "stage": "hstar", "W_live": len(w_live),
                             "needed": knobs["hstar_min_degree"]})
            continue
        # 13: remaining length for T
        t = cfg.k - 1 - q - r - p
        if t < 0:
            attempts.append({"r": r, "stage": "t", "t": t, "min_k": 1 + q + r + p})
            continue
        if t % 2:
            raise _Fail("t", "parity anomaly: t is odd", {"q": q, "r": r, "p": p, "k": cfg.k,
                                                          "anomaly": True})
        # 14: greedy T for each w in turn
        for w in iter_bits(star_w):
            r_path = w_paths[w]
            avoid = (set(q_path) | set(r_path)) - {w}
            try:
                t_path = greedy_even_path(hpeel.graph, w, t, avoid, star_w, budget)
            except StageFailure as exc:
                attempts.append({"r": r, "w": w, "stage": "T", **exc.data})
                continue
            return _assemble(run, u, v, q_path, r_path, t_path, fam.paths[t_path[-1]], h2_mask, tag)
    last = attempts[-1]["stage"] if attempts else "expansion"
    raise _Fail(last, f"no candidate layer closed a C_{cfg.k}", {"attempts": attempts, "q": q, "p": p})


def _general_family(run: _Run, h: Graph, u: int, a_mask: int):
    cfg, knobs = run.cfg, run.knobs
    fam = robust_reach(h, u, knobs["ell_max"], knobs["cap"], within=a_mask)
    run.check(len(fam.paths) >= run.formula["_reach_floor"], "reach",
              f"|U|={len(fam.paths)} below {run.formula['_reach_floor']:.4g}", U=len(fam.paths))
    if not fam.paths:
        run.fail("reach", f"{u} has no neighbour inside A", U=0)
    lengths = Counter(len(path) - 1 for path in fam.paths.values())
    p = min(lengths, key=lambda x: (-lengths[x], x))
    pure = PathFamily(u, {z: path for z, path in fam.paths.items() if len(path) - 1 == p},
                      inputs_hash=fam.inputs_hash)
    run.trace["reach"] = {"U": len(fam.paths), "lengths": dict(sorted(lengths.items())), "p": p,
                          "S": len(pure.paths)}
    good = good_coloring_filter(pure, p, cfg.seed, cfg.coloring_retries, rng=stage_rng(cfg.seed, "coloring"))
    run.trace["coloring"] = {"S_prime": len(good.paths), **good.fidelity}
    if not good.paths:
        run.fail("coloring", "no good paths survive", S=len(pure.paths))
    return good, p


def _c2l_family(run: _Run, h: Graph, u: int, a_set):
    cfg, knobs = run.cfg, run.knobs
    sub, labels = h.induced(sorted(a_set))
    index = {x: i for i, x in enumerate(labels)}
    d = knobs["reach_degree"] if knobs["reach_degree"] is not None else sub.min_degree()
    if knobs["reach_degree"] is None:
        run.deviations.setdefault("reach_degree", {"paper": run.formula["reach_degree"], "used": d})
    try:
        fam = c2l_reach(sub, index[u], cfg.ell, d, cfg.seed, retries=cfg.reach_retries)
    except (InputError, PreconditionError) as exc:
        run.fail("reach", str(exc), d=d)
    paths = {labels[z]: tuple(labels[x] for x in path) for z, path in fam.paths.items()}
    run.check(len(paths) >= run.formula["_reach_floor"], "reach",
              f"|S|={len(paths)} below {run.formula['_reach_floor']:.4g}", S=len(paths))
    run.trace["reach"] = {"S": len(paths), "d": d, "p": cfg.ell}
    if not paths:
        run.fail("reach", "empty tree family", d=d)
    return PathFamily(u, paths, endpoint_pure=True, inputs_hash=fam.inputs_hash), cfg.ell


def _w_groups(run: _Run, h2: Graph, y: int, s_mask: int, q_mask: int, u: int):
    """Candidate (r, {w: R_w}) groups with every w in S''."""
    cfg, knobs = run.cfg, run.knobs
    if cfg.mode == "c2l":
        alive = h2.non_isolated() & ~(q_mask & ~(1 << y))
        peel = min_degree_subgraph(h2, knobs["inner_degree"] or 1, within=alive)
        if y not in peel.kept:
            run.fail("expansion", f"y={y} peeled away at degree {knobs['inner_degree']}")
        sub, labels = peel.graph.induced(sorted(peel.kept))
        index = {x: i for i, x in enumerate(labels)}
        d = knobs["inner_degree"] or sub.min_degree()
        try:
            fam = c2l_reach(sub, index[y], cfg.ell, d, cfg.seed + 1, retries=cfg.reach_retries)
        except (InputError, PreconditionError) as exc:
            run.fail("expansion", str(exc), d=d)
        paths = {labels[w]: [labels[x] for x in path] for w, path in fam.paths.items()}
        return [(cfg.ell, {w: r for w, r in paths.items() if s_mask >> w & 1})]
    if cfg.enforce:
        cert = expansion_cert(h2, y, run.formula["_gamma"], cfg.params(), n=h2.n, enforce_min_degree=False)
        if isinstance(cert, FailureReport):
            run.fail("expansion", cert.message, **cert.data)
        depths = [cert.j0, cert.j0 + 1]
    else:
        depths = range(knobs["r_max"] + 1)
    parent = bfs_tree(h2, y, max_depth=max(depths))
    layers = layer_masks(h2, y, max_depth=max(depths))
    groups = []
    for r in depths:
        if r < len(layers) and layers[r] and not layers[r] & ~s_mask:
            groups.append((r, {w: tree_path(parent, w) for w in iter_bits(layers[r])}))
    return groups


def _assemble(run: _Run, u, v, q_path, r_path, t_path, p_path, h2_mask, tag) -> CycleWitness:
    cfg, g = run.cfg, run.g
    problems = []
    if cfg.mode == "general" and to_mask(q_path) & h2_mask != 1 << q_path[-1]:
        problems.append("Q meets H'' outside y")
    if set(p_path) & set(q_path):
        problems.append("P_w* meets Q")
    if set(p_path[:-1]) & (set(r_path) | set(t_path)):
        problems.append("P_w* meets R_w or T")
    cycle = [u] + list(q_path) + list(r_path[1:]) + list(t_path[1:]) + list(reversed(p_path[1:-1]))
    lengths = {"uv": 1, "Q": len(q_path) - 1, "R_w": len(r_path) - 1, "T": len(t_path) - 1,
               "P": len(p_path) - 1}
    cw = CycleWitness(tuple(cycle), (u, v),
                      {"uv": [u, v], "Q": list(q_path), "R_w": list(r_path), "T": list(t_path),
                       "P": list(p_path)},
                      lengths, dict(run.deviations), tag)
    problems += validate_cycle(g, cw, cfg.k)
    if problems:
        raise _Fail("assemble", "; ".join(problems), {"cycle": cycle})
    return cw


# -- peeling ----------------------------------------------------------------------------------------


def ceil_threshold(delta, n: int, alpha) -> int:
    """ceil(delta * n**(alpha-1)) computed exactly for rational inputs."""
    d, a = as_fraction(delta), as_fraction(alpha)
    e = a - 1
    if d <= 0:
        raise InputError("delta must be positive")
    if n == 0:
        return 0
    approx = max(0, math.ceil(float(d) * n ** float(e)) - 2)
    while not _at_least(approx, d, n, e):
        approx += 1
    return approx


def _at_least(c: int, d: Fraction, n: int, e: Fraction) -> bool:
    """c >= d * n**e for e = a/b >= 0 via (c/d)**b >= n**a."""
    if c <= 0:
        return False
    return (Fraction(c) / d) ** e.denominator >= Fraction(n) ** e.numerator


@dataclass
class PeelReport:
    threshold: float
    ceil_threshold: int
    removed: tuple[int, ...]
    removed_edges: int
    h: Graph
    kept: tuple[int, ...]
    h_bipartite: bool
    inequality_ok: bool
    inputs_hash: str = ""

    kind = "peel"

    @property
    def t(self) -> int:
        return len(self.removed)

    def to_json(self) -> dict:
        return {"kind": self.kind, "inputs_hash": self.inputs_hash, "threshold": self.threshold,
                "ceil_threshold": self.ceil_threshold, "t": self.t, "removed": list(self.removed),
                "removed_edges": self.removed_edges, "edges_before": self.removed_edges + self.h.m,
                "edges_after": self.h.m, "kept": list(self.kept), "h_bipartite": self.h_bipartite,
                "inequality_ok": self.inequality_ok}


def peel_bipartize(g: Graph, delta, alpha) -> PeelReport:
    """Delete vertices of degree < delta*n^(alpha-1) (n fixed at the original order)."""
    a = as_fraction(alpha)
    if not 1 <= a <= 2:
        raise InputError("alpha must lie in [1, 2]")
    c = ceil_threshold(delta, g.n, a)
    peel = min_degree_subgraph(g, c)
    t = len(peel.removed)
    # removed_edges <= t * delta * n^(alpha-1), exactly
    ok = t == 0 and peel.removed_edges == 0 or t > 0 and (
        peel.removed_edges == 0 or _at_least_frac(Fraction(peel.removed_edges, t), as_fraction(delta), g.n, a - 1))
    return PeelReport(float(as_fraction(delta)) * g.n ** float(a - 1), c, peel.removed, peel.removed_edges,
                      peel.graph, tuple(sorted(peel.kept)), peel.graph.is_bipartite(), ok,
                      inputs_hash(g, delta=str(delta), alpha=str(alpha)))


def _at_least_frac(x: Fraction, d: Fraction, n: int, e: Fraction) -> bool:
    """x <= d * n**e exactly."""
    if e < 0:
        raise InputError("exponent must be non-negative")
    return (x / d) ** e.denominator <= Fraction(n) ** e.numerator
