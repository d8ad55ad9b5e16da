"""Invariant suites over generated instances, one per structural lemma."""
from __future__ import annotations

from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .certificates import FailureReport
from .constants import derive_constants
from .errors import InputError
from .extremal import SmoothnessParams
from .forbidden import find_theta
from .generators import (connect, incidence_graph, layered_graph, random_bipartite, random_connected,
                         random_mindeg_graph, random_theta_free, regular_tree, theta_p_odd)
from .graph import Graph, diameter, layer_masks
from .lemmas import (augmenting_vertices, ball_floor, bipartize, c2l_ball, c2l_reach, expansion_cert,
                     family_is_tree, robust_reach)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def _int_seed(rng) -> int:
    return int(rng.integers(2 ** 62))


@dataclass
class SuiteReport:
    lemma: str
    seed: int
    trials: int
    passed: int
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    kind = "verify_lemma"

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def to_json(self) -> dict:
        return {"kind": self.kind, "lemma": self.lemma, "seed": self.seed, "trials": self.trials,
                "passed": self.passed, "failures": self.failures, "notes": self.notes}


# -- per-trial checks; each returns (problems, note) -----------------------------------------


def bipartize_instance(seed: int, trial: int) -> Graph:
    rng = trial_rng(seed, trial)
    n = int(rng.integers(4, 61))
    p = float(rng.uniform(1.5 / n, 0.5))
    return random_connected(n, p, _int_seed(rng))


def check_bipartize(g: Graph) -> list[str]:
    res = bipartize(g)
    h, (x, y) = res.h, res.sides
    out = []
    if x & y or len(x) + len(y) != g.n:
        out.append("sides do not partition V")
    for a, b in g.edges():
        crossing = (a in x) != (b in x)
        if crossing != h.has_edge(a, b):
            out.append(f"edge {a}-{b} misfiled")
    if any(h.adj[v] & ~g.adj[v] for v in range(g.n)):
        out.append("H not a subgraph")
    if not h.is_connected():
        out.append("H disconnected")
    out += [f"deg_H({v})={h.degree(v)} < deg_G/2" for v in range(g.n) if 2 * h.degree(v) < g.degree(v)]
    hist = res.cut_history
    if any(b < a for a, b in zip(hist, hist[1:])):
        out.append("cut value decreased")
    if hist and hist[-1] != h.m:
        out.append("final cut value mismatch")
    return out


def diameter_instance(seed: int, trial: int) -> tuple[Graph, int]:
    rng = trial_rng(seed, trial)
    n = 2 * int(rng.integers(5, 31))
    d = int(rng.integers(1, max(2, n // 4)))
    model = "matchings" if trial % 2 == 0 else "gnp"
    return connect(random_mindeg_graph(n, d, _int_seed(rng), model)), d


def check_diameter(g: Graph, d: int) -> list[str]:
    if g.min_degree() < d:
        return [f"planted min degree {d} lost"]
    diam = diameter(g)
    return [] if diam * d <= 3 * g.n else [f"diameter {diam} > 3n/D = {3 * g.n / d:.3f}"]


def reach_instance(seed: int, trial: int):
    rng = trial_rng(seed, trial)
    n = int(rng.integers(6, 41))
    g = random_connected(n, float(rng.uniform(2.0 / n, 0.4)), _int_seed(rng))
    root = int(rng.integers(n))
    ell_max = int(rng.integers(1, 5))
    cap = int(rng.integers(1, 5))
    target = None if rng.random() < 0.7 else int(rng.integers(1, n))
    strict = bool(rng.random() < 0.3)
    return g, root, ell_max, cap, target, strict


def check_reach(g, root, ell_max, cap, target, strict) -> list[str]:
    pf = robust_reach(g, root, ell_max, cap, target, strict=strict)
    out = pf.problems(g, max_len=ell_max, cap=cap)
    if pf.maximal and augmenting_vertices(g, pf, ell_max, cap):
        out.append("maximal flag set but an augmenting vertex exists")
    if not pf.maximal and (target is None or len(pf.paths) < target):
        out.append("stopped early without the maximal flag")
    return out


def expansion_instance(seed: int, trial: int):
    rng = trial_rng(seed, trial)
    kind = trial % 3
    if kind == 0:
        g = incidence_graph(int(rng.choice([2, 3, 4, 5, 7])))
    elif kind == 1:
        d = int(rng.integers(2, 9))
        g = Graph.complete_bipartite(d, d)
    else:
        m = int(rng.integers(6, 20))
        g = random_bipartite(m, m, 0.5, rng)
        g = g.restrict(g.component_of(0)) if g.adj[0] else g
    root = int(rng.integers(g.n))
    return g, root


def check_expansion(g: Graph, root: int) -> list[str]:
    deg = g.min_degree() or 1
    params = SmoothnessParams(1.5, 1.0, 1.0, 1.0, 1.0)
    n = g.n
    delta = deg / n ** 0.5
    res = expansion_cert(g, root, delta, params, enforce_min_degree=False)
    sizes = [m.bit_count() for m in layer_masks(g, root)] + [0, 0]
    ell0 = derive_constants(1.5, 1.0, 1.0, delta).ell0
    if isinstance(res, FailureReport):
        if any(sizes[j] >= res.data["needed"] and sizes[j + 1] >= res.data["needed"] for j in range(ell0 + 1)):
            return ["failure reported although a good layer pair exists"]
        return []
    out = []
    if (sizes[res.j0], sizes[res.j0 + 1]) != tuple(res.sizes):
        out.append("certificate sizes differ from BFS recount")
    if min(res.sizes) < res.threshold - 1e-9:
        out.append("size below threshold")
    if res.j0 > res.ell0:
        out.append("j0 above ell0")
    if any(sizes[j] >= res.needed and sizes[j + 1] >= res.needed for j in range(res.j0)):
        out.append("j0 not minimal")
    return out


def c2l_instance(seed: int, trial: int):
    """(host, root, ell, d for the ball, d for the tree family or None, seed)."""
    rng = trial_rng(seed, trial)
    kind = trial % 3
    if kind == 0:  # C_4-free; d=4 keeps the random 2-split feasible at this size
        q = int(rng.choice([5, 7]))
        g, ell, d_ball, d_reach = incidence_graph(q), 2, q + 1, 4
    elif kind == 1:  # has C_4, so only the tree family applies
        b = int(rng.integers(4, 9))
        g, ell, d_ball, d_reach = layered_graph(b, 3), 2, None, b
    else:
        b = int(rng.integers(2, 4))
        g, ell, d_ball, d_reach = regular_tree(b, 4), int(rng.choice([2, 3])), 1, None
    return g, int(rng.integers(g.n)), ell, d_ball, d_reach, _int_seed(rng)


def check_c2l(g, root, ell, d_ball, d_reach, seed) -> list[str]:
    out = []
    if d_ball is not None:
        size = c2l_ball(g, root, ell, d_ball)
        if size < ball_floor(d_ball, ell):
            out.append("ball below (d/4l)^l")
    if d_reach is None:
        return out
    pf = c2l_reach(g, root, ell, d_reach, seed, retries=400)
    out += pf.problems(g, exact_len=ell, cap=Fraction(d_reach, 2 * ell) ** (ell - 1))
    if not family_is_tree(pf):
        out.append("paths do not form a tree")
    if not pf.paths:
        out.append("empty family")
    return out


def theta_instance(seed: int, trial: int):
    rng = trial_rng(seed, trial)
    t = int(rng.choice([2, 3]))
    ell = int(rng.choice([2, 3]))
    m = int(rng.integers(6, 15))
    n = int(rng.integers(m, 15))
    return m, n, t, ell, _int_seed(rng)


def check_theta(m, n, t, ell, seed) -> list[str]:
    g, rep = random_theta_free(m, n, t, ell, seed)
    out = []
    if find_theta(g, t, ell) is not None:
        out.append("theta copy survived")
    if rep.edges_after != rep.edges_before - rep.copies_destroyed or rep.edges_after != g.m:
        out.append("edge accounting off")
    if ell % 2:
        if rep.p != theta_p_odd(m, n, t, ell):
            out.append("p differs from the closed form")
    else:
        q = ell // 2
        lhs = 0.5 * m ** (t * (q - 1) + 1) * n ** (t * q + 1) * rep.p ** (2 * t * q)
        if rep.p < 1 and abs(lhs / (0.5 * m * n * rep.p) - 1) > 1e-9:
            out.append("p does not balance the expectation bound")
    return out


SUITES = {
    "2.2": (expansion_instance, check_expansion, True),
    "2.3": (reach_instance, check_reach, True),
    "2.4": (bipartize_instance, check_bipartize, False),
    "2.5": (diameter_instance, check_diameter, True),
    "3.2": (c2l_instance, check_c2l, True),
    "prop6.1": (theta_instance, check_theta, True),
}


def _one(args):
    lemma, seed, trial = args
    make, check, spread = SUITES[lemma]
    inst = make(seed, trial)
    try:
        problems = check(*inst) if spread else check(inst)
    except Exception as exc:  # a crash is a failed trial, with the reason kept
        problems = [f"{type(exc).__name__}: {exc}"]
    return trial, problems


def run_suite(lemma: str, trials: int, seed: int, jobs: int = 1) -> SuiteReport:
    if lemma not in SUITES:
        raise InputError(f"unknown lemma {lemma!r}; choose from {sorted(SUITES)}")
    tasks = [(lemma, seed, i) for i in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_one, tasks, chunksize=max(1, trials // (4 * jobs))))
    else:
        results = [_one(t) for t in tasks]
    failures = [{"trial": i, "problems": p} for i, p in results if p]
    return SuiteReport(lemma, seed, trials, trials - len(failures), failures)
