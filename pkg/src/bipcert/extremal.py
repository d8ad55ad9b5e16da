"""Exact Zarankiewicz / Turan numbers at desk scale, plus analytic bound checks.

The exact search fills edge slots in lexicographic order, trying "edge
present" first.  Three prunings keep it tractable:

* every partial graph must stay family-free (checked only around the new edge);
* degrees are forced non-increasing along each side (any optimum can be
  relabelled that way);
* branch-and-bound on how many edges the remaining slots can still add.
"""
from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InputError
from .forbidden import (
    CompleteBipartite,
    FamilySpec,
    is_family_free,
    pattern_through_edge,
)
from .graph import Graph, write_graph

EXACT_BIPARTITE_CAP = 16
EXACT_TURAN_CAP = 10
SPLIT_SLOTS = 4  # top-level branches = first SPLIT_SLOTS slots


@dataclass(frozen=True)
class SmoothnessParams:
    alpha: float
    beta: float
    rho: float
    bigC: float
    rho0: float

    def __post_init__(self):
        if not 2 > self.alpha > self.beta >= 1:
            raise InputError("need 2 > alpha > beta >= 1")
        if min(self.rho, self.rho0, self.bigC) <= 0:
            raise InputError("rho, rho0 and C must be positive")


@dataclass(frozen=True)
class ExtremalRecord:
    kind: str  # "zarankiewicz" | "turan"
    m: int | None
    n: int
    family: FamilySpec
    value: int
    witness: Graph
    exact: bool = True
    nodes: int = field(default=0, compare=False)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "n": self.n,
            "family": self.family.to_json(),
            "family_hash": self.family.digest(),
            "value": self.value,
            "exact": self.exact,
            "witness": write_graph(self.witness),
        }


# -- search core ---------------------------------------------------------------


@dataclass
class _Problem:
    n_vertices: int
    slots: list[tuple[int, int]]
    family: FamilySpec
    bipartite_m: int | None  # left side size for Zarankiewicz, None for Turan


def _violates(adj: list[int], n_vertices: int, family: FamilySpec, u: int, v: int) -> bool:
    g = Graph.trusted(n_vertices, adj)
    return any(pattern_through_edge(g, p, u, v) for p in family.patterns)


class _Search:
    def __init__(self, prob: _Problem, best: int = -1):
        self.p = prob
        self.best = best
        self.best_adj: list[int] | None = None
        self.nodes = 0
        self.adj = [0] * prob.n_vertices
        self.deg = [0] * prob.n_vertices
        self.edges = 0
        if prob.bipartite_m is None:
            self._bound = self._turan_bound
            self._order_ok = self._turan_order_ok
            self._leaf_ok = self._turan_leaf_ok
        else:
            self._bound = self._zar_bound
            self._order_ok = self._zar_order_ok
            self._leaf_ok = self._zar_leaf_ok

    # Zarankiewicz: slot (i, m+j); rows i = left vertices, columns = right vertices
    def _zar_order_ok(self, k: int, u: int, v: int) -> bool:
        m = self.p.bipartite_m
        if u > 0 and self.deg[u] > self.deg[u - 1]:
            return False
        j = v - m
        if j > 0:
            undecided_prev_col = m - 1 - u
            if self.deg[v] > self.deg[v - 1] + undecided_prev_col:
                return False
        return True

    def _zar_leaf_ok(self) -> bool:
        m = self.p.bipartite_m
        cols = self.deg[m:]
        return all(cols[j] >= cols[j + 1] for j in range(len(cols) - 1))

    def _zar_bound(self, k: int) -> int:
        m = self.p.bipartite_m
        n = self.p.n_vertices - m
        i, col = divmod(k, n)
        if i >= m:
            return self.edges
        cap = self.deg[i - 1] if i > 0 else n
        room = min(n - col, cap - self.deg[i])
        row_max = self.deg[i] + room
        return self.edges + room + (m - 1 - i) * row_max

    # Turan: slot (i, j), i < j
    def _turan_order_ok(self, k: int, u: int, v: int) -> bool:
        # deg[u-1] is final once row u starts; vertex u may not overtake it
        return not (u > 0 and self.deg[u] > self.deg[u - 1])

    def _turan_leaf_ok(self) -> bool:
        d = self.deg
        return all(d[i] >= d[i + 1] for i in range(len(d) - 1))

    def _turan_bound(self, k: int) -> int:
        slots = self.p.slots
        remaining = len(slots) - k
        simple = self.edges + remaining
        if k >= len(slots):
            return self.edges
        i = slots[k][0]
        if i == 0:
            return simple
        n = self.p.n_vertices
        cap = self.deg[i - 1]
        # vertices >= i end with degree <= cap; vertices < i are final except row-i edges counted at i
        done = sum(self.deg[:i])
        return min(simple, (done + (n - i) * cap) // 2)

    def run(self, k: int = 0) -> None:
        self.nodes += 1
        slots = self.p.slots
        if k == len(slots):
            if self.edges > self.best and self._leaf_ok():
                self.best = self.edges
                self.best_adj = list(self.adj)
            return
        if self._bound(k) <= self.best:
            return
        u, v = slots[k]
        self._add(u, v)
        if self._order_ok(k, u, v) and not _violates(self.adj, self.p.n_vertices, self.p.family, u, v):
            self.run(k + 1)
        self._remove(u, v)
        if self._bound(k + 1) > self.best:
            self.run(k + 1)

    def _add(self, u, v):
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u
        self.deg[u] += 1
        self.deg[v] += 1
        self.edges += 1

    def _remove(self, u, v):
        self.adj[u] &= ~(1 << v)
        self.adj[v] &= ~(1 << u)
        self.deg[u] -= 1
        self.deg[v] -= 1
        self.edges -= 1

    def run_prefix(self, prefix: tuple[int, ...]) -> None:
        """Run the subtree where the first len(prefix) slots are fixed (1 = edge)."""
        for k, bit in enumerate(prefix):
            u, v = self.p.slots[k]
            if bit:
                self._add(u, v)
                if not self._order_ok(k, u, v) or _violates(self.adj, self.p.n_vertices, self.p.family, u, v):
                    return
        self.run(len(prefix))


def _prefixes(depth: int) -> list[tuple[int, ...]]:
    # DFS order with "edge present" first
    out = [()]
    for _ in range(depth):
        out = [p + (b,) for p in out for b in (1, 0)]
    return out


def _branch_worker(args):
    prob, prefix = args
    s = _Search(prob)
    s.run_prefix(prefix)
    return s.best, s.best_adj, s.nodes


def _solve(prob: _Problem, jobs: int = 1) -> tuple[int, list[int], int]:
    depth = min(SPLIT_SLOTS, len(prob.slots))
    prefixes = _prefixes(depth)
    if jobs <= 1:
        best, best_adj, nodes = -1, None, 0
        for prefix in prefixes:
            s = _Search(prob, best)
            s.run_prefix(prefix)
            nodes += s.nodes
            if s.best > best and s.best_adj is not None:
                best, best_adj = s.best, s.best_adj
        return best, best_adj, nodes
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_branch_worker, [(prob, p) for p in prefixes]))
    best, best_adj, nodes = -1, None, 0
    for value, adj, cnt in results:  # first branch wins ties
        nodes += cnt
        if value > best and adj is not None:
            best, best_adj = value, adj
    return best, best_adj, nodes


def zarankiewicz(m: int, n: int, family: FamilySpec, *, exact: bool = True, seed: int = 0,
                 restarts: int = 20, jobs: int = 1, cap: int = EXACT_BIPARTITE_CAP) -> ExtremalRecord:
    if not 1 <= m <= n:
        raise InputError("need 1 <= m <= n")
    parts = (range(m), range(m, m + n))
    if not exact:
        value, adj = _greedy(m + n, [(i, m + j) for i in range(m) for j in range(n)], family, seed, restarts)
        witness = Graph(m + n, tuple(adj), (frozenset(parts[0]), frozenset(parts[1])))
        return ExtremalRecord("zarankiewicz", m, n, family, value, witness, exact=False)
    if m + n > cap:
        raise InputError(f"m+n={m + n} exceeds the exact-search cap {cap}; use heuristic mode (exact=False)")
    prob = _Problem(m + n, [(i, m + j) for i in range(m) for j in range(n)], family, m)
    value, adj, nodes = _solve(prob, jobs)
    witness = Graph(m + n, tuple(adj), (frozenset(parts[0]), frozenset(parts[1])))
    return ExtremalRecord("zarankiewicz", m, n, family, value, witness, True, nodes)


def turan(n: int, family: FamilySpec, *, exact: bool = True, seed: int = 0, restarts: int = 20,
          jobs: int = 1, cap: int = EXACT_TURAN_CAP) -> ExtremalRecord:
    if n < 1:
        raise InputError("need n >= 1")
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if not exact:
        value, adj = _greedy(n, slots, family, seed, restarts)
        return ExtremalRecord("turan", None, n, family, value, Graph(n, tuple(adj)), exact=False)
    if n > cap:
        raise InputError(f"n={n} exceeds the exact-search cap {cap}; use heuristic mode (exact=False)")
    value, adj, nodes = _solve(_Problem(n, slots, family, None), jobs)
    return ExtremalRecord("turan", None, n, family, value, Graph(n, tuple(adj)), True, nodes)


def _greedy(n_vertices, slots, family, seed, restarts):
    rng = np.random.default_rng(seed)
    best, best_adj = -1, None
    for _ in range(max(1, restarts)):
        adj = [0] * n_vertices
        count = 0
        for idx in rng.permutation(len(slots)):
            u, v = slots[idx]
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            if _violates(adj, n_vertices, family, u, v):
                adj[u] &= ~(1 << v)
                adj[v] &= ~(1 << u)
            else:
                count += 1
        if count > best:
            best, best_adj = count, adj
    return best, best_adj


# -- analytic bounds -------------------------------------------------------------


def furedi_bound(m: int, n: int, s: int, t: int) -> float:
    """(t-s+1)^{1/s} m n^{1-1/s} + s m + s n^{2-2/s}, stated for m <= n."""
    if not 1 <= s <= t:
        raise InputError("need 1 <= s <= t")
    if m > n:
        raise InputError("the bound is stated for m <= n")
    return (t - s + 1) ** (1 / s) * m * n ** (1 - 1 / s) + s * m + s * n ** (2 - 2 / s)


def iroot(a: int, k: int) -> int:
    """floor(a ** (1/k)) for a >= 0."""
    if a < 2:
        return a
    x = 1 << -(-a.bit_length() // k)
    while True:
        y = ((k - 1) * x + a // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > a:
        x -= 1
    while (x + 1) ** k <= a:
        x += 1
    return x


def furedi_holds(value: int, m: int, n: int, s: int, t: int) -> bool:
    """Exact test of value <= furedi_bound(m, n, s, t).

    Both irrational terms are k-th roots of integers, bracketed by integer
    roots of scaled radicands and refined until the comparison is decided.
    """
    furedi_bound(m, n, s, t)  # domain checks
    lhs = value - s * m
    a = (t - s + 1) * n ** (s - 1)
    b = n ** (2 * s - 2)
    scale = 1
    for _ in range(64):
        ra, rb = iroot(a * scale ** s, s), iroot(b * scale ** s, s)
        lo = Fraction(m * ra + s * rb, scale)
        exact_a = ra ** s == a * scale ** s
        exact_b = rb ** s == b * scale ** s
        hi = Fraction(m * (ra + (not exact_a)) + s * (rb + (not exact_b)), scale)
        if lhs <= lo:
            return True
        if lhs > hi:
            return False
        scale <<= 32
    raise ArithmeticError("undecided comparison")  # pragma: no cover


@dataclass(frozen=True)
class Violation:
    index: int
    kind: str  # "upper" | "lower"
    value: int
    bound: float


@dataclass(frozen=True)
class QuasiSmoothReport:
    checked: int
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "ok": self.ok,
            "violations": [vars(v) for v in self.violations],
        }


SLACK = 1e-9


def check_quasi_smooth(records: list[ExtremalRecord], p: SmoothnessParams) -> QuasiSmoothReport:
    if len({r.family for r in records}) > 1:
        raise InputError("all records must share one family")
    violations = []
    for idx, r in enumerate(records):
        if r.kind == "zarankiewicz":
            m, n = sorted((r.m, r.n))
            bound = p.rho * m * n ** (p.alpha - 1) + p.bigC * n ** p.beta
            if r.value > bound + SLACK:
                violations.append(Violation(idx, "upper", r.value, bound))
        else:
            bound = p.rho0 * r.n ** p.alpha
            if r.value < bound - SLACK:
                violations.append(Violation(idx, "lower", r.value, bound))
    return QuasiSmoothReport(len(records), tuple(violations))


# -- tables ------------------------------------------------------------------------


def z_table(max_total: int, family: FamilySpec, jobs: int = 1) -> list[ExtremalRecord]:
    return [zarankiewicz(m, n, family, jobs=jobs)
            for total in range(2, max_total + 1)
            for m in range(1, total // 2 + 1)
            for n in [total - m]]


def write_z_table(records: list[ExtremalRecord], out_dir: Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "z_table.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["m", "n", "family-hash", "value", "exact", "witness-file"])
        for r in records:
            name = f"z_{r.m}_{r.n}_{r.family.digest()}.txt"
            (out_dir / name).write_text(write_graph(r.witness))
            writer.writerow([r.m, r.n, r.family.digest(), r.value, str(r.exact).lower(), name])
    return path


def verify_record(r: ExtremalRecord) -> bool:
    free, _ = is_family_free(r.witness, r.family)
    orders_ok = r.witness.n == (r.n if r.m is None else r.m + r.n)
    return free and r.witness.m == r.value and orders_ok


def kst_family(s: int, t: int) -> FamilySpec:
    return FamilySpec.of(CompleteBipartite(s, t))

