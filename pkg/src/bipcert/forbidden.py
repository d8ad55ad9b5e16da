"""Forbidden-pattern detection: K_{s,t}, exact-length cycles, theta graphs.

All searches branch in increasing vertex order so the witness returned is the
lexicographically first one the search meets; reruns are reproducible.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Union

from .errors import InputError
from .graph import Graph, iter_bits, layer_masks, lowest_bits, to_mask


@dataclass(frozen=True)
class Caps:
    max_part: int = 8
    max_cycle: int = 64


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class CompleteBipartite:
    s: int
    t: int

    def __post_init__(self):
        if not 1 <= self.s <= self.t:
            raise InputError(f"K_{{s,t}} needs 1 <= s <= t, got s={self.s}, t={self.t}")

    def to_json(self) -> dict:
        return {"type": "complete_bipartite", "s": self.s, "t": self.t}


@dataclass(frozen=True)
class EvenCycle:
    ell: int  # C_{2 ell}

    def __post_init__(self):
        if self.ell < 2:
            raise InputError("even_cycle needs ell >= 2")

    def to_json(self) -> dict:
        return {"type": "even_cycle", "ell": self.ell}


@dataclass(frozen=True)
class Theta:
    t: int
    ell: int

    def __post_init__(self):
        if self.t < 2 or self.ell < 2:
            raise InputError("theta needs t >= 2 and ell >= 2")

    def to_json(self) -> dict:
        return {"type": "theta", "t": self.t, "ell": self.ell}


@dataclass(frozen=True)
class OddCycle:
    k: int

    def __post_init__(self):
        if self.k < 3 or self.k % 2 == 0:
            raise InputError("odd_cycle needs odd k >= 3")

    def to_json(self) -> dict:
        return {"type": "odd_cycle", "k": self.k}


Pattern = Union[CompleteBipartite, EvenCycle, Theta, OddCycle]

_PATTERN_TYPES = {
    "complete_bipartite": (CompleteBipartite, ("s", "t")),
    "even_cycle": (EvenCycle, ("ell",)),
    "theta": (Theta, ("t", "ell")),
    "odd_cycle": (OddCycle, ("k",)),
}


def pattern_from_json(obj: dict) -> Pattern:
    try:
        cls, keys = _PATTERN_TYPES[obj["type"]]
        return cls(*(int(obj[k]) for k in keys))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad pattern {obj!r}: {exc}") from None


@dataclass(frozen=True)
class FamilySpec:
    patterns: tuple[Pattern, ...]

    def __post_init__(self):
        if not self.patterns:
            raise InputError("a family needs at least one pattern")

    @classmethod
    def of(cls, *patterns: Pattern) -> "FamilySpec":
        return cls(tuple(patterns))

    @classmethod
    def from_json(cls, obj) -> "FamilySpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or not isinstance(obj.get("forbidden"), list):
            raise InputError('family JSON must look like {"forbidden": [...]}')
        return cls(tuple(pattern_from_json(p) for p in obj["forbidden"]))

    def to_json(self) -> dict:
        return {"forbidden": [p.to_json() for p in self.patterns]}

    def digest(self) -> str:
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class Witness:
    """Vertices realising a pattern.

    Layout by pattern: K_{s,t} -> the s-side then the t-side; cycles -> cyclic
    order; theta -> the two branch vertices followed by the interior of each
    path in turn (ell - 1 vertices per path).
    """

    pattern: Pattern
    vertices: tuple[int, ...]

    def to_json(self) -> dict:
        return {"pattern": self.pattern.to_json(), "vertices": list(self.vertices)}

    def theta_paths(self) -> list[list[int]]:
        a, b = self.vertices[:2]
        step = self.pattern.ell - 1
        inner = self.vertices[2:]
        return [[a, *inner[i:i + step], b] for i in range(0, len(inner), step)]


# -- K_{s,t} ---------------------------------------------------------------


def find_kst(g: Graph, s: int, t: int, caps: Caps = DEFAULT_CAPS) -> Witness | None:
    pattern = CompleteBipartite(s, t)
    if t > caps.max_part:
        raise InputError(f"K_{{{s},{t}}} exceeds the part-size cap {caps.max_part}")
    candidates = [v for v in range(g.n) if g.adj[v].bit_count() >= t]

    def extend(start: int, chosen: list[int], common: int):
        if len(chosen) == s:
            return chosen, common
        for i in range(start, len(candidates)):
            v = candidates[i]
            inter = g.adj[v] if not chosen else common & g.adj[v]
            if inter.bit_count() < t:
                continue
            found = extend(i + 1, chosen + [v], inter)
            if found:
                return found
        return None

    found = extend(0, [], 0)
    if found is None:
        return None
    chosen, common = found
    return Witness(pattern, tuple(chosen) + tuple(lowest_bits(common, t)))


def kst_through_edge(g: Graph, s: int, t: int, u: int, v: int) -> bool:
    """Whether some K_{s,t} copy uses the edge uv (either orientation)."""
    for a, b in ((u, v), (v, u)):
        # a on the s-side, b on the t-side
        if s == 1:
            if g.adj[a].bit_count() >= t:
                return True
            continue
        # remaining s-1 vertices lie in N(b) - a and must share >= t-1 further neighbours with a, b in them
        pool = [x for x in iter_bits(g.adj[b] & ~(1 << a))]

        def extend(start, chosen_cnt, common):
            if chosen_cnt == s:
                return True
            for i in range(start, len(pool)):
                inter = common & g.adj[pool[i]]
                if inter.bit_count() >= t and extend(i + 1, chosen_cnt + 1, inter):
                    return True
            return False

        if extend(0, 1, g.adj[a]):
            return True
    return False


# -- cycles -----------------------------------------------------------------


def _check_len(length: int, caps: Caps) -> None:
    if length > caps.max_cycle:
        raise InputError(f"cycle length {length} exceeds cap {caps.max_cycle}")


def find_cycle_exact(g: Graph, length: int, caps: Caps = DEFAULT_CAPS) -> Witness | None:
    if length < 3:
        raise InputError("cycle length must be >= 3")
    _check_len(length, caps)
    pattern = OddCycle(length) if length % 2 else EvenCycle(length // 2)
    for s in range(g.n):
        allowed = ((1 << g.n) - 1) & ~((1 << s) - 1)
        if allowed.bit_count() < length:
            break
        found = _cycle_from(g, s, length, allowed)
        if found:
            return Witness(pattern, tuple(found))
    return None


def _cycle_from(g: Graph, s: int, length: int, allowed: int) -> list[int] | None:
    """Cycle of ``length`` whose smallest vertex is ``s`` (allowed = vertices >= s)."""
    dist = [math.inf] * g.n
    for d, layer in enumerate(layer_masks(g, s, allowed)):
        for v in iter_bits(layer):
            dist[v] = d
    path = [s]

    def dfs(cur: int, onpath: int) -> bool:
        k = len(path)
        if k == length:
            return bool(g.adj[cur] >> s & 1)
        for w in iter_bits(g.adj[cur] & allowed & ~onpath):
            if dist[w] > length - k:
                continue
            path.append(w)
            if dfs(w, onpath | 1 << w):
                return True
            path.pop()
        return False

    return path if dfs(s, 1 << s) else None


def cycle_through_edge(g: Graph, length: int, u: int, v: int) -> bool:
    """Whether a cycle of exactly ``length`` vertices uses the edge uv."""
    adj = list(g.adj)
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)
    h = Graph.trusted(g.n, adj)
    dist = [math.inf] * g.n
    for d, layer in enumerate(layer_masks(h, v)):
        for x in iter_bits(layer):
            dist[x] = d
    target_edges = length - 1  # u .. v path with this many edges

    def dfs(cur: int, onpath: int, used: int) -> bool:
        if cur == v:
            return used == target_edges
        for w in iter_bits(adj[cur] & ~onpath):
            if dist[w] > target_edges - used - 1:
                continue
            if dfs(w, onpath | 1 << w, used + 1):
                return True
        return False

    return dfs(u, 1 << u, 0)


def pattern_through_edge(g: Graph, pattern: Pattern, u: int, v: int, caps: Caps = DEFAULT_CAPS) -> bool:
    """Whether ``g`` has a copy of ``pattern`` using edge uv (theta falls back to a full scan)."""
    if isinstance(pattern, CompleteBipartite):
        return kst_through_edge(g, pattern.s, pattern.t, u, v)
    if isinstance(pattern, EvenCycle):
        return cycle_through_edge(g, 2 * pattern.ell, u, v)
    if isinstance(pattern, OddCycle):
        return cycle_through_edge(g, pattern.k, u, v)
    return find_pattern(g, pattern, caps) is not None


def girth(g: Graph) -> float:
    best = math.inf
    for root in range(g.n):
        depth = {root: 0}
        parent = {root: -1}
        queue = [root]
        for x in queue:
            if 2 * depth[x] + 1 >= best:
                break
            for y in iter_bits(g.adj[x]):
                if y not in depth:
                    depth[y] = depth[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, depth[x] + depth[y] + 1)
    return best


def cycle_spectrum(g: Graph, max_len: int, caps: Caps = DEFAULT_CAPS) -> set[int]:
    _check_len(max_len, caps)
    gr = girth(g)
    bipartite = g.is_bipartite()
    out = set()
    for length in range(3, min(max_len, g.n) + 1):
        if length < gr or (bipartite and length % 2):
            continue
        if length == gr or find_cycle_exact(g, length, caps):
            out.add(length)
    return out


# -- theta graphs ------------------------------------------------------------


def find_theta(g: Graph, t: int, ell: int, caps: Caps = DEFAULT_CAPS) -> Witness | None:
    pattern = Theta(t, ell)
    if t > caps.max_part:
        raise InputError(f"theta with {t} paths exceeds the cap {caps.max_part}")
    _check_len(2 * ell, caps)
    for a in range(g.n):
        if g.adj[a].bit_count() < t:
            continue
        by_end: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
        path = [a]

        def walk(cur: int, onpath: int):
            if len(path) == ell + 1:
                if cur > a:
                    by_end.setdefault(cur, []).append((onpath & ~(1 << a) & ~(1 << cur), tuple(path[1:-1])))
                return
            for w in iter_bits(g.adj[cur] & ~onpath):
                path.append(w)
                walk(w, onpath | 1 << w)
                path.pop()

        walk(a, 1 << a)
        for b in sorted(by_end):
            options = by_end[b]
            # interiors must avoid b too: a path a..b of length ell cannot revisit b, so only the pairwise test remains
            chosen = _disjoint_choice(options, t)
            if chosen is not None:
                inner = tuple(v for _, interior in chosen for v in interior)
                return Witness(pattern, (a, b) + inner)
    return None


def _disjoint_choice(options, t):
    picked = []

    def rec(start: int, used: int) -> bool:
        if len(picked) == t:
            return True
        for i in range(start, len(options) - (t - len(picked)) + 1):
            mask, _ = options[i]
            if mask & used:
                continue
            picked.append(options[i])
            if rec(i + 1, used | mask):
                return True
            picked.pop()
        return False

    return picked if rec(0, 0) else None


# -- families ----------------------------------------------------------------


def find_pattern(g: Graph, pattern: Pattern, caps: Caps = DEFAULT_CAPS) -> Witness | None:
    if isinstance(pattern, CompleteBipartite):
        return find_kst(g, pattern.s, pattern.t, caps)
    if isinstance(pattern, EvenCycle):
        return find_cycle_exact(g, 2 * pattern.ell, caps)
    if isinstance(pattern, OddCycle):
        return find_cycle_exact(g, pattern.k, caps)
    if isinstance(pattern, Theta):
        return find_theta(g, pattern.t, pattern.ell, caps)
    raise InputError(f"unknown pattern {pattern!r}")


def is_family_free(g: Graph, family: FamilySpec, caps: Caps = DEFAULT_CAPS) -> tuple[bool, Witness | None]:
    for pattern in family.patterns:
        w = find_pattern(g, pattern, caps)
        if w is not None:
            return False, w
    return True, None


def validate_witness(g: Graph, w: Witness) -> bool:
    vs = w.vertices
    if len(set(vs)) != len(vs) or any(not 0 <= v < g.n for v in vs):
        return False
    p = w.pattern
    if isinstance(p, CompleteBipartite):
        if len(vs) != p.s + p.t:
            return False
        side_t = to_mask(vs[p.s:])
        return all(g.adj[x] & side_t == side_t for x in vs[:p.s])
    if isinstance(p, (EvenCycle, OddCycle)):
        length = 2 * p.ell if isinstance(p, EvenCycle) else p.k
        if len(vs) != length:
            return False
        return all(g.has_edge(vs[i], vs[(i + 1) % length]) for i in range(length))
    if isinstance(p, Theta):
        if len(vs) != 2 + p.t * (p.ell - 1):
            return False
        return all(g.has_edge(x, y) for path in w.theta_paths() for x, y in zip(path, path[1:]))
    return False
