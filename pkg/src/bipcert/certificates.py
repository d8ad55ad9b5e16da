"""Certificate objects and their JSON form: {kind, inputs_hash, ...fields}."""
from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field

from .graph import Graph


def inputs_hash(g: Graph | None = None, **params) -> str:
    h = hashlib.sha256()
    if g is not None:
        h.update(f"{g.n}:{g.edges()}".encode())
    h.update(json.dumps(params, sort_keys=True, default=str).encode())
    return h.hexdigest()[:16]


@dataclass
class FailureReport:
    stage: str
    message: str
    data: dict = field(default_factory=dict)
    inputs_hash: str = ""

    kind = "failure"

    def to_json(self) -> dict:
        return {"kind": self.kind, "inputs_hash": self.inputs_hash, "stage": self.stage,
                "message": self.message, "data": self.data}


@dataclass
class BipartiteCert:
    sides: tuple[frozenset[int], frozenset[int]]
    inputs_hash: str = ""

    kind = "bipartite"

    def to_json(self) -> dict:
        return {"kind": self.kind, "inputs_hash": self.inputs_hash,
                "sides": [sorted(self.sides[0]), sorted(self.sides[1])]}


def check_bipartite_cert(g: Graph, cert: BipartiteCert) -> bool:
    x, y = cert.sides
    if x & y or len(x) + len(y) != g.n:
        return False
    return not any((u in x) == (v in x) for u, v in g.edges())


@dataclass
class ExpansionCert:
    root: int
    j0: int
    sizes: tuple[int, int]
    threshold: float
    needed: int
    ell0: int
    layer_sizes: list[int]
    absorption_ok: bool
    fidelity: dict = field(default_factory=dict)
    inputs_hash: str = ""

    kind = "expansion"

    @property
    def slack(self) -> float:
        return min(self.sizes) - self.threshold

    def to_json(self) -> dict:
        return {"kind": self.kind, "inputs_hash": self.inputs_hash, "root": self.root, "j0": self.j0,
                "sizes": list(self.sizes), "threshold": self.threshold, "needed": self.needed,
                "slack": self.slack, "ell0": self.ell0, "layer_sizes": self.layer_sizes,
                "absorption_ok": self.absorption_ok, "fidelity": self.fidelity}


@dataclass
class PathFamily:
    root: int
    paths: dict[int, tuple[int, ...]]
    maximal: bool = False
    endpoint_pure: bool = False
    fidelity: dict = field(default_factory=dict)
    inputs_hash: str = ""

    kind = "path_family"

    @property
    def endpoints(self) -> list[int]:
        return sorted(self.paths)

    def usage(self) -> Counter:
        """Paths through each vertex, root excluded."""
        c = Counter()
        for path in self.paths.values():
            c.update(v for v in path if v != self.root)
        return c

    def problems(self, g: Graph, *, max_len: int | None = None, exact_len: int | None = None,
                 cap: int | float | None = None) -> list[str]:
        out = []
        for end, path in self.paths.items():
            if path[0] != self.root or path[-1] != end:
                out.append(f"path to {end} has wrong ends")
            if len(set(path)) != len(path):
                out.append(f"path to {end} is not simple")
            if any(not g.has_edge(a, b) for a, b in zip(path, path[1:])):
                out.append(f"path to {end} uses a non-edge")
            if max_len is not None and len(path) - 1 > max_len:
                out.append(f"path to {end} longer than {max_len}")
            if exact_len is not None and len(path) - 1 != exact_len:
                out.append(f"path to {end} has length {len(path) - 1} != {exact_len}")
        if cap is not None:
            over = {v: c for v, c in self.usage().items() if c > cap}
            if over:
                out.append(f"usage above cap {cap}: {over}")
        if self.endpoint_pure:
            ends = set(self.paths)
            for end, path in self.paths.items():
                if ends & set(path[1:-1]):
                    out.append(f"endpoint used as interior vertex on path to {end}")
        return out

    def to_json(self) -> dict:
        hist = Counter(self.usage().values())
        return {"kind": self.kind, "inputs_hash": self.inputs_hash, "root": self.root,
                "endpoints": self.endpoints,
                "paths": [list(self.paths[e]) for e in self.endpoints],
                "usage_histogram": {str(k): hist[k] for k in sorted(hist)},
                "maximal": self.maximal, "endpoint_pure": self.endpoint_pure,
                "fidelity": self.fidelity}


@dataclass
class CycleWitness:
    vertices: tuple[int, ...]
    through_edge: tuple[int, int]
    segments: dict[str, list[int]]  # uv, Q, R_w, T, P_w* as vertex lists
    lengths: dict[str, int]
    deviations: dict = field(default_factory=dict)
    inputs_hash: str = ""

    kind = "cycle"

    def to_json(self) -> dict:
        return {"kind": self.kind, "inputs_hash": self.inputs_hash, "vertices": list(self.vertices),
                "length": len(self.vertices), "through_edge": list(self.through_edge),
                "segments": self.segments, "lengths": self.lengths, "deviations": self.deviations}


def validate_cycle(g: Graph, cw: CycleWitness, k: int) -> list[str]:
    vs = cw.vertices
    out = []
    if len(vs) != k:
        out.append(f"length {len(vs)} != {k}")
    if k % 2 == 0:
        out.append("k is even")
    if len(set(vs)) != len(vs):
        out.append("repeated vertex")
    if any(not g.has_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))):
        out.append("non-adjacent consecutive pair")
    u, v = cw.through_edge
    pairs = {frozenset((vs[i], vs[(i + 1) % len(vs)])) for i in range(len(vs))}
    if frozenset((u, v)) not in pairs:
        out.append("cycle misses the through edge")
    total = sum(cw.lengths.get(key, 0) for key in ("uv", "Q", "R_w", "T", "P"))
    if total != len(vs):
        out.append(f"segment lengths sum to {total}")
    if cw.lengths.get("T", 0) % 2:
        out.append("T has odd length")
    return out

