"""Quotient graphs of the Bruhat-Tits tree with Hecke weights.

A graph is a finite core of weighted arcs plus a cusp ray: from the ray start
``r`` on, every C(i) sends weight q to C(i-1) and weight 1 to C(i+1). Weights
are stored per direction; the weight of u -> v is the number of tree
neighbours of a lift of u that map to v.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field

_TAG_RANK = {"T": 0, "Z": 1, "C": 2}


@dataclass(frozen=True, order=True)
class VertexId:
    rank: int = field(repr=False)
    index: int

    @property
    def tag(self):
        return "TZC"[self.rank]

    @classmethod
    def parse(cls, text):
        tag, idx = text[0].upper(), int(text[1:])
        if tag not in _TAG_RANK:
            raise ValueError(f"bad vertex label {text!r}")
        return cls(_TAG_RANK[tag], idx)

    def __str__(self):
        return f"{self.tag.lower()}{self.index}"

    def __repr__(self):
        return str(self)


def T(i):
    return VertexId(0, i)


def Z(i):
    return VertexId(1, i)


def C(i):
    return VertexId(2, i)


class QuotientGraph:
    def __init__(self, q, core, arcs, ray_start, name=""):
        self.q = q
        self.core = tuple(sorted(core))
        self.arcs = {u: dict(sorted(vs.items())) for u, vs in sorted(arcs.items())}
        self.ray_start = ray_start
        self.name = name

    def out_arcs(self, v):
        if v.tag == "C" and v.index >= self.ray_start:
            return {C(v.index - 1): self.q, C(v.index + 1): 1}
        if v in self.arcs:
            return self.arcs[v]
        raise KeyError(f"{v} is not a vertex of {self.name or 'the graph'}")

    @property
    def special(self):
        """Core vertices off the cusp ray (the t's and z's)."""
        return tuple(v for v in self.core if v.tag != "C")

    def coordinates(self, depth):
        return list(self.special) + [C(i) for i in range(depth + 1)]

    def vertices_up_to(self, depth):
        extra = [C(i) for i in range(self.ray_start, depth + 1) if C(i) not in self.core]
        return list(self.core) + extra

    def with_weight(self, src, dst, w):
        arcs = {u: dict(vs) for u, vs in self.arcs.items()}
        arcs.setdefault(src, {})[dst] = w
        core = set(self.core) | {src}
        return QuotientGraph(self.q, core, arcs, self.ray_start, self.name + "*")

    # serialization ---------------------------------------------------------------

    def to_json(self):
        return {
            "q": self.q,
            "name": self.name,
            "vertices": [str(v) for v in self.core],
            "arcs": [{"src": str(u), "dst": str(v), "w": w}
                     for u, vs in self.arcs.items() for v, w in vs.items()],
            "ray": {"start": self.ray_start},
        }

    @classmethod
    def from_json(cls, data):
        arcs = {}
        for a in data["arcs"]:
            arcs.setdefault(VertexId.parse(a["src"]), {})[VertexId.parse(a["dst"])] = int(a["w"])
        core = [VertexId.parse(v) for v in data["vertices"]]
        return cls(int(data["q"]), core, arcs, int(data["ray"]["start"]), data.get("name", ""))

    def to_dot(self, ray_vertices=6):
        lines = [f'digraph "{self.name or "quotient"}" {{', "  rankdir=LR;"]
        shown = self.vertices_up_to(self.ray_start + ray_vertices - 1)
        shown_set = set(shown)
        for v in shown:
            lines.append(f'  "{v}";')
        for v in shown:
            for u, w in self.out_arcs(v).items():
                if u in shown_set:
                    lines.append(f'  "{v}" -> "{u}" [label="{w}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def graph_p1(q):
    """The cusp ray alone: c0 -> c1 with weight q+1, then the periodic tail from c1."""
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    return QuotientGraph(q, [C(0)], {C(0): {C(1): q + 1}}, 1, f"p1_{q}")


# Weights of the graph for the three elliptic curves, per direction. The arcs at
# c1 (weight 1 to c0, q-1 to z0, 1 to c2) come from the automorphisms of
# O + O(inf): only the scalars act on its fibre at infinity.
_ELLIPTIC_ARCS = {
    2: [["t1", "z1", 3], ["t2", "z1", 3],
        ["z1", "t1", 1], ["z1", "t2", 1], ["z1", "z0", 1],
        ["z0", "z1", 2], ["z0", "c1", 1],
        ["c0", "c1", 3],
        ["c1", "c0", 1], ["c1", "z0", 1], ["c1", "c2", 1]],
    3: [["t1", "z1", 4], ["t2", "z1", 4], ["t3", "z1", 4],
        ["z1", "t1", 1], ["z1", "t2", 1], ["z1", "t3", 1], ["z1", "z0", 1],
        ["z0", "z1", 3], ["z0", "c1", 1],
        ["c0", "c1", 4],
        ["c1", "c0", 1], ["c1", "z0", 2], ["c1", "c2", 1]],
    4: [["t1", "z1", 5], ["t2", "z1", 5], ["t3", "z1", 5], ["t4", "z1", 5],
        ["z1", "t1", 1], ["z1", "t2", 1], ["z1", "t3", 1], ["z1", "t4", 1], ["z1", "z0", 1],
        ["z0", "z1", 4], ["z0", "c1", 1],
        ["c0", "c1", 5],
        ["c1", "c0", 1], ["c1", "z0", 3], ["c1", "c2", 1]],
}
_ELLIPTIC_ARCS_SHA256 = "590ab3211dc665b16f933c66214bdbfb211ffca37b572060bf3fda8b98444838"


def _arcs_digest(table):
    blob = json.dumps({str(k): v for k, v in table.items()}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def graph_elliptic(q):
    if q not in _ELLIPTIC_ARCS:
        raise ValueError(f"elliptic graphs exist for q in (2, 3, 4), got {q}")
    if _arcs_digest(_ELLIPTIC_ARCS) != _ELLIPTIC_ARCS_SHA256:
        raise RuntimeError("elliptic weight table does not match its checksum")
    arcs = {}
    for src, dst, w in _ELLIPTIC_ARCS[q]:
        arcs.setdefault(VertexId.parse(src), {})[VertexId.parse(dst)] = w
    core = [T(j) for j in range(1, q + 1)] + [Z(0), Z(1), C(0), C(1)]
    return QuotientGraph(q, core, arcs, 2, f"e{q}")


@dataclass
class GraphValidation:
    ok: bool
    violations: list
    checked: int

    def summary(self):
        return {"ok": self.ok, "checked_vertices": self.checked, "violations": list(self.violations)}


def validate_graph(g, ray_depth=6):
    """Check (q+1)-regularity, edge symmetry, connectivity and the ray shape."""
    problems = []
    q = g.q
    last = g.ray_start + ray_depth
    vertices = g.vertices_up_to(last)
    vset = set(vertices)

    for v in g.core:
        if v.tag == "T" and not 1 <= v.index <= q:
            problems.append(f"{v}: t-index outside 1..{q}")
        if v.tag == "Z" and v.index not in (0, 1):
            problems.append(f"{v}: z-index outside {{0, 1}}")
        if v.tag == "C" and v.index >= g.ray_start and v in g.arcs:
            problems.append(f"{v}: core arcs override the periodic ray")
    for u, vs in g.arcs.items():
        for v, w in vs.items():
            if not isinstance(w, int) or w <= 0:
                problems.append(f"{u}->{v}: weight {w!r} is not a positive integer")
            if v.tag == "C" and v.index > g.ray_start and u.tag != "C":
                problems.append(f"{u}->{v}: core arc enters the ray past its start")
            if v not in set(g.core) and v != C(g.ray_start):
                problems.append(f"{u}->{v}: target is neither a core vertex nor the ray start")

    for v in vertices:
        if v.tag == "C" and v.index == last:
            continue
        try:
            out = g.out_arcs(v)
        except KeyError:
            problems.append(f"{v}: no outgoing arcs")
            continue
        total = sum(out.values())
        if total != q + 1:
            problems.append(f"{v}: outgoing weights sum to {total}, expected {q + 1}")
        for u in out:
            if u in vset and not (u.tag == "C" and u.index == last):
                try:
                    back = g.out_arcs(u)
                except KeyError:
                    continue
                if v not in back:
                    problems.append(f"{v}->{u}: no reverse arc")

    start = C(0)
    seen = {start}
    todo = deque([start])
    while todo:
        v = todo.popleft()
        if v.tag == "C" and v.index == last:
            continue
        try:
            nbrs = g.out_arcs(v)
        except KeyError:
            continue
        for u in nbrs:
            if u in vset and u not in seen:
                seen.add(u)
                todo.append(u)
    missing = [str(v) for v in vertices if v not in seen]
    if missing:
        problems.append("not connected to c0: " + ", ".join(missing))

    return GraphValidation(not problems, problems, len(vertices))


@dataclass(frozen=True)
class TorusOrbit:
    entries: tuple  # ((VertexId, multiplicity), ...)

    @property
    def total(self):
        return sum(m for _, m in self.entries)

    def as_dict(self):
        return dict(self.entries)


def torus_orbit(q, kind):
    """Image of the constant-extension torus in the quotient graph, with multiplicities."""
    if kind == "p1-constant":
        return TorusOrbit(((C(0), 1),))
    if kind == "elliptic-constant":
        if q not in (2, 3, 4):
            raise ValueError(f"no elliptic curve for q = {q}")
        return TorusOrbit(((C(0), 1),) + tuple((T(j), 2) for j in range(1, q + 1)))
    raise ValueError(f"unknown torus kind {kind!r}")
