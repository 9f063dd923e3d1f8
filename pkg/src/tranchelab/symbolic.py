"""Exact combinatorial calculus for quasi-graph specifications.

A spec is a base graph plus an ordered list of quasi-arc descriptors;
limit sets are symbolic references (base-edge indices plus earlier arc
ids), never metric data.  Validation enforces the four decomposition
conditions:

  (i)   the attach point lies in the base graph or on an earlier arc;
  (ii)  every reference resolves — an arc may meet the rest of the
        space only at its declared attach point;
  (iii) limit sets reference only base edges and strictly earlier arcs;
  (iv)  a limit set meeting an arc must contain it entirely (partial
        overlap is representable and always flagged);

plus a reachability check that each declared limit set is connected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .decomposition import TopoGraph
from .hilbert import ConstructionError, DomainError


@dataclass(frozen=True)
class LimitRef:
    """Reference to an earlier arc inside a limit set; `partial` marks
    an overlap that does not contain the whole arc (always invalid,
    representable so validators can flag it)."""

    arc: str
    partial: bool = False


@dataclass(frozen=True)
class ArcSpec:
    id: str
    attach: str  # vertex label or earlier arc id
    limit_edges: tuple = ()
    limit_arcs: tuple = ()  # LimitRef entries


@dataclass(frozen=True)
class QuasiGraphSpec:
    graph: TopoGraph
    arcs: tuple = ()

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "graph": {
                "V": list(self.graph.vertices),
                "E": [list(e) for e in self.graph.edges],
            },
            "arcs": [
                {
                    "id": a.id,
                    "attach": a.attach,
                    "limitEdges": list(a.limit_edges),
                    "limitArcs": [
                        {"id": r.arc, "partial": True} if r.partial else r.arc
                        for r in a.limit_arcs
                    ],
                }
                for a in self.arcs
            ],
        }

    @staticmethod
    def from_json(data) -> "QuasiGraphSpec":
        if isinstance(data, str):
            data = json.loads(data)
        g = TopoGraph(
            tuple(data["graph"]["V"]),
            tuple(tuple(e) for e in data["graph"]["E"]),
        )
        arcs = []
        for a in data.get("arcs", []):
            refs = []
            for r in a.get("limitArcs", []):
                if isinstance(r, dict):
                    refs.append(LimitRef(r["id"], bool(r.get("partial"))))
                else:
                    refs.append(LimitRef(r))
            arcs.append(
                ArcSpec(
                    str(a["id"]),
                    str(a["attach"]),
                    tuple(int(e) for e in a.get("limitEdges", [])),
                    tuple(refs),
                )
            )
        return QuasiGraphSpec(g, tuple(arcs))


@dataclass(frozen=True)
class Violation:
    condition: str  # "i" | "ii" | "iii" | "iv" | "connectivity"
    arc: str
    detail: str

    def __str__(self):
        return f"({self.condition}) {self.arc}: {self.detail}"


def _arc_index(spec: QuasiGraphSpec) -> dict:
    return {a.id: k for k, a in enumerate(spec.arcs)}


def validate(spec: QuasiGraphSpec) -> list:
    """All violations of the decomposition conditions (empty = valid)."""
    out = []
    idx = _arc_index(spec)
    vset = set(spec.graph.vertices)
    ne = len(spec.graph.edges)
    if len(idx) != len(spec.arcs):
        dupes = {a.id for a in spec.arcs if sum(b.id == a.id for b in spec.arcs) > 1}
        for d in sorted(dupes):
            out.append(Violation("ii", d, "duplicate arc id"))
    for k, a in enumerate(spec.arcs):
        if a.attach in vset:
            pass
        elif a.attach in idx:
            if idx[a.attach] >= k:
                out.append(
                    Violation("i", a.id, f"attached to non-earlier arc {a.attach!r}")
                )
        else:
            out.append(Violation("ii", a.id, f"attach point {a.attach!r} unresolved"))
        for e in a.limit_edges:
            if not 0 <= e < ne:
                out.append(Violation("iii", a.id, f"limit edge #{e} not in base graph"))
        for r in a.limit_arcs:
            if r.arc not in idx:
                out.append(Violation("ii", a.id, f"limit arc {r.arc!r} unresolved"))
                continue
            if idx[r.arc] >= k:
                out.append(
                    Violation("iii", a.id, f"limit set references non-earlier arc {r.arc!r}")
                )
            if r.partial:
                out.append(
                    Violation(
                        "iv", a.id, f"limit set meets {r.arc!r} without containing it"
                    )
                )
        out.extend(_connectivity(spec, k, idx))
    return out


def _anchor(spec: QuasiGraphSpec, arc: ArcSpec, idx: dict):
    """Vertex-level anchor of an arc: follow attach references down to a
    base vertex (the quotient identifies the whole chain's location)."""
    seen = set()
    a = arc
    while a.attach not in set(spec.graph.vertices):
        if a.attach not in idx or a.attach in seen:
            return None
        seen.add(a.attach)
        a = spec.arcs[idx[a.attach]]
    return a.attach


def _connectivity(spec: QuasiGraphSpec, k: int, idx: dict) -> list:
    """Reachability check of one declared limit set: its edges and arc
    closures must hang together."""
    a = spec.arcs[k]
    nodes = {}

    def node(x):
        return nodes.setdefault(x, len(nodes))

    parent = []

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(x, y):
        i, j = node(x), node(y)
        while len(parent) < len(nodes):
            parent.append(len(parent))
        pi, pj = find(i), find(j)
        parent[pi] = pj

    ok_edges = [e for e in a.limit_edges if 0 <= e < len(spec.graph.edges)]
    for e in ok_edges:
        u, v = spec.graph.edges[e]
        union(("v", u), ("v", v))
    for r in a.limit_arcs:
        if r.arc not in idx or idx[r.arc] >= k:
            continue
        sub = spec.arcs[idx[r.arc]]
        anchor = _anchor(spec, sub, idx)
        if anchor is not None:
            union(("a", r.arc), ("v", anchor))
        # the closure of an arc includes its own limit set
        for e2 in sub.limit_edges:
            if 0 <= e2 < len(spec.graph.edges):
                u, v = spec.graph.edges[e2]
                union(("a", r.arc), ("v", u))
                union(("a", r.arc), ("v", v))
        for r2 in sub.limit_arcs:
            union(("a", r.arc), ("a", r2.arc))
    if not nodes:
        return []
    while len(parent) < len(nodes):
        parent.append(len(parent))
    roots = {find(i) for i in range(len(nodes))}
    if len(roots) > 1:
        return [Violation("connectivity", a.id, "declared limit set is disconnected")]
    return []


def _require_valid(spec: QuasiGraphSpec):
    errs = validate(spec)
    if errs:
        raise DomainError("invalid spec: " + "; ".join(map(str, errs)))


def _absorbed(spec: QuasiGraphSpec) -> set:
    """Arc ids contained in some limit set (transitively closed)."""
    idx = _arc_index(spec)
    absorbed = set()
    for a in spec.arcs:
        for r in a.limit_arcs:
            absorbed.add(r.arc)
    changed = True
    while changed:
        changed = False
        for aid in list(absorbed):
            for r in spec.arcs[idx[aid]].limit_arcs:
                if r.arc not in absorbed:
                    absorbed.add(r.arc)
                    changed = True
    return absorbed


def quotient(spec: QuasiGraphSpec) -> TopoGraph:
    """Collapse every connected component of the union of limit sets to
    a point; unabsorbed quasi-arcs become edges from their attach anchor
    to their collapsed limit component."""
    _require_valid(spec)
    idx = _arc_index(spec)
    parent = {v: v for v in spec.graph.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(u, v):
        parent[find(u)] = find(v)

    limit_edge_ids = set()

    def absorb(aid, seen=()):
        """Merge everything in closure(L_aid) into one component."""
        a = spec.arcs[idx[aid]]
        pts = []
        anchor = _anchor(spec, a, idx)
        if anchor is not None:
            pts.append(anchor)
        for e in a.limit_edges:
            u, v = spec.graph.edges[e]
            union(u, v)
            pts.append(u)
            limit_edge_ids.add(e)
        for r in a.limit_arcs:
            if r.arc not in seen:
                pts.extend(absorb(r.arc, seen + (aid,)))
        for p in pts[1:]:
            union(pts[0], p)
        return pts

    for a in spec.arcs:
        hub = []
        for e in a.limit_edges:
            u, v = spec.graph.edges[e]
            union(u, v)
            hub.append(u)
            limit_edge_ids.add(e)
        for r in a.limit_arcs:
            hub.extend(absorb(r.arc))
        for p in hub[1:]:
            union(hub[0], p)
    # map vertices to representatives
    reps = {v: find(v) for v in spec.graph.vertices}
    vertices = tuple(sorted(set(reps.values())))
    edges = [
        (reps[u], reps[v])
        for k, (u, v) in enumerate(spec.graph.edges)
        if k not in limit_edge_ids
    ]
    absorbed = _absorbed(spec)
    for a in spec.arcs:
        if a.id in absorbed:
            continue
        anchor = _anchor(spec, a, idx)
        target = None
        for e in a.limit_edges:
            target = reps[spec.graph.edges[e][0]]
            break
        if target is None:
            for r in a.limit_arcs:
                sub_anchor = _anchor(spec, spec.arcs[idx[r.arc]], idx)
                if sub_anchor is not None:
                    target = reps[sub_anchor]
                    break
        if anchor is None or target is None:
            raise ConstructionError(f"arc {a.id!r} has no quotient location")
        edges.append((reps[anchor], target))
    return TopoGraph(vertices, tuple(edges))


def tranche_count(spec: QuasiGraphSpec) -> int:
    """Number of connected components of the union of limit sets."""
    _require_valid(spec)
    idx = _arc_index(spec)
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for a in spec.arcs:
        hub = None
        targets = list(a.limit_edges) + [r.arc for r in a.limit_arcs]
        for t in targets:
            if isinstance(t, int):
                u, v = spec.graph.edges[t]
                union(("v", u), ("v", v))
                key = ("v", u)
            else:
                sub = spec.arcs[idx[t]]
                anchor = _anchor(spec, sub, idx)
                if anchor is not None:
                    union(("a", t), ("v", anchor))
                for e in sub.limit_edges:
                    u, v = spec.graph.edges[e]
                    union(("a", t), ("v", u))
                    union(("v", u), ("v", v))
                for r2 in sub.limit_arcs:
                    union(("a", t), ("a", r2.arc))
                key = ("a", t)
            if hub is None:
                hub = key
            else:
                union(hub, key)
    return len({find(x) for x in list(parent)})


def order_and_depth(spec: QuasiGraphSpec):
    """Per-arc nesting order (1 + deepest absorbed arc) and the overall
    depth of the spec (0 for a bare graph)."""
    _require_valid(spec)
    idx = _arc_index(spec)
    order: dict = {}

    def rank(aid, stack=()):
        if aid in stack:
            raise DomainError("cyclic limit references")
        if aid not in order:
            a = spec.arcs[idx[aid]]
            order[aid] = 1 + max(
                (rank(r.arc, stack + (aid,)) for r in a.limit_arcs), default=0
            )
        return order[aid]

    for a in spec.arcs:
        rank(a.id)
    return order, max(order.values(), default=0)


@dataclass(frozen=True)
class RemovalRecord:
    arc: ArcSpec
    stub_vertex: str | None
    stub_edge: tuple | None


def ancestor_free(spec: QuasiGraphSpec) -> list:
    """Arcs not referenced by any other arc's limit set."""
    referenced = {r.arc for a in spec.arcs for r in a.limit_arcs}
    attached_to = {a.attach for a in spec.arcs}
    return [
        a.id
        for a in spec.arcs
        if a.id not in referenced and a.id not in attached_to
    ]


def remove_outermost(spec: QuasiGraphSpec, arc_id: str | None = None):
    """Remove one ancestor-free quasi-arc, leaving a stub leaf edge on
    the base graph (the arc's closed initial piece survives removal).

    Returns (reduced spec, removal record); records replay in reverse
    through `replay` to rebuild the original spec."""
    _require_valid(spec)
    if not spec.arcs:
        raise ConstructionError("spec has no quasi-arcs to remove")
    free = ancestor_free(spec)
    if not free:
        raise ConstructionError("no ancestor-free arc: nested past every candidate")
    if arc_id is None:
        arc_id = free[-1]
    elif arc_id not in free:
        raise ConstructionError(f"arc {arc_id!r} is not ancestor-free")
    idx = _arc_index(spec)
    arc = spec.arcs[idx[arc_id]]
    graph = spec.graph
    stub_vertex = stub_edge = None
    if arc.attach in set(graph.vertices):
        stub_vertex = f"stub:{arc.id}"
        stub_edge = (arc.attach, stub_vertex)
        graph = TopoGraph(
            graph.vertices + (stub_vertex,), graph.edges + (stub_edge,)
        )
    arcs = tuple(a for a in spec.arcs if a.id != arc_id)
    return QuasiGraphSpec(graph, arcs), RemovalRecord(arc, stub_vertex, stub_edge)


def removal_order(spec: QuasiGraphSpec):
    """Full reduction to the bare graph; returns (final spec, records)."""
    records = []
    while spec.arcs:
        spec, rec = remove_outermost(spec)
        records.append(rec)
    return spec, records


def replay(final: QuasiGraphSpec, records) -> QuasiGraphSpec:
    """Rebuild the original spec by undoing removals in reverse order."""
    spec = final
    for rec in reversed(records):
        graph = spec.graph
        if rec.stub_vertex is not None:
            edges = list(graph.edges)
            edges.remove(rec.stub_edge)
            graph = TopoGraph(
                tuple(v for v in graph.vertices if v != rec.stub_vertex),
                tuple(edges),
            )
        pos = {a.id: k for k, a in enumerate(spec.arcs)}
        refs = [pos[r.arc] for r in rec.arc.limit_arcs if r.arc in pos]
        if rec.arc.attach in pos:
            refs.append(pos[rec.arc.attach])
        at = 0 if not refs else max(refs) + 1
        arcs = spec.arcs[:at] + (rec.arc,) + spec.arcs[at:]
        spec = replace(spec, graph=graph, arcs=arcs)
    return spec


# ---------------------------------------------------------------------------
# reference specs


def warsaw_spec() -> QuasiGraphSpec:
    """Path base graph with one quasi-arc accumulating on half of it."""
    g = TopoGraph(("u", "m", "v"), (("u", "m"), ("m", "v")))
    return QuasiGraphSpec(g, (ArcSpec("L", "u", limit_edges=(1,)),))


def chain_spec(depth: int = 2) -> QuasiGraphSpec:
    """Nested chain: each arc accumulates on the previous one."""
    g = TopoGraph(("u", "m", "v"), (("u", "m"), ("m", "v")))
    arcs = [ArcSpec("L1", "u", limit_edges=(1,))]
    for k in range(2, depth + 1):
        arcs.append(ArcSpec(f"L{k}", "u", limit_arcs=(LimitRef(f"L{k-1}"),)))
    return QuasiGraphSpec(g, tuple(arcs))


def comb_spec() -> QuasiGraphSpec:
    """The suspended comb: base pieces, two arms sharing an oscillation
    target, and a sweeping arc absorbing both arms."""
    g = TopoGraph(
        ("a", "b", "c", "d"),
        (("a", "b"), ("b", "c"), ("c", "d")),
    )
    arms = (
        ArcSpec("L1", "b", limit_edges=(2,)),
        ArcSpec("L2", "a", limit_edges=(2,)),
        ArcSpec(
            "K",
            "a",
            limit_edges=(0, 1, 2),
            limit_arcs=(LimitRef("L1"), LimitRef("L2")),
        ),
    )
    return QuasiGraphSpec(g, arms)
