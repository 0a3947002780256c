"""Finite directed and undirected multigraphs and their structural operations.

Vertices and edges carry opaque string ids.  Parallel edges and loops are
permitted everywhere.  All values are immutable after construction and every
operation is a pure function, so everything here is safe to share freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import DomainError


def _freeze_str(x) -> str:
    if not isinstance(x, str):
        raise DomainError(f"ids must be strings, got {x!r}")
    return x


class DiGraph:
    """A finite multidigraph: vertex ids plus edge records (id, src, dst)."""

    __slots__ = ("_vertices", "_edges", "_out", "_in")

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]):
        vs = tuple(sorted({_freeze_str(v) for v in vertices}))
        vset = set(vs)
        emap: dict[str, tuple[str, str]] = {}
        for eid, src, dst in edges:
            eid, src, dst = _freeze_str(eid), _freeze_str(src), _freeze_str(dst)
            if eid in emap:
                raise DomainError(f"duplicate edge id {eid!r}")
            if src not in vset or dst not in vset:
                raise DomainError(f"edge {eid!r} touches unknown vertex {src!r} or {dst!r}")
            emap[eid] = (src, dst)
        self._vertices = vs
        self._edges = dict(sorted(emap.items()))
        out: dict[str, list[str]] = {v: [] for v in vs}
        inn: dict[str, list[str]] = {v: [] for v in vs}
        for eid, (s, t) in self._edges.items():
            out[s].append(eid)
            inn[t].append(eid)
        self._out = {v: tuple(es) for v, es in out.items()}
        self._in = {v: tuple(es) for v, es in inn.items()}

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> Mapping[str, tuple[str, str]]:
        return self._edges

    def src(self, eid: str) -> str:
        return self._edges[eid][0]

    def dst(self, eid: str) -> str:
        return self._edges[eid][1]

    def ends(self, eid: str) -> tuple[str, str]:
        return self._edges[eid]

    def out_edges(self, v: str) -> tuple[str, ...]:
        try:
            return self._out[v]
        except KeyError:
            raise DomainError(f"unknown vertex {v!r}") from None

    def in_edges(self, v: str) -> tuple[str, ...]:
        try:
            return self._in[v]
        except KeyError:
            raise DomainError(f"unknown vertex {v!r}") from None

    def is_loop(self, eid: str) -> bool:
        s, t = self._edges[eid]
        return s == t

    def is_simple(self) -> bool:
        return len({(s, t) for s, t in self._edges.values()}) == len(self._edges)

    def edge_list(self) -> list[tuple[str, str, str]]:
        return [(e, s, t) for e, (s, t) in self._edges.items()]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiGraph)
            and self._vertices == other._vertices
            and self._edges == other._edges
        )

    def __hash__(self):
        return hash((self._vertices, tuple(self._edges.items())))

    def __repr__(self):
        return f"DiGraph({len(self._vertices)} vertices, {len(self._edges)} edges)"


class UndirectedGraph:
    """A finite undirected multigraph; loops are edges with a single end."""

    __slots__ = ("_vertices", "_edges", "_star")

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, tuple]]):
        vs = tuple(sorted({_freeze_str(v) for v in vertices}))
        vset = set(vs)
        emap: dict[str, tuple[str, ...]] = {}
        for eid, ends in edges:
            eid = _freeze_str(eid)
            ends = tuple(sorted({_freeze_str(x) for x in ends}))
            if eid in emap:
                raise DomainError(f"duplicate edge id {eid!r}")
            if not 1 <= len(ends) <= 2:
                raise DomainError(f"edge {eid!r} must have one or two ends")
            if any(x not in vset for x in ends):
                raise DomainError(f"edge {eid!r} touches an unknown vertex")
            emap[eid] = ends
        self._vertices = vs
        self._edges = dict(sorted(emap.items()))
        star: dict[str, list[str]] = {v: [] for v in vs}
        for eid, ends in self._edges.items():
            for x in set(ends):
                star[x].append(eid)
        self._star = {v: tuple(es) for v, es in star.items()}

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> Mapping[str, tuple[str, ...]]:
        return self._edges

    def ends(self, eid: str) -> tuple[str, ...]:
        return self._edges[eid]

    def is_loop(self, eid: str) -> bool:
        return len(self._edges[eid]) == 1

    def star(self, v: str) -> tuple[str, ...]:
        """Edges incident to v (loops listed once)."""
        try:
            return self._star[v]
        except KeyError:
            raise DomainError(f"unknown vertex {v!r}") from None

    def degree(self, v: str) -> int:
        """Topological degree: loops count twice."""
        return sum(2 if self.is_loop(e) else 1 for e in self.star(v))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UndirectedGraph)
            and self._vertices == other._vertices
            and self._edges == other._edges
        )

    def __hash__(self):
        return hash((self._vertices, tuple(self._edges.items())))

    def __repr__(self):
        return f"UndirectedGraph({len(self._vertices)} vertices, {len(self._edges)} edges)"


@dataclass(frozen=True)
class GraphMorphism:
    """A pair of total maps (p on vertices, q on edges) between digraphs."""

    source: DiGraph
    target: DiGraph
    p: Mapping[str, str]
    q: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "p", dict(self.p))
        object.__setattr__(self, "q", dict(self.q))

    def vertex_image(self, v: str) -> str:
        return self.p[v]

    def edge_image(self, e: str) -> str:
        return self.q[e]

    def is_surjective(self) -> bool:
        return set(self.p.values()) == set(self.target.vertices) and set(
            self.q.values()
        ) == set(self.target.edges)

    def is_injective(self) -> bool:
        return len(set(self.p.values())) == len(self.p) and len(set(self.q.values())) == len(
            self.q
        )

    def is_isomorphism(self) -> bool:
        return (
            validate_morphism(self).ok
            and self.is_surjective()
            and self.is_injective()
        )

    def __eq__(self, other):
        return (
            isinstance(other, GraphMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.p == other.p
            and self.q == other.q
        )


@dataclass(frozen=True)
class UndirectedMorphism:
    """A pair of total maps between undirected graphs preserving edge ends."""

    source: UndirectedGraph
    target: UndirectedGraph
    p: Mapping[str, str]
    q: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "p", dict(self.p))
        object.__setattr__(self, "q", dict(self.q))

    def is_surjective(self) -> bool:
        return set(self.p.values()) == set(self.target.vertices) and set(
            self.q.values()
        ) == set(self.target.edges)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    reason: str = ""
    witness: tuple = field(default=())

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class DirectedCycle:
    """A closed directed walk with pairwise distinct edges."""

    edges: tuple[str, ...]


def validate_morphism(m: GraphMorphism) -> ValidationReport:
    """Check that m's maps are total and preserve sources and targets edge-wise."""
    missing_v = [v for v in m.source.vertices if v not in m.p]
    missing_e = [e for e in m.source.edges if e not in m.q]
    if missing_v or missing_e:
        raise DomainError(
            f"morphism maps are not total: missing vertices {missing_v[:3]} edges {missing_e[:3]}"
        )
    tv = set(m.target.vertices)
    for v, w in m.p.items():
        if w not in tv:
            return ValidationReport(False, "vertex image outside target", (v, w))
    for e, f in m.q.items():
        if f not in m.target.edges:
            return ValidationReport(False, "edge image outside target", (e, f))
        s, t = m.source.ends(e)
        fs, ft = m.target.ends(f)
        if m.p[s] != fs:
            return ValidationReport(False, "source endpoint mismatch", (e,))
        if m.p[t] != ft:
            return ValidationReport(False, "target endpoint mismatch", (e,))
    return ValidationReport(True)


def validate_undirected_morphism(m: UndirectedMorphism) -> ValidationReport:
    missing_v = [v for v in m.source.vertices if v not in m.p]
    missing_e = [e for e in m.source.edges if e not in m.q]
    if missing_v or missing_e:
        raise DomainError("undirected morphism maps are not total")
    for e, f in m.q.items():
        if f not in m.target.edges:
            return ValidationReport(False, "edge image outside target", (e, f))
        image_ends = tuple(sorted({m.p[x] for x in m.source.ends(e)}))
        if image_ends != m.target.ends(f):
            return ValidationReport(False, "endpoint mismatch", (e,))
    return ValidationReport(True)


def identity_morphism(g: DiGraph) -> GraphMorphism:
    return GraphMorphism(g, g, {v: v for v in g.vertices}, {e: e for e in g.edges})


def compose_morphisms(outer: GraphMorphism, inner: GraphMorphism) -> GraphMorphism:
    """outer after inner; their middle graphs must agree."""
    if inner.target != outer.source:
        raise DomainError("morphisms do not compose: middle graphs differ")
    return GraphMorphism(
        inner.source,
        outer.target,
        {v: outer.p[w] for v, w in inner.p.items()},
        {e: outer.q[f] for e, f in inner.q.items()},
    )


def simplify(g: DiGraph) -> tuple[DiGraph, GraphMorphism]:
    """Merge parallel edges with equal ordered boundary.

    Returns the simple graph together with the canonical projection, which is
    the identity on vertices.  The representative id kept for each class of
    parallel edges is the lexicographically least member.
    """
    classes: dict[tuple[str, str], str] = {}
    for eid in sorted(g.edges):
        bnd = g.ends(eid)
        if bnd not in classes:
            classes[bnd] = eid
    simple = DiGraph(g.vertices, [(rep, s, t) for (s, t), rep in classes.items()])
    q = {eid: classes[g.ends(eid)] for eid in g.edges}
    rho = GraphMorphism(g, simple, {v: v for v in g.vertices}, q)
    return simple, rho


def excise(g: DiGraph) -> DiGraph:
    """Remove all loops; the vertex set is unchanged."""
    return DiGraph(g.vertices, [(e, s, t) for e, s, t in g.edge_list() if s != t])


def opposite(g: DiGraph) -> DiGraph:
    """Swap source and target of every edge."""
    return DiGraph(g.vertices, [(e, t, s) for e, s, t in g.edge_list()])


def forget(g: DiGraph) -> UndirectedGraph:
    """Drop edge directions, keeping ids; a directed loop becomes an undirected loop."""
    return UndirectedGraph(g.vertices, [(e, (s, t)) for e, s, t in g.edge_list()])


def bidirect_edge_id(eid: str, x: str, y: str) -> str:
    return f"{eid}:{x}>{y}"


def bidirect(h: UndirectedGraph) -> DiGraph:
    """Orient every non-loop edge both ways; loops stay single directed loops."""
    edges = []
    for eid, ends in h.edges.items():
        if len(ends) == 1:
            (x,) = ends
            edges.append((bidirect_edge_id(eid, x, x), x, x))
        else:
            x, y = ends
            edges.append((bidirect_edge_id(eid, x, y), x, y))
            edges.append((bidirect_edge_id(eid, y, x), y, x))
    return DiGraph(h.vertices, edges)


def pair_id(a: str, b: str) -> str:
    return f"({a},{b})"


def pullback(
    phi: GraphMorphism, psi: GraphMorphism
) -> tuple[DiGraph, GraphMorphism, GraphMorphism]:
    """Fibre product of phi and psi over their common target.

    Vertices are pairs with equal image, edges are edge pairs with equal
    image; the returned morphisms are the two projections.
    """
    if phi.target != psi.target:
        raise DomainError("pullback requires morphisms with the same target")
    vs = [
        (u, v)
        for u in phi.source.vertices
        for v in psi.source.vertices
        if phi.p[u] == psi.p[v]
    ]
    es = [
        (e, f)
        for e in phi.source.edges
        for f in psi.source.edges
        if phi.q[e] == psi.q[f]
    ]
    vertex_ids = [pair_id(u, v) for u, v in vs]
    if len(set(vertex_ids)) != len(vertex_ids):
        raise DomainError("pullback pair ids collide; rename vertices without ',' or '()'")
    g = DiGraph(
        [pair_id(u, v) for u, v in vs],
        [
            (
                pair_id(e, f),
                pair_id(phi.source.src(e), psi.source.src(f)),
                pair_id(phi.source.dst(e), psi.source.dst(f)),
            )
            for e, f in es
        ],
    )
    pi1 = GraphMorphism(
        g,
        phi.source,
        {pair_id(u, v): u for u, v in vs},
        {pair_id(e, f): e for e, f in es},
    )
    pi2 = GraphMorphism(
        g,
        psi.source,
        {pair_id(u, v): v for u, v in vs},
        {pair_id(e, f): f for e, f in es},
    )
    return g, pi1, pi2


def ancestors(g: DiGraph, w: str) -> frozenset[str]:
    """All vertices with a walk to w, including w itself."""
    seen = {w}
    stack = [w]
    while stack:
        x = stack.pop()
        for e in g.in_edges(x):
            s = g.src(e)
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return frozenset(seen)


def descendants(g: DiGraph, v: str) -> frozenset[str]:
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for e in g.out_edges(x):
            t = g.dst(e)
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


@dataclass(frozen=True)
class ReachabilityReport:
    pr: dict[str, frozenset[str]]
    reachable_vertices: frozenset[str]
    co_reachable_vertices: frozenset[str]


def reachability(g: DiGraph) -> ReachabilityReport:
    """Ancestor sets, plus the vertices reachable from (or co-reachable to) all."""
    allv = set(g.vertices)
    pr = {w: ancestors(g, w) for w in g.vertices}
    reach = frozenset(w for w in g.vertices if pr[w] == allv)
    co = frozenset(v for v in g.vertices if descendants(g, v) == allv)
    return ReachabilityReport(pr, reach, co)


def weakly_connected(g: DiGraph) -> bool:
    if not g.vertices:
        return True
    seen = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        x = stack.pop()
        for e in g.out_edges(x) + g.in_edges(x):
            for y in g.ends(e):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return len(seen) == len(g.vertices)


def strongly_connected_components(g: DiGraph) -> list[frozenset[str]]:
    """Tarjan's algorithm, iterative; components in reverse topological order."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    onstack: set[str] = set()
    stack: list[str] = []
    comps: list[frozenset[str]] = []
    counter = [0]

    for root in g.vertices:
        if root in index:
            continue
        work = [(root, iter(g.out_edges(root)))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        onstack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for e in it:
                w = g.dst(e)
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(g.out_edges(w))))
                    advanced = True
                    break
                elif w in onstack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    onstack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    return comps


def contract_cycle(g: DiGraph, cycle: DirectedCycle) -> DiGraph:
    """Collapse a directed cycle to a fresh vertex.

    Cycle edges are deleted; every other edge incident to a cycle vertex is
    re-attached to the fresh vertex, keeping multiplicity.  The fresh vertex
    id joins the contracted vertex ids with "+".
    """
    es = cycle.edges
    if not es:
        raise DomainError("cycle must contain at least one edge")
    if len(set(es)) != len(es):
        raise DomainError("cycle edges must be pairwise distinct")
    for e in es:
        if e not in g.edges:
            raise DomainError(f"cycle edge {e!r} not in graph")
    for i, e in enumerate(es):
        nxt = es[(i + 1) % len(es)]
        if g.dst(e) != g.src(nxt):
            raise DomainError(f"edges {e!r} and {nxt!r} are not consecutive in a cycle")
    cyc_vertices = {g.src(e) for e in es} | {g.dst(e) for e in es}
    fresh = "+".join(sorted(cyc_vertices))
    others = [v for v in g.vertices if v not in cyc_vertices]
    while fresh in others:
        fresh += "'"
    cyc_edge_set = set(es)
    new_edges = []
    for e, s, t in g.edge_list():
        if e in cyc_edge_set:
            continue
        ns = fresh if s in cyc_vertices else s
        nt = fresh if t in cyc_vertices else t
        new_edges.append((e, ns, nt))
    return DiGraph(others + [fresh], new_edges)


def subgraph(g: DiGraph, vertices: Iterable[str], edges: Iterable[str]) -> DiGraph:
    """Restriction to the given vertices and edges; edges survive only when
    their endpoints are both kept."""
    vs = set(vertices)
    es = set(edges)
    unknown_v = vs - set(g.vertices)
    unknown_e = es - set(g.edges)
    if unknown_v or unknown_e:
        raise DomainError(
            f"subgraph selects unknown items: {sorted(unknown_v)[:3]} {sorted(unknown_e)[:3]}"
        )
    kept = [
        (e, s, t)
        for e, s, t in g.edge_list()
        if e in es and s in vs and t in vs
    ]
    return DiGraph(vs, kept)


def image_subgraph(m: GraphMorphism) -> DiGraph:
    """The image of a morphism, as a subgraph of its target."""
    return subgraph(m.target, set(m.p.values()), set(m.q.values()))


def graph_union_isomorphic(a: DiGraph, b: DiGraph) -> bool:
    """Brute-force digraph isomorphism for small graphs (multigraphs allowed)."""
    if len(a.vertices) != len(b.vertices) or len(a.edges) != len(b.edges):
        return False

    def profile(g, v):
        outs = sorted(g.dst(e) == v for e in g.out_edges(v))
        return (len(g.out_edges(v)), len(g.in_edges(v)), sum(outs))

    from itertools import permutations

    bs = list(b.vertices)
    aprof = {v: profile(a, v) for v in a.vertices}
    bprof = {v: profile(b, v) for v in bs}
    b_multi: dict[tuple[str, str], int] = {}
    for _, s, t in b.edge_list():
        b_multi[(s, t)] = b_multi.get((s, t), 0) + 1
    for perm in permutations(bs):
        mapping = dict(zip(a.vertices, perm))
        if any(aprof[v] != bprof[mapping[v]] for v in a.vertices):
            continue
        a_multi: dict[tuple[str, str], int] = {}
        for _, s, t in a.edge_list():
            key = (mapping[s], mapping[t])
            a_multi[key] = a_multi.get(key, 0) + 1
        if a_multi == b_multi:
            return True
    return False
