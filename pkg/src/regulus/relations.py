"""Automatic relations on digraphs: verification, quotients, factorization,
Myhill-Nerode style refinement, complete final systems, and the lattice
structure (join, meet, maximum, terminal quotient).

An automatic relation is a pair of equivalences (on vertices and on edges)
such that related edges have related endpoints (compatibility) and related
vertices emulate each other's outgoing edges (bisimilarity).  Quotienting by
one is exactly a directed emulation onto the quotient graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .digraph import (
    DiGraph,
    GraphMorphism,
    ancestors,
    reachability,
    strongly_connected_components,
)
from .errors import DomainError
from .semiauto import SemiAutomaton


def _canonical_partition(classes: Iterable[Iterable[str]]) -> tuple[tuple[str, ...], ...]:
    normer = [tuple(sorted(set(c))) for c in classes if len(tuple(c)) > 0]
    return tuple(sorted(normer, key=lambda c: c[0]))


@dataclass(frozen=True)
class AutomaticRelation:
    """Paired vertex/edge partitions in canonical form (classes sorted by
    least member), so relation equality is structural equality."""

    vertex_classes: tuple[tuple[str, ...], ...]
    edge_classes: tuple[tuple[str, ...], ...]

    @staticmethod
    def from_classes(vertex_classes, edge_classes) -> "AutomaticRelation":
        return AutomaticRelation(
            _canonical_partition(vertex_classes), _canonical_partition(edge_classes)
        )

    @staticmethod
    def identity(g: DiGraph) -> "AutomaticRelation":
        return AutomaticRelation.from_classes(
            [[v] for v in g.vertices], [[e] for e in g.edges]
        )

    def vertex_class_of(self) -> dict[str, tuple[str, ...]]:
        return {v: c for c in self.vertex_classes for v in c}

    def edge_class_of(self) -> dict[str, tuple[str, ...]]:
        return {e: c for c in self.edge_classes for e in c}

    def is_identity(self) -> bool:
        return all(len(c) == 1 for c in self.vertex_classes) and all(
            len(c) == 1 for c in self.edge_classes
        )


def relation_leq(r1: AutomaticRelation, r2: AutomaticRelation) -> bool:
    """r1 <= r2 when every r1 class is contained in an r2 class (both sorts)."""
    for mine, theirs in (
        (r1.vertex_classes, r2.vertex_class_of()),
        (r1.edge_classes, r2.edge_class_of()),
    ):
        for c in mine:
            target = theirs[c[0]]
            if any(theirs[x] != target for x in c[1:]):
                return False
    return True


@dataclass(frozen=True)
class RelationReport:
    ok: bool
    clause: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def _check_partition(items: Sequence[str], classes) -> None:
    flat = [x for c in classes for x in c]
    if len(flat) != len(set(flat)) or set(flat) != set(items):
        raise DomainError("classes do not partition the underlying set")


def is_automatic(g: DiGraph, r: AutomaticRelation) -> RelationReport:
    """Check compatibility and bisimilarity; the report names the violated
    clause and a witness."""
    _check_partition(g.vertices, r.vertex_classes)
    _check_partition(list(g.edges), r.edge_classes)
    vclass = r.vertex_class_of()
    for c in r.edge_classes:
        s0, t0 = vclass[g.src(c[0])], vclass[g.dst(c[0])]
        for e in c[1:]:
            if vclass[g.src(e)] != s0:
                return RelationReport(False, "compatibility", (c[0], e, "src"))
            if vclass[g.dst(e)] != t0:
                return RelationReport(False, "compatibility", (c[0], e, "dst"))
    for c in r.edge_classes:
        sources = {g.src(e) for e in c}
        needed = vclass[g.src(c[0])]
        for x in needed:
            if x not in sources:
                return RelationReport(False, "bisimilarity", (x, c[0]))
    return RelationReport(True)


def quotient(g: DiGraph, r: AutomaticRelation) -> tuple[DiGraph, GraphMorphism]:
    """Quotient graph with class-representative ids (least member) and the
    canonical projection, which is a directed emulator."""
    report = is_automatic(g, r)
    if not report.ok:
        raise DomainError(f"relation is not automatic: {report.clause} at {report.witness}")
    vrep = {v: c[0] for c in r.vertex_classes for v in c}
    erep = {e: c[0] for c in r.edge_classes for e in c}
    q = DiGraph(
        sorted({vrep[v] for v in g.vertices}),
        [(c[0], vrep[g.src(c[0])], vrep[g.dst(c[0])]) for c in r.edge_classes],
    )
    can = GraphMorphism(g, q, vrep, erep)
    return q, can


def is_cover_relation(g: DiGraph, r: AutomaticRelation) -> bool:
    """True when distinct related edges always have distinct sources."""
    report = is_automatic(g, r)
    if not report.ok:
        raise DomainError(f"relation is not automatic: {report.clause}")
    for c in r.edge_classes:
        sources = [g.src(e) for e in c]
        if len(sources) != len(set(sources)):
            return False
    return True


def canonical_relation(phi: GraphMorphism) -> AutomaticRelation:
    """The relation identifying the fibres of a verified directed emulator."""
    from .emulation import is_directed_emulator

    report = is_directed_emulator(phi)
    if not report.ok:
        raise DomainError(f"not a directed emulator: {report.reason}")
    vfibres: dict[str, list[str]] = {}
    for v, w in phi.p.items():
        vfibres.setdefault(w, []).append(v)
    efibres: dict[str, list[str]] = {}
    for e, f in phi.q.items():
        efibres.setdefault(f, []).append(e)
    return AutomaticRelation.from_classes(vfibres.values(), efibres.values())


def factorize(phi: GraphMorphism) -> tuple[AutomaticRelation, GraphMorphism]:
    """Split a directed emulator uniquely as an isomorphism after the
    canonical quotient projection."""
    r = canonical_relation(phi)
    q, can = quotient(phi.source, r)
    iota = GraphMorphism(
        q,
        phi.target,
        {c[0]: phi.p[c[0]] for c in r.vertex_classes},
        {c[0]: phi.q[c[0]] for c in r.edge_classes},
    )
    if not iota.is_isomorphism():
        raise DomainError("factorization produced a non-isomorphism")
    return r, iota


def compose_relations(
    g: DiGraph, r1: AutomaticRelation, r2: AutomaticRelation
) -> AutomaticRelation:
    """Compose r1 on g with r2 on the quotient g/r1 into a relation on g."""
    q, can = quotient(g, r1)
    report = is_automatic(q, r2)
    if not report.ok:
        raise DomainError("second relation is not automatic on the quotient")
    v2 = r2.vertex_class_of()
    e2 = r2.edge_class_of()
    vgroups: dict[tuple, list[str]] = {}
    for v in g.vertices:
        vgroups.setdefault(v2[can.p[v]], []).append(v)
    egroups: dict[tuple, list[str]] = {}
    for e in g.edges:
        egroups.setdefault(e2[can.q[e]], []).append(e)
    return AutomaticRelation.from_classes(vgroups.values(), egroups.values())


@dataclass(frozen=True)
class FinalFamily:
    """Pairwise-disjoint non-empty vertex subsets."""

    subsets: tuple[frozenset[str], ...]

    @staticmethod
    def of(*subsets: Iterable[str]) -> "FinalFamily":
        return FinalFamily(tuple(frozenset(s) for s in subsets))

    def validate(self, g: DiGraph) -> None:
        seen: set[str] = set()
        for s in self.subsets:
            if not s:
                raise DomainError("final family subsets must be non-empty")
            if not s <= set(g.vertices):
                raise DomainError("final family mentions unknown vertices")
            if s & seen:
                raise DomainError("final family subsets must be pairwise disjoint")
            seen |= s


def _refine_vertices(
    g: DiGraph,
    blocks: list[frozenset[str]],
    signature,
    max_rounds: int,
) -> list[frozenset[str]]:
    """Iterate signature-splitting until stable; asserts the fixpoint arrives
    within max_rounds rounds."""
    rounds = 0
    while True:
        block_of = {v: i for i, b in enumerate(blocks) for v in b}
        groups: dict[tuple, set[str]] = {}
        for v in g.vertices:
            groups.setdefault(signature(v, block_of), set()).add(v)
        new_blocks = [frozenset(s) for s in groups.values()]
        if len(new_blocks) == len(blocks):
            return blocks
        blocks = new_blocks
        rounds += 1
        assert rounds <= max_rounds, "refinement failed to stabilize in |V| rounds"


def mn_refine(a: SemiAutomaton, family: FinalFamily) -> AutomaticRelation:
    """Myhill-Nerode style refinement of states relative to a family of
    disjoint final sets; edges are related when labels match and both
    endpoints are related.  The result is always automatic."""
    g = a.graph
    family.validate(g)
    covered = {v for s in family.subsets for v in s}
    blocks = [s for s in family.subsets]
    rest = frozenset(set(g.vertices) - covered)
    if rest:
        blocks.append(rest)

    def signature(v: str, block_of: dict[str, int]):
        outs = frozenset(
            (a.label(e), block_of[g.dst(e)]) for e in g.out_edges(v)
        )
        return (block_of[v], outs)

    blocks = _refine_vertices(g, blocks, signature, max(1, len(g.vertices)))
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    egroups: dict[tuple, list[str]] = {}
    for e in g.edges:
        key = (a.label(e), block_of[g.src(e)], block_of[g.dst(e)])
        egroups.setdefault(key, []).append(e)
    return AutomaticRelation.from_classes(
        [sorted(b) for b in blocks], egroups.values()
    )


@dataclass(frozen=True)
class FinalSystemReport:
    minimal_system: tuple[str, ...]
    cardinality: int


def complete_final_systems(g: DiGraph) -> FinalSystemReport:
    """One minimal complete final system: the least vertex of each sink
    strongly-connected component.  Its size is an invariant of the graph."""
    comps = strongly_connected_components(g)
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    has_out = set()
    for e, s, t in g.edge_list():
        if comp_of[s] != comp_of[t]:
            has_out.add(comp_of[s])
    sinks = [c for i, c in enumerate(comps) if i not in has_out]
    reps = tuple(sorted(min(c) for c in sinks))
    covered = set()
    for v in reps:
        covered |= ancestors(g, v)
    if covered != set(g.vertices):
        raise DomainError("final system construction failed to cover the graph")
    return FinalSystemReport(reps, len(reps))


def is_complete_final_system(g: DiGraph, vertices: Iterable[str]) -> bool:
    covered: set[str] = set()
    for v in vertices:
        covered |= ancestors(g, v)
    return covered == set(g.vertices)


def canonical_semi_automaton(g: DiGraph, r: AutomaticRelation) -> SemiAutomaton:
    """Label each edge by (the representative of) its edge class."""
    erep = {e: c[0] for c in r.edge_classes for e in c}
    return SemiAutomaton(g, set(erep.values()), erep)


@dataclass(frozen=True)
class RoundTripReport:
    ok: bool
    minimal_system_ok: bool
    class_partition_ok: bool
    reachable_single_ok: bool | None


def automatic_to_mn_roundtrip(g: DiGraph, r: AutomaticRelation) -> RoundTripReport:
    """Recover an automatic relation by refinement over its own canonical
    semi-automaton, from a minimal complete final system, from the full class
    partition, and (when a reachable vertex exists) from that single class."""
    report = is_automatic(g, r)
    if not report.ok:
        raise DomainError(f"relation is not automatic: {report.clause}")
    a_r = canonical_semi_automaton(g, r)
    vclass = r.vertex_class_of()

    system = complete_final_systems(g).minimal_system
    fam_min = FinalFamily(tuple({frozenset(vclass[s]) for s in system}))
    got_min = mn_refine(a_r, fam_min)
    minimal_ok = got_min == r

    fam_all = FinalFamily(tuple(frozenset(c) for c in r.vertex_classes))
    got_all = mn_refine(a_r, fam_all)
    class_ok = got_all == r

    reach = reachability(g).reachable_vertices
    single_ok: bool | None = None
    if reach:
        v = min(reach)
        got_single = mn_refine(a_r, FinalFamily.of(vclass[v]))
        single_ok = got_single == r

    ok = minimal_ok and class_ok and (single_ok is not False)
    return RoundTripReport(ok, minimal_ok, class_ok, single_ok)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def classes(self):
        groups: dict[str, list[str]] = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return groups.values()


def join(g: DiGraph, r1: AutomaticRelation, r2: AutomaticRelation) -> AutomaticRelation:
    """Least upper bound: transitive closure of the unions, which stays
    automatic."""
    for r in (r1, r2):
        rep = is_automatic(g, r)
        if not rep.ok:
            raise DomainError(f"join input is not automatic: {rep.clause}")
    uf_v = _UnionFind(g.vertices)
    uf_e = _UnionFind(g.edges)
    for r in (r1, r2):
        for c in r.vertex_classes:
            for x in c[1:]:
                uf_v.union(c[0], x)
        for c in r.edge_classes:
            for x in c[1:]:
                uf_e.union(c[0], x)
    out = AutomaticRelation.from_classes(uf_v.classes(), uf_e.classes())
    rep = is_automatic(g, out)
    if not rep.ok:
        raise DomainError(f"join failed to be automatic: {rep.clause}")
    return out


def meet(g: DiGraph, r1: AutomaticRelation, r2: AutomaticRelation) -> AutomaticRelation:
    """Greatest lower bound: the greatest fixpoint below the pairwise
    intersections, computed by deleting violating pairs until stable."""
    for r in (r1, r2):
        rep = is_automatic(g, r)
        if not rep.ok:
            raise DomainError(f"meet input is not automatic: {rep.clause}")
    v1, v2 = r1.vertex_class_of(), r2.vertex_class_of()
    e1, e2 = r1.edge_class_of(), r2.edge_class_of()
    vgroups: dict[tuple, set[str]] = {}
    for v in g.vertices:
        vgroups.setdefault((v1[v], v2[v]), set()).add(v)
    egroups: dict[tuple, set[str]] = {}
    for e in g.edges:
        egroups.setdefault((e1[e], e2[e]), set()).add(e)
    vblocks = list(vgroups.values())
    eblocks = list(egroups.values())

    while True:
        vb_of = {v: i for i, b in enumerate(vblocks) for v in b}
        eb_of = {e: i for i, b in enumerate(eblocks) for e in b}
        new_eblocks_map: dict[tuple, set[str]] = {}
        for e in g.edges:
            key = (eb_of[e], vb_of[g.src(e)], vb_of[g.dst(e)])
            new_eblocks_map.setdefault(key, set()).add(e)
        new_vblocks_map: dict[tuple, set[str]] = {}
        for v in g.vertices:
            sig = frozenset(eb_of[e] for e in g.out_edges(v))
            new_vblocks_map.setdefault((vb_of[v], sig), set()).add(v)
        new_vblocks = list(new_vblocks_map.values())
        new_eblocks = list(new_eblocks_map.values())
        if len(new_vblocks) == len(vblocks) and len(new_eblocks) == len(eblocks):
            break
        vblocks, eblocks = new_vblocks, new_eblocks

    out = AutomaticRelation.from_classes(vblocks, eblocks)
    rep = is_automatic(g, out)
    if not rep.ok:
        raise DomainError(f"meet failed to be automatic: {rep.clause}")
    return out


def maximum(g: DiGraph) -> AutomaticRelation:
    """Top of the lattice: the coarsest bisimulation on vertices with the
    vertex-induced edge relation.  Quotienting by it is terminal among the
    emulators out of g."""
    if not g.vertices:
        return AutomaticRelation.from_classes([], [])
    blocks = [frozenset(g.vertices)]

    def signature(v: str, block_of: dict[str, int]):
        return (block_of[v], frozenset(block_of[g.dst(e)] for e in g.out_edges(v)))

    blocks = _refine_vertices(g, blocks, signature, max(1, len(g.vertices)))
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    egroups: dict[tuple, list[str]] = {}
    for e in g.edges:
        egroups.setdefault((block_of[g.src(e)], block_of[g.dst(e)]), []).append(e)
    out = AutomaticRelation.from_classes([sorted(b) for b in blocks], egroups.values())
    rep = is_automatic(g, out)
    if not rep.ok:
        raise DomainError(f"maximum relation failed to be automatic: {rep.clause}")
    return out


def _partitions(items: list):
    """All set partitions of a list (Bell-number many)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def enumerate_automatic_relations(g: DiGraph) -> list[AutomaticRelation]:
    """All automatic relations on a small graph, by exhausting vertex
    partitions and, per vertex partition, the edge partitions refining the
    endpoint-class grouping."""
    out = []
    edges = list(g.edges)
    for vpart in _partitions(list(g.vertices)):
        vclass = {v: i for i, c in enumerate(vpart) for v in c}
        groups: dict[tuple[int, int], list[str]] = {}
        for e in edges:
            groups.setdefault((vclass[g.src(e)], vclass[g.dst(e)]), []).append(e)
        group_list = list(groups.values())

        def group_partitions(i: int):
            if i == len(group_list):
                yield []
                return
            for head in _partitions(group_list[i]):
                for tail in group_partitions(i + 1):
                    yield head + tail

        for epart in group_partitions(0):
            r = AutomaticRelation.from_classes(vpart, epart)
            if is_automatic(g, r).ok:
                out.append(r)
    return out
