"""Directed emulator and cover predicates, cover extraction, excision
extension, undirected (Fellows-style) emulators, bidirection transfers, and a
bounded search for directed covers under a genus bound.

A directed emulator sends outgoing edges at each vertex surjectively onto the
outgoing edges at its image; a directed cover does so bijectively.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable

from .digraph import (
    DiGraph,
    GraphMorphism,
    UndirectedGraph,
    UndirectedMorphism,
    bidirect,
    bidirect_edge_id,
    excise,
    forget,
    opposite,
    simplify,
    subgraph,
    validate_morphism,
    validate_undirected_morphism,
    weakly_connected,
)
from .errors import BudgetError, DomainError, PreconditionError
from .genus import (
    GenusResult,
    RotationSystem,
    genus_exact,
    is_planar,
    trace_faces,
    undirected_girth,
)


@dataclass(frozen=True)
class EmulatorReport:
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def is_directed_emulator(phi: GraphMorphism) -> EmulatorReport:
    """Surjective on vertices, with every outgoing edge of the target lifting
    through every preimage of its source vertex."""
    base = validate_morphism(phi)
    if not base.ok:
        raise DomainError(f"invalid morphism: {base.reason} at {base.witness}")
    if set(phi.p.values()) != set(phi.target.vertices):
        missing = sorted(set(phi.target.vertices) - set(phi.p.values()))
        return EmulatorReport(False, "vertex map not surjective", tuple(missing[:2]))
    lifts: dict[tuple[str, str], int] = {}
    for e0, f in phi.q.items():
        lifts[(f, phi.source.src(e0))] = lifts.get((f, phi.source.src(e0)), 0) + 1
    for f in phi.target.edges:
        fsrc = phi.target.src(f)
        for x in phi.source.vertices:
            if phi.p[x] != fsrc:
                continue
            if (f, x) not in lifts:
                return EmulatorReport(
                    False, "missing outgoing lift", (f, x)
                )
    return EmulatorReport(True)


def is_directed_cover(phi: GraphMorphism) -> EmulatorReport:
    """A directed emulator whose lifts are unique: outgoing stars map
    bijectively."""
    rep = is_directed_emulator(phi)
    if not rep.ok:
        return rep
    counts: dict[tuple[str, str], int] = {}
    for e0, f in phi.q.items():
        key = (f, phi.source.src(e0))
        counts[key] = counts.get(key, 0) + 1
        if counts[key] > 1:
            return EmulatorReport(False, "lift not unique", key)
    return EmulatorReport(True)


@dataclass(frozen=True)
class StarReport:
    out_map: dict[str, str]
    in_map: dict[str, str]
    out_injective: bool
    out_surjective: bool
    in_injective: bool
    in_surjective: bool


def star_maps(phi: GraphMorphism, x: str) -> StarReport:
    """Restrictions of the edge map to the outgoing and incoming stars at x,
    with their classification."""
    if x not in set(phi.source.vertices):
        raise DomainError(f"unknown vertex {x!r}")
    out_map = {e: phi.q[e] for e in phi.source.out_edges(x)}
    in_map = {e: phi.q[e] for e in phi.source.in_edges(x)}
    img = phi.p[x]
    out_target = set(phi.target.out_edges(img))
    in_target = set(phi.target.in_edges(img))
    return StarReport(
        out_map,
        in_map,
        len(set(out_map.values())) == len(out_map),
        set(out_map.values()) == out_target,
        len(set(in_map.values())) == len(in_map),
        set(in_map.values()) == in_target,
    )


def is_incoming_emulator(phi: GraphMorphism) -> EmulatorReport:
    """Dual notion via reversal: phi is an incoming emulator exactly when its
    opposite is an outgoing one."""
    op = GraphMorphism(
        opposite(phi.source), opposite(phi.target), dict(phi.p), dict(phi.q)
    )
    return is_directed_emulator(op)


def extract_cover(phi: GraphMorphism) -> GraphMorphism:
    """Drop surplus lifts from a directed emulator to obtain a directed cover
    on the same vertex set.

    At each source vertex, for each outgoing target edge, the lift with the
    least edge id is kept.
    """
    rep = is_directed_emulator(phi)
    if not rep.ok:
        raise DomainError(f"not a directed emulator: {rep.reason} at {rep.witness}")
    keep: dict[tuple[str, str], str] = {}
    for e in sorted(phi.source.edges):
        key = (phi.source.src(e), phi.q[e])
        keep.setdefault(key, e)
    kept_edges = set(keep.values())
    sub = subgraph(phi.source, phi.source.vertices, kept_edges)
    restricted = GraphMorphism(
        sub, phi.target, dict(phi.p), {e: phi.q[e] for e in kept_edges}
    )
    check = is_directed_cover(restricted)
    if not check.ok:
        raise DomainError(f"extraction failed to produce a cover: {check.reason}")
    return restricted


def extend_over_excision(psi: GraphMorphism, h: DiGraph) -> GraphMorphism:
    """Extend a cover (or emulator) of Exc(h) to one of h by re-creating one
    loop per (loop of h, fibre vertex over its base point)."""
    if psi.target != excise(h):
        raise DomainError("target of the morphism is not the excision of the given graph")
    loops = [e for e in h.edges if h.is_loop(e)]
    new_edges = psi.source.edge_list()
    q = dict(psi.q)
    existing = set(psi.source.edges)
    for e in loops:
        base = h.src(e)
        for x in sorted(v for v, w in psi.p.items() if w == base):
            nid = f"{e}@{x}"
            while nid in existing:
                nid += "'"
            existing.add(nid)
            new_edges.append((nid, x, x))
            q[nid] = e
    total = DiGraph(psi.source.vertices, new_edges)
    return GraphMorphism(total, h, dict(psi.p), q)


def is_undirected_emulator(phi: UndirectedMorphism) -> EmulatorReport:
    """Fellows-style emulator: epimorphism with an incident lift of every
    edge at every preimage of each of its endpoints."""
    base = validate_undirected_morphism(phi)
    if not base.ok:
        raise DomainError(f"invalid undirected morphism: {base.reason}")
    if not phi.is_surjective():
        return EmulatorReport(False, "not an epimorphism")
    for f in phi.target.edges:
        for x in phi.target.ends(f):
            for xp in (v for v, w in phi.p.items() if w == x):
                lifts = [
                    e
                    for e in phi.source.star(xp)
                    if phi.q[e] == f
                ]
                if not lifts:
                    return EmulatorReport(False, "missing lift", (f, xp))
    return EmulatorReport(True)


def is_undirected_cover(phi: UndirectedMorphism) -> EmulatorReport:
    rep = is_undirected_emulator(phi)
    if not rep.ok:
        return rep
    for f in phi.target.edges:
        for x in phi.target.ends(f):
            for xp in (v for v, w in phi.p.items() if w == x):
                lifts = [e for e in phi.source.star(xp) if phi.q[e] == f]
                if len(lifts) > 1:
                    return EmulatorReport(False, "lift not unique", (f, xp))
    return EmulatorReport(True)


def adjunction_transfer(phi: GraphMorphism, h: UndirectedGraph) -> UndirectedMorphism:
    """Turn a directed morphism into the bidirection of h into an undirected
    morphism out of the forgotten source (drop the orientation component of
    each image edge)."""
    double = bidirect(h)
    if phi.target != double:
        raise DomainError("morphism target is not the bidirection of the given graph")
    first_of = {}
    for eid, ends in h.edges.items():
        if len(ends) == 1:
            first_of[bidirect_edge_id(eid, ends[0], ends[0])] = eid
        else:
            a, b = ends
            first_of[bidirect_edge_id(eid, a, b)] = eid
            first_of[bidirect_edge_id(eid, b, a)] = eid
    q = {e: first_of[f] for e, f in phi.q.items()}
    out = UndirectedMorphism(forget(phi.source), h, dict(phi.p), q)
    check = validate_undirected_morphism(out)
    if not check.ok:
        raise DomainError(f"transfer produced an invalid morphism: {check.reason}")
    return out


def adjunction_inverse(psi: UndirectedMorphism, g: DiGraph) -> GraphMorphism:
    """Inverse transfer: reconstruct the directed morphism g -> bidirect(target)
    from an undirected morphism out of forget(g)."""
    if psi.source != forget(g):
        raise DomainError("undirected morphism source is not the forgotten graph")
    double = bidirect(psi.target)
    q = {}
    for e in g.edges:
        s, t = g.ends(e)
        q[e] = bidirect_edge_id(psi.q[e], psi.p[s], psi.p[t])
    out = GraphMorphism(g, double, dict(psi.p), q)
    check = validate_morphism(out)
    if not check.ok:
        raise DomainError(f"inverse transfer invalid: {check.reason}")
    return out


def lift_direction(phi: UndirectedMorphism, direction: DiGraph) -> GraphMorphism:
    """Lift an undirected emulator over a loopless graph to a directed
    emulator onto a chosen direction of the base."""
    rep = is_undirected_emulator(phi)
    if not rep.ok:
        raise DomainError(f"not an undirected emulator: {rep.reason}")
    base = phi.target
    if any(len(base.ends(e)) == 1 for e in base.edges):
        raise PreconditionError("direction lifting requires a loopless base graph")
    if forget(direction) != base:
        raise DomainError("the given digraph is not a direction of the base graph")
    chosen = {e: direction.ends(e) for e in direction.edges}
    edges = []
    q = {}
    for e in phi.source.edges:
        ends = phi.source.ends(e)
        if len(ends) == 1:
            x = y = ends[0]
        else:
            x, y = ends
        img = phi.q[e]
        ix, iy = chosen[img]
        if (phi.p[x], phi.p[y]) == (ix, iy):
            edges.append((e, x, y))
        elif (phi.p[y], phi.p[x]) == (ix, iy):
            edges.append((e, y, x))
        else:
            raise DomainError(f"edge {e!r} cannot be oriented over the direction")
        q[e] = img
    lifted = DiGraph(phi.source.vertices, edges)
    out = GraphMorphism(lifted, direction, dict(phi.p), q)
    check = is_directed_emulator(out)
    if not check.ok:
        raise DomainError(f"lifted morphism is not a directed emulator: {check.reason}")
    return out


def r_image_morphism(phi: GraphMorphism) -> GraphMorphism:
    """Push a morphism through parallel-edge simplification on both sides."""
    rs, rho_s = simplify(phi.source)
    rt, rho_t = simplify(phi.target)
    q = {}
    for e in rs.edges:
        q[e] = rho_t.q[phi.q[e]]
    return GraphMorphism(rs, rt, dict(phi.p), q)


def excise_restrict(phi: GraphMorphism) -> GraphMorphism:
    """Restrict a morphism to the loopless part: drop source edges whose
    image (or self) is a loop.  Emulators stay emulators."""
    tgt = excise(phi.target)
    keep = [
        e
        for e in phi.source.edges
        if not phi.source.is_loop(e) and not phi.target.is_loop(phi.q[e])
    ]
    src = subgraph(phi.source, phi.source.vertices, keep)
    return GraphMorphism(src, tgt, dict(phi.p), {e: phi.q[e] for e in keep})


@dataclass(frozen=True)
class CoverSearchSpec:
    """Bounded instance of the search for a directed cover of low genus."""

    base: DiGraph
    max_fiber: int = 2
    genus_bound: int = 0
    connected_only: bool = True
    time_budget: float = 300.0

    def validate(self):
        if not self.base.vertices:
            raise DomainError("search base must be non-empty")
        if self.max_fiber < 1:
            raise DomainError("max_fiber must be at least 1")
        if self.genus_bound < 0:
            raise DomainError("genus_bound must be non-negative")
        if self.time_budget <= 0:
            raise DomainError("time budget must be positive")


@dataclass(frozen=True)
class CoverCertificate:
    """A verified directed cover together with an embedding witnessing its
    genus."""

    base: DiGraph
    total: DiGraph
    morphism: GraphMorphism
    genus_witness: RotationSystem
    genus: int

    def verify(self) -> None:
        rep = is_directed_cover(self.morphism)
        if not rep.ok:
            raise DomainError(f"certificate morphism is not a cover: {rep.reason}")
        if self.morphism.target != self.base or self.morphism.source != self.total:
            raise DomainError("certificate graphs do not match its morphism")
        _, traced = trace_faces(forget(self.total), self.genus_witness)
        if traced != self.genus:
            raise DomainError(
                f"certificate genus {self.genus} does not match its witness ({traced})"
            )


@dataclass(frozen=True)
class SearchOutcome:
    status: str  # "found" | "exhausted" | "budget_exceeded"
    certificate: CoverCertificate | None = None


def _cover_girth_floor(base: DiGraph) -> int:
    """Girth floor valid for every cover of the base: 3 when the base is
    simple, loopless and free of directed 2-cycles, else weaker."""
    if any(base.is_loop(e) for e in base.edges):
        return 1
    if not base.is_simple():
        return 2
    pairs = {(s, t) for _, s, t in base.edge_list()}
    if any((t, s) in pairs for s, t in pairs):
        return 2
    return 3


def _fiber_vectors(n: int, max_fiber: int):
    for vec in product(range(1, max_fiber + 1), repeat=n):
        yield vec


def _assignment_canonical(base: DiGraph, sizes: dict[str, int], assignment, root) -> bool:
    """Reject assignments that a fibre permutation (fixing the pinned root
    vertex) maps to something lexicographically smaller."""
    perm_space = 1
    for v, k in sizes.items():
        perm_space *= math.factorial(k - 1 if v == root else k)
        if perm_space > 20000:
            return True  # too many symmetries to reject; accept duplicates
    vlist = list(sizes)
    perms_per_vertex = []
    for v in vlist:
        k = sizes[v]
        if v == root:
            perms_per_vertex.append([(0,) + p for p in permutations(range(1, k))])
        else:
            perms_per_vertex.append(list(permutations(range(k))))
    edge_keys = sorted(assignment)
    current = tuple(assignment[k] for k in edge_keys)
    for combo in product(*perms_per_vertex):
        perm_of = {v: combo[i] for i, v in enumerate(vlist)}
        mapped = {}
        for (eid, i), j in assignment.items():
            u, w = base.ends(eid)
            mapped[(eid, perm_of[u][i])] = perm_of[w][j]
        candidate = tuple(mapped[k] for k in edge_keys)
        if candidate < current:
            return False
    return True


def _build_total(base: DiGraph, sizes: dict[str, int], assignment) -> tuple[DiGraph, GraphMorphism]:
    vids = {(v, i): f"{v}#{i}" for v in sizes for i in range(sizes[v])}
    edges = []
    q = {}
    p = {vids[(v, i)]: v for v, i in vids}
    for (eid, i), j in assignment.items():
        u, w = base.ends(eid)
        nid = f"{eid}#{i}"
        edges.append((nid, vids[(u, i)], vids[(w, j)]))
        q[nid] = eid
    total = DiGraph(list(vids.values()), edges)
    return total, GraphMorphism(total, base, p, q)


def search_covers(spec: CoverSearchSpec) -> SearchOutcome:
    """Enumerate directed covers of the base with bounded fibres, pruning by
    the Euler/girth bound, and return the first certificate whose exact genus
    is within the bound.

    Every assignment of one target fibre vertex per (base edge, source fibre
    vertex) yields a cover; conversely every cover with fibres within the
    bound arises this way, so "exhausted" refutes existence within the
    bounds.  Candidates whose genus cannot be decided within the rotation
    budget downgrade "exhausted" to "budget_exceeded".
    """
    spec.validate()
    base = spec.base
    deadline = _time.monotonic() + spec.time_budget
    girth_floor = _cover_girth_floor(base)
    root = min(base.vertices)
    undecided = False

    base_out = {v: sorted(base.out_edges(v)) for v in base.vertices}
    vorder = sorted(base.vertices)

    for vec in _fiber_vectors(len(vorder), spec.max_fiber):
        if _time.monotonic() > deadline:
            return SearchOutcome("budget_exceeded")
        sizes = dict(zip(vorder, vec))
        total_v = sum(vec)
        total_e = sum(len(base_out[v]) * sizes[v] for v in vorder)
        if girth_floor >= 3 and total_e >= 2:
            euler_bound = (
                1
                - total_v / 2
                + total_e * (girth_floor - 2) / (2 * girth_floor)
            )
            if math.ceil(euler_bound) > spec.genus_bound:
                continue
        slots = [
            (eid, i)
            for v in vorder
            for eid in base_out[v]
            for i in range(sizes[v])
        ]
        choice_sets = [range(sizes[base.dst(eid)]) for eid, _ in slots]
        for combo in product(*choice_sets):
            if _time.monotonic() > deadline:
                return SearchOutcome("budget_exceeded")
            assignment = {slot: j for slot, j in zip(slots, combo)}
            if not _assignment_canonical(base, sizes, assignment, root):
                continue
            total, morphism = _build_total(base, sizes, assignment)
            if spec.connected_only and not weakly_connected(total):
                continue
            planar = is_planar(total)
            if spec.genus_bound == 0:
                if not planar.planar:
                    continue
                genus_res = GenusResult(0, planar.witness)
            else:
                if planar.planar:
                    genus_res = GenusResult(0, planar.witness)
                else:
                    cand_budget = None if len(total.vertices) <= 14 else 10**8
                    try:
                        genus_res = genus_exact(total, budget=cand_budget)
                    except BudgetError:
                        undecided = True
                        continue
                if genus_res.genus > spec.genus_bound:
                    continue
            cert = CoverCertificate(
                base, total, morphism, genus_res.witness, genus_res.genus
            )
            cert.verify()
            return SearchOutcome("found", cert)
    return SearchOutcome("budget_exceeded" if undecided else "exhausted")
