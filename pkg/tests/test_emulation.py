from itertools import combinations

import pytest

from regulus import (
    CoverSearchSpec,
    DiGraph,
    DomainError,
    GraphMorphism,
    UndirectedGraph,
    UndirectedMorphism,
    adjunction_inverse,
    adjunction_transfer,
    bidirect,
    compose_morphisms,
    excise,
    extend_over_excision,
    extract_cover,
    forget,
    identity_morphism,
    is_directed_cover,
    is_directed_emulator,
    is_incoming_emulator,
    is_undirected_cover,
    is_undirected_emulator,
    lift_direction,
    pullback,
    search_covers,
    simplify,
    star_maps,
)
from regulus.corpus import (
    amalgamation_loop,
    extraction_pair,
    fork_covers_par2,
    fork_nonemulator,
    loop2_to_loop1,
    par2_swap,
    path_4_over_3,
    vee_over_path,
)
from regulus.emulation import excise_restrict, r_image_morphism
from regulus.formats import certificate_from_json, certificate_to_json, dumps, loads

from conftest import (
    c2,
    loop1,
    random_digraph,
    random_emulator,
    random_morphism_into,
    random_undirected_emulator,
)


class TestDirectedPredicates:
    def test_loop2_to_loop1_emulator_not_cover(self):
        m = loop2_to_loop1()
        assert is_directed_emulator(m).ok
        rep = is_directed_cover(m)
        assert not rep.ok and rep.reason == "lift not unique"

    def test_fork_epimorphism_not_emulator(self):
        rep = is_directed_emulator(fork_nonemulator())
        assert not rep.ok
        assert rep.reason == "missing outgoing lift"
        assert rep.witness[1] in ("u0", "v0")

    def test_amalgamation_is_emulator(self):
        assert is_directed_emulator(amalgamation_loop()).ok

    def test_swap_is_emulator_and_cover(self):
        m = par2_swap()
        assert is_directed_emulator(m).ok
        assert is_directed_cover(m).ok

    def test_c2_wraps_loop(self):
        m = GraphMorphism(c2(), loop1(), {"a": "v", "b": "v"}, {"e1": "g", "e2": "g"})
        assert is_directed_cover(m).ok

    def test_composition_closure(self, rng):
        for _ in range(15):
            base = random_digraph(rng, max_vertices=3, max_edges=4)
            if not base.vertices:
                continue
            mid = random_emulator(rng, base, max_fiber=2)
            top = random_emulator(rng, mid.source, max_fiber=2)
            comp = compose_morphisms(mid, top)
            assert is_directed_emulator(comp).ok
            midc = extract_cover(mid)
            topc = extract_cover(
                GraphMorphism(top.source, midc.source, top.p, top.q)
                if set(top.q.values()) <= set(midc.source.edges)
                else random_emulator(rng, midc.source, max_fiber=2)
            )
            compc = compose_morphisms(midc, topc)
            assert is_directed_cover(compc).ok


class TestStarMaps:
    def test_loop2_star_two_to_one(self):
        rep = star_maps(loop2_to_loop1(), "u")
        assert rep.out_surjective and not rep.out_injective
        assert len(rep.out_map) == 2

    def test_isomorphism_bijective_everywhere(self):
        m = par2_swap()
        for v in m.source.vertices:
            rep = star_maps(m, v)
            assert rep.out_injective and rep.out_surjective
            assert rep.in_injective and rep.in_surjective

    def test_incoming_via_opposite(self):
        # the amalgamation map is an incoming emulator too, by symmetry
        assert is_incoming_emulator(amalgamation_loop()).ok
        # the fork map fails outgoing lifting but every incoming star lifts:
        # incoming and outgoing emulation are genuinely different notions
        assert not is_directed_emulator(fork_nonemulator()).ok
        assert is_incoming_emulator(fork_nonemulator()).ok


class TestExtractCover:
    def test_loop2_keeps_least_loop(self):
        out = extract_cover(loop2_to_loop1())
        assert set(out.source.edges) == {"e"}
        assert set(out.source.vertices) == {"u"}

    def test_cover_unchanged(self):
        m = GraphMorphism(c2(), loop1(), {"a": "v", "b": "v"}, {"e1": "g", "e2": "g"})
        out = extract_cover(m)
        assert out.source == m.source
        assert out.q == m.q

    def test_extraction_pair_deterministic_choice(self):
        out = extract_cover(extraction_pair())
        assert set(out.source.vertices) == {"v1", "v2", "w1", "w2"}
        # v2 keeps its least lift e2 and drops e3
        assert set(out.source.edges) == {"e1", "e2"}
        assert is_directed_cover(out).ok

    def test_random_emulators_extract_to_covers(self, rng):
        for _ in range(20):
            base = random_digraph(rng, max_vertices=4, max_edges=5)
            if not base.vertices:
                continue
            m = random_emulator(rng, base)
            out = extract_cover(m)
            assert set(out.source.vertices) == set(m.source.vertices)
            assert is_directed_cover(out).ok


class TestExciseExtension:
    def test_two_fiber_loops_recreated(self):
        base = loop1()
        fibre = DiGraph(["x0", "x1"], [])
        psi = GraphMorphism(fibre, excise(base), {"x0": "v", "x1": "v"}, {})
        out = extend_over_excision(psi, base)
        assert sorted(out.source.edges) == ["g@x0", "g@x1"]
        assert is_directed_cover(out).ok

    def test_loopless_base_unchanged(self):
        base = c2()
        ident = identity_morphism(excise(base))
        out = extend_over_excision(ident, base)
        assert out.source == base
        assert is_directed_cover(out).ok

    def test_target_mismatch_rejected(self):
        with pytest.raises(DomainError):
            extend_over_excision(identity_morphism(c2()), loop1())

    def test_round_trip_with_excision(self, rng):
        for _ in range(10):
            h = random_digraph(rng, max_vertices=4, max_edges=6)
            if not h.vertices:
                continue
            core = excise(h)
            m = random_emulator(rng, core, max_fiber=2)
            cov = extract_cover(m)
            ext = extend_over_excision(cov, h)
            assert is_directed_cover(ext).ok
            assert excise_restrict(ext).source == cov.source


class TestUndirectedPredicates:
    def test_path_4_over_3_emulator_without_cover_subgraph(self):
        m = path_4_over_3()
        assert is_undirected_emulator(m).ok
        assert not is_undirected_cover(m).ok
        # exhaustively: no spanning subgraph is a cover
        src = m.source
        edge_ids = sorted(src.edges)
        found = False
        for k in range(len(edge_ids) + 1):
            for keep in combinations(edge_ids, k):
                sub = UndirectedGraph(
                    src.vertices, [(e, src.ends(e)) for e in keep]
                )
                try:
                    cand = UndirectedMorphism(
                        sub, m.target, dict(m.p), {e: m.q[e] for e in keep}
                    )
                    if is_undirected_cover(cand).ok:
                        found = True
                except DomainError:
                    continue
        assert not found

    def test_identity_is_cover(self):
        g = forget(c2())
        ident = UndirectedMorphism(g, g, {v: v for v in g.vertices}, {e: e for e in g.edges})
        assert is_undirected_cover(ident).ok

    def test_wrapped_even_cycle_covers(self):
        c4u = UndirectedGraph(
            ["a", "b", "c", "d"],
            [("e1", ("a", "b")), ("e2", ("b", "c")), ("e3", ("c", "d")), ("e4", ("d", "a"))],
        )
        c2u = UndirectedGraph(["x", "y"], [("f1", ("x", "y")), ("f2", ("x", "y"))])
        m = UndirectedMorphism(
            c4u,
            c2u,
            {"a": "x", "b": "y", "c": "x", "d": "y"},
            {"e1": "f1", "e2": "f2", "e3": "f1", "e4": "f2"},
        )
        assert is_undirected_cover(m).ok


class TestAdjunction:
    def test_round_trip_identity(self, rng):
        for _ in range(20):
            g = random_digraph(rng, max_vertices=4, max_edges=6)
            h = forget(random_digraph(rng, max_vertices=3, max_edges=4))
            double = bidirect(h)
            if not double.vertices:
                continue
            phi = random_morphism_into(rng, double, max_fiber=2)
            psi = adjunction_transfer(phi, h)
            back = adjunction_inverse(psi, phi.source)
            assert back.p == phi.p and back.q == phi.q
            again = adjunction_transfer(back, h)
            assert again.p == psi.p and again.q == psi.q

    def test_double_preserves_emulators(self, rng):
        for _ in range(15):
            base_any = random_digraph(rng, max_vertices=3, max_edges=4)
            h = forget(base_any)
            if not h.vertices:
                continue
            um = random_undirected_emulator(rng, _strip_loops(h))
            if not um.source.vertices:
                continue
            doubled_src = bidirect(um.source)
            doubled = GraphMorphism(
                doubled_src,
                bidirect(um.target),
                dict(um.p),
                {
                    e: _double_image(um, doubled_src, e)
                    for e in doubled_src.edges
                },
            )
            assert is_undirected_emulator(um).ok
            assert is_directed_emulator(doubled).ok

    def test_cover_counterexample(self):
        # the directed 2-cycle covers the bidirection of a single edge, but
        # its transfer is an emulator that is not an undirected cover
        h = UndirectedGraph(["x", "y"], [("e", ("x", "y"))])
        double = bidirect(h)
        m = GraphMorphism(
            c2(),
            double,
            {"a": "x", "b": "y"},
            {"e1": "e:x>y", "e2": "e:y>x"},
        )
        assert is_directed_cover(m).ok
        psi = adjunction_transfer(m, h)
        assert is_undirected_emulator(psi).ok
        assert not is_undirected_cover(psi).ok


def _strip_loops(h: UndirectedGraph) -> UndirectedGraph:
    return UndirectedGraph(
        h.vertices, [(e, h.ends(e)) for e in h.edges if not h.is_loop(e)]
    )


def _double_image(um, doubled_src, e):
    from regulus.digraph import bidirect_edge_id

    s, t = doubled_src.ends(e)
    undirected_id = e.split(":")[0]
    return bidirect_edge_id(um.q[undirected_id], um.p[s], um.p[t])


class TestLiftDirection:
    def test_identity_emulator_keeps_direction(self):
        g = forget(c2())
        ident = UndirectedMorphism(g, g, {v: v for v in g.vertices}, {e: e for e in g.edges})
        direction = c2()
        out = lift_direction(ident, direction)
        assert out.source == direction

    def test_path_4_over_3_lifts(self):
        m = path_4_over_3()
        direction = DiGraph(
            ["g1", "g2", "g3"], [("x", "g1", "g2"), ("y", "g2", "g3")]
        )
        out = lift_direction(m, direction)
        assert is_directed_emulator(out).ok
        assert forget(out.source) == m.source

    def test_two_fold_cover_of_edge(self):
        src = UndirectedGraph(
            ["x0", "x1", "y0", "y1"], [("e0", ("x0", "y0")), ("e1", ("x1", "y1"))]
        )
        tgt = UndirectedGraph(["x", "y"], [("e", ("x", "y"))])
        m = UndirectedMorphism(
            src,
            tgt,
            {"x0": "x", "x1": "x", "y0": "y", "y1": "y"},
            {"e0": "e", "e1": "e"},
        )
        direction = DiGraph(["x", "y"], [("e", "x", "y")])
        out = lift_direction(m, direction)
        assert is_directed_emulator(out).ok

    def test_loops_rejected(self):
        g = forget(loop1())
        ident = UndirectedMorphism(g, g, {"v": "v"}, {"g": "g"})
        with pytest.raises(DomainError):
            lift_direction(ident, loop1())


class TestFunctorTransport:
    def test_r_preserves_emulators_but_not_covers(self):
        m = fork_covers_par2()
        assert is_directed_cover(m).ok
        rm = r_image_morphism(m)
        assert is_directed_emulator(rm).ok
        assert not is_directed_cover(rm).ok

    def test_r_transport_on_random_emulators(self, rng):
        for _ in range(20):
            base = random_digraph(rng, max_vertices=3, max_edges=5)
            if not base.vertices:
                continue
            m = random_emulator(rng, base, max_fiber=2)
            assert is_directed_emulator(r_image_morphism(m)).ok

    def test_pullback_transports_emulators_and_covers(self, rng):
        for _ in range(50):
            k = random_digraph(rng, max_vertices=3, max_edges=4)
            if not k.vertices:
                continue
            psi = random_emulator(rng, k, max_fiber=2)
            phi = random_morphism_into(rng, k, max_fiber=2)
            _, pi1, _ = pullback(phi, psi)
            assert is_directed_emulator(pi1).ok
            cov = extract_cover(psi)
            _, pi1c, _ = pullback(phi, cov)
            assert is_directed_cover(pi1c).ok


class TestSearchCovers:
    def test_loop_base_identity_found(self):
        out = search_covers(CoverSearchSpec(loop1(), max_fiber=2, genus_bound=0))
        assert out.status == "found"
        assert out.certificate.genus == 0

    def test_planar_base_identity_cover(self, rng):
        from regulus.digraph import weakly_connected
        from regulus.genus import is_planar as planar_check

        for _ in range(5):
            base = random_digraph(rng, max_vertices=4, max_edges=5)
            if not base.vertices:
                continue
            if not weakly_connected(base):
                continue
            if not planar_check(base).planar:
                continue
            out = search_covers(CoverSearchSpec(base, max_fiber=1, genus_bound=0))
            assert out.status == "found"
            assert len(out.certificate.total.vertices) == len(base.vertices)

    def test_z7_base_exhausts_at_fiber_one(self):
        edges = [
            (f"t{i}_{j}", str(i), str((i + j) % 7))
            for i in range(7)
            for j in (1, 2, 3)
        ]
        base = DiGraph([str(i) for i in range(7)], edges)
        out = search_covers(CoverSearchSpec(base, max_fiber=1, genus_bound=0))
        assert out.status == "exhausted"

    def test_certificate_reverifies_from_serialized_form(self):
        out = search_covers(CoverSearchSpec(c2(), max_fiber=2, genus_bound=0))
        assert out.status == "found"
        data = loads(dumps(certificate_to_json(out.certificate)))
        cert = certificate_from_json(data)
        cert.verify()

    def test_disconnected_allowed_when_requested(self):
        out = search_covers(
            CoverSearchSpec(loop1(), max_fiber=2, genus_bound=0, connected_only=False)
        )
        assert out.status == "found"

    def test_isomorph_rejection_keeps_one_per_orbit(self):
        # every fibre-permutation orbit of assignments must contribute
        # exactly one canonical representative
        from itertools import permutations, product

        from regulus.emulation import _assignment_canonical

        base = c2()
        sizes = {"a": 2, "b": 2}
        root = "a"
        slots = [("e1", 0), ("e1", 1), ("e2", 0), ("e2", 1)]
        all_assignments = [
            dict(zip(slots, combo)) for combo in product(range(2), repeat=4)
        ]
        canonical = [
            a for a in all_assignments if _assignment_canonical(base, sizes, a, root)
        ]

        def orbit(assignment):
            seen = set()
            for pa in [(0, 1)]:  # root fibre pinned
                for pb in permutations(range(2)):
                    perm_of = {"a": pa, "b": pb}
                    mapped = {}
                    for (eid, i), j in assignment.items():
                        u, w = base.ends(eid)
                        mapped[(eid, perm_of[u][i])] = perm_of[w][j]
                    seen.add(tuple(mapped[s] for s in sorted(mapped)))
            return frozenset(seen)

        orbits = {orbit(a) for a in all_assignments}
        assert len(canonical) == len(orbits)
        for a in canonical:
            assert orbit(a) in orbits
