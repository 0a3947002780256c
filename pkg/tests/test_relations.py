import pytest

from regulus import (
    AutomaticRelation,
    DiGraph,
    DomainError,
    FinalFamily,
    GraphMorphism,
    SemiAutomaton,
    automatic_to_mn_roundtrip,
    canonical_relation,
    complete_final_systems,
    compose_relations,
    enumerate_automatic_relations,
    factorize,
    is_automatic,
    is_cover_relation,
    is_directed_cover,
    is_directed_emulator,
    join,
    maximum,
    meet,
    mn_refine,
    quotient,
    relation_leq,
    simplify,
)
from regulus.corpus import amalgamation_loop, loop2_to_loop1, par2_swap
from regulus.digraph import graph_union_isomorphic
from regulus.relations import canonical_semi_automaton, is_complete_final_system

from conftest import c2, c4, loop1, loop2, p2, par2, random_digraph


def wrap_c4_to_c2():
    return AutomaticRelation.from_classes(
        [["a", "c"], ["b", "d"]], [["e1", "e3"], ["e2", "e4"]]
    )


class TestIsAutomatic:
    def test_identity_always_automatic(self, rng):
        for _ in range(20):
            g = random_digraph(rng)
            assert is_automatic(g, AutomaticRelation.identity(g)).ok

    def test_c2_full_merge_is_automatic(self):
        g = c2()
        r = AutomaticRelation.from_classes([["a", "b"]], [["e1", "e2"]])
        assert is_automatic(g, r).ok

    def test_p2_vertex_merge_fails_bisimilarity(self):
        g = p2()
        r = AutomaticRelation.from_classes([["x", "y"]], [["e"]])
        report = is_automatic(g, r)
        assert not report.ok
        assert report.clause == "bisimilarity"
        assert report.witness[0] == "y"

    def test_non_partition_rejected(self):
        g = c2()
        with pytest.raises(DomainError):
            is_automatic(g, AutomaticRelation.from_classes([["a"]], [["e1", "e2"]]))


class TestQuotient:
    def test_identity_gives_isomorphic_graph(self):
        g = c2()
        q, can = quotient(g, AutomaticRelation.identity(g))
        assert q == g
        assert can.is_isomorphism()

    def test_vertex_induced_identity_gives_simplification(self, rng):
        for _ in range(15):
            g = random_digraph(rng)
            groups: dict[tuple, list] = {}
            for e in g.edges:
                groups.setdefault(g.ends(e), []).append(e)
            r = AutomaticRelation.from_classes(
                [[v] for v in g.vertices], groups.values()
            )
            assert is_automatic(g, r).ok
            q, _ = quotient(g, r)
            assert graph_union_isomorphic(q, simplify(g)[0])

    def test_amalgamation_creates_loop(self):
        g = amalgamation_loop().source
        r = AutomaticRelation.from_classes([["u", "w"]], [["e", "f"]])
        q, can = quotient(g, r)
        assert len(q.vertices) == 1
        assert len(q.edges) == 1
        assert q.is_loop("e")
        assert is_directed_emulator(can).ok

    def test_quotient_maps_are_emulators(self, rng):
        for _ in range(15):
            g = random_digraph(rng)
            for r in enumerate_automatic_relations(g)[:6]:
                _, can = quotient(g, r)
                assert is_directed_emulator(can).ok


class TestCoverRelation:
    def test_identity_is_cover(self):
        g = c2()
        assert is_cover_relation(g, AutomaticRelation.identity(g))

    def test_loop2_merge_is_not_cover(self):
        g = loop2()
        r = AutomaticRelation.from_classes([["u"]], [["e", "f"]])
        assert is_automatic(g, r).ok
        assert not is_cover_relation(g, r)

    def test_c4_wrap_is_cover(self):
        assert is_cover_relation(c4(), wrap_c4_to_c2())

    def test_cover_relation_iff_quotient_map_covers(self, rng):
        for _ in range(12):
            g = random_digraph(rng, max_vertices=4, max_edges=6)
            for r in enumerate_automatic_relations(g):
                _, can = quotient(g, r)
                assert is_cover_relation(g, r) == is_directed_cover(can).ok


class TestCanonicalRelation:
    def test_isomorphism_gives_identity(self):
        m = par2_swap()
        r = canonical_relation(m)
        assert r.is_identity()

    def test_simplification_merges_parallel_edges(self):
        g = par2()
        _, rho = simplify(g)
        r = canonical_relation(rho)
        assert r.edge_classes == (("a", "b"),)
        assert all(len(c) == 1 for c in r.vertex_classes)

    def test_rejects_non_emulator(self):
        from regulus.corpus import fork_nonemulator

        with pytest.raises(DomainError):
            canonical_relation(fork_nonemulator())


class TestFactorize:
    def test_isomorphism_splits_trivially(self):
        m = par2_swap()
        r, iota = factorize(m)
        assert r.is_identity()
        assert iota.q == m.q

    def test_quotient_map_gives_identity_iso(self):
        g = c4()
        r = wrap_c4_to_c2()
        _, can = quotient(g, r)
        r2, iota = factorize(can)
        assert r2 == r
        assert iota.p == {v: v for v in iota.source.vertices}

    def test_composite_recovers_relation_and_iso(self):
        g = c4()
        r = wrap_c4_to_c2()
        q, can = quotient(g, r)
        # rename the quotient through an isomorphism
        tgt = DiGraph(["x", "y"], [("u", "x", "y"), ("v", "y", "x")])
        iso = GraphMorphism(q, tgt, {"a": "x", "b": "y"}, {"e1": "u", "e2": "v"})
        composite = GraphMorphism(
            g,
            tgt,
            {v: iso.p[can.p[v]] for v in g.vertices},
            {e: iso.q[can.q[e]] for e in g.edges},
        )
        r2, iota2 = factorize(composite)
        assert r2 == r
        assert iota2.p == iso.p and iota2.q == iso.q

    def test_uniqueness_by_perturbation(self):
        # every alternative relation fails to split the wrap map: the forced
        # second factor is either ill-defined or fails to be injective
        g = c4()
        r = wrap_c4_to_c2()
        _, can = quotient(g, r)
        got, _ = factorize(can)
        assert got == r
        for other in enumerate_automatic_relations(g):
            if other == r:
                continue
            vclass = other.vertex_class_of()
            forced: dict[tuple, str] = {}
            well_defined = True
            for v in g.vertices:
                key = vclass[v]
                if forced.setdefault(key, can.p[v]) != can.p[v]:
                    well_defined = False
            injective = len(set(forced.values())) == len(forced)
            assert not (well_defined and injective and len(forced) == 2)


class TestComposeRelations:
    def test_identity_right_unit(self):
        g = c4()
        r = wrap_c4_to_c2()
        q, _ = quotient(g, r)
        assert compose_relations(g, r, AutomaticRelation.identity(q)) == r

    def test_identity_left_unit(self):
        g = c4()
        r = wrap_c4_to_c2()
        out = compose_relations(g, AutomaticRelation.identity(g), _rename_to_quotient(g, r))
        assert out == r

    def test_c4_wrap_then_wrap_gives_full_merge(self):
        g = c4()
        r1 = wrap_c4_to_c2()
        q, _ = quotient(g, r1)
        r2 = AutomaticRelation.from_classes([list(q.vertices)], [list(q.edges)])
        assert is_automatic(q, r2).ok
        out = compose_relations(g, r1, r2)
        assert out.vertex_classes == (("a", "b", "c", "d"),)
        assert out.edge_classes == (("e1", "e2", "e3", "e4"),)

    def test_canonical_map_composes(self):
        g = c4()
        r1 = wrap_c4_to_c2()
        q, can1 = quotient(g, r1)
        r2 = AutomaticRelation.from_classes([list(q.vertices)], [list(q.edges)])
        _, can2 = quotient(q, r2)
        composed = compose_relations(g, r1, r2)
        _, can = quotient(g, composed)
        for v in g.vertices:
            assert can.p[v] == can2.p[can1.p[v]]


def _rename_to_quotient(g, r):
    """Express r as a relation on the identity quotient of g."""
    return r


class TestMnRefine:
    def test_dfa_myhill_nerode(self):
        # two-state a-cycle, both states final in one block: all equivalent
        g = c2()
        a = SemiAutomaton(g, {"a"}, {"e1": "a", "e2": "a"})
        r = mn_refine(a, FinalFamily.of({"a", "b"}))
        assert r.vertex_classes == (("a", "b"),)

    def test_distinguishing_finals_split(self):
        g = c2()
        a = SemiAutomaton(g, {"a"}, {"e1": "a", "e2": "a"})
        r = mn_refine(a, FinalFamily.of({"a"}))
        assert r.vertex_classes == (("a",), ("b",))

    def test_result_always_automatic(self, rng):
        for _ in range(20):
            g = random_digraph(rng)
            if not g.vertices:
                continue
            taut = SemiAutomaton(g, set(g.edges), {e: e for e in g.edges})
            fam = FinalFamily.of({g.vertices[0]})
            r = mn_refine(taut, fam)
            assert is_automatic(g, r).ok

    def test_finer_family_refines(self, rng):
        for _ in range(20):
            g = random_digraph(rng, max_vertices=4, max_edges=6)
            if len(g.vertices) < 2:
                continue
            labels = {e: "a" for e in g.edges}
            a = SemiAutomaton(g, {"a"} if g.edges else set(), labels)
            coarse = FinalFamily.of(set(g.vertices))
            fine = FinalFamily.of({g.vertices[0]}, set(g.vertices[1:]))
            r_fine = mn_refine(a, fine)
            r_coarse = mn_refine(a, coarse)
            assert relation_leq(r_fine, r_coarse)


class TestCompleteFinalSystems:
    def test_strongly_connected_gives_one(self):
        rep = complete_final_systems(c2())
        assert rep.cardinality == 1

    def test_p2_sink_vertex(self):
        rep = complete_final_systems(p2())
        assert rep.minimal_system == ("y",)

    def test_two_disjoint_cycles(self):
        g = DiGraph(
            ["a", "b", "c", "d"],
            [("e1", "a", "b"), ("e2", "b", "a"), ("f1", "c", "d"), ("f2", "d", "c")],
        )
        rep = complete_final_systems(g)
        assert rep.cardinality == 2
        assert is_complete_final_system(g, rep.minimal_system)

    def test_minimality(self, rng):
        for _ in range(20):
            g = random_digraph(rng)
            if not g.vertices:
                continue
            rep = complete_final_systems(g)
            assert is_complete_final_system(g, rep.minimal_system)
            for v in rep.minimal_system:
                rest = [w for w in rep.minimal_system if w != v]
                assert not is_complete_final_system(g, rest) or not rest


class TestRoundTrip:
    def test_identity_on_c2(self):
        g = c2()
        assert automatic_to_mn_roundtrip(g, AutomaticRelation.identity(g)).ok

    def test_wrap_on_c4(self):
        assert automatic_to_mn_roundtrip(c4(), wrap_c4_to_c2()).ok

    def test_amalgamation_example(self):
        g = amalgamation_loop().source
        r = AutomaticRelation.from_classes([["u", "w"]], [["e", "f"]])
        assert automatic_to_mn_roundtrip(g, r).ok

    def test_canonical_relation_of_emulator(self):
        r = canonical_relation(loop2_to_loop1())
        g = loop2()
        assert automatic_to_mn_roundtrip(g, r).ok


class TestLattice:
    def test_join_meet_with_identity(self, rng):
        for _ in range(10):
            g = random_digraph(rng, max_vertices=4, max_edges=5)
            ident = AutomaticRelation.identity(g)
            for r in enumerate_automatic_relations(g)[:8]:
                assert join(g, r, ident) == r
                assert meet(g, r, ident) == ident

    def test_fork_pair_meet_is_identity_beyond_pairs(self):
        # two fork components with crossing vertex-induced relations whose
        # compatible edge intersection is empty
        g = DiGraph(
            ["v0", "u0", "w0", "v1", "u1", "w1"],
            [
                ("a0", "u0", "v0"),
                ("b0", "u0", "w0"),
                ("a1", "u1", "v1"),
                ("b1", "u1", "w1"),
            ],
        )
        r1 = AutomaticRelation.from_classes(
            [["u0", "u1"], ["v0", "v1"], ["w0", "w1"]],
            [["a0", "a1"], ["b0", "b1"]],
        )
        r2 = AutomaticRelation.from_classes(
            [["u0", "u1"], ["v0", "w1"], ["w0", "v1"]],
            [["a0", "b1"], ["b0", "a1"]],
        )
        assert is_automatic(g, r1).ok and is_automatic(g, r2).ok
        m = meet(g, r1, r2)
        # u0,u1 cannot stay merged: no shared edge classes remain
        assert m == AutomaticRelation.identity(g)

    def test_maximum_on_c4_merges_everything(self):
        m = maximum(c4())
        assert m.vertex_classes == (("a", "b", "c", "d"),)
        assert m.edge_classes == (("e1", "e2", "e3", "e4"),)

    def test_join_meet_against_brute_force(self, rng):
        for _ in range(12):
            g = random_digraph(rng, max_vertices=3, max_edges=4)
            rels = enumerate_automatic_relations(g)
            for r1 in rels:
                for r2 in rels:
                    j = join(g, r1, r2)
                    m = meet(g, r1, r2)
                    uppers = [r for r in rels if relation_leq(r1, r) and relation_leq(r2, r)]
                    lowers = [r for r in rels if relation_leq(r, r1) and relation_leq(r, r2)]
                    assert j in uppers and all(relation_leq(j, u) for u in uppers)
                    assert m in lowers and all(relation_leq(l, m) for l in lowers)

    def test_join_meet_brute_force_five_vertices(self, rng):
        # larger instances, sampled pairs
        for _ in range(4):
            g = random_digraph(rng, max_vertices=5, max_edges=8)
            rels = enumerate_automatic_relations(g)
            if len(rels) < 2:
                continue
            pairs = [(rng.choice(rels), rng.choice(rels)) for _ in range(25)]
            for r1, r2 in pairs:
                j = join(g, r1, r2)
                m = meet(g, r1, r2)
                uppers = [r for r in rels if relation_leq(r1, r) and relation_leq(r2, r)]
                lowers = [r for r in rels if relation_leq(r, r1) and relation_leq(r, r2)]
                assert j in uppers and all(relation_leq(j, u) for u in uppers)
                assert m in lowers and all(relation_leq(l, m) for l in lowers)

    def test_maximum_is_top(self, rng):
        for _ in range(10):
            g = random_digraph(rng, max_vertices=4, max_edges=5)
            top = maximum(g)
            for r in enumerate_automatic_relations(g):
                assert relation_leq(r, top)
