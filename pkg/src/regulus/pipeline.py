"""End-to-end decision pipeline for language genus bounds.

The genus of a regular language is bounded by n exactly when the excised
simplification of its minimal automaton's graph has a directed cover of genus
at most n; the search below is therefore sound, and exhaustion within the
fibre bound refutes only the bounded instance, not the genus bound itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automaton import (
    Automaton,
    accessible_part,
    automaton_from_cover,
    complete_with_trash,
    languages_equal,
    minimal_cover_base,
    minimize,
)
from .digraph import DiGraph, GraphMorphism, pullback
from .emulation import (
    CoverCertificate,
    CoverSearchSpec,
    SearchOutcome,
    is_directed_cover,
    search_covers,
)
from .errors import DomainError, PreconditionError
from .genus import genus_exact
from .semiauto import is_deterministic


@dataclass(frozen=True)
class LanguageGenusAnswer:
    status: str  # "yes" | "no_within_bounds" | "budget_exceeded"
    witness: Automaton | None = None
    witness_genus: int | None = None
    certificate: CoverCertificate | None = None


def _prepare(a: Automaton) -> Automaton:
    if not is_deterministic(a.semi):
        raise PreconditionError("language genus requires a deterministic automaton")
    a.single_initial()
    return complete_with_trash(accessible_part(a))


def language_genus_leq(
    a: Automaton,
    n: int,
    max_fiber: int = 2,
    time_budget: float = 300.0,
    certificate: CoverCertificate | None = None,
) -> LanguageGenusAnswer:
    """Decide whether the language of a has genus at most n, searching for a
    directed cover of bounded fibre size (or verifying a supplied one).

    On success the returned witness automaton recognizes the same language
    and its graph has genus at most n, both re-verified.  Exhaustion of the
    bounded search is reported as no_within_bounds: it is not a proof that
    the genus exceeds n.
    """
    prepared = _prepare(a)
    base = minimal_cover_base(prepared)

    if certificate is not None:
        certificate.verify()
        if certificate.base != base:
            raise DomainError(
                "certificate base does not match the excised simplified minimal graph"
            )
        if certificate.genus > n:
            return LanguageGenusAnswer("no_within_bounds")
        outcome = SearchOutcome("found", certificate)
    else:
        spec = CoverSearchSpec(
            base, max_fiber=max_fiber, genus_bound=n, time_budget=time_budget
        )
        outcome = search_covers(spec)

    if outcome.status != "found":
        status = "no_within_bounds" if outcome.status == "exhausted" else outcome.status
        return LanguageGenusAnswer(status)
    cert = outcome.certificate
    witness, _ = automaton_from_cover(prepared, cert.morphism)
    wg = genus_exact(witness.graph).genus
    if wg > n:
        raise DomainError("witness genus exceeded the bound after reconstruction")
    if not languages_equal(witness, prepared):
        raise DomainError("witness language mismatch")
    return LanguageGenusAnswer("yes", witness, wg, cert)


def find_monomorphism(small: DiGraph, big: DiGraph) -> GraphMorphism | None:
    """Injective morphism search by backtracking; desk scale only."""
    small_vs = sorted(small.vertices, key=lambda v: -len(small.out_edges(v)))
    big_vs = list(big.vertices)
    big_pairs: dict[tuple[str, str], list[str]] = {}
    for e, s, t in big.edge_list():
        big_pairs.setdefault((s, t), []).append(e)

    assignment: dict[str, str] = {}
    used: set[str] = set()

    def _needed(g: DiGraph, s: str, t: str) -> int:
        return sum(1 for _, a, b in g.edge_list() if (a, b) == (s, t))

    def try_assign(i: int) -> bool:
        if i == len(small_vs):
            return True
        v = small_vs[i]
        for w in big_vs:
            if w in used:
                continue
            if len(big.out_edges(w)) < len(small.out_edges(v)):
                continue
            assignment[v] = w
            used.add(w)
            ok = True
            for e, s, t in small.edge_list():
                if s in assignment and t in assignment:
                    if len(big_pairs.get((assignment[s], assignment[t]), [])) < _needed(
                        small, s, t
                    ):
                        ok = False
                        break
            if ok and try_assign(i + 1):
                return True
            del assignment[v]
            used.discard(w)
        return False

    if not try_assign(0):
        return None
    # map edges injectively within each boundary class
    q: dict[str, str] = {}
    taken: set[str] = set()
    for e, s, t in small.edge_list():
        pool = [
            f
            for f in big_pairs[(assignment[s], assignment[t])]
            if f not in taken
        ]
        q[e] = pool[0]
        taken.add(pool[0])
    return GraphMorphism(small, big, assignment, q)


@dataclass(frozen=True)
class MonotonicityReport:
    is_subgraph: bool
    transported: CoverCertificate | None
    transported_genus_ok: bool | None


def genus_monotonicity_checks(
    l_big: Automaton, l_small: Automaton, cert: CoverCertificate
) -> MonotonicityReport:
    """Given a genus-n cover certificate for the larger language's base graph,
    transport it by pullback to a cover of the smaller language's base when
    the latter embeds as a subgraph, and verify the genus did not grow."""
    base_big = minimal_cover_base(_prepare(l_big))
    base_small = minimal_cover_base(_prepare(l_small))
    cert.verify()
    if cert.base != base_big:
        raise DomainError("certificate does not certify the larger language's base")
    mono = find_monomorphism(base_small, base_big)
    if mono is None:
        return MonotonicityReport(False, None, None)
    _, pi1, _ = pullback(mono, cert.morphism)
    rep = is_directed_cover(pi1)
    if not rep.ok:
        raise DomainError(f"transported morphism is not a cover: {rep.reason}")
    genus = genus_exact(pi1.source).genus
    witness = genus_exact(pi1.source).witness
    transported = CoverCertificate(base_small, pi1.source, pi1, witness, genus)
    transported.verify()
    return MonotonicityReport(True, transported, genus <= cert.genus)
