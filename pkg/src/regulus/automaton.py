"""Automata over semi-automata: language semantics at desk scale,
trash-completion, Myhill-Nerode minimization, exact language equality, and
the reconstruction of a low-genus automaton from a directed cover of the
minimal automaton's excised simple graph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .digraph import (
    DiGraph,
    GraphMorphism,
    descendants,
    excise,
    pullback,
    simplify,
    subgraph,
)
from .emulation import (
    extend_over_excision,
    excise_restrict,
    extract_cover,
    is_directed_cover,
    r_image_morphism,
)
from .errors import DomainError, PreconditionError
from .relations import FinalFamily, mn_refine, quotient
from .semiauto import SemiAutomaton, SemiMorphism, is_complete, is_deterministic

Word = tuple[str, ...]


def parse_word(text: str) -> Word:
    """Words are written as space-separated labels; the empty string is the
    empty word."""
    return tuple(text.split())


class Automaton:
    """A semi-automaton with initial and final state sets."""

    __slots__ = ("_semi", "_initials", "_finals")

    def __init__(self, semi: SemiAutomaton, initials: Iterable[str], finals: Iterable[str]):
        ini = frozenset(initials)
        fin = frozenset(finals)
        states = set(semi.states())
        if not ini <= states or not fin <= states:
            raise DomainError("initial/final states must be states of the semi-automaton")
        self._semi = semi
        self._initials = ini
        self._finals = fin

    @property
    def semi(self) -> SemiAutomaton:
        return self._semi

    @property
    def graph(self) -> DiGraph:
        return self._semi.graph

    @property
    def initials(self) -> frozenset[str]:
        return self._initials

    @property
    def finals(self) -> frozenset[str]:
        return self._finals

    @property
    def alphabet(self) -> frozenset[str]:
        return self._semi.alphabet

    def is_accessible(self) -> bool:
        reached = set()
        for i in self._initials:
            reached |= descendants(self.graph, i)
        return reached == set(self.graph.vertices)

    def single_initial(self) -> str:
        if len(self._initials) != 1:
            raise PreconditionError(
                f"operation requires a single initial state, found {len(self._initials)}"
            )
        return next(iter(self._initials))

    def __eq__(self, other):
        return (
            isinstance(other, Automaton)
            and self._semi == other._semi
            and self._initials == other._initials
            and self._finals == other._finals
        )

    def __repr__(self):
        return (
            f"Automaton({len(self.graph.vertices)} states, "
            f"{len(self.graph.edges)} transitions)"
        )


@dataclass(frozen=True)
class LanguageSample:
    """The accepted words up to a length bound."""

    alphabet: frozenset[str]
    words: frozenset[Word]
    max_length: int


def accepts(a: Automaton, word: Word | str) -> bool:
    """Nondeterministic acceptance by subset simulation."""
    if isinstance(word, str):
        word = parse_word(word)
    for letter in word:
        if letter not in a.alphabet:
            raise DomainError(f"letter {letter!r} is not in the alphabet")
    current = set(a.initials)
    for letter in word:
        nxt = set()
        for q in current:
            for e in a.graph.out_edges(q):
                if a.semi.label(e) == letter:
                    nxt.add(a.graph.dst(e))
        current = nxt
        if not current:
            return False
    return bool(current & a.finals)


def sample_language(a: Automaton, max_length: int) -> LanguageSample:
    """Exactly the accepted words of length at most max_length."""
    words: set[Word] = set()
    letters = sorted(a.alphabet)
    frontier: list[tuple[Word, frozenset[str]]] = [((), frozenset(a.initials))]
    if a.initials & a.finals:
        words.add(())
    for _ in range(max_length):
        nxt: list[tuple[Word, frozenset[str]]] = []
        for word, states in frontier:
            for letter in letters:
                targets = frozenset(
                    a.graph.dst(e)
                    for q in states
                    for e in a.graph.out_edges(q)
                    if a.semi.label(e) == letter
                )
                if not targets:
                    continue
                w2 = word + (letter,)
                if targets & a.finals:
                    words.add(w2)
                nxt.append((w2, targets))
        frontier = nxt
    return LanguageSample(a.alphabet, frozenset(words), max_length)


def accessible_part(a: Automaton) -> Automaton:
    """Restrict to the states reachable from the initial states."""
    reached: set[str] = set()
    for i in a.initials:
        reached |= descendants(a.graph, i)
    keep_edges = [e for e in a.graph.edges if a.graph.src(e) in reached]
    g = subgraph(a.graph, reached, keep_edges)
    labels = {e: a.semi.label(e) for e in g.edges}
    semi = SemiAutomaton(g, set(labels.values()) or set(), labels)
    return Automaton(semi, a.initials & reached, a.finals & reached)


def complete_with_trash(a: Automaton) -> Automaton:
    """Route every missing (state, letter) transition to a fresh trash state
    carrying one loop per letter.  Complete inputs are returned unchanged."""
    if not is_deterministic(a.semi):
        raise PreconditionError("trash completion requires a deterministic automaton")
    if is_complete(a.semi):
        return a
    trash = "⊥"
    existing = set(a.graph.vertices)
    while trash in existing:
        trash += "'"
    edges = a.graph.edge_list()
    labels = dict(a.semi.labelling)
    eids = set(a.graph.edges)

    def fresh_edge(base: str) -> str:
        nid = base
        while nid in eids:
            nid += "'"
        eids.add(nid)
        return nid

    for q in a.graph.vertices:
        have = {a.semi.label(e) for e in a.graph.out_edges(q)}
        for letter in sorted(a.alphabet - have):
            nid = fresh_edge(f"{q}>{trash}:{letter}")
            edges.append((nid, q, trash))
            labels[nid] = letter
    for letter in sorted(a.alphabet):
        nid = fresh_edge(f"{trash}>{trash}:{letter}")
        edges.append((nid, trash, trash))
        labels[nid] = letter
    g = DiGraph(list(a.graph.vertices) + [trash], edges)
    semi = SemiAutomaton(g, a.alphabet, labels)
    return Automaton(semi, a.initials, a.finals)


def _require_minimizable(a: Automaton) -> None:
    if not is_deterministic(a.semi):
        raise PreconditionError("minimize requires a deterministic automaton")
    if not is_complete(a.semi):
        raise PreconditionError("minimize requires a complete automaton")
    if not a.is_accessible():
        raise PreconditionError("minimize requires an accessible automaton")
    a.single_initial()


def minimize(a: Automaton) -> tuple[Automaton, SemiMorphism]:
    """Minimal complete deterministic automaton plus the canonical strict
    projection, whose underlying graph morphism is a directed cover.

    States are refined from the finals/non-finals split; the quotient is the
    automatic relation built from the fixpoint.
    """
    _require_minimizable(a)
    g = a.graph
    family = FinalFamily.of(a.finals) if a.finals else FinalFamily(())
    relation = mn_refine(a.semi, family)
    q_graph, can = quotient(g, relation)
    labels = {ce: a.semi.label(ce) for ce in q_graph.edges}
    semi_min = SemiAutomaton(q_graph, a.alphabet, labels)
    a_min = Automaton(
        semi_min,
        {can.p[next(iter(a.initials))]},
        {can.p[f] for f in a.finals},
    )
    pi = SemiMorphism(a.semi, semi_min, can, {x: x for x in a.alphabet})
    return a_min, pi


def language_graph(a: Automaton) -> DiGraph:
    """Underlying digraph of the minimized automaton."""
    return minimize(a)[0].graph


def minimal_cover_base(a: Automaton) -> DiGraph:
    """The excised simplification of the minimal automaton's graph: the base
    graph whose directed covers bound the language genus."""
    return excise(simplify(language_graph(a))[0])


def languages_equal(a: Automaton, b: Automaton) -> bool:
    """Exact language equality via the product construction on completed,
    accessible versions over the union alphabet."""
    a.single_initial()
    b.single_initial()
    if not is_deterministic(a.semi) or not is_deterministic(b.semi):
        raise PreconditionError("exact equality requires deterministic automata")

    def table(m: Automaton) -> dict[str, dict[str, str]]:
        out: dict[str, dict[str, str]] = {q: {} for q in m.graph.vertices}
        for e, s, t in m.graph.edge_list():
            out[s][m.semi.label(e)] = t
        return out

    ta, tb = table(a), table(b)
    letters = sorted(a.alphabet | b.alphabet)
    dead = object()
    start = (next(iter(a.initials)), next(iter(b.initials)))
    seen = {start}
    frontier = [start]
    while frontier:
        qa, qb = frontier.pop()
        fa = qa in a.finals if qa is not dead else False
        fb = qb in b.finals if qb is not dead else False
        if fa != fb:
            return False
        for letter in letters:
            na = ta.get(qa, {}).get(letter, dead) if qa is not dead else dead
            nb = tb.get(qb, {}).get(letter, dead) if qb is not dead else dead
            nxt = (na, nb)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return True


def automaton_from_cover(a: Automaton, cover: GraphMorphism) -> tuple[Automaton, SemiMorphism]:
    """Rebuild a deterministic automaton from a directed cover of the excised
    simplified minimal graph, recognizing the same language.

    The loops removed by excision are re-created fibrewise, the parallel
    transitions merged by simplification are pulled back along the cover, and
    the result is restricted to the part accessible from one pinned lift of
    the initial state.  Returns the witness automaton and the strict
    label-preserving morphism onto the minimal automaton.
    """
    a_min, _ = minimize(a)
    g_min = a_min.graph
    simple, rho = simplify(g_min)
    base = excise(simple)
    if cover.target != base:
        raise DomainError(
            "cover target is not the excised simplification of the minimal graph"
        )
    rep = is_directed_cover(cover)
    if not rep.ok:
        raise DomainError(f"cover rejected: {rep.reason} at {rep.witness}")

    over_simple = extend_over_excision(cover, simple)
    _, pi1, pi2 = pullback(rho, over_simple)
    lifted = pi1.source

    labels = {}
    initial_min = a_min.single_initial()
    for ce in lifted.edges:
        labels[ce] = a_min.semi.label(pi1.q[ce])
    fiber_initials = sorted(
        v for v in lifted.vertices if pi1.p[v] == initial_min
    )
    pinned = fiber_initials[0]
    finals = {v for v in lifted.vertices if pi1.p[v] in a_min.finals}
    semi_all = SemiAutomaton(lifted, a_min.alphabet, labels)
    witness = accessible_part(Automaton(semi_all, {pinned}, finals))
    proj = GraphMorphism(
        witness.graph,
        g_min,
        {v: pi1.p[v] for v in witness.graph.vertices},
        {e: pi1.q[e] for e in witness.graph.edges},
    )
    check = is_directed_cover(proj)
    if not check.ok:
        raise DomainError(f"reconstruction lost the cover property: {check.reason}")
    strict = SemiMorphism(
        witness.semi, a_min.semi, proj, {x: x for x in a_min.alphabet}
    )
    if not is_deterministic(witness.semi):
        raise DomainError("reconstruction produced a nondeterministic automaton")
    if not languages_equal(witness, a_min):
        raise DomainError("reconstruction changed the language")
    return witness, strict


def cover_of_minimization(a: Automaton) -> tuple[GraphMorphism, Automaton]:
    """The directed cover of the excised simplified minimal graph induced by
    the minimization projection: simplify both sides, drop collapsing and
    loop edges, then extract a cover."""
    a_min, pi = minimize(a)
    r_morph = r_image_morphism(pi.base)
    exc_morph = excise_restrict(r_morph)
    return extract_cover(exc_morph), a_min
