"""JSON interchange formats and DOT export.

Digraphs: {"vertices": [...], "edges": [{"id","src","dst"}, ...]}.
Undirected graphs replace src/dst with "ends": ["v","w"] (["v"] for loops).
Semi-automata add "alphabet" and a per-edge "label"; automata add "initials"
and "finals".  Relations: {"vertex_classes": [[...]], "edge_classes": [[...]]}.
Morphism files embed their source and target so they verify standalone.
Unknown keys (such as a "description") are ignored on input.
"""

from __future__ import annotations

import json
from typing import Any

from .automaton import Automaton, LanguageSample
from .digraph import DiGraph, GraphMorphism, UndirectedGraph, UndirectedMorphism
from .emulation import CoverCertificate
from .errors import DomainError
from .genus import RotationSystem
from .relations import AutomaticRelation
from .semiauto import SemiAutomaton, SemiMorphism


def dumps(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DomainError("expected a JSON object at top level")
    return data


def _need(data: dict, key: str) -> Any:
    if not isinstance(data, dict):
        raise DomainError(f"expected an object with key {key!r}")
    if key not in data:
        raise DomainError(f"missing required key {key!r}")
    return data[key]


def _records(data: dict, key: str) -> list[dict]:
    value = _need(data, key)
    if not isinstance(value, list) or any(not isinstance(x, dict) for x in value):
        raise DomainError(f"{key!r} must be a list of objects")
    return value


def _mapping(data: dict, key: str) -> dict:
    value = _need(data, key)
    if not isinstance(value, dict):
        raise DomainError(f"{key!r} must be an object")
    return value


# -- digraphs ---------------------------------------------------------------

def digraph_to_json(g: DiGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e, "src": s, "dst": t} for e, s, t in g.edge_list()],
    }


def digraph_from_json(data: dict) -> DiGraph:
    edges = [
        (_need(e, "id"), _need(e, "src"), _need(e, "dst"))
        for e in _records(data, "edges")
    ]
    return DiGraph(_need(data, "vertices"), edges)


def undirected_to_json(g: UndirectedGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e, "ends": list(g.ends(e))} for e in g.edges],
    }


def undirected_from_json(data: dict) -> UndirectedGraph:
    edges = [(_need(e, "id"), tuple(_need(e, "ends"))) for e in _records(data, "edges")]
    return UndirectedGraph(_need(data, "vertices"), edges)


def is_undirected_payload(data) -> bool:
    if not isinstance(data, dict):
        return False
    edges = data.get("edges", [])
    return (
        isinstance(edges, list)
        and bool(edges)
        and isinstance(edges[0], dict)
        and "ends" in edges[0]
    )


# -- semi-automata and automata ---------------------------------------------

def semi_to_json(a: SemiAutomaton) -> dict:
    g = a.graph
    return {
        "vertices": list(g.vertices),
        "alphabet": sorted(a.alphabet),
        "edges": [
            {"id": e, "src": s, "dst": t, "label": a.label(e)}
            for e, s, t in g.edge_list()
        ],
    }


def semi_from_json(data: dict) -> SemiAutomaton:
    g = digraph_from_json(data)
    labels = {_need(e, "id"): _need(e, "label") for e in _records(data, "edges")}
    return SemiAutomaton(g, _need(data, "alphabet"), labels)


def automaton_to_json(a: Automaton) -> dict:
    out = semi_to_json(a.semi)
    out["initials"] = sorted(a.initials)
    out["finals"] = sorted(a.finals)
    return out


def automaton_from_json(data: dict) -> Automaton:
    return Automaton(
        semi_from_json(data), _need(data, "initials"), _need(data, "finals")
    )


def sample_to_json(s: LanguageSample) -> dict:
    return {
        "alphabet": sorted(s.alphabet),
        "max_length": s.max_length,
        "words": sorted(" ".join(w) for w in s.words),
    }


# -- morphisms ---------------------------------------------------------------

def morphism_to_json(m: GraphMorphism) -> dict:
    return {
        "source": digraph_to_json(m.source),
        "target": digraph_to_json(m.target),
        "p": dict(m.p),
        "q": dict(m.q),
    }


def morphism_from_json(data: dict) -> GraphMorphism:
    return GraphMorphism(
        digraph_from_json(_mapping(data, "source")),
        digraph_from_json(_mapping(data, "target")),
        _mapping(data, "p"),
        _mapping(data, "q"),
    )


def undirected_morphism_to_json(m: UndirectedMorphism) -> dict:
    return {
        "source": undirected_to_json(m.source),
        "target": undirected_to_json(m.target),
        "p": dict(m.p),
        "q": dict(m.q),
    }


def undirected_morphism_from_json(data: dict) -> UndirectedMorphism:
    return UndirectedMorphism(
        undirected_from_json(_mapping(data, "source")),
        undirected_from_json(_mapping(data, "target")),
        _mapping(data, "p"),
        _mapping(data, "q"),
    )


def is_undirected_morphism_payload(data: dict) -> bool:
    return is_undirected_payload(data.get("source", {}))


def semi_morphism_to_json(m: SemiMorphism) -> dict:
    return {
        "source": semi_to_json(m.source),
        "target": semi_to_json(m.target),
        "p": dict(m.base.p),
        "q": dict(m.base.q),
        "alpha": dict(m.alpha),
    }


def semi_morphism_from_json(data: dict) -> SemiMorphism:
    source = semi_from_json(_mapping(data, "source"))
    target = semi_from_json(_mapping(data, "target"))
    base = GraphMorphism(
        source.graph, target.graph, _mapping(data, "p"), _mapping(data, "q")
    )
    return SemiMorphism(source, target, base, _mapping(data, "alpha"))


# -- relations, rotations, certificates ---------------------------------------

def relation_to_json(r: AutomaticRelation) -> dict:
    return {
        "vertex_classes": [list(c) for c in r.vertex_classes],
        "edge_classes": [list(c) for c in r.edge_classes],
    }


def relation_from_json(data: dict) -> AutomaticRelation:
    for key in ("vertex_classes", "edge_classes"):
        value = _need(data, key)
        if not isinstance(value, list) or any(not isinstance(c, list) for c in value):
            raise DomainError(f"{key!r} must be a list of lists")
    return AutomaticRelation.from_classes(
        data["vertex_classes"], data["edge_classes"]
    )


def rotation_to_json(r: RotationSystem) -> dict:
    return {"rotations": {v: list(ts) for v, ts in sorted(r.rotations.items())}}


def rotation_from_json(data: dict) -> RotationSystem:
    return RotationSystem(
        {v: tuple(ts) for v, ts in _mapping(data, "rotations").items()}
    )


def certificate_to_json(c: CoverCertificate) -> dict:
    return {
        "base": digraph_to_json(c.base),
        "total": digraph_to_json(c.total),
        "p": dict(c.morphism.p),
        "q": dict(c.morphism.q),
        "rotation": rotation_to_json(c.genus_witness)["rotations"],
        "genus": c.genus,
    }


def certificate_from_json(data: dict) -> CoverCertificate:
    base = digraph_from_json(_mapping(data, "base"))
    total = digraph_from_json(_mapping(data, "total"))
    morphism = GraphMorphism(total, base, _mapping(data, "p"), _mapping(data, "q"))
    rotation = RotationSystem(
        {v: tuple(ts) for v, ts in _mapping(data, "rotation").items()}
    )
    genus = _need(data, "genus")
    if not isinstance(genus, int) or genus < 0:
        raise DomainError("certificate genus must be a non-negative integer")
    return CoverCertificate(base, total, morphism, rotation, genus)


# -- DOT export ---------------------------------------------------------------

def _dot_id(x: str) -> str:
    return '"' + x.replace("\\", "\\\\").replace('"', '\\"') + '"'


def digraph_to_dot(g: DiGraph, labels: dict[str, str] | None = None) -> str:
    lines = ["digraph G {"]
    for v in g.vertices:
        lines.append(f"  {_dot_id(v)};")
    for e, s, t in g.edge_list():
        text = f"{e}:{labels[e]}" if labels else e
        lines.append(f"  {_dot_id(s)} -> {_dot_id(t)} [label={_dot_id(text)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def undirected_to_dot(g: UndirectedGraph) -> str:
    lines = ["graph G {"]
    for v in g.vertices:
        lines.append(f"  {_dot_id(v)};")
    for e in g.edges:
        ends = g.ends(e)
        a = ends[0]
        b = ends[0] if len(ends) == 1 else ends[1]
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [label={_dot_id(e)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def semi_to_dot(a: SemiAutomaton) -> str:
    return digraph_to_dot(a.graph, {e: a.label(e) for e in a.graph.edges})


def automaton_to_dot(a: Automaton) -> str:
    lines = ["digraph A {"]
    for v in a.graph.vertices:
        attrs = []
        if v in a.finals:
            attrs.append("shape=doublecircle")
        if v in a.initials:
            attrs.append("penwidth=2")
        suffix = f" [{','.join(attrs)}]" if attrs else ""
        lines.append(f"  {_dot_id(v)}{suffix};")
    for e, s, t in a.graph.edge_list():
        text = f"{e}:{a.semi.label(e)}"
        lines.append(f"  {_dot_id(s)} -> {_dot_id(t)} [label={_dot_id(text)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
