"""Chromatic simplicial models: construction, validation and topology.

A model stores only its facets; every nonempty subset of a facet is a face.
Faces are frozensets of vertex ids.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    ChromaViolation,
    DanglingVertexRef,
    EmptyComplex,
    EmptyResult,
    ForeignProposition,
    ModelError,
    UnknownFace,
)

Face = frozenset


class Prop(NamedTuple):
    """A propositional variable p_a: base name plus owning agent."""

    name: str
    agent: str

    def __str__(self):
        return f"{self.name}@{self.agent}"


@dataclass(frozen=True)
class Vertex:
    id: str
    agent: str
    props: frozenset = frozenset()  # base names of the agent's true propositions


def face_key(face) -> tuple:
    """Canonical sort key: smaller faces first, then lexicographic ids."""
    return (len(face), tuple(sorted(face)))


def sorted_ids(face) -> list[str]:
    return sorted(face)


def format_face(face) -> str:
    return "{" + ",".join(sorted(face)) + "}"


def maximal(sets: Iterable[frozenset]) -> tuple[frozenset, ...]:
    """Drop duplicates and every set contained in another one."""
    uniq = sorted(set(sets), key=lambda s: (-len(s), tuple(sorted(s))))
    kept: list[frozenset] = []
    for s in uniq:
        if not any(s <= t for t in kept):
            kept.append(s)
    return tuple(sorted(kept, key=face_key))


@dataclass(frozen=True, eq=False)
class SimplicialModel:
    agents: tuple[str, ...]
    vertices: Mapping[str, Vertex]
    facets: tuple[frozenset, ...]
    named: Mapping[str, frozenset] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, SimplicialModel):
            return NotImplemented
        return (
            self.agents == other.agents
            and dict(self.vertices) == dict(other.vertices)
            and self.facets == other.facets
        )

    __hash__ = object.__hash__

    @property
    def n(self) -> int:
        return len(self.agents) - 1

    @cached_property
    def faces(self) -> tuple[frozenset, ...]:
        out = set()
        for facet in self.facets:
            items = sorted(facet)
            for r in range(1, len(items) + 1):
                out.update(frozenset(c) for c in itertools.combinations(items, r))
        return tuple(sorted(out, key=face_key))

    @cached_property
    def face_set(self) -> frozenset:
        return frozenset(self.faces)

    @cached_property
    def _coface_cache(self) -> dict:
        return {}

    def cofaces(self, face) -> tuple[frozenset, ...]:
        """All faces Y with face <= Y."""
        cache = self._coface_cache
        hit = cache.get(face)
        if hit is None:
            out = set()
            for facet in self.facets:
                if face <= facet:
                    rest = sorted(facet - face)
                    for r in range(len(rest) + 1):
                        for extra in itertools.combinations(rest, r):
                            out.add(face | frozenset(extra))
            hit = tuple(sorted(out, key=face_key))
            cache[face] = hit
        return hit

    def colors(self, face) -> frozenset:
        return frozenset(self.vertices[v].agent for v in face)

    def vertex_of(self, face, agent):
        for v in face:
            if self.vertices[v].agent == agent:
                return v
        return None

    def require_face(self, face) -> frozenset:
        face = frozenset(face)
        if face not in self.face_set:
            raise UnknownFace(f"{format_face(face)} is not a face of the model")
        return face

    def resolve_face(self, spec) -> frozenset:
        """Accept a named face or an iterable / comma string of vertex ids."""
        if isinstance(spec, str):
            if spec in self.named:
                return self.named[spec]
            spec = [s.strip() for s in spec.split(",") if s.strip()]
        return self.require_face(spec)


def _coerce_vertex(raw) -> Vertex:
    if isinstance(raw, Vertex):
        return raw
    if isinstance(raw, Mapping):
        return Vertex(raw["id"], raw["agent"], raw.get("props", ()))
    vid, agent, *rest = raw
    return Vertex(vid, agent, rest[0] if rest else ())


def build_model(agents, vertices, facets, named=None) -> SimplicialModel:
    """Validate and normalise a chromatic simplicial model.

    ``vertices`` may hold Vertex objects, dicts with id/agent/props keys, or
    ``(id, agent, props)`` tuples.  Props are base names or Prop pairs; a Prop
    owned by another agent raises ForeignProposition.
    """
    roster = tuple(sorted(set(agents)))
    if not roster or len(roster) != len(list(agents)):
        raise ModelError("agent roster must be nonempty and duplicate free")
    if any(not a for a in roster):
        raise ModelError("agent names must be nonempty")

    table: dict[str, Vertex] = {}
    for raw in vertices:
        v = _coerce_vertex(raw)
        if v.id in table:
            raise ModelError(f"duplicate vertex id {v.id!r}")
        if v.agent not in roster:
            raise ModelError(f"vertex {v.id!r} has unknown agent {v.agent!r}")
        names = set()
        for p in v.props:
            if isinstance(p, tuple):
                base, owner = p
                if owner != v.agent:
                    raise ForeignProposition(
                        f"vertex {v.id!r} of agent {v.agent!r} labelled with {base}@{owner}"
                    )
                names.add(base)
            else:
                names.add(p)
        table[v.id] = Vertex(v.id, v.agent, frozenset(names))

    raw_facets = [frozenset(f) for f in facets]
    if not raw_facets:
        raise EmptyComplex("a model needs at least one facet")
    for f in raw_facets:
        if not f:
            raise EmptyComplex("facets must be nonempty")
        missing = sorted(f - table.keys())
        if missing:
            raise DanglingVertexRef(f"facet {format_face(f)} names unknown vertices {missing}")
        seen = {}
        for vid in sorted(f):
            a = table[vid].agent
            if a in seen:
                raise ChromaViolation(
                    f"facet {format_face(f)} holds two {a!r} vertices: {seen[a]}, {vid}"
                )
            seen[a] = vid

    normal = maximal(raw_facets)
    used = frozenset().union(*normal)
    unused = sorted(table.keys() - used)
    if unused:
        raise DanglingVertexRef(f"vertices {unused} occur in no facet")

    model = SimplicialModel(roster, dict(sorted(table.items())), normal, {})
    names = {}
    for name, face in (named or {}).items():
        names[name] = model.require_face(face)
    object.__setattr__(model, "named", names)
    return model


def faces(model: SimplicialModel) -> tuple[frozenset, ...]:
    return model.faces


def dimension(model: SimplicialModel) -> int:
    return max(len(f) for f in model.facets) - 1


def is_pure(model: SimplicialModel) -> bool:
    return all(len(f) - 1 == model.n for f in model.facets)


def color_set(model: SimplicialModel, face) -> frozenset:
    return model.colors(model.resolve_face(face))


def label_set(model: SimplicialModel, face) -> frozenset:
    face = model.resolve_face(face)
    return frozenset(
        Prop(p, model.vertices[v].agent) for v in face for p in model.vertices[v].props
    )


def _submodel(model: SimplicialModel, facets) -> SimplicialModel:
    facets = maximal(facets)
    used = frozenset().union(*facets)
    verts = {vid: model.vertices[vid] for vid in sorted(used)}
    named = {k: f for k, f in model.named.items() if any(f <= g for g in facets)}
    return SimplicialModel(model.agents, verts, facets, named)


def skeleton(model: SimplicialModel, k: int) -> SimplicialModel:
    if k < 0:
        raise ValueError("skeleton dimension must be nonnegative")
    if k >= dimension(model):
        return model
    out = []
    for f in model.facets:
        if len(f) <= k + 1:
            out.append(f)
        else:
            out.extend(frozenset(c) for c in itertools.combinations(sorted(f), k + 1))
    return _submodel(model, out)


def star(model: SimplicialModel, face) -> SimplicialModel:
    face = model.resolve_face(face)
    return _submodel(model, [f for f in model.facets if face <= f])


def link(model: SimplicialModel, face) -> SimplicialModel:
    face = model.resolve_face(face)
    rest = [f - face for f in model.facets if face <= f]
    rest = [f for f in rest if f]
    if not rest:
        raise EmptyResult(f"the link of {format_face(face)} is empty")
    return _submodel(model, rest)


def _relabel_signature(model: SimplicialModel, mapping: Mapping[str, str]) -> tuple:
    verts = tuple(
        sorted((mapping[v.id], v.agent, tuple(sorted(v.props))) for v in model.vertices.values())
    )
    facets = tuple(sorted(tuple(sorted(mapping[v] for v in f)) for f in model.facets))
    return verts, facets


def canonical_key(model: SimplicialModel) -> tuple:
    """Isomorphism invariant key (colour and label preserving relabelings).

    Brute force over per-agent permutations; intended for small models.
    """
    by_agent = {a: sorted(v.id for v in model.vertices.values() if v.agent == a) for a in model.agents}
    slots = {a: [f"{a}#{i}" for i in range(len(ids))] for a, ids in by_agent.items()}
    best = None
    for perms in itertools.product(*(itertools.permutations(slots[a]) for a in model.agents)):
        mapping = {}
        for a, perm in zip(model.agents, perms):
            mapping.update(zip(by_agent[a], perm))
        sig = _relabel_signature(model, mapping)
        if best is None or sig < best:
            best = sig
    return (model.agents,) + best


def is_isomorphic(m1: SimplicialModel, m2: SimplicialModel) -> bool:
    if m1.agents != m2.agents or len(m1.vertices) != len(m2.vertices):
        return False
    if sorted(map(len, m1.facets)) != sorted(map(len, m2.facets)):
        return False
    return canonical_key(m1) == canonical_key(m2)
