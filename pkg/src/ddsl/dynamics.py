"""Commitment update models, product update, composition and the action box.

Product vertices are named ``"<model vertex>|<event>"``; composed events are
named ``"<first event>;<second event>"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .checker import CheckContext, evaluate
from .complex import SimplicialModel, Vertex, build_model, face_key, format_face, maximal
from .errors import ModelError, RosterMismatch, UnknownFace, UnresolvedActionRef
from .formula import (
    BOTTOM_ATOM,
    ActionBox,
    ActionRef,
    And,
    Atom,
    Commit,
    Formula,
    Not,
    conj,
    diamond,
    is_top,
    parse,
    subformulas,
    top,
)


@dataclass(frozen=True)
class Event:
    id: str
    agent: str
    com: Formula


@dataclass(frozen=True, eq=False)
class UpdateModel:
    name: str
    agents: tuple
    events: Mapping[str, Event]
    facets: tuple
    named: Mapping[str, frozenset] = field(default_factory=dict)
    parts: tuple = ()

    @cached_property
    def complex(self) -> SimplicialModel:
        return SimplicialModel(
            self.agents,
            {e.id: Vertex(e.id, e.agent, frozenset()) for e in self.events.values()},
            self.facets,
            {},
        )

    @property
    def faces(self):
        return self.complex.faces

    def colors(self, simplex) -> frozenset:
        return frozenset(self.events[e].agent for e in simplex)

    def simplex_names(self) -> dict:
        """Explicit names plus every event id as the name of its singleton."""
        out = {e: frozenset([e]) for e in self.events}
        out.update(self.named)
        return out

    def resolve_simplex(self, name: str) -> frozenset:
        hit = self.named.get(name)
        if hit is None and name in self.events:
            hit = frozenset([name])
        if hit is None:
            raise UnresolvedActionRef(f"update model {self.name!r} has no simplex {name!r}")
        return hit

    def com_of(self, simplex) -> list[Formula]:
        return [self.events[e].com for e in sorted(simplex)]


class EmptyProduct:
    """Returned by product_update when no matched pair survives."""

    def __init__(self, model, update):
        self.model = model
        self.update = update

    def __bool__(self):
        return False

    def __repr__(self):
        return f"EmptyProduct({self.update.name})"


def build_update_model(name, agents, events, facets, named=None, parts=()) -> UpdateModel:
    """Validate an update model.

    ``events`` holds Event objects, dicts with id/agent/com keys, or
    ``(id, agent, com)`` tuples; a string com is parsed against the roster.
    Commitments must be static unless they refer to one of ``parts``.
    """
    if not name or "|" in name or "." in name:
        raise ModelError(f"invalid update model name {name!r}")
    roster = tuple(sorted(set(agents)))
    table = {}
    for raw in events:
        if isinstance(raw, Event):
            ev = raw
        elif isinstance(raw, Mapping):
            ev = Event(raw["id"], raw["agent"], raw.get("com", "true"))
        else:
            ev = Event(*raw)
        com = ev.com
        if isinstance(com, str):
            com = parse(com, agents=roster)
        if "|" in ev.id:
            raise ModelError(f"event id {ev.id!r} may not contain '|'")
        table[ev.id] = Event(ev.id, ev.agent, com)
    # structural validation is shared with ordinary models
    shape = build_model(roster, [(e.id, e.agent, ()) for e in table.values()], facets)
    part_names = set()
    for p in parts:
        part_names |= _all_model_names(p)
    for ev in table.values():
        for g in subformulas(ev.com):
            if isinstance(g, ActionBox) and g.action.model not in part_names:
                raise ModelError(f"commitment of {ev.id!r} must be static, found [{g.action}]")
            if isinstance(g, Atom) and g.name != BOTTOM_ATOM and g.agent not in roster:
                raise RosterMismatch(f"commitment of {ev.id!r} mentions agent {g.agent!r}")
            if isinstance(g, Commit) and not set(g.group) <= set(roster):
                raise RosterMismatch(f"commitment of {ev.id!r} mentions group {g.group}")
    update = UpdateModel(name, roster, dict(sorted(table.items())), shape.facets, {}, tuple(parts))
    names = {}
    for key, simplex in (named or {}).items():
        simplex = frozenset(simplex)
        if simplex not in update.complex.face_set:
            raise UnknownFace(f"named simplex {key!r} = {format_face(simplex)} is not a face")
        names[key] = simplex
    object.__setattr__(update, "named", names)
    return update


def _all_model_names(update) -> set:
    out = {update.name}
    for p in update.parts:
        out |= _all_model_names(p)
    return out


def _context(ctx, model, update) -> CheckContext:
    if ctx is None:
        ctx = CheckContext(model, {update.name: update})
    elif update.name not in ctx.update_models:
        ctx.register(update)
    return ctx


def _pair_face(model, face, update, simplex) -> frozenset:
    by_agent = {update.events[e].agent: e for e in simplex}
    return frozenset(f"{v}|{by_agent[model.vertices[v].agent]}" for v in face)


def product_update(ctx, model: SimplicialModel, update: UpdateModel):
    """The updated model C ⊗ U, or EmptyProduct.

    A matched pair (X, X') has χ(X) = χ(X') and every commitment of X' true
    at X in the original model.  The facets are the maximal matched pairs.
    """
    if tuple(model.agents) != tuple(update.agents):
        raise RosterMismatch(f"rosters differ: {model.agents} vs {update.agents}")
    ctx = _context(ctx, model, update)
    key = (id(model), update.name, id(update))
    cache = ctx._shared.products
    if key in cache:
        return cache[key][0]
    result = _compute_product(ctx, model, update)
    cache[key] = (result, model, update)
    return result


def _compute_product(ctx, model, update):
    by_colors: dict = {}
    for s in update.faces:
        by_colors.setdefault(update.colors(s), []).append(s)
    pairs = []
    for x in model.faces:
        options = by_colors.get(model.colors(x))
        if not options:
            continue
        good = {
            e
            for e in frozenset().union(*options)
            if evaluate(ctx, model, x, update.events[e].com)
        }
        for s in options:
            if s <= good:
                pairs.append(_pair_face(model, x, update, s))
    if not pairs:
        return EmptyProduct(model, update)
    facets = maximal(pairs)
    used = sorted(frozenset().union(*facets))
    verts = {}
    for pid in used:
        v, _, e = pid.rpartition("|")
        src = model.vertices[v]
        verts[pid] = Vertex(pid, src.agent, src.props)
    product = SimplicialModel(model.agents, verts, facets, {})
    names = {}
    for n1, x in model.named.items():
        for n2, s in update.named.items():
            if model.colors(x) == update.colors(s):
                f = _pair_face(model, x, update, s)
                if f in product.face_set:
                    names[f"{n1}|{n2}"] = f
    object.__setattr__(product, "named", names)
    return product


def eval_action_box_in(ctx, model, face, ref: ActionRef, body: Formula) -> bool:
    update = ctx.update_models.get(ref.model)
    if update is None:
        raise UnresolvedActionRef(f"no update model named {ref.model!r}")
    simplex = update.resolve_simplex(ref.simplex)
    if model.colors(face) != update.colors(simplex):
        return True
    for e in sorted(simplex):
        if not evaluate(ctx, model, face, update.events[e].com):
            return True
    product = product_update(ctx, model, update)
    return evaluate(ctx, product, _pair_face(model, face, update, simplex), body)


def eval_action_box(ctx: CheckContext, face, action_ref: ActionRef, body: Formula) -> bool:
    """[α]φ at a face of ctx.model: vacuous unless the pair (X, α) exists."""
    face = ctx.model.resolve_face(face)
    return eval_action_box_in(ctx, ctx.model, face, action_ref, body)


def compose(update1: UpdateModel, update2: UpdateModel, name: str | None = None,
            simplify: bool = True) -> UpdateModel:
    """Sequential composition U;V.

    Events are same-coloured pairs.  The commitment of (e1, e2) is
    ¬D_a¬⟨U.e1⟩com'(e2): the second commitment must hold after e1, read at
    the agent's own vertex.  When both commitments are propositional over the
    agent's own atoms that diamond is equivalent to com(e1) ∧ com'(e2), and
    ``simplify`` uses the conjunction instead.
    """
    if tuple(update1.agents) != tuple(update2.agents):
        raise RosterMismatch(f"rosters differ: {update1.agents} vs {update2.agents}")
    events = []
    for e1 in update1.events.values():
        for e2 in update2.events.values():
            if e1.agent != e2.agent:
                continue
            if simplify and is_propositional_local(e1.com, e1.agent) and is_propositional_local(
                e2.com, e2.agent
            ):
                com = And(e1.com, e2.com)
            else:
                inner = diamond(ActionRef(update1.name, e1.id), e2.com)
                com = Not(Commit((e1.agent,), Not(inner)))
            events.append(Event(f"{e1.id};{e2.id}", e1.agent, com))
    facets = []
    for f1 in update1.facets:
        for f2 in update2.facets:
            shared = update1.colors(f1) & update2.colors(f2)
            if shared:
                facets.append(_compose_face(update1, f1, update2, f2, shared))
    named = {}
    for n1, s1 in update1.simplex_names().items():
        for n2, s2 in update2.simplex_names().items():
            if update1.colors(s1) == update2.colors(s2):
                named[f"{n1};{n2}"] = _compose_face(update1, s1, update2, s2, update1.colors(s1))
    return build_update_model(
        name or f"{update1.name};{update2.name}",
        update1.agents,
        events,
        facets,
        named,
        parts=(update1, update2),
    )


def _compose_face(u1, s1, u2, s2, colors) -> frozenset:
    a1 = {u1.events[e].agent: e for e in s1}
    a2 = {u2.events[e].agent: e for e in s2}
    return frozenset(f"{a1[a]};{a2[a]}" for a in colors)


def identity_update(model: SimplicialModel, name: str = "I") -> UpdateModel:
    """All-⊤ update with one event per agent and the model's facet colour sets."""
    owner = model.agents[0]
    facets = maximal(frozenset(f"id_{a}" for a in model.colors(f)) for f in model.facets)
    present = set().union(*(model.colors(f) for f in model.facets))
    events = [(f"id_{a}", a, top(owner)) for a in model.agents if a in present]
    return build_update_model(name, model.agents, events, facets)


# -- preconditions ---------------------------------------------------------

def _conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def _announces_presence(f: Formula, agent: str) -> bool:
    return any(
        isinstance(c, Atom) and c.agent == agent and c.name != BOTTOM_ATOM for c in _conjuncts(f)
    )


def precondition_formula(update: UpdateModel, simplex, roster=None) -> Formula:
    """Static formula true at X exactly when the pair (X, simplex) exists.

    It conjoins the commitments of the simplex with a presence guard for its
    colours and an absence guard for every other agent of the roster.
    """
    roster = tuple(roster or update.agents)
    owner = min(roster)
    colors = update.colors(simplex)
    parts = []
    needs_guard = []
    for e in sorted(simplex):
        ev = update.events[e]
        if not is_top(ev.com):
            parts.append(ev.com)
        if not _announces_presence(ev.com, ev.agent):
            needs_guard.append(ev.agent)
    if needs_guard:
        parts.append(Commit(tuple(needs_guard), top(owner)))
    for b in roster:
        if b not in colors:
            parts.append(Not(Commit((b,), top(owner))))
    return conj(parts, owner)


def is_local(f: Formula, agent: str) -> bool:
    """True when the truth of f at X depends only on X's ``agent`` vertex."""
    if isinstance(f, Atom):
        return f.agent == agent or f.name == BOTTOM_ATOM
    if isinstance(f, Not):
        return is_local(f.body, agent)
    if isinstance(f, And):
        return is_local(f.left, agent) and is_local(f.right, agent)
    if isinstance(f, Commit):
        return f.group == (agent,)
    return False


def is_propositional_local(f: Formula, agent: str) -> bool:
    """Boolean combination of the agent's own atoms (and constants)."""
    if isinstance(f, Atom):
        return f.agent == agent or f.name == BOTTOM_ATOM
    if isinstance(f, Not):
        return is_propositional_local(f.body, agent)
    if isinstance(f, And):
        return is_propositional_local(f.left, agent) and is_propositional_local(f.right, agent)
    return False


def has_local_coms(update: UpdateModel) -> bool:
    return all(is_local(e.com, e.agent) for e in update.events.values())
