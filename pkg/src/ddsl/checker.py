"""Model checking of static and dynamic formulas at a face of a model."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Mapping

from .complex import SimplicialModel
from .errors import RosterMismatch, UnresolvedActionRef
from .formula import (
    BOTTOM_ATOM,
    ActionBox,
    ActionRef,
    And,
    Atom,
    Commit,
    Formula,
    Not,
    subformulas,
)

if sys.getrecursionlimit() < 10000:
    sys.setrecursionlimit(10000)


class _Shared:
    """Caches shared by a context and every context derived from it.

    Products and memo tables are keyed by model identity; the model objects
    themselves are kept alive here so ids are never recycled.
    """

    def __init__(self):
        self.products: dict = {}
        self.memos: dict = {}
        self.models: dict = {}

    def memo_for(self, model):
        key = id(model)
        table = self.memos.get(key)
        if table is None:
            table = self.memos[key] = {}
            self.models[key] = model
        return table


@dataclass
class CheckContext:
    model: SimplicialModel
    update_models: dict = field(default_factory=dict)
    _shared: _Shared = field(default_factory=_Shared, repr=False)

    def __post_init__(self):
        given = dict(self.update_models)
        self.update_models = {}
        for u in given.values():
            self.register(u)

    def register(self, update) -> None:
        """Add an update model (and, recursively, any composite's parts)."""
        for part in getattr(update, "parts", ()) or ():
            self.register(part)
        self.update_models[update.name] = update

    def with_model(self, model: SimplicialModel) -> "CheckContext":
        ctx = CheckContext.__new__(CheckContext)
        ctx.model = model
        ctx.update_models = self.update_models
        ctx._shared = self._shared
        return ctx

    def resolve(self, ref: ActionRef):
        update = self.update_models.get(ref.model)
        if update is None:
            raise UnresolvedActionRef(f"no update model named {ref.model!r}")
        return update, update.resolve_simplex(ref.simplex)


def _check_roster(ctx: CheckContext, formula: Formula) -> None:
    roster = set(ctx.model.agents)
    for g in subformulas(formula):
        if isinstance(g, Atom) and g.name != BOTTOM_ATOM and g.agent not in roster:
            raise RosterMismatch(f"atom {g.name}@{g.agent} names an agent outside the roster")
        if isinstance(g, Commit) and not set(g.group) <= roster:
            raise RosterMismatch(f"group {set(g.group)} is not within the roster {sorted(roster)}")
        if isinstance(g, ActionBox):
            ctx.resolve(g.action)


def satisfies(ctx: CheckContext, face, formula: Formula) -> bool:
    """Truth of ``formula`` at ``face`` (ids, comma string or a named face)."""
    face = ctx.model.resolve_face(face)
    _check_roster(ctx, formula)
    return evaluate(ctx, ctx.model, face, formula)


def valid_in_model(ctx: CheckContext, formula: Formula) -> bool:
    _check_roster(ctx, formula)
    return all(evaluate(ctx, ctx.model, x, formula) for x in ctx.model.faces)


def truth_table(ctx: CheckContext, formula: Formula) -> list[tuple[frozenset, bool]]:
    _check_roster(ctx, formula)
    return [(x, evaluate(ctx, ctx.model, x, formula)) for x in ctx.model.faces]


def evaluate(ctx: CheckContext, model: SimplicialModel, face: frozenset, f: Formula) -> bool:
    """Unchecked evaluation; ``face`` must already be a face of ``model``."""
    memo = ctx._shared.memo_for(model)
    key = (face, f)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(f, Atom):
        out = any(
            model.vertices[v].agent == f.agent and f.name in model.vertices[v].props for v in face
        )
    elif isinstance(f, Not):
        out = not evaluate(ctx, model, face, f.body)
    elif isinstance(f, And):
        out = evaluate(ctx, model, face, f.left) and evaluate(ctx, model, face, f.right)
    elif isinstance(f, Commit):
        out = _commit(ctx, model, face, f)
    elif isinstance(f, ActionBox):
        from .dynamics import eval_action_box_in

        out = eval_action_box_in(ctx, model, face, f.action, f.body)
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[key] = out
    return out


def _commit(ctx, model, face, f: Commit) -> bool:
    group = set(f.group)
    core = frozenset(v for v in face if model.vertices[v].agent in group)
    if len(core) != len(group):
        return False
    # G ⊆ χ(X ∩ Y) holds exactly when Y contains the G-coloured part of X.
    return all(evaluate(ctx, model, y, f.body) for y in model.cofaces(core))
