"""Translation of dynamic formulas into the static language.

Rules are applied outermost-first.  Each box is reduced with the guarded
precondition from ``dynamics.precondition_formula``, which is true at X
exactly when the pair (X, α) exists in the product.

Domain of the translation:

* ``[α]D_G φ`` needs G = χ(α) (otherwise UnsupportedGroupMismatch) and α a
  facet of its update model (otherwise UnsupportedReduction).
* ``[α][β]φ`` with equal colour sets is reduced by composition, which needs
  both update models to have vertex-local commitments.  With different colour
  sets the formula is valid and becomes ``true``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .checker import CheckContext
from .dynamics import compose, has_local_coms, precondition_formula
from .errors import UnresolvedActionRef, UnsupportedGroupMismatch, UnsupportedReduction
from .formula import (
    ActionBox,
    ActionRef,
    And,
    Atom,
    Commit,
    Formula,
    Not,
    implies,
    is_static,
    top,
)


@dataclass
class TranslationReport:
    input: Formula
    output: Formula
    trace: list = field(default_factory=list)  # (rule, before, after) triples

    @property
    def decreasing(self) -> bool:
        return all(before > after for _, before, after in self.trace)


def _resolve(ctx, ref: ActionRef):
    if ctx is None:
        raise UnresolvedActionRef(f"cannot resolve [{ref}] without update models")
    return ctx.resolve(ref)


def complexity(formula: Formula, ctx: CheckContext | None = None, cache=None) -> int:
    """c(p)=1, c(¬φ)=1+c(φ), c(φ∧ψ)=1+max, c(D_G φ)=1+c(φ),
    c([α]φ)=(4+c(pre(α)))·c(φ) with pre the guarded precondition."""
    if cache is None:
        cache = {}

    def c(f):
        hit = cache.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            out = 1
        elif isinstance(f, Not):
            out = 1 + c(f.body)
        elif isinstance(f, And):
            out = 1 + max(c(f.left), c(f.right))
        elif isinstance(f, Commit):
            out = 1 + c(f.body)
        elif isinstance(f, ActionBox):
            update, simplex = _resolve(ctx, f.action)
            out = (4 + c(precondition_formula(update, simplex))) * c(f.body)
        else:
            raise TypeError(f"not a formula: {f!r}")
        cache[f] = out
        return out

    return c(formula)


class _Translator:
    def __init__(self, ctx: CheckContext | None):
        self.ctx = ctx
        self.trace: list = []
        self.cache: dict = {}
        self.owner = "a"
        if ctx is not None and ctx.model is not None:
            self.owner = min(ctx.model.agents)
        elif ctx is not None and ctx.update_models:
            self.owner = min(next(iter(ctx.update_models.values())).agents)

    def c(self, f):
        return complexity(f, self.ctx, self.cache)

    def step(self, rule, before, *pieces):
        after = max((self.c(p) for p in pieces), default=0)
        self.trace.append((rule, self.c(before), after))

    def t(self, f: Formula) -> Formula:
        if isinstance(f, Atom):
            self.step("t-atom", f)
            return f
        if isinstance(f, Not):
            self.step("t-neg", f, f.body)
            return Not(self.t(f.body))
        if isinstance(f, And):
            self.step("t-and", f, f.left, f.right)
            return And(self.t(f.left), self.t(f.right))
        if isinstance(f, Commit):
            self.step("t-D", f, f.body)
            return Commit(f.group, self.t(f.body))
        if isinstance(f, ActionBox):
            return self.box(f)
        raise TypeError(f"not a formula: {f!r}")

    def box(self, f: ActionBox) -> Formula:
        update, simplex = _resolve(self.ctx, f.action)
        pre = precondition_formula(update, simplex)
        body = f.body
        if isinstance(body, Atom):
            out = implies(pre, body)
            self.step("t-box-atom", f, out)
            return self.t(out)
        if isinstance(body, Not):
            out = implies(pre, Not(ActionBox(f.action, body.body)))
            self.step("t-box-neg", f, out)
            return self.t(out)
        if isinstance(body, And):
            out = And(ActionBox(f.action, body.left), ActionBox(f.action, body.right))
            self.step("t-box-and", f, out)
            return self.t(out)
        if isinstance(body, Commit):
            colors = tuple(sorted(update.colors(simplex)))
            if body.group != colors:
                raise UnsupportedGroupMismatch(
                    f"[{f.action}] D{{{','.join(body.group)}}}: group differs from the action colours {colors}"
                )
            if simplex not in update.facets:
                raise UnsupportedReduction(
                    f"[{f.action}] D: the action is not a facet of {update.name!r}"
                )
            out = implies(pre, Commit(body.group, ActionBox(f.action, body.body)))
            self.step("t-box-D", f, out)
            return self.t(out)
        if isinstance(body, ActionBox):
            second, simplex2 = _resolve(self.ctx, body.action)
            if update.colors(simplex) != second.colors(simplex2):
                out = top(self.owner)
                self.step("t-box-box-vacuous", f, out)
                return out
            for u in (update, second):
                if not has_local_coms(u):
                    raise UnsupportedReduction(
                        f"composition needs vertex-local commitments; {u.name!r} has others"
                    )
            composite = self.composite(update, second)
            ref = ActionRef(composite.name, f"{f.action.simplex};{body.action.simplex}")
            out = ActionBox(ref, body.body)
            self.step("t-box-box", f, out)
            return self.t(out)
        raise TypeError(f"not a formula: {body!r}")

    def composite(self, first, second):
        name = f"{first.name};{second.name}"
        known = self.ctx.update_models.get(name)
        if known is not None and known.parts == (first, second):
            return known
        if known is not None:
            raise UnsupportedReduction(f"update model name {name!r} is already taken")
        made = compose(first, second)
        self.ctx.register(made)
        return made


def translate(ctx: CheckContext | None, formula: Formula) -> TranslationReport:
    """Rewrite ``formula`` into an equivalent static formula.

    Composite update models created along the way are registered in ``ctx``.
    """
    tr = _Translator(ctx)
    out = tr.t(formula)
    assert is_static(out)
    return TranslationReport(formula, out, tr.trace)
