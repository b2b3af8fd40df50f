"""Bounded model enumeration, validity search and the executable axiom suite."""

from __future__ import annotations

import itertools
import math
import random
import string
from dataclasses import dataclass, field

from .checker import CheckContext, evaluate, satisfies
from .complex import SimplicialModel, Vertex, face_key, format_face, maximal
from .dynamics import build_update_model, compose, precondition_formula
from .errors import BoundsTooLarge
from .formula import (
    ActionBox,
    ActionRef,
    And,
    Atom,
    Commit,
    Formula,
    Not,
    bottom,
    disj,
    iff,
    implies,
    to_text,
    top,
)

DEFAULT_CEILING = 5_000_000
PROP_NAMES = "pqrstuvw"


@dataclass(frozen=True)
class EnumerationBounds:
    num_agents: int
    props_per_agent: int
    max_vertices_per_agent: int
    max_facets: int

    def __post_init__(self):
        if self.num_agents < 1 or self.num_agents > 26:
            raise ValueError("num_agents must be between 1 and 26")
        if self.props_per_agent < 0 or self.props_per_agent > len(PROP_NAMES):
            raise ValueError(f"props_per_agent must be between 0 and {len(PROP_NAMES)}")
        if self.max_vertices_per_agent < 1 or self.max_facets < 1:
            raise ValueError("vertex and facet bounds must be at least 1")

    @property
    def agents(self) -> tuple[str, ...]:
        return tuple(string.ascii_lowercase[: self.num_agents])

    @property
    def props(self) -> tuple[str, ...]:
        return tuple(PROP_NAMES[: self.props_per_agent])


@dataclass
class ValidUpToBound:
    models_checked: int
    faces_checked: int

    def __bool__(self):
        return True


@dataclass
class Counterexample:
    model: SimplicialModel
    face: frozenset
    models_checked: int

    def __bool__(self):
        return False


# -- enumeration -------------------------------------------------------------

def _count_vectors(bounds):
    vecs = [
        v
        for v in itertools.product(range(bounds.max_vertices_per_agent + 1), repeat=bounds.num_agents)
        if sum(v)
    ]
    return sorted(vecs, key=lambda v: (sum(v), v))


def _simplices(ids_by_agent):
    """All nonempty chromatic vertex sets, in canonical order."""
    out = []
    for choice in itertools.product(*([None] + ids for ids in ids_by_agent)):
        s = frozenset(v for v in choice if v is not None)
        if s:
            out.append(s)
    return sorted(out, key=face_key)


def estimate_candidates(bounds: EnumerationBounds) -> int:
    total = 0
    for vec in _count_vectors(bounds):
        n_simp = math.prod(k + 1 for k in vec) - 1
        structures = sum(math.comb(n_simp, k) for k in range(1, bounds.max_facets + 1))
        total += structures * 2 ** (bounds.props_per_agent * sum(vec))
    return total


def _perms(ids_by_agent):
    """Colour-preserving vertex permutations as dicts."""
    for parts in itertools.product(*(itertools.permutations(ids) for ids in ids_by_agent)):
        mapping = {}
        for ids, perm in zip(ids_by_agent, parts):
            mapping.update(zip(ids, perm))
        yield mapping


def _facet_sig(facets, mapping):
    return tuple(sorted(tuple(sorted(mapping[v] for v in f)) for f in facets))


def _structures(agents, vec, max_facets):
    """Non-isomorphic facet structures over a fixed vertex count vector.

    Yields (ids_by_agent, facets, automorphisms).
    """
    ids_by_agent = [[f"{a}{i}" for i in range(k)] for a, k in zip(agents, vec)]
    everyone = frozenset(v for ids in ids_by_agent for v in ids)
    simplices = _simplices(ids_by_agent)
    perms = list(_perms(ids_by_agent))
    seen = set()
    for k in range(1, max_facets + 1):
        for combo in itertools.combinations(simplices, k):
            if any(a < b or b < a for a, b in itertools.combinations(combo, 2)):
                continue
            if frozenset().union(*combo) != everyone:
                continue
            sigs = [_facet_sig(combo, m) for m in perms]
            key = min(sigs)
            if key in seen:
                continue
            seen.add(key)
            own = sigs[0]
            autos = [m for m, s in zip(perms, sigs) if s == own]
            yield ids_by_agent, combo, autos


def enumerate_models(bounds: EnumerationBounds, ceiling: int = DEFAULT_CEILING):
    """Every model within bounds exactly once up to isomorphism, in a fixed order."""
    estimate = estimate_candidates(bounds)
    if estimate > ceiling:
        raise BoundsTooLarge(f"about {estimate} candidates exceed the ceiling of {ceiling}")
    agents = bounds.agents
    label_choices = [
        frozenset(c)
        for r in range(len(bounds.props) + 1)
        for c in itertools.combinations(bounds.props, r)
    ]
    label_choices.sort(key=lambda s: (len(s), sorted(s)))
    for vec in _count_vectors(bounds):
        for ids_by_agent, facets, autos in _structures(agents, vec, bounds.max_facets):
            ids = [v for group in ids_by_agent for v in group]
            colour = {v: a for a, group in zip(agents, ids_by_agent) for v in group}
            facets = tuple(sorted(facets, key=face_key))
            for labels in itertools.product(range(len(label_choices)), repeat=len(ids)):
                assign = dict(zip(ids, labels))
                mine = tuple(assign[v] for v in ids)
                if any(tuple(assign[m[v]] for v in ids) < mine for m in autos):
                    continue  # not the orbit representative
                verts = {
                    v: Vertex(v, colour[v], label_choices[assign[v]]) for v in sorted(ids)
                }
                yield SimplicialModel(agents, verts, facets, {})


def check_validity(formula: Formula, bounds: EnumerationBounds, update_models=(), ceiling=DEFAULT_CEILING):
    """Search the bounded universe for a falsifying (model, face)."""
    updates = {u.name: u for u in update_models}
    models = 0
    faces = 0
    for model in enumerate_models(bounds, ceiling):
        models += 1
        ctx = CheckContext(model, updates)
        for x in model.faces:
            faces += 1
            if not evaluate(ctx, model, x, formula):
                # re-verify with a fresh context before reporting
                assert not satisfies(CheckContext(model, updates), x, formula)
                return Counterexample(model, x, models)
    return ValidUpToBound(models, faces)


# -- formula generation ------------------------------------------------------

def _groups(agents):
    return [g for r in range(1, len(agents) + 1) for g in itertools.combinations(agents, r)]


def random_static_formula(rng: random.Random, agents, props, depth: int) -> Formula:
    """Static formula of depth at most ``depth``."""
    owner = min(agents)
    if depth <= 0 or rng.random() < 0.2:
        roll = rng.random()
        if roll < 0.06:
            return top(owner)
        if roll < 0.1:
            return bottom(owner)
        return Atom(rng.choice(props), rng.choice(agents))
    kind = rng.choice(("not", "and", "and", "commit", "commit"))
    if kind == "not":
        return Not(random_static_formula(rng, agents, props, depth - 1))
    if kind == "and":
        return And(
            random_static_formula(rng, agents, props, depth - 1),
            random_static_formula(rng, agents, props, depth - 1),
        )
    return Commit(rng.choice(_groups(agents)), random_static_formula(rng, agents, props, depth - 1))


def random_dynamic_formula(rng: random.Random, agents, props, depth: int, actions, _scope=None) -> Formula:
    """Dynamic formula of depth at most ``depth`` over ``actions``.

    ``actions`` is a list of (ActionRef, colour tuple).  Inside a box every
    commitment group equals the colours of the innermost action, which keeps
    the formula within the reach of the reduction rules.
    """
    owner = min(agents)
    if depth <= 0 or rng.random() < 0.15:
        roll = rng.random()
        if roll < 0.05:
            return top(owner)
        return Atom(rng.choice(props), rng.choice(agents))
    kind = rng.choice(("not", "and", "commit", "box", "box"))
    sub = lambda scope: random_dynamic_formula(rng, agents, props, depth - 1, actions, scope)
    if kind == "not":
        return Not(sub(_scope))
    if kind == "and":
        return And(sub(_scope), sub(_scope))
    if kind == "commit":
        group = _scope if _scope is not None else rng.choice(_groups(agents))
        return Commit(group, sub(_scope))
    ref, colours = rng.choice(actions)
    return ActionBox(ref, sub(colours))


def random_local_com(rng: random.Random, agent, props, owner) -> Formula:
    """Propositional formula over the agent's own atoms (depth at most 2)."""
    roll = rng.random()
    atom = lambda: Atom(rng.choice(props), agent)
    if roll < 0.25:
        return top(owner)
    if roll < 0.5:
        return atom()
    if roll < 0.7:
        return Not(atom())
    if roll < 0.85:
        return And(atom(), Not(atom()) if rng.random() < 0.3 else atom())
    return disj(atom(), Not(atom()))


def random_update_model(rng: random.Random, name, agents, props, max_events=2, max_facets=2):
    """Small update model with own-agent propositional commitments.

    Every facet is exposed as a named simplex ``f0``, ``f1``, …
    """
    owner = min(agents)
    events = []
    ids_by_agent = []
    for a in agents:
        count = rng.randint(1, max_events)
        ids = [f"{name}_{a}{i}" for i in range(count)]
        ids_by_agent.append(ids)
        for e in ids:
            com = random_local_com(rng, a, props, owner) if props else top(owner)
            events.append((e, a, com))
    simplices = _simplices(ids_by_agent)
    everyone = frozenset(e for ids in ids_by_agent for e in ids)
    facets = []
    # greedy random cover by antichain members
    while not facets or frozenset().union(*facets) != everyone:
        s = rng.choice(simplices)
        if any(s <= f for f in facets):
            continue
        facets = [f for f in facets if not f <= s] + [s]
        if len(facets) > max_facets + len(agents):
            facets = []
    facets = maximal(facets)
    named = {f"f{i}": f for i, f in enumerate(facets)}
    return build_update_model(name, agents, events, facets, named)


def update_schedule(seed: int, agents, props, count: int = 3):
    rng = random.Random(seed)
    return [random_update_model(rng, f"U{i}", agents, props) for i in range(count)]


def facet_actions(updates):
    out = []
    for u in updates:
        for key in sorted(u.named):
            out.append((ActionRef(u.name, key), tuple(sorted(u.colors(u.named[key])))))
    return out


# -- axiom suite ---------------------------------------------------------------

TAUTOLOGIES = [
    "p@a -> p@a",
    "p@a | ~p@a",
    "~(p@a & ~p@a)",
    "(p@a & q@b) -> p@a",
    "(p@a & q@b) -> q@b",
    "p@a -> (p@a | q@b)",
    "(p@a & q@b) -> (q@b & p@a)",
    "(p@a | q@b) -> (q@b | p@a)",
    "~~p@a -> p@a",
    "p@a -> ~~p@a",
    "(p@a -> q@b) | (q@b -> p@a)",
    "(p@a -> (q@b -> p@a))",
    "((p@a -> q@b) & p@a) -> q@b",
    "((p@a -> q@b) & ~q@b) -> ~p@a",
    "~(p@a & q@b) -> (~p@a | ~q@b)",
    "(~p@a | ~q@b) -> ~(p@a & q@b)",
    "~(p@a | q@b) -> (~p@a & ~q@b)",
    "((p@a -> q@b) -> p@a) -> p@a",
    "(p@a & (q@b | p@b)) -> ((p@a & q@b) | (p@a & p@b))",
    "true",
]


@dataclass
class SchemaResult:
    name: str
    expected: bool  # True when the schema is expected to be valid
    instances: int
    checked: int = 0
    counterexample: tuple | None = None  # (instance text, model, face)

    @property
    def holds(self) -> bool:
        return self.counterexample is None

    @property
    def status(self) -> str:
        if self.holds:
            return "pass" if self.expected else "no counterexample found"
        return "fail" if self.expected else "fails as expected"

    @property
    def ok(self) -> bool:
        return self.holds == self.expected


@dataclass
class SuiteReport:
    bounds: EnumerationBounds
    seed: int
    models: int
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def instance_count(self) -> int:
        return sum(r.instances for r in self.results)

    def render(self) -> str:
        b = self.bounds
        lines = [
            f"bounds: agents={b.num_agents} props={b.props_per_agent} "
            f"max_vertices={b.max_vertices_per_agent} max_facets={b.max_facets} seed={self.seed}",
            f"models: {self.models}  instances: {self.instance_count}",
        ]
        width = max(len(r.name) for r in self.results)
        for r in self.results:
            lines.append(
                f"{r.name.ljust(width)}  instances={r.instances:<4d} checks={r.checked:<7d} {r.status}"
            )
            if r.counterexample:
                text, model, face = r.counterexample
                lines.append(f"    instance: {text}")
                lines.append(f"    face: {format_face(face)}")
                lines.append(f"    model: {describe_model(model)}")
        lines.append("overall: " + ("ok" if self.ok else "FAILED"))
        return "\n".join(lines) + "\n"


def describe_model(model: SimplicialModel) -> str:
    verts = ", ".join(
        f"{v.id}:{v.agent}{{{','.join(sorted(v.props))}}}" for v in model.vertices.values()
    )
    facets = " ".join(format_face(f) for f in model.facets)
    return f"vertices [{verts}] facets [{facets}]"


def schema_instances(bounds: EnumerationBounds, seed: int = 0, per_schema: int = 24, depth: int = 3):
    """The fixed instance schedule: (schema name, expected validity, formulas)."""
    from .formula import parse

    rng = random.Random(seed)
    agents, props = bounds.agents, bounds.props or ("p",)
    groups = _groups(agents)
    gen = lambda: random_static_formula(rng, agents, props, depth)
    out = []

    def add(name, expected, formulas):
        out.append((name, expected, formulas))

    add("K", True, [
        implies(Commit(g, implies(x, y)), implies(Commit(g, x), Commit(g, y)))
        for g, x, y in ((rng.choice(groups), gen(), gen()) for _ in range(per_schema))
    ])
    add("T", True, [Commit(g, x) >> x for g, x in ((rng.choice(groups), gen()) for _ in range(per_schema))])
    add("4", True, [
        Commit(g, x) >> Commit(g, Commit(g, x))
        for g, x in ((rng.choice(groups), gen()) for _ in range(per_schema))
    ])
    owner = min(agents)
    wn = []
    for a in agents:
        for p in props:
            atom = Atom(p, a)
            wn.append(atom >> Commit((a,), atom))
            wn.append(And(Commit((a,), top(owner)), Not(atom)) >> Commit((a,), Not(atom)))
    add("WN (presence guarded)", True, wn)
    add("Taut", True, [parse(t.replace("@b", f"@{agents[-1]}"), agents=agents) for t in TAUTOLOGIES])
    literal_wn = [Not(Atom(p, a)) >> Commit((a,), Not(Atom(p, a))) for a in agents for p in props]
    if len(agents) > 1:
        add("WN literal (negative half)", False, literal_wn)
    big = tuple(agents)
    add("5", False, [
        Not(Commit(big, Atom(props[0], agents[-1]))) >> Commit(big, Not(Commit(big, Atom(props[0], agents[-1]))))
    ] + [Not(Commit(g, x)) >> Commit(g, Not(Commit(g, x))) for g, x in ((rng.choice(groups), gen()) for _ in range(4))])
    if len(agents) > 1:
        mono = []
        for _ in range(5):
            g = rng.choice([g for g in groups if len(g) < len(agents)])
            bigger = tuple(sorted(set(g) | {rng.choice([a for a in agents if a not in g])}))
            x = gen()
            mono.append(Commit(g, x) >> Commit(bigger, x))
        add("monotonicity", False, mono)
    return out


def reduction_instances(bounds: EnumerationBounds, seed: int = 0, per_schema: int = 20, depth: int = 2):
    """R1-R5 as semantic equivalences over a schedule of small update models."""
    rng = random.Random(seed + 1)
    agents, props = bounds.agents, bounds.props or ("p",)
    updates = update_schedule(seed + 2, agents, props)
    actions = facet_actions(updates)
    owner = min(agents)
    gen = lambda: random_static_formula(rng, agents, props, depth)
    by_name = {u.name: u for u in updates}

    def pre(ref):
        u = by_name[ref.model]
        return precondition_formula(u, u.resolve_simplex(ref.simplex))

    r1, r2, r3, r4, r5 = [], [], [], [], []
    for _ in range(per_schema):
        ref, colours = rng.choice(actions)
        atom = Atom(rng.choice(props), rng.choice(agents))
        r1.append(iff(ActionBox(ref, atom), implies(pre(ref), atom)))
        x = gen()
        r2.append(iff(ActionBox(ref, Not(x)), implies(pre(ref), Not(ActionBox(ref, x)))))
        x, y = gen(), gen()
        r3.append(iff(ActionBox(ref, And(x, y)), And(ActionBox(ref, x), ActionBox(ref, y))))
        x = gen()
        r4.append(iff(ActionBox(ref, Commit(colours, x)), implies(pre(ref), Commit(colours, ActionBox(ref, x)))))
    composites = {}
    diamonds = {}
    r5d = []
    for _ in range(per_schema):
        (r_a, c_a), (r_b, c_b) = rng.choice(actions), rng.choice(actions)
        u, v = by_name[r_a.model], by_name[r_b.model]
        key = (u.name, v.name)
        if key not in composites:
            composites[key] = compose(u, v)
        uv = composites[key]
        x = gen()
        joint = ActionRef(uv.name, f"{r_a.simplex};{r_b.simplex}")
        if c_a != c_b:
            r5.append(ActionBox(r_a, ActionBox(r_b, x)))  # valid: colours never match
            continue
        r5.append(iff(ActionBox(r_a, ActionBox(r_b, x)), ActionBox(joint, x)))
        # the same equivalence with the unsimplified diamond commitments
        if key not in diamonds:
            diamonds[key] = compose(u, v, name=f"{u.name};{v.name}_dia", simplify=False)
        joint_d = ActionRef(diamonds[key].name, joint.simplex)
        r5d.append(iff(ActionBox(r_a, ActionBox(r_b, x)), ActionBox(joint_d, x)))
    all_updates = list(updates) + list(composites.values()) + list(diamonds.values())
    return [
        ("R1", True, r1),
        ("R2", True, r2),
        ("R3", True, r3),
        ("R4", True, r4),
        ("R5", True, r5),
        ("R5 (diamond commitments)", True, r5d),
    ], all_updates


def axiom_suite(bounds: EnumerationBounds, seed: int = 0, per_schema: int = 24,
                include_reductions: bool = True, ceiling: int = DEFAULT_CEILING) -> SuiteReport:
    schedule = schema_instances(bounds, seed, per_schema)
    updates = []
    if include_reductions:
        extra, updates = reduction_instances(bounds, seed, per_schema)
        schedule += extra
    results = [SchemaResult(name, expected, len(fs)) for name, expected, fs in schedule]
    results.append(SchemaResult("N (some D{a} true)", True, 1))
    models = 0
    for model in enumerate_models(bounds, ceiling):
        models += 1
        ctx = CheckContext(model, {u.name: u for u in updates})
        for res, (_, _, formulas) in zip(results, schedule):
            if res.counterexample is not None:
                continue
            for f in formulas:
                bad = None
                for x in model.faces:
                    res.checked += 1
                    if not evaluate(ctx, model, x, f):
                        bad = x
                        break
                if bad is not None:
                    res.counterexample = (to_text(f), model, bad)
                    break
        n_res = results[-1]
        if n_res.counterexample is None:
            owner = min(model.agents)
            for x in model.faces:
                n_res.checked += 1
                if not any(evaluate(ctx, model, x, Commit((a,), top(owner))) for a in model.colors(x)):
                    n_res.counterexample = ("D{a} true for some a in the face", model, x)
                    break
    return SuiteReport(bounds, seed, models, results)


# -- translation trials --------------------------------------------------------

@dataclass
class TranslationTrials:
    seed: int
    trials: int = 0
    mismatches: list = field(default_factory=list)
    non_decreasing: list = field(default_factory=list)
    unsupported: list = field(default_factory=list)
    rewrite_steps: int = 0
    lines: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.mismatches or self.non_decreasing or self.unsupported)

    def render(self) -> str:
        head = [
            f"seed: {self.seed}",
            f"trials: {self.trials}",
            f"mismatches: {len(self.mismatches)}",
            f"non-decreasing traces: {len(self.non_decreasing)}",
            f"unsupported: {len(self.unsupported)}",
            f"rewrite steps: {self.rewrite_steps}",
        ]
        return "\n".join(head + self.lines) + "\n"


def translation_trials(seed: int = 0, count: int = 1000, depth: int = 4,
                       bounds: EnumerationBounds | None = None) -> TranslationTrials:
    """Compare satisfies(φ) with satisfies(t(φ)) on random (model, face, φ) triples."""
    from .translation import translate

    bounds = bounds or EnumerationBounds(2, 1, 2, 2)
    agents, props = bounds.agents, bounds.props or ("p",)
    models = list(enumerate_models(bounds))
    updates = update_schedule(seed + 7, agents, props)
    actions = facet_actions(updates)
    rng = random.Random(seed)
    out = TranslationTrials(seed)
    contexts = {}
    for i in range(count):
        m_index = rng.randrange(len(models))
        model = models[m_index]
        face = rng.choice(model.faces)
        f = random_dynamic_formula(rng, agents, props, depth, actions)
        ctx = contexts.get(m_index)
        if ctx is None:
            ctx = contexts[m_index] = CheckContext(model, {u.name: u for u in updates})
        out.trials += 1
        try:
            report = translate(ctx, f)
        except Exception as exc:  # recorded, never hidden
            out.unsupported.append((to_text(f), type(exc).__name__))
            out.lines.append(f"{i}: model#{m_index} {format_face(face)} UNSUPPORTED {type(exc).__name__}")
            continue
        out.rewrite_steps += len(report.trace)
        lhs = evaluate(ctx, model, face, f)
        rhs = evaluate(ctx, model, face, report.output)
        if lhs != rhs:
            out.mismatches.append((to_text(f), m_index, face))
        if not report.decreasing:
            out.non_decreasing.append(to_text(f))
        out.lines.append(
            f"{i}: model#{m_index} {format_face(face)} {int(lhs)}{int(rhs)} steps={len(report.trace)}"
        )
    return out
