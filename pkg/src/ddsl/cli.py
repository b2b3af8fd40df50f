"""Command-line front end.

Exit codes: 0 success, 1 a ``check`` verdict is false, 2 usage or formula
syntax error, 3 file or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import io
from .checker import CheckContext, satisfies, truth_table
from .complex import dimension, format_face, is_pure
from .dynamics import EmptyProduct, compose, product_update
from .errors import DSLError, FormulaSyntaxError
from .formula import parse, to_text
from .translation import complexity, translate
from .validity import (
    Counterexample,
    EnumerationBounds,
    axiom_suite,
    check_validity,
)

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(args, text: str, payload) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=False))
    else:
        print(text)


def _log(args, message: str) -> None:
    if args.verbose:
        print(message, file=sys.stderr)


def _load_updates(paths):
    return [io.load_update(p) for p in paths or []]


def _parse_formula(text, ctx_agents=None):
    return parse(text, agents=ctx_agents)


# -- subcommands ---------------------------------------------------------------

def cmd_check(args) -> int:
    model = io.load_model(args.model)
    ctx = CheckContext(model, {u.name: u for u in _load_updates(args.updates)})
    formula = _parse_formula(args.formula, model.agents)
    if args.all_faces:
        rows = truth_table(ctx, formula)
        if args.json:
            print(json.dumps({
                "formula": to_text(formula),
                "faces": [{"face": sorted(x), "result": r} for x, r in rows],
            }))
        else:
            for x, r in rows:
                print(f"{format_face(x)}\t{str(r).lower()}")
        return EXIT_OK if all(r for _, r in rows) else EXIT_FALSE
    if args.face is None:
        raise UsageError("check: give --face or --all-faces")
    face = model.resolve_face(args.face)
    result = satisfies(ctx, face, formula)
    _emit(args, str(result).lower(), {"formula": to_text(formula), "face": sorted(face), "result": result})
    return EXIT_OK if result else EXIT_FALSE


def cmd_info(args) -> int:
    model = io.load_model(args.model)
    faces = model.faces
    payload = {
        "agents": list(model.agents),
        "dimension": dimension(model),
        "pure": is_pure(model),
        "vertices": len(model.vertices),
        "facets": [sorted(f) for f in model.facets],
        "faces": len(faces),
        "colors": [{"face": sorted(x), "colors": sorted(model.colors(x))} for x in faces],
    }
    lines = [
        f"agents: {','.join(model.agents)}",
        f"dimension: {payload['dimension']}",
        f"pure: {str(payload['pure']).lower()}",
        f"vertices: {payload['vertices']}",
        f"facets: {' '.join(format_face(f) for f in model.facets)}",
        f"faces: {payload['faces']}",
    ]
    lines += [f"  {format_face(x)}\t{{{','.join(sorted(model.colors(x)))}}}" for x in faces]
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_update(args) -> int:
    model = io.load_model(args.model)
    update = io.load_update(args.action_model)
    ctx = CheckContext(model, {u.name: u for u in _load_updates(args.updates) + [update]})
    result = product_update(ctx, model, update)
    if isinstance(result, EmptyProduct):
        _emit(args, "empty product: no matched pair survives", {"empty": True})
        return EXIT_OK
    if args.out:
        io.save_model(result, args.out)
    if args.dot:
        io.export_dot(result, args.dot, name=f"{update.name}")
    summary = (
        f"product: {len(result.vertices)} vertices, facets "
        + " ".join(format_face(f) for f in result.facets)
    )
    payload = {"empty": False, "model": io.model_to_dict(result)}
    if not args.out and not args.json:
        summary += "\n" + io.dumps(io.model_to_dict(result)).rstrip()
    _emit(args, summary, payload)
    return EXIT_OK


def cmd_compose(args) -> int:
    first, second = io.load_update(args.first), io.load_update(args.second)
    made = compose(first, second, name=args.name, simplify=not args.diamond)
    if args.out:
        io.save_update(made, args.out)
    text = f"composed {made.name}: {len(made.events)} events, {len(made.facets)} facets"
    if not args.out and not args.json:
        text += "\n" + io.dumps(io.update_to_dict(made)).rstrip()
    _emit(args, text, io.update_to_dict(made))
    return EXIT_OK


def cmd_translate(args) -> int:
    updates = _load_updates(args.updates)
    model = io.load_model(args.model) if args.model else None
    ctx = CheckContext(model, {u.name: u for u in updates})
    roster = model.agents if model else (updates[0].agents if updates else None)
    formula = _parse_formula(args.formula, roster)
    report = translate(ctx, formula)
    lines = [to_text(report.output)]
    if args.trace:
        lines += [f"  {rule}: {before} -> {after}" for rule, before, after in report.trace]
    _log(args, f"complexity {complexity(formula, ctx)}, {len(report.trace)} steps")
    _emit(args, "\n".join(lines), {
        "input": to_text(formula),
        "output": to_text(report.output),
        "trace": [list(t) for t in report.trace] if args.trace else None,
    })
    return EXIT_OK


def _bounds(args) -> EnumerationBounds:
    try:
        return EnumerationBounds(args.agents, args.props, args.max_vertices, args.max_facets)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_validity(args) -> int:
    bounds = _bounds(args)
    updates = _load_updates(args.updates)
    formula = _parse_formula(args.formula, bounds.agents)
    start = time.perf_counter()
    verdict = check_validity(formula, bounds, updates)
    _log(args, f"searched in {time.perf_counter() - start:.2f}s")
    if isinstance(verdict, Counterexample):
        witness = io.model_to_dict(verdict.model)
        if args.out:
            Path(args.out).write_text(io.dumps(witness), encoding="utf-8")
        text = f"counterexample at face {format_face(verdict.face)} (model #{verdict.models_checked})"
        if not args.out and not args.json:
            text += "\n" + io.dumps(witness).rstrip()
        _emit(args, text, {
            "formula": to_text(formula), "result": "counterexample",
            "face": sorted(verdict.face), "model": witness,
        })
    else:
        _emit(
            args,
            f"valid up to bound ({verdict.models_checked} models, {verdict.faces_checked} faces)",
            {"formula": to_text(formula), "result": "valid-up-to-bound",
             "models": verdict.models_checked, "faces": verdict.faces_checked},
        )
    return EXIT_OK


def cmd_axioms(args) -> int:
    report = axiom_suite(_bounds(args), seed=args.seed, include_reductions=not args.no_reductions)
    payload = {
        "models": report.models,
        "ok": report.ok,
        "results": [
            {"schema": r.name, "instances": r.instances, "checks": r.checked,
             "status": r.status, "ok": r.ok}
            for r in report.results
        ],
    }
    _emit(args, report.render().rstrip(), payload)
    return EXIT_OK


def cmd_export(args) -> int:
    model = io.load_model(args.model)
    text = io.to_dot(model, name=Path(args.model).stem)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        _emit(args, f"wrote {args.out}", {"out": args.out})
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="extra diagnostics on stderr")

    parser = _Parser(prog="ddsl", parents=[common],
                     description="Deontic simplicial logic: model checking, updates, translation.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def bounds_args(p):
        p.add_argument("--agents", type=int, default=2)
        p.add_argument("--props", type=int, default=1)
        p.add_argument("--max-vertices", type=int, default=2)
        p.add_argument("--max-facets", type=int, default=2)

    p = sub.add_parser("check", parents=[common], help="evaluate a formula at a face")
    p.add_argument("--model", required=True)
    p.add_argument("--face", help="comma-separated vertex ids or a named face")
    p.add_argument("--all-faces", action="store_true")
    p.add_argument("--formula", required=True)
    p.add_argument("--updates", nargs="*", default=[])
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("info", parents=[common], help="describe a model")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("update", parents=[common], help="product update with an update model")
    p.add_argument("--model", required=True)
    p.add_argument("--action-model", required=True)
    p.add_argument("--updates", nargs="*", default=[])
    p.add_argument("--out")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("compose", parents=[common], help="compose two update models")
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    p.add_argument("--name")
    p.add_argument("--diamond", action="store_true",
                   help="keep the diamond commitments even when they simplify")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("translate", parents=[common], help="rewrite into the static language")
    p.add_argument("--formula", required=True)
    p.add_argument("--updates", nargs="*", default=[])
    p.add_argument("--model")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("validity", parents=[common], help="bounded validity search")
    p.add_argument("--formula", required=True)
    bounds_args(p)
    p.add_argument("--updates", nargs="*", default=[])
    p.add_argument("--out", help="where to write a counterexample model")
    p.set_defaults(func=cmd_validity)

    p = sub.add_parser("axioms", parents=[common], help="run the axiom soundness suite")
    bounds_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-reductions", action="store_true")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("export", parents=[common], help="write a model as DOT")
    p.add_argument("--model", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.json = getattr(args, "json", False)
        args.verbose = getattr(args, "verbose", False)
        if not getattr(args, "command", None):
            raise UsageError("ddsl: a subcommand is required (see --help)")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except FormulaSyntaxError as exc:
        print(f"ddsl: formula error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DSLError, OSError) as exc:
        print(f"ddsl: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run(sys.argv[1:]))
