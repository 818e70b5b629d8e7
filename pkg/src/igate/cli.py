"""Command-line front end: `ig <subcommand> ...`.

Exit codes: 0 success, 1 usage error (bad flags, missing files), 2
semantic error (syntax errors, guards exceeded, zero-mass conditionals).
Results go to stdout, diagnostics to stderr. The IG_MAX_CHOICES
environment variable overrides the model-enumeration guard.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from contextlib import redirect_stderr, redirect_stdout
from typing import Sequence

from . import circuit as circuit_mod
from . import classify as classify_mod
from . import digital, dsl, grounding, learn, prob, vectors
from .errors import IgateError


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 instead of argparse's 2
        raise _UsageError(message)


def _read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_program(path: str) -> dsl.Program:
    return dsl.parse_program(_read_file(path))


def _max_choices(args) -> int:
    if args.max_choices is not None:
        return args.max_choices
    env = os.environ.get("IG_MAX_CHOICES")
    return int(env) if env else digital.MAX_CHOICE_BITS


def _split_outside_parens(text: str) -> list[str]:
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        current.append(ch)
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def _format_prob(value: float) -> str:
    if value == 0.0 or value >= 1e-3:
        return f"{value:.12f}"
    return f"{value:.12e}"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_parse(args, out) -> int:
    program = _load_program(args.file)
    if args.json:
        payload = {
            "statements": [str(s) for s in program.statements],
            "domain": sorted(program.domain),
        }
        print(json.dumps(payload, indent=2), file=out)
    else:
        kinds = [type(s).__name__.lower() for s in program.statements]
        print(
            f"ok: {len(program.statements)} statements"
            f" ({', '.join(kinds) if kinds else 'empty'})",
            file=out,
        )
    return 0


def _cmd_format(args, out) -> int:
    out.write(dsl.format_program(_load_program(args.file)))
    return 0


def _cmd_ground(args, out) -> int:
    program = grounding.ground_program(_load_program(args.file), args.max_ground)
    out.write(dsl.format_program(program))
    return 0


def _cmd_compile(args, out) -> int:
    program = grounding.ground_program(_load_program(args.file), args.max_ground)
    compiled = circuit_mod.compile_program(program)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as handle:
            handle.write(circuit_mod.export_dot(compiled))
    print(
        f"channels: {len(compiled.channels)}  gates: {len(compiled.gates)}"
        f"  generators: {len(compiled.generators)}  facts: {len(compiled.facts)}",
        file=out,
    )
    return 0


def _cmd_complete(args, out) -> int:
    program = _load_program(args.file)
    statements: list[dsl.Statement] = []
    for stmt in program.statements:
        if isinstance(stmt, dsl.Constraint):
            statements.extend(circuit_mod.complete_constraint(stmt))
        else:
            statements.append(stmt)
    out.write(
        dsl.format_program(dsl.Program(tuple(statements), program.domain))
    )
    return 0


def _cmd_models(args, out) -> int:
    program = grounding.ground_program(_load_program(args.file), args.max_ground)
    if args.classical:
        program = circuit_mod.classicalize(program)
    compiled = circuit_mod.compile_program(program)
    models = digital.enumerate_models(compiled, _max_choices(args))
    for model in models:
        if args.json:
            print(json.dumps(model.as_dict(), sort_keys=True), file=out)
        else:
            print(model.render(), file=out)
    return 0


def _cmd_eval(args, out) -> int:
    program = grounding.ground_program(_load_program(args.file), args.max_ground)
    compiled = circuit_mod.compile_program(program)
    inputs = []
    for part in _split_outside_parens(args.set or ""):
        name, _, value = part.rpartition("=")
        if value not in ("true", "false") or not name:
            raise _UsageError(f"--set expects atom=true|false, got {part!r}")
        literal = dsl.parse_literal(name)
        if literal.negative:
            literal = literal.negated()
            value = "true" if value == "false" else "false"
        inputs.append(
            literal.channel if value == "true" else literal.negated().channel
        )
    active = digital.propagate(compiled, inputs)
    for atom, value in sorted(digital.atom_values(compiled, active).items()):
        print(f"{atom}: {value}", file=out)
    return 0


def _cmd_classify(args, out) -> int:
    report = classify_mod.mechanism_report(_load_program(args.file))
    if args.json:
        print(json.dumps(report.to_json(), indent=2), file=out)
    else:
        out.write(report.render())
    return 0


def _cmd_prob(args, out) -> int:
    program = _load_program(args.file)
    query = dsl.parse_literal(args.query)
    given = tuple(
        dsl.parse_literal(text) for text in _split_outside_parens(args.given or "")
    )
    value = prob.query_prob(program, query, given, args.max_switches)
    print(_format_prob(value), file=out)
    return 0


def _cmd_formulas(args, out) -> int:
    table = prob.JointTable.from_json(_read_file(args.table))
    if args.compare:
        comparisons = prob.compare_formulas(table)
        if args.json:
            payload = [
                {
                    "form": c.form,
                    "literal": c.literal,
                    "oracle": c.oracle,
                    "deviation": c.deviation,
                    "note": c.note,
                }
                for c in comparisons
            ]
            print(json.dumps(payload, indent=2), file=out)
        else:
            for c in comparisons:
                if c.deviation is None:
                    print(f"form {c.form}: {c.note}", file=out)
                else:
                    print(
                        f"form {c.form}: literal {_format_prob(c.literal)}"
                        f"  oracle {_format_prob(c.oracle)}"
                        f"  deviation {_format_prob(c.deviation)}",
                        file=out,
                    )
        return 0
    if args.form is None:
        raise _UsageError("formulas requires --form N or --compare")
    print(_format_prob(prob.formula(args.form, table)), file=out)
    return 0


def _cmd_vec(args, out) -> int:
    named = vectors.load_vectors(_read_file(args.vectors))

    def pick(name: str) -> vectors.ConceptVector:
        if name not in named:
            raise _UsageError(f"vector {name!r} not present in {args.vectors}")
        return named[name]

    if args.vec_op == "merge":
        result = vectors.merge([pick(n) for n in _split_outside_parens(args.parts)])
        payload = {"label": result.label, "components": list(result.components)}
    elif args.vec_op == "contrast":
        result = vectors.contrast(
            pick(args.target),
            [pick(n) for n in _split_outside_parens(args.dictionary)],
            args.max_steps,
        )
        payload = {
            "extracted": [v.label for v in result.extracted],
            "residual": list(result.residual.components),
        }
    elif args.vec_op == "fuse":
        a, b = (pick(n) for n in _split_outside_parens(args.pair))
        result = vectors.fuse(a, b)
        payload = {
            "center": list(result.center.components),
            "extent": list(result.extent.components),
        }
    else:  # detach
        fusion = vectors.FusionResult(pick(args.center), pick(args.extent))
        direction = [int(d) for d in _split_outside_parens(args.direction)]
        result = vectors.detach(fusion, direction)
        payload = {"label": result.label, "components": list(result.components)}
    print(json.dumps(payload), file=out)
    return 0


def _cmd_learn(args, out) -> int:
    episodes = learn.load_episodes_jsonl(_read_file(args.episodes))
    stats = learn.count_associations(episodes)
    proposals = learn.propose_rules(
        stats,
        theta_pos=args.theta_pos,
        theta_neg=args.theta_neg,
        theta_ctx=args.theta_ctx,
        min_support=args.min_support,
        k=args.top_k,
        include_duals=args.dual,
    )
    evidence = [
        {
            "rule": str(p.rule),
            "dual": str(p.dual) if p.dual else None,
            "kind": p.kind,
            "evidence": p.evidence.to_json(),
        }
        for p in proposals
    ]
    text_lines = []
    for p in proposals:
        text_lines.append(str(p.rule))
        if p.dual is not None:
            text_lines.append(str(p.dual))
    text = "\n".join(text_lines) + ("\n" if text_lines else "")
    if args.json:
        print(json.dumps(evidence, indent=2), file=out)
    else:
        out.write(text)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as handle:
            handle.write(text)
        with open(args.emit + ".evidence.json", "w", encoding="utf-8") as handle:
            json.dump(evidence, handle, indent=2)
            handle.write("\n")
    return 0


# ---------------------------------------------------------------------------
# Parser wiring and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="ig",
        description="Compile rule programs into logic-gate activation networks"
        " and evaluate them digitally, probabilistically, or as concept vectors.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name: str, func, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        return p

    p = add("parse", _cmd_parse, "parse a program and report its statements")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")

    p = add("format", _cmd_format, "print the canonical text form")
    p.add_argument("file")

    p = add("ground", _cmd_ground, "instantiate variables over the domain")
    p.add_argument("file")
    p.add_argument("--max-ground", type=int, default=grounding.MAX_GROUND_RULES)

    p = add("compile", _cmd_compile, "compile to a gate network")
    p.add_argument("file")
    p.add_argument("--dot", metavar="PATH", help="write Graphviz DOT to PATH")
    p.add_argument("--max-ground", type=int, default=grounding.MAX_GROUND_RULES)

    p = add("complete", _cmd_complete, "rewrite constraints into rule families")
    p.add_argument("file")

    p = add("models", _cmd_models, "enumerate all consistent models")
    p.add_argument("file")
    p.add_argument("--classical", action="store_true",
                   help="add exactly-one choices over every free atom")
    p.add_argument("--max-choices", type=int, default=None)
    p.add_argument("--max-ground", type=int, default=grounding.MAX_GROUND_RULES)
    p.add_argument("--json", action="store_true", help="one JSON object per model")

    p = add("eval", _cmd_eval, "propagate once and print atom values")
    p.add_argument("file")
    p.add_argument("--set", metavar="ATOM=BOOL,...", default="")
    p.add_argument("--max-ground", type=int, default=grounding.MAX_GROUND_RULES)

    p = add("classify", _cmd_classify, "label rules by form and mechanism")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")

    p = add("prob", _cmd_prob, "query a probability over weighted worlds")
    p.add_argument("file")
    p.add_argument("--query", required=True, metavar="LITERAL")
    p.add_argument("--given", metavar="LITERALS", default="")
    p.add_argument("--max-switches", type=int, default=prob.MAX_SWITCHES)

    p = add("formulas", _cmd_formulas, "evaluate the six dependency forms")
    p.add_argument("--table", required=True, metavar="PATH")
    p.add_argument("--form", type=int, choices=range(1, 7))
    p.add_argument("--compare", action="store_true",
                   help="report per-form deviation from the exact conditional")
    p.add_argument("--json", action="store_true")

    p = add("vec", _cmd_vec, "concept-vector operations over a JSON file")
    vec_sub = p.add_subparsers(dest="vec_op", metavar="OP", required=True)
    for op in ("merge", "contrast", "fuse", "detach"):
        vp = vec_sub.add_parser(op)
        vp.add_argument("--vectors", required=True, metavar="PATH")
        vp.set_defaults(func=_cmd_vec)
        if op == "merge":
            vp.add_argument("--parts", required=True, metavar="NAMES")
        elif op == "contrast":
            vp.add_argument("--target", required=True)
            vp.add_argument("--dictionary", required=True, metavar="NAMES")
            vp.add_argument("--max-steps", type=int, default=None)
        elif op == "fuse":
            vp.add_argument("--pair", required=True, metavar="A,B")
        else:
            vp.add_argument("--center", required=True)
            vp.add_argument("--extent", required=True)
            vp.add_argument("--direction", required=True, metavar="D1,D2,...")

    p = add("learn", _cmd_learn, "propose rules from co-activation episodes")
    p.add_argument("episodes", metavar="EPISODES.jsonl")
    p.add_argument("--theta-pos", type=float, default=1.0)
    p.add_argument("--theta-neg", type=float, default=-1.0)
    p.add_argument("--theta-ctx", type=float, default=0.7)
    p.add_argument("--min-support", type=int, default=5)
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--dual", action="store_true",
                   help="also emit the descriptive dual of each compound")
    p.add_argument("--emit", metavar="PATH",
                   help="write proposals to PATH and evidence to PATH.evidence.json")
    p.add_argument("--json", action="store_true")

    return parser


def _dispatch(argv: Sequence[str], out, err) -> int:
    parser = _build_parser()
    try:
        with redirect_stdout(out), redirect_stderr(err):
            args = parser.parse_args(list(argv))
    except _UsageError as exc:
        print(f"ig: {exc}", file=err)
        return 1
    except SystemExit as exc:  # --help and --version exit through here
        return int(exc.code or 0)
    if not getattr(args, "func", None):
        print("ig: a subcommand is required (see ig --help)", file=err)
        return 1
    try:
        return args.func(args, out)
    except _UsageError as exc:
        print(f"ig: {exc}", file=err)
        return 1
    except IgateError as exc:
        print(f"ig: {exc}", file=err)
        return 2
    except Exception as exc:  # malformed input must never crash the CLI
        print(f"ig: {type(exc).__name__}: {exc}", file=err)
        return 2


def dispatch(argv: Sequence[str]) -> tuple[int, str]:
    """Run one invocation in-process; returns (exit code, stdout text)."""
    out, err = io.StringIO(), io.StringIO()
    code = _dispatch(argv, out, err)
    return code, out.getvalue()


def main(argv: Sequence[str] | None = None) -> int:
    return _dispatch(
        sys.argv[1:] if argv is None else argv, sys.stdout, sys.stderr
    )


if __name__ == "__main__":
    sys.exit(main())
