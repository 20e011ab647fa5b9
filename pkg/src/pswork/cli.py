"""Command-line interface.

Check commands exit 0 when the criterion holds, 2 when it fails, 3 when the
result is inconclusive; parse and validation problems exit 1.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fixtures  # noqa: F401  (re-exported convenience for scripts)
from .criterion import Summary, check_cartesian_closed, check_left_adjoint
from .errors import ParseError, ValidationError, WorkbenchError
from .formats import (
    BaseBinding,
    ModelBinding,
    NamedMorphism,
    NamedPresheaf,
    envelope,
    canonical_json,
    load_document,
    named_from_presheaf,
    parse_document,
    parse_kan_payload,
    parse_morphism_payload,
    parse_presheaf_payload,
    serialize_presheaf,
)
from .gametrace import replay_document
from .kan import lan_apply
from .reflection import reflect

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILS = 2
EXIT_INCONCLUSIVE = 3

_SUMMARY_EXIT = {
    Summary.HOLDS: EXIT_OK,
    Summary.FAILS: EXIT_FAILS,
    Summary.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ParseError(path, str(e)) from None
    except json.JSONDecodeError as e:
        raise ParseError(path, f"invalid JSON: {e}") from None


def _emit(report: dict, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(text)


def _sizes_by_name(sizes: dict, base: BaseBinding) -> dict:
    return {base.object_names[o]: n for o, n in sizes.items()}


def cmd_validate(args) -> int:
    doc = _load_json(args.file)
    parsed = parse_document(doc)
    _emit(
        {"command": "validate", "ok": True, "kind": parsed.kind, "violations": []},
        args.json,
        f"ok: valid {parsed.kind} document",
    )
    return EXIT_OK


def _bind_input_presheaf(input_doc: dict, base: BaseBinding) -> NamedPresheaf:
    if input_doc.get("kind") != "presheaf":
        raise ParseError("$.kind", "input file must be a presheaf document")
    payload = dict(input_doc["payload"])
    own_base = payload.pop("base", None)
    if own_base is not None:
        from .formats import parse_base

        own = parse_base(own_base, "$.payload.base")
        if own.payload != base.payload:
            raise ParseError("$.payload.base", "input presheaf's base differs from the model's")
    return parse_presheaf_payload(payload, base, "$.payload")


def cmd_lan(args) -> int:
    kan_doc = _load_json(args.kan)
    if kan_doc.get("kind") != "kan_model":
        raise ParseError("$.kind", "--kan file must be a kan_model document")
    kb = parse_kan_payload(kan_doc["payload"], "$.payload")
    x = _bind_input_presheaf(_load_json(args.input), kb.source_base)
    result = lan_apply(kb.kan, x.presheaf)
    named = named_from_presheaf(result.presheaf, kb.target_base)
    sizes = _sizes_by_name({o: len(result.presheaf.sets[o]) for o in kb.kan.target.objects},
                           kb.target_base)
    report = {
        "command": "lan",
        "sizes": sizes,
        "presheaf": serialize_presheaf(named),
    }
    _emit(report, args.json, "extension sizes: " + ", ".join(
        f"{k}={v}" for k, v in sizes.items()))
    return EXIT_OK


def cmd_reflect(args) -> int:
    model_doc = _load_json(args.model)
    if model_doc.get("kind") != "model":
        raise ParseError("$.kind", "--model file must be a model document")
    mb = parse_document(model_doc).value
    x = _bind_input_presheaf(_load_json(args.input), mb.base)
    out = reflect(x.presheaf, mb.model, max_steps=args.max_steps)
    named = named_from_presheaf(out.result, mb.base)
    sizes = _sizes_by_name({o: len(out.result.sets[o]) for o in mb.model.base.objects}, mb.base)
    report = {
        "command": "reflect",
        "status": out.status,
        "steps_used": out.steps_used,
        "sizes": sizes,
        "presheaf": serialize_presheaf(named),
    }
    _emit(report, args.json,
          f"{out.status} after {out.steps_used} step(s); sizes: "
          + ", ".join(f"{k}={v}" for k, v in sizes.items()))
    return EXIT_OK if out.converged else EXIT_INCONCLUSIVE


def _criterion_report_json(rep, base: BaseBinding) -> dict:
    return {
        "summary": rep.summary.value,
        "verdicts": [
            {
                "condition": v.condition_index,
                "name": v.condition_name,
                "status": v.status.value,
                "domain_sizes": _sizes_by_name(v.domain_sizes, base),
                "codomain_sizes": _sizes_by_name(v.codomain_sizes, base),
                "guard": v.guard,
                "moves": len(v.trace.steps) if v.trace is not None else None,
            }
            for v in rep.verdicts
        ],
    }


def _criterion_report_text(rep, base: BaseBinding) -> str:
    lines = []
    for v in rep.verdicts:
        dom = sum(v.domain_sizes.values())
        cod = sum(v.codomain_sizes.values())
        extra = f" [{v.guard}]" if v.guard else ""
        lines.append(f"  {v.condition_name}: {v.status.value} ({dom} -> {cod}){extra}")
    lines.append(f"summary: {rep.summary.value}")
    if rep.summary is Summary.FAILS:
        lines.append("note: failure is exact here; inconclusive games are never reported as failures")
    elif rep.summary is Summary.INCONCLUSIVE:
        lines.append("note: the criterion is sufficient-only; this is not a negative verdict")
    return "\n".join(lines)


def cmd_check_la(args) -> int:
    source_doc = _load_json(args.source)
    target_doc = _load_json(args.target)
    for d, flag in ((source_doc, "--source"), (target_doc, "--target")):
        if d.get("kind") != "model":
            raise ParseError("$.kind", f"{flag} file must be a model document")
    source = parse_document(source_doc).value
    target = parse_document(target_doc).value
    kan_doc = _load_json(args.kan)
    if kan_doc.get("kind") != "kan_model":
        raise ParseError("$.kind", "--kan file must be a kan_model document")
    kb = parse_kan_payload(kan_doc["payload"], "$.payload",
                           source_base=source.base, target_base=target.base)
    rep = check_left_adjoint(kb.kan, source.model, target.model,
                             strategy=args.strategy, budget=args.budget)
    report = {"command": "check-la", **_criterion_report_json(rep, target.base)}
    report["exit_code"] = _SUMMARY_EXIT[rep.summary]
    _emit(report, args.json, _criterion_report_text(rep, target.base))
    return _SUMMARY_EXIT[rep.summary]


def cmd_check_cc(args) -> int:
    model_doc = _load_json(args.model)
    if model_doc.get("kind") != "model":
        raise ParseError("$.kind", "--model file must be a model document")
    mb = parse_document(model_doc).value
    rep = check_cartesian_closed(mb.model, strategy=args.strategy, budget=args.budget,
                                 max_elements=args.max_elements)
    objects = {
        mb.base.object_names[o]: _criterion_report_json(r, mb.base)
        for o, r in rep.per_object.items()
    }
    report = {
        "command": "check-cc",
        "summary": rep.summary.value,
        "objects": objects,
        "exit_code": _SUMMARY_EXIT[rep.summary],
    }
    text_lines = []
    for name, obj_rep in zip(objects, rep.per_object.values()):
        text_lines.append(f"object {name}:")
        text_lines.append(_criterion_report_text(obj_rep, mb.base))
    text_lines.append(f"overall: {rep.summary.value}")
    _emit(report, args.json, "\n".join(text_lines))
    return _SUMMARY_EXIT[rep.summary]


def cmd_replay(args) -> int:
    doc = _load_json(args.trace)
    if doc.get("kind") != "trace":
        raise ParseError("$.kind", "--trace file must be a trace document")
    td = parse_document(doc).value
    ok, final, problems = replay_document(td)
    from .reflection import config_digest

    report = {
        "command": "replay",
        "ok": ok,
        "won": final.won() if ok else None,
        "steps": len(td.steps),
        "final_digest": config_digest(final) if ok else None,
        "problems": problems,
    }
    text = (f"replayed {len(td.steps)} step(s): "
            + ("won" if ok and final.won() else ("ok, not won" if ok else "FAILED")))
    if problems:
        text += "\n" + "\n".join(problems)
    _emit(report, args.json, text)
    return EXIT_OK if ok else EXIT_ERROR


def cmd_serve(args) -> int:
    from . import server

    app = server.create_app(ui_dir=args.ui)
    import uvicorn

    print(f"serving on http://{args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def cmd_play(args) -> int:
    from . import server

    model_doc = _load_json(args.model)
    config_doc = _load_json(args.config)
    app = server.create_app(ui_dir=args.ui)
    session_id = server.create_session_from_docs(app.state.store, model_doc, config_doc)
    print(f"session {session_id}")
    if args.ui:
        print(f"open http://{args.host}:{args.port}/?session={session_id}")
    else:
        print(f"API at http://{args.host}:{args.port}/sessions/{session_id}")
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pswork",
        description="Workbench for presheaf models: extensions, reflections, "
                    "and the left-adjointness game.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="parse and validate any workspace document")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("lan", help="apply a Kan model's extension to a presheaf")
    sp.add_argument("--kan", required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_lan)

    sp = sub.add_parser("reflect", help="reflect a presheaf into a model's orthogonal class")
    sp.add_argument("--model", required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--max-steps", type=int, default=100)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_reflect)

    sp = sub.add_parser("check-la", help="run the left-adjointness criterion")
    sp.add_argument("--kan", required=True)
    sp.add_argument("--source", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--strategy", choices=["greedy", "exhaustive"], default="greedy")
    sp.add_argument("--budget", type=int, default=100)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check_la)

    sp = sub.add_parser("check-cc", help="run the cartesian-closure criterion")
    sp.add_argument("--model", required=True)
    sp.add_argument("--strategy", choices=["greedy", "exhaustive"], default="greedy")
    sp.add_argument("--budget", type=int, default=100)
    sp.add_argument("--max-elements", type=int, default=None)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check_cc)

    sp = sub.add_parser("replay", help="replay a trace file and check its digests")
    sp.add_argument("--trace", required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("serve", help="start the session service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8741)
    sp.add_argument("--ui", default=None, help="directory with the built frontend")
    sp.set_defaults(func=cmd_serve)

    sp = sub.add_parser("play", help="start the service with one session preloaded")
    sp.add_argument("--model", required=True)
    sp.add_argument("--config", required=True)
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8741)
    sp.add_argument("--ui", default=None)
    sp.set_defaults(func=cmd_play)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as e:
        print("validation failed:", file=sys.stderr)
        for v in e.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_ERROR
    except ParseError as e:
        print(f"parse error at {e.location}: {e.message}", file=sys.stderr)
        return EXIT_ERROR
    except WorkbenchError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
