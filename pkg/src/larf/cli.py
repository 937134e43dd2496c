"""Command-line entry point for the whole pipeline.

Exit codes: 0 success, 2 usage error, 3 success but the annotator fell
back to plain text, 4 transport/auth failure, 5 other runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .annotator import PromptMode, PromptSpec, annotate, offline_annotate
from .bionic import VALID_SACCADES, BionicParams, bionic_format
from .errors import AuthError, EmptyInput, LarfError, TransportError
from .llm import LLMConfig
from .markup import verify_text
from .model import AnnotatedDocument, AnnotationKind
from .render import RenderStyle, Theme, render_html, render_terminal
from .scorer import score as run_score
from .service import DEFAULT_LISTEN_ADDR, ENV_LISTEN_ADDR, create_app, parse_listen_addr

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FALLBACK = 3
EXIT_TRANSPORT = 4
EXIT_RUNTIME = 5


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_output(path: str, content: str) -> None:
    if path == "-":
        sys.stdout.write(content)
        if content and not content.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(content)


def _style_from_args(args: argparse.Namespace) -> RenderStyle:
    return RenderStyle(
        font_scale=args.font_scale,
        letter_spacing=args.letter_spacing,
        line_spacing=args.line_spacing,
        highlight_token=args.highlight,
        theme=Theme(args.theme),
    )


def _format_document(doc: AnnotatedDocument, fmt: str, style: RenderStyle) -> str:
    if fmt == "json":
        return json.dumps(doc.to_json(), ensure_ascii=False)
    if fmt == "ansi":
        return render_terminal(doc)
    return render_html(doc, style)


def _add_style_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--font-scale", type=float, default=1.0)
    parser.add_argument("--letter-spacing", type=float, default=0.0, metavar="EM")
    parser.add_argument("--line-spacing", type=float, default=1.5)
    parser.add_argument("--highlight", default="yellow", help="named highlight style")
    parser.add_argument("--theme", choices=["light", "dark"], default="light")


def _add_io_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", nargs="?", default="-", help="input file, or - for stdin")
    parser.add_argument("--out", default="-", help="output file, or - for stdout")


def _parse_category(raw: str) -> tuple[str, AnnotationKind]:
    description, sep, tag = raw.rpartition("=")
    if not sep or not description:
        raise argparse.ArgumentTypeError(
            f"category must be 'description=tag' with tag in strong/mark/u, got {raw!r}"
        )
    try:
        return description, AnnotationKind.from_tag(tag)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="larf",
        description="Annotate text for easier reading: LLM annotations, "
        "Bionic Reading baseline, HTML rendering, answer scoring.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_annotate = sub.add_parser("annotate", help="annotate text via LLM or offline rules")
    _add_io_args(p_annotate)
    p_annotate.add_argument("--mode", choices=["default", "custom", "offline"], default="default")
    p_annotate.add_argument(
        "--category",
        action="append",
        type=_parse_category,
        default=[],
        metavar="DESC=TAG",
        help="custom-mode category; repeatable, tag is strong, mark, or u",
    )
    p_annotate.add_argument("--format", choices=["html", "json", "ansi"], default="html")
    p_annotate.add_argument("--temperature", type=float, default=0.0)
    p_annotate.add_argument("--max-output-tokens", type=int, default=2048)
    p_annotate.add_argument("--log", help="write job detail (report, raw replies) to this JSON file")
    _add_style_args(p_annotate)

    p_bionic = sub.add_parser("bionic", help="apply the Bionic Reading baseline")
    _add_io_args(p_bionic)
    p_bionic.add_argument("--fixation", type=int, choices=range(1, 6), default=3)
    p_bionic.add_argument("--saccade", type=int, choices=VALID_SACCADES, default=10)
    p_bionic.add_argument("--format", choices=["html", "json", "ansi"], default="html")
    _add_style_args(p_bionic)

    p_render = sub.add_parser("render", help="render a JSON document to HTML or ANSI")
    _add_io_args(p_render)
    p_render.add_argument("--format", choices=["html", "ansi"], default="html")
    _add_style_args(p_render)

    p_score = sub.add_parser("score", help="rate answers against an article (0-10)")
    p_score.add_argument("--article", required=True, help="article text file")
    p_score.add_argument("--answers", required=True, help="answers file: one per line, or JSONL with an 'answer' field")
    p_score.add_argument("--out", default="-", help="output JSONL file, or - for stdout")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument(
        "--addr",
        default=os.environ.get(ENV_LISTEN_ADDR, DEFAULT_LISTEN_ADDR),
        help="host:port to listen on",
    )

    return parser


def _cmd_annotate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.mode == "custom" and not args.category:
        parser.error("custom mode requires at least one --category")
    text = _read_input(args.input)

    if args.mode == "offline":
        doc = offline_annotate(text)
        report = verify_text(text, doc.text)
        fallback_used = False
        raw_replies: tuple[str, ...] = ()
    else:
        spec = PromptSpec(
            mode=PromptMode(args.mode),
            categories=tuple(args.category),
            temperature=args.temperature,
            max_output_tokens=args.max_output_tokens,
        )
        result = annotate(text, spec, LLMConfig.from_env())
        doc, report = result.document, result.report
        fallback_used, raw_replies = result.fallback_used, result.raw_replies

    _write_output(args.out, _format_document(doc, args.format, _style_from_args(args)))
    if args.log:
        detail = {
            "report": report.to_json(),
            "fallback_used": fallback_used,
            "raw_replies": list(raw_replies),
            "document": doc.to_json(),
        }
        with open(args.log, "w", encoding="utf-8") as handle:
            json.dump(detail, handle, ensure_ascii=False, indent=2)
    if fallback_used:
        print("warning: annotations failed verification; plain text returned", file=sys.stderr)
        return EXIT_FALLBACK
    return EXIT_OK


def _cmd_bionic(args: argparse.Namespace) -> int:
    text = _read_input(args.input)
    doc = bionic_format(text, BionicParams(fixation=args.fixation, saccade=args.saccade))
    _write_output(args.out, _format_document(doc, args.format, _style_from_args(args)))
    return EXIT_OK


def _cmd_render(args: argparse.Namespace) -> int:
    doc = AnnotatedDocument.from_json(json.loads(_read_input(args.input)))
    style = _style_from_args(args)
    content = render_terminal(doc) if args.format == "ansi" else render_html(doc, style)
    _write_output(args.out, content)
    return EXIT_OK


def _iter_answers(path: str) -> list[str]:
    answers = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            if line.startswith("{"):
                answers.append(str(json.loads(line)["answer"]))
            else:
                answers.append(line)
    return answers


def _cmd_score(args: argparse.Namespace) -> int:
    article = _read_input(args.article)
    config = LLMConfig.from_env()
    lines = []
    for answer in _iter_answers(args.answers):
        result = run_score(article, answer, config)
        lines.append(json.dumps(result.to_json(), ensure_ascii=False))
    _write_output(args.out, "\n".join(lines) + ("\n" if lines else ""))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    host, port = parse_listen_addr(args.addr)
    uvicorn.run(create_app(), host=host, port=port, log_level="info")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "annotate":
            return _cmd_annotate(args, parser)
        if args.command == "bionic":
            return _cmd_bionic(args)
        if args.command == "render":
            return _cmd_render(args)
        if args.command == "score":
            return _cmd_score(args)
        if args.command == "serve":
            return _cmd_serve(args)
        parser.error(f"unknown command {args.command!r}")
    except (TransportError, AuthError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except (EmptyInput, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LarfError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
