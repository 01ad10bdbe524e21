"""Command-line pipeline driver.

Exit status: 0 on success, 1 when loading or a step fails, 2 for usage
errors and for pipelines that ``--dry-run`` rejects against the schema.
"""

from __future__ import annotations

import argparse
import logging
import sys

from ..coltype import ColType
from ..errors import FrameError
from ..io import CsvOptions
from .pipeline import Context, PipelineSpec, StepError, is_url, read_pipe_file, render, split_steps, write_atomic

log = logging.getLogger("tabframe")

EXIT_OK, EXIT_PIPELINE, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tabframe",
        description="Load a CSV file or URL, run a |-separated chain of steps, write CSV or JSON.",
    )
    p.add_argument("--source", help="input CSV path or http(s) URL (or start the pipe with 'load')")
    p.add_argument("--sep", default=",", help="field separator (default ',')")
    p.add_argument("--no-header", action="store_true", help="input has no header row; columns become C0..Cn-1")
    p.add_argument("--types", help="comma-separated column types, e.g. I32,STR,DD (skips inference)")
    steps = p.add_mutually_exclusive_group()
    steps.add_argument("--pipe", default="", help='steps, e.g. "filter ID > 1 | sort Values:desc | head 5"')
    steps.add_argument("--pipe-file", help="file with one step per line; '#' starts a comment")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    p.add_argument("--dry-run", action="store_true", help="validate the pipeline against the header and stop")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _fail(code: int, message: str) -> int:
    print(f"tabframe: error: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    try:
        types = [ColType.parse(t) for t in args.types.split(",")] if args.types else None
        options = CsvOptions(sep=args.sep, has_header=not args.no_header, explicit_types=types)
        step_texts = read_pipe_file(args.pipe_file) if args.pipe_file else split_steps(args.pipe)
        spec = PipelineSpec.build(args.source, options, step_texts, args.out, args.format)
    except (FrameError, ValueError, OSError) as exc:
        return _fail(EXIT_USAGE, f"{type(exc).__name__}: {exc}")

    ctx = Context()
    # a schema rejection is a usage error under --dry-run, a pipeline error otherwise
    rejected = EXIT_USAGE if args.dry_run else EXIT_PIPELINE
    # header-only check before any data row is read
    if not is_url(spec.source):
        try:
            schema = spec.initial_schema()
        except (FrameError, OSError) as exc:
            return _fail(EXIT_PIPELINE, f"step 0 (load): {type(exc).__name__}: {exc}")
        try:
            spec.dry_run(schema, ctx)
        except StepError as exc:
            return _fail(rejected, str(exc))
        if args.dry_run:
            log.info("dry run passed against header of %s", spec.source)
            return EXIT_OK

    try:
        frame = spec.load()
    except (FrameError, OSError) as exc:
        return _fail(EXIT_PIPELINE, f"step 0 (load): {type(exc).__name__}: {exc}")
    log.info("loaded %d rows x %d columns from %s", frame.row_count, frame.col_count, spec.source)

    try:
        spec.dry_run(frame.schema(), ctx)
    except StepError as exc:
        return _fail(rejected, str(exc))
    if args.dry_run:
        return EXIT_OK

    try:
        result = spec.execute(frame, ctx)
    except StepError as exc:
        return _fail(EXIT_PIPELINE, str(exc))

    text = render(result, spec.fmt, options)
    if spec.output in (None, "-"):
        sys.stdout.write(text)
        return EXIT_OK
    try:
        write_atomic(spec.output, text)
    except OSError as exc:
        return _fail(EXIT_PIPELINE, f"writing {spec.output}: {exc}")
    log.info("wrote %d rows to %s", result.row_count, spec.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
