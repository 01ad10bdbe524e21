"""Pipeline steps: parsing, schema dry-run, and execution.

A pipeline is a ``|``-separated list of steps such as::

    load data.csv | filter `Zip Code` > 20000 | sort Values:desc | out json

Each step is a name followed by positional tokens and ``key=value`` options.
Every step can check an evolving schema of ``(name, type)`` pairs before any
data flows; a ``None`` type means "not known yet" and skips type checks.
"""

from __future__ import annotations

import json
import math
import os
import shlex
import tempfile
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .. import ops
from ..coltype import ColType, format_value
from ..errors import ArgumentError, FrameError, FrameTypeError, LookupFrameError, SchemaError
from ..frame import Frame, Series
from ..io import CsvOptions, format_csv, from_csv, from_web, read_csv_header
from ..stats import centered_moving_average, describe, moving_average
from ..tsa import StlParams, decomposition_to_frame, embed, ssa_decompose, ssa_reconstruct, stl_decompose
from .filterexpr import parse_filter, type_literal

Schema = list  # list[tuple[str, ColType | None]]


class PipelineSyntaxError(FrameError, ValueError):
    pass


class StepError(FrameError):
    """Wraps a module error with the pipeline step it came from."""

    def __init__(self, step: "Step", cause: Exception):
        self.step = step
        self.cause = cause
        super().__init__(f"step {step.number} ({step.name}): {type(cause).__name__}: {cause}")


def split_steps(text: str) -> list[str]:
    """Split on ``|`` outside quotes and back-quotes."""
    out, buf, quote = [], [], None
    for ch in text:
        if quote:
            buf.append(ch)
            if ch == quote:
                quote = None
        elif ch in "\"'`":
            quote = ch
            buf.append(ch)
        elif ch == "|":
            out.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    if quote:
        raise PipelineSyntaxError(f"unterminated {quote} in pipeline")
    out.append("".join(buf).strip())
    return [s for s in out if s]


def read_pipe_file(path: str) -> list[str]:
    """One step per line; blank lines and ``#`` comments are ignored."""
    steps = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                steps.append(line)
    return steps


def is_url(source: str) -> bool:
    return source.lower().startswith(("http://", "https://"))


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ArgumentError(f"expected a boolean, got {text!r}")


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except (TypeError, ValueError):
        raise ArgumentError(f"{what} must be an integer, got {text!r}") from None


def _names(text: str) -> list[str]:
    return [n.strip() for n in text.split(",") if n.strip()]


# ---------------------------------------------------------------------------
# steps


@dataclass
class Step:
    name: str
    raw: str  # text after the step name
    args: list[str] = field(default_factory=list)
    opts: dict[str, str] = field(default_factory=dict)
    number: int = 0

    analysis = False

    @classmethod
    def parse(cls, text: str, number: int) -> "Step":
        head, _, rest = text.strip().partition(" ")
        name = head.lower()
        kind = STEPS.get(name)
        if kind is None:
            raise PipelineSyntaxError(f"step {number}: unknown step {head!r}")
        step = kind(name, rest.strip(), number=number)
        if kind.tokenized:
            try:
                # back-quoted names tokenize like double-quoted ones
                tokens = shlex.split(step.raw.replace("`", '"'))
            except ValueError as exc:
                raise PipelineSyntaxError(f"step {number} ({name}): {exc}") from None
            for tok in tokens:
                key, eq, value = tok.partition("=")
                if eq and key.isidentifier():
                    step.opts[key.lower()] = value
                else:
                    step.args.append(tok)
        try:
            step.validate_args()
        except FrameError as exc:
            raise PipelineSyntaxError(f"step {number} ({name}): {type(exc).__name__}: {exc}") from None
        return step

    tokenized = True

    def opt(self, key, default=None):
        return self.opts.get(key, default)

    def require(self, key) -> str:
        if key not in self.opts:
            raise ArgumentError(f"{self.name} needs {key}=...")
        return self.opts[key]

    def validate_args(self) -> None:
        pass

    def check(self, schema: Schema, ctx: "Context") -> Schema:
        return schema

    def apply(self, frame: Frame, ctx: "Context") -> Frame:
        raise NotImplementedError


STEPS: dict[str, type[Step]] = {}


def step(*names):
    def register(cls):
        for n in names:
            STEPS[n] = cls
        return cls

    return register


def _lookup(schema: Schema, name: str) -> Optional[ColType]:
    for n, t in schema:
        if n == name:
            return t
    raise LookupFrameError(f"unknown column {name!r}")


def _numeric(schema: Schema, name: str) -> None:
    t = _lookup(schema, name)
    if t is not None and not t.is_numeric:
        raise FrameTypeError(f"column {name!r} is {t.value}, not numeric")


@step("load")
class Load(Step):
    def validate_args(self):
        if len(self.args) != 1:
            raise ArgumentError("load takes exactly one path or URL")


@step("out")
class Out(Step):
    def validate_args(self):
        if not 1 <= len(self.args) <= 2 or self.args[0].lower() not in ("csv", "json"):
            raise ArgumentError("out takes a format (csv|json) and an optional path")


@step("head", "tail")
class HeadTail(Step):
    def validate_args(self):
        self.count = _int(self.args[0] if self.args else self.opt("n", "5"), f"{self.name} count")
        if self.count < 0:
            raise ArgumentError(f"{self.name} count must be >= 0")

    def apply(self, frame, ctx):
        return frame.head(self.count) if self.name == "head" else frame.tail(self.count)


@step("select")
class Select(Step):
    def validate_args(self):
        self.cols = [c for a in self.args for c in _names(a)]
        if not self.cols:
            raise ArgumentError("select needs at least one column")

    def check(self, schema, ctx):
        return [(c, _lookup(schema, c)) for c in self.cols]

    def apply(self, frame, ctx):
        return frame.select(cols=self.cols)


@step("filter", "remove")
class Filter(Step):
    tokenized = False

    def validate_args(self):
        text = self.raw
        if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'" and text.count(text[0]) == 2:
            text = text[1:-1]
        if not text:
            raise ArgumentError(f"{self.name} needs an expression")
        self.expr_text = text

    def check(self, schema, ctx):
        parse_filter(self.expr_text, schema)
        return schema

    def apply(self, frame, ctx):
        pred = parse_filter(self.expr_text, frame.schema())
        return ops.filter(frame, pred) if self.name == "filter" else ops.remove_rows(frame, pred)


@step("sort")
class Sort(Step):
    def validate_args(self):
        self.keys = []
        for item in (c for a in self.args for c in _names(a)):
            name, _, direction = item.rpartition(":") if ":" in item else (item, "", "asc")
            if direction.lower() not in ("asc", "desc"):
                raise ArgumentError(f"sort direction must be asc or desc, got {direction!r}")
            self.keys.append((name, direction.lower() == "asc"))
        if not self.keys:
            raise ArgumentError("sort needs at least one key")

    def check(self, schema, ctx):
        for name, _ in self.keys:
            _lookup(schema, name)
        return schema

    def apply(self, frame, ctx):
        return ops.sort_by(frame, self.keys)


def _agg_items(text: str) -> list[tuple[str, ops.AggOp]]:
    items = []
    for item in _names(text):
        col, sep, op = item.rpartition(":")
        if not sep:
            raise ArgumentError(f"aggregate entry must be column:op, got {item!r}")
        try:
            items.append((col, ops.AggOp(op.lower())))
        except ValueError:
            raise ArgumentError(f"unknown aggregate {op!r}") from None
    return items


@step("group")
class Group(Step):
    def validate_args(self):
        keys = self.opt("keys") or (self.args[0] if self.args else "")
        self.keys = _names(keys)
        if not 1 <= len(self.keys) <= 3:
            raise ArgumentError("group takes one to three key columns")
        self.aggs = _agg_items(self.require("agg"))

    def check(self, schema, ctx):
        out = [(k, _lookup(schema, k)) for k in self.keys]
        for col, op in self.aggs:
            t = _lookup(schema, col)
            if t is not None:
                ops.check_agg(op, t, col)
            out.append((f"{col}_{op.value}", None if t is None else op.result_type(t)))
        return out

    def apply(self, frame, ctx):
        return ops.group_aggregate(ops.group_by(frame, self.keys), self.aggs)


@step("rolling")
class Rolling(Step):
    def validate_args(self):
        self.keys = _names(self.require("keys"))
        if not 1 <= len(self.keys) <= 3:
            raise ArgumentError("rolling takes one to three key columns")
        self.col = self.require("col")
        self.window = _int(self.require("window"), "window")
        try:
            self.op = ops.AggOp(self.opt("op", "mean").lower())
        except ValueError:
            raise ArgumentError(f"unknown aggregate {self.opt('op')!r}") from None

    def check(self, schema, ctx):
        for k in self.keys:
            _lookup(schema, k)
        t = _lookup(schema, self.col)
        if t is not None:
            ops.check_agg(self.op, t, self.col)
        return [*schema, (f"{self.col}_rolling_{self.op.value}", None if t is None else self.op.result_type(t))]

    def apply(self, frame, ctx):
        return ops.group_rolling(ops.group_by(frame, self.keys), self.col, self.window, self.op)


@step("join")
class Join(Step):
    def validate_args(self):
        if len(self.args) != 1:
            raise ArgumentError("join takes one right-hand source")
        self.source = self.args[0]
        self.on = _names(self.require("on"))
        kind = self.opt("kind", "inner").lower()
        if kind not in ("inner", "left"):
            raise ArgumentError(f"join kind must be inner or left, got {kind!r}")
        self.kind = ops.JoinKind(kind)
        self.csv = CsvOptions(sep=self.opt("sep", ","))

    def right_schema(self, ctx) -> Schema:
        right = ctx.loaded.get(self.number)
        if right is not None:
            return right.schema()
        if is_url(self.source):
            return self.load(ctx).schema()
        return [(n, None) for n in read_csv_header(self.source, self.csv)]

    def check(self, schema, ctx):
        rschema = self.right_schema(ctx)
        rtypes = dict(rschema)
        for k in self.on:
            lt = _lookup(schema, k)
            if k not in rtypes:
                raise LookupFrameError(f"unknown column {k!r} in join source")
            rt = rtypes[k]
            if lt is not None and rt is not None and lt is not rt and not (lt.is_string and rt.is_string):
                raise SchemaError(f"join key {k!r} is {lt.value} on the left but {rt.value} on the right")
        out = list(schema)
        taken = {n for n, _ in schema}
        for n, t in rschema:
            if n in self.on:
                continue
            name = n if n not in taken else f"{n}_2"
            taken.add(name)
            out.append((name, t))
        return out

    def load(self, ctx):
        if self.number not in ctx.loaded:
            src = self.source
            ctx.loaded[self.number] = from_web(src, self.csv) if is_url(src) else from_csv(src, self.csv)
        return ctx.loaded[self.number]

    def apply(self, frame, ctx):
        return ops.join(frame, self.load(ctx), self.on, self.kind)


@step("fillna")
class FillNa(Step):
    def validate_args(self):
        if len(self.args) < 2:
            raise ArgumentError("fillna takes a column and a strategy (constant|mean|median|ffill)")
        self.col, self.strategy = self.args[0], self.args[1].lower()
        if self.strategy not in ops.FILL_STRATEGIES:
            raise ArgumentError(f"unknown fill strategy {self.strategy!r}")
        if self.strategy == "constant":
            self.value = self.opt("value", self.args[2] if len(self.args) > 2 else None)
            if self.value is None:
                raise ArgumentError("constant fill needs value=...")

    def _typed_value(self, t):
        return type_literal(self.value, False, t, self.col, "==")

    def check(self, schema, ctx):
        t = _lookup(schema, self.col)
        if self.strategy in ("mean", "median"):
            _numeric(schema, self.col)
            if t is not None and t.is_integer:
                return [(n, ColType.DD if n == self.col else tt) for n, tt in schema]
        if self.strategy == "constant" and t is not None:
            self._typed_value(t)
        return schema

    def apply(self, frame, ctx):
        value = self._typed_value(frame.col_type(self.col)) if self.strategy == "constant" else None
        return ops.fill_missing(frame, self.col, self.strategy, value)


@step("dropna")
class DropNa(Step):
    def validate_args(self):
        self.how = (self.args[0] if self.args else self.opt("how", "any")).lower()
        if self.how not in ("any", "all"):
            raise ArgumentError(f"dropna mode must be any or all, got {self.how!r}")
        cols = self.opt("cols")
        self.subset = _names(cols) if cols else None

    def check(self, schema, ctx):
        for c in self.subset or []:
            _lookup(schema, c)
        return schema

    def apply(self, frame, ctx):
        return ops.drop_missing(frame, self.how, self.subset)


# -- analysis steps (terminal) ----------------------------------------------


class Analysis(Step):
    analysis = True

    def column(self, schema) -> Optional[str]:
        """The analysed column; ``None`` while the schema types are still unknown."""
        col = self.opt("col") or (self.args[0] if self.args else None)
        if col is not None:
            _numeric(schema, col)
            return col
        if any(t is None for _, t in schema):
            return None
        numeric = [n for n, t in schema if t.is_numeric]
        if len(numeric) == 1:
            return numeric[0]
        raise ArgumentError(f"{self.name} needs col=... (numeric columns: {numeric})")

    def series(self, frame) -> Series:
        return frame.to_series(self.column(frame.schema()))


@step("describe")
class Describe(Analysis):
    def validate_args(self):
        cols = self.opt("cols")
        self.cols = _names(cols) if cols else None

    def check(self, schema, ctx):
        for c in self.cols or []:
            _numeric(schema, c)
        return [("column", ColType.STR), ("count", ColType.I64)] + [
            (k, ColType.DD) for k in ("mean", "std", "min", "q25", "median", "q75", "max")
        ]

    def apply(self, frame, ctx):
        cols = self.cols or [n for n, t in frame.schema() if t.is_numeric]
        rows = {k: [] for k in ("column", "count", "mean", "std", "min", "q25", "median", "q75", "max")}
        for c in cols:
            d = describe(frame.to_series(c)).as_dict()
            rows["column"].append(c)
            for k, v in d.items():
                rows[k].append(v)
        types = [ColType.STR, ColType.I64] + [ColType.DD] * 7
        return Frame(list(rows), types, list(rows.values()))


@step("ma")
class MovingAverage(Analysis):
    def validate_args(self):
        self.window = _int(self.require("window"), "window")
        self.centered = _bool(self.opt("centered", "false"))

    def check(self, schema, ctx):
        self.column(schema)
        return [("label", None), ("observed", ColType.DD), ("ma", ColType.DD)]

    def apply(self, frame, ctx):
        s = self.series(frame)
        ma = centered_moving_average(s, self.window) if self.centered else moving_average(s, self.window)
        # re-align the shrunken output to the input labels
        start = s.index.index(ma.index[0]) if len(ma) else len(s)
        values = [None] * start + list(ma.values) + [None] * (len(s) - start - len(ma))
        return decomposition_to_frame(s, {"ma": Series(s.index, "ma", values, ColType.DD)})


@step("stl")
class Stl(Analysis):
    def validate_args(self):
        kw = {"period": _int(self.require("period"), "period"), "robust": _bool(self.opt("robust", "false"))}
        for key in ("seasonal", "trend", "lowpass", "inner", "outer"):
            if key in self.opts:
                kw[key] = _int(self.opts[key], key)
        self.params = StlParams(**kw)
        self.params.resolved()

    def check(self, schema, ctx):
        self.column(schema)
        return [("label", None), ("observed", None)] + [(k, ColType.DD) for k in ("trend", "seasonal", "remainder")]

    def apply(self, frame, ctx):
        s = self.series(frame)
        return decomposition_to_frame(s, stl_decompose(s, self.params))


@step("ssa")
class Ssa(Analysis):
    def validate_args(self):
        self.window = _int(self.opts["window"], "window") if "window" in self.opts else None
        groups = self.opt("groups", "0")
        try:
            self.groups = [[int(i) for i in g.split(",") if i.strip()] for g in groups.split(";")]
        except ValueError:
            raise ArgumentError(f"groups must look like 0,1;2,3, got {groups!r}") from None

    def check(self, schema, ctx):
        self.column(schema)
        return [("label", None), ("observed", None)] + [(f"group{j}", ColType.DD) for j in range(len(self.groups))]

    def apply(self, frame, ctx):
        s = self.series(frame)
        model = ssa_decompose(s, self.window)
        return decomposition_to_frame(s, ssa_reconstruct(model, self.groups))


@step("embed")
class Embed(Analysis):
    def validate_args(self):
        self.lag = _int(self.require("lag"), "lag")
        if self.lag < 1:
            raise ArgumentError("lag must be >= 1")

    def check(self, schema, ctx):
        col = self.column(schema)
        t = None if col is None else _lookup(schema, col)
        return [(f"t-{k}", t) for k in range(self.lag, 0, -1)] + [("t", t)]

    def apply(self, frame, ctx):
        return embed(self.series(frame), self.lag)


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class Context:
    loaded: dict = field(default_factory=dict)


@dataclass
class PipelineSpec:
    source: Optional[str]
    options: CsvOptions
    steps: list[Step]
    output: Optional[str] = None
    fmt: str = "csv"

    @classmethod
    def build(cls, source, options, step_texts: Sequence[str], output=None, fmt=None) -> "PipelineSpec":
        steps = []
        number = 0
        for k, text in enumerate(step_texts):
            is_load = text.strip().lower().startswith("load ") and k == 0
            s = Step.parse(text, 0 if is_load else number + 1)
            if not is_load:
                number += 1
            steps.append(s)
        if steps and steps[0].name == "load":
            if source is not None:
                raise ArgumentError("give the source either with --source or a load step, not both")
            source = steps.pop(0).args[0]
        for s in steps[1:]:
            if s.name == "load":
                raise ArgumentError(f"step {s.number}: load must be the first step")
        out_steps = [s for s in steps if s.name == "out"]
        if out_steps:
            if out_steps[-1] is not steps[-1] or len(out_steps) > 1:
                raise ArgumentError("out must be the last step")
            o = steps.pop()
            fmt = fmt or o.args[0].lower()
            if len(o.args) > 1:
                if output is not None and output != o.args[1]:
                    raise ArgumentError("output path given twice")
                output = o.args[1]
        analyses = [s for s in steps if s.analysis]
        if analyses and analyses[-1] is not steps[-1] or len(analyses) > 1:
            raise ArgumentError("at most one analysis step, and it must come last")
        if source is None:
            raise ArgumentError("no source: pass --source or start the pipe with load")
        fmt = (fmt or "csv").lower()
        if fmt not in ("csv", "json"):
            raise ArgumentError(f"unknown output format {fmt!r}")
        return cls(source, options, steps, output, fmt)

    def initial_schema(self) -> Schema:
        """Column names from the header only (types if given explicitly)."""
        if is_url(self.source):
            return []
        names = read_csv_header(self.source, self.options)
        types = self.options.explicit_types or [None] * len(names)
        return list(zip(names, types))

    def dry_run(self, schema: Schema, ctx: Context) -> Schema:
        for s in self.steps:
            try:
                schema = s.check(schema, ctx)
            except FrameError as exc:
                raise StepError(s, exc) from exc
        return schema

    def load(self) -> Frame:
        if is_url(self.source):
            return from_web(self.source, self.options)
        return from_csv(self.source, self.options)

    def execute(self, frame: Frame, ctx: Context) -> Frame:
        for s in self.steps:
            try:
                frame = s.apply(frame, ctx)
            except FrameError as exc:
                raise StepError(s, exc) from exc
        return frame


# ---------------------------------------------------------------------------
# output


def _json_value(v, t: ColType) -> str:
    if v is None:
        return "null"
    if t is ColType.I2:
        return "true" if v else "false"
    if t.is_numeric:
        if isinstance(v, float) and not math.isfinite(v):
            return "null"
        return format_value(v, t)
    return json.dumps(format_value(v, t), ensure_ascii=False)


def format_json(frame: Frame) -> str:
    keys = [json.dumps(n, ensure_ascii=False) for n in frame.columns]
    lines = []
    for rec in frame.records():
        body = ", ".join(f"{k}: {_json_value(v, t)}" for k, v, t in zip(keys, rec, frame.types))
        lines.append("{" + body + "}")
    if not lines:
        return "[]\n"
    return "[\n" + ",\n".join(lines) + "\n]\n"


def render(frame: Frame, fmt: str, options: CsvOptions | None = None) -> str:
    if fmt == "json":
        return format_json(frame)
    return format_csv(frame, CsvOptions(sep=options.sep) if options else None)


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tabframe-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
