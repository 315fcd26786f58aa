"""Text formats for semifield specs and hyperoval candidates.

Spec file::

    # the twisted field plane of order 64
    kind=twisted
    n=6
    modulus=0x43
    i=2
    k=4
    j=g^1

``kind=table`` files list one row per y (y = 0, 1, ..., 2^n - 1), each row the
comma-separated hex coefficients of R_y, lowest index first.

Candidate file::

    point 0x00 0x00
    point 0x01 0x02
    ...
    infinite inf
    infinite 0x00
"""

from __future__ import annotations

from pathlib import Path

from .field import FieldContext, FieldError, make_context
from .geometry import HyperovalCandidate, pack, parse_label
from .linpoly import LinearizedPoly
from .semifield import PresemifieldSpec, SpecError, field_spec, table_spec, twisted_spec


class ParseError(ValueError):
    pass


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_spec(text: str) -> PresemifieldSpec:
    keys: dict[str, str] = {}
    rows: list[str] = []
    for no, line in _lines(text):
        if "=" in line:
            k, v = (s.strip() for s in line.split("=", 1))
            if k in keys:
                raise ParseError(f"line {no}: duplicate key {k!r}")
            keys[k] = v
        else:
            rows.append(line)
    try:
        kind = keys.pop("kind")
        n = int(keys.pop("n"))
        modulus = int(keys.pop("modulus"), 0) if "modulus" in keys else None
        ctx = make_context(n, modulus)
        if kind == "field":
            spec = field_spec(n, ctx.modulus)
        elif kind == "twisted":
            spec = twisted_spec(ctx, int(keys.pop("i")), int(keys.pop("k")), ctx.parse(keys.pop("j")))
        elif kind == "table":
            spec = table_spec(ctx, [LinearizedPoly.parse(ctx, r) for r in rows])
            rows = []
        else:
            raise ParseError(f"unknown kind {kind!r}")
    except KeyError as e:
        raise ParseError(f"missing key {e.args[0]!r}") from None
    except (FieldError, SpecError, ValueError) as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(str(e)) from None
    if keys:
        raise ParseError(f"unknown keys: {', '.join(sorted(keys))}")
    if rows:
        raise ParseError("coefficient rows are only allowed for kind=table")
    return spec


def load_spec(path: str | Path) -> PresemifieldSpec:
    return parse_spec(Path(path).read_text())


def dump_spec(spec: PresemifieldSpec) -> str:
    ctx = spec.ctx
    out = [f"kind={spec.kind}", f"n={ctx.n}", f"modulus={ctx.modulus:#x}"]
    if spec.kind == "twisted":
        out += [f"i={spec.i}", f"k={spec.k}", f"j={ctx.fmt_power(spec.j)}"]
    elif spec.kind == "table":
        out += [str(r) for r in spec.rows]
    return "\n".join(out) + "\n"


def parse_candidate(text: str, ctx: FieldContext) -> HyperovalCandidate:
    affine = set()
    infinite = []
    for no, line in _lines(text):
        parts = line.split()
        try:
            if parts[0] == "point" and len(parts) == 3:
                affine.add(pack(ctx, ctx.parse(parts[1]), ctx.parse(parts[2])))
            elif parts[0] == "infinite" and len(parts) == 2:
                infinite.append(parse_label(parts[1]))
            else:
                raise ParseError(f"line {no}: expected 'point X Z' or 'infinite LABEL'")
        except (ValueError, FieldError) as e:
            if isinstance(e, ParseError):
                raise
            raise ParseError(f"line {no}: {e}") from None
    return HyperovalCandidate(frozenset(affine), tuple(infinite))


def dump_candidate(hc: HyperovalCandidate, ctx: FieldContext) -> str:
    d = hc.as_dict(ctx)
    lines = [f"point {x} {z}" for x, z in d["affine"]]
    lines += [f"infinite {e}" for e in d["infinite"]]
    return "\n".join(lines) + "\n"
