"""Text formats: boxes and functionals as line-based documents, wirings as
JSON.  Everything numeric is written "num/den" so files are exact and
byte-stable."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .boxes import Box, BoxShape, ShapeError
from .locality import BellFunctional
from .wiring import Component, PartyProgram, Step, Wiring


class ParseError(ValueError):
    """A document does not follow the format; the message names the
    offending field."""


_FRACTION = re.compile(r"^[+-]?\d+(/\d+)?$")


def format_fraction(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text):
    if not _FRACTION.match(text):
        raise ParseError(f"not an exact rational: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator: {text!r}") from None


def format_shape(shape):
    return str(shape)


def parse_shape(text):
    try:
        return BoxShape.from_string(text)
    except ShapeError as exc:
        raise ParseError(str(exc)) from None


def _document_lines(text):
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield line


def dumps_box(box):
    lines = [f"shape {format_shape(box.shape)}", "table"]
    for ins in box.shape.joint_inputs:
        lines.append(" ".join(format_fraction(v) for v in box.block(ins)))
    return "\n".join(lines) + "\n"


def loads_box(text):
    lines = list(_document_lines(text))
    if not lines or not lines[0].startswith("shape "):
        raise ParseError("box document must start with a shape field")
    shape = parse_shape(lines[0][len("shape "):])
    if len(lines) < 2 or lines[1] != "table":
        raise ParseError("box document needs a table field after the shape")
    entries = [parse_fraction(tok)
               for line in lines[2:] for tok in line.split()]
    if len(entries) != shape.table_size:
        raise ParseError(f"table has {len(entries)} entries, shape "
                         f"{format_shape(shape)} needs {shape.table_size}")
    return Box(shape, tuple(entries))


def save_box(box, path):
    Path(path).write_text(dumps_box(box))


def load_box(path):
    return loads_box(Path(path).read_text())


def dumps_functional(f):
    lines = [f"shape {format_shape(f.shape)}",
             f"local_bound {format_fraction(f.local_bound)}",
             f"algebraic_max {format_fraction(f.algebraic_max)}",
             "coefficients"]
    for ins in f.shape.joint_inputs:
        off, size = f.shape.block(ins)
        lines.append(" ".join(format_fraction(v)
                              for v in f.coefficients[off:off + size]))
    return "\n".join(lines) + "\n"


def loads_functional(text):
    lines = list(_document_lines(text))
    fields = {}
    for name in ("shape", "local_bound", "algebraic_max"):
        if not lines or not lines[0].startswith(name + " "):
            raise ParseError(f"functional document is missing {name}")
        fields[name] = lines.pop(0)[len(name) + 1:]
    if not lines or lines[0] != "coefficients":
        raise ParseError("functional document needs a coefficients field")
    shape = parse_shape(fields["shape"])
    entries = [parse_fraction(tok)
               for line in lines[1:] for tok in line.split()]
    if len(entries) != shape.table_size:
        raise ParseError(f"coefficients have {len(entries)} entries, shape "
                         f"{format_shape(shape)} needs {shape.table_size}")
    return BellFunctional(shape, tuple(entries),
                          parse_fraction(fields["local_bound"]),
                          parse_fraction(fields["algebraic_max"]))


def save_functional(f, path):
    Path(path).write_text(dumps_functional(f))


def load_functional(path):
    return loads_functional(Path(path).read_text())


def _encode_key(key):
    return " ".join(str(v) for v in key)


def _decode_table(obj, where):
    if not isinstance(obj, dict):
        raise ParseError(f"{where} must be an object of scope -> value")
    table = {}
    for key, val in obj.items():
        try:
            scope = tuple(int(v) for v in key.split())
            table[scope] = int(val)
        except ValueError:
            raise ParseError(f"{where} has a non-integer entry at {key!r}") \
                from None
    return table


def dumps_wiring(wiring):
    doc = {
        "shape": format_shape(wiring.shape),
        "components": [
            {"parties": list(c.parties),
             "box": {"inline": {"shape": format_shape(c.box.shape),
                                "table": [format_fraction(v)
                                          for v in c.box.table]}}}
            for c in wiring.components],
        "programs": [
            {"steps": [{"component": st.component, "side": st.side,
                        "inputs": {_encode_key(k): v
                                   for k, v in sorted(st.inputs.items())}}
                       for st in prog.steps],
             "outputs": {_encode_key(k): v
                         for k, v in sorted(prog.outputs.items())}}
            for prog in wiring.programs],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _component_box(ref, base_dir):
    if not isinstance(ref, dict) or len(ref) != 1:
        raise ParseError("component box must be an inline or file object")
    if "file" in ref:
        return load_box(Path(base_dir) / ref["file"])
    if "inline" in ref:
        inner = ref["inline"]
        if not isinstance(inner, dict) or set(inner) != {"shape", "table"}:
            raise ParseError("inline box needs exactly shape and table")
        shape = parse_shape(inner["shape"])
        entries = tuple(parse_fraction(tok) for tok in inner["table"])
        if len(entries) != shape.table_size:
            raise ParseError("inline box table has the wrong length")
        return Box(shape, entries)
    raise ParseError("component box must be inline or a file reference")


def loads_wiring(text, base_dir="."):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"wiring document is not valid JSON: {exc}") from None
    for field in ("shape", "components", "programs"):
        if field not in doc:
            raise ParseError(f"wiring document is missing {field}")
    shape = parse_shape(doc["shape"])
    components = []
    for i, c in enumerate(doc["components"]):
        if "parties" not in c or "box" not in c:
            raise ParseError(f"component {i} needs parties and box")
        components.append(Component(_component_box(c["box"], base_dir),
                                    tuple(int(p) for p in c["parties"])))
    programs = []
    for k, prog in enumerate(doc["programs"]):
        steps = tuple(
            Step(int(st["component"]), int(st["side"]),
                 _decode_table(st["inputs"], f"program {k} step inputs"))
            for st in prog.get("steps", ()))
        outputs = _decode_table(prog.get("outputs", {}),
                                f"program {k} outputs")
        programs.append(PartyProgram(steps, outputs))
    return Wiring(shape, tuple(components), tuple(programs))


def save_wiring(wiring, path):
    Path(path).write_text(dumps_wiring(wiring))


def load_wiring(path):
    path = Path(path)
    return loads_wiring(path.read_text(), base_dir=path.parent)
