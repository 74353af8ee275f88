"""Parsers for the textual space and weight descriptors used by the CLI
and the data files.

Space grammar: ``L:p``, ``Linf``, ``Lw:p``, ``Lor:p:q``, ``Zyg:p:alpha``,
``Orl:<young>`` (Luxemburg form) and ``Orl*:<young>`` (Amemiya form).
Weight grammar: ``pow:a``, ``powlog:a:b``, ``powloglog:a:b:c``, ``one``.

Errors are ``SpecError`` and carry the character offset of the offending
field, rendered with a caret under the input.
"""

from __future__ import annotations

import math

from .core import InvalidInput
from . import young as Y


class SpecError(InvalidInput):
    def __init__(self, text: str, pos: int, reason: str):
        self.text, self.pos, self.reason = text, pos, reason
        super().__init__(f"{reason} at position {pos}\n  {text}\n  "
                         + " " * pos + "^")


def _fields(text: str):
    out, pos = [], 0
    for part in text.split(":"):
        out.append((part, pos))
        pos += len(part) + 1
    return out


def _number(text, field, what):
    tok, pos = field
    try:
        val = float(tok)
    except ValueError:
        raise SpecError(text, pos, f"expected a number for {what}, got {tok!r}")
    if math.isnan(val):
        raise SpecError(text, pos, f"{what} is NaN")
    return val


def _arity(text, fields, want):
    if len(fields) != want:
        tok, pos = fields[min(len(fields), want) - 1]
        if len(fields) > want:
            pos = fields[want][1]
            raise SpecError(text, pos, "unexpected extra field")
        raise SpecError(text, len(text), f"expected {want - 1} parameter(s)")


def parse_space(text: str):
    from .norms import RiSpace

    text = text.strip()
    fields = _fields(text)
    head = fields[0][0]
    try:
        if head == "Linf":
            _arity(text, fields, 1)
            return RiSpace.lebesgue(math.inf)
        if head == "L":
            _arity(text, fields, 2)
            return RiSpace.lebesgue(_number(text, fields[1], "p"))
        if head == "Lw":
            _arity(text, fields, 2)
            return RiSpace.weak(_number(text, fields[1], "p"))
        if head == "Lor":
            _arity(text, fields, 3)
            return RiSpace.lorentz(_number(text, fields[1], "p"),
                                   _number(text, fields[2], "q"))
        if head == "Zyg":
            _arity(text, fields, 3)
            return RiSpace.zygmund(_number(text, fields[1], "p"),
                                   _number(text, fields[2], "alpha"))
        if head in ("Orl", "Orl*"):
            if len(fields) < 2:
                raise SpecError(text, len(text), "missing Young function")
            inner_pos = fields[1][1]
            inner = text[inner_pos:]
            try:
                A = Y.parse_young(inner)
            except SpecError as exc:
                raise SpecError(text, inner_pos + exc.pos, exc.reason)
            except InvalidInput as exc:
                raise SpecError(text, inner_pos, str(exc))
            return RiSpace.orlicz(A, "luxemburg" if head == "Orl" else "amemiya")
    except SpecError:
        raise
    except InvalidInput as exc:
        raise SpecError(text, fields[1][1] if len(fields) > 1 else 0, str(exc))
    raise SpecError(text, 0, f"unknown space family {head!r}")


_WEIGHT_ARITY = {"one": 0, "pow": 1, "powlog": 2, "powloglog": 3}


def parse_weight(text: str):
    from .criteria import Weight

    text = text.strip()
    fields = _fields(text)
    head = fields[0][0]
    if head not in _WEIGHT_ARITY:
        raise SpecError(text, 0, f"unknown weight kind {head!r}")
    want = _WEIGHT_ARITY[head]
    if head == "one" and len(fields) == 1:
        return Weight.power_log(0.0, 0.0, 0.0)
    _arity(text, fields, want + 1)
    vals = [_number(text, f, name) for f, name in zip(fields[1:], "abc")]
    vals += [0.0] * (3 - len(vals))
    return Weight.power_log(*vals)
