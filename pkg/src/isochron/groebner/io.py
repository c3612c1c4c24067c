"""Reading ideal files.

Format::

    ring: x y a20 over Q        # Q, Qi or Fp(<p>)
    order: degrevlex            # lex, degrevlex or block(<k>)
    x^2 - a20
    ...

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import re

from ..arith import QQ, QQI, PrimeField
from ..poly import MonomialOrder, PolyRing, PolySyntaxError, parse
from .ideal import Ideal


class IdealFileError(ValueError):
    def __init__(self, message, line=None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(message + where)
        self.line = line


def parse_domain(text: str):
    text = text.strip()
    if text == "Q":
        return QQ
    if text in ("Qi", "Q(i)"):
        return QQI
    m = re.fullmatch(r"(?:Fp|GF)\(\s*(\d+)\s*\)", text)
    if m:
        return PrimeField(int(m.group(1)))
    raise ValueError(f"unknown coefficient domain {text!r}")


def read_ideal(text: str) -> Ideal:
    ring_vars = None
    domain = None
    order = "degrevlex"
    body = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("ring:"):
            spec = line[5:]
            m = re.fullmatch(r"\s*(.*?)\s+over\s+(\S+)\s*", spec)
            if not m:
                raise IdealFileError("ring header must read 'ring: <vars> over <domain>'", n)
            ring_vars = [v for v in re.split(r"[\s,]+", m.group(1)) if v]
            try:
                domain = parse_domain(m.group(2))
            except ValueError as exc:
                raise IdealFileError(str(exc), n) from None
        elif line.startswith("order:"):
            order = line[6:].strip()
            try:
                MonomialOrder.parse(order)
            except ValueError as exc:
                raise IdealFileError(str(exc), n) from None
        else:
            body.append((n, line))
    if ring_vars is None:
        raise IdealFileError("missing 'ring:' header")
    ring = PolyRing(ring_vars, domain, order)
    gens = []
    for n, line in body:
        try:
            gens.append(parse(line, ring))
        except PolySyntaxError as exc:
            raise IdealFileError(f"{exc}", n) from None
    return Ideal(gens, ring)


def load_ideal(path) -> Ideal:
    with open(path, encoding="utf-8") as fh:
        return read_ideal(fh.read())
