"""Gödel coding of syntax on arbitrary-precision naturals.

``code(node) = pair(tag, payload)`` where the payload of a variable is its
index and every other payload is the list code of the children (quantifiers
contribute ``[var, body]``). Lists are coded as ``[] -> 0`` and
``[h] + t -> pair(h, code(t)) + 1``.

Codes roughly square with each level of nesting, so deep trees get very
large codes. Everything here is exact integer arithmetic.
"""

from __future__ import annotations

import math
import weakref
from collections.abc import Iterable

from .errors import NotACodeError
from .syntax import (
    TAG_TYPES,
    Exists,
    Forall,
    Formula,
    Node,
    Term,
    Var,
    Zero,
    numeral,
)

_CODES: "weakref.WeakKeyDictionary[Node, int]" = weakref.WeakKeyDictionary()


def pair(a: int, b: int) -> int:
    """Cantor pairing."""

    s = a + b
    return s * (s + 1) // 2 + b


def unpair(c: int) -> tuple[int, int]:
    if c < 0:
        raise NotACodeError(f"negative number {c} is not a pair code")
    w = (math.isqrt(8 * c + 1) - 1) // 2
    b = c - w * (w + 1) // 2
    return w - b, b


def list_code(items: Iterable[int]) -> int:
    code = 0
    for item in reversed(list(items)):
        code = pair(item, code) + 1
    return code


def list_decode(code: int, limit: int | None = None) -> list[int]:
    items: list[int] = []
    while code:
        if limit is not None and len(items) >= limit:
            raise NotACodeError("list code is longer than expected")
        head, code = unpair(code - 1)
        items.append(head)
    return items


def _payload(node: Node, codes: dict[int, int]) -> int:
    if isinstance(node, Var):
        return node.index
    if isinstance(node, (Exists, Forall)):
        return list_code([node.var, codes[id(node.body)]])
    return list_code(codes[id(arg)] for arg in node.args)


def encode(node: Node) -> int:
    """Gödel code of a term or formula."""

    cached = _CODES.get(node)
    if cached is not None:
        return cached

    codes: dict[int, int] = {}
    stack: list[tuple[Node, bool]] = [(node, False)]
    while stack:
        current, ready = stack.pop()
        if id(current) in codes:
            continue
        known = _CODES.get(current)
        if known is not None:
            codes[id(current)] = known
            continue
        children = [arg for arg in current.args if isinstance(arg, Node)]
        if not ready:
            stack.append((current, True))
            stack.extend((child, False) for child in children if id(child) not in codes)
            continue
        value = pair(current.tag, _payload(current, codes))
        codes[id(current)] = value
        _CODES[current] = value
    return codes[id(node)]


def decode(code: int) -> Node:
    """Inverse of :func:`encode`; raises :class:`NotACodeError` off its range."""

    if not isinstance(code, int) or isinstance(code, bool) or code < 0:
        raise NotACodeError(f"{code!r} is not a natural number")
    tag, payload = unpair(code)
    cls = TAG_TYPES.get(tag)
    if cls is None:
        raise NotACodeError(f"unknown constructor tag {tag}")
    if cls is Var:
        return Var(payload)
    parts = list_decode(payload, limit=2)
    if cls is Zero:
        if parts:
            raise NotACodeError("Zero carries no children")
        return Zero()
    if cls in (Exists, Forall):
        if len(parts) != 2:
            raise NotACodeError(f"{cls.op} needs a variable and a body")
        body = decode(parts[1])
        if not isinstance(body, Formula):
            raise NotACodeError(f"{cls.op} body is not a formula")
        return cls(parts[0], body)
    arity = 1 if cls.op in ("Succ", "Not") else 2
    if len(parts) != arity:
        raise NotACodeError(f"{cls.op} expects {arity} children, got {len(parts)}")
    children = [decode(part) for part in parts]
    expected = Term if cls.op in ("Succ", "Add", "Mul", "Eq") else Formula
    if not all(isinstance(child, expected) for child in children):
        raise NotACodeError(f"{cls.op} children have the wrong sort")
    return cls(*children)


def num(n: int) -> Term:
    """The numeral S...S(0) with ``n`` successors."""

    return numeral(n)


def code_text(code: int) -> str:
    return format(code, "d")
