"""Terms and formulas of the language {0, S, +, *} with hash-consed nodes.

Every node is immutable. While sharing is enabled (the default) structurally
equal nodes are the same object, so shared DAGs such as the Yablo sequences
stay linear in size. Equality and hashing are structural either way.
"""

from __future__ import annotations

import re
import threading
import weakref
from collections.abc import Iterable, Iterator, Mapping
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, ClassVar

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .errors import (
    NotASentenceError,
    OpenTermError,
    ParseError,
    UnboundVariableError,
)

_SHARING: ContextVar[bool] = ContextVar("truthlab_sharing", default=True)
_TABLE_LOCK = threading.Lock()
_TABLE: "weakref.WeakValueDictionary[tuple, Node]" = weakref.WeakValueDictionary()


@contextmanager
def sharing_disabled() -> Iterator[None]:
    """Build fresh, unshared nodes inside the block."""

    token = _SHARING.set(False)
    try:
        yield
    finally:
        _SHARING.reset(token)


# -----------------------------------------------------------------------------
# Nodes
# -----------------------------------------------------------------------------


class Node:
    __slots__ = ("args", "free", "size", "depth", "quantifier_free", "_hash", "__weakref__")

    tag: ClassVar[int]
    op: ClassVar[str]

    args: tuple
    free: frozenset[int]
    size: int
    depth: int
    quantifier_free: bool

    def __new__(cls, *args: Any) -> "Node":
        cls._check(args)
        key = (cls.tag, args)
        if not _SHARING.get():
            return cls._build(args)
        with _TABLE_LOCK:
            node = _TABLE.get(key)
            if node is None:
                node = cls._build(args)
                _TABLE[key] = node
            return node

    @classmethod
    def _build(cls, args: tuple) -> "Node":
        node = object.__new__(cls)
        node.args = args
        children = [arg for arg in args if isinstance(arg, Node)]
        node.free = cls._free(args, children)
        node.size = 1 + sum(child.size for child in children)
        node.depth = 1 + max((child.depth for child in children), default=0)
        node.quantifier_free = cls.tag not in (4, 5) and all(child.quantifier_free for child in children)
        node._hash = hash((cls.tag, args))
        return node

    @classmethod
    def _check(cls, args: tuple) -> None:
        raise NotImplementedError

    @staticmethod
    def _free(args: tuple, children: list["Node"]) -> frozenset[int]:
        if not children:
            return frozenset()
        if len(children) == 1:
            return children[0].free
        return children[0].free | children[1].free

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Node) or other.tag != self.tag:
            return False
        return self._hash == other._hash and self.args == other.args

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __repr__(self) -> str:
        return f"{type(self).__name__}<{preview(self)}>"

    def __str__(self) -> str:
        return to_text(self)

    def __reduce__(self):
        return (type(self), self.args)


class Term(Node):
    __slots__ = ()


class Formula(Node):
    __slots__ = ()


def _require(value: Any, kind: type, what: str) -> None:
    if not isinstance(value, kind):
        raise TypeError(f"{what} must be a {kind.__name__}, got {type(value).__name__}")


def _require_index(value: Any) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ValueError(f"variable index must be a natural number, got {value!r}")


class Zero(Term):
    __slots__ = ()
    tag = 6
    op = "Zero"
    __match_args__ = ()

    @classmethod
    def _check(cls, args: tuple) -> None:
        if args:
            raise TypeError("Zero takes no arguments")


class Succ(Term):
    __slots__ = ()
    tag = 7
    op = "Succ"
    __match_args__ = ("arg",)

    @classmethod
    def _check(cls, args: tuple) -> None:
        if len(args) != 1:
            raise TypeError("Succ takes one term")
        _require(args[0], Term, "Succ argument")

    @property
    def arg(self) -> Term:
        return self.args[0]


class _BinaryTerm(Term):
    __slots__ = ()
    __match_args__ = ("left", "right")

    @classmethod
    def _check(cls, args: tuple) -> None:
        if len(args) != 2:
            raise TypeError(f"{cls.op} takes two terms")
        _require(args[0], Term, f"{cls.op} left side")
        _require(args[1], Term, f"{cls.op} right side")

    @property
    def left(self) -> Term:
        return self.args[0]

    @property
    def right(self) -> Term:
        return self.args[1]


class Add(_BinaryTerm):
    __slots__ = ()
    tag = 8
    op = "Add"


class Mul(_BinaryTerm):
    __slots__ = ()
    tag = 9
    op = "Mul"


class Var(Term):
    __slots__ = ()
    tag = 10
    op = "Var"
    __match_args__ = ("index",)

    @classmethod
    def _check(cls, args: tuple) -> None:
        if len(args) != 1:
            raise TypeError("Var takes one index")
        _require_index(args[0])

    @staticmethod
    def _free(args: tuple, children: list[Node]) -> frozenset[int]:
        return frozenset(args)

    @property
    def index(self) -> int:
        return self.args[0]


class Eq(Formula):
    __slots__ = ()
    tag = 0
    op = "Eq"
    __match_args__ = ("left", "right")

    @classmethod
    def _check(cls, args: tuple) -> None:
        if len(args) != 2:
            raise TypeError("Eq takes two terms")
        _require(args[0], Term, "Eq left side")
        _require(args[1], Term, "Eq right side")

    @property
    def left(self) -> Term:
        return self.args[0]

    @property
    def right(self) -> Term:
        return self.args[1]


class Not(Formula):
    __slots__ = ()
    tag = 1
    op = "Not"
    __match_args__ = ("body",)

    @classmethod
    def _check(cls, args: tuple) -> None:
        if len(args) != 1:
            raise TypeError("Not takes one formula")
        _require(args[0], Formula, "Not argument")

    @property
    def body(self) -> Formula:
        return self.args[0]


class _Connective(Formula):
    __slots__ = ()
    __match_args__ = ("left", "right")

    @classmethod
    def _check(cls, args: tuple) -> None:
        if len(args) != 2:
            raise TypeError(f"{cls.op} takes two formulas")
        _require(args[0], Formula, f"{cls.op} left side")
        _require(args[1], Formula, f"{cls.op} right side")

    @property
    def left(self) -> Formula:
        return self.args[0]

    @property
    def right(self) -> Formula:
        return self.args[1]


class Or(_Connective):
    __slots__ = ()
    tag = 2
    op = "Or"


class And(_Connective):
    __slots__ = ()
    tag = 3
    op = "And"


class _Quantifier(Formula):
    __slots__ = ()
    __match_args__ = ("var", "body")

    @classmethod
    def _check(cls, args: tuple) -> None:
        if len(args) != 2:
            raise TypeError(f"{cls.op} takes a variable index and a formula")
        _require_index(args[0])
        _require(args[1], Formula, f"{cls.op} body")

    @staticmethod
    def _free(args: tuple, children: list[Node]) -> frozenset[int]:
        return children[0].free - {args[0]}

    @property
    def var(self) -> int:
        return self.args[0]

    @property
    def body(self) -> Formula:
        return self.args[1]


class Exists(_Quantifier):
    __slots__ = ()
    tag = 4
    op = "Exists"


class Forall(_Quantifier):
    __slots__ = ()
    tag = 5
    op = "Forall"


NODE_TYPES: dict[str, type[Node]] = {
    cls.op: cls for cls in (Zero, Succ, Add, Mul, Var, Eq, Not, Or, And, Exists, Forall)
}
TAG_TYPES: dict[int, type[Node]] = {cls.tag: cls for cls in NODE_TYPES.values()}
BOOLEAN_TYPES = (Not, Or, And)


# -----------------------------------------------------------------------------
# Assignments and sentence sequences
# -----------------------------------------------------------------------------


class Assignment(Mapping[int, int]):
    """Finite, immutable map from variable indices to naturals."""

    __slots__ = ("_values", "_items", "_hash")

    def __init__(self, values: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        mapping = dict(values)
        for index, value in mapping.items():
            _require_index(index)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ValueError(f"assignment value for x{index} must be a natural number, got {value!r}")
        self._values = mapping
        self._items = tuple(sorted(mapping.items()))
        self._hash = hash(self._items)

    def __getitem__(self, index: int) -> int:
        return self._values[index]

    def __iter__(self) -> Iterator[int]:
        return iter(index for index, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Assignment):
            return self._items == other._items
        if isinstance(other, Mapping):
            return dict(self._items) == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"x{index}->{value}" for index, value in self._items)
        return f"Assignment({{{inner}}})"

    def restrict(self, variables: Iterable[int]) -> "Assignment":
        wanted = set(variables)
        return Assignment((index, value) for index, value in self._items if index in wanted)

    def updated(self, index: int, value: int) -> "Assignment":
        """The assignment alpha[value/index]."""

        merged = dict(self._items)
        merged[index] = value
        return Assignment(merged)

    def to_json(self) -> dict[str, int]:
        return {str(index): value for index, value in self._items}

    @classmethod
    def from_json(cls, raw: Mapping[str, int]) -> "Assignment":
        return cls((int(key.lstrip("x")), int(value)) for key, value in raw.items())


EMPTY_ASSIGNMENT = Assignment()

SentenceSeq = tuple[Formula, ...]


def sentence_seq(items: Iterable[Formula]) -> SentenceSeq:
    """Validate that every element is a sentence and freeze the sequence."""

    seq = tuple(items)
    for position, item in enumerate(seq):
        if not isinstance(item, Formula):
            raise TypeError(f"element {position} is not a formula")
        if item.free:
            raise NotASentenceError(f"element {position} has free variables: {preview(item)}")
    return seq


# -----------------------------------------------------------------------------
# Structural queries
# -----------------------------------------------------------------------------


def free_vars(node: Node) -> frozenset[int]:
    return node.free


def is_sentence(phi: Formula) -> bool:
    return isinstance(phi, Formula) and not phi.free


def is_closed(term: Term) -> bool:
    return not term.free


def direct_subformulas(phi: Formula) -> list[Formula]:
    match phi:
        case Eq():
            return []
        case Not(body) | Exists(_, body) | Forall(_, body):
            return [body]
        case Or(left, right) | And(left, right):
            return [left, right]
    raise TypeError(f"not a formula: {phi!r}")


def subformulas(phi: Formula) -> list[Formula]:
    """All distinct subformulas in preorder, ``phi`` first."""

    seen: set[Formula] = set()
    order: list[Formula] = []
    stack = [phi]
    while stack:
        current = stack.pop()
        if current in seen:
            continue
        seen.add(current)
        order.append(current)
        stack.extend(reversed(direct_subformulas(current)))
    return order


def _children(node: Node) -> list[Node]:
    return [arg for arg in node.args if isinstance(arg, Node)]


def dag_size(*roots: Node) -> int:
    """Number of distinct node objects reachable from ``roots``."""

    seen: set[int] = set()
    stack = list(roots)
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.extend(_children(node))
    return len(seen)


def flat_size(node: Node) -> int:
    """Size of the unshared tree; computed at construction, never materialized."""

    return node.size


def formula_depth(phi: Formula) -> int:
    """Nesting depth counting formula constructors only."""

    match phi:
        case Eq():
            return 1
        case Not(body) | Exists(_, body) | Forall(_, body):
            return 1 + formula_depth(body)
        case Or(left, right) | And(left, right):
            return 1 + max(formula_depth(left), formula_depth(right))
    raise TypeError(f"not a formula: {phi!r}")


def all_variables(*roots: Node) -> set[int]:
    """Every variable index occurring in ``roots``, free or bound."""

    found: set[int] = set()
    seen: set[int] = set()
    stack = list(roots)
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Var):
            found.add(node.index)
        elif isinstance(node, (Exists, Forall)):
            found.add(node.var)
        stack.extend(_children(node))
    return found


def fresh_variable(*roots: Node) -> int:
    used = all_variables(*roots)
    return max(used) + 1 if used else 0


def alpha_equal(first: Formula, second: Formula) -> bool:
    """Equality up to renaming of bound variables."""

    def terms(a: Term, b: Term, left: dict[int, int], right: dict[int, int]) -> bool:
        match a, b:
            case Zero(), Zero():
                return True
            case Var(i), Var(j):
                if i in left or j in right:
                    return left.get(i) == j and right.get(j) == i
                return i == j
            case Succ(x), Succ(y):
                return terms(x, y, left, right)
            case (Add(a1, a2), Add(b1, b2)) | (Mul(a1, a2), Mul(b1, b2)):
                return terms(a1, b1, left, right) and terms(a2, b2, left, right)
        return False

    def formulas(a: Formula, b: Formula, left: dict[int, int], right: dict[int, int]) -> bool:
        if type(a) is not type(b):
            return False
        match a, b:
            case Eq(s1, t1), Eq(s2, t2):
                return terms(s1, s2, left, right) and terms(t1, t2, left, right)
            case Not(x), Not(y):
                return formulas(x, y, left, right)
            case (Or(a1, a2), Or(b1, b2)) | (And(a1, a2), And(b1, b2)):
                return formulas(a1, b1, left, right) and formulas(a2, b2, left, right)
            case (Exists(v, x), Exists(w, y)) | (Forall(v, x), Forall(w, y)):
                return formulas(x, y, {**left, v: w}, {**right, w: v})
        return False

    return formulas(first, second, {}, {})


# -----------------------------------------------------------------------------
# Numerals and substitution
# -----------------------------------------------------------------------------


def numeral(n: int) -> Term:
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"numerals exist for natural numbers only, got {n!r}")
    term: Term = Zero()
    for _ in range(n):
        term = Succ(term)
    return term


def _substitute_many(node: Node, mapping: Mapping[int, Term], memo: dict) -> Node:
    relevant = node.free.intersection(mapping)
    if not relevant:
        return node
    key = (node, tuple(sorted(relevant)))
    cached = memo.get(key)
    if cached is not None:
        return cached
    match node:
        case Var(index):
            result = mapping[index]
        case Exists(var, body) | Forall(var, body):
            inner = {k: v for k, v in mapping.items() if k != var}
            result = type(node)(var, _substitute_many(body, inner, memo))
        case _:
            result = type(node)(*(
                _substitute_many(arg, mapping, memo) if isinstance(arg, Node) else arg
                for arg in node.args
            ))
    memo[key] = result
    return result


def substitute(phi: Formula, var: int, term: Term) -> Formula:
    """Replace the free occurrences of ``var`` by the closed ``term``."""

    if term.free:
        raise OpenTermError(f"only closed terms may be substituted, got {preview(term)}")
    return _substitute_many(phi, {var: term}, {})


def instantiate(phi: Formula, alpha: Mapping[int, int]) -> Formula:
    """The sentence phi[alpha]: each free variable replaced by its numeral."""

    missing = phi.free - set(alpha.keys())
    if missing:
        raise UnboundVariableError(missing)
    mapping = {index: numeral(alpha[index]) for index in phi.free}
    return _substitute_many(phi, mapping, {})


def require_sentence(phi: Formula) -> Formula:
    if not isinstance(phi, Formula):
        raise TypeError(f"expected a formula, got {type(phi).__name__}")
    if phi.free:
        raise NotASentenceError(f"{preview(phi)} has free variables {sorted(phi.free)}")
    return phi


# -----------------------------------------------------------------------------
# Printing
# -----------------------------------------------------------------------------


def _expand(node: Node, wrap_equation: bool) -> list:
    match node:
        case Zero():
            return ["0"]
        case Var(index):
            return [f"x{index}"]
        case Succ(arg):
            return ["S(", (arg, False), ")"]
        case Add(left, right):
            return ["(", (left, False), "+", (right, False), ")"]
        case Mul(left, right):
            return ["(", (left, False), "*", (right, False), ")"]
        case Eq(left, right):
            parts = [(left, False), "=", (right, False)]
            return ["(", *parts, ")"] if wrap_equation else parts
        case Not(body):
            return ["!", (body, True)]
        case Or(left, right):
            return ["(", (left, False), "|", (right, False), ")"]
        case And(left, right):
            return ["(", (left, False), "&", (right, False), ")"]
        case Exists(var, body):
            return [f"E x{var}.", (body, True)]
        case Forall(var, body):
            return [f"A x{var}.", (body, True)]
    raise TypeError(f"not a term or formula: {type(node).__name__}")


def iter_text(node: Node) -> Iterator[str]:
    """Lazily produce the concrete syntax of ``node`` chunk by chunk.

    Equations print bare at top level and under binary connectives, and
    parenthesized under ``!`` and quantifiers.
    """

    stack: list = [(node, False)]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            yield item
            continue
        stack.extend(reversed(_expand(*item)))


def to_text(node: Node) -> str:
    return "".join(iter_text(node))


def preview(node: Node, limit: int = 160) -> str:
    """Concrete syntax cut off after ``limit`` characters."""

    chunks: list[str] = []
    length = 0
    for chunk in iter_text(node):
        chunks.append(chunk)
        length += len(chunk)
        if length > limit:
            return "".join(chunks)[:limit] + "..."
    return "".join(chunks)


print_formula = to_text


# -----------------------------------------------------------------------------
# Parsing
# -----------------------------------------------------------------------------

_GRAMMAR = r"""
    ?formula: equation
            | "!" formula                    -> negation
            | "(" formula "|" formula ")"    -> disjunction
            | "(" formula "&" formula ")"    -> conjunction
            | "(" formula ")"
            | "E" variable "." formula       -> exists
            | "A" variable "." formula       -> forall
    equation: term "=" term
    ?term: "0"                               -> zero
         | "S" "(" term ")"                  -> succ
         | "(" term "+" term ")"             -> add
         | "(" term "*" term ")"             -> mul
         | variable
    variable: INDEXED | NAMED
    INDEXED: /x[0-9]+/
    NAMED: /[a-z](?![0-9])/

    %import common.WS
    %ignore WS
"""

_PARSER = Lark(_GRAMMAR, start=["formula", "term"], parser="earley", lexer="dynamic")
_VARIABLE_PATTERN = re.compile(r"x[0-9]+|[a-z](?![0-9])")


def _variable_aliases(text: str) -> dict[str, int]:
    tokens = _VARIABLE_PATTERN.findall(text)
    taken = {int(token[1:]) for token in tokens if len(token) > 1}
    aliases: dict[str, int] = {}
    candidate = 0
    for token in tokens:
        if len(token) > 1 or token in aliases:
            continue
        while candidate in taken:
            candidate += 1
        aliases[token] = candidate
        taken.add(candidate)
    return aliases


@v_args(inline=True)
class _Builder(Transformer):
    def __init__(self, aliases: dict[str, int]):
        super().__init__()
        self._aliases = aliases

    def variable(self, token: Token) -> Var:
        if token.type == "INDEXED":
            return Var(int(token[1:]))
        return Var(self._aliases[str(token)])

    def zero(self) -> Term:
        return Zero()

    def succ(self, term: Term) -> Term:
        return Succ(term)

    def add(self, left: Term, right: Term) -> Term:
        return Add(left, right)

    def mul(self, left: Term, right: Term) -> Term:
        return Mul(left, right)

    def equation(self, left: Term, right: Term) -> Formula:
        return Eq(left, right)

    def negation(self, body: Formula) -> Formula:
        return Not(body)

    def disjunction(self, left: Formula, right: Formula) -> Formula:
        return Or(left, right)

    def conjunction(self, left: Formula, right: Formula) -> Formula:
        return And(left, right)

    def exists(self, var: Var, body: Formula) -> Formula:
        return Exists(var.index, body)

    def forall(self, var: Var, body: Formula) -> Formula:
        return Forall(var.index, body)


def _parse(text: str, start: str) -> Node:
    try:
        tree = _PARSER.parse(text, start=start)
        return _Builder(_variable_aliases(text)).transform(tree)
    except UnexpectedInput as exc:
        line = getattr(exc, "line", None)
        column = getattr(exc, "column", None)
        if line is None or line < 0:
            line, column = 1, len(text) + 1
        raise ParseError(f"malformed {start}", line=line, column=column) from exc
    except VisitError as exc:
        raise ParseError(f"malformed {start}: {exc.orig_exc}") from exc


def parse(text: str) -> Formula:
    """Parse a formula in the concrete grammar.

    Single lowercase letters other than indexed ``x<digits>`` are named
    variables; they receive the least unused indices in order of appearance.
    """

    return _parse(text, "formula")


def parse_term(text: str) -> Term:
    return _parse(text, "term")


# -----------------------------------------------------------------------------
# JSON
# -----------------------------------------------------------------------------


def to_json(node: Node) -> dict[str, Any]:
    return {
        "op": node.op,
        "args": [to_json(arg) if isinstance(arg, Node) else arg for arg in node.args],
    }


def from_json(raw: Mapping[str, Any]) -> Node:
    try:
        cls = NODE_TYPES[raw["op"]]
        args = raw.get("args", [])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad syntax record: {raw!r}") from exc
    converted = [from_json(arg) if isinstance(arg, Mapping) else arg for arg in args]
    try:
        return cls(*converted)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad {raw['op']} record: {exc}") from exc
