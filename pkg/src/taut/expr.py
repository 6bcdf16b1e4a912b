"""Element expression language and canonical JSON serialization.

Grammar:

    program := (let NAME '=' expr ';')* expr
    expr    := term (('*' | '@') term)*
    term    := atom ('^' INT)?
    atom    := 'rot' '(' ztau ')' | 'trans' '(' ztau ')'
             | 'comm' '(' expr ',' expr ')' | 'conj' '(' expr ',' expr ')'
             | 'lift' '(' expr ',' INT ')'
             | 'map' JSON | 'treepair' JSON
             | NAME | '(' expr ')'
    ztau    := ['+'|'-'] zterm (('+'|'-') zterm)*
    zterm   := INT ['*'] 't' | INT | 't'

'*' composes in action order (left map acts first, matching actions on
the right), so eval(parse("a * b")) applied to x gives b(a(x)).  Interval
maps promote to circle maps when mixed with them; circle maps must be
lifted explicitly with lift(e, n).  Applying lift to something that is
already a lift offsets its integer part by n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .circle import CircleMap, SubdivisionTree
from .errors import ExprSyntaxError, ExprTypeError, SchemaError
from .lift import LiftMap
from .plmap import PLMap, commutator, conjugate, is_ftau, power
from .ring import ZTau, ztau_str

_KEYWORDS = {"let", "rot", "trans", "comm", "conj", "lift", "map",
             "treepair", "t"}


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Rotation:
    angle: ZTau


@dataclass(frozen=True)
class Translation:
    angle: ZTau


@dataclass(frozen=True)
class MapLit:
    value: object  # PLMap or CircleMap, validated at parse time


@dataclass(frozen=True)
class TreePairLit:
    p: SubdivisionTree
    q: SubdivisionTree
    shift: int


@dataclass(frozen=True)
class Compose:
    left: object
    right: object


@dataclass(frozen=True)
class Power:
    inner: object
    k: int


@dataclass(frozen=True)
class Inverse:
    inner: object


@dataclass(frozen=True)
class Comm:
    a: object
    b: object


@dataclass(frozen=True)
class Conj:
    a: object
    b: object


@dataclass(frozen=True)
class Lift:
    inner: object
    n: int


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Program:
    bindings: tuple[tuple[str, object], ...]
    body: object


# -- parser --------------------------------------------------------------------

class _Scanner:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ExprSyntaxError:
        line = self.text.count("\n", 0, self.pos) + 1
        col = self.pos - (self.text.rfind("\n", 0, self.pos) + 1) + 1
        return ExprSyntaxError(message, line, col)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def at_word(self, word: str) -> bool:
        self.skip_ws()
        end = self.pos + len(word)
        if self.text[self.pos:end] != word:
            return False
        return not (end < len(self.text)
                    and (self.text[end].isalnum() or self.text[end] == "_"))

    def take_word(self, word: str) -> bool:
        if self.at_word(word):
            self.skip_ws()
            self.pos += len(word)
            return True
        return False

    def read_int(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or not self.text[start:self.pos].lstrip("+-"):
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def read_name(self) -> str:
        self.skip_ws()
        start = self.pos
        while (self.pos < len(self.text)
               and (self.text[self.pos].isalnum() or self.text[self.pos] == "_")):
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a name")
        return self.text[start:self.pos]

    def read_json(self) -> object:
        self.skip_ws()
        try:
            obj, end = json.JSONDecoder().raw_decode(self.text, self.pos)
        except json.JSONDecodeError as exc:
            raise self.error(f"bad inline JSON: {exc.msg}") from exc
        self.pos = end
        return obj

    def read_ztau(self) -> ZTau:
        # sign-separated linear combination of 1 and t
        self.skip_ws()
        a = b = 0
        first = True
        while True:
            self.skip_ws()
            sign = 1
            if self.peek() in "+-":
                sign = -1 if self.peek() == "-" else 1
                self.pos += 1
            elif not first:
                break
            first = False
            self.skip_ws()
            if self.pos < len(self.text) and self.text[self.pos].isdigit():
                start = self.pos
                while (self.pos < len(self.text)
                       and self.text[self.pos].isdigit()):
                    self.pos += 1
                coeff = int(self.text[start:self.pos])
                self.skip_ws()
                if self.peek() == "*":
                    self.pos += 1
                    if not self.take_word("t"):
                        raise self.error("expected 't' after '*'")
                    b += sign * coeff
                elif self.take_word("t"):
                    b += sign * coeff
                else:
                    a += sign * coeff
            elif self.take_word("t"):
                b += sign
            else:
                raise self.error("expected a ring literal")
        return ZTau(a, b)


def parse(text: str) -> Program:
    sc = _Scanner(text)
    bindings = []
    while sc.take_word("let"):
        name = sc.read_name()
        if name in _KEYWORDS:
            raise sc.error(f"{name!r} is reserved")
        sc.take("=")
        node = _parse_expr(sc)
        sc.take(";")
        bindings.append((name, node))
    body = _parse_expr(sc)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise sc.error("trailing input after expression")
    return Program(tuple(bindings), body)


def _parse_expr(sc: _Scanner) -> object:
    node = _parse_term(sc)
    while sc.peek() in ("*", "@"):
        sc.pos += 1
        node = Compose(node, _parse_term(sc))
    return node


def _parse_term(sc: _Scanner) -> object:
    node = _parse_atom(sc)
    if sc.peek() == "^":
        sc.pos += 1
        k = sc.read_int()
        node = Inverse(node) if k == -1 else Power(node, k)
    return node


def _parse_atom(sc: _Scanner) -> object:
    if sc.take_word("rot"):
        sc.take("(")
        angle = sc.read_ztau()
        sc.take(")")
        return Rotation(angle)
    if sc.take_word("trans"):
        sc.take("(")
        angle = sc.read_ztau()
        sc.take(")")
        return Translation(angle)
    if sc.take_word("comm"):
        sc.take("(")
        a = _parse_expr(sc)
        sc.take(",")
        b = _parse_expr(sc)
        sc.take(")")
        return Comm(a, b)
    if sc.take_word("conj"):
        sc.take("(")
        a = _parse_expr(sc)
        sc.take(",")
        b = _parse_expr(sc)
        sc.take(")")
        return Conj(a, b)
    if sc.take_word("lift"):
        sc.take("(")
        inner = _parse_expr(sc)
        sc.take(",")
        n = sc.read_int()
        sc.take(")")
        return Lift(inner, n)
    if sc.take_word("map"):
        obj = sc.read_json()
        is_circle = isinstance(obj, dict) and (
            "base" in obj or isinstance(obj.get("v"), dict)
            or obj.get("kind") == "circle")
        try:
            value = (CircleMap.from_json(obj) if is_circle
                     else PLMap.from_json(obj))
        except SchemaError as exc:
            raise sc.error(str(exc)) from exc
        return MapLit(value)
    if sc.take_word("treepair"):
        obj = sc.read_json()
        if not isinstance(obj, dict) or not {"p", "q"} <= set(obj):
            raise sc.error("treepair payload needs 'p' and 'q'")
        return TreePairLit(SubdivisionTree.from_json(obj["p"]),
                           SubdivisionTree.from_json(obj["q"]),
                           int(obj.get("shift", 0)))
    if sc.peek() == "(":
        sc.take("(")
        node = _parse_expr(sc)
        sc.take(")")
        return node
    name = sc.read_name()
    if name in _KEYWORDS:
        raise sc.error(f"{name!r} cannot be used as a name here")
    return Name(name)


# -- printing -------------------------------------------------------------------

def format_ast(node: object) -> str:
    if isinstance(node, Program):
        parts = [f"let {n} = {format_ast(e)}; " for n, e in node.bindings]
        return "".join(parts) + format_ast(node.body)
    if isinstance(node, Rotation):
        return f"rot({ztau_str(node.angle)})"
    if isinstance(node, Translation):
        return f"trans({ztau_str(node.angle)})"
    if isinstance(node, Compose):
        return f"{format_ast(node.left)} * {_fmt_tight(node.right)}"
    if isinstance(node, Power):
        return f"{_fmt_tight(node.inner)}^{node.k}"
    if isinstance(node, Inverse):
        return f"{_fmt_tight(node.inner)}^-1"
    if isinstance(node, Comm):
        return f"comm({format_ast(node.a)}, {format_ast(node.b)})"
    if isinstance(node, Conj):
        return f"conj({format_ast(node.a)}, {format_ast(node.b)})"
    if isinstance(node, Lift):
        return f"lift({format_ast(node.inner)}, {node.n})"
    if isinstance(node, MapLit):
        return f"map {canonical_json(node.value.to_json())}"
    if isinstance(node, TreePairLit):
        payload = {"p": node.p.to_json(), "q": node.q.to_json(),
                   "shift": node.shift}
        return f"treepair {canonical_json(payload)}"
    if isinstance(node, Name):
        return node.ident
    raise TypeError(f"not an AST node: {node!r}")


def _fmt_tight(node: object) -> str:
    text = format_ast(node)
    if isinstance(node, (Compose, Power, Inverse)):
        return f"({text})"
    return text


# -- evaluation -------------------------------------------------------------------

Element = PLMap | CircleMap | LiftMap


def _promote_pair(a: Element, b: Element) -> tuple[Element, Element]:
    if type(a) is type(b):
        return a, b
    if isinstance(a, PLMap) and isinstance(b, CircleMap):
        return _to_circle(a), b
    if isinstance(a, CircleMap) and isinstance(b, PLMap):
        return a, _to_circle(b)
    raise ExprTypeError(
        f"cannot mix {type(a).__name__} with {type(b).__name__}; "
        "wrap circle elements with lift(expr, n) first")


def _to_circle(g: PLMap) -> CircleMap:
    if not is_ftau(g):
        raise ExprTypeError(
            "only interval elements of [0, 1] promote to circle maps")
    return CircleMap.from_interval_map(g)


def evaluate(node: object, env: dict[str, Element] | None = None) -> Element:
    env = dict(env or {})
    if isinstance(node, Program):
        for name, sub in node.bindings:
            env[name] = evaluate(sub, env)
        return evaluate(node.body, env)
    if isinstance(node, Rotation):
        return CircleMap.rotation(node.angle)
    if isinstance(node, Translation):
        return LiftMap.translation(node.angle)
    if isinstance(node, (MapLit,)):
        return node.value
    if isinstance(node, TreePairLit):
        return CircleMap.from_tree_pair(node.p, node.q, node.shift)
    if isinstance(node, Compose):
        a, b = _promote_pair(evaluate(node.left, env),
                             evaluate(node.right, env))
        return a * b
    if isinstance(node, Power):
        from .circle import DEFAULT_PIECE_CAP

        return power(evaluate(node.inner, env), node.k, DEFAULT_PIECE_CAP)
    if isinstance(node, Inverse):
        return evaluate(node.inner, env).inverse()
    if isinstance(node, Comm):
        a, b = _promote_pair(evaluate(node.a, env), evaluate(node.b, env))
        return commutator(a, b)
    if isinstance(node, Conj):
        a, b = _promote_pair(evaluate(node.a, env), evaluate(node.b, env))
        return conjugate(a, b)
    if isinstance(node, Lift):
        inner = evaluate(node.inner, env)
        if isinstance(inner, LiftMap):
            return inner.translate(node.n)
        if isinstance(inner, PLMap):
            inner = _to_circle(inner)
        return LiftMap(inner, node.n)
    if isinstance(node, Name):
        if node.ident not in env:
            raise ExprTypeError(f"unbound name {node.ident!r}")
        return env[node.ident]
    raise TypeError(f"not an AST node: {node!r}")


def evaluate_str(text: str, env: dict[str, Element] | None = None) -> Element:
    return evaluate(parse(text), env)


def to_expression(element: Element) -> str:
    """Expression text that evaluates back to the given element."""
    if isinstance(element, PLMap):
        return f"map {canonical_json(element.to_json())}"
    if isinstance(element, CircleMap):
        return f"map {canonical_json(element.to_json())}"
    if isinstance(element, LiftMap):
        return (f"lift(map {canonical_json(element.base.to_json())}, "
                f"{element.n})")
    raise TypeError(f"not an element: {element!r}")


# -- canonical serialization --------------------------------------------------------

SCHEMA_VERSION = 1


def canonical_json(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def serialize(obj) -> str:
    """Canonical JSON for elements, results and certificates."""
    payload = obj.to_json()
    kind = payload.get("kind")
    if kind is None:
        if isinstance(obj, PLMap):
            kind = "plmap"
        elif isinstance(obj, CircleMap):
            kind = "circle"
        elif isinstance(obj, LiftMap):
            kind = "lift"
        else:
            raise SchemaError(f"cannot serialize {type(obj).__name__}")
        payload["kind"] = kind
    payload["schema"] = SCHEMA_VERSION
    return canonical_json(payload)


def deserialize(text: str):
    """Inverse of serialize; every group element is re-validated."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("payload must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "plmap":
        return PLMap.from_json(obj)
    if kind == "circle":
        return CircleMap.from_json(obj)
    if kind == "lift":
        return LiftMap.from_json(obj)
    if kind == "ztau-half" or (
            kind in ("rational", "enclosure")
            and "rot" in obj.get("certificate", {})):
        from .lift import scl_result_from_json

        return scl_result_from_json(obj)
    if kind in ("rational", "ztau", "enclosure"):
        from .lift import rot_result_from_json

        return rot_result_from_json(obj)
    from . import construct

    table = {
        "connect-cert": construct.TransitivityCertificate,
        "factor-cert": construct.FactorCertificate,
        "commutator-cert": construct.CommutatorCertificate,
        "defect-witness": construct.DefectWitness,
    }
    if kind in table:
        return table[kind].from_json(obj)
    raise SchemaError(f"unknown payload kind {kind!r}")
