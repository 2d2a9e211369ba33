"""Text front-end: quivers with relations, module definitions and string words.

The grammar (informally)::

    algebra NAME { field (Q | F<p>) ;
                   vertices ID ("," ID)* ;
                   arrows ID ":" ID "->" ID ("," ID ":" ID "->" ID)* ;
                   relations REL (";" REL)* ;
                   lenbound INT ; }
    module NAME over ALG { dims { KEY ":" INT ("," ...)* } ;
                           arrow KEY "=" MATRIX ; ... }
    string NAME over NAME = LETTER ("*" LETTER)* ;

``ALG`` is an algebra name or ``env(A, B)``; in the second case vertex keys
are pairs ``(v, w)`` and arrow keys are ``(a, w)`` (left action of the arrow
``a`` of A) or ``(v, b)`` (right action of the arrow ``b`` of B).  Paths are
composed right to left: ``a*b`` means "first b, then a".  ``#`` starts a
comment.  Arrows omitted from a module definition act as zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Mapping

from .errors import (
    DSLSyntaxError,
    DuplicateName,
    ImmediateInverse,
    NonAdmissibleRelation,
    NonComposablePath,
    NonComposableWalk,
    ShapeMismatch,
    UndeclaredName,
    UnknownArrow,
)
from .linalg import Field

KEYWORDS = frozenset(
    {"algebra", "field", "vertices", "arrows", "relations", "lenbound", "module", "over", "dims", "arrow", "string", "env"}
)
_SYMBOLS = ("->", "^-1", "{", "}", "(", ")", "[", "]", ",", ";", ":", "*", "+", "-", "/", "=", "<", ">")


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "int", "sym", "eof"
    text: str
    line: int
    col: int


def _is_id_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_id_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_'"


def tokenize(text: str) -> list[Token]:
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if _is_id_start(ch):
            j = i + 1
            while j < n and _is_id_char(text[j]):
                j += 1
            toks.append(Token("id", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit() and ch.isascii():
            j = i + 1
            while j < n and text[j].isdigit() and text[j].isascii():
                j += 1
            toks.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for s in _SYMBOLS:
            if text.startswith(s, i):
                toks.append(Token("sym", s, line, col))
                i += len(s)
                col += len(s)
                break
        else:
            raise DSLSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# structured results


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths; each path is a tuple of arrow names."""

    terms: tuple  # tuple of (Fraction, tuple[str, ...])


@dataclass(frozen=True)
class QuiverPresentation:
    name: str
    p: int | None
    vertices: tuple
    arrows: tuple
    relations: tuple
    length_bound: int | None = None

    @property
    def field(self) -> Field:
        return Field(self.p)

    @property
    def field_spec(self) -> str:
        return "Q" if self.p is None else f"F<{self.p}>"

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    @property
    def arrow_names(self) -> tuple:
        return tuple(a.name for a in self.arrows)

    def path_source(self, path) -> str:
        return self.arrow(path[-1]).source

    def path_target(self, path) -> str:
        return self.arrow(path[0]).target

    def is_special_biserial_syntax(self) -> bool:
        """At most two arrows start and at most two arrows end at each vertex."""
        for v in self.vertices:
            if sum(a.source == v for a in self.arrows) > 2 or sum(a.target == v for a in self.arrows) > 2:
                return False
        return True

    def serialize(self) -> str:
        return serialize(self)


@dataclass(frozen=True)
class ModuleSpec:
    name: str
    algebra: str
    dims: tuple  # ((vertex key, int), ...) in the algebra's vertex order
    actions: tuple  # ((arrow key, matrix as tuple of row tuples of Fraction), ...)
    env: tuple | None = None  # (A, B) for bimodule definitions

    def dims_map(self) -> dict:
        return dict(self.dims)

    def actions_map(self) -> dict:
        return dict(self.actions)

    def serialize(self) -> str:
        return serialize(self)


@dataclass(frozen=True)
class StringWord:
    """A walk of direct and inverse letters, read right to left.

    ``letters[k] = (arrow name, inverse?)``.  For the empty word at a vertex
    ``letters`` is empty and ``vertex`` names the vertex.
    """

    name: str
    algebra: str
    letters: tuple
    vertex: str | None = None

    def serialize(self) -> str:
        return serialize(self)

    def __len__(self):
        return len(self.letters)


@dataclass
class Document:
    algebras: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    strings: dict = dc_field(default_factory=dict)
    order: list = dc_field(default_factory=list)


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, expected: str, tok: Token | None = None):
        tok = tok or self.tok
        found = tok.text if tok.kind != "eof" else "end of input"
        raise DSLSyntaxError(f"expected {expected}, found {found!r}", tok.line, tok.col, expected=expected)

    def at_sym(self, s: str) -> bool:
        t = self.tok
        return t.kind == "sym" and t.text == s

    def at_kw(self, kw: str) -> bool:
        t = self.tok
        return t.kind == "id" and t.text == kw

    def expect_sym(self, s: str) -> Token:
        if not self.at_sym(s):
            self.error(repr(s))
        t = self.tok
        self.i += 1
        return t

    def expect_kw(self, kw: str) -> Token:
        if not self.at_kw(kw):
            self.error(repr(kw))
        t = self.tok
        self.i += 1
        return t

    def expect_id(self, what="identifier") -> Token:
        t = self.tok
        if t.kind != "id" or t.text in KEYWORDS:
            self.error(what)
        self.i += 1
        return t

    def expect_int(self) -> Token:
        t = self.tok
        if t.kind != "int":
            self.error("integer")
        self.i += 1
        return t

    # grammar
    def document(self, context: Mapping | None = None) -> Document:
        doc = Document()
        known = dict(context or {})
        while self.tok.kind != "eof":
            if self.at_kw("algebra"):
                p = self.algebra()
                if p.name in doc.algebras:
                    raise DuplicateName(f"algebra {p.name} defined twice")
                doc.algebras[p.name] = p
                known[p.name] = p
                doc.order.append(("algebra", p.name))
            elif self.at_kw("module"):
                m = self.module(known)
                doc.modules[m.name] = m
                doc.order.append(("module", m.name))
            elif self.at_kw("string"):
                s = self.string(known)
                doc.strings[s.name] = s
                doc.order.append(("string", s.name))
            else:
                self.error("'algebra', 'module' or 'string'")
        return doc

    def algebra(self) -> QuiverPresentation:
        self.expect_kw("algebra")
        name = self.expect_id("algebra name").text
        self.expect_sym("{")
        p = None
        vertices: list[Token] = []
        arrows: list[tuple[Token, Token, Token]] = []
        relations: list[list] = []
        lenbound = None
        seen = set()
        while not self.at_sym("}"):
            t = self.tok
            if t.kind != "id" or t.text not in ("field", "vertices", "arrows", "relations", "lenbound"):
                self.error("'field', 'vertices', 'arrows', 'relations', 'lenbound' or '}'")
            if t.text in seen:
                raise DSLSyntaxError(f"statement {t.text!r} given twice", t.line, t.col)
            seen.add(t.text)
            self.i += 1
            if t.text == "field":
                p = self.field_spec()
                self.expect_sym(";")
            elif t.text == "vertices":
                vertices.append(self.expect_id("vertex name"))
                while self.at_sym(","):
                    self.i += 1
                    vertices.append(self.expect_id("vertex name"))
                self.expect_sym(";")
            elif t.text == "arrows":
                arrows.append(self.arrow_decl())
                while self.at_sym(","):
                    self.i += 1
                    arrows.append(self.arrow_decl())
                self.expect_sym(";")
            elif t.text == "relations":
                relations.append(self.rel())
                self.expect_sym(";")
                while self._starts_rel():
                    relations.append(self.rel())
                    self.expect_sym(";")
            else:
                lb = self.expect_int()
                lenbound = int(lb.text)
                if lenbound < 1:
                    raise DSLSyntaxError("lenbound must be positive", lb.line, lb.col)
                self.expect_sym(";")
        self.expect_sym("}")
        if not vertices:
            self.error("'vertices' statement")
        return _validate_presentation(name, p, vertices, arrows, relations, lenbound)

    def _starts_rel(self) -> bool:
        t = self.tok
        if t.kind == "int" or (t.kind == "sym" and t.text == "-"):
            return True
        return t.kind == "id" and t.text not in KEYWORDS

    def field_spec(self):
        t = self.tok
        if t.kind == "id" and t.text == "Q":
            self.i += 1
            return None
        if t.kind == "id" and t.text == "F":
            self.i += 1
            self.expect_sym("<")
            pt = self.expect_int()
            self.expect_sym(">")
            p = int(pt.text)
            try:
                Field(p)
            except ValueError:
                raise DSLSyntaxError(f"F<{p}>: {p} is not a prime", pt.line, pt.col, expected="prime")
            return p
        self.error("'Q' or 'F<p>'")

    def arrow_decl(self):
        a = self.expect_id("arrow name")
        self.expect_sym(":")
        s = self.expect_id("vertex name")
        self.expect_sym("->")
        t = self.expect_id("vertex name")
        return a, s, t

    def coeff(self) -> Fraction:
        n = int(self.expect_int().text)
        if self.at_sym("/"):
            self.i += 1
            dt = self.expect_int()
            d = int(dt.text)
            if d == 0:
                raise DSLSyntaxError("zero denominator", dt.line, dt.col)
            return Fraction(n, d)
        return Fraction(n)

    def rel(self) -> list:
        terms = []
        sign = 1
        if self.at_sym("-"):
            self.i += 1
            sign = -1
        terms.append(self.term(sign))
        while self.at_sym("+") or self.at_sym("-"):
            sign = 1 if self.tok.text == "+" else -1
            self.i += 1
            terms.append(self.term(sign))
        return terms

    def term(self, sign):
        c = Fraction(1)
        if self.tok.kind == "int":
            c = self.coeff()
            self.expect_sym("*")
        path = [self.expect_id("arrow name")]
        while self.at_sym("*"):
            self.i += 1
            path.append(self.expect_id("arrow name"))
        return sign * c, path

    def algebra_ref(self):
        if self.at_kw("env"):
            self.i += 1
            self.expect_sym("(")
            a = self.expect_id("algebra name")
            self.expect_sym(",")
            b = self.expect_id("algebra name")
            self.expect_sym(")")
            return (a, b)
        return self.expect_id("algebra name")

    def key(self, env: bool):
        if not env:
            return self.expect_id()
        lp = self.expect_sym("(")
        a = self.expect_id()
        self.expect_sym(",")
        b = self.expect_id()
        self.expect_sym(")")
        return (a, b, lp)

    def module(self, known: Mapping) -> ModuleSpec:
        self.expect_kw("module")
        name = self.expect_id("module name").text
        self.expect_kw("over")
        ref = self.algebra_ref()
        env = isinstance(ref, tuple)
        self.expect_sym("{")
        self.expect_kw("dims")
        self.expect_sym("{")
        dims = []
        if not self.at_sym("}"):
            k = self.key(env)
            self.expect_sym(":")
            dims.append((k, int(self.expect_int().text)))
            while self.at_sym(","):
                self.i += 1
                k = self.key(env)
                self.expect_sym(":")
                dims.append((k, int(self.expect_int().text)))
        self.expect_sym("}")
        self.expect_sym(";")
        actions = []
        while self.at_kw("arrow"):
            self.i += 1
            k = self.key(env)
            self.expect_sym("=")
            actions.append((k, self.matrix()))
            self.expect_sym(";")
        self.expect_sym("}")
        return _validate_module(name, ref, dims, actions, known)

    def rat(self) -> Fraction:
        sign = 1
        if self.at_sym("-"):
            self.i += 1
            sign = -1
        return sign * self.coeff()

    def matrix(self):
        start = self.expect_sym("[")
        rows = []
        if not self.at_sym("]"):
            rows.append(self.row())
            while self.at_sym(","):
                self.i += 1
                rows.append(self.row())
        self.expect_sym("]")
        return rows, start

    def row(self):
        self.expect_sym("[")
        vals = []
        if not self.at_sym("]"):
            vals.append(self.rat())
            while self.at_sym(","):
                self.i += 1
                vals.append(self.rat())
        self.expect_sym("]")
        return tuple(vals)

    def string(self, known: Mapping) -> StringWord:
        self.expect_kw("string")
        name = self.expect_id("string name").text
        self.expect_kw("over")
        alg = self.expect_id("algebra name")
        if alg.text not in known:
            raise UndeclaredName(f"unknown algebra {alg.text}", alg.line, alg.col)
        self.expect_sym("=")
        letters = self.word()
        self.expect_sym(";")
        return _validate_word(name, known[alg.text], letters)

    def word(self):
        letters = [self.letter()]
        while self.at_sym("*"):
            self.i += 1
            letters.append(self.letter())
        return letters

    def letter(self):
        t = self.expect_id("arrow name")
        inv = False
        if self.at_sym("^-1"):
            self.i += 1
            inv = True
        return t, inv


# ---------------------------------------------------------------------------
# validation


def _validate_presentation(name, p, vertex_toks, arrow_toks, rel_terms, lenbound) -> QuiverPresentation:
    vertices = []
    for t in vertex_toks:
        if t.text in vertices:
            raise DuplicateName(f"vertex {t.text} declared twice", t.line, t.col)
        vertices.append(t.text)
    arrows = {}
    for a, s, tt in arrow_toks:
        if a.text in arrows or a.text in vertices:
            raise DuplicateName(f"name {a.text} declared twice", a.line, a.col)
        for v in (s, tt):
            if v.text not in vertices:
                raise UndeclaredName(f"arrow {a.text} uses undeclared vertex {v.text}", v.line, v.col)
        arrows[a.text] = Arrow(a.text, s.text, tt.text)
    relations = []
    for terms in rel_terms:
        combined: dict = {}
        ends = None
        for c, path in terms:
            for t in path:
                if t.text not in arrows:
                    raise UndeclaredName(f"relation uses undeclared arrow {t.text}", t.line, t.col)
            if len(path) < 2:
                t = path[0]
                raise NonAdmissibleRelation(f"path of length {len(path)} in a relation", t.line, t.col)
            for left, right in zip(path, path[1:]):
                if arrows[left.text].source != arrows[right.text].target:
                    raise NonComposablePath(
                        f"{left.text}*{right.text}: {right.text} ends at {arrows[right.text].target}, "
                        f"{left.text} starts at {arrows[left.text].source}",
                        left.line,
                        left.col,
                    )
            st = (arrows[path[-1].text].source, arrows[path[0].text].target)
            if ends is None:
                ends = st
            elif ends != st:
                t = path[0]
                raise NonComposablePath("terms of a relation have different endpoints", t.line, t.col)
            key = tuple(t.text for t in path)
            combined[key] = combined.get(key, Fraction(0)) + c
        rel = tuple((c, k) for k, c in combined.items() if c != 0)
        if p is not None:
            rel = tuple((c, k) for c, k in rel if Field(p).frac(c.numerator, c.denominator))
        if rel:
            relations.append(Relation(rel))
    return QuiverPresentation(name, p, tuple(vertices), tuple(arrows.values()), tuple(relations), lenbound)


def _zero_rows(shape):
    r, c = shape
    if r == 0 or c == 0:
        return ()
    return tuple(tuple(Fraction(0) for _ in range(c)) for _ in range(r))


def _check_shape(key_text, rows, shape, tok):
    r, c = shape
    if len(rows) == 0 and (r == 0 or c == 0):
        return ()
    if len(rows) != r or any(len(row) != c for row in rows):
        given = (len(rows), len(rows[0]) if rows else 0)
        raise ShapeMismatch(f"arrow {key_text}: expected shape {r}x{c}, given {given[0]}x{given[1]}", tok.line, tok.col)
    return tuple(tuple(row) for row in rows)


def _validate_module(name, ref, dims, actions, known) -> ModuleSpec:
    if isinstance(ref, tuple):
        ta, tb = ref
        for t in (ta, tb):
            if t.text not in known:
                raise UndeclaredName(f"unknown algebra {t.text}", t.line, t.col)
        A, B = known[ta.text], known[tb.text]
        verts = [(v, w) for v in A.vertices for w in B.vertices]
        dim_map = {}
        for (a, b, lp), n in dims:
            k = (a.text, b.text)
            if k not in set(verts):
                raise UndeclaredName(f"({a.text}, {b.text}) is not a vertex of env({A.name}, {B.name})", lp.line, lp.col)
            dim_map[k] = n
        dims_t = tuple((v, dim_map.get(v, 0)) for v in verts)
        acts = {}
        for (a, b, lp), (rows, mt) in actions:
            if a.text in A.arrow_names and b.text in B.vertices:
                arr = A.arrow(a.text)
                src, tgt = (arr.source, b.text), (arr.target, b.text)
            elif a.text in A.vertices and b.text in B.arrow_names:
                arr = B.arrow(b.text)
                # right action by b sends x*e_{target} to x*e_{source}
                src, tgt = (a.text, arr.target), (a.text, arr.source)
            else:
                raise UnknownArrow(f"({a.text}, {b.text}) is not a generator of env({A.name}, {B.name})", lp.line, lp.col)
            k = (a.text, b.text)
            acts[k] = _check_shape(f"({a.text}, {b.text})", rows, (dim_map.get(tgt, 0), dim_map.get(src, 0)), mt)
        full = []
        for arr in A.arrows:
            for w in B.vertices:
                shape = (dim_map.get((arr.target, w), 0), dim_map.get((arr.source, w), 0))
                full.append(((arr.name, w), acts.get((arr.name, w), _zero_rows(shape))))
        for v in A.vertices:
            for arr in B.arrows:
                shape = (dim_map.get((v, arr.source), 0), dim_map.get((v, arr.target), 0))
                full.append(((v, arr.name), acts.get((v, arr.name), _zero_rows(shape))))
        alg = f"env({A.name},{B.name})"
        return ModuleSpec(name, alg, dims_t, tuple(full), env=(A.name, B.name))
    if ref.text not in known:
        raise UndeclaredName(f"unknown algebra {ref.text}", ref.line, ref.col)
    A = known[ref.text]
    dim_map = {}
    for t, n in dims:
        if t.text not in A.vertices:
            raise UndeclaredName(f"{t.text} is not a vertex of {A.name}", t.line, t.col)
        dim_map[t.text] = n
    dims_t = tuple((v, dim_map.get(v, 0)) for v in A.vertices)
    acts = {}
    for t, (rows, mt) in actions:
        if t.text not in A.arrow_names:
            raise UnknownArrow(f"{t.text} is not an arrow of {A.name}", t.line, t.col)
        arr = A.arrow(t.text)
        acts[t.text] = _check_shape(t.text, rows, (dim_map.get(arr.target, 0), dim_map.get(arr.source, 0)), mt)
    full = []
    for arr in A.arrows:
        shape = (dim_map.get(arr.target, 0), dim_map.get(arr.source, 0))
        full.append((arr.name, acts.get(arr.name, _zero_rows(shape))))
    return ModuleSpec(name, A.name, dims_t, tuple(full))


def _validate_word(name, p: QuiverPresentation, letters) -> StringWord:
    if len(letters) == 1 and not letters[0][1] and letters[0][0].text in p.vertices:
        return StringWord(name, p.name, (), vertex=letters[0][0].text)
    names = p.arrow_names
    out = []
    for t, inv in letters:
        if t.text not in names:
            raise UnknownArrow(f"{t.text} is not an arrow of {p.name}", t.line, t.col)
        out.append((t.text, inv))
    for k in range(len(out) - 1):
        (a, ia), (b, ib) = out[k], out[k + 1]
        if a == b and ia != ib:
            t = letters[k][0]
            raise ImmediateInverse(f"letter {a} is followed by its own inverse", t.line, t.col)
        # b is walked first; its end must be where a starts
        arr_a, arr_b = p.arrow(a), p.arrow(b)
        start_a = arr_a.target if ia else arr_a.source
        end_b = arr_b.source if ib else arr_b.target
        if start_a != end_b:
            t = letters[k][0]
            raise NonComposableWalk(f"walk breaks between {b} (ends at {end_b}) and {a} (starts at {start_a})", t.line, t.col)
    return StringWord(name, p.name, tuple(out))


# ---------------------------------------------------------------------------
# public entry points


def parse_document(text: str, context: Mapping | None = None) -> Document:
    """Parse any sequence of algebra, module and string definitions."""
    return _Parser(text).document(context)


def parse_presentation(text: str) -> QuiverPresentation:
    """Parse a text holding exactly one algebra definition."""
    ps = _Parser(text)
    pres = ps.algebra()
    if ps.tok.kind != "eof":
        ps.error("end of input")
    return pres


def _context(p) -> dict:
    if isinstance(p, QuiverPresentation):
        return {p.name: p}
    return dict(p)


def parse_module_def(text: str, p) -> ModuleSpec:
    """Parse one module definition; ``p`` is a presentation or a name -> presentation map."""
    ps = _Parser(text)
    m = ps.module(_context(p))
    if ps.tok.kind != "eof":
        ps.error("end of input")
    return m


def parse_string_word(text: str, p: QuiverPresentation, name: str = "w") -> StringWord:
    """Parse ``string NAME over ALG = ... ;`` or a bare word such as ``a^-1 * b``."""
    ps = _Parser(text)
    if ps.at_kw("string"):
        w = ps.string(_context(p))
    else:
        letters = ps.word()
        if ps.at_sym(";"):
            ps.i += 1
        w = _validate_word(name, p, letters)
    if ps.tok.kind != "eof":
        ps.error("end of input")
    return w


# ---------------------------------------------------------------------------
# canonical serialization


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_relation(rel: Relation) -> str:
    parts = []
    for k, (c, path) in enumerate(rel.terms):
        body = "*".join(path)
        mag = abs(c)
        if mag != 1:
            body = f"{_fmt_frac(mag)}*{body}"
        if k == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def _fmt_matrix(rows) -> str:
    return "[" + ", ".join("[" + ", ".join(_fmt_frac(x) for x in r) + "]" for r in rows) + "]"


def _fmt_key(k) -> str:
    return f"({k[0]}, {k[1]})" if isinstance(k, tuple) else k


def serialize(obj) -> str:
    """Canonical text for a presentation, module spec or string word."""
    if isinstance(obj, QuiverPresentation):
        lines = [f"algebra {obj.name} {{", f"  field {obj.field_spec};", f"  vertices {', '.join(obj.vertices)};"]
        if obj.arrows:
            lines.append("  arrows " + ", ".join(f"{a.name}: {a.source} -> {a.target}" for a in obj.arrows) + ";")
        if obj.relations:
            lines.append("  relations " + "; ".join(_fmt_relation(r) for r in obj.relations) + ";")
        if obj.length_bound is not None:
            lines.append(f"  lenbound {obj.length_bound};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    if isinstance(obj, ModuleSpec):
        over = f"env({obj.env[0]}, {obj.env[1]})" if obj.env else obj.algebra
        dims = ", ".join(f"{_fmt_key(k)}: {n}" for k, n in obj.dims)
        lines = [f"module {obj.name} over {over} {{", f"  dims {{{dims}}};"]
        for k, rows in obj.actions:
            if rows:
                lines.append(f"  arrow {_fmt_key(k)} = {_fmt_matrix(rows)};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    if isinstance(obj, StringWord):
        if not obj.letters:
            body = obj.vertex
        else:
            body = " * ".join(a + ("^-1" if inv else "") for a, inv in obj.letters)
        return f"string {obj.name} over {obj.algebra} = {body};\n"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
