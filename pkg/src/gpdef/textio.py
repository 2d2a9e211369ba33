"""Loading definition files into realized objects, and writing modules back as text."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .algebra import Algebra, build_path_algebra, enveloping
from .errors import InputError, UndeclaredName
from .modules import Bimodule, Module, realize, string_module
from .presentation import ModuleSpec, parse_document, serialize

LENBOUND_ENV = "GPDEF_LENBOUND"


def lenbound_override() -> int | None:
    raw = os.environ.get(LENBOUND_ENV)
    if raw is None or not raw.strip():
        return None
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"{LENBOUND_ENV} must be a positive integer, got {raw!r}") from None
    if n <= 0:
        raise InputError(f"{LENBOUND_ENV} must be a positive integer, got {raw!r}")
    return n


@dataclass
class Workspace:
    """Everything defined by one or more files, realized in definition order.

    Algebras with identical canonical text are realized once, so that files
    sharing an algebra definition produce bimodules over the same object.
    """

    algebras: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    bimodules: dict = field(default_factory=dict)
    order: list = field(default_factory=list)
    _by_text: dict = field(default_factory=dict)

    def algebra(self, name: str) -> Algebra:
        try:
            return self.algebras[name]
        except KeyError:
            raise UndeclaredName(f"unknown algebra {name!r}") from None

    def add_text(self, text: str, source: str = "<input>"):
        context = {n: A.presentation for n, A in self.algebras.items()}
        try:
            doc = parse_document(text, context)
        except InputError as e:
            e.source = source
            raise
        for kind, name in doc.order:
            if kind == "algebra":
                p = doc.algebras[name]
                canon = serialize(p)
                A = self._by_text.get(canon)
                if A is None:
                    A = build_path_algebra(p, lenbound_override())
                    self._by_text[canon] = A
                self.algebras[name] = A
            elif kind == "module":
                spec = doc.modules[name]
                if spec.env is not None:
                    L, R = self.algebra(spec.env[0]), self.algebra(spec.env[1])
                    M = realize(spec, enveloping(L, R))
                    self.bimodules[name] = Bimodule(M, L, R)
                else:
                    self.modules[name] = realize(spec, self.algebra(spec.algebra))
            else:
                w = doc.strings[name]
                self.modules[name] = string_module(w, self.algebra(w.algebra))
            self.order.append((kind, name))
        return self

    def add_file(self, path):
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}") from None
        return self.add_text(text, str(path))

    def last(self, kind: str):
        """Name of the most recently defined module (``kind="module"``) or bimodule."""
        want = kind == "bimodule"
        names = [n for k, n in self.order if k != "algebra" and (n in self.bimodules) == want]
        return names[-1] if names else None


def load(*paths) -> Workspace:
    ws = Workspace()
    for p in paths:
        ws.add_file(p)
    return ws


def _frac(F, a) -> Fraction:
    return Fraction(F.format(a))


def _rows(m, F) -> tuple:
    if m.is_zero():
        return ()
    return tuple(tuple(_frac(F, a) for a in r) for r in m.tolist())


def module_spec(M: Module, name: str | None = None) -> ModuleSpec:
    """Text-level description of a module over a quiver-presented algebra."""
    A = M.algebra
    if getattr(A, "presentation", None) is None:
        raise InputError(f"{A.name} has no quiver presentation")
    dims = tuple((A.vertex_names[v], M.dims[v]) for v in range(A.nvertices))
    actions = []
    for arrow in A.presentation.arrows:
        g = A.arrow_basis.get(arrow.name)
        if g is not None:
            actions.append((arrow.name, _rows(M.act[g], M.field)))
    return ModuleSpec(name or M.name or "M", A.name, dims, tuple(actions))


def bimodule_spec(X: Bimodule, name: str | None = None) -> ModuleSpec:
    """Text-level description of a bimodule, keyed by vertex pairs."""
    L, R = X.left, X.right
    F = X.module.field
    dims = []
    for v in range(L.nvertices):
        for w in range(R.nvertices):
            dims.append(((L.vertex_names[v], R.vertex_names[w]), X.block(v, w)))
    actions = []
    for arrow in L.presentation.arrows:
        g = L.arrow_basis.get(arrow.name)
        if g is None:
            continue
        for w in range(R.nvertices):
            actions.append(((arrow.name, R.vertex_names[w]), _rows(X.left_action(g, w), F)))
    for v in range(L.nvertices):
        for arrow in R.presentation.arrows:
            h = R.arrow_basis.get(arrow.name)  # the opposite shares basis indices
            if h is None:
                continue
            actions.append(((L.vertex_names[v], arrow.name), _rows(X.right_action(v, h), F)))
    return ModuleSpec(name or X.name or "X", L.name, tuple(dims), tuple(actions), env=(L.name, R.name))


def bimodule_text(X: Bimodule, name: str) -> str:
    """A self-contained file: the algebra definitions followed by the bimodule."""
    parts = [serialize(X.left.presentation)]
    if X.right is not X.left:
        parts.append(serialize(X.right.presentation))
    parts.append(serialize(bimodule_spec(X, name)))
    return "\n".join(parts)


def module_text(M: Module, name: str) -> str:
    return serialize(M.algebra.presentation) + "\n" + serialize(module_spec(M, name))
