"""Finite-dimensional basic algebras given by a basis and structure constants.

Every algebra here is *split basic* with a distinguished basis in which

* each basis element ``b`` lives in one idempotent block: ``b = e_t b e_s``
  (``source[b] = s``, ``target[b] = t``);
* the vertex idempotents are themselves basis elements;
* every other basis element factors as ``g * rest`` with ``g`` a generator
  (an "arrow") and ``rest`` a basis element of smaller word length.

The factorization is what lets modules store only generator matrices while
still evaluating the action of any basis element by dynamic programming.
Path algebras come from a noncommutative Groebner basis (length-lex order)
computed by overlap completion.
"""

from __future__ import annotations

import heapq
import os
import random
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .errors import FieldMismatch, NotFiniteDimensional, SidedStructureMismatch
from .linalg import Field, vec_axpy
from .presentation import QuiverPresentation, parse_presentation

DEFAULT_LENGTH_BOUND = 30
MAX_RULES = 5000


@dataclass(frozen=True)
class AlgebraRelation:
    """``sum coeff * word`` acts as zero; words are tuples of generator indices.

    The empty word stands for the idempotent at ``source`` (= ``target``).
    """

    name: str
    source: int
    target: int
    terms: tuple


class Algebra:
    """Immutable algebra object.  See the module docstring for conventions."""

    def __init__(
        self,
        *,
        name: str,
        field: Field,
        labels: list,
        vertex_names: list,
        idempotents: list,
        source: list,
        target: list,
        generators: list,
        decomposition: Mapping,
        product: Callable[[int, int], dict],
        relations: Iterable[AlgebraRelation] | None = None,
        kind: str = "generic",
    ):
        self.name = name
        self.field = field
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.vertex_names = tuple(vertex_names)
        self.nvertices = len(self.vertex_names)
        self.idempotents = tuple(idempotents)
        self.source = tuple(source)
        self.target = tuple(target)
        self.generators = tuple(generators)
        self.decomposition = dict(decomposition)
        self._product = product
        self.kind = kind
        self._vertex_of_idem = {e: v for v, e in enumerate(self.idempotents)}
        self._words: dict = {}
        for b in range(self.dim):
            self.word(b)
        order = sorted(range(self.dim), key=lambda b: (len(self._words[b]), b))
        self.by_source = tuple(tuple(b for b in order if self.source[b] == v) for v in range(self.nvertices))
        self.by_target = tuple(tuple(b for b in order if self.target[b] == v) for v in range(self.nvertices))
        self._gen_set = frozenset(self.generators)
        self._relations = tuple(relations) if relations is not None else None
        self._lock = threading.RLock()
        self._cache: dict = {}

    # -- basic structure ------------------------------------------------
    def __repr__(self):
        return f"Algebra({self.name}, dim={self.dim}, field={self.field!r})"

    def is_idempotent(self, b: int) -> bool:
        return b in self._vertex_of_idem

    def vertex_of_idempotent(self, b: int) -> int:
        return self._vertex_of_idem[b]

    def vertex_index(self, name) -> int:
        if isinstance(name, int):
            return name
        return self.vertex_names.index(name)

    def basis_index(self, label: str) -> int:
        return self.labels.index(label)

    def word(self, b: int) -> tuple:
        """Generator word with ``b = w[0] * w[1] * ... `` (last letter acts first)."""
        w = self._words.get(b)
        if w is None:
            if b in self._vertex_of_idem:
                w = ()
            else:
                g, rest = self.decomposition[b]
                w = (g,) + self.word(rest)
            self._words[b] = w
        return w

    def word_length(self, b: int) -> int:
        return len(self.word(b))

    @property
    def unit(self) -> dict:
        one = self.field.one
        return {e: one for e in self.idempotents}

    def mul(self, i: int, j: int) -> dict:
        """Product of basis elements ``i * j`` as a sparse coefficient vector."""
        if self.source[i] != self.target[j]:
            return {}
        one = self.field.one
        if i in self._vertex_of_idem:
            return {j: one}
        if j in self._vertex_of_idem:
            return {i: one}
        return self._product(i, j)

    def mul_vec(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                p = self.mul(i, j)
                if p:
                    vec_axpy(out, a * b, p)
        return out

    def memo(self, key, compute):
        """Thread-safe get-or-compute for derived data attached to this algebra."""
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        val = compute()
        with self._lock:
            return self._cache.setdefault(key, val)

    @property
    def relations(self) -> tuple:
        """Defining relations in generator words (generic presentation if none given)."""
        if self._relations is None:
            self._relations = tuple(generic_relations(self))
        return self._relations

    def structure_constants(self):
        for i in range(self.dim):
            for j in range(self.dim):
                for k, c in sorted(self.mul(i, j).items()):
                    yield i, j, k, c

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "name": self.name,
            "field": repr(self.field),
            "dim": self.dim,
            "basis": list(self.labels),
            "vertices": list(self.vertex_names),
            "idempotents": list(self.idempotents),
            "structure_constants": [[i, j, k, fmt(c)] for i, j, k, c in self.structure_constants()],
        }

    def structurally_equal(self, other: "Algebra") -> bool:
        if self.labels != other.labels or self.idempotents != other.idempotents or self.field is not other.field:
            return False
        return all(self.mul(i, j) == other.mul(i, j) for i in range(self.dim) for j in range(self.dim))

    # -- derived algebras (cached) ------------------------------------------
    def opposite(self) -> "Algebra":
        return opposite(self)

    def tensor(self, other: "Algebra") -> "Algebra":
        return tensor_algebras(self, other)


def generic_relations(A: Algebra) -> list:
    """``g * word(b) = sum c_k word(b_k)`` for every generator g and basis element b."""
    rels = []
    one = A.field.one
    for g in A.generators:
        for b in A.by_target[A.source[g]]:
            prod = A.mul(g, b)
            lhs = (g,) + A.word(b)
            if len(prod) == 1:
                (k, c), = prod.items()
                if c == one and A.word(k) == lhs:
                    continue
            terms = [(one, lhs)] + [(-c, A.word(k)) for k, c in sorted(prod.items())]
            rels.append(AlgebraRelation(f"{A.labels[g]}*{A.labels[b]}", A.source[b], A.target[g], tuple(terms)))
    return rels


# ---------------------------------------------------------------------------
# path algebras


def _order_key(path: tuple):
    return (len(path), path)


class RewriteSystem:
    """Reduced Groebner basis of a path ideal: tip -> replacement (smaller paths)."""

    def __init__(self, field: Field):
        self.field = field
        self.rules: dict = {}
        self._lengths: list = []
        self._memo: dict = {}

    def _index(self):
        self._lengths = sorted({len(t) for t in self.rules})
        self._memo = {}

    def find(self, path: tuple):
        rules = self.rules
        n = len(path)
        for L in self._lengths:
            if L > n:
                break
            for pos in range(n - L + 1):
                sub = path[pos : pos + L]
                if sub in rules:
                    return pos, sub
        return None

    def nf_path(self, path: tuple) -> dict:
        memo = self._memo
        r = memo.get(path)
        if r is not None:
            return r
        hit = self.find(path)
        if hit is None:
            r = {path: self.field.one}
        else:
            pos, tip = hit
            pre, post = path[:pos], path[pos + len(tip) :]
            r = {}
            for u, c in self.rules[tip].items():
                vec_axpy(r, c, self.nf_path(pre + u + post))
        memo[path] = r
        return r

    def normal_form(self, poly: Mapping) -> dict:
        out: dict = {}
        for t, c in poly.items():
            vec_axpy(out, c, self.nf_path(t))
        return out

    def tip(self, poly: Mapping):
        return max(poly, key=_order_key)

    def add(self, poly: Mapping):
        """Insert a reduced nonzero polynomial; returns (tip, displaced polys)."""
        tip = self.tip(poly)
        inv = -self.field.one / poly[tip]
        self.rules[tip] = {u: c * inv for u, c in poly.items() if u != tip}
        displaced = []
        for t in list(self.rules):
            if t != tip and _contains(t, tip):
                rep = self.rules.pop(t)
                p = {u: -c for u, c in rep.items()}
                p[t] = self.field.one
                displaced.append(p)
        self._index()
        return tip, displaced

    def interreduce(self):
        changed = True
        while changed:
            changed = False
            for t in list(self.rules):
                rep = self.rules[t]
                del self.rules[t]
                self._index()
                new = self.normal_form(rep)
                self.rules[t] = new
                if new != rep:
                    changed = True
            self._index()


def _contains(big: tuple, small: tuple) -> bool:
    n, m = len(big), len(small)
    return any(big[i : i + m] == small for i in range(n - m + 1))


def complete(relations: list, field: Field, max_rules: int = MAX_RULES) -> RewriteSystem:
    """Overlap completion (Buchberger/Mora for path algebras) to a reduced Groebner basis."""
    rs = RewriteSystem(field)
    queue = list(relations)
    pairs: list = []
    counter = 0

    def push_pairs(tip):
        nonlocal counter
        for other in list(rs.rules):
            for u, v in ((tip, other), (other, tip)):
                for k in range(1, min(len(u), len(v))):
                    if u[-k:] == v[:k]:
                        counter += 1
                        heapq.heappush(pairs, (len(u) + len(v) - k, counter, u, v, k))

    while queue or pairs:
        if queue:
            poly = rs.normal_form(queue.pop())
            if not poly:
                continue
            tip, displaced = rs.add(poly)
            if len(rs.rules) > max_rules:
                raise NotFiniteDimensional(f"completion exceeded {max_rules} rules", witness=tip)
            queue.extend(displaced)
            push_pairs(tip)
            continue
        _, _, u, v, k = heapq.heappop(pairs)
        if u not in rs.rules or v not in rs.rules:
            continue
        s: dict = {}
        for t, c in rs.rules[u].items():
            vec_axpy(s, c, {t + v[k:]: field.one})
        for t, c in rs.rules[v].items():
            vec_axpy(s, -c, {u[:-k] + t: field.one})
        s = rs.normal_form(s)
        if s:
            queue.append(s)
    rs.interreduce()
    return rs


def _length_bound(p: QuiverPresentation, override) -> int:
    if override is not None:
        return override
    env = os.environ.get("GPDEF_LENBOUND")
    if env:
        return int(env)
    if p.length_bound is not None:
        return p.length_bound
    return DEFAULT_LENGTH_BOUND


def build_path_algebra(p: QuiverPresentation, length_bound: int | None = None) -> Algebra:
    """Realize ``kQ/<relations>`` with basis the irreducible paths.

    Raises NotFiniteDimensional when an irreducible path of length
    ``length_bound`` exists (the witness path is attached).
    """
    field = p.field
    bound = _length_bound(p, length_bound)
    vnames = list(p.vertices)
    vidx = {v: k for k, v in enumerate(vnames)}
    anames = [a.name for a in p.arrows]
    aidx = {a: k for k, a in enumerate(anames)}
    asrc = [vidx[a.source] for a in p.arrows]
    atgt = [vidx[a.target] for a in p.arrows]
    polys = []
    for rel in p.relations:
        poly: dict = {}
        for c, path in rel.terms:
            vec_axpy(poly, field.frac(c.numerator, c.denominator), {tuple(aidx[a] for a in path): field.one})
        if poly:
            polys.append(poly)
    rs = complete(polys, field)
    tip_lengths = sorted({len(t) for t in rs.rules})

    def irreducible_prefix(q):
        for L in tip_lengths:
            if L > len(q):
                break
            if q[:L] in rs.rules:
                return False
        return True

    paths = []
    level = [(a,) for a in range(len(anames)) if irreducible_prefix((a,))]
    length = 1
    while level:
        level.sort()
        for q in level:
            if len(q) >= bound:
                witness = "*".join(anames[a] for a in q)
                raise NotFiniteDimensional(f"irreducible path of length {len(q)} reached the bound {bound}: {witness}", witness=witness)
        paths.extend(level)
        nxt = []
        for q in level:
            t = atgt[q[0]]
            for a in range(len(anames)):
                if asrc[a] == t:
                    cand = (a,) + q
                    if irreducible_prefix(cand):
                        nxt.append(cand)
        level = nxt
        length += 1

    nv = len(vnames)
    labels = [f"e_{v}" for v in vnames] + ["*".join(anames[a] for a in q) for q in paths]
    index = {q: nv + k for k, q in enumerate(paths)}
    source = list(range(nv)) + [asrc[q[-1]] for q in paths]
    target = list(range(nv)) + [atgt[q[0]] for q in paths]
    decomposition = {}
    for q in paths:
        rest = index[q[1:]] if len(q) > 1 else asrc[q[0]]
        decomposition[index[q]] = (index[(q[0],)], rest)
    generators = [index[(a,)] for a in range(len(anames)) if (a,) in index]
    basis_paths = [None] * nv + paths

    def product(i, j):
        hit = rs.nf_path(basis_paths[i] + basis_paths[j])
        return {index[t]: c for t, c in hit.items()}

    rels = []
    for k, rel in enumerate(p.relations):
        terms = []
        for c, path in rel.terms:
            word = []
            for a in path:
                if (aidx[a],) not in index:
                    word = None
                    break
                word.append(index[(aidx[a],)])
            if word is None:
                continue
            terms.append((field.frac(c.numerator, c.denominator), tuple(word)))
        first = rel.terms[0][1]
        rels.append(AlgebraRelation(f"r{k + 1}", vidx[p.arrow(first[-1]).source], vidx[p.arrow(first[0]).target], tuple(terms)))

    A = Algebra(
        name=p.name,
        field=field,
        labels=labels,
        vertex_names=vnames,
        idempotents=list(range(nv)),
        source=source,
        target=target,
        generators=generators,
        decomposition=decomposition,
        product=product,
        relations=rels,
        kind="path",
    )
    A.presentation = p
    A.rewrite_system = rs
    A.arrow_basis = {anames[a]: index[(a,)] for a in range(len(anames)) if (a,) in index}
    A.path_of = basis_paths
    A.path_index = index
    A.arrow_names = anames
    return A


def path_normal_form(A: Algebra, arrow_names: Iterable[str]) -> dict:
    """Normal form of a path given by arrow names (written order) as a basis vector."""
    aidx = {a: k for k, a in enumerate(A.arrow_names)}
    path = tuple(aidx[a] for a in arrow_names)
    if not path:
        raise ValueError("empty path")
    nf = A.rewrite_system.nf_path(path)
    return {A.path_index[t]: c for t, c in nf.items()}


def algebra_from_text(text: str, length_bound: int | None = None) -> Algebra:
    return build_path_algebra(parse_presentation(text), length_bound)


def ground_algebra(field: Field = None) -> Algebra:
    """The one-dimensional algebra k (one vertex, no arrows)."""
    field = field or Field()
    key = ("ground", field.p)
    with _GLOBAL_LOCK:
        A = _GLOBAL.get(key)
        if A is None:
            spec = "Q" if field.p is None else f"F<{field.p}>"
            A = algebra_from_text(f"algebra k {{ field {spec}; vertices pt; }}")
            _GLOBAL[key] = A
    return A


def truncated_polynomial(n: int, field: Field = None) -> Algebra:
    """k[t]/(t^n) as a path algebra on one loop (n = 1 gives k itself)."""
    field = field or Field()
    if n < 1:
        raise ValueError("order must be at least 1")
    if n == 1:
        return ground_algebra(field)
    key = ("trunc", n, field.p)
    with _GLOBAL_LOCK:
        A = _GLOBAL.get(key)
        if A is None:
            spec = "Q" if field.p is None else f"F<{field.p}>"
            rel = "*".join(["t"] * n)
            A = algebra_from_text(f"algebra T{n} {{ field {spec}; vertices o; arrows t: o -> o; relations {rel}; lenbound {n + 1}; }}")
            _GLOBAL[key] = A
    return A


_GLOBAL: dict = {}
_GLOBAL_LOCK = threading.Lock()


# ---------------------------------------------------------------------------
# opposite and tensor algebras


def opposite(A: Algebra) -> Algebra:
    """Same labels, reversed multiplication; ``opposite(opposite(A)) is A``."""

    def build():
        gens = A.generators
        decomposition = {}
        one = A.field.one
        for b in range(A.dim):
            if A.is_idempotent(b):
                continue
            w = A.word(b)
            last = w[-1]
            if len(w) == 1:
                rest = A.idempotents[A.target[b]]
            else:
                vec = {A.idempotents[A.target[w[0]]]: one}
                for g in w[:-1]:
                    vec = _right_mul(A, vec, g)
                if len(vec) != 1 or next(iter(vec.values())) != one:
                    raise ValueError(f"basis element {A.labels[b]} has no prefix factorization")
                rest = next(iter(vec))
            decomposition[b] = (last, rest)
        rels = None
        if A._relations is not None:
            rels = [AlgebraRelation(r.name, r.target, r.source, tuple((c, tuple(reversed(w))) for c, w in r.terms)) for r in A._relations]
        op = Algebra(
            name=f"{A.name}^op",
            field=A.field,
            labels=A.labels,
            vertex_names=A.vertex_names,
            idempotents=A.idempotents,
            source=A.target,
            target=A.source,
            generators=gens,
            decomposition=decomposition,
            product=lambda i, j: A.mul(j, i),
            relations=rels,
            kind=A.kind + "-op",
        )
        op._cache[("opposite",)] = A
        return op

    return A.memo(("opposite",), build)


def _right_mul(A: Algebra, vec: Mapping, g: int) -> dict:
    out: dict = {}
    for i, a in vec.items():
        vec_axpy(out, a, A.mul(i, g))
    return out


class TensorAlgebra(Algebra):
    """``A (x) B`` with basis index ``a * dim B + b`` (pair-lexicographic)."""

    def __init__(self, A: Algebra, B: Algebra):
        if A.field is not B.field:
            raise FieldMismatch(f"{A.name} is over {A.field!r}, {B.name} over {B.field!r}")
        self.left_factor = A
        self.right_factor = B
        dA, dB = A.dim, B.dim
        nB = B.nvertices
        labels = [f"{la}⊗{lb}" for la in A.labels for lb in B.labels]
        vnames = [f"({v},{w})" for v in A.vertex_names for w in B.vertex_names]
        idem = [A.idempotents[v] * dB + B.idempotents[w] for v in range(A.nvertices) for w in range(nB)]
        source = [A.source[a] * nB + B.source[b] for a in range(dA) for b in range(dB)]
        target = [A.target[a] * nB + B.target[b] for a in range(dA) for b in range(dB)]
        gens = [g * dB + B.idempotents[w] for g in A.generators for w in range(nB)]
        gens += [A.idempotents[v] * dB + h for v in range(A.nvertices) for h in B.generators]
        decomposition = {}
        for a in range(dA):
            for b in range(dB):
                if B.is_idempotent(b):
                    if A.is_idempotent(a):
                        continue
                    g, rest = A.decomposition[a]
                    decomposition[a * dB + b] = (g * dB + b, rest * dB + b)
                else:
                    h, rest = B.decomposition[b]
                    decomposition[a * dB + b] = (A.idempotents[A.target[a]] * dB + h, a * dB + rest)

        def product(i, j):
            a1, b1 = divmod(i, dB)
            a2, b2 = divmod(j, dB)
            pa = A.mul(a1, a2)
            if not pa:
                return {}
            pb = B.mul(b1, b2)
            return {x * dB + y: c * d for x, c in pa.items() for y, d in pb.items()}

        super().__init__(
            name=f"{A.name}⊗{B.name}",
            field=A.field,
            labels=labels,
            vertex_names=vnames,
            idempotents=idem,
            source=source,
            target=target,
            generators=gens,
            decomposition=decomposition,
            product=product,
            relations=None,
            kind="tensor",
        )

    def pair(self, a: int, b: int) -> int:
        return a * self.right_factor.dim + b

    def unpair(self, x: int):
        return divmod(x, self.right_factor.dim)

    def vertex_pair(self, v: int, w: int) -> int:
        return v * self.right_factor.nvertices + w

    def unpair_vertex(self, x: int):
        return divmod(x, self.right_factor.nvertices)

    @property
    def relations(self) -> tuple:
        if self._relations is None:
            self._relations = tuple(_tensor_relations(self))
        return self._relations


def _tensor_relations(T: TensorAlgebra) -> list:
    A, B = T.left_factor, T.right_factor
    one = A.field.one
    rels = []
    for w in range(B.nvertices):
        fw = B.idempotents[w]
        for r in A.relations:
            terms = tuple((c, tuple(T.pair(g, fw) for g in word)) for c, word in r.terms)
            rels.append(AlgebraRelation(f"{r.name}⊗e{w}", T.vertex_pair(r.source, w), T.vertex_pair(r.target, w), terms))
    for v in range(A.nvertices):
        ev = A.idempotents[v]
        for r in B.relations:
            terms = tuple((c, tuple(T.pair(ev, h) for h in word)) for c, word in r.terms)
            rels.append(AlgebraRelation(f"e{v}⊗{r.name}", T.vertex_pair(v, r.source), T.vertex_pair(v, r.target), terms))
    for g in A.generators:
        s, t = A.source[g], A.target[g]
        for h in B.generators:
            s2, t2 = B.source[h], B.target[h]
            w1 = (T.pair(g, B.idempotents[t2]), T.pair(A.idempotents[s], h))
            w2 = (T.pair(A.idempotents[t], h), T.pair(g, B.idempotents[s2]))
            rels.append(AlgebraRelation(f"[{A.labels[g]},{B.labels[h]}]", T.vertex_pair(s, s2), T.vertex_pair(t, t2), ((one, w1), (-one, w2))))
    return rels


def tensor_algebras(A: Algebra, B: Algebra) -> TensorAlgebra:
    if A.field is not B.field:
        raise FieldMismatch(f"{A.name} is over {A.field!r}, {B.name} over {B.field!r}")
    key = ("tensor", id(B))
    hit = A.memo(key, lambda: (B, TensorAlgebra(A, B)))
    return hit[1]


def enveloping(A: Algebra, B: Algebra | None = None) -> TensorAlgebra:
    """``A (x) B^op`` (``B`` defaults to ``A``): A-B-bimodules are its left modules."""
    return tensor_algebras(A, opposite(A if B is None else B))


# ---------------------------------------------------------------------------
# Morita context rings


def morita_ring(L: Algebra, G: Algebra, Bm, Cm) -> Algebra:
    """Matrix ring ``[[L, B], [C, G]]`` with both context pairings zero.

    ``Bm`` is an L-G-bimodule and ``Cm`` a G-L-bimodule (``Bimodule`` objects).
    Basis order: L, then B, then C, then G.
    """
    if not (L.field is G.field is Bm.module.algebra.field is Cm.module.algebra.field):
        raise FieldMismatch("all four pieces must be over the same field")
    if Bm.left is not L or Bm.right is not G:
        raise SidedStructureMismatch(f"B must be an {L.name}-{G.name}-bimodule")
    if Cm.left is not G or Cm.right is not L:
        raise SidedStructureMismatch(f"C must be a {G.name}-{L.name}-bimodule")
    nL = L.nvertices
    dL, dG = L.dim, G.dim
    BM, CM = Bm.module, Cm.module
    dB, dC = BM.dim, CM.dim
    oB, oC, oG = dL, dL + dB, dL + dB + dC
    envB, envC = BM.algebra, CM.algebra
    # block bookkeeping for B and C basis vectors
    b_block = [envB.unpair_vertex(x) for x in range(envB.nvertices) for _ in range(BM.dims[x])]
    c_block = [envC.unpair_vertex(x) for x in range(envC.nvertices) for _ in range(CM.dims[x])]
    labels = list(L.labels) + [f"b{k}" for k in range(dB)] + [f"c{k}" for k in range(dC)] + [f"{x}'" if x in L.labels else x for x in G.labels]
    vnames = list(L.vertex_names) + [f"{v}'" if v in L.vertex_names else v for v in G.vertex_names]
    idem = list(L.idempotents) + [oG + e for e in G.idempotents]
    source = list(L.source) + [nL + w for (v, w) in b_block] + [v for (w, v) in c_block] + [nL + s for s in G.source]
    target = list(L.target) + [v for (v, w) in b_block] + [nL + w for (w, v) in c_block] + [nL + t for t in G.target]
    gens = list(L.generators) + list(range(oB, oG)) + [oG + g for g in G.generators]
    decomposition = dict(L.decomposition)
    for k in range(dB):
        decomposition[oB + k] = (oB + k, idem[source[oB + k]])
    for k in range(dC):
        decomposition[oC + k] = (oC + k, idem[source[oC + k]])
    for b, (g, rest) in G.decomposition.items():
        decomposition[oG + b] = (oG + g, oG + rest)

    def local(vec, off):
        return {i + off: a for i, a in vec.items()}

    def product(i, j):
        if i < oB:
            if j < oB:
                return L.mul(i, j)
            if j < oC:  # lambda * b: left action of L on B
                v, w = b_block[j - oB]
                gen = envB.pair(i, envB.right_factor.idempotents[w])
                return local(BM.apply_basis(gen, BM.unit_vector(j - oB)), oB)
            return {}
        if i < oC:
            if oG <= j:  # b * gamma: right action of G on B
                v, w = b_block[i - oB]
                gen = envB.pair(L.idempotents[v], j - oG)
                return local(BM.apply_basis(gen, BM.unit_vector(i - oB)), oB)
            return {}
        if i < oG:
            if j < oB:  # c * lambda: right action of L on C
                w, v = c_block[i - oC]
                gen = envC.pair(G.idempotents[w], j)
                return local(CM.apply_basis(gen, CM.unit_vector(i - oC)), oC)
            return {}
        if oC <= j < oG:  # gamma * c
            w, v = c_block[j - oC]
            gen = envC.pair(i - oG, envC.right_factor.idempotents[v])
            return local(CM.apply_basis(gen, CM.unit_vector(j - oC)), oC)
        if j >= oG:
            return {k + oG: c for k, c in G.mul(i - oG, j - oG).items()}
        return {}

    M = Algebra(
        name=f"Morita({L.name},{G.name})",
        field=L.field,
        labels=labels,
        vertex_names=vnames,
        idempotents=idem,
        source=source,
        target=target,
        generators=gens,
        decomposition=decomposition,
        product=product,
        relations=None,
        kind="morita",
    )
    return M


# ---------------------------------------------------------------------------
# checks


def is_nakayama(A: Algebra) -> bool:
    """Every vertex has at most one nonzero arrow in and at most one out.

    For an admissible quotient this is equivalent to all indecomposable
    projective and injective modules being uniserial.
    """
    ins, outs = [0] * A.nvertices, [0] * A.nvertices
    for g in A.generators:
        outs[A.source[g]] += 1
        ins[A.target[g]] += 1
    return max(ins + outs, default=0) <= 1


def check_associativity(A: Algebra, samples: int = 10_000, seed: int = 0) -> bool:
    """Exhaustive for dim <= 64, otherwise ``samples`` random basis triples."""
    if A.dim <= 64:
        triples = ((i, j, k) for i in range(A.dim) for j in range(A.dim) for k in range(A.dim))
    else:
        rng = random.Random(seed)
        triples = ((rng.randrange(A.dim), rng.randrange(A.dim), rng.randrange(A.dim)) for _ in range(samples))
    one = A.field.one
    for i, j, k in triples:
        left = A.mul_vec(A.mul(i, j), {k: one})
        right = A.mul_vec({i: one}, A.mul(j, k))
        if left != right:
            return False
    return True


def check_unit_and_idempotents(A: Algebra) -> bool:
    one = A.field.one
    u = A.unit
    for b in range(A.dim):
        if A.mul_vec(u, {b: one}) != {b: one} or A.mul_vec({b: one}, u) != {b: one}:
            return False
    for e in A.idempotents:
        for f in A.idempotents:
            if A.mul(e, f) != ({e: one} if e == f else {}):
                return False
    return True
