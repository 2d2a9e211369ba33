"""Finite-dimensional left modules as quiver-style representations.

A :class:`Module` over an :class:`~gpdef.algebra.Algebra` stores a dimension
per vertex and one block matrix per generator, of shape
``dims[target(g)] x dims[source(g)]``.  Vectors are either *local* (sparse
coordinates inside one vertex block) or *global* (concatenation of blocks).

Hom spaces are computed from a minimal projective presentation of the
source: a homomorphism is determined by the images of the top generators,
subject to the relations (generators of the first syzygy).  The dense
intertwining system is kept as an independent oracle.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Sequence

from .algebra import Algebra, TensorAlgebra, enveloping, opposite, path_normal_form
from .errors import (
    AlgebraMismatch,
    FieldTooSmall,
    InvalidString,
    NotSpecialBiserial,
    RelationViolated,
    ZeroModule,
)
from .linalg import SMat, Subspace, block_diag, vec_axpy, vec_scale, vec_shift
from .presentation import ModuleSpec, StringWord

ISO_RANDOM_TRIALS = 64
ISO_SEED = 20240601


class Module:
    """Immutable left module; ``act[g]`` is the matrix of generator ``g``."""

    def __init__(self, algebra: Algebra, dims: Sequence[int], act: Mapping[int, SMat] | None = None, name: str | None = None):
        self.algebra = algebra
        self.field = algebra.field
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.nvertices:
            raise ValueError("one dimension per vertex required")
        offs = [0]
        for d in self.dims:
            offs.append(offs[-1] + d)
        self.offsets = tuple(offs[:-1])
        self.dim = offs[-1]
        self.name = name
        act = dict(act or {})
        full = {}
        for g in algebra.generators:
            s, t = algebra.source[g], algebra.target[g]
            m = act.get(g)
            if m is None:
                m = SMat(self.dims[t], self.dims[s], {}, self.field)
            elif m.shape != (self.dims[t], self.dims[s]):
                raise ValueError(f"generator {algebra.labels[g]}: expected {(self.dims[t], self.dims[s])}, got {m.shape}")
            full[g] = m
        self.act = full
        self._basis_actions: dict = {}
        self._lock = threading.RLock()
        self._cache: dict = {}

    # -- bookkeeping ---------------------------------------------------------
    def __repr__(self):
        nm = f"{self.name}, " if self.name else ""
        return f"Module({nm}dims={self.dims}, over {self.algebra.name})"

    @property
    def total_dim(self) -> int:
        return self.dim

    def memo(self, key, compute):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        val = compute()
        with self._lock:
            return self._cache.setdefault(key, val)

    def is_zero(self) -> bool:
        return self.dim == 0

    def dims_by_name(self) -> dict:
        return {self.algebra.vertex_names[v]: d for v, d in enumerate(self.dims)}

    def block_of(self, k: int):
        """Global index -> (vertex, local index)."""
        for v in range(len(self.dims) - 1, -1, -1):
            if k >= self.offsets[v] and self.dims[v]:
                return v, k - self.offsets[v]
        raise IndexError(k)

    def unit_vector(self, k: int) -> dict:
        return {k: self.field.one}

    def split(self, vec: Mapping) -> list:
        """Global vector -> list of local vectors (one per vertex)."""
        out = [dict() for _ in self.dims]
        for k, a in vec.items():
            v, i = self.block_of(k)
            out[v][i] = a
        return out

    # -- actions -------------------------------------------------------------
    def basis_action(self, b: int) -> SMat:
        """Matrix of the basis element ``b`` (block ``target(b) x source(b)``)."""
        m = self._basis_actions.get(b)
        if m is None:
            A = self.algebra
            if A.is_idempotent(b):
                m = SMat.identity(self.dims[A.vertex_of_idempotent(b)], self.field)
            else:
                g, rest = A.decomposition[b]
                m = self.act[g] @ self.basis_action(rest)
            self._basis_actions[b] = m
        return m

    def apply_basis(self, b: int, vec: Mapping) -> dict:
        """Action of a basis element on a global vector; returns a global vector."""
        A = self.algebra
        s, t = A.source[b], A.target[b]
        lo, hi = self.offsets[s], self.offsets[s] + self.dims[s]
        local = {k - lo: a for k, a in vec.items() if lo <= k < hi}
        if not local:
            return {}
        return vec_shift(self.orbit(s, local, only=b), self.offsets[t])

    def orbit(self, v: int, vec: Mapping, only: int | None = None):
        """All ``b * vec`` for ``b`` in ``A e_v`` (local vectors), keyed by ``b``.

        With ``only`` given, returns just that product.
        """
        A = self.algebra
        if only is not None:
            w = A.word(only)
            out = dict(vec)
            for g in reversed(w):
                out = self.act[g].apply(out)
                if not out:
                    break
            return out
        res = {}
        for b in A.by_source[v]:
            if A.is_idempotent(b):
                res[b] = dict(vec)
            else:
                g, rest = A.decomposition[b]
                r = res[rest]
                res[b] = self.act[g].apply(r) if r else {}
        return res

    def word_matrix(self, word: Sequence[int], vertex: int) -> SMat:
        m = SMat.identity(self.dims[vertex], self.field)
        for g in reversed(word):
            m = self.act[g] @ m
        return m

    def relation_residues(self):
        """Yield (relation, matrix) for every relation that does not act as zero."""
        for r in self.algebra.relations:
            tot = SMat(self.dims[r.target], self.dims[r.source], {}, self.field)
            for c, word in r.terms:
                tot = tot.axpy(c, self.word_matrix(word, r.source))
            if not tot.is_zero():
                yield r, tot

    def check_relations(self):
        for r, tot in self.relation_residues():
            j, col = next(iter(sorted(tot.cols.items())))
            i, a = next(iter(sorted(col.items())))
            raise RelationViolated(r.name, entry=(i, j), value=self.field.format(a))
        return True

    def to_json(self) -> dict:
        A = self.algebra
        return {
            "algebra": A.name,
            "dim": self.dim,
            "dims": self.dims_by_name(),
            "actions": {A.labels[g]: m.to_json() for g, m in self.act.items()},
        }


# ---------------------------------------------------------------------------
# maps


class ModuleMap:
    """Block-diagonal family of matrices intertwining two module structures."""

    def __init__(self, source: Module, target: Module, blocks: Sequence[SMat]):
        self.source = source
        self.target = target
        self.blocks = tuple(blocks)

    def __repr__(self):
        return f"ModuleMap({self.source!r} -> {self.target!r})"

    @classmethod
    def zero(cls, M: Module, N: Module):
        return cls(M, N, [SMat(N.dims[v], M.dims[v], {}, M.field) for v in range(len(M.dims))])

    @classmethod
    def identity(cls, M: Module):
        return cls(M, M, [SMat.identity(d, M.field) for d in M.dims])

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self o other``"""
        return ModuleMap(other.source, self.target, [a @ b for a, b in zip(self.blocks, other.blocks)])

    __matmul__ = compose

    def __add__(self, other):
        return ModuleMap(self.source, self.target, [a + b for a, b in zip(self.blocks, other.blocks)])

    def scale(self, c):
        return ModuleMap(self.source, self.target, [a.scale(c) for a in self.blocks])

    def axpy(self, c, other):
        return ModuleMap(self.source, self.target, [a.axpy(c, b) for a, b in zip(self.blocks, other.blocks)])

    def apply(self, vec: Mapping) -> dict:
        out = {}
        for v, loc in enumerate(self.source.split(vec)):
            if loc:
                out.update(vec_shift(self.blocks[v].apply(loc), self.target.offsets[v]))
        return out

    def is_homomorphism(self) -> bool:
        M, N = self.source, self.target
        A = M.algebra
        for g in A.generators:
            s, t = A.source[g], A.target[g]
            if self.blocks[t] @ M.act[g] != N.act[g] @ self.blocks[s]:
                return False
        return True

    def rank(self) -> int:
        return sum(b.rank() for b in self.blocks)

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def is_isomorphism(self) -> bool:
        return self.source.dims == self.target.dims and all(b.is_invertible() for b in self.blocks)

    def trace(self):
        t = self.source.field.zero
        for b in self.blocks:
            t += b.trace()
        return t

    def kernel(self):
        """(kernel module, inclusion map)."""
        subs = [Subspace.span(b.kernel(), b.ncols, self.source.field) for b in self.blocks]
        return submodule(self.source, subs)

    def image(self):
        subs = [b.column_space() for b in self.blocks]
        return submodule(self.target, subs)

    def to_json(self):
        return {"blocks": [b.to_json() for b in self.blocks]}


# ---------------------------------------------------------------------------
# realization and basic constructors


def realize(spec: ModuleSpec, algebra: Algebra) -> Module:
    """Turn a parsed module definition into a checked :class:`Module`."""
    F = algebra.field
    if spec.env is not None:
        if not isinstance(algebra, TensorAlgebra):
            raise AlgebraMismatch("bimodule definition needs an enveloping algebra")
        A, Bop = algebra.left_factor, algebra.right_factor
        dims = [0] * algebra.nvertices
        for (v, w), n in spec.dims:
            dims[algebra.vertex_pair(A.vertex_index(v), Bop.vertex_index(w))] = n
        act = {}
        for (x, y), rows in spec.actions:
            if x in getattr(A, "arrow_basis", {}):
                g = algebra.pair(A.arrow_basis[x], Bop.idempotents[Bop.vertex_index(y)])
            else:
                g = algebra.pair(A.idempotents[A.vertex_index(x)], opposite(Bop).arrow_basis[y])
            act[g] = _matrix(rows, dims[algebra.target[g]], dims[algebra.source[g]], F)
    else:
        if spec.algebra != algebra.name:
            raise AlgebraMismatch(f"module {spec.name} is over {spec.algebra}, not {algebra.name}")
        dims = [0] * algebra.nvertices
        for v, n in spec.dims:
            dims[algebra.vertex_index(v)] = n
        act = {}
        for a, rows in spec.actions:
            if a not in algebra.arrow_basis:
                continue  # arrow killed by the relations: acts as zero anyway
            g = algebra.arrow_basis[a]
            act[g] = _matrix(rows, dims[algebra.target[g]], dims[algebra.source[g]], F)
    M = Module(algebra, dims, act, name=spec.name)
    M.check_relations()
    return M


def _matrix(rows, r, c, F) -> SMat:
    if not rows:
        return SMat(r, c, {}, F)
    return SMat.from_rows([[F(x) for x in row] for row in rows], F, ncols=c)


def zero_module(A: Algebra) -> Module:
    return Module(A, [0] * A.nvertices, name="0")


def simple_module(A: Algebra, v: int) -> Module:
    v = A.vertex_index(v)
    dims = [0] * A.nvertices
    dims[v] = 1
    return Module(A, dims, name=f"S_{A.vertex_names[v]}")


def _projective_layout(A: Algebra, v: int):
    def build():
        blocks = [[] for _ in range(A.nvertices)]
        for b in A.by_source[v]:
            blocks[A.target[b]].append(b)
        pos = {}
        for w, bl in enumerate(blocks):
            for i, b in enumerate(bl):
                pos[b] = (w, i)
        return blocks, pos

    return A.memo(("projective-layout", v), build)


def indec_projective(A: Algebra, v) -> Module:
    """``P_v = A e_v`` with basis the basis elements of source ``v``."""
    v = A.vertex_index(v)

    def build():
        blocks, pos = _projective_layout(A, v)
        F = A.field
        act = {}
        for g in A.generators:
            s, t = A.source[g], A.target[g]
            cols = {}
            for j, b in enumerate(blocks[s]):
                col = {}
                for k, c in A.mul(g, b).items():
                    w, i = pos[k]
                    col[i] = c
                if col:
                    cols[j] = col
            act[g] = SMat(len(blocks[t]), len(blocks[s]), cols, F)
        P = Module(A, [len(bl) for bl in blocks], act, name=f"P_{A.vertex_names[v]}")
        P.projective_vertex = v
        return P

    return A.memo(("indec-projective", v), build)


def regular_module(A: Algebra) -> Module:
    """A as a left module, realized as the direct sum of the P_v."""
    return A.memo(("regular",), lambda: direct_sum(*[indec_projective(A, v) for v in range(A.nvertices)], name="A"))


def direct_sum(*modules: Module, name: str | None = None) -> Module:
    if not modules:
        raise ValueError("need at least one summand")
    A = modules[0].algebra
    for M in modules:
        if M.algebra is not A:
            raise AlgebraMismatch("summands over different algebras")
    dims = [sum(M.dims[v] for M in modules) for v in range(A.nvertices)]
    act = {g: block_diag(*[M.act[g] for M in modules], field=A.field) for g in A.generators}
    S = Module(A, dims, act, name=name)
    S.summands = tuple(modules)
    return S


def direct_sum_injections(S: Module) -> list:
    """Inclusion maps of the summands of a module built by :func:`direct_sum`."""
    out = []
    offs = [0] * len(S.dims)
    for M in S.summands:
        blocks = []
        for v in range(len(S.dims)):
            blocks.append(SMat(S.dims[v], M.dims[v], {j: {offs[v] + j: S.field.one} for j in range(M.dims[v])}, S.field))
            offs[v] += M.dims[v]
        out.append(ModuleMap(M, S, blocks))
    return out


def submodule(M: Module, subspaces: Sequence[Subspace], name: str | None = None):
    """Submodule spanned blockwise by ``subspaces`` (assumed closed); returns (U, inclusion)."""
    A = M.algebra
    act = {}
    for g in A.generators:
        s, t = A.source[g], A.target[g]
        Us, Ut = subspaces[s], subspaces[t]
        if not Us.dim or not Ut.dim:
            continue
        cols = {}
        mat = M.act[g]
        pos = {p: k for k, p in enumerate(Ut.pivots)}
        for j, u in enumerate(Us.basis()):
            img = mat.apply(u)
            if img:
                if Ut.reduce(img):
                    raise ValueError("subspace family is not a submodule")
                col = {pos[p]: a for p, a in img.items() if p in pos}
                if col:
                    cols[j] = col
        act[g] = SMat(Ut.dim, Us.dim, cols, M.field)
    U = Module(A, [S.dim for S in subspaces], act, name=name)
    inc = ModuleMap(U, M, [S.basis_matrix() for S in subspaces])
    return U, inc


def quotient_module(M: Module, subspaces: Sequence[Subspace], name: str | None = None):
    """M / U for a submodule given blockwise; returns (quotient, projection)."""
    A = M.algebra
    comp = [S.complement() for S in subspaces]
    posmap = [{p: k for k, p in enumerate(c)} for c in comp]
    act = {}
    for g in A.generators:
        s, t = A.source[g], A.target[g]
        cols = {}
        mat = M.act[g]
        for j, q in enumerate(comp[s]):
            img = subspaces[t].reduce(mat.column(q))
            col = {posmap[t][p]: a for p, a in img.items()}
            if col:
                cols[j] = col
        act[g] = SMat(len(comp[t]), len(comp[s]), cols, M.field)
    Q = Module(A, [len(c) for c in comp], act, name=name)
    blocks = []
    for v in range(A.nvertices):
        cols = {}
        for j in range(M.dims[v]):
            r = subspaces[v].reduce({j: M.field.one})
            col = {posmap[v][p]: a for p, a in r.items()}
            if col:
                cols[j] = col
        blocks.append(SMat(len(comp[v]), M.dims[v], cols, M.field))
    return Q, ModuleMap(M, Q, blocks)


# ---------------------------------------------------------------------------
# minimal presentations


@dataclass
class Presentation:
    """Minimal projective presentation data of a module M.

    ``gens[k] = (vertex, local index)``: the top generators (standard basis
    vectors complementing the radical).  ``cover`` is ``P0 = sum_k P_{v_k}``.
    ``coords[w]`` lists P0's block-``w`` coordinates as pairs ``(k, b)``.
    ``pi[w]`` is the cover map on block ``w``; ``kernel[w]`` its kernel;
    ``section[w]`` a right inverse of ``pi[w]``.
    """

    module: Module
    gens: list
    cover: Module
    coords: list
    pi: list
    kernel: list
    section: list
    _relations: list | None = None
    _syzygy: tuple | None = None
    lock: threading.Lock = dc_field(default_factory=threading.Lock)


def presentation(M: Module) -> Presentation:
    return M.memo(("presentation",), lambda: _build_presentation(M))


def radical_subspaces(M: Module) -> list:
    A = M.algebra
    out = []
    for w in range(A.nvertices):
        vecs = []
        for g in A.generators:
            if A.target[g] == w:
                vecs.extend(M.act[g].cols.values())
        out.append(Subspace.span(vecs, M.dims[w], M.field))
    return out


def top_dims(M: Module) -> list:
    return [M.dims[w] - r.dim for w, r in enumerate(radical_subspaces(M))]


def loewy_length(M: Module) -> int:
    """Number of radical layers: least k with ``rad^k M = 0``."""
    k = 0
    while M.dim:
        M, _ = submodule(M, radical_subspaces(M))
        k += 1
    return k


def _build_presentation(M: Module) -> Presentation:
    A = M.algebra
    F = M.field
    rad = radical_subspaces(M)
    gens = [(w, j) for w in range(A.nvertices) for j in rad[w].complement()]
    projs = [indec_projective(A, w) for w, _ in gens]
    if projs:
        cover = direct_sum(*projs, name=f"P({M.name})" if M.name else None)
    else:
        cover = zero_module(A)
        cover.summands = ()
    coords = [[] for _ in range(A.nvertices)]
    for k, (v, j) in enumerate(gens):
        blocks, _ = _projective_layout(A, v)
        for w in range(A.nvertices):
            coords[w].extend((k, b) for b in blocks[w])
    orbits = [M.orbit(v, {j: F.one}) for v, j in gens]
    pi, kernel, section = [], [], []
    for w in range(A.nvertices):
        cols = {}
        for c, (k, b) in enumerate(coords[w]):
            vec = orbits[k][b]
            if vec:
                cols[c] = vec
        P = SMat(M.dims[w], len(coords[w]), cols, F)
        pi.append(P)
        rows, piv = P.rref_rows()
        if len(piv) != M.dims[w]:
            raise AssertionError("cover map is not surjective")
        from .linalg import kernel_from_rref

        kernel.append(Subspace.span(kernel_from_rref(rows, piv, P.ncols, F), P.ncols, F))
        if piv:
            inv = P.submatrix(list(range(M.dims[w])), piv).inverse()
            scols = {j: {piv[i]: a for i, a in col.items()} for j, col in inv.cols.items()}
            section.append(SMat(P.ncols, M.dims[w], scols, F))
        else:
            section.append(SMat(P.ncols, M.dims[w], {}, F))
    return Presentation(M, gens, cover, coords, pi, kernel, section)


def projective_cover(M: Module):
    """(P, alpha) with alpha: P -> M a projective cover."""
    if M.dim == 0:
        raise ZeroModule("the zero module has no nonzero projective cover")
    pr = presentation(M)
    return pr.cover, ModuleMap(pr.cover, M, pr.pi)


def syzygy_with_inclusion(M: Module):
    pr = presentation(M)
    with pr.lock:
        if pr._syzygy is None:
            nm = f"Ω({M.name})" if M.name else None
            pr._syzygy = submodule(pr.cover, pr.kernel, name=nm)
        return pr._syzygy


def syzygy(M: Module, i: int = 1) -> Module:
    """``Omega^i M`` (``Omega^0 M = M``)."""
    for _ in range(i):
        if M.dim == 0:
            return M
        M = syzygy_with_inclusion(M)[0]
    return M


def relations(M: Module) -> list:
    """Minimal generators of ``Omega M`` as (vertex, vector in P0 block coordinates)."""
    pr = presentation(M)
    with pr.lock:
        if pr._relations is not None:
            return pr._relations
    A = M.algebra
    P0 = pr.cover
    rels = []
    for w in range(A.nvertices):
        K = pr.kernel[w]
        if not K.dim:
            continue
        radvecs = []
        for g in A.generators:
            if A.target[g] != w:
                continue
            Ks = pr.kernel[A.source[g]]
            mat = P0.act[g]
            for u in Ks.basis():
                img = mat.apply(u)
                if img:
                    radvecs.append(img)
        R = Subspace.span(radvecs, K.n, M.field)
        if R.dim == K.dim:
            continue
        for u in K.basis():
            if R.add(u):
                rels.append((w, u))
    with pr.lock:
        pr._relations = rels
    return rels


def is_projective(M: Module) -> bool:
    if M.dim == 0:
        return True
    return presentation(M).cover.dim == M.dim


# ---------------------------------------------------------------------------
# Hom spaces


class HomSpace(Sequence):
    """Basis of Hom(M, N) in generator-image coordinates.

    A vector assigns to each top generator ``k`` of M (at vertex ``v_k``) an
    element of ``e_{v_k} N``; coordinates are concatenated in generator order.
    Indexing yields :class:`ModuleMap` objects.
    """

    def __init__(self, M: Module, N: Module, basis: list, offsets: list, free: list):
        self.source = M
        self.target = N
        self.vectors = basis
        self.offsets = offsets
        self.free = free
        self._maps: dict = {}

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[k] for k in range(*i.indices(len(self)))]
        m = self._maps.get(i)
        if m is None:
            m = self.to_map(self.vectors[i])
            self._maps[i] = m
        return m

    def gen_images(self, vec: Mapping) -> list:
        pr = presentation(self.source)
        out = []
        for k, (v, _) in enumerate(pr.gens):
            lo, n = self.offsets[k], self.target.dims[v]
            out.append({i - lo: a for i, a in vec.items() if lo <= i < lo + n})
        return out

    def to_map(self, vec: Mapping) -> ModuleMap:
        M, N = self.source, self.target
        pr = presentation(M)
        imgs = self.gen_images(vec)
        orbits = [N.orbit(v, imgs[k]) if imgs[k] else None for k, (v, _) in enumerate(pr.gens)]
        blocks = []
        for w in range(len(M.dims)):
            cols = {}
            for c, (k, b) in enumerate(pr.coords[w]):
                o = orbits[k]
                if o is not None and o[b]:
                    cols[c] = o[b]
            phi = SMat(N.dims[w], len(pr.coords[w]), cols, M.field)
            blocks.append(phi @ pr.section[w])
        return ModuleMap(M, N, blocks)

    def vector_of(self, f: ModuleMap) -> dict:
        """Generator-image vector of a homomorphism."""
        pr = presentation(self.source)
        out = {}
        for k, (v, j) in enumerate(pr.gens):
            img = f.blocks[v].column(j)
            out.update(vec_shift(img, self.offsets[k]))
        return out

    def coordinates(self, f) -> list:
        """Coefficients of a homomorphism (or generator-image vector) in this basis."""
        vec = f if isinstance(f, dict) else self.vector_of(f)
        z = self.source.field.zero
        return [vec.get(p, z) for p in self.free]

    def combination(self, coeffs: Sequence) -> dict:
        out: dict = {}
        for c, v in zip(coeffs, self.vectors):
            if c:
                vec_axpy(out, c, v)
        return out


def hom_space(M: Module, N: Module) -> HomSpace:
    if M.algebra is not N.algebra:
        raise AlgebraMismatch(f"{M!r} and {N!r} are over different algebras")
    key = ("hom", id(N))
    hit = M.memo(key, lambda: (N, _hom_space(M, N)))
    return hit[1]


def _hom_space(M: Module, N: Module) -> HomSpace:
    F = M.field
    if M.dim == 0 or N.dim == 0:
        return HomSpace(M, N, [], [0] * len(presentation(M).gens if M.dim else []), [])
    pr = presentation(M)
    offsets = []
    n = 0
    for v, _ in pr.gens:
        offsets.append(n)
        n += N.dims[v]
    rels = relations(M)
    # unknown (k, i): i-th basis vector of e_{v_k} N placed at generator k
    orbit_cache = {}

    def orbit(k, i):
        key = (k, i)
        o = orbit_cache.get(key)
        if o is None:
            o = N.orbit(pr.gens[k][0], {i: F.one})
            orbit_cache[key] = o
        return o

    cols: dict = {}
    row = 0
    for w, z in rels:
        coords = pr.coords[w]
        for c, a in z.items():
            k, b = coords[c]
            v = pr.gens[k][0]
            for i in range(N.dims[v]):
                img = orbit(k, i)[b]
                if img:
                    col = cols.setdefault(offsets[k] + i, {})
                    vec_axpy(col, a, vec_shift(img, row))
        row += N.dims[w]
    cols = {j: c for j, c in cols.items() if c}
    system = SMat(row, n, cols, F)
    rr, piv = system.rref_rows()
    from .linalg import kernel_from_rref

    basis = kernel_from_rref(rr, piv, n, F)
    pivset = set(piv)
    free = [j for j in range(n) if j not in pivset]
    return HomSpace(M, N, basis, offsets, free)


def hom_dim(M: Module, N: Module) -> int:
    return hom_space(M, N).dim


def hom_space_dense(M: Module, N: Module) -> list:
    """Independent oracle: solve ``f_t rho_M(g) = rho_N(g) f_s`` for all blockwise matrices."""
    if M.algebra is not N.algebra:
        raise AlgebraMismatch("different algebras")
    A = M.algebra
    F = M.field
    offs = []
    n = 0
    for v in range(A.nvertices):
        offs.append(n)
        n += N.dims[v] * M.dims[v]

    def var(v, r, c):  # entry (r, c) of f_v, f_v is N.dims[v] x M.dims[v]
        return offs[v] + r * M.dims[v] + c

    rows = []
    for g in A.generators:
        s, t = A.source[g], A.target[g]
        rm = M.act[g].tolist()  # dims_M[t] x dims_M[s]
        rn = N.act[g].tolist()  # dims_N[t] x dims_N[s]
        for r in range(N.dims[t]):
            for c in range(M.dims[s]):
                eq: dict = {}
                for p in range(M.dims[t]):
                    if rm[p][c]:
                        vec_axpy(eq, rm[p][c], {var(t, r, p): F.one})
                for q in range(N.dims[s]):
                    if rn[r][q]:
                        vec_axpy(eq, -rn[r][q], {var(s, q, c): F.one})
                if eq:
                    rows.append(eq)
    system = SMat.from_row_vectors(rows, n, F) if rows else SMat(0, n, {}, F)
    sols = system.kernel()
    maps = []
    for x in sols:
        blocks = []
        for v in range(A.nvertices):
            ents = {}
            for r in range(N.dims[v]):
                for c in range(M.dims[v]):
                    a = x.get(var(v, r, c))
                    if a:
                        ents[(r, c)] = a
            blocks.append(SMat.from_entries(N.dims[v], M.dims[v], ents, F))
        maps.append(ModuleMap(M, N, blocks))
    return maps


def endomorphism_basis(M: Module) -> list:
    return list(hom_space(M, M))


# ---------------------------------------------------------------------------
# isomorphism and indecomposability


def _pairing_traces(fs: list, gs: list) -> list:
    """Matrix of traces ``tr(g_i o f_j)``."""
    out = []
    for g in gs:
        row = []
        for f in fs:
            t = f.source.field.zero
            for gb, fb in zip(g.blocks, f.blocks):
                # tr(gb @ fb) without forming the product
                for j, col in gb.cols.items():
                    for i, a in col.items():
                        # entry gb[i, j] pairs with fb[j, i]
                        fc = fb.cols.get(i)
                        if fc is not None:
                            x = fc.get(j)
                            if x is not None:
                                t += a * x
            row.append(t)
        out.append(row)
    return out


def endomorphism_radical_rank(M: Module) -> tuple:
    """(dim End M, rank of the trace form) over the endomorphism basis."""
    H = hom_space(M, M)
    maps = list(H)
    if not maps:
        return 0, 0
    T = _pairing_traces(maps, maps)
    return len(maps), SMat.from_rows(T, M.field).rank()


def _check_field_size(M: Module, bound: int):
    p = M.field.p
    if p is not None and p <= bound:
        raise FieldTooSmall(f"F<{p}> is too small for the trace-form radical (need p > {bound})")


def is_indecomposable(M: Module) -> bool:
    """True iff End(M)/rad End(M) is one-dimensional (trace-form radical)."""
    if M.dim == 0:
        return False
    d = hom_dim(M, M)
    _check_field_size(M, max(d, M.dim))
    _, r = endomorphism_radical_rank(M)
    return r == 1


def has_local_endomorphism_ring(M: Module) -> bool:
    return M.dim > 0 and is_indecomposable(M)


def find_isomorphism(M: Module, N: Module, seed: int = ISO_SEED):
    """An isomorphism ``M -> N`` as a ModuleMap, or None.

    Exact negative answers come from dimension invariants and, when End(M)
    is local, from the trace pairing; otherwise the search is a seeded
    random combination test (Monte Carlo for a negative answer).
    """
    if M.algebra is not N.algebra:
        raise AlgebraMismatch("different algebras")
    if M.dims != N.dims:
        return None
    if M.dim == 0:
        return ModuleMap.zero(M, N)
    H = hom_space(M, N)
    d = H.dim
    if d == 0 or d != hom_dim(N, M) or d != hom_dim(M, M) or d != hom_dim(N, N):
        return None
    if top_dims(M) != top_dims(N):
        return None
    if d <= 16:
        for k in range(d):
            f = H[k]
            if f.is_isomorphism():
                return f
    F = M.field
    rng = random.Random(seed)
    span = 2 * max(M.dim, 2)
    if F.p is not None:
        span = min(span, F.p - 1)
    local = None
    for trial in range(ISO_RANDOM_TRIALS):
        coeffs = [F(rng.randint(-span, span)) for _ in range(d)]
        f = H.to_map(H.combination(coeffs))
        if f.is_isomorphism():
            return f
        if trial == 3:
            local = is_indecomposable(M) if (F.p is None or F.p > max(d, M.dim)) else False
            if local:
                break
    if local:
        back = list(hom_space(N, M))
        T = _pairing_traces(list(H), back)
        for i, row in enumerate(T):
            for j, t in enumerate(row):
                if t:
                    # g_i o f_j is invertible, so f_j is an isomorphism
                    f = H[j]
                    if f.is_isomorphism():
                        return f
        return None
    return None


def is_isomorphic(M: Module, N: Module) -> bool:
    return find_isomorphism(M, N) is not None


# ---------------------------------------------------------------------------
# projective summands


@dataclass
class StripResult:
    """``M = core (+) (+)_v P_v^{m_v}`` with explicit split maps."""

    module: Module
    core: Module
    core_inclusion: ModuleMap
    peeled_vertices: list
    split_out: list = dc_field(default_factory=list)  # maps M -> P_v, one per peeled copy

    def __iter__(self):
        yield self.core
        yield self.peeled

    @property
    def peeled(self) -> list:
        A = self.module.algebra
        return [indec_projective(A, v) for v in self.peeled_vertices]

    def multiplicities(self) -> dict:
        names = self.module.algebra.vertex_names
        out: dict = {}
        for v in self.peeled_vertices:
            out[names[v]] = out.get(names[v], 0) + 1
        return out

    def to_json(self) -> dict:
        return {"core_dims": list(self.core.dims), "core_dim": self.core.dim, "peeled": self.multiplicities()}


def projective_pairing(M: Module, v: int):
    """Pairing matrix between Hom(M, P_v) and the generators of M at v.

    Entry (i, j): coefficient of the idempotent ``e_v`` in ``h_i(m_j)`` where
    ``m_j`` runs over the standard basis of block ``v``.  Its rank is the
    multiplicity of ``P_v`` as a direct summand of M.
    """
    A = M.algebra
    F = M.field
    P = indec_projective(A, v)
    H = hom_space(M, P)
    pr = presentation(M)
    blocks, pos = _projective_layout(A, v)
    e_pos = pos[A.idempotents[v]][1]
    sect = pr.section[v]
    # coordinates of P0_v of the form (k, e_v) with v_k = v
    idem_coords = {c: k for c, (k, b) in enumerate(pr.coords[v]) if b == A.idempotents[v]}
    srows = sect.rows_dod()
    mat = []
    for vec in H.vectors:
        imgs = H.gen_images(vec)
        row: dict = {}
        for c, k in idem_coords.items():
            a = imgs[k].get(e_pos)
            if a and c in srows:
                vec_axpy(row, a, srows[c])
        mat.append(row)
    return H, mat


def strip_projective_summands(M: Module) -> StripResult:
    return M.memo(("strip",), lambda: _strip(M))


def _strip(M: Module) -> StripResult:
    A = M.algebra
    F = M.field
    if M.dim == 0:
        return StripResult(M, M, ModuleMap.identity(M), [])
    peeled = []
    split_maps = []
    for v in range(A.nvertices):
        if M.dims[v] == 0:
            continue
        H, mat = projective_pairing(M, v)
        if not any(mat):
            continue
        nh = len(mat)
        # rref of [pairing | I] gives combinations g'_a with g'_a(m_{j_b}) = delta
        rows = {}
        for i, r in enumerate(mat):
            d = dict(r)
            d[M.dims[v] + i] = F.one
            rows[i] = d
        from .linalg import rref_of_rows

        rr, piv = rref_of_rows(rows, nh, M.dims[v] + nh, F)
        for r, p in zip(rr, piv):
            if p >= M.dims[v]:
                break
            comb = {j - M.dims[v]: a for j, a in r.items() if j >= M.dims[v]}
            g = H.to_map(H.combination([comb.get(i, F.zero) for i in range(nh)]))
            peeled.append(v)
            split_maps.append(g)
    if not peeled:
        return StripResult(M, M, ModuleMap.identity(M), [])
    subs = []
    for w in range(A.nvertices):
        rowvecs = []
        for g in split_maps:
            rowvecs.extend(g.blocks[w].rows_dod().values())
        stacked = SMat.from_row_vectors(rowvecs, M.dims[w], F) if rowvecs else SMat(0, M.dims[w], {}, F)
        subs.append(Subspace.span(stacked.kernel(), M.dims[w], F))
    core, inc = submodule(M, subs, name=f"core({M.name})" if M.name else None)
    expected = M.dim - sum(indec_projective(A, v).dim for v in peeled)
    if core.dim != expected:
        raise AssertionError("projective peeling produced inconsistent dimensions")
    return StripResult(M, core, inc, peeled, split_maps)


def projective_multiplicities(M: Module) -> dict:
    return strip_projective_summands(M).multiplicities()


def isomorphic_up_to_projectives(M: Module, N: Module) -> bool:
    a, b = strip_projective_summands(M), strip_projective_summands(N)
    return is_isomorphic(a.core, b.core)


# ---------------------------------------------------------------------------
# string modules


def is_special_biserial(A: Algebra) -> bool:
    p = getattr(A, "presentation", None)
    if p is None or not p.is_special_biserial_syntax():
        return False
    for b in p.arrows:
        after = before = 0
        for a in p.arrows:
            if a.source == b.target and path_normal_form(A, (a.name, b.name)):
                after += 1
            if b.source == a.target and path_normal_form(A, (b.name, a.name)):
                before += 1
        if after > 1 or before > 1:
            return False
    return True


def string_module(w: StringWord, A: Algebra) -> Module:
    """Module of a string: one basis vector per walk vertex."""
    if not is_special_biserial(A):
        raise NotSpecialBiserial(f"{A.name} is not special biserial")
    p = A.presentation
    F = A.field
    if not w.letters:
        return _named(simple_module(A, A.vertex_index(w.vertex)), w.name)
    letters = list(w.letters)
    n = len(letters)
    # runs of equal direction must be nonzero paths
    k = 0
    while k < n:
        j = k
        while j + 1 < n and letters[j + 1][1] == letters[k][1]:
            j += 1
        run = [a for a, _ in letters[k : j + 1]]
        if letters[k][1]:
            run = run[::-1]
        if len(run) >= 1 and not path_normal_form(A, run):
            raise InvalidString(f"subpath {'*'.join(run)} lies in the relation ideal")
        k = j + 1
    # walk vertices x_0 .. x_n, x_0 = start of the last letter
    def start(letter):
        arr = p.arrow(letter[0])
        return arr.target if letter[1] else arr.source

    def end(letter):
        arr = p.arrow(letter[0])
        return arr.source if letter[1] else arr.target

    xs = [start(letters[-1])]
    for m in range(n):
        xs.append(end(letters[n - 1 - m]))
    vidx = [A.vertex_index(x) for x in xs]
    dims = [0] * A.nvertices
    local = []
    for v in vidx:
        local.append(dims[v])
        dims[v] += 1
    ents: dict = {}
    for m in range(n):
        name, inv = letters[n - 1 - m]
        g = A.arrow_basis.get(name)
        if g is None:
            raise InvalidString(f"arrow {name} is zero in the algebra")
        frm, to = (m + 1, m) if inv else (m, m + 1)
        ents.setdefault(g, {})[(local[to], local[frm])] = F.one
    act = {}
    for g, e in ents.items():
        s, t = A.source[g], A.target[g]
        act[g] = SMat.from_entries(dims[t], dims[s], e, F)
    M = Module(A, dims, act, name=w.name)
    try:
        M.check_relations()
    except RelationViolated as exc:
        raise InvalidString(f"string {w.name} violates {exc.relation}") from exc
    return M


def _walks(p, max_letters: int):
    """Composable letter sequences without immediate inverses, shortest first."""
    letters = [(a.name, inv) for a in p.arrows for inv in (False, True)]

    def start(l):
        a = p.arrow(l[0])
        return a.target if l[1] else a.source

    def end(l):
        a = p.arrow(l[0])
        return a.source if l[1] else a.target

    layer = [(l,) for l in letters]
    for _ in range(max_letters):
        yield from layer
        nxt = []
        for w in layer:
            for l in letters:
                # l is written first, so it is walked after w[0]
                if l[0] == w[0][0] and l[1] != w[0][1]:
                    continue
                if start(l) == end(w[0]):
                    nxt.append((l,) + w)
        layer = nxt


def enumerate_string_modules(A: Algebra, max_dim: int) -> list:
    """All string modules of dimension at most ``max_dim``, one per isomorphism class.

    The walks ``w`` and ``w^-1`` give isomorphic modules, so only one of each
    pair is kept; the simple modules come first.
    """
    p = A.presentation
    out = [_named(simple_module(A, v), f"S_{A.vertex_names[v]}") for v in range(A.nvertices)]
    seen = set()
    for w in _walks(p, max_dim - 1):
        inverse = tuple((a, not inv) for a, inv in reversed(w))
        if inverse in seen:
            continue
        seen.add(w)
        word = StringWord("*".join(a + ("^-1" if inv else "") for a, inv in w), p.name, w)
        try:
            M = string_module(word, A)
        except InvalidString:
            continue
        if not any(N.dims == M.dims and is_isomorphic(N, M) for N in out):
            out.append(M)
    return out


def _named(M: Module, name: str) -> Module:
    N = Module(M.algebra, M.dims, M.act, name=name)
    return N


# ---------------------------------------------------------------------------
# bimodules and tensor products


class Bimodule:
    """An A-B-bimodule: a left module over ``A (x) B^op``."""

    def __init__(self, module: Module, left: Algebra | None = None, right: Algebra | None = None):
        E = module.algebra
        if not isinstance(E, TensorAlgebra):
            raise AlgebraMismatch("a bimodule is a module over an enveloping algebra")
        self.module = module
        self.left = left or E.left_factor
        self.right = right or opposite(E.right_factor)
        if opposite(self.right) is not E.right_factor or self.left is not E.left_factor:
            raise AlgebraMismatch("bimodule sides do not match the enveloping algebra")
        self.name = module.name
        self._cache: dict = {}
        self._lock = threading.RLock()

    def __repr__(self):
        return f"Bimodule({self.name or ''} over {self.left.name}-{self.right.name}, dim={self.dim})"

    @property
    def dim(self):
        return self.module.dim

    @property
    def algebra(self) -> TensorAlgebra:
        return self.module.algebra

    def block(self, v: int, w: int) -> int:
        return self.module.dims[self.algebra.vertex_pair(v, w)]

    def left_action(self, g: int, w: int) -> SMat:
        """Generator g of the left algebra acting on blocks (s(g), w) -> (t(g), w)."""
        E = self.algebra
        return self.module.act[E.pair(g, E.right_factor.idempotents[w])]

    def right_action(self, v: int, h: int) -> SMat:
        """Right multiplication by generator h of the right algebra: (v, t(h)) -> (v, s(h))."""
        E = self.algebra
        return self.module.act[E.pair(self.left.idempotents[v], h)]

    def memo(self, key, compute):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        val = compute()
        with self._lock:
            return self._cache.setdefault(key, val)

    def restrict_left(self) -> Module:
        """Underlying left module over the left algebra."""

        def build():
            A, Bop = self.left, self.algebra.right_factor
            nB = Bop.nvertices
            dims = [sum(self.block(v, w) for w in range(nB)) for v in range(A.nvertices)]
            act = {}
            for g in A.generators:
                act[g] = block_diag(*[self.left_action(g, w) for w in range(nB)], field=A.field)
            return Module(A, dims, act, name=f"{self.name}|left" if self.name else None)

        return self.memo(("left",), build)

    def restrict_right(self) -> Module:
        """Underlying right module, as a left module over the opposite of the right algebra."""

        def build():
            A, Bop = self.left, self.algebra.right_factor
            nA = A.nvertices
            # block w of the restriction gathers (v, w) for all v; reorder by w
            dims = [sum(self.block(v, w) for v in range(nA)) for w in range(Bop.nvertices)]
            act = {}
            for h in Bop.generators:
                act[h] = block_diag(*[self.right_action(v, h) for v in range(nA)], field=A.field)
            return Module(Bop, dims, act, name=f"{self.name}|right" if self.name else None)

        return self.memo(("right",), build)

    def to_json(self):
        d = self.module.to_json()
        d["left"] = self.left.name
        d["right"] = self.right.name
        return d


def regular_bimodule(A: Algebra) -> Bimodule:
    """A as an A-A-bimodule (a left module over the enveloping algebra)."""

    def build():
        E = enveloping(A)
        F = A.field
        blocks = [[] for _ in range(E.nvertices)]
        for b in range(A.dim):
            blocks[E.vertex_pair(A.target[b], A.source[b])].append(b)
        pos = {}
        for x, bl in enumerate(blocks):
            for i, b in enumerate(bl):
                pos[b] = i
        act = {}
        for gen in E.generators:
            a, h = E.unpair(gen)
            s, t = E.source[gen], E.target[gen]
            cols = {}
            for j, b in enumerate(blocks[s]):
                if A.is_idempotent(h):  # left multiplication by a
                    prod = A.mul(a, b)
                else:  # right multiplication by h
                    prod = A.mul(b, h)
                col = {pos[k]: c for k, c in prod.items()}
                if col:
                    cols[j] = col
            act[gen] = SMat(len(blocks[t]), len(blocks[s]), cols, F)
        M = Module(E, [len(bl) for bl in blocks], act, name=A.name)
        return Bimodule(M, A, A)

    return A.memo(("regular-bimodule",), build)


def _tensor_core(X: Bimodule, ydims, yleft, out_gens, out_algebra, out_vertex, name=None):
    """Shared quotient construction for ``X (x)_A Y``.

    ``ydims(e, c)`` gives block sizes of Y and ``yleft(a, c)`` the left action
    of a middle generator ``a`` on Y's column ``c``.  ``out_gens`` lists
    ``(generator, side, data)``: side "X" carries ``h`` (a left generator acting
    through X), side "Y" carries a function ``e -> matrix`` acting on Y.
    Block ``(f, c)`` of the result is ``sum_e X_(f,e) (x) Y_(e,c)`` modulo
    ``(x a) (x) y - x (x) (a y)``, indexed ``offset_e + i * dim Y_(e,c) + j``.
    """
    B, A = X.left, X.right
    F = A.field
    nA, nB = A.nvertices, B.nvertices
    spaces = {}
    for f in range(nB):
        for c in range(len(out_vertex)):
            offs = {}
            decode = []
            for e in range(nA):
                offs[e] = len(decode)
                yd = ydims(e, c)
                decode.extend((e, i, j) for i in range(X.block(f, e)) for j in range(yd))
            rels = []
            for a in A.generators:
                s, t = A.source[a], A.target[a]
                xa = X.right_action(f, a)  # X_(f,t) -> X_(f,s)
                ya = yleft(a, c)  # Y_(s,c) -> Y_(t,c)
                ys, yt = ydims(s, c), ydims(t, c)
                for i in range(X.block(f, t)):
                    xcol = xa.column(i)
                    for j in range(ys):
                        r: dict = {}
                        for i2, coef in xcol.items():
                            r[offs[s] + i2 * ys + j] = coef
                        for j2, coef in ya.column(j).items():
                            vec_axpy(r, -1, {offs[t] + i * yt + j2: coef})
                        if r:
                            rels.append(r)
            S = Subspace.span(rels, len(decode), F)
            comp = S.complement()
            x = out_vertex[c](f)
            spaces[x] = (c, offs, decode, S, comp, {p: k for k, p in enumerate(comp)})
    dims = [0] * out_algebra.nvertices
    for x, sp in spaces.items():
        dims[x] = len(sp[4])
    act = {}
    for gen, side, data in out_gens:
        s_out, t_out = out_algebra.source[gen], out_algebra.target[gen]
        cs, _, decode_s, _, comp_s, _ = spaces[s_out]
        ct, offs_t, _, S_t, _, pos_t = spaces[t_out]
        cols = {}
        for q_idx, q in enumerate(comp_s):
            e, i, j = decode_s[q]
            yd = ydims(e, ct)
            img: dict = {}
            if side == "X":
                xm = X.left_action(data, e)  # X_(s(h),e) -> X_(t(h),e)
                for i2, coef in xm.column(i).items():
                    img[offs_t[e] + i2 * yd + j] = coef
            else:
                ym = data(e)  # Y_(e,cs) -> Y_(e,ct)
                for j2, coef in ym.column(j).items():
                    img[offs_t[e] + i * yd + j2] = coef
            if img:
                col = {pos_t[p]: a for p, a in S_t.reduce(img).items()}
                if col:
                    cols[q_idx] = col
        act[gen] = SMat(dims[t_out], dims[s_out], cols, F)
    return Module(out_algebra, dims, act, name=name)


def tensor_bimodule_module(X: Bimodule, V: Module) -> Module:
    """``X (x)_A V`` as a left module over the left algebra of X."""
    if X.right is not V.algebra:
        raise AlgebraMismatch(f"right algebra {X.right.name} of X differs from {V.algebra.name}")
    B = X.left

    def ydims(e, c):
        return V.dims[e]

    def yleft(a, c):
        return V.act[a]

    out_gens = [(h, "X", h) for h in B.generators]
    out_vertex = [lambda f: f]
    key = ("tensor-module", id(V))
    hit = X.memo(key, lambda: (V, _tensor_core(X, ydims, yleft, out_gens, B, out_vertex, name=f"{X.name}⊗{V.name}")))
    return hit[1]


def tensor_bimodules(X: Bimodule, Y: Bimodule) -> Bimodule:
    """``X (x)_A Y`` for an B-A-bimodule X and an A-C-bimodule Y."""
    if X.right is not Y.left:
        raise AlgebraMismatch(f"middle algebras {X.right.name} and {Y.left.name} differ")
    B, C = X.left, Y.right
    EY = Y.algebra
    Cop = EY.right_factor
    EO = enveloping(B, C)
    nC = C.nvertices

    def ydims(e, c):
        return Y.block(e, c)

    def yleft(a, c):
        return Y.left_action(a, c)

    out_gens = []
    for h in B.generators:
        for c in range(nC):
            out_gens.append((EO.pair(h, Cop.idempotents[c]), "X", h))
    for f in range(B.nvertices):
        for k in Cop.generators:
            out_gens.append((EO.pair(B.idempotents[f], k), "Y", (lambda k: lambda e: Y.right_action(e, k))(k)))
    out_vertex = [(lambda c: lambda f: EO.vertex_pair(f, c))(c) for c in range(nC)]
    key = ("tensor-bimodule", id(Y))

    def build():
        M = _tensor_core(X, ydims, yleft, out_gens, EO, out_vertex, name=f"{X.name}⊗{Y.name}")
        return (Y, Bimodule(M, B, C))

    return X.memo(key, build)[1]
