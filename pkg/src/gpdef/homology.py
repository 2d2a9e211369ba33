"""Resolutions, Ext, duals, transposes, stable Hom and reflexivity certificates.

Right modules are always handled as left modules over the opposite algebra.
Verdicts that quantify over all degrees are three-valued: a vanishing check
up to a bound is only upgraded to ``"true"`` by a sufficiency rule
(finite injective dimension of the algebra, or periodic syzygies).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .algebra import Algebra, opposite
from .errors import AlgebraMismatch
from .linalg import SMat, Subspace, vec_axpy, vec_shift
from .modules import (
    Module,
    ModuleMap,
    _projective_layout,
    direct_sum,
    find_isomorphism,
    hom_dim,
    hom_space,
    indec_projective,
    is_projective,
    presentation,
    quotient_module,
    regular_module,
    relations,
    syzygy,
    syzygy_with_inclusion,
    zero_module,
)

TRUE, FALSE, INCONCLUSIVE = "true", "false", "inconclusive"


@dataclass
class Report:
    """Serializable verdict with the bound used and supporting witnesses."""

    claim: str
    verdict: object
    bound: int | None = None
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"claim": self.claim, "bound": self.bound, "verdict": self.verdict, "witnesses": self.witnesses}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)

    def __bool__(self):
        return self.verdict is True or self.verdict == TRUE


# ---------------------------------------------------------------------------
# resolutions


@dataclass
class Resolution:
    """``... -> P_1 -> P_0 -> M``; ``differentials[i]`` is ``d_{i+1}: P_{i+1} -> P_i``."""

    module: Module
    terms: list
    differentials: list
    augmentation: ModuleMap | None
    syzygies: list

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def term_dims(self) -> list:
        return [P.dim for P in self.terms]

    def is_exact(self) -> bool:
        """Rank conditions at every inner term plus surjectivity of the augmentation."""
        if self.augmentation is not None and self.augmentation.rank() != self.module.dim:
            return False
        maps = ([self.augmentation] if self.augmentation is not None else []) + list(self.differentials)
        for k in range(len(maps) - 1):
            out, inc = maps[k], maps[k + 1]
            if inc.rank() != out.source.dim - out.rank():
                return False
            if not out.compose(inc).is_zero():
                return False
        return True

    def is_minimal(self) -> bool:
        from .modules import radical_subspaces

        for d in self.differentials:
            rad = radical_subspaces(d.target)
            for v, b in enumerate(d.blocks):
                if any(rad[v].reduce(c) for c in b.cols.values()):
                    return False
        return True


def minimal_resolution(M: Module, n: int) -> Resolution:
    """Terms ``P_0 .. P_n`` of a minimal projective resolution (zero terms once it stops)."""
    terms, diffs, syz = [], [], [M]
    aug = None
    X = M
    prev_inclusion = None
    for i in range(n + 1):
        if X.dim == 0:
            Z = zero_module(M.algebra)
            terms.append(Z)
            if terms[:-1]:
                diffs.append(ModuleMap.zero(Z, terms[-2]))
            syz.append(Z)
            prev_inclusion = None
            continue
        pr = presentation(X)
        P = pr.cover
        cover_map = ModuleMap(P, X, pr.pi)
        if i == 0:
            aug = cover_map
        else:
            diffs.append(prev_inclusion.compose(cover_map))
        terms.append(P)
        Y, inc = syzygy_with_inclusion(X)
        syz.append(Y)
        prev_inclusion = inc
        X = Y
    return Resolution(M, terms, diffs, aug, syz[: n + 2])


def projective_dimension(M: Module, bound: int):
    """``pd M`` if at most ``bound``, else None."""
    X = M
    for k in range(bound + 1):
        if is_projective(X):
            return k
        X = syzygy(X)
    return None


# ---------------------------------------------------------------------------
# Ext


def ext_dim(M: Module, N: Module, i: int) -> int:
    """``dim Ext^i(M, N)`` from ``0 -> Hom(X,N) -> Hom(P0,N) -> Hom(Omega X,N) -> Ext^1(X,N) -> 0``."""
    if M.algebra is not N.algebra:
        raise AlgebraMismatch("Ext needs modules over one algebra")
    if i < 0:
        raise ValueError("i must be non-negative")
    if i == 0:
        return hom_dim(M, N)
    X = syzygy(M, i - 1)
    if X.dim == 0 or N.dim == 0:
        return 0
    pr = presentation(X)
    hom_p0 = sum(N.dims[v] for v, _ in pr.gens)
    return hom_dim(syzygy(X), N) - hom_p0 + hom_dim(X, N)


def ext_dim_many(M: Module, targets, i: int) -> int:
    return sum(ext_dim(M, N, i) for N in targets)


def ext_dims_against_regular(M: Module, bound: int) -> list:
    """``[dim Ext^i(M, A) for i = 1..bound]``, with A split into its indecomposable projectives."""
    A = M.algebra
    projs = [indec_projective(A, v) for v in range(A.nvertices)]
    return [ext_dim_many(M, projs, i) for i in range(1, bound + 1)]


def _hom_complex_map(X: Module, N: Module):
    """Matrix of ``Hom(P_0(X), N) -> Hom(P_1(X), N)`` induced by the relations of X."""
    pr = presentation(X)
    F = X.field
    src_off, n = [], 0
    for v, _ in pr.gens:
        src_off.append(n)
        n += N.dims[v]
    cols: dict = {}
    row = 0
    for w, z in relations(X):
        for c, a in z.items():
            k, b = pr.coords[w][c]
            v = pr.gens[k][0]
            for i in range(N.dims[v]):
                img = N.orbit(v, {i: F.one}, only=b)
                if img:
                    vec_axpy(cols.setdefault(src_off[k] + i, {}), a, vec_shift(img, row))
        row += N.dims[w]
    return SMat(row, n, {j: c for j, c in cols.items() if c}, F)


def ext_dim_via_complex(M: Module, N: Module, i: int) -> int:
    """Independent route: cohomology of ``Hom(P_., N)`` at degree ``i``."""
    if i < 0:
        raise ValueError("i must be non-negative")
    if i == 0:
        return hom_dim(M, N)
    X = syzygy(M, i - 1)
    if X.dim == 0:
        return 0
    # Hom(P_{i-1},N) --a--> Hom(P_i,N) --b--> Hom(P_{i+1},N)
    a = _hom_complex_map(X, N)
    Y = syzygy(X)
    if Y.dim == 0:
        return 0
    b = _hom_complex_map(Y, N)
    return b.ncols - b.rank() - a.rank()


# ---------------------------------------------------------------------------
# duality


def vector_dual(M: Module) -> Module:
    """``Hom_k(M, k)`` as a left module over the opposite algebra (transposed actions)."""
    Aop = opposite(M.algebra)
    act = {g: m.transpose() for g, m in M.act.items()}
    return Module(Aop, M.dims, act, name=f"D({M.name})" if M.name else None)


def _right_multiply(A: Algebra, vec: dict, layout_from, layout_to, a: int, block: int) -> dict:
    """``x * a`` for ``x`` in block ``block`` of ``P_t`` (local coords), result in ``P_s``."""
    blocks_from, _ = layout_from
    _, pos_to = layout_to
    out: dict = {}
    for i, c in vec.items():
        b = blocks_from[block][i]
        for d, e in A.mul(b, a).items():
            vec_axpy(out, c, {pos_to[d][1]: e})
    return out


def dual_star(M: Module) -> Module:
    """``Hom_A(M, A)`` as a left module over the opposite algebra.

    Block ``v`` is ``Hom(M, P_v)``; an arrow ``a: s -> t`` acts by right
    multiplication ``Hom(M, P_t) -> Hom(M, P_s)``.
    """
    A = M.algebra
    Aop = opposite(A)
    F = A.field
    homs = [hom_space(M, indec_projective(A, v)) for v in range(A.nvertices)]
    if M.dim == 0:
        return zero_module(Aop)
    pr = presentation(M)
    act = {}
    for a in A.generators:
        s, t = A.source[a], A.target[a]
        Ht, Hs = homs[t], homs[s]
        lt, ls = _projective_layout(A, t), _projective_layout(A, s)
        cols = {}
        for j, vec in enumerate(Ht.vectors):
            imgs = Ht.gen_images(vec)
            out: dict = {}
            for k, (v, _) in enumerate(pr.gens):
                if imgs[k]:
                    out.update(vec_shift(_right_multiply(A, imgs[k], lt, ls, a, v), Hs.offsets[k]))
            coords = Hs.coordinates(out)
            col = {i: c for i, c in enumerate(coords) if c}
            if col:
                cols[j] = col
        act[a] = SMat(Hs.dim, Ht.dim, cols, F)
    D = Module(Aop, [H.dim for H in homs], act, name=f"{M.name}*" if M.name else None)
    return D


def transpose(M: Module) -> Module:
    """``Tr M = coker(P_0^* -> P_1^*)`` over the opposite algebra."""
    A = M.algebra
    Aop = opposite(A)
    F = A.field
    if M.dim == 0 or is_projective(M):
        return zero_module(Aop)
    pr = presentation(M)
    rels = relations(M)
    q0 = [indec_projective(Aop, v) for v, _ in pr.gens]
    q1 = [indec_projective(Aop, w) for w, _ in rels]
    Q0 = direct_sum(*q0)
    Q1 = direct_sum(*q1)
    # block u of P^op_v is spanned by basis elements c of e_v A e_u
    blocks = []
    for u in range(A.nvertices):
        off0, off1 = [], []
        n0 = n1 = 0
        for P in q0:
            off0.append(n0)
            n0 += P.dims[u]
        for P in q1:
            off1.append(n1)
            n1 += P.dims[u]
        cols = {}
        for k, (v, _) in enumerate(pr.gens):
            lay_v = _projective_layout(Aop, v)[0][u]
            for ci, c in enumerate(lay_v):
                col: dict = {}
                for r, (w, z) in enumerate(rels):
                    pos_w = _projective_layout(Aop, w)[1]
                    for cc, coef in z.items():
                        kk, b = pr.coords[w][cc]
                        if kk != k:
                            continue
                        for d, e in A.mul(b, c).items():
                            vec_axpy(col, coef * e, {off1[r] + pos_w[d][1]: F.one})
                if col:
                    cols[off0[k] + ci] = col
        blocks.append(SMat(n1, n0, cols, F))
    d = ModuleMap(Q0, Q1, blocks)
    if not d.is_homomorphism():
        raise AssertionError("dualized presentation is not a module map")
    images = [b.column_space() for b in blocks]
    T, _ = quotient_module(Q1, images, name=f"Tr({M.name})" if M.name else None)
    return T


# ---------------------------------------------------------------------------
# stable Hom


@dataclass
class StableHom:
    dim: int
    hom_dim: int
    representatives: list

    def __int__(self):
        return self.dim


def stable_hom(M: Module, N: Module) -> StableHom:
    """Hom(M, N) modulo maps factoring through the projective cover of N."""
    if M.algebra is not N.algebra:
        raise AlgebraMismatch("stable Hom needs modules over one algebra")
    H = hom_space(M, N)
    if H.dim == 0:
        return StableHom(0, 0, [])
    if M.dim == 0 or N.dim == 0:
        return StableHom(0, H.dim, [])
    prN = presentation(N)
    P = prN.cover
    HP = hom_space(M, P)
    prM = presentation(M)
    span = Subspace(len(H.free), M.field)
    for vec in HP.vectors:
        imgs = HP.gen_images(vec)
        out: dict = {}
        for k, (v, _) in enumerate(prM.gens):
            if imgs[k]:
                out.update(vec_shift(prN.pi[v].apply(imgs[k]), H.offsets[k]))
        coords = {i: c for i, c in enumerate(H.coordinates(out)) if c}
        span.add(coords)
    reps = []
    for i in range(H.dim):
        if span.add({i: M.field.one}):
            reps.append(i)
    return StableHom(len(reps), H.dim, reps)


def stable_end_dim(M: Module) -> int:
    return stable_hom(M, M).dim


# ---------------------------------------------------------------------------
# Gorenstein and reflexivity certificates


def injective_dimensions(A: Algebra, bound: int):
    """(left, right, witnesses): injective dimensions of the regular module on each side."""

    def compute():
        left_dual = vector_dual(regular_module(A))  # D(_A A) over A^op
        right_dual = vector_dual(regular_module(opposite(A)))  # D(A_A) over A
        out = []
        wit = []
        for side, D in (("left", left_dual), ("right", right_dual)):
            X = D
            dims = []
            found = None
            seen = []
            period = None
            for k in range(bound + 1):
                dims.append(X.dim)
                if is_projective(X):
                    found = k
                    break
                for a, Y in seen:
                    if Y.dims == X.dims and find_isomorphism(Y, X) is not None:
                        period = [a, k]
                        break
                seen.append((k, X))
                if period:
                    break
                X = syzygy(X)
            out.append(found)
            w = {"side": side, "syzygy_dims": dims}
            if found is None:
                w["periodic_syzygies"] = period
            wit.append(w)
        return out[0], out[1], wit

    return A.memo(("injective-dimensions", bound), compute)


def is_gorenstein(A: Algebra, bound: int = 8) -> Report:
    left, right, wit = injective_dimensions(A, bound)
    if left is not None and right is not None:
        w = {"left_injective_dimension": left, "right_injective_dimension": right}
        return Report("gorenstein", TRUE, bound, [w] + wit)
    return Report("gorenstein", INCONCLUSIVE, bound, wit)


def certified_injective_dimension(A: Algebra, bound: int = 8):
    left, right, _ = injective_dimensions(A, bound)
    if left is None or right is None:
        return None
    return max(left, right)


def default_bound(A: Algebra) -> int:
    d = certified_injective_dimension(A)
    return max(6, 2 + d) if d is not None else 6


def is_cohen_macaulay(M: Module, bound: int | None = None) -> Report:
    """``Ext^i(M, A) = 0`` for ``i >= 1``; certified once the bound covers the injective dimension of A."""
    bound = bound or default_bound(M.algebra)
    exts = ext_dims_against_regular(M, bound)
    wit = [{"i": i + 1, "ext_dim": e} for i, e in enumerate(exts) if e]
    if wit:
        return Report("cohen_macaulay", FALSE, bound, wit)
    gd = certified_injective_dimension(M.algebra)
    verdict = TRUE if gd is not None and gd <= bound else INCONCLUSIVE
    return Report("cohen_macaulay", verdict, bound, [{"ext_dims": exts, "injective_dimension": gd}])


def _periodic_syzygy(M: Module, bound: int):
    """(a, b) with Omega^a M ≅ Omega^b M and a < b <= bound, or None."""
    seen = []
    X = M
    for k in range(bound + 1):
        if X.dim == 0:
            return None
        for a, Y in seen:
            if Y.dims == X.dims and find_isomorphism(Y, X) is not None:
                return (a, k)
        seen.append((k, X))
        X = syzygy(X)
    return None


def is_totally_reflexive(M: Module, bound: int | None = None) -> Report:
    """Three-valued test: ``Ext^i(M, A) = 0 = Ext^i(Tr M, A^op)`` for ``1 <= i <= bound``."""
    A = M.algebra
    if M.dim == 0 or is_projective(M):
        return Report("totally_reflexive", TRUE, bound, [{"rule": "projective"}])
    gd = certified_injective_dimension(A)
    if bound is None:
        bound = max(6, 2 + gd) if gd is not None else 6
    wit = []
    for i, e in enumerate(ext_dims_against_regular(M, bound), start=1):
        if e:
            return Report("totally_reflexive", FALSE, bound, [{"module": "M", "i": i, "ext_dim": e}])
    T = transpose(M)
    for i, e in enumerate(ext_dims_against_regular(T, bound), start=1):
        if e:
            return Report("totally_reflexive", FALSE, bound, [{"module": "Tr M", "i": i, "ext_dim": e}])
    wit.append({"vanishing_up_to": bound})
    if gd is not None and gd <= bound:
        wit.append({"rule": "gorenstein", "injective_dimension": gd})
        return Report("totally_reflexive", TRUE, bound, wit)
    pm, pt = _periodic_syzygy(M, bound), _periodic_syzygy(T, bound)
    if pm and pt:
        wit.append({"rule": "periodic", "module": list(pm), "transpose": list(pt)})
        return Report("totally_reflexive", TRUE, bound, wit)
    return Report("totally_reflexive", INCONCLUSIVE, bound, wit)


def gp_certificate(M: Module, bound: int | None = None) -> dict:
    """Bundle of certificates used by the invariance suites."""
    from .modules import is_indecomposable

    tr = is_totally_reflexive(M, bound)
    return {
        "indecomposable": is_indecomposable(M),
        "projective": is_projective(M),
        "totally_reflexive": tr.verdict,
        "stable_end_dim": stable_end_dim(M),
    }
