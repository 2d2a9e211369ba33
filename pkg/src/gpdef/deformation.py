"""Lifts of a module over truncated power-series rings ``k[t]/(t^n)``.

A lift of order ``n`` keeps the underlying space of the base module ``V``
and lets each generator ``g`` act by ``rho_0(g) + t rho_1(g) + ... +
t^(n-1) rho_(n-1)(g)`` with ``rho_0`` the action of ``V``.  The relations of
the algebra must vanish modulo ``t^n``.

For every order the coefficient of ``t^n`` in a relation is
``L(rho_n) + C_n`` where ``L`` is the linearization at ``rho_0`` (the same
operator at every order) and ``C_n`` collects products of lower terms.
Extending is therefore one inhomogeneous linear solve.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .algebra import Algebra, enveloping, truncated_polynomial
from .errors import NoLiftSupplied, PreconditionFailed
from .homology import ext_dim, is_totally_reflexive, stable_end_dim, TRUE
from .linalg import SMat, Subspace, hstack, vec_axpy, vec_scale
from .modules import Module, find_isomorphism, is_indecomposable, is_projective


# ---------------------------------------------------------------------------
# vectorization of generator matrices


class _Layout:
    """Index bookkeeping shared by all lifts of one base module."""

    def __init__(self, V: Module):
        A = V.algebra
        self.module = V
        self.gen_off = {}
        n = 0
        for g in A.generators:
            self.gen_off[g] = n
            n += V.dims[A.target[g]] * V.dims[A.source[g]]
        self.nunknowns = n
        self.rel_off = []
        m = 0
        for r in A.relations:
            self.rel_off.append(m)
            m += V.dims[r.target] * V.dims[r.source]
        self.nequations = m

    def flatten(self, mats: dict) -> dict:
        V = self.module
        A = V.algebra
        out = {}
        for g, M in mats.items():
            off, w = self.gen_off[g], V.dims[A.source[g]]
            for j, col in M.cols.items():
                for i, a in col.items():
                    if a:
                        out[off + i * w + j] = a
        return out

    def unflatten(self, vec: dict) -> dict:
        V = self.module
        A = V.algebra
        out = {}
        for g in A.generators:
            off = self.gen_off[g]
            h, w = V.dims[A.target[g]], V.dims[A.source[g]]
            ents = {}
            for i in range(h):
                for j in range(w):
                    a = vec.get(off + i * w + j)
                    if a:
                        ents[(i, j)] = a
            out[g] = SMat.from_entries(h, w, ents, V.field)
        return out

    def relation_vector(self, k: int, M: SMat) -> dict:
        """Flatten the residue matrix of the k-th relation into equation coordinates."""
        r = self.module.algebra.relations[k]
        w = self.module.dims[r.source]
        off = self.rel_off[k]
        return {off + i * w + j: a for j, col in M.cols.items() for i, a in col.items() if a}

    def relation_of_row(self, row: int) -> int:
        k = 0
        for idx, off in enumerate(self.rel_off):
            if off <= row:
                k = idx
        return k


def _layout(V: Module) -> _Layout:
    return V.memo(("lift-layout",), lambda: _Layout(V))


def linearization(V: Module) -> SMat:
    """Matrix of ``X -> sum_c c sum_p rho_0(prefix) X(w_p) rho_0(suffix)`` over all relations."""

    def build():
        lay = _layout(V)
        A = V.algebra
        F = V.field
        cols: dict = {}
        for k, r in enumerate(A.relations):
            w_src = V.dims[r.source]
            roff = lay.rel_off[k]
            for c, word in r.terms:
                for p, g in enumerate(word):
                    left = SMat.identity(V.dims[r.target], F)
                    for h in word[:p]:
                        left = left @ V.act[h]
                    right = SMat.identity(V.dims[r.source], F)
                    for h in reversed(word[p + 1 :]):
                        right = V.act[h] @ right
                    # entry (i, j) of left X right gets left[i, a] X[a, b] right[b, j]
                    rrows = right.rows_dod()
                    goff, gw = lay.gen_off[g], V.dims[A.source[g]]
                    for a, lcol in left.cols.items():
                        for b, rrow in rrows.items():
                            col = cols.setdefault(goff + a * gw + b, {})
                            for i, x in lcol.items():
                                for j, y in rrow.items():
                                    vec_axpy(col, c * x * y, {roff + i * w_src + j: F.one})
        return SMat(lay.nequations, lay.nunknowns, {j: c for j, c in cols.items() if c}, F)

    return V.memo(("linearization",), build)


def cocycles(V: Module) -> list:
    """Basis of first-order deformations ``rho_1`` (kernel of the linearization)."""
    return V.memo(("cocycles",), lambda: linearization(V).kernel())


def coboundaries(V: Module) -> Subspace:
    """Span of ``g -> rho_0(g) Y_s - Y_t rho_0(g)`` for block-diagonal ``Y``."""

    def build():
        lay = _layout(V)
        A = V.algebra
        F = V.field
        vecs = []
        for v in range(A.nvertices):
            d = V.dims[v]
            for p in range(d):
                for q in range(d):
                    E = SMat.from_entries(d, d, {(p, q): F.one}, F)
                    mats = {}
                    for g in A.generators:
                        s, t = A.source[g], A.target[g]
                        m = SMat(V.dims[t], V.dims[s], {}, F)
                        if s == v:
                            m = m + V.act[g] @ E
                        if t == v:
                            m = m - E @ V.act[g]
                        mats[g] = m
                    vec = lay.flatten(mats)
                    if vec:
                        vecs.append(vec)
        return Subspace.span(vecs, lay.nunknowns, F)

    return V.memo(("coboundaries",), build)


def ext1_classes(V: Module) -> list:
    """Cocycles whose classes form a basis of ``Z^1 / B^1``."""

    def build():
        B = coboundaries(V)
        S = Subspace(B.n, V.field, dict(B.rows))
        out = []
        for z in cocycles(V):
            if S.add(z):
                out.append(z)
        return out

    return V.memo(("ext1-classes",), build)


# ---------------------------------------------------------------------------
# lifts


def _poly_mul(P: list, Q: list, n: int) -> list:
    """Product of polynomial matrices (lists indexed by t-degree), truncated below degree n."""
    out = []
    for k in range(min(n, len(P) + len(Q) - 1)):
        acc = None
        for i in range(max(0, k - len(Q) + 1), min(k, len(P) - 1) + 1):
            term = P[i] @ Q[k - i]
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


@dataclass
class TruncatedLift:
    """Lift of ``base`` over ``k[t]/(t^order)``; ``terms[k-1]`` holds ``rho_k`` per generator."""

    base: Module
    order: int
    terms: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.terms) != self.order - 1:
            raise ValueError("a lift of order n carries n-1 correction terms")

    def rho(self, k: int, g: int) -> SMat:
        V = self.base
        if k == 0:
            return V.act[g]
        if k < self.order:
            return self.terms[k - 1][g]
        A = V.algebra
        return SMat(V.dims[A.target[g]], V.dims[A.source[g]], {}, V.field)

    def generator_polynomial(self, g: int, degree: int) -> list:
        return [self.rho(k, g) for k in range(degree + 1)]

    def relation_coefficients(self, degree: int) -> list:
        """Coefficient of ``t^degree`` of every relation, with terms of order >= ``order`` set to 0."""
        V = self.base
        A = V.algebra
        F = V.field
        out = []
        for r in A.relations:
            tot = SMat(V.dims[r.target], V.dims[r.source], {}, F)
            for c, word in r.terms:
                prod = [SMat.identity(V.dims[r.source], F)]
                for g in reversed(word):
                    prod = _poly_mul(self.generator_polynomial(g, degree), prod, degree + 1)
                if len(prod) > degree:
                    tot = tot.axpy(c, prod[degree])
            out.append(tot)
        return out

    def is_valid(self) -> bool:
        return all(m.is_zero() for d in range(self.order) for m in self.relation_coefficients(d))

    def constant_term(self) -> dict:
        """Flattened ``C_n`` for the extension to order ``n + 1``."""
        lay = _layout(self.base)
        out: dict = {}
        for k, M in enumerate(self.relation_coefficients(self.order)):
            out.update(lay.relation_vector(k, M))
        return out

    def with_term(self, mats: dict) -> "TruncatedLift":
        return TruncatedLift(self.base, self.order + 1, list(self.terms) + [mats])

    def truncate(self, m: int) -> "TruncatedLift":
        return TruncatedLift(self.base, m, list(self.terms[: m - 1]))

    def is_trivial(self) -> bool:
        return all(m.is_zero() for t in self.terms for m in t.values())

    # -- views -------------------------------------------------------------
    def as_base_module(self) -> Module:
        """Restriction of scalars to the algebra: blocks ordered by t-power."""
        V = self.base
        A = V.algebra
        n = self.order
        act = {}
        for g in A.generators:
            s, t = A.source[g], A.target[g]
            hs, ht = V.dims[s], V.dims[t]
            cols: dict = {}
            for k in range(n):
                for j in range(n - k):
                    m = self.rho(j, g)
                    for c, col in m.cols.items():
                        tgt = cols.setdefault(k * hs + c, {})
                        for i, a in col.items():
                            tgt[(k + j) * ht + i] = a
            act[g] = SMat(n * ht, n * hs, cols, V.field)
        return Module(A, [n * d for d in V.dims], act, name=f"{V.name}[t]/t^{n}" if V.name else None)

    def t_matrix(self) -> list:
        """Action of t per vertex block (shift of the t-power index)."""
        V = self.base
        n = self.order
        out = []
        for d in V.dims:
            out.append(SMat(n * d, n * d, {k * d + i: {(k + 1) * d + i: V.field.one} for k in range(n - 1) for i in range(d)}, V.field))
        return out

    def as_module(self) -> Module:
        """Module over ``A (x) k[t]/(t^n)^op``, the algebra of ``k[t]/(t^n) (x) A``-modules."""
        V = self.base
        A = V.algebra
        T = truncated_polynomial(self.order, V.field)
        E = enveloping(A, T)
        Tt = E.right_factor
        base = self.as_base_module()
        dims = [0] * E.nvertices
        act = {}
        for v in range(A.nvertices):
            dims[E.vertex_pair(v, 0)] = base.dims[v]
        tmats = self.t_matrix()
        for g in E.generators:
            a, b = E.unpair(g)
            if A.is_idempotent(a):
                act[g] = tmats[A.vertex_of_idempotent(a)]
            else:
                act[g] = base.act[a]
        return Module(E, dims, act, name=base.name)

    def to_json(self) -> dict:
        A = self.base.algebra
        gens = {}
        for g in A.generators:
            gens[A.labels[g]] = [self.rho(k, g).to_json() for k in range(self.order)]
        return {"order": self.order, "base": self.base.name, "actions": gens}


def trivial_lift(V: Module, order: int = 2) -> TruncatedLift:
    A = V.algebra
    zero = {g: SMat(V.dims[A.target[g]], V.dims[A.source[g]], {}, V.field) for g in A.generators}
    return TruncatedLift(V, order, [dict(zero) for _ in range(order - 1)])


def lift_from_cocycle(V: Module, z: dict) -> TruncatedLift:
    return TruncatedLift(V, 2, [_layout(V).unflatten(z)])


def first_order_lifts(V: Module) -> list:
    """The trivial lift followed by one lift per basis class of ``Ext^1(V, V)``."""
    return [trivial_lift(V, 2)] + [lift_from_cocycle(V, z) for z in ext1_classes(V)]


def tangent_dimension(V: Module) -> int:
    return 0 if V.dim == 0 else ext_dim(V, V, 1)


# ---------------------------------------------------------------------------
# extension problem


@dataclass
class Extended:
    lift: TruncatedLift
    adjusted: bool = False

    @property
    def ok(self):
        return True


@dataclass
class Obstructed:
    order: int
    residue: dict
    relations: list

    @property
    def ok(self):
        return False

    def to_json(self):
        return {"order": self.order, "relations": self.relations, "residue_nnz": len(self.residue)}


def extend_lift(L: TruncatedLift, adjust: bool = True):
    """Solve for ``rho_n``; with ``adjust`` and ``n >= 3`` also allow moving ``rho_(n-1)`` by a cocycle."""
    V = L.base
    F = V.field
    lay = _layout(V)
    Lop = linearization(V)
    C = L.constant_term()
    rhs = vec_scale(C, -F.one)
    x = Lop.solve(rhs)
    if x is not None:
        return Extended(L.with_term(lay.unflatten(x)))
    n = L.order
    if adjust and n >= 3:
        Z = cocycles(V)
        if Z:
            diffs = []
            for z in Z:
                moved = TruncatedLift(V, n, list(L.terms[:-1]) + [_add_mats(L.terms[-1], lay.unflatten(z))])
                D = moved.constant_term()
                vec_axpy(D, -F.one, C)
                diffs.append(D)
            big = hstack(Lop, SMat.from_columns(diffs, Lop.nrows, F))
            y = big.solve(rhs)
            if y is not None:
                shift: dict = {}
                for k, z in enumerate(Z):
                    a = y.get(Lop.ncols + k)
                    if a:
                        vec_axpy(shift, a, z)
                xs = {j: a for j, a in y.items() if j < Lop.ncols}
                new_prev = _add_mats(L.terms[-1], lay.unflatten(shift))
                base = TruncatedLift(V, n, list(L.terms[:-1]) + [new_prev])
                return Extended(base.with_term(lay.unflatten(xs)), adjusted=True)
    residue = Lop.column_space().reduce(rhs)
    names = sorted({V.algebra.relations[lay.relation_of_row(r)].name for r in residue})
    return Obstructed(n + 1, residue, names)


def _add_mats(a: dict, b: dict) -> dict:
    return {g: a[g] + b[g] for g in a}


# ---------------------------------------------------------------------------
# gauge transformations


def random_gauge(V: Module, order: int, rng: random.Random, span: int = 5) -> list:
    """``[Y_1, ..., Y_(order-1)]``, each a list of per-vertex square matrices."""
    F = V.field
    out = []
    for _ in range(order - 1):
        ys = []
        for d in V.dims:
            ents = {(i, j): F(rng.randint(-span, span)) for i in range(d) for j in range(d)}
            ys.append(SMat.from_entries(d, d, {k: a for k, a in ents.items() if a}, F))
        out.append(ys)
    return out


def apply_gauge(L: TruncatedLift, Y: list) -> TruncatedLift:
    """Conjugate by ``g = 1 + sum t^k Y_k``: ``rho'(a) = g_t rho(a) g_s^(-1)`` mod ``t^n``."""
    V = L.base
    A = V.algebra
    F = V.field
    n = L.order
    g = [[SMat.identity(d, F) for d in V.dims]] + list(Y[: n - 1])
    h = [[SMat.identity(d, F) for d in V.dims]]
    for k in range(1, n):
        acc = [SMat(d, d, {}, F) for d in V.dims]
        for j in range(1, k + 1):
            acc = [a - Yv @ hv for a, Yv, hv in zip(acc, g[j], h[k - j])]
        h.append(acc)
    terms = []
    for k in range(1, n):
        mats = {}
        for a in A.generators:
            s, t = A.source[a], A.target[a]
            tot = SMat(V.dims[t], V.dims[s], {}, F)
            for i in range(k + 1):
                for j in range(k + 1 - i):
                    l = k - i - j
                    tot = tot + g[i][t] @ L.rho(j, a) @ h[l][s]
            mats[a] = tot
        terms.append(mats)
    return TruncatedLift(V, n, terms)


def gauge_stability(L: TruncatedLift, trials: int = 20, seed: int = 0) -> dict:
    """Extension verdicts of the lift and of ``trials`` random gauge transforms of it."""
    rng = random.Random(seed)
    ref = extend_lift(L, adjust=False).ok
    verdicts = []
    for _ in range(trials):
        G = apply_gauge(L, random_gauge(L.base, L.order, rng))
        if not G.is_valid():
            raise AssertionError("gauge transform broke the lift relations")
        verdicts.append(extend_lift(G, adjust=False).ok)
    return {"reference": ref, "verdicts": verdicts, "stable": all(v == ref for v in verdicts)}


# ---------------------------------------------------------------------------
# reports


@dataclass
class TruncationReport:
    tangent: int
    ring: str
    exact: bool
    max_order: int
    obstructed_order: int | None = None
    witnesses: list = field(default_factory=list)

    def key(self) -> tuple:
        return (self.tangent, self.ring, self.exact, self.obstructed_order)

    def to_json(self) -> dict:
        return {
            "tangent": self.tangent,
            "ring": self.ring,
            "exact": self.exact,
            "max_order": self.max_order,
            "obstructed_order": self.obstructed_order,
            "witnesses": self.witnesses,
        }


def udr_truncation_report(V: Module, max_order: int = 4) -> TruncationReport:
    """Shape of the deformation ring read off from successive extensions of the generic lift."""
    se = stable_end_dim(V)
    if se != 1:
        raise PreconditionFailed("stable_end_dim", f"stable End has dimension {se}", stable_end_dim=se)
    r = tangent_dimension(V)
    if r == 0:
        return TruncationReport(0, "R = k", True, max_order)
    if r >= 2:
        raise PreconditionFailed("tangent_dimension", f"{r} generators; only one-parameter rings are examined", generators=r)
    classes = ext1_classes(V)
    if len(classes) != 1:
        raise AssertionError("cocycle count disagrees with Ext^1")
    L = lift_from_cocycle(V, classes[0])
    wit = []
    while L.order < max_order:
        res = extend_lift(L)
        if not res.ok:
            m = L.order
            wit.append(res.to_json())
            # obstruction of the universal first-order class at order 3 is independent of choices
            return TruncationReport(1, f"consistent with k[t]/(t^{m})", m == 2, max_order, res.order, wit)
        wit.append({"order": res.lift.order, "extended": True, "adjusted": res.adjusted})
        L = res.lift
    return TruncationReport(1, f"consistent with k[[t]] up to order {max_order}", False, max_order, None, wit)


def _certify(V: Module, label: str) -> dict:
    if not is_indecomposable(V):
        raise PreconditionFailed("indecomposable", label)
    if is_projective(V):
        raise PreconditionFailed("non_projective", label)
    tr = is_totally_reflexive(V)
    if tr.verdict != TRUE:
        raise PreconditionFailed("totally_reflexive", f"{label}: {tr.verdict}")
    se = stable_end_dim(V)
    if se != 1:
        raise PreconditionFailed("stable_end_dim", f"{label}: {se}")
    return {"indecomposable": True, "projective": False, "totally_reflexive": TRUE, "stable_end_dim": 1}


@dataclass
class InvarianceReport:
    kind: str
    source: dict
    image: dict
    holds: bool
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"kind": self.kind, "source": self.source, "image": self.image, "holds": self.holds, "details": self.details}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)


def _compare(kind, V: Module, W: Module, max_order: int, details: dict):
    from .errors import InvarianceViolation

    src = _certify(V, "source")
    try:
        img = _certify(W, "image")
    except PreconditionFailed as exc:
        rep = InvarianceReport(kind, src, {"failed": exc.certificate}, False, details)
        raise InvarianceViolation(rep) from exc
    tv, tw = tangent_dimension(V), tangent_dimension(W)
    src["tangent"], img["tangent"] = tv, tw
    ok = tv == tw
    if ok and tv <= 1:
        rv, rw = udr_truncation_report(V, max_order), udr_truncation_report(W, max_order)
        src["udr"], img["udr"] = rv.to_json(), rw.to_json()
        ok = rv.key() == rw.key()
    rep = InvarianceReport(kind, src, img, ok, details)
    if not ok:
        raise InvarianceViolation(rep)
    return rep


def verify_syzygy_invariance(V: Module, max_order: int = 4) -> InvarianceReport:
    """Certificates, tangent dimension and truncation report agree for ``V`` and ``Omega V``."""
    from .modules import strip_projective_summands, syzygy

    _certify(V, "source")
    S = strip_projective_summands(syzygy(V))
    return _compare("syzygy", V, S.core, max_order, {"peeled": S.multiplicities()})


def verify_transport_invariance(X, Y, level: int, V: Module, max_order: int = 4) -> InvarianceReport:
    """Same comparison for ``V`` and the core of ``X (x) V`` under a checked equivalence pair."""
    from .bimodule import check_sing_equiv_level, transport
    from .modules import strip_projective_summands

    rep = check_sing_equiv_level(X, Y, level)
    if not rep.overall:
        raise PreconditionFailed("equivalence", "pair fails the level condition suite", report=rep.to_json())
    _certify(V, "source")
    S = strip_projective_summands(transport(X, V))
    return _compare("transport", V, S.core, max_order, {"level": level, "peeled": S.multiplicities()})


def middle_term(L: TruncatedLift) -> Module:
    """For an order-2 lift: the middle term of ``0 -> V -> E -> V -> 0`` as an algebra module."""
    if L.order != 2:
        raise ValueError("middle terms are defined for first-order lifts")
    return L.as_base_module()


def lift_equivalent(L1: TruncatedLift, L2: TruncatedLift) -> bool:
    """Isomorphism of lifts as modules over the coefficient-extended algebra."""
    return find_isomorphism(L1.as_module(), L2.as_module()) is not None
