"""Command-line front end: ``gpdef <noun> <verb> [flags]``.

Every command prints a single JSON document (UTF-8, sorted keys).  Exit
status is 0 on success, 1 when a corpus claim does not match the computed
value, and 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import GpdefError, InputError

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors become JSON input errors."""

    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _emit(doc, out):
    out.write(json.dumps(doc, sort_keys=True, ensure_ascii=False))
    out.write("\n")


def _error_doc(exc: Exception) -> dict:
    doc = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("source", "line", "column", "expected", "certificate"):
        val = getattr(exc, attr, None)
        if val is not None:
            doc["file" if attr == "source" else attr] = val
    return doc


# -- algebra -----------------------------------------------------------------


def _pick(ws, kind, name):
    table = {"algebra": ws.algebras, "module": ws.modules, "bimodule": ws.bimodules}[kind]
    if name is None:
        if kind == "algebra":
            name = next((n for k, n in reversed(ws.order) if k == "algebra"), None)
        else:
            name = ws.last(kind)
        if name is None:
            raise InputError(f"no {kind} defined in the input")
    if name not in table:
        raise InputError(f"no {kind} named {name!r}")
    return name, table[name]


def cmd_algebra_check(args) -> tuple:
    from .algebra import check_associativity, check_unit_and_idempotents, is_nakayama
    from .homology import is_gorenstein
    from .modules import is_special_biserial, loewy_length, regular_module
    from .textio import load

    ws = load(args.file)
    name, A = _pick(ws, "algebra", args.name)
    report = {
        "algebra": name,
        "field": A.presentation.field_spec,
        "dim": A.dim,
        "vertices": list(A.vertex_names),
        "arrows": [a.name for a in A.presentation.arrows if a.name in A.arrow_basis],
        "basis_by_vertex": {A.vertex_names[v]: len(A.by_source[v]) for v in range(A.nvertices)},
        "associative": check_associativity(A, samples=args.samples),
        "unit_and_idempotents": check_unit_and_idempotents(A),
        "special_biserial": is_special_biserial(A),
        "nakayama": is_nakayama(A),
        "loewy_length": loewy_length(regular_module(A)),
        "gorenstein": is_gorenstein(A, args.bound).to_json(),
    }
    return report, EXIT_OK


# -- module ------------------------------------------------------------------


def _module_info(M, args):
    from .modules import is_indecomposable, is_projective, loewy_length, strip_projective_summands, top_dims

    s = strip_projective_summands(M)
    return {
        "dims": M.dims_by_name(),
        "dim": M.dim,
        "top_dims": dict(zip(M.algebra.vertex_names, top_dims(M))),
        "loewy_length": loewy_length(M),
        "projective": is_projective(M),
        "indecomposable": is_indecomposable(M) if M.dim else False,
        "projective_summands": s.multiplicities(),
        "core_dim": s.core.dim,
    }


def _module_syzygy(M, args):
    from .modules import strip_projective_summands, syzygy

    if args.n < 0:
        raise InputError("--n must be non-negative")
    steps = []
    X = M
    for k in range(1, args.n + 1):
        X = syzygy(X)
        s = strip_projective_summands(X)
        steps.append({"n": k, "dims": X.dims_by_name(), "dim": X.dim, "core_dim": s.core.dim, "projective_summands": s.multiplicities()})
    return {"syzygies": steps}


def _module_gproj(M, args):
    from .homology import gp_certificate, is_totally_reflexive

    rep = is_totally_reflexive(M, args.bound)
    cert = gp_certificate(M, args.bound) if M.dim else {}
    return {"totally_reflexive": rep.to_json(), "certificate": cert}


def _module_stable_end(M, args):
    from .homology import stable_hom

    sh = stable_hom(M, M)
    return {"stable_end_dim": sh.dim, "end_dim": sh.hom_dim}


def _module_ext(M, args, ws):
    from .homology import ext_dim

    if args.i < 0:
        raise InputError("--i must be non-negative")
    other = args.other
    N = M if other is None else _pick(ws, "module", other)[1]
    if N.algebra is not M.algebra:
        raise InputError("the two modules live over different algebras")
    return {"other": N.name, "i": args.i, "ext_dim": ext_dim(M, N, args.i)}


def _module_tangent(M, args):
    from .deformation import tangent_dimension

    return {"tangent_dimension": tangent_dimension(M)}


def _module_udr(M, args):
    from .deformation import udr_truncation_report

    if args.max_order < 2:
        raise InputError("--max-order must be at least 2")
    return {"udr": udr_truncation_report(M, args.max_order).to_json()}


def cmd_module(args) -> tuple:
    from .textio import load

    ws = load(args.file)
    name, M = _pick(ws, "module", args.module)
    verbs = {
        "info": _module_info,
        "syzygy": _module_syzygy,
        "gproj": _module_gproj,
        "stable-end": _module_stable_end,
        "tangent": _module_tangent,
        "udr": _module_udr,
    }
    if args.verb == "ext":
        body = _module_ext(M, args, ws)
    else:
        body = verbs[args.verb](M, args)
    body.update({"module": name, "algebra": M.algebra.name, "command": args.verb})
    return body, EXIT_OK


# -- equivalence -------------------------------------------------------------


def cmd_equiv_check(args) -> tuple:
    from .bimodule import check_sing_equiv_level
    from .textio import Workspace

    if args.level < 0:
        raise InputError("--level must be non-negative")
    ws = Workspace()
    ws.add_file(args.file_x)
    x_name = ws.last("bimodule")
    if x_name is None:
        raise InputError(f"{args.file_x} defines no bimodule")
    ws.add_file(args.file_y)
    y_name = ws.last("bimodule")
    if y_name is None or y_name == x_name:
        raise InputError(f"{args.file_y} defines no bimodule")
    rep = check_sing_equiv_level(ws.bimodules[x_name], ws.bimodules[y_name], args.level, workers=args.workers)
    doc = rep.to_json()
    doc.update({"x": x_name, "y": y_name})
    return doc, EXIT_OK


# -- corpus ------------------------------------------------------------------


def cmd_examples_run(args) -> tuple:
    from .corpus import ENTRY_IDS
    from .runner import run_entries

    if args.all:
        ids = list(ENTRY_IDS)
    else:
        unknown = [i for i in args.id if i not in ENTRY_IDS]
        if unknown:
            raise InputError(f"unknown corpus id(s) {', '.join(unknown)}; known: {', '.join(ENTRY_IDS)}")
        ids = args.id
    rep = run_entries(ids, workers=args.workers)
    return rep, EXIT_OK if rep["ok"] else EXIT_MISMATCH


def cmd_examples_list(args) -> tuple:
    from .corpus import ENTRIES

    return {"entries": [{"id": e.id, "description": e.description, "claims": [f.claim for f in e.facts]} for e in sorted(ENTRIES, key=lambda e: e.id)]}, EXIT_OK


def cmd_examples_export(args) -> tuple:
    """Write the corpus algebras, string modules and self-equivalence bimodules as text files."""
    from . import corpus
    from .bimodule import bimodule_syzygy
    from .modules import regular_bimodule
    from .presentation import serialize
    from .textio import bimodule_text, module_text

    out = Path(args.directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def put(fname, text):
        (out / fname).write_text(text, encoding="utf-8")
        written.append(fname)

    for key in sorted(corpus.PRESENTATIONS):
        put(f"{key}.alg", serialize(corpus.algebra(key).presentation))
    for (i, j), V in sorted(corpus.gp_modules().items()):
        put(f"{corpus.gp_name(i, j)}.mod", module_text(V, corpus.gp_name(i, j)))
    put("S3.mod", module_text(corpus.local_simple(), "S3"))
    for key in ("dual-numbers", "nakayama"):
        A = corpus.algebra(key)
        put(f"{key}-id.bimod", bimodule_text(regular_bimodule(A), "Id"))
        for level in (1, 2):
            put(f"{key}-omega{level}.bimod", bimodule_text(bimodule_syzygy(A, level), f"Omega{level}"))
    return {"directory": str(out), "files": sorted(written)}, EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gpdef", description="Finite-dimensional quotient path algebras, their modules and deformations.")
    nouns = p.add_subparsers(dest="noun", required=True, parser_class=_Parser)

    alg = nouns.add_parser("algebra", help="algebra-level checks")
    alg_verbs = alg.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    chk = alg_verbs.add_parser("check", help="realize an algebra and certify its basic properties")
    chk.add_argument("file")
    chk.add_argument("--name", help="algebra to check (default: the last one defined)")
    chk.add_argument("--bound", type=int, default=8, help="resolution length for the Gorenstein test")
    chk.add_argument("--samples", type=int, default=2000, help="random triples for the associativity check")
    chk.set_defaults(func=cmd_algebra_check)

    mod = nouns.add_parser("module", help="module computations")
    mod.add_argument("file")
    mod.add_argument("--module", help="module or string to use (default: the last one defined)")
    mod_verbs = mod.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    mod_verbs.add_parser("info")
    mod_verbs.add_parser("syzygy").add_argument("--n", type=int, default=1)
    mod_verbs.add_parser("gproj").add_argument("--bound", type=int, default=None)
    mod_verbs.add_parser("stable-end")
    ext = mod_verbs.add_parser("ext")
    ext.add_argument("--other", default=None, help="second argument of Ext (default: the module itself)")
    ext.add_argument("--i", type=int, default=1)
    mod_verbs.add_parser("tangent")
    mod_verbs.add_parser("udr").add_argument("--max-order", type=int, default=4)
    mod.set_defaults(func=cmd_module)

    eq = nouns.add_parser("equiv", help="equivalence condition suite for bimodule pairs")
    eq_verbs = eq.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    ec = eq_verbs.add_parser("check")
    ec.add_argument("file_x", metavar="FILEX")
    ec.add_argument("file_y", metavar="FILEY")
    ec.add_argument("--level", type=int, required=True)
    ec.add_argument("--workers", type=int, default=1)
    ec.set_defaults(func=cmd_equiv_check)

    ex = nouns.add_parser("examples", help="built-in example corpus")
    ex_verbs = ex.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    run = ex_verbs.add_parser("run")
    sel = run.add_mutually_exclusive_group(required=True)
    sel.add_argument("--id", action="append", help="corpus id (repeatable)")
    sel.add_argument("--all", action="store_true")
    run.add_argument("--workers", type=int, default=4)
    run.set_defaults(func=cmd_examples_run)
    ex_verbs.add_parser("list").set_defaults(func=cmd_examples_list)
    exp = ex_verbs.add_parser("export")
    exp.add_argument("directory")
    exp.set_defaults(func=cmd_examples_export)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        doc, code = args.func(args)
    except InputError as exc:
        _emit(_error_doc(exc), out)
        return EXIT_INPUT
    except GpdefError as exc:
        # preconditions and guards: the input is outside what the command handles
        _emit(_error_doc(exc), out)
        return EXIT_INPUT
    _emit(doc, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
