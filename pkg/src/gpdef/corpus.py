"""Built-in example corpus: presentations, string words and expected facts.

Every expected fact carries a provenance tag: ``PAPER`` for published values
under test, ``TRIVIAL`` for textbook facts, ``DERIVED`` for values frozen
from a named oracle computation of this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import Algebra, build_path_algebra
from .presentation import parse_presentation, parse_string_word

# Arrows compose right to left: in ``a*b`` the arrow ``b`` is applied first.

SIX_VERTEX_TEXT = """\
# Six-vertex Gorenstein algebra of injective dimension 2 (alias: Lambda).
algebra Lambda0 {
  field Q;
  vertices v0, v1, v2, v0', v1', v2';
  arrows α₀: v0' -> v0, α₁: v1' -> v1, α₂: v2' -> v2,
         β₀: v0 -> v0', β₁: v1 -> v1', β₂: v2 -> v2',
         γ₀: v0 -> v2, γ₁: v1 -> v0, γ₂: v2 -> v1;
  relations β₀*α₀; β₁*α₁; β₂*α₂;
            γ₀*α₀; γ₁*α₁; γ₂*α₂;
            β₂*γ₀; β₀*γ₁; β₁*γ₂;
            α₀*β₀ - γ₁*γ₂*γ₀*γ₁*γ₂*γ₀;
            α₁*β₁ - γ₂*γ₀*γ₁*γ₂*γ₀*γ₁;
            α₂*β₂ - γ₀*γ₁*γ₂*γ₀*γ₁*γ₂;
}
"""

_CYCLE_UP = "*".join(["γ₁*γ₂*γ₀"] * 6)
_CYCLE_MID = "*".join(["γ₂*γ₀*γ₁"] * 6)
_CYCLE_LOW = "*".join(["γ₀*γ₁*γ₂"] * 6)

NAKAYAMA_TEXT = f"""\
# Self-injective Nakayama algebra on a 3-cycle, all paths of length 18 killed.
algebra Gamma {{
  field Q;
  vertices v0, v1, v2;
  arrows γ₀: v0 -> v2, γ₁: v1 -> v0, γ₂: v2 -> v1;
  relations {_CYCLE_UP}; {_CYCLE_MID}; {_CYCLE_LOW};
}}
"""

CM_FREE_TEXT = """\
# Non-Gorenstein algebra with no non-projective Cohen-Macaulay modules.
algebra LambdaCM {
  field Q;
  vertices v1, v2;
  arrows α: v1 -> v1, β: v1 -> v2;
  relations α*α; β*α;
}
"""

LOCAL_SQUARE_ZERO_TEXT = """\
algebra GammaLocal {
  field Q;
  vertices v3;
  arrows γ: v3 -> v3;
  relations γ*γ;
}
"""

DUAL_NUMBERS_TEXT = """\
algebra DualNumbers {
  field Q;
  vertices v;
  arrows x: v -> v;
  relations x*x;
}
"""

PRESENTATIONS = {
    "six-vertex": SIX_VERTEX_TEXT,
    "nakayama": NAKAYAMA_TEXT,
    "cm-free": CM_FREE_TEXT,
    "local-square-zero": LOCAL_SQUARE_ZERO_TEXT,
    "dual-numbers": DUAL_NUMBERS_TEXT,
}

ALIASES = {"Lambda": "Lambda0"}

_SUB = "₀₁₂"


@lru_cache(maxsize=None)
def algebra(key: str) -> Algebra:
    """Realized corpus algebra (cached, algebras are immutable)."""
    return build_path_algebra(parse_presentation(PRESENTATIONS[key]))


def _letter(kind: str, i: int) -> str:
    return f"{kind}{_SUB[i % 3]}"


def gp_word(i: int, j: int) -> str:
    """Word of the string module ``V_{i,j}`` (i mod 3, 0 <= j <= 4)."""
    if not 0 <= j <= 4:
        raise ValueError("j must lie in 0..4")
    tail = [_letter("γ", i + 2), _letter("γ", i), _letter("γ", i + 1), _letter("γ", i + 2), _letter("γ", i)]
    return " * ".join([_letter("α", i + 1) + "^-1"] + tail[: 5 - j])


def gp_name(i: int, j: int) -> str:
    return f"V{i % 3}{j}"


def gp_module(i: int, j: int):
    return _gp_module_cached(i % 3, j, algebra("six-vertex"))


@lru_cache(maxsize=None)
def _gp_module_cached(i, j, A):
    from .modules import string_module

    w = parse_string_word(f"string {gp_name(i, j)} over {A.name} = {gp_word(i, j)};", A.presentation)
    return string_module(w, A)


def gp_modules() -> dict:
    return {(i, j): gp_module(i, j) for i in range(3) for j in range(5)}


# Nakayama-algebra modules used by the level-2 and transport checks: the
# uniserial modules generated at v0 of lengths 1, 2, 4 and 10.
NAKAYAMA_WORDS = {
    "S_v0": "v0",
    "U2": "γ₀",
    "U4": "γ₁ * γ₂ * γ₀",
    "U10": "γ₀ * γ₁ * γ₂ * γ₀ * γ₁ * γ₂ * γ₀ * γ₁ * γ₂",
}


def nakayama_module(name: str):
    from .modules import string_module

    A = algebra("nakayama")
    w = parse_string_word(f"string {name} over {A.name} = {NAKAYAMA_WORDS[name]};", A.presentation)
    return string_module(w, A)


def local_simple():
    from .modules import simple_module

    return simple_module(algebra("local-square-zero"), 0)


def dual_numbers_simple():
    from .modules import simple_module

    return simple_module(algebra("dual-numbers"), 0)


@dataclass
class ExpectedFact:
    claim: str
    expected: object
    provenance: str
    oracle: str | None = None


@dataclass
class CorpusEntry:
    id: str
    description: str
    algebras: tuple
    facts: list = field(default_factory=list)


def _syzygy_targets():
    out = {}
    for i in range(3):
        out[gp_name(i, 0)] = gp_name(i + 2, 4)
        out[gp_name(i, 1)] = gp_name(i + 1, 3)
        out[gp_name(i, 2)] = gp_name(i, 2)
    return out


ENTRIES = [
    CorpusEntry(
        "ex36-lambda-cmfree",
        "two-vertex algebra: not Gorenstein, no non-projective totally reflexive witness",
        ("cm-free",),
        [
            ExpectedFact("gorenstein_verdict_bound8", "inconclusive", "PAPER"),
            ExpectedFact("cm_free_on_witnesses", True, "PAPER"),
        ],
    ),
    CorpusEntry(
        "ex36-gamma-s3",
        "local radical-square-zero algebra and its simple module",
        ("local-square-zero",),
        [
            ExpectedFact("self_injective", True, "PAPER"),
            ExpectedFact("nakayama", True, "PAPER"),
            ExpectedFact("loewy_length", 2, "PAPER"),
            ExpectedFact("stable_end_dim", 1, "PAPER"),
            ExpectedFact("ext1_dim", 1, "PAPER"),
            ExpectedFact("udr", "consistent with k[t]/(t^2)", "PAPER"),
            ExpectedFact("obstructed_order", 3, "PAPER"),
        ],
    ),
    CorpusEntry(
        "fig1-gproj-list",
        "the fifteen string modules are indecomposable, non-projective, totally reflexive, stable End k",
        ("six-vertex",),
        [
            ExpectedFact("algebra_dim", 30, "DERIVED", "build_path_algebra"),
            ExpectedFact("injective_dimension", 2, "PAPER"),
            ExpectedFact("count", 15, "PAPER"),
            ExpectedFact("all_totally_reflexive", True, "PAPER"),
            ExpectedFact("all_indecomposable", True, "PAPER"),
            ExpectedFact("all_non_projective", True, "PAPER"),
            ExpectedFact("stable_end_dims", [1] * 15, "PAPER"),
            ExpectedFact("nakayama_dim", 54, "DERIVED", "build_path_algebra"),
            ExpectedFact("nakayama_injective_dimension", 0, "DERIVED", "is_gorenstein"),
        ],
    ),
    CorpusEntry(
        "fig1-syzygy-perm",
        "syzygies permute the string modules",
        ("six-vertex",),
        [ExpectedFact("syzygy_of", _syzygy_targets(), "PAPER")],
    ),
    CorpusEntry(
        "fig1-ext-table",
        "self-extension dimensions of the string modules",
        ("six-vertex",),
        [
            ExpectedFact("ext1", {gp_name(i, j): int(j == 3) for i in range(3) for j in range(5)}, "PAPER"),
            ExpectedFact("ext1_oracles_agree", True, "DERIVED", "ext_dim_via_complex, tangent_dimension"),
        ],
    ),
    CorpusEntry(
        "fig1-v03-obstruction",
        "the first-order lift of V03 does not extend to order 3",
        ("six-vertex",),
        [
            ExpectedFact("obstructed_order", 3, "PAPER"),
            ExpectedFact("udr", "consistent with k[t]/(t^2)", "PAPER"),
            ExpectedFact("v_i2_obstructed_order", 3, "DERIVED", "extend_lift"),
        ],
    ),
    CorpusEntry(
        "self-equiv-l0",
        "identity bimodule pair at level 0, and a corrupted pair",
        ("dual-numbers", "nakayama"),
        [
            ExpectedFact("overall", True, "TRIVIAL"),
            ExpectedFact("corrupted_failing", ["cond_i", "cond_iii", "cond_iv"], "TRIVIAL"),
        ],
    ),
    CorpusEntry(
        "self-equiv-l1",
        "bimodule syzygy paired with the regular bimodule at level 1",
        ("dual-numbers", "nakayama"),
        [ExpectedFact("overall", True, "DERIVED", "check_sing_equiv_level")],
    ),
    CorpusEntry(
        "self-equiv-l2",
        "bimodule syzygy paired with the regular bimodule at level 2",
        ("dual-numbers", "nakayama"),
        [ExpectedFact("overall", True, "DERIVED", "check_sing_equiv_level")],
    ),
    CorpusEntry(
        "lemma34-order2",
        "bimodule syzygy tensor a first-order lift over k[t]/(t^2)",
        ("dual-numbers",),
        [ExpectedFact("holds", True, "DERIVED", "verify_lifted_syzygy_tensor")],
    ),
]

ENTRY_IDS = tuple(sorted(e.id for e in ENTRIES))


def entry(eid: str) -> CorpusEntry:
    for e in ENTRIES:
        if e.id == eid:
            return e
    raise KeyError(eid)
