"""Approximability classification with re-checkable certificates.

Two entry points: a maximal language given by one generating operation f
(``Inv(f)``), and a homogeneous language (one containing every
permutation relation).  A third, :func:`detect_tractable`, looks for a
polynomial-time solver for an arbitrary language.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

from .algebra.binary import in_class_a, iterate
from .algebra.genmax import DEFAULT_WITNESS_BUDGET, find_genmax_witness
from .algebra.groups import distinct_affine_ops, enumerate_abelian_groups
from .algebra.named import discriminator, named_ops
from .algebra.ops import (
    is_commutative,
    is_constant,
    is_generalised_max,
    is_idempotent,
    is_majority,
    is_maltsev,
    is_polymorphism_lang,
    is_two_semilattice,
)
from .core import ConstraintLanguage, Domain, Operation, Relation
from .errors import BudgetExceeded, DomainMismatch, InternalError, InvalidCertificate, NotApplicable

CONJECTURE_NOTE = "conditional on Szczepara's conjecture"


class Bucket(str, Enum):
    PO = "PO"
    APX = "APX-complete"
    POLY_APX = "poly-APX-complete"
    NZ_NP_HARD = "NZ-NP-hard"
    FEAS_NP_HARD = "FEAS-NP-hard"
    UNKNOWN = "UNKNOWN"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Claim:
    """One checkable fact: ``check(subject) == expected``."""

    check: str
    subject: str
    expected: object = True


@dataclass
class ClassificationReport:
    bucket: Bucket
    branch: str
    witnesses: dict = field(default_factory=dict)  # name -> Operation
    claims: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    node: str | None = None
    signature: dict = field(default_factory=dict)

    @property
    def certificate(self) -> dict:
        return {"branch": self.branch, "witnesses": self.witnesses, "claims": self.claims}


# ---------------------------------------------------------------------------
# certificate checking
# ---------------------------------------------------------------------------
def a_star(f: Operation):
    """Least a such that ``f(a, b) = a`` for some ``b > a``, or None."""
    for a in f.domain:
        if any(f(a, b) == a for b in f.domain if b > a):
            return a
    return None


def _constant_value(f):
    return f.values[0] if is_constant(f) else None


def _is_affine(f):
    if f.arity != 3:
        return False
    return any(f == a for a, _ in distinct_affine_ops(f.domain))


_PREDICATES = {
    "is_constant": is_constant,
    "is_majority": is_majority,
    "is_commutative": is_commutative,
    "is_idempotent": is_idempotent,
    "is_two_semilattice": is_two_semilattice,
    "is_generalised_max": is_generalised_max,
    "is_maltsev": is_maltsev,
    "is_affine": _is_affine,
    "in_class_a": lambda f: in_class_a(f) is not None,
    "constant_value": _constant_value,
    "a_star": a_star,
}


def verify_certificate(report: ClassificationReport, language: ConstraintLanguage | None = None) -> bool:
    """Re-run every claim.  Polymorphism claims need ``language``.

    Raises InvalidCertificate naming the first claim that fails; returns True
    otherwise.  UNKNOWN reports carry no obligations.
    """
    w = report.witnesses
    for c in report.claims:
        if c.check == "iterate_of":
            base, n = c.expected
            got = iterate(w[base], n) == w[c.subject]
        elif c.check == "polymorphism":
            if language is None:
                raise InvalidCertificate("a language is needed to check polymorphism claims")
            f = w.get(c.subject)
            if f is None:
                f = named_ops(language.domain)[c.subject]
            got = is_polymorphism_lang(f, language) == c.expected
        elif c.check == "permutations_present":
            if language is None:
                raise InvalidCertificate("a language is needed to check homogeneity")
            got = not missing_permutations(language)
        elif c.check == "zero_in_domain":
            dom = language.domain if language is not None else next(iter(w.values())).domain
            got = (0 in dom) == c.expected
        else:
            got = _PREDICATES[c.check](w[c.subject]) == c.expected
        if not got:
            raise InvalidCertificate(f"claim {c.check}({c.subject}) = {c.expected!r} does not hold")
    if report.bucket is not Bucket.UNKNOWN and not report.claims:
        raise InvalidCertificate("a definite bucket needs at least one claim")
    return True


# ---------------------------------------------------------------------------
# maximal languages Inv(f)
# ---------------------------------------------------------------------------
def classify_maximal(
    f: Operation,
    D: Domain | None = None,
    assume_szczepara: bool = False,
    assume_maximal: bool = False,
    witness_budget: int = DEFAULT_WITNESS_BUDGET,
) -> ClassificationReport:
    """Bucket of ``Inv(f)`` for f a constant, majority, affine or binary
    commutative idempotent operation, ``Inv(f)`` assumed maximal.

    Anything else raises NotApplicable, unless ``assume_maximal`` is set,
    in which case the remaining case (feasibility NP-hard) is reported.
    """
    D = f.domain if D is None else D
    if D != f.domain:
        raise DomainMismatch(f"{f.label} is defined on {f.domain!r}, not {D!r}")
    W = {"f": f}

    if is_constant(f):
        d = f.values[0]
        claims = [Claim("is_constant", "f"), Claim("constant_value", "f", d)]
        if d == D.max:
            return ClassificationReport(
                Bucket.PO, "constant max(D): every variable at max(D) is optimal", W, claims
            )
        if d == 0:
            return ClassificationReport(
                Bucket.NZ_NP_HARD, "constant 0: a solution of non-zero measure is NP-hard to find", W, claims
            )
        return ClassificationReport(Bucket.APX, f"constant {d} (neither 0 nor max(D))", W, claims)

    if is_majority(f):
        claims = [Claim("is_majority", "f"), Claim("zero_in_domain", "f", 0 in D)]
        if 0 in D:
            return ClassificationReport(Bucket.POLY_APX, "majority with 0 in D", W, claims)
        return ClassificationReport(Bucket.APX, "majority with 0 not in D", W, claims)

    if f.arity == 3:
        for G in enumerate_abelian_groups(D):
            if f == G.affine_op():
                claims = [Claim("is_affine", "f"), Claim("is_maltsev", "f")]
                return ClassificationReport(
                    Bucket.APX, f"affine x - y + z over {G.name}", W, claims
                )

    if f.arity == 2 and is_commutative(f) and is_idempotent(f):
        return _classify_binary(f, D, assume_szczepara)

    if assume_maximal:
        return ClassificationReport(
            Bucket.FEAS_NP_HARD,
            "none of the operation families applies; maximality asserted by the caller",
            W,
            [Claim("is_constant", "f", False), Claim("is_majority", "f", False), Claim("is_affine", "f", False)],
            notes=["relies on the caller's assertion that Inv(f) is maximal"],
        )
    raise NotApplicable(
        f"{f.label} is not constant, majority, affine or binary commutative idempotent"
    )


def _classify_binary(f: Operation, D: Domain, assume_szczepara: bool) -> ClassificationReport:
    W = {"f": f}
    base = [Claim("is_commutative", "f"), Claim("is_idempotent", "f")]
    if in_class_a(f) is not None:
        return ClassificationReport(
            Bucket.APX, "binary operation q(x + y) over a prime field (expresses x - y + z)", W,
            base + [Claim("in_class_a", "f")],
        )
    notes = []
    if D.size > 4:
        if not assume_szczepara:
            return ClassificationReport(
                Bucket.UNKNOWN,
                "binary commutative idempotent operation on more than 4 elements",
                W,
                [],
                notes=["the binary case is settled for |D| > 4 only under Szczepara's conjecture"],
            )
        notes.append(CONJECTURE_NOTE)
    a = a_star(f)
    if a is not None:
        claims = base + [Claim("a_star", "f", a)]
        if a == 0:
            return ClassificationReport(Bucket.POLY_APX, "binary, a* = 0", W, claims, notes)
        return ClassificationReport(Bucket.APX, f"binary, a* = {a} > 0", W, claims, notes)
    claims = base + [Claim("a_star", "f", None)]
    for n in range(1, D.size + 1):
        g = iterate(f, n)
        if is_generalised_max(g):
            W["g"] = g
            claims.append(Claim("is_generalised_max", "g"))
            if n > 1:
                claims.append(Claim("iterate_of", "g", ("f", n)))
            return ClassificationReport(
                Bucket.PO, f"binary without a*: iterate f_{n} is generalised max", W, claims, notes
            )
    return ClassificationReport(
        Bucket.UNKNOWN,
        "binary without a*, but no iterate f_n (n <= |D|) is generalised max",
        W,
        [],
        notes + ["expected Inv(f) to be generalised max-closed; is Inv(f) really maximal?"],
    )


# ---------------------------------------------------------------------------
# homogeneous languages
# ---------------------------------------------------------------------------
def permutation_relations(D: Domain) -> list[Relation]:
    return [Relation(2, zip(D.elements, perm)) for perm in itertools.permutations(D.elements)]


def missing_permutations(language: ConstraintLanguage) -> list[Relation]:
    have = set(language.relations.values())
    return [R for R in permutation_relations(language.domain) if R not in have]


def homogeneous_signature(language: ConstraintLanguage) -> dict[str, bool]:
    """Which catalog operations (and any affine operation) preserve the language."""
    D = language.domain
    sig = {name: is_polymorphism_lang(op, language) for name, op in named_ops(D).items()}
    sig["affine"] = any(is_polymorphism_lang(a, language) for a, _ in distinct_affine_ops(D))
    return sig


def _first_l(sig, lo, hi):
    for i in range(lo, hi + 1):
        if sig.get(f"l{i + 1}"):
            return i
    return None


def lattice_node(sig: dict[str, bool], n: int) -> tuple[str, Bucket]:
    """Map a polymorphism signature to the relational clone and its bucket."""
    has_r = sig.get(f"r{n}", False)
    zero = sig.get("_zero_in_D", False)
    if sig.get("t"):
        return ("D^1_1" if has_r else "D^0_1"), Bucket.PO
    if sig.get("d"):
        bucket = Bucket.POLY_APX if zero else Bucket.APX
        if has_r:
            if n <= 3:
                # d and r_n together generate t on two and three elements
                raise InternalError("d and r_n preserve the language but t does not")
            j = _first_l(sig, 2, n - 2)
            return (f"D^1_{j}" if j is not None else f"D^1_{n}"), bucket
        j = _first_l(sig, 2, n - 1)
        return (f"D^0_{j}" if j is not None else f"D^0_{n}"), bucket
    if sig.get("s"):
        if has_r:
            if n == 3:
                raise InternalError("s and r_3 preserve the language but t does not")
            return "E^1_1", Bucket.APX
        return "E^0_1", Bucket.APX
    if n == 4 and sig.get("xyz"):
        return "Inv(x+y+z)", Bucket.APX
    if n == 3 and (has_r or sig.get("affine")):
        return "Inv(r_3)", Bucket.APX
    if sig.get("affine"):
        # only Z_2, Z_3 and Z_2 x Z_2 make every permutation affine, all handled above
        raise InternalError("an affine operation preserves the language but matches no lattice node")
    if has_r:
        if n == 2:
            return "Inv(r_2)", Bucket.FEAS_NP_HARD
        j = _first_l(sig, 2, n - 3)
        return (f"E^1_{j}" if j is not None else f"E^1_{n - 2}"), Bucket.FEAS_NP_HARD
    j = _first_l(sig, 2, n - 1)
    return (f"E^0_{j}" if j is not None else f"E^0_{n}"), Bucket.FEAS_NP_HARD


def classify_homogeneous(language: ConstraintLanguage) -> ClassificationReport:
    D = language.domain
    if D.size < 2:
        raise NotApplicable("homogeneous classification needs |D| >= 2")
    missing = missing_permutations(language)
    if missing:
        raise NotApplicable(f"language lacks {len(missing)} permutation relation(s), e.g. {missing[0]!r}")
    sig = homogeneous_signature(language)
    node, bucket = lattice_node({**sig, "_zero_in_D": 0 in D}, D.size)
    ops = named_ops(D)
    claims = [Claim("permutations_present", "language")]
    claims += [Claim("polymorphism", name, sig[name]) for name in ops]
    witnesses = {name: ops[name] for name in ops if sig[name]}
    if bucket in (Bucket.POLY_APX, Bucket.APX) and node.startswith("D"):
        claims.append(Claim("zero_in_domain", "language", 0 in D))
    return ClassificationReport(
        bucket, f"homogeneous language in {node}", witnesses, claims, node=node, signature=sig
    )


# ---------------------------------------------------------------------------
# tractability detection
# ---------------------------------------------------------------------------
class Tractable(str, Enum):
    INJECTIVE = "INJECTIVE"
    GENMAX = "GENMAX"
    AFFINE = "AFFINE"

    def __str__(self):
        return self.value


@dataclass
class TractableCertificate:
    tag: Tractable
    witness: Operation
    group: object = None
    notes: list = field(default_factory=list)


def _all_injective(language) -> bool:
    for R in language:
        if R.arity == 1:
            continue
        if R.arity != 2:
            return False
        if len({t[0] for t in R}) != len(R) or len({t[1] for t in R}) != len(R):
            return False
    return True


def detect_tractable(language: ConstraintLanguage, budget: int = DEFAULT_WITNESS_BUDGET, notes: list | None = None):
    """First of INJECTIVE, GENMAX, AFFINE that applies, or None.

    INJECTIVE needs the discriminator t as a polymorphism and, so that the
    component-propagation solver can run, every relation unary or the
    graph of an injective partial map.  Products of unary relations are
    preserved by t too, which is why the second condition is checked.

    A witness search that runs out of budget is recorded in ``notes`` and
    the search moves on.
    """
    notes = [] if notes is None else notes
    D = language.domain
    if D.size >= 2:
        t = discriminator(D)
        if _all_injective(language) and is_polymorphism_lang(t, language):
            return TractableCertificate(Tractable.INJECTIVE, t, notes=notes)
    try:
        g = find_genmax_witness(language, budget=budget)
    except BudgetExceeded as e:
        notes.append(f"generalised-max search gave up: {e}")
        g = None
    if g is not None:
        return TractableCertificate(Tractable.GENMAX, g, notes=notes)
    for a, G in distinct_affine_ops(D):
        if is_polymorphism_lang(a, language):
            return TractableCertificate(Tractable.AFFINE, a, G, notes=notes)
    return None
