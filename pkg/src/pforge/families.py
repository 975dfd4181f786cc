"""Polynomial curve families: the built-in catalog (MNT k=3/4/6, the k=10
family, BN k=12), the family-condition verifier, f = 4q - t**2
classification, the feasibility analyzer, and the k=10 discriminant filter.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .curve import CurveRecord, RecordStatus
from .intpoly import IntPoly, classify_square_part, cyclotomic, divides, parse_poly
from .numtheory import (
    euler_phi,
    integer_sqrt,
    is_perfect_square,
    is_probable_prime,
    squarefree_decompose,
)

FACTOR_SEARCH_CAP = 10**6


class FamilyClassification(enum.Enum):
    QUADRATIC_SQUAREFREE = "QUADRATIC_SQUAREFREE"
    LINEAR_TIMES_SQUARE = "LINEAR_TIMES_SQUARE"
    SQUARE_TIMES_QUADRATIC = "SQUARE_TIMES_QUADRATIC"
    INFEASIBLE_SIEGEL = "INFEASIBLE_SIEGEL"


class Verdict(enum.Enum):
    FAMILY_BY_THM2 = "FAMILY_BY_THM2"
    FAMILY_BY_PROP_SQUARE = "FAMILY_BY_PROP_SQUARE"
    NO_FAMILY = "NO_FAMILY"
    UNKNOWN_NEEDS_SOLUTION = "UNKNOWN_NEEDS_SOLUTION"


@dataclass(frozen=True)
class FamilyDescriptor:
    name: str
    k: int
    t: IntPoly
    n: IntPoly
    q: IntPoly
    f: IntPoly
    classification: FamilyClassification
    fixed_d: int | None = None


@dataclass(frozen=True)
class FeasibilityReport:
    degree_check: bool
    balance_check: bool
    leading_coeff_check: bool
    f_classification: FamilyClassification
    verdict: Verdict


class FilterDecision(NamedTuple):
    accepted: bool
    reason: str | None


def compute_f(t: IntPoly, q: IntPoly) -> IntPoly:
    """f = 4q - t**2; identically equal to 4n - (t-2)**2 when n = q+1-t."""
    return 4 * q - t * t


def _divisors_of(m: int) -> list[int] | None:
    """All positive divisors, or None when m does not factor completely."""
    from .numtheory import factorize

    fac = factorize(abs(m), FACTOR_SEARCH_CAP)
    if not fac.complete:
        return None
    divs = [1]
    for p, e in fac.factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def _rational_root_exists(p: IntPoly) -> bool | None:
    """Rational root test on a primitive polynomial; None when the divisor
    enumeration is infeasible."""
    if p.coefficient(0) == 0:
        return True
    num_divs = _divisors_of(p.coefficient(0))
    den_divs = _divisors_of(p.leading_coefficient)
    if num_divs is None or den_divs is None:
        return None
    for s in den_divs:
        for r in num_divs:
            for root_num in (r, -r):
                # p(root_num / s) = 0 iff sum a_i root_num^i s^(deg-i) = 0
                acc = 0
                for i in range(p.degree, -1, -1):
                    acc = acc * root_num + p.coefficient(i) * s ** (p.degree - i)
                if acc == 0:
                    return True
    return False


def _quadratic_factor_exists(p: IntPoly) -> bool | None:
    """Search for a degree-2 factor of a primitive polynomial by bounded
    coefficient enumeration (Mignotte-style bound on the middle term)."""
    lead_divs = _divisors_of(p.leading_coefficient)
    const_divs = _divisors_of(p.coefficient(0))
    if lead_divs is None or const_divs is None:
        return None
    norm2 = math.isqrt(sum(c * c for c in p.coeffs)) + 1
    v_bound = 2 * norm2
    if len(lead_divs) * len(const_divs) * (2 * v_bound + 1) > FACTOR_SEARCH_CAP:
        return None
    for u in lead_divs:
        for w_abs in const_divs:
            for w in (w_abs, -w_abs):
                for v in range(-v_bound, v_bound + 1):
                    g = IntPoly.from_coeffs([w, v, u])
                    if divides(g, p).divides:
                        return True
    return False


def is_irreducible_over_q(p: IntPoly) -> bool | None:
    """Irreducibility over the rationals.

    Complete for degree <= 5 (a factorization there forces a factor of
    degree <= 2).  Beyond that only reducibility can be certified, and
    None means undecided.
    """
    prim = p.primitive_part()
    if prim.degree < 1:
        return False
    if prim.degree == 1:
        return True
    if prim.degree == 2:
        a2, a1, a0 = prim.coefficient(2), prim.coefficient(1), prim.coefficient(0)
        return not is_perfect_square(a1 * a1 - 4 * a2 * a0)
    root = _rational_root_exists(prim)
    if root:
        return False
    quad = _quadratic_factor_exists(prim)
    if quad:
        return False
    if root is None or quad is None:
        return None
    return True if prim.degree <= 5 else None


def classify_f(f: IntPoly) -> tuple[FamilyClassification, IntPoly, IntPoly, int]:
    """(classification, g, h, content) with f = content * g**2 * h."""
    g, h, content = classify_square_part(f)
    if g.degree < 1:
        # f squarefree up to its integer content
        if h.degree >= 3:
            return FamilyClassification.INFEASIBLE_SIEGEL, g, h, content
        if h.degree == 2:
            return FamilyClassification.QUADRATIC_SQUAREFREE, g, h, content
        return FamilyClassification.LINEAR_TIMES_SQUARE, g, h, content
    if h.degree <= 1:
        return FamilyClassification.LINEAR_TIMES_SQUARE, g, h, content
    if h.degree == 2:
        return FamilyClassification.SQUARE_TIMES_QUADRATIC, g, h, content
    return FamilyClassification.INFEASIBLE_SIEGEL, g, h, content


def _fixed_d_from_square_form(h: IntPoly, content: int) -> int | None:
    """For f = (Ax + D) g**2, the square-free part of the constant D > 0."""
    d_const = content * h.coefficient(0)
    if d_const <= 0:
        return None
    squarefree, _, complete = squarefree_decompose(d_const)
    return squarefree if complete else None


def verify_family(
    t: IntPoly, n: IntPoly, q: IntPoly, k: int, name: str = "custom"
) -> FamilyDescriptor | list[str]:
    """Check the family conditions: n = q + 1 - t, irreducibility of n and
    q, and n | Phi_k(t - 1) over Q.  Returns the descriptor, or the list
    of violated conditions.  Existence of infinitely many CM solutions is
    not decided here; it is reported through f's classification."""
    if k < 1:
        raise ValueError(f"embedding degree must be positive, got {k}")
    if t.is_zero or n.is_zero or q.is_zero:
        raise ValueError("family polynomials must be nonzero")
    violations = []
    if n != q + 1 - t:
        violations.append("condition 1: n(x) != q(x) + 1 - t(x)")
    for label, poly in (("n(x)", n), ("q(x)", q)):
        irr = is_irreducible_over_q(poly)
        if irr is False:
            violations.append(f"condition 2: {label} is reducible")
        elif irr is None:
            violations.append(f"condition 2: irreducibility of {label} undecided")
    target = cyclotomic(k).compose(t - 1)
    if not divides(n, target).divides:
        violations.append("condition 3: n(x) does not divide Phi_k(t(x) - 1)")
    if violations:
        return violations
    f = compute_f(t, q)
    assert f == 4 * n - (t - 2) ** 2
    classification, _, h, content = classify_f(f)
    fixed_d = None
    if classification is FamilyClassification.LINEAR_TIMES_SQUARE:
        fixed_d = _fixed_d_from_square_form(h, content)
    return FamilyDescriptor(
        name=name, k=k, t=t, n=n, q=q, f=f, classification=classification, fixed_d=fixed_d
    )


_CATALOG_SPEC = [
    # name, k, t, n, q
    ("mnt3+", 3, "-1+6x", "12x^2-6x+1", "12x^2-1"),
    ("mnt3-", 3, "-1-6x", "12x^2+6x+1", "12x^2-1"),
    ("mnt4a", 4, "-x", "x^2+2x+2", "x^2+x+1"),
    ("mnt4b", 4, "x+1", "x^2+1", "x^2+x+1"),
    ("mnt6+", 6, "1+2x", "4x^2-2x+1", "4x^2+1"),
    ("mnt6-", 6, "1-2x", "4x^2+2x+1", "4x^2+1"),
    ("freeman10", 10, "10x^2+5x+3", "25x^4+25x^3+15x^2+5x+1", "25x^4+25x^3+25x^2+10x+3"),
    ("bn12", 12, "6x^2+1", "36x^4+36x^3+18x^2+6x+1", "36x^4+36x^3+24x^2+6x+1"),
]


@lru_cache(maxsize=1)
def _catalog() -> tuple[FamilyDescriptor, ...]:
    out = []
    for name, k, t_text, n_text, q_text in _CATALOG_SPEC:
        desc = verify_family(parse_poly(t_text), parse_poly(n_text), parse_poly(q_text), k, name)
        if isinstance(desc, list):
            raise AssertionError(f"catalog family {name} failed verification: {desc}")
        out.append(desc)
    return tuple(out)


def builtin_catalog() -> list[FamilyDescriptor]:
    """All built-in families; every entry has passed verify_family."""
    return list(_catalog())


def family_by_name(name: str) -> FamilyDescriptor:
    for desc in _catalog():
        if desc.name == name:
            return desc
    known = ", ".join(d.name for d in _catalog())
    raise KeyError(f"unknown family {name!r} (known: {known})")


def analyze_feasibility(t: IntPoly, n: IntPoly, k: int) -> FeasibilityReport:
    """Structural feasibility of a candidate (t, n) for embedding degree k:
    degree multiplicity, the half-degree balance, the leading-coefficient
    relation, and the classification-driven verdict."""
    if n.is_zero:
        raise ValueError("n(x) must be nonzero")
    q = n + t - 1
    f = compute_f(t, q)
    phi = euler_phi(k)
    degree_check = n.degree >= 1 and n.degree % phi == 0
    balance_check = 2 * t.degree == n.degree and n.degree == q.degree
    lead_t = t.leading_coefficient
    leading_coeff_check = (
        lead_t * lead_t % 4 == 0
        and n.leading_coefficient == lead_t * lead_t // 4
        and q.leading_coefficient == lead_t * lead_t // 4
    )
    if f.is_zero:
        raise ValueError("degenerate candidate: 4q - t^2 = 0")
    classification, _, h, content = classify_f(f)
    if classification is FamilyClassification.INFEASIBLE_SIEGEL:
        verdict = Verdict.NO_FAMILY
    elif classification is FamilyClassification.LINEAR_TIMES_SQUARE:
        # f = (Ax + D) g^2 needs D > 0 for the parametric solutions
        d_const = content * h.coefficient(0)
        verdict = (
            Verdict.FAMILY_BY_PROP_SQUARE if d_const > 0 else Verdict.UNKNOWN_NEEDS_SOLUTION
        )
    else:
        verdict = Verdict.UNKNOWN_NEEDS_SOLUTION
    return FeasibilityReport(
        degree_check=degree_check,
        balance_check=balance_check,
        leading_coeff_check=leading_coeff_check,
        f_classification=classification,
        verdict=verdict,
    )


def filter_discriminant_k10(d_value: int) -> FilterDecision:
    """Cheap k=10 discriminant sieve: D = 43 or 67 mod 120, coprime to 15,
    and 15D square-free (unverifiable square-freeness rejects)."""
    if d_value < 1:
        return FilterDecision(False, "D must be positive")
    if d_value % 120 not in (43, 67):
        return FilterDecision(False, f"D mod 120 = {d_value % 120}, not 43 or 67")
    if math.gcd(d_value, 15) != 1:
        return FilterDecision(False, "gcd(D, 15) > 1")
    squarefree, square, complete = squarefree_decompose(15 * d_value)
    if not complete:
        return FilterDecision(False, "square-freeness of 15D could not be verified")
    if square != 1:
        return FilterDecision(False, "15D is not square-free")
    return FilterDecision(True, None)


def instantiate(
    family: FamilyDescriptor, x0: int, d_value: int | None = None
) -> CurveRecord:
    """Evaluate the family at x0 and gate on primality and the CM equation.

    Returns a PRIME_OK record, or a REJECTED one naming the first failed
    check.  Exactness of the embedding degree is confirmed downstream by
    the curve verifier."""
    if d_value is None:
        d_value = family.fixed_d
    q_v = family.q.evaluate(x0)
    n_v = family.n.evaluate(x0)
    t_v = family.t.evaluate(x0)
    record = CurveRecord(k=family.k, q=q_v, n=n_v, t=t_v, d=d_value, x0=x0)
    assert n_v == q_v + 1 - t_v
    f_v = 4 * q_v - t_v * t_v
    if f_v <= 0:
        return record.rejected("Hasse bound violated: 4q - t^2 <= 0")
    if not is_probable_prime(q_v):
        return record.rejected(f"q({x0}) is not prime")
    if not is_probable_prime(n_v):
        return record.rejected(f"n({x0}) is not prime")
    if q_v == n_v:
        return record.rejected("degenerate: q(x0) == n(x0)")
    if math.gcd(t_v, q_v) != 1:
        return record.rejected("curve not ordinary: gcd(t, q) > 1")
    if d_value is not None:
        quot, rem = divmod(f_v, d_value)
        if rem != 0:
            return record.rejected(f"CM equation: {d_value} does not divide f({x0})")
        _, exact = integer_sqrt(quot)
        if not exact:
            return record.rejected(f"CM equation: f({x0}) / D is not a perfect square")
    return record.with_status(RecordStatus.PRIME_OK)
