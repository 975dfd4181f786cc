"""Short-Weierstrass arithmetic over prime fields and curve-record
verification: primality, Hasse, ordinarity, the CM equation
D*y**2 = 4q - t**2, exact embedding degree, and probabilistic group-order
confirmation."""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, replace

from .errors import CapacityError, ContractError
from .numtheory import integer_sqrt, is_probable_prime, sqrt_mod_prime

# Affine point: (x, y) with 0 <= x, y < q, or None for the point at infinity.
Point = tuple[int, int] | None
INFINITY: Point = None

Curve = tuple[int, int, int]  # (q, A, B), coefficients taken mod q

RANDOM_POINT_MAX_DRAWS = 10**4


class RecordStatus(str, enum.Enum):
    PENDING = "PENDING"
    PRIME_OK = "PRIME_OK"
    CURVE_VERIFIED = "CURVE_VERIFIED"
    REJECTED = "REJECTED"


class OrderCheck(enum.Enum):
    VERIFIED = "VERIFIED"
    REFUTED = "REFUTED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class CurveRecord:
    """Concrete curve parameters.  a and b keep the sign they were supplied
    with (published parameter sets often use A = -3); arithmetic reduces
    them mod q."""

    k: int
    q: int
    n: int
    t: int
    d: int | None = None
    x0: int | None = None
    a: int | None = None
    b: int | None = None
    status: RecordStatus = RecordStatus.PENDING
    reason: str | None = None

    def rejected(self, reason: str) -> CurveRecord:
        return replace(self, status=RecordStatus.REJECTED, reason=reason)

    def with_status(self, status: RecordStatus) -> CurveRecord:
        return replace(self, status=status, reason=None)


def is_nonsingular(curve: Curve) -> bool:
    q, a, b = curve
    return (4 * a * a * a + 27 * b * b) % q != 0


def is_on_curve(point: Point, curve: Curve) -> bool:
    if point is None:
        return True
    q, a, b = curve
    x, y = point
    return (y * y - (x * x * x + a * x + b)) % q == 0


def _add(p1: Point, p2: Point, curve: Curve) -> Point:
    q, a, _ = curve
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2 and (y1 + y2) % q == 0:
        return INFINITY
    if p1 == p2:
        lam = (3 * x1 * x1 + a) * pow(2 * y1, q - 2, q) % q
    else:
        lam = (y2 - y1) * pow(x2 - x1, q - 2, q) % q
    x3 = (lam * lam - x1 - x2) % q
    y3 = (lam * (x1 - x3) - y1) % q
    return (x3, y3)


def add_points(p1: Point, p2: Point, curve: Curve) -> Point:
    if not is_on_curve(p1, curve) or not is_on_curve(p2, curve):
        raise ContractError("point not on curve")
    return _add(p1, p2, curve)


def negate_point(point: Point, curve: Curve) -> Point:
    if point is None:
        return None
    q = curve[0]
    x, y = point
    return (x, (-y) % q)


def scalar_multiply(point: Point, m: int, curve: Curve) -> Point:
    """[m]P by double-and-add; [0]P is the point at infinity."""
    if m < 0:
        raise ValueError("scalar must be non-negative")
    if not is_on_curve(point, curve):
        raise ContractError(f"point {point} not on curve")
    result: Point = INFINITY
    addend = point
    while m:
        if m & 1:
            result = _add(result, addend, curve)
        addend = _add(addend, addend, curve)
        m >>= 1
    return result


def random_point(curve: Curve, rng: random.Random) -> Point:
    """Uniform-x affine point: sample x, solve for y, retry non-residues."""
    q, a, b = curve
    for _ in range(RANDOM_POINT_MAX_DRAWS):
        x = rng.randrange(q)
        rhs = (x * x * x + a * x + b) % q
        y = sqrt_mod_prime(rhs, q)
        if y is None:
            continue
        if y and rng.getrandbits(1):
            y = q - y
        return (x, y)
    raise CapacityError(f"no curve point found in {RANDOM_POINT_MAX_DRAWS} draws")


def verify_group_order(
    curve: Curve, n: int, trials: int = 5, rng: random.Random | None = None
) -> OrderCheck:
    """Probabilistic but sound order check for prime n.

    Each sampled P != infinity with [n]P = infinity forces n | #E; the
    precondition 4*sqrt(q) < n leaves one multiple of n in the Hasse
    window, so #E = n.  Any [n]P != infinity refutes.
    """
    q = curve[0]
    t = q + 1 - n
    if t * t > 4 * q:
        raise ContractError(f"n = {n} lies outside the Hasse interval of q = {q}")
    if 16 * q >= n * n:
        raise ContractError(f"Hasse window wider than n: 4*sqrt(q) >= {n}")
    if rng is None:
        rng = random.Random(0)
    sampled_affine = False
    for _ in range(trials):
        point = random_point(curve, rng)
        if point is None:
            continue
        sampled_affine = True
        if scalar_multiply(point, n, curve) is not INFINITY:
            return OrderCheck.REFUTED
    return OrderCheck.VERIFIED if sampled_affine else OrderCheck.INCONCLUSIVE


def embedding_degree(q: int, n: int, k_max: int) -> int | None:
    """Smallest k <= k_max with q**k = 1 mod n, or None when it exceeds
    k_max; exact-k claims go through is_exact_embedding_degree."""
    if n < 2 or q % n == 0:
        raise ValueError(f"embedding degree undefined: n = {n} divides q = {q}")
    qpow = q % n
    acc = qpow
    for k in range(1, k_max + 1):
        if acc == 1:
            return k
        acc = acc * qpow % n
    return None


def is_exact_embedding_degree(q: int, n: int, k: int) -> bool:
    """q**k = 1 mod n and q**d != 1 mod n for every proper divisor d of k."""
    if n < 2 or q % n == 0:
        raise ValueError(f"embedding degree undefined: n = {n} divides q = {q}")
    if pow(q, k, n) != 1:
        return False
    return all(pow(q, d, n) != 1 for d in range(1, k) if k % d == 0)


def verify_record(
    record: CurveRecord, trials: int = 5, rng: random.Random | None = None
) -> CurveRecord:
    """Run every verifiable check and return the record with final status.

    Reaches CURVE_VERIFIED when curve coefficients are present and the
    group order confirms; PRIME_OK when all coefficient-free checks pass.
    """
    q, n, t = record.q, record.n, record.t
    if n != q + 1 - t:
        return record.rejected(f"n != q + 1 - t (t = {t})")
    if not is_probable_prime(q):
        return record.rejected("q is not prime")
    if not is_probable_prime(n):
        return record.rejected("n is not prime")
    if q == n:
        return record.rejected("degenerate: q == n")
    f = 4 * q - t * t
    if f <= 0:
        return record.rejected("Hasse bound violated")
    if math.gcd(t, q) != 1:
        return record.rejected("curve not ordinary: gcd(t, q) > 1")
    if record.d is not None:
        quot, rem = divmod(f, record.d)
        if rem != 0:
            return record.rejected(f"CM equation: {record.d} does not divide 4q - t^2")
        _, exact = integer_sqrt(quot)
        if not exact:
            return record.rejected("CM equation: (4q - t^2) / D is not a square")
    if not is_exact_embedding_degree(q, n, record.k):
        return record.rejected(f"embedding degree is not exactly {record.k}")
    if record.a is None or record.b is None:
        return record.with_status(RecordStatus.PRIME_OK)
    curve = (q, record.a % q, record.b % q)
    if not is_nonsingular(curve):
        return record.rejected("singular curve: 4A^3 + 27B^2 = 0 mod q")
    check = verify_group_order(curve, n, trials=trials, rng=rng)
    if check is not OrderCheck.VERIFIED:
        return record.rejected(f"group order check: {check.value}")
    return record.with_status(RecordStatus.CURVE_VERIFIED)
