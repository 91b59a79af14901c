"""Exact arithmetic in F_p and F_{p^d} = F_p[t]/(P), and polynomials over them.

Elements of F_{p^d} are residue classes represented by coefficient tuples
(low degree first, entries reduced into [0, p)).  The canonical order of
field elements is lexicographic on that coefficient sequence; it induces the
canonical order of polynomials and, downstream, of matrices and group
elements.  Everything here is immutable and safe to share between workers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

from .errors import (
    DivisionByZero,
    FieldMismatch,
    InvariantViolation,
    ModulusNotMonic,
    ModulusReducible,
    NotMonic,
    NotPrime,
    NotSquarefree,
    TooLarge,
)

# Characteristic bound: products of two residues must stay exact machine ints.
PRIME_BOUND = 1 << 15
# Square roots are found by exhaustion up to this field size.
SQRT_EXHAUSTIVE_BOUND = 1 << 10


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def split_prime_power(q: int) -> tuple[int, int]:
    """Write q = p^d with p prime, or raise NotPrime."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    d = 0
    m = q
    while m % p == 0:
        m //= p
        d += 1
    if m != 1:
        raise NotPrime(f"{q} is not a prime power")
    return p, d


# ---------------------------------------------------------------------------
# low-level polynomial arithmetic over F_p on int tuples (used to implement
# extension-field element arithmetic; the generic Polynomial class below works
# over any constructed field)

def _ip_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _ip_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> tuple[int, ...]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce mod the monic modulus
    dm = len(mod) - 1
    for k in range(len(prod) - 1, dm - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for j in range(dm):
                prod[k - dm + j] = (prod[k - dm + j] - c * mod[j]) % p
    prod = prod[:dm]
    prod += [0] * (dm - len(prod))
    return tuple(prod)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldDescriptor:
    """A finite field F_p (d = 1) or F_p[t]/(modulus) (d > 1).

    Two descriptors are equal iff (characteristic, degree, modulus) agree.
    """

    characteristic: int
    extension_degree: int = 1
    modulus: Optional[tuple[int, ...]] = None  # monic, low degree first, d > 1 only

    def __post_init__(self):
        p, d = self.characteristic, self.extension_degree
        if not _is_prime(p):
            raise NotPrime(f"characteristic {p} is not prime")
        if p >= PRIME_BOUND:
            raise TooLarge(f"characteristic {p} exceeds the exact-arithmetic bound {PRIME_BOUND}")
        if d < 1:
            raise ValueError("extension degree must be >= 1")
        if d == 1:
            if self.modulus is not None:
                raise ValueError("prime fields carry no modulus")
            return
        if self.modulus is None:
            raise ValueError("extension fields require a modulus")
        mod = tuple(c % p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != d + 1:
            raise ValueError("modulus degree must equal the extension degree")
        if mod[-1] != 1:
            raise ModulusNotMonic(f"modulus {list(mod)} is not monic")
        prime = FieldDescriptor(p)
        f = Polynomial(prime, tuple(prime.element(c) for c in mod))
        if not is_irreducible(f):
            raise ModulusReducible(f"modulus {list(mod)} factors over F_{p}")

    @property
    def order(self) -> int:
        return self.characteristic ** self.extension_degree

    @property
    def is_prime_field(self) -> bool:
        return self.extension_degree == 1

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.extension_degree)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.extension_degree - 1))

    def generator(self) -> "FieldElement":
        """The residue of t (d > 1) or 1 (d = 1)."""
        if self.extension_degree == 1:
            return self.one()
        return FieldElement(self, (0, 1) + (0,) * (self.extension_degree - 2))

    def element(self, value: Union[int, Sequence[int], "FieldElement"]) -> "FieldElement":
        """Coerce an int (a constant) or a coefficient sequence into the field."""
        p, d = self.characteristic, self.extension_degree
        if isinstance(value, FieldElement):
            if value.owner != self:
                raise FieldMismatch("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % p,) + (0,) * (d - 1))
        coeffs = [c % p for c in value]
        if len(coeffs) > d:
            raise ValueError(f"too many coefficients for degree-{d} extension")
        coeffs += [0] * (d - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def element_at(self, index: int) -> "FieldElement":
        """The element at the given position in canonical order."""
        p, d = self.characteristic, self.extension_degree
        digits = []
        for i in range(d - 1, -1, -1):
            digits.append((index // p**i) % p)
        return FieldElement(self, tuple(digits))

    def elements(self) -> Iterator["FieldElement"]:
        """All field elements in canonical order."""
        for index in range(self.order):
            yield self.element_at(index)

    def element_from_json(self, obj) -> "FieldElement":
        if self.extension_degree == 1:
            if not isinstance(obj, int):
                raise ValueError("prime-field elements encode as a single integer")
            return self.element(obj)
        if not isinstance(obj, list) or len(obj) != self.extension_degree:
            raise ValueError(f"elements of F_{self.order} encode as a list of {self.extension_degree} integers")
        return self.element(obj)

    def to_json(self) -> dict:
        out = {"characteristic": self.characteristic, "extension_degree": self.extension_degree}
        if self.modulus is not None:
            out["modulus"] = list(self.modulus)
        return out

    @staticmethod
    def from_json(obj: dict) -> "FieldDescriptor":
        for key in ("characteristic", "extension_degree"):
            if key not in obj:
                raise ValueError(f"field object is missing key '{key}'")
        modulus = obj.get("modulus")
        return FieldDescriptor(
            obj["characteristic"],
            obj["extension_degree"],
            tuple(modulus) if modulus is not None else None,
        )

    def __str__(self):
        return f"F_{self.order}"


class FieldElement:
    """An element of a constructed field; immutable, hashable, totally ordered."""

    __slots__ = ("owner", "coefficients", "_hash")

    def __init__(self, owner: FieldDescriptor, coefficients: tuple[int, ...]):
        self.owner = owner
        self.coefficients = coefficients
        self._hash = hash((owner, coefficients))

    def _check(self, other) -> "FieldElement":
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected a field element, got {type(other).__name__}")
        if other.owner != self.owner:
            raise FieldMismatch(f"cannot mix elements of {self.owner} and {other.owner}")
        return other

    @property
    def index(self) -> int:
        """Position in the canonical element order (c0 is the most significant digit)."""
        p = self.owner.characteristic
        v = 0
        for c in self.coefficients:
            v = v * p + c
        return v

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def __add__(self, other):
        other = self._check(other)
        p = self.owner.characteristic
        return FieldElement(self.owner, tuple((a + b) % p for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other):
        other = self._check(other)
        p = self.owner.characteristic
        return FieldElement(self.owner, tuple((a - b) % p for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self):
        p = self.owner.characteristic
        return FieldElement(self.owner, tuple((-a) % p for a in self.coefficients))

    def __mul__(self, other):
        other = self._check(other)
        F = self.owner
        p = F.characteristic
        if F.extension_degree == 1:
            return FieldElement(F, ((self.coefficients[0] * other.coefficients[0]) % p,))
        return FieldElement(F, _ip_mulmod(self.coefficients, other.coefficients, F.modulus, p))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero(f"inverse of zero in {self.owner}")
        F = self.owner
        if F.extension_degree == 1:
            p = F.characteristic
            return FieldElement(F, (pow(self.coefficients[0], p - 2, p),))
        return self ** (F.order - 2)

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.owner.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self) -> "FieldElement":
        """The p-power map a -> a^p."""
        return self ** self.owner.characteristic

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and other.owner == self.owner
            and other.coefficients == self.coefficients
        )

    def __lt__(self, other):
        other = self._check(other)
        return self.coefficients < other.coefficients

    def __le__(self, other):
        other = self._check(other)
        return self.coefficients <= other.coefficients

    def __hash__(self):
        return self._hash

    def to_json(self):
        if self.owner.extension_degree == 1:
            return self.coefficients[0]
        return list(self.coefficients)

    def __repr__(self):
        if self.owner.extension_degree == 1:
            return str(self.coefficients[0])
        terms = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else str(c) + "*"
                terms.append(f"{head}t" if i == 1 else f"{head}t^{i}")
        return " + ".join(terms) if terms else "0"


class Polynomial:
    """A univariate polynomial over a constructed field, low degree first."""

    __slots__ = ("base", "coefficients", "_hash")

    def __init__(self, base: FieldDescriptor, coefficients: Sequence[FieldElement]):
        coeffs = list(coefficients)
        for c in coeffs:
            if c.owner != base:
                raise FieldMismatch("polynomial coefficients must live in the base field")
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.base = base
        self.coefficients = tuple(coeffs)
        self._hash = hash((base, self.coefficients))

    @staticmethod
    def from_ints(base: FieldDescriptor, ints: Sequence[int]) -> "Polynomial":
        return Polynomial(base, [base.element(c) for c in ints])

    @staticmethod
    def x(base: FieldDescriptor) -> "Polynomial":
        return Polynomial.from_ints(base, [0, 1])

    @staticmethod
    def one(base: FieldDescriptor) -> "Polynomial":
        return Polynomial.from_ints(base, [1])

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_monic(self) -> bool:
        return bool(self.coefficients) and self.coefficients[-1] == self.base.one()

    def leading(self) -> FieldElement:
        if self.is_zero():
            raise ValueError("the zero polynomial has no leading coefficient")
        return self.coefficients[-1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        inv = self.leading().inverse()
        return Polynomial(self.base, [c * inv for c in self.coefficients])

    def coefficient(self, i: int) -> FieldElement:
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return self.base.zero()

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        return Polynomial(self.base, [self.coefficient(i) + other.coefficient(i) for i in range(n)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        return Polynomial(self.base, [self.coefficient(i) - other.coefficient(i) for i in range(n)])

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.base, [-c for c in self.coefficients])

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial(self.base, [])
        zero = self.base.zero()
        out = [zero] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] = out[i + j] + a * b
        return Polynomial(self.base, out)

    def scaled(self, c: FieldElement) -> "Polynomial":
        return Polynomial(self.base, [a * c for a in self.coefficients])

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coefficients)
        dq = len(rem) - len(other.coefficients)
        if dq < 0:
            return Polynomial(self.base, []), self
        zero = self.base.zero()
        quot = [zero] * (dq + 1)
        lead_inv = other.leading().inverse()
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * lead_inv
            quot[k] = c
            if not c.is_zero():
                for j, b in enumerate(other.coefficients):
                    rem[k + j] = rem[k + j] - c * b
        return Polynomial(self.base, quot), Polynomial(self.base, rem[: other.degree])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def derivative(self) -> "Polynomial":
        out = []
        for i in range(1, len(self.coefficients)):
            out.append(self.base.element(i) * self.coefficients[i])
        return Polynomial(self.base, out)

    def evaluate(self, point: FieldElement) -> FieldElement:
        acc = self.base.zero()
        for c in reversed(self.coefficients):
            acc = acc * point + c
        return acc

    def sort_key(self):
        """Canonical order: by degree, then lexicographic on the coefficient sequence."""
        return (self.degree, tuple(c.coefficients for c in self.coefficients))

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and other.base == self.base
            and other.coefficients == self.coefficients
        )

    def __lt__(self, other: "Polynomial"):
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return self._hash

    def to_json(self):
        return [c.to_json() for c in self.coefficients]

    @staticmethod
    def from_json(base: FieldDescriptor, obj) -> "Polynomial":
        if not isinstance(obj, list):
            raise ValueError("a polynomial encodes as a list of coefficients")
        return Polynomial(base, [base.element_from_json(c) for c in obj])

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if c.is_zero():
                continue
            cs = repr(c)
            if self.base.extension_degree > 1 and ("+" in cs or i > 0 and cs != "1"):
                cs = f"({cs})"
            if i == 0:
                parts.append(cs)
            elif i == 1:
                parts.append("t" if cs == "1" else f"{cs}*t")
            else:
                parts.append(f"t^{i}" if cs == "1" else f"{cs}*t^{i}")
        return " + ".join(parts)


def make_field(p: int, modulus: Union[None, Polynomial, Sequence[int]] = None) -> FieldDescriptor:
    """Construct F_p, or F_p[t]/(modulus) for a monic irreducible modulus."""
    if modulus is None:
        return FieldDescriptor(p)
    if isinstance(modulus, Polynomial):
        coeffs = tuple(c.coefficients[0] for c in modulus.coefficients)
    else:
        coeffs = tuple(int(c) for c in modulus)
    if not coeffs or (_is_prime(p) and coeffs[-1] % p != 1):
        raise ModulusNotMonic(f"modulus {list(coeffs)} is not monic")
    return FieldDescriptor(p, len(coeffs) - 1, coeffs)


@lru_cache(maxsize=None)
def canonical_modulus(p: int, d: int) -> tuple[int, ...]:
    """The lexicographically least monic irreducible of degree d over F_p."""
    prime = make_field(p)
    for tail in itertools.product(range(p), repeat=d):
        candidate = Polynomial.from_ints(prime, list(tail) + [1])
        if is_irreducible(candidate):
            return tuple(list(tail) + [1])
    raise InvariantViolation("no irreducible polynomial found")  # pragma: no cover


def field_of_order(q: int) -> FieldDescriptor:
    """F_q for a prime power q, with the canonical modulus when q is not prime."""
    p, d = split_prime_power(q)
    if d == 1:
        return make_field(p)
    return make_field(p, canonical_modulus(p, d))


def monic_polynomials(base: FieldDescriptor, degree: int) -> Iterator[Polynomial]:
    """All monic polynomials of the given degree, in canonical order."""
    one = base.one()
    for tail in itertools.product(range(base.order), repeat=degree):
        yield Polynomial(base, [base.element_at(i) for i in tail] + [one])


@lru_cache(maxsize=None)
def monic_irreducibles(base: FieldDescriptor, degree: int) -> tuple[Polynomial, ...]:
    """All monic irreducible polynomials of the given degree, in canonical order."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if degree == 1:
        return tuple(monic_polynomials(base, 1))
    out = []
    for f in monic_polynomials(base, degree):
        for k in range(1, degree // 2 + 1):
            if any((f % g).is_zero() for g in monic_irreducibles(base, k)):
                break
        else:
            out.append(f)
    return tuple(out)


def is_irreducible(f: Polynomial) -> bool:
    """Whether a monic polynomial of degree >= 1 has no factor of degree in [1, deg/2]."""
    if f.degree < 1:
        raise ValueError("irreducibility is defined for degree >= 1")
    if not f.is_monic():
        raise NotMonic(f"{f!r} is not monic")
    if f.degree == 1:
        return True
    for k in range(1, f.degree // 2 + 1):
        for g in monic_irreducibles(f.base, k):
            if (f % g).is_zero():
                return False
    return True


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd; gcd(f, 0) = monic f."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_lcm(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.is_zero() or g.is_zero():
        return Polynomial(f.base, [])
    return ((f * g) // poly_gcd(f, g)).monic()


def factor_squarefree(f: Polynomial) -> list[Polynomial]:
    """Factor a monic squarefree polynomial into irreducibles, canonically ordered.

    Trial division over enumerated irreducibles; fine at desk scale.
    """
    if f.degree < 1:
        raise ValueError("factorization is defined for degree >= 1")
    if not f.is_monic():
        raise NotMonic(f"{f!r} is not monic")
    if poly_gcd(f, f.derivative()).degree != 0:
        raise NotSquarefree(f"{f!r} has a repeated factor")
    factors = []
    rem = f
    k = 1
    while 2 * k <= rem.degree:
        for g in monic_irreducibles(f.base, k):
            if (f % g).is_zero():
                factors.append(g)
                rem = rem // g
        k += 1
    if rem.degree >= 1:
        factors.append(rem)
    factors.sort(key=Polynomial.sort_key)
    prod = Polynomial.one(f.base)
    for g in factors:
        prod = prod * g
    if prod != f:
        raise InvariantViolation("factorization does not multiply back")  # pragma: no cover
    return factors


def _factor_completely(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Full factorization with multiplicities of a monic polynomial (internal)."""
    if not f.is_monic():
        raise NotMonic(f"{f!r} is not monic")
    out = []
    rem = f
    k = 1
    while rem.degree >= 1:
        if 2 * k > rem.degree:
            out.append((rem, 1))
            break
        for g in monic_irreducibles(f.base, k):
            if rem.degree < k:
                break
            e = 0
            while True:
                q, r = divmod(rem, g)
                if not r.is_zero():
                    break
                rem = q
                e += 1
            if e:
                out.append((g, e))
        k += 1
    out.sort(key=lambda pe: pe[0].sort_key())
    return out


def square_root(a: FieldElement) -> Optional[FieldElement]:
    """A square root of a, or None when a is not a square.  0 maps to 0."""
    F = a.owner
    q = F.order
    if a.is_zero():
        return a
    if F.characteristic == 2:
        return a ** (q // 2)  # squaring is bijective in characteristic 2
    if q <= SQRT_EXHAUSTIVE_BOUND:
        for r in F.elements():
            if r * r == a:
                return r
        return None
    return _tonelli_shanks(a)


def _tonelli_shanks(a: FieldElement) -> Optional[FieldElement]:
    F = a.owner
    q = F.order
    one = F.one()
    if a ** ((q - 1) // 2) != one:
        return None
    s, e = q - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    z = None
    for cand in F.elements():
        if not cand.is_zero() and cand ** ((q - 1) // 2) != one:
            z = cand
            break
    c = z ** s
    r = a ** ((s + 1) // 2)
    t = a ** s
    m = e
    while t != one:
        t2 = t
        i = 0
        while t2 != one:
            t2 = t2 * t2
            i += 1
        b = c ** (1 << (m - i - 1))
        r = r * b
        c = b * b
        t = t * c
        m = i
    return r
