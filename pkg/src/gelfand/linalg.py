"""Exact square-matrix algebra over any constructed field.

Provides kernels, inverses, minimal polynomials, the invariant-factor
conjugacy invariant, and an explicit conjugator between conjugate matrices.
The conjugator is built by reducing both matrices to a shared canonical form
(block-diagonal companion matrices of prime powers) with explicit bases; the
invariant-factor chain is read off the same block data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import FieldMismatch, InvariantViolation, SingularInput
from .fields import (
    FieldDescriptor,
    FieldElement,
    Polynomial,
    _factor_completely,
    poly_gcd,
    poly_lcm,
)

Vector = tuple[FieldElement, ...]


class MatrixOverField:
    """An m-by-m matrix over a constructed field; immutable and hashable."""

    __slots__ = ("base", "size", "entries", "_hash")

    def __init__(self, base: FieldDescriptor, entries: Sequence[Sequence[FieldElement]]):
        rows = tuple(tuple(row) for row in entries)
        m = len(rows)
        if m == 0 or any(len(row) != m for row in rows):
            raise ValueError("matrix must be square and nonempty")
        for row in rows:
            for e in row:
                if e.owner != base:
                    raise FieldMismatch("entry belongs to a different field")
        self.base = base
        self.size = m
        self.entries = rows
        self._hash = hash((base, rows))

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rows(base: FieldDescriptor, rows: Sequence[Sequence]) -> "MatrixOverField":
        return MatrixOverField(base, [[base.element(v) for v in row] for row in rows])

    @staticmethod
    def identity(base: FieldDescriptor, m: int) -> "MatrixOverField":
        one, zero = base.one(), base.zero()
        return MatrixOverField(base, [[one if i == j else zero for j in range(m)] for i in range(m)])

    @staticmethod
    def zeros(base: FieldDescriptor, m: int) -> "MatrixOverField":
        zero = base.zero()
        return MatrixOverField(base, [[zero] * m for _ in range(m)])

    @staticmethod
    def diagonal(base: FieldDescriptor, values: Sequence) -> "MatrixOverField":
        elems = [base.element(v) for v in values]
        zero = base.zero()
        m = len(elems)
        return MatrixOverField(base, [[elems[i] if i == j else zero for j in range(m)] for i in range(m)])

    @staticmethod
    def block_diagonal(blocks: Sequence["MatrixOverField"]) -> "MatrixOverField":
        base = blocks[0].base
        m = sum(b.size for b in blocks)
        zero = base.zero()
        rows = [[zero] * m for _ in range(m)]
        offset = 0
        for b in blocks:
            for i in range(b.size):
                for j in range(b.size):
                    rows[offset + i][offset + j] = b.entries[i][j]
            offset += b.size
        return MatrixOverField(base, rows)

    @staticmethod
    def companion(f: Polynomial) -> "MatrixOverField":
        """Companion matrix of a monic polynomial of degree >= 1."""
        if f.degree < 1 or not f.is_monic():
            raise ValueError("companion matrix needs a monic polynomial of degree >= 1")
        base = f.base
        m = f.degree
        zero, one = base.zero(), base.one()
        rows = [[zero] * m for _ in range(m)]
        for i in range(1, m):
            rows[i][i - 1] = one
        for i in range(m):
            rows[i][m - 1] = -f.coefficient(i)
        return MatrixOverField(base, rows)

    @staticmethod
    def from_columns(base: FieldDescriptor, columns: Sequence[Vector]) -> "MatrixOverField":
        m = len(columns)
        return MatrixOverField(base, [[columns[j][i] for j in range(m)] for i in range(m)])

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "MatrixOverField"):
        if not isinstance(other, MatrixOverField):
            raise TypeError(f"expected a matrix, got {type(other).__name__}")
        if other.base != self.base or other.size != self.size:
            raise FieldMismatch("matrices have different sizes or fields")

    def __mul__(self, other: "MatrixOverField") -> "MatrixOverField":
        self._check(other)
        m = self.size
        cols = tuple(zip(*other.entries))
        zero = self.base.zero()
        out = []
        for row in self.entries:
            out_row = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return MatrixOverField(self.base, out)

    def __add__(self, other: "MatrixOverField") -> "MatrixOverField":
        self._check(other)
        return MatrixOverField(
            self.base,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
        )

    def __sub__(self, other: "MatrixOverField") -> "MatrixOverField":
        self._check(other)
        return MatrixOverField(
            self.base,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
        )

    def __neg__(self) -> "MatrixOverField":
        return MatrixOverField(self.base, [[-a for a in row] for row in self.entries])

    def scalar_mul(self, c: FieldElement) -> "MatrixOverField":
        return MatrixOverField(self.base, [[a * c for a in row] for row in self.entries])

    def __pow__(self, k: int) -> "MatrixOverField":
        if k < 0:
            return self.inverse() ** (-k)
        result = MatrixOverField.identity(self.base, self.size)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def transpose(self) -> "MatrixOverField":
        return MatrixOverField(self.base, list(zip(*self.entries)))

    def inverse(self) -> "MatrixOverField":
        m = self.size
        zero, one = self.base.zero(), self.base.one()
        aug = [list(row) + [one if i == j else zero for j in range(m)] for i, row in enumerate(self.entries)]
        for col in range(m):
            pivot = next((r for r in range(col, m) if not aug[r][col].is_zero()), None)
            if pivot is None:
                raise SingularInput("matrix is singular")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [v * inv for v in aug[col]]
            for r in range(m):
                if r != col and not aug[r][col].is_zero():
                    f = aug[r][col]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
        return MatrixOverField(self.base, [row[m:] for row in aug])

    def is_invertible(self) -> bool:
        return rank(self) == self.size

    def apply(self, v: Vector) -> Vector:
        """Matrix-vector product M v."""
        zero = self.base.zero()
        out = []
        for row in self.entries:
            acc = zero
            for a, x in zip(row, v):
                acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    # -- identity, encoding ------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, MatrixOverField)
            and other.base == self.base
            and other.entries == self.entries
        )

    def __hash__(self):
        return self._hash

    def key(self) -> int:
        """Row-major base-q integer; numeric order equals entry-lexicographic order."""
        q = self.base.order
        v = 0
        for row in self.entries:
            for e in row:
                v = v * q + e.index
        return v

    def int_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(e.index for e in row) for row in self.entries)

    @staticmethod
    def from_int_rows(base: FieldDescriptor, rows: Sequence[Sequence[int]]) -> "MatrixOverField":
        return MatrixOverField(base, [[base.element_at(i) for i in row] for row in rows])

    def to_json(self) -> dict:
        return {
            "field": self.base.to_json(),
            "size": self.size,
            "entries": [[e.to_json() for e in row] for row in self.entries],
        }

    @staticmethod
    def from_json(obj: dict) -> "MatrixOverField":
        for key in ("field", "size", "entries"):
            if key not in obj:
                raise ValueError(f"matrix object is missing key '{key}'")
        base = FieldDescriptor.from_json(obj["field"])
        entries = obj["entries"]
        if not isinstance(entries, list) or len(entries) != obj["size"]:
            raise ValueError("key 'entries' must hold 'size' rows")
        rows = []
        for row in entries:
            if not isinstance(row, list) or len(row) != obj["size"]:
                raise ValueError("key 'entries' must hold square row-major data")
            rows.append([base.element_from_json(e) for e in row])
        return MatrixOverField(base, rows)

    def __repr__(self):
        body = "; ".join(" ".join(repr(e) for e in row) for row in self.entries)
        return f"[{body}] over {self.base}"


@dataclass(frozen=True)
class ConjugacyInvariant:
    """The invariant-factor chain f_1 | f_2 | ... | f_k classifying conjugacy."""

    base: FieldDescriptor
    invariant_factors: tuple[Polynomial, ...]

    def __post_init__(self):
        chain = self.invariant_factors
        if not chain:
            raise ValueError("invariant factor chain cannot be empty")
        for f, g in zip(chain, chain[1:]):
            if not (g % f).is_zero():
                raise InvariantViolation("invariant factors must form a divisibility chain")

    @property
    def total_degree(self) -> int:
        return sum(f.degree for f in self.invariant_factors)

    def to_json(self):
        return [f.to_json() for f in self.invariant_factors]

    def __repr__(self):
        return "[" + ", ".join(repr(f) for f in self.invariant_factors) + "]"


# ---------------------------------------------------------------------------
# elimination helpers


def _rref(rows: list[list[FieldElement]]) -> tuple[list[list[FieldElement]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column list)."""
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(nrows):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rank(M: MatrixOverField) -> int:
    _, pivots = _rref([list(row) for row in M.entries])
    return len(pivots)


def kernel(M: MatrixOverField) -> tuple[Vector, ...]:
    """Echelon-canonical basis of {v : Mv = 0} (pivots normalized to 1)."""
    m = M.size
    R, pivots = _rref([list(row) for row in M.entries])
    pivot_set = set(pivots)
    free = [j for j in range(m) if j not in pivot_set]
    zero, one = M.base.zero(), M.base.one()
    basis = []
    for f in free:
        v = [zero] * m
        v[f] = one
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][f]
        basis.append(tuple(v))
    return tuple(basis)


def solve_linear(M: MatrixOverField, rhs: Vector) -> Optional[Vector]:
    """One solution of M x = rhs, or None when inconsistent."""
    m = M.size
    aug = [list(row) + [rhs[i]] for i, row in enumerate(M.entries)]
    R, pivots = _rref(aug)
    for i in range(len(pivots), m):
        if not R[i][m].is_zero():
            return None
    if pivots and pivots[-1] == m:
        return None
    zero = M.base.zero()
    x = [zero] * m
    for r, pc in enumerate(pivots):
        x[pc] = R[r][m]
    return tuple(x)


class _Span:
    """Incrementally maintained echelon basis of a subspace."""

    def __init__(self, base: FieldDescriptor, dim: int):
        self.base = base
        self.dim = dim
        self.rows: dict[int, list[FieldElement]] = {}  # pivot index -> normalized vector

    def _reduce(self, v: Sequence[FieldElement]) -> list[FieldElement]:
        v = list(v)
        for pivot in sorted(self.rows):
            c = v[pivot]
            if not c.is_zero():
                row = self.rows[pivot]
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def contains(self, v: Sequence[FieldElement]) -> bool:
        return all(c.is_zero() for c in self._reduce(v))

    def add(self, v: Sequence[FieldElement]) -> bool:
        """Add v to the span; returns True when it enlarged the subspace."""
        red = self._reduce(v)
        pivot = next((i for i, c in enumerate(red) if not c.is_zero()), None)
        if pivot is None:
            return False
        inv = red[pivot].inverse()
        self.rows[pivot] = [c * inv for c in red]
        return True

    def extend(self, vectors: Iterable[Sequence[FieldElement]]):
        for v in vectors:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self.rows)


# ---------------------------------------------------------------------------
# minimal polynomial, canonical form, conjugacy


def poly_at_matrix(f: Polynomial, M: MatrixOverField) -> MatrixOverField:
    """Evaluate f at M by Horner's rule."""
    acc = MatrixOverField.zeros(M.base, M.size)
    identity = MatrixOverField.identity(M.base, M.size)
    for c in reversed(f.coefficients):
        acc = acc * M + identity.scalar_mul(c)
    return acc


def _vector_annihilator(M: MatrixOverField, v: Vector) -> Polynomial:
    """Least-degree monic f with f(M) v = 0, via the Krylov sequence of v."""
    base = M.base
    span = _Span(base, M.size)
    krylov = []
    w = v
    while span.add(w):
        krylov.append(w)
        w = M.apply(w)
    # w is now dependent on krylov; solve for the combination
    k = len(krylov)
    zero = base.zero()
    aug_rows = []
    for i in range(M.size):
        aug_rows.append([krylov[j][i] for j in range(k)] + [w[i]])
    R, pivots = _rref(aug_rows)
    coeffs = [zero] * k
    for r, pc in enumerate(pivots):
        coeffs[pc] = R[r][k]
    return Polynomial(base, [-c for c in coeffs] + [base.one()])


def minimal_polynomial(M: MatrixOverField) -> Polynomial:
    """Monic least-degree annihilating polynomial (lcm of basis-vector annihilators)."""
    base = M.base
    zero, one = base.zero(), base.one()
    result = Polynomial.one(base)
    for i in range(M.size):
        if result.degree == M.size:
            break
        e = tuple(one if j == i else zero for j in range(M.size))
        result = poly_lcm(result, _vector_annihilator(M, e))
    return result


def is_semisimple(M: MatrixOverField) -> bool:
    """True iff the minimal polynomial is squarefree."""
    mp = minimal_polynomial(M)
    return poly_gcd(mp, mp.derivative()).degree == 0


def _cyclic_chains(M: MatrixOverField) -> list[tuple[Polynomial, int, Vector]]:
    """Decompose the t-module of M into cyclic summands F[t]/(P^j).

    Returns (P, j, head) triples, canonically sorted; the cyclic basis of each
    summand is head, M head, ..., M^(deg(P)*j - 1) head.
    """
    base = M.base
    m = M.size
    chains: list[tuple[Polynomial, int, Vector]] = []
    for P, e in _factor_completely(minimal_polynomial(M)):
        N = poly_at_matrix(P, M)
        npow = MatrixOverField.identity(base, m)
        kernels = []  # K_0 .. K_e as vector lists
        for _ in range(e + 1):
            kernels.append(kernel(npow))
            npow = npow * N
        r = P.degree
        spanned = _Span(base, m)
        for j in range(e, 0, -1):
            reject = _Span(base, m)
            reject.extend(kernels[j - 1])
            reject.extend(N.apply(v) for v in kernels[min(j + 1, e)])
            for piv in spanned.rows:
                reject.add(spanned.rows[piv])
            for v in kernels[j]:
                if reject.contains(v):
                    continue
                chains.append((P, j, v))
                w = v
                cyclic = []
                for _ in range(r * j):
                    cyclic.append(w)
                    w = M.apply(w)
                for u in cyclic:
                    spanned.add(u)
                    reject.add(u)
        expected = len(kernels[e])
        if spanned.rank != expected:
            raise InvariantViolation("primary cyclic decomposition lost dimensions")  # pragma: no cover
    chains.sort(key=lambda c: (c[0].sort_key(), -c[1]))
    return chains


def _chain_basis(M: MatrixOverField, chains) -> MatrixOverField:
    columns = []
    for P, j, head in chains:
        w = head
        for _ in range(P.degree * j):
            columns.append(w)
            w = M.apply(w)
    return MatrixOverField.from_columns(M.base, columns)


def invariant_factors(M: MatrixOverField) -> ConjugacyInvariant:
    """The invariant-factor chain of M; equal for M, N iff they are conjugate."""
    chains = _cyclic_chains(M)
    by_factor: dict[Polynomial, list[int]] = {}
    for P, j, _ in chains:
        by_factor.setdefault(P, []).append(j)
    depth = max(len(v) for v in by_factor.values())
    factors = []
    for s in range(depth - 1, -1, -1):  # s = 0 holds the largest exponents
        f = Polynomial.one(M.base)
        for P in by_factor:
            exps = by_factor[P]
            if s < len(exps):
                for _ in range(exps[s]):
                    f = f * P
        factors.append(f)
    inv = ConjugacyInvariant(M.base, tuple(factors))
    if inv.total_degree != M.size:
        raise InvariantViolation("invariant factor degrees do not sum to the size")  # pragma: no cover
    return inv


def find_conjugator(x: MatrixOverField, y: MatrixOverField) -> Optional[MatrixOverField]:
    """An invertible k with k x k^-1 = y, or None when x and y are not conjugate.

    Both matrices are reduced to the shared canonical block form with explicit
    bases; the conjugator is the composition, verified before returning.
    """
    if x.base != y.base or x.size != y.size:
        raise FieldMismatch("matrices must share size and field")
    cx = _cyclic_chains(x)
    cy = _cyclic_chains(y)
    if [(P, j) for P, j, _ in cx] != [(P, j) for P, j, _ in cy]:
        return None
    qx = _chain_basis(x, cx)
    qy = _chain_basis(y, cy)
    k = qy * qx.inverse()
    if k * x * k.inverse() != y:
        raise InvariantViolation("canonical-form conjugator failed verification")  # pragma: no cover
    return k


def random_matrix(base: FieldDescriptor, m: int, rng: random.Random) -> MatrixOverField:
    q = base.order
    return MatrixOverField(
        base, [[base.element_at(rng.randrange(q)) for _ in range(m)] for _ in range(m)]
    )


def random_invertible(base: FieldDescriptor, m: int, rng: random.Random) -> MatrixOverField:
    """Rejection-sample an invertible matrix; rng makes runs reproducible."""
    while True:
        M = random_matrix(base, m, rng)
        if M.is_invertible():
            return M
