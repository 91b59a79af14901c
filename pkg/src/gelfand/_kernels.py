"""Integer-encoded matrix kernels for the enumeration-heavy group work.

Matrices here are tuples of tuples of element indices in the owning field's
canonical order; a whole matrix folds into one base-q integer key whose
numeric order is the entry-lexicographic order.  Prime fields additionally
get numpy-batched products.  Deterministic throughout.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import TooLarge
from .fields import FieldDescriptor
from .linalg import MatrixOverField

TABLE_BOUND = 1 << 10  # largest field size for which op tables are built
_NP_VISITED_BOUND = 1 << 27  # largest key space backed by a boolean array

IMat = tuple[tuple[int, ...], ...]


class _Tables:
    __slots__ = ("field", "q", "p", "d", "add", "mul", "neg", "inv", "elements", "one")

    def __init__(self, field: FieldDescriptor):
        q = field.order
        if q > TABLE_BOUND:
            raise TooLarge(f"operation tables are limited to fields of size <= {TABLE_BOUND}")
        self.field = field
        self.q = q
        self.p = field.characteristic
        self.d = field.extension_degree
        elems = [field.element_at(i) for i in range(q)]
        self.elements = elems
        if self.d == 1:
            self.add = [[(a + b) % q for b in range(q)] for a in range(q)]
            self.mul = [[(a * b) % q for b in range(q)] for a in range(q)]
            self.neg = [(-a) % q for a in range(q)]
            self.inv = [None] + [pow(a, q - 2, q) for a in range(1, q)]
        else:
            self.add = [[(elems[a] + elems[b]).index for b in range(q)] for a in range(q)]
            self.mul = [[(elems[a] * elems[b]).index for b in range(q)] for a in range(q)]
            self.neg = [(-elems[a]).index for a in range(q)]
            self.inv = [None] + [elems[a].inverse().index for a in range(1, q)]
        self.one = field.one().index


@lru_cache(maxsize=None)
def tables(field: FieldDescriptor) -> _Tables:
    return _Tables(field)


# -- basic imat ops ---------------------------------------------------------


def imat_identity(m: int, t: _Tables) -> IMat:
    return tuple(tuple(t.one if i == j else 0 for j in range(m)) for i in range(m))


def imat_transpose(a: IMat) -> IMat:
    return tuple(zip(*a))


def imat_mul(a: IMat, b: IMat, t: _Tables) -> IMat:
    add, mul = t.add, t.mul
    bt = tuple(zip(*b))
    out = []
    for row in a:
        orow = []
        for col in bt:
            acc = 0
            for x, y in zip(row, col):
                acc = add[acc][mul[x][y]]
            orow.append(acc)
        out.append(tuple(orow))
    return tuple(out)


def imat_neg(a: IMat, t: _Tables) -> IMat:
    neg = t.neg
    return tuple(tuple(neg[x] for x in row) for row in a)


def imat_inverse(a: IMat, t: _Tables) -> Optional[IMat]:
    """Gauss-Jordan inverse, or None when singular."""
    m = len(a)
    add, mul, neg, inv = t.add, t.mul, t.neg, t.inv
    aug = [list(row) + [t.one if i == j else 0 for j in range(m)] for i, row in enumerate(a)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if aug[r][col]), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pinv = inv[aug[col][col]]
        aug[col] = [mul[v][pinv] for v in aug[col]]
        prow = aug[col]
        for r in range(m):
            if r != col and aug[r][col]:
                f = neg[aug[r][col]]
                aug[r] = [add[v][mul[f][w]] for v, w in zip(aug[r], prow)]
    return tuple(tuple(row[m:]) for row in aug)


def vec_dot(u: Sequence[int], v: Sequence[int], t: _Tables) -> int:
    add, mul = t.add, t.mul
    acc = 0
    for x, y in zip(u, v):
        acc = add[acc][mul[x][y]]
    return acc


def vec_mat(u: Sequence[int], a: IMat, t: _Tables) -> tuple[int, ...]:
    """Row vector times matrix."""
    add, mul = t.add, t.mul
    out = []
    for col in zip(*a):
        acc = 0
        for x, y in zip(u, col):
            acc = add[acc][mul[x][y]]
        out.append(acc)
    return tuple(out)


def imat_key(a: IMat, q: int) -> int:
    v = 0
    for row in a:
        for x in row:
            v = v * q + x
    return v


def key_to_imat(key: int, q: int, m: int) -> IMat:
    digits = []
    for _ in range(m * m):
        key, r = divmod(key, q)
        digits.append(r)
    digits.reverse()
    return tuple(tuple(digits[i * m : (i + 1) * m]) for i in range(m))


def imat_from_matrix(M: MatrixOverField) -> IMat:
    return M.int_rows()


def matrix_from_imat(field: FieldDescriptor, a: IMat) -> MatrixOverField:
    elems = tables(field).elements
    return MatrixOverField(field, [[elems[x] for x in row] for row in a])


# -- numpy bridge (prime fields) ---------------------------------------------


def np_powvec(q: int, m: int) -> np.ndarray:
    return q ** np.arange(m * m - 1, -1, -1, dtype=np.int64)


def np_from_imats(imats: Sequence[IMat]) -> np.ndarray:
    return np.array(imats, dtype=np.int64)

def np_keys(arr: np.ndarray, powvec: np.ndarray) -> np.ndarray:
    n, m, _ = arr.shape
    return arr.reshape(n, m * m) @ powvec


def np_decode(keys: np.ndarray, q: int, m: int) -> np.ndarray:
    powvec = np_powvec(q, m)
    return ((keys[:, None] // powvec) % q).reshape(-1, m, m)


# -- span over int vectors ----------------------------------------------------


class IntSpan:
    """Incremental echelon span of int-encoded vectors."""

    __slots__ = ("t", "rows")

    def __init__(self, t: _Tables):
        self.t = t
        self.rows: dict[int, tuple[int, ...]] = {}

    def _reduce(self, v: Sequence[int]) -> list[int]:
        t = self.t
        add, mul, neg = t.add, t.mul, t.neg
        v = list(v)
        for pivot in sorted(self.rows):
            c = v[pivot]
            if c:
                row = self.rows[pivot]
                f = neg[c]
                v = [add[a][mul[f][b]] for a, b in zip(v, row)]
        return v

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self._reduce(v))

    def add_vector(self, v: Sequence[int]) -> bool:
        red = self._reduce(v)
        pivot = next((i for i, c in enumerate(red) if c), None)
        if pivot is None:
            return False
        inv = self.t.inv[red[pivot]]
        mul = self.t.mul
        self.rows[pivot] = tuple(mul[c][inv] for c in red)
        return True


# -- group enumerations -------------------------------------------------------


def gl_order(q: int, m: int) -> int:
    total = 1
    for i in range(m):
        total *= q**m - q**i
    return total


@lru_cache(maxsize=8)
def gl_imats(field: FieldDescriptor, m: int) -> tuple[IMat, ...]:
    """All invertible m-by-m matrices, ascending by key (row-by-row backtracking)."""
    t = tables(field)
    q = t.q
    vectors = [tuple(v) for v in _all_vectors(q, m)]
    out = []
    rows: list[tuple[int, ...]] = []

    def rec(span: IntSpan):
        depth = len(rows)
        if depth == m:
            out.append(tuple(rows))
            return
        for v in vectors:
            if span.contains(v):
                continue
            child = IntSpan(t)
            child.rows = dict(span.rows)
            child.add_vector(v)
            rows.append(v)
            rec(child)
            rows.pop()

    rec(IntSpan(t))
    if gl_order(q, m) != len(out):
        raise TooLarge("GL enumeration does not match the closed-form order")  # pragma: no cover
    return tuple(out)


def _all_vectors(q: int, m: int) -> Iterator[tuple[int, ...]]:
    v = [0] * m
    while True:
        yield tuple(v)
        i = m - 1
        while i >= 0 and v[i] == q - 1:
            v[i] = 0
            i -= 1
        if i < 0:
            return
        v[i] += 1


def _affine_solutions(rows: list[tuple[int, ...]], rhs: list[int], m: int, t: _Tables):
    """All solutions of the linear system rows . x = rhs, or None when inconsistent."""
    add, mul, neg, inv = t.add, t.mul, t.neg, t.inv
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    nrows = len(aug)
    pivots = []
    r = 0
    for c in range(m):
        pivot = next((i for i in range(r, nrows) if aug[i][c]), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pinv = inv[aug[r][c]]
        aug[r] = [mul[v][pinv] for v in aug[r]]
        prow = aug[r]
        for i in range(nrows):
            if i != r and aug[i][c]:
                f = neg[aug[i][c]]
                aug[i] = [add[v][mul[f][w]] for v, w in zip(aug[i], prow)]
        pivots.append(c)
        r += 1
    for i in range(r, nrows):
        if aug[i][m]:
            return None
    particular = [0] * m
    for i, pc in enumerate(pivots):
        particular[pc] = aug[i][m]
    pivot_set = set(pivots)
    basis = []
    for f in range(m):
        if f in pivot_set:
            continue
        v = [0] * m
        v[f] = t.one
        for i, pc in enumerate(pivots):
            v[pc] = neg[aug[i][f]]
        basis.append(v)
    solutions = [tuple(particular)]
    for b in basis:
        solutions = [
            tuple(add[x][mul[lam][y]] for x, y in zip(s, b))
            for s in solutions
            for lam in range(t.q)
        ]
    return solutions


@lru_cache(maxsize=8)
def sp_imats(field: FieldDescriptor, n: int, j_rows: IMat) -> tuple[IMat, ...]:
    """All matrices g with g^T J g = J, ascending by key.

    Built column by column: column j must pair with each earlier column i to
    the value J[i][j], an affine condition solved exactly, so dead branches
    are pruned as soon as the partial form condition fails.
    """
    t = tables(field)
    m = 2 * n
    out = []
    cols: list[tuple[int, ...]] = []
    funcs: list[tuple[int, ...]] = []  # row i = (column i)^T J

    def rec():
        depth = len(cols)
        if depth == m:
            out.append(tuple(zip(*cols)))
            return
        rhs = [j_rows[i][depth] for i in range(depth)]
        sols = _affine_solutions(funcs, rhs, m, t)
        if sols is None:
            return
        for c in sols:
            cols.append(c)
            funcs.append(vec_mat(c, j_rows, t))
            rec()
            cols.pop()
            funcs.pop()

    rec()
    return tuple(sorted(out, key=lambda a: imat_key(a, t.q)))


# -- double coset machinery ---------------------------------------------------


def partition_double_cosets(
    field: FieldDescriptor,
    m: int,
    h_imats: Sequence[IMat],
    gl_keys: Sequence[int],
) -> tuple[list[tuple[int, list[int]]], dict[int, int]]:
    """Partition the group (given by sorted keys) into H x H double cosets.

    Breadth-first orbit expansion under left/right multiplication by every
    element of H.  Seeds are taken in ascending key order, so each seed is the
    lexicographically minimal member of its coset.  Returns ([(rep_key,
    member_keys)], key -> coset id).
    """
    t = tables(field)
    q = t.q
    key_to_cid: dict[int, int] = {}
    cosets: list[tuple[int, list[int]]] = []
    prime = t.d == 1
    if prime:
        h_arr = np_from_imats(h_imats)
        powvec = np_powvec(q, m)
        space = q ** (m * m)
        visited = np.zeros(space, dtype=bool) if space <= _NP_VISITED_BOUND else None
    for seed in gl_keys:
        if seed in key_to_cid:
            continue
        cid = len(cosets)
        if prime:
            members = _bfs_numpy(seed, h_arr, powvec, q, m, visited)
        else:
            members = _bfs_python(seed, h_imats, t, m)
        members.sort()
        for k in members:
            key_to_cid[k] = cid
        cosets.append((seed, members))
    return cosets, key_to_cid


def _bfs_numpy(seed_key, h_arr, powvec, q, m, visited_global) -> list[int]:
    p = q  # prime fields only
    nh = h_arr.shape[0]
    chunk = max(1, (1 << 22) // (nh * m * m))
    seen = visited_global if visited_global is not None else None
    local: Optional[set] = None if seen is not None else set()
    members = [seed_key]
    if seen is not None:
        seen[seed_key] = True
    else:
        local.add(seed_key)
    frontier = np.array([seed_key], dtype=np.int64)
    while frontier.size:
        arr = np_decode(frontier, q, m)
        produced = []
        for lo in range(0, arr.shape[0], chunk):
            part = arr[lo : lo + chunk]
            left = np.einsum("hij,fjk->hfik", h_arr, part) % p
            right = np.einsum("fij,hjk->fhik", part, h_arr) % p
            produced.append(left.reshape(-1, m * m) @ powvec)
            produced.append(right.reshape(-1, m * m) @ powvec)
        keys = np.unique(np.concatenate(produced))
        if seen is not None:
            new = keys[~seen[keys]]
            seen[new] = True
        else:
            new = np.array([k for k in keys.tolist() if k not in local], dtype=np.int64)
            local.update(new.tolist())
        members.extend(new.tolist())
        frontier = new
    return members


def _bfs_python(seed_key, h_imats, t, m) -> list[int]:
    q = t.q
    seen = {seed_key}
    frontier = [key_to_imat(seed_key, q, m)]
    while frontier:
        new = []
        for a in frontier:
            for h in h_imats:
                for b in (imat_mul(h, a, t), imat_mul(a, h, t)):
                    k = imat_key(b, q)
                    if k not in seen:
                        seen.add(k)
                        new.append(b)
        frontier = new
    return list(seen)


def double_coset_witness(
    field: FieldDescriptor,
    h_imats: Sequence[IMat],
    g: IMat,
    target: IMat,
) -> Optional[tuple[IMat, IMat]]:
    """(h, h') with h g h' = target, or None when target is not in H g H.

    Membership holds iff H.target meets g.H; a common element z = h0 target =
    g h1 gives the witness (h0^-1, h1) directly.
    """
    t = tables(field)
    q = t.q
    m = len(g)
    if t.d == 1:
        h_arr = np_from_imats(h_imats)
        powvec = np_powvec(q, m)
        left = np.einsum("hij,jk->hik", h_arr, np.array(target, dtype=np.int64)) % q
        right = np.einsum("ij,hjk->hik", np.array(g, dtype=np.int64), h_arr) % q
        common = np.intersect1d(np_keys(left, powvec), np_keys(right, powvec), assume_unique=False)
        if common.size == 0:
            return None
        z = key_to_imat(int(common[0]), q, m)
    else:
        left_keys = {imat_key(imat_mul(h, target, t), q) for h in h_imats}
        z = None
        for h in h_imats:
            cand = imat_mul(g, h, t)
            if imat_key(cand, q) in left_keys:
                z = cand
                break
        if z is None:
            return None
    h0 = imat_mul(z, imat_inverse(target, t), t)
    h1 = imat_mul(imat_inverse(g, t), z, t)
    return imat_inverse(h0, t), h1


def commuting_count(field: FieldDescriptor, h_imats: Sequence[IMat], x: IMat) -> int:
    """|{h in H : h x = x h}| by direct counting."""
    t = tables(field)
    if t.d == 1:
        h_arr = np_from_imats(h_imats)
        x_arr = np.array(x, dtype=np.int64)
        left = np.einsum("hij,jk->hik", h_arr, x_arr) % t.q
        right = np.einsum("ij,hjk->hik", x_arr, h_arr) % t.q
        return int((left == right).all(axis=(1, 2)).sum())
    return sum(1 for h in h_imats if imat_mul(h, x, t) == imat_mul(x, h, t))


def sigma_fixed_invertible_imats(field: FieldDescriptor, m: int, j_rows: IMat) -> Iterator[IMat]:
    """All invertible x with x^T J = J x, as x = J^-1 B over skew-symmetric B.

    In odd characteristic B runs over the strictly-upper parametrized
    alternating matrices; in characteristic 2 the diagonal is free as well.
    """
    t = tables(field)
    q = t.q
    char2 = t.p == 2
    jinv = imat_inverse(j_rows, t)
    positions = [(i, j) for i in range(m) for j in range(i + 1, m)]
    if char2:
        positions += [(i, i) for i in range(m)]
    count = q ** len(positions)
    if count > 1 << 22:
        raise TooLarge(f"{count} skew-symmetric candidates exceed the scan bound")
    neg = t.neg
    for combo in _all_vectors(q, len(positions)):
        b = [[0] * m for _ in range(m)]
        for (i, j), v in zip(positions, combo):
            b[i][j] = v
            if i != j:
                b[j][i] = neg[v]
        x = imat_mul(jinv, tuple(tuple(r) for r in b), t)
        if imat_inverse(x, t) is not None:
            yield x


def random_invertible_imat(field: FieldDescriptor, m: int, rng) -> IMat:
    t = tables(field)
    q = t.q
    while True:
        a = tuple(tuple(rng.randrange(q) for _ in range(m)) for _ in range(m))
        if imat_inverse(a, t) is not None:
            return a
