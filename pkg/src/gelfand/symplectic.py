"""The standard symplectic structure on F_q^(2n).

Holds the form J = [[0, I], [-I, 0]], the involution theta(g) = J^-1 (g^T)^-1 J
whose fixed points are Sp_2n, the anti-involution sigma(g) = J^-1 g^T J, the
symmetrization s(g) = g sigma(g), membership testing, exhaustive enumeration
of small symplectic groups, and closed-form group orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from . import _kernels
from .errors import SingularInput, TooLarge
from .fields import FieldDescriptor, split_prime_power
from .linalg import MatrixOverField

SP_ENUM_BOUND = 10**7


def standard_form(base: FieldDescriptor, n: int) -> MatrixOverField:
    """The block matrix [[0, I_n], [-I_n, 0]] of size 2n."""
    zero, one = base.zero(), base.one()
    m = 2 * n
    rows = [[zero] * m for _ in range(m)]
    for i in range(n):
        rows[i][n + i] = one
        rows[n + i][i] = -one
    return MatrixOverField(base, rows)


@dataclass(frozen=True)
class SymplecticContext:
    """Dimension 2n over a fixed field, with a validated symplectic form."""

    base: FieldDescriptor
    half_dim: int
    form: Optional[MatrixOverField] = None

    def __post_init__(self):
        if self.half_dim < 1:
            raise ValueError("half dimension must be >= 1")
        if self.form is None:
            object.__setattr__(self, "form", standard_form(self.base, self.half_dim))
        J = self.form
        m = 2 * self.half_dim
        if J.base != self.base or J.size != m:
            raise ValueError("form must be a 2n x 2n matrix over the context field")
        if J.transpose() != -J or any(J.entries[i][i] != self.base.zero() for i in range(m)):
            raise ValueError("form must be alternating (J^T = -J with zero diagonal)")
        try:
            J.inverse()
        except SingularInput:
            raise ValueError("form must be invertible") from None
        if not is_in_sp(self, J):
            raise ValueError("form fails its own membership test")

    @property
    def dim(self) -> int:
        return 2 * self.half_dim

    def __repr__(self):
        return f"Sp_{self.dim}({self.base})"


@lru_cache(maxsize=64)
def _form_inverse(ctx: SymplecticContext) -> MatrixOverField:
    return ctx.form.inverse()


def _check_size(ctx: SymplecticContext, g: MatrixOverField):
    if g.base != ctx.base or g.size != ctx.dim:
        raise ValueError(f"expected a {ctx.dim} x {ctx.dim} matrix over {ctx.base}")


def theta(ctx: SymplecticContext, g: MatrixOverField) -> MatrixOverField:
    """The involution J^-1 (g^T)^-1 J; its fixed points are exactly Sp_2n."""
    _check_size(ctx, g)
    return _form_inverse(ctx) * g.transpose().inverse() * ctx.form


def sigma(ctx: SymplecticContext, g: MatrixOverField) -> MatrixOverField:
    """The anti-involution J^-1 g^T J; g is symplectic iff sigma(g) = g^-1."""
    _check_size(ctx, g)
    return _form_inverse(ctx) * g.transpose() * ctx.form


def symmetrize(ctx: SymplecticContext, g: MatrixOverField) -> MatrixOverField:
    """s(g) = g J^-1 g^T J = g sigma(g); the image is sigma-fixed."""
    _check_size(ctx, g)
    return g * sigma(ctx, g)


def is_in_sp(ctx: SymplecticContext, g: MatrixOverField) -> bool:
    """Membership test g^T J g = J."""
    _check_size(ctx, g)
    return g.transpose() * ctx.form * g == ctx.form


def sp_order(q: int, n: int) -> int:
    """|Sp_2n(F_q)| = q^(n^2) * prod_{i=1..n} (q^(2i) - 1)."""
    split_prime_power(q)
    if n < 1:
        raise ValueError("n must be >= 1")
    total = q ** (n * n)
    for i in range(1, n + 1):
        total *= q ** (2 * i) - 1
    return total


def gl_order(q: int, m: int) -> int:
    """|GL_m(F_q)| = prod_{i=0..m-1} (q^m - q^i)."""
    split_prime_power(q)
    return _kernels.gl_order(q, m)


def enumerate_sp(ctx: SymplecticContext, max_order: int = SP_ENUM_BOUND) -> list[MatrixOverField]:
    """Every element of Sp_2n(F_q) in canonical (entry-lexicographic) order."""
    predicted = sp_order(ctx.base.order, ctx.half_dim)
    if predicted > max_order:
        raise TooLarge(f"|Sp_{ctx.dim}(F_{ctx.base.order})| = {predicted} exceeds the bound {max_order}")
    imats = _sp_imats(ctx)
    return [_kernels.matrix_from_imat(ctx.base, a) for a in imats]


def _sp_imats(ctx: SymplecticContext):
    return _kernels.sp_imats(ctx.base, ctx.half_dim, ctx.form.int_rows())
