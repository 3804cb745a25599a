"""Cyclic algebras over a nonarchimedean local field, as explicit data.

The algebra is B = (E/F, tau, pi) with F = GF(q)[[pi]], E = GF(q^n)[[pi]]
unramified of degree n, tau the lift of the residue automorphism
x -> x^(q^f) with gcd(f, n) = 1, and a generator u satisfying

    u^n = pi,        u x = tau(x) u   for x in E.

Elements are kept in cyclic coordinates (x_0, ..., x_{n-1}), meaning
sum x_i u^i with x_i in E.  The faithful matrix model sends x in E to
diag(x, tau x, ..., tau^{n-1} x) and u to the shift matrix with ones on
the superdiagonal and pi in the bottom-left corner; cyclic coordinates
are recovered from the first matrix row.

The involution of the second kind is computed at the matrix level,

    M* = H^{-1} tau(bar(M)^t) H,

with H the antidiagonal permutation and bar = tau^s entrywise (2s = 0
mod n).  This is an anti-automorphism of the matrix algebra for every
n, but it maps the cyclic image into itself only for n <= 2; for
larger n `involution_star` raises ValueError on elements whose image
leaves the cyclic locus.
"""

from dataclasses import dataclass
from functools import cached_property
from math import gcd

from .algebra import (
    InsufficientPrecision,
    LocalSeriesElement,
    RingMatrix,
    finite_field,
    prime_power,
    smith_normal_form,
)


@dataclass(frozen=True)
class CyclicAlgebraDescriptor:
    """Local data (n, q, f, s) determining B = (E/F, tau, pi)."""

    n: int
    residue_size: int
    frobenius_power: int = 1
    conjugation_power: int = 0
    split: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("degree n must be positive")
        prime_power(self.residue_size)  # validates q
        if gcd(self.frobenius_power, self.n) != 1:
            raise ValueError(
                f"frobenius power f={self.frobenius_power} must be prime to n={self.n}"
            )
        if (2 * self.conjugation_power) % self.n:
            raise ValueError(
                f"conjugation power s={self.conjugation_power} needs 2s = 0 mod n"
            )
        if self.split and self.n > 1:
            raise ValueError("split places reduce to n = 1; build the reduced descriptor")

    @cached_property
    def field(self):
        """Residue field GF(q^n) of E."""
        return finite_field(self.residue_size, self.n)

    @cached_property
    def _plog(self):
        # q = p^plog, so x -> x^q is frobenius(plog) at the prime level
        return prime_power(self.residue_size)[1]

    def tau(self, series, power=1):
        """Apply tau^power to an element of E (coefficientwise)."""
        e = (self._plog * self.frobenius_power * power) % (self._plog * self.n)
        return series.frobenius(e) if e else series

    def bar(self, series):
        """The conjugation tau^s on E."""
        return self.tau(series, self.conjugation_power)

    # -- element constructors -------------------------------------------

    def element(self, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != self.n:
            raise ValueError(f"expected {self.n} cyclic coordinates")
        return CyclicAlgebraElement(self, coeffs)

    def zero(self):
        z = LocalSeriesElement.zero(self.field)
        return self.element([z] * self.n)

    def one(self):
        return self.scalar(LocalSeriesElement.one(self.field))

    def scalar(self, x):
        """Embed x in E as a cyclic element."""
        z = LocalSeriesElement.zero(self.field)
        return self.element([x] + [z] * (self.n - 1))

    def u(self):
        if self.n == 1:
            return self.scalar(LocalSeriesElement.pi_power(self.field, 1))
        z = LocalSeriesElement.zero(self.field)
        coeffs = [z] * self.n
        coeffs[1] = LocalSeriesElement.one(self.field)
        return self.element(coeffs)


class CyclicAlgebraElement:
    """An element sum x_i u^i of a cyclic algebra, x_i in E."""

    __slots__ = ("descriptor", "coeffs")

    def __init__(self, descriptor, coeffs):
        self.descriptor = descriptor
        self.coeffs = tuple(coeffs)

    def __add__(self, other):
        d = self.descriptor
        return CyclicAlgebraElement(d, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CyclicAlgebraElement(self.descriptor, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Product using u^n = pi and u x = tau(x) u.

        (x_i u^i)(y_j u^j) = x_i tau^i(y_j) u^(i+j), and u^(i+j) folds
        to pi^((i+j) div n) u^((i+j) mod n).
        """
        d = self.descriptor
        n = d.n
        out = [LocalSeriesElement.zero(d.field) for _ in range(n)]
        for i, xi in enumerate(self.coeffs):
            if xi.is_zero:
                continue
            for j, yj in enumerate(other.coeffs):
                if yj.is_zero:
                    continue
                k, wrap = (i + j) % n, (i + j) // n
                term = xi * d.tau(yj, i)
                if wrap:
                    term = term.shift(wrap)
                out[k] = out[k] + term
        return CyclicAlgebraElement(d, out)

    def to_matrix(self):
        """Image in M_n(E): entry (r, c) is tau^r(x_(c-r mod n)), with a
        factor pi below the diagonal."""
        d = self.descriptor
        n = d.n
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                x = d.tau(self.coeffs[(c - r) % n], r)
                row.append(x.shift(1) if c < r else x)
            rows.append(row)
        return RingMatrix(d.field, rows)

    @staticmethod
    def from_matrix(descriptor, matrix):
        """Recover cyclic coordinates from the first row, checking that
        the whole matrix lies in the cyclic image."""
        cand = CyclicAlgebraElement(descriptor, matrix.rows[0])
        if not cand.to_matrix().agrees_with(matrix):
            raise ValueError("matrix is not in the image of the cyclic embedding")
        return cand

    def in_maximal_order(self):
        """Whether the element lies in the maximal order O_E + O_E u + ...

        Matrix criterion: valuation >= 0 on and above the diagonal and
        >= 1 strictly below.  Equivalent to all cyclic coordinates being
        integral.
        """
        M = self.to_matrix()
        n = self.descriptor.n
        for r in range(n):
            for c in range(n):
                a = M.rows[r][c]
                need = 1 if c < r else 0
                if a.is_sentinel:
                    if a.prec < need:
                        raise InsufficientPrecision(
                            f"entry certified only to O(pi^{a.prec}), need >= {need}"
                        )
                    continue
                if a.val < need:
                    return False
        return True

    def involution_star(self):
        """The involution beta -> beta* of the second kind.

        Computed as H^{-1} tau(bar(M)^t) H on the matrix model and pulled
        back through the cyclic embedding.  Raises ValueError when the
        image is not cyclic (possible for n >= 3).
        """
        d = self.descriptor
        n = d.n
        M = self.to_matrix()
        star = [
            [d.tau(d.bar(M.rows[n - 1 - j][n - 1 - i])) for j in range(n)]
            for i in range(n)
        ]
        return CyclicAlgebraElement.from_matrix(d, RingMatrix(d.field, star))

    def reduced_trace(self):
        """Trace of the matrix model: Tr_{E/F}(x_0) as a series in E."""
        d = self.descriptor
        t = LocalSeriesElement.zero(d.field)
        for r in range(d.n):
            t = t + d.tau(self.coeffs[0], r)
        return t

    def __eq__(self, other):
        return (
            isinstance(other, CyclicAlgebraElement)
            and self.descriptor == other.descriptor
            and all(a.agrees_with(b) for a, b in zip(self.coeffs, other.coeffs))
        )

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c.is_zero:
                parts.append(f"({c})" + ("" if i == 0 else f"*u^{i}" if i > 1 else "*u"))
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class DiscriminantReport:
    """Local discriminant exponent and the image-ideal multiplier.

    `disc_exponent` is the pi-exponent of the discriminant of the
    maximal order, `multiplier` the factor n_v entering image-ideal
    counts (1 for the ramified division algebra, 0 when split), and
    `gram_exponent` the independent recomputation from the reduced
    trace Gram matrix.
    """

    n: int
    is_division: bool
    disc_exponent: int
    multiplier: int
    gram_exponent: int

    @property
    def consistent(self):
        return self.disc_exponent == self.gram_exponent


def discriminant_report(descriptor):
    """Discriminant data for B, cross-checked on the trace Gram matrix.

    The maximal order has O_F-basis {zeta^a u^i} with zeta a residue
    generator.  The Gram matrix of the reduced trace pairing on that
    basis is block antidiagonal in i + j mod n: the (i, j) = (0, 0)
    block is the unit trace form of the residue extension, and each of
    the n - 1 blocks with i + j = n picks up one factor pi per row,
    giving valuation n per block and n(n-1) in total.
    """
    d = descriptor
    n = d.n
    field = d.field
    if d.split or n == 1:
        closed = 0
        multiplier = 0
        is_division = False
    else:
        closed = n * (n - 1)
        multiplier = 1
        is_division = True

    zeta = field.generator
    one = LocalSeriesElement.one(field)
    basis = []
    for i in range(n):
        for a in range(n):
            coeffs = [LocalSeriesElement.zero(field)] * n
            coeffs[i] = LocalSeriesElement(field, 0, (zeta**a,)) if a else one
            basis.append(CyclicAlgebraElement(d, coeffs))
    gram = RingMatrix(
        field,
        [[(x * y).reduced_trace() for y in basis] for x in basis],
    )
    dec = smith_normal_form(gram, track_left=False)
    gram_exponent = sum(dec.exponents)
    return DiscriminantReport(
        n=n,
        is_division=is_division,
        disc_exponent=closed,
        multiplier=multiplier,
        gram_exponent=int(gram_exponent),
    )
