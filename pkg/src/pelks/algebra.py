"""Exact local arithmetic.

Three layers, each used by the layer above:

  * finite fields GF(p^m) with tabulated arithmetic and Frobenius,
  * truncated Laurent series over such a field, i.e. elements of
    GF(p^m)((pi)) known up to an absolute pi-adic precision,
  * matrices over the series ring together with Smith normal form
    over the valuation ring GF(p^m)[[pi]], tracking the unimodular
    transforms on both sides.

A parallel Smith normal form over the rational integers lives here as
well, since the global rank computations need the same bookkeeping
(divisors, left and right transforms) over Z instead of a DVR.

Precision convention: a series carries an absolute precision `prec`,
meaning every coefficient of pi^e with e < prec is known exactly.  A
series with no known nonzero coefficient is a zero sentinel: val is
+inf, and `prec` records how far the zero has been certified.  An
exact zero has prec = +inf.  Valuations of nonzero normalized series
are always exact because normalization strips leading zeros below
`prec`.
"""

from fractions import Fraction
from functools import lru_cache

INF = float("inf")

DEFAULT_PRECISION = 16

# Table-based fields get slow and memory hungry past this many elements;
# everything in this package lives in far smaller fields.
MAX_FIELD_SIZE = 4096


class InsufficientPrecision(Exception):
    """Raised when a pi-adic computation cannot be certified at the working precision."""


class DegenerateTestElement(Exception):
    """Raised when no separating residue element exists for a requested module computation."""


def _small_factor(n):
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def _poly_trim(c):
    while c and c[-1] == 0:
        c = c[:-1]
    return c


def _poly_mul_mod(a, b, modulus, p):
    # a, b, modulus are little-endian coefficient tuples over GF(p),
    # modulus monic of degree m.
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, m - 1, -1):
        lead = prod[deg]
        if lead == 0:
            continue
        prod[deg] = 0
        for t in range(m + 1):
            prod[deg - m + t] = (prod[deg - m + t] - lead * modulus[t]) % p
    return _poly_trim(tuple(prod[:m]))


def _poly_divides(div, poly, p):
    # Trial division of little-endian polys over GF(p); returns True on zero remainder.
    rem = list(poly)
    dn = len(div) - 1
    inv_lead = pow(div[-1], p - 2, p) if p > 2 else div[-1]
    while len(rem) - 1 >= dn and any(rem):
        rem = _poly_trim(rem)
        if not rem or len(rem) - 1 < dn:
            break
        shift = len(rem) - 1 - dn
        factor = (rem[-1] * inv_lead) % p
        for t in range(dn + 1):
            rem[shift + t] = (rem[shift + t] - factor * div[t]) % p
        rem = list(_poly_trim(tuple(rem)))
    return not any(rem)


def _find_irreducible(p, m):
    # Lexicographically smallest monic irreducible of degree m over GF(p).
    if m == 1:
        return (0, 1)
    lower = []
    for deg in range(1, m // 2 + 1):
        for code in range(p**deg):
            c = [(code // p**t) % p for t in range(deg)] + [1]
            lower.append(tuple(c))
    for code in range(p**m):
        cand = tuple((code // p**t) % p for t in range(m)) + (1,)
        if cand[0] == 0:
            continue
        if all(not _poly_divides(d, cand, p) for d in lower):
            return cand
    raise ValueError(f"no irreducible of degree {m} over GF({p})")


class FiniteFieldElement:
    """Element of a tabulated finite field, identified by an integer code."""

    __slots__ = ("field", "code")

    def __init__(self, field, code):
        self.field = field
        self.code = code

    def __add__(self, other):
        return FiniteFieldElement(self.field, self.field._add[self.code][other.code])

    def __sub__(self, other):
        return FiniteFieldElement(
            self.field, self.field._add[self.code][self.field._neg[other.code]]
        )

    def __neg__(self):
        return FiniteFieldElement(self.field, self.field._neg[self.code])

    def __mul__(self, other):
        return FiniteFieldElement(self.field, self.field._mul[self.code][other.code])

    def __pow__(self, e):
        if self.code == 0:
            if e <= 0:
                raise ZeroDivisionError("0 has no inverse")
            return self
        order = self.field.size - 1
        e %= order
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if self.code == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FiniteFieldElement(self.field, self.field._inv[self.code])

    def frobenius(self, e=1):
        """Apply x -> x^(p^e)."""
        return self ** (self.field.p**e)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteFieldElement)
            and self.field is other.field
            and self.code == other.code
        )

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"{self.field}({self.code})"


class FiniteField:
    """GF(p^m) with full addition/multiplication tables.

    Elements are integer codes 0 .. p^m - 1, read as base-p digit
    vectors giving the coefficients of 1, x, .., x^(m-1) modulo a fixed
    irreducible polynomial (the lexicographically smallest one, so the
    construction is deterministic).
    """

    def __init__(self, p, m):
        size = p**m
        if size > MAX_FIELD_SIZE:
            raise ValueError(f"field GF({p}^{m}) too large for table construction")
        self.p = p
        self.m = m
        self.size = size
        self.modulus = _find_irreducible(p, m)
        decode = [tuple((code // p**t) % p for t in range(m)) for code in range(size)]
        encode = {c: i for i, c in enumerate(decode)}

        def enc(poly):
            return encode[tuple(poly[t] if t < len(poly) else 0 for t in range(m))]

        self._add = [
            [enc([(a[t] + b[t]) % p for t in range(m)]) for b in decode] for a in decode
        ]
        self._neg = [enc([(-a[t]) % p for t in range(m)]) for a in decode]
        self._mul = [
            [enc(_poly_mul_mod(_poly_trim(a), _poly_trim(b), self.modulus, p)) for b in decode]
            for a in decode
        ]
        one_code = encode[(1,) + (0,) * (m - 1)]
        self._inv = [0] * size
        for a in range(1, size):
            # a^(size-2) = a^(-1), square-and-multiply on codes
            acc, base, e = one_code, a, size - 2
            while e:
                if e & 1:
                    acc = self._mul[acc][base]
                base = self._mul[base][base]
                e >>= 1
            self._inv[a] = acc
        self.zero = FiniteFieldElement(self, 0)
        self.one = FiniteFieldElement(self, encode[(1,) + (0,) * (m - 1)])
        self.generator = self._find_generator()

    def _find_generator(self):
        for code in range(1, self.size):
            x = FiniteFieldElement(self, code)
            order = 1
            y = x
            while y != self.one:
                y = y * x
                order += 1
            if order == self.size - 1:
                return x
        raise ValueError("no multiplicative generator found")

    def __call__(self, code):
        return FiniteFieldElement(self, code % self.size if self.m == 1 else code)

    def elements(self):
        return [FiniteFieldElement(self, c) for c in range(self.size)]

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"


def prime_power(q):
    """Write q = p^m, returning (p, m)."""
    p = _small_factor(q)
    m = 0
    qq = q
    while qq > 1:
        if qq % p:
            raise ValueError(f"{q} is not a prime power")
        qq //= p
        m += 1
    return p, m


@lru_cache(maxsize=None)
def finite_field(q, ext=1):
    """Cached field GF(q^ext) for q a prime power."""
    p, m = prime_power(q)
    return FiniteField(p, m * ext)


def frobenius(x, e=1):
    """x -> x^(p^e) on field elements, coefficientwise on series."""
    return x.frobenius(e)


class LocalSeriesElement:
    """Truncated Laurent series sum_{e >= val} c_e pi^e over a finite field.

    coeffs[t] is the coefficient of pi^(val + t); an empty coeffs tuple
    is the zero sentinel (val = +inf) certified up to pi^prec.
    """

    __slots__ = ("field", "val", "coeffs", "prec")

    def __init__(self, field, val, coeffs, prec=INF):
        coeffs = tuple(coeffs)
        # strip leading zeros so val is exact, and trailing zeros for canonicity
        while coeffs and not coeffs[0]:
            coeffs = coeffs[1:]
            val += 1
        while coeffs and not coeffs[-1]:
            coeffs = coeffs[:-1]
        if prec != INF and coeffs:
            keep = max(0, int(prec) - val)
            coeffs = coeffs[:keep]
            while coeffs and not coeffs[-1]:
                coeffs = coeffs[:-1]
        if not coeffs:
            val = INF
        self.field = field
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(field, prec=INF):
        return LocalSeriesElement(field, INF, (), prec)

    @staticmethod
    def one(field):
        return LocalSeriesElement(field, 0, (field.one,))

    @staticmethod
    def constant(field, c):
        return LocalSeriesElement(field, 0, (c,))

    @staticmethod
    def pi_power(field, e, c=None):
        return LocalSeriesElement(field, e, (c if c is not None else field.one,))

    # -- predicates ---------------------------------------------------

    @property
    def is_zero(self):
        """True only for the exact zero; a finite-precision sentinel is undecided."""
        return not self.coeffs and self.prec == INF

    @property
    def is_sentinel(self):
        return not self.coeffs

    def coefficient(self, e):
        """Known coefficient of pi^e; raises if e is beyond the precision."""
        if e >= self.prec:
            raise InsufficientPrecision(f"coefficient of pi^{e} unknown at O(pi^{self.prec})")
        if self.is_sentinel or e < self.val or e >= self.val + len(self.coeffs):
            return self.field.zero
        return self.coeffs[e - self.val]

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        prec = min(self.prec, other.prec)
        if self.is_sentinel and other.is_sentinel:
            return LocalSeriesElement.zero(self.field, prec)
        lo = min(self.val if self.coeffs else prec, other.val if other.coeffs else prec)
        hi_known = prec
        if hi_known == INF:
            hi_known = max(
                self.val + len(self.coeffs) if self.coeffs else lo,
                other.val + len(other.coeffs) if other.coeffs else lo,
            )
        out = []
        for e in range(int(lo), int(hi_known)):
            out.append(self.coefficient(e) + other.coefficient(e))
        return LocalSeriesElement(self.field, int(lo), out, prec)

    def __neg__(self):
        return LocalSeriesElement(self.field, self.val, tuple(-c for c in self.coeffs), self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.is_sentinel or other.is_sentinel:
            a = self.prec if self.is_sentinel else self.val
            b = other.prec if other.is_sentinel else other.val
            return LocalSeriesElement.zero(self.field, a + b)
        prec = min(self.val + other.prec, other.val + self.prec)
        n = len(self.coeffs) + len(other.coeffs) - 1
        if prec != INF:
            n = min(n, int(prec) - (self.val + other.val))
        out = [self.field.zero] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= n:
                    break
                out[i + j] = out[i + j] + a * b
        return LocalSeriesElement(self.field, self.val + other.val, out, prec)

    def inverse(self, prec=None):
        """Multiplicative inverse, truncated at relative precision.

        The relative precision of the input is preserved; exact inputs
        are truncated at DEFAULT_PRECISION relative digits since a unit
        inverse is an infinite series in general.  Exact monomials are
        the exception: c*pi^v inverts exactly, which keeps eliminations
        against monomial pivots free of spurious precision loss.
        """
        if self.is_sentinel:
            raise ZeroDivisionError("inverse of a (certified-zero or undecided) series")
        if self.prec == INF and len(self.coeffs) == 1:
            return LocalSeriesElement(self.field, -self.val, (self.coeffs[0].inverse(),))
        rel = self.prec - self.val if self.prec != INF else (prec or DEFAULT_PRECISION)
        rel = int(rel)
        c = [self.coefficient(self.val + t) if t < rel else self.field.zero for t in range(rel)]
        inv0 = c[0].inverse()
        d = [inv0]
        for k in range(1, rel):
            acc = self.field.zero
            for t in range(1, k + 1):
                if t < len(c) and c[t]:
                    acc = acc + c[t] * d[k - t]
            d.append(-(inv0 * acc))
        out_prec = (-self.val) + rel if self.prec != INF else (-self.val) + rel
        return LocalSeriesElement(self.field, -self.val, d, out_prec)

    def divide_exact(self, other):
        """self / other when the quotient is known to be exact in the DVR sense."""
        return self * other.inverse()

    def scale(self, c):
        return LocalSeriesElement(self.field, self.val, tuple(c * x for x in self.coeffs), self.prec)

    def shift(self, e):
        """Multiply by pi^e."""
        if self.is_sentinel:
            return LocalSeriesElement.zero(self.field, self.prec + e)
        return LocalSeriesElement(self.field, self.val + e, self.coeffs, self.prec + e)

    def map_coeffs(self, fn):
        return LocalSeriesElement(self.field, self.val, tuple(fn(c) for c in self.coeffs), self.prec)

    def frobenius(self, e=1):
        return self.map_coeffs(lambda c: c.frobenius(e))

    def truncate(self, prec):
        return LocalSeriesElement(self.field, self.val if self.coeffs else INF, self.coeffs, min(self.prec, prec))

    # -- comparison ---------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, LocalSeriesElement)
            and self.field is other.field
            and self.val == other.val
            and self.coeffs == other.coeffs
            and self.prec == other.prec
        )

    def __hash__(self):
        return hash((id(self.field), self.val, self.coeffs, self.prec))

    def agrees_with(self, other):
        """Equality of all coefficients known to both sides."""
        upto = min(self.prec, other.prec)
        if upto == INF:
            return self.val == other.val and self.coeffs == other.coeffs
        lo = min(self.val if self.coeffs else upto, other.val if other.coeffs else upto)
        if lo >= upto:
            return True
        return all(self.coefficient(e) == other.coefficient(e) for e in range(int(lo), int(upto)))

    def __repr__(self):
        if self.is_sentinel:
            return "0" if self.prec == INF else f"O(pi^{self.prec})"
        terms = []
        for t, c in enumerate(self.coeffs):
            if not c:
                continue
            e = self.val + t
            base = f"{c.code}" if e == 0 else (f"{c.code}*pi^{e}" if c.code != 1 else f"pi^{e}")
            terms.append(base)
        s = " + ".join(terms)
        if self.prec != INF:
            s += f" + O(pi^{self.prec})"
        return s


def series_valuation(s):
    """pi-adic valuation; +inf for exact zero, raises for an undecided sentinel."""
    if s.is_sentinel and s.prec != INF:
        raise InsufficientPrecision(f"valuation only certified >= {s.prec}")
    return s.val


class RingMatrix:
    """Dense matrix over the local series ring (rows of LocalSeriesElement)."""

    __slots__ = ("field", "rows")

    def __init__(self, field, rows):
        self.field = field
        self.rows = [list(r) for r in rows]

    @staticmethod
    def identity(field, n):
        z = LocalSeriesElement.zero(field)
        o = LocalSeriesElement.one(field)
        return RingMatrix(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(field, m, n):
        z = LocalSeriesElement.zero(field)
        return RingMatrix(field, [[z for _ in range(n)] for _ in range(m)])

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __setitem__(self, ij, value):
        self.rows[ij[0]][ij[1]] = value

    def copy(self):
        return RingMatrix(self.field, self.rows)

    def __add__(self, other):
        return RingMatrix(
            self.field,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __matmul__(self, other):
        m, k = self.shape
        k2, n = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        z = LocalSeriesElement.zero(self.field)
        out = []
        for i in range(m):
            row = []
            for j in range(n):
                acc = z
                for t in range(k):
                    a = self.rows[i][t]
                    b = other.rows[t][j]
                    if a.is_sentinel and a.prec == INF:
                        continue
                    if b.is_sentinel and b.prec == INF:
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RingMatrix(self.field, out)

    def transpose(self):
        m, n = self.shape
        return RingMatrix(self.field, [[self.rows[i][j] for i in range(m)] for j in range(n)])

    def map(self, fn):
        return RingMatrix(self.field, [[fn(x) for x in row] for row in self.rows])

    def det(self):
        """Laplace expansion; intended for the small matrices in tests and reports."""
        m, n = self.shape
        if m != n:
            raise ValueError("determinant of a non-square matrix")
        if m == 1:
            return self.rows[0][0]
        acc = LocalSeriesElement.zero(self.field)
        for j in range(n):
            a = self.rows[0][j]
            if a.is_sentinel and a.prec == INF:
                continue
            minor = RingMatrix(
                self.field,
                [[self.rows[i][t] for t in range(n) if t != j] for i in range(1, m)],
            )
            term = a * minor.det()
            acc = acc + term if j % 2 == 0 else acc - term
        return acc

    def agrees_with(self, other):
        return all(
            a.agrees_with(b) for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __repr__(self):
        return "RingMatrix([\n  " + ",\n  ".join(str(r) for r in self.rows) + "\n])"


class SmithDecomposition:
    """Result of Smith normal form: U @ A @ V = D with U, V unimodular.

    `exponents` lists the pi-adic exponents of the diagonal divisors in
    nondecreasing order; +inf marks an exactly zero divisor.  Over Z
    (integer variant) `divisors` holds the nonnegative elementary
    divisors themselves and matrices are lists of int lists.
    """

    __slots__ = ("U", "D", "V", "exponents", "divisors", "u_det", "v_det")

    def __init__(self, U, D, V, exponents=None, divisors=None, u_det=None, v_det=None):
        self.U = U
        self.D = D
        self.V = V
        self.exponents = exponents
        self.divisors = divisors
        self.u_det = u_det
        self.v_det = v_det


def smith_normal_form(matrix, track_left=True):
    """Smith normal form over GF(q^n)[[pi]].

    Pivot selection takes the entry of minimal certified valuation,
    breaking ties lexicographically by (row, column).  Eliminated
    entries are set to exact zero (the cancellation is exact in the
    DVR even though the stored quotient is truncated).  Raises
    InsufficientPrecision when a zero sentinel of finite precision
    could hide a smaller valuation than every certified entry.
    """
    field = matrix.field
    A = matrix.copy()
    m, n = A.shape
    U = RingMatrix.identity(field, m) if track_left else None
    V = RingMatrix.identity(field, n)
    u_det = LocalSeriesElement.one(field)
    v_det = LocalSeriesElement.one(field)
    exponents = []
    zero = LocalSeriesElement.zero(field)

    for k in range(min(m, n)):
        pivot = None
        sentinel_floor = INF
        for i in range(k, m):
            for j in range(k, n):
                a = A.rows[i][j]
                if a.is_sentinel:
                    if a.prec != INF:
                        sentinel_floor = min(sentinel_floor, a.prec)
                    continue
                if pivot is None or a.val < A.rows[pivot[0]][pivot[1]].val:
                    pivot = (i, j)
        if pivot is None:
            if sentinel_floor != INF:
                raise InsufficientPrecision(
                    f"remaining block certified zero only up to O(pi^{sentinel_floor})"
                )
            exponents.extend([INF] * (min(m, n) - k))
            break
        pv = A.rows[pivot[0]][pivot[1]].val
        if pv > sentinel_floor:
            raise InsufficientPrecision(
                f"pivot valuation {pv} exceeds a sentinel certified only to O(pi^{sentinel_floor})"
            )
        pi_, pj = pivot
        if pi_ != k:
            A.rows[k], A.rows[pi_] = A.rows[pi_], A.rows[k]
            if track_left:
                U.rows[k], U.rows[pi_] = U.rows[pi_], U.rows[k]
            u_det = -u_det
        if pj != k:
            for row in A.rows:
                row[k], row[pj] = row[pj], row[k]
            for row in V.rows:
                row[k], row[pj] = row[pj], row[k]
            v_det = -v_det
        p = A.rows[k][k]
        # clear the pivot column; only touch columns where the pivot row
        # has something to propagate
        pjs = [j for j in range(k + 1, n) if not A.rows[k][j].is_zero]
        ujs = [j for j in range(m) if not U.rows[k][j].is_zero] if track_left else ()
        undecided_rows = []
        for i in range(m):
            if i == k:
                continue
            a = A.rows[i][k]
            if a.is_sentinel:
                if a.prec != INF and a.prec < pv:
                    raise InsufficientPrecision(
                        f"entry certified zero only to O(pi^{a.prec}) below pivot pi^{pv}"
                    )
                if a.prec != INF:
                    undecided_rows.append(i)
                continue
            factor = a.divide_exact(p)
            A.rows[i][k] = zero
            for j in pjs:
                A.rows[i][j] = A.rows[i][j] - factor * A.rows[k][j]
            if track_left:
                for j in ujs:
                    U.rows[i][j] = U.rows[i][j] - factor * U.rows[k][j]
        # clear the pivot row; the pivot column below/above is exact zero
        # by now, so only the pivot row itself and V change
        for j in range(n):
            if j == k:
                continue
            a = A.rows[k][j]
            if a.is_sentinel:
                if a.prec != INF and a.prec < pv:
                    raise InsufficientPrecision(
                        f"entry certified zero only to O(pi^{a.prec}) right of pivot pi^{pv}"
                    )
                continue
            factor = a.divide_exact(p)
            A.rows[k][j] = zero
            # rows whose pivot-column entry is an undecided sentinel keep
            # an O(pi^prec) contribution from this column operation
            for i in undecided_rows:
                A.rows[i][j] = A.rows[i][j] - A.rows[i][k] * factor
            for i in range(n):
                if not V.rows[i][k].is_zero:
                    V.rows[i][j] = V.rows[i][j] - V.rows[i][k] * factor
        # normalize the pivot to an exact power of pi
        unit = LocalSeriesElement(field, 0, p.coeffs, p.prec - p.val if p.prec != INF else INF)
        unit_inv = unit.inverse()
        if track_left:
            U.rows[k] = [unit_inv * x for x in U.rows[k]]
        u_det = u_det * unit_inv
        A.rows[k][k] = LocalSeriesElement.pi_power(field, pv)
        exponents.append(pv)

    finite = [e for e in exponents if e != INF]
    if finite != sorted(finite):
        raise AssertionError(f"divisor exponents not nondecreasing: {exponents}")
    D = RingMatrix.zeros(field, m, n)
    for t, e in enumerate(exponents):
        if e != INF:
            D.rows[t][t] = LocalSeriesElement.pi_power(field, int(e))
    return SmithDecomposition(U, D, V, exponents=exponents, u_det=u_det, v_det=v_det)


# ---------------------------------------------------------------------------
# Integer Smith normal form (same conventions: U @ A @ V = D, row space of A
# is the relation lattice, quotient coordinates of a vector x are x @ V).
# ---------------------------------------------------------------------------


def _int_identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def integer_smith_normal_form(rows):
    """Smith normal form of an integer matrix, pure Python exact arithmetic.

    Returns a SmithDecomposition whose U, D, V are lists of int lists and
    whose `divisors` are the nonnegative elementary divisors d_1 | d_2 | ...
    (zeros at the end for the free part of the cokernel).
    """
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _int_identity(m)
    V = _int_identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, c):
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def addmul_col(dst, src, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    k = 0
    size = min(m, n)
    while k < size:
        pivot = None
        for i in range(k, m):
            for j in range(k, n):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(k, pivot[0])
        swap_cols(k, pivot[1])
        dirty = False
        for i in range(k + 1, m):
            if A[i][k]:
                q = A[i][k] // A[k][k]
                addmul_row(i, k, -q)
                if A[i][k]:
                    dirty = True
        for j in range(k + 1, n):
            if A[k][j]:
                q = A[k][j] // A[k][k]
                addmul_col(j, k, -q)
                if A[k][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility of the rest of the block by the pivot
        offender = None
        for i in range(k + 1, m):
            for j in range(k + 1, n):
                if A[i][j] % A[k][k]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            addmul_row(k, offender, 1)
            continue
        k += 1

    for t in range(min(m, n)):
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    divisors = [A[t][t] for t in range(min(m, n))]
    for a, b in zip(divisors, divisors[1:]):
        if a and b and b % a:
            raise AssertionError(f"divisor chain broken: {divisors}")
        if a == 0 and b != 0:
            raise AssertionError(f"zero divisor precedes nonzero: {divisors}")
    return SmithDecomposition(U, A, V, divisors=divisors)


def integer_det(rows):
    """Exact determinant of a square integer matrix via fraction-free elimination."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    assert det.denominator == 1
    return int(det)


def integer_inverse(rows):
    """Exact inverse of a unimodular integer matrix."""
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for k in range(n):
        piv = next(i for i in range(k, n) if a[i][k])
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    out = []
    for i in range(n):
        row = a[i][n:]
        assert all(x.denominator == 1 for x in row)
        out.append([int(x) for x in row])
    return out
