"""Period lattices of abelian fibers over the symmetric domains.

Rational skeleton: the module O_B^{r/n} is presented by an order basis of
n x n complex matrices (the sigma-images of a basis of O_B over the ring
of integers of the quadratic field, or over Z when the field is Q), placed
into r/n column blocks.  A rational point is then an n x r complex matrix
X whose entries lie in the field; its conjugate model is the entrywise
conjugate.

Embedding at a domain point Z:

  two conjugate blocks      lambda(X) = (X . [Z; I], conj(X) . [Z^t; I])
  (n x r matrices, r even)

  classical mZ + n          lambda(m, n) = m . Z + n
  (pairs over Q, Z symmetric r x r)

Both land in C^{nr} (row-major flattening of an n x r matrix, so the
coordinate (i, j) sits at index i*r + j and the column blocks j < r/2,
j >= r/2 are contiguous).

The Riemann form lives on rational coordinates:

  E_mu(X, X') = tr_{F/Q}( trace( mu^{-1} . X . J . conj(X')^t ) ),

with J the standard alternating block matrix and tr_{F/Q}(z) = z + conj(z)
for an imaginary quadratic field, z for Q.  For pairs (m, n) the matrix
[m | n] replaces X and J doubles in size.  The extension of E_mu to C^{nr}
is R-bilinear along the embedding, never the naive complex formula.
"""

from dataclasses import dataclass, field
from math import isqrt, pi

import numpy as np

from .algebra import integer_det, integer_smith_normal_form
from .domains import BoundedPoint, HermitianPoint, SiegelPoint


class RankDeficient(Exception):
    """The embedded generators do not span R^{2nr}."""


class NoSelfDualForm(Exception):
    """No admissible mu makes the Riemann form unimodular on the lattice."""


def _as_complex(m):
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError("order basis entries must be matrices")
    return a


@dataclass(frozen=True, eq=False)
class OrderEmbedding:
    """An order in B = M_n(F) given by the sigma-images of a Z-basis.

    kind "A" keeps an imaginary quadratic field F (discriminant < 0) and
    expects 2n^2 basis matrices; kind "C" works over Q (discriminant 1)
    and expects n^2 real basis matrices.  The basis must be closed under
    matrix multiplication with integer coefficients: that is the whole
    ring structure this module ever uses.
    """

    kind: str
    n: int
    r: int
    discriminant: int
    matrices: tuple

    def __post_init__(self):
        if self.kind not in ("A", "C"):
            raise ValueError("kind must be 'A' or 'C'")
        if self.n < 1 or self.r < 1 or self.r % self.n != 0:
            raise ValueError("need n >= 1 and n | r")
        if self.kind == "A":
            d = self.discriminant
            if d >= 0 or d % 4 not in (0, 1):
                raise ValueError("kind A needs a negative quadratic discriminant")
            expected = 2 * self.n * self.n
        else:
            if self.discriminant != 1:
                raise ValueError("kind C works over Q (discriminant 1)")
            expected = self.n * self.n
        mats = tuple(_as_complex(m) for m in self.matrices)
        object.__setattr__(self, "matrices", mats)
        if len(mats) != expected:
            raise ValueError(
                f"order basis needs {expected} matrices, got {len(mats)}"
            )
        for m in mats:
            if m.shape != (self.n, self.n):
                raise ValueError("order basis matrices must be n x n")
            if self.kind == "C" and np.abs(m.imag).max() > 1e-12:
                raise ValueError("kind C order basis must be real")
        self._check_closure(mats)

    def _check_closure(self, mats):
        # Products of basis elements must decompose over the basis with
        # integer coefficients; this is the structure-constant sanity check.
        cols = np.stack(
            [np.concatenate([m.real.ravel(), m.imag.ravel()]) for m in mats],
            axis=1,
        )
        if np.linalg.matrix_rank(cols) < len(mats):
            raise ValueError("order basis matrices are rationally dependent")
        for a in mats:
            for b in mats:
                prod = a @ b
                rhs = np.concatenate([prod.real.ravel(), prod.imag.ravel()])
                coeff, residual, _, _ = np.linalg.lstsq(cols, rhs, rcond=None)
                recon = cols @ coeff
                if np.abs(recon - rhs).max() > 1e-9:
                    raise ValueError("order basis is not multiplicatively closed")
                if np.abs(coeff - np.round(coeff)).max() > 1e-9:
                    raise ValueError(
                        "order basis products need integer coefficients"
                    )

    def module_basis(self):
        """Rational basis of O_B^{r/n} as n x r matrices (block placement)."""
        out = []
        blocks = self.r // self.n
        for c in range(blocks):
            for m in self.matrices:
                x = np.zeros((self.n, self.r), dtype=complex)
                x[:, c * self.n : (c + 1) * self.n] = m
                out.append(x)
        return out

    @property
    def generator_count(self):
        return 2 * self.n * self.r

    def trace_covolume(self):
        """Covolume of the module basis under the trace pairing.

        The pairing is <x, y> = tr_{F/Q}(trace(x . conj(y)^t)); its Gram
        determinant measures the order lattice inside M_{n,r}(C) in the
        normalization that the self-dual form calibrates against.
        """
        basis = self.module_basis()
        k = len(basis)
        g = np.empty((k, k))
        for a in range(k):
            for b in range(k):
                val = np.trace(basis[a] @ basis[b].conj().T)
                g[a, b] = _field_trace(val, self.kind)
        sign, logdet = np.linalg.slogdet(g)
        if sign <= 0:
            raise RankDeficient("trace pairing degenerate on the order basis")
        return float(np.exp(0.5 * logdet))


def _field_trace(z, kind):
    if kind == "A":
        out = z + np.conj(z)
    else:
        out = z
    if abs(out.imag) > 1e-9 * max(1.0, abs(out)):
        raise ValueError("field trace did not come out real")
    return float(out.real)


def _realify(v):
    v = np.asarray(v, dtype=complex).ravel()
    return np.concatenate([v.real, v.imag])


@dataclass(frozen=True, eq=False)
class PeriodLattice:
    """2nr embedded generators spanning C^{nr} over R.

    labels carries the rational coordinates of each generator: an n x r
    matrix for the two-block model, a ("m" | "n", matrix) pair for the
    classical model.  vectors[k] is the flattened embedded image.
    """

    embedding: OrderEmbedding
    point: object
    vectors: np.ndarray
    labels: tuple
    basis_real: np.ndarray = field(default=None, repr=False)
    basis_real_inv: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        vecs = np.asarray(self.vectors, dtype=complex)
        object.__setattr__(self, "vectors", vecs)
        count, dim = vecs.shape
        if count != 2 * dim:
            raise ValueError("a full lattice needs 2nr generators in C^{nr}")
        b = np.stack([_realify(v) for v in vecs])
        s = np.linalg.svd(b, compute_uv=False)
        if s.min() < 1e-10 * max(1.0, s.max()):
            raise RankDeficient("embedded generators are real-linearly dependent")
        object.__setattr__(self, "basis_real", b)
        object.__setattr__(self, "basis_real_inv", np.linalg.inv(b))

    @property
    def complex_dim(self):
        return self.vectors.shape[1]

    def covolume(self):
        sign, logdet = np.linalg.slogdet(self.basis_real)
        return float(np.exp(logdet))

    def dual(self):
        """Euclidean dual lattice: real dual basis of the generators."""
        dual_rows = self.basis_real_inv.T
        dim = self.complex_dim
        vecs = dual_rows[:, :dim] + 1j * dual_rows[:, dim:]
        return PeriodLattice(self.embedding, self.point, vecs, self.labels)

    def scaled(self, c):
        return PeriodLattice(self.embedding, self.point, c * self.vectors, self.labels)

    def coordinates(self, v):
        """Real coordinates of v in the generator basis."""
        return _realify(v) @ self.basis_real_inv


def build_lattice(point, emb):
    """Period lattice at an interior domain point.

    Two-block model for kind A (point is a HermitianPoint on r/2), the
    classical mZ + n model for kind C (SiegelPoint on r).
    """
    basis = emb.module_basis()
    if emb.kind == "A":
        if not isinstance(point, HermitianPoint):
            raise TypeError("kind A embeds at a HermitianPoint")
        half = emb.r // 2
        if emb.r % 2 != 0 or point.matrix.shape != (half, half):
            raise ValueError("domain point must be (r/2) x (r/2)")
        top = np.vstack([point.matrix, np.eye(half)])
        top_c = np.vstack([point.matrix.T, np.eye(half)])
        vecs = []
        labels = []
        for x in basis:
            lam = np.hstack([x @ top, x.conj() @ top_c])
            vecs.append(lam.ravel())
            labels.append(x)
        return PeriodLattice(emb, point, np.stack(vecs), tuple(labels))
    if not isinstance(point, SiegelPoint):
        raise TypeError("kind C embeds at a SiegelPoint")
    if point.matrix.shape != (emb.r, emb.r):
        raise ValueError("domain point must be r x r")
    vecs = []
    labels = []
    for x in basis:
        vecs.append((x.real @ point.matrix).ravel())
        labels.append(("m", x.real))
    for x in basis:
        vecs.append(x.real.astype(complex).ravel())
        labels.append(("n", x.real))
    return PeriodLattice(emb, point, np.stack(vecs), tuple(labels))


def build_lattice_bounded(point, emb):
    """Period lattice in the bounded realization (any signature p + q = r).

    The column blocks are [U; I_q] and [I_p; U^t]; at U = 0 the generator
    images are just the split columns (X[:, p:], conj(X)[:, :p]).
    """
    if emb.kind != "A":
        raise ValueError("the bounded realization applies to kind A")
    if not isinstance(point, BoundedPoint):
        raise TypeError("expected a BoundedPoint")
    p, q = point.matrix.shape
    if p + q != emb.r:
        raise ValueError("point shape must split r as p + q")
    top = np.vstack([point.matrix, np.eye(q)])
    top_c = np.vstack([np.eye(p), point.matrix.T])
    vecs = []
    labels = []
    for x in emb.module_basis():
        lam = np.hstack([x @ top, x.conj() @ top_c])
        vecs.append(lam.ravel())
        labels.append(x)
    return PeriodLattice(emb, point, np.stack(vecs), tuple(labels))


def _normalize_mu(mu, n):
    if np.isscalar(mu):
        m = complex(mu) * np.eye(n, dtype=complex)
    else:
        m = np.asarray(mu, dtype=complex)
    if m.shape != (n, n):
        raise ValueError("mu must be n x n")
    s = np.linalg.svd(m, compute_uv=False)
    if s.min() < 1e-12 * max(1.0, s.max()):
        raise ValueError("mu is singular")
    return m


def _alternating_block(half):
    j = np.zeros((2 * half, 2 * half))
    j[:half, half:] = -np.eye(half)
    j[half:, :half] = np.eye(half)
    return j


class RiemannForm:
    """The alternating form E_mu on a period lattice and its R-extension."""

    def __init__(self, lattice, mu):
        self.lattice = lattice
        emb = lattice.embedding
        self.mu = _normalize_mu(mu, emb.n)
        self._mu_inv = np.linalg.inv(self.mu)
        if emb.kind == "A":
            if emb.r % 2 != 0:
                raise ValueError("the two-block form needs r even")
            self._j = _alternating_block(emb.r // 2)
        else:
            self._j = _alternating_block(emb.r)
        self._gram = None
        self._extension = None

    def rational_pair(self, xa, xb):
        emb = self.lattice.embedding
        if emb.kind == "A":
            ma, mb = xa, xb
        else:
            ma = _pair_to_row(xa, emb)
            mb = _pair_to_row(xb, emb)
        val = np.trace(self._mu_inv @ ma @ self._j @ mb.conj().T)
        return _field_trace(val, emb.kind)

    @property
    def gram(self):
        if self._gram is None:
            labels = self.lattice.labels
            k = len(labels)
            g = np.empty((k, k))
            for a in range(k):
                for b in range(k):
                    g[a, b] = self.rational_pair(labels[a], labels[b])
            self._gram = g
        return self._gram

    @property
    def extension(self):
        """E_mu in standard real coordinates of C^{nr} (2nr x 2nr)."""
        if self._extension is None:
            binv = self.lattice.basis_real_inv
            self._extension = binv @ self.gram @ binv.T
        return self._extension

    def pair_vectors(self, v, w):
        return float(_realify(v) @ self.extension @ _realify(w))

    def hermitian_matrix(self):
        """H(v, w) = E(iv, w) + iE(v, w) on the standard complex basis."""
        k = self.extension
        dim = self.lattice.complex_dim
        h = k[dim:, :dim] + 1j * k[:dim, :dim]
        if np.abs(h - h.conj().T).max() > 1e-8 * max(1.0, np.abs(h).max()):
            raise ValueError("associated form is not Hermitian")
        return 0.5 * (h + h.conj().T)

    def is_positive(self, tol=1e-10):
        eigs = np.linalg.eigvalsh(self.hermitian_matrix())
        return bool(eigs.min() > tol)

    def integrality_defect(self):
        g = self.gram
        return float(np.abs(g - np.round(g)).max())


def _pair_to_row(label, emb):
    part, x = label
    m = np.zeros((emb.n, 2 * emb.r), dtype=complex)
    if part == "m":
        m[:, : emb.r] = x
    else:
        m[:, emb.r :] = x
    return m


@dataclass(frozen=True)
class SelfDualMu:
    scale: float
    sign: int
    gram_det: float
    trace_covolume: float
    covolume_matched: bool

    @property
    def value(self):
        return self.sign * self.scale

    def matrix(self, n):
        return self.value * np.eye(n, dtype=complex)


def solve_self_dual_mu(lattice, tol=1e-9):
    """Search the real scalar family mu = c . I_n for a unimodular form.

    The modulus is pinned by the Gram determinant of the basic form
    (mu = I): |c| = |det G_I|^{1/(2nr)}.  The sign is pinned by positive
    definiteness of H = E(i., .) + iE(., .).  Both candidates failing
    integrality or positivity is reported as NoSelfDualForm; that is an
    honest refusal, not a numerical fallback.
    """
    emb = lattice.embedding
    base = RiemannForm(lattice, 1.0)
    sign_det, logdet = np.linalg.slogdet(base.gram)
    if sign_det == 0:
        raise NoSelfDualForm("basic form is degenerate on the lattice")
    two_nr = 2 * emb.n * emb.r
    c = float(np.exp(logdet / two_nr))
    chosen = None
    for sign in (-1, 1):
        form = RiemannForm(lattice, sign * c)
        if form.integrality_defect() > tol:
            continue
        if not form.is_positive():
            continue
        det_mu_gram = abs(np.linalg.det(form.gram))
        chosen = (sign, det_mu_gram)
        break
    if chosen is None:
        raise NoSelfDualForm(
            f"no real scalar mu with |c| = {c:.6g} is unimodular and positive"
        )
    sign, det_mu_gram = chosen
    trace_cov = emb.trace_covolume()
    det_mu_power = c ** (emb.n * emb.r)
    matched = abs(det_mu_power / trace_cov - 1.0) < 1e-6
    return SelfDualMu(
        scale=c,
        sign=sign,
        gram_det=det_mu_gram,
        trace_covolume=trace_cov,
        covolume_matched=matched,
    )


def covolume(lattice):
    return lattice.covolume()


def covolume_closed_form(lattice, mu):
    """Predicted covolume |det mu|^r det(Y)^{2n} (two-block model) or det Y."""
    emb = lattice.embedding
    mu = _normalize_mu(mu, emb.n)
    det_mu = abs(np.linalg.det(mu))
    y = lattice.point.Y
    det_y = float(np.real(np.linalg.det(y)))
    if emb.kind == "A":
        return det_mu ** emb.r * det_y ** (2 * emb.n)
    return det_y


def faltings_norm(lattice):
    """Norm of the wedge of all dz: square root of covolume / pi^{nr}."""
    nr = lattice.complex_dim
    return float(np.sqrt(lattice.covolume() / pi**nr))


def polarization_degree(lattice, mu, tol=1e-9):
    """Index [dual : lattice]^{1/2} of an integral alternating form.

    The Gram matrix is rounded to integers (a defect above tol is an
    error), the index is |det|, and the degree is its exact integer
    square root; alternating integer forms in even rank always have a
    perfect-square determinant, so a failed isqrt means a real bug.
    """
    form = RiemannForm(lattice, mu)
    defect = form.integrality_defect()
    if defect > tol:
        raise ValueError(f"form is not integral on the lattice ({defect:.3e})")
    g = [[int(x) for x in row] for row in np.round(form.gram).astype(int)]
    index = abs(integer_det(g))
    deg = isqrt(index)
    if deg * deg != index:
        raise ValueError("alternating Gram determinant is not a perfect square")
    return deg


def dual_index_oracle(lattice, mu, tol=1e-9):
    """Independent route to [dual : lattice]: elementary divisors of Gram."""
    form = RiemannForm(lattice, mu)
    if form.integrality_defect() > tol:
        raise ValueError("form is not integral on the lattice")
    g = [[int(x) for x in row] for row in np.round(form.gram).astype(int)]
    divisors = integer_smith_normal_form(g).divisors
    index = 1
    for d in divisors:
        index *= d
    return abs(index)
