"""Signed basis modules over a local cyclic algebra and their tensor quotients.

The local input is a cyclic algebra descriptor together with a signature
(p, q).  The plain module has O_E-basis e_{ij}, 1 <= i <= n and
1 <= j <= p + q, on which a residue element x and the generator u act by

    x . e_{ij} = tau^{i-1}(x) e_{ij}        (j <= p)
    x . e_{ij} = tau^{i-1}(xbar) e_{ij}     (j > p)
    u . e_{1j} = pi e_{nj},   u . e_{ij} = e_{(i-1)j}   (i >= 2),

and the dual module has basis e'_{ij} with the conjugate twisted action

    x . e'_{ij} = tau^{n+1-i}(xbar) e'_{ij}  (j <= p)
    x . e'_{ij} = tau^{n+1-i}(x) e'_{ij}     (j > p)

and the same u shift.  Test elements are taken at a place split in the
top field, so x is a residue pair (v1, v2) with xbar = (v2, v1); the
unitary case needs v1, v2 with all 2n Galois translates distinct, the
symplectic case uses v2 = v1 with a full tau orbit.

The quotient of plain (x) dual by the relations x.m (x) m' - m (x) x.m'
and u.m (x) m' - m (x) u.m' is computed by Smith normal form and checked
against its predicted shape: one free line per eligible column pair,
spanned by the chain

    e_{1j} (x) e'_{1k} = pi e_{2j} (x) e'_{nk} = pi e_{ij} (x) e'_{(n+2-i)k},

whose pi-exponent profile (1, 0, ..., 0) is the local contribution to
the image ideal.
"""

from dataclasses import dataclass, field as dataclass_field

from .algebra import (
    INF,
    DegenerateTestElement,
    LocalSeriesElement,
    RingMatrix,
    integer_det,
    integer_inverse,
    integer_smith_normal_form,
    series_valuation,
    smith_normal_form,
)
from .cyclic_algebra import discriminant_report


class SignatureMismatch(Exception):
    """Raised when an image-ideal count needs p = q but the signature differs."""


@dataclass(frozen=True)
class SignedBasisModule:
    """One side of the tensor pairing: basis e_{ij} with twisted action."""

    descriptor: object
    signature: tuple
    dual: bool = False

    def __post_init__(self):
        p, q = self.signature
        if p < 0 or q < 0 or p + q < 1:
            raise ValueError(f"bad signature {self.signature}")

    @property
    def columns(self):
        return self.signature[0] + self.signature[1]

    @property
    def rank(self):
        """Rank over O_E."""
        return self.descriptor.n * self.columns

    def x_coefficient(self, letters, i, j):
        """Eigenvalue of the pair (v1, v2) on e_{ij}, 0-based indices."""
        v1, v2 = letters
        p = self.signature[0]
        n = self.descriptor.n
        if self.dual:
            letter = v2 if j < p else v1
            power = (n - i) % n
        else:
            letter = v1 if j < p else v2
            power = i
        e = (self.descriptor._plog * self.descriptor.frobenius_power * power) % (
            self.descriptor._plog * n
        )
        return letter.frobenius(e) if e else letter

    def u_image(self, i, j):
        """u . e_{ij} = pi^e . e_{i'j}; returns (i', e), 0-based."""
        if i == 0:
            return self.descriptor.n - 1, 1
        return i - 1, 0


def build_module_pair(descriptor, signature):
    plain = SignedBasisModule(descriptor, signature, dual=False)
    dual = SignedBasisModule(descriptor, signature, dual=True)
    return plain, dual


class TensorSpace:
    """Index bookkeeping for plain (x) dual over O_E."""

    def __init__(self, plain, dual):
        if plain.descriptor != dual.descriptor or plain.columns != dual.columns:
            raise ValueError("tensor factors must share local data")
        self.plain = plain
        self.dual = dual
        self.n = plain.descriptor.n
        self.r = plain.columns
        self.field = plain.descriptor.field
        self.size = (self.n * self.r) ** 2

    def index(self, i, j, l, k):
        """Flat column of e_{ij} (x) e'_{lk}, all indices 0-based."""
        n, r = self.n, self.r
        return ((i * r + j) * n + l) * r + k

    def unpack(self, flat):
        n, r = self.n, self.r
        k = flat % r
        l = (flat // r) % n
        j = (flat // (r * n)) % r
        i = flat // (r * n * r)
        return i, j, l, k

    def basis_vector(self, i, j, l, k, coeff=None):
        v = TensorVector(self, [LocalSeriesElement.zero(self.field)] * self.size)
        v.coeffs[self.index(i, j, l, k)] = (
            coeff if coeff is not None else LocalSeriesElement.one(self.field)
        )
        return v


class TensorVector:
    """A vector in the tensor module, kept as flat O_E coordinates."""

    __slots__ = ("space", "coeffs")

    def __init__(self, space, coeffs):
        self.space = space
        self.coeffs = list(coeffs)

    def __sub__(self, other):
        return TensorVector(
            self.space, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def scale(self, c):
        return TensorVector(self.space, [a * c for a in self.coeffs])

    def is_zero(self):
        return all(a.is_zero for a in self.coeffs)


def _check_action_compatibility(descriptor):
    """The dual table commutes with the u shift only when tau^2 = 1:
    u.(x.e'_{ik}) carries tau^{n+3-i}(xbar) against tau^{n+1-i}(xbar)."""
    if descriptor.n > 2:
        raise ValueError(
            "dual action tables are compatible with the u shift only for n <= 2"
        )


def find_test_letters(descriptor, mode):
    """Smallest residue pair (v1, v2) separating the twisted actions.

    mode "orbit_n": v2 = v1 and the n translates tau^a(v1) are distinct.
    mode "strict_2n": all 2n translates of v1 and v2 are distinct.
    """
    field = descriptor.field
    n = descriptor.n
    zeta = field.generator

    def orbit(v):
        return [descriptor.tau(LocalSeriesElement(field, 0, (v,)), a).coeffs[0] for a in range(n)]

    if mode == "orbit_n":
        for a in range(1, field.size - 1):
            v = zeta**a
            tr = orbit(v)
            if len(set(tr)) == n:
                return v, v
        raise DegenerateTestElement(
            f"no residue element with a full tau orbit in GF({field.size})"
        )
    if mode == "strict_2n":
        for a in range(1, field.size - 1):
            for b in range(1, field.size - 1):
                if a == b:
                    continue
                tr = orbit(zeta**a) + orbit(zeta**b)
                if len(set(tr)) == 2 * n:
                    return zeta**a, zeta**b
        raise DegenerateTestElement(
            f"no separating residue pair with 2n distinct translates in GF({field.size})"
        )
    raise ValueError(f"unknown separating mode {mode!r}")


def relation_generators(plain, dual, letters, include_swap=False):
    """Rows spanning the relation module, as TensorVectors.

    For every basis class m (x) m' this yields x.m (x) m' - m (x) x.m'
    (when nonzero) and u.m (x) m' - m (x) u.m'; with include_swap also
    m (x) m' - swap(m (x) m') once per unordered pair.
    """
    space = TensorSpace(plain, dual)
    field = space.field
    n, r = space.n, space.r
    rows = []
    one = LocalSeriesElement.one(field)
    for i in range(n):
        for j in range(r):
            for l in range(n):
                for k in range(r):
                    c = plain.x_coefficient(letters, i, j) - dual.x_coefficient(
                        letters, l, k
                    )
                    if c:
                        rows.append(
                            space.basis_vector(
                                i, j, l, k, LocalSeriesElement(field, 0, (c,))
                            )
                        )
                    i2, e1 = plain.u_image(i, j)
                    l2, e2 = dual.u_image(l, k)
                    left = space.basis_vector(
                        i2, j, l, k, LocalSeriesElement.pi_power(field, e1)
                    )
                    right = space.basis_vector(
                        i, j, l2, k, LocalSeriesElement.pi_power(field, e2)
                    )
                    rows.append(left - right)
                    if include_swap:
                        flat = space.index(i, j, l, k)
                        swapped = space.index(l, k, i, j)
                        if flat < swapped:
                            rows.append(
                                space.basis_vector(i, j, l, k)
                                - space.basis_vector(l, k, i, j)
                            )
    return space, rows


class _Decomposition:
    """Quotient coordinates of O_E^N by a relation row span."""

    def __init__(self, space, rows):
        self.space = space
        matrix = RingMatrix(space.field, [row.coeffs for row in rows])
        self.dec = smith_normal_form(matrix, track_left=False)
        self.exponents = self.dec.exponents
        self.free_slots = [t for t, e in enumerate(self.exponents) if e == INF]
        self.free_slots += list(range(len(self.exponents), space.size))

    @property
    def free_rank(self):
        return len(self.free_slots)

    def free_coordinates(self, flat):
        """Image of basis class `flat` in the free part of the quotient."""
        row = self.dec.V.rows[flat]
        return [row[s] for s in self.free_slots]


def _chain_indices(space, j, k):
    """Flat indices of C_1, ..., C_n with C_i = e_{ij} (x) e'_{l(i)k},
    l(i) = n + 2 - i cyclically (0-based: l0 = (n - i0) mod n)."""
    n = space.n
    return [space.index(i0, j, (n - i0) % n, k) for i0 in range(n)]


def _eligible_pairs(signature, kind):
    p, q = signature
    r = p + q
    if kind == "A":
        return [(j, k) for j in range(r) for k in range(r) if (j < p) != (k < p)]
    return [(j, k) for j in range(r) for k in range(r)]


@dataclass
class QuotientStructure:
    """Computed shape of (plain (x) dual) / relations, with its audit trail."""

    signature: tuple
    kind: str
    letters: tuple
    free_rank: int
    expected_free_rank: int
    exponents: list
    eligible_pairs: list
    chains: list
    violations: list = dataclass_field(default_factory=list)

    @property
    def consistent(self):
        return not self.violations


def quotient_structure(descriptor, signature, kind, letters=None):
    """Quotient of the tensor module by the x- and u-relations.

    Validates the predicted structure: the quotient is O_E-free, one
    line per eligible (j, k) with the chain classes equal from C_2 on
    and C_1 = pi C_2, every other class zero, and the surviving lines
    independent.
    """
    if kind not in ("A", "C"):
        raise ValueError(f"kind must be 'A' or 'C', got {kind!r}")
    if kind == "C" and signature[1] != 0:
        raise ValueError("symplectic signature must be (r, 0)")
    _check_action_compatibility(descriptor)
    if letters is None:
        letters = find_test_letters(descriptor, "strict_2n" if kind == "A" else "orbit_n")
    plain, dual = build_module_pair(descriptor, signature)
    space, rows = relation_generators(plain, dual, letters)
    dec = _Decomposition(space, rows)
    n = space.n
    pairs = _eligible_pairs(signature, kind)
    expected_rank = len(pairs)

    violations = []
    if dec.free_rank != expected_rank:
        violations.append(
            f"free rank {dec.free_rank}, predicted {expected_rank}"
        )
    torsion = [e for e in dec.exponents if e != INF and e > 0]
    if torsion:
        violations.append(f"unexpected torsion exponents {torsion}")

    chains = []
    survivor_flats = set()
    pi = LocalSeriesElement.pi_power(space.field, 1)
    for (j, k) in pairs:
        chain = _chain_indices(space, j, k)
        survivor_flats.update(chain)
        coords = [dec.free_coordinates(flat) for flat in chain]
        for i0 in range(2, n):
            for a, b in zip(coords[i0], coords[1]):
                if not a.agrees_with(b):
                    violations.append(
                        f"chain ({j},{k}): class {i0 + 1} differs from class 2"
                    )
                    break
        tail = coords[1] if n > 1 else coords[0]
        if n > 1:
            for a, b in zip(coords[0], tail):
                if not a.agrees_with(pi * b):
                    violations.append(f"chain ({j},{k}): twist C_1 = pi C_2 fails")
                    break
        if all(a.is_zero for a in tail):
            violations.append(f"chain ({j},{k}): surviving class vanishes")
        chains.append(((j, k), chain))

    for flat in range(space.size):
        if flat in survivor_flats:
            continue
        if not all(a.is_zero for a in dec.free_coordinates(flat)):
            i, j, l, k = space.unpack(flat)
            violations.append(
                f"class e_({i + 1}{j + 1}) (x) e'_({l + 1}{k + 1}) should die but survives"
            )

    if expected_rank and not violations:
        basis = RingMatrix(
            space.field,
            [dec.free_coordinates(chain[-1]) for (_, chain) in chains],
        )
        bdec = smith_normal_form(basis, track_left=False)
        if any(e != 0 for e in bdec.exponents):
            violations.append("surviving lines are not an O_E-basis of the quotient")

    return QuotientStructure(
        signature=signature,
        kind=kind,
        letters=letters,
        free_rank=dec.free_rank,
        expected_free_rank=expected_rank,
        exponents=list(dec.exponents),
        eligible_pairs=pairs,
        chains=chains,
        violations=violations,
    )


@dataclass
class ImageExponentReport:
    """Image-ideal exponent at one place, with per-chain profiles."""

    signature: tuple
    kind: str
    exponent: int
    expected: int
    dim: int
    multiplier: int
    free_rank: int
    chain_profiles: list
    violations: list = dataclass_field(default_factory=list)

    @property
    def consistent(self):
        return not self.violations and self.exponent == self.expected


def image_exponent(descriptor, signature, kind, letters=None):
    """pi-exponent of the image ideal after symmetrization.

    Adds the swap relations to the x- and u-relations, then reads off
    the valuation profile of each merged chain against its primitive
    class.  The expected total is (discriminant multiplier) x (number
    of unordered eligible pairs).
    """
    if kind not in ("A", "C"):
        raise ValueError(f"kind must be 'A' or 'C', got {kind!r}")
    p, q = signature
    r = p + q
    if kind == "A" and p != q:
        raise SignatureMismatch(
            f"image-ideal count needs a balanced signature, got ({p},{q})"
        )
    if kind == "C" and q != 0:
        raise ValueError("symplectic signature must be (r, 0)")
    _check_action_compatibility(descriptor)
    if letters is None:
        letters = find_test_letters(descriptor, "strict_2n" if kind == "A" else "orbit_n")

    dim = (r * r) // 4 if kind == "A" else r * (r + 1) // 2
    multiplier = discriminant_report(descriptor).multiplier

    plain, dual = build_module_pair(descriptor, signature)
    space, rows = relation_generators(plain, dual, letters, include_swap=True)
    dec = _Decomposition(space, rows)

    if kind == "A":
        reps = [(j, k) for j in range(p) for k in range(p, r)]
    else:
        reps = [(j, k) for j in range(r) for k in range(j, r)]

    violations = []
    if dec.free_rank != len(reps):
        violations.append(
            f"symmetrized free rank {dec.free_rank}, predicted {len(reps)}"
        )
    torsion = [e for e in dec.exponents if e != INF and e > 0]
    if torsion:
        violations.append(f"unexpected torsion exponents {torsion}")

    exponent = 0
    profiles = []
    for (j, k) in reps:
        chain = _chain_indices(space, j, k)
        coords = [dec.free_coordinates(flat) for flat in chain]
        vals = []
        for i0, y in enumerate(coords):
            nonzero = [series_valuation(a) for a in y if not a.is_zero]
            if not nonzero:
                violations.append(f"chain ({j},{k}): class {i0 + 1} vanishes")
                vals.append(None)
            else:
                vals.append(min(nonzero))
        if any(v is None for v in vals):
            profiles.append(((j, k), vals))
            continue
        base = min(vals)
        profile = [v - base for v in vals]
        # proportionality: consecutive classes span the same line
        for i0 in range(1, len(coords)):
            y, z = coords[i0 - 1], coords[i0]
            for t in range(len(y)):
                for s in range(t + 1, len(y)):
                    if not (y[t] * z[s]).agrees_with(y[s] * z[t]):
                        violations.append(
                            f"chain ({j},{k}): classes {i0} and {i0 + 1} not proportional"
                        )
                        break
                else:
                    continue
                break
        exponent += sum(profile)
        profiles.append(((j, k), profile))

    return ImageExponentReport(
        signature=signature,
        kind=kind,
        exponent=exponent,
        expected=multiplier * dim,
        dim=dim,
        multiplier=multiplier,
        free_rank=dec.free_rank,
        chain_profiles=profiles,
        violations=violations,
    )


# -- global rank lemma --------------------------------------------------------


def _omega_data(discriminant):
    """Multiplication data for Z[omega] of the given discriminant:
    omega^2 = t0 + t1 omega."""
    if discriminant % 4 == 0:
        return discriminant // 4, 0
    if discriminant % 4 == 1:
        return (discriminant - 1) // 4, 1
    raise ValueError(f"{discriminant} is not a quadratic discriminant")


def _qmul(a, b, t0, t1):
    """(a0 + a1 omega)(b0 + b1 omega) in Z[omega]."""
    return (
        a[0] * b[0] + a[1] * b[1] * t0,
        a[0] * b[1] + a[1] * b[0] + a[1] * b[1] * t1,
    )


def _qconj(a, t1):
    """a0 + a1 omega -> a0 + a1 (t1 - omega)."""
    return (a[0] + a[1] * t1, -a[1])


def _qnorm(a, t0, t1):
    n = _qmul(a, _qconj(a, t1), t0, t1)
    assert n[1] == 0
    return n[0]


@dataclass
class GlobalRankReport:
    """Free rank, torsion, and determinant-line probes of (W (x) W) / R."""

    signature: tuple
    discriminant: int
    free_rank: int
    expected_free_rank: int
    torsion_divisors: list
    torsion_annihilated: bool
    torsion_order_matches: bool
    probe_left: int
    probe_right: int
    normalizer_exists: bool
    expected_normalizer: bool
    violations: list = dataclass_field(default_factory=list)

    @property
    def consistent(self):
        return (
            not self.violations
            and self.free_rank == self.expected_free_rank
            and self.torsion_annihilated
            and self.torsion_order_matches
            and self.normalizer_exists == self.expected_normalizer
        )


def global_rank_lemma(p, q, discriminant):
    """Rank and normalizer count for (W (x)_{O_F} W) / R over Z[omega].

    W = O_F^(p+q) with i(beta) = diag(beta 1_p, conj(beta) 1_q); R is
    the O_F-span of i(beta)u (x) v - u (x) i(conj(beta))v and of
    u (x) v - v (x) u.  The quotient is free of O_F-rank pq on the
    mismatched classes, with each matched class contributing torsion
    killed by the discriminant.  A determinant normalizer exists
    exactly for balanced signatures, probed by the action of
    diag(1 + omega, 1, ..., 1) on each block.
    """
    if discriminant >= 0:
        raise ValueError("expected the discriminant of an imaginary quadratic order")
    if p < 0 or q < 0:
        raise ValueError("signature must be nonnegative")
    t0, t1 = _omega_data(discriminant)
    r = p + q
    if r == 0:
        return GlobalRankReport(
            signature=(p, q),
            discriminant=discriminant,
            free_rank=0,
            expected_free_rank=0,
            torsion_divisors=[],
            torsion_annihilated=True,
            torsion_order_matches=True,
            probe_left=0,
            probe_right=0,
            normalizer_exists=True,
            expected_normalizer=True,
        )

    N = 2 * r * r
    omega = (0, 1)
    one = (1, 0)
    gamma = (-t1, 2)  # omega - conj(omega)

    def put(row, cls, lam):
        row[2 * cls] += lam[0]
        row[2 * cls + 1] += lam[1]

    def omega_times(lam):
        return _qmul(omega, lam, t0, t1)

    rows = []
    for i in range(r):
        for j in range(r):
            cls = i * r + j
            matched = (i < p) == (j < p)
            if matched:
                lam = gamma if i < p else (-gamma[0], -gamma[1])
                for coeff in (lam, omega_times(lam)):
                    row = [0] * N
                    put(row, cls, coeff)
                    rows.append(row)
            if i < j:
                for coeff in (one, omega):
                    row = [0] * N
                    put(row, cls, coeff)
                    put(row, j * r + i, (-coeff[0], -coeff[1]))
                    rows.append(row)

    dec = integer_smith_normal_form(rows)
    divisors = dec.divisors
    free_slots = [t for t, d in enumerate(divisors) if d == 0]
    free_slots += list(range(len(divisors), N))
    free_rank = len(free_slots)
    expected_free = 2 * p * q

    torsion = [d for d in divisors if d > 1]
    absD = -discriminant
    annihilated = all(absD % d == 0 for d in torsion)
    matched_unordered = p * (p + 1) // 2 + q * (q + 1) // 2
    order = 1
    for d in torsion:
        order *= d
    order_matches = order == absD**matched_unordered

    violations = []
    Vinv = integer_inverse(dec.V)
    free_set = set(free_slots)

    def probe(block):
        """|det| exponent of diag(1 + omega, 1, ...) on the given block."""
        entries = []
        for i in range(r):
            special = (i == 0 and p > 0) if block == "left" else (i == p and q > 0)
            entries.append((1, 1) if special else one)
        # the probe is diagonal on classes: (i, j) scales by entries[i]*entries[j]
        A = [[0] * N for _ in range(N)]
        for i in range(r):
            for j in range(r):
                cls = i * r + j
                lam = _qmul(entries[i], entries[j], t0, t1)
                # right-action 2x2 block of multiplication by lam on Z + Z omega
                A[2 * cls][2 * cls] = lam[0]
                A[2 * cls][2 * cls + 1] = lam[1]
                A[2 * cls + 1][2 * cls] = lam[1] * t0
                A[2 * cls + 1][2 * cls + 1] = lam[0] + lam[1] * t1
        M = _imatmul(_imatmul(Vinv, A), dec.V)
        for t in range(N):
            if t in free_set:
                continue
            if any(M[t][s] for s in free_slots):
                violations.append("probe does not preserve the free part")
                break
        F = [[M[t][s] for s in free_slots] for t in free_slots]
        d = abs(integer_det(F)) if F else 1
        base = abs(_qnorm((1, 1), t0, t1))
        e = 0
        while d > 1 and d % base == 0:
            d //= base
            e += 1
        if d != 1:
            violations.append("probe determinant is not a power of N(1 + omega)")
            return -1
        return e

    a = probe("left")
    b = probe("right")
    if p * q and (a != q or b != p):
        violations.append(f"probe exponents ({a}, {b}) differ from ({q}, {p})")
    exists = (a == b) if p * q else (p == q)

    report = GlobalRankReport(
        signature=(p, q),
        discriminant=discriminant,
        free_rank=free_rank,
        expected_free_rank=expected_free,
        torsion_divisors=torsion,
        torsion_annihilated=annihilated,
        torsion_order_matches=order_matches,
        probe_left=a,
        probe_right=b,
        normalizer_exists=exists,
        expected_normalizer=p == q,
        violations=violations,
    )
    return report


def _imatmul(A, B):
    BT = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in BT] for row in A]
