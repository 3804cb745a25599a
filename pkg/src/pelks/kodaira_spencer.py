"""The connecting morphism of the fiber embedding, made numerical.

The chain runs: cocycle of the period map (how fiber coordinates move
with the domain point), w-vectors (the cotangent vectors representing
coordinate functionals through the polarization form), the map phi
sending a fiber 1-form to a fiber-form-valued domain 1-form, and the
quadratic contraction psi whose block determinants multiply to a
constant c.  |c| times the canonical domain norm reproduces a power of
the lattice norm; that comparison is the whole point of the module.

Conventions repeated from the lattice layer: fiber coordinates flatten
an n x r matrix row-major, the column blocks j < r/2 and j >= r/2 of
the two-block model are the plain and conjugate embeddings, and all
form extensions are R-bilinear.  Domain coordinates are the full
(r/2) x (r/2) matrix Z for the two-block model and the upper triangle
of the symmetric r x r matrix for the classical model.

The defining equation of a w-vector: the antilinear part of
v -> 2 pi i E_mu(w, v) equals the antilinear part of the R-linear
extension of the target functional.  Both sides are determined by
their values on the standard complex basis, which is how the solver
sets up its square real system.
"""

from dataclasses import dataclass
from math import pi

import numpy as np

from .domains import HermitianPoint, SiegelPoint, petersson_norm, random_point
from .lattices import RiemannForm, build_lattice, faltings_norm
from .pel_modules import SignatureMismatch


class SingularPairing(Exception):
    """The pairing matrix of the w-solve is numerically singular."""


def domain_coordinates(emb):
    """Coordinate labels of the domain tangent directions.

    Two-block model: all (k, j) entries of the (r/2) x (r/2) matrix.
    Classical model: the pairs (a, b) with a <= b of the symmetric
    r x r matrix, lexicographic.
    """
    if emb.kind == "A":
        half = emb.r // 2
        return tuple((k, j) for k in range(half) for j in range(half))
    return tuple((a, b) for a in range(emb.r) for b in range(a, emb.r))


def _domain_index(emb):
    return {lab: t for t, lab in enumerate(domain_coordinates(emb))}


def embed_element(emb, point, label):
    """Image in C^{nr} of one rational element at the domain point."""
    if emb.kind == "A":
        z = point.matrix
        half = emb.r // 2
        top = np.vstack([z, np.eye(half)])
        top_c = np.vstack([z.T, np.eye(half)])
        x = np.asarray(label, dtype=complex)
        return np.hstack([x @ top, x.conj() @ top_c]).ravel()
    part, x = label
    if part == "m":
        return (np.asarray(x) @ point.matrix).ravel()
    return np.asarray(x, dtype=complex).ravel()


@dataclass(frozen=True)
class CocycleJacobian:
    tensor: np.ndarray
    domain_labels: tuple
    elements: tuple


def cocycle_jacobian(emb, elements=None):
    """Analytic Jacobian of the embedding coordinates per element.

    tensor[g, a, t] = d lambda_a(element g) / d (domain coordinate t).
    The embedding is affine in the domain point, so the tensor does not
    depend on where it is taken; the numeric twin below confirms that.
    """
    if elements is None:
        elements = _default_elements(emb)
    labels = domain_coordinates(emb)
    idx = {lab: t for t, lab in enumerate(labels)}
    n, r = emb.n, emb.r
    out = np.zeros((len(elements), n * r, len(labels)), dtype=complex)
    if emb.kind == "A":
        half = r // 2
        for g, x in enumerate(elements):
            x = np.asarray(x, dtype=complex)
            for i in range(n):
                for j in range(half):
                    for k in range(half):
                        out[g, i * r + j, idx[(k, j)]] = x[i, k]
                for j in range(half, r):
                    b = j - half
                    for c in range(half):
                        out[g, i * r + j, idx[(b, c)]] = np.conj(x[i, c])
        return CocycleJacobian(out, labels, tuple(elements))
    for g, lab in enumerate(elements):
        part, x = lab
        if part == "n":
            continue
        x = np.asarray(x)
        for i in range(n):
            for j in range(r):
                for a, b in labels:
                    val = 0.0
                    if j == b:
                        val += x[i, a]
                    if j == a and a != b:
                        val += x[i, b]
                    out[g, i * r + j, idx[(a, b)]] = val
    return CocycleJacobian(out, labels, tuple(elements))


def numeric_cocycle_jacobian(emb, point, elements=None, step=0.5, rotate=False):
    """Central-difference Jacobian at a point, optionally along i*h.

    The embedding is affine in the point, so the central difference is
    exact for any step and a large step avoids the 1/h amplification of
    rounding noise; the rotated direction checks holomorphy.  Keep the
    step below the spectral floor of Y so the offset points stay inside
    the domain.
    """
    if elements is None:
        elements = _default_elements(emb)
    labels = domain_coordinates(emb)
    h = step * (1j if rotate else 1.0)
    n, r = emb.n, emb.r
    out = np.zeros((len(elements), n * r, len(labels)), dtype=complex)
    for t, lab in enumerate(labels):
        if emb.kind == "A":
            half = r // 2
            e = np.zeros((half, half))
            e[lab[0], lab[1]] = 1.0
            plus = HermitianPoint(point.matrix + h * e)
            minus = HermitianPoint(point.matrix - h * e)
        else:
            a, b = lab
            e = np.zeros((r, r))
            e[a, b] = 1.0
            e[b, a] = 1.0
            plus = SiegelPoint(point.matrix + h * e)
            minus = SiegelPoint(point.matrix - h * e)
        for g, lab_el in enumerate(elements):
            diff = embed_element(emb, plus, lab_el) - embed_element(emb, minus, lab_el)
            out[g, :, t] = diff / (2 * h)
    return CocycleJacobian(out, labels, tuple(elements))


def _default_elements(emb):
    if emb.kind == "A":
        return tuple(emb.module_basis())
    basis = emb.module_basis()
    return tuple(("m", x.real) for x in basis) + tuple(("n", x.real) for x in basis)


@dataclass(frozen=True)
class CoordinateTarget:
    """Functional picking one matrix entry of a rational element.

    family "lin" reads entry (i, k) of the element itself, "conj" reads
    the conjugate entry; in the classical model only "lin" occurs and
    the entry is read from the m part.
    """

    family: str
    i: int
    k: int

    def value(self, label, kind):
        if kind == "A":
            x = np.asarray(label, dtype=complex)
            v = x[self.i, self.k]
            return np.conj(v) if self.family == "conj" else v
        part, x = label
        if part != "m":
            return 0.0
        return complex(np.asarray(x)[self.i, self.k])


def coordinate_targets(emb):
    if emb.kind == "A":
        half = emb.r // 2
        lin = [CoordinateTarget("lin", i, k) for i in range(emb.n) for k in range(half)]
        conj = [CoordinateTarget("conj", i, k) for i in range(emb.n) for k in range(half)]
        return tuple(lin + conj)
    return tuple(
        CoordinateTarget("lin", i, k) for i in range(emb.n) for k in range(emb.r)
    )


def solve_w_vector(lattice, form, values, cond_limit=1e12):
    """w with anti(2 pi i E_mu(w, .)) matching anti of the given functional.

    values are the functional's values on the lattice generators; the
    R-linear extension and its antilinear part are then determined.  The
    system is square (2nr real unknowns against nr complex equations on
    the standard basis) and uniquely solvable when the form pairs the
    two antiholomorphic halves nondegenerately.
    """
    dim = lattice.complex_dim
    f = lattice.basis_real_inv @ np.asarray(values, dtype=complex)
    gamma = 0.5 * (f[:dim] + 1j * f[dim:])
    k = form.extension
    mc = (pi * 1j) * (k[:, :dim].T + 1j * k[:, dim:].T)
    m_real = np.vstack([mc.real, mc.imag])
    s = np.linalg.svd(m_real, compute_uv=False)
    if s.min() <= 0 or s.max() / s.min() > cond_limit:
        raise SingularPairing(
            f"pairing condition number {s.max() / max(s.min(), 1e-300):.3e}"
        )
    rhs = np.concatenate([gamma.real, gamma.imag])
    sol = np.linalg.solve(m_real, rhs)
    return sol[:dim] + 1j * sol[dim:]


def solve_w_vectors(lattice, form):
    """All coordinate-target w-vectors, keyed by target."""
    emb = lattice.embedding
    out = {}
    for target in coordinate_targets(emb):
        values = np.array(
            [target.value(lab, emb.kind) for lab in lattice.labels], dtype=complex
        )
        out[target] = solve_w_vector(lattice, form, values)
    return out


def closed_form_w(emb, mu, target):
    """Predicted w: mu e_{i, k + r/2} / 2 pi i for the plain family of the
    two-block model, mu e_{ik} / 2 pi i for the conjugate family and for
    the classical model."""
    mu = np.asarray(mu, dtype=complex) * np.eye(emb.n) if np.isscalar(mu) else np.asarray(mu, dtype=complex)
    n, r = emb.n, emb.r
    if emb.kind == "A" and target.family == "lin":
        col = target.k + r // 2
    else:
        col = target.k
    w = np.zeros(n * r, dtype=complex)
    for l in range(n):
        w[l * r + col] = mu[l, target.i] / (2j * pi)
    return w


def antilinear_defect(lattice, form, values, w, trials=8, seed=0):
    """Max deviation of anti(2 pi i E(w, .)) from anti(target) on random v."""
    dim = lattice.complex_dim
    f = lattice.basis_real_inv @ np.asarray(values, dtype=complex)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        # f extended R-linearly, then the antilinear half of both sides
        coords = np.concatenate([v.real, v.imag])
        coords_i = np.concatenate([-v.imag, v.real])
        fv = coords @ f
        fiv = coords_i @ f
        gv = 2j * pi * form.pair_vectors(w, v)
        giv = 2j * pi * form.pair_vectors(w, 1j * v)
        lhs = 0.5 * (gv + 1j * giv)
        rhs = 0.5 * (fv + 1j * fiv)
        worst = max(worst, abs(lhs - rhs))
    return worst


def trace_identity_defect(lattice):
    """Two-route check of the rational trace identity.

    Route one: E_I(e_{i, k + r/2}, beta) equals tr_{F/Q} of entry (i, k)
    of beta, for every generator beta.  Route two: solving the w
    equation against that trace functional returns exactly the embedded
    image of e_{i, k + r/2} divided by 2 pi i.
    """
    emb = lattice.embedding
    if emb.kind != "A":
        raise ValueError("the trace identity lives on the two-block model")
    half = emb.r // 2
    form = RiemannForm(lattice, 1.0)
    worst = 0.0
    for i in range(emb.n):
        for k in range(half):
            unit = np.zeros((emb.n, emb.r), dtype=complex)
            unit[i, k + half] = 1.0
            traces = np.array(
                [lab[i, k] + np.conj(lab[i, k]) for lab in lattice.labels]
            )
            for lab, tr in zip(lattice.labels, traces):
                lhs = form.rational_pair(unit, lab)
                worst = max(worst, abs(lhs - tr))
            w = solve_w_vector(lattice, form, traces)
            expected = embed_element(emb, lattice.point, unit) / (2j * pi)
            worst = max(worst, float(np.abs(w - expected).max()))
    return worst


@dataclass(frozen=True)
class PhiTensor:
    """phi as a tensor: tensor[a, b, t] is the dz_b coefficient of the
    dZ_t-component of phi(dz_a)."""

    tensor: np.ndarray
    domain_labels: tuple
    kind: str
    n: int
    r: int


def assemble_phi(emb, ws):
    idx = _domain_index(emb)
    n, r = emb.n, emb.r
    dims = n * r
    tensor = np.zeros((dims, dims, len(idx)), dtype=complex)
    if emb.kind == "A":
        half = r // 2
        for i in range(n):
            for j in range(half):
                for k in range(half):
                    tensor[i * r + j, :, idx[(k, j)]] += ws[CoordinateTarget("lin", i, k)]
            for j in range(half, r):
                b = j - half
                for k in range(half):
                    tensor[i * r + j, :, idx[(b, k)]] += ws[CoordinateTarget("conj", i, k)]
    else:
        for i in range(n):
            for j in range(r):
                for c in range(r):
                    t = idx[(min(c, j), max(c, j))]
                    tensor[i * r + j, :, t] += ws[CoordinateTarget("lin", i, c)]
    return PhiTensor(tensor, tuple(domain_coordinates(emb)), emb.kind, n, r)


def matched_vanishing_defect(phi):
    """Both-plain and both-conjugate tensor slots must vanish."""
    if phi.kind != "A":
        raise ValueError("matched vanishing concerns the two-block model")
    n, r = phi.n, phi.r
    half = r // 2
    worst = 0.0
    for i in range(n):
        for j in range(half):
            for l in range(n):
                for m in range(half):
                    worst = max(worst, np.abs(phi.tensor[i * r + j, l * r + m, :]).max())
                    worst = max(
                        worst,
                        np.abs(
                            phi.tensor[i * r + j + half, l * r + m + half, :]
                        ).max(),
                    )
    return float(worst)


@dataclass(frozen=True)
class PsiReport:
    value: complex
    modulus: float
    off_block_defect: float


def psi_constant(phi, emb, signature=None):
    """Product of the block determinants of the contraction.

    Two-block model: block (k, j) pairs dz_{ij} against dz_{l, k+r/2}
    at domain coordinate (k, j); defined only for balanced signatures.
    Classical model: block (a, b), a <= b, pairs dz_{ib} against
    dz_{la} at coordinate (a, b).  Slots of those tensor rows at other
    domain coordinates are reported as the off-block defect.
    """
    n, r = emb.n, emb.r
    idx = _domain_index(emb)
    value = 1.0 + 0j
    off = 0.0
    if emb.kind == "A":
        if signature is None or signature[0] != signature[1]:
            raise SignatureMismatch(
                f"the contraction needs a balanced signature, got {signature}"
            )
        half = r // 2
        for k in range(half):
            for j in range(half):
                t = idx[(k, j)]
                block = np.empty((n, n), dtype=complex)
                for l in range(n):
                    for i in range(n):
                        row = phi.tensor[i * r + j, l * r + k + half, :]
                        block[l, i] = row[t]
                        mask = np.ones(len(idx), dtype=bool)
                        mask[t] = False
                        off = max(off, np.abs(row[mask]).max() if mask.any() else 0.0)
                value *= np.linalg.det(block)
    else:
        for a in range(r):
            for b in range(a, r):
                t = idx[(a, b)]
                block = np.empty((n, n), dtype=complex)
                for l in range(n):
                    for i in range(n):
                        row = phi.tensor[i * r + b, l * r + a, :]
                        block[l, i] = row[t]
                        mask = np.ones(len(idx), dtype=bool)
                        mask[t] = False
                        off = max(off, np.abs(row[mask]).max() if mask.any() else 0.0)
                value *= np.linalg.det(block)
    return PsiReport(complex(value), float(abs(value)), float(off))


def psi_modulus_closed_form(emb, mu):
    mu = np.asarray(mu, dtype=complex) * np.eye(emb.n) if np.isscalar(mu) else np.asarray(mu, dtype=complex)
    det_mu = abs(np.linalg.det(mu))
    if emb.kind == "A":
        blocks = (emb.r // 2) ** 2
    else:
        blocks = emb.r * (emb.r + 1) // 2
    return float((det_mu / (2 * pi) ** emb.n) ** blocks)


@dataclass(frozen=True)
class MetricReport:
    ratios: tuple
    max_defect: float
    exponent: int


def metric_identity_check(emb, mu, signature=None, samples=20, seed=0):
    """Sample the identity |c| . ||d tau|| = (lattice norm)^{k0}.

    k0 is r/2 for the two-block model and r + 1 for the classical one;
    the report carries every sampled ratio so a failure shows its shape.
    """
    rng = np.random.default_rng(seed)
    if emb.kind == "A":
        g = emb.r // 2
        k0 = emb.r // 2
        if signature is None:
            signature = (g, g)
    else:
        g = emb.r
        k0 = emb.r + 1
    ratios = []
    for _ in range(samples):
        point = random_point(emb.kind, g, rng)
        lat = build_lattice(point, emb)
        form = RiemannForm(lat, mu)
        ws = solve_w_vectors(lat, form)
        phi = assemble_phi(emb, ws)
        psi = psi_constant(phi, emb, signature)
        pet = petersson_norm(point, emb.n)
        fal = faltings_norm(lat)
        ratios.append(psi.modulus * pet / fal**k0)
    arr = np.asarray(ratios)
    return MetricReport(tuple(float(x) for x in arr), float(np.abs(arr - 1).max()), k0)
