"""The Dirichlet energy form, the reproducing kernel family, effective
resistance, Gram matrices, projections onto Dirac spans, and the norms of
the bounded-function algebra.

Every finite-energy class is stored by its grounded representative (value 0
at the origin); equality of classes is equality of grounded representatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NetworkMismatch, NotPositiveDefinite, OriginInF, UnknownVertex
from .network import Network, VertexFunction, laplacian_apply
from .numkernel import SymMatrix, gram_schmidt_V, spd_solve, sqrtm_psd


@dataclass(frozen=True)
class EnergyVector:
    """Grounded representative of a finite-energy class, with cached energy."""

    net: Network
    values: np.ndarray
    energy: float

    def __getitem__(self, x):
        return self.values[self.net.index(x)]

    def as_function(self):
        return VertexFunction(self.net, self.values)

    def __add__(self, other):
        _same_net(self, other)
        return ground(self.net, self.values + other.values)

    def __sub__(self, other):
        _same_net(self, other)
        return ground(self.net, self.values - other.values)

    def __mul__(self, scalar):
        return ground(self.net, self.values * scalar)

    __rmul__ = __mul__


def _same_net(u, v):
    if u.net is not v.net:
        raise NetworkMismatch("operands live on different networks")


def _edge_energy(net, uvals, vvals):
    du = np.conj(uvals[net.edge_i] - uvals[net.edge_j])
    dv = vvals[net.edge_i] - vvals[net.edge_j]
    return np.sum(net.edge_w * du * dv)


def ground(net, values):
    """Build an EnergyVector: subtract the origin value, compute the energy."""
    vals = np.asarray(values, dtype=complex if np.iscomplexobj(values) else float)
    vals = vals - vals[net.origin_index]
    if np.iscomplexobj(vals) and not np.any(vals.imag):
        vals = vals.real
    vals.setflags(write=False)
    energy = float(np.real(_edge_energy(net, vals, vals)))
    return EnergyVector(net, vals, energy)


def zero_vector(net):
    return ground(net, np.zeros(net.n))


def delta(net, x):
    """Dirac mass at x as a grounded energy vector (energy = c(x) for x != o)."""
    vals = np.zeros(net.n)
    vals[net.index(x)] = 1.0
    return ground(net, vals)


def energy_form(u, v):
    """Dirichlet inner product <u, v> = sum over edges of c (u(x)-u(y))~ (v(x)-v(y))."""
    _same_net(u, v)
    out = _edge_energy(u.net, u.values, v.values)
    return complex(out)


def _grounded_cholesky(net):
    """Cholesky factor of the Laplacian with the origin row/column deleted."""
    with net._lock:
        if net._grounded_cho is None:
            keep = x_indices(net)
            L = net.laplacian_matrix()[np.ix_(keep, keep)]
            net._grounded_cho = scipy.linalg.cho_factor(L)
        return net._grounded_cho


def x_indices(net):
    """Dense indices of X = G \\ {o}, in vertex order."""
    o = net.origin_index
    return [i for i in range(net.n) if i != o]


def energy_kernel(net, x):
    """The reproducing element v_x: solves the dipole equation
    laplacian(v_x) = delta_x - delta_o with v_x(o) = 0.

    Returns the zero vector for x = o.
    """
    xi = net.index(x)
    if xi == net.origin_index:
        return zero_vector(net)
    with net._lock:
        cached = net._kernel_cache.get(xi)
    if cached is not None:
        return cached
    keep = x_indices(net)
    rhs = np.zeros(len(keep))
    rhs[keep.index(xi)] = 1.0
    sol = scipy.linalg.cho_solve(_grounded_cholesky(net), rhs)
    vals = np.zeros(net.n)
    vals[keep] = sol
    vec = ground(net, vals)
    with net._lock:
        net._kernel_cache[xi] = vec
    return vec


def effective_resistance(net, x):
    """R(x) = v_x(x) = E(v_x): voltage drop for a unit current from x to o."""
    xi = net.index(x)
    if xi == net.origin_index:
        raise UnknownVertex("effective resistance to the origin itself is undefined")
    return float(np.real(energy_kernel(net, x)[x]))


@dataclass
class GramMatrix:
    """V_F with V_xy = <v_x, v_y>, over an ordered vertex subset F of X."""

    F: tuple
    V: SymMatrix
    _sqrt: SymMatrix = field(default=None, repr=False)
    _cho: tuple = field(default=None, repr=False)

    def sqrt(self):
        if self._sqrt is None:
            self._sqrt = sqrtm_psd(self.V)
        return self._sqrt

    def cholesky(self):
        if self._cho is None:
            try:
                self._cho = scipy.linalg.cho_factor(self.V.a)
            except np.linalg.LinAlgError as exc:
                raise NotPositiveDefinite(str(exc)) from None
        return self._cho

    def orthonormalizer(self):
        """Upper-triangular C with C* V C = I (kernel-vector Gram-Schmidt)."""
        return gram_schmidt_V(self.V)


def gram_matrix(net, F):
    """Gram matrix of the energy kernel over F, cross-checked against the
    reproducing identity V_xy = v_x(y) entrywise."""
    F = tuple(F)
    if not F or len(set(F)) != len(F):
        raise ValueError("F must be a nonempty list of distinct vertices")
    idx = [net.index(x) for x in F]
    if net.origin_index in idx:
        raise OriginInF("the origin cannot appear in F")
    kernels = [energy_kernel(net, x) for x in F]
    m = len(F)
    V = np.empty((m, m))
    for j, vy in enumerate(kernels):
        V[:, j] = vy.values[idx].real
    for i, vx in enumerate(kernels):
        for j in range(i, m):
            form = np.real(energy_form(vx, kernels[j]))
            if abs(form - V[i, j]) > 1e-9 * max(1.0, abs(form)):
                raise ArithmeticError(
                    f"Gram entry ({F[i]!r},{F[j]!r}): inner product {form!r} "
                    f"disagrees with kernel value {V[i, j]!r}"
                )
    gram = GramMatrix(F, SymMatrix.from_array((V + V.T) / 2, tol=1e-9))
    gram.cholesky()  # positive definiteness is an invariant of the type
    return gram


def full_gram(net):
    """Gram matrix over all of X in vertex order, cached on the network."""
    with net._lock:
        cached = net._gram_full
    if cached is None:
        cached = gram_matrix(net, [net.vertices[i] for i in x_indices(net)])
        with net._lock:
            net._gram_full = cached
    return cached


def delta_gram(net, F):
    """Matrix of <delta_x, delta_y>: the principal Laplacian submatrix on F."""
    idx = [net.index(x) for x in F]
    sub = net.laplacian_matrix()[np.ix_(idx, idx)]
    return SymMatrix.from_array(sub)


def reproducing_check(net, x, u):
    """|<v_x, u> - u(x)| for the grounded representative of u."""
    vx = energy_kernel(net, x)
    return float(abs(energy_form(vx, u) - u.values[net.index(x)]))


def lap_pairing_check(net, x, u):
    """|<delta_x, u> - (laplacian u)(x)|."""
    dx = delta(net, x)
    lap = laplacian_apply(net, u.as_function())
    return float(abs(energy_form(dx, u) - lap.values[net.index(x)]))


def fin_projection(net, u, F):
    """Energy-orthogonal projection of u onto span{delta_x : x in F}.

    With F = all vertices the Dirac span is (n-1)-dimensional (delta_o is a
    combination of the others modulo constants), so the origin is dropped.
    """
    F = list(F)
    idx = [net.index(x) for x in F]
    if set(idx) == set(range(net.n)):
        F = [x for x in F if net.index(x) != net.origin_index]
        idx = [net.index(x) for x in F]
    G = delta_gram(net, F)
    lap = laplacian_apply(net, u.as_function()).values
    rhs = lap[idx]
    coeffs = spd_solve(G, rhs)
    vals = np.zeros(net.n, dtype=coeffs.dtype)
    vals[idx] = coeffs
    return ground(net, vals)


def sup_norm(u):
    """Grounded sup norm: sup_x |u(x) - u(o)|."""
    return float(np.abs(u.values).max())


def banach_norm(u):
    """||u||_A = sup norm + energy norm."""
    return sup_norm(u) + float(np.sqrt(u.energy))


@dataclass(frozen=True)
class ProductEstimate:
    product_energy_sq: float
    bound: float

    @property
    def slack(self):
        return self.bound - self.product_energy_sq


def pointwise_product(u1, u2):
    """Grounded pointwise product with the product-energy estimate

        ||u1 u2||_E^2 <= ||u2^2||_inf ||u1||_E^2
                         + 2 ||u1||_inf ||u2||_inf |<u1,u2>|
                         + ||u1^2||_inf ||u2||_E^2.
    """
    _same_net(u1, u2)
    prod = ground(u1.net, u1.values * u2.values)
    s1, s2 = sup_norm(u1), sup_norm(u2)
    bound = (
        s2**2 * u1.energy
        + 2 * s1 * s2 * abs(energy_form(u1, u2))
        + s1**2 * u2.energy
    )
    est = ProductEstimate(prod.energy, float(bound))
    if est.product_energy_sq > est.bound + 1e-9:
        raise ArithmeticError(
            f"product energy {est.product_energy_sq} exceeds its bound {est.bound}"
        )
    return prod, est
