"""The universal connection model over a reductive splitting.

For an algebra of dimension d, the context carries odd generators w[a]
(the connection components) and even generators W[a] (the curvature
components).  The differential is fixed on generators by the structure
equation solved for d(w[a]) and by the resulting Bianchi image on W[a]:

    d(w[a]) = W[a] - 1/2 sum c[a,b,c] w[b] w[c]
    d(W[a]) = sum c[a,b,c] W[b] w[c]

d.d = 0 on generators is then equivalent to the Jacobi identity, which makes
it a cheap independent soundness probe; ``d_squared_witness`` exposes it.
Everything downstream (sub-connection, sub-curvature, the covariant
derivative of the tangential part, and the one-parameter curvature family)
is derived from these generators, so every identity checked here is an
exact polynomial statement.
"""

from __future__ import annotations

from functools import cached_property

from .algebra import (
    Context,
    ContractError,
    Derivation,
    Generator,
    GradedElement,
    HALF,
    Monomial,
    ONE,
    _acc_add,
)
from .lie import LieAlgebra, LieValuedForm, ReductiveSplit, bracket, project

__all__ = ["UniversalSetup"]


class UniversalSetup:
    """Free model of a connection with curvature, split along a subalgebra.

    The splitting defaults to the empty subalgebra, in which case the
    sub-connection vanishes and the tangential part is the whole connection
    (the classical one-bundle limit).
    """

    def __init__(self, algebra: LieAlgebra, split: ReductiveSplit = None):
        if split is None:
            split = ReductiveSplit.from_h(algebra.dim, ())
        if set(split.h) | set(split.p) != set(range(algebra.dim)) or set(split.h) & set(split.p):
            raise ContractError("split does not partition the basis")
        self.algebra = algebra
        self.split = split
        dim = algebra.dim

        gens = [Generator(a, 1, f"w[{a}]") for a in range(dim)]
        gens += [Generator(dim + a, 2, f"W[{a}]") for a in range(dim)]
        self.context = Context(gens)
        ctx = self.context

        self.connection = LieValuedForm(
            algebra, ctx, tuple(ctx.gen(a) for a in range(dim)), 1)
        self.curvature = LieValuedForm(
            algebra, ctx, tuple(ctx.gen(dim + a) for a in range(dim)), 2)

        images = {}
        acc_odd = [{Monomial((), (dim + a,), 0): ONE} for a in range(dim)]
        acc_even = [dict() for _ in range(dim)]
        for (a, b, c), v in algebra.structure.items():
            if b != c:
                if b < c:
                    _acc_add(acc_odd[a], Monomial((b, c), (), 0), -(v * HALF))
                else:
                    _acc_add(acc_odd[a], Monomial((c, b), (), 0), v * HALF)
            _acc_add(acc_even[a], Monomial((c,), (dim + b,), 0), v)
        for a in range(dim):
            images[a] = GradedElement(ctx, acc_odd[a])
            images[dim + a] = GradedElement(ctx, acc_even[a])
        self.d = Derivation(ctx, images, +1)

        self.sub_connection, self.tensor_form = project(split, self.connection)
        self._interior_cache = {}

    # -- derived forms ------------------------------------------------------

    def d_form(self, x: LieValuedForm) -> LieValuedForm:
        """Apply the differential componentwise."""
        return LieValuedForm(
            self.algebra, self.context,
            tuple(self.d(c) for c in x.components), x.degree + 1)

    def sub_covariant_d(self, x: LieValuedForm) -> LieValuedForm:
        """Covariant derivative along the sub-connection: d(x) + [psi, x]."""
        return self.d_form(x) + bracket(self.sub_connection, x)

    @cached_property
    def sub_curvature(self) -> LieValuedForm:
        """Curvature of the sub-connection; supported on the subalgebra."""
        psi = self.sub_connection
        return self.d_form(psi) + bracket(psi, psi).scale(HALF)

    @cached_property
    def covariant_d_tensor(self) -> LieValuedForm:
        """Covariant derivative of the tangential part of the connection."""
        return self.sub_covariant_d(self.tensor_form)

    @cached_property
    def tensor_bracket(self) -> LieValuedForm:
        return bracket(self.tensor_form, self.tensor_form)

    @cached_property
    def deformed_connection(self) -> LieValuedForm:
        """The 1-form family: sub-connection plus t times the tangential part."""
        return self.sub_connection + self.tensor_form.times_t(1)

    @cached_property
    def deformed_curvature(self) -> LieValuedForm:
        """Curvature of the deformed connection, by the structure equation."""
        w_t = self.deformed_connection
        return self.d_form(w_t) + bracket(w_t, w_t).scale(HALF)

    def deformed_curvature_expanded(self) -> LieValuedForm:
        """Same family assembled from the split pieces:
        sub-curvature + t * covariant-d + (t^2/2) [tensor, tensor]."""
        return (self.sub_curvature
                + self.covariant_d_tensor.times_t(1)
                + self.tensor_bracket.scale(HALF).times_t(2))

    def deformed_curvature_interpolated(self) -> LieValuedForm:
        """Same family as a straight-line interpolation:
        (1-t) * sub-curvature - (t(1-t)/2) [tensor, tensor] + t * curvature."""
        psi_c = self.sub_curvature
        tb_half = self.tensor_bracket.scale(HALF)
        return (psi_c - psi_c.times_t(1)
                - tb_half.times_t(1) + tb_half.times_t(2)
                + self.curvature.times_t(1))

    # -- equivariant derivations --------------------------------------------

    def interior(self, h_index: int) -> Derivation:
        """Contraction with the vertical direction of an h-basis element."""
        if h_index not in self.split.h:
            raise ContractError(f"index {h_index} is not in the subalgebra")
        cached = self._interior_cache.get(h_index)
        if cached is None:
            ctx = self.context
            cached = Derivation(ctx, {h_index: ctx.one()}, -1)
            self._interior_cache[h_index] = cached
        return cached

    def lie_derivative(self, h_index: int):
        """Cartan formula d(iota(x)) + iota(d(x)) along an h-basis element."""
        iota = self.interior(h_index)
        d = self.d

        def L(x: GradedElement) -> GradedElement:
            return d(iota(x)) + iota(d(x))

        return L

    # -- soundness probes ----------------------------------------------------

    def d_squared_witness(self):
        """First generator with d(d(gen)) != 0, or None when d.d = 0."""
        for g in self.context.generators:
            out = self.d(self.d(self.context.gen(g.gid)))
            if not out.is_zero:
                return g.label, out
        return None

    def bianchi_deformation_witness(self):
        """Nonzero part of d_H Omega(t) - t [Omega(t), tensor], if any."""
        omega_t = self.deformed_curvature
        diff = (self.sub_covariant_d(omega_t)
                - bracket(omega_t, self.tensor_form).times_t(1))
        if diff.is_zero:
            return None
        return diff.first_nonzero()

    def __repr__(self) -> str:
        return (f"UniversalSetup({self.algebra.name or 'custom'}, "
                f"h={self.split.h})")
