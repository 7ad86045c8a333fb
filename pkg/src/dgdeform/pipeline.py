"""The semiregularity pipeline: per-chart Koszul/extended local models, the
DGLAs controlling embedded deformations with their homotopy fiber, the local
cohomology sheaves carrying the cycle class, the operator-DGLA reductions
(never materialized: all cohomology statements route through evaluation at
the cycle class and the shifted-cokernel quasi-isomorphisms), and the
evaluation of the composed semiregularity map on tangent vectors and
obstruction classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .artin import (
    ArtinAlgebra,
    CohomologyContext,
    SmallExtension,
    TensorElt,
    curvilinear,
    lift_exists_bruteforce,
    obstruction_map,
)
from .dgla import (
    DGLAMorphism,
    DerDGLA,
    FibElt,
    FiberDGLA,
    PieceContext,
    PolyElt,
    fiber_to_cokernel,
)
from .errors import (
    DegreeCapExceeded,
    DiagramMismatch,
    InclusionFails,
    NonzeroImage,
    NotClosed,
    ScenarioError,
)
from .freedga import (
    DeRhamAlgebra,
    DGModule,
    Element,
    d_name,
    ess_model,
    form_module,
    koszul_model,
    module_complex,
    module_over_self,
    polynomial_algebra,
)
from .graded import Complex, DegreeWindow, GradedSpace, ksign
from .linalg import Echelon, LinMap
from .linf import CartanHomotopy, TwoTermMorphism, g_fiber, mc_pushforward, two_term_check
from .localcoh import CechCochain, CechLocalComplex, LocFrac, cycle_class


# ----------------------------------------------------------------- K-spaces


class KElt:
    """Element of the local-cohomology quotient: a top-level fraction taken
    modulo the image of the previous Čech level."""

    __slots__ = ("kspace", "frac")

    def __init__(self, kspace, frac):
        self.kspace = kspace
        self.frac = frac

    def degree(self):
        return self.frac.numer.degree()

    def weight(self):
        return self.frac.weight()

    def is_zero(self):
        if self.frac.is_zero():
            return True
        return self.kspace.quotient_is_zero(self.frac)

    def __add__(self, other):
        if isinstance(other, KElt):
            other = other.frac
        return KElt(self.kspace, self.frac + other)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        return KElt(self.kspace, Fraction(c) * self.frac)

    def __eq__(self, other):
        if not isinstance(other, KElt):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        return f"K[{self.frac!r}]"


class KSpace:
    """H^p at (z_1..z_p) of the form algebra of a local model: top-level
    fractions modulo the Čech image, with the total differential d + L_δ,
    interior products and Lie derivatives acting through representatives.

    Works as an abelian DGLA (zero bracket) so the fiber and Artin machinery
    apply to it directly."""

    def __init__(self, derham: DeRhamAlgebra, z_names, dencap=3, name=""):
        self.derham = derham
        omega = derham.omega
        self.z_elems = [derham.inject(derham.S.gen(z)) for z in z_names]
        self.p = len(self.z_elems)
        self.module = form_module(derham, None, total=True, name=name + "_forms")
        self.cech = CechLocalComplex(self.z_elems, self.module, name=name)
        self.dencap = dencap
        self.top = tuple(range(self.p))
        self.loc = self.cech.levels[self.top]
        self.name = name or "K"
        self._pieces = {}

    # ------------------------------------------------------------- elements

    def element(self, numer, exps=None):
        return KElt(self, self.loc.frac(numer, exps if exps is not None else (1,) * self.p))

    def from_frac(self, frac):
        return KElt(self, frac)

    def zero(self, degree=0):
        return KElt(self, self.loc.frac(self.derham.omega.zero()))

    def bracket(self, x, y):
        return self.zero()

    # ---------------------------------------------------------- piece data

    def piece(self, degree, weight):
        key = (degree, weight)
        if key in self._pieces:
            return self._pieces[key]
        basis = self.loc.basis(degree, weight, self.dencap)
        # image of the Čech differential from level p-1
        img = []
        from itertools import combinations

        for H in combinations(range(self.p), self.p - 1):
            for b in self.cech.levels[H].basis(degree, weight, self.dencap):
                chain = self.cech.cech_d(CechCochain(self.cech, self.p - 1, {H: b}))
                f = chain.table.get(self.top)
                if f is None or f.is_zero():
                    continue
                img.append(self.loc.coords(f, degree, weight, self.dencap))
        ech = Echelon(img, len(basis))
        pivots = set(ech.pivots)
        free = [i for i in range(len(basis)) if i not in pivots]
        quot_index = {i: k for k, i in enumerate(free)}
        data = (basis, ech, quot_index, free)
        self._pieces[key] = data
        return data

    def dim(self, degree, weight):
        _, _, quot_index, _ = self.piece(degree, weight)
        return len(quot_index)

    def basis(self, degree, weight):
        basis, _, _, free = self.piece(degree, weight)
        return [KElt(self, basis[i]) for i in free]

    def coords(self, x, degree, weight):
        if isinstance(x, KElt):
            x = x.frac
        basis, ech, quot_index, _ = self.piece(degree, weight)
        raw = self.loc.coords(x, degree, weight, self.dencap)
        red = ech.reduce(raw)
        return {quot_index[i]: c for i, c in red.items()}

    def quotient_is_zero(self, frac):
        out = {}
        for (deg, w), piece in frac.numer.homogeneous_parts().items():
            shift = sum(e * wt for e, wt in zip(frac.exps, self.loc.a_weights))
            coords = self.coords(LocFrac(self.loc, piece, frac.exps), deg, w - shift)
            if any(coords.values()):
                return False
        return True

    def weight_parts(self, x: KElt):
        shift = sum(e * w for e, w in zip(x.frac.exps, self.loc.a_weights))
        out = {}
        for (deg, w), piece in x.frac.numer.homogeneous_parts().items():
            key = w - shift
            frac = LocFrac(self.loc, piece, x.frac.exps)
            out[key] = out[key] + frac if key in out else frac
        return {k: KElt(self, v) for k, v in out.items()}

    # ------------------------------------------------------------ operators

    def d(self, x: KElt):
        return KElt(self, self.loc.apply_derivation(self.derham.total, x.frac))

    def contract(self, theta, x: KElt):
        """Interior product of a derivation of the local model."""
        return KElt(self, self.loc.apply_derivation(self.derham.interior(theta), x.frac))

    def lie(self, theta, x: KElt):
        return KElt(self, self.loc.apply_derivation(self.derham.lie(theta), x.frac))

    def form_component(self, x: KElt, lt=None, ge=None):
        """Project the representative onto form degrees < lt or >= ge (the
        filtration descends to the quotient: Čech images are form-graded)."""
        dr = self.derham
        terms = {}
        for m, c in x.frac.numer.terms.items():
            fd = dr.form_degree(m)
            if lt is not None and fd >= lt:
                continue
            if ge is not None and fd < ge:
                continue
            terms[m] = c
        return KElt(self, LocFrac(self.loc, Element(dr.omega, terms), x.frac.exps))

    # ------------------------------------- complexes for the K^{<p} targets

    def filtered_complex(self, weight, window: DegreeWindow, lt=None, ge=None):
        """The sub/quotient complex of K at one weight, restricted to form
        degrees < lt (quotient K^{<p}) or >= ge (subcomplex K^{>=p})."""
        dr = self.derham
        labels = {}
        chosen = {}
        for n in window.degrees():
            basis, ech, quot_index, free = self.piece(n, weight)
            sel = []
            for i in free:
                (mono,) = basis[i].numer.terms
                fd = dr.form_degree(mono)
                if lt is not None and fd >= lt:
                    continue
                if ge is not None and fd < ge:
                    continue
                sel.append(i)
            chosen[n] = sel
            labels[n] = [("k", i) for i in sel]
        space = GradedSpace(window, labels)
        diff = {}
        for n in window.degrees():
            if n + 1 not in window:
                continue
            basis, _, _, _ = self.piece(n, weight)
            index = {i: k for k, i in enumerate(chosen[n + 1])}
            lm = LinMap(len(chosen[n]), len(chosen[n + 1]))
            for col, i in enumerate(chosen[n]):
                img = self.d(KElt(self, basis[i]))
                coords = self.coords(img, n + 1, weight)
                out = {}
                for pos, c in coords.items():
                    # positions outside the selection: quotient case drops
                    # form >= lt (they cannot appear for ge-subcomplexes since
                    # d raises or keeps form degree)
                    full_i = self._free_at(n + 1, weight)[pos]
                    if full_i in index:
                        out[index[full_i]] = c
                    elif ge is not None:
                        raise DegreeCapExceeded("subcomplex not closed under d")
                lm.set_col(col, out)
            diff[n] = lm
        return Complex(space, diff, check=True), chosen

    def _free_at(self, degree, weight):
        _, _, _, free = self.piece(degree, weight)
        return free

    def class_in_filtered(self, x: KElt, degree, weight, window, lt=None, ge=None):
        cx, chosen = self.filtered_complex(weight, window, lt=lt, ge=ge)
        coords_full = self.coords(x, degree, weight)
        free = self._free_at(degree, weight)
        index = {i: k for k, i in enumerate(chosen[degree])}
        coords = {}
        for pos, c in coords_full.items():
            i = free[pos]
            if i in index:
                coords[index[i]] = c
            elif lt is None:
                raise ValueError("element leaves the subcomplex")
        h = cx.cohomology(degree)
        return h.class_of(coords), h
