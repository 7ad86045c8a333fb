"""Two-term L∞ morphisms of DGLAs, the Quillen shifted brackets, Cartan
homotopies with their associated DGLA morphism, the explicit morphisms into
M[t,dt] and into homotopy fibers, Maurer-Cartan pushforward, and calculi
(bilinear contractions) with scalar extension."""

from __future__ import annotations

from fractions import Fraction

from .artin import TensorElt, mc_residual
from .dgla import DGLAMorphism, FibElt, FiberDGLA, PolyDGLA, PolyElt, _deg, _is_zero
from .errors import (
    ConditionViolation,
    EllNotInN,
    NotCartan,
    NotMC,
    ResidualNonzero,
)
from .graded import ksign


# ------------------------------------------------------------------- Quillen


def quillen_brackets(L):
    """The shifted L∞ structure of a DGLA: q1 = -d and
    q2(v,w) = (-1)^{deg v - 1}[v,w] on shift-by-one elements.

    Degrees passed around are the unshifted DGLA degrees; the (-1) in the
    exponent is the shift.  Used to translate the two-term equations between
    conventions and tested for the shifted symmetry of q2."""

    def q1(x):
        return -1 * L.d(x)

    def q2(x, y):
        return ksign(_deg(x) - 1) * L.bracket(x, y)

    return q1, q2


# ------------------------------------------------------------ two-term data


class TwoTermMorphism:
    """A pair (g1, g2): g1 degree-0 linear, g2 degree -1 graded-skew bilinear,
    subject to the four two-term equations (checked by two_term_check)."""

    def __init__(self, source, target, g1, g2, name=""):
        self.source = source
        self.target = target
        self.g1 = g1
        self.g2 = g2
        self.name = name

    def linear_part(self):
        return DGLAMorphism(self.source, self.target, self.g1, name=self.name + ".g1")


def two_term_check(F: TwoTermMorphism, samples):
    """Exact verification of the four equations on all sample tuples.

    (1) g1 d = d g1;
    (2) [g1 a, g1 b] = g1[a,b] - d g2(a,b) - g2(da,b) + (-1)^{ab} g2(db,a);
    (3) g2([a,b],c) - (-1)^{bc} g2([a,c],b) + (-1)^{a(b+c)} g2([b,c],a)
        = (-1)^{a}[g1 a, g2(b,c)] - [g2(a,b), g1 c] + (-1)^{bc}[g2(a,c), g1 b];
    (4) [g2(a,b), g2(c,d)] + (-1)^{(c+1)(b+1)}[g2(a,c), g2(b,d)] = 0.

    Raises ConditionViolation with the equation index and witness; returns
    the number of equations checked."""
    L, M = F.source, F.target
    g1, g2 = F.g1, F.g2
    checked = 0
    for a in samples:
        lhs = g1(L.d(a))
        rhs = M.d(g1(a))
        if not lhs == rhs:
            raise ConditionViolation("two-term equation (1) fails", 1, (a,))
        checked += 1
    for a in samples:
        for b in samples:
            da, db = _deg(a), _deg(b)
            lhs = M.bracket(g1(a), g1(b))
            rhs = (
                g1(L.bracket(a, b))
                - M.d(g2(a, b))
                - g2(L.d(a), b)
                + ksign(da * db) * g2(L.d(b), a)
            )
            if not lhs == rhs:
                raise ConditionViolation("two-term equation (2) fails", 2, (a, b))
            checked += 1
    for a in samples:
        for b in samples:
            for c in samples:
                da, db, dc = _deg(a), _deg(b), _deg(c)
                lhs = (
                    g2(L.bracket(a, b), c)
                    - ksign(db * dc) * g2(L.bracket(a, c), b)
                    + ksign(da * (db + dc)) * g2(L.bracket(b, c), a)
                )
                rhs = (
                    ksign(da) * M.bracket(g1(a), g2(b, c))
                    - M.bracket(g2(a, b), g1(c))
                    + ksign(db * dc) * M.bracket(g2(a, c), g1(b))
                )
                if not lhs == rhs:
                    raise ConditionViolation(
                        "two-term equation (3) fails", 3, (a, b, c)
                    )
                checked += 1
    for a in samples:
        for b in samples:
            for c in samples:
                for d in samples:
                    db, dc = _deg(b), _deg(c)
                    lhs = M.bracket(g2(a, b), g2(c, d)) + ksign(
                        (dc + 1) * (db + 1)
                    ) * M.bracket(g2(a, c), g2(b, d))
                    if not lhs.is_zero():
                        raise ConditionViolation(
                            "two-term equation (4) fails", 4, (a, b, c, d)
                        )
                    checked += 1
    return checked


# -------------------------------------------------------- Cartan homotopies


class CartanHomotopy:
    """A degree -1 linear map i: L -> M with [i_a, i_b] = 0 and
    i_{[a,b]} = [i_a, d_M i_b]."""

    def __init__(self, source, target, fn, name=""):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name

    def __call__(self, a):
        return self.fn(a)

    def validate(self, samples):
        L, M = self.source, self.target
        for a in samples:
            for b in samples:
                if not M.bracket(self(a), self(b)).is_zero():
                    raise NotCartan(f"[i_a, i_b] != 0 on ({a!r}, {b!r})")
                lhs = self(L.bracket(a, b))
                rhs = M.bracket(self(a), M.d(self(b)))
                if not lhs == rhs:
                    raise NotCartan(f"i_[a,b] != [i_a, d i_b] on ({a!r}, {b!r})")
        return True

    def ell(self, a):
        """The associated degree-0 map: l_a = d_M i_a + i_{d_L a}."""
        return self.target.d(self(a)) + self(self.source.d(a))


def ell_from_i(i: CartanHomotopy, samples=None):
    """The DGLA morphism l associated with a Cartan homotopy, validated on
    the samples together with the companion identities
    i_{[a,b]} = [i_a, l_b] = (-1)^{deg a}[l_a, i_b] and the cyclic relation
    among [i_{[·,·]}, l_·] terms."""
    ell = DGLAMorphism(i.source, i.target, i.ell, name=(i.name or "i") + ".ell")
    if samples:
        ell.validate(samples)
        L, M = i.source, i.target
        for a in samples:
            for b in samples:
                iab = i(L.bracket(a, b))
                if not iab == M.bracket(i(a), ell(b)):
                    raise NotCartan("i_[a,b] != [i_a, l_b]")
                if not iab == ksign(_deg(a)) * M.bracket(ell(a), i(b)):
                    raise NotCartan("i_[a,b] != (-1)^a [l_a, i_b]")
        for a in samples:
            for b in samples:
                for c in samples:
                    da, db, dc = _deg(a), _deg(b), _deg(c)
                    acc = M.bracket(i(L.bracket(a, b)), ell(c))
                    acc = acc - ksign(db * dc) * M.bracket(
                        i(L.bracket(a, c)), ell(b)
                    )
                    acc = acc + ksign(da * (db + dc)) * M.bracket(
                        i(L.bracket(b, c)), ell(a)
                    )
                    if not acc.is_zero():
                        raise NotCartan("cyclic contraction identity fails")
    return ell


def g_from_cartan(i: CartanHomotopy, validate_samples=None):
    """The explicit two-term L∞ morphism L ⇢ M[t,dt]:
    g1(a) = t⊗l_a + dt⊗i_a, g2(a,b) = (t - t²)⊗i_{[a,b]}."""
    if validate_samples:
        i.validate(validate_samples)
    L = i.source
    Mt = PolyDGLA(i.target)

    def g1(a):
        la = i.ell(a)
        ia = i(a)
        deg = _deg(a)
        poly = {1: la} if not _is_zero(la) else {}
        form = {0: ia} if not _is_zero(ia) else {}
        return PolyElt(i.target, deg, poly, form)

    def g2(a, b):
        v = i(L.bracket(a, b))
        deg = _deg(a) + _deg(b) - 1
        if _is_zero(v):
            return PolyElt(i.target, deg)
        return PolyElt(i.target, deg, {1: v, 2: (-1) * v})

    return TwoTermMorphism(L, Mt, g1, g2, name=(i.name or "i") + ".g")


def g_fiber(i: CartanHomotopy, fiber: FiberDGLA, check_samples=None):
    """The two-term L∞ morphism L ⇢ TW(χ) for χ: N -> M a sub-DGLA inclusion
    with l(L) ⊆ N: g1(a) = (l_a, t⊗l_a + dt⊗i_a), g2(a,b) = (0, (t-t²)⊗i_{[a,b]}).

    ``fiber.chi.source`` must recognise l-images via its ``member`` hook (or
    accept them structurally); EllNotInN is raised when l leaves N."""
    L = i.source
    N = fiber.chi.source
    member = getattr(N, "member", None)

    def into_N(x):
        if member is not None and not member(x):
            raise EllNotInN(f"l-image {x!r} is not in the sub-DGLA")
        return x

    def g1(a):
        la = into_N(i.ell(a))
        ia = i(a)
        deg = _deg(a)
        poly = {1: fiber.chi(la)} if not _is_zero(la) else {}
        form = {0: ia} if not _is_zero(ia) else {}
        return FibElt(fiber, deg, la, PolyElt(fiber.M, deg, poly, form), check=False)

    def g2(a, b):
        v = i(L.bracket(a, b))
        deg = _deg(a) + _deg(b) - 1
        poly = {1: v, 2: (-1) * v} if not _is_zero(v) else {}
        return FibElt(
            fiber, deg, N.zero(deg), PolyElt(fiber.M, deg, poly), check=False
        )

    F = TwoTermMorphism(L, fiber, g1, g2, name=(i.name or "i") + ".gfib")
    if check_samples:
        for a in check_samples:
            if not fiber.membership_ok(g1(a)):
                raise EllNotInN("g1 image violates fiber membership")
            for b in check_samples:
                if not fiber.membership_ok(g2(a, b)):
                    raise EllNotInN("g2 image violates fiber membership")
    return F


# -------------------------------------------------------------- MC pushforward


def mc_pushforward(F: TwoTermMorphism, A, x: TensorElt, check_residual=True, require_mc=True):
    """Push a Maurer-Cartan element along a two-term morphism:
    g1(x) + ½ g2(x, x), verified to satisfy Maurer-Cartan in the target."""
    if require_mc and not mc_residual(F.source, A, x).is_zero():
        raise NotMC("pushforward input is not Maurer-Cartan")
    out = TensorElt(F.target, A, 1)
    for m, v in x.table.items():
        out = out + TensorElt(F.target, A, 1, {m: F.g1(v)})
    half = Fraction(1, 2)
    acc = {}
    for m1, v1 in x.table.items():
        for m2, v2 in x.table.items():
            m = A.mult(m1, m2)
            if m is None:
                continue
            g = F.g2(v1, v2)
            if g.is_zero():
                continue
            acc[m] = acc[m] + half * g if m in acc else half * g
    out = out + TensorElt(F.target, A, 1, acc)
    if check_residual:
        r = mc_residual(F.target, A, out)
        if not r.is_zero():
            raise ResidualNonzero(f"pushforward violates Maurer-Cartan: {r!r}")
    return out


# -------------------------------------------------------------------- calculi


class Calculus:
    """A bilinear degree -1 contraction L × V -> V whose induced map into
    operators on V is a Cartan homotopy."""

    def __init__(self, L, V, contract, name=""):
        self.L = L
        self.V = V
        self.contract = contract
        self.name = name

    def __call__(self, l, v):
        return self.contract(l, v)

    def op_d(self, b, v):
        """(d i_b)(v) = d_V(b⌟v) - (-1)^{deg b - 1} b⌟d_V(v)."""
        return self.V.d(self(b, v)) - ksign(_deg(b) - 1) * self(b, self.V.d(v))

    def validate(self, l_samples, v_samples):
        for a in l_samples:
            for b in l_samples:
                da, db = _deg(a), _deg(b)
                for v in v_samples:
                    comm = self(a, self(b, v)) - ksign((da - 1) * (db - 1)) * self(
                        b, self(a, v)
                    )
                    if not comm.is_zero():
                        raise NotCartan("[i_a, i_b] != 0 for the calculus")
                    lhs = self(self.L.bracket(a, b), v)
                    rhs = self(a, self.op_d(b, v)) - ksign((da - 1) * db) * self.op_d(
                        b, self(a, v)
                    )
                    if not lhs == rhs:
                        raise NotCartan("i_[a,b] != [i_a, d i_b] for the calculus")
        return True


def calculus_extend_poly(calc: Calculus, name=""):
    """Scalar extension of a calculus along K[t,dt]:
    (a⊗l) ⌟ (b⊗v) = (-1)^{deg l · deg b} (ab)⊗(l⌟v) in the coefficient-first
    storage of PolyElt."""
    Lt = PolyDGLA(calc.L)
    Vt = PolyDGLA(calc.V)

    def contract(lp: PolyElt, vp: PolyElt):
        deg = lp.degree + vp.degree - 1
        poly = {}
        form = {}

        def acc(bucket, k, v):
            if _is_zero(v):
                return
            bucket[k] = bucket[k] + v if k in bucket else v

        for k1, l in lp.poly.items():
            for k2, v in vp.poly.items():
                acc(poly, k1 + k2, calc(l, v))
            for k2, v in vp.form.items():
                acc(form, k1 + k2, ksign(_deg(l)) * calc(l, v))
        for k1, l in lp.form.items():
            for k2, v in vp.poly.items():
                acc(form, k1 + k2, calc(l, v))
        return PolyElt(calc.V, deg, poly, form)

    return Calculus(Lt, Vt, contract, name=name or (calc.name + "[t,dt]"))
