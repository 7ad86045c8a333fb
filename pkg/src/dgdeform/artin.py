"""Artin coefficient rings (monomial quotients of Q[s_1..s_k]), Maurer-Cartan
sets over them, the gauge action, obstruction maps with a brute-force lifting
oracle, order-by-order gauge equivalence decision, and irrelevant-stabilizer
checks on Koszul-type local models."""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .dgla import PieceContext, _deg
from .errors import DegreeMismatch, NotMC
from .graded import DegreeWindow
from .linalg import Echelon, LinMap, solve, vec_add, vec_scale


class ArtinAlgebra:
    """Finite-dimensional local algebra Q[s_1..s_k]/I with I a monomial ideal.

    Basis: the standard monomials (exponent tuples); multiplication of basis
    monomials is again a basis monomial or zero.  Local with residue field Q;
    the maximal ideal is spanned by the non-unit monomials."""

    def __init__(self, var_names, lead_monos, max_dim=256):
        self.vars = tuple(var_names)
        self.leads = [tuple(m) for m in lead_monos]
        k = len(self.vars)
        for m in self.leads:
            if len(m) != k:
                raise ValueError("relation arity mismatch")
        for i in range(k):
            if not any(all(m[j] == 0 for j in range(k) if j != i) and m[i] > 0 for m in self.leads):
                raise ValueError(f"variable {self.vars[i]} has no pure power relation; not Artin")
        basis = []
        frontier = [(0,) * k]
        seen = {(0,) * k}
        while frontier:
            m = frontier.pop()
            basis.append(m)
            if len(basis) > max_dim:
                raise ValueError("Artin algebra too large")
            for i in range(k):
                m2 = tuple(e + (1 if j == i else 0) for j, e in enumerate(m))
                if m2 in seen or self._divisible(m2):
                    continue
                seen.add(m2)
                frontier.append(m2)
        self.basis = sorted(basis, key=lambda m: (sum(m), m))
        self.index = {m: i for i, m in enumerate(self.basis)}
        self.nilpotency = max(sum(m) for m in self.basis) + 1

    def _divisible(self, m):
        return any(all(a >= b for a, b in zip(m, lead)) for lead in self.leads)

    @property
    def unit(self):
        return (0,) * len(self.vars)

    def maximal_ideal(self):
        return [m for m in self.basis if sum(m)]

    def mult(self, m1, m2):
        prod = tuple(a + b for a, b in zip(m1, m2))
        return None if self._divisible(prod) else prod

    def var_mono(self, name):
        i = self.vars.index(name)
        return tuple(1 if j == i else 0 for j in range(len(self.vars)))

    def socle_monomials(self):
        return [
            m
            for m in self.basis
            if sum(m) and all(self.mult(m, self.var_mono(v)) is None for v in self.vars)
        ]

    def mono_str(self, m):
        return "·".join(f"{v}^{e}" if e > 1 else v for v, e in zip(self.vars, m) if e) or "1"

    def __repr__(self):
        rels = ", ".join(self.mono_str(m) for m in self.leads)
        return f"Artin(Q[{','.join(self.vars)}]/({rels}))"


class SmallExtension:
    """B -> A = B/(mu) with one-dimensional kernel Q·mu killed by m_B."""

    def __init__(self, B: ArtinAlgebra, socle_mono):
        socle_mono = tuple(socle_mono)
        if socle_mono not in B.index or not sum(socle_mono):
            raise ValueError("kernel generator must be a non-unit basis monomial")
        if socle_mono not in B.socle_monomials():
            raise ValueError("kernel generator is not annihilated by the maximal ideal")
        self.B = B
        self.kernel_mono = socle_mono
        self.A = ArtinAlgebra(B.vars, B.leads + [socle_mono])

    def project_table(self, table):
        return {m: v for m, v in table.items() if m != self.kernel_mono}

    def section_table(self, table):
        """The canonical section A -> B on standard monomials."""
        return dict(table)


def curvilinear(n, var="s"):
    """Q[s]/(s^n)."""
    return ArtinAlgebra([var], [(n,)])


# ---------------------------------------------------------- tensor elements


class TensorElt:
    """Element of L^degree ⊗ m_A (or ⊗ A), as {artin monomial: L-element}."""

    __slots__ = ("space", "artin", "degree", "table")

    def __init__(self, space, artin, degree, table=None):
        self.space = space
        self.artin = artin
        self.degree = degree
        self.table = {}
        for m, v in (table or {}).items():
            if v is not None and not v.is_zero():
                self.table[m] = v

    def is_zero(self):
        return not self.table

    def __add__(self, other):
        self._check(other)
        table = dict(self.table)
        for m, v in other.table.items():
            table[m] = table[m] + v if m in table else v
        return TensorElt(self.space, self.artin, self.degree, table)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        c = Fraction(c)
        return TensorElt(
            self.space, self.artin, self.degree, {m: c * v for m, v in self.table.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, TensorElt):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        if self.degree != other.degree:
            return False
        keys = set(self.table) | set(other.table)
        for k in keys:
            a, b = self.table.get(k), other.table.get(k)
            if a is None:
                if not b.is_zero():
                    return False
            elif b is None:
                if not a.is_zero():
                    return False
            elif not a == b:
                return False
        return True

    def _check(self, other):
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise DegreeMismatch(f"{self.degree} vs {other.degree}")

    def order(self):
        return min((sum(m) for m in self.table), default=None)

    def __repr__(self):
        bits = [f"{self.artin.mono_str(m)}⊗({v!r})" for m, v in sorted(self.table.items())]
        return " + ".join(bits) if bits else "0"


def t_zero(L, A, degree):
    return TensorElt(L, A, degree)

def t_single(L, A, mono, v):
    return TensorElt(L, A, _deg(v), {tuple(mono): v})


def t_d(L, x: TensorElt):
    return TensorElt(
        L, x.artin, x.degree + 1, {m: L.d(v) for m, v in x.table.items()}
    )


def t_bracket(L, x: TensorElt, y: TensorElt):
    A = x.artin
    out = {}
    for m1, v1 in x.table.items():
        for m2, v2 in y.table.items():
            m = A.mult(m1, m2)
            if m is None:
                continue
            b = L.bracket(v1, v2)
            if b.is_zero():
                continue
            out[m] = out[m] + b if m in out else b
    return TensorElt(L, A, x.degree + y.degree, out)


def mc_residual(L, A, x: TensorElt):
    """dx + ½[x,x]; zero exactly when x is Maurer-Cartan."""
    if x.degree != 1 and not x.is_zero():
        raise DegreeMismatch("Maurer-Cartan elements live in degree 1")
    return t_d(L, x) + Fraction(1, 2) * t_bracket(L, x, x)


def is_mc(L, A, x):
    return mc_residual(L, A, x).is_zero()


def gauge_act(L, A, a: TensorElt, x: TensorElt):
    """e^a * x = x + Σ_{n≥0} ad_a^n([a,x] - da)/(n+1)!."""
    if a.degree != 0 and not a.is_zero():
        raise DegreeMismatch("gauge elements live in degree 0")
    u = t_bracket(L, a, x) - t_d(L, a)
    out = x
    n = 0
    while not u.is_zero():
        out = out + Fraction(1, factorial(n + 1)) * u
        u = t_bracket(L, a, u)
        n += 1
        if n > A.nilpotency + 2:
            raise RuntimeError("gauge series failed to terminate")
    return out


def exp_action_on(L, A, a: TensorElt, v: TensorElt):
    """e^{ad_a}(v) = Σ ad_a^n(v)/n! (the automorphism applied to a tensor)."""
    out = v
    term = v
    n = 0
    while True:
        term = t_bracket(L, a, term)
        if term.is_zero():
            break
        n += 1
        out = out + Fraction(1, factorial(n)) * term
        if n > A.nilpotency + 2:
            raise RuntimeError("exponential failed to terminate")
    return out


# ------------------------------------------------------ cohomology contexts


class CohomologyContext:
    """Cohomology of a basis-capable DGLA at fixed degree across a set of
    weights; expresses classes and decides coboundaries exactly."""

    def __init__(self, L, degree, window: DegreeWindow, weights=(0,)):
        self.L = L
        self.degree = degree
        self.window = window
        self.weights = tuple(weights)
        self.pieces = {}
        for w in self.weights:
            ctx = PieceContext(L, window, w)
            h = ctx.cohomology(degree)
            self.pieces[w] = (ctx, h)

    def rank(self):
        return sum(h.rank for _, h in self.pieces.values())

    def class_of(self, v):
        """Coordinates {(weight, i): c} of the class of an L-element."""
        out = {}
        parts = self.L.weight_parts(v) if hasattr(self.L, "weight_parts") else {0: v}
        for w, part in parts.items():
            if part.is_zero():
                continue
            if w not in self.pieces:
                raise ValueError(f"weight {w} outside the context")
            ctx, h = self.pieces[w]
            coords = ctx.coords(part, self.degree)
            cls = h.class_of(coords)
            for i, c in cls.items():
                if c:
                    out[(w, i)] = c
        return out

    def is_coboundary(self, v):
        parts = self.L.weight_parts(v) if hasattr(self.L, "weight_parts") else {0: v}
        for w, part in parts.items():
            if part.is_zero():
                continue
            ctx, _h = self.pieces[w]
            coords = ctx.coords(part, self.degree)
            dmap = ctx.complex.d[self.degree - 1]
            if dmap.preimage(coords) is None:
                return False
        return True

    def representative(self, w, i):
        ctx, h = self.pieces[w]
        return ctx.from_coords(self.degree, h.representatives[i])


# ---------------------------------------------------------- obstruction map


def obstruction_map(L, ext: SmallExtension, x: TensorElt, ctx: CohomologyContext):
    """Class of d(x̃) + ½[x̃,x̃] in H²(L) for the canonical lift x̃ of x.

    Returns (class coordinates, the L²-valued residual component).  Raises
    NotMC if x is not Maurer-Cartan over A."""
    if not is_mc(L, ext.A, x):
        raise NotMC("input is not Maurer-Cartan over the base of the extension")
    lift = TensorElt(L, ext.B, x.degree, ext.section_table(x.table))
    h = mc_residual(L, ext.B, lift)
    for m, v in h.table.items():
        if m != ext.kernel_mono and not v.is_zero():
            raise AssertionError("residual of the lift escapes the kernel")
    v = h.table.get(ext.kernel_mono)
    if v is None:
        return {}, None
    return ctx.class_of(v), v


def lift_exists_bruteforce(L, ext: SmallExtension, x: TensorElt, ctx: CohomologyContext):
    """Decide by exact affine solving whether x lifts to MC over B.

    Every lift has the form x̃ + mu⊗v with v in L¹, and its residual equals
    h + mu⊗dv (the bracket corrections die against the socle); so a lift
    exists iff the residual component is a coboundary."""
    if not is_mc(L, ext.A, x):
        raise NotMC("input is not Maurer-Cartan over the base of the extension")
    lift = TensorElt(L, ext.B, x.degree, ext.section_table(x.table))
    h = mc_residual(L, ext.B, lift)
    v = h.table.get(ext.kernel_mono)
    if v is None or v.is_zero():
        return True
    return ctx.is_coboundary((-1) * v)


# ------------------------------------------------ gauge equivalence decision


def _piece_contexts(L, window, weights):
    return {w: PieceContext(L, window, w) for w in weights}


def gauge_equivalence_decide(L, A: ArtinAlgebra, x, y, window, weights=(0,)):
    """Solve e^a * x = y order by order in the maximal-ideal filtration.

    Returns (a, None) on success or (None, (order, residual)) with the first
    unsolvable order."""
    pieces = _piece_contexts(L, window, weights)
    a = TensorElt(L, A, 0)
    for k in range(1, A.nilpotency):
        err = gauge_act(L, A, a, x) - y
        err_k = TensorElt(
            L, A, 1, {m: v for m, v in err.table.items() if sum(m) == k}
        )
        if err.order() is not None and err.order() < k:
            raise AssertionError("lower-order error reappeared")
        if err_k.is_zero():
            continue
        delta_tab = {}
        for m, v in err_k.table.items():
            parts = L.weight_parts(v) if hasattr(L, "weight_parts") else {0: v}
            for w, part in parts.items():
                ctx = pieces.get(w)
                if ctx is None:
                    return None, (k, err_k)
                coords = ctx.coords(part, 1)
                sol = ctx.complex.d[0].preimage(coords)
                if sol is None:
                    return None, (k, err_k)
                corr = ctx.from_coords(0, sol)
                delta_tab[m] = delta_tab[m] + corr if m in delta_tab else corr
        # e^{a+a_k}*x ≈ e^a*x - d(a_k) modulo higher order
        a = a + TensorElt(L, A, 0, delta_tab)
    final = gauge_act(L, A, a, x) - y
    if final.is_zero():
        return a, None
    return None, (A.nilpotency, final)


# ------------------------------------- irrelevant stabilizers (local models)


def solve_bracket_equation(L, A: ArtinAlgebra, rho, a, window, weights):
    """Find b in L^{-1}⊗m_A with [δ+ρ, b] = a, or None.

    rho is a Maurer-Cartan TensorElt (the perturbation of the differential);
    a is a degree-0 TensorElt.  One exact linear solve over all (artin
    monomial, weight) components at once."""
    unknown_basis = []
    for w in weights:
        for b in L.basis(-1, w):
            for m in A.maximal_ideal():
                unknown_basis.append((m, w, b))
    # target coordinates: (artin mono, canonical coordinate of L)
    target_index = {}

    def coords_of(t: TensorElt):
        out = {}
        for m, v in t.table.items():
            for ckey, c in L.canonical_coords(v).items():
                key = (m, ckey)
                if key not in target_index:
                    target_index[key] = len(target_index)
                k = target_index[key]
                out[k] = out.get(k, Fraction(0)) + c
        return out

    cols = []
    images = []
    for m, w, b in unknown_basis:
        bt = TensorElt(L, A, -1, {m: b})
        img = t_d(L, bt) + t_bracket(L, rho, bt)
        images.append(img)
    rhs_vec = coords_of(a)
    for img in images:
        cols.append(coords_of(img))
    nrows = len(target_index)
    rows = [dict() for _ in range(nrows)]
    for j, col in enumerate(cols):
        for k, c in col.items():
            rows[k][j] = c
    sol = solve(rows, len(cols), rhs_vec)
    if sol is None:
        return None
    out = TensorElt(L, A, -1)
    for j, c in sol.items():
        if not c:
            continue
        m, w, b = unknown_basis[j]
        out = out + TensorElt(L, A, -1, {m: c * b})
    return out


def first_order_h_action_trivial(L, alpha, module, window, weights):
    """Whether a degree-0 derivation alpha (commuting with δ) induces the
    zero map on every H^i of the underlying algebra in the given pieces."""
    from .freedga import module_complex

    shift = alpha.weight_shift()
    for w in weights:
        cx, monos = module_complex(module, w, window)
        for n in window.degrees():
            if n - 1 not in window or n + 1 not in window:
                continue
            h = cx.cohomology(n)
            if h.rank == 0:
                continue
            if w + shift not in weights:
                raise ValueError("target weight escapes the window")
            cx2, monos2 = module_complex(module, w + shift, window)
            index2 = {m: i for i, m in enumerate(monos2[n])}
            h2 = cx2.cohomology(n)
            for rep in h.representatives:
                elt = module.zero()
                from .freedga import Element

                for i, c in rep.items():
                    elt = elt + Element(module.carrier, {monos[n][i]: c})
                img = alpha(elt)
                coords = {}
                for m, c in img.terms.items():
                    coords[index2[m]] = c
                cls = h2.class_of(coords)
                if any(cls.values()):
                    return False
    return True


def irrelevant_stabilizer_test(L, A, rho, a, module, window, weights):
    """Decide a = [δ+ρ, b] by exact solving, and cross-check against the
    first-order cohomology action of a.

    Returns (solvable: bool, b or None, h_trivial: bool | None); h_trivial is
    computed from the first-order part of a when it is weight-homogeneous."""
    b = solve_bracket_equation(L, A, rho, a, window, weights)
    h_trivial = None
    first = {m: v for m, v in a.table.items() if sum(m) == 1}
    if len(first) == 1:
        (alpha,) = first.values()
        try:
            alpha.weight_shift()
            h_trivial = first_order_h_action_trivial(L, alpha, module, window, weights)
        except ValueError:
            h_trivial = None
    return (b is not None), b, h_trivial
