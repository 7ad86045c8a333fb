"""Differential graded Lie algebras: explicit (finite bases with structure
constants), endomorphism DGLAs of a complex, derivation DGLAs over free
algebras, polynomial-form extensions L[t,dt], homotopy fibers of morphisms,
the surjective quasi-isomorphism onto the shifted cokernel, and the
homotopy-abelian criterion oracle.

Elements of the different flavours all support +, scalar *, ==, and carry a
degree; the hosting DGLA object supplies d and bracket.  Cohomology of
operational DGLAs goes through explicit finite (degree, weight) pieces.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    AxiomViolation,
    HypothesisFails,
    NotAMorphism,
    NotInjective,
)
from .graded import Complex, DegreeWindow, GradedSpace, hom_complex, ksign
from .linalg import Echelon, LinMap, class_coords, cohomology_reps, vec_add, vec_scale
from .freedga import Derivation


# --------------------------------------------------------------- vector DGLAs


class VecElt:
    __slots__ = ("dgla", "degree", "coords")

    def __init__(self, dgla, degree, coords):
        self.dgla = dgla
        self.degree = degree
        self.coords = {i: Fraction(c) for i, c in coords.items() if c}

    def is_zero(self):
        return not self.coords

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return VecElt(self.dgla, self.degree, vec_add(self.coords, other.coords))

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        return VecElt(self.dgla, self.degree, vec_scale(Fraction(c), self.coords))

    def __eq__(self, other):
        if not isinstance(other, VecElt):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.coords == other.coords

    def __repr__(self):
        if not self.coords:
            return "0"
        labels = self.dgla.labels.get(self.degree, [])
        bits = []
        for i, c in sorted(self.coords.items()):
            lab = labels[i] if i < len(labels) else f"e{i}"
            bits.append(f"{c if c != 1 else ''}{lab}")
        return " + ".join(bits)


class VectorDGLA:
    """DGLA with an explicit finite basis per degree.

    ``bracket_table`` maps ((n1,i1),(n2,i2)) with n1 <= n2 (or any orientation
    it was given in) to a coordinate dict at degree n1+n2; lookups fall back
    to graded skew-symmetry.  Alternatively pass ``bracket_fn``."""

    def __init__(self, window, labels, diff=None, bracket_table=None, bracket_fn=None, name=""):
        self.window = window
        self.labels = {n: list(labels.get(n, ())) for n in window.degrees()}
        self.space = GradedSpace(window, self.labels)
        self.name = name
        self.d_maps = {}
        for n in window.degrees():
            m = (diff or {}).get(n)
            if m is None:
                m = LinMap(self.dim(n), self.dim(n + 1) if n + 1 in window else 0)
            self.d_maps[n] = m
        self.bracket_table = bracket_table or {}
        self.bracket_fn = bracket_fn

    def dim(self, n):
        return len(self.labels.get(n, ()))

    def zero(self, degree=0):
        return VecElt(self, degree, {})

    def basis_elt(self, degree, i):
        return VecElt(self, degree, {i: Fraction(1)})

    def basis(self, degree, weight=0):
        if weight != 0:
            return []
        return [self.basis_elt(degree, i) for i in range(self.dim(degree))]

    def coords(self, x, degree, weight=0):
        if x.degree != degree and not x.is_zero():
            raise ValueError("degree mismatch")
        return dict(x.coords)

    def weight_parts(self, x):
        return {0: x}

    def canonical_coords(self, x):
        return {(x.degree, i): c for i, c in x.coords.items()}

    def from_coords(self, degree, coords):
        return VecElt(self, degree, coords)

    def d(self, x):
        n = x.degree
        if n not in self.window:
            return VecElt(self, n + 1, {})
        return VecElt(self, n + 1, self.d_maps[n].apply(x.coords))

    def _bracket_basis(self, n1, i1, n2, i2):
        got = self.bracket_table.get(((n1, i1), (n2, i2)))
        if got is not None:
            return got
        got = self.bracket_table.get(((n2, i2), (n1, i1)))
        if got is not None:
            sign = -ksign(n1 * n2)
            return vec_scale(sign, got)
        if self.bracket_fn is not None:
            return self.bracket_fn(n1, i1, n2, i2)
        return {}

    def bracket(self, x, y):
        out = {}
        for i1, c1 in x.coords.items():
            for i2, c2 in y.coords.items():
                for k, v in self._bracket_basis(x.degree, i1, y.degree, i2).items():
                    s = out.get(k, Fraction(0)) + c1 * c2 * v
                    if s:
                        out[k] = s
                    elif k in out:
                        del out[k]
        return VecElt(self, x.degree + y.degree, out)

    def complex(self):
        return Complex(self.space, self.d_maps, check=False)

    def element_from_label(self, degree, label):
        return self.basis_elt(degree, self.labels[degree].index(label))


def abelian_dgla(window, labels, diff=None, name=""):
    return VectorDGLA(window, labels, diff=diff, name=name)


def end_dgla(W: Complex, name="End"):
    """The endomorphism DGLA of a complex, materialized on the Hom basis.

    Basis labels in degree n are (i, a, b): the elementary map sending W^i
    basis vector a to W^{i+n} basis vector b; the bracket is the graded
    commutator of compositions."""
    H = hom_complex(W, W)
    labels = {n: list(H.space.basis.get(n, ())) for n in H.window.degrees()}
    index = {n: {lab: k for k, lab in enumerate(labels[n])} for n in labels}

    def compose(n1, l1, n2, l2):
        # l1 ∘ l2 at degree n1+n2, or None
        i1, a1, b1 = l1
        i2, a2, b2 = l2
        if i1 != i2 + n2 or a1 != b2:
            return None
        return (i2, a2, b1)

    def bracket_fn(n1, i1, n2, i2):
        l1 = labels[n1][i1]
        l2 = labels[n2][i2]
        out = {}
        n = n1 + n2
        c1 = compose(n1, l1, n2, l2)
        if c1 is not None and c1 in index.get(n, {}):
            out[index[n][c1]] = out.get(index[n][c1], Fraction(0)) + 1
        c2 = compose(n2, l2, n1, l1)
        if c2 is not None and c2 in index.get(n, {}):
            k = index[n][c2]
            out[k] = out.get(k, Fraction(0)) - ksign(n1 * n2)
        return {k: v for k, v in out.items() if v}

    V = VectorDGLA(H.window, labels, diff=H.d, bracket_fn=bracket_fn, name=name)
    V.target_complex = W
    return V


def end_apply(E, f: VecElt, w_degree, w_coords):
    """Apply an element of end_dgla(W) to a vector of W (by coordinates)."""
    out = {}
    for k, c in f.coords.items():
        i, a, b = E.labels[f.degree][k]
        if i != w_degree:
            continue
        x = w_coords.get(a)
        if x:
            out[b] = out.get(b, Fraction(0)) + c * x
    return w_degree + f.degree, {k: v for k, v in out.items() if v}


def sub_dgla(V: VectorDGLA, condition_rows, name="sub"):
    """Sub-DGLA cut out by per-degree linear conditions (rows over coords).

    Returns (sub, embed) where embed maps sub elements into V.  The induced
    differential and bracket are expressed in the sub basis; if an operation
    leaves the subspace, that is an AxiomViolation."""
    sub_basis = {}
    for n in V.window.degrees():
        rows = condition_rows.get(n, [])
        if not rows:
            sub_basis[n] = [
                {i: Fraction(1)} for i in range(V.dim(n))
            ]
        else:
            from .linalg import nullspace

            sub_basis[n] = nullspace(rows, V.dim(n))
    echs = {n: Echelon(sub_basis[n], V.dim(n)) for n in V.window.degrees()}

    def express(n, vec):
        if not vec:
            return {}
        cols = sub_basis[n]
        rows = [dict() for _ in range(V.dim(n))]
        for j, col in enumerate(cols):
            for k, x in col.items():
                rows[k][j] = x
        from .linalg import solve

        sol = solve(rows, len(cols), {k: Fraction(v) for k, v in vec.items()})
        if sol is None:
            raise AxiomViolation(f"operation leaves the subspace in degree {n}")
        return sol

    labels = {n: [f"s{n}_{k}" for k in range(len(sub_basis[n]))] for n in V.window.degrees()}
    diff = {}
    for n in V.window.degrees():
        if n + 1 not in V.window:
            continue
        lm = LinMap(len(sub_basis[n]), len(sub_basis[n + 1]))
        for j, vec in enumerate(sub_basis[n]):
            lm.set_col(j, express(n + 1, V.d_maps[n].apply(vec)))
        diff[n] = lm

    def bracket_fn(n1, i1, n2, i2):
        x = VecElt(V, n1, sub_basis[n1][i1])
        y = VecElt(V, n2, sub_basis[n2][i2])
        z = V.bracket(x, y)
        if z.degree not in V.window:
            return {}
        return express(z.degree, z.coords)

    sub = VectorDGLA(V.window, labels, diff=diff, bracket_fn=bracket_fn, name=name)

    def embed(x):
        out = {}
        for j, c in x.coords.items():
            out = vec_add(out, vec_scale(c, sub_basis[x.degree][j]))
        return VecElt(V, x.degree, out)

    sub._embed = embed
    return sub, embed


# ---------------------------------------------------------- derivation DGLAs


class DerDGLA:
    """Operational DGLA of derivations of a free DG-algebra, vanishing on the
    designated base generators; differential θ ↦ diff_sign·[δ,θ].

    ``value_filter(gen_name, monomial) -> bool`` restricts which single-
    monomial generator values span the sub-DGLA (monomial conditions only,
    e.g. ideal preservation for monomial ideals)."""

    def __init__(self, algebra, base=(), diff_sign=1, value_filter=None, diff_op=None, name=""):
        self.algebra = algebra
        self.base = tuple(base)
        self.diff_sign = diff_sign
        self.diff_op = diff_op
        self.value_filter = value_filter
        self.name = name or f"Der({algebra.name})"
        self._gen_names = [g.name for g in algebra.gens if g.name not in self.base]

    def zero(self, degree=0):
        return self.algebra.derivation(degree, {}, base=self.base)

    def derivation(self, degree, values):
        return self.algebra.derivation(degree, values, base=self.base)

    def d(self, theta):
        if self.diff_op is not None:
            out = self.diff_op.bracket(theta)
        else:
            out = theta.d()
        if self.diff_sign == 1:
            return out
        return -1 * out

    def bracket(self, x, y):
        return x.bracket(y)

    def basis(self, degree, weight):
        A = self.algebra
        out = []
        for gname in self._gen_names:
            g = A.gens[A.pos(gname)]
            for m in A.monomials(g.degree + degree, g.weight + weight):
                if self.value_filter is not None and not self.value_filter(gname, m):
                    continue
                from .freedga import Element

                out.append(
                    A.derivation(degree, {gname: Element(A, {m: Fraction(1)})}, base=self.base)
                )
        return out

    def basis_keys(self, degree, weight):
        A = self.algebra
        keys = []
        for gname in self._gen_names:
            g = A.gens[A.pos(gname)]
            for m in A.monomials(g.degree + degree, g.weight + weight):
                if self.value_filter is not None and not self.value_filter(gname, m):
                    continue
                keys.append((gname, m))
        return keys

    def coords(self, theta, degree, weight):
        index = {k: i for i, k in enumerate(self.basis_keys(degree, weight))}
        out = {}
        A = self.algebra
        for gi, v in theta.values.items():
            gname = A.gens[gi].name
            gw = A.gens[gi].weight
            for m, c in v.terms.items():
                if A.mono_weight(m) != gw + weight:
                    continue
                key = (gname, m)
                if key not in index:
                    raise ValueError(f"value {key} outside this sub-DGLA piece")
                out[index[key]] = c
        return out

    def weight_parts(self, theta):
        A = self.algebra
        parts = {}
        for gi, v in theta.values.items():
            gw = A.gens[gi].weight
            for m, c in v.terms.items():
                w = A.mono_weight(m) - gw
                parts.setdefault(w, {}).setdefault(gi, {})[m] = c
        from .freedga import Element

        return {
            w: self.algebra.derivation(
                theta.degree,
                {A.gens[gi].name: Element(A, terms) for gi, terms in vals.items()},
                base=self.base,
            )
            for w, vals in parts.items()
        }

    def canonical_coords(self, theta):
        A = self.algebra
        out = {}
        for gi, v in theta.values.items():
            for m, c in v.terms.items():
                out[(A.gens[gi].name, m)] = c
        return out

    def member(self, theta):
        if self.value_filter is None:
            return all(
                self.algebra.gens[i].name in self._gen_names
                for i in theta.values
            )
        A = self.algebra
        for gi, v in theta.values.items():
            gname = A.gens[gi].name
            if gname not in self._gen_names:
                return False
            for m in v.terms:
                if not self.value_filter(gname, m):
                    return False
        return True


# ------------------------------------------------------------ DGLA morphisms


class DGLAMorphism:
    def __init__(self, source, target, fn, name=""):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name

    def __call__(self, x):
        return self.fn(x)

    def validate(self, samples):
        """Exact chain-map and bracket checks on sample elements."""
        for x in samples:
            if not self(self.source.d(x)) == self.target.d(self(x)):
                raise NotAMorphism(f"{self.name or 'morphism'}: d fails on {x!r}")
        for x in samples:
            for y in samples:
                lhs = self(self.source.bracket(x, y))
                rhs = self.target.bracket(self(x), self(y))
                if not lhs == rhs:
                    raise NotAMorphism(
                        f"{self.name or 'morphism'}: bracket fails on ({x!r},{y!r})"
                    )
        return True


# ------------------------------------------------------- polynomial forms


class PolyElt:
    """Element of M[t,dt]: sum of t^k⊗m and t^k dt⊗m' with finite support."""

    __slots__ = ("host", "degree", "poly", "form")

    def __init__(self, host, degree, poly=None, form=None):
        # poly: {k: element of M, degree = self.degree}
        # form: {k: element of M, degree = self.degree - 1}
        self.host = host
        self.degree = degree
        self.poly = {k: v for k, v in (poly or {}).items() if not _is_zero(v)}
        self.form = {k: v for k, v in (form or {}).items() if not _is_zero(v)}

    def is_zero(self):
        return not self.poly and not self.form

    def tcap(self):
        return max(
            list(self.poly.keys()) + [k + 1 for k in self.form.keys()], default=0
        )

    def __add__(self, other):
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        poly = dict(self.poly)
        for k, v in other.poly.items():
            poly[k] = poly[k] + v if k in poly else v
        form = dict(self.form)
        for k, v in other.form.items():
            form[k] = form[k] + v if k in form else v
        return PolyElt(self.host, self.degree, poly, form)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        c = Fraction(c)
        return PolyElt(
            self.host,
            self.degree,
            {k: c * v for k, v in self.poly.items()},
            {k: c * v for k, v in self.form.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, PolyElt):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return (
            self.degree == other.degree
            and _dict_eq(self.poly, other.poly)
            and _dict_eq(self.form, other.form)
        )

    def at(self, t):
        """Evaluate at t (dt -> 0); a DGLA morphism M[t,dt] -> M."""
        t = Fraction(t)
        out = None
        for k, v in self.poly.items():
            term = (t**k) * v
            out = term if out is None else out + term
        return out

    def integrate_dt(self):
        """∫₀¹ of the dt part; an element of M of degree (self.degree - 1)."""
        out = None
        for k, v in self.form.items():
            term = Fraction(1, k + 1) * v
            out = term if out is None else out + term
        return out

    def __repr__(self):
        bits = [f"t^{k}⊗{v!r}" for k, v in sorted(self.poly.items())]
        bits += [f"t^{k}dt⊗{v!r}" for k, v in sorted(self.form.items())]
        return " + ".join(bits) if bits else "0"


def _is_zero(v):
    return v is None or v.is_zero()


def _dict_eq(a, b):
    keys = set(a) | set(b)
    for k in keys:
        va, vb = a.get(k), b.get(k)
        if va is None:
            if not _is_zero(vb):
                return False
        elif vb is None:
            if not _is_zero(va):
                return False
        elif not va == vb:
            return False
    return True


class PolyDGLA:
    """M[t,dt] for a host DGLA M."""

    def __init__(self, M, name=""):
        self.M = M
        self.name = name or f"{getattr(M, 'name', 'M')}[t,dt]"

    def zero(self, degree=0):
        return PolyElt(self.M, degree)

    def const(self, m, degree=None):
        return PolyElt(self.M, degree if degree is not None else m.degree, {0: m})

    def monomial(self, k, m, dt=False):
        if dt:
            return PolyElt(self.M, _deg(m) + 1, form={k: m})
        return PolyElt(self.M, _deg(m), poly={k: m})

    def d(self, x):
        poly = {}
        form = {}
        for k, v in x.poly.items():
            dv = self.M.d(v)
            if not _is_zero(dv):
                poly[k] = poly[k] + dv if k in poly else dv
            if k >= 1:
                tv = k * v
                key = k - 1
                form[key] = form[key] + tv if key in form else tv
        for k, v in x.form.items():
            dv = (-1) * self.M.d(v)
            if not _is_zero(dv):
                form[k] = form[k] + dv if k in form else dv
        return PolyElt(self.M, x.degree + 1, poly, form)

    def bracket(self, x, y):
        deg = x.degree + y.degree
        poly = {}
        form = {}

        def acc(bucket, k, v):
            if _is_zero(v):
                return
            bucket[k] = bucket[k] + v if k in bucket else v

        for k1, v1 in x.poly.items():
            for k2, v2 in y.poly.items():
                acc(poly, k1 + k2, self.M.bracket(v1, v2))
            for k2, v2 in y.form.items():
                # [t^a⊗v1, t^b dt⊗v2] = (-1)^{deg v1} t^{a+b} dt⊗[v1,v2]
                acc(form, k1 + k2, ksign(_deg(v1)) * self.M.bracket(v1, v2))
        for k1, v1 in x.form.items():
            for k2, v2 in y.poly.items():
                acc(form, k1 + k2, self.M.bracket(v1, v2))
        return PolyElt(self.M, deg, poly, form)


def _deg(m):
    d = getattr(m, "degree", None)
    if callable(d):
        return m.degree()
    return d


# ------------------------------------------------------------ homotopy fiber


class FibElt:
    """Element (l, m(t,dt)) with m(0)=0 and m(1)=χ(l)."""

    __slots__ = ("fiber", "degree", "l", "m")

    def __init__(self, fiber, degree, l, m, check=True):
        self.fiber = fiber
        self.degree = degree
        self.l = l
        self.m = m
        if check:
            at0 = m.at(0)
            if not _is_zero(at0):
                raise ValueError("m(0,0) != 0")
            at1 = m.at(1)
            chi_l = fiber.chi(l)
            if _is_zero(at1):
                if not _is_zero(chi_l):
                    raise ValueError("m(1,0) != χ(l)")
            elif not at1 == chi_l:
                raise ValueError("m(1,0) != χ(l)")

    def is_zero(self):
        return _is_zero(self.l) and self.m.is_zero()

    def __add__(self, other):
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        return FibElt(
            self.fiber, self.degree, _add(self.l, other.l), self.m + other.m, check=False
        )

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        return FibElt(self.fiber, self.degree, _scale(c, self.l), Fraction(c) * self.m, check=False)

    def __eq__(self, other):
        if not isinstance(other, FibElt):
            return NotImplemented
        le = (
            (_is_zero(self.l) and _is_zero(other.l))
            or self.l == other.l
        )
        return le and self.m == other.m

    def __repr__(self):
        return f"({self.l!r}, {self.m!r})"


def _add(a, b):
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return a + b


def _scale(c, a):
    return Fraction(c) * a


class FiberDGLA:
    """Homotopy fiber of a DGLA morphism: pairs (l, m(t,dt)) with m(0,0)=0,
    m(1,0)=χ(l); differential and bracket componentwise.

    When source and target expose basis/coords, the fiber does too: a basis
    of the degree-n piece at t-degree cap N is

        (l_i, t⊗χ(l_i)),  (0, (t^k - t)⊗m_j) for 2 <= k <= N,
        (0, t^k dt⊗m'_j) for 0 <= k <= N-1,

    which spans every fiber element of t-degree <= N; the fiber cohomology
    computed on these pieces is independent of N >= 2."""

    def __init__(self, chi: DGLAMorphism, tcap=4, name=""):
        self.chi = chi
        self.L = chi.source
        self.M = chi.target
        self.Mt = PolyDGLA(chi.target)
        self.tcap = tcap
        self.name = name or "fiber"

    def element(self, l, m, check=True):
        deg = _deg(l) if not _is_zero(l) else (m.degree if not m.is_zero() else 0)
        return FibElt(self, deg, l, m, check=check)

    def zero(self, degree=0):
        return FibElt(self, degree, self.L.zero(degree), self.Mt.zero(degree), check=False)

    def from_l(self, l):
        """The element (l, t⊗χ(l))."""
        return FibElt(self, _deg(l), l, PolyElt(self.M, _deg(l), {1: self.chi(l)}))

    def d(self, x):
        return FibElt(self, x.degree + 1, self.L.d(x.l), self.Mt.d(x.m), check=False)

    def bracket(self, x, y):
        return FibElt(
            self,
            x.degree + y.degree,
            self.L.bracket(x.l, y.l),
            self.Mt.bracket(x.m, y.m),
            check=False,
        )

    def membership_ok(self, x):
        at0 = x.m.at(0)
        at1 = x.m.at(1)
        chi_l = self.chi(x.l)
        ok0 = _is_zero(at0)
        if _is_zero(at1) and _is_zero(chi_l):
            return ok0
        return ok0 and at1 == chi_l

    # ------------------------------------------------ basis/coords protocol

    def basis(self, degree, weight=0):
        out = []
        for l in self.L.basis(degree, weight):
            out.append(
                FibElt(
                    self,
                    degree,
                    l,
                    PolyElt(self.M, degree, {1: self.chi(l)}),
                    check=False,
                )
            )
        zl = self.L.zero(degree)
        for m in self.M.basis(degree, weight):
            for k in range(2, self.tcap + 1):
                out.append(
                    FibElt(
                        self,
                        degree,
                        zl,
                        PolyElt(self.M, degree, {k: m, 1: (-1) * m}),
                        check=False,
                    )
                )
        for m in self.M.basis(degree - 1, weight):
            for k in range(0, self.tcap):
                out.append(
                    FibElt(
                        self, degree, zl, PolyElt(self.M, degree, form={k: m}), check=False
                    )
                )
        return out

    def _piece_dims(self, degree, weight):
        nl = len(self.L.basis(degree, weight))
        nm = len(self.M.basis(degree, weight))
        nm1 = len(self.M.basis(degree - 1, weight))
        return nl, nm, nm1

    def coords(self, x: FibElt, degree, weight=0):
        nl, nm, nm1 = self._piece_dims(degree, weight)
        out = {}
        lcoords = self.L.coords(x.l, degree, weight) if not _is_zero(x.l) else {}
        for i, c in lcoords.items():
            out[i] = c
        # poly part: subtract t⊗χ(l); coefficients at t^k (k >= 2) are free
        # coordinates, the t^1 coefficient is determined (sum of all = 0)
        rest = dict(x.m.poly)
        chi_l = self.chi(x.l) if not _is_zero(x.l) else None
        if chi_l is not None and not _is_zero(chi_l):
            rest[1] = rest[1] - chi_l if 1 in rest else (-1) * chi_l
        acc = None
        for k, v in sorted(rest.items()):
            if _is_zero(v):
                continue
            if k == 0:
                raise ValueError("element violates m(0,0)=0")
            if k > self.tcap:
                raise ValueError(f"t-degree {k} exceeds fiber cap {self.tcap}")
            acc = v if acc is None else acc + v
            if k >= 2:
                for j, c in self.M.coords(v, degree, weight).items():
                    out[nl + (k - 2) * nm + j] = c
        if acc is not None and not _is_zero(acc):
            raise ValueError("poly part does not satisfy the boundary conditions")
        base = nl + (self.tcap - 1) * nm
        for k, v in x.m.form.items():
            if _is_zero(v):
                continue
            if k >= self.tcap:
                raise ValueError(f"dt-degree {k} exceeds fiber cap {self.tcap}")
            for j, c in self.M.coords(v, degree - 1, weight).items():
                out[base + k * nm1 + j] = c
        return out

    def weight_parts(self, x: FibElt):
        parts = {}
        lp = self.L.weight_parts(x.l) if not _is_zero(x.l) else {}
        for w, v in lp.items():
            parts.setdefault(w, [self.L.zero(x.degree), {}, {}])[0] = v
        for k, v in x.m.poly.items():
            for w, p in self.M.weight_parts(v).items():
                slot = parts.setdefault(w, [self.L.zero(x.degree), {}, {}])
                slot[1][k] = p
        for k, v in x.m.form.items():
            for w, p in self.M.weight_parts(v).items():
                slot = parts.setdefault(w, [self.L.zero(x.degree), {}, {}])
                slot[2][k] = p
        return {
            w: FibElt(
                self, x.degree, l, PolyElt(self.M, x.degree, poly, form), check=False
            )
            for w, (l, poly, form) in parts.items()
        }


def homotopy_fiber(chi: DGLAMorphism, tcap=4, validate_samples=None):
    if validate_samples:
        chi.validate(validate_samples)
    return FiberDGLA(chi, tcap=tcap)


# --------------------------- cokernel quasi-isomorphism and criterion oracle


class PieceContext:
    """Finite (degree, weight) slices of a basis-capable DGLA, as a Complex."""

    def __init__(self, L, window: DegreeWindow, weight=0):
        self.L = L
        self.window = window
        self.weight = weight
        self.bases = {n: L.basis(n, weight) for n in window.degrees()}
        labels = {n: list(range(len(self.bases[n]))) for n in window.degrees()}
        space = GradedSpace(window, labels)
        diff = {}
        for n in window.degrees():
            if n + 1 not in window:
                continue
            lm = LinMap(len(self.bases[n]), len(self.bases[n + 1]))
            for j, b in enumerate(self.bases[n]):
                lm.set_col(j, L.coords(L.d(b), n + 1, weight))
            diff[n] = lm
        self.complex = Complex(space, diff, check=False)

    def coords(self, x, degree):
        return self.L.coords(x, degree, self.weight)

    def from_coords(self, degree, vec):
        out = self.L.zero(degree)
        for i, c in vec.items():
            out = out + c * self.bases[degree][i]
        return out

    def cohomology(self, n):
        return self.complex.cohomology(n)


class QuotientComplexPiece:
    """(M/χ(L)) at one weight, as an explicit complex with a projection."""

    def __init__(self, chi: DGLAMorphism, window: DegreeWindow, weight=0):
        self.chi = chi
        self.window = window
        self.weight = weight
        L, M = chi.source, chi.target
        self.m_bases = {n: M.basis(n, weight) for n in window.degrees()}
        self.echelons = {}
        self.quot_index = {}
        labels = {}
        for n in window.degrees():
            img = [
                M.coords(chi(b), n, weight) for b in L.basis(n, weight)
            ]
            ech = Echelon(img, len(self.m_bases[n]))
            self.echelons[n] = ech
            pivots = set(ech.pivots)
            free = [i for i in range(len(self.m_bases[n])) if i not in pivots]
            self.quot_index[n] = {i: k for k, i in enumerate(free)}
            labels[n] = free
        space = GradedSpace(window, labels)
        diff = {}
        for n in window.degrees():
            if n + 1 not in window:
                continue
            lm = LinMap(len(labels[n]), len(labels[n + 1]))
            M_ = chi.target
            for i, k in self.quot_index[n].items():
                dv = M_.coords(M_.d(self.m_bases[n][i]), n + 1, weight)
                lm.set_col(k, self.project(n + 1, dv))
            diff[n] = lm
        self.complex = Complex(space, diff, check=False)

    def project(self, n, vec):
        red = self.echelons[n].reduce(vec)
        out = {}
        for i, c in red.items():
            out[self.quot_index[n][i]] = c
        return out

    def project_element(self, x, degree=None):
        n = degree if degree is not None else _deg(x)
        return self.project(n, self.chi.target.coords(x, n, self.weight))

    def cohomology(self, n):
        return self.complex.cohomology(n)


def fiber_to_cokernel(fiber: FiberDGLA, window: DegreeWindow, weight=0, injectivity_check=True):
    """The surjective quasi-isomorphism TW(χ) -> (M/χL)[-1] at one weight:
    (l, p(t)m0 + q(t)dt m1) ↦ (∫₀¹ q) m1 mod χ(L).

    Returns (map, quotient piece); H^n(TW(χ)) = H^{n-1}(quotient)."""
    chi = fiber.chi
    if injectivity_check:
        for n in window.degrees():
            lb = chi.source.basis(n, weight)
            if not lb:
                continue
            cols = [chi.target.coords(chi(b), n, weight) for b in lb]
            lm = LinMap(len(lb), len(chi.target.basis(n, weight)), cols)
            if lm.kernel_basis():
                raise NotInjective(f"χ has kernel in degree {n}")
    quot = QuotientComplexPiece(chi, window, weight)

    def mapping(x: FibElt):
        intg = x.m.integrate_dt()
        if _is_zero(intg):
            return {}
        return quot.project_element(intg, x.degree - 1)

    return mapping, quot


def fiber_cohomology_rank(fiber, n, window, weight=0):
    _, quot = fiber_to_cokernel(fiber, window, weight, injectivity_check=False)
    return quot.cohomology(n - 1).rank


def criterion_oracle(chi: DGLAMorphism, window: DegreeWindow, weights=(0,)):
    """The homotopy-abelian criterion: χ injective and H(χ) injective.

    Verifies both hypotheses exactly on every (degree, weight) piece in the
    window; raises HypothesisFails otherwise.  (Downstream tests confirm the
    consequence: vanishing obstructions for the fiber's deformations.)"""
    failed = []
    for w in weights:
        src = PieceContext(chi.source, window, w)
        tgt = PieceContext(chi.target, window, w)
        for n in window.degrees():
            lb = src.bases[n]
            if not lb:
                continue
            cols = [tgt.coords(chi(b), n) for b in lb]
            lm = LinMap(len(lb), len(tgt.bases[n]), cols)
            if lm.kernel_basis():
                failed.append(("injective", n, w))
        for n in window.degrees():
            if n - 1 not in window or n + 1 not in window:
                continue
            hl = src.cohomology(n)
            if hl.rank == 0:
                continue
            hm = tgt.cohomology(n)
            img_rows = list(tgt.complex.d[n - 1].cols)
            base = Echelon(img_rows, len(tgt.bases[n]))
            base_rank = base.rank
            kept = list(img_rows)
            indep = 0
            for rep in hl.representatives:
                x = src.from_coords(n, rep)
                v = tgt.coords(chi(x), n)
                trial = Echelon(kept + [v], len(tgt.bases[n]))
                if trial.rank > base_rank + indep:
                    indep += 1
                    kept.append(v)
            if indep < hl.rank:
                failed.append(("H-injective", n, w))
            del hm
    if failed:
        raise HypothesisFails("criterion hypotheses fail", failed=failed)
    return True


# --------------------------------------------------------------- DGLA axioms


def check_dgla(L, elements, tol_degrees=None):
    """Exact skew-symmetry/Jacobi/Leibniz verification on the given elements
    (for finite DGLAs pass the whole basis).  Raises AxiomViolation."""
    for x in elements:
        for y in elements:
            sk = L.bracket(x, y) + ksign(_deg(x) * _deg(y)) * L.bracket(y, x)
            if not sk.is_zero():
                raise AxiomViolation("skew-symmetry fails", witness=(x, y))
            lz = (
                L.d(L.bracket(x, y))
                - L.bracket(L.d(x), y)
                - ksign(_deg(x)) * L.bracket(x, L.d(y))
            )
            if not lz.is_zero():
                raise AxiomViolation("Leibniz fails", witness=(x, y))
    for x in elements:
        for y in elements:
            for z in elements:
                jac = (
                    L.bracket(x, L.bracket(y, z))
                    - L.bracket(L.bracket(x, y), z)
                    - ksign(_deg(x) * _deg(y)) * L.bracket(y, L.bracket(x, z))
                )
                if not jac.is_zero():
                    raise AxiomViolation("Jacobi fails", witness=(x, y, z))
    return True
