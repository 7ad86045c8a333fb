"""Thom-Whitney totalization: polynomial differential forms on standard
simplices (in reduced coordinates t_1..t_n), semicosimplicial DG vector
spaces and DGLAs with truncated depth, compatible-tuple elements with exact
membership checking, Whitney integration onto the total complex, the natural
map from equalizing morphisms, and calculus extension to TW level."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial

from .errors import (
    CofaceIncompatibility,
    CompatibilityViolation,
    EqualizerFails,
)
from .graded import Complex, DegreeWindow, GradedSpace, ksign
from .linalg import LinMap


class APLForm:
    """Polynomial form on the n-simplex, reduced coordinates t_1..t_n
    (t_0 = 1 - Σ t_i eliminated).  Terms: {(exponents, dt-subset): coeff},
    dt-subsets stored ascending with the sign folded into the coefficient."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, n, c=1):
        c = Fraction(c)
        return cls(n, {((0,) * n, frozenset()): c} if c else {})

    @classmethod
    def coord(cls, n, i):
        """t_i for 1 <= i <= n."""
        e = tuple(1 if j == i - 1 else 0 for j in range(n))
        return cls(n, {(e, frozenset()): Fraction(1)})

    @classmethod
    def dcoord(cls, n, i):
        e = (0,) * n
        return cls(n, {(e, frozenset([i])): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def form_degrees(self):
        return {len(s) for (_, s) in self.terms}

    def __add__(self, other):
        if self.n != other.n:
            raise ValueError("forms on different simplices")
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, Fraction(0)) + v
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return APLForm(self.n, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        c = Fraction(c)
        return APLForm(self.n, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Fraction(other) * self
        if self.n != other.n:
            raise ValueError("forms on different simplices")
        out = {}
        for (e1, s1), c1 in self.terms.items():
            for (e2, s2), c2 in other.terms.items():
                if s1 & s2:
                    continue
                sign = sum(1 for i in s1 for j in s2 if i > j)
                e = tuple(a + b for a, b in zip(e1, e2))
                key = (e, s1 | s2)
                val = out.get(key, Fraction(0)) + ksign(sign) * c1 * c2
                if val:
                    out[key] = val
                elif key in out:
                    del out[key]
        return APLForm(self.n, out)

    def __eq__(self, other):
        if not isinstance(other, APLForm):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def d(self):
        out = {}
        for (e, s), c in self.terms.items():
            for i in range(1, self.n + 1):
                if not e[i - 1] or i in s:
                    continue
                e2 = tuple(x - (1 if j == i - 1 else 0) for j, x in enumerate(e))
                sign = sum(1 for j in s if j < i)
                key = (e2, s | {i})
                val = out.get(key, Fraction(0)) + ksign(sign) * c * e[i - 1]
                if val:
                    out[key] = val
                elif key in out:
                    del out[key]
        return APLForm(self.n, out)

    def face(self, k):
        """Restriction to the k-th face (0 <= k <= n), a form on Δ^{n-1}."""
        if not 0 <= k <= self.n:
            raise ValueError("face index out of range")
        m = self.n - 1
        # substitution images of t_i and dt_i, 1 <= i <= n
        subs = {}
        dsubs = {}
        for i in range(1, self.n + 1):
            if k == 0:
                if i == 1:
                    # t_1 -> 1 - Σ s_j (the eliminated coordinate of Δ^{n-1})
                    t = APLForm.const(m, 1)
                    dt = APLForm(m)
                    for j in range(1, m + 1):
                        t = t - APLForm.coord(m, j)
                        dt = dt - APLForm.dcoord(m, j)
                    subs[i], dsubs[i] = t, dt
                else:
                    subs[i] = APLForm.coord(m, i - 1)
                    dsubs[i] = APLForm.dcoord(m, i - 1)
            else:
                if i < k:
                    subs[i] = APLForm.coord(m, i)
                    dsubs[i] = APLForm.dcoord(m, i)
                elif i == k:
                    subs[i] = APLForm(m)
                    dsubs[i] = APLForm(m)
                else:
                    subs[i] = APLForm.coord(m, i - 1)
                    dsubs[i] = APLForm.dcoord(m, i - 1)
        out = APLForm(m)
        for (e, s), c in self.terms.items():
            term = APLForm.const(m, c)
            for i in range(1, self.n + 1):
                for _ in range(e[i - 1]):
                    term = term * subs[i]
            for i in sorted(s):
                term = term * dsubs[i]
            out = out + term
        return out

    def integrate(self):
        """Exact integral over the standard simplex; (value, had_top_degree).

        Top-degree monomials t^e dt_1∧…∧dt_n integrate to ∏e_i!/(n+Σe)!;
        lower degrees contribute zero (flagged)."""
        total = Fraction(0)
        top = frozenset(range(1, self.n + 1))
        had_top = False
        for (e, s), c in self.terms.items():
            if s != top:
                continue
            had_top = True
            num = 1
            for x in e:
                num *= factorial(x)
            total += c * Fraction(num, factorial(self.n + sum(e)))
        if self.n == 0:
            # a 0-simplex: integration is evaluation
            total = sum(
                (c for (e, s), c in self.terms.items() if not s), start=Fraction(0)
            )
            had_top = True
        return total, had_top

    def __repr__(self):
        bits = []
        for (e, s), c in sorted(self.terms.items(), key=lambda kv: (sorted(kv[0][1]), kv[0][0])):
            body = "·".join(
                [f"t{i + 1}^{x}" if x > 1 else f"t{i + 1}" for i, x in enumerate(e) if x]
                + [f"dt{i}" for i in sorted(s)]
            )
            bits.append(f"{c}·{body}" if body else f"{c}")
        return " + ".join(bits) or "0"


# ------------------------------------------------------- semicosimplicial


class SemicosimplicialObject:
    """Levels V_0..V_N (spaces with d, basis/coords, optionally bracket) and
    coface maps ∂_k: V_{i-1} -> V_i for 0 <= k <= i."""

    def __init__(self, levels, cofaces, name=""):
        self.levels = list(levels)
        self.cofaces = [None] + [list(cs) for cs in cofaces]
        self.name = name
        self.depth = len(self.levels) - 1
        for i in range(1, self.depth + 1):
            if len(self.cofaces[i]) != i + 1:
                raise CofaceIncompatibility(f"level {i} needs {i + 1} cofaces")

    def coface(self, i, k):
        return self.cofaces[i][k]

    def verify_identities(self, degree_weights):
        """∂_l ∂_k = ∂_{k+1} ∂_l (l <= k) on basis elements of the listed
        (degree, weight) pieces."""
        for i in range(2, self.depth + 1):
            for degree, weight in degree_weights:
                for b in self.levels[i - 2].basis(degree, weight):
                    for k in range(i):
                        for l in range(k + 1):
                            lhs = self.coface(i, l)(self.coface(i - 1, k)(b))
                            rhs = self.coface(i, k + 1)(self.coface(i - 1, l)(b))
                            if not lhs == rhs:
                                raise CofaceIncompatibility(
                                    f"cosimplicial identity fails at level {i}, "
                                    f"(l,k)=({l},{k})"
                                )
        return True


def morphism_semicosimplicial(chi, zero_space=None):
    """The two-level object L ⇉ M with ∂_0 = χ, ∂_1 = 0 (its TW is the
    homotopy fiber of χ; its tot is the mapping cone)."""
    L, M = chi.source, chi.target

    def zero_map(x):
        return M.zero(getattr(x, "degree", 0))

    return SemicosimplicialObject([L, M], [[chi, zero_map]], name="morphism")


# ------------------------------------------------------------- TW elements


class TWElement:
    """Tuple (x_0..x_N), x_n ∈ A_PL(n)⊗V_n, stored per level as
    {APL monomial key: V_n element}."""

    __slots__ = ("sc", "degree", "comps")

    def __init__(self, sc, degree, comps=None):
        self.sc = sc
        self.degree = degree
        self.comps = [dict(c) for c in comps] if comps else [
            {} for _ in range(sc.depth + 1)
        ]

    def is_zero(self):
        return all(not c for c in self.comps)

    def level_form_pairs(self, n):
        """[(APLForm, v)] decomposition of level n."""
        return [
            (APLForm(n, {key: Fraction(1)}), v) for key, v in self.comps[n].items()
        ]

    def _acc(self, n, key, v):
        if v is None or v.is_zero():
            return
        cur = self.comps[n].get(key)
        s = v if cur is None else cur + v
        if s.is_zero():
            self.comps[n].pop(key, None)
        else:
            self.comps[n][key] = s

    def __add__(self, other):
        out = TWElement(self.sc, self.degree, self.comps)
        for n, c in enumerate(other.comps):
            for key, v in c.items():
                out._acc(n, key, v)
        return out

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        c = Fraction(c)
        return TWElement(
            self.sc,
            self.degree,
            [{k: c * v for k, v in comp.items()} for comp in self.comps],
        )

    def __eq__(self, other):
        if not isinstance(other, TWElement):
            return NotImplemented
        for a, b in zip(self.comps, other.comps):
            keys = set(a) | set(b)
            for k in keys:
                va, vb = a.get(k), b.get(k)
                if va is None:
                    if not vb.is_zero():
                        return False
                elif vb is None:
                    if not va.is_zero():
                        return False
                elif not va == vb:
                    return False
        return True

    def __repr__(self):
        bits = []
        for n, comp in enumerate(self.comps):
            for key, v in comp.items():
                bits.append(f"[{n}] {APLForm(n, {key: Fraction(1)})!r}⊗({v!r})")
        return " + ".join(bits) or "0"


class TWSpace:
    """Operations on TW(V^Δ): membership, differential, bracket, calculus."""

    def __init__(self, sc: SemicosimplicialObject, name=""):
        self.sc = sc
        self.name = name or f"TW({sc.name})"

    def zero(self, degree=0):
        return TWElement(self.sc, degree)

    def from_level0(self, v, degree=None):
        """The constant tuple built from prolongation by ∂_0 (Lemma-style)."""
        deg = degree if degree is not None else _degree_of(v)
        x = TWElement(self.sc, deg)
        cur = v
        for n in range(self.sc.depth + 1):
            key = ((0,) * n, frozenset())
            if not cur.is_zero():
                x.comps[n][key] = cur
            if n < self.sc.depth:
                cur = self.sc.coface(n + 1, 0)(cur)
        return x

    def membership_violations(self, x: TWElement):
        """All failures of (δ^k⊗Id)x_n = (Id⊗∂_k)x_{n-1}."""
        out = []
        for n in range(1, self.sc.depth + 1):
            for k in range(n + 1):
                lhs = {}
                for key, v in x.comps[n].items():
                    f = APLForm(n, {key: Fraction(1)}).face(k)
                    for key2, c in f.terms.items():
                        cur = lhs.get(key2)
                        contrib = c * v
                        lhs[key2] = contrib if cur is None else cur + contrib
                rhs = {}
                for key, v in x.comps[n - 1].items():
                    img = self.sc.coface(n, k)(v)
                    if not img.is_zero():
                        cur = rhs.get(key)
                        rhs[key] = img if cur is None else cur + img
                keys = set(lhs) | set(rhs)
                for key in keys:
                    a, b = lhs.get(key), rhs.get(key)
                    if a is None:
                        if not b.is_zero():
                            out.append((n, k, key))
                    elif b is None:
                        if not a.is_zero():
                            out.append((n, k, key))
                    elif not a == b:
                        out.append((n, k, key))
        return out

    def check_membership(self, x):
        bad = self.membership_violations(x)
        if bad:
            n, k, key = bad[0]
            raise CompatibilityViolation(
                f"TW compatibility fails at level {n}, face {k}", level=n, face=k
            )
        return True

    def d(self, x: TWElement):
        out = TWElement(self.sc, x.degree + 1)
        for n in range(self.sc.depth + 1):
            V = self.sc.levels[n]
            for key, v in x.comps[n].items():
                form = APLForm(n, {key: Fraction(1)})
                df = form.d()
                for key2, c in df.terms.items():
                    out._acc(n, key2, c * v)
                sign = ksign(len(key[1]))
                dv = V.d(v)
                out._acc(n, key, sign * dv)
        return out

    def bracket(self, x: TWElement, y: TWElement):
        out = TWElement(self.sc, x.degree + y.degree)
        for n in range(self.sc.depth + 1):
            V = self.sc.levels[n]
            for key1, v in x.comps[n].items():
                f1 = APLForm(n, {key1: Fraction(1)})
                for key2, w in y.comps[n].items():
                    f2 = APLForm(n, {key2: Fraction(1)})
                    prod = f1 * f2
                    if prod.is_zero():
                        continue
                    sign = ksign(_degree_of(v) * len(key2[1]))
                    bw = V.bracket(v, w)
                    if bw.is_zero():
                        continue
                    for key3, c in prod.terms.items():
                        out._acc(n, key3, (sign * c) * bw)
        return out

    def contract(self, calc_levels, x: TWElement, v: TWElement):
        """Semicosimplicial calculus extended to TW: levelwise with A_PL
        coefficients (coefficient-first sign rule)."""
        out = TWElement(self.sc, x.degree + v.degree - 1)
        for n in range(self.sc.depth + 1):
            calc = calc_levels[n]
            for key1, l in x.comps[n].items():
                f1 = APLForm(n, {key1: Fraction(1)})
                for key2, w in v.comps[n].items():
                    f2 = APLForm(n, {key2: Fraction(1)})
                    prod = f1 * f2
                    if prod.is_zero():
                        continue
                    sign = ksign(_degree_of(l) * len(key2[1]))
                    lw = calc(l, w)
                    if lw.is_zero():
                        continue
                    for key3, c in prod.terms.items():
                        out._acc(n, key3, (sign * c) * lw)
        return out


def _degree_of(v):
    d = getattr(v, "degree", None)
    if callable(d):
        return d()
    return d if d is not None else 0


# --------------------------------------------------------------- total


class TotElement:
    """Element of tot(V^Δ): one component per level, v_n ∈ V_n^{q-n}."""

    __slots__ = ("sc", "degree", "comps")

    def __init__(self, sc, degree, comps):
        self.sc = sc
        self.degree = degree
        self.comps = list(comps)

    def is_zero(self):
        return all(v is None or v.is_zero() for v in self.comps)

    def __add__(self, other):
        comps = []
        for a, b in zip(self.comps, other.comps):
            if a is None:
                comps.append(b)
            elif b is None:
                comps.append(a)
            else:
                comps.append(a + b)
        return TotElement(self.sc, self.degree, comps)

    def __rmul__(self, c):
        return TotElement(
            self.sc,
            self.degree,
            [None if v is None else Fraction(c) * v for v in self.comps],
        )

    def __eq__(self, other):
        if not isinstance(other, TotElement):
            return NotImplemented
        for a, b in zip(self.comps, other.comps):
            az = a is None or a.is_zero()
            bz = b is None or b.is_zero()
            if az != bz:
                return False
            if not az and not a == b:
                return False
        return True

    def __repr__(self):
        return " ⊕ ".join(
            f"[{n}]({v!r})" for n, v in enumerate(self.comps) if v is not None
        )


def tot_d(sc: SemicosimplicialObject, x: TotElement):
    """d(v) = (-1)^n d_n(v_n) at level n plus ∂(v_{n-1}) with
    ∂ = Σ (-1)^k ∂_k."""
    comps = [None] * (sc.depth + 1)
    for n in range(sc.depth + 1):
        acc = None
        v = x.comps[n]
        if v is not None and not v.is_zero():
            acc = ksign(n) * sc.levels[n].d(v)
        if n >= 1:
            w = x.comps[n - 1]
            if w is not None and not w.is_zero():
                for k in range(n + 1):
                    img = ksign(k) * sc.coface(n, k)(w)
                    acc = img if acc is None else acc + img
        comps[n] = acc
    return TotElement(sc, x.degree + 1, comps)


def integration_map(tw: TWSpace, x: TWElement) -> TotElement:
    """Whitney integration: level n integrates the A_PL part over Δ^n."""
    sc = tw.sc
    comps = []
    for n in range(sc.depth + 1):
        acc = None
        for key, v in x.comps[n].items():
            val, _top = APLForm(n, {key: Fraction(1)}).integrate()
            if val:
                term = val * v
                acc = term if acc is None else acc + term
        comps.append(acc)
    return TotElement(sc, x.degree, comps)


def tot_complex(sc: SemicosimplicialObject, weight, window: DegreeWindow):
    """tot(V^Δ) per weight piece as an explicit Complex.

    Labels are (level, index into the level basis).  Returns
    (Complex, {degree: [(level, element)]})."""
    basis_elts = {}
    labels = {}
    for q in window.degrees():
        labs = []
        elts = []
        for n in range(sc.depth + 1):
            for i, b in enumerate(sc.levels[n].basis(q - n, weight)):
                labs.append((n, i))
                elts.append((n, b))
        labels[q] = labs
        basis_elts[q] = elts
    space = GradedSpace(window, labels)
    index = {q: {lab: k for k, lab in enumerate(labels[q])} for q in window.degrees()}
    diff = {}
    for q in window.degrees():
        if q + 1 not in window:
            continue
        lm = LinMap(len(labels[q]), len(labels[q + 1]))
        for j, (n, b) in enumerate(basis_elts[q]):
            col = {}
            dv = sc.levels[n].d(b)
            if not dv.is_zero():
                s = ksign(n)
                for i, c in sc.levels[n].coords(dv, q - n + 1, weight).items():
                    key = index[q + 1][(n, i)]
                    col[key] = col.get(key, Fraction(0)) + s * c
            if n + 1 <= sc.depth:
                for k in range(n + 2):
                    img = sc.coface(n + 1, k)(b)
                    if img.is_zero():
                        continue
                    s = ksign(k)
                    for i, c in sc.levels[n + 1].coords(img, q - n, weight).items():
                        key = index[q + 1][(n + 1, i)]
                        col[key] = col.get(key, Fraction(0)) + s * c
            lm.set_col(j, col)
        diff[q] = lm
    return Complex(space, diff, check=True), basis_elts, index


def tot_coords(sc, x: TotElement, weight, index_q):
    out = {}
    for n, v in enumerate(x.comps):
        if v is None or v.is_zero():
            continue
        deg = _degree_of(v)
        for i, c in sc.levels[n].coords(v, deg, weight).items():
            out[index_q[(n, i)]] = c
    return out


def natural_h(tw: TWSpace, phi, L_samples, check=True):
    """The DGLA morphism L -> TW(g^Δ) from φ: L -> g_0 with ∂_0 φ = ∂_1 φ:
    h(l) = (1⊗φ(l), 1⊗∂_0φ(l), 1⊗∂_0²φ(l), ...)."""
    sc = tw.sc
    if check and sc.depth >= 1:
        for l in L_samples:
            v = phi(l)
            if not sc.coface(1, 0)(v) == sc.coface(1, 1)(v):
                raise EqualizerFails("∂_0 φ != ∂_1 φ on a sample")

    def h(l):
        x = tw.from_level0(phi(l))
        if check:
            tw.check_membership(x)
        return x

    return h


# ------------------------------------------------------------ Čech models


class ProductSpace:
    """Finite product of spaces, indexed by intersection tuples."""

    def __init__(self, parts):
        # parts: ordered dict tuple -> space
        self.keys = list(parts)
        self.parts = dict(parts)

    def zero(self, degree=0):
        return ProdElt(self, degree, {})

    def element(self, table, degree=None):
        deg = degree
        for v in table.values():
            if v is not None and not v.is_zero():
                deg = _degree_of(v)
        return ProdElt(self, deg if deg is not None else 0, table)

    def d(self, x):
        return ProdElt(
            self,
            x.degree + 1,
            {k: self.parts[k].d(v) for k, v in x.table.items()},
        )

    def bracket(self, x, y):
        out = {}
        for k in set(x.table) & set(y.table):
            out[k] = self.parts[k].bracket(x.table[k], y.table[k])
        return ProdElt(self, x.degree + y.degree, out)

    def basis(self, degree, weight):
        out = []
        for k in self.keys:
            for b in self.parts[k].basis(degree, weight):
                out.append(ProdElt(self, degree, {k: b}))
        return out

    def coords(self, x, degree, weight):
        out = {}
        offset = 0
        sizes = {}
        for k in self.keys:
            sizes[k] = len(self.parts[k].basis(degree, weight))
        for k in self.keys:
            v = x.table.get(k)
            if v is not None and not v.is_zero():
                for i, c in self.parts[k].coords(v, degree, weight).items():
                    out[offset + i] = c
            offset += sizes[k]
        return out

    def weight_parts(self, x):
        parts = {}
        for k, v in x.table.items():
            if v is None or v.is_zero():
                continue
            for w, p in self.parts[k].weight_parts(v).items():
                parts.setdefault(w, {})[k] = p
        return {w: ProdElt(self, x.degree, tab) for w, tab in parts.items()}


class ProdElt:
    __slots__ = ("space", "degree", "table")

    def __init__(self, space, degree, table):
        self.space = space
        self.degree = degree
        self.table = {
            k: v for k, v in table.items() if v is not None and not v.is_zero()
        }

    def is_zero(self):
        return not self.table

    def __add__(self, other):
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        table = dict(self.table)
        for k, v in other.table.items():
            table[k] = table[k] + v if k in table else v
        return ProdElt(self.space, self.degree, table)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        return ProdElt(
            self.space, self.degree, {k: Fraction(c) * v for k, v in self.table.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, ProdElt):
            return NotImplemented
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

    def __repr__(self):
        return " ⊞ ".join(f"{k}:{v!r}" for k, v in sorted(self.table.items())) or "0"


def cech_semicosimplicial(cover_size, space_for, restriction, name="cech"):
    """The Čech semicosimplicial object of an ordered cover.

    ``space_for(T)`` gives the space on the intersection indexed by the
    sorted tuple T; ``restriction(S, T, v)`` restricts v from S to T ⊇ S.
    Depth is cover_size - 1 (alternating cochains vanish beyond)."""
    levels = []
    level_keys = []
    for i in range(cover_size):
        keys = list(combinations(range(cover_size), i + 1))
        level_keys.append(keys)
        levels.append(ProductSpace({T: space_for(T) for T in keys}))
    cofaces = []
    for i in range(1, cover_size):
        maps = []
        for k in range(i + 1):
            def mk(kk, lvl):
                def coface(x):
                    out = {}
                    for T in level_keys[lvl]:
                        S = T[:kk] + T[kk + 1 :]
                        v = x.table.get(S)
                        if v is None or v.is_zero():
                            continue
                        out[T] = restriction(S, T, v)
                    return ProdElt(levels[lvl], x.degree, out)

                return coface

            maps.append(mk(k, i))
        cofaces.append(maps)
    return SemicosimplicialObject(levels, cofaces, name=name)


# ----------------------------------------------------------- level adapters


class ModuleSpace:
    """DGModule adapter exposing the level-space protocol."""

    def __init__(self, module, name=""):
        self.module = module
        self.name = name or module.name

    def zero(self, degree=0):
        return self.module.carrier.zero()

    def d(self, x):
        return self.module.diff(x)

    def basis(self, degree, weight):
        return self.module.basis(degree, weight)

    def coords(self, x, degree, weight):
        return self.module.coords(x, degree, weight)

    def weight_parts(self, x):
        parts = {}
        for (deg, w), piece in x.homogeneous_parts().items():
            parts[w] = parts[w] + piece if w in parts else piece
        return parts


class LocalizedSpace:
    """LocalizedModule adapter with a fixed denominator cap."""

    def __init__(self, locmod, cap, name=""):
        self.locmod = locmod
        self.cap = cap
        self.name = name

    def zero(self, degree=0):
        return self.locmod.frac(self.locmod.module.carrier.zero())

    def d(self, x):
        return self.locmod.diff(x)

    def basis(self, degree, weight):
        return self.locmod.basis(degree, weight, self.cap)

    def coords(self, x, degree, weight):
        return self.locmod.coords(x, degree, weight, self.cap)

    def weight_parts(self, x):
        shift = sum(e * w for e, w in zip(x.exps, self.locmod.a_weights))
        out = {}
        for (deg, w), piece in x.numer.homogeneous_parts().items():
            key = w - shift
            frac = type(x)(x.host, piece, x.exps)
            out[key] = out[key] + frac if key in out else frac
        return out
