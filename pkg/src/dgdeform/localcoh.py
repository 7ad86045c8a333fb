"""Čech local cohomology of DG-modules over free DG-algebras: localization
arithmetic at certified nonzerodivisors, the complex of localizations, local
and hyper local cohomology per weight piece, permutation and redundancy
comparisons, base change along quasi-isomorphisms, cycle classes, and the
contraction calculus on Čech levels.

All cohomology is computed per internal (weight) piece with an explicit
denominator cap; localized pieces stabilize once the cap clears the weight
window, and the stabilization is checked where the spec demands it."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import (
    DegreeCapExceeded,
    NotClosed,
    NotQuasiIso,
    NotRegularSequence,
    NotSemifree,
    RadicalWitnessMissing,
    ZeroDivisorDenominator,
)
from .freedga import DGModule, Element, module_complex
from .graded import Complex, DegreeWindow, GradedSpace, ksign
from .linalg import Echelon, LinMap


def certify_nonzerodivisor(module: DGModule, a, degrees, weights):
    """Injectivity of multiplication by ``a`` on every listed piece."""
    if a.is_zero():
        raise ZeroDivisorDenominator("zero is never invertible")
    aw = a.weight()
    for n in degrees:
        for w in weights:
            basis = module.basis_monos(n, w)
            if not basis:
                continue
            tgt = {m: i for i, m in enumerate(module.basis_monos(n, w + aw))}
            lm = LinMap(len(basis), len(tgt))
            for j, m in enumerate(basis):
                prod = a * Element(module.carrier, {m: Fraction(1)})
                col = {}
                for m2, c in prod.terms.items():
                    col[tgt[m2]] = c
                lm.set_col(j, col)
            if lm.kernel_basis():
                raise ZeroDivisorDenominator(
                    f"{a!r} kills something in piece (degree {n}, weight {w})"
                )
    return NZDCertificate(module, a, tuple(degrees), tuple(weights))


class NZDCertificate:
    def __init__(self, module, a, degrees=(), weights=(), declared=False):
        self.module = module
        self.a = a
        self.degrees = degrees
        self.weights = weights
        self.declared = declared


def declare_nonzerodivisor(module, a, reason="standard"):
    """Declared-global certificate (variables of polynomial rings, the fiber
    coordinates of extended models, ...)."""
    cert = NZDCertificate(module, a, declared=True)
    cert.reason = reason
    return cert


class LocFrac:
    """numer / prod_h a_h^{e_h}, denominators restricted to the host subset.

    Stored as (numerator, exponent tuple over the host subset); equality by
    scaling to a common denominator, sound because denominators are
    certified nonzerodivisors."""

    __slots__ = ("host", "numer", "exps")

    def __init__(self, host, numer, exps):
        self.host = host
        self.numer = numer
        self.exps = tuple(exps)
        if len(self.exps) != len(host.H):
            raise ValueError("exponent arity mismatch")

    def is_zero(self):
        return self.numer.is_zero()

    def degree(self):
        return self.numer.degree()

    def weight(self):
        nw = self.numer.weight()
        if nw is None:
            return None
        return nw - sum(e * w for e, w in zip(self.exps, self.host.a_weights))

    def _scaled_numer(self, target_exps):
        out = self.numer
        for a, e, t in zip(self.host.a_elems, self.exps, target_exps):
            if t < e:
                raise ValueError("cannot scale down")
            for _ in range(t - e):
                out = a * out
        return out

    def __add__(self, other):
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.host is not self.host:
            raise ValueError("fractions over different localizations")
        common = tuple(max(e, f) for e, f in zip(self.exps, other.exps))
        return LocFrac(
            self.host,
            self._scaled_numer(common) + other._scaled_numer(common),
            common,
        )

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        return LocFrac(self.host, Fraction(c) * self.numer, self.exps)

    def smul(self, s):
        """Multiply by an element of the carrier algebra (on the left)."""
        return LocFrac(self.host, s * self.numer, self.exps)

    def __eq__(self, other):
        if not isinstance(other, LocFrac):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        if self.host is not other.host:
            return False
        common = tuple(max(e, f) for e, f in zip(self.exps, other.exps))
        return self._scaled_numer(common) == other._scaled_numer(common)

    def reduce(self):
        """Cancel denominator factors dividing the numerator (monomial-wise
        exact division by each a_h where possible)."""
        out = self
        changed = True
        while changed:
            changed = False
            for idx, (a, e) in enumerate(zip(out.host.a_elems, out.exps)):
                if e == 0:
                    continue
                q = _exact_divide(out.numer, a)
                if q is not None:
                    exps = list(out.exps)
                    exps[idx] = e - 1
                    out = LocFrac(out.host, q, exps)
                    changed = True
        return out

    def __repr__(self):
        if not any(self.exps):
            return repr(self.numer)
        den = "·".join(
            f"({a!r})^{e}" if e > 1 else f"({a!r})"
            for a, e in zip(self.host.a_elems, self.exps)
            if e
        )
        return f"({self.numer!r})/{den}"


def _exact_divide(numer, a):
    """numer / a when a is a single monomial dividing every term, else None."""
    if len(a.terms) != 1:
        return None
    (amono, acoeff), = a.terms.items()
    out = {}
    for m, c in numer.terms.items():
        q = tuple(e - f for e, f in zip(m, amono))
        if any(e < 0 for e in q):
            return None
        out[q] = c / acoeff
    return Element(numer.algebra, out)


class LocalizedModule:
    """M_{a_H}: the localization of a DG-module slice at the subset H of the
    tuple (a_1..a_n)."""

    def __init__(self, module: DGModule, a_elems_all, H):
        self.module = module
        self.H = tuple(sorted(H))
        self.a_elems = [a_elems_all[h] for h in self.H]
        self.a_weights = [a.weight() for a in self.a_elems]
        for a in self.a_elems:
            if a.degree() != 0:
                raise ZeroDivisorDenominator("denominators must have degree 0")

    def frac(self, numer, exps=None):
        return LocFrac(self, numer, exps if exps is not None else (0,) * len(self.H))

    def include_from(self, frac: LocFrac, host_map):
        """Reinterpret a fraction from a smaller subset (host_map sends the
        old positions into ours)."""
        exps = [0] * len(self.H)
        for pos, e in zip(host_map, frac.exps):
            exps[pos] = e
        return LocFrac(self, frac.numer, exps)

    def apply_derivation(self, D, frac: LocFrac):
        """Quotient rule: D(m/a^e) = D(m)/a^e - Σ_h e_h (D(a_h)·m)/a^{e+1_h}."""
        out = LocFrac(self, D(frac.numer), frac.exps)
        for idx, (a, e) in enumerate(zip(self.a_elems, frac.exps)):
            if not e:
                continue
            da = D(a)
            if da.is_zero():
                continue
            exps = list(frac.exps)
            exps[idx] = e + 1
            out = out + LocFrac(self, (-e) * (da * frac.numer), exps)
        return out

    def diff(self, frac):
        if self.module.diff_derivation is None:
            return self.frac(self.module.carrier.zero())
        return self.apply_derivation(self.module.diff_derivation, frac)

    def basis(self, degree, weight, cap):
        shift = cap * sum(self.a_weights)
        exps = (cap,) * len(self.H)
        return [
            LocFrac(self, Element(self.module.carrier, {m: Fraction(1)}), exps)
            for m in self.module.basis_monos(degree, weight + shift)
        ]

    def coords(self, frac: LocFrac, degree, weight, cap):
        shift = cap * sum(self.a_weights)
        index = {
            m: i for i, m in enumerate(self.module.basis_monos(degree, weight + shift))
        }
        scaled = frac._scaled_numer((cap,) * len(self.H))
        out = {}
        for m, c in scaled.terms.items():
            if m not in index:
                raise ValueError("fraction outside the piece")
            out[index[m]] = c
        return out


class CechCochain:
    """Level-i cochain: one fraction per subset H of size i."""

    __slots__ = ("cx", "level", "table")

    def __init__(self, cx, level, table=None):
        self.cx = cx
        self.level = level
        self.table = {}
        for H, f in (table or {}).items():
            if not f.is_zero():
                self.table[tuple(sorted(H))] = f

    def is_zero(self):
        return not self.table

    def __add__(self, other):
        if self.level != other.level:
            raise ValueError("level mismatch")
        table = dict(self.table)
        for H, f in other.table.items():
            table[H] = table[H] + f if H in table else f
        return CechCochain(self.cx, self.level, table)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        return CechCochain(
            self.cx, self.level, {H: Fraction(c) * f for H, f in self.table.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, CechCochain):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        if self.level != other.level:
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

    def __repr__(self):
        return " ⊕ ".join(f"[{H}] {f!r}" for H, f in sorted(self.table.items())) or "0"


class CechLocalComplex:
    """The complex of localizations of a DG-module at (a_1..a_n)."""

    def __init__(self, a_elems, module: DGModule, certificates=None, name=""):
        self.module = module
        self.a_elems = list(a_elems)
        self.n = len(self.a_elems)
        self.name = name
        if certificates is not None:
            if len(certificates) != self.n:
                raise ZeroDivisorDenominator("one certificate per denominator")
        self.certificates = certificates
        self.levels = {}
        for i in range(self.n + 1):
            for H in combinations(range(self.n), i):
                self.levels[H] = LocalizedModule(module, self.a_elems, H)

    def zero(self, level):
        return CechCochain(self, level)

    def unit_cochain(self, elt):
        """Level-0 cochain from a module element."""
        return CechCochain(self, 0, {(): self.levels[()].frac(elt)})

    def cochain(self, level, table):
        return CechCochain(self, level, table)

    def cech_d(self, c: CechCochain):
        """δ(m)_K = Σ_j (-1)^{pos of j in K} m_{K∖j}."""
        out = {}
        for H, f in c.table.items():
            others = [j for j in range(self.n) if j not in H]
            for j in others:
                K = tuple(sorted(H + (j,)))
                pos = K.index(j)
                target = self.levels[K]
                host_map = [K.index(h) for h in H]
                g = ksign(pos) * target.include_from(f, host_map)
                out[K] = out[K] + g if K in out else g
        return CechCochain(self, c.level + 1, out)

    def internal_d(self, c: CechCochain):
        out = {}
        for H, f in c.table.items():
            out[H] = self.levels[H].diff(f)
        return CechCochain(self, c.level, out)

    def apply_derivation(self, D, c: CechCochain):
        return CechCochain(
            self,
            c.level,
            {H: self.levels[H].apply_derivation(D, f) for H, f in c.table.items()},
        )

    def total_d(self, c: CechCochain, internal_degree):
        """d_tot = δ_Čech + (-1)^{level}·d_internal (level-sign convention
        fixed here; squares to zero because the two commute)."""
        return self.cech_d(c), ksign(c.level) * self.internal_d(c)

    # ------------------------------------------------------ piece complexes

    def level_complex(self, internal_degree, weight, cap):
        """The Čech direction at one internal piece, as a Complex over levels.

        Returns (Complex, {level: [(H, mono), ...]})."""
        labels = {}
        fracs = {}
        for i in range(self.n + 1):
            labs = []
            frs = []
            for H in combinations(range(self.n), i):
                loc = self.levels[H]
                for k, b in enumerate(loc.basis(internal_degree, weight, cap)):
                    labs.append((H, k))
                    frs.append((H, b))
            labels[i] = labs
            fracs[i] = frs
        win = DegreeWindow(-1, self.n + 1)
        basis = {i: labels.get(i, []) for i in win.degrees()}
        space = GradedSpace(win, basis)
        diff = {}
        for i in range(self.n + 1):
            if i + 1 > self.n:
                continue
            index = {lab: k for k, lab in enumerate(labels[i + 1])}
            lm = LinMap(len(labels[i]), len(labels[i + 1]))
            for j, (H, b) in enumerate(fracs[i]):
                img = self.cech_d(CechCochain(self, i, {H: b}))
                col = {}
                for K, f in img.table.items():
                    for idx, c in self.levels[K].coords(
                        f, internal_degree, weight, cap
                    ).items():
                        key = index[(K, idx)]
                        col[key] = col.get(key, Fraction(0)) + c
                lm.set_col(j, col)
            diff[i] = lm
        return Complex(space, diff, check=False), fracs

    def cochain_coords(self, c: CechCochain, internal_degree, weight, cap, labels_index):
        out = {}
        for H, f in c.table.items():
            for idx, v in self.levels[H].coords(f, internal_degree, weight, cap).items():
                out[labels_index[(H, idx)]] = v
        return out

    def local_cohomology(self, i, internal_degree, weight, cap):
        cx, fracs = self.level_complex(internal_degree, weight, cap)
        return cx.cohomology(i), fracs

    def tot_complex(self, weight, tot_window: DegreeWindow, cap):
        """Total complex of the double complex, per weight piece.

        Basis labels: (level, H, k).  Differential: δ + (-1)^{level} d_int."""
        labels = {}
        fracs = {}
        for q in tot_window.degrees():
            labs = []
            for lvl in range(self.n + 1):
                ideg = q - lvl
                for H in combinations(range(self.n), lvl):
                    loc = self.levels[H]
                    for k, b in enumerate(loc.basis(ideg, weight, cap)):
                        labs.append((lvl, H, k))
                        fracs[(q, lvl, H, k)] = b
            labels[q] = labs
        space = GradedSpace(tot_window, labels)
        index = {
            q: {lab: k for k, lab in enumerate(labels[q])} for q in tot_window.degrees()
        }
        diff = {}
        for q in tot_window.degrees():
            if q + 1 not in tot_window:
                continue
            lm = LinMap(len(labels[q]), len(labels[q + 1]))
            for j, (lvl, H, k) in enumerate(labels[q]):
                b = fracs[(q, lvl, H, k)]
                ideg = q - lvl
                col = {}
                dc = self.cech_d(CechCochain(self, lvl, {H: b}))
                for K, f in dc.table.items():
                    for idx, c in self.levels[K].coords(f, ideg, weight, cap).items():
                        key = index[q + 1][(lvl + 1, K, idx)]
                        col[key] = col.get(key, Fraction(0)) + c
                di = self.levels[H].diff(b)
                if not di.is_zero():
                    s = ksign(lvl)
                    for idx, c in self.levels[H].coords(
                        di, ideg + 1, weight, cap
                    ).items():
                        key = index[q + 1][(lvl, H, idx)]
                        col[key] = col.get(key, Fraction(0)) + s * c
                lm.set_col(j, col)
            diff[q] = lm
        return Complex(space, diff, check=True), labels, index

    def hyper_cohomology(self, q, weight, tot_window, cap):
        cx, labels, index = self.tot_complex(weight, tot_window, cap)
        return cx.cohomology(q)

    def hyper_rank_stabilized(self, q, weight, tot_window, cap):
        """Rank at the cap together with the cap+1 value (stabilization)."""
        r1 = self.hyper_cohomology(q, weight, tot_window, cap).rank
        r2 = self.hyper_cohomology(q, weight, tot_window, cap + 1).rank
        return r1, r1 == r2


# ---------------------------------------------------- regular sequences


def certify_regular_sequence(module: DGModule, a_elems, degrees, weights):
    """Inductive injectivity of multiplication on successive quotients
    within the listed pieces; raises NotRegularSequence on failure.

    Quotients are taken piecewise: multiplication by a_k must be injective
    on M/(a_1..a_{k-1})M, realized by echelon reduction."""
    carrier = module.carrier
    for k, a in enumerate(a_elems):
        aw = a.weight()
        prev = a_elems[:k]
        for n in degrees:
            for w in weights:
                basis = module.basis_monos(n, w)
                if not basis:
                    continue
                tgt = module.basis_monos(n, w + aw)
                tgt_index = {m: i for i, m in enumerate(tgt)}
                sub_rows = []
                for b in prev:
                    bw = b.weight()
                    for m in module.basis_monos(n, w + aw - bw):
                        prod = b * Element(carrier, {m: Fraction(1)})
                        sub_rows.append(
                            {tgt_index[m2]: c for m2, c in prod.terms.items()}
                        )
                ech = Echelon(sub_rows, len(tgt))
                # kernel of (mult by a) composed with projection to quotient
                rows = []
                src_index = {m: i for i, m in enumerate(basis)}
                cols = []
                for m in basis:
                    prod = a * Element(carrier, {m: Fraction(1)})
                    vec = {tgt_index[m2]: c for m2, c in prod.terms.items()}
                    cols.append(ech.reduce(vec))
                lm = LinMap(len(basis), len(tgt), cols)
                ker = lm.kernel_basis()
                # kernel vectors must come from the submodule (a_1..a_{k-1})M
                if ker:
                    sub_src_rows = []
                    for b in prev:
                        bw = b.weight()
                        for m in module.basis_monos(n, w - bw):
                            prod = b * Element(carrier, {m: Fraction(1)})
                            sub_src_rows.append(
                                {src_index[m2]: c for m2, c in prod.terms.items()}
                            )
                    ech_src = Echelon(sub_src_rows, len(basis))
                    for v in ker:
                        if not ech_src.contains(v):
                            raise NotRegularSequence(
                                f"a_{k + 1} kills a class in piece (deg {n}, weight {w})"
                            )
    return True


def concentration_reduction(cx: CechLocalComplex, tot_degree, weight, cap, window_j):
    """The regular-sequence reduction ℍ^i = H^{i-n}(H^n(a;M)).

    Computes H^n(a; M^j) for each internal degree j in window_j with the
    induced internal differential, then the cohomology of that complex at
    internal degree tot_degree - n.  Caller certifies regularity."""
    n = cx.n
    pieces = {}
    label_maps = {}
    for j in window_j.degrees():
        coh, fracs = cx.local_cohomology(n, j, weight, cap)
        pieces[j] = (coh, fracs)
        label_maps[j] = fracs
    # build the complex of H^n pieces with the induced internal differential
    win = window_j
    level_data = {j: cx.level_complex(j, weight, cap) for j in win.degrees()}
    labels = {j: list(range(pieces[j][0].rank)) for j in win.degrees()}
    space = GradedSpace(win, labels)
    diff = {}
    for j in win.degrees():
        if j + 1 not in win:
            continue
        coh_j, _ = pieces[j]
        coh_j1, _ = pieces[j + 1]
        cxj1, _fr = level_data[j + 1]
        index_j1 = {lab: k for k, lab in enumerate(cxj1.space.basis[n])}
        _cxj, fr_j = level_data[j]
        lm = LinMap(coh_j.rank, coh_j1.rank)
        for r, rep in enumerate(coh_j.representatives):
            chain = CechCochain(cx, n)
            for pos, c in rep.items():
                H, b = fr_j[n][pos]
                chain = chain + c * CechCochain(cx, n, {H: b})
            image = cx.internal_d(chain)
            coords = cx.cochain_coords(image, j + 1, weight, cap, index_j1)
            lm.set_col(r, coh_j1.class_of(coords))
        diff[j] = lm
    reduced = Complex(space, diff, check=True)
    return reduced.cohomology(tot_degree - n)


# ---------------------------------------------- permutation and redundancy


def permutation_iso(cx: CechLocalComplex, sigma, cochain: CechCochain, target_cx=None):
    """The natural isomorphism Č(a_1..a_n) -> Č(a_{σ(1)}..a_{σ(n)}).

    sigma maps old indices to new positions: new tuple a'_k = a_{σ^{-1}(k)}.
    Components are reindexed with the sign of the sort; on the top level
    this is multiplication by the signature."""
    n = cx.n
    inv = [0] * n
    for i, s in enumerate(sigma):
        inv[s] = i
    new_a = [cx.a_elems[inv[k]] for k in range(n)]
    tgt = target_cx or CechLocalComplex(new_a, cx.module, name=cx.name + "_perm")
    out = {}
    for H, f in cochain.table.items():
        imgs = [sigma[h] for h in H]
        K = tuple(sorted(imgs))
        sign = _sort_sign(imgs)
        host = tgt.levels[K]
        exps = [0] * len(K)
        for pos_old, h in enumerate(H):
            exps[K.index(sigma[h])] = f.exps[pos_old]
        g = LocFrac(host, sign * f.numer, exps)
        out[K] = out[K] + g if K in out else g
    return tgt, CechCochain(tgt, cochain.level, out)


def _sort_sign(seq):
    sign = 1
    arr = list(seq)
    for i in range(len(arr)):
        for j in range(i + 1, len(arr)):
            if arr[i] > arr[j]:
                arr[i], arr[j] = arr[j], arr[i]
                sign = -sign
    return sign


def verify_radical_witness(b, a_elems, coeffs, power):
    """Check b^power == Σ coeffs_i · a_i exactly."""
    acc = b.algebra.one()
    for _ in range(power):
        acc = acc * b
    rhs = b.algebra.zero()
    for c, a in zip(coeffs, a_elems):
        rhs = rhs + c * a
    if not acc == rhs:
        raise RadicalWitnessMissing("the supplied witness identity is false")
    return True


def redundancy_projection(big: CechLocalComplex, cochain: CechCochain, small: CechLocalComplex):
    """Project Č(a_1..a_n, b; M) -> Č(a_1..a_n; M): drop components whose
    subset contains the last index."""
    n_small = small.n
    out = {}
    for H, f in cochain.table.items():
        if big.n - 1 in H:
            continue
        host = small.levels[H]
        out[H] = LocFrac(host, f.numer, f.exps)
    return CechCochain(small, cochain.level, out)


def compare_cohomology_via_map(
    src_cx, dst_cx, level_map, i, internal_degree, weight, cap, require_iso=True
):
    """Rank-compare H^i pieces through an explicit cochain map.

    ``level_map(cochain) -> cochain`` must be a chain map; we verify the
    induced map on the cohomology pieces is bijective."""
    coh_s, fr_s = src_cx.local_cohomology(i, internal_degree, weight, cap)
    coh_d, fr_d = dst_cx.local_cohomology(i, internal_degree, weight, cap)
    cxd, fr_d2 = dst_cx.level_complex(internal_degree, weight, cap)
    index_d = {lab: k for k, lab in enumerate(cxd.space.basis[i])}
    lm = LinMap(coh_s.rank, coh_d.rank)
    _cxs, fr_s2 = src_cx.level_complex(internal_degree, weight, cap)
    for r, rep in enumerate(coh_s.representatives):
        chain = CechCochain(src_cx, i)
        for pos, c in rep.items():
            H, b = fr_s2[i][pos]
            chain = chain + c * CechCochain(src_cx, i, {H: b})
        img = level_map(chain)
        coords = dst_cx.cochain_coords(img, internal_degree, weight, cap, index_d)
        lm.set_col(r, coh_d.class_of(coords))
    ok = coh_s.rank == coh_d.rank and lm.rank() == coh_s.rank
    if require_iso and not ok:
        raise NotQuasiIso(
            f"H^{i} piece (ideg {internal_degree}, weight {weight}): "
            f"{coh_s.rank} vs {coh_d.rank}, map rank {lm.rank()}"
        )
    return ok


# --------------------------------------------------------------- base change


def base_change_map(src_cx: CechLocalComplex, dst_cx: CechLocalComplex, carrier_map):
    """The chain map Č(a; M) -> Č(g(a); M⊗B) induced by a carrier morphism."""

    def mapped(cochain: CechCochain):
        out = {}
        for H, f in cochain.table.items():
            host = dst_cx.levels[H]
            out[H] = LocFrac(host, carrier_map(f.numer), f.exps)
        return CechCochain(dst_cx, cochain.level, out)

    return mapped


def check_semifree_filtration(module: DGModule, gen_names):
    """Semifreeness certificate: the differential of each module generator
    only involves earlier generators in the listed order."""
    carrier = module.carrier
    order = {nm: i for i, nm in enumerate(gen_names)}
    for nm in gen_names:
        g = carrier.gen(nm)
        dg = module.diff(g)
        for m in dg.terms:
            for i, e in enumerate(m):
                gen = carrier.gens[i]
                if e and gen.name in order and order[gen.name] >= order[nm]:
                    raise NotSemifree(
                        f"d({nm}) involves {gen.name}, violating the filtration"
                    )
    return True


# --------------------------------------------------------------- cycle class


def cycle_class(cx: CechLocalComplex, derham, components):
    """The top-level class d(f_1)∧…∧d(f_p) / (f_1⋯f_p) in Č^p(f; Ω^p).

    ``components`` are the denominators as elements of the base algebra of
    ``derham``; verifies closedness for the Čech and internal differentials
    and returns the cochain."""
    p = cx.n
    omega = derham.omega
    numer = omega.one()
    for f in components:
        numer = numer * derham.d(derham.inject(f))
    H = tuple(range(p))
    frac = LocFrac(cx.levels[H], numer, (1,) * p)
    c = CechCochain(cx, p, {H: frac})
    dc = cx.cech_d(c)
    if not dc.is_zero():
        raise NotClosed("cycle class is not Čech-closed")
    di = cx.internal_d(c)
    if not di.is_zero():
        raise NotClosed("cycle class is not closed for the internal differential")
    return c


def class_nontrivial_in_hyper(cx, cochain, tot_degree, weight, tot_window, cap):
    """Whether the total class of a closed cochain is nonzero."""
    tot, labels, index = cx.tot_complex(weight, tot_window, cap)
    coords = {}
    for H, f in cochain.table.items():
        lvl = len(H)
        for idx, c in cx.levels[H].coords(
            f, tot_degree - lvl, weight, cap
        ).items():
            coords[index[tot_degree][(lvl, H, idx)]] = c
    h = tot.cohomology(tot_degree)
    cls = h.class_of(coords)
    return any(cls.values()), cls, h
