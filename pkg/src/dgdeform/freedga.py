"""Finitely generated graded-commutative DG-algebras with monomial normal
forms, derivations given by generator values, Koszul-type models, relative
Kähler differentials, and the de Rham algebra with its contraction calculus.

Elements are dictionaries {monomial: Fraction} where a monomial is a tuple of
exponents in declaration order; odd generators carry exponent at most 1 and
all reordering signs are folded into coefficients.  Every algebra carries a
polynomial-degree cap: operations that would leave the cap raise instead of
silently truncating.

Generators also carry an integer *weight* (an auxiliary grading preserved by
all differentials we construct).  Cohomology is computed one weight piece at
a time, which keeps every piece finite-dimensional and truncation-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegreeCapExceeded,
    IdentityViolation,
    NotAMorphism,
    UnknownGenerator,
)
from .graded import Complex, DegreeWindow, GradedSpace, ksign
from .linalg import LinMap


@dataclass(frozen=True)
class Gen:
    name: str
    degree: int
    weight: int = 1

    @property
    def odd(self):
        return self.degree % 2 != 0


class FreeDGA:
    def __init__(self, gens, cap, name=""):
        self.gens = tuple(gens)
        self.cap = cap
        self.name = name
        names = [g.name for g in self.gens]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        self._pos = {g.name: i for i, g in enumerate(self.gens)}
        self._mono_cache = {}
        self.differential = None

    def set_differential(self, values):
        """Install the differential from generator values; checks d∘d = 0."""
        if self.differential is not None:
            raise ValueError("differential already set")
        d = self.derivation(1, values)
        self.differential = d
        for g in self.gens:
            dd = d(d(self.gen(g.name)))
            if not dd.is_zero():
                self.differential = None
                raise ValueError(f"d∘d != 0 on generator {g.name}: {dd}")
        return d

    # ---------------------------------------------------------------- basics

    def pos(self, name):
        if name not in self._pos:
            raise UnknownGenerator(name)
        return self._pos[name]

    def zero(self):
        return Element(self, {})

    def one(self):
        return Element(self, {(0,) * len(self.gens): Fraction(1)})

    def gen(self, name):
        i = self.pos(name)
        mono = tuple(1 if j == i else 0 for j in range(len(self.gens)))
        return Element(self, {mono: Fraction(1)})

    def scalar(self, c):
        c = Fraction(c)
        if not c:
            return self.zero()
        return Element(self, {(0,) * len(self.gens): c})

    def mono_degree(self, mono):
        return sum(e * g.degree for e, g in zip(mono, self.gens))

    def mono_weight(self, mono):
        return sum(e * g.weight for e, g in zip(mono, self.gens))

    def d(self, elt):
        if self.differential is None:
            return self.zero()
        return self.differential(elt)

    # ------------------------------------------------------- monomial algebra

    def mul_mono(self, m1, m2):
        """Product of canonical monomials: (monomial, sign) or None if an odd
        generator repeats."""
        sign = 0
        odd2 = [i for i, e in enumerate(m2) if e and self.gens[i].odd]
        if odd2:
            odd1 = [i for i, e in enumerate(m1) if e and self.gens[i].odd]
            for j in odd2:
                if m1[j]:
                    return None
                sign += sum(1 for i in odd1 if i > j)
        mono = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
        if self.cap is not None and sum(mono) > self.cap:
            raise DegreeCapExceeded(
                f"monomial degree {sum(mono)} exceeds cap {self.cap} in {self.name or 'algebra'}"
            )
        return mono, (-1) ** sign

    def normal_form(self, word, coeff=1):
        """Canonical element from a word [(name, exponent), ...] in any order."""
        coeff = Fraction(coeff)
        result_mono = (0,) * len(self.gens)
        sign = 1
        for name, exp in word:
            i = self.pos(name)
            if exp < 0:
                raise ValueError("negative exponent")
            if self.gens[i].odd and exp > 1:
                return self.zero()
            step = tuple(exp if j == i else 0 for j in range(len(self.gens)))
            prod = self.mul_mono(result_mono, step)
            if prod is None:
                return self.zero()
            result_mono, s = prod
            sign *= s
        c = coeff * sign
        return Element(self, {result_mono: c} if c else {})

    def monomials(self, degree=None, weight=None):
        """All monomials with the given (degree, weight) and polydeg ≤ cap."""
        cap = self.cap
        if cap not in self._mono_cache:
            buckets = {}
            n = len(self.gens)

            def rec(i, mono, polydeg):
                if i == n:
                    m = tuple(mono)
                    k = (self.mono_degree(m), self.mono_weight(m))
                    buckets.setdefault(k, []).append(m)
                    return
                g = self.gens[i]
                top = 1 if g.odd else cap - polydeg
                for e in range(0, top + 1):
                    if polydeg + e > cap:
                        break
                    mono.append(e)
                    rec(i + 1, mono, polydeg + e)
                    mono.pop()

            rec(0, [], 0)
            for v in buckets.values():
                v.sort()
            self._mono_cache[cap] = buckets
        buckets = self._mono_cache[cap]
        if degree is None and weight is None:
            return buckets
        return list(buckets.get((degree, weight), ()))

    def piece_bound_ok(self, weight, extra_capped=frozenset()):
        """Whether the weight-w monomial pieces are complete below the cap.

        Generators that are odd or listed in ``extra_capped`` contribute a
        bounded exponent; the remaining ones must have nonzero weights of one
        sign, which bounds the polynomial degree of any monomial of weight w.
        """
        capped = [g for g in self.gens if g.odd or g.name in extra_capped]
        unbounded = [g for g in self.gens if not (g.odd or g.name in extra_capped)]
        if any(g.weight == 0 for g in unbounded):
            return False
        signs = {1 if g.weight > 0 else -1 for g in unbounded}
        if len(signs) > 1:
            return False
        capped_poly = len(capped)
        if not unbounded:
            return capped_poly <= self.cap
        s = signs.pop()
        # capped generators whose weight has the same sign only shrink the
        # weight budget left for unbounded ones; opposite signs enlarge it
        opposite = sum(abs(g.weight) for g in capped if s * g.weight < 0)
        minw = min(abs(g.weight) for g in unbounded)
        bound = capped_poly + max(0, s * weight + opposite) // minw
        return bound <= self.cap

    def derivation(self, degree, values, base=(), check_degrees=True):
        vals = {}
        for name, elt in values.items():
            vals[self.pos(name)] = elt
        base_idx = frozenset(self.pos(b) for b in base)
        for i in base_idx:
            v = vals.get(i)
            if v is not None and not v.is_zero():
                raise ValueError(
                    f"derivation must vanish on base generator {self.gens[i].name}"
                )
        return Derivation(self, degree, vals, base=base_idx, check_degrees=check_degrees)

    def parse(self, text):
        """Parse '3/2 x^2 y - z' style element literals."""
        text = text.replace("**", "^").replace("*", " ")
        text = text.replace("-", " + -1 § ").replace("+", " + ")
        total = self.zero()
        for chunk in text.split("+"):
            chunk = chunk.replace("§", " ")
            toks = chunk.split()
            if not toks:
                continue
            coeff = Fraction(1)
            word = []
            for tok in toks:
                body = tok.lstrip("-").replace("/", "")
                if body.isdigit():
                    coeff *= Fraction(tok)
                elif "^" in tok:
                    nm, ex = tok.split("^")
                    word.append((nm, int(ex)))
                else:
                    word.append((tok, 1))
            total = total + self.normal_form(word, coeff)
        return total

    def __repr__(self):
        return f"FreeDGA({self.name or ','.join(g.name for g in self.gens)})"


class Element:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms):
        self.algebra = algebra
        self.terms = {m: c for m, c in terms.items() if c}

    def is_zero(self):
        return not self.terms

    def degree(self):
        degs = {self.algebra.mono_degree(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element {self}")
        return degs.pop()

    def weight(self):
        ws = {self.algebra.mono_weight(m) for m in self.terms}
        if not ws:
            return None
        if len(ws) > 1:
            raise ValueError(f"weight-inhomogeneous element {self}")
        return ws.pop()

    def polydeg(self):
        return max((sum(m) for m in self.terms), default=0)

    def homogeneous_parts(self):
        """Split into (degree, weight) -> Element."""
        parts = {}
        for m, c in self.terms.items():
            k = (self.algebra.mono_degree(m), self.algebra.mono_weight(m))
            parts.setdefault(k, {})[m] = c
        return {k: Element(self.algebra, v) for k, v in parts.items()}

    def coefficient(self, mono):
        return self.terms.get(mono, Fraction(0))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if other.algebra is not self.algebra:
            raise ValueError("elements of different algebras")
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            elif m in out:
                del out[m]
        return Element(self.algebra, out)

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self.algebra.zero()
            return Element(self.algebra, {m: c * x for m, x in self.terms.items()})
        if other.algebra is not self.algebra:
            raise ValueError("elements of different algebras")
        out = {}
        A = self.algebra
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                prod = A.mul_mono(m1, m2)
                if prod is None:
                    continue
                mono, sign = prod
                s = out.get(mono, Fraction(0)) + sign * c1 * c2
                if s:
                    out[mono] = s
                elif mono in out:
                    del out[mono]
        return Element(A, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n):
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.algebra), frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in sorted(self.terms.items()):
            factors = [
                g.name if e == 1 else f"{g.name}^{e}"
                for e, g in zip(m, self.algebra.gens)
                if e
            ]
            body = "·".join(factors) if factors else "1"
            if c == 1 and factors:
                bits.append(body)
            elif c == -1 and factors:
                bits.append(f"-{body}")
            else:
                bits.append(f"{c}·{body}" if factors else f"{c}")
        return " + ".join(bits).replace("+ -", "- ")


class Derivation:
    """Graded derivation of a FreeDGA determined by its generator values."""

    __slots__ = ("algebra", "degree", "values", "base")

    def __init__(self, algebra, degree, values, base=frozenset(), check_degrees=True):
        self.algebra = algebra
        self.degree = degree
        self.values = {i: v for i, v in values.items() if not v.is_zero()}
        self.base = frozenset(base)
        if check_degrees:
            for i, v in self.values.items():
                d = v.degree()
                if d is not None and d != algebra.gens[i].degree + degree:
                    raise ValueError(
                        f"value on {algebra.gens[i].name} has degree {d}, "
                        f"expected {algebra.gens[i].degree + degree}"
                    )

    def value_on(self, name):
        i = self.algebra.pos(name)
        return self.values.get(i, self.algebra.zero())

    def is_zero(self):
        return not self.values

    def weight_shift(self):
        """Common weight shift of all generator values; raises if mixed."""
        shifts = set()
        for i, v in self.values.items():
            shifts.add(v.weight() - self.algebra.gens[i].weight)
        if not shifts:
            return 0
        if len(shifts) > 1:
            raise ValueError("derivation is not weight-homogeneous")
        return shifts.pop()

    def __call__(self, elt):
        A = self.algebra
        out = A.zero()
        n = self.degree
        for mono, coeff in elt.terms.items():
            prefix_deg = 0
            for i, e in enumerate(mono):
                if not e:
                    continue
                g = A.gens[i]
                val = self.values.get(i)
                if val is not None:
                    prefix = tuple(mono[j] if j < i else 0 for j in range(len(mono)))
                    suffix = tuple(
                        0 if j <= i else mono[j] for j in range(len(mono))
                    )
                    block = val
                    if e > 1:
                        block = (A.normal_form([(g.name, e - 1)]) * val) * e
                    sign = ksign(n * prefix_deg)
                    term = (
                        Element(A, {prefix: sign * coeff})
                        * block
                        * Element(A, {suffix: Fraction(1)})
                    )
                    out = out + term
                prefix_deg += e * g.degree
        return out

    def bracket(self, other):
        """Graded commutator as a derivation, by generator values."""
        A = self.algebra
        vals = {}
        sign = ksign(self.degree * other.degree)
        for i, g in enumerate(A.gens):
            x = A.gen(g.name)
            v = self(other(x)) - sign * other(self(x))
            if not v.is_zero():
                vals[i] = v
        return Derivation(
            A, self.degree + other.degree, vals, base=self.base & other.base
        )

    def d(self):
        """[δ, self] for the algebra differential δ."""
        if self.algebra.differential is None:
            return Derivation(self.algebra, self.degree + 1, {}, base=self.base)
        return self.algebra.differential.bracket(self)

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("derivations of different degrees")
        vals = dict(self.values)
        for i, v in other.values.items():
            s = vals.get(i)
            vals[i] = v if s is None else s + v
        return Derivation(self.algebra, self.degree, vals, base=self.base & other.base)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        c = Fraction(c)
        return Derivation(
            self.algebra,
            self.degree,
            {i: c * v for i, v in self.values.items()},
            base=self.base,
        )

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        if self.algebra is not other.algebra or self.degree != other.degree:
            return False
        keys = set(self.values) | set(other.values)
        return all(
            self.values.get(k, self.algebra.zero())
            == other.values.get(k, self.algebra.zero())
            for k in keys
        )

    def __repr__(self):
        vals = ", ".join(
            f"{self.algebra.gens[i].name}↦{v}" for i, v in sorted(self.values.items())
        )
        return f"Der[{self.degree}]({vals})"


class AlgebraMorphism:
    """DG-algebra morphism determined by generator images."""

    def __init__(self, source, target, images, check_chain=True):
        self.source = source
        self.target = target
        self.images = []
        for g in source.gens:
            if g.name not in images:
                raise UnknownGenerator(f"no image for generator {g.name}")
            img = images[g.name]
            d = img.degree()
            if d is not None and d != g.degree:
                raise NotAMorphism(f"image of {g.name} has degree {d} != {g.degree}")
            self.images.append(img)
        if check_chain and source.differential is not None:
            for g in source.gens:
                lhs = self(source.d(source.gen(g.name)))
                rhs = target.d(self(source.gen(g.name)))
                if lhs != rhs:
                    raise NotAMorphism(f"does not commute with d on {g.name}")

    def __call__(self, elt):
        out = self.target.zero()
        for mono, coeff in elt.terms.items():
            term = self.target.scalar(coeff)
            for e, img in zip(mono, self.images):
                for _ in range(e):
                    term = term * img
            out = out + term
        return out


def inclusion(sub: FreeDGA, big: FreeDGA, check_chain=False):
    return AlgebraMorphism(
        sub, big, {g.name: big.gen(g.name) for g in sub.gens}, check_chain=check_chain
    )


# ----------------------------------------------------------------- models


def polynomial_algebra(names, cap, weights=None, name=""):
    weights = weights or {}
    gens = [Gen(n, 0, weights.get(n, 1)) for n in names]
    return FreeDGA(gens, cap, name=name)


def _component_weight(f):
    return 1 if f.is_zero() else f.weight()


def koszul_model(P, components, y_names=None):
    """Koszul algebra R = P[y_1..y_p], deg y_i = -1, d(y_i) = f_i.

    Returns (R, inclusion P -> R)."""
    if P.differential is not None and not P.differential.is_zero():
        raise ValueError("base algebra must have zero differential")
    p = len(components)
    y_names = y_names or [f"y{i + 1}" for i in range(p)]
    for f in components:
        if f.polydeg() > P.cap:
            raise DegreeCapExceeded(f"component {f} exceeds cap {P.cap}")
    gens = list(P.gens) + [
        Gen(nm, -1, _component_weight(f)) for nm, f in zip(y_names, components)
    ]
    R = FreeDGA(gens, P.cap, name=(P.name + "_kz") if P.name else "koszul")
    incl = inclusion(P, R)
    R.set_differential({nm: incl(f) for nm, f in zip(y_names, components)})
    return R, incl


def ess_model(P, components, z_names=None, y_names=None):
    """Extended model S = P[z_1..z_p, y_1..y_p], d(y_i) = f_i - z_i, with the
    surjective quasi-isomorphism S -> P, y_i -> 0, z_i -> f_i.

    Returns (S, projection S -> P, inclusion P -> S)."""
    if P.differential is not None and not P.differential.is_zero():
        raise ValueError("base algebra must have zero differential")
    p = len(components)
    z_names = z_names or [f"z{i + 1}" for i in range(p)]
    y_names = y_names or [f"y{i + 1}" for i in range(p)]
    gens = list(P.gens)
    gens += [Gen(nm, 0, _component_weight(f)) for nm, f in zip(z_names, components)]
    gens += [Gen(nm, -1, _component_weight(f)) for nm, f in zip(y_names, components)]
    S = FreeDGA(gens, P.cap, name=(P.name + "_ess") if P.name else "ess")
    incl = inclusion(P, S)
    S.set_differential(
        {ynm: incl(f) - S.gen(znm) for ynm, znm, f in zip(y_names, z_names, components)}
    )
    proj_images = {g.name: P.gen(g.name) for g in P.gens}
    for nm, f in zip(z_names, components):
        proj_images[nm] = f
    for nm in y_names:
        proj_images[nm] = P.zero()
    proj = AlgebraMorphism(S, P, proj_images, check_chain=True)
    return S, proj, incl


# ------------------------------------------------------------ de Rham algebra

D_PREFIX = "d@"


def d_name(name):
    return D_PREFIX + name


class DeRhamAlgebra:
    """Forms on a free DG-algebra S: the free graded-commutative algebra on
    the generators of S together with symbols d@g of degree deg(g)+1.

    Carries the de Rham differential d, the internal differential L_δ lifted
    from the differential δ of S, interior products and Lie derivatives of
    S-derivations, and the bigrading by form degree (number of d@ factors,
    counted with exponents)."""

    def __init__(self, S, cap=None, relative_base=()):
        self.S = S
        self.relative_base = frozenset(relative_base)
        cap = cap if cap is not None else S.cap + 2
        gens = list(S.gens)
        for g in S.gens:
            if g.name in self.relative_base:
                continue
            gens.append(Gen(d_name(g.name), g.degree + 1, g.weight))
        self.omega = FreeDGA(gens, cap, name=(S.name + "_forms") if S.name else "forms")
        self.inject = inclusion(S, self.omega)
        self.n_base = len(S.gens)
        self._dpos = {
            i for i in range(len(gens)) if gens[i].name.startswith(D_PREFIX)
        }
        d_vals = {
            g.name: self.omega.gen(d_name(g.name))
            for g in S.gens
            if g.name not in self.relative_base
        }
        self.d = self.omega.derivation(1, d_vals)
        if S.differential is not None:
            self.L_internal = self.lie(S.differential)
        else:
            self.L_internal = self.omega.derivation(1, {})
        self.total = self.d + self.L_internal

    def interior(self, alpha):
        """i_α: d@g -> α(g), vanishing on S; degree deg(α) - 1."""
        if alpha.algebra is not self.S:
            raise ValueError("derivation must live on the base algebra")
        vals = {}
        for i, v in alpha.values.items():
            nm = self.S.gens[i].name
            if nm in self.relative_base:
                continue
            vals[d_name(nm)] = self.inject(v)
        return self.omega.derivation(alpha.degree - 1, vals)

    def lie(self, alpha):
        """L_α: g -> α(g), d@g -> (-1)^{deg α} d(α(g)); degree deg(α)."""
        if alpha.algebra is not self.S:
            raise ValueError("derivation must live on the base algebra")
        sign = ksign(alpha.degree)
        vals = {}
        for i, v in alpha.values.items():
            g = self.S.gens[i]
            lifted = self.inject(v)
            vals[g.name] = lifted
            if g.name not in self.relative_base:
                dv = self.d(lifted)
                if not dv.is_zero():
                    vals[d_name(g.name)] = sign * dv
            elif not v.is_zero():
                raise ValueError("internal differential must preserve the base")
        return self.omega.derivation(alpha.degree, vals)

    def source_diff(self, alpha):
        """Differential of the derivation DGLA feeding the contraction
        calculus: a ↦ -[δ, a].

        Sign convention (fixed here once, verified by the identity suite):
        with i_α(d@g) = α(g) and L_α = [i_α, d], the identity
        i_{[α,β]} = [L_α, i_β] holds for all degrees, so pairing the target
        differential [d + L_δ, -] with the source differential -[δ, -] is
        the unique choice making [L_δ, i_β] + i_{source_diff β} = 0 and
        [d+L_δ, i_α] + i_{source_diff α} = (-1)^{deg α} L_α both exact.
        The flip is an isomorphism of DGLAs (a ↦ (-1)^{deg a} a), so no
        invariant is affected."""
        if self.S.differential is None:
            return Derivation(self.S, alpha.degree + 1, {}, base=alpha.base)
        return -1 * self.S.differential.bracket(alpha)

    def ell(self, alpha):
        """The degree-0 companion of the contraction: [d+L_δ, i_α] +
        i_{source_diff α}; equals (-1)^{deg α} L_α."""
        return self.total.bracket(self.interior(alpha)) + self.interior(
            self.source_diff(alpha)
        )

    def form_degree(self, mono):
        return sum(mono[i] for i in self._dpos)

    def form_component(self, elt, j):
        return Element(
            self.omega,
            {m: c for m, c in elt.terms.items() if self.form_degree(m) == j},
        )

    def max_form_degree(self, elt):
        return max((self.form_degree(m) for m in elt.terms), default=0)


def cartan_identity_suite(derham: DeRhamAlgebra, derivations):
    """Exact verification of the contraction-calculus identities on the de
    Rham algebra, for every pair drawn from ``derivations``.  Operators are
    compared as derivations (equality of all generator values), which
    determines them completely.  Raises IdentityViolation on the first
    failure; returns the number of identities checked.

    For derivations α, β of the base, δ its differential, and ∂ the source
    differential a ↦ -[δ,a] (see DeRhamAlgebra.source_diff for why):
      (1) [i_α, i_β] = 0
      (2) L_β = [i_β, d] = (-1)^{deg β} [d, i_β]
      (3) i_{[α,β]} = [L_α, i_β]
      (4) [L_α, d] = 0 and L_{[α,β]} = [L_α, L_β]
      (5) [L_δ, i_β] + i_{∂β} = 0
      (6) i_{[α,β]} = [[i_α, d+L_δ], i_β] = [i_α, [d+L_δ, i_β]]
      (7) [d+L_δ, i_α] + i_{∂α} = (-1)^{deg α} L_α
    """
    checked = 0
    d = derham.d
    delta = derham.S.differential
    has_internal = delta is not None and not delta.is_zero()

    def fail(item, pair):
        raise IdentityViolation(f"calculus identity ({item}) failed", witness=pair)

    for a in derivations:
        ia, La = derham.interior(a), derham.lie(a)
        if not La == ia.bracket(d):
            fail(2, (a,))
        if not La == ksign(a.degree) * d.bracket(ia):
            fail(2, (a,))
        if not La.bracket(d).is_zero():
            fail(4, (a,))
        checked += 3
        if has_internal:
            Ld = derham.L_internal
            if not (Ld.bracket(ia) + derham.interior(derham.source_diff(a))).is_zero():
                fail(5, (a,))
            if not derham.ell(a) == ksign(a.degree) * La:
                fail(7, (a,))
            checked += 2
        for b in derivations:
            ib, Lb = derham.interior(b), derham.lie(b)
            if not ia.bracket(ib).is_zero():
                fail(1, (a, b))
            iab = derham.interior(a.bracket(b))
            if not iab == La.bracket(ib):
                fail(3, (a, b))
            if not derham.lie(a.bracket(b)) == La.bracket(Lb):
                fail(4, (a, b))
            checked += 3
            if has_internal:
                if not iab == ia.bracket(derham.total).bracket(ib):
                    fail(6, (a, b))
                if not iab == ia.bracket(derham.total.bracket(ib)):
                    fail(6, (a, b))
                checked += 2
    return checked


# ------------------------------------------------- modules and their complexes


class DGModule:
    """A monomial-selected slice of a free DG-algebra, viewed as a DG-module.

    ``carrier`` supplies the ambient arithmetic; ``select`` picks the
    monomials that belong to the module; ``diff`` is a Derivation of the
    carrier (degree +1) preserving the slice; ``capped_gens`` lists carrier
    generators whose exponent is bounded by the slice (for cap honesty
    checks)."""

    def __init__(self, carrier, select=None, diff=None, capped_gens=(), name=""):
        self.carrier = carrier
        self.select = select or (lambda mono: True)
        self.diff_derivation = diff
        self.capped_gens = frozenset(capped_gens)
        self.name = name

    def zero(self):
        return self.carrier.zero()

    def basis_monos(self, degree, weight):
        return [m for m in self.carrier.monomials(degree, weight) if self.select(m)]

    def basis(self, degree, weight):
        return [
            Element(self.carrier, {m: Fraction(1)})
            for m in self.basis_monos(degree, weight)
        ]

    def coords(self, elt, degree, weight):
        index = {m: i for i, m in enumerate(self.basis_monos(degree, weight))}
        out = {}
        for m, c in elt.terms.items():
            if m not in index:
                raise ValueError(f"element has a term outside the piece: {m}")
            out[index[m]] = c
        return out

    def diff(self, elt):
        if self.diff_derivation is None:
            return self.carrier.zero()
        return self.diff_derivation(elt)

    def member(self, elt):
        return all(self.select(m) for m in elt.terms)

    def piece_bound_ok(self, weight):
        return self.carrier.piece_bound_ok(weight, extra_capped=self.capped_gens)


def module_over_self(A, name=""):
    return DGModule(A, diff=A.differential, name=name or A.name)


def form_module(derham: DeRhamAlgebra, j=None, total=True, name=""):
    """Ω^j (or all of Ω^* when j is None) with the internal differential L_δ,
    or the total differential d + L_δ."""
    select = None if j is None else (lambda m: derham.form_degree(m) == j)
    diff = derham.total if total else derham.L_internal
    return DGModule(derham.omega, select=select, diff=diff, name=name)


def free_module(A, gen_specs, name=""):
    """Free module over A on generators (name, degree, weight); realized as
    the exponent-sum-one slice of an extended carrier algebra.

    Returns (module, lift morphism A -> carrier); install a differential by
    assigning ``module.diff_derivation`` afterwards if needed."""
    extra = [Gen(n, d, w) for (n, d, w) in gen_specs]
    gens = list(A.gens) + extra
    carrier = FreeDGA(gens, (A.cap or 0) + 1, name=name or (A.name + "_free"))
    nbase = len(A.gens)

    def select(mono):
        return sum(mono[nbase:]) == 1

    lift = inclusion(A, carrier)
    diff = None
    if A.differential is not None:
        vals = {
            A.gens[i].name: lift(v) for i, v in A.differential.values.items()
        }
        diff = carrier.derivation(1, vals)
    mod = DGModule(
        carrier,
        select=select,
        diff=diff,
        capped_gens=[g.name for g in extra],
        name=name,
    )
    return mod, lift


def module_complex(module: DGModule, weight, window: DegreeWindow, check_cap=True):
    """Assemble the weight-w piece of a DG-module as an explicit Complex.

    Returns (Complex, {degree: [monomials]})."""
    if check_cap and not module.piece_bound_ok(weight):
        raise DegreeCapExceeded(
            f"weight-{weight} pieces of {module.carrier.name} may be truncated; raise the cap"
        )
    basis = {}
    monos = {}
    for n in window.degrees():
        ms = module.basis_monos(n, weight)
        monos[n] = ms
        basis[n] = [("m", m) for m in ms]
    space = GradedSpace(window, basis)
    diff = {}
    for n in window.degrees():
        if n + 1 not in window:
            continue
        index = {m: i for i, m in enumerate(monos[n + 1])}
        lm = LinMap(len(monos[n]), len(monos[n + 1]))
        for j, m in enumerate(monos[n]):
            img = module.diff(Element(module.carrier, {m: Fraction(1)}))
            col = {}
            for m2, c in img.terms.items():
                if m2 not in index:
                    raise DegreeCapExceeded(
                        f"differential leaves the piece (degree {n}, weight {weight})"
                    )
                col[index[m2]] = c
            lm.set_col(j, col)
        diff[n] = lm
    return Complex(space, diff, check=False), monos


def piece_cohomology(module: DGModule, degree, weight, window: DegreeWindow):
    """Cohomology of one (degree, weight) piece of a DG-module."""
    cx, monos = module_complex(module, weight, window)
    return cx.cohomology(degree), monos


class RelativeDifferentials:
    """Ω_{B/A} for B free over the subalgebra spanned by ``base_names``: the
    free B-module on symbols d@x for the non-base generators x, with
    deg(d@x) = deg(x) (the universal derivation has degree 0) and module
    differential δ(d@x) = d(δx), extended by the Leibniz rule.

    Note the contrast with DeRhamAlgebra, whose form symbols sit in shifted
    degree deg(x)+1 and whose internal differential carries the shift sign."""

    def __init__(self, B, base_names, cap=None):
        self.B = B
        self.base_names = frozenset(base_names)
        cap = cap if cap is not None else B.cap + 1
        gens = list(B.gens)
        self.symbol_names = []
        for g in B.gens:
            if g.name in self.base_names:
                continue
            gens.append(Gen(d_name(g.name), g.degree, g.weight))
            self.symbol_names.append(d_name(g.name))
        self.carrier = FreeDGA(
            gens, cap, name=(B.name + "_rel_forms") if B.name else "rel_forms"
        )
        self.inject = inclusion(B, self.carrier)
        self.n_base = len(B.gens)
        # degree-0 universal derivation: x -> d@x on non-base generators
        self.d0 = self.carrier.derivation(
            0,
            {
                g.name: self.carrier.gen(d_name(g.name))
                for g in B.gens
                if g.name not in self.base_names
            },
        )
        vals = {}
        if B.differential is not None:
            for i, v in B.differential.values.items():
                g = B.gens[i]
                lifted = self.inject(v)
                vals[g.name] = lifted
                dv = self.d0(lifted)
                if not dv.is_zero():
                    vals[d_name(g.name)] = dv
        diff = self.carrier.derivation(1, vals)
        self.module = DGModule(
            self.carrier,
            select=lambda m: sum(m[self.n_base :]) == 1,
            diff=diff,
            capped_gens=self.symbol_names,
            name=(B.name + "_rel") if B.name else "rel",
        )

    def d_universal(self, b):
        """The universal derivation B -> Ω_{B/A} (degree 0)."""
        return self.d0(self.inject(b))

    def der_to_hom(self, theta):
        """A-linear derivation -> B-module map Ω_{B/A} -> B, by d@x values."""
        return {
            g.name: theta.value_on(g.name)
            for g in self.B.gens
            if g.name not in self.base_names
        }

    def hom_to_der(self, values, degree):
        """B-module map given on d@x -> the corresponding A-linear derivation."""
        return self.B.derivation(degree, values, base=self.base_names)

    def hom_apply(self, values, degree, form):
        """Evaluate the module map {x: value on d@x} on a relative 1-form,
        realized as the derivation of the carrier sending d@x to the value
        (the canonical isomorphism with A-linear derivations)."""
        vals = {
            d_name(nm): self.inject(v) for nm, v in values.items() if not v.is_zero()
        }
        op = self.carrier.derivation(degree, vals)
        return op(form)
