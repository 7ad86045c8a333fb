"""Integer-graded vector spaces and complexes over the rationals, truncated
to a finite degree window; cohomology, Hom complexes and shifts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import WindowTooNarrow
from .linalg import LinMap, class_coords, cohomology_reps

def ksign(k):
    """(-1)**k, safe for negative k."""
    return -1 if k % 2 else 1



@dataclass(frozen=True)
class DegreeWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty degree window [{self.lo},{self.hi}]")

    def __contains__(self, n):
        return self.lo <= n <= self.hi

    def degrees(self):
        return range(self.lo, self.hi + 1)


class GradedSpace:
    """Finite ordered basis per degree; labels are arbitrary hashables."""

    def __init__(self, window: DegreeWindow, basis: dict):
        self.window = window
        self.basis = {n: list(basis.get(n, ())) for n in window.degrees()}
        for n, labels in self.basis.items():
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate basis labels in degree {n}")
        self._index = {
            n: {lab: i for i, lab in enumerate(labels)}
            for n, labels in self.basis.items()
        }

    def dim(self, n):
        return len(self.basis.get(n, ()))

    def index(self, n, label):
        return self._index[n][label]

    def total_dim(self):
        return sum(len(b) for b in self.basis.values())


@dataclass
class CohomologyBasis:
    degree: int
    representatives: list
    rank: int
    image_echelon: object = None

    def class_of(self, cocycle):
        """Coordinates of a cocycle's class in this basis."""
        return class_coords(cocycle, self.representatives, self.image_echelon)


class Complex:
    """Graded space with a degree +1 differential given by per-degree matrices."""

    def __init__(self, space: GradedSpace, diff: dict, check=True):
        self.space = space
        self.window = space.window
        self.d = {}
        for n in self.window.degrees():
            m = diff.get(n)
            if m is None:
                m = LinMap(space.dim(n), space.dim(n + 1) if n + 1 in self.window else 0)
            if m.src_dim != space.dim(n):
                raise ValueError(f"differential at degree {n} has wrong source dim")
            self.d[n] = m
        if check:
            self._check_square_zero()

    def _check_square_zero(self):
        for n in self.window.degrees():
            if n + 1 not in self.window:
                continue
            comp = self.d[n + 1].compose(self.d[n])
            if not comp.is_zero():
                raise ValueError(f"d∘d != 0 from degree {n}")

    def dim(self, n):
        return self.space.dim(n)

    def diff_map(self, n) -> LinMap:
        if n in self.window:
            return self.d[n]
        hi_dim = self.space.dim(n + 1) if n + 1 in self.window else 0
        return LinMap(0 if n not in self.window else self.space.dim(n), hi_dim)

    def cohomology(self, n) -> CohomologyBasis:
        if n not in self.window or (n - 1) not in self.window or (n + 1) not in self.window:
            raise WindowTooNarrow(
                f"degree {n}±1 must lie inside the window [{self.window.lo},{self.window.hi}]"
            )
        rank, reps, ech = cohomology_reps(self.d[n], self.d[n - 1])
        return CohomologyBasis(n, reps, rank, ech)

    def euler_characteristic(self):
        return sum(ksign(n) * self.dim(n) for n in self.window.degrees())


def shift(cx: Complex, n: int) -> Complex:
    """V[n]^i = V^{i+n} with differential scaled by (-1)^n."""
    win = DegreeWindow(cx.window.lo - n, cx.window.hi - n)
    basis = {i: list(cx.space.basis.get(i + n, ())) for i in win.degrees()}
    space = GradedSpace(win, basis)
    sign = ksign(n)
    diff = {i: cx.d[i + n].scale(sign) for i in win.degrees() if (i + n) in cx.window}
    return Complex(space, diff, check=False)


def hom_complex(V: Complex, W: Complex) -> Complex:
    """Hom*(V, W) on the induced window, with δ(f) = d_W∘f − (−1)^{deg f} f∘d_V.

    Basis labels in degree n are triples (i, a, b): the elementary map
    sending V^i basis vector a to W^{i+n} basis vector b.
    """
    lo = min(W.window.lo - V.window.hi, 0)
    hi = max(W.window.hi - V.window.lo, 0)
    win = DegreeWindow(lo, hi)
    basis = {}
    for n in win.degrees():
        labels = []
        for i in V.window.degrees():
            j = i + n
            if j not in W.window:
                continue
            for a in range(V.dim(i)):
                for b in range(W.dim(j)):
                    labels.append((i, a, b))
        basis[n] = labels
    space = GradedSpace(win, basis)
    diff = {}
    for n in win.degrees():
        if n + 1 not in win:
            continue
        m = LinMap(space.dim(n), space.dim(n + 1))
        tgt_index = space._index[n + 1]
        for src_pos, (i, a, b) in enumerate(basis[n]):
            col = {}
            # d_W ∘ f : contributes at (i, a, b') for b' in d_W(b)
            if i + n in W.window and i + n + 1 in W.window:
                for b2, c in W.d[i + n].cols[b].items():
                    key = (i, a, b2)
                    if key in tgt_index:
                        col[tgt_index[key]] = col.get(tgt_index[key], Fraction(0)) + c
            # (−1)^n f ∘ d_V : contributes at (i-1, a', b) for a' with d_V(a') ∋ a
            if i - 1 in V.window:
                for a2 in range(V.dim(i - 1)):
                    c = V.d[i - 1].cols[a2].get(a)
                    if c:
                        key = (i - 1, a2, b)
                        if key in tgt_index:
                            col[tgt_index[key]] = col.get(
                                tgt_index[key], Fraction(0)
                            ) - ksign(n) * c
            m.set_col(src_pos, col)
        diff[n] = m
    return Complex(space, diff, check=False)
