"""Exact sparse linear algebra over the rationals.

Vectors are dicts {index: Fraction} with zero entries omitted.  All heavy
row reduction funnels into the integer kernel (compiled or pure Python);
everything here only scales in and out of integer form.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from ._kernel import rref_int

Vec = dict


def vec_add(u: Vec, v: Vec) -> Vec:
    out = dict(u)
    for k, x in v.items():
        s = out.get(k, 0) + x
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


def vec_scale(c, v: Vec) -> Vec:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vec_sub(u: Vec, v: Vec) -> Vec:
    return vec_add(u, vec_scale(-1, v))


def _to_int_row(v: Vec) -> dict:
    if not v:
        return {}
    mult = lcm(*(Fraction(x).denominator for x in v.values())) if v else 1
    row = {k: int(Fraction(x) * mult) for k, x in v.items()}
    g = 0
    for x in row.values():
        g = gcd(g, x)
    if g > 1:
        row = {k: x // g for k, x in row.items()}
    return row


class Echelon:
    """Row space of a set of rational vectors, in reduced echelon form."""

    def __init__(self, rows, ncols):
        self.ncols = ncols
        self.pivots, self.rows = rref_int([_to_int_row(r) for r in rows], ncols)
        self._pivot_pos = {p: i for i, p in enumerate(self.pivots)}

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, v: Vec) -> Vec:
        """Residue of v modulo the row space (pivot coordinates eliminated)."""
        out = {k: Fraction(x) for k, x in v.items() if x}
        for p, i in self._pivot_pos.items():
            c = out.get(p)
            if not c:
                continue
            row = self.rows[i]
            f = c / row[p]
            for k, x in row.items():
                s = out.get(k, Fraction(0)) - f * x
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
        return out

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)


def nullspace(rows, ncols):
    """Basis of {x : row . x = 0 for every row}."""
    pivots, ech = rref_int([_to_int_row(r) for r in rows], ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = {free: Fraction(1)}
        for p, row in zip(pivots, ech):
            c = row.get(free)
            if c:
                vec[p] = Fraction(-c, row[p])
        basis.append(vec)
    return basis


def solve(rows, ncols, rhs):
    """One solution of the affine system (row_i . x = rhs_i), or None.

    ``rhs`` is a dict {row index: Fraction}.
    """
    aug = []
    for i, r in enumerate(rows):
        row = dict(r)
        b = rhs.get(i)
        if b:
            row[ncols] = b
        aug.append(row)
    pivots, ech = rref_int([_to_int_row(r) for r in aug], ncols + 1)
    sol = {}
    for p, row in zip(pivots, ech):
        if p == ncols:
            return None
        # free variables set to zero: only the augmented column contributes
        c = row.get(ncols)
        if c:
            sol[p] = Fraction(c, row[p])
    return sol


class LinMap:
    """Sparse linear map; ``cols[j]`` is the image of source basis vector j."""

    def __init__(self, src_dim, dst_dim, cols=None):
        self.src_dim = src_dim
        self.dst_dim = dst_dim
        self.cols = [dict() for _ in range(src_dim)] if cols is None else cols

    def set_col(self, j, vec: Vec):
        self.cols[j] = {k: Fraction(v) for k, v in vec.items() if v}

    def apply(self, vec: Vec) -> Vec:
        out = {}
        for j, c in vec.items():
            if not c:
                continue
            for k, x in self.cols[j].items():
                s = out.get(k, Fraction(0)) + c * x
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
        return out

    def compose(self, other: "LinMap") -> "LinMap":
        """self after other."""
        if other.dst_dim != self.src_dim:
            raise ValueError("dimension mismatch in composition")
        cols = [self.apply(c) for c in other.cols]
        return LinMap(other.src_dim, self.dst_dim, cols)

    def add(self, other: "LinMap", sign=1) -> "LinMap":
        cols = [vec_add(a, vec_scale(sign, b)) for a, b in zip(self.cols, other.cols)]
        return LinMap(self.src_dim, self.dst_dim, cols)

    def scale(self, c) -> "LinMap":
        return LinMap(self.src_dim, self.dst_dim, [vec_scale(c, col) for col in self.cols])

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def transpose_rows(self):
        """Rows of the matrix (equations), as vectors over the source indices."""
        rows = [dict() for _ in range(self.dst_dim)]
        for j, col in enumerate(self.cols):
            for k, x in col.items():
                rows[k][j] = x
        return rows

    def kernel_basis(self):
        return nullspace(self.transpose_rows(), self.src_dim)

    def image_echelon(self) -> Echelon:
        return Echelon(self.cols, self.dst_dim)

    def rank(self) -> int:
        return self.image_echelon().rank

    def preimage(self, target: Vec):
        """Some x with self(x) = target, or None."""
        rows = self.transpose_rows()
        rhs = {k: Fraction(v) for k, v in target.items() if v}
        return solve(rows, self.src_dim, rhs)


def cohomology_reps(d_out: LinMap, d_in):
    """Representatives of ker(d_out)/im(d_in).

    Returns (rank, reps, image_echelon); reps are kernel vectors whose
    classes form a basis of the quotient.
    """
    kernel = d_out.kernel_basis() if d_out is not None else [
        {j: Fraction(1)} for j in range(d_in.dst_dim)
    ]
    im_rows = list(d_in.cols) if d_in is not None else []
    ech = Echelon(im_rows, d_out.src_dim if d_out is not None else d_in.dst_dim)
    base_rank = ech.rank
    reps = []
    kept = list(im_rows)
    for k in kernel:
        trial = Echelon(kept + [k], ech.ncols)
        if trial.rank > base_rank + len(reps):
            reps.append(k)
            kept.append(k)
    return len(reps), reps, ech


def class_coords(v: Vec, reps, image_ech: Echelon):
    """Coordinates of the class of v in the basis ``reps`` of ker/im.

    Raises ValueError if v is not in span(reps) + im.
    """
    ncols = image_ech.ncols
    columns = list(reps) + [
        {k: Fraction(x) for k, x in row.items()} for row in image_ech.rows
    ]
    rows = [dict() for _ in range(ncols)]
    for j, col in enumerate(columns):
        for k, x in col.items():
            rows[k][j] = x
    rhs = {k: Fraction(x) for k, x in v.items() if x}
    sol = solve(rows, len(columns), rhs)
    if sol is None:
        raise ValueError("vector is not a cocycle modulo the image")
    return {i: sol.get(i, Fraction(0)) for i in range(len(reps))}
