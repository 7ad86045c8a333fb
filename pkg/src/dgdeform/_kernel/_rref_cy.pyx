# cython: language_level=3
"""Fraction-free sparse row reduction over the integers (compiled kernel).

Algorithmically identical to ``rref_py.rref_int``; the wins come from typed
loop variables and reduced interpreter overhead.  Entries stay arbitrary-
precision Python ints, so there is no overflow to guard against.
"""

from math import gcd


cdef dict _normalize(dict row):
    cdef object g = 0
    for v in row.values():
        g = gcd(g, v)
    if g > 1:
        for c in row:
            row[c] = row[c] // g
    return row


cdef list _eliminate(list bucket, Py_ssize_t col, object p, dict piv):
    cdef list kept = []
    cdef dict r, new
    cdef object f, v, w
    for r in bucket:
        f = r.get(col)
        if not f:
            kept.append(r)
            continue
        new = {}
        for c, v in r.items():
            new[c] = p * v
        for c, v in piv.items():
            w = new.get(c, 0) - f * v
            if w:
                new[c] = w
            elif c in new:
                del new[c]
        if new:
            kept.append(_normalize(new))
    return kept


def rref_int(rows, Py_ssize_t ncols):
    cdef list work = []
    cdef dict rr, piv
    cdef Py_ssize_t col, i, best
    cdef object v, p
    for r in rows:
        rr = {c: v for c, v in r.items() if v}
        if rr:
            work.append(_normalize(rr))
    cdef list pivots = []
    cdef list out = []
    for col in range(ncols):
        best = -1
        best_key = None
        for i in range(len(work)):
            v = (<dict>work[i]).get(col)
            if v:
                key = (abs(v).bit_length(), len(<dict>work[i]))
                if best_key is None or key < best_key:
                    best = i
                    best_key = key
        if best < 0:
            continue
        piv = work.pop(best)
        p = piv[col]
        if p < 0:
            piv = {c: -v for c, v in piv.items()}
            p = -p
        work = _eliminate(work, col, p, piv)
        out = _eliminate(out, col, p, piv)
        out.append(piv)
        pivots.append(col)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [pivots[i] for i in order], [out[i] for i in order]
