"""Fraction-free sparse row reduction over the integers (pure-Python kernel).

The compiled kernel in ``_rref_cy.pyx`` implements the identical algorithm;
both must produce bit-identical output so results never depend on which one
was selected at import time.
"""

from math import gcd


def _normalize(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if g > 1:
        for c in row:
            row[c] //= g
    return row


def rref_int(rows, ncols):
    """Gauss-Jordan elimination on sparse integer rows.

    ``rows`` is a list of dicts {column: nonzero int}.  Returns
    ``(pivots, out)`` where ``out`` contains primitive integer rows with
    positive pivot entries, pivot columns strictly increasing, and every
    pivot column eliminated from all other rows.  Pivot selection: smallest
    entry (by bit length, then row support) to limit coefficient growth.
    """
    work = []
    for r in rows:
        rr = {c: v for c, v in r.items() if v}
        if rr:
            work.append(_normalize(rr))
    pivots = []
    out = []
    for col in range(ncols):
        best = -1
        best_key = None
        for i in range(len(work)):
            v = work[i].get(col)
            if v:
                key = (abs(v).bit_length(), len(work[i]))
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

        def eliminate(bucket):
            kept = []
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

        work = eliminate(work)
        out = eliminate(out)
        out.append(piv)
        pivots.append(col)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [pivots[i] for i in order], [out[i] for i in order]
