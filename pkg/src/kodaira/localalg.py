"""Length of a zero-dimensional local quotient of a smooth surface point.

The surface is a hypersurface E = 0 in 3-space, the point is the origin and
E has a nonzero linear term there.  One coordinate is eliminated as a power
series in the other two; the quotient k[[u, v]] / (I + m^N) is then measured by
linear algebra on monomials of degree < N.
"""

from __future__ import annotations

from .errors import DomainError, InternalConsistencyError
from .multivariate import MPoly, PolyRing

PRECISION_START = 8
PRECISION_CAP = 512


def _tmul(a: dict, b: dict, n: int, F) -> dict:
    """Product of two truncated series (exponent tuples of length 2), dropping degree >= n."""
    out: dict = {}
    for (i1, j1), c1 in a.items():
        d1 = i1 + j1
        for (i2, j2), c2 in b.items():
            if d1 + i2 + j2 >= n:
                continue
            e = (i1 + i2, j1 + j2)
            v = F.mul(c1, c2)
            if e in out:
                v = F.add(out[e], v)
                if F.is_zero(v):
                    del out[e]
                    continue
            if not F.is_zero(v):
                out[e] = v
    return out


def _tadd(a: dict, b: dict, F) -> dict:
    out = dict(a)
    for e, c in b.items():
        if e in out:
            v = F.add(out[e], c)
            if F.is_zero(v):
                del out[e]
            else:
                out[e] = v
        else:
            out[e] = c
    return out


def _evaluate_series(poly: MPoly, keep, elim: int, series: dict, n: int) -> dict:
    """poly(u, v, V = series) truncated at degree n; `keep` are the indices of u and v."""
    F = poly.ring.field
    powers = {0: {(0, 0): F.one}}

    def power(k):
        if k not in powers:
            powers[k] = _tmul(power(k - 1), series, n, F)
        return powers[k]

    out: dict = {}
    for e, c in poly.terms.items():
        base = (e[keep[0]], e[keep[1]])
        if sum(base) >= n:
            continue
        term = {(0, 0): c} if e[elim] == 0 else {k: F.mul(v, c) for k, v in power(e[elim]).items()}
        shifted = {(i + base[0], j + base[1]): v for (i, j), v in term.items()
                   if i + j + sum(base) < n}
        out = _tadd(out, shifted, F)
    return out


def _eliminate(E: MPoly, n: int):
    """(keep indices, eliminated index, series) with E(u, v, series(u, v)) = 0 mod degree n."""
    ring = E.ring
    F = ring.field
    if not F.is_zero(E.constant_term()):
        raise DomainError("the point does not lie on the surface")
    elim = None
    for i in range(ring.nvars):
        e = tuple(1 if j == i else 0 for j in range(ring.nvars))
        if e in E.terms:
            elim = i
            break
    if elim is None:
        raise DomainError("the surface is singular at the point")
    keep = tuple(i for i in range(ring.nvars) if i != elim)
    lin = tuple(1 if j == elim else 0 for j in range(ring.nvars))
    c = E.terms[lin]
    scale = F.neg(F.inv(c))
    rest = MPoly(ring, {e: v for e, v in E.terms.items() if e != lin})
    series: dict = {}
    for _ in range(n + 1):
        new = _evaluate_series(rest, keep, elim, series, n)
        new = {k: F.mul(v, scale) for k, v in new.items()}
        if new == series:
            break
        series = new
    return keep, elim, series


def _quotient_dimension(gens: list[dict], n: int, F) -> int:
    monos = [(i, d - i) for d in range(n) for i in range(d + 1)]
    index = {m: k for k, m in enumerate(monos)}
    pivots: dict[int, dict] = {}
    rank = 0
    for g in gens:
        if not g:
            continue
        low = min(i + j for i, j in g)
        for (a, b) in monos:
            if a + b + low >= n:
                continue
            row = {index[(i + a, j + b)]: v for (i, j), v in g.items() if i + j + a + b < n}
            # reduce against existing pivots, smallest column first
            while row:
                col = min(row)
                if col in pivots:
                    prow = pivots[col]
                    f = row[col]
                    for k, v in prow.items():
                        nv = F.sub(row.get(k, F.zero), F.mul(f, v))
                        if F.is_zero(nv):
                            row.pop(k, None)
                        else:
                            row[k] = nv
                else:
                    inv = F.inv(row[col])
                    pivots[col] = {k: F.mul(v, inv) for k, v in row.items()}
                    rank += 1
                    break
    return len(monos) - rank


def local_length(E: MPoly, gens: list[MPoly]) -> int:
    """dim k[[u,v,w]] / (E, gens) at the origin, for E smooth there."""
    ring: PolyRing = E.ring
    F = ring.field
    for g in gens:
        if not F.is_zero(g.constant_term()):
            return 0
    n = PRECISION_START
    while n <= PRECISION_CAP:
        keep, elim, series = _eliminate(E, n)
        reduced = [_evaluate_series(g, keep, elim, series, n) for g in gens]
        if not any(reduced):
            n *= 2
            continue
        d_lo = _quotient_dimension(reduced, n - 1, F)
        d_hi = _quotient_dimension(reduced, n, F)
        if d_lo == d_hi:
            return d_hi
        n *= 2
    raise InternalConsistencyError(f"local length did not stabilise below precision {PRECISION_CAP}")
