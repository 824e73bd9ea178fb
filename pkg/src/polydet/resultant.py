"""Sylvester matrices: resultants as determinants.

The Sylvester matrix of f (degree m) and g (degree n) in one variable
is (m+n) x (m+n): n shifted rows of f's coefficients above m shifted
rows of g's. Its determinant is the resultant, and the shifted-row
structure means most entries repeat, which the matrix dedup map
collapses so each distinct coefficient is transformed only once.
"""

from __future__ import annotations

from .tensor import PolyMatrix, normalize_terms, poly_matrix


def _split_by_variable(terms, index: int):
    """Coefficient polynomials of var^j, keyed by j, over the other variables."""
    split: dict[int, dict] = {}
    for exps, coeff in terms.items():
        j = exps[index]
        rest = exps[:index] + exps[index + 1 :]
        bucket = split.setdefault(j, {})
        bucket[rest] = bucket.get(rest, 0) + coeff
    return {j: normalize_terms(bucket) for j, bucket in split.items() if normalize_terms(bucket)}


def sylvester(f, g, variables, var: str) -> PolyMatrix:
    """Sylvester matrix of f and g eliminating `var`.

    Entries are polynomials in the remaining variables (possibly none,
    for a purely numeric resultant). Raises when `var` appears in
    neither polynomial.
    """
    variables = tuple(variables)
    if var not in variables:
        raise ValueError(f"unknown variable {var!r}")
    index = variables.index(var)
    f = normalize_terms(f)
    g = normalize_terms(g)
    fc = _split_by_variable(f, index)
    gc = _split_by_variable(g, index)
    m = max(fc, default=0)
    n = max(gc, default=0)
    if m == 0 and n == 0:
        raise ValueError(f"no eliminand: neither polynomial involves {var!r}")
    remaining = variables[:index] + variables[index + 1 :]
    size = m + n
    rows = []
    for i in range(n):  # shifted coefficient rows of f
        row = [{} for _ in range(size)]
        for t in range(m + 1):
            row[i + t] = fc.get(m - t, {})
        rows.append(row)
    for i in range(m):  # shifted coefficient rows of g
        row = [{} for _ in range(size)]
        for t in range(n + 1):
            row[i + t] = gc.get(n - t, {})
        rows.append(row)
    return poly_matrix(rows, remaining)
