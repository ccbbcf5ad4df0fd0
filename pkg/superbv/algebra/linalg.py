"""Exact sparse linear algebra over the Gaussian rationals."""
import logging

from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

log = logging.getLogger(__file__)


def _index(keys, rows):
    for row in rows:
        for key in row:
            if key not in keys:
                keys[key] = len(keys)
    return keys


def _matrix(rows, ncols):
    elems = {}
    for i, row in enumerate(rows):
        clean = {j: QQ_I.convert(v) for j, v in row.items() if v}
        if clean:
            elems[i] = clean
    return DomainMatrix(elems, (len(rows), ncols), QQ_I)


def row_reduce(rows, ncols):
    """
        Reduced row echelon form of a sparse matrix.

        # Parameters
            rows: list
                rows as dicts `column index -> coefficient`.
            ncols: integer
                number of columns.

        # Returns
            `(reduced, pivots)`: the non-zero reduced rows as dicts and the pivot column of each.
    """
    if not rows or not ncols:
        return [], []
    reduced, pivots = _matrix(rows, ncols).rref()
    out = [{} for _ in pivots]
    for (i, j), value in reduced.to_dok().items():
        if i < len(pivots) and value:
            out[i][j] = value
    log.debug('row reduced {} rows x {} columns to rank {}'.format(len(rows), ncols, len(pivots)))
    return out, list(pivots)


def reduce_vector(vector, reduced, pivots):
    """
        Remainder of `vector` after eliminating every pivot column of a reduced echelon basis.
    """
    remainder = {j: QQ_I.convert(v) for j, v in vector.items() if v}
    for row, pivot in zip(reduced, pivots):
        factor = remainder.get(pivot)
        if not factor:
            continue
        for j, value in row.items():
            total = remainder.get(j, QQ_I.zero) - factor * value
            if total:
                remainder[j] = total
            else:
                remainder.pop(j, None)
    return remainder


def rank(rows, ncols):
    return len(row_reduce(rows, ncols)[1])


def solve(columns, rhs):
    """
        Finds `x` with `sum_k x_k * columns[k] == rhs`.

        # Parameters
            columns: list
                one dict `row key -> coefficient` per unknown.
            rhs: dict
                `row key -> coefficient`.

        # Returns
            A dict `unknown index -> value` (free unknowns set to zero), or `None` when the
            system is inconsistent.
    """
    keys = _index({}, list(columns) + [rhs])
    n = len(columns)
    equations = [{} for _ in keys]
    for k, column in enumerate(columns):
        for key, value in column.items():
            if value:
                equations[keys[key]][k] = value
    for key, value in rhs.items():
        if value:
            equations[keys[key]][n] = value
    reduced, pivots = row_reduce(equations, n + 1)
    if n in pivots:
        return None
    return {pivot: row.get(n, QQ_I.zero) for row, pivot in zip(reduced, pivots) if row.get(n)}


def nullspace(rows, ncols):
    """
        Basis of the right kernel of a sparse matrix, one dict per basis vector.
    """
    reduced, pivots = row_reduce(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = {free: QQ_I.one}
        for row, pivot in zip(reduced, pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        basis.append(vector)
    return basis
