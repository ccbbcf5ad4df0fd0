import logging

from ._scalar import Parity, SuperScalar, change_table, format_scalar, invert, parse_scalar
from .errors import BerezinianUndefined, NotInvertible, ParityViolation, VarTableMismatch

log = logging.getLogger(__file__)


def _product(left, right, table):
    inner = len(right)
    cols = len(right[0]) if right else 0
    out = []
    for row in left:
        new_row = []
        for k in range(cols):
            total = SuperScalar.zero(table)
            for j in range(inner):
                if row[j] and right[j][k]:
                    total = total + row[j] * right[j][k]
            new_row.append(total)
        out.append(new_row)
    return out


def _difference(left, right):
    return [[a - b for a, b in zip(row_l, row_r)] for row_l, row_r in zip(left, right)]


def _negate(block):
    return [[-a for a in row] for row in block]


def determinant(entries, table):
    """
        Determinant of a square block whose entries are even (hence commuting) scalars.

        Laplace expansion along the rows, memoized on the set of columns already used.
    """
    size = len(entries)
    memo = {}

    def expand(row, used):
        if row == size:
            return SuperScalar.one(table)
        if used in memo:
            return memo[used]
        total = SuperScalar.zero(table)
        sign = 1
        for col in range(size):
            if used >> col & 1:
                continue
            entry = entries[row][col]
            if entry:
                minor = expand(row + 1, used | 1 << col)
                total = total + (entry * minor if sign > 0 else -(entry * minor))
            sign = -sign
        memo[used] = total
        return total

    return expand(0, 0)


def _even_inverse(entries, table):
    size = len(entries)
    if not size:
        return []
    det = determinant(entries, table)
    try:
        det_inverse = invert(det)
    except NotInvertible:
        raise NotInvertible('Determinant {} is not a unit.'.format(format_scalar(det)))
    out = [[None] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            minor = [[entries[r][c] for c in range(size) if c != j] for r in range(size) if r != i]
            cofactor = determinant(minor, table)
            out[j][i] = (cofactor if (i + j) % 2 == 0 else -cofactor) * det_inverse
    return out


class SuperMatrix:
    """
        Matrix of super scalars with graded row and column indices.

        Entry `(i, j)` has parity `row_parities[i] + col_parities[j] + parity`; matrices with
        `parity=Parity.EVEN` are the even supermatrices of frame changes and Jacobians. The
        product is the plain matrix product of the entries.

        # Parameters
            entries: list
                list of rows of `SuperScalar`s (numbers are accepted when `table` is given).
            row_parities: list
                parity of every row index.
            col_parities: list
                parity of every column index.
            table: VarTable
                variable table of the entries; taken from the entries when omitted.
            parity: Parity
                overall parity of the matrix.
            check: bool
                whether entry parities are validated.

        # Example
        ```python
        import superbv
        table = superbv.VarTable(even=["w"], odd=["psi1", "psi2"])
        g = superbv.SuperMatrix.from_strings([["w^2 - psi1*psi2"]], table, [0], [0])
        assert g.berezinian() == superbv.parse_scalar("w^2 - psi1*psi2", table)
        ```
    """

    def __init__(self, entries, row_parities, col_parities, table=None, parity=Parity.EVEN, check=True):
        self.row_parities = tuple(Parity(int(p)) for p in row_parities)
        self.col_parities = tuple(Parity(int(p)) for p in col_parities)
        self.parity = Parity(int(parity))
        entries = [list(row) for row in entries]
        if len(entries) != len(self.row_parities):
            raise ValueError('Expected {} rows, got {}.'.format(len(self.row_parities), len(entries)))
        if table is None:
            table = next((a.table for row in entries for a in row if isinstance(a, SuperScalar)), None)
            if table is None:
                raise ValueError('Cannot infer the variable table of an empty or numeric matrix.')
        self.table = table
        self.entries = []
        for i, row in enumerate(entries):
            if len(row) != len(self.col_parities):
                raise ValueError('Row {} has {} entries, expected {}.'.format(i, len(row), len(self.col_parities)))
            new_row = []
            for a in row:
                if not isinstance(a, SuperScalar):
                    a = SuperScalar.constant(table, a)
                elif a.table != table:
                    raise VarTableMismatch('Entry {} lives over {}, not {}.'.format(a, a.table, table))
                new_row.append(a)
            self.entries.append(new_row)
        if check:
            for i, row in enumerate(self.entries):
                for j, a in enumerate(row):
                    expected = self.row_parities[i] + self.col_parities[j] + self.parity
                    if not a.has_parity(expected):
                        raise ParityViolation('Entry ({}, {}) = {} should be {}.'.format(i, j, a, expected))

    @classmethod
    def from_strings(cls, rows, table, row_parities, col_parities, parity=Parity.EVEN):
        return cls([[parse_scalar(text, table) for text in row] for row in rows],
                   row_parities, col_parities, table=table, parity=parity)

    @classmethod
    def identity(cls, table, parities):
        size = len(parities)
        entries = [[SuperScalar.one(table) if i == j else SuperScalar.zero(table) for j in range(size)]
                   for i in range(size)]
        return cls(entries, parities, parities, table=table, check=False)

    @classmethod
    def zero(cls, table, row_parities, col_parities, parity=Parity.EVEN):
        entries = [[SuperScalar.zero(table) for _ in col_parities] for _ in row_parities]
        return cls(entries, row_parities, col_parities, table=table, parity=parity, check=False)

    @property
    def shape(self):
        return len(self.row_parities), len(self.col_parities)

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def _like(self, entries, row_parities=None, col_parities=None, parity=None):
        return SuperMatrix(entries,
                           self.row_parities if row_parities is None else row_parities,
                           self.col_parities if col_parities is None else col_parities,
                           table=self.table, parity=self.parity if parity is None else parity, check=False)

    def map(self, fn, table=None):
        """
            Applies `fn` to every entry; `fn` must preserve parities.
        """
        entries = [[fn(a) for a in row] for row in self.entries]
        if table is None:
            table = next((a.table for row in entries for a in row), self.table)
        return SuperMatrix(entries, self.row_parities, self.col_parities, table=table, parity=self.parity,
                           check=False)

    def reduced(self):
        return self.map(lambda a: a.reduced())

    def change_table(self, table):
        return self.map(lambda a: change_table(a, table), table=table)

    def block(self, rows, cols):
        rows, cols = list(rows), list(cols)
        return self._like([[self.entries[i][j] for j in cols] for i in rows],
                          [self.row_parities[i] for i in rows], [self.col_parities[j] for j in cols])

    def _check_shape(self, other):
        if self.table != other.table:
            raise VarTableMismatch('Matrices live over {} and {}.'.format(self.table, other.table))
        if self.row_parities != other.row_parities or self.col_parities != other.col_parities:
            raise ValueError('Cannot combine matrices graded {}x{} and {}x{}.'.format(
                self.row_parities, self.col_parities, other.row_parities, other.col_parities))
        if self.parity != other.parity and not (self.is_zero() or other.is_zero()):
            raise ValueError('Cannot add matrices of different parity.')

    def __add__(self, other):
        self._check_shape(other)
        parity = other.parity if self.is_zero() else self.parity
        return self._like([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
                          parity=parity)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._like(_negate(self.entries))

    def __matmul__(self, other):
        if self.table != other.table:
            raise VarTableMismatch('Matrices live over {} and {}.'.format(self.table, other.table))
        if self.col_parities != other.row_parities:
            raise ValueError('Column grading {} does not match row grading {}.'
                             .format(self.col_parities, other.row_parities))
        return self._like(_product(self.entries, other.entries, self.table),
                          col_parities=other.col_parities, parity=self.parity + other.parity)

    def scale(self, scalar):
        """
            Left multiplication of every entry by a homogeneous scalar.
        """
        if not isinstance(scalar, SuperScalar):
            scalar = SuperScalar.constant(self.table, scalar)
        return self._like([[scalar * a for a in row] for row in self.entries], parity=self.parity + scalar.parity)

    def is_zero(self):
        return not any(a for row in self.entries for a in row)

    def is_identity(self):
        rows, cols = self.shape
        return rows == cols and all(a == (1 if i == j else 0) for i, row in enumerate(self.entries)
                                    for j, a in enumerate(row))

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self.table == other.table and self.row_parities == other.row_parities
                and self.col_parities == other.col_parities and self.entries == other.entries)

    def __hash__(self):
        return hash((self.row_parities, self.col_parities, tuple(tuple(row) for row in self.entries)))

    def exponent_bound(self):
        return max((a.exponent_bound() for row in self.entries for a in row), default=0)

    def _split(self):
        rows_even = [i for i, p in enumerate(self.row_parities) if p is Parity.EVEN]
        rows_odd = [i for i, p in enumerate(self.row_parities) if p is Parity.ODD]
        cols_even = [j for j, p in enumerate(self.col_parities) if p is Parity.EVEN]
        cols_odd = [j for j, p in enumerate(self.col_parities) if p is Parity.ODD]
        if self.parity is not Parity.EVEN:
            raise ValueError('Only even supermatrices have an inverse or a Berezinian.')
        if len(rows_even) != len(cols_even) or len(rows_odd) != len(cols_odd):
            raise ValueError('Matrix of dimension ({}|{})x({}|{}) is not square.'.format(
                len(rows_even), len(rows_odd), len(cols_even), len(cols_odd)))

        def pick(rows, cols):
            return [[self.entries[i][j] for j in cols] for i in rows]

        blocks = (pick(rows_even, cols_even), pick(rows_even, cols_odd),
                  pick(rows_odd, cols_even), pick(rows_odd, cols_odd))
        return (rows_even, rows_odd, cols_even, cols_odd), blocks

    def berezinian(self):
        """
            Superdeterminant `det(A - B D^-1 C) / det(D)` of an even square supermatrix.

            # Returns
                An even `SuperScalar`.
        """
        _, (a, b, c, d) = self._split()
        if not d:
            return determinant(a, self.table)
        try:
            d_inverse = _even_inverse(d, self.table)
            det_d_inverse = invert(determinant(d, self.table))
        except NotInvertible as e:
            raise BerezinianUndefined('The odd-odd block is not invertible: {}'.format(e))
        if not a:
            return det_d_inverse
        schur = _difference(a, _product(_product(b, d_inverse, self.table), c, self.table))
        return determinant(schur, self.table) * det_d_inverse

    def inverse(self):
        """
            Two-sided inverse via a Schur complement; rows of the result follow the columns of `self`.
        """
        (rows_even, rows_odd, cols_even, cols_odd), (a, b, c, d) = self._split()
        table = self.table
        try:
            d_inv = _even_inverse(d, table)
            s_inv = _even_inverse(_difference(a, _product(_product(b, d_inv, table), c, table)), table)
            s_b_d = _product(_product(s_inv, b, table), d_inv, table)
            d_c_s = _product(_product(d_inv, c, table), s_inv, table)
            top_left, top_right = s_inv, _negate(s_b_d)
            bottom_left = _negate(d_c_s)
            bottom_right = [[x + y for x, y in zip(r1, r2)]
                            for r1, r2 in zip(d_inv, _product(d_c_s, _product(b, d_inv, table), table))]
        except NotInvertible:
            try:
                a_inv = _even_inverse(a, table)
                t_inv = _even_inverse(_difference(d, _product(_product(c, a_inv, table), b, table)), table)
            except NotInvertible:
                raise NotInvertible('Neither diagonal block of the supermatrix is invertible.')
            a_b_t = _product(_product(a_inv, b, table), t_inv, table)
            t_c_a = _product(_product(t_inv, c, table), a_inv, table)
            top_left = [[x + y for x, y in zip(r1, r2)]
                        for r1, r2 in zip(a_inv, _product(a_b_t, _product(c, a_inv, table), table))]
            top_right = _negate(a_b_t)
            bottom_left = _negate(t_c_a)
            bottom_right = t_inv
        size = len(self.row_parities)
        out = [[None] * size for _ in range(size)]
        for blk, rows, cols in ((top_left, cols_even, rows_even), (top_right, cols_even, rows_odd),
                                (bottom_left, cols_odd, rows_even), (bottom_right, cols_odd, rows_odd)):
            for r, i in enumerate(rows):
                for s, j in enumerate(cols):
                    out[i][j] = blk[r][s]
        return SuperMatrix(out, self.col_parities, self.row_parities, table=table, check=False)

    def supertrace(self):
        if self.row_parities != self.col_parities:
            raise ValueError('The supertrace needs matching row and column grading.')
        total = SuperScalar.zero(self.table)
        for i, p in enumerate(self.row_parities):
            total = total + (self.entries[i][i] if p is Parity.EVEN else -self.entries[i][i])
        return total

    def to_strings(self):
        return [[format_scalar(a) for a in row] for row in self.entries]

    def __repr__(self):
        return 'SuperMatrix({}, rows={}, cols={})'.format(self.to_strings(), [int(p) for p in self.row_parities],
                                                         [int(p) for p in self.col_parities])


def berezinian(matrix):
    """
        Berezinian of an even square `SuperMatrix`; see `SuperMatrix.berezinian`.
    """
    return matrix.berezinian()
