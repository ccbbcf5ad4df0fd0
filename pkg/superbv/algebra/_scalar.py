import logging
from enum import IntEnum

from sympy import I, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.polyerrors import CoercionFailed

from .errors import MixedParity, NotInvertible, ParityViolation, VarTableMismatch

log = logging.getLogger(__file__)

_TRANSFORMATIONS = standard_transformations + (convert_xor,)


class Parity(IntEnum):
    """
        Z/2 grading of coordinates, scalars and frame elements. Addition is taken mod 2.
    """
    EVEN = 0
    ODD = 1

    def __add__(self, other):
        return Parity((int(self) + int(other)) % 2)

    __radd__ = __add__

    def __str__(self):
        return self.name.lower()


class VarTable:
    """
        Ordered even and odd variable names of one graded Laurent algebra.

        The order fixes the canonical monomial order: even variables first, then the odd ones,
        each block in the order given here. All Koszul signs are computed against this order.

        # Parameters
            even: list
                names of the even (commuting, Laurent) variables.
            odd: list
                names of the odd (anticommuting, nilpotent) variables.

        # Example
        ```python
        import superbv
        table = superbv.VarTable(even=["z"], odd=["theta1", "theta2"])
        ```
    """

    def __init__(self, even=(), odd=()):
        self.even = tuple(even)
        self.odd = tuple(odd)
        names = self.even + self.odd
        if len(set(names)) != len(names):
            raise ValueError('Variable names must be unique, got {}.'.format(names))
        self._index = {name: (Parity.EVEN, pos) for pos, name in enumerate(self.even)}
        self._index.update({name: (Parity.ODD, pos) for pos, name in enumerate(self.odd)})

    @property
    def p(self):
        return len(self.even)

    @property
    def q(self):
        return len(self.odd)

    @property
    def names(self):
        return self.even + self.odd

    def locate(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise ValueError('Unknown variable "{}" for table {}.'.format(name, self))

    def parity(self, name):
        return self.locate(name)[0]

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, VarTable) and self.even == other.even and self.odd == other.odd

    def __hash__(self):
        return hash((self.even, self.odd))

    def __repr__(self):
        return 'VarTable(even={}, odd={})'.format(list(self.even), list(self.odd))


def _coerce(value):
    if isinstance(value, SuperScalar):
        raise TypeError('Expected a coefficient, got the scalar {}.'.format(value))
    try:
        return QQ_I.convert(value)
    except CoercionFailed:
        raise ValueError('{} is not a Gaussian rational.'.format(value))


def _reorder_sign(left, right):
    # sign of theta_{left bits} * theta_{right bits} brought to ascending order
    swaps = 0
    rest = right
    while rest:
        low = rest & -rest
        swaps += (left >> low.bit_length()).bit_count()
        rest ^= low
    return -1 if swaps % 2 else 1


def _accumulate(out, key, coeff):
    total = out.get(key)
    total = coeff if total is None else total + coeff
    if total:
        out[key] = total
    else:
        out.pop(key, None)


class SuperScalar:
    """
        Exact element of the graded algebra K[z, 1/z][theta] over the Gaussian rationals K.

        Terms are stored as `(even exponents, odd bitmask) -> coefficient`; bit `k` of the mask is
        the odd variable `table.odd[k]` and the monomial is read in canonical order. Values are
        immutable; arithmetic returns new scalars.

        # Parameters
            table: VarTable
                the variable table the scalar lives over.
            terms: dict
                optional mapping `(tuple of ints, int) -> coefficient`; zero coefficients are dropped.
    """
    __slots__ = ("table", "_terms")

    def __init__(self, table, terms=None):
        self.table = table
        clean = {}
        for (exps, mask), coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            mask = int(mask)
            if len(exps) != table.p:
                raise ValueError('Expected {} even exponents, got {}.'.format(table.p, exps))
            if mask < 0 or mask >> table.q:
                raise ValueError('Odd mask {} does not fit {} odd variables.'.format(mask, table.q))
            _accumulate(clean, (exps, mask), _coerce(coeff))
        self._terms = clean

    @classmethod
    def _raw(cls, table, terms):
        scalar = object.__new__(cls)
        scalar.table = table
        scalar._terms = terms
        return scalar

    @classmethod
    def zero(cls, table):
        return cls._raw(table, {})

    @classmethod
    def one(cls, table):
        return cls.constant(table, 1)

    @classmethod
    def constant(cls, table, value):
        value = _coerce(value)
        return cls._raw(table, {((0,) * table.p, 0): value} if value else {})

    @classmethod
    def monomial(cls, table, exps=None, mask=0, coeff=1):
        exps = (0,) * table.p if exps is None else exps
        return cls(table, {(tuple(exps), mask): coeff})

    @classmethod
    def var(cls, table, name):
        parity, pos = table.locate(name)
        if parity is Parity.EVEN:
            exps = tuple(1 if i == pos else 0 for i in range(table.p))
            return cls._raw(table, {(exps, 0): QQ_I.one})
        return cls._raw(table, {((0,) * table.p, 1 << pos): QQ_I.one})

    @property
    def terms(self):
        return dict(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def coefficient(self, exps, mask=0):
        return self._terms.get((tuple(exps), mask), QQ_I.zero)

    @property
    def parity(self):
        parities = {mask.bit_count() % 2 for (_, mask) in self._terms}
        if len(parities) > 1:
            raise MixedParity('{} mixes even and odd terms.'.format(self))
        return Parity(parities.pop()) if parities else Parity.EVEN

    def is_homogeneous(self):
        return len({mask.bit_count() % 2 for (_, mask) in self._terms}) <= 1

    def has_parity(self, parity):
        return all(mask.bit_count() % 2 == parity for (_, mask) in self._terms)

    def even_part(self):
        return SuperScalar._raw(self.table, {k: c for k, c in self._terms.items() if k[1].bit_count() % 2 == 0})

    def odd_part(self):
        return SuperScalar._raw(self.table, {k: c for k, c in self._terms.items() if k[1].bit_count() % 2})

    def reduced(self):
        """
            Projection to the reduced space: every odd variable is set to zero.
        """
        return SuperScalar._raw(self.table, {k: c for k, c in self._terms.items() if k[1] == 0})

    def theta_degree_part(self, degree):
        return SuperScalar._raw(self.table, {k: c for k, c in self._terms.items() if k[1].bit_count() == degree})

    def nilpotent_order(self):
        """
            Largest theta-degree occurring in the scalar (0 for reduced scalars).
        """
        return max((mask.bit_count() for (_, mask) in self._terms), default=0)

    def exponent_bound(self):
        return max((abs(e) for (exps, _) in self._terms for e in exps), default=0)

    def is_constant(self):
        return all(mask == 0 and not any(exps) for (exps, mask) in self._terms)

    def _check(self, other):
        if self.table != other.table:
            raise VarTableMismatch('Cannot combine scalars over {} and {}.'.format(self.table, other.table))

    def _lift(self, other):
        if isinstance(other, SuperScalar):
            self._check(other)
            return other
        return SuperScalar.constant(self.table, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            _accumulate(out, key, coeff)
        return SuperScalar._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperScalar._raw(self.table, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, SuperScalar):
            return mul(self, other)
        value = _coerce(other)
        if not value:
            return SuperScalar.zero(self.table)
        return SuperScalar._raw(self.table, {k: c * value for k, c in self._terms.items()})

    def __rmul__(self, other):
        # numbers are even and central
        return self * other

    def __truediv__(self, other):
        if isinstance(other, SuperScalar):
            return mul(self, invert(other))
        return self * (QQ_I.one / _coerce(other))

    def __pow__(self, exponent):
        exponent = int(exponent)
        if exponent < 0:
            return invert(self) ** (-exponent)
        result = SuperScalar.one(self.table)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, SuperScalar):
            return self.table == other.table and self._terms == other._terms
        try:
            return self._terms == SuperScalar.constant(self.table, other)._terms
        except (ValueError, TypeError):
            return NotImplemented

    def __hash__(self):
        return hash((self.table, frozenset(self._terms.items())))

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return 'SuperScalar({})'.format(format_scalar(self))


def mul(a, b):
    """
        Supercommutative product with Koszul signs taken from the canonical variable order.

        # Parameters
            a: SuperScalar
                left factor.
            b: SuperScalar
                right factor, over the same table.

        # Returns
            The product `a*b`.

        # Example
        ```python
        import superbv
        table = superbv.VarTable(odd=["theta1", "theta2"])
        t1, t2 = superbv.SuperScalar.var(table, "theta1"), superbv.SuperScalar.var(table, "theta2")
        assert superbv.mul(t2, t1) == -superbv.mul(t1, t2)
        ```
    """
    a._check(b)
    out = {}
    for (e1, m1), c1 in a._terms.items():
        for (e2, m2), c2 in b._terms.items():
            if m1 & m2:
                continue
            coeff = c1 * c2
            if _reorder_sign(m1, m2) < 0:
                coeff = -coeff
            _accumulate(out, (tuple(x + y for x, y in zip(e1, e2)), m1 | m2), coeff)
    return SuperScalar._raw(a.table, out)


def invert(a):
    """
        Two-sided inverse of a scalar whose reduced part is a Laurent monomial `c*z^k`.

        Writing `a = u + n` with `u` the reduced part, the inverse is the finite series
        `u^-1 * sum_j (-u^-1 n)^j`, which stops once the power of the nilpotent part vanishes.

        # Parameters
            a: SuperScalar
                scalar to invert.

        # Returns
            The inverse scalar.

        # Example
        ```python
        import superbv
        table = superbv.VarTable(even=["w"], odd=["psi1", "psi2"])
        g = superbv.parse_scalar("w^2 - psi1*psi2", table)
        assert superbv.invert(g) == superbv.parse_scalar("w^-2 + w^-4*psi1*psi2", table)
        ```
    """
    unit = a.reduced()
    if len(unit) != 1:
        raise NotInvertible('{} has reduced part {}, which is not a Laurent unit.'.format(a, unit))
    (exps, _), coeff = next(iter(unit))
    unit_inverse = SuperScalar._raw(a.table, {(tuple(-e for e in exps), 0): QQ_I.one / coeff})
    step = -(unit_inverse * (a - unit))
    total = power = SuperScalar.one(a.table)
    for _ in range(a.table.q):
        power = power * step
        if not power:
            break
        total = total + power
    return unit_inverse * total


def derive(a, var):
    """
        Graded left derivative with respect to the variable `var`.

        For an odd variable the sign is `(-1)^k` with `k` the number of odd variables standing
        before it in the monomial.

        # Parameters
            a: SuperScalar
                scalar to differentiate.
            var: basestring
                name of a variable of `a.table`.

        # Returns
            The derivative, over the same table.
    """
    parity, pos = a.table.locate(var)
    out = {}
    if parity is Parity.EVEN:
        for (exps, mask), coeff in a._terms.items():
            e = exps[pos]
            if e:
                out[(exps[:pos] + (e - 1,) + exps[pos + 1:], mask)] = coeff * e
    else:
        bit = 1 << pos
        for (exps, mask), coeff in a._terms.items():
            if mask & bit:
                sign = (mask & (bit - 1)).bit_count() % 2
                out[(exps, mask ^ bit)] = -coeff if sign else coeff
    return SuperScalar._raw(a.table, out)


def substitute(a, assignment, table=None):
    """
        Evaluates the graded ring homomorphism sending each variable to its image.

        Variables without an image are kept when they also exist in the target table.
        Negative powers of even variables require invertible images.

        # Parameters
            a: SuperScalar
                scalar to transform.
            assignment: dict
                `name -> SuperScalar`; all images live over one target table.
            table: VarTable
                target table; defaults to the table of the images (or `a.table`).

        # Returns
            The transformed scalar over the target table.

        # Example
        ```python
        import superbv
        source = superbv.VarTable(even=["z"])
        target = superbv.VarTable(even=["w"])
        z2 = superbv.parse_scalar("z^2", source)
        image = {"z": superbv.parse_scalar("1/w", target)}
        assert superbv.substitute(z2, image) == superbv.parse_scalar("w^-2", target)
        ```
    """
    for image in assignment.values():
        if not isinstance(image, SuperScalar):
            raise TypeError('Images must be SuperScalars, got {!r}.'.format(image))
        if table is None:
            table = image.table
        elif image.table != table:
            raise VarTableMismatch('Images live over {} and {}.'.format(table, image.table))
    if table is None:
        table = a.table
    for name, image in assignment.items():
        if name in a.table and not image.has_parity(a.table.parity(name)):
            raise ParityViolation('Image {} of {} variable "{}" has the wrong parity.'
                                  .format(image, a.table.parity(name), name))

    def image_of(name):
        if name in assignment:
            return assignment[name]
        if name in table and table.parity(name) == a.table.parity(name):
            return SuperScalar.var(table, name)
        raise ValueError('No image given for variable "{}".'.format(name))

    powers = {}

    def power(pos, exponent):
        key = (pos, exponent)
        if key not in powers:
            powers[key] = image_of(a.table.even[pos]) ** exponent
        return powers[key]

    odd_images = {}
    out = {}
    for (exps, mask), coeff in a._terms.items():
        term = SuperScalar._raw(table, {((0,) * table.p, 0): coeff})
        for pos, e in enumerate(exps):
            if e:
                term = term * power(pos, e)
        rest, pos = mask, 0
        while rest:
            if rest & 1:
                if pos not in odd_images:
                    odd_images[pos] = image_of(a.table.odd[pos])
                term = term * odd_images[pos]
            rest >>= 1
            pos += 1
        for key, value in term._terms.items():
            _accumulate(out, key, value)
    return SuperScalar._raw(table, out)


def change_table(a, table):
    """
        Re-expresses `a` over another table that shares the variables `a` actually uses.

        Odd variables may be reordered by the new table; the Koszul sign of the reordering is applied.
    """
    if a.table == table:
        return a
    even_pos = [table.locate(name)[1] if name in table else None for name in a.table.even]
    odd_pos = [table.locate(name)[1] if name in table else None for name in a.table.odd]
    for name in a.table.names:
        if name in table and table.parity(name) != a.table.parity(name):
            raise ParityViolation('"{}" changes parity between {} and {}.'.format(name, a.table, table))
    out = {}
    for (exps, mask), coeff in a._terms.items():
        new_exps = [0] * table.p
        for pos, e in enumerate(exps):
            if e:
                if even_pos[pos] is None:
                    raise ValueError('{} uses "{}", which {} lacks.'.format(a, a.table.even[pos], table))
                new_exps[even_pos[pos]] = e
        targets = []
        for pos in range(a.table.q):
            if mask >> pos & 1:
                if odd_pos[pos] is None:
                    raise ValueError('{} uses "{}", which {} lacks.'.format(a, a.table.odd[pos], table))
                targets.append(odd_pos[pos])
        inversions = sum(1 for i in range(len(targets)) for j in range(i + 1, len(targets)) if targets[i] > targets[j])
        new_mask = sum(1 << t for t in targets)
        _accumulate(out, (tuple(new_exps), new_mask), -coeff if inversions % 2 else coeff)
    return SuperScalar._raw(table, out)


def random_scalar(table, rng, parity=None, terms=3, exponent_range=(0, 2), gaussian=False):
    """
        Seeded random scalar for property checks.

        # Parameters
            table: VarTable
                variable table.
            rng: numpy.random.Generator
                source of randomness.
            parity: Parity
                if given, only monomials of this parity are drawn.
            terms: integer
                number of monomials drawn (collisions and zero coefficients may reduce it).
            exponent_range: tuple
                inclusive range of the even exponents.
            gaussian: bool
                whether coefficients get a random imaginary part.

        # Returns
            A `SuperScalar`.
    """
    low, high = exponent_range
    out = {}
    for _ in range(terms):
        exps = tuple(int(e) for e in rng.integers(low, high + 1, size=table.p))
        mask = int(rng.integers(0, 1 << table.q)) if table.q else 0
        if parity is not None and mask.bit_count() % 2 != int(parity):
            if not table.q:
                continue
            mask ^= 1 << int(rng.integers(0, table.q))
        coeff = QQ_I(int(rng.integers(-3, 4)), int(rng.integers(-1, 2)) if gaussian else 0)
        if coeff:
            _accumulate(out, (exps, mask), coeff)
    return SuperScalar._raw(table, out)


def _coefficient_text(re, im):
    if im == 0:
        return str(re)
    imag = 'i' if im == 1 else '-i' if im == -1 else '{}*i'.format(im)
    if re == 0:
        return imag
    return '({} {} {})'.format(re, '-' if im < 0 else '+', imag.lstrip('-'))


def _term_text(coeff, factors):
    re, im = QQ.to_sympy(coeff.x), QQ.to_sympy(coeff.y)
    if not factors:
        return _coefficient_text(re, im)
    monomial = '*'.join(factors)
    if im == 0 and re == 1:
        return monomial
    if im == 0 and re == -1:
        return '-' + monomial
    return '{}*{}'.format(_coefficient_text(re, im), monomial)


def monomial_text(table, exps, mask):
    factors = [name if e == 1 else '{}^{}'.format(name, e) for name, e in zip(table.even, exps) if e]
    factors += [name for pos, name in enumerate(table.odd) if mask >> pos & 1]
    return '*'.join(factors) or '1'


def format_scalar(a):
    """
        Textual form of a scalar, readable back by `parse_scalar`.

        # Example
        ```python
        import superbv
        table = superbv.VarTable(even=["z", "w"], odd=["theta1", "theta2"])
        a = superbv.parse_scalar("3/2*z^-2*theta1*theta2 + i*w", table)
        assert superbv.parse_scalar(superbv.format_scalar(a), table) == a
        ```
    """
    if not a._terms:
        return '0'
    pieces = []
    for (exps, mask), coeff in sorted(a._terms.items(),
                                      key=lambda item: (item[0][1].bit_count(), item[0][1],
                                                        tuple(-e for e in item[0][0]))):
        factors = [name if e == 1 else '{}^{}'.format(name, e) for name, e in zip(a.table.even, exps) if e]
        factors += [name for pos, name in enumerate(a.table.odd) if mask >> pos & 1]
        pieces.append(_term_text(coeff, factors))
    text = pieces[0]
    for piece in pieces[1:]:
        text += ' - ' + piece[1:] if piece.startswith('-') else ' + ' + piece
    return text


def _from_expr(expr, table):
    if expr.is_number:
        try:
            return SuperScalar.constant(table, QQ_I.from_sympy(expr))
        except CoercionFailed:
            raise ValueError('{} is not a Gaussian rational.'.format(expr))
    if expr.is_Symbol:
        if expr.name not in table:
            raise ValueError('Unknown variable "{}" for table {}.'.format(expr.name, table))
        return SuperScalar.var(table, expr.name)
    if expr.is_Add:
        total = SuperScalar.zero(table)
        for arg in expr.args:
            total = total + _from_expr(arg, table)
        return total
    if expr.is_Mul:
        product = SuperScalar.one(table)
        # sympy keeps non-commutative factors in their written order
        for arg in expr.args:
            product = product * _from_expr(arg, table)
        return product
    if expr.is_Pow:
        base, exponent = expr.as_base_exp()
        if not exponent.is_Integer:
            raise ValueError('Only integer powers are allowed, got {}.'.format(expr))
        return _from_expr(base, table) ** int(exponent)
    raise ValueError('Unsupported expression {}.'.format(expr))


def parse_scalar(text, table):
    """
        Parses the textual scalar syntax, e.g. `3/2*z^-2*theta1*theta2 + i*w`.

        `i` (or `I`) is the imaginary unit, `^` and `**` are powers, and odd variables are
        multiplied in the order they are written. Inverses such as `1/(w^2 - psi1*psi2)` are
        allowed when the reduced part is a Laurent unit.

        # Parameters
            text: basestring
                the expression.
            table: VarTable
                variables the expression may use.

        # Returns
            The parsed `SuperScalar`.
    """
    local = {name: Symbol(name) for name in table.even}
    local.update({name: Symbol(name, commutative=False) for name in table.odd})
    local.setdefault('i', I)
    local.setdefault('I', I)
    try:
        expr = parse_expr(str(text), local_dict=local, transformations=_TRANSFORMATIONS)
    except Exception as e:
        raise ValueError('Could not parse "{}": {}'.format(text, e))
    return _from_expr(expr, table)
