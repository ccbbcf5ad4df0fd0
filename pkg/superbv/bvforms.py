"""Differential forms on the BV superspace over C^{n|m}: the double complex (d, s), its homotopies and the BV Laplacian."""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import pandas as pd
from sympy.polys.domains import QQ_I

from .algebra import (ConventionViolation, Parity, SuperScalar, Unsupported, VarTable, change_table, derive,
                      format_scalar, linalg, parse_scalar, random_scalar)
from .report import CheckResult

log = logging.getLogger(__file__)


def _coordinate_names(n, m):
    even = ['z'] if n == 1 else ['z{}'.format(i) for i in range(1, n + 1)]
    odd = ['theta'] if m == 1 else ['theta{}'.format(i) for i in range(1, m + 1)]
    return even, odd


class FormAlgebra:
    """
        Generators of the forms on `M = Tot(Pi T* C^{n|m})`: coordinates `x_a`, fiber coordinates `p_a` of parity
        `|x_a| + 1`, and the formal symbols `dx_a` (parity `|x_a| + 1`) and `dp_a` (parity `|x_a|`).

        All generators live in one `VarTable`, so products carry the Koszul signs of the total parity.

        # Parameters
            n: integer
                even dimension of the base.
            m: integer
                odd dimension of the base.
    """

    def __init__(self, n, m):
        if n < 0 or m < 0 or n + m == 0:
            raise ValueError('Need a base of positive dimension, got {}|{}.'.format(n, m))
        self.n, self.m = n, m
        even, odd = _coordinate_names(n, m)
        self.coords = even + odd
        self.parities = [Parity.EVEN] * n + [Parity.ODD] * m
        self.fibers = ['p_{}'.format(x) for x in self.coords]
        self.dx = ['d{}'.format(x) for x in self.coords]
        self.dp = ['dp_{}'.format(x) for x in self.coords]
        self.table = VarTable(even=even + self.fibers[n:] + self.dx[n:] + self.dp[:n],
                              odd=odd + self.fibers[:n] + self.dx[:n] + self.dp[n:])
        self.function_table = VarTable(even=even + self.fibers[n:], odd=odd + self.fibers[:n])
        symbols = set(self.dx + self.dp)
        self._symbol_even = [pos for pos, name in enumerate(self.table.even) if name in symbols]
        self._symbol_mask = sum(1 << pos for pos, name in enumerate(self.table.odd) if name in symbols)
        x_names = set(self.coords)
        self._x_even = [pos for pos, name in enumerate(self.table.even) if name in x_names]
        self._x_mask = sum(1 << pos for pos, name in enumerate(self.table.odd) if name in x_names)
        self.top = self.product(self.dx[:n] + self.dp[n:])
        self.failure_monomial = self.product(odd + self.fibers[:n])

    def var(self, name):
        return SuperScalar.var(self.table, name)

    def product(self, names):
        out = SuperScalar.one(self.table)
        for name in names:
            out = out * self.var(name)
        return out

    def parse(self, text):
        return parse_scalar(text, self.table)

    def split_symbols(self, key):
        """
            Splits a monomial key into its function part and its symbol part.
        """
        exps, mask = key
        function = (tuple(0 if pos in self._symbol_even else e for pos, e in enumerate(exps)), mask & ~self._symbol_mask)
        symbols = (tuple(e if pos in self._symbol_even else 0 for pos, e in enumerate(exps)), mask & self._symbol_mask)
        return function, symbols

    def split_coordinates(self, key):
        """
            Splits a function monomial key into its coordinate part `g` and its fiber part `p^I`.
        """
        exps, mask = key
        coordinates = (tuple(e if pos in self._x_even else 0 for pos, e in enumerate(exps)), mask & self._x_mask)
        fibers = (tuple(0 if pos in self._x_even else e for pos, e in enumerate(exps)), mask & ~self._x_mask)
        return coordinates, fibers

    def factor_sign(self, key, left, right):
        """
            Sign `c` with `monomial(key) = c * monomial(left) * monomial(right)`.
        """
        product = SuperScalar.monomial(self.table, *left) * SuperScalar.monomial(self.table, *right)
        return int(QQ_I.to_sympy(product.coefficient(*key)))

    def degrees(self, key, names):
        """
            `(even degree, odd degree)` of a monomial key in the given generators.
        """
        exps, mask = key
        even = sum(exps[pos] for pos, name in enumerate(self.table.even) if name in names)
        odd = sum(1 for pos, name in enumerate(self.table.odd) if name in names and mask >> pos & 1)
        return even, odd

    def __eq__(self, other):
        return isinstance(other, FormAlgebra) and (self.n, self.m) == (other.n, other.m)

    def __hash__(self):
        return hash((self.n, self.m))

    def __repr__(self):
        return 'FormAlgebra({}|{})'.format(self.n, self.m)


@lru_cache(maxsize=None)
def form_algebra(n, m):
    return FormAlgebra(n, m)


@dataclass(frozen=True)
class DegreeProfile:
    """
        Degrees of a monomial `eta (x) F (x) f` in the even and odd symbols of its `dx` part `eta` and its `dp` part `F`.
    """
    deg0_eta: int
    deg1_eta: int
    deg0_F: int
    deg1_F: int

    def lam(self, n, m):
        return (n + m) + (self.deg0_F - self.deg1_F) + (self.deg0_eta - self.deg1_eta)

    @property
    def bidegree(self):
        return self.deg0_eta + self.deg1_eta, self.deg0_F + self.deg1_F


class MixedForm:
    """
        Polynomial differential form on the BV superspace, stored as one scalar over the generators of a
        `FormAlgebra`.

        # Parameters
            algebra: FormAlgebra
                the generators.
            scalar: SuperScalar
                the form; a string in the textual syntax is parsed.

        # Example
        ```python
        import superbv
        algebra = superbv.form_algebra(1, 0)
        eta = superbv.MixedForm(algebra, "-dz*p_z")
        assert superbv.d(eta) == superbv.symplectic_form(1, 0)
        ```
    """

    def __init__(self, algebra, scalar):
        self.algebra = algebra
        if isinstance(scalar, str):
            scalar = algebra.parse(scalar)
        elif not isinstance(scalar, SuperScalar):
            scalar = SuperScalar.constant(algebra.table, scalar)
        if scalar.table != algebra.table:
            raise ValueError('{} does not live over the generators of {}.'.format(scalar, algebra))
        self.scalar = scalar

    def _wrap(self, scalar):
        return MixedForm(self.algebra, scalar)

    def _lift(self, other):
        return other.scalar if isinstance(other, MixedForm) else other

    def __add__(self, other):
        return self._wrap(self.scalar + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.scalar - self._lift(other))

    def __neg__(self):
        return self._wrap(-self.scalar)

    def __mul__(self, other):
        return self._wrap(self.scalar * self._lift(other))

    def __rmul__(self, other):
        return self._wrap(self._lift(other) * self.scalar)

    def __truediv__(self, other):
        return self._wrap(self.scalar * (QQ_I.one / QQ_I.convert(other)))

    def __bool__(self):
        return bool(self.scalar)

    def __eq__(self, other):
        if isinstance(other, MixedForm):
            return self.algebra == other.algebra and self.scalar == other.scalar
        return self.scalar == other

    def __hash__(self):
        return hash((self.algebra, self.scalar))

    def __iter__(self):
        return iter(self.scalar)

    def __len__(self):
        return len(self.scalar)

    def monomials(self):
        """
            Iterates over `(key, coefficient, monomial form)` with a unit coefficient monomial.
        """
        for key, coeff in self.scalar:
            yield key, coeff, self._wrap(SuperScalar.monomial(self.algebra.table, *key))

    def profile(self, key=None):
        """
            `DegreeProfile` of a monomial key, or of the form when it is a single monomial.
        """
        if key is None:
            if len(self.scalar) != 1:
                raise ValueError('{} is not a monomial.'.format(self))
            key = next(iter(self.scalar))[0]
        algebra = self.algebra
        eta = algebra.degrees(key, set(algebra.dx))
        forms = algebra.degrees(key, set(algebra.dp))
        return DegreeProfile(eta[0], eta[1], forms[0], forms[1])

    def __str__(self):
        return format_scalar(self.scalar)

    def __repr__(self):
        return 'MixedForm({}|{}: {})'.format(self.algebra.n, self.algebra.m, format_scalar(self.scalar))


def d(form):
    """
        de Rham differential `sum_a dx_a d/dx_a + dp_a d/dp_a`, an odd derivation with `d(dx_a) = d(dp_a) = 0`.

        # Example
        ```python
        import superbv
        algebra = superbv.form_algebra(1, 0)
        assert superbv.d(superbv.MixedForm(algebra, "z")) == superbv.MixedForm(algebra, "dz")
        ```
    """
    algebra = form.algebra
    out = SuperScalar.zero(algebra.table)
    for v, dv in zip(algebra.coords + algebra.fibers, algebra.dx + algebra.dp):
        derivative = derive(form.scalar, v)
        if derivative:
            out = out + algebra.var(dv) * derivative
    return form._wrap(out)


def symplectic_form(n, m):
    """
        The odd symplectic form `sum_a dx_a dp_a`.
    """
    algebra = form_algebra(n, m)
    out = SuperScalar.zero(algebra.table)
    for dx, dp in zip(algebra.dx, algebra.dp):
        out = out + algebra.var(dx) * algebra.var(dp)
    return MixedForm(algebra, out)


def primitive_form(n, m):
    """
        The primitive `eta = sum_a (-1)^(|x_a|+1) dx_a p_a` of the symplectic form.
    """
    algebra = form_algebra(n, m)
    out = SuperScalar.zero(algebra.table)
    for dx, p, parity in zip(algebra.dx, algebra.fibers, algebra.parities):
        term = algebra.var(dx) * algebra.var(p)
        out = out + (term if parity is Parity.ODD else -term)
    return MixedForm(algebra, out)


def s(form):
    """
        Left multiplication by the symplectic form.
    """
    return symplectic_form(form.algebra.n, form.algebra.m) * form


def h(form):
    """
        Contraction `sum_a d/d(dp_a) d/d(dx_a)`; on a monomial `hs + sh` is multiplication by `lambda_value`.
    """
    algebra = form.algebra
    out = SuperScalar.zero(algebra.table)
    for dx, dp in zip(algebra.dx, algebra.dp):
        out = out + derive(derive(form.scalar, dx), dp)
    return form._wrap(out)


def lambda_value(form, key=None):
    """
        `(n+m) + (deg0 F - deg1 F) + (deg0 eta - deg1 eta)` of a monomial; it vanishes exactly on
        `dz_1...dz_n dp_theta_1...dp_theta_m (x) f`.
    """
    return form.profile(key).lam(form.algebra.n, form.algebra.m)


def _lam(algebra, key):
    return lambda_value(MixedForm(algebra, SuperScalar.monomial(algebra.table, *key)))


def s_exact_preimage(form):
    """
        Solves `s(u) = form` for an s-closed form without lambda-zero terms, monomial by monomial through
        `u = h(form) / lambda`.

        # Returns
            `u`, or `None` when the form has a lambda-zero component or is not s-exact.
    """
    algebra = form.algebra
    out = SuperScalar.zero(algebra.table)
    for key, coeff, monomial in form.monomials():
        lam = lambda_value(form, key)
        if not lam:
            return None
        out = out + h(monomial).scalar * (coeff / QQ_I.convert(lam))
    preimage = form._wrap(out)
    return preimage if s(preimage) == form else None


def _weight(key):
    exps, mask = key
    return sum(exps) + mask.bit_count()


def deRham_homotopy(form, basepoint=None):
    """
        Primitive of a closed polynomial form by radial integration from the origin.

        The Euler contraction `iota = sum_v v d/d(dv)` satisfies `d iota + iota d = weight`, where the weight of a
        monomial counts every generator; each closed term is divided by its weight.

        # Parameters
            form: MixedForm
                closed polynomial form without 0-form part.
            basepoint: dict
                optional `coordinate -> value`; only the origin is supported.

        # Returns
            `sigma` with `d(sigma) = form`.
    """
    if basepoint and any(value for value in basepoint.values()):
        raise Unsupported('Radial homotopies are taken from the origin, got basepoint {}.'.format(basepoint))
    algebra = form.algebra
    symbols = list(zip(algebra.coords + algebra.fibers, algebra.dx + algebra.dp))
    for key, _ in form:
        if any(e < 0 for e in key[0]):
            raise Unsupported('{} has negative exponents.'.format(form))
        if key == algebra.split_symbols(key)[0]:
            raise ValueError('{} has a 0-form component.'.format(form))
    if d(form):
        raise ValueError('{} is not closed.'.format(form))
    out = SuperScalar.zero(algebra.table)
    for key, coeff, monomial in form.monomials():
        contraction = SuperScalar.zero(algebra.table)
        for v, dv in symbols:
            contraction = contraction + algebra.var(v) * derive(monomial.scalar, dv)
        out = out + contraction * (coeff / QQ_I.convert(_weight(key)))
    return form._wrap(out)


class BerSection:
    """
        Section `f * D` of the Berezinian sheaf of the base pulled back to the BV superspace, with
        `D = dz_1...dz_n dp_theta_1...dp_theta_m` and `f` a function of the coordinates and fiber coordinates.

        # Parameters
            algebra: FormAlgebra
                the generators.
            f: SuperScalar
                function part; a string is parsed.
    """

    def __init__(self, algebra, f):
        self.algebra = algebra
        if isinstance(f, str):
            f = algebra.parse(f)
        elif not isinstance(f, SuperScalar):
            f = SuperScalar.constant(algebra.table, f)
        if f.table == algebra.function_table:
            f = change_table(f, algebra.table)
        for key, _ in f:
            if algebra.split_symbols(key)[1] != ((0,) * algebra.table.p, 0):
                raise ValueError('{} contains form symbols.'.format(format_scalar(f)))
        self.f = f

    def _wrap(self, f):
        return BerSection(self.algebra, f)

    def __add__(self, other):
        return self._wrap(self.f + other.f)

    def __sub__(self, other):
        return self._wrap(self.f - other.f)

    def __neg__(self):
        return self._wrap(-self.f)

    def __bool__(self):
        return bool(self.f)

    def __eq__(self, other):
        return isinstance(other, BerSection) and self.algebra == other.algebra and self.f == other.f

    def __hash__(self):
        return hash((self.algebra, self.f))

    def __repr__(self):
        return 'BerSection({} * D)'.format(format_scalar(self.f))


def ber_section_to_form(section):
    """
        The form `f * D` representing a Berezinian section in the forms on the BV superspace.
    """
    return MixedForm(section.algebra, section.f * section.algebra.top)


def form_to_ber_section(form):
    """
        Component of a form along `D`, read as a Berezinian section.
    """
    algebra = form.algebra
    top_key = next(iter(algebra.top))[0]
    out = SuperScalar.zero(algebra.table)
    for key, coeff in form:
        function, symbols = algebra.split_symbols(key)
        if symbols == top_key:
            sign = algebra.factor_sign(key, function, top_key)
            out = out + SuperScalar.monomial(algebra.table, *function, coeff if sign > 0 else -coeff)
    return BerSection(algebra, out)


def bv_laplacian(section):
    """
        Super BV Laplacian `f * D -> (sum_a d^2 f / dx_a dp_a) * D`.

        # Example
        ```python
        import superbv
        algebra = superbv.form_algebra(1, 0)
        section = superbv.BerSection(algebra, "z*p_z")
        assert superbv.bv_laplacian(section) == superbv.BerSection(algebra, 1)
        ```
    """
    algebra = section.algebra
    out = SuperScalar.zero(algebra.table)
    for x, p in zip(algebra.coords, algebra.fibers):
        out = out + derive(derive(section.f, p), x)
    return section._wrap(out)


def projection_P(section):
    """
        Component of `f` along `theta_1...theta_m p_z_1...p_z_n`, the only monomial the homotopy `K` cannot reach.
    """
    algebra = section.algebra
    key = next(iter(algebra.failure_monomial))[0]
    coeff = section.f.coefficient(*key)
    return section._wrap(SuperScalar.monomial(algebra.table, *key, coeff))


def bv_homotopy_K(section):
    """
        Homotopy for the BV Laplacian.

        Every term `g(x) p^I` of `f` is sent to

            sum_a (-1)^(|g|(|x_a|+1)) (int_0^1 t^l x_a g(tx) dt) p_a p^I,
            l = n + m + deg0(p^I) - deg1(p^I) - 2 deg1(g) - 1,

        where the integral of a monomial of x-degree `delta` is `1 / (l + delta + 1)`. With this choice
        `(Delta K + K Delta)(f) = f - P(f)`.

        # Parameters
            section: BerSection
                the section to transform.

        # Returns
            A `BerSection`.
    """
    algebra = section.algebra
    n, m = algebra.n, algebra.m
    failure = next(iter(algebra.failure_monomial))[0]
    out = SuperScalar.zero(algebra.table)
    for key, coeff in section.f:
        g_key, p_key = algebra.split_coordinates(key)
        sign = algebra.factor_sign(key, g_key, p_key)
        g = SuperScalar.monomial(algebra.table, *g_key, coeff if sign > 0 else -coeff)
        p_monomial = SuperScalar.monomial(algebra.table, *p_key)
        p_even, p_odd = algebra.degrees(p_key, set(algebra.fibers))
        g_even, g_odd = algebra.degrees(g_key, set(algebra.coords))
        level = n + m + p_even - p_odd - 2 * g_odd - 1
        denominator = level + g_even + g_odd + 1
        if denominator == 0:
            if key == failure:
                continue
            raise ConventionViolation('The t-integral of {} has a vanishing denominator.'.format(
                format_scalar(SuperScalar.monomial(algebra.table, *key, coeff))))
        g_parity = int(g.parity)
        for x, p, parity in zip(algebra.coords, algebra.fibers, algebra.parities):
            term = algebra.var(x) * g * algebra.var(p) * p_monomial
            if g_parity * (int(parity) + 1) % 2:
                term = -term
            out = out + term * (QQ_I.one / QQ_I.convert(denominator))
    return section._wrap(out)


def _zigzag(section):
    # T with s(T) = d(f * D)
    form = ber_section_to_form(section)
    algebra = section.algebra
    out = SuperScalar.zero(algebra.table)
    for x, p, dx, dp in zip(algebra.coords, algebra.fibers, algebra.dx, algebra.dp):
        out = out + derive(derive(form.scalar, x), dp) + derive(derive(form.scalar, p), dx)
    return form._wrap(out)


def delta3(section):
    """
        Third-page differential: `d(f D) = s(T)` with `T = sum_a (d/d(dp_a) d/dx_a + d/d(dx_a) d/dp_a)(f D)`, and the
        component of `d(T)` along `D` is returned. The remaining part of `d(T)` is s-exact.

        # Example
        ```python
        import superbv
        algebra = superbv.form_algebra(1, 1)
        section = superbv.BerSection(algebra, "z*p_z + theta*p_theta")
        assert superbv.delta3(section) == superbv.bv_laplacian(section)
        ```
    """
    return form_to_ber_section(d(_zigzag(section)))


def check_delta3(section, name=None):
    """
        Verifies `s(T) = d(f D)`, that `delta3` agrees with the BV Laplacian, and that `d(T) - Delta(f) D` has an
        s-preimage.
    """
    algebra = section.algebra
    name = name or 'bv.{}|{}.delta3'.format(algebra.n, algebra.m)
    t = _zigzag(section)
    problems = []
    if s(t) != d(ber_section_to_form(section)):
        problems.append('s(T) != d(S)')
    laplacian = bv_laplacian(section)
    if delta3(section) != laplacian:
        problems.append('delta3 - Delta = {}'.format(format_scalar((delta3(section) - laplacian).f)))
    rest = d(t) - ber_section_to_form(laplacian)
    if rest and s_exact_preimage(rest) is None:
        problems.append('no s-preimage for {}'.format(rest))
    return CheckResult(name, not problems, 'delta3 = Delta modulo s-exact forms', '; '.join(problems))


def random_form(algebra, rng, terms=3, max_exponent=2):
    """
        Seeded random polynomial form over all generators.
    """
    return MixedForm(algebra, random_scalar(algebra.table, rng, terms=terms, exponent_range=(0, max_exponent)))


def random_section(algebra, rng, terms=3, max_exponent=2):
    """
        Seeded random Berezinian section.
    """
    f = random_scalar(algebra.function_table, rng, terms=terms, exponent_range=(0, max_exponent))
    return BerSection(algebra, change_table(f, algebra.table))


def _monomials(table, names, degree):
    """
        Keys of all monomials of total degree `degree` in the generators `names` of `table`.
    """
    evens = [table.locate(name)[1] for name in names if table.parity(name) is Parity.EVEN]
    odds = [table.locate(name)[1] for name in names if table.parity(name) is Parity.ODD]
    out = []
    for count in range(min(degree, len(odds)) + 1):
        for chosen in itertools.combinations(odds, count):
            mask = sum(1 << pos for pos in chosen)
            rest = degree - count
            if not evens:
                if rest == 0:
                    out.append(((0,) * table.p, mask))
                continue
            for split in itertools.combinations(range(rest + len(evens) - 1), len(evens) - 1):
                bounds = (-1,) + split + (rest + len(evens) - 1,)
                exps = [0] * table.p
                for pos, low, high in zip(evens, bounds, bounds[1:]):
                    exps[pos] = high - low - 1
                out.append((tuple(exps), mask))
    return out


def _symbol_monomials(algebra, eta_degree, f_degree):
    out = []
    for eta in _monomials(algebra.table, algebra.dx, eta_degree):
        for forms in _monomials(algebra.table, algebra.dp, f_degree):
            out.append((tuple(a + b for a, b in zip(eta[0], forms[0])), eta[1] | forms[1]))
    return out


def _function_monomials(algebra, x_degree, p_degree):
    out = []
    for g in _monomials(algebra.table, algebra.coords, x_degree):
        for fiber in _monomials(algebra.table, algebra.fibers, p_degree):
            out.append((tuple(a + b for a, b in zip(g[0], fiber[0])), g[1] | fiber[1]))
    return out


def _rank(operator, algebra, keys):
    rows, columns = [], {}
    for key in keys:
        image = operator(MixedForm(algebra, SuperScalar.monomial(algebra.table, *key))).scalar
        row = {}
        for image_key, coeff in image:
            row[columns.setdefault(image_key, len(columns))] = coeff
        rows.append(row)
    return linalg.rank(rows, len(columns))


def _s_homology(algebra, eta_degree, f_degree):
    keys = _symbol_monomials(algebra, eta_degree, f_degree)
    outgoing = _rank(s, algebra, keys)
    incoming = _rank(s, algebra, _symbol_monomials(algebra, eta_degree - 1, f_degree - 1)) \
        if eta_degree and f_degree else 0
    return len(keys), len(keys) - outgoing - incoming


def lambda_census(n, m, **kwargs):
    """
        Census of the symbol monomials `eta (x) F` by bidegree.

        # Parameters
            n, m: integer
                base dimension.
            kwargs:
                key: `form_degree`: integer
                    largest degree of `eta` and of `F`, default 3.

        # Returns
            A `pandas.DataFrame` with columns `deg_eta, deg_F, monomials, lambda_zero, homology`; `homology` is the
            dimension of the s-homology at that bidegree from exact ranks.
    """
    top = kwargs.get('form_degree', 3)
    algebra = form_algebra(n, m)
    rows = []
    for eta_degree in range(top + 1):
        for f_degree in range(top + 1):
            keys = _symbol_monomials(algebra, eta_degree, f_degree)
            zero = sum(1 for key in keys if _lam(algebra, key) == 0)
            count, homology = _s_homology(algebra, eta_degree, f_degree)
            rows.append({'deg_eta': eta_degree, 'deg_F': f_degree, 'monomials': count, 'lambda_zero': zero,
                         'homology': homology})
    log.debug('lambda census {}|{}: {} bidegrees'.format(n, m, len(rows)))
    return pd.DataFrame(rows, columns=['deg_eta', 'deg_F', 'monomials', 'lambda_zero', 'homology'])


def check_lambda_formula(n, m, **kwargs):
    """
        `(hs + sh)` acts on every monomial within the truncation as multiplication by its `lambda_value`; the
        function parts range over coordinate degree up to `x_max` and fiber degree up to `p_max` (default 4).
    """
    top = kwargs.get('form_degree', 3)
    algebra = form_algebra(n, m)
    x_max, p_max = kwargs.get('x_max', 4), kwargs.get('p_max', 4)
    functions = [key for x_degree in range(x_max + 1) for p_degree in range(p_max + 1)
                 for key in _function_monomials(algebra, x_degree, p_degree)]
    failures, count = [], 0
    for eta_degree in range(top + 1):
        for f_degree in range(top + 1):
            for symbol in _symbol_monomials(algebra, eta_degree, f_degree):
                for function in set(functions):
                    monomial = MixedForm(algebra, SuperScalar.monomial(algebra.table, *function)
                                         * SuperScalar.monomial(algebra.table, *symbol))
                    if not monomial:
                        continue
                    count += 1
                    expected = monomial * lambda_value(monomial)
                    if h(s(monomial)) + s(h(monomial)) != expected:
                        failures.append(str(monomial))
    return CheckResult('bv.{}|{}.lambda'.format(n, m), not failures, 'hs + sh = lambda on every monomial',
                       '; '.join(failures[:5]), data={'monomials': count})


def s_homology_basis(n, m, **kwargs):
    """
        Classes spanning the s-homology within the truncation: `f * D` for the function monomials `f`.

        # Parameters
            n, m: integer
                base dimension.
            kwargs:
                key: `form_degree`: integer
                    largest symbol degree searched, default 3.
                key: `x_max`, `p_max`: integer
                    largest coordinate and fiber degree of `f`, default 4.

        # Returns
            A list of `MixedForm`s.
    """
    top = kwargs.get('form_degree', 3)
    x_max = kwargs.get('x_max', 4)
    p_max = kwargs.get('p_max', 4)
    algebra = form_algebra(n, m)
    generators = []
    for eta_degree in range(top + 1):
        for f_degree in range(top + 1):
            _, homology = _s_homology(algebra, eta_degree, f_degree)
            if homology:
                zero = [key for key in _symbol_monomials(algebra, eta_degree, f_degree)
                        if _lam(algebra, key) == 0]
                if len(zero) != homology:
                    raise ConventionViolation('Bidegree ({}, {}) has {} classes but {} lambda-zero monomials.'
                                              .format(eta_degree, f_degree, homology, len(zero)))
                generators += [SuperScalar.monomial(algebra.table, *key) for key in zero]
    if not generators:
        raise ValueError('Symbol degree {} is too small to contain D for {}|{}.'.format(top, n, m))
    basis = []
    for x_degree in range(x_max + 1):
        for p_degree in range(p_max + 1):
            for key in _function_monomials(algebra, x_degree, p_degree):
                for generator in generators:
                    basis.append(MixedForm(algebra, SuperScalar.monomial(algebra.table, *key) * generator))
    log.info('s-homology of {}|{}: {} generator(s), {} classes within truncation'.format(
        n, m, len(generators), len(basis)))
    return basis


def _laplacian_rank(algebra, keys):
    rows, columns = [], {}
    for key in keys:
        image = bv_laplacian(BerSection(algebra, SuperScalar.monomial(algebra.table, *key))).f
        row = {}
        for image_key, coeff in image:
            row[columns.setdefault(image_key, len(columns))] = coeff
        rows.append(row)
    return linalg.rank(rows, len(columns))


def page3_homology(n, m, **kwargs):
    """
        Kernel of the BV Laplacian modulo its image, computed separately for every bidegree
        `(x-degree, p-degree)` within the truncation.

        # Returns
            A `pandas.DataFrame` with columns `x_degree, p_degree, monomials, kernel, image, homology`.
    """
    x_max = kwargs.get('x_max', 4)
    p_max = kwargs.get('p_max', 4)
    algebra = form_algebra(n, m)
    rows = []
    for x_degree in range(x_max + 1):
        for p_degree in range(p_max + 1):
            keys = _function_monomials(algebra, x_degree, p_degree)
            kernel = len(keys) - _laplacian_rank(algebra, keys)
            image = _laplacian_rank(algebra, _function_monomials(algebra, x_degree + 1, p_degree + 1))
            rows.append({'x_degree': x_degree, 'p_degree': p_degree, 'monomials': len(keys), 'kernel': kernel,
                         'image': image, 'homology': kernel - image})
    frame = pd.DataFrame(rows, columns=['x_degree', 'p_degree', 'monomials', 'kernel', 'image', 'homology'])
    log.info('page-3 homology of {}|{}: total dimension {}'.format(n, m, int(frame['homology'].sum())))
    return frame


def check_bv_homotopy(n, m, **kwargs):
    """
        `(Delta K + K Delta)(f) = f - P(f)` on every function monomial within the truncation.
    """
    x_max = kwargs.get('x_max', 4)
    p_max = kwargs.get('p_max', 4)
    algebra = form_algebra(n, m)
    failures, count = [], 0
    for x_degree in range(x_max + 1):
        for p_degree in range(p_max + 1):
            for key in _function_monomials(algebra, x_degree, p_degree):
                section = BerSection(algebra, SuperScalar.monomial(algebra.table, *key))
                count += 1
                lhs = bv_laplacian(bv_homotopy_K(section)) + bv_homotopy_K(bv_laplacian(section))
                if lhs != section - projection_P(section):
                    failures.append(format_scalar(section.f))
    return CheckResult('bv.{}|{}.homotopy_K'.format(n, m), not failures, '(Delta K + K Delta) = id - P',
                       '; '.join(failures[:5]), data={'monomials': count})


def check_double_complex(n, m, **kwargs):
    """
        Seeded property checks `d^2 = 0`, `s^2 = 0`, `ds + sd = 0` on random forms and `Delta^2 = 0` on random
        Berezinian sections.

        # Parameters
            n, m: integer
                base dimension.
            kwargs:
                key: `seed`: integer
                    seed of the numpy generator, default 0.
                key: `trials`: integer
                    samples per identity, default 200.

        # Returns
            A list of `CheckResult`s.
    """
    rng = np.random.default_rng(kwargs.get('seed', 0))
    trials = kwargs.get('trials', 200)
    algebra = form_algebra(n, m)
    failures = {'d_squared': [], 's_squared': [], 'ds_anticommute': [], 'laplacian_squared': []}
    for _ in range(trials):
        form = random_form(algebra, rng)
        if d(d(form)):
            failures['d_squared'].append(str(form))
        if s(s(form)):
            failures['s_squared'].append(str(form))
        if d(s(form)) + s(d(form)):
            failures['ds_anticommute'].append(str(form))
        section = random_section(algebra, rng)
        if bv_laplacian(bv_laplacian(section)):
            failures['laplacian_squared'].append(format_scalar(section.f))
    anchors = {'d_squared': 'd^2 = 0', 's_squared': 's^2 = 0', 'ds_anticommute': '[d, s] = ds + sd = 0',
               'laplacian_squared': 'Delta^2 = 0'}
    return [CheckResult('bv.{}|{}.{}'.format(n, m, key), not bad, anchors[key], '; '.join(bad[:3]),
                        data={'trials': trials}) for key, bad in failures.items()]


def run_bv_checks(n, m, **kwargs):
    """
        The full double complex suite for one base dimension.

        # Returns
            A list of `CheckResult`s: the seeded identities, the lambda formula and census, the homotopy `K`,
            `delta3` on random sections and the page-3 homology.
    """
    algebra = form_algebra(n, m)
    results = check_double_complex(n, m, **kwargs)
    results.append(check_lambda_formula(n, m, **kwargs))
    census = lambda_census(n, m, **kwargs)
    mismatch = census[census['homology'] != census['lambda_zero']]
    generator = ber_section_to_form(BerSection(algebra, 1))
    results.append(CheckResult('bv.{}|{}.census'.format(n, m), mismatch.empty,
                               's-homology is spanned by the lambda-zero monomials',
                               mismatch.to_string(index=False) if not mismatch.empty else '',
                               data={'generator': str(generator),
                                     'homology': {'{},{}'.format(r.deg_eta, r.deg_F): int(r.homology)
                                                  for r in census.itertuples() if r.homology}}))
    results.append(check_bv_homotopy(n, m, **kwargs))
    rng = np.random.default_rng(kwargs.get('seed', 0) + 1)
    failures, trials = [], kwargs.get('trials', 200)
    for _ in range(trials):
        result = check_delta3(random_section(algebra, rng))
        if not result.passed:
            failures.append(result.residual)
    results.append(CheckResult('bv.{}|{}.delta3'.format(n, m), not failures, 'delta3 = Delta modulo s-exact forms',
                               '; '.join(failures[:3]), data={'trials': trials}))
    page3 = page3_homology(n, m, **kwargs)
    total = int(page3['homology'].sum())
    representative = BerSection(algebra, algebra.failure_monomial)
    closed = not bv_laplacian(representative)
    results.append(CheckResult('bv.{}|{}.page3'.format(n, m), total == 1 and closed,
                               'the page-3 homology is spanned by theta_1...theta_m p_z_1...p_z_n',
                               '' if total == 1 and closed else 'dimension {}'.format(total),
                               data={'dimension': total, 'representative': format_scalar(algebra.failure_monomial)}))
    return results
