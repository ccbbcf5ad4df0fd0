import itertools
import logging
from functools import lru_cache

from sympy.polys.domains import QQ_I

from .algebra import (Parity, SuperMatrix, SuperScalar, Unsupported, change_table, derive, format_scalar,
                      linalg, monomial_text)
from .atlas import LineBundle, SheafData, jacobian, pullback
from .report import CheckResult

log = logging.getLogger(__file__)


def reference_pair(atlas):
    """
        The overlap `(U, V)` on which classes are computed: `U` is the second chart and `V` the first, so
        windows are written in the first even coordinate of the first chart.
    """
    if len(atlas.charts) < 2:
        return None
    pair = (atlas.charts[1].name, atlas.charts[0].name)
    if pair not in atlas.transitions or pair[::-1] not in atlas.transitions:
        raise Unsupported('{} does not store both directions between {} and {}.'.format(atlas.name, *pair))
    return pair


class CohomologyClass:
    """
        Normal form of a Cech 1-cocycle modulo coboundaries: the coefficients left on the window
        monomials once every coboundary direction has been eliminated. The zero map is the trivial class.

        # Parameters
            window_coefficients: dict
                `(entry label, monomial text) -> coefficient`.
            system: CoefficientSystem
                the coefficient sheaf the class lives in.
            table: VarTable
                variables of the window monomials.
    """

    def __init__(self, window_coefficients, system=None, table=None):
        self.window_coefficients = {k: QQ_I.convert(v) for k, v in window_coefficients.items() if v}
        self.system = system
        self.table = table

    def is_zero(self):
        return not self.window_coefficients

    def coefficient(self, label, monomial):
        return self.window_coefficients.get((label, monomial), QQ_I.zero)

    def scaled(self, factor):
        return CohomologyClass({k: v * QQ_I.convert(factor) for k, v in self.window_coefficients.items()},
                               self.system, self.table)

    def __eq__(self, other):
        return isinstance(other, CohomologyClass) and self.window_coefficients == other.window_coefficients

    def __hash__(self):
        return hash(frozenset(self.window_coefficients.items()))

    def to_dict(self):
        return {'{} {}'.format(label, monomial): str(QQ_I.to_sympy(value))
                for (label, monomial), value in sorted(self.window_coefficients.items())}

    def __repr__(self):
        return 'CohomologyClass({})'.format(self.to_dict())


class CechCochain:
    """
        Cech cochain with values in a coefficient system.

        Degree-0 cochains map chart names to values, degree-1 cochains map ordered overlaps `(U, V)` to values
        written in the coordinates of `V`. A value is a `SuperMatrix` for Hom coefficients and a dict
        `coordinate index -> SuperMatrix` for Atiyah coefficients.
    """

    def __init__(self, values, degree=1, system=None, name='cochain'):
        if degree not in (0, 1):
            raise ValueError('Only degrees 0 and 1 are supported, got {}.'.format(degree))
        self.values = dict(values)
        self.degree = degree
        self.system = system
        self.name = name

    def __getitem__(self, key):
        return self.values[key]

    def is_zero(self):
        return all(not scalar for value in self.values.values()
                   for scalar in self.system.flatten(value).values())

    def to_dict(self):
        out = {}
        for where, value in sorted(self.values.items()):
            label = where if isinstance(where, str) else '{}-{}'.format(*where)
            out[label] = {self.system.label(key, where): format_scalar(scalar)
                          for key, scalar in sorted(self.system.flatten(value).items()) if scalar}
        return out

    def __repr__(self):
        return 'CechCochain({}, degree={}, {})'.format(self.name, self.degree, self.to_dict())


class CoefficientSystem:
    """
        Sheaf of coefficients for Cech cochains on a two-chart cover.

        Subclasses list the entry keys with their parities and move a 0-cochain value from `U` to `V`
        (`transport`); a 1-cochain `phi` is a coboundary when `phi = N_V - transport(N_U)`.
    """
    kind = 'abstract'

    def __init__(self, sheaf, reduced=False):
        self.sheaf = sheaf
        self.atlas = sheaf.atlas
        self.reduced = reduced
        self._cache = {}

    @property
    def keys(self):
        raise NotImplementedError

    def flatten(self, value):
        raise NotImplementedError

    def assemble(self, scalars, table):
        raise NotImplementedError

    def _transport(self, value, pair):
        raise NotImplementedError

    def label(self, key, where=None):
        return '[{}]'.format(','.join(str(k) for k in key))

    def transport(self, scalars, pair=None):
        """
            Moves the value `scalars` (a dict `key -> SuperScalar` over `U`) to the coordinates and frames of `V`.
        """
        pair = pair or reference_pair(self.atlas)
        table = self.atlas.chart(pair[0]).table
        full = {key: scalars.get(key, SuperScalar.zero(table)) for key, _ in self.keys}
        out = self.flatten(self._transport(self.assemble(full, table), pair))
        if self.reduced:
            out = {key: value.reduced() for key, value in out.items()}
        return {key: out[key] for key, _ in self.keys}

    def exponent_bound(self, pair=None):
        raise NotImplementedError


def _inverse_pair(pair):
    return pair[1], pair[0]


class HomCoefficients(CoefficientSystem):
    """
        `Hom(source, target)`; without a source this is the sheaf `target` itself. Transport reads
        `N -> G_target N G_source^-1`, with `N` rewritten in the coordinates of `V`.
    """
    kind = 'hom'

    def __init__(self, target, source=None, reduced=False):
        super().__init__(target, reduced=reduced)
        self.target = target
        self.source = source

    @property
    def source_parities(self):
        return self.source.parities if self.source is not None else (Parity.EVEN,)

    @property
    def keys(self):
        return [((i, j), pi + pj) for i, pi in enumerate(self.target.parities)
                for j, pj in enumerate(self.source_parities)]

    def flatten(self, value):
        return {(i, j): a for i, row in enumerate(value.entries) for j, a in enumerate(row)}

    def assemble(self, scalars, table):
        entries = [[scalars.get((i, j), SuperScalar.zero(table)) for j in range(len(self.source_parities))]
                   for i in range(len(self.target.parities))]
        return SuperMatrix(entries, self.target.parities, self.source_parities, table=table, check=False)

    def _data(self, pair):
        if pair not in self._cache:
            g_target = self.target.transition(*pair)
            g_source = None if self.source is None else self.source.transition(*pair).inverse()
            if self.reduced:
                g_target = g_target.reduced()
                g_source = None if g_source is None else g_source.reduced()
            self._cache[pair] = g_target, g_source, self.atlas.transition(*_inverse_pair(pair))
        return self._cache[pair]

    def _transport(self, value, pair):
        g_target, g_source_inverse, back = self._data(pair)
        moved = g_target @ pullback(value, back)
        return moved if g_source_inverse is None else moved @ g_source_inverse

    def exponent_bound(self, pair=None):
        pair = pair or reference_pair(self.atlas)
        g_target, g_source_inverse, back = self._data(pair)
        bounds = [g_target.exponent_bound(), max((a.exponent_bound() for a in back.images.values()), default=0)]
        if g_source_inverse is not None:
            bounds.append(g_source_inverse.exponent_bound())
        return sum(bounds)


class AtiyahCoefficients(CoefficientSystem):
    """
        `Omega^1 (x) End(E)` for a sheaf `E`, with the differentials `dx_c` kept as formal symbols of parity `|x_c|`.

        A value is a dict `c -> matrix` for the slot coordinates `c`; transport rewrites `sum_a dx_a N^a` as
        `sum_c dz_c G^(c) (sum_a (d x_a / d z_c) N^a) G^-1`, where `G^(c)` carries the sign of moving `dz_c`
        past the entries of `G`. `slots`, `rows` and `cols` select a block of the full system.
    """
    kind = 'atiyah'

    def __init__(self, sheaf, slots=None, rows=None, cols=None, reduced=False):
        super().__init__(sheaf, reduced=reduced)
        chart = self.atlas.charts[0]
        size = len(sheaf.parities)
        self.coord_parities = tuple(chart.table.parity(x) for x in chart.coords)
        self.slots = tuple(range(len(self.coord_parities))) if slots is None else tuple(slots)
        self.rows = tuple(range(size)) if rows is None else tuple(rows)
        self.cols = tuple(range(size)) if cols is None else tuple(cols)

    @property
    def keys(self):
        return [((c, i, j), self.coord_parities[c] + self.sheaf.parities[i] + self.sheaf.parities[j])
                for c in self.slots for i in self.rows for j in self.cols]

    def label(self, key, where=None):
        c, i, j = key
        if isinstance(where, tuple):
            where = where[1]
        chart = self.atlas.chart(where) if where is not None else self.atlas.charts[0]
        return '{}[{},{}]'.format(chart.coords[c], i, j)

    def flatten(self, value):
        out = {}
        for c in self.slots:
            matrix = value.get(c)
            for i in self.rows:
                for j in self.cols:
                    out[(c, i, j)] = matrix[i, j] if matrix is not None else None
        table = next((a.table for a in out.values() if a is not None), None)
        return {k: a if a is not None else SuperScalar.zero(table) for k, a in out.items()}

    def assemble(self, scalars, table):
        size = len(self.sheaf.parities)
        value = {}
        for c in self.slots:
            entries = [[scalars.get((c, i, j), SuperScalar.zero(table)) for j in range(size)] for i in range(size)]
            value[c] = SuperMatrix(entries, self.sheaf.parities, self.sheaf.parities, table=table,
                                   parity=self.coord_parities[c], check=False)
        return value

    def _data(self, pair):
        if pair not in self._cache:
            g = self.sheaf.transition(*pair)
            g_inverse = g.inverse()
            back = self.atlas.transition(*_inverse_pair(pair))
            jac = jacobian(back)
            if self.reduced:
                g, g_inverse, jac = g.reduced(), g_inverse.reduced(), jac.reduced()
            twisted = {}
            for c, parity in enumerate(self.coord_parities):
                twisted[c] = SuperMatrix([[a if not (int(parity) and int(a.parity)) else -a for a in row]
                                          for row in g.entries], g.row_parities, g.col_parities,
                                         table=g.table, check=False)
            self._cache[pair] = g, g_inverse, jac, twisted, back
        return self._cache[pair]

    def _transport(self, value, pair):
        g, g_inverse, jac, twisted, back = self._data(pair)
        table = g.table
        moved = {a: pullback(matrix, back) for a, matrix in value.items()}
        out = {}
        for c in range(len(self.coord_parities)):
            combined = None
            for a, matrix in moved.items():
                factor = jac[c, a]
                if not factor or matrix.is_zero():
                    continue
                term = matrix.scale(factor)
                combined = term if combined is None else combined + term
            if combined is None:
                out[c] = SuperMatrix.zero(table, g.row_parities, g.col_parities, parity=self.coord_parities[c])
            else:
                out[c] = twisted[c] @ combined @ g_inverse
        return out

    def exponent_bound(self, pair=None):
        pair = pair or reference_pair(self.atlas)
        g, g_inverse, jac, _, back = self._data(pair)
        return (g.exponent_bound() + g_inverse.exponent_bound() + jac.exponent_bound()
                + max((a.exponent_bound() for a in back.images.values()), default=0))


def _fiber_names(chart):
    return [name for name in chart.fiber if name in chart.table.even or name in chart.table.odd]


def _fiber_degree(chart, exps, mask):
    fiber = set(chart.fiber)
    degree = sum(e for name, e in zip(chart.table.even, exps) if name in fiber)
    return degree + sum(1 for pos, name in enumerate(chart.table.odd) if mask >> pos & 1 and name in fiber)


def _monomials(chart, parity, bound, fiber_degrees, reduced):
    """
        Monomials of the given parity in the chart: base even exponent 0..bound, any theta mask and the
        requested fiber degrees.
    """
    table = chart.table
    fiber = set(chart.fiber)
    base_even = [pos for pos, name in enumerate(table.even) if name not in fiber]
    fiber_even = [pos for pos, name in enumerate(table.even) if name in fiber]
    if len(base_even) != 1:
        raise Unsupported('Cohomology is computed over a base with one even coordinate, chart {} has {}.'
                          .format(chart.name, len(base_even)))
    masks = [0] if reduced else range(1 << table.q)
    top = max(fiber_degrees, default=0)
    fiber_exponents = [combo for combo in itertools.product(range(top + 1), repeat=len(fiber_even))]
    out = []
    for mask in masks:
        if mask.bit_count() % 2 != int(parity):
            continue
        for combo in fiber_exponents:
            for e in range(bound + 1):
                exps = [0] * table.p
                exps[base_even[0]] = e
                for pos, k in zip(fiber_even, combo):
                    exps[pos] = k
                exps = tuple(exps)
                if _fiber_degree(chart, exps, mask) in fiber_degrees:
                    out.append((exps, mask))
    return out


def _column_order(coordinate):
    key, exps, mask = coordinate
    e = exps[0]
    return (0, e, key, exps, mask) if e >= 0 else (1, e, key, exps, mask)


def _vector(scalars):
    return {(key, exps, mask): coeff for key, scalar in scalars.items() for (exps, mask), coeff in scalar}


class _CoboundarySpace:
    """
        Image of the Cech differential on a bounded space of 0-cochains, in row echelon form.
    """

    def __init__(self, system, bound, fiber_degrees):
        self.system = system
        atlas = system.atlas
        self.pair = reference_pair(atlas)
        u, v = self.pair
        self.charts = atlas.chart(u), atlas.chart(v)
        self.unknowns = []
        images = []
        for key, parity in system.keys:
            for which, chart in enumerate(self.charts):
                for exps, mask in _monomials(chart, parity, bound, fiber_degrees, system.reduced):
                    monomial = SuperScalar.monomial(chart.table, exps, mask)
                    if which == 0:
                        image = {k: -a for k, a in system.transport({key: monomial}, self.pair).items()}
                    else:
                        image = {key: monomial}
                    self.unknowns.append((which, key, exps, mask))
                    images.append(_vector(image))
        coordinates = sorted({c for image in images for c in image}, key=_column_order)
        self.images = images
        self.columns = {c: n for n, c in enumerate(coordinates)}
        log.debug('coboundary space of {}: {} unknowns, {} coordinates'.format(
            system.sheaf.name, len(self.unknowns), len(self.columns)))

    def extend(self, vector):
        for c in sorted(set(vector) - set(self.columns), key=_column_order):
            self.columns[c] = len(self.columns)

    def normal_form(self, vector):
        self.extend(vector)
        order = sorted(self.columns, key=_column_order)
        index = {c: n for n, c in enumerate(order)}
        rows = [{index[c]: a for c, a in image.items()} for image in self.images]
        reduced, pivots = linalg.row_reduce(rows, len(order))
        remainder = linalg.reduce_vector({index[c]: a for c, a in vector.items()}, reduced, pivots)
        return {order[n]: a for n, a in remainder.items()}

    def witness(self, vector):
        solution = linalg.solve(self.images, vector)
        if solution is None:
            return None
        values = {chart.name: {} for chart in self.charts}
        for n, coeff in solution.items():
            which, key, exps, mask = self.unknowns[n]
            chart = self.charts[which]
            term = SuperScalar.monomial(chart.table, exps, mask, coeff)
            values[chart.name][key] = values[chart.name].get(key, SuperScalar.zero(chart.table)) + term
        return values


def _zero_witness(system):
    values = {}
    for chart in system.atlas.charts:
        values[chart.name] = system.assemble({}, chart.table)
    return CechCochain(values, degree=0, system=system, name='witness')


def is_coboundary(cochain, sheaf=None, **kwargs):
    """
        Decides whether a 1-cocycle is a Cech coboundary on the reference overlap.

        Writes `phi = N_V - transport(N_U)` as a finite linear system whose unknowns are monomials in the
        owning chart (non-negative powers of its even base coordinate up to a degree bound). On success the
        0-cochain `(N_U, N_V)` is returned, otherwise the class normal form.

        # Parameters
            cochain: CechCochain
                a degree-1 cochain.
            sheaf: SheafData
                optional; when given the cochain is read in `Hom(O, sheaf)`.
            kwargs:
                key: `bound`: integer
                    overrides the degree bound of the unknowns.

        # Returns
            `(True, witness)` with a degree-0 `CechCochain`, or `(False, CohomologyClass)`.

        # Example
        ```python
        import superbv
        o_minus_two = superbv.line_bundle_sheaf(-2)
        table = o_minus_two.atlas.chart("U0").table
        value = superbv.SuperMatrix.from_strings([["z^-1"]], table, [0], [0])
        split, cls = superbv.is_coboundary(superbv.CechCochain({("U1", "U0"): value}), o_minus_two)
        assert not split and cls.to_dict() == {"[0,0] z^-1": "1"}
        ```
    """
    if cochain.degree != 1:
        raise ValueError('is_coboundary expects a 1-cochain, got degree {}.'.format(cochain.degree))
    system = HomCoefficients(sheaf) if sheaf is not None else cochain.system
    if system is None:
        raise ValueError('The cochain {} carries no coefficient system.'.format(cochain.name))
    if len(system.atlas.charts) > 2:
        raise Unsupported('Cohomology classes are computed on two-chart covers, {} has {} charts.'.format(
            system.atlas.name, len(system.atlas.charts)))
    pair = reference_pair(system.atlas)
    if pair is None:
        return True, _zero_witness(system)
    value = cochain.values.get(pair)
    if value is None:
        raise ValueError('{} has no value on the overlap {}.'.format(cochain.name, pair))
    scalars = system.flatten(value)
    if system.reduced:
        scalars = {k: a.reduced() for k, a in scalars.items()}
    vector = _vector(scalars)
    if not vector:
        return True, _zero_witness(system)
    v_chart = system.atlas.chart(pair[1])
    fiber_degrees = {_fiber_degree(v_chart, exps, mask) for (_, exps, mask) in vector}
    bound = kwargs.get('bound', max(abs(e) for (_, exps, _) in vector for e in exps) + system.exponent_bound(pair))
    space = _CoboundarySpace(system, bound, fiber_degrees)
    remainder = space.normal_form(vector)
    if remainder:
        window = {}
        for (key, exps, mask), coeff in remainder.items():
            window[(system.label(key, pair), monomial_text(v_chart.table, exps, mask))] = coeff
        log.info('{} is not a coboundary: {}'.format(cochain.name, sorted(window)))
        return False, CohomologyClass(window, system=system, table=v_chart.table)
    values = space.witness(vector)
    witness = {name: system.assemble(scalars, system.atlas.chart(name).table) for name, scalars in values.items()}
    log.info('{} is a coboundary'.format(cochain.name))
    return True, CechCochain(witness, degree=0, system=system, name='witness({})'.format(cochain.name))


def check_witness(cochain, witness):
    """
        Re-substitutes a splitting witness: `phi - (N_V - transport(N_U))` must vanish on the reference overlap.
    """
    system = witness.system
    pair = reference_pair(system.atlas)
    name = 'cech.{}.witness'.format(cochain.name)
    anchor = 'the witness satisfies phi = N_V - transport(N_U)'
    if pair is None:
        return CheckResult(name, True, anchor)
    u, v = pair
    phi = system.flatten(cochain.values[pair])
    moved = system.transport(system.flatten(witness.values[u]), pair)
    n_v = system.flatten(witness.values[v])
    residual = []
    for key, _ in system.keys:
        value = phi[key].reduced() if system.reduced else phi[key]
        difference = value - (n_v[key] - moved[key])
        if difference:
            residual.append('{}: {}'.format(system.label(key, pair), format_scalar(difference)))
    return CheckResult(name, not residual, anchor, '; '.join(residual))


@lru_cache(maxsize=None)
def _projective_line():
    from .examples import build_projective
    return build_projective(1, 0)


def line_bundle_sheaf(k, atlas=None):
    """
        `O(k)` on the two-chart projective line: `g(U1, U0) = z^k` and `g(U0, U1) = w^k`.
    """
    atlas = atlas or _projective_line()
    (u0, u1) = atlas.charts[0], atlas.charts[1]
    z, w = u0.table.even[0], u1.table.even[0]
    transitions = {(u1.name, u0.name): SuperScalar.var(u0.table, z) ** k,
                   (u0.name, u1.name): SuperScalar.var(u1.table, w) ** k}
    return LineBundle(atlas, transitions, name='O({})'.format(k))


def direct_sum(sheaves, name=None):
    """
        Block-diagonal sum of sheaves over one atlas.
    """
    sheaves = list(sheaves)
    atlas = sheaves[0].atlas
    parities = [p for sheaf in sheaves for p in sheaf.parities]
    transitions = {}
    for pair in sheaves[0].pairs():
        table = atlas.chart(pair[1]).table
        entries = [[SuperScalar.zero(table) for _ in parities] for _ in parities]
        offset = 0
        for sheaf in sheaves:
            g = sheaf.transition(*pair)
            for i, row in enumerate(g.entries):
                for j, a in enumerate(row):
                    entries[offset + i][offset + j] = a
            offset += len(sheaf.parities)
        transitions[pair] = SuperMatrix(entries, parities, parities, table=table)
    return SheafData(atlas, parities, transitions, name=name or '+'.join(s.name for s in sheaves),
                     frames=[f for sheaf in sheaves for f in sheaf.frames])


def h_dims(k):
    """
        Dimensions of `H^0` and `H^1` of `O(k)` on the projective line.

        # Parameters
            k: integer
                twist degree.

        # Returns
            `(max(0, k+1), max(0, -k-1))`; the H^1 window is `{z^j : k+1 <= j <= -1}`.

        # Example
        ```python
        import superbv
        assert superbv.h_dims(-2) == (0, 1)
        ```
    """
    return max(0, k + 1), max(0, -k - 1)


def h1_window(k):
    return ['z^{}'.format(j) if j != 1 else 'z' for j in range(k + 1, 0)]


def h_dims_census(k, **kwargs):
    """
        Computes `(dim H^0, dim H^1)` of `O(k)` from the rank of the Cech differential on truncated cochains.

        0-cochains are polynomials of degree <= `radius + |k|` in each chart; only those whose image stays in
        the 1-cochain range `z^-radius .. z^radius` are kept, so that kernel and cokernel are not truncation
        artifacts.
    """
    radius = kwargs.get('radius', abs(k) + 2)
    sheaf = line_bundle_sheaf(k)
    system = HomCoefficients(sheaf)
    u, v = reference_pair(sheaf.atlas)
    u_chart, v_chart = sheaf.atlas.chart(u), sheaf.atlas.chart(v)
    columns = {(j,): n for n, j in enumerate(range(-radius, radius + 1))}
    rows = []
    for j in range(radius + abs(k) + 1):
        image = system.transport({(0, 0): SuperScalar.monomial(u_chart.table, (j,))})[(0, 0)]
        if all(abs(exps[0]) <= radius for (exps, _), _ in image):
            rows.append({columns[exps]: -c for (exps, _), c in image})
    for j in range(radius + 1):
        rows.append({columns[(j,)]: QQ_I.one})
    rank = linalg.rank(rows, len(columns))
    return len(rows) - rank, len(columns) - rank


def atiyah_cocycle(sheaf):
    """
        Atiyah cocycle `a^c_UV = (d G_UV / d z_c) G_UV^-1` of a sheaf, one matrix per coordinate `z_c` of `V`.

        # Parameters
            sheaf: SheafData
                sheaf with invertible frame changes.

        # Returns
            A `CechCochain` with `AtiyahCoefficients`.

        # Example
        ```python
        import superbv
        at = superbv.atiyah_cocycle(superbv.line_bundle_sheaf(3))
        table = at.system.atlas.chart("U0").table
        assert at[("U1", "U0")][0][0, 0] == superbv.parse_scalar("3*z^-1", table)
        ```
    """
    values = {}
    for (u, v) in sheaf.pairs():
        g = sheaf.transition(u, v)
        g_inverse = g.inverse()
        chart = sheaf.atlas.chart(v)
        components = {}
        for c, name in enumerate(chart.coords):
            derivative = SuperMatrix([[derive(a, name) for a in row] for row in g.entries], g.row_parities,
                                     g.col_parities, table=g.table, parity=chart.table.parity(name), check=False)
            components[c] = derivative @ g_inverse
        values[(u, v)] = components
    return CechCochain(values, degree=1, system=AtiyahCoefficients(sheaf), name='At({})'.format(sheaf.name))


def check_atiyah_cocycle(cochain):
    """
        Triple-overlap condition `a_UW = a_VW + transport(a_UV)` of an Atiyah cocycle.
    """
    system = cochain.system
    atlas = system.atlas
    results = []
    for u, v, w in itertools.permutations([c.name for c in atlas.charts], 3):
        if not all(k in cochain.values for k in ((u, v), (v, w), (u, w))):
            continue
        moved = system.transport(system.flatten(cochain.values[(u, v)]), (v, w))
        expected = system.flatten(cochain.values[(u, w)])
        actual = system.flatten(cochain.values[(v, w)])
        residual = ['{}: {}'.format(system.label(key, w), format_scalar(actual[key] + moved[key] - expected[key]))
                    for key, _ in system.keys if actual[key] + moved[key] - expected[key]]
        results.append(CheckResult('cech.{}.cocycle.{}-{}-{}'.format(cochain.name, u, v, w), not residual,
                                   'the Atiyah cocycle satisfies the cocycle condition', '; '.join(residual)))
    return results


def chern_degree(cls):
    """
        Supertrace of the `dz/z` coefficients of an Atiyah class on the projective line.
    """
    system = cls.system
    pair = reference_pair(system.atlas)
    chart = system.atlas.chart(pair[1])
    monomial = monomial_text(chart.table, (-1,) + (0,) * (chart.table.p - 1), 0)
    total = QQ_I.zero
    for r, parity in enumerate(system.sheaf.parities):
        coeff = cls.coefficient(system.label((0, r, r), pair), monomial)
        total = total + coeff if parity is Parity.EVEN else total - coeff
    return QQ_I.to_sympy(total)


def _block_sheaf(sheaf, indices, name):
    indices = list(indices)
    parities = [sheaf.parities[i] for i in indices]
    return SheafData(sheaf.atlas, parities, {pair: g.block(indices, indices) for pair, g in sheaf.transitions.items()},
                     name=name, frames=[sheaf.frames[i] for i in indices])


def _split_blocks(sheaf):
    size = len(sheaf.parities) // 2
    return list(range(size)), list(range(size, 2 * size))


def ext_class_omega1(m_sheaf):
    """
        Extension cocycle `phi = -C B^-1` of the cotangent sheaf of a BV total space.

        The frame changes must have the triangular form `[[A, C], [0, B]]` of `cotangent_transitions`. The
        cocycle is valued in `Hom(quotient, sub)`; it is checked to be linear in the fiber coordinates and
        its coefficients along each fiber coordinate give the base cocycle `reduced`.

        # Parameters
            m_sheaf: SheafData
                output of `cotangent_transitions`.

        # Returns
            `(cochain, reduced)`: the cocycle on the total space and, per overlap, a dict
            `fiber coordinate -> matrix over the base`.
    """
    sub, quotient = _split_blocks(m_sheaf)
    a_sheaf = _block_sheaf(m_sheaf, sub, 'A')
    b_sheaf = _block_sheaf(m_sheaf, quotient, 'B')
    system = HomCoefficients(a_sheaf, b_sheaf)
    m_atlas = m_sheaf.atlas
    base = m_atlas.base
    values, reduced = {}, {}
    for (u, v) in m_sheaf.pairs():
        g = m_sheaf.transition(u, v)
        lower = g.block(quotient, sub)
        if not lower.is_zero():
            raise ValueError('{} is not block upper triangular on {}.'.format(m_sheaf.name, (u, v)))
        c_block = g.block(sub, quotient)
        b_inverse = g.block(quotient, quotient).inverse()
        phi = -(c_block @ b_inverse)
        values[(u, v)] = phi
        chart = m_atlas.chart(v)
        x_table = base.chart(v).table
        per_fiber = {}
        for q in chart.fiber:
            per_fiber[q] = [[SuperScalar.zero(x_table) for _ in quotient] for _ in sub]
        q_parity = {q: chart.table.parity(q) for q in chart.fiber}
        for i, row in enumerate(phi.entries):
            for j, entry in enumerate(row):
                for (exps, mask), coeff in entry:
                    degree = _fiber_degree(chart, exps, mask)
                    if degree != 1:
                        raise ValueError('Extension cocycle entry {} is not linear in the fiber.'.format(entry))
                    q = next(name for name in chart.fiber
                             if (name in chart.table.even and exps[chart.table.locate(name)[1]])
                             or (name in chart.table.odd and mask >> chart.table.locate(name)[1] & 1))
                    kind, pos = chart.table.locate(q)
                    if kind is Parity.EVEN:
                        exps = exps[:pos] + (0,) + exps[pos + 1:]
                    else:
                        mask = mask ^ (1 << pos)
                    term = change_table(SuperScalar.monomial(chart.table, exps, mask, coeff), x_table)
                    per_fiber[q][i][j] = per_fiber[q][i][j] + term
        reduced[(u, v)] = {q: SuperMatrix(entries, [a_sheaf.parities[i] for i in range(len(sub))],
                                          [b_sheaf.parities[j] + q_parity[q] for j in range(len(quotient))],
                                          table=x_table, parity=q_parity[q], check=False)
                           for q, entries in per_fiber.items()}
    cochain = CechCochain(values, degree=1, system=system, name='Ext({})'.format(base.name))
    return cochain, reduced


def check_ext_witness(m_sheaf, witness):
    """
        Checks `C + N_V B - A N_U = 0` for a splitting witness of the extension cocycle on the reference overlap.
    """
    name = 'cech.{}.splitting'.format(m_sheaf.name)
    anchor = 'C + M_V B - A M_U = 0'
    pair = reference_pair(m_sheaf.atlas)
    if pair is None:
        return CheckResult(name, True, anchor)
    u, v = pair
    sub, quotient = _split_blocks(m_sheaf)
    g = m_sheaf.transition(u, v)
    n_u = pullback(witness.values[u], m_sheaf.atlas.transition(v, u))
    n_v = witness.values[v]
    residual = g.block(sub, quotient) + n_v @ g.block(quotient, quotient) - g.block(sub, sub) @ n_u
    text = '; '.join('[{},{}]: {}'.format(i, j, format_scalar(a)) for i, row in enumerate(residual.entries)
                     for j, a in enumerate(row) if a)
    return CheckResult(name, not text, anchor, text)


def reduce_structure_group(m_sheaf, witness):
    """
        Conjugates the triangular frame changes by `[[1, N], [0, 1]]` built from a splitting witness; the result
        is block diagonal `diag(A, B)` when the witness is valid.

        # Returns
            `(sheaf, CheckResult)`: the conjugated sheaf and the block-diagonality check.
    """
    sub, quotient = _split_blocks(m_sheaf)
    atlas = m_sheaf.atlas
    size = len(m_sheaf.parities)

    def shear(block, table, sign):
        entries = [[SuperScalar.one(table) if i == j else SuperScalar.zero(table) for j in range(size)]
                   for i in range(size)]
        for a, i in enumerate(sub):
            for b, j in enumerate(quotient):
                entries[i][j] = block[a, b] if sign > 0 else -block[a, b]
        return SuperMatrix(entries, m_sheaf.parities, m_sheaf.parities, table=table, check=False)

    transitions, offending = {}, []
    for (u, v), g in m_sheaf.transitions.items():
        table = atlas.chart(v).table
        n_v = witness.values[v]
        n_u = pullback(witness.values[u], atlas.transition(v, u))
        conjugated = shear(n_v, table, 1) @ g @ shear(n_u, table, -1)
        transitions[(u, v)] = conjugated
        if not conjugated.block(sub, quotient).is_zero() or not conjugated.block(quotient, sub).is_zero():
            offending.append('{}-{}'.format(u, v))
    reduced = SheafData(atlas, m_sheaf.parities, transitions, name='{}_split'.format(m_sheaf.name),
                        frames=m_sheaf.frames)
    check = CheckResult('cech.{}.reduction'.format(m_sheaf.name), not offending,
                        'the frame changes reduce to diag(A, B)', ', '.join(offending))
    return reduced, check


def fermionic_twists(atlas):
    """
        Degrees `k_i` of the fermionic sheaf `O(k_1) + ... + O(k_q)`, read off the theta-linear part of the
        transition from the first to the second chart.
    """
    if len(atlas.charts) != 2 or atlas.dims[0] != 1:
        raise Unsupported('Fermionic twists are read on two-chart atlases over the projective line.')
    t = atlas.transition(atlas.charts[0].name, atlas.charts[1].name)
    table = t.source.table
    twists = []
    for psi in t.target.table.odd:
        linear = t.images[psi].theta_degree_part(1)
        if len(linear) != 1:
            raise Unsupported('Image of "{}" is not a single monomial times one odd coordinate.'.format(psi))
        (exps, _), _ = next(iter(linear))
        twists.append(exps[0])
    log.debug('fermionic twists of {} over {}: {}'.format(atlas.name, table, twists))
    return tuple(twists)


def _restrict(cochain, system):
    pair = reference_pair(system.atlas)
    scalars = {key: a.reduced() for key, a in cochain.system.flatten(cochain.values[pair]).items()}
    table = system.atlas.chart(pair[1]).table
    value = system.assemble({key: scalars[key] for key, _ in system.keys}, table)
    return CechCochain({pair: value}, degree=1, system=system, name=cochain.name)


class DonagiWittenDecomposition:
    """
        The restricted tangent Atiyah class split into its reduced, fermionic and odd-slot parts.

        # Parameters
            red: CohomologyClass
                class of the even-even block in the even slot.
            omega: CohomologyClass
                antisymmetrized class of the even-odd block in the odd slots.
            ferm: CohomologyClass
                class of the odd-odd block in the even slot.
            blocks: dict
                the restricted block cochains.
    """

    def __init__(self, red, omega, ferm, blocks, symmetric_part):
        self.red = red
        self.omega = omega
        self.ferm = ferm
        self.blocks = blocks
        self.symmetric_part = symmetric_part

    def __iter__(self):
        return iter((self.red, self.omega, self.ferm))

    def to_dict(self):
        return {'red': self.red.to_dict(), 'omega': self.omega.to_dict(), 'ferm': self.ferm.to_dict()}


def _odd_pairs(system, pair):
    """
        Yields `(label, a^k[z,j], a^j[z,k])` for every pair `j < k` of odd frames of an odd-slot block.
    """
    v_chart = system.atlas.chart(pair[1])
    odd, slots, even = system.cols, system.slots, system.rows
    for a, j in enumerate(odd):
        for b in range(a + 1, len(odd)):
            k = odd[b]
            label = 'omega[{},{}]'.format(v_chart.coords[slots[a]], v_chart.coords[slots[b]])
            yield label, system.label((slots[b], even[0], j), pair), system.label((slots[a], even[0], k), pair)


def _odd_slot_parts(cls, system, pair):
    omega, symmetric = {}, {}
    monomials = {m for (_, m) in cls.window_coefficients}
    for label, kj, jk in _odd_pairs(system, pair):
        for monomial in monomials:
            c_kj, c_jk = cls.coefficient(kj, monomial), cls.coefficient(jk, monomial)
            if c_kj - c_jk:
                omega[(label, monomial)] = (c_kj - c_jk) / QQ_I.convert(2)
            if c_kj + c_jk:
                symmetric[(label, monomial)] = (c_kj + c_jk) / QQ_I.convert(2)
    return omega, symmetric


def _class_text(coefficients):
    return '{' + ', '.join('{} {}: {}'.format(label, monomial, QQ_I.to_sympy(value))
                           for (label, monomial), value in sorted(coefficients.items())) + '}'


def dw_decompose(at, atlas):
    """
        Donagi-Witten decomposition of the tangent Atiyah class restricted to the reduced space.

        The reduced cocycle splits into the even-even block of the even slot (Atiyah class of the reduced
        tangent sheaf), the odd-odd block of the even slot (Atiyah class of the fermionic sheaf) and the
        even-odd block of the odd slots, whose antisymmetric part `omega[j,k] = (a^k[z,j] - a^j[z,k]) / 2`
        is the odd obstruction class.

        # Parameters
            at: CechCochain
                `atiyah_cocycle(tangent_sheaf(atlas))`.
            atlas: Atlas
                two-chart atlas over the projective line.

        # Returns
            A `DonagiWittenDecomposition`, iterable as `(red, omega, ferm)`.
    """
    if len(atlas.charts) != 2 or atlas.dims[0] != 1:
        raise Unsupported('The decomposition is computed on two-chart atlases over the projective line.')
    sheaf = at.system.sheaf
    chart = atlas.charts[0]
    even = [i for i, p in enumerate(sheaf.parities) if p is Parity.EVEN]
    odd = [i for i, p in enumerate(sheaf.parities) if p is Parity.ODD]
    even_slot = [c for c, x in enumerate(chart.coords) if chart.table.parity(x) is Parity.EVEN]
    odd_slots = [c for c, x in enumerate(chart.coords) if chart.table.parity(x) is Parity.ODD]
    systems = {'red': AtiyahCoefficients(sheaf, even_slot, even, even, reduced=True),
               'ferm': AtiyahCoefficients(sheaf, even_slot, odd, odd, reduced=True),
               'omega': AtiyahCoefficients(sheaf, odd_slots, even, odd, reduced=True)}
    blocks = {name: _restrict(at, system) for name, system in systems.items()}
    classes = {}
    for name in ('red', 'ferm'):
        split, cls = is_coboundary(blocks[name])
        classes[name] = CohomologyClass({}, systems[name]) if split else cls
    split, cls = is_coboundary(blocks['omega'])
    pair = reference_pair(atlas)
    v_chart = atlas.chart(pair[1])
    omega, symmetric = ({}, {}) if split else _odd_slot_parts(cls, systems['omega'], pair)
    classes['omega'] = CohomologyClass(omega, systems['omega'], table=v_chart.table)
    log.info('Donagi-Witten decomposition of {}: red={}, omega={}, ferm={}'.format(
        atlas.name, classes['red'].to_dict(), classes['omega'].to_dict(), classes['ferm'].to_dict()))
    return DonagiWittenDecomposition(classes['red'], classes['omega'], classes['ferm'], blocks,
                                     CohomologyClass(symmetric, systems['omega'], table=v_chart.table))


def check_dw_components(at, decomposition):
    """
        Checks a decomposition against the restricted Atiyah cocycle.

        The blocks must agree with the restricted cocycle, `red` and `ferm` must be the classes of their
        blocks, and on every pair `j < k` of odd frames `omega + symmetric` and `symmetric - omega` must give
        the class coefficients of `a^k[z,j]` and `a^j[z,k]`. Nonzero entries of the restricted cocycle outside
        the blocks, and odd-slot coefficients outside the pairs, are listed in the data.

        # Returns
            A `CheckResult`.
    """
    system = at.system
    pair = reference_pair(system.atlas)
    full = {key: a.reduced() for key, a in system.flatten(at.values[pair]).items()}
    residual = []
    covered = set()
    for block in decomposition.blocks.values():
        block_scalars = block.system.flatten(block.values[pair])
        for key, value in block_scalars.items():
            covered.add(key)
            if value != full[key]:
                residual.append('{}: {}'.format(system.label(key, pair), format_scalar(full[key] - value)))
    for name in ('red', 'ferm'):
        split, cls = is_coboundary(decomposition.blocks[name])
        expected = {} if split else cls.window_coefficients
        actual = getattr(decomposition, name).window_coefficients
        if expected != actual:
            residual.append('{}: class is {}, decomposition has {}'.format(
                name, _class_text(expected), _class_text(actual)))
    block = decomposition.blocks['omega']
    split, cls = is_coboundary(block)
    odd_slot = {} if split else cls.window_coefficients
    omega, symmetric = decomposition.omega, decomposition.symmetric_part
    paired = set()
    for label, kj, jk in _odd_pairs(block.system, pair):
        paired.update((kj, jk))
        monomials = {m for (l, m) in odd_slot if l in (kj, jk)}
        monomials |= {m for (l, m) in omega.window_coefficients if l == label}
        monomials |= {m for (l, m) in symmetric.window_coefficients if l == label}
        for monomial in sorted(monomials):
            w, s = omega.coefficient(label, monomial), symmetric.coefficient(label, monomial)
            for entry, expected, actual in ((kj, odd_slot.get((kj, monomial), QQ_I.zero), s + w),
                                            (jk, odd_slot.get((jk, monomial), QQ_I.zero), s - w)):
                if expected != actual:
                    residual.append('{} {}: class {}, omega and symmetric part give {}'.format(
                        entry, monomial, QQ_I.to_sympy(expected), QQ_I.to_sympy(actual)))
    uncovered = sorted(system.label(key, pair) for key, value in full.items() if key not in covered and value)
    unpaired = {'{} {}'.format(l, m): str(QQ_I.to_sympy(c)) for (l, m), c in odd_slot.items() if l not in paired}
    return CheckResult('cech.{}.dw.components'.format(at.name), not residual,
                       'the components are the classes of the restricted blocks of the Atiyah cocycle',
                       '; '.join(residual),
                       data={'covered_entries': len(covered), 'uncovered_nonzero': uncovered,
                             'unpaired_odd_slot': unpaired})
