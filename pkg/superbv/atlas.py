import itertools
import logging

from sympy import Matrix

from .algebra import (AtlasError, MixedParity, NotInvertible, Parity, ParityViolation, SuperMatrix, SuperScalar,
                      Unsupported, VarTable, change_table, derive, format_scalar, substitute)
from .report import CheckResult

log = logging.getLogger(__file__)


class Chart:
    """
        A coordinate chart `(U, x_a)` of a supermanifold.

        # Parameters
            name: basestring
                chart name, e.g. `U0`.
            table: VarTable
                the chart coordinates; even ones are Laurent variables.
            fiber: tuple
                names of the fiber coordinates `p_a` when the chart belongs to a BV total space.
    """

    def __init__(self, name, table, fiber=()):
        self.name = name
        self.table = table
        self.fiber = tuple(fiber)

    @property
    def dims(self):
        return self.table.p, self.table.q

    @property
    def coords(self):
        return self.table.names

    def var(self, name):
        return SuperScalar.var(self.table, name)

    def __eq__(self, other):
        return isinstance(other, Chart) and self.name == other.name and self.table == other.table

    def __hash__(self):
        return hash((self.name, self.table))

    def __repr__(self):
        return 'Chart({}, {})'.format(self.name, self.table)


class TransitionMap:
    """
        Coordinate change from `source` to `target`: every target coordinate is given as a scalar
        over the source coordinates.

        # Parameters
            source: Chart
                chart whose coordinates the images are written in.
            target: Chart
                chart whose coordinates are being expressed.
            images: dict
                `target coordinate name -> SuperScalar over source.table`.
    """

    def __init__(self, source, target, images):
        self.source = source
        self.target = target
        missing = set(target.coords) - set(images)
        extra = set(images) - set(target.coords)
        if missing or extra:
            raise AtlasError('Transition {} -> {} has missing images {} and unknown coordinates {}.'
                             .format(source.name, target.name, sorted(missing), sorted(extra)))
        self.images = {}
        for name in target.coords:
            image = images[name]
            if not isinstance(image, SuperScalar):
                raise TypeError('Image of "{}" must be a SuperScalar, got {!r}.'.format(name, image))
            if image.table != source.table:
                raise AtlasError('Image of "{}" lives over {}, not over chart {}.'
                                 .format(name, image.table, source.name))
            self.images[name] = image

    @property
    def key(self):
        return self.source.name, self.target.name

    def __call__(self, scalar):
        """
            Pulls a function written in target coordinates back to source coordinates.
        """
        return substitute(scalar, self.images, table=self.source.table)

    def __eq__(self, other):
        return (isinstance(other, TransitionMap) and self.source == other.source and self.target == other.target
                and self.images == other.images)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return 'TransitionMap({} -> {}: {})'.format(
            self.source.name, self.target.name,
            ', '.join('{} = {}'.format(k, format_scalar(v)) for k, v in self.images.items()))


class Atlas:
    """
        Charts of one supermanifold with both directions of every stored transition.

        # Parameters
            charts: list
                list of `Chart`s of identical dimension p|q.
            transitions: iterable
                `TransitionMap`s between the charts.
            name: basestring
                label used in reports.
            base: Atlas
                for a BV total space, the atlas of the base supermanifold.
    """

    def __init__(self, charts, transitions=(), name='atlas', base=None):
        self.charts = list(charts)
        self.name = name
        self.base = base
        if not self.charts:
            raise AtlasError('An atlas needs at least one chart.')
        names = [chart.name for chart in self.charts]
        if len(set(names)) != len(names):
            raise AtlasError('Chart names must be unique, got {}.'.format(names))
        dims = {chart.dims for chart in self.charts}
        if len(dims) > 1:
            raise AtlasError('Charts of {} have different dimensions {}.'.format(name, sorted(dims)))
        self._by_name = {chart.name: chart for chart in self.charts}
        self.transitions = {}
        for t in transitions:
            if self._by_name.get(t.source.name) != t.source or self._by_name.get(t.target.name) != t.target:
                raise AtlasError('Transition {} -> {} uses charts outside {}.'.format(
                    t.source.name, t.target.name, name))
            self.transitions[t.key] = t

    @property
    def dims(self):
        return self.charts[0].dims

    def chart(self, name):
        try:
            return self._by_name[name]
        except KeyError:
            raise AtlasError('{} has no chart "{}".'.format(self.name, name))

    def transition(self, source, target):
        try:
            return self.transitions[(source, target)]
        except KeyError:
            raise AtlasError('{} stores no transition {} -> {}.'.format(self.name, source, target))

    def pairs(self):
        return sorted(self.transitions)

    def __repr__(self):
        return 'Atlas({}, dims={}|{}, charts={})'.format(self.name, *self.dims, [c.name for c in self.charts])


def identity_transition(chart):
    return TransitionMap(chart, chart, {name: chart.var(name) for name in chart.coords})


def substitute_matrix(matrix, assignment, table):
    """
        Applies `substitute` to every entry of a `SuperMatrix`.
    """
    entries = [[substitute(a, assignment, table=table) for a in row] for row in matrix.entries]
    return SuperMatrix(entries, matrix.row_parities, matrix.col_parities, table=table, parity=matrix.parity,
                       check=False)


def pullback(matrix, t):
    """
        Rewrites a matrix of functions in `t.target` coordinates in `t.source` coordinates.
    """
    return substitute_matrix(matrix, t.images, t.source.table)


def compose(t1, t2):
    """
        Composite `U -> W` of `t1: U -> V` and `t2: V -> W`.

        # Parameters
            t1: TransitionMap
                first map; its target must be the source of `t2`.
            t2: TransitionMap
                second map.

        # Returns
            The composite `TransitionMap` with images over the coordinates of `t1.source`.

        # Example
        ```python
        import superbv
        conic = superbv.build_super_conic()
        there, back = conic.transition("U0", "U1"), conic.transition("U1", "U0")
        assert superbv.compose(there, back) == superbv.identity_transition(conic.chart("U0"))
        ```
    """
    if t1.target != t2.source:
        raise AtlasError('Cannot compose {} -> {} with {} -> {}.'.format(
            t1.source.name, t1.target.name, t2.source.name, t2.target.name))
    return TransitionMap(t1.source, t2.target, {name: t1(image) for name, image in t2.images.items()})


class SuperJacobian(SuperMatrix):
    """
        Matrix `J[a, b] = d z_b / d x_a` of left derivatives of a transition `x -> z`; rows follow the
        source coordinates and columns the target coordinates.
    """

    def __init__(self, transition):
        source, target = transition.source, transition.target
        entries = [[derive(transition.images[z], x) for z in target.coords] for x in source.coords]
        super().__init__(entries, [source.table.parity(x) for x in source.coords],
                         [target.table.parity(z) for z in target.coords], table=source.table, check=False)
        self.transition = transition


def jacobian(t):
    """
        Super Jacobian of a transition map, see `SuperJacobian`.

        # Example
        ```python
        import superbv
        cp1 = superbv.build_projective(1, 0)
        j = superbv.jacobian(cp1.transition("U1", "U0"))
        assert j[0, 0] == superbv.parse_scalar("-w^-2", cp1.chart("U1").table)
        ```
    """
    return SuperJacobian(t)


def _reduced_inverse(t):
    source, target = t.source, t.target
    p = source.table.p
    if not p:
        return {}
    exponents, coeffs = [], []
    for y in target.table.even:
        reduced = t.images[y].reduced()
        if len(reduced) != 1:
            raise NotInvertible('Reduced image {} of "{}" is not a Laurent monomial.'.format(reduced, y))
        (exps, _), coeff = next(iter(reduced))
        exponents.append(list(exps))
        coeffs.append(coeff)
    exponent_matrix = Matrix(exponents)
    if exponent_matrix.det() not in (1, -1):
        raise Unsupported('Reduced map {} -> {} has exponent matrix {} which is not unimodular.'
                          .format(source.name, target.name, exponents))
    inverse = exponent_matrix.inv()
    guess = {}
    for a, x in enumerate(source.table.even):
        value = SuperScalar.one(target.table)
        for b, y in enumerate(target.table.even):
            k = int(inverse[a, b])
            if k:
                value = value * (SuperScalar.var(target.table, y) / coeffs[b]) ** k
        guess[x] = value
    return guess


def invert_transition(t):
    """
        Exact inverse `V -> U` of a transition `U -> V`.

        The reduced map must send even coordinates to Laurent monomials with a unimodular exponent matrix;
        it is inverted in closed form, odd coordinates start at zero and Newton steps
        `x <- x - F(x) J(x)^-1` correct the nilpotent part until the residual vanishes.

        # Parameters
            t: TransitionMap
                the map to invert.

        # Returns
            The inverse `TransitionMap`.
    """
    source, target = t.source, t.target
    guess = _reduced_inverse(t)
    for x in source.table.odd:
        guess[x] = SuperScalar.zero(target.table)
    jac = jacobian(t)
    steps = source.table.q + 2
    for step in range(steps + 1):
        residual = {y: substitute(t.images[y], guess, table=target.table) - SuperScalar.var(target.table, y)
                    for y in target.coords}
        if not any(residual.values()):
            log.debug('inverted {} -> {} after {} Newton steps'.format(source.name, target.name, step))
            return TransitionMap(target, source, guess)
        if step == steps:
            break
        j_inverse = substitute_matrix(jac, guess, target.table).inverse()
        for a, x in enumerate(source.coords):
            delta = SuperScalar.zero(target.table)
            for b, y in enumerate(target.coords):
                if residual[y]:
                    delta = delta - residual[y] * j_inverse[b, a]
            guess[x] = guess[x] + delta
    raise AtlasError('Newton inversion of {} -> {} did not converge.'.format(source.name, target.name))


def ber_transition(t):
    """
        Transition scalar of the Berezinian sheaf: the Berezinian of the super Jacobian of `t`.
    """
    return jacobian(t).berezinian()


def _sign(parity):
    return -1 if int(parity) % 2 else 1


def _fiber_name(name):
    return 'p_{}'.format(name)


def bv_total_space(atlas):
    """
        Atlas of the BV supermanifold `M = Tot(Pi T*X)` over `atlas`.

        Every chart gains fiber coordinates `p_a` of parity opposite to `x_a`; on overlaps
        `p_a = (-1)^(|x_a|+|z_b|) (d z_b / d x_a) q_b`, which is solved for the target fiber coordinates.

        # Parameters
            atlas: Atlas
                the base supermanifold X.

        # Returns
            An `Atlas` of dimension (p+q|p+q) whose `base` is `atlas`.

        # Example
        ```python
        import superbv
        cp1 = superbv.build_projective(1, 0)
        m = superbv.bv_total_space(cp1)
        q_w = m.transition("U0", "U1").images["p_w"]
        assert q_w == superbv.parse_scalar("-z^2*p_z", m.chart("U0").table)
        ```
    """
    charts = {}
    for chart in atlas.charts:
        table = VarTable(even=chart.table.even + tuple(_fiber_name(t) for t in chart.table.odd),
                         odd=chart.table.odd + tuple(_fiber_name(z) for z in chart.table.even))
        charts[chart.name] = Chart(chart.name, table, fiber=[_fiber_name(x) for x in chart.coords])
    transitions = []
    for (u, v), t in sorted(atlas.transitions.items()):
        source, target = charts[u], charts[v]
        images = {z: change_table(image, source.table) for z, image in t.images.items()}
        s_inverse = _fiber_matrix(t).inverse()
        for b, z in enumerate(t.target.coords):
            q_b = SuperScalar.zero(source.table)
            for a, x in enumerate(t.source.coords):
                entry = s_inverse[b, a]
                if entry:
                    q_b = q_b + change_table(entry, source.table) * source.var(_fiber_name(x))
            images[_fiber_name(z)] = q_b
        transitions.append(TransitionMap(source, target, images))
    log.info('built BV total space over {} with {} transitions'.format(atlas.name, len(transitions)))
    return Atlas([charts[c.name] for c in atlas.charts], transitions, name='M({})'.format(atlas.name), base=atlas)


def _fiber_matrix(t, over=None):
    # S[a, b] = (-1)^(|x_a|+|z_b|) d z_b / d x_a, optionally rewritten over the target chart
    jac = jacobian(t)
    if over is not None:
        jac = substitute_matrix(jac, over.images, over.source.table)
    return SuperMatrix([[a if _sign(jac.row_parities[i] + jac.col_parities[j]) > 0 else -a
                         for j, a in enumerate(row)] for i, row in enumerate(jac.entries)],
                       jac.row_parities, jac.col_parities, table=jac.table, check=False)


class SheafData:
    """
        Locally free sheaf given by frame changes on chart overlaps.

        For an overlap `(U, V)` the matrix `G = transitions[(U, V)]` has entries in the coordinates of `V`
        and relates the frame row vectors by `e^U = e^V G`: rows follow the frame of `V`, columns the
        frame of `U`.

        # Parameters
            atlas: Atlas
                the supermanifold the sheaf lives on.
            parities: list
                parity of every frame element (the same in every chart).
            transitions: dict
                `(U, V) -> SuperMatrix`.
            name: basestring
                label used in reports.
            frames: list
                frame element names, for display.
    """

    def __init__(self, atlas, parities, transitions, name='sheaf', frames=None):
        self.atlas = atlas
        self.parities = tuple(Parity(int(p)) for p in parities)
        self.name = name
        self.frames = tuple(frames) if frames is not None else tuple('e{}'.format(i) for i in range(len(parities)))
        self.transitions = {}
        for (u, v), g in transitions.items():
            if g.row_parities != self.parities or g.col_parities != self.parities:
                raise ValueError('Transition {} of {} is graded {}x{}, expected {}.'.format(
                    (u, v), name, g.row_parities, g.col_parities, self.parities))
            if g.table != atlas.chart(v).table:
                raise ValueError('Transition {} of {} must be written in the coordinates of {}.'.format(
                    (u, v), name, v))
            self.transitions[(u, v)] = g

    @property
    def base(self):
        return self.atlas

    @property
    def rank(self):
        even = sum(1 for p in self.parities if p is Parity.EVEN)
        return even, len(self.parities) - even

    def transition(self, u, v):
        try:
            return self.transitions[(u, v)]
        except KeyError:
            raise AtlasError('{} has no transition on {}.'.format(self.name, (u, v)))

    def pairs(self):
        return sorted(self.transitions)

    def __repr__(self):
        return 'SheafData({}, rank={}|{}, overlaps={})'.format(self.name, *self.rank, self.pairs())


def cotangent_sheaf(atlas):
    """
        Transition data of the cotangent sheaf: `dx_a = dz_c (d x_a / d z_c)`, frame parity `|x|+1`.
    """
    transitions = {(u, v): jacobian(atlas.transition(v, u)) for (u, v) in atlas.pairs()}
    chart = atlas.charts[0]
    parities = [chart.table.parity(x) + 1 for x in chart.coords]
    return SheafData(atlas, parities, {k: SuperMatrix(g.entries, parities, parities, table=g.table)
                                       for k, g in transitions.items()},
                     name='Omega1({})'.format(atlas.name), frames=['d{}'.format(x) for x in chart.coords])


def tangent_sheaf(atlas):
    """
        Transition data of the tangent sheaf: `d/dx_b = sum_a d/dz_a G[a, b]` with
        `G[a, b] = (-1)^((|x_b|+|z_a|)|z_a|) (d z_a / d x_b)` rewritten over `V`.
    """
    chart = atlas.charts[0]
    parities = [chart.table.parity(x) for x in chart.coords]
    transitions = {}
    for (u, v) in atlas.pairs():
        jac = pullback(jacobian(atlas.transition(u, v)), atlas.transition(v, u))
        size = len(parities)
        entries = [[None] * size for _ in range(size)]
        for b in range(size):
            for a in range(size):
                entry = jac[b, a]
                sign = _sign((jac.row_parities[b] + jac.col_parities[a]) * int(jac.col_parities[a]))
                entries[a][b] = entry if sign > 0 else -entry
        transitions[(u, v)] = SuperMatrix(entries, parities, parities, table=jac.table)
    return SheafData(atlas, parities, transitions, name='T({})'.format(atlas.name),
                     frames=['d/d{}'.format(x) for x in chart.coords])


def cotangent_transitions(m_atlas):
    """
        Transition data of the cotangent sheaf of a BV total space in extension form.

        With frames `(dz, dq)` on `V` and `(dx, dp)` on `U`, the frame change reads
        `G = [[A, C], [0, B]]` where `A[c, a] = d x_a / d z_c`, `B[b, a] = +-S[a, b]` and
        `C[c, a] = sum_b d(S[a, b]) / d z_c * q_b`, `S` being the fiber matrix of `bv_total_space`.

        # Parameters
            m_atlas: Atlas
                output of `bv_total_space`.

        # Returns
            `SheafData` of rank (p+q|p+q) on `m_atlas`; the first p+q frames span the subsheaf
            pulled back from the cotangent sheaf of the base.
    """
    base = m_atlas.base
    if base is None:
        raise AtlasError('{} is not a BV total space; build it with bv_total_space.'.format(m_atlas.name))
    chart = base.charts[0]
    coord_parities = [chart.table.parity(x) for x in chart.coords]
    parities = [p + 1 for p in coord_parities] + coord_parities
    size = len(coord_parities)
    transitions = {}
    for (u, v) in m_atlas.pairs():
        target = m_atlas.chart(v)
        x_table = base.chart(v).table
        a_block = jacobian(base.transition(v, u))
        s = _fiber_matrix(base.transition(u, v), over=base.transition(v, u))
        entries = [[SuperScalar.zero(target.table) for _ in range(2 * size)] for _ in range(2 * size)]
        for c in range(size):
            for a in range(size):
                entries[c][a] = change_table(a_block[c, a], target.table)
        for a in range(size):
            for b, z in enumerate(base.chart(v).coords):
                s_ab = s[a, b]
                entry = s_ab if _sign((s.row_parities[a] + s.col_parities[b]) * (int(s.col_parities[b]) + 1)) > 0 \
                    else -s_ab
                entries[size + b][size + a] = change_table(entry, target.table)
                q_b = target.var(_fiber_name(z))
                for c, w in enumerate(x_table.names):
                    term = derive(s_ab, w)
                    if term:
                        entries[c][size + a] = entries[c][size + a] + change_table(term, target.table) * q_b
        transitions[(u, v)] = SuperMatrix(entries, parities, parities, table=target.table)
    frames = ['d{}'.format(x) for x in chart.coords] + ['d{}'.format(_fiber_name(x)) for x in chart.coords]
    return SheafData(m_atlas, parities, transitions, name='Omega1({})'.format(m_atlas.name), frames=frames)


def _residual_text(differences):
    return '; '.join('{}: {}'.format(name, format_scalar(value)) for name, value in differences if value)


def _matrix_residual(matrix):
    return _residual_text(('[{},{}]'.format(i, j), a) for i, row in enumerate(matrix.entries)
                          for j, a in enumerate(row))


def check_sheaf(sheaf):
    """
        Inverse and triple-overlap checks of a sheaf's frame changes.

        # Returns
            A list of `CheckResult`s.
    """
    atlas = sheaf.atlas
    results = []
    for (u, v) in sheaf.pairs():
        if (v, u) not in sheaf.transitions:
            results.append(CheckResult('sheaf.{}.inverse.{}-{}'.format(sheaf.name, u, v), False,
                                       'frame changes are mutually inverse', 'missing {} -> {}'.format(v, u)))
            continue
        product = sheaf.transition(v, u) @ pullback(sheaf.transition(u, v), atlas.transition(u, v))
        residual = product - SuperMatrix.identity(product.table, sheaf.parities)
        results.append(CheckResult('sheaf.{}.inverse.{}-{}'.format(sheaf.name, u, v), residual.is_zero(),
                                   'frame changes are mutually inverse', _matrix_residual(residual)))
    names = [chart.name for chart in atlas.charts]
    for u, v, w in itertools.permutations(names, 3):
        if not all(k in sheaf.transitions for k in ((u, v), (v, w), (u, w))) or (w, v) not in atlas.transitions:
            continue
        expected = sheaf.transition(u, w)
        actual = sheaf.transition(v, w) @ pullback(sheaf.transition(u, v), atlas.transition(w, v))
        residual = actual - expected
        results.append(CheckResult('sheaf.{}.cocycle.{}-{}-{}'.format(sheaf.name, u, v, w), residual.is_zero(),
                                   'frame changes satisfy the cocycle condition', _matrix_residual(residual)))
    return results


def _compose_or_error(t1, t2):
    try:
        return compose(t1, t2), ''
    except (ArithmeticError, MixedParity, ParityViolation) as error:
        return None, '{}: {}'.format(type(error).__name__, error)


def verify_atlas(atlas):
    """
        Checks parity preservation, Laurent-unit reduced images, mutual inverses and the triple-overlap
        cocycle condition of every stored transition.

        Compositions through an overlap whose parity or unit check failed are not attempted and are reported
        as failed; an arithmetic error while composing is reported with its message as residual.

        # Parameters
            atlas: Atlas
                the atlas to verify.

        # Returns
            A list of `CheckResult`s; failed checks carry the non-zero residual.

        # Example
        ```python
        import superbv
        results = superbv.verify_atlas(superbv.build_super_conic())
        assert all(result.passed for result in results)
        ```
    """
    results = [CheckResult('atlas.{}.charts'.format(atlas.name), True, 'charts share the dimension p|q',
                           data={'dims': list(atlas.dims), 'charts': [c.name for c in atlas.charts]})]
    broken = set()
    for (u, v) in atlas.pairs():
        t = atlas.transition(u, v)
        label = '{}-{}'.format(u, v)
        wrong = [name for name, image in t.images.items()
                 if not image.has_parity(t.target.table.parity(name))]
        results.append(CheckResult('atlas.{}.parity.{}'.format(atlas.name, label), not wrong,
                                   'transitions preserve parity', ', '.join(wrong)))
        non_units = [name for name in t.target.table.even if len(t.images[name].reduced()) != 1]
        results.append(CheckResult('atlas.{}.units.{}'.format(atlas.name, label), not non_units,
                                   'reduced even images are Laurent units', ', '.join(non_units)))
        if wrong or non_units:
            broken.add((u, v))
    for (u, v) in atlas.pairs():
        label = '{}-{}'.format(u, v)
        name = 'atlas.{}.inverse.{}'.format(atlas.name, label)
        anchor = 'both directions are stored and mutually inverse'
        if (v, u) not in atlas.transitions:
            results.append(CheckResult(name, False, anchor, 'missing {} -> {}'.format(v, u)))
            continue
        failed = [p for p in ((u, v), (v, u)) if p in broken]
        if failed:
            results.append(CheckResult(name, False, anchor, 'not composed: {} failed its parity or unit check'
                                       .format(', '.join('{}-{}'.format(*p) for p in failed))))
            continue
        t = atlas.transition(u, v)
        there_and_back, error = _compose_or_error(t, atlas.transition(v, u))
        if error:
            results.append(CheckResult(name, False, anchor, error))
            continue
        residual = _residual_text((x, image - t.source.var(x)) for x, image in there_and_back.images.items())
        results.append(CheckResult(name, not residual, anchor, residual))
    names = [chart.name for chart in atlas.charts]
    for u, v, w in itertools.permutations(names, 3):
        if not all(k in atlas.transitions for k in ((u, v), (v, w), (u, w))):
            continue
        name = 'atlas.{}.cocycle.{}-{}-{}'.format(atlas.name, u, v, w)
        anchor = 'transitions satisfy the cocycle condition'
        failed = [p for p in ((u, v), (v, w), (u, w)) if p in broken]
        if failed:
            results.append(CheckResult(name, False, anchor, 'not composed: {} failed its parity or unit check'
                                       .format(', '.join('{}-{}'.format(*p) for p in failed))))
            continue
        composite, error = _compose_or_error(atlas.transition(u, v), atlas.transition(v, w))
        if error:
            results.append(CheckResult(name, False, anchor, error))
            continue
        expected = atlas.transition(u, w)
        residual = _residual_text((x, composite.images[x] - expected.images[x]) for x in expected.images)
        results.append(CheckResult(name, not residual, anchor, residual))
    log.info('verified {}: {} of {} checks passed'.format(atlas.name, sum(r.passed for r in results), len(results)))
    return results


def semidensity_check(atlas):
    """
        Compares, on every overlap, the Berezinian of the cotangent frame change of the BV total space with
        the square of the Berezinian of the cotangent frame change of `atlas`.
    """
    m_atlas = bv_total_space(atlas)
    m_sheaf = cotangent_transitions(m_atlas)
    x_sheaf = cotangent_sheaf(atlas)
    results = []
    for (u, v) in m_sheaf.pairs():
        ber_m = m_sheaf.transition(u, v).berezinian()
        ber_x = x_sheaf.transition(u, v).berezinian()
        residual = ber_m - change_table(ber_x * ber_x, ber_m.table)
        results.append(CheckResult('ber.{}.semidensity.{}-{}'.format(atlas.name, u, v), not residual,
                                   'Ber of the cotangent sheaf of M is the square of Ber of the cotangent sheaf of X',
                                   format_scalar(residual) if residual else '',
                                   data={'ber_M': format_scalar(ber_m), 'ber_X': format_scalar(ber_x)}))
    return results


class LineBundle(SheafData):
    """
        Even line bundle given by scalar frame changes `e_U = g_UV e_V`, `g_UV` written over `V`.

        # Parameters
            atlas: Atlas
                the base.
            frame_transitions: dict
                `(U, V) -> SuperScalar` (even and invertible).
            name: basestring
                label used in reports.
    """

    def __init__(self, atlas, frame_transitions, name='L'):
        transitions = {}
        for (u, v), g in frame_transitions.items():
            if not g.has_parity(Parity.EVEN):
                raise ValueError('Frame change {} of {} is not even.'.format(format_scalar(g), name))
            transitions[(u, v)] = SuperMatrix([[g]], [Parity.EVEN], [Parity.EVEN], table=g.table)
        super().__init__(atlas, [Parity.EVEN], transitions, name=name, frames=['e'])

    def frame_transition(self, u, v):
        return self.transition(u, v)[0, 0]
