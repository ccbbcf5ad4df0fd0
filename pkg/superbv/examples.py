import logging
from dataclasses import dataclass, field

from sympy.polys.domains import QQ_I

from .algebra import SuperScalar, Unsupported, VarTable, format_scalar, linalg, parse_scalar, substitute
from .atlas import Atlas, Chart, LineBundle, TransitionMap, invert_transition
from .cech import h_dims
from .report import CheckResult

log = logging.getLogger(__file__)


def _names(prefix, count, single):
    if count == 1:
        return [single]
    return ['{}{}'.format(prefix, i) for i in range(1, count + 1)]


def build_affine(n, m):
    """
        The superspace C^{n|m} as a single chart without transitions.

        # Parameters
            n: integer
                even dimension; one even coordinate is called `z`, several `z1, z2, ...`.
            m: integer
                odd dimension; `theta` or `theta1, theta2, ...`.

        # Returns
            A one-chart `Atlas` named `affine{n}|{m}`.

        # Example
        ```python
        import superbv
        atlas = superbv.build_affine(1, 1)
        assert atlas.chart("U0").coords == ("z", "theta")
        ```
    """
    if n < 0 or m < 0:
        raise ValueError('Dimensions must be non-negative, got {}|{}.'.format(n, m))
    table = VarTable(even=_names('z', n, 'z'), odd=_names('theta', m, 'theta'))
    return Atlas([Chart('U0', table)], name='affine{}|{}'.format(n, m))


def _projective_line(m):
    u0 = Chart('U0', VarTable(even=['z'], odd=['theta{}'.format(a) for a in range(1, m + 1)]))
    u1 = Chart('U1', VarTable(even=['w'], odd=['psi{}'.format(a) for a in range(1, m + 1)]))
    z_inverse = SuperScalar.var(u0.table, 'z') ** -1
    w_inverse = SuperScalar.var(u1.table, 'w') ** -1
    there = {'w': z_inverse}
    back = {'z': w_inverse}
    for a in range(1, m + 1):
        there['psi{}'.format(a)] = u0.var('theta{}'.format(a)) * z_inverse
        back['theta{}'.format(a)] = u1.var('psi{}'.format(a)) * w_inverse
    return [u0, u1], [TransitionMap(u0, u1, there), TransitionMap(u1, u0, back)]


def _projective_plane(m):
    charts = []
    for i in range(3):
        even = ['u{}{}'.format(i, j) for j in range(3) if j != i]
        odd = ['t{}{}'.format(i, a) for a in range(1, m + 1)]
        charts.append(Chart('U{}'.format(i), VarTable(even=even, odd=odd)))
    transitions = []
    for i, source in enumerate(charts):
        ratios = [source.var('u{}{}'.format(i, j)) if j != i else SuperScalar.one(source.table) for j in range(3)]
        for k, target in enumerate(charts):
            if k == i:
                continue
            scale = ratios[k] ** -1
            images = {'u{}{}'.format(k, j): ratios[j] * scale for j in range(3) if j != k}
            for a in range(1, m + 1):
                images['t{}{}'.format(k, a)] = source.var('t{}{}'.format(i, a)) * scale
            transitions.append(TransitionMap(source, target, images))
    return charts, transitions


def build_projective(n, m):
    """
        Standard atlas of the split projective superspace CP^{n|m}, with even coordinates `X_j / X_i` and odd
        coordinates `theta_a / X_i` on the chart `U_i`.

        # Parameters
            n: integer
                1 or 2.
            m: integer
                odd dimension.

        # Returns
            An `Atlas` with `n + 1` charts and both directions of every transition. On CP^1 the charts are
            `U0 = (z, theta1, ...)` and `U1 = (w, psi1, ...)`; on CP^2 chart `Ui` has even coordinates `uij`
            for `j != i` and odd coordinates `ti1, ti2, ...`.

        # Example
        ```python
        import superbv
        cp = superbv.build_projective(1, 2)
        theta1 = cp.transition("U1", "U0").images["theta1"]
        assert theta1 == superbv.parse_scalar("psi1*w^-1", cp.chart("U1").table)
        ```
    """
    if m < 0:
        raise ValueError('Odd dimension must be non-negative, got {}.'.format(m))
    if n == 1:
        charts, transitions = _projective_line(m)
    elif n == 2:
        charts, transitions = _projective_plane(m)
    else:
        raise Unsupported('Projective superspaces are built for n in (1, 2), got n = {}.'.format(n))
    log.debug('built CP^{}|{} with {} charts'.format(n, m, len(charts)))
    return Atlas(charts, transitions, name='cp{}|{}'.format(n, m))


def build_super_conic(lam=1):
    """
        The non-projected supermanifold over CP^1 with fermionic sheaf `O(-2) + O(-2)` and obstruction class
        `lam * [1 / (X0 X1)]`:

            z = 1/w + lam * psi1*psi2 / w^3,    theta_i = psi_i / w^2.

        The reverse transition is obtained by exact inversion; every nonzero `lam` gives an isomorphic atlas.
    """
    lam = QQ_I.convert(lam)
    if not lam:
        raise ValueError('The obstruction parameter must be nonzero for the conic.')
    u0 = Chart('U0', VarTable(even=['z'], odd=['theta1', 'theta2']))
    u1 = Chart('U1', VarTable(even=['w'], odd=['psi1', 'psi2']))
    w, psi1, psi2 = u1.var('w'), u1.var('psi1'), u1.var('psi2')
    back = TransitionMap(u1, u0, {'z': w ** -1 + psi1 * psi2 * w ** -3 * lam,
                                  'theta1': psi1 * w ** -2, 'theta2': psi2 * w ** -2})
    there = invert_transition(back)
    return Atlas([u0, u1], [there, back], name='conic')


def conic_line_bundle(atlas=None):
    """
        The line bundle `L` on the conic with `e_U0 = (w^2 - psi1*psi2) e_U1`.
    """
    atlas = atlas or build_super_conic()
    u0, u1 = atlas.chart('U0'), atlas.chart('U1')
    return LineBundle(atlas, {('U0', 'U1'): parse_scalar('w^2 - psi1*psi2', u1.table),
                              ('U1', 'U0'): parse_scalar('z^2 - theta1*theta2', u0.table)}, name='L')


class GlobalSection:
    """
        Section of a line bundle given by its local representatives; on every overlap `(U, V)` the
        representatives obey `rep_V = rep_U * g_UV`, with `rep_U` rewritten in the coordinates of `V`.

        # Parameters
            name: basestring
                label, e.g. `X0` or `Theta1`.
            local_reps: dict
                `chart name -> SuperScalar` over that chart.
    """

    def __init__(self, name, local_reps):
        self.name = name
        self.local_reps = dict(local_reps)

    def __getitem__(self, chart):
        return self.local_reps[chart]

    @property
    def parity(self):
        return next(iter(self.local_reps.values())).parity

    def check(self, bundle):
        atlas = bundle.atlas
        residual = []
        for (u, v) in bundle.pairs():
            moved = atlas.transition(v, u)(self.local_reps[u]) * bundle.frame_transition(u, v)
            difference = self.local_reps[v] - moved
            if difference:
                residual.append('{}-{}: {}'.format(u, v, format_scalar(difference)))
        return CheckResult('conic.section.{}'.format(self.name), not residual,
                           'local representatives glue to a global section of {}'.format(bundle.name),
                           '; '.join(residual),
                           data={name: format_scalar(rep) for name, rep in sorted(self.local_reps.items())})

    def __repr__(self):
        return 'GlobalSection({}: {})'.format(self.name, {k: format_scalar(v) for k, v in self.local_reps.items()})


_CONIC_SECTIONS = [
    ('X0', '1', 'w^2 - psi1*psi2'),
    ('X1', 'z', 'w'),
    ('X2', 'z^2 - theta1*theta2', '1'),
    ('Theta1', 'theta1', 'psi1'),
    ('Theta2', 'theta2', 'psi2'),
]


def conic_line_bundle_sections():
    """
        The five sections `X0, X1, X2, Theta1, Theta2` of `L` spanning its global sections.

        # Returns
            `(bundle, sections)` with a `LineBundle` and a list of `GlobalSection`s.

        # Example
        ```python
        import superbv
        bundle, sections = superbv.conic_line_bundle_sections()
        assert all(section.check(bundle).passed for section in sections)
        ```
    """
    bundle = conic_line_bundle()
    u0, u1 = bundle.atlas.chart('U0'), bundle.atlas.chart('U1')
    sections = [GlobalSection(name, {'U0': parse_scalar(rep0, u0.table), 'U1': parse_scalar(rep1, u1.table)})
                for name, rep0, rep1 in _CONIC_SECTIONS]
    return bundle, sections


def section_space_dims(bundle, **kwargs):
    """
        Dimension `even|odd` of the global sections of a line bundle on a two-chart cover of CP^1.

        Candidates are the monomials of the first chart with even exponent `0..degree`; a candidate combination
        is global when its image in the second chart has no negative powers. The kernel of that condition is
        computed separately for each parity.

        # Parameters
            bundle: LineBundle
                the bundle.
            kwargs:
                key: `degree`: integer
                    largest power of the first chart's even coordinate, default 4.

        # Returns
            `(dim_even, dim_odd)`.
    """
    degree = kwargs.get('degree', 4)
    atlas = bundle.atlas
    u, v = atlas.charts[0].name, atlas.charts[1].name
    table = atlas.chart(u).table
    back = atlas.transition(v, u)
    g = bundle.frame_transition(u, v)
    dims = []
    for parity in (0, 1):
        candidates = [(exps, mask) for mask in range(1 << table.q) if mask.bit_count() % 2 == parity
                      for exps in ((e,) + (0,) * (table.p - 1) for e in range(degree + 1))]
        equations = {}
        for k, (exps, mask) in enumerate(candidates):
            image = back(SuperScalar.monomial(table, exps, mask)) * g
            for (image_exps, image_mask), coeff in image:
                if any(e < 0 for e in image_exps):
                    equations.setdefault((image_exps, image_mask), {})[k] = coeff
        dims.append(len(linalg.nullspace(list(equations.values()), len(candidates))))
    log.info('global sections of {}: {}|{}'.format(bundle.name, *dims))
    return tuple(dims)


QUADRIC_TABLE = VarTable(even=['X0', 'X1', 'X2'], odd=['Theta1', 'Theta2'])

CONIC_QUADRIC = 'Theta1*Theta2 - X1^2 + X0*X2'
PRINTED_QUADRIC = 'Theta1*Theta2 - X1^2 - X0*X2'
NORMAL_FORM = 'X0^2 + X1^2 + X2^2 + Theta1*Theta2'
NORMALIZING_MATRIX = [
    ['1', '0', 'i', '0', '0'],
    ['0', 'i', '0', '0', '0'],
    ['1', '0', '-i', '0', '0'],
    ['0', '0', '0', '1', '0'],
    ['0', '0', '0', '0', '1'],
]


def pgl_transform(quadric, matrix):
    """
        Applies the linear change of homogeneous coordinates `X_i -> sum_j T[i][j] X_j`.

        # Parameters
            quadric: SuperScalar
                polynomial over `QUADRIC_TABLE` (or any table with one variable per row of `matrix`).
            matrix: list
                square nested list; entries are numbers or textual constants such as `"i"`. Even and odd
                coordinates must not mix.

        # Returns
            The transformed polynomial over the same table.

        # Example
        ```python
        import superbv
        from superbv.examples import QUADRIC_TABLE, NORMALIZING_MATRIX
        quadric = superbv.parse_scalar("Theta1*Theta2 - X1^2 + X0*X2", QUADRIC_TABLE)
        image = superbv.pgl_transform(quadric, NORMALIZING_MATRIX)
        assert image == superbv.parse_scalar("X0^2 + X1^2 + X2^2 + Theta1*Theta2", QUADRIC_TABLE)
        ```
    """
    table = quadric.table
    names = table.names
    if len(matrix) != len(names) or any(len(row) != len(names) for row in matrix):
        raise ValueError('Expected a {0}x{0} matrix for the coordinates {1}.'.format(len(names), names))
    images = {}
    for i, name in enumerate(names):
        image = SuperScalar.zero(table)
        for j, entry in enumerate(matrix[i]):
            coeff = parse_scalar(entry, table) if isinstance(entry, str) else SuperScalar.constant(table, entry)
            if coeff:
                image = image + coeff * SuperScalar.var(table, names[j])
        images[name] = image
    return substitute(quadric, images, table=table)


def _evaluate(quadric, sections, chart):
    assignment = {section.name: section[chart.name] for section in sections}
    return substitute(quadric, assignment, table=chart.table)


def conic_equation_check():
    """
        Checks the embedding data of the conic into CP^{2|2}.

        The five sections are verified to be global, `H^0(L)` is computed as `3|2`, the quadric
        `Theta1*Theta2 - X1^2 + X0*X2` is evaluated on the sections in both charts and the normalizing
        matrix carries it to `X0^2 + X1^2 + X2^2 + Theta1*Theta2`. The evaluation of the quadric with the
        opposite sign on `X0*X2` is kept in the check data.

        # Returns
            A list of `CheckResult`s.
    """
    bundle, sections = conic_line_bundle_sections()
    results = [section.check(bundle) for section in sections]
    dims = section_space_dims(bundle)
    results.append(CheckResult('conic.h0', dims == (3, 2), 'H^0(L) has dimension 3|2',
                               '' if dims == (3, 2) else '{}|{}'.format(*dims), data={'h0': list(dims)}))
    quadric = parse_scalar(CONIC_QUADRIC, QUADRIC_TABLE)
    printed = parse_scalar(PRINTED_QUADRIC, QUADRIC_TABLE)
    for chart in bundle.atlas.charts:
        value = _evaluate(quadric, sections, chart)
        results.append(CheckResult('conic.equation.{}'.format(chart.name), not value,
                                   '{} = 0 on the sections'.format(CONIC_QUADRIC), format_scalar(value) if value else '',
                                   data={'printed_form': PRINTED_QUADRIC,
                                         'printed_form_value': format_scalar(_evaluate(printed, sections, chart))}))
    image = pgl_transform(quadric, NORMALIZING_MATRIX)
    residual = image - parse_scalar(NORMAL_FORM, QUADRIC_TABLE)
    results.append(CheckResult('conic.normal_form', not residual,
                               'the normalizing matrix gives {} = 0'.format(NORMAL_FORM),
                               format_scalar(residual) if residual else '',
                               data={'image': format_scalar(image)}))
    return results


@dataclass
class Classification:
    """
        Obstruction data of 1|2-dimensional supermanifolds over CP^1 with fermionic sheaf `O(m) + O(n)`.

        The obstruction class lives in `H^1(O(2 + m + n))`; a non-projected structure exists exactly when
        that space is nonzero.
    """
    twists: tuple
    obstruction_degree: int
    obstruction_dim: int
    non_projected_exists: bool
    omega_nonzero: bool
    structure: str
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {'twists': list(self.twists), 'obstruction_degree': self.obstruction_degree,
                'obstruction_dim': self.obstruction_dim, 'non_projected_exists': self.non_projected_exists,
                'omega_nonzero': self.omega_nonzero, 'structure': self.structure, 'notes': list(self.notes)}


def classify_1_2_over_p1(m, n, omega_nonzero=True):
    """
        Classifies 1|2 supermanifolds over CP^1 with fermionic sheaf `O(m) + O(n)`.

        # Parameters
            m, n: integer
                twists of the fermionic sheaf.
            omega_nonzero: bool
                whether a nonzero obstruction class is requested.

        # Returns
            A `Classification`; `structure` is `non-projected` when a nonzero class is requested and exists,
            otherwise `split`.

        # Example
        ```python
        import superbv
        assert superbv.classify_1_2_over_p1(-2, -2).obstruction_dim == 1
        ```
    """
    degree = 2 + m + n
    dim = h_dims(degree)[1]
    exists = dim > 0
    notes = ['non-projected structures need m + n <= -4']
    if omega_nonzero and not exists:
        notes.append('H^1(O({})) vanishes, so every such supermanifold is split'.format(degree))
    structure = 'non-projected' if omega_nonzero and exists else 'split'
    return Classification((m, n), degree, dim, exists, bool(omega_nonzero), structure, notes)


_DEFAULT_DIMS = {'affine': (1, 1), 'cp': (1, 0), 'conic': (1, 2)}


def example_atlas(name, dims=None):
    """
        Builds a named example: `affine` (C^{n|m}), `cp` (CP^{n|m}) or `conic`.
    """
    if name not in _DEFAULT_DIMS:
        raise ValueError('Unknown example "{}"; choose one of {}.'.format(name, sorted(_DEFAULT_DIMS)))
    n, m = tuple(dims) if dims is not None else _DEFAULT_DIMS[name]
    if name == 'affine':
        return build_affine(n, m)
    if name == 'cp':
        return build_projective(n, m)
    if (n, m) != (1, 2):
        raise ValueError('The conic has dimension 1|2, got {}|{}.'.format(n, m))
    return build_super_conic()
