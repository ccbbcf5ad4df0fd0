"""Command-line driver: builds or loads atlases, runs the verification suites and writes reports."""
import argparse
import logging
import os
import sys
from dataclasses import asdict, dataclass

from .algebra import AtlasError, Unsupported
from .atlas import bv_total_space, cotangent_transitions, semidensity_check, tangent_sheaf, verify_atlas
from .bvforms import run_bv_checks
from .cech import (atiyah_cocycle, check_atiyah_cocycle, check_dw_components, check_ext_witness, chern_degree,
                   dw_decompose, ext_class_omega1, fermionic_twists, is_coboundary, reduce_structure_group)
from .examples import build_super_conic, classify_1_2_over_p1, conic_equation_check, example_atlas
from .read_load import load_atlas
from .report import CheckResult, Report, timed

log = logging.getLogger(__file__)

LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'

COMMANDS = ('verify-atlas', 'atiyah', 'ext', 'bv-check', 'conic-demo', 'all')


@dataclass
class RunConfig:
    """
        Resolved command-line configuration.

        # Parameters
            command: basestring
                one of `COMMANDS`.
            example: basestring
                `affine`, `cp` or `conic`; ignored when `atlas_path` is given.
            atlas_path: basestring
                json atlas file read by `load_atlas`.
            dims: tuple
                `(n, m)`.
            p_max, x_max: integer
                truncation of the BV suites.
            seed: integer
                seed of every random sampler.
            trials: integer
                samples per property.
            format: basestring
                `text` or `json`.
            out: basestring
                report path; standard output when empty.
    """
    command: str
    example: str = None
    atlas_path: str = None
    dims: tuple = None
    p_max: int = 4
    x_max: int = 4
    seed: int = 0
    trials: int = 200
    format: str = 'text'
    out: str = None
    verbose: bool = False

    def __post_init__(self):
        if self.p_max < 1 or self.x_max < 1:
            raise ValueError('Truncation must be at least 1, got p_max={} and x_max={}.'.format(self.p_max, self.x_max))
        if self.trials < 1:
            raise ValueError('Need at least one trial, got {}.'.format(self.trials))
        if self.dims is not None:
            self.dims = tuple(self.dims)

    @classmethod
    def from_namespace(cls, namespace):
        return cls(command=namespace.command, example=namespace.example, atlas_path=namespace.atlas,
                   dims=namespace.dims, p_max=namespace.pmax, x_max=namespace.xmax, seed=namespace.seed,
                   trials=namespace.trials, format=namespace.format, out=namespace.out, verbose=namespace.verbose)

    def resolve_atlas(self):
        if self.atlas_path:
            return load_atlas(self.atlas_path)
        if self.example is None:
            raise ValueError('{} needs --example or --atlas.'.format(self.command))
        return example_atlas(self.example, self.dims)

    def to_dict(self):
        out = asdict(self)
        out['dims'] = list(self.dims) if self.dims is not None else None
        return out

    def derive(self, **changes):
        values = asdict(self)
        values.update(changes)
        return RunConfig(**values)


def _verify_atlas(atlas, report):
    base = timed(verify_atlas, atlas)
    report.extend(base)
    if not all(result.passed for result in base):
        log.warning('{} failed its checks; skipping the BV total space'.format(atlas.name))
        return
    report.extend(timed(verify_atlas, bv_total_space(atlas)))
    if len(atlas.charts) > 1:
        report.extend(timed(semidensity_check, atlas))


def cmd_verify_atlas(config):
    """
        Verifies an atlas, its BV total space and the squared Berezinian relation on every overlap.
    """
    report = Report('verify-atlas', config.to_dict())
    _verify_atlas(config.resolve_atlas(), report)
    return report


# Known verdicts of the bundled examples: whether the tangent Atiyah class and the extension class of the
# cotangent sheaf of M vanish.
EXPECTED_SPLIT = {'affine': True, 'cp': False, 'conic': False}


def _verdict_problems(example, split):
    if example is None or example not in EXPECTED_SPLIT:
        return []
    if split == EXPECTED_SPLIT[example]:
        return []
    return ['{} is expected to be {}'.format(example, 'split' if EXPECTED_SPLIT[example] else 'non-split')]


def _atiyah(atlas, report, decompose=True, example=None):
    at = atiyah_cocycle(tangent_sheaf(atlas))
    report.extend(timed(check_atiyah_cocycle, at))
    split, cls = is_coboundary(at)
    data = {'split': split, 'class': {} if split else cls.to_dict()}
    if not split and len(atlas.charts) == 2 and atlas.dims[0] == 1:
        data['chern_degree'] = str(chern_degree(cls))
    problems = _verdict_problems(example, split)
    if example == 'cp' and atlas.dims == (1, 0) and data.get('chern_degree') != '2':
        problems.append('chern degree is {}, expected 2'.format(data.get('chern_degree')))
    report.add(CheckResult('atiyah.{}.class'.format(atlas.name), not problems,
                           'the Atiyah class of the tangent sheaf is the class of its Atiyah cocycle',
                           '; '.join(problems), data=data))
    if decompose and len(atlas.charts) == 2 and atlas.dims == (1, 2):
        decomposition = dw_decompose(at, atlas)
        report.add(timed(check_dw_components, at, decomposition))
        nonzero = [name for name, cls in zip(('red', 'omega', 'ferm'), decomposition) if not cls.is_zero()]
        problems = []
        if example == 'conic' and len(nonzero) != 3:
            problems.append('expected three nonzero components, nonzero: {}'.format(', '.join(nonzero)))
        if example == 'cp' and ('red' not in nonzero or 'omega' in nonzero):
            problems.append('expected a nonzero red and a zero omega component, nonzero: {}'.format(
                ', '.join(nonzero)))
        report.add(CheckResult('atiyah.{}.dw'.format(atlas.name), not problems,
                               'the restricted Atiyah class splits into reduced, odd and fermionic parts',
                               '; '.join(problems), data={'components': decomposition.to_dict(), 'nonzero': nonzero}))
    return at


def _example_of(config):
    return None if config.atlas_path else config.example


def cmd_atiyah(config):
    """
        Atiyah class of the tangent sheaf and, for 1|2 atlases over the projective line, its Donagi-Witten
        decomposition. Bundled examples are compared against their known verdicts; atlas files are not.
    """
    report = Report('atiyah', config.to_dict())
    _atiyah(config.resolve_atlas(), report, example=_example_of(config))
    return report


def _ext(atlas, report, example=None):
    m_sheaf = cotangent_transitions(bv_total_space(atlas))
    cochain, _ = ext_class_omega1(m_sheaf)
    split, result = is_coboundary(cochain)
    data = {'split': split}
    if split:
        data['witness'] = result.to_dict()
        report.add(timed(check_ext_witness, m_sheaf, result))
        _, reduction = reduce_structure_group(m_sheaf, result)
        report.add(reduction)
    else:
        data['class'] = result.to_dict()
    problems = _verdict_problems(example, split)
    report.add(CheckResult('ext.{}.verdict'.format(atlas.name), not problems,
                           'the cotangent sheaf of M splits iff its extension class vanishes', '; '.join(problems),
                           data=data))
    return split


def cmd_ext(config):
    """
        Extension class of the cotangent sheaf of the BV total space with the split verdict.
    """
    report = Report('ext', config.to_dict())
    _ext(config.resolve_atlas(), report, example=_example_of(config))
    return report


def cmd_bv_check(config):
    """
        Double complex, BV Laplacian and homotopy suite on C^{n|m}.
    """
    if config.dims is None:
        raise ValueError('bv-check needs --dims n m.')
    report = Report('bv-check', config.to_dict())
    n, m = config.dims
    report.extend(timed(run_bv_checks, n, m, seed=config.seed, trials=config.trials, p_max=config.p_max,
                        x_max=config.x_max))
    return report


def cmd_conic_demo(config):
    """
        End-to-end run on the super conic: global sections, the quadric, the classification and the
        Donagi-Witten decomposition.
    """
    report = Report('conic-demo', config.to_dict())
    atlas = build_super_conic()
    report.extend(timed(conic_equation_check))
    classification = classify_1_2_over_p1(*fermionic_twists(atlas))
    report.add(CheckResult('conic.classification', classification.structure == 'non-projected',
                           'a 1|2 supermanifold over CP^1 with twists (-2, -2) can be non-projected',
                           '' if classification.non_projected_exists else classification.structure,
                           data=classification.to_dict()))
    at = atiyah_cocycle(tangent_sheaf(atlas))
    decomposition = dw_decompose(at, atlas)
    report.add(timed(check_dw_components, at, decomposition))
    nonzero = [name for name, cls in zip(('red', 'omega', 'ferm'), decomposition) if not cls.is_zero()]
    report.add(CheckResult('conic.dw', len(nonzero) == 3, 'the conic has three nonzero Donagi-Witten components',
                           '' if len(nonzero) == 3 else 'nonzero: {}'.format(', '.join(nonzero)),
                           data={'components': decomposition.to_dict()}))
    return report


_ALL_ATLASES = [('affine', (1, 1)), ('cp', (1, 0)), ('cp', (1, 1)), ('cp', (1, 2)), ('cp', (2, 0)), ('conic', (1, 2))]
_ALL_ATIYAH = [('affine', (1, 1)), ('cp', (1, 0)), ('cp', (1, 2))]
_ALL_EXT = [('affine', (2, 2)), ('cp', (1, 2)), ('conic', (1, 2))]
_ALL_BV = [(1, 0), (1, 1), (1, 2), (2, 1)]


def cmd_all(config):
    """
        Every suite on its default example set.
    """
    report = Report('all', config.to_dict())
    for name, dims in _ALL_ATLASES:
        _verify_atlas(example_atlas(name, dims), report)
    for name, dims in _ALL_ATIYAH:
        _atiyah(example_atlas(name, dims), report, example=name)
    for name, dims in _ALL_EXT:
        _ext(example_atlas(name, dims), report, example=name)
    for dims in _ALL_BV:
        report.merge(cmd_bv_check(config.derive(command='bv-check', dims=dims)))
    report.merge(cmd_conic_demo(config.derive(command='conic-demo')))
    return report


_HANDLERS = {'verify-atlas': cmd_verify_atlas, 'atiyah': cmd_atiyah, 'ext': cmd_ext, 'bv-check': cmd_bv_check,
             'conic-demo': cmd_conic_demo, 'all': cmd_all}


def build_parser():
    from . import __version__
    parser = argparse.ArgumentParser(prog='superbv', description='Exact checks for supermanifolds and the super BV '
                                                                 'Laplacian.')
    parser.add_argument('--version', action='version', version='%(prog)s {}'.format(__version__))
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--example', choices=['affine', 'cp', 'conic'], default=None)
    parser.add_argument('--dims', type=int, nargs=2, metavar=('N', 'M'), default=None)
    parser.add_argument('--atlas', default=None, help='json atlas file; overrides --example')
    parser.add_argument('--pmax', type=int, default=4, help='largest fiber degree of the BV suites')
    parser.add_argument('--xmax', type=int, default=4, help='largest coordinate degree of the BV suites')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--trials', type=int, default=200)
    parser.add_argument('--format', choices=['text', 'json'], default='text')
    parser.add_argument('--out', default=None, help='report path; standard output when omitted')
    parser.add_argument('--verbose', '-v', action='store_true')
    return parser


def _write(report, config):
    text = report.to_json() if config.format == 'json' else report.to_text()
    if config.out:
        directory = os.path.dirname(config.out)
        if directory and not os.path.exists(directory):
            os.makedirs(directory)
        with open(config.out, 'w') as handle:
            handle.write(text + '\n')
        log.info('wrote report to {}'.format(config.out))
    else:
        sys.stdout.write(text + '\n')


def main(argv=None):
    """
        Entry point of the `superbv` console script.

        # Returns
            `0` when every check passes, `1` when a check fails and `2` on usage or input errors.

        # Example
        ```python
        from superbv.cli import main
        assert main(["verify-atlas", "--example", "conic", "--format", "json"]) == 0
        ```
    """
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as stop:
        return stop.code if isinstance(stop.code, int) else 2
    logging.basicConfig(level=logging.DEBUG if namespace.verbose else logging.WARNING, format=LOG_FORMAT)
    try:
        config = RunConfig.from_namespace(namespace)
        if config.example is None and config.atlas_path is None and config.command in ('verify-atlas', 'atiyah', 'ext'):
            parser.error('{} needs --example or --atlas'.format(config.command))
        report = _HANDLERS[config.command](config)
    except SystemExit as stop:
        return stop.code if isinstance(stop.code, int) else 2
    except (FileNotFoundError, ValueError, ArithmeticError, Unsupported, AtlasError) as error:
        sys.stderr.write('superbv: error: {}\n'.format(error))
        return 2
    _write(report, config)
    return 0 if report.passed else 1
