# -*- coding: utf-8 -*-
"""
General documentation architecture:
Home
- Getting started
    Simple Example
- API
    - algebra
        SuperScalar
        SuperMatrix
    - atlas
    - cech
    - bvforms
    - examples
    - read_load
    - cli
"""

from superbv import algebra
from superbv import atlas
from superbv import bvforms
from superbv import cech
from superbv import cli
from superbv import examples
from superbv import read_load
from superbv import report

PAGES = [
    {
        'page': 'algebra.md',
        'classes': [algebra.VarTable, algebra.SuperScalar, algebra.SuperMatrix],
        'functions': [algebra.parse_scalar,
                      algebra.format_scalar,
                      algebra.invert,
                      algebra.derive,
                      algebra.substitute,
                      algebra.change_table,
                      algebra.random_scalar,
                      algebra.berezinian],
    },
    {
        'page': 'atlas.md',
        'classes': [atlas.Chart, atlas.TransitionMap, atlas.Atlas, atlas.SheafData, atlas.LineBundle],
        'all_module_functions': [atlas],
    },
    {
        'page': 'cech.md',
        'classes': [cech.CechCochain, cech.CohomologyClass, cech.DonagiWittenDecomposition],
        'all_module_functions': [cech],
    },
    {
        'page': 'bvforms.md',
        'classes': [bvforms.FormAlgebra, bvforms.MixedForm, bvforms.BerSection],
        'all_module_functions': [bvforms],
    },
    {
        'page': 'examples.md',
        'classes': [examples.GlobalSection, examples.Classification],
        'all_module_functions': [examples],
    },
    {
        'page': 'read_load.md',
        'all_module_functions': [read_load],
    },
    {
        'page': 'cli.md',
        'classes': [cli.RunConfig, report.Report, report.CheckResult],
        'functions': [cli.main],
    },
]
