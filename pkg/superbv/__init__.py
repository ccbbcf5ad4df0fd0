"""superbv - exact supergeometry: atlases, Atiyah classes and the super BV Laplacian"""

from .algebra import *
from .atlas import *
from .cech import *
from .bvforms import *
from .examples import *
from .read_load import atlas_from_dict, atlas_to_dict, dump_atlas, load_atlas
from .report import CheckResult, Report, timed


__author__ = 'superbv developers'

try:
    from get_version import get_version
    __version__ = get_version(__file__)
    del get_version
except (ImportError, ValueError, RuntimeError):
    __version__ = "0.1.0"
