from .errors import *
from ._scalar import (Parity, VarTable, SuperScalar, mul, invert, derive, substitute, change_table,
                      parse_scalar, format_scalar, monomial_text, random_scalar)
from ._matrix import SuperMatrix, berezinian, determinant
from . import linalg
