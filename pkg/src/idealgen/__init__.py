"""Random generating sets of polynomial ideals with a known Groebner basis."""

__version__ = "0.1.0"

from .field import QQ, FieldConfig
from .poly import DEGREVLEX, LEX, MonomialOrder, Polynomial, Ring
from .polymat import ElementaryOp, PolyMatrix, mat_det
from .groebner import buchberger, ideal_equal, reduced_groebner
from .shape import CoeffDistribution, ShapeConfig, sample_shape_basis
from .forge import GenConfig, generate_dataset, generate_record, generate_record_bruhat
