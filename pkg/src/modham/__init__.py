"""Local modular Hamiltonian of the free scalar field on a ball, and the entropy of wave packets."""

from .config import DEFAULT_TOLERANCES, Tolerances
from .conformal import apply_K0, flow_geometric, flow_geometric_report, quadratic_form_massless
from .entropy import EntropyReport, entropy_ball, entropy_cutting_form, radius_scan, relative_entropy_coherent
from .errors import *  # noqa: F401,F403
from .field import CauchyData, GridSpec, kg_evolve, load_wave_spec, radial_bump, wave_from_spec
from .massive import MassiveGenerator, ball_form_terms, matrix_element_logDelta, quadratic_form_massive

__version__ = "0.1.0"
