"""Chen-Ruan cohomology of Calabi-Yau complete intersections in weighted
projective space, the hybrid Landau-Ginzburg state space, and an explicit
bidegree-preserving match between them."""

from .exact import PrimeCollisionError, RankEngine, frac_part, fp_rank, integer_rank
from .model import (ModelData, ParseError, Polynomial, check_quasi_smooth, load_model,
                    make_model, parse_input, validate)
from .symmetry import (enumerate_components, enumerate_sectors, restrict_to_sector,
                       sector_ages)
from .jacobian import milnor_hilbert_series, primitive_hodge_dims
from .dots import build_diagram, order_and_f, pair_dots
from .statespace import (Analysis, assemble_bundle_cr, assemble_cy, assemble_lg,
                         classify_states, hodge_report, thom_shift_check,
                         verify_correspondence)

__version__ = "0.1.0"

__all__ = [
    "Analysis", "ModelData", "ParseError", "Polynomial", "PrimeCollisionError", "RankEngine",
    "assemble_bundle_cr", "assemble_cy", "assemble_lg", "build_diagram", "check_quasi_smooth",
    "classify_states", "enumerate_components", "enumerate_sectors", "fp_rank", "frac_part",
    "hodge_report", "integer_rank", "load_model", "make_model", "milnor_hilbert_series",
    "order_and_f", "pair_dots", "parse_input", "primitive_hodge_dims", "restrict_to_sector",
    "sector_ages", "thom_shift_check", "validate", "verify_correspondence",
]
