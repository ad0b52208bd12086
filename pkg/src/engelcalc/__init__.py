"""Free Milnor groups, Engel relations and link homotopy."""
from .engel import (ElementaryCommutator, EngelCertificate, basic_decompose,
                    engel_decompose, kinky_relation, n_engel_word, verify_certificate)
from .lie import engel_relations, quotient_report, straighten
from .links import (LinkPresentation, MuIndex, band_sum, bing_double, build_gbr,
                    homotopically_trivial, hopf, mu_bar, ramify, stabilize_and_trivialize)
from .magnus import expand, expand_reduced, reduce
from .milnor import MilnorContext, lcs_degree, milnor_equal, milnor_trivial
from .syntax import parse_word
from .words import GroupWord, commutator, conjugate, gen, left_normed

__version__ = "0.1.0"

__all__ = [
    "ElementaryCommutator", "EngelCertificate", "GroupWord", "LinkPresentation",
    "MilnorContext", "MuIndex", "band_sum", "basic_decompose", "bing_double",
    "build_gbr", "commutator", "conjugate", "engel_decompose", "engel_relations",
    "expand", "expand_reduced", "gen", "homotopically_trivial", "hopf",
    "kinky_relation", "lcs_degree", "left_normed", "milnor_equal", "milnor_trivial",
    "mu_bar", "n_engel_word", "parse_word", "quotient_report", "ramify", "reduce",
    "stabilize_and_trivialize", "straighten", "verify_certificate",
]
