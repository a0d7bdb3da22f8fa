"""Exact computations in the twisted Yangian Y_3^+ and its Drinfeld generators."""

__version__ = "0.1.0"

from .exact import Rational, ScalarPoly
from .pbw import AlgebraSpec, Element, normal_form, rtt_straighten_rule
from .results import VerificationResult
from .series import ElementSeries, SeriesMatrix, WindowError, cleared_identity_check
from .twisted import (
    DRINFELD,
    DRINFELD_F,
    MNO_S,
    DrinfeldTable,
    NotInSpan,
    STable,
    admissible,
    build_s_table,
    build_tables,
    center_series,
    expand_family_monomials,
    gauss_factorize,
    phi_k_image,
    shifted,
    six_term_sdet,
    solve_coordinates,
    tau,
)
