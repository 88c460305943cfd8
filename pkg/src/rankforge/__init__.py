"""Exact hand-class frequencies and rankings for poker decks with r ranks and 4 suits."""

from .closed_form import OutOfValidityError, freq_closed, freq_poly
from .enumerator import (
    CountTable,
    EnumerationCeilingError,
    enumerate_inclusive,
    enumerate_showdown,
    nothing_count,
)
from .exact import Polynomial, binom, binom_poly, certify_sign_permanence
from .hands import (
    CLASSES,
    Card,
    ContainmentProfile,
    HandClass,
    HandSet,
    Ranking,
    best_class,
    classify,
    is_straight_ranks,
)
from .ranking import (
    certify_stability,
    find_min_agreement,
    frequency_ranking,
    iterate_showdown,
    scan_breakpoints,
    showdown_ranking,
)

__version__ = "0.1.0"
