"""Milnor numbers and mu-bar invariants of welded links from signed Gauss codes."""

from .gauss import (
    ArcId,
    ArcTable,
    Diagram,
    DiagramError,
    GaussCodeError,
    Pass,
    arc_table,
    from_json,
    parse_based,
    parse_diagram,
    random_diagram,
    serialize_diagram,
    to_json,
)
from .milnor import (
    MuBar,
    delta,
    eta_iterate,
    evaluate_word,
    longitude_series,
    longitude_words,
    mu,
    mu_bar,
    mu_bar_table,
    mu_reduced,
    mu_table,
    partial_longitude,
    preferred_longitude,
    sv_equivalent,
)
from .moves import MoveClass, apply, check_walk, legal_moves, random_walk
from .series import TruncatedSeries, magnus_word
from .stringlink import StringLink, closure, mu_string, parse_string_link

__version__ = "0.1.0"
