"""Quantum sl3 link polynomial from A2-web state sums.

Typical use::

    from sl3web import from_braid_word, invariant, gammas
    p = invariant(from_braid_word([1, 1, 1], 2))
    gammas(p)   # (-2, 1, 1, 2)
"""

__version__ = "0.1.0"

from .analysis import (InvariantReport, braid_positivity_obstruction, fibered_criterion,
                       gammas, report, verify_coefficient_theorems)
from .diagram import (LinkDiagram, State, connected_sum, diagram_from_text,
                      disjoint_union, from_braid_word, from_pd_code, mirror)
from .homfly import HomflyPoly, homfly, parse_knotinfo_homfly, specialize_sl3
from .laurent import LaurentPoly, quantum_int
from .seifert import seifert_data
from .statesum import invariant
from .web import Web, evaluate

__all__ = [
    "HomflyPoly", "InvariantReport", "LaurentPoly", "LinkDiagram", "State", "Web",
    "braid_positivity_obstruction", "connected_sum", "diagram_from_text",
    "disjoint_union", "evaluate", "fibered_criterion", "from_braid_word",
    "from_pd_code", "gammas", "homfly", "invariant", "mirror",
    "parse_knotinfo_homfly", "quantum_int", "report", "seifert_data",
    "specialize_sl3", "verify_coefficient_theorems",
]
