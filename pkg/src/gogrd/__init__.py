"""Graph-of-groups calculus, subgroup distortion and Rapid Decay experiments."""

from .anosov import AnosovMap, meridian_decomposition, min_iterate_window
from .distortion import (
    classify_growth,
    disto_curve,
    seemingly_distortion_scan,
    separation_scan,
    tight_dynamics_scan,
)
from .errors import (
    BudgetExceeded,
    ConfigParse,
    ContextMismatch,
    GogError,
    NotABasis,
    NotHyperbolic,
    NotInSubgroup,
    NotWellDefined,
    OracleUnknown,
    SupportOutsideDomain,
    UnknownScenario,
    ZeroVector,
)
from .freeproduct import FreeProduct, build_normal_sets, magic_pair
from .gog import GraphOfGroups, GSequence, Pi1Group, validate
from .groups import (
    BaumslagSolitar,
    FreeAbelian,
    FreeByCyclic,
    FreeGroup,
    SemidirectZ2Z,
    ball_enumerate,
    element_budget,
    from_config,
)
from .rd import SupportedFunction, amenable_lower_bound, convolve, rd_ratio_curve
from .runner import run_scenario
from .scenarios import get_scenario, load_graph, scenario_ids
from .subgroups import SubgroupOracle, make_oracle, nearest_in_coset, stallings_fold

__version__ = "0.1.0"

__all__ = [
    "AnosovMap",
    "BaumslagSolitar",
    "BudgetExceeded",
    "ConfigParse",
    "ContextMismatch",
    "FreeAbelian",
    "FreeByCyclic",
    "FreeGroup",
    "FreeProduct",
    "GSequence",
    "GogError",
    "GraphOfGroups",
    "NotABasis",
    "NotHyperbolic",
    "NotInSubgroup",
    "NotWellDefined",
    "OracleUnknown",
    "Pi1Group",
    "SemidirectZ2Z",
    "SubgroupOracle",
    "SupportOutsideDomain",
    "SupportedFunction",
    "UnknownScenario",
    "ZeroVector",
    "amenable_lower_bound",
    "ball_enumerate",
    "build_normal_sets",
    "classify_growth",
    "convolve",
    "disto_curve",
    "element_budget",
    "from_config",
    "get_scenario",
    "load_graph",
    "magic_pair",
    "make_oracle",
    "meridian_decomposition",
    "min_iterate_window",
    "nearest_in_coset",
    "rd_ratio_curve",
    "run_scenario",
    "scenario_ids",
    "seemingly_distortion_scan",
    "separation_scan",
    "stallings_fold",
    "tight_dynamics_scan",
    "validate",
]
