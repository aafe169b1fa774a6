"""Bundled scenario configurations.

Each scenario is a plain mapping that round-trips through YAML/JSON.  Graph
scenarios carry a ``graph`` section in the format read by
:meth:`GraphOfGroups.from_config`; single-group scenarios carry ``group``.
"""

from __future__ import annotations

import copy

from .errors import UnknownScenario

CAT_MAP = [[2, 1], [1, 1]]

_FREE2 = {"kind": "free", "basis": ["x1", "x2"]}

SCENARIOS = {
    "g0": {
        "description": "F2 with a loop edge, iota_ebar(a2) = x2 x1^2; at most polynomial distortion",
        "graph": {
            "vertices": {"v": _FREE2},
            "edges": [
                {
                    "name": "e",
                    "source": "v",
                    "target": "v",
                    "group": {"kind": "free", "basis": ["a1", "a2"]},
                    "iota": {"a1": "x1", "a2": "x2"},
                    "iota_bar": {"a1": "x1", "a2": "x2 x1^2"},
                    "backend": "stallings",
                    "backend_bar": "stallings",
                }
            ],
        },
        "experiments": [
            {"name": "pi1", "radius": 4},
            {"name": "seemingly", "radius": 4},
            {"name": "magic", "radius": 2},
            {"name": "hat", "radius": 3},
            {"name": "consequence", "radius": 4},
        ],
        "budgets": {"samples": 50, "seed": 0},
    },
    "g1-bs12": {
        "description": "Z with a loop edge x -> x^2; pi_1 = BS(1,2), <x> exponentially distorted",
        "graph": {
            "vertices": {"v": {"kind": "abelian", "rank": 1, "names": ["x"]}},
            "edges": [
                {
                    "name": "e",
                    "source": "v",
                    "target": "v",
                    "group": {"kind": "abelian", "rank": 1, "names": ["a"]},
                    "iota": {"a": "x"},
                    "iota_bar": {"a": "x^2"},
                    "backend": "lattice",
                    "backend_bar": "lattice",
                }
            ],
        },
        "group": {"kind": "bs", "m": 2, "names": ["x", "t"]},
        "subgroup": ["x"],
        "experiments": [
            {"name": "pi1", "radius": 6},
            {"name": "disto", "radius": 13},
            {"name": "magic", "radius": 2},
            {"name": "hat", "radius": 3},
            {"name": "tree", "radius": 2, "rep_cutoff": 2},
            {"name": "rd", "radius": 8, "strategy": "folner-indicator", "restrict": "subgroup", "folner_factor": 8},
        ],
        "budgets": {"samples": 50, "seed": 0},
    },
    "g2-formanek-procesi": {
        "description": "F3 with two loop edges, iota_ej(b) = y xj",
        "graph": {
            "vertices": {"v": {"kind": "free", "basis": ["x1", "x2", "y"]}},
            "edges": [
                {
                    "name": f"e{j}",
                    "source": "v",
                    "target": "v",
                    "group": {"kind": "free", "basis": ["a1", "a2", "b"]},
                    "iota": {"a1": "x1", "a2": "x2", "b": f"y x{j}"},
                    "iota_bar": {"a1": "x1", "a2": "x2", "b": "y"},
                    "backend": "stallings",
                    "backend_bar": "stallings",
                }
                for j in (1, 2)
            ],
        },
        "experiments": [
            {"name": "pi1", "radius": 3},
            {"name": "seemingly", "radius": 2},
            {"name": "hat", "radius": 3},
            {"name": "consequence", "radius": 3},
        ],
        "budgets": {"samples": 30, "seed": 0},
    },
    "g3-sol-amalgam": {
        "description": "two Sol lattices Z^2 x|_A Z amalgamated along their fibers",
        "graph": {
            "vertices": {
                "v": {"kind": "semidirect", "matrix": CAT_MAP, "names": ["e1", "e2", "t"]},
                "w": {"kind": "semidirect", "matrix": CAT_MAP, "names": ["f1", "f2", "s"]},
            },
            "edges": [
                {
                    "name": "e",
                    "source": "v",
                    "target": "w",
                    "group": {"kind": "abelian", "rank": 2, "names": ["c1", "c2"]},
                    "iota": {"c1": "f1", "c2": "f2"},
                    "iota_bar": {"c1": "e1", "c2": "e2"},
                    "backend": "fiber",
                    "backend_bar": "fiber",
                }
            ],
        },
        "group": {"kind": "semidirect", "matrix": CAT_MAP, "names": ["e1", "e2", "t"]},
        "subgroup": ["e1", "e2"],
        "experiments": [
            {"name": "pi1", "radius": 2},
            {"name": "disto", "radius": 11},
            {"name": "tight", "radius": 5, "edge": "e", "coset": "s"},
            {"name": "hat", "radius": 3},
        ],
        "budgets": {"samples": 30, "seed": 0},
    },
    "g4-bs-amalgam": {
        "description": "two copies of BS(1,2) amalgamated along <x>",
        "graph": {
            "vertices": {
                "v": {"kind": "bs", "m": 2, "names": ["x", "t"]},
                "w": {"kind": "bs", "m": 2, "names": ["y", "s"]},
            },
            "edges": [
                {
                    "name": "e",
                    "source": "v",
                    "target": "w",
                    "group": {"kind": "abelian", "rank": 1, "names": ["c"]},
                    "iota": {"c": "y"},
                    "iota_bar": {"c": "x"},
                    "backend": "cyclic",
                    "backend_bar": "cyclic",
                }
            ],
        },
        "group": {"kind": "bs", "m": 2, "names": ["x", "t"]},
        "subgroup": ["x"],
        "experiments": [
            {"name": "pi1", "radius": 3},
            {"name": "disto", "radius": 12},
            {"name": "crossing", "radius": 10, "edge": "e"},
            {"name": "seemingly", "radius": 2},
            {"name": "hat", "radius": 3},
        ],
        "budgets": {"samples": 30, "seed": 0},
    },
    "g5-loose": {
        "description": "F3 x|_alpha Z amalgamated with F3 * Z along F3; loose polynomial distortion",
        "graph": {
            "vertices": {
                "v": {
                    "kind": "free_by_cyclic",
                    "basis": ["x1", "x2", "x3"],
                    "automorphism": {"x1": "x1 x2^2 x3^3", "x2": "x2 x3^4", "x3": "x3"},
                    "t_name": "t",
                },
                "w": {"kind": "free", "basis": ["y1", "y2", "y3", "z"]},
            },
            "edges": [
                {
                    "name": "e",
                    "source": "v",
                    "target": "w",
                    "group": {"kind": "free", "basis": ["a1", "a2", "a3"]},
                    "iota": {"a1": "y1", "a2": "y2", "a3": "y3"},
                    "iota_bar": {"a1": "x1", "a2": "x2", "a3": "x3"},
                    "backend": "factor",
                    "backend_bar": "fiber",
                }
            ],
        },
        "group": {
            "kind": "free_by_cyclic",
            "basis": ["x1", "x2", "x3"],
            "automorphism": {"x1": "x1 x2^2 x3^3", "x2": "x2 x3^4", "x3": "x3"},
            "t_name": "t",
        },
        "subgroup": ["x1", "x2", "x3"],
        "experiments": [
            {"name": "pi1", "radius": 2},
            {"name": "fiber-growth", "radius": 12, "letter": "x1"},
            {"name": "hat", "radius": 3},
        ],
        "budgets": {"samples": 20, "seed": 0},
    },
    "oneedge": {
        "description": "Z^2 joined to BS(1,2) along Z: the single crossing map distorts exponentially",
        "graph": {
            "vertices": {
                "v": {"kind": "abelian", "rank": 2, "names": ["a", "b"]},
                "w": {"kind": "bs", "m": 2, "names": ["x", "y"]},
            },
            "edges": [
                {
                    "name": "e",
                    "source": "v",
                    "target": "w",
                    "group": {"kind": "abelian", "rank": 1, "names": ["c"]},
                    "iota": {"c": "x"},
                    "iota_bar": {"c": "a"},
                    "backend": "cyclic",
                    "backend_bar": "cyclic",
                }
            ],
        },
        "experiments": [
            {"name": "pi1", "radius": 3},
            {"name": "crossing", "radius": 10, "edge": "e"},
            {"name": "seemingly", "radius": 1},
            {"name": "hat", "radius": 3},
        ],
        "budgets": {"samples": 30, "seed": 0},
    },
    "seemexp": {
        "description": "seemingly polynomial but exponentially distorted tree of free groups",
        "graph": {
            "vertices": {
                "v": {"kind": "free", "basis": ["x1", "x3"], "aliases": {"x2": "x3 x1 x3^-1"}},
                "w": {"kind": "free", "basis": ["y2", "y3"], "aliases": {"y1": "y3 y2 y3^-1"}},
            },
            "edges": [
                {
                    "name": "e",
                    "source": "v",
                    "target": "w",
                    "group": {"kind": "free", "basis": ["a", "b"]},
                    "iota": {"a": "y1", "b": "y2^2"},
                    "iota_bar": {"a": "x1^2", "b": "x2"},
                    "backend": "stallings",
                    "backend_bar": "stallings",
                }
            ],
        },
        "witness": {"conjugator": "e y3 e^-1 x3", "element": "x1", "base": 2, "shift": 2},
        "experiments": [
            {"name": "identity", "radius": 6, "n_min": 4},
            {"name": "seemingly", "radius": 1},
            {"name": "disto", "radius": 5},
            {"name": "hat", "radius": 3},
        ],
        "budgets": {"samples": 30, "seed": 0},
    },
    "sol-lattice": {
        "description": "Sol lattice Z^2 x|_A Z for the cat map: fiber distortion and Anosov dynamics",
        "group": {"kind": "semidirect", "matrix": CAT_MAP, "names": ["e1", "e2", "t"]},
        "subgroup": ["e1", "e2"],
        "experiments": [
            {"name": "disto", "radius": 13},
            {"name": "anosov", "radius": 12, "bound": 50, "gammas": [[1, 0], [0, 1], [1, 1], [3, -5], [8, 5]], "eta": [[0, 1], [1, 0], [0, 1], [2, -3], [3, 2]]},
        ],
        "budgets": {"samples": 100, "seed": 0},
    },
    "free-haagerup": {
        "description": "Haagerup inequality in F2: RD ratios stay below r + 1",
        "group": {"kind": "free", "basis": ["a", "b"]},
        "experiments": [
            {"name": "rd", "radius": 4, "strategy": "random-nonneg"},
            {"name": "separation", "radius": 6, "h_i": ["a"], "h_j": ["b"], "u_radius": 2},
        ],
        "budgets": {"samples": 16, "seed": 0},
    },
    "z2-rd": {
        "description": "Z^2: polynomial RD ratios and the Foelner lower bound",
        "group": {"kind": "abelian", "rank": 2, "names": ["a", "b"]},
        "experiments": [
            {"name": "rd", "radius": 6, "strategy": "random-nonneg"},
            {"name": "amenable", "radius": 5, "folner_factor": 8},
            {"name": "separation", "radius": 20, "h_i": ["a"], "h_j": ["a b"], "u_radius": 3},
        ],
        "budgets": {"samples": 8, "seed": 0},
    },
}

# seemexp with x2 and y1 as extra vertex-group generators (shorter vertex metrics)
SEEMEXP_REDUNDANT = {
    "vertices": {
        "v": {"kind": "free", "basis": ["x1", "x3"], "generators": {"x1": "x1", "x2": "x3 x1 x3^-1", "x3": "x3"}},
        "w": {"kind": "free", "basis": ["y2", "y3"], "generators": {"y1": "y3 y2 y3^-1", "y2": "y2", "y3": "y3"}},
    },
    "edges": SCENARIOS["seemexp"]["graph"]["edges"],
}


def scenario_ids():
    return list(SCENARIOS)


def get_scenario(sid):
    if sid not in SCENARIOS:
        raise UnknownScenario(sid)
    cfg = copy.deepcopy(SCENARIOS[sid])
    cfg["id"] = sid
    return cfg


def graph_scenarios():
    return [sid for sid, cfg in SCENARIOS.items() if "graph" in cfg]


_GRAPHS = {}


def load_graph(sid):
    """The (cached) graph of groups of a bundled scenario."""
    from .gog import GraphOfGroups

    if sid not in _GRAPHS:
        cfg = get_scenario(sid)
        if "graph" not in cfg:
            raise UnknownScenario(f"{sid} has no graph of groups")
        _GRAPHS[sid] = GraphOfGroups.from_config(cfg["graph"], name=sid)
    return _GRAPHS[sid]
