"""Exact combinatorics of convex sign-coherent fans in ranks 2 and 3."""

from .catalog import OrthantFanId, dm_datum, excluded_data, min_max_cones, orthant_fan, quadrant_rays
from .classify import analyze_fan, assemble_fan, enumerate_rank2, enumerate_rank3
from .datum import DatumD, MutationDatum
from .fan import Fan, coordinate_fan, exchange_relation, hasse_orientation, validate
from .polytope import g_polytope, hull_oracle, is_convex, is_reflexive
from .reduction import match_template, maximal_paths_at_ray, reduce_at_ray
from .symmetry import GroupElement, act_datum, act_fan, canonical_form, group

__version__ = "0.1.0"

__all__ = [
    "DatumD",
    "Fan",
    "GroupElement",
    "MutationDatum",
    "OrthantFanId",
    "act_datum",
    "act_fan",
    "analyze_fan",
    "assemble_fan",
    "canonical_form",
    "coordinate_fan",
    "dm_datum",
    "enumerate_rank2",
    "enumerate_rank3",
    "exchange_relation",
    "excluded_data",
    "g_polytope",
    "group",
    "hasse_orientation",
    "hull_oracle",
    "is_convex",
    "is_reflexive",
    "match_template",
    "maximal_paths_at_ray",
    "min_max_cones",
    "orthant_fan",
    "quadrant_rays",
    "reduce_at_ray",
    "validate",
]
