"""Linked, tight, componental tree-decompositions of finite adhesion that
display a prescribed end set, computed and verified on finite truncations of
finitely presented locally finite graphs."""

from .errors import (AuditError, FamilyError, HorizonError, LinkedTDError,
                     UncrossError)
from .graph_core import (GraphFamily, Region, Truncation, components_minus,
                         expand, nested, region_of, touch)
from .separation import (PathFamily, Separation, Star, all_min_separators,
                         is_linked_set, max_disjoint_paths, min_separator,
                         separates, separator_order, star_from_regions)
from .ends import (EndHandle, EndOracle, GDeltaSpec, all_ends_gdelta,
                   audit_gdelta, audit_oracle, boundary_of, component_of_end,
                   end_in_boundary, ends_living_in, is_linked_to_end,
                   min_end_separator, subset_gdelta, undominated_gdelta)
from .envelope import (EnvelopeResult, VertexEndSet, audit_envelope, envelope,
                       envelope_avoiding)
from .region_algorithm import AlgorithmRun, audit_run, run, uncross
from .decomposition import (TreeDecomposition, VerificationReport, build,
                            check_coverage_bound, check_region_edges,
                            check_separator_realization, contract_to_linked,
                            end_tree_map, from_json, verify)
from .facts import gadget_facts

__all__ = [n for n in dir() if not n.startswith("_")]
__version__ = "0.1.0"
