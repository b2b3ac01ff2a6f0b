"""linserlab: exact asymptotic invariants of divisor classes.

A computational laboratory for the volume function and its relatives
(higher asymptotic cohomology, asymptotic vanishing orders, restricted
volumes, Zariski decompositions, moving-part approximation sweeps, and
multigraded monomial-ideal families) on a catalog of concrete variety
models, with every closed form cross-checked against an exact
section-counting oracle.
"""

from .scalars import (Rat, QuadExt, RadicalSum, canonicalize, quad_compare,
                      sqrt_rat, format_scalar, parse_scalar)
from .polyhedra import (LatticePolytope, build_polytope, euclidean_volume,
                        normalized_volume, hull_of_lattice_points,
                        minkowski_sum)
from .cones import PolyCone, cone_contains
from .models import (NSClass, ToricModel, SurfaceModel, CutkoskyModel,
                     SplitRuledModel, BlowupPdModel, preset, resolve_model,
                     parse_model_text, nef_test, psef_test)
from .engine import (VolumeResult, ZariskiDecomposition, HhatVector, volume,
                     section_count, volume_by_counting, geometric_schedule,
                     zariski, nef_threshold, asymptotic_cohomology,
                     asymptotic_order, restricted_volume,
                     augmented_base_locus_probe, fujita_sweep,
                     ampleness_probe, relative_gap)
from .families import (MonomialIdeal, MonomialIdealFamily, OrdSample,
                       threshold_ideal, linear_threshold_family,
                       principal_family, table_family, family_from_toric,
                       verify_multiplicativity, asymptotic_ord0,
                       cones_estimate, regularity_scan, parse_family_text)
from .harness import (PropertyReport, check_homogeneity, check_log_concavity,
                      check_numerical_invariance, check_lipschitz,
                      chamber_fit, sample_big_class, sample_psef_class)

__version__ = "0.1.0"
