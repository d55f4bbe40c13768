"""Exact verification toolkit for expanding Lorenz maps."""
from .errors import LorenzLabError
from .numberfield import FieldContext, FieldElement, FloatField, bucket_key, field_new
from .sided import MINUS, PLAIN, PLUS, SidedPoint, metric_d
from .lorenzmap import LorenzMap, eval_sided, hitting_time_N, iterate_sided, laps, map_new, mod_one, orbit, preimages, two_slope
from .kneading import KneadingWord, admissibility_check, kneading_invariant, renorm_factorization
from .cycles import detect_nk_cycle, fixed_point_lemma_check, periodic_orbits, periodic_points
from .renorm import invariant_set_analysis, matching, renorm_from_invariant_set, search_renorms, validate_renorm
from .markov import build_markov, dynamics_verdict
from .rotation import rotation_analysis
from .config import map_from_config

__version__ = "0.1.0"
