"""Applications and instance generators."""

from .generators import STRATEGIES, gen_random_kdistant
from .graphs import (WeightedCompleteGraph, check_cut_condition, gen_clique_function,
                     gen_cut_function)
from .matroid import (Matroid, MinRankInstance, build_min_rank, near_uniform,
                      solve_weighted_matroid_intersection, sparse_paving, uniform)
from .pq import gen_indicator, is_pq_submodular, pq_to_distant
