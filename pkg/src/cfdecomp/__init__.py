"""Rate-constrained decomposition of cell-free networks into subnetworks."""
from .baselines import ap_centric, beam_angular_distance, minimax_radius, user_centric
from .evaluate import (
    MetricsReport, RealizationMetrics, partition_metrics, per_user_rate, rate_lower_bound,
    user_rate, user_sinr,
)
from .graph import Partition, WeightMatrix, adjacency, cut, edge_weights, sumcut
from .meganode import MeganodeGraph, build_meganodes, lift_partition
from .montecarlo import Scenario, monte_carlo
from .netdecomp import DecompositionResult, compute_beta, rc_netdecomp, sumcut_budget
from .spectral import (
    bruteforce_mincut, kmeans, laplacian, mway_partition, smallest_eigenvectors,
)
from .topology import (
    GainMatrix, Region, Topology, cellfree_gains, dft_beam_gain, generate_singlecell_topology,
    generate_topology, singlecell_gains,
)

__version__ = "0.1.0"
