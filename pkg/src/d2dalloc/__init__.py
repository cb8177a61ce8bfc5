"""D2D underlay resource allocation with partial CSI: discrete-time simulator
and stochastic-stability analysis toolkit."""

from .allocator import AllocationProfile, alloc_bs, allocation_test, rr_sequence
from .analysis import (BruteForceResult, ExactDtmc, ResistanceGraph, SystemState,
                       UtilityMap, brute_force_optimum, build_exact_dtmc,
                       class_graph, edge_resistance, min_resistance_tree,
                       stationary_distribution, stochastic_potentials,
                       stochastically_stable_set)
from .channel import (ChannelConfig, LinkGainTable, PowerConfig, cu_sinr,
                      d2d_rate, db_to_linear, effective_gain, linear_to_db,
                      lte_pathloss_db, noise_power_dbm, pathloss_gain,
                      sample_fast_fading, sample_shadowing)
from .config import ScenarioConfig, load_config, preset
from .envs import FadingEnv, StaticRateEnv, pathloss_gain_table
from .learning import (LearningParams, Mood, PlayerState, frame_utility,
                       num_lists, rank_list, run_frame, select_list,
                       unrank_list, update_mood)
from .sim import run_experiment, export_csv, parse_csv
from .threshold import ThresholdState, mc_update, record_first_frame, superframe_utility
from .topology import (MobilityState, Position, Topology, concept_topology,
                       mobility_step, place_receiver_near, place_uniform_disk,
                       random_topology)

__version__ = "0.1.0"
