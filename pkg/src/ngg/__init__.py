"""Naming game in groups: consensus dynamics on complex networks.

A population of agents on a network repeatedly plays a group conversation
game: a seed node gathers up to N-1 neighbours, everyone speaks, the group
broadcasts a beta*N-word sample of what was said, and agents that hear a
word they already hold collapse their memory to it. The package provides
the three standard topology generators, the game engine (plus the
single-speaker and pairwise baselines), trace metrics, and an experiment
harness with a CLI front end.
"""

__version__ = "0.1.0"

from .engine import (GameParams, Group, PopulationState, RoundOutcome,
                     WeightTable, form_group, hearing_prob, is_converged,
                     minimal_ng_round, ngmh_round, node_weights, pair_weight,
                     run_group_round, run_to_convergence,
                     select_transmitting_words, speak, transmit_count,
                     transmit_word, word_weights)
from .errors import (ConfigError, ConnectivityFailureError, DisconnectedError,
                     EmptyTraceError, InvalidParamError, NggError, ParseError,
                     UnknownSourceError, ValidationError)
from .harness import (ExperimentConfig, RunArtifact, SweepSpec, derive_seed,
                      load_config, parse_config, run_experiment)
from .metrics import (AggregateStats, AvgTraceRecord, RunSummary, TraceRecord,
                      aggregate_summaries, average_runs, read_trace_columns,
                      read_trace_csv, snapshot, summarize, write_trace_csv)
from .netgen import (Network, NetworkSpec, NetworkStats, all_pairs_distances,
                     compute_stats, generate, is_connected, read_edge_list,
                     write_edge_list)

__all__ = [name for name in dir() if not name.startswith("_")]
