"""L-system structural complexity of bit sequences, with TE/LC baselines."""

__version__ = "0.1.0"

from .analysis import WindowPlan, WindowRecord, WindowSeries, analyze, flag_anomalies, segment
from .baselines import distinct_counts, entropy_fixed_length, linguistic_complexity, topological_entropy
from .complexity import ConvergenceParams, iterate, k0_of_window, radius, system_from_grammar
from .encoding import BitString, decode_lzw, encode_bin, encode_lzw, indices_to_bits, preprocess_text
from .grammar import build_tree, classify, depth_signature, grammar_stats, tree_to_bracketed

__all__ = [
    "BitString", "preprocess_text", "encode_bin", "encode_lzw", "decode_lzw", "indices_to_bits",
    "build_tree", "tree_to_bracketed", "depth_signature", "classify", "grammar_stats",
    "ConvergenceParams", "system_from_grammar", "iterate", "radius", "k0_of_window",
    "distinct_counts", "linguistic_complexity", "entropy_fixed_length", "topological_entropy",
    "WindowPlan", "WindowRecord", "WindowSeries", "segment", "analyze", "flag_anomalies",
]
