"""Connected-component knots of the graphical lasso path, the sequential
statistics built on them, and tools for checking their null behaviour."""

from .correlation import CorrelationMatrix, OrderedEdges, correlation_matrix, ordered_edges
from .ingest import DataMatrix, augment_noise, load_csv, standardize, subsample_rows
from .knotpath import KnotSequence, components_at, knot_sequence, knot_sequence_bruteforce
from .slink import Dendrogram, dendrogram_from_knots, single_linkage
from .testing import TestReport, p_values, sequential_stop, test_statistics

__version__ = "0.1.0"
