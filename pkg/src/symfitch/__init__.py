"""Recognition and construction of symmetrized Fitch maps."""

from .compat import (
    CompatibilityVerdict,
    RecognitionResult,
    SplitSystem,
    build_explaining_tree,
    exact_compatibility,
    pairwise_quick_reject,
    recognize,
    tree_from_splits,
)
from .errors import NotFitchError, PreconditionError, ResourceLimitError, SymFitchError, ValidationError
from .model import (
    LabeledTree,
    Quartet,
    Subsplit,
    SymmetricMap,
    Tree,
    displays,
    explain,
    prune,
    restrict,
    suppress_degree_two,
    validate_map,
)
from .mono import (
    ColorGraph,
    graph_representation,
    has_k1_plus_k2,
    is_restricted_fitch,
    least_resolved_trees,
    multipartite_parts,
)
from .neighborhoods import (
    NeighborhoodSystem,
    SubsplitSystem,
    complementary_neighborhood,
    full_subsplit_systems,
    is_partition,
    neighborhood_system,
    subsplit_system,
)

__version__ = "0.1.0"
