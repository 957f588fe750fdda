"""Bratteli-Vershik dynamics and return-times invariants at desk scale.

The package has three layers:

* combinatorics: Bratteli diagrams, telescoping, orderings and the Vershik
  successor dynamics on truncated path spaces (``diagram``, ``ordering``,
  ``vershik``);
* certified analysis: exact real arithmetic, half-open interval unions on the
  circle, rotation return words and generated Boolean algebras (``reals``,
  ``circle``);
* invariants: return windows of the pointed Vershik system, telescoping
  conjugacy checks, and the density-set distinguishing pipeline
  (``invariants``).
"""

from .circle import (
    CircleIntervalSet,
    GapReport,
    IntervalAlgebra,
    ReturnAlgebraSpec,
    atom_split_report,
    density_set,
    generate_algebra,
    initial_interval,
    return_set,
    sturmian_word,
    syndetic_gap,
    window_density,
)
from .diagram import (
    BratteliDiagram,
    IsomorphismWitness,
    LevelData,
    LevelProvider,
    PeriodicProvider,
    SimpleWitness,
    StationaryProvider,
    are_isomorphic,
    composite_paths,
    diagram_from_json,
    diagram_to_dot,
    diagram_to_json,
    ensure_depth,
    incidence_matrix,
    incidence_product,
    is_simple_within,
    materialize,
    path_counts,
    random_simple_diagram,
    telescope,
    truncate,
)
from .errors import (
    DepthExhausted,
    NoSimplicityWitness,
    SizeGuardExceeded,
    UnresolvedComparison,
)
from .invariants import (
    ConjugacyReport,
    CylinderFamily,
    Distinguished,
    IndistinguishableAtDepth,
    ReductionParams,
    conjugacy_window_check,
    pipeline_report,
    reduction_pipeline,
    ret_code,
    telescope_path_bijection,
    vershik_return_window,
)
from .ordering import (
    MinMaxTree,
    NotProper,
    OrderedBratteliDiagram,
    ProperWitness,
    UndeterminedAtDepth,
    lex_telescope,
    min_max_trees,
    odometer,
    order_by_rule,
    properly_ordered_within,
    skau_order,
)
from .reals import (
    GOLDEN_MINUS_1,
    SQRT2_MINUS_1,
    CertifiedReal,
    Comparison,
    compare,
    certified_sign,
    qtree_real,
    qtree_reals,
    rational,
    sqrt,
    tree_path_labels,
)
from .vershik import (
    FIBER_MAX,
    FIBER_MIN,
    FiberMaximum,
    FiberMinimum,
    FinitePath,
    OrbitResult,
    PathFiber,
    enumerate_fiber,
    fiber_maximum,
    fiber_minimum,
    make_path,
    path_metric,
    path_range,
    vershik_orbit,
    vershik_predecessor,
    vershik_successor,
)

__version__ = "0.1.0"
