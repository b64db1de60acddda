"""Primitive ideal strata of self-similar k-graph algebras, computed exactly.

Build a finite k-colored graph with factorization squares, attach a
finite group acting self-similarly, and this package enumerates the
maximal tails, their periodicity lattices and characters, answers
Jacobson-closure membership questions by the four-case truth table, and
cross-checks everything against exact finite truncations of the orbit
representations.
"""

from .action import (
    CyclineTriple,
    FiniteGroup,
    PseudoFreeReport,
    SelfSimilarAction,
    restrict_action,
    trivial_action,
    trivial_group,
    validate_action,
)
from .errors import KGraphError
from .infinite import (
    InfinitePath,
    canonicalize,
    cofinal_infinite_path,
    equal as infinite_paths_equal,
    from_cycle,
    initial_part,
    make_infinite,
    prepend,
    segment,
    shift,
)
from .kgraph import Edge, KGraph, Path, Skeleton, validate_kgraph
from .lattice import (
    CharacterSet,
    ExtendedCharacter,
    PeriodicityLattice,
    RationalCharacter,
    add_characters,
    closure_contains,
    evaluate,
    evaluate_extended,
    extend_character,
    finite_set,
    full_set,
    per_lattice,
    subgroup_set,
    trivial_character,
)
from .primspace import (
    ClosureQuery,
    ClosureVerdict,
    HypothesesReport,
    IdealPresentation,
    PrimPoint,
    PrimSpace,
    PrimStratum,
    SpecializationPreorder,
    check_hypotheses,
    enumerate_prim,
    evaluate_closure,
)
from .repmat import (
    ExactMatrix,
    OrbitBasis,
    RelationsReport,
    TruncatedRepresentation,
    build_orbit,
)
from .tails import (
    MaximalTail,
    TailClass,
    classify_tail,
    cycles_without_entrance,
    hereditary_saturated_closure,
    maximal_tails,
    periodicity_core,
    restrict_to_tail,
    restrict_to_vertices,
    strongly_connected,
)
from .textio import (
    GraphDocument,
    build_action,
    build_graph,
    build_group,
    load,
    parse,
    serialize,
)

__version__ = "0.1.0"
