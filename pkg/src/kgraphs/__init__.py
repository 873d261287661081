"""Computing with higher-rank graphs (k-graphs).

A k-graph is presented by its 1-skeleton (a k-colored directed
multigraph) together with commuting squares pairing the two
factorizations of every 2-color element.  This package validates that
data, computes normal forms and factorizations, presents the fundamental
groupoid by generators and relations, decides word equality where the
bounded search succeeds, and extracts fundamental-group presentations
and abelian invariants.

Words and paths are everywhere written in composition order:
in `e1 e2 ... en`, s(e_i) = r(e_{i+1}).
"""

from .errors import (
    BadColor,
    DegreeTooLarge,
    DuplicateName,
    InvalidKGraph,
    KGraphError,
    MalformedSquare,
    NotComposable,
    NotOrthogonal,
    ParseError,
    ReplayError,
    RequiresValidation,
    SameColor,
    SwapUndefined,
    UnknownEdge,
    UnknownVertex,
)
from .skeleton import (
    Edge,
    EdgePath,
    Skeleton,
    add_degrees,
    basis_degree,
    compose_path,
    degree_leq,
    degrees_up_to,
    path_degree,
    zero_degree,
)
from .kgraph import (
    BrokenInvolution,
    CubeInconsistency,
    DuplicateSquare,
    KGraph,
    MissingSquare,
    NormalForm,
    Square,
    ValidationReport,
    canonical_relations,
    component_1graph,
    compose,
    elements_up_to,
    factorize,
    hom,
    involution_closure,
    make_kgraph,
    normalize,
    validate,
    vertex_element,
)
from .groupoid import (
    GWord,
    SignedEdge,
    canonical_functor,
    empty_word,
    free_reduce,
    gword_degree,
    is_local_move,
    reduction_chain,
    replay_derivation,
    square_neighbors,
    word_compose,
    word_from_edges,
    word_inverse,
)
from .equality import (
    COUNTEREXAMPLE,
    HOLDS_WITHIN_BOUND,
    INCONCLUSIVE,
    INJECTIVE_WITHIN_BOUND,
    NON_INJECTIVE,
    Distinct,
    Equal,
    EqualityEngine,
    InjectivityReport,
    LambdaBarReport,
    PairVerdict,
    SearchBudget,
    Unknown,
    equal_in_g,
    injectivity_report,
    lambda_bar_check,
)
from .pi1 import (
    AbelianInvariants,
    GroupPresentation,
    SpanningTree,
    abelian_image,
    abelianization,
    exponent_matrix,
    group_presentation,
    in_row_space,
    smith_normal_form,
    smith_with_transforms,
    spanning_tree,
    tietze_simplify,
)
from .kgfile import (
    export_complex,
    export_complex_json,
    format_kgraph,
    format_word,
    parse,
    parse_kgraph,
    parse_word,
)

__version__ = "0.1.0"
