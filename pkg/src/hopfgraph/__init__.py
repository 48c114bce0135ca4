"""Hopf algebras of Feynman graphs and ribbon graphs, with exact renormalization."""
from .canon import canonical_key, graph_from_key, plain_key, ribbon_key
from .dsl import DSLError, parse_graph_source, to_dsl
from .fixtures import BUBBLE, CHAIN, FIXTURES, SUNSET_N, SUNSET_P, TADPOLE_P, TADPOLE_X, insertion_corpus
from .graph import (
    ExternalLeg,
    FeynmanGraph,
    GraphError,
    InternalEdge,
    PortRef,
    SubgraphSel,
    disjoint_union,
    is_one_particle_irreducible,
    loop_number,
    validate,
)
from .hopf import AlgebraElement, HopfAlgebra, TensorElement, antipode, coproduct, counit, grade, product
from .renorm import (
    FeynmanRules,
    LaurentSeries,
    Renormalizer,
    TruncationError,
    forest_formula,
    ms_project,
    renormalize,
    twisted_antipode,
)
from .ribbon import insertion_defect, is_gw_divergent, is_planar_regular, topology, trace_faces
from .surgery import (
    GluingData,
    Theory,
    contract,
    divergent_subgraphs,
    enumerate_gluings,
    insert,
    is_superficially_divergent,
)

__version__ = "0.1.0"
