"""Realizing group actions on groups as automorphism groups of simplicial
complexes and minimal finite spaces."""

from .complexes import (
    ComplexError,
    DeltaComplex,
    SimplicialComplex,
    SimplicialMap,
    automorphism_group,
    barycentric_subdivision,
    covering_walk,
    glue,
)
from .finite_spaces import (
    FinitePoset,
    PosetError,
    beat_points,
    face_poset,
    glue_w_at_beat_points,
    is_minimal,
    join_with_w2_plus_point,
    non_hausdorff_join,
    order_complex,
    poset_automorphisms,
    w2_poset,
    wk_poset,
)
from .gadgets import band_complex, u_complex, w_complex
from .invariants import (
    AbelianGroup,
    SkeletonH1,
    actions_equivalent,
    collapse,
    edge_path_pi1,
    hom_count,
    homology,
    induced_h1_action,
    smith_normal_form,
)
from .presentations import (
    FiniteGroup,
    GroupAction,
    Presentation,
    PresentationError,
    SymmetricPresentation,
    equivariant_presentation_complex,
    presentation_complex,
    symmetrize,
)
from .rigidify import rigidify, rigidify_trivial

__version__ = "0.1.0"
