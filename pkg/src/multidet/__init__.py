"""multidet: Picard groupoids, cubical complexes, and determinant data
on finite triangulated-category presentations, over exact integer
arithmetic."""

from .groups import (
    FGAbelianGroup,
    GroupElement,
    IntMatrix,
    ChainComplexZ,
    smith_normal_form,
    homology_at,
    group_hom_check,
    Z,
    Zmod,
    ZERO_GROUP,
)
from .picard import (
    PicardPresentation,
    PicardFunctorData,
    validate_picard,
    commutassoc,
    k_invariant,
    check_multiexact_picard_functor,
    product_picard,
)
from .cubes import (
    Cube,
    validate_cube,
    face,
    degeneracy,
    add_cubes,
    zero_cube,
    check_cubical_relations,
    face_additivity_check,
    check_higher_coherence,
)
from .qcomplex import (
    QComplex,
    enumerate_cubes,
    boundary_matrix,
    q_homology,
    sampled_boundary_square_check,
)
from .trianglecat import (
    TriangPresentation,
    TriFunctorData,
    validate_presentation,
    check_verdier,
    octahedron_to_2cube,
    check_multiexact_tri_functor,
    check_functor_verdier_admission,
    point_presentation,
    graded_lines,
    tensor_lines,
)
from .determinant import (
    DeterminantData,
    DetMorphismData,
    validate_determinant,
    validate_multideterminant,
    validate_cubical_determinant,
    cross_check_definitions,
    sum_determinants,
    compose_with_multiexact,
    check_det_morphism,
    check_universal_factorization,
    euler_determinant,
    random_determinant,
)
from .catring import (
    CategoricalRingData,
    K0RingPresentation,
    validate_categorical_ring,
    pi0_ring,
    pi1_bimodule,
    compute_k0_ring,
)
from .report import Report

__version__ = "0.1.0"
