"""Complex-of-boxes resolutions of monomial OI-ideals and free OI-complexes."""

__version__ = "0.1.0"

from .oi_core import (  # noqa: E402
    NOT_FREE,
    FreeOIModuleShape,
    InsufficientDataError,
    OIMorphism,
    WidthCapError,
    WidthMismatchError,
    compose,
    enumerate_morphisms,
    free_rank_at_width,
    shape_from_rank_sequence,
    width_cap,
)
from .poly_oi import AlgebraSignature, Monomial, Poly, act, hilbert_numerator  # noqa: E402
from .oi_ideal import (  # noqa: E402
    MonomialOIIdeal,
    TuplePoset,
    expand,
    is_ferrers,
    is_order_ideal,
    is_squarefree_strongly_stable,
    is_strongly_stable,
    propagate_order_ideal,
)
from .box_complex import BoxComplex, BoxFace, boundary, build  # noqa: E402
from .resolution import (  # noqa: E402
    GradedFreeComplex,
    betti_table,
    cellular_resolution,
    verify_d_squared,
    verify_exact_up_to,
    verify_minimal_width,
)
from .oi_family import (  # noqa: E402
    FlatOIFamily,
    classify_level,
    generator_widths,
    induced_map,
    verify_functor_laws,
    verify_naturality,
)
from .oi_free_complex import (  # noqa: E402
    FreeOIComplex,
    evaluate_at_width,
    is_minimal_map,
    is_widthwise_minimal_map,
    minimize,
    split_trivial_summand,
)

__all__ = [
    "# noqa: E402",
    "NOT_FREE",
    "FreeOIModuleShape",
    "InsufficientDataError",
    "OIMorphism",
    "WidthCapError",
    "WidthMismatchError",
    "compose",
    "enumerate_morphisms",
    "free_rank_at_width",
    "shape_from_rank_sequence",
    "width_cap",
    "# noqa: E402",
    "MonomialOIIdeal",
    "TuplePoset",
    "expand",
    "is_ferrers",
    "is_order_ideal",
    "is_squarefree_strongly_stable",
    "is_strongly_stable",
    "propagate_order_ideal",
    "# noqa: E402",
    "GradedFreeComplex",
    "betti_table",
    "cellular_resolution",
    "verify_d_squared",
    "verify_exact_up_to",
    "verify_minimal_width",
    "# noqa: E402",
    "FlatOIFamily",
    "classify_level",
    "generator_widths",
    "induced_map",
    "verify_functor_laws",
    "verify_naturality",
    "# noqa: E402",
    "FreeOIComplex",
    "evaluate_at_width",
    "is_minimal_map",
    "is_widthwise_minimal_map",
    "minimize",
    "split_trivial_summand",
    "AlgebraSignature",
    "Monomial",
    "Poly",
    "act",
    "hilbert_numerator",
    "BoxComplex",
    "BoxFace",
    "boundary",
    "build",
]
