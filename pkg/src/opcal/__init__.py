"""Exact finite computations with colored operads.

Collections (symmetric sequences) over finite sets or rational vector
spaces, their composition product, operads as monoids for it, algebras,
endomorphism operads and change of colors.
"""

from .base_cat import FINSET, VECTQ, BaseMorphism, BaseObject, DescentError, finset, vectq
from .collection import Collection, CollectionMap, ColorFamily, ColorMap, pullback, pushforward_mono
from .composition import coherence_isos, compose, lax_pullback_comparison, pushforward_monoidal_comparison
from .groupoids import CompositionIndex, Corolla
from .operads import (
    Operad,
    OperadMap,
    associative_operad,
    check_operad,
    check_operad_map,
    commutative_operad,
    enumerate_operad_maps,
    free_operad,
    pullback_operad,
    pushforward_operad,
)
from .algebras import (
    AlgebraStructure,
    adjunction_bijection,
    check_algebra,
    enumerate_algebras,
    free_algebra,
    nullary_algebra,
    restrict_algebra,
)
from .endomorphism import (
    algebra_map_correspondence,
    canonical_nullary_map,
    cartesian_operad,
    endomorphism_operad,
    pullback_end_comparison,
)

__all__ = [
    "FINSET", "VECTQ", "BaseMorphism", "BaseObject", "DescentError", "finset", "vectq",
    "Collection", "CollectionMap", "ColorFamily", "ColorMap", "pullback", "pushforward_mono",
    "coherence_isos", "compose", "lax_pullback_comparison", "pushforward_monoidal_comparison",
    "CompositionIndex", "Corolla",
    "Operad", "OperadMap", "associative_operad", "check_operad", "check_operad_map",
    "commutative_operad", "enumerate_operad_maps", "free_operad", "pullback_operad",
    "pushforward_operad",
    "AlgebraStructure", "adjunction_bijection", "check_algebra", "enumerate_algebras",
    "free_algebra", "nullary_algebra", "restrict_algebra",
    "algebra_map_correspondence", "canonical_nullary_map", "cartesian_operad",
    "endomorphism_operad", "pullback_end_comparison",
]
