"""Exact symbolic calculus on Carnot groups.

Stratified Lie algebras with their polynomial group law, the weight-graded
de Rham multicomplex, Rumin and spectral complexes, Pansu derivatives and
pullbacks of polynomial contact maps, and central-extension lifts -- all over
exact rational arithmetic.
"""

from .algebra import (
    GradedHom,
    StratifiedAlgebra,
    bch_product,
    dilation_apply,
    frame_apply,
    group_product,
    hom_check,
    left_invariant_frame,
    validate_algebra,
)
from .extensions import (
    CentralExtension,
    LiftedHom,
    central_extend,
    coboundary_solve,
    cocycle_check,
    lift_homomorphism,
    lift_pansu_workflow,
)
from .fiber import (
    FiberForm,
    box0,
    d0,
    d0_pinv,
    delta0,
    hodge_decompose,
    hodge_star,
    pi0,
)
from .forms import (
    PolyForm,
    d_component,
    d_components,
    enumerate_truncation,
    exterior_derivative,
    multicomplex_check,
    weight_split_d,
)
from .pansu import (
    ContactViolation,
    PansuDerivativeField,
    PolyMap,
    adapted_jacobian,
    commutativity_check,
    contact_check,
    heisenberg_lift,
    pansu_derivative,
    pansu_hom_check,
    pansu_pullback,
    pullback_commutators,
)
from .poly import Poly, PolyRing
from .scalars import Rational, rat
from .spectral import CosetForm, SpectralEngine, TruncationError, WitnessChain

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
