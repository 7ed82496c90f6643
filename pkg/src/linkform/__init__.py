"""Exact classification of Hermitian linking forms over Laurent polynomial rings.

The package is organized bottom-up:

``exactnum``    cyclotomic fields Q(zeta_N), roots of unity, certified signs
``laurent``     Laurent polynomials with the involution t -> t^{-1}
``plinalg``     matrices over the Laurent ring, Smith normal form, signatures
``forms``       linking forms and their decomposition into basic pairings
``signatures``  signature jumps, signature functions, Witt classes
``knots``       twisted Blanchfield forms of two-stranded torus knots and satellites
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    InvalidInput,
    LinkformError,
    MismatchReport,
    PreconditionError,
)
from .exactnum import FieldContext, FieldElement, RootOfUnity, conductor_for, field, real_sign  # noqa: E402
from .laurent import LaurentPoly, Mode, basic_poly, substitute  # noqa: E402
from .plinalg import LaurentMatrix, smith_normal_form  # noqa: E402
from .forms import (  # noqa: E402
    CyclicPairing,
    Decomposition,
    EForm,
    FForm,
    LinkingForm,
    classify,
    direct_sum,
    from_matrix,
    isometric,
    negate,
    substitute_form,
)
from .signatures import (  # noqa: E402
    WittClass,
    averaged_signature,
    crosscheck_matrix,
    is_metabolic,
    is_representable_complex,
    jumps,
    signature_function,
    witt_equivalent,
    witt_normal_form,
)
from .knots import (  # noqa: E402
    Abelian1,
    Cable2d,
    Metabelian,
    Neg,
    Sum,
    Torus2,
    blanchfield,
    classify_torus_metabelian,
    hkl_knot,
    hkl_sweep,
)
