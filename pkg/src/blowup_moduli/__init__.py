"""Exact ADHM configuration calculus on blown-up planes and the integer
Cech cohomology of the associated rank-stable moduli spaces.

The package has three layers:

* exact arithmetic (``scalars``, ``matrices``): Gaussian rationals, one
  quadratic extension, dense exact matrices, and integer Smith normal
  form;
* the configuration calculus (``monad``, ``gluing``): plane and blow-up
  ADHM data, degeneracy detection, canonical reduction, the gluing maps
  between charts and the retraction onto the gluing locus;
* the cohomology engine (``graded``, ``cover``): even-graded rings and
  ring maps, covers with signed restriction data, and the spectral
  sequence computing Betti tables over Z.
"""

from .cover import (
    BettiTable,
    CoverDescription,
    build_cover_charge1,
    build_cover_charge2_q2,
    closed_form_betti,
    compute_pages,
    decomposition_check_q2,
    simplex_assembly_betti,
)
from .gluing import (
    BlowupCenters,
    NeighborhoodSpec,
    boxplus0,
    boxplus0_inverse,
    boxplusL,
    boxplusL_inverse,
    classify_C_image,
    direct_image,
    homotopy,
    homotopy_H2,
    membership,
    pullback_blowup,
    translate_tau,
)
from .graded import (
    DirectSum,
    FreeRing,
    GradedRing,
    MonomialIdeal,
    RingMap,
    hilbert,
    kernel_hilbert,
    map_matrix,
    monomial_basis,
)
from .matrices import (
    IntMatrix,
    MatrixC,
    eig2,
    kernel_rank_over_Z,
    mat_arith,
    smith_normal_form,
)
from .monad import (
    Config0,
    Config1,
    DUPoint,
    MonadPolynomial,
    SpecialSubspace,
    canonical_reduction,
    group_act,
    integrable,
    monad_residual,
    nondegenerate,
    special_subspaces,
)
from .scalars import GaussianRational, QuadExtScalar, gaussian, parse_scalar

__version__ = "0.1.0"

__all__ = [
    "BettiTable",
    "BlowupCenters",
    "Config0",
    "Config1",
    "CoverDescription",
    "DUPoint",
    "DirectSum",
    "FreeRing",
    "GaussianRational",
    "GradedRing",
    "IntMatrix",
    "MatrixC",
    "MonadPolynomial",
    "MonomialIdeal",
    "NeighborhoodSpec",
    "QuadExtScalar",
    "RingMap",
    "SpecialSubspace",
    "boxplus0",
    "boxplus0_inverse",
    "boxplusL",
    "boxplusL_inverse",
    "build_cover_charge1",
    "build_cover_charge2_q2",
    "canonical_reduction",
    "classify_C_image",
    "closed_form_betti",
    "compute_pages",
    "decomposition_check_q2",
    "direct_image",
    "eig2",
    "gaussian",
    "group_act",
    "hilbert",
    "homotopy",
    "homotopy_H2",
    "integrable",
    "kernel_hilbert",
    "kernel_rank_over_Z",
    "map_matrix",
    "mat_arith",
    "membership",
    "monad_residual",
    "monomial_basis",
    "nondegenerate",
    "parse_scalar",
    "pullback_blowup",
    "simplex_assembly_betti",
    "smith_normal_form",
    "special_subspaces",
    "translate_tau",
]
