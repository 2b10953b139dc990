"""Exact q-series toolkit for 2-divisibility of l-regular partition counts.

Modules:
  qseries     truncated power series over exact integers or Z/2^k
  partitions  b_l series, counting oracle, identity catalog, claims
  etaform     eta-quotient weight/character/cusp metadata and bounds
  radu        finite-check congruence certificates
  hecke       T_p, self-similarity checks, iterated families
  lacunarity  coefficient-density curves
  cli         the `lregular` command
"""

from . import arith, etaform, hecke, lacunarity, partitions, qseries, radu, reports
from .etaform import (
    EtaQuotient,
    check_modularity,
    cotron_criterion,
    cusp_order,
    index_gamma0,
    is_holomorphic,
    kronecker,
    sturm_bound,
)
from .hecke import HeckeContext, gamma_of, hecke_tp, iterated_family, self_similarity_check
from .lacunarity import DensityPoint, density, density_curve, theta_product_parity
from .partitions import (
    CongruenceClaim,
    IDENTITIES,
    b_enumerate,
    claim_check,
    regular_series,
    verify_identity,
)
from .qseries import (
    EXACT,
    MOD2,
    CoefficientRing,
    QuadraticForm,
    Series,
    dissect,
    eta_factor,
    inflate,
    inverse,
    mul,
    shift,
    theta_series,
)
from .radu import RaduTuple, coset_reps, delta_star_check, nu_bound, p_mr, p_set, p_star, squares_mod, verify

__version__ = "0.1.0"
