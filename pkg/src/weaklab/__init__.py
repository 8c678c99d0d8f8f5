"""weaklab: a grid laboratory for weighted restricted weak-type inequalities.

Modules
-------
grid            discrete domains, dyadic cube families, integration
lorentz         Lorentz quasi-norms and weak-type functionals
maximal         maximal operators and the Rubio de Francia iteration
weights         weight-class characteristics and generators
extrapolation   executable proof pipelines and structural checks
applications    the bi-sublinear operators N, T, N* and their bounds
cli             batch experiment runner with CSV/JSON reports
"""

from .grid import (ConfigurationError, ConstantEstimate, CubeFamily,
                   DyadicCube, Grid, GridFunction, GridMismatchError, Weight,
                   cube_family, ess_bounds, integrate, level_measure,
                   load_grid_function, make_grid, ones, save_grid_function)
from .kernels import BACKEND
from .lorentz import (LorentzIndex, dyadic_level_sup, lorentz_norm,
                      norm_equivalence_check, restricted_cube_norm, weak_norm)
from .maximal import (MaximalConfig, local_global_split_check, maximal,
                      multilinear_maximal, rdf_iterate)
from .weights import (ExponentSystem, WeightVector, a1_constant, ainf_constant,
                      apr_constant, apr_r1_constant, apvec_constant,
                      hat_ar_construct, hat_arq_construct, make_weight_vector,
                      power_weight, weight_generators)
from .extrapolation import (OffDiagExponents, build_H, construct_v,
                            endpoint_verify, estimate_E, estimate_F,
                            gamma_optimize, impli_a_check, impli_b_construct,
                            offdiag_verify, sawyer_ratio, split_EF)
from .applications import (hypothesis_check, layer_decompose, nstar_growth,
                           operator_N, operator_Nstar, operator_T,
                           corollary_endpoint_check, series_sum_check,
                           theorem41_bound_check)

__version__ = "0.1.0"
