"""Extreme-eigenvalue distributions of the beta-Jacobi ensemble.

Exact recursive computation of the probability that the whole spectrum
lies in [0, s], in three structured parameter regimes, together with
direct largest/smallest-eigenvalue densities, the circular-ensemble gap
probability for integer repulsion, a brute-force quadrature oracle and a
bidiagonal matrix-model Monte Carlo harness.
"""

from .circular import (CircularGapForm, MuSeries, circ_gap, circ_gap_even_beta,
                       circ_gap_integer_beta)
from .errors import (GammaPairingError, NumericError, ParameterError,
                     ResonanceError, VerificationError)
from .poly import Poly, RationalFunction
from .recurrence import HypPair, RecurrenceCoeffs, coeffs, sweep_hyp, sweep_poly, sweep_series
from .scalars import GaussianRational, Rat, rat, rat_str
from .series import LambdaSeries
from .solvers import (DensityHypForm, DensityPolyForm, EdgeSeriesForm,
                      FrobeniusSolution, HypGapForm, JacobiParams, PolyGapForm,
                      evaluate, frobenius_solution, gap_auto, gap_case1,
                      gap_case2, gap_case3, gap_case3_frobenius,
                      gap_case3_nested, pmax_auto, pmax_case1, pmax_case2,
                      pmin_density, pmin_form)
from .special import (HypParams, beta_value, beta_value_exact_int, gauss_2f1,
                      gauss_2f1_deriv, ln_gamma, selberg_exact, selberg_log,
                      selberg_ratio_exact)
from .quadrature import circular_gap_quad, quadrature_gap
from .verification import (CSModelParams, EmpiricalCDF, empirical_gap,
                           ks_distance, mc_gap_check, sample_cs_spectrum,
                           sample_lambda_max)

__version__ = "0.1.0"
