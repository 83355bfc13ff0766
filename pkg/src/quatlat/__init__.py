"""quatlat: exact arithmetic of positive-definite quaternary quadratic forms.

Local densities by three independent engines, Eisenstein/cuspidal theta
decompositions, discriminant-form and cusp combinatorics, and search for
locally represented integers a form misses.
"""

from .density import (DensityValue, SolutionTypeCensus, census,
                      density_bruteforce, density_lower_bound,
                      density_recursive, density_unramified,
                      has_strong_local_solubility, is_locally_represented,
                      is_primitively_locally_represented, yang_good_density)
from .discgroup import (CuspDatum, DiscGroup, RescaledLattice, cusp_sum,
                        cusp_table, cusps, dcstar_coset, disc_group, h_of_p,
                        petersson_bound, rescaled_lattice, smith_normal_form,
                        subgroup_sizes)
from .eisenstein import (EisensteinCoefficient, LValue, cuspidal_coeff,
                         dirichlet_L2, eisenstein_coeff)
from .exceptional import (EscalatorDiagnosis, ExceptionRecord, ThresholdSet,
                          classify, escalator_check, explicit_cusp_coeff_bound,
                          search_exceptions, thresholds)
from .forms import (FormInvariants, QuadForm, ReducedForm, divisor_count,
                    format_form, invariants, kronecker_character, level,
                    discriminant, parse_form, parse_form_string, reduce_form,
                    represent_count, theta_coeffs)
from .padic import (AnisotropyReport, JordanSplitting, anisotropy_depth,
                    hasse_invariant, hilbert_symbol, is_anisotropic,
                    jordan_decompose)

__version__ = "0.1.0"
