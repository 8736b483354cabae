"""Exact computation toolkit for uniformity norms, linear-system complexity
invariants, and configuration counts over F_p^n."""

__version__ = "0.1.0"

from .algebra import (QuadraticForm, Subspace, SymmetricBilinearForm,
                      bilinear_of, in_span, rank, restrict, solve_affine)
from .budget import BudgetExceededError, check_budget, resolve_budget
from .counting import (CountReport, average_product_direct,
                       average_product_dual, count_solutions,
                       solution_probability)
from .domains import GroupDomain, domain
from .functions import (GroupFunction, IndicatorSet, balanced, convolve,
                        fourier, inverse_fourier, l2_norm, load_function,
                        save_function, u2_norm_fast, uk_norm, uk_power_exact)
from .hypergraphs import (TripartiteFunction, lift, octahedral_norm,
                          vertex_uniformity_counterexample)
from .systems import (INFINITE, LinearFormSystem, NormalFormWitness,
                      builtin_system, conjectured_true_complexity,
                      cs_complexity, is_s_complex_at, load_system,
                      maximal_square_independent_subsystem,
                      normal_form_check, power_independence, relation_space,
                      save_system, span_dimension, support)
from .verification import (Check, ExperimentReport, QuadraticFactor,
                           QuadraticMap, atom_distribution, factor_rank,
                           gauss_sum, gauss_sum_report, quadratic_zero_set,
                           verify_badex, verify_bound1, verify_completefactor,
                           verify_gvn, verify_projection_lemmas,
                           verify_pythagoras, verify_quadfactor)

__all__ = [name for name in dir() if not name.startswith("_")]
