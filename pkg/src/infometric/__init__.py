"""Distances, closures and signed measures from length functions on finite join-semilattices."""

from .boolean import (ExprSyntaxError, parse_bool_expr, shannon_dnf, to_dnf, truth_table, zeta,
                      zeta_by_terms, check_signed_measure)
from .closures import brute_force_closures, delta_closure, hat_of_tilde, nabla_closure, tiha
from .fixpoint import (NotConverged, descent_violations, ideal_length, is_fixed_point,
                       sigma_variant_bounds)
from .homs import (Category, Hom, auto_category, banach_mazur, brute_force_product_closure, compose,
                   derived_lengths, ell_prime, enumerate_homs, hom_ideal_length, hom_monoid,
                   pointwise_lengths, product_closure, product_flags, product_violations,
                   uniform_continuity_lift, validate_hom)
from .inequalities import check_inequalities, check_table, satisfies_delta, satisfies_nabla
from .instances import corpus, fix_bad, fix_p2, random_instance, random_monotone_length
from .io import dumps_instance, load_category, load_instance, parse_instance, serialize_instance
from .lengths import (DistanceTable, LengthFn, bar, counting_length, d_of, d_table, delta_fn,
                      distance_table, sigma_of, sigma_table, validate_length)
from .monoid import Monoid, free_semilattice, leq, validate_monoid
from .quotient import quotient
from .setmodel import (build_set_instance, oracle_d, oracle_sigma, oracle_tables, oracle_zeta,
                       random_set_instance)

__version__ = "0.1.0"
