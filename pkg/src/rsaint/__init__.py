"""Counting, asymptotics and residue-class bias of RSA-integers pq, p < q <= r*p."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .analytic import (
    IdentityResidual,
    QuadratureSpec,
    check_derivative,
    em_tail,
    f_r,
    g_r,
    gr_derivative,
    landau_estimate,
    li,
    li_expansion,
    verify_summation_identities,
)
from .bias import BiasConstants, RaceRecord, dummit_ratio, euler_phi, race, rsa_bias_ratio
from .coefficients import AkPolynomial, BSequence, ak_eval, ak_polynomial, mu, mu_formula, nb_coefficients, series_eval, table1
from .counting import (
    ALL_PRIMES,
    ClassConstraint,
    CountReport,
    RatioParam,
    count_report,
    count_rsa_classes,
    count_rsa_decomposed,
    count_rsa_exact,
    count_semiprime_pairs,
)
from .errors import (
    CapacityError,
    ConfigurationError,
    ConvergenceError,
    DomainError,
    OutOfRangeError,
    RsaintError,
    UndefinedRatioError,
)
from .sieve import PrimeTables, build_tables, prime_count, prime_count_ap
