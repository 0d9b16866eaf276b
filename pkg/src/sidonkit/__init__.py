"""Exact additive/multiplicative energies, B_h[g] sets and their extraction."""

from ._accel import available_backends, get_backend, set_backend, use_backend
from .core import (
    ADD,
    MUL,
    CapacityError,
    DomainError,
    GroundSet,
    Mode,
    ParseError,
    RationalSet,
    RegimeError,
    SidonError,
    parse_rational_set,
    parse_set,
    serialize_rational_set,
    serialize_set,
)
from .representation import (
    energy,
    iterated_productset,
    iterated_sumset,
    mixed_additive_count,
    rep_profile,
    sup_rep,
)
from .sidon import SidonCertificate, is_Bhg, max_sidon_subset_exact, measure_g, unordered_rep_count
from .sigma import ExactMatrix, classify_tuple, linear_system_count, matrix_rank, sigma_count, sigma_profile
from .extract import (
    SamplingParams,
    enumerate_violations,
    expected_count_report,
    extract_sidon,
    low_energy_decomposition,
    sample_subset,
    theorem_pipeline,
)
from .incidence import (
    IncidenceInstance,
    MobiusCoeffs,
    hyperbolic_count_brute,
    hyperbolic_count_fast,
    mobius_apply,
    theorem_ratio,
    weighted_mobius_incidences,
)
from .constructions import (
    build_balog_wooley,
    build_incidence_lb_one,
    build_incidence_lb_two,
    build_power_sumset,
    build_prime_product,
    first_primes,
    has_even_cycle,
    multiplication_graph,
    turan_bound_holds,
)

__version__ = "0.1.0"
