"""Character-sum toolkit: Dirichlet characters, their partial sums, Gauss
sums, and the pretentious distance machinery, computed exactly at desk scale.
"""

from .characters import (
    CharacterMeta,
    DirichletCharacter,
    character_by_index,
    character_meta,
    characters_of_order,
    conductor,
    enumerate_characters,
    induce,
    multiply,
    primitivize,
    principal_character,
)
from .experiments import (
    MainTermComparison,
    ScanConfig,
    direction_experiment,
    emit,
    identity_suite,
    major_arc_compare,
    odd_order_report,
    parity_enrichment_report,
    product_structure_report,
    pv_scan,
)
from .pretentious import (
    DistanceReport,
    MultiplicativeFunction,
    NearestPretender,
    UnitDiscSequence,
    delta_g,
    distance_sq,
    distance_sq_general,
    l1_accelerated,
    l1_euler_product,
    l1_truncated,
    lambda_inequality_check,
    lemma32_average,
    mertens_product,
    nearest_character,
    ordered_distances,
    partial_sum_lower_bound_check,
    prime_power_inequality_check,
    root_min_term,
    triangle_defect,
)
from .residue import (
    EULER_GAMMA,
    FactoredModulus,
    SmoothSet,
    UnitValue,
    build_modulus,
    factorize,
    is_prime,
    mertens_progression_sum,
    mobius,
    primes_up_to,
    root_of_unity,
    smooth_numbers,
    totient,
)
from .sums import (
    ArcConfig,
    ArcPoint,
    CharSumProfile,
    GaussSumResult,
    bateman_chowla_check,
    bulk_m_values,
    character_values,
    classify_arc,
    direction_statistics,
    gauss_moment_identity,
    gauss_sum,
    gauss_sum_induced,
    interval_sum,
    kloosterman,
    l1_exact,
    polya_expansion,
    prefix_profile,
    twisted_gauss_check,
    twisted_harmonic_sum,
)

__version__ = "0.1.0"
