"""Exact Gauss-Kuzmin frequencies of continued-fraction digit strings,
permutation-symmetry detection, and the symmetry census."""

from .census import (
    CensusRow,
    ExceptionalSet,
    census,
    default_report_points,
    list_exceptional,
    ratio_series,
    render_census_csv,
    render_census_jsonl,
    resolve_workers,
)
from .core import (
    ConvergentMatrix,
    DigitString,
    FundamentalInterval,
    canonicalize,
    convergent_matrix,
    digits_of_rational,
    digits_of_real,
    evaluate,
    extend_matrix,
    fundamental_interval,
)
from .errors import CfsymError, DomainError, QuadratureError, SizeError
from .families import (
    FamilySpec,
    a_plus,
    concluding_family,
    is_s_stable,
    is_stable,
    s_stable_a_plus_candidate,
    stable_family,
)
from .gkmeasure import (
    CharacteristicNumber,
    LogRatio,
    chi,
    gk_measure_of_interval,
    measure_equal,
    pgk_exact,
    pgk_float,
)
from .measurelab import (
    GAUSS_KUZMIN,
    Density,
    MonteCarloResult,
    RatioTrace,
    epsilon_max,
    lemma5_trace,
    measure_of,
    montecarlo_frequency,
    perturbed_density,
    symmetry_defect,
    tabulated_density,
    total_mass,
)
from .symmetry import (
    SymmetryReport,
    distinct_permutations,
    epsilon_defect,
    is_exceptional_set,
    nontrivial_symmetries,
    nu,
    scan_length3,
    symmetry_report,
)

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
