"""Exact decisions for symplectic embeddings of 4-dimensional ellipsoids via ECH capacities."""

from .errors import DecisionTooLargeError, InternalConsistencyError, InvalidSeriesError, ParameterError
from .sequences import (
    CapacitySequence,
    CountSequence,
    Ellipsoid,
    count_equal_axes,
    count_lattice_oracle,
    counts_from_capacities,
    gen_capacities,
)
from .genfunc import (
    EpsilonTable,
    IntPolynomial,
    RationalSeries,
    build_epsilon_table,
    coefficient_by_quadrature,
    counts_via_epsilon,
    difference_series,
    generating_function,
    series_coefficients,
    seven_term_recurrence,
)
from .decide import (
    DecisionOutcome,
    QuasiQuadratic,
    Verdict,
    build_quasi_quadratic,
    convolution_identity_check,
    decide_domination,
    embeds,
    verify_ball_filling,
)
from .capacity import CapacityResult, capacity_exact_probe, capacity_interval, capacity_table

__all__ = [
    "DecisionTooLargeError",
    "InternalConsistencyError",
    "InvalidSeriesError",
    "ParameterError",
    "CapacitySequence",
    "CountSequence",
    "Ellipsoid",
    "count_equal_axes",
    "count_lattice_oracle",
    "counts_from_capacities",
    "gen_capacities",
    "EpsilonTable",
    "IntPolynomial",
    "RationalSeries",
    "build_epsilon_table",
    "coefficient_by_quadrature",
    "counts_via_epsilon",
    "difference_series",
    "generating_function",
    "series_coefficients",
    "seven_term_recurrence",
    "DecisionOutcome",
    "QuasiQuadratic",
    "Verdict",
    "build_quasi_quadratic",
    "convolution_identity_check",
    "decide_domination",
    "embeds",
    "verify_ball_filling",
    "CapacityResult",
    "capacity_exact_probe",
    "capacity_interval",
    "capacity_table",
]

__version__ = "0.1.0"
