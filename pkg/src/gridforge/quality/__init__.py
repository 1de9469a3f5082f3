"""Grid quality metrics and analytic benchmark problems."""

from gridforge.quality.benchmarks import (
    BenchmarkProblem,
    BenchmarkReport,
    BenchmarkSolution,
    FluxAlignedProblem,
    LocalizedProblem,
    Problem,
    SweepReport,
    analytic_solution,
    boundary_extrapolation,
    chi_field,
    convergence_order,
    problem_from_name,
    relative_l2_error,
    rhs_for,
    run_benchmark_sweep,
    solve_benchmark,
)
from gridforge.quality.metrics import (
    QualityReport,
    boundary_area,
    boundary_orthogonality,
    cell_lengths,
    domain_area,
    format_quality_table,
    grid_metric,
    non_orthogonality,
    quality_report,
    size_ratios,
)

__all__ = [
    "BenchmarkProblem",
    "BenchmarkReport",
    "BenchmarkSolution",
    "FluxAlignedProblem",
    "LocalizedProblem",
    "Problem",
    "QualityReport",
    "SweepReport",
    "analytic_solution",
    "boundary_area",
    "boundary_extrapolation",
    "boundary_orthogonality",
    "cell_lengths",
    "chi_field",
    "convergence_order",
    "domain_area",
    "format_quality_table",
    "grid_metric",
    "non_orthogonality",
    "problem_from_name",
    "quality_report",
    "relative_l2_error",
    "rhs_for",
    "run_benchmark_sweep",
    "size_ratios",
    "solve_benchmark",
]
