"""Complex Gamma, L-function evaluation, zero counting and majorant checks."""

from lfkit.analytic.gamma import GammaPoleError, complex_gamma, complex_loggamma
from lfkit.analytic.lfunctions import (
    DirichletLFunction,
    EigenformFunction,
    EvaluablePoint,
    FunctionEvaluable,
    LFunction,
    LiftedFunction,
    PoleError,
    WindowError,
    ZetaFunction,
    builtin_function,
    completed,
    evaluate,
    fe_residual,
    function_for_source,
)
from lfkit.analytic.majorant import (
    Grid,
    almost_period_find,
    domination_witness,
    euler_deflated_zeta,
    majorant_check,
    pl_propagation_check,
    sup_difference,
)
from lfkit.analytic.zeros import (
    ContourError,
    ZeroCountResult,
    count_zeros,
    density_probe,
    locate_zeros,
    smooth_zero_count,
    zero_set_compare,
)
