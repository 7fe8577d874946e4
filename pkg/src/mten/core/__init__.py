from .types import Bracket, EigenvalueBounds, IterationSettings, SpectralOutcome  # isort: skip
from .tensor import (
    DenseTensor,
    StructureReport,
    apply_contraction,
    build,
    entry,
    eval_form,
    hadamard_power,
    is_nonnegative,
    is_symmetric,
    is_z_tensor,
    ones_tensor,
    shift_combine,
    structure_report,
    symmetrize,
    unit_tensor,
)
from .spectral import (
    cw_bracket,
    largest_eigenvalue,
    perturb,
    real_eigenvalue_bounds,
    residual,
    row_sum_bounds,
)
from .reader import Storage, UnableToRead, exit_on_fail, read_tensor, write_tensor
