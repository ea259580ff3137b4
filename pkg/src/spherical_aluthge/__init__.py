"""Generalized spherical Aluthge transforms of commuting matrix tuples,
their Koszul spectral picture and joint spectral radius estimators."""

from .errors import (
    AluthgeError,
    ConvergenceFailure,
    GenericityFailure,
    NegativeEigenvalue,
    NegativeHomology,
    NonFinite,
    NonHermitian,
    NonSquare,
    NotCommuting,
    NumericalFailure,
    ShapeMismatch,
    SizeGuard,
)
from .koszul import (
    GridSlice,
    KoszulComplexRec,
    SpectrumReport,
    boundary_maps,
    grid_scan,
    hausdorff_distance,
    homology_dims,
    joint_eigenvalues,
    membership_report,
)
from .models import (
    ShiftSpec,
    TwoVarShiftSpec,
    corpus,
    ex14_pair,
    ex24_pair,
    ex41_matrix,
    polynomial_tuple,
    random_commuting,
    two_variable_shift,
    weighted_shift,
)
from .polar import (
    AluthgeOrbit,
    IterateTrace,
    SphericalPolar,
    aluthge,
    is_spherically_quasinormal,
    iterate,
    spherical_polar,
)
from .radius import (
    LadderTable,
    RadiusReport,
    ladder_diagnostics,
    radius_aluthge,
    radius_elementary,
    radius_joint_eig,
    radius_power,
    radius_report,
)
from .tuples import (
    CommutingTuple,
    PointCd,
    criss_cross_residual,
    explicit_power_tuple,
    power_norm,
    tuple_two_norm,
    validate_commuting,
    zero_tuple,
)

__version__ = "0.1.0"
