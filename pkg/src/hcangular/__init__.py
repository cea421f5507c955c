"""Angular integrals over the orthogonal and symplectic groups: determinantal
partition functions, a (2R)!-dimensional transfer-matrix engine for resolvent
correlators, and the Monte Carlo / Wick oracles that certify them."""

from .groups import (
    COINCIDENCE_RTOL,
    EmbeddedCartan,
    GroupFamily,
    GroupSpectrum,
    SpectrumError,
    embed,
    flip_matrix,
    generalized_vandermonde,
    o_even,
    o_odd,
    quaternion_to_complex,
    sp,
    symplectic_flip,
    unitary,
    weyl_elements,
)
from .tetrads import (
    R_MAX_DEFAULT,
    Tetrad,
    TetradClass,
    canonicalize,
    cycle_pairs,
    enumerate_classes,
    perm_to_tetrad,
    tetrad_to_perm,
)
from .closedform import (
    PartitionResult,
    c_constant,
    haar_normalized_constant,
    jacobian,
    k_constant,
    partition,
    partition_weyl,
    selberg_laguerre,
    triangular_gaussian_volume,
)
from .recursion import (
    POLE_TOL,
    SingularityError,
    SpectralPoints,
    commutation_residual,
    correlator_vector,
    initial_condition,
    mdet,
    mdet_apply,
    recursion_matrix_bar,
    recursion_matrix_unitary,
    rescale_to_half_coupling,
    triangular_expectation,
)
from .oracles import (
    McEstimate,
    SHARD_SIZE,
    TriangularSample,
    basis_eval,
    basis_eval_signed,
    haar_orthogonal,
    haar_symplectic,
    mc_group_correlator,
    mc_group_partition,
    mc_triangular_expectation,
    philox_generator,
    sample_triangular,
    triangular_propagator,
    twist_cycle_signs,
    wick_enumerate,
)

__version__ = "0.1.0"
