"""Variational quantum state diagonalization on a dense simulator.

Train a parameterized unitary U so that U rho U† is diagonal, read the
eigenvalues of rho off the diagonal by sampling, and prepare the matching
eigenvectors.  Includes the diagonalization test circuits (swap / DIP /
PDIP), layered and free-structure ansätze, classical optimizers, Heisenberg
chain workloads, and a phase-estimation PCA baseline.
"""

from .states import (
    Observable,
    QuantumState,
    SpectralDecomposition,
    apply_unitary,
    dephase_global,
    dephase_local,
    exact_eigendecomposition,
    hs_distance,
    partial_trace,
    purity,
    von_neumann_entropy,
)
from .circuits import CircuitEstimate, ShotPlan, destructive_swap_test, dip_test, pdip_test
from .ansatz import (
    PARAMS_PER_GATE,
    ParamAnsatz,
    build_layered,
    synthesize,
    two_qubit_gate,
)
from .cost import (
    CostEvaluator,
    CostReport,
    ErrorMetrics,
    beta,
    cost,
    cost_c1,
    cost_c2,
    eigenvalue_error,
    eigenvector_error,
    error_metrics,
)
from .optimize import (
    AnnealSchedule,
    OptimizationTrace,
    OptimizerConfig,
    annealed_structure_search,
    fd_gradient_minimize,
    layer_growth_train,
    minimize,
    nelder_mead_minimize,
    powell_minimize,
)
from .readout import (
    EigenEstimate,
    infer_eigenvalues,
    prepare_eigenvector,
    resolve_observable,
    threshold,
)
from .models import (
    SpinChainSpec,
    classically_correlated_state,
    ground_state,
    heisenberg_hamiltonian,
    product_state,
    reduced_ground_state,
    total_sz,
)
from .qpca import NoiseModel, QpcaConfig, controlled_exp_swap, exp_swap, qpca_one_bit

__version__ = "0.1.0"
