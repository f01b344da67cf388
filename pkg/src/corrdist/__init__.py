"""Correlation distance, mutual information and their tight lower bounds.

Classical two-valued variables and two-qubit states share one toolkit:

* :mod:`corrdist.prob_core` -- entropies, distances and 2x2 table parameters;
* :mod:`corrdist.qubit_core` -- two-qubit states, Fano form, entanglement
  criteria, twirling and projective measurements;
* :mod:`corrdist.bounds` -- Pinsker, classical and qubit lower bounds;
* :mod:`corrdist.bell` -- CHSH bounds for outcome-dependent hidden variables;
* :mod:`corrdist.verify` -- samplers, oracles, sweeps and figure data.
"""

from .bell import (
    LhvModel,
    chsh_value,
    model_analysis,
    relaxed_chsh_bound,
    saturating_model,
    simulation_resources,
)
from .bounds import (
    c0,
    classical_tight_bound,
    compute_c0,
    entropy_curves,
    max_correlation_distance,
    pinsker_bound,
    quantum_tight_bound,
)
from .errors import ConsistencyError, DomainError, UnphysicalError, ValidationError
from .prob_core import (
    BinaryParams,
    binary_joint_from_params,
    classical_correlation_distance,
    classical_mutual_information,
    classical_witness_f,
    params_from_binary,
    relative_entropy,
    shannon_entropy,
    variational_distance,
)
from .qubit_core import (
    FanoForm,
    ProjectivePair,
    conjecture_shift,
    entanglement_report,
    fano_compose,
    fano_decompose,
    make_state,
    measure_projective,
    quantum_correlation_distance,
    quantum_mutual_information,
    singular_triple,
    twirl,
    von_neumann_entropy,
)

__version__ = "0.1.0"
