"""Relative-state measures of correlation for bipartite quantum states."""
from .channels import (LocalOperation, apply_local_operation, closed_form_upsilon_dephase,
                       closed_form_upsilon_werner, depolarize, locc_increase_demo,
                       product_basis_decohere, werner_state, xi_state)
from .discord import (MeasurementBasis, discord_given_basis, discord_min,
                      upsilon_discord_implication_check)
from .errors import (DimensionError, NumericalConsistencyError, OracleScaleError,
                     RelstateError, ValidationError)
from .exterior import (elementary_symmetric, sum_wedge_norms_sq_over_tuples,
                       wedge_norm_sq_gram, wedge_norm_sq_levicivita)
from .hsbasis import (HermitianBasis, HSVector, devectorize, identity_first_basis,
                      rotation_of_unitary, schmidt_projector_basis, vectorize)
from .measures import (MeasureReport, concurrence_two_qubit, i_concurrence, lambda_tuple,
                       maclaurin_bound_check, mixed_invariants, pure_invariants,
                       pure_mixed_relation_check)
from .operators import (DensityOperator, PureBipartiteState, SchmidtDecomposition,
                        maximally_entangled, partial_trace, random_density,
                        random_local_operation, random_pure_state, random_unitary,
                        schmidt_decompose, tensor_product, von_neumann_entropy)
from .relmap import (CorrelationMatrix, apply_map_coords, build_correlation_matrix,
                     mixed_relative_state, pure_map_marginals, pure_relative_state)

__version__ = "0.1.0"
