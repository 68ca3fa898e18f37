"""Exact lumping of mass-action reaction networks.

Find species equivalences by partition refinement (forward: block sums
evolve autonomously; backward: equally initialized equivalent species
stay equal forever), build the quotient networks they induce, and verify
symbolically and numerically that the reductions preserve the ODE
semantics.
"""

from .core import (
    CRN,
    ChoiceFunction,
    CRNError,
    IntegrationError,
    Multiset,
    NotBisimulationError,
    NotLumpableError,
    ParseError,
    Partition,
    PartitionError,
    Reaction,
    Species,
    choice_function,
    lift_multiset,
    make_crn,
    quotient_species,
    validate,
)
from .rates import (
    ReactantClass,
    candidate_partners,
    cumulative_flux_rate,
    flux_rate,
    production_rate,
    production_rate_to_block,
    reactant_classes,
    reaction_rate,
)
from .bisim import (
    BisimMode,
    RefinementTrace,
    backward_equivalent,
    find_counterexample,
    forward_equivalent,
    is_bisimulation,
    mode_equivalent,
    quotient,
    refine,
)
from .reduce import ReducedCRN, backward_reduce, forward_reduce, reduction_cost
from .odes import (
    Polynomial,
    VectorField,
    accretion_depletion,
    format_polynomial,
    format_vector_field,
    is_exactly_lumpable,
    is_ordinarily_lumpable,
    lumped_field_backward,
    lumped_field_forward,
    vector_field,
)
from .sim import (
    InitialCondition,
    Trajectory,
    VerificationReport,
    integrate,
    trajectory_to_csv,
    verify_backward,
    verify_forward,
)
from .io import (
    import_bngl_net,
    parse_crn,
    parse_initial_conditions,
    parse_partition,
    partition_from_initial_conditions,
    serialize_crn,
)
from .models import (
    MultisiteSpec,
    brute_force_coarsest,
    multisite,
    multisite_block_count,
    random_crn,
    running_example,
    two_state,
)

__version__ = "0.1.0"
