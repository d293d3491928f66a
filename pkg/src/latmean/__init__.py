"""Verification toolkit for lattice mean value identities over number fields."""

__version__ = "0.1.0"

from .numberfield import (  # noqa: F401
    FieldElement,
    NumberFieldSpec,
    PrimeIdealData,
    dedekind_zeta,
    discriminant,
    embed,
    load_field_spec,
    log_embed,
    norms,
    parse_field,
    quadratic_field,
    rational_field,
    split_principal_primes,
    unit_group,
)
from .heights import (  # noqa: F401
    ArchMatrix,
    MatrixOverField,
    arch_components,
    arch_matrix_height,
    global_height,
    local_height,
)
from .lattices import (  # noqa: F401
    EmbeddedLattice,
    ModuleDescription,
    Region,
    count_points,
    enumerate_points,
    lattice_from_module,
    riemann_sum,
    standard_lattice,
)
