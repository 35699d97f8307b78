"""Classify, build and cross-verify exact products of two semidihedral 2-groups."""

from .arith import SdPair, additive_order, admissible_s_values, derive_pair, sqrt1_units
from .congruence import (
    CoreSpec,
    TupleA,
    TupleB,
    Verdict,
    check_a,
    check_b,
    check_b_congruences,
    enumerate_a,
    enumerate_b,
    parity_audit,
)
from .errors import CapacityError, DomainError
from .fpcoset import (
    CosetTable,
    FpPres,
    StructureReport,
    coset_enumerate,
    crosscheck_order,
    fp_from_extended,
    parse_relator_file,
    parse_relator_lines,
    structure_report,
    verify_xz_commutator_location,
)
from .pcgroup import (
    ConsistencyReport,
    GroupTable,
    NormalForm,
    PcData,
    SubgroupHandle,
    build_table,
    check_consistency,
    collect_multiply,
    core_of,
    element_order,
    is_normal,
    pc_from_tuple_a,
    pc_from_tuple_b,
    subgroup_closure,
    verify_associativity_exhaustive,
)

__version__ = "0.1.0"
