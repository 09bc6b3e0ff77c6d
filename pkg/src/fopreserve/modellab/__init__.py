"""Finite-model analyses: enumeration, cores, and bounded verdicts."""

from .enumerate import BudgetExceeded, enum_structures, structure_count
from .verdict import CoreReport, Verdict, Witness, recheck
from .cores import CoreError, is_core, is_k_cover, minimal_cores, witness_core_report
from .checks import (
    check_equiv_upto, delta_classify, kcover_preservation_check, ps_check, psc_check,
)
