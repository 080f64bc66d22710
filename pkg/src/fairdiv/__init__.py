"""Fair division of indivisible mixed manna: greedy algorithms, exact checkers and a brute-force oracle."""

__version__ = "0.1.0"

from fairdiv.algorithms import (  # noqa: E402
    AlgorithmTrace,
    alg_binary,
    max_min_identical,
    nash_max_min_tertiary,
    nash_max_tertiary,
)
from fairdiv.fairness import (  # noqa: E402
    FairnessReport,
    check_ef,
    check_ef1,
    check_efx,
    check_efx3,
    check_po,
    check_xyz,
)
from fairdiv.model import (  # noqa: E402
    Allocation,
    Instance,
    InvalidAllocationError,
    PreconditionError,
    classify_items,
    detect_utility_class,
)
from fairdiv.welfare import WelfareKind, disutility_nash_welfare, egalitarian_welfare, nash_welfare  # noqa: E402

__all__ = [
    "AlgorithmTrace",
    "Allocation",
    "FairnessReport",
    "Instance",
    "InvalidAllocationError",
    "PreconditionError",
    "WelfareKind",
    "alg_binary",
    "check_ef",
    "check_ef1",
    "check_efx",
    "check_efx3",
    "check_po",
    "check_xyz",
    "classify_items",
    "detect_utility_class",
    "disutility_nash_welfare",
    "egalitarian_welfare",
    "max_min_identical",
    "nash_max_min_tertiary",
    "nash_max_tertiary",
    "nash_welfare",
]
