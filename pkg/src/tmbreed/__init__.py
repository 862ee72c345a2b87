"""Cooperating Turing machine breeds.

Joint execution of machine breeds, the dimension measure log_k(n) over
(steps, participants), empirical IQ/EQ tables with a power-law exponent
fit, an evolutionary search for high-dimension breeds, and a curated
specimen catalog with an HTTP facade.
"""

from .machine import (
    Action,
    Machine,
    MachineParseError,
    Rule,
    SingleRunResult,
    canonical_text,
    load_collection,
    machines_by_id,
    parse_machine,
    random_machine,
    run_single,
    save_collection,
)
from .orchestra import (
    ALL_RESOLVED,
    BUDGET_EXCEEDED,
    NO_APPLICABLE_RULE,
    Breed,
    RunResult,
    dimension,
    enumerate_runs,
    load_breed,
    orchestrate,
    save_breed,
)
from .intelligence import (
    IqEqTable,
    PowerLawFit,
    RunSample,
    estimate_iq_eq,
    fit_power_law,
    sample_from_result,
    sweep,
)
from .breeder import (
    Pool,
    PoolEntry,
    SearchParams,
    SearchReport,
    evolve,
    fitness,
    generate_pool,
    load_champions,
    load_pool,
    save_pool,
)
from .catalog import (
    CatalogStore,
    InvalidStatusTransition,
    Specimen,
    UnknownSpecimenError,
    fancy_name,
    make_specimen,
)
from .rand import SplitMix64, derive_seed, fresh_seed

__version__ = "0.1.0"
