"""Sublinear property testers for stability in friends/enemies hedonic games."""

from .exact import (
    certified_far_distance,
    exact_perfect_exists,
    exact_perfect_exists_bruteforce,
    exact_verify,
    exhaustive_distance,
    find_nash_stable,
    iter_partitions,
)
from .game import (
    CoalitionStructure,
    Edit,
    EditScript,
    FenGame,
    GameError,
    UtilityParams,
    apply_edits,
    indifferent,
    is_favourite,
    max_utility,
    prefers,
    utility,
    weakly_prefers,
)
from .generators import InstanceSpec, generate, random_partition
from .oracles import BudgetExceeded, GraphOracle, PartitionOracle, QueryLedger, snapshot_ledger
from .testers import TesterConfig, TesterVerdict, perfect_existence_tester, sample_size, verification_tester
from .witness import StabilityConcept, WitnessReport, phi, repair_all_witnesses, repair_to_favourite

__all__ = [name for name in dir() if not name.startswith("_")]
