"""Time-windowed numerical association rule mining over sensor telemetry.

Pipeline: synthetic telemetry generation -> time-frame transaction
database -> rule mining with five population metaheuristics -> run
reports. See the CLI (``tsarm --help``) for the file-based workflow.
"""

from .datagen import GenConfig, SensorRecord, generate, write_csv
from .encoding import DecodeConfig, decode, fitness
from .measures import (
    AttributeCondition,
    FitnessWeights,
    Rule,
    RuleMetrics,
    TimeWindow,
    amplitude,
    confidence,
    evaluate_rule,
    inclusion,
    matches,
    support,
    weighted_fitness,
)
from .miner import (
    MinerConfig,
    RuleArchive,
    RunReport,
    RunResult,
    canonical_identity,
    merged_archive,
    mine,
    report,
)
from .optimizers import (
    ALGORITHM_NAMES,
    DEParams,
    GAParams,
    JDEParams,
    LSHADEParams,
    OptimizerConfig,
    PSOParams,
    RunTrace,
    optimize,
)
from .preprocess import (
    FEATURE_NAMES,
    PreprocessConfig,
    Transaction,
    TransactionDatabase,
    build_database,
    class_of,
    extract_features,
    load_database,
    parse_sensor_csv,
    sequence_of,
    timestamp_of,
    write_transactions,
)

__version__ = "0.1.0"
