"""Tournament protocol: scheduling, matches, scoring, statistics and reports."""

from .config import (
    ENV_OUTPUT_DIR,
    ENV_WORKERS,
    AgentSpec,
    GameSpec,
    TournamentConfig,
    config_from_dict,
    load_config,
)
from .match import MatchRecord, Seat, binary_score, derive_seed, play_match, replay
from .report import format_table, plot_table, table_csv, write_report
from .stats import ScoreRow, ScoreTable, aggregate, group_strata, stratified_bootstrap
from .tournament import (
    Assignment,
    ExperimentResult,
    append_record,
    read_records,
    run_experiment,
    schedule,
    schedule_count,
)

__all__ = [
    "AgentSpec", "GameSpec", "TournamentConfig", "config_from_dict", "load_config", "ENV_WORKERS",
    "ENV_OUTPUT_DIR", "MatchRecord", "Seat", "play_match", "replay", "binary_score", "derive_seed",
    "ScoreRow", "ScoreTable", "aggregate", "group_strata", "stratified_bootstrap",
    "Assignment", "ExperimentResult", "schedule", "schedule_count", "run_experiment",
    "read_records", "append_record", "format_table", "table_csv", "plot_table", "write_report",
]
