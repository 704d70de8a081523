"""Deterministic concentration-training session engine.

A session pairs monotonous arithmetic tasks with immediate behavioral
feedback: points are awarded for sustained attention and deducted for
sustained inattention, on a fully deterministic logical clock. The
package also ships the statistics used to evaluate such systems (SUS,
Cronbach's alpha, chi-square with Cramér's V), a CLI, and a real-time
service for the companion UI.
"""

from .engine import (
    Expression,
    FeedbackAction,
    FeedbackClass,
    PolicyParams,
    RctEngine,
    TokenLedger,
)
from .errors import (
    ConfigurationError,
    FocusTrainerError,
    LogCorruptionError,
    NotReadyError,
    RejectedInputError,
    SessionStateError,
    UndefinedStatisticError,
    ValidationError,
)
from .eventlog import (
    EventLog,
    EventLogRecord,
    RecordKind,
    SessionReport,
    build_report,
    log_path,
    read_log,
)
from .monitor import (
    AttentionEvent,
    AttentionMonitor,
    AttentionState,
    GazeSample,
    RawAttention,
    ScreenGeometry,
    classify_gaze,
)
from .session import (
    AnswerInput,
    AttentionInput,
    GazeInput,
    KeypressInput,
    SessionConfig,
    SessionRunner,
    SessionScript,
    fade_params,
    plan_session,
    replay_verify,
    run_session,
)
from .stats import (
    ChiSquareResult,
    ContingencyTable,
    LikertScale,
    SusBand,
    SusResponse,
    chi2_sf,
    chi_square,
    cronbach_alpha,
    likert_descriptives,
    sus_band,
    sus_score,
)
from .tasks import AgeBand, AnswerResult, TaskGenerator, TaskItem, check_answer

__version__ = "0.1.0"

__all__ = [
    "AgeBand",
    "AnswerInput",
    "AnswerResult",
    "AttentionEvent",
    "AttentionInput",
    "AttentionMonitor",
    "AttentionState",
    "ChiSquareResult",
    "ConfigurationError",
    "ContingencyTable",
    "EventLog",
    "EventLogRecord",
    "Expression",
    "FeedbackAction",
    "FeedbackClass",
    "FocusTrainerError",
    "GazeInput",
    "GazeSample",
    "KeypressInput",
    "LikertScale",
    "LogCorruptionError",
    "NotReadyError",
    "PolicyParams",
    "RawAttention",
    "RctEngine",
    "RecordKind",
    "RejectedInputError",
    "ScreenGeometry",
    "SessionConfig",
    "SessionReport",
    "SessionRunner",
    "SessionScript",
    "SessionStateError",
    "SusBand",
    "SusResponse",
    "TaskGenerator",
    "TaskItem",
    "TokenLedger",
    "UndefinedStatisticError",
    "ValidationError",
    "build_report",
    "check_answer",
    "chi2_sf",
    "chi_square",
    "classify_gaze",
    "cronbach_alpha",
    "fade_params",
    "likert_descriptives",
    "log_path",
    "plan_session",
    "read_log",
    "replay_verify",
    "run_session",
    "sus_band",
    "sus_score",
]
