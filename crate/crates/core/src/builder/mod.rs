//! Finite-extension construction of a sequence with incompressible,
//! retraceable checkpoints and a prediction rule that never fails on it.

mod construct;
mod prediction;
mod schedule;

pub use construct::{
    construct_x, retrace, verify_trace, Check, CheckKind, ConstructError, ConstructionTrace, RetraceError,
    RoundRecord, TraceFile, TraceReport,
};
pub use prediction::{eval_prediction, insert_zero, PredictionRule, PredictionScore, ScheduleZeroRule, TableRule};
pub use schedule::{build_schedule, Schedule, ScheduleError, ScheduleMode, DEFAULT_LENGTH_CAP};
