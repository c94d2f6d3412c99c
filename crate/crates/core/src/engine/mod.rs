//! The color protocol: per-node state machine, runners, traces and export.

mod color;
mod concurrent;
mod dot;
mod node;
mod params;
mod sim;
mod trace;

pub use color::{apply_cug, Color, NodeColor};
pub use concurrent::run_query_concurrent;
pub use dot::{snapshot_to_dot, trace_to_dot};
pub use node::{on_receive, ColorMessage, NodeState, Role};
pub use params::{InitMode, SchedulePolicy, SimulationParams};
pub use sim::{centralized_initialize, run_query, InitializationTrace};
pub use trace::{
    ControlMsg, ControlPhase, Decision, EventKind, ExecutionTrace, Snapshot, TraceEvent, Verdict,
};
