use serde::Serialize;

use crate::error::EngineError;

/// How the scheduler picks per-message delays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchedulePolicy {
    /// Channel delay uniform on `(0, beta]`, processing delay uniform on `(0, alpha]`.
    #[default]
    RandomDelays,
    /// Every message is handled instantly, in global send order.
    FifoZeroDelay,
    /// Every message takes the full `alpha + beta`.
    AdversarialLatest,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitMode {
    /// A, B and C nodes take their colors spontaneously at time 0.
    #[default]
    SelfActivated,
    /// A designated node floods the query over a spanning tree, collects
    /// acknowledgements, then broadcasts a start signal.
    Centralized { source: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationParams {
    /// Upper bound on per-message processing time.
    pub alpha: f64,
    /// Upper bound on channel delivery time.
    pub beta: f64,
    pub seed: u64,
    pub schedule: SchedulePolicy,
    pub init: InitMode,
}

impl Default for SimulationParams {
    fn default() -> Self {
        SimulationParams {
            alpha: 1.0,
            beta: 1.0,
            seed: 0,
            schedule: SchedulePolicy::RandomDelays,
            init: InitMode::SelfActivated,
        }
    }
}

impl SimulationParams {
    pub fn with_seed(seed: u64) -> Self {
        SimulationParams { seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.alpha) && ok(self.beta) {
            Ok(())
        } else {
            Err(EngineError::InvalidParams { alpha: self.alpha, beta: self.beta })
        }
    }
}
