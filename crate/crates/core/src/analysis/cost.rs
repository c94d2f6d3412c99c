use serde::Serialize;

use crate::error::AnalysisError;

/// Priors, per-unit-time losses and worst-case runtimes for yes- and
/// no-instances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostModel {
    pub pi_yes: f64,
    pub pi_no: f64,
    pub loss_yes: f64,
    pub loss_no: f64,
    pub t_yes: f64,
    pub t_no: f64,
}

impl CostModel {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if !prob(self.pi_yes) || !prob(self.pi_no) {
            return Err(AnalysisError::InvalidCostModel("priors must lie in [0, 1]"));
        }
        if (self.pi_yes + self.pi_no - 1.0).abs() > 1e-9 {
            return Err(AnalysisError::InvalidCostModel("priors must sum to 1"));
        }
        if !(self.loss_yes.is_finite()
            && self.loss_yes > 0.0
            && self.loss_no.is_finite()
            && self.loss_no > 0.0)
        {
            return Err(AnalysisError::InvalidCostModel("losses must be positive and finite"));
        }
        if !(self.t_yes.is_finite() && self.t_yes >= 0.0 && self.t_no.is_finite() && self.t_no >= 0.0) {
            return Err(AnalysisError::InvalidCostModel("runtimes must be non-negative and finite"));
        }
        Ok(())
    }
}

/// Loss-weighted expected worst-case runtime.
pub fn expected_runtime_bound(m: &CostModel) -> Result<f64, AnalysisError> {
    m.validate()?;
    let total = m.loss_yes + m.loss_no;
    Ok(m.loss_yes / total * m.t_yes * m.pi_yes + m.loss_no / total * m.t_no * m.pi_no)
}

/// Whether the weighted no-instance loss dominates: `L_no·π_no ≥ L_yes·π_yes`.
pub fn condition_star(m: &CostModel) -> Result<bool, AnalysisError> {
    m.validate()?;
    Ok(m.loss_no * m.pi_no >= m.loss_yes * m.pi_yes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(pi_yes: f64, loss_yes: f64, loss_no: f64) -> CostModel {
        CostModel { pi_yes, pi_no: 1.0 - pi_yes, loss_yes, loss_no, t_yes: 10.0, t_no: 10.0 }
    }

    #[test]
    fn symmetric_case() {
        let m = model(0.5, 1.0, 1.0);
        assert_eq!(expected_runtime_bound(&m).unwrap(), 5.0);
        assert!(condition_star(&m).unwrap());
    }

    #[test]
    fn heavier_no_loss_satisfies_condition() {
        assert!(condition_star(&model(0.5, 1.0, 2.0)).unwrap());
    }

    #[test]
    fn lighter_no_side_fails_condition() {
        assert!(!condition_star(&model(0.8, 1.0, 1.0)).unwrap());
    }

    #[test]
    fn invalid_models_rejected() {
        let mut m = model(0.5, 1.0, 1.0);
        m.pi_no = 0.6;
        assert!(expected_runtime_bound(&m).is_err());
        let m = model(0.5, 0.0, 1.0);
        assert!(condition_star(&m).is_err());
    }
}
