use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Outcome of one sampled check. Field order is the serialized order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    #[serde(rename = "check")]
    pub check_name: String,
    pub status: Status,
    pub max_residual: f64,
    pub witness: Option<Vec<Vec<f64>>>,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.check_name = name.into();
        self
    }

    /// Worst of several reports: fail beats inconclusive beats pass.
    pub fn merge(name: &str, reports: &[CheckReport]) -> CheckReport {
        let rank = |s: Status| match s {
            Status::Pass => 0,
            Status::Inconclusive => 1,
            Status::Fail => 2,
        };
        let status = reports
            .iter()
            .map(|r| r.status)
            .max_by_key(|s| rank(*s))
            .unwrap_or(Status::Pass);
        let max_residual = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
        let witness = reports
            .iter()
            .filter(|r| r.status == status && r.witness.is_some())
            .max_by(|a, b| a.max_residual.total_cmp(&b.max_residual))
            .and_then(|r| r.witness.clone());
        CheckReport {
            check_name: name.to_string(),
            status,
            max_residual,
            witness,
            samples: reports.iter().map(|r| r.samples).sum(),
            seed: reports.first().map_or(0, |r| r.seed),
            tol: reports.first().map_or(0.0, |r| r.tol),
        }
    }

    pub fn text_line(&self) -> String {
        format!(
            "{:<40} {:<12} max_residual={:.3e} samples={}",
            self.check_name,
            self.status.to_string(),
            self.max_residual,
            self.samples
        )
    }
}

/// One evaluated sample: its residual, the bound it must stay under, and the
/// inputs that produced it.
#[derive(Debug, Clone)]
pub(crate) struct Sample {
    pub residual: f64,
    pub bound: f64,
    pub inputs: Vec<Vec<f64>>,
}

/// Keeps residuals finite so the JSON stays valid.
pub(crate) fn finite(x: f64) -> f64 {
    if x.is_nan() {
        f64::MAX
    } else {
        x.clamp(0.0, f64::MAX)
    }
}

pub(crate) fn summarize(name: &str, samples: &[Sample], seed: u64, tol: f64) -> CheckReport {
    let max_residual = samples
        .iter()
        .map(|s| finite(s.residual))
        .fold(0.0, f64::max);
    let violator = samples
        .iter()
        .filter(|s| s.residual.is_nan() || s.residual > s.bound)
        .max_by(|a, b| finite(a.residual).total_cmp(&finite(b.residual)));
    CheckReport {
        check_name: name.to_string(),
        status: if violator.is_some() {
            Status::Fail
        } else {
            Status::Pass
        },
        max_residual,
        witness: violator.map(|s| s.inputs.clone()),
        samples: samples.len() as u64,
        seed,
        tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_field_order() {
        let r = CheckReport {
            check_name: "axioms".into(),
            status: Status::Pass,
            max_residual: 0.0,
            witness: None,
            samples: 3,
            seed: 42,
            tol: 1e-8,
        };
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"check":"axioms","status":"pass","max_residual":0.0,"witness":null,"samples":3,"seed":42,"tol":1e-8}"#
        );
        let back: CheckReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn failing_sample_carries_witness() {
        let samples = vec![
            Sample {
                residual: 0.5,
                bound: 1.0,
                inputs: vec![vec![0.0]],
            },
            Sample {
                residual: 2.0,
                bound: 1.0,
                inputs: vec![vec![1.0]],
            },
        ];
        let r = summarize("x", &samples, 1, 1e-8);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.witness, Some(vec![vec![1.0]]));
        assert_eq!(r.max_residual, 2.0);
    }

    #[test]
    fn nan_residual_fails() {
        let samples = vec![Sample {
            residual: f64::NAN,
            bound: 1.0,
            inputs: vec![],
        }];
        let r = summarize("x", &samples, 1, 1e-8);
        assert_eq!(r.status, Status::Fail);
        assert!(r.max_residual.is_finite());
    }
}
