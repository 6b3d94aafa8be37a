//! CSV and JSON report writers. Floating-point values are written with 17
//! significant digits so that every value round-trips exactly.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::hazard::{EvalError, HazardTrajectory};
use crate::pra::{ComparisonReport, Provenance};
use crate::sampling::GENERATOR_NAME;

/// `x` with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `sha256:<hex>` of the grid's JSON array.
pub fn grid_hash(grid: &[f64]) -> String {
    let bytes = serde_json::to_vec(grid).expect("grid serializes");
    format!("sha256:{}", hex::encode(Sha256::digest(&bytes)))
}

/// Columns `t,h,H,R,F`.
pub fn eval_csv(traj: &HazardTrajectory, grid: &[f64]) -> Result<String, EvalError> {
    let mut out = String::from("t,h,H,R,F\n");
    for &t in grid {
        let h = traj.hazard_at(t)?;
        let cum = traj.cumulative_hazard(t)?;
        let r = traj.reliability(t)?;
        let f = traj.failure_cdf(t)?;
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_num(t),
            fmt_num(h),
            fmt_num(cum),
            fmt_num(r),
            fmt_num(f)
        )
        .expect("write to string");
    }
    Ok(out)
}

/// Columns `replicate,failure_time`, in replicate order.
pub fn samples_csv(times: &[f64]) -> String {
    let mut out = String::from("replicate,failure_time\n");
    for (i, &t) in times.iter().enumerate() {
        writeln!(out, "{i},{}", fmt_num(t)).expect("write to string");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMetadata {
    pub seed: u64,
    pub generator: String,
    pub trajectory_hash: String,
    pub n: usize,
}

impl SampleMetadata {
    pub fn new(traj: &HazardTrajectory, seed: u64, n: usize) -> Self {
        Self {
            seed,
            generator: GENERATOR_NAME.to_string(),
            trajectory_hash: traj.hash(),
            n,
        }
    }
}

/// Columns `t,f_true,f_h0_bound,f_pra,gap_h0,gap_pra`.
pub fn comparison_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("t,f_true,f_h0_bound,f_pra,gap_h0,gap_pra\n");
    for i in 0..report.grid.len() {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_num(report.grid[i]),
            fmt_num(report.f_true[i]),
            fmt_num(report.f_h0_bound[i]),
            fmt_num(report.f_pra[i]),
            fmt_num(report.pointwise_gaps[i]),
            fmt_num(report.pra_gaps[i])
        )
        .expect("write to string");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub sup_gap_h0: f64,
    pub sup_gap_pra: f64,
    pub min_gap_h0: f64,
    pub min_gap_pra: f64,
    pub ordering_holds: bool,
    pub initial_hazard: f64,
    pub pra_rate: f64,
    pub pra_provenance: Provenance,
    pub pra_crossings: Vec<f64>,
    pub grid_points: usize,
    pub trajectory_hash: String,
    pub rational: bool,
}

impl ComparisonSummary {
    pub fn new(traj: &HazardTrajectory, report: &ComparisonReport) -> Self {
        Self {
            sup_gap_h0: report.sup_gap_h0,
            sup_gap_pra: report.sup_gap_pra,
            min_gap_h0: report.min_gap_h0,
            min_gap_pra: report.min_gap_pra,
            ordering_holds: report.ordering_holds,
            initial_hazard: report.initial_hazard,
            pra_rate: report.pra.rate,
            pra_provenance: report.pra.provenance,
            pra_crossings: report.pra_crossings.clone(),
            grid_points: report.grid.len(),
            trajectory_hash: traj.hash(),
            rational: traj.is_rational(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 12345.678901234567] {
            let s = fmt_num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_num(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn samples_csv_layout() {
        let text = samples_csv(&[1.5, 0.25]);
        assert_eq!(
            text,
            "replicate,failure_time\n0,1.5000000000000000e0\n1,2.5000000000000000e-1\n"
        );
    }
}
