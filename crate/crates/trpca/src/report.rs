//! JSON and CSV experiment reports.
//!
//! A scalar report is one flat record. Fields that do not apply to a
//! command are `None` and left out of both encodings. The CSV form has a
//! `key,value` header and one row per present field, in declaration order.

use serde::{Serialize, Serializer};
use serde_json::Value;
use trpca_core::synth::PhaseCell;

use crate::image::Psnr;

impl Serialize for Psnr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Psnr::Exact => s.serialize_str("exact"),
            Psnr::Db(v) => s.serialize_f64(*v),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    /// Tubal rank of the generated low-rank part.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Support size of the generated sparse part.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// Tubal rank of the recovered low-rank part.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tubal_rank: Option<usize>,
    /// Number of nonzeros of the recovered sparse part.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l0_e: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tnn: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_err_l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_err_e: Option<f64>,
    /// Number of corrupted pixels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrupted: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psnr_corrupted: Option<Psnr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psnr_recovered: Option<Psnr>,
    /// Set when nothing was corrupted: whether the reconstruction error is
    /// within 8-bit quantization noise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub near_exact: Option<bool>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let Value::Object(map) = serde_json::to_value(self).expect("reports always serialize")
        else {
            unreachable!("a struct serializes to an object")
        };
        let mut out = String::from("key,value\n");
        for (k, v) in map {
            let v = match v {
                Value::String(s) => s,
                other => other.to_string(),
            };
            out.push_str(&k);
            out.push(',');
            out.push_str(&v);
            out.push('\n');
        }
        out
    }
}

pub fn grid_csv(cells: &[PhaseCell]) -> String {
    let mut out = String::from("r_frac,rho_s,trials,successes\n");
    for c in cells {
        out.push_str(&format!("{},{},{},{}\n", c.r_frac, c.rho_s, c.trials, c.successes));
    }
    out
}
