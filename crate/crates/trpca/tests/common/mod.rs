#![allow(dead_code)]

use std::path::Path;

use trpca_core::synth::gen_low_tubal_rank;
use trpca_core::Tensor3;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI in-process.
pub fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("trpca").chain(args.iter().copied());
    let code = trpca::cli::run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// A tubal-rank-`r` tensor mapped affinely into `[0.05, 0.95]` and encoded
/// as a PPM image.
pub fn low_rank_image(n1: usize, n2: usize, r: usize, seed: u64) -> Vec<u8> {
    let a = gen_low_tubal_rank(n1, n2, 3, r, seed).unwrap();
    let peak = a.linf_norm();
    let scaled: Tensor3 = a.map(|v| 0.5 + 0.45 * v / peak);
    trpca::tensor_to_image(&scaled).unwrap()
}

pub fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}
