//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use beadgap::greens::{
    segment_q, sphere_q_antipodal, sphere_q_diag, sphere_q_zigzag, QBlock, SegmentParams,
    SphereParams,
};
use beadgap::krein::{cos_theta_generic, tilde_q, Coupling};
use beadgap::ModelParams;
use num_complex::Complex64 as C64;
use std::path::PathBuf;
use std::process::{Command, Output};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn spectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectra"))
        .args(args)
        .output()
        .expect("spawn spectra")
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(mut m: Vec<Vec<C64>>) -> C64 {
    let n = m.len();
    let mut acc = C64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap();
        if m[piv][col].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if piv != col {
            m.swap(piv, col);
            acc = -acc;
        }
        acc *= m[col][col];
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let f = row[col] / pivot_row[col];
            for (x, &v) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= f * v;
            }
        }
    }
    acc
}

/// Sphere Q-matrix for junctions at east, north, west, south.
pub fn sphere_block(k: f64, a: f64) -> Option<[[f64; 4]; 4]> {
    let s = SphereParams { a };
    let d = sphere_q_diag(k, s).ok()?;
    let q = sphere_q_zigzag(k, s).ok()?;
    let o = sphere_q_antipodal(k, s).ok()?;
    Some([[d, q, o, q], [q, d, q, o], [o, q, d, q], [q, o, q, d]])
}

fn link(m: &mut [Vec<C64>], i: usize, j: usize, v: C64) {
    m[i][j] -= v;
    m[j][i] -= v.conj();
}

fn real_det(m: Vec<Vec<C64>>) -> f64 {
    let v = det(m);
    assert!(
        v.im.abs() <= 1e-9 * (1.0 + v.re.abs()),
        "Hermitian determinant has imaginary part {v}"
    );
    v.re
}

/// Contact lattice: east junction touches the west one of the next cell in
/// x, north touches south in y.
pub fn tight_carpet_oracle(k: f64, a: f64, alpha: f64, t1: f64, t2: f64) -> Option<f64> {
    let b = sphere_block(k, a)?;
    let mut m: Vec<Vec<C64>> = b
        .iter()
        .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
        .collect();
    link(&mut m, 0, 2, C64::from_polar(alpha, t1));
    link(&mut m, 1, 3, C64::from_polar(alpha, t2));
    Some(real_det(m))
}

/// Segment lattice: one segment from east to the next cell's west junction,
/// one from north to the next cell's south junction.
pub fn loose_carpet_oracle(k: f64, a: f64, d: f64, alpha: f64, t1: f64, t2: f64) -> Option<f64> {
    let b = sphere_block(k, a)?;
    let seg = segment_q(k, SegmentParams { d }).ok()?;
    let mut m = vec![vec![C64::new(0.0, 0.0); 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = C64::new(b[i][j], 0.0);
        }
    }
    for off in [4, 6] {
        m[off][off] = C64::new(seg.q11, 0.0);
        m[off][off + 1] = C64::new(seg.q12, 0.0);
        m[off + 1][off] = C64::new(seg.q21, 0.0);
        m[off + 1][off + 1] = C64::new(seg.q22, 0.0);
    }
    link(&mut m, 0, 4, C64::new(alpha, 0.0));
    link(&mut m, 2, 5, C64::from_polar(alpha, -t1));
    link(&mut m, 1, 6, C64::new(alpha, 0.0));
    link(&mut m, 3, 7, C64::from_polar(alpha, -t2));
    Some(real_det(m))
}

/// cos θ of a loose chain through the coupled-cell Q-matrix.
pub fn krein_chain_cos(k: f64, p: &ModelParams, zigzag: bool) -> Option<f64> {
    let s = p.sphere();
    let q1j = if zigzag {
        sphere_q_zigzag(k, s)
    } else {
        sphere_q_antipodal(k, s)
    }
    .ok()?;
    let q0 = QBlock::symmetric(sphere_q_diag(k, s).ok()?, q1j);
    let q1 = segment_q(k, p.segment()).ok()?;
    let c = Coupling { alpha: p.alpha };
    cos_theta_generic(tilde_q(q0, q1, c).ok()?, c).ok()
}

/// cos θ of a tight straight chain from the sphere entries.
pub fn tight_straight_cos(k: f64, p: &ModelParams) -> Option<f64> {
    let s = p.sphere();
    let q11 = sphere_q_diag(k, s).ok()?;
    let q13 = sphere_q_antipodal(k, s).ok()?;
    Some((q11 * q11 - q13 * q13 + p.alpha * p.alpha) / (2.0 * p.alpha * q13))
}

/// Maximal runs of member samples on the grid lo + i·step.
pub fn dense_runs(lo: f64, hi: f64, step: f64, member: impl Fn(f64) -> bool) -> Vec<(f64, f64)> {
    let n = ((hi - lo) / step).floor() as usize;
    let mut runs = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for i in 0..=n {
        let k = lo + i as f64 * step;
        if member(k) {
            open = Some(match open {
                Some((s, _)) => (s, k),
                None => (k, k),
            });
        } else if let Some(r) = open.take() {
            runs.push(r);
        }
    }
    runs.extend(open);
    runs
}

/// Compare scanned bands with dense-grid runs: equal count, and every
/// scanned edge at most one step outside the run it matches.
pub fn bands_match_runs(
    bands: &[(f64, f64)],
    runs: &[(f64, f64)],
    step: f64,
) -> Result<(), String> {
    if bands.len() != runs.len() {
        return Err(format!(
            "{} bands vs {} dense runs",
            bands.len(),
            runs.len()
        ));
    }
    for (i, (b, r)) in bands.iter().zip(runs).enumerate() {
        let lo_ok = b.0 <= r.0 && b.0 > r.0 - step;
        let hi_ok = b.1 >= r.1 && b.1 < r.1 + step;
        if !(lo_ok && hi_ok) {
            return Err(format!(
                "band {i}: [{}, {}] vs dense run [{}, {}]",
                b.0, b.1, r.0, r.1
            ));
        }
    }
    Ok(())
}
