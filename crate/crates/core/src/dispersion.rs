//! Closed-form spectral conditions of the six model variants.
//!
//! Chains are reduced to a solved Floquet relation cos θ = N/D, carpets to a
//! trigonometric polynomial in the two quasimomenta whose zero set over the
//! torus is the spectrum.
//!
//! The carpet polynomials are obtained from the determinant of the unit-cell
//! Q-matrix minus the Fourier-transformed coupling. With `d`, `s`, `o` the
//! diagonal, quarter-circle and antipodal sphere entries and `β` the
//! effective coupling, the determinant of the four-junction contact cell is
//! `T(d, s, o, β; c1, c2) = C0 + C1 (c1 + c2) + C2 c1 c2`,
//!
//! * `C0 = ((d − o)(d + o + 2s) − β²)((d − o)(d + o − 2s) − β²)`,
//! * `C1 = −2β(β²o − d²o + 2ds² + o³ − 2os²)`,
//! * `C2 = 4β²(o² − s²)`,
//!
//! with `ci = cos θi`. Eliminating the segment endpoints of the loose carpet
//! by a Schur complement gives the same polynomial with `d → d − α²k cot kd`
//! and `β = −α²k / sin kd`, up to the positive factor `1/k⁴`.
//!
//! The coefficient set [`CarpetCoeffs`] and the polynomials built from it in
//! their long-hand form ([`printed_loose_carpet`], [`printed_tight_carpet_poly`])
//! are kept for comparison; the test suite checks the determinant forms
//! against a direct complex determinant.

use crate::error::{Error, Result};
use crate::greens::{sphere_q_antipodal, sphere_q_diag, sphere_q_zigzag, SphereParams, GUARD};
use crate::model::{Junction, ModelKind, ModelParams};
use serde::{Deserialize, Serialize};

/// Source of the three distinct sphere Q-entries.
pub trait SphereEntries {
    fn diag(&self, k: f64) -> Result<f64>;
    fn quarter(&self, k: f64) -> Result<f64>;
    fn antipodal(&self, k: f64) -> Result<f64>;
}

impl SphereEntries for SphereParams {
    fn diag(&self, k: f64) -> Result<f64> {
        sphere_q_diag(k, *self)
    }
    fn quarter(&self, k: f64) -> Result<f64> {
        sphere_q_zigzag(k, *self)
    }
    fn antipodal(&self, k: f64) -> Result<f64> {
        sphere_q_antipodal(k, *self)
    }
}

/// Diagonal entry and the coupling entry selected by the junction geometry.
pub fn chain_entries<S: SphereEntries>(src: &S, k: f64, junction: Junction) -> Result<(f64, f64)> {
    let q11 = src.diag(k)?;
    let q1j = match junction {
        Junction::Quarter => src.quarter(k)?,
        Junction::Antipodal => src.antipodal(k)?,
    };
    Ok((q11, q1j))
}

/// Floquet relation of a chain, cos θ = numerator / denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRelation {
    pub numerator: f64,
    pub denominator: f64,
}

impl ChainRelation {
    pub fn cos_theta(&self) -> Result<f64> {
        if self.denominator.abs() < GUARD {
            return Err(Error::Singular {
                what: "chain relation",
                denominator: self.denominator,
            });
        }
        Ok(self.numerator / self.denominator)
    }

    /// Implicit form numerator − denominator · cos θ.
    pub fn lhs(&self, theta: f64) -> f64 {
        self.numerator - self.denominator * theta.cos()
    }
}

fn require_alpha(p: &ModelParams) -> Result<()> {
    if p.alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha = {} must be positive",
            p.alpha
        )))
    }
}

fn require_kind(p: &ModelParams, allowed: &[ModelKind], op: &str) -> Result<()> {
    if allowed.contains(&p.kind) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{op} is not defined for model {}",
            p.kind
        )))
    }
}

fn segment_trig(k: f64, d: f64) -> Result<(f64, f64)> {
    let kd = k * d;
    let s = kd.sin();
    if s.abs() < GUARD {
        return Err(Error::Pole {
            what: "segment",
            k,
            denominator: s,
        });
    }
    Ok((s, kd.cos()))
}

/// Loose chain relation from given sphere entries. Multiplied through by
/// sin kd, cos θ = [(Q11² − Q1j² − α⁴k²) sin kd − 2α²k Q11 cos kd] / (2α²k Q1j).
pub fn loose_relation_from(
    q11: f64,
    q1j: f64,
    k: f64,
    d: f64,
    alpha: f64,
) -> Result<ChainRelation> {
    let (s, c) = segment_trig(k, d)?;
    let a2 = alpha * alpha;
    Ok(ChainRelation {
        numerator: (q11 * q11 - q1j * q1j - a2 * a2 * k * k) * s - 2.0 * a2 * k * c * q11,
        denominator: 2.0 * a2 * k * q1j,
    })
}

/// Tight chain relation cos θ = (Q11² − Q1j² + α²) / (2α Q1j).
pub fn tight_relation_from(q11: f64, q1j: f64, alpha: f64) -> ChainRelation {
    ChainRelation {
        numerator: q11 * q11 - q1j * q1j + alpha * alpha,
        denominator: 2.0 * alpha * q1j,
    }
}

/// Chain relation for any chain variant with a custom entry source.
pub fn chain_relation_with<S: SphereEntries>(
    src: &S,
    k: f64,
    p: &ModelParams,
) -> Result<ChainRelation> {
    require_alpha(p)?;
    let junction = p
        .kind
        .junction()
        .ok_or_else(|| Error::InvalidParameter(format!("model {} is not a chain", p.kind)))?;
    if !(k > 0.0) {
        return Err(Error::Domain {
            what: "momentum",
            value: k,
        });
    }
    if p.kind.has_segments() {
        segment_trig(k, p.d)?;
    }
    let (q11, q1j) = chain_entries(src, k, junction)?;
    if p.kind.has_segments() {
        loose_relation_from(q11, q1j, k, p.d, p.alpha)
    } else {
        Ok(tight_relation_from(q11, q1j, p.alpha))
    }
}

pub fn chain_relation(k: f64, p: &ModelParams) -> Result<ChainRelation> {
    chain_relation_with(&p.sphere(), k, p)
}

/// Solved loose-chain relation (variants I and II).
pub fn cos_theta_loose(k: f64, p: &ModelParams) -> Result<f64> {
    require_kind(
        p,
        &[ModelKind::LooseStraight, ModelKind::LooseZigzag],
        "cos_theta_loose",
    )?;
    chain_relation(k, p)?.cos_theta()
}

/// Solved tight-chain relation (variants III and IV).
pub fn cos_theta_tight(k: f64, p: &ModelParams) -> Result<f64> {
    require_kind(
        p,
        &[ModelKind::TightStraight, ModelKind::TightZigzag],
        "cos_theta_tight",
    )?;
    chain_relation(k, p)?.cos_theta()
}

/// Coefficients Δ, a₀, a₁, b₀, b₁, c₁, c₂ of the long-hand loose-carpet
/// condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarpetCoeffs {
    pub delta: f64,
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Sphere entries Q11, Q12 (quarter circle) and Q13 (antipodal).
fn carpet_entries(k: f64, sphere: SphereParams) -> Result<[f64; 3]> {
    Ok([
        sphere_q_diag(k, sphere)?,
        sphere_q_zigzag(k, sphere)?,
        sphere_q_antipodal(k, sphere)?,
    ])
}

pub fn carpet_coeffs(k: f64, p: &ModelParams) -> Result<CarpetCoeffs> {
    require_kind(p, &[ModelKind::LooseCarpet], "carpet_coeffs")?;
    if !(k > 0.0) {
        return Err(Error::Domain {
            what: "momentum",
            value: k,
        });
    }
    let (s, c) = segment_trig(k, p.d)?;
    let q = carpet_entries(k, p.sphere())?;
    Ok(carpet_coeffs_from(q, k, s, c, p.alpha))
}

/// The coefficient set from explicit entries q = [Q11, Q12, Q13] and
/// s = sin kd, c = cos kd.
pub fn carpet_coeffs_from(q: [f64; 3], k: f64, s: f64, c: f64, alpha: f64) -> CarpetCoeffs {
    let [q11, q12, q13] = q;
    let a2 = alpha * alpha;
    let k2 = k * k;
    let ks = k * s;
    let delta = (q12 * q12 - q11 * q11) / k2 + 2.0 * a2 / ks * (q11 * c + q12) + a2 * a2;
    // Q^{1,j+1} and Q^{1,2−j} for j = 0, 1
    let a_j = |j: usize| {
        let sign = if j == 0 { 1.0 } else { -1.0 };
        let qj1 = q[j];
        let q2j = q[1 - j];
        qj1 * delta
            + (qj1 / k2 - sign * a2 / ks) * (q12 * q12 + q13 * q13)
            + 2.0 * q12 * q13 * (q2j / k2 + sign * a2 / ks)
    };
    let b0 = ((q11 * q11 - q12 * q12) / ks * c + a2 * q11) / (ks * ks) - delta * c / ks;
    let b1 = ((q11 * q11 - q12 * q12) / ks - a2 * q11) / (ks * ks);
    // Q^{1,4−j} and Q^{1,j+1} for j = 1, 2
    let c_j = |j: usize| {
        let q4j = q[3 - j];
        let qj1 = q[j];
        alpha / ks * (a2 * q4j + q4j * q11 * c / ks - (qj1 * q11 + q4j * q12 * c) / ks)
    };
    CarpetCoeffs {
        delta,
        a0: a_j(0),
        a1: a_j(1),
        b0,
        b1,
        c1: c_j(1),
        c2: c_j(2),
    }
}

/// Trigonometric polynomial
/// e0 + e1 (cos θ₁ + cos θ₂) + e_sum cos(θ₁ + θ₂) + e_diff cos(θ₁ − θ₂).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusPoly {
    pub e0: f64,
    pub e1: f64,
    pub e_sum: f64,
    pub e_diff: f64,
}

/// Uniform samples of cos θ₂ added to the exact candidates as a safeguard.
const PROFILE_SAMPLES: usize = 64;

impl TorusPoly {
    /// A + B (c1 + c2) + C c1 c2.
    pub fn bilinear(a: f64, b: f64, c: f64) -> Self {
        Self {
            e0: a,
            e1: b,
            e_sum: 0.5 * c,
            e_diff: 0.5 * c,
        }
    }

    pub fn eval(&self, theta1: f64, theta2: f64) -> f64 {
        self.e0
            + self.e1 * (theta1.cos() + theta2.cos())
            + self.e_sum * (theta1 + theta2).cos()
            + self.e_diff * (theta1 - theta2).cos()
    }

    pub fn scale(&self) -> f64 {
        self.e0.abs() + 2.0 * self.e1.abs() + self.e_sum.abs() + self.e_diff.abs()
    }

    /// True when the sin θ₁ sin θ₂ component vanishes.
    pub fn is_bilinear(&self) -> bool {
        (self.e_sum - self.e_diff).abs() <= 1e-12 * self.scale()
    }

    fn corners(&self) -> [f64; 4] {
        let cc = self.e_sum + self.e_diff;
        [
            self.e0 + 2.0 * self.e1 + cc,
            self.e0 - cc,
            self.e0 - cc,
            self.e0 - 2.0 * self.e1 + cc,
        ]
    }

    /// Minimum and maximum over the torus.
    ///
    /// For fixed θ₂ the polynomial is `P cos θ₁ + R sin θ₁ + const`, so its
    /// extremes over θ₁ are `e0 + e1 c ± √Q(c)` with `c = cos θ₂` and
    /// `Q(c) = (e1 + (e_sum + e_diff) c)² + (e_diff − e_sum)² (1 − c²)`.
    /// The range is attained at c = ±1, at a zero of Q, or where
    /// `(Q′)² = 4 e1² Q`, which is a quadratic in c.
    pub fn range(&self) -> (f64, f64) {
        let corners = self.corners();
        let cmin = corners.iter().cloned().fold(f64::INFINITY, f64::min);
        let cmax = corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if self.is_bilinear() {
            return (cmin, cmax);
        }
        let cc = self.e_sum + self.e_diff;
        let ss = self.e_diff - self.e_sum;
        // Q(c) = qa + qb c + qc c²
        let qa = self.e1 * self.e1 + ss * ss;
        let qb = 2.0 * self.e1 * cc;
        let qc = cc * cc - ss * ss;
        let e1s = self.e1 * self.e1;
        let mut cands: Vec<f64> = vec![-1.0, 1.0];
        cands.extend(quadratic_roots(qc, qb, qa));
        cands.extend(quadratic_roots(
            4.0 * qc * (qc - e1s),
            4.0 * qb * (qc - e1s),
            qb * qb - 4.0 * e1s * qa,
        ));
        cands.extend((0..=PROFILE_SAMPLES).map(|i| -1.0 + 2.0 * i as f64 / PROFILE_SAMPLES as f64));
        let (mut lo, mut hi) = (cmin, cmax);
        for c in cands {
            if !(-1.0..=1.0).contains(&c) {
                continue;
            }
            let root = (qa + qb * c + qc * c * c).max(0.0).sqrt();
            let base = self.e0 + self.e1 * c;
            lo = lo.min(base - root);
            hi = hi.max(base + root);
        }
        (lo, hi)
    }
}

/// Real roots of a x² + b x + c (degree drops when a vanishes).
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let size = a.abs().max(b.abs()).max(c.abs());
    if size == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * size {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![-b / (2.0 * a)];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut out = vec![q / a];
    if q != 0.0 {
        out.push(c / q);
    }
    out
}

/// Coefficients of T(d, s, o, β; c1, c2) as a bilinear polynomial.
pub fn contact_cell_poly(d: f64, s: f64, o: f64, beta: f64) -> TorusPoly {
    let b2 = beta * beta;
    let dm = d - o;
    let c0 = (dm * (d + o + 2.0 * s) - b2) * (dm * (d + o - 2.0 * s) - b2);
    let c1 = -2.0 * beta * (b2 * o - d * d * o + 2.0 * d * s * s + o * o * o - 2.0 * o * s * s);
    let c2 = 4.0 * b2 * (o * o - s * s);
    TorusPoly::bilinear(c0, c1, c2)
}

/// Tight-carpet condition as a torus polynomial (determinant form).
pub fn tight_carpet_poly(k: f64, p: &ModelParams) -> Result<TorusPoly> {
    require_kind(p, &[ModelKind::TightCarpet], "tight carpet condition")?;
    if !(k > 0.0) {
        return Err(Error::Domain {
            what: "momentum",
            value: k,
        });
    }
    let [d, s, o] = carpet_entries(k, p.sphere())?;
    Ok(contact_cell_poly(d, s, o, p.alpha))
}

/// Loose-carpet condition as a torus polynomial (determinant form, scaled
/// so that it tends to α⁸ where all sphere entries are small).
pub fn loose_carpet_poly(k: f64, p: &ModelParams) -> Result<TorusPoly> {
    require_kind(p, &[ModelKind::LooseCarpet], "loose carpet condition")?;
    if !(k > 0.0) {
        return Err(Error::Domain {
            what: "momentum",
            value: k,
        });
    }
    let (sn, cs) = segment_trig(k, p.d)?;
    let [d, s, o] = carpet_entries(k, p.sphere())?;
    let a2 = p.alpha * p.alpha;
    let poly = contact_cell_poly(d - a2 * k * cs / sn, s, o, -a2 * k / sn);
    let k4 = k.powi(4);
    Ok(TorusPoly {
        e0: poly.e0 / k4,
        e1: poly.e1 / k4,
        e_sum: poly.e_sum / k4,
        e_diff: poly.e_diff / k4,
    })
}

/// Long-hand tight-carpet polynomial A + B(c1 + c2) + C c1 c2 with
/// A = (Q11² − Q13²)² − 4Q12²(Q11 − Q13)² + α⁴,
/// B = 2α[Q13³ − Q11²Q13 + 2Q11Q12² − 2Q12²Q13] − 2α³Q13,
/// C = 2α²[Q13² − Q11² + 2(Q13² − Q12²)].
pub fn printed_tight_carpet_poly(k: f64, p: &ModelParams) -> Result<TorusPoly> {
    require_kind(p, &[ModelKind::TightCarpet], "tight carpet condition")?;
    let [d, s, o] = carpet_entries(k, p.sphere())?;
    let al = p.alpha;
    let a = (d * d - o * o).powi(2) - 4.0 * s * s * (d - o).powi(2) + al.powi(4);
    let b = 2.0 * al * (o * o * o - d * d * o + 2.0 * d * s * s - 2.0 * s * s * o)
        - 2.0 * al.powi(3) * o;
    let c = 2.0 * al * al * (o * o - d * d + 2.0 * (o * o - s * s));
    Ok(TorusPoly::bilinear(a, b, c))
}

/// Long-hand loose-carpet polynomial built from [`CarpetCoeffs`]. The
/// unbalanced bracket of the θ-linear term is read as
/// [(a₀b₀ + a₁b₁ − c₁²)c₁ + (a₀b₁ + a₁b₀ − c₁c₂)c₂].
pub fn printed_loose_carpet(cf: &CarpetCoeffs, alpha: f64) -> TorusPoly {
    let CarpetCoeffs {
        delta,
        a0,
        a1,
        b0,
        b1,
        c1,
        c2,
    } = *cf;
    let e0 = (a0 * a0 - a1 * a1) * (b0 * b0 - b1 * b1) + (c1 * c1 - c2 * c2).powi(2)
        - 2.0 * ((c1 + c2).powi(2) * (a0 * b0 + a1 * b1) - 2.0 * c1 * c2 * (a0 + a1) * (b0 + b1))
        + 2.0 * alpha.powi(2) * delta.powi(2) * (c1 * c1 - a0 * b0)
        + alpha.powi(4) * delta.powi(4);
    let e1 = 2.0
        * alpha
        * delta
        * ((a0 * b0 + a1 * b1 - c1 * c1) * c1 + (a0 * b1 + a1 * b0 - c1 * c2) * c2)
        - 2.0 * alpha.powi(3) * delta.powi(3) * c1;
    let w = 2.0 * alpha.powi(2) * delta.powi(2);
    TorusPoly {
        e0,
        e1,
        e_sum: w * (c1 * c1 - c2 * c2),
        e_diff: w * (c1 * c1 - a1 * b1),
    }
}

/// Torus polynomial of either carpet variant.
pub fn carpet_poly(k: f64, p: &ModelParams) -> Result<TorusPoly> {
    match p.kind {
        ModelKind::LooseCarpet => loose_carpet_poly(k, p),
        ModelKind::TightCarpet => tight_carpet_poly(k, p),
        other => Err(Error::InvalidParameter(format!(
            "model {other} is not a carpet"
        ))),
    }
}

pub fn carpet_condition_loose(k: f64, theta1: f64, theta2: f64, p: &ModelParams) -> Result<f64> {
    Ok(loose_carpet_poly(k, p)?.eval(theta1, theta2))
}

pub fn carpet_condition_tight(k: f64, theta1: f64, theta2: f64, p: &ModelParams) -> Result<f64> {
    Ok(tight_carpet_poly(k, p)?.eval(theta1, theta2))
}

/// Minimum and maximum of the carpet condition over the quasimomentum torus.
pub fn torus_range(k: f64, p: &ModelParams) -> Result<(f64, f64)> {
    Ok(carpet_poly(k, p)?.range())
}
