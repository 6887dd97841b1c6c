//! Green's functions and Q-entries of the two building blocks, the sphere of
//! radius `a` and the segment `[0, d]`, on the physical axis z = k² > 0.
//!
//! Sign convention: every kernel here is the integral kernel of the resolvent
//! (−Δ − k²)⁻¹. At negative energies the segment diagonal is then
//! coth(κd)/κ > 0, and the sphere kernel behaves like −(1/2π) ln ρ near the
//! diagonal, so that subtracting that singularity leaves `sphere_q_diag`.

use crate::error::{Error, Result};
use crate::specfun::{digamma, gamma_quarter_ratio, legendre_p, EULER_GAMMA};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Denominators below this magnitude count as a pole.
pub const GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereParams {
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentParams {
    pub d: f64,
}

impl SphereParams {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sphere radius a = {a} must be positive"
            )));
        }
        Ok(Self { a })
    }
}

impl SegmentParams {
    pub fn new(d: f64) -> Result<Self> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "segment length d = {d} must be positive"
            )));
        }
        Ok(Self { d })
    }
}

/// Momentum k, energy z = k² and the sphere degree parameter t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam {
    pub k: f64,
    pub z: f64,
    pub t: f64,
}

impl SpectralParam {
    pub fn new(k: f64, sphere: SphereParams) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Domain {
                what: "momentum",
                value: k,
            });
        }
        let z = k * k;
        let t = 0.5 * (1.0 + 4.0 * sphere.a * sphere.a * z).sqrt();
        Ok(Self { k, z, t })
    }
}

/// t(k) = ½√(1 + 4a²k²).
pub fn degree(k: f64, a: f64) -> f64 {
    0.5 * (1.0 + 4.0 * a * a * k * k).sqrt()
}

/// Real 2×2 block of Q-function values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QBlock {
    pub q11: f64,
    pub q12: f64,
    pub q21: f64,
    pub q22: f64,
}

impl QBlock {
    pub fn symmetric(diag: f64, off: f64) -> Self {
        Self {
            q11: diag,
            q12: off,
            q21: off,
            q22: diag,
        }
    }

    pub fn det(&self) -> f64 {
        self.q11 * self.q22 - self.q12 * self.q21
    }
}

fn guarded(what: &'static str, k: f64, denominator: f64) -> Result<f64> {
    if denominator.abs() < GUARD {
        Err(Error::Pole {
            what,
            k,
            denominator,
        })
    } else {
        Ok(denominator)
    }
}

/// Sphere Green's function at geodesic distance `rho`:
/// G = P_{t−½}(−cos(ρ/a)) / (4 cos πt).
pub fn sphere_green(rho: f64, k: f64, sphere: SphereParams) -> Result<f64> {
    let a = sphere.a;
    if !(rho > 0.0 && rho <= PI * a) {
        return Err(Error::Domain {
            what: "sphere_green distance",
            value: rho,
        });
    }
    let sp = SpectralParam::new(k, sphere)?;
    let c = guarded("sphere_green", k, (PI * sp.t).cos())?;
    let x = if rho == PI * a { 1.0 } else { -(rho / a).cos() };
    let p = legendre_p(sp.t, x)?;
    Ok(p.value / (4.0 * c))
}

/// Renormalized diagonal value
/// Q₀¹¹ = −(1/2π)[ψ(½ + t) − (π/2) tan πt − ln 2a + C_E].
pub fn sphere_q_diag(k: f64, sphere: SphereParams) -> Result<f64> {
    let sp = SpectralParam::new(k, sphere)?;
    let arg = PI * sp.t;
    guarded("sphere_q_diag", k, arg.cos())?;
    let psi = digamma(0.5 + sp.t)?;
    Ok(-(psi - 0.5 * PI * arg.tan() - (2.0 * sphere.a).ln() + EULER_GAMMA) / (2.0 * PI))
}

/// Entry between points at geodesic distance πa/2:
/// Γ(¼ + t/2) / (8√π Γ(¾ + t/2) cos π(¼ + t/2)).
pub fn sphere_q_zigzag(k: f64, sphere: SphereParams) -> Result<f64> {
    let sp = SpectralParam::new(k, sphere)?;
    let c = guarded("sphere_q_zigzag", k, (PI * (0.25 + 0.5 * sp.t)).cos())?;
    Ok(gamma_quarter_ratio(sp.t)? / (8.0 * PI.sqrt() * c))
}

/// Entry between antipodal points: 1/(4 cos πt).
pub fn sphere_q_antipodal(k: f64, sphere: SphereParams) -> Result<f64> {
    let sp = SpectralParam::new(k, sphere)?;
    let c = guarded("sphere_q_antipodal", k, (PI * sp.t).cos())?;
    Ok(1.0 / (4.0 * c))
}

/// Neumann segment kernel
/// G(x, x′) = −[cos k(d − |x − x′|) + cos k(d − (x + x′))] / (2k sin kd).
pub fn segment_green(x: f64, x2: f64, k: f64, seg: SegmentParams) -> Result<f64> {
    let d = seg.d;
    if !(0.0..=d).contains(&x) {
        return Err(Error::Domain {
            what: "segment_green position",
            value: x,
        });
    }
    if !(0.0..=d).contains(&x2) {
        return Err(Error::Domain {
            what: "segment_green position",
            value: x2,
        });
    }
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain {
            what: "momentum",
            value: k,
        });
    }
    let s = guarded("segment_green", k, (k * d).sin())?;
    let num = (k * (d - (x - x2).abs())).cos() + (k * (d - (x + x2))).cos();
    Ok(-num / (2.0 * k * s))
}

/// Endpoint block of the segment: q11 = q22 = −cot(kd)/k, q12 = q21 = −1/(k sin kd).
pub fn segment_q(k: f64, seg: SegmentParams) -> Result<QBlock> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain {
            what: "momentum",
            value: k,
        });
    }
    let kd = k * seg.d;
    let s = guarded("segment_q", k, kd.sin())?;
    Ok(QBlock::symmetric(-kd.cos() / (k * s), -1.0 / (k * s)))
}
