//! Real special functions used by the sphere Q-entries.
//!
//! Digamma and log-gamma use upward recurrence to `x >= 8` followed by the
//! asymptotic series truncated after the B14 Bernoulli term. The Legendre
//! function is summed from hypergeometric series with term-ratio recurrences.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SHIFT: f64 = 8.0;

/// B2, B4, ..., B14.
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const SERIES_TOL: f64 = 1e-13;
const SERIES_CAP: usize = 1_000_000;

/// Digamma function ψ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "digamma",
            value: x,
        });
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < SHIFT {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut pow = inv2;
    let mut series = 0.0;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let k2 = 2.0 * (i as f64 + 1.0);
        series += b / k2 * pow;
        pow *= inv2;
    }
    Ok(acc + y.ln() - 0.5 / y - series)
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "log_gamma",
            value: x,
        });
    }
    let mut y = x;
    let mut prod = 1.0;
    while y < SHIFT {
        prod *= y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = 0.0;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let k2 = 2.0 * (i as f64 + 1.0);
        series += b / (k2 * (k2 - 1.0)) * pow;
        pow *= inv2;
    }
    Ok((y - 0.5) * y.ln() - y + LN_SQRT_2PI + series - prod.ln())
}

/// Γ(1/4 + t/2) / Γ(3/4 + t/2), for t >= 1/2.
pub fn gamma_quarter_ratio(t: f64) -> Result<f64> {
    if !(t >= 0.5) || !t.is_finite() {
        return Err(Error::Domain {
            what: "gamma_quarter_ratio",
            value: t,
        });
    }
    Ok((log_gamma(0.25 + 0.5 * t)? - log_gamma(0.75 + 0.5 * t)?).exp())
}

/// A series-evaluated value together with its convergence status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Set when a series hit the term cap before reaching the tolerance.
    pub reduced_accuracy: bool,
}

/// Legendre function of the first kind P_ν(x) with ν = t − 1/2.
///
/// The fractional part of ν is handled by hypergeometric series: the plain
/// series in (1 − x)/2 for x ≥ 0 and the logarithmic continuation in
/// (1 + x)/2 for x < 0, so that both converge at least like 2^{-n}. Integer
/// steps in degree then use the three-term recurrence
/// (ν+1) P_{ν+1} = (2ν+1) x P_ν − ν P_{ν−1}.
pub fn legendre_p(t: f64, x: f64) -> Result<SeriesValue> {
    if !t.is_finite() || t < 0.5 {
        return Err(Error::Domain {
            what: "legendre_p degree",
            value: t,
        });
    }
    if !(x > -1.0 && x <= 1.0) {
        return Err(Error::Domain {
            what: "legendre_p argument",
            value: x,
        });
    }
    if x == 1.0 {
        return Ok(SeriesValue {
            value: 1.0,
            reduced_accuracy: false,
        });
    }
    let nu = t - 0.5;
    let m = nu.floor();
    let nu0 = nu - m;
    let p0 = legendre_base(nu0, x);
    if m == 0.0 {
        return Ok(p0);
    }
    let p1 = legendre_base(nu0 + 1.0, x);
    let mut flag = p0.reduced_accuracy || p1.reduced_accuracy;
    let (mut prev, mut cur) = (p0.value, p1.value);
    let mut deg = nu0 + 1.0;
    for _ in 1..(m as u64) {
        let next = ((2.0 * deg + 1.0) * x * cur - deg * prev) / (deg + 1.0);
        prev = cur;
        cur = next;
        deg += 1.0;
    }
    flag |= !cur.is_finite();
    Ok(SeriesValue {
        value: cur,
        reduced_accuracy: flag,
    })
}

/// P_ν(x) for small ν (ν < 2), x ∈ (−1, 1).
fn legendre_base(nu: f64, x: f64) -> SeriesValue {
    let is_integer = nu == nu.round();
    let w = 0.5 * (1.0 - x);
    if is_integer || w <= 0.5 {
        hypergeometric_direct(nu, w)
    } else {
        hypergeometric_log(nu, 0.5 * (1.0 + x))
    }
}

/// F(−ν, ν+1; 1; w) summed term by term.
fn hypergeometric_direct(nu: f64, w: f64) -> SeriesValue {
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        term *= (nf - nu) * (nf + nu + 1.0) / ((nf + 1.0) * (nf + 1.0)) * w;
        sum += term;
        if term == 0.0 || (nf > nu && term.abs() <= SERIES_TOL * sum.abs()) {
            return SeriesValue {
                value: sum,
                reduced_accuracy: false,
            };
        }
    }
    SeriesValue {
        value: sum,
        reduced_accuracy: true,
    }
}

/// F(−ν, ν+1; 1; 1 − y) for non-integer ν via the c = a + b logarithmic
/// continuation around y = 0:
/// F = −(sin πν / π) Σ c_n [2ψ(n+1) − ψ(n−ν) − ψ(n+ν+1) − ln y] y^n,
/// c_n = (−ν)_n (ν+1)_n / (n!)².
fn hypergeometric_log(nu: f64, y: f64) -> SeriesValue {
    let psi_1pnu = match digamma(1.0 + nu) {
        Ok(v) => v,
        Err(_) => {
            return SeriesValue {
                value: f64::NAN,
                reduced_accuracy: true,
            }
        }
    };
    let ln_y = y.ln();
    // ψ(−ν) by reflection, ψ(n + 1) = −γ + H_n.
    let mut psi_a = psi_1pnu + PI / (PI * nu).tan();
    let mut psi_b = psi_1pnu;
    let mut psi_n = -EULER_GAMMA;
    let mut coeff = 1.0;
    let mut ypow = 1.0;
    let mut sum = 0.0;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        let term = coeff * ypow * (2.0 * psi_n - psi_a - psi_b - ln_y);
        sum += term;
        if n > 2 && term.abs() <= SERIES_TOL * sum.abs() {
            return SeriesValue {
                value: -(PI * nu).sin() / PI * sum,
                reduced_accuracy: false,
            };
        }
        coeff *= (nf - nu) * (nf + nu + 1.0) / ((nf + 1.0) * (nf + 1.0));
        ypow *= y;
        psi_a += 1.0 / (nf - nu);
        psi_b += 1.0 / (nf + nu + 1.0);
        psi_n += 1.0 / (nf + 1.0);
    }
    SeriesValue {
        value: -(PI * nu).sin() / PI * sum,
        reduced_accuracy: true,
    }
}
