//! Coupled-cell Q-matrix and the generic Floquet condition for a chain whose
//! cell is one sphere block `q0` joined to one segment block `q1` by a
//! coupling of strength α at each junction.

use crate::error::{Error, Result};
use crate::greens::{QBlock, GUARD};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub alpha: f64,
}

/// Junction-value coefficients of the coupled-cell resolvent correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KreinCorrection {
    pub tt: f64,
    pub ww: f64,
    pub uu: f64,
    pub vv: f64,
}

fn denominator(q0_11: f64, q1_11: f64, c: Coupling) -> Result<f64> {
    let d = q0_11 * q1_11 - c.alpha * c.alpha;
    if d.abs() < GUARD {
        Err(Error::Singular {
            what: "coupled cell",
            denominator: d,
        })
    } else {
        Ok(d)
    }
}

/// Inverse of [[q0_11, −α], [−α, q1_11]] written as (tt, ww; uu, vv).
pub fn krein_correction(q0_11: f64, q1_11: f64, c: Coupling) -> Result<KreinCorrection> {
    let d = denominator(q0_11, q1_11, c)?;
    Ok(KreinCorrection {
        tt: q1_11 / d,
        ww: -c.alpha / d,
        uu: -c.alpha / d,
        vv: q0_11 / d,
    })
}

/// Effective Q-matrix between the two free junctions of a coupled cell.
pub fn tilde_q(q0: QBlock, q1: QBlock, c: Coupling) -> Result<QBlock> {
    let d = denominator(q0.q11, q1.q11, c)?;
    Ok(QBlock {
        q11: q0.q22 - q1.q11 * q0.q12 * q0.q21 / d,
        q12: c.alpha * q1.q12 * q0.q21 / d,
        q21: c.alpha * q0.q12 * q1.q21 / d,
        q22: q1.q22 - q0.q11 * q1.q12 * q1.q21 / d,
    })
}

/// cos θ = (det tQ − α²) / (2α tQ₁₂); the momentum is in the spectrum iff
/// the value lies in [−1, 1].
pub fn cos_theta_generic(tq: QBlock, c: Coupling) -> Result<f64> {
    if !(c.alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {} must be positive for a coupled chain",
            c.alpha
        )));
    }
    if tq.q12.abs() < GUARD {
        return Err(Error::Singular {
            what: "cos_theta_generic",
            denominator: tq.q12,
        });
    }
    Ok((tq.det() - c.alpha * c.alpha) / (2.0 * c.alpha * tq.q12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn correction_values() {
        let c = krein_correction(2.0, 1.0, Coupling { alpha: 1.0 }).unwrap();
        assert_eq!((c.tt, c.ww, c.uu, c.vv), (1.0, -1.0, -1.0, 2.0));
        let c = krein_correction(4.0, 0.5, Coupling { alpha: 0.0 }).unwrap();
        assert_eq!((c.tt, c.ww, c.uu, c.vv), (0.25, 0.0, 0.0, 2.0));
        assert!(matches!(
            krein_correction(1.0, 1.0, Coupling { alpha: 1.0 }),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn tilde_q_decoupled() {
        let q0 = QBlock::symmetric(2.0, 0.5);
        let q1 = QBlock::symmetric(-1.5, 0.25);
        let tq = tilde_q(q0, q1, Coupling { alpha: 0.0 }).unwrap();
        assert_eq!(tq.q12, 0.0);
        assert_eq!(tq.q21, 0.0);
        assert!((tq.q11 - (2.0 - 0.25 / 2.0)).abs() < 1e-15);
        assert!((tq.q22 - (-1.5 - 0.0625 / -1.5)).abs() < 1e-15);
    }

    #[test]
    fn cos_theta_values() {
        let c = Coupling { alpha: 1.0 };
        assert_eq!(
            cos_theta_generic(QBlock::symmetric(0.0, 1.0), c).unwrap(),
            -1.0
        );
        assert_eq!(
            cos_theta_generic(QBlock::symmetric(2.0, 1.0), c).unwrap(),
            1.0
        );
        assert_eq!(
            cos_theta_generic(QBlock::symmetric(3.0, 1.0), c).unwrap(),
            3.5
        );
        assert!(cos_theta_generic(QBlock::symmetric(3.0, 0.0), c).is_err());
    }

    fn block() -> impl Strategy<Value = QBlock> {
        (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
            .prop_map(|(q11, q12, q21, q22)| QBlock { q11, q12, q21, q22 })
    }

    proptest! {
        #[test]
        fn correction_determinant(q0 in -5.0f64..5.0, q1 in -5.0f64..5.0, alpha in 0.0f64..3.0) {
            let d = q0 * q1 - alpha * alpha;
            prop_assume!(d.abs() > 1e-3);
            let c = krein_correction(q0, q1, Coupling { alpha }).unwrap();
            let lhs = c.tt * c.vv - c.ww * c.uu;
            prop_assert!((lhs * d - 1.0).abs() < 1e-9);
        }

        #[test]
        fn swapping_blocks_swaps_entries(q0 in block(), q1 in block(), alpha in 0.0f64..3.0) {
            prop_assume!((q0.q11 * q1.q11 - alpha * alpha).abs() > 1e-3);
            let c = Coupling { alpha };
            let a = tilde_q(q0, q1, c).unwrap();
            let b = tilde_q(q1, q0, c).unwrap();
            let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs());
            prop_assert!(close(a.q11, b.q22) && close(a.q22, b.q11));
            prop_assert!(close(a.q12, b.q21) && close(a.q21, b.q12));
        }

        #[test]
        fn symmetric_inputs_give_symmetric_output(d0 in -3.0f64..3.0, o0 in -3.0f64..3.0,
                                                  d1 in -3.0f64..3.0, o1 in -3.0f64..3.0,
                                                  alpha in 0.0f64..3.0) {
            prop_assume!((d0 * d1 - alpha * alpha).abs() > 1e-3);
            let tq = tilde_q(QBlock::symmetric(d0, o0), QBlock::symmetric(d1, o1),
                             Coupling { alpha }).unwrap();
            prop_assert!((tq.q12 - tq.q21).abs() <= 1e-12 * (1.0 + tq.q12.abs()));
        }

        #[test]
        fn alpha_sign_degeneracy(d in -3.0f64..3.0, off in 0.1f64..3.0, alpha in 0.1f64..3.0) {
            // (α, tQ₁₂) → (−α, −tQ₁₂) leaves cos θ unchanged
            let f = |alpha: f64, off: f64| {
                let tq = QBlock::symmetric(d, off);
                (tq.det() - alpha * alpha) / (2.0 * alpha * tq.q12)
            };
            let v = cos_theta_generic(QBlock::symmetric(d, off), Coupling { alpha }).unwrap();
            prop_assert!((v - f(-alpha, -off)).abs() <= 1e-12 * (1.0 + v.abs()));
        }
    }
}
