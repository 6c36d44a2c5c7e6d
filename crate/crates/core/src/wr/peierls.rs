use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::WrParams;

/// `α = 2^{-(R₂/(2^{3d+2} R₁^d) - (3d-1))}` and the resulting bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeierlsReport {
    /// The exponent `R₂/(2^{3d+2} R₁^d) - (3d-1)`, exact.
    pub exponent: String,
    pub alpha: f64,
    /// `α / (1 - α)`, or infinity when `α ≥ 1`.
    pub bound: f64,
    /// `R₂ > 2^{5d+2} R₁^{2d}`.
    pub valid: bool,
    #[serde(skip)]
    pub exponent_exact: BigRational,
}

impl PeierlsReport {
    /// `-log2 α` when it is an integer.
    pub fn exponent_integer(&self) -> Option<i64> {
        self.exponent_exact
            .is_integer()
            .then(|| self.exponent_exact.to_integer().to_i64())
            .flatten()
    }
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

pub fn peierls_report(p: WrParams) -> PeierlsReport {
    let d = p.d;
    let r1 = BigInt::from(p.r1);
    let r2 = BigInt::from(p.r2);
    let r1d = num_traits::pow(r1.clone(), d as usize);
    let exponent = BigRational::new(r2.clone(), pow2(3 * d + 2) * &r1d)
        - BigRational::from_integer(BigInt::from(3 * d as i64 - 1));
    let valid = r2 > pow2(5 * d + 2) * &r1d * &r1d;

    let e = exponent.to_f64().unwrap_or(f64::INFINITY);
    let alpha = if exponent.is_integer() && exponent.abs() < BigRational::from_integer(1000.into()) {
        // exact power of two
        let n = exponent.to_integer().to_i32().unwrap();
        2f64.powi(-n)
    } else {
        (-e).exp2()
    };
    let bound = if alpha < 1.0 && !exponent.is_zero() {
        alpha / (1.0 - alpha)
    } else {
        f64::INFINITY
    };
    PeierlsReport {
        exponent: exponent.to_string(),
        alpha,
        bound,
        valid,
        exponent_exact: exponent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_point() {
        let r = peierls_report(WrParams::planar(1, 8192).unwrap());
        assert_eq!(r.exponent_integer(), Some(27));
        assert_eq!(r.alpha, 2f64.powi(-27));
        assert!(r.valid);
        assert!(!peierls_report(WrParams::planar(1, 256).unwrap()).valid);
    }

    #[test]
    fn validity_threshold() {
        assert!(!peierls_report(WrParams::planar(1, 4096).unwrap()).valid);
        assert!(peierls_report(WrParams::planar(1, 4097).unwrap()).valid);
    }
}
