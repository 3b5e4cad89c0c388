//! Reduced rational generating functions `num / den` with `den(0) = 1`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A rational function in lowest terms. Two values are equal iff they denote
/// the same power series, since the reduced form with `den(0) = 1` is unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRatFunc")]
pub struct RationalGenFunction {
    num: Poly,
    den: Poly,
}

#[derive(Deserialize)]
struct RawRatFunc {
    num: Poly,
    den: Poly,
}

impl TryFrom<RawRatFunc> for RationalGenFunction {
    type Error = Error;
    fn try_from(raw: RawRatFunc) -> Result<Self> {
        rf_reduce(&raw.num, &raw.den)
    }
}

/// Cancels common factors and scales so that the denominator has constant term 1.
pub fn rf_reduce(num: &Poly, den: &Poly) -> Result<RationalGenFunction> {
    if den.is_zero() || den.coeff(0).is_zero() {
        return Err(Error::BadDenominator);
    }
    let g = Poly::gcd(num, den);
    let (num, den) = if g.is_zero() || g.is_constant() {
        (num.clone(), den.clone())
    } else {
        (num.div_rem(&g).0, den.div_rem(&g).0)
    };
    let c = den.coeff(0).recip();
    Ok(RationalGenFunction {
        num: num.scale(&c),
        den: den.scale(&c),
    })
}

/// First `order + 1` Taylor coefficients at `t = 0`.
pub fn rf_expand(f: &RationalGenFunction, order: usize) -> Vec<Rational> {
    let den = f.den.coeffs();
    let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut a = f.num.coeff(m);
        for (i, d) in den.iter().enumerate().skip(1) {
            if i > m {
                break;
            }
            if !d.is_zero() {
                a -= d * &out[m - i];
            }
        }
        out.push(a);
    }
    out
}

impl RationalGenFunction {
    pub fn polynomial(p: Poly) -> Self {
        RationalGenFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den == Poly::one()
    }

    pub fn expand(&self, order: usize) -> Vec<Rational> {
        rf_expand(self, order)
    }

    /// `self · p`, reduced.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        rf_reduce(&(&self.num * p), &self.den).expect("denominator unchanged")
    }

    pub fn mul(&self, other: &Self) -> Self {
        rf_reduce(&(&self.num * &other.num), &(&self.den * &other.den)).expect("product of valid denominators")
    }
}

impl fmt::Display for RationalGenFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
