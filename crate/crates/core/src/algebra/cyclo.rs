//! Exact arithmetic in cyclotomic fields ℚ(ζₙ).
//!
//! An element of ℚ(ζₙ) is stored as a polynomial in ζₙ reduced modulo the
//! n-th cyclotomic polynomial Φₙ, so the residue has degree below φ(n) and the
//! representation is unique for a fixed order. Mixed-order arithmetic embeds
//! both operands into ℚ(ζ_lcm) via ζₙ = ζ_lcm^(lcm/n).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

fn cache() -> &'static Mutex<HashMap<u64, Arc<Poly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Poly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cyclotomic_shared(n: u64) -> Arc<Poly> {
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut p = &Poly::monomial(Rational::one(), n as usize) - &Poly::one();
    for d in 1..n {
        if n % d == 0 {
            p = p.div_rem(&cyclotomic_shared(d)).0;
        }
    }
    let p = Arc::new(p);
    cache().lock().unwrap().insert(n, p.clone());
    p
}

/// The n-th cyclotomic polynomial Φₙ(x), via Φₙ = (xⁿ − 1) / ∏_{d|n, d<n} Φ_d.
///
/// # Panics
/// Panics if `n == 0`.
pub fn cyclotomic_polynomial(n: u64) -> Poly {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    (*cyclotomic_shared(n)).clone()
}

/// An element of ℚ(ζₙ).
#[derive(Clone, Debug)]
pub struct CycloNum {
    order: u64,
    residue: Poly,
}

impl CycloNum {
    pub fn new(order: u64, residue: Poly) -> Self {
        assert!(order >= 1);
        let phi = cyclotomic_shared(order);
        CycloNum {
            order,
            residue: residue.rem(&phi),
        }
    }

    pub fn rational(x: Rational) -> Self {
        CycloNum {
            order: 1,
            residue: Poly::constant(x),
        }
    }

    pub fn from_int(x: i64) -> Self {
        Self::rational(Rational::from_integer(x.into()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// ζₙᵏ
    pub fn zeta_power(order: u64, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        CycloNum::new(order, Poly::monomial(Rational::one(), e))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn residue(&self) -> &Poly {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// The same element viewed in ℚ(ζ_m); `m` must be a multiple of the current order.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m % self.order == 0, "order {} does not divide {}", self.order, m);
        if m == self.order {
            return self.clone();
        }
        CycloNum::new(m, self.residue.substitute_power((m / self.order) as usize))
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.order.lcm(&b.order);
        (a.lift(m), b.lift(m))
    }

    /// Complex conjugation ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut acc = vec![Rational::zero(); n];
        for (i, c) in self.residue.coeffs().iter().enumerate() {
            acc[(n - i) % n] += c;
        }
        CycloNum::new(self.order, Poly::new(acc))
    }

    /// The rational value, if this element lies in ℚ.
    pub fn to_rational(&self) -> Result<Rational> {
        if self.residue.is_constant() {
            Ok(self.residue.coeff(0))
        } else {
            Err(Error::NonRational(self.to_string()))
        }
    }
}

/// `cyclo_to_rational` in function form.
pub fn cyclo_to_rational(x: &CycloNum) -> Result<Rational> {
    x.to_rational()
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = CycloNum::common(self, other);
        a.residue == b.residue
    }
}

impl Eq for CycloNum {}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        let (a, b) = CycloNum::common(self, rhs);
        CycloNum {
            order: a.order,
            residue: &a.residue + &b.residue,
        }
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        let (a, b) = CycloNum::common(self, rhs);
        CycloNum {
            order: a.order,
            residue: &a.residue - &b.residue,
        }
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        let (a, b) = CycloNum::common(self, rhs);
        CycloNum::new(a.order, &a.residue * &b.residue)
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            order: self.order,
            residue: -&self.residue,
        }
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residue.is_constant() {
            return write!(f, "{}", format_rational(&self.residue.coeff(0)));
        }
        let terms: Vec<String> = self
            .residue
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                _ if c.is_one() => format!("z{}^{}", self.order, i),
                _ => format!("{}*z{}^{}", format_rational(c), self.order, i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    order: u64,
    coeffs: Poly,
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloJson {
            order: self.order,
            coeffs: self.residue.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CycloJson::deserialize(d)?;
        if raw.order == 0 {
            return Err(serde::de::Error::custom("cyclotomic order must be positive"));
        }
        Ok(CycloNum::new(raw.order, raw.coeffs))
    }
}
