//! Ehrhart series, h*-polynomials and quasipolynomials from exact counts.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::serde_rational_mat;
use crate::algebra::{format_rational, rf_reduce, Poly, Rational, RationalGenFunction};
use crate::error::{Error, Result};
use crate::lattice::RationalPolytope;

/// `L(m) = Σ_j c[m mod N][j]·m^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiPolynomial {
    pub degree: usize,
    pub period: usize,
    #[serde(with = "serde_rational_mat")]
    pub coeffs: Vec<Vec<Rational>>,
}

impl QuasiPolynomial {
    pub fn eval(&self, m: u64) -> Rational {
        let row = &self.coeffs[(m % self.period as u64) as usize];
        Poly::new(row.clone()).eval(&Rational::from_integer(m.into()))
    }

    /// Leading coefficient on residue `r`; equal across residues for a full-degree fit.
    pub fn leading(&self, r: usize) -> Rational {
        self.coeffs[r].get(self.degree).cloned().unwrap_or_else(Rational::zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EhrhartData {
    pub dim: usize,
    pub denominator: u64,
    pub denom_exponent: usize,
    pub counts: Vec<u64>,
    pub hstar: Poly,
    pub series: RationalGenFunction,
    pub quasi: QuasiPolynomial,
    pub min_period: usize,
    pub is_pip: bool,
}

/// Number of counts the engine consumes: `m = 0 … N(d+1)+N−1`.
pub fn counts_needed(d: usize, n: usize) -> usize {
    n * (d + 2)
}

fn to_q(x: u64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// `(1 − t^N)^{d+1}`.
pub fn ehrhart_denominator(d: usize, n: usize) -> Poly {
    Poly::one_minus_power(n).pow(d + 1)
}

/// Numerator of `Σ counts[m] t^m` over `(1 − t^N)^{d+1}`. The product is formed up
/// to the last supplied count; everything from degree `N(d+1)` on must vanish.
pub fn hstar_from_counts(counts: &[u64], d: usize, n: usize) -> Result<Poly> {
    let need = counts_needed(d, n);
    if counts.len() < need || n == 0 {
        return Err(Error::InvalidInput(format!(
            "need {need} counts for d = {d}, N = {n}, got {}",
            counts.len()
        )));
    }
    let den = ehrhart_denominator(d, n);
    let c: Vec<Rational> = counts.iter().map(|&x| to_q(x)).collect();
    let prod: Vec<Rational> = (0..counts.len())
        .map(|i| {
            (0..=i.min(den.coeffs().len().saturating_sub(1)))
                .fold(Rational::zero(), |acc, j| acc + den.coeff(j) * &c[i - j])
        })
        .collect();
    let cut = n * (d + 1);
    if let Some((i, v)) = prod.iter().enumerate().skip(cut).find(|(_, v)| !v.is_zero()) {
        return Err(Error::NonTerminating {
            degree: i,
            value: format_rational(v),
        });
    }
    Ok(Poly::new(prod[..cut].to_vec()))
}

/// Lagrange interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = Poly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let factor = Poly::new(vec![-xj.clone(), Rational::one()]);
                basis = (&basis * &factor).scale(&(xi - xj).recip());
            }
        }
        acc = &acc + &basis;
    }
    acc
}

/// Per-residue interpolation of `counts` as a quasipolynomial of degree ≤ d and period N.
pub fn quasipolynomial_fit(counts: &[u64], d: usize, n: usize) -> Result<QuasiPolynomial> {
    if counts.len() < counts_needed(d, n) {
        return Err(Error::InvalidInput(format!(
            "need {} counts for d = {d}, N = {n}",
            counts_needed(d, n)
        )));
    }
    let mut table = Vec::with_capacity(n);
    for r in 0..n {
        let ms: Vec<usize> = (r..counts.len()).step_by(n).collect();
        let xs: Vec<Rational> = ms[..=d].iter().map(|&m| to_q(m as u64)).collect();
        let ys: Vec<Rational> = ms[..=d].iter().map(|&m| to_q(counts[m])).collect();
        let p = interpolate(&xs, &ys);
        for &m in &ms[d + 1..] {
            let got = p.eval(&to_q(m as u64));
            if got != to_q(counts[m]) {
                return Err(Error::InterpolationMismatch {
                    m,
                    expected: counts[m].to_string(),
                    got: format_rational(&got),
                });
            }
        }
        let mut row = p.into_coeffs();
        row.resize(d + 1, Rational::zero());
        table.push(row);
    }
    Ok(QuasiPolynomial {
        degree: d,
        period: n,
        coeffs: table,
    })
}

/// Smallest divisor `N'` of the period such that the coefficient table is `N'`-periodic.
pub fn minimal_period(q: &QuasiPolynomial) -> usize {
    (1..=q.period)
        .filter(|p| q.period % p == 0)
        .find(|&p| (0..q.period).all(|r| q.coeffs[r] == q.coeffs[r % p]))
        .unwrap_or(q.period)
}

/// Full Ehrhart data of a nonempty polytope, with `N` = its denominator.
pub fn ehrhart(p: &RationalPolytope) -> Result<EhrhartData> {
    let Some(d) = p.affine_dim() else {
        return Err(Error::InvalidInput("Ehrhart data of the empty polytope".into()));
    };
    let n = p
        .denominator()
        .to_usize()
        .ok_or(Error::Overflow("polytope denominator"))?;
    let counts = p.lattice_point_counts((counts_needed(d, n) - 1) as u64)?;
    let hstar = hstar_from_counts(&counts, d, n)?;
    let series = rf_reduce(&hstar, &ehrhart_denominator(d, n))?;
    let quasi = quasipolynomial_fit(&counts, d, n)?;
    let min_period = minimal_period(&quasi);
    Ok(EhrhartData {
        dim: d,
        denominator: n as u64,
        denom_exponent: d + 1,
        counts,
        hstar,
        series,
        quasi,
        min_period,
        is_pip: min_period == 1,
    })
}

/// Reduced Ehrhart series; the empty polytope contributes only its `m = 0` term.
pub fn ehrhart_series(p: &RationalPolytope) -> Result<RationalGenFunction> {
    if p.is_empty() {
        return Ok(RationalGenFunction::polynomial(Poly::one()));
    }
    Ok(ehrhart(p)?.series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf, rf_expand};

    fn seg(a: Rational, b: Rational) -> RationalPolytope {
        RationalPolytope::from_points(1, vec![vec![a], vec![b]]).unwrap()
    }

    #[test]
    fn unit_segment() {
        let e = ehrhart(&seg(q(0), q(1))).unwrap();
        assert_eq!(e.hstar, Poly::one());
        assert_eq!(
            e.series,
            rf_reduce(&Poly::one(), &Poly::from_ints(&[1, -1]).pow(2)).unwrap()
        );
        assert!(e.is_pip);
    }

    #[test]
    fn half_integer_segment() {
        // [-1/2, 1/2]: L(m) = m + 1 for even m, m for odd m
        let e = ehrhart(&seg(qf(-1, 2), qf(1, 2))).unwrap();
        assert_eq!(e.quasi.coeffs, vec![vec![q(1), q(1)], vec![q(0), q(1)]]);
        assert_eq!(e.min_period, 2);
        let expect = rf_reduce(
            &Poly::from_ints(&[1, 0, 1]),
            &(&Poly::from_ints(&[1, -1]) * &Poly::from_ints(&[1, 0, -1])),
        )
        .unwrap();
        assert_eq!(e.series, expect);
        assert_eq!(
            rf_expand(&e.series, 5),
            [1, 1, 3, 3, 5, 5].iter().map(|&x| q(x)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn zero_to_half_has_period_two() {
        let e = ehrhart(&seg(q(0), qf(1, 2))).unwrap();
        assert_eq!(e.min_period, 2);
        assert!(!e.is_pip);
        for m in 0..10 {
            assert_eq!(e.quasi.eval(m), q((m / 2 + 1) as i64));
        }
    }

    #[test]
    fn origin_point() {
        let p = RationalPolytope::from_int_points(3, &[vec![0, 0, 0]]).unwrap();
        let e = ehrhart(&p).unwrap();
        assert_eq!(e.series, rf_reduce(&Poly::one(), &Poly::from_ints(&[1, -1])).unwrap());
        assert_eq!(e.quasi.coeffs, vec![vec![q(1)]]);
    }

    #[test]
    fn simplex_binomials() {
        let e: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| i64::from(i == j)).collect()).collect();
        let p = RationalPolytope::from_int_points(4, &e).unwrap();
        let data = ehrhart(&p).unwrap();
        assert_eq!(data.hstar, Poly::one());
        assert_eq!(data.min_period, 1);
        for m in 0..12u64 {
            let b = (m + 1) * (m + 2) * (m + 3) / 6;
            assert_eq!(data.quasi.eval(m), q(b as i64));
        }
    }

    #[test]
    fn wrong_denominator_is_loud() {
        // counts of [0, 1/2] with N = 1
        let counts: Vec<u64> = (0..6).map(|m| m / 2 + 1).collect();
        assert!(matches!(
            hstar_from_counts(&counts, 1, 1),
            Err(Error::NonTerminating { .. })
        ));
        assert!(matches!(
            quasipolynomial_fit(&counts, 1, 1),
            Err(Error::InterpolationMismatch { .. })
        ));
    }

    #[test]
    fn empty_series_is_one() {
        let s = ehrhart_series(&RationalPolytope::empty(2)).unwrap();
        assert!(s.is_polynomial());
        assert_eq!(s.num(), &Poly::one());
    }
}
