//! Oracles shared by the integration tests. None of them touch the hull or the
//! enumeration code of the library.

#![allow(dead_code)]

use eqehr::algebra::{rf_expand, rf_reduce, Rational, RationalGenFunction};
use eqehr::equivariant::{EquivariantSetup, HStarReport};
use eqehr::lattice::linalg::IMat;

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `x ∈ mP` for the symmetric edge polytope of the cycle on `x.len()` vertices.
/// Writing `x` as a flow `f_i` along edge `(i, i+1)` forces `f_i = c + S_i` with
/// `S_i` the prefix sums, and the cheapest flow takes `c = −median(S)`.
pub fn cycle_member(x: &[i64], m: i64) -> bool {
    if x.iter().sum::<i64>() != 0 {
        return false;
    }
    let mut s: Vec<i64> = x
        .iter()
        .scan(0i64, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    s.sort_unstable();
    let med = s[s.len() / 2];
    s.iter().map(|v| (v - med).abs()).sum::<i64>() <= m
}

/// `x ∈ m·P(k, d)`: `k·Σ_{i<d}|x_i| + 2|x_d| ≤ k·m`.
pub fn cross_member(x: &[i64], k: i64, m: i64) -> bool {
    let (last, rest) = x.split_last().unwrap();
    k * rest.iter().map(|v| v.abs()).sum::<i64>() + 2 * last.abs() <= k * m
}

/// `x ∈ m·Conv{e_1, …, e_n}`.
pub fn simplex_member(x: &[i64], m: i64) -> bool {
    x.iter().all(|&v| v >= 0) && x.iter().sum::<i64>() == m
}

/// `x ∈ m·Conv{0, e_1, …, e_n}`.
pub fn corner_member(x: &[i64], m: i64) -> bool {
    x.iter().all(|&v| v >= 0) && x.iter().sum::<i64>() <= m
}

/// Box enumeration with a membership predicate. With `sum_zero` the last
/// coordinate is solved for instead of enumerated.
pub struct Brute {
    pub n: usize,
    pub radius: Box<dyn Fn(i64) -> Vec<i64> + Sync>,
    pub sum_zero: bool,
    pub member: Box<dyn Fn(&[i64], i64) -> bool + Sync>,
}

impl Brute {
    pub fn cycle(d: usize) -> Self {
        Brute {
            n: d,
            radius: Box::new(move |m| vec![m; d]),
            sum_zero: true,
            member: Box::new(cycle_member),
        }
    }

    pub fn cross(k: i64, d: usize, scale: i64) -> Self {
        Brute {
            n: d,
            radius: Box::new(move |m| {
                let mut r = vec![scale * m; d];
                r[d - 1] = scale * m * k / 2;
                r
            }),
            sum_zero: false,
            member: Box::new(move |x, m| cross_member(x, k, scale * m)),
        }
    }

    pub fn simplex(n: usize) -> Self {
        Brute {
            n,
            radius: Box::new(move |m| vec![m; n]),
            sum_zero: false,
            member: Box::new(simplex_member),
        }
    }

    pub fn corner(n: usize) -> Self {
        Brute {
            n,
            radius: Box::new(move |m| vec![m; n]),
            sum_zero: false,
            member: Box::new(corner_member),
        }
    }

    /// Number of candidates visited at dilate `m`.
    pub fn cost(&self, m: i64) -> u128 {
        let r = (self.radius)(m);
        let free = if self.sum_zero { self.n - 1 } else { self.n };
        r[..free].iter().map(|&x| (2 * x + 1) as u128).product()
    }

    /// For each `(A, v)`: the points `x ∈ mP ∩ ℤⁿ` with `A·x + m·v = x`.
    pub fn fixed_counts(&self, maps: &[(&IMat, &[i64])], m: i64) -> Vec<u64> {
        let r = (self.radius)(m);
        let free = if self.sum_zero { self.n - 1 } else { self.n };
        let mut x: Vec<i64> = r.iter().map(|&ri| -ri).collect();
        let mut counts = vec![0u64; maps.len()];
        loop {
            if self.sum_zero {
                x[self.n - 1] = -x[..free].iter().sum::<i64>();
            }
            if (self.member)(&x, m) {
                for ((a, v), c) in maps.iter().zip(counts.iter_mut()) {
                    if is_fixed(a, v, &x, m) {
                        *c += 1;
                    }
                }
            }
            let Some(i) = (0..free).find(|&i| x[i] < r[i]) else {
                return counts;
            };
            x[i] += 1;
            for (j, y) in x.iter_mut().enumerate().take(i) {
                *y = -r[j];
            }
        }
    }

    pub fn fixed_count(&self, a: &IMat, v: &[i64], m: i64) -> u64 {
        self.fixed_counts(&[(a, v)], m)[0]
    }
}

pub fn is_fixed(a: &IMat, v: &[i64], x: &[i64], m: i64) -> bool {
    a.iter()
        .zip(v)
        .zip(x)
        .all(|((row, vi), xi)| row.iter().zip(x).map(|(p, q)| p * q).sum::<i64>() + m * vi == *xi)
}

/// `H*(g) / D_g`, the evaluation of the equivariant series at class `c`.
pub fn class_series(report: &HStarReport, c: usize) -> RationalGenFunction {
    let h = &report.hstar_per_class[c];
    rf_reduce(h.num(), &(h.den() * &report.denominators_per_class[c])).unwrap()
}

pub fn expand_u64(f: &RationalGenFunction, order: usize) -> Option<Vec<u64>> {
    rf_expand(f, order)
        .into_iter()
        .map(|c: Rational| {
            if c.is_integer() {
                u64::try_from(c.to_integer()).ok()
            } else {
                None
            }
        })
        .collect()
}

/// Counts consumed when fitting the Ehrhart data of `P^g`.
pub fn fit_length(setup: &EquivariantSetup, g: usize) -> usize {
    let f = setup.fixed_polytope(g).unwrap();
    let d = f.affine_dim().unwrap();
    let n: usize = f.denominator().try_into().unwrap();
    n * (d + 2)
}

pub fn class_rep(setup: &EquivariantSetup, c: usize) -> usize {
    setup.group().classes()[c].representative
}
