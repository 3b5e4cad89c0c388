//! Lattice-point counting in dilates of rational polytopes.
//!
//! Every count goes through the cone over a polytope: the integer points of
//! `m·P` are the integer points `(m, x)` of `cone({1} × P)` at height `m`. A
//! saturated sublattice `U ∩ ℤ^{1+n}` of the cone's span is split into one
//! vector of minimal positive height `c` and a height-zero basis, so the points
//! at height `m = c·k` are `k·b₀ + Σ yᵢ·bᵢ` with `y ∈ k·R ∩ ℤʳ` for a
//! full-dimensional rational polytope `R`. Heights not divisible by `c` hold
//! no points.
//!
//! `R` is enumerated coordinate by coordinate. Each prefix gets an interval for
//! the next coordinate from the constraints, using the bounding box for the
//! coordinates not yet fixed; the last coordinate is counted in closed form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::intlattice::{split_by_height, zrow_to_q, ZMat};
use super::linalg::{dot, Coordinates, QMat};
use crate::algebra::rational::{ceil_div, denominator_lcm, floor_div, to_i64};
use crate::algebra::Rational;
use crate::error::Result;

/// Integer points of `k·R` for `R = {y : G·y ≤ g₀}` inside the box `k·[lo, hi]`.
#[derive(Clone, Debug)]
pub struct SliceCounter {
    dim: usize,
    rows: Vec<Vec<i64>>,
    rhs: Vec<i64>,
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

struct Frame<'a> {
    counter: &'a SliceCounter,
    lo: Vec<i64>,
    hi: Vec<i64>,
    rhs: Vec<i64>,
    /// `minrest[i][j]`: minimum of Σ_{l>i} G[j][l]·y_l over the box.
    minrest: Vec<Vec<i64>>,
}

impl SliceCounter {
    pub fn new(rows: Vec<Vec<i64>>, rhs: Vec<i64>, lo: Vec<Rational>, hi: Vec<Rational>) -> Self {
        SliceCounter {
            dim: lo.len(),
            rows,
            rhs,
            lo,
            hi,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn frame(&self, k: i64) -> Result<Frame<'_>> {
        let kq = Rational::from_integer(k.into());
        let lo = self
            .lo
            .iter()
            .map(|x| to_i64(&ceil_div(&(x * &kq)), "enumeration box"))
            .collect::<Result<Vec<_>>>()?;
        let hi = self
            .hi
            .iter()
            .map(|x| to_i64(&floor_div(&(x * &kq)), "enumeration box"))
            .collect::<Result<Vec<_>>>()?;
        let d = self.dim;
        let mut minrest = vec![vec![0i64; self.rows.len()]; d];
        for (j, row) in self.rows.iter().enumerate() {
            let mut acc = 0i64;
            for i in (0..d).rev() {
                minrest[i][j] = acc;
                acc += (row[i] * lo[i]).min(row[i] * hi[i]);
            }
        }
        Ok(Frame {
            counter: self,
            lo,
            hi,
            rhs: self.rhs.iter().map(|b| b * k).collect(),
            minrest,
        })
    }

    /// Bounds for coordinate `i` given the partial sums of the fixed prefix.
    fn interval(f: &Frame<'_>, i: usize, partial: &[i64]) -> Option<(i64, i64)> {
        let (mut a, mut b) = (f.lo[i], f.hi[i]);
        for (j, row) in f.counter.rows.iter().enumerate() {
            let coef = row[i];
            let slack = f.rhs[j] - partial[j] - f.minrest[i][j];
            if coef > 0 {
                b = b.min(Integer::div_floor(&slack, &coef));
            } else if coef < 0 {
                a = a.max(-Integer::div_floor(&slack, &(-coef)));
            } else if slack < 0 {
                return None;
            }
            if a > b {
                return None;
            }
        }
        Some((a, b))
    }

    fn count_rec(f: &Frame<'_>, i: usize, partials: &mut [Vec<i64>]) -> u64 {
        let Some((a, b)) = Self::interval(f, i, &partials[i]) else {
            return 0;
        };
        if i + 1 == f.counter.dim {
            return (b - a + 1) as u64;
        }
        let mut total = 0;
        for y in a..=b {
            let (head, tail) = partials.split_at_mut(i + 1);
            for ((next, cur), row) in tail[0].iter_mut().zip(&head[i]).zip(&f.counter.rows) {
                *next = cur + row[i] * y;
            }
            total += Self::count_rec(f, i + 1, partials);
        }
        total
    }

    /// Number of integer points in `k·R`.
    pub fn count(&self, k: u64) -> Result<u64> {
        let k = i64::try_from(k).map_err(|_| crate::error::Error::Overflow("dilation factor"))?;
        if self.dim == 0 {
            return Ok(u64::from(self.rhs.iter().all(|&b| b * k >= 0)));
        }
        let f = self.frame(k)?;
        let mut partials = vec![vec![0i64; self.rows.len()]; self.dim];
        Ok(Self::count_rec(&f, 0, &mut partials))
    }

    fn points_rec(f: &Frame<'_>, i: usize, prefix: &mut Vec<i64>, partials: &mut [Vec<i64>], out: &mut Vec<Vec<i64>>) {
        let Some((a, b)) = Self::interval(f, i, &partials[i]) else {
            return;
        };
        for y in a..=b {
            prefix.push(y);
            if i + 1 == f.counter.dim {
                out.push(prefix.clone());
            } else {
                let (head, tail) = partials.split_at_mut(i + 1);
                for ((next, cur), row) in tail[0].iter_mut().zip(&head[i]).zip(&f.counter.rows) {
                    *next = cur + row[i] * y;
                }
                Self::points_rec(f, i + 1, prefix, partials, out);
            }
            prefix.pop();
        }
    }

    /// All integer points of `k·R`, in lexicographic order.
    pub fn points(&self, k: u64) -> Result<Vec<Vec<i64>>> {
        let k = i64::try_from(k).map_err(|_| crate::error::Error::Overflow("dilation factor"))?;
        if self.dim == 0 {
            return Ok(if self.rhs.iter().all(|&b| b * k >= 0) {
                vec![vec![]]
            } else {
                vec![]
            });
        }
        let f = self.frame(k)?;
        let mut partials = vec![vec![0i64; self.rows.len()]; self.dim];
        let mut out = Vec::new();
        Self::points_rec(&f, 0, &mut Vec::new(), &mut partials, &mut out);
        Ok(out)
    }
}

/// Integer points of a cone sliced by height, restricted to a saturated sublattice.
#[derive(Clone, Debug)]
pub struct ConeSlices {
    /// Smallest positive height of a lattice point; `None` if the lattice is flat
    /// (then only height 0 is populated, by the origin).
    step: Option<u64>,
    base: Vec<BigInt>,
    rest: ZMat,
    counter: SliceCounter,
}

impl ConeSlices {
    /// `lattice`: saturated basis rows in ℤ^{1+n}, height = coordinate 0.
    /// `cone`: functionals `F` with `F(z) ≥ 0` on the cone.
    /// `box_points`: lifted points `(1, v)` whose hull contains every `(1, x)` of interest.
    pub fn new(lattice: &ZMat, cone: &QMat, box_points: &QMat) -> Result<Self> {
        let Some((step, base, rest)) = split_by_height(lattice, |r| r[0].clone()) else {
            return Ok(ConeSlices {
                step: None,
                base: Vec::new(),
                rest: Vec::new(),
                counter: SliceCounter::new(Vec::new(), Vec::new(), Vec::new(), Vec::new()),
            });
        };
        let mut full: QMat = vec![zrow_to_q(&base)];
        full.extend(rest.iter().map(|r| zrow_to_q(r)));
        let coords = Coordinates::new(full);
        let dim = rest.len();
        let base_q = zrow_to_q(&base);
        let step_q = Rational::from_integer(step.clone());

        let mut rows = Vec::with_capacity(cone.len());
        let mut rhs = Vec::with_capacity(cone.len());
        for f in cone {
            // F(k·b₀ + Σ yᵢ bᵢ) ≥ 0  ⇔  Σ (−F·bᵢ) yᵢ ≤ k·(F·b₀)
            let mut coeffs: Vec<Rational> = rest.iter().map(|r| -dot(f, &zrow_to_q(r))).collect();
            coeffs.push(dot(f, &base_q));
            let l = denominator_lcm(&coeffs);
            let ints = coeffs
                .iter()
                .map(|c| to_i64(&(c * &l).to_integer(), "cone constraint"))
                .collect::<Result<Vec<_>>>()?;
            if ints[..dim].iter().all(|&c| c == 0) && ints[dim] >= 0 {
                continue;
            }
            rhs.push(ints[dim]);
            rows.push(ints[..dim].to_vec());
        }

        let mut lo = Vec::with_capacity(dim);
        let mut hi = Vec::with_capacity(dim);
        for i in 0..dim {
            let phi = coords.functional(i + 1);
            let vals: Vec<Rational> = box_points.iter().map(|p| dot(&phi, p) * &step_q).collect();
            lo.push(vals.iter().min().cloned().unwrap_or_else(Rational::zero));
            hi.push(vals.iter().max().cloned().unwrap_or_else(Rational::zero));
        }
        let step = step.to_u64().ok_or(crate::error::Error::Overflow("lattice step"))?;
        Ok(ConeSlices {
            step: Some(step),
            base,
            rest,
            counter: SliceCounter::new(rows, rhs, lo, hi),
        })
    }

    pub fn step(&self) -> Option<u64> {
        self.step
    }

    pub fn counter(&self) -> &SliceCounter {
        &self.counter
    }

    /// Number of lattice points at height `m`.
    pub fn count(&self, m: u64) -> Result<u64> {
        if m == 0 {
            return Ok(1);
        }
        match self.step {
            Some(c) if m % c == 0 => self.counter.count(m / c),
            _ => Ok(0),
        }
    }

    /// Lattice points `x` with `(m, x)` in the slice.
    pub fn points(&self, m: u64, n: usize) -> Result<Vec<Vec<i64>>> {
        if m == 0 {
            return Ok(vec![vec![0; n]]);
        }
        let Some(c) = self.step.filter(|c| m % c == 0) else {
            return Ok(Vec::new());
        };
        let k = BigInt::from(m / c);
        self.counter
            .points(m / c)?
            .into_iter()
            .map(|y| {
                let mut z: Vec<BigInt> = self.base.iter().map(|b| b * &k).collect();
                for (yi, r) in y.iter().zip(&self.rest) {
                    for (zj, rj) in z.iter_mut().zip(r) {
                        *zj += rj * BigInt::from(*yi);
                    }
                }
                z[1..].iter().map(|x| to_i64(x, "lattice point")).collect()
            })
            .collect()
    }
}

trait ToU64 {
    fn to_u64(&self) -> Option<u64>;
}

impl ToU64 for BigInt {
    fn to_u64(&self) -> Option<u64> {
        (!self.is_negative()).then(|| u64::try_from(self).ok()).flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    #[test]
    fn interval_counts() {
        // R = [-1/2, 1/2]  as  2y ≤ 1, -2y ≤ 1
        let c = SliceCounter::new(vec![vec![2], vec![-2]], vec![1, 1], vec![qf(-1, 2)], vec![qf(1, 2)]);
        let counts: Vec<u64> = (0..6).map(|k| c.count(k).unwrap()).collect();
        assert_eq!(counts, vec![1, 1, 3, 3, 5, 5]);
    }

    #[test]
    fn triangle_points() {
        // x ≥ 0, y ≥ 0, x + y ≤ 1
        let c = SliceCounter::new(
            vec![vec![-1, 0], vec![0, -1], vec![1, 1]],
            vec![0, 0, 1],
            vec![q(0), q(0)],
            vec![q(1), q(1)],
        );
        assert_eq!(c.count(3).unwrap(), 10);
        assert_eq!(c.points(1).unwrap(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }
}
