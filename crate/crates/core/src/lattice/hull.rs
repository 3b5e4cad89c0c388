//! Exact facet enumeration for small full-dimensional point sets.
//!
//! Every affinely independent D-subset of the input spans a candidate
//! hyperplane; candidates with all points on one side are facets. The input
//! sizes here stay around 2D points in dimension ≤ 10, where the C(n, D)
//! enumeration is cheap and needs nothing beyond integer determinants.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::linalg::{rank, QMat};
use crate::algebra::rational::denominator_lcm;
use crate::algebra::Rational;
use crate::error::{Error, Result};

/// The closed halfspace `⟨normal, x⟩ ≤ offset`, with `(normal, offset)` a
/// jointly primitive integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Halfspace {
    pub fn value(&self, x: &[Rational]) -> Rational {
        self.normal
            .iter()
            .zip(x)
            .fold(Rational::from_integer(0.into()), |acc, (a, v)| {
                acc + v * Rational::from_integer((*a).into())
            })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.value(x) <= Rational::from_integer(self.offset.into())
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.value(x) == Rational::from_integer(self.offset.into())
    }
}

fn det_i128(m: &mut [Vec<i128>]) -> Result<i128> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let ovf = || Error::Overflow("hull determinant");
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Ok(0);
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k]).ok_or_else(ovf)?;
                let b = m[i][k].checked_mul(m[k][j]).ok_or_else(ovf)?;
                m[i][j] = a.checked_sub(b).ok_or_else(ovf)? / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// Normal of the hyperplane through `pts` (D points in ℤᴰ), or `None` when they
/// are affinely dependent.
fn hyperplane_normal(pts: &[&Vec<i128>]) -> Result<Option<Vec<i128>>> {
    let d = pts[0].len();
    let diffs: Vec<Vec<i128>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(pts[0].iter()).map(|(a, b)| a - b).collect())
        .collect();
    let mut normal = Vec::with_capacity(d);
    for j in 0..d {
        let mut minor: Vec<Vec<i128>> = diffs
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let det = det_i128(&mut minor)?;
        normal.push(if j % 2 == 0 { det } else { -det });
    }
    let g = normal.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g == 0 {
        return Ok(None);
    }
    Ok(Some(normal.into_iter().map(|x| x / g).collect()))
}

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if k > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return Ok(());
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Facets of the convex hull of `points`, which must affinely span ℚᴰ.
pub fn facets(points: &[Vec<Rational>]) -> Result<Vec<Halfspace>> {
    let d = points.first().map_or(0, |p| p.len());
    if d == 0 {
        return Ok(Vec::new());
    }
    let scale = denominator_lcm(points.iter().flatten());
    let scaled: Vec<Vec<i128>> = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|x| i128::try_from((x * &scale).to_integer()).map_err(|_| Error::Overflow("hull input")))
                .collect()
        })
        .collect::<Result<_>>()?;
    let scale = i128::try_from(scale).map_err(|_| Error::Overflow("hull scale"))?;

    let mut found: BTreeSet<Halfspace> = BTreeSet::new();
    for_each_subset(scaled.len(), d, &mut |idx| {
        let pts: Vec<&Vec<i128>> = idx.iter().map(|&i| &scaled[i]).collect();
        let Some(mut normal) = hyperplane_normal(&pts)? else {
            return Ok(());
        };
        let dot = |p: &Vec<i128>, a: &Vec<i128>| -> i128 { p.iter().zip(a).map(|(x, y)| x * y).sum() };
        let mut offset = dot(pts[0], &normal);
        let (mut below, mut above) = (false, false);
        for p in &scaled {
            let v = dot(p, &normal);
            below |= v < offset;
            above |= v > offset;
            if below && above {
                return Ok(());
            }
        }
        if above {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        // ⟨a, x⟩ ≤ offset / scale  ⇔  ⟨scale·a, x⟩ ≤ offset
        let mut full: Vec<i128> = normal.iter().map(|x| x * scale).collect();
        full.push(offset);
        let g = full.iter().fold(0i128, |g, &x| g.gcd(&x));
        let conv = |x: i128| i64::try_from(x / g).map_err(|_| Error::Overflow("facet normal"));
        let off = conv(full.pop().unwrap())?;
        let nrm = full.into_iter().map(conv).collect::<Result<Vec<_>>>()?;
        found.insert(Halfspace {
            normal: nrm,
            offset: off,
        });
        Ok(())
    })?;
    Ok(found.into_iter().collect())
}

/// Indices of the points that are vertices of their hull, given its facets.
pub fn vertex_indices(points: &[Vec<Rational>], facets: &[Halfspace]) -> Vec<usize> {
    let d = points.first().map_or(0, |p| p.len());
    if d == 0 {
        return (0..points.len().min(1)).collect();
    }
    (0..points.len())
        .filter(|&i| {
            let tight: QMat = facets
                .iter()
                .filter(|h| h.is_tight(&points[i]))
                .map(|h| {
                    h.normal
                        .iter()
                        .map(|&x| Rational::from_integer(BigInt::from(x)))
                        .collect()
                })
                .collect();
            rank(&tight) == d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    fn hs(n: &[i64], b: i64) -> Halfspace {
        Halfspace {
            normal: n.to_vec(),
            offset: b,
        }
    }

    #[test]
    fn rational_diamond() {
        let pts = vec![
            vec![q(1), q(0)],
            vec![q(-1), q(0)],
            vec![q(0), qf(1, 2)],
            vec![q(0), qf(-1, 2)],
        ];
        let f = facets(&pts).unwrap();
        let expect: BTreeSet<_> = [hs(&[1, 2], 1), hs(&[1, -2], 1), hs(&[-1, 2], 1), hs(&[-1, -2], 1)]
            .into_iter()
            .collect();
        assert_eq!(f.into_iter().collect::<BTreeSet<_>>(), expect);
    }

    #[test]
    fn square_and_simplex() {
        let sq: Vec<Vec<Rational>> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
            .iter()
            .map(|&(a, b)| vec![q(a), q(b)])
            .collect();
        let f: BTreeSet<_> = facets(&sq).unwrap().into_iter().collect();
        let expect: BTreeSet<_> = [hs(&[1, 0], 1), hs(&[-1, 0], 1), hs(&[0, 1], 1), hs(&[0, -1], 1)]
            .into_iter()
            .collect();
        assert_eq!(f, expect);

        let simplex = vec![
            vec![q(0), q(0), q(0)],
            vec![q(1), q(0), q(0)],
            vec![q(0), q(1), q(0)],
            vec![q(0), q(0), q(1)],
        ];
        let f: BTreeSet<_> = facets(&simplex).unwrap().into_iter().collect();
        let expect: BTreeSet<_> = [
            hs(&[-1, 0, 0], 0),
            hs(&[0, -1, 0], 0),
            hs(&[0, 0, -1], 0),
            hs(&[1, 1, 1], 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(f, expect);
    }

    #[test]
    fn interior_points_are_not_vertices() {
        let pts = vec![vec![q(0)], vec![q(2)], vec![q(1)], vec![qf(1, 3)]];
        let f = facets(&pts).unwrap();
        assert_eq!(f, vec![hs(&[-1], 0), hs(&[1], 2)]);
        assert_eq!(vertex_indices(&pts, &f), vec![0, 1]);
    }
}
