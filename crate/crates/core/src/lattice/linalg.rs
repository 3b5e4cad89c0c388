//! Small dense linear algebra over ℚ.

use num_traits::{One, Zero};

use crate::algebra::{Poly, Rational};

pub type QMat = Vec<Vec<Rational>>;
pub type IMat = Vec<Vec<i64>>;

pub fn to_qmat(m: &IMat) -> QMat {
    m.iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect()
}

pub fn identity_i(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul_i(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for l in 0..k {
            let x = a[i][l];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * b[l][j];
            }
        }
    }
    out
}

pub fn mat_vec_i(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn mat_vec_q(a: &IMat, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|r| {
            r.iter()
                .zip(v)
                .filter(|(x, _)| **x != 0)
                .fold(Rational::zero(), |acc, (x, y)| {
                    acc + y * Rational::from_integer((*x).into())
                })
        })
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(m: &QMat) -> (QMat, Vec<usize>) {
    let mut a: QMat = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &QMat) -> usize {
    rref(m).1.len()
}

/// Basis of `{x : m·x = 0}` where `m` has `cols` columns.
pub fn nullspace(m: &QMat, cols: usize) -> QMat {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            v
        })
        .collect()
}

/// Picks a maximal linearly independent subset of `rows`, preserving order.
pub fn independent_rows(rows: &QMat) -> QMat {
    let mut basis: QMat = Vec::new();
    for r in rows {
        let mut trial = basis.clone();
        trial.push(r.clone());
        if rank(&trial) == trial.len() {
            basis = trial;
        }
    }
    basis
}

/// Coordinates with respect to a list of linearly independent row vectors.
#[derive(Clone, Debug)]
pub struct Coordinates {
    basis: QMat,
    pivots: Vec<usize>,
    inv: QMat,
}

impl Coordinates {
    /// # Panics
    /// Panics if the rows are not linearly independent.
    pub fn new(basis: QMat) -> Self {
        let k = basis.len();
        let (_, pivots) = rref(&transpose(&basis));
        assert_eq!(pivots.len(), k, "basis rows must be independent");
        // columns where the basis is invertible
        let (_, cols) = rref(&basis);
        let sub: QMat = basis
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        let inv = inverse(&sub).expect("square submatrix on pivot columns is invertible");
        Coordinates {
            basis,
            pivots: cols,
            inv,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &QMat {
        &self.basis
    }

    /// `y` with `Σ yᵢ·basisᵢ = v`, assuming `v` lies in the span.
    pub fn coords_unchecked(&self, v: &[Rational]) -> Vec<Rational> {
        let k = self.basis.len();
        (0..k)
            .map(|j| {
                self.pivots
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (i, &c)| acc + &v[c] * &self.inv[i][j])
            })
            .collect()
    }

    /// Coordinates of `v`, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let y = self.coords_unchecked(v);
        (self.combine(&y) == v).then_some(y)
    }

    pub fn combine(&self, y: &[Rational]) -> Vec<Rational> {
        let n = self.basis.first().map_or(0, |r| r.len());
        let mut out = vec![Rational::zero(); n];
        for (c, row) in y.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += c * x;
            }
        }
        out
    }

    /// The coordinate functional `v ↦ yⱼ` as a vector on the ambient space.
    pub fn functional(&self, j: usize) -> Vec<Rational> {
        let n = self.basis.first().map_or(0, |r| r.len());
        let mut f = vec![Rational::zero(); n];
        for (i, &c) in self.pivots.iter().enumerate() {
            f[c] = self.inv[i][j].clone();
        }
        f
    }
}

pub fn transpose(m: &QMat) -> QMat {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect()
}

pub fn inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul_q(a: &QMat, b: &QMat) -> QMat {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

/// Characteristic polynomial `det(x·I − M)` by the Faddeev–LeVerrier recursion.
pub fn charpoly(m: &QMat) -> Poly {
    let n = m.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk: QMat = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = M·M_{k-1} + c_{n-k+1}·I
        let mut next = mat_mul_q(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let amk = mat_mul_q(m, &next);
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + &amk[i][i]);
        coeffs[n - k] = -trace / Rational::from_integer((k as i64).into());
        mk = next;
    }
    Poly::new(coeffs)
}

/// `det(I − t·M)` as a polynomial in `t` of degree at most `dim M`.
pub fn det_one_minus_t(m: &QMat) -> Poly {
    let n = m.len();
    let cp = charpoly(m);
    Poly::new((0..=n).map(|i| cp.coeff(n - i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn nullspace_of_rank_one() {
        let m = vec![vec![q(1), q(1), q(1)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(dot(&m[0], v), q(0));
        }
    }

    #[test]
    fn det_of_swap() {
        let swap = to_qmat(&vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(det_one_minus_t(&swap), Poly::from_ints(&[1, 0, -1]));
        let id = to_qmat(&identity_i(3));
        assert_eq!(det_one_minus_t(&id), Poly::from_ints(&[1, -1]).pow(3));
    }

    #[test]
    fn coordinates_roundtrip() {
        let b = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let c = Coordinates::new(b);
        let v = vec![q(2), q(5), q(3)];
        assert_eq!(c.coords(&v).unwrap(), vec![q(2), q(3)]);
        assert!(c.coords(&[q(1), q(0), q(0)]).is_none());
        let f = c.functional(1);
        assert_eq!(dot(&f, &v), q(3));
    }
}
