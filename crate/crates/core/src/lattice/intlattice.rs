//! Integer lattices: Hermite normal form, saturated kernels, sublattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::{nullspace, Coordinates, IMat, QMat};
use crate::algebra::rational::{primitive_integer_vector, to_i64};
use crate::algebra::Rational;
use crate::error::{Error, Result};

pub type ZMat = Vec<Vec<BigInt>>;

fn sub_row_multiple(rows: &mut [Vec<BigInt>], target: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    let s = rows[src].clone();
    for (t, x) in rows[target].iter_mut().zip(&s) {
        *t -= f * x;
    }
}

/// Row Hermite normal form `H = U·A` together with the unimodular `U`.
///
/// Pivots are positive and entries above each pivot are reduced into `[0, pivot)`.
/// Zero rows of `H` are kept at the bottom, so `H` has as many rows as `A`.
pub fn hnf_with_transform(a: &ZMat) -> (ZMat, ZMat) {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut h = a.to_vec();
    let mut u: ZMat = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        loop {
            let piv = (row..m)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&i, &j| h[i][col].abs().cmp(&h[j][col].abs()));
            let Some(p) = piv else { break };
            h.swap(row, p);
            u.swap(row, p);
            let mut done = true;
            for i in row + 1..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let f = h[i][col].div_floor(&h[row][col]);
                sub_row_multiple(&mut h, i, row, &f);
                sub_row_multiple(&mut u, i, row, &f);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[row][col].is_zero() {
            continue;
        }
        if h[row][col].is_negative() {
            for x in h[row].iter_mut().chain(u[row].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..row {
            let f = h[i][col].div_floor(&h[row][col]);
            sub_row_multiple(&mut h, i, row, &f);
            sub_row_multiple(&mut u, i, row, &f);
        }
        row += 1;
    }
    (h, u)
}

/// Nonzero rows of the row Hermite normal form: a canonical basis of the row lattice.
pub fn hnf(a: &ZMat) -> ZMat {
    let (h, _) = hnf_with_transform(a);
    h.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Basis of the integer kernel `{x ∈ ℤⁿ : A·x = 0}`. The kernel of an integer
/// matrix is automatically saturated.
pub fn integer_kernel(a: &ZMat, n: usize) -> ZMat {
    if a.is_empty() {
        return identity_z(n);
    }
    let at: ZMat = (0..n).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect();
    let (h, u) = hnf_with_transform(&at);
    let ker: ZMat = h
        .iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(|x| x.is_zero()))
        .map(|(_, ur)| ur)
        .collect();
    hnf(&ker)
}

pub fn identity_z(n: usize) -> ZMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_z(m: &ZMat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn to_zmat(m: &IMat) -> ZMat {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn zrow_to_q(r: &[BigInt]) -> Vec<Rational> {
    r.iter().cloned().map(Rational::from_integer).collect()
}

/// Integer rows spanning the orthogonal complement of the span of `vectors`.
fn equations_of_span(vectors: &QMat, n: usize) -> ZMat {
    if vectors.is_empty() {
        return identity_z(n);
    }
    nullspace(vectors, n)
        .iter()
        .map(|v| primitive_integer_vector(v))
        .collect()
}

/// A sublattice of ℤⁿ with its canonical (Hermite) basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient_dim: usize,
    basis: ZMat,
}

impl Sublattice {
    pub fn from_generators(ambient_dim: usize, gens: &ZMat) -> Self {
        Sublattice {
            ambient_dim,
            basis: hnf(gens),
        }
    }

    pub fn full(n: usize) -> Self {
        Sublattice {
            ambient_dim: n,
            basis: identity_z(n),
        }
    }

    /// The saturated lattice `{x ∈ ℤⁿ : A·x = 0}`.
    pub fn from_equations(n: usize, eqs: &ZMat) -> Self {
        Sublattice {
            ambient_dim: n,
            basis: integer_kernel(eqs, n),
        }
    }

    /// The saturated lattice `span_ℚ(vectors) ∩ ℤⁿ`.
    pub fn from_span(n: usize, vectors: &QMat) -> Self {
        Self::from_equations(n, &equations_of_span(vectors, n))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &ZMat {
        &self.basis
    }

    pub fn basis_q(&self) -> QMat {
        self.basis.iter().map(|r| zrow_to_q(r)).collect()
    }

    pub fn basis_i64(&self) -> Result<IMat> {
        self.basis
            .iter()
            .map(|r| r.iter().map(|x| to_i64(x, "sublattice basis")).collect())
            .collect()
    }

    /// Integer equations cutting out the rational span.
    pub fn equations(&self) -> ZMat {
        if self.basis.is_empty() {
            return identity_z(self.ambient_dim);
        }
        equations_of_span(&self.basis_q(), self.ambient_dim)
    }

    /// Saturated lattice of the intersection of the two rational spans.
    pub fn intersect_spans(&self, other: &Sublattice) -> Sublattice {
        let mut eqs = self.equations();
        eqs.extend(other.equations());
        Sublattice::from_equations(self.ambient_dim, &eqs)
    }

    pub fn in_span(&self, x: &[Rational]) -> bool {
        self.coordinates().is_some_and(|c| c.coords(x).is_some())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        match self.coordinates() {
            None => x.iter().all(|v| v.is_zero()),
            Some(c) => c.coords(x).is_some_and(|y| y.iter().all(|v| v.is_integer())),
        }
    }

    /// Coordinate map for the basis, or `None` for the zero lattice.
    pub fn coordinates(&self) -> Option<Coordinates> {
        (!self.basis.is_empty()).then(|| Coordinates::new(self.basis_q()))
    }

    pub fn is_saturated(&self) -> bool {
        *self == Sublattice::from_span(self.ambient_dim, &self.basis_q())
    }
}

/// Saturated integer kernel of `A − I`: the lattice of points fixed by `A`.
pub fn fixed_sublattice(a: &IMat) -> Sublattice {
    let n = a.len();
    let eqs: ZMat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, &x)| BigInt::from(x - i64::from(i == j)))
                .collect()
        })
        .collect();
    Sublattice::from_equations(n, &eqs)
}

/// A lattice basis split along an integer height functional: `first` has height
/// `step > 0` and `rest` spans the height-zero part. Returns `None` if every basis
/// vector has height zero.
pub fn split_by_height(basis: &ZMat, height: impl Fn(&[BigInt]) -> BigInt) -> Option<(BigInt, Vec<BigInt>, ZMat)> {
    let mut rows = basis.to_vec();
    let mut h: Vec<BigInt> = rows.iter().map(|r| height(r)).collect();
    // Euclid on the heights, mirrored on the rows (unimodular).
    loop {
        let nz: Vec<usize> = (0..h.len()).filter(|&i| !h[i].is_zero()).collect();
        if nz.is_empty() {
            return None;
        }
        let p = *nz.iter().min_by_key(|&&i| h[i].abs()).unwrap();
        if nz.len() == 1 {
            if h[p].is_negative() {
                rows[p] = rows[p].iter().map(|x| -x).collect();
                h[p] = -&h[p];
            }
            let first = rows.remove(p);
            return Some((h[p].clone(), first, rows));
        }
        for &i in &nz {
            if i == p {
                continue;
            }
            let f = h[i].div_floor(&h[p]);
            let src = rows[p].clone();
            for (t, x) in rows[i].iter_mut().zip(&src) {
                *t -= &f * x;
            }
            h[i] = &h[i] - &f * &h[p];
        }
    }
}

pub fn check_square(a: &IMat) -> Result<usize> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::lattice::linalg::identity_i;

    fn z(m: &[&[i64]]) -> ZMat {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_is_canonical() {
        let a = z(&[&[2, 4], &[3, 5]]);
        let b = z(&[&[1, 1], &[0, 2]]);
        // both generate {(x,y): x + y even}? check against explicit HNF
        assert_eq!(hnf(&a), z(&[&[1, 1], &[0, 2]]));
        assert_eq!(hnf(&b), hnf(&a));
    }

    #[test]
    fn double_transposition_fixed_lattice() {
        let p = vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]];
        let l = fixed_sublattice(&p);
        assert_eq!(l.rank(), 2);
        assert_eq!(l.basis(), &z(&[&[1, 1, 0, 0], &[0, 0, 1, 1]]));
        assert!(l.is_saturated());
    }

    #[test]
    fn identity_and_reflection_fixed_lattices() {
        assert_eq!(fixed_sublattice(&identity_i(3)), Sublattice::full(3));
        let mut r = identity_i(4);
        r[3][3] = -1;
        let l = fixed_sublattice(&r);
        assert_eq!(l.rank(), 3);
        assert!(l.contains(&[q(5), q(-2), q(7), q(0)]));
        assert!(!l.in_span(&[q(0), q(0), q(0), q(1)]));
    }

    #[test]
    fn kernel_is_saturated() {
        // x + y + z = 0 intersected with 2x = 2y
        let l = Sublattice::from_equations(3, &z(&[&[1, 1, 1], &[2, -2, 0]]));
        assert_eq!(l.basis(), &z(&[&[1, 1, -2]]));
        assert!(l.is_saturated());
    }

    #[test]
    fn bareiss_det() {
        assert_eq!(det_z(&z(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(det_z(&z(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det_z(&z(&[&[1, 2], &[2, 4]])), BigInt::from(0));
    }

    #[test]
    fn height_split() {
        let basis = z(&[&[2, 1, 0], &[4, 0, 1]]);
        let (step, first, rest) = split_by_height(&basis, |r| r[0].clone()).unwrap();
        assert_eq!(step, BigInt::from(2));
        assert_eq!(first[0], BigInt::from(2));
        assert_eq!(rest.len(), 1);
        assert!(rest[0][0].is_zero());
    }
}
