//! Decomposition of a lattice into affine slices along a group-invariant vector.
//!
//! With the averaged inner product `⟨u, v⟩_G = (1/|G|) Σ_g ⟨g·u, g·v⟩`, the lattice
//! `N = (e^⊥ ∩ M) + ℤ·e` has finite index in `M`, and `M` splits into the slices
//! `M_i = (i/[M:N]·e + e^⊥) ∩ M`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::intlattice::{det_z, integer_kernel, zrow_to_q, ZMat};
use super::linalg::{dot, IMat, QMat};
use crate::algebra::rational::primitive_integer_vector;
use crate::algebra::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineDecomposition {
    pub e: Vec<i64>,
    /// Basis of `e^⊥ ∩ M` for the averaged inner product.
    pub orthogonal_basis: ZMat,
    /// `[M : N]`.
    pub index: BigInt,
    gram: QMat,
}

/// Gram matrix `(1/|G|) Σ_g gᵀ·g` of the averaged inner product.
pub fn averaged_gram(elements: &[IMat], n: usize) -> QMat {
    let mut s = vec![vec![Rational::zero(); n]; n];
    for g in elements {
        for (i, row) in s.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let v: i64 = (0..n).map(|k| g[k][i] * g[k][j]).sum();
                *x += Rational::from_integer(v.into());
            }
        }
    }
    let size = Rational::from_integer((elements.len().max(1) as i64).into());
    s.into_iter()
        .map(|r| r.into_iter().map(|x| x / &size).collect())
        .collect()
}

fn mat_vec(m: &QMat, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|r| dot(r, v)).collect()
}

pub fn affine_decomposition(elements: &[IMat], e: &[i64]) -> Result<AffineDecomposition> {
    let n = e.len();
    if e.iter().all(|&x| x == 0) {
        return Err(Error::InvalidInput("invariant vector must be nonzero".into()));
    }
    for g in elements {
        let ge: Vec<i64> = g.iter().map(|r| r.iter().zip(e).map(|(a, b)| a * b).sum()).collect();
        if ge != e {
            return Err(Error::NotFixed(format!("{e:?}")));
        }
    }
    let gram = averaged_gram(elements, n);
    let eq: Vec<Rational> = e.iter().map(|&x| Rational::from_integer(x.into())).collect();
    let normal = primitive_integer_vector(&mat_vec(&gram, &eq));
    let orthogonal_basis = integer_kernel(&vec![normal], n);
    let mut gens = orthogonal_basis.clone();
    gens.push(e.iter().map(|&x| BigInt::from(x)).collect());
    let index = det_z(&gens).abs();
    Ok(AffineDecomposition {
        e: e.to_vec(),
        orthogonal_basis,
        index,
        gram,
    })
}

impl AffineDecomposition {
    /// The `i` with `x ∈ M_i`; an integer for every `x ∈ M`.
    pub fn level(&self, x: &[i64]) -> Rational {
        let xq: Vec<Rational> = x.iter().map(|&v| Rational::from_integer(v.into())).collect();
        let eq = zrow_to_q(&self.e.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
        let ge = mat_vec(&self.gram, &eq);
        dot(&xq, &ge) * Rational::from_integer(self.index.clone()) / dot(&eq, &ge)
    }

    pub fn in_slice(&self, x: &[i64], i: i64) -> bool {
        self.level(x) == Rational::from_integer(i.into())
    }
}
