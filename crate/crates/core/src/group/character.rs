//! Character tables with cyclotomic entries, class functions and decomposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{rational_to_integer, serde_integer_vec, serde_rational_vec};
use crate::algebra::{format_rational, CycloNum, Poly, Rational};
use crate::error::{Error, Result};
use crate::lattice::linalg::{det_one_minus_t, to_qmat, IMat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    /// Exponent of the group; every entry lies in ℚ(ζ_exponent).
    pub exponent: u64,
    pub class_sizes: Vec<usize>,
    pub class_labels: Vec<String>,
    pub irrep_labels: Vec<String>,
    pub rows: Vec<Vec<CycloNum>>,
}

/// Values of a class function, one per conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassFunction {
    #[serde(with = "serde_rational_vec")]
    pub values: Vec<Rational>,
}

/// Integer multiplicities of the irreducible characters, in table row order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VirtualCharacter {
    #[serde(with = "serde_integer_vec")]
    pub multiplicities: Vec<BigInt>,
}

impl ClassFunction {
    pub fn from_ints(values: &[i64]) -> Self {
        ClassFunction {
            values: values.iter().map(|&v| Rational::from_integer(v.into())).collect(),
        }
    }
}

impl VirtualCharacter {
    pub fn from_ints(m: &[i64]) -> Self {
        VirtualCharacter {
            multiplicities: m.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }
}

impl CharacterTable {
    pub fn group_order(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    /// `(1/|G|) Σ_c |c|·f(c)·conj(g(c))`.
    pub fn inner(&self, f: &[CycloNum], g: &[CycloNum]) -> CycloNum {
        let mut acc = CycloNum::zero();
        for ((size, a), b) in self.class_sizes.iter().zip(f).zip(g) {
            let term = &(a * &b.conj()) * &CycloNum::from_int(*size as i64);
            acc = &acc + &term;
        }
        &acc * &CycloNum::rational(Rational::new(1.into(), (self.group_order() as i64).into()))
    }

    /// Row and column orthogonality, trivial first row and `Σ χ(1)² = |G|`.
    pub fn check_orthogonality(&self) -> Result<()> {
        let k = self.num_classes();
        let bad = |msg: String| Err(Error::TableMismatch(msg));
        if self.rows.len() != k || self.rows.iter().any(|r| r.len() != k) || self.class_labels.len() != k {
            return bad(format!("table is not square over {k} classes"));
        }
        if self.irrep_labels.len() != k {
            return bad("irrep label count differs from class count".into());
        }
        if self.rows[0].iter().any(|x| *x != CycloNum::one()) {
            return bad("first row is not the trivial character".into());
        }
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in self.rows.iter().enumerate() {
                let want = CycloNum::from_int(i64::from(i == j));
                if self.inner(a, b) != want {
                    return bad(format!(
                        "rows {} and {} are not orthonormal",
                        self.irrep_labels[i], self.irrep_labels[j]
                    ));
                }
            }
        }
        let order = self.group_order() as i64;
        for c in 0..k {
            for d in 0..k {
                let s = self
                    .rows
                    .iter()
                    .fold(CycloNum::zero(), |acc, r| &acc + &(&r[c] * &r[d].conj()));
                let want = if c == d {
                    CycloNum::rational(Rational::new(order.into(), (self.class_sizes[c] as i64).into()))
                } else {
                    CycloNum::zero()
                };
                if s != want {
                    return bad(format!(
                        "columns {} and {} fail orthogonality",
                        self.class_labels[c], self.class_labels[d]
                    ));
                }
            }
        }
        let dims = self
            .rows
            .iter()
            .fold(CycloNum::zero(), |acc, r| &acc + &(&r[0] * &r[0]));
        if dims != CycloNum::from_int(order) {
            return bad("squared degrees do not sum to the group order".into());
        }
        Ok(())
    }

    /// Reindexes the columns: new column `c` is old column `perm[c]`.
    pub fn permute_columns(&self, perm: &[usize], sizes: Vec<usize>, labels: Vec<String>) -> CharacterTable {
        CharacterTable {
            exponent: self.exponent,
            class_sizes: sizes,
            class_labels: labels,
            irrep_labels: self.irrep_labels.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| perm.iter().map(|&p| r[p].clone()).collect())
                .collect(),
        }
    }
}

fn zeta_sum(order: u64, a: i64, b: i64) -> CycloNum {
    &CycloNum::zeta_power(order, a) + &CycloNum::zeta_power(order, b)
}

fn power_label(gen: &str, k: u64) -> String {
    match k {
        0 => "1".into(),
        1 => gen.into(),
        _ => format!("{gen}^{k}"),
    }
}

/// Table of ℤ/n with classes `g^k` and characters `χ_{j+1}(g^k) = ζₙ^{jk}`.
pub fn char_table_cyclic(n: u64) -> CharacterTable {
    assert!(n >= 1);
    CharacterTable {
        exponent: n,
        class_sizes: vec![1; n as usize],
        class_labels: (0..n).map(|k| power_label("g", k)).collect(),
        irrep_labels: (0..n).map(|j| format!("chi_{}", j + 1)).collect(),
        rows: (0..n as i64)
            .map(|j| (0..n as i64).map(|k| CycloNum::zeta_power(n, j * k)).collect())
            .collect(),
    }
}

/// Class index in [`char_table_dihedral`] of `s^flip · r^k`.
pub fn dihedral_class(d: u64, flip: bool, k: u64) -> usize {
    let k = k % d;
    if !flip {
        return k.min(d - k) as usize;
    }
    if d % 2 == 1 {
        ((d - 1) / 2 + 1) as usize
    } else {
        (d / 2 + 1 + k % 2) as usize
    }
}

/// Table of the dihedral group of order `2d` with `s² = r^d = (sr)² = 1`.
///
/// Classes: `1`, `r^k` for `1 ≤ k ≤ ⌊d/2⌋`, then `s` (and `s r` when `d` is even).
/// Rows: `psi_1`, `psi_2` (sign on reflections), for even `d` also `psi_3`
/// (`r ↦ −1`, `s ↦ 1`) and `psi_4`, then `chi_j` for `1 ≤ j ≤ ⌊(d−1)/2⌋`.
pub fn char_table_dihedral(d: u64) -> CharacterTable {
    assert!(d >= 1);
    let even = d % 2 == 0;
    // class representatives as (flip, k)
    let mut reps: Vec<(bool, u64)> = (0..=d / 2).map(|k| (false, k)).collect();
    reps.push((true, 0));
    if even {
        reps.push((true, 1));
    }
    let mut class_sizes = Vec::with_capacity(reps.len());
    let mut class_labels = Vec::with_capacity(reps.len());
    for &(flip, k) in &reps {
        let size = match (flip, k) {
            (false, 0) => 1,
            (false, k) if even && k == d / 2 => 1,
            (false, _) => 2,
            (true, _) if even => d as usize / 2,
            (true, _) => d as usize,
        };
        class_sizes.push(size);
        class_labels.push(match (flip, k) {
            (false, k) => power_label("r", k),
            (true, 0) => "s".into(),
            (true, _) => "s r".into(),
        });
    }
    let sign = |k: u64| if k % 2 == 0 { 1 } else { -1 };
    let mut irrep_labels = vec!["psi_1".to_string(), "psi_2".to_string()];
    let mut rows: Vec<Vec<CycloNum>> = vec![
        reps.iter().map(|_| CycloNum::one()).collect(),
        reps.iter()
            .map(|&(f, _)| CycloNum::from_int(if f { -1 } else { 1 }))
            .collect(),
    ];
    if even {
        irrep_labels.push("psi_3".into());
        irrep_labels.push("psi_4".into());
        rows.push(reps.iter().map(|&(_, k)| CycloNum::from_int(sign(k))).collect());
        rows.push(
            reps.iter()
                .map(|&(f, k)| CycloNum::from_int(if f { -sign(k) } else { sign(k) }))
                .collect(),
        );
    }
    for j in 1..=(d - 1) / 2 {
        irrep_labels.push(format!("chi_{j}"));
        rows.push(
            reps.iter()
                .map(|&(f, k)| {
                    if f {
                        CycloNum::zero()
                    } else {
                        let e = (j * k) as i64;
                        zeta_sum(d, e, -e)
                    }
                })
                .collect(),
        );
    }
    CharacterTable {
        exponent: if even { d } else { 2 * d },
        class_sizes,
        class_labels,
        irrep_labels,
        rows,
    }
}

/// Table of `G₁ × G₂`: class `(a, b)` has index `a·k₂ + b`, row `(i, j)` has index `i·k₂ + j`.
pub fn char_table_product(a: &CharacterTable, b: &CharacterTable) -> CharacterTable {
    let pair = |x: &str, y: &str| format!("{x} x {y}");
    let mut class_sizes = Vec::new();
    let mut class_labels = Vec::new();
    for (sa, la) in a.class_sizes.iter().zip(&a.class_labels) {
        for (sb, lb) in b.class_sizes.iter().zip(&b.class_labels) {
            class_sizes.push(sa * sb);
            class_labels.push(format!("({})", pair(la, lb)));
        }
    }
    let mut irrep_labels = Vec::new();
    let mut rows = Vec::new();
    for (ra, la) in a.rows.iter().zip(&a.irrep_labels) {
        for (rb, lb) in b.rows.iter().zip(&b.irrep_labels) {
            irrep_labels.push(pair(la, lb));
            rows.push(ra.iter().flat_map(|x| rb.iter().map(move |y| x * y)).collect());
        }
    }
    CharacterTable {
        exponent: a.exponent.lcm(&b.exponent),
        class_sizes,
        class_labels,
        irrep_labels,
        rows,
    }
}

/// Multiplicities `mᵢ = ⟨f, χᵢ⟩`; each must be an integer and `Σ mᵢ χᵢ = f`.
pub fn decompose(f: &ClassFunction, t: &CharacterTable) -> Result<VirtualCharacter> {
    if f.values.len() != t.num_classes() {
        return Err(Error::DimensionMismatch(format!(
            "class function has {} values, table has {} classes",
            f.values.len(),
            t.num_classes()
        )));
    }
    let fv: Vec<CycloNum> = f.values.iter().cloned().map(CycloNum::rational).collect();
    let multiplicities = t
        .rows
        .iter()
        .map(|chi| rational_to_integer(&t.inner(&fv, chi).to_rational()?))
        .collect::<Result<Vec<_>>>()?;
    let v = VirtualCharacter { multiplicities };
    let back = reconstruct(&v, t);
    if back.iter().zip(&fv).any(|(a, b)| a != b) {
        return Err(Error::CrossCheck(
            "decomposition does not reproduce the class function".into(),
        ));
    }
    Ok(v)
}

/// `Σ mᵢ χᵢ` as cyclotomic values per class.
pub fn reconstruct(v: &VirtualCharacter, t: &CharacterTable) -> Vec<CycloNum> {
    (0..t.num_classes())
        .map(|c| {
            v.multiplicities
                .iter()
                .zip(&t.rows)
                .fold(CycloNum::zero(), |acc, (m, row)| {
                    if m.is_zero() {
                        return acc;
                    }
                    &acc + &(&row[c] * &CycloNum::rational(Rational::from_integer(m.clone())))
                })
        })
        .collect()
}

pub fn is_effective(v: &VirtualCharacter) -> bool {
    v.multiplicities.iter().all(|m| !m.is_negative())
}

/// `det(I − t·A)`.
pub fn det_factor(a: &IMat) -> Poly {
    det_one_minus_t(&to_qmat(a))
}

/// Human-readable `Σ mᵢ·labelᵢ`, e.g. `chi_1 - chi_2`.
pub fn format_virtual(v: &VirtualCharacter, labels: &[String]) -> String {
    let mut out = String::new();
    for (m, l) in v.multiplicities.iter().zip(labels) {
        if m.is_zero() {
            continue;
        }
        let mag = m.abs();
        let term = if mag == BigInt::from(1) {
            l.clone()
        } else {
            format!("{mag}*{l}")
        };
        if out.is_empty() {
            out = if m.is_negative() { format!("-{term}") } else { term };
        } else {
            out.push_str(if m.is_negative() { " - " } else { " + " });
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Class function values rendered canonically.
pub fn format_class_function(f: &ClassFunction) -> String {
    let vals: Vec<String> = f.values.iter().map(format_rational).collect();
    format!("({})", vals.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &VirtualCharacter) -> Vec<i64> {
        v.multiplicities.iter().map(|m| i64::try_from(m).unwrap()).collect()
    }

    #[test]
    fn c2_rows() {
        let t = char_table_cyclic(2);
        assert_eq!(t.rows[1], vec![CycloNum::one(), CycloNum::from_int(-1)]);
        t.check_orthogonality().unwrap();
        let reg = decompose(&ClassFunction::from_ints(&[2, 0]), &t).unwrap();
        assert_eq!(ints(&reg), vec![1, 1]);
    }

    #[test]
    fn dihedral_five() {
        let t = char_table_dihedral(5);
        assert_eq!(t.irrep_labels, vec!["psi_1", "psi_2", "chi_1", "chi_2"]);
        assert_eq!(t.class_sizes, vec![1, 2, 2, 5]);
        assert_eq!(t.rows[3][2], zeta_sum(5, 4, -4));
        t.check_orthogonality().unwrap();
        // regular character and the composite chi = Σ chi_j
        let reg = decompose(&ClassFunction::from_ints(&[10, 0, 0, 0]), &t).unwrap();
        assert_eq!(ints(&reg), vec![1, 1, 2, 2]);
        let chi = decompose(&ClassFunction::from_ints(&[4, -1, -1, 0]), &t).unwrap();
        assert_eq!(ints(&chi), vec![0, 0, 1, 1]);
    }

    #[test]
    fn dihedral_even_has_four_linear_characters() {
        let t = char_table_dihedral(6);
        assert_eq!(t.rows.len(), 6);
        assert_eq!(t.class_labels, vec!["1", "r", "r^2", "r^3", "s", "s r"]);
        t.check_orthogonality().unwrap();
        for d in [1, 2] {
            char_table_dihedral(d).check_orthogonality().unwrap();
        }
    }

    #[test]
    fn klein_four() {
        let t = char_table_product(&char_table_cyclic(2), &char_table_cyclic(2));
        t.check_orthogonality().unwrap();
        let signs: Vec<Vec<i64>> = t
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| i64::try_from(x.to_rational().unwrap().to_integer()).unwrap())
                    .collect()
            })
            .collect();
        assert_eq!(
            signs,
            vec![
                vec![1, 1, 1, 1],
                vec![1, -1, 1, -1],
                vec![1, 1, -1, -1],
                vec![1, -1, -1, 1]
            ]
        );
    }

    #[test]
    fn non_characters_are_rejected() {
        let t = char_table_cyclic(2);
        assert!(matches!(
            decompose(&ClassFunction::from_ints(&[1, 0]), &t),
            Err(Error::NonIntegral(_))
        ));
    }

    #[test]
    fn effectiveness() {
        assert!(is_effective(&VirtualCharacter::from_ints(&[1, 1, 1])));
        assert!(!is_effective(&VirtualCharacter::from_ints(&[1, -1])));
        assert!(is_effective(&VirtualCharacter::from_ints(&[0, 0])));
        let labels = vec!["chi_1".to_string(), "chi_2".to_string()];
        assert_eq!(
            format_virtual(&VirtualCharacter::from_ints(&[1, -1]), &labels),
            "chi_1 - chi_2"
        );
        assert_eq!(format_virtual(&VirtualCharacter::from_ints(&[0, 0]), &labels), "0");
    }

    #[test]
    fn det_factors() {
        let id: IMat = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(det_factor(&id), Poly::from_ints(&[1, -1]).pow(3));
        // 3-cycle: 1 − t³
        let r: IMat = vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]];
        assert_eq!(det_factor(&r), Poly::from_ints(&[1, 0, 0, -1]));
    }
}
