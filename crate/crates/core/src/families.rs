//! Polytope families with their group actions, and closed forms for their
//! equivariant H*-series.
//!
//! Symmetric edge polytopes of cycles use coordinates indexed by the cyclic
//! position of a vertex. `w_i` sits at position `i`; `v_i` sits at `d − i` for
//! odd `d` (so `v_0 = w_0`) and at `d − 1 − i` for even `d`. The rotation `r`
//! moves every position forward by one and `s` swaps `v_i ↔ w_i`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::serde_integer;
use crate::algebra::{binomial, q, qf, rf_reduce, Poly, Rational, RationalGenFunction};
use crate::equivariant::{validate_setup, EquivariantSetup};
use crate::error::{Error, Result};
use crate::group::{group_closure, FiniteMatrixGroup, Preset, VirtualCharacter};
use crate::lattice::linalg::{identity_i, IMat};
use crate::lattice::{free_sum, RationalPolytope};

/// `Conv{±(e_v − e_w) : {v, w} ∈ edges}` in ℝⁿ.
pub fn symmetric_edge_polytope(n: usize, edges: &[(usize, usize)]) -> Result<RationalPolytope> {
    if edges.is_empty() {
        return Err(Error::InvalidInput("graph has no edges".into()));
    }
    let mut pts = Vec::with_capacity(2 * edges.len());
    for &(v, w) in edges {
        if v >= n || w >= n || v == w {
            return Err(Error::InvalidInput(format!("bad edge ({v}, {w}) on {n} vertices")));
        }
        for sign in [1, -1] {
            let mut p = vec![0i64; n];
            p[v] = sign;
            p[w] = -sign;
            pts.push(p);
        }
    }
    RationalPolytope::from_int_points(n, &pts)
}

pub fn cycle_edges(d: usize) -> Vec<(usize, usize)> {
    (0..d).map(|i| (i, (i + 1) % d)).collect()
}

/// The symmetric edge polytope of the `d`-cycle.
pub fn sep_cycle(d: usize) -> Result<RationalPolytope> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("cycle length {d} < 3")));
    }
    symmetric_edge_polytope(d, &cycle_edges(d))
}

/// Matrix of the coordinate permutation `e_i ↦ e_{π(i)}`.
pub fn permutation_matrix(pi: &[usize]) -> IMat {
    let n = pi.len();
    let mut a = vec![vec![0i64; n]; n];
    for (i, &j) in pi.iter().enumerate() {
        a[j][i] = 1;
    }
    a
}

/// The dihedral action on the `d`-cycle in the labeling described above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleAction {
    pub d: usize,
    pub r: IMat,
    pub s: IMat,
}

impl CycleAction {
    pub fn new(d: usize) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidInput(format!("cycle length {d} < 3")));
        }
        let r: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
        let s: Vec<usize> = if d % 2 == 1 {
            (0..d).map(|i| (d - i) % d).collect()
        } else {
            (0..d).map(|i| d - 1 - i).collect()
        };
        Ok(CycleAction {
            d,
            r: permutation_matrix(&r),
            s: permutation_matrix(&s),
        })
    }

    pub fn w(&self, i: usize) -> usize {
        i
    }

    pub fn v(&self, i: usize) -> usize {
        if self.d % 2 == 1 {
            (self.d - i) % self.d
        } else {
            self.d - 1 - i
        }
    }

    /// `v_i` / `w_i` name of a position; `v_0 = w_0` is reported as `v_0`.
    pub fn label(&self, pos: usize) -> String {
        let half = self.d / 2;
        if pos == 0 && self.d % 2 == 1 {
            "v_0".into()
        } else if pos < half + self.d % 2 {
            format!("w_{pos}")
        } else {
            format!("v_{}", self.v(pos))
        }
    }

    /// Basis vectors fixed by `s`.
    pub fn s_fixed_vertices(&self) -> usize {
        (0..self.d).filter(|&i| self.s[i][i] == 1).count()
    }

    pub fn dihedral_group(&self) -> Result<FiniteMatrixGroup> {
        with_preset(&Preset::Dihedral(self.d as u64), &[self.r.clone(), self.s.clone()])
    }

    /// `S₂ = {1, s}`.
    pub fn s_group(&self) -> Result<FiniteMatrixGroup> {
        with_preset(&Preset::Cyclic(2), &[self.s.clone()])
    }
}

fn with_preset(preset: &Preset, gens: &[IMat]) -> Result<FiniteMatrixGroup> {
    let mut g = group_closure(gens)?;
    g.attach_preset(preset, gens)?;
    Ok(g)
}

/// `Conv{±e_1, …, ±e_{d−1}, ±(k/2)e_d}`.
pub fn cross_polytope(k: u64, d: usize) -> Result<RationalPolytope> {
    if k % 2 == 0 || d < 2 {
        return Err(Error::InvalidInput(format!(
            "cross polytope needs odd k and d >= 2, got k = {k}, d = {d}"
        )));
    }
    let mut pts = Vec::with_capacity(2 * d);
    for i in 0..d {
        let x = if i + 1 == d { qf(k as i64, 2) } else { q(1) };
        for sign in [1, -1] {
            let mut p = vec![Rational::zero(); d];
            p[i] = &x * Rational::from_integer(sign.into());
            pts.push(p);
        }
    }
    RationalPolytope::from_points(d, pts)
}

/// `σ_i`: negates coordinate `i` (1-based).
pub fn reflection(d: usize, i: usize) -> IMat {
    let mut a = identity_i(d);
    a[i - 1][i - 1] = -1;
    a
}

/// `{1, σ_i}` with table rows `chi_1` (trivial) and `chi_2` (sign).
pub fn axis_group(d: usize, i: usize) -> Result<FiniteMatrixGroup> {
    if i == 0 || i > d {
        return Err(Error::InvalidInput(format!("axis {i} outside 1..={d}")));
    }
    with_preset(&Preset::Cyclic(2), &[reflection(d, i)])
}

/// `(ℤ/2)^d` generated by `σ_1, …, σ_d`. Row 0 of the table is trivial and row 1
/// is the character that is `−1` on `σ_d` only.
pub fn all_reflections_group(d: usize) -> Result<FiniteMatrixGroup> {
    let gens: Vec<IMat> = (1..=d).map(|i| reflection(d, i)).collect();
    with_preset(&Preset::elementary_abelian_2(d), &gens)
}

/// `Conv{e_1, …, e_4}` under the double transposition `(12)(34)`.
pub fn swap_simplex() -> Result<EquivariantSetup> {
    let p = RationalPolytope::from_int_points(4, &unit_vectors(4))?;
    let sigma = permutation_matrix(&[1, 0, 3, 2]);
    validate_setup(p, with_preset(&Preset::Cyclic(2), &[sigma])?)
}

/// `Conv{0, e_1, e_2, e_3}` under a map sending it to a translate of itself.
pub fn affine_simplex() -> Result<EquivariantSetup> {
    let mut pts = vec![vec![0i64; 3]];
    pts.extend(unit_vectors(3));
    let p = RationalPolytope::from_int_points(3, &pts)?;
    validate_setup(p, with_preset(&Preset::Cyclic(2), &[affine_simplex_map()])?)
}

pub fn affine_simplex_map() -> IMat {
    vec![vec![-1, -1, -1], vec![0, 0, 1], vec![0, 1, 0]]
}

fn unit_vectors(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// `Conv{e_1, e_2, e_3, −e_1−e_2−e_3} ⊕ [−1, 1]^{⊕(d−3)}`.
pub fn q_polytope(d: usize) -> Result<RationalPolytope> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("d = {d} < 3")));
    }
    let mut pts = unit_vectors(3);
    pts.push(vec![-1, -1, -1]);
    let simplex = RationalPolytope::from_int_points(3, &pts)?;
    let seg = RationalPolytope::from_int_points(1, &[vec![-1], vec![1]])?;
    (3..d).try_fold(simplex, |acc, _| free_sum(&acc, &seg))
}

/// Group choices for a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleGroup {
    Dihedral,
    SOnly,
}

/// Group choices for a cross-polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossGroup {
    SigmaD,
    AllReflections,
    Axis(usize),
}

/// A named (polytope, action) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    SepCycle {
        d: usize,
        group: CycleGroup,
    },
    Cross {
        k: u64,
        d: usize,
        group: CrossGroup,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dilate: Option<u64>,
    },
    SwapSimplex,
    AffineSimplex,
}

impl Family {
    pub fn polytope(&self) -> Result<RationalPolytope> {
        match self {
            Family::SepCycle { d, .. } => sep_cycle(*d),
            Family::Cross { k, d, dilate, .. } => {
                let p = cross_polytope(*k, *d)?;
                match dilate {
                    None | Some(1) => Ok(p),
                    Some(0) => Err(Error::InvalidInput("dilation factor must be positive".into())),
                    Some(m) => p.dilate(&Rational::from_integer(BigInt::from(*m))),
                }
            }
            Family::SwapSimplex => Ok(swap_simplex()?.polytope().clone()),
            Family::AffineSimplex => Ok(affine_simplex()?.polytope().clone()),
        }
    }

    pub fn setup(&self) -> Result<EquivariantSetup> {
        match self {
            Family::SepCycle { d, group } => {
                let action = CycleAction::new(*d)?;
                let g = match group {
                    CycleGroup::Dihedral => action.dihedral_group()?,
                    CycleGroup::SOnly => action.s_group()?,
                };
                validate_setup(self.polytope()?, g)
            }
            Family::Cross { d, group, .. } => {
                let g = match group {
                    CrossGroup::SigmaD => axis_group(*d, *d)?,
                    CrossGroup::AllReflections => all_reflections_group(*d)?,
                    CrossGroup::Axis(i) => axis_group(*d, *i)?,
                };
                validate_setup(self.polytope()?, g)
            }
            Family::SwapSimplex => swap_simplex(),
            Family::AffineSimplex => affine_simplex(),
        }
    }
}

fn bin(n: usize, k: i64) -> BigInt {
    binomial(n as i64, k)
}

fn closed_sum(d: usize, j: usize) -> BigInt {
    let s = (0..=j).fold(BigInt::zero(), |acc, i| {
        acc + BigInt::from(-2).pow(i as u32) * bin(d, i as i64) * binomial(d as i64 - 1 - i as i64, (j - i) as i64)
    });
    if j % 2 == 0 {
        s
    } else {
        -s
    }
}

/// h*-coefficients of the symmetric edge polytope of the `d`-cycle: the closed sum
/// for `j < d/2` and palindromy from there on, checked against the recurrence in `d`.
pub fn ohsugi_h(d: usize) -> Result<Vec<BigInt>> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("cycle length {d} < 3")));
    }
    let h = ohsugi_unchecked(d);
    let prev = (d > 3).then(|| ohsugi_unchecked(d - 1));
    for j in 1..=d / 2 {
        let expect = if d % 2 == 1 && j == (d - 1) / 2 {
            BigInt::one() << (d - 1)
        } else if let Some(p) = &prev {
            &p[j - 1] + p.get(j).cloned().unwrap_or_default()
        } else {
            continue;
        };
        if h[j] != expect {
            return Err(Error::CrossCheck(format!(
                "h_{j} for d = {d}: closed sum {} vs recurrence {expect}",
                h[j]
            )));
        }
    }
    Ok(h)
}

fn ohsugi_unchecked(d: usize) -> Vec<BigInt> {
    // the closed sum is valid only below d/2; for even d it overshoots at j = d/2
    let mut h: Vec<BigInt> = (0..d)
        .map(|j| if 2 * j < d { closed_sum(d, j) } else { BigInt::zero() })
        .collect();
    for j in 0..d {
        if 2 * j >= d {
            h[j] = h[d - 1 - j].clone();
        }
    }
    h
}

pub fn ohsugi_poly(d: usize) -> Result<Poly> {
    Ok(Poly::from_bigints(&ohsugi_h(d)?))
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|i| i * i <= p).all(|i| p % i != 0)
}

fn exact_div(n: BigInt, d: &BigInt) -> Result<BigInt> {
    let (q, r) = n.div_rem(d);
    if !r.is_zero() {
        return Err(Error::CrossCheck(format!("{n} is not divisible by {d}")));
    }
    Ok(q)
}

fn nonneg(rows: &[VirtualCharacter]) -> Result<()> {
    if rows.iter().flat_map(|r| &r.multiplicities).any(Signed::is_negative) {
        return Err(Error::CrossCheck("closed form has a negative multiplicity".into()));
    }
    Ok(())
}

/// H* of the `p`-cycle under the full dihedral group, over the rows
/// `psi_1, psi_2, chi_1, …, chi_{(p−1)/2}`; every `chi_j` carries the coefficient of `χ = Σ chi_j`.
pub fn thm33_hstar(p: u64) -> Result<Vec<VirtualCharacter>> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    let h = ohsugi_h(p as usize)?;
    let pb = BigInt::from(p);
    let two_p = BigInt::from(2 * p);
    let half = (p - 1) / 2;
    let rows = h
        .iter()
        .enumerate()
        .map(|(j, hj)| {
            let hm1 = hj - 1;
            let (c1, c2) = if j % 2 == 0 {
                let g = binomial(half as i64, (j / 2) as i64);
                (&hm1 + &pb * (&g + 1), &hm1 - &pb * (&g - 1))
            } else {
                (&pb + &hm1, &pb + &hm1)
            };
            let chi = exact_div(2 * &hm1, &two_p)?;
            let mut m = vec![exact_div(c1, &two_p)?, exact_div(c2, &two_p)?];
            m.extend(std::iter::repeat_n(chi, half as usize));
            Ok(VirtualCharacter { multiplicities: m })
        })
        .collect::<Result<Vec<_>>>()?;
    nonneg(&rows)?;
    Ok(rows)
}

/// `ℓ = ⌊(d−1)/2⌋`, `b = d − 1 − 2ℓ`.
pub fn thm37_params(d: usize) -> (usize, usize) {
    let l = (d - 1) / 2;
    (l, d - 1 - 2 * l)
}

/// `(1+t)^b (1+t²)^ℓ`, the H*-series evaluated at `s`.
pub fn thm37_g(d: usize) -> Poly {
    let (l, b) = thm37_params(d);
    &Poly::from_ints(&[1, 1]).pow(b) * &Poly::from_ints(&[1, 0, 1]).pow(l)
}

/// H* of the `d`-cycle under `{1, s}` over `chi_1, chi_2`.
pub fn thm37_hstar(d: usize) -> Result<Vec<VirtualCharacter>> {
    let h = ohsugi_h(d)?;
    let g = thm37_g(d)
        .integer_coeffs()
        .ok_or_else(|| Error::NonIntegral("closed form has a non-integer coefficient".into()))?;
    let two = BigInt::from(2);
    let rows = h
        .iter()
        .enumerate()
        .map(|(j, hj)| {
            let gj = g.get(j).cloned().unwrap_or_default();
            Ok(VirtualCharacter {
                multiplicities: vec![exact_div(hj + &gj, &two)?, exact_div(hj - &gj, &two)?],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    nonneg(&rows)?;
    Ok(rows)
}

fn check_cross(k: u64, d: usize) -> Result<()> {
    if k % 2 == 0 || d < 2 {
        return Err(Error::InvalidInput(format!(
            "need odd k and d >= 2, got k = {k}, d = {d}"
        )));
    }
    Ok(())
}

/// `(a_j, b_j)` for `j = 0..=d`.
pub fn thm44_coeffs(k: u64, d: usize) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    check_cross(k, d)?;
    let kp = BigInt::from((k + 1) / 2);
    let km = BigInt::from((k - 1) / 2);
    let a = (0..=d as i64)
        .map(|j| bin(d - 2, j) + &kp * bin(d - 1, j - 1))
        .collect();
    let b = (0..=d as i64)
        .map(|j| &km * bin(d - 1, j - 1) - bin(d - 2, j - 1))
        .collect();
    Ok((a, b))
}

/// `a_j·chi_1 + b_j·chi_2` padded to `width` rows (the trivial row first, the
/// `σ_d`-sign row second).
pub fn thm44_hstar(k: u64, d: usize, width: usize) -> Result<Vec<VirtualCharacter>> {
    let (a, b) = thm44_coeffs(k, d)?;
    Ok(a.into_iter()
        .zip(b)
        .map(|(a, b)| {
            let mut m = vec![BigInt::zero(); width];
            m[0] = a;
            m[1] = b;
            VirtualCharacter { multiplicities: m }
        })
        .collect())
}

/// `h̃ = (1 + (k−1)t + kt²)(1+t)^{d−2}`.
pub fn cross_htilde(k: u64, d: usize) -> Result<Poly> {
    check_cross(k, d)?;
    let k = k as i64;
    Ok(&Poly::from_ints(&[1, k - 1, k]) * &Poly::from_ints(&[1, 1]).pow(d - 2))
}

/// `χ_1·h̃` over `{1, σ_i}` for `i < d`.
pub fn prop42_hstar(k: u64, d: usize) -> Result<Vec<VirtualCharacter>> {
    let h = cross_htilde(k, d)?
        .integer_coeffs()
        .ok_or_else(|| Error::NonIntegral("closed form has a non-integer coefficient".into()))?;
    Ok(h.into_iter()
        .map(|c| VirtualCharacter {
            multiplicities: vec![c, BigInt::zero()],
        })
        .collect())
}

/// `h̃ / (1−t)^{d+1}`.
pub fn prop41_series(k: u64, d: usize) -> Result<RationalGenFunction> {
    rf_reduce(&cross_htilde(k, d)?, &Poly::from_ints(&[1, -1]).pow(d + 1))
}

/// `(1+t²)^ℓ / ((1−t)(1−t²)^ℓ)`.
pub fn prop32_series(l: usize) -> Result<RationalGenFunction> {
    let den = &Poly::from_ints(&[1, -1]) * &Poly::from_ints(&[1, 0, -1]).pow(l);
    rf_reduce(&Poly::from_ints(&[1, 0, 1]).pow(l), &den)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma34Row {
    pub j: usize,
    #[serde(with = "serde_integer")]
    pub h: BigInt,
    #[serde(with = "serde_integer")]
    pub g: BigInt,
    #[serde(with = "serde_integer")]
    pub bound: BigInt,
    #[serde(with = "serde_integer")]
    pub margin: BigInt,
}

/// `h_j ≥ d(g_j − 1) + 1` for even `j ≤ (d−1)/2`, with `g_j = C((d−1)/2, j/2)`.
pub fn lemma34_check(d: usize) -> Result<Vec<Lemma34Row>> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::InvalidInput(format!("d = {d} must be odd and at least 3")));
    }
    let h = ohsugi_h(d)?;
    let rows: Vec<Lemma34Row> = (0..=(d - 1) / 2)
        .step_by(2)
        .map(|j| {
            let g = binomial(((d - 1) / 2) as i64, (j / 2) as i64);
            let bound = BigInt::from(d) * (&g - 1) + 1;
            Lemma34Row {
                j,
                h: h[j].clone(),
                margin: &h[j] - &bound,
                g,
                bound,
            }
        })
        .collect();
    if let Some(r) = rows.iter().find(|r| r.margin.is_negative()) {
        return Err(Error::CrossCheck(format!("inequality fails at d = {d}, j = {}", r.j)));
    }
    Ok(rows)
}

/// `h_ℓ ≥ C(d−1, ℓ)` for every `ℓ < d`.
pub fn lemma34_aux_check(d: usize) -> Result<()> {
    let h = ohsugi_h(d)?;
    match (0..d).find(|&l| h[l] < bin(d - 1, l as i64)) {
        Some(l) => Err(Error::CrossCheck(format!("h_{l} < C({}, {l}) for d = {d}", d - 1))),
        None => Ok(()),
    }
}

/// Multiplicity tables as machine integers, for comparisons and display.
pub fn as_table(rows: &[VirtualCharacter]) -> Result<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| {
            r.multiplicities
                .iter()
                .map(|m| m.to_i64().ok_or(Error::Overflow("multiplicity")))
                .collect()
        })
        .collect()
}
