//! Equivariant Ehrhart series of a polytope under a finite group acting by
//! lattice-preserving maps that send `P` to a lattice translate of itself.
//!
//! Each `g` acts on height-`m` points through the affine lift
//! `ρ̂(g) = [[1, 0], [v_g, A_g]]` on ℤ^{1+n}, where `A_g(P) + v_g = P`. The
//! evaluation of the equivariant series at `g` is the Ehrhart series of the
//! fixed polytope `P^g`, and the H*-series at `g` is that series times
//! `D_g(t) = det(I − t·ρ̂(g)|_W)`, with `W` the linear span of `{1} × P`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::denominator_lcm;
use crate::algebra::{rf_expand, rf_reduce, Poly, Rational, RationalGenFunction};
use crate::ehrhart::ehrhart_series;
use crate::error::{Error, Result};
use crate::group::character::format_virtual;
use crate::group::{decompose, is_effective, ClassFunction, FiniteMatrixGroup, VirtualCharacter};
use crate::lattice::enumerate::ConeSlices;
use crate::lattice::intlattice::fixed_sublattice;
use crate::lattice::linalg::{det_one_minus_t, independent_rows, mat_mul_i, mat_vec_q, Coordinates, IMat, QMat};
use crate::lattice::RationalPolytope;

#[derive(Debug)]
pub struct EquivariantSetup {
    polytope: RationalPolytope,
    group: FiniteMatrixGroup,
    translations: Vec<Vec<i64>>,
    invariant_point: Vec<Rational>,
    lambda: BigInt,
    lifts: Vec<IMat>,
    w_basis: QMat,
    /// Per element: lattice points of the cone over `P` fixed by `ρ̂(g)`.
    fixed_slices: Vec<OnceLock<std::result::Result<ConeSlices, Error>>>,
}

fn apply(a: &IMat, v: &[Rational]) -> Vec<Rational> {
    mat_vec_q(a, v)
}

/// The affine lift `[[1, 0], [v, A]]`.
pub fn affine_lift(a: &IMat, v: &[i64]) -> IMat {
    let n = a.len();
    let mut out = vec![vec![0i64; n + 1]; n + 1];
    out[0][0] = 1;
    for i in 0..n {
        out[i + 1][0] = v[i];
        out[i + 1][1..].copy_from_slice(&a[i]);
    }
    out
}

/// Integer translation `v` with `A(P) + v = P`, if one exists.
fn translation(p: &RationalPolytope, a: &IMat) -> Option<Vec<i64>> {
    let mut image: Vec<Vec<Rational>> = p.vertices().iter().map(|v| apply(a, v)).collect();
    image.sort();
    let base = &p.vertices()[0];
    let shift: Vec<Rational> = base.iter().zip(&image[0]).map(|(x, y)| x - y).collect();
    if shift.iter().any(|x| !x.is_integer()) {
        return None;
    }
    let moved = image
        .iter()
        .map(|v| v.iter().zip(&shift).map(|(x, s)| x + s).collect::<Vec<_>>());
    if !moved.eq(p.vertices().iter().cloned()) {
        return None;
    }
    shift.iter().map(|x| x.to_integer().to_i64()).collect()
}

/// Checks invariance up to translation, the cocycle identity and the lift, and
/// builds the invariant point, `λ` and the span `W`.
pub fn validate_setup(p: RationalPolytope, group: FiniteMatrixGroup) -> Result<EquivariantSetup> {
    if p.is_empty() {
        return Err(Error::InvalidInput("the polytope is empty".into()));
    }
    let n = p.ambient_dim();
    if group.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "group acts on rank {}, polytope lives in rank {n}",
            group.dim()
        )));
    }
    let order = group.order();
    let translations = (0..order)
        .map(|g| translation(&p, group.element(g)).ok_or(Error::NotInvariant { element: g }))
        .collect::<Result<Vec<_>>>()?;
    for g in 0..order {
        for h in 0..order {
            let gh = group.mul(g, h);
            let gv: Vec<i64> = group
                .element(g)
                .iter()
                .zip(&translations[g])
                .map(|(row, vg)| row.iter().zip(&translations[h]).map(|(a, b)| a * b).sum::<i64>() + vg)
                .collect();
            if gv != translations[gh] {
                return Err(Error::CrossCheck(format!(
                    "cocycle identity fails for elements {g}, {h}"
                )));
            }
        }
    }
    let lifts: Vec<IMat> = (0..order)
        .map(|g| affine_lift(group.element(g), &translations[g]))
        .collect();
    for g in 0..order {
        for h in 0..order {
            if mat_mul_i(&lifts[g], &lifts[h]) != lifts[group.mul(g, h)] {
                return Err(Error::CrossCheck(format!("lift is not multiplicative at {g}, {h}")));
            }
        }
    }

    let p0 = &p.vertices()[0];
    let mut sum = vec![Rational::zero(); n];
    for g in 0..order {
        let img = apply(group.element(g), p0);
        for ((s, x), v) in sum.iter_mut().zip(img).zip(&translations[g]) {
            *s += x + Rational::from_integer((*v).into());
        }
    }
    let size = Rational::from_integer(BigInt::from(order));
    let invariant_point: Vec<Rational> = sum.iter().map(|x| x / &size).collect();
    // smallest λ with (λ/|G|)·e integral, e = Σ_g (g(p) + v_g)
    let lambda = denominator_lcm(&invariant_point);

    let w_basis = independent_rows(&p.lifted_vertices());
    let coords = Coordinates::new(w_basis.clone());
    for lift in &lifts {
        for b in &w_basis {
            if coords.coords(&apply(lift, b)).is_none() {
                return Err(Error::CrossCheck("span of {1} x P is not invariant".into()));
            }
        }
    }
    Ok(EquivariantSetup {
        fixed_slices: (0..order).map(|_| OnceLock::new()).collect(),
        polytope: p,
        group,
        translations,
        invariant_point,
        lambda,
        lifts,
        w_basis,
    })
}

impl EquivariantSetup {
    pub fn polytope(&self) -> &RationalPolytope {
        &self.polytope
    }

    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    pub fn translation(&self, g: usize) -> &[i64] {
        &self.translations[g]
    }

    /// `(1/|G|) Σ_g (g(p) + v_g)` for the first vertex `p`; fixed by every affine map.
    pub fn invariant_point(&self) -> &[Rational] {
        &self.invariant_point
    }

    pub fn lambda(&self) -> &BigInt {
        &self.lambda
    }

    pub fn lift(&self, g: usize) -> &IMat {
        &self.lifts[g]
    }

    pub fn w_basis(&self) -> &QMat {
        &self.w_basis
    }

    /// `x ↦ A_g·x + v_g`.
    fn affine_map(&self, g: usize, x: &[Rational]) -> Vec<Rational> {
        apply(self.group.element(g), x)
            .into_iter()
            .zip(&self.translations[g])
            .map(|(y, v)| y + Rational::from_integer((*v).into()))
            .collect()
    }

    /// `P^g`: the hull of the orbit averages of the vertices under the affine map of `g`.
    pub fn fixed_polytope(&self, g: usize) -> Result<RationalPolytope> {
        let k = self.group.element_order(g);
        let kq = Rational::from_integer(BigInt::from(k));
        let pts = self
            .polytope
            .vertices()
            .iter()
            .map(|v| {
                let mut x = v.clone();
                let mut acc = v.clone();
                for _ in 1..k {
                    x = self.affine_map(g, &x);
                    for (a, y) in acc.iter_mut().zip(&x) {
                        *a += y;
                    }
                }
                acc.into_iter().map(|a| a / &kq).collect()
            })
            .collect();
        RationalPolytope::from_points(self.polytope.ambient_dim(), pts)
    }

    fn slices(&self, g: usize) -> Result<&ConeSlices> {
        self.fixed_slices[g]
            .get_or_init(|| {
                let lattice = self
                    .polytope
                    .cone_lattice()
                    .intersect_spans(&fixed_sublattice(&self.lifts[g]));
                ConeSlices::new(
                    lattice.basis(),
                    &self.polytope.cone_functionals(),
                    &self.polytope.lifted_vertices(),
                )
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `χ_{mP}(g)`: points `x ∈ mP ∩ ℤⁿ` with `A_g·x + m·v_g = x`, enumerated in the
    /// lattice fixed by the lift inside the span of the cone over `P`.
    pub fn fixed_point_count(&self, g: usize, m: u64) -> Result<u64> {
        self.slices(g)?.count(m)
    }

    /// `det(I − t·ρ̂(g)|_W)`.
    pub fn denominator_factor(&self, g: usize) -> Poly {
        let coords = Coordinates::new(self.w_basis.clone());
        let restricted: QMat = self
            .w_basis
            .iter()
            .map(|b| coords.coords_unchecked(&apply(&self.lifts[g], b)))
            .collect();
        det_one_minus_t(&restricted)
    }

    /// `H*(g) = ehr(P^g) · D_g`, reduced.
    pub fn hstar_at(&self, g: usize) -> Result<ElementData> {
        let fixed = self.fixed_polytope(g)?;
        let series = ehrhart_series(&fixed)?;
        let den = self.denominator_factor(g);
        let hstar = rf_reduce(&(series.num() * &den), series.den())?;
        Ok(ElementData {
            element: g,
            fixed,
            series,
            denominator_factor: den,
            hstar,
        })
    }
}

/// Per-element ingredients of the H*-series.
#[derive(Clone, Debug)]
pub struct ElementData {
    pub element: usize,
    pub fixed: RationalPolytope,
    pub series: RationalGenFunction,
    pub denominator_factor: Poly,
    pub hstar: RationalGenFunction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HStarReport {
    pub classes: Vec<String>,
    pub class_sizes: Vec<usize>,
    pub irreps: Vec<String>,
    pub fixed_series_per_class: Vec<RationalGenFunction>,
    pub denominators_per_class: Vec<Poly>,
    pub hstar_per_class: Vec<RationalGenFunction>,
    pub is_polynomial: bool,
    /// `coefficients[j]` is the class function of `t^j`.
    pub coefficients: Vec<ClassFunction>,
    pub multiplicities: Vec<VirtualCharacter>,
    /// `None` when the series is not a polynomial, since effectiveness implies polynomiality.
    pub is_effective: Option<bool>,
    pub order_truncated: Option<usize>,
}

impl HStarReport {
    /// `Σ_j (virtual character)·t^j`, e.g. `chi_1 + (chi_1 - chi_2) t + chi_1 t^2`.
    pub fn display_series(&self) -> String {
        let mut terms = Vec::new();
        for (j, v) in self.multiplicities.iter().enumerate() {
            if v.multiplicities.iter().all(Zero::is_zero) {
                continue;
            }
            let body = format_virtual(v, &self.irreps);
            let nonzero = v.multiplicities.iter().filter(|m| !m.is_zero()).count();
            let wrapped = if j > 0 && (nonzero > 1 || body.starts_with('-')) {
                format!("({body})")
            } else {
                body
            };
            terms.push(match j {
                0 => wrapped,
                1 => format!("{wrapped} t"),
                _ => format!("{wrapped} t^{j}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Rows of the multiplicity table as machine integers.
    pub fn multiplicity_table(&self) -> Result<Vec<Vec<i64>>> {
        self.multiplicities
            .iter()
            .map(|v| {
                v.multiplicities
                    .iter()
                    .map(|m| m.to_i64().ok_or(Error::Overflow("multiplicity")))
                    .collect()
            })
            .collect()
    }
}

/// Default truncation for non-polynomial series: `2·(dim + 1)·denominator`.
pub fn default_order(p: &RationalPolytope) -> usize {
    let d = p.affine_dim().unwrap_or(0);
    let n = p.denominator().to_usize().unwrap_or(1);
    2 * (d + 1) * n
}

/// The equivariant H*-series, evaluated per conjugacy class and decomposed.
pub fn hstar_series(setup: &EquivariantSetup, order: Option<usize>) -> Result<HStarReport> {
    let group = setup.group();
    let table = group.require_table()?;
    let reps: Vec<usize> = group.classes().iter().map(|c| c.representative).collect();
    let data = reps
        .par_iter()
        .map(|&g| setup.hstar_at(g))
        .collect::<Result<Vec<_>>>()?;
    let is_polynomial = data.iter().all(|d| d.hstar.is_polynomial());
    let (len, order_truncated) = if is_polynomial {
        let deg = data.iter().filter_map(|d| d.hstar.num().degree()).max().unwrap_or(0);
        (deg + 1, None)
    } else {
        let o = order.unwrap_or_else(|| default_order(setup.polytope()));
        (o + 1, Some(o))
    };
    let expansions: Vec<Vec<Rational>> = data.iter().map(|d| rf_expand(&d.hstar, len - 1)).collect();
    let coefficients: Vec<ClassFunction> = (0..len)
        .map(|j| ClassFunction {
            values: expansions.iter().map(|e| e[j].clone()).collect(),
        })
        .collect();
    let multiplicities = coefficients
        .par_iter()
        .map(|f| decompose(f, table))
        .collect::<Result<Vec<_>>>()?;
    let is_effective = is_polynomial.then(|| multiplicities.iter().all(is_effective));
    Ok(HStarReport {
        classes: group.class_labels(),
        class_sizes: group.class_sizes(),
        irreps: table.irrep_labels.clone(),
        fixed_series_per_class: data.iter().map(|d| d.series.clone()).collect(),
        denominators_per_class: data.iter().map(|d| d.denominator_factor.clone()).collect(),
        hstar_per_class: data.into_iter().map(|d| d.hstar).collect(),
        is_polynomial,
        coefficients,
        multiplicities,
        is_effective,
        order_truncated,
    })
}

/// `χ_{mP}` for `m = 0..=order`, from fixed-point enumeration, checked against
/// the expansion of `ehr(P^g)` for every class.
pub fn equivariant_series(setup: &EquivariantSetup, order: usize) -> Result<Vec<ClassFunction>> {
    let group = setup.group();
    let reps: Vec<usize> = group.classes().iter().map(|c| c.representative).collect();
    let rows = reps
        .par_iter()
        .map(|&g| -> Result<Vec<u64>> {
            let counts = (0..=order as u64)
                .into_par_iter()
                .map(|m| setup.fixed_point_count(g, m))
                .collect::<Result<Vec<_>>>()?;
            let series = ehrhart_series(&setup.fixed_polytope(g)?)?;
            let expected = rf_expand(&series, order);
            for (m, (c, e)) in counts.iter().zip(&expected).enumerate() {
                if Rational::from_integer(BigInt::from(*c)) != *e {
                    return Err(Error::CrossCheck(format!(
                        "element {g}, m = {m}: enumeration gives {c}, ehr(P^g) gives {e}"
                    )));
                }
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=order)
        .map(|m| ClassFunction {
            values: rows
                .iter()
                .map(|r| Rational::from_integer(BigInt::from(r[m])))
                .collect(),
        })
        .collect())
}

/// Number of orbits on the points of `mP`: `(1/|G|) Σ_c |c|·χ(c)`.
pub fn orbit_count(group: &FiniteMatrixGroup, chi: &ClassFunction) -> Rational {
    let total = group
        .class_sizes()
        .iter()
        .zip(&chi.values)
        .fold(Rational::zero(), |acc, (s, v)| {
            acc + v * Rational::from_integer(BigInt::from(*s))
        });
    total / Rational::from_integer(BigInt::from(group.order()))
}

/// `H*(1_G) / D_{1_G}`, which must equal the classical reduced Ehrhart series.
pub fn identity_series(report: &HStarReport) -> Result<RationalGenFunction> {
    let (h, d) = (&report.hstar_per_class[0], &report.denominators_per_class[0]);
    rf_reduce(h.num(), &(h.den() * d))
}
