//! The equivariant pipeline on concrete actions: invariant points, fixed
//! polytopes, denominators and structural invariants of the H*-report.

mod common;

use std::collections::BTreeSet;

use common::class_series;
use eqehr::algebra::{q, qf, rf_expand, Poly, Rational};
use eqehr::ehrhart::ehrhart_series;
use eqehr::equivariant::{
    default_order, equivariant_series, hstar_series, identity_series, orbit_count, validate_setup, EquivariantSetup,
};
use eqehr::families::*;
use eqehr::group::{det_factor, group_closure, Preset};
use eqehr::lattice::affine_decomposition;
use eqehr::lattice::linalg::{identity_i, mat_mul_i, mat_vec_i, IMat};
use eqehr::lattice::RationalPolytope;
use eqehr::Error;
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn element(setup: &EquivariantSetup, a: &IMat) -> usize {
    setup.group().index_of(a).expect("matrix is a group element")
}

fn vertex_set(p: &RationalPolytope) -> BTreeSet<Vec<Rational>> {
    p.vertices().iter().cloned().collect()
}

/// `±½·Σ c_i e_{pos_i}` in dimension `d`.
fn half_pair(d: usize, terms: &[(usize, i64)]) -> [Vec<Rational>; 2] {
    let mut v = vec![q(0); d];
    for &(pos, c) in terms {
        v[pos] += qf(c, 2);
    }
    let neg = v.iter().map(|x| -x).collect();
    [v, neg]
}

fn poly_power(base: &[i64], e: usize) -> Poly {
    Poly::from_ints(base).pow(e)
}

#[test]
fn swap_simplex_invariant_point_and_index() {
    let setup = swap_simplex().unwrap();
    // the average of the vertex e_4 and its image e_3
    assert_eq!(setup.invariant_point(), &[q(0), q(0), qf(1, 2), qf(1, 2)][..]);
    assert_eq!(setup.lambda(), &BigInt::from(2));
    let sigma = permutation_matrix(&[1, 0, 3, 2]);
    assert!(setup.translation(element(&setup, &sigma)).iter().all(|&v| v == 0));

    let elements = setup.group().elements().to_vec();
    let dec = affine_decomposition(&elements, &[1, 1, 1, 1]).unwrap();
    assert_eq!(dec.index, BigInt::from(4));
    for i in 0..4 {
        let mut e = vec![0; 4];
        e[i] = 1;
        assert!(dec.in_slice(&e, 1));
    }
    assert!(dec.in_slice(&[1, -1, 0, 0], 0));
    assert!(dec.in_slice(&[1, 1, 1, 1], 4));
}

#[test]
fn setwise_invariant_polytopes_have_zero_translations() {
    for family in [
        Family::SepCycle {
            d: 5,
            group: CycleGroup::Dihedral,
        },
        Family::Cross {
            k: 3,
            d: 3,
            group: CrossGroup::AllReflections,
            dilate: None,
        },
    ] {
        let setup = family.setup().unwrap();
        for g in 0..setup.group().order() {
            assert!(setup.translation(g).iter().all(|&v| v == 0));
            let lift = setup.lift(g);
            assert_eq!(lift[0][0], 1);
            assert!(lift[0][1..].iter().all(|&x| x == 0));
        }
    }
}

#[test]
fn affine_translations_form_a_cocycle() {
    let setup = affine_simplex().unwrap();
    let g = setup.group();
    for a in 0..g.order() {
        for b in 0..g.order() {
            let ab = g.mul(a, b);
            let gv: Vec<i64> = mat_vec_i(g.element(a), setup.translation(b))
                .iter()
                .zip(setup.translation(a))
                .map(|(x, y)| x + y)
                .collect();
            assert_eq!(setup.translation(ab), &gv[..]);
            assert_eq!(&mat_mul_i(setup.lift(a), setup.lift(b)), setup.lift(ab));
        }
    }
}

#[test]
fn non_lattice_translate_is_rejected() {
    // a reflection moving the unit segment [0, 1] to [-1, 0] is fine, to a
    // half-integer translate is not
    let p = RationalPolytope::from_points(1, vec![vec![q(0)], vec![q(1)]]).unwrap();
    let g = group_closure(&[vec![vec![-1]]]).unwrap();
    let setup = validate_setup(p, g.clone()).unwrap();
    assert_eq!(setup.translation(1), &[1][..]);

    let half = RationalPolytope::from_points(1, vec![vec![q(0)], vec![qf(1, 2)]]).unwrap();
    assert!(matches!(validate_setup(half, g), Err(Error::NotInvariant { .. })));
}

#[test]
fn fixed_polytope_of_reflection_on_five_cycle() {
    let action = CycleAction::new(5).unwrap();
    let setup = Family::SepCycle {
        d: 5,
        group: CycleGroup::Dihedral,
    }
    .setup()
    .unwrap();
    let fixed = setup.fixed_polytope(element(&setup, &action.s)).unwrap();
    let mut want = BTreeSet::new();
    for i in 0..2 {
        let terms = [
            (action.v(i), 1),
            (action.w(i), 1),
            (action.v(i + 1), -1),
            (action.w(i + 1), -1),
        ];
        want.extend(half_pair(5, &terms));
    }
    assert_eq!(vertex_set(&fixed), want);
    assert_eq!(fixed.affine_dim(), Some(2));
    assert_eq!(ehrhart_series(&fixed).unwrap(), prop32_series(2).unwrap());
}

#[test]
fn rotation_fixes_only_the_origin() {
    for p in [3, 5, 7] {
        let action = CycleAction::new(p).unwrap();
        let setup = Family::SepCycle {
            d: p,
            group: CycleGroup::Dihedral,
        }
        .setup()
        .unwrap();
        let r = element(&setup, &action.r);
        let fixed = setup.fixed_polytope(r).unwrap();
        assert_eq!(fixed.vertices(), &[vec![q(0); p]][..]);
        assert_eq!(setup.denominator_factor(r), Poly::one_minus_power(p));
        for m in 0..6 {
            assert_eq!(setup.fixed_point_count(r, m).unwrap(), 1);
        }
    }
}

#[test]
fn even_cycle_reflection_through_edges() {
    let action = CycleAction::new(6).unwrap();
    let setup = Family::SepCycle {
        d: 6,
        group: CycleGroup::Dihedral,
    }
    .setup()
    .unwrap();
    let sr = element(&setup, &mat_mul_i(&action.s, &action.r));
    let fixed = vertex_set(&setup.fixed_polytope(sr).unwrap());
    let terms = [(action.v(1), 1), (action.w(0), 1), (action.v(0), -2)];
    for v in half_pair(6, &terms) {
        assert!(fixed.contains(&v), "missing {v:?}");
    }
}

#[test]
fn denominator_factors() {
    let simplex = swap_simplex().unwrap();
    let sigma = element(&simplex, &permutation_matrix(&[1, 0, 3, 2]));
    assert_eq!(simplex.denominator_factor(sigma), poly_power(&[1, 0, -1], 2));

    for p in [3, 5, 7] {
        let action = CycleAction::new(p).unwrap();
        let setup = Family::SepCycle {
            d: p,
            group: CycleGroup::Dihedral,
        }
        .setup()
        .unwrap();
        let want = &Poly::from_ints(&[1, -1]) * &poly_power(&[1, 0, -1], (p - 1) / 2);
        assert_eq!(setup.denominator_factor(element(&setup, &action.s)), want);
        assert_eq!(det_factor(&action.s), want);
    }

    let cross = Family::Cross {
        k: 3,
        d: 3,
        group: CrossGroup::AllReflections,
        dilate: None,
    }
    .setup()
    .unwrap();
    for g in 0..cross.group().order() {
        let want = &Poly::from_ints(&[1, -1]) * &det_factor(cross.group().element(g));
        assert_eq!(cross.denominator_factor(g), want);
    }
}

#[test]
fn affine_simplex_counts_match_scaled_fixed_set() {
    let setup = affine_simplex().unwrap();
    let a = affine_simplex_map();
    let g = element(&setup, &a);
    let v = setup.translation(g).to_vec();
    let brute = common::Brute::corner(3);
    for m in 0..8 {
        assert_eq!(
            setup.fixed_point_count(g, m).unwrap(),
            brute.fixed_count(&a, &v, m as i64),
            "m = {m}"
        );
    }
}

#[test]
fn zeroth_dilate_is_a_single_fixed_point() {
    for family in [
        Family::SwapSimplex,
        Family::AffineSimplex,
        Family::SepCycle {
            d: 4,
            group: CycleGroup::Dihedral,
        },
    ] {
        let setup = family.setup().unwrap();
        let series = equivariant_series(&setup, 0).unwrap();
        assert_eq!(series.len(), 1);
        assert!(series[0].values.iter().all(One::is_one));
    }
}

#[test]
fn non_polynomial_report_is_truncated() {
    // [−1/2, 1/2] under x ↦ −x: H*(1) = (1 + t²)/(1 + t)
    let p = RationalPolytope::from_points(1, vec![vec![qf(-1, 2)], vec![qf(1, 2)]]).unwrap();
    let neg = vec![vec![-1]];
    let mut g = group_closure(&[neg.clone()]).unwrap();
    g.attach_preset(&Preset::Cyclic(2), &[neg]).unwrap();
    let setup = validate_setup(p, g).unwrap();
    let report = hstar_series(&setup, None).unwrap();
    assert!(!report.is_polynomial);
    assert_eq!(report.is_effective, None);
    let order = default_order(setup.polytope());
    assert_eq!(order, 8);
    assert_eq!(report.order_truncated, Some(order));
    assert_eq!(report.coefficients.len(), order + 1);
    assert_eq!(report.multiplicities.len(), order + 1);
    let h1 = rf_expand(&report.hstar_per_class[0], order);
    // 1 − t + 2t² − 2t³ + 2t⁴ − …
    assert_eq!(h1[..4], [q(1), q(-1), q(2), q(-2)]);
    assert!(h1[4..]
        .iter()
        .enumerate()
        .all(|(i, c)| *c == if i % 2 == 0 { q(2) } else { q(-2) }));

    let short = hstar_series(&setup, Some(3)).unwrap();
    assert_eq!(short.order_truncated, Some(3));
    assert_eq!(short.coefficients.len(), 4);
}

fn instances() -> Vec<(&'static str, EquivariantSetup)> {
    let families = [
        ("swap simplex", Family::SwapSimplex),
        ("affine simplex", Family::AffineSimplex),
        (
            "C_4 dihedral",
            Family::SepCycle {
                d: 4,
                group: CycleGroup::Dihedral,
            },
        ),
        (
            "C_5 dihedral",
            Family::SepCycle {
                d: 5,
                group: CycleGroup::Dihedral,
            },
        ),
        (
            "C_6 s-only",
            Family::SepCycle {
                d: 6,
                group: CycleGroup::SOnly,
            },
        ),
        (
            "P(1,2) reflections",
            Family::Cross {
                k: 1,
                d: 2,
                group: CrossGroup::AllReflections,
                dilate: None,
            },
        ),
        (
            "P(3,3) reflections",
            Family::Cross {
                k: 3,
                d: 3,
                group: CrossGroup::AllReflections,
                dilate: None,
            },
        ),
        (
            "P(1,3) axis 1",
            Family::Cross {
                k: 1,
                d: 3,
                group: CrossGroup::Axis(1),
                dilate: None,
            },
        ),
        (
            "2P(3,2) sigma_d",
            Family::Cross {
                k: 3,
                d: 2,
                group: CrossGroup::SigmaD,
                dilate: Some(2),
            },
        ),
    ];
    families.into_iter().map(|(n, f)| (n, f.setup().unwrap())).collect()
}

#[test]
fn report_invariants_on_family_instances() {
    for (name, setup) in instances() {
        let report = hstar_series(&setup, None).unwrap();
        let dim = setup.polytope().affine_dim().unwrap();
        let group = setup.group();
        assert!(group.element(group.classes()[0].representative) == &identity_i(group.dim()));
        assert_eq!(
            report.denominators_per_class[0],
            poly_power(&[1, -1], dim + 1),
            "{name}"
        );
        for c in 0..group.classes().len() {
            assert_eq!(report.denominators_per_class[c].degree(), Some(dim + 1), "{name}");
            assert_eq!(class_series(&report, c), report.fixed_series_per_class[c], "{name}");
        }
        assert_eq!(
            identity_series(&report).unwrap(),
            ehrhart_series(setup.polytope()).unwrap(),
            "{name}"
        );
        assert_eq!(report.is_effective.is_some(), report.is_polynomial, "{name}");
        if report.is_polynomial {
            for (j, f) in report.coefficients.iter().enumerate() {
                for (c, h) in report.hstar_per_class.iter().enumerate() {
                    assert_eq!(f.values[c], h.num().coeff(j), "{name}, t^{j}");
                }
            }
        }
    }
}

#[test]
fn det_factor_is_a_class_function() {
    for (name, setup) in instances() {
        let g = setup.group();
        for class in g.classes() {
            let d0 = setup.denominator_factor(class.representative);
            let p0 = det_factor(g.element(class.representative));
            for &m in &class.members {
                assert_eq!(setup.denominator_factor(m), d0, "{name}");
                assert_eq!(det_factor(g.element(m)), p0, "{name}");
            }
        }
    }
}

/// Orbits of the affine action on the points of `mP`, found by closing each
/// point under the group.
fn orbits(setup: &EquivariantSetup, m: u64) -> usize {
    let pts: BTreeSet<Vec<i64>> = setup.polytope().lattice_points(m).unwrap().into_iter().collect();
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for x in &pts {
        if seen.contains(x) {
            continue;
        }
        count += 1;
        for g in 0..setup.group().order() {
            let y: Vec<i64> = mat_vec_i(setup.group().element(g), x)
                .iter()
                .zip(setup.translation(g))
                .map(|(a, v)| a + m as i64 * v)
                .collect();
            assert!(pts.contains(&y), "image leaves mP");
            seen.insert(y);
        }
    }
    count
}

#[test]
fn orbit_sums_count_orbits() {
    for (name, setup) in instances() {
        let series = equivariant_series(&setup, 10).unwrap();
        for (m, chi) in series.iter().enumerate() {
            assert!(
                chi.values.iter().all(|v| v.is_integer() && *v >= Rational::zero()),
                "{name}"
            );
            let n = orbit_count(setup.group(), chi);
            assert!(n.is_integer() && n > Rational::zero(), "{name}, m = {m}: {n}");
            if m <= 3 {
                assert_eq!(n, q(orbits(&setup, m as u64) as i64), "{name}, m = {m}");
            }
        }
    }
}
