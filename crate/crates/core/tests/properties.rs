//! Randomized invariants of the algebra, hull, counting and Ehrhart layers.
//! Membership is decided independently by Carathéodory: a point lies in a
//! full-dimensional hull iff it lies in some simplex spanned by `d + 1` of the
//! generating points.

use eqehr::algebra::{cyclotomic_polynomial, q, qf, rf_expand, rf_reduce, CycloNum, Poly, Rational};
use eqehr::ehrhart::{counts_needed, ehrhart};
use eqehr::families::{cross_polytope, permutation_matrix, sep_cycle, swap_simplex};
use eqehr::lattice::{fixed_sublattice, free_sum, RationalPolytope};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// The nondegenerate simplices on integer points `pts` (scaled by a common `L`).
struct Caratheodory {
    simplices: Vec<(Vec<i128>, Vec<Vec<i128>>, i128)>,
}

impl Caratheodory {
    fn new(pts: &[Vec<i64>]) -> Self {
        let d = pts[0].len();
        let simplices = subsets(pts.len(), d + 1)
            .into_iter()
            .filter_map(|s| {
                let base: Vec<i128> = pts[s[0]].iter().map(|&x| x as i128).collect();
                // columns v_i − v_0
                let cols: Vec<Vec<i128>> = s[1..]
                    .iter()
                    .map(|&i| pts[i].iter().zip(&base).map(|(&a, b)| a as i128 - b).collect())
                    .collect();
                let m: Vec<Vec<i128>> = (0..d).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
                let dm = det(&m);
                (dm != 0).then_some((base, m, dm))
            })
            .collect();
        Caratheodory { simplices }
    }

    /// `x ∈ m·Conv(pts)` via Cramer's rule on each simplex.
    fn contains(&self, x: &[i128], m: i128) -> bool {
        self.simplices.iter().any(|(base, mat, dm)| {
            let u: Vec<i128> = x.iter().zip(base).map(|(a, b)| a - m * b).collect();
            let sign = dm.signum();
            let mut total = 0;
            for c in 0..u.len() {
                let mut mc = mat.clone();
                for (r, row) in mc.iter_mut().enumerate() {
                    row[c] = u[r];
                }
                let l = det(&mc) * sign;
                if l < 0 {
                    return false;
                }
                total += l;
            }
            total <= m * dm.abs()
        })
    }
}

/// A full-dimensional rational polytope `Conv(nums / den)` with its integer
/// generators. `None` when the points are affinely degenerate.
fn polytope(den: i64, nums: &[Vec<i64>]) -> Option<RationalPolytope> {
    let d = nums[0].len();
    let pts = nums.iter().map(|v| v.iter().map(|&x| qf(x, den)).collect()).collect();
    let p = RationalPolytope::from_points(d, pts).unwrap();
    (p.affine_dim() == Some(d)).then_some(p)
}

fn brute_count(oracle: &Caratheodory, den: i64, nums: &[Vec<i64>], m: i64) -> u64 {
    let d = nums[0].len();
    let lo: Vec<i64> = (0..d).map(|i| nums.iter().map(|v| v[i]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..d).map(|i| nums.iter().map(|v| v[i]).max().unwrap()).collect();
    let lo: Vec<i64> = lo.iter().map(|&x| (x * m).div_euclid(den)).collect();
    let hi: Vec<i64> = hi.iter().map(|&x| -((-x * m).div_euclid(den))).collect();
    let mut x = lo.clone();
    let mut count = 0;
    loop {
        let scaled: Vec<i128> = x.iter().map(|&c| (c * den) as i128).collect();
        if oracle.contains(&scaled, m as i128) {
            count += 1;
        }
        let Some(i) = (0..d).find(|&i| x[i] < hi[i]) else {
            return count;
        };
        x[i] += 1;
        x[..i].copy_from_slice(&lo[..i]);
    }
}

fn point_set(d: usize, den: i64, reach: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-reach * den..=reach * den, d), d + 1..=d + 3)
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

fn nonvanishing_at_zero(max_deg: usize) -> impl Strategy<Value = Poly> {
    (
        prop::sample::select(vec![-2i64, -1, 1, 3]),
        prop::collection::vec(-3i64..=3, 0..=max_deg),
    )
        .prop_map(|(c0, rest)| {
            let mut c = vec![c0];
            c.extend(rest);
            Poly::from_ints(&c)
        })
}

/// Power-series division by long division, independent of `rf_expand`.
fn series_quotient(num: &Poly, den: &Poly, order: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    let d0 = den.coeff(0);
    for k in 0..=order {
        let mut acc = num.coeff(k);
        for (i, c) in out.iter().enumerate() {
            acc -= den.coeff(k - i) * c;
        }
        out.push(acc / &d0);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn reduction_cancels_common_factors(p in small_poly(4), r in nonvanishing_at_zero(3), c in nonvanishing_at_zero(2)) {
        let plain = rf_reduce(&p, &r).unwrap();
        let padded = rf_reduce(&(&p * &c), &(&r * &c)).unwrap();
        prop_assert_eq!(&plain, &padded);
        prop_assert!(plain.den().coeff(0).is_one());
        prop_assert!(Poly::gcd(plain.num(), plain.den()).is_constant() || plain.num().is_zero());
    }

    #[test]
    fn expansion_is_power_series_division(p in small_poly(4), r in nonvanishing_at_zero(3)) {
        let f = rf_reduce(&p, &r).unwrap();
        prop_assert_eq!(rf_expand(&f, 12), series_quotient(&p, &r, 12));
    }

    #[test]
    fn conjugation_is_an_involutive_ring_map(
        n in prop::sample::select(vec![3u64, 4, 5, 7, 8, 9, 12]),
        a in prop::collection::vec(-3i64..=3, 1..6),
        b in prop::collection::vec(-3i64..=3, 1..6),
    ) {
        let x = CycloNum::new(n, Poly::from_ints(&a));
        let y = CycloNum::new(n, Poly::from_ints(&b));
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
        prop_assert_eq!(x.conj().conj(), x.clone());
        // x·x̄ is real
        prop_assert_eq!((&x * &x.conj()).conj(), &x * &x.conj());
    }

    #[test]
    fn hull_agrees_with_caratheodory(
        (den, nums, probes) in (2usize..=3, 1i64..=3).prop_flat_map(|(d, den)| (
            Just(den),
            point_set(d, den, 2),
            prop::collection::vec(prop::collection::vec(-18 * den..=18 * den, d), 12),
        ))
    ) {
        let Some(p) = polytope(den, &nums) else { return Ok(()); };
        let d = p.ambient_dim();
        let halfspaces = p.hull_halfspaces().unwrap();
        for v in p.vertices() {
            prop_assert!(halfspaces.iter().all(|h| h.contains(v)));
            prop_assert!(halfspaces.iter().filter(|h| h.is_tight(v)).count() >= d);
        }
        let oracle = Caratheodory::new(&nums);
        // probes are points of ℚ^d with denominator 6·den, compared at dilate 6
        for x in probes {
            let pt: Vec<Rational> = x.iter().map(|&c| qf(c, 6 * den)).collect();
            let scaled: Vec<i128> = x.iter().map(|&c| c as i128).collect();
            prop_assert_eq!(p.contains(&pt), oracle.contains(&scaled, 6), "probe {:?}", pt);
        }
    }

    #[test]
    fn free_sum_keeps_every_vertex(
        a in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 2..5),
        b in prop::collection::vec(prop::collection::vec(-3i64..=3, 1), 1..3),
    ) {
        // symmetric point sets have the origin in their interior once full-dimensional
        let sym = |s: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            s.iter().flat_map(|v| [v.clone(), v.iter().map(|x| -x).collect()]).collect()
        };
        let (Some(pa), Some(pb)) = (polytope(1, &sym(&a)), polytope(1, &sym(&b))) else { return Ok(()); };
        let sum = free_sum(&pa, &pb).unwrap();
        prop_assert_eq!(sum.vertices().len(), pa.vertices().len() + pb.vertices().len());
    }

    #[test]
    fn fixed_sublattices_are_saturated(
        pi in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
        signs in prop::collection::vec(prop::sample::select(vec![-1i64, 1]), 4),
    ) {
        let mut a = permutation_matrix(&pi);
        for (row, s) in a.iter_mut().zip(&signs) {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        let l = fixed_sublattice(&a);
        for b in l.basis_i64().unwrap() {
            prop_assert_eq!(eqehr::lattice::linalg::mat_vec_i(&a, &b), b);
        }
        // every integer point of the fixed space in a box is a lattice point
        let mut x = vec![-2i64; 4];
        loop {
            let fixed = eqehr::lattice::linalg::mat_vec_i(&a, &x) == x;
            let xq: Vec<Rational> = x.iter().map(|&c| q(c)).collect();
            prop_assert_eq!(l.contains(&xq), fixed);
            let Some(i) = (0..4).find(|&i| x[i] < 2) else { break; };
            x[i] += 1;
            for y in x.iter_mut().take(i) {
                *y = -2;
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// Counts beyond the fitting window agree with Carathéodory enumeration; the
    /// data satisfies the structural facts of Ehrhart theory.
    #[test]
    fn ehrhart_data_of_random_polygons((den, nums) in (1i64..=3).prop_flat_map(|den| (Just(den), point_set(2, den, 2)))) {
        let Some(p) = polytope(den, &nums) else { return Ok(()); };
        check_ehrhart(&p, den, &nums)?;
    }

    #[test]
    fn ehrhart_data_of_random_lattice_solids(nums in point_set(3, 1, 1)) {
        let Some(p) = polytope(1, &nums) else { return Ok(()); };
        check_ehrhart(&p, 1, &nums)?;
    }
}

fn check_ehrhart(p: &RationalPolytope, den: i64, nums: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let data = ehrhart(p).unwrap();
    let n = p.denominator();
    let d = data.dim;
    prop_assert_eq!(u64::try_from(&n).unwrap(), data.denominator);
    prop_assert_eq!(data.denominator % data.min_period as u64, 0);
    prop_assert!(data.hstar.coeff(0).is_one());
    prop_assert!(data.hstar.has_nonneg_coeffs());
    let lead = data.quasi.leading(0);
    for r in 0..data.quasi.period {
        prop_assert_eq!(data.quasi.leading(r), lead.clone());
    }
    if data.denominator == 1 {
        let volume: Rational = data.hstar.coeffs().iter().sum();
        let factorial: i64 = (1..=d as i64).product();
        prop_assert_eq!(volume, lead * q(factorial));
    }
    let oracle = Caratheodory::new(nums);
    let fit = counts_needed(d, data.denominator as usize);
    let series = rf_expand(&data.series, fit + 9);
    for m in fit..fit + 10 {
        let want = brute_count(&oracle, den, nums, m as i64);
        prop_assert_eq!(&series[m], &q(want as i64), "m = {}", m);
        prop_assert_eq!(data.quasi.eval(m as u64), q(want as i64));
    }
    Ok(())
}

#[test]
fn cyclotomic_products_give_x_n_minus_one() {
    for n in 1..=40u64 {
        let prod = (1..=n)
            .filter(|k| n % k == 0)
            .fold(Poly::one(), |acc, k| &acc * &cyclotomic_polynomial(k));
        let mut want = vec![0i64; n as usize + 1];
        want[0] = -1;
        want[n as usize] = 1;
        assert_eq!(prod, Poly::from_ints(&want), "n = {n}");
    }
}

fn family_instances() -> Vec<(&'static str, RationalPolytope)> {
    vec![
        ("C_3", sep_cycle(3).unwrap()),
        ("C_4", sep_cycle(4).unwrap()),
        ("C_5", sep_cycle(5).unwrap()),
        ("P(1,2)", cross_polytope(1, 2).unwrap()),
        ("P(3,3)", cross_polytope(3, 3).unwrap()),
        ("P(5,2)", cross_polytope(5, 2).unwrap()),
        ("simplex", swap_simplex().unwrap().polytope().clone()),
    ]
}

#[test]
fn centrally_symmetric_point_sets_are_closed_under_negation() {
    for (name, p) in family_instances().into_iter().filter(|(n, _)| *n != "simplex") {
        for m in 0..=4 {
            let pts = p.lattice_points(m).unwrap();
            let mut neg: Vec<Vec<i64>> = pts.iter().map(|x| x.iter().map(|c| -c).collect()).collect();
            neg.sort();
            let mut sorted = pts.clone();
            sorted.sort();
            assert_eq!(sorted, neg, "{name}, m = {m}");
            assert_eq!(pts.len() as u64, p.lattice_point_count(m).unwrap());
        }
    }
}

#[test]
fn dilation_commutes_with_counting() {
    for (name, p) in family_instances() {
        for m in 0..=6u64 {
            let dilated = p.dilate(&q(m as i64)).unwrap();
            let direct = p.lattice_point_count(m).unwrap();
            assert_eq!(direct, dilated.lattice_point_count(1).unwrap(), "{name}, m = {m}");
            if m > 0 {
                assert_eq!(dilated.vertices().len(), p.vertices().len());
            }
        }
    }
}

#[test]
fn empty_polytope_counts_only_the_zeroth_dilate() {
    let e = RationalPolytope::empty(3);
    assert_eq!(e.lattice_point_count(0).unwrap(), 1);
    assert!(e.lattice_point_count(1).unwrap().is_zero());
}
