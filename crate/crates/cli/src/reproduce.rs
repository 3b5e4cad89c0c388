//! Closed-form results recomputed through the generic pipeline.
//!
//! Every check holds two row lists, one from the pipeline and one from the
//! closed form, and passes only when they are identical.

use clap::ValueEnum;
use eqehr::algebra::{q, qf, Rational, RationalGenFunction};
use eqehr::ehrhart::{ehrhart, ehrhart_series};
use eqehr::equivariant::{equivariant_series, hstar_series, HStarReport};
use eqehr::families::{
    as_table, cross_polytope, lemma34_aux_check, lemma34_check, ohsugi_poly, prop32_series, prop41_series,
    prop42_hstar, swap_simplex, thm33_hstar, thm37_hstar, thm44_hstar, CrossGroup, CycleAction, CycleGroup, Family,
    Lemma34Row,
};
use eqehr::lattice::linalg::identity_i;
use eqehr::lattice::{free_sum, RationalPolytope};
use eqehr::Error;
use num_bigint::BigInt;
use serde::Serialize;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Dihedral action on the symmetric edge polytope of an odd prime cycle.
    Thm33,
    /// Single reflection acting on the symmetric edge polytope of a cycle.
    Thm37,
    /// Reflection groups acting on the stretched cross-polytope.
    Thm44,
    /// Ehrhart series of the reflection-fixed slice of a cycle polytope.
    Prop32,
    /// Ehrhart series of the stretched cross-polytope.
    Prop41,
    /// The swap action on the standard 3-simplex.
    Ex22,
    /// A non-effective polynomial H* and its effective dilate.
    Ex45,
    /// The coefficient inequality for cycle polytopes.
    Lemma34,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::Thm33 => "thm33",
            Target::Thm37 => "thm37",
            Target::Thm44 => "thm44",
            Target::Prop32 => "prop32",
            Target::Prop41 => "prop41",
            Target::Ex22 => "ex22",
            Target::Ex45 => "ex45",
            Target::Lemma34 => "lemma34",
        }
    }
}

/// One row of a comparison: a vector of integers or a formatted value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Row {
    Ints(Vec<i64>),
    Text(String),
}

impl std::fmt::Display for Row {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Row::Ints(v) => write!(f, "{v:?}"),
            Row::Text(s) => write!(f, "{s}"),
        }
    }
}

fn text(s: impl ToString) -> Row {
    Row::Text(s.to_string())
}

fn int_rows(t: Vec<Vec<i64>>) -> Vec<Row> {
    t.into_iter().map(Row::Ints).collect()
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pipeline: Vec<Row>,
    pub closed_form: Vec<Row>,
    pub identical: bool,
    /// Index of the first row that differs; equal to the shorter length when
    /// one list is a prefix of the other.
    pub first_difference: Option<usize>,
    /// The evaluated inequality, for checks that compare verdicts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margins: Option<Vec<Lemma34Row>>,
}

impl Check {
    fn compare(name: impl Into<String>, pipeline: Vec<Row>, closed_form: Vec<Row>) -> Self {
        let first_difference =
            (0..pipeline.len().max(closed_form.len())).find(|&i| pipeline.get(i) != closed_form.get(i));
        Check {
            name: name.into(),
            pipeline,
            closed_form,
            identical: first_difference.is_none(),
            first_difference,
            margins: None,
        }
    }

    pub fn summary(&self) -> String {
        let Some(i) = self.first_difference else {
            return format!("{}: identical", self.name);
        };
        let show = |rows: &[Row]| rows.get(i).map_or("(missing)".to_string(), Row::to_string);
        format!(
            "{}: row {i}: pipeline {} vs closed form {}",
            self.name,
            show(&self.pipeline),
            show(&self.closed_form)
        )
    }
}

#[derive(Debug, Serialize)]
pub struct Outcome {
    pub target: &'static str,
    pub checks: Vec<Check>,
    pub identical: bool,
}

impl Outcome {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.identical)
    }
}

fn effective_row(r: &HStarReport) -> Row {
    text(match r.is_effective {
        Some(true) => "effective",
        Some(false) => "not effective",
        None => "not a polynomial",
    })
}

fn report_rows(r: &HStarReport) -> Result<Vec<Row>, Failure> {
    if r.is_polynomial {
        Ok(int_rows(r.multiplicity_table()?))
    } else {
        Ok(vec![text(r.display_series())])
    }
}

fn report_of(f: Family) -> Result<HStarReport, Failure> {
    Ok(hstar_series(&f.setup()?, None)?)
}

fn series_row(f: &RationalGenFunction) -> Row {
    text(f)
}

fn thm33(p: u64) -> Result<Vec<Check>, Failure> {
    let r = report_of(Family::SepCycle {
        d: p as usize,
        group: CycleGroup::Dihedral,
    })?;
    Ok(vec![
        Check::compare(
            format!("H* table, p = {p}"),
            report_rows(&r)?,
            int_rows(as_table(&thm33_hstar(p)?)?),
        ),
        Check::compare(
            format!("effective, p = {p}"),
            vec![effective_row(&r)],
            vec![text("effective")],
        ),
    ])
}

fn thm37(d: usize) -> Result<Vec<Check>, Failure> {
    let r = report_of(Family::SepCycle {
        d,
        group: CycleGroup::SOnly,
    })?;
    // element 0 of every closure is the identity
    let identity = &r.hstar_per_class[0];
    let identity_row = if identity.is_polynomial() {
        text(identity.num())
    } else {
        series_row(identity)
    };
    Ok(vec![
        Check::compare(
            format!("H* table, d = {d}"),
            report_rows(&r)?,
            int_rows(as_table(&thm37_hstar(d)?)?),
        ),
        Check::compare(
            format!("effective, d = {d}"),
            vec![effective_row(&r)],
            vec![text("effective")],
        ),
        Check::compare(
            format!("H*(identity) = h*, d = {d}"),
            vec![identity_row],
            vec![text(ohsugi_poly(d)?)],
        ),
    ])
}

fn thm44(k: u64, d: usize) -> Result<Vec<Check>, Failure> {
    let cross = |group| Family::Cross {
        k,
        d,
        group,
        dilate: None,
    };
    let mut out = Vec::new();
    let full = report_of(cross(CrossGroup::AllReflections))?;
    out.push(Check::compare(
        format!("all reflections, k = {k}, d = {d}"),
        report_rows(&full)?,
        int_rows(as_table(&thm44_hstar(k, d, 1 << d)?)?),
    ));
    let last = report_of(cross(CrossGroup::SigmaD))?;
    out.push(Check::compare(
        format!("reflection of the stretched axis, k = {k}, d = {d}"),
        report_rows(&last)?,
        int_rows(as_table(&thm44_hstar(k, d, 2)?)?),
    ));
    let want = int_rows(as_table(&prop42_hstar(k, d)?)?);
    for i in 1..d {
        let r = report_of(cross(CrossGroup::Axis(i)))?;
        out.push(Check::compare(
            format!("reflection of axis {i}, k = {k}, d = {d}"),
            report_rows(&r)?,
            want.clone(),
        ));
    }
    Ok(out)
}

fn prop32(d: usize) -> Result<Vec<Check>, Failure> {
    let setup = Family::SepCycle {
        d,
        group: CycleGroup::SOnly,
    }
    .setup()?;
    let s = setup
        .group()
        .index_of(&CycleAction::new(d)?.s)
        .ok_or_else(|| Failure::Internal("reflection missing from its own group".into()))?;
    let got = ehrhart_series(&setup.fixed_polytope(s)?)?;
    Ok(vec![Check::compare(
        format!("Ehrhart series of the fixed slice, d = {d}"),
        vec![series_row(&got)],
        vec![series_row(&prop32_series((d - 1) / 2)?)],
    )])
}

fn segment(half_width: Rational) -> Result<RationalPolytope, Error> {
    RationalPolytope::from_points(1, vec![vec![-half_width.clone()], vec![half_width]])
}

fn prop41(k: u64, d: usize) -> Result<Vec<Check>, Failure> {
    let want = prop41_series(k, d)?;
    let direct = ehrhart_series(&cross_polytope(k, d)?)?;
    let mut sum = segment(q(1))?;
    for _ in 2..d {
        sum = free_sum(&sum, &segment(q(1))?)?;
    }
    let sum = free_sum(&sum, &segment(qf(k as i64, 2))?)?;
    let via_sum = ehrhart_series(&sum)?;
    Ok(vec![
        Check::compare(
            format!("direct, k = {k}, d = {d}"),
            vec![series_row(&direct)],
            vec![series_row(&want)],
        ),
        Check::compare(
            format!("free sum, k = {k}, d = {d}"),
            vec![series_row(&via_sum)],
            vec![series_row(&want)],
        ),
    ])
}

fn binom3(m: i64) -> i64 {
    (m + 1) * (m + 2) * (m + 3) / 6
}

fn ex22() -> Result<Vec<Check>, Failure> {
    let setup = swap_simplex()?;
    let g = setup.group();
    let sigma = g
        .elements()
        .iter()
        .position(|a| a != &identity_i(g.dim()))
        .ok_or_else(|| Failure::Internal("swap group is trivial".into()))?;
    let (id_class, sigma_class) = (g.class_of(0), g.class_of(sigma));
    const ORDER: usize = 10;
    let series = equivariant_series(&setup, ORDER)?;
    let integer = |x: &Rational| -> Result<i64, Failure> {
        if !x.is_integer() {
            return Err(Failure::Internal(format!("non-integral fixed-point count {x}")));
        }
        i64::try_from(x.to_integer()).map_err(|_| Failure::Internal("fixed-point count overflows".into()))
    };
    let pipeline = series
        .iter()
        .enumerate()
        .map(|(m, chi)| {
            Ok(Row::Ints(vec![
                m as i64,
                integer(&chi.values[id_class])?,
                integer(&chi.values[sigma_class])?,
            ]))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let closed = (0..=ORDER as i64)
        .map(|m| Row::Ints(vec![m, binom3(m), if m % 2 == 0 { m / 2 + 1 } else { 0 }]))
        .collect();
    let r = hstar_series(&setup, None)?;
    Ok(vec![
        Check::compare("[m, chi_m(1), chi_m(sigma)] for m <= 10", pipeline, closed),
        Check::compare("H* table", report_rows(&r)?, vec![Row::Ints(vec![1, 0])]),
    ])
}

fn ex45() -> Result<Vec<Check>, Failure> {
    let cross = |dilate| Family::Cross {
        k: 1,
        d: 2,
        group: CrossGroup::SigmaD,
        dilate,
    };
    let r1 = report_of(cross(None))?;
    let e = ehrhart(&cross(None).polytope()?)?;
    let r2 = report_of(cross(Some(2)))?;
    Ok(vec![
        Check::compare(
            "H* of P(1,2)",
            vec![text(r1.display_series()), effective_row(&r1)],
            vec![text("chi_1 + (chi_1 - chi_2) t + chi_1 t^2"), text("not effective")],
        ),
        Check::compare(
            "[denominator, minimal period] of P(1,2)",
            vec![Row::Ints(vec![e.denominator as i64, e.min_period as i64])],
            vec![Row::Ints(vec![2, 1])],
        ),
        Check::compare(
            "H* table of 2P(1,2)",
            report_rows(&r2)?.into_iter().chain([effective_row(&r2)]).collect(),
            int_rows(vec![vec![1, 0], vec![4, 0], vec![3, 0]])
                .into_iter()
                .chain([text("effective")])
                .collect(),
        ),
    ])
}

fn lemma34(d: usize) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    match lemma34_check(d) {
        Ok(rows) => {
            let verdict = |j: usize, ok: bool| text(format!("j = {j}: {}", if ok { "holds" } else { "fails" }));
            let got = rows.iter().map(|r| verdict(r.j, r.margin >= BigInt::from(0))).collect();
            let want = rows.iter().map(|r| verdict(r.j, true)).collect();
            let mut check = Check::compare(format!("h_j >= d(g_j - 1) + 1, d = {d}"), got, want);
            check.margins = Some(rows);
            out.push(check);
        }
        Err(Error::CrossCheck(msg)) => {
            out.push(Check::compare(
                format!("h_j >= d(g_j - 1) + 1, d = {d}"),
                vec![text(msg)],
                vec![text("holds")],
            ));
        }
        Err(e) => return Err(e.into()),
    }
    let aux = match lemma34_aux_check(d) {
        Ok(()) => text("holds"),
        Err(Error::CrossCheck(msg)) => text(msg),
        Err(e) => return Err(e.into()),
    };
    out.push(Check::compare(
        format!("h_l >= C(d-1, l), d = {d}"),
        vec![aux],
        vec![text("holds")],
    ));
    Ok(out)
}

fn reject(target: Target, flag: &str, given: bool) -> Result<(), Failure> {
    if given {
        Err(Failure::Input(format!("{flag} does not apply to {}", target.name())))
    } else {
        Ok(())
    }
}

fn list<T: Copy>(given: Option<T>, defaults: &[T]) -> Vec<T> {
    given.map_or_else(|| defaults.to_vec(), |x| vec![x])
}

pub fn run(target: Target, p: Option<u64>, d: Option<usize>, k: Option<u64>) -> Result<Outcome, Failure> {
    const ODD_CYCLES: [usize; 10] = [3, 5, 7, 9, 11, 13, 15, 17, 19, 21];
    let mut checks = Vec::new();
    match target {
        Target::Thm33 => {
            reject(target, "--d", d.is_some())?;
            reject(target, "--k", k.is_some())?;
            for p in list(p, &[3, 5, 7]) {
                checks.extend(thm33(p)?);
            }
        }
        Target::Thm37 | Target::Prop32 => {
            reject(target, "--p", p.is_some())?;
            reject(target, "--k", k.is_some())?;
            for d in list(d, &[3, 4, 5, 6, 7, 8]) {
                checks.extend(if target == Target::Thm37 { thm37(d)? } else { prop32(d)? });
            }
        }
        Target::Thm44 | Target::Prop41 => {
            reject(target, "--p", p.is_some())?;
            for k in list(k, &[1, 3, 5]) {
                for d in list(d, &[2, 3, 4]) {
                    checks.extend(if target == Target::Thm44 {
                        thm44(k, d)?
                    } else {
                        prop41(k, d)?
                    });
                }
            }
        }
        Target::Ex22 | Target::Ex45 => {
            reject(target, "--p/--d/--k", p.is_some() || d.is_some() || k.is_some())?;
            checks.extend(if target == Target::Ex22 { ex22()? } else { ex45()? });
        }
        Target::Lemma34 => {
            reject(target, "--p", p.is_some())?;
            reject(target, "--k", k.is_some())?;
            for d in list(d, &ODD_CYCLES) {
                checks.extend(lemma34(d)?);
            }
        }
    }
    let identical = checks.iter().all(|c| c.identical);
    Ok(Outcome {
        target: target.name(),
        checks,
        identical,
    })
}
