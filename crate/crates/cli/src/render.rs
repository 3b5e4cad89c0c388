//! Plain-text tables for terminal output.

use std::fmt::Write;

use eqehr::algebra::{format_rational, Poly};
use eqehr::ehrhart::EhrhartData;
use eqehr::equivariant::{EquivariantSetup, HStarReport};
use eqehr::lattice::RationalPolytope;

use crate::reproduce::Outcome;

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (i, cell) in cells.enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let pad = width[i].saturating_sub(cell.chars().count());
            s.push_str(cell);
            s.extend(std::iter::repeat_n(' ', pad));
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    let rule: Vec<String> = width.iter().map(|&w| "-".repeat(w)).collect();
    line(&mut rule.iter().map(String::as_str));
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

fn field(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key:<16}{value}");
}

/// A coefficient row read as a polynomial in the dilation factor `m`.
fn in_m(coeffs: &[eqehr::algebra::Rational]) -> String {
    Poly::new(coeffs.to_vec()).to_string().replace('t', "m")
}

pub fn ehrhart(p: &RationalPolytope, e: &EhrhartData) -> String {
    let mut out = String::new();
    field(&mut out, "polytope", p);
    field(&mut out, "dimension", e.dim);
    field(&mut out, "denominator", e.denominator);
    field(&mut out, "minimal period", e.min_period);
    field(&mut out, "period collapse", if e.is_pip { "yes" } else { "no" });
    field(&mut out, "h*", &e.hstar);
    field(
        &mut out,
        "h* denominator",
        format!("(1 - t^{})^{}", e.denominator, e.denom_exponent),
    );
    field(&mut out, "Ehrhart series", &e.series);
    out.push('\n');
    let rows: Vec<Vec<String>> = e
        .quasi
        .coeffs
        .iter()
        .enumerate()
        .map(|(r, c)| vec![format!("{r} mod {}", e.quasi.period), in_m(c)])
        .collect();
    out.push_str(&table(&["m", "L(m)"], &rows));
    out.push('\n');
    let rows: Vec<Vec<String>> = e
        .counts
        .iter()
        .enumerate()
        .map(|(m, c)| vec![m.to_string(), c.to_string()])
        .collect();
    out.push_str(&table(&["m", "#(mP ∩ Z^n)"], &rows));
    out
}

pub fn hstar(setup: &EquivariantSetup, r: &HStarReport) -> String {
    let mut out = String::new();
    field(&mut out, "polytope", setup.polytope());
    field(&mut out, "group order", setup.group().order());
    field(
        &mut out,
        "invariant point",
        format!(
            "({})",
            setup
                .invariant_point()
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    field(&mut out, "lambda", setup.lambda());
    out.push('\n');
    let rows: Vec<Vec<String>> = (0..r.classes.len())
        .map(|c| {
            vec![
                r.classes[c].clone(),
                r.class_sizes[c].to_string(),
                r.fixed_series_per_class[c].to_string(),
                r.denominators_per_class[c].to_string(),
                r.hstar_per_class[c].to_string(),
            ]
        })
        .collect();
    out.push_str(&table(
        &["class", "size", "Ehrhart series of P^g", "det(I - t g)", "H*(g)"],
        &rows,
    ));
    out.push('\n');
    let mut header = vec!["t^j"];
    header.extend(r.classes.iter().map(String::as_str));
    let rows: Vec<Vec<String>> = r
        .coefficients
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let mut row = vec![j.to_string()];
            row.extend(f.values.iter().map(format_rational));
            row
        })
        .collect();
    out.push_str(&table(&header, &rows));
    out.push('\n');
    let mut header = vec!["t^j"];
    header.extend(r.irreps.iter().map(String::as_str));
    let rows: Vec<Vec<String>> = r
        .multiplicities
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let mut row = vec![j.to_string()];
            row.extend(v.multiplicities.iter().map(|m| m.to_string()));
            row
        })
        .collect();
    out.push_str(&table(&header, &rows));
    out.push('\n');
    if r.is_polynomial {
        field(&mut out, "H*", r.display_series());
    } else {
        let order = r
            .order_truncated
            .map_or_else(String::new, |k| format!(" (truncated at t^{k})"));
        field(&mut out, "H*", format!("not a polynomial{order}"));
    }
    field(
        &mut out,
        "effective",
        match r.is_effective {
            Some(true) => "yes",
            Some(false) => "no",
            None => "n/a",
        },
    );
    out
}

pub fn reproduction(o: &Outcome) -> String {
    let mut out = String::new();
    for c in &o.checks {
        let _ = writeln!(out, "{} {}", if c.identical { "PASS" } else { "FAIL" }, c.name);
        let rows: Vec<Vec<String>> = (0..c.pipeline.len().max(c.closed_form.len()))
            .map(|i| {
                let cell = |v: &[crate::reproduce::Row]| v.get(i).map_or("-".to_string(), |r| r.to_string());
                let mark = if c.first_difference == Some(i) { "<" } else { "" };
                vec![i.to_string(), cell(&c.pipeline), cell(&c.closed_form), mark.to_string()]
            })
            .collect();
        let mut body = table(&["row", "pipeline", "closed form", ""], &rows);
        if let Some(m) = &c.margins {
            let rows: Vec<Vec<String>> = m
                .iter()
                .map(|r| {
                    vec![
                        r.j.to_string(),
                        r.h.to_string(),
                        r.g.to_string(),
                        r.bound.to_string(),
                        r.margin.to_string(),
                    ]
                })
                .collect();
            body.push_str(&table(&["j", "h_j", "g_j", "d(g_j - 1) + 1", "margin"], &rows));
        }
        for line in body.lines() {
            let _ = writeln!(out, "    {line}");
        }
    }
    let _ = writeln!(
        out,
        "{}: {}",
        o.target,
        if o.identical { "identical" } else { "MISMATCH" }
    );
    out
}
