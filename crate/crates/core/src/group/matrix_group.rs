//! Finite groups of integer matrices: closure, conjugacy classes and the
//! attachment of character tables through labeled generators.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::character::{char_table_cyclic, char_table_dihedral, char_table_product, dihedral_class, CharacterTable};
use crate::algebra::CycloNum;
use crate::error::{Error, Result};
use crate::lattice::intlattice::{check_square, det_z, to_zmat};
use crate::lattice::linalg::{identity_i, mat_mul_i, IMat};

pub const DEFAULT_CLOSURE_BOUND: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    dim: usize,
    elements: Vec<IMat>,
    index: HashMap<IMat, usize>,
    inverse: Vec<usize>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    element_labels: Vec<Option<String>>,
    table: Option<CharacterTable>,
}

/// Breadth-first closure of `generators` under multiplication.
pub fn group_closure(generators: &[IMat]) -> Result<FiniteMatrixGroup> {
    group_closure_bounded(generators, DEFAULT_CLOSURE_BOUND)
}

pub fn group_closure_bounded(generators: &[IMat], bound: usize) -> Result<FiniteMatrixGroup> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidInput("at least one generator is required".into()));
    };
    let dim = check_square(first)?;
    for g in generators {
        if check_square(g)? != dim {
            return Err(Error::DimensionMismatch("generators differ in size".into()));
        }
        if det_z(&to_zmat(g)).abs() != BigInt::from(1) {
            return Err(Error::NotUnimodular);
        }
    }
    let id = identity_i(dim);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::from([(id, 0usize)]);
    let mut next = 0;
    while next < elements.len() {
        for g in generators {
            let prod = mat_mul_i(&elements[next], g);
            if !index.contains_key(&prod) {
                if elements.len() == bound {
                    return Err(Error::GroupTooLarge(bound));
                }
                index.insert(prod.clone(), elements.len());
                elements.push(prod);
            }
        }
        next += 1;
    }
    let n = elements.len();
    let mut group = FiniteMatrixGroup {
        dim,
        elements,
        index,
        inverse: vec![0; n],
        classes: Vec::new(),
        class_of: vec![usize::MAX; n],
        element_labels: vec![None; n],
        table: None,
    };
    for i in 0..n {
        let mut x = i;
        let mut prev = 0;
        while x != 0 {
            prev = x;
            x = group.mul(x, i);
        }
        // i^k = 1 with i^{k-1} = prev
        group.inverse[i] = if i == 0 { 0 } else { prev };
    }
    for i in 0..n {
        if group.class_of[i] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = (0..n).map(|g| group.mul(group.mul(g, i), group.inverse[g])).collect();
        members.sort_unstable();
        members.dedup();
        let c = group.classes.len();
        for &m in &members {
            group.class_of[m] = c;
        }
        group.classes.push(ConjugacyClass {
            representative: i,
            members,
            label: format!("c{c}"),
        });
    }
    if n == 1 {
        group.table = Some(char_table_cyclic(1));
        group.classes[0].label = "1".into();
    }
    Ok(group)
}

impl FiniteMatrixGroup {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IMat] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &IMat {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &IMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index of the product `elements[a] · elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&mat_mul_i(&self.elements[a], &self.elements[b])]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Full multiplication table, `table[a][b] = a·b`.
    pub fn product_table(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.members.len()).collect()
    }

    pub fn class_labels(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.label.clone()).collect()
    }

    pub fn element_label(&self, a: usize) -> Option<&str> {
        self.element_labels[a].as_deref()
    }

    pub fn character_table(&self) -> Option<&CharacterTable> {
        self.table.as_ref()
    }

    pub fn require_table(&self) -> Result<&CharacterTable> {
        self.table.as_ref().ok_or(Error::NoCharacterTable)
    }

    /// Matches the group with a built-in presentation. `gens[i]` is the matrix
    /// playing the role of the preset's `i`-th generator.
    pub fn attach_preset(&mut self, preset: &Preset, gens: &[IMat]) -> Result<()> {
        if gens.len() != preset.num_generators() {
            return Err(Error::TableMismatch(format!(
                "preset needs {} generators, got {}",
                preset.num_generators(),
                gens.len()
            )));
        }
        preset.check_relations(gens, self.dim)?;
        if preset.order() != self.order() {
            return Err(Error::TableMismatch(format!(
                "preset has order {}, group has order {}",
                preset.order(),
                self.order()
            )));
        }
        let mut abstract_of = vec![usize::MAX; self.order()];
        for idx in 0..preset.order() {
            let m = preset.evaluate(idx, gens, self.dim);
            let e = self
                .index_of(&m)
                .ok_or_else(|| Error::TableMismatch("generator word outside the group".into()))?;
            if abstract_of[e] != usize::MAX {
                return Err(Error::TableMismatch(
                    "labeled generators do not generate the group".into(),
                ));
            }
            abstract_of[e] = idx;
        }
        let table = preset.table();
        let mut perm = Vec::with_capacity(self.classes.len());
        for c in &self.classes {
            let t = preset.class_of(abstract_of[c.representative]);
            if c.members.iter().any(|&m| preset.class_of(abstract_of[m]) != t) {
                return Err(Error::TableMismatch(
                    "conjugacy classes disagree with the preset".into(),
                ));
            }
            perm.push(t);
        }
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != table.num_classes() || perm.len() != table.num_classes() {
            return Err(Error::TableMismatch("class count differs from the preset".into()));
        }
        let labels: Vec<String> = perm.iter().map(|&t| table.class_labels[t].clone()).collect();
        for (c, l) in self.classes.iter_mut().zip(&labels) {
            c.label = l.clone();
        }
        for (e, &a) in abstract_of.iter().enumerate() {
            self.element_labels[e] = Some(preset.element_label(a));
        }
        self.table = Some(table.permute_columns(&perm, self.class_sizes(), labels));
        Ok(())
    }

    /// Attaches a user table whose columns are given by class representatives.
    pub fn attach_user_table(&mut self, spec: &UserTable) -> Result<()> {
        let k = self.classes.len();
        if spec.classes.len() != k {
            return Err(Error::TableMismatch(format!(
                "table has {} classes, group has {k}",
                spec.classes.len()
            )));
        }
        // perm[c] = table column of group class c
        let mut perm = vec![usize::MAX; k];
        for (col, rep) in spec.classes.iter().enumerate() {
            let e = self
                .index_of(rep)
                .ok_or_else(|| Error::TableMismatch("class representative is not a group element".into()))?;
            let c = self.class_of(e);
            if perm[c] != usize::MAX {
                return Err(Error::TableMismatch("two representatives of one class".into()));
            }
            perm[c] = col;
        }
        let exponent = spec.rows.iter().flatten().fold(1u64, |acc, x| acc.lcm(&x.order()));
        let class_labels = match &spec.class_labels {
            Some(l) if l.len() == k => l.clone(),
            _ => (0..k).map(|c| format!("c{c}")).collect(),
        };
        let irrep_labels = match &spec.irrep_labels {
            Some(l) => l.clone(),
            None => (1..=spec.rows.len()).map(|i| format!("chi_{i}")).collect(),
        };
        let raw = CharacterTable {
            exponent,
            class_sizes: vec![0; k],
            class_labels,
            irrep_labels,
            rows: spec.rows.clone(),
        };
        if raw.rows.iter().any(|r| r.len() != k) {
            return Err(Error::TableMismatch("row length differs from class count".into()));
        }
        let labels: Vec<String> = perm.iter().map(|&p| raw.class_labels[p].clone()).collect();
        let table = raw.permute_columns(&perm, self.class_sizes(), labels.clone());
        table.check_orthogonality()?;
        for (c, l) in self.classes.iter_mut().zip(labels) {
            c.label = l;
        }
        self.table = Some(table);
        Ok(())
    }
}

/// A user-supplied character table; `rows[i][c]` is the value at `classes[c]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserTable {
    pub classes: Vec<IMat>,
    #[serde(default)]
    pub class_labels: Option<Vec<String>>,
    #[serde(default)]
    pub irrep_labels: Option<Vec<String>>,
    pub rows: Vec<Vec<CycloNum>>,
}

/// Built-in presentations. Abstract elements are numbered `0..order`:
/// `g^k` is `k` for cyclic groups, `s^f r^k` is `f·d + k` for dihedral ones and
/// `(a, b)` is `a·|G₂| + b` for products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preset {
    Cyclic(u64),
    Dihedral(u64),
    Product(Box<Preset>, Box<Preset>),
}

fn mat_pow(m: &IMat, k: u64, dim: usize) -> IMat {
    (0..k).fold(identity_i(dim), |acc, _| mat_mul_i(&acc, m))
}

impl Preset {
    /// `(ℤ/2)^d` as a right-nested product; generator `i` flips factor `i`.
    pub fn elementary_abelian_2(d: usize) -> Preset {
        assert!(d >= 1);
        (1..d).fold(Preset::Cyclic(2), |acc, _| {
            Preset::Product(Box::new(Preset::Cyclic(2)), Box::new(acc))
        })
    }

    pub fn order(&self) -> usize {
        match self {
            Preset::Cyclic(n) => *n as usize,
            Preset::Dihedral(d) => 2 * *d as usize,
            Preset::Product(a, b) => a.order() * b.order(),
        }
    }

    pub fn num_generators(&self) -> usize {
        match self {
            Preset::Cyclic(_) => 1,
            Preset::Dihedral(_) => 2,
            Preset::Product(a, b) => a.num_generators() + b.num_generators(),
        }
    }

    pub fn table(&self) -> CharacterTable {
        match self {
            Preset::Cyclic(n) => char_table_cyclic(*n),
            Preset::Dihedral(d) => char_table_dihedral(*d),
            Preset::Product(a, b) => char_table_product(&a.table(), &b.table()),
        }
    }

    pub fn class_of(&self, idx: usize) -> usize {
        match self {
            Preset::Cyclic(_) => idx,
            Preset::Dihedral(d) => {
                let d = *d as usize;
                dihedral_class(d as u64, idx >= d, (idx % d) as u64)
            }
            Preset::Product(a, b) => {
                let (i, j) = idx.div_rem(&b.order());
                a.class_of(i) * b.table().num_classes() + b.class_of(j)
            }
        }
    }

    pub fn element_label(&self, idx: usize) -> String {
        let pw = |g: &str, k: usize| match k {
            0 => "1".to_string(),
            1 => g.to_string(),
            _ => format!("{g}^{k}"),
        };
        match self {
            Preset::Cyclic(_) => pw("g", idx),
            Preset::Dihedral(d) => {
                let d = *d as usize;
                match (idx >= d, idx % d) {
                    (false, k) => pw("r", k),
                    (true, 0) => "s".into(),
                    (true, k) => format!("s {}", pw("r", k)),
                }
            }
            Preset::Product(a, b) => {
                let (i, j) = idx.div_rem(&b.order());
                format!("({}, {})", a.element_label(i), b.element_label(j))
            }
        }
    }

    fn evaluate(&self, idx: usize, gens: &[IMat], dim: usize) -> IMat {
        match self {
            Preset::Cyclic(_) => mat_pow(&gens[0], idx as u64, dim),
            Preset::Dihedral(d) => {
                let d = *d as usize;
                let r = mat_pow(&gens[0], (idx % d) as u64, dim);
                if idx >= d {
                    mat_mul_i(&gens[1], &r)
                } else {
                    r
                }
            }
            Preset::Product(a, b) => {
                let (i, j) = idx.div_rem(&b.order());
                let na = a.num_generators();
                mat_mul_i(&a.evaluate(i, &gens[..na], dim), &b.evaluate(j, &gens[na..], dim))
            }
        }
    }

    fn check_relations(&self, gens: &[IMat], dim: usize) -> Result<()> {
        let id = identity_i(dim);
        let fail = |what: &str| Err(Error::TableMismatch(format!("relation {what} fails")));
        match self {
            Preset::Cyclic(n) => {
                if mat_pow(&gens[0], *n, dim) != id {
                    return fail(&format!("g^{n} = 1"));
                }
            }
            Preset::Dihedral(d) => {
                let (r, s) = (&gens[0], &gens[1]);
                if mat_pow(r, *d, dim) != id {
                    return fail(&format!("r^{d} = 1"));
                }
                if mat_mul_i(s, s) != id {
                    return fail("s^2 = 1");
                }
                let sr = mat_mul_i(s, r);
                if mat_mul_i(&sr, &sr) != id {
                    return fail("(sr)^2 = 1");
                }
            }
            Preset::Product(a, b) => {
                let na = a.num_generators();
                a.check_relations(&gens[..na], dim)?;
                b.check_relations(&gens[na..], dim)?;
                for x in &gens[..na] {
                    for y in &gens[na..] {
                        if mat_mul_i(x, y) != mat_mul_i(y, x) {
                            return fail("factor generators commute");
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// JSON description of a group: generators plus an optional preset or table.
/// Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGroupSpec")]
pub struct GroupSpec {
    pub generators: Vec<IMat>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub preset: Option<PresetSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<UserTable>,
}

// serde cannot combine `flatten` with `deny_unknown_fields`, so the preset keys
// are read flat and regrouped.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroupSpec {
    generators: Vec<IMat>,
    #[serde(default)]
    preset: Option<String>,
    #[serde(default)]
    labels: Option<BTreeMap<String, usize>>,
    #[serde(default)]
    order: Option<u64>,
    #[serde(default)]
    factors: Option<Vec<PresetSpec>>,
    #[serde(default)]
    table: Option<UserTable>,
}

impl TryFrom<RawGroupSpec> for GroupSpec {
    type Error = String;

    fn try_from(r: RawGroupSpec) -> std::result::Result<Self, String> {
        let preset = match r.preset {
            Some(preset) => Some(PresetSpec {
                preset,
                labels: r.labels.unwrap_or_default(),
                order: r.order,
                factors: r.factors.unwrap_or_default(),
            }),
            None if r.labels.is_some() || r.order.is_some() || r.factors.is_some() => {
                return Err("\"labels\", \"order\" and \"factors\" need a \"preset\"".into())
            }
            None => None,
        };
        Ok(GroupSpec {
            generators: r.generators,
            preset,
            table: r.table,
        })
    }
}

/// `{"preset": "cyclic" | "dihedral" | "product", "labels": {...}, "order": n, "factors": [...]}`.
/// Labels map generator names (`g`; `r`, `s`) to indices into the generator list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetSpec {
    pub preset: String,
    #[serde(default)]
    pub labels: BTreeMap<String, usize>,
    #[serde(default)]
    pub order: Option<u64>,
    #[serde(default)]
    pub factors: Vec<PresetSpec>,
}

impl PresetSpec {
    /// The preset and the generator indices in preset order.
    pub fn resolve(&self, gens: &[IMat]) -> Result<(Preset, Vec<usize>)> {
        let label = |name: &str| -> Result<usize> {
            let i = *self
                .labels
                .get(name)
                .ok_or_else(|| Error::InvalidInput(format!("preset {} needs label {name:?}", self.preset)))?;
            if i >= gens.len() {
                return Err(Error::InvalidInput(format!(
                    "label {name:?} points past the generator list"
                )));
            }
            Ok(i)
        };
        let order_of = |i: usize| -> Result<u64> {
            let dim = gens[i].len();
            let id = identity_i(dim);
            let mut x = gens[i].clone();
            let mut k = 1u64;
            while x != id {
                x = mat_mul_i(&x, &gens[i]);
                k += 1;
                if k as usize > DEFAULT_CLOSURE_BOUND {
                    return Err(Error::GroupTooLarge(DEFAULT_CLOSURE_BOUND));
                }
            }
            Ok(k)
        };
        match self.preset.as_str() {
            "cyclic" => {
                let g = label("g")?;
                let n = match self.order {
                    Some(n) => n,
                    None => order_of(g)?,
                };
                Ok((Preset::Cyclic(n), vec![g]))
            }
            "dihedral" => {
                let (r, s) = (label("r")?, label("s")?);
                let d = match self.order {
                    Some(d) => d,
                    None => order_of(r)?,
                };
                Ok((Preset::Dihedral(d), vec![r, s]))
            }
            "product" => {
                let mut parts = self.factors.iter().map(|f| f.resolve(gens)).rev();
                let Some(mut acc) = parts.next().transpose()? else {
                    return Err(Error::InvalidInput("product preset needs factors".into()));
                };
                for part in parts {
                    let (p, mut idx) = part?;
                    idx.extend(acc.1);
                    acc = (Preset::Product(Box::new(p), Box::new(acc.0)), idx);
                }
                Ok(acc)
            }
            other => Err(Error::InvalidInput(format!("unknown preset {other:?}"))),
        }
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteMatrixGroup> {
        let mut g = group_closure(&self.generators)?;
        if let Some(p) = &self.preset {
            let (preset, idx) = p.resolve(&self.generators)?;
            let gens: Vec<IMat> = idx.iter().map(|&i| self.generators[i].clone()).collect();
            g.attach_preset(&preset, &gens)?;
        }
        if let Some(t) = &self.table {
            g.attach_user_table(t)?;
        }
        Ok(g)
    }
}

/// Values of a character table row as a plain vector, for display.
pub fn row_strings(row: &[CycloNum]) -> Vec<String> {
    row.iter().map(|x| x.to_string()).collect()
}
