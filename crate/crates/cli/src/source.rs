//! Where a polytope and its group come from: a JSON file or family flags.

use std::path::Path;

use clap::ValueEnum;
use eqehr::equivariant::{validate_setup, EquivariantSetup};
use eqehr::families::{CrossGroup, CycleGroup, Family};
use eqehr::group::GroupSpec;
use eqehr::lattice::RationalPolytope;
use serde::Deserialize;
use serde_json::Value;

use crate::Failure;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    SepCycle,
    Cross,
    SwapSimplex,
    AffineSimplex,
}

pub enum Selector {
    Family(Family),
    Custom {
        polytope: RationalPolytope,
        group: Option<GroupSpec>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetupFile {
    polytope: RationalPolytope,
    #[serde(default)]
    group: Option<GroupSpec>,
}

impl Selector {
    pub fn polytope(&self) -> Result<RationalPolytope, Failure> {
        match self {
            Selector::Family(f) => Ok(f.polytope()?),
            Selector::Custom { polytope, .. } => Ok(polytope.clone()),
        }
    }

    pub fn setup(self) -> Result<EquivariantSetup, Failure> {
        match self {
            Selector::Family(f) => Ok(f.setup()?),
            Selector::Custom { polytope, group } => {
                let spec = group.ok_or_else(|| Failure::Input("the input has no \"group\"".into()))?;
                Ok(validate_setup(polytope, spec.build()?)?)
            }
        }
    }
}

fn malformed(e: serde_json::Error) -> Failure {
    Failure::Input(format!("malformed input: {e}"))
}

pub fn load(path: &Path) -> Result<Selector, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Selector, Failure> {
    let value: Value = serde_json::from_str(text).map_err(malformed)?;
    let Value::Object(obj) = &value else {
        return Err(Failure::Input("input must be a JSON object".into()));
    };
    if obj.contains_key("family") {
        Ok(Selector::Family(Family::deserialize(value).map_err(malformed)?))
    } else if obj.contains_key("polytope") {
        let f = SetupFile::deserialize(value).map_err(malformed)?;
        Ok(Selector::Custom {
            polytope: f.polytope,
            group: f.group,
        })
    } else if obj.contains_key("vertices") {
        Ok(Selector::Custom {
            polytope: RationalPolytope::deserialize(value).map_err(malformed)?,
            group: None,
        })
    } else {
        Err(Failure::Input(
            "expected a family selector, a {\"polytope\", \"group\"} object or a polytope".into(),
        ))
    }
}

pub fn from_flags(
    name: FamilyName,
    d: Option<usize>,
    k: Option<u64>,
    group: Option<&str>,
    axis: Option<usize>,
    dilate: Option<u64>,
) -> Result<Selector, Failure> {
    let need_d = || d.ok_or_else(|| Failure::Input("this family needs --d".into()));
    let unexpected = |flag: &str| Failure::Input(format!("{flag} does not apply to this family"));
    let family = match name {
        FamilyName::SepCycle => {
            if k.is_some() || axis.is_some() || dilate.is_some() {
                return Err(unexpected("--k/--axis/--dilate"));
            }
            let group = match group.unwrap_or("dihedral") {
                "dihedral" => CycleGroup::Dihedral,
                "s-only" => CycleGroup::SOnly,
                other => return Err(Failure::Input(format!("unknown cycle group {other:?}"))),
            };
            Family::SepCycle { d: need_d()?, group }
        }
        FamilyName::Cross => {
            let group = match (group.unwrap_or("all-reflections"), axis) {
                ("sigma-d", None) => CrossGroup::SigmaD,
                ("all-reflections", None) => CrossGroup::AllReflections,
                ("axis", Some(i)) => CrossGroup::Axis(i),
                ("axis", None) => return Err(Failure::Input("--group axis needs --axis I".into())),
                (_, Some(_)) => return Err(Failure::Input("--axis needs --group axis".into())),
                (other, None) => return Err(Failure::Input(format!("unknown cross-polytope group {other:?}"))),
            };
            Family::Cross {
                k: k.unwrap_or(1),
                d: need_d()?,
                group,
                dilate,
            }
        }
        FamilyName::SwapSimplex | FamilyName::AffineSimplex => {
            if d.is_some() || k.is_some() || group.is_some() || axis.is_some() || dilate.is_some() {
                return Err(unexpected("--d/--k/--group/--axis/--dilate"));
            }
            if name == FamilyName::SwapSimplex {
                Family::SwapSimplex
            } else {
                Family::AffineSimplex
            }
        }
    };
    Ok(Selector::Family(family))
}
