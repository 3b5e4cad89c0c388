//! Rational polytopes in V-representation with cached facets and lattice-point counts.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::ConeSlices;
use super::hull::{facets, vertex_indices, Halfspace};
use super::intlattice::Sublattice;
use super::linalg::{independent_rows, rref, Coordinates, QMat};
use crate::algebra::rational::{denominator_lcm, serde_rational_mat};
use crate::algebra::{format_rational, Rational};
use crate::error::{Error, Result};

/// Facets of the polytope after projecting its affine hull injectively onto the
/// coordinates `cols`. For a full-dimensional polytope `cols` is every coordinate.
#[derive(Clone, Debug)]
struct Frame {
    cols: Vec<usize>,
    facets: Vec<Halfspace>,
    /// Coordinates on the direction space `span(vᵢ − v₀)`; `None` for a point.
    direction: Option<Coordinates>,
}

#[derive(Debug)]
pub struct RationalPolytope {
    ambient_dim: usize,
    vertices: Vec<Vec<Rational>>,
    /// `None` for the empty polytope.
    affine_dim: Option<usize>,
    frame: Option<Frame>,
    slices: OnceLock<std::result::Result<ConeSlices, Error>>,
}

impl Clone for RationalPolytope {
    fn clone(&self) -> Self {
        RationalPolytope {
            ambient_dim: self.ambient_dim,
            vertices: self.vertices.clone(),
            affine_dim: self.affine_dim,
            frame: self.frame.clone(),
            slices: OnceLock::new(),
        }
    }
}

impl PartialEq for RationalPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for RationalPolytope {}

fn project(v: &[Rational], cols: &[usize]) -> Vec<Rational> {
    cols.iter().map(|&c| v[c].clone()).collect()
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl RationalPolytope {
    pub fn empty(ambient_dim: usize) -> Self {
        RationalPolytope {
            ambient_dim,
            vertices: Vec::new(),
            affine_dim: None,
            frame: None,
            slices: OnceLock::new(),
        }
    }

    /// Convex hull of `points`; redundant points are dropped and the vertices sorted.
    pub fn from_points(ambient_dim: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        Self::build(ambient_dim, points, None)
    }

    /// Like [`from_points`](Self::from_points), trusting `halfspaces` as the facet
    /// list when the hull is full-dimensional.
    pub fn with_halfspaces(ambient_dim: usize, points: Vec<Vec<Rational>>, halfspaces: Vec<Halfspace>) -> Result<Self> {
        Self::build(ambient_dim, points, Some(halfspaces))
    }

    fn build(ambient_dim: usize, mut points: Vec<Vec<Rational>>, trusted: Option<Vec<Halfspace>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} in ambient dimension {ambient_dim}",
                p.len()
            )));
        }
        points.sort();
        points.dedup();
        if points.is_empty() {
            return Ok(Self::empty(ambient_dim));
        }
        let diffs: QMat = points[1..].iter().map(|p| sub(p, &points[0])).collect();
        let (_, cols) = rref(&diffs);
        let affine_dim = cols.len();
        if affine_dim == 0 {
            return Ok(RationalPolytope {
                ambient_dim,
                vertices: points,
                affine_dim: Some(0),
                frame: None,
                slices: OnceLock::new(),
            });
        }
        let projected: Vec<Vec<Rational>> = points.iter().map(|p| project(p, &cols)).collect();
        let hull = match trusted {
            Some(h) if affine_dim == ambient_dim => {
                if h.iter().any(|f| f.normal.len() != ambient_dim) {
                    return Err(Error::DimensionMismatch("halfspace normal length".into()));
                }
                h
            }
            _ => facets(&projected)?,
        };
        let keep = vertex_indices(&projected, &hull);
        let vertices: Vec<Vec<Rational>> = keep.into_iter().map(|i| points[i].clone()).collect();
        let direction = Coordinates::new(independent_rows(&diffs));
        Ok(RationalPolytope {
            ambient_dim,
            vertices,
            affine_dim: Some(affine_dim),
            frame: Some(Frame {
                cols,
                facets: hull,
                direction: Some(direction),
            }),
            slices: OnceLock::new(),
        })
    }

    pub fn from_int_points(ambient_dim: usize, points: &[Vec<i64>]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::from_points(ambient_dim, pts)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension, or `None` for the empty polytope.
    pub fn affine_dim(&self) -> Option<usize> {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == Some(self.ambient_dim)
    }

    /// Facets `⟨a, x⟩ ≤ b` of a full-dimensional polytope.
    pub fn hull_halfspaces(&self) -> Result<Vec<Halfspace>> {
        match (&self.frame, self.affine_dim) {
            (Some(f), Some(d)) if d == self.ambient_dim => Ok(f.facets.clone()),
            _ => Err(Error::Degenerate {
                affine_dim: self.affine_dim.unwrap_or(0),
                ambient_dim: self.ambient_dim,
            }),
        }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let Some(v0) = self.vertices.first() else {
            return false;
        };
        if x.len() != self.ambient_dim {
            return false;
        }
        let Some(frame) = &self.frame else {
            return x == v0.as_slice();
        };
        let delta = sub(x, v0);
        if frame.direction.as_ref().is_some_and(|c| c.coords(&delta).is_none()) {
            return false;
        }
        let px = project(x, &frame.cols);
        frame.facets.iter().all(|h| h.contains(&px))
    }

    /// Least common multiple of all vertex-coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        denominator_lcm(self.vertices.iter().flatten())
    }

    pub fn dilate(&self, m: &Rational) -> Result<Self> {
        if m.is_zero() {
            return if self.is_empty() {
                Ok(Self::empty(self.ambient_dim))
            } else {
                Self::from_points(self.ambient_dim, vec![vec![Rational::zero(); self.ambient_dim]])
            };
        }
        let pts = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * m).collect())
            .collect();
        Self::from_points(self.ambient_dim, pts)
    }

    /// The points `(1, v)` for the vertices `v`.
    pub fn lifted_vertices(&self) -> QMat {
        self.vertices
            .iter()
            .map(|v| {
                let mut w = Vec::with_capacity(v.len() + 1);
                w.push(Rational::one());
                w.extend(v.iter().cloned());
                w
            })
            .collect()
    }

    /// Functionals on ℚ^{1+n} that are nonnegative exactly on the cone over
    /// `{1} × P` within the span of that cone.
    pub fn cone_functionals(&self) -> QMat {
        let Some(frame) = &self.frame else {
            return Vec::new();
        };
        frame
            .facets
            .iter()
            .map(|h| {
                let mut f = vec![Rational::zero(); self.ambient_dim + 1];
                f[0] = Rational::from_integer(h.offset.into());
                for (&c, &a) in frame.cols.iter().zip(&h.normal) {
                    f[c + 1] = Rational::from_integer((-a).into());
                }
                f
            })
            .collect()
    }

    /// Saturated lattice of the linear span of `{1} × P`.
    pub fn cone_lattice(&self) -> Sublattice {
        Sublattice::from_span(self.ambient_dim + 1, &self.lifted_vertices())
    }

    fn slices(&self) -> Result<&ConeSlices> {
        self.slices
            .get_or_init(|| {
                ConeSlices::new(
                    self.cone_lattice().basis(),
                    &self.cone_functionals(),
                    &self.lifted_vertices(),
                )
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `|mP ∩ ℤⁿ|`.
    pub fn lattice_point_count(&self, m: u64) -> Result<u64> {
        if self.is_empty() {
            return Ok(u64::from(m == 0));
        }
        self.slices()?.count(m)
    }

    /// Counts for `m = 0..=max_m`, evaluated in parallel.
    pub fn lattice_point_counts(&self, max_m: u64) -> Result<Vec<u64>> {
        if !self.is_empty() {
            self.slices()?;
        }
        (0..=max_m)
            .into_par_iter()
            .map(|m| self.lattice_point_count(m))
            .collect()
    }

    /// The integer points of `mP`, in a deterministic order.
    pub fn lattice_points(&self, m: u64) -> Result<Vec<Vec<i64>>> {
        if self.is_empty() {
            return Ok(if m == 0 {
                vec![vec![0; self.ambient_dim]]
            } else {
                Vec::new()
            });
        }
        self.slices()?.points(m, self.ambient_dim)
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            ambient_dim: self.ambient_dim,
            vertices: self.vertices.clone(),
            halfspaces: self.hull_halfspaces().ok(),
        }
    }

    /// Reads a polytope; a supplied facet list must agree with the computed hull.
    pub fn from_json(j: PolytopeJson) -> Result<Self> {
        let p = Self::from_points(j.ambient_dim, j.vertices)?;
        if let Some(given) = j.halfspaces {
            let canonical = |mut h: Vec<Halfspace>| -> Result<Vec<Halfspace>> {
                for f in &mut h {
                    if f.normal.len() != p.ambient_dim {
                        return Err(Error::DimensionMismatch("halfspace normal length".into()));
                    }
                    let g = f
                        .normal
                        .iter()
                        .fold(f.offset.unsigned_abs(), |g, &x| num_integer::gcd(g, x.unsigned_abs()));
                    if g == 0 {
                        return Err(Error::InvalidInput("zero halfspace normal".into()));
                    }
                    let g = g as i64;
                    f.normal.iter_mut().for_each(|x| *x /= g);
                    f.offset /= g;
                }
                h.sort();
                h.dedup();
                Ok(h)
            };
            let given = canonical(given)?;
            let hull = p.hull_halfspaces().map_err(|_| {
                Error::InvalidInput("halfspaces are only accepted for full-dimensional polytopes".into())
            })?;
            if given != canonical(hull)? {
                return Err(Error::InvalidInput(
                    "halfspaces do not match the hull of the vertices".into(),
                ));
            }
        }
        Ok(p)
    }
}

impl std::fmt::Display for RationalPolytope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "Conv{{{}}}", vs.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub ambient_dim: usize,
    #[serde(with = "serde_rational_mat")]
    pub vertices: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<Halfspace>>,
}

impl Serialize for RationalPolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPolytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Self::from_json(PolytopeJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// The image of `P` in the coordinates of a lattice basis of `L`; integer points
/// of every dilate correspond to the points of the dilate of `P` lying in `L`.
pub fn restrict_to_sublattice(p: &RationalPolytope, l: &Sublattice) -> Result<RationalPolytope> {
    if l.ambient_dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch(
            "sublattice and polytope ambient dimensions differ".into(),
        ));
    }
    let Some(coords) = l.coordinates() else {
        return if p.vertices().iter().all(|v| v.iter().all(Zero::is_zero)) {
            RationalPolytope::from_points(0, p.vertices().iter().map(|_| Vec::new()).collect())
        } else {
            Err(Error::OutsideSpan)
        };
    };
    let pts = p
        .vertices()
        .iter()
        .map(|v| coords.coords(v).ok_or(Error::OutsideSpan))
        .collect::<Result<Vec<_>>>()?;
    RationalPolytope::from_points(l.rank(), pts)
}

/// `Conv(A × {0} ∪ {0} × B)`; both summands must contain the origin.
pub fn free_sum(a: &RationalPolytope, b: &RationalPolytope) -> Result<RationalPolytope> {
    let origin = |p: &RationalPolytope| p.contains(&vec![Rational::zero(); p.ambient_dim()]);
    if !origin(a) || !origin(b) {
        return Err(Error::OriginMissing);
    }
    let (na, nb) = (a.ambient_dim(), b.ambient_dim());
    let mut pts = Vec::with_capacity(a.vertices().len() + b.vertices().len());
    for v in a.vertices() {
        let mut w = v.clone();
        w.resize(na + nb, Rational::zero());
        pts.push(w);
    }
    for v in b.vertices() {
        let mut w = vec![Rational::zero(); na];
        w.extend(v.iter().cloned());
        pts.push(w);
    }
    RationalPolytope::from_points(na + nb, pts)
}
