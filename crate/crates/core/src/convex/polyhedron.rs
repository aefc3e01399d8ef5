use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{homogenize_vertex, Cone};
use crate::error::{Error, Result};
use crate::exact::rational::dot;
use crate::exact::{RatVec, Rational};

/// `conv(vertices) + tail`, stored with exactly its extreme points.
///
/// Polyhedral questions are answered on the homogenization
/// `pos((μv·v, μv), (r, 0))`, whose extreme rays with positive last
/// coordinate are the vertices.
#[derive(Clone)]
pub struct TailedPolyhedron {
    rank: usize,
    vertices: Vec<RatVec>,
    tail: Cone,
    homogenization: Cone,
}

fn dehomogenize(r: &[i64]) -> RatVec {
    let n = r.len() - 1;
    let w = Rational::from(r[n]);
    r[..n].iter().map(|&x| Rational::from(x) / &w).collect()
}

impl TailedPolyhedron {
    pub fn new(vertices: Vec<RatVec>, tail: Cone) -> Result<Self> {
        let rank = tail.rank();
        if vertices.is_empty() {
            return Err(Error::Precondition("polyhedron needs at least one vertex".into()));
        }
        if !tail.is_pointed() {
            return Err(Error::NotPointed);
        }
        let mut gens = Vec::new();
        for v in &vertices {
            if v.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: v.len() });
            }
            gens.push(homogenize_vertex(v));
        }
        for r in tail.rays() {
            let mut g = r.clone();
            g.push(0);
            gens.push(g);
        }
        let homogenization = Cone::new(rank + 1, &gens)?;
        let mut vertices: Vec<RatVec> =
            homogenization.rays().iter().filter(|r| r[rank] > 0).map(|r| dehomogenize(r)).collect();
        vertices.sort();
        Ok(TailedPolyhedron { rank, vertices, tail, homogenization })
    }

    /// The single point `v` plus the tail.
    pub fn translate_of(v: RatVec, tail: Cone) -> Result<Self> {
        Self::new(vec![v], tail)
    }

    /// The tail cone itself (vertex at the origin).
    pub fn from_cone(tail: Cone) -> Self {
        let origin = vec![Rational::zero(); tail.rank()];
        Self::new(vec![origin], tail).expect("pointed cone")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn homogenization(&self) -> &Cone {
        &self.homogenization
    }

    /// Whether every vertex is a lattice point.
    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(Rational::is_integer))
    }

    pub fn is_translate_of_tail(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        let mut h = x.to_vec();
        h.push(Rational::from(1));
        self.homogenization.contains(&h)
    }

    /// Containment `other ⊆ self`: vertices inside and recession cone inside.
    pub fn contains(&self, other: &TailedPolyhedron) -> bool {
        other.rank == self.rank
            && other.vertices.iter().all(|v| self.contains_point(v))
            && self.tail.contains_cone(&other.tail)
    }

    pub fn equals(&self, other: &TailedPolyhedron) -> bool {
        self.contains(other) && other.contains(self)
    }

    /// `min ⟨u, ·⟩` over the polyhedron.
    pub fn min_value(&self, u: &[Rational]) -> Result<Rational> {
        if !self.tail.is_nonnegative_on(u) {
            return Err(Error::UnboundedBelow);
        }
        Ok(self.vertices.iter().map(|v| dot(u, v)).min().expect("at least one vertex"))
    }

    /// The face on which `⟨u, ·⟩` attains its minimum.
    pub fn face_min(&self, u: &[Rational]) -> Result<TailedPolyhedron> {
        let m = self.min_value(u)?;
        let verts: Vec<RatVec> = self.vertices.iter().filter(|v| dot(u, v) == m).cloned().collect();
        TailedPolyhedron::new(verts, self.tail.face(u))
    }

    pub fn minkowski_sum(&self, other: &TailedPolyhedron) -> Result<TailedPolyhedron> {
        if self.rank != other.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: other.rank });
        }
        if self.tail != other.tail {
            return Err(Error::TailMismatch);
        }
        let mut sums = Vec::new();
        for v in &self.vertices {
            for w in &other.vertices {
                sums.push(v.iter().zip(w).map(|(a, b)| a + b).collect());
            }
        }
        TailedPolyhedron::new(sums, self.tail.clone())
    }

    /// `λ·P` for `λ > 0`.
    pub fn scale(&self, lambda: &Rational) -> Result<TailedPolyhedron> {
        assert!(lambda.is_positive(), "scaling factor must be positive");
        let verts = self.vertices.iter().map(|v| v.iter().map(|x| x * lambda).collect()).collect();
        TailedPolyhedron::new(verts, self.tail.clone())
    }

    /// Facet inequalities `⟨h, x⟩ + c ≥ 0`, excluding the face at infinity.
    pub fn facets(&self) -> Result<Vec<(Vec<i64>, i64)>> {
        Ok(self
            .homogenization
            .facet_normals()?
            .iter()
            .filter(|h| h[..self.rank].iter().any(|&x| x != 0))
            .map(|h| (h[..self.rank].to_vec(), h[self.rank]))
            .collect())
    }

    /// Bounded edges as vertex pairs, for a full-dimensional homogenization
    /// of rank 3 (polyhedra in the plane).
    pub fn compact_edges(&self) -> Vec<(RatVec, RatVec)> {
        let mut out = Vec::new();
        if self.homogenization.dim() != self.rank + 1 {
            // a segment or point: the whole polytope part is one face
            let compact: Vec<&RatVec> = self.vertices.iter().collect();
            if compact.len() == 2 && self.rank == 2 {
                out.push((compact[0].clone(), compact[1].clone()));
            }
            return out;
        }
        for face in self.homogenization.facet_ray_sets() {
            if face.len() == 2 && face.iter().all(|r| r[self.rank] > 0) && self.rank == 2 {
                out.push((dehomogenize(&face[0]), dehomogenize(&face[1])));
            }
        }
        out.sort();
        out
    }
}

impl PartialEq for TailedPolyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.vertices == other.vertices && self.tail == other.tail
    }
}

impl Eq for TailedPolyhedron {}

fn fmt_point(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for TailedPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| fmt_point(v)).collect();
        if parts.len() == 1 {
            write!(f, "{} + {}", parts[0], self.tail)
        } else {
            write!(f, "conv{{{}}} + {}", parts.join(", "), self.tail)
        }
    }
}

impl fmt::Debug for TailedPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for TailedPolyhedron {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("vertices", &self.vertices)?;
        m.serialize_entry("tail", &self.tail)?;
        m.end()
    }
}
