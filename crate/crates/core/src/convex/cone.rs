use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{dot_i, generalized_cross, primitive, primitive_i128};
use crate::error::{Error, Result};
use crate::exact::matrix::{combinations, rank, rank_int};
use crate::exact::Rational;

/// A rational polyhedral cone `pos(generators) ⊆ Q^rank`.
///
/// Facets are found by brute force: every `(d-1)`-subset of generators spans a
/// candidate hyperplane, kept if all generators lie on one side. Cones of
/// dimension `d < rank` are handled in `d` coordinates on which the projection
/// is injective over the linear span.
#[derive(Clone)]
pub struct Cone {
    rank: usize,
    dim: usize,
    pointed: bool,
    rays: Vec<Vec<i64>>,
    coords: Vec<usize>,
    facets: Vec<Vec<i64>>,
}

/// A full-dimensional simplicial cone of a triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialPiece {
    pub generators: Vec<Vec<i64>>,
    pub det_abs: i64,
}

fn project(v: &[i64], coords: &[usize]) -> Vec<i64> {
    coords.iter().map(|&i| v[i]).collect()
}

fn project_rational(v: &[Rational], coords: &[usize]) -> Vec<Rational> {
    coords.iter().map(|&i| v[i].clone()).collect()
}

fn enumerate_facets(gens: &[Vec<i64>], d: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    for subset in combinations(gens.len(), d - 1) {
        let vs: Vec<Vec<i64>> = subset.iter().map(|&i| gens[i].clone()).collect();
        let Some(h) = primitive_i128(&generalized_cross(&vs, d)) else {
            continue;
        };
        let (mut pos, mut neg) = (false, false);
        for g in gens {
            match dot_i(&h, g).signum() {
                1 => pos = true,
                -1 => neg = true,
                _ => {}
            }
        }
        let h = match (pos, neg) {
            (true, true) => continue,
            (false, true) => h.iter().map(|x| -x).collect(),
            _ => h,
        };
        if !out.contains(&h) {
            out.push(h);
        }
    }
    out.sort();
    out
}

impl Cone {
    pub fn new(rank: usize, generators: &[Vec<i64>]) -> Result<Cone> {
        let mut gens = Vec::new();
        for g in generators {
            if g.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: g.len() });
            }
            if let Ok(p) = primitive(g) {
                gens.push(p);
            }
        }
        gens.sort();
        gens.dedup();
        if gens.is_empty() {
            return Ok(Cone { rank, dim: 0, pointed: true, rays: gens, coords: Vec::new(), facets: Vec::new() });
        }
        let dim = rank_int(&gens);
        let coords = combinations(rank, dim)
            .into_iter()
            .find(|c| rank_int(&gens.iter().map(|g| project(g, c)).collect::<Vec<_>>()) == dim)
            .expect("some coordinate projection is injective on the span");
        let projected: Vec<Vec<i64>> = gens.iter().map(|g| project(g, &coords)).collect();
        let facets = enumerate_facets(&projected, dim);
        let pointed = !facets.is_empty() && rank_int(&facets) == dim;
        let rays = if pointed {
            gens.into_iter()
                .zip(&projected)
                .filter(|(_, p)| {
                    let tight: Vec<Vec<i64>> = facets.iter().filter(|h| dot_i(h, p) == 0).cloned().collect();
                    tight.len() >= dim - 1 && rank_int(&tight) == dim - 1
                })
                .map(|(g, _)| g)
                .collect()
        } else {
            gens
        };
        Ok(Cone { rank, dim, pointed, rays, coords, facets })
    }

    /// The cone generated by the standard basis.
    pub fn orthant(rank: usize) -> Cone {
        let gens: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        Cone::new(rank, &gens).expect("valid generators")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.rank
    }

    pub fn is_simplicial(&self) -> bool {
        self.pointed && self.rays.len() == self.dim
    }

    /// Primitive extreme rays in lexicographic order (for a pointed cone);
    /// reduced primitive generators otherwise.
    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    /// Inner facet normals of a full-dimensional cone.
    pub fn facet_normals(&self) -> Result<&[Vec<i64>]> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        Ok(&self.facets)
    }

    /// For each facet, the extreme rays lying on it.
    pub fn facet_ray_sets(&self) -> Vec<Vec<Vec<i64>>> {
        self.facets
            .iter()
            .map(|h| {
                self.rays
                    .iter()
                    .filter(|r| dot_i(h, &project(r, &self.coords)) == 0)
                    .cloned()
                    .collect()
            })
            .collect()
    }

    fn in_span(&self, x: &[Rational]) -> bool {
        if self.dim == self.rank {
            return true;
        }
        let mut rows: Vec<Vec<Rational>> = self.rays.iter().map(|r| super::to_rational_vec(r)).collect();
        rows.push(x.to_vec());
        rank(&rows) == self.dim
    }

    fn facet_values(&self, x: &[Rational]) -> Vec<Rational> {
        let px = project_rational(x, &self.coords);
        self.facets.iter().map(|h| crate::exact::rational::dot_int(h, &px)).collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        assert_eq!(x.len(), self.rank, "vector length differs from cone rank");
        if self.dim == 0 {
            return x.iter().all(Rational::is_zero);
        }
        self.in_span(x) && self.facet_values(x).iter().all(|v| !v.is_negative())
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        self.contains(&super::to_rational_vec(x))
    }

    /// Membership in the relative interior.
    pub fn contains_in_interior(&self, x: &[Rational]) -> bool {
        assert_eq!(x.len(), self.rank, "vector length differs from cone rank");
        if self.dim == 0 {
            return x.iter().all(Rational::is_zero);
        }
        self.in_span(x) && self.facet_values(x).iter().all(Rational::is_positive)
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rank == self.rank && other.rays.iter().all(|r| self.contains_int(r))
    }

    /// `{u : ⟨u, v⟩ ≥ 0 for all v ∈ C}` for a full-dimensional cone.
    pub fn dual(&self) -> Result<Cone> {
        Cone::new(self.rank, self.facet_normals()?)
    }

    /// The face cut out by a linear form nonnegative on the cone.
    pub fn face(&self, u: &[Rational]) -> Cone {
        let rays: Vec<Vec<i64>> = self
            .rays
            .iter()
            .filter(|r| crate::exact::rational::dot_int(r, u).is_zero())
            .cloned()
            .collect();
        Cone::new(self.rank, &rays).expect("rays have the cone's rank")
    }

    /// Whether the linear form is nonnegative on the cone.
    pub fn is_nonnegative_on(&self, u: &[Rational]) -> bool {
        self.rays.iter().all(|r| !crate::exact::rational::dot_int(r, u).is_negative())
    }

    /// Triangulation pulling the lexicographically last extreme ray.
    pub fn triangulate(&self) -> Result<Vec<SimplicialPiece>> {
        self.triangulate_with_apex(true)
    }

    /// Triangulation pulling the first (`last = false`) or last extreme ray at each level.
    pub fn triangulate_with_apex(&self, last: bool) -> Result<Vec<SimplicialPiece>> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        if !self.pointed {
            return Err(Error::NotPointed);
        }
        Ok(fan(self, last)
            .into_iter()
            .map(|mut generators| {
                generators.sort();
                let det_abs = i64::try_from(super::det_i(&generators).abs()).expect("determinant exceeds i64");
                SimplicialPiece { generators, det_abs }
            })
            .collect())
    }
}

fn fan(cone: &Cone, last: bool) -> Vec<Vec<Vec<i64>>> {
    if cone.rays.len() == cone.dim {
        return vec![cone.rays.clone()];
    }
    let apex = if last { cone.rays.last() } else { cone.rays.first() }.unwrap().clone();
    let mut out = Vec::new();
    for face_rays in cone.facet_ray_sets() {
        if face_rays.contains(&apex) {
            continue;
        }
        let face = Cone::new(cone.rank, &face_rays).expect("facet rays have the cone's rank");
        for mut simplex in fan(&face, last) {
            simplex.push(apex.clone());
            out.push(simplex);
        }
    }
    out
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.pointed == other.pointed && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pos{{")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Cone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("rank", &self.rank)?;
        m.serialize_entry("rays", &self.rays)?;
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_vec;

    fn cone(rank: usize, rays: &[&[i64]]) -> Cone {
        Cone::new(rank, &rays.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn orthant_is_self_dual() {
        let c = Cone::orthant(3);
        assert!(c.is_pointed() && c.is_simplicial());
        assert_eq!(c.dual().unwrap(), c);
    }

    #[test]
    fn sigma0_dual_for_k1() {
        let s0 = cone(3, &[&[2, 1, 5], &[1, 1, -3], &[-2, 1, -3], &[-1, 1, 0]]);
        assert_eq!(s0.rays().len(), 4);
        let d = s0.dual().unwrap();
        assert_eq!(d.rays(), &[vec![-8, 11, 1], vec![0, 3, 1], vec![3, 3, -1], vec![5, 5, -3]]);
        assert_eq!(d.dual().unwrap(), s0);
    }

    #[test]
    fn tail_dual_rank2() {
        let s = cone(2, &[&[-1, 1], &[11, 8]]);
        assert_eq!(s.dual().unwrap().rays(), &[vec![-8, 11], vec![1, 1]]);
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let c = cone(3, &[&[2, 1, 5], &[1, 1, -3], &[-2, 1, -3], &[-1, 1, 0], &[11, 8, 0], &[4, 2, 10]]);
        assert_eq!(c.rays().len(), 4);
        assert!(!c.rays().contains(&vec![11, 8, 0]));
    }

    #[test]
    fn non_pointed_and_lower_dimensional() {
        let c = cone(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, -1]]);
        assert!(!c.is_pointed());
        assert!(c.contains(&rat_vec(&[1, 1, -5])));
        assert!(!c.contains(&rat_vec(&[-1, 1, 0])));
        let flat = cone(3, &[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(flat.dim(), 2);
        assert!(flat.is_pointed());
        assert!(flat.contains(&rat_vec(&[1, 1, 2])));
        assert!(!flat.contains(&rat_vec(&[1, 1, 1])));
        assert!(!flat.contains(&rat_vec(&[-1, 2, 1])));
        assert_eq!(flat.dual(), Err(Error::NotFullDimensional));
        let ray = cone(2, &[&[2, 4]]);
        assert_eq!(ray.rays(), &[vec![1, 2]]);
        let line = cone(2, &[&[1, 0], &[-1, 0]]);
        assert!(!line.is_pointed());
    }

    #[test]
    fn triangulations() {
        let d = cone(3, &[&[-8, 11, 1], &[0, 3, 1], &[3, 3, -1], &[5, 5, -3]]);
        let pieces = d.triangulate().unwrap();
        assert_eq!(pieces.len(), 2);
        assert!(pieces.contains(&SimplicialPiece {
            generators: vec![vec![-8, 11, 1], vec![0, 3, 1], vec![5, 5, -3]],
            det_abs: 152
        }));
        assert!(pieces.contains(&SimplicialPiece {
            generators: vec![vec![0, 3, 1], vec![3, 3, -1], vec![5, 5, -3]],
            det_abs: 12
        }));
        let square = cone(3, &[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        for last in [true, false] {
            let p = square.triangulate_with_apex(last).unwrap();
            assert_eq!(p.len(), 2);
            assert!(p.iter().all(|s| s.det_abs == 2));
        }
        let simp = Cone::orthant(3);
        assert_eq!(simp.triangulate().unwrap().len(), 1);
    }

    #[test]
    fn faces_and_containment() {
        let s = cone(2, &[&[-1, 1], &[11, 8]]);
        let f = s.face(&rat_vec(&[1, 1]));
        assert_eq!(f.rays(), &[vec![-1, 1]]);
        assert_eq!(s.face(&rat_vec(&[0, 0])), s);
        assert!(s.contains_in_interior(&rat_vec(&[0, 1])));
        assert!(!s.contains_in_interior(&rat_vec(&[-1, 1])));
        assert!(s.contains_cone(&f));
    }
}
