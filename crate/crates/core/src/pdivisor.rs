//! Polyhedral divisors on the projective line with a rank-2 tail cone.
//!
//! A divisor is a finite list of labelled base points, each carrying a
//! tailed polyhedron over a common pointed, full-dimensional tail cone.
//! Points whose coefficient is the bare tail cone are not stored.

use std::fmt;
use std::sync::OnceLock;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::convex::{homogenize_vertex, vertex_multiplicity, Cone, TailedPolyhedron};
use crate::error::{Error, Result};
use crate::exact::matrix::{gcd_maximal_minors, IntMatrix};
use crate::exact::rational::dot_int;
use crate::exact::{rat_vec, solve_linear_unique, RatVec, Rational};

/// Label reserved for a point outside the support.
pub const GENERIC_LABEL: &str = "generic";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasePoint {
    pub label: String,
    /// Position on the projective line; metadata only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordinate: Option<String>,
}

impl BasePoint {
    pub fn new(label: impl Into<String>) -> Self {
        BasePoint { label: label.into(), coordinate: None }
    }

    pub fn with_coordinate(label: impl Into<String>, coordinate: impl Into<String>) -> Self {
        BasePoint { label: label.into(), coordinate: Some(coordinate.into()) }
    }
}

/// A base point of the support, or any point outside it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointChoice {
    Support(String),
    Generic,
}

impl PointChoice {
    pub fn label(&self) -> &str {
        match self {
            PointChoice::Support(l) => l,
            PointChoice::Generic => GENERIC_LABEL,
        }
    }
}

impl fmt::Display for PointChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone)]
pub struct PolyhedralDivisor {
    tail: Cone,
    support: Vec<(BasePoint, TailedPolyhedron)>,
    degree: OnceLock<TailedPolyhedron>,
    canonical: OnceLock<Option<CanonicalData>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalData {
    pub u: RatVec,
    /// `a_y` per support point, in support order.
    pub a: Vec<(String, Rational)>,
}

impl CanonicalData {
    /// `a_y`, zero off the support.
    pub fn a_of(&self, point: &PointChoice) -> Rational {
        match point {
            PointChoice::Generic => Rational::zero(),
            PointChoice::Support(l) => {
                self.a.iter().find(|(m, _)| m == l).map(|(_, a)| a.clone()).unwrap_or_else(Rational::zero)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub points: Vec<String>,
    pub generic: bool,
}

impl Admissibility {
    pub fn choices(&self) -> Vec<PointChoice> {
        let mut out: Vec<PointChoice> = self.points.iter().cloned().map(PointChoice::Support).collect();
        if self.generic {
            out.push(PointChoice::Generic);
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && !self.generic
    }
}

/// A pair of lattice vectors tested for extension to a basis of `N × Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisWitness {
    pub condition: u8,
    pub points: Vec<String>,
    pub vectors: Vec<Vec<i64>>,
    pub gcd_minors: i64,
    pub extends: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolatedReport {
    pub isolated: bool,
    pub rays_meeting_degree: Vec<Vec<i64>>,
    pub rays_missing_degree: Vec<Vec<i64>>,
    pub witnesses: Vec<BasisWitness>,
    /// First violated condition, if any.
    pub failed_condition: Option<u8>,
    pub note: Option<String>,
}

/// Toric special fibre of a degeneration, or a product (non-pointed cone).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneration {
    Toric(Cone),
    Trivial(Cone),
}

impl Degeneration {
    pub fn cone(&self) -> &Cone {
        match self {
            Degeneration::Toric(c) | Degeneration::Trivial(c) => c,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Degeneration::Trivial(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerationWeight {
    pub u_y: RatVec,
    pub first_block_matches: bool,
    /// `a_y + 1`, the closed form expected for the last coordinate.
    pub closed_form_last: Rational,
}

/// `u` with `⟨u, v_ρ⟩ = 1` on every extreme ray, if unique.
pub fn toric_canonical_weight(c: &Cone) -> Option<RatVec> {
    let rows: Vec<RatVec> = c.rays().iter().map(|r| rat_vec(r)).collect();
    let ones = vec![Rational::from(1); rows.len()];
    solve_linear_unique(&rows, &ones)
}

fn gcd_of_pair(vectors: &[Vec<i64>]) -> i64 {
    gcd_maximal_minors(&IntMatrix::from_rows(3, vectors)).to_i64().expect("minor gcd exceeds i64")
}

impl PolyhedralDivisor {
    pub fn new(tail: Cone, support: Vec<(BasePoint, TailedPolyhedron)>) -> Result<Self> {
        if tail.rank() != 2 {
            return Err(Error::InvalidDivisor(format!("tail rank {} unsupported, expected 2", tail.rank())));
        }
        if !tail.is_pointed() || !tail.is_full_dimensional() {
            return Err(Error::InvalidDivisor("tail cone must be pointed and full-dimensional".into()));
        }
        let mut kept = Vec::new();
        for (p, c) in support {
            if p.label == GENERIC_LABEL {
                return Err(Error::InvalidDivisor(format!("label {GENERIC_LABEL:?} is reserved")));
            }
            if kept.iter().any(|(q, _): &(BasePoint, TailedPolyhedron)| q.label == p.label) {
                return Err(Error::InvalidDivisor(format!("duplicate label {:?}", p.label)));
            }
            if *c.tail() != tail {
                return Err(Error::InvalidDivisor(format!("coefficient at {:?} has a different tail", p.label)));
            }
            if c == TailedPolyhedron::from_cone(tail.clone()) {
                continue;
            }
            kept.push((p, c));
        }
        Ok(PolyhedralDivisor { tail, support: kept, degree: OnceLock::new(), canonical: OnceLock::new() })
    }

    pub fn rank(&self) -> usize {
        self.tail.rank()
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn support(&self) -> &[(BasePoint, TailedPolyhedron)] {
        &self.support
    }

    pub fn labels(&self) -> Vec<String> {
        self.support.iter().map(|(p, _)| p.label.clone()).collect()
    }

    /// Coefficient at a point; the bare tail off the support.
    pub fn coefficient(&self, point: &PointChoice) -> Result<TailedPolyhedron> {
        match point {
            PointChoice::Generic => Ok(TailedPolyhedron::from_cone(self.tail.clone())),
            PointChoice::Support(l) => self
                .support
                .iter()
                .find(|(p, _)| p.label == *l)
                .map(|(_, c)| c.clone())
                .ok_or_else(|| Error::UnknownPoint(l.clone())),
        }
    }

    /// Resolves a label, mapping unknown labels to an error.
    pub fn point(&self, label: &str) -> Result<PointChoice> {
        if label == GENERIC_LABEL {
            return Ok(PointChoice::Generic);
        }
        if self.support.iter().any(|(p, _)| p.label == label) {
            Ok(PointChoice::Support(label.to_string()))
        } else {
            Err(Error::UnknownPoint(label.to_string()))
        }
    }

    /// `min_{v ∈ D_y} ⟨u, v⟩` per support point.
    pub fn evaluate(&self, u: &[Rational]) -> Result<Vec<(String, Rational)>> {
        self.support.iter().map(|(p, c)| Ok((p.label.clone(), c.min_value(u)?))).collect()
    }

    /// Minkowski sum of all coefficients.
    pub fn degree(&self) -> TailedPolyhedron {
        self.degree_ref().clone()
    }

    fn degree_ref(&self) -> &TailedPolyhedron {
        self.degree.get_or_init(|| self.sum_except(None))
    }

    fn sum_except(&self, skip: Option<&str>) -> TailedPolyhedron {
        self.support
            .iter()
            .filter(|(p, _)| Some(p.label.as_str()) != skip)
            .fold(TailedPolyhedron::from_cone(self.tail.clone()), |acc, (_, c)| {
                acc.minkowski_sum(c).expect("coefficients share the tail")
            })
    }

    pub fn is_proper(&self) -> bool {
        let tail = TailedPolyhedron::from_cone(self.tail.clone());
        let deg = self.degree_ref();
        tail.contains(deg) && !tail.equals(deg)
    }

    /// The dual ray of the tail vanishing on `ray`.
    fn normal_vanishing_on(&self, ray: &[i64]) -> RatVec {
        let dual = self.tail.dual().expect("tail is full-dimensional");
        let h = dual
            .rays()
            .iter()
            .find(|h| crate::convex::dot_i(h, ray) == 0)
            .expect("each tail ray has a dual facet normal");
        rat_vec(h)
    }

    /// Whether the degree polyhedron meets the tail ray (for a proper divisor).
    pub fn ray_meets_degree(&self, ray: &[i64]) -> bool {
        let h = self.normal_vanishing_on(ray);
        self.degree_ref().min_value(&h).map(|m| m.is_zero()).unwrap_or(false)
    }

    pub fn rays_missing_degree(&self) -> Vec<Vec<i64>> {
        self.tail.rays().iter().filter(|r| !self.ray_meets_degree(r)).cloned().collect()
    }

    /// Solves the canonical-weight system; `None` when not uniquely solvable.
    /// With empty support the toric system `⟨u, v_ρ⟩ = 1` is used.
    pub fn canonical_data(&self) -> Option<CanonicalData> {
        self.canonical.get_or_init(|| self.solve_canonical()).clone()
    }

    fn solve_canonical(&self) -> Option<CanonicalData> {
        if self.support.is_empty() {
            return toric_canonical_weight(&self.tail).map(|u| CanonicalData { u, a: Vec::new() });
        }
        let r = self.support.len();
        let n = self.rank();
        let mut rows: Vec<RatVec> = Vec::new();
        let mut rhs: RatVec = Vec::new();
        for (i, (_, c)) in self.support.iter().enumerate() {
            for v in c.vertices() {
                let mut row = v.clone();
                row.extend((0..r).map(|j| if j == i { Rational::from(-1) } else { Rational::zero() }));
                rows.push(row);
                let mu = Rational::from(vertex_multiplicity(v));
                rhs.push(-(&mu - Rational::from(1)) / mu);
            }
        }
        for ray in self.rays_missing_degree() {
            let mut row = rat_vec(&ray);
            row.extend(std::iter::repeat_n(Rational::zero(), r));
            rows.push(row);
            rhs.push(Rational::from(1));
        }
        let mut row = vec![Rational::zero(); n];
        row.extend(std::iter::repeat_n(Rational::from(1), r));
        rows.push(row);
        rhs.push(Rational::from(2));

        let sol = solve_linear_unique(&rows, &rhs)?;
        Some(CanonicalData {
            u: sol[..n].to_vec(),
            a: self.support.iter().zip(&sol[n..]).map(|((p, _), a)| (p.label.clone(), a.clone())).collect(),
        })
    }

    /// `Σ_y (1 - 1/max μ(v))` over the support.
    pub fn log_terminal_sum(&self) -> Rational {
        self.support
            .iter()
            .map(|(_, c)| {
                let m = c.vertices().iter().map(|v| vertex_multiplicity(v)).max().unwrap_or(1);
                Rational::from(1) - Rational::new(1, m)
            })
            .sum()
    }

    pub fn is_log_terminal(&self) -> bool {
        self.log_terminal_sum() < Rational::from(2)
    }

    /// Properness, canonical weight and log-terminality.
    pub fn fano_check(&self) -> Result<CanonicalData> {
        if !self.is_proper() {
            return Err(Error::NotProper);
        }
        let cd = self.canonical_data().ok_or(Error::NotQGorenstein)?;
        if !self.is_log_terminal() {
            return Err(Error::NotLogTerminal);
        }
        Ok(cd)
    }

    /// The vertex `v` of the face `v + ρ` of `D_y` (zero off the support).
    fn facet_vertex(&self, coeff: &TailedPolyhedron, ray: &[i64]) -> RatVec {
        let h = self.normal_vanishing_on(ray);
        let face = coeff.face_min(&h).expect("dual ray of the tail");
        face.vertices()[0].clone()
    }

    /// The three-condition isolatedness criterion for rank-2 tails.
    pub fn is_isolated(&self) -> Result<IsolatedReport> {
        if !self.is_proper() {
            return Err(Error::NotProper);
        }
        let mut witnesses = Vec::new();
        let mut failed = None;
        let mut note = None;
        let fail = |c: u8, failed: &mut Option<u8>| {
            if failed.is_none() {
                *failed = Some(c);
            }
        };

        for (p, c) in &self.support {
            for (v, w) in c.compact_edges() {
                let vectors = vec![homogenize_vertex(&v), homogenize_vertex(&w)];
                let g = gcd_of_pair(&vectors);
                if g != 1 {
                    fail(1, &mut failed);
                }
                witnesses.push(BasisWitness {
                    condition: 1,
                    points: vec![p.label.clone()],
                    vectors,
                    gcd_minors: g,
                    extends: g == 1,
                });
            }
        }

        let meeting: Vec<Vec<i64>> = self.tail.rays().iter().filter(|r| self.ray_meets_degree(r)).cloned().collect();
        let missing = self.rays_missing_degree();

        for ray in &missing {
            for (p, c) in &self.support {
                let v = self.facet_vertex(c, ray);
                let mut r0 = ray.clone();
                r0.push(0);
                let vectors = vec![r0, homogenize_vertex(&v)];
                let g = gcd_of_pair(&vectors);
                if g != 1 {
                    fail(2, &mut failed);
                }
                witnesses.push(BasisWitness {
                    condition: 2,
                    points: vec![p.label.clone()],
                    vectors,
                    gcd_minors: g,
                    extends: g == 1,
                });
            }
        }

        for ray in &meeting {
            let mut labels: Vec<String> = self.labels();
            let mut verts: Vec<RatVec> = self.support.iter().map(|(_, c)| self.facet_vertex(c, ray)).collect();
            while labels.len() < 2 {
                labels.push(GENERIC_LABEL.to_string());
                verts.push(vec![Rational::zero(); 2]);
            }
            let non_integral: Vec<usize> =
                (0..labels.len()).filter(|&i| !verts[i].iter().all(Rational::is_integer)).collect();
            if non_integral.len() > 2 {
                fail(3, &mut failed);
                note = Some(format!("{} non-integral facet vertices along a ray meeting the degree", non_integral.len()));
                continue;
            }
            let mut best: Option<BasisWitness> = None;
            'pairs: for z in 0..labels.len() {
                for zp in 0..labels.len() {
                    if z == zp || non_integral.iter().any(|i| *i != z && *i != zp) {
                        continue;
                    }
                    let mut sum = vec![Rational::zero(); 2];
                    for (i, v) in verts.iter().enumerate() {
                        if i != z {
                            for (s, x) in sum.iter_mut().zip(v) {
                                *s += x;
                            }
                        }
                    }
                    let mu = Rational::from(vertex_multiplicity(&verts[zp]));
                    let mut second: RatVec = sum.iter().map(|x| x * &mu).collect();
                    second.push(mu);
                    if !second.iter().all(Rational::is_integer) {
                        continue;
                    }
                    let second: Vec<i64> = second.iter().map(|x| x.numer().to_i64().unwrap()).collect();
                    let vectors = vec![homogenize_vertex(&verts[z]), second];
                    let g = gcd_of_pair(&vectors);
                    let w = BasisWitness {
                        condition: 3,
                        points: vec![labels[z].clone(), labels[zp].clone()],
                        vectors,
                        gcd_minors: g,
                        extends: g == 1,
                    };
                    let done = w.extends;
                    if best.is_none() || done {
                        best = Some(w);
                    }
                    if done {
                        break 'pairs;
                    }
                }
            }
            match best {
                Some(w) => {
                    if !w.extends {
                        fail(3, &mut failed);
                    }
                    witnesses.push(w);
                }
                None => fail(3, &mut failed),
            }
        }

        Ok(IsolatedReport {
            isolated: failed.is_none(),
            rays_meeting_degree: meeting,
            rays_missing_degree: missing,
            witnesses,
            failed_condition: failed,
            note,
        })
    }

    /// Shape of the Q-factorial isolated case: three points, one lattice
    /// segment with primitive direction, two translates, degree meeting both rays.
    pub fn qfactorial_isolated_form(&self) -> bool {
        if self.support.len() != 3 {
            return false;
        }
        let segments: Vec<&TailedPolyhedron> =
            self.support.iter().map(|(_, c)| c).filter(|c| c.vertices().len() == 2).collect();
        let translates = self.support.iter().filter(|(_, c)| c.is_translate_of_tail()).count();
        if segments.len() != 1 || translates != 2 {
            return false;
        }
        let s = segments[0];
        if !s.is_integral() {
            return false;
        }
        let diff: RatVec = s.vertices()[0].iter().zip(&s.vertices()[1]).map(|(a, b)| a - b).collect();
        let diff: Vec<i64> = diff.iter().map(|x| x.numer().to_i64().unwrap()).collect();
        if crate::convex::primitive(&diff).ok() != Some(diff.clone()) {
            return false;
        }
        self.tail.rays().iter().all(|r| self.ray_meets_degree(r))
    }

    /// Support points whose coefficient is not a lattice translate of the tail.
    pub fn nontrivial_points(&self) -> Vec<String> {
        self.support
            .iter()
            .filter(|(_, c)| !(c.is_translate_of_tail() && c.is_integral()))
            .map(|(p, _)| p.label.clone())
            .collect()
    }

    /// At most two non-trivial coefficients: lattice translates can be moved
    /// onto one of them by a principal divisor, so the variety is toric and
    /// every special degeneration is a product.
    pub fn is_toric_presentation(&self) -> bool {
        self.nontrivial_points().len() <= 2
    }

    /// Support points with a non-lattice vertex.
    fn non_integral_points(&self) -> Vec<String> {
        self.support.iter().filter(|(_, c)| !c.is_integral()).map(|(p, _)| p.label.clone()).collect()
    }

    /// `y` is admissible iff at most one other point carries a non-lattice vertex.
    pub fn admissible_points(&self) -> Admissibility {
        let s = self.non_integral_points();
        let points = self
            .support
            .iter()
            .map(|(p, _)| p.label.clone())
            .filter(|y| s.iter().filter(|z| *z != y).count() <= 1)
            .collect();
        Admissibility { points, generic: s.len() <= 1 }
    }

    pub fn is_admissible(&self, y: &PointChoice) -> bool {
        let a = self.admissible_points();
        match y {
            PointChoice::Generic => a.generic,
            PointChoice::Support(l) => a.points.contains(l),
        }
    }

    /// `σ_y`, refusing inadmissible points.
    pub fn degeneration_cone(&self, y: &PointChoice) -> Result<Degeneration> {
        if let PointChoice::Support(l) = y {
            self.point(l)?;
        }
        if !self.is_admissible(y) {
            return Err(Error::InadmissiblePoint(y.label().to_string()));
        }
        self.degeneration_cone_unchecked(y)
    }

    /// `σ_y = pos(tail×0 ∪ D_y×1 ∪ (Σ_{z≠y} D_z)×(-1))` for any point.
    pub fn degeneration_cone_unchecked(&self, y: &PointChoice) -> Result<Degeneration> {
        let dy = self.coefficient(y)?;
        let rest = match y {
            PointChoice::Generic => self.degree_ref().clone(),
            PointChoice::Support(l) => self.sum_except(Some(l)),
        };
        let mut gens: Vec<Vec<i64>> = Vec::new();
        for r in self.tail.rays() {
            let mut g = r.clone();
            g.push(0);
            gens.push(g);
        }
        for v in dy.vertices() {
            gens.push(homogenize_vertex(v));
        }
        for w in rest.vertices() {
            let mut g = homogenize_vertex(w);
            let last = g.len() - 1;
            g[last] = -g[last];
            gens.push(g);
        }
        let cone = Cone::new(self.rank() + 1, &gens)?;
        Ok(if cone.is_pointed() { Degeneration::Toric(cone) } else { Degeneration::Trivial(cone) })
    }

    /// Toric canonical weight of `σ_y`, compared with `(u, a_y + 1)`.
    pub fn degeneration_weight(&self, y: &PointChoice) -> Result<DegenerationWeight> {
        let cone = match self.degeneration_cone(y)? {
            Degeneration::Toric(c) => c,
            Degeneration::Trivial(_) => return Err(Error::NotPointed),
        };
        let u_y = toric_canonical_weight(&cone).ok_or(Error::DegenerationNotGorenstein)?;
        let cd = self.canonical_data().ok_or(Error::NotQGorenstein)?;
        let n = self.rank();
        Ok(DegenerationWeight {
            first_block_matches: u_y[..n] == cd.u[..],
            closed_form_last: cd.a_of(y) + Rational::from(1),
            u_y,
        })
    }

    /// Applies `v ↦ A v` for an integer matrix `A` with determinant ±1.
    pub fn transform(&self, a: &[Vec<i64>]) -> Result<PolyhedralDivisor> {
        let map_int = |v: &[i64]| -> Vec<i64> { a.iter().map(|row| crate::convex::dot_i(row, v) as i64).collect() };
        let map_rat = |v: &[Rational]| -> RatVec { a.iter().map(|row| dot_int(row, v)).collect() };
        let tail = Cone::new(2, &self.tail.rays().iter().map(|r| map_int(r)).collect::<Vec<_>>())?;
        let support = self
            .support
            .iter()
            .map(|(p, c)| {
                let verts = c.vertices().iter().map(|v| map_rat(v)).collect();
                Ok((p.clone(), TailedPolyhedron::new(verts, tail.clone())?))
            })
            .collect::<Result<Vec<_>>>()?;
        PolyhedralDivisor::new(tail, support)
    }
}

/// Equality of labels and coefficients; point coordinates are metadata.
impl PartialEq for PolyhedralDivisor {
    fn eq(&self, other: &Self) -> bool {
        self.tail == other.tail
            && self.support.len() == other.support.len()
            && self.support.iter().zip(&other.support).all(|((p, c), (q, e))| p.label == q.label && c == e)
    }
}

impl fmt::Debug for PolyhedralDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tail {}", self.tail)?;
        for (p, c) in &self.support {
            writeln!(f, "  {}: {}", p.label, c)?;
        }
        Ok(())
    }
}
