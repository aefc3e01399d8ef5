//! Volume functional, Futaki invariants, Reeb-field minimization and the
//! K-stability verdict for toric and complexity-one Fano cones.

mod minimize;
mod oracle;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::convex::{derivative_along_line, truncated_dual_volume, vol_along_line, Cone, VolumeLine};
use crate::error::{Error, Result};
use crate::exact::matrix::integer_kernel;
use crate::exact::rational::dot;
use crate::exact::{rat_vec, RatVec, Rational, RationalFunction1D, Scalar, UniPoly};
use crate::pdivisor::{toric_canonical_weight, CanonicalData, Degeneration, PointChoice, PolyhedralDivisor};

pub use minimize::{reeb_minimize, slice_line, ReebMinimum, Regularity, SliceLine};
pub use oracle::{
    oracle_cap, vol_counting_oracle, vol_counting_oracle_box, vol_counting_oracle_with_cap, DEFAULT_MAX_POINTS,
};

/// Significant digits of the decimal approximations in reports.
pub const REPORT_DIGITS: usize = 12;

/// A Fano cone singularity of complexity at most one.
#[derive(Clone, Debug)]
pub enum FanoCone {
    Toric(Cone),
    Divisor(PolyhedralDivisor),
}

/// The toric cone on which volumes are computed, and whether points of `N`
/// must be lifted to `N × Z` by appending a zero.
#[derive(Clone, Debug)]
pub struct VolumeModel {
    pub cone: Cone,
    pub point: Option<PointChoice>,
}

impl VolumeModel {
    pub fn lift(&self, v: &[Rational]) -> RatVec {
        let mut out = v.to_vec();
        if self.point.is_some() {
            out.push(Rational::zero());
        }
        out
    }
}

impl FanoCone {
    pub fn rank(&self) -> usize {
        self.reeb_cone().rank()
    }

    /// The cone whose interior holds the Reeb fields.
    pub fn reeb_cone(&self) -> &Cone {
        match self {
            FanoCone::Toric(c) => c,
            FanoCone::Divisor(d) => d.tail(),
        }
    }

    /// Canonical weight after checking the Fano conditions.
    pub fn canonical_weight(&self) -> Result<RatVec> {
        match self {
            FanoCone::Toric(c) => {
                if !c.is_full_dimensional() {
                    return Err(Error::NotFullDimensional);
                }
                if !c.is_pointed() {
                    return Err(Error::NotPointed);
                }
                toric_canonical_weight(c).ok_or(Error::NotQGorenstein)
            }
            FanoCone::Divisor(d) => Ok(d.fano_check()?.u),
        }
    }

    pub fn canonical_data(&self) -> Option<CanonicalData> {
        match self {
            FanoCone::Toric(_) => None,
            FanoCone::Divisor(d) => d.canonical_data(),
        }
    }

    /// The cone used for volumes: the cone itself, or `σ_y` for the first
    /// admissible `y` with a pointed degeneration cone.
    pub fn volume_model(&self) -> Result<VolumeModel> {
        match self {
            FanoCone::Toric(c) => Ok(VolumeModel { cone: c.clone(), point: None }),
            FanoCone::Divisor(d) => {
                for y in d.admissible_points().choices() {
                    if let Degeneration::Toric(cone) = d.degeneration_cone(&y)? {
                        return Ok(VolumeModel { cone, point: Some(y) });
                    }
                }
                Err(Error::NoAdmissiblePoint)
            }
        }
    }

    /// `vol(ξ)` for `ξ` in the interior of the Reeb cone.
    pub fn volume(&self, xi: &[Rational]) -> Result<Rational> {
        match self {
            FanoCone::Toric(c) => truncated_dual_volume(c, xi),
            FanoCone::Divisor(d) => vol_pdiv(d, xi),
        }
    }
}

/// `vol σ_y^∨(ξ, 0)`, computed at every admissible `y` and checked to agree.
pub fn vol_pdiv(d: &PolyhedralDivisor, xi: &[Rational]) -> Result<Rational> {
    if xi.len() != d.rank() {
        return Err(Error::DimensionMismatch { expected: d.rank(), found: xi.len() });
    }
    if !d.tail().contains_in_interior(xi) {
        return Err(Error::NotInterior);
    }
    let mut lifted = xi.to_vec();
    lifted.push(Rational::zero());
    let mut value: Option<(PointChoice, Rational)> = None;
    for y in d.admissible_points().choices() {
        let Degeneration::Toric(cone) = d.degeneration_cone(&y)? else {
            continue;
        };
        let v = truncated_dual_volume(&cone, &lifted)?;
        match &value {
            None => value = Some((y, v)),
            Some((y0, v0)) => assert_eq!(v0, &v, "volume differs between degenerations at {y0} and {y}"),
        }
    }
    value.map(|(_, v)| v).ok_or(Error::NoAdmissiblePoint)
}

/// A Reeb field `base + s·dir` at an exact parameter `s`; rational fields
/// have `dir = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebField {
    base: RatVec,
    dir: RatVec,
    param: Scalar,
}

impl ReebField {
    pub fn rational(xi: RatVec) -> Self {
        let dir = vec![Rational::zero(); xi.len()];
        ReebField { base: xi, dir, param: Scalar::Rational(Rational::zero()) }
    }

    /// Collapses to a rational field when `param` is rational.
    pub fn on_line(base: RatVec, dir: RatVec, param: Scalar) -> Self {
        match param {
            Scalar::Rational(s) => {
                ReebField::rational(base.iter().zip(&dir).map(|(b, d)| b + d * &s).collect())
            }
            p => ReebField { base, dir, param: p },
        }
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn dir(&self) -> &[Rational] {
        &self.dir
    }

    pub fn param(&self) -> &Scalar {
        &self.param
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    pub fn is_rational(&self) -> bool {
        self.param.is_rational()
    }

    pub fn to_rational(&self) -> Option<RatVec> {
        self.is_rational().then(|| self.base.clone())
    }

    pub fn coordinates(&self) -> Result<Vec<Scalar>> {
        self.base
            .iter()
            .zip(&self.dir)
            .map(|(b, d)| {
                if d.is_zero() {
                    Ok(Scalar::Rational(b.clone()))
                } else {
                    self.param.apply(&RationalFunction1D::from_poly(UniPoly::linear(b.clone(), d.clone())))
                }
            })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        let s = self.param.to_f64();
        self.base.iter().zip(&self.dir).map(|(b, d)| b.to_f64() + d.to_f64() * s).collect()
    }

    /// `⟨w, ξ⟩ = 1` holds exactly.
    pub fn is_normalized(&self, w: &[Rational]) -> bool {
        dot(w, &self.base) == Rational::one() && (self.is_rational() || dot(w, &self.dir).is_zero())
    }

    fn lifted(&self, model: &VolumeModel) -> (RatVec, RatVec) {
        (model.lift(&self.base), model.lift(&self.dir))
    }

    fn eval(&self, line: &VolumeLine) -> Result<Scalar> {
        self.param.apply(&line.function)
    }
}

impl Serialize for ReebField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coords = self.coordinates().map_err(serde::ser::Error::custom)?;
        let decimals: Vec<String> = coords.iter().map(|c| c.to_decimal(REPORT_DIGITS)).collect();
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("coordinates", &coords)?;
        m.serialize_entry("decimal", &decimals)?;
        m.end()
    }
}

/// `Fut_ξ(v) = D_{-v̂} vol(ξ̂)` with `v̂ = v − ⟨w, v⟩·ξ̂`.
pub fn futaki_projected(c: &Cone, w: &[Rational], xi: &ReebField, v: &[Rational]) -> Result<Scalar> {
    if !xi.is_normalized(w) {
        return Err(Error::Precondition("Reeb field must satisfy ⟨w, ξ⟩ = 1".into()));
    }
    let k = dot(w, v);
    // v̂(s) = (v − k·base) − s·k·dir
    let v0: RatVec = v.iter().zip(&xi.base).map(|(a, b)| a - &k * b).collect();
    let first = derivative_along_line(c, &xi.base, &xi.dir, &v0)?;
    let along = derivative_along_line(c, &xi.base, &xi.dir, &xi.dir)?;
    let s_times = RationalFunction1D::from_poly(UniPoly::linear(Rational::zero(), k));
    let dvhat = first.function.sub(&s_times.mul(&along.function));
    xi.param.apply(&dvhat.scale(&-Rational::one()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "K-stable")]
    KStable,
    #[serde(rename = "not K-stable")]
    NotKStable,
    #[serde(rename = "undecided-numeric")]
    UndecidedNumeric,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::KStable => "K-stable",
            Verdict::NotKStable => "not K-stable",
            Verdict::UndecidedNumeric => "undecided-numeric",
        }
    }
}

/// `D_{(v,0)} vol` at the minimizer for one basis vector `v` of `u^⊥`.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalityWitness {
    pub direction: Vec<i64>,
    pub value: Scalar,
}

/// The Futaki check of one special degeneration.
#[derive(Clone, Debug, Serialize)]
pub struct DegenerationCheck {
    pub point: String,
    /// Non-pointed `σ_y`: a product configuration, no sign required.
    pub trivial: bool,
    /// The variety is toric, so this degeneration is a product and its
    /// Futaki invariant must vanish rather than be positive.
    pub product: bool,
    pub u_y: Option<RatVec>,
    /// Last coordinate of `u_y`; the tested direction is `e_last − c·(ξ̂, 0)`.
    pub c: Option<Rational>,
    pub sign: i32,
    pub value: Option<Scalar>,
    pub decimal: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub canonical_weight: RatVec,
    pub canonical: Option<CanonicalData>,
    pub minimizer: ReebField,
    pub regularity: Regularity,
    pub volume: Scalar,
    pub volume_decimal: String,
    pub volume_point: Option<String>,
    pub criticality_witnesses: Vec<CriticalityWitness>,
    pub degeneration_checks: Vec<DegenerationCheck>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl StabilityReport {
    pub fn is_critical(&self) -> bool {
        self.criticality_witnesses.iter().all(|w| w.value.signum() == 0)
    }
}

fn unit(n: usize, i: usize) -> RatVec {
    (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()
}

/// Decides K-stability of `(X, ξ)`; without `ξ` the volume minimizer is used.
pub fn kstability_test(f: &FanoCone, xi: Option<&[Rational]>) -> Result<StabilityReport> {
    let u = f.canonical_weight()?;
    let model = f.volume_model()?;
    let n = f.rank();
    let mut notes = Vec::new();

    let (field, regularity) = match xi {
        Some(x) => {
            if x.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: x.len() });
            }
            if !f.reeb_cone().contains_in_interior(x) {
                return Err(Error::NotInterior);
            }
            let p = dot(&u, x);
            (ReebField::rational(x.iter().map(|c| c / &p).collect()), Regularity::QuasiRegular)
        }
        None => {
            let m = reeb_minimize(f)?;
            (m.field, m.regularity)
        }
    };
    let (base, dir) = field.lifted(&model);

    let mut witnesses = Vec::new();
    for b in integer_kernel(std::slice::from_ref(&u), n) {
        let line = derivative_along_line(&model.cone, &base, &dir, &model.lift(&rat_vec(&b)))?;
        witnesses.push(CriticalityWitness { direction: b, value: field.eval(&line)? });
    }
    let critical = witnesses.iter().all(|w| w.value.signum() == 0);
    let volume = field.eval(&vol_along_line(&model.cone, &base, &dir)?)?;

    let mut checks = Vec::new();
    if let FanoCone::Divisor(d) = f {
        if d.is_toric_presentation() {
            notes.push("at most two non-trivial coefficients: the variety is toric and degenerations are products".into());
        }
        notes.push(
            "positivity on u_y^⊥ ∩ (N_Q × Z_{>0}) reduced to v' = e_last − c·(ξ̂,0) by linearity and criticality"
                .into(),
        );
        for y in d.admissible_points().choices() {
            let cone = match d.degeneration_cone(&y)? {
                Degeneration::Trivial(_) => {
                    checks.push(DegenerationCheck {
                        point: y.label().to_string(),
                        trivial: true,
                        product: true,
                        u_y: None,
                        c: None,
                        sign: 0,
                        value: None,
                        decimal: None,
                    });
                    continue;
                }
                Degeneration::Toric(c) => c,
            };
            let w = d.degeneration_weight(&y)?;
            if !w.first_block_matches {
                notes.push(format!("u_y at {} does not restrict to u", y.label()));
            }
            let c = w.u_y[n].clone();
            if c != w.closed_form_last {
                notes.push(format!(
                    "last coordinate of u_y at {} is {}, closed form a_y + 1 gives {}",
                    y.label(),
                    c,
                    w.closed_form_last
                ));
            }
            // D_{e − c·(ξ̂,0)} vol = D_e vol + c·dim·vol by Euler's identity
            let dim = Rational::from(cone.rank() as i64);
            let de = derivative_along_line(&cone, &base, &dir, &unit(cone.rank(), n))?;
            let vol = vol_along_line(&cone, &base, &dir)?;
            let g = de.function.add(&vol.function.scale(&(&c * &dim)));
            let sign = field.param.sign_of(&g)?;
            let value = field.param.apply(&g)?;
            checks.push(DegenerationCheck {
                point: y.label().to_string(),
                trivial: false,
                product: d.is_toric_presentation(),
                decimal: Some(value.to_decimal(REPORT_DIGITS)),
                u_y: Some(w.u_y),
                c: Some(c),
                sign,
                value: Some(value),
            });
        }
    }

    let verdict = if !critical {
        if regularity == Regularity::UndecidedNumeric {
            Verdict::UndecidedNumeric
        } else {
            Verdict::NotKStable
        }
    } else if checks.iter().all(|c| c.trivial || if c.product { c.sign == 0 } else { c.sign > 0 }) {
        Verdict::KStable
    } else {
        Verdict::NotKStable
    };

    Ok(StabilityReport {
        canonical_weight: u,
        canonical: f.canonical_data(),
        minimizer: field,
        regularity,
        volume_decimal: volume.to_decimal(REPORT_DIGITS),
        volume,
        volume_point: model.point.map(|p| p.label().to_string()),
        criticality_witnesses: witnesses,
        degeneration_checks: checks,
        verdict,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::pdivisor::tests::xk;

    #[test]
    fn x1_volumes() {
        let d = xk(1);
        assert_eq!(vol_pdiv(&d, &rat_vec(&[0, 1])).unwrap(), q(196, 165));
        assert_eq!(vol_pdiv(&d, &rat_vec(&[1, 1])).unwrap(), q(79, 45));
        assert_eq!(vol_pdiv(&d, &rat_vec(&[0, 2])).unwrap(), q(196, 165 * 8));
        assert_eq!(vol_pdiv(&d, &rat_vec(&[-1, 1])), Err(Error::NotInterior));
    }

    #[test]
    fn x1_is_kstable() {
        let r = kstability_test(&FanoCone::Divisor(xk(1)), None).unwrap();
        assert_eq!(r.verdict, Verdict::KStable);
        assert_eq!(r.regularity, Regularity::Irregular);
        assert!(r.is_critical());
        assert_eq!(r.degeneration_checks.len(), 2);
        assert!(r.degeneration_checks.iter().all(|c| c.sign == 1 && c.c == Some(Rational::zero())));
        let x0 = r.minimizer.to_f64()[0];
        assert!((x0 - 0.35094).abs() < 1e-4, "{x0}");
    }

    #[test]
    fn x1_off_minimizer_is_unstable() {
        let r = kstability_test(&FanoCone::Divisor(xk(1)), Some(&rat_vec(&[0, 1]))).unwrap();
        assert_eq!(r.verdict, Verdict::NotKStable);
        assert_eq!(r.criticality_witnesses[0].value, Scalar::Rational(q(-1424, 1815)));
    }

    #[test]
    fn futaki_at_the_minimizer() {
        let d = xk(1);
        let f = FanoCone::Divisor(d.clone());
        let m = reeb_minimize(&f).unwrap();
        let s0 = match d.degeneration_cone(&d.point("0").unwrap()).unwrap() {
            Degeneration::Toric(c) => c,
            _ => unreachable!(),
        };
        let model = VolumeModel { cone: s0.clone(), point: Some(PointChoice::Generic) };
        let (b, dr) = m.field.lifted(&model);
        let lifted = ReebField { base: b, dir: dr, param: m.field.param.clone() };
        let w = rat_vec(&[0, 1, 0]);
        assert_eq!(futaki_projected(&s0, &w, &lifted, &rat_vec(&[0, 0, -1])).unwrap().signum(), 1);
        assert_eq!(futaki_projected(&s0, &w, &lifted, &rat_vec(&[0, 0, 1])).unwrap().signum(), -1);
        assert_eq!(futaki_projected(&s0, &w, &lifted, &rat_vec(&[1, 0, 0])).unwrap().signum(), 0);
        let xi_hat: RatVec = lifted.base.clone();
        let at_base = ReebField::rational(xi_hat);
        assert_eq!(futaki_projected(&s0, &w, &at_base, &at_base.base.clone()).unwrap(), Scalar::Rational(q(0, 1)));
    }

    #[test]
    fn toric_orthant() {
        let f = FanoCone::Toric(Cone::orthant(3));
        let r = kstability_test(&f, None).unwrap();
        assert_eq!(r.verdict, Verdict::KStable);
        assert_eq!(r.minimizer.to_rational().unwrap(), vec![q(1, 3); 3]);
        let r = kstability_test(&f, Some(&rat_vec(&[1, 2, 3]))).unwrap();
        assert_eq!(r.verdict, Verdict::NotKStable);
    }

    #[test]
    fn non_fano_inputs() {
        let flat = Cone::new(3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(FanoCone::Toric(flat).canonical_weight().unwrap_err(), Error::NotFullDimensional);
        let square = Cone::new(3, &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]).unwrap();
        assert!(FanoCone::Toric(square).canonical_weight().is_ok());
        let skew = Cone::new(3, &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 2]]).unwrap();
        assert_eq!(FanoCone::Toric(skew).canonical_weight().unwrap_err(), Error::NotQGorenstein);
    }

    fn two_point(tail: [[i64; 2]; 2], a: RatVec, b: RatVec) -> FanoCone {
        use crate::convex::TailedPolyhedron;
        use crate::pdivisor::BasePoint;
        let tail = Cone::new(2, &[tail[0].to_vec(), tail[1].to_vec()]).unwrap();
        let support = vec![
            (BasePoint::new("p"), TailedPolyhedron::new(vec![a], tail.clone()).unwrap()),
            (BasePoint::new("q"), TailedPolyhedron::new(vec![b], tail.clone()).unwrap()),
        ];
        FanoCone::Divisor(PolyhedralDivisor::new(tail, support).unwrap())
    }

    #[test]
    fn toric_presentations_have_product_degenerations() {
        let f = two_point([[-4, -1], [1, 4]], rat_vec(&[1, 3]), rat_vec(&[0, 1]));
        let r = kstability_test(&f, None).unwrap();
        assert!(r.degeneration_checks.iter().all(|c| c.product && c.sign == 0));
        assert_eq!(r.verdict, Verdict::KStable);

        // the extra torus direction has non-zero Futaki invariant at the minimizer over N
        let f = two_point([[-3, 1], [-1, 1]], vec![q(1, 3), q(2, 3)], rat_vec(&[-2, 1]));
        let r = kstability_test(&f, None).unwrap();
        assert!(r.is_critical());
        let signs: Vec<i32> = r.degeneration_checks.iter().filter(|c| !c.trivial).map(|c| c.sign).collect();
        assert!(signs.contains(&-1) && signs.contains(&1));
        assert_eq!(r.verdict, Verdict::NotKStable);
    }
}
