//! Builders for the worked families and reference data.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;

use crate::convex::{Cone, TailedPolyhedron};
use crate::error::{Error, Result};
use crate::exact::{q, rat_vec, Rational};
use crate::pdivisor::{BasePoint, PolyhedralDivisor};

/// Parameters of `X_k`: `k ≥ 1` and optional positions of `y₁ … y_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XkSpec {
    pub k: i64,
    pub points: Option<Vec<Rational>>,
}

impl XkSpec {
    pub fn new(k: i64) -> Self {
        XkSpec { k, points: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidDivisor(format!("k must be at least 1, got {}", self.k)));
        }
        if let Some(pts) = &self.points {
            if pts.len() as i64 != self.k {
                return Err(Error::InvalidDivisor(format!("expected {} points, got {}", self.k, pts.len())));
            }
            if pts.iter().any(Rational::is_zero) {
                return Err(Error::InvalidDivisor("points must be nonzero".into()));
            }
            if pts.iter().collect::<BTreeSet<_>>().len() != pts.len() {
                return Err(Error::InvalidDivisor("points must be distinct".into()));
            }
        }
        Ok(())
    }

    /// Position of `y_i`, 1-based; defaults to `i`.
    pub fn point(&self, i: i64) -> Rational {
        self.points.as_ref().map_or_else(|| Rational::from(i), |p| p[(i - 1) as usize].clone())
    }
}

/// Tail `pos{(−1,1), (15k−4, 8)}` with coefficients `(2/5,1/5)` at 0,
/// `(−2/3,1/3)` at ∞ and the segment `[(0,0),(1,0)]` at each `y_i`.
pub fn build_xk(spec: &XkSpec) -> Result<PolyhedralDivisor> {
    spec.validate()?;
    let k = spec.k;
    let tail = Cone::new(2, &[vec![-1, 1], vec![15 * k - 4, 8]])?;
    let mut support = vec![
        (
            BasePoint::with_coordinate("0", "0"),
            TailedPolyhedron::translate_of(vec![q(2, 5), q(1, 5)], tail.clone())?,
        ),
        (
            BasePoint::with_coordinate("inf", "inf"),
            TailedPolyhedron::translate_of(vec![q(-2, 3), q(1, 3)], tail.clone())?,
        ),
    ];
    for i in 1..=k {
        support.push((
            BasePoint::with_coordinate(format!("y{i}"), spec.point(i).to_string()),
            TailedPolyhedron::new(vec![rat_vec(&[0, 0]), rat_vec(&[1, 0])], tail.clone())?,
        ));
    }
    PolyhedralDivisor::new(tail, support)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BpFamily {
    AffineSpace,
    /// `x₁x₂ + x₃^p + x₄^q = 0`
    TwoPowers,
    /// `x₁x₂ + x₃x₄ + x₅^p = 0`
    OnePower,
    /// `x₁x₂ + x₃x₄ + x₅x₆ = 0`
    Quadric,
}

/// One family of isolated factorial cone singularities with a good torus action.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub family: BpFamily,
    pub ambient: Option<String>,
    pub constraint: String,
    pub notes: String,
}

impl CatalogEntry {
    /// Whether the exponents satisfy the family's constraint.
    pub fn accepts(&self, exponents: &[u64]) -> bool {
        match (self.family, exponents) {
            (BpFamily::AffineSpace | BpFamily::Quadric, []) => true,
            (BpFamily::TwoPowers, &[p, q]) => p > 1 && q > 1 && p.gcd(&q) == 1,
            (BpFamily::OnePower, &[p]) => p > 1,
            _ => false,
        }
    }
}

pub fn brieskorn_pham_catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "affine space".into(),
            family: BpFamily::AffineSpace,
            ambient: None,
            constraint: "none".into(),
            notes: "smooth; the link is a sphere".into(),
        },
        CatalogEntry {
            name: "two-power Brieskorn-Pham".into(),
            family: BpFamily::TwoPowers,
            ambient: Some("x1 x2 + x3^p + x4^q = 0".into()),
            constraint: "p, q > 1 coprime".into(),
            notes: "Sasaki-Einstein structures on these links are known to be quasi-regular".into(),
        },
        CatalogEntry {
            name: "one-power Brieskorn-Pham".into(),
            family: BpFamily::OnePower,
            ambient: Some("x1 x2 + x3 x4 + x5^p = 0".into()),
            constraint: "p > 1".into(),
            notes: "reference data".into(),
        },
        CatalogEntry {
            name: "quadric cone".into(),
            family: BpFamily::Quadric,
            ambient: Some("x1 x2 + x3 x4 + x5 x6 = 0".into()),
            constraint: "none".into(),
            notes: "reference data".into(),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xk_shapes() {
        let d = build_xk(&XkSpec::new(3)).unwrap();
        assert!(d.tail().rays().contains(&vec![41, 8]));
        assert_eq!(d.support().len(), 5);
        assert_eq!(d.support()[4].0.coordinate.as_deref(), Some("3"));
        assert!(build_xk(&XkSpec::new(0)).is_err());
        let custom = XkSpec { k: 2, points: Some(vec![q(1, 2), q(-7, 1)]) };
        assert_eq!(build_xk(&custom).unwrap().support()[3].0.coordinate.as_deref(), Some("-7"));
        assert!(build_xk(&XkSpec { k: 2, points: Some(vec![q(1, 2), q(1, 2)]) }).is_err());
        assert!(build_xk(&XkSpec { k: 1, points: Some(vec![q(0, 1)]) }).is_err());
        assert!(build_xk(&XkSpec { k: 2, points: Some(vec![q(1, 1)]) }).is_err());
    }

    #[test]
    fn brieskorn_pham() {
        let c = brieskorn_pham_catalog();
        assert_eq!(c.len(), 4);
        assert!(c[0].ambient.is_none());
        assert!(!c[1].accepts(&[2, 2]));
        assert!(c[1].accepts(&[2, 3]));
        assert!(!c[1].accepts(&[1, 3]));
        assert!(c[2].accepts(&[2]) && !c[2].accepts(&[1]));
        assert!(c[3].accepts(&[]));
    }
}
