use super::{Cone, SimplicialPiece};
use crate::error::{Error, Result};
use crate::exact::rational::dot_int;
use crate::exact::{Rational, RationalFunction1D, Scalar, UniPoly};

/// An open interval of the real line; `None` marks an infinite end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineInterval {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl LineInterval {
    pub fn contains(&self, s: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|lo| s > lo) && self.hi.as_ref().is_none_or(|hi| s < hi)
    }
}

/// The volume restricted to `base + s·dir`, valid on `interval`.
#[derive(Clone, Debug)]
pub struct VolumeLine {
    pub function: RationalFunction1D,
    pub interval: LineInterval,
}

fn dual_pieces(c: &Cone) -> Result<(Cone, Vec<SimplicialPiece>)> {
    let d = c.dual()?;
    let pieces = d.triangulate()?;
    Ok((d, pieces))
}

fn check_interior(dual: &Cone, xi: &[Rational]) -> Result<()> {
    if dual.rays().iter().all(|u| dot_int(u, xi).is_positive()) {
        Ok(())
    } else {
        Err(Error::NotInterior)
    }
}

/// Normalized volume of `{u ∈ C^∨ : ⟨u, ξ⟩ ≤ 1}`.
pub fn truncated_dual_volume(c: &Cone, xi: &[Rational]) -> Result<Rational> {
    if xi.len() != c.rank() {
        return Err(Error::DimensionMismatch { expected: c.rank(), found: xi.len() });
    }
    let (dual, pieces) = dual_pieces(c)?;
    check_interior(&dual, xi)?;
    Ok(pieces_volume(&pieces, xi))
}

pub(crate) fn pieces_volume(pieces: &[SimplicialPiece], xi: &[Rational]) -> Rational {
    pieces
        .iter()
        .map(|p| {
            let denom: Rational = p.generators.iter().map(|u| dot_int(u, xi)).product();
            Rational::from(p.det_abs) / denom
        })
        .sum()
}

fn check_dims(c: &Cone, vs: &[&[Rational]]) -> Result<()> {
    for v in vs {
        if v.len() != c.rank() {
            return Err(Error::DimensionMismatch { expected: c.rank(), found: v.len() });
        }
    }
    Ok(())
}

/// Parameters `s` with `base + s·dir` in the interior of `C`, given the dual rays.
fn interior_interval(dual: &Cone, base: &[Rational], dir: &[Rational]) -> Result<LineInterval> {
    let mut interval = LineInterval { lo: None, hi: None };
    for u in dual.rays() {
        let a = dot_int(u, base);
        let b = dot_int(u, dir);
        if b.is_zero() {
            if !a.is_positive() {
                return Err(Error::NotInterior);
            }
            continue;
        }
        let t = -a / &b;
        if b.is_positive() {
            if interval.lo.as_ref().is_none_or(|lo| t > *lo) {
                interval.lo = Some(t);
            }
        } else if interval.hi.as_ref().is_none_or(|hi| t < *hi) {
            interval.hi = Some(t);
        }
    }
    if let (Some(lo), Some(hi)) = (&interval.lo, &interval.hi) {
        if lo >= hi {
            return Err(Error::NotInterior);
        }
    }
    Ok(interval)
}

fn linear_forms(u: &[i64], base: &[Rational], dir: &[Rational]) -> UniPoly {
    UniPoly::linear(dot_int(u, base), dot_int(u, dir))
}

/// `s ↦ vol(base + s·dir)` as an exact rational function with its interval of validity.
///
/// The line must pass through the interior of `C`; `base` itself need not.
pub fn vol_along_line(c: &Cone, base: &[Rational], dir: &[Rational]) -> Result<VolumeLine> {
    check_dims(c, &[base, dir])?;
    let (dual, pieces) = dual_pieces(c)?;
    let interval = interior_interval(&dual, base, dir)?;
    let mut function = RationalFunction1D::zero();
    for p in &pieces {
        let denom = p.generators.iter().fold(UniPoly::one(), |acc, u| &acc * &linear_forms(u, base, dir));
        let term = RationalFunction1D::new(UniPoly::constant(Rational::from(p.det_abs)), denom)?;
        function = function.add(&term);
    }
    Ok(VolumeLine { function, interval })
}

/// `s ↦ D_v vol(base + s·dir)`, exact, on the same interval as [`vol_along_line`].
pub fn derivative_along_line(c: &Cone, base: &[Rational], dir: &[Rational], v: &[Rational]) -> Result<VolumeLine> {
    check_dims(c, &[base, dir, v])?;
    let (dual, pieces) = dual_pieces(c)?;
    let interval = interior_interval(&dual, base, dir)?;
    let mut function = RationalFunction1D::zero();
    for p in &pieces {
        // D_v (det / Π l_i) = -det · Σ_i ⟨u_i, v⟩ / (l_i · Π_j l_j)
        let forms: Vec<UniPoly> = p.generators.iter().map(|u| linear_forms(u, base, dir)).collect();
        let prod = forms.iter().fold(UniPoly::one(), |acc, l| &acc * l);
        let mut numer = UniPoly::zero();
        for (i, u) in p.generators.iter().enumerate() {
            let cu = dot_int(u, v);
            if cu.is_zero() {
                continue;
            }
            let others = forms
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(UniPoly::one(), |acc, (_, l)| &acc * l);
            numer = &numer + &others.scale(&cu);
        }
        let numer = numer.scale(&-Rational::from(p.det_abs));
        function = function.add(&RationalFunction1D::new(numer, &prod * &prod)?);
    }
    Ok(VolumeLine { function, interval })
}

/// Volume at `base + s·dir` for an exact scalar `s` in the line's interval.
pub fn volume_at(c: &Cone, base: &[Rational], dir: &[Rational], s: &Scalar) -> Result<Scalar> {
    let line = vol_along_line(c, base, dir)?;
    let inside = match s {
        Scalar::Rational(r) => line.interval.contains(r),
        Scalar::Algebraic(a) => {
            line.interval.lo.as_ref().is_none_or(|lo| a.cmp_rational(lo).is_gt())
                && line.interval.hi.as_ref().is_none_or(|hi| a.cmp_rational(hi).is_lt())
        }
    };
    if !inside {
        return Err(Error::NotInterior);
    }
    s.apply(&line.function)
}

/// `d/ds vol(ξ + s·v)` at `s = 0`.
pub fn directional_derivative(c: &Cone, xi: &[Rational], v: &[Rational]) -> Result<Rational> {
    check_dims(c, &[xi, v])?;
    let (dual, pieces) = dual_pieces(c)?;
    check_interior(&dual, xi)?;
    let mut total = Rational::zero();
    for p in &pieces {
        let ls: Vec<Rational> = p.generators.iter().map(|u| dot_int(u, xi)).collect();
        let prod: Rational = ls.iter().cloned().product();
        let s: Rational = p.generators.iter().zip(&ls).map(|(u, l)| dot_int(u, v) / l).sum();
        total -= Rational::from(p.det_abs) / prod * s;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, rat_vec};

    fn sigma0_k1() -> Cone {
        Cone::new(3, &[vec![2, 1, 5], vec![1, 1, -3], vec![-2, 1, -3], vec![-1, 1, 0]]).unwrap()
    }

    #[test]
    fn orthant_volume() {
        assert_eq!(truncated_dual_volume(&Cone::orthant(2), &rat_vec(&[1, 1])).unwrap(), q(1, 1));
        assert_eq!(truncated_dual_volume(&Cone::orthant(3), &rat_vec(&[1, 2, 3])).unwrap(), q(1, 6));
    }

    #[test]
    fn sigma0_volume() {
        let c = sigma0_k1();
        assert_eq!(truncated_dual_volume(&c, &rat_vec(&[0, 1, 0])).unwrap(), q(196, 165));
        assert_eq!(truncated_dual_volume(&c, &rat_vec(&[0, 2, 0])).unwrap(), q(196, 165 * 8));
        assert_eq!(truncated_dual_volume(&c, &rat_vec(&[-1, 1, 0])), Err(Error::NotInterior));
    }

    #[test]
    fn line_restriction() {
        let c = sigma0_k1();
        let line = vol_along_line(&c, &rat_vec(&[0, 1, 0]), &rat_vec(&[1, 0, 0])).unwrap();
        assert_eq!(line.interval, LineInterval { lo: Some(q(-1, 1)), hi: Some(q(11, 8)) });
        // (4/15)(30x+49)/((x+1)^2(11-8x))
        let expected = RationalFunction1D::new(
            UniPoly::from_ints(&[49, 30]).scale(&q(4, 15)),
            &UniPoly::from_ints(&[1, 1]).pow(2) * &UniPoly::from_ints(&[11, -8]),
        )
        .unwrap();
        assert_eq!(line.function, expected);
        let d = directional_derivative(&c, &rat_vec(&[0, 1, 0]), &rat_vec(&[1, 0, 0])).unwrap();
        assert_eq!(d, q(-1424, 1815));
    }

    #[test]
    fn homogeneity_and_euler() {
        let c = sigma0_k1();
        let xi = vec![q(1, 3), q(1, 1), q(1, 7)];
        let v = truncated_dual_volume(&c, &xi).unwrap();
        let line = vol_along_line(&c, &xi, &xi).unwrap();
        assert_eq!(line.function.eval(&q(1, 1)).unwrap(), &v / Rational::from(8));
        assert_eq!(directional_derivative(&c, &xi, &xi).unwrap(), -Rational::from(3) * &v);
        assert_eq!(
            directional_derivative(&Cone::orthant(2), &rat_vec(&[1, 1]), &rat_vec(&[1, -1])).unwrap(),
            q(0, 1)
        );
    }

    #[test]
    fn derivative_line_matches_pointwise() {
        let c = sigma0_k1();
        let base = rat_vec(&[0, 1, 0]);
        let dir = rat_vec(&[1, 0, 0]);
        let v = vec![q(1, 2), q(-1, 3), q(1, 1)];
        let line = derivative_along_line(&c, &base, &dir, &v).unwrap();
        for s in [q(0, 1), q(1, 3), q(-1, 2)] {
            let xi: Vec<Rational> = base.iter().zip(&dir).map(|(b, d)| b + d * &s).collect();
            assert_eq!(line.function.eval(&s).unwrap(), directional_derivative(&c, &xi, &v).unwrap());
        }
        let along = derivative_along_line(&c, &base, &dir, &dir).unwrap();
        let vol = vol_along_line(&c, &base, &dir).unwrap();
        assert_eq!(along.function, vol.function.derivative());
    }

    #[test]
    fn lines_missing_the_interior() {
        let c = Cone::orthant(2);
        assert_eq!(vol_along_line(&c, &rat_vec(&[-1, 1]), &rat_vec(&[0, 1])).map(|_| ()), Err(Error::NotInterior));
        let line = vol_along_line(&c, &rat_vec(&[-1, 1]), &rat_vec(&[1, 0])).unwrap();
        assert_eq!(line.interval, LineInterval { lo: Some(q(1, 1)), hi: None });
    }
}
