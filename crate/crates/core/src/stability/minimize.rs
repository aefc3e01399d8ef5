use serde::Serialize;

use super::{FanoCone, ReebField};
use crate::convex::{directional_derivative, vol_along_line, Cone, LineInterval};
use crate::error::{Error, Result};
use crate::exact::matrix::integer_kernel;
use crate::exact::rational::dot;
use crate::exact::{isolate_real_roots, rat_vec, rational_to_primitive, RatVec, Rational, RationalFunction1D, Scalar, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regularity {
    #[serde(rename = "quasi-regular")]
    QuasiRegular,
    #[serde(rename = "irregular")]
    Irregular,
    #[serde(rename = "undecided-numeric")]
    UndecidedNumeric,
}

impl Regularity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regularity::QuasiRegular => "quasi-regular",
            Regularity::Irregular => "irregular",
            Regularity::UndecidedNumeric => "undecided-numeric",
        }
    }
}

/// The one-dimensional slice `{⟨u, ξ⟩ = 1}` as `base + s·dir`, with the
/// volume restricted to it.
#[derive(Clone, Debug)]
pub struct SliceLine {
    pub base: RatVec,
    pub dir: RatVec,
    pub lo: Rational,
    pub hi: Rational,
    pub volume: RationalFunction1D,
}

impl SliceLine {
    /// Numerator of `d/ds vol`, whose roots in `(lo, hi)` are critical points.
    pub fn derivative_numerator(&self) -> UniPoly {
        self.volume.derivative().numer().clone()
    }

    pub fn point(&self, s: &Rational) -> RatVec {
        self.base.iter().zip(&self.dir).map(|(b, d)| b + d * s).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReebMinimum {
    pub field: ReebField,
    pub regularity: Regularity,
    /// The last descent iterate, for multi-dimensional slices.
    pub numeric: Option<Vec<f64>>,
    #[serde(skip)]
    pub slice: Option<SliceLine>,
}

/// The slice line of a rank-2 cone: `p0 = u/⟨u,u⟩` and `dir` the primitive
/// vector `(u₂, −u₁)` up to scaling.
pub fn slice_line(f: &FanoCone) -> Result<SliceLine> {
    if f.rank() != 2 {
        return Err(Error::Precondition("slice line needs rank 2".into()));
    }
    let u = f.canonical_weight()?;
    let model = f.volume_model()?;
    let uu = dot(&u, &u);
    let base: RatVec = u.iter().map(|x| x / &uu).collect();
    let dir = rat_vec(&rational_to_primitive(&[u[1].clone(), -u[0].clone()]));
    let reeb = vol_along_line(f.reeb_cone(), &base, &dir)?.interval;
    let line = vol_along_line(&model.cone, &model.lift(&base), &model.lift(&dir))?;
    let (lo, hi) = match intersect(&reeb, &line.interval) {
        LineInterval { lo: Some(lo), hi: Some(hi) } => (lo, hi),
        _ => return Err(Error::Precondition("slice is unbounded".into())),
    };
    Ok(SliceLine { base, dir, lo, hi, volume: line.function })
}

fn intersect(a: &LineInterval, b: &LineInterval) -> LineInterval {
    let lo = match (&a.lo, &b.lo) {
        (Some(x), Some(y)) => Some(x.max(y).clone()),
        (x, y) => x.clone().or(y.clone()),
    };
    let hi = match (&a.hi, &b.hi) {
        (Some(x), Some(y)) => Some(x.min(y).clone()),
        (x, y) => x.clone().or(y.clone()),
    };
    LineInterval { lo, hi }
}

/// Minimizes the volume on `{⟨u, ξ⟩ = 1}` and classifies the minimizer.
pub fn reeb_minimize(f: &FanoCone) -> Result<ReebMinimum> {
    let u = f.canonical_weight()?;
    match f.rank() {
        1 => {
            let xi = vec![u[0].recip()];
            Ok(ReebMinimum { field: ReebField::rational(xi), regularity: Regularity::QuasiRegular, numeric: None, slice: None })
        }
        2 => minimize_on_line(f),
        _ => match f {
            FanoCone::Toric(c) => minimize_numeric(c, &u),
            FanoCone::Divisor(_) => unreachable!("polyhedral divisors have rank 2"),
        },
    }
}

fn minimize_on_line(f: &FanoCone) -> Result<ReebMinimum> {
    let slice = slice_line(f)?;
    let numer = slice.derivative_numerator();
    let roots = isolate_real_roots(&numer, &slice.lo, &slice.hi);
    if roots.len() != 1 {
        return Err(Error::Precondition(format!("expected one critical point on the slice, found {}", roots.len())));
    }
    let s = Scalar::from_algebraic(roots.into_iter().next().unwrap());
    let regularity = if s.is_rational() { Regularity::QuasiRegular } else { Regularity::Irregular };
    let field = ReebField::on_line(slice.base.clone(), slice.dir.clone(), s);
    Ok(ReebMinimum { field, regularity, numeric: None, slice: Some(slice) })
}

const GRADIENT_TOL: f64 = 1e-10;
const MAX_DENOMINATOR: u64 = 1_000_000;
const MAX_ITERATIONS: usize = 200;

struct NumericVolume {
    pieces: Vec<(f64, Vec<Vec<f64>>)>,
    dual: Vec<Vec<f64>>,
}

impl NumericVolume {
    fn new(c: &Cone) -> Result<Self> {
        let dual = c.dual()?;
        let to_f = |v: &[i64]| v.iter().map(|&x| x as f64).collect::<Vec<f64>>();
        let pieces = dual
            .triangulate()?
            .into_iter()
            .map(|p| (p.det_abs as f64, p.generators.iter().map(|g| to_f(g)).collect()))
            .collect();
        Ok(NumericVolume { pieces, dual: dual.rays().iter().map(|r| to_f(r)).collect() })
    }

    fn interior(&self, xi: &[f64]) -> bool {
        self.dual.iter().all(|w| fdot(w, xi) > 0.0)
    }

    /// Value, gradient and Hessian at `ξ`.
    fn eval(&self, xi: &[f64]) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
        let n = xi.len();
        let mut f = 0.0;
        let mut g = vec![0.0; n];
        let mut h = vec![vec![0.0; n]; n];
        for (det, gens) in &self.pieces {
            let ls: Vec<f64> = gens.iter().map(|u| fdot(u, xi)).collect();
            let v = det / ls.iter().product::<f64>();
            let mut s = vec![0.0; n];
            for (u, l) in gens.iter().zip(&ls) {
                for i in 0..n {
                    s[i] += u[i] / l;
                }
            }
            f += v;
            for i in 0..n {
                g[i] -= v * s[i];
                for j in 0..n {
                    let diag: f64 = gens.iter().zip(&ls).map(|(u, l)| u[i] * u[j] / (l * l)).sum();
                    h[i][j] += v * (s[i] * s[j] + diag);
                }
            }
        }
        (f, g, h)
    }
}

fn fdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k].abs() < 1e-300 {
            return None;
        }
        a.swap(p, k);
        b.swap(p, k);
        for i in k + 1..n {
            let m = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= m * a[k][j];
            }
            b[i] -= m * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// Damped Newton on the slice, then an exact check of the rounded point.
fn minimize_numeric(c: &Cone, u: &[Rational]) -> Result<ReebMinimum> {
    let n = c.rank();
    let nv = NumericVolume::new(c)?;
    let basis_int = integer_kernel(&[u.to_vec()], n);
    let basis: Vec<Vec<f64>> = basis_int.iter().map(|b| b.iter().map(|&x| x as f64).collect()).collect();

    // barycenter of the rays, normalized; ⟨u, ρ⟩ = 1 on every ray
    let m = Rational::from(c.rays().len() as i64);
    let start: RatVec = (0..n).map(|i| c.rays().iter().map(|r| Rational::from(r[i])).sum::<Rational>() / &m).collect();
    let mut xi: Vec<f64> = start.iter().map(Rational::to_f64).collect();

    let project = |xi: &[f64]| {
        let (f, g, h) = nv.eval(xi);
        let gp: Vec<f64> = basis.iter().map(|b| fdot(b, &g)).collect();
        let hp: Vec<Vec<f64>> = basis
            .iter()
            .map(|bi| basis.iter().map(|bj| (0..n).map(|a| (0..n).map(|b| bi[a] * h[a][b] * bj[b]).sum::<f64>()).sum()).collect())
            .collect();
        (f, gp, hp)
    };

    for _ in 0..MAX_ITERATIONS {
        let (f, g, h) = project(&xi);
        let gnorm = g.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if gnorm <= GRADIENT_TOL * f.max(1.0) {
            break;
        }
        let Some(step) = solve_dense(h, g.iter().map(|x| -x).collect()) else {
            break;
        };
        let slope = fdot(&g, &step);
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-20 {
            let cand: Vec<f64> =
                (0..n).map(|a| xi[a] + t * basis.iter().zip(&step).map(|(b, s)| b[a] * s).sum::<f64>()).collect();
            if nv.interior(&cand) && nv.eval(&cand).0 <= f + 1e-4 * t * slope {
                xi = cand;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }

    let approx = exact_candidate(&xi, u);
    if let Some(cand) = &approx {
        if c.contains_in_interior(cand) && is_exactly_critical(c, cand, &basis_int)? {
            return Ok(ReebMinimum {
                field: ReebField::rational(cand.clone()),
                regularity: Regularity::QuasiRegular,
                numeric: Some(xi),
                slice: None,
            });
        }
    }
    let field = ReebField::rational(approx.filter(|a| c.contains_in_interior(a)).unwrap_or(start));
    Ok(ReebMinimum { field, regularity: Regularity::UndecidedNumeric, numeric: Some(xi), slice: None })
}

fn exact_candidate(xi: &[f64], u: &[Rational]) -> Option<RatVec> {
    let cand: RatVec = xi.iter().map(|&x| Rational::approximate_f64(x, MAX_DENOMINATOR)).collect::<Option<_>>()?;
    let p = dot(u, &cand);
    if !p.is_positive() {
        return None;
    }
    Some(cand.iter().map(|x| x / &p).collect())
}

fn is_exactly_critical(c: &Cone, xi: &[Rational], basis: &[Vec<i64>]) -> Result<bool> {
    for b in basis {
        if !directional_derivative(c, xi, &rat_vec(b))?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::exact::poly::sturm_count;
    use crate::pdivisor::tests::xk;

    #[test]
    fn x3_is_quasi_regular() {
        let m = reeb_minimize(&FanoCone::Divisor(xk(3))).unwrap();
        assert_eq!(m.regularity, Regularity::QuasiRegular);
        assert_eq!(m.field.to_rational().unwrap(), vec![q(34, 15), q(1, 1)]);
    }

    #[test]
    fn x1_numerator_and_root() {
        let m = reeb_minimize(&FanoCone::Divisor(xk(1))).unwrap();
        assert_eq!(m.regularity, Regularity::Irregular);
        let slice = m.slice.unwrap();
        assert_eq!((slice.lo.clone(), slice.hi.clone()), (q(-1, 1), q(11, 8)));
        let numer = slice.derivative_numerator().to_primitive_integer();
        let expected = UniPoly::from_ints(&[-178, 423, 240]);
        assert_eq!(numer.monic(), expected.monic());
        let seq = numer.sturm_sequence();
        assert_eq!(sturm_count(&seq, &slice.lo, &slice.hi), 1);
    }

    #[test]
    fn simplicial_toric_minimizers() {
        let c = Cone::new(3, &[vec![1, 0, 0], vec![1, 2, 0], vec![1, 1, 3]]).unwrap();
        let f = FanoCone::Toric(c);
        let m = reeb_minimize(&f).unwrap();
        assert_eq!(m.regularity, Regularity::QuasiRegular);
        let xi = m.field.to_rational().unwrap();
        let u = f.canonical_weight().unwrap();
        assert_eq!(dot(&u, &xi), q(1, 1));
        let sum = rat_vec(&[3, 3, 3]);
        assert_eq!(xi.iter().map(|x| x * dot(&u, &sum)).collect::<Vec<_>>(), sum);
    }

    #[test]
    fn rank_two_toric() {
        let c = Cone::new(2, &[vec![1, 0], vec![1, 3]]).unwrap();
        let m = reeb_minimize(&FanoCone::Toric(c)).unwrap();
        assert_eq!(m.regularity, Regularity::QuasiRegular);
        assert_eq!(m.field.to_rational().unwrap(), vec![q(1, 1), q(3, 2)]);
    }

    #[test]
    fn square_cone_minimizer() {
        let c = Cone::new(3, &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]).unwrap();
        let m = reeb_minimize(&FanoCone::Toric(c)).unwrap();
        assert_eq!(m.regularity, Regularity::QuasiRegular);
        assert_eq!(m.field.to_rational().unwrap(), rat_vec(&[0, 0, 1]));
    }
}
