//! Brute-force volume estimates from counting weighted lattice points.

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::FanoCone;
use crate::convex::homogenize_vertex;
use crate::error::{Error, Result};
use crate::exact::rational::{dot_int, lcm_denominators};
use crate::exact::Rational;

/// Lattice points enumerated before giving up, unless `KREEB_MAX_T` says otherwise.
pub const DEFAULT_MAX_POINTS: u64 = 1_000_000;

pub fn oracle_cap() -> u64 {
    std::env::var("KREEB_MAX_T").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_POINTS)
}

/// `n!·T^(−n)·Σ dim R_u` over weights `u` with `⟨u, ξ⟩ ≤ T`.
pub fn vol_counting_oracle(f: &FanoCone, xi: &[Rational], t: &Rational) -> Result<Rational> {
    vol_counting_oracle_with_cap(f, xi, t, oracle_cap())
}

struct Counter {
    /// Inequalities `⟨a, u⟩ ≥ b`.
    ineqs: Vec<(Vec<i64>, i128)>,
    /// Per support point: `(μ·v, μ)` for each vertex.
    support: Option<Vec<Vec<(Vec<i64>, i64)>>>,
    cap: u64,
    seen: u64,
    total: i128,
}

impl Counter {
    fn new(f: &FanoCone, xi: &[Rational], t: &Rational, cap: u64) -> Result<Self> {
        let cone = f.reeb_cone();
        if xi.len() != cone.rank() {
            return Err(Error::DimensionMismatch { expected: cone.rank(), found: xi.len() });
        }
        if !cone.contains_in_interior(xi) {
            return Err(Error::NotInterior);
        }
        if !t.is_positive() {
            return Err(Error::Precondition("T must be positive".into()));
        }
        // ⟨u, ξ⟩ ≤ T  ⇔  ⟨u, −L·ξ⟩ ≥ −⌊L·T⌋ for u integral
        let l = Rational::from_integer(lcm_denominators(xi));
        let scaled: Vec<i64> = xi.iter().map(|x| (x * &l).numer().to_i64().expect("ξ too large")).collect();
        let bound = (t * &l).floor().to_i128().expect("T too large");
        let mut ineqs: Vec<(Vec<i64>, i128)> = cone.rays().iter().map(|r| (r.clone(), 0)).collect();
        ineqs.push((scaled.iter().map(|x| -x).collect(), -bound));
        let support = match f {
            FanoCone::Toric(_) => None,
            FanoCone::Divisor(d) => Some(
                d.support()
                    .iter()
                    .map(|(_, p)| {
                        p.vertices()
                            .iter()
                            .map(|v| {
                                let mut h = homogenize_vertex(v);
                                let mu = h.pop().unwrap();
                                (h, mu)
                            })
                            .collect()
                    })
                    .collect(),
            ),
        };
        Ok(Counter { ineqs, support, cap, seen: 0, total: 0 })
    }

    fn dimension(&self) -> usize {
        self.ineqs[0].0.len() + usize::from(self.support.is_some())
    }

    fn admits(&self, u: &[i64]) -> bool {
        self.ineqs.iter().all(|(a, b)| dot_i128(a, u) >= *b)
    }

    /// `dim R_u`: 1 for toric cones, `max(0, deg⌊D(u)⌋ + 1)` otherwise.
    fn weight(&self, u: &[i64]) -> i128 {
        match &self.support {
            None => 1,
            Some(s) => {
                let deg: i128 = s
                    .iter()
                    .map(|verts| verts.iter().map(|(v, mu)| Integer::div_floor(&dot_i128(v, u), &(*mu as i128))).min().unwrap())
                    .sum();
                (deg + 1).max(0)
            }
        }
    }

    fn tick(&mut self, k: u64) -> Result<()> {
        self.seen += k;
        if self.seen > self.cap {
            return Err(Error::OracleBudget { cap: self.cap });
        }
        Ok(())
    }

    fn estimate(&self, t: &Rational) -> Rational {
        let n = self.dimension();
        let fact: i64 = (1..=n as i64).product();
        Rational::from(fact) * Rational::from_integer(self.total) / t.pow(n as i32)
    }
}

fn dot_i128(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Integer range of the coordinates of the truncated dual cone, from its
/// vertices `0` and `T·w/⟨w, ξ⟩` for the dual rays `w`.
fn bounding_box(f: &FanoCone, xi: &[Rational], t: &Rational) -> Result<Vec<(i64, i64)>> {
    let dual = f.reeb_cone().dual()?;
    let n = xi.len();
    let mut bounds = vec![(0i64, 0i64); n];
    for w in dual.rays() {
        let s = t / dot_int(w, xi);
        for (i, b) in bounds.iter_mut().enumerate() {
            let x = Rational::from(w[i]) * &s;
            let lo = x.floor().to_i64().expect("box too large");
            let hi = (-(-x).floor()).to_i64().expect("box too large");
            b.0 = b.0.min(lo);
            b.1 = b.1.max(hi);
        }
    }
    Ok(bounds)
}

/// Counting estimate with an explicit enumeration budget.
pub fn vol_counting_oracle_with_cap(f: &FanoCone, xi: &[Rational], t: &Rational, cap: u64) -> Result<Rational> {
    let mut counter = Counter::new(f, xi, t, cap)?;
    let bounds = bounding_box(f, xi, t)?;
    let mut prefix = Vec::with_capacity(bounds.len());
    enumerate(&mut counter, &bounds, &mut prefix)?;
    Ok(counter.estimate(t))
}

/// Walks the box over all but the last coordinate, which is solved from the
/// inequalities directly.
fn enumerate(c: &mut Counter, bounds: &[(i64, i64)], prefix: &mut Vec<i64>) -> Result<()> {
    let n = bounds.len();
    if prefix.len() + 1 < n {
        let (lo, hi) = bounds[prefix.len()];
        for x in lo..=hi {
            prefix.push(x);
            enumerate(c, bounds, prefix)?;
            prefix.pop();
        }
        return Ok(());
    }
    let (mut lo, mut hi) = (i128::MIN, i128::MAX);
    for (a, b) in &c.ineqs {
        let partial: i128 = a[..n - 1].iter().zip(prefix.iter()).map(|(&x, &y)| x as i128 * y as i128).sum();
        let coef = a[n - 1] as i128;
        let rhs = b - partial;
        match coef.signum() {
            1 => lo = lo.max(Integer::div_ceil(&rhs, &coef)),
            -1 => hi = hi.min(Integer::div_floor(&rhs, &coef)),
            _ if rhs > 0 => return Ok(()),
            _ => {}
        }
    }
    assert!(lo > i128::MIN && hi < i128::MAX, "truncated dual cone must be bounded");
    if lo > hi {
        return Ok(());
    }
    c.tick((hi - lo + 1) as u64)?;
    if c.support.is_none() {
        c.total += hi - lo + 1;
        return Ok(());
    }
    let mut u: Vec<i64> = prefix.clone();
    u.push(0);
    for x in lo..=hi {
        u[n - 1] = x as i64;
        c.total += c.weight(&u);
    }
    Ok(())
}

/// The same estimate, enumerating every lattice point of an explicit box and
/// discarding those outside the truncated dual cone.
pub fn vol_counting_oracle_box(f: &FanoCone, xi: &[Rational], t: &Rational, bounds: &[(i64, i64)]) -> Result<Rational> {
    let mut counter = Counter::new(f, xi, t, oracle_cap())?;
    if bounds.len() != xi.len() {
        return Err(Error::DimensionMismatch { expected: xi.len(), found: bounds.len() });
    }
    let mut u: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    if bounds.iter().any(|b| b.0 > b.1) {
        return Ok(counter.estimate(t));
    }
    loop {
        counter.tick(1)?;
        if counter.admits(&u) {
            counter.total += counter.weight(&u);
        }
        let mut i = 0;
        loop {
            if i == u.len() {
                return Ok(counter.estimate(t));
            }
            if u[i] < bounds[i].1 {
                u[i] += 1;
                break;
            }
            u[i] = bounds[i].0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::Cone;
    use crate::exact::{q, rat_vec};
    use crate::pdivisor::tests::xk;

    #[test]
    fn orthant_count() {
        let f = FanoCone::Toric(Cone::orthant(2));
        let est = vol_counting_oracle_with_cap(&f, &rat_vec(&[1, 1]), &q(200, 1), DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(est, q(2 * 20301, 40000));
        let boxed = vol_counting_oracle_box(&f, &rat_vec(&[1, 1]), &q(200, 1), &[(-20, 230), (-5, 201)]).unwrap();
        assert_eq!(boxed, est);
    }

    #[test]
    fn budget_is_enforced() {
        let f = FanoCone::Toric(Cone::orthant(2));
        let r = vol_counting_oracle_with_cap(&f, &rat_vec(&[1, 1]), &q(200, 1), 1000);
        assert_eq!(r, Err(Error::OracleBudget { cap: 1000 }));
    }

    #[test]
    fn x1_box_agrees() {
        let f = FanoCone::Divisor(xk(1));
        let xi = rat_vec(&[0, 1]);
        let t = q(40, 1);
        let a = vol_counting_oracle_with_cap(&f, &xi, &t, DEFAULT_MAX_POINTS).unwrap();
        let b = vol_counting_oracle_box(&f, &xi, &t, &[(-60, 60), (-10, 50)]).unwrap();
        assert_eq!(a, b);
    }
}
