//! Real algebraic numbers by isolating intervals.
//!
//! Roots are isolated with Descartes' rule of signs on Möbius-transformed
//! subintervals and the count is cross-checked against a Sturm sequence.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::poly::{sturm_count, RationalFunction1D, UniPoly};
use super::rational::Rational;
use crate::error::{Error, Result};

/// A real root of a squarefree integer polynomial, pinned by a closed interval
/// containing no other root. A degenerate interval `lo == hi` is a rational value.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    poly: UniPoly,
    lo: Rational,
    hi: Rational,
}

impl AlgebraicNumber {
    pub fn from_rational(r: Rational) -> Self {
        let poly = UniPoly::linear(Rational::from(-r.numer().clone()), Rational::from(r.denom().clone()));
        AlgebraicNumber { poly, lo: r.clone(), hi: r }
    }

    /// Builds from a polynomial and an interval; the caller guarantees isolation.
    pub(crate) fn from_parts(poly: &UniPoly, lo: Rational, hi: Rational) -> Self {
        let poly = poly.squarefree_part().to_primitive_integer();
        let mut a = AlgebraicNumber { poly, lo, hi };
        a.normalize_endpoints();
        a
    }

    fn normalize_endpoints(&mut self) {
        if self.lo == self.hi {
            return;
        }
        if self.poly.eval(&self.lo).is_zero() {
            self.hi = self.lo.clone();
        } else if self.poly.eval(&self.hi).is_zero() {
            self.lo = self.hi.clone();
        }
    }

    pub fn defining_poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    /// The exact value when the interval has collapsed.
    pub fn as_exact(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    /// Decides rationality with the rational-root test.
    pub fn to_rational(&self) -> Option<Rational> {
        if let Some(r) = self.as_exact() {
            return Some(r.clone());
        }
        rational_roots(&self.poly).into_iter().find(|r| *r >= self.lo && *r <= self.hi)
    }

    pub fn is_rational(&self) -> bool {
        self.to_rational().is_some()
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Halves the isolating interval.
    pub fn bisect(&mut self) {
        if self.lo == self.hi {
            return;
        }
        let m = (&self.lo + &self.hi) / Rational::from(2);
        let sm = self.poly.sign_at(&m);
        if sm == 0 {
            self.lo = m.clone();
            self.hi = m;
        } else if sm == self.poly.sign_at(&self.lo) {
            self.lo = m;
        } else {
            self.hi = m;
        }
    }

    pub fn refine_to(&mut self, width: &Rational) {
        while self.width() > *width {
            self.bisect();
        }
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from(2)
    }

    pub fn signum(&self) -> i32 {
        self.cmp_rational(&Rational::zero()) as i32
    }

    /// Exact comparison against a rational number.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        let mut a = self.clone();
        loop {
            if a.lo == a.hi {
                return a.lo.cmp(r);
            }
            if *r < a.lo {
                return Ordering::Greater;
            }
            if *r > a.hi {
                return Ordering::Less;
            }
            if a.poly.eval(r).is_zero() {
                return Ordering::Equal;
            }
            a.bisect();
        }
    }

    /// Decimal approximation with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        if let Some(r) = self.as_exact() {
            return r.to_decimal(sig);
        }
        let mut a = self.clone();
        let digits = i32::try_from(sig).unwrap_or(30) + 4;
        loop {
            let scale = a.lo.abs().max(a.hi.abs());
            if a.lo == a.hi || (!scale.is_zero() && a.width() * Rational::from(10).pow(digits) < scale) {
                break;
            }
            a.bisect();
        }
        a.midpoint().to_decimal(sig)
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_exact() {
            return r.to_f64();
        }
        let mut a = self.clone();
        a.refine_to(&Rational::new(1, 1i64 << 60).max(a.midpoint().abs() * Rational::new(1, 1i64 << 55)));
        a.midpoint().to_f64()
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_exact() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "root of {} in [{}, {}] ~ {}", self.poly, self.lo, self.hi, self.to_decimal(12)),
        }
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<String> = self.poly.primitive_integer().iter().map(|c| c.to_string()).collect();
        let ints: Vec<serde_json::Value> = coeffs
            .iter()
            .map(|c| match c.parse::<i64>() {
                Ok(i) => serde_json::Value::from(i),
                Err(_) => serde_json::Value::from(c.clone()),
            })
            .collect();
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("poly", &ints)?;
        m.serialize_entry("lo", &self.lo)?;
        m.serialize_entry("hi", &self.hi)?;
        m.serialize_entry("approx", &self.to_decimal(12))?;
        m.end()
    }
}

/// An exact real scalar: rational, or algebraic when irrationality is possible.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rational(Rational),
    Algebraic(AlgebraicNumber),
}

impl Scalar {
    /// Collapses algebraic values that turn out to be rational.
    pub fn from_algebraic(a: AlgebraicNumber) -> Self {
        match a.to_rational() {
            Some(r) => Scalar::Rational(r),
            None => Scalar::Algebraic(a),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Algebraic(_) => None,
        }
    }

    pub fn to_algebraic(&self) -> AlgebraicNumber {
        match self {
            Scalar::Rational(r) => AlgebraicNumber::from_rational(r.clone()),
            Scalar::Algebraic(a) => a.clone(),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Rational(r) => r.signum(),
            Scalar::Algebraic(a) => a.signum(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64(),
            Scalar::Algebraic(a) => a.to_f64(),
        }
    }

    pub fn to_decimal(&self, sig: usize) -> String {
        match self {
            Scalar::Rational(r) => r.to_decimal(sig),
            Scalar::Algebraic(a) => a.to_decimal(sig),
        }
    }

    /// Evaluates a rational function at this scalar.
    pub fn apply(&self, f: &RationalFunction1D) -> Result<Scalar> {
        match self {
            Scalar::Rational(r) => f.eval(r).map(Scalar::Rational),
            Scalar::Algebraic(a) => eval_at_algebraic(f, a).map(Scalar::from_algebraic),
        }
    }

    pub fn sign_of(&self, f: &RationalFunction1D) -> Result<i32> {
        match self {
            Scalar::Rational(r) => f.eval(r).map(|v| v.signum()),
            Scalar::Algebraic(a) => sign_at(f, a),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Algebraic(a) => write!(f, "{a}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(r) => r.serialize(s),
            Scalar::Algebraic(a) => a.serialize(s),
        }
    }
}

/// Sign variations of `(1+x)^n p((l + r x)/(1+x))`, an upper bound for the
/// number of roots in the open interval `(l, r)` with equal parity.
fn descartes_bound(p: &UniPoly, l: &Rational, r: &Rational) -> usize {
    let n = p.degree().unwrap_or(0);
    let num = UniPoly::linear(l.clone(), r.clone());
    let den = UniPoly::linear(Rational::from(1), Rational::from(1));
    let mut acc = UniPoly::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = &(&num.pow(i as u32) * &den.pow((n - i) as u32)) * &UniPoly::constant(c.clone());
        acc = &acc + &term;
    }
    acc.sign_variations()
}

fn vca(p: &UniPoly, l: Rational, r: Rational, out: &mut Vec<(Rational, Rational)>) {
    let v = descartes_bound(p, &l, &r);
    if v == 0 {
        return;
    }
    if v == 1 && !p.eval(&l).is_zero() && !p.eval(&r).is_zero() {
        out.push((l, r));
        return;
    }
    let m = (&l + &r) / Rational::from(2);
    if p.eval(&m).is_zero() {
        out.push((m.clone(), m.clone()));
    }
    vca(p, l, m.clone(), out);
    vca(p, m, r, out);
}

/// All distinct real roots of `p` in the open interval `(a, b)`, in increasing order.
pub fn isolate_real_roots(p: &UniPoly, a: &Rational, b: &Rational) -> Vec<AlgebraicNumber> {
    assert!(!p.is_zero(), "root isolation of the zero polynomial");
    if p.is_constant() || a >= b {
        return Vec::new();
    }
    let sf = p.squarefree_part();
    let mut intervals = Vec::new();
    vca(&sf, a.clone(), b.clone(), &mut intervals);
    intervals.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));

    let at_b = usize::from(sf.eval(b).is_zero());
    let sturm = sturm_count(&sf.sturm_sequence(), a, b) - at_b;
    assert_eq!(sturm, intervals.len(), "Descartes and Sturm root counts disagree");

    let integer = sf.to_primitive_integer();
    intervals
        .into_iter()
        .map(|(lo, hi)| {
            let mut a = AlgebraicNumber { poly: integer.clone(), lo, hi };
            a.normalize_endpoints();
            a
        })
        .collect()
}

/// Cauchy bound: every root has absolute value below this.
fn root_bound(p: &UniPoly) -> Rational {
    let lead = p.leading().abs();
    let m = p.coeffs()[..p.coeffs().len() - 1].iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero);
    Rational::from(1) + m / lead
}

/// All real roots of `p`.
pub fn real_roots(p: &UniPoly) -> Vec<AlgebraicNumber> {
    let b = root_bound(p);
    isolate_real_roots(p, &-&b, &b)
}

/// Every rational root of `p`. A root `n/d` in lowest terms has `d` dividing the
/// leading coefficient `c` of the primitive integer form, so `c·root` is an integer.
pub fn rational_roots(p: &UniPoly) -> Vec<Rational> {
    assert!(!p.is_zero(), "rational roots of the zero polynomial");
    if p.is_constant() {
        return Vec::new();
    }
    let sf = p.squarefree_part().to_primitive_integer();
    let lead = sf.leading().abs();
    let mut out = Vec::new();
    for mut root in real_roots(&sf) {
        if let Some(r) = root.as_exact() {
            out.push(r.clone());
            continue;
        }
        root.refine_to(&(Rational::from(1) / (&lead * Rational::from(2))));
        let lo = (&root.lo * &lead).floor();
        let hi = (&root.hi * &lead).floor() + 1;
        let mut n = lo;
        while n <= hi {
            let cand = Rational::from(n.clone()) / &lead;
            if cand >= root.lo && cand <= root.hi && sf.eval(&cand).is_zero() {
                out.push(cand);
                break;
            }
            n += 1;
        }
    }
    out.sort();
    out
}

/// True when the squarefree `g` vanishes at the root isolated by `x`.
fn vanishes_at(g: &UniPoly, x: &AlgebraicNumber) -> bool {
    if g.is_constant() {
        return false;
    }
    let shared = g.gcd(&x.poly);
    if shared.is_constant() {
        return false;
    }
    // shared divides the defining polynomial, so its only possible root in
    // [lo, hi] is x itself.
    let (sl, sh) = (shared.sign_at(&x.lo), shared.sign_at(&x.hi));
    sl == 0 || sh == 0 || sl != sh
}

/// Enclosure of `p` over `[m - w, m + w]` from the Taylor expansion at `m`.
fn enclose(p: &UniPoly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let m = (lo + hi) / Rational::from(2);
    let w = (hi - lo) / Rational::from(2);
    let shifted = p.compose_linear(&m, &Rational::from(1));
    let c0 = shifted.coeff(0);
    let mut bound = Rational::zero();
    let mut wk = Rational::from(1);
    for c in shifted.coeffs().iter().skip(1) {
        wk = &wk * &w;
        bound += c.abs() * &wk;
    }
    (&c0 - &bound, &c0 + &bound)
}

fn sign_of_enclosure(e: &(Rational, Rational)) -> Option<i32> {
    if e.0.is_positive() {
        Some(1)
    } else if e.1.is_negative() {
        Some(-1)
    } else {
        None
    }
}

/// Exact sign of `f` at the algebraic number `x`.
pub fn sign_at(f: &RationalFunction1D, x: &AlgebraicNumber) -> Result<i32> {
    if let Some(r) = x.as_exact() {
        return f.eval(r).map(|v| v.signum());
    }
    if vanishes_at(f.denom(), x) {
        return Err(Error::Pole);
    }
    if f.numer().is_zero() || vanishes_at(f.numer(), x) {
        return Ok(0);
    }
    let mut a = x.clone();
    loop {
        if let Some(r) = a.as_exact() {
            return f.eval(r).map(|v| v.signum());
        }
        let n = sign_of_enclosure(&enclose(f.numer(), &a.lo, &a.hi));
        let d = sign_of_enclosure(&enclose(f.denom(), &a.lo, &a.hi));
        if let (Some(n), Some(d)) = (n, d) {
            return Ok(n * d);
        }
        a.bisect();
    }
}

/// Sylvester determinant of `a` and `b` with `b` given a formal degree.
fn sylvester_resultant(a: &UniPoly, b: &[Rational]) -> Rational {
    let m = a.degree().unwrap();
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return Rational::from(1);
    }
    let mut rows = vec![vec![Rational::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.coeffs().iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    rational_det(rows)
}

fn rational_det(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::from(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det = &det * &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

fn lagrange_interpolate(xs: &[Rational], ys: &[Rational]) -> UniPoly {
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = UniPoly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let lin = UniPoly::linear(-xj, Rational::from(1));
                basis = (&basis * &lin).scale(&(xi - xj).recip());
            }
        }
        acc = &acc + &basis;
    }
    acc
}

/// `f(x)` for an algebraic `x`, as an algebraic number. The defining polynomial
/// comes from the resultant `Res_t(p(t), y·D(t) − N(t))`, interpolated in `y`.
pub fn eval_at_algebraic(f: &RationalFunction1D, x: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if let Some(r) = x.as_exact() {
        return f.eval(r).map(AlgebraicNumber::from_rational);
    }
    if vanishes_at(f.denom(), x) {
        return Err(Error::Pole);
    }
    let p = &x.poly;
    let dp = p.degree().unwrap();
    let formal = f.numer().coeffs().len().max(f.denom().coeffs().len()).max(1);
    let ys: Vec<Rational> = (0..=dp as i64).map(Rational::from).collect();
    let vals: Vec<Rational> = ys
        .iter()
        .map(|y| {
            let b: Vec<Rational> =
                (0..formal).map(|i| y * f.denom().coeff(i) - f.numer().coeff(i)).collect();
            sylvester_resultant(p, &b)
        })
        .collect();
    let res = lagrange_interpolate(&ys, &vals);
    debug_assert!(!res.is_zero());
    let sf = res.squarefree_part();
    let seq = sf.sturm_sequence();

    let mut a = x.clone();
    loop {
        if let Some(r) = a.as_exact() {
            return f.eval(r).map(AlgebraicNumber::from_rational);
        }
        let (nl, nh) = enclose(f.numer(), &a.lo, &a.hi);
        let (dl, dh) = enclose(f.denom(), &a.lo, &a.hi);
        if sign_of_enclosure(&(dl.clone(), dh.clone())).is_some() {
            let qs = [&nl / &dl, &nl / &dh, &nh / &dl, &nh / &dh];
            let lo = qs.iter().min().unwrap().clone();
            let hi = qs.iter().max().unwrap().clone();
            let at_lo = usize::from(sf.eval(&lo).is_zero());
            if lo == hi || sturm_count(&seq, &lo, &hi) + at_lo == 1 {
                let out = AlgebraicNumber::from_parts(&sf, lo, hi);
                return Ok(match out.to_rational() {
                    Some(r) => AlgebraicNumber::from_rational(r),
                    None => out,
                });
            }
        }
        a.bisect();
    }
}

impl AlgebraicNumber {
    /// Integer coefficients of the defining polynomial, constant term first.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.poly.primitive_integer()
    }

    /// Small-coefficient view used by serializers and tests.
    pub fn i64_coeffs(&self) -> Option<Vec<i64>> {
        self.integer_coeffs().iter().map(|c| c.to_i64()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    fn sqrt2() -> AlgebraicNumber {
        let roots = isolate_real_roots(&UniPoly::from_ints(&[-2, 0, 1]), &q(1, 1), &q(2, 1));
        assert_eq!(roots.len(), 1);
        roots[0].clone()
    }

    #[test]
    fn isolates_sqrt2() {
        let roots = isolate_real_roots(&UniPoly::from_ints(&[-2, 0, 1]), &q(0, 1), &q(2, 1));
        assert_eq!(roots.len(), 1);
        let r = &roots[0];
        assert!(r.lo() <= &q(1415, 1000) && r.hi() >= &q(1414, 1000));
        assert_eq!(r.to_decimal(12), "1.41421356237");
        assert!(!r.is_rational());
    }

    #[test]
    fn no_roots_of_x2_plus_1() {
        assert!(isolate_real_roots(&UniPoly::from_ints(&[1, 0, 1]), &q(-10, 1), &q(10, 1)).is_empty());
    }

    #[test]
    fn k3_numerator_root() {
        // 1440x^2 - 6(675 - 600 - 16)x - (8100 - 1440 - 64)
        let p = UniPoly::from_ints(&[-6596, -354, 1440]);
        let roots = isolate_real_roots(&p, &q(-1, 1), &q(41, 8));
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].to_rational(), Some(q(34, 15)));
        let rr = rational_roots(&p);
        assert_eq!(rr.len(), 2);
        assert!(rr.contains(&q(34, 15)));
        let other = rr.iter().find(|r| **r != q(34, 15)).unwrap();
        assert!(*other < q(-1, 1) || *other > q(41, 8));
        assert!(p.eval(other).is_zero());
    }

    #[test]
    fn rational_root_test() {
        assert_eq!(rational_roots(&UniPoly::from_ints(&[-34, 15])), vec![q(34, 15)]);
        assert!(rational_roots(&UniPoly::from_ints(&[-2, 0, 1])).is_empty());
        assert_eq!(rational_roots(&UniPoly::from_ints(&[0, 0, 1])), vec![q(0, 1)]);
        let p = &UniPoly::from_ints(&[1, 3]) * &UniPoly::from_ints(&[-7, 2]);
        assert_eq!(rational_roots(&p), vec![q(-1, 3), q(7, 2)]);
    }

    #[test]
    fn roots_at_midpoints_are_exact() {
        let p = &UniPoly::from_ints(&[-1, 1]) * &UniPoly::from_ints(&[-3, 1]);
        let roots = isolate_real_roots(&p, &q(0, 1), &q(2, 1));
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].to_rational(), Some(q(1, 1)));
        // open interval excludes endpoints
        assert!(isolate_real_roots(&p, &q(1, 1), &q(3, 1)).is_empty());
    }

    #[test]
    fn sign_at_cases() {
        let a = sqrt2();
        let f = RationalFunction1D::from_poly(UniPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(sign_at(&f, &a), Ok(0));
        let f = RationalFunction1D::from_poly(UniPoly::x());
        assert_eq!(sign_at(&f, &a), Ok(1));
        let f = RationalFunction1D::new(UniPoly::one(), UniPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(sign_at(&f, &a), Err(Error::Pole));
        // x - 1.4142 is positive, x - 1.4143 negative
        let f = RationalFunction1D::from_poly(UniPoly::linear(q(-14142, 10000), q(1, 1)));
        assert_eq!(sign_at(&f, &a), Ok(1));
        let f = RationalFunction1D::from_poly(UniPoly::linear(q(-14143, 10000), q(1, 1)));
        assert_eq!(sign_at(&f, &a), Ok(-1));
        // the other root of the shared factor must not count
        let f = RationalFunction1D::from_poly(UniPoly::from_ints(&[2, 0, -1]));
        assert_eq!(sign_at(&f, &a), Ok(0));
    }

    #[test]
    fn evaluation_at_algebraic() {
        let a = sqrt2();
        // (x + 1)^2 = 3 + 2 sqrt2
        let f = RationalFunction1D::from_poly(UniPoly::from_ints(&[1, 2, 1]));
        let v = eval_at_algebraic(&f, &a).unwrap();
        assert_eq!(v.to_decimal(10), "5.828427125");
        // x^2 is rational
        let f = RationalFunction1D::from_poly(UniPoly::from_ints(&[0, 0, 1]));
        assert_eq!(eval_at_algebraic(&f, &a).unwrap().as_exact(), Some(&q(2, 1)));
        // 1/(x - 1) = sqrt2 + 1
        let f = RationalFunction1D::new(UniPoly::one(), UniPoly::from_ints(&[-1, 1])).unwrap();
        let v = eval_at_algebraic(&f, &a).unwrap();
        assert_eq!(v.cmp_rational(&q(24142, 10000)), Ordering::Greater);
        assert_eq!(v.cmp_rational(&q(24143, 10000)), Ordering::Less);
    }

    #[test]
    fn scalar_serialization() {
        let s = Scalar::Algebraic(sqrt2());
        let j = serde_json::to_value(&s).unwrap();
        assert_eq!(j["poly"], serde_json::json!([-2, 0, 1]));
        assert_eq!(j["approx"], "1.41421356237");
        assert_eq!(serde_json::to_value(Scalar::Rational(q(34, 15))).unwrap(), "34/15");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn isolation_matches_sturm(coeffs in proptest::collection::vec(-12i64..=12, 2..6),
                                       a in -6i64..0, b in 1i64..6) {
                let p = UniPoly::from_ints(&coeffs);
                prop_assume!(!p.is_zero());
                let roots = isolate_real_roots(&p, &Rational::from(a), &Rational::from(b));
                let sf = p.squarefree_part();
                if !sf.is_constant() {
                    let at_b = usize::from(sf.eval(&Rational::from(b)).is_zero());
                    let n = sturm_count(&sf.sturm_sequence(), &Rational::from(a), &Rational::from(b)) - at_b;
                    prop_assert_eq!(n, roots.len());
                }
                for r in &roots {
                    let sl = sf.sign_at(r.lo());
                    let sh = sf.sign_at(r.hi());
                    prop_assert!(sl == 0 || sh == 0 || sl != sh);
                }
                for w in roots.windows(2) {
                    prop_assert!(w[0].hi() < w[1].lo() || w[0].hi() <= w[1].lo());
                }
            }

            #[test]
            fn sign_zero_only_on_shared_factor(c in proptest::collection::vec(-9i64..=9, 1..4)) {
                let a = sqrt2();
                let p = UniPoly::from_ints(&c);
                prop_assume!(!p.is_zero());
                let s = sign_at(&RationalFunction1D::from_poly(p.clone()), &a).unwrap();
                if s == 0 {
                    prop_assert!(!p.gcd(a.defining_poly()).is_constant());
                }
                let approx = p.eval_f64(std::f64::consts::SQRT_2);
                if approx.abs() > 1e-9 {
                    prop_assert_eq!(s, approx.signum() as i32);
                }
            }
        }
    }
}
