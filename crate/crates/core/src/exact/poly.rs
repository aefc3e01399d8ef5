//! Univariate polynomials and rational functions over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// A polynomial with rational coefficients, constant term first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The linear polynomial `a + b x`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    pub fn x() -> Self {
        Self::linear(Rational::zero(), Rational::one())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    /// Sign of the value at `x`.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        self.eval(x).signum()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() * &lead_inv;
            if !f.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &f * c;
                }
                quot[k] = f;
            }
            rem.pop();
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`, made monic.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    pub fn to_primitive_integer(&self) -> Self {
        Self::new(self.primitive_integer().into_iter().map(Rational::from).collect())
    }

    /// `p(a + b x)`.
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> Self {
        let lin = UniPoly::linear(a.clone(), b.clone());
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// `x^n p(1/x)` with `n = deg p`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Number of sign changes in the coefficient sequence (zeros skipped).
    pub fn sign_variations(&self) -> usize {
        sign_variations(self.coeffs.iter().map(|c| c.signum()))
    }

    /// Canonical Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone()];
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        seq
    }
}

pub(crate) fn sign_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Distinct real roots of a squarefree polynomial in the half-open interval `(a, b]`
/// by Sturm's theorem.
pub fn sturm_count(seq: &[UniPoly], a: &Rational, b: &Rational) -> usize {
    let va = sign_variations(seq.iter().map(|p| p.sign_at(a)));
    let vb = sign_variations(seq.iter().map(|p| p.sign_at(b)));
    va.saturating_sub(vb)
}

impl<'b> Add<&'b UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &'b UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'b> Sub<&'b UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &'b UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'b> Mul<&'b UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &'b UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            let show_coeff = i == 0 || a != 1;
            if show_coeff {
                if a.is_integer() {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "({a})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A quotient of polynomials kept in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction1D {
    numer: UniPoly,
    denom: UniPoly,
}

impl RationalFunction1D {
    pub fn new(numer: UniPoly, denom: UniPoly) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Precondition("rational function with zero denominator".into()));
        }
        if numer.is_zero() {
            return Ok(Self { numer, denom: UniPoly::one() });
        }
        let g = numer.gcd(&denom);
        let (n, _) = numer.div_rem(&g);
        let (d, _) = denom.div_rem(&g);
        let lead = d.leading();
        Ok(Self { numer: n.scale(&lead.recip()), denom: d.monic() })
    }

    pub fn from_poly(p: UniPoly) -> Self {
        Self { numer: p, denom: UniPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(UniPoly::zero())
    }

    pub fn numer(&self) -> &UniPoly {
        &self.numer
    }

    pub fn denom(&self) -> &UniPoly {
        &self.denom
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.denom.eval(x);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.numer.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.numer.eval_f64(x) / self.denom.eval_f64(x)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.numer.derivative() * &self.denom) - &(&self.numer * &self.denom.derivative());
        let d = &self.denom * &self.denom;
        Self::new(n, d).expect("square of a nonzero denominator is nonzero")
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = &(&self.numer * &other.denom) + &(&other.numer * &self.denom);
        Self::new(n, &self.denom * &other.denom).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.numer * &other.numer, &self.denom * &other.denom).expect("nonzero denominators")
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self { numer: self.numer.scale(s), denom: self.denom.clone() }
    }

    /// `1 / p` for a nonzero polynomial.
    pub fn reciprocal_of(p: &UniPoly) -> Result<Self> {
        Self::new(UniPoly::one(), p.clone())
    }
}

impl fmt::Display for RationalFunction1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == UniPoly::one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "({}) / ({})", self.numer, self.denom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    #[test]
    fn arithmetic_and_division() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let d = UniPoly::from_ints(&[-1, 1]);
        let (qq, r) = p.div_rem(&d);
        assert_eq!(qq, UniPoly::from_ints(&[1, 1]));
        assert_eq!(r, UniPoly::from_ints(&[-1]));
        assert_eq!(&(&qq * &d) + &r, p);
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = &UniPoly::from_ints(&[-1, 1]).pow(2) * &UniPoly::from_ints(&[2, 1]);
        assert_eq!(p.squarefree_part(), &UniPoly::from_ints(&[-1, 1]) * &UniPoly::from_ints(&[2, 1]));
        assert_eq!(p.gcd(&UniPoly::from_ints(&[-1, 1])), UniPoly::from_ints(&[-1, 1]));
        assert_eq!(UniPoly::from_ints(&[1, 1]).gcd(&UniPoly::from_ints(&[2])), UniPoly::one());
    }

    #[test]
    fn primitive_form() {
        let p = UniPoly::new(vec![q(-1, 2), q(0, 1), q(-3, 4)]);
        assert_eq!(p.primitive_integer(), vec![BigInt::from(2), BigInt::from(0), BigInt::from(3)]);
    }

    #[test]
    fn sturm_counts_roots() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let s = p.sturm_sequence();
        assert_eq!(sturm_count(&s, &q(0, 1), &q(2, 1)), 1);
        assert_eq!(sturm_count(&s, &q(-2, 1), &q(2, 1)), 2);
        let s = UniPoly::from_ints(&[1, 0, 1]).sturm_sequence();
        assert_eq!(sturm_count(&s, &q(-10, 1), &q(10, 1)), 0);
    }

    #[test]
    fn compose_and_reverse() {
        let p = UniPoly::from_ints(&[0, 0, 1]);
        assert_eq!(p.compose_linear(&q(1, 1), &q(2, 1)), UniPoly::from_ints(&[1, 4, 4]));
        assert_eq!(UniPoly::from_ints(&[1, 2, 3]).reversed(), UniPoly::from_ints(&[3, 2, 1]));
    }

    #[test]
    fn rational_function_reduction() {
        let n = &UniPoly::from_ints(&[1, 1]) * &UniPoly::from_ints(&[2, 1]);
        let d = &UniPoly::from_ints(&[1, 1]) * &UniPoly::from_ints(&[0, 2]);
        let f = RationalFunction1D::new(n, d).unwrap();
        assert_eq!(f.denom(), &UniPoly::x());
        assert_eq!(f.numer(), &UniPoly::new(vec![q(1, 1), q(1, 2)]));
        assert_eq!(f.eval(&q(2, 1)).unwrap(), q(1, 1));
        assert_eq!(f.eval(&q(0, 1)), Err(Error::Pole));
        assert!(RationalFunction1D::new(UniPoly::one(), UniPoly::zero()).is_err());
    }

    #[test]
    fn quotient_rule() {
        // d/dx 1/(x+1) = -1/(x+1)^2
        let f = RationalFunction1D::reciprocal_of(&UniPoly::from_ints(&[1, 1])).unwrap();
        let df = f.derivative();
        assert_eq!(df.eval(&q(1, 1)).unwrap(), q(-1, 4));
    }
}
