//! Exact scalars, integer matrices, polynomials and real algebraic numbers.

pub mod algebraic;
pub mod matrix;
pub mod poly;
pub mod rational;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub use algebraic::{eval_at_algebraic, isolate_real_roots, rational_roots, sign_at, AlgebraicNumber, Scalar};
pub use matrix::{
    extends_to_basis, gcd_maximal_minors, smith_normal_form, solve_linear_unique, IntMatrix, SmithForm,
};
pub use poly::{RationalFunction1D, UniPoly};
pub use rational::{q, rat_vec, RatVec, Rational};

/// Clears denominators of a nonzero rational vector and divides by the content.
pub fn rational_to_primitive(v: &[Rational]) -> Vec<i64> {
    let l = rational::lcm_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    assert!(!g.is_zero(), "primitive form of the zero vector");
    ints.iter()
        .map(|c| (c / &g).to_i64().expect("lattice coordinate exceeds i64"))
        .collect()
}
