//! Exact arithmetic for the field tower Q(i, sqrt(2)) and for univariate
//! rational functions over it, plus the textual scalar grammar shared by the
//! catalog and curve files.

mod expr;
mod poly;
mod ratfunc;

pub use expr::{parse_const_expr, parse_scalar_expr, parse_with_ratfunc_bindings};
pub use poly::Poly;
pub use ratfunc::{ratfunc_eval, RatFunc};

use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arbitrary-precision rational: reduced, positive denominator, zero is 0/1.
/// `num_rational::BigRational` maintains exactly these invariants.
pub type Rational = num_rational::BigRational;

/// Errors raised by scalar parsing, evaluation and field operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound parameter `{name}` at byte {pos}")]
    UnboundParameter { name: String, pos: usize },
    #[error("division by zero at byte {pos}")]
    DivisionByZeroAt { pos: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at t = {at}")]
    Pole { at: String },
    #[error("expression is not constant in t: {text}")]
    NotConstant { text: String },
}

/// Field elements usable as tensor entries. Implemented by [`ExactScalar`]
/// (constants) and [`RatFunc`] (curve entries).
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
}

/// Element of Q(i, sqrt(2)) stored over the basis {1, i, sqrt(2), i*sqrt(2)}.
///
/// The tower is closed under the four field operations; inversion goes
/// through the product of the three nontrivial Galois conjugates
/// (i -> -i, sqrt(2) -> -sqrt(2)), whose product with the element itself is
/// a plain rational norm.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    /// Coordinates over {1, i, r2, i*r2} with r2 = sqrt(2).
    c: [Rational; 4],
}

impl ExactScalar {
    pub fn new(c: [Rational; 4]) -> Self {
        ExactScalar { c }
    }

    pub fn zero() -> Self {
        ExactScalar {
            c: [
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
            ],
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        let mut s = Self::zero();
        s.c[1] = Rational::one();
        s
    }

    /// The square root of 2.
    pub fn sqrt2() -> Self {
        let mut s = Self::zero();
        s.c[2] = Rational::one();
        s
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut s = Self::zero();
        s.c[0] = q;
        s
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(v.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(num.into(), den.into()))
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|q| q.is_zero())
    }

    /// True when the element lies in Q (no i or sqrt(2) part).
    pub fn is_rational(&self) -> bool {
        self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// Galois conjugate sending i to -i.
    pub fn conj_i(&self) -> Self {
        ExactScalar {
            c: [
                self.c[0].clone(),
                -self.c[1].clone(),
                self.c[2].clone(),
                -self.c[3].clone(),
            ],
        }
    }

    /// Galois conjugate sending sqrt(2) to -sqrt(2).
    pub fn conj_sqrt2(&self) -> Self {
        ExactScalar {
            c: [
                self.c[0].clone(),
                self.c[1].clone(),
                -self.c[2].clone(),
                -self.c[3].clone(),
            ],
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        ExactScalar {
            c: [
                &self.c[0] * q,
                &self.c[1] * q,
                &self.c[2] * q,
                &self.c[3] * q,
            ],
        }
    }

    fn add_impl(&self, o: &Self) -> Self {
        ExactScalar {
            c: [
                &self.c[0] + &o.c[0],
                &self.c[1] + &o.c[1],
                &self.c[2] + &o.c[2],
                &self.c[3] + &o.c[3],
            ],
        }
    }

    fn sub_impl(&self, o: &Self) -> Self {
        ExactScalar {
            c: [
                &self.c[0] - &o.c[0],
                &self.c[1] - &o.c[1],
                &self.c[2] - &o.c[2],
                &self.c[3] - &o.c[3],
            ],
        }
    }

    fn neg_impl(&self) -> Self {
        ExactScalar {
            c: [
                -self.c[0].clone(),
                -self.c[1].clone(),
                -self.c[2].clone(),
                -self.c[3].clone(),
            ],
        }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        // Catalog data is overwhelmingly rational; short-circuit that case.
        if self.is_rational() && o.is_rational() {
            return Self::from_rational(&self.c[0] * &o.c[0]);
        }
        let [a0, a1, a2, a3] = &self.c;
        let [b0, b1, b2, b3] = &o.c;
        let two = Rational::from_integer(2.into());
        // (a0 + a1 i + a2 r + a3 ir)(b0 + b1 i + b2 r + b3 ir), r = sqrt(2):
        let c0 = a0 * b0 - a1 * b1 + (a2 * b2 - a3 * b3) * &two;
        let c1 = a0 * b1 + a1 * b0 + (a2 * b3 + a3 * b2) * &two;
        let c2 = a0 * b2 + a2 * b0 - (a1 * b3 + a3 * b1);
        let c3 = a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1;
        ExactScalar {
            c: [c0, c1, c2, c3],
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(Self::from_rational(self.c[0].recip()));
        }
        let p = self
            .conj_i()
            .mul_impl(&self.conj_sqrt2())
            .mul_impl(&self.conj_i().conj_sqrt2());
        let norm = self.mul_impl(&p);
        debug_assert!(norm.is_rational() && !norm.c[0].is_zero());
        Some(p.scale(&norm.c[0].recip()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|r| self.mul_impl(&r))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul_impl(self);
        }
        acc
    }
}

impl fmt::Display for ExactScalar {
    /// Canonical form in the scalar grammar, e.g. `-1/2+3*i-r2+5/2*i*r2`.
    /// Parsing the output returns the same element.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let tags = ["", "i", "r2", "i*r2"];
        let mut first = true;
        for (q, tag) in self.c.iter().zip(tags) {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let a = q.abs();
            if tag.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{tag}")?;
            } else {
                write!(f, "{a}*{tag}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl_fn:ident, $ty:ty) => {
        impl $trait for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$impl_fn(&rhs)
            }
        }
        impl<'a> $trait<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                self.$impl_fn(rhs)
            }
        }
        impl<'a> $trait<&'a $ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                self.$impl_fn(rhs)
            }
        }
        impl $trait<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$impl_fn(&rhs)
            }
        }
    };
}
pub(crate) use forward_binop;

forward_binop!(Add, add, add_impl, ExactScalar);
forward_binop!(Sub, sub, sub_impl, ExactScalar);
forward_binop!(Mul, mul, mul_impl, ExactScalar);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.neg_impl()
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.neg_impl()
    }
}

impl Div for ExactScalar {
    type Output = ExactScalar;
    /// Panics on zero divisor; use [`ExactScalar::div`] for a checked form.
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        ExactScalar::div(&self, &rhs).expect("division by zero ExactScalar")
    }
}

impl Scalar for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        ExactScalar::inv(self)
    }
    fn from_i64(v: i64) -> Self {
        ExactScalar::from_i64(v)
    }
}
