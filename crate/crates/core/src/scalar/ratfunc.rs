//! Univariate rational functions over Q(i, sqrt(2)), kept in reduced normal
//! form: gcd(num, den) = 1 and den monic. Equality is structural.

use super::{forward_binop, ExactScalar, Poly, Scalar, ScalarError};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds num/den in normal form. Errors on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = Poly::gcd(&num, &den);
        let (num, r) = num.divmod(&g);
        debug_assert!(r.is_zero());
        let (den, r) = den.divmod(&g);
        debug_assert!(r.is_zero());
        let lead_inv = den.leading().unwrap().inv().unwrap();
        Ok(RatFunc {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The variable t.
    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    pub fn as_constant(&self) -> Option<ExactScalar> {
        if self.den.degree() == Some(0) {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Exact evaluation; a vanishing (reduced) denominator is a pole.
    pub fn eval(&self, t0: &ExactScalar) -> Result<ExactScalar, ScalarError> {
        let d = self.den.eval(t0);
        if d.is_zero() {
            return Err(ScalarError::Pole { at: t0.to_string() });
        }
        let dinv = d.inv().expect("nonzero scalar has an inverse");
        Ok(self.num.eval(t0) * &dinv)
    }

    fn add_impl(&self, o: &Self) -> Self {
        RatFunc::new(
            &self.num * &o.den + &o.num * &self.den,
            &self.den * &o.den,
        )
        .unwrap()
    }

    fn sub_impl(&self, o: &Self) -> Self {
        RatFunc::new(
            &self.num * &o.den - &o.num * &self.den,
            &self.den * &o.den,
        )
        .unwrap()
    }

    fn mul_impl(&self, o: &Self) -> Self {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }

    fn neg_impl(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()).unwrap())
        }
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ScalarError> {
        if o.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }
}

/// Evaluates f at t0; errors with a pole report when den(f)(t0) = 0.
pub fn ratfunc_eval(f: &RatFunc, t0: &ExactScalar) -> Result<ExactScalar, ScalarError> {
    f.eval(t0)
}

forward_binop!(Add, add, add_impl, RatFunc);
forward_binop!(Sub, sub, sub_impl, RatFunc);
forward_binop!(Mul, mul, mul_impl, RatFunc);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        self.neg_impl()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        self.neg_impl()
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    /// Panics on zero divisor; use [`RatFunc::checked_div`] for a checked form.
    fn div(self, rhs: RatFunc) -> RatFunc {
        self.checked_div(&rhs).expect("division by zero RatFunc")
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }
    fn from_i64(v: i64) -> Self {
        RatFunc::constant(ExactScalar::from_i64(v))
    }
}

impl fmt::Display for RatFunc {
    /// Grammar-compatible: `num` when den = 1, else `(num)/(den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            debug_assert_eq!(self.den, Poly::one());
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}
