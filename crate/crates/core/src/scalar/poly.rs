//! Dense univariate polynomials in t over Q(i, sqrt(2)).

use super::{forward_binop, ExactScalar};
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial with `coeffs[k]` the coefficient of t^k; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<ExactScalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The variable t.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![ExactScalar::zero(), ExactScalar::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(ExactScalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExactScalar> {
        self.coeffs.last()
    }

    pub fn as_constant(&self) -> Option<ExactScalar> {
        match self.coeffs.len() {
            0 => Some(ExactScalar::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, t0: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t0 + c;
        }
        acc
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    fn add_impl(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k);
            let b = o.coeffs.get(k);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(out)
    }

    fn sub_impl(&self, o: &Self) -> Self {
        self.add_impl(&o.neg_impl())
    }

    fn neg_impl(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ExactScalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    /// Euclidean division; panics on a zero divisor (callers check).
    pub fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.clone();
        let mut quot = vec![ExactScalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let q = rem.leading().unwrap() * &lead_inv;
            let shift = rd - dd;
            let mut coeffs = rem.coeffs;
            for (k, c) in d.coeffs.iter().enumerate() {
                coeffs[shift + k] = &coeffs[shift + k] - &(&q * c);
            }
            quot[shift] = q;
            rem = Poly::from_coeffs(coeffs);
        }
        (Poly::from_coeffs(quot), rem)
    }

    /// Monic greatest common divisor via the Euclidean algorithm;
    /// gcd(0, 0) = 0.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.divmod(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scales to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l == &ExactScalar::one() => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul_impl(self);
        }
        acc
    }
}

forward_binop!(Add, add, add_impl, Poly);
forward_binop!(Sub, sub, sub_impl, Poly);
forward_binop!(Mul, mul, mul_impl, Poly);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_impl()
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_impl()
    }
}

impl fmt::Display for Poly {
    /// Grammar-compatible form with terms in descending degree,
    /// e.g. `-256*t^23`, `t^2-3*t+1/2`, `(1+i)*t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, body) = term_string(c, k);
            if first {
                write!(f, "{}{}", if neg { "-" } else { "" }, body)?;
                first = false;
            } else {
                write!(f, "{}{}", if neg { "-" } else { "+" }, body)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Renders `c * t^k` as (sign, body) with the sign pulled out when the
/// coefficient has a single tower component.
fn term_string(c: &ExactScalar, k: usize) -> (bool, String) {
    let nonzero = c.coords().iter().filter(|q| !q.is_zero()).count();
    let (neg, coeff) = if nonzero == 1 {
        let printed = c.to_string();
        match printed.strip_prefix('-') {
            Some(stripped) => (true, stripped.to_string()),
            None => (false, printed),
        }
    } else {
        (false, format!("({c})"))
    };
    let var = match k {
        0 => String::new(),
        1 => "t".to_string(),
        _ => format!("t^{k}"),
    };
    let body = match (k, coeff.as_str()) {
        (0, _) => coeff,
        (_, "1") => var,
        _ => format!("{coeff}*{var}"),
    };
    (neg, body)
}
