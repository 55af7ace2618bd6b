//! Univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::ratlin::Rational;

/// Coefficients from the constant term upward; never has a trailing zero.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Poly::new(vec![c.into()])
    }

    /// `c · k^d`.
    pub fn monomial(c: impl Into<Rational>, d: usize) -> Self {
        let mut v = vec![Rational::zero(); d + 1];
        v[d] = c.into();
        Poly::new(v)
    }

    /// The polynomial `k`.
    pub fn var() -> Self {
        Poly::monomial(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<(usize, Rational)> {
        self.0.last().map(|c| (self.0.len() - 1, c.clone()))
    }

    pub fn coeff(&self, d: usize) -> Rational {
        self.0.get(d).cloned().unwrap_or_default()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.0.len().max(rhs.0.len());
        Poly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Highest degree first, e.g. `-1/2 k^3 + 2 k^2 - 2`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            match (first, sign) {
                (true, "-") => f.write_str("-")?,
                (true, _) => {}
                (false, s) => write!(f, " {s} ")?,
            }
            first = false;
            let unit = mag == Rational::one();
            match d {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("k")?,
                1 => write!(f, "{mag} k")?,
                _ if unit => write!(f, "k^{d}")?,
                _ => write!(f, "{mag} k^{d}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{q, qi};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| qi(x)).collect())
    }

    #[test]
    fn arithmetic_and_trim() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(p(&[0, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[-2, 0, 2, -3]).leading(), Some((3, qi(-3))));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-2, 0, 2]).to_string(), "2 k^2 - 2");
        assert_eq!(Poly::monomial(q(-1, 2), 3).to_string(), "-1/2 k^3");
        assert_eq!(p(&[0, 1, 1]).to_string(), "k^2 + k");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    fn small() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-20i64..20, 0..6).prop_map(|v| p(&v))
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_map(a in small(), b in small(), x in -7i64..7) {
            let x = qi(x);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
            prop_assert_eq!((&a - &b).eval(&x), a.eval(&x) - b.eval(&x));
        }
    }
}
