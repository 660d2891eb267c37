//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Coefficients are stored in ascending order: `coeffs[i]` is the coefficient
//! of `x^i`. The representation is canonical: no trailing zeros, and the zero
//! polynomial is the empty vector.

mod heights;
mod reciprocal;
mod resultant;
pub mod roots;

pub use heights::{heights, mahler_measure, HeightReport};
pub use reciprocal::{cayley, expand, is_even_poly, symmetrize, symmetrize_with_n, SymPair};
pub use resultant::{discriminant, poly_gcd, resultant, squarefree_decomposition};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{RecipError, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero above the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and normalizes the leading coefficient to be positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lc().unwrap().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Naive height: the maximum absolute value of the coefficients.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: v }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Palindromic test: `coeff_i = coeff_{deg - i}`. The zero polynomial counts as reciprocal.
    pub fn is_reciprocal(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// `x^{deg} P(1/x)` with respect to the given formal degree `d >= deg P`.
    pub fn reversed(&self, d: usize) -> Self {
        let mut v = vec![BigInt::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[d - i] = c.clone();
        }
        Self::new(v)
    }

    /// Pseudo-remainder: `lc(B)^{deg A - deg B + 1} A = Q B + R`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("pseudo_rem by zero");
        let Some(da) = self.degree() else {
            return IntPoly::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.lc().unwrap();
        let mut r = self.coeffs.clone();
        let mut e = da - db + 1;
        let mut deg_r = da as isize;
        while deg_r >= db as isize {
            let du = deg_r as usize;
            let lr = r[du].clone();
            for c in r.iter_mut().take(du + 1) {
                *c *= lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[du - db + j] -= &lr * bc;
            }
            e -= 1;
            // r[du] is now zero; find the new degree
            deg_r -= 1;
            while deg_r >= 0 && r[deg_r as usize].is_zero() {
                deg_r -= 1;
            }
        }
        let f = num_traits::pow(lb.clone(), e);
        IntPoly::new(r.into_iter().map(|c| c * &f).collect())
    }

    /// Exact division over the integers; `None` if `d` does not divide `self` in `Z[x]`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let da = self.degree().unwrap();
        if da < dd {
            return None;
        }
        let ld = d.lc().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); da - dd + 1];
        for i in (0..=da - dd).rev() {
            let (qi, rem) = r[i + dd].div_rem(ld);
            if !rem.is_zero() {
                return None;
            }
            if !qi.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &qi * dc;
                }
            }
            q[i] = qi;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(q))
    }

    /// Composition `self(q(x))`.
    pub fn compose(&self, q: &IntPoly) -> IntPoly {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &IntPoly::constant(c.clone());
        }
        acc
    }

    /// Substitution `x -> a x + b` with integer `a, b`.
    pub fn substitute_linear(&self, a: &BigInt, b: &BigInt) -> IntPoly {
        self.compose(&IntPoly::new(vec![b.clone(), a.clone()]))
    }
}

impl fmt::Display for IntPoly {
    /// Comma-separated ascending coefficients, `"0"` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly[{self}]")
    }
}

impl FromStr for IntPoly {
    type Err = RecipError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(RecipError::Parse("empty polynomial".into()));
        }
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|e| RecipError::Parse(format!("bad coefficient {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl serde::Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}
