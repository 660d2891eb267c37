use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{RecipError, Result};
use crate::ff::{big_to_mod, factor_shape, FpPoly};
use crate::poly::IntPoly;

/// Where the distinguished linear factor sits, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mark {
    None,
    Plus2,
    Minus2,
}

/// Multiset of `(f_i, e_i)` pairs. When `mark` is not [`Mark::None`] the first
/// entry is the distinguished linear factor and the rest are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SplittingType {
    pub factors: Vec<(u32, u32)>,
    pub mark: Mark,
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn perm_count(factors: &[(u32, u32)]) -> u64 {
    let mut groups: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for &fe in factors {
        *groups.entry(fe).or_default() += 1;
    }
    groups.values().map(|&c| factorial(c)).product()
}

impl SplittingType {
    pub fn new(mut factors: Vec<(u32, u32)>) -> Self {
        factors.sort_unstable();
        SplittingType {
            factors,
            mark: Mark::None,
        }
    }

    /// Splitting type with a distinguished linear factor of multiplicity `e1`.
    pub fn marked(e1: u32, others: Vec<(u32, u32)>, mark: Mark) -> Result<Self> {
        if mark == Mark::None || e1 == 0 {
            return Err(RecipError::Shape("marked type needs a mark and e1 >= 1".into()));
        }
        let mut rest = others;
        rest.sort_unstable();
        let mut factors = vec![(1, e1)];
        factors.extend(rest);
        Ok(SplittingType { factors, mark })
    }

    /// Re-marks the first linear factor; `self` must contain one.
    pub fn with_mark(&self, mark: Mark) -> Result<Self> {
        if mark == Mark::None {
            return Ok(SplittingType::new(self.factors.clone()));
        }
        let pos = self
            .factors
            .iter()
            .position(|&(f, _)| f == 1)
            .ok_or_else(|| RecipError::Shape(format!("{self} has no linear factor")))?;
        let mut rest = self.factors.clone();
        let (_, e1) = rest.remove(pos);
        Self::marked(e1, rest, mark)
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(f, e)| f * e).sum()
    }

    pub fn index(&self) -> u32 {
        self.factors.iter().map(|&(f, e)| (e - 1) * f).sum()
    }

    pub fn r(&self) -> usize {
        self.factors.len()
    }

    pub fn is_marked(&self) -> bool {
        self.mark != Mark::None
    }

    /// Number of marked roots: 0 or 1.
    pub fn j(&self) -> u32 {
        u32::from(self.is_marked())
    }

    pub fn e1(&self) -> Option<u32> {
        self.is_marked().then(|| self.factors[0].1)
    }

    /// `prod f_i` times the number of permutations of the factors preserving the type.
    pub fn aut_count(&self) -> u64 {
        let fprod: u64 = self.factors.iter().map(|&(f, _)| f as u64).product();
        fprod * perm_count(&self.factors)
    }

    /// As [`aut_count`](Self::aut_count) but permuting only the unmarked factors.
    pub fn aut_prime_count(&self) -> Option<u64> {
        if !self.is_marked() {
            return None;
        }
        let fprod: u64 = self.factors.iter().map(|&(f, _)| f as u64).product();
        Some(fprod * perm_count(&self.factors[1..]))
    }

    /// `#Aut^{(j)}`: `aut_prime_count` when marked, else `aut_count`.
    pub fn aut_j(&self) -> u64 {
        self.aut_prime_count().unwrap_or_else(|| self.aut_count())
    }

    /// The type with the marked factor deleted.
    pub fn unmarked_rest(&self) -> SplittingType {
        if self.is_marked() {
            SplittingType::new(self.factors[1..].to_vec())
        } else {
            self.clone()
        }
    }

    /// Every splitting type of degree exactly `d`.
    pub fn all_of_degree(d: u32) -> Vec<SplittingType> {
        let mut parts: Vec<(u32, u32)> = Vec::new();
        for f in 1..=d {
            for e in 1..=d / f {
                parts.push((f, e));
            }
        }
        let mut out = Vec::new();
        fn rec(
            parts: &[(u32, u32)],
            start: usize,
            left: u32,
            cur: &mut Vec<(u32, u32)>,
            out: &mut Vec<SplittingType>,
        ) {
            if left == 0 {
                out.push(SplittingType::new(cur.clone()));
                return;
            }
            for i in start..parts.len() {
                let (f, e) = parts[i];
                if f * e <= left {
                    cur.push((f, e));
                    rec(parts, i, left - f * e, cur, out);
                    cur.pop();
                }
            }
        }
        rec(&parts, 0, d, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(d, e)| if e == 1 { d.to_string() } else { format!("{d}^{e}") })
            .collect();
        write!(f, "{}", parts.join(","))?;
        match self.mark {
            Mark::None => Ok(()),
            Mark::Plus2 => write!(f, "@+2"),
            Mark::Minus2 => write!(f, "@-2"),
        }
    }
}

impl FromStr for SplittingType {
    type Err = RecipError;

    /// `"1^2,1"` or `"1^2 1"`; an `@+2` / `@-2` suffix marks the first factor.
    fn from_str(s: &str) -> Result<Self> {
        let (body, mark) = match s.split_once('@') {
            Some((b, "+2")) | Some((b, "2")) => (b, Mark::Plus2),
            Some((b, "-2")) => (b, Mark::Minus2),
            Some((_, m)) => return Err(RecipError::Parse(format!("bad mark {m:?}"))),
            None => (s, Mark::None),
        };
        let mut factors = Vec::new();
        for tok in body
            .trim_matches(|c| c == '(' || c == ')')
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let (f, e) = match tok.split_once('^') {
                Some((f, e)) => (f, e),
                None => (tok, "1"),
            };
            let f: u32 = f.parse().map_err(|_| RecipError::Parse(format!("bad degree {tok:?}")))?;
            let e: u32 = e.parse().map_err(|_| RecipError::Parse(format!("bad exponent {tok:?}")))?;
            if f == 0 || e == 0 {
                return Err(RecipError::Parse(format!("zero in {tok:?}")));
            }
            factors.push((f, e));
        }
        if factors.is_empty() {
            return Err(RecipError::Parse("empty splitting type".into()));
        }
        if mark == Mark::None {
            return Ok(SplittingType::new(factors));
        }
        let (f1, e1) = factors[0];
        if f1 != 1 {
            return Err(RecipError::Shape("the marked factor must be linear".into()));
        }
        SplittingType::marked(e1, factors[1..].to_vec(), mark)
    }
}

/// Result of reducing a form mod `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SplitResult {
    /// `p` divides every coefficient.
    Infinity,
    Type(SplittingType),
}

impl SplitResult {
    pub fn index(&self) -> Option<u32> {
        match self {
            SplitResult::Infinity => None,
            SplitResult::Type(t) => Some(t.index()),
        }
    }
}

/// Splitting type of the binary form of degree `n` with `coeffs[i]` the coefficient of `x^i y^{n-i}`.
pub fn splitting_type_binary(coeffs: &[u64], n: usize, p: u64) -> SplitResult {
    let poly = FpPoly::new(p, coeffs.to_vec());
    let Some(d) = poly.degree() else {
        return SplitResult::Infinity;
    };
    let mut factors: Vec<(u32, u32)> = factor_shape(&poly)
        .into_iter()
        .map(|(f, e)| (f as u32, e))
        .collect();
    if n > d {
        factors.push((1, (n - d) as u32));
    }
    SplitResult::Type(SplittingType::new(factors))
}

/// Splitting type of `P` mod `p`, viewed as a binary form of degree `deg P`.
pub fn splitting_type_mod_p(poly: &IntPoly, p: u64) -> SplitResult {
    let Some(n) = poly.degree() else {
        return SplitResult::Infinity;
    };
    let coeffs: Vec<u64> = poly.coeffs().iter().map(|c| big_to_mod(c, p)).collect();
    splitting_type_binary(&coeffs, n, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_and_aut() {
        let s: SplittingType = "1^2,1".parse().unwrap();
        assert_eq!((s.degree(), s.index()), (3, 1));
        assert_eq!(s.aut_count(), 1);
        let s: SplittingType = "1,1".parse().unwrap();
        assert_eq!(s.aut_count(), 2);
        let s: SplittingType = "2,2,1^2".parse().unwrap();
        assert_eq!(s.aut_count(), 8);
        let m: SplittingType = "1^2,1,1@+2".parse().unwrap();
        assert_eq!(m.e1(), Some(2));
        assert_eq!(m.aut_prime_count(), Some(2));
        assert_eq!(m.unmarked_rest().to_string(), "1,1");
        assert_eq!(m.to_string(), "1^2,1,1@+2");
        assert!("2,1@+2".parse::<SplittingType>().is_err());
    }

    #[test]
    fn enumerate_types() {
        // partitions of 3 with multiplicities: 1,1,1 | 1,2 | 3 | 1^2,1 | 1^3
        assert_eq!(SplittingType::all_of_degree(3).len(), 5);
        for t in SplittingType::all_of_degree(5) {
            assert_eq!(t.degree(), 5);
        }
    }

    #[test]
    fn mod_p_examples() {
        let p = IntPoly::from_i64(&[0, 0, 1, 1]);
        assert_eq!(
            splitting_type_mod_p(&p, 5),
            SplitResult::Type(SplittingType::new(vec![(1, 2), (1, 1)]))
        );
        assert_eq!(splitting_type_mod_p(&p, 5).index(), Some(1));
        let q = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(
            splitting_type_mod_p(&q, 3),
            SplitResult::Type(SplittingType::new(vec![(2, 1)]))
        );
        let z = IntPoly::from_i64(&[7, 0, 7]);
        assert_eq!(splitting_type_mod_p(&z, 7), SplitResult::Infinity);
        // lc divisible by p: root at infinity
        let r = IntPoly::from_i64(&[1, 1, 5]);
        assert_eq!(
            splitting_type_mod_p(&r, 5),
            SplitResult::Type(SplittingType::new(vec![(1, 1), (1, 1)]))
        );
    }
}
