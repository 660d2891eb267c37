//! Exact Fourier analysis of the divisor-counting functions `w_{p,sigma}` over `F_p`,
//! the lattices `L_p`, and a numerical twisted Poisson summation harness.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::disc_lab::{Mark, SplittingType};
use crate::error::{RecipError, Result};
use crate::ff::{factor, inv_mod, FpPoly};

pub const EXHAUSTIVE_BUDGET: u64 = 10_000_000;

/// Frozen envelope for the `O(.)` terms of the transform estimates.
pub const ENVELOPE: f64 = 4.0;

// ---------------------------------------------------------------------------
// forms and linear algebra mod p

/// Binary `n`-ic form over `F_p`; `coeffs[i]` multiplies `x^i y^{n-i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinaryFormModP {
    pub p: u64,
    pub n: usize,
    pub coeffs: Vec<u64>,
}

impl BinaryFormModP {
    pub fn new(p: u64, n: usize, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != n + 1 {
            return Err(RecipError::Shape(format!(
                "a binary {n}-ic form has {} coefficients, got {}",
                n + 1,
                coeffs.len()
            )));
        }
        let coeffs = coeffs.into_iter().map(|c| c % p).collect();
        Ok(BinaryFormModP { p, n, coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Exponent of `y`: `n - deg_x F(x, 1)`.
    fn y_valuation(&self) -> usize {
        match self.coeffs.iter().rposition(|&c| c != 0) {
            Some(d) => self.n - d,
            None => usize::MAX,
        }
    }

    /// `q | self` for a form `q` given by its coefficients.
    pub fn divisible_by(&self, q: &[u64]) -> bool {
        if self.is_zero() {
            return true;
        }
        let qf = BinaryFormModP {
            p: self.p,
            n: q.len() - 1,
            coeffs: q.to_vec(),
        };
        if qf.y_valuation() > self.y_valuation() {
            return false;
        }
        let a = FpPoly::new(self.p, self.coeffs.clone());
        let b = FpPoly::new(self.p, q.to_vec());
        a.rem(&b).is_zero()
    }
}

fn conv(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn dot(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| (acc + x * y) % p)
}

fn encode(v: &[u64], p: u64) -> usize {
    v.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

fn decode(mut idx: usize, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for c in out.iter_mut() {
        *c = (idx % p as usize) as u64;
        idx /= p as usize;
    }
    out
}

/// Reduced row echelon form mod `p`; returns the nonzero rows and their pivot columns.
fn rref(rows: &[Vec<u64>], ncols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = inv_mod(m[row][col], p);
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..ncols {
                    m[r][c] = (m[r][c] + (p - f) * m[row][c]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m, pivots)
}

pub fn rank_mod_p(rows: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    rref(rows, ncols, p).1.len()
}

/// Basis of `{x : r . x = 0 for every row r}`.
pub fn nullspace_mod_p(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let (m, pivots) = rref(rows, ncols, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; ncols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][fc]) % p;
            }
            v
        })
        .collect()
}

/// Every element of the span of `basis`.
fn span_elements(basis: &[Vec<u64>], len: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64; len]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for v in &out {
            for c in 0..p {
                next.push(v.iter().zip(b).map(|(&x, &y)| (x + c * y) % p).collect());
            }
        }
        out = next;
    }
    out
}

// ---------------------------------------------------------------------------
// irreducible factors and the counting functions

/// Monic irreducible polynomials of degree `f` over `F_p`, as coefficient vectors.
pub fn monic_irreducibles(p: u64, f: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let total = (p as usize).pow(f as u32);
    for idx in 0..total {
        let mut c = decode(idx, p, f);
        c.push(1);
        let poly = FpPoly::new(p, c.clone());
        let fac = factor(&poly);
        if fac.len() == 1 && fac[0].1 == 1 {
            out.push(c);
        }
    }
    out
}

/// Which irreducibles may fill a slot of degree 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pool {
    /// Forms: `y` and the monic ones.
    Forms,
    /// Forms other than `y`.
    FormsNoY,
    /// Monic polynomials.
    Monic,
    /// Monic polynomials other than `u`.
    MonicNoU,
}

fn pool(p: u64, f: usize, kind: Pool) -> Vec<Vec<u64>> {
    let mut v = monic_irreducibles(p, f);
    if f == 1 {
        match kind {
            Pool::Forms => v.insert(0, vec![1, 0]),
            Pool::MonicNoU => v.retain(|c| c[0] != 0),
            Pool::FormsNoY | Pool::Monic => {}
        }
    }
    v
}

/// All products `prod P_i^{e_i}` with distinct irreducible `P_i` of degree `f_i`, one per
/// orbit of `sigma`-preserving permutations.
fn products(p: u64, factors: &[(u32, u32)], kind: Pool) -> Vec<Vec<u64>> {
    let mut slots: Vec<(u32, u32)> = factors.to_vec();
    slots.sort_unstable();
    let degrees: BTreeSet<u32> = slots.iter().map(|&(f, _)| f).collect();
    let pools: Vec<(u32, Vec<Vec<u64>>)> = degrees.iter().map(|&f| (f, pool(p, f as usize, kind))).collect();

    fn rec(
        i: usize,
        slots: &[(u32, u32)],
        chosen: &mut Vec<(u32, usize)>,
        acc: Vec<u64>,
        p: u64,
        pools: &[(u32, Vec<Vec<u64>>)],
        out: &mut Vec<Vec<u64>>,
    ) {
        if i == slots.len() {
            out.push(acc);
            return;
        }
        let (f, e) = slots[i];
        let candidates = &pools.iter().find(|(g, _)| *g == f).unwrap().1;
        // equal slots take increasing indices
        let start = if i > 0 && slots[i - 1] == slots[i] {
            chosen.last().unwrap().1 + 1
        } else {
            0
        };
        for idx in start..candidates.len() {
            if chosen.iter().any(|&(g, j)| g == f && j == idx) {
                continue;
            }
            let mut q = acc.clone();
            for _ in 0..e {
                q = conv(&q, &candidates[idx], p);
            }
            chosen.push((f, idx));
            rec(i + 1, slots, chosen, q, p, pools, out);
            chosen.pop();
        }
    }

    let mut out = Vec::new();
    rec(0, &slots, &mut Vec::new(), vec![1], p, &pools, &mut out);
    out
}

fn check_sigma(sigma: &SplittingType, n: usize) -> Result<()> {
    if sigma.degree() as usize > n {
        return Err(RecipError::Shape(format!("deg {sigma} > n = {n}")));
    }
    Ok(())
}

/// `w_{p,sigma}(F)`, counted by direct enumeration of factor tuples.
pub fn w_value(p: u64, sigma: &SplittingType, form: &BinaryFormModP) -> Result<u64> {
    if sigma.is_marked() {
        return Err(RecipError::Shape("w_value takes an unmarked type".into()));
    }
    check_sigma(sigma, form.n)?;
    Ok(products(p, &sigma.factors, Pool::Forms)
        .iter()
        .filter(|q| form.divisible_by(q))
        .count() as u64)
}

fn y_power(e: u32) -> Vec<u64> {
    let mut v = vec![1u64];
    for _ in 0..e {
        v = conv(&v, &[1, 0], u64::MAX);
    }
    v
}

/// `w'_{p,sigma}(F)`: tuples `(P_2, ..., P_r)` with `y^{e_1} P_2^{e_2} ... | F`.
pub fn w_pointed_value(p: u64, sigma: &SplittingType, form: &BinaryFormModP) -> Result<u64> {
    let e1 = sigma
        .e1()
        .ok_or_else(|| RecipError::Shape("w_pointed_value needs a marked type".into()))?;
    check_sigma(sigma, form.n)?;
    let yp = y_power(e1);
    Ok(products(p, &sigma.factors[1..], Pool::FormsNoY)
        .iter()
        .filter(|q| form.divisible_by(&conv(q, &yp, p)))
        .count() as u64)
}

// ---------------------------------------------------------------------------
// transforms

/// `p^{-dim} sum_t buckets[t] zeta_p^{-t}`, an element of `Q(zeta_p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSum {
    pub p: u64,
    pub dim: u32,
    pub buckets: Vec<u64>,
}

impl CharacterSum {
    fn denominator(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.dim as usize)
    }

    /// Coordinates on the basis `1, zeta, ..., zeta^{p-2}`.
    pub fn coordinates(&self) -> Vec<BigRational> {
        let p = self.p as usize;
        let den = self.denominator();
        let mut c = vec![BigInt::zero(); p];
        for (t, &b) in self.buckets.iter().enumerate() {
            c[(p - t) % p] += BigInt::from(b);
        }
        let top = c[p - 1].clone();
        (0..p - 1)
            .map(|i| BigRational::new(&c[i] - &top, den.clone()))
            .collect()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        let c = self.coordinates();
        c[1..].iter().all(|x| x.is_zero()).then(|| c[0].clone())
    }

    pub fn to_complex(&self) -> Complex64 {
        let scale = (self.p as f64).powi(-(self.dim as i32));
        self.buckets
            .iter()
            .enumerate()
            .map(|(t, &b)| Complex64::from_polar(b as f64, -2.0 * PI * t as f64 / self.p as f64))
            .sum::<Complex64>()
            * scale
    }

    pub fn abs(&self) -> f64 {
        match self.as_rational() {
            Some(q) => q.abs().to_f64().unwrap(),
            None => self.to_complex().norm(),
        }
    }
}

/// A set of functions on `F_p^dim` given as sums of indicators of cosets `a + W`.
struct CosetSum {
    p: u64,
    dim: usize,
    /// `(a, basis of W)`
    terms: Vec<(Vec<u64>, Vec<Vec<u64>>)>,
}

/// Exact transform table of a [`CosetSum`].
#[derive(Clone, Debug)]
pub struct FourierTable {
    pub p: u64,
    pub dim: usize,
    /// Buckets per frequency: 1 when every coset passes through 0, else `p`.
    width: usize,
    data: Vec<u64>,
}

impl FourierTable {
    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn value(&self, g: &[u64]) -> CharacterSum {
        self.value_at(encode(g, self.p))
    }

    pub fn value_at(&self, idx: usize) -> CharacterSum {
        CharacterSum {
            p: self.p,
            dim: self.dim as u32,
            buckets: self.data[idx * self.width..(idx + 1) * self.width].to_vec(),
        }
    }

    /// Frequencies in encoding order.
    pub fn frequencies(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.len()).map(move |i| decode(i, self.p, self.dim))
    }
}

impl CosetSum {
    fn transform(&self) -> Result<FourierTable> {
        let size = (self.p as u128).pow(self.dim as u32);
        if size > EXHAUSTIVE_BUDGET as u128 {
            return Err(RecipError::Resource(format!(
                "p^{} = {size} exceeds the exhaustive budget {EXHAUSTIVE_BUDGET}",
                self.dim
            )));
        }
        let affine = self.terms.iter().any(|(a, _)| a.iter().any(|&x| x != 0));
        let width = if affine { self.p as usize } else { 1 };
        let mut data = vec![0u64; size as usize * width];
        for (a, w) in &self.terms {
            let weight = self.p.pow(w.len() as u32);
            let perp = nullspace_mod_p(w, self.dim, self.p);
            for g in span_elements(&perp, self.dim, self.p) {
                let t = if affine { dot(a, &g, self.p) as usize } else { 0 };
                data[encode(&g, self.p) * width + t] += weight;
            }
        }
        Ok(FourierTable {
            p: self.p,
            dim: self.dim,
            width,
            data,
        })
    }
}

/// Multiples `Q h` of a form `q` of degree `m` inside forms of degree `n`.
fn form_multiples(q: &[u64], n: usize) -> Vec<Vec<u64>> {
    let m = q.len() - 1;
    (0..=n - m)
        .map(|j| {
            let mut v = vec![0u64; n + 1];
            v[j..j + m + 1].copy_from_slice(q);
            v
        })
        .collect()
}

/// Monic multiples `q h` of a monic `q` in lower coordinates: `(q u^{n-m} - u^n, {q u^j : j < n - m})`.
fn monic_multiples(q: &[u64], n: usize) -> (Vec<u64>, Vec<Vec<u64>>) {
    let m = q.len() - 1;
    let mut a = vec![0u64; n];
    a[n - m..n].copy_from_slice(&q[..m]);
    let w = (0..n - m)
        .map(|j| {
            let mut v = vec![0u64; n];
            v[j..j + m + 1].copy_from_slice(q);
            v
        })
        .collect();
    (a, w)
}

fn u_power(e: u32) -> Vec<u64> {
    let mut v = vec![0u64; e as usize + 1];
    v[e as usize] = 1;
    v
}

fn coset_sum(p: u64, n: usize, sigma: &SplittingType, pointed: bool, monic: bool) -> Result<CosetSum> {
    check_sigma(sigma, n)?;
    if pointed && !sigma.is_marked() {
        return Err(RecipError::Shape(format!("pointed transform needs a marked type, got {sigma}")));
    }
    if !pointed && sigma.is_marked() {
        return Err(RecipError::Shape(format!("unpointed transform needs an unmarked type, got {sigma}")));
    }
    let (rest, prefix, kind) = match (pointed, monic) {
        (false, false) => (&sigma.factors[..], vec![1u64], Pool::Forms),
        (false, true) => (&sigma.factors[..], vec![1u64], Pool::Monic),
        (true, false) => (&sigma.factors[1..], y_power(sigma.factors[0].1), Pool::FormsNoY),
        (true, true) => (&sigma.factors[1..], u_power(sigma.factors[0].1), Pool::MonicNoU),
    };
    let terms = products(p, rest, kind)
        .into_iter()
        .map(|q| {
            let q = conv(&q, &prefix, p);
            if monic {
                monic_multiples(&q, n)
            } else {
                (vec![0u64; n + 1], form_multiples(&q, n))
            }
        })
        .collect();
    Ok(CosetSum {
        p,
        dim: if monic { n } else { n + 1 },
        terms,
    })
}

/// Full transform of `w_{p,sigma}` (or `w'` when `pointed`) on binary forms, or on monic
/// polynomials identified with `F_p^n` through `f - u^n` when `monic`.
pub fn fourier_full(p: u64, n: usize, sigma: &SplittingType, pointed: bool, monic: bool) -> Result<FourierTable> {
    coset_sum(p, n, sigma, pointed, monic)?.transform()
}

/// `g` annihilates the multiples of `y^{e1}` (forms) or of `u^{e1}` (monic, lower coordinates).
pub fn in_pointed_support(g: &[u64], e1: u32, monic: bool) -> bool {
    let e1 = e1 as usize;
    if monic {
        g.iter().skip(e1).all(|&c| c == 0)
    } else {
        let n = g.len() - 1;
        g.iter().take(n + 1 - e1.min(n + 1)).all(|&c| c == 0)
    }
}

fn rat_to_string(q: &BigRational) -> String {
    q.to_string()
}

#[derive(Clone, Debug, Serialize)]
pub struct FourierReport {
    pub p: u64,
    pub n: usize,
    pub sigma: String,
    pub pointed: bool,
    pub monic: bool,
    pub index: u32,
    pub aut: u64,
    /// `p^{-k} / #Aut` or `p^{-(k+1)} / #Aut'`.
    pub main_term: String,
    pub zero_value: String,
    pub zero_value_f64: f64,
    /// Largest `|w^(g) - main|` over the support of the main term.
    pub max_on_support_error: f64,
    /// Largest `|w^(g)|` off that support.
    pub max_off_support: f64,
    /// Error scales: main-term error and off-support decay.
    pub main_scale: f64,
    pub off_scale: f64,
    pub envelope_constant: f64,
    pub within_envelope: bool,
}

/// Transform and compare with the main terms and decay rates.
pub fn fourier_report(p: u64, n: usize, sigma: &SplittingType, pointed: bool, monic: bool) -> Result<FourierReport> {
    let table = fourier_full(p, n, sigma, pointed, monic)?;
    let k = sigma.index() as i32;
    let d = sigma.degree() as usize;
    let pf = p as f64;
    let aut = sigma.aut_j();
    let (main, main_scale, off_exp) = if pointed {
        let main = BigRational::new(BigInt::one(), BigInt::from(aut) * num_traits::pow(BigInt::from(p), (k + 1) as usize));
        let off = if monic && d == n { k as f64 + 1.5 } else { (k + 2) as f64 };
        (main, pf.powi(-(k + 2)), off)
    } else {
        let main = BigRational::new(BigInt::one(), BigInt::from(aut) * num_traits::pow(BigInt::from(p), k as usize));
        let off = if monic && d == n { k as f64 + 0.5 } else { (k + 1) as f64 };
        (main, pf.powi(-(k + 1)), off)
    };
    let off_scale = pf.powf(-off_exp);
    let zero = table.value_at(0).as_rational().expect("real at zero");
    let main_f = main.to_f64().unwrap();
    let e1 = sigma.e1().unwrap_or(0);

    let mut on_err: f64 = (&zero - &main).abs().to_f64().unwrap();
    let mut off_max: f64 = 0.0;
    for (idx, g) in table.frequencies().enumerate().skip(1) {
        let v = table.value_at(idx);
        let on = pointed && in_pointed_support(&g, e1, monic);
        if on {
            let err = match v.as_rational() {
                Some(q) => (q - &main).abs().to_f64().unwrap(),
                None => (v.to_complex() - main_f).norm(),
            };
            on_err = on_err.max(err);
        } else {
            off_max = off_max.max(v.abs());
        }
    }
    let c = (on_err / main_scale).max(off_max / off_scale);
    Ok(FourierReport {
        p,
        n,
        sigma: sigma.to_string(),
        pointed,
        monic,
        index: k as u32,
        aut,
        main_term: rat_to_string(&main),
        zero_value: rat_to_string(&zero),
        zero_value_f64: zero.to_f64().unwrap(),
        max_on_support_error: on_err,
        max_off_support: off_max,
        main_scale,
        off_scale,
        envelope_constant: c,
        within_envelope: c <= ENVELOPE,
    })
}

/// Unmarked types of degree `<= n` and index `<= max_index`.
pub fn types_up_to(n: usize, max_index: u32) -> Vec<SplittingType> {
    (1..=n as u32)
        .flat_map(SplittingType::all_of_degree)
        .filter(|s| s.index() <= max_index)
        .collect()
}

/// Every way of marking one linear factor (up to equal multiplicities).
pub fn markings(sigma: &SplittingType) -> Vec<SplittingType> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, &(f, e)) in sigma.factors.iter().enumerate() {
        if f != 1 || !seen.insert(e) {
            continue;
        }
        let mut rest = sigma.factors.clone();
        rest.remove(i);
        out.push(SplittingType::marked(e, rest, Mark::Plus2).unwrap());
    }
    out
}

// ---------------------------------------------------------------------------
// lattices

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeCase {
    A,
    B,
    C,
}

impl LatticeCase {
    pub fn from_mark(mark: Mark) -> Self {
        match mark {
            Mark::None => LatticeCase::A,
            Mark::Plus2 => LatticeCase::B,
            Mark::Minus2 => LatticeCase::C,
        }
    }

    fn point(self) -> i64 {
        match self {
            LatticeCase::A => 0,
            LatticeCase::B => 2,
            LatticeCase::C => -2,
        }
    }
}

/// `L = { x in Z^dim : r . x = 0 (mod p) for every row r }`.
#[derive(Clone, Debug, Serialize)]
pub struct Lattice {
    pub p: u64,
    pub dim: usize,
    pub congruences: Vec<Vec<u64>>,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub index: BigInt,
    /// Columns form a basis of `L`.
    pub basis: Vec<Vec<i64>>,
    /// Generators of `L^*` beyond `Z^dim`, each to be divided by `p`.
    pub dual_generators: Vec<Vec<u64>>,
}

impl Lattice {
    pub fn from_congruences(p: u64, dim: usize, rows: Vec<Vec<u64>>) -> Self {
        let (reduced, pivots) = rref(&rows, dim, p);
        let kernel = nullspace_mod_p(&reduced, dim, p);
        let mut basis: Vec<Vec<i64>> = kernel.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect();
        for &pc in &pivots {
            let mut v = vec![0i64; dim];
            v[pc] = p as i64;
            basis.push(v);
        }
        Lattice {
            p,
            dim,
            index: num_traits::pow(BigInt::from(p), pivots.len()),
            congruences: reduced.clone(),
            basis,
            dual_generators: reduced,
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let pi = self.p as i64;
        self.congruences
            .iter()
            .all(|r| r.iter().zip(x).map(|(&a, &b)| a as i64 * b.rem_euclid(pi)).sum::<i64>() % pi == 0)
    }
}

/// `L_p` on coefficient vectors `(b_0, ..., b_n)`: in cases b/c the Taylor coefficients of
/// order `< e1` at `u = 2` or `u = -2` vanish mod `p`.
pub fn lattice_lp(p: u64, case: LatticeCase, e1: u32, n: usize) -> Result<Lattice> {
    if case != LatticeCase::A && e1 == 0 {
        return Err(RecipError::Domain("cases b and c need e1 >= 1".into()));
    }
    let rows = match case {
        LatticeCase::A => vec![],
        _ => {
            let s = case.point().rem_euclid(p as i64) as u64;
            (0..e1 as usize)
                .map(|i| (0..=n).map(|j| binom_mod(j, i, p) * pow_mod(s, j.saturating_sub(i), p) % p * u64::from(j >= i) % p).collect())
                .collect()
        }
    };
    Ok(Lattice::from_congruences(p, n + 1, rows))
}

fn binom_mod(n: usize, k: usize, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut r = 1u128;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    (r % p as u128) as u64
}

fn pow_mod(b: u64, e: usize, p: u64) -> u64 {
    crate::arith::powmod(b, e as u64, p)
}

// ---------------------------------------------------------------------------
// twisted Poisson summation

/// Full-rank sublattice of `Z^dim` given by an integer basis (columns).
#[derive(Clone, Debug)]
pub struct IntLattice {
    pub basis: Vec<Vec<i64>>,
}

impl IntLattice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Rows of `B`.
    fn matrix(&self) -> Vec<Vec<i64>> {
        let d = self.dim();
        (0..d).map(|r| (0..d).map(|c| self.basis[c][r]).collect()).collect()
    }

    fn det(&self) -> i64 {
        det_i64(&self.matrix())
    }

    pub fn index(&self) -> i64 {
        self.det().abs()
    }

    /// `adj(B)`, so that `B^{-1} = adj(B) / det B`.
    fn adjugate(&self) -> Vec<Vec<i64>> {
        let m = self.matrix();
        let d = m.len();
        if d == 1 {
            return vec![vec![1]];
        }
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let minor: Vec<Vec<i64>> = (0..d)
                            .filter(|&r| r != j)
                            .map(|r| (0..d).filter(|&c| c != i).map(|c| m[r][c]).collect())
                            .collect();
                        let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                        s * det_i64(&minor)
                    })
                    .collect()
            })
            .collect()
    }

    /// `x = B k` with integral `k`.
    pub fn contains(&self, x: &[i64]) -> bool {
        let det = self.det();
        self.adjugate()
            .iter()
            .all(|row| row.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() % det == 0)
    }

    /// `z / index` lies in `L^*`, i.e. `B^T z` is divisible by the index.
    pub fn dual_contains_scaled(&self, z: &[i64]) -> bool {
        let idx = self.index();
        self.basis
            .iter()
            .all(|b| b.iter().zip(z).map(|(a, c)| a * c).sum::<i64>() % idx == 0)
    }
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect()).collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * det_i64(&minor)
        })
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct PoissonReport {
    pub dim: usize,
    pub index: i64,
    pub modulus: u64,
    pub width: f64,
    pub lhs: (f64, f64),
    pub rhs: (f64, f64),
    pub residual: f64,
}

/// Integer vectors `k` with `|k_i| <= bounds[i]`.
fn box_points(bounds: &[i64]) -> impl Iterator<Item = Vec<i64>> + '_ {
    let total: usize = bounds.iter().map(|&b| (2 * b + 1) as usize).product();
    (0..total).map(move |mut idx| {
        bounds
            .iter()
            .map(|&b| {
                let side = (2 * b + 1) as usize;
                let v = (idx % side) as i64 - b;
                idx /= side;
                v
            })
            .collect()
    })
}

fn norm(v: &[i64]) -> f64 {
    v.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt()
}

/// Both sides of twisted Poisson summation with `Phi(x) = exp(-pi |x|^2 / w^2)`.
///
/// `psi` is indexed by `x mod M` with the first coordinate varying fastest. The left side
/// sums `Psi Phi` over `L`; the right side sums `Psi^(y) Phi^(y / M)` over `L^*` and divides
/// by the index.
pub fn twisted_poisson_check(lattice: &IntLattice, modulus: u64, psi: &[Complex64], width: f64) -> Result<PoissonReport> {
    let dim = lattice.dim();
    if dim == 0 || lattice.basis.iter().any(|b| b.len() != dim) {
        return Err(RecipError::Shape("basis must be square".into()));
    }
    let m = modulus as i64;
    let det = lattice.det();
    let index = det.abs();
    if index == 0 {
        return Err(RecipError::Domain("degenerate lattice".into()));
    }
    if modulus == 0 || num_integer::gcd(index, m) != 1 {
        return Err(RecipError::Domain(format!("modulus {m} is not coprime to the index {index}")));
    }
    let md = modulus as usize;
    if psi.len() != md.pow(dim as u32) {
        return Err(RecipError::Shape(format!("psi needs M^dim = {} values", md.pow(dim as u32))));
    }
    if width.is_nan() || width <= 0.0 {
        return Err(RecipError::Domain("width must be positive".into()));
    }
    let enc = |x: &[i64]| x.iter().rev().fold(0usize, |acc, &c| acc * md + c.rem_euclid(m) as usize);
    let adj = lattice.adjugate();

    // exp(-pi t^2) < 1e-17
    let t = (17.0 * 10f64.ln() / PI).sqrt() + 0.5;

    // x = B k, k = adj x / det
    let r = t * width;
    let kb: Vec<i64> = adj.iter().map(|row| (norm(row) * r / index as f64).ceil() as i64).collect();
    let mut lhs = Complex64::new(0.0, 0.0);
    for k in box_points(&kb) {
        let x: Vec<i64> = (0..dim).map(|i| (0..dim).map(|j| lattice.basis[j][i] * k[j]).sum()).collect();
        let n2: f64 = x.iter().map(|&c| (c * c) as f64).sum();
        if n2 <= r * r {
            lhs += psi[enc(&x)] * (-PI * n2 / (width * width)).exp();
        }
    }

    let all: Vec<Vec<i64>> = (0..psi.len()).map(|i| decode(i, modulus, dim).into_iter().map(|c| c as i64).collect()).collect();
    let scale = (md as f64).powi(-(dim as i32));
    let psi_hat: Vec<Complex64> = all
        .iter()
        .map(|y| {
            all.iter()
                .zip(psi)
                .map(|(x, &v)| {
                    let d = x.iter().zip(y).map(|(a, b)| a * b).sum::<i64>().rem_euclid(m);
                    v * Complex64::from_polar(1.0, -2.0 * PI * d as f64 / m as f64)
                })
                .sum::<Complex64>()
                * scale
        })
        .collect();

    // y = B^{-T} k for integral k = B^T y; index * y = sign(det) adj^T k
    let inv = num_integer::Integer::extended_gcd(&index.rem_euclid(m), &m).x.rem_euclid(m);
    let ry = t * m as f64 / width;
    let kb: Vec<i64> = lattice.basis.iter().map(|b| (norm(b) * ry).ceil() as i64).collect();
    let sign = det.signum();
    let mut rhs = Complex64::new(0.0, 0.0);
    for k in box_points(&kb) {
        let z: Vec<i64> = (0..dim).map(|i| sign * (0..dim).map(|j| adj[j][i] * k[j]).sum::<i64>()).collect();
        let n2 = z.iter().map(|&c| (c * c) as f64).sum::<f64>() / (index * index) as f64;
        if n2 > ry * ry {
            continue;
        }
        let phi_hat = width.powi(dim as i32) * (-PI * width * width * n2 / (m * m) as f64).exp();
        let key: Vec<i64> = z.iter().map(|&c| (c * inv).rem_euclid(m)).collect();
        rhs += psi_hat[enc(&key)] * phi_hat;
    }
    rhs /= index as f64;
    Ok(PoissonReport {
        dim,
        index,
        modulus,
        width,
        lhs: (lhs.re, lhs.im),
        rhs: (rhs.re, rhs.im),
        residual: (lhs - rhs).norm(),
    })
}

// ---------------------------------------------------------------------------
// Lambda + Delta

#[derive(Clone, Debug, Serialize)]
pub struct LambdaDeltaReport {
    pub p: u64,
    pub n: usize,
    pub sigma: String,
    pub case: LatticeCase,
    pub lattice_index: String,
    pub k_p: u32,
    pub a_p: String,
    pub a_hat: String,
    /// `a_p <= 1`
    pub a_p_at_most_one: bool,
    /// `a^_p <= p^{-2 k_p}`
    pub a_hat_bound: bool,
    pub max_delta_hat: String,
    pub delta_scale: f64,
    pub delta_constant: f64,
    pub lattice: Lattice,
}

/// Image of the form `x^i y^{n-i}` under `F(x, y) -> F(1, u - s)`: the vector of `(u - s)^{n-i}`.
fn translation_images(p: u64, n: usize, s: i64) -> Vec<Vec<u64>> {
    let s = s.rem_euclid(p as i64) as u64;
    (0..=n)
        .map(|i| {
            let e = n - i;
            let mut v = vec![0u64; n + 1];
            // (u - s)^e = sum_j C(e, j) u^j (-s)^{e-j}
            for (j, c) in v.iter_mut().enumerate().take(e + 1) {
                let sign = if (e - j) % 2 == 1 { p - 1 } else { 1 };
                *c = binom_mod(e, j, p) * pow_mod(s, e - j, p) % p * sign % p;
            }
            v
        })
        .collect()
}

fn apply_images(images: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; images[0].len()];
    for (c, img) in v.iter().zip(images) {
        for (o, &x) in out.iter_mut().zip(img) {
            *o = (*o + c * x) % p;
        }
    }
    out
}

/// `Psi_p = Lambda_p + Delta_p` for an annotated type in the coordinates `(b_0, ..., b_n)`.
pub fn lambda_delta_split(p: u64, n: usize, sigma: &SplittingType) -> Result<LambdaDeltaReport> {
    if p as usize <= n {
        return Err(RecipError::Domain(format!("need p > n, got p = {p}, n = {n}")));
    }
    let pointed = sigma.is_marked();
    let case = LatticeCase::from_mark(sigma.mark);
    let mut sum = coset_sum(p, n, sigma, pointed, false)?;
    if pointed {
        let images = translation_images(p, n, case.point());
        for (_, w) in sum.terms.iter_mut() {
            for v in w.iter_mut() {
                *v = apply_images(&images, v, p);
            }
        }
    }
    let table = sum.transform()?;
    let e1 = sigma.e1().unwrap_or(0);
    let lattice = lattice_lp(p, case, e1, n)?;
    let ind = sigma.index();
    let j = sigma.j();
    let k_p = if pointed { ind.div_ceil(2) } else { ind / 2 };
    let pb = BigInt::from(p);
    let aut = BigInt::from(sigma.aut_j());
    let a_hat = BigRational::new(BigInt::one(), &aut * num_traits::pow(pb.clone(), (ind + j) as usize));
    let a_p = &a_hat * BigRational::from_integer(lattice.index.clone());

    let perp: BTreeSet<usize> = span_elements(&lattice.dual_generators, n + 1, p)
        .iter()
        .map(|g| encode(g, p))
        .collect();
    let mut max_delta = BigRational::zero();
    for idx in 0..table.len() {
        let v = table.value_at(idx).as_rational().expect("rational transform");
        let lambda = if perp.contains(&idx) { a_hat.clone() } else { BigRational::zero() };
        let d = (v - lambda).abs();
        if d > max_delta {
            max_delta = d;
        }
    }
    let bound = BigRational::new(BigInt::one(), num_traits::pow(pb.clone(), (2 * k_p + 1) as usize));
    let hat_bound = BigRational::new(BigInt::one(), num_traits::pow(pb, (2 * k_p) as usize));
    Ok(LambdaDeltaReport {
        p,
        n,
        sigma: sigma.to_string(),
        case,
        lattice_index: lattice.index.to_string(),
        k_p,
        a_p_at_most_one: a_p <= BigRational::one(),
        a_hat_bound: a_hat <= hat_bound,
        a_p: a_p.to_string(),
        a_hat: a_hat.to_string(),
        delta_constant: (&max_delta / &bound).to_f64().unwrap(),
        max_delta_hat: max_delta.to_string(),
        delta_scale: bound.to_f64().unwrap(),
        lattice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn st(s: &str) -> SplittingType {
        s.parse().unwrap()
    }

    fn form(p: u64, c: &[u64]) -> BinaryFormModP {
        BinaryFormModP::new(p, c.len() - 1, c.to_vec()).unwrap()
    }

    #[test]
    fn irreducible_counts() {
        // necklace counts: (p^2 - p)/2 quadratics, (p^3 - p)/3 cubics
        for p in [2u64, 3, 5, 7] {
            assert_eq!(monic_irreducibles(p, 1).len() as u64, p);
            assert_eq!(monic_irreducibles(p, 2).len() as u64, (p * p - p) / 2);
            assert_eq!(monic_irreducibles(p, 3).len() as u64, (p * p * p - p) / 3);
        }
    }

    #[test]
    fn w_examples() {
        let p = 3;
        for s in ["1", "1^2", "1,1", "2"] {
            assert!(w_value(p, &st(s), &form(p, &[0, 0, 0])).unwrap() >= 1);
        }
        // x^2: the linear forms are y, x, x+y, x+2y; only x divides twice
        assert_eq!(w_value(p, &st("1^2"), &form(p, &[0, 0, 1])).unwrap(), 1);
        assert_eq!(w_value(p, &st("1,1"), &form(p, &[0, 0, 1])).unwrap(), 0);
        // x y: {x, y}
        assert_eq!(w_value(p, &st("1,1"), &form(p, &[0, 1, 0])).unwrap(), 1);
        // x^2 + y^2 is irreducible mod 3
        assert_eq!(w_value(p, &st("2"), &form(p, &[1, 0, 1])).unwrap(), 1);
        assert_eq!(w_value(p, &st("1"), &form(p, &[1, 0, 1])).unwrap(), 0);
        assert!(w_value(p, &st("1,1,1"), &form(p, &[1, 0, 1])).is_err());
    }

    #[test]
    fn pointed_examples() {
        let p = 5;
        let s = st("1^2,1@+2");
        // y^2 x
        assert_eq!(w_pointed_value(p, &s, &form(p, &[0, 1, 0, 0])).unwrap(), 1);
        // y^3: P_2 may not be y
        assert_eq!(w_pointed_value(p, &s, &form(p, &[1, 0, 0, 0])).unwrap(), 0);
        // F(1, 0) != 0
        assert_eq!(w_pointed_value(p, &s, &form(p, &[0, 0, 0, 1])).unwrap(), 0);
        assert!(w_pointed_value(p, &s, &form(p, &[0, 0, 0, 0])).unwrap() >= 1);
        assert!(w_pointed_value(p, &st("1,1"), &form(p, &[0, 0, 1])).is_err());
        // reduction to the cofactor: w'(y^e F) = w-breve of sigma' at F
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let c: Vec<u64> = (0..2).map(|_| rng.gen_range(0..p)).collect();
            let mut full = c.clone();
            full.extend([0, 0]);
            let lhs = w_pointed_value(p, &s, &form(p, &full)).unwrap();
            let cof = form(p, &c);
            let rhs = products(p, &[(1, 1)], Pool::FormsNoY).iter().filter(|q| cof.divisible_by(q)).count() as u64;
            if c[0] != 0 || c[1] != 0 {
                assert_eq!(lhs, rhs, "{c:?}");
            }
        }
    }

    fn brute_transform(p: u64, n: usize, sigma: &SplittingType, pointed: bool) -> Vec<BigRational> {
        let dim = n + 1;
        let total = (p as usize).pow(dim as u32);
        let w: Vec<u64> = (0..total)
            .map(|i| {
                let f = form(p, &decode(i, p, dim));
                if pointed {
                    w_pointed_value(p, sigma, &f).unwrap()
                } else {
                    w_value(p, sigma, &f).unwrap()
                }
            })
            .collect();
        (0..total)
            .map(|gi| {
                let g = decode(gi, p, dim);
                let mut buckets = vec![0u64; p as usize];
                for (fi, &wf) in w.iter().enumerate() {
                    buckets[dot(&decode(fi, p, dim), &g, p) as usize] += wf;
                }
                CharacterSum { p, dim: dim as u32, buckets }.as_rational().unwrap()
            })
            .collect()
    }

    #[test]
    fn transform_matches_brute_force() {
        for (p, n) in [(3u64, 2usize), (3, 3), (5, 2)] {
            for s in types_up_to(n, 2) {
                let t = fourier_full(p, n, &s, false, false).unwrap();
                let brute = brute_transform(p, n, &s, false);
                for (i, b) in brute.iter().enumerate() {
                    assert_eq!(&t.value_at(i).as_rational().unwrap(), b, "{s} at {i}");
                }
                for m in markings(&s) {
                    let t = fourier_full(p, n, &m, true, false).unwrap();
                    let brute = brute_transform(p, n, &m, true);
                    for (i, b) in brute.iter().enumerate() {
                        assert_eq!(&t.value_at(i).as_rational().unwrap(), b, "{m} at {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn monic_transform_matches_brute_force() {
        let p = 3u64;
        let n = 3usize;
        for s in types_up_to(n, 2) {
            let t = fourier_full(p, n, &s, false, true).unwrap();
            let prods = products(p, &s.factors, Pool::Monic);
            for gi in 0..t.len() {
                let g = decode(gi, p, n);
                let mut buckets = vec![0u64; p as usize];
                for fi in 0..(p as usize).pow(n as u32) {
                    let mut f = decode(fi, p, n);
                    f.push(1);
                    let fp = FpPoly::new(p, f);
                    let w = prods.iter().filter(|q| fp.rem(&FpPoly::new(p, q.to_vec())).is_zero()).count() as u64;
                    buckets[dot(&decode(fi, p, n), &g, p) as usize] += w;
                }
                let brute = CharacterSum { p, dim: n as u32, buckets };
                assert_eq!(t.value_at(gi).coordinates(), brute.coordinates(), "{s} at {g:?}");
            }
        }
    }

    #[test]
    fn double_transform_is_reflection() {
        let (p, n) = (3u64, 2usize);
        let dim = n + 1;
        for s in types_up_to(n, 2) {
            let t = fourier_full(p, n, &s, false, false).unwrap();
            let vals: Vec<BigRational> = (0..t.len()).map(|i| t.value_at(i).as_rational().unwrap()).collect();
            for h in 0..t.len() {
                let hv = decode(h, p, dim);
                // sum_g w^(g) zeta^{-g.h}; w^ is even, so the sum is rational
                let mut by_t = vec![BigRational::zero(); p as usize];
                for (g, v) in vals.iter().enumerate() {
                    by_t[dot(&decode(g, p, dim), &hv, p) as usize] += v;
                }
                let twice = (&by_t[0] - &by_t[1]) / BigRational::from_integer(BigInt::from(p.pow(dim as u32)));
                for tt in 2..p as usize {
                    assert_eq!(by_t[tt], by_t[1]);
                }
                let neg: Vec<u64> = hv.iter().map(|&c| (p - c) % p).collect();
                let w = w_value(p, &s, &form(p, &neg)).unwrap();
                let expect = BigRational::new(BigInt::from(w), BigInt::from(p.pow(dim as u32)));
                assert_eq!(twice, expect);
            }
        }
    }

    #[test]
    fn reference_examples() {
        let r = fourier_report(3, 2, &st("1,1"), false, false).unwrap();
        assert_eq!(r.aut, 2);
        assert_eq!(r.zero_value, "2/3");
        let r = fourier_report(5, 2, &st("1^2"), false, false).unwrap();
        assert!((r.zero_value_f64 - 0.2).abs() <= 4.0 / 25.0);
        let r = fourier_report(5, 3, &st("1^2,1@+2"), true, false).unwrap();
        assert!(r.within_envelope, "{r:?}");
    }

    #[test]
    fn lattice_examples() {
        let l = lattice_lp(3, LatticeCase::A, 0, 2).unwrap();
        assert_eq!(l.index, BigInt::one());
        let l = lattice_lp(3, LatticeCase::B, 1, 2).unwrap();
        assert_eq!(l.index, BigInt::from(3));
        // u^2 - 4 vanishes at 2
        assert!(l.contains(&[-4, 0, 1]));
        assert!(!l.contains(&[1, 0, 1]));
        let l = lattice_lp(5, LatticeCase::C, 2, 3).unwrap();
        assert_eq!(l.index, BigInt::from(25));
        // (u + 2)^2 u
        assert!(l.contains(&[0, 4, 4, 1]));
        assert!(!l.contains(&[4, 4, 1, 0].iter().map(|&x| x + 1).collect::<Vec<_>>()));
        assert_eq!(l.basis.len(), 4);
        assert!(lattice_lp(5, LatticeCase::B, 0, 3).is_err());
    }

    #[test]
    fn lattice_counts() {
        // direct count of residues in L mod p
        for (case, e1, n, p) in [(LatticeCase::B, 1u32, 2usize, 3u64), (LatticeCase::C, 2, 3, 5), (LatticeCase::B, 3, 3, 5)] {
            let l = lattice_lp(p, case, e1, n).unwrap();
            let total = (p as usize).pow(n as u32 + 1);
            let inside = (0..total).filter(|&i| l.contains(&decode(i, p, n + 1).iter().map(|&x| x as i64).collect::<Vec<_>>())).count();
            assert_eq!(BigInt::from(total / inside), l.index);
        }
    }

    #[test]
    fn poisson_examples() {
        let z1 = IntLattice { basis: vec![vec![1]] };
        let r = twisted_poisson_check(&z1, 1, &[Complex64::new(1.0, 0.0)], 2.0).unwrap();
        assert!(r.residual <= 1e-9, "{r:?}");
        let l = IntLattice { basis: vec![vec![2]] };
        let psi: Vec<Complex64> = (0..3).map(|i| Complex64::new(if i == 1 { 1.0 } else { 0.0 }, 0.0)).collect();
        let r = twisted_poisson_check(&l, 3, &psi, 1.7).unwrap();
        assert!(r.residual <= 1e-9, "{r:?}");
        let l = IntLattice { basis: vec![vec![2, 0], vec![1, 2]] };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let psi: Vec<Complex64> = (0..25).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
        let r = twisted_poisson_check(&l, 5, &psi, 2.3).unwrap();
        assert!(r.residual <= 1e-9, "{r:?}");
        assert!(twisted_poisson_check(&l, 2, &psi[..4], 2.0).is_err());
    }

    #[test]
    fn lambda_delta_examples() {
        let r = lambda_delta_split(3, 2, &st("1^2@+2")).unwrap();
        assert!(r.a_p_at_most_one && r.a_hat_bound);
        assert!(r.delta_constant.is_finite());
        for s in ["1,1", "1^2", "2", "1^2,1", "1^3"] {
            let s = st(s);
            if s.degree() > 3 {
                continue;
            }
            let r = lambda_delta_split(5, 3, &s).unwrap();
            assert!(r.a_p_at_most_one && r.a_hat_bound, "{r:?}");
            for m in markings(&s) {
                for mark in [Mark::Plus2, Mark::Minus2] {
                    let r = lambda_delta_split(5, 3, &m.with_mark(mark).unwrap()).unwrap();
                    assert!(r.a_p_at_most_one && r.a_hat_bound, "{r:?}");
                }
            }
        }
    }
}
