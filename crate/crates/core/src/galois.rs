//! Containment tests for the Galois group of a reciprocal polynomial.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use crate::arith::is_square_int;
use crate::arith::{primes_from, squarefree_part};
use crate::error::{RecipError, Result};
use crate::ff::{big_to_mod, factor, factor_shape, roots, sqrt_mod, FpPoly};
use crate::poly::{discriminant, symmetrize, IntPoly, SymPair};
use crate::wreath::{cycle_type_distribution, standard_subgroup, Tag};
use crate::zfactor::{is_irreducible, is_reducible};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SnCertificate {
    Certified,
    Refuted,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum G3Flag {
    Yes,
    No,
    NotApplicable,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budgets {
    /// Primes scanned by the certificate, the `G_3` test and the fingerprint.
    pub prime_budget: usize,
    pub fingerprint: bool,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            prime_budget: 1000,
            fingerprint: true,
        }
    }
}

/// `g(2) g(-2)`, after checking `deg g = n`, `g(2) g(-2) != 0` and `disc g != 0`.
fn checked_norm(pair: &SymPair) -> Result<(BigInt, BigInt)> {
    if !pair.full_degree() {
        return Err(RecipError::Separability(format!(
            "deg g = {:?} < n = {}",
            pair.g.degree(),
            pair.n
        )));
    }
    let m = pair.g.eval_i64(2) * pair.g.eval_i64(-2);
    if m.is_zero() {
        return Err(RecipError::Separability("g(2) g(-2) = 0".into()));
    }
    let d = discriminant(&pair.g)?;
    if d.is_zero() {
        return Err(RecipError::Separability("disc g = 0".into()));
    }
    Ok((m, d))
}

/// `g(2) g(-2)` is a square.
pub fn g1_flag(pair: &SymPair) -> Result<bool> {
    let (m, _) = checked_norm(pair)?;
    Ok(is_square_int(&m))
}

/// `g(2) g(-2) disc g` is a square.
pub fn g2_flag(pair: &SymPair) -> Result<bool> {
    let (m, d) = checked_norm(pair)?;
    Ok(is_square_int(&(m * d)))
}

/// Frobenius cycle type of a squarefree `f` at a prime not dividing `lc(f) disc(f)`.
fn cycle_shape(f: &IntPoly, p: u64) -> Vec<usize> {
    let mut t: Vec<usize> = factor_shape(&FpPoly::from_int(f, p))
        .into_iter()
        .map(|(d, _)| d)
        .collect();
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

fn divides(p: u64, m: &BigInt) -> bool {
    big_to_mod(m, p) == 0
}

fn is_small_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Dedekind certificate that `Gal(g) = S_n`.
///
/// Refutes when `g` is reducible or (for `n >= 2`) has square discriminant. For `n >= 4`
/// certifies once Frobenius elements provide a transposition power and either an
/// `(n-1)`-cycle or a prime `q`-cycle power with `n/2 < q <= n - 3`.
pub fn sn_certificate(g: &IntPoly, prime_budget: usize) -> SnCertificate {
    let Some(n) = g.degree() else {
        return SnCertificate::Refuted;
    };
    if n == 0 || !is_irreducible(g) {
        return SnCertificate::Refuted;
    }
    if n == 1 {
        return SnCertificate::Certified;
    }
    let disc = discriminant(g).unwrap();
    if is_square_int(&disc) {
        return SnCertificate::Refuted;
    }
    if n <= 3 {
        return SnCertificate::Certified;
    }
    let bad = &disc * g.lc().unwrap();
    let (mut transposition, mut primitive) = (false, false);
    for p in primes_from(2).filter(|&p| !divides(p, &bad)).take(prime_budget) {
        let t = cycle_shape(g, p);
        let even: Vec<usize> = t.iter().copied().filter(|d| d % 2 == 0).collect();
        transposition |= even == [2];
        primitive |= t == [n - 1, 1]
            || t.iter().any(|&q| 2 * q > n && q + 3 <= n && is_small_prime(q));
        if transposition && primitive {
            return SnCertificate::Certified;
        }
    }
    SnCertificate::Undetermined
}

// ---------------------------------------------------------------------------
// G_3

/// `b_n^{n-1} g(u / b_n)`, monic with roots `b_n beta`.
pub fn monic_model(g: &IntPoly) -> IntPoly {
    let n = g.degree().expect("nonzero g");
    let bn = g.lc().unwrap().clone();
    let c = (0..=n)
        .map(|i| {
            if i == n {
                BigInt::one()
            } else {
                g.coeff(i) * num_traits::pow(bn.clone(), n - 1 - i)
            }
        })
        .collect();
    IntPoly::new(c)
}

fn eval_mod(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = (acc * x + a).mod_floor(m);
    }
    acc
}

fn symmetric(a: BigInt, m: &BigInt) -> BigInt {
    let a = a.mod_floor(m);
    if &a * 2 > *m {
        a - m
    } else {
        a
    }
}

/// Polynomial through `(xs[i], ys[i])` modulo `m`, with `xs[i] - xs[j]` invertible.
fn lagrange_mod(xs: &[BigInt], ys: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = xs.len();
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        let mut basis = vec![BigInt::one()];
        let mut denom = BigInt::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            // basis *= (u - xs[j])
            let mut next = vec![BigInt::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * &xs[j];
            }
            basis = next.into_iter().map(|c| c.mod_floor(m)).collect();
            denom = (denom * (&xs[i] - &xs[j])).mod_floor(m);
        }
        let scale = (&ys[i] * denom.modinv(m).expect("distinct roots")).mod_floor(m);
        for (k, b) in basis.iter().enumerate() {
            out[k] = (&out[k] + b * &scale).mod_floor(m);
        }
    }
    out
}

/// Roots of `gm` and square roots of `t` at them, lifted from `p` to `p^(2^steps)`.
fn lift(
    gm: &IntPoly,
    t: &IntPoly,
    p: u64,
    roots0: &[u64],
    sqrts0: &[u64],
    steps: u32,
) -> (BigInt, Vec<BigInt>, Vec<BigInt>) {
    let dg = gm.derivative();
    let mut m = BigInt::from(p);
    let mut rs: Vec<BigInt> = roots0.iter().map(|&r| BigInt::from(r)).collect();
    let mut ss: Vec<BigInt> = sqrts0.iter().map(|&s| BigInt::from(s)).collect();
    for _ in 0..steps {
        m = &m * &m;
        for (r, s) in rs.iter_mut().zip(ss.iter_mut()) {
            let fr = eval_mod(gm.coeffs(), r, &m);
            let dr = eval_mod(dg.coeffs(), r, &m);
            *r = (&*r - fr * dr.modinv(&m).unwrap()).mod_floor(&m);
            let a = eval_mod(t.coeffs(), r, &m);
            let two_s: BigInt = (&*s * 2u32).mod_floor(&m);
            *s = (&*s - (&*s * &*s - a) * two_s.modinv(&m).unwrap()).mod_floor(&m);
        }
    }
    (m, rs, ss)
}

/// `t` is a square in `F_p[u]/(q)` for every irreducible factor `q` of `gm mod p`.
fn locally_square(gm: &IntPoly, t: &IntPoly, p: u64) -> bool {
    let tp = FpPoly::from_int(t, p);
    for (q, _) in factor(&FpPoly::from_int(gm, p)) {
        let d = q.degree().unwrap() as u32;
        let r = tp.rem(&q);
        if r.is_zero() {
            continue;
        }
        let e = (BigUint::from(p).pow(d) - 1u32) / 2u32;
        if !r.powmod(&e, &q).is_one() {
            return false;
        }
    }
    true
}

const G3_PREFILTER_PRIMES: usize = 20;
const G3_MAX_LIFT_STEPS: u32 = 12;

/// Whether `G_f` lies in a conjugate of `<1> x S_n`, decided by the squareness of
/// `k (beta^2 - 4)` in `Q(beta)` with `k = sqfree(g(2) g(-2))`.
pub fn g3_flag(pair: &SymPair, prime_budget: usize) -> Result<G3Flag> {
    Ok(g3_test(pair, prime_budget)?.0)
}

/// [`g3_flag`] together with the candidate `k`.
pub fn g3_test(pair: &SymPair, prime_budget: usize) -> Result<(G3Flag, Option<BigInt>)> {
    let n = pair.n;
    if n < 3 || n.is_multiple_of(2) {
        return Ok((G3Flag::NotApplicable, None));
    }
    let (m, _) = checked_norm(pair)?;
    let k = squarefree_part(&m)?;
    let bn = pair.g.lc().unwrap().clone();
    let gm = monic_model(&pair.g);
    // k (u^2 - 4 b_n^2)
    let four_k: BigInt = &k * &bn * &bn * 4u32;
    let t = IntPoly::new(vec![-four_k, BigInt::zero(), k.clone()]);
    let dm = discriminant(&gm)?;
    let bad = &dm * &bn * &k * &m * 2;

    let mut checked = 0usize;
    let mut split: Option<(u64, Vec<u64>, Vec<u64>)> = None;
    for p in primes_from(3).filter(|&p| !divides(p, &bad)).take(prime_budget) {
        if !locally_square(&gm, &t, p) {
            return Ok((G3Flag::No, Some(k)));
        }
        checked += 1;
        if split.is_none() {
            let rs = roots(&FpPoly::from_int(&gm, p));
            if rs.len() == n {
                let tp = FpPoly::from_int(&t, p);
                let ss: Vec<u64> = rs.iter().map(|&r| sqrt_mod(tp.eval(r), p).unwrap()).collect();
                split = Some((p, rs, ss));
            }
        }
        if checked >= G3_PREFILTER_PRIMES && split.is_some() {
            break;
        }
    }
    let Some((p, rs, ss)) = split else {
        return Ok((G3Flag::Undetermined, Some(k)));
    };

    let scale = dm.abs();
    let target = t.scale(&(&scale * &scale));
    for steps in 1..=G3_MAX_LIFT_STEPS {
        let (modulus, rl, sl) = lift(&gm, &t, p, &rs, &ss, steps);
        for signs in 0u64..(1 << (n - 1)) {
            let ys: Vec<BigInt> = sl
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let s = if i > 0 && signs >> (i - 1) & 1 == 1 { -s } else { s.clone() };
                    (s * &scale).mod_floor(&modulus)
                })
                .collect();
            let c = lagrange_mod(&rl, &ys, &modulus);
            let cand = IntPoly::new(c.into_iter().map(|x| symmetric(x, &modulus)).collect());
            let diff = &(&cand * &cand) - &target;
            if diff.pseudo_rem(&gm).is_zero() {
                return Ok((G3Flag::Yes, Some(k)));
            }
        }
    }
    Ok((G3Flag::Undetermined, Some(k)))
}

/// Rational reducibility of `f`.
pub fn reducibility_flag(f: &IntPoly) -> bool {
    is_reducible(f)
}

// ---------------------------------------------------------------------------
// fingerprint

pub type Distribution = BTreeMap<Vec<usize>, f64>;

#[derive(Clone, Debug, Serialize)]
pub struct Fingerprint {
    pub primes_used: usize,
    /// Cycle types as `"3,2,1"` with their empirical frequencies.
    pub distribution: BTreeMap<String, f64>,
    pub best_tag: Tag,
    pub distance: f64,
    /// Total-variation distance to every candidate table.
    pub distances: BTreeMap<String, f64>,
}

struct Table {
    tag: Tag,
    order: usize,
    dist: BTreeMap<Vec<usize>, Rational64>,
}

fn tables(n: usize) -> Result<std::sync::Arc<Vec<Table>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<Vec<Table>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let mut tags = vec![Tag::Full, Tag::G1, Tag::G2, Tag::G3, Tag::SnPlain, Tag::SnTwisted];
    if n == 4 {
        tags.push(Tag::Exc2S4);
    }
    let mut out = Vec::new();
    for tag in tags {
        let d = standard_subgroup(n, tag)?;
        out.push(Table {
            tag,
            order: d.order,
            dist: cycle_type_distribution(&d)?,
        });
    }
    let out = std::sync::Arc::new(out);
    cache.lock().unwrap().insert(n, out.clone());
    Ok(out)
}

/// Exact cycle-type distribution of a candidate tag in the `2n`-point action.
pub fn group_table(n: usize, tag: Tag) -> Result<BTreeMap<Vec<usize>, f64>> {
    let t = tables(n)?;
    let table = t
        .iter()
        .find(|t| t.tag == tag)
        .ok_or_else(|| RecipError::Domain(format!("no table for {tag} at n = {n}")))?;
    Ok(table
        .dist
        .iter()
        .map(|(k, v)| (k.clone(), *v.numer() as f64 / *v.denom() as f64))
        .collect())
}

pub fn total_variation(a: &Distribution, b: &Distribution) -> f64 {
    let mut keys: Vec<&Vec<usize>> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.iter()
        .map(|k| (a.get(*k).unwrap_or(&0.0) - b.get(*k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
        / 2.0
}

fn shape_key(t: &[usize]) -> String {
    t.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

/// Empirical Frobenius statistics of `f` over `prime_budget` good primes, matched against
/// the subgroup tables; ties go to the larger group.
pub fn frobenius_fingerprint(f: &IntPoly, prime_budget: usize) -> Result<Fingerprint> {
    let d = f.degree().unwrap_or(0);
    if d < 2 || d % 2 == 1 {
        return Err(RecipError::Shape(format!("expected even degree >= 2, got {d}")));
    }
    let n = d / 2;
    if n > 6 {
        return Err(RecipError::Resource(format!("fingerprint tables support n <= 6, got {n}")));
    }
    let disc = discriminant(f)?;
    if disc.is_zero() {
        return Err(RecipError::Separability("disc f = 0".into()));
    }
    let bad = disc * f.lc().unwrap();
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut used = 0usize;
    for p in primes_from(3).filter(|&p| !divides(p, &bad)).take(prime_budget) {
        *counts.entry(cycle_shape(f, p)).or_default() += 1;
        used += 1;
    }
    let emp: Distribution = counts
        .iter()
        .map(|(k, &v)| (k.clone(), v as f64 / used as f64))
        .collect();
    let mut best: Option<(f64, usize, Tag)> = None;
    let mut distances = BTreeMap::new();
    for t in tables(n)?.iter() {
        let table: Distribution = t
            .dist
            .iter()
            .map(|(k, v)| (k.clone(), *v.numer() as f64 / *v.denom() as f64))
            .collect();
        let dist = total_variation(&emp, &table);
        distances.insert(t.tag.to_string(), dist);
        let better = match best {
            None => true,
            Some((bd, bo, _)) => dist < bd - 1e-12 || ((dist - bd).abs() <= 1e-12 && t.order > bo),
        };
        if better {
            best = Some((dist, t.order, t.tag));
        }
    }
    let (distance, _, best_tag) = best.unwrap();
    Ok(Fingerprint {
        primes_used: used,
        distribution: emp.iter().map(|(k, v)| (shape_key(k), *v)).collect(),
        best_tag,
        distance,
        distances,
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct GaloisFlags {
    pub n: usize,
    pub separable: bool,
    pub g_irreducible: bool,
    pub gg_full_sn: SnCertificate,
    pub in_g1: bool,
    pub in_g2: bool,
    pub in_g3: G3Flag,
    /// Candidate radicand for `G_3`, for odd `n >= 3`.
    #[serde(serialize_with = "crate::serde_util::opt_bigint")]
    pub k: Option<BigInt>,
    pub reducible_f: bool,
    pub fingerprint: Option<Fingerprint>,
}

/// All flags for a reciprocal `f` of even degree.
pub fn classify(f: &IntPoly, budgets: &Budgets) -> Result<GaloisFlags> {
    let pair = symmetrize(f)?;
    let (m, dg) = checked_norm(&pair)?;
    let n = pair.n;
    let (in_g3, k) = g3_test(&pair, budgets.prime_budget)?;
    let fingerprint = if budgets.fingerprint && n <= 6 {
        Some(frobenius_fingerprint(f, budgets.prime_budget)?)
    } else {
        None
    };
    Ok(GaloisFlags {
        n,
        separable: true,
        g_irreducible: is_irreducible(&pair.g),
        gg_full_sn: sn_certificate(&pair.g, budgets.prime_budget),
        in_g1: is_square_int(&m),
        in_g2: is_square_int(&(&m * &dg)),
        in_g3,
        k,
        reducible_f: reducibility_flag(f),
        fingerprint,
    })
}

/// `a + b sqrt(k)` for a fixed `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl QuadInt {
    pub fn new(a: i64, b: i64) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn conj(&self) -> Self {
        QuadInt {
            a: self.a.clone(),
            b: -&self.b,
        }
    }
}

/// `f = h(x) x^n h(1/x)` for `h = sum theta_i x^i` with `theta_i = conj(theta_{n-i})`,
/// given `theta_0, ..., theta_{floor(n/2)}`; `None` if the data is not of that shape.
pub fn g3_instance(k: i64, half: &[QuadInt], n: usize) -> Option<IntPoly> {
    if half.len() != n / 2 + 1 || n.is_multiple_of(2) {
        return None;
    }
    let mut theta: Vec<QuadInt> = vec![QuadInt::new(0, 0); n + 1];
    for (i, t) in half.iter().enumerate() {
        theta[i] = t.clone();
        theta[n - i] = t.conj();
    }
    let kk = BigInt::from(k);
    let bar: Vec<QuadInt> = theta.iter().rev().cloned().collect();
    let mut out = vec![BigInt::zero(); 2 * n + 1];
    for (i, x) in theta.iter().enumerate() {
        for (j, y) in bar.iter().enumerate() {
            out[i + j] += &x.a * &y.a + &x.b * &y.b * &kk;
        }
    }
    Some(IntPoly::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::expand;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pair(g: &[i64]) -> SymPair {
        let g = IntPoly::from_i64(g);
        let n = g.degree().unwrap();
        SymPair::from_g(g, n).unwrap()
    }

    #[test]
    fn square_flags() {
        assert!(g1_flag(&pair(&[-5, 0, 1])).unwrap());
        assert!(!g2_flag(&pair(&[-5, 0, 1])).unwrap());
        assert!(!g1_flag(&pair(&[-1, 1, 1])).unwrap());
        assert!(g2_flag(&pair(&[-1, 1, 1])).unwrap());
        // f = x^2 + 1 has disc -4
        assert!(!g1_flag(&pair(&[0, 1])).unwrap());
        assert!(matches!(g1_flag(&pair(&[-2, 1])), Err(RecipError::Separability(_))));
        assert!(matches!(g2_flag(&pair(&[1, -2, 1])), Err(RecipError::Separability(_))));
    }

    #[test]
    fn flags_match_discriminants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 1000 {
            let n = rng.gen_range(2..=3);
            let c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-20..=20)).collect();
            let p = pair(&c);
            if !p.full_degree() {
                continue;
            }
            let (Ok(a), Ok(b)) = (g1_flag(&p), g2_flag(&p)) else {
                continue;
            };
            let df = discriminant(&p.f).unwrap();
            let dg = discriminant(&p.g).unwrap();
            assert_eq!(a, is_square_int(&df));
            assert_eq!(b, is_square_int(&(&df * &dg)));
            checked += 1;
        }
    }

    #[test]
    fn sn_certificates() {
        let g = |c: &[i64]| IntPoly::from_i64(c);
        assert_eq!(sn_certificate(&g(&[-5, 0, 1]), 100), SnCertificate::Certified);
        assert_eq!(sn_certificate(&g(&[-4, 0, 1]), 100), SnCertificate::Refuted);
        assert_eq!(sn_certificate(&g(&[-1, -1, 0, 1]), 100), SnCertificate::Certified);
        // cyclic cubic, disc 49
        assert_eq!(sn_certificate(&g(&[1, -2, -1, 1]), 100), SnCertificate::Refuted);
        assert_eq!(sn_certificate(&g(&[-1, -1, 0, 0, 1]), 100), SnCertificate::Certified);
        assert_eq!(sn_certificate(&g(&[-1, -1, 0, 0, 0, 1]), 200), SnCertificate::Certified);
        assert_eq!(sn_certificate(&g(&[-1, -1, 0, 0, 0, 0, 0, 1]), 400), SnCertificate::Certified);
        // x^4 + 1: Klein four, square discriminant
        assert_eq!(sn_certificate(&g(&[1, 0, 0, 0, 1]), 100), SnCertificate::Refuted);
        // x^4 - 2: D4, disc -2048 not a square, never certified
        assert_eq!(sn_certificate(&g(&[-2, 0, 0, 0, 1]), 300), SnCertificate::Undetermined);
    }

    fn fixture() -> IntPoly {
        // h = x^3 + (1 + sqrt2) x^2 + (1 - sqrt2) x + 1
        g3_instance(2, &[QuadInt::new(1, 0), QuadInt::new(1, -1)], 3).unwrap()
    }

    #[test]
    fn g3_fixture() {
        let f = fixture();
        assert!(f.is_reciprocal());
        let p = symmetrize(&f).unwrap();
        assert_eq!(sn_certificate(&p.g, 100), SnCertificate::Certified);
        let (flag, k) = g3_test(&p, 1000).unwrap();
        assert_eq!(flag, G3Flag::Yes);
        assert_eq!(k, Some(BigInt::from(2)));
        assert!(!reducibility_flag(&f));
        let neg = SymPair { f: -&p.f, g: -&p.g, n: 3 };
        assert_eq!(g3_test(&neg, 1000).unwrap(), (G3Flag::Yes, Some(BigInt::from(2))));
        assert_eq!(g3_flag(&pair(&[-5, 0, 1]), 100).unwrap(), G3Flag::NotApplicable);
    }

    #[test]
    fn g3_random_is_mostly_no() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (mut no, mut total) = (0, 0);
        while total < 200 {
            let c: Vec<i64> = (0..=3).map(|_| rng.gen_range(-20..=20)).collect();
            let p = SymPair::from_g(IntPoly::from_i64(&c), 3).unwrap();
            if !p.full_degree() || g1_flag(&p).unwrap_or(true) || g2_flag(&p).unwrap_or(true) {
                continue;
            }
            total += 1;
            match g3_flag(&p, 500).unwrap() {
                G3Flag::No => no += 1,
                G3Flag::Yes if !reducibility_flag(&p.f) => {
                    assert_eq!(frobenius_fingerprint(&p.f, 1000).unwrap().best_tag, Tag::G3, "{c:?}");
                }
                other => assert_eq!(other, G3Flag::Yes, "{c:?}"),
            }
        }
        assert!(no >= 190, "{no} of {total}");
    }

    #[test]
    fn g3_instances_nonmonic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut found = 0;
        for _ in 0..60 {
            let k = [2i64, 3, 5][rng.gen_range(0..3)];
            let half = [
                QuadInt::new(rng.gen_range(1..=4), rng.gen_range(-2..=2)),
                QuadInt::new(rng.gen_range(-4..=4), rng.gen_range(-3..=3)),
            ];
            let f = g3_instance(k, &half, 3).unwrap();
            let Ok(p) = symmetrize(&f) else { continue };
            if g1_flag(&p).is_err() || sn_certificate(&p.g, 200) != SnCertificate::Certified {
                continue;
            }
            assert_eq!(g3_flag(&p, 1000).unwrap(), G3Flag::Yes, "{f}");
            found += 1;
        }
        assert!(found >= 20);
    }

    #[test]
    fn fingerprints() {
        let f = IntPoly::from_i64(&[1, 0, -3, 0, 1]);
        let fp = frobenius_fingerprint(&f, 1000).unwrap();
        assert_ne!(fp.best_tag, Tag::Full);
        let total: f64 = fp.distribution.values().sum();
        assert!((total - 1.0).abs() < 1e-9);
        let f = IntPoly::from_i64(&[1, 1, 1, 1, 1]);
        assert_ne!(frobenius_fingerprint(&f, 1000).unwrap().best_tag, Tag::Full);
        let fp = frobenius_fingerprint(&fixture(), 1000).unwrap();
        assert_eq!(fp.best_tag, Tag::G3);
        assert!(fp.distance <= 0.1);
    }

    #[test]
    fn classify_examples() {
        let flags = classify(&IntPoly::from_i64(&[1, 0, -3, 0, 1]), &Budgets::default()).unwrap();
        assert!(flags.separable && flags.in_g1 && !flags.in_g2);
        let f = expand(&IntPoly::from_i64(&[-1, 1, 1]), 2).unwrap();
        let flags = classify(&f, &Budgets::default()).unwrap();
        assert!(flags.in_g2 && !flags.in_g1);
        let bad = classify(&IntPoly::from_i64(&[1, 2, 2, 2, 1]), &Budgets::default());
        assert!(matches!(bad, Err(RecipError::Separability(_))));
        assert!(classify(&IntPoly::from_i64(&[1, 1]), &Budgets::default()).is_err());
    }

    #[test]
    fn generic_full() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut runs = 0;
        let mut full = 0;
        while runs < 30 {
            let c: Vec<i64> = (0..=3).map(|_| rng.gen_range(-20..=20)).collect();
            let p = pair(&c);
            if !p.full_degree() {
                continue;
            }
            let Ok(flags) = classify(&p.f, &Budgets { prime_budget: 1000, fingerprint: true }) else {
                continue;
            };
            if flags.gg_full_sn != SnCertificate::Certified || flags.in_g1 || flags.in_g2 || flags.in_g3 != G3Flag::No || flags.reducible_f {
                continue;
            }
            runs += 1;
            if flags.fingerprint.unwrap().best_tag == Tag::Full {
                full += 1;
            }
        }
        assert_eq!(full, runs);
    }
}
