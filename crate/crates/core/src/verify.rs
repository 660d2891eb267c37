//! Quick invariant suites behind the `verify` verb.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::is_square_int;
use crate::disc_lab::{disc_f_via_g, fzn_r_identity_check, index_valuation_check};
use crate::error::RecipError;
use crate::fourier::{fourier_report, markings, twisted_poisson_check, types_up_to, IntLattice};
use crate::galois::{g1_flag, g2_flag};
use crate::poly::{discriminant, expand, mahler_measure, symmetrize, IntPoly, SymPair};
use crate::wreath::{cocycle_space, overgroup_census, Quotient};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Poly,
    Disc,
    Groups,
    Fourier,
    All,
}

impl FromStr for Suite {
    type Err = RecipError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "poly" => Suite::Poly,
            "disc" => Suite::Disc,
            "groups" => Suite::Groups,
            "fourier" => Suite::Fourier,
            "all" => Suite::All,
            _ => return Err(RecipError::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{mark} {}/{}: {}", self.suite, self.name, self.detail)
    }
}

fn check(suite: &'static str, name: &'static str, failures: usize, trials: usize) -> Check {
    Check {
        suite,
        name,
        passed: failures == 0,
        detail: format!("{failures} failures in {trials} trials"),
    }
}

fn random_g(rng: &mut ChaCha8Rng, n: usize, h: i64) -> IntPoly {
    let mut c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-h..=h)).collect();
    if c[n] == 0 {
        c[n] = 1;
    }
    IntPoly::from_i64(&c)
}

fn poly_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut bad = 0;
    for _ in 0..300 {
        let n = rng.gen_range(1..=5);
        let g = random_g(rng, n, 20);
        let f = expand(&g, n).unwrap();
        if !f.is_reciprocal() || symmetrize(&f).map(|p| p.g != g).unwrap_or(true) {
            bad += 1;
        }
    }
    let round_trip = check("poly", "symmetrize-expand round trip", bad, 300);

    let mut bad = 0;
    for _ in 0..200 {
        let (da, db) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = random_g(rng, da, 9);
        let b = random_g(rng, db, 9);
        let (ma, _) = mahler_measure(&a);
        let (mb, _) = mahler_measure(&b);
        let (mab, _) = mahler_measure(&(&a * &b));
        if (mab - ma * mb).abs() > 1e-8 * mab.max(1.0) {
            bad += 1;
        }
    }
    let mahler = check("poly", "Mahler measure multiplicativity", bad, 200);
    vec![round_trip, mahler]
}

fn disc_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let (mut bad_disc, mut bad_sq) = (0, 0);
    for _ in 0..500 {
        let n = rng.gen_range(1..=5);
        let g = random_g(rng, n, 50);
        let pair = SymPair::from_g(g.clone(), n).unwrap();
        let f = expand(&g, n).unwrap();
        let d = discriminant(&f).unwrap();
        if disc_f_via_g(&pair).unwrap() != d {
            bad_disc += 1;
        }
        if d.is_zero() {
            continue;
        }
        let dg = discriminant(&g).unwrap();
        if g1_flag(&pair).unwrap() != is_square_int(&d) || g2_flag(&pair).unwrap() != is_square_int(&(&d * &dg)) {
            bad_sq += 1;
        }
    }

    let mut bad_r = 0;
    for _ in 0..60 {
        let n = rng.gen_range(2..=4);
        let rest: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect();
        if !fzn_r_identity_check(&rest, n).unwrap().holds {
            bad_r += 1;
        }
    }

    let mut bad_idx = 0;
    let primes = [3u64, 5, 7, 11, 13, 17, 19, 23];
    for _ in 0..1000 {
        let n = rng.gen_range(1..=5);
        let g = random_g(rng, n, 30);
        let p = primes[rng.gen_range(0..primes.len())];
        if index_valuation_check(&g, p).holds() == Some(false) {
            bad_idx += 1;
        }
    }
    vec![
        check("disc", "discriminant of f via g", bad_disc, 500),
        check("disc", "square conditions", bad_sq, 500),
        check("disc", "double discriminant factorization", bad_r, 60),
        check("disc", "index bounds valuation", bad_idx, 1000),
    ]
}

fn groups_suite() -> Vec<Check> {
    let mut out = Vec::new();
    for (n, expect) in [(2usize, vec![8usize, 4, 4, 2]), (3, vec![48, 24, 24, 12, 6, 6])] {
        let orders: Vec<usize> = overgroup_census(n).map(|c| c.iter().map(|d| d.order).collect()).unwrap_or_default();
        out.push(Check {
            suite: "groups",
            name: if n == 2 { "overgroups of S_n, n = 2" } else { "overgroups of S_n, n = 3" },
            passed: orders == expect,
            detail: format!("orders {orders:?}"),
        });
    }
    let mut bad = 0;
    let mut trials = 0;
    for n in 2..=5 {
        let expect = [(Quotient::ModOnesPerp, 2usize), (Quotient::ModOnes, 1), (Quotient::Full, 2)];
        for (q, h1) in expect {
            if q != Quotient::ModOnesPerp && n % 2 == 0 {
                continue;
            }
            trials += 1;
            if cocycle_space(n, q).map(|c| c.h1).unwrap_or(0) != h1 {
                bad += 1;
            }
        }
    }
    out.push(check("groups", "first cohomology sizes", bad, trials));
    out
}

fn fourier_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut bad = 0;
    let mut trials = 0;
    for p in [3u64, 5] {
        for s in types_up_to(2, 2) {
            for monic in [false, true] {
                trials += 1;
                if !fourier_report(p, 2, &s, false, monic).map(|r| r.within_envelope).unwrap_or(false) {
                    bad += 1;
                }
                for m in markings(&s) {
                    trials += 1;
                    if !fourier_report(p, 2, &m, true, monic).map(|r| r.within_envelope).unwrap_or(false) {
                        bad += 1;
                    }
                }
            }
        }
    }
    let env = check("fourier", "transform envelopes", bad, trials);

    let mut bad = 0;
    for _ in 0..10 {
        let l = IntLattice {
            basis: vec![vec![2, 0], vec![rng.gen_range(0..2), 2]],
        };
        let psi: Vec<Complex64> = (0..9).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
        match twisted_poisson_check(&l, 3, &psi, rng.gen_range(1.5..3.0)) {
            Ok(r) if r.residual <= 1e-9 => {}
            _ => bad += 1,
        }
    }
    vec![env, check("fourier", "twisted Poisson summation", bad, 10)]
}

/// Runs `suite` with a fixed seed.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Poly => poly_suite(&mut rng),
        Suite::Disc => disc_suite(&mut rng),
        Suite::Groups => groups_suite(),
        Suite::Fourier => fourier_suite(&mut rng),
        Suite::All => [Suite::Poly, Suite::Disc, Suite::Groups, Suite::Fourier]
            .into_iter()
            .flat_map(|s| run_suite(s, seed))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass() {
        for s in [Suite::Poly, Suite::Disc, Suite::Fourier] {
            for c in run_suite(s, 1) {
                assert!(c.passed, "{c}");
            }
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
