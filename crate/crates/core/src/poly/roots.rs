//! Numeric complex roots by Aberth–Ehrlich iteration.

use num_complex::Complex64;

const MAX_ITER: usize = 1000;

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All complex roots of the polynomial with ascending real coefficients `c`.
///
/// The leading coefficient must be nonzero. Roots of multiplicity > 1 converge
/// only linearly; callers wanting tight bounds should pass squarefree input.
pub fn aberth(c: &[f64]) -> Vec<Complex64> {
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lc = c[n];
    assert!(lc != 0.0, "leading coefficient must be nonzero");
    // Fujiwara-type bound on root moduli
    let radius = c[..n]
        .iter()
        .enumerate()
        .map(|(i, a)| (a / lc).abs().powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, t)
        })
        .collect();
    for _ in 0..MAX_ITER {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

/// Inclusion radii: for distinct approximations `z_i` of the roots of `c`, each disc
/// `|x - z_i| <= n |p(z_i)| / |lc prod_{j != i} (z_i - z_j)|` contains a root,
/// and the union of the discs contains all roots.
pub fn inclusion_radii(c: &[f64], z: &[Complex64]) -> Vec<f64> {
    let n = z.len();
    let lc = c[n];
    (0..n)
        .map(|i| {
            let (p, _) = horner(c, z[i]);
            let mut prod = Complex64::new(lc, 0.0);
            for j in 0..n {
                if j != i {
                    prod *= z[i] - z[j];
                }
            }
            n as f64 * p.norm() / prod.norm()
        })
        .collect()
}
