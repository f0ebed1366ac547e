//! Root finding for the small monic polynomials that arise when the
//! block-companion consensus matrix is decomposed per Laplacian eigenvalue.

use num_complex::Complex64;

/// All complex roots of the monic polynomial
/// `s^n + coeffs[n-1] s^(n-1) + ... + coeffs[1] s + coeffs[0]`.
///
/// Degrees 1 and 2 use closed forms; higher degrees use the Durand-Kerner
/// simultaneous iteration. Zero roots are deflated exactly first, so gain
/// vectors with `a_0 = 0` do not degrade convergence.
pub fn monic_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut roots = Vec::with_capacity(coeffs.len());
    let mut c: Vec<f64> = coeffs.to_vec();
    // Deflate exact zero roots: trailing zero constant terms.
    while !c.is_empty() && c[0] == 0.0 {
        roots.push(Complex64::ZERO);
        c.remove(0);
    }
    match c.len() {
        0 => {}
        1 => roots.push(Complex64::new(-c[0], 0.0)),
        2 => {
            let (b, q) = (c[1], c[0]);
            let disc = b * b - 4.0 * q;
            if disc >= 0.0 {
                let sd = disc.sqrt();
                // Stable quadratic formula: avoid cancellation on the larger root.
                let r1 = if b >= 0.0 { (-b - sd) / 2.0 } else { (-b + sd) / 2.0 };
                let r2 = if r1 != 0.0 { q / r1 } else { -b - r1 };
                roots.push(Complex64::new(r1, 0.0));
                roots.push(Complex64::new(r2, 0.0));
            } else {
                let im = (-disc).sqrt() / 2.0;
                roots.push(Complex64::new(-b / 2.0, im));
                roots.push(Complex64::new(-b / 2.0, -im));
            }
        }
        _ => roots.extend(durand_kerner(&c)),
    }
    roots
}

fn eval_monic(c: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::ONE;
    for &ck in c.iter().rev() {
        acc = acc * z + Complex64::new(ck, 0.0);
    }
    acc
}

fn durand_kerner(c: &[f64]) -> Vec<Complex64> {
    let n = c.len();
    // Radius bound keeps the initial ring around all roots.
    let radius = 1.0 + c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32 + 1) * radius)
        .collect();

    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::ONE;
            for j in 0..n {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom == Complex64::ZERO {
                // Collided guesses: nudge deterministically.
                z[i] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                max_step = f64::INFINITY;
                continue;
            }
            let step = eval_monic(c, z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step <= 1e-14 * radius {
            break;
        }
    }
    z
}
