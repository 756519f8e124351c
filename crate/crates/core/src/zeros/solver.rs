//! Simultaneous root iterations: Aberth-Ehrlich as the production solver,
//! Durand-Kerner as an independent cross-check at oracle scale.
//!
//! Both run with generous guard bits over the requested precision — the
//! family's coefficients grow like `2^m` while values near the zero cluster
//! sink like `0.4^m`, so evaluation at the nominal precision would limit
//! root accuracy long before the iteration does.

use super::{ZeroError, ZeroSet};
use crate::jacobi::ExactPolynomial;
use crate::numerics::{arg_2pi, PrecisionConfig};
use rug::{Complex, Float};

pub(super) fn solver_guard(m: usize) -> u32 {
    3 * m as u32 + 128
}

/// Horner on pre-rounded real coefficients.
fn horner(coeffs: &[Float], z: &Complex, prec: PrecisionConfig) -> Complex {
    let mut acc = prec.complex(coeffs.last().unwrap());
    for c in coeffs.iter().rev().skip(1) {
        acc *= z;
        acc += c;
    }
    acc
}

fn rounded_coeffs(poly: &ExactPolynomial, prec: PrecisionConfig) -> (Vec<Float>, Vec<Float>) {
    let coeffs: Vec<Float> = poly.coeffs().iter().map(|c| prec.float(c)).collect();
    let deriv: Vec<Float> = poly
        .derivative_coeffs()
        .iter()
        .map(|c| prec.float(c))
        .collect();
    (coeffs, deriv)
}

/// Assemble the certified-set bookkeeping at working precision, then round
/// the reported quantities back to `prec`.
fn finish(
    poly: &ExactPolynomial,
    prec: PrecisionConfig,
    wp: PrecisionConfig,
    mut roots: Vec<Complex>,
) -> ZeroSet {
    let m = poly.degree();
    let (coeffs, deriv) = rounded_coeffs(poly, wp);
    // Curve order: ascending argument of 1 - z^2.
    roots.sort_by(|a, b| {
        let ka = arg_2pi(wp, &(wp.complex(1) - wp.complex(a.square_ref()))).to_f64();
        let kb = arg_2pi(wp, &(wp.complex(1) - wp.complex(b.square_ref()))).to_f64();
        ka.partial_cmp(&kb).unwrap()
    });

    let mut residuals = Vec::with_capacity(m);
    let mut newton_radii = Vec::with_capacity(m);
    for z in &roots {
        let p = horner(&coeffs, z, wp);
        let dp = horner(&deriv, z, wp);
        let r = Float::with_val(prec.bits(), p.abs_ref());
        let dp_abs = Float::with_val(wp.bits(), dp.abs_ref());
        let radius = if dp_abs.is_zero() {
            prec.float(&r)
        } else {
            prec.float(Float::with_val(wp.bits(), p.abs_ref()) / dp_abs)
        };
        residuals.push(r);
        newton_radii.push(radius);
    }

    let mut min_separation = prec.float(f64::INFINITY);
    for i in 0..m {
        for j in i + 1..m {
            let d = Float::with_val(
                prec.bits(),
                Complex::with_val(wp.bits(), &roots[i] - &roots[j]).abs_ref(),
            );
            if d < min_separation {
                min_separation = d;
            }
        }
    }

    // Vieta: sum of roots = -c_{m-1}, product = (-1)^m c_0 (monic scale).
    let lead = coeffs.last().unwrap();
    let (vieta_sum_dev, vieta_prod_dev) = if m == 0 {
        (prec.float(0), prec.float(0))
    } else {
        let mut sum = wp.zero();
        let mut prod = wp.complex(1);
        for z in &roots {
            sum += z;
            prod *= z;
        }
        let target_sum = -Float::with_val(wp.bits(), &coeffs[m - 1] / lead);
        let sd = Float::with_val(
            prec.bits(),
            (sum - wp.complex(&target_sum)).abs_ref(),
        );
        let mut target_prod = Float::with_val(wp.bits(), &coeffs[0] / lead);
        if m % 2 == 1 {
            target_prod = -target_prod;
        }
        let pd = Float::with_val(
            prec.bits(),
            (prod - wp.complex(&target_prod)).abs_ref(),
        );
        (sd, pd)
    };

    let roots = roots.into_iter().map(|z| prec.complex(z)).collect();
    ZeroSet {
        m,
        roots,
        residuals,
        newton_radii,
        min_separation,
        vieta_sum_dev,
        vieta_prod_dev,
        precision_bits: prec.bits(),
    }
}

/// Aberth-Ehrlich simultaneous iteration. Sweeps are Jacobi-style: every
/// correction in a sweep reads the previous sweep's roots.
pub fn aberth_solve(
    poly: &ExactPolynomial,
    prec: PrecisionConfig,
    tol: Option<f64>,
    initial: Option<Vec<Complex>>,
) -> Result<ZeroSet, ZeroError> {
    let m = poly.degree();
    let wp = prec.with_guard(solver_guard(m));
    if m == 0 {
        return Ok(finish(poly, prec, wp, Vec::new()));
    }
    let (coeffs, deriv) = rounded_coeffs(poly, wp);

    let mut roots: Vec<Complex> = match initial {
        Some(guesses) => {
            let mut g: Vec<Complex> = guesses.iter().take(m).map(|z| wp.complex(z)).collect();
            let mut fill = 0u32;
            while g.len() < m {
                // Shortfall fallback: spread along the expected cluster ring.
                let theta = wp.float(0.5 + 1.7 * fill as f64);
                let rho = wp.float(2).ln() / (2 * m as u32 + 1);
                let rho = rho.exp();
                g.push(crate::geometry::left_lemniscate_point(wp, &rho, &theta.clone()));
                fill += 1;
            }
            g
        }
        None => super::predicted_zeros_outer(wp, m)
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                // Deterministic de-symmetrizing nudge.
                let phase = wp.float(i as u32);
                wp.complex(&e.z) + wp.unit(&phase) * wp.float(1e-3)
            })
            .collect(),
    };

    let tol = match tol {
        Some(t) => wp.float(t),
        None => {
            let mut t = wp.float(1);
            t >>= prec.bits() / 2 + 16;
            t
        }
    };

    let max_iters = 500usize;
    for _ in 0..max_iters {
        let mut next = Vec::with_capacity(m);
        let mut worst = wp.float(0);
        for i in 0..m {
            let zi = &roots[i];
            let p = horner(&coeffs, zi, wp);
            if p.is_zero() {
                next.push(zi.clone());
                continue;
            }
            let dp = horner(&deriv, zi, wp);
            let newton = p / dp;
            let mut repulsion = wp.zero();
            for (j, zj) in roots.iter().enumerate() {
                if j != i {
                    repulsion += wp.complex(1) / Complex::with_val(wp.bits(), zi - zj);
                }
            }
            let denom = wp.complex(1) - wp.complex(&newton) * repulsion;
            let w = newton / denom;
            let scale = Float::with_val(wp.bits(), zi.abs_ref()).max(&wp.float(1));
            let rel = Float::with_val(wp.bits(), w.abs_ref()) / scale;
            if rel > worst {
                worst = rel;
            }
            next.push(wp.complex(zi) - w);
        }
        roots = next;
        if worst < tol {
            return Ok(finish(poly, prec, wp, roots));
        }
    }
    Err(ZeroError::NoConvergence {
        iterations: max_iters,
    })
}

/// Durand-Kerner (Weierstrass) iteration from the classical scattered
/// starting points; independent of the Aberth path and of the predicted
/// zeros. Oracle scale: degree <= 24.
pub fn durand_kerner_oracle(
    poly: &ExactPolynomial,
    prec: PrecisionConfig,
) -> Result<ZeroSet, ZeroError> {
    let m = poly.degree();
    assert!(m <= 24, "Durand-Kerner oracle is limited to degree 24");
    let wp = prec.with_guard(solver_guard(m));
    if m == 0 {
        return Ok(finish(poly, prec, wp, Vec::new()));
    }
    let (coeffs, _) = rounded_coeffs(poly, wp);
    let lead = coeffs.last().unwrap().clone();
    let monic: Vec<Float> = coeffs
        .iter()
        .map(|c| Float::with_val(wp.bits(), c / &lead))
        .collect();

    let seed = wp.complex((0.4, 0.9));
    let mut roots: Vec<Complex> = Vec::with_capacity(m);
    let mut acc = wp.complex(1);
    for _ in 0..m {
        acc *= &seed;
        roots.push(acc.clone());
    }

    let tol = {
        let mut t = wp.float(1);
        t >>= prec.bits() / 2 + 16;
        t
    };
    let max_iters = 5000usize;
    for _ in 0..max_iters {
        let mut next = Vec::with_capacity(m);
        let mut worst = wp.float(0);
        for i in 0..m {
            let zi = &roots[i];
            let p = horner(&monic, zi, wp);
            let mut denom = wp.complex(1);
            for (j, zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= Complex::with_val(wp.bits(), zi - zj);
                }
            }
            let w = p / denom;
            let scale = Float::with_val(wp.bits(), zi.abs_ref()).max(&wp.float(1));
            let rel = Float::with_val(wp.bits(), w.abs_ref()) / scale;
            if rel > worst {
                worst = rel;
            }
            next.push(wp.complex(zi) - w);
        }
        roots = next;
        if worst < tol {
            return Ok(finish(poly, prec, wp, roots));
        }
    }
    Err(ZeroError::NoConvergence {
        iterations: max_iters,
    })
}
