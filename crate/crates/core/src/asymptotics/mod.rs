//! The two asymptotic approximations of `pi_m` — the outer formula on the
//! band around the left lemniscate, and the parabolic-cylinder model near
//! the origin — together with the conformal map `xi = lambda(z)` that links
//! the two scales.

pub mod pcf;

pub use pcf::{
    asymptotic_series, pcf_d_minus_half, pcf_d_minus_half_derivative, pcf_d_minus_half_value,
    PcfEval,
};

use crate::geometry::{classify_region, RegionLabel, RegionParams};
use crate::jacobi::ExactPolynomial;
use crate::numerics::{integer_power, sqrt_arg_2pi, BranchEvaluator, NumericsError, PrecisionConfig};
use rug::{Complex, Float, Rational};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsymptoticsError {
    #[error("|z| = {modulus} is outside the series domain |z| < 0.8")]
    OutsideSeriesDomain { modulus: String },
    #[error("z lies outside the region where this formula applies")]
    OutsideRegion,
    #[error("Newton inversion did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("the formula is singular at z = 1 or z = -1")]
    SingularPoint,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Constants of the parabolic-cylinder model: the order `nu = -1/2` and the
/// normalizing constant `a = 2^{1/4} e^{-i pi/4}`, stored in exact polar
/// form (`|a| = 2^{log2_modulus}`, `arg a = arg_over_pi * pi`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcfConstants {
    pub nu: Rational,
    pub log2_modulus: Rational,
    pub arg_over_pi: Rational,
}

impl Default for PcfConstants {
    fn default() -> Self {
        PcfConstants {
            nu: Rational::from((-1, 2)),
            log2_modulus: Rational::from((1, 4)),
            arg_over_pi: Rational::from((-1, 4)),
        }
    }
}

impl PcfConstants {
    /// Exact polar form of `a^k`: `(log2 |a^k|, arg(a^k)/pi mod 2)`.
    pub fn power(&self, k: u32) -> (Rational, Rational) {
        let log2 = &self.log2_modulus * Rational::from(k);
        let mut arg = &self.arg_over_pi * Rational::from(k);
        // Reduce arg/pi into (-1, 1].
        while arg > 1 {
            arg -= 2u32;
        }
        while arg <= -1 {
            arg += 2u32;
        }
        (log2, arg)
    }

    pub fn a(&self, prec: PrecisionConfig) -> Complex {
        use rug::ops::Pow;
        let modulus = prec.float(2).pow(prec.float(&self.log2_modulus));
        let theta = prec.float(&self.arg_over_pi) * prec.pi();
        prec.unit(&theta) * modulus
    }
}

/// `tau(z) = sqrt( sum_k z^{2k} / (k+1) )`, the analytic square root with
/// value 1 at the origin; the series value stays in a small disk around 1
/// on `|z| < 0.8`, so the principal branch is unambiguous. Returns
/// `(tau, tau')`.
fn tau_with_derivative(
    prec: PrecisionConfig,
    z: &Complex,
) -> Result<(Complex, Complex), AsymptoticsError> {
    let modulus = Float::with_val(prec.bits(), z.abs_ref());
    if modulus >= 0.8 {
        return Err(AsymptoticsError::OutsideSeriesDomain {
            modulus: format!("{:.6}", modulus.to_f64()),
        });
    }
    let z2 = prec.complex(z.square_ref());
    let cutoff = {
        let mut c = prec.float(1);
        c >>= prec.bits() + 8;
        c
    };
    let mut sum = prec.complex(1);
    let mut dsum = prec.zero(); // sum of 2k z^{2k-1} / (k+1)
    let mut pow = prec.complex(1); // z^{2k}
    let mut k = 0u32;
    loop {
        k += 1;
        pow *= &z2;
        let term = prec.complex(&pow) / (k + 1);
        let tsize = Float::with_val(prec.bits(), term.abs_ref());
        sum += &term;
        if !z.is_zero() {
            // 2k z^{2k-1}/(k+1) = term * 2k / z
            dsum += (term * (2 * k)) / z;
        }
        if tsize < cutoff || k > 8 * prec.bits() {
            break;
        }
    }
    let tau = sum.sqrt();
    let dtau = dsum / (prec.complex(&tau) * 2u32);
    Ok((tau, dtau))
}

/// `tau(z)`; equivalently `tau(z)^2 = -Log(1 - z^2) / z^2`.
pub fn tau(prec: PrecisionConfig, z: &Complex) -> Result<Complex, AsymptoticsError> {
    Ok(tau_with_derivative(prec, z)?.0)
}

fn exp_minus_i_pi_4(prec: PrecisionConfig) -> Complex {
    let h = prec.float(2).sqrt() / 2u32;
    prec.complex((h.clone(), -h))
}

/// The local conformal map `xi = lambda(z) = sqrt(2m) z e^{-i pi/4} tau(z)`,
/// satisfying `(1 - z^2)^m = e^{-i xi^2 / 2}`.
pub fn lambda_map(
    prec: PrecisionConfig,
    m: usize,
    z: &Complex,
) -> Result<Complex, AsymptoticsError> {
    let (t, _) = tau_with_derivative(prec, z)?;
    let scale = prec.float(2 * m as u32).sqrt();
    Ok(prec.complex(z) * t * exp_minus_i_pi_4(prec) * scale)
}

/// `lambda'(z) = sqrt(2m) e^{-i pi/4} (tau + z tau')`.
fn lambda_derivative(
    prec: PrecisionConfig,
    m: usize,
    z: &Complex,
) -> Result<Complex, AsymptoticsError> {
    let (t, dt) = tau_with_derivative(prec, z)?;
    let scale = prec.float(2 * m as u32).sqrt();
    Ok((t + prec.complex(z) * dt) * exp_minus_i_pi_4(prec) * scale)
}

/// Numerical inverse of the local map by Newton iteration from the
/// first-order guess `z0 = xi e^{i pi/4} / sqrt(2m)`.
pub fn lambda_inverse(
    prec: PrecisionConfig,
    m: usize,
    xi: &Complex,
) -> Result<Complex, AsymptoticsError> {
    let scale = prec.float(2 * m as u32).sqrt();
    let rot = exp_minus_i_pi_4(prec).conj();
    let mut z = prec.complex(xi) * rot / scale;
    let tol = {
        let mut t = prec.float(1);
        t >>= prec.bits() - 16;
        t
    };
    for _ in 0..64 {
        let f = lambda_map(prec, m, &z)? - xi;
        let err = Float::with_val(prec.bits(), f.abs_ref());
        if err < tol {
            return Ok(z);
        }
        let df = lambda_derivative(prec, m, &z)?;
        z -= f / df;
    }
    Err(AsymptoticsError::NoConvergence { iterations: 64 })
}

/// `q(m, z) = 1 - i sqrt(2) / ((1-z^2)^m (1-z)^{1/2} (1+z)^{1/2})`, whose
/// zeros the polynomial zeros approach on the band.
pub fn q_outer(
    prec: PrecisionConfig,
    m: usize,
    z: &Complex,
) -> Result<Complex, AsymptoticsError> {
    let branch = BranchEvaluator::new(prec);
    let sm = branch.sqrt_one_minus(z);
    let sp = branch.sqrt_one_plus(z);
    if sm.is_zero() || sp.is_zero() {
        return Err(AsymptoticsError::SingularPoint);
    }
    let one_minus_z2 = prec.complex(1) - prec.complex(z.square_ref());
    let denom = integer_power(prec, &one_minus_z2, m as u64) * sm * sp;
    let i_sqrt2 = prec.complex((0, 1)) * prec.float(2).sqrt();
    Ok(prec.complex(1) - i_sqrt2 / denom)
}

/// Leading-order outer approximation on the band:
/// `pi_m(z) ~ ((1+z)^{1/2} / z^{1/2}) (1+z)^m q(m, z)`.
pub fn outer_asymptotic(
    prec: PrecisionConfig,
    m: usize,
    z: &Complex,
    params: &RegionParams,
) -> Result<Complex, AsymptoticsError> {
    let (label, in_ueps) = classify_region(prec, z, params);
    if label != RegionLabel::OuterBand || in_ueps {
        return Err(AsymptoticsError::OutsideRegion);
    }
    let branch = BranchEvaluator::new(prec);
    let sp = branch.sqrt_one_plus(z);
    let zh = branch.sqrt_principal_2pi(z)?;
    let one_plus = prec.complex(1) + z;
    let envelope = sp * integer_power(prec, &one_plus, m as u64) / zh;
    Ok(envelope * q_outer(prec, m, z)?)
}

/// `q_l(xi) = e^{i pi/4} D_{-1/2}(e^{-3i pi/4} xi)
///            - i sqrt(2) D_{-1/2}(e^{-5i pi/4} xi)`,
/// the entire function whose zeros attract the polynomial zeros near the
/// origin. Satisfies `q_l'' = -(xi^2/4) q_l`.
pub fn q_local(prec: PrecisionConfig, xi: &Complex) -> Complex {
    let h = prec.float(2).sqrt() / 2u32;
    let rot1 = prec.complex((-h.clone(), -h.clone())); // e^{-3 pi i/4}
    let rot2 = prec.complex((-h.clone(), h.clone())); // e^{-5 pi i/4}
    let coeff1 = prec.complex((h.clone(), h.clone())); // e^{i pi/4}
    let i_sqrt2 = prec.complex((0, 1)) * prec.float(2).sqrt();
    let d1 = pcf_d_minus_half_value(prec, &(rot1 * xi));
    let d2 = pcf_d_minus_half_value(prec, &(rot2 * xi));
    coeff1 * d1 - i_sqrt2 * d2
}

/// Analytic derivative of [`q_local`], used to seed the grid marching.
pub fn q_local_derivative(prec: PrecisionConfig, xi: &Complex) -> Complex {
    let h = prec.float(2).sqrt() / 2u32;
    let rot1 = prec.complex((-h.clone(), -h.clone()));
    let rot2 = prec.complex((-h.clone(), h.clone()));
    let coeff1 = prec.complex((h.clone(), h.clone()));
    let i_sqrt2 = prec.complex((0, 1)) * prec.float(2).sqrt();
    let d1 = pcf_d_minus_half_derivative(prec, &(prec.complex(&rot1) * xi));
    let d2 = pcf_d_minus_half_derivative(prec, &(prec.complex(&rot2) * xi));
    coeff1 * rot1 * d1 - i_sqrt2 * rot2 * d2
}

/// Full local approximation for `z` in the upper part of the band inside
/// `u_eps`:
///
/// `pi_m(z) ~ (1+z)^m (1+z)^{1/2} (xi e^{-5 pi i/4})^{1/2} e^{i xi^2/4}
///            / (2 z^{1/2}) * [1 - 1/((1-z)^{1/2}(1+z)^{1/2})] * q_l(xi)`.
pub fn local_asymptotic(
    prec: PrecisionConfig,
    m: usize,
    z: &Complex,
    params: &RegionParams,
) -> Result<Complex, AsymptoticsError> {
    let (label, in_ueps) = classify_region(prec, z, params);
    let ok_label = matches!(label, RegionLabel::OuterBand | RegionLabel::InsideLeft);
    let im_positive = *z.imag() > 0;
    if !ok_label || !in_ueps || !im_positive {
        return Err(AsymptoticsError::OutsideRegion);
    }
    let xi = lambda_map(prec, m, z)?;
    let branch = BranchEvaluator::new(prec);

    let h = prec.float(2).sqrt() / 2u32;
    let rot2 = prec.complex((-h.clone(), h.clone())); // e^{-5 pi i/4}
    let xi_rot_sqrt = sqrt_arg_2pi(prec, &(rot2 * &xi));

    let one_plus = prec.complex(1) + z;
    let phase = (prec.complex(xi.square_ref()).mul_i(false) / 4u32).exp();
    let zh = branch.sqrt_principal_2pi(z)?;
    let prefactor = integer_power(prec, &one_plus, m as u64)
            * branch.sqrt_one_plus(z)
            * xi_rot_sqrt
            * phase / (zh * 2u32);

    let sm = branch.sqrt_one_minus(z);
    let sp = branch.sqrt_one_plus(z);
    if sm.is_zero() || sp.is_zero() {
        return Err(AsymptoticsError::SingularPoint);
    }
    let bracket = prec.complex(1) - prec.complex(1) / (sm * sp);

    Ok(prefactor * bracket * q_local(prec, &xi))
}

/// One exact-vs-predicted comparison record.
#[derive(Debug, Clone)]
pub struct AsymptoticSample {
    pub m: usize,
    pub z: Complex,
    pub exact: Complex,
    pub predicted: Complex,
    pub rel_error: f64,
}

fn rel_error(prec: PrecisionConfig, exact: &Complex, predicted: &Complex) -> f64 {
    let diff = Float::with_val(
        prec.bits(),
        (prec.complex(exact) - predicted).abs_ref(),
    );
    let ae = Float::with_val(prec.bits(), exact.abs_ref());
    let ap = Float::with_val(prec.bits(), predicted.abs_ref());
    let denom = ae.max(&ap).max(&prec.float(1e-300));
    (diff / denom).to_f64()
}

/// Compare the outer approximation against the exact polynomial at `z`.
pub fn outer_sample(
    poly: &ExactPolynomial,
    z: &Complex,
    prec: PrecisionConfig,
    params: &RegionParams,
) -> Result<AsymptoticSample, AsymptoticsError> {
    let m = poly.degree();
    let predicted = outer_asymptotic(prec, m, z, params)?;
    let exact = poly.evaluate_guarded(z, prec);
    Ok(AsymptoticSample {
        m,
        z: prec.complex(z),
        rel_error: rel_error(prec, &exact, &predicted),
        exact,
        predicted,
    })
}

/// Compare the local approximation against the exact polynomial at `z`.
pub fn local_sample(
    poly: &ExactPolynomial,
    z: &Complex,
    prec: PrecisionConfig,
    params: &RegionParams,
) -> Result<AsymptoticSample, AsymptoticsError> {
    let m = poly.degree();
    let predicted = local_asymptotic(prec, m, z, params)?;
    let exact = poly.evaluate_guarded(z, prec);
    Ok(AsymptoticSample {
        m,
        z: prec.complex(z),
        rel_error: rel_error(prec, &exact, &predicted),
        exact,
        predicted,
    })
}

/// `|q_l|` sampled on a square grid over `[-r, r]^2`, marched row by row as
/// a Taylor solution of `y'' = -(xi^2/4) y` seeded with two function
/// evaluations per row; evaluating the parabolic cylinder quadrature at
/// every one of the ~40k grid nodes would be needlessly slow.
pub fn q_local_grid(prec: PrecisionConfig, r: f64, nodes_per_side: usize) -> Vec<(f64, f64, f64)> {
    let n = nodes_per_side.max(2);
    let step = 2.0 * r / (n - 1) as f64;
    let h = prec.float(step);
    let terms = 40usize;
    let mut out = Vec::with_capacity(n * n);
    for row in 0..n {
        let y0 = -r + step * row as f64;
        let seed = prec.complex((-r, y0));
        let mut value = q_local(prec, &seed);
        let mut deriv = q_local_derivative(prec, &seed);
        for col in 0..n {
            let x0 = -r + step * col as f64;
            out.push((
                x0,
                y0,
                Float::with_val(prec.bits(), value.abs_ref()).to_f64(),
            ));
            if col + 1 == n {
                break;
            }
            // Taylor coefficients about xi0: a_{p+2} =
            // -(xi0^2 a_p + 2 xi0 a_{p-1} + a_{p-2}) / (4 (p+1)(p+2)).
            let xi0 = prec.complex((x0, y0));
            let xi0_sq = prec.complex(xi0.square_ref());
            let mut a: Vec<Complex> = Vec::with_capacity(terms);
            a.push(value.clone());
            a.push(deriv.clone());
            for p in 0..terms - 2 {
                let mut num = prec.complex(&xi0_sq) * &a[p];
                if p >= 1 {
                    num += (prec.complex(&xi0) * &a[p - 1]) * 2u32;
                }
                if p >= 2 {
                    num += &a[p - 2];
                }
                let denom = 4 * (p as u32 + 1) * (p as u32 + 2);
                a.push(-num / denom);
            }
            // Evaluate the series and its derivative at s = h by Horner.
            let mut v = a[terms - 1].clone();
            for p in (0..terms - 1).rev() {
                v = v * &h + &a[p];
            }
            let mut d = prec.complex(&a[terms - 1]) * (terms as u32 - 1);
            for p in (1..terms - 1).rev() {
                d = d * &h + (prec.complex(&a[p]) * (p as u32));
            }
            value = v;
            deriv = d;
        }
    }
    out
}
