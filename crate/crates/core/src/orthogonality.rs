//! Numerical verification of the non-Hermitian contour orthogonality
//! relation for the two-parameter family `P_k^{(n+1/2, -n-1/2)}`:
//!
//! `integral_Gamma t^j p_k(t) w_n(t) dt = h(j,k) delta_{jk}`, `0 <= j <= k`,
//!
//! with the closed-form constants `h(j,k)` computed in an exact
//! `rational * sqrt(pi)` Gamma algebra so that the only floating-point error
//! on the target side is the final rounding of pi itself.

use crate::geometry::QuadratureContour;
use crate::jacobi::build_generic_p;
use crate::numerics::{integer_power, BranchEvaluator, NumericsError, PrecisionConfig};
use rug::{Complex, Float, Integer, Rational};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrthogonalityError {
    #[error("Gamma pole at non-positive integer argument {arg}")]
    GammaPole { arg: String },
    #[error("indices must satisfy 0 <= j <= k, got j = {j}, k = {k}")]
    InvalidIndices { j: usize, k: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Value of the Eulerian Gamma function at an argument with denominator 1
/// or 2, kept exact: `q * sqrt(pi)` when the argument is a half-integer,
/// plain rational `q` when it is a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HalfIntegerGamma {
    Exact { q: Rational, has_sqrt_pi: bool },
    Pole,
}

impl HalfIntegerGamma {
    pub fn is_pole(&self) -> bool {
        matches!(self, HalfIntegerGamma::Pole)
    }
}

/// Gamma at `arg`, which must have denominator 1 or 2.
pub fn gamma_half_integer(arg: &Rational) -> HalfIntegerGamma {
    let denom = arg.denom();
    if *denom == 1 {
        // Integer argument: (n-1)! for n >= 1, pole otherwise.
        let n = arg.numer().clone();
        if n <= 0 {
            return HalfIntegerGamma::Pole;
        }
        let n = n.to_u32().expect("factorial argument fits in u32");
        HalfIntegerGamma::Exact {
            q: Rational::from(Integer::factorial(n - 1)),
            has_sqrt_pi: false,
        }
    } else if *denom == 2 {
        // Walk the recursion Gamma(x+1) = x Gamma(x) from Gamma(1/2) = sqrt(pi).
        let half = Rational::from((1u32, 2u32));
        let mut q = Rational::from(1);
        let mut x = half;
        if *arg > x {
            while x < *arg {
                q *= &x;
                x += 1u32;
            }
        } else {
            while x > *arg {
                x -= 1u32;
                q /= &x;
            }
        }
        HalfIntegerGamma::Exact {
            q,
            has_sqrt_pi: true,
        }
    } else {
        panic!("gamma_half_integer requires denominator 1 or 2, got {arg}");
    }
}

/// Exact rational `r` with `h(j,k) = r * pi`, from
/// `h(j,k) = -pi^2 2^{k+2} / (Gamma(2k+2) Gamma(-k-j-1/2) Gamma(-k+j+1/2))`.
pub fn h_exact_rational(j: usize, k: usize) -> Result<Rational, OrthogonalityError> {
    if j > k {
        return Err(OrthogonalityError::InvalidIndices { j, k });
    }
    let g_int = gamma_half_integer(&Rational::from(2 * k as u64 + 2));
    let a1 = Rational::from((-2 * (k as i64 + j as i64) - 1, 2u64)); // -k-j-1/2
    let a2 = Rational::from((2 * (j as i64 - k as i64) + 1, 2u64)); // -k+j+1/2
    let g1 = gamma_half_integer(&a1);
    let g2 = gamma_half_integer(&a2);
    let (q0, q1, q2) = match (g_int, g1, g2) {
        (
            HalfIntegerGamma::Exact { q: q0, has_sqrt_pi: false },
            HalfIntegerGamma::Exact { q: q1, has_sqrt_pi: true },
            HalfIntegerGamma::Exact { q: q2, has_sqrt_pi: true },
        ) => (q0, q1, q2),
        _ => {
            return Err(OrthogonalityError::GammaPole {
                arg: format!("j = {j}, k = {k}"),
            })
        }
    };
    // -pi^2 2^{k+2} / (q0 q1 q2 pi) = -2^{k+2} / (q0 q1 q2) * pi.
    let two_pow = Rational::from(Integer::from(1) << (k as u32 + 2));
    Ok(-two_pow / (q0 * q1 * q2))
}

/// `h(j,k)` as a complex number at the working precision.
pub fn h_exact(j: usize, k: usize, prec: PrecisionConfig) -> Result<Complex, OrthogonalityError> {
    let r = h_exact_rational(j, k)?;
    Ok(prec.complex(prec.float(&r) * prec.pi()))
}

/// Exact rational `r` with `r * pi` equal to the diagonal norm constant
/// `integral t^k p_k(t) w_n(t) dt` of the degree-`k` polynomial of the
/// weight-index-`n` family:
///
/// `2^{k+2} Gamma(k+n+3/2) Gamma(k-n+1/2) / Gamma(2k+2)`.
///
/// Reflection across the Gamma poles shows this equals `h(n, k)` for
/// `n <= k`, so `h(j,k)` carries the weight index in its first slot: the
/// diagonal of the weight-`n` relation is `h(n,k)`, which coincides with
/// `h(k,k)` exactly when `n = k` — the only case the asymptotic analysis
/// ever uses. Off the diagonal the integral is zero regardless of `n`.
pub fn diagonal_norm_rational(k: usize, n: usize) -> Rational {
    let a1 = Rational::from((2 * (k + n) as i64 + 3, 2u64));
    let a2 = Rational::from((2 * (k as i64 - n as i64) + 1, 2u64));
    let (g1, g2) = match (gamma_half_integer(&a1), gamma_half_integer(&a2)) {
        (
            HalfIntegerGamma::Exact { q: g1, has_sqrt_pi: true },
            HalfIntegerGamma::Exact { q: g2, has_sqrt_pi: true },
        ) => (g1, g2),
        _ => unreachable!("half-integer Gamma arguments have no poles"),
    };
    let two_pow = Rational::from(Integer::from(1) << (k as u32 + 2));
    let fact = Rational::from(Integer::factorial(2 * k as u32 + 1));
    two_pow * g1 * g2 / fact
}

/// Weight `w_n(t) = ((1-t)/(1+t))^n w~(t)`, defined for `t` off `[-1, 1]`.
pub fn weight_wn(
    branch: &BranchEvaluator,
    t: &Complex,
    n: usize,
) -> Result<Complex, NumericsError> {
    let prec = branch.precision();
    let wt = branch.w_tilde(t)?;
    if n == 0 {
        return Ok(wt);
    }
    let denom = prec.complex(1) + t;
    if denom.is_zero() {
        return Err(NumericsError::PoleAtMinusOne);
    }
    let ratio = (prec.complex(1) - t) / denom;
    Ok(integer_power(prec, &ratio, n as u64) * wt)
}

/// One verified inner product.
#[derive(Debug, Clone)]
pub struct OrthogonalityReport {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub numeric: Complex,
    pub exact: Complex,
    pub abs_error: Float,
    pub within_tolerance: bool,
}

/// Trapezoid quadrature of `t^j p_k(t) w_n(t)` over the contour.
pub fn contour_inner_product(
    j: usize,
    k: usize,
    n: usize,
    contour: &QuadratureContour,
    prec: PrecisionConfig,
) -> Result<Complex, OrthogonalityError> {
    if j > k {
        return Err(OrthogonalityError::InvalidIndices { j, k });
    }
    let branch = BranchEvaluator::new(prec);
    let p = build_generic_p(k, n);
    let mut acc = prec.zero();
    for (t, w) in contour.nodes.iter().zip(&contour.weights) {
        let val = p.evaluate(t, prec)?;
        let wn = weight_wn(&branch, t, n)?;
        let t_j = integer_power(prec, t, j as u64);
        acc += t_j * val * wn * w;
    }
    Ok(acc)
}

/// Run the full grid `n <= n_max`, `k <= k_max`, `j <= k` against the
/// closed-form targets, flagging entries whose absolute error exceeds `tol`.
pub fn verify_orthogonality(
    n_max: usize,
    k_max: usize,
    contour: &QuadratureContour,
    prec: PrecisionConfig,
    tol: f64,
) -> Result<Vec<OrthogonalityReport>, OrthogonalityError> {
    let branch = BranchEvaluator::new(prec);
    let mut reports = Vec::new();
    for n in 0..=n_max {
        // Weight values are shared by every (k, j) at this n.
        let weights_n: Result<Vec<Complex>, NumericsError> = contour
            .nodes
            .iter()
            .map(|t| weight_wn(&branch, t, n))
            .collect();
        let weights_n = weights_n?;
        for k in 0..=k_max {
            let p = build_generic_p(k, n);
            let p_vals: Result<Vec<Complex>, NumericsError> = contour
                .nodes
                .iter()
                .map(|t| p.evaluate(t, prec))
                .collect();
            let p_vals = p_vals?;
            // Ascending powers of t per node, updated in place across j.
            let mut t_pow: Vec<Complex> = contour.nodes.iter().map(|_| prec.complex(1)).collect();
            for j in 0..=k {
                if j > 0 {
                    for (tp, t) in t_pow.iter_mut().zip(&contour.nodes) {
                        *tp *= t;
                    }
                }
                let mut acc = prec.zero();
                for idx in 0..contour.nodes.len() {
                    acc += prec.complex(&t_pow[idx] * &p_vals[idx])
                        * prec.complex(&weights_n[idx] * &contour.weights[idx]);
                }
                // Diagonal target: the norm constant of the weight-n family.
                let exact = if j == k {
                    prec.complex(prec.float(diagonal_norm_rational(k, n)) * prec.pi())
                } else {
                    prec.zero()
                };
                let abs_error =
                    Float::with_val(prec.bits(), (prec.complex(&acc) - &exact).abs_ref());
                reports.push(OrthogonalityReport {
                    n,
                    k,
                    j,
                    within_tolerance: abs_error.clone() < tol,
                    numeric: acc,
                    exact,
                    abs_error,
                });
            }
        }
    }
    Ok(reports)
}

/// CSV rows `n,k,j,re_numeric,im_numeric,exact,abs_error`.
pub fn reports_csv(reports: &[OrthogonalityReport]) -> String {
    let mut out = String::from("n,k,j,re_numeric,im_numeric,exact,abs_error\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{:e},{:e},{:e},{:e}\n",
            r.n,
            r.k,
            r.j,
            r.numeric.real().to_f64(),
            r.numeric.imag().to_f64(),
            r.exact.real().to_f64(),
            r.abs_error.to_f64()
        ));
    }
    out
}
