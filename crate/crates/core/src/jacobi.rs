//! Exact construction and evaluation of the Jacobi family
//! `P_m^{(m+1/2, -m-1/2)}` and its monic normalization `pi_m`.
//!
//! Coefficients are kept as exact rationals and rounded only at evaluation
//! time: the zeros of a degree-100 member are far too ill-conditioned to
//! tolerate rounding inside the construction itself. Binomials with
//! half-integer upper argument are computed as falling-factorial rationals,
//! never through the Gamma function.

use crate::numerics::{NumericsError, PrecisionConfig};
use rug::{Complex, Integer, Rational};
use std::fmt::Write as _;

/// A polynomial with exact rational coefficients plus the Jacobi parameter
/// metadata it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPolynomial {
    /// Ascending powers; `coeffs.len() == degree + 1` and the top entry is
    /// nonzero (for degree 0 the single entry may be any constant).
    coeffs: Vec<Rational>,
    /// `alpha = n + 1/2` of the weight it is orthogonal against.
    alpha: Rational,
    /// `beta = -n - 1/2`.
    beta: Rational,
    /// Leading coefficient of the raw (non-monic) construction; for the
    /// diagonal family this is `kappa_m = C(2m, m) / 2^m`.
    kappa: Rational,
}

impl ExactPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn is_monic(&self) -> bool {
        *self.coeffs.last().unwrap() == 1u32
    }

    /// Horner evaluation at a complex point, rounding each coefficient to
    /// the working precision. Requires `bits >= 2*degree + 64`.
    pub fn evaluate(&self, z: &Complex, prec: PrecisionConfig) -> Result<Complex, NumericsError> {
        let m = self.degree();
        if !prec.meets_degree_rule(m) {
            return Err(NumericsError::PrecisionTooLow {
                bits: prec.bits(),
                min: 2 * m as u32 + 64,
            });
        }
        Ok(self.evaluate_unchecked(z, prec))
    }

    /// Horner evaluation without the precision-rule guard; callers that
    /// deliberately add guard bits use this directly.
    pub fn evaluate_unchecked(&self, z: &Complex, prec: PrecisionConfig) -> Complex {
        let mut acc = prec.complex(self.coeffs.last().unwrap());
        for c in self.coeffs.iter().rev().skip(1) {
            acc *= z;
            acc += c;
        }
        acc
    }

    /// Horner evaluation carrying enough guard bits to absorb the worst-case
    /// cancellation of this family (partial sums reach `~2.9^m` while values
    /// near the zero cluster sink to `~0.4^m`), then rounded back to the
    /// requested precision.
    pub fn evaluate_guarded(&self, z: &Complex, prec: PrecisionConfig) -> Complex {
        let guard = 3 * self.degree() as u32 + 128;
        let wide = self.evaluate_unchecked(z, prec.with_guard(guard));
        prec.complex(wide)
    }

    /// Exact Horner evaluation at a rational point.
    pub fn evaluate_rational(&self, x: &Rational) -> Rational {
        let mut acc = self.coeffs.last().unwrap().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Coefficients of the derivative polynomial.
    pub fn derivative_coeffs(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| Rational::from(c * Integer::from(i)))
            .collect()
    }

    /// JSON record `{"m": .., "kappa": "p/q", "coeffs": ["p/q", ..]}` with
    /// exact decimal-free rational strings.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        write!(s, "{{\"m\": {}, \"kappa\": \"{}\", \"coeffs\": [", self.degree(), self.kappa).unwrap();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            write!(s, "\"{c}\"").unwrap();
        }
        s.push_str("]}");
        s
    }
}

/// Binomial coefficient `C(u, k)` for rational `u`, as the falling-factorial
/// product `u (u-1) ... (u-k+1) / k!`.
fn binomial_rational(u: &Rational, k: usize) -> Rational {
    let mut acc = Rational::from(1);
    for i in 0..k {
        acc *= u - Rational::from(i as u64);
    }
    acc / Rational::from(Integer::factorial(k as u32))
}

/// `kappa_m = C(2m, m) / 2^m`, the leading coefficient of `P_m`.
pub fn kappa(m: usize) -> Rational {
    let binom = Integer::from(Integer::binomial_u(2 * m as u32, m as u32));
    Rational::from((binom, Integer::from(1) << m as u32))
}

/// `P_m(1) = (m + 3/2)_m / m!`, the closed-form value at +1.
pub fn p_value_at_one(m: usize) -> Rational {
    let mut poch = Rational::from(1);
    let start = Rational::from((2 * m as u64 + 3, 2u64));
    for i in 0..m {
        poch *= &start + Rational::from(i as u64);
    }
    poch / Rational::from(Integer::factorial(m as u32))
}

/// `P_k^{(n+1/2, -n-1/2)}` from the explicit sum
/// `2^{-k} sum_j C(k+a, k-j) C(k+b, j) (x-1)^j (x+1)^{k-j}`.
///
/// The full two-parameter family is needed internally for the contour
/// orthogonality checks; only the diagonal `k == n` is part of the public
/// surface.
pub(crate) fn build_generic_p(k: usize, n: usize) -> ExactPolynomial {
    let alpha = Rational::from((2 * n as u64 + 1, 2u64));
    let beta = -alpha.clone();
    let upper_a = &alpha + Rational::from(k as u64); // k + alpha
    let upper_b = &beta + Rational::from(k as u64); // k + beta

    // Pascal triangle for the integer binomials in (x -+ 1)^j.
    let mut pascal: Vec<Vec<Integer>> = Vec::with_capacity(k + 1);
    for row in 0..=k {
        let mut r = vec![Integer::from(1); row + 1];
        for i in 1..row {
            r[i] = Integer::from(&pascal[row - 1][i - 1] + &pascal[row - 1][i]);
        }
        pascal.push(r);
    }

    let mut acc = vec![Rational::new(); k + 1];
    for j in 0..=k {
        let a_j = binomial_rational(&upper_a, k - j) * binomial_rational(&upper_b, j);
        if a_j == 0 {
            continue;
        }
        // (x-1)^j (x+1)^{k-j}
        for i in 0..=j {
            let sign_neg = (j - i) % 2 == 1;
            let left = &pascal[j][i];
            for l in 0..=(k - j) {
                let mut term = Rational::from(&a_j * left);
                term *= &pascal[k - j][l];
                if sign_neg {
                    acc[i + l] -= term;
                } else {
                    acc[i + l] += term;
                }
            }
        }
    }
    let scale = Rational::from((Integer::from(1), Integer::from(1) << k as u32));
    for c in &mut acc {
        *c *= &scale;
    }
    let kappa = acc.last().unwrap().clone();
    ExactPolynomial {
        coeffs: acc,
        alpha,
        beta,
        kappa,
    }
}

/// `P_m = P_m^{(m+1/2, -m-1/2)}` with exact rational coefficients.
pub fn build_p(m: usize) -> ExactPolynomial {
    build_generic_p(m, m)
}

/// Monic normalization `pi_m = P_m / kappa_m`.
pub fn build_pi(m: usize) -> ExactPolynomial {
    let mut p = build_p(m);
    let k = p.kappa.clone();
    for c in &mut p.coeffs {
        *c /= &k;
    }
    p
}

/// Terminating hypergeometric sum
/// `P_m(z) = ((alpha+1)_m / m!) * 2F1(-m, m+1; m+3/2; (1-z)/2)`,
/// an oracle independent of the explicit coefficient construction.
pub fn evaluate_hypergeometric(m: usize, z: &Complex, prec: PrecisionConfig) -> Complex {
    let s: Complex = (prec.complex(1) - z) / 2u32;
    // Series coefficients r_j = (-m)_j (m+1)_j / ((m+3/2)_j j!), exact.
    let mut r = Rational::from(1);
    let mut sum = prec.complex(1);
    let mut s_pow = prec.complex(1);
    for j in 0..m {
        let num = Rational::from((j as i64 - m as i64) * (m as i64 + 1 + j as i64));
        let den = Rational::from((2 * m as u64 + 3 + 2 * j as u64, 2u64))
            * Rational::from(j as u64 + 1);
        r *= num / den;
        s_pow *= &s;
        sum += prec.complex(&r) * &s_pow;
    }
    sum * prec.complex(p_value_at_one(m))
}

#[cfg(test)]
mod tests {
    use rug::Float;
    use super::*;
    use rug::Assign;

    fn rat(n: i64, d: u64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn build_p_small_cases() {
        let p0 = build_p(0);
        assert_eq!(p0.coeffs(), &[rat(1, 1)]);

        let p1 = build_p(1);
        assert_eq!(p1.coeffs(), &[rat(3, 2), rat(1, 1)]);

        let p2 = build_p(2);
        assert_eq!(p2.coeffs(), &[rat(21, 8), rat(15, 4), rat(3, 2)]);
    }

    #[test]
    fn build_pi_small_cases() {
        let pi1 = build_pi(1);
        assert_eq!(pi1.coeffs(), &[rat(3, 2), rat(1, 1)]);
        assert_eq!(pi1.kappa(), &rat(1, 1));

        let pi2 = build_pi(2);
        assert_eq!(pi2.coeffs(), &[rat(7, 4), rat(5, 2), rat(1, 1)]);
        assert_eq!(pi2.kappa(), &rat(3, 2));
        assert!(pi2.is_monic());
    }

    #[test]
    fn leading_coefficient_is_kappa() {
        for m in 0..=60 {
            let p = build_p(m);
            assert_eq!(p.coeffs().last().unwrap(), &kappa(m), "m = {m}");
        }
    }

    #[test]
    fn monic_coeffs_are_exact_quotients() {
        for m in [3usize, 7, 12, 20] {
            let p = build_p(m);
            let pi = build_pi(m);
            for (c_p, c_pi) in p.coeffs().iter().zip(pi.coeffs()) {
                assert_eq!(Rational::from(c_pi * &kappa(m)), *c_p);
            }
        }
    }

    #[test]
    fn value_at_one_matches_pochhammer() {
        let one = Rational::from(1);
        for m in 1..=12 {
            let p = build_p(m);
            assert_eq!(p.evaluate_rational(&one), p_value_at_one(m), "m = {m}");
        }
    }

    #[test]
    fn evaluate_examples() {
        let prec = PrecisionConfig::new(128).unwrap();
        let pi1 = build_pi(1);
        let v = pi1
            .evaluate(&Complex::with_val(128, (1, 0)), prec)
            .unwrap();
        let err = Float::with_val(64, (v - Complex::with_val(128, (2.5, 0.0))).abs_ref());
        assert!(err.to_f64() == 0.0);

        // pi_2 vanishes at -5/4 + i sqrt(3)/4.
        let pi2 = build_pi(2);
        let root = {
            let mut im = Float::with_val(128, 3);
            im.sqrt_mut();
            im /= 4u32;
            let mut z = Complex::new(128);
            z.assign((Float::with_val(128, -1.25), im));
            z
        };
        let v = pi2.evaluate(&root, prec).unwrap();
        assert!(Float::with_val(64, v.abs_ref()).to_f64() < 1e-35);
    }

    #[test]
    fn evaluate_precision_guard() {
        let prec = PrecisionConfig::new(64).unwrap();
        let p = build_p(10);
        let z = Complex::with_val(64, (0, 0));
        assert!(matches!(
            p.evaluate(&z, prec),
            Err(NumericsError::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn hypergeometric_examples() {
        let prec = PrecisionConfig::new(128).unwrap();
        let v = evaluate_hypergeometric(1, &Complex::with_val(128, (1, 0)), prec);
        assert!(Float::with_val(64, (v - Complex::with_val(128, (2.5, 0.0))).abs_ref()).to_f64() == 0.0);

        let v = evaluate_hypergeometric(2, &Complex::with_val(128, (0, 0)), prec);
        let want = Complex::with_val(128, &rat(21, 8));
        assert!(Float::with_val(64, (v - want).abs_ref()).to_f64() < 1e-37);
    }

    #[test]
    fn dual_route_agreement() {
        let prec = PrecisionConfig::new(128).unwrap();
        let z = Complex::with_val(128, (0.3, 0.4));
        let direct = build_p(5).evaluate(&z, prec).unwrap();
        let hyper = evaluate_hypergeometric(5, &z, prec);
        let err = Float::with_val(64, (direct - hyper).abs_ref());
        assert!(err.to_f64() < 1e-25);

        // Deterministic sweep over |z| <= 2 for a range of degrees.
        for m in [3usize, 8, 13, 20] {
            let p = build_p(m);
            for i in 1..=50u32 {
                let t = (i as f64 * 0.618_033_988_749_894_9).fract();
                let r = 2.0 * t;
                let phi = std::f64::consts::TAU * (i as f64 * 0.414_213_562_373_095).fract();
                let z = Complex::with_val(128, (r * phi.cos(), r * phi.sin()));
                let a = p.evaluate(&z, prec).unwrap();
                let b = evaluate_hypergeometric(m, &z, prec);
                let diff = Float::with_val(128, Complex::with_val(128, &a - &b).abs_ref());
                let denom = Float::with_val(128, a.abs_ref()) + 1u32;
                let rel: Float = diff / denom;
                assert!(rel < Float::with_val(64, Float::i_exp(1, -64)), "m={m} i={i}");
            }
        }
    }

    #[test]
    fn json_export_shape() {
        let s = build_pi(2).to_json();
        assert_eq!(
            s,
            "{\"m\": 2, \"kappa\": \"3/2\", \"coeffs\": [\"7/4\", \"5/2\", \"1\"]}"
        );
    }
}
