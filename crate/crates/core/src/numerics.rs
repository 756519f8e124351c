//! Multiprecision complex kernel and the branch-cut evaluators used by every
//! other module.
//!
//! All square roots here follow the convention of measuring the argument of
//! the radicand in `[0, 2pi)` rather than the principal `(-pi, pi]`, because
//! the two factors `(1+z)^{1/2}` and `(1-z)^{1/2}` are defined with branch
//! cuts opening to the *right* of -1 and +1 respectively. Exactly-on-cut
//! inputs take the half-open side (`theta = 0`).

use rug::float::Constant;
use rug::{Assign, Complex, Float};
use thiserror::Error;

/// Errors produced by the kernel evaluators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("pole at z = -1")]
    PoleAtMinusOne,
    #[error("argument lies on the branch cut (-inf,-1] U [1,inf)")]
    OnCut,
    #[error("z = 0 has no argument; the [0,2pi) square root is undefined there")]
    ZeroArgument,
    #[error("mantissa_bits = {bits} below required minimum {min}")]
    PrecisionTooLow { bits: u32, min: u32 },
}

/// Binary working precision for all floating-point kernels.
///
/// The rule of thumb for degree-`m` polynomial work is `bits >= 2m + 64`:
/// the raw coefficients grow like `4^m` and the extra 64 bits absorb
/// cancellation in Horner evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionConfig {
    bits: u32,
}

impl PrecisionConfig {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32) -> Result<Self, NumericsError> {
        if bits < Self::MIN_BITS {
            return Err(NumericsError::PrecisionTooLow {
                bits,
                min: Self::MIN_BITS,
            });
        }
        Ok(PrecisionConfig { bits })
    }

    /// Minimum precision for degree-`m` work, `2m + 64`, rounded up to a
    /// multiple of 64.
    pub fn for_degree(m: usize) -> Self {
        let raw = 2 * m as u32 + 64;
        PrecisionConfig {
            bits: raw.next_multiple_of(64),
        }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Whether this configuration satisfies the `2m + 64` rule for degree `m`.
    pub fn meets_degree_rule(self, m: usize) -> bool {
        self.bits as usize >= 2 * m + 64
    }

    /// Same mantissa with `extra` guard bits added.
    pub fn with_guard(self, extra: u32) -> Self {
        PrecisionConfig {
            bits: self.bits + extra,
        }
    }

    pub fn float<T>(self, val: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits, val)
    }

    pub fn complex<T>(self, val: T) -> Complex
    where
        Complex: Assign<T>,
    {
        Complex::with_val(self.bits, val)
    }

    pub fn zero(self) -> Complex {
        Complex::new(self.bits)
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.bits, Constant::Pi)
    }

    /// `2^-bits`, the relative rounding unit at this precision.
    pub fn epsilon(self) -> Float {
        let mut e = Float::with_val(self.bits, 1);
        e >>= self.bits;
        e
    }

    /// Unit complex number `e^{i theta}`.
    pub fn unit(self, theta: &Float) -> Complex {
        let (s, c) = theta.clone().sin_cos(Float::new(self.bits));
        self.complex((c, s))
    }
}

/// Argument of `w` normalized to `[0, 2pi)` at the precision of the result.
pub fn arg_2pi(prec: PrecisionConfig, w: &Complex) -> Float {
    let mut a = Float::with_val(prec.bits(), w.arg_ref());
    if a.is_sign_negative() && !a.is_zero() {
        a += 2 * prec.pi();
    }
    a
}

/// Square root with the radicand's argument taken in `[0, 2pi)`, so the
/// result's argument lies in `[0, pi)`.
pub fn sqrt_arg_2pi(prec: PrecisionConfig, w: &Complex) -> Complex {
    let s = prec.complex(w).sqrt();
    // Principal sqrt halves Arg in (-pi, pi]; for Arg(w) < 0 the [0,2pi)
    // convention lands on the opposite root.
    let arg = Float::with_val(prec.bits(), w.arg_ref());
    if arg < 0 {
        -s
    } else {
        s
    }
}

/// Evaluator bundle for the four branch-cut functions.
#[derive(Debug, Clone, Copy)]
pub struct BranchEvaluator {
    prec: PrecisionConfig,
}

impl BranchEvaluator {
    pub fn new(prec: PrecisionConfig) -> Self {
        BranchEvaluator { prec }
    }

    pub fn precision(&self) -> PrecisionConfig {
        self.prec
    }

    /// `(1+z)^{1/2} = |(1+z)^{1/2}| e^{i theta/2}` with `theta = Arg(z+1)`
    /// in `[0, 2pi)`; the cut opens along `(-1, +inf)`.
    pub fn sqrt_one_plus(&self, z: &Complex) -> Complex {
        let w = self.prec.complex(1) + z;
        sqrt_arg_2pi(self.prec, &w)
    }

    /// `(1-z)^{1/2} = |(1-z)^{1/2}| e^{i(phi+pi)/2}` with `phi = Arg(z-1)`
    /// in `[0, 2pi)`; the cut opens along `(1, +inf)`. Equals
    /// `i * sqrt_arg_2pi(z-1)`.
    pub fn sqrt_one_minus(&self, z: &Complex) -> Complex {
        let w = self.prec.complex(z) - 1u32;
        sqrt_arg_2pi(self.prec, &w).mul_i(false)
    }

    /// `w~(z) = (1-z)^{1/2} / (1+z)^{1/2}`, analytic in C \ [-1,1].
    pub fn w_tilde(&self, z: &Complex) -> Result<Complex, NumericsError> {
        let denom = self.sqrt_one_plus(z);
        if denom.is_zero() {
            return Err(NumericsError::PoleAtMinusOne);
        }
        Ok(self.sqrt_one_minus(z) / denom)
    }

    /// `w^(z)`: equal to `w~` on the upper half plane and `-w~` on the lower,
    /// analytic in C \ {(-inf,-1] U [1,inf)}; continuous across (-1,1).
    pub fn w_hat(&self, z: &Complex) -> Result<Complex, NumericsError> {
        let im = z.imag();
        if im.is_zero() {
            let re = z.real();
            if *re <= -1 || *re >= 1 {
                return Err(NumericsError::OnCut);
            }
        }
        let wt = self.w_tilde(z)?;
        // Im == 0 inside (-1,1) inherits the limit from above, which already
        // agrees with the limit from below after the sign flip.
        if *z.imag() < 0 {
            Ok(-wt)
        } else {
            Ok(wt)
        }
    }

    /// `z^{1/2} = |z^{1/2}| e^{i Arg(z)/2}` with `Arg(z)` in `[0, 2pi)`.
    pub fn sqrt_principal_2pi(&self, z: &Complex) -> Result<Complex, NumericsError> {
        if z.is_zero() {
            return Err(NumericsError::ZeroArgument);
        }
        Ok(sqrt_arg_2pi(self.prec, z))
    }
}

/// `z^m` by repeated squaring at the configured precision. Integer powers
/// carry no branch ambiguity.
pub fn integer_power(prec: PrecisionConfig, z: &Complex, m: u64) -> Complex {
    let mut acc = prec.complex(1);
    if m == 0 {
        return acc;
    }
    let mut base = prec.complex(z);
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base.square_mut();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::new(128).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(128, (re, im))
    }

    fn dist(a: &Complex, b: &Complex) -> f64 {
        Float::with_val(53, Complex::with_val(128, a - b).abs_ref()).to_f64()
    }

    /// Deterministic stand-in for "random" points: golden-ratio sequence.
    fn golden_seq(n: usize) -> impl Iterator<Item = f64> {
        (1..=n).map(|i| (i as f64 * 0.618_033_988_749_894_9).fract())
    }

    #[test]
    fn sqrt_one_plus_examples() {
        let b = BranchEvaluator::new(cfg());
        assert_eq!(dist(&b.sqrt_one_plus(&c(0.0, 0.0)), &c(1.0, 0.0)), 0.0);
        assert!(b.sqrt_one_plus(&c(-1.0, 0.0)).is_zero());
        // z = -i*eps approaches the cut from below: theta ~ 2pi, value ~ -1.
        let eps = 1e-6;
        let v = b.sqrt_one_plus(&c(0.0, -eps));
        assert!(dist(&v, &c(-1.0, 0.0)) < 1e-4);
    }

    #[test]
    fn sqrt_one_minus_examples() {
        let b = BranchEvaluator::new(cfg());
        assert!(b.sqrt_one_minus(&c(1.0, 0.0)).is_zero());
        let eps = 1e-6;
        assert!(dist(&b.sqrt_one_minus(&c(0.0, eps)), &c(-1.0, 0.0)) < 1e-4);
        assert!(dist(&b.sqrt_one_minus(&c(0.0, -eps)), &c(-1.0, 0.0)) < 1e-4);
    }

    #[test]
    fn w_tilde_boundary_values() {
        let b = BranchEvaluator::new(cfg());
        let eps = 1e-6;
        // Limit from below is +1, from above -1.
        assert!(dist(&b.w_tilde(&c(0.0, -eps)).unwrap(), &c(1.0, 0.0)) < 1e-4);
        assert!(dist(&b.w_tilde(&c(0.0, eps)).unwrap(), &c(-1.0, 0.0)) < 1e-4);
        // z = 3: |1-z| = 2, |1+z| = 4, so |w~| = 1/sqrt(2); phase is +i.
        let v = b.w_tilde(&c(3.0, 0.0)).unwrap();
        let want = Complex::with_val(128, (0, 1)) / Float::with_val(128, 2).sqrt();
        assert!(dist(&v, &want) < 1e-36);
        assert_eq!(
            b.w_tilde(&c(-1.0, 0.0)),
            Err(NumericsError::PoleAtMinusOne)
        );
    }

    #[test]
    fn w_tilde_jump_across_cut() {
        let b = BranchEvaluator::new(cfg());
        let eps = 1e-6;
        for t in golden_seq(100) {
            let x = -0.9 + 1.8 * t;
            let below = b.w_tilde(&c(x, -eps)).unwrap();
            let above = b.w_tilde(&c(x, eps)).unwrap();
            let plus = ((1.0 - x) / (1.0 + x)).sqrt();
            assert!(dist(&below, &c(plus, 0.0)) < 1e-4, "x = {x}");
            let sum = Complex::with_val(128, &above + &below);
            assert!(
                Float::with_val(53, sum.abs_ref()).to_f64() < 1e-4,
                "jump symmetry at x = {x}"
            );
        }
    }

    #[test]
    fn w_hat_continuity_and_cut() {
        let b = BranchEvaluator::new(cfg());
        let eps = 1e-6;
        assert!(dist(&b.w_hat(&c(0.0, eps)).unwrap(), &c(-1.0, 0.0)) < 1e-4);
        assert!(dist(&b.w_hat(&c(0.0, -eps)).unwrap(), &c(-1.0, 0.0)) < 1e-4);
        assert!(dist(&b.w_hat(&c(0.0, 0.0)).unwrap(), &c(-1.0, 0.0)) < 1e-30);
        for t in golden_seq(40) {
            let x = -0.9 + 1.8 * t;
            let above = b.w_hat(&c(x, eps)).unwrap();
            let below = b.w_hat(&c(x, -eps)).unwrap();
            assert!(dist(&above, &below) < 1e-4, "continuity at x = {x}");
        }
        assert_eq!(b.w_hat(&c(2.0, 0.0)), Err(NumericsError::OnCut));
        assert_eq!(b.w_hat(&c(-1.5, 0.0)), Err(NumericsError::OnCut));
    }

    #[test]
    fn sqrt_principal_2pi_examples() {
        let b = BranchEvaluator::new(cfg());
        assert_eq!(
            dist(&b.sqrt_principal_2pi(&c(1.0, 0.0)).unwrap(), &c(1.0, 0.0)),
            0.0
        );
        assert!(dist(&b.sqrt_principal_2pi(&c(-1.0, 0.0)).unwrap(), &c(0.0, 1.0)) < 1e-35);
        // Arg(-i) = 3pi/2 in [0,2pi), so the root has argument 3pi/4.
        let v = b.sqrt_principal_2pi(&c(0.0, -1.0)).unwrap();
        let w = c(
            -(0.5f64.sqrt()),
            0.5f64.sqrt(),
        );
        assert!(dist(&v, &w) < 1e-15);
        assert_eq!(
            b.sqrt_principal_2pi(&c(0.0, 0.0)),
            Err(NumericsError::ZeroArgument)
        );
    }

    #[test]
    fn squares_recover_radicand() {
        let prec = cfg();
        let b = BranchEvaluator::new(prec);
        let tol = Float::with_val(128, Float::i_exp(1, -120));
        for (i, t) in golden_seq(60).enumerate() {
            let r = 0.1 + 2.0 * t;
            let phi = 2.0 * std::f64::consts::PI * ((i as f64 * 0.414_213_562_373_095).fract());
            let z = c(r * phi.cos(), r * phi.sin());
            let sp = b.sqrt_one_plus(&z);
            let back = Complex::with_val(128, sp.square_ref());
            let target = Complex::with_val(128, &z + 1u32);
            let err = Complex::with_val(128, &back - &target);
            let rel = Float::with_val(128, err.abs_ref())
                / Float::with_val(128, target.abs_ref());
            assert!(rel < tol, "sqrt_one_plus squared at {z}");
            let sm = b.sqrt_one_minus(&z);
            let back = Complex::with_val(128, sm.square_ref());
            let target = Complex::with_val(128, 1u32 - &z);
            let err = Complex::with_val(128, &back - &target);
            let denom = Float::with_val(128, target.abs_ref());
            if !denom.is_zero() {
                let rel = Float::with_val(128, err.abs_ref()) / denom;
                assert!(rel < tol, "sqrt_one_minus squared at {z}");
            }
            if !z.is_zero() {
                let s = b.sqrt_principal_2pi(&z).unwrap();
                let back = Complex::with_val(128, s.square_ref());
                let err = Complex::with_val(128, &back - &z);
                let rel = Float::with_val(128, err.abs_ref())
                    / Float::with_val(128, z.abs_ref());
                assert!(rel < tol, "sqrt_principal_2pi squared at {z}");
            }
        }
    }

    #[test]
    fn integer_power_examples() {
        let prec = cfg();
        let one = integer_power(prec, &c(2.0, 0.0), 0);
        assert_eq!(dist(&one, &c(1.0, 0.0)), 0.0);
        let sq = integer_power(prec, &c(1.0, 1.0), 2);
        assert!(dist(&sq, &c(0.0, 2.0)) < 1e-35);
        // (1 - (-1.5)^2)^20 = (-1.25)^20, against a plain multiplication loop.
        let base = c(-1.25, 0.0);
        let fast = integer_power(prec, &base, 20);
        let mut slow = prec.complex(1);
        for _ in 0..20 {
            slow *= &base;
        }
        assert!(dist(&fast, &slow) < 1e-25);
        assert!((Float::with_val(53, fast.real()).to_f64() - 86.736_173_798_840_35).abs() < 1e-10);
    }

    #[test]
    fn precision_robustness() {
        // Doubling the mantissa moves reported values by less than the
        // coarser precision's tolerance.
        let lo = PrecisionConfig::new(128).unwrap();
        let hi = PrecisionConfig::new(256).unwrap();
        let bl = BranchEvaluator::new(lo);
        let bh = BranchEvaluator::new(hi);
        for t in golden_seq(25) {
            let z = c(1.8 * t - 0.9, 0.7 * t + 0.05);
            let a = bl.w_tilde(&z).unwrap();
            let b = bh.w_tilde(&z).unwrap();
            assert!(dist(&a, &b) < 1e-36);
        }
    }

    #[test]
    fn precision_config_rules() {
        assert!(PrecisionConfig::new(32).is_err());
        let p = PrecisionConfig::for_degree(50);
        assert_eq!(p.bits(), 192);
        assert!(p.meets_degree_rule(50));
        assert!(!p.meets_degree_rule(80));
    }
}
