//! Parabolic cylinder function `D_{-1/2}` on the complex plane.
//!
//! The workhorse is the integral representation
//!
//! `D_{-1/2}(w) = e^{-w^2/4} / Gamma(1/2) * I(w)`,
//! `I(w) = integral_0^inf t^{-1/2} e^{-wt - t^2/2} dt
//!       = integral_{-inf}^{inf} e^{-w u^2 - u^4/2} du`  (`t = u^2`),
//!
//! whose substituted integrand is entire and decays like `e^{-u^4/2}`, so the
//! whole-line trapezoid rule converges geometrically; the step is halved
//! until two refinements agree. The sector asymptotic series (through its
//! `1/w^2` term) is kept alongside as an independent cross-check of the
//! quadrature and of the sector logic, and becomes the value itself for
//! `|w|` beyond the quadrature's tuned range.

use crate::numerics::PrecisionConfig;
use rug::{Complex, Float};

/// Quadrature is authoritative up to this modulus; beyond it the sector
/// series (whose truncation error ~ (105/128)/|w|^4 is far below rounding
/// at that size) takes over.
const QUADRATURE_RADIUS: f64 = 30.0;

/// Overlap annulus on which both regimes are computed and compared.
const OVERLAP_LO: f64 = 6.0;
const OVERLAP_HI: f64 = 10.0;

/// One evaluation of `D_{-1/2}`.
#[derive(Debug, Clone)]
pub struct PcfEval {
    pub value: Complex,
    /// Relative quadrature-vs-series disagreement, recorded on the overlap
    /// annulus `6 <= |w| <= 10`.
    pub regime_disagreement: Option<Float>,
    /// Set when the disagreement exceeds the series' own truncation bound —
    /// this indicates a genuine evaluation problem (wrong sector, exhausted
    /// quadrature), not the expected truncation-order residue.
    pub accuracy_loss: bool,
}

/// `D_{-1/2}(w)` with the regime cross-check. See [`pcf_d_minus_half_value`]
/// for the bare value.
pub fn pcf_d_minus_half(prec: PrecisionConfig, w: &Complex) -> PcfEval {
    let r = Float::with_val(prec.bits(), w.abs_ref()).to_f64();
    let by_quadrature = r <= QUADRATURE_RADIUS;
    let value = if by_quadrature {
        integral_representation(prec, w, false).0
    } else {
        asymptotic_series(prec, w)
    };
    let mut disagreement = None;
    let mut accuracy_loss = false;
    if (OVERLAP_LO..=OVERLAP_HI).contains(&r) {
        let series = asymptotic_series(prec, w);
        let diff = Complex::with_val(prec.bits(), &value - &series);
        let rel = Float::with_val(prec.bits(), diff.abs_ref())
            / Float::with_val(prec.bits(), value.abs_ref());
        // Truncation bound of the series kept through 1/w^2: the next term
        // has coefficient 105/128.
        let bound = (3.0 * 105.0 / 128.0 / r.powi(4)).max(1e-8);
        accuracy_loss = rel > bound;
        disagreement = Some(rel);
    }
    PcfEval {
        value,
        regime_disagreement: disagreement,
        accuracy_loss,
    }
}

/// Bare value of `D_{-1/2}(w)`.
pub fn pcf_d_minus_half_value(prec: PrecisionConfig, w: &Complex) -> Complex {
    let r = Float::with_val(prec.bits(), w.abs_ref()).to_f64();
    if r <= QUADRATURE_RADIUS {
        integral_representation(prec, w, false).0
    } else {
        asymptotic_series(prec, w)
    }
}

/// `d/dw D_{-1/2}(w)`, from differentiating the integral representation:
/// `D' = -(w/2) D - e^{-w^2/4}/sqrt(pi) * integral u^2 e^{-w u^2 - u^4/2} du`.
pub fn pcf_d_minus_half_derivative(prec: PrecisionConfig, w: &Complex) -> Complex {
    let (d, d2) = integral_representation(prec, w, true);
    let d2 = d2.expect("second moment requested");
    let half_w = prec.complex(w) / 2u32;
    -(half_w * &d) - d2
}

/// Trapezoid evaluation of the integral representation. Returns
/// `(D_{-1/2}(w), optional e^{-w^2/4}/sqrt(pi) * integral u^2 f(u) du)`.
fn integral_representation(
    prec: PrecisionConfig,
    w: &Complex,
    with_moment: bool,
) -> (Complex, Option<Complex>) {
    let bits = prec.bits();
    // |f| peaks at e^{a^2/2} for a = max(0, -Re w); that head-room is pure
    // cancellation against the e^{-w^2/4} prefactor and must be carried in
    // extra mantissa.
    let a = (-w.real().to_f64()).max(0.0);
    let guard = (0.7213 * a * a).ceil() as u32 + 64;
    let wp = PrecisionConfig::new(bits + guard).unwrap();
    let w_hi = wp.complex(w);

    // Truncation: e^{-U^4/2 + a U^2} below the target scale.
    let l = (bits as f64 + 32.0) * std::f64::consts::LN_2 + a * a / 2.0 + (1.0 + a).ln();
    let u_max = (a + (a * a + 2.0 * l).sqrt()).sqrt();

    let f = |u: &Float| -> Complex {
        let u2 = Float::with_val(wp.bits(), u.square_ref());
        let u4 = Float::with_val(wp.bits(), u2.square_ref());
        let expo = -(wp.complex(&w_hi) * &u2) - u4 / 2u32;
        expo.exp()
    };

    let mut n: usize = 256;
    let mut h = wp.float(u_max) / (n as u32);
    // S = h * (f(0) + 2 sum_{j>=1} f(jh)); M likewise with weight u^2.
    let mut s = wp.complex(1); // f(0) = 1
    let mut m = wp.zero();
    for j in 1..=n {
        let u = Float::with_val(wp.bits(), &h * (j as u32));
        let fu = f(&u);
        if with_moment {
            m += wp.complex(&fu) * Float::with_val(wp.bits(), u.square_ref());
        }
        s += fu * 2u32;
    }
    s *= &h;
    m *= &h;
    m *= 2u32;

    let tol = {
        let mut t = wp.float(1);
        t >>= bits + 8;
        t
    };
    let cap: usize = 1 << 16;
    while n < cap {
        // Refine by halving h: add the midpoints.
        let mut s_mid = wp.zero();
        let mut m_mid = wp.zero();
        for j in 0..n {
            let u = Float::with_val(wp.bits(), &h * (j as u32 * 2 + 1)) / 2u32;
            let fu = f(&u);
            if with_moment {
                m_mid += wp.complex(&fu) * Float::with_val(wp.bits(), u.square_ref());
            }
            s_mid += fu;
        }
        let s_new = wp.complex(&s) / 2u32 + s_mid * &h;
        let m_new = wp.complex(&m) / 2u32 + m_mid * &h;
        let diff = Float::with_val(wp.bits(), Complex::with_val(wp.bits(), &s_new - &s).abs_ref());
        let scale = Float::with_val(wp.bits(), s_new.abs_ref());
        let done = diff <= Float::with_val(wp.bits(), &tol * &scale);
        s = s_new;
        m = m_new;
        h /= 2u32;
        n *= 2;
        if done {
            break;
        }
    }

    // D = e^{-w^2/4} / sqrt(pi) * S.
    let pref = (-(wp.complex(w_hi.square_ref())) / 4u32).exp()
        / wp.float(wp.pi()).sqrt();
    let pref = pref;
    let value = prec.complex(Complex::with_val(wp.bits(), &pref * &s));
    let moment = with_moment.then(|| prec.complex(Complex::with_val(wp.bits(), &pref * &m)));
    (value, moment)
}

/// Sector asymptotic expansion of `D_{-1/2}(w)` through its `1/w^2` term.
///
/// With `psi` the principal argument of `w`:
/// * `|psi| <= pi/4`  — recessive term only;
/// * `psi > pi/4`     — plus `i sqrt(2) e^{w^2/4} w^{-1/2} (1 + 3/(8w^2))`;
/// * `psi < -pi/4`    — plus `-i sqrt(2) e^{w^2/4} w^{-1/2} (1 + 3/(8w^2))`.
pub fn asymptotic_series(prec: PrecisionConfig, w: &Complex) -> Complex {
    let bits = prec.bits();
    let wp = PrecisionConfig::new(bits + 64).unwrap();
    let w = wp.complex(w);
    let psi = Float::with_val(wp.bits(), w.arg_ref()).to_f64();
    let quarter_pi = std::f64::consts::FRAC_PI_4;

    let w2 = wp.complex(w.square_ref());
    let inv_sqrt_w = wp.complex(1) / wp.complex(&w).sqrt();
    let q = wp.complex(3) / (wp.complex(&w2) * 8u32);
    let exp_neg = (-(wp.complex(&w2)) / 4u32).exp();

    // e^{-w^2/4} w^{-1/2} (1 - 3/(8 w^2))
    let main = exp_neg * &inv_sqrt_w * (wp.complex(1) - &q);

    let total = if psi.abs() <= quarter_pi {
        main
    } else {
        let exp_pos = (wp.complex(&w2) / 4u32).exp();
        let sub = exp_pos * &inv_sqrt_w * (wp.complex(1) + &q);
        let sqrt2 = wp.float(2).sqrt();
        let coeff = wp.complex((0, 1)) * &sqrt2; // +i sqrt(2) for psi > pi/4
        let coeff = if psi > quarter_pi {
            coeff
        } else {
            -coeff
        };
        main + coeff * sub
    };
    prec.complex(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> PrecisionConfig {
        PrecisionConfig::new(256).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(256, (re, im))
    }

    #[test]
    fn value_at_zero_matches_closed_form() {
        // D_nu(0) = 2^{nu/2} sqrt(pi) / Gamma((1-nu)/2), nu = -1/2.
        let p = prec();
        let d0 = pcf_d_minus_half_value(p, &c(0.0, 0.0));
        let want = {
            let g = Float::with_val(256, 0.75).gamma();
            let num = Float::with_val(256, p.pi()).sqrt()
                / Float::with_val(256, 2).sqrt().sqrt();
            num / g
        };
        let err = Float::with_val(64, (p.complex(&d0) - p.complex(&want)).abs_ref());
        assert!(err.to_f64().abs() < 1e-60, "D(0) = {d0}");
        assert!((d0.real().to_f64() - 1.21628).abs() < 1e-5);
    }

    #[test]
    fn large_real_argument_matches_series_shape() {
        // D(10) * e^25 * sqrt(10) = 1 - 3/800 + O(1e-4).
        let p = prec();
        let d = pcf_d_minus_half_value(p, &c(10.0, 0.0));
        let scaled = Float::with_val(256, d.real())
            * Float::with_val(256, 25).exp()
            * Float::with_val(256, 10).sqrt();
        let want = 1.0 - 3.0 / 800.0;
        assert!((scaled.to_f64() - want).abs() < 1e-4);
        assert!(d.imag().to_f64().abs() < 1e-40);
    }

    #[test]
    fn regimes_agree_on_overlap_rays() {
        let p = prec();
        for arg_frac in [0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75] {
            let psi = std::f64::consts::PI * arg_frac;
            for r in [6.0f64, 8.0, 10.0] {
                let w = c(r * psi.cos(), r * psi.sin());
                let quad = integral_representation(p, &w, false).0;
                let series = asymptotic_series(p, &w);
                let diff = p.complex(&quad) - &series;
                let rel = Float::with_val(64, diff.abs_ref()).to_f64()
                    / Float::with_val(64, quad.abs_ref()).to_f64();
                // Truncation-order bound: next series coefficient is 105/128.
                let bound = 3.0 * 105.0 / 128.0 / r.powi(4) + 1e-8;
                assert!(
                    rel < bound,
                    "psi = {psi}, r = {r}: rel = {rel:e}, bound = {bound:e}"
                );
            }
        }
    }

    #[test]
    fn no_accuracy_loss_on_overlap() {
        let p = prec();
        let e = pcf_d_minus_half(p, &c(0.0, 7.0));
        assert!(!e.accuracy_loss);
        assert!(e.regime_disagreement.is_some());
        let e = pcf_d_minus_half(p, &c(2.0, 1.0));
        assert!(e.regime_disagreement.is_none());
    }

    #[test]
    fn weber_equation_residual() {
        // D'' + (1/2 - w^2/4 + nu) D = 0 with nu = -1/2, via central
        // differences at step 1e-4.
        let p = prec();
        let h = 1e-4;
        for i in 0..10 {
            let t = (i as f64 * 0.618_033_988_749_894_9).fract();
            let r = 5.0 * t;
            let phi = std::f64::consts::TAU * (i as f64 * 0.414_213_562_373_095).fract();
            let w = c(r * phi.cos(), r * phi.sin());
            let d0 = pcf_d_minus_half_value(p, &w);
            let dp = pcf_d_minus_half_value(p, &(p.complex(&w) + p.float(h)));
            let dm = pcf_d_minus_half_value(p, &(p.complex(&w) - p.float(h)));
            let second = (dp + dm - (p.complex(&d0) * 2u32)) / p.float(h * h);
            // residual = D'' - (w^2/4) D, relative to the equation's term
            // scale (|D| grows like e^{|w|^2/4} along the imaginary axis,
            // and the finite-difference truncation error scales with it).
            let rhs = (p.complex(w.square_ref()) / 4u32) * &d0;
            let resid = p.complex(&second) - &rhs;
            let scale = Float::with_val(64, rhs.abs_ref()).to_f64().max(1.0);
            let r = Float::with_val(64, resid.abs_ref()).to_f64() / scale;
            assert!(r.abs() < 1e-6, "w = {w}: residual {r:e}");
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = prec();
        let w = c(1.3, -0.7);
        let d = pcf_d_minus_half_derivative(p, &w);
        let h = 1e-8;
        let dp = pcf_d_minus_half_value(p, &(p.complex(&w) + p.float(h)));
        let dm = pcf_d_minus_half_value(p, &(p.complex(&w) - p.float(h)));
        let fd = (dp - dm) / p.float(2.0 * h);
        let err = Float::with_val(64, (p.complex(&d) - fd).abs_ref());
        assert!(err.to_f64() < 1e-12, "analytic {d}");
    }

    #[test]
    fn second_asymptotic_case_on_upper_ray() {
        // On Arg w = pi/2 at |w| = 12 the dominant e^{+w^2/4} term is in
        // play; the series with that term must match quadrature.
        let p = prec();
        let w = c(0.0, 12.0);
        let quad = integral_representation(p, &w, false).0;
        let series = asymptotic_series(p, &w);
        let rel = Float::with_val(64, (p.complex(&quad) - &series).abs_ref())
            .to_f64()
            / Float::with_val(64, quad.abs_ref()).to_f64();
        assert!(rel < 1e-4, "rel = {rel:e}");
        // On the negative real axis the e^{+w^2/4} term dominates; dropping
        // it there is catastrophically wrong (sector logic must include it).
        let w = c(-12.0, 0.0);
        let quad = integral_representation(p, &w, false).0;
        let series = asymptotic_series(p, &w);
        let rel = Float::with_val(64, (p.complex(&quad) - &series).abs_ref())
            .to_f64()
            / Float::with_val(64, quad.abs_ref()).to_f64();
        assert!(rel < 1e-4, "negative axis rel = {rel:e}");
        let main_only = {
            let w2 = p.complex(w.square_ref());
            let e = (-(p.complex(&w2)) / 4u32).exp();
            e / p.complex(&w).sqrt()
        };
        let rel_wrong = Float::with_val(64, (p.complex(&quad) - main_only).abs_ref())
            .to_f64()
            / Float::with_val(64, quad.abs_ref()).to_f64();
        assert!(rel_wrong > 0.5);
    }
}
