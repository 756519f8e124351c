//! Lemniscate level curves, region classification, distance-to-curve, and
//! the circular quadrature contour.

use crate::numerics::PrecisionConfig;
use rug::{Complex, Float};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("contour radius {radius} must exceed 1 to enclose [-1,1]")]
    RadiusTooSmall { radius: String },
}

/// Which level curve a sample set lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// `|1 - z^2| = 1`, `Re z <= 0`.
    Left,
    /// `|1 - (3/2) z^2| = 1`, `Re z >= 0`.
    Right,
    /// `|1 - z^2| = rho`, `Re z <= 0`.
    ScaledLeft,
}

/// Ordered samples of one lemniscate half, parameterized by the angle of
/// `1 - z^2` (left curves) or `1 - (3/2) z^2` (right curve).
#[derive(Debug, Clone)]
pub struct LemniscateCurve {
    pub kind: CurveKind,
    pub rho: Float,
    /// `(theta_j, z_j)` ordered by increasing theta in `[0, 2pi)`.
    pub samples: Vec<(Float, Complex)>,
}

/// Point on the left-half curve `1 - z^2 = rho e^{i theta}`: the root with
/// `Re z <= 0` is `-sqrt_arg_2pi-free` principal root negated.
pub fn left_lemniscate_point(prec: PrecisionConfig, rho: &Float, theta: &Float) -> Complex {
    let w = prec.complex(1) - prec.unit(theta) * rho;
    -w.sqrt()
}

/// Point on the right-half curve `1 - (3/2) z^2 = e^{i theta}` with `Re z >= 0`.
pub fn right_lemniscate_point(prec: PrecisionConfig, theta: &Float) -> Complex {
    let w = (prec.complex(1) - prec.unit(theta)) * prec.float(2) / 3u32;
    w.sqrt()
}

/// `N` ordered samples of the requested curve. `rho` is only meaningful for
/// the scaled-left kind; the two `Sigma` halves use `rho = 1`.
pub fn sample_lemniscate(
    prec: PrecisionConfig,
    kind: CurveKind,
    rho: &Float,
    n: usize,
) -> LemniscateCurve {
    let rho = match kind {
        CurveKind::Left | CurveKind::Right => prec.float(1),
        CurveKind::ScaledLeft => prec.float(rho),
    };
    let two_pi = prec.pi() * 2u32;
    let samples = (0..n)
        .map(|j| {
            let theta: Float = two_pi.clone() * j as u32 / (n as u32);
            let z = match kind {
                CurveKind::Left | CurveKind::ScaledLeft => {
                    left_lemniscate_point(prec, &rho, &theta)
                }
                CurveKind::Right => right_lemniscate_point(prec, &theta),
            };
            (theta, z)
        })
        .collect();
    LemniscateCurve { kind, rho, samples }
}

/// Region parameters: the `u_eps` disk radius and the outer modulus bound of
/// the operational band.
#[derive(Debug, Clone, Copy)]
pub struct RegionParams {
    pub epsilon: f64,
    pub band_outer: f64,
}

impl Default for RegionParams {
    fn default() -> Self {
        RegionParams {
            epsilon: 0.25,
            band_outer: 1.35,
        }
    }
}

impl RegionParams {
    pub fn new(epsilon: f64, band_outer: f64) -> Self {
        assert!(
            epsilon > 0.0 && epsilon < 0.5,
            "epsilon must lie in (0, 0.5)"
        );
        assert!(band_outer > 1.0, "band_outer must exceed 1");
        RegionParams {
            epsilon,
            band_outer,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionLabel {
    /// `|1 - z^2| < 1`, `Re z <= 0`.
    InsideLeft,
    /// `1 < |1 - z^2| < band_outer`, `Re z <= 0` — the operational band in
    /// which the outer asymptotics are evaluated.
    OuterBand,
    Elsewhere,
}

/// Region label plus whether the point lies in the `u_eps` disk.
pub fn classify_region(
    prec: PrecisionConfig,
    z: &Complex,
    params: &RegionParams,
) -> (RegionLabel, bool) {
    let in_ueps = {
        let r = Float::with_val(prec.bits(), z.abs_ref());
        r < params.epsilon
    };
    let modulus = one_minus_z2_abs(prec, z);
    let label = if *z.real() <= 0 && modulus < 1 {
        RegionLabel::InsideLeft
    } else if *z.real() <= 0 && modulus > 1 && modulus < params.band_outer {
        RegionLabel::OuterBand
    } else {
        RegionLabel::Elsewhere
    };
    (label, in_ueps)
}

/// Distance from `z` to the lemniscate `|1 - w^2| = 1` (both half-curves),
/// via a dense parameter scan refined by golden-section search.
pub fn distance_to_left_lemniscate(prec: PrecisionConfig, z: &Complex) -> Float {
    let n = 4096usize;
    let two_pi = prec.pi() * 2u32;
    let one = prec.float(1);

    let dist_at = |theta: &Float| -> Float {
        let w = left_lemniscate_point(prec, &one, theta);
        let d_left = Float::with_val(prec.bits(), (prec.complex(z) - &w).abs_ref());
        // The curve |1 - w^2| = 1 is symmetric under w -> -w; take the
        // mirrored half into account as well.
        let d_right = Float::with_val(prec.bits(), (prec.complex(z) + &w).abs_ref());
        d_left.min(&d_right)
    };

    let mut best_j = 0usize;
    let mut best = None::<Float>;
    for j in 0..n {
        let theta: Float = two_pi.clone() * j as u32 / (n as u32);
        let d = dist_at(&theta);
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
            best_j = j;
        }
    }

    // Golden-section refine on [theta_{j-1}, theta_{j+1}].
    let h: Float = two_pi.clone() / (n as u32);
    let mut a: Float = h.clone() * (best_j as i64 - 1);
    let mut b: Float = h * (best_j as u64 + 1);
    let inv_phi = (prec.float(5).sqrt() - 1u32) / 2u32;
    let inv_phi = inv_phi;
    for _ in 0..200 {
        let span = Float::with_val(prec.bits(), &b - &a);
        let x1: Float = b.clone() - span.clone() * &inv_phi;
        let x2: Float = a.clone() + span * &inv_phi;
        if dist_at(&x1) < dist_at(&x2) {
            b = x2;
        } else {
            a = x1;
        }
        // The distance varies like sqrt(theta) where the curve meets the
        // origin, so the parameter bracket must shrink to ~tol^2.
        if Float::with_val(53, &b - &a).to_f64() < 1e-24 {
            break;
        }
    }
    let mid = (a + b) / 2u32;
    dist_at(&mid)
}

/// Circular quadrature contour enclosing `[-1, 1]`, with trapezoid
/// nodes/weights: `integral f dz ~ (2 pi i / N) sum_j z_j f(z_j)`.
#[derive(Debug, Clone)]
pub struct QuadratureContour {
    pub center: Complex,
    pub radius: Float,
    pub nodes: Vec<Complex>,
    /// `2 pi i (z_j - center) / N`, the trapezoid weight attached to node j.
    pub weights: Vec<Complex>,
}

impl QuadratureContour {
    /// Integrate `f` over the contour.
    pub fn integrate<F: FnMut(&Complex) -> Complex>(&self, mut f: F) -> Complex {
        let prec = self.nodes[0].prec().0;
        let mut acc = Complex::new(prec);
        for (z, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(z) * w;
        }
        acc
    }
}

/// Build the circle of the given radius about 0 with `N` equally spaced
/// nodes. Spectrally accurate for integrands analytic in an annulus around
/// the circle.
pub fn build_gamma_contour(
    prec: PrecisionConfig,
    radius: f64,
    n: usize,
) -> Result<QuadratureContour, GeometryError> {
    if radius <= 1.0 {
        return Err(GeometryError::RadiusTooSmall {
            radius: radius.to_string(),
        });
    }
    let two_pi = prec.pi() * 2u32;
    let r = prec.float(radius);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 0..n {
        let theta: Float = two_pi.clone() * j as u32 / (n as u32);
        let node = prec.unit(&theta) * &r;
        let node = node;
        let w: Complex = node.clone().mul_i(false) * &two_pi / (n as u32);
        nodes.push(node);
        weights.push(w);
    }
    Ok(QuadratureContour {
        center: prec.zero(),
        radius: r,
        nodes,
        weights,
    })
}

/// CSV for a sampled curve: `theta,re,im` per row.
pub fn curve_csv(curve: &LemniscateCurve) -> String {
    let mut out = String::from("theta,re,im\n");
    for (theta, z) in &curve.samples {
        out.push_str(&format!(
            "{},{},{}\n",
            theta.to_f64(),
            z.real().to_f64(),
            z.imag().to_f64()
        ));
    }
    out
}

// Convenience used by several modules: |1 - z^2| at the working precision.
pub(crate) fn one_minus_z2_abs(prec: PrecisionConfig, z: &Complex) -> Float {
    let w = prec.complex(1) - prec.complex(z.square_ref());
    Float::with_val(prec.bits(), w.abs_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> PrecisionConfig {
        PrecisionConfig::new(128).unwrap()
    }

    #[test]
    fn left_curve_landmarks() {
        let p = prec();
        let one = p.float(1);
        // theta = pi: 1 - z^2 = -1 means z = -sqrt(2).
        let z = left_lemniscate_point(p, &one, &p.pi());
        let want = -p.float(2).sqrt();
        let err = Float::with_val(64, (p.complex(&z) - p.complex(&want)).abs_ref());
        assert!(err.to_f64() < 1e-35);
        // theta -> 0: the curve passes through the origin.
        let z = left_lemniscate_point(p, &one, &p.float(1e-14));
        assert!(Float::with_val(64, z.abs_ref()).to_f64() < 1e-6);
    }

    #[test]
    fn right_curve_landmark() {
        let p = prec();
        let z = right_lemniscate_point(p, &p.pi());
        let want = (p.float(4) / 3u32).sqrt();
        let err = Float::with_val(64, (p.complex(&z) - p.complex(&want)).abs_ref());
        assert!(err.to_f64() < 1e-35);
    }

    #[test]
    fn samples_satisfy_defining_equation() {
        let p = prec();
        let rho = p.float(1.1);
        let curve = sample_lemniscate(p, CurveKind::ScaledLeft, &rho, 64);
        for (theta, z) in &curve.samples {
            let m = one_minus_z2_abs(p, z);
            let dev = (m - &rho).abs();
            assert!(dev.to_f64() < 1e-20, "theta = {theta}");
            assert!(z.real().to_f64() < 1e-20);
        }
        // Ordered by theta.
        for w in curve.samples.windows(2) {
            assert!(w[0].0 < w[1].0);
        }
    }

    #[test]
    fn classify_region_examples() {
        let p = prec();
        let params = RegionParams::default();
        let z = Complex::with_val(128, (-0.5, 0.0));
        assert_eq!(
            classify_region(p, &z, &params),
            (RegionLabel::InsideLeft, false)
        );
        let z = Complex::with_val(128, (-1.2, 0.0));
        assert_eq!(
            classify_region(p, &z, &params),
            (RegionLabel::InsideLeft, false)
        );
        let z = Complex::with_val(128, (0.0, 0.1));
        assert!(classify_region(p, &z, &params).1);
        // Conjugation symmetry on a deterministic sweep.
        for i in 0..50 {
            let re = -1.6 + 3.2 * ((i as f64 * 0.618_033_988_749_894_9).fract());
            let im = 1.5 * ((i as f64 * 0.414_213_562_373_095).fract());
            let z = Complex::with_val(128, (re, im));
            let zbar = Complex::with_val(128, (re, -im));
            assert_eq!(classify_region(p, &z, &params), classify_region(p, &zbar, &params));
        }
    }

    #[test]
    fn distance_examples() {
        let p = prec();
        // The origin lies on the curve.
        let d = distance_to_left_lemniscate(p, &Complex::with_val(128, (0, 0)));
        assert!(d.to_f64() < 1e-8);
        // So does -sqrt(2).
        let z = -Complex::with_val(128, (2, 0)).sqrt();
        let d = distance_to_left_lemniscate(p, &z);
        assert!(d.to_f64() < 1e-8);
        // Every sample of the unit left curve is at distance ~0.
        let curve = sample_lemniscate(p, CurveKind::Left, &p.float(1), 32);
        for (_, z) in &curve.samples {
            assert!(distance_to_left_lemniscate(p, z).to_f64() < 1e-8);
        }
    }

    #[test]
    fn distance_at_minus_one_matches_brute_force() {
        let p = prec();
        let z = Complex::with_val(128, (-1, 0));
        let d = distance_to_left_lemniscate(p, &z);
        // Brute-force oracle at high sample count.
        let n = 1_000_000usize;
        let mut best = f64::INFINITY;
        for j in 0..n {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let w = (1.0 - theta.cos(), -theta.sin());
            // complex sqrt of w, principal
            let r = (w.0 * w.0 + w.1 * w.1).sqrt().sqrt();
            let a = w.1.atan2(w.0) / 2.0;
            let (re, im) = (-r * a.cos(), -r * a.sin());
            let dd = ((re + 1.0).powi(2) + im.powi(2)).sqrt();
            if dd < best {
                best = dd;
            }
        }
        assert!((d.to_f64() - best).abs() < 1e-6, "refined {} vs brute {}", d.to_f64(), best);
    }

    #[test]
    fn contour_integrates_monomials() {
        let p = PrecisionConfig::new(128).unwrap();
        let c = build_gamma_contour(p, 2.0, 256).unwrap();
        // 1/z integrates to 2 pi i.
        let v = c.integrate(|z| p.complex(1) / z);
        let want = p.complex((0, 1)) * p.pi() * 2u32;
        let err = Float::with_val(64, (v - want).abs_ref());
        assert!(err.to_f64() < 1e-30);
        // z integrates to 0.
        let v = c.integrate(|z| p.complex(z));
        assert!(Float::with_val(64, v.abs_ref()).to_f64() < 1e-30);
        // z^k vanishes for every |k| <= 20 except k = -1.
        for k in -20i64..=20 {
            if k == -1 {
                continue;
            }
            let v = c.integrate(|z| {
                let pow = crate::numerics::integer_power(p, z, k.unsigned_abs());
                if k < 0 {
                    p.complex(1) / pow
                } else {
                    pow
                }
            });
            assert!(
                Float::with_val(64, v.abs_ref()).to_f64() < 1e-25,
                "k = {k}"
            );
        }
    }

    #[test]
    fn contour_radius_guard() {
        let p = prec();
        assert!(build_gamma_contour(p, 0.9, 64).is_err());
        assert!(build_gamma_contour(p, 1.0, 64).is_err());
    }

    #[test]
    fn gamma_contour_node_example() {
        let p = prec();
        let c = build_gamma_contour(p, 2.0, 8).unwrap();
        assert_eq!(c.nodes.len(), 8);
        let first = &c.nodes[0];
        assert!((first.real().to_f64() - 2.0).abs() < 1e-30);
        let quarter = &c.nodes[2];
        assert!((quarter.imag().to_f64() - 2.0).abs() < 1e-30);
    }
}
