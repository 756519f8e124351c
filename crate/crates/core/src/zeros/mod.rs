//! Certified zeros of `pi_m`, the explicitly predicted zeros they approach,
//! pairing between the two sets, and convergence-rate measurements.

mod solver;

pub use solver::{aberth_solve, durand_kerner_oracle};

use crate::asymptotics::{lambda_inverse, lambda_map, q_local};
use crate::geometry::{
    classify_region, distance_to_left_lemniscate, left_lemniscate_point, RegionLabel, RegionParams,
};
use crate::jacobi::ExactPolynomial;
use crate::numerics::{NumericsError, PrecisionConfig};
use rug::ops::Pow;
use rug::{Complex, Float};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroError {
    #[error("iteration did not converge within {iterations} sweeps")]
    NoConvergence { iterations: usize },
    #[error("certification failed: {clause}")]
    CertificationFailed { clause: String },
    #[error("sets outside u_eps differ by more than 2 ({predicted} predicted vs {computed} computed)")]
    UnmatchedZeros { predicted: usize, computed: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Computed roots with the certification bookkeeping attached.
#[derive(Debug, Clone)]
pub struct ZeroSet {
    pub m: usize,
    /// Ordered by ascending argument of `1 - z^2`.
    pub roots: Vec<Complex>,
    /// `|pi_m(z_k)|`, evaluated with solver guard bits.
    pub residuals: Vec<Float>,
    /// `|pi_m(z_k) / pi_m'(z_k)|`, the Newton radius of each root.
    pub newton_radii: Vec<Float>,
    pub min_separation: Float,
    pub vieta_sum_dev: Float,
    pub vieta_prod_dev: Float,
    pub precision_bits: u32,
}

/// One explicitly predicted zero: `1 - z^2 = rho e^{i theta_k}` on the
/// left branch.
#[derive(Debug, Clone)]
pub struct PredictedZero {
    pub k: usize,
    pub theta: Float,
    pub rho: Float,
    pub z: Complex,
}

#[derive(Debug, Clone)]
pub struct PredictedZeroSet {
    pub m: usize,
    pub entries: Vec<PredictedZero>,
}

/// Injective pairing between a predicted and a computed set.
#[derive(Debug, Clone)]
pub struct PairingReport {
    /// `(predicted, computed, distance)` for each accepted pair.
    pub pairs: Vec<(Complex, Complex, f64)>,
    pub unmatched_predicted: Vec<Complex>,
    pub unmatched_computed: Vec<Complex>,
    pub max_distance: f64,
}

#[derive(Debug, Clone)]
pub struct CertificationReport {
    pub max_residual: Float,
    pub residual_tolerance: Float,
    pub vieta_sum_dev: Float,
    pub vieta_prod_dev: Float,
    pub conjugation_ok: bool,
    pub separation_ok: bool,
    pub min_separation: Float,
}

/// Solve for the zeros of the monic family member of degree `m` with the
/// predicted zeros as starting points.
pub fn solve_pi(m: usize, prec: PrecisionConfig) -> Result<(ExactPolynomial, ZeroSet), ZeroError> {
    let poly = crate::jacobi::build_pi(m);
    let zs = aberth_solve(&poly, prec, None, None)?;
    Ok((poly, zs))
}

/// Certify a computed set against its polynomial: residual bound, Vieta
/// identities, conjugation closure, and Newton-radius separation.
pub fn certify(
    zs: &ZeroSet,
    poly: &ExactPolynomial,
) -> Result<CertificationReport, ZeroError> {
    let prec = PrecisionConfig::new(zs.precision_bits).unwrap();
    let bits = prec.bits();
    // Tolerance: 2^{-bits/2} * max coefficient magnitude.
    let scale = poly
        .coeffs()
        .iter()
        .map(|c| prec.float(c).abs())
        .fold(prec.float(0), |acc, v| acc.max(&v));
    let tol = {
        let mut t = prec.float(&scale);
        t >>= bits / 2;
        t
    };

    let max_residual = zs
        .residuals
        .iter()
        .fold(prec.float(0), |acc, r| acc.max(r));
    if max_residual > tol {
        return Err(ZeroError::CertificationFailed {
            clause: format!(
                "residual bound: max |pi_m(z)| = {:e} exceeds {:e}",
                max_residual.to_f64(),
                tol.to_f64()
            ),
        });
    }
    if zs.m > 0 && (zs.vieta_sum_dev > tol || zs.vieta_prod_dev > tol) {
        return Err(ZeroError::CertificationFailed {
            clause: format!(
                "Vieta identities: sum dev {:e}, product dev {:e}, tolerance {:e}",
                zs.vieta_sum_dev.to_f64(),
                zs.vieta_prod_dev.to_f64(),
                tol.to_f64()
            ),
        });
    }

    // Conjugation closure within certification radii.
    let mut conjugation_ok = true;
    for (i, z) in zs.roots.iter().enumerate() {
        let conj = prec.complex(z).conj();
        let mut best = prec.float(f64::INFINITY);
        for w in &zs.roots {
            let d = Float::with_val(bits, (prec.complex(&conj) - w).abs_ref());
            if d < best {
                best = d;
            }
        }
        let allow = {
            let mut a = prec.float(1);
            a >>= bits / 2;
            a + Float::with_val(bits, &zs.newton_radii[i] * 10u32)
        };
        if best > allow {
            conjugation_ok = false;
        }
    }
    if !conjugation_ok {
        return Err(ZeroError::CertificationFailed {
            clause: "conjugation closure".into(),
        });
    }

    // Pairwise separation must dominate the Newton radii.
    let max_radius = zs
        .newton_radii
        .iter()
        .fold(prec.float(0), |acc, r| acc.max(r));
    let separation_ok =
        zs.m < 2 || zs.min_separation > (prec.float(&max_radius) * 10u32);
    if !separation_ok {
        return Err(ZeroError::CertificationFailed {
            clause: "Newton-radius separation".into(),
        });
    }

    Ok(CertificationReport {
        max_residual,
        residual_tolerance: tol,
        vieta_sum_dev: zs.vieta_sum_dev.clone(),
        vieta_prod_dev: zs.vieta_prod_dev.clone(),
        conjugation_ok,
        separation_ok,
        min_separation: zs.min_separation.clone(),
    })
}

/// The `m` explicit zeros of `q(m, .)`: on `|1 - z^2| = rho = 2^{1/(2m+1)}`
/// with `(m + 1/2) theta_k = 3 pi/2 + 2 pi (k-1)`, `k = 1..m`, taking the
/// left branch of the level curve.
///
/// The phase residue is pinned by the branch product
/// `(1-z)^{1/2} (1+z)^{1/2} = -(rho^{1/2} e^{i theta/2})` on the left ring
/// (continuous, squares correctly, checked at theta = pi), which flips the
/// naive `pi/2` residue by `pi`; this enumeration is the one that makes
/// `q(m, z_k*) = 0` exactly and puts a real zero at `theta = pi` precisely
/// for odd `m`.
pub fn predicted_zeros_outer(prec: PrecisionConfig, m: usize) -> PredictedZeroSet {
    let rho = {
        let ln2 = prec.float(2).ln();
        (ln2 / (2 * m as u32 + 1)).exp()
    };
    let pi = prec.pi();
    let mut entries = Vec::with_capacity(m);
    for k in 1..=m {
        let theta: Float = ((prec.float(3) * &pi / 2u32 + prec.float(2 * (k as u32 - 1)) * &pi) / prec.float(2 * m as u32 + 1)) * 2u32;
        let z = left_lemniscate_point(prec, &rho, &theta);
        entries.push(PredictedZero {
            k,
            theta,
            rho: rho.clone(),
            z,
        });
    }
    PredictedZeroSet { m, entries }
}

/// Greedy globally-shortest-edge injective matching. An edge is accepted
/// only when it is shorter than half the local spacing of the predicted
/// set, so a genuinely displaced zero goes to the unmatched lists instead
/// of grabbing a neighbour.
fn greedy_match(
    prec: PrecisionConfig,
    predicted: &[Complex],
    computed: &[Complex],
) -> PairingReport {
    // Local spacing of each predicted point: distance to nearest other.
    let spacing: Vec<f64> = predicted
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut best = f64::INFINITY;
            for (j, q) in predicted.iter().enumerate() {
                if i != j {
                    let d = Float::with_val(
                        prec.bits(),
                        (prec.complex(p) - q).abs_ref(),
                    )
                    .to_f64();
                    best = best.min(d);
                }
            }
            if best.is_finite() {
                best
            } else {
                f64::INFINITY
            }
        })
        .collect();

    let mut edges = Vec::with_capacity(predicted.len() * computed.len());
    for (i, p) in predicted.iter().enumerate() {
        for (j, c) in computed.iter().enumerate() {
            let d = Float::with_val(prec.bits(), (prec.complex(p) - c).abs_ref())
                .to_f64();
            edges.push((d, i, j));
        }
    }
    edges.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut used_p = vec![false; predicted.len()];
    let mut used_c = vec![false; computed.len()];
    let mut pairs = Vec::new();
    let mut max_distance: f64 = 0.0;
    for (d, i, j) in edges {
        if used_p[i] || used_c[j] {
            continue;
        }
        let limit = 0.5 * spacing[i];
        if d > limit {
            continue;
        }
        used_p[i] = true;
        used_c[j] = true;
        max_distance = max_distance.max(d);
        pairs.push((predicted[i].clone(), computed[j].clone(), d));
    }
    let unmatched_predicted = predicted
        .iter()
        .zip(&used_p)
        .filter(|(_, u)| !**u)
        .map(|(z, _)| z.clone())
        .collect();
    let unmatched_computed = computed
        .iter()
        .zip(&used_c)
        .filter(|(_, u)| !**u)
        .map(|(z, _)| z.clone())
        .collect();
    PairingReport {
        pairs,
        unmatched_predicted,
        unmatched_computed,
        max_distance,
    }
}

/// Pair computed against predicted zeros outside `u_eps`.
pub fn pair_zeros(
    computed: &ZeroSet,
    predicted: &PredictedZeroSet,
    region: &RegionParams,
) -> Result<PairingReport, ZeroError> {
    let prec = PrecisionConfig::new(computed.precision_bits).unwrap();
    let outside = |z: &&Complex| -> bool {
        Float::with_val(prec.bits(), z.abs_ref()).to_f64() >= region.epsilon
    };
    let pred: Vec<Complex> = predicted
        .entries
        .iter()
        .map(|e| &e.z)
        .filter(outside)
        .cloned()
        .collect();
    let comp: Vec<Complex> = computed.roots.iter().filter(outside).cloned().collect();
    if pred.len().abs_diff(comp.len()) > 2 {
        return Err(ZeroError::UnmatchedZeros {
            predicted: pred.len(),
            computed: comp.len(),
        });
    }
    Ok(greedy_match(prec, &pred, &comp))
}

/// Census of real zeros: a root counts as real when its imaginary part is
/// below ten times its Newton radius.
pub fn real_zero_census(zs: &ZeroSet) -> (usize, Vec<Float>) {
    let prec = PrecisionConfig::new(zs.precision_bits).unwrap();
    let mut reals = Vec::new();
    for (z, radius) in zs.roots.iter().zip(&zs.newton_radii) {
        let floor = {
            let mut f = prec.float(1);
            f >>= zs.precision_bits - 8;
            f
        };
        let allow = (prec.float(radius) * 10u32).max(&floor);
        let im = prec.float(z.imag()).abs();
        if im < allow {
            reals.push(prec.float(z.real()));
        }
    }
    (reals.len(), reals)
}

/// Per-degree convergence measurements toward the unit left lemniscate.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub m: usize,
    /// Max over zeros outside `u_eps` of the distance to `|1-z^2| = 1`.
    pub max_dist: f64,
    /// Max over all zeros of `|z + 1|`.
    pub max_mod_plus1: f64,
}

/// Measure one already-computed set.
pub fn convergence_row(zs: &ZeroSet, region: &RegionParams) -> ConvergenceRow {
    let prec = PrecisionConfig::new(zs.precision_bits).unwrap();
    let mut max_dist: f64 = 0.0;
    let mut max_mod: f64 = 0.0;
    for z in &zs.roots {
        let modulus = Float::with_val(prec.bits(), z.abs_ref()).to_f64();
        if modulus >= region.epsilon {
            let d = distance_to_left_lemniscate(prec, z).to_f64();
            max_dist = max_dist.max(d);
        }
        let mp = Float::with_val(
            prec.bits(),
            (prec.complex(z) + 1u32).abs_ref(),
        )
        .to_f64();
        max_mod = max_mod.max(mp);
    }
    ConvergenceRow {
        m: zs.m,
        max_dist,
        max_mod_plus1: max_mod,
    }
}

/// Solve each listed degree and measure it. Degrees must be ascending.
pub fn lemniscate_convergence(
    ms: &[usize],
    region: &RegionParams,
) -> Result<Vec<ConvergenceRow>, ZeroError> {
    assert!(ms.windows(2).all(|w| w[0] < w[1]), "degrees must ascend");
    let mut rows = Vec::with_capacity(ms.len());
    for &m in ms {
        let prec = PrecisionConfig::for_degree(m);
        let (_, zs) = solve_pi(m, prec)?;
        rows.push(convergence_row(&zs, region));
    }
    Ok(rows)
}

/// All zeros of `q_l` in `|xi| < r`, located by a coarse modulus scan
/// (step 0.25) refined with Newton polishing on a finite-difference
/// derivative. Zeros of `q_l` are simple, so Newton contracts immediately.
pub fn local_zero_candidates(prec: PrecisionConfig, r: f64) -> Vec<Complex> {
    local_zero_candidates_with_step(prec, r, 0.25)
}

/// Candidate search at an explicit scan step; the default step is 0.25 and
/// halving it must reproduce the same zero set (refinement stability).
pub fn local_zero_candidates_with_step(prec: PrecisionConfig, r: f64, step: f64) -> Vec<Complex> {
    assert!(r <= 8.0, "candidate search is tuned for |xi| < 8");
    let scan_prec = PrecisionConfig::new(128).unwrap();
    let n = (2.0 * r / step).ceil() as i64 + 1;

    // Modulus samples on the grid.
    let mut samples = std::collections::HashMap::new();
    for iy in 0..n {
        for ix in 0..n {
            let x = -r + step * ix as f64;
            let y = -r + step * iy as f64;
            if (x * x + y * y).sqrt() > r + step {
                continue;
            }
            let q = q_local(scan_prec, &Complex::with_val(128, (x, y)));
            samples.insert((ix, iy), Float::with_val(64, q.abs_ref()).to_f64());
        }
    }

    // Seeds: strict local minima of |q_l| over the 8-neighbourhood.
    let mut seeds = Vec::new();
    for (&(ix, iy), &v) in &samples {
        let mut is_min = true;
        for dx in -1..=1i64 {
            for dy in -1..=1i64 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                if let Some(&w) = samples.get(&(ix + dx, iy + dy)) {
                    if w <= v {
                        is_min = false;
                    }
                } else {
                    is_min = false; // boundary cells are not trusted
                }
            }
        }
        if is_min {
            seeds.push(Complex::with_val(
                prec.bits(),
                (-r + step * ix as f64, -r + step * iy as f64),
            ));
        }
    }

    // Newton polish with a central finite-difference derivative.
    let mut zeros: Vec<Complex> = Vec::new();
    let h = prec.float(1e-8);
    for seed in seeds {
        let mut xi = seed;
        let mut converged = false;
        for _ in 0..48 {
            let q = q_local(prec, &xi);
            let qsize = Float::with_val(64, q.abs_ref()).to_f64();
            if qsize < 1e-12 {
                converged = true;
                break;
            }
            let qp = q_local(prec, &(prec.complex(&xi) + &h));
            let qm = q_local(prec, &(prec.complex(&xi) - &h));
            let dq = (qp - qm) / (prec.complex(&h) * 2u32);
            if dq.is_zero() {
                break;
            }
            let stp = q / dq;
            let move_size = Float::with_val(64, stp.abs_ref()).to_f64();
            xi -= stp;
            if move_size < 1e-13 {
                converged = true;
                break;
            }
        }
        if !converged {
            continue;
        }
        let q = q_local(prec, &xi);
        if Float::with_val(64, q.abs_ref()).to_f64() >= 1e-8 {
            continue;
        }
        if Float::with_val(prec.bits(), xi.abs_ref()).to_f64() >= r {
            continue;
        }
        let dup = zeros.iter().any(|z| {
            Float::with_val(prec.bits(), (prec.complex(z) - &xi).abs_ref())
                .to_f64()
                < 1e-4
        });
        if !dup {
            zeros.push(xi);
        }
    }
    zeros.sort_by(|a, b| {
        let ka = (
            Float::with_val(64, a.abs_ref()).to_f64(),
            Float::with_val(64, a.arg_ref()).to_f64(),
        );
        let kb = (
            Float::with_val(64, b.abs_ref()).to_f64(),
            Float::with_val(64, b.arg_ref()).to_f64(),
        );
        ka.partial_cmp(&kb).unwrap()
    });
    zeros
}

/// Pair the `xi`-plane zeros of `q_l` against the mapped zeros of `pi_m`
/// that lie in the upper part of the band inside `u_eps`. Candidates are
/// kept only when their pullback `z(xi*)` lands in that same region, which
/// is where the local model applies.
pub fn local_pairing(
    zs: &ZeroSet,
    r: f64,
    region: &RegionParams,
) -> Result<PairingReport, ZeroError> {
    let prec = PrecisionConfig::new(zs.precision_bits).unwrap();
    let m = zs.m;

    let candidates: Vec<Complex> = local_zero_candidates(prec, r)
        .into_iter()
        .filter(|xi| {
            let Ok(z) = lambda_inverse(prec, m, xi) else {
                return false;
            };
            let (label, in_ueps) = classify_region(prec, &z, region);
            label == RegionLabel::OuterBand && in_ueps && *z.imag() > 0
        })
        .collect();

    let mapped: Vec<Complex> = zs
        .roots
        .iter()
        .filter(|z| {
            let modulus = Float::with_val(prec.bits(), z.abs_ref()).to_f64();
            modulus < region.epsilon && *z.imag() > 0
        })
        .filter_map(|z| lambda_map(prec, m, z).ok())
        .collect();

    Ok(greedy_match(prec, &candidates, &mapped))
}

/// CSV rows for a computed set: `m,k,re,im,residual`.
pub fn zeros_csv(zs: &ZeroSet) -> String {
    let mut out = String::from("m,k,re,im,residual\n");
    for (k, (z, r)) in zs.roots.iter().zip(&zs.residuals).enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{:e}\n",
            zs.m,
            k + 1,
            z.real().to_f64(),
            z.imag().to_f64(),
            r.to_f64()
        ));
    }
    out
}

/// CSV rows for a predicted set: `m,k,theta,re,im`.
pub fn predicted_csv(ps: &PredictedZeroSet) -> String {
    let mut out = String::from("m,k,theta,re,im\n");
    for e in &ps.entries {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            ps.m,
            e.k,
            e.theta.to_f64(),
            e.z.real().to_f64(),
            e.z.imag().to_f64()
        ));
    }
    out
}

/// CSV rows for a pairing: `m,re_star,im_star,re_comp,im_comp,dist`.
pub fn pairing_csv(m: usize, report: &PairingReport) -> String {
    let mut out = String::from("m,re_star,im_star,re_comp,im_comp,dist\n");
    for (p, c, d) in &report.pairs {
        out.push_str(&format!(
            "{},{},{},{},{},{:e}\n",
            m,
            p.real().to_f64(),
            p.imag().to_f64(),
            c.real().to_f64(),
            c.imag().to_f64(),
            d
        ));
    }
    out
}

/// Rouche-style diagnostic boxes around each predicted zero, as CSV:
/// `m,k,rho_lo,rho_hi,theta_lo,theta_hi`. The radial bounds are
/// `2^{(1/(2m+1)) (sqrt(m) -+ 1)/sqrt(m)}` and the angular half-width is
/// `ln(2)/(sqrt(m) (m + 1/2))`.
pub fn boxes_csv(prec: PrecisionConfig, ps: &PredictedZeroSet) -> String {
    let m = ps.m;
    let sqrt_m = (m as f64).sqrt();
    let exponent = 1.0 / (2.0 * m as f64 + 1.0);
    let rho_lo = prec
        .float(2)
        .pow(prec.float(exponent * (sqrt_m - 1.0) / sqrt_m));
    let rho_hi = prec
        .float(2)
        .pow(prec.float(exponent * (sqrt_m + 1.0) / sqrt_m));
    let eta = 2.0f64.ln() / sqrt_m / (m as f64 + 0.5);
    let mut out = String::from("m,k,rho_lo,rho_hi,theta_lo,theta_hi\n");
    for e in &ps.entries {
        let t = e.theta.to_f64();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            m,
            e.k,
            rho_lo.to_f64(),
            rho_hi.to_f64(),
            t - eta,
            t + eta
        ));
    }
    out
}
