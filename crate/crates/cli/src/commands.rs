//! Command implementations: each returns the files it wrote, or a typed
//! error carrying the process exit code.

use crate::config::RunConfig;
use crate::output::{write_json, write_table, Table, SCHEMA_VERSION};
use lemnis_core::asymptotics::{outer_sample, q_local_grid, AsymptoticsError};
use lemnis_core::geometry::{sample_lemniscate, curve_csv, CurveKind};
use lemnis_core::jacobi::{build_pi, ExactPolynomial};
use lemnis_core::numerics::PrecisionConfig;
use lemnis_core::orthogonality::verify_orthogonality;
use lemnis_core::zeros::{
    self, boxes_csv, certify, convergence_row, local_pairing, pair_zeros, pairing_csv,
    predicted_csv, predicted_zeros_outer, real_zero_census, zeros_csv, ZeroError, ZeroSet,
};
use serde_json::json;
use std::collections::BTreeMap;

/// Process exit codes: 2 certification, 3 convergence, 4 region/domain,
/// 64 usage, 1 anything else.
#[derive(Debug)]
pub enum CmdError {
    Certification(String),
    Convergence(String),
    Region(String),
    Usage(String),
    Io(String),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Certification(_) => 2,
            CmdError::Convergence(_) => 3,
            CmdError::Region(_) => 4,
            CmdError::Usage(_) => 64,
            CmdError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Certification(m)
            | CmdError::Convergence(m)
            | CmdError::Region(m)
            | CmdError::Usage(m)
            | CmdError::Io(m) => m,
        }
    }
}

impl From<ZeroError> for CmdError {
    fn from(e: ZeroError) -> Self {
        match e {
            ZeroError::NoConvergence { .. } => CmdError::Convergence(e.to_string()),
            ZeroError::CertificationFailed { .. } => CmdError::Certification(e.to_string()),
            _ => CmdError::Region(e.to_string()),
        }
    }
}

impl From<AsymptoticsError> for CmdError {
    fn from(e: AsymptoticsError) -> Self {
        match e {
            AsymptoticsError::NoConvergence { .. } => CmdError::Convergence(e.to_string()),
            _ => CmdError::Region(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Io(e.to_string())
    }
}

fn banner(bits: u32, auto: bool) {
    println!(
        "precision: {bits} mantissa bits ({})",
        if auto { "auto rule 2m + 64" } else { "explicit" }
    );
}

fn solve_cached(
    cache: &mut BTreeMap<usize, (ExactPolynomial, ZeroSet)>,
    m: usize,
    prec: PrecisionConfig,
) -> Result<&(ExactPolynomial, ZeroSet), ZeroError> {
    if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(m) {
        let poly = build_pi(m);
        let zs = zeros::aberth_solve(&poly, prec, None, None)?;
        e.insert((poly, zs));
    }
    Ok(&cache[&m])
}

pub fn cmd_zeros(cfg: &RunConfig, m: usize, with_boxes: bool, tol: Option<f64>) -> Result<(), CmdError> {
    let bits = cfg.effective_bits(m);
    banner(bits, cfg.precision_bits.is_none());
    let prec = PrecisionConfig::new(bits).map_err(|e| CmdError::Usage(e.to_string()))?;
    let poly = build_pi(m);
    let zs = zeros::aberth_solve(&poly, prec, tol, None)?;

    write_table(
        &cfg.output_dir,
        &format!("zeros_m{m}"),
        &Table::from_csv("zeros", &zeros_csv(&zs)),
        cfg.format,
    )?;
    let predicted = predicted_zeros_outer(prec, m);
    write_table(
        &cfg.output_dir,
        &format!("predicted_m{m}"),
        &Table::from_csv("predicted_zeros", &predicted_csv(&predicted)),
        cfg.format,
    )?;
    if with_boxes {
        write_table(
            &cfg.output_dir,
            &format!("boxes_m{m}"),
            &Table::from_csv("rouche_boxes", &boxes_csv(prec, &predicted)),
            cfg.format,
        )?;
    }

    let cert = certify(&zs, &poly);
    let (passed, clause, report) = match &cert {
        Ok(r) => (true, None, Some(r)),
        Err(e) => (false, Some(e.to_string()), None),
    };
    let region = cfg.region();
    let conv = convergence_row(&zs, &region);
    let (real_count, _) = real_zero_census(&zs);
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "m": m,
        "precision_bits": bits,
        "count": zs.roots.len(),
        "passed": passed,
        "failure_clause": clause,
        "max_residual": report.map(|r| r.max_residual.to_f64()),
        "residual_tolerance": report.map(|r| r.residual_tolerance.to_f64()),
        "vieta_sum_dev": zs.vieta_sum_dev.to_f64(),
        "vieta_prod_dev": zs.vieta_prod_dev.to_f64(),
        "min_separation": zs.min_separation.to_f64(),
        "real_count": real_count,
        "max_dist": conv.max_dist,
        "max_mod_plus1": conv.max_mod_plus1,
    });
    write_json(&cfg.output_dir, &format!("certification_m{m}.json"), &doc)?;
    cert?;
    println!("zeros: m = {m}, {} roots certified", zs.roots.len());
    Ok(())
}

struct Check {
    name: &'static str,
    pass: bool,
    details: serde_json::Value,
}

pub fn cmd_verify(
    cfg: &RunConfig,
    m_list: &[usize],
    suite: &str,
    k_max: usize,
    n_max: usize,
) -> Result<(), CmdError> {
    let known = ["all", "proposition", "pairing", "lemniscate", "orthogonality", "local"];
    if !known.contains(&suite) {
        return Err(CmdError::Usage(format!(
            "unknown suite '{suite}' (expected one of {})",
            known.join(", ")
        )));
    }
    let max_m = m_list.iter().copied().max().unwrap_or(0);
    let bits = cfg.effective_bits(max_m);
    banner(bits, cfg.precision_bits.is_none());
    let region = cfg.region();
    let mut cache: BTreeMap<usize, (ExactPolynomial, ZeroSet)> = BTreeMap::new();
    let mut checks: Vec<Check> = Vec::new();
    let run = |name: &str| suite == "all" || suite == name;

    if run("proposition") {
        for &m in m_list {
            let prec = PrecisionConfig::new(cfg.effective_bits(m)).unwrap();
            let (poly, zs) = solve_cached(&mut cache, m, prec)?;
            certify(zs, poly)?;
            let (real_count, reals) = real_zero_census(zs);
            let parity_ok = real_count == m % 2;
            let real_ok = real_count == 0 || reals[0].to_f64() < -1.0;
            let conv = convergence_row(zs, &region);
            let disk_ok = conv.max_mod_plus1 < 1.0;
            checks.push(Check {
                name: "real_zero_parity_and_disk",
                pass: parity_ok && real_ok && disk_ok,
                details: json!({
                    "m": m,
                    "real_count": real_count,
                    "expected_real_count": m % 2,
                    "real_zero": reals.first().map(|r| r.to_f64()),
                    "max_mod_plus1": conv.max_mod_plus1,
                }),
            });
        }
    }

    if run("pairing") {
        let mut distances = Vec::new();
        for &m in m_list {
            let prec = PrecisionConfig::new(cfg.effective_bits(m)).unwrap();
            let (_, zs) = solve_cached(&mut cache, m, prec)?;
            let predicted = predicted_zeros_outer(prec, m);
            let report = pair_zeros(zs, &predicted, &region)?;
            write_table(
                &cfg.output_dir,
                &format!("pairing_m{m}"),
                &Table::from_csv("pairing", &pairing_csv(m, &report)),
                cfg.format,
            )?;
            distances.push((m, report.max_distance));
            checks.push(Check {
                name: "predicted_zero_pairing",
                pass: report.unmatched_predicted.is_empty(),
                details: json!({
                    "m": m,
                    "pairs": report.pairs.len(),
                    "unmatched_predicted": report.unmatched_predicted.len(),
                    "unmatched_computed": report.unmatched_computed.len(),
                    "max_distance": report.max_distance,
                }),
            });
        }
        if distances.len() >= 2 {
            let decreasing = distances.windows(2).all(|w| w[1].1 < w[0].1);
            checks.push(Check {
                name: "pairing_distance_decreasing",
                pass: decreasing,
                details: json!({
                    "distances": distances.iter().map(|(m, d)| json!({"m": m, "max_distance": d})).collect::<Vec<_>>(),
                }),
            });
        }
    }

    if run("lemniscate") {
        let mut rows = Vec::new();
        for &m in m_list {
            let prec = PrecisionConfig::new(cfg.effective_bits(m)).unwrap();
            let (_, zs) = solve_cached(&mut cache, m, prec)?;
            rows.push(convergence_row(zs, &region));
        }
        let dist_decreasing = rows.windows(2).all(|w| w[1].max_dist < w[0].max_dist);
        let mod_increasing = rows.windows(2).all(|w| w[1].max_mod_plus1 > w[0].max_mod_plus1);
        let below_one = rows.iter().all(|r| r.max_mod_plus1 < 1.0);
        let mut table = Table::new(
            "lemniscate_convergence",
            vec!["m", "max_dist", "max_mod_plus1"],
        );
        for r in &rows {
            table.push(vec![
                r.m.to_string(),
                format!("{:e}", r.max_dist),
                r.max_mod_plus1.to_string(),
            ]);
        }
        write_table(&cfg.output_dir, "lemniscate_convergence", &table, cfg.format)?;
        checks.push(Check {
            name: "lemniscate_attraction",
            pass: dist_decreasing && mod_increasing && below_one,
            details: json!({
                "rows": rows.iter().map(|r| json!({
                    "m": r.m, "max_dist": r.max_dist, "max_mod_plus1": r.max_mod_plus1
                })).collect::<Vec<_>>(),
                "dist_decreasing": dist_decreasing,
                "mod_increasing": mod_increasing,
            }),
        });
    }

    if run("orthogonality") {
        let prec = PrecisionConfig::new(bits.max(256)).unwrap();
        let contour =
            lemnis_core::geometry::build_gamma_contour(prec, cfg.gamma_radius, cfg.quad_nodes)
                .map_err(|e| CmdError::Region(e.to_string()))?;
        let tol = 1e-15;
        let reports = verify_orthogonality(n_max, k_max, &contour, prec, tol)
            .map_err(|e| CmdError::Region(e.to_string()))?;
        write_table(
            &cfg.output_dir,
            "orthogonality",
            &Table::from_csv(
                "orthogonality",
                &lemnis_core::orthogonality::reports_csv(&reports),
            ),
            cfg.format,
        )?;
        let max_err = reports
            .iter()
            .map(|r| r.abs_error.to_f64())
            .fold(0.0f64, f64::max);
        checks.push(Check {
            name: "contour_orthogonality",
            pass: reports.iter().all(|r| r.within_tolerance),
            details: json!({
                "n_max": n_max,
                "k_max": k_max,
                "checks": reports.len(),
                "max_abs_error": max_err,
                "tolerance": tol,
                "quad_nodes": cfg.quad_nodes,
                "radius": cfg.gamma_radius,
            }),
        });
    }

    if run("local") {
        if suite == "local" && !m_list.iter().any(|&m| m >= 50) {
            return Err(CmdError::Usage(
                "--suite local needs at least one degree >= 50 in --m-list".into(),
            ));
        }
        for &m in m_list.iter().filter(|&&m| m >= 50) {
            let prec = PrecisionConfig::new(cfg.effective_bits(m)).unwrap();
            let (_, zs) = solve_cached(&mut cache, m, prec)?;
            let report = local_pairing(zs, cfg.xi_r, &region)?;
            write_table(
                &cfg.output_dir,
                &format!("local_pairing_m{m}"),
                &Table::from_csv("local_pairing", &pairing_csv(m, &report)),
                cfg.format,
            )?;
            checks.push(Check {
                name: "local_zero_pairing",
                pass: report.unmatched_predicted.is_empty(),
                details: json!({
                    "m": m,
                    "xi_radius": cfg.xi_r,
                    "epsilon": cfg.epsilon,
                    "pairs": report.pairs.len(),
                    // No candidate pulls back into u_eps when epsilon is
                    // small relative to xi_radius / sqrt(2m).
                    "vacuous": report.pairs.is_empty(),
                    "unmatched_candidates": report.unmatched_predicted.len(),
                    "max_xi_distance": report.max_distance,
                }),
            });
        }
    }

    let all_pass = checks.iter().all(|c| c.pass);
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "m_list": m_list,
        "pass": all_pass,
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "pass": c.pass,
            "details": c.details,
        })).collect::<Vec<_>>(),
    });
    write_json(&cfg.output_dir, "verify_report.json", &doc)?;
    for c in &checks {
        println!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
    }
    if all_pass {
        Ok(())
    } else {
        Err(CmdError::Certification("one or more checks failed".into()))
    }
}

pub fn cmd_figures(
    cfg: &RunConfig,
    which: &str,
    m: Option<usize>,
    samples: usize,
    grid: Option<usize>,
) -> Result<(), CmdError> {
    let need_m = || m.ok_or_else(|| CmdError::Usage("--m is required for this figure".into()));
    match which {
        "1" => {
            let m = need_m()?;
            let bits = cfg.effective_bits(m);
            banner(bits, cfg.precision_bits.is_none());
            let prec = PrecisionConfig::new(bits).unwrap();
            let poly = build_pi(m);
            let zs = zeros::aberth_solve(&poly, prec, None, None)?;
            write_table(
                &cfg.output_dir,
                &format!("figure1_zeros_m{m}"),
                &Table::from_csv("zeros", &zeros_csv(&zs)),
                cfg.format,
            )?;
        }
        "6" => {
            let m = need_m()?;
            let bits = cfg.effective_bits(m);
            banner(bits, cfg.precision_bits.is_none());
            let prec = PrecisionConfig::new(bits).unwrap();
            write_sigma(cfg, prec, "figure6", samples)?;
            let poly = build_pi(m);
            let zs = zeros::aberth_solve(&poly, prec, None, None)?;
            write_table(
                &cfg.output_dir,
                &format!("figure6_zeros_m{m}"),
                &Table::from_csv("zeros", &zeros_csv(&zs)),
                cfg.format,
            )?;
        }
        "9" => {
            let m = need_m()?;
            let bits = cfg.effective_bits(m);
            banner(bits, cfg.precision_bits.is_none());
            let prec = PrecisionConfig::new(bits).unwrap();
            write_sigma(cfg, prec, "figure9", samples)?;
            // |(1-z^2)^{m+1/2}| = sqrt(2) is the curve |1-z^2| = 2^{1/(2m+1)}.
            let rho = {
                let ln2 = prec.float(2).ln();
                (ln2 / (2 * m as u32 + 1)).exp()
            };
            let curve = sample_lemniscate(prec, CurveKind::ScaledLeft, &rho, samples);
            write_table(
                &cfg.output_dir,
                &format!("figure9_rho_curve_m{m}"),
                &Table::from_csv("scaled_curve", &curve_csv(&curve)),
                cfg.format,
            )?;
        }
        "10" => {
            let n = grid.unwrap_or(201).max(201);
            write_qlocal_grid(cfg, n)?;
        }
        other => {
            return Err(CmdError::Usage(format!(
                "unknown figure '{other}' (expected 1, 6, 9 or 10)"
            )))
        }
    }
    Ok(())
}

fn write_sigma(
    cfg: &RunConfig,
    prec: PrecisionConfig,
    stem: &str,
    samples: usize,
) -> Result<(), CmdError> {
    let one = prec.float(1);
    let left = sample_lemniscate(prec, CurveKind::Left, &one, samples);
    let right = sample_lemniscate(prec, CurveKind::Right, &one, samples);
    write_table(
        &cfg.output_dir,
        &format!("{stem}_sigma_left"),
        &Table::from_csv("sigma_left", &curve_csv(&left)),
        cfg.format,
    )?;
    write_table(
        &cfg.output_dir,
        &format!("{stem}_sigma_right"),
        &Table::from_csv("sigma_right", &curve_csv(&right)),
        cfg.format,
    )?;
    Ok(())
}

fn write_qlocal_grid(cfg: &RunConfig, n: usize) -> Result<(), CmdError> {
    let prec = PrecisionConfig::new(128).unwrap();
    banner(128, false);
    let rows = q_local_grid(prec, cfg.xi_r, n);
    let mut table = Table::new("q_local_grid", vec!["re_xi", "im_xi", "abs_q_local"]);
    for (x, y, v) in rows {
        table.push(vec![x.to_string(), y.to_string(), format!("{v:e}")]);
    }
    write_table(&cfg.output_dir, "figure10_qlocal_grid", &table, cfg.format)?;
    Ok(())
}

pub fn cmd_pcf_grid(cfg: &RunConfig, grid: Option<usize>) -> Result<(), CmdError> {
    write_qlocal_grid(cfg, grid.unwrap_or(201).max(2))
}

pub fn cmd_asymptotics(cfg: &RunConfig, m_list: &[usize], points: usize) -> Result<(), CmdError> {
    if m_list.is_empty() {
        return Err(CmdError::Usage("--m-list must not be empty".into()));
    }
    let max_m = *m_list.iter().max().unwrap();
    let bits = cfg.effective_bits(max_m);
    banner(bits, cfg.precision_bits.is_none());
    let region = cfg.region();
    let mut table = Table::new(
        "outer_asymptotics",
        vec![
            "m", "re_z", "im_z", "re_exact", "im_exact", "re_pred", "im_pred", "rel_error",
        ],
    );
    // Fixed evaluation points on the mid-band curve |1-z^2| = (1+band)/2,
    // spread in angle and kept clear of u_eps.
    let c_level = (1.0 + cfg.band_outer) / 2.0;
    for &m in m_list {
        let prec = PrecisionConfig::new(cfg.effective_bits(m)).unwrap();
        let poly = build_pi(m);
        let rho = prec.float(c_level);
        let mut count = 0usize;
        let mut j = 0usize;
        while count < points && j < 4 * points + 16 {
            let theta = prec.float(0.45 + (j as f64) * (std::f64::consts::TAU - 0.9) / (points.max(2) as f64 - 1.0));
            j += 1;
            let z = lemnis_core::geometry::left_lemniscate_point(prec, &rho, &theta);
            match outer_sample(&poly, &z, prec, &region) {
                Ok(s) => {
                    count += 1;
                    table.push(vec![
                        m.to_string(),
                        s.z.real().to_f64().to_string(),
                        s.z.imag().to_f64().to_string(),
                        format!("{:e}", s.exact.real().to_f64()),
                        format!("{:e}", s.exact.imag().to_f64()),
                        format!("{:e}", s.predicted.real().to_f64()),
                        format!("{:e}", s.predicted.imag().to_f64()),
                        format!("{:e}", s.rel_error),
                    ]);
                }
                Err(AsymptoticsError::OutsideRegion) => continue,
                Err(e) => return Err(e.into()),
            }
        }
    }
    write_table(&cfg.output_dir, "asymptotics_outer", &table, cfg.format)?;
    Ok(())
}

pub fn cmd_polynomial(cfg: &RunConfig, m: usize) -> Result<(), CmdError> {
    // Monic coefficients plus kappa; multiplying back by kappa recovers the
    // raw construction exactly.
    let poly = build_pi(m);
    let doc: serde_json::Value = serde_json::from_str(&poly.to_json())
        .map_err(|e| CmdError::Io(format!("internal JSON error: {e}")))?;
    write_json(&cfg.output_dir, &format!("polynomial_m{m}.json"), &doc)?;
    Ok(())
}
