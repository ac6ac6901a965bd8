//! Command line front end: zeta reports, point counts, Hodge data,
//! regularity verdicts, polytope geometry, and the mirror-family sweep.
//!
//! Exit codes: 0 success; 2 input or module error (a machine-readable code
//! is printed to stderr); 3 budget refusal; 32+mask when `analyze` verdicts
//! fail (mask bits: 1 degree, 2 integrality, 4 product identity, 8 Newton
//! above Hodge, 16 endpoints).

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::process::ExitCode;
use toriczeta::counting::{count_closure, count_torus, Budget, CountError};
use toriczeta::cy::{dwork_trace_formula_check, lambda_sweep, CyError, DworkInstance};
use toriczeta::ff::FieldTower;
use toriczeta::geometry::{newton_polytope, NewtonPolytope};
use toriczeta::koszul::{hodge_numbers, hodge_polygon, regularity_check};
use toriczeta::laurent::parse_laurent;
use toriczeta::zeta::{analyze, AnalyzeConfig, PipelineError};

#[derive(Parser)]
#[command(
    name = "toriczeta",
    version,
    about = "zeta functions of toric hypersurfaces by exact point counting"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Field spec "p" or "p^a"
    #[arg(long, global = true, default_value = "7")]
    field: String,
    /// Laurent polynomial (grammar: sums of coeff and x<i>[^e] factors)
    #[arg(long, global = true)]
    poly: Option<String>,
    /// Emit JSON instead of a table
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for point enumeration (default: all)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Point budget for exhaustive enumeration
    #[arg(long, global = true, default_value_t = 1_000_000_000)]
    budget: u64,
    /// Seed for randomized verification subroutines (reserved; the library
    /// property tests honor it)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Base-field modulus override: comma-separated F_p coefficients,
    /// low degree first, including the leading 1
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Extra series orders used to certify the numerator degree
    #[arg(long, global = true, default_value_t = 2)]
    slack: usize,
    /// Margin window for the regularity dimension test (default n+2)
    #[arg(long, global = true)]
    margin: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: geometry, regularity, counts, numerator, polygons
    Analyze,
    /// Point counts on the torus and per face of the closure
    Count {
        /// Extension degree k (count over F_{q^k})
        #[arg(long, default_value_t = 1)]
        ext: usize,
        /// Include the per-face table of the closure
        #[arg(long)]
        faces: bool,
    },
    /// Full zeta report as JSON
    Zeta,
    /// Hodge numbers, v, and the Hodge polygon
    Hodge,
    /// Regularity verdict with per-face dimension patterns
    Regularity,
    /// The mirror-family sweep
    Cy {
        /// Ambient projective dimension (hypersurfaces of degree n+1 in P^n)
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// "all" or a single integer
        #[arg(long, default_value = "all")]
        lambda: String,
        /// congruence | zeta | all
        #[arg(long, default_value = "congruence")]
        check: String,
    },
    /// Newton polytope report: vertices, faces, hyperplanes, volumes, degree
    Geometry,
}

fn parse_field(spec: &str) -> Result<(u64, usize)> {
    let (p, a) = match spec.split_once('^') {
        Some((p, a)) => (p.trim().parse()?, a.trim().parse()?),
        None => (spec.trim().parse()?, 1),
    };
    Ok((p, a))
}

fn parse_modulus(s: &Option<String>) -> Result<Option<Vec<u64>>> {
    match s {
        None => Ok(None),
        Some(text) => {
            let coeffs = text
                .split(',')
                .map(|c| c.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .context("modulus coefficients must be nonnegative integers")?;
            Ok(Some(coeffs))
        }
    }
}

fn config_from(g: &GlobalOpts) -> Result<AnalyzeConfig> {
    Ok(AnalyzeConfig {
        slack: g.slack,
        budget: Budget {
            max_points: g.budget,
        },
        degree_margin: g.margin,
        base_modulus: parse_modulus(&g.modulus)?,
        ..AnalyzeConfig::default()
    })
}

fn need_poly(g: &GlobalOpts) -> Result<&str> {
    g.poly
        .as_deref()
        .ok_or_else(|| anyhow!("this subcommand needs --poly"))
}

/// Exit-code classification for library errors.
fn classify(e: &PipelineError) -> u8 {
    match e {
        PipelineError::Count(CountError::BudgetExceeded { .. }) => 3,
        _ => 2,
    }
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    let g = &cli.global;
    let (p, a) = parse_field(&g.field)?;
    let cfg = config_from(g)?;
    if let Some(t) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .ok();
    }
    let _ = g.seed;
    match &cli.command {
        Command::Analyze | Command::Zeta => {
            let analysis = match analyze(p, a, need_poly(g)?, &cfg) {
                Ok(an) => an,
                Err(e) => {
                    eprintln!("{{\"error\": \"{}\", \"detail\": \"{}\"}}", e.code(), e);
                    return Ok(classify(&e));
                }
            };
            let report = &analysis.report;
            if g.json || matches!(cli.command, Command::Zeta) {
                println!("{}", serde_json::to_string_pretty(report)?);
            } else {
                println!("field        F_{} (p = {}, a = {})", report.field.q, p, a);
                println!("polynomial   {}", report.poly);
                println!("vertices     {:?}", report.vertices);
                println!(
                    "det(a_ij)    {} (p | det: {})",
                    report.det, !report.p_det_ok
                );
                println!("regular      {}", report.regular);
                println!("degree D     {}", report.degree);
                if let Some(h) = &report.hodge {
                    println!("hodge h      {:?} (v = {})", h.h, h.v);
                }
                if let Some(c) = &report.counts {
                    println!("N_k torus    {:?}", c.torus);
                    println!("N_k closure  {:?}", c.closure);
                }
                if let Some(ps) = &report.numerator {
                    println!("P(t)         {}", ps.join(", "));
                }
                println!("verdicts     {:?}", report.verdicts);
            }
            if report.verdicts.all_true() {
                Ok(0)
            } else {
                Ok(32 + report.verdicts.failed_mask() as u8)
            }
        }
        Command::Count { ext, faces } => {
            let k = *ext;
            let tower = FieldTower::with_options(p, a, k, cfg.base_modulus.clone(), cfg.field_cap)?;
            let f = parse_laurent(need_poly(g)?, &tower)?;
            let torus = count_torus(&tower, &f, k, &cfg.budget)?;
            if *faces {
                let np = newton_polytope(&f);
                let table = count_closure(&tower, &f, &np, k, &cfg.budget)?;
                if g.json {
                    let rows: Vec<_> = table
                        .faces
                        .iter()
                        .map(|fc| {
                            json!({
                                "dim": fc.dim,
                                "subset": fc.subset,
                                "vertices": fc.vertex_ids,
                                "count": fc.count,
                                "empty_restriction": fc.empty_restriction,
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "k": k, "torus": torus, "closure": table.closure,
                            "faces": rows,
                        }))?
                    );
                } else {
                    println!("N_{k} on the torus: {torus}");
                    println!("face table (dim, subset mask, count):");
                    for fc in &table.faces {
                        println!(
                            "  dim {} subset {:?} count {}{}",
                            fc.dim,
                            fc.subset,
                            fc.count,
                            if fc.empty_restriction {
                                "  (empty restriction: whole stratum)"
                            } else {
                                ""
                            }
                        );
                    }
                    println!("closure total: {}", table.closure);
                }
            } else if g.json {
                println!("{}", json!({"k": k, "torus": torus}));
            } else {
                println!("N_{k} on the torus: {torus}");
            }
            Ok(0)
        }
        Command::Hodge => {
            let tower = FieldTower::with_options(p, a, 3, cfg.base_modulus.clone(), cfg.field_cap)
                .or_else(|_| {
                    FieldTower::with_options(p, a, 1, cfg.base_modulus.clone(), cfg.field_cap)
                })?;
            let f = parse_laurent(need_poly(g)?, &tower)?;
            let np = newton_polytope(&f);
            let geo = np.as_simplex().map_err(PipelineError::Geometry)?;
            let reg = regularity_check(&tower, &f, geo, cfg.degree_margin, cfg.witness_budget)
                .map_err(PipelineError::Koszul)?;
            let hd = hodge_numbers(&tower, &f, geo, &reg).map_err(PipelineError::Koszul)?;
            let poly = hodge_polygon(&hd);
            if g.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "h": hd.h, "v": hd.v.to_string(), "polygon": poly,
                    }))?
                );
            } else {
                println!("h = {:?}, v = {}", hd.h, hd.v);
                println!("hodge polygon: {}", serde_json::to_string(&poly)?);
            }
            Ok(0)
        }
        Command::Regularity => {
            let tower = FieldTower::with_options(p, a, 3, cfg.base_modulus.clone(), cfg.field_cap)
                .or_else(|_| {
                    FieldTower::with_options(p, a, 1, cfg.base_modulus.clone(), cfg.field_cap)
                })?;
            let f = parse_laurent(need_poly(g)?, &tower)?;
            let np = newton_polytope(&f);
            let geo = np.as_simplex().map_err(PipelineError::Geometry)?;
            let rep = regularity_check(&tower, &f, geo, cfg.degree_margin, cfg.witness_budget)
                .map_err(PipelineError::Koszul)?;
            if g.json {
                println!("{}", serde_json::to_string_pretty(&rep)?);
            } else {
                println!("verdict: {:?}", rep.verdict);
                for fc in &rep.face_checks {
                    println!(
                        "  face A={:#b} dim {}: dims {:?} expected total {} -> {}",
                        fc.subset,
                        fc.dim,
                        fc.dims,
                        fc.expected_total,
                        if fc.pattern_ok { "ok" } else { "FAIL" }
                    );
                }
                if let Some(w) = &rep.witness {
                    println!(
                        "  witness on face {:#b} over extension {}: point {:?}",
                        w.subset, w.extension, w.point
                    );
                }
            }
            Ok(0)
        }
        Command::Cy { n, lambda, check } => {
            let q = p.pow(a as u32);
            let lambdas: Vec<u64> = if lambda == "all" {
                (0..q).collect()
            } else {
                vec![
                    lambda
                        .parse::<u64>()
                        .context("--lambda must be an integer or 'all'")?
                        % q,
                ]
            };
            let with_zeta = matches!(check.as_str(), "zeta" | "all");
            let rows = match lambda_sweep(*n, p, a, &lambdas, with_zeta, &cfg) {
                Ok(r) => r,
                Err(CyError::Count(CountError::BudgetExceeded { needed, budget })) => {
                    eprintln!(
                        "{{\"error\": \"budget-exceeded\", \"needed\": {needed}, \"budget\": {budget}}}"
                    );
                    return Ok(3);
                }
                Err(CyError::Pipeline(e)) => {
                    eprintln!("{{\"error\": \"{}\", \"detail\": \"{}\"}}", e.code(), e);
                    return Ok(classify(&e));
                }
                Err(e) => return Err(e.into()),
            };
            if with_zeta {
                // also run the order-1 coefficient check where possible
                for row in &rows {
                    if row.regular == "Regular" && row.numerator.is_some() {
                        let tower = FieldTower::with_options(
                            p,
                            a,
                            1,
                            cfg.base_modulus.clone(),
                            cfg.field_cap,
                        )?;
                        let inst = DworkInstance::new(*n, row.lambda, tower)
                            .map_err(|e| anyhow!("{e}"))?;
                        let ok =
                            dwork_trace_formula_check(&inst, &cfg).map_err(|e| anyhow!("{e}"))?;
                        if !ok {
                            eprintln!(
                                "{{\"error\": \"trace-formula\", \"lambda\": {}}}",
                                row.lambda
                            );
                            return Ok(2);
                        }
                    }
                }
            }
            if g.json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                println!("lambda | #X      | #Y      | congruent | regular      | P(t)");
                for r in &rows {
                    println!(
                        "{:6} | {:7} | {:7} | {:9} | {:12} | {}",
                        r.lambda,
                        r.x_count,
                        r.y_count,
                        r.congruent,
                        r.regular,
                        r.numerator
                            .as_ref()
                            .map(|c| c.join(", "))
                            .unwrap_or_else(|| "-".into())
                    );
                }
            }
            Ok(0)
        }
        Command::Geometry => {
            let tower = FieldTower::with_options(p, a, 1, cfg.base_modulus.clone(), cfg.field_cap)?;
            let f = parse_laurent(need_poly(g)?, &tower)?;
            match newton_polytope(&f) {
                NewtonPolytope::Simplex(geo) => {
                    let faces: Vec<_> = geo
                        .faces()
                        .iter()
                        .map(|fa| {
                            json!({
                                "dim": fa.dim,
                                "subset": fa.subset,
                                "vertices": fa.vertex_ids,
                            })
                        })
                        .collect();
                    let volumes: Vec<_> = (0..=geo.full_mask())
                        .map(|m| {
                            json!({
                                "subset": m,
                                "volume": geo.normalized_volume(m).unwrap().to_string(),
                            })
                        })
                        .collect();
                    let out = json!({
                        "n": geo.n,
                        "is_simplex": true,
                        "vertices": geo.vertices,
                        "origin_is_vertex": geo.origin_is_vertex,
                        "origin_interior": geo.origin_interior,
                        "matrix": geo.hyperplane_matrix.iter()
                            .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                        "det": geo.det.to_string(),
                        "faces": faces,
                        "volumes": volumes,
                        "degree": geo.zeta_degree().map_err(|e| anyhow!("{e}"))?.to_string(),
                    });
                    println!("{}", serde_json::to_string_pretty(&out)?);
                }
                NewtonPolytope::General(gp) => {
                    let faces: Vec<_> = gp
                        .faces
                        .iter()
                        .map(|fa| json!({"dim": fa.dim, "vertices": fa.vertex_ids}))
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "n": gp.n, "is_simplex": false,
                            "vertices": gp.vertices, "faces": faces,
                        }))?
                    );
                }
                NewtonPolytope::Degenerate(d) => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "n": d.n, "dim": d.dim, "is_simplex": false,
                            "vertices": d.vertices,
                            "note": "polytope has dimension < n; face operations refused",
                        }))?
                    );
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
