mod battery;
mod format;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use volprod::body_ops::{difference_body, polar, volume_product};
use volprod::certificates::{plane_certificate, space_certificate, CertConfig, InequalityCheck};
use volprod::geometry::BodyFile;
use volprod::search::{minimize_volume_product, BodyClass, SearchConfig};
use volprod::symmetry::{classify_low_vertex_symmetric, orbit_decomposition, tetrahedral_group};
use volprod::tolerance::{set_tol_geom, DEFAULT_TOL_CERT, DEFAULT_TOL_GEOM};
use volprod::{GeomError, Polytope};

use crate::format::{csv_field, num, pairs, table};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_NOT_SYMMETRIC: u8 = 4;
const EXIT_CERTIFICATE: u8 = 5;
const EXIT_CHECKS: u8 = 6;

#[derive(Parser)]
#[command(name = "volprod", version, about = "Volume products |K||(K-K)°| of polygons and polyhedra")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Print a CSV summary row per body on stdout.
    #[arg(long, global = true)]
    csv: bool,
    /// Geometric tolerance (hulls, membership, deduplication).
    #[arg(long, global = true, default_value_t = DEFAULT_TOL_GEOM)]
    tol_geom: f64,
    /// Allowed violation of certified inequalities.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL_CERT)]
    tol_cert: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Volumes of K, K−K, (K−K)° and the product.
    Product {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Re-run the lower-bound argument on a body and write the certificate.
    Certify {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Certificate path; defaults to the input path with extension `cert.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Anneal bodies of a class towards a minimal product.
    Search {
        /// `polygon:N` (N points) or `tetra:K` (K orbit generators).
        #[arg(long)]
        class: BodyClass,
        #[arg(long)]
        restarts: usize,
        #[arg(long)]
        iters: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the restarts; the report does not depend on it.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Property battery: boundary sampling, duality, tiling, binomial ratio,
    /// Monte-Carlo cross-check.
    Check {
        file: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Boundary directions for the projection bound.
        #[arg(long, default_value_t = 1000)]
        directions: usize,
        /// Monte-Carlo samples per volume.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Symmetry class and vertex orbits of a tetrahedrally symmetric solid.
    Classify { file: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    #[value(name = "2d")]
    Plane,
    #[value(name = "3d")]
    Space,
}

/// Echoed into every JSON document the tool writes.
#[derive(Debug, Clone, Serialize)]
struct RunManifest {
    command: String,
    inputs: Vec<String>,
    seed: Option<u64>,
    tol_geom: f64,
    tol_cert: f64,
    output: Option<String>,
    version: String,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        let code = match &e {
            GeomError::DegenerateInput(_) | GeomError::EmptyRegion | GeomError::UnboundedRegion => EXIT_DEGENERATE,
            GeomError::NotSymmetric => EXIT_NOT_SYMMETRIC,
            GeomError::CertificateInvalid { .. } | GeomError::SymmetryViolation(_) => EXIT_CERTIFICATE,
            GeomError::InvalidArgument(_) | GeomError::DimensionMismatch { .. } => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.global.tol_geom > 0.0 && cli.global.tol_geom.is_finite()) {
        eprintln!("error: --tol-geom must be positive");
        return ExitCode::from(EXIT_USAGE);
    }
    if !(cli.global.tol_cert >= 0.0 && cli.global.tol_cert.is_finite()) {
        eprintln!("error: --tol-cert must be non-negative");
        return ExitCode::from(EXIT_USAGE);
    }
    set_tol_geom(cli.global.tol_geom);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Product { files } => cmd_product(g, files),
        Command::Certify { file, mode, out } => cmd_certify(g, file, *mode, out.as_deref()),
        Command::Search { class, restarts, iters, seed, out, threads } => {
            cmd_search(g, SearchConfig::new(*class, *restarts, *iters, *seed), out.as_deref(), *threads)
        }
        Command::Check { file, seed, directions, samples } => cmd_check(g, file, *seed, *directions, *samples),
        Command::Classify { file } => cmd_classify(g, file),
    }
}

fn manifest(g: &Global, command: &str, inputs: &[&Path], seed: Option<u64>, output: Option<&Path>) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        seed,
        tol_geom: g.tol_geom,
        tol_cert: g.tol_cert,
        output: output.map(|p| p.display().to_string()),
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

fn cert_config(g: &Global) -> CertConfig {
    CertConfig { tol_cert: g.tol_cert, ..CertConfig::default() }
}

fn load_body(path: &Path) -> Result<Polytope, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    let file: BodyFile = serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot parse {}: {e}", path.display())))?;
    file.to_polytope().map_err(|e| {
        let f = Failure::from(e);
        Failure::new(f.code, format!("{}: {}", path.display(), f.message))
    })
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("serializable")
}

fn print_json(doc: &Value) {
    println!("{}", serde_json::to_string_pretty(doc).expect("serializable"));
}

fn write_json(path: &Path, doc: &Value) -> Outcome {
    let text = serde_json::to_string_pretty(doc).expect("serializable") + "\n";
    fs::write(path, text).map_err(|e| Failure::new(EXIT_FAILURE, format!("cannot write {}: {e}", path.display())))
}

fn print_csv(rows: &[[String; 7]]) {
    println!("file,dim,volume,product,floor,margin,valid");
    for r in rows {
        println!("{}", r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
    }
}

fn sci(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.3e}")
    }
}

fn checks_table(checks: &[InequalityCheck]) -> String {
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                format!("{:?}", c.relation).to_lowercase(),
                num(c.lhs),
                num(c.rhs),
                sci(c.residual),
                if c.pass { "pass" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    table(&["check", "rel", "lhs", "rhs", "residual", "result"], &rows)
}

fn cmd_product(g: &Global, files: &[PathBuf]) -> Outcome {
    let mut results = Vec::new();
    let mut csv_rows = Vec::new();
    let mut text = String::new();
    for path in files {
        let k = load_body(path)?;
        let d = difference_body(&k);
        let lp = polar(&d)?;
        let product = volume_product(&k);
        let floor = k.dim().simplex_floor();
        let margin = product - floor;
        results.push(json!({
            "file": path.display().to_string(),
            "dim": k.dim().n(),
            "volume": k.volume(),
            "difference_volume": d.volume(),
            "polar_volume": lp.volume(),
            "product": product,
            "floor": floor,
            "margin": margin,
        }));
        csv_rows.push([
            path.display().to_string(),
            k.dim().n().to_string(),
            num(k.volume()),
            num(product),
            num(floor),
            num(margin),
            (margin >= -g.tol_cert).to_string(),
        ]);
        if !text.is_empty() {
            text.push('\n');
        }
        text += &pairs(&[
            ("file", path.display().to_string()),
            ("dim", k.dim().n().to_string()),
            ("volume", num(k.volume())),
            ("difference_volume", num(d.volume())),
            ("polar_volume", num(lp.volume())),
            ("product", num(product)),
            ("floor", num(floor)),
            ("margin", num(margin)),
        ]);
    }
    let inputs: Vec<&Path> = files.iter().map(PathBuf::as_path).collect();
    if g.json {
        print_json(&json!({ "manifest": manifest(g, "product", &inputs, None, None), "results": results }));
    } else if g.csv {
        print_csv(&csv_rows);
    } else {
        print!("{text}");
    }
    Ok(())
}

fn default_cert_path(file: &Path) -> PathBuf {
    file.with_extension("cert.json")
}

fn cmd_certify(g: &Global, file: &Path, mode: Mode, out: Option<&Path>) -> Outcome {
    let k = load_body(file)?;
    let out = out.map(Path::to_path_buf).unwrap_or_else(|| default_cert_path(file));
    let cfg = cert_config(g);
    let expected = match mode {
        Mode::Plane => 2,
        Mode::Space => 3,
    };
    if k.dim().n() != expected {
        return Err(GeomError::DimensionMismatch { expected, got: k.dim().n() }.into());
    }
    let (cert_json, checks, valid, bound, product, summary) = match mode {
        Mode::Plane => {
            let c = plane_certificate(&k, &cfg)?;
            let summary = vec![
                ("S1", num(c.s1)),
                ("S2", num(c.s2)),
                ("S3", num(c.s3)),
                ("certified_bound", num(c.certified_bound)),
                ("product", num(c.product)),
            ];
            (to_json(&c), c.inequalities.clone(), c.valid, c.certified_bound, c.product, summary)
        }
        Mode::Space => {
            let c = space_certificate(&k, &cfg)?;
            let summary = vec![
                ("case", c.case_tag.to_string()),
                ("V1", num(c.v1)),
                ("V2", num(c.v2)),
                ("S_hex", num(c.s_hex)),
                ("S_square", num(c.s_square)),
                ("certified_bound", num(c.certified_bound)),
                ("product", num(c.product)),
            ];
            (to_json(&c), c.inequalities.clone(), c.valid, c.certified_bound, c.product, summary)
        }
    };
    let m = manifest(g, "certify", &[file], None, Some(&out));
    let doc = json!({ "manifest": m, "certificate": cert_json });
    write_json(&out, &doc)?;
    if g.json {
        print_json(&doc);
    } else if g.csv {
        let floor = k.dim().simplex_floor();
        print_csv(&[[
            file.display().to_string(),
            k.dim().n().to_string(),
            num(k.volume()),
            num(product),
            num(floor),
            num(bound - floor),
            valid.to_string(),
        ]]);
    } else {
        let mut rows = summary;
        rows.push(("valid", valid.to_string()));
        rows.push(("certificate", out.display().to_string()));
        print!("{}\n{}", pairs(&rows), checks_table(&checks));
    }
    match checks.iter().find(|c| !c.pass) {
        None => Ok(()),
        Some(c) => Err(Failure::new(
            EXIT_CERTIFICATE,
            format!("certificate invalid: check `{}` failed (lhs {}, rhs {})", c.name, num(c.lhs), num(c.rhs)),
        )),
    }
}

fn cmd_search(g: &Global, config: SearchConfig, out: Option<&Path>, threads: usize) -> Outcome {
    config.validate()?;
    if threads == 0 {
        return Err(Failure::new(EXIT_USAGE, "--threads must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
    let report = pool.install(|| minimize_volume_product(&config))?;
    let m = manifest(g, "search", &[], Some(config.seed), out);
    let doc = json!({ "manifest": m, "report": report });
    if let Some(path) = out {
        write_json(path, &doc)?;
    }
    let floor = config.class.floor();
    if g.json {
        print_json(&doc);
    } else {
        print!(
            "{}",
            pairs(&[
                ("class", config.class.to_string()),
                ("best_product", num(report.best_product)),
                ("floor", num(floor)),
                ("floor_margin", num(report.best_product - floor)),
                ("min_evaluated", num(report.min_evaluated())),
            ])
        );
    }
    Ok(())
}

fn cmd_check(g: &Global, file: &Path, seed: u64, directions: usize, samples: u64) -> Outcome {
    let k = load_body(file)?;
    let cfg = battery::BatteryConfig { seed, directions, samples, cert: cert_config(g) };
    let result = battery::run(&k, &cfg)?;
    if g.json {
        let m = manifest(g, "check", &[file], Some(seed), None);
        print_json(
            &json!({ "manifest": m, "passed": result.passed(), "checks": result.checks, "skipped": result.skipped }),
        );
    } else {
        print!("{}", checks_table(&result.checks));
        for s in &result.skipped {
            println!("skipped  {s}");
        }
    }
    if result.passed() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_CHECKS, format!("failed checks: {}", result.failures().join(", "))))
    }
}

fn cmd_classify(g: &Global, file: &Path) -> Outcome {
    let k = load_body(file)?;
    let class = classify_low_vertex_symmetric(&k)?;
    // Orbits under the 3-fold rotation (x, y, z) -> (y, z, x).
    let rotation = tetrahedral_group()
        .iter()
        .find(|e| e.rows() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        .expect("cyclic permutation is in the group");
    let orbits = orbit_decomposition(k.vertices(), rotation)?;
    let orbit_coords: Vec<Vec<[f64; 3]>> = orbits.iter().map(|o| o.iter().map(|p| p.0).collect()).collect();
    if g.json {
        let m = manifest(g, "classify", &[file], None, None);
        print_json(&json!({
            "manifest": m,
            "class": class,
            "vertices": k.vertices().len(),
            "orbits": orbit_coords,
        }));
    } else {
        print!("{}", pairs(&[("class", class.to_string()), ("vertices", k.vertices().len().to_string())]));
        for (i, o) in orbits.iter().enumerate() {
            let pts: Vec<String> =
                o.iter().map(|p| format!("({}, {}, {})", num(p.x()), num(p.y()), num(p.z()))).collect();
            println!("orbit {i}  {}", pts.join(" "));
        }
    }
    Ok(())
}
