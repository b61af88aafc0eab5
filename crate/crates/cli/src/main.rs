//! Command-line spectral analyzer for Z^d constant-shape substitutions.

use clap::{Args, Parser, Subcommand};
use qspectra::classify::{spectral_report, SpectralReport};
use qspectra::fourier::{window_points, CorrelationTable};
use qspectra::hull::{HullMethod, HullResult, HullVector};
use qspectra::matrix::{rat_to_f64, Rat};
use qspectra::oracle::{compare, pair_frequency};
use qspectra::pipeline::{analyze, Analysis};
use qspectra::specfile::{parse_spec_file, ParsedSpec};
use qspectra::structure::ClassCoefficients;
use qspectra::zd::LatticePoint;
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qspectra", version, about = "Exact spectral analysis of Z^d substitutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Substitution definition file (TOML)
    spec: PathBuf,
    /// Strictly positive class coefficients, e.g. --weights 1/2,1/2
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<String>>,
    /// Worker threads for windowed computations
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decomposition, matrices and structural predicates
    Analyze {
        #[command(flatten)]
        common: CommonArgs,
        /// Write the JSON document here
        #[arg(short)]
        output: Option<PathBuf>,
    },
    /// Extreme points of the spectral hull
    Hull {
        #[command(flatten)]
        common: CommonArgs,
        /// exact-1d | commutative-exact | numeric | candidates
        #[arg(long)]
        method: Option<String>,
        #[arg(short)]
        output: Option<PathBuf>,
    },
    /// Exact correlation coefficients
    Fourier {
        #[command(flatten)]
        common: CommonArgs,
        /// Single point, e.g. --k 5 or --k 1,0
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        /// All k with power(k) <= this bound
        #[arg(long)]
        window: Option<u32>,
        #[arg(long)]
        p_max: Option<u32>,
        /// Write (k, pair, numerator, denominator) rows here
        #[arg(long)]
        emit_csv: Option<PathBuf>,
    },
    /// Classify each extremal component on a window
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        window: Option<u32>,
        #[arg(long)]
        height_bound: Option<u64>,
        #[arg(long)]
        p_max: Option<u32>,
        #[arg(long)]
        method: Option<String>,
    },
    /// Empirical pair frequencies from expanded superblocks
    Freq {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// Starting letter (defaults to the first)
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        emit_csv: Option<PathBuf>,
    },
    /// Full pipeline: human report, machine document, coefficient CSV
    Report {
        #[command(flatten)]
        common: CommonArgs,
        /// Output directory (default: current)
        #[arg(short, default_value = ".")]
        output: PathBuf,
        #[arg(long)]
        window: Option<u32>,
        #[arg(long)]
        p_max: Option<u32>,
        #[arg(long)]
        method: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Analyze { common, output } => {
            let (_spec, analysis) = load(&common)?;
            print_analysis(&analysis);
            if let Some(path) = output {
                let hull = analysis
                    .hull_parametrization()
                    .and_then(|p| analysis.extreme_points(&p, None, &[]))
                    .map_err(|e| e.to_string())?;
                let table = CorrelationTable::build(
                    &analysis.sub,
                    &analysis.weights,
                    analysis.options.p_max,
                )
                .map_err(|e| e.to_string())?;
                let report =
                    spectral_report(&analysis, &hull, &table, analysis.options.window)
                        .map_err(|e| e.to_string())?;
                write_json(&path, &report)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Hull { common, method, output } => {
            let (spec, analysis) = load(&common)?;
            let method = parse_method(method.as_deref())?;
            let param = analysis.hull_parametrization().map_err(|e| e.to_string())?;
            let candidates = candidate_vectors(&spec);
            let hull = analysis
                .extreme_points(&param, method, &candidates)
                .map_err(|e| e.to_string())?;
            print_hull(&hull);
            if let Some(path) = output {
                let doc = HullDoc::from(&hull);
                write_json(&path, &doc)?;
            }
            Ok(exit_for_hull(&hull))
        }
        Command::Fourier { common, k, window, p_max, emit_csv } => {
            let (_, mut analysis) = load(&common)?;
            if !analysis.aperiodicity.is_aperiodic() {
                return Err(format!(
                    "correlation coefficients need aperiodicity (verdict: {}); assert it in the input if known",
                    analysis.aperiodicity.status()
                ));
            }
            if let Some(p) = p_max {
                analysis.options.p_max = p;
            }
            let table =
                CorrelationTable::build(&analysis.sub, &analysis.weights, analysis.options.p_max)
                    .map_err(|e| e.to_string())?;
            let points: Vec<LatticePoint> = match (&k, window) {
                (Some(kstr), None) => vec![parse_point(kstr, analysis.sub.dim())?],
                (None, Some(w)) => window_points(analysis.sub.expansion(), w),
                (None, None) => window_points(analysis.sub.expansion(), analysis.options.window),
                (Some(_), Some(_)) => return Err("use either --k or --window".into()),
            };
            let rows = coefficient_rows(&table, &points, common.jobs)?;
            let s = analysis.sub.size();
            let names = analysis.sub.alphabet().names();
            for (kp, vec) in &rows {
                println!("k = {kp}");
                for a in 0..s {
                    for b in 0..s {
                        println!("  sigma[{}{}] = {}", names[a], names[b], vec[a * s + b]);
                    }
                }
            }
            if let Some(path) = emit_csv {
                write_coefficient_csv(&path, &analysis, &rows)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { common, window, height_bound, p_max, method } => {
            let (spec, mut analysis) = load(&common)?;
            if let Some(w) = window {
                analysis.options.window = w;
            }
            if let Some(h) = height_bound {
                analysis.options.height_bound = h;
            }
            if let Some(p) = p_max {
                analysis.options.p_max = p;
            }
            let method = parse_method(method.as_deref())?;
            let param = analysis.hull_parametrization().map_err(|e| e.to_string())?;
            let candidates = candidate_vectors(&spec);
            let hull = analysis
                .extreme_points(&param, method, &candidates)
                .map_err(|e| e.to_string())?;
            let table =
                CorrelationTable::build(&analysis.sub, &analysis.weights, analysis.options.p_max)
                    .map_err(|e| e.to_string())?;
            let report = spectral_report(&analysis, &hull, &table, analysis.options.window)
                .map_err(|e| e.to_string())?;
            for c in &report.components {
                println!(
                    "component {}: {}  [{}]",
                    c.index, c.classification_label, c.evidence.caveat
                );
            }
            Ok(exit_for_hull(&hull))
        }
        Command::Freq { common, n, k, gamma, emit_csv } => {
            let (_, analysis) = load(&common)?;
            // frequencies are counted on the input substitution; the exact
            // values come from the telescoped analysis of the same subshift
            let sub = &analysis.original;
            let kp = parse_point(&k, sub.dim())?;
            let gamma_idx = match gamma {
                None => 0,
                Some(g) => sub
                    .alphabet()
                    .index_of(&g)
                    .ok_or_else(|| format!("unknown letter '{g}'"))?,
            };
            let freq = pair_frequency(sub, gamma_idx, n, &kp, analysis.options.cell_budget)
                .map_err(|e| e.to_string())?;
            let table =
                CorrelationTable::build(&analysis.sub, &analysis.weights, analysis.options.p_max)
                    .map_err(|e| e.to_string())?;
            let exact = table.coefficient(&kp).map_err(|e| e.to_string())?;
            let cmp = compare(&freq, &exact, sub);
            let s = sub.size();
            println!(
                "n = {n}, k = {kp}, start letter '{}'",
                sub.alphabet().name(gamma_idx)
            );
            if analysis.decomposition.classes.len() > 1 {
                println!(
                    "note: {} ergodic classes; frequencies from one start letter track that \
letter's component, while the exact coefficients mix all classes",
                    analysis.decomposition.classes.len()
                );
            }
            println!(
                "valid positions {} / dropped {}   L1 deviation {:.6}   budget {:.6}",
                freq.valid_positions,
                freq.boundary_dropped,
                rat_to_f64(&cmp.l1),
                rat_to_f64(&cmp.error_budget)
            );
            let mut csv = String::from("n,k,pair,frequency,exact,deviation\n");
            for a in 0..s {
                for b in 0..s {
                    let f = &freq.normalized[a * s + b];
                    let e = &exact[a * s + b];
                    let dev = rat_to_f64(&(f - e));
                    println!(
                        "  pair {}{}: freq {:.6}  exact {}  deviation {:+.6}",
                        sub.alphabet().name(a),
                        sub.alphabet().name(b),
                        rat_to_f64(f),
                        e,
                        dev
                    );
                    csv.push_str(&format!(
                        "{n},\"{}\",{}{},{},{},{dev}\n",
                        kp,
                        sub.alphabet().name(a),
                        sub.alphabet().name(b),
                        f,
                        e
                    ));
                }
            }
            if let Some(path) = emit_csv {
                std::fs::write(&path, csv).map_err(|e| e.to_string())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { common, output, window, p_max, method } => {
            let (spec, mut analysis) = load(&common)?;
            if let Some(w) = window {
                analysis.options.window = w;
            }
            if let Some(p) = p_max {
                analysis.options.p_max = p;
            }
            let method = parse_method(method.as_deref())?;
            let param = analysis.hull_parametrization().map_err(|e| e.to_string())?;
            let candidates = candidate_vectors(&spec);
            let hull = analysis
                .extreme_points(&param, method, &candidates)
                .map_err(|e| e.to_string())?;
            let table =
                CorrelationTable::build(&analysis.sub, &analysis.weights, analysis.options.p_max)
                    .map_err(|e| e.to_string())?;
            let report = spectral_report(&analysis, &hull, &table, analysis.options.window)
                .map_err(|e| e.to_string())?;
            std::fs::create_dir_all(&output).map_err(|e| e.to_string())?;
            let human = render_report(&report);
            print!("{human}");
            std::fs::write(output.join("report.txt"), &human).map_err(|e| e.to_string())?;
            write_json(&output.join("report.json"), &report)?;
            let points = window_points(analysis.sub.expansion(), analysis.options.window);
            let rows = coefficient_rows(&table, &points, common.jobs)?;
            write_coefficient_csv(&output.join("coefficients.csv"), &analysis, &rows)?;
            Ok(exit_for_hull(&hull))
        }
    }
}

fn load(common: &CommonArgs) -> Result<(ParsedSpec, Analysis), String> {
    let mut spec = parse_spec_file(&common.spec).map_err(|e| e.to_string())?;
    if let Ok(budget) = std::env::var("QSPECTRA_CELL_BUDGET") {
        let v: u64 = budget
            .parse()
            .map_err(|_| "QSPECTRA_CELL_BUDGET must be a positive integer".to_string())?;
        spec.options.cell_budget = v;
    }
    if let Some(ws) = &common.weights {
        let coeffs: Result<Vec<Rat>, String> = ws
            .iter()
            .map(|w| {
                qspectra::specfile::parse_rational(w).ok_or_else(|| format!("bad weight '{w}'"))
            })
            .collect();
        spec.class_coefficients = ClassCoefficients::Given(coeffs?);
    }
    let mut options = spec.options.clone();
    options.class_coefficients = spec.class_coefficients.clone();
    let analysis = analyze(&spec.substitution, options).map_err(|e| e.to_string())?;
    Ok((spec, analysis))
}

fn parse_method(m: Option<&str>) -> Result<Option<HullMethod>, String> {
    match m {
        None => Ok(None),
        Some(s) => HullMethod::parse(s)
            .map(Some)
            .ok_or_else(|| format!("unknown hull method '{s}'")),
    }
}

fn candidate_vectors(spec: &ParsedSpec) -> Vec<HullVector> {
    spec.hull_candidates
        .iter()
        .map(|v| HullVector::from_numeric(v.clone()))
        .collect()
}

fn parse_point(s: &str, dim: usize) -> Result<LatticePoint, String> {
    let coords: Result<Vec<i64>, _> = s.split(',').map(|p| p.trim().parse::<i64>()).collect();
    let coords = coords.map_err(|_| format!("bad lattice point '{s}'"))?;
    if coords.len() != dim {
        return Err(format!("point '{s}' has {} coordinates, expected {dim}", coords.len()));
    }
    Ok(LatticePoint::from_i64(&coords))
}

fn coefficient_rows(
    table: &CorrelationTable,
    points: &[LatticePoint],
    jobs: usize,
) -> Result<Vec<(LatticePoint, Vec<Rat>)>, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    pool.install(|| {
        points
            .par_iter()
            .map(|k| {
                table
                    .coefficient(k)
                    .map(|v| (k.clone(), (*v).clone()))
                    .map_err(|e| e.to_string())
            })
            .collect()
    })
}

fn write_coefficient_csv(
    path: &Path,
    analysis: &Analysis,
    rows: &[(LatticePoint, Vec<Rat>)],
) -> Result<(), String> {
    let s = analysis.sub.size();
    let names = analysis.sub.alphabet().names();
    let mut out = String::from("k,pair,numerator,denominator\n");
    for (k, vec) in rows {
        for a in 0..s {
            for b in 0..s {
                let v = &vec[a * s + b];
                out.push_str(&format!(
                    "\"{}\",{}{},{},{}\n",
                    k,
                    names[a],
                    names[b],
                    v.numer(),
                    v.denom()
                ));
            }
        }
    }
    std::fs::write(path, out).map_err(|e| e.to_string())
}

fn write_json<T: serde::Serialize>(path: &Path, doc: &T) -> Result<(), String> {
    let json = serde_json::to_string_pretty(doc).map_err(|e| e.to_string())?;
    std::fs::write(path, json + "\n").map_err(|e| e.to_string())
}

fn exit_for_hull(hull: &HullResult) -> ExitCode {
    if hull.complete {
        ExitCode::SUCCESS
    } else {
        // analysis incompleteness: flagged numeric enumeration
        ExitCode::from(1)
    }
}

#[derive(serde::Serialize)]
struct HullDoc {
    method: String,
    complete: bool,
    points: Vec<Vec<String>>,
    extreme: Vec<bool>,
    notes: Vec<String>,
}

impl From<&HullResult> for HullDoc {
    fn from(hull: &HullResult) -> Self {
        HullDoc {
            method: hull.method.as_str().into(),
            complete: hull.complete,
            points: hull
                .points
                .iter()
                .map(|p| match &p.exact {
                    Some(e) => e.iter().map(|c| format!("{c:?}")).collect(),
                    None => p
                        .numeric
                        .iter()
                        .map(|z| format!("{:.12}{:+.12}i", z.re, z.im))
                        .collect(),
                })
                .collect(),
            extreme: hull.points.iter().map(|p| p.extreme).collect(),
            notes: hull.notes.clone(),
        }
    }
}

fn print_analysis(analysis: &Analysis) {
    let sub = &analysis.original;
    println!(
        "dimension {}  q = {}  Q = {}",
        sub.dim(),
        sub.expansion().q(),
        sub.expansion().total()
    );
    println!("alphabet: {}", sub.alphabet().names().join(" "));
    let d = &analysis.original_decomposition;
    println!("index of imprimitivity: {}", d.index_h);
    for (i, class) in d.classes.iter().enumerate() {
        let names: Vec<&str> = class.iter().map(|&l| sub.alphabet().name(l)).collect();
        println!("ergodic class {}: {{{}}}", i + 1, names.join(", "));
    }
    if !d.transient.is_empty() {
        let names: Vec<&str> = d.transient.iter().map(|&l| sub.alphabet().name(l)).collect();
        println!("transient part: {{{}}}", names.join(", "));
    }
    if analysis.telescope_h > 1 {
        println!(
            "telescoped by h = {} for spectral work (expansion {})",
            analysis.telescope_h,
            analysis.sub.expansion().q()
        );
    }
    println!(
        "bijective: {}   commutative: {}",
        analysis.predicates.bijective, analysis.predicates.commutative
    );
    println!("aperiodicity: {}", analysis.aperiodicity.status());
    let weights: Vec<String> = analysis.weights.u.iter().map(|r| r.to_string()).collect();
    println!("invariant weights u = ({})", weights.join(", "));
    println!("substitution matrix:");
    print_matrix(&analysis.substitution_matrix);
}

fn print_matrix(m: &qspectra::matrix::ExactMatrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|r| r.to_string()).collect();
        println!("  [{}]", row.join(" "));
    }
}

fn print_hull(hull: &HullResult) {
    println!(
        "spectral hull extreme points: {} (method {}, complete: {})",
        hull.points.len(),
        hull.method.as_str(),
        hull.complete
    );
    for (i, p) in hull.points.iter().enumerate() {
        let entries: Vec<String> = if let Some(exact) = &p.exact {
            exact.iter().map(|c| format!("{c:?}")).collect()
        } else {
            p.numeric
                .iter()
                .map(|z| {
                    if z.im.abs() < 1e-12 {
                        format!("{:.9}", z.re)
                    } else {
                        format!("{:.9}{:+.9}i", z.re, z.im)
                    }
                })
                .collect()
        };
        println!("  v_{} = ({})", i + 1, entries.join(", "));
    }
    for note in &hull.notes {
        println!("  note: {note}");
    }
}

fn render_report(report: &SpectralReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "spectral decomposition report (schema v{})\n",
        report.schema_version
    ));
    out.push_str(&format!(
        "substitution: d = {}, q = [{}], alphabet {{{}}}\n",
        report.substitution.dimension,
        report.substitution.q.join(","),
        report.substitution.alphabet.join(", ")
    ));
    if report.substitution.telescoped_by > 1 {
        out.push_str(&format!(
            "telescoped by h = {} (analysis expansion [{}])\n",
            report.substitution.telescoped_by,
            report.substitution.telescoped_q.join(",")
        ));
    }
    out.push_str(&format!(
        "index of imprimitivity {}; {} ergodic class(es), {} transient letter(s)\n",
        report.decomposition.index_of_imprimitivity,
        report.decomposition.classes.len(),
        report.decomposition.transient.len()
    ));
    for (i, c) in report.decomposition.classes.iter().enumerate() {
        out.push_str(&format!("  class {}: {{{}}}\n", i + 1, c.join(", ")));
    }
    if !report.decomposition.transient.is_empty() {
        out.push_str(&format!(
            "  transient: {{{}}}\n",
            report.decomposition.transient.join(", ")
        ));
    }
    out.push_str(&format!(
        "bijective: {}; commutative: {}; aperiodicity: {} ({})\n",
        report.predicates.bijective,
        report.predicates.commutative,
        report.aperiodicity.status,
        report.aperiodicity.detail
    ));
    out.push_str(&format!(
        "hull: {} point(s) via {}, complete: {}\n",
        report.hull.point_count, report.hull.method, report.hull.complete
    ));
    out.push_str(&format!("\n{}\n{}\n\n", report.statement, report.resolved_statement));
    for c in &report.components {
        out.push_str(&format!(
            "component {}: {}\n  vector ({})\n",
            c.index,
            c.classification_label,
            c.vector.join(", ")
        ));
    }
    if report.shortcut_flags.abc_purely_singular {
        out.push_str(
            "\nstructural shortcut: aperiodic bijective commutative substitution => purely singular spectrum (no Lebesgue component)\n",
        );
    }
    out.push_str(&format!("\n{}\n", report.mutual_singularity_note));
    for c in &report.caveats {
        out.push_str(&format!("caveat: {c}\n"));
    }
    out
}
