use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use boxlab::bell::{chsh_max_variant, chsh_value, ChshVariant};
use boxlab::classify::{class_descriptor, classify_full, membership, ClassResult, Evidence};
use boxlab::constructors::{
    det_box1, det_box2_twoway, ghz_box, noise_box, p_eps_alpha, p_eps_left, p_eps_right, pr_box,
    BitFn, EpsParams, MeasurementAssignment, PairFn, PrVariant,
};
use boxlab::format::{deserialize, serialize, AnyBox};
use boxlab::lp::{MembershipResult, DEFAULT_TOL};
use boxlab::scan::{run_scan, write_csv, GridRange, ScanConfig};
use boxlab::tensor::Box3;
use boxlab::wiring::{wire_2to3, wire_3to2};
use boxlab::{Error, HierarchyClass};

const EXIT_OUT: u8 = 3;
const EXIT_USAGE: u8 = 2;
const EXIT_FAILURE: u8 = 1;

/// Largest number of weight or functional entries printed in text reports.
const MAX_LISTED: usize = 24;

#[derive(Parser)]
#[command(name = "boxlab", version, about = "Tripartite boxes: construction, wiring, CHSH and bilocality classes")]
struct Cli {
    /// Feasibility tolerance for membership tests.
    #[arg(long, global = true, env = "BOXLAB_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a box and write it in the box file format.
    Make(MakeArgs),
    /// Classify a three-party box in the hierarchy.
    Classify {
        path: PathBuf,
        /// Test a single class instead of producing the full report.
        #[arg(long)]
        class: Option<HierarchyClass>,
        #[arg(long)]
        json: bool,
    },
    /// Wire parties 2 and 3 of a three-party box together.
    Wire {
        path: PathBuf,
        #[arg(long, value_enum)]
        protocol: Protocol,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// CHSH value of a two-party box.
    Chsh {
        path: PathBuf,
        /// Signs on E00,E01,E10,E11, e.g. "+,+,-,+".
        #[arg(long, allow_hyphen_values = true)]
        variant: Option<ChshVariant>,
    },
    /// Sweep the mixed one-way family over an (eps, alpha) grid and write CSV.
    Scan {
        /// START:END:STEP
        #[arg(long, default_value = "0:1:0.1", value_parser = parse_range)]
        eps: GridRange,
        /// START:END:STEP
        #[arg(long, default_value = "0:1:0.25", value_parser = parse_range)]
        alpha: GridRange,
        /// Add the FL, NSBL, one-way, hull and BL columns.
        #[arg(long)]
        with_lp: bool,
        /// Add the shared-variable TOBL column.
        #[arg(long)]
        with_tobl: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the separating functional of an Out verdict.
    Witness {
        path: PathBuf,
        #[arg(long)]
        class: HierarchyClass,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ghz,
    PepsLeft,
    PepsRight,
    PepsAlpha,
    Pr,
    Noise,
    Det,
}

#[derive(Clone, Copy, ValueEnum)]
enum Protocol {
    #[value(name = "2to3")]
    TwoToThree,
    #[value(name = "3to2")]
    ThreeToTwo,
}

#[derive(clap::Args)]
struct MakeArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// PR variant bits: o xor o' = x y xor a x xor b y xor g.
    #[arg(long, default_value_t = 0)]
    a: u8,
    #[arg(long, default_value_t = 0)]
    b: u8,
    #[arg(long, default_value_t = 0)]
    g: u8,
    /// For `pr`: prepend a deterministic party 1 with this response code (0..4).
    #[arg(long)]
    with_party1: Option<u8>,
    /// For `det`: party 1 response code, o1 = bit i1 of the code (0..4).
    #[arg(long, default_value_t = 0)]
    party1: u8,
    /// For `det`: o2 = bit (2 i2 + i3) of the code (0..16).
    #[arg(long, default_value_t = 0)]
    o2: u8,
    /// For `det`: o3 = bit (2 i2 + i3) of the code (0..16).
    #[arg(long, default_value_t = 0)]
    o3: u8,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<GridRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err(format!("expected START:END:STEP, got {s:?}"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    GridRange::new(num(start)?, num(end)?, num(step)?).map_err(|e| e.to_string())
}

/// A failure and its exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NumericalFailure(_) | Error::HierarchyInconsistency(_) => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        Failure(code, e.to_string())
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure(EXIT_USAGE, format!("{}: {e}", path.display()))
}

fn read_box(path: &Path) -> Result<AnyBox, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    Ok(deserialize(&text)?)
}

fn read_box3(path: &Path) -> Result<Box3, Failure> {
    Ok(read_box(path)?.into_box3()?)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn require(v: Option<f64>, flag: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure(EXIT_USAGE, format!("--{flag} is required for this kind")))
}

fn cmd_make(args: &MakeArgs) -> Result<(), Failure> {
    let b: AnyBox = match args.kind {
        Kind::Ghz => ghz_box(&MeasurementAssignment::default()).into(),
        Kind::PepsLeft => p_eps_left(&EpsParams::new(require(args.eps, "eps")?)?).into(),
        Kind::PepsRight => p_eps_right(&EpsParams::new(require(args.eps, "eps")?)?).into(),
        Kind::PepsAlpha => {
            let e = EpsParams::new(require(args.eps, "eps")?)?;
            p_eps_alpha(&e, require(args.alpha, "alpha")?)?.into()
        }
        Kind::Pr => {
            let pr = pr_box(PrVariant::new(args.a, args.b, args.g)?);
            match args.with_party1 {
                Some(code) => Box3::product(&det_box1(BitFn::new(code)?), &pr).into(),
                None => pr.into(),
            }
        }
        Kind::Noise => noise_box().into(),
        Kind::Det => {
            let bip = det_box2_twoway(PairFn::new(args.o2)?, PairFn::new(args.o3)?);
            Box3::product(&det_box1(BitFn::new(args.party1)?), &bip).into()
        }
    };
    emit(args.output.as_deref(), &serialize(&b))
}

fn print_weights(out: &mut String, class: HierarchyClass, weights: &[f64], tol: f64) {
    let mut support: Vec<(usize, f64)> =
        weights.iter().copied().enumerate().filter(|(_, w)| *w > tol * 1e-3).collect();
    support.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    out.push_str(&format!("  weights: {} of {} vertices in support\n", support.len(), weights.len()));
    for (j, w) in support.iter().take(MAX_LISTED) {
        let desc = class_descriptor(class, *j).unwrap_or_default();
        out.push_str(&format!("    {w:.12}  #{j}  {desc}\n"));
    }
    if support.len() > MAX_LISTED {
        out.push_str(&format!("    ... {} more\n", support.len() - MAX_LISTED));
    }
}

fn print_witness(out: &mut String, r: &MembershipResult) {
    if let Some(w) = &r.witness {
        out.push_str(&format!(
            "  witness: margin {:.6e}, offset {:.12}\n",
            w.margin, w.offset
        ));
        out.push_str("  functional (row-major, 8 rows of 8):\n");
        for row in w.functional.chunks(8) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:+.9}")).collect();
            out.push_str(&format!("    {}\n", cells.join(" ")));
        }
    }
}

fn print_lp(out: &mut String, class: HierarchyClass, r: &MembershipResult, tol: f64) {
    match &r.weights {
        Some(w) => print_weights(out, class, w, tol),
        None => print_witness(out, r),
    }
}

fn describe(out: &mut String, r: &ClassResult, tol: f64) {
    out.push_str(&format!("{:<12} {}\n", r.class.name(), r.verdict));
    match &r.evidence {
        Evidence::Lp(m) => print_lp(out, r.class, m, tol),
        Evidence::Union { left, right } => {
            let side = if left.is_in() { Some((HierarchyClass::AtoblLeft, left)) } else if right.is_in() {
                Some((HierarchyClass::AtoblRight, right))
            } else {
                None
            };
            match side {
                Some((c, m)) => {
                    out.push_str(&format!("  via {c}\n"));
                    print_lp(out, c, m, tol);
                }
                None => {
                    out.push_str("  left witness:\n");
                    print_witness(out, left);
                    out.push_str("  right witness:\n");
                    print_witness(out, right);
                }
            }
        }
        Evidence::NoSignaling(ns) => {
            out.push_str(&format!("  max violation {:.3e}", ns.max_violation));
            if let Some(s) = &ns.violating_subset {
                out.push_str(&format!(", signaling from parties {s:?}"));
            }
            out.push('\n');
        }
    }
}

fn cmd_classify(path: &Path, class: Option<HierarchyClass>, json: bool, tol: f64) -> Result<u8, Failure> {
    let b = read_box3(path)?;
    let mut out = String::new();
    let code = match class {
        Some(c) => {
            let r = membership(&b, c, tol)?;
            if json {
                out = serde_json::to_string_pretty(&r).expect("serializable") + "\n";
            } else {
                describe(&mut out, &r, tol);
            }
            if r.is_in() { 0 } else { EXIT_OUT }
        }
        None => {
            let report = classify_full(&b, tol)?;
            if json {
                out = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            } else {
                let finest = report.finest_class.map(|c| c.to_string()).unwrap_or("none".into());
                out.push_str(&format!("finest_class: {finest}\n"));
                out.push_str(&format!("tobl_intersection_gap: {}\n", report.tobl_intersection_gap));
                for r in &report.results {
                    describe(&mut out, r, tol);
                }
            }
            0
        }
    };
    print!("{out}");
    Ok(code)
}

fn cmd_wire(path: &Path, protocol: Protocol, output: Option<&Path>) -> Result<(), Failure> {
    let b = read_box3(path)?;
    let q = match protocol {
        Protocol::TwoToThree => wire_2to3(&b),
        Protocol::ThreeToTwo => wire_3to2(&b),
    };
    emit(output, &serialize(&q.into()))
}

fn cmd_chsh(path: &Path, variant: Option<ChshVariant>) -> Result<(), Failure> {
    let q = read_box(path)?.into_box2()?;
    let v = variant.unwrap_or(ChshVariant::CANONICAL);
    let (max, arg) = chsh_max_variant(&q);
    println!("chsh[{v}] = {:.12}", chsh_value(&q, v));
    println!("chsh_max = {max:.12} (variant {arg})");
    Ok(())
}

fn cmd_scan(cfg: &ScanConfig, output: Option<&Path>) -> Result<(), Failure> {
    let records = run_scan(cfg)?;
    let mut buf = Vec::new();
    write_csv(&records, &mut buf)?;
    match output {
        Some(p) => fs::write(p, buf).map_err(|e| io_failure(p, e)),
        None => io::stdout().write_all(&buf).map_err(|e| Failure(EXIT_FAILURE, e.to_string())),
    }
}

fn cmd_witness(path: &Path, class: HierarchyClass, tol: f64) -> Result<u8, Failure> {
    let b = read_box3(path)?;
    let r = membership(&b, class, tol)?;
    if r.is_in() {
        println!("{class} In: no separating functional");
        return Ok(0);
    }
    let mut out = String::new();
    match &r.evidence {
        Evidence::Lp(m) => print_witness(&mut out, m),
        Evidence::Union { left, right } => {
            out.push_str("ATOBL_LEFT:\n");
            print_witness(&mut out, left);
            out.push_str("ATOBL_RIGHT:\n");
            print_witness(&mut out, right);
        }
        Evidence::NoSignaling(_) => describe(&mut out, &r, tol),
    }
    print!("{class} Out\n{out}");
    Ok(EXIT_OUT)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure(EXIT_USAGE, format!("tolerance {tol} must be positive")));
    }
    match cli.command {
        Command::Make(args) => cmd_make(&args).map(|_| 0),
        Command::Classify { path, class, json } => cmd_classify(&path, class, json, tol),
        Command::Wire { path, protocol, output } => cmd_wire(&path, protocol, output.as_deref()).map(|_| 0),
        Command::Chsh { path, variant } => cmd_chsh(&path, variant).map(|_| 0),
        Command::Scan { eps, alpha, with_lp, with_tobl, output } => {
            let cfg = ScanConfig { eps, alpha, with_lp, with_tobl, tol };
            cmd_scan(&cfg, output.as_deref()).map(|_| 0)
        }
        Command::Witness { path, class } => cmd_witness(&path, class, tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("boxlab: {msg}");
            ExitCode::from(code)
        }
    }
}
