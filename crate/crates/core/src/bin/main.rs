//! Command-line front end: evaluate the invariant, validate input files,
//! generate category files, run seeded move walks, and check the identity
//! suites.  Exit codes: 0 success, 2 parse error, 3 validation failure,
//! 4 reduced-mode self-check failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use statesum::category::cochain::CochainTable;
use statesum::category::dimid::{check_dimension_identities, IdStatus};
use statesum::category::generators::{
    gen_pointed_braided, gen_twisted_dw, gen_yetter_2group, pointed_preset, preset_category,
    to_generator_json, PRESET_NAMES,
};
use statesum::category::group::GroupPresentation;
use statesum::category::pachner::{
    check_pachner_15, check_pachner_24, check_pachner_33, check_section_identity,
};
use statesum::category::{load_category, CatError, Fusion2CatData, YetterOmega};
use statesum::scalar::{format_f64, Cyclotomic};
use statesum::simplicial::moves::{random_move_walk, WalkOptions, RNG_ALGORITHM};
use statesum::simplicial::{complex_from_json, OrderedOrientedComplex, SimplicialError};
use statesum::statesum::{evaluate, Mode, StateSumError, StateSumOptions};

#[derive(Parser)]
#[command(
    name = "statesum",
    version,
    about = "State-sum invariants of singular piecewise-linear 4-manifolds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the invariant of a complex against a category.
    Compute(ComputeArgs),
    /// Check that a triangulation file is a closed orientable singular 4-manifold.
    ValidateComplex(ValidateComplexArgs),
    /// Check the coherence of a category file.
    ValidateCategory(ValidateCategoryArgs),
    /// Write a generator-reference category file.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Apply a seeded random walk of bistellar moves to a complex.
    Moves(MovesArgs),
    /// Run the dimension and Pachner identity suites on a category.
    Identities(IdentitiesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Reduced,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFmt {
    Exact,
    Approx,
    Both,
}

#[derive(clap::Args)]
struct ComputeArgs {
    /// Triangulation file.
    #[arg(long)]
    complex: PathBuf,
    /// Category file (generator reference or explicit tables).
    #[arg(long)]
    category: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    mode: ModeArg,
    /// Worker threads for the state scan; the result does not depend on it.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Seed for the reduced-mode self-check shifts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutFmt::Exact)]
    out: OutFmt,
    /// Write a JSON run report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Reverse the global orientation before evaluating (exploratory).
    #[arg(long)]
    reverse_orientation: bool,
}

#[derive(clap::Args)]
struct ValidateComplexArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ValidateCategoryArgs {
    #[arg(long)]
    category: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Twisted group category from a finite group and a 4-cocycle.
    Dw {
        /// Group preset: Z1, Z2, Z3, Z4, Z2xZ2, S3.
        #[arg(long)]
        group: String,
        /// "trivial" or a path to a cocycle table file.
        #[arg(long, default_value = "trivial")]
        omega: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Pointed braided category from a preset or a trivial quadratic form.
    Pointed {
        #[arg(long)]
        group: Option<String>,
        /// Preset name such as boson, fermion, semion, anti_semion, z3_1.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// 2-group category with pi_1 = G acting trivially on pi_2 = A.
    Yetter {
        #[arg(long = "G")]
        g: String,
        #[arg(long = "A")]
        a: String,
        /// Only "trivial" is generated here; tables load via category files.
        #[arg(long, default_value = "trivial")]
        omega: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Any named preset category.
    Preset {
        name: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct MovesArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long, default_value_t = 0)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Suppress vertex-adding moves at or above this many vertices.
    #[arg(long)]
    max_vertices: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct IdentitiesArgs {
    #[arg(long)]
    category: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// A terminal failure carrying its exit code.
struct Failure {
    code: u8,
    msg: String,
}

fn parse_failure(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        msg: msg.into(),
    }
}

fn fail_cat(e: CatError) -> Failure {
    let code = match &e {
        CatError::Parse(_) | CatError::Io(_) => 2,
        _ => 3,
    };
    Failure {
        code,
        msg: e.to_string(),
    }
}

fn fail_simp(e: SimplicialError) -> Failure {
    let code = match &e {
        SimplicialError::Parse(_) => 2,
        _ => 3,
    };
    Failure {
        code,
        msg: e.to_string(),
    }
}

fn fail_sum(e: StateSumError) -> Failure {
    match e {
        StateSumError::Cat(c) => fail_cat(c),
        StateSumError::Simplicial(s) => fail_simp(s),
        StateSumError::ReductionSelfCheckFailed(m) => Failure {
            code: 4,
            msg: format!("reduction self-check failed: {m}"),
        },
        other => Failure {
            code: 3,
            msg: other.to_string(),
        },
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_failure(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<OrderedOrientedComplex, Failure> {
    let v = read_json(path)?;
    let (cx, order) = complex_from_json(&v).map_err(fail_simp)?;
    cx.validate_singular_4manifold().map_err(fail_simp)?;
    OrderedOrientedComplex::orient(cx, order).map_err(fail_simp)
}

fn load_cat(path: &Path) -> Result<Fusion2CatData, Failure> {
    let v = read_json(path)?;
    let cat = load_category(&v).map_err(fail_cat)?;
    cat.validate().map_err(fail_cat)?;
    Ok(cat)
}

fn write_text(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| parse_failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_report(path: &Option<PathBuf>, v: &Value) -> Result<(), Failure> {
    if let Some(p) = path {
        let text = format!("{}\n", serde_json::to_string_pretty(v).unwrap());
        fs::write(p, text).map_err(|e| parse_failure(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn format_approx(z: &Cyclotomic) -> String {
    let (re, im) = z.to_complex();
    if im == 0.0 {
        format_f64(re)
    } else if im < 0.0 {
        format!("{} - {}i", format_f64(re), format_f64(-im))
    } else {
        format!("{} + {}i", format_f64(re), format_f64(im))
    }
}

fn group_by_name(name: &str) -> Result<GroupPresentation, Failure> {
    GroupPresentation::preset(name)
        .ok_or_else(|| parse_failure(format!("unknown group preset {name:?}")))
}

fn cmd_compute(args: ComputeArgs) -> Result<ExitCode, Failure> {
    if args.threads > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global()
            .ok();
    }
    let mut oc = load_complex(&args.complex)?;
    if args.reverse_orientation {
        oc = oc.reversed();
    }
    let cat = load_cat(&args.category)?;
    let mode = match args.mode {
        ModeArg::Full => Mode::Full,
        ModeArg::Reduced => Mode::Reduced,
    };
    let opts = StateSumOptions {
        mode,
        seed: args.seed,
        parallel: args.threads > 1,
        ..StateSumOptions::default()
    };
    let z = evaluate(&oc, &cat, &opts).map_err(fail_sum)?;
    match args.out {
        OutFmt::Exact => println!("{z}"),
        OutFmt::Approx => println!("{}", format_approx(&z)),
        OutFmt::Both => {
            println!("exact: {z}");
            println!("approx: {}", format_approx(&z));
        }
    }
    let (re, im) = z.to_complex();
    write_report(
        &args.report,
        &json!({
            "command": "compute",
            "complex": args.complex.display().to_string(),
            "category": args.category.display().to_string(),
            "mode": match mode { Mode::Full => "full", Mode::Reduced => "reduced" },
            "seed": args.seed,
            "threads": args.threads,
            "rng": RNG_ALGORITHM,
            "reverse_orientation": args.reverse_orientation,
            "exact": z.to_json(),
            "exact_string": z.to_string(),
            "approx": { "re": re, "im": im },
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate_complex(args: ValidateComplexArgs) -> Result<ExitCode, Failure> {
    let v = read_json(&args.complex)?;
    let (cx, order) = complex_from_json(&v).map_err(fail_simp)?;
    let counts = json!({
        "vertices": cx.n_vertices(),
        "edges": cx.simplices(1).len(),
        "triangles": cx.simplices(2).len(),
        "tetrahedra": cx.simplices(3).len(),
        "facets": cx.facets().len(),
        "euler_characteristic": cx.euler_characteristic(),
    });
    let outcome = cx
        .validate_singular_4manifold()
        .and_then(|_| OrderedOrientedComplex::orient(cx, order))
        .map(|_| ());
    match outcome {
        Ok(()) => {
            println!(
                "PASS: {} is a closed orientable singular 4-manifold ({})",
                args.complex.display(),
                counts
            );
            write_report(
                &args.report,
                &json!({
                    "command": "validate-complex",
                    "path": args.complex.display().to_string(),
                    "pass": true,
                    "problems": [],
                    "counts": counts,
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("FAIL: {e}");
            write_report(
                &args.report,
                &json!({
                    "command": "validate-complex",
                    "path": args.complex.display().to_string(),
                    "pass": false,
                    "problems": [e.to_string()],
                    "counts": counts,
                }),
            )?;
            Ok(ExitCode::from(3))
        }
    }
}

fn cmd_validate_category(args: ValidateCategoryArgs) -> Result<ExitCode, Failure> {
    let v = read_json(&args.category)?;
    let cat = load_category(&v).map_err(fail_cat)?;
    match cat.validate() {
        Ok(()) => {
            println!(
                "PASS: {} ({}, {} objects)",
                args.category.display(),
                cat.name,
                cat.n_objects()
            );
            write_report(
                &args.report,
                &json!({
                    "command": "validate-category",
                    "path": args.category.display().to_string(),
                    "name": cat.name,
                    "pass": true,
                    "problems": [],
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            let problems: Vec<String> = match &e {
                CatError::Validation(list) => list.clone(),
                other => vec![other.to_string()],
            };
            for p in &problems {
                println!("FAIL: {p}");
            }
            write_report(
                &args.report,
                &json!({
                    "command": "validate-category",
                    "path": args.category.display().to_string(),
                    "name": cat.name,
                    "pass": false,
                    "problems": problems,
                }),
            )?;
            Ok(ExitCode::from(3))
        }
    }
}

fn cmd_gen(cmd: GenCmd) -> Result<ExitCode, Failure> {
    let (cat, output) = match cmd {
        GenCmd::Dw {
            group,
            omega,
            output,
        } => {
            let gp = group_by_name(&group)?;
            let om = if omega == "trivial" {
                None
            } else {
                let v = read_json(Path::new(&omega))?;
                Some(CochainTable::from_json(4, &gp, &v).map_err(fail_cat)?)
            };
            (gen_twisted_dw(gp, om).map_err(fail_cat)?, output)
        }
        GenCmd::Pointed {
            group,
            preset,
            output,
        } => {
            let cat = match (preset, group) {
                (Some(p), _) => pointed_preset(&p)
                    .ok_or_else(|| parse_failure(format!("unknown pointed preset {p:?}")))?,
                (None, Some(g)) => {
                    let gp = group_by_name(&g)?;
                    let n = gp.order();
                    gen_pointed_braided(
                        gp,
                        CochainTable::trivial(3, n),
                        CochainTable::trivial(2, n),
                        vec![Cyclotomic::one(); n],
                    )
                    .map_err(fail_cat)?
                }
                (None, None) => {
                    return Err(parse_failure("gen pointed needs --preset or --group"))
                }
            };
            (cat, output)
        }
        GenCmd::Yetter {
            g,
            a,
            omega,
            output,
        } => {
            if omega != "trivial" {
                return Err(parse_failure(
                    "gen yetter only writes the trivial omega; tables load via category files",
                ));
            }
            let gp = group_by_name(&g)?;
            let ap = group_by_name(&a)?;
            (
                gen_yetter_2group(gp, ap, YetterOmega::Trivial).map_err(fail_cat)?,
                output,
            )
        }
        GenCmd::Preset { name, output } => {
            let cat = preset_category(&name).ok_or_else(|| {
                parse_failure(format!(
                    "unknown preset {name:?}; available: {}",
                    PRESET_NAMES.join(", ")
                ))
            })?;
            (cat, output)
        }
    };
    cat.validate().map_err(fail_cat)?;
    let v = to_generator_json(&cat)
        .ok_or_else(|| parse_failure("category has no generator reference form"))?;
    write_text(
        &output,
        &format!("{}\n", serde_json::to_string_pretty(&v).unwrap()),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_moves(args: MovesArgs) -> Result<ExitCode, Failure> {
    let oc = load_complex(&args.complex)?;
    let opts = WalkOptions {
        count: args.count,
        seed: args.seed,
        forced_kind: None,
        max_vertices: args.max_vertices,
    };
    let (moved, log) = random_move_walk(&oc, &opts).map_err(fail_simp)?;
    let mut out = moved.to_json();
    let obj = out.as_object_mut().unwrap();
    obj.insert(
        "moves".into(),
        json!(log.iter().map(|r| r.to_json()).collect::<Vec<_>>()),
    );
    obj.insert("rng".into(), json!(RNG_ALGORITHM));
    obj.insert("seed".into(), json!(args.seed));
    write_text(
        &args.output,
        &format!("{}\n", serde_json::to_string_pretty(&out).unwrap()),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_identities(args: IdentitiesArgs) -> Result<ExitCode, Failure> {
    let cat = load_cat(&args.category)?;
    let mut failed = false;

    let dim_reports = check_dimension_identities(&cat);
    let mut dim_json = Vec::new();
    for r in &dim_reports {
        let status = match &r.status {
            IdStatus::Pass => "PASS".to_string(),
            IdStatus::Skipped(m) => format!("SKIP ({m})"),
            IdStatus::Fail(m) => {
                failed = true;
                format!("FAIL: {m}")
            }
        };
        println!("dim:{}: {status}", r.name);
        dim_json.push(json!({ "name": r.name, "status": status }));
    }

    let mut pachner_json = Vec::new();
    let pachner_runs = [
        ("(3,3)", check_pachner_33(&cat)),
        ("(2,4)", check_pachner_24(&cat)),
        ("(1,5)", check_pachner_15(&cat)),
    ];
    for (label, run) in pachner_runs {
        let rep = run.map_err(fail_cat)?;
        match &rep.mismatch {
            None => println!("pachner:{label}: PASS ({} contexts)", rep.contexts),
            Some(m) => {
                failed = true;
                println!("pachner:{label}: FAIL: {m}");
            }
        }
        pachner_json.push(json!({
            "kind": label,
            "contexts": rep.contexts,
            "mismatch": rep.mismatch,
        }));
    }

    let sec = check_section_identity(&cat).map_err(fail_cat)?;
    match &sec.mismatch {
        None => println!(
            "section: PASS ({} frames, {} checks)",
            sec.frames, sec.checks
        ),
        Some(m) => {
            failed = true;
            println!("section: FAIL: {m}");
        }
    }

    write_report(
        &args.report,
        &json!({
            "command": "identities",
            "category": args.category.display().to_string(),
            "name": cat.name,
            "dimension": dim_json,
            "pachner": pachner_json,
            "section": {
                "frames": sec.frames,
                "checks": sec.checks,
                "mismatch": sec.mismatch,
            },
            "pass": !failed,
        }),
    )?;
    Ok(if failed {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match cli.cmd {
        Cmd::Compute(a) => cmd_compute(a),
        Cmd::ValidateComplex(a) => cmd_validate_complex(a),
        Cmd::ValidateCategory(a) => cmd_validate_category(a),
        Cmd::Gen(g) => cmd_gen(g),
        Cmd::Moves(a) => cmd_moves(a),
        Cmd::Identities(a) => cmd_identities(a),
    };
    match run {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
