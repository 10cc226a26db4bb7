//! Command-line front end: matrix classification, group building and
//! verification, symmetry-set enumeration, dependent-case orbits, the
//! functional-equation solver, and the built-in example corpus.
//!
//! Reports are deterministic JSON (sorted keys, canonical rational strings);
//! `--summary` renders the same report for humans. Exit codes: 0 success,
//! 2 input errors, 3 computational guards.

use clap::{Args, Parser, Subcommand};
use dehnkit::blocktype::{classify_type, positivity_check, BlockMat};
use dehnkit::catalog;
use dehnkit::corpus;
use dehnkit::exactnum::{parse_quad, parse_rational, QuadNum};
use dehnkit::fillings::{
    dependent_constraint_check, dependent_orbit, parse_pair, symmetry_set, DependentMode,
    PotentialDeg4, SymmetryOpts,
};
use dehnkit::funceq;
use dehnkit::groups::{
    closure, maximal_group, type_census, verify_presentation, PresentationKind, Scenario,
    DEFAULT_CLOSURE_CAP,
};
use dehnkit::linalg::Mat4;
use dehnkit::report::{self, Report, Verdict};
use dehnkit::spectral::{aut_necessary_check, eigen2, primary_matrix};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dehnkit", version, about = "Exact Dehn-filling symmetry toolkit")]
struct Cli {
    /// Emit the report as JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Render the report as human-readable text instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    summary: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a 4x4 rational matrix against the catalog.
    Classify(ClassifyArgs),
    /// Build a group closure and verify its presentation.
    Group(GroupArgs),
    /// Enumerate the symmetry set of a slope pair under a group.
    Symmetry(SymmetryArgs),
    /// Dependent-case orbits and potential-coefficient constraints.
    Dependent(DependentArgs),
    /// Solve the homogeneous functional-equation constraint.
    Funceq(FunceqArgs),
    /// Run the built-in worked examples with self-verification.
    Examples,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Matrix file: {"rows": [["p/q", ...] x4]}.
    #[arg(long)]
    matrix: PathBuf,
    /// Cusp shape, e.g. "sqrt(-2)" or "1/2+1/2*sqrt(-3)".
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    /// Second cusp shape (defaults to --tau).
    #[arg(long, allow_hyphen_values = true)]
    tau2: Option<String>,
}

#[derive(Args)]
struct GroupArgs {
    /// Canonical scenario: TypeI_only, TypeI_II, sqrt3_III, sqrt2_III,
    /// sqrt1_III_order2, sqrt1_III_pair, generic.
    #[arg(long, conflicts_with = "generators")]
    scenario: Option<String>,
    /// Cusp field D for the scenario (defaults to the scenario's field).
    #[arg(long, allow_negative_numbers = true)]
    field: Option<i64>,
    /// Generator file: JSON list of 4x4 matrices.
    #[arg(long)]
    generators: Option<PathBuf>,
    /// An already-closed group file (same format as --generators).
    #[arg(long, conflicts_with_all = ["scenario", "generators"])]
    group: Option<PathBuf>,
    /// Verify the presentation for the scenario kind (sqrt3, sqrt2,
    /// sqrt1_pair); defaults to the scenario's own kind.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    presentation: Option<String>,
    /// Closure cap (DEHNKIT_CLOSURE_CAP overrides the default).
    #[arg(long)]
    cap: Option<usize>,
    /// Include the element list in the report.
    #[arg(long)]
    emit_elements: bool,
    /// Write the closed group to a file as a JSON matrix list.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SymmetryArgs {
    #[arg(long, conflicts_with = "generators")]
    scenario: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    field: Option<i64>,
    #[arg(long)]
    generators: Option<PathBuf>,
    /// An already-closed group file (same format as --generators).
    #[arg(long, conflicts_with_all = ["scenario", "generators"])]
    group: Option<PathBuf>,
    /// Slope pair "p1/q1,p2/q2".
    #[arg(long)]
    pair: String,
    #[arg(long)]
    apply_filters: bool,
    #[arg(long)]
    c22_nonzero: bool,
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct DependentArgs {
    /// Orbit mode: "SGI" or "NonSGI".
    #[arg(long)]
    mode: Option<String>,
    /// Cusp field D.
    #[arg(long, allow_negative_numbers = true)]
    field: i64,
    #[arg(long)]
    pair: Option<String>,
    /// 2x2 matrix files for the two cusp symmetries.
    #[arg(long)]
    sigma1: Option<PathBuf>,
    #[arg(long)]
    sigma2: Option<PathBuf>,
    /// Constraint check inputs: 2x2 matrix files A and B.
    #[arg(long)]
    mat_a: Option<PathBuf>,
    #[arg(long)]
    mat_b: Option<PathBuf>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c40: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c22: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c04: Option<String>,
}

#[derive(Args)]
struct FunceqArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    #[arg(long, allow_hyphen_values = true)]
    tau2: Option<String>,
    /// Homogeneous degree (odd; pass --allow-even to experiment).
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    allow_even: bool,
    /// Apply the parity/gradient symmetry filter with this coefficient.
    #[arg(long, allow_hyphen_values = true)]
    symmetry_a: Option<String>,
}

enum CliError {
    Input(String),
    Guard(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Guard(m) => m,
        }
    }
}

fn input_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn read_file(path: &PathBuf) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn closure_cap(cli: Option<usize>) -> usize {
    cli.or_else(|| {
        std::env::var("DEHNKIT_CLOSURE_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_CLOSURE_CAP)
}

fn parse_scenario(name: &str) -> Result<Scenario, CliError> {
    Scenario::parse(name)
        .ok_or_else(|| CliError::Input(format!("unknown scenario {name:?}")))
}

fn scenario_default_field(s: Scenario) -> Option<i64> {
    match s {
        Scenario::Sqrt3TypeIII => Some(-3),
        Scenario::Sqrt2TypeIII => Some(-2),
        Scenario::Sqrt1TypeIIIOrder2 | Scenario::Sqrt1TypeIIIPair => Some(-1),
        _ => None,
    }
}

fn build_group(
    scenario: &Option<String>,
    field: Option<i64>,
    generators: &Option<PathBuf>,
    group: &Option<PathBuf>,
    cap: usize,
) -> Result<(dehnkit::groups::GroupSet, Vec<(String, String)>, Option<Scenario>), CliError> {
    let mut inputs = Vec::new();
    let (gens, scen) = match (scenario, generators.as_ref().or(group.as_ref())) {
        (Some(name), None) => {
            let s = parse_scenario(name)?;
            let d = field
                .or_else(|| scenario_default_field(s))
                .ok_or_else(|| CliError::Input("--field is required for this scenario".into()))?;
            inputs.push(("scenario".to_string(), name.clone()));
            inputs.push(("field".to_string(), d.to_string()));
            let gens = maximal_group(d, s).map_err(|e| CliError::Guard(e.to_string()))?;
            (gens, Some(s))
        }
        (None, Some(path)) => {
            let bytes = read_file(path)?;
            let key = if generators.is_some() { "generators" } else { "group" };
            inputs.push((key.to_string(), report::digest(&bytes)));
            (report::parse_matrix_list_json(&bytes).map_err(input_err)?, None)
        }
        _ => {
            return Err(CliError::Input(
                "exactly one of --scenario, --generators or --group is required".into(),
            ))
        }
    };
    let g = closure(&gens, cap).map_err(|e| match e {
        dehnkit::groups::GroupError::SingularGenerator(_) => CliError::Input(e.to_string()),
        other => CliError::Guard(other.to_string()),
    })?;
    Ok((g, inputs, scen))
}

fn classify_results(m: &Mat4, tau: Option<(QuadNum, QuadNum)>) -> Result<Value, CliError> {
    let block = BlockMat::from_mat4(m);
    let tag = classify_type(&block);
    let mp = m.min_poly();
    let hit = catalog::match_catalog(&block);
    let mut results = json!({
        "type": tag.as_str(),
        "min_poly": mp.to_string(),
        "min_poly_coeffs": report::poly_value(&mp),
        "char_poly": m.char_poly().to_string(),
        "finite_order": m.finite_order(),
        "positivity": positivity_check(&block),
        "catalog": match &hit {
            Some(h) => json!({
                "matched": true,
                "template": h.template,
                "min_poly": h.min_poly.to_string(),
                "field_D": h.field_d,
                "A1": report::mat2_value(&h.a1),
                "A2": report::mat2_value(&h.a2),
                "ambiguous_with": h.ambiguous_with,
            }),
            None => json!({"matched": false}),
        },
    });
    if let Some((t1, t2)) = tau {
        let p = primary_matrix(&block, &t1, &t2)
            .map_err(|e| CliError::Input(format!("primary matrix: {e}")))?;
        let data = eigen2(&p.p, p.d);
        results["primary"] = json!({
            "P": [
                [report::quad_value(&p.p.e[0][0]), report::quad_value(&p.p.e[0][1])],
                [report::quad_value(&p.p.e[1][0]), report::quad_value(&p.p.e[1][1])],
            ],
            "trace": report::quad_value(&data.trace),
            "det": report::quad_value(&data.det),
            "discriminant": report::quad_value(&data.discriminant),
            "split": data.split.as_ref().map(|(l1, l2)| {
                json!([report::quad_value(l1), report::quad_value(l2)])
            }),
            "verdict": aut_necessary_check(&p).as_str(),
        });
    }
    Ok(results)
}

fn cmd_classify(args: &ClassifyArgs) -> Result<Report, CliError> {
    let bytes = read_file(&args.matrix)?;
    let m = report::parse_mat4_json(&bytes).map_err(input_err)?;
    let tau = match &args.tau {
        Some(t) => {
            let t1 = parse_quad(t).map_err(input_err)?;
            let t2 = match &args.tau2 {
                Some(t2) => parse_quad(t2).map_err(input_err)?,
                None => t1.clone(),
            };
            Some((t1, t2))
        }
        None => None,
    };
    let results = classify_results(&m, tau)?;
    let mut inputs = vec![("matrix".to_string(), report::digest(&bytes))];
    if let Some(t) = &args.tau {
        inputs.push(("tau".to_string(), t.clone()));
    }
    Ok(Report {
        command: "classify".into(),
        inputs,
        results,
        verdicts: Vec::new(),
    })
}

fn presentation_kind_for(scenario: Option<Scenario>, flag: &Option<String>) -> Option<PresentationKind> {
    if let Some(name) = flag {
        return PresentationKind::parse(name);
    }
    match scenario? {
        Scenario::Sqrt3TypeIII => Some(PresentationKind::Sqrt3),
        Scenario::Sqrt2TypeIII => Some(PresentationKind::Sqrt2),
        Scenario::Sqrt1TypeIIIPair => Some(PresentationKind::Sqrt1Pair),
        _ => None,
    }
}

fn cmd_group(args: &GroupArgs) -> Result<Report, CliError> {
    let cap = closure_cap(args.cap);
    let (g, inputs, scen) = build_group(&args.scenario, args.field, &args.generators, &args.group, cap)?;
    let census = type_census(&g);
    let mut results = json!({
        "order": g.order(),
        "census": census,
    });
    let mut verdicts = Vec::new();
    if args.verify {
        match presentation_kind_for(scen, &args.presentation) {
            Some(kind) => {
                let rep = verify_presentation(&g, kind);
                for (name, pass) in &rep.identities {
                    verdicts.push(Verdict { name: name.clone(), pass: *pass });
                }
                if let Some(cov) = rep.coverage {
                    verdicts.push(Verdict { name: "coset coverage".into(), pass: cov });
                }
                if let Some(ab) = rep.h_abelian {
                    verdicts.push(Verdict { name: "H abelian".into(), pass: ab });
                }
                results["presentation"] =
                    serde_json::to_value(&rep).expect("presentation report serializes");
            }
            None => {
                return Err(CliError::Input(
                    "--verify needs a presentation kind (sqrt3, sqrt2, sqrt1_pair)".into(),
                ))
            }
        }
    }
    if args.emit_elements {
        results["elements"] = report::matrix_list_value(&g.elements);
    }
    if let Some(path) = &args.out {
        let value = report::matrix_list_value(&g.elements);
        let text = serde_json::to_string_pretty(&value).expect("group serializes");
        std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(Report { command: "group".into(), inputs, results, verdicts })
}

fn cmd_symmetry(args: &SymmetryArgs) -> Result<Report, CliError> {
    let cap = closure_cap(args.cap);
    let (g, mut inputs, _) =
        build_group(&args.scenario, args.field, &args.generators, &args.group, cap)?;
    let pair = parse_pair(&args.pair).map_err(input_err)?;
    inputs.push(("pair".to_string(), args.pair.clone()));
    let opts = SymmetryOpts {
        apply_filters: args.apply_filters,
        c22_nonzero: args.c22_nonzero,
    };
    let rep = symmetry_set(&g, &pair, opts).map_err(|e| CliError::Guard(e.to_string()))?;
    let results = serde_json::to_value(&rep).expect("symmetry report serializes");
    Ok(Report { command: "symmetry".into(), inputs, results, verdicts: Vec::new() })
}

fn cmd_dependent(args: &DependentArgs) -> Result<Report, CliError> {
    let mut inputs = vec![("field".to_string(), args.field.to_string())];
    let mut results = serde_json::Map::new();
    let mut ran_anything = false;
    if let (Some(mode), Some(pair), Some(s1), Some(s2)) =
        (&args.mode, &args.pair, &args.sigma1, &args.sigma2)
    {
        let mode = match mode.to_ascii_lowercase().as_str() {
            "sgi" => DependentMode::Sgi,
            "nonsgi" | "non-sgi" => DependentMode::NonSgi,
            other => return Err(CliError::Input(format!("unknown mode {other:?}"))),
        };
        let pair = parse_pair(pair).map_err(input_err)?;
        let m1 = report::parse_mat2_json(&read_file(s1)?).map_err(input_err)?;
        let m2 = report::parse_mat2_json(&read_file(s2)?).map_err(input_err)?;
        let orbit = dependent_orbit(mode, args.field, &pair, &m1, &m2)
            .map_err(|e| CliError::Guard(e.to_string()))?;
        inputs.push(("mode".to_string(), format!("{mode:?}")));
        results.insert(
            "orbit".into(),
            Value::Array(orbit.iter().map(report::pair_value).collect()),
        );
        results.insert("orbit_size".into(), json!(orbit.len()));
        ran_anything = true;
    }
    if let (Some(a), Some(b), Some(tau), Some(c40), Some(c22), Some(c04)) =
        (&args.mat_a, &args.mat_b, &args.tau, &args.c40, &args.c22, &args.c04)
    {
        let a = report::parse_mat2_json(&read_file(a)?).map_err(input_err)?;
        let b = report::parse_mat2_json(&read_file(b)?).map_err(input_err)?;
        let tau = parse_quad(tau).map_err(input_err)?;
        let pot = PotentialDeg4 {
            c40: parse_rational(c40).map_err(input_err)?,
            c22: parse_rational(c22).map_err(input_err)?,
            c04: parse_rational(c04).map_err(input_err)?,
        };
        let ok = dependent_constraint_check(&a, &b, &tau, &pot)
            .map_err(|e| CliError::Input(e.to_string()))?;
        results.insert("constraint_check".into(), json!(ok));
        ran_anything = true;
    }
    if !ran_anything {
        return Err(CliError::Input(
            "dependent needs either orbit inputs (--mode --pair --sigma1 --sigma2) \
             or constraint inputs (--mat-a --mat-b --tau --c40 --c22 --c04)"
                .into(),
        ));
    }
    Ok(Report {
        command: "dependent".into(),
        inputs,
        results: Value::Object(results),
        verdicts: Vec::new(),
    })
}

fn cmd_funceq(args: &FunceqArgs) -> Result<Report, CliError> {
    if args.degree < 1 {
        return Err(CliError::Input("degree must be positive".into()));
    }
    if args.degree % 2 == 0 && !args.allow_even {
        return Err(CliError::Input(
            "degree must be odd (pass --allow-even to experiment)".into(),
        ));
    }
    let bytes = read_file(&args.matrix)?;
    let m = report::parse_mat4_json(&bytes).map_err(input_err)?;
    let t1 = parse_quad(&args.tau).map_err(input_err)?;
    let t2 = match &args.tau2 {
        Some(t) => parse_quad(t).map_err(input_err)?,
        None => t1.clone(),
    };
    let block = BlockMat::from_mat4(&m);
    let p = primary_matrix(&block, &t1, &t2)
        .map_err(|e| CliError::Input(format!("primary matrix: {e}")))?;
    let kernel = funceq::constraint_kernel(&p, args.degree);
    let mut verdicts = vec![Verdict {
        name: "kernel elements re-verify by independent expansion".into(),
        pass: kernel.iter().all(|pair| funceq::verify_constraint(&p, pair)),
    }];
    let mut results = json!({
        "degree": args.degree,
        "kernel_dimension": kernel.len(),
        "kernel": kernel.iter().map(report::theta_pair_value).collect::<Vec<_>>(),
    });
    match funceq::eigen_transform(&p) {
        Ok(t) => {
            results["eigen"] = json!({
                "lambdas": [report::quad_value(&t.lambdas.0), report::quad_value(&t.lambdas.1)],
                "zetas": [report::quad_value(&t.zetas.0), report::quad_value(&t.zetas.1)],
                "eigenbasis_kernel": kernel
                    .iter()
                    .map(|pair| report::theta_pair_value(&t.to_eigenbasis(pair)))
                    .collect::<Vec<_>>(),
            });
            match funceq::structure_classify(&kernel, &t) {
                Ok(reports) => {
                    results["structure"] =
                        serde_json::to_value(&reports).expect("structure serializes");
                }
                Err(e) => {
                    verdicts.push(Verdict {
                        name: format!("structural dichotomy ({e})"),
                        pass: false,
                    });
                }
            }
        }
        Err(e) => {
            results["eigen"] = json!({"unavailable": e.to_string()});
        }
    }
    if let Some(a) = &args.symmetry_a {
        let a = parse_quad(a).map_err(input_err)?;
        let filtered = funceq::symmetry_filter(&kernel, &a);
        results["filtered"] = json!({
            "a": report::quad_value(&a),
            "dimension": filtered.len(),
            "basis": filtered.iter().map(report::theta_pair_value).collect::<Vec<_>>(),
        });
    }
    Ok(Report {
        command: "funceq".into(),
        inputs: vec![
            ("matrix".to_string(), report::digest(&bytes)),
            ("tau".to_string(), args.tau.clone()),
            ("degree".to_string(), args.degree.to_string()),
        ],
        results,
        verdicts,
    })
}

fn cmd_examples() -> Result<Report, CliError> {
    let tau = corpus::v2788_tau();
    let a = corpus::v2788_a();
    let b = corpus::v2788_b();
    let mut verdicts = Vec::new();

    let block_a = BlockMat::from_mat4(&a);
    let block_b = BlockMat::from_mat4(&b);
    let hit_a = catalog::match_catalog(&block_a);
    let hit_b = catalog::match_catalog(&block_b);
    verdicts.push(Verdict {
        name: "v2788_a matches x2+1.III.2 over Q(sqrt(-2))".into(),
        pass: hit_a
            .as_ref()
            .map(|h| h.template == "x2+1.III.2" && h.field_d == Some(-2))
            .unwrap_or(false),
    });
    verdicts.push(Verdict {
        name: "v2788_b matches x2-x+1.III.3 over Q(sqrt(-2))".into(),
        pass: hit_b
            .as_ref()
            .map(|h| h.template == "x2-x+1.III.3" && h.field_d == Some(-2))
            .unwrap_or(false),
    });
    verdicts.push(Verdict {
        name: "(M iota)^2 equals the order-4 matrix".into(),
        pass: b.mul_mat(&Mat4::iota()).pow(2) == a,
    });
    let g = closure(&[b.clone(), Mat4::iota(), Mat4::identity().neg()], DEFAULT_CLOSURE_CAP)
        .map_err(|e| CliError::Guard(e.to_string()))?;
    let pres = verify_presentation(&g, PresentationKind::Sqrt2);
    verdicts.push(Verdict {
        name: "v2788 group satisfies the sqrt2 presentation".into(),
        pass: pres.all_pass(),
    });
    let mut orders = serde_json::Map::new();
    for (d, scenario, expect) in [
        (-3, Scenario::TypeIOnly, Some(36)),
        (-1, Scenario::TypeIOnly, Some(16)),
        (-3, Scenario::TypeIAndII, Some(72)),
        (-1, Scenario::TypeIAndII, Some(32)),
        (-7, Scenario::Generic, Some(8)),
        (-3, Scenario::Sqrt3TypeIII, None),
        (-2, Scenario::Sqrt2TypeIII, None),
        (-1, Scenario::Sqrt1TypeIIIOrder2, None),
        (-1, Scenario::Sqrt1TypeIIIPair, None),
    ] {
        let gens = maximal_group(d, scenario).map_err(|e| CliError::Guard(e.to_string()))?;
        let g = closure(&gens, DEFAULT_CLOSURE_CAP).map_err(|e| CliError::Guard(e.to_string()))?;
        let key = format!("{} (D={d})", scenario.name());
        orders.insert(key, json!(g.order()));
        if let Some(expect) = expect {
            verdicts.push(Verdict {
                name: format!("{} (D={d}) has order {expect}", scenario.name()),
                pass: g.order() == expect,
            });
        }
    }
    let results = json!({
        "v2788_a": report::mat4_value(&a),
        "v2788_b": report::mat4_value(&b),
        "tau": report::quad_value(&tau),
        "v2788_group_order": g.order(),
        "presentation": serde_json::to_value(&pres).expect("presentation serializes"),
        "canonical_group_orders": Value::Object(orders),
    });
    Ok(Report {
        command: "examples".into(),
        inputs: Vec::new(),
        results,
        verdicts,
    })
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Group(args) => cmd_group(args),
        Command::Symmetry(args) => cmd_symmetry(args),
        Command::Dependent(args) => cmd_dependent(args),
        Command::Funceq(args) => cmd_funceq(args),
        Command::Examples => cmd_examples(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.summary {
                print!("{}", report.render_summary());
            } else {
                println!("{}", report.render_json());
            }
            if report.verdicts.iter().all(|v| v.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let payload = json!({"error": e.message()});
            println!("{}", serde_json::to_string_pretty(&payload).expect("error serializes"));
            ExitCode::from(e.code())
        }
    }
}
