use std::fs;
use std::path::Path;

use renyi_core::classical::{
    entropy_type_beta, entropy_type_beta_chain, order_from_type, renyi_entropy as classical_renyi, t1_bound, t1_check,
    type_beta_product_check, type_beta_sandwich_check, type_beta_upper_bound, BetaOrder, ProbabilityVector,
};
use renyi_core::divergence::{
    conditional_entropy_with, mutual_information_with, renyi_relative_entropy, t4_lower_bound, t5_closed_form,
    t6_bound, triangle_bound_check, MinimizedQuantity, Mode, OptimizerConfig,
};
use renyi_core::io::{DistributionFile, MatrixFile};
use renyi_core::linalg::{lemma2_check, lemma3_check, lemma4_check, HermitianMatrix};
use renyi_core::quantum::{renyi_entropy as quantum_renyi, t3_bound, DensityMatrix};
use renyi_core::verify::{random_density, random_pd, random_simplex, run_suite, Seed};
use renyi_core::{BoundReport, Units};
use serde_json::{json, Value};

use crate::output::{report_lines, sig12, tolerances, CliError, CliResult, Output};
use crate::{Bipartite, BoundsArgs, Cli, Command, EntropyCommand, GenArgs, GenKind, Theorem};

const DEFAULT_MAX_DIM: usize = 64;

fn max_dim() -> CliResult<usize> {
    match std::env::var("RENYI_MAX_DIM") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::new("BadEnvironment", format!("RENYI_MAX_DIM=`{v}` is not an integer"), None)),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn check_dim(dim: usize, field: &str) -> CliResult<()> {
    let cap = max_dim()?;
    if dim > cap {
        return Err(CliError::new(
            "DimensionTooLarge",
            format!("dimension {dim} exceeds RENYI_MAX_DIM = {cap}"),
            Some(field),
        ));
    }
    Ok(())
}

fn read_text(path: &Path, field: &str) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::new("IoError", format!("cannot read {}: {e}", path.display()), Some(field)))
}

/// A parsed input file kept alongside its echo for JSON reports.
struct Loaded<T> {
    value: T,
    echo: Value,
}

fn echo(path: &Path, content: impl serde::Serialize) -> Value {
    json!({ "path": path.display().to_string(), "content": content })
}

fn load_matrix_file(path: &Path, field: &str) -> CliResult<MatrixFile> {
    let file = MatrixFile::from_json(&read_text(path, field)?).map_err(|e| CliError::core(e, Some(field)))?;
    check_dim(file.dim, field)?;
    Ok(file)
}

fn load_hermitian(path: &Path, field: &str) -> CliResult<Loaded<HermitianMatrix>> {
    let file = load_matrix_file(path, field)?;
    let value = file.to_hermitian().map_err(|e| CliError::core(e, Some(field)))?;
    Ok(Loaded { value, echo: echo(path, &file) })
}

fn load_density(path: &Path, field: &str, dims: Option<(usize, usize)>) -> CliResult<Loaded<DensityMatrix>> {
    let file = load_matrix_file(path, field)?;
    let mut value = file.to_density().map_err(|e| CliError::core(e, Some(field)))?;
    if let Some((a, b)) = dims {
        value = value.with_dims(a, b).map_err(|e| CliError::core(e, Some("dims")))?;
    }
    Ok(Loaded { value, echo: echo(path, &file) })
}

fn load_distribution(path: &Path, field: &str) -> CliResult<Loaded<ProbabilityVector>> {
    let file = DistributionFile::from_json(&read_text(path, field)?).map_err(|e| CliError::core(e, Some(field)))?;
    check_dim(file.p.len(), field)?;
    let value = file.to_probability().map_err(|e| CliError::core(e, Some(field)))?;
    Ok(Loaded { value, echo: echo(path, &file) })
}

fn beta_order(beta: f64) -> CliResult<BetaOrder> {
    BetaOrder::new(beta).map_err(|e| CliError::core(e, Some("beta")))
}

fn required<'a, T>(value: &'a Option<T>, field: &str, theorem: &str) -> CliResult<&'a T> {
    value.as_ref().ok_or_else(|| CliError::usage(format!("`bounds {theorem}` needs --{field}"), field))
}

fn core<T>(r: renyi_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::core(e, None))
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Entropy(EntropyCommand::Classical { dist, beta, units }) => {
            let p = load_distribution(dist, "dist")?;
            let b = beta_order(*beta)?;
            let units = Units::from(*units);
            let bits = classical_renyi(&p.value, b);
            let value = match units {
                Units::Bits => bits,
                Units::Nats => bits * std::f64::consts::LN_2,
            };
            Ok(Output {
                json: json!({
                    "command": "entropy classical",
                    "input": { "dist": p.echo },
                    "beta": beta,
                    "units": units,
                    "value": value,
                    "tolerances": tolerances(),
                }),
                lines: vec![format!("H_{} = {} {}", beta, sig12(value), units.as_str())],
            })
        }
        Command::Entropy(EntropyCommand::Quantum { state, alpha, units }) => {
            let rho = load_density(state, "state", None)?;
            let h = core(quantum_renyi(&rho.value, *alpha, (*units).into()))?;
            Ok(Output {
                json: json!({
                    "command": "entropy quantum",
                    "input": { "state": rho.echo },
                    "alpha": alpha,
                    "units": h.units,
                    "value": h.value,
                    "eigenvalues": rho.value.eigenvalues(),
                    "tolerances": tolerances(),
                }),
                lines: vec![format!("H_{} = {} {}", alpha, sig12(h.value), h.units.as_str())],
            })
        }
        Command::TypeBeta { dist, beta } => {
            let p = load_distribution(dist, "dist")?;
            let b = beta_order(*beta)?;
            let value = core(entropy_type_beta(&p.value, b))?;
            let chain = core(entropy_type_beta_chain(&p.value, b))?;
            let order = core(order_from_type(value, b))?;
            Ok(Output {
                json: json!({
                    "command": "type-beta",
                    "input": { "dist": p.echo },
                    "beta": beta,
                    "units": "bits",
                    "value": value,
                    "chain_form": chain,
                    "order_beta_entropy": order,
                    "tolerances": tolerances(),
                }),
                lines: vec![
                    format!("H^{} = {}", beta, sig12(value)),
                    format!("chain form = {}", sig12(chain)),
                    format!("order-{} entropy = {} bits", beta, sig12(order)),
                ],
            })
        }
        Command::Divergence { state, sigma, alpha, units } => {
            let rho = load_density(state, "state", None)?;
            let s = load_hermitian(sigma, "sigma")?;
            let d = core(renyi_relative_entropy(&rho.value, &s.value, *alpha))?;
            let units = Units::from(*units);
            let value = units.from_nats(d.value);
            Ok(Output {
                json: json!({
                    "command": "divergence",
                    "input": { "state": rho.echo, "sigma": s.echo },
                    "alpha": alpha,
                    "units": units,
                    "value": value,
                    "equality_case": d.equality_case,
                    "tolerances": tolerances(),
                }),
                lines: vec![
                    format!("D_{} = {} {}", alpha, sig12(value), units.as_str()),
                    format!("equality case: {}", d.equality_case),
                ],
            })
        }
        Command::Conditional(args) => minimized(args, Mode::Conditional),
        Command::MutualInfo(args) => minimized(args, Mode::Mutual),
        Command::Bounds(args) => bounds(args),
        Command::Verify { suite, trials, seed } => {
            let report = core(run_suite(suite, *trials, Seed(*seed)))?;
            eprintln!("elapsed {:.3} s", report.elapsed.as_secs_f64());
            let mut lines = vec![
                format!("suite {} trials {} seed {}", report.suite.name(), report.trials, report.seed),
                format!("checks {} failures {}", report.checks, report.failures.len()),
                format!("max normalized violation {} (tolerance {:e})", sig12(report.max_violation), report.tolerance),
                format!("equality injected {} flagged {}", report.equality_injected, report.equality_flagged),
            ];
            for f in report.failures.iter().take(5) {
                let what = match (&f.report, &f.error) {
                    (Some(r), _) => format!("{} violation {}", r.label, sig12(r.violation)),
                    (None, Some(e)) => e.clone(),
                    (None, None) => String::new(),
                };
                lines.push(format!("  trial {}: {}", f.trial, what));
            }
            lines.push(if report.passed() { "PASS".to_string() } else { "FAIL".to_string() });
            let mut value = serde_json::to_value(&report).expect("suite report serialises");
            value["command"] = json!("verify");
            value["passed"] = json!(report.passed());
            Ok(Output { json: value, lines })
        }
        Command::Gen(args) => gen(args),
    }
}

fn optimizer_json(q: &MinimizedQuantity) -> Value {
    let o = &q.outcome;
    json!({
        "optimum_divergence": o.optimum_value,
        "sigma_b": MatrixFile::from_density(&o.optimizer_sigma),
        "iterations": o.iterations,
        "evaluations": o.evaluations,
        "restarts": o.restarts_used,
        "converged": o.converged,
    })
}

fn minimized(args: &Bipartite, mode: Mode) -> CliResult<Output> {
    let rho = load_density(&args.state, "state", args.dims)?;
    let mut config = OptimizerConfig::default();
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let (name, q) = match mode {
        Mode::Conditional => ("conditional", core(conditional_entropy_with(&rho.value, args.alpha, &config))?),
        Mode::Mutual => ("mutual-info", core(mutual_information_with(&rho.value, args.alpha, &config))?),
    };
    let closed = t5_closed_form(&rho.value, args.alpha, mode);
    let sigma = q.outcome.optimizer_sigma.matrix();
    let mut lines = vec![format!("{name} = {} nats", sig12(q.value)), "sigma_B =".to_string()];
    for i in 0..sigma.dim() {
        let row: Vec<String> = (0..sigma.dim())
            .map(|j| {
                let z = sigma.get(i, j);
                format!("({}, {})", sig12(z.re), sig12(z.im))
            })
            .collect();
        lines.push(format!("  {}", row.join(" ")));
    }
    if let Some(cf) = &closed {
        lines.push(format!("closed form = {} (c = {})", sig12(cf.value), sig12(cf.c)));
    }
    Ok(Output {
        json: json!({
            "command": name,
            "input": { "state": rho.echo, "dims": rho.value.dims() },
            "alpha": args.alpha,
            "units": "nats",
            "value": q.value,
            "optimizer": optimizer_json(&q),
            "optimizer_config": config,
            "closed_form": closed.map(|cf| json!({ "value": cf.value, "c": cf.c })),
            "tolerances": tolerances(),
        }),
        lines,
    })
}

fn bounds(args: &BoundsArgs) -> CliResult<Output> {
    let name = match args.theorem {
        Theorem::Lemma2 => "lemma2",
        Theorem::Lemma3 => "lemma3",
        Theorem::Lemma4 => "lemma4",
        Theorem::T1 => "t1",
        Theorem::T2_2 => "t2_2",
        Theorem::T3 => "t3",
        Theorem::T4 => "t4",
        Theorem::T5 => "t5",
        Theorem::T6 => "t6",
        Theorem::Triangle => "triangle",
    };
    let mut input = serde_json::Map::new();
    let mut extra = serde_json::Map::new();
    let units = Units::from(args.units);

    let reports: Vec<BoundReport> = match args.theorem {
        Theorem::Lemma2 | Theorem::Lemma3 => {
            let a = load_hermitian(required(&args.a, "a", name)?, "a")?;
            let b = load_hermitian(required(&args.b, "b", name)?, "b")?;
            input.insert("a".into(), a.echo);
            input.insert("b".into(), b.echo);
            let r = if args.theorem == Theorem::Lemma2 {
                lemma2_check(&a.value, &b.value)
            } else {
                lemma3_check(&a.value, &b.value)
            };
            vec![core(r)?]
        }
        Theorem::Lemma4 => {
            let a = load_hermitian(required(&args.a, "a", name)?, "a")?;
            input.insert("a".into(), a.echo);
            vec![core(lemma4_check(&a.value))?]
        }
        Theorem::T1 | Theorem::T2_2 => {
            let p = load_distribution(required(&args.dist, "dist", name)?, "dist")?;
            let b = beta_order(*required(&args.beta, "beta", name)?)?;
            input.insert("dist".into(), p.echo);
            extra.insert("beta".into(), json!(b.value()));
            extra.insert("units".into(), json!("bits"));
            if args.theorem == Theorem::T1 {
                extra.insert("bound".into(), json!(core(t1_bound(&p.value, b))?));
                vec![core(t1_check(&p.value, b))?]
            } else {
                extra.insert("product_form".into(), json!(core(type_beta_upper_bound(&p.value, b))?));
                vec![core(type_beta_sandwich_check(&p.value, b))?, core(type_beta_product_check(&p.value, b))?]
            }
        }
        Theorem::T3 => {
            let rho = load_density(required(&args.state, "state", name)?, "state", None)?;
            let alpha = *required(&args.alpha, "alpha", name)?;
            input.insert("state".into(), rho.echo);
            let sb = core(t3_bound(&rho.value, alpha, units))?;
            extra.insert("alpha".into(), json!(alpha));
            extra.insert("units".into(), json!(units));
            extra.insert("bound".into(), json!(sb.bound));
            extra.insert("entropy".into(), json!(sb.entropy.value));
            extra.insert("d".into(), json!(sb.d));
            extra.insert("d0".into(), json!(sb.d0));
            sb.reports()
        }
        Theorem::T4 | Theorem::Triangle => {
            let rho = load_density(required(&args.state, "state", name)?, "state", None)?;
            let sigma = load_hermitian(required(&args.sigma, "sigma", name)?, "sigma")?;
            let alpha = *required(&args.alpha, "alpha", name)?;
            input.insert("state".into(), rho.echo);
            input.insert("sigma".into(), sigma.echo);
            extra.insert("alpha".into(), json!(alpha));
            extra.insert("units".into(), json!("nats"));
            let r = if args.theorem == Theorem::T4 {
                t4_lower_bound(&rho.value, &sigma.value, alpha)
            } else {
                triangle_bound_check(&rho.value, &sigma.value, alpha)
            };
            vec![core(r)?]
        }
        Theorem::T5 => {
            let rho = load_density(required(&args.state, "state", name)?, "state", args.dims)?;
            let alpha = *required(&args.alpha, "alpha", name)?;
            input.insert("state".into(), rho.echo);
            extra.insert("alpha".into(), json!(alpha));
            extra.insert("units".into(), json!("nats"));
            let mut lines = Vec::new();
            for (mode, key) in [(Mode::Conditional, "conditional"), (Mode::Mutual, "mutual")] {
                let cf = t5_closed_form(&rho.value, alpha, mode);
                lines.push(match &cf {
                    Some(cf) => format!("{key}: closed form {} (c = {})", sig12(cf.value), sig12(cf.c)),
                    None => format!("{key}: state is off the proportionality manifold"),
                });
                extra.insert(
                    key.into(),
                    json!(cf.map(|cf| json!({
                        "value": cf.value,
                        "c": cf.c,
                        "sigma_b": MatrixFile::from_density(&cf.sigma_b),
                    }))),
                );
            }
            return Ok(Output {
                json: bounds_json(name, input, extra, &[]),
                lines,
            });
        }
        Theorem::T6 => {
            let rho = load_density(required(&args.state, "state", name)?, "state", args.dims)?;
            let alpha = *required(&args.alpha, "alpha", name)?;
            input.insert("state".into(), rho.echo);
            let bound = core(t6_bound(&rho.value, alpha))?;
            let mi = core(mutual_information_with(&rho.value, alpha, &OptimizerConfig::default()))?;
            extra.insert("alpha".into(), json!(alpha));
            extra.insert("units".into(), json!("nats"));
            extra.insert("bound".into(), json!(bound));
            extra.insert("optimizer".into(), optimizer_json(&mi));
            vec![BoundReport::ge(
                "mutual information >= determinant bound",
                mi.value,
                bound,
                renyi_core::tol::OPT_TOL,
            )]
        }
    };

    let mut lines = report_lines(&reports);
    let ok = reports.iter().all(|r| r.pass);
    lines.push(if ok { "PASS".to_string() } else { "FAIL".to_string() });
    Ok(Output { json: bounds_json(name, input, extra, &reports), lines })
}

fn bounds_json(
    name: &str,
    input: serde_json::Map<String, Value>,
    extra: serde_json::Map<String, Value>,
    reports: &[BoundReport],
) -> Value {
    let mut v = json!({
        "command": "bounds",
        "theorem": name,
        "input": input,
        "reports": reports,
        "pass": reports.iter().all(|r| r.pass),
        "tolerances": tolerances(),
    });
    for (k, x) in extra {
        v[k] = x;
    }
    v
}

fn gen(args: &GenArgs) -> CliResult<Output> {
    check_dim(args.dim, "dim")?;
    let seed = Seed(args.seed);
    let (text, kind) = match args.kind {
        GenKind::Density => {
            if args.dim == 0 {
                return Err(CliError::new("DomainError", "dim must be positive", Some("dim")));
            }
            let mut rho = core(random_density(args.dim, seed, args.rank))?;
            if let Some((a, b)) = args.dims {
                rho = rho.with_dims(a, b).map_err(|e| CliError::core(e, Some("dims")))?;
            }
            (MatrixFile::from_density(&rho).to_json(), "density")
        }
        GenKind::Pd => {
            if args.dim == 0 {
                return Err(CliError::new("DomainError", "dim must be positive", Some("dim")));
            }
            (MatrixFile::from_hermitian(&random_pd(args.dim, seed, args.cap), None).to_json(), "pd")
        }
        GenKind::Simplex => (DistributionFile::from_probability(&core(random_simplex(args.dim, seed, args.zeros))?).to_json(), "simplex"),
    };
    fs::write(&args.out, &text)
        .map_err(|e| CliError::new("IoError", format!("cannot write {}: {e}", args.out.display()), Some("out")))?;
    Ok(Output {
        json: json!({
            "command": "gen",
            "kind": kind,
            "dim": args.dim,
            "seed": args.seed,
            "rank": args.rank,
            "cap": args.cap,
            "zeros": args.zeros,
            "out": args.out.display().to_string(),
        }),
        lines: vec![format!("wrote {} ({kind}, dim {}, seed {})", args.out.display(), args.dim, args.seed)],
    })
}
