use std::fs;
use std::path::Path;

use mdsr_core::distance::deletion_distance_with;
use mdsr_core::format::{
    parse_assignment, parse_formula, parse_instance, parse_matching, parse_smti, parse_smti_matching,
    serialize_assignment, serialize_instance, serialize_matching, serialize_smti_matching,
};
use mdsr_core::reductions::{
    cutoff_instance, instable_instance, sat_backward_assignment, sat_forward_matching, sat_reduce, smti_reduce,
    tie_gadget_instance,
};
use mdsr_core::solvers::{
    choose_algorithm, fpt_dp_solve_with, greedy_big_d_solve_with, locality_bound, strict_order_solve, window_size,
    Algorithm,
};
use mdsr_core::stability::{brute_force_solve_with, find_blocking_with};
use mdsr_core::{
    default_names, validate_poset, AgentId, Error, Execution, Instance, Matching, Poset, PreferenceSource,
    SolveConfig,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{Algo, Cli, Command, GenKind, Global, ReduceKind};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Invalid(String),
    Guard(String),
}

impl Failure {
    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Invalid(m) | Failure::Guard(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge { .. } | Error::WindowTooLarge { .. } => Failure::Guard(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let cfg = config(&cli.global)?;
    let json = cli.global.json;
    match &cli.command {
        Command::Solve {
            input,
            algo,
            witness,
            window,
        } => {
            let cfg = SolveConfig {
                window_override: *window,
                ..cfg
            };
            solve(&read_instance(input)?, *algo, witness.as_deref(), &cfg, json)
        }
        Command::Check { instance, matching } => {
            let inst = read_instance(instance)?;
            let m = parse_matching(&inst, &read(matching)?)?;
            check(&inst, &m, &cfg, json)
        }
        Command::Stats {
            instance,
            lambda_budget,
        } => stats(&read_instance(instance)?, *lambda_budget, &cfg, json),
        Command::Gen { kind, output } => write_out(output.as_deref(), &serialize_instance(&generate(kind)?)),
        Command::Reduce { kind, output } => reduce(kind, output.as_deref()),
    }
}

fn config(g: &Global) -> Result<SolveConfig, Failure> {
    let mut cfg = SolveConfig::default();
    if let Some(w) = g.workers {
        if w == 0 {
            return Err(Failure::Usage("--workers must be at least 1".into()));
        }
        if w == 1 {
            cfg.exec = Execution::Sequential;
        } else {
            // Fails only if a pool already exists, which cannot happen here.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
        }
    }
    if let Some(v) = g.max_groups {
        cfg.limits.max_groups = v;
    }
    if let Some(v) = g.max_brute_agents {
        cfg.limits.max_brute_agents = v;
    }
    if let Some(v) = g.window_cap {
        cfg.limits.window_cap = v;
    }
    Ok(cfg)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(json: bool, value: Value, text: String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("values serialise"));
    } else {
        println!("{text}");
    }
}

fn group_names(inst: &Instance, m: &Matching) -> Vec<Vec<String>> {
    m.groups()
        .iter()
        .map(|g| g.iter().map(|a| inst.name(a).to_string()).collect())
        .collect()
}

fn source_kind(inst: &Instance) -> &'static str {
    match inst.source() {
        PreferenceSource::Explicit(_) => "explicit",
        PreferenceSource::MasterListSets(_) => "master_list_sets",
        PreferenceSource::MasterPoset { .. } => "master_poset",
    }
}

/// Status and witness of one solver run. `exact` is false when a negative
/// answer came from a shortened window.
struct Solved {
    algorithm: &'static str,
    matching: Option<Matching>,
    exact: bool,
}

fn run_solver(inst: &Instance, algo: Algo, cfg: &SolveConfig) -> Result<Solved, Error> {
    let algo = match algo {
        Algo::Auto => match inst.lpo() {
            Some(lpo) if inst.is_complete() => match choose_algorithm(lpo.kappa(), inst.d()) {
                Algorithm::Strict => Algo::Strict,
                Algorithm::Greedy => Algo::Greedy,
                Algorithm::Dp => Algo::Dp,
            },
            _ => Algo::Brute,
        },
        other => other,
    };
    let solved = |algorithm, matching, exact| Solved {
        algorithm,
        matching,
        exact,
    };
    Ok(match algo {
        Algo::Brute => solved("brute", brute_force_solve_with(inst, cfg)?, true),
        Algo::Strict => solved("strict", Some(strict_order_solve(inst)?), true),
        Algo::Greedy => solved("greedy", Some(greedy_big_d_solve_with(inst, cfg)?.matching), true),
        Algo::Dp | Algo::Auto => {
            let out = fpt_dp_solve_with(inst, cfg)?;
            solved("dp", out.matching, out.exact)
        }
    })
}

fn solve(inst: &Instance, algo: Algo, witness: Option<&Path>, cfg: &SolveConfig, json: bool) -> Outcome {
    let result = match run_solver(inst, algo, cfg) {
        Ok(r) => r,
        Err(e @ (Error::TooLarge { .. } | Error::WindowTooLarge { .. } | Error::WitnessRejected { .. })) => {
            emit(json, json!({"status": "UNKNOWN", "reason": e.to_string()}), format!("UNKNOWN: {e}"));
            return Err(Failure::Guard(e.to_string()));
        }
        Err(e) => return Err(e.into()),
    };
    let status = match (&result.matching, result.exact) {
        (Some(_), _) => "STABLE",
        (None, true) => "NO-STABLE",
        (None, false) => "UNSTABLE-EXISTS",
    };
    let mut text = format!("{status}\nalgorithm: {}", result.algorithm);
    if let Some(m) = &result.matching {
        let groups: Vec<String> = m.groups().iter().map(|g| inst.format_set(g)).collect();
        text.push_str(&format!("\nmatching: {}", groups.join(" ")));
        if let Some(path) = witness {
            write_out(Some(path), &serialize_matching(inst, m))?;
        }
    }
    if status == "UNSTABLE-EXISTS" {
        text.push_str("\nnote: the window is below the proven bound, so this is not a proof");
    }
    emit(
        json,
        json!({
            "status": status,
            "algorithm": result.algorithm,
            "exact": result.exact,
            "matching": result.matching.as_ref().map(|m| group_names(inst, m)),
        }),
        text,
    );
    Ok(())
}

fn check(inst: &Instance, m: &Matching, cfg: &SolveConfig, json: bool) -> Outcome {
    match find_blocking_with(inst, m, cfg)? {
        None => emit(json, json!({"stable": true}), "STABLE".into()),
        Some(report) => {
            let names: Vec<&str> = report.group.iter().map(|a| inst.name(a)).collect();
            emit(
                json,
                json!({"stable": false, "blocking": names}),
                format!("UNSTABLE: blocking {}", inst.format_set(&report.group)),
            );
        }
    }
    Ok(())
}

fn stats(inst: &Instance, budget: Option<usize>, cfg: &SolveConfig, json: bool) -> Outcome {
    let mut value = json!({
        "n": inst.n(),
        "d": inst.d(),
        "source": source_kind(inst),
        "complete": inst.is_complete(),
    });
    let mut lines = vec![
        format!("n={}", inst.n()),
        format!("d={}", inst.d()),
        format!("source={}", source_kind(inst)),
    ];
    if let (Some(lpo), Some(poset)) = (inst.lpo(), inst.poset()) {
        let (kappa, d) = (lpo.kappa(), inst.d());
        let algo = if inst.is_complete() {
            choose_algorithm(kappa, d).to_string()
        } else {
            "brute".to_string()
        };
        let width = poset.width();
        value["kappa"] = json!(kappa);
        value["width"] = json!(width);
        value["locality_bound"] = json!(locality_bound(kappa, d));
        value["window"] = json!(window_size(kappa, d));
        value["algo"] = json!(algo);
        lines.push(format!("κ={kappa}"));
        lines.push(format!("width={width}"));
        lines.push(format!("locality_bound={}", locality_bound(kappa, d)));
        lines.push(format!("window_k={}", window_size(kappa, d)));
        lines.push(format!("algo={algo}"));
    } else {
        value["algo"] = json!("brute");
        lines.push("algo=brute".into());
    }
    if let Some(b) = budget {
        match deletion_distance_with(inst, b, cfg) {
            Ok(del) => {
                let witness: Vec<&str> = del.witness.iter().map(|&a| inst.name(a)).collect();
                value["lambda"] = json!(del.lambda);
                value["lambda_witness"] = json!(witness);
                lines.push(format!("λ={} witness={{{}}}", del.lambda, witness.join(",")));
            }
            Err(Error::BudgetExceeded { budget }) => {
                value["lambda"] = Value::Null;
                value["lambda_exceeds"] = json!(budget);
                lines.push(format!("λ>{budget}"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit(json, value, lines.join("\n"));
    Ok(())
}

fn generate(kind: &GenKind) -> Result<Instance, Failure> {
    Ok(match kind {
        GenKind::Instable => instable_instance(),
        GenKind::Cutoff => cutoff_instance(),
        GenKind::Tie => tie_gadget_instance(1, 1)?.0,
        GenKind::Chain { n, d } => {
            let ranking: Vec<AgentId> = (0..*n as u32).map(AgentId).collect();
            Instance::from_poset(*d, default_names(*n), Poset::from_ranking(&ranking)?)?
        }
        GenKind::Random { n, d, density, seed } => {
            if !(0.0..=1.0).contains(density) {
                return Err(Failure::Usage("--density must lie in [0, 1]".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut perm: Vec<u32> = (0..*n as u32).collect();
            perm.shuffle(&mut rng);
            let mut pairs = Vec::new();
            for i in 0..*n {
                for j in i + 1..*n {
                    if rng.gen_bool(*density) {
                        pairs.push((AgentId(perm[i]), AgentId(perm[j])));
                    }
                }
            }
            Instance::from_poset(*d, default_names(*n), validate_poset(&pairs, *n)?)?
        }
    })
}

fn reduce(kind: &ReduceKind, output: Option<&Path>) -> Outcome {
    match kind {
        ReduceKind::Sat {
            formula,
            assignment,
            extract,
            ..
        } => {
            let f = parse_formula(&read(formula)?)?;
            let inst = sat_reduce(&f)?;
            if let Some(path) = assignment {
                let asg = parse_assignment(&read(path)?, f.num_vars())?;
                write_out(output, &serialize_matching(&inst, &sat_forward_matching(&f, &asg)?))
            } else if let Some(path) = extract {
                let m = parse_matching(&inst, &read(path)?)?;
                write_out(output, &serialize_assignment(&sat_backward_assignment(&f, &m)?))
            } else {
                write_out(output, &serialize_instance(&inst))
            }
        }
        ReduceKind::Smti {
            input,
            matching,
            extract,
            ..
        } => {
            let s = parse_smti(&read(input)?)?;
            let red = smti_reduce(&s)?;
            if let Some(path) = matching {
                let pm = parse_smti_matching(&s, &read(path)?)?;
                write_out(output, &serialize_matching(&red.instance, &red.forward(&s, &pm)?))
            } else if let Some(path) = extract {
                let m = parse_matching(&red.instance, &read(path)?)?;
                write_out(output, &serialize_smti_matching(&s, &red.backward(&s, &m)?))
            } else {
                write_out(output, &serialize_instance(&red.instance))
            }
        }
    }
}
