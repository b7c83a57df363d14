//! Command-line front end for the `freeaut` library.

pub mod parse;

use std::ffi::OsString;
use std::io::Read;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use freeaut::autgroup::to_simplified;
use freeaut::budget::Budget;
use freeaut::commalg::CommPoly;
use freeaut::decide::{
    comm_equiv_decide, comm_semiinv_decide, comm_semiinv_heuristic, equiv_decide, semiinv_decide, Certificate,
    Verdict,
};
use freeaut::freealg::{quotient_degrees, quotient_project, to_comm_basis, v_membership};
use freeaut::groebner::{buchberger_with, rational_point_with, solvable_with, MonomialOrder};
use freeaut::scalar::fmt_scalar;
use freeaut::Error;
use serde_json::{json, Value};

use parse::{names_in, parse_aut, parse_comm, parse_comm_in, parse_free, parse_system};

#[derive(Parser, Debug)]
#[command(name = "freeaut", version, about = "Automorphic equivalence and semiinvariants in K<x,y> and K[x,y]")]
struct Cli {
    #[command(flatten)]
    limits: Limits,
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Limits {
    /// Maximum number of degree sequences examined.
    #[arg(long, global = true, default_value_t = 10_000)]
    max_seqs: usize,
    /// Maximum number of S-pair reductions.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    max_pairs: usize,
    /// Wall-clock cap in seconds; 0 disables it.
    #[arg(long, global = true, default_value_t = 120)]
    timeout_secs: u64,
    /// Seed for randomized choices; every procedure is currently deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

impl Limits {
    fn budget(&self) -> Budget {
        let t = (self.timeout_secs > 0).then(|| Duration::from_secs(self.timeout_secs));
        Budget::new(self.max_seqs, self.max_pairs, t)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Lex,
    Degrevlex,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Commutator-basis form of an element of K<x,y>.
    NormalForm {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Canonical representative of the class modulo V.
    Project {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Degrees, and quotient degrees in the free setting.
    Degrees {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Read the element in K[x,y].
        #[arg(long)]
        comm: bool,
    },
    /// Image of an element under an automorphism.
    Apply {
        #[arg(long)]
        aut: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        comm: bool,
    },
    /// Simplified form rho_n tau ... tau rho_0 of an automorphism.
    SimplifyAut {
        #[arg(long)]
        aut: String,
    },
    /// Constant theta with phi[x,y] = theta [x,y].
    Theta {
        #[arg(long)]
        aut: String,
    },
    /// Whether rhs = phi(lhs) for an automorphism of K<x,y>.
    Equiv {
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// Whether an element of K<x,y> is a semiinvariant of a nontrivial automorphism.
    Semiinv {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Whether rhs = phi(lhs) for an automorphism of K[x,y].
    CommEquiv {
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// Semiinvariants in K[x,y].
    CommSemiinv {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Report the gcd(u_x, u_y) evidence instead of deciding.
        #[arg(long)]
        heuristic: bool,
    },
    /// Reduced Groebner basis of the given polynomials.
    Groebner {
        #[arg(long, value_enum, default_value_t = Order::Degrevlex)]
        order: Order,
        /// Space-separated variable order; defaults to order of appearance.
        #[arg(long)]
        vars: Option<String>,
        #[arg(required = true, allow_hyphen_values = true)]
        polys: Vec<String>,
    },
    /// Solvability over the closure and a rational point of a serialized system.
    SolveSystem {
        /// File with `vars:` / `eq:` / `neq:` lines, or `-` for stdin.
        file: String,
    },
}

/// Everything a run produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn plain(text: String) -> Self {
        let json = json!({ "result": text });
        Report { text: format!("{text}\n"), json, code: 0 }
    }
}

fn certificate(c: &Certificate) -> Report {
    let json = json!({
        "result": c.verdict.tag(),
        "witness": c.witness.as_ref().map(|w| w.to_string()),
        "lambda": c.lambda,
        "ideal": c.ideal.as_ref().map(|s| s.to_string()),
        "trace": c.trace,
    });
    let code = if c.verdict == Verdict::Unknown { 2 } else { 0 };
    Report { text: c.to_string(), json, code }
}

fn execute(cmd: &Command, limits: &Limits) -> Result<Report, CliError> {
    let budget = limits.budget();
    Ok(match cmd {
        Command::NormalForm { expr } => Report::plain(to_comm_basis(&parse_free(expr)?).to_string()),
        Command::Project { expr } => Report::plain(quotient_project(&parse_free(expr)?).to_string()),
        Command::Degrees { expr, comm: false } => {
            let u = parse_free(expr)?;
            let mut fields = vec![
                ("deg", json!(u.degree()?)),
                ("deg_x", json!(u.degree_x()?)),
                ("deg_y", json!(u.degree_y()?)),
            ];
            match v_membership(&u) {
                Some(_) => fields.push(("in_V", json!(true))),
                None => {
                    let q = quotient_degrees(&u)?;
                    fields.extend([
                        ("in_V", json!(false)),
                        ("qdeg", json!(q.qdeg)),
                        ("qdeg_x", json!(q.qdeg_x)),
                        ("qdeg_y", json!(q.qdeg_y)),
                        ("biased", json!(q.biased)),
                    ]);
                }
            }
            fields_report(fields)
        }
        Command::Degrees { expr, comm: true } => {
            let d = parse_comm(expr)?.degree_calculus()?;
            fields_report(vec![
                ("deg", json!(d.total_degree)),
                ("deg_x", json!(d.deg_x)),
                ("deg_y", json!(d.deg_y)),
                ("leading_form", json!(d.leading_form.to_string())),
                ("biased", json!(d.biased)),
            ])
        }
        Command::Apply { aut, expr, comm } => {
            let phi = parse_aut(aut)?;
            if *comm {
                Report::plain(phi.apply(&parse_comm(expr)?)?.to_string())
            } else {
                Report::plain(phi.apply(&parse_free(expr)?)?.to_string())
            }
        }
        Command::SimplifyAut { aut } => Report::plain(to_simplified(&parse_aut(aut)?).to_string()),
        Command::Theta { aut } => Report::plain(fmt_scalar(&parse_aut(aut)?.theta())),
        Command::Equiv { lhs, rhs } => certificate(&equiv_decide(&parse_free(lhs)?, &parse_free(rhs)?, &budget)),
        Command::Semiinv { expr } => certificate(&semiinv_decide(&parse_free(expr)?, &budget)?),
        Command::CommEquiv { lhs, rhs } => {
            certificate(&comm_equiv_decide(&parse_comm(lhs)?, &parse_comm(rhs)?, &budget)?)
        }
        Command::CommSemiinv { expr, heuristic: false } => {
            certificate(&comm_semiinv_decide(&parse_comm(expr)?, &budget)?)
        }
        Command::CommSemiinv { expr, heuristic: true } => {
            let r = comm_semiinv_heuristic(&parse_comm(expr)?)?;
            let json = json!({
                "heuristic": if r.positive { "POSITIVE" } else { "NEGATIVE" },
                "gcd": r.gcd.to_string(),
                "single_variable": r.single_variable,
                "coordinate_shape": r.coordinate_shape,
            });
            Report { text: r.to_string(), json, code: 0 }
        }
        Command::Groebner { order, vars, polys } => {
            let vars = match vars {
                Some(v) => names_in([v.as_str()])?,
                None => names_in(polys.iter().map(String::as_str))?,
            };
            let gens = polys.iter().map(|p| parse_comm_in(p, &vars)).collect::<Result<Vec<CommPoly>, _>>()?;
            let order = match order {
                Order::Lex => MonomialOrder::Lex,
                Order::Degrevlex => MonomialOrder::DegRevLex,
            };
            let gb = buchberger_with(&gens, order, &budget)?;
            let json = json!({
                "vars": vars.as_slice(),
                "basis": gb.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            });
            Report { text: format!("{gb}\n"), json, code: 0 }
        }
        Command::SolveSystem { file } => {
            let text = read_input(file)?;
            let sys = parse_system(&text)?;
            if !solvable_with(&sys, &budget)? {
                let json = json!({ "result": "UNSOLVABLE", "point": null });
                Report { text: "RESULT: UNSOLVABLE\n".into(), json, code: 0 }
            } else {
                let point = rational_point_with(&sys, &budget)?;
                let (line, pj) = match &point {
                    Some(p) => {
                        let parts: Vec<String> =
                            sys.vars.iter().zip(p).map(|(v, c)| format!("{v} = {}", fmt_scalar(c))).collect();
                        let obj: serde_json::Map<String, Value> =
                            sys.vars.iter().zip(p).map(|(v, c)| (v.clone(), json!(fmt_scalar(c)))).collect();
                        (format!("POINT: {}", parts.join(", ")), Value::Object(obj))
                    }
                    None => ("POINT: none rational found".to_string(), Value::Null),
                };
                let json = json!({ "result": "SOLVABLE", "point": pj });
                Report { text: format!("RESULT: SOLVABLE\n{line}\n"), json, code: 0 }
            }
        }
    })
}

fn fields_report(fields: Vec<(&str, Value)>) -> Report {
    let mut text = String::new();
    let mut obj = serde_json::Map::new();
    for (k, v) in fields {
        let shown = match &v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        text.push_str(&format!("{k}: {shown}\n"));
        obj.insert(k.to_string(), v);
    }
    Report { text, json: Value::Object(obj), code: 0 }
}

fn read_input(path: &str) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.to_string(), source };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Exit codes: 0 on a decision or result, 2 on an undecided run, 1 on
/// usage, parse and input errors.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let mut rendered = e.render().to_string();
            if e.kind() == clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                rendered = format!("error: no command given\n\n{rendered}");
            }
            return if code == 0 {
                Outcome { stdout: rendered, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: rendered, code }
            };
        }
    };
    match execute(&cli.command, &cli.limits) {
        Ok(r) => {
            let stdout = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&r.json).expect("serializable"))
            } else {
                r.text
            };
            Outcome { stdout, stderr: String::new(), code: r.code }
        }
        Err(CliError::Core(Error::Budget(m))) => {
            Outcome { stdout: String::new(), stderr: format!("error: resource budget exceeded: {m}\n"), code: 2 }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 1 },
    }
}
