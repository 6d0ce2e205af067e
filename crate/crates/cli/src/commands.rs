//! Subcommand dispatch for the `mq` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mqalg::{
    buchberger, build_mq, check_elimination_bound, eliminate_prefix, gk_dimension, hilbert_series, ideal_member,
    leading_staircase, relation_table, validate_ordering, validate_solvability, CommutationSystem, GbLimits, GbStats,
    GroebnerBasis, MonomialOrder, MqError, MqSpec, Polynomial, PrefixSubset, QMode, Staircase,
};
use serde::Serialize;

use crate::ideal::IdealFile;
use crate::parse::{parse_poly, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// Version tag of every JSON document.
pub const SCHEMA: u32 = 1;

const DEFAULT_SAMPLES: usize = 1000;

#[derive(Debug, Parser)]
#[command(name = "mq", about = "Left Gröbner bases and dimension in the quantum matrix algebra M_q(n)", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Matrix size; the algebra has n² generators z[i,j].
    #[arg(long)]
    n: Option<usize>,
    /// `symbolic` or a nonzero rational such as 3/2.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Ideal generator (repeatable).
    #[arg(long = "ideal", value_name = "EXPR")]
    ideals: Vec<String>,
    /// JSON ideal file.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Largest total degree of any intermediate result.
    #[arg(long)]
    max_degree: Option<u32>,
    /// Largest number of S-pairs processed by completion.
    #[arg(long)]
    max_pairs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Canonical normal form of an expression.
    Nf {
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Product of two expressions, left times right.
    Mul {
        left: String,
        right: String,
        #[command(flatten)]
        common: Common,
    },
    /// Reduced left Gröbner basis of the ideal.
    Gb {
        #[command(flatten)]
        common: Common,
    },
    /// Left ideal membership; exits with 1 when the answer is false.
    Member {
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// GK dimension of the quotient by the ideal.
    Gkdim {
        #[command(flatten)]
        common: Common,
    },
    /// Hilbert function of the quotient (of the algebra itself without an ideal).
    Hilbert {
        #[arg(long, default_value_t = 10)]
        maxdeg: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Elements of the basis supported in the first `keep` generators, or
    /// the check of every prefix above the GK dimension when `keep` is absent.
    Eliminate {
        #[arg(long)]
        keep: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Certify the commutation table and the monomial ordering.
    Validate {
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Print the commutation table.
    BuildMq {
        #[command(flatten)]
        common: Common,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Limit(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        if e.is_resource_limit() {
            Failure::Limit(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<MqError> for Failure {
    fn from(e: MqError) -> Self {
        if e.is_resource_limit() {
            Failure::Limit(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

/// Everything a subcommand needs after flags and files are merged.
struct Context {
    spec: MqSpec,
    sys: CommutationSystem,
    gens: Vec<Polynomial>,
    limits: GbLimits,
    json: bool,
    warnings: Vec<String>,
}

impl Context {
    fn build(common: &Common, env_max_degree: Option<&str>) -> Result<Self, Failure> {
        let file = match &common.file {
            Some(path) => Some(IdealFile::load(path).map_err(|e| Failure::Usage(e.to_string()))?),
            None => None,
        };
        let n = match (common.n, file.as_ref().map(|f| f.n)) {
            (Some(a), Some(b)) if a != b => {
                return Err(Failure::Usage(format!("--n {a} conflicts with n = {b} in the ideal file")));
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Failure::Usage("missing --n (or --file)".into())),
        };
        let q_text = match (&common.q, file.as_ref().and_then(|f| f.q.as_ref())) {
            (Some(a), _) => a.clone(),
            (None, Some(b)) => b.as_text(),
            (None, None) => "symbolic".into(),
        };
        if let Some(tag) = file.as_ref().and_then(|f| f.ordering.as_deref()) {
            if MonomialOrder::from_tag(tag).is_none() {
                return Err(Failure::Usage(format!("unknown ordering `{tag}`")));
            }
        }
        let qmode: QMode = q_text.parse().map_err(|e: MqError| Failure::Usage(e.to_string()))?;
        let spec = MqSpec::new(n, qmode).map_err(|e| Failure::Usage(e.to_string()))?;

        let file_limits = file.as_ref().and_then(|f| f.limits.clone()).unwrap_or_default();
        let env_degree = match env_max_degree {
            Some(v) => Some(
                v.trim()
                    .parse::<u32>()
                    .map_err(|_| Failure::Usage(format!("MQ_MAX_DEGREE must be a nonnegative integer, got `{v}`")))?,
            ),
            None => None,
        };
        let defaults = GbLimits::default();
        let limits = GbLimits {
            max_degree: common.max_degree.or(env_degree).or(file_limits.max_degree).unwrap_or(defaults.max_degree),
            max_pairs: common.max_pairs.or(file_limits.max_pairs).unwrap_or(defaults.max_pairs),
            track_cofactors: false,
        };
        let sys = build_mq(&spec)?.with_degree_guard(limits.max_degree);

        let texts = file.iter().flat_map(|f| f.generators.iter()).chain(&common.ideals);
        let mut gens = Vec::new();
        for text in texts {
            let p = parse_poly(text, &sys).map_err(|e| with_input(e, text))?;
            if p.is_zero() {
                return Err(Failure::Usage(format!("ideal generator `{text}` is zero")));
            }
            gens.push(p);
        }
        let warnings = spec.warnings();
        Ok(Context { spec, sys, gens, limits, json: common.json, warnings })
    }

    fn parse(&self, text: &str) -> Result<Polynomial, Failure> {
        parse_poly(text, &self.sys).map_err(|e| with_input(e, text))
    }

    fn require_ideal(&self) -> Result<(), Failure> {
        if self.gens.is_empty() {
            return Err(Failure::Usage("no ideal given (use --ideal or --file)".into()));
        }
        Ok(())
    }

    fn basis(&self) -> Result<GroebnerBasis, Failure> {
        self.require_ideal()?;
        buchberger(&self.gens, &self.sys, &self.limits).map_err(|f| Failure::from(f.error))
    }

    fn envelope<T: Serialize>(&self, command: &'static str, body: T) -> String {
        let doc = Envelope { schema: SCHEMA, command, n: self.spec.n, q: self.spec.qmode.to_string(), body };
        let mut s = serde_json::to_string_pretty(&doc).expect("plain data");
        s.push('\n');
        s
    }
}

fn with_input(e: ParseError, text: &str) -> Failure {
    match Failure::from(e) {
        Failure::Usage(m) => Failure::Usage(format!("in `{text}`: {m}")),
        limit => limit,
    }
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema: u32,
    command: &'static str,
    n: usize,
    q: String,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct PolyBody {
    result: String,
}

#[derive(Serialize)]
struct GbBody<'a> {
    generators: Vec<String>,
    basis: Vec<String>,
    leading_monomials: Vec<String>,
    stats: &'a GbStats,
}

#[derive(Serialize)]
struct MemberBody {
    expr: String,
    member: bool,
}

#[derive(Serialize)]
struct GkBody {
    gk_dimension: usize,
    staircase: Vec<String>,
}

#[derive(Serialize)]
struct HilbertBody {
    max_degree: u32,
    values: Vec<String>,
}

#[derive(Serialize)]
struct EliminateBody {
    keep: usize,
    retained_generators: Vec<String>,
    elements: Vec<String>,
}

#[derive(Serialize)]
struct ValidateBody<'a> {
    verdict: &'static str,
    table: &'a mqalg::ValidationReport,
    ordering: &'a mqalg::ValidationReport,
}

fn lines<I: IntoIterator<Item = String>>(items: I) -> String {
    items.into_iter().map(|s| s + "\n").collect()
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Runs one invocation; `argv[0]` is the program name. Reads
/// `MQ_MAX_DEGREE` from the environment.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> CommandOutput {
    let env = std::env::var("MQ_MAX_DEGREE").ok();
    run_command_with_env(argv, env.as_deref())
}

/// [`run_command`] with an explicit value for `MQ_MAX_DEGREE`.
pub fn run_command_with_env<S: AsRef<str>>(argv: &[S], env_max_degree: Option<&str>) -> CommandOutput {
    let cli = match Cli::try_parse_from(argv.iter().map(AsRef::as_ref)) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                CommandOutput { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut stderr = String::new();
    match dispatch(cli.command, env_max_degree, &mut stderr) {
        Ok((code, stdout)) => CommandOutput { code, stdout, stderr },
        Err(Failure::Usage(m)) => {
            stderr.push_str(&format!("error: {m}\n"));
            CommandOutput { code: EXIT_USAGE, stdout: String::new(), stderr }
        }
        Err(Failure::Limit(m)) => {
            stderr.push_str(&format!("error: resource limit: {m}\n"));
            CommandOutput { code: EXIT_LIMIT, stdout: String::new(), stderr }
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Nf { common, .. }
        | Command::Mul { common, .. }
        | Command::Gb { common }
        | Command::Member { common, .. }
        | Command::Gkdim { common }
        | Command::Hilbert { common, .. }
        | Command::Eliminate { common, .. }
        | Command::Validate { common, .. }
        | Command::BuildMq { common } => common,
    }
}

fn dispatch(cmd: Command, env_max_degree: Option<&str>, stderr: &mut String) -> Result<(i32, String), Failure> {
    let ctx = Context::build(common(&cmd), env_max_degree)?;
    for w in &ctx.warnings {
        stderr.push_str(&format!("warning: {w}\n"));
    }
    let out = match &cmd {
        Command::Nf { expr, .. } => {
            let p = ctx.parse(expr)?;
            poly_output(&ctx, "nf", &p)
        }
        Command::Mul { left, right, .. } => {
            let p = ctx.sys.poly_mul(&ctx.parse(left)?, &ctx.parse(right)?)?;
            poly_output(&ctx, "mul", &p)
        }
        Command::Gb { .. } => {
            let g = ctx.basis()?;
            if ctx.json {
                ctx.envelope(
                    "gb",
                    GbBody {
                        generators: ctx.gens.iter().map(ToString::to_string).collect(),
                        basis: g.elements.iter().map(ToString::to_string).collect(),
                        leading_monomials: g.leading_monomials().map(ToString::to_string).collect(),
                        stats: &g.stats,
                    },
                )
            } else {
                format!("reduced basis, {} elements:\n{}", g.len(), lines(g.elements.iter().map(ToString::to_string)))
            }
        }
        Command::Member { expr, .. } => {
            let f = ctx.parse(expr)?;
            let g = ctx.basis()?;
            let member = ideal_member(&f, &g, &ctx.sys)?;
            let out = if ctx.json {
                ctx.envelope("member", MemberBody { expr: f.to_string(), member })
            } else {
                format!("{member}\n")
            };
            return Ok((if member { EXIT_OK } else { EXIT_FALSE }, out));
        }
        Command::Gkdim { .. } => {
            let st = leading_staircase(&ctx.basis()?)?;
            let d = gk_dimension(&st);
            if ctx.json {
                ctx.envelope("gkdim", GkBody { gk_dimension: d, staircase: st.to_strings() })
            } else {
                format!("gk dimension: {d}\nstaircase: {}\n", st.to_strings().join(", "))
            }
        }
        Command::Hilbert { maxdeg, .. } => {
            let st = if ctx.gens.is_empty() {
                Staircase::empty(ctx.sys.nvars())
            } else {
                leading_staircase(&ctx.basis()?)?
            };
            let values: Vec<String> = hilbert_series(&st, *maxdeg).iter().map(ToString::to_string).collect();
            if ctx.json {
                ctx.envelope("hilbert", HilbertBody { max_degree: *maxdeg, values })
            } else {
                format!("{}\n", values.join(", "))
            }
        }
        Command::Eliminate { keep: Some(s), .. } => {
            let g = ctx.basis()?;
            let u = PrefixSubset::new(*s, g.nvars)?;
            let kept = eliminate_prefix(&g, u)?;
            let retained: Vec<String> = (0..*s).map(|i| ctx.sys.name(i)).collect();
            let elements: Vec<String> = kept.iter().map(ToString::to_string).collect();
            if ctx.json {
                ctx.envelope("eliminate", EliminateBody { keep: *s, retained_generators: retained, elements })
            } else {
                format!(
                    "retained generators: {}\nelements ({}):\n{}",
                    retained.join(", "),
                    elements.len(),
                    lines(elements)
                )
            }
        }
        Command::Eliminate { keep: None, .. } => {
            let report = check_elimination_bound(&ctx.basis()?)?;
            if ctx.json {
                ctx.envelope("eliminate", &report)
            } else {
                let mut s = format!("gk dimension: {}\n", report.gk_dimension);
                for c in &report.checks {
                    let found = if c.nonempty { format!("nonempty ({})", c.witnesses.join("; ")) } else { "empty".into() };
                    s.push_str(&format!("prefix {}: {found}\n", c.s));
                }
                s.push_str(&format!("verdict: {}\n", verdict(report.pass)));
                s
            }
        }
        Command::Validate { samples, seed, .. } => {
            let table = validate_solvability(&ctx.sys, &MonomialOrder::PaperLex)?;
            let ordering = validate_ordering(&ctx.sys, &MonomialOrder::PaperLex, *samples, *seed)?;
            let pass = table.verdict && ordering.verdict;
            let out = if ctx.json {
                ctx.envelope("validate", ValidateBody { verdict: verdict(pass), table: &table, ordering: &ordering })
            } else {
                let mut s = format!(
                    "table: {} pairs checked, {} failed\n",
                    table.pairs.len(),
                    table.failed_pairs().count()
                );
                s.push_str(&format!(
                    "ordering: {} sampled checks, {} counterexamples\n",
                    ordering.samples,
                    ordering.witnesses.len()
                ));
                for w in table.witnesses.iter().chain(&ordering.witnesses) {
                    s.push_str(&format!("witness ({}): {}\n", w.condition, w.detail));
                }
                s.push_str(&format!("verdict: {}\n", verdict(pass)));
                s
            };
            return Ok((if pass { EXIT_OK } else { EXIT_FALSE }, out));
        }
        Command::BuildMq { .. } => {
            let table = relation_table(&ctx.sys);
            if ctx.json {
                ctx.envelope("build-mq", RelationsBody { relations: table })
            } else {
                let nvars = ctx.sys.nvars();
                let mut s = String::new();
                for small in 0..nvars {
                    for big in small + 1..nvars {
                        let rhs = ctx
                            .sys
                            .poly_mul(&Polynomial::generator(nvars, small), &Polynomial::generator(nvars, big))?;
                        s.push_str(&format!("{}*{} = {rhs}\n", ctx.sys.name(small), ctx.sys.name(big)));
                    }
                }
                s
            }
        }
    };
    Ok((EXIT_OK, out))
}

#[derive(Serialize)]
struct RelationsBody {
    relations: Vec<mqalg::mq::RelationEntry>,
}

fn poly_output(ctx: &Context, command: &'static str, p: &Polynomial) -> String {
    if ctx.json {
        ctx.envelope(command, PolyBody { result: p.to_string() })
    } else {
        format!("{p}\n")
    }
}
