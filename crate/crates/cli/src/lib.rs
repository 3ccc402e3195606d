//! Command dispatch for the `idemlab` binary.
//!
//! Every verb writes one report to standard output, JSON by default or an
//! indented plain-text rendering with `--pretty`. Exit codes: 0 when the
//! check passes, 1 when a property fails or a counterexample is found, 2 on
//! usage, parse or load errors.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use idemlab_core::hindman::{self, Coloring, ForcingOptions, FsInstance};
use idemlab_core::schema::{
    builtin_schema, builtin_schemas, ConditionStatus, EllisSchema, SchemaError,
};
use idemlab_core::search::{self, Limits, Property, SearchOptions, SearchSpec, Target};
use idemlab_core::subalgebra::{is_minimal, left_image, left_stabilizer, minimal_subuniverses};
use idemlab_core::term::{parse_identity, parse_quasi_identity, parse_term, render_term};
use idemlab_core::ultrafilter::{self, Nesting};
use idemlab_core::{Algebra, OpSymbol, Satisfaction, Signature, Var};

#[derive(Parser, Debug)]
#[command(
    name = "idemlab",
    version,
    about = "Finite algebra workbench: identities, idempotents, model search"
)]
pub struct Cli {
    /// Render reports as indented text instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Worker threads for searches.
    #[arg(long, global = true, env = "IDEMLAB_WORKERS", default_value_t = 1)]
    pub workers: usize,

    /// Largest carrier size a search may reach.
    #[arg(long, global = true, env = "IDEMLAB_MAX_ORDER", default_value_t = 4)]
    pub max_order: usize,

    /// Include elapsed milliseconds in search reports.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse, render, inspect and evaluate terms.
    #[command(subcommand)]
    Term(TermCommand),
    /// Check an identity or quasi-identity on an algebra file.
    Check(CheckArgs),
    /// Idempotents of each operation, or the power cycle of one element.
    Idempotents(IdempotentArgs),
    /// Minimal subuniverses, left images and left stabilizers.
    Minimal(MinimalArgs),
    /// Check the two schema conditions and read off an idempotent.
    Schema(SchemaArgs),
    /// Exhaustive search over small algebras.
    Search(SearchArgs),
    /// Run a named campaign and write reports/<name>.json.
    Campaign(CampaignArgs),
    /// Compare an operation with its ultrafilter extension.
    Ultrafilter(UltrafilterArgs),
    /// Finite sums and products, partition witnesses, forcing numbers.
    #[command(subcommand)]
    Hindman(HindmanCommand),
}

#[derive(Subcommand, Debug)]
pub enum TermCommand {
    /// Parse a term and report its shape.
    Parse(TermArgs),
    /// Print the fully parenthesized form.
    Render(TermArgs),
    /// Does `--var` have a right-most occurrence in the term?
    Rightmost {
        #[command(flatten)]
        term: TermArgs,
        #[arg(long)]
        var: char,
    },
    /// Evaluate a term in an algebra.
    Eval {
        #[command(flatten)]
        term: TermArgs,
        #[arg(long)]
        algebra: PathBuf,
        /// Comma-separated `var=element` pairs.
        #[arg(long, default_value = "")]
        assign: String,
    },
}

#[derive(Args, Debug)]
pub struct TermArgs {
    #[arg(long)]
    pub term: String,
    /// Operation symbols allowed, e.g. `*+` or `*`.
    #[arg(long, default_value = "*+")]
    pub signature: String,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub algebra: PathBuf,
    #[arg(long, conflicts_with = "quasi", required_unless_present = "quasi")]
    pub identity: Option<String>,
    /// `P1 & P2 -> C`.
    #[arg(long)]
    pub quasi: Option<String>,
}

#[derive(Args, Debug)]
pub struct IdempotentArgs {
    #[arg(long)]
    pub algebra: PathBuf,
    /// Report the power cycle of this element instead.
    #[arg(long)]
    pub element: Option<usize>,
    #[arg(long, default_value = "*")]
    pub op: OpSymbol,
}

#[derive(Args, Debug)]
pub struct MinimalArgs {
    #[arg(long)]
    pub algebra: PathBuf,
    /// Also report `aX` for this element.
    #[arg(long)]
    pub left_image: Option<usize>,
    /// Also report `{x : ax = a}` for this element.
    #[arg(long)]
    pub stabilizer: Option<usize>,
    #[arg(long, default_value = "*")]
    pub op: OpSymbol,
}

#[derive(Args, Debug)]
pub struct SchemaArgs {
    #[arg(long, required_unless_present = "list")]
    pub algebra: Option<PathBuf>,
    /// A catalog name (see `--list`).
    #[arg(long, conflicts_with = "schema")]
    pub builtin: Option<String>,
    /// `r = ..; s = ..; t = ..|none; product = *`.
    #[arg(long)]
    pub schema: Option<String>,
    /// Print the catalog and exit.
    #[arg(long)]
    pub list: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TargetArg {
    Verify,
    FindCounterexample,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// `n` or `lo-hi`.
    #[arg(long, default_value = "1-3")]
    pub orders: String,
    #[arg(long, default_value = "*")]
    pub signature: String,
    /// Quasi-identity every model must satisfy; repeatable.
    #[arg(long = "constraint")]
    pub constraints: Vec<String>,
    /// Shorthand for the left-semiring constraints on `*` and `+`.
    #[arg(long)]
    pub left_semiring: bool,
    /// e.g. `has-idempotent`, `is-minimal -> trivial`, `satisfies[xy = yx]`.
    #[arg(long)]
    pub property: String,
    #[arg(long, value_enum, default_value = "verify")]
    pub target: TargetArg,
}

#[derive(Args, Debug)]
pub struct CampaignArgs {
    /// One of ld_no_idempotent, remark_asymmetries, minimal_semiring_gap, identity_entailments.
    pub name: String,
    /// Largest order scanned.
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long, default_value = "reports")]
    pub out_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum NestingArg {
    Canonical,
    Swapped,
    AsTypeset,
}

#[derive(Args, Debug)]
pub struct UltrafilterArgs {
    #[arg(long)]
    pub algebra: PathBuf,
    #[arg(long, default_value = "*")]
    pub op: OpSymbol,
    #[arg(long, value_enum, default_value = "canonical")]
    pub nesting: NestingArg,
}

#[derive(Subcommand, Debug)]
pub enum HindmanCommand {
    /// Sums of all nonempty subsets of `--elements`.
    Sums {
        #[arg(long)]
        elements: String,
    },
    /// Products of all nonempty subsets of `--elements`.
    Products {
        #[arg(long)]
        elements: String,
    },
    /// Least length-`k` instance whose finite sums (or products) lie in `--part`.
    Witness {
        #[arg(long)]
        part: String,
        #[arg(long, default_value_t = 2)]
        length: usize,
        /// Defaults to the largest element of the part.
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        products: bool,
    },
    /// Look for a witness in each class of a coloring given as `--class 1,4 --class 2,3`.
    Partition {
        #[arg(long = "class", required = true)]
        classes: Vec<String>,
        #[arg(long, default_value_t = 2)]
        length: usize,
    },
    /// Least n at which every coloring of 1..n has a monochromatic witness.
    Forcing {
        #[arg(long, default_value_t = 2)]
        colors: usize,
        #[arg(long, default_value_t = 2)]
        length: usize,
        #[arg(long, default_value_t = 24)]
        max_n: u64,
    },
}

/// A report and the exit code it implies.
struct Outcome {
    report: Value,
    code: i32,
}

fn pass(report: Value) -> Outcome {
    Outcome { report, code: 0 }
}

fn verdict(report: Value, ok: bool) -> Outcome {
    Outcome {
        report,
        code: if ok { 0 } else { 1 },
    }
}

fn to_value(v: impl Serialize) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

/// Reads and validates an algebra file.
pub fn load_algebra(path: &Path) -> Result<Algebra> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse::<Algebra>()
        .with_context(|| format!("in {}", path.display()))
}

fn parse_signature(text: &str) -> Result<Vec<OpSymbol>> {
    let mut ops: Vec<OpSymbol> = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| OpSymbol::from_char(c).ok_or_else(|| anyhow!("unknown operation symbol `{c}`")))
        .collect::<Result<_>>()?;
    ops.sort();
    ops.dedup();
    if ops.is_empty() {
        bail!("empty signature");
    }
    Ok(ops)
}

fn parse_orders(text: &str) -> Result<(usize, usize)> {
    let bad = || anyhow!("orders must be `n` or `lo-hi`, got `{text}`");
    match text.split_once('-') {
        Some((lo, hi)) => Ok((
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
        )),
        None => {
            let n = text.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

fn parse_numbers(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u64>()
                .with_context(|| format!("`{s}` is not a nonnegative integer"))
        })
        .collect()
}

fn parse_assignment(text: &str) -> Result<BTreeMap<Var, usize>> {
    let mut out = BTreeMap::new();
    for pair in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("expected `var=element`, got `{pair}`"))?;
        let mut chars = name.trim().chars();
        let var = match (chars.next().and_then(Var::new), chars.next()) {
            (Some(v), None) => v,
            _ => bail!("`{}` is not a variable", name.trim()),
        };
        out.insert(
            var,
            value
                .trim()
                .parse()
                .with_context(|| format!("`{value}` is not an element"))?,
        );
    }
    Ok(out)
}

fn satisfaction_report(statement: String, s: &Satisfaction) -> Outcome {
    verdict(
        json!({ "statement": statement, "holds": s.holds(), "witness": s.witness() }),
        s.holds(),
    )
}

fn term_command(cmd: &TermCommand) -> Result<Outcome> {
    let parse = |args: &TermArgs| -> Result<_> {
        let sig = Signature::new(parse_signature(&args.signature)?);
        Ok(parse_term(&args.term, &sig)?)
    };
    Ok(match cmd {
        TermCommand::Parse(args) => {
            let t = parse(args)?;
            let vars: String = t.variables().iter().map(|v| v.name()).collect();
            let symbols: String = t.symbols().iter().map(|s| s.as_char()).collect();
            pass(
                json!({ "term": render_term(&t), "depth": t.depth(), "size": t.size(), "variables": vars, "symbols": symbols }),
            )
        }
        TermCommand::Render(args) => pass(Value::String(render_term(&parse(args)?))),
        TermCommand::Rightmost { term, var } => {
            let v = Var::new(*var).ok_or_else(|| anyhow!("`{var}` is not a variable"))?;
            pass(Value::Bool(parse(term)?.is_rightmost(v)))
        }
        TermCommand::Eval {
            term,
            algebra,
            assign,
        } => {
            let t = parse(term)?;
            let a = load_algebra(algebra)?;
            pass(json!(t.evaluate(&a, &parse_assignment(assign)?)?))
        }
    })
}

fn check_command(args: &CheckArgs) -> Result<Outcome> {
    let a = load_algebra(&args.algebra)?;
    let sig = Signature::new(a.symbols());
    if let Some(text) = &args.identity {
        let id = parse_identity(text, &sig)?;
        Ok(satisfaction_report(id.to_string(), &a.check_identity(&id)?))
    } else {
        let text = args.quasi.as_deref().expect("clap requires one of the two");
        let q = parse_quasi_identity(text, &sig)?;
        Ok(satisfaction_report(
            q.to_string(),
            &a.check_quasi_identity(&q)?,
        ))
    }
}

fn idempotents_command(args: &IdempotentArgs) -> Result<Outcome> {
    let a = load_algebra(&args.algebra)?;
    match args.element {
        Some(e) => Ok(pass(to_value(a.power_cycle(args.op, e)?)?)),
        None => Ok(pass(to_value(a.idempotent_report())?)),
    }
}

fn minimal_command(args: &MinimalArgs) -> Result<Outcome> {
    let a = load_algebra(&args.algebra)?;
    let mins: Vec<Vec<usize>> = minimal_subuniverses(&a)
        .iter()
        .map(|s| s.members().to_vec())
        .collect();
    let mut report = json!({ "is_minimal": is_minimal(&a), "minimal_subuniverses": mins });
    if let Some(e) = args.left_image {
        report["left_image"] = to_value(left_image(&a, args.op, e)?)?;
    }
    if let Some(e) = args.stabilizer {
        report["left_stabilizer"] = to_value(left_stabilizer(&a, args.op, e)?)?;
    }
    Ok(pass(report))
}

fn status_value(s: &ConditionStatus) -> Value {
    match s {
        ConditionStatus::Holds => json!({ "status": "holds" }),
        ConditionStatus::Fails(w) => json!({ "status": "fails", "witness": w }),
        ConditionStatus::NotClaimed => json!({ "status": "not-claimed" }),
    }
}

fn schema_command(args: &SchemaArgs) -> Result<Outcome> {
    if args.list {
        let catalog: BTreeMap<&str, String> = builtin_schemas()
            .into_iter()
            .map(|(n, s)| (n, s.to_string()))
            .collect();
        return Ok(pass(to_value(catalog)?));
    }
    let schema: EllisSchema = match (&args.builtin, &args.schema) {
        (Some(name), _) => builtin_schema(name)?,
        (None, Some(text)) => text.parse()?,
        (None, None) => bail!("give --builtin NAME or --schema TEXT"),
    };
    if let Err(violations) = schema.validate() {
        bail!("invalid schema: {}", serde_json::to_string(&violations)?);
    }
    let a = load_algebra(args.algebra.as_deref().expect("clap requires --algebra"))?;
    let one: ConditionStatus = schema.check_condition_one(&a)?.into();
    let two = schema.check_condition_two(&a)?;
    let prediction = schema.predict_idempotent(&a);
    let mut report = json!({
        "schema": schema.to_string(),
        "condition_one": status_value(&one),
        "condition_two": status_value(&two),
    });
    let ok = match prediction {
        Ok(e) => {
            report["idempotent"] = json!(e);
            true
        }
        Err(SchemaError::ConditionTwoNotClaimed) => {
            report["idempotent"] = Value::Null;
            report["note"] = json!("condition two is not claimed for this schema; no prediction");
            one.holds()
        }
        Err(SchemaError::HypothesisFails { .. }) => {
            report["idempotent"] = Value::Null;
            false
        }
        Err(e) => return Err(e.into()),
    };
    Ok(verdict(report, ok))
}

fn search_options(cli: &Cli) -> SearchOptions {
    SearchOptions {
        limits: Limits {
            max_order: cli.max_order,
            ..Limits::default()
        },
        workers: cli.workers.max(1),
        timing: cli.timing,
        ..SearchOptions::default()
    }
}

fn search_command(cli: &Cli, args: &SearchArgs) -> Result<Outcome> {
    let (min_order, max_order) = parse_orders(&args.orders)?;
    let mut signature = parse_signature(&args.signature)?;
    let mut constraints = Vec::new();
    if args.left_semiring {
        signature = vec![OpSymbol::Mul, OpSymbol::Add];
        constraints = search::left_semiring_constraints();
    }
    let sig = Signature::new(signature.iter().copied());
    for c in &args.constraints {
        constraints.push(parse_quasi_identity(c, &sig)?);
    }
    let property: Property = args
        .property
        .parse()
        .map_err(|e: String| anyhow!("property: {e}"))?;
    let target = match args.target {
        TargetArg::Verify => Target::Verify,
        TargetArg::FindCounterexample => Target::FindCounterexample,
    };
    let spec = SearchSpec {
        min_order,
        max_order,
        signature,
        constraints,
        property,
        target,
    };
    let report = search::verify_universally(&spec, &search_options(cli))?;
    let ok = report.pass;
    Ok(verdict(to_value(&report)?, ok))
}

fn campaign_command(cli: &Cli, args: &CampaignArgs) -> Result<Outcome> {
    let opts = SearchOptions {
        campaign_order: args.order,
        ..search_options(cli)
    };
    let report = search::run_campaign(&args.name, &opts)?;
    let path = search::write_campaign_report(&report, &args.out_dir)
        .with_context(|| format!("writing report under {}", args.out_dir.display()))?;
    let mut value = to_value(&report)?;
    value["written_to"] = json!(path.display().to_string());
    Ok(verdict(value, !report.counterexample_found))
}

fn ultrafilter_command(args: &UltrafilterArgs) -> Result<Outcome> {
    let a = load_algebra(&args.algebra)?;
    let nesting = match args.nesting {
        NestingArg::Canonical => Nesting::Canonical,
        NestingArg::Swapped => Nesting::Swapped,
        NestingArg::AsTypeset => Nesting::AsTypeset,
    };
    let report = ultrafilter::check_extension_laws_with(&a, args.op, nesting)?;
    let ok = report.equals_original && report.associativity_preserved;
    Ok(verdict(to_value(&report)?, ok))
}

fn hindman_command(cli: &Cli, cmd: &HindmanCommand) -> Result<Outcome> {
    Ok(match cmd {
        HindmanCommand::Sums { elements } => {
            let xs = FsInstance::new(parse_numbers(elements)?)?;
            pass(
                json!({ "elements": xs, "sums": hindman::finite_sums(&xs)?, "convention": hindman::CONVENTION }),
            )
        }
        HindmanCommand::Products { elements } => {
            let xs = FsInstance::new(parse_numbers(elements)?)?;
            pass(json!({ "elements": xs, "products": hindman::finite_products(&xs)? }))
        }
        HindmanCommand::Witness {
            part,
            length,
            bound,
            products,
        } => {
            let part: BTreeSet<u64> = parse_numbers(part)?.into_iter().collect();
            let bound = bound.unwrap_or_else(|| part.last().copied().unwrap_or(0));
            let witness = if *products {
                hindman::find_fp_witness(&part, *length, bound)
            } else {
                hindman::find_fs_witness(&part, *length, bound)
            };
            let found = witness.is_some();
            verdict(
                json!({ "part": part, "length": length, "bound": bound, "witness": witness }),
                found,
            )
        }
        HindmanCommand::Partition { classes, length } => {
            let classes = classes
                .iter()
                .map(|c| parse_numbers(c))
                .collect::<Result<Vec<_>>>()?;
            let report = hindman::check_partition(&Coloring::from_classes(&classes)?, *length);
            let found = report.monochromatic;
            verdict(to_value(&report)?, found)
        }
        HindmanCommand::Forcing {
            colors,
            length,
            max_n,
        } => {
            let opts = ForcingOptions {
                max_n: *max_n,
                workers: cli.workers.max(1),
            };
            pass(to_value(hindman::forcing_report(*colors, *length, &opts)?)?)
        }
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Term(cmd) => term_command(cmd),
        Command::Check(args) => check_command(args),
        Command::Idempotents(args) => idempotents_command(args),
        Command::Minimal(args) => minimal_command(args),
        Command::Schema(args) => schema_command(args),
        Command::Search(args) => search_command(cli, args),
        Command::Campaign(args) => campaign_command(cli, args),
        Command::Ultrafilter(args) => ultrafilter_command(args),
        Command::Hindman(cmd) => hindman_command(cli, cmd),
    }
}

/// Indented text: objects as `key: value` lines, multi-line strings
/// (algebra tables) as indented blocks.
fn render_pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match item {
                    Value::Object(m) if !m.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_pretty(item, indent + 2, out);
                    }
                    Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_pretty(item, indent + 2, out);
                    }
                    Value::String(s) if s.contains('\n') => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_pretty(item, indent + 2, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(item))),
                }
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, item) in items.iter().enumerate() {
                out.push_str(&format!("{pad}- [{i}]\n"));
                render_pretty(item, indent + 2, out);
            }
        }
        Value::String(s) if s.contains('\n') => {
            for line in s.lines() {
                out.push_str(&format!("{pad}{line}\n"));
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// Parses `args` (program name first), runs the command, writes the report
/// to `out` and diagnostics to `err`, and returns the exit code.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let text = if cli.pretty {
                let mut s = String::new();
                render_pretty(&outcome.report, 0, &mut s);
                s
            } else {
                format!("{}\n", outcome.report)
            };
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
