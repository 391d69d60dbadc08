//! Command dispatch.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use cjet_core::fixtures::{enumeration_trap, nested_linear_with, real_trap, FixtureError, FixtureSpec};
use cjet_core::flatten::{witness_branches, ConstrainedSystem};
use cjet_core::jets::ConstraintSet;
use cjet_core::pde::{pde_solve, tau_search, PdeError, PdeOptions, TauQuery};
use cjet_core::poly::VariableRegistry;
use cjet_core::solve::{
    decide_countable, generator_prefix, lift_to, nu_search, solve_branching, solve_exhaustive, solve_linear,
    BranchingOptions, CountableOptions, EquationGenerator, EquationSystem, ExhaustiveOptions, FlattenedStream,
    LiftOptions, NuOutcome, NuQuery, SolveError, SolveReport, Truncated,
};
use cjet_core::{Field, FieldSpec, PrimeField, Rationals};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::args::{Cli, Command, Method, Search, Source};
use crate::dsl::{parse, Description, SyntaxError};
use crate::model::{build, Model, SemanticError};
use crate::report::*;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{input}: {error}")]
    Syntax { input: String, error: SyntaxError },
    #[error("{0}")]
    Semantic(#[from] SemanticError),
    #[error("{0}")]
    Fixture(#[from] FixtureError),
    #[error("{0}")]
    Solve(#[from] SolveError),
    #[error("{0}")]
    Pde(#[from] PdeError),
    #[error("{input}: {message}")]
    Io { input: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl From<cjet_core::field::FieldError> for CliError {
    fn from(e: cjet_core::field::FieldError) -> Self {
        CliError::Semantic(e.into())
    }
}

/// What a successful run prints: JSON for stdout, a summary for stderr.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: String,
    pub summary: String,
    pub verdict: Verdict,
}

impl Output {
    pub fn exit_code(&self) -> u8 {
        self.verdict.exit_code()
    }
}

struct Ctx {
    name: &'static str,
    input: String,
    options: BTreeMap<String, serde_json::Value>,
}

impl Ctx {
    fn new(cmd: &Command, input: String) -> Self {
        Ctx { name: cmd.name(), input, options: BTreeMap::new() }
    }

    fn opt(&mut self, key: &str, value: impl Serialize) {
        self.options.insert(key.to_string(), json!(value));
    }

    fn search(&mut self, s: &Search) {
        self.opt("budget", s.budget);
        self.opt("jobs", s.jobs);
        self.opt("height_bound", s.height_bound);
    }

    fn finish<T: Serialize>(self, field: FieldSpec, verdict: Verdict, result: T, summary: String) -> Output {
        let report = Report {
            version: env!("CARGO_PKG_VERSION"),
            command: CommandEcho { name: self.name.to_string(), input: self.input, options: self.options },
            field: field.to_string(),
            verdict,
            result,
        };
        Output { json: serde_json::to_string_pretty(&report).expect("serializable"), summary, verdict }
    }
}

enum Loaded {
    Description(Description),
    Stream(FixtureSpec),
}

fn read_file(path: &Path) -> Result<(String, Description), CliError> {
    let input = path.display().to_string();
    let mut text = String::new();
    let read = if input == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| CliError::Io { input: input.clone(), message: e.to_string() })?;
    let desc = parse(&text).map_err(|error| CliError::Syntax { input: input.clone(), error })?;
    Ok((input, desc))
}

fn load(source: &Source) -> Result<(String, Loaded), CliError> {
    match (&source.file, &source.fixture) {
        (Some(path), _) => read_file(path).map(|(i, d)| (i, Loaded::Description(d))),
        (None, Some(spec)) => {
            let spec: FixtureSpec = spec.parse()?;
            let input = format!("fixture {spec}");
            match spec {
                FixtureSpec::NestedLinear { .. } => {
                    let text = fixture_description(&spec)?.expect("system fixture");
                    let desc = parse(&text).map_err(|error| CliError::Syntax { input: input.clone(), error })?;
                    Ok((input, Loaded::Description(desc)))
                }
                _ => Ok((input, Loaded::Stream(spec))),
            }
        }
        (None, None) => Err(CliError::Usage("give a description file or --fixture".into())),
    }
}

/// Description text for a constrained system, parseable by [`parse`].
pub fn describe_system<F: Field>(sys: &ConstrainedSystem<F>, order: Option<u32>) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {};\n", sys.field.spec()));
    let series = sys.series_names();
    out.push_str(&format!("vars {};\n", series.join(" ")));
    for (name, j) in sys.unknown_names().iter().zip(&sys.constraints) {
        let support: Vec<&str> = j.iter().map(|k| series[k].as_str()).collect();
        out.push_str(&format!("unknown {name} in [{}];\n", support.join(", ")));
    }
    for f in &sys.equations {
        out.push_str(&format!("eq {};\n", f.to_text(&sys.registry)));
    }
    if let Some(c) = order {
        out.push_str(&format!("order {c};\n"));
    }
    out
}

fn fixture_description(spec: &FixtureSpec) -> Result<Option<String>, CliError> {
    let FixtureSpec::NestedLinear { n, c, field, uniform } = *spec else {
        return Ok(None);
    };
    let constraints = |n: usize| -> Vec<ConstraintSet> {
        (1..=n).map(|i| if uniform { ConstraintSet::full(n) } else { ConstraintSet::new(0..i, n).expect("in range") }).collect()
    };
    Ok(Some(match field {
        FieldSpec::Rational => {
            let fx = nested_linear_with(Rationals, n, c, constraints(n))?;
            describe_system(&fx.system, Some(fx.order))
        }
        FieldSpec::PrimeField { modulus } => {
            let fx = nested_linear_with(PrimeField::new(modulus)?, n, c, constraints(n))?;
            describe_system(&fx.system, Some(fx.order))
        }
    }))
}

macro_rules! with_model {
    ($desc:expr, $m:ident => $body:expr) => {
        match $desc.field {
            FieldSpec::Rational => {
                let $m = build($desc, Rationals)?;
                $body
            }
            FieldSpec::PrimeField { modulus } => {
                let $m = build($desc, PrimeField::new(modulus)?)?;
                $body
            }
        }
    };
}

fn order_of<F: Field>(m: &Model<F>, flag: Option<u32>) -> Result<u32, CliError> {
    flag.or(m.order).ok_or_else(|| CliError::Usage("no truncation order: pass --order or add `order c;`".into()))
}

fn branching(search: &Search) -> BranchingOptions {
    BranchingOptions { height_bound: search.height_bound, budget: search.budget }
}

fn solve_with<F: Field>(
    s: &EquationSystem<F>,
    method: Method,
    search: &Search,
    all: bool,
) -> Result<(&'static str, SolveReport<F::Elem>), CliError> {
    let exhaustive = ExhaustiveOptions { budget: search.budget, all_solutions: all, jobs: search.jobs };
    let method = match method {
        Method::Auto if s.equations.iter().all(|e| e.is_affine()) && !(all && s.field.is_finite()) => Method::Linear,
        Method::Auto if s.field.is_finite() => Method::Exhaustive,
        Method::Auto => Method::Branching,
        m => m,
    };
    Ok(match method {
        Method::Linear => ("linear", solve_linear(s)?),
        Method::Exhaustive => ("exhaustive", solve_exhaustive(s, &exhaustive)?),
        Method::Branching => ("branching", solve_branching(s, &branching(search))?),
        Method::Lift => return Err(CliError::Usage("--method lift needs a series system".into())),
        Method::Auto => unreachable!("resolved above"),
    })
}

fn outcome_summary<E>(o: &cjet_core::solve::Outcome<E>) -> String {
    match o {
        cjet_core::solve::Outcome::Sat { .. } => "sat".into(),
        cjet_core::solve::Outcome::UnsatAtPrefix { prefix, .. } => format!("unsat at prefix {prefix}"),
        cjet_core::solve::Outcome::Inconclusive { reason } => format!("inconclusive: {reason}"),
    }
}

fn jets_summary(jets: &[JetDoc]) -> String {
    jets.iter().map(|j| format!("{} = {} + O(x)^{}", j.name, j.value, j.order)).collect::<Vec<_>>().join(", ")
}

fn flatten_cmd(ctx: Ctx, loaded: Loaded, order: Option<u32>, emit: bool) -> Result<Output, CliError> {
    let Loaded::Description(desc) = loaded else {
        return Err(CliError::Usage("this fixture is an equation stream; use `decide` or `solve`".into()));
    };
    with_model!(&desc, m => {
        let c = order_of(&m, order)?;
        let flat = m.flatten(c)?;
        let result = FlattenResult {
            order: c,
            unknowns: flat.unknowns.len(),
            equations: flat.len(),
            system: emit.then(|| flat.to_document()),
        };
        let summary = format!("order {c}: {} unknowns, {} equations", result.unknowns, result.equations);
        Ok(ctx.finish(desc.field, Verdict::Done, result, summary))
    })
}

struct SolveFlags<'a> {
    order: Option<u32>,
    search: &'a Search,
    method: Method,
    all: bool,
    witness_all: bool,
    emit: bool,
}

fn solve_model<F: Field>(ctx: Ctx, m: &Model<F>, f: &SolveFlags) -> Result<Output, CliError> {
    if m.is_differential() {
        return Err(SemanticError::Differential.into());
    }
    let c = order_of(m, f.order)?;
    let names = m.unknown_names();
    let flat = m.flatten(c)?;
    let jets_of = |flat: &cjet_core::flatten::FlattenedSystem<F>, r: &SolveReport<F::Elem>| -> Result<Option<Vec<JetDoc>>, CliError> {
        let Some(assign) = r.first_assignment() else { return Ok(None) };
        let ys = flat.realize(&assign).map_err(SemanticError::from)?;
        Ok(Some(ys.iter().zip(&names).map(|(y, n)| jet_doc(n, y, &m.layout.series, &m.registry)).collect()))
    };
    let mut branches = Vec::new();
    let mut method = "";
    if f.method == Method::Lift {
        if !m.pins.is_empty() || m.unknown_orders.iter().any(Option::is_some) {
            return Err(CliError::Usage("--method lift does not combine with `ord` or `coeff` statements".into()));
        }
        let opts = LiftOptions { budget: f.search.budget, backtrack: true, branching: branching(f.search) };
        let r = lift_to(&m.system()?, c, &opts)?;
        method = "lift";
        branches.push(BranchDoc { witnesses: Vec::new(), report: solve_doc(&r, Some(flat.len())), jets: jets_of(&flat, &r)? });
    } else if m.unknown_orders.iter().all(Option::is_none) {
        let s = EquationSystem::from_flattened(&flat);
        let (name, r) = solve_with(&s, f.method, f.search, f.all)?;
        method = name;
        branches.push(BranchDoc { witnesses: Vec::new(), report: solve_doc(&r, Some(s.len())), jets: jets_of(&flat, &r)? });
    } else {
        for b in witness_branches(m.n(), &m.constraints, &m.unknown_orders) {
            let imposed = flat.impose_orders(&b).map_err(SemanticError::from)?;
            let s = EquationSystem::from_flattened(&imposed);
            let (name, r) = solve_with(&s, f.method, f.search, f.all)?;
            method = name;
            let sat = r.outcome.is_sat();
            branches.push(BranchDoc {
                witnesses: witness_docs(&b, &names),
                report: solve_doc(&r, Some(s.len())),
                jets: jets_of(&imposed, &r)?,
            });
            if sat && !f.witness_all {
                break;
            }
        }
    }
    let verdict = branch_verdict(&branches);
    let summary = match branches.iter().find_map(|b| b.jets.as_ref()) {
        Some(jets) => format!("sat ({method}, order {c}): {}", jets_summary(jets)),
        None if branches.len() == 1 => format!("{} ({method}, order {c})", status_text(&branches[0].report.outcome)),
        None => format!("{verdict:?} over {} witness branches (order {c})", branches.len()).to_lowercase(),
    };
    let result = SolveResult { order: Some(c), method: method.to_string(), branches, system: f.emit.then(|| flat.to_document()) };
    Ok(ctx.finish(m.field.spec(), verdict, result, summary))
}

fn status_text(o: &OutcomeDoc) -> String {
    match o {
        OutcomeDoc::Sat { .. } => "sat".into(),
        OutcomeDoc::Unsat { prefix, .. } => format!("unsat at prefix {prefix}"),
        OutcomeDoc::Inconclusive { reason } => format!("inconclusive: {reason}"),
    }
}

fn branch_verdict(branches: &[BranchDoc]) -> Verdict {
    let mut verdict = Verdict::Unsat;
    for b in branches {
        match b.report.outcome {
            OutcomeDoc::Sat { .. } => return Verdict::Sat,
            OutcomeDoc::Inconclusive { .. } => verdict = Verdict::Inconclusive,
            OutcomeDoc::Unsat { .. } => {}
        }
    }
    verdict
}

fn stream_prefix<G: EquationGenerator>(gen: &G, len: usize) -> EquationSystem<G::F> {
    generator_prefix(gen, len)
}

fn solve_stream(ctx: Ctx, spec: &FixtureSpec, f: &SolveFlags) -> Result<Output, CliError> {
    fn go<F: Field>(ctx: Ctx, s: EquationSystem<F>, f: &SolveFlags) -> Result<Output, CliError> {
        let (method, r) = solve_with(&s, f.method, f.search, f.all)?;
        let summary = format!("{} ({method})", outcome_summary(&r.outcome));
        let verdict = Verdict::of(&r.outcome);
        let branch = BranchDoc { witnesses: Vec::new(), report: solve_doc(&r, Some(s.len())), jets: None };
        let result = SolveResult { order: None, method: method.to_string(), branches: vec![branch], system: None };
        Ok(ctx.finish(s.field.spec(), verdict, result, summary))
    }
    match *spec {
        FixtureSpec::EnumTrap { p, len } => {
            let trap = enumeration_trap(PrimeField::new(p)?);
            let s = stream_prefix(&trap, len.unwrap_or(trap.len()));
            go(ctx, s, f)
        }
        FixtureSpec::RealTrap { l } => go(ctx, stream_prefix(&real_trap(l), l), f),
        FixtureSpec::NestedLinear { .. } => unreachable!("loaded as a description"),
    }
}

fn decide_cmd(ctx: Ctx, loaded: Loaded, order: Option<u32>, max: usize, search: &Search) -> Result<Output, CliError> {
    let opts = CountableOptions { n_max: max, budget: search.budget };
    fn go<G: EquationGenerator>(ctx: Ctx, gen: &G, label: String, opts: &CountableOptions) -> Result<Output, CliError> {
        let r = decide_countable(gen, opts)?;
        let summary = outcome_summary(&r.outcome);
        let verdict = Verdict::of(&r.outcome);
        let result = DecideResult { generator: label, max_prefix: opts.n_max, report: solve_doc(&r, None) };
        Ok(ctx.finish(gen.field().spec(), verdict, result, summary))
    }
    match loaded {
        Loaded::Stream(spec) => match spec {
            FixtureSpec::EnumTrap { p, len } => {
                let trap = enumeration_trap(PrimeField::new(p)?);
                match len {
                    Some(len) => go(ctx, &Truncated { inner: trap, len }, spec.to_string(), &opts),
                    None => go(ctx, &trap, spec.to_string(), &opts),
                }
            }
            _ => Err(SolveError::FieldNotFinite.into()),
        },
        Loaded::Description(desc) => with_model!(&desc, m => {
            let c = order_of(&m, order)?;
            let flat = m.flatten(c)?;
            go(ctx, &FlattenedStream::new(&flat), format!("flattened system at order {c}"), &opts)
        }),
    }
}

fn require_orders(orders: &[Option<u32>], names: &[String]) -> Result<Vec<u32>, CliError> {
    orders
        .iter()
        .zip(names)
        .map(|(o, n)| o.ok_or_else(|| CliError::Usage(format!("missing `ord` statement for {n}"))))
        .collect()
}

fn approximation_output(ctx: Ctx, field: FieldSpec, names: Vec<String>, orders: Vec<u32>, out: NuOutcome, symbol: &str) -> Output {
    let (verdict, summary) = match out.value {
        Some(v) => (Verdict::Found, format!("{symbol} = {v} relative to C_max = {}", out.relative_to)),
        None => {
            let tried = out.checks.last().map_or(0, |c| c.at);
            (Verdict::NotFound, format!("no {symbol} <= {tried} relative to C_max = {}", out.relative_to))
        }
    };
    let orders = names.into_iter().zip(orders).map(|(name, o)| ValueDoc { name, value: o.to_string() }).collect();
    ctx.finish(field, verdict, ApproximationResult { orders, outcome: out }, summary)
}

fn nu_model<F: Field>(mut ctx: Ctx, m: &Model<F>, cmax: u32, max: Option<u32>, search: &Search) -> Result<Output, CliError> {
    if !m.pins.is_empty() {
        return Err(CliError::Usage("`coeff` pins are not supported by `nu`".into()));
    }
    let names = m.unknown_names();
    let orders = require_orders(&m.unknown_orders, &names)?;
    let mut q = NuQuery::new(m.system()?, orders.clone(), cmax, max.unwrap_or(cmax));
    q.budget = search.budget;
    q.jobs = search.jobs;
    ctx.opt("nu_max", q.nu_max);
    let out = nu_search(&q)?;
    Ok(approximation_output(ctx, m.field.spec(), names, orders, out, "nu"))
}

fn tau_model<F: Field>(mut ctx: Ctx, m: &Model<F>, cmax: u32, max: Option<u32>, search: &Search) -> Result<Output, CliError> {
    let mut names = m.unknown_names();
    names.extend(m.derivatives.iter().map(|d| m.registry.name(d.var).to_string()));
    let all: Vec<Option<u32>> = m.unknown_orders.iter().chain(&m.derivative_orders).copied().collect();
    let orders = require_orders(&all, &names)?;
    let mut q = TauQuery::new(m.pde()?, orders.clone(), cmax, max.unwrap_or(cmax));
    q.budget = search.budget;
    q.jobs = search.jobs;
    ctx.opt("tau_max", q.tau_max);
    let out = tau_search(&q)?;
    Ok(approximation_output(ctx, m.field.spec(), names, orders, out, "tau"))
}

fn pde_model<F: Field>(ctx: Ctx, m: &Model<F>, order: Option<u32>, search: &Search, emit: bool) -> Result<Output, CliError> {
    let c = order_of(m, order)?;
    let pde = m.pde()?;
    let opts = PdeOptions { budget: search.budget, jobs: search.jobs, branching: branching(search) };
    let sol = pde_solve(&pde, c, &opts)?;
    let s = EquationSystem::from_flattened(&sol.flat);
    let method = if s.equations.iter().all(|e| e.is_affine()) {
        "linear"
    } else if m.field.is_finite() {
        "exhaustive"
    } else {
        "branching"
    };
    let names = m.unknown_names();
    let functions = sol.functions.as_ref().map(|fs| {
        fs.iter().zip(&names).map(|(y, n)| jet_doc(n, y, &m.layout.series, &m.registry)).collect::<Vec<_>>()
    });
    let derivatives = sol.derivatives.as_ref().map(|ds| {
        ds.iter()
            .zip(&m.derivatives)
            .map(|(y, d)| jet_doc(m.registry.name(d.var), y, &m.layout.series, &m.registry))
            .collect::<Vec<_>>()
    });
    let summary = match &functions {
        Some(fs) => format!("sat ({method}, order {c}): {}", jets_summary(fs)),
        None => format!("{} ({method}, order {c})", outcome_summary(&sol.report.outcome)),
    };
    let verdict = Verdict::of(&sol.report.outcome);
    let result = PdeResult {
        order: c,
        method: method.into(),
        report: solve_doc(&sol.report, Some(s.len())),
        functions,
        derivatives,
        system: emit.then(|| sol.flat.to_document()),
    };
    Ok(ctx.finish(m.field.spec(), verdict, result, summary))
}

fn stream_equations<G: EquationGenerator>(gen: &G, len: usize, coords: usize) -> Vec<String> {
    let registry = VariableRegistry::coordinates(coords);
    (1..=len).filter_map(|l| gen.equation(l)).map(|p| p.to_text(&registry)).collect()
}

fn fixture_cmd(ctx: Ctx, spec: &str) -> Result<Output, CliError> {
    let spec: FixtureSpec = spec.parse()?;
    let (field, equations) = match spec {
        FixtureSpec::EnumTrap { p, len } => {
            let trap = enumeration_trap(PrimeField::new(p)?);
            let len = len.unwrap_or(trap.len()).min(trap.len());
            (FieldSpec::PrimeField { modulus: p }, stream_equations(&trap, len, trap.len() + 1))
        }
        FixtureSpec::RealTrap { l } => (FieldSpec::Rational, stream_equations(&real_trap(l), l, l)),
        FixtureSpec::NestedLinear { field, .. } => (field, Vec::new()),
    };
    let description = fixture_description(&spec)?;
    let summary = match &description {
        Some(_) => format!("{spec}: system description"),
        None => format!("{spec}: {} equations", equations.len()),
    };
    Ok(ctx.finish(field, Verdict::Done, FixtureResult { fixture: spec.to_string(), equations, description }, summary))
}

/// Runs one command.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let cmd = &cli.command;
    match cmd {
        Command::Flatten { source, order, emit_system } => {
            let (input, loaded) = load(source)?;
            let mut ctx = Ctx::new(cmd, input);
            ctx.opt("order", order);
            ctx.opt("emit_system", emit_system);
            flatten_cmd(ctx, loaded, *order, *emit_system)
        }
        Command::Solve { source, order, search, method, all, witness_all, emit_system } => {
            let (input, loaded) = load(source)?;
            let mut ctx = Ctx::new(cmd, input);
            ctx.opt("order", order);
            ctx.search(search);
            ctx.opt("method", format!("{method:?}").to_lowercase());
            ctx.opt("all", all);
            ctx.opt("witness_all", witness_all);
            ctx.opt("emit_system", emit_system);
            let flags = SolveFlags { order: *order, search, method: *method, all: *all, witness_all: *witness_all, emit: *emit_system };
            match loaded {
                Loaded::Description(desc) => with_model!(&desc, m => solve_model(ctx, &m, &flags)),
                Loaded::Stream(spec) => solve_stream(ctx, &spec, &flags),
            }
        }
        Command::Decide { source, order, max, search } => {
            let (input, loaded) = load(source)?;
            let mut ctx = Ctx::new(cmd, input);
            ctx.opt("order", order);
            ctx.opt("max", max);
            ctx.opt("budget", search.budget);
            decide_cmd(ctx, loaded, *order, *max, search)
        }
        Command::Nu { file, cmax, max, search } => {
            let (input, desc) = read_file(file)?;
            let mut ctx = Ctx::new(cmd, input);
            ctx.opt("cmax", cmax);
            ctx.search(search);
            with_model!(&desc, m => nu_model(ctx, &m, *cmax, *max, search))
        }
        Command::Tau { file, cmax, max, search } => {
            let (input, desc) = read_file(file)?;
            let mut ctx = Ctx::new(cmd, input);
            ctx.opt("cmax", cmax);
            ctx.search(search);
            with_model!(&desc, m => tau_model(ctx, &m, *cmax, *max, search))
        }
        Command::Pde { file, order, search, emit_system } => {
            let (input, desc) = read_file(file)?;
            let mut ctx = Ctx::new(cmd, input);
            ctx.opt("order", order);
            ctx.search(search);
            ctx.opt("emit_system", emit_system);
            with_model!(&desc, m => pde_model(ctx, &m, *order, search, *emit_system))
        }
        Command::Fixture { spec } => {
            let ctx = Ctx::new(cmd, spec.clone());
            fixture_cmd(ctx, spec)
        }
    }
}
