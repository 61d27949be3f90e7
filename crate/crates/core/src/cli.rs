//! Command-line front end. `run` never exits the process; it returns the
//! status code so the binary and the tests share one path.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::belief::RestrictionProfile;
use crate::dsl::{parse_game, parse_restrictions, solution_document, SolutionDocument};
use crate::error::Error;
use crate::game::{Game, ProfileSet};
use crate::num::format_q;
use crate::solvers::{
    compare, generalized_spec, generalized_solve, oracle_audit, Comparison, EliminationReason, OracleAudit,
    Procedure, ProcedureSpec, Restrictions, SolveTrace, StartSet,
};
use crate::stability::{parse_scenario, run_scenario, ScenarioReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;
pub const EXIT_PRECONDITION: i32 = 5;
pub const EXIT_ORACLE: i32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Selector {
    Rationalizability,
    Selective,
    StrongDelta,
    NoS3,
    Generalized,
}

impl Selector {
    fn procedure(self) -> Option<Procedure> {
        match self {
            Selector::Rationalizability => Some(Procedure::Rationalizability),
            Selector::Selective => Some(Procedure::Selective),
            Selector::StrongDelta => Some(Procedure::StrongDelta),
            Selector::NoS3 => Some(Procedure::NoS3),
            Selector::Generalized => None,
        }
    }

    fn needs_restrictions(self) -> bool {
        self.procedure().is_some_and(Procedure::needs_restrictions)
    }

    fn label(self) -> &'static str {
        match self.procedure() {
            Some(p) => p.name(),
            None => "generalized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateChoice {
    All,
    Rationalizability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartChoice {
    Full,
    Rationalizable,
}

/// Solve, compare or stress-test a game. Without `--procedure`, `--compare`
/// or `--stability-scenario` the game is only validated.
#[derive(Debug, Clone, Parser)]
#[command(name = "forwind", version)]
pub struct RunConfig {
    /// Game file.
    #[arg(long)]
    pub game: PathBuf,
    /// First-order belief restrictions file.
    #[arg(long)]
    pub restrictions: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub procedure: Option<Selector>,
    /// Two procedures to run side by side, e.g. `selective,strong-delta`.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub compare: Option<Vec<Selector>>,
    /// Belief gate of the generalized procedure.
    #[arg(long, value_enum, default_value = "all")]
    pub gate: GateChoice,
    /// Start set of the generalized procedure.
    #[arg(long, value_enum, default_value = "full")]
    pub start: StartChoice,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
    /// Re-decide every admissibility query with the grid oracle at this
    /// denominator.
    #[arg(long, value_name = "D")]
    pub oracle_check: Option<usize>,
    /// Perturbation scenario (TOML).
    #[arg(long)]
    pub stability_scenario: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io { .. } => EXIT_IO,
            Error::Syntax { .. }
            | Error::UnknownIdentifier { .. }
            | Error::ArityMismatch { .. }
            | Error::UnknownInfoset { .. } => EXIT_PARSE,
            Error::InfeasibleClause { .. } | Error::Validation(_) | Error::DomainMismatch { .. } | Error::Unsupported(_) => {
                EXIT_VALIDATION
            }
            Error::EmptyPolytope { .. } | Error::PreconditionViolated(_) | Error::SearchBudgetExceeded(_) => {
                EXIT_PRECONDITION
            }
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io { path: path.display().to_string(), message: e.to_string() }.into()
    })
}

/// Parses `args` (including the program name) and runs. Reports go to `out`,
/// diagnostics to `err`.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            code
        }
    }
}

pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config) {
        Ok(report) => {
            let _ = out.write_all(report.text.as_bytes());
            if !report.advisories.is_empty() {
                let _ = err.write_all(report.advisories.as_bytes());
            }
            report.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

struct Report {
    text: String,
    advisories: String,
    code: i32,
}

fn execute(config: &RunConfig) -> Result<Report, Failure> {
    let modes = [config.procedure.is_some(), config.compare.is_some(), config.stability_scenario.is_some()];
    if modes.iter().filter(|&&m| m).count() > 1 {
        return Err(usage("choose at most one of --procedure, --compare, --stability-scenario"));
    }
    let game = parse_game(&read(&config.game)?)?;
    let restrictions = match &config.restrictions {
        Some(p) => Some(parse_restrictions(&read(p)?, &game)?),
        None => None,
    };

    if let Some(path) = &config.stability_scenario {
        let scenario = parse_scenario(&read(path)?)?;
        let report = run_scenario(&game, &scenario)?;
        let text = match config.format {
            Format::Human => report.to_string(),
            Format::Json => to_json(&ScenarioJson::new(&report)),
        };
        return Ok(Report { text, advisories: String::new(), code: EXIT_OK });
    }

    if let Some(pair) = &config.compare {
        let [a, b] = pair.as_slice() else {
            return Err(usage("--compare takes exactly two procedures"));
        };
        let mut runs = Vec::new();
        for &sel in [a, b] {
            runs.push(solve(config, &game, restrictions.as_ref(), sel)?);
        }
        let cmp = compare(&game, &runs[0].1, &runs[1].1);
        let mut advisories = String::new();
        let mut code = EXIT_OK;
        for (spec, trace) in &runs {
            code = code.max(audit(config, &game, spec, trace, &mut advisories)?.0);
        }
        let text = match config.format {
            Format::Human => human_comparison(&game, &cmp),
            Format::Json => to_json(&ComparisonJson::new(&game, &cmp)),
        };
        return Ok(Report { text, advisories, code });
    }

    if let Some(sel) = config.procedure {
        let (spec, trace) = solve(config, &game, restrictions.as_ref(), sel)?;
        let mut advisories = String::new();
        let (code, audit) = audit(config, &game, &spec, &trace, &mut advisories)?;
        let text = match config.format {
            Format::Human => {
                let mut t = human_trace(&game, &trace);
                if let Some(a) = &audit {
                    let _ = writeln!(
                        t,
                        "oracle check (D = {}): {} queries, {} disagreements",
                        a.denominator,
                        a.checks,
                        a.unsound.len()
                    );
                }
                t
            }
            Format::Json => to_json(&SolveJson { solution: solution_document(&game, &trace), oracle: audit.map(OracleJson::from) }),
        };
        return Ok(Report { text, advisories, code });
    }

    let text = match config.format {
        Format::Human => {
            let mut t = format!("game {} is valid\n", game.name());
            for i in 0..game.num_players() {
                let _ = writeln!(t, "  {}: {} strategies, {} information sets", game.player_name(i), game.num_strategies(i), game.infosets_of(i).len());
            }
            t
        }
        Format::Json => to_json(&serde_json::json!({ "game": game.name(), "valid": true })),
    };
    Ok(Report { text, advisories: String::new(), code: EXIT_OK })
}

fn solve(
    config: &RunConfig,
    game: &Game,
    restrictions: Option<&RestrictionProfile>,
    sel: Selector,
) -> Result<(ProcedureSpec, SolveTrace), Failure> {
    if sel.needs_restrictions() && restrictions.is_none() {
        return Err(usage(format!("procedure {} needs --restrictions", sel.label())));
    }
    Ok(solve_with(game, restrictions, sel, config.start, config.gate)?)
}

/// Builds and runs the selected procedure. `start` and `gate` only affect the
/// generalized procedure.
pub fn solve_with(
    game: &Game,
    restrictions: Option<&RestrictionProfile>,
    sel: Selector,
    start: StartChoice,
    gate: GateChoice,
) -> crate::Result<(ProcedureSpec, SolveTrace)> {
    if sel.needs_restrictions() && restrictions.is_none() {
        return Err(Error::PreconditionViolated(format!("procedure {} needs restrictions", sel.label())));
    }
    let restr: Restrictions = match restrictions {
        Some(r) => r.as_dyn(),
        None => vec![Vec::new(); game.num_players()],
    };
    let spec = match sel.procedure() {
        Some(p) => p.spec(game, &restr)?,
        None => {
            let start = match start {
                StartChoice::Full => StartSet::Full,
                StartChoice::Rationalizable => StartSet::Rationalizable,
            };
            generalized_spec(game, &restr, start, gate == GateChoice::Rationalizability)?
        }
    };
    let trace = generalized_solve(game, &spec)?;
    Ok((spec, trace))
}

/// Runs the oracle audit when requested. Soundness failures set the oracle
/// exit code; coarse-grid misses are only reported.
fn audit(
    config: &RunConfig,
    game: &Game,
    spec: &ProcedureSpec,
    trace: &SolveTrace,
    advisories: &mut String,
) -> Result<(i32, Option<OracleAudit>), Failure> {
    let Some(d) = config.oracle_check else {
        return Ok((EXIT_OK, None));
    };
    if d == 0 {
        return Err(usage("--oracle-check needs a positive denominator"));
    }
    let a = oracle_audit(game, spec, trace, d)?;
    for m in &a.coarse {
        let _ = writeln!(
            advisories,
            "advisory: grid too coarse at D = {d}: {} round {} {} {}",
            trace.procedure,
            m.round,
            game.player_name(m.player),
            game.strategy_name(m.player, m.strategy)
        );
    }
    for m in &a.unsound {
        let _ = writeln!(
            advisories,
            "oracle disagreement: {} round {} {} {} has a grid CPS the engine rejected",
            trace.procedure,
            m.round,
            game.player_name(m.player),
            game.strategy_name(m.player, m.strategy)
        );
    }
    let code = if a.unsound.is_empty() { EXIT_OK } else { EXIT_ORACLE };
    Ok((code, Some(a)))
}

/// The `forwind.comparison/1` document.
pub fn comparison_json(game: &Game, cmp: &Comparison) -> serde_json::Value {
    serde_json::to_value(ComparisonJson::new(game, cmp)).expect("report serializes")
}

/// The `forwind.stability/1` document. Non-finite values become `null`.
pub fn scenario_json(report: &ScenarioReport) -> serde_json::Value {
    serde_json::to_value(ScenarioJson::new(report)).expect("report serializes")
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn set_text(game: &Game, set: &ProfileSet) -> String {
    (0..game.num_players())
        .map(|i| {
            let names: Vec<&str> = set.members(i).into_iter().map(|s| game.strategy_name(i, s)).collect();
            format!("{} {{{}}}", game.player_name(i), names.join(", "))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn outcomes_text(game: &Game, outcomes: &[usize]) -> String {
    let names: Vec<String> = outcomes
        .iter()
        .map(|&z| {
            let pay: Vec<String> = game.payoffs(z).iter().map(format_q).collect();
            format!("{} ({})", game.node(z).name, pay.join(", "))
        })
        .collect();
    format!("{{{}}}", names.join(", "))
}

fn human_trace(game: &Game, trace: &SolveTrace) -> String {
    let mut t = format!("game {}, procedure {}\n", game.name(), trace.procedure);
    for (n, set) in trace.rounds.iter().enumerate() {
        let _ = writeln!(t, "round {n}: {}", set_text(game, set));
        for e in trace.eliminations.iter().filter(|e| e.round == n) {
            let why = match &e.reason {
                EliminationReason::EmptyPolytope => "restrictions admit no belief".to_string(),
                EliminationReason::Filtered => "not rationalizable".to_string(),
                EliminationReason::NoAdmissibleBelief { binding: Some(b) } => format!("no admissible belief, binding {b}"),
                EliminationReason::NoAdmissibleBelief { binding: None } => "no admissible belief".to_string(),
            };
            let _ = writeln!(t, "  drop {} {}: {why}", game.player_name(e.player), game.strategy_name(e.player, e.strategy));
        }
    }
    match trace.rounds.iter().position(ProfileSet::is_empty) {
        Some(n) => {
            let _ = writeln!(t, "solution set empty after round {n}");
        }
        None => {
            let _ = writeln!(t, "fixed point at round {}", trace.fixed_point);
            let _ = writeln!(t, "solution: {}", set_text(game, trace.final_set()));
            let _ = writeln!(t, "outcomes: {}", outcomes_text(game, &trace.outcomes));
        }
    }
    if !trace.exact {
        t.push_str("note: some belief searches were not exact\n");
    }
    t
}

fn pairs_text(game: &Game, pairs: &[(usize, usize)]) -> String {
    let v: Vec<String> = pairs
        .iter()
        .map(|&(i, s)| format!("{} {}", game.player_name(i), game.strategy_name(i, s)))
        .collect();
    v.join(", ")
}

fn human_comparison(game: &Game, cmp: &Comparison) -> String {
    let mut t = format!("compare {} vs {}\n", cmp.first, cmp.second);
    if cmp.identical_rounds() {
        t.push_str("identical at every round\n");
    } else {
        for d in &cmp.rounds {
            if d.only_first.is_empty() && d.only_second.is_empty() {
                let _ = writeln!(t, "round {}: same", d.round);
                continue;
            }
            let _ = write!(t, "round {}:", d.round);
            if !d.only_first.is_empty() {
                let _ = write!(t, " only {}: {};", cmp.first, pairs_text(game, &d.only_first));
            }
            if !d.only_second.is_empty() {
                let _ = write!(t, " only {}: {};", cmp.second, pairs_text(game, &d.only_second));
            }
            t.pop();
            t.push('\n');
        }
    }
    let _ = writeln!(t, "solutions: {}", cmp.solutions.describe());
    let _ = writeln!(
        t,
        "outcomes: {} {} vs {} {}: {}",
        cmp.first,
        outcomes_text(game, &cmp.outcomes_first),
        cmp.second,
        outcomes_text(game, &cmp.outcomes_second),
        cmp.outcomes.describe()
    );
    t
}

#[derive(Serialize)]
struct SolveJson {
    #[serde(flatten)]
    solution: SolutionDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleJson>,
}

#[derive(Serialize)]
struct OracleJson {
    denominator: usize,
    checks: usize,
    disagreements: usize,
    coarse: usize,
}

impl From<OracleAudit> for OracleJson {
    fn from(a: OracleAudit) -> Self {
        OracleJson { denominator: a.denominator, checks: a.checks, disagreements: a.unsound.len(), coarse: a.coarse.len() }
    }
}

#[derive(Serialize)]
struct StrategyRef {
    player: String,
    strategy: String,
}

#[derive(Serialize)]
struct RoundDiffJson {
    round: usize,
    only_first: Vec<StrategyRef>,
    only_second: Vec<StrategyRef>,
}

#[derive(Serialize)]
struct ComparisonJson {
    schema: &'static str,
    game: String,
    first: String,
    second: String,
    identical_rounds: bool,
    rounds: Vec<RoundDiffJson>,
    solutions: &'static str,
    outcomes_first: Vec<String>,
    outcomes_second: Vec<String>,
    outcomes: &'static str,
}

impl ComparisonJson {
    fn new(game: &Game, cmp: &Comparison) -> Self {
        let refs = |pairs: &[(usize, usize)]| {
            pairs
                .iter()
                .map(|&(i, s)| StrategyRef {
                    player: game.player_name(i).to_string(),
                    strategy: game.strategy_name(i, s).to_string(),
                })
                .collect()
        };
        let names = |zs: &[usize]| zs.iter().map(|&z| game.node(z).name.clone()).collect();
        ComparisonJson {
            schema: "forwind.comparison/1",
            game: game.name().to_string(),
            first: cmp.first.clone(),
            second: cmp.second.clone(),
            identical_rounds: cmp.identical_rounds(),
            rounds: cmp
                .rounds
                .iter()
                .map(|d| RoundDiffJson { round: d.round, only_first: refs(&d.only_first), only_second: refs(&d.only_second) })
                .collect(),
            solutions: cmp.solutions.describe(),
            outcomes_first: names(&cmp.outcomes_first),
            outcomes_second: names(&cmp.outcomes_second),
            outcomes: cmp.outcomes.describe(),
        }
    }
}

#[derive(Serialize)]
struct VerdictJson {
    check: String,
    expected: String,
    observed: String,
    value: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct ScenarioJson {
    schema: &'static str,
    scenario: String,
    passed: bool,
    verdicts: Vec<VerdictJson>,
}

impl ScenarioJson {
    fn new(r: &ScenarioReport) -> Self {
        ScenarioJson {
            schema: "forwind.stability/1",
            scenario: r.name.clone(),
            passed: r.passed(),
            verdicts: r
                .verdicts
                .iter()
                .map(|v| VerdictJson {
                    check: v.check.clone(),
                    expected: v.expected.clone(),
                    observed: v.observed.clone(),
                    value: v.value.is_finite().then_some(v.value),
                    pass: v.pass,
                })
                .collect(),
        }
    }
}
