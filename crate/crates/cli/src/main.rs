use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use strategy_templates::adapt::{adapt, AdaptConfig};
use strategy_templates::error::{
    BudgetError, Conflict, ExtractError, GameError, SynthesisError, TemplateError,
};
use strategy_templates::extraction::{
    extract_pure, parse_rational, play, Adversary, BigRational, EvenStrategy, ExactMixed,
    FloatMixed, TableAdversary, UniformAdversary, Weight,
};
use strategy_templates::format::{parse_game, ParseErrorKind, ParsedGame, TemplateFile};
use strategy_templates::verify::monte_carlo::{monte_carlo, run_rng, MonteCarloConfig};
use strategy_templates::verify::{oracle_winning_set, OracleBudget};
use strategy_templates::{
    synthesize, Edge, Objective, ObjectiveKind, StrategyTemplate, VertexId, VertexSet,
};

#[derive(Parser)]
#[command(
    name = "sgt",
    version,
    about = "Permissive strategy templates for stochastic games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Almost-sure winning set of Even.
    Solve {
        game: PathBuf,
        #[command(flatten)]
        objective: ObjectiveArgs,
    },
    /// Winning strategy template and winning set.
    Template {
        game: PathBuf,
        #[command(flatten)]
        objective: ObjectiveArgs,
    },
    /// Strategy extracted from a template, optionally played from a vertex.
    Extract {
        game: PathBuf,
        template: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Pure)]
        mode: Mode,
        #[arg(long, default_value = "1/2")]
        alpha: String,
        #[arg(long, default_value = "2")]
        beta: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Play one transcript from this vertex against a uniform adversary.
        #[arg(long)]
        start: Option<usize>,
        #[arg(long, default_value_t = 20)]
        horizon: usize,
    },
    /// Monte-Carlo statistics of the mixed strategy.
    Simulate {
        game: PathBuf,
        template: PathBuf,
        #[command(flatten)]
        objective: ObjectiveArgs,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `uniform` or `table:<file>` with a JSON list of `[vertex, successor]` pairs.
        #[arg(long, default_value = "uniform")]
        adversary: String,
        #[arg(long, default_value = "1/2")]
        alpha: String,
        #[arg(long, default_value = "2")]
        beta: String,
        /// Keep weights as exact rationals.
        #[arg(long)]
        exact: bool,
    },
    /// Merge two templates.
    Combine {
        first: PathBuf,
        second: PathBuf,
        /// Also check that no winning vertex is left without a permitted edge.
        #[arg(long)]
        game: Option<PathBuf>,
    },
    /// Disable Even edges and check whether the template still wins.
    Adapt {
        game: PathBuf,
        template: PathBuf,
        /// Comma-separated `src:dst` edges.
        #[arg(long, value_delimiter = ',', required = true)]
        disable: Vec<String>,
        #[command(flatten)]
        objective: ObjectiveArgs,
    },
    /// Compare the synthesis winning set with the brute-force oracle.
    Verify {
        game: PathBuf,
        #[command(flatten)]
        objective: ObjectiveArgs,
        #[arg(long, required = true)]
        oracle: bool,
    },
}

#[derive(Args)]
struct ObjectiveArgs {
    #[arg(long, value_parser = parse_kind, default_value = "reach")]
    objective: ObjectiveKind,
    /// Comma-separated target vertex ids; unused for parity.
    #[arg(long, value_delimiter = ',')]
    target: Vec<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pure,
    Param,
}

fn parse_kind(s: &str) -> Result<ObjectiveKind, String> {
    ObjectiveKind::parse(s).ok_or_else(|| format!("unknown objective `{s}`"))
}

enum CliError {
    Io {
        path: PathBuf,
        message: String,
    },
    Parse {
        path: PathBuf,
        line: Option<usize>,
        col: Option<usize>,
        message: String,
    },
    Semantic {
        message: String,
        line: Option<usize>,
        col: Option<usize>,
    },
    Conflict(Conflict),
    Budget(BudgetError),
}

impl CliError {
    fn semantic(message: impl ToString) -> Self {
        CliError::Semantic {
            message: message.to_string(),
            line: None,
            col: None,
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. } => 2,
            CliError::Semantic { .. } => 3,
            CliError::Conflict(_) => 4,
            CliError::Budget(_) => 5,
        }
    }

    fn diagnostic(&self) -> Value {
        match self {
            CliError::Io { path, message } => {
                json!({"error": "io", "path": path, "message": message})
            }
            CliError::Parse {
                path,
                line,
                col,
                message,
            } => {
                json!({"error": "parse", "path": path, "line": line, "col": col, "message": message})
            }
            CliError::Semantic { message, line, col } => {
                json!({"error": "semantic", "line": line, "col": col, "message": message})
            }
            CliError::Conflict(c) => {
                json!({"error": "conflict", "message": c.to_string(), "witness": conflict_witness(c)})
            }
            CliError::Budget(b) => json!({"error": "budget", "message": b.to_string()}),
        }
    }
}

fn conflict_witness(c: &Conflict) -> Value {
    match c {
        Conflict::BlockedLiveGroup { group } => {
            json!({"live_group": group.iter().map(pair).collect::<Vec<_>>()})
        }
        Conflict::TrappedVertex { vertex } => json!({"vertex": vertex.0}),
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        CliError::semantic(e)
    }
}

impl From<TemplateError> for CliError {
    fn from(e: TemplateError) -> Self {
        CliError::semantic(e)
    }
}

impl From<ExtractError> for CliError {
    fn from(e: ExtractError) -> Self {
        CliError::semantic(e)
    }
}

impl From<SynthesisError> for CliError {
    fn from(e: SynthesisError) -> Self {
        CliError::semantic(e)
    }
}

impl From<BudgetError> for CliError {
    fn from(e: BudgetError) -> Self {
        CliError::Budget(e)
    }
}

fn pair(e: &Edge) -> [usize; 2] {
    [e.src.0, e.dst.0]
}

fn ids(set: &VertexSet) -> Vec<usize> {
    set.iter().map(|v| v.0).collect()
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn load_game(path: &Path) -> Result<ParsedGame, CliError> {
    let text = read(path)?;
    parse_game(&text).map_err(|e| match e.kind {
        ParseErrorKind::Syntax => CliError::Parse {
            path: path.to_path_buf(),
            line: Some(e.line),
            col: Some(e.col),
            message: e.message,
        },
        ParseErrorKind::Semantic => CliError::Semantic {
            message: e.message,
            line: Some(e.line),
            col: Some(e.col),
        },
    })
}

fn load_template(path: &Path) -> Result<TemplateFile, CliError> {
    let text = read(path)?;
    TemplateFile::from_json(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: Some(e.line()),
        col: Some(e.column()),
        message: e.to_string(),
    })
}

/// Template checked against the game, with its stored winning set.
fn template_for(
    parsed: &ParsedGame,
    file: &TemplateFile,
) -> Result<(StrategyTemplate, Option<VertexSet>), CliError> {
    let t = file.template();
    t.validate(&parsed.game)?;
    let winning = file.winning(&parsed.game).transpose()?;
    Ok((t, winning))
}

fn objective(parsed: &ParsedGame, args: &ObjectiveArgs) -> Result<Objective, CliError> {
    let n = parsed.game.num_vertices();
    if let Some(&bad) = args.target.iter().find(|&&v| v >= n) {
        return Err(GameError::VertexOutOfRange(VertexId(bad)).into());
    }
    let target = parsed.game.set_of(args.target.iter().map(|&v| VertexId(v)));
    Ok(args.objective.with(target, &parsed.priorities))
}

fn rational(name: &str, s: &str) -> Result<BigRational, CliError> {
    parse_rational(s)
        .ok_or_else(|| CliError::semantic(format!("{name} `{s}` is not a rational number")))
}

fn parse_edge(s: &str) -> Result<Edge, CliError> {
    let bad = || CliError::semantic(format!("`{s}` is not an edge of the form src:dst"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    Ok(Edge::new(a, b))
}

fn load_adversary(spec: &str, parsed: &ParsedGame) -> Result<Box<dyn Adversary>, CliError> {
    if spec == "uniform" {
        return Ok(Box::new(UniformAdversary));
    }
    let Some(path) = spec.strip_prefix("table:") else {
        return Err(CliError::semantic(format!("unknown adversary `{spec}`")));
    };
    let path = Path::new(path);
    let pairs: Vec<[usize; 2]> =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: Some(e.line()),
            col: Some(e.column()),
            message: e.to_string(),
        })?;
    let g = &parsed.game;
    let mut choice = vec![None; g.num_vertices()];
    for [v, w] in pairs {
        if v >= g.num_vertices() || !g.has_edge(VertexId(v), VertexId(w)) {
            return Err(CliError::semantic(format!(
                "adversary move {v}:{w} is not an edge of the game"
            )));
        }
        choice[v] = Some(VertexId(w));
    }
    Ok(Box::new(TableAdversary { choice }))
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Solve {
            game,
            objective: args,
        } => {
            let parsed = load_game(&game)?;
            let obj = objective(&parsed, &args)?;
            let res = synthesize(&parsed.game, &obj)?;
            Ok(
                json!({"objective": args.objective.name(), "winning_set": ids(&res.winning_set)})
                    .to_string(),
            )
        }
        Command::Template {
            game,
            objective: args,
        } => {
            let parsed = load_game(&game)?;
            let obj = objective(&parsed, &args)?;
            let res = synthesize(&parsed.game, &obj)?;
            Ok(TemplateFile::from_template(&res.template, Some(&res.winning_set)).to_json())
        }
        Command::Extract {
            game,
            template,
            mode,
            alpha,
            beta,
            seed,
            start,
            horizon,
        } => {
            let parsed = load_game(&game)?;
            let (t, winning) = template_for(&parsed, &load_template(&template)?)?;
            let g = &parsed.game;
            let winning = winning.unwrap_or_else(|| g.full_set());
            if let Some(s) = start {
                if s >= g.num_vertices() {
                    return Err(GameError::VertexOutOfRange(VertexId(s)).into());
                }
            }
            let mut out = String::new();
            let mut strategy: Box<dyn EvenStrategy> = match mode {
                Mode::Pure => {
                    let pure = extract_pure(g, &t, &winning)?;
                    out.push_str(&pure.describe(g));
                    Box::new(pure) as Box<dyn EvenStrategy>
                }
                Mode::Param => {
                    let mixed = ExactMixed::new(
                        g,
                        &t,
                        rational("alpha", &alpha)?,
                        rational("beta", &beta)?,
                    )?;
                    out.push_str(&describe_mixed(g, &mixed));
                    Box::new(mixed)
                }
            };
            if let Some(s) = start {
                let mut rng = run_rng(seed, 0);
                let tr = play(
                    g,
                    strategy.as_mut(),
                    &mut UniformAdversary,
                    VertexId(s),
                    horizon,
                    &mut rng,
                );
                out.push_str(&format!("transcript seed {seed} start {s}\n"));
                out.push_str(&tr.dump());
            }
            Ok(out.trim_end().to_string())
        }
        Command::Simulate {
            game,
            template,
            objective: args,
            runs,
            horizon,
            seed,
            adversary,
            alpha,
            beta,
            exact,
        } => {
            let parsed = load_game(&game)?;
            let (t, winning) = template_for(&parsed, &load_template(&template)?)?;
            let g = &parsed.game;
            let obj = objective(&parsed, &args)?;
            let starts = winning.unwrap_or_else(|| g.full_set()).to_vec();
            if starts.is_empty() {
                return Err(CliError::semantic("the template has an empty winning set"));
            }
            let config = MonteCarloConfig {
                runs,
                horizon: horizon.unwrap_or(10 * g.num_vertices()),
                seed,
            };
            let mut adv = load_adversary(&adversary, &parsed)?;
            let (a, b) = (rational("alpha", &alpha)?, rational("beta", &beta)?);
            let stats = if exact {
                let mut m = ExactMixed::new(g, &t, a, b)?;
                monte_carlo(g, &mut m, adv.as_mut(), &obj, &t, &starts, config)
            } else {
                let mut m = FloatMixed::new(g, &t, Weight::to_f64(&a), Weight::to_f64(&b))?;
                monte_carlo(g, &mut m, adv.as_mut(), &obj, &t, &starts, config)
            };
            Ok(stats.report().trim_end().to_string())
        }
        Command::Combine {
            first,
            second,
            game,
        } => {
            let a = load_template(&first)?;
            let b = load_template(&second)?;
            let merged = match game {
                Some(path) => {
                    let parsed = load_game(&path)?;
                    let (ta, wa) = template_for(&parsed, &a)?;
                    let (tb, wb) = template_for(&parsed, &b)?;
                    let winning = match (wa, wb) {
                        (Some(x), Some(y)) => x.intersection(&y),
                        (Some(x), None) | (None, Some(x)) => x,
                        (None, None) => parsed.game.full_set(),
                    };
                    let merged = ta
                        .combine_in(&tb, &parsed.game, &winning)
                        .map_err(CliError::Conflict)?;
                    TemplateFile::from_template(&merged, Some(&winning))
                }
                None => {
                    let merged = a
                        .template()
                        .combine(&b.template())
                        .map_err(CliError::Conflict)?;
                    TemplateFile::from_template(&merged, None)
                }
            };
            Ok(merged.to_json())
        }
        Command::Adapt {
            game,
            template,
            disable,
            objective: args,
        } => {
            let parsed = load_game(&game)?;
            let (t, winning) = template_for(&parsed, &load_template(&template)?)?;
            let g = &parsed.game;
            let obj = objective(&parsed, &args)?;
            let winning = match winning {
                Some(w) => w,
                None => synthesize(g, &obj)?.winning_set,
            };
            let disabled = disable
                .iter()
                .map(|s| parse_edge(s))
                .collect::<Result<Vec<_>, _>>()?;
            let report = adapt(g, &obj, &t, &winning, &disabled, AdaptConfig::default()).map_err(
                |e| match e {
                    strategy_templates::adapt::AdaptError::Budget(b) => CliError::Budget(b),
                    other => CliError::semantic(other),
                },
            )?;
            let out = json!({
                "disabled": report.disabled.iter().map(pair).collect::<Vec<_>>(),
                "preserved": report.preserved(),
                "critical": report.critical(&winning),
                "diagnosis": report.diagnosis(),
                "conflict": report.conflict.as_ref().map(|c| json!({"message": c.to_string(), "witness": conflict_witness(c)})),
                "combined": report.combined.as_ref().map(|t| serde_json::to_value(TemplateFile::from_template(t, Some(&winning))).expect("serializable")),
                "pure_dead_ends": report.pure_dead_ends.iter().map(|v| v.0).collect::<Vec<_>>(),
                "fresh_winning_set": report.fresh_winning.as_ref().map(ids),
                "adapt_micros": report.adapt_time.as_secs_f64() * 1e6,
                "fresh_micros": report.fresh_time.as_secs_f64() * 1e6,
            });
            let text = serde_json::to_string_pretty(&out).expect("serializable");
            match report.conflict {
                Some(c) => {
                    println!("{text}");
                    Err(CliError::Conflict(c))
                }
                None => Ok(text),
            }
        }
        Command::Verify {
            game,
            objective: args,
            ..
        } => {
            let parsed = load_game(&game)?;
            let obj = objective(&parsed, &args)?;
            let synth = synthesize(&parsed.game, &obj)?.winning_set;
            let oracle = oracle_winning_set(&parsed.game, &obj, OracleBudget::default())?;
            Ok(json!({
                "objective": args.objective.name(),
                "winning_set": ids(&synth),
                "oracle_winning_set": ids(&oracle),
                "agree": synth == oracle,
            })
            .to_string())
        }
    }
}

fn describe_mixed(g: &strategy_templates::StochasticGame, m: &ExactMixed) -> String {
    let mut out = String::new();
    for v in g
        .vertices()
        .filter(|&v| g.owner(v) == strategy_templates::Owner::Even)
    {
        let parts: Vec<String> = m
            .allowed(v)
            .iter()
            .map(|&w| format!("{w}:{}", m.exact_probability(v, w)))
            .collect();
        out.push_str(&format!("{v}: [{}]\n", parts.join(" ")));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.code())
        }
    }
}
