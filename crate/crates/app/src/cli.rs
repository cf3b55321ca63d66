//! Command line front end. Every subcommand loads its inputs, calls one
//! function from [`crate::commands`] and prints the resulting lines.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use shg::alpha::{Forest, ForestParams};
use shg::patterns::{parse_rules, Query, Rule};
use shg::{Hyperedge, Store};

use crate::commands::{self as cmd, read_input};
use crate::config::{Config, Overrides, STORE_ENV};
use crate::service::{self, AppState};
use crate::sessions::SessionBook;

#[derive(Parser, Debug)]
#[command(name = "shg", version, about = "Semantic hypergraph toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// Store file (SHG_STORE overrides).
    #[arg(long, global = true)]
    pub store: Option<PathBuf>,
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Feature set: F3, F5 or a comma-separated list.
    #[arg(long, global = true)]
    pub features: Option<String>,
    /// Rule file (repeatable).
    #[arg(long, global = true)]
    pub rules: Vec<PathBuf>,
    /// Coreference probability threshold.
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Coreference degree-ratio threshold.
    #[arg(long = "theta-prime", global = true)]
    pub theta_prime: Option<f64>,
    /// Service port.
    #[arg(long, global = true)]
    pub port: Option<u16>,
    /// Seed for training and random candidate selection.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Train the token classifier from labeled JSON Lines.
    TrainAlpha {
        /// Labeled sentences, one JSON object per line.
        #[arg(long)]
        input: PathBuf,
        /// Where to write the trained forest.
        #[arg(long)]
        out: PathBuf,
        /// Held-out labeled sentences to report accuracy on.
        #[arg(long)]
        test: Option<PathBuf>,
        /// Number of trees.
        #[arg(long, default_value_t = 100)]
        trees: usize,
        /// Depth limit per tree; unlimited when omitted.
        #[arg(long)]
        max_depth: Option<usize>,
        /// Train every tree on the full set instead of a bootstrap sample.
        #[arg(long)]
        no_bootstrap: bool,
    },
    /// Parse annotated sentences into hyperedges, one per line.
    Parse {
        /// Annotated sentences, one JSON object per line.
        #[arg(long)]
        input: PathBuf,
        /// Trained forest; the configured one when omitted.
        #[arg(long)]
        forest: Option<PathBuf>,
        /// Also print lemma edges.
        #[arg(long)]
        lemmas: bool,
    },
    /// Add edges (notation lines) or parsed sentences to the store.
    Add {
        files: Vec<PathBuf>,
        /// Inputs are annotated sentences to parse first.
        #[arg(long)]
        sentences: bool,
        /// Trained forest used with --sentences.
        #[arg(long)]
        forest: Option<PathBuf>,
    },
    /// Print edges matching a pattern, with their bindings.
    Match {
        pattern: String,
        #[command(flatten)]
        src: Source,
    },
    /// Apply rule files and print the produced edges.
    Rules {
        #[command(flatten)]
        src: Source,
    },
    /// Open information extraction tuples.
    Oie {
        #[command(flatten)]
        src: Source,
        /// Tab-separated output instead of JSON lines.
        #[arg(long)]
        tsv: bool,
    },
    /// Claims as JSON lines.
    Claims {
        #[command(flatten)]
        src: Source,
    },
    /// Conflicts as JSON lines.
    Conflicts {
        #[command(flatten)]
        src: Source,
    },
    /// Coreference reports as JSON lines.
    Coref {
        /// Seed concept; all seeds when omitted.
        concept: Option<String>,
        #[command(flatten)]
        src: Source,
    },
    /// Degree, deep degree and neighborhood as JSON lines.
    Metrics {
        /// Report only this edge.
        #[arg(long)]
        edge: Option<String>,
        #[command(flatten)]
        src: Source,
    },
    /// Frequent abstract patterns.
    Mine {
        /// Print only this many patterns.
        #[arg(long)]
        top: Option<usize>,
        /// Deepest nesting kept in a pattern.
        #[arg(long)]
        max_depth: Option<usize>,
        #[command(flatten)]
        src: Source,
    },
    /// Split the conflict network into two factions.
    Factions {
        /// Write the network as a Graphviz file.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        src: Source,
    },
    /// Run the HTTP service.
    Serve {
        /// Bind address.
        #[arg(long)]
        bind: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct Source {
    /// Read edges from this file instead of the store.
    #[arg(long)]
    input: Option<PathBuf>,
}

fn overrides(g: &GlobalArgs) -> Overrides {
    Overrides {
        store: g.store.clone(),
        features: g.features.clone(),
        rules: g.rules.clone(),
        theta: g.theta,
        theta_prime: g.theta_prime,
        port: g.port,
        seed: g.seed,
        ..Default::default()
    }
}

fn load_store(cfg: &Config, src: Option<&Source>) -> Result<Store> {
    if let Some(p) = src.and_then(|s| s.input.as_ref()) {
        return read_input(p).with_context(|| format!("reading {}", p.display()));
    }
    match &cfg.store {
        Some(p) if p.exists() => Store::load(p).with_context(|| format!("loading {}", p.display())),
        Some(_) => Ok(Store::new()),
        None => bail!("no store: pass --store, --input or set {STORE_ENV}"),
    }
}

fn load_forest(cfg: &Config, flag: Option<&Path>) -> Result<Forest> {
    let p = flag
        .or(cfg.forest.as_deref())
        .ok_or_else(|| anyhow!("no forest: pass --forest or set it in the config"))?;
    Forest::load(p).with_context(|| format!("loading {}", p.display()))
}

fn load_rules(cfg: &Config) -> Result<Vec<Rule>> {
    if cfg.rules.is_empty() {
        bail!("no rule files: pass --rules");
    }
    let mut out = Vec::new();
    for p in &cfg.rules {
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        out.extend(parse_rules(&text).with_context(|| p.display().to_string())?);
    }
    Ok(out)
}

fn edge_arg(s: &str) -> Result<Hyperedge> {
    s.parse().map_err(|e| anyhow!("malformed edge {s:?}: {e}"))
}

fn print_lines(out: &mut dyn Write, lines: impl IntoIterator<Item = String>) -> Result<()> {
    for l in lines {
        writeln!(out, "{l}")?;
    }
    Ok(())
}

/// Runs a parsed command line against an already resolved environment.
pub fn dispatch(cli: Cli, env_store: Option<PathBuf>, out: &mut dyn Write) -> Result<()> {
    let mut o = overrides(&cli.global);
    if let Command::Serve { bind } = &cli.command {
        o.bind = bind.clone();
    }
    let cfg = Config::resolve(cli.global.config.as_deref(), o, env_store)?;
    match cli.command {
        Command::TrainAlpha { input, out: path, test, trees, max_depth, no_bootstrap } => {
            let train = cmd::read_sentences(&input)?;
            let test = test.map(|t| cmd::read_sentences(&t)).transpose()?;
            let params = ForestParams { trees, max_depth, bootstrap: !no_bootstrap, seed: cfg.seed, ..Default::default() };
            let r = cmd::train_alpha(&train, test.as_deref(), &cfg.feature_set()?, &params)?;
            r.forest.save(&path).with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "trees\t{}", r.forest.tree_count())?;
            writeln!(out, "train_accuracy\t{:.4}", r.train_accuracy)?;
            if let Some(a) = r.test_accuracy {
                writeln!(out, "test_accuracy\t{a:.4}")?;
            }
        }
        Command::Parse { input, forest, lemmas } => {
            let forest = load_forest(&cfg, forest.as_deref())?;
            let parses = cmd::parse_all(&cmd::read_sentences(&input)?, &forest, &cfg.roles)?;
            for p in parses {
                writeln!(out, "{}", p.edge)?;
                if lemmas {
                    print_lines(out, p.lemma_edges.iter().map(|e| e.to_string()))?;
                }
            }
        }
        Command::Add { files, sentences, forest } => {
            let path = cfg.store.clone().ok_or_else(|| anyhow!("add needs --store or {STORE_ENV}"))?;
            let mut store = load_store(&cfg, None)?;
            let before = store.len();
            let mut added = 0usize;
            if sentences {
                let forest = load_forest(&cfg, forest.as_deref())?;
                for f in &files {
                    for p in cmd::parse_all(&cmd::read_sentences(f)?, &forest, &cfg.roles)? {
                        cmd::add_parse(&mut store, &p);
                        added += 1;
                    }
                }
            } else if files.is_empty() {
                for e in cmd::read_edges_from(std::io::stdin().lock())? {
                    store.add(e);
                    added += 1;
                }
            } else {
                for f in &files {
                    let text = std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
                    for e in cmd::read_edges(&text).with_context(|| f.display().to_string())? {
                        store.add(e);
                        added += 1;
                    }
                }
            }
            store.save(&path)?;
            writeln!(out, "added\t{added}\nnew\t{}\ntotal\t{}", store.len() - before, store.len())?;
        }
        Command::Match { pattern, src } => {
            let q: Query = pattern.parse().map_err(|e| anyhow!("malformed pattern: {e}"))?;
            print_lines(out, cmd::match_lines(&load_store(&cfg, Some(&src))?, &q))?;
        }
        Command::Rules { src } => {
            let rules = load_rules(&cfg)?;
            let store = load_store(&cfg, Some(&src))?;
            print_lines(out, cmd::rule_outputs(&store, &rules)?.iter().map(|e| e.to_string()))?;
        }
        Command::Oie { src, tsv } => print_lines(out, cmd::oie_lines(&load_store(&cfg, Some(&src))?, tsv))?,
        Command::Claims { src } => {
            print_lines(out, cmd::claim_lines(&load_store(&cfg, Some(&src))?, &cfg.lemma_sets))?
        }
        Command::Conflicts { src } => {
            print_lines(out, cmd::conflict_lines(&load_store(&cfg, Some(&src))?, &cfg.lemma_sets))?
        }
        Command::Coref { concept, src } => {
            let seed = concept.as_deref().map(edge_arg).transpose()?;
            let store = load_store(&cfg, Some(&src))?;
            for r in cmd::coref_reports(&store, seed.as_ref(), &cfg.coref)? {
                writeln!(out, "{}", serde_json::to_string(&r)?)?;
            }
        }
        Command::Metrics { edge, src } => {
            let store = load_store(&cfg, Some(&src))?;
            let edges = match edge {
                Some(e) => vec![edge_arg(&e)?],
                None => store.all_edges(),
            };
            for e in edges {
                writeln!(out, "{}", cmd::metrics_json(&store, &e))?;
            }
        }
        Command::Mine { top, max_depth, src } => {
            let mut mcfg = cfg.mining.clone();
            if let Some(d) = max_depth {
                mcfg.max_depth = d;
            }
            print_lines(out, cmd::mine_lines(&load_store(&cfg, Some(&src))?, &mcfg, top))?;
        }
        Command::Factions { dot, src } => {
            let store = load_store(&cfg, Some(&src))?;
            let (net, f) = cmd::factions(&store, &cfg.lemma_sets)?;
            if let Some(p) = dot {
                std::fs::write(&p, net.to_dot(Some(&f))).with_context(|| format!("writing {}", p.display()))?;
            }
            print_lines(out, cmd::faction_lines(&f))?;
        }
        Command::Serve { .. } => {
            let store = load_store(&cfg, None)?;
            let book = match cfg.sessions_path() {
                Some(p) => SessionBook::open(p)?,
                None => SessionBook::new(),
            };
            let state = AppState::new(store, cfg, book);
            tokio::runtime::Runtime::new()?.block_on(service::serve(state))?;
        }
    }
    Ok(())
}

/// Parses `args` and runs; returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    let env_store = std::env::var_os(STORE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    match dispatch(cli, env_store, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}
