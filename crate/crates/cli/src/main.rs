use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use rodtree::cart::{self, LeafBudget, TreeParams};
use rodtree::sampling::{BalanceMethod, Strategy};
use rodtree::synth::{self, GeneratorConfig};
use rodtree::{rfe, Dataset, FeatureSchema, Tree};
use rodtree_cli::experiment::{self, Experiment};
use rodtree_cli::settings::{GlobalFlags, Settings, UsageError};
use rodtree_cli::{ask, figures};

#[derive(Parser, Debug)]
#[command(
    name = "rodtree",
    version,
    about = "Small decision trees for imbalanced recidivism data"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Base seed for splitting, balancing and generation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat key=value file; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Balance the whole dataset before the train/test split.
    #[arg(long, global = true)]
    paper_faithful: bool,
    /// under, over, or a comma list.
    #[arg(long, global = true)]
    balance: Option<String>,
    #[arg(long, global = true)]
    train_frac: Option<f64>,
    /// Comma list of leaf budgets; "unbounded" for no limit.
    #[arg(long, global = true)]
    max_leaf_nodes: Option<String>,
    /// Comma list of feature codes.
    #[arg(long, global = true)]
    features: Option<String>,
    #[arg(long, global = true)]
    repeats: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic dataset.
    Synth {
        #[arg(long)]
        n: Option<usize>,
        /// Target positive prior; anything but the default is calibrated.
        #[arg(long)]
        prior: Option<f64>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Train one tree and save it as a model document.
    Train {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(short = 'o', long)]
        model: Option<PathBuf>,
        /// Split the input first and write the test part here.
        #[arg(long)]
        holdout: Option<PathBuf>,
    },
    /// Evaluate a saved model on a CSV.
    Eval {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Also write the metrics as a CSV row.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run feature elimination for every budget and seed.
    Rfe {
        /// Dataset CSV; the default synthetic set when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Pivot a ledger into figure data and a gnuplot script.
    Sweep {
        #[arg(long)]
        ledger: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Write a saved model as Graphviz DOT.
    ExportDot {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Walk a saved model as a questionnaire.
    Ask {
        #[arg(long)]
        model: Option<PathBuf>,
        /// Scripted answers, e.g. PP=1,PC=2.
        #[arg(long)]
        answers: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = cli.global;
    let flags = GlobalFlags {
        seed: g.seed,
        config: g.config,
        out: g.out,
        paper_faithful: g.paper_faithful,
        balance: g.balance,
        train_frac: g.train_frac,
        max_leaf_nodes: g.max_leaf_nodes,
        features: g.features,
        repeats: g.repeats,
    };
    let s = Settings::resolve(&flags)?;
    match cli.command {
        Command::Synth { n, prior, output } => cmd_synth(&s, n, prior, output),
        Command::Train {
            input,
            model,
            holdout,
        } => cmd_train(&s, input, model, holdout),
        Command::Eval { model, input, csv } => cmd_eval(&s, model, input, csv),
        Command::Rfe { input } => cmd_rfe(&s, input),
        Command::Sweep { ledger, input } => cmd_sweep(&s, ledger, input),
        Command::ExportDot { model, output } => cmd_export_dot(&s, model, output),
        Command::Ask { model, answers } => cmd_ask(&s, model, answers),
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn path_option(s: &Settings, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
    s.option(flag.map(|p| p.display().to_string()), key)
        .map(PathBuf::from)
}

fn required_path(s: &Settings, flag: Option<PathBuf>, key: &str) -> Result<PathBuf> {
    path_option(s, flag, key).ok_or_else(|| usage(format!("--{key} is required")))
}

fn parsed_option<T: std::str::FromStr>(
    s: &Settings,
    flag: Option<T>,
    key: &str,
) -> Result<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => match s.file.get(key) {
            None => Ok(None),
            Some(text) => text
                .parse()
                .map(Some)
                .map_err(|_| usage(format!("config {key}={text:?} is invalid"))),
        },
    }
}

/// Relative paths without a directory part land in `--out`.
fn in_out_dir(s: &Settings, p: PathBuf) -> PathBuf {
    if p.is_absolute() || p.parent().is_some_and(|d| !d.as_os_str().is_empty()) {
        p
    } else {
        s.out.join(p)
    }
}

/// Writes through a temporary sibling and renames it into place.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

fn load_tree(path: &Path) -> Result<Tree> {
    let doc = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    cart::deserialize(&doc).with_context(|| format!("loading model {}", path.display()))
}

fn synthetic(seed: u64) -> Result<Dataset> {
    Ok(synth::generate(&GeneratorConfig::with_seed(seed))?)
}

fn load_input(s: &Settings, input: Option<PathBuf>) -> Result<Dataset> {
    let data = match path_option(s, input, "input") {
        Some(p) => Dataset::load_csv(&p, &FeatureSchema::rod())
            .with_context(|| format!("loading {}", p.display()))?,
        None => {
            eprintln!(
                "no --input; using the default synthetic dataset (seed {})",
                s.seed
            );
            synthetic(s.seed)?
        }
    };
    match &s.features {
        None => Ok(data),
        Some(_) => {
            let idx = s.feature_indices(&data.schema)?;
            Ok(data.project(&idx)?)
        }
    }
}

fn cmd_synth(
    s: &Settings,
    n: Option<usize>,
    prior: Option<f64>,
    output: Option<PathBuf>,
) -> Result<()> {
    let mut cfg = GeneratorConfig::with_seed(s.seed);
    if let Some(n) = parsed_option(s, n, "n")? {
        if n == 0 {
            return Err(usage("--n must be at least 1"));
        }
        cfg.n = n;
    }
    if let Some(p) = parsed_option(s, prior, "prior")? {
        if !(p > 0.0 && p < 1.0) {
            return Err(usage(format!("--prior {p} must be in (0, 1)")));
        }
        cfg.target_prior = p;
        if p != synth::DEFAULT_PRIOR {
            let b = synth::calibrate_intercept(&mut cfg, 1e-5, 100)?;
            eprintln!("calibrated intercept {b}");
        }
    }
    let output = in_out_dir(
        s,
        path_option(s, output, "output").unwrap_or_else(|| PathBuf::from("rod.csv")),
    );
    let data = synth::generate(&cfg)?;
    let mut buf = Vec::new();
    data.write_csv(&mut buf)?;
    write_atomic(&output, &buf)?;
    let mut sidecar = output.clone().into_os_string();
    sidecar.push(".provenance.txt");
    write_atomic(
        Path::new(&sidecar),
        format!("{}\n", data.provenance).as_bytes(),
    )?;
    let (n0, n1) = data.class_counts()?;
    eprintln!(
        "wrote {} records (n0={n0}, n1={n1}) to {}",
        data.len(),
        output.display()
    );
    Ok(())
}

fn cmd_train(
    s: &Settings,
    input: Option<PathBuf>,
    model: Option<PathBuf>,
    holdout: Option<PathBuf>,
) -> Result<()> {
    let input = required_path(s, input, "input")?;
    let data = Dataset::load_csv(&input, &FeatureSchema::rod())
        .with_context(|| format!("loading {}", input.display()))?;
    let features = s.feature_indices(&data.schema)?;
    let budget = s.single_budget(LeafBudget::Unbounded)?;
    let method = BalanceMethod::new(s.single_balance(Strategy::Over)?, s.seed);
    let params = TreeParams {
        max_leaf_nodes: budget,
        ..TreeParams::default()
    };

    let train = match path_option(s, holdout, "holdout") {
        Some(path) => {
            let (train, test) = if s.paper_faithful {
                method
                    .apply(&data)?
                    .train_test_split(s.train_frac, s.seed)?
            } else {
                let (train, test) = data.train_test_split(s.train_frac, s.seed)?;
                (method.apply(&train)?, test)
            };
            let path = in_out_dir(s, path);
            let mut buf = Vec::new();
            test.write_csv(&mut buf)?;
            write_atomic(&path, &buf)?;
            eprintln!("held out {} records in {}", test.len(), path.display());
            train
        }
        None => method.apply(&data)?,
    };
    eprintln!("training on {} records", train.len());
    let tree = cart::grow::<f64>(&train, &features, params)?;
    let model = in_out_dir(
        s,
        path_option(s, model, "model").unwrap_or_else(|| PathBuf::from("model.json")),
    );
    write_atomic(&model, cart::serialize(&tree).as_bytes())?;
    let size = tree.size();
    println!(
        "model {}: {} nodes, {} leaves, depth {}",
        model.display(),
        size.total_nodes,
        size.leaf_count,
        tree.depth()
    );
    Ok(())
}

fn cmd_eval(
    s: &Settings,
    model: Option<PathBuf>,
    input: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> Result<()> {
    let tree = load_tree(&required_path(s, model, "model")?)?;
    let input = required_path(s, input, "input")?;
    let test = Dataset::load_csv(&input, &tree.schema)
        .with_context(|| format!("loading {}", input.display()))?;
    let report = rfe::evaluate(&tree, &test)?;
    println!("{report}");
    if let Some(path) = path_option(s, csv, "csv") {
        let text = format!(
            "{}\n{}\n",
            rodtree::MetricsReport::CSV_HEADER,
            report.csv_row()
        );
        write_atomic(&in_out_dir(s, path), text.as_bytes())?;
    }
    Ok(())
}

fn experiment(s: &Settings, default_balances: Vec<Strategy>) -> Experiment {
    Experiment {
        balances: s.balance.clone().unwrap_or(default_balances),
        budgets: s.budgets.clone(),
        train_frac: s.train_frac,
        seed: s.seed,
        repeats: s.repeats,
        paper_faithful: s.paper_faithful,
    }
}

/// Runs the sweep and writes the ledger, trees, per-cell ledgers and
/// rankings into `--out`. Returns the ledger rows.
fn run_and_write(
    s: &Settings,
    exp: &Experiment,
    data: &Dataset,
) -> Result<Vec<experiment::LedgerRow>> {
    let results = exp.run(data)?;
    for r in &results {
        eprintln!(
            "balance={} max_leaf_nodes={} seed={}: trained on {} records, tested on {}",
            r.cell.balance, r.cell.budget, r.cell.seed, r.train_records, r.test_records
        );
        for (name, text) in experiment::cell_ledgers(std::slice::from_ref(r)) {
            write_atomic(&s.out.join("cells").join(name), text.as_bytes())?;
        }
    }
    for (name, text) in experiment::dot_files(&results) {
        write_atomic(&s.out.join("trees").join(name), text.as_bytes())?;
    }
    let rows = experiment::ledger_rows(&results);
    write_atomic(
        &s.out.join("ledger.csv"),
        experiment::ledger_csv(&rows).as_bytes(),
    )?;
    let report = experiment::rankings(&results)?;
    write_atomic(&s.out.join("rankings.txt"), report.to_string().as_bytes())?;
    print!("{report}");
    eprintln!(
        "wrote {} ledger rows to {}",
        rows.len(),
        s.out.join("ledger.csv").display()
    );
    Ok(rows)
}

fn cmd_rfe(s: &Settings, input: Option<PathBuf>) -> Result<()> {
    let data = load_input(s, input)?;
    run_and_write(s, &experiment(s, vec![Strategy::Over]), &data)?;
    Ok(())
}

fn cmd_sweep(s: &Settings, ledger: Option<PathBuf>, input: Option<PathBuf>) -> Result<()> {
    let rows = match path_option(s, ledger, "ledger") {
        Some(path) => {
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            experiment::parse_ledger(&text)?
        }
        None => {
            let data = load_input(s, input)?;
            run_and_write(s, &experiment(s, Strategy::ALL.to_vec()), &data)?
        }
    };
    let files = figures::figure_files(&rows)?;
    for f in &files {
        write_atomic(&s.out.join(&f.name), f.contents.as_bytes())?;
    }
    eprintln!(
        "wrote {} figure files to {}; render with: gnuplot fig1.gp",
        files.len(),
        s.out.display()
    );
    Ok(())
}

fn cmd_export_dot(s: &Settings, model: Option<PathBuf>, output: Option<PathBuf>) -> Result<()> {
    let tree = load_tree(&required_path(s, model, "model")?)?;
    let dot = cart::export_dot(&tree);
    match path_option(s, output, "output") {
        Some(path) => {
            let path = in_out_dir(s, path);
            write_atomic(&path, dot.as_bytes())?;
            eprintln!(
                "render with: dot -Tpng {} -o {}",
                path.display(),
                path.with_extension("png").display()
            );
        }
        None => io::stdout().write_all(dot.as_bytes())?,
    }
    Ok(())
}

fn cmd_ask(s: &Settings, model: Option<PathBuf>, answers: Option<String>) -> Result<()> {
    let tree = load_tree(&required_path(s, model, "model")?)?;
    let scripted = s
        .option(answers, "answers")
        .map(|a| ask::parse_answers(&tree, &a))
        .transpose()
        .map_err(|e| usage(format!("--answers: {e:#}")))?;
    let stdin = io::stdin();
    let input: Box<dyn BufRead> = Box::new(stdin.lock());
    let mut out = io::stdout().lock();
    ask::run(&tree, scripted.as_ref(), input, &mut out).map_err(|e| anyhow!("{e:#}"))?;
    Ok(())
}
