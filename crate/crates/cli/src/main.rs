use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use advaug::augment::{AugmentationConfig, Augmenter, Strategy, SynonymLexicon};
use advaug::corpus::{
    load_conllu, load_dataset, save_dataset, split_train_valid, DEFAULT_VALID_FRACTION,
};
use advaug::curriculum::{build_schedule, compare_strategies, TrainConfig};
use advaug::fsutil;
use advaug::tagger::{train_with, TrainOptions, DEFAULT_LOOKUP_MIN_COUNT};
use advaug::{tokenize, Dataset, Format, Schema, TaggerModel, Tagset};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "advaug",
    version,
    about = "Rule-based text augmentation by adverb deletion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train an averaged-perceptron POS tagger on a CoNLL-U corpus.
    TrainTagger(TrainTaggerArgs),
    /// Tag raw sentences, one per line.
    Tag(TagArgs),
    /// Augment a labelled dataset.
    Augment(AugmentArgs),
    /// Report tagger token accuracy on a CoNLL-U corpus.
    Eval(EvalArgs),
    /// Train and evaluate a classifier per augmentation strategy.
    Compare(CompareArgs),
}

#[derive(Args)]
struct TrainTaggerArgs {
    /// Training corpus (CoNLL-U).
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the model.
    #[arg(long)]
    out: PathBuf,
    /// Held-out corpus for reporting token accuracy.
    #[arg(long)]
    dev: Option<PathBuf>,
    /// Occurrences before an unambiguous word goes into the lookup table (0 disables it).
    #[arg(long, default_value_t = DEFAULT_LOOKUP_MIN_COUNT)]
    lookup_min_count: usize,
}

#[derive(Args)]
struct TagArgs {
    #[arg(long)]
    model: PathBuf,
    /// Text file with one sentence per line.
    #[arg(long = "in")]
    input: PathBuf,
    /// Write CoNLL-U here instead of printing word/TAG lines.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    /// Gold-tagged corpus (CoNLL-U).
    #[arg(long)]
    corpus: PathBuf,
}

#[derive(Args)]
struct DatasetArgs {
    #[arg(long, default_value = "jsonl", value_parser = ["jsonl", "csv", "tsv"])]
    format: String,
    #[arg(long, default_value = "single", value_parser = ["single", "pair"])]
    schema: String,
    /// Number of label classes.
    #[arg(long, default_value_t = 2)]
    classes: usize,
}

#[derive(Args)]
struct AugmentFlags {
    /// Tagger model (required by adverb_delete).
    #[arg(long)]
    model: Option<PathBuf>,
    /// Synonym lexicon TSV (required by eda and softeda).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Label smoothing mass for softeda.
    #[arg(long, default_value_t = advaug::augment::DEFAULT_SOFTEDA_ALPHA)]
    alpha: f64,
    /// Per-operation change rate for eda and softeda.
    #[arg(long, default_value_t = advaug::augment::DEFAULT_EDA_ALPHA)]
    eda_alpha: f64,
    /// Upper bound on punctuation marks per token for aeda.
    #[arg(long, default_value_t = advaug::augment::DEFAULT_AEDA_RATIO)]
    aeda_ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Augmented copies per example.
    #[arg(long, default_value_t = 1)]
    n_aug: usize,
    /// Keep "not", "n't" and "never" when deleting adverbs.
    #[arg(long)]
    preserve_negation: bool,
}

#[derive(Args)]
struct AugmentArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    dataset: DatasetArgs,
    /// adverb_delete, eda, aeda or softeda.
    #[arg(long)]
    strategy: String,
    #[command(flatten)]
    aug: AugmentFlags,
    /// Emit only augmented examples.
    #[arg(long)]
    no_append_original: bool,
    /// Output JSONL path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    train: PathBuf,
    /// Test set. Without it, a validation split is held out of --train.
    #[arg(long)]
    test: Option<PathBuf>,
    /// Fraction of --train held out when --test is absent.
    #[arg(long, default_value_t = DEFAULT_VALID_FRACTION)]
    valid_fraction: f64,
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Comma-separated strategy names.
    #[arg(long)]
    strategies: String,
    #[command(flatten)]
    aug: AugmentFlags,
    #[arg(long, default_value_t = advaug::curriculum::DEFAULT_WARMUP_EPOCHS)]
    warmup_epochs: usize,
    #[arg(long, default_value_t = advaug::curriculum::DEFAULT_TOTAL_EPOCHS)]
    epochs: usize,
    #[arg(long, default_value_t = advaug::curriculum::DEFAULT_BATCH_SIZE)]
    batch_size: usize,
    #[arg(long, default_value_t = advaug::curriculum::DEFAULT_LEARNING_RATE)]
    lr: f64,
    /// Output JSON report path.
    #[arg(long)]
    report: PathBuf,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<advaug::Error> for Failure {
    fn from(e: advaug::Error) -> Self {
        if e.is_validation() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn require_file(path: &Path) -> CliResult {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::Runtime(format!(
            "{}: no such file",
            path.display()
        )))
    }
}

fn require_out_dir(path: &Path) -> CliResult {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    if dir.is_dir() {
        Ok(())
    } else {
        Err(Failure::Runtime(format!(
            "{}: output directory does not exist",
            dir.display()
        )))
    }
}

fn parse_dataset_args(d: &DatasetArgs) -> CliResult<(Format, Schema)> {
    if d.classes < 2 {
        return Err(usage("--classes must be at least 2"));
    }
    Ok((d.format.parse()?, d.schema.parse()?))
}

fn parse_strategy(name: &str) -> CliResult<Strategy> {
    Ok(name.trim().parse::<Strategy>()?)
}

/// Builds a config and checks that the resources its strategy needs were given.
fn augmentation_config(strategy: Strategy, flags: &AugmentFlags) -> CliResult<AugmentationConfig> {
    if strategy.needs_lexicon() && flags.lexicon.is_none() {
        return Err(usage(format!("{strategy} requires --lexicon")));
    }
    if strategy.needs_tagger() && flags.model.is_none() {
        return Err(usage(format!("{strategy} requires --model")));
    }
    let cfg = AugmentationConfig {
        seed: flags.seed,
        n_aug: flags.n_aug,
        softeda_alpha: flags.alpha,
        eda_alpha: flags.eda_alpha,
        aeda_ratio: flags.aeda_ratio,
        preserve_negation: flags.preserve_negation,
        ..AugmentationConfig::new(strategy)
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Loads the tagger and lexicon that `strategies` need, ignoring the rest.
fn load_resources(
    strategies: &[Strategy],
    flags: &AugmentFlags,
) -> CliResult<(Option<TaggerModel>, Option<SynonymLexicon>)> {
    let model = match &flags.model {
        Some(p) if strategies.iter().any(|s| s.needs_tagger()) => Some(TaggerModel::load(p)?),
        _ => None,
    };
    let lexicon = match &flags.lexicon {
        Some(p) if strategies.iter().any(|s| s.needs_lexicon()) => Some(SynonymLexicon::load(p)?),
        _ => None,
    };
    Ok((model, lexicon))
}

fn check_aug_files(flags: &AugmentFlags) -> CliResult {
    for p in flags.model.iter().chain(&flags.lexicon) {
        require_file(p)?;
    }
    Ok(())
}

fn train_tagger(a: TrainTaggerArgs) -> CliResult {
    if a.epochs == 0 {
        return Err(usage("epochs must be positive"));
    }
    require_file(&a.corpus)?;
    if let Some(dev) = &a.dev {
        require_file(dev)?;
    }
    require_out_dir(&a.out)?;

    let tagset = Tagset::universal();
    let corpus = load_conllu(&a.corpus, &tagset)?;
    let dev = a
        .dev
        .as_deref()
        .map(|p| load_conllu(p, &tagset))
        .transpose()?;
    let opts = TrainOptions {
        epochs: a.epochs,
        seed: a.seed,
        lookup_min_count: (a.lookup_min_count > 0).then_some(a.lookup_min_count),
    };
    let start = Instant::now();
    let model = train_with(&corpus, &opts)?;
    println!(
        "trained on {} sentences ({} tokens) in {:.1}s: {} features, {} lookup words",
        corpus.len(),
        corpus.token_count(),
        start.elapsed().as_secs_f64(),
        model.feature_count(),
        model.lookup_len()
    );
    model.save(&a.out)?;
    println!("model written to {}", a.out.display());
    if let Some(dev) = dev {
        println!(
            "dev accuracy: {:.4} ({} sentences)",
            model.evaluate(&dev)?,
            dev.len()
        );
    }
    Ok(())
}

fn tag(a: TagArgs) -> CliResult {
    require_file(&a.model)?;
    require_file(&a.input)?;
    if let Some(out) = &a.out {
        require_out_dir(out)?;
    }
    let model = TaggerModel::load(&a.model)?;
    let reader = BufReader::new(fsutil::open(&a.input)?);
    let mut tagged = Vec::new();
    for line in reader.lines() {
        let line = line.map_err(|e| Failure::Runtime(format!("{}: {e}", a.input.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        tagged.push(model.tag(&tokenize(&line)));
    }
    match &a.out {
        Some(out) => {
            fsutil::write_atomic(out, |w| {
                for (n, s) in tagged.iter().enumerate() {
                    writeln!(w, "# sent_id = {}", n + 1)?;
                    for (i, (tok, t)) in s.tokens.iter().zip(&s.tags).enumerate() {
                        writeln!(w, "{}\t{tok}\t_\t{t}\t_\t_\t_\t_\t_\t_", i + 1)?;
                    }
                    writeln!(w)?;
                }
                Ok(())
            })?;
            println!("tagged {} sentences into {}", tagged.len(), out.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for s in &tagged {
                let mut line = String::new();
                for (i, (tok, t)) in s.tokens.iter().zip(&s.tags).enumerate() {
                    if i > 0 {
                        line.push(' ');
                    }
                    write!(line, "{tok}/{t}").unwrap();
                }
                writeln!(stdout, "{line}").map_err(|e| Failure::Runtime(e.to_string()))?;
            }
        }
    }
    Ok(())
}

fn eval(a: EvalArgs) -> CliResult {
    require_file(&a.model)?;
    require_file(&a.corpus)?;
    let model = TaggerModel::load(&a.model)?;
    let corpus = load_conllu(&a.corpus, model.tagset())?;
    println!(
        "token accuracy: {:.4} ({} sentences, {} tokens)",
        model.evaluate(&corpus)?,
        corpus.len(),
        corpus.token_count()
    );
    Ok(())
}

fn augment(a: AugmentArgs) -> CliResult {
    let (format, schema) = parse_dataset_args(&a.dataset)?;
    let strategy = parse_strategy(&a.strategy)?;
    let mut cfg = augmentation_config(strategy, &a.aug)?;
    cfg.append_original = !a.no_append_original;
    require_file(&a.input)?;
    check_aug_files(&a.aug)?;
    require_out_dir(&a.out)?;

    let (model, lexicon) = load_resources(&[strategy], &a.aug)?;
    let ds = load_dataset(&a.input, format, schema, a.dataset.classes)?;
    let augmenter = Augmenter::new(&cfg, model.as_ref(), lexicon.as_ref())?;
    let (out, stats) = augmenter.augment_dataset_with_stats(&ds)?;
    save_dataset(&out, &a.out)?;
    println!("inputs: {}", stats.inputs);
    println!("skipped: {}", stats.skipped);
    if stats.emptied > 0 {
        println!("dropped (nothing left after deletion): {}", stats.emptied);
    }
    println!("augmented: {}", stats.augmented);
    println!("emitted: {}", stats.emitted);
    Ok(())
}

fn compare(a: CompareArgs) -> CliResult {
    let (format, schema) = parse_dataset_args(&a.dataset)?;
    let strategies = a
        .strategies
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_strategy)
        .collect::<CliResult<Vec<_>>>()?;
    let configs = strategies
        .iter()
        .map(|&s| augmentation_config(s, &a.aug))
        .collect::<CliResult<Vec<_>>>()?;
    let schedule = build_schedule(a.epochs, a.warmup_epochs)?;
    let train_cfg = TrainConfig {
        epochs: a.epochs,
        batch_size: a.batch_size,
        learning_rate: a.lr,
        seed: a.aug.seed,
        ..TrainConfig::default()
    };
    train_cfg.validate()?;
    if a.test.is_none() && !(a.valid_fraction > 0.0 && a.valid_fraction < 1.0) {
        return Err(usage("--valid-fraction must lie in (0, 1)"));
    }
    require_file(&a.train)?;
    if let Some(t) = &a.test {
        require_file(t)?;
    }
    check_aug_files(&a.aug)?;
    require_out_dir(&a.report)?;

    let (model, lexicon) = load_resources(&strategies, &a.aug)?;
    let full = load_dataset(&a.train, format, schema, a.dataset.classes)?;
    let (train, test): (Dataset, Dataset) = match &a.test {
        Some(t) => (full, load_dataset(t, format, schema, a.dataset.classes)?),
        None => split_train_valid(&full, a.valid_fraction, a.aug.seed)?,
    };
    println!(
        "train: {} examples, test: {} examples",
        train.len(),
        test.len()
    );
    let start = Instant::now();
    let report = compare_strategies(
        &train,
        &test,
        &configs,
        model.as_ref(),
        lexicon.as_ref(),
        &schedule,
        &train_cfg,
    )?;
    let json = report.to_json();
    fsutil::write_atomic(&a.report, |w| w.write_all(json.as_bytes()))?;
    print!("{}", report.table());
    println!(
        "finished in {:.1}s; report written to {}",
        start.elapsed().as_secs_f64(),
        a.report.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::TrainTagger(a) => train_tagger(a),
        Command::Tag(a) => tag(a),
        Command::Augment(a) => augment(a),
        Command::Eval(a) => eval(a),
        Command::Compare(a) => compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
