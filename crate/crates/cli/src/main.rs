//! `ma` — games, certificates and bounds on finite data spaces, plus the
//! desk-scale training harness. Every subcommand is deterministic given its
//! flags and seed; runs with `--out` echo their resolved configuration next
//! to the artifacts.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ma_core::bounds::{self, GuaranteeInputs};
use ma_core::certificates::{self, ContextImpact};
use ma_core::dataspace::exemplars;
use ma_core::dataspace::random::random_space;
use ma_core::game::{self, SolveMethod, SolveOptions};
use ma_core::harness::{self, data, presets, ClassMap, TrainConfig};
use ma_core::io::{idx, space};
use ma_core::metrics;
use ma_core::neural::checkpoint;
use ma_core::provers::{self, Direction, MaskProblem, ProverConfig};
use ma_core::{Dataset, Scalar};

#[derive(Parser)]
#[command(
    name = "ma",
    version,
    about = "Interactive classification games, certificates and bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the feature-space axioms of a data-space file.
    Validate {
        #[arg(long)]
        space: PathBuf,
    },
    /// Exact information metrics of a space, optionally for a selector.
    Metrics {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        merlin: Option<PathBuf>,
    },
    /// Min-max game solving.
    #[command(subcommand)]
    Game(GameCommand),
    /// Concentration and context-impact certificates.
    #[command(subcommand)]
    Certify(CertifyCommand),
    /// Guarantee-bound evaluation and sweeps.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Write a canonical fixture (data space or image corpus).
    Exemplar(ExemplarArgs),
    /// Train a verifier with optimizer provers.
    Train(TrainArgs),
    /// Evaluate a checkpoint: criteria, feature matching, bound rows.
    Evaluate(EvaluateArgs),
    /// Solve one prover mask against a checkpoint.
    Prove(ProveArgs),
    /// Merge evaluation rows (JSON) into one CSV report.
    Report(ReportArgs),
}

#[derive(Subcommand)]
enum GameCommand {
    /// Solve for the optimal verdict table against a fixed selector.
    Solve {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        merlin: PathBuf,
        #[arg(long, value_enum, default_value = "exhaustive")]
        method: MethodArg,
        /// Relevant-feature cap for the exhaustive method.
        #[arg(long, default_value_t = 14)]
        cap: usize,
        /// Evaluation budget for the search method.
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exhaustive,
    Search,
}

#[derive(Subcommand)]
enum CertifyCommand {
    /// Exact asymmetric feature concentration.
    Afc {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, default_value_t = 16)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact context impact of an adversary.
    Alpha {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        arthur: PathBuf,
        #[arg(long)]
        merlin: PathBuf,
        #[arg(long)]
        morgana: PathBuf,
        #[arg(long, default_value_t = 16)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BoundCommand {
    /// Evaluate the precision lower bound for stored inputs (JSON).
    Eval {
        #[arg(long)]
        inputs: PathBuf,
    },
    /// Random-space sweep: exhaustive verifier, best-response actors, exact
    /// constants; one CSV row per seed.
    Sweep {
        #[arg(long)]
        seeds: u64,
        #[arg(long, default_value_t = 8)]
        max_points: usize,
        #[arg(long, default_value_t = 6)]
        max_features: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExemplarArgs {
    /// fish-fruit | debate-chain | red-blue | subset-sum | bars | digits
    name: String,
    /// Chain length (debate-chain).
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Pixel count (red-blue, subset-sum).
    #[arg(long, default_value_t = 4)]
    d: usize,
    /// Red pixels (red-blue).
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Sparsity (subset-sum).
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Target sum (subset-sum).
    #[arg(long, default_value_t = 5)]
    target: u32,
    /// Images per class (bars) or total image count (digits).
    #[arg(long, default_value_t = 64)]
    count: usize,
    /// Digit classes for the glyph corpus.
    #[arg(long, value_delimiter = ',', default_value = "2,4")]
    classes: Vec<u8>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct CorpusArgs {
    /// IDX image tensor file.
    #[arg(long)]
    images: Option<PathBuf>,
    /// IDX label vector file.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Synthesize a corpus instead of reading files: bars | digits.
    #[arg(long)]
    corpus: Option<String>,
    /// Corpus size when synthesizing (per class for bars, total for digits).
    #[arg(long, default_value_t = 2500)]
    corpus_count: usize,
}

impl CorpusArgs {
    fn load(&self, classes: &[u8], seed: u64) -> Result<Dataset> {
        match (&self.images, &self.labels, &self.corpus) {
            (Some(images), Some(labels), None) => {
                let imgs = idx::load_images::<Scalar>(images)
                    .with_context(|| format!("reading {}", images.display()))?;
                let lbls = idx::load_labels(labels)
                    .with_context(|| format!("reading {}", labels.display()))?;
                if imgs.count != lbls.len() {
                    bail!(
                        "image and label counts differ ({} vs {})",
                        imgs.count,
                        lbls.len()
                    );
                }
                Ok(Dataset::new(imgs.pixels, lbls, imgs.rows, imgs.cols))
            }
            (None, None, Some(kind)) => match kind.as_str() {
                "bars" => Ok(data::bars(self.corpus_count, seed)),
                "digits" => Ok(data::synthetic_digits(self.corpus_count, classes, seed)),
                other => bail!("unknown corpus {other}; expected bars or digits"),
            },
            _ => bail!("provide either --images and --labels, or --corpus"),
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    /// TOML training configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, value_delimiter = ',')]
    classes: Option<Vec<u8>>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Verifier checkpoint.
    #[arg(long)]
    arthur: PathBuf,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, value_delimiter = ',', default_value = "2,4")]
    classes: Vec<u8>,
    /// Mask sizes, one CSV row each.
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    ks: Vec<usize>,
    #[arg(long, default_value_t = 0.75)]
    gamma: f64,
    /// Subsample of the corpus used for evaluation.
    #[arg(long)]
    subsample: Option<usize>,
    /// Evaluation solver restarts.
    #[arg(long, default_value_t = 1)]
    n_starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProveArgs {
    #[arg(long)]
    arthur: PathBuf,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, value_delimiter = ',', default_value = "2,4")]
    classes: Vec<u8>,
    /// Image index, plain (`3`) or prefixed (`IDX#3`).
    #[arg(long)]
    image: String,
    #[arg(long, value_enum)]
    direction: DirectionArg,
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Merlin,
    Morgana,
}

#[derive(Args)]
struct ReportArgs {
    /// Evaluation-row JSON files, merged in argument order.
    #[arg(long, required = true, num_args = 1..)]
    rows: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Validate { space } => validate(&space),
        Command::Metrics { space, merlin } => metrics_cmd(&space, merlin.as_deref()),
        Command::Game(GameCommand::Solve {
            space,
            merlin,
            method,
            cap,
            budget,
            seed,
            threads,
            out,
        }) => game_solve(
            &space,
            &merlin,
            method,
            cap,
            budget,
            seed,
            threads,
            out.as_deref(),
        ),
        Command::Certify(CertifyCommand::Afc { space, cap, out }) => {
            certify_afc(&space, cap, out.as_deref())
        }
        Command::Certify(CertifyCommand::Alpha {
            space,
            arthur,
            merlin,
            morgana,
            cap,
            out,
        }) => certify_alpha(&space, &arthur, &merlin, &morgana, cap, out.as_deref()),
        Command::Bound(BoundCommand::Eval { inputs }) => bound_eval(&inputs),
        Command::Bound(BoundCommand::Sweep {
            seeds,
            max_points,
            max_features,
            threads,
            out,
        }) => bound_sweep(seeds, max_points, max_features, threads, out.as_deref()),
        Command::Exemplar(args) => exemplar(&args),
        Command::Train(args) => train(&args),
        Command::Evaluate(args) => evaluate(&args),
        Command::Prove(args) => prove(&args),
        Command::Report(args) => report(&args),
    }
}

fn validate(path: &Path) -> Result<()> {
    match space::load_space::<Scalar>(path) {
        Ok(space) => {
            println!(
                "pass: {} points, {} features (including the empty feature)",
                space.n_points(),
                space.n_features()
            );
            Ok(())
        }
        Err(space::FileError::Axiom(v)) => {
            println!("fail: {v:?}");
            std::process::exit(1);
        }
        Err(e) => Err(e.into()),
    }
}

fn metrics_cmd(space_path: &Path, merlin: Option<&Path>) -> Result<()> {
    let sp = space::load_space::<Scalar>(space_path)?;
    println!("class entropy: {:.6} bits", metrics::class_entropy(&sp));
    println!("class imbalance: {:.6}", sp.class_imbalance()?);
    for f in 1..sp.n_features() {
        if sp.feature_mass(f) <= 0.0 {
            continue;
        }
        println!(
            "feature {f}: mass {:.6}, conditional entropy {:.6}, mutual information {:.6}",
            sp.feature_mass(f),
            metrics::conditional_entropy(&sp, f)?,
            metrics::mutual_information(&sp, f)?,
        );
    }
    if let Some(mpath) = merlin {
        let m = space::load_selector(mpath, &sp)?;
        let report = metrics::average_precision(&sp, &m);
        println!("average precision: {:.12}", report.average);
        println!(
            "average conditional entropy: {:.12} bits",
            metrics::average_conditional_entropy(&sp, &m)
        );
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn game_solve(
    space_path: &Path,
    merlin_path: &Path,
    method: MethodArg,
    cap: usize,
    budget: usize,
    seed: u64,
    threads: usize,
    out: Option<&Path>,
) -> Result<()> {
    let sp = space::load_space::<Scalar>(space_path)?;
    let merlin = space::load_selector(merlin_path, &sp)?;
    let options = SolveOptions {
        feature_cap: cap,
        search_budget: budget,
        search_seed: seed,
        threads,
    };
    let method = match method {
        MethodArg::Exhaustive => SolveMethod::Exhaustive,
        MethodArg::Search => SolveMethod::LocalSearch,
    };
    let solution = game::solve_minmax(&sp, &merlin, method, options)?;
    println!(
        "epsilon_M = {:.12} ({:?}, certified: {})",
        solution.epsilon_m, method, solution.certified
    );
    let certificate = game::minmax_certificate(&sp, &merlin, &solution)?;
    println!(
        "certificate: {} of {} points kept, restricted precision {:.12}",
        certificate.kept.len(),
        sp.n_points(),
        certificate.restricted_precision
    );
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        space::save_json(&solution, &dir.join("game-solution.json"))?;
        space::save_json(&certificate, &dir.join("certificate.json"))?;
    }
    Ok(())
}

fn certify_afc(space_path: &Path, cap: usize, out: Option<&Path>) -> Result<()> {
    let sp = space::load_space::<Scalar>(space_path)?;
    let report = certificates::afc_exact(&sp, cap)?;
    println!(
        "kappa = {:.12} (class {}, witness of {} features); K = {}",
        report.kappa,
        report.witness_class.sign(),
        report.witness_features.len(),
        report.max_features_per_point
    );
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        space::save_json(&report, &dir.join("afc.json"))?;
    }
    Ok(())
}

fn certify_alpha(
    space_path: &Path,
    arthur_path: &Path,
    merlin_path: &Path,
    morgana_path: &Path,
    cap: usize,
    out: Option<&Path>,
) -> Result<()> {
    let sp = space::load_space::<Scalar>(space_path)?;
    let arthur = space::load_classifier(arthur_path, &sp)?;
    let merlin = space::load_selector(merlin_path, &sp)?;
    let morgana = space::load_selector(morgana_path, &sp)?;
    let alpha = certificates::context_impact_exact(&sp, &arthur, &merlin, &morgana, cap)?;
    match &alpha {
        ContextImpact::Bounded(v) => println!("alpha = {v:.12}"),
        ContextImpact::Unbounded {
            class,
            witness_features,
        } => println!("alpha unbounded: class {class}, witness features {witness_features:?}"),
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        space::save_json(&alpha, &dir.join("alpha.json"))?;
    }
    Ok(())
}

fn bound_eval(inputs_path: &Path) -> Result<()> {
    let inputs: GuaranteeInputs<Scalar> =
        serde_json::from_str(&std::fs::read_to_string(inputs_path)?)?;
    let raw = bounds::main_bound(&inputs)?;
    println!(
        "bound = {:.12} (clipped: {:.12})",
        raw,
        bounds::clip_unit(raw)
    );
    Ok(())
}

fn bound_sweep(
    seeds: u64,
    max_points: usize,
    max_features: usize,
    threads: usize,
    out: Option<&Path>,
) -> Result<()> {
    let mut csv =
        String::from("schema_version,seed,eps_c,eps_s,kappa,alpha,b,bound,exact_q,violated\n");
    for seed in 0..seeds {
        let row = sweep_row(seed, max_points, max_features, threads)?;
        csv.push_str(&row);
        csv.push('\n');
    }
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join("bound-sweep.csv");
            std::fs::write(&path, &csv)?;
            println!("wrote {} rows to {}", seeds, path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn sweep_row(seed: u64, max_points: usize, max_features: usize, threads: usize) -> Result<String> {
    let space = random_space::<Scalar>(seed, max_points, max_features);
    let merlin0 = exemplars::lowest_index_selector(&space);
    let options = SolveOptions {
        threads,
        ..SolveOptions::default()
    };
    let solution = game::solve_minmax(&space, &merlin0, SolveMethod::Exhaustive, options)?;
    let merlin = game::optimal_merlin(&space, &solution.arthur);
    let morgana = game::optimal_morgana(&space, &solution.arthur);
    let eps_c = bounds::completeness(&space, &solution.arthur, &merlin).eps;
    let eps_s = bounds::soundness(&space, &solution.arthur, &morgana).eps;
    let kappa = certificates::afc_exact(&space, 16)?.kappa;
    let alpha =
        certificates::context_impact_exact(&space, &solution.arthur, &merlin, &morgana, 16)?
            .value()
            .context("optimal adversary always has bounded context impact")?;
    let b = space.class_imbalance()?;
    let bound = bounds::main_bound(&GuaranteeInputs {
        eps_c,
        eps_s,
        kappa,
        alpha,
        b,
    })?;
    let exact_q = metrics::average_precision(&space, &merlin).average;
    Ok(format!(
        "1,{seed},{eps_c:.12},{eps_s:.12},{kappa:.12},{alpha:.12},{b:.12},{bound:.12},{exact_q:.12},{}",
        bound > exact_q + 1e-9
    ))
}

fn exemplar(args: &ExemplarArgs) -> Result<()> {
    std::fs::create_dir_all(&args.out)?;
    match args.name.as_str() {
        "fish-fruit" => {
            let sp = exemplars::fish_fruit::<Scalar>();
            let (merlin, arthur) = exemplars::fish_fruit_strategy(&sp);
            space::save_json(&sp, &args.out.join("fish-fruit.space.json"))?;
            space::save_json(&merlin, &args.out.join("fish-fruit.merlin.json"))?;
            space::save_json(&arthur, &args.out.join("fish-fruit.arthur.json"))?;
            println!(
                "wrote fish-fruit space and strategy tables to {}",
                args.out.display()
            );
        }
        "debate-chain" => {
            let sp = exemplars::debate_chain::<Scalar>(args.n);
            let merlin = exemplars::lowest_index_selector(&sp);
            space::save_json(&sp, &args.out.join("debate-chain.space.json"))?;
            space::save_json(&merlin, &args.out.join("debate-chain.merlin.json"))?;
            println!(
                "wrote debate-chain (n = {}) to {}",
                args.n,
                args.out.display()
            );
        }
        "red-blue" => {
            let sp = exemplars::red_blue::<Scalar>(args.d, args.m);
            space::save_json(&sp, &args.out.join("red-blue.space.json"))?;
            println!(
                "wrote red-blue (d = {}, m = {}) to {}",
                args.d,
                args.m,
                args.out.display()
            );
        }
        "subset-sum" => {
            let sp = exemplars::subset_sum::<Scalar>(args.d, args.k, args.target, args.seed);
            space::save_json(&sp, &args.out.join("subset-sum.space.json"))?;
            println!("wrote subset-sum space to {}", args.out.display());
        }
        "bars" => {
            let ds = data::bars::<Scalar>(args.count, args.seed);
            write_idx_corpus(&ds, &args.out, "bars")?;
            println!("wrote {} bar images to {}", ds.len(), args.out.display());
        }
        "digits" => {
            let ds = data::synthetic_digits::<Scalar>(args.count, &args.classes, args.seed);
            write_idx_corpus(&ds, &args.out, "digits")?;
            println!("wrote {} glyph images to {}", ds.len(), args.out.display());
        }
        other => bail!("unknown exemplar {other}"),
    }
    Ok(())
}

fn write_idx_corpus(ds: &Dataset, dir: &Path, stem: &str) -> Result<()> {
    let bytes: Vec<Vec<u8>> = ds
        .images
        .iter()
        .map(|img| img.iter().map(|&v| (v * 255.0).round() as u8).collect())
        .collect();
    idx::save_images(
        &dir.join(format!("{stem}-images.idx")),
        ds.rows,
        ds.cols,
        &bytes,
    )?;
    idx::save_labels(&dir.join(format!("{stem}-labels.idx")), &ds.labels)?;
    Ok(())
}

fn train(args: &TrainArgs) -> Result<()> {
    let mut config: TrainConfig<Scalar> = match &args.config {
        Some(path) => toml::from_str(&std::fs::read_to_string(path)?)
            .with_context(|| format!("parsing {}", path.display()))?,
        None => presets::digit_pair([2, 4], 0),
    };
    if let Some(classes) = &args.classes {
        config.classes = classes.clone();
    }
    if let Some(k) = args.k {
        config.k = k;
    }
    if let Some(gamma) = args.gamma {
        config.gamma = gamma;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(threads) = args.threads {
        config.threads = threads;
    }
    let dataset = args.corpus.load(&config.classes, harness_seed(&config))?;

    std::fs::create_dir_all(&args.out)?;
    std::fs::write(
        args.out.join("resolved-config.toml"),
        toml::to_string_pretty(&config)?,
    )?;
    let outcome = harness::train(&config, &dataset)?;
    checkpoint::save(&outcome.net, &args.out.join("arthur.ckpt"))?;
    std::fs::write(
        args.out.join("train-log.jsonl"),
        outcome.log.to_json_lines(),
    )?;
    let last = outcome
        .log
        .epochs
        .last()
        .context("training produced no epochs")?;
    println!(
        "trained {} epochs; final validation eps_c {:.4}, eps_s {:.4}",
        config.epochs, last.eps_c, last.eps_s
    );
    println!("checkpoint: {}", args.out.join("arthur.ckpt").display());
    Ok(())
}

fn harness_seed(config: &TrainConfig<Scalar>) -> u64 {
    config.seed ^ 0x636f7270 // corpus stream
}

fn evaluate(args: &EvaluateArgs) -> Result<()> {
    let net = checkpoint::load::<Scalar>(&args.arthur)?;
    let map = ClassMap::new(args.classes.clone());
    let full = args.corpus.load(&args.classes, args.seed ^ 0x636f7270)?;
    let test = full
        .filter_classes(&args.classes)
        .subsample(args.subsample, args.seed ^ 0x74657374);
    if test.is_empty() {
        bail!("no evaluation images after class filtering");
    }
    let prover = ProverConfig {
        seed: args.seed,
        ..presets::eval_prover::<Scalar>(args.n_starts)
    };
    let mut reports = Vec::new();
    for &k in &args.ks {
        let report = harness::bound_report(
            &net,
            &test,
            &map,
            k,
            args.gamma,
            &prover,
            args.seed,
            args.threads,
        );
        println!(
            "k={k}: eps_c {:.4} eps_s {:.4} p_e {:.4} q_hat {:.4} i_coop {:.4} bound {:.4} violated {}",
            report.eps_c, report.eps_s, report.p_e, report.q_hat, report.i_coop,
            report.bound_raw, report.violated
        );
        reports.push(report);
    }
    std::fs::create_dir_all(&args.out)?;
    std::fs::write(args.out.join("eval.csv"), harness::reports_to_csv(&reports))?;
    space::save_json(&reports, &args.out.join("eval-rows.json"))?;
    let resolved = serde_json::json!({
        "arthur": args.arthur,
        "classes": args.classes,
        "ks": args.ks,
        "gamma": args.gamma,
        "subsample": args.subsample,
        "n_starts": args.n_starts,
        "seed": args.seed,
        "threads": args.threads,
    });
    space::save_json(&resolved, &args.out.join("resolved-config.json"))?;
    println!("wrote {}", args.out.join("eval.csv").display());
    Ok(())
}

fn prove(args: &ProveArgs) -> Result<()> {
    let net = checkpoint::load::<Scalar>(&args.arthur)?;
    let map = ClassMap::new(args.classes.clone());
    let dataset = args.corpus.load(&args.classes, args.seed ^ 0x636f7270)?;
    let index: usize = args
        .image
        .strip_prefix("IDX#")
        .unwrap_or(&args.image)
        .parse()
        .context("image index must be an integer or IDX#<integer>")?;
    if index >= dataset.len() {
        bail!(
            "image index {index} out of range ({} images)",
            dataset.len()
        );
    }
    let class = map
        .index_of(dataset.labels[index])
        .with_context(|| format!("label {} not in --classes", dataset.labels[index]))?;
    let direction = match args.direction {
        DirectionArg::Merlin => Direction::Merlin,
        DirectionArg::Morgana => Direction::Morgana,
    };
    let config = ProverConfig {
        seed: args.seed,
        ..presets::eval_prover::<Scalar>(1)
    };
    let problem = MaskProblem::new(
        dataset.images[index].clone(),
        class,
        args.k,
        direction,
        &config,
    );
    let solve = provers::frank_wolfe_mask(&net, &problem, &config);
    let masked = provers::masked_image(&solve.mask, &dataset.images[index], config.baseline);
    let probs = net.forward(&masked);
    let verdict = provers::argmax(&probs);
    let support: Vec<usize> = (0..solve.mask.len())
        .filter(|&i| solve.mask[i] > 0.0)
        .collect();
    println!(
        "image {index} (label {}, class index {class})",
        dataset.labels[index]
    );
    println!("mask support ({} pixels): {support:?}", support.len());
    println!("verdict index {verdict} with distribution {probs:?}");
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        let artifact = serde_json::json!({
            "index": index,
            "direction": format!("{direction:?}"),
            "k": args.k,
            "support": support,
            "verdict": verdict,
            "probabilities": probs,
        });
        space::save_json(&artifact, &dir.join("prove.json"))?;
    }
    Ok(())
}

fn report(args: &ReportArgs) -> Result<()> {
    let mut all: Vec<harness::EvalReport<Scalar>> = Vec::new();
    for path in &args.rows {
        let rows: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        for row in rows {
            all.push(parse_row(&row).with_context(|| format!("in {}", path.display()))?);
        }
    }
    let csv = harness::reports_to_csv(&all);
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("report.csv"), &csv)?;
            println!(
                "wrote {} rows to {}",
                all.len(),
                dir.join("report.csv").display()
            );
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn parse_row(v: &serde_json::Value) -> Result<harness::EvalReport<Scalar>> {
    let f = |k: &str| -> Result<Scalar> {
        v.get(k)
            .and_then(serde_json::Value::as_f64)
            .with_context(|| format!("missing field {k}"))
    };
    Ok(harness::EvalReport {
        schema_version: f("schema_version")? as u32,
        seed: f("seed")? as u64,
        classes: v
            .get("classes")
            .and_then(|c| c.as_array())
            .context("missing classes")?
            .iter()
            .filter_map(|x| x.as_u64().map(|u| u as u8))
            .collect(),
        k: f("k")? as usize,
        gamma: f("gamma")?,
        eps_c: f("eps_c")?,
        eps_s: f("eps_s")?,
        p_e: f("p_e")?,
        q_hat: f("q_hat")?,
        h_cond_hat: f("h_cond_hat")?,
        i_coop: f("i_coop")?,
        matches_per_feature: f("matches_per_feature")?,
        class_imbalance: f("class_imbalance")?,
        bound_raw: f("bound_raw")?,
        bound_clipped: f("bound_clipped")?,
        eps_sample: f("eps_sample")?,
        violated: v
            .get("violated")
            .and_then(serde_json::Value::as_bool)
            .unwrap_or(false),
    })
}
