//! `simband` command line: band reports, Bayes decoding, regret measurement
//! with theorem bounds, the randomized verification suite, adversarial
//! construction emitters, loss evaluation, and retrieval scoring.
//!
//! Exit codes: 0 on success, 1 on validation or property failure, 2 on
//! usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use simband::format::{build_retrieval_records, parse_sets, serialize_candidate_set, RawSet};
use simband::report::{
    emit_band_report, emit_band_report_with, format_sig, render_band_text, render_hit_table_text,
    render_regret_text,
};
use simband::{
    bayes_bitwise, bayes_brute_force, bayes_cosine_closed_form, bayes_hr1, bayes_hrk,
    evaluate_dataset, grad_check, mean_tanimoto, regret_of, run_verify_suite,
    similarity_band_to_reference, BandPolicy, CandidateDistribution, DecodeResult, Fingerprint,
    LossKind, MetricKind, OutputFormat, SearchSpace, SoftPrediction, TiePolicy, ToolConfig,
    VerifyOptions,
};

#[derive(Parser)]
#[command(name = "simband", version, about = "Fingerprint similarity bands, Bayes decoders, and regret bounds")]
struct Cli {
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Emit JSON instead of aligned text.
    #[arg(long, global = true)]
    json: bool,

    /// Override a named tolerance, e.g. --tolerance bound-slack=1e-8.
    #[arg(long = "tolerance", global = true, value_name = "NAME=VALUE")]
    tolerance: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-set similarity bands with dataset medians and histograms.
    Band(BandArgs),
    /// Bayes-optimal decoding of each candidate set in a file.
    Decode(DecodeArgs),
    /// Regret of decoding with one metric while evaluating under another.
    Regret(RegretArgs),
    /// Run the randomized property suite over every theorem and identity.
    Verify(VerifyArgs),
    /// Emit a tightness or worst-case construction.
    Construct(ConstructArgs),
    /// Evaluate the surrogate losses for a truth/prediction pair.
    Losses(LossArgs),
    /// Score predictions against candidate sets and report HR@k.
    Retrieve(RetrieveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Hr1,
    Hrk,
    Bitwise,
    Tanimoto,
    Cosine,
}

impl MetricArg {
    fn kind(self) -> Option<MetricKind> {
        match self {
            MetricArg::Hr1 => Some(MetricKind::Hr1),
            MetricArg::Bitwise => Some(MetricKind::Bitwise),
            MetricArg::Tanimoto => Some(MetricKind::Tanimoto),
            MetricArg::Cosine => Some(MetricKind::Cosine),
            MetricArg::Hrk => None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Candidates,
    Hypercube,
}

impl From<SpaceArg> for SearchSpace {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Candidates => SearchSpace::CandidateSet,
            SpaceArg::Hypercube => SearchSpace::FullHypercube,
        }
    }
}

#[derive(Args)]
struct BandArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "tanimoto")]
    metric: MetricArg,
    /// Permit bitwise or HR@1 as the band metric.
    #[arg(long)]
    allow_any_metric: bool,
    /// Measure similarities to each set's true= candidate instead of over
    /// all pairs.
    #[arg(long)]
    true_ref: bool,
}

#[derive(Args)]
struct DecodeArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    metric: MetricArg,
    #[arg(long, value_enum, default_value = "candidates")]
    space: SpaceArg,
    /// Top-k size for --metric hrk.
    #[arg(long)]
    k: Option<usize>,
    /// Use the closed-form cosine decoder instead of brute force.
    #[arg(long)]
    closed_form: bool,
}

#[derive(Args)]
struct RegretArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    eval: MetricArg,
    #[arg(long, value_enum)]
    decode: MetricArg,
    #[arg(long, value_enum, default_value = "candidates")]
    space: SpaceArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Trial count for the big sweeps; derived checks scale from it.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Largest bit length for the bound sweeps.
    #[arg(long, default_value_t = 16)]
    m: usize,
    /// Largest candidate count for the bound sweeps.
    #[arg(long, default_value_t = 32)]
    l: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Tight2,
    Bitwise,
    Hr1,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long, default_value_t = 8)]
    m: usize,
    #[arg(long, default_value_t = 1e-4)]
    eps: f64,
    #[arg(long, default_value_t = 4)]
    l: usize,
    #[arg(long, default_value_t = 0.4)]
    p_star: f64,
    #[arg(long, default_value_t = 0.3)]
    p_sim: f64,
    #[arg(long, default_value_t = 0.2)]
    sigma_min: f64,
    #[arg(long, default_value_t = 0.6)]
    sigma_max: f64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct LossArgs {
    /// True fingerprint literal ({0,1} string or 0x hex).
    truth: String,
    /// File of whitespace-separated scores in [0, 1].
    scores: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Candidate file enabling the contrastive loss.
    #[arg(long, requires = "true_index")]
    candidates: Option<PathBuf>,
    /// Index of the true candidate inside --candidates (0-based).
    #[arg(long)]
    true_index: Option<usize>,
    /// Also run central-difference gradient checks.
    #[arg(long)]
    grad_check: bool,
}

#[derive(Args)]
struct RetrieveArgs {
    /// Multi-set candidate file; every set needs a `true=<index>` line.
    candidates: PathBuf,
    /// One line of m scores per candidate set.
    predictions: PathBuf,
    #[arg(long, default_value = "cosine")]
    sim: String,
    /// Comma-separated k values.
    #[arg(long, default_value = "1,5,20")]
    k: String,
    #[arg(long, default_value = "index")]
    ties: String,
    /// Binarization threshold for the mean-Tanimoto column.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let mut config = ToolConfig {
        seed: cli.seed,
        output: if cli.json { OutputFormat::Json } else { OutputFormat::Text },
        ..Default::default()
    };
    for arg in &cli.tolerance {
        config.tolerances.set_from_arg(arg)?;
    }
    match cli.command {
        Command::Band(args) => cmd_band(&args, &config),
        Command::Decode(args) => cmd_decode(&args, &config),
        Command::Regret(args) => cmd_regret(&args, &config),
        Command::Verify(args) => cmd_verify(&args, &config),
        Command::Construct(args) => cmd_construct(&args, &config),
        Command::Losses(args) => cmd_losses(&args, &config),
        Command::Retrieve(args) => cmd_retrieve(&args, &config),
    }
}

fn wants_json(config: &ToolConfig) -> bool {
    config.output == OutputFormat::Json
}

/// Band statistics do not involve probabilities, so sets without them get a
/// uniform placeholder.
fn set_to_distribution(set: RawSet) -> anyhow::Result<CandidateDistribution> {
    let l = set.fingerprints.len();
    let probs = set.probs.clone().unwrap_or_else(|| vec![1.0 / l as f64; l]);
    Ok(CandidateDistribution::new(set.fingerprints, probs)?)
}

fn load_sets(path: &PathBuf) -> anyhow::Result<Vec<RawSet>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_sets(&text)?)
}

fn cmd_band(args: &BandArgs, config: &ToolConfig) -> anyhow::Result<ExitCode> {
    let json = wants_json(config);
    let metric = args.metric.kind().context("hrk is not a band metric")?;
    let policy = if args.allow_any_metric {
        BandPolicy::AllowAnyMetric
    } else {
        BandPolicy::Strict
    };
    let sets = load_sets(&args.file)?;
    let true_indices: Vec<Option<usize>> = sets.iter().map(|s| s.true_index).collect();
    let dists: Vec<CandidateDistribution> =
        sets.into_iter().map(set_to_distribution).collect::<anyhow::Result<_>>()?;

    let report = if args.true_ref {
        emit_band_report_with(&dists, metric.name(), |i, dist| {
            let reference = true_indices[i].ok_or_else(|| {
                simband::Error::InvalidParameter(format!("set {i} has no true= line"))
            })?;
            similarity_band_to_reference(dist, metric, reference, policy)
        })?
    } else {
        emit_band_report(&dists, metric, policy)?
    };

    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", render_band_text(&report));
    }
    Ok(ExitCode::SUCCESS)
}

fn decode_one(
    dist: &CandidateDistribution,
    args: &DecodeArgs,
) -> anyhow::Result<DecodeResult> {
    let space: SearchSpace = args.space.into();
    if args.closed_form && !matches!(args.metric, MetricArg::Cosine) {
        bail!("--closed-form only applies to --metric cosine");
    }
    let result = match args.metric {
        MetricArg::Hr1 => bayes_hr1(dist),
        MetricArg::Bitwise => bayes_bitwise(dist),
        MetricArg::Cosine if args.closed_form => bayes_cosine_closed_form(dist)?,
        MetricArg::Tanimoto | MetricArg::Cosine => {
            bayes_brute_force(dist, args.metric.kind().unwrap(), space)?
        }
        MetricArg::Hrk => unreachable!("handled separately"),
    };
    Ok(result)
}

fn cmd_decode(args: &DecodeArgs, config: &ToolConfig) -> anyhow::Result<ExitCode> {
    let json = wants_json(config);
    let sets = load_sets(&args.file)?;
    let multi = sets.len() > 1;
    let mut payloads = Vec::new();
    for (i, set) in sets.into_iter().enumerate() {
        let dist = set.into_distribution()?;
        if !json && multi {
            println!("set {i}:");
        }
        if matches!(args.metric, MetricArg::Hrk) {
            let k = args.k.context("--metric hrk requires --k")?;
            let indices = bayes_hrk(&dist, k)?;
            if json {
                let probs: Vec<f64> = indices.iter().map(|&j| dist.probs()[j]).collect();
                payloads.push(json!({ "set": i, "top_k": indices, "probabilities": probs }));
            } else {
                let rendered: Vec<String> = indices
                    .iter()
                    .map(|&j| format!("{j} (p={})", dist.probs()[j]))
                    .collect();
                println!("top-{k} indices: {}", rendered.join(", "));
            }
            continue;
        }
        let result = decode_one(&dist, args)?;
        if json {
            payloads.push(json!({
                "set": i,
                "prediction": result.prediction.to_bitstring(),
                "expected_utility": result.expected_utility,
                "argmax_index": result.argmax_index,
            }));
        } else {
            println!("prediction: {}", result.prediction);
            println!("expected utility: {}", format_sig(result.expected_utility, 12));
            if let Some(idx) = result.argmax_index {
                println!("argmax index: {idx}");
            }
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&payloads)?);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_regret(args: &RegretArgs, config: &ToolConfig) -> anyhow::Result<ExitCode> {
    let json = wants_json(config);
    let eval = args.eval.kind().context("hrk is not a regret metric; use hr1")?;
    let decode = args.decode.kind().context("hrk is not a regret metric; use hr1")?;
    let sets = load_sets(&args.file)?;
    let multi = sets.len() > 1;
    let mut payloads = Vec::new();
    for (i, set) in sets.into_iter().enumerate() {
        let dist = set.into_distribution()?;
        let report = regret_of(&dist, eval, decode, args.space.into())?;
        if json {
            payloads.push(serde_json::to_value(&report)?);
        } else {
            if multi {
                println!("set {i}:");
            }
            print!("{}", render_regret_text(&report));
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&payloads)?);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs, config: &ToolConfig) -> anyhow::Result<ExitCode> {
    let opts = VerifyOptions {
        trials: args.trials,
        max_m: args.m,
        max_l: args.l,
        seed: config.seed,
        tolerances: config.tolerances,
    };
    let report = run_verify_suite(&opts)?;
    if wants_json(config) {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.render_text());
    }
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_construct(args: &ConstructArgs, config: &ToolConfig) -> anyhow::Result<ExitCode> {
    let json = wants_json(config);
    match args.which {
        Which::Bitwise | Which::Hr1 => {
            let dist = match args.which {
                Which::Bitwise => simband::construct_worstcase_bitwise(args.m, args.eps)?,
                _ => simband::construct_worstcase_hr1(args.m, args.eps)?,
            };
            fs::write(&args.output, serialize_candidate_set(&dist, None))?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "written": args.output.display().to_string(),
                        "candidates": dist.len(),
                        "m": dist.bit_len(),
                    }))?
                );
            } else {
                println!(
                    "wrote {} candidates over {} bits to {}",
                    dist.len(),
                    dist.bit_len(),
                    args.output.display()
                );
            }
        }
        Which::Tight2 => {
            let inst = simband::construct_tightness_thm2(
                args.l,
                args.p_star,
                args.p_sim,
                args.sigma_min,
                args.sigma_max,
            )?;
            let regret = inst.measured_regret();
            let bound = inst.bound()?;
            let payload = json!({
                "similarity_matrix": inst.matrix(),
                "probabilities": inst.probs(),
                "i_star": inst.i_star,
                "i_sim": inst.i_sim,
                "regret": regret,
                "bound": bound,
                "slack": bound - regret,
            });
            fs::write(&args.output, serde_json::to_string_pretty(&payload)?)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&payload)?);
            } else {
                println!("wrote abstract instance to {}", args.output.display());
                println!("regret: {regret}");
                println!("bound:  {bound}");
                println!("slack:  {}", bound - regret);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_losses(args: &LossArgs, config: &ToolConfig) -> anyhow::Result<ExitCode> {
    let json = wants_json(config);
    let truth = Fingerprint::parse(&args.truth)?;
    let text = fs::read_to_string(&args.scores)
        .with_context(|| format!("reading {}", args.scores.display()))?;
    let scores: Vec<f64> = text
        .split_whitespace()
        .map(|t| t.parse::<f64>().with_context(|| format!("cannot parse score {t:?}")))
        .collect::<anyhow::Result<_>>()?;
    if scores.len() != truth.len() {
        bail!("truth has {} bits but the file holds {} scores", truth.len(), scores.len());
    }
    let p = SoftPrediction::new(scores)?;

    let contrastive_dist = match (&args.candidates, args.true_index) {
        (Some(path), Some(idx)) => {
            let sets = load_sets(path)?;
            let dist = sets
                .into_iter()
                .next()
                .context("candidate file is empty")?
                .into_distribution()?;
            Some((dist, idx))
        }
        _ => None,
    };

    let mut kinds: Vec<(String, LossKind)> = vec![
        ("bce".into(), LossKind::Bce { truth: &truth }),
        (format!("focal(gamma={})", args.gamma), LossKind::Focal { truth: &truth, gamma: args.gamma }),
        ("cosine".into(), LossKind::Cosine { truth: &truth }),
        ("iou".into(), LossKind::Iou { truth: &truth }),
    ];
    if let Some((dist, idx)) = &contrastive_dist {
        kinds.push((
            format!("contrastive-fp-cos(tau={})", args.tau),
            LossKind::ContrastiveFpCos { dist, true_index: *idx, tau: args.tau },
        ));
    }

    let mut payload = serde_json::Map::new();
    for (label, kind) in &kinds {
        let value = kind.evaluate(&p)?;
        let check = if args.grad_check {
            Some(grad_check(kind, &p, 1e-6)?)
        } else {
            None
        };
        if json {
            let mut entry = serde_json::Map::new();
            entry.insert("value".into(), json!(value.value));
            if let Some(c) = check {
                entry.insert("grad_check_rel_err".into(), json!(c));
            }
            payload.insert(label.clone(), entry.into());
        } else {
            match check {
                Some(c) => println!(
                    "{label:<28} {:<16} grad-check rel err {:.3e}",
                    format_sig(value.value, 9),
                    c
                ),
                None => println!("{label:<28} {}", format_sig(value.value, 9)),
            }
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&serde_json::Value::from(payload))?);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_retrieve(args: &RetrieveArgs, config: &ToolConfig) -> anyhow::Result<ExitCode> {
    let json = wants_json(config);
    let cand_text = fs::read_to_string(&args.candidates)
        .with_context(|| format!("reading {}", args.candidates.display()))?;
    let pred_text = fs::read_to_string(&args.predictions)
        .with_context(|| format!("reading {}", args.predictions.display()))?;
    let records = build_retrieval_records(&cand_text, &pred_text)?;

    let sim = args.sim.parse::<simband::RetrievalSim>()?;
    let ties = args.ties.parse::<TiePolicy>()?;
    let ks: Vec<usize> = args
        .k
        .split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad k value {t:?}")))
        .collect::<anyhow::Result<_>>()?;

    let table = evaluate_dataset(&records, sim, &ks, ties)?;
    let mean_tan = mean_tanimoto(&records, args.threshold)?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "hit_rates": table,
                "mean_tanimoto": mean_tan,
            }))?
        );
    } else {
        print!("{}", render_hit_table_text(&table, Some(mean_tan)));
    }
    Ok(ExitCode::SUCCESS)
}
