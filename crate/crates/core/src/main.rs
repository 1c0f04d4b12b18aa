use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use procqa::autodiff::OpKind;
use procqa::harness::{
    evaluate, gradcheck, run_grid, train, Checkpoint, GradCheckOptions, GridSpec, HeadKind, Preset,
    RunConfig, Scope,
};
use procqa::modality::ModalityConfig;
use procqa::models::VideoVariant;
use procqa::world::{generate_dataset, load_dataset, save_dataset, DatasetConfig, Split};
use procqa::Result;

#[derive(Parser)]
#[command(name = "procqa", version, about = "Procedural video question answering on a synthetic cooking world")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset file.
    Generate(GenerateArgs),
    /// Train one configuration and write a checkpoint and metrics report.
    Train(TrainArgs),
    /// Evaluate a checkpoint on a dataset split.
    Eval(EvalArgs),
    /// Compare analytic gradients against finite differences.
    Gradcheck(GradcheckArgs),
    /// Run a grid of configurations described by a JSON spec.
    Grid(GridArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Training videos.
    #[arg(long, default_value_t = 500)]
    videos: usize,
    #[arg(long, default_value_t = 100)]
    test_videos: usize,
    #[arg(long, default_value_t = 8)]
    qa_per_video: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Standard deviation of per-frame feature noise.
    #[arg(long)]
    noise: Option<f64>,
    /// Probability of dropping each transcript word.
    #[arg(long)]
    transcript_drop: Option<f64>,
    /// Probability of inserting a filler token after each transcript word.
    #[arg(long)]
    transcript_insert: Option<f64>,
    /// Maximum transcript timestamp jitter in seconds.
    #[arg(long)]
    jitter: Option<f64>,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    /// JSON file with RunConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<Preset>,
    #[arg(long)]
    model: Option<VideoVariant>,
    #[arg(long)]
    head: Option<HeadKind>,
    #[arg(long)]
    modalities: Option<ModalityConfig>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    hidden: Option<usize>,
    #[arg(long)]
    embed: Option<usize>,
    #[arg(long)]
    batch: Option<usize>,
    /// Parameter-initialization seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    checkpoint: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "test")]
    split: String,
    /// Head to evaluate; must match the checkpoint.
    #[arg(long)]
    head: Option<HeadKind>,
    /// Also write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct GradcheckArgs {
    #[arg(long, default_value = "all")]
    scope: Scope,
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    /// Corrupt the backward rule of one op to exercise the checker.
    #[arg(long)]
    fault: Option<OpKind>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Overrides the output directory in the spec.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn run_generate(a: GenerateArgs) -> Result<()> {
    let mut cfg = DatasetConfig {
        train_videos: a.videos,
        test_videos: a.test_videos,
        qa_per_video: a.qa_per_video,
        seed: a.seed,
        ..DatasetConfig::default()
    };
    if let Some(n) = a.noise {
        cfg.world.frame_noise = n;
    }
    if let Some(p) = a.transcript_drop {
        cfg.text_noise.p_drop = p;
    }
    if let Some(p) = a.transcript_insert {
        cfg.text_noise.p_insert = p;
    }
    if let Some(j) = a.jitter {
        cfg.text_noise.jitter_s = j;
    }
    let data = generate_dataset(&cfg)?;
    save_dataset(&data, &a.out)?;
    println!(
        "wrote {} videos, {} questions to {}",
        data.videos.len(),
        data.num_questions(),
        a.out.display()
    );
    Ok(())
}

fn train_config(a: TrainArgs) -> Result<RunConfig> {
    let mut cfg = match (&a.config, a.preset) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(p)) => RunConfig::preset(p),
        (None, None) => RunConfig::default(),
    };
    if let (Some(_), Some(p)) = (&a.config, a.preset) {
        let preset = RunConfig::preset(p);
        cfg.hidden = preset.hidden;
        cfg.embed = preset.embed;
        cfg.lr = preset.lr;
    }
    if let Some(v) = a.model {
        cfg.model = v;
    }
    if let Some(v) = a.head {
        cfg.head = v;
    }
    if let Some(v) = a.modalities {
        cfg.modalities = v;
    }
    if let Some(v) = a.epochs {
        cfg.epochs = v;
    }
    if let Some(v) = a.lr {
        cfg.lr = v;
    }
    if let Some(v) = a.hidden {
        cfg.hidden = v;
    }
    if let Some(v) = a.embed {
        cfg.embed = v;
    }
    if let Some(v) = a.batch {
        cfg.batch_size = v;
    }
    if let Some(v) = a.seed {
        cfg.seeds.params = v;
    }
    if a.data.is_some() {
        cfg.data = a.data;
    }
    if a.out.is_some() {
        cfg.out = a.out;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_train(a: TrainArgs) -> Result<()> {
    let cfg = train_config(a)?;
    let outcome = train(&cfg)?;
    for h in &outcome.report.history {
        println!(
            "epoch {:>3}  loss {:.4}  test {:.4}",
            h.epoch, h.train_loss, h.test_accuracy
        );
    }
    println!("best epoch {}", outcome.report.best_epoch);
    println!("{}", outcome.report);
    Ok(())
}

fn run_eval(a: EvalArgs) -> Result<()> {
    let split = match a.split.to_ascii_lowercase().as_str() {
        "train" => Split::Train,
        "test" => Split::Test,
        other => {
            return Err(procqa::Error::Config(format!("unknown split `{other}`")));
        }
    };
    let model = Checkpoint::load(&a.checkpoint)?.into_model()?;
    let data = load_dataset(&a.data)?;
    let head = a.head.unwrap_or(model.config.head);
    let report = evaluate(&model, &data, split, head)?;
    println!("{report}");
    if let Some(path) = a.json {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(())
}

fn run_gradcheck(a: GradcheckArgs) -> Result<bool> {
    let opts = GradCheckOptions {
        tolerance: a.tolerance,
        fault: a.fault,
        ..GradCheckOptions::default()
    };
    let report = gradcheck(a.scope, &opts);
    print!("{report}");
    Ok(report.passed())
}

fn run_grid_cmd(a: GridArgs) -> Result<()> {
    let mut spec = GridSpec::load(&a.spec)?;
    if a.out.is_some() {
        spec.out = a.out;
    }
    let report = run_grid(&spec)?;
    print!("{report}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => run_generate(a).map(|()| true),
        Command::Train(a) => run_train(a).map(|()| true),
        Command::Eval(a) => run_eval(a).map(|()| true),
        Command::Gradcheck(a) => run_gradcheck(a),
        Command::Grid(a) => run_grid_cmd(a).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
