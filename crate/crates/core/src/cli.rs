//! Command-line front end. [`run`] returns the process exit code:
//! 0 on success, 1 on usage or parameter errors, 2 on format or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use crate::clip::Clip;
use crate::erase::{cube_cutout, cutout, frame_cutout};
use crate::error::{Error, Result};
use crate::io::{
    import_frames, read_clip, read_header, read_label, read_manifest, write_clip, write_label,
    LabelSource,
};
use crate::label::LabelDist;
use crate::mix::MixMethod;
use crate::ops::{apply_op, OpKind, Sign};
use crate::pipeline::{augment_sample, stream, PipelineConfig};
use crate::randaug::{randaugment, randaugment_t, sample_magnitude_range, MagnitudeMode};
use crate::rng::rng_derive;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FORMAT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tempaug",
    version,
    about = "Temporal data augmentation for video clips"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply RandAugment(-T), an erase op, or a single op to one clip.
    Apply(ApplyArgs),
    /// Mix two clips and write the mixed label sidecar.
    Mix(MixArgs),
    /// Run the full pipeline over a manifest.
    Pipeline(PipelineArgs),
    /// Print a clip header (and optionally a label sidecar) as JSON.
    Inspect(InspectArgs),
    /// Build a clip from a directory of PNG/PPM/PGM frames.
    Import(ImportArgs),
}

#[derive(Debug, Args)]
struct ApplyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// randaugment-t, randaugment, cutout, frame-cutout, cube-cutout, or an op name
    #[arg(long)]
    op: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 9.0)]
    m: f64,
    /// Explicit first-frame magnitude (randaugment-t; needs --m2)
    #[arg(long, requires = "m2")]
    m1: Option<f64>,
    /// Explicit last-frame magnitude (randaugment-t; needs --m1)
    #[arg(long, requires = "m1")]
    m2: Option<f64>,
    #[arg(long, default_value = "temporal+")]
    mode: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    clip_id: u64,
    /// Direction for a single signed op: plus or minus
    #[arg(long, default_value = "plus")]
    sign: String,
    #[arg(long, default_value_t = 80)]
    box_h: usize,
    #[arg(long, default_value_t = 80)]
    box_w: usize,
    /// Frames erased by frame-cutout and cube-cutout
    #[arg(long, default_value_t = 16)]
    frames: usize,
    /// frame-cutout erases a contiguous run instead of a random subset
    #[arg(long)]
    contiguous: bool,
}

#[derive(Debug, Args)]
struct MixArgs {
    #[arg(long)]
    method: String,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    clip_id: u64,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    label_a: u32,
    #[arg(long)]
    label_b: u32,
    /// Defaults to max(label-a, label-b) + 1
    #[arg(long)]
    num_classes: Option<u32>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    out_label: PathBuf,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// JSON pipeline config; defaults apply when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    in_list: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses all cores
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Classes for integer labels; defaults to max class + 1
    #[arg(long)]
    num_classes: Option<u32>,
}

#[derive(Debug, Args)]
struct InspectArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    label: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ImportArgs {
    #[arg(long)]
    dir: PathBuf,
    #[arg(long, default_value = "*")]
    pattern: String,
    #[arg(long)]
    out: PathBuf,
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Apply(a) => cmd_apply(a),
        Command::Mix(a) => cmd_mix(a),
        Command::Pipeline(a) => cmd_pipeline(a),
        Command::Inspect(a) => cmd_inspect(a),
        Command::Import(a) => cmd_import(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            if e.is_format() {
                EXIT_FORMAT
            } else {
                EXIT_USAGE
            }
        }
    }
}

const CLIP_OPS: [&str; 5] = [
    "randaugment-t",
    "randaugment",
    "cutout",
    "frame-cutout",
    "cube-cutout",
];

fn cmd_apply(args: ApplyArgs) -> CliResult<()> {
    let single = match args.op.parse::<OpKind>() {
        Ok(kind) => Some(kind),
        Err(_) if CLIP_OPS.contains(&args.op.as_str()) => None,
        Err(_) => {
            let ops: Vec<_> = OpKind::ALL.iter().map(|k| k.name()).collect();
            return usage(format!(
                "unknown op `{}`; valid: {}, {}",
                args.op,
                CLIP_OPS.join(", "),
                ops.join(", ")
            ));
        }
    };
    let mode: MagnitudeMode = args.mode.parse().map_err(CliError::Usage)?;
    let sign = match args.sign.as_str() {
        "plus" | "+" => Sign::Plus,
        "minus" | "-" => Sign::Minus,
        other => return usage(format!("unknown sign `{other}`; valid: plus, minus")),
    };
    let clip = read_clip(&args.input)?;
    let mut rng = rng_derive(args.seed, args.clip_id, 0);
    let out = if let Some(kind) = single {
        clip.map_frames(|_, frame| apply_op(&frame, kind, args.m, sign))?
    } else {
        match args.op.as_str() {
            "randaugment-t" => {
                let (m1, m2) = match (args.m1, args.m2) {
                    (Some(m1), Some(m2)) => (m1, m2),
                    _ => sample_magnitude_range(mode, args.m, &mut rng)?,
                };
                randaugment_t(&clip, args.n, m1, m2, &mut rng)?
            }
            "randaugment" => randaugment(&clip, args.n, args.m, &mut rng)?,
            "cutout" => cutout(&clip, args.box_h, args.box_w, &mut rng)?.0,
            "frame-cutout" => frame_cutout(&clip, args.frames, args.contiguous, &mut rng)?.0,
            "cube-cutout" => cube_cutout(&clip, args.box_h, args.box_w, args.frames, &mut rng)?.0,
            _ => unreachable!("checked against CLIP_OPS"),
        }
    };
    write_clip(&out, &args.out)?;
    Ok(())
}

fn cmd_mix(args: MixArgs) -> CliResult<()> {
    let method: MixMethod = args.method.parse().map_err(CliError::Usage)?;
    let num_classes = args
        .num_classes
        .unwrap_or(args.label_a.max(args.label_b).saturating_add(1));
    let label_a = LabelDist::one_hot(args.label_a, num_classes)?;
    let label_b = LabelDist::one_hot(args.label_b, num_classes)?;
    let a = read_clip(&args.a)?;
    let b = read_clip(&args.b)?;
    let mut rng = rng_derive(args.seed, args.clip_id, stream::MIX);
    let result = method.apply(&a, &b, &label_a, &label_b, args.alpha, &mut rng)?;
    write_clip(&result.clip, &args.out)?;
    write_label(&result.label, &args.out_label)?;
    Ok(())
}

fn load_config(path: Option<&Path>) -> CliResult<PipelineConfig> {
    let cfg = match path {
        None => PipelineConfig::default(),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_pipeline(args: PipelineArgs) -> CliResult<()> {
    let cfg = load_config(args.config.as_deref())?;
    let entries = read_manifest(&args.in_list)?;
    if entries.is_empty() {
        return usage(format!(
            "manifest {} has no entries",
            args.in_list.display()
        ));
    }
    let max_class = entries
        .iter()
        .filter_map(|e| match e.label {
            LabelSource::Class(k) => Some(k),
            LabelSource::Sidecar(_) => None,
        })
        .max();
    let num_classes = args.num_classes.or(max_class.map(|k| k.saturating_add(1)));
    let labels: Vec<LabelDist> = entries
        .iter()
        .map(|e| match &e.label {
            LabelSource::Class(k) => {
                LabelDist::one_hot(*k, num_classes.expect("set when a class label exists"))
            }
            LabelSource::Sidecar(p) => read_label(p),
        })
        .collect::<Result<_>>()?;
    fs::create_dir_all(&args.out_dir).map_err(|e| Error::io(&args.out_dir, e))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let n = entries.len();
    let seed = args.seed;
    pool.install(|| {
        (0..n).into_par_iter().try_for_each(|i| -> Result<()> {
            let clip_id = i as u64;
            let clip = read_clip(&entries[i].path)?;
            let partner = match &cfg.mix_method {
                Some(_) => {
                    let j = partner_index(seed, clip_id, n);
                    let fires = rng_derive(seed, clip_id, stream::MIX_GATE).bernoulli(cfg.mix_prob);
                    // an unread partner never influences the output, so skip the decode
                    let partner_clip = if fires {
                        read_clip(&entries[j].path)?
                    } else {
                        clip.clone()
                    };
                    Some((partner_clip, &labels[j]))
                }
                None => None,
            };
            let result = augment_sample(
                (&clip, &labels[i]),
                partner.as_ref().map(|(c, l)| (c, *l)),
                &cfg,
                seed,
                clip_id,
            )?;
            let stem = entries[i]
                .path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("clip");
            let base = args.out_dir.join(format!("{i:05}_{stem}"));
            write_clip(&result.clip, base.with_extension("clip"))?;
            write_label(&result.label, base.with_extension("label.json"))
        })
    })?;
    Ok(())
}

/// Uniform choice among the other entries; a single entry pairs with itself.
fn partner_index(seed: u64, clip_id: u64, n: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    let j = rng_derive(seed, clip_id, stream::PARTNER).below(n as u64 - 1) as usize;
    if j >= clip_id as usize {
        j + 1
    } else {
        j
    }
}

fn cmd_inspect(args: InspectArgs) -> CliResult<()> {
    let header = read_header(&args.input)?;
    // full read so a truncated or padded payload is reported too
    let _: Clip = read_clip(&args.input)?;
    let label = match &args.label {
        Some(path) => {
            let l = read_label(path)?;
            let weights: serde_json::Map<String, serde_json::Value> = l
                .weights()
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            json!({ "num_classes": l.num_classes(), "weights": weights })
        }
        None => serde_json::Value::Null,
    };
    let out = json!({
        "magic": "CLIP",
        "version": crate::io::clipfile::VERSION,
        "dtype": crate::io::clipfile::DTYPE_U8,
        "t": header.t,
        "h": header.h,
        "w": header.w,
        "c": header.c,
        "payload_bytes": header.payload_len(),
        "label": label,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("serializable")
    );
    Ok(())
}

fn cmd_import(args: ImportArgs) -> CliResult<()> {
    let clip = import_frames(&args.dir, &args.pattern)?;
    write_clip(&clip, &args.out)?;
    Ok(())
}
