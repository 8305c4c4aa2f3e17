//! Command-line interface. Exit codes: 0 success, 2 usage error, 3 data error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evalkit;
use crate::ingest::{self, load_dataset, save_dataset};
use crate::pipeline::{self, augment_dataset, PipelineConfig, BUILTIN_CODES};
use crate::resample;
use crate::series::Dataset;
use crate::stats;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

/// Environment variable consulted for `--seed` when the flag is absent.
pub const SEED_ENV: &str = "MTSAUG_SEED";

#[derive(Debug, Parser)]
#[command(name = "mtsaug", version, about = "Deterministic multivariate time-series augmentation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write augmented passes over a dataset.
    Augment {
        #[arg(long)]
        input: PathBuf,
        /// Preset code (None, A-G), a config file, or a name under configs/.
        #[arg(long)]
        pipeline: String,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        epoch_multiplier: usize,
        /// Examples per pairing batch; 0 treats the whole dataset as one batch.
        #[arg(long, default_value_t = 64)]
        batch_size: usize,
        /// Output path; `.csv` exports CSV, `.ts` writes text, anything else `.mtsb`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write fold index files for seeded class-preserving resplits.
    Resample {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long)]
        folds: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        outdir: PathBuf,
        /// Also write each fold's datasets as `.mtsb`.
        #[arg(long)]
        materialize: bool,
    },
    /// Export one example before and after augmentation as CSV.
    Preview {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        pipeline: String,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        example: usize,
        #[arg(long, default_value_t = 64)]
        batch_size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Welch significance table of every code against a baseline.
    Stats {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value = "None")]
        baseline: String,
        /// CSV output; an aligned-text copy is written next to it with a `.txt` extension.
        #[arg(long)]
        out: PathBuf,
    },
    /// Best code per dataset against reference accuracies.
    Best {
        #[arg(long)]
        records: PathBuf,
        /// CSV with `dataset,accuracy,algorithm`, accuracy in percent.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a dataset against the archive summary table.
    Validate {
        #[arg(long)]
        input: PathBuf,
        /// Dataset name or short code.
        #[arg(long)]
        meta: String,
        /// Optional test split, checked with role-specific sizes.
        #[arg(long)]
        test: Option<PathBuf>,
    },
    /// Generate the synthetic three-class sinusoid dataset.
    Synth {
        #[arg(long)]
        out_train: PathBuf,
        #[arg(long)]
        out_test: PathBuf,
        #[arg(long, default_value_t = 60)]
        n_train: usize,
        #[arg(long, default_value_t = 60)]
        n_test: usize,
        #[arg(long, default_value_t = 64)]
        length: usize,
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
    /// Print a resolved pipeline as JSON.
    Config {
        #[arg(long)]
        pipeline: String,
    },
    /// 1-NN accuracy, optionally training on an augmented copy of the train set.
    Knn {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long)]
        pipeline: Option<String>,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        epoch_multiplier: usize,
        #[arg(long, default_value_t = 64)]
        batch_size: usize,
        /// Keep the clean training examples alongside the augmented ones.
        #[arg(long)]
        include_original: bool,
    },
}

/// Written as `<output>.manifest.json` next to primary outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub seed: Option<u64>,
    pub config_paths: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub tool_version: String,
    pub wall_time_ms: u128,
}

struct Run {
    started: Instant,
    manifest: RunManifest,
}

impl Run {
    fn new(command: &str, seed: Option<u64>) -> Self {
        Self {
            started: Instant::now(),
            manifest: RunManifest {
                command: command.to_string(),
                seed,
                config_paths: Vec::new(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                tool_version: crate::VERSION.to_string(),
                wall_time_ms: 0,
            },
        }
    }

    fn input(&mut self, p: &Path) {
        self.manifest.inputs.push(p.display().to_string());
    }

    fn output(&mut self, p: &Path) {
        self.manifest.outputs.push(p.display().to_string());
    }

    fn finish(mut self, path: &Path) -> Result<()> {
        self.manifest.wall_time_ms = self.started.elapsed().as_millis();
        let text = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Resolve `--pipeline`: preset code, then file path, then `configs/<name>.json`.
fn resolve_pipeline(spec: &str, run: &mut Run) -> Result<PipelineConfig> {
    if BUILTIN_CODES.contains(&spec) {
        return pipeline::builtin_pipeline(spec);
    }
    let candidates = [PathBuf::from(spec), Path::new("configs").join(format!("{spec}.json"))];
    for path in candidates {
        if path.is_file() {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            run.manifest.config_paths.push(path.display().to_string());
            return pipeline::parse_pipeline_config(&text);
        }
    }
    pipeline::builtin_pipeline(spec)
}

fn load(path: &Path, run: &mut Run) -> Result<Dataset> {
    run.input(path);
    load_dataset(path)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Augment {
            input,
            pipeline,
            seed,
            epoch_multiplier,
            batch_size,
            out,
        } => {
            let mut run = Run::new("augment", Some(seed));
            let config = resolve_pipeline(&pipeline, &mut run)?;
            let ds = load(&input, &mut run)?;
            let augmented = augment_dataset(&ds, &config, seed, epoch_multiplier, batch_size)?;
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
            save_dataset(&augmented, &out)?;
            run.output(&out);
            eprintln!(
                "wrote {} examples ({} passes of {}) to {}",
                augmented.len(),
                epoch_multiplier,
                ds.len(),
                out.display()
            );
            run.finish(&manifest_path(&out))
        }
        Command::Resample {
            train,
            test,
            folds,
            seed,
            outdir,
            materialize,
        } => {
            let mut run = Run::new("resample", Some(seed));
            let tr = load(&train, &mut run)?;
            let te = load(&test, &mut run)?;
            std::fs::create_dir_all(&outdir).map_err(|e| Error::io(&outdir, e))?;
            for fold in 0..=folds {
                let (idx, _) = resample::split_indices(&tr, &te, fold, seed)?;
                for (role, list) in [("train", &idx.train), ("test", &idx.test)] {
                    let path = outdir.join(format!("fold_{fold}.{role}.idx"));
                    let body: String = list.iter().map(|i| format!("{i}\n")).collect();
                    write_text(&path, &body)?;
                    run.output(&path);
                }
                if materialize {
                    let (a, b) = resample::resample_split(&tr, &te, fold, seed)?;
                    for (role, ds) in [("train", a), ("test", b)] {
                        let path = outdir.join(format!("fold_{fold}.{role}.mtsb"));
                        save_dataset(&ds, &path)?;
                        run.output(&path);
                    }
                }
            }
            eprintln!("wrote folds 0..={folds} to {}", outdir.display());
            run.finish(&outdir.join("manifest.json"))
        }
        Command::Preview {
            input,
            pipeline,
            seed,
            example,
            batch_size,
            out,
        } => {
            let mut run = Run::new("preview", Some(seed));
            let config = resolve_pipeline(&pipeline, &mut run)?;
            let ds = load(&input, &mut run)?;
            if example >= ds.len() {
                return Err(Error::Contract(format!(
                    "example index {example} out of range for {} examples",
                    ds.len()
                )));
            }
            let augmented = augment_dataset(&ds, &config, seed, 1, batch_size)?;
            write_text(&out, &ingest::preview_csv(&ds.examples[example], &augmented.examples[example]))?;
            run.output(&out);
            run.finish(&manifest_path(&out))
        }
        Command::Stats { records, baseline, out } => {
            let mut run = Run::new("stats", None);
            run.input(&records);
            let text = std::fs::read_to_string(&records).map_err(|e| Error::io(&records, e))?;
            let recs = stats::parse_records_csv(&text)?;
            let table = stats::significance_table(&recs, &baseline)?;
            write_text(&out, &table.to_csv())?;
            run.output(&out);
            let txt = out.with_extension("txt");
            let rendered = table.to_text();
            write_text(&txt, &rendered)?;
            run.output(&txt);
            print!("{rendered}");
            run.finish(&manifest_path(&out))
        }
        Command::Best { records, reference, out } => {
            let mut run = Run::new("best", None);
            run.input(&records);
            let text = std::fs::read_to_string(&records).map_err(|e| Error::io(&records, e))?;
            let recs = stats::parse_records_csv(&text)?;
            let refs = match &reference {
                Some(p) => {
                    run.input(p);
                    let t = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                    stats::parse_reference_csv(&t)?
                }
                None => Default::default(),
            };
            let report = stats::best_vs_reference(&recs, &refs);
            write_text(&out, &report.to_csv())?;
            run.output(&out);
            print!("{}", report.to_text());
            run.finish(&manifest_path(&out))
        }
        Command::Validate { input, meta, test } => {
            let meta = ingest::lookup_meta(&meta)?;
            let ds = load_dataset(&input)?;
            let report = match test {
                Some(t) => ingest::validate_pair(&ds, &load_dataset(&t)?, &meta),
                None => ingest::validate_meta(&ds, &meta),
            };
            print!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(Error::Contract(format!(
                    "dataset does not match {} on: {}",
                    meta.name,
                    report.failures().map(|c| c.field).collect::<Vec<_>>().join(", ")
                )))
            }
        }
        Command::Synth {
            out_train,
            out_test,
            n_train,
            n_test,
            length,
            noise,
            seed,
        } => {
            if length == 0 || !(noise.is_finite() && noise >= 0.0) {
                return Err(Error::Contract("length must be >= 1 and noise a non-negative number".into()));
            }
            let (tr, te) = evalkit::synthetic_sinusoids(n_train, n_test, length, noise, seed);
            save_dataset(&tr, &out_train)?;
            save_dataset(&te, &out_test)?;
            Ok(())
        }
        Command::Config { pipeline } => {
            let mut run = Run::new("config", None);
            print!("{}", resolve_pipeline(&pipeline, &mut run)?.to_json());
            Ok(())
        }
        Command::Knn {
            train,
            test,
            pipeline,
            seed,
            epoch_multiplier,
            batch_size,
            include_original,
        } => {
            let mut run = Run::new("knn", Some(seed));
            let mut tr = load(&train, &mut run)?;
            let te = load(&test, &mut run)?;
            if let Some(spec) = pipeline {
                let config = resolve_pipeline(&spec, &mut run)?;
                let aug = augment_dataset(&tr, &config, seed, epoch_multiplier, batch_size)?;
                if include_original {
                    tr.examples.extend(aug.examples);
                } else {
                    tr = aug;
                }
            }
            let acc = evalkit::accuracy(&evalkit::predict(&tr, &te)?)?;
            println!("accuracy {acc:.6} ({} train, {} test)", tr.len(), te.len());
            Ok(())
        }
    }
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}
