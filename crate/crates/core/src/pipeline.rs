//! Ordered augmentation pipelines, the shipped presets and their JSON form.
//!
//! Steps run from first to last. Within a step every example of the batch is
//! processed independently with stream `root.derive(i).derive(step)`, and
//! pairwise steps (mixup, cutmix) pick their partner from the batch as it was
//! at the start of that step. A pairwise step draws its partner index first,
//! uniformly over the other examples of the batch (self when the batch has a
//! single example), then runs the kernel on the same stream.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augment::{self, CutParams, LabelMode, MixupParams, WarpParams};
use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::series::{Dataset, LabeledExample, Series};

/// Preset codes in display order.
pub const BUILTIN_CODES: [&str; 8] = ["None", "A", "B", "C", "D", "E", "F", "G"];

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineStep {
    Cutout(CutParams),
    Cutmix { params: CutParams, label_mode: LabelMode },
    Mixup(MixupParams),
    WindowWarp(WarpParams),
}

impl PipelineStep {
    pub fn kind(&self) -> &'static str {
        match self {
            PipelineStep::Cutout(_) => "cutout",
            PipelineStep::Cutmix { .. } => "cutmix",
            PipelineStep::Mixup(_) => "mixup",
            PipelineStep::WindowWarp(_) => "window_warp",
        }
    }

    pub fn is_pairwise(&self) -> bool {
        matches!(self, PipelineStep::Cutmix { .. } | PipelineStep::Mixup(_))
    }

    fn cutmix(p: f64, cp: f64) -> Self {
        PipelineStep::Cutmix {
            params: CutParams::new(p, cp),
            label_mode: LabelMode::KeepFirst,
        }
    }

    fn cutout(p: f64, cp: f64) -> Self {
        PipelineStep::Cutout(CutParams::new(p, cp))
    }

    fn mixup(p: f64) -> Self {
        PipelineStep::Mixup(MixupParams::new(p))
    }

    fn warp(p: f64, s: f64) -> Self {
        PipelineStep::WindowWarp(WarpParams::new(p, s))
    }

    fn validate(&self) -> std::result::Result<(), String> {
        match self {
            PipelineStep::Cutout(p) | PipelineStep::Cutmix { params: p, .. } => p.validate(),
            PipelineStep::Mixup(p) => p.validate(),
            PipelineStep::WindowWarp(p) => p.validate(),
        }
    }

    /// Same step with its application probability replaced.
    pub fn with_p_apply(&self, p: f64) -> Self {
        let mut s = self.clone();
        match &mut s {
            PipelineStep::Cutout(c) | PipelineStep::Cutmix { params: c, .. } => c.p_apply = p,
            PipelineStep::Mixup(m) => m.p_apply = p,
            PipelineStep::WindowWarp(w) => w.p_apply = p,
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub code: String,
    pub steps: Vec<PipelineStep>,
}

impl PipelineConfig {
    pub fn new(code: impl Into<String>, steps: Vec<PipelineStep>) -> Result<Self> {
        let cfg = Self {
            code: code.into(),
            steps,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps.is_empty() && self.code != "None" {
            return Err(Error::Config {
                path: "steps".into(),
                message: "a pipeline other than `None` needs at least one step".into(),
            });
        }
        for (i, step) in self.steps.iter().enumerate() {
            step.validate().map_err(|message| Error::Config {
                path: format!("steps[{i}]"),
                message,
            })?;
        }
        Ok(())
    }

    /// Copy of this pipeline with every step's application probability set to `p`.
    pub fn with_p_apply(&self, p: f64) -> Self {
        Self {
            code: self.code.clone(),
            steps: self.steps.iter().map(|s| s.with_p_apply(p)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = ConfigDoc {
            code: self.code.clone(),
            steps: self.steps.iter().map(StepDoc::from).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("config serialization cannot fail")
    }
}

/// The step list of a preset.
pub fn builtin_pipeline(code: &str) -> Result<PipelineConfig> {
    use PipelineStep as S;
    let steps = match code {
        "None" => vec![],
        "A" => vec![S::cutmix(0.8, 0.5), S::cutout(0.8, 0.5), S::mixup(0.8)],
        "B" => vec![
            S::cutmix(0.8, 0.2),
            S::cutmix(0.8, 0.2),
            S::cutout(0.8, 0.2),
            S::mixup(0.8),
        ],
        "C" => vec![S::cutout(0.5, 0.3), S::cutout(0.5, 0.3)],
        "D" => vec![S::mixup(0.5), S::mixup(0.5)],
        "E" => vec![S::cutmix(0.5, 0.3), S::cutmix(0.5, 0.3)],
        "F" => vec![S::warp(0.5, 0.5), S::warp(0.5, 2.0)],
        "G" => vec![
            S::cutmix(0.8, 0.2),
            S::cutout(0.8, 0.2),
            S::cutout(0.8, 0.2),
            S::mixup(0.8),
            S::warp(0.5, 0.5),
            S::warp(0.5, 2.0),
        ],
        _ => {
            return Err(Error::UnknownPipeline {
                code: code.to_string(),
                valid: BUILTIN_CODES.join(", "),
            })
        }
    };
    Ok(PipelineConfig {
        code: code.to_string(),
        steps,
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    code: String,
    steps: Vec<StepDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepDoc {
    kind: String,
    p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label_mode: Option<LabelMode>,
}

impl From<&PipelineStep> for StepDoc {
    fn from(step: &PipelineStep) -> Self {
        let mut doc = StepDoc {
            kind: step.kind().to_string(),
            p: 0.0,
            cp: None,
            s: None,
            m_min: None,
            m_max: None,
            label_mode: None,
        };
        match step {
            PipelineStep::Cutout(c) => {
                doc.p = c.p_apply;
                doc.cp = Some(c.channel_prob);
            }
            PipelineStep::Cutmix { params, label_mode } => {
                doc.p = params.p_apply;
                doc.cp = Some(params.channel_prob);
                doc.label_mode = Some(*label_mode);
            }
            PipelineStep::Mixup(m) => {
                doc.p = m.p_apply;
                doc.m_min = Some(m.m_min);
                doc.m_max = Some(m.m_max);
            }
            PipelineStep::WindowWarp(w) => {
                doc.p = w.p_apply;
                doc.s = Some(w.scale);
            }
        }
        doc
    }
}

impl StepDoc {
    fn into_step(self, path: &str) -> Result<PipelineStep> {
        let err = |field: &str, message: String| Error::Config {
            path: format!("{path}.{field}"),
            message,
        };
        let reject = |field: &str, present: bool| {
            if present {
                Err(err(field, format!("not allowed for kind `{}`", self.kind)))
            } else {
                Ok(())
            }
        };
        let step = match self.kind.as_str() {
            "cutout" | "cutmix" => {
                reject("s", self.s.is_some())?;
                reject("m_min", self.m_min.is_some())?;
                reject("m_max", self.m_max.is_some())?;
                // no cp means every channel is selected
                let params = CutParams::new(self.p, self.cp.unwrap_or(1.0));
                if self.kind == "cutout" {
                    reject("label_mode", self.label_mode.is_some())?;
                    PipelineStep::Cutout(params)
                } else {
                    PipelineStep::Cutmix {
                        params,
                        label_mode: self.label_mode.unwrap_or_default(),
                    }
                }
            }
            "mixup" => {
                reject("cp", self.cp.is_some())?;
                reject("s", self.s.is_some())?;
                reject("label_mode", self.label_mode.is_some())?;
                let mut m = MixupParams::new(self.p);
                m.m_min = self.m_min.unwrap_or(m.m_min);
                m.m_max = self.m_max.unwrap_or(m.m_max);
                PipelineStep::Mixup(m)
            }
            "window_warp" => {
                reject("cp", self.cp.is_some())?;
                reject("m_min", self.m_min.is_some())?;
                reject("m_max", self.m_max.is_some())?;
                reject("label_mode", self.label_mode.is_some())?;
                let s = self.s.ok_or_else(|| err("s", "missing scale factor".into()))?;
                PipelineStep::WindowWarp(WarpParams::new(self.p, s))
            }
            other => {
                return Err(err(
                    "kind",
                    format!("unknown kind `{other}` (expected cutout, cutmix, mixup or window_warp)"),
                ))
            }
        };
        step.validate().map_err(|message| Error::Config {
            path: path.to_string(),
            message,
        })?;
        Ok(step)
    }
}

/// Parse a JSON pipeline document.
pub fn parse_pipeline_config(text: &str) -> Result<PipelineConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ConfigDoc = serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    let steps = doc
        .steps
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.into_step(&format!("steps[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    PipelineConfig::new(doc.code, steps)
}

/// Resolve a preset code, or else read a config file at that path.
pub fn load_pipeline(code_or_path: &str) -> Result<PipelineConfig> {
    if BUILTIN_CODES.contains(&code_or_path) {
        return builtin_pipeline(code_or_path);
    }
    let path = Path::new(code_or_path);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        return parse_pipeline_config(&text);
    }
    builtin_pipeline(code_or_path)
}

fn partner_index(stream: &mut RandomStream, i: usize, n: usize) -> usize {
    if n < 2 {
        return i;
    }
    let k = stream.uniform_index(0, n - 2);
    if k >= i {
        k + 1
    } else {
        k
    }
}

fn apply_step(
    step: &PipelineStep,
    snapshot: &[LabeledExample],
    i: usize,
    stream: &mut RandomStream,
) -> Result<LabeledExample> {
    let x = &snapshot[i];
    match step {
        PipelineStep::Cutout(p) => Ok(augment::cutout(x, p, stream)),
        PipelineStep::WindowWarp(p) => augment::window_warp(x, p, stream),
        PipelineStep::Cutmix { params, label_mode } => {
            let j = partner_index(stream, i, snapshot.len());
            augment::cutmix(x, &snapshot[j], params, *label_mode, stream)
        }
        PipelineStep::Mixup(p) => {
            let j = partner_index(stream, i, snapshot.len());
            augment::mixup(x, &snapshot[j], p, stream)
        }
    }
}

/// Run every step of `config` over the batch.
pub fn apply_pipeline(
    batch: &[LabeledExample],
    config: &PipelineConfig,
    stream: &RandomStream,
) -> Result<Vec<LabeledExample>> {
    let Some(first) = batch.first() else {
        return Err(Error::Contract("apply_pipeline needs a nonempty batch".into()));
    };
    let shape = first.series.shape();
    let k = first.label.len();
    if let Some((i, bad)) = batch
        .iter()
        .enumerate()
        .find(|(_, e)| e.series.shape() != shape || e.label.len() != k)
    {
        return Err(Error::Shape {
            expected: format!("{shape:?} with {k} classes"),
            actual: format!("{:?} with {} classes at index {i}", bad.series.shape(), bad.label.len()),
        });
    }

    let mut current = batch.to_vec();
    for (j, step) in config.steps.iter().enumerate() {
        let snapshot = current;
        current = (0..snapshot.len())
            .into_par_iter()
            .map(|i| {
                let mut s = stream.derive(i as u64).derive(j as u64);
                apply_step(step, &snapshot, i, &mut s)
            })
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(current)
}

/// Produce `passes` augmented copies of a dataset, concatenated in pass order.
///
/// Pass `k` uses stream `RandomStream::new(seed).derive(k)`. With
/// `batch_size == 0` (or at least the dataset size) the whole dataset is one
/// batch run on the pass stream itself. Otherwise the pass stream's child 0
/// shuffles the example order, consecutive chunks of `batch_size` form the
/// batches, batch `b` runs on child `b + 1`, and results are written back to
/// each example's original position.
pub fn augment_dataset(
    ds: &Dataset,
    config: &PipelineConfig,
    seed: u64,
    passes: usize,
    batch_size: usize,
) -> Result<Dataset> {
    let n = ds.len();
    let root = RandomStream::new(seed);
    let mut examples = Vec::with_capacity(n * passes);
    for pass in 0..passes {
        let pass_stream = root.derive(pass as u64);
        if n == 0 {
            continue;
        }
        if batch_size == 0 || batch_size >= n {
            examples.extend(apply_pipeline(&ds.examples, config, &pass_stream)?);
            continue;
        }
        let mut order: Vec<usize> = (0..n).collect();
        pass_stream.derive(0).shuffle(&mut order);
        let batches: Vec<Vec<LabeledExample>> = order
            .par_chunks(batch_size)
            .enumerate()
            .map(|(b, idx)| {
                let batch: Vec<LabeledExample> = idx.iter().map(|&i| ds.examples[i].clone()).collect();
                apply_pipeline(&batch, config, &pass_stream.derive(b as u64 + 1))
            })
            .collect::<Result<_>>()?;
        let mut slots: Vec<Option<LabeledExample>> = vec![None; n];
        for (idx, out) in order.chunks(batch_size).zip(batches) {
            for (&i, e) in idx.iter().zip(out) {
                slots[i] = Some(e);
            }
        }
        examples.extend(slots.into_iter().map(|e| e.expect("every slot filled")));
    }
    Dataset::new(ds.name.clone(), ds.class_names.clone(), examples)
}

/// Array-level entry point for foreign callers.
///
/// `values` is `(n, c, l)` row-major and `labels` is `(n, k)` row-major soft
/// labels. Equivalent to one pass of [`augment_dataset`].
#[allow(clippy::too_many_arguments)]
pub fn augment_arrays(
    values: &[f32],
    labels: &[f64],
    shape: (usize, usize, usize, usize),
    config: &PipelineConfig,
    seed: u64,
    batch_size: usize,
) -> Result<(Vec<f32>, Vec<f64>)> {
    let (n, c, l, k) = shape;
    if values.len() != n * c * l || labels.len() != n * k {
        return Err(Error::Shape {
            expected: format!("{} values and {} labels for (n={n}, c={c}, l={l}, k={k})", n * c * l, n * k),
            actual: format!("{} values and {} labels", values.len(), labels.len()),
        });
    }
    let examples = (0..n)
        .map(|i| {
            let series = Series::new(c, l, values[i * c * l..(i + 1) * c * l].to_vec())?;
            LabeledExample::new(series, labels[i * k..(i + 1) * k].to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    let class_names = (0..k).map(|i| i.to_string()).collect();
    let ds = Dataset::new("", class_names, examples)?;
    let out = augment_dataset(&ds, config, seed, 1, batch_size)?;
    let mut v = Vec::with_capacity(values.len());
    let mut y = Vec::with_capacity(labels.len());
    for e in out.examples {
        v.extend_from_slice(e.series.values());
        y.extend_from_slice(&e.label);
    }
    Ok((v, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_f_and_c() {
        let f = builtin_pipeline("F").unwrap();
        assert_eq!(f.steps.len(), 2);
        let scales: Vec<f64> = f
            .steps
            .iter()
            .map(|s| match s {
                PipelineStep::WindowWarp(w) => w.scale,
                _ => panic!("F holds only window warps"),
            })
            .collect();
        assert_eq!(scales, [0.5, 2.0]);

        let c = builtin_pipeline("C").unwrap();
        assert_eq!(c.steps, vec![PipelineStep::Cutout(CutParams::new(0.5, 0.3)); 2]);
        assert!(builtin_pipeline("None").unwrap().steps.is_empty());
    }

    #[test]
    fn unknown_code_lists_valid() {
        let msg = builtin_pipeline("Z").unwrap_err().to_string();
        assert!(msg.contains("None, A, B, C, D, E, F, G"), "{msg}");
    }

    #[test]
    fn json_round_trip_every_preset() {
        for code in BUILTIN_CODES {
            let cfg = builtin_pipeline(code).unwrap();
            assert_eq!(parse_pipeline_config(&cfg.to_json()).unwrap(), cfg);
        }
    }

    #[test]
    fn schema_errors_name_the_field() {
        let e = parse_pipeline_config(r#"{"code":"X","steps":[{"kind":"cutout","p":1.5,"cp":0.5}]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("steps[0]") && e.contains("p = 1.5"), "{e}");

        let e = parse_pipeline_config(r#"{"code":"X","steps":[{"kind":"jitter","p":0.5}]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("steps[0].kind") && e.contains("jitter"), "{e}");

        let e = parse_pipeline_config(r#"{"code":"X","steps":[{"kind":"mixup","p":0.5,"sigma":1}]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("steps[0]") && e.contains("sigma"), "{e}");

        let e = parse_pipeline_config(r#"{"code":"X","steps":[{"kind":"window_warp","p":0.5,"s":0}]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("steps[0]") && e.contains("s must be"), "{e}");

        let e = parse_pipeline_config(r#"{"code":"X","steps":[{"kind":"mixup","p":0.5,"cp":0.5}]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("steps[0].cp"), "{e}");

        assert!(parse_pipeline_config(r#"{"code":"X","steps":[]}"#).is_err());
        assert!(parse_pipeline_config(r#"{"code":"None","steps":[]}"#).is_ok());
    }

    #[test]
    fn optional_fields_default() {
        let cfg = parse_pipeline_config(
            r#"{"code":"X","steps":[{"kind":"cutmix","p":0.5},{"kind":"mixup","p":0.5}]}"#,
        )
        .unwrap();
        assert_eq!(
            cfg.steps,
            vec![
                PipelineStep::Cutmix {
                    params: CutParams::new(0.5, 1.0),
                    label_mode: LabelMode::KeepFirst
                },
                PipelineStep::Mixup(MixupParams::new(0.5)),
            ]
        );
    }

    #[test]
    fn partner_never_self_in_larger_batches() {
        let mut s = RandomStream::new(1);
        for n in 2..10 {
            for i in 0..n {
                for _ in 0..50 {
                    let j = partner_index(&mut s, i, n);
                    assert!(j < n && j != i);
                }
            }
        }
        assert_eq!(partner_index(&mut s, 0, 1), 0);
    }

    #[test]
    fn heterogeneous_batch_rejected() {
        let a = LabeledExample::with_class(Series::zeros(1, 4), 0, 1).unwrap();
        let b = LabeledExample::with_class(Series::zeros(1, 5), 0, 1).unwrap();
        let cfg = builtin_pipeline("C").unwrap();
        assert!(apply_pipeline(&[a, b], &cfg, &RandomStream::new(0)).is_err());
        assert!(apply_pipeline(&[], &cfg, &RandomStream::new(0)).is_err());
    }
}
