//! Domain types shared by every module: series, soft-labelled examples and datasets.

use crate::error::{Error, Result};

/// Tolerance on the sum of a soft label.
pub const LABEL_SUM_TOL: f64 = 1e-6;

/// One multivariate series, stored channel-major: `values[ch * len + t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    channels: usize,
    len: usize,
    values: Vec<f32>,
}

impl Series {
    pub fn new(channels: usize, len: usize, values: Vec<f32>) -> Result<Self> {
        if channels == 0 || len == 0 {
            return Err(Error::Shape {
                expected: "at least 1 channel and 1 time step".into(),
                actual: format!("({channels}, {len})"),
            });
        }
        if values.len() != channels * len {
            return Err(Error::Shape {
                expected: format!("{} values for ({channels}, {len})", channels * len),
                actual: format!("{} values", values.len()),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Contract(format!(
                "non-finite value at channel {}, step {}",
                pos / len,
                pos % len
            )));
        }
        Ok(Self {
            channels,
            len,
            values,
        })
    }

    pub fn from_channels(rows: &[Vec<f32>]) -> Result<Self> {
        let len = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != len) {
            return Err(Error::Shape {
                expected: format!("every channel of length {len}"),
                actual: format!("a channel of length {}", bad.len()),
            });
        }
        Self::new(rows.len(), len, rows.concat())
    }

    pub fn zeros(channels: usize, len: usize) -> Self {
        assert!(channels > 0 && len > 0, "series shape must be positive");
        Self {
            channels,
            len,
            values: vec![0.0; channels * len],
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Number of time steps.
    pub fn length(&self) -> usize {
        self.len
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.channels, self.len)
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f32> {
        self.values
    }

    pub fn channel(&self, ch: usize) -> &[f32] {
        &self.values[ch * self.len..(ch + 1) * self.len]
    }

    pub(crate) fn channel_mut(&mut self, ch: usize) -> &mut [f32] {
        &mut self.values[ch * self.len..(ch + 1) * self.len]
    }

    pub fn get(&self, ch: usize, t: usize) -> f32 {
        self.values[ch * self.len + t]
    }

    /// Bitwise equality, distinguishing `0.0` from `-0.0`.
    pub fn bits_eq(&self, other: &Series) -> bool {
        self.shape() == other.shape()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// A series with a probability vector over the dataset's classes.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledExample {
    pub series: Series,
    pub label: Vec<f64>,
}

impl LabeledExample {
    pub fn new(series: Series, label: Vec<f64>) -> Result<Self> {
        check_simplex(&label)?;
        Ok(Self { series, label })
    }

    pub fn with_class(series: Series, class: usize, n_classes: usize) -> Result<Self> {
        if class >= n_classes {
            return Err(Error::Label(format!(
                "class index {class} out of range for {n_classes} classes"
            )));
        }
        Ok(Self {
            series,
            label: one_hot(class, n_classes),
        })
    }

    /// Arg-max of the soft label, lowest index on ties.
    pub fn hard_label(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.label.iter().enumerate() {
            if p > self.label[best] {
                best = i;
            }
        }
        best
    }

    pub fn bits_eq(&self, other: &LabeledExample) -> bool {
        self.series.bits_eq(&other.series)
            && self.label.len() == other.label.len()
            && self
                .label
                .iter()
                .zip(&other.label)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

pub fn one_hot(class: usize, n_classes: usize) -> Vec<f64> {
    let mut v = vec![0.0; n_classes];
    v[class] = 1.0;
    v
}

fn check_simplex(label: &[f64]) -> Result<()> {
    if label.is_empty() {
        return Err(Error::Label("empty label vector".into()));
    }
    if label.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::Label(format!("negative or non-finite entry in {label:?}")));
    }
    let sum: f64 = label.iter().sum();
    if (sum - 1.0).abs() > LABEL_SUM_TOL {
        return Err(Error::Label(format!("entries sum to {sum}, expected 1")));
    }
    Ok(())
}

/// Elementwise mean of two soft labels.
pub fn average_labels(y1: &[f64], y2: &[f64]) -> Result<Vec<f64>> {
    if y1.len() != y2.len() {
        return Err(Error::Label(format!(
            "cannot average labels of length {} and {}",
            y1.len(),
            y2.len()
        )));
    }
    Ok(y1.iter().zip(y2).map(|(a, b)| (a + b) / 2.0).collect())
}

/// An ordered collection of equal-shape examples over a fixed class list.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub class_names: Vec<String>,
    pub examples: Vec<LabeledExample>,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        class_names: Vec<String>,
        examples: Vec<LabeledExample>,
    ) -> Result<Self> {
        let k = class_names.len();
        if k == 0 {
            return Err(Error::Label("dataset needs at least one class".into()));
        }
        if let Some(first) = examples.first() {
            let shape = first.series.shape();
            for (i, ex) in examples.iter().enumerate() {
                if ex.series.shape() != shape {
                    return Err(Error::Shape {
                        expected: format!("{shape:?} for every example"),
                        actual: format!("{:?} at example {i}", ex.series.shape()),
                    });
                }
                if ex.label.len() != k {
                    return Err(Error::Label(format!(
                        "example {i} has {} label entries, dataset has {k} classes",
                        ex.label.len()
                    )));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            class_names,
            examples,
        })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// `(channels, length)` shared by all examples; `None` when empty.
    pub fn shape(&self) -> Option<(usize, usize)> {
        self.examples.first().map(|e| e.series.shape())
    }

    /// Examples per class, indexed by hard label.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for ex in &self.examples {
            counts[ex.hard_label()] += 1;
        }
        counts
    }

    pub fn bits_eq(&self, other: &Dataset) -> bool {
        self.name == other.name
            && self.class_names == other.class_names
            && self.examples.len() == other.examples.len()
            && self
                .examples
                .iter()
                .zip(&other.examples)
                .all(|(a, b)| a.bits_eq(b))
    }
}
