//! A 1-nearest-neighbour baseline for sanity-checking augmented data end to end.

use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::series::{Dataset, LabeledExample, Series};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PredictionSet {
    pub predicted: Vec<usize>,
    pub actual: Vec<usize>,
}

fn sq_dist(a: &[f32], b: &[f32]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum()
}

/// Hard label of the training example nearest to `query` (squared Euclidean
/// over the flattened series, ties to the lowest index).
pub fn knn1_classify(train: &Dataset, query: &Series) -> Result<usize> {
    let Some(shape) = train.shape() else {
        return Err(Error::Contract("1-NN needs a nonempty training set".into()));
    };
    if query.shape() != shape {
        return Err(Error::Shape {
            expected: format!("{shape:?}"),
            actual: format!("{:?}", query.shape()),
        });
    }
    let mut best = (f64::INFINITY, 0);
    for (i, ex) in train.examples.iter().enumerate() {
        let d = sq_dist(ex.series.values(), query.values());
        if d < best.0 {
            best = (d, i);
        }
    }
    Ok(train.examples[best.1].hard_label())
}

/// Classify every test example in parallel.
pub fn predict(train: &Dataset, test: &Dataset) -> Result<PredictionSet> {
    let predicted = test
        .examples
        .par_iter()
        .map(|ex| knn1_classify(train, &ex.series))
        .collect::<Result<Vec<_>>>()?;
    let actual = test.examples.iter().map(LabeledExample::hard_label).collect();
    Ok(PredictionSet { predicted, actual })
}

pub fn accuracy(p: &PredictionSet) -> Result<f64> {
    if p.predicted.len() != p.actual.len() {
        return Err(Error::Contract(format!(
            "{} predictions for {} labels",
            p.predicted.len(),
            p.actual.len()
        )));
    }
    if p.predicted.is_empty() {
        return Err(Error::Contract("accuracy of an empty prediction set".into()));
    }
    let hits = p.predicted.iter().zip(&p.actual).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / p.predicted.len() as f64)
}

/// Cycles over the series for each of the three synthetic classes.
pub const SINUSOID_CYCLES: [f64; 3] = [1.0, 2.0, 4.0];

/// Three-class synthetic train/test pair: channel 0 is `sin`, channel 1 is
/// `cos` at 1, 2 or 4 cycles, with a small random phase (±0.3 rad) per
/// example and Gaussian noise of standard deviation `noise`. Classes cycle
/// `0, 1, 2, 0, ...` through each split.
pub fn synthetic_sinusoids(n_train: usize, n_test: usize, length: usize, noise: f64, seed: u64) -> (Dataset, Dataset) {
    let normal = Normal::new(0.0, noise).expect("noise must be finite and non-negative");
    let root = RandomStream::new(seed);
    let make = |split: u64, n: usize, name: &str| {
        let split_stream = root.derive(split);
        let examples = (0..n)
            .map(|i| {
                let class = i % SINUSOID_CYCLES.len();
                let mut s = split_stream.derive(i as u64);
                let phase = (s.uniform_real() - 0.5) * 0.6;
                let w = 2.0 * std::f64::consts::PI * SINUSOID_CYCLES[class] / length as f64;
                let mut values = Vec::with_capacity(2 * length);
                for t in 0..length {
                    values.push(((w * t as f64 + phase).sin() + normal.sample(&mut s)) as f32);
                }
                for t in 0..length {
                    values.push(((w * t as f64 + phase).cos() + normal.sample(&mut s)) as f32);
                }
                let series = Series::new(2, length, values).expect("finite synthetic values");
                LabeledExample::with_class(series, class, SINUSOID_CYCLES.len()).expect("valid class")
            })
            .collect();
        let names = SINUSOID_CYCLES.iter().map(|c| format!("f{c}")).collect();
        Dataset::new(name, names, examples).expect("homogeneous synthetic dataset")
    };
    (make(0, n_train, "Sinusoids"), make(1, n_test, "Sinusoids"))
}
