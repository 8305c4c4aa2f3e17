//! Seeded regeneration of train/test splits that keeps per-class counts.
//!
//! Train and test are concatenated (`train ∥ test`). For fold `f >= 1` the
//! stream `RandomStream::new(seed).derive(f)` shuffles each class's indices in
//! turn (classes in declaration order, Fisher-Yates), and the first
//! `train_count[class]` shuffled indices go to the new train split. Both
//! index lists are returned sorted ascending. Fold 0 is the original split.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::series::Dataset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSpec {
    pub fold_index: usize,
    pub seed: u64,
    pub per_class_train_counts: BTreeMap<String, usize>,
    pub per_class_test_counts: BTreeMap<String, usize>,
}

/// Indices into the concatenated `train ∥ test` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

fn check_compatible(train: &Dataset, test: &Dataset) -> Result<()> {
    if train.class_names != test.class_names {
        return Err(Error::Resample(format!(
            "class sets differ: train {:?}, test {:?}",
            train.class_names, test.class_names
        )));
    }
    if let (Some(a), Some(b)) = (train.shape(), test.shape()) {
        if a != b {
            return Err(Error::Resample(format!("shapes differ: train {a:?}, test {b:?}")));
        }
    }
    Ok(())
}

fn counts_by_name(ds: &Dataset) -> BTreeMap<String, usize> {
    ds.class_names.iter().cloned().zip(ds.class_counts()).collect()
}

/// Compute the fold's assignment without materializing datasets.
pub fn split_indices(train: &Dataset, test: &Dataset, fold_index: usize, seed: u64) -> Result<(SplitIndices, SplitSpec)> {
    check_compatible(train, test)?;
    let spec = SplitSpec {
        fold_index,
        seed,
        per_class_train_counts: counts_by_name(train),
        per_class_test_counts: counts_by_name(test),
    };
    let n_train = train.len();
    let total = n_train + test.len();
    if fold_index == 0 {
        let idx = SplitIndices {
            train: (0..n_train).collect(),
            test: (n_train..total).collect(),
        };
        return Ok((idx, spec));
    }

    let labels: Vec<usize> = train
        .examples
        .iter()
        .chain(&test.examples)
        .map(|e| e.hard_label())
        .collect();
    let train_counts = train.class_counts();
    let mut stream = RandomStream::new(seed).derive(fold_index as u64);
    let mut idx = SplitIndices {
        train: Vec::with_capacity(n_train),
        test: Vec::with_capacity(test.len()),
    };
    for (class, &want) in train_counts.iter().enumerate() {
        let mut members: Vec<usize> = (0..total).filter(|&i| labels[i] == class).collect();
        stream.shuffle(&mut members);
        let (tr, te) = members.split_at(want);
        idx.train.extend_from_slice(tr);
        idx.test.extend_from_slice(te);
    }
    idx.train.sort_unstable();
    idx.test.sort_unstable();
    Ok((idx, spec))
}

/// New `(train, test)` datasets for a fold.
pub fn resample_split(train: &Dataset, test: &Dataset, fold_index: usize, seed: u64) -> Result<(Dataset, Dataset)> {
    let (idx, _) = split_indices(train, test, fold_index, seed)?;
    let n_train = train.len();
    let pick = |i: usize| {
        if i < n_train {
            train.examples[i].clone()
        } else {
            test.examples[i - n_train].clone()
        }
    };
    let new_train = Dataset::new(train.name.clone(), train.class_names.clone(), idx.train.iter().map(|&i| pick(i)).collect())?;
    let new_test = Dataset::new(test.name.clone(), test.class_names.clone(), idx.test.iter().map(|&i| pick(i)).collect())?;
    Ok((new_train, new_test))
}
