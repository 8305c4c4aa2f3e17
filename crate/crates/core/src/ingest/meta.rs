//! Summary statistics of the 26 equal-length UEA multivariate datasets.

use std::fmt;

use crate::error::{Error, Result};
use crate::series::Dataset;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DatasetMeta {
    pub code: &'static str,
    pub name: &'static str,
    pub train_size: usize,
    pub test_size: usize,
    pub dims: usize,
    pub length: usize,
    pub classes: usize,
}

const fn meta(
    code: &'static str,
    name: &'static str,
    train_size: usize,
    test_size: usize,
    dims: usize,
    length: usize,
    classes: usize,
) -> DatasetMeta {
    DatasetMeta {
        code,
        name,
        train_size,
        test_size,
        dims,
        length,
        classes,
    }
}

pub const UEA_EQUAL_LENGTH: [DatasetMeta; 26] = [
    meta("AWR", "ArticularyWordRecognition", 275, 300, 9, 144, 25),
    meta("AF", "AtrialFibrillation", 15, 15, 2, 640, 3),
    meta("BM", "BasicMotions", 40, 40, 6, 100, 4),
    meta("CR", "Cricket", 108, 72, 6, 1197, 12),
    meta("DDG", "DuckDuckGeese", 50, 50, 1345, 270, 5),
    meta("EW", "EigenWorms", 128, 131, 6, 17984, 5),
    meta("EP", "Epilepsy", 137, 138, 3, 206, 4),
    meta("EC", "EthanolConcentration", 261, 263, 3, 1751, 4),
    meta("ER", "ERing", 30, 270, 4, 65, 6),
    meta("FD", "FaceDetection", 5890, 3524, 144, 62, 2),
    meta("FM", "FingerMovements", 316, 100, 28, 50, 2),
    meta("HMD", "HandMovementDirection", 160, 74, 10, 400, 4),
    meta("HW", "Handwriting", 150, 850, 3, 152, 26),
    meta("HB", "Heartbeat", 204, 205, 61, 405, 2),
    meta("LIB", "Libras", 180, 180, 2, 45, 15),
    meta("LSST", "LSST", 2459, 2466, 6, 36, 14),
    meta("MI", "MotorImagery", 278, 100, 64, 3000, 2),
    meta("NATO", "NATOPS", 180, 180, 24, 51, 6),
    meta("PD", "PenDigits", 7494, 3498, 2, 8, 10),
    meta("PEMS", "PEMS-SF", 267, 173, 963, 144, 7),
    meta("PS", "PhonemeSpectra", 3315, 3353, 11, 217, 39),
    meta("RS", "RacketSports", 151, 152, 6, 30, 4),
    meta("SRS1", "SelfRegulationSCP1", 268, 293, 6, 896, 2),
    meta("SRS2", "SelfRegulationSCP2", 200, 180, 7, 1152, 2),
    meta("SWJ", "StandWalkJump", 12, 15, 4, 2500, 3),
    meta("UW", "UWaveGestureLibrary", 120, 320, 3, 315, 8),
];

/// Find a dataset by full name or short code, ignoring case.
pub fn lookup_meta(name: &str) -> Result<DatasetMeta> {
    UEA_EQUAL_LENGTH
        .iter()
        .find(|m| m.name.eq_ignore_ascii_case(name) || m.code.eq_ignore_ascii_case(name))
        .copied()
        .ok_or_else(|| Error::UnknownDataset(name.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCheck {
    pub field: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub dataset: String,
    pub checks: Vec<FieldCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FieldCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "validation against {}", self.dataset)?;
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            writeln!(f, "  {status} {:<8} expected {:<16} actual {}", c.field, c.expected, c.actual)?;
        }
        Ok(())
    }
}

fn check(field: &'static str, expected: impl ToString, actual: impl ToString, pass: bool) -> FieldCheck {
    FieldCheck {
        field,
        expected: expected.to_string(),
        actual: actual.to_string(),
        pass,
    }
}

fn shape_checks(ds: &Dataset, meta: &DatasetMeta) -> Vec<FieldCheck> {
    let (c, l) = ds.shape().unwrap_or((0, 0));
    vec![
        check("dims", meta.dims, c, c == meta.dims),
        check("length", meta.length, l, l == meta.length),
        check("classes", meta.classes, ds.n_classes(), ds.n_classes() == meta.classes),
    ]
}

/// Check one split; its size may match either the train or the test size.
pub fn validate_meta(ds: &Dataset, meta: &DatasetMeta) -> ValidationReport {
    let n = ds.len();
    let mut checks = vec![check(
        "size",
        format!("{} or {}", meta.train_size, meta.test_size),
        n,
        n == meta.train_size || n == meta.test_size,
    )];
    checks.extend(shape_checks(ds, meta));
    ValidationReport {
        dataset: meta.name.to_string(),
        checks,
    }
}

/// Check a train/test pair, sizes matched to their own roles.
pub fn validate_pair(train: &Dataset, test: &Dataset, meta: &DatasetMeta) -> ValidationReport {
    let mut checks = vec![
        check("train", meta.train_size, train.len(), train.len() == meta.train_size),
        check("test", meta.test_size, test.len(), test.len() == meta.test_size),
    ];
    for mut c in shape_checks(train, meta) {
        let other = shape_checks(test, meta)
            .into_iter()
            .find(|o| o.field == c.field)
            .expect("same fields");
        c.pass &= other.pass;
        if other.actual != c.actual {
            c.actual = format!("{} (train) / {} (test)", c.actual, other.actual);
        }
        checks.push(c);
    }
    ValidationReport {
        dataset: meta.name.to_string(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{LabeledExample, Series};

    fn synth(n: usize, c: usize, l: usize, k: usize) -> Dataset {
        let ex: Vec<_> = (0..n)
            .map(|i| LabeledExample::with_class(Series::zeros(c, l), i % k, k).unwrap())
            .collect();
        Dataset::new("s", (0..k).map(|i| format!("c{i}")).collect(), ex).unwrap()
    }

    #[test]
    fn atrial_fibrillation_row() {
        let m = lookup_meta("AtrialFibrillation").unwrap();
        assert_eq!((m.train_size, m.test_size, m.dims, m.length, m.classes), (15, 15, 2, 640, 3));
        assert_eq!(lookup_meta("af").unwrap(), m);
        assert!(lookup_meta("JapaneseVowels").is_err());
    }

    #[test]
    fn matching_and_mismatching() {
        let bm = lookup_meta("BasicMotions").unwrap();
        assert!(validate_meta(&synth(40, 6, 100, 4), &bm).passed());
        let r = validate_meta(&synth(40, 6, 99, 4), &bm);
        let failed: Vec<_> = r.failures().map(|c| c.field).collect();
        assert_eq!(failed, ["length"]);
    }

    #[test]
    fn pair_checks_roles() {
        let er = lookup_meta("ERing").unwrap();
        assert!(validate_pair(&synth(30, 4, 65, 6), &synth(270, 4, 65, 6), &er).passed());
        let r = validate_pair(&synth(270, 4, 65, 6), &synth(30, 4, 65, 6), &er);
        let failed: Vec<_> = r.failures().map(|c| c.field).collect();
        assert_eq!(failed, ["train", "test"]);
    }

    #[test]
    fn table_is_complete() {
        assert_eq!(UEA_EQUAL_LENGTH.len(), 26);
        let total_train: usize = UEA_EQUAL_LENGTH.iter().map(|m| m.train_size).sum();
        assert_eq!(total_train, 22688);
    }
}
