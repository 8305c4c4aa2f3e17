//! Significance tables over per-fold accuracy records.
//!
//! Input CSV columns: `dataset,model,aug_code,fold,accuracy` with accuracy in
//! `[0, 1]`. Whatever accuracy the file carries is what gets tested; for the
//! published experiments that is the best-epoch test accuracy of each run.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::welch::{welch_ttest, Verdict, WelchResult};
use crate::error::{Error, Result};
use crate::pipeline::BUILTIN_CODES;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRecord {
    pub dataset: String,
    pub model: String,
    pub aug_code: String,
    pub fold: u32,
    pub accuracy: f64,
}

pub fn parse_records_csv(text: &str) -> Result<Vec<AccuracyRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<AccuracyRecord>().enumerate() {
        let rec = rec?;
        let row = i + 2;
        if !(0.0..=1.0).contains(&rec.accuracy) {
            return Err(Error::Parse {
                line: row,
                message: format!("accuracy {} is outside [0, 1]", rec.accuracy),
            });
        }
        let key = (rec.dataset.clone(), rec.model.clone(), rec.aug_code.clone(), rec.fold);
        if !seen.insert(key) {
            return Err(Error::Parse {
                line: row,
                message: format!(
                    "duplicate record for ({}, {}, {}, fold {})",
                    rec.dataset, rec.model, rec.aug_code, rec.fold
                ),
            });
        }
        out.push(rec);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignificanceCell {
    pub code: String,
    pub n: usize,
    pub mean: f64,
    /// Difference from the baseline mean, in percentage points.
    pub delta_pp: f64,
    /// `None` when the test is undefined (fewer than 2 folds, or zero variance
    /// in both groups with different means).
    pub result: Option<WelchResult>,
}

impl SignificanceCell {
    pub fn verdict(&self) -> Verdict {
        self.result.map_or(Verdict::NotSignificant, |r| r.verdict)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignificanceRow {
    pub model: String,
    pub dataset: String,
    pub baseline_n: usize,
    pub baseline_mean: f64,
    /// Aligned with [`SignificanceTable::codes`]; `None` when the code has no records for this group.
    pub cells: Vec<Option<SignificanceCell>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignificanceTable {
    pub baseline: String,
    pub codes: Vec<String>,
    pub rows: Vec<SignificanceRow>,
}

fn code_order(code: &str) -> (usize, String) {
    let rank = BUILTIN_CODES.iter().position(|c| *c == code).unwrap_or(BUILTIN_CODES.len());
    (rank, code.to_string())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

type Groups = BTreeMap<(String, String), BTreeMap<String, Vec<f64>>>;

fn group(records: &[AccuracyRecord]) -> Groups {
    let mut groups: Groups = BTreeMap::new();
    for r in records {
        groups
            .entry((r.model.clone(), r.dataset.clone()))
            .or_default()
            .entry(r.aug_code.clone())
            .or_default()
            .push(r.accuracy);
    }
    groups
}

/// Compare every augmentation code against `baseline` within each (model, dataset) group.
pub fn significance_table(records: &[AccuracyRecord], baseline: &str) -> Result<SignificanceTable> {
    let groups = group(records);
    let mut codes: Vec<String> = records
        .iter()
        .map(|r| r.aug_code.clone())
        .filter(|c| c != baseline)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    codes.sort_by_key(|c| code_order(c));

    if let Some((model, dataset)) = groups
        .iter()
        .find(|(_, by_code)| !by_code.contains_key(baseline))
        .map(|(k, _)| k)
    {
        return Err(Error::Stats(format!(
            "no `{baseline}` baseline records for model {model}, dataset {dataset}"
        )));
    }

    let rows = groups
        .par_iter()
        .map(|((model, dataset), by_code)| {
            let base = &by_code[baseline];
            let base_mean = mean(base);
            let cells = codes
                .iter()
                .map(|code| {
                    by_code.get(code).map(|accs| {
                        let m = mean(accs);
                        SignificanceCell {
                            code: code.clone(),
                            n: accs.len(),
                            mean: m,
                            delta_pp: (m - base_mean) * 100.0,
                            result: welch_ttest(accs, base).ok(),
                        }
                    })
                })
                .collect();
            SignificanceRow {
                model: model.clone(),
                dataset: dataset.clone(),
                baseline_n: base.len(),
                baseline_mean: base_mean,
                cells,
            }
        })
        .collect();

    Ok(SignificanceTable {
        baseline: baseline.to_string(),
        codes,
        rows,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x}"))
}

impl SignificanceTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,dataset,aug_code,n,baseline_mean_pct,mean_pct,delta_pp,t_stat,dof,p_value,verdict\n");
        for row in &self.rows {
            for cell in row.cells.iter().flatten() {
                let r = cell.result;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{:.4},{:.4},{:.4},{},{},{},{}",
                    row.model,
                    row.dataset,
                    cell.code,
                    cell.n,
                    row.baseline_mean * 100.0,
                    cell.mean * 100.0,
                    cell.delta_pp,
                    fmt_opt(r.map(|r| r.t_stat)),
                    fmt_opt(r.map(|r| r.dof)),
                    fmt_opt(r.map(|r| r.p_value)),
                    r.map_or("n/a", |r| r.verdict.as_str()),
                );
            }
        }
        out
    }

    /// Aligned text: baseline absolute mean, then deltas per code;
    /// `**x**` marks significantly better, `_x_` significantly worse.
    pub fn to_text(&self) -> String {
        let mut header = vec!["Model".to_string(), "Dataset".to_string(), self.baseline.clone()];
        header.extend(self.codes.iter().cloned());
        let mut grid = vec![header];
        for row in &self.rows {
            let mut line = vec![row.model.clone(), row.dataset.clone(), format!("{:.2}", row.baseline_mean * 100.0)];
            for cell in &row.cells {
                line.push(match cell {
                    None => "-".to_string(),
                    Some(c) => {
                        let v = format!("{:.2}", c.delta_pp);
                        match c.verdict() {
                            Verdict::Better => format!("**{v}**"),
                            Verdict::Worse => format!("_{v}_"),
                            Verdict::NotSignificant => v,
                        }
                    }
                });
            }
            grid.push(line);
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|j| grid.iter().map(|r| r[j].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in &grid {
            let cells: Vec<String> = line
                .iter()
                .enumerate()
                .map(|(j, s)| if j < 2 { format!("{s:<w$}", w = widths[j]) } else { format!("{s:>w$}", w = widths[j]) })
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "\n**x** significantly better, _x_ significantly worse than {} (Welch, two-sided, alpha = {})",
            self.baseline,
            super::welch::ALPHA
        );
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    /// Percent.
    pub accuracy: f64,
    pub algorithm: String,
}

#[derive(Debug, Deserialize)]
struct ReferenceRow {
    dataset: String,
    accuracy: f64,
    algorithm: String,
}

/// Reference CSV columns: `dataset,accuracy,algorithm` with accuracy in percent.
pub fn parse_reference_csv(text: &str) -> Result<BTreeMap<String, Reference>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for row in rdr.deserialize::<ReferenceRow>() {
        let row = row?;
        out.insert(
            row.dataset,
            Reference {
                accuracy: row.accuracy,
                algorithm: row.algorithm,
            },
        );
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestRow {
    pub dataset: String,
    pub model: String,
    pub aug_code: String,
    /// Percent.
    pub mean_accuracy: f64,
    pub reference: Option<Reference>,
    /// Compared at two decimals, the precision reports are printed with.
    pub better_or_equal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestReport {
    pub rows: Vec<BestRow>,
}

fn hundredths(pct: f64) -> i64 {
    (pct * 100.0).round() as i64
}

/// Per dataset, the (model, code) with the highest mean accuracy, set against an optional reference.
pub fn best_vs_reference(records: &[AccuracyRecord], reference: &BTreeMap<String, Reference>) -> BestReport {
    let mut best: BTreeMap<String, BestRow> = BTreeMap::new();
    for ((model, dataset), by_code) in group(records) {
        for (code, accs) in by_code {
            let m = mean(&accs) * 100.0;
            let replace = best.get(&dataset).is_none_or(|b| m > b.mean_accuracy);
            if replace {
                best.insert(
                    dataset.clone(),
                    BestRow {
                        dataset: dataset.clone(),
                        model: model.clone(),
                        aug_code: code,
                        mean_accuracy: m,
                        reference: None,
                        better_or_equal: None,
                    },
                );
            }
        }
    }
    let rows = best
        .into_values()
        .map(|mut row| {
            if let Some(r) = reference.get(&row.dataset) {
                row.better_or_equal = Some(hundredths(row.mean_accuracy) >= hundredths(r.accuracy));
                row.reference = Some(r.clone());
            }
            row
        })
        .collect();
    BestReport { rows }
}

impl BestReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dataset,model,aug_code,mean_pct,reference_pct,reference_algorithm,better_or_equal\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.2},{},{},{}",
                r.dataset,
                r.model,
                r.aug_code,
                r.mean_accuracy,
                r.reference.as_ref().map_or(String::new(), |x| format!("{:.2}", x.accuracy)),
                r.reference.as_ref().map_or("", |x| x.algorithm.as_str()),
                r.better_or_equal.map_or(String::new(), |b| b.to_string()),
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = self.rows.iter().map(|r| r.dataset.len()).max().unwrap_or(7).max(7);
        let _ = writeln!(out, "{:<w$}  {:>8}  {:>8}  Algorithm  Best", "Dataset", "Ours", "Ref");
        for r in &self.rows {
            let mark = if r.better_or_equal == Some(true) { "*" } else { " " };
            let (acc, alg) = match &r.reference {
                Some(x) => (format!("{:.2}", x.accuracy), x.algorithm.as_str()),
                None => ("-".to_string(), "-"),
            };
            let _ = writeln!(
                out,
                "{mark}{:<w$} {:>8.2}  {acc:>8}  {alg:<9}  {}/{}",
                r.dataset, r.mean_accuracy, r.model, r.aug_code
            );
        }
        out.push_str("\n* ours better or equal to the reference\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(dataset: &str, code: &str, fold: u32, acc: f64) -> AccuracyRecord {
        AccuracyRecord {
            dataset: dataset.into(),
            model: "IT".into(),
            aug_code: code.into(),
            fold,
            accuracy: acc,
        }
    }

    #[test]
    fn identical_codes_zero_delta() {
        let mut records = Vec::new();
        for f in 0..5 {
            let acc = 0.5 + 0.01 * f as f64;
            records.push(rec("X", "None", f, acc));
            records.push(rec("X", "A", f, acc));
        }
        let t = significance_table(&records, "None").unwrap();
        let cell = t.rows[0].cells[0].as_ref().unwrap();
        assert_eq!(cell.delta_pp, 0.0);
        assert_eq!(cell.verdict(), Verdict::NotSignificant);
    }

    #[test]
    fn missing_baseline_names_group() {
        let records = vec![rec("X", "A", 0, 0.5), rec("X", "A", 1, 0.6)];
        let e = significance_table(&records, "None").unwrap_err().to_string();
        assert!(e.contains("IT") && e.contains("X"), "{e}");
    }

    #[test]
    fn records_csv_validation() {
        let ok = "dataset,model,aug_code,fold,accuracy\nX,IT,None,0,0.5\n";
        assert_eq!(parse_records_csv(ok).unwrap().len(), 1);
        let dup = "dataset,model,aug_code,fold,accuracy\nX,IT,None,0,0.5\nX,IT,None,0,0.6\n";
        assert!(parse_records_csv(dup).unwrap_err().to_string().contains("duplicate"));
        let range = "dataset,model,aug_code,fold,accuracy\nX,IT,None,0,1.5\n";
        assert!(parse_records_csv(range).is_err());
    }

    #[test]
    fn best_vs_reference_rules() {
        let records = vec![
            rec("Heartbeat", "None", 0, 0.7704),
            rec("Heartbeat", "None", 1, 0.7704),
            rec("Heartbeat", "G", 0, 0.7904),
            rec("Heartbeat", "G", 1, 0.7904),
            rec("BasicMotions", "None", 0, 1.0),
        ];
        let mut reference = BTreeMap::new();
        reference.insert("Heartbeat".to_string(), Reference { accuracy: 76.52, algorithm: "CIF".into() });
        reference.insert("BasicMotions".to_string(), Reference { accuracy: 100.0, algorithm: "Multiple".into() });
        let report = best_vs_reference(&records, &reference);
        let hb = report.rows.iter().find(|r| r.dataset == "Heartbeat").unwrap();
        assert_eq!(hb.aug_code, "G");
        assert_eq!(hundredths(hb.mean_accuracy), 7904);
        assert_eq!(hb.better_or_equal, Some(true));
        let bm = report.rows.iter().find(|r| r.dataset == "BasicMotions").unwrap();
        assert_eq!(bm.better_or_equal, Some(true));

        let bare = best_vs_reference(&records, &BTreeMap::new());
        assert_eq!(bare.rows.len(), 2);
        assert!(bare.rows.iter().all(|r| r.reference.is_none() && r.better_or_equal.is_none()));
    }
}
