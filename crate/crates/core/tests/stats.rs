mod common;

use common::{gaussian_sample, t_two_sided_oracle, welch_oracle};
use mtsaug::stats::{parse_records_csv, significance_table, welch_ttest, Verdict};
use mtsaug::RandomStream;

#[test]
fn oracle_reproduces_closed_forms() {
    for t in [0.2, 1.0, 4.0] {
        let cauchy = 1.0 - 2.0 / std::f64::consts::PI * f64::atan(t);
        assert!((t_two_sided_oracle(t, 1.0) - cauchy).abs() < 1e-13);
        let two = 1.0 - t / (2.0f64 + t * t).sqrt();
        assert!((t_two_sided_oracle(t, 2.0) - two).abs() < 1e-13);
    }
}

#[test]
fn welch_matches_oracle_on_random_samples() {
    let mut s = RandomStream::new(2024);
    for case in 0..50 {
        let na = s.uniform_int(2, 40).unwrap() as usize;
        let nb = s.uniform_int(2, 40).unwrap() as usize;
        let sd = 0.01 + 0.1 * s.uniform_real();
        let a = gaussian_sample(&mut s, na, 0.7, sd);
        let shift = 0.1 * (s.uniform_real() - 0.5);
        let b = gaussian_sample(&mut s, nb, 0.7 + shift, 0.05);
        let got = welch_ttest(&a, &b).unwrap();
        let want = welch_oracle(&a, &b);
        assert!((got.t_stat - want.t).abs() <= 1e-8, "case {case}: t {} vs {}", got.t_stat, want.t);
        assert!((got.dof - want.dof).abs() <= 1e-8 * want.dof.max(1.0), "case {case}");
        assert!((got.p_value - want.p).abs() <= 1e-8, "case {case}: p {} vs {}", got.p_value, want.p);
    }
}

#[test]
fn p_decreases_with_separation() {
    let b = [0.50, 0.52, 0.49, 0.51, 0.50];
    let mut last = 1.1;
    for shift in [0.0, 0.005, 0.01, 0.02, 0.05, 0.1] {
        let a: Vec<f64> = [0.50, 0.53, 0.48, 0.51, 0.52].iter().map(|x| x + shift).collect();
        let p = welch_ttest(&a, &b).unwrap().p_value;
        assert!(p < last, "shift {shift}");
        last = p;
    }
}

#[test]
fn invariant_under_affine_rescaling() {
    let a = [0.8, 0.82, 0.79, 0.85, 0.81];
    let b = [0.7, 0.75, 0.72, 0.74];
    let r = welch_ttest(&a, &b).unwrap();
    let f = |x: &[f64]| x.iter().map(|v| 100.0 * v + 3.0).collect::<Vec<_>>();
    let q = welch_ttest(&f(&a), &f(&b)).unwrap();
    assert!((r.t_stat - q.t_stat).abs() < 1e-12 * r.t_stat.abs().max(1.0) * 100.0);
    assert!((r.p_value - q.p_value).abs() < 1e-12);
}

#[test]
fn verdict_marks_follow_the_table_rule() {
    let mut csv = String::from("dataset,model,aug_code,fold,accuracy\n");
    let mut s = RandomStream::new(9);
    let groups = [("None", 0.70), ("A", 0.80), ("B", 0.60), ("C", 0.70)];
    for (code, mean) in groups {
        for (fold, acc) in gaussian_sample(&mut s, 10, mean, 0.01).into_iter().enumerate() {
            csv.push_str(&format!("Toy,m,{code},{fold},{acc}\n"));
        }
    }
    let table = significance_table(&parse_records_csv(&csv).unwrap(), "None").unwrap();
    let row = &table.rows[0];
    let verdict = |code: &str| {
        row.cells
            .iter()
            .flatten()
            .find(|c| c.code == code)
            .map(|c| c.verdict())
            .unwrap()
    };
    assert_eq!(verdict("A"), Verdict::Better);
    assert_eq!(verdict("B"), Verdict::Worse);
    assert_eq!(verdict("C"), Verdict::NotSignificant);
    let text = table.to_text();
    assert!(text.contains("**"), "{text}");
    assert!(text.contains('_'), "{text}");
}
