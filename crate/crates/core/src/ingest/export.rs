//! CSV exports for plotting. Numbers use `%.9g` formatting.

use std::fmt::Write as _;

use crate::series::LabeledExample;

/// Format like C's `%.9g`: 9 significant digits, trailing zeros stripped.
pub fn fmt_sig9(x: f64) -> String {
    const P: i32 = 9;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        let decimals = (P - 1 - exp) as usize;
        strip_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa.to_string()), exp.abs())
    }
}

fn strip_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn label_text(ex: &LabeledExample, class_names: &[String]) -> String {
    let name = class_names
        .get(ex.hard_label())
        .cloned()
        .unwrap_or_else(|| ex.hard_label().to_string());
    let soft: Vec<String> = ex.label.iter().map(|p| fmt_sig9(*p)).collect();
    format!("label={name} soft={}", soft.join(";"))
}

/// Wide layout: header `time,ch0,..`, then per example one `# example=i ...`
/// annotation row followed by one row per time step.
pub fn export_csv(examples: &[LabeledExample], class_names: &[String]) -> String {
    let c = examples.first().map_or(0, |e| e.series.channels());
    let mut out = String::from("time");
    for ch in 0..c {
        let _ = write!(out, ",ch{ch}");
    }
    out.push('\n');
    for (i, ex) in examples.iter().enumerate() {
        let _ = writeln!(out, "# example={i} {}", label_text(ex, class_names));
        for t in 0..ex.series.length() {
            let _ = write!(out, "{t}");
            for ch in 0..ex.series.channels() {
                let _ = write!(out, ",{}", fmt_sig9(ex.series.get(ch, t) as f64));
            }
            out.push('\n');
        }
    }
    out
}

/// Original vs augmented values with a per-channel changed flag (bitwise comparison).
pub fn preview_csv(original: &LabeledExample, augmented: &LabeledExample) -> String {
    let (c, l) = original.series.shape();
    let mut out = String::from("time");
    for prefix in ["orig", "aug", "changed"] {
        for ch in 0..c {
            let _ = write!(out, ",{prefix}_ch{ch}");
        }
    }
    out.push('\n');
    for t in 0..l {
        let _ = write!(out, "{t}");
        for ch in 0..c {
            let _ = write!(out, ",{}", fmt_sig9(original.series.get(ch, t) as f64));
        }
        for ch in 0..c {
            let _ = write!(out, ",{}", fmt_sig9(augmented.series.get(ch, t) as f64));
        }
        for ch in 0..c {
            let changed = original.series.get(ch, t).to_bits() != augmented.series.get(ch, t).to_bits();
            let _ = write!(out, ",{}", u8::from(changed));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Series;

    #[test]
    fn sig9_matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.25, "0.25"),
            (-2.5, "-2.5"),
            (1.0 / 3.0, "0.333333333"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (100.0, "100"),
            (f32::MAX as f64, "3.40282347e+38"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_sig9(x), want, "x = {x}");
        }
    }

    #[test]
    fn empty_list_is_header_only() {
        assert_eq!(export_csv(&[], &[]), "time\n");
    }

    #[test]
    fn one_by_one_has_two_body_lines() {
        let ex = LabeledExample::with_class(Series::new(1, 1, vec![0.5]).unwrap(), 0, 1).unwrap();
        let text = export_csv(&[ex], &["a".into()]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, ["time,ch0", "# example=0 label=a soft=1", "0,0.5"]);
    }
}
