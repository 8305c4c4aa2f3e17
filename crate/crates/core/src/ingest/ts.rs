//! Reader and writer for the equal-length UEA/sktime `.ts` format.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::series::{Dataset, LabeledExample, Series};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TsHeader {
    pub problem_name: String,
    pub timestamps: bool,
    pub univariate: bool,
    pub equal_length: bool,
    pub series_length: Option<usize>,
    pub class_labels: Vec<String>,
}

fn parse_bool(line: usize, key: &str, v: Option<&str>) -> Result<bool> {
    match v.map(str::to_ascii_lowercase).as_deref() {
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        other => Err(Error::Parse {
            line,
            message: format!("@{key} expects true or false, got {other:?}"),
        }),
    }
}

fn parse_header_line(header: &mut TsHeader, line_no: usize, line: &str) -> Result<()> {
    let mut parts = line[1..].split_whitespace();
    let key = parts.next().unwrap_or("").to_ascii_lowercase();
    match key.as_str() {
        "problemname" => header.problem_name = parts.collect::<Vec<_>>().join(" "),
        "timestamps" => {
            header.timestamps = parse_bool(line_no, &key, parts.next())?;
            if header.timestamps {
                return Err(Error::Parse {
                    line: line_no,
                    message: "timestamped series are not supported".into(),
                });
            }
        }
        "univariate" => header.univariate = parse_bool(line_no, &key, parts.next())?,
        "equallength" => {
            header.equal_length = parse_bool(line_no, &key, parts.next())?;
            if !header.equal_length {
                return Err(Error::Parse {
                    line: line_no,
                    message: "variable-length series are not supported (@equalLength false)".into(),
                });
            }
        }
        "serieslength" => {
            let raw = parts.next().unwrap_or("");
            let n: usize = raw.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("@seriesLength expects a positive integer, got `{raw}`"),
            })?;
            if n == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "@seriesLength must be positive".into(),
                });
            }
            header.series_length = Some(n);
        }
        "classlabel" => {
            if !parse_bool(line_no, &key, parts.next())? {
                return Err(Error::Parse {
                    line: line_no,
                    message: "datasets without class labels are not supported".into(),
                });
            }
            header.class_labels = parts.map(str::to_string).collect();
            if header.class_labels.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "@classLabel true lists no classes".into(),
                });
            }
        }
        // @missing, @dimensions and other keys carry nothing we need
        _ => {}
    }
    Ok(())
}

fn parse_case(
    line_no: usize,
    line: &str,
    header: &TsHeader,
    shape: &mut Option<(usize, usize)>,
) -> Result<LabeledExample> {
    let err = |message: String| Error::Parse { line: line_no, message };
    let (body, label) = line
        .rsplit_once(':')
        .ok_or_else(|| err("case has no `:`-separated class label".into()))?;
    let label = label.trim();
    let class = header
        .class_labels
        .iter()
        .position(|c| c == label)
        .ok_or_else(|| err(format!("unknown class label `{label}`")))?;

    let mut rows = Vec::new();
    for (ch, field) in body.split(':').enumerate() {
        let row = field
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<f32>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(format!("channel {ch}: `{tok}` is not a finite number")))
            })
            .collect::<Result<Vec<f32>>>()?;
        rows.push(row);
    }

    let (c, l) = *shape.get_or_insert_with(|| {
        (rows.len(), header.series_length.unwrap_or(rows[0].len()))
    });
    if rows.len() != c {
        return Err(err(format!("expected {c} channels, found {}", rows.len())));
    }
    if let Some((ch, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != l) {
        return Err(err(format!(
            "ragged channel {ch}: {} values, series length is {l}",
            r.len()
        )));
    }
    let series = Series::from_channels(&rows).map_err(|e| err(e.to_string()))?;
    LabeledExample::with_class(series, class, header.class_labels.len())
}

/// Parse a `.ts` document into a dataset with one-hot labels.
pub fn parse_ts(text: &str) -> Result<Dataset> {
    let mut header = TsHeader::default();
    let mut in_data = false;
    let mut shape = None;
    let mut examples = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !in_data {
            if !line.starts_with('@') {
                return Err(Error::Parse {
                    line: line_no,
                    message: "data line before @data".into(),
                });
            }
            if line[1..].trim().eq_ignore_ascii_case("data") {
                if header.class_labels.is_empty() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "@data reached without a @classLabel declaration".into(),
                    });
                }
                in_data = true;
            } else {
                parse_header_line(&mut header, line_no, line)?;
            }
            continue;
        }
        examples.push(parse_case(line_no, line, &header, &mut shape)?);
    }

    if !in_data {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: "missing @data section".into(),
        });
    }
    if examples.is_empty() {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: "no cases after @data".into(),
        });
    }
    Dataset::new(header.problem_name, header.class_labels, examples)
}

/// Write a dataset as `.ts`, using each example's hard label.
pub fn serialize_ts(ds: &Dataset) -> String {
    let (c, l) = ds.shape().unwrap_or((1, 0));
    let mut out = String::new();
    let _ = writeln!(out, "@problemName {}", ds.name);
    out.push_str("@timeStamps false\n@missing false\n");
    let _ = writeln!(out, "@univariate {}", c == 1);
    let _ = writeln!(out, "@dimensions {c}");
    out.push_str("@equalLength true\n");
    let _ = writeln!(out, "@seriesLength {l}");
    let _ = writeln!(out, "@classLabel true {}", ds.class_names.join(" "));
    out.push_str("@data\n");
    for ex in &ds.examples {
        for ch in 0..ex.series.channels() {
            let vals: Vec<String> = ex.series.channel(ch).iter().map(|v| v.to_string()).collect();
            out.push_str(&vals.join(","));
            out.push(':');
        }
        out.push_str(&ds.class_names[ex.hard_label()]);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "@problemName toy\n@timeStamps false\n@univariate false\n@equalLength true\n@seriesLength 2\n@classLabel true a b\n@data\n";

    #[test]
    fn minimal_case() {
        let ds = parse_ts(&format!("{HEADER}1,2:3,4:a\n")).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.shape(), Some((2, 2)));
        assert_eq!(ds.examples[0].label, [1.0, 0.0]);
        assert_eq!(ds.examples[0].series.values(), &[1., 2., 3., 4.]);
        assert_eq!(ds.name, "toy");
    }

    #[test]
    fn ragged_channel_reports_line() {
        let err = parse_ts(&format!("{HEADER}1,2:3,4:a\n1,2:3:a\n")).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 9);
                assert!(message.contains("ragged"), "{message}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn header_keys_case_insensitive_and_comments() {
        let text = "# comment\n@PROBLEMNAME X\n@EqualLength TRUE\n@classlabel true a\n@DATA\n1,2:a\n";
        let ds = parse_ts(text).unwrap();
        assert_eq!(ds.shape(), Some((1, 2)));
    }

    #[test]
    fn rejections() {
        let missing_data = "@classLabel true a\n";
        assert!(parse_ts(missing_data).unwrap_err().to_string().contains("@data"));

        let var = "@equalLength false\n@classLabel true a\n@data\n1:a\n";
        assert!(matches!(parse_ts(var), Err(Error::Parse { line: 1, .. })));

        let stamped = "@timeStamps true\n@classLabel true a\n@data\n";
        assert!(parse_ts(stamped).is_err());

        let unknown = format!("{HEADER}1,2:3,4:c\n");
        assert!(parse_ts(&unknown).unwrap_err().to_string().contains("unknown class"));

        let missing_value = format!("{HEADER}1,?:3,4:a\n");
        assert!(parse_ts(&missing_value).is_err());

        let channels = format!("{HEADER}1,2:3,4:a\n1,2:a\n");
        assert!(parse_ts(&channels).unwrap_err().to_string().contains("channels"));
    }

    #[test]
    fn length_from_first_case_when_header_silent() {
        let ds = parse_ts("@classLabel true x y\n@data\n1,2,3:y\n4,5,6:x\n").unwrap();
        assert_eq!(ds.shape(), Some((1, 3)));
        assert_eq!(ds.class_counts(), [1, 1]);
    }

    #[test]
    fn write_then_read() {
        let ds = parse_ts(&format!("{HEADER}1.5,-2e-7:3,4:a\n0.1,0.2:0.3,0.4:b\n")).unwrap();
        let again = parse_ts(&serialize_ts(&ds)).unwrap();
        assert!(again.bits_eq(&ds));
    }
}
