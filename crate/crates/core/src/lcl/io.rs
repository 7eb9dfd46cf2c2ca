//! Labeling text format: one `vertex label` line per vertex. Orientation
//! labels are strings over `{<, >}` in port order; a vertex of degree zero
//! has an empty orientation and its line carries only the vertex index.

use super::{Label, Labeling, LclError};

pub fn write_labeling(lab: &Labeling) -> String {
    let mut out = String::new();
    for (v, l) in lab.labels.iter().enumerate() {
        let text = l.to_string();
        if text.is_empty() {
            out.push_str(&format!("{v}\n"));
        } else {
            out.push_str(&format!("{v} {text}\n"));
        }
    }
    out
}

pub fn read_labeling(text: &str) -> Result<Labeling, LclError> {
    let mut labels = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |msg: String| LclError::Parse { line: i + 1, msg };
        let mut toks = line.split_whitespace();
        let v: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err("expected a vertex index".into()))?;
        if v != labels.len() {
            return Err(parse_err(format!(
                "expected vertex {}, found {v}",
                labels.len()
            )));
        }
        let label = match toks.next() {
            None => Label::Orientation(super::Orientation(Vec::new())),
            Some(t) if t.bytes().all(|b| b.is_ascii_digit()) => {
                Label::Value(t.parse().map_err(|_| parse_err(format!("bad label {t:?}")))?)
            }
            Some(t) => Label::Orientation(t.parse().map_err(parse_err)?),
        };
        if toks.next().is_some() {
            return Err(parse_err("trailing tokens".into()));
        }
        labels.push(label);
    }
    Ok(Labeling::new(labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcl::Orientation;
    use proptest::prelude::*;

    #[test]
    fn format_examples() {
        let lab = Labeling::new(vec![
            Label::Value(3),
            Label::Orientation(Orientation(vec![true, false])),
            Label::Orientation(Orientation(vec![])),
        ]);
        let text = write_labeling(&lab);
        assert_eq!(text, "0 3\n1 ><\n2\n");
        assert_eq!(read_labeling(&text).unwrap(), lab);
        assert!(read_labeling("1 3\n").is_err());
        assert!(read_labeling("0 3 4\n").is_err());
        assert!(read_labeling("0 >x\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(values in proptest::collection::vec(any::<u64>(), 0..50),
                      dirs in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 1..6), 0..20)) {
            let mut labels: Vec<Label> = values.into_iter().map(Label::Value).collect();
            labels.extend(dirs.into_iter().map(|d| Label::Orientation(Orientation(d))));
            let lab = Labeling::new(labels);
            prop_assert_eq!(read_labeling(&write_labeling(&lab)).unwrap(), lab.clone());
            let json = serde_json::to_string(&lab).unwrap();
            prop_assert_eq!(serde_json::from_str::<Labeling>(&json).unwrap(), lab);
        }
    }
}
