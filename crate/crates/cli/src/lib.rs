//! File formats of the `sahn` command-line tool.
//!
//! * Matrix files: the point count `N`, then the `N(N-1)/2` entries of the
//!   condensed matrix, all separated by whitespace. Lines starting with `#`
//!   are comments.
//! * Vector files: one point per line as comma-separated coordinates, with
//!   an optional header line.
//! * Dendrograms: one merge per line, `a<TAB>b<TAB>delta`.

use std::fs;
use std::path::Path;

use sahn::{CondensedMatrix, Convention, Step, StepwiseDendrogram, VectorDataset};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Data(String),
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Tokens outside comment lines.
fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
}

pub fn parse_matrix(text: &str) -> Result<CondensedMatrix, InputError> {
    let mut toks = tokens(text);
    let first = toks
        .next()
        .ok_or_else(|| InputError::Parse("empty input: expected the point count".into()))?;
    let n: usize = first
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| InputError::Parse(format!("expected a positive point count, found '{}'", first)))?;
    let expected = sahn::condensed_len(n);
    let mut values = Vec::with_capacity(expected);
    for (i, tok) in toks.enumerate() {
        let position = i + 1;
        let v: f64 = tok
            .parse()
            .map_err(|_| InputError::Parse(format!("value {}: '{}' is not a number", position, tok)))?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(InputError::Data(format!(
                "value {}: dissimilarities must be finite and nonnegative, found {}",
                position, tok
            )));
        }
        values.push(v);
    }
    if values.len() != expected {
        return Err(InputError::Parse(format!(
            "expected {} values, found {}",
            expected,
            values.len()
        )));
    }
    CondensedMatrix::new(n, values).map_err(|e| InputError::Data(e.to_string()))
}

pub fn parse_matrix_file(path: &Path) -> Result<CondensedMatrix, InputError> {
    parse_matrix(&read(path)?)
}

pub fn parse_vectors(text: &str) -> Result<VectorDataset, InputError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut coords = Vec::new();
    let mut dim = None;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| InputError::Parse(e.to_string()))?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if i == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        match dim {
            None => dim = Some(record.len()),
            Some(d) if d != record.len() => {
                return Err(InputError::Parse(format!(
                    "line {}: expected {} coordinates, found {}",
                    line,
                    d,
                    record.len()
                )))
            }
            Some(_) => {}
        }
        for field in &record {
            let v: f64 = field
                .parse()
                .map_err(|_| InputError::Parse(format!("line {}: '{}' is not a number", line, field)))?;
            if !v.is_finite() {
                return Err(InputError::Data(format!(
                    "line {}: coordinate {} is not finite",
                    line, field
                )));
            }
            coords.push(v);
        }
    }
    let dim = dim.ok_or_else(|| InputError::Parse("no points found".into()))?;
    VectorDataset::new(dim, coords).map_err(|e| InputError::Data(e.to_string()))
}

pub fn parse_vectors_csv(path: &Path) -> Result<VectorDataset, InputError> {
    parse_vectors(&read(path)?)
}

/// Reads whitespace-separated `a b delta` rows in the given convention.
pub fn parse_dendrogram(text: &str, n: usize, convention: Convention) -> Result<StepwiseDendrogram, InputError> {
    let mut steps = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || InputError::Parse(format!("line {}: expected 'a b delta', found '{}'", i + 1, line));
        if fields.len() != 3 {
            return Err(bad());
        }
        let a: i64 = fields[0].parse().map_err(|_| bad())?;
        let b: i64 = fields[1].parse().map_err(|_| bad())?;
        let delta: f64 = fields[2].parse().map_err(|_| bad())?;
        steps.push(Step::new(a, b, delta));
    }
    StepwiseDendrogram::new(n, convention, steps).map_err(|e| InputError::Data(e.to_string()))
}

/// TSV rows `a<TAB>b<TAB>delta`. Heights use the shortest decimal form that
/// reads back to the same value.
pub fn format_dendrogram(d: &StepwiseDendrogram) -> String {
    let mut out = String::new();
    for s in d.steps() {
        out.push_str(&format!("{}\t{}\t{}\n", s.a, s.b, s.delta));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_examples() {
        let d = parse_matrix("3\n3 4 5").unwrap();
        assert_eq!((d.n(), d.values()), (3, &[3.0, 4.0, 5.0][..]));
        assert_eq!(parse_matrix("2\n5").unwrap().values(), &[5.0]);
        let e = parse_matrix("3\n3 4").unwrap_err();
        assert_eq!(e.to_string(), "expected 3 values, found 2");
        assert!(matches!(e, InputError::Parse(_)));
    }

    #[test]
    fn matrix_comments_and_bad_values() {
        let d = parse_matrix("# three points\n3\n# row 0\n1 2\n3\n").unwrap();
        assert_eq!(d.values(), &[1.0, 2.0, 3.0]);
        match parse_matrix("3\n1 -2 3") {
            Err(InputError::Data(m)) => assert!(m.starts_with("value 2:"), "{}", m),
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_matrix("3\n1 2 NaN"), Err(InputError::Data(m)) if m.starts_with("value 3:")));
        assert!(matches!(parse_matrix("3\n1 x 3"), Err(InputError::Parse(_))));
        assert!(matches!(parse_matrix("0"), Err(InputError::Parse(_))));
        assert!(matches!(parse_matrix(""), Err(InputError::Parse(_))));
    }

    #[test]
    fn vector_examples() {
        let ds = parse_vectors("0\n1\n3").unwrap();
        assert_eq!((ds.n(), ds.dim()), (3, 1));
        let ds = parse_vectors("x,y\n0,0\n1,0").unwrap();
        assert_eq!((ds.n(), ds.dim(), ds.coords()), (2, 2, &[0.0, 0.0, 1.0, 0.0][..]));
        let e = parse_vectors("0,0\n1").unwrap_err();
        assert!(e.to_string().starts_with("line 2:"), "{}", e);
        assert!(parse_vectors("x,y\n").is_err());
        assert!(parse_vectors("1,2\n3,b")
            .unwrap_err()
            .to_string()
            .starts_with("line 2:"));
    }

    #[test]
    fn dendrogram_round_trip() {
        let d = StepwiseDendrogram::from_scipy(3, &[(0, 1, 2.0), (2, 3, 0.1 + 0.2)]).unwrap();
        let text = format_dendrogram(&d);
        assert_eq!(text, "0\t1\t2\n2\t3\t0.30000000000000004\n");
        assert_eq!(parse_dendrogram(&text, 3, Convention::Scipy).unwrap(), d);
        let r = format_dendrogram(&d.convert(Convention::R));
        assert_eq!(
            parse_dendrogram(&r, 3, Convention::R)
                .unwrap()
                .convert(Convention::Scipy),
            d
        );
        assert!(parse_dendrogram("0 1", 3, Convention::Scipy).is_err());
    }
}
