//! Classification datasets: single-sentence and sentence-pair records with
//! (possibly soft) label distributions.

use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fsutil;
use crate::rng::{self, Purpose};

/// Tolerance on the sum of a label distribution.
pub const LABEL_SUM_TOLERANCE: f64 = 1e-9;

/// Default share of a training set held out for validation.
pub const DEFAULT_VALID_FRACTION: f64 = 0.2;

/// A probability distribution over `K >= 2` classes.
#[derive(Clone, Debug, PartialEq)]
pub struct SoftLabel(Vec<f64>);

impl SoftLabel {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::Invalid(format!(
                "label needs at least 2 classes, got {}",
                probs.len()
            )));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Invalid(format!(
                "label probabilities must be finite and non-negative: {probs:?}"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > LABEL_SUM_TOLERANCE {
            return Err(Error::Invalid(format!(
                "label probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(SoftLabel(probs))
    }

    pub fn one_hot(num_classes: usize, class: usize) -> Result<Self> {
        if num_classes < 2 || class >= num_classes {
            return Err(Error::Invalid(format!(
                "class {class} not valid for {num_classes} classes"
            )));
        }
        let mut probs = vec![0.0; num_classes];
        probs[class] = 1.0;
        Ok(SoftLabel(probs))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn num_classes(&self) -> usize {
        self.0.len()
    }

    /// Index of the largest probability; the first one wins ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.0.iter().enumerate() {
            if p > self.0[best] {
                best = i;
            }
        }
        best
    }

    /// The hot class, if this label is exactly one-hot.
    pub fn hot_class(&self) -> Option<usize> {
        let hot = self.argmax();
        let exact = self
            .0
            .iter()
            .enumerate()
            .all(|(i, &p)| if i == hot { p == 1.0 } else { p == 0.0 });
        exact.then_some(hot)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Original,
    Augmented,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schema {
    Single,
    Pair,
}

impl FromStr for Schema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Schema::Single),
            "pair" => Ok(Schema::Pair),
            _ => Err(Error::Config(format!(
                "unknown schema {s:?} (expected single|pair)"
            ))),
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schema::Single => "single",
            Schema::Pair => "pair",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Csv,
    Tsv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            _ => Err(Error::Config(format!(
                "unknown format {s:?} (expected jsonl|csv|tsv)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Example {
    pub id: String,
    pub text_a: String,
    /// Second sentence of a pair task (hypothesis, question, ...).
    pub text_b: Option<String>,
    pub label: SoftLabel,
    /// Set on augmentation output; `None` for plain input data.
    pub provenance: Option<Provenance>,
}

impl Example {
    pub fn single(id: impl Into<String>, text: impl Into<String>, label: SoftLabel) -> Self {
        Example {
            id: id.into(),
            text_a: text.into(),
            text_b: None,
            label,
            provenance: None,
        }
    }

    pub fn pair(
        id: impl Into<String>,
        text_a: impl Into<String>,
        text_b: impl Into<String>,
        label: SoftLabel,
    ) -> Self {
        Example {
            id: id.into(),
            text_a: text_a.into(),
            text_b: Some(text_b.into()),
            label,
            provenance: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    examples: Vec<Example>,
    num_classes: usize,
    schema: Schema,
}

impl Dataset {
    pub fn new(examples: Vec<Example>, num_classes: usize, schema: Schema) -> Result<Self> {
        if num_classes < 2 {
            return Err(Error::Config(format!(
                "num_classes must be at least 2, got {num_classes}"
            )));
        }
        for ex in &examples {
            check_example(ex, num_classes, schema)?;
        }
        Ok(Dataset {
            examples,
            num_classes,
            schema,
        })
    }

    pub fn empty(num_classes: usize, schema: Schema) -> Result<Self> {
        Dataset::new(Vec::new(), num_classes, schema)
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn into_examples(self) -> Vec<Example> {
        self.examples
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn schema(&self) -> Schema {
        self.schema
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }
}

fn check_example(ex: &Example, num_classes: usize, schema: Schema) -> Result<()> {
    if ex.text_a.trim().is_empty() {
        return Err(Error::Invalid(format!(
            "example {:?} has empty text",
            ex.id
        )));
    }
    if ex.label.num_classes() != num_classes {
        return Err(Error::Invalid(format!(
            "example {:?} has {} label entries, dataset has {} classes",
            ex.id,
            ex.label.num_classes(),
            num_classes
        )));
    }
    match (schema, &ex.text_b) {
        (Schema::Pair, None) => Err(Error::Invalid(format!(
            "example {:?} lacks text2 in a pair dataset",
            ex.id
        ))),
        (Schema::Single, Some(_)) => Err(Error::Invalid(format!(
            "example {:?} has text2 in a single-text dataset",
            ex.id
        ))),
        _ => Ok(()),
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    text2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label_probs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

impl Record {
    fn into_example(
        self,
        line: usize,
        position: usize,
        num_classes: usize,
        schema: Schema,
    ) -> Result<Example> {
        let label = match (self.label, self.label_probs) {
            (Some(_), Some(_)) => {
                return Err(Error::parse(line, "both label and label_probs given"))
            }
            (None, None) => return Err(Error::parse(line, "missing label")),
            (Some(class), None) => {
                if class < 0 || class as u64 >= num_classes as u64 {
                    return Err(Error::LabelOutOfRange { line });
                }
                SoftLabel::one_hot(num_classes, class as usize)?
            }
            (None, Some(probs)) => {
                if probs.len() != num_classes {
                    return Err(Error::parse(
                        line,
                        format!(
                            "label_probs has {} entries, expected {num_classes}",
                            probs.len()
                        ),
                    ));
                }
                SoftLabel::new(probs).map_err(|e| Error::parse(line, e.to_string()))?
            }
        };
        if self.text.trim().is_empty() {
            return Err(Error::parse(line, "empty text"));
        }
        match (schema, &self.text2) {
            (Schema::Pair, None) => {
                return Err(Error::parse(line, "missing text2 for pair schema"))
            }
            (Schema::Single, Some(_)) => {
                return Err(Error::parse(line, "unexpected text2 for single schema"))
            }
            _ => {}
        }
        Ok(Example {
            id: self.id.unwrap_or_else(|| position.to_string()),
            text_a: self.text,
            text_b: self.text2,
            label,
            provenance: self.provenance,
        })
    }

    fn from_example(ex: &Example) -> Record {
        let (label, label_probs) = match ex.label.hot_class() {
            Some(class) => (Some(class as i64), None),
            None => (None, Some(ex.label.probs().to_vec())),
        };
        Record {
            id: Some(ex.id.clone()),
            text: ex.text_a.clone(),
            text2: ex.text_b.clone(),
            label,
            label_probs,
            provenance: ex.provenance,
        }
    }
}

pub fn load_dataset(
    path: &Path,
    format: Format,
    schema: Schema,
    num_classes: usize,
) -> Result<Dataset> {
    if num_classes < 2 {
        return Err(Error::Config(format!(
            "num_classes must be at least 2, got {num_classes}"
        )));
    }
    let file = fsutil::open(path)?;
    let examples = match format {
        Format::Jsonl => read_jsonl(BufReader::new(file), path, schema, num_classes)?,
        Format::Csv => read_delimited(file, b',', true, schema, num_classes)?,
        Format::Tsv => read_delimited(file, b'\t', false, schema, num_classes)?,
    };
    Dataset::new(examples, num_classes, schema)
}

fn read_jsonl<R: BufRead>(
    reader: R,
    path: &Path,
    schema: Schema,
    num_classes: usize,
) -> Result<Vec<Example>> {
    let mut examples = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line)
            .map_err(|e| Error::parse(lineno, format!("malformed record: {e}")))?;
        let position = examples.len();
        examples.push(record.into_example(lineno, position, num_classes, schema)?);
    }
    Ok(examples)
}

fn read_delimited<R: std::io::Read>(
    reader: R,
    delimiter: u8,
    quoting: bool,
    schema: Schema,
    num_classes: usize,
) -> Result<Vec<Example>> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .quoting(quoting)
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(1, format!("unreadable header: {e}")))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let text_col = column("text").ok_or_else(|| Error::parse(1, "header lacks a text column"))?;
    let label_col =
        column("label").ok_or_else(|| Error::parse(1, "header lacks a label column"))?;
    let text2_col = column("text2");
    let id_col = column("id");

    let mut examples = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::parse(line, format!("malformed record: {e}"))
        })?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        let field = |col: usize| {
            row.get(col).map(str::to_string).ok_or_else(|| {
                Error::parse(line, format!("missing column {}", headers[col].trim()))
            })
        };
        let label_text = field(label_col)?;
        let label: i64 = label_text
            .trim()
            .parse()
            .map_err(|_| Error::parse(line, format!("label {label_text:?} is not an integer")))?;
        let text2 = match text2_col {
            Some(c) => Some(field(c)?).filter(|t| !t.is_empty()),
            None => None,
        };
        let record = Record {
            id: id_col.map(field).transpose()?,
            text: field(text_col)?,
            text2,
            label: Some(label),
            ..Record::default()
        };
        let position = examples.len();
        examples.push(record.into_example(line, position, num_classes, schema)?);
    }
    Ok(examples)
}

/// JSON formatting with `", "` and `": "` separators.
struct SpacedFormatter;

impl serde_json::ser::Formatter for SpacedFormatter {
    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        w.write_all(b": ")
    }
}

/// Serializes one example as a JSONL line (without the newline).
pub fn example_to_json_line(ex: &Example) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SpacedFormatter);
    Record::from_example(ex)
        .serialize(&mut ser)
        .expect("record serialization is infallible");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn write_jsonl<W: Write + ?Sized>(ds: &Dataset, out: &mut W) -> std::io::Result<()> {
    for ex in ds.examples() {
        out.write_all(example_to_json_line(ex).as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes `ds` as JSONL. Only JSONL is supported for output.
pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    fsutil::write_atomic(path, |w| write_jsonl(ds, w))
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Randomly partitions `ds` into `(train, valid)` with
/// `|valid| = round_half_up(valid_fraction * |ds|)`, clamped so that both
/// sides keep at least one example. Each side keeps the input order.
pub fn split_train_valid(
    ds: &Dataset,
    valid_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if !(valid_fraction > 0.0 && valid_fraction < 1.0) {
        return Err(Error::Config(format!(
            "valid_fraction must lie in (0, 1), got {valid_fraction}"
        )));
    }
    let n = ds.len();
    if n < 2 {
        return Err(Error::Invalid(format!(
            "cannot split a dataset of {n} example(s)"
        )));
    }
    let mut n_valid = round_half_up(valid_fraction * n as f64);
    if n_valid == 0 || n_valid == n {
        let clamped = n_valid.clamp(1, n - 1);
        log::warn!(
            "valid_fraction {valid_fraction} of {n} examples leaves an empty side; using {clamped} validation example(s)"
        );
        n_valid = clamped;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(Purpose::Split, seed, 0));
    let mut is_valid = vec![false; n];
    for &i in &order[..n_valid] {
        is_valid[i] = true;
    }
    let (mut train, mut valid) = (Vec::with_capacity(n - n_valid), Vec::with_capacity(n_valid));
    for (ex, v) in ds.examples().iter().zip(is_valid) {
        if v {
            valid.push(ex.clone());
        } else {
            train.push(ex.clone());
        }
    }
    Ok((
        Dataset::new(train, ds.num_classes, ds.schema)?,
        Dataset::new(valid, ds.num_classes, ds.schema)?,
    ))
}
