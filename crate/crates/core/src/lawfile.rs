//! On-disk interchange format for law tables: a JSON document with `n`, a
//! kind tag (`"partition"` or `"increment"`), and one entry per composition
//! holding the parts and the value as a reduced `"numerator/denominator"`
//! string. Output entries are ordered by part count, then decreasing
//! dictionary order, so identical laws serialize to identical bytes.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::{BigInt, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{all_compositions, Composition};
use crate::laws::{IncrementLaw, PartitionLaw};
use crate::{Error, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawKind {
    Partition,
    Increment,
}

#[derive(Serialize, Deserialize)]
struct LawDocument {
    n: usize,
    kind: LawKind,
    entries: Vec<LawEntry>,
}

#[derive(Serialize, Deserialize)]
struct LawEntry {
    composition: Vec<usize>,
    value: String,
}

fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rational_from_string(s: &str) -> Result<Rational, Error> {
    let bad = |s: &str| Error::LawFile(format!("cannot parse rational {s:?}"));
    match s.split_once('/') {
        Some((num, den)) => {
            let numer = BigInt::from_str(num.trim()).map_err(|_| bad(s))?;
            let denom = BigInt::from_str(den.trim()).map_err(|_| bad(s))?;
            if denom.is_zero() {
                return Err(Error::LawFile(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(numer, denom))
        }
        None => {
            let numer = BigInt::from_str(s.trim()).map_err(|_| bad(s))?;
            Ok(Rational::from_integer(numer))
        }
    }
}

fn to_document(
    n: usize,
    kind: LawKind,
    table: &BTreeMap<Composition, Rational>,
) -> LawDocument {
    let entries = all_compositions(n)
        .into_iter()
        .map(|c| LawEntry {
            value: rational_to_string(&table[&c]),
            composition: c.parts().to_vec(),
        })
        .collect();
    LawDocument { n, kind, entries }
}

fn parse_document(
    text: &str,
    allow_sparse: bool,
) -> Result<(usize, LawKind, BTreeMap<Composition, Rational>), Error> {
    let doc: LawDocument = serde_json::from_str(text)
        .map_err(|e| Error::LawFile(format!("malformed JSON: {e}")))?;
    let mut table = BTreeMap::new();
    for (idx, entry) in doc.entries.iter().enumerate() {
        let c = Composition::new(entry.composition.clone()).map_err(|e| {
            Error::LawFile(format!("entry {idx}: bad composition: {e}"))
        })?;
        if c.total() != doc.n {
            return Err(Error::LawFile(format!(
                "entry {idx}: composition {c} does not sum to n={}",
                doc.n
            )));
        }
        let v = rational_from_string(&entry.value)
            .map_err(|e| Error::LawFile(format!("entry {idx}: {e}")))?;
        if table.insert(c, v).is_some() {
            return Err(Error::LawFile(format!(
                "entry {idx}: duplicate composition"
            )));
        }
    }
    if allow_sparse {
        for c in all_compositions(doc.n) {
            table.entry(c).or_insert_with(Rational::zero);
        }
    }
    Ok((doc.n, doc.kind, table))
}

pub fn partition_law_to_string(p: &PartitionLaw) -> String {
    let doc = to_document(p.n(), LawKind::Partition, p.table());
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn increment_law_to_string(q: &IncrementLaw) -> String {
    let doc = to_document(q.n(), LawKind::Increment, q.table());
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn partition_law_from_str(text: &str, allow_sparse: bool) -> Result<PartitionLaw, Error> {
    let (n, kind, table) = parse_document(text, allow_sparse)?;
    if kind != LawKind::Partition {
        return Err(Error::LawFile("expected a partition law, found increment".into()));
    }
    PartitionLaw::new(n, table)
}

pub fn increment_law_from_str(text: &str, allow_sparse: bool) -> Result<IncrementLaw, Error> {
    let (n, kind, table) = parse_document(text, allow_sparse)?;
    if kind != LawKind::Increment {
        return Err(Error::LawFile("expected an increment law, found partition".into()));
    }
    IncrementLaw::new(n, table)
}
