//! JSON file formats for relations, algebras, witnesses and term results.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use relshift_core::constructions::{GoursatWitness, MaltsevWitness};
use relshift_core::{
    Algebra, AlgebraError, Carrier, Operation, Quadruple, Relation, RelationError, SlInstance, TermFunction,
};
use serde::de::{self, DeserializeSeed, IgnoredAny, MapAccess, SeqAccess, Visitor};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Relation(#[from] RelationError),
    #[error("{0}")]
    Algebra(#[from] AlgebraError),
    #[error("duplicate pair [{0}, {1}]")]
    DuplicatePair(usize, usize),
    #[error("{0}")]
    Invalid(String),
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `{"dom": n, "cod": m, "pairs": [[x, y], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub dom: usize,
    pub cod: usize,
    pub pairs: Vec<[usize; 2]>,
}

impl RelationFile {
    pub fn from_relation(r: &Relation) -> Self {
        RelationFile {
            dom: r.dom().size(),
            cod: r.cod().size(),
            pairs: r.pairs().map(|(x, y)| [x, y]).collect(),
        }
    }

    pub fn to_relation(&self) -> Result<Relation, FormatError> {
        let dom = Carrier::new(self.dom)?;
        let cod = Carrier::new(self.cod)?;
        Ok(Relation::from_pairs(dom, cod, self.pairs.iter().map(|p| (p[0], p[1])))?)
    }

    /// Serializes, refusing duplicate pairs.
    pub fn to_json(&self) -> Result<String, FormatError> {
        let mut seen = BTreeSet::new();
        for &[x, y] in &self.pairs {
            if !seen.insert((x, y)) {
                return Err(FormatError::DuplicatePair(x, y));
            }
        }
        Ok(serde_json::to_string(self)?)
    }
}

pub fn relation_to_json(r: &Relation) -> String {
    serde_json::to_string(&RelationFile::from_relation(r)).expect("relations serialize")
}

/// Parses a relation file. Duplicate pairs are accepted; an index outside
/// the carriers is reported with its line and column.
pub fn parse_relation(text: &str) -> Result<Relation, FormatError> {
    let file: RelationFile = serde_json::from_str(text)?;
    let out_of_range = file.pairs.iter().any(|&[x, y]| x >= file.dom || y >= file.cod);
    if out_of_range {
        let mut de = serde_json::Deserializer::from_str(text);
        let seed = BoundedRelation {
            dom: file.dom,
            cod: file.cod,
        };
        if let Err(e) = seed.deserialize(&mut de) {
            return Err(e.into());
        }
    }
    file.to_relation()
}

/// Second pass over a relation file that fails at the first out-of-range
/// pair, so the error carries the reader position.
struct BoundedRelation {
    dom: usize,
    cod: usize,
}

impl<'de> DeserializeSeed<'de> for BoundedRelation {
    type Value = ();

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<(), D::Error> {
        d.deserialize_map(self)
    }
}

impl<'de> Visitor<'de> for BoundedRelation {
    type Value = ();

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a relation object")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<(), A::Error> {
        while let Some(key) = map.next_key::<String>()? {
            if key == "pairs" {
                map.next_value_seed(BoundedPairs {
                    dom: self.dom,
                    cod: self.cod,
                })?;
            } else {
                map.next_value::<IgnoredAny>()?;
            }
        }
        Ok(())
    }
}

struct BoundedPairs {
    dom: usize,
    cod: usize,
}

impl<'de> DeserializeSeed<'de> for BoundedPairs {
    type Value = ();

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<(), D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for BoundedPairs {
    type Value = ();

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a list of pairs")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<(), A::Error> {
        let pair = BoundedPair {
            dom: self.dom,
            cod: self.cod,
        };
        while seq.next_element_seed(pair)?.is_some() {}
        Ok(())
    }
}

/// One `[x, y]`, checked before its closing bracket is read.
#[derive(Clone, Copy)]
struct BoundedPair {
    dom: usize,
    cod: usize,
}

impl<'de> DeserializeSeed<'de> for BoundedPair {
    type Value = ();

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<(), D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for BoundedPair {
    type Value = ();

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a pair [x, y]")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<(), A::Error> {
        let x: usize = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let y: usize = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if x >= self.dom || y >= self.cod {
            return Err(de::Error::custom(format!(
                "pair [{x}, {y}] out of range for a {}x{} relation",
                self.dom, self.cod
            )));
        }
        if seq.next_element::<IgnoredAny>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationFile {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

/// `{"name": str, "size": n, "operations": [...]}` with row-major tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub size: usize,
    pub operations: Vec<OperationFile>,
}

impl AlgebraFile {
    pub fn from_algebra(a: &Algebra) -> Self {
        AlgebraFile {
            name: a.name().to_string(),
            size: a.size(),
            operations: a
                .operations()
                .iter()
                .map(|o| OperationFile {
                    name: o.name.clone(),
                    arity: o.arity,
                    table: o.table.clone(),
                })
                .collect(),
        }
    }

    pub fn to_algebra(&self) -> Result<Algebra, FormatError> {
        let ops = self
            .operations
            .iter()
            .map(|o| Operation::new(o.name.clone(), o.arity, o.table.clone()))
            .collect();
        Ok(Algebra::new(self.name.clone(), self.size, ops)?)
    }
}

pub fn parse_algebra(text: &str) -> Result<Algebra, FormatError> {
    serde_json::from_str::<AlgebraFile>(text)?.to_algebra()
}

pub fn algebra_to_json(a: &Algebra) -> String {
    serde_json::to_string_pretty(&AlgebraFile::from_algebra(a)).expect("algebras serialize")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Maltsev,
    Goursat,
}

/// A replayable Shifting Lemma violation. For `maltsev`, `R`, `S`, `T`
/// live on the pairs of `E` listed in `pair_index`; for `goursat` they
/// live on the base carrier and `pair_index` is null.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub kind: WitnessKind,
    pub base_algebra: String,
    /// Size of the carrier `R`, `S` and `T` live on.
    pub carrier: usize,
    #[serde(rename = "E")]
    pub e: Vec<[usize; 2]>,
    #[serde(rename = "R")]
    pub r: Vec<[usize; 2]>,
    #[serde(rename = "S")]
    pub s: Vec<[usize; 2]>,
    #[serde(rename = "T")]
    pub t: Vec<[usize; 2]>,
    pub quadruple: Quadruple,
    pub pair_index: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub used_opposite: bool,
}

fn pair_list(r: &Relation) -> Vec<[usize; 2]> {
    r.pairs().map(|(x, y)| [x, y]).collect()
}

impl WitnessFile {
    pub fn from_maltsev(base: &Algebra, e: &Relation, w: &MaltsevWitness) -> Self {
        let inst = &w.instance;
        WitnessFile {
            kind: WitnessKind::Maltsev,
            base_algebra: base.name().to_string(),
            carrier: w.object.len(),
            e: pair_list(e),
            r: pair_list(&inst.r),
            s: pair_list(&inst.s),
            t: pair_list(&inst.t),
            quadruple: inst.quadruple.expect("constructed witnesses carry a quadruple"),
            pair_index: Some(w.object.pairs().iter().map(|&(a, b)| [a, b]).collect()),
            used_opposite: false,
        }
    }

    pub fn from_goursat(base: &Algebra, e: &Relation, w: &GoursatWitness) -> Self {
        let inst = &w.instance;
        WitnessFile {
            kind: WitnessKind::Goursat,
            base_algebra: base.name().to_string(),
            carrier: base.size(),
            e: pair_list(e),
            r: pair_list(&inst.r),
            s: pair_list(&inst.s),
            t: pair_list(&inst.t),
            quadruple: inst.quadruple.expect("constructed witnesses carry a quadruple"),
            pair_index: None,
            used_opposite: w.used_opposite,
        }
    }

    /// Rebuilds the instance for replay through the checks.
    pub fn instance(&self) -> Result<SlInstance, FormatError> {
        let c = Carrier::new(self.carrier)?;
        let rel = |pairs: &[[usize; 2]]| Relation::from_pairs(c, c, pairs.iter().map(|p| (p[0], p[1])));
        if let Some(q) = self.quadruple.iter().find(|&&q| q >= self.carrier) {
            return Err(FormatError::Invalid(format!(
                "quadruple entry {q} outside carrier of size {}",
                self.carrier
            )));
        }
        match (&self.kind, &self.pair_index) {
            (WitnessKind::Maltsev, Some(idx)) if idx.len() == self.carrier => {}
            (WitnessKind::Maltsev, _) => {
                return Err(FormatError::Invalid(
                    "maltsev witness needs one pair_index entry per carrier element".into(),
                ))
            }
            (WitnessKind::Goursat, None) => {}
            (WitnessKind::Goursat, Some(_)) => {
                return Err(FormatError::Invalid("goursat witness has no pair_index".into()))
            }
        }
        Ok(SlInstance {
            r: rel(&self.r)?,
            s: rel(&self.s)?,
            t: rel(&self.t)?,
            quadruple: Some(self.quadruple),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentitySet {
    Maltsev,
    #[serde(rename = "3perm")]
    ThreePerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub table: Vec<usize>,
    pub term: String,
}

impl From<&TermFunction> for TermEntry {
    fn from(f: &TermFunction) -> Self {
        TermEntry {
            table: f.table.clone(),
            term: f.term.to_string(),
        }
    }
}

/// Found terms. For `maltsev`, `r` is the term `p` and `s` is absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermsFile {
    pub identity_set: IdentitySet,
    pub r: TermEntry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<TermEntry>,
}

impl TermsFile {
    pub fn maltsev(p: &TermFunction) -> Self {
        TermsFile {
            identity_set: IdentitySet::Maltsev,
            r: p.into(),
            s: None,
        }
    }

    pub fn three_perm(r: &TermFunction, s: &TermFunction) -> Self {
        TermsFile {
            identity_set: IdentitySet::ThreePerm,
            r: r.into(),
            s: Some(s.into()),
        }
    }

    /// Checks table lengths and the identities; terms are not re-parsed.
    pub fn check_tables(&self, n: usize) -> Result<(), FormatError> {
        use relshift_core::terms::{is_3perm_pair, is_maltsev};
        let cells = n * n * n;
        let tables: Vec<&[usize]> = std::iter::once(&self.r)
            .chain(&self.s)
            .map(|e| e.table.as_slice())
            .collect();
        if tables.iter().any(|t| t.len() != cells || t.iter().any(|&v| v >= n)) {
            return Err(FormatError::Invalid(format!(
                "term tables must have {cells} entries below {n}"
            )));
        }
        let ok = match (self.identity_set, tables.as_slice()) {
            (IdentitySet::Maltsev, [p]) => is_maltsev(p, n),
            (IdentitySet::ThreePerm, [r, s]) => is_3perm_pair(r, s, n),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(FormatError::Invalid("tables do not satisfy the identity set".into()))
        }
    }
}

/// Indented JSON that keeps arrays of scalars, and arrays of those, on one
/// line. Pair lists and tables stay readable without a line per number.
pub fn to_pretty(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_pretty(value, 0, &mut out);
    out.push('\n');
    out
}

fn is_flat(v: &serde_json::Value) -> bool {
    use serde_json::Value;
    match v {
        Value::Array(items) => items.iter().all(|i| match i {
            Value::Array(inner) => inner.iter().all(|x| !x.is_array() && !x.is_object()),
            Value::Object(_) => false,
            _ => true,
        }),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn write_pretty(v: &serde_json::Value, depth: usize, out: &mut String) {
    use serde_json::Value;
    if is_flat(v) {
        write_flat(v, out);
        return;
    }
    let pad = "  ".repeat(depth + 1);
    match v {
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_pretty(item, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_pretty(item, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
        }
        _ => unreachable!("scalars are flat"),
    }
    out.push_str(&"  ".repeat(depth));
    out.push(if v.is_array() { ']' } else { '}' });
}

fn write_flat(v: &serde_json::Value, out: &mut String) {
    match v {
        serde_json::Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_flat(item, out);
            }
            out.push(']');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("json values serialize")),
    }
}
