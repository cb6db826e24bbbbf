//! The suite report, schema `relshift-report/1`.

use relshift_core::{Budget, Quadruple};
use serde::{Deserialize, Serialize};

use crate::format::{RelationFile, TermsFile, WitnessFile};

pub const SCHEMA: &str = "relshift-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Violated,
    Fails,
    Found,
    NotFound,
    Inconclusive,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub corpus: String,
    pub seed: u64,
    pub budget: BudgetRecord,
    pub algebras: Vec<AlgebraReport>,
    pub summary: Summary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetRecord {
    pub max_carrier: usize,
    pub max_relations: usize,
    pub max_triples: u64,
    pub clone_size: usize,
}

impl From<Budget> for BudgetRecord {
    fn from(b: Budget) -> Self {
        BudgetRecord {
            max_carrier: b.max_carrier,
            max_relations: b.max_relations,
            max_triples: b.max_triples,
            clone_size: b.clone_size,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub algebras: usize,
    pub consistency_failures: usize,
    pub witness_replay_failures: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraReport {
    pub name: String,
    pub size: usize,
    pub signature: Vec<SignatureEntry>,
    pub terms: TermsRecord,
    pub congruences: CongruenceRecord,
    /// Over congruence index pairs `r < s`.
    pub permutability: Vec<PermRecord>,
    pub shifting_lemma: Vec<SlRecord>,
    pub difunctional: VerdictRecord,
    pub goursat_identity: VerdictRecord,
    pub reflexive_are_equivalences: VerdictRecord,
    pub positive_are_equivalences: VerdictRecord,
    /// One entry per reflexive compatible `E`.
    pub ee: Vec<EeRecord>,
    pub witnesses: Vec<WitnessRecord>,
    /// Present only when a 3-permutability pair was found.
    pub join_formula: Option<CountRecord>,
    pub supremum: Option<CountRecord>,
    pub shifting_principle: CountRecord,
    pub consistency: ConsistencyRecord,
    pub errors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureEntry {
    pub name: String,
    pub arity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermsRecord {
    pub clone_size: usize,
    pub clone_complete: bool,
    pub maltsev: SearchRecord,
    pub three_perm: SearchRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchRecord {
    pub status: Status,
    pub terms: Option<TermsFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CongruenceRecord {
    pub count: usize,
    /// Each congruence as its list of classes, in lexicographic order of
    /// the relations.
    pub classes: Vec<Vec<Vec<usize>>>,
    pub modular: bool,
    /// Indices `(a, b, c)` with `a ≤ c` and `a ∨ (b ∧ c) ≠ (a ∨ b) ∧ c`.
    pub modularity_failure: Option<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermRecord {
    pub r: usize,
    pub s: usize,
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlRecord {
    pub classes: String,
    pub verdict: Status,
    pub triples: Option<u64>,
    pub reason: Option<String>,
    pub witness: Option<TripleWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleWitness {
    #[serde(rename = "R")]
    pub r: RelationFile,
    #[serde(rename = "S")]
    pub s: RelationFile,
    #[serde(rename = "T")]
    pub t: RelationFile,
    pub quadruple: Quadruple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictRecord {
    pub verdict: Status,
    pub checked: Option<usize>,
    pub counterexample: Option<RelationFile>,
    pub reason: Option<String>,
}

impl VerdictRecord {
    pub fn holds(checked: usize) -> Self {
        VerdictRecord {
            verdict: Status::Holds,
            checked: Some(checked),
            counterexample: None,
            reason: None,
        }
    }

    pub fn fails(counterexample: RelationFile) -> Self {
        VerdictRecord {
            verdict: Status::Fails,
            checked: None,
            counterexample: Some(counterexample),
            reason: None,
        }
    }

    pub fn inconclusive(reason: String) -> Self {
        VerdictRecord {
            verdict: Status::Inconclusive,
            checked: None,
            counterexample: None,
            reason: Some(reason),
        }
    }

    pub fn error(reason: String) -> Self {
        VerdictRecord {
            verdict: Status::Error,
            checked: None,
            counterexample: None,
            reason: Some(reason),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EeRecord {
    #[serde(rename = "E")]
    pub e: Vec<[usize; 2]>,
    pub ee_op_is_equivalence: bool,
    pub ee_op_equals_op_e: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessRecord {
    pub replayed: bool,
    pub witness: WitnessFile,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountRecord {
    pub checked: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsistencyRecord {
    pub maltsev_term: bool,
    pub three_perm_terms: bool,
    /// Reported side by side, nothing is inferred from them.
    pub modular: bool,
    pub eq_shifting_lemma: Option<Status>,
    /// Implications from found terms that the other records contradict.
    pub breaks: Vec<String>,
}
