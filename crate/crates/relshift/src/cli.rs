//! Command-line front end. Every run prints exactly one JSON document on
//! stdout; prose goes to stderr.
//!
//! Exit codes: 0 holds, 1 violated or not found, 2 usage or parse error,
//! 3 inconclusive within budget.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use relshift_core::algebra::modularity_failure;
use relshift_core::checks::{difunctional_all, ee_properties, goursat_identity_all, permutability, PermutabilityKind};
use relshift_core::constructions::{goursat_sl_witness, maltsev_sl_witness};
use relshift_core::terms::{find_3perm_terms, find_maltsev_term};
use relshift_core::{compose, Algebra, Budget, ClassKind, ConstructionError, Relation, SlResult, TermSearch, Verdict};
use serde_json::{json, Value};

use crate::config::budget_from_env;
use crate::format::{
    parse_algebra, parse_relation, read_file, to_pretty, AlgebraFile, FormatError, RelationFile, TermsFile, WitnessFile,
};
use crate::harness::{load_corpus, report_to_json, run_suite, sl_record, SuiteConfig};
use crate::report::{Report, Status, SCHEMA};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "relshift",
    version,
    about = "Shifting Lemma checks, witnesses and term searches on finite algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide one property of an algebra or of given relations.
    Check {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long = "R")]
        r: Option<PathBuf>,
        #[arg(long = "S")]
        s: Option<PathBuf>,
        #[arg(long = "T")]
        t: Option<PathBuf>,
        /// Reflexive relation for the `ee` property.
        #[arg(long = "E")]
        e: Option<PathBuf>,
        /// Classes of R, S, T, e.g. `refl,eq,refl`.
        #[arg(long, default_value = "refl,refl,refl")]
        classes: String,
        /// For `permutability`: 2 asks for RS = SR, 3 for RSR = SRS.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        permute: u8,
    },
    /// Build a Shifting Lemma violation from a reflexive relation.
    Witness {
        #[arg(value_enum)]
        kind: WitnessArg,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        relation: PathBuf,
    },
    /// Search the ternary clone for term conditions.
    Terms {
        #[arg(value_enum)]
        identities: TermsArg,
        #[arg(long)]
        algebra: PathBuf,
        /// Largest clone to generate; overrides the environment.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Run the cross-validation suite over a corpus.
    Suite {
        /// A directory of algebra files, or `bundled`.
        #[arg(long)]
        corpus: String,
        /// Report destination; without it the report goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random triples per algebra for the Shifting Principle.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Check that a file matches one of the formats.
    Validate {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    ShiftingLemma,
    Difunctional,
    GoursatIdentity,
    Permutability,
    ModularLattice,
    Positive,
    Ee,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WitnessArg {
    Maltsev,
    Goursat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TermsArg {
    Maltsev,
    Threeperm,
}

/// A finished command: exit code, stdout document and optional prose.
struct Outcome {
    code: i32,
    doc: Value,
    note: Option<String>,
}

impl Outcome {
    fn new(code: i32, doc: Value) -> Self {
        Outcome { code, doc, note: None }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn usage(msg: impl Into<String>) -> Self {
        let msg = msg.into();
        Outcome::new(EXIT_USAGE, json!({ "error": msg })).note(msg)
    }
}

impl From<FormatError> for Outcome {
    fn from(e: FormatError) -> Self {
        Outcome::usage(e.to_string())
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// outcome. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let code = if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_USAGE
                    } else {
                        EXIT_HOLDS
                    };
                    Outcome::new(code, json!({ "usage": text })).note(text)
                }
                _ => Outcome::new(EXIT_USAGE, json!({ "error": e.kind().to_string() })).note(text),
            }
        }
    };
    if let Some(note) = &outcome.note {
        let _ = writeln!(stderr, "{}", note.trim_end());
    }
    let _ = write!(stdout, "{}", to_pretty(&outcome.doc));
    outcome.code
}

fn execute(command: Command) -> Outcome {
    let budget = match budget_from_env() {
        Ok(b) => b,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    let result = match command {
        Command::Check {
            algebra,
            property,
            r,
            s,
            t,
            e,
            classes,
            permute,
        } => check(&budget, &algebra, property, [r, s, t], e, &classes, permute),
        Command::Witness {
            kind,
            algebra,
            relation,
        } => witness(kind, &algebra, &relation),
        Command::Terms {
            identities,
            algebra,
            budget: clone,
        } => terms(identities, &algebra, clone.unwrap_or(budget.clone_size)),
        Command::Suite {
            corpus,
            out,
            seed,
            samples,
        } => suite(&budget, &corpus, out.as_deref(), seed, samples),
        Command::Validate { file } => Ok(validate(&file)),
    };
    result.unwrap_or_else(|o| o)
}

fn load_algebra(path: &Path) -> Result<Algebra, Outcome> {
    let text = read_file(path)?;
    parse_algebra(&text).map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))
}

fn load_relation(path: &Path, alg: &Algebra) -> Result<Relation, Outcome> {
    let text = read_file(path)?;
    let rel = parse_relation(&text).map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))?;
    if rel.dom().size() != alg.size() || rel.cod().size() != alg.size() {
        return Err(Outcome::usage(format!(
            "{}: relation is {}x{}, algebra `{}` has {} elements",
            path.display(),
            rel.dom().size(),
            rel.cod().size(),
            alg.name(),
            alg.size()
        )));
    }
    Ok(rel)
}

fn parse_classes(spec: &str) -> Result<[ClassKind; 3], Outcome> {
    let kinds: Vec<ClassKind> = spec
        .split(',')
        .map(|c| match c.trim() {
            "any" => Ok(ClassKind::Arbitrary),
            "refl" => Ok(ClassKind::Reflexive),
            "reflpos" => Ok(ClassKind::ReflexivePositive),
            "eq" => Ok(ClassKind::Equivalence),
            other => Err(Outcome::usage(format!(
                "unknown class `{other}`, expected any, refl, reflpos or eq"
            ))),
        })
        .collect::<Result<_, _>>()?;
    kinds
        .try_into()
        .map_err(|_| Outcome::usage(format!("--classes needs three classes, got `{spec}`")))
}

fn verdict_outcome(property: &str, alg: &Algebra, v: Verdict) -> Outcome {
    match v {
        Verdict::Holds { checked } => Outcome::new(
            EXIT_HOLDS,
            json!({ "property": property, "algebra": alg.name(), "verdict": Status::Holds, "checked": checked }),
        ),
        Verdict::Fails(rel) => Outcome::new(
            EXIT_VIOLATED,
            json!({ "property": property, "algebra": alg.name(), "verdict": Status::Fails,
                    "counterexample": RelationFile::from_relation(&rel) }),
        ),
        Verdict::Inconclusive(b) => Outcome::new(
            EXIT_INCONCLUSIVE,
            json!({ "property": property, "algebra": alg.name(), "verdict": Status::Inconclusive, "reason": b.to_string() }),
        )
        .note(format!("inconclusive: {b}")),
    }
}

fn bool_outcome(holds: bool, doc: Value) -> Outcome {
    Outcome::new(if holds { EXIT_HOLDS } else { EXIT_VIOLATED }, doc)
}

fn check(
    budget: &Budget,
    algebra: &Path,
    property: Property,
    rst: [Option<PathBuf>; 3],
    e: Option<PathBuf>,
    classes: &str,
    permute: u8,
) -> Result<Outcome, Outcome> {
    let alg = load_algebra(algebra)?;
    let [r, s, t] = rst
        .map(|p| p.map(|p| load_relation(&p, &alg)).transpose())
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?
        .try_into()
        .expect("three slots");
    let name = alg.name();
    match property {
        Property::ShiftingLemma => match (r, s, t) {
            (Some(r), Some(s), Some(t)) => {
                let result = relshift_core::shifting_lemma(&r, &s, &t).map_err(|e| Outcome::usage(e.to_string()))?;
                let compatible = json!({
                    "R": alg.is_compatible(&r).expect("shape checked"),
                    "S": alg.is_compatible(&s).expect("shape checked"),
                    "T": alg.is_compatible(&t).expect("shape checked"),
                });
                Ok(match result {
                    SlResult::Holds => Outcome::new(
                        EXIT_HOLDS,
                        json!({ "property": "shifting-lemma", "algebra": name, "verdict": Status::Holds, "compatible": compatible }),
                    ),
                    SlResult::Violated(q) => Outcome::new(
                        EXIT_VIOLATED,
                        json!({ "property": "shifting-lemma", "algebra": name, "verdict": Status::Violated,
                                "quadruple": q, "compatible": compatible }),
                    ),
                })
            }
            (None, None, None) => {
                let layout = parse_classes(classes)?;
                let mut errors = Vec::new();
                let record = sl_record(&alg, layout, budget, &mut errors);
                let code = match record.verdict {
                    Status::Holds => EXIT_HOLDS,
                    Status::Violated => EXIT_VIOLATED,
                    Status::Inconclusive => EXIT_INCONCLUSIVE,
                    _ => EXIT_USAGE,
                };
                let mut doc = json!({ "property": "shifting-lemma", "algebra": name });
                merge(&mut doc, serde_json::to_value(&record).expect("records serialize"));
                Ok(Outcome::new(code, doc))
            }
            _ => Err(Outcome::usage("--R, --S and --T go together")),
        },
        Property::Difunctional => match r {
            Some(d) => {
                let holds = d.is_difunctional();
                Ok(bool_outcome(
                    holds,
                    json!({ "property": "difunctional", "algebra": name, "difunctional": holds }),
                ))
            }
            None => {
                let v = difunctional_all(&alg, &alg, budget).map_err(|e| Outcome::usage(e.to_string()))?;
                Ok(verdict_outcome("difunctional", &alg, v))
            }
        },
        Property::GoursatIdentity => match r {
            Some(d) => {
                let ddo = compose(&d, &d.opposite()).expect("square");
                let holds = compose(&ddo, &ddo).expect("square") == ddo;
                Ok(bool_outcome(
                    holds,
                    json!({ "property": "goursat-identity", "algebra": name, "holds": holds }),
                ))
            }
            None => {
                let v = goursat_identity_all(&alg, &alg, budget).map_err(|e| Outcome::usage(e.to_string()))?;
                Ok(verdict_outcome("goursat-identity", &alg, v))
            }
        },
        Property::Permutability => {
            let wanted = |k: PermutabilityKind| match permute {
                2 => k == PermutabilityKind::TwoPermute,
                _ => k != PermutabilityKind::Neither,
            };
            let pairs: Vec<(Relation, Relation)> = match (r, s) {
                (Some(r), Some(s)) => vec![(r, s)],
                (None, None) => {
                    let cons = alg.all_congruences();
                    let mut v = Vec::new();
                    for i in 0..cons.len() {
                        for j in i + 1..cons.len() {
                            v.push((cons[i].clone(), cons[j].clone()));
                        }
                    }
                    v
                }
                _ => return Err(Outcome::usage("--R and --S go together")),
            };
            let mut rows = Vec::new();
            let mut holds = true;
            for (r, s) in &pairs {
                let p = permutability(r, s).map_err(|e| Outcome::usage(e.to_string()))?;
                holds &= wanted(p.kind);
                rows.push(json!({
                    "R": RelationFile::from_relation(r),
                    "S": RelationFile::from_relation(s),
                    "kind": p.kind.to_string(),
                }));
            }
            Ok(bool_outcome(
                holds,
                json!({ "property": "permutability", "algebra": name, "permute": permute, "holds": holds, "pairs": rows }),
            ))
        }
        Property::ModularLattice => {
            let cons = alg.all_congruences();
            let failure = modularity_failure(&alg, &cons);
            let doc = json!({
                "property": "modular-lattice",
                "algebra": name,
                "congruences": cons.len(),
                "modular": failure.is_none(),
                "failure": failure.map(|(a, b, c)| json!({
                    "a": RelationFile::from_relation(&cons[a]),
                    "b": RelationFile::from_relation(&cons[b]),
                    "c": RelationFile::from_relation(&cons[c]),
                })),
            });
            Ok(bool_outcome(failure.is_none(), doc))
        }
        Property::Positive => {
            let p = r.ok_or_else(|| Outcome::usage("positive needs --R"))?;
            let u = p.positive_witness().map_err(|e| Outcome::usage(e.to_string()))?;
            let doc = json!({
                "property": "positive",
                "algebra": name,
                "positive": u.is_some(),
                "U": u.as_ref().map(RelationFile::from_relation),
            });
            Ok(bool_outcome(u.is_some(), doc))
        }
        Property::Ee => {
            let e = e.ok_or_else(|| Outcome::usage("ee needs --E"))?;
            let e = load_relation(&e, &alg)?;
            let props = ee_properties(&alg, &e, budget).map_err(|e| Outcome::usage(e.to_string()))?;
            let positive = match &props.positive_are_equivalences {
                Verdict::Holds { .. } => Status::Holds,
                Verdict::Fails(_) => Status::Fails,
                Verdict::Inconclusive(_) => Status::Inconclusive,
            };
            let code = if !(props.ee_op_is_equivalence && props.ee_op_equals_op_e) || positive == Status::Fails {
                EXIT_VIOLATED
            } else if positive == Status::Inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_HOLDS
            };
            let counterexample = match &props.positive_are_equivalences {
                Verdict::Fails(p) => Some(RelationFile::from_relation(p)),
                _ => None,
            };
            Ok(Outcome::new(
                code,
                json!({
                    "property": "ee",
                    "algebra": name,
                    "ee_op_is_equivalence": props.ee_op_is_equivalence,
                    "ee_op_equals_op_e": props.ee_op_equals_op_e,
                    "positive_are_equivalences": positive,
                    "counterexample": counterexample,
                }),
            ))
        }
    }
}

fn merge(doc: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (doc, extra) {
        a.extend(b);
    }
}

fn witness(kind: WitnessArg, algebra: &Path, relation: &Path) -> Result<Outcome, Outcome> {
    let alg = load_algebra(algebra)?;
    let e = load_relation(relation, &alg)?;
    let built = match kind {
        WitnessArg::Maltsev => maltsev_sl_witness(&alg, &e).map(|w| WitnessFile::from_maltsev(&alg, &e, &w)),
        WitnessArg::Goursat => goursat_sl_witness(&alg, &e).map(|w| WitnessFile::from_goursat(&alg, &e, &w)),
    };
    match built {
        Ok(file) => Ok(Outcome::new(
            EXIT_HOLDS,
            serde_json::to_value(file).expect("witnesses serialize"),
        )),
        Err(ConstructionError::NoWitness) => {
            Ok(Outcome::new(EXIT_VIOLATED, json!({ "error": "no witness exists" })).note("no witness exists"))
        }
        Err(e) => Err(Outcome::usage(e.to_string())),
    }
}

fn terms(identities: TermsArg, algebra: &Path, clone_budget: usize) -> Result<Outcome, Outcome> {
    let alg = load_algebra(algebra)?;
    let (search, found): (TermSearch<()>, Option<TermsFile>) = match identities {
        TermsArg::Maltsev => match find_maltsev_term(&alg, clone_budget) {
            TermSearch::Found(p) => (TermSearch::Found(()), Some(TermsFile::maltsev(&p))),
            TermSearch::NotFound { clone_size } => (TermSearch::NotFound { clone_size }, None),
            TermSearch::Inconclusive { budget } => (TermSearch::Inconclusive { budget }, None),
        },
        TermsArg::Threeperm => match find_3perm_terms(&alg, clone_budget) {
            TermSearch::Found((r, s)) => (TermSearch::Found(()), Some(TermsFile::three_perm(&r, &s))),
            TermSearch::NotFound { clone_size } => (TermSearch::NotFound { clone_size }, None),
            TermSearch::Inconclusive { budget } => (TermSearch::Inconclusive { budget }, None),
        },
    };
    Ok(match search {
        TermSearch::Found(()) => Outcome::new(EXIT_HOLDS, serde_json::to_value(found).expect("terms serialize")),
        TermSearch::NotFound { clone_size } => Outcome::new(
            EXIT_VIOLATED,
            json!({ "status": Status::NotFound, "clone_complete": true, "clone_size": clone_size }),
        )
        .note(format!("not found (clone complete, {clone_size} functions)")),
        TermSearch::Inconclusive { budget } => Outcome::new(
            EXIT_INCONCLUSIVE,
            json!({ "status": Status::Inconclusive, "clone_complete": false, "budget": budget }),
        )
        .note(format!("not found within a clone budget of {budget}")),
    })
}

fn suite(budget: &Budget, corpus: &str, out: Option<&Path>, seed: u64, samples: usize) -> Result<Outcome, Outcome> {
    let corpus = load_corpus(corpus)?;
    let config = SuiteConfig {
        seed,
        budget: *budget,
        samples,
    };
    let report = run_suite(&corpus, &config);
    let healthy = report.summary.consistency_failures == 0 && report.summary.witness_replay_failures == 0;
    let code = if healthy { EXIT_HOLDS } else { EXIT_VIOLATED };
    match out {
        Some(path) => {
            std::fs::write(path, report_to_json(&report)).map_err(|source| {
                Outcome::from(FormatError::Io {
                    path: path.to_path_buf(),
                    source,
                })
            })?;
            Ok(Outcome::new(
                code,
                json!({ "out": path.display().to_string(), "summary": report.summary }),
            ))
        }
        None => Ok(Outcome::new(
            code,
            serde_json::to_value(&report).expect("reports serialize"),
        )),
    }
}

/// Schema-level checks: shapes, index ranges and required fields.
pub fn validate_text(text: &str) -> Result<&'static str, (Option<&'static str>, String)> {
    let value: Value = serde_json::from_str(text).map_err(|e| (None, e.to_string()))?;
    let Value::Object(map) = &value else {
        return Err((None, "top level is not an object".into()));
    };
    let kind = if map.contains_key("schema") {
        "report"
    } else if map.contains_key("operations") {
        "algebra"
    } else if map.contains_key("identity_set") {
        "terms"
    } else if map.contains_key("kind") {
        "witness"
    } else if map.contains_key("pairs") {
        "relation"
    } else {
        return Err((None, "not a relation, algebra, witness, terms or report file".into()));
    };
    let fail = |e: String| (Some(kind), e);
    match kind {
        "relation" => parse_relation(text).map(|_| ()).map_err(|e| fail(e.to_string()))?,
        "algebra" => {
            let file: AlgebraFile = serde_json::from_str(text).map_err(|e| fail(e.to_string()))?;
            file.to_algebra().map_err(|e| fail(e.to_string()))?;
        }
        "witness" => {
            let file: WitnessFile = serde_json::from_str(text).map_err(|e| fail(e.to_string()))?;
            file.instance().map_err(|e| fail(e.to_string()))?;
        }
        "terms" => {
            let file: TermsFile = serde_json::from_str(text).map_err(|e| fail(e.to_string()))?;
            let len = file.r.table.len();
            let n = (1..=len).find(|n| n * n * n >= len).unwrap_or(0);
            let tables = std::iter::once(&file.r).chain(&file.s);
            if n * n * n != len
                || tables
                    .clone()
                    .any(|t| t.table.len() != len || t.table.iter().any(|&v| v >= n))
            {
                return Err(fail("term tables must have n³ entries below n".into()));
            }
            if (file.s.is_some()) != (file.identity_set == crate::format::IdentitySet::ThreePerm) {
                return Err(fail("`s` is present exactly for 3perm".into()));
            }
        }
        _ => {
            let report: Report = serde_json::from_str(text).map_err(|e| fail(e.to_string()))?;
            if report.schema != SCHEMA {
                return Err(fail(format!("unknown schema `{}`", report.schema)));
            }
        }
    }
    Ok(kind)
}

fn validate(path: &Path) -> Outcome {
    let text = match read_file(path) {
        Ok(t) => t,
        Err(e) => return e.into(),
    };
    let file = path.display().to_string();
    match validate_text(&text) {
        Ok(kind) => Outcome::new(EXIT_HOLDS, json!({ "file": file, "kind": kind, "valid": true })),
        Err((None, msg)) if serde_json::from_str::<Value>(&text).is_err() => Outcome::usage(format!("{file}: {msg}")),
        Err((kind, msg)) => Outcome::new(
            EXIT_VIOLATED,
            json!({ "file": file, "kind": kind, "valid": false, "error": msg }),
        )
        .note(format!("{file}: {msg}")),
    }
}
