//! Corpus loading and the cross-validation suite.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relshift_core::algebra::modularity_failure;
use relshift_core::checks::{
    difunctional_all, goursat_identity_all, permutability, positive_are_equivalences, reflexive_are_equivalences,
    shifting_principle_reduction, PermutabilityKind,
};
use relshift_core::constructions::{goursat_sl_witness, join_via_rsr, maltsev_sl_witness, supremum_sides};
use relshift_core::enumerate::{enumerate_class, EnumError};
use relshift_core::terms::{find_3perm_in, find_maltsev_in, generate_ternary_clone};
use relshift_core::{
    compose, shifting_lemma, shifting_lemma_forall, Algebra, Budget, ClassKind, ForallOutcome, Relation, RelationClass,
    SlResult, TermSearch, Verdict,
};

use crate::format::{parse_algebra, read_file, FormatError, RelationFile, TermsFile, WitnessFile};
use crate::report::*;

const BUNDLED: [(&str, &str); 7] = [
    ("z2", include_str!("../corpus/z2.json")),
    ("z3", include_str!("../corpus/z3.json")),
    ("z4", include_str!("../corpus/z4.json")),
    ("semilattice2", include_str!("../corpus/semilattice2.json")),
    ("implication2", include_str!("../corpus/implication2.json")),
    ("set2", include_str!("../corpus/set2.json")),
    ("n5_unary", include_str!("../corpus/n5_unary.json")),
];

#[derive(Clone, Debug)]
pub struct Corpus {
    pub id: String,
    pub algebras: Vec<Algebra>,
}

pub fn bundled_corpus() -> Corpus {
    Corpus {
        id: "bundled".into(),
        algebras: BUNDLED
            .iter()
            .map(|(name, text)| parse_algebra(text).unwrap_or_else(|e| panic!("bundled {name}: {e}")))
            .collect(),
    }
}

/// `bundled`, or a directory whose `*.json` files are algebras, read in
/// file-name order. Algebra names must be unique.
pub fn load_corpus(spec: &str) -> Result<Corpus, FormatError> {
    if spec == "bundled" {
        return Ok(bundled_corpus());
    }
    let dir = Path::new(spec);
    let entries = std::fs::read_dir(dir).map_err(|source| FormatError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|source| FormatError::Io {
                path: dir.to_path_buf(),
                source,
            })?
            .path();
        if path.extension().is_some_and(|e| e == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    let mut algebras: Vec<Algebra> = Vec::new();
    for path in &paths {
        let alg =
            parse_algebra(&read_file(path)?).map_err(|e| FormatError::Invalid(format!("{}: {e}", path.display())))?;
        if algebras.iter().any(|a| a.name() == alg.name()) {
            return Err(FormatError::Invalid(format!(
                "{}: algebra name `{}` used twice",
                path.display(),
                alg.name()
            )));
        }
        algebras.push(alg);
    }
    if algebras.is_empty() {
        return Err(FormatError::Invalid(format!("{}: no algebra files", dir.display())));
    }
    Ok(Corpus {
        id: spec.to_string(),
        algebras,
    })
}

/// Every compatible relation of the class on `alg`, sorted and
/// deduplicated. Carriers above the budget cap are refused.
pub fn enumerate_reflexive_compatible(
    alg: &Algebra,
    class: RelationClass,
    budget: &Budget,
) -> Result<Vec<Relation>, EnumError> {
    enumerate_class(
        alg,
        RelationClass {
            compatible: true,
            ..class
        },
        budget,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub budget: Budget,
    /// Random triples per algebra for the Shifting Principle reduction.
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            budget: Budget::default(),
            samples: 200,
        }
    }
}

/// The class layouts run on every algebra, as `(R, S, T)`.
pub const SL_LAYOUTS: [[ClassKind; 3]; 5] = [
    [ClassKind::Equivalence, ClassKind::Equivalence, ClassKind::Equivalence],
    [ClassKind::Reflexive, ClassKind::Reflexive, ClassKind::Reflexive],
    [ClassKind::Reflexive, ClassKind::Equivalence, ClassKind::Reflexive],
    [ClassKind::Equivalence, ClassKind::Reflexive, ClassKind::Equivalence],
    [
        ClassKind::ReflexivePositive,
        ClassKind::Reflexive,
        ClassKind::ReflexivePositive,
    ],
];

pub fn class_name(kind: ClassKind) -> &'static str {
    match kind {
        ClassKind::Arbitrary => "any",
        ClassKind::Reflexive => "refl",
        ClassKind::ReflexivePositive => "reflpos",
        ClassKind::Equivalence => "eq",
    }
}

pub fn layout_name(layout: [ClassKind; 3]) -> String {
    layout.map(class_name).join(",")
}

pub fn run_suite(corpus: &Corpus, config: &SuiteConfig) -> Report {
    let algebras: Vec<AlgebraReport> = corpus
        .algebras
        .iter()
        .enumerate()
        .map(|(i, alg)| run_algebra(alg, config, config.seed.wrapping_add(i as u64)))
        .collect();
    let summary = Summary {
        algebras: algebras.len(),
        consistency_failures: algebras.iter().map(|a| a.consistency.breaks.len()).sum(),
        witness_replay_failures: algebras
            .iter()
            .map(|a| a.witnesses.iter().filter(|w| !w.replayed).count())
            .sum(),
        errors: algebras.iter().map(|a| a.errors.len()).sum(),
    };
    Report {
        schema: SCHEMA.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        corpus: corpus.id.clone(),
        seed: config.seed,
        budget: config.budget.into(),
        algebras,
        summary,
    }
}

fn verdict_record(v: Result<Verdict, impl std::fmt::Display>, errors: &mut Vec<String>, what: &str) -> VerdictRecord {
    match v {
        Ok(Verdict::Holds { checked }) => VerdictRecord::holds(checked),
        Ok(Verdict::Fails(rel)) => VerdictRecord::fails(RelationFile::from_relation(&rel)),
        Ok(Verdict::Inconclusive(b)) => VerdictRecord::inconclusive(b.to_string()),
        Err(e) => {
            errors.push(format!("{what}: {e}"));
            VerdictRecord::error(e.to_string())
        }
    }
}

fn search_record<T>(s: &TermSearch<T>, file: impl FnOnce(&T) -> TermsFile) -> SearchRecord {
    match s {
        TermSearch::Found(t) => SearchRecord {
            status: Status::Found,
            terms: Some(file(t)),
        },
        TermSearch::NotFound { .. } => SearchRecord {
            status: Status::NotFound,
            terms: None,
        },
        TermSearch::Inconclusive { .. } => SearchRecord {
            status: Status::Inconclusive,
            terms: None,
        },
    }
}

/// Shifting Lemma over the corpus layouts, recording replayable triples.
pub fn sl_record(alg: &Algebra, layout: [ClassKind; 3], budget: &Budget, errors: &mut Vec<String>) -> SlRecord {
    let [r, s, t] = layout.map(RelationClass::compatible);
    let classes = layout_name(layout);
    match shifting_lemma_forall(alg, r, s, t, budget) {
        Ok(ForallOutcome::Holds { triples }) => SlRecord {
            classes,
            verdict: Status::Holds,
            triples: Some(triples),
            reason: None,
            witness: None,
        },
        Ok(ForallOutcome::Violated { r, s, t, quadruple }) => SlRecord {
            classes,
            verdict: Status::Violated,
            triples: None,
            reason: None,
            witness: Some(TripleWitness {
                r: RelationFile::from_relation(&r),
                s: RelationFile::from_relation(&s),
                t: RelationFile::from_relation(&t),
                quadruple,
            }),
        },
        Ok(ForallOutcome::Inconclusive(b)) => SlRecord {
            classes,
            verdict: Status::Inconclusive,
            triples: None,
            reason: Some(b.to_string()),
            witness: None,
        },
        Err(e) => {
            errors.push(format!("shifting lemma {classes}: {e}"));
            SlRecord {
                classes,
                verdict: Status::Error,
                triples: None,
                reason: Some(e.to_string()),
                witness: None,
            }
        }
    }
}

fn blocks(r: &Relation) -> Vec<Vec<usize>> {
    let n = r.dom().size();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if (0..x).all(|y| !r.contains(x, y)) {
            out.push(r.image(x).collect());
        }
    }
    out
}

fn random_triple(rng: &mut ChaCha8Rng, alg: &Algebra) -> (Relation, Relation, Relation) {
    let c = alg.carrier();
    let mut rel = || Relation::from_fn(c, c, |_, _| rng.gen_bool(0.5));
    let (r, s, t) = (rel(), rel(), rel());
    let t = t.union(&r.meet(&s).expect("same shape")).expect("same shape");
    (r, s, t)
}

fn run_algebra(alg: &Algebra, config: &SuiteConfig, seed: u64) -> AlgebraReport {
    let budget = &config.budget;
    let mut errors = Vec::new();

    let clone = generate_ternary_clone(alg, budget.clone_size);
    let maltsev = find_maltsev_in(&clone, budget.clone_size);
    let three = find_3perm_in(&clone, budget.clone_size);
    let terms = TermsRecord {
        clone_size: clone.len(),
        clone_complete: clone.is_complete(),
        maltsev: search_record(&maltsev, TermsFile::maltsev),
        three_perm: search_record(&three, |(r, s)| TermsFile::three_perm(r, s)),
    };

    let cons = alg.all_congruences();
    let congruences = CongruenceRecord {
        count: cons.len(),
        classes: cons.iter().map(blocks).collect(),
        modular: modularity_failure(alg, &cons).is_none(),
        modularity_failure: modularity_failure(alg, &cons).map(|(a, b, c)| [a, b, c]),
    };

    let mut perm = Vec::new();
    for i in 0..cons.len() {
        for j in i + 1..cons.len() {
            match permutability(&cons[i], &cons[j]) {
                Ok(p) => perm.push(PermRecord {
                    r: i,
                    s: j,
                    kind: p.kind.to_string(),
                }),
                Err(e) => errors.push(format!("permutability {i},{j}: {e}")),
            }
        }
    }

    let shifting: Vec<SlRecord> = SL_LAYOUTS
        .iter()
        .map(|&l| sl_record(alg, l, budget, &mut errors))
        .collect();
    let difunctional = verdict_record(difunctional_all(alg, alg, budget), &mut errors, "difunctional");
    let goursat_identity = verdict_record(goursat_identity_all(alg, alg, budget), &mut errors, "goursat identity");
    let reflexive_equiv = verdict_record(reflexive_are_equivalences(alg, budget), &mut errors, "reflexive");
    let positive_equiv = verdict_record(positive_are_equivalences(alg, budget), &mut errors, "positive");

    let mut ee = Vec::new();
    let mut witnesses = Vec::new();
    let reflexive = enumerate_reflexive_compatible(alg, RelationClass::REFLEXIVE, budget);
    match &reflexive {
        Ok(list) => {
            for e in list {
                let op = e.opposite();
                let ee_op = compose(e, &op).expect("square");
                let op_e = compose(&op, e).expect("square");
                ee.push(EeRecord {
                    e: e.pairs().map(|(x, y)| [x, y]).collect(),
                    ee_op_is_equivalence: ee_op.is_equivalence().expect("square"),
                    ee_op_equals_op_e: ee_op == op_e,
                });
                if !e.is_symmetric().expect("square") {
                    match maltsev_sl_witness(alg, e) {
                        Ok(w) => witnesses.push(replayed(WitnessFile::from_maltsev(alg, e, &w))),
                        Err(err) => errors.push(format!("maltsev witness: {err}")),
                    }
                }
                if ee_op != op_e {
                    match goursat_sl_witness(alg, e) {
                        Ok(w) => witnesses.push(replayed(WitnessFile::from_goursat(alg, e, &w))),
                        Err(err) => errors.push(format!("goursat witness: {err}")),
                    }
                }
            }
        }
        Err(EnumError::Budget(b)) => errors.push(format!("reflexive relations: inconclusive, {b}")),
        Err(e) => errors.push(format!("reflexive relations: {e}")),
    }

    let (join_formula, supremum) = if three.is_found() {
        let mut join = CountRecord::default();
        for r in &cons {
            for s in &cons {
                join.checked += 1;
                let closure = r.union(s).expect("same shape").transitive_closure().expect("square");
                let rsr = join_via_rsr(r, s).expect("congruences");
                let srs = join_via_rsr(s, r).expect("congruences");
                if rsr != closure || srs != closure {
                    join.failures += 1;
                }
            }
        }
        let mut sup = CountRecord::default();
        if let Ok(list) = &reflexive {
            for s in list {
                let p = alg.as_paired_object(s).expect("reflexive compatible");
                for r in &cons {
                    for t in &cons {
                        let (mwm, wmw) = supremum_sides(r, t, &p).expect("congruences");
                        sup.checked += 1;
                        if mwm != wmw {
                            sup.failures += 1;
                        }
                    }
                }
            }
        }
        (Some(join), Some(sup))
    } else {
        (None, None)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut principle = CountRecord::default();
    for _ in 0..config.samples {
        let (r, s, t) = random_triple(&mut rng, alg);
        principle.checked += 1;
        if !shifting_principle_reduction(&r, &s, &t).expect("R ∧ S ≤ T by construction") {
            principle.failures += 1;
        }
    }

    let mut report = AlgebraReport {
        name: alg.name().to_string(),
        size: alg.size(),
        signature: alg
            .operations()
            .iter()
            .map(|o| SignatureEntry {
                name: o.name.clone(),
                arity: o.arity,
            })
            .collect(),
        terms,
        congruences,
        permutability: perm,
        shifting_lemma: shifting,
        difunctional,
        goursat_identity,
        reflexive_are_equivalences: reflexive_equiv,
        positive_are_equivalences: positive_equiv,
        ee,
        witnesses,
        join_formula,
        supremum,
        shifting_principle: principle,
        consistency: ConsistencyRecord::default(),
        errors,
    };
    report.consistency = consistency(&report);
    report
}

fn replayed(file: WitnessFile) -> WitnessRecord {
    let ok = file.instance().is_ok_and(|inst| {
        inst.meet_below_t().unwrap_or(false)
            && inst.check_premises().is_ok()
            && inst.conclusion_fails()
            && matches!(shifting_lemma(&inst.r, &inst.s, &inst.t), Ok(SlResult::Violated(_)))
    });
    WitnessRecord {
        replayed: ok,
        witness: file,
    }
}

/// Checks the implications from found terms to the relational conditions.
pub fn consistency(a: &AlgebraReport) -> ConsistencyRecord {
    let mut breaks = Vec::new();
    let sl = |name: &str| a.shifting_lemma.iter().find(|r| r.classes == name).map(|r| r.verdict);
    let maltsev = a.terms.maltsev.status == Status::Found;
    let three = a.terms.three_perm.status == Status::Found;
    if maltsev {
        if !three {
            breaks.push("maltsev term found but no 3-permutability pair".to_string());
        }
        for (what, v) in [
            ("difunctional", a.difunctional.verdict),
            ("reflexive_are_equivalences", a.reflexive_are_equivalences.verdict),
        ] {
            if v == Status::Fails {
                breaks.push(format!("maltsev term found but {what} fails"));
            }
        }
        for layout in ["refl,refl,refl", "refl,eq,refl", "eq,eq,eq"] {
            if sl(layout) == Some(Status::Violated) {
                breaks.push(format!("maltsev term found but shifting lemma {layout} violated"));
            }
        }
        if a.witnesses
            .iter()
            .any(|w| w.witness.kind == crate::format::WitnessKind::Maltsev)
        {
            breaks.push("maltsev term found but a non-symmetric reflexive relation exists".into());
        }
        if a.permutability
            .iter()
            .any(|p| p.kind != PermutabilityKind::TwoPermute.to_string())
        {
            breaks.push("maltsev term found but congruences fail to permute".into());
        }
    }
    if three {
        for (what, v) in [
            ("goursat_identity", a.goursat_identity.verdict),
            ("positive_are_equivalences", a.positive_are_equivalences.verdict),
        ] {
            if v == Status::Fails {
                breaks.push(format!("3-permutability pair found but {what} fails"));
            }
        }
        for layout in ["reflpos,refl,reflpos", "eq,refl,eq", "eq,eq,eq"] {
            if sl(layout) == Some(Status::Violated) {
                breaks.push(format!(
                    "3-permutability pair found but shifting lemma {layout} violated"
                ));
            }
        }
        if a.ee.iter().any(|e| !(e.ee_op_is_equivalence && e.ee_op_equals_op_e)) {
            breaks.push("3-permutability pair found but some EE° is not E°E".into());
        }
        if a.witnesses
            .iter()
            .any(|w| w.witness.kind == crate::format::WitnessKind::Goursat)
        {
            breaks.push("3-permutability pair found but a goursat witness exists".into());
        }
        if a.permutability
            .iter()
            .any(|p| p.kind == PermutabilityKind::Neither.to_string())
        {
            breaks.push("3-permutability pair found but congruences fail to 3-permute".into());
        }
        for (what, c) in [("join formula", &a.join_formula), ("supremum identity", &a.supremum)] {
            if c.as_ref().is_some_and(|c| c.failures > 0) {
                breaks.push(format!("3-permutability pair found but {what} fails"));
            }
        }
    }
    if a.shifting_principle.failures > 0 {
        breaks.push("shifting principle reduction falsified".into());
    }
    if a.witnesses.iter().any(|w| !w.replayed) {
        breaks.push("a witness does not replay".into());
    }
    ConsistencyRecord {
        maltsev_term: maltsev,
        three_perm_terms: three,
        modular: a.congruences.modular,
        eq_shifting_lemma: sl("eq,eq,eq"),
        breaks,
    }
}

pub fn report_to_json(report: &Report) -> String {
    crate::format::to_pretty(&serde_json::to_value(report).expect("reports serialize"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use relshift_core::corpus;

    #[test]
    fn bundled_files_match_builders() {
        let files = bundled_corpus().algebras;
        let built = corpus::bundled();
        assert_eq!(files.len(), built.len());
        for (f, b) in files.iter().zip(&built) {
            assert_eq!(f, b, "{}", b.name());
        }
    }

    #[test]
    fn z2_reflexive_enumeration() {
        let z2 = corpus::cyclic_group(2);
        let refl = enumerate_reflexive_compatible(&z2, RelationClass::REFLEXIVE, &Budget::default()).unwrap();
        assert_eq!(refl.len(), 2);
        let eq = enumerate_reflexive_compatible(&z2, RelationClass::EQUIVALENCE, &Budget::default()).unwrap();
        assert_eq!(eq, z2.all_congruences());
        let set = corpus::set2();
        assert_eq!(
            enumerate_reflexive_compatible(&set, RelationClass::REFLEXIVE, &Budget::default())
                .unwrap()
                .len(),
            4
        );
        let z5 = corpus::cyclic_group(5);
        assert!(enumerate_reflexive_compatible(&z5, RelationClass::REFLEXIVE, &Budget::default()).is_err());
    }
}
