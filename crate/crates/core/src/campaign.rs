//! Seeded randomized campaigns that check the derived-length theorems and
//! the two derivation-power lemmas on many instances.
//!
//! * `solvability`: `s(I + D(I)) <= 2 s(I)` over `Q` and over `GF(p)`,
//!   `p in {5, 7, 11}`, with `I` cut down to a derived term so that
//!   `s(I) < log2 p`.
//! * `degree`: `s(J_k) <= f_n(k)` over `Q` for `k <= 4`.
//! * `lemma2`: `D^m(I^(s)) ⊆ I` for `m <= 2^s - 1`, any field.
//! * `key`: `[D^h(I^(k-1)), D^h(I^(k-1))] ⊆ D^(2h)(I^(k)) + I` with
//!   `h = 2^(k-1)`, whenever `char F` does not divide `C(2h, h)`.
//!
//! Everything is a function of the seed, so two runs produce identical
//! summaries.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bounds::{admissible_depth, central_binomial_divisible, check_degree_theorem, check_solvability_theorem};
use crate::constructions::{catalog, random_ideal_and_derivation, random_solvable_instance};
use crate::derivation::{derivation_algebra, DerivationMap};
use crate::error::{Error, Result};
use crate::liealg::{IdealHandle, LieAlgebra};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::FieldSpec;

/// Dimension range of the random solvable instances.
pub const MAX_DIM: usize = 8;
/// Largest `k` in the degree campaign.
pub const DEGREE_K_MAX: usize = 4;
/// Largest derived index `s` probed by the lemma suites.
pub const LEMMA_DEPTH: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Solvability,
    Degree,
    Lemma2,
    Key,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Solvability => "solvability",
            Suite::Degree => "degree",
            Suite::Lemma2 => "lemma2",
            Suite::Key => "key",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solvability" => Ok(Suite::Solvability),
            "degree" => Ok(Suite::Degree),
            "lemma2" => Ok(Suite::Lemma2),
            "key" => Ok(Suite::Key),
            _ => Err(Error::InvalidParameter(format!(
                "unknown suite `{s}` (expected solvability, degree, lemma2 or key)"
            ))),
        }
    }
}

/// One inequality or inclusion checked on an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    /// What was checked, e.g. `k=2` or `s=2 m<=3`.
    pub label: String,
    pub hypotheses_met: bool,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub seed: u64,
    pub algebra: String,
    pub field: FieldSpec,
    pub dim: usize,
    pub ideal_dim: usize,
    pub ideal_length: Option<usize>,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignSummary {
    pub suite: Suite,
    pub seed: u64,
    pub instances: usize,
    pub checks: usize,
    pub hypotheses_met: usize,
    /// Checks whose hypotheses hold but whose conclusion fails.
    pub violations: usize,
    /// Checks outside the hypotheses whose conclusion fails anyway.
    pub failures_outside_hypotheses: usize,
    /// Instance counts per field.
    pub fields: BTreeMap<String, usize>,
    /// SHA-256 of the serialized instance records.
    pub digest: String,
    pub records: Vec<InstanceRecord>,
}

impl CampaignSummary {
    fn new(suite: Suite, seed: u64, records: Vec<InstanceRecord>) -> Self {
        let all = || records.iter().flat_map(|r| &r.checks);
        let mut fields = BTreeMap::new();
        for r in &records {
            *fields.entry(r.field.to_string()).or_insert(0) += 1;
        }
        let digest = hex::encode(Sha256::digest(serde_json::to_vec(&records).expect("records serialize")));
        CampaignSummary {
            suite,
            seed,
            instances: records.len(),
            checks: all().count(),
            hypotheses_met: all().filter(|c| c.hypotheses_met).count(),
            violations: all().filter(|c| c.hypotheses_met && !c.holds).count(),
            failures_outside_hypotheses: all().filter(|c| !c.hypotheses_met && !c.holds).count(),
            fields,
            digest,
            records,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// Records containing a violation.
    pub fn violating_records(&self) -> impl Iterator<Item = &InstanceRecord> {
        self.records
            .iter()
            .filter(|r| r.checks.iter().any(|c| c.hypotheses_met && !c.holds))
    }
}

/// Runs `suite`. For `solvability`, `count` instances are drawn over `Q`
/// and another `count` over `GF(p)`; the other suites draw `count` in
/// total.
pub fn run(suite: Suite, seed: u64, count: usize) -> Result<CampaignSummary> {
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = CatalogPool::default();
    let mut records = Vec::new();
    match suite {
        Suite::Solvability => {
            for index in 0..2 * count {
                let field = if index < count {
                    FieldSpec::RATIONALS
                } else {
                    FieldSpec::prime([5, 7, 11][index % 3])?
                };
                records.push(solvability_instance(index, seeds.next_u64(), field)?);
            }
        }
        Suite::Degree => {
            for index in 0..count {
                records.push(degree_instance(index, seeds.next_u64())?);
            }
        }
        Suite::Lemma2 | Suite::Key => {
            for index in 0..count {
                let instance_seed = seeds.next_u64();
                let (algebra, ideal, derivation) = pool.lemma_instance(index, instance_seed)?;
                let checks = if suite == Suite::Lemma2 {
                    lemma2_checks(&ideal, &derivation)?
                } else {
                    key_checks(&ideal, &derivation)?
                };
                records.push(record(index, instance_seed, &algebra, &ideal, checks));
            }
        }
    }
    Ok(CampaignSummary::new(suite, seed, records))
}

fn record(
    index: usize,
    seed: u64,
    algebra: &LieAlgebra,
    ideal: &IdealHandle,
    checks: Vec<CheckOutcome>,
) -> InstanceRecord {
    InstanceRecord {
        index,
        seed,
        algebra: algebra.label().to_string(),
        field: algebra.field(),
        dim: algebra.dim(),
        ideal_dim: ideal.dim(),
        ideal_length: ideal.derived_length(),
        checks,
    }
}

fn solvability_instance(index: usize, seed: u64, field: FieldSpec) -> Result<InstanceRecord> {
    let instance = random_solvable_instance(seed, 1..=MAX_DIM, field)?;
    let mut ideal = instance.ideal.clone();
    if let Some(p) = field.modulus() {
        // Cut I down to I^(n - d), of derived length d, so that d < log2 p.
        let n = ideal.derived_length().unwrap_or(0);
        let depth = admissible_depth(p)? as usize;
        if n > depth {
            ideal = ideal.derived_term(n - depth);
        }
    }
    let report = check_solvability_theorem(&ideal, &instance.derivation)?;
    let check = CheckOutcome {
        label: "k=1".into(),
        hypotheses_met: report.hypotheses_met,
        holds: report.holds,
        observed: report.observed,
        bound: Some(report.bound),
    };
    Ok(record(index, seed, &instance.algebra, &ideal, vec![check]))
}

fn degree_instance(index: usize, seed: u64) -> Result<InstanceRecord> {
    let instance = random_solvable_instance(seed, 1..=MAX_DIM, FieldSpec::RATIONALS)?;
    let checks = check_degree_theorem(&instance.ideal, &instance.derivation, DEGREE_K_MAX)?
        .into_iter()
        .map(|r| CheckOutcome {
            label: format!("k={}", r.context.k),
            hypotheses_met: r.hypotheses_met,
            holds: r.holds,
            observed: r.observed,
            bound: Some(r.bound),
        })
        .collect();
    Ok(record(index, seed, &instance.algebra, &instance.ideal, checks))
}

/// Non-solvable algebras mixed into the lemma suites, which need neither
/// solvability nor characteristic 0.
const LEMMA_CATALOG: &[(&str, Option<u64>)] = &[
    ("jacobson:3", Some(3)),
    ("sl2+borel:2", None),
    ("sl2+heisenberg", Some(5)),
    ("jacobson:5", Some(5)),
    ("sl2+affine", Some(7)),
];

/// Fields for random solvable instances in the lemma suites.
const LEMMA_FIELDS: &[Option<u64>] = &[None, Some(3), Some(5), Some(7)];

/// Catalog algebras with their derivation bases, built on first use.
#[derive(Default)]
struct CatalogPool {
    entries: BTreeMap<usize, (Arc<LieAlgebra>, Vec<Matrix>)>,
}

fn field_of(p: Option<u64>) -> Result<FieldSpec> {
    p.map_or(Ok(FieldSpec::RATIONALS), FieldSpec::prime)
}

impl CatalogPool {
    /// Every fifth instance comes from the catalog; the rest are random
    /// solvable instances over `Q`, `GF(3)`, `GF(5)` or `GF(7)`.
    fn lemma_instance(&mut self, index: usize, seed: u64) -> Result<(Arc<LieAlgebra>, IdealHandle, DerivationMap)> {
        if index % 5 == 4 {
            let slot = (index / 5) % LEMMA_CATALOG.len();
            let (algebra, basis) = match self.entries.entry(slot) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => {
                    let (name, p) = LEMMA_CATALOG[slot];
                    let algebra = Arc::new(catalog(name, field_of(p)?)?.with_label(name));
                    let basis = derivation_algebra(&algebra);
                    e.insert((algebra, basis))
                }
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (ideal, derivation) = random_ideal_and_derivation(&mut rng, algebra, basis)?;
            Ok((algebra.clone(), ideal, derivation))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let field = field_of(LEMMA_FIELDS[rng.random_range(0..LEMMA_FIELDS.len())])?;
            let instance = random_solvable_instance(rng.next_u64(), 1..=MAX_DIM, field)?;
            Ok((instance.algebra, instance.ideal, instance.derivation))
        }
    }
}

/// `D^m(I^(s)) ⊆ I` for `1 <= s <= LEMMA_DEPTH` and `m <= 2^s - 1`.
pub fn lemma2_checks(ideal: &IdealHandle, derivation: &DerivationMap) -> Result<Vec<CheckOutcome>> {
    let series = ideal.derived_series();
    let mut checks = Vec::new();
    for s in 1..=LEMMA_DEPTH {
        let term = series
            .get(s)
            .unwrap_or_else(|| series.last().expect("series is nonempty"));
        let m_max = (1usize << s) - 1;
        let mut image = term.space().clone();
        let mut holds = true;
        for m in 0..=m_max {
            if m > 0 {
                image = image.image(derivation.matrix())?;
            }
            if !image.is_subspace_of(ideal.space())? {
                holds = false;
                break;
            }
        }
        checks.push(CheckOutcome {
            label: format!("s={s} m<={m_max}"),
            hypotheses_met: true,
            holds,
            observed: None,
            bound: None,
        });
    }
    Ok(checks)
}

/// `[D^h(I^(k-1)), D^h(I^(k-1))] ⊆ D^(2h)(I^(k)) + I` with `h = 2^(k-1)`,
/// for `1 <= k <= LEMMA_DEPTH`. The hypothesis is that `char F` does not
/// divide `C(2h, h)`.
pub fn key_checks(ideal: &IdealHandle, derivation: &DerivationMap) -> Result<Vec<CheckOutcome>> {
    let algebra = ideal.algebra();
    let series = ideal.derived_series();
    let term = |s: usize| {
        series
            .get(s)
            .unwrap_or_else(|| series.last().expect("series is nonempty"))
    };
    let p = algebra.field().characteristic();
    let mut checks = Vec::new();
    for k in 1..=LEMMA_DEPTH {
        let h = 1usize << (k - 1);
        let lhs_factor = derivation.power_image(term(k - 1).space(), h)?;
        let lhs = algebra.bracket_spaces(&lhs_factor, &lhs_factor)?;
        let rhs: Subspace = derivation.power_image(term(k).space(), 2 * h)?.sum(ideal.space())?;
        let hypotheses_met = p == 0 || !central_binomial_divisible(p, k as u32)?;
        checks.push(CheckOutcome {
            label: format!("k={k}"),
            hypotheses_met,
            holds: lhs.is_subspace_of(&rhs)?,
            observed: None,
            bound: None,
        });
    }
    Ok(checks)
}
