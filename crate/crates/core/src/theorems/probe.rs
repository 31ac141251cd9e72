//! Seeded random probes of the implication suite and the structural invariants.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::pipeline::{run_generalized_pipeline, sample_trivial_spectrum_instance};
use super::{Draft, TheoremReport, Verdict};
use crate::constructions::{
    random_invertible, random_space, random_subspace, scaled_alternating_space, seeded_rng,
    strict_upper_triangular_space,
};
use crate::duality::dual_space;
use crate::error::{MswError, Result};
use crate::field::FieldSpec;
use crate::grassmann::{gaussian_binomial, Grassmannian};
use crate::primitivity::{classify, condition_i, condition_ii};
use crate::space::MatrixSpace;
use crate::spectral::{is_nilpotent_space, is_totally_intransitive, is_trivial_spectrum};
use crate::subspace::all_vectors;

/// Random spaces are kept to at most this many elements.
const SAMPLE_ELEMENTS: u128 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    /// nilpotent implies trivial spectrum implies totally intransitive
    Implications,
    /// conditions (i)-(iv), upper rank and rank profile under `S -> P S Q`
    EquivalenceInvariance,
    /// rank and reducedness relations between a space and its dual
    Dual,
    /// Grassmannian stream length against the Gaussian binomial
    Grassmannian,
    /// the decision tree on random trivial-spectrum spaces
    Pipeline,
    All,
}

impl FromStr for ProbeKind {
    type Err = MswError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "implications" => Self::Implications,
            "equivalence-invariance" => Self::EquivalenceInvariance,
            "dual" => Self::Dual,
            "grassmannian" => Self::Grassmannian,
            "pipeline" => Self::Pipeline,
            "all" => Self::All,
            other => return Err(MswError::InvalidArgument(format!("unknown probe spec {other:?}"))),
        })
    }
}

impl ProbeKind {
    fn parts(self) -> Vec<ProbeKind> {
        match self {
            ProbeKind::All => vec![
                ProbeKind::Implications,
                ProbeKind::EquivalenceInvariance,
                ProbeKind::Dual,
                ProbeKind::Grassmannian,
                ProbeKind::Pipeline,
            ],
            k => vec![k],
        }
    }

    fn name(self) -> &'static str {
        match self {
            ProbeKind::Implications => "implications",
            ProbeKind::EquivalenceInvariance => "equivalence-invariance",
            ProbeKind::Dual => "dual",
            ProbeKind::Grassmannian => "grassmannian",
            ProbeKind::Pipeline => "pipeline",
            ProbeKind::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeConfig {
    pub kind: ProbeKind,
    pub seed: u64,
    pub trials: u64,
    pub sizes: Vec<usize>,
    pub primes: Vec<u64>,
    pub cap: u64,
}

impl ProbeConfig {
    pub fn new(kind: ProbeKind, seed: u64, trials: u64) -> Self {
        Self {
            kind,
            seed,
            trials,
            sizes: vec![1, 2, 3, 4],
            primes: vec![2, 3, 5],
            cap: crate::space::DEFAULT_CAP,
        }
    }
}

/// The predicates the implication suite relies on; replaceable to test the harness itself.
#[derive(Clone, Copy)]
pub struct Predicates {
    pub nilpotent: fn(&MatrixSpace, u64) -> Result<bool>,
    pub trivial_spectrum: fn(&MatrixSpace, u64) -> Result<bool>,
    pub totally_intransitive: fn(&MatrixSpace) -> Result<bool>,
}

impl Default for Predicates {
    fn default() -> Self {
        Self {
            nilpotent: |s, cap| Ok(is_nilpotent_space(s, cap)?.holds),
            trivial_spectrum: |s, cap| Ok(is_trivial_spectrum(s, cap)?.holds),
            totally_intransitive: |s| Ok(is_totally_intransitive(s)?.holds),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub trial: u64,
    /// Rerunning with this seed and one trial reproduces the violation.
    pub trial_seed: u64,
    pub check: &'static str,
    pub description: String,
    pub space: MatrixSpace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeSummary {
    pub config: ProbeConfig,
    /// Number of times each check had a non-vacuous premise.
    pub exercised: BTreeMap<&'static str, u64>,
    pub first_violation: Option<Violation>,
}

pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed.wrapping_add(trial.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn max_dim(f: FieldSpec, ambient: usize) -> usize {
    let mut d = 0;
    while d < ambient && f.power_count(d + 1) <= SAMPLE_ELEMENTS {
        d += 1;
    }
    d
}

/// Nilpotent, alternating-scaled or uniform subspace of `Mat_n`.
fn sample_square<R: Rng>(f: FieldSpec, n: usize, rng: &mut R) -> Result<MatrixSpace> {
    let q = random_invertible(f, n, rng);
    let ambient = match rng.gen_range(0..3) {
        0 => strict_upper_triangular_space(f, n).transform_similar(&q)?,
        1 => scaled_alternating_space(&q)?,
        _ => MatrixSpace::full(f, n, n),
    };
    let top = max_dim(f, ambient.dim());
    random_subspace(&ambient, rng.gen_range(0..=top), rng)
}

type Outcome = std::result::Result<(), (&'static str, String, MatrixSpace)>;

fn fail(check: &'static str, description: impl Into<String>, space: &MatrixSpace) -> Outcome {
    Err((check, description.into(), space.clone()))
}

fn check_implications(
    f: FieldSpec,
    n: usize,
    rng: &mut impl Rng,
    preds: &Predicates,
    cap: u64,
    seen: &mut BTreeMap<&'static str, u64>,
) -> Result<Outcome> {
    let v = sample_square(f, n, rng)?;
    let nil = (preds.nilpotent)(&v, cap)?;
    let ts = (preds.trivial_spectrum)(&v, cap)?;
    let ti = (preds.totally_intransitive)(&v)?;
    if nil {
        *seen.entry("nilpotent_implies_trivial_spectrum").or_default() += 1;
        if !ts {
            return Ok(fail("nilpotent_implies_trivial_spectrum", "nilpotent space has a nonzero eigenvalue", &v));
        }
    }
    if ts {
        *seen.entry("trivial_spectrum_implies_totally_intransitive").or_default() += 1;
        if !ti {
            return Ok(fail(
                "trivial_spectrum_implies_totally_intransitive",
                "trivial-spectrum space has V X = K^n for some X",
                &v,
            ));
        }
    }
    Ok(Ok(()))
}

fn check_equivalence(
    f: FieldSpec,
    n: usize,
    rng: &mut impl Rng,
    cap: u64,
    seen: &mut BTreeMap<&'static str, u64>,
) -> Result<Outcome> {
    let m = rng.gen_range(1..=n);
    let s = random_space(f, m, n, rng.gen_range(0..=max_dim(f, m * n)), rng)?;
    let p = random_invertible(f, m, rng);
    let q = random_invertible(f, n, rng);
    let t = s.transform_equivalent(&p, &q)?;
    let (a, b) = (classify(&s, cap)?, classify(&t, cap)?);
    *seen.entry("equivalence_invariance").or_default() += 1;
    let pairs = [
        ("condition_i", a.condition_i.holds, b.condition_i.holds),
        ("condition_ii", a.condition_ii.holds, b.condition_ii.holds),
        ("condition_iii", a.condition_iii.holds, b.condition_iii.holds),
        ("condition_iv", a.condition_iv.holds, b.condition_iv.holds),
    ];
    for (name, x, y) in pairs {
        if x != y {
            return Ok(fail("equivalence_invariance", format!("{name} changes under P S Q"), &s));
        }
    }
    if a.urk != b.urk || a.dim != b.dim || s.rank_profile(cap)? != t.rank_profile(cap)? {
        return Ok(fail("equivalence_invariance", "rank data changes under P S Q", &s));
    }
    Ok(Ok(()))
}

fn check_dual(
    f: FieldSpec,
    n: usize,
    rng: &mut impl Rng,
    cap: u64,
    seen: &mut BTreeMap<&'static str, u64>,
) -> Result<Outcome> {
    let v = sample_square(f, n, rng)?;
    if v.dim() == 0 {
        return Ok(Ok(()));
    }
    let p = random_invertible(f, n, rng);
    let dual = dual_space(&v, Some(&p))?;
    *seen.entry("dual_invariants").or_default() += 1;
    for x in all_vectors(f, n) {
        if dual.matrix_at(&x).rank() != v.image_of_vector(&x).dim() {
            return Ok(fail("dual_invariants", format!("rank M(X) != dim V X at X = {x:?}"), &v));
        }
    }
    if !condition_ii(&dual.space).holds {
        return Ok(fail("dual_invariants", "dual space fails condition (ii)", &v));
    }
    if condition_i(&dual.space).holds != (v.common_left_kernel().dim() == 0) {
        return Ok(fail("dual_invariants", "dual condition (i) disagrees with the common left kernel", &v));
    }
    if is_trivial_spectrum(&v, cap)?.holds {
        *seen.entry("dual_urk_below_n").or_default() += 1;
        if dual.space.upper_rank(cap)?.0 >= n {
            return Ok(fail("dual_urk_below_n", "trivial-spectrum space has a dual of full upper rank", &v));
        }
    }
    Ok(Ok(()))
}

fn check_grassmannian(f: FieldSpec, rng: &mut impl Rng, seen: &mut BTreeMap<&'static str, u64>) -> Result<Outcome> {
    // small ambient so the full stream stays cheap
    let ambient = loop {
        let a = rng.gen_range(1..=6usize);
        if gaussian_binomial(a, a / 2, f.p() as u64) <= 2000 {
            break a;
        }
    };
    let d = rng.gen_range(0..=ambient);
    let g = Grassmannian::new(f, ambient, d)?;
    *seen.entry("grassmannian_count").or_default() += 1;
    let count = g.iter().count() as u128;
    if count != gaussian_binomial(ambient, d, f.p() as u64) || count != g.len() {
        let s = MatrixSpace::zero(f, 1, ambient);
        return Ok(fail(
            "grassmannian_count",
            format!("{count} subspaces of dimension {d} in GF({})^{ambient}", f.p()),
            &s,
        ));
    }
    Ok(Ok(()))
}

fn check_pipeline(
    f: FieldSpec,
    n: usize,
    rng: &mut impl Rng,
    cap: u64,
    seen: &mut BTreeMap<&'static str, u64>,
) -> Result<Outcome> {
    let v = sample_trivial_spectrum_instance(f, n, rng, cap)?;
    *seen.entry("pipeline").or_default() += 1;
    let r = run_generalized_pipeline(&v, cap)?;
    if r.verdict == Verdict::Violated {
        return Ok(fail("pipeline", "a step of the decision tree failed", &v));
    }
    Ok(Ok(()))
}

struct TrialResult {
    seen: BTreeMap<&'static str, u64>,
    violation: Option<Violation>,
}

fn run_trial(config: &ProbeConfig, preds: &Predicates, trial: u64) -> Result<TrialResult> {
    let seed = trial_seed(config.seed, trial);
    let mut rng = seeded_rng(seed);
    let n = config.sizes[rng.gen_range(0..config.sizes.len())];
    let f = FieldSpec::new(config.primes[rng.gen_range(0..config.primes.len())])?;
    let mut seen = BTreeMap::new();
    for kind in config.kind.parts() {
        let outcome = match kind {
            ProbeKind::Implications => check_implications(f, n, &mut rng, preds, config.cap, &mut seen)?,
            ProbeKind::EquivalenceInvariance => check_equivalence(f, n, &mut rng, config.cap, &mut seen)?,
            ProbeKind::Dual => check_dual(f, n, &mut rng, config.cap, &mut seen)?,
            ProbeKind::Grassmannian => check_grassmannian(f, &mut rng, &mut seen)?,
            ProbeKind::Pipeline => check_pipeline(f, n, &mut rng, config.cap, &mut seen)?,
            ProbeKind::All => unreachable!("expanded by parts"),
        };
        if let Err((check, description, space)) = outcome {
            return Ok(TrialResult {
                seen,
                violation: Some(Violation {
                    trial,
                    trial_seed: seed,
                    check,
                    description,
                    space,
                }),
            });
        }
    }
    Ok(TrialResult { seen, violation: None })
}

pub fn random_probe(config: &ProbeConfig) -> Result<TheoremReport<ProbeSummary>> {
    probe_with(config, &Predicates::default())
}

/// Run `config.trials` independent trials; trial `t` draws everything from
/// `trial_seed(seed, t)`, so results do not depend on scheduling.
pub fn probe_with(config: &ProbeConfig, preds: &Predicates) -> Result<TheoremReport<ProbeSummary>> {
    if config.sizes.is_empty() || config.primes.is_empty() || config.sizes.contains(&0) {
        return Err(MswError::InvalidArgument("probe needs positive sizes and at least one prime".into()));
    }
    for &p in &config.primes {
        FieldSpec::new(p)?;
    }
    let results: Vec<TrialResult> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, preds, t))
        .collect::<Result<_>>()?;
    let mut exercised: BTreeMap<&'static str, u64> = BTreeMap::new();
    let mut first_violation = None;
    let mut violations = 0u64;
    for r in results {
        for (k, v) in r.seen {
            *exercised.entry(k).or_default() += v;
        }
        if let Some(v) = r.violation {
            violations += 1;
            first_violation.get_or_insert(v);
        }
    }
    let field = FieldSpec::new(config.primes[0])?;
    let mut draft = Draft::new("random_probe", field);
    draft
        .param("spec", config.kind.name())
        .param("seed", config.seed)
        .param("trials", config.trials)
        .param("sizes", &config.sizes)
        .param("primes", &config.primes);
    draft.count("trials", config.trials).count("violations", violations);
    if let Some(v) = &first_violation {
        draft.witness("violation", v);
    }
    let verdict = Verdict::settle(first_violation.is_none(), true);
    Ok(draft.finish(
        verdict,
        ProbeSummary {
            config: config.clone(),
            exercised,
            first_violation,
        },
    ))
}
