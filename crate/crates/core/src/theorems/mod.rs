//! Verifiers that confront the bounds and their equality cases with exact,
//! desk-scale evidence. Every verifier returns a [`TheoremReport`].

mod pipeline;
mod probe;
mod scan;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub use pipeline::{
    run_generalized_pipeline, sample_trivial_spectrum_instance, Branch, CompressedStep, DualChecks,
    PipelineNode, ReducibleStep, SemiPrimitiveStep,
};
pub use probe::{probe_with, random_probe, ProbeConfig, ProbeKind, ProbeSummary, Predicates, Violation};
pub use scan::{exhaustive_scan, ScanPredicate, ScanSummary, SCAN_CEILING};

use crate::constructions::{binomial2, wedge_space};
use crate::error::{MswError, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::primitivity::{classify, PrimitivityReport};
use crate::recognition::{
    equivalence_probe, solve_alternating_congruence, strict_triangularization, CongruenceSolution,
    EquivalenceVerdict, Search, Triangularization,
};
use crate::space::MatrixSpace;
use crate::spectral::{is_irreducible, is_nilpotent_space, is_trivial_spectrum, Decision, EigenWitness};
use crate::subspace::VectorSubspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Violated,
    NotApplicable,
    Inconclusive,
}

impl Verdict {
    /// A failed claim only counts as a violation when the hypotheses hold.
    pub fn settle(ok: bool, applicable: bool) -> Self {
        match (ok, applicable) {
            (true, _) => Verdict::Verified,
            (false, true) => Verdict::Violated,
            (false, false) => Verdict::NotApplicable,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport<D> {
    pub statement: &'static str,
    pub field: FieldSpec,
    pub params: BTreeMap<String, Value>,
    /// Hypotheses of the statement and whether this instance meets them.
    pub applicability: BTreeMap<String, bool>,
    pub verdict: Verdict,
    pub witnesses: BTreeMap<String, Value>,
    pub counters: BTreeMap<String, u64>,
    pub warnings: Vec<String>,
    pub details: D,
}

/// Accumulates the loose parts of a report before the verdict is known.
#[derive(Debug)]
pub(crate) struct Draft {
    statement: &'static str,
    field: FieldSpec,
    params: BTreeMap<String, Value>,
    applicability: BTreeMap<String, bool>,
    witnesses: BTreeMap<String, Value>,
    counters: BTreeMap<String, u64>,
    warnings: Vec<String>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

impl Draft {
    pub(crate) fn new(statement: &'static str, field: FieldSpec) -> Self {
        Self {
            statement,
            field,
            params: BTreeMap::new(),
            applicability: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            counters: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub(crate) fn param<T: Serialize>(&mut self, key: &str, v: T) -> &mut Self {
        self.params.insert(key.into(), to_value(&v));
        self
    }

    pub(crate) fn flag(&mut self, key: &str, holds: bool, warning: &str) -> bool {
        self.applicability.insert(key.into(), holds);
        if !holds {
            self.warnings.push(warning.into());
        }
        holds
    }

    pub(crate) fn witness<T: Serialize>(&mut self, key: &str, v: &T) -> &mut Self {
        self.witnesses.insert(key.into(), to_value(v));
        self
    }

    pub(crate) fn count(&mut self, key: &str, n: u64) -> &mut Self {
        self.counters.insert(key.into(), n);
        self
    }

    pub(crate) fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    pub(crate) fn finish<D>(self, verdict: Verdict, details: D) -> TheoremReport<D> {
        TheoremReport {
            statement: self.statement,
            field: self.field,
            params: self.params,
            applicability: self.applicability,
            verdict,
            witnesses: self.witnesses,
            counters: self.counters,
            warnings: self.warnings,
            details,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GerstenhaberDetails {
    pub n: usize,
    pub dim: usize,
    pub bound: usize,
    pub trivial_spectrum: Decision<EigenWitness>,
    pub nilpotent: Decision<Matrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<Decision<VectorSubspace>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triangularization: Option<Triangularization>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub congruence: Option<CongruenceSolution>,
}

/// `dim V <= n(n-1)/2` for trivial-spectrum `V`, and the shape of the equality case:
/// strictly upper-triangular up to similarity when `V` is nilpotent, `P * Alt_n`
/// when `V` is irreducible and the field has at least 3 elements.
pub fn verify_gerstenhaber_bound(v: &MatrixSpace, cap: u64) -> Result<TheoremReport<GerstenhaberDetails>> {
    let n = v.require_square()?;
    let f = v.field();
    let mut draft = Draft::new("gerstenhaber_bound", f);
    draft.param("n", n).param("dim", v.dim());
    let trivial_spectrum = is_trivial_spectrum(v, cap)?;
    let nilpotent = is_nilpotent_space(v, cap)?;
    let bound = binomial2(n);
    let mut details = GerstenhaberDetails {
        n,
        dim: v.dim(),
        bound,
        trivial_spectrum,
        nilpotent,
        irreducible: None,
        triangularization: None,
        congruence: None,
    };
    if !details.trivial_spectrum.holds {
        draft.flag("trivial_spectrum", false, "space does not have a trivial spectrum; no bound is claimed");
        draft.witness("eigenvalue", &details.trivial_spectrum.witness);
        return Ok(draft.finish(Verdict::NotApplicable, details));
    }
    draft.flag("trivial_spectrum", true, "");
    if v.dim() > bound {
        draft.witness("space", v);
        return Ok(draft.finish(Verdict::Violated, details));
    }
    if v.dim() < bound {
        return Ok(draft.finish(Verdict::Verified, details));
    }
    draft.count("equality", 1);
    let mut verdict = Verdict::Verified;
    if details.nilpotent.holds {
        let t = strict_triangularization(v)?;
        let ok = t.as_ref().is_some_and(|t| t.full);
        if let Some(t) = &t {
            draft.witness("triangularizing_basis", &t.p);
        } else {
            draft.witness("space", v);
        }
        details.triangularization = t;
        verdict = Verdict::settle(ok, true);
    }
    let irreducible = is_irreducible(v)?;
    let applicable = draft.flag(
        "field_at_least_3",
        f.p() >= 3,
        "equality classification assumes at least 3 field elements",
    ) && draft.flag("irreducible", irreducible.holds, "space is reducible; equality classification not claimed");
    details.irreducible = Some(irreducible);
    if details.irreducible.as_ref().is_some_and(|d| d.holds) {
        let sol = solve_alternating_congruence(v)?;
        let part = match &sol.result {
            Search::Found(p) => {
                draft.witness("alternating_congruence", p);
                Verdict::Verified
            }
            Search::Absent => {
                draft.witness("space", v);
                Verdict::settle(false, applicable)
            }
            Search::Inconclusive => Verdict::Inconclusive,
        };
        details.congruence = Some(sol);
        verdict = worst(verdict, part);
    }
    Ok(draft.finish(verdict, details))
}

/// The more severe of two verdicts.
pub fn worst(a: Verdict, b: Verdict) -> Verdict {
    let rank = |v: Verdict| match v {
        Verdict::Verified => 0,
        Verdict::NotApplicable => 1,
        Verdict::Inconclusive => 2,
        Verdict::Violated => 3,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtkinsonDetails {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub bound: usize,
    pub classification: PrimitivityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivalence: Option<EquivalenceVerdict>,
}

pub const NOTE_SINGLE_ROW_EXTREMAL: &str =
    "m = 1, n = 2: the bound and its equality clause still hold with r = 1";

/// `m <= r(r+1)/2` for a semi-primitive `S` in `Mat_{m,n}` with upper rank `r`; at
/// equality with `r > 1`, `n = r + 1` and `S` is equivalent to the wedge space.
pub fn verify_atkinson_on_instance(s: &MatrixSpace, cap: u64, budget: u64, seed: u64) -> Result<TheoremReport<AtkinsonDetails>> {
    let f = s.field();
    let classification = classify(s, cap)?;
    if !classification.semi_primitive {
        return Err(MswError::PreconditionViolated("space is not semi-primitive".into()));
    }
    let (m, n) = s.shape();
    let r = classification.urk;
    let bound = r * (r + 1) / 2;
    let mut draft = Draft::new("atkinson_bound", f);
    draft.param("m", m).param("n", n).param("r", r).param("budget", budget).param("seed", seed);
    let applicable = draft.flag(
        "field_larger_than_urk",
        f.p() as usize > r,
        "field has at most r elements; the bound is only observed empirically",
    );
    let mut details = AtkinsonDetails {
        m,
        n,
        r,
        bound,
        classification,
        equivalence: None,
    };
    if m > bound {
        draft.witness("space", s);
        return Ok(draft.finish(Verdict::settle(false, applicable), details));
    }
    if m < bound {
        return Ok(draft.finish(Verdict::Verified, details));
    }
    draft.count("equality", 1);
    if r == 1 {
        if n == 2 {
            draft.warn(NOTE_SINGLE_ROW_EXTREMAL);
        }
        return Ok(draft.finish(Verdict::Verified, details));
    }
    if n != r + 1 {
        draft.witness("space", s);
        return Ok(draft.finish(Verdict::settle(false, applicable), details));
    }
    let wedge = wedge_space(f, n)?;
    let eq = equivalence_probe(&wedge, s, budget, seed, cap)?;
    let verdict = match &eq {
        EquivalenceVerdict::Equivalent { p, q, pairs_examined } => {
            draft.witness("p", p).witness("q", q).count("pairs_examined", *pairs_examined);
            Verdict::Verified
        }
        EquivalenceVerdict::Distinct { pairs_examined, .. } => {
            draft.witness("space", s).count("pairs_examined", *pairs_examined);
            Verdict::settle(false, applicable)
        }
        EquivalenceVerdict::Inconclusive { pairs_examined } => {
            draft.count("pairs_examined", *pairs_examined);
            Verdict::Inconclusive
        }
    };
    details.equivalence = Some(eq);
    Ok(draft.finish(verdict, details))
}
