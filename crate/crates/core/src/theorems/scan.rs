//! Exhaustive scans over all `d`-dimensional subspaces of `Mat_n(GF(p))`.

use std::ops::Range;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{Draft, TheoremReport, Verdict};
use crate::constructions::binomial2;
use crate::error::{MswError, Result};
use crate::field::FieldSpec;
use crate::grassmann::MatrixGrassmannian;
use crate::recognition::strict_triangularization;
use crate::space::MatrixSpace;

/// Upper limit on the number of spaces a single scan may visit.
pub const SCAN_CEILING: u128 = 20_000_000;

const CHUNK: u128 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanPredicate {
    TrivialSpectrum,
    Nilpotent,
}

impl FromStr for ScanPredicate {
    type Err = MswError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial-spectrum" => Ok(Self::TrivialSpectrum),
            "nilpotent" => Ok(Self::Nilpotent),
            other => Err(MswError::InvalidArgument(format!("unknown predicate {other:?}"))),
        }
    }
}

impl ScanPredicate {
    /// Early exit on the first offending normalized element.
    fn holds(self, space: &MatrixSpace, cap: u64) -> Result<bool> {
        let offender = match self {
            ScanPredicate::TrivialSpectrum => {
                space.find_normalized(cap, |m| m.first_nonzero_eigenvalue().is_some())?
            }
            ScanPredicate::Nilpotent => {
                space.find_normalized(cap, |m| !m.is_nilpotent().expect("square"))?
            }
        };
        Ok(offender.is_none())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub n: usize,
    pub dim: usize,
    pub predicate: ScanPredicate,
    pub total_spaces: u128,
    pub range: Range<u128>,
    pub scanned: u128,
    pub hits: u128,
    /// Least index (in Grassmannian order) of a space satisfying the predicate.
    pub first_hit: Option<u128>,
    /// Nilpotent hits whose kernel chain gives a strictly upper-triangular form.
    pub triangularized_hits: u128,
    pub bound: usize,
}

#[derive(Default)]
struct Tally {
    scanned: u128,
    hits: u128,
    first_hit: Option<u128>,
    triangularized: u128,
    first_untriangularized: Option<u128>,
}

fn min_opt(a: Option<u128>, b: Option<u128>) -> Option<u128> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            scanned: self.scanned + o.scanned,
            hits: self.hits + o.hits,
            first_hit: min_opt(self.first_hit, o.first_hit),
            triangularized: self.triangularized + o.triangularized,
            first_untriangularized: min_opt(self.first_untriangularized, o.first_untriangularized),
        }
    }
}

fn scan_chunk(g: &MatrixGrassmannian, range: Range<u128>, predicate: ScanPredicate, cap: u64) -> Result<Tally> {
    let mut t = Tally::default();
    for (offset, space) in g.iter_range(range.start, range.end).enumerate() {
        let index = range.start + offset as u128;
        t.scanned += 1;
        if !predicate.holds(&space, cap)? {
            continue;
        }
        t.hits += 1;
        t.first_hit.get_or_insert(index);
        if predicate == ScanPredicate::Nilpotent {
            if strict_triangularization(&space)?.is_some() {
                t.triangularized += 1;
            } else {
                t.first_untriangularized.get_or_insert(index);
            }
        }
    }
    Ok(t)
}

/// Visit every `dim`-dimensional subspace of `Mat_n` (or the index range
/// `partition` of them) and count those satisfying `predicate`. Totals do not
/// depend on how the range is partitioned.
pub fn exhaustive_scan(
    n: usize,
    field: FieldSpec,
    dim: usize,
    predicate: ScanPredicate,
    partition: Option<Range<u128>>,
    cap: u64,
) -> Result<TheoremReport<ScanSummary>> {
    let g = MatrixGrassmannian::new(field, n, n, dim)?;
    let total = g.len();
    let range = match partition {
        Some(r) if r.start <= r.end && r.end <= total => r,
        Some(r) => {
            return Err(MswError::InvalidArgument(format!(
                "partition {}..{} outside 0..{total}",
                r.start, r.end
            )))
        }
        None => 0..total,
    };
    let count = range.end - range.start;
    if count > SCAN_CEILING {
        return Err(MswError::ScanTooLarge {
            count,
            ceiling: SCAN_CEILING,
        });
    }
    let chunks: Vec<Range<u128>> = (0..count.div_ceil(CHUNK))
        .map(|i| {
            let s = range.start + i * CHUNK;
            s..(s + CHUNK).min(range.end)
        })
        .collect();
    let tally = chunks
        .into_par_iter()
        .map(|r| scan_chunk(&g, r, predicate, cap))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;

    let bound = binomial2(n);
    let mut draft = Draft::new("exhaustive_scan", field);
    draft
        .param("n", n)
        .param("dim", dim)
        .param("predicate", predicate)
        .param("partition", [range.start, range.end]);
    draft
        .count("scanned", tally.scanned as u64)
        .count("hits", tally.hits as u64)
        .count("rejected_early", (tally.scanned - tally.hits) as u64);
    let bound_ok = dim <= bound || tally.hits == 0;
    let flags_ok = tally.first_untriangularized.is_none();
    if let Some(i) = tally.first_hit {
        draft.witness("first_hit_index", &i);
        if !bound_ok {
            draft.witness("space", &g.unrank(i).expect("index in range"));
        }
    }
    if let Some(i) = tally.first_untriangularized {
        draft
            .witness("untriangularized_index", &i)
            .witness("space", &g.unrank(i).expect("index in range"));
    }
    let summary = ScanSummary {
        n,
        dim,
        predicate,
        total_spaces: total,
        range,
        scanned: tally.scanned,
        hits: tally.hits,
        first_hit: tally.first_hit,
        triangularized_hits: tally.triangularized,
        bound,
    };
    Ok(draft.finish(Verdict::settle(bound_ok && flags_ok, true), summary))
}
