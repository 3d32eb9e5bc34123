//! Batch certification over all pairs `(u, v)` in `S_n x S_n`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use schubert_core::grothendieck::expand_product_k;
use schubert_core::positivity::{certify_grothendieck, certify_grothendieck_default, certify_schubert, Bounds, CertifyOutcome};
use schubert_core::schubert::expand_product;
use schubert_core::{Permutation, Result, CONVENTION_VERSION};

use crate::cache::Cache;
use crate::exit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Schubert,
    Grothendieck,
}

/// K-theoretic search limits. Unset fields follow the defaults: `d + 4`
/// differences for a coefficient of degree `d`, `b^6`, one doubling retry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsPolicy {
    pub max_z_degree: Option<u32>,
    pub max_beta_power: Option<u32>,
}

impl BoundsPolicy {
    pub fn is_default(&self) -> bool {
        self.max_z_degree.is_none() && self.max_beta_power.is_none()
    }

    pub fn certify(&self, c: &schubert_core::LocalizedElement, ambient: usize) -> Result<CertifyOutcome> {
        if self.is_default() {
            return certify_grothendieck_default(c, ambient);
        }
        let degree = schubert_core::positivity::k_degree(c).unwrap_or(0);
        let base = Bounds::default_for_degree(degree);
        let bounds = Bounds {
            max_z_degree: self.max_z_degree.unwrap_or(base.max_z_degree),
            max_beta_power: self.max_beta_power.unwrap_or(base.max_beta_power),
        };
        certify_grothendieck(c, ambient, bounds)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub n: usize,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsPolicy>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub u: String,
    pub v: String,
    pub w: String,
    pub ambient: usize,
    pub coefficient: String,
    pub outcome: CertifyOutcome,
}

/// A coefficient whose certification raised an error, or a pair whose
/// expansion did (then `w` is absent).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub u: String,
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    pub error: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pairs: usize,
    pub coefficients: usize,
    pub certified: usize,
    pub infeasible_complete: usize,
    pub inconclusive: usize,
    pub denominator_shape_violations: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploreReport {
    pub tool_version: String,
    pub convention: String,
    pub parameters: Parameters,
    pub summary: Summary,
    pub records: Vec<Record>,
    pub failures: Vec<Failure>,
    pub wall_clock_seconds: f64,
}

impl ExploreReport {
    /// 3 on anything that contradicts a theorem or signals a bug, else 1 if
    /// some instance stayed inconclusive, else 0.
    pub fn exit_code(&self) -> i32 {
        let s = &self.summary;
        if s.infeasible_complete > 0 || s.denominator_shape_violations > 0 || s.failures > 0 {
            exit::VIOLATION
        } else if s.inconclusive > 0 {
            exit::INCONCLUSIVE
        } else {
            exit::OK
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// The report without its wall-clock field, for comparing runs.
    pub fn without_timing(&self) -> ExploreReport {
        ExploreReport { wall_clock_seconds: 0.0, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct PairResult {
    records: Vec<Record>,
    failures: Vec<Failure>,
}

fn run_pair(u: &Permutation, v: &Permutation, mode: Mode, policy: BoundsPolicy) -> PairResult {
    let mut out = PairResult { records: Vec::new(), failures: Vec::new() };
    let fail = |w: Option<&Permutation>, e: schubert_core::Error| Failure {
        u: u.to_string(),
        v: v.to_string(),
        w: w.map(ToString::to_string),
        error: e.to_string(),
    };
    let mut push = |w: &Permutation, ambient: usize, coefficient: String, outcome: Result<CertifyOutcome>| match outcome {
        Ok(outcome) => out.records.push(Record {
            u: u.to_string(),
            v: v.to_string(),
            w: w.to_string(),
            ambient,
            coefficient,
            outcome,
        }),
        Err(e) => out.failures.push(fail(Some(w), e)),
    };
    match mode {
        Mode::Schubert => match expand_product(u, v) {
            Ok(e) => {
                for (w, c) in &e.coefficients {
                    push(w, e.ambient, c.render(), certify_schubert(c, e.ambient));
                }
            }
            Err(e) => return PairResult { records: Vec::new(), failures: vec![fail(None, e)] },
        },
        Mode::Grothendieck => match expand_product_k(u, v) {
            Ok(e) => {
                for (w, c) in &e.coefficients {
                    push(w, e.ambient, c.render(), policy.certify(c, e.ambient));
                }
            }
            Err(e) => return PairResult { records: Vec::new(), failures: vec![fail(None, e)] },
        },
    }
    out
}

fn cached_pair(
    u: &Permutation,
    v: &Permutation,
    mode: Mode,
    policy: BoundsPolicy,
    cache: Option<&Cache>,
) -> PairResult {
    let request = format!(
        "explore-pair mode={mode:?} u={u} v={v} zdeg={:?} bdeg={:?}",
        policy.max_z_degree, policy.max_beta_power
    );
    if let Some(hit) = cache.and_then(|c| c.get(&request)) {
        if let Ok(result) = serde_json::from_str::<PairResult>(&hit) {
            return result;
        }
    }
    let result = run_pair(u, v, mode, policy);
    if let Some(cache) = cache {
        let text = serde_json::to_string(&result).expect("pair results serialize");
        // A failed cache write only costs a recomputation later.
        let _ = cache.put(&request, &text);
    }
    result
}

/// Expands and certifies every pair on a pool of `jobs` threads. The report
/// does not depend on `jobs` apart from its wall-clock field.
pub fn explore(n: usize, mode: Mode, jobs: usize, policy: BoundsPolicy, cache: Option<&Cache>) -> ExploreReport {
    let start = Instant::now();
    let perms = Permutation::all(n);
    let pairs: Vec<(Permutation, Permutation)> =
        perms.iter().flat_map(|u| perms.iter().map(move |v| (u.clone(), v.clone()))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let results: Vec<PairResult> =
        pool.install(|| pairs.par_iter().map(|(u, v)| cached_pair(u, v, mode, policy, cache)).collect());

    let mut records: Vec<Record> = results.iter().flat_map(|r| r.records.iter().cloned()).collect();
    let mut failures: Vec<Failure> = results.into_iter().flat_map(|r| r.failures).collect();
    let order = |s: &str| s.parse::<Permutation>().expect("records hold valid permutations");
    records.sort_by_cached_key(|r| (order(&r.u), order(&r.v), order(&r.w)));
    failures.sort_by_cached_key(|f| (order(&f.u), order(&f.v), f.w.as_deref().map(order)));

    let mut summary = Summary { pairs: pairs.len(), failures: failures.len(), ..Summary::default() };
    summary.coefficients = records.len() + failures.iter().filter(|f| f.w.is_some()).count();
    for r in &records {
        match r.outcome {
            CertifyOutcome::Certified(_) => summary.certified += 1,
            CertifyOutcome::InfeasibleComplete => summary.infeasible_complete += 1,
            CertifyOutcome::InconclusiveAtBounds(_) => summary.inconclusive += 1,
            CertifyOutcome::DenominatorShapeViolation => summary.denominator_shape_violations += 1,
        }
    }
    ExploreReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        convention: CONVENTION_VERSION.to_string(),
        parameters: Parameters { n, mode, bounds: (mode == Mode::Grothendieck).then_some(policy) },
        summary,
        records,
        failures,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s2_schubert() {
        let report = explore(2, Mode::Schubert, 1, BoundsPolicy::default(), None);
        assert_eq!(report.summary.pairs, 4);
        assert_eq!(report.summary.certified, report.summary.coefficients);
        assert_eq!(report.exit_code(), exit::OK);
        let first = &report.records[0];
        assert_eq!((first.u.as_str(), first.v.as_str(), first.w.as_str()), ("1", "1", "1"));
    }

    #[test]
    fn report_round_trips() {
        let report = explore(2, Mode::Grothendieck, 2, BoundsPolicy::default(), None);
        let text = report.to_json();
        let back: ExploreReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }
}
