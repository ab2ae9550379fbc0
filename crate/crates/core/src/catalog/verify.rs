//! Batch verification of the printed catalog claims.
//!
//! Each family is instantiated over the full cartesian product of its
//! parameter samples. At every sample the algebra must pass Jacobi, the
//! cochain must be a cocycle, and the randomized index must agree with the
//! symbolic one. A claim with a condition is read as "if and only if": the
//! claimed index must hold where the condition does and fail where it does
//! not.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{cohomology_index, cohomology_index_symbolic, is_cocycle};
use crate::error::Result;
use crate::rank::RankOptions;
use crate::rational::{self, frac, int, Rational};

use super::expr::Bindings;
use super::{Catalog, ClaimData, Condition, Domain, EntryData, FamilyData, ParamSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingPlan {
    /// Fixed grid for real parameters.
    pub real_grid: Vec<Rational>,
    /// Extra seeded random rationals per real parameter.
    pub random_reals: usize,
    pub seed: u64,
    pub trials: usize,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            real_grid: vec![
                int(-2),
                int(-1),
                frac(-1, 2),
                int(0),
                frac(1, 2),
                int(1),
                int(2),
            ],
            random_reals: 2,
            seed: crate::rank::DEFAULT_SEED,
            trials: crate::rank::DEFAULT_TRIALS,
        }
    }
}

impl SamplingPlan {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn values(&self, p: &ParamSpec, stream: u64) -> Vec<Rational> {
        match p.domain {
            Domain::Sign => vec![int(-1), int(1)],
            Domain::Kappa => vec![int(-1), int(0), int(1)],
            Domain::Real => {
                let mut v = self.real_grid.clone();
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ stream);
                while v.len() < self.real_grid.len() + self.random_reals {
                    let num: i64 = rng.gen_range(-97..=97);
                    let den: i64 = rng.gen_range(1..=31);
                    let r = frac(num, den);
                    if !v.contains(&r) {
                        v.push(r);
                    }
                }
                v
            }
        }
    }
}

/// Stable per-name stream so random samples do not depend on ordering.
fn stream_id(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "UPPERCASE")]
pub enum ClaimStatus {
    /// The printed claim holds on every sample.
    Pass,
    /// The printed claim is refuted but the recorded correction holds.
    Flagged,
    Fail,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Counterexample {
    pub params: BTreeMap<String, String>,
    pub computed_ind: usize,
    pub condition_holds: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConditionCheck {
    pub condition: Option<String>,
    pub holds: bool,
    pub samples_true: usize,
    pub samples_false: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CorrectedReport {
    #[serde(flatten)]
    pub check: ConditionCheck,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClaimReport {
    pub family: String,
    pub printed: String,
    pub claimed_ind: usize,
    pub status: ClaimStatus,
    pub as_printed: ConditionCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected: Option<CorrectedReport>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FamilyReport {
    pub name: String,
    pub printed: String,
    pub samples: usize,
    pub cocycle_failures: usize,
    pub rank_disagreements: usize,
    /// `ind_[F]` value → number of samples attaining it.
    pub observed_indices: BTreeMap<usize, usize>,
    pub claims: Vec<ClaimReport>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EntryReport {
    pub id: String,
    pub item: usize,
    pub printed: String,
    pub jacobi_failures: usize,
    /// Directional checks: a conditional claim counts twice (sufficiency
    /// and necessity), an unconditional one once.
    pub checks: usize,
    pub families: Vec<FamilyReport>,
    pub notes: Vec<String>,
    pub status: ClaimStatus,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub entries: usize,
    pub claims: usize,
    pub checks: usize,
    pub passed: usize,
    pub flagged: usize,
    pub failed: usize,
    pub flagged_claims: Vec<String>,
    pub transcription_notes: Vec<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CatalogReport {
    pub seed: u64,
    pub trials: usize,
    pub entries: Vec<EntryReport>,
    pub summary: Summary,
}

struct Sample {
    env: Bindings,
    ind: Option<usize>,
}

fn fmt_env(env: &Bindings) -> BTreeMap<String, String> {
    env.iter()
        .map(|(k, v)| (k.clone(), rational::format(v)))
        .collect()
}

fn cartesian(params: &[ParamSpec], plan: &SamplingPlan) -> Vec<Bindings> {
    let mut out = vec![Bindings::new()];
    for p in params {
        let vals = plan.values(p, stream_id(&p.name));
        out = out
            .into_iter()
            .flat_map(|env| {
                vals.iter().map(move |v| {
                    let mut e = env.clone();
                    e.insert(p.name.clone(), v.clone());
                    e
                })
            })
            .collect();
    }
    out
}

fn family_params(entry: &EntryData, fam: &FamilyData) -> Vec<ParamSpec> {
    let mut ps: Vec<ParamSpec> = entry.params.clone();
    let mut push = |p: &ParamSpec| {
        if !ps.iter().any(|q| q.name == p.name) {
            ps.push(p.clone());
        }
    };
    fam.params.iter().for_each(&mut push);
    for c in &fam.claims {
        c.extra_params.iter().for_each(&mut push);
    }
    ps
}

fn check_condition(
    claim: &ClaimData,
    cond: Option<&Condition>,
    samples: &[Sample],
) -> Result<ConditionCheck> {
    let mut out = ConditionCheck {
        condition: cond.map(Condition::describe),
        holds: true,
        samples_true: 0,
        samples_false: 0,
        counterexample: None,
    };
    for s in samples {
        let Some(ind) = s.ind else { continue };
        let holds = match cond {
            Some(c) => c.holds(&s.env)?,
            None => true,
        };
        if holds {
            out.samples_true += 1;
        } else {
            out.samples_false += 1;
        }
        if (ind == claim.ind) != holds && out.counterexample.is_none() {
            out.holds = false;
            out.counterexample = Some(Counterexample {
                params: fmt_env(&s.env),
                computed_ind: ind,
                condition_holds: holds,
            });
        }
    }
    if out.samples_true == 0 {
        out.holds = false;
    }
    Ok(out)
}

fn verify_family(
    entry: &EntryData,
    fam: &FamilyData,
    plan: &SamplingPlan,
) -> Result<(FamilyReport, usize)> {
    let params = family_params(entry, fam);
    let nonzero: Vec<&String> = fam.nonzero.iter().collect();
    let mut samples = Vec::new();
    let mut report = FamilyReport {
        name: fam.name.clone(),
        printed: fam.printed.clone(),
        samples: 0,
        cocycle_failures: 0,
        rank_disagreements: 0,
        observed_indices: BTreeMap::new(),
        claims: Vec::new(),
    };
    let mut jacobi_failures = 0;
    for (k, env) in cartesian(&params, plan).into_iter().enumerate() {
        if nonzero
            .iter()
            .any(|p| env.get(*p).is_some_and(num_traits::Zero::is_zero))
        {
            continue;
        }
        report.samples += 1;
        let Ok(alg) = entry.algebra(&env) else {
            jacobi_failures += 1;
            samples.push(Sample { env, ind: None });
            continue;
        };
        let f = fam.cochain(&env)?;
        if !is_cocycle(&alg, &f)?.is_cocycle {
            report.cocycle_failures += 1;
            samples.push(Sample { env, ind: None });
            continue;
        }
        let opts = RankOptions {
            trials: plan.trials,
            seed: plan.seed.wrapping_add(k as u64),
            ..RankOptions::default()
        };
        let ind = cohomology_index(&alg, &f, &opts)?;
        if cohomology_index_symbolic(&alg, &f)? != ind {
            report.rank_disagreements += 1;
        }
        *report.observed_indices.entry(ind).or_default() += 1;
        samples.push(Sample {
            env,
            ind: Some(ind),
        });
    }
    let clean =
        report.cocycle_failures == 0 && report.rank_disagreements == 0 && jacobi_failures == 0;
    for claim in &fam.claims {
        let as_printed = check_condition(claim, claim.condition.as_ref(), &samples)?;
        let corrected = claim
            .corrected
            .as_ref()
            .map(|c| {
                Ok::<_, crate::error::Error>(CorrectedReport {
                    check: check_condition(claim, Some(&c.condition), &samples)?,
                    note: c.note.clone(),
                })
            })
            .transpose()?;
        let status = if !clean {
            ClaimStatus::Fail
        } else if as_printed.holds {
            ClaimStatus::Pass
        } else if corrected.as_ref().is_some_and(|c| c.check.holds) {
            ClaimStatus::Flagged
        } else {
            ClaimStatus::Fail
        };
        report.claims.push(ClaimReport {
            family: fam.name.clone(),
            printed: claim.printed.clone(),
            claimed_ind: claim.ind,
            status,
            as_printed,
            corrected,
        });
    }
    Ok((report, jacobi_failures))
}

fn verify_data(entry: &EntryData, plan: &SamplingPlan) -> Result<EntryReport> {
    let mut families = Vec::new();
    let mut jacobi_failures = 0;
    for fam in &entry.families {
        let (r, j) = verify_family(entry, fam, plan)?;
        jacobi_failures += j;
        families.push(r);
    }
    let structural = jacobi_failures > 0
        || families
            .iter()
            .any(|f| f.cocycle_failures > 0 || f.rank_disagreements > 0);
    let worst = families
        .iter()
        .flat_map(|f| f.claims.iter().map(|c| c.status))
        .max()
        .unwrap_or(ClaimStatus::Pass);
    Ok(EntryReport {
        id: entry.id.clone(),
        item: entry.item,
        printed: entry.printed.clone(),
        jacobi_failures,
        checks: families
            .iter()
            .flat_map(|f| &f.claims)
            .map(|c| {
                if c.as_printed.condition.is_some() {
                    2
                } else {
                    1
                }
            })
            .sum(),
        families,
        notes: entry.notes.clone(),
        status: if structural { ClaimStatus::Fail } else { worst },
    })
}

pub fn verify_entry(id: &str, plan: &SamplingPlan) -> Result<EntryReport> {
    verify_data(Catalog::embedded().entry(id)?, plan)
}

fn summarize(plan: &SamplingPlan, entries: Vec<EntryReport>) -> CatalogReport {
    let claims: Vec<(&EntryReport, &ClaimReport)> = entries
        .iter()
        .flat_map(|e| {
            e.families
                .iter()
                .flat_map(move |f| f.claims.iter().map(move |c| (e, c)))
        })
        .collect();
    let count = |s: ClaimStatus| claims.iter().filter(|(_, c)| c.status == s).count();
    let summary = Summary {
        entries: entries.len(),
        claims: claims.len(),
        checks: entries.iter().map(|e| e.checks).sum(),
        passed: count(ClaimStatus::Pass),
        flagged: count(ClaimStatus::Flagged),
        failed: count(ClaimStatus::Fail),
        flagged_claims: claims
            .iter()
            .filter(|(_, c)| c.status == ClaimStatus::Flagged)
            .map(|(e, c)| format!("{}/{}: {}", e.id, c.family, c.printed))
            .collect(),
        transcription_notes: entries
            .iter()
            .flat_map(|e| e.notes.iter().map(move |n| format!("{}: {}", e.id, n)))
            .collect(),
        ok: entries.iter().all(|e| e.status != ClaimStatus::Fail),
    };
    CatalogReport {
        seed: plan.seed,
        trials: plan.trials,
        entries,
        summary,
    }
}

/// Verifies the listed entries (all when `ids` is empty), in parallel.
pub fn verify_all(ids: &[String], plan: &SamplingPlan) -> Result<CatalogReport> {
    let cat = Catalog::embedded();
    let selected: Vec<&EntryData> = if ids.is_empty() {
        cat.entries.iter().collect()
    } else {
        ids.iter().map(|id| cat.entry(id)).collect::<Result<_>>()?
    };
    let entries = selected
        .par_iter()
        .map(|e| verify_data(e, plan))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(plan, entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g0_claim_passes_both_ways() {
        let r = verify_entry("g0", &SamplingPlan::default()).unwrap();
        assert_eq!(r.status, ClaimStatus::Pass);
        assert_eq!(r.checks, 2);
        let c = &r.families[0].claims[0];
        assert_eq!(c.as_printed.samples_true, 1);
        assert_eq!(c.as_printed.samples_false, 2);
        assert_eq!(r.families[0].observed_indices.get(&0), Some(&2));
    }

    #[test]
    fn real_samples_are_deterministic_and_distinct() {
        let plan = SamplingPlan::default();
        let p = ParamSpec {
            name: "alpha".into(),
            domain: Domain::Real,
        };
        let a = plan.values(&p, stream_id("alpha"));
        assert_eq!(a, plan.values(&p, stream_id("alpha")));
        assert_eq!(a.len(), 9);
        assert!(a.contains(&int(0)));
    }
}
