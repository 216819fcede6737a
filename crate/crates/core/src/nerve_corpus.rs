//! Exhaustive comparison of functors and nerve maps over a corpus of small
//! relative semicategories.
//!
//! Counting is done at bound 2 for every pair. Both sides stay the same at
//! bounds 3 and 4 because every nerve in the corpus is checked to be
//! 2-coskeletal at bound 4: if the matching map of `q` is bijective at every
//! object with more than 2 edges then `Nat(p, q)` equals `Nat(p|2, q|2)`.
//! Objects are ordered by edge count and then marks, and every non-identity
//! morphism raises one of the two, so each matching map only involves
//! smaller objects and the extension is unique step by step.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::nerve::{count_nat, mutation, nerve_on, nerve_theorem_counts, segal_check, NatIndex, Presheaf, Scope, TruncatedSite};
use crate::semicat::{count_functors, relsemicat_corpus, RelSemiCategory};

/// What to run besides the exhaustive bound 2 counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusOptions {
    pub max_objects: usize,
    pub max_morphisms: usize,
    /// Phantoms and deletions run on every nerve at bound 3, redirects on
    /// every nerve at bound 2 and on every `stride`-th nerve at bound 3.
    /// The default 1 sweeps them all.
    pub redirect_stride: usize,
    /// Direct bound 3 counts for all pairs of classes with at most this
    /// many morphisms.
    pub direct_bound3_morphisms: usize,
    /// Direct bound 4 counts on every `stride`-th source and target.
    pub direct_bound4_stride: usize,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            max_objects: 2,
            max_morphisms: 4,
            redirect_stride: 1,
            direct_bound3_morphisms: 3,
            direct_bound4_stride: 211,
        }
    }
}

/// A pair whose two counts differ, by corpus index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub source: usize,
    pub target: usize,
    pub bound: usize,
    pub functors: usize,
    pub natural_transformations: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectCounts {
    pub bound: usize,
    pub pairs: u64,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusReport {
    pub classes: usize,
    pub pairs: u64,
    pub functors: u64,
    pub natural_transformations: u64,
    pub mismatches: Vec<Mismatch>,
    /// Pairs where some transformation does not restrict to a functor.
    pub non_functor_restrictions: Vec<(usize, usize)>,
    /// Corpus indices whose nerve fails [`segal_check`], per bound.
    pub segal_failures: Vec<(usize, usize)>,
    /// Corpus indices whose bound 4 nerve is not 2-coskeletal.
    pub non_coskeletal: Vec<usize>,
    pub mutations: mutation::Sweep,
    pub direct: Vec<DirectCounts>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
            && self.non_functor_restrictions.is_empty()
            && self.segal_failures.is_empty()
            && self.non_coskeletal.is_empty()
            && self.mutations.survivors.is_empty()
            && self.direct.iter().all(|d| d.mismatches.is_empty())
    }
}

fn nerves(corpus: &[RelSemiCategory], bound: usize) -> Result<Vec<Presheaf>> {
    let site = TruncatedSite::new(bound, Scope::All);
    corpus.par_iter().map(|c| nerve_on(c, &site)).collect()
}

/// Runs the full comparison over `relsemicat_corpus(max_objects,
/// max_morphisms)`.
pub fn corpus_check(options: &CorpusOptions) -> Result<CorpusReport> {
    let corpus = relsemicat_corpus(options.max_objects, options.max_morphisms);
    let n = corpus.len();

    let n2 = nerves(&corpus, 2)?;
    let i2: Vec<NatIndex> = n2.iter().map(NatIndex::new).collect();
    let rows: Vec<(u64, u64, Vec<Mismatch>, Vec<(usize, usize)>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = (0, 0, Vec::new(), Vec::new());
            for j in 0..n {
                let counts = nerve_theorem_counts(&corpus[i], &corpus[j], &n2[i], &i2[i], &n2[j], &i2[j])?;
                row.0 += counts.functors as u64;
                row.1 += counts.natural_transformations as u64;
                if counts.functors != counts.natural_transformations {
                    row.2.push(Mismatch {
                        source: i,
                        target: j,
                        bound: 2,
                        functors: counts.functors,
                        natural_transformations: counts.natural_transformations,
                    });
                }
                if !counts.restrictions_are_functors {
                    row.3.push((i, j));
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    drop(i2);
    let mut report = CorpusReport {
        classes: n,
        pairs: (n * n) as u64,
        functors: rows.iter().map(|r| r.0).sum(),
        natural_transformations: rows.iter().map(|r| r.1).sum(),
        mismatches: rows.iter().flat_map(|r| r.2.iter().copied()).collect(),
        non_functor_restrictions: rows.iter().flat_map(|r| r.3.iter().copied()).collect(),
        segal_failures: Vec::new(),
        non_coskeletal: Vec::new(),
        mutations: mutation::Sweep::default(),
        direct: Vec::new(),
    };
    let segal = |ps: &[Presheaf], bound: usize| -> Result<Vec<(usize, usize)>> {
        let passed: Vec<bool> = ps.par_iter().map(|p| segal_check(p).map(|r| r.passed)).collect::<Result<_>>()?;
        Ok(passed.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| (bound, i)).collect())
    };
    report.segal_failures.extend(segal(&n2, 2)?);
    report.mutations = sweep_all(&n2, |_| false, |_| true);
    drop(n2);

    let n3 = nerves(&corpus, 3)?;
    report.segal_failures.extend(segal(&n3, 3)?);
    let stride = options.redirect_stride.max(1);
    report.mutations.merge(sweep_all(&n3, |_| true, |i| i % stride == 0));
    let small: Vec<usize> = (0..n)
        .filter(|&i| corpus[i].base().morphism_count() <= options.direct_bound3_morphisms)
        .collect();
    report.direct.push(direct(&corpus, &n3, &small, &small, 3)?);
    drop(n3);

    let n4 = nerves(&corpus, 4)?;
    report.segal_failures.extend(segal(&n4, 4)?);
    report.non_coskeletal = n4
        .par_iter()
        .enumerate()
        .filter(|(_, p)| !p.non_coskeletal_objects(2).is_empty())
        .map(|(i, _)| i)
        .collect();
    let sample: Vec<usize> = (0..n).step_by(options.direct_bound4_stride.max(1)).collect();
    report.direct.push(direct(&corpus, &n4, &sample, &sample, 4)?);
    drop(n4);

    Ok(report)
}

/// Sweeps nerve `i` if `cells(i)`, with redirects if `redirects(i)`.
fn sweep_all(ps: &[Presheaf], cells: impl Fn(usize) -> bool + Sync, redirects: impl Fn(usize) -> bool + Sync) -> mutation::Sweep {
    let sweep = |(i, p): (usize, &Presheaf)| {
        if cells(i) {
            mutation::sweep(p, redirects(i))
        } else if redirects(i) {
            mutation::sweep_redirects(p)
        } else {
            mutation::Sweep::default()
        }
    };
    ps.par_iter().enumerate().map(sweep).reduce(mutation::Sweep::default, |mut a, b| {
        a.merge(b);
        a
    })
}

fn direct(corpus: &[RelSemiCategory], ps: &[Presheaf], sources: &[usize], targets: &[usize], bound: usize) -> Result<DirectCounts> {
    let index: Vec<Option<NatIndex>> = (0..ps.len())
        .map(|i| (sources.contains(&i) || targets.contains(&i)).then(|| NatIndex::new(&ps[i])))
        .collect();
    let rows: Vec<Vec<Mismatch>> = sources
        .par_iter()
        .map(|&i| {
            let mut out = Vec::new();
            for &j in targets {
                let nats = count_nat(&ps[i], index[i].as_ref().unwrap(), &ps[j], index[j].as_ref().unwrap())?;
                let functors = count_functors(&corpus[i], &corpus[j]);
                if nats != functors {
                    out.push(Mismatch {
                        source: i,
                        target: j,
                        bound,
                        functors,
                        natural_transformations: nats,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(DirectCounts {
        bound,
        pairs: (sources.len() * targets.len()) as u64,
        mismatches: rows.into_iter().flatten().collect(),
    })
}
