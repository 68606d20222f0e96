//! Implausibility counting for node-injection families.
//!
//! Under the smoothed prior every in-`P` translation costs the same number of
//! bits and every out-of-`P` translation costs strictly more, so the
//! likelihood objective is increasing in the count of samples a member maps
//! outside `P`. Counting is exact and much cheaper than summing logs.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::mle::{merge_minima, BLOCK};
use crate::dist::TextId;
use crate::error::{Error, Result};
use crate::models::NodeInjectionFamily;
use crate::translator::{injection_count, Translator, TranslatorFamily};

/// Number of sampled texts a translator maps outside `P`.
pub fn kg_implausibility_score(samples: &[TextId], plausible: &[bool], translator: &Translator) -> usize {
    samples.iter().filter(|&&x| !plausible[translator.apply(x) as usize]).count()
}

/// Every injection `[r] ↪ [n]` in lexicographic order, stored column-wise:
/// `columns[u][θ] = θ(u)`.
#[derive(Debug)]
pub struct InjectionTable {
    r: usize,
    n: usize,
    columns: Vec<Vec<u8>>,
}

/// Tables larger than this are refused (bytes).
pub const TABLE_BYTE_CAP: u128 = 1 << 30;

impl InjectionTable {
    pub fn build(r: usize, n: usize) -> Result<Self> {
        if n > 256 || r > n {
            return Err(Error::Parameter(format!("cannot tabulate injections [{r}] into [{n}]")));
        }
        let count = injection_count(r, n).unwrap_or(u128::MAX);
        let bytes = count.saturating_mul(r as u128);
        if bytes > TABLE_BYTE_CAP {
            return Err(Error::Budget { needed: bytes, cap: TABLE_BYTE_CAP });
        }
        let count = count as usize;
        let mut columns = vec![Vec::with_capacity(count); r];
        let mut prefix = Vec::with_capacity(r);
        let mut used = vec![false; n];
        fill(&mut columns, &mut prefix, &mut used, r, n);
        Ok(Self { r, n, columns })
    }

    /// Shared table for `(r, n)`, built on first use.
    pub fn shared(r: usize, n: usize) -> Result<Arc<Self>> {
        type Cache = Mutex<HashMap<(usize, usize), Arc<InjectionTable>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        // Built sequentially under the lock: no rayon work runs while it is
        // held, so a worker can never re-enter it.
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(t) = guard.get(&(r, n)) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(Self::build(r, n)?);
        guard.insert((r, n), Arc::clone(&table));
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.columns.first().map_or(1, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn column(&self, u: usize) -> &[u8] {
        &self.columns[u]
    }
}

fn fill(columns: &mut [Vec<u8>], prefix: &mut Vec<u8>, used: &mut [bool], r: usize, n: usize) {
    if prefix.len() == r {
        for (col, &v) in columns.iter_mut().zip(prefix.iter()) {
            col.push(v);
        }
        return;
    }
    for v in 0..n {
        if !used[v] {
            used[v] = true;
            prefix.push(v as u8);
            fill(columns, prefix, used, r, n);
            prefix.pop();
            used[v] = false;
        }
    }
}

/// Running implausibility counts of every member of a node-injection family.
#[derive(Debug, Clone)]
pub struct KgScoreboard {
    table: Arc<InjectionTable>,
    /// `implausible[a·n + b] = 1` iff `(a, b) ∉ P`.
    implausible: Vec<u32>,
    scores: Vec<u32>,
    samples_seen: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopScorer {
    pub theta_index: usize,
    pub implausible: u32,
    pub ties: usize,
}

impl KgScoreboard {
    pub fn new(family: &NodeInjectionFamily, plausible: &[bool]) -> Result<Self> {
        let (r, n) = (family.r(), family.n());
        if plausible.len() != n * n {
            return Err(Error::Dimension { what: "plausible edge mask", expected: n * n, got: plausible.len() });
        }
        let table = InjectionTable::shared(r, n)?;
        Ok(Self {
            scores: vec![0; table.len()],
            implausible: plausible.iter().map(|&p| u32::from(!p)).collect(),
            table,
            samples_seen: 0,
        })
    }

    pub fn samples_seen(&self) -> usize {
        self.samples_seen
    }

    pub fn scores(&self) -> &[u32] {
        &self.scores
    }

    /// Adds one sampled source edge `x = u·r + v`.
    pub fn update(&mut self, x: TextId) {
        let r = self.table.r();
        let n = self.table.n();
        let (u, v) = (x as usize / r, x as usize % r);
        let (cu, cv) = (self.table.column(u), self.table.column(v));
        let implausible = &self.implausible;
        self.scores.par_chunks_mut(BLOCK * 16).enumerate().for_each(|(b, chunk)| {
            let start = b * BLOCK * 16;
            let (cu, cv) = (&cu[start..start + chunk.len()], &cv[start..start + chunk.len()]);
            for ((s, &a), &c) in chunk.iter_mut().zip(cu).zip(cv) {
                *s += implausible[a as usize * n + c as usize];
            }
        });
        self.samples_seen += 1;
    }

    /// Smallest index with the fewest implausible translations.
    pub fn top_scorer(&self) -> TopScorer {
        let blocks: Vec<(usize, u32, usize)> = self
            .scores
            .par_chunks(BLOCK * 16)
            .enumerate()
            .map(|(b, chunk)| {
                let min = *chunk.iter().min().expect("non-empty chunk");
                let first = chunk.iter().position(|&s| s == min).expect("minimum present");
                let ties = chunk.iter().filter(|&&s| s == min).count();
                (b * BLOCK * 16 + first, min, ties)
            })
            .collect();
        let (theta_index, implausible, ties) = merge_minima(blocks).expect("non-empty family");
        TopScorer { theta_index, implausible, ties }
    }
}

/// Implausibility counts of every member for a fixed sample.
pub fn kg_scores(family: &NodeInjectionFamily, plausible: &[bool], samples: &[TextId]) -> Result<Vec<u32>> {
    if let Some(&x) = samples.iter().find(|&&x| x as usize >= family.source_size()) {
        return Err(Error::Dimension { what: "sample id", expected: family.source_size(), got: x as usize });
    }
    let mut board = KgScoreboard::new(family, plausible)?;
    for &x in samples {
        board.update(x);
    }
    Ok(board.scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::mle::{mle, mle_objective};
    use crate::models::{gen_kg, kg_prior, KgParams};

    #[test]
    fn table_matches_ranking() {
        let t = InjectionTable::build(3, 5).unwrap();
        let f = NodeInjectionFamily::new(3, 5, None).unwrap();
        assert_eq!(t.len(), 60);
        for theta in 0..60 {
            let row: Vec<TextId> = (0..3).map(|u| t.column(u)[theta] as TextId).collect();
            assert_eq!(row, f.node_map(theta));
        }
        assert!(Arc::ptr_eq(&InjectionTable::shared(3, 5).unwrap(), &InjectionTable::shared(3, 5).unwrap()));
    }

    #[test]
    fn hand_built_count() {
        // 4 target nodes; P = {(0,1), (1,2), (2,3)}; identity node map on 3
        // source nodes sends (0,1), (1,2), (2,0) to two edges in P and one out.
        let n = 4;
        let mut plausible = vec![false; n * n];
        for (a, b) in [(0, 1), (1, 2), (2, 3)] {
            plausible[a * n + b] = true;
        }
        let f = NodeInjectionFamily::new(3, 4, Some(0)).unwrap();
        let samples = [1, 3 + 2, 2 * 3];
        let id = f.translator(0);
        assert_eq!(kg_implausibility_score(&samples, &plausible, &id), 1);
        assert_eq!(kg_implausibility_score(&samples[..2], &plausible, &id), 0);
        assert_eq!(kg_scores(&f, &plausible, &samples).unwrap()[0], 1);
    }

    #[test]
    fn scoreboard_agrees_with_direct_counts() {
        let inst = gen_kg(21, KgParams { n: 6, r: 4, p: 0.5, alpha: 0.5 }).unwrap();
        let samples: Vec<TextId> = inst.t_edges.iter().copied().cycle().take(9).collect();
        let scores = kg_scores(&inst.family, &inst.plausible, &samples).unwrap();
        for theta in (0..inst.family.len()).step_by(7) {
            let t = inst.family.translator(theta);
            assert_eq!(scores[theta] as usize, kg_implausibility_score(&samples, &inst.plausible, &t));
        }
    }

    #[test]
    fn top_scorer_is_likelihood_argmin() {
        for seed in 0..20 {
            let inst = gen_kg(seed, KgParams { n: 6, r: 4, p: 0.4, alpha: 0.7 }).unwrap();
            let rho = kg_prior(&inst.plausible, 6).unwrap();
            let mut board = KgScoreboard::new(&inst.family, &inst.plausible).unwrap();
            for &x in &inst.t_edges {
                board.update(x);
            }
            let top = board.top_scorer();
            let best = mle(&inst.t_edges, &rho, &inst.family).unwrap();
            assert_eq!(top.theta_index, best.theta_index, "seed {seed}");
            assert_eq!(top.ties, best.ties, "seed {seed}");
            let obj = mle_objective(&inst.t_edges, &rho, &inst.family, top.theta_index).unwrap();
            assert_eq!(obj, best.objective);
        }
    }

    #[test]
    fn table_budget() {
        assert!(matches!(InjectionTable::build(20, 200), Err(Error::Budget { .. })));
    }
}
