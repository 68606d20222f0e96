//! Correlated random digraph pairs. Texts are ordered node pairs (self-loops
//! included) and translators act node-wise.

use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::LanguageInstance;
use crate::dist::{FiniteDistribution, TextId};
use crate::error::{Error, Result};
use crate::rng;
use crate::translator::{InjectionRanking, TranslatorFamily};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgParams {
    /// Target node count.
    pub n: usize,
    /// Source node count.
    pub r: usize,
    /// Edge density.
    pub p: f64,
    /// Agreement between the two graphs.
    pub alpha: f64,
}

impl KgParams {
    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.r > self.n {
            return Err(Error::Parameter(format!("need 1 <= r <= n, got r = {}, n = {}", self.r, self.n)));
        }
        if self.n > u8::MAX as usize + 1 {
            return Err(Error::Parameter(format!("n = {} exceeds 256 nodes", self.n)));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::Parameter(format!("edge density p = {} outside (0, 1)", self.p)));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Parameter(format!("agreement α = {} outside [0, 1]", self.alpha)));
        }
        Ok(())
    }
}

/// Node injections `[r] ↪ [n]` lifted to edges: `f_θ((u, v)) = (θ(u), θ(v))`.
///
/// Source edge `(u, v)` has id `u·r + v`, target edge `(a, b)` has id `a·n + b`.
/// Members are ranked lexicographically by node map, which is also the
/// lexicographic order of their edge maps.
#[derive(Debug, Clone)]
pub struct NodeInjectionFamily {
    ranking: InjectionRanking,
    star: Option<usize>,
}

impl NodeInjectionFamily {
    pub fn new(r: usize, n: usize, star: Option<usize>) -> Result<Self> {
        let ranking = InjectionRanking::new(r, n)?;
        if matches!(star, Some(s) if s >= ranking.len()) {
            return Err(Error::Config("ground-truth index out of range".into()));
        }
        Ok(Self { ranking, star })
    }

    pub fn r(&self) -> usize {
        self.ranking.domain()
    }

    pub fn n(&self) -> usize {
        self.ranking.codomain()
    }

    pub fn ranking(&self) -> &InjectionRanking {
        &self.ranking
    }

    pub fn node_map(&self, theta: usize) -> Vec<TextId> {
        self.ranking.unrank(theta)
    }

    fn lift(&self, nodes: &[TextId], x: TextId) -> TextId {
        let (r, n) = (self.r() as TextId, self.n() as TextId);
        nodes[(x / r) as usize] * n + nodes[(x % r) as usize]
    }
}

impl TranslatorFamily for NodeInjectionFamily {
    fn len(&self) -> usize {
        self.ranking.len()
    }
    fn source_size(&self) -> usize {
        self.r() * self.r()
    }
    fn target_size(&self) -> usize {
        self.n() * self.n()
    }
    fn translate(&self, theta: usize, x: TextId) -> TextId {
        self.lift(&self.ranking.unrank(theta), x)
    }
    fn star_index(&self) -> Option<usize> {
        self.star
    }
    fn translate_many(&self, theta: usize, xs: &[TextId], out: &mut Vec<TextId>) {
        let nodes = self.ranking.unrank(theta);
        out.clear();
        out.extend(xs.iter().map(|&x| self.lift(&nodes, x)));
    }
}

#[derive(Debug, Clone)]
pub struct KnowledgeGraphInstance {
    pub params: KgParams,
    /// Plausible target edges as a mask over `n²`.
    pub plausible: Vec<bool>,
    /// Hidden node subset `S`, ascending.
    pub s_nodes: Vec<TextId>,
    /// Source edges (ids over `r²`), ascending.
    pub t_edges: Vec<TextId>,
    /// Hidden node map `X → S`.
    pub star_nodes: Vec<TextId>,
    pub family: NodeInjectionFamily,
    pub mu: FiniteDistribution,
    pub rho: FiniteDistribution,
    /// `T` or `P` came out empty and the instance collapsed to a single loop.
    pub degenerate: bool,
    /// Metadata only: `p·n`.
    pub avg_degree: f64,
}

impl KnowledgeGraphInstance {
    pub fn p_edges(&self) -> Vec<TextId> {
        mask_ids(&self.plausible)
    }

    pub fn in_p(&self, y: TextId) -> bool {
        self.plausible[y as usize]
    }

    pub fn star_index(&self) -> usize {
        self.family.star_index().expect("generated instances carry ⋆")
    }
}

impl LanguageInstance for KnowledgeGraphInstance {
    type Family = NodeInjectionFamily;
    fn family(&self) -> &NodeInjectionFamily {
        &self.family
    }
    fn mu(&self) -> &FiniteDistribution {
        &self.mu
    }
    fn rho(&self) -> &FiniteDistribution {
        &self.rho
    }
}

fn mask_ids(mask: &[bool]) -> Vec<TextId> {
    (0..mask.len() as TextId).filter(|&y| mask[y as usize]).collect()
}

/// Uniform over `P`, smoothed with the uniform distribution over all `n²`
/// edges: `ρ(y) = ½(1/|P| + 1/n²)` on `P` and `1/(2n²)` elsewhere.
///
/// With `P` empty this returns the point mass on edge `(0, 0)`.
pub fn kg_prior(plausible: &[bool], n: usize) -> Result<FiniteDistribution> {
    let space = n * n;
    if plausible.len() != space {
        return Err(Error::Dimension { what: "plausible edge mask", expected: space, got: plausible.len() });
    }
    let count = plausible.iter().filter(|&&b| b).count();
    if count == 0 {
        return FiniteDistribution::point(space, 0);
    }
    let low = 1.0 / (2.0 * space as f64);
    let high = 0.5 * (1.0 / count as f64 + 1.0 / space as f64);
    FiniteDistribution::new(plausible.iter().map(|&b| if b { high } else { low }).collect())
}

pub fn gen_kg(seed: u64, params: KgParams) -> Result<KnowledgeGraphInstance> {
    params.validate()?;
    let KgParams { n, r, p, alpha } = params;

    let mut rng_p = rng::stream(seed, "kg/P");
    let mut plausible: Vec<bool> = (0..n * n).map(|_| rng_p.random_bool(p)).collect();

    let mut rng_s = rng::stream(seed, "kg/S");
    let mut s_nodes: Vec<TextId> = index::sample(&mut rng_s, n, r).into_iter().map(|v| v as TextId).collect();
    s_nodes.sort_unstable();

    // Target edges over S², in ascending edge id.
    let mut rng_t = rng::stream(seed, "kg/T");
    let mut t_target = Vec::new();
    for &a in &s_nodes {
        for &b in &s_nodes {
            let y = a * n as TextId + b;
            let keep = if rng_t.random_bool(alpha) { plausible[y as usize] } else { rng_t.random_bool(p) };
            if keep {
                t_target.push(y);
            }
        }
    }

    let mut rng_star = rng::stream(seed, "kg/star");
    let mut star_nodes = s_nodes.clone();
    star_nodes.shuffle(&mut rng_star);
    let mut preimage = vec![TextId::MAX; n];
    for (u, &a) in star_nodes.iter().enumerate() {
        preimage[a as usize] = u as TextId;
    }

    let family_probe = InjectionRanking::new(r, n)?;
    let star = family_probe.rank(&star_nodes)?;
    let family = NodeInjectionFamily::new(r, n, Some(star))?;

    let degenerate = t_target.is_empty() || !plausible.iter().any(|&b| b);
    let t_edges: Vec<TextId> = if degenerate {
        // Collapse to the self-loop on the smallest hidden node.
        let y0 = s_nodes[0];
        plausible = vec![false; n * n];
        plausible[(y0 as usize) * n + y0 as usize] = true;
        let x0 = preimage[y0 as usize];
        vec![x0 * r as TextId + x0]
    } else {
        let mut edges: Vec<TextId> = t_target
            .iter()
            .map(|&y| {
                let (a, b) = (y as usize / n, y as usize % n);
                preimage[a] * r as TextId + preimage[b]
            })
            .collect();
        edges.sort_unstable();
        edges
    };

    let mu = FiniteDistribution::uniform(r * r, &t_edges)?;
    let rho = kg_prior(&plausible, n)?;
    Ok(KnowledgeGraphInstance {
        params,
        plausible,
        s_nodes,
        t_edges,
        star_nodes,
        family,
        mu,
        rho,
        degenerate,
        avg_degree: p * n as f64,
    })
}
