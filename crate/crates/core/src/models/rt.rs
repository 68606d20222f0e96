//! Random tree languages: texts are root-to-leaf label paths of a random
//! `b`-ary tree; translated texts come from a random `a`-ary subtree.

use rand::seq::index;
use rand::Rng;

use super::LanguageInstance;
use crate::dist::{FiniteDistribution, TextId};
use crate::error::{Error, Result};
use crate::rng;
use crate::translator::{InjectionRanking, TranslatorFamily};

/// Default cap on the size `|W|ⁿ` of the text space.
pub const DEFAULT_TEXT_BUDGET: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RtParams {
    pub vocab_size: usize,
    pub depth: usize,
    /// Arity of the translated subtree.
    pub a: usize,
    /// Arity of the full tree.
    pub b: usize,
    pub budget: u128,
}

impl RtParams {
    pub fn new(vocab_size: usize, depth: usize, a: usize, b: usize) -> Self {
        Self { vocab_size, depth, a, b, budget: DEFAULT_TEXT_BUDGET }
    }

    pub fn space_size(&self) -> Option<u128> {
        (self.vocab_size as u128).checked_pow(self.depth as u32)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1 <= self.a && self.a <= self.b && 4 * self.b <= self.vocab_size) {
            return Err(Error::Parameter(format!(
                "need 1 <= a <= b <= |W|/4, got a = {}, b = {}, |W| = {}",
                self.a, self.b, self.vocab_size
            )));
        }
        if self.depth == 0 {
            return Err(Error::Parameter("depth must be at least 1".into()));
        }
        match self.space_size() {
            Some(size) if size <= self.budget => Ok(()),
            size => Err(Error::Budget { needed: size.unwrap_or(u128::MAX), cap: self.budget }),
        }
    }
}

/// Word-for-word translators: member `θ` is the `θ`-th permutation of `W` in
/// lexicographic order, applied to every word of a text.
#[derive(Debug, Clone)]
pub struct WordPermutationFamily {
    ranking: InjectionRanking,
    depth: usize,
    space: usize,
    star: Option<usize>,
}

impl WordPermutationFamily {
    pub fn new(vocab_size: usize, depth: usize, star: Option<usize>) -> Result<Self> {
        let ranking = InjectionRanking::new(vocab_size, vocab_size)?;
        let space = (vocab_size as u128)
            .checked_pow(depth as u32)
            .and_then(|s| usize::try_from(s).ok())
            .filter(|&s| s <= TextId::MAX as usize)
            .ok_or_else(|| Error::Parameter(format!("|W|^n = {vocab_size}^{depth} overflows")))?;
        if matches!(star, Some(s) if s >= ranking.len()) {
            return Err(Error::Config("ground-truth index out of range".into()));
        }
        Ok(Self { ranking, depth, space, star })
    }

    pub fn word_map(&self, theta: usize) -> Vec<TextId> {
        self.ranking.unrank(theta)
    }

    fn apply_words(&self, sigma: &[TextId], x: TextId) -> TextId {
        let w = sigma.len() as TextId;
        let (mut rest, mut out, mut place) = (x, 0, 1);
        for _ in 0..self.depth {
            out += sigma[(rest % w) as usize] * place;
            rest /= w;
            place *= w;
        }
        out
    }
}

impl TranslatorFamily for WordPermutationFamily {
    fn len(&self) -> usize {
        self.ranking.len()
    }
    fn source_size(&self) -> usize {
        self.space
    }
    fn target_size(&self) -> usize {
        self.space
    }
    fn translate(&self, theta: usize, x: TextId) -> TextId {
        self.apply_words(&self.ranking.unrank(theta), x)
    }
    fn star_index(&self) -> Option<usize> {
        self.star
    }
    fn translate_many(&self, theta: usize, xs: &[TextId], out: &mut Vec<TextId>) {
        let sigma = self.ranking.unrank(theta);
        out.clear();
        out.extend(xs.iter().map(|&x| self.apply_words(&sigma, x)));
    }
}

#[derive(Debug, Clone)]
pub struct TreeLanguageInstance {
    pub params: RtParams,
    /// Sibling labels of every internal node, level by level; the children of
    /// node `k` on a level are nodes `k·b .. k·b + b` on the next.
    pub child_labels: Vec<Vec<TextId>>,
    /// Per internal node, the positions (into its `b` children) kept in the
    /// subtree, ascending; `None` for nodes outside the subtree.
    pub kept_children: Vec<Option<Vec<usize>>>,
    /// Target-side texts, ascending.
    pub p_texts: Vec<TextId>,
    /// Target-side texts of the subtree, ascending.
    pub t_texts: Vec<TextId>,
    pub family: WordPermutationFamily,
    pub mu: FiniteDistribution,
    pub rho: FiniteDistribution,
}

impl TreeLanguageInstance {
    pub fn star_index(&self) -> usize {
        self.family.star_index().expect("generated instances carry ⋆")
    }

    /// Words of a text, first word first.
    pub fn words(&self, text: TextId) -> Vec<TextId> {
        let w = self.params.vocab_size as TextId;
        let mut out = vec![0; self.params.depth];
        let mut rest = text;
        for slot in out.iter_mut().rev() {
            *slot = rest % w;
            rest /= w;
        }
        out
    }

    /// The first `n - 1` words as a single key.
    pub fn prefix(&self, text: TextId) -> TextId {
        text / self.params.vocab_size as TextId
    }
}

impl LanguageInstance for TreeLanguageInstance {
    type Family = WordPermutationFamily;
    fn family(&self) -> &WordPermutationFamily {
        &self.family
    }
    fn mu(&self) -> &FiniteDistribution {
        &self.mu
    }
    fn rho(&self) -> &FiniteDistribution {
        &self.rho
    }
}

pub fn gen_rt(seed: u64, params: RtParams) -> Result<TreeLanguageInstance> {
    params.validate()?;
    let RtParams { vocab_size, depth, a, b, .. } = params;
    let w = vocab_size as TextId;

    let mut rng_g = rng::stream(seed, "rt/G");
    let mut rng_h = rng::stream(seed, "rt/H");
    let mut child_labels = Vec::new();
    let mut kept_children = Vec::new();
    // (text prefix so far, in subtree) per node of the current level.
    let mut level: Vec<(TextId, bool)> = vec![(0, true)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * b);
        for &(prefix, in_h) in &level {
            let labels: Vec<TextId> =
                index::sample(&mut rng_g, vocab_size, b).into_iter().map(|v| v as TextId).collect();
            let kept = in_h.then(|| {
                let mut k = index::sample(&mut rng_h, b, a).into_vec();
                k.sort_unstable();
                k
            });
            for (pos, &label) in labels.iter().enumerate() {
                let child_in_h = kept.as_ref().is_some_and(|k| k.contains(&pos));
                next.push((prefix * w + label, child_in_h));
            }
            child_labels.push(labels);
            kept_children.push(kept);
        }
        level = next;
    }
    let mut p_texts: Vec<TextId> = level.iter().map(|&(t, _)| t).collect();
    let mut t_texts: Vec<TextId> = level.iter().filter(|l| l.1).map(|&(t, _)| t).collect();
    p_texts.sort_unstable();
    t_texts.sort_unstable();

    let n_perms = InjectionRanking::new(vocab_size, vocab_size)?.len();
    let star = rng::stream(seed, "rt/star").random_range(0..n_perms);
    let family = WordPermutationFamily::new(vocab_size, depth, Some(star))?;

    let sigma = family.word_map(star);
    let mut inverse = vec![0; vocab_size];
    for (v, &s) in sigma.iter().enumerate() {
        inverse[s as usize] = v as TextId;
    }
    let sources: Vec<TextId> = t_texts.iter().map(|&y| family.apply_words(&inverse, y)).collect();
    let space = family.source_size();
    let mu = FiniteDistribution::uniform(space, &sources)?;
    let rho = FiniteDistribution::uniform(space, &p_texts)?;
    Ok(TreeLanguageInstance { params, child_labels, kept_children, p_texts, t_texts, family, mu, rho })
}
