//! Injective translators and parameterized translator families.

use crate::dist::TextId;
use crate::error::{Error, Result};

/// An injective map from a source text space into a target text space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Translator {
    map: Vec<TextId>,
    target_size: usize,
}

impl Translator {
    pub fn new(map: Vec<TextId>, target_size: usize) -> Result<Self> {
        let mut seen = vec![false; target_size];
        for (x, &y) in map.iter().enumerate() {
            let slot = seen.get_mut(y as usize).ok_or_else(|| {
                Error::Contract(format!("translator maps {x} to {y}, outside target space of size {target_size}"))
            })?;
            if std::mem::replace(slot, true) {
                return Err(Error::Contract(format!("translator is not injective: target {y} is hit twice")));
            }
        }
        Ok(Self { map, target_size })
    }

    pub fn identity(size: usize) -> Self {
        Self { map: (0..size as TextId).collect(), target_size: size }
    }

    pub fn apply(&self, x: TextId) -> TextId {
        self.map[x as usize]
    }

    pub fn map(&self) -> &[TextId] {
        &self.map
    }

    pub fn source_size(&self) -> usize {
        self.map.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    /// Preimage table: `inverse[y] = Some(x)` iff `f(x) = y`.
    pub fn inverse(&self) -> Vec<Option<TextId>> {
        let mut inv = vec![None; self.target_size];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y as usize] = Some(x as TextId);
        }
        inv
    }
}

/// A finite, totally ordered family `{f_θ : θ ∈ Θ}` with an optional hidden
/// ground-truth member.
///
/// Members are addressed by index; for implicit enumerations the index order
/// coincides with the lexicographic order of the members' map tuples, so
/// "smallest index" is the lexicographic tie-break.
pub trait TranslatorFamily: Sync {
    fn len(&self) -> usize;

    fn source_size(&self) -> usize;

    fn target_size(&self) -> usize;

    /// `f_θ(x)`.
    fn translate(&self, theta: usize, x: TextId) -> TextId;

    fn star_index(&self) -> Option<usize>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Images of a batch of texts under one member. Families whose members are
    /// expensive to decode override this to decode once per batch.
    fn translate_many(&self, theta: usize, xs: &[TextId], out: &mut Vec<TextId>) {
        out.clear();
        out.extend(xs.iter().map(|&x| self.translate(theta, x)));
    }

    fn translator(&self, theta: usize) -> Translator {
        let xs: Vec<TextId> = (0..self.source_size() as TextId).collect();
        let mut map = Vec::with_capacity(xs.len());
        self.translate_many(theta, &xs, &mut map);
        Translator { map, target_size: self.target_size() }
    }

    fn require_star(&self) -> Result<usize> {
        let star =
            self.star_index().ok_or_else(|| Error::Config("translator family has no ground-truth member".into()))?;
        if star >= self.len() {
            return Err(Error::Config(format!("ground-truth index {star} outside family of size {}", self.len())));
        }
        Ok(star)
    }
}

/// A family given by an explicit list of translators.
#[derive(Debug, Clone)]
pub struct ExplicitFamily {
    members: Vec<Translator>,
    source_size: usize,
    target_size: usize,
    star: Option<usize>,
}

impl ExplicitFamily {
    pub fn new(members: Vec<Translator>, star: Option<usize>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::Config("empty translator family".into()))?;
        let (source_size, target_size) = (first.source_size(), first.target_size());
        for m in &members {
            if m.source_size() != source_size || m.target_size() != target_size {
                return Err(Error::Dimension {
                    what: "family member spaces",
                    expected: source_size,
                    got: m.source_size(),
                });
            }
        }
        if let Some(s) = star {
            if s >= members.len() {
                return Err(Error::Config(format!("ground-truth index {s} out of range")));
            }
        }
        Ok(Self { members, source_size, target_size, star })
    }

    pub fn from_maps(maps: Vec<Vec<TextId>>, target_size: usize, star: Option<usize>) -> Result<Self> {
        let members = maps.into_iter().map(|m| Translator::new(m, target_size)).collect::<Result<Vec<_>>>()?;
        Self::new(members, star)
    }

    pub fn members(&self) -> &[Translator] {
        &self.members
    }
}

impl TranslatorFamily for ExplicitFamily {
    fn len(&self) -> usize {
        self.members.len()
    }
    fn source_size(&self) -> usize {
        self.source_size
    }
    fn target_size(&self) -> usize {
        self.target_size
    }
    fn translate(&self, theta: usize, x: TextId) -> TextId {
        self.members[theta].apply(x)
    }
    fn star_index(&self) -> Option<usize> {
        self.star
    }
    fn translator(&self, theta: usize) -> Translator {
        self.members[theta].clone()
    }
}

/// Number of injections from a `k`-set into an `n`-set, `n!/(n-k)!`, or
/// `None` if it overflows.
pub fn injection_count(k: usize, n: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    (0..k).try_fold(1u128, |acc, i| acc.checked_mul((n - i) as u128))
}

/// Lexicographic ranking of the injections `[k] ↪ [n]`, viewed as tuples
/// `(θ(0), …, θ(k-1))`.
#[derive(Debug, Clone)]
pub struct InjectionRanking {
    k: usize,
    n: usize,
    /// `block[i]` = number of injections sharing a fixed prefix of length `i + 1`.
    block: Vec<usize>,
    count: usize,
}

impl InjectionRanking {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::Parameter(format!("cannot inject {k} items into {n}")));
        }
        let count = injection_count(k, n)
            .and_then(|c| usize::try_from(c).ok())
            .ok_or_else(|| Error::Parameter(format!("{n}!/({n}-{k})! overflows")))?;
        let block = (0..k)
            .map(|i| {
                // Completions of a prefix of length i + 1: (n-i-1)!/(n-k)!.
                ((i + 1)..k).map(|j| n - j).product()
            })
            .collect();
        Ok(Self { k, n, block, count })
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn domain(&self) -> usize {
        self.k
    }

    pub fn codomain(&self) -> usize {
        self.n
    }

    pub fn unrank_into(&self, mut rank: usize, out: &mut Vec<TextId>) {
        debug_assert!(rank < self.count);
        out.clear();
        let mut used = vec![false; self.n];
        for i in 0..self.k {
            let digit = rank / self.block[i];
            rank %= self.block[i];
            let value = used
                .iter()
                .enumerate()
                .filter(|(_, &u)| !u)
                .nth(digit)
                .map(|(v, _)| v)
                .expect("digit within remaining values");
            used[value] = true;
            out.push(value as TextId);
        }
    }

    pub fn unrank(&self, rank: usize) -> Vec<TextId> {
        let mut out = Vec::with_capacity(self.k);
        self.unrank_into(rank, &mut out);
        out
    }

    pub fn rank(&self, map: &[TextId]) -> Result<usize> {
        if map.len() != self.k {
            return Err(Error::Dimension { what: "injection length", expected: self.k, got: map.len() });
        }
        let mut used = vec![false; self.n];
        let mut rank = 0usize;
        for (i, &v) in map.iter().enumerate() {
            let v = v as usize;
            if v >= self.n || used[v] {
                return Err(Error::Contract(format!("{map:?} is not an injection into [{}]", self.n)));
            }
            let digit = used[..v].iter().filter(|&&u| !u).count();
            rank += digit * self.block[i];
            used[v] = true;
        }
        Ok(rank)
    }
}

/// The full family of injections `X ↪ Y`, enumerated lexicographically.
#[derive(Debug, Clone)]
pub struct InjectionFamily {
    ranking: InjectionRanking,
    star: Option<usize>,
}

impl InjectionFamily {
    pub fn new(source_size: usize, target_size: usize, star: Option<usize>) -> Result<Self> {
        let ranking = InjectionRanking::new(source_size, target_size)?;
        if matches!(star, Some(s) if s >= ranking.len()) {
            return Err(Error::Config("ground-truth index out of range".into()));
        }
        Ok(Self { ranking, star })
    }

    pub fn ranking(&self) -> &InjectionRanking {
        &self.ranking
    }
}

impl TranslatorFamily for InjectionFamily {
    fn len(&self) -> usize {
        self.ranking.len()
    }
    fn source_size(&self) -> usize {
        self.ranking.domain()
    }
    fn target_size(&self) -> usize {
        self.ranking.codomain()
    }
    fn translate(&self, theta: usize, x: TextId) -> TextId {
        self.ranking.unrank(theta)[x as usize]
    }
    fn star_index(&self) -> Option<usize> {
        self.star
    }
    fn translate_many(&self, theta: usize, xs: &[TextId], out: &mut Vec<TextId>) {
        let map = self.ranking.unrank(theta);
        out.clear();
        out.extend(xs.iter().map(|&x| map[x as usize]));
    }
}
