use crate::dist::TextId;
use crate::error::Result;
use crate::translator::TranslatorFamily;

/// The permutation `π_θ(y) = f_θ(f_⋆⁻¹(y))` of the target space, completed
/// off `f_⋆(X)` by matching the remaining targets to the unused targets in
/// ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Revision {
    perm: Vec<TextId>,
}

impl Revision {
    pub fn apply(&self, y: TextId) -> TextId {
        self.perm[y as usize]
    }

    pub fn perm(&self) -> &[TextId] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(y, &p)| y as TextId == p)
    }

    pub fn into_perm(self) -> Vec<TextId> {
        self.perm
    }
}

pub fn build_revision<F: TranslatorFamily + ?Sized>(family: &F, theta: usize) -> Result<Revision> {
    let star = family.require_star()?;
    let f_star = family.translator(star);
    let f_theta = family.translator(theta);
    let size = family.target_size();

    let mut perm: Vec<Option<TextId>> = vec![None; size];
    let mut hit = vec![false; size];
    for (&s, &t) in f_star.map().iter().zip(f_theta.map()) {
        perm[s as usize] = Some(t);
        hit[t as usize] = true;
    }
    let mut unused = (0..size as TextId).filter(|&y| !hit[y as usize]);
    let perm = perm
        .into_iter()
        .map(|p| p.unwrap_or_else(|| unused.next().expect("as many free targets as free sources")))
        .collect();
    Ok(Revision { perm })
}
