//! Partitions of the moved set of a permutation into parts that the
//! permutation maps off themselves.

use std::collections::HashMap;
use std::hash::Hash;

use crate::dist::TextId;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionResult {
    /// Each part sorted ascending.
    pub parts: Vec<Vec<TextId>>,
    /// `{y : π(y) ≠ y}`, ascending.
    pub moved: Vec<TextId>,
}

impl PartitionResult {
    /// `π(A_i) ∩ A_i = ∅` for every part.
    pub fn parts_avoid_own_image(&self, perm: &[TextId]) -> bool {
        let mut part_of = vec![usize::MAX; perm.len()];
        for (i, part) in self.parts.iter().enumerate() {
            for &y in part {
                part_of[y as usize] = i;
            }
        }
        self.parts.iter().enumerate().all(|(i, part)| part.iter().all(|&y| part_of[perm[y as usize] as usize] != i))
    }

    /// Parts are pairwise disjoint and cover exactly the moved set.
    pub fn covers_moved_set(&self) -> bool {
        let mut all: Vec<TextId> = self.parts.iter().flatten().copied().collect();
        all.sort_unstable();
        all == self.moved
    }
}

fn check_bijection(perm: &[TextId]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for (y, &p) in perm.iter().enumerate() {
        match seen.get_mut(p as usize) {
            Some(s) if !*s => *s = true,
            _ => return Err(Error::Contract(format!("not a bijection on 0..{}: {y} maps to {p}", perm.len()))),
        }
    }
    Ok(())
}

fn moved_set(perm: &[TextId]) -> Vec<TextId> {
    (0..perm.len() as TextId).filter(|&y| perm[y as usize] != y).collect()
}

/// Splits each non-trivial cycle by alternating between the first two parts
/// from its minimal element; an odd cycle sends its last element to the third.
pub fn partition3(perm: &[TextId]) -> Result<PartitionResult> {
    check_bijection(perm)?;
    let mut parts = vec![Vec::new(), Vec::new(), Vec::new()];
    let mut visited = vec![false; perm.len()];
    for start in 0..perm.len() {
        if visited[start] || perm[start] as usize == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut y = start;
        while !visited[y] {
            visited[y] = true;
            cycle.push(y as TextId);
            y = perm[y] as usize;
        }
        let odd = cycle.len() % 2 == 1;
        let last = cycle.len() - 1;
        for (pos, &y) in cycle.iter().enumerate() {
            let part = if odd && pos == last { 2 } else { pos % 2 };
            parts[part].push(y);
        }
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    Ok(PartitionResult { parts, moved: moved_set(perm) })
}

/// Greedy four-way partition in ascending id order. Each moved `y` goes to
/// the smallest part that holds neither `π(y)` nor `π⁻¹(y)` and stays within
/// `|W|/2` texts sharing the prefix of `y`.
pub fn partition4<K, P>(perm: &[TextId], prefix_of: P, alphabet_size: usize) -> Result<PartitionResult>
where
    K: Eq + Hash,
    P: Fn(TextId) -> K,
{
    check_bijection(perm)?;
    if alphabet_size < 4 {
        return Err(Error::Contract(format!("alphabet size {alphabet_size} below 4")));
    }
    let mut inverse = vec![0 as TextId; perm.len()];
    for (y, &p) in perm.iter().enumerate() {
        inverse[p as usize] = y as TextId;
    }
    let moved = moved_set(perm);
    let mut part_of: Vec<Option<usize>> = vec![None; perm.len()];
    let mut counts: HashMap<K, [usize; 4]> = HashMap::new();
    let mut parts = vec![Vec::new(); 4];
    for &y in &moved {
        let neighbours = [part_of[perm[y as usize] as usize], part_of[inverse[y as usize] as usize]];
        let count = counts.entry(prefix_of(y)).or_default();
        let chosen = (0..4)
            .find(|&i| !neighbours.contains(&Some(i)) && 2 * (count[i] + 1) <= alphabet_size)
            .ok_or_else(|| Error::Contract(format!("no admissible part for text {y}")))?;
        count[chosen] += 1;
        part_of[y as usize] = Some(chosen);
        parts[chosen].push(y);
    }
    Ok(PartitionResult { parts, moved })
}
