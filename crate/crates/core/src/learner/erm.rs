use rayon::prelude::*;

use super::mle::{check_samples, merge_minima, sorted_sum, BLOCK};
use crate::dist::TextId;
use crate::error::{Error, Result};
use crate::measures::{checked_difference, SemanticDifference};
use crate::translator::TranslatorFamily;

/// Supervised empirical risk minimiser over labelled `(x, y)` pairs; the
/// smallest index wins ties.
pub fn erm_supervised<F, L>(pairs: &[(TextId, TextId)], family: &F, ell: &L) -> Result<usize>
where
    F: TranslatorFamily + ?Sized,
    L: SemanticDifference + ?Sized,
{
    let xs: Vec<TextId> = pairs.iter().map(|p| p.0).collect();
    check_samples(family, &xs)?;
    if let Some(&(_, y)) = pairs.iter().find(|p| p.1 as usize >= family.target_size()) {
        return Err(Error::Dimension { what: "label id", expected: family.target_size(), got: y as usize });
    }
    let len = family.len();
    let blocks = (0..len.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut images = Vec::with_capacity(xs.len());
            let mut terms = Vec::with_capacity(xs.len());
            let mut best = None;
            for theta in b * BLOCK..((b + 1) * BLOCK).min(len) {
                family.translate_many(theta, &xs, &mut images);
                terms.clear();
                for (&(_, y), &z) in pairs.iter().zip(&images) {
                    terms.push(checked_difference(ell, y, z)?);
                }
                best = merge_minima(best.into_iter().chain([(theta, sorted_sum(&mut terms), 1)]));
            }
            Ok(best.expect("non-empty block"))
        })
        .collect::<Result<Vec<(usize, f64, usize)>>>()?;
    Ok(merge_minima(blocks).expect("non-empty family").0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::ZeroOne;
    use crate::translator::{ExplicitFamily, InjectionFamily};

    #[test]
    fn unique_consistent_member() {
        let f = InjectionFamily::new(3, 4, Some(17)).unwrap();
        let star = f.translator(17);
        let pairs: Vec<(TextId, TextId)> = (0..3).map(|x| (x, star.apply(x))).collect();
        assert_eq!(erm_supervised(&pairs, &f, &ZeroOne).unwrap(), 17);
        assert_eq!(erm_supervised(&[], &f, &ZeroOne).unwrap(), 0);
    }

    #[test]
    fn noisy_toy_matches_brute_force() {
        // Two of the four labels are corrupted.
        let f = InjectionFamily::new(3, 4, Some(5)).unwrap();
        let pairs = [(0, 2), (1, 3), (2, 0), (0, 1)];
        let losses: Vec<usize> =
            (0..f.len()).map(|t| pairs.iter().filter(|&&(x, y)| f.translate(t, x) != y).count()).collect();
        let min = *losses.iter().min().unwrap();
        let expected = losses.iter().position(|&l| l == min).unwrap();
        assert_eq!(erm_supervised(&pairs, &f, &ZeroOne).unwrap(), expected);
    }

    #[test]
    fn rejects_out_of_range_label() {
        let f = ExplicitFamily::from_maps(vec![vec![0]], 2, None).unwrap();
        assert!(matches!(erm_supervised(&[(0, 2)], &f, &ZeroOne), Err(Error::Dimension { .. })));
    }
}
