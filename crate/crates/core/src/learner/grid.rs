use crate::dist::TextId;
use crate::models::GridShiftFamily;

/// Maximum-likelihood member of a grid-shift family under a uniform prior on
/// `sensical`, decided row by row: a row stays unshifted unless some sample
/// in it would then translate into nonsense.
///
/// Equals the exhaustive likelihood argmin whenever the ground truth is
/// consistent with the samples.
pub fn grid_mle(family: &GridShiftFamily, sensical: &[bool], samples: &[TextId]) -> usize {
    let mut shifted = vec![false; family.rows()];
    for &x in samples {
        if let Some((i, j)) = family.cell(x) {
            if !sensical[family.row_map(false, i, j) as usize] {
                shifted[i] = true;
            }
        }
    }
    family.index_of(&shifted)
}
