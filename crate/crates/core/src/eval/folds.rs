//! Stratified k-fold splits.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Test indices for each of `folds` folds. Each class is shuffled and dealt
/// round-robin, continuing where the previous class stopped so fold sizes
/// differ by at most one. Every class present needs at least `folds` members.
pub fn stratified_folds(labels: &[usize], folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 {
        return Err(Error::Stratification(format!(
            "need at least 2 folds, got {folds}"
        )));
    }
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); classes];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    for (c, m) in members.iter().enumerate() {
        if !m.is_empty() && m.len() < folds {
            return Err(Error::Stratification(format!(
                "class {c} has {} members, fewer than {folds} folds",
                m.len()
            )));
        }
    }
    let mut rng = rng_from_seed(seed);
    let mut out = vec![Vec::new(); folds];
    let mut next = 0;
    for mut m in members {
        m.shuffle(&mut rng);
        for i in m {
            out[next].push(i);
            next = (next + 1) % folds;
        }
    }
    for f in &mut out {
        f.sort_unstable();
    }
    Ok(out)
}

/// Indices not in `test`, ascending.
pub(crate) fn complement(n: usize, test: &[usize]) -> Vec<usize> {
    let mut held = vec![false; n];
    for &i in test {
        held[i] = true;
    }
    (0..n).filter(|&i| !held[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_partition_and_stratify() {
        let labels: Vec<usize> = (0..23).map(|i| usize::from(i % 3 == 0)).collect();
        let folds = stratified_folds(&labels, 4, 9).unwrap();
        let mut all: Vec<usize> = folds.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..23).collect::<Vec<_>>());
        let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        for f in &folds {
            let ones = f.iter().filter(|&&i| labels[i] == 1).count();
            assert_eq!(ones, 2);
        }
        assert_eq!(folds, stratified_folds(&labels, 4, 9).unwrap());
    }

    #[test]
    fn too_small_class() {
        assert!(stratified_folds(&[0, 0, 0, 1], 2, 0).is_err());
        assert!(stratified_folds(&[0, 0, 1, 1], 1, 0).is_err());
        assert!(stratified_folds(&[0, 0, 2, 2], 2, 0).is_ok());
    }

    #[test]
    fn complement_is_ascending() {
        assert_eq!(complement(5, &[1, 3]), vec![0, 2, 4]);
    }
}
