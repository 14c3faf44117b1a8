use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CorpusError, Pos, TranslationPair};

/// Splits gold pairs into two POS-stratified folds.
pub fn split_two_folds(
    pairs: &[TranslationPair],
    seed: u64,
) -> Result<(Vec<TranslationPair>, Vec<TranslationPair>), CorpusError> {
    split_two_folds_by(pairs, |p| p.pos(), seed)
}

/// Stratified two-fold split of arbitrary items.
///
/// Items of each POS (nouns, then verbs, then adjectives) are shuffled with
/// a seeded RNG and dealt alternately into the two folds, the alternation
/// carrying over between classes. Both folds' sizes and each class count
/// differ by at most one. Each fold keeps the input order.
pub fn split_two_folds_by<T: Clone>(
    items: &[T],
    pos_of: impl Fn(&T) -> Pos,
    seed: u64,
) -> Result<(Vec<T>, Vec<T>), CorpusError> {
    if items.len() < 2 {
        return Err(CorpusError::TooFewPairs(items.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_a = vec![false; items.len()];
    let mut to_a = true;
    for pos in Pos::ALL {
        let mut idx: Vec<usize> = (0..items.len())
            .filter(|&i| pos_of(&items[i]) == pos)
            .collect();
        idx.shuffle(&mut rng);
        for i in idx {
            in_a[i] = to_a;
            to_a = !to_a;
        }
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (item, &flag) in items.iter().zip(&in_a) {
        if flag {
            a.push(item.clone());
        } else {
            b.push(item.clone());
        }
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pos_list(nn: usize, vb: usize, adj: usize) -> Vec<(usize, Pos)> {
        let mut v = Vec::new();
        v.extend((0..nn).map(|_| Pos::Noun));
        v.extend((0..vb).map(|_| Pos::Verb));
        v.extend((0..adj).map(|_| Pos::Adj));
        v.into_iter().enumerate().collect()
    }

    fn counts(fold: &[(usize, Pos)]) -> [usize; 3] {
        let mut c = [0; 3];
        for (_, p) in fold {
            c[Pos::ALL.iter().position(|q| q == p).unwrap()] += 1;
        }
        c
    }

    #[test]
    fn ten_pairs_split_evenly() {
        let items = pos_list(6, 2, 2);
        let (a, b) = split_two_folds_by(&items, |x| x.1, 7).unwrap();
        assert_eq!((a.len(), b.len()), (5, 5));
        assert_eq!(counts(&a), [3, 1, 1]);
        assert_eq!(counts(&b), [3, 1, 1]);
    }

    #[test]
    fn two_items() {
        let (a, b) = split_two_folds_by(&pos_list(2, 0, 0), |x| x.1, 123).unwrap();
        assert_eq!((a.len(), b.len()), (1, 1));
    }

    #[test]
    fn too_few() {
        assert!(matches!(
            split_two_folds_by(&pos_list(1, 0, 0), |x| x.1, 0),
            Err(CorpusError::TooFewPairs(1))
        ));
    }

    proptest! {
        #[test]
        fn folds_partition_and_are_balanced(nn in 0usize..20, vb in 0usize..20, adj in 0usize..20, seed: u64) {
            prop_assume!(nn + vb + adj >= 2);
            let items = pos_list(nn, vb, adj);
            let (a, b) = split_two_folds_by(&items, |x| x.1, seed).unwrap();
            let (a2, b2) = split_two_folds_by(&items, |x| x.1, seed).unwrap();
            prop_assert_eq!(&a, &a2);
            prop_assert_eq!(&b, &b2);
            prop_assert!(a.len().abs_diff(b.len()) <= 1);
            let (ca, cb) = (counts(&a), counts(&b));
            for k in 0..3 {
                prop_assert!(ca[k].abs_diff(cb[k]) <= 1);
            }
            let mut all: Vec<usize> = a.iter().chain(&b).map(|x| x.0).collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..items.len()).collect::<Vec<_>>());
        }
    }
}
