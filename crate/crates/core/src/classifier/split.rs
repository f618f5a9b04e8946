use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::labeling::{ClassLabel, LabeledExample};

/// Training and test examples.
pub type Split<L> = (Vec<LabeledExample<L>>, Vec<LabeledExample<L>>);

/// Seeded stratified train/test split. Each class contributes
/// `round(fraction · n)` examples to the training side, clamped so both sides
/// get at least one. Both sides keep the input order.
pub fn stratified_split<L: ClassLabel + Clone>(
    examples: &[LabeledExample<L>],
    train_fraction: f64,
    seed: u64,
) -> Result<Split<L>> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction must be in (0, 1), got {train_fraction}"
        )));
    }
    // Classes in order of first appearance.
    let mut order: Vec<&str> = Vec::new();
    let mut groups: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, ex) in examples.iter().enumerate() {
        let name = ex.label.name();
        groups
            .entry(name)
            .or_insert_with(|| {
                order.push(name);
                Vec::new()
            })
            .push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_train = vec![false; examples.len()];
    for name in order {
        let idx = groups.get_mut(name).expect("group exists");
        let n = idx.len();
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "class `{name}` has {n} example(s); at least 2 are needed to split"
            )));
        }
        let n_train = ((train_fraction * n as f64).round() as usize).clamp(1, n - 1);
        idx.shuffle(&mut rng);
        for &i in &idx[..n_train] {
            in_train[i] = true;
        }
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (ex, t) in examples.iter().zip(in_train) {
        if t {
            train.push(ex.clone());
        } else {
            test.push(ex.clone());
        }
    }
    Ok((train, test))
}
