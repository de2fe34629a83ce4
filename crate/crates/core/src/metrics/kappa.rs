use std::collections::HashMap;

use crate::error::{Error, Result};

/// Fleiss' kappa for `N` items each rated by the same number of raters.
///
/// `items[i][j]` is how many raters put item `i` in category `j`.
pub fn fleiss_kappa<R: AsRef<[usize]>>(items: &[R]) -> Result<f64> {
    let Some(first) = items.first() else {
        return Err(Error::InvalidArgument(
            "no items to compute kappa over".into(),
        ));
    };
    let k = first.as_ref().len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "kappa needs at least two categories, got {k}"
        )));
    }
    if let Some(i) = items.iter().position(|row| row.as_ref().len() != k) {
        return Err(Error::InvalidArgument(format!(
            "item {i} has {} categories, expected {k}",
            items[i].as_ref().len()
        )));
    }

    let totals: Vec<usize> = items.iter().map(|row| row.as_ref().iter().sum()).collect();
    let mut frequency: HashMap<usize, usize> = HashMap::new();
    for &t in &totals {
        *frequency.entry(t).or_default() += 1;
    }
    // Most frequent total, ties broken towards the larger count.
    let n = frequency
        .iter()
        .max_by_key(|&(&total, &count)| (count, total))
        .map(|(&total, _)| total)
        .unwrap_or(0);
    let offending: Vec<usize> = totals
        .iter()
        .enumerate()
        .filter(|&(_, &t)| t != n)
        .map(|(i, _)| i)
        .collect();
    if !offending.is_empty() {
        return Err(Error::UnequalRaterCounts {
            expected: n,
            items: offending,
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "kappa needs at least two raters per item, got {n}"
        )));
    }

    let big_n = items.len() as f64;
    let nf = n as f64;
    let mean_agreement = items
        .iter()
        .map(|row| {
            let squares: f64 = row.as_ref().iter().map(|&c| (c * c) as f64).sum();
            (squares - nf) / (nf * (nf - 1.0))
        })
        .sum::<f64>()
        / big_n;

    let expected_agreement: f64 = (0..k)
        .map(|j| {
            let column: usize = items.iter().map(|row| row.as_ref()[j]).sum();
            let p = column as f64 / (big_n * nf);
            p * p
        })
        .sum();

    if (1.0 - expected_agreement).abs() <= f64::EPSILON {
        return Err(Error::KappaUndefined);
    }
    Ok((mean_agreement - expected_agreement) / (1.0 - expected_agreement))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_agreement() {
        let items = vec![vec![5, 0, 0], vec![0, 5, 0], vec![0, 0, 5], vec![5, 0, 0]];
        assert_eq!(fleiss_kappa(&items).unwrap(), 1.0);
    }

    #[test]
    fn hand_computed_two_by_two() {
        let k = fleiss_kappa(&[[2usize, 0], [1, 1]]).unwrap();
        assert!((k + 1.0 / 3.0).abs() < 1e-12, "{k}");
    }

    #[test]
    fn single_category_is_undefined() {
        let items = vec![vec![4, 0, 0]; 6];
        assert!(matches!(fleiss_kappa(&items), Err(Error::KappaUndefined)));
    }

    #[test]
    fn unequal_counts_name_items() {
        let items = vec![vec![2, 1, 0], vec![1, 1, 1], vec![2, 0, 0], vec![0, 0, 3]];
        match fleiss_kappa(&items) {
            Err(Error::UnequalRaterCounts { expected, items }) => {
                assert_eq!(expected, 3);
                assert_eq!(items, vec![2]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fleiss_kappa::<Vec<usize>>(&[]).is_err());
        assert!(fleiss_kappa(&[[3usize]]).is_err());
        assert!(fleiss_kappa(&[[1usize, 0], [0, 1]]).is_err());
        assert!(fleiss_kappa(&[vec![1usize, 1], vec![1, 0, 1]]).is_err());
    }

    #[test]
    fn textbook_example() {
        // Fleiss (1971) style table: 10 items, 14 raters, 5 categories.
        let items = [
            [0usize, 0, 0, 0, 14],
            [0, 2, 6, 4, 2],
            [0, 0, 3, 5, 6],
            [0, 3, 9, 2, 0],
            [2, 2, 8, 1, 1],
            [7, 7, 0, 0, 0],
            [3, 2, 6, 3, 0],
            [2, 5, 3, 2, 2],
            [6, 5, 2, 1, 0],
            [0, 2, 2, 3, 7],
        ];
        let k = fleiss_kappa(&items).unwrap();
        assert!((k - 0.209930).abs() < 1e-6, "{k}");
    }
}
