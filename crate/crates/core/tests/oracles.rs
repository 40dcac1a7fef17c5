//! Independent reference computations for the slicing examples.

use num_rational::Ratio;
use timeslice_core::metrics::{complexity_report, mean_variance};
use timeslice_core::slicing::{
    equal_event_counts, equal_event_partition, equalize, histeq_slicing, uniform_slicing, EventHistogram,
};
use timeslice_core::DynamicGraph;

/// Every way to cut `n` ordered items into `k` non-empty consecutive runs.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![n]];
    }
    (1..=n - (k - 1))
        .flat_map(|first| {
            compositions(n - first, k - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn max_deviation(counts: &[usize], quota: Ratio<i64>) -> Ratio<i64> {
    counts
        .iter()
        .map(|&c| {
            let d = Ratio::from_integer(c as i64) - quota;
            if d < Ratio::from_integer(0) {
                -d
            } else {
                d
            }
        })
        .max()
        .unwrap()
}

/// Bin-aligned splits of a histogram into `k` runs of consecutive bins.
fn bin_splits(counts: &[usize], k: usize) -> Vec<Vec<usize>> {
    compositions(counts.len(), k)
        .into_iter()
        .map(|runs| {
            let mut start = 0;
            runs.iter()
                .map(|&len| {
                    let sum = counts[start..start + len].iter().sum();
                    start += len;
                    sum
                })
                .collect()
        })
        .collect()
}

fn from_bins(counts: &[usize]) -> DynamicGraph {
    let records = counts
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(("a", "b", i as f64), c));
    DynamicGraph::from_records(records).unwrap()
}

#[test]
fn seventeen_events_three_slices() {
    let quota = Ratio::new(17, 3);
    let best = compositions(17, 3)
        .iter()
        .map(|c| max_deviation(c, quota))
        .min()
        .unwrap();
    assert_eq!(best, Ratio::new(2, 3));

    let counts = equal_event_counts(17, 3);
    assert_eq!(counts, vec![6, 5, 6]);
    assert_eq!(max_deviation(&counts, quota), best);

    let g = DynamicGraph::from_records((0..17).map(|i| ("a", "b", f64::from(i) * 1.5))).unwrap();
    let s = equal_event_partition(&g, 3).unwrap();
    assert_eq!(s.counts(&g), vec![6, 5, 6]);
}

#[test]
fn seven_events_two_slices_tie_goes_up() {
    // quota 3.5 is exactly halfway; the first slice takes the larger count
    assert_eq!(equal_event_counts(7, 2), vec![4, 3]);
    let quota = Ratio::new(7, 2);
    let best = compositions(7, 2).iter().map(|c| max_deviation(c, quota)).min().unwrap();
    assert_eq!(max_deviation(&[4, 3], quota), best);
}

#[test]
fn bursty_fixture_against_brute_force() {
    let bins = [4, 4, 4, 0, 0, 0, 0, 4];
    let best = bin_splits(&bins, 2)
        .iter()
        .map(|c| mean_variance(c).1)
        .fold(f64::INFINITY, f64::min);
    assert_eq!(best, 0.0);

    let g = from_bins(&bins);
    let h = complexity_report(&g, &histeq_slicing(&g, 2, 1.0).unwrap()).unwrap();
    let u = complexity_report(&g, &uniform_slicing(&g, 2).unwrap()).unwrap();
    assert_eq!(h.per_slice_counts, vec![8, 8]);
    assert_eq!(h.variance, best);
    assert_eq!(u.per_slice_counts, vec![12, 4]);
    assert_eq!(u.variance, 16.0);
}

/// `floor((B + 1 - 1) * sum_{j <= i} p(j))` with exact rational `p(j)`.
fn equalization_oracle(counts: &[u64]) -> Vec<u64> {
    let total: u64 = counts.iter().sum();
    let top = Ratio::from_integer((counts.len() - 1) as i128);
    let mut running = Ratio::from_integer(0i128);
    counts
        .iter()
        .map(|&c| {
            running += Ratio::new(c as i128, total as i128);
            (top * running).floor().to_integer() as u64
        })
        .collect()
}

#[test]
fn equalization_examples_match_oracle() {
    for counts in [vec![1, 1, 1, 1], vec![2, 1, 1], vec![0, 5, 0], vec![3, 0, 0, 7, 1]] {
        let h = EventHistogram::from_counts(1.0, counts.clone()).unwrap();
        assert_eq!(equalize(&h).unwrap().levels(), equalization_oracle(&counts));
    }
}
