//! Reproducibility, stream independence and monotone coupling of the
//! sampler.

use hyperspectra::sampler::{sample, sample_levels, ModelParams};
use hyperspectra::Limits;
use proptest::prelude::*;

proptest! {
    #[test]
    fn same_stream_same_edges(s in 2usize..=4, n in 4usize..=14, p in 0.0f64..=1.0, seed in any::<u64>(), t in any::<u64>()) {
        let params = ModelParams::with_p(s, n, p, seed, t);
        let limits = Limits::default();
        prop_assert_eq!(sample(&params, &limits).unwrap(), sample(&params, &limits).unwrap());
    }

    #[test]
    fn coupled_levels_are_nested(
        s in 2usize..=3,
        n in 4usize..=12,
        mut ps in proptest::collection::vec(0.0f64..=1.0, 1..5),
        seed in any::<u64>(),
        t in 0u64..100,
    ) {
        ps.sort_by(f64::total_cmp);
        let levels = sample_levels(s, n, &ps, seed, t, &Limits::default()).unwrap();
        for pair in levels.windows(2) {
            prop_assert!(pair[0].edges().iter().all(|e| pair[1].has_edge(e)));
        }
        // a single level is the plain sample
        let last = sample(&ModelParams::with_p(s, n, ps[ps.len() - 1], seed, t), &Limits::default()).unwrap();
        prop_assert_eq!(&levels[levels.len() - 1], &last);
    }
}

#[test]
fn trial_streams_are_uncorrelated() {
    // edge indicators of consecutive streams over C(40, 3) = 9880 slots
    let limits = Limits::default();
    let (n, p) = (40, 0.5);
    let slots = 9880.0;
    for t in 0..5 {
        let a = sample(&ModelParams::with_p(3, n, p, 17, t), &limits).unwrap();
        let b = sample(&ModelParams::with_p(3, n, p, 17, t + 1), &limits).unwrap();
        let both = a.edges().iter().filter(|e| b.has_edge(e)).count() as f64;
        let (ma, mb) = (a.edge_count() as f64 / slots, b.edge_count() as f64 / slots);
        let cov = both / slots - ma * mb;
        let r = cov / (ma * (1.0 - ma) * mb * (1.0 - mb)).sqrt();
        // standard error is about 1/sqrt(9880) = 0.01
        assert!(r.abs() < 0.05, "streams {t} and {} correlate: r = {r}", t + 1);
    }
}
