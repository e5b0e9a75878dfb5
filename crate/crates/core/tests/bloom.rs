use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use widthplan::novelty::BloomFilter;

fn analytic(h: u32, n: usize, m: usize) -> f64 {
    (1.0 - (-(h as f64) * n as f64 / m as f64).exp()).powi(h as i32)
}

#[test]
fn no_false_negatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut f = BloomFilter::new(1 << 18, 4);
    let mut inserted = Vec::new();
    let mut ops = 0;
    while ops < 100_000 {
        if inserted.is_empty() || rng.gen_bool(0.5) {
            let x: u64 = rng.gen();
            f.insert(&x);
            inserted.push(x);
        } else {
            let x = inserted[rng.gen_range(0..inserted.len())];
            assert!(f.contains(&x));
        }
        ops += 1;
    }
    assert!(inserted.iter().all(|x| f.contains(x)));
}

/// Queries keys disjoint from the inserted ones and returns the measured
/// false-positive rate.
fn measured_rate(m: usize, h: u32, n: u64, queries: u64) -> f64 {
    let mut f = BloomFilter::new(m, h);
    for i in 0..n {
        f.insert(&(i, 0u8));
    }
    let hits = (0..queries).filter(|i| f.contains(&(*i, 1u8))).count();
    hits as f64 / queries as f64
}

#[test]
fn false_positive_rate_near_analytic() {
    // light load: the expected count is a fraction of one
    let (m, h, n) = (1 << 16, 4, 1_000);
    let rate = measured_rate(m, h, n, 10_000);
    assert!(rate <= 2.0 * analytic(h, n as usize, m), "{rate}");
    // heavy load gives enough hits to test both sides
    let (m, h, n) = (1 << 16, 4, 10_000);
    let want = analytic(h, n as usize, m);
    let rate = measured_rate(m, h, n, 200_000);
    assert!(rate <= 2.0 * want && rate >= want / 2.0, "{rate} vs {want}");
    let f = {
        let mut f = BloomFilter::new(m, h);
        for i in 0..n {
            f.insert(&i);
        }
        f
    };
    assert!((f.expected_false_positive_rate() - want).abs() < 1e-3);
}
