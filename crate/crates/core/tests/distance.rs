use funnelmatch::distance::{brute_force_distance, deletion_distance, is_funnel, Mode};
use funnelmatch::Digraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_digraph(rng: &mut ChaCha8Rng) -> Digraph {
    let n = rng.random_range(1..=8);
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let max_e = pairs.len().min(12);
    let e = rng.random_range(0..=max_e);
    for i in 0..e {
        let j = rng.random_range(i..pairs.len());
        pairs.swap(i, j);
    }
    pairs.truncate(e);
    Digraph::unlabeled(n, pairs).unwrap()
}

#[test]
fn branching_agrees_with_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd157);
    let mut checked = 0;
    while checked < 3000 {
        let g = random_digraph(&mut rng);
        for mode in [Mode::Vertex, Mode::Edge] {
            let Ok(oracle) = brute_force_distance(&g, mode, 3) else {
                continue;
            };
            let got = deletion_distance(&g, mode, 3).unwrap();
            assert_eq!(got.d, oracle.d, "{mode:?} on {:?}", g.edges());
            assert!(is_funnel(&got.certificate.apply(&g)));
            checked += 1;
        }
    }
}

#[test]
fn budget_exhaustion_matches() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let g = random_digraph(&mut rng);
        for mode in [Mode::Vertex, Mode::Edge] {
            assert_eq!(
                deletion_distance(&g, mode, 1).map(|r| r.d),
                brute_force_distance(&g, mode, 1).map(|r| r.d)
            );
        }
    }
}
