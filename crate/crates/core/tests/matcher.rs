mod common;

use std::collections::BTreeSet;

use common::*;
use funnelmatch::funnel::{class_min_k, st_partition, Cap, Count};
use funnelmatch::matcher::*;
use funnelmatch::{LabeledDag, PatternIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exact(c: Count) -> u64 {
    c.exact().unwrap()
}

#[test]
fn deciders_agree_with_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..3000 {
        let sigma = rng.random_range(2..=3);
        let g = random_dag(&mut rng, 12, 24, sigma);
        let s = random_pattern(&mut rng, 8, sigma);
        let idx = PatternIndex::for_graph(&s, &g).unwrap();
        let rev = idx.reversed();
        let occ = occurrences(&g, &s);
        let ends: Vec<usize> = occ.ends.iter().copied().collect();
        let starts: Vec<usize> = occ.starts.iter().copied().collect();
        let found = !occ.paths.is_empty();
        let c = class_min_k(&g, Cap::Exact).unwrap();

        for r in [
            match_baseline(&g, &idx),
            match_w_param(&g, &idx),
            match_sk(&g, &idx, exact(c.k_s)).unwrap(),
        ] {
            assert_eq!(r.found, found, "{}", r.algorithm);
            assert_eq!(r.end_vertices, ends, "{}", r.algorithm);
        }
        let r = match_tk(&g, &rev, exact(c.k_t)).unwrap();
        assert_eq!((r.found, &r.start_vertices), (found, &starts));

        let k = exact(c.k_st);
        let r = match_stk(&g, &idx, &rev, k).unwrap();
        let part = st_partition(&g, k).unwrap();
        let in_v1: BTreeSet<usize> = part.v1.iter().copied().collect();
        let crossing: BTreeSet<(usize, usize)> = occ
            .paths
            .iter()
            .flat_map(|p| p.windows(2).map(|w| (w[0], w[1])))
            .filter(|(u, v)| in_v1.contains(u) && !in_v1.contains(v))
            .collect();
        assert_eq!(r.found, found);
        assert_eq!(r.end_vertices, ends.iter().copied().filter(|v| in_v1.contains(v)).collect::<Vec<_>>());
        assert_eq!(r.start_vertices, starts.iter().copied().filter(|v| !in_v1.contains(v)).collect::<Vec<_>>());
        assert_eq!(r.crossing_edges, crossing.into_iter().collect::<Vec<_>>());

        let auto = match_auto(&g, &idx).unwrap();
        assert_eq!(auto.found, found);

        for &v in &ends {
            let w = witness_path(&g, &s, v).unwrap();
            assert_eq!(w.iter().map(|&x| g.label(x)).collect::<Vec<_>>(), s);
        }
    }
}

#[test]
fn reversal_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..1000 {
        let g = random_dag(&mut rng, 10, 20, 2);
        let s = random_pattern(&mut rng, 6, 2);
        let idx = PatternIndex::for_graph(&s, &g).unwrap();
        let gr: LabeledDag = g.reverse();
        let idx_r = idx.reversed();
        assert_eq!(match_baseline(&g, &idx).found, match_baseline(&gr, &idx_r).found);
        assert_eq!(match_w_param(&g, &idx).found, match_w_param(&gr, &idx_r).found);
        let c = class_min_k(&g, Cap::Exact).unwrap();
        let tk = match_tk(&g, &idx_r, exact(c.k_t)).unwrap();
        let sk = match_sk(&gr, &idx_r, exact(c.k_t)).unwrap();
        assert_eq!(tk.start_vertices, sk.end_vertices);
        assert_eq!(tk.stats.pi_mass, sk.stats.pi_mass);
    }
}

#[test]
fn pi_sets_are_maximal_prefix_matches() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..2000 {
        let g = random_dag(&mut rng, 12, 24, 2);
        let s = random_pattern(&mut rng, 8, 2);
        let idx = PatternIndex::for_graph(&s, &g).unwrap();
        let b = prefix_match_sets(&g, &s);
        let pis = pi_sets(&g, &idx);
        let full = prefix_sets(&g, &idx);
        let (mu_s, _) = brute_mu(&g);
        for v in 0..g.n() {
            assert_eq!(full[v], b[v].iter().copied().collect::<Vec<_>>());
            let got: BTreeSet<usize> = pis[v].sorted_lengths().into_iter().collect();
            assert_eq!(got, maximal_by_borders(&s, &b[v]));
            assert!(pis[v].len() <= idx.w().min(mu_s[v] as usize));
        }
    }
}

#[test]
fn ps_table_small_patterns_exhaustive() {
    for m in 1..=8 {
        for code in 0..3usize.pow(m as u32) {
            let s: Vec<u8> = (0..m).map(|i| b'a' + (code / 3usize.pow(i as u32) % 3) as u8).collect();
            let ps = PsTable::new(&PatternIndex::new(&s).unwrap()).unwrap();
            for i in 0..=m {
                for j in 0..=m {
                    assert_eq!(ps.get(i, j), brute_ps(&s, i, j), "{:?} [{i}][{j}]", String::from_utf8_lossy(&s));
                }
            }
        }
    }
}

#[test]
fn report_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let g = random_dag(&mut rng, 12, 24, 2);
    let idx = PatternIndex::for_graph(b"ab", &g).unwrap();
    let r = match_auto(&g, &idx).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<MatchReport>(&text).unwrap(), r);
}
