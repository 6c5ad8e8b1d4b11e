use std::collections::HashMap;

use cover_lrc::block_codes::LrcProfile;
use cover_lrc::counting::{
    binomial, predicate_cover, predicate_rank, Construction, Count, Counter, Mode, PatternParams,
    Probability,
};
use cover_lrc::cover_lrc::{CoverLrc, PositionMap};
use cover_lrc::cover_metric::{cover_weight, LineSet};
use cover_lrc::simulate::{fill_lines, sample_pattern};
use cover_lrc::verify::{check_counting, exact_p_local};
use cover_lrc::{Elem, Field};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Unmemoized S with an optional shift of the summation's lower bound.
struct PlainS {
    n_l: usize,
    lower_shift: i64,
    memo: HashMap<(i64, i64, usize, usize), Count>,
}

impl PlainS {
    fn s(&mut self, t: i64, t_l: i64, g: usize, a: usize) -> Count {
        if t < 0 {
            return Count::from(0u32);
        }
        if t == 0 {
            return Count::from(1u32);
        }
        if t_l <= 0 {
            return Count::from(0u32);
        }
        if let Some(v) = self.memo.get(&(t, t_l, g, a)) {
            return v.clone();
        }
        let lo = (a as i64).max(t - g as i64 * (t_l - 1)) + self.lower_shift;
        let hi = (g as i64).min(t / t_l);
        let mut total = Count::from(0u32);
        for i in lo.max(0)..=hi {
            let ways = binomial(g, i as usize) * binomial(self.n_l, t_l as usize).pow(i as u32);
            total += ways * self.s(t - i * t_l, t_l - 1, g - i as usize, 0);
        }
        self.memo.insert((t, t_l, g, a), total.clone());
        total
    }

    /// Cover-construction probability by splitting on the row count and the
    /// busiest row group's load directly, without the S_array recursion.
    fn p_cover(&mut self, p: &PatternParams, t: usize) -> Probability {
        let l = p.capability() as i64;
        let mut hits = Count::from(0u32);
        for t_r in 0..=t as i64 {
            if t_r == 0 {
                hits += self.s(t as i64, l, p.mu, 0);
                continue;
            }
            for max_r in 1..=l {
                hits += self.s(t_r, max_r, p.mu, 1) * self.s(t as i64 - t_r, l - max_r, p.mu, 0);
            }
        }
        Probability::new(hits, binomial(2 * p.n, t))
    }
}

#[test]
fn independent_formula_matches_enumeration() {
    let params: Vec<_> = [(9, 3, 2), (9, 3, 3), (8, 4, 3), (6, 3, 3)]
        .into_iter()
        .flat_map(|(n, n_l, rho)| {
            [Mode::Errors, Mode::Erasures].map(|m| PatternParams::new(n, n_l, rho, m).unwrap())
        })
        .collect();
    let c = check_counting(&params, Construction::Cover, |p, t| {
        Ok(PlainS {
            n_l: p.n_l,
            lower_shift: 0,
            memo: HashMap::new(),
        }
        .p_cover(p, t))
    })
    .unwrap();
    assert!(c.passed(), "{:?}", c.counterexample);
}

#[test]
fn off_by_one_lower_bound_is_caught() {
    let params = [PatternParams::new(9, 3, 3, Mode::Erasures).unwrap()];
    let c = check_counting(&params, Construction::Cover, |p, t| {
        Ok(PlainS {
            n_l: p.n_l,
            lower_shift: 1,
            memo: HashMap::new(),
        }
        .p_cover(p, t))
    })
    .unwrap();
    let msg = c.counterexample.expect("mutant must be rejected");
    assert!(msg.contains("t="), "{msg}");
}

#[test]
fn empty_parameter_set_passes() {
    for construction in [Construction::Cover, Construction::Rank] {
        assert!(
            check_counting(&[], construction, exact_p_local(construction))
                .unwrap()
                .passed()
        );
    }
}

#[test]
fn large_instance_counts_are_consistent() {
    // a local pattern has at most μ·(max row load + max column load) <= μ·l lines
    let p = PatternParams::new(255, 15, 8, Mode::Erasures).unwrap();
    let mut counter = Counter::new(15);
    let total: Count = (0..=2 * p.n).map(|t| counter.decodable_cover(&p, t)).sum();
    let cap = p.mu * p.capability();
    let bound: Count = (0..=cap).map(|t| binomial(2 * p.n, t)).sum();
    assert!(total <= bound);
    assert!(counter.decodable_cover(&p, cap) > Count::from(0u32));
    assert_eq!(counter.decodable_cover(&p, cap + 1), Count::from(0u32));
}

fn shape() -> impl Strategy<Value = (usize, usize, usize)> {
    // (r, rho, mu)
    (1usize..4, 1usize..4, 1usize..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn position_map_is_line_balanced((r, rho, mu) in shape()) {
        let n = (r + rho - 1) * mu;
        let profile = LrcProfile::consecutive(n, r, rho).unwrap();
        let map = PositionMap::vdb(&profile);
        prop_assert!(map.is_line_balanced());
        for s in 0..n {
            for p in 0..n {
                let (row, col) = map.cell(s, p);
                prop_assert_eq!(map.coordinate(row, col), (s, p));
            }
        }
    }

    #[test]
    fn p_local_is_monotone_and_cover_dominates(
        (r, rho, mu) in shape(),
        errors in any::<bool>(),
    ) {
        let n_l = r + rho - 1;
        let mode = if errors { Mode::Errors } else { Mode::Erasures };
        let p = PatternParams::new(n_l * mu, n_l, rho, mode).unwrap();
        let mut counter = Counter::new(n_l);
        let mut prev: Option<(Probability, Probability)> = None;
        for t in 0..=2 * p.n {
            let cover = counter.p_local(&p, Construction::Cover, t).unwrap();
            let rank = counter.p_local(&p, Construction::Rank, t).unwrap();
            prop_assert!(cover >= rank, "t={}", t);
            if let Some((pc, pr)) = &prev {
                prop_assert!(&cover <= pc && &rank <= pr, "t={}", t);
            }
            prev = Some((cover, rank));
        }
    }

    #[test]
    fn rank_predicate_implies_cover_predicate(seed in any::<u64>(), t in 0usize..=18) {
        let p = PatternParams::new(9, 3, 3, Mode::Erasures).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lines = sample_pattern(&mut rng, 9, t);
        prop_assert!(!predicate_rank(&lines, &p) || predicate_cover(&lines, &p));
    }

    #[test]
    fn global_erasure_round_trip(seed in any::<u64>(), t in 0usize..=4) {
        let f = Field::new(13, 1).unwrap();
        let code = CoverLrc::tamo_barg(&f, 9, 4, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msg: Vec<Vec<Elem>> = (0..4).map(|_| (0..9).map(|_| f.random(&mut rng)).collect()).collect();
        let word = code.encode(&msg).unwrap();
        let lines = sample_pattern(&mut rng, 9, t);
        let noise = fill_lines(&f, 9, &lines, &mut rng);
        prop_assert_eq!(cover_weight(&noise), t);
        let received = word.add(&noise).unwrap();
        prop_assert_eq!(code.global_erasure_decode(&received, &lines).unwrap(), word);
    }

    #[test]
    fn local_repair_matches_predicate_on_larger_locality(seed in any::<u64>(), t in 0usize..=6) {
        // n = 12 with r = 2, rho = 3: groups of four, capability two
        let f = Field::new(13, 1).unwrap();
        let code = CoverLrc::tamo_barg(&f, 12, 4, 2, 3).unwrap();
        let p = PatternParams::new(12, 4, 3, Mode::Erasures).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lines: LineSet = sample_pattern(&mut rng, 12, t);
        let ok = cover_lrc::simulate::repair_trial(&code, &lines, &mut rng).unwrap();
        prop_assert_eq!(ok, predicate_cover(&lines, &p), "lines {:?}", lines.lines());
    }
}
