//! Monte Carlo estimate of the local-decoding probability.
//!
//! Each trial draws a uniform `t`-subset of the `2n` lines and classifies it
//! with the predicates of [`crate::counting`]. When a code is supplied and the
//! mode is erasures, the trial also erases those lines from a random codeword
//! and runs the local repair, so the predicate can be checked against the
//! decoder's verdict.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counting::{
    format_decimal, predicate_cover, predicate_rank, to_f64, Construction, Counter, Mode,
    PatternParams,
};
use crate::cover_lrc::CoverLrc;
use crate::cover_metric::{cover_weight, ArrayWord, LineSet};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub params: PatternParams,
    pub t_values: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub t: usize,
    pub trial: u64,
    pub pattern: LineSet,
    pub cover: bool,
    pub rank: bool,
    /// Whether local repair restored the codeword, when a decoder ran.
    pub repaired: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    pub hits: u64,
    pub empirical: f64,
    pub exact: String,
    pub sigma: f64,
    /// `|empirical - exact| / σ`; zero when both agree exactly.
    pub deviation: f64,
}

impl Estimate {
    fn new(hits: u64, trials: u64, exact: &crate::counting::Probability) -> Self {
        let p = to_f64(exact);
        let empirical = hits as f64 / trials as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let diff = (empirical - p).abs();
        let deviation = if sigma > 0.0 {
            diff / sigma
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Estimate {
            hits,
            empirical,
            exact: format_decimal(exact, 12),
            sigma,
            deviation,
        }
    }

    pub fn within(&self, sigmas: f64) -> bool {
        self.deviation <= sigmas
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationRow {
    pub t: usize,
    pub trials: u64,
    pub cover: Estimate,
    pub rank: Estimate,
    pub repaired: Option<u64>,
    /// Trials where the predicate and the decoder disagree.
    pub disagreements: u64,
    /// Trials where filling the lines with nonzero symbols did not give
    /// cover weight `t` (checked for `t < n` when a decoder runs).
    pub weight_violations: u64,
}

/// RNG for one trial: ChaCha8 seeded with `seed` xor the trial's running
/// index across all `t` values.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index)
}

/// Uniform `t`-subset of the lines `1..=2n`: the prefix of a partial
/// Fisher–Yates shuffle.
pub fn sample_pattern<R: Rng + ?Sized>(rng: &mut R, n: usize, t: usize) -> LineSet {
    let mut lines: Vec<usize> = (1..=2 * n).collect();
    let (chosen, _) = lines.partial_shuffle(rng, t);
    LineSet::new(chosen.iter().copied())
}

/// An `n × n` word that is nonzero exactly on the given lines.
pub fn fill_lines<R: Rng + ?Sized>(
    field: &Field,
    n: usize,
    lines: &LineSet,
    rng: &mut R,
) -> ArrayWord {
    let mut word = ArrayWord::zeros(field, n, n);
    for r in lines.rows(n) {
        for c in 0..n {
            word.set(r, c, field.random_nonzero(rng));
        }
    }
    for c in lines.cols(n) {
        for r in 0..n {
            word.set(r, c, field.random_nonzero(rng));
        }
    }
    word
}

/// Runs the simulation. `code` enables the decoder check; it must match the
/// pattern parameters and is only used in erasure mode. `on_trial` sees every
/// trial in order.
pub fn simulate<F>(
    cfg: &SimulationConfig,
    code: Option<&CoverLrc>,
    mut on_trial: F,
) -> Result<Vec<SimulationRow>>
where
    F: FnMut(&TrialRecord),
{
    let params = &cfg.params;
    if cfg.trials == 0 {
        return Err(Error::InvalidParameters("trials must be positive".into()));
    }
    if let Some(code) = code {
        let p = code.params();
        if p.n != params.n || p.n_l != params.n_l || p.rho != params.rho {
            return Err(Error::InvalidParameters(
                "code does not match pattern parameters".into(),
            ));
        }
    }
    let decoder = code.filter(|_| params.mode == Mode::Erasures);
    let mut counter = Counter::new(params.n_l);
    let mut rows = Vec::with_capacity(cfg.t_values.len());
    let mut index = 0u64;
    for &t in &cfg.t_values {
        let exact_cover = counter.p_local(params, Construction::Cover, t)?;
        let exact_rank = counter.p_local(params, Construction::Rank, t)?;
        let (mut cover_hits, mut rank_hits, mut repaired_hits) = (0u64, 0u64, 0u64);
        let (mut disagreements, mut weight_violations) = (0u64, 0u64);
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, index);
            index += 1;
            let pattern = sample_pattern(&mut rng, params.n, t);
            let cover = predicate_cover(&pattern, params);
            let rank = predicate_rank(&pattern, params);
            cover_hits += cover as u64;
            rank_hits += rank as u64;
            let repaired = match decoder {
                Some(code) => {
                    let ok = repair_trial(code, &pattern, &mut rng)?;
                    repaired_hits += ok as u64;
                    disagreements += (ok != cover) as u64;
                    if t < params.n {
                        let e = fill_lines(code.field(), params.n, &pattern, &mut rng);
                        weight_violations += (cover_weight(&e) != t) as u64;
                    }
                    Some(ok)
                }
                None => None,
            };
            on_trial(&TrialRecord {
                t,
                trial,
                pattern,
                cover,
                rank,
                repaired,
            });
        }
        rows.push(SimulationRow {
            t,
            trials: cfg.trials,
            cover: Estimate::new(cover_hits, cfg.trials, &exact_cover),
            rank: Estimate::new(rank_hits, cfg.trials, &exact_rank),
            repaired: decoder.map(|_| repaired_hits),
            disagreements,
            weight_violations,
        });
    }
    Ok(rows)
}

/// Erases `pattern` from a random codeword and reports whether local repair
/// gives it back.
pub fn repair_trial<R: Rng + ?Sized>(
    code: &CoverLrc,
    pattern: &LineSet,
    rng: &mut R,
) -> Result<bool> {
    let word = random_codeword(code, rng)?;
    let mut received = word.clone();
    let n = code.n();
    for r in pattern.rows(n) {
        (0..n).for_each(|c| received.set(r, c, Elem::ZERO));
    }
    for c in pattern.cols(n) {
        (0..n).for_each(|r| received.set(r, c, Elem::ZERO));
    }
    Ok(code.local_erasure_repair(&received, pattern)?.repaired() == Some(&word))
}

pub fn random_codeword<R: Rng + ?Sized>(code: &CoverLrc, rng: &mut R) -> Result<ArrayWord> {
    let f = code.field();
    let kp = code.constituent().dimension();
    let messages: Vec<Vec<Elem>> = (0..code.n())
        .map(|_| (0..kp).map(|_| f.random(rng)).collect())
        .collect();
    code.encode_constituents(&messages)
}
