//! Cross-checks of the fast implementations against slow oracles.
//!
//! Each check reports how many cases it ran and the first counterexample it
//! found, if any.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::counting::{
    combinations, format_decimal, oracle_enumerate, predicate, Construction, Counter, Mode,
    PatternParams, Probability, ORACLE_LIMIT,
};
use crate::cover_lrc::CoverLrc;
use crate::cover_metric::{brute_force_cover_weight, cover_weight, ArrayWord, LineSet};
use crate::error::Result;
use crate::gf::{Elem, Field};
use crate::simulate::repair_trial;

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: u64,
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    fn new(name: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            cases: 0,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

/// Matching-based cover weight against subset enumeration on every
/// `rows × cols` binary matrix.
pub fn check_cover_weight_binary(rows: usize, cols: usize) -> Result<CheckOutcome> {
    let f = Field::new(2, 1)?;
    let mut out = CheckOutcome::new(format!("cover weight, all binary {rows}x{cols}"));
    for bits in 0u64..1 << (rows * cols) {
        let mut e = ArrayWord::zeros(&f, rows, cols);
        for i in 0..rows * cols {
            if bits >> i & 1 == 1 {
                e.set(i / cols, i % cols, Elem::ONE);
            }
        }
        out.cases += 1;
        if let Some(msg) = weight_mismatch(&e)? {
            out.counterexample = Some(msg);
            break;
        }
    }
    Ok(out)
}

/// Same comparison on random matrices, each cell nonzero with probability
/// one half.
pub fn check_cover_weight_random(
    field: &Field,
    rows: usize,
    cols: usize,
    samples: u64,
    seed: u64,
) -> Result<CheckOutcome> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CheckOutcome::new(format!(
        "cover weight, {samples} random {rows}x{cols} over GF({})",
        field.order()
    ));
    for _ in 0..samples {
        let mut e = ArrayWord::zeros(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(0.5) {
                    e.set(r, c, field.random_nonzero(&mut rng));
                }
            }
        }
        out.cases += 1;
        if let Some(msg) = weight_mismatch(&e)? {
            out.counterexample = Some(msg);
            break;
        }
    }
    Ok(out)
}

fn weight_mismatch(e: &ArrayWord) -> Result<Option<String>> {
    let fast = cover_weight(e);
    let slow = brute_force_cover_weight(e)?;
    Ok((fast != slow).then(|| format!("{:?}: matching {fast}, enumeration {slow}", e.to_grid())))
}

/// Compares `p_local` with pattern enumeration for every `t` whose pattern
/// count fits the oracle.
pub fn check_counting<F>(
    params: &[PatternParams],
    construction: Construction,
    mut p_local: F,
) -> Result<CheckOutcome>
where
    F: FnMut(&PatternParams, usize) -> Result<Probability>,
{
    let mut out = CheckOutcome::new(format!("p_local {construction:?} vs enumeration"));
    let accept = predicate(construction);
    for p in params {
        for t in 0..=2 * p.n {
            if crate::counting::binomial(2 * p.n, t) > ORACLE_LIMIT.into() {
                continue;
            }
            let formula = p_local(p, t)?;
            let oracle = oracle_enumerate(p, t, accept)?;
            out.cases += 1;
            if formula != oracle {
                out.counterexample = Some(format!(
                    "n={} n_l={} rho={} mode={} t={t}: formula {} ({}), enumeration {} ({})",
                    p.n,
                    p.n_l,
                    p.rho,
                    p.mode.as_str(),
                    formula,
                    format_decimal(&formula, 12),
                    oracle,
                    format_decimal(&oracle, 12),
                ));
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// The exact formula through a fresh [`Counter`].
pub fn exact_p_local(
    construction: Construction,
) -> impl FnMut(&PatternParams, usize) -> Result<Probability> {
    move |p, t| Counter::new(p.n_l).p_local(p, construction, t)
}

/// Erases every pattern of at most `t_max` lines from a random codeword and
/// checks that local repair succeeds exactly when the cover predicate holds.
pub fn check_local_repair(code: &CoverLrc, t_max: usize, seed: u64) -> Result<CheckOutcome> {
    let cp = code.params();
    let params = PatternParams::new(cp.n, cp.n_l, cp.rho, Mode::Erasures)?;
    let accept = predicate(Construction::Cover);
    let mut out = CheckOutcome::new(format!("local repair vs predicate, n={} t<={t_max}", cp.n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..=t_max.min(2 * cp.n) {
        for subset in combinations(2 * cp.n, t) {
            let pattern = LineSet::new(subset.into_iter().map(|i| i + 1));
            let expected = accept(&pattern, &params);
            let repaired = repair_trial(code, &pattern, &mut rng)?;
            out.cases += 1;
            if expected != repaired {
                out.counterexample = Some(format!(
                    "lines {:?}: predicate {expected}, local repair {repaired}",
                    pattern.lines()
                ));
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// The default suite: cover weight, counting for both constructions and
/// modes on the given parameter sets, and local repair on `code`.
pub fn standard_suite(
    params: &[PatternParams],
    code: Option<&CoverLrc>,
    repair_t_max: usize,
    seed: u64,
) -> Result<Report> {
    let mut report = Report::default();
    report.checks.push(check_cover_weight_binary(3, 4)?);
    report.checks.push(check_cover_weight_random(
        &Field::new(2, 2)?,
        5,
        5,
        2000,
        seed,
    )?);
    for construction in [Construction::Cover, Construction::Rank] {
        report.checks.push(check_counting(
            params,
            construction,
            exact_p_local(construction),
        )?);
    }
    if let Some(code) = code {
        report
            .checks
            .push(check_local_repair(code, repair_t_max, seed)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_parameter_list_passes_trivially() {
        let c =
            check_counting(&[], Construction::Cover, exact_p_local(Construction::Cover)).unwrap();
        assert!(c.passed());
        assert_eq!(c.cases, 0);
    }

    #[test]
    fn wrong_formula_is_caught_with_its_t() {
        let p = PatternParams::new(9, 3, 3, Mode::Erasures).unwrap();
        let mut exact = exact_p_local(Construction::Cover);
        let c = check_counting(&[p], Construction::Cover, |p, t| {
            let v = exact(p, t)?;
            Ok(if t == 3 {
                v / Probability::from_integer(2u32.into())
            } else {
                v
            })
        })
        .unwrap();
        assert!(!c.passed());
        assert!(c.counterexample.unwrap().contains("t=3"));
    }

    #[test]
    fn small_suite_passes() {
        let f = Field::new(13, 1).unwrap();
        let code = CoverLrc::tamo_barg(&f, 9, 4, 2, 2).unwrap();
        let params = [PatternParams::new(6, 3, 2, Mode::Erasures).unwrap()];
        let report = standard_suite(&params, Some(&code), 3, 5).unwrap();
        for c in &report.checks {
            assert!(c.passed(), "{c:?}");
        }
    }
}
