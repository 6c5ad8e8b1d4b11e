//! Exact counts of locally decodable crisscross patterns.
//!
//! A pattern is a set of `t` corrupted lines of an `n × n` array whose rows
//! and columns are each split into `μ` groups of `n_l` consecutive lines.
//! For the cover construction a pattern is locally decodable when the busiest
//! row group plus the busiest column group carry at most `l` lines, where `l`
//! is the local capability (`ρ - 1` for erasures, `⌊(ρ - 1)/2⌋` for errors).
//! For the rank-metric construction rows have no locality, so all corrupted
//! rows count against every column group.
//!
//! Everything here is exact: counts are [`BigUint`] and probabilities are
//! reduced fractions.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cover_metric::LineSet;
use crate::error::{Error, Result};

pub type Count = BigUint;
pub type Probability = Ratio<BigUint>;

/// Largest number of patterns [`oracle_enumerate`] will visit.
pub const ORACLE_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Errors,
    Erasures,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Errors => "errors",
            Mode::Erasures => "erasures",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Cover,
    Rank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternParams {
    pub n: usize,
    pub n_l: usize,
    pub mu: usize,
    pub rho: usize,
    pub mode: Mode,
}

impl PatternParams {
    pub fn new(n: usize, n_l: usize, rho: usize, mode: Mode) -> Result<Self> {
        if n_l == 0 || !n.is_multiple_of(n_l) {
            return Err(Error::InvalidParameters(format!(
                "n_l = {n_l} must divide n = {n}"
            )));
        }
        if rho == 0 {
            return Err(Error::InvalidParameters("rho must be positive".into()));
        }
        Ok(PatternParams {
            n,
            n_l,
            mu: n / n_l,
            rho,
            mode,
        })
    }

    /// Lines each local code can handle.
    pub fn capability(&self) -> usize {
        match self.mode {
            Mode::Erasures => self.rho - 1,
            Mode::Errors => (self.rho - 1) / 2,
        }
    }

    /// Per-group loads `(rows, columns)` of a pattern.
    pub fn group_loads(&self, pattern: &LineSet) -> (Vec<usize>, Vec<usize>) {
        let mut rows = vec![0; self.mu];
        let mut cols = vec![0; self.mu];
        for &line in pattern.lines() {
            if line <= self.n {
                rows[(line - 1) / self.n_l] += 1;
            } else {
                cols[(line - self.n - 1) / self.n_l] += 1;
            }
        }
        (rows, cols)
    }
}

pub fn binomial(n: usize, k: usize) -> Count {
    if k > n {
        return Count::zero();
    }
    let k = k.min(n - k);
    let mut acc = Count::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Memoized evaluator of the two counting recursions for a fixed group size
/// `n_l`. Each instance owns its memo tables, so separate workers can run
/// independent counters.
#[derive(Debug, Default)]
pub struct Counter {
    n_l: usize,
    s_memo: HashMap<(i64, i64, usize, usize), Count>,
    array_memo: HashMap<(i64, i64, i64, i64, usize), Count>,
    binom_memo: HashMap<(usize, usize), Count>,
}

impl Counter {
    pub fn new(n_l: usize) -> Self {
        Counter {
            n_l,
            ..Default::default()
        }
    }

    pub fn group_len(&self) -> usize {
        self.n_l
    }

    fn binom(&mut self, n: usize, k: usize) -> Count {
        self.binom_memo
            .entry((n, k))
            .or_insert_with(|| binomial(n, k))
            .clone()
    }

    /// Number of ways to pick `t` lines from `g` groups of `n_l` so that each
    /// group holds at most `t_l` and at least `a` groups hold exactly `t_l`.
    ///
    /// Negative `t` counts nothing; `t_l <= 0` with `t > 0` counts nothing.
    pub fn s(&mut self, t: i64, t_l: i64, g: usize, a: usize) -> Count {
        if t < 0 {
            return Count::zero();
        }
        if t == 0 {
            return Count::one();
        }
        if t_l <= 0 {
            return Count::zero();
        }
        let key = (t, t_l, g, a);
        if let Some(v) = self.s_memo.get(&key) {
            return v.clone();
        }
        let lo = (a as i64).max(t - g as i64 * (t_l - 1));
        let hi = (g as i64).min(t / t_l);
        let per_group = self.binom(self.n_l, t_l as usize);
        let mut total = Count::zero();
        for i in lo.max(0)..=hi {
            let i_u = i as usize;
            let rest = self.s(t - i * t_l, t_l - 1, g - i_u, 0);
            if rest.is_zero() {
                continue;
            }
            total += self.binom(g, i_u) * num_traits::pow(per_group.clone(), i_u) * rest;
        }
        self.s_memo.insert(key, total.clone());
        total
    }

    /// Number of patterns with `t` lines, `t_r` of them rows, whose busiest row
    /// group holds at most `l_r` rows and whose busiest row and column groups
    /// together hold at most `l` lines.
    pub fn s_array(&mut self, t: i64, l: i64, t_r: i64, l_r: i64, g: usize) -> Count {
        let key = (t, l, t_r, l_r, g);
        if let Some(v) = self.array_memo.get(&key) {
            return v.clone();
        }
        let value = if t_r == 0 {
            self.s(t, l, g, 0)
        } else if 0 < t_r && t_r <= l_r {
            // all rows in one group, then rows spread with max load < t_r
            let one_group = self.binom(g, 1) * self.binom(self.n_l, t_r as usize);
            one_group * self.s(t - t_r, l - t_r, g, 0) + self.s_array(t, l, t_r, t_r - 1, g)
        } else if l_r < t_r && t_r <= g as i64 * l_r {
            // busiest row group holds exactly l_r
            self.s(t_r, l_r, g, 1) * self.s(t - t_r, l - l_r, g, 0)
                + self.s_array(t, l, t_r, l_r - 1, g)
        } else {
            Count::zero()
        };
        self.array_memo.insert(key, value.clone());
        value
    }

    /// Locally decodable patterns of `t` lines for the cover construction.
    pub fn decodable_cover(&mut self, params: &PatternParams, t: usize) -> Count {
        let l = params.capability() as i64;
        (0..=t as i64)
            .map(|t_r| self.s_array(t as i64, l, t_r, l, params.mu))
            .sum()
    }

    /// Locally decodable patterns of `t` lines for the rank-metric
    /// construction: up to `l` rows anywhere, columns counted per group.
    pub fn decodable_rank(&mut self, params: &PatternParams, t: usize) -> Count {
        let l = params.capability();
        (0..=l.min(t))
            .map(|t_r| {
                binomial(params.n, t_r) * self.s((t - t_r) as i64, (l - t_r) as i64, params.mu, 0)
            })
            .sum()
    }

    pub fn p_local(
        &mut self,
        params: &PatternParams,
        construction: Construction,
        t: usize,
    ) -> Result<Probability> {
        let total = binomial(2 * params.n, t);
        if total.is_zero() {
            return Err(Error::InvalidParameters(format!(
                "t = {t} exceeds 2n = {}",
                2 * params.n
            )));
        }
        let hits = match construction {
            Construction::Cover => self.decodable_cover(params, t),
            Construction::Rank => self.decodable_rank(params, t),
        };
        Ok(Probability::new(hits, total))
    }
}

pub fn count_s(t: i64, t_l: i64, g: usize, a: usize, n_l: usize) -> Count {
    Counter::new(n_l).s(t, t_l, g, a)
}

pub fn count_s_array(t: i64, l: i64, t_r: i64, l_r: i64, g: usize, n_l: usize) -> Count {
    Counter::new(n_l).s_array(t, l, t_r, l_r, g)
}

/// Probability that `t` uniformly chosen lines are locally decodable by the
/// cover construction.
pub fn p_local_cover(params: &PatternParams, t: usize) -> Result<Probability> {
    Counter::new(params.n_l).p_local(params, Construction::Cover, t)
}

/// Same for the rank-metric construction with column-only locality.
pub fn p_local_rank(params: &PatternParams, t: usize) -> Result<Probability> {
    Counter::new(params.n_l).p_local(params, Construction::Rank, t)
}

pub fn predicate_cover(pattern: &LineSet, params: &PatternParams) -> bool {
    let (rows, cols) = params.group_loads(pattern);
    let max_r = rows.into_iter().max().unwrap_or(0);
    let max_c = cols.into_iter().max().unwrap_or(0);
    max_r + max_c <= params.capability()
}

pub fn predicate_rank(pattern: &LineSet, params: &PatternParams) -> bool {
    let (rows, cols) = params.group_loads(pattern);
    let t_r: usize = rows.into_iter().sum();
    let max_c = cols.into_iter().max().unwrap_or(0);
    t_r + max_c <= params.capability()
}

pub fn predicate(construction: Construction) -> fn(&LineSet, &PatternParams) -> bool {
    match construction {
        Construction::Cover => predicate_cover,
        Construction::Rank => predicate_rank,
    }
}

/// Fraction of all `t`-subsets of the `2n` lines accepted by `accept`.
pub fn oracle_enumerate<P>(params: &PatternParams, t: usize, accept: P) -> Result<Probability>
where
    P: Fn(&LineSet, &PatternParams) -> bool,
{
    let lines = 2 * params.n;
    let total = binomial(lines, t);
    if total.is_zero() {
        return Err(Error::InvalidParameters(format!(
            "t = {t} exceeds 2n = {lines}"
        )));
    }
    if total > Count::from(ORACLE_LIMIT) {
        return Err(Error::TooLarge(format!("C({lines}, {t}) patterns")));
    }
    let mut hits = 0u64;
    for subset in combinations(lines, t) {
        let pattern = LineSet::new(subset.into_iter().map(|i| i + 1));
        if accept(&pattern, params) {
            hits += 1;
        }
    }
    Ok(Probability::new(Count::from(hits), total))
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (size <= n).then(|| (0..size).collect());
    std::iter::from_fn(move || {
        let out = current.take()?;
        let mut next = out.clone();
        let mut i = size;
        while i > 0 {
            i -= 1;
            if next[i] < n - size + i {
                next[i] += 1;
                for j in i + 1..size {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Renders `x` with `sig` significant digits, rounding half up, in plain
/// positional notation with trailing zeros removed.
pub fn format_decimal(x: &Probability, sig: usize) -> String {
    let (num, den) = (x.numer(), x.denom());
    if num.is_zero() {
        return "0".into();
    }
    let ten = Count::from(10u32);
    let digits = |v: &Count| v.to_str_radix(10).len() as i64;
    // exponent e with 10^e <= x < 10^(e+1)
    let mut e = digits(num) - digits(den);
    let scaled_cmp = |e: i64| -> bool {
        // x >= 10^e ?
        if e >= 0 {
            num >= &(den * num_traits::pow(ten.clone(), e as usize))
        } else {
            num * num_traits::pow(ten.clone(), (-e) as usize) >= *den
        }
    };
    if !scaled_cmp(e) {
        e -= 1;
    }
    let shift = sig as i64 - 1 - e;
    let (n2, d2) = if shift >= 0 {
        (
            num * num_traits::pow(ten.clone(), shift as usize),
            den.clone(),
        )
    } else {
        (
            num.clone(),
            den * num_traits::pow(ten.clone(), (-shift) as usize),
        )
    };
    let (q, r) = n2.div_rem(&d2);
    let mut mant = if r * 2u32 >= d2 { q + 1u32 } else { q };
    if mant == num_traits::pow(ten.clone(), sig) {
        mant /= 10u32;
        e += 1;
    }
    let s = mant.to_str_radix(10);
    let mut out = if e >= 0 {
        let int_len = e as usize + 1;
        if int_len >= s.len() {
            format!("{}{}", s, "0".repeat(int_len - s.len()))
        } else {
            format!("{}.{}", &s[..int_len], &s[int_len..])
        }
    } else {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), s)
    };
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

pub fn to_f64(x: &Probability) -> f64 {
    let (n, d) = (x.numer(), x.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if b.is_finite() && a.is_finite() => a / b,
        _ => format_decimal(x, 17).parse().unwrap_or(f64::NAN),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n9(mode: Mode) -> PatternParams {
        PatternParams::new(9, 3, 2, mode).unwrap()
    }

    /// Counts `t`-subsets of `g·n_l` lines with every group load `<= t_l` and at
    /// least `a` groups at exactly `t_l`, by enumeration.
    fn brute_s(t: usize, t_l: usize, g: usize, a: usize, n_l: usize) -> u64 {
        combinations(g * n_l, t)
            .filter(|c| {
                let mut loads = vec![0; g];
                c.iter().for_each(|&x| loads[x / n_l] += 1);
                loads.iter().all(|&x| x <= t_l) && loads.iter().filter(|&&x| x == t_l).count() >= a
            })
            .count() as u64
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Count::from(10u32));
        assert_eq!(binomial(7, 0), Count::one());
        assert_eq!(binomial(3, 5), Count::zero());
        assert_eq!(binomial(510, 1), Count::from(510u32));
        // C(510, 26) by the additive recurrence, independent of the product formula
        let mut row = vec![Count::one()];
        for _ in 0..510 {
            let mut next = vec![Count::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        assert_eq!(binomial(510, 26), row[26]);
    }

    #[test]
    fn s_base_cases_and_small_values() {
        assert_eq!(count_s(0, 4, 7, 0, 3), Count::one());
        assert_eq!(count_s(3, 0, 5, 0, 3), Count::zero());
        assert_eq!(count_s(2, 1, 3, 0, 3), Count::from(27u32));
    }

    #[test]
    fn s_matches_enumeration() {
        for n_l in 1..=4 {
            for g in 1..=3 {
                for t_l in 0..=n_l {
                    for a in 0..=2 {
                        for t in 0..=g * n_l {
                            if a > 0 && t == 0 {
                                continue; // the t = 0 base case ignores a
                            }
                            assert_eq!(
                                count_s(t as i64, t_l as i64, g, a, n_l),
                                Count::from(brute_s(t, t_l, g, a, n_l)),
                                "t={t} t_l={t_l} g={g} a={a} n_l={n_l}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn s_array_examples() {
        // t_r = 0 reduces to S
        assert_eq!(count_s_array(4, 2, 0, 2, 3, 3), count_s(4, 2, 3, 0, 3));
        // one row and one column never fit a capability of one
        assert_eq!(count_s_array(2, 1, 1, 1, 3, 3), Count::zero());
        // more rows than g·l_r can hold
        assert_eq!(count_s_array(8, 2, 7, 2, 3, 3), Count::zero());
    }

    #[test]
    fn predicate_examples() {
        let p = n9(Mode::Erasures);
        let cols_3_8 = LineSet::new([9 + 3, 9 + 8]);
        assert!(predicate_cover(&cols_3_8, &p));
        assert!(predicate_rank(&cols_3_8, &p));
        let rows_3_6 = LineSet::new([3, 6]);
        assert!(predicate_cover(&rows_3_6, &p));
        assert!(!predicate_rank(&rows_3_6, &p));
        let row_and_col = LineSet::new([1, 10]);
        assert!(!predicate_cover(&row_and_col, &p));
        assert!(predicate_rank(&LineSet::default(), &p));
    }

    #[test]
    fn probabilities_match_oracle_n9() {
        for mode in [Mode::Errors, Mode::Erasures] {
            let p = n9(mode);
            for t in 0..=18 {
                assert_eq!(
                    p_local_cover(&p, t).unwrap(),
                    oracle_enumerate(&p, t, predicate_cover).unwrap(),
                    "cover {mode:?} t={t}"
                );
                assert_eq!(
                    p_local_rank(&p, t).unwrap(),
                    oracle_enumerate(&p, t, predicate_rank).unwrap(),
                    "rank {mode:?} t={t}"
                );
            }
        }
    }

    #[test]
    fn probabilities_match_oracle_other_shapes() {
        for (n, n_l, rho) in [(8, 4, 3), (8, 2, 2), (6, 3, 4), (12, 4, 5), (10, 5, 3)] {
            for mode in [Mode::Errors, Mode::Erasures] {
                let p = PatternParams::new(n, n_l, rho, mode).unwrap();
                for t in 0..=2 * n {
                    if binomial(2 * n, t) > Count::from(300_000u32) {
                        continue;
                    }
                    assert_eq!(
                        p_local_cover(&p, t).unwrap(),
                        oracle_enumerate(&p, t, predicate_cover).unwrap(),
                        "cover n={n} n_l={n_l} rho={rho} {mode:?} t={t}"
                    );
                    assert_eq!(
                        p_local_rank(&p, t).unwrap(),
                        oracle_enumerate(&p, t, predicate_rank).unwrap(),
                        "rank n={n} n_l={n_l} rho={rho} {mode:?} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn boundary_values() {
        let p = n9(Mode::Erasures);
        assert_eq!(p_local_cover(&p, 0).unwrap(), Probability::one());
        assert_eq!(p_local_cover(&p, 1).unwrap(), Probability::one());
        assert_eq!(p_local_rank(&p, 0).unwrap(), Probability::one());
        assert!(p_local_cover(&p, 19).is_err());
        assert!(oracle_enumerate(&p, 19, predicate_cover).is_err());
        // more than μ·l columns and no rows cannot be local
        assert_eq!(p_local_cover(&p, 4).unwrap(), Probability::zero());
    }

    #[test]
    fn oracle_refuses_large() {
        let p = PatternParams::new(255, 15, 8, Mode::Errors).unwrap();
        assert!(matches!(
            oracle_enumerate(&p, 5, predicate_cover),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn decimal_rendering() {
        let r = |a: u64, b: u64| Probability::new(Count::from(a), Count::from(b));
        assert_eq!(format_decimal(&r(1, 1), 12), "1");
        assert_eq!(format_decimal(&r(0, 5), 12), "0");
        assert_eq!(format_decimal(&r(1, 3), 12), "0.333333333333");
        assert_eq!(format_decimal(&r(2, 3), 12), "0.666666666667");
        assert_eq!(format_decimal(&r(1, 8), 12), "0.125");
        assert_eq!(format_decimal(&r(1, 3000), 4), "0.0003333");
        assert_eq!(format_decimal(&r(999_999, 1_000_000), 3), "1");
        assert_eq!(format_decimal(&r(5, 2), 12), "2.5");
    }
}
