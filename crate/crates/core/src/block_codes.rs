//! Linear block codes in the Hamming metric.
//!
//! [`LinearCode`] is a generator-matrix code with encoding and erasure
//! decoding by linear solve. [`ReedSolomon`] adds bounded-minimum-distance
//! error decoding, and [`TamoBarg`] builds the optimal `(r, ρ)` locally
//! repairable code used as the constituent of the array construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field, FieldDescriptor};
use crate::linalg::{self, Matrix};
use crate::poly;

/// Exhaustive enumeration refuses codes with more codewords than this.
pub const MAX_ENUMERATION: u64 = 10_000_000;

/// A linear `[n, k]` code given by a full-row-rank `k × n` generator matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCode {
    field: Field,
    generator: Matrix,
}

/// A word with erasures: `None` marks an erased coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReceivedWord(pub Vec<Option<Elem>>);

impl ReceivedWord {
    /// Erases the given coordinates of a full word.
    pub fn with_erasures(word: &[Elem], erased: &[usize]) -> Self {
        let mut out: Vec<Option<Elem>> = word.iter().copied().map(Some).collect();
        for &i in erased {
            out[i] = None;
        }
        ReceivedWord(out)
    }

    pub fn erasure_count(&self) -> usize {
        self.0.iter().filter(|s| s.is_none()).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub field: FieldDescriptor,
    pub rows: usize,
    pub cols: usize,
    pub generator: Vec<u32>,
}

impl LinearCode {
    pub fn new(field: Field, generator: Matrix) -> Result<Self> {
        let r = linalg::rank(&field, &generator);
        if r != generator.rows() {
            return Err(Error::InvalidParameters(format!(
                "generator has rank {r} but {} rows",
                generator.rows()
            )));
        }
        Ok(LinearCode { field, generator })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>> {
        if message.len() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                found: message.len(),
            });
        }
        Ok(self.generator.left_mul(&self.field, message))
    }

    /// Recovers the message from the non-erased coordinates.
    ///
    /// Fails with [`Error::Unrecoverable`] when the surviving columns of the
    /// generator have rank below `k`, and with [`Error::NotACodeword`] when the
    /// surviving symbols are inconsistent with every codeword.
    pub fn erasure_decode(&self, word: &ReceivedWord) -> Result<Vec<Elem>> {
        if word.0.len() != self.length() {
            return Err(Error::LengthMismatch {
                expected: self.length(),
                found: word.0.len(),
            });
        }
        let (cols, values): (Vec<usize>, Vec<Elem>) = word
            .0
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|v| (i, v)))
            .unzip();
        let sub = self.generator.select_columns(&cols);
        linalg::solve_left(&self.field, &sub, &values)
    }

    pub fn is_codeword(&self, word: &[Elem]) -> bool {
        let full = ReceivedWord(word.iter().copied().map(Some).collect());
        self.erasure_decode(&full).is_ok()
    }

    /// The code punctured to `coords` (in the given order), with a row basis
    /// as generator.
    pub fn restrict(&self, coords: &[usize]) -> LinearCode {
        let sub = self.generator.select_columns(coords);
        LinearCode {
            field: self.field.clone(),
            generator: linalg::row_basis(&self.field, &sub),
        }
    }

    fn codeword_count(&self) -> Option<u64> {
        (self.field.order() as u64).checked_pow(self.dimension() as u32)
    }

    /// Visits every codeword together with its message. Refuses codes with more
    /// than [`MAX_ENUMERATION`] codewords.
    pub fn for_each_codeword<F: FnMut(&[Elem], &[Elem])>(&self, mut visit: F) -> Result<()> {
        match self.codeword_count() {
            Some(c) if c <= MAX_ENUMERATION => {}
            _ => {
                return Err(Error::TooLarge(format!(
                    "{}^{} codewords",
                    self.field.order(),
                    self.dimension()
                )))
            }
        }
        let f = &self.field;
        let q = f.order();
        let k = self.dimension();
        let mut msg = vec![Elem::ZERO; k];
        let mut cw = vec![Elem::ZERO; self.length()];
        loop {
            visit(&msg, &cw);
            let mut i = 0;
            loop {
                if i == k {
                    return Ok(());
                }
                let old = msg[i];
                let new = Elem((old.0 + 1) % q);
                msg[i] = new;
                let delta = f.sub(new, old);
                for (c, &g) in cw.iter_mut().zip(self.generator.row(i)) {
                    *c = f.add(*c, f.mul(delta, g));
                }
                if new.0 != 0 {
                    break;
                }
                i += 1;
            }
        }
    }

    /// Exact minimum Hamming weight of a nonzero codeword, by enumeration.
    pub fn min_hamming_distance(&self) -> Result<usize> {
        if self.dimension() == 0 {
            return Err(Error::InvalidParameters("zero-dimensional code".into()));
        }
        let mut best = usize::MAX;
        self.for_each_codeword(|msg, cw| {
            if msg.iter().any(|m| !m.is_zero()) {
                best = best.min(hamming_weight(cw));
            }
        })?;
        Ok(best)
    }

    pub fn to_json(&self) -> GeneratorJson {
        GeneratorJson {
            field: self.field.descriptor(),
            rows: self.generator.rows(),
            cols: self.generator.cols(),
            generator: (0..self.generator.rows())
                .flat_map(|r| {
                    self.generator
                        .row(r)
                        .iter()
                        .map(|e| e.0)
                        .collect::<Vec<_>>()
                })
                .collect(),
        }
    }

    pub fn from_json(json: &GeneratorJson) -> Result<Self> {
        let field = Field::from_descriptor(&json.field)?;
        if json.generator.len() != json.rows * json.cols {
            return Err(Error::LengthMismatch {
                expected: json.rows * json.cols,
                found: json.generator.len(),
            });
        }
        let rows = json
            .generator
            .chunks(json.cols.max(1))
            .take(json.rows)
            .map(|r| r.iter().map(|&v| field.elem(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        LinearCode::new(field, Matrix::from_rows(rows)?)
    }
}

pub fn hamming_weight(word: &[Elem]) -> usize {
    word.iter().filter(|c| !c.is_zero()).count()
}

/// Reed–Solomon code: evaluations of polynomials of degree `< k` at `n`
/// distinct points.
#[derive(Clone, Debug)]
pub struct ReedSolomon {
    code: LinearCode,
    points: Vec<Elem>,
    locator: poly::Poly,
}

impl ReedSolomon {
    pub fn new(field: &Field, n: usize, k: usize, points: Vec<Elem>) -> Result<Self> {
        if points.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: points.len(),
            });
        }
        if k == 0 || k > n {
            return Err(Error::InvalidParameters(format!(
                "need 1 <= k <= n, got k={k}, n={n}"
            )));
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidParameters(
                "evaluation points must be distinct".into(),
            ));
        }
        let rows = (0..k)
            .map(|i| points.iter().map(|&x| field.pow(x, i as u64)).collect())
            .collect();
        let code = LinearCode::new(field.clone(), Matrix::from_rows(rows)?)?;
        let locator = poly::from_roots(field, &points);
        Ok(ReedSolomon {
            code,
            points,
            locator,
        })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    /// `n - k + 1`, attained by every Reed–Solomon code.
    pub fn min_distance(&self) -> usize {
        self.code.length() - self.code.dimension() + 1
    }

    /// Message polynomial of the unique codeword within distance
    /// `⌊(d - 1)/2⌋` of `word` (Gao's extended-Euclid decoder).
    pub fn decode_to_poly(&self, word: &[Elem]) -> Result<poly::Poly> {
        let n = self.code.length();
        let k = self.code.dimension();
        if word.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: word.len(),
            });
        }
        let f = self.code.field();
        let interp = poly::interpolate(f, &self.points, word);
        // stop once deg(r) < (n + k) / 2
        let stop = (n + k).div_ceil(2);
        let (mut r0, mut r1) = (self.locator.clone(), interp);
        let (mut v0, mut v1): (poly::Poly, poly::Poly) = (Vec::new(), vec![Elem::ONE]);
        while poly::degree(&r1).is_some_and(|d| d >= stop) {
            let (quot, rem) = poly::div_rem(f, &r0, &r1);
            let v2 = poly::sub(f, &v0, &poly::mul(f, &quot, &v1));
            r0 = std::mem::replace(&mut r1, rem);
            v0 = std::mem::replace(&mut v1, v2);
        }
        let (msg, rem) = poly::div_rem(f, &r1, &v1);
        if poly::degree(&rem).is_some() || poly::degree(&msg).is_some_and(|d| d >= k) {
            return Err(Error::DecodingFailure);
        }
        Ok(msg)
    }

    /// Bounded-minimum-distance error decoding, returning the codeword.
    pub fn decode_errors(&self, word: &[Elem]) -> Result<Vec<Elem>> {
        let msg = self.decode_to_poly(word)?;
        let f = self.code.field();
        let cw: Vec<Elem> = self
            .points
            .iter()
            .map(|&x| poly::eval(f, &msg, x))
            .collect();
        // Gao's decoder only returns results within the radius; double-check.
        let dist = cw.iter().zip(word).filter(|(a, b)| a != b).count();
        if 2 * dist > self.min_distance() - 1 {
            return Err(Error::DecodingFailure);
        }
        Ok(cw)
    }
}

/// Locality profile of a block LRC: the local groups partition `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrcProfile {
    pub locality: usize,
    pub local_distance: usize,
    /// Zero-based coordinates of each group, ascending.
    pub groups: Vec<Vec<usize>>,
}

impl LrcProfile {
    pub fn new(locality: usize, local_distance: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        if locality == 0 || local_distance == 0 {
            return Err(Error::InvalidParameters(
                "r and rho must be positive".into(),
            ));
        }
        let n_l = locality + local_distance - 1;
        let n = n_l * groups.len();
        let mut seen = vec![false; n];
        let mut groups = groups;
        for g in groups.iter_mut() {
            if g.len() != n_l {
                return Err(Error::InvalidParameters(format!(
                    "local group of size {} but n_l = {n_l}",
                    g.len()
                )));
            }
            g.sort_unstable();
            for &c in g.iter() {
                if c >= n || seen[c] {
                    return Err(Error::InvalidParameters("groups must partition [n]".into()));
                }
                seen[c] = true;
            }
        }
        Ok(LrcProfile {
            locality,
            local_distance,
            groups,
        })
    }

    /// Consecutive groups `{0..n_l}, {n_l..2n_l}, ...`.
    pub fn consecutive(n: usize, locality: usize, local_distance: usize) -> Result<Self> {
        let n_l = locality + local_distance - 1;
        if n_l == 0 || !n.is_multiple_of(n_l) {
            return Err(Error::InvalidParameters(format!(
                "n_l = {n_l} must divide n = {n}"
            )));
        }
        let groups = (0..n / n_l)
            .map(|j| (j * n_l..(j + 1) * n_l).collect())
            .collect();
        Self::new(locality, local_distance, groups)
    }

    pub fn group_len(&self) -> usize {
        self.locality + self.local_distance - 1
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn length(&self) -> usize {
        self.group_len() * self.group_count()
    }

    /// Checks by enumeration that every local restriction has distance `>= ρ`.
    pub fn verify(&self, code: &LinearCode) -> Result<bool> {
        for g in &self.groups {
            let local = code.restrict(g);
            if local.dimension() == 0 {
                continue;
            }
            if local.min_hamming_distance()? < self.local_distance {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `n - k + 1 - (⌈k/r⌉ - 1)(ρ - 1)`, the Singleton-like bound for Hamming-metric
/// LRCs.
pub fn lrc_singleton_bound(n: usize, k: usize, r: usize, rho: usize) -> Result<i64> {
    if !(1 <= r && r <= k && k <= n) || rho == 0 {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= r <= k <= n and rho >= 1, got n={n} k={k} r={r} rho={rho}"
        )));
    }
    let groups = k.div_ceil(r) as i64;
    Ok(n as i64 - k as i64 + 1 - (groups - 1) * (rho as i64 - 1))
}

/// Tamo–Barg optimal LRC: evaluations of `Σ_i Σ_j a_ij x^{j·n_l + i}`
/// (`i < r`, `j < k/r`) on `μ` cosets of the order-`n_l` multiplicative
/// subgroup. `x^{n_l}` is constant on each coset, so the restriction to a
/// coset is a Reed–Solomon code of dimension `r` and length `n_l`.
#[derive(Clone, Debug)]
pub struct TamoBarg {
    code: LinearCode,
    profile: LrcProfile,
    supercode: ReedSolomon,
    degrees: Vec<usize>,
}

impl TamoBarg {
    /// Smallest field holding `n / n_l` cosets of a multiplicative subgroup of
    /// order `n_l`: the least prime power `q > n` with `n_l | q - 1`.
    pub fn smallest_field(n: usize, n_l: usize) -> Result<Field> {
        if n_l == 0 || !n.is_multiple_of(n_l) {
            return Err(Error::InvalidParameters(format!(
                "n_l = {n_l} does not divide n = {n}"
            )));
        }
        for q in (n as u64 + 1)..=crate::gf::MAX_ORDER {
            if (q - 1) % n_l as u64 != 0 {
                continue;
            }
            if let [p] = crate::gf::prime_factors(q)[..] {
                let m = (1..).find(|&m| p.pow(m) == q).expect("q is a power of p");
                return Field::new(p as u32, m);
            }
        }
        Err(Error::TooLarge(format!("no supported field for n = {n}")))
    }

    pub fn new(field: &Field, n: usize, k: usize, r: usize, rho: usize) -> Result<Self> {
        if r == 0 || rho == 0 || k == 0 {
            return Err(Error::InvalidParameters(
                "k, r and rho must be positive".into(),
            ));
        }
        let n_l = r + rho - 1;
        if !n.is_multiple_of(n_l) {
            return Err(Error::InvalidParameters(format!(
                "n_l = {n_l} does not divide n = {n}"
            )));
        }
        if !k.is_multiple_of(r) {
            return Err(Error::InvalidParameters(format!(
                "r = {r} does not divide k = {k}"
            )));
        }
        let mu = n / n_l;
        if k / r > mu {
            return Err(Error::InvalidParameters(format!(
                "k/r = {} exceeds the number of local groups {mu}",
                k / r
            )));
        }
        let q = field.order() as usize;
        if !(q - 1).is_multiple_of(n_l) || mu * n_l > q - 1 {
            return Err(Error::InvalidParameters(format!(
                "GF({q}) has no {mu} cosets of a subgroup of order {n_l}"
            )));
        }
        let g = field.primitive_element()?;
        let h = field.pow(g, ((q - 1) / n_l) as u64);
        let mut points = Vec::with_capacity(n);
        for j in 0..mu {
            let rep = field.pow(g, j as u64);
            let mut coset: Vec<Elem> = (0..n_l)
                .map(|v| field.mul(rep, field.pow(h, v as u64)))
                .collect();
            coset.sort_unstable();
            points.extend(coset);
        }
        let degrees: Vec<usize> = (0..k / r)
            .flat_map(|j| (0..r).map(move |i| j * n_l + i))
            .collect();
        let rows = degrees
            .iter()
            .map(|&d| points.iter().map(|&x| field.pow(x, d as u64)).collect())
            .collect();
        let code = LinearCode::new(field.clone(), Matrix::from_rows(rows)?)?;
        let profile = LrcProfile::consecutive(n, r, rho)?;
        let max_degree = *degrees.last().expect("k >= 1");
        let supercode = ReedSolomon::new(field, n, max_degree + 1, points)?;
        Ok(TamoBarg {
            code,
            profile,
            supercode,
            degrees,
        })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn profile(&self) -> &LrcProfile {
        &self.profile
    }

    pub fn points(&self) -> &[Elem] {
        self.supercode.points()
    }

    /// Reed–Solomon code over the same points containing this code, with the
    /// same minimum distance.
    pub fn supercode(&self) -> &ReedSolomon {
        &self.supercode
    }

    /// Minimum distance implied by the highest monomial degree; equals the
    /// LRC Singleton-like bound.
    pub fn designed_distance(&self) -> usize {
        self.supercode.min_distance()
    }

    pub fn monomial_degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// BMD error decoding through the Reed–Solomon supercode; the result is
    /// rejected unless it lies in this code. Returns the message.
    pub fn decode_errors(&self, word: &[Elem]) -> Result<Vec<Elem>> {
        let p = self.supercode.decode_to_poly(word)?;
        let coeff = |d: usize| p.get(d).copied().unwrap_or(Elem::ZERO);
        let allowed: std::collections::HashSet<usize> = self.degrees.iter().copied().collect();
        if (0..p.len()).any(|d| !allowed.contains(&d) && !coeff(d).is_zero()) {
            return Err(Error::DecodingFailure);
        }
        let cw: Vec<Elem> = self
            .points()
            .iter()
            .map(|&x| poly::eval(self.code.field(), &p, x))
            .collect();
        let dist = cw.iter().zip(word).filter(|(a, b)| a != b).count();
        if 2 * dist > self.designed_distance() - 1 {
            return Err(Error::DecodingFailure);
        }
        Ok(self.degrees.iter().map(|&d| coeff(d)).collect())
    }
}
