//! Cover-metric LRC built by the modified vector-diagonal map.
//!
//! `n` codewords of a constituent block LRC with local groups `S_1..S_μ` are
//! arranged on an `n × n` array: codewords are split into `μ` consecutive
//! batches `T_i` of `n_l`, each batch restricted to each group `S_j` is put on
//! the wrapped diagonals of an `n_l × n_l` block (inner vd), and the `μ × μ`
//! grid of blocks is itself laid out diagonally (outer vd). Every row and
//! every column of the array then meets each constituent codeword exactly
//! once, and every `n_l × n_l` block holds `n_l` local codewords on its
//! diagonals.
//!
//! Indices in this module are zero-based unless stated otherwise; line sets
//! keep the one-based convention of [`crate::cover_metric`].

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::block_codes::{lrc_singleton_bound, LinearCode, LrcProfile, ReceivedWord, TamoBarg};
use crate::counting::combinations;
use crate::cover_metric::{ArrayWord, LineSet};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg;

/// Vector-diagonal map: coordinate `j` of vector `i` goes to row
/// `(i + j) mod n`, column `j`. Rows on the unused diagonals stay zero.
pub fn vd(field: &Field, vectors: &[Vec<Elem>], n: usize) -> Result<ArrayWord> {
    if vectors.is_empty() || vectors.len() > n {
        return Err(Error::InvalidParameters(format!(
            "vd takes 1..={n} vectors, got {}",
            vectors.len()
        )));
    }
    let mut out = ArrayWord::zeros(field, n, n);
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: v.len(),
            });
        }
        for (j, &x) in v.iter().enumerate() {
            out.set((i + j) % n, j, x);
        }
    }
    Ok(out)
}

/// Modified vector-diagonal map, evaluated literally as `μ²` inner vd maps
/// followed by an outer vd over the block grid.
pub fn vdb(field: &Field, vectors: &[Vec<Elem>], profile: &LrcProfile) -> Result<ArrayWord> {
    let n = profile.length();
    let n_l = profile.group_len();
    let mu = profile.group_count();
    if vectors.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: vectors.len(),
        });
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let mut out = ArrayWord::zeros(field, n, n);
    for i in 0..mu {
        let batch = &vectors[i * n_l..(i + 1) * n_l];
        for (j, group) in profile.groups.iter().enumerate() {
            let restricted: Vec<Vec<Elem>> = batch
                .iter()
                .map(|c| group.iter().map(|&p| c[p]).collect())
                .collect();
            let block = vd(field, &restricted, n_l)?;
            // outer vd: block (i, j) lands in block row (i + j) mod μ, block column j
            let (br, bc) = ((i + j) % mu, j);
            for r in 0..n_l {
                for c in 0..n_l {
                    out.set(br * n_l + r, bc * n_l + c, block.get(r, c));
                }
            }
        }
    }
    Ok(out)
}

/// Bijection between constituent coordinates `(s, p)` and array cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionMap {
    n: usize,
    forward: Vec<(usize, usize)>,
    inverse: Vec<(usize, usize)>,
}

impl PositionMap {
    /// Closed-form cell map of [`vdb`].
    pub fn vdb(profile: &LrcProfile) -> Self {
        let n = profile.length();
        let n_l = profile.group_len();
        let mu = profile.group_count();
        let mut forward = vec![(0, 0); n * n];
        for (j, group) in profile.groups.iter().enumerate() {
            for (v, &p) in group.iter().enumerate() {
                for s in 0..n {
                    let (i, u) = (s / n_l, s % n_l);
                    let block_row = (i + j) % mu;
                    forward[s * n + p] = (block_row * n_l + (u + v) % n_l, j * n_l + v);
                }
            }
        }
        Self::from_forward(n, forward).expect("vdb is a bijection")
    }

    /// Codeword `s` written as row `s`, with no diagonal rearrangement. This
    /// layout lacks row locality and serves as a negative control.
    pub fn rows_direct(n: usize) -> Self {
        let forward = (0..n).flat_map(|s| (0..n).map(move |p| (s, p))).collect();
        Self::from_forward(n, forward).expect("identity layout")
    }

    pub fn from_forward(n: usize, forward: Vec<(usize, usize)>) -> Result<Self> {
        if forward.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                found: forward.len(),
            });
        }
        let mut inverse = vec![(usize::MAX, usize::MAX); n * n];
        for (idx, &(r, c)) in forward.iter().enumerate() {
            if r >= n || c >= n || inverse[r * n + c].0 != usize::MAX {
                return Err(Error::InvalidParameters(
                    "position map is not a bijection".into(),
                ));
            }
            inverse[r * n + c] = (idx / n, idx % n);
        }
        Ok(PositionMap {
            n,
            forward,
            inverse,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn cell(&self, s: usize, p: usize) -> (usize, usize) {
        self.forward[s * self.n + p]
    }

    pub fn coordinate(&self, row: usize, col: usize) -> (usize, usize) {
        self.inverse[row * self.n + col]
    }

    /// Whether every row and every column holds exactly one coordinate of each
    /// constituent word.
    pub fn is_line_balanced(&self) -> bool {
        let n = self.n;
        let mut row_hits = vec![false; n * n];
        let mut col_hits = vec![false; n * n];
        for s in 0..n {
            for p in 0..n {
                let (r, c) = self.cell(s, p);
                if std::mem::replace(&mut row_hits[r * n + s], true)
                    || std::mem::replace(&mut col_hits[c * n + s], true)
                {
                    return false;
                }
            }
        }
        true
    }

    pub fn place(&self, field: &Field, words: &[Vec<Elem>]) -> Result<ArrayWord> {
        if words.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: words.len(),
            });
        }
        let mut out = ArrayWord::zeros(field, self.n, self.n);
        for (s, w) in words.iter().enumerate() {
            if w.len() != self.n {
                return Err(Error::LengthMismatch {
                    expected: self.n,
                    found: w.len(),
                });
            }
            for (p, &x) in w.iter().enumerate() {
                let (r, c) = self.cell(s, p);
                out.set(r, c, x);
            }
        }
        Ok(out)
    }

    pub fn extract(&self, word: &ArrayWord) -> Vec<Vec<Elem>> {
        (0..self.n)
            .map(|s| {
                (0..self.n)
                    .map(|p| {
                        let (r, c) = self.cell(s, p);
                        word.get(r, c)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Outcome of local repair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalRepair {
    Repaired(ArrayWord),
    /// Blocks `(block_row, block_col)` that could not be repaired; the array
    /// holds whatever was restored elsewhere.
    Failed {
        partial: ArrayWord,
        failed_blocks: Vec<(usize, usize)>,
    },
}

impl LocalRepair {
    pub fn is_repaired(&self) -> bool {
        matches!(self, LocalRepair::Repaired(_))
    }

    pub fn repaired(&self) -> Option<&ArrayWord> {
        match self {
            LocalRepair::Repaired(w) => Some(w),
            LocalRepair::Failed { .. } => None,
        }
    }
}

/// Serializable summary of a code's parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverLrcParams {
    pub n: usize,
    pub k: usize,
    pub kprime: usize,
    pub r: usize,
    pub rho: usize,
    pub n_l: usize,
    pub mu: usize,
    pub q: u32,
}

/// The array code `{vdb(T, S)}` over a constituent LRC.
#[derive(Clone, Debug)]
pub struct CoverLrc {
    constituent: LinearCode,
    profile: LrcProfile,
    map: PositionMap,
    bmd: Option<TamoBarg>,
    layout: Arc<BlockLayout>,
}

type CellGroup = Vec<(usize, (usize, usize))>;

/// Per-block constituent groups, each paired with the index of its
/// restricted code.
#[derive(Debug, Default)]
struct BlockLayout {
    blocks: Vec<Vec<(CellGroup, usize)>>,
    local: Vec<LinearCode>,
}

impl BlockLayout {
    fn build(code: &LinearCode, map: &PositionMap, n_l: usize, mu: usize) -> Self {
        let mut layout = BlockLayout::default();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        for a in 0..mu {
            for b in 0..mu {
                let mut groups = Vec::new();
                for (_, g) in group_by_constituent(map, &block_cells(a, b, n_l)) {
                    let ps: Vec<usize> = g.iter().map(|&(p, _)| p).collect();
                    let i = match index.get(&ps) {
                        Some(&i) => i,
                        None => {
                            layout.local.push(code.restrict(&ps));
                            index.insert(ps, layout.local.len() - 1);
                            layout.local.len() - 1
                        }
                    };
                    groups.push((g, i));
                }
                layout.blocks.push(groups);
            }
        }
        layout
    }
}

impl CoverLrc {
    pub fn new(constituent: LinearCode, profile: LrcProfile) -> Result<Self> {
        let n = constituent.length();
        if profile.length() != n {
            return Err(Error::InvalidParameters(format!(
                "profile covers {} coordinates, code has length {n}",
                profile.length()
            )));
        }
        if !constituent.dimension().is_multiple_of(profile.locality) {
            return Err(Error::InvalidParameters(format!(
                "r = {} does not divide k' = {}",
                profile.locality,
                constituent.dimension()
            )));
        }
        let map = PositionMap::vdb(&profile);
        let layout = Arc::new(BlockLayout::build(
            &constituent,
            &map,
            profile.group_len(),
            profile.group_count(),
        ));
        Ok(CoverLrc {
            constituent,
            profile,
            map,
            bmd: None,
            layout,
        })
    }

    pub fn from_tamo_barg(tb: TamoBarg) -> Result<Self> {
        let mut code = Self::new(tb.code().clone(), tb.profile().clone())?;
        code.bmd = Some(tb);
        Ok(code)
    }

    /// Smallest admissible field and the Tamo–Barg constituent for it.
    pub fn tamo_barg(field: &Field, n: usize, kprime: usize, r: usize, rho: usize) -> Result<Self> {
        Self::from_tamo_barg(TamoBarg::new(field, n, kprime, r, rho)?)
    }

    /// Same code with a different cell layout.
    pub fn with_map(mut self, map: PositionMap) -> Result<Self> {
        if map.size() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: map.size(),
            });
        }
        self.layout = Arc::new(BlockLayout::build(
            &self.constituent,
            &map,
            self.profile.group_len(),
            self.profile.group_count(),
        ));
        self.map = map;
        Ok(self)
    }

    pub fn field(&self) -> &Field {
        self.constituent.field()
    }

    pub fn constituent(&self) -> &LinearCode {
        &self.constituent
    }

    pub fn profile(&self) -> &LrcProfile {
        &self.profile
    }

    pub fn position_map(&self) -> &PositionMap {
        &self.map
    }

    pub fn n(&self) -> usize {
        self.constituent.length()
    }

    /// Dimension of the array code, `n · k'`.
    pub fn dimension(&self) -> usize {
        self.n() * self.constituent.dimension()
    }

    pub fn params(&self) -> CoverLrcParams {
        CoverLrcParams {
            n: self.n(),
            k: self.dimension(),
            kprime: self.constituent.dimension(),
            r: self.profile.locality,
            rho: self.profile.local_distance,
            n_l: self.profile.group_len(),
            mu: self.profile.group_count(),
            q: self.field().order(),
        }
    }

    /// Encodes a `k' × n` message; column `s` is the message of constituent
    /// codeword `s`.
    pub fn encode(&self, message: &[Vec<Elem>]) -> Result<ArrayWord> {
        let kp = self.constituent.dimension();
        let n = self.n();
        if message.len() != kp {
            return Err(Error::LengthMismatch {
                expected: kp,
                found: message.len(),
            });
        }
        if let Some(row) = message.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: row.len(),
            });
        }
        let columns: Vec<Vec<Elem>> = (0..n)
            .map(|s| message.iter().map(|row| row[s]).collect())
            .collect();
        self.encode_constituents(&columns)
    }

    /// Encodes `n` constituent messages of length `k'` each.
    pub fn encode_constituents(&self, messages: &[Vec<Elem>]) -> Result<ArrayWord> {
        let words = messages
            .iter()
            .map(|m| self.constituent.encode(m))
            .collect::<Result<Vec<_>>>()?;
        self.place(&words)
    }

    /// Arranges `n` constituent codewords on the array.
    pub fn place(&self, codewords: &[Vec<Elem>]) -> Result<ArrayWord> {
        self.map.place(self.field(), codewords)
    }

    fn check_word(&self, word: &ArrayWord) -> Result<()> {
        if word.field() != self.field() {
            return Err(Error::MixedFields);
        }
        if word.rows() != self.n() || word.cols() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n() * self.n(),
                found: word.rows() * word.cols(),
            });
        }
        Ok(())
    }

    fn erased_cells(&self, erased: &LineSet) -> Result<Vec<bool>> {
        let n = self.n();
        erased.check_range(2 * n)?;
        let mut mask = vec![false; n * n];
        for r in erased.rows(n) {
            mask[r * n..(r + 1) * n].iter_mut().for_each(|m| *m = true);
        }
        for c in erased.cols(n) {
            (0..n).for_each(|r| mask[r * n + c] = true);
        }
        Ok(mask)
    }

    /// Repairs full-line erasures inside each `n_l × n_l` block using only the
    /// local codewords stored there.
    pub fn local_erasure_repair(&self, word: &ArrayWord, erased: &LineSet) -> Result<LocalRepair> {
        self.check_word(word)?;
        let n = self.n();
        let n_l = self.profile.group_len();
        let mu = self.profile.group_count();
        let mask = self.erased_cells(erased)?;
        let mut row_erased = vec![false; n];
        let mut col_erased = vec![false; n];
        erased
            .rows(n)
            .into_iter()
            .for_each(|r| row_erased[r] = true);
        erased
            .cols(n)
            .into_iter()
            .for_each(|c| col_erased[c] = true);
        let mut out = word.clone();
        let mut failed = Vec::new();
        for a in 0..mu {
            for b in 0..mu {
                let rows_hit = (a * n_l..(a + 1) * n_l).any(|r| row_erased[r]);
                let cols_hit = (b * n_l..(b + 1) * n_l).any(|c| col_erased[c]);
                if !rows_hit && !cols_hit {
                    continue;
                }
                let mut ok = true;
                for (coords, i) in &self.layout.blocks[a * mu + b] {
                    let local = &self.layout.local[*i];
                    let received = ReceivedWord(
                        coords
                            .iter()
                            .map(|&(_, (r, c))| (!mask[r * n + c]).then(|| word.get(r, c)))
                            .collect(),
                    );
                    if received.erasure_count() == 0 {
                        continue;
                    }
                    match local
                        .erasure_decode(&received)
                        .and_then(|m| local.encode(&m))
                    {
                        Ok(restored) => {
                            for (&(_, (r, c)), v) in coords.iter().zip(restored) {
                                out.set(r, c, v);
                            }
                        }
                        Err(_) => ok = false,
                    }
                }
                if !ok {
                    failed.push((a, b));
                }
            }
        }
        Ok(if failed.is_empty() {
            LocalRepair::Repaired(out)
        } else {
            LocalRepair::Failed {
                partial: out,
                failed_blocks: failed,
            }
        })
    }

    /// Decodes full-line erasures by erasure-decoding every constituent
    /// codeword. Succeeds whenever at most `d - 1` lines are erased.
    pub fn global_erasure_decode(&self, word: &ArrayWord, erased: &LineSet) -> Result<ArrayWord> {
        self.check_word(word)?;
        let n = self.n();
        let mask = self.erased_cells(erased)?;
        let mut words = Vec::with_capacity(n);
        for s in 0..n {
            let received = ReceivedWord(
                (0..n)
                    .map(|p| {
                        let (r, c) = self.map.cell(s, p);
                        (!mask[r * n + c]).then(|| word.get(r, c))
                    })
                    .collect(),
            );
            let msg = self.constituent.erasure_decode(&received)?;
            words.push(self.constituent.encode(&msg)?);
        }
        self.place(&words)
    }

    /// Corrects crisscross errors of cover weight up to `⌊(d - 1)/2⌋` by BMD
    /// decoding each constituent codeword. Needs a Tamo–Barg constituent.
    pub fn global_error_decode(&self, word: &ArrayWord) -> Result<ArrayWord> {
        self.check_word(word)?;
        let tb = self.bmd.as_ref().ok_or_else(|| {
            Error::InvalidParameters("error decoding needs a Tamo-Barg constituent".into())
        })?;
        let words = self
            .map
            .extract(word)
            .iter()
            .map(|w| {
                tb.decode_errors(w)
                    .and_then(|m| self.constituent.encode(&m))
            })
            .collect::<Result<Vec<_>>>()?;
        self.place(&words)
    }

    /// Checks that every `n_l × n_l` block has cover distance at least `ρ`:
    /// each constituent's restriction to the block is a code of Hamming
    /// distance `>= ρ`, and every set of at most `ρ - 1` lines of the block
    /// can be erased and recovered. Exhaustive; desk-scale parameters only.
    pub fn block_locality_check(&self) -> Result<bool> {
        let rho = self.profile.local_distance;
        if rho <= 1 {
            return Ok(true);
        }
        let n_l = self.profile.group_len();
        let mu = self.profile.group_count();
        let f = self.field();
        let mut distance_ok: HashMap<Vec<usize>, bool> = HashMap::new();
        for a in 0..mu {
            for b in 0..mu {
                let cells = block_cells(a, b, n_l);
                let groups = group_by_constituent(&self.map, &cells);
                let mut full_ranks = Vec::with_capacity(groups.len());
                for (_, coords) in &groups {
                    let ps: Vec<usize> = coords.iter().map(|&(p, _)| p).collect();
                    let local = self.constituent.restrict(&ps);
                    if !distance_ok.contains_key(&ps) {
                        let ok = local.dimension() == 0 || local.min_hamming_distance()? >= rho;
                        distance_ok.insert(ps.clone(), ok);
                    }
                    if !distance_ok[&ps] {
                        return Ok(false);
                    }
                    full_ranks.push(local.dimension());
                }
                // block lines: 0..n_l are rows a*n_l.., n_l..2n_l are columns b*n_l..
                let block_lines = 2 * n_l;
                for size in 1..rho.min(block_lines + 1) {
                    for subset in combinations(block_lines, size) {
                        let hit = |r: usize, c: usize| {
                            subset.iter().any(|&l| {
                                if l < n_l {
                                    r == a * n_l + l
                                } else {
                                    c == b * n_l + (l - n_l)
                                }
                            })
                        };
                        for ((_, coords), &full) in groups.iter().zip(&full_ranks) {
                            let kept: Vec<usize> = coords
                                .iter()
                                .filter(|&&(_, (r, c))| !hit(r, c))
                                .map(|&(p, _)| p)
                                .collect();
                            let sub = self.constituent.generator().select_columns(&kept);
                            if linalg::rank(f, &sub) < full {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

fn block_cells(a: usize, b: usize, n_l: usize) -> Vec<(usize, usize)> {
    (0..n_l)
        .flat_map(|r| (0..n_l).map(move |c| (a * n_l + r, b * n_l + c)))
        .collect()
}

/// Cells of a block grouped by constituent index, each group sorted by
/// coordinate: `(s, [(p, (row, col))])`.
#[allow(clippy::type_complexity)]
fn group_by_constituent(
    map: &PositionMap,
    cells: &[(usize, usize)],
) -> Vec<(usize, Vec<(usize, (usize, usize))>)> {
    let mut by_s: std::collections::BTreeMap<usize, Vec<(usize, (usize, usize))>> =
        Default::default();
    for &(r, c) in cells {
        let (s, p) = map.coordinate(r, c);
        by_s.entry(s).or_default().push((p, (r, c)));
    }
    by_s.into_iter()
        .map(|(s, mut v)| {
            v.sort_unstable();
            (s, v)
        })
        .collect()
}

/// `n - k/n + 1 - (⌈k/(n r)⌉ - 1)(ρ - 1)`, the Singleton-like bound on the
/// cover distance of an `n × n` array code with cover-locality.
pub fn cover_lrc_bound(n: usize, k: usize, r: usize, rho: usize) -> Result<i64> {
    if n == 0 || !k.is_multiple_of(n) {
        return Err(Error::InvalidParameters(format!(
            "n = {n} must divide k = {k}"
        )));
    }
    lrc_singleton_bound(n, k / n, r, rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> CoverLrc {
        let f = Field::new(13, 1).unwrap();
        CoverLrc::tamo_barg(&f, 9, 4, 2, 2).unwrap()
    }

    #[test]
    fn bounds() {
        assert_eq!(cover_lrc_bound(9, 36, 2, 2).unwrap(), 5);
        assert_eq!(cover_lrc_bound(255, 112 * 255, 8, 8).unwrap(), 53);
        assert_eq!(cover_lrc_bound(9, 36, 4, 3).unwrap(), 9 - 4 + 1);
        assert!(cover_lrc_bound(9, 35, 2, 2).is_err());
    }

    #[test]
    fn vd_single_vector_is_diagonal() {
        let f = Field::new(13, 1).unwrap();
        let v: Vec<Elem> = (1..=4).map(Elem).collect();
        let a = vd(&f, &[v], 4).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(
                    a.get(r, c),
                    if r == c {
                        Elem(c as u32 + 1)
                    } else {
                        Elem::ZERO
                    }
                );
            }
        }
        assert!(vd(&f, &[], 4).is_err());
        assert!(vd(&f, &[vec![Elem::ONE; 3]], 4).is_err());
    }

    #[test]
    fn vdb_matches_position_map() {
        let code = example();
        let f = code.field().clone();
        let words: Vec<Vec<Elem>> = (0..9)
            .map(|s| (0..9).map(|p| Elem(((s * 9 + p) % 13) as u32)).collect())
            .collect();
        assert_eq!(
            vdb(&f, &words, code.profile()).unwrap(),
            code.place(&words).unwrap()
        );
    }

    #[test]
    fn vdb_single_group_is_inner_vd() {
        let f = Field::new(13, 1).unwrap();
        let profile = LrcProfile::consecutive(3, 2, 2).unwrap();
        let words: Vec<Vec<Elem>> = (0..3)
            .map(|s| (0..3).map(|p| Elem((s * 3 + p + 1) as u32)).collect())
            .collect();
        assert_eq!(
            vdb(&f, &words, &profile).unwrap(),
            vd(&f, &words, 3).unwrap()
        );
    }

    #[test]
    fn position_map_example_cells() {
        let map = PositionMap::vdb(example().profile());
        assert_eq!(map.cell(0, 0), (0, 0));
        // π = constituent 7, coordinate 4 (one-based) sits at row 1, column 4
        assert_eq!(map.cell(6, 3), (0, 3));
        for s in 0..9 {
            for p in 0..9 {
                let (r, c) = map.cell(s, p);
                assert_eq!(map.coordinate(r, c), (s, p));
            }
        }
        assert!(map.is_line_balanced());
        assert!(!PositionMap::rows_direct(9).is_line_balanced());
    }

    #[test]
    fn inverse_formula() {
        // one-based inverse lookup written out independently of the forward map
        let map = PositionMap::vdb(example().profile());
        let (n_l, mu) = (3usize, 3usize);
        for row in 1..=9usize {
            for col in 1..=9usize {
                let j = col.div_ceil(n_l);
                let v = col - (j - 1) * n_l;
                let beta = row.div_ceil(n_l);
                let i = (beta + mu - j) % mu + 1;
                let u = (row - (beta - 1) * n_l + n_l - v) % n_l + 1;
                let s = (i - 1) * n_l + u;
                let p = (j - 1) * n_l + v;
                assert_eq!(map.coordinate(row - 1, col - 1), (s - 1, p - 1));
            }
        }
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).count(), 6);
        assert_eq!(
            combinations(3, 0).collect::<Vec<_>>(),
            vec![Vec::<usize>::new()]
        );
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(combinations(18, 4).count(), 3060);
    }

    #[test]
    fn block_locality() {
        let code = example();
        assert!(code.block_locality_check().unwrap());
        let direct = example().with_map(PositionMap::rows_direct(9)).unwrap();
        assert!(!direct.block_locality_check().unwrap());
        let f = Field::new(13, 1).unwrap();
        let rho_one = CoverLrc::tamo_barg(&f, 12, 4, 2, 1).unwrap();
        assert!(rho_one.block_locality_check().unwrap());
    }

    #[test]
    fn encode_shapes() {
        let code = example();
        let zero = vec![vec![Elem::ZERO; 9]; 4];
        assert!(code.encode(&zero).unwrap().is_zero());
        assert!(code.encode(&zero[..3]).is_err());
        assert_eq!(code.dimension(), 36);
    }
}
