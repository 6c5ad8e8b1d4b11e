//! The cover metric on `m × n` matrices.
//!
//! Lines are numbered from 1: rows are `1..=m`, columns are `m+1..=m+n`. The
//! cover weight of a matrix is the minimum vertex cover of the bipartite graph
//! whose edges are its nonzero entries, which by König's theorem equals the
//! size of a maximum matching.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// An `m × n` matrix over a finite field, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrayWord {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl ArrayWord {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        ArrayWord {
            field: field.clone(),
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(field: &Field, grid: Vec<Vec<Elem>>) -> Result<Self> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, Vec::len);
        if let Some(bad) = grid.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        if let Some(&e) = grid.iter().flatten().find(|e| e.0 >= field.order()) {
            return Err(Error::ElementOutOfRange {
                value: e.0,
                q: field.order(),
            });
        }
        Ok(ArrayWord {
            field: field.clone(),
            rows,
            cols,
            data: grid.into_iter().flatten().collect(),
        })
    }

    /// Builds from a grid of integer element indices (the JSON form).
    pub fn from_grid(field: &Field, grid: &[Vec<u32>]) -> Result<Self> {
        Self::from_rows(
            field,
            grid.iter()
                .map(|r| r.iter().map(|&v| Elem(v)).collect())
                .collect(),
        )
    }

    pub fn to_grid(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|e| e.0).collect())
            .collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of lines, `m + n`.
    pub fn line_count(&self) -> usize {
        self.rows + self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    fn check_compatible(&self, other: &ArrayWord) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::LengthMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn sub(&self, other: &ArrayWord) -> Result<ArrayWord> {
        self.check_compatible(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Ok(ArrayWord {
            data,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &ArrayWord) -> Result<ArrayWord> {
        self.check_compatible(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(ArrayWord {
            data,
            ..self.clone()
        })
    }

    pub fn transpose(&self) -> ArrayWord {
        let mut out = ArrayWord::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Coordinates of the nonzero entries, zero-based.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows)
            .flat_map(move |r| (0..self.cols).map(move |c| (r, c)))
            .filter(|&(r, c)| !self.get(r, c).is_zero())
    }
}

/// A set of line indices, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct LineSet(Vec<usize>);

impl From<Vec<usize>> for LineSet {
    fn from(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        LineSet(v)
    }
}

impl From<LineSet> for Vec<usize> {
    fn from(s: LineSet) -> Self {
        s.0
    }
}

impl LineSet {
    pub fn new(lines: impl IntoIterator<Item = usize>) -> Self {
        lines.into_iter().collect::<Vec<_>>().into()
    }

    pub fn lines(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, line: usize) -> bool {
        self.0.binary_search(&line).is_ok()
    }

    pub fn check_range(&self, total: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l == 0 || l > total) {
            Some(&index) => Err(Error::LineOutOfRange {
                index,
                lines: total,
            }),
            None => Ok(()),
        }
    }

    /// Zero-based row indices, given `m` rows.
    pub fn rows(&self, m: usize) -> Vec<usize> {
        self.0.iter().filter(|&&l| l <= m).map(|&l| l - 1).collect()
    }

    /// Zero-based column indices, given `m` rows.
    pub fn cols(&self, m: usize) -> Vec<usize> {
        self.0
            .iter()
            .filter(|&&l| l > m)
            .map(|&l| l - m - 1)
            .collect()
    }
}

pub fn is_cover(e: &ArrayWord, x: &LineSet) -> Result<bool> {
    x.check_range(e.line_count())?;
    let m = e.rows();
    Ok(e.support()
        .all(|(r, c)| x.contains(r + 1) || x.contains(m + c + 1)))
}

/// Maximum matching between rows and columns over the nonzero entries
/// (Hopcroft–Karp). Returns `match_row[r] = Some(c)` for matched rows.
fn hopcroft_karp(adj: &[Vec<usize>], cols: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let rows = adj.len();
    let mut match_row: Vec<Option<usize>> = vec![None; rows];
    let mut match_col: Vec<Option<usize>> = vec![None; cols];
    let mut dist = vec![usize::MAX; rows];

    loop {
        // layered BFS from free rows
        let mut queue = VecDeque::new();
        for r in 0..rows {
            if match_row[r].is_none() {
                dist[r] = 0;
                queue.push_back(r);
            } else {
                dist[r] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(r) = queue.pop_front() {
            for &c in &adj[r] {
                match match_col[c] {
                    None => found = true,
                    Some(r2) if dist[r2] == usize::MAX => {
                        dist[r2] = dist[r] + 1;
                        queue.push_back(r2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        fn augment(
            r: usize,
            adj: &[Vec<usize>],
            dist: &mut [usize],
            match_row: &mut [Option<usize>],
            match_col: &mut [Option<usize>],
        ) -> bool {
            for &c in &adj[r] {
                let ok = match match_col[c] {
                    None => true,
                    Some(r2) => {
                        dist[r2] == dist[r] + 1 && augment(r2, adj, dist, match_row, match_col)
                    }
                };
                if ok {
                    match_row[r] = Some(c);
                    match_col[c] = Some(r);
                    return true;
                }
            }
            dist[r] = usize::MAX;
            false
        }
        for r in 0..rows {
            if match_row[r].is_none() {
                augment(r, adj, &mut dist, &mut match_row, &mut match_col);
            }
        }
    }
    (match_row, match_col)
}

fn adjacency(e: &ArrayWord) -> Vec<Vec<usize>> {
    (0..e.rows())
        .map(|r| (0..e.cols()).filter(|&c| !e.get(r, c).is_zero()).collect())
        .collect()
}

/// Edges `(row, col)` of a maximum matching on the nonzero entries.
pub fn maximum_matching(e: &ArrayWord) -> Vec<(usize, usize)> {
    let (match_row, _) = hopcroft_karp(&adjacency(e), e.cols());
    match_row
        .iter()
        .enumerate()
        .filter_map(|(r, c)| c.map(|c| (r, c)))
        .collect()
}

pub fn cover_weight(e: &ArrayWord) -> usize {
    maximum_matching(e).len()
}

/// A minimum cover: König's construction from the maximum matching. Rows not
/// reachable by alternating paths from free rows, plus reachable columns.
pub fn min_cover_witness(e: &ArrayWord) -> LineSet {
    let adj = adjacency(e);
    let (match_row, match_col) = hopcroft_karp(&adj, e.cols());
    let mut row_seen = vec![false; e.rows()];
    let mut col_seen = vec![false; e.cols()];
    let mut queue: VecDeque<usize> = (0..e.rows()).filter(|&r| match_row[r].is_none()).collect();
    for &r in &queue {
        row_seen[r] = true;
    }
    while let Some(r) = queue.pop_front() {
        for &c in &adj[r] {
            if col_seen[c] {
                continue;
            }
            col_seen[c] = true;
            if let Some(r2) = match_col[c] {
                if !row_seen[r2] {
                    row_seen[r2] = true;
                    queue.push_back(r2);
                }
            }
        }
    }
    let m = e.rows();
    let rows = (0..m).filter(|&r| !row_seen[r]).map(|r| r + 1);
    let cols = (0..e.cols()).filter(|&c| col_seen[c]).map(|c| m + c + 1);
    LineSet::new(rows.chain(cols))
}

pub fn cover_distance(a: &ArrayWord, b: &ArrayWord) -> Result<usize> {
    Ok(cover_weight(&a.sub(b)?))
}

/// Number of nonzero columns; an upper bound on the cover weight.
pub fn column_weight(e: &ArrayWord) -> usize {
    (0..e.cols())
        .filter(|&c| (0..e.rows()).any(|r| !e.get(r, c).is_zero()))
        .count()
}

pub fn row_weight(e: &ArrayWord) -> usize {
    (0..e.rows())
        .filter(|&r| e.row(r).iter().any(|v| !v.is_zero()))
        .count()
}

/// Largest `m + n` accepted by [`brute_force_cover_weight`].
pub const BRUTE_FORCE_MAX_LINES: usize = 24;

/// Minimum cover size by trying every subset of lines.
pub fn brute_force_cover_weight(e: &ArrayWord) -> Result<usize> {
    let (m, n) = (e.rows(), e.cols());
    if m + n > BRUTE_FORCE_MAX_LINES {
        return Err(Error::TooLarge(format!(
            "{m} + {n} lines exceeds {BRUTE_FORCE_MAX_LINES}"
        )));
    }
    let row_masks: Vec<u32> = (0..m)
        .map(|r| {
            (0..n)
                .filter(|&c| !e.get(r, c).is_zero())
                .fold(0, |acc, c| acc | 1 << c)
        })
        .collect();
    let mut best = m + n;
    for rows in 0u32..(1 << m) {
        // the cheapest column set is the union over uncovered rows
        let needed = (0..m)
            .filter(|&r| rows >> r & 1 == 0)
            .fold(0u32, |acc, r| acc | row_masks[r]);
        best = best.min(rows.count_ones() as usize + needed.count_ones() as usize);
    }
    Ok(best)
}
