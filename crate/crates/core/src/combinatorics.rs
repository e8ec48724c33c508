//! Partitions, standard tableaux, permutations, and the Robinson-Schensted
//! correspondence, plus the block-reversal words attached to partitions.
//!
//! Everything uses 1-based entries: a permutation of size n maps
//! {1, ..., n} to itself, tableau entries are exactly {1, ..., n}.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CombError {
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("not a standard tableau: {0}")]
    NotStandard(String),
    #[error("tableaux have different shapes")]
    ShapeMismatch,
    #[error("not a block-reversal word: {0}")]
    NotBlockWord(String),
    #[error("size {got} exceeds the enumeration cap {cap}")]
    TooLarge { got: usize, cap: usize },
    #[error("cannot parse: {0}")]
    Parse(String),
}

/// Enumeration guard: standard tableaux and symmetric groups are only
/// listed exhaustively up to this many boxes/letters.
pub const ENUMERATION_CAP: usize = 10;

// ---------------------------------------------------------------------------
// partitions

/// Weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Partition, CombError> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(CombError::NotAPartition(format!("{parts:?}")));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Column lengths of the diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        let parts = (0..cols)
            .map(|c| self.parts.iter().filter(|&&r| r > c).count())
            .collect();
        Partition { parts }
    }

    /// (x^r) with r repetitions of x; the shapes whose unipotent classes the
    /// series construction in [`crate::padic`] covers.
    pub fn is_rectangular(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = CombError;
    fn from_str(s: &str) -> Result<Partition, CombError> {
        let parts: Result<Vec<usize>, _> = s.split(',').map(|t| t.trim().parse()).collect();
        let parts = parts.map_err(|_| CombError::Parse(format!("partition {s:?}")))?;
        Partition::new(parts)
    }
}

/// All partitions of n, largest first part first, in descending
/// lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n.max(1), &mut Vec::new(), &mut out);
    out
}

// ---------------------------------------------------------------------------
// permutations

/// Permutation of {1, ..., n} in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn from_one_line(images: Vec<usize>) -> Result<Perm, CombError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(CombError::NotAPermutation(format!("{images:?}")));
            }
            seen[v] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (1..=n).collect(),
        }
    }

    /// n, n-1, ..., 1.
    pub fn longest_element(n: usize) -> Perm {
        Perm {
            images: (1..=n).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of i (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v - 1] = i + 1;
        }
        Perm { images }
    }

    /// (self*other)(i) = self(other(i)).
    pub fn compose(&self, other: &Perm) -> Result<Perm, CombError> {
        if self.n() != other.n() {
            return Err(CombError::NotAPermutation("size mismatch in compose".into()));
        }
        Ok(Perm {
            images: (1..=self.n()).map(|i| self.apply(other.apply(i))).collect(),
        })
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let n = self.n();
        let mut l = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    l += 1;
                }
            }
        }
        l
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.images.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Perm {
    type Err = CombError;
    fn from_str(s: &str) -> Result<Perm, CombError> {
        let images: Result<Vec<usize>, _> = s.split(',').map(|t| t.trim().parse()).collect();
        let images = images.map_err(|_| CombError::Parse(format!("permutation {s:?}")))?;
        Perm::from_one_line(images)
    }
}

/// All of S_n in lexicographic one-line order.
pub fn all_perms(n: usize) -> Result<Vec<Perm>, CombError> {
    if n > ENUMERATION_CAP {
        return Err(CombError::TooLarge { got: n, cap: ENUMERATION_CAP });
    }
    fn rec(n: usize, prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if prefix.len() == n {
            out.push(Perm { images: prefix.clone() });
            return;
        }
        for v in 1..=n {
            if used[v] {
                continue;
            }
            used[v] = true;
            prefix.push(v);
            rec(n, prefix, used, out);
            prefix.pop();
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// tableaux

/// Standard Young tableau: rows strictly increase left to right, columns
/// strictly increase top to bottom, entries are exactly {1, ..., n}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Tableau, CombError> {
        let lens: Vec<usize> = rows.iter().map(|r| r.len()).collect();
        Partition::new(lens).map_err(|_| CombError::NotStandard("shape is not a partition".into()))?;
        let n: usize = rows.iter().map(|r| r.len()).sum();
        let mut seen = vec![false; n + 1];
        for row in &rows {
            for &v in row {
                if v == 0 || v > n || seen[v] {
                    return Err(CombError::NotStandard(format!("bad entry {v}")));
                }
                seen[v] = true;
            }
        }
        for row in &rows {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CombError::NotStandard("row not increasing".into()));
            }
        }
        for pair in rows.windows(2) {
            // the lower row is never longer, so zip covers every column of it
            if pair[0].iter().zip(pair[1].iter()).any(|(hi, lo)| hi >= lo) {
                return Err(CombError::NotStandard("column not increasing".into()));
            }
        }
        Ok(Tableau { rows })
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn shape(&self) -> Partition {
        Partition {
            parts: self.rows.iter().map(|r| r.len()).collect(),
        }
    }

    /// (row, col) of entry t, 0-based.
    pub fn find(&self, t: usize) -> Option<(usize, usize)> {
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(c) = row.iter().position(|&v| v == t) {
                return Some((r, c));
            }
        }
        None
    }

    /// Column index (0-based) of entry t among the entries <= t; this is
    /// just the column of t since smaller entries fill its prefix.
    pub fn column_of(&self, t: usize) -> Option<usize> {
        self.find(t).map(|(_, c)| c)
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

impl FromStr for Tableau {
    type Err = CombError;
    fn from_str(s: &str) -> Result<Tableau, CombError> {
        let mut rows = Vec::new();
        for row in s.split(';') {
            let entries: Result<Vec<usize>, _> = row.split(',').map(|t| t.trim().parse()).collect();
            rows.push(entries.map_err(|_| CombError::Parse(format!("tableau {s:?}")))?);
        }
        Tableau::new(rows)
    }
}

/// Tableau whose columns are filled with consecutive integers, first column
/// 1..c_1 top to bottom, second column the next c_2 integers, and so on.
pub fn column_superstandard_tableau(shape: &Partition) -> Tableau {
    let cols = shape.conjugate();
    let mut rows: Vec<Vec<usize>> = shape.parts().iter().map(|&l| vec![0; l]).collect();
    let mut next = 1;
    for (c, &height) in cols.parts().iter().enumerate() {
        for row in rows.iter_mut().take(height) {
            row[c] = next;
            next += 1;
        }
    }
    Tableau { rows }
}

/// All standard tableaux of the given shape, deterministic order.
pub fn standard_tableaux(shape: &Partition) -> Result<Vec<Tableau>, CombError> {
    let n = shape.size();
    if n > ENUMERATION_CAP {
        return Err(CombError::TooLarge { got: n, cap: ENUMERATION_CAP });
    }
    fn rec(t: usize, n: usize, shape: &[usize], rows: &mut Vec<Vec<usize>>, out: &mut Vec<Tableau>) {
        if t > n {
            out.push(Tableau { rows: rows.clone() });
            return;
        }
        for r in 0..shape.len() {
            let c = rows[r].len();
            if c >= shape[r] {
                continue;
            }
            if r > 0 && rows[r - 1].len() <= c {
                continue;
            }
            rows[r].push(t);
            rec(t + 1, n, shape, rows, out);
            rows[r].pop();
        }
    }
    let mut out = Vec::new();
    let mut rows = vec![Vec::new(); shape.len()];
    rec(1, n, shape.parts(), &mut rows, &mut out);
    Ok(out)
}

/// Number of standard tableaux by the hook length formula; the independent
/// check against [`standard_tableaux`] enumeration.
pub fn hook_length_count(shape: &Partition) -> u128 {
    let n = shape.size();
    let cols = shape.conjugate();
    let mut hooks: u128 = 1;
    for (r, &len) in shape.parts().iter().enumerate() {
        for c in 0..len {
            let arm = len - 1 - c;
            let leg = cols.parts()[c] - 1 - r;
            hooks *= (arm + leg + 1) as u128;
        }
    }
    let num = factorial(n);
    assert_eq!(num % hooks, 0, "hook product must divide n!");
    num / hooks
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

// ---------------------------------------------------------------------------
// Robinson-Schensted

/// Row insertion of the word into an empty pair; returns the insertion
/// tableau and the recording tableau.
pub fn rs_insert(w: &Perm) -> (Tableau, Tableau) {
    let mut p: Vec<Vec<usize>> = Vec::new();
    let mut q: Vec<Vec<usize>> = Vec::new();
    for t in 1..=w.n() {
        let mut x = w.apply(t);
        let mut r = 0;
        loop {
            if r == p.len() {
                p.push(vec![x]);
                q.push(vec![t]);
                break;
            }
            match p[r].iter().position(|&y| y > x) {
                None => {
                    p[r].push(x);
                    q[r].push(t);
                    break;
                }
                Some(pos) => {
                    std::mem::swap(&mut x, &mut p[r][pos]);
                    r += 1;
                }
            }
        }
    }
    (Tableau { rows: p }, Tableau { rows: q })
}

/// Inverse of [`rs_insert`]: peels entries n, n-1, ..., 1 off the recording
/// tableau and reverse-bumps the matching box out of the insertion tableau.
pub fn rs_extract(p: &Tableau, q: &Tableau) -> Result<Perm, CombError> {
    if p.shape() != q.shape() {
        return Err(CombError::ShapeMismatch);
    }
    let n = p.n();
    let mut rows = p.rows.clone();
    let mut images = vec![0; n];
    for t in (1..=n).rev() {
        let (r, c) = q.find(t).expect("standard tableau contains t");
        if c != rows[r].len() - 1 || (r + 1 < rows.len() && rows[r + 1].len() > c) {
            // q removed in decreasing order must always expose a corner
            return Err(CombError::NotStandard("recording tableau is not standard".into()));
        }
        let mut x = rows[r].pop().expect("corner exists");
        if rows[r].is_empty() {
            rows.pop();
        }
        for rr in (0..r).rev() {
            let pos = rows[rr]
                .iter()
                .rposition(|&y| y < x)
                .expect("reverse bump always finds a smaller entry");
            std::mem::swap(&mut x, &mut rows[rr][pos]);
        }
        images[t - 1] = x;
    }
    Perm::from_one_line(images)
}

// ---------------------------------------------------------------------------
// block-reversal words

/// Word that writes consecutive blocks of the given sizes, each block
/// reversed: sizes (2, 2) give 2,1,4,3.
pub fn block_reversal_word(block_sizes: &[usize]) -> Perm {
    let mut images = Vec::with_capacity(block_sizes.iter().sum());
    let mut start = 1;
    for &b in block_sizes {
        images.extend((start..start + b).rev());
        start += b;
    }
    Perm { images }
}

/// The block-reversal word of a partition: block sizes are the conjugate
/// parts, so the shape (2, 2) gives 2,1,4,3 and (2, 1) gives 2,1,3.
pub fn beta_word(shape: &Partition) -> Perm {
    block_reversal_word(shape.conjugate().parts())
}

/// Inversion count any block-reversal word must have: each block of size b
/// contributes b(b-1)/2.
pub fn block_reversal_length(block_sizes: &[usize]) -> usize {
    block_sizes.iter().map(|&b| b * (b - 1) / 2).sum()
}

/// Decomposes a permutation as a block-reversal word, recovering the block
/// sizes in order; errors when no decomposition exists.
pub fn parse_block_reversal(w: &Perm) -> Result<Vec<usize>, CombError> {
    let mut blocks = Vec::new();
    let mut pos = 0;
    while pos < w.n() {
        let top = w.apply(pos + 1);
        if top <= pos {
            return Err(CombError::NotBlockWord(w.to_string()));
        }
        let b = top - pos;
        for i in 0..b {
            if pos + i >= w.n() || w.apply(pos + i + 1) != top - i {
                return Err(CombError::NotBlockWord(w.to_string()));
            }
        }
        blocks.push(b);
        pos += b;
    }
    Ok(blocks)
}

// ---------------------------------------------------------------------------
// q-analogues

/// Number of k-dimensional subspaces of an n-dimensional space over a field
/// with q elements, by the q-Pascal recurrence (exact integers throughout).
pub fn gaussian_binomial(n: usize, k: usize, q: u128) -> u128 {
    if k > n {
        return 0;
    }
    // g[j] holds the (i choose j)_q column as i grows
    let mut g = vec![0u128; k + 1];
    g[0] = 1;
    for _ in 1..=n {
        for j in (1..=k).rev() {
            let mut qj = 1u128;
            for _ in 0..j {
                qj *= q;
            }
            g[j] = g[j - 1] + qj * g[j];
        }
    }
    g[k]
}

/// Number of complete flags in an n-dimensional space over a field with q
/// elements: the product of 1 + q + ... + q^{i-1} for i = 1..n.
pub fn gaussian_factorial(n: usize, q: u128) -> u128 {
    let mut out = 1u128;
    for i in 1..=n {
        let mut term = 0u128;
        let mut qp = 1u128;
        for _ in 0..i {
            term += qp;
            qp *= q;
        }
        out *= term;
    }
    out
}
