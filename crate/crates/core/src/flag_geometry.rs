//! Complete flags over a finite field: enumeration, relative position,
//! Frobenius twists, and the membership predicates cut out by a
//! permutation (relative position with the Frobenius image), a unipotent
//! matrix (stabilized flags), and a standard tableau (the open piece of a
//! stabilized-flag component).

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::combinatorics::{gaussian_factorial, CombError, Perm, Tableau};
use crate::gf::{make_field, Field, GfError, Scalar};
use crate::linalg::{enumerate_rational_subspaces, image, LinalgError, Mat, Subspace};
use crate::normal_forms::{jordan_type_of_nilpotent, NormalFormError, Unipotent};

#[derive(Debug, Error)]
pub enum FlagError {
    #[error("not a flag: {0}")]
    NotAFlag(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("enumeration needs {needed} flags, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("tableau shape does not match the unipotent's type")]
    TableauShapeMismatch,
    #[error("flag is not stabilized by the unipotent")]
    NotStabilized,
    #[error("subspace at position {0} is not Frobenius-stable")]
    NotFrobeniusStable(usize),
    #[error("bad block sizes: {0}")]
    BadBlocks(String),
    #[error("cannot parse flag: {0}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Comb(#[from] CombError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Default ceiling on exhaustive flag enumeration.
pub const DEFAULT_FLAG_BUDGET: u128 = 2_000_000;

/// Complete flag V_1 < V_2 < ... < V_{n-1} inside F^n; the proper steps
/// are stored, V_0 and V_n are implicit.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Flag {
    steps: Vec<Subspace>,
    n: usize,
    field: Field,
}

impl Flag {
    pub fn new(steps: Vec<Subspace>, n: usize, field: Field) -> Result<Flag, FlagError> {
        if steps.len() + 1 != n.max(1) {
            return Err(FlagError::NotAFlag(format!(
                "{} steps for ambient dimension {n}",
                steps.len()
            )));
        }
        for (i, s) in steps.iter().enumerate() {
            if s.field() != &field {
                return Err(FlagError::FieldMismatch);
            }
            if s.ambient_dim() != n {
                return Err(FlagError::NotAFlag(format!(
                    "step {} lives in dimension {}",
                    i + 1,
                    s.ambient_dim()
                )));
            }
            if s.dim() != i + 1 {
                return Err(FlagError::NotAFlag(format!(
                    "step {} has dimension {}",
                    i + 1,
                    s.dim()
                )));
            }
        }
        for w in steps.windows(2) {
            if !w[1].contains(&w[0])? {
                return Err(FlagError::NotAFlag("steps are not nested".into()));
            }
        }
        Ok(Flag { steps, n, field })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// V_i for i = 0..=n (V_0 zero, V_n full).
    pub fn step(&self, i: usize) -> Subspace {
        if i == 0 {
            Subspace::zero(self.n, self.field.clone())
        } else if i == self.n {
            Subspace::full(self.n, self.field.clone())
        } else {
            self.steps[i - 1].clone()
        }
    }

    pub fn proper_steps(&self) -> &[Subspace] {
        &self.steps
    }

    /// Coordinate flag spanned by e_1, e_1..e_2, and so on.
    pub fn standard(n: usize, field: Field) -> Flag {
        let steps = (1..n)
            .map(|d| {
                Subspace::from_span(&Mat::from_fn(d, n, field.clone(), |i, j| {
                    if i == j {
                        Scalar::ONE
                    } else {
                        Scalar::ZERO
                    }
                }))
            })
            .collect();
        Flag { steps, n, field }
    }

    /// Entry-wise relative Frobenius on every step.
    pub fn frobenius(&self) -> Flag {
        Flag {
            steps: self.steps.iter().map(|s| s.frobenius()).collect(),
            n: self.n,
            field: self.field.clone(),
        }
    }

    pub fn frobenius_pow(&self, t: u32) -> Flag {
        let mut f = self.clone();
        for _ in 0..t {
            f = f.frobenius();
        }
        f
    }

    pub fn is_rational(&self) -> bool {
        self.steps.iter().all(|s| s.is_frobenius_stable())
    }

    /// Vectors a_1, ..., a_n with V_i spanned by a_1..a_i; a_i is the basis
    /// row of V_i whose pivot is new relative to V_{i-1} (pivot sets of
    /// nested row-echelon subspaces are nested).
    pub fn chain_basis(&self) -> Vec<Vec<Scalar>> {
        let mut out = Vec::with_capacity(self.n);
        let mut prev_pivots: Vec<usize> = Vec::new();
        for i in 1..=self.n {
            let s = self.step(i);
            let pivots = s.pivots();
            let new = pivots
                .iter()
                .position(|p| !prev_pivots.contains(p))
                .expect("nested subspaces gain exactly one pivot");
            out.push(s.basis().row(new).to_vec());
            prev_pivots = pivots;
        }
        out
    }
}

/// g applied to every step.
pub fn translate_flag(g: &Mat, f: &Flag) -> Result<Flag, FlagError> {
    if g.field() != f.field() {
        return Err(FlagError::FieldMismatch);
    }
    if g.rows() != f.n() || g.cols() != f.n() {
        return Err(FlagError::DimensionMismatch(format!(
            "{}x{} matrix on flags in dimension {}",
            g.rows(),
            g.cols(),
            f.n()
        )));
    }
    let steps: Result<Vec<Subspace>, LinalgError> =
        f.proper_steps().iter().map(|s| s.apply(g)).collect();
    Flag::new(steps?, f.n(), f.field().clone())
}

pub fn frobenius_flag(f: &Flag) -> Flag {
    f.frobenius()
}

// ---------------------------------------------------------------------------
// relative position

/// Forward-elimination state tracking the rank of an accumulating span.
struct Echelon<'a> {
    field: &'a Field,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl<'a> Echelon<'a> {
    fn new(field: &'a Field) -> Echelon<'a> {
        Echelon { field, rows: Vec::new() }
    }

    /// Returns true when the vector enlarged the span.
    fn insert(&mut self, v: &[Scalar]) -> bool {
        let f = self.field;
        let mut v = v.to_vec();
        for (lead, row) in &self.rows {
            let c = v[*lead];
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, *y));
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            None => false,
            Some(lead) => {
                let inv = f.inv(v[lead]).expect("leading entry is nonzero");
                for x in v.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                self.rows.push((lead, v));
                true
            }
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// dim(V_i intersect W_j) for the fixed j, all i = 0..n, where the V_i come
/// from the chain basis: rank(V_i + W_j) = i + j - dim(V_i intersect W_j).
fn column_dims(chain: &[Vec<Scalar>], w_j: &Subspace, j: usize, field: &Field) -> Vec<usize> {
    let mut ech = Echelon::new(field);
    for r in 0..w_j.dim() {
        let grew = ech.insert(w_j.basis().row(r));
        debug_assert!(grew);
    }
    let mut dims = Vec::with_capacity(chain.len() + 1);
    dims.push(0);
    for (i, v) in chain.iter().enumerate() {
        ech.insert(v);
        dims.push(i + 1 + j - ech.rank());
    }
    dims
}

/// The permutation w with dim(V_i intersect W_j) jumping at i = w(j):
/// the unique w putting the pair (V, W) in the same orbit as the standard
/// flag paired with its w-translate.
pub fn relative_position(a: &Flag, b: &Flag) -> Result<Perm, FlagError> {
    if a.field() != b.field() {
        return Err(FlagError::FieldMismatch);
    }
    if a.n() != b.n() {
        return Err(FlagError::DimensionMismatch(format!("{} vs {}", a.n(), b.n())));
    }
    let n = a.n();
    let chain = a.chain_basis();
    let mut prev = vec![0usize; n + 1];
    let mut images = Vec::with_capacity(n);
    for j in 1..=n {
        let dims = column_dims(&chain, &b.step(j), j, a.field());
        let i = (1..=n)
            .find(|&i| dims[i] - prev[i] == 1 && dims[i - 1] - prev[i - 1] == 0)
            .expect("intersection dimensions always jump exactly once");
        images.push(i);
        prev = dims;
    }
    Ok(Perm::from_one_line(images)?)
}

// ---------------------------------------------------------------------------
// membership predicates

/// True iff the relative position of f with its Frobenius image is w,
/// checked column by column with early exit.
pub fn dl_membership(w: &Perm, f: &Flag) -> Result<bool, FlagError> {
    let n = f.n();
    if w.n() != n {
        return Err(FlagError::DimensionMismatch(format!(
            "permutation of {} on flags in dimension {n}",
            w.n()
        )));
    }
    let fr = f.frobenius();
    let chain = f.chain_basis();
    let mut prev = vec![0usize; n + 1];
    for j in 1..=n {
        let dims = column_dims(&chain, &fr.step(j), j, f.field());
        let target = w.apply(j);
        if dims[target] - prev[target] != 1 || dims[target - 1] - prev[target - 1] != 0 {
            return Ok(false);
        }
        prev = dims;
    }
    Ok(true)
}

/// True iff u maps every step of f onto itself.
pub fn springer_membership(u: &Mat, f: &Flag) -> Result<bool, FlagError> {
    if u.field() != f.field() {
        return Err(FlagError::FieldMismatch);
    }
    if u.rows() != f.n() || u.cols() != f.n() {
        return Err(FlagError::DimensionMismatch("matrix size vs flag".into()));
    }
    for s in f.proper_steps() {
        if &s.apply(u)? != s {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Matrix of the restriction of `m` to the invariant subspace `s`, in the
/// row-echelon basis of s (coordinates read off the pivot columns).
fn restrict_to_invariant_subspace(m: &Mat, s: &Subspace) -> Result<Mat, FlagError> {
    let d = s.dim();
    let pivots = s.pivots();
    let mut out = Mat::zero(d, d, s.field().clone());
    for i in 0..d {
        let w = m.mul_vec(s.basis().row(i))?;
        if !s.contains_vec(&w) {
            return Err(FlagError::NotStabilized);
        }
        for (t, &p) in pivots.iter().enumerate() {
            out.set(t, i, w[p]);
        }
    }
    Ok(out)
}

/// True iff f lies in the open piece labelled by p of the u-stabilized
/// locus: writing N = u - 1 and j for the column of m in p, each step must
/// satisfy N V_m + (Ker N^{j-1} cap V_m) inside V_{m-1} while
/// N V_m + (Ker N^j cap V_m) escapes it.  Kernels are taken ambient, which
/// agrees with kernels of the restriction because N stabilizes V_m.
pub fn steinberg_membership(u: &Unipotent, p: &Tableau, f: &Flag) -> Result<bool, FlagError> {
    if p.shape() != *u.jordan_type() {
        return Err(FlagError::TableauShapeMismatch);
    }
    if !springer_membership(u.mat(), f)? {
        return Err(FlagError::NotStabilized);
    }
    let n = f.n();
    let n_mat = u.nilpotent();
    let mut kernel_pows = vec![Subspace::zero(n, f.field().clone())];
    let mut power = Mat::identity(n, f.field().clone());
    for _ in 0..n {
        power = power.mul(n_mat)?;
        kernel_pows.push(power.kernel());
    }
    for m in (1..=n).rev() {
        let j = p.column_of(m).expect("tableau contains every entry") + 1;
        let vm = f.step(m);
        let vm1 = f.step(m - 1);
        let img = image(n_mat, &vm)?;
        let low = img.sum(&kernel_pows[j - 1].intersect(&vm)?)?;
        if !vm1.contains(&low)? {
            return Ok(false);
        }
        let high = img.sum(&kernel_pows[j].intersect(&vm)?)?;
        if vm1.contains(&high)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The tableau recording where the Jordan shape of u restricted to V_m
/// grows as m rises; entry m sits at the box added at step m.
pub fn spaltenstein_tableau(u: &Unipotent, f: &Flag) -> Result<Tableau, FlagError> {
    if !springer_membership(u.mat(), f)? {
        return Err(FlagError::NotStabilized);
    }
    let n_mat = u.nilpotent();
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut prev_parts: Vec<usize> = Vec::new();
    for m in 1..=f.n() {
        let restricted = restrict_to_invariant_subspace(n_mat, &f.step(m))?;
        let shape = jordan_type_of_nilpotent(&restricted)?;
        let parts = shape.parts().to_vec();
        let r = (0..parts.len())
            .find(|&r| parts[r] != prev_parts.get(r).copied().unwrap_or(0))
            .expect("shape grows by one box");
        if r == rows.len() {
            rows.push(Vec::new());
        }
        rows[r].push(m);
        prev_parts = parts;
    }
    Ok(Tableau::new(rows)?)
}

/// The Frobenius-stable partial flag of f at the cumulative block
/// positions (proper positions only); errors when a required subspace
/// moves under Frobenius.
pub fn component_index(f: &Flag, blocks: &[usize]) -> Result<Vec<Subspace>, FlagError> {
    validate_blocks(blocks, f.n())?;
    let mut out = Vec::new();
    let mut pos = 0;
    for &b in blocks {
        pos += b;
        if pos == f.n() {
            break;
        }
        let s = f.step(pos);
        if !s.is_frobenius_stable() {
            return Err(FlagError::NotFrobeniusStable(pos));
        }
        out.push(s);
    }
    Ok(out)
}

/// The coordinate partial flag marking the distinguished component.
pub fn standard_component_index(n: usize, blocks: &[usize], field: &Field) -> Result<Vec<Subspace>, FlagError> {
    validate_blocks(blocks, n)?;
    let standard = Flag::standard(n, field.clone());
    let mut out = Vec::new();
    let mut pos = 0;
    for &b in blocks {
        pos += b;
        if pos == n {
            break;
        }
        out.push(standard.step(pos));
    }
    Ok(out)
}

fn validate_blocks(blocks: &[usize], n: usize) -> Result<(), FlagError> {
    if blocks.contains(&0) || blocks.iter().sum::<usize>() != n {
        return Err(FlagError::BadBlocks(format!("{blocks:?} for dimension {n}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// enumeration

/// Number of complete flags of F^n for the field.
pub fn total_flags(n: usize, field: &Field) -> u128 {
    gaussian_factorial(n, field.size() as u128)
}

struct Level {
    space: Subspace,
    cands: Vec<Vec<Scalar>>,
    idx: usize,
}

/// Streams every complete flag exactly once: each level extends V_t by a
/// canonical quotient-line representative (zeros at the pivots of V_t,
/// leading coefficient 1), taking the leading position from high to low
/// and the free coordinates in scalar text order.
pub struct FlagIter {
    n: usize,
    field: Field,
    stack: Vec<Level>,
    emitted_trivial: bool,
}

/// Iterator over all complete flags, after an upfront budget check.
pub fn flags(n: usize, field: &Field, budget: u128) -> Result<FlagIter, FlagError> {
    let needed = total_flags(n, field);
    if needed > budget {
        return Err(FlagError::BudgetExceeded { needed, budget });
    }
    let mut it = FlagIter {
        n,
        field: field.clone(),
        stack: Vec::new(),
        emitted_trivial: false,
    };
    if n > 1 {
        let root = Subspace::zero(n, field.clone());
        it.stack.push(Level {
            cands: it.candidates(&root),
            space: root,
            idx: 0,
        });
    }
    Ok(it)
}

impl FlagIter {
    fn candidates(&self, space: &Subspace) -> Vec<Vec<Scalar>> {
        let n = self.n;
        let pivots = space.pivots();
        let free_all: Vec<usize> = (0..n).filter(|p| !pivots.contains(p)).collect();
        let pool: Vec<Scalar> = self.field.scalars_lex().collect();
        let mut out = Vec::new();
        for &lead in free_all.iter().rev() {
            let free: Vec<usize> = free_all.iter().copied().filter(|&p| p > lead).collect();
            let mut counters = vec![0usize; free.len()];
            loop {
                let mut v = vec![Scalar::ZERO; n];
                v[lead] = Scalar::ONE;
                for (slot, &p) in free.iter().enumerate() {
                    v[p] = pool[counters[slot]];
                }
                out.push(v);
                let mut slot = free.len();
                loop {
                    if slot == 0 {
                        break;
                    }
                    slot -= 1;
                    counters[slot] += 1;
                    if counters[slot] < pool.len() {
                        break;
                    }
                    counters[slot] = 0;
                    if slot == 0 {
                        slot = usize::MAX;
                        break;
                    }
                }
                if slot == usize::MAX || free.is_empty() {
                    break;
                }
            }
        }
        out
    }
}

impl Iterator for FlagIter {
    type Item = Flag;

    fn next(&mut self) -> Option<Flag> {
        if self.n <= 1 {
            if self.emitted_trivial {
                return None;
            }
            self.emitted_trivial = true;
            return Some(Flag {
                steps: Vec::new(),
                n: self.n,
                field: self.field.clone(),
            });
        }
        loop {
            let depth = self.stack.len();
            if depth == 0 {
                return None;
            }
            let lvl = self.stack.last_mut().unwrap();
            if lvl.idx >= lvl.cands.len() {
                self.stack.pop();
                if let Some(parent) = self.stack.last_mut() {
                    parent.idx += 1;
                }
                continue;
            }
            let mut rows: Vec<Vec<Scalar>> = (0..lvl.space.dim())
                .map(|i| lvl.space.basis().row(i).to_vec())
                .collect();
            rows.push(lvl.cands[lvl.idx].clone());
            let grown = Subspace::from_rows(rows, self.n, self.field.clone())
                .expect("candidate extends the space");
            debug_assert_eq!(grown.dim(), depth);
            if depth == self.n - 1 {
                lvl.idx += 1;
                let mut steps: Vec<Subspace> =
                    self.stack[1..].iter().map(|l| l.space.clone()).collect();
                steps.push(grown);
                return Some(Flag {
                    steps,
                    n: self.n,
                    field: self.field.clone(),
                });
            }
            let cands = self.candidates(&grown);
            self.stack.push(Level {
                space: grown,
                cands,
                idx: 0,
            });
        }
    }
}

/// Number of chains of Frobenius-stable subspaces with the given
/// dimensions, by direct enumeration.
pub fn count_rational_partial_flags(n: usize, dims: &[usize], field: &Field) -> Result<u64, FlagError> {
    if dims.windows(2).any(|w| w[0] >= w[1]) || dims.iter().any(|&d| d == 0 || d >= n) {
        return Err(FlagError::BadBlocks(format!(
            "partial flag dimensions {dims:?} in ambient {n}"
        )));
    }
    if dims.is_empty() {
        return Ok(1);
    }
    let mut chains: Vec<Subspace> = enumerate_rational_subspaces(n, dims[0], field);
    for &d in &dims[1..] {
        let next = enumerate_rational_subspaces(n, d, field);
        let mut grown = Vec::new();
        for prev in &chains {
            for cand in &next {
                if cand.contains(prev)? {
                    grown.push(cand.clone());
                }
            }
        }
        chains = grown;
    }
    Ok(chains.len() as u64)
}

// ---------------------------------------------------------------------------
// varieties

#[derive(Clone, Debug)]
pub enum VarietyKind {
    /// Every flag.
    Full,
    /// Flags at the given relative position with their Frobenius image.
    DeligneLusztig(Perm),
    /// Flags stabilized by the matrix.
    Springer(Mat),
    /// Both conditions at once.
    Intersection(Mat, Perm),
}

#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub n: usize,
    pub field: Field,
    pub kind: VarietyKind,
}

impl VarietySpec {
    pub fn contains(&self, f: &Flag) -> Result<bool, FlagError> {
        match &self.kind {
            VarietyKind::Full => Ok(true),
            VarietyKind::DeligneLusztig(w) => dl_membership(w, f),
            VarietyKind::Springer(u) => springer_membership(u, f),
            VarietyKind::Intersection(u, w) => {
                Ok(springer_membership(u, f)? && dl_membership(w, f)?)
            }
        }
    }

    pub fn count_points(&self, budget: u128) -> Result<u64, FlagError> {
        let mut count = 0u64;
        for f in flags(self.n, &self.field, budget)? {
            if self.contains(&f)? {
                count += 1;
            }
        }
        Ok(count)
    }

    /// All member flags, materialized; prefer [`Self::count_points`] or a
    /// manual loop over [`flags`] when only a fold is needed.
    pub fn collect_points(&self, budget: u128) -> Result<Vec<Flag>, FlagError> {
        let mut out = Vec::new();
        for f in flags(self.n, &self.field, budget)? {
            if self.contains(&f)? {
                out.push(f);
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// serialization

/// JSON value listing the field parameters and one array of row-echelon
/// basis rows per proper step, entries in scalar text format.
pub fn flag_to_json(f: &Flag) -> Value {
    let field = f.field();
    let steps: Vec<Value> = f
        .proper_steps()
        .iter()
        .map(|s| {
            let rows: Vec<Value> = (0..s.dim())
                .map(|i| {
                    let row: Vec<Value> = s
                        .basis()
                        .row(i)
                        .iter()
                        .map(|&a| Value::String(field.scalar_text(a)))
                        .collect();
                    Value::Array(row)
                })
                .collect();
            Value::Array(rows)
        })
        .collect();
    let mut map = BTreeMap::new();
    map.insert("n", json!(f.n()));
    map.insert("p", json!(field.p()));
    map.insert("m", json!(field.m()));
    map.insert("k", json!(field.k()));
    map.insert("steps", Value::Array(steps));
    json!(map)
}

pub fn flag_from_json(v: &Value) -> Result<Flag, FlagError> {
    let geti = |k: &str| -> Result<u64, FlagError> {
        v.get(k)
            .and_then(Value::as_u64)
            .ok_or_else(|| FlagError::Parse(format!("missing field {k:?}")))
    };
    let n = geti("n")? as usize;
    let field = make_field(geti("p")?, geti("m")? as u32, geti("k")? as u32)?;
    let steps_v = v
        .get("steps")
        .and_then(Value::as_array)
        .ok_or_else(|| FlagError::Parse("missing steps".into()))?;
    let mut steps = Vec::new();
    for step in steps_v {
        let rows_v = step
            .as_array()
            .ok_or_else(|| FlagError::Parse("step is not an array".into()))?;
        let mut rows = Vec::new();
        for row in rows_v {
            let entries = row
                .as_array()
                .ok_or_else(|| FlagError::Parse("row is not an array".into()))?;
            let mut parsed = Vec::new();
            for e in entries {
                let s = e
                    .as_str()
                    .ok_or_else(|| FlagError::Parse("entry is not a string".into()))?;
                parsed.push(field.parse_scalar(s)?);
            }
            rows.push(parsed);
        }
        steps.push(Subspace::from_rows(rows, n, field.clone())?);
    }
    Flag::new(steps, n, field)
}
