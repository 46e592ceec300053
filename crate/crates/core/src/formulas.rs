//! Binomial identities, the face-count relation between a sum and its
//! partial sums, the corollary bound and the vertex-count bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::minkowski::{
    minkowski_sum, orientation_of, partial_sum, subsets_up_to, DecomposedFace, MinkowskiError,
    Orientation, SumInstance,
};
use crate::polytope::{combinations, FVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("summands are not in general orientations (face {} of dimension {} decomposes into parts of dimensions {:?})", .0.face, .0.face_dim, .0.part_dims)]
    GeneralOrientationRequired(Box<DecomposedFace>),
    #[error("f_{k} is undefined for partial sums of lower-dimensional summands")]
    LowerDimensionalSummands { k: usize },
    #[error("no value for index set {0:?}")]
    MissingSubset(Vec<usize>),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("claim violated: {0}")]
    ClaimViolated(String),
    #[error(transparent)]
    Minkowski(#[from] MinkowskiError),
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

fn sign(e: i64) -> i128 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `(-1)^(d-1-j) C(r-1-j, d-1-j)`, the weight of the `j`-subsets.
pub fn coefficient(d: usize, r: usize, j: usize) -> i128 {
    let (d, r, j) = (d as i64, r as i64, j as i64);
    sign(d - 1 - j) * binomial(r - 1 - j, d - 1 - j)
}

/// `Σ_{j=1}^{d-1} (-1)^(d-1-j) C(r-1-j, d-1-j) C(r-s, j-s)`, which equals 1.
pub fn lemma6_sum(s: usize, d: usize, r: usize) -> Result<i128, FormulaError> {
    if !(1 <= s && s < d && d <= r) {
        return Err(FormulaError::Precondition(format!(
            "need 1 <= s < d <= r, got s={s}, d={d}, r={r}"
        )));
    }
    Ok((1..d)
        .map(|j| coefficient(d, r, j) * binomial((r - s) as i64, j as i64 - s as i64))
        .sum())
}

/// 2 for vertices in odd dimension, otherwise 0.
pub fn alpha(d: usize, k: usize) -> i128 {
    if k == 0 && d % 2 == 1 {
        2
    } else {
        0
    }
}

/// `f_k` of one partial sum. `subset` holds 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetValue {
    pub subset: Vec<usize>,
    pub value: u64,
}

/// Predicted `f_k` of the full sum from the values on all index sets of
/// size `1..=d-1`.
pub fn theorem1_rhs(
    per_subset: &[SubsetValue],
    d: usize,
    r: usize,
    k: usize,
) -> Result<i128, FormulaError> {
    if r < d {
        return Err(FormulaError::Precondition(format!(
            "need r >= d, got r={r}, d={d}"
        )));
    }
    let a = alpha(d, k);
    let mut total = a;
    for j in 1..d {
        let mut inner: i128 = 0;
        for s in combinations(r, j) {
            let v = per_subset
                .iter()
                .find(|e| e.subset == s)
                .ok_or(FormulaError::MissingSubset(s))?;
            inner += v.value as i128 - a;
        }
        total += coefficient(d, r, j) * inner;
    }
    Ok(total)
}

/// f-vectors of every partial sum with at most `d-1` summands, and of the
/// full sum.
#[derive(Debug, Clone)]
pub struct PartialSumTable {
    pub d: usize,
    pub r: usize,
    /// Ordered by size, then lexicographically.
    pub entries: Vec<(Vec<usize>, FVector)>,
    pub full: FVector,
}

impl PartialSumTable {
    /// Partial sums are computed in parallel; the order of `entries` does
    /// not depend on scheduling.
    pub fn compute(inst: &SumInstance) -> Result<PartialSumTable, FormulaError> {
        let d = inst.dim();
        let r = inst.r();
        let subsets = subsets_up_to(r, d - 1);
        let entries = subsets
            .into_par_iter()
            .map(|s| {
                let p = partial_sum(inst, &s)?;
                Ok((s, p.polytope.f_vector()))
            })
            .collect::<Result<Vec<_>, MinkowskiError>>()?;
        let full = minkowski_sum(inst)?.polytope.f_vector();
        Ok(PartialSumTable {
            d,
            r,
            entries,
            full,
        })
    }

    pub fn values(&self, k: usize) -> Vec<SubsetValue> {
        self.entries
            .iter()
            .map(|(s, f)| SubsetValue {
                subset: s.clone(),
                value: f.get(k).unwrap_or(0),
            })
            .collect()
    }

    /// `Σ_{|S| = d-1} f_k(P_S)`.
    pub fn corollary_bound(&self, k: usize) -> u64 {
        self.entries
            .iter()
            .filter(|(s, _)| s.len() + 1 == self.d)
            .map(|(_, f)| f.get(k).unwrap_or(0))
            .sum()
    }
}

/// One index set with 1-based labels, as reported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledValue {
    pub subset: Vec<usize>,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub d: usize,
    pub r: usize,
    pub k: usize,
    pub alpha: i64,
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
    pub corollary_bound: u64,
    pub corollary_holds: bool,
    pub per_subset: Vec<LabelledValue>,
}

fn check_k(inst: &SumInstance, k: usize) -> Result<(), FormulaError> {
    let d = inst.dim();
    if inst.r() < d {
        return Err(FormulaError::Precondition(format!(
            "need r >= d, got r={}, d={d}",
            inst.r()
        )));
    }
    if k + 1 > d {
        return Err(FormulaError::Precondition(format!(
            "need k < d, got k={k}, d={d}"
        )));
    }
    if k > 0 && !inst.all_full_dimensional() {
        return Err(FormulaError::LowerDimensionalSummands { k });
    }
    Ok(())
}

/// The relation for `f_k` from a precomputed table.
pub fn relation(table: &PartialSumTable, k: usize) -> Result<RelationReport, FormulaError> {
    let per = table.values(k);
    let rhs = theorem1_rhs(&per, table.d, table.r, k)?;
    let lhs = table.full.get(k).unwrap_or(0);
    let bound = table.corollary_bound(k);
    Ok(RelationReport {
        d: table.d,
        r: table.r,
        k,
        alpha: alpha(table.d, k) as i64,
        lhs: lhs as i64,
        rhs: i64::try_from(rhs).map_err(|_| FormulaError::Overflow)?,
        equal: lhs as i128 == rhs,
        corollary_bound: bound,
        corollary_holds: lhs <= bound,
        per_subset: per
            .into_iter()
            .map(|v| LabelledValue {
                subset: v.subset.iter().map(|i| i + 1).collect(),
                value: v.value,
            })
            .collect(),
    })
}

/// Checks every precondition, then evaluates the relation for each `k` in
/// `ks` from one table of partial sums.
pub fn verify_theorem1_all(
    inst: &SumInstance,
    ks: &[usize],
) -> Result<Vec<RelationReport>, FormulaError> {
    for &k in ks {
        check_k(inst, k)?;
    }
    let sum = minkowski_sum(inst)?;
    if let Orientation::Degenerate(face) = orientation_of(inst, &sum) {
        return Err(FormulaError::GeneralOrientationRequired(Box::new(face)));
    }
    let table = PartialSumTable::compute(inst)?;
    ks.iter().map(|&k| relation(&table, k)).collect()
}

pub fn verify_theorem1(inst: &SumInstance, k: usize) -> Result<RelationReport, FormulaError> {
    verify_theorem1_all(inst, &[k]).map(|mut v| v.remove(0))
}

/// `Σ_{|S| = d-1} f_k(P_S)`, checked against `f_k` of the full sum.
pub fn corollary_bound(inst: &SumInstance, k: usize) -> Result<u64, FormulaError> {
    let rep = verify_theorem1(inst, k)?;
    if !rep.corollary_holds {
        return Err(FormulaError::ClaimViolated(format!(
            "f_{k} = {} exceeds the bound {}",
            rep.lhs, rep.corollary_bound
        )));
    }
    Ok(rep.corollary_bound)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexBounds {
    /// `Σ_{|S| = d-1} Π_{i∈S} n_i`.
    pub product_bound: u128,
    /// `C(Σ n_i, d-1)`.
    pub choose_total: u128,
    /// `C(r, d-1) · (max n_i)^(d-1)`.
    pub choose_each: u128,
}

pub fn vertex_bounds(d: usize, counts: &[u64]) -> Result<VertexBounds, FormulaError> {
    let r = counts.len();
    if d < 2 || r < d {
        return Err(FormulaError::Precondition(format!(
            "need r >= d >= 2, got r={r}, d={d}"
        )));
    }
    let mut product_bound: u128 = 0;
    for s in combinations(r, d - 1) {
        let mut p: u128 = 1;
        for i in s {
            p = p
                .checked_mul(counts[i] as u128)
                .ok_or(FormulaError::Overflow)?;
        }
        product_bound = product_bound.checked_add(p).ok_or(FormulaError::Overflow)?;
    }
    let total: u64 = counts.iter().sum();
    let choose_total = binomial(total as i64, d as i64 - 1) as u128;
    let max = *counts.iter().max().unwrap() as u128;
    let choose_each = (binomial(r as i64, d as i64 - 1) as u128)
        .checked_mul(
            max.checked_pow(d as u32 - 1)
                .ok_or(FormulaError::Overflow)?,
        )
        .ok_or(FormulaError::Overflow)?;
    Ok(VertexBounds {
        product_bound,
        choose_total,
        choose_each,
    })
}

/// Vertex count of a sum of `r` summands with `n` vertices each in even
/// dimension `d` when every `(d-1)`-fold partial sum is extremal.
pub fn exact_count_even_d(d: usize, r: usize, n: u64) -> Result<i128, FormulaError> {
    if d % 2 == 1 || d == 0 {
        return Err(FormulaError::Precondition(format!(
            "the closed form holds for even d only, got d={d}"
        )));
    }
    if r < d {
        return Err(FormulaError::Precondition(format!(
            "need r >= d, got r={r}, d={d}"
        )));
    }
    let mut total: i128 = 0;
    for j in 1..d {
        let term = coefficient(d, r, j)
            .checked_mul(binomial(r as i64, j as i64))
            .and_then(|t| t.checked_mul((n as i128).checked_pow(j as u32)?))
            .ok_or(FormulaError::Overflow)?;
        total += term;
    }
    Ok(total)
}
