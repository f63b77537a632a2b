//! Semilinear sets: finite unions of linear sets base + N-span(periods).
//!
//! The algebra implemented here is exact. Union and Minkowski sum are
//! structural; Kleene star uses the commutative identity
//! (L1 | ... | Lk)* = (L1*) + ... + (Lk*) with L* = {0} | (b + span(P, b));
//! intersection reduces to minimal solutions of a linear Diophantine
//! system.

use std::fmt;

use crate::error::GrammarError;
use crate::parikh::diophantine::{minimal_solutions, Solutions};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearSet {
    pub base: Vec<u64>,
    pub periods: Vec<Vec<u64>>,
}

impl LinearSet {
    pub fn point(base: Vec<u64>) -> LinearSet {
        LinearSet {
            base,
            periods: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    fn normalize(&mut self) {
        self.periods.retain(|p| p.iter().any(|&c| c > 0));
        self.periods.sort();
        self.periods.dedup();
    }

    /// v in base + span(periods)?
    pub fn contains(&self, v: &[u64]) -> bool {
        if v.len() != self.dim() {
            return false;
        }
        let mut target = Vec::with_capacity(v.len());
        for (a, b) in v.iter().zip(&self.base) {
            if a < b {
                return false;
            }
            target.push(a - b);
        }
        in_span(&target, &self.periods)
    }

    /// Sufficient test for self being a subset of other: the base lies in
    /// `other` and every period lies in the span of `other`'s periods.
    fn subsumed_by(&self, other: &LinearSet) -> bool {
        other.contains(&self.base)
            && self
                .periods
                .iter()
                .all(|p| in_span(p, &other.periods))
    }

    fn sum(&self, other: &LinearSet) -> LinearSet {
        let mut l = LinearSet {
            base: self
                .base
                .iter()
                .zip(&other.base)
                .map(|(a, b)| a + b)
                .collect(),
            periods: self
                .periods
                .iter()
                .chain(other.periods.iter())
                .cloned()
                .collect(),
        };
        l.normalize();
        l
    }

    /// Nonempty repetitions: b + span(P union {b}).
    fn plus(&self) -> LinearSet {
        let mut periods = self.periods.clone();
        periods.push(self.base.clone());
        let mut l = LinearSet {
            base: self.base.clone(),
            periods,
        };
        l.normalize();
        l
    }
}

/// Exact membership of `target` in the N-span of `periods`, by depth-first
/// search with per-coordinate bounds.
pub fn in_span(target: &[u64], periods: &[Vec<u64>]) -> bool {
    if target.iter().all(|&c| c == 0) {
        return true;
    }
    fn rec(target: &mut Vec<u64>, periods: &[Vec<u64>]) -> bool {
        if target.iter().all(|&c| c == 0) {
            return true;
        }
        let (first, rest) = match periods.split_first() {
            Some(x) => x,
            None => return false,
        };
        // max multiplier for `first`
        let mut max = u64::MAX;
        for (t, p) in target.iter().zip(first) {
            if *p > 0 {
                max = max.min(t / p);
            }
        }
        if max == u64::MAX {
            // zero period, skip
            return rec(target, rest);
        }
        for k in 0..=max {
            let mut reduced: Vec<u64> = target
                .iter()
                .zip(first)
                .map(|(t, p)| t - k * p)
                .collect();
            if rec(&mut reduced, rest) {
                return true;
            }
        }
        false
    }
    let mut t = target.to_vec();
    rec(&mut t, periods)
}

/// A finite union of linear sets over a fixed dimension. The empty union
/// denotes the empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearSet {
    pub dim: usize,
    pub parts: Vec<LinearSet>,
}

impl SemilinearSet {
    pub fn empty(dim: usize) -> SemilinearSet {
        SemilinearSet {
            dim,
            parts: Vec::new(),
        }
    }

    pub fn zero(dim: usize) -> SemilinearSet {
        SemilinearSet {
            dim,
            parts: vec![LinearSet::point(vec![0; dim])],
        }
    }

    pub fn point(v: Vec<u64>) -> SemilinearSet {
        SemilinearSet {
            dim: v.len(),
            parts: vec![LinearSet::point(v)],
        }
    }

    pub fn from_parts(dim: usize, parts: Vec<LinearSet>) -> SemilinearSet {
        let mut s = SemilinearSet { dim, parts };
        s.normalize();
        s
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn member(&self, v: &[u64]) -> Result<bool, GrammarError> {
        if v.len() != self.dim {
            return Err(GrammarError::DimensionMismatch(v.len(), self.dim));
        }
        Ok(self.parts.iter().any(|l| l.contains(v)))
    }

    pub fn union(&self, other: &SemilinearSet) -> Result<SemilinearSet, GrammarError> {
        if self.dim != other.dim {
            return Err(GrammarError::DimensionMismatch(self.dim, other.dim));
        }
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Ok(SemilinearSet::from_parts(self.dim, parts))
    }

    /// Minkowski sum.
    pub fn sum(&self, other: &SemilinearSet) -> Result<SemilinearSet, GrammarError> {
        if self.dim != other.dim {
            return Err(GrammarError::DimensionMismatch(self.dim, other.dim));
        }
        let mut parts = Vec::with_capacity(self.parts.len() * other.parts.len());
        for a in &self.parts {
            for b in &other.parts {
                parts.push(a.sum(b));
            }
        }
        Ok(SemilinearSet::from_parts(self.dim, parts))
    }

    /// Kleene star under commutativity: fold over parts with
    /// S* = prod_i ({0} | Li+).
    pub fn star(&self) -> SemilinearSet {
        let mut acc = SemilinearSet::zero(self.dim);
        for l in &self.parts {
            let plus = l.plus();
            let mut parts = acc.parts.clone();
            for a in &acc.parts {
                parts.push(a.sum(&plus));
            }
            acc = SemilinearSet::from_parts(self.dim, parts);
        }
        acc
    }

    /// Image under a linear map given as a matrix with `rows` rows; entry
    /// `matrix[r][c]` multiplies input coordinate c into output row r.
    pub fn linear_map(&self, matrix: &[Vec<u64>]) -> Result<SemilinearSet, GrammarError> {
        let rows = matrix.len();
        for row in matrix {
            if row.len() != self.dim {
                return Err(GrammarError::DimensionMismatch(row.len(), self.dim));
            }
        }
        let apply = |v: &[u64]| -> Vec<u64> {
            matrix
                .iter()
                .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
                .collect()
        };
        let parts = self
            .parts
            .iter()
            .map(|l| {
                let mut nl = LinearSet {
                    base: apply(&l.base),
                    periods: l.periods.iter().map(|p| apply(p)).collect(),
                };
                nl.normalize();
                nl
            })
            .collect();
        Ok(SemilinearSet::from_parts(rows, parts))
    }

    /// Exact intersection via minimal solutions of the induced linear
    /// Diophantine systems.
    pub fn intersect(&self, other: &SemilinearSet) -> Result<SemilinearSet, GrammarError> {
        if self.dim != other.dim {
            return Err(GrammarError::DimensionMismatch(self.dim, other.dim));
        }
        let mut parts = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                parts.extend(intersect_linear(a, b)?);
            }
        }
        Ok(SemilinearSet::from_parts(self.dim, parts))
    }

    /// Keep the representation small: drop duplicate and subsumed parts
    /// and merge base-shifted pairs.
    fn normalize(&mut self) {
        for l in &mut self.parts {
            l.normalize();
        }
        self.parts.sort();
        self.parts.dedup();
        if self.parts.len() > 1 {
            let parts = std::mem::take(&mut self.parts);
            let mut kept: Vec<LinearSet> = Vec::with_capacity(parts.len());
            for l in parts {
                if !kept.iter().any(|k| l.subsumed_by(k)) {
                    kept.retain(|k| !k.subsumed_by(&l));
                    kept.push(l);
                }
            }
            // Exact pairwise merge: (b, P) with (b+p, P | {p}) is
            // (b, P | {p}).
            let mut merged = true;
            while merged && kept.len() > 1 {
                merged = false;
                'scan: for i in 0..kept.len() {
                    for j in 0..kept.len() {
                        if i == j {
                            continue;
                        }
                        if let Some(m) = merge_shifted(&kept[i], &kept[j]) {
                            let (lo, hi) = (i.min(j), i.max(j));
                            kept.remove(hi);
                            kept.remove(lo);
                            kept.push(m);
                            merged = true;
                            break 'scan;
                        }
                    }
                }
            }
            kept.sort();
            self.parts = kept;
        }
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "empty");
        }
        for (i, l) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "base ({})", join(&l.base))?;
            if !l.periods.is_empty() {
                write!(f, "; periods {{")?;
                for (j, p) in l.periods.iter().enumerate() {
                    if j > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "({})", join(p))?;
                }
                write!(f, "}}")?;
            }
        }
        Ok(())
    }
}

fn join(v: &[u64]) -> String {
    v.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// The union of (b, P) and (b + p, P | {p}) is exactly (b, P | {p}):
/// zero uses of p land in the first set, positive uses in the second.
fn merge_shifted(a: &LinearSet, b: &LinearSet) -> Option<LinearSet> {
    if b.base.len() != a.base.len() {
        return None;
    }
    let p: Vec<u64> = b
        .base
        .iter()
        .zip(&a.base)
        .map(|(x, y)| x.checked_sub(*y))
        .collect::<Option<_>>()?;
    if p.iter().all(|&c| c == 0) {
        return None;
    }
    if !b.periods.contains(&p) {
        return None;
    }
    let mut expected = a.periods.clone();
    if !expected.contains(&p) {
        expected.push(p);
    }
    expected.sort();
    if expected == b.periods {
        Some(LinearSet {
            base: a.base.clone(),
            periods: b.periods.clone(),
        })
    } else {
        None
    }
}

/// Intersection of two linear sets: solve b1 + P1 l = b2 + P2 m over N and
/// convert generators back through the left-hand parameterization.
fn intersect_linear(a: &LinearSet, b: &LinearSet) -> Result<Vec<LinearSet>, GrammarError> {
    let dim = a.dim();
    let p1 = a.periods.len();
    let p2 = b.periods.len();
    // System rows: for each coordinate d: sum P1[j][d] l_j - P2[j][d] m_j
    // = b2[d] - b1[d].
    let mut matrix: Vec<Vec<i64>> = Vec::with_capacity(dim);
    let mut rhs: Vec<i64> = Vec::with_capacity(dim);
    for d in 0..dim {
        let mut row = Vec::with_capacity(p1 + p2);
        for p in &a.periods {
            row.push(p[d] as i64);
        }
        for p in &b.periods {
            row.push(-(p[d] as i64));
        }
        matrix.push(row);
        rhs.push(b.base[d] as i64 - a.base[d] as i64);
    }
    let Solutions {
        inhomogeneous,
        homogeneous,
    } = minimal_solutions(&matrix, &rhs)?;
    let mut out = Vec::new();
    for sol in &inhomogeneous {
        let mut base = a.base.clone();
        for (j, p) in a.periods.iter().enumerate() {
            for d in 0..dim {
                base[d] += sol[j] * p[d];
            }
        }
        let mut periods = Vec::new();
        for h in &homogeneous {
            let mut v = vec![0u64; dim];
            for (j, p) in a.periods.iter().enumerate() {
                for d in 0..dim {
                    v[d] += h[j] * p[d];
                }
            }
            if v.iter().any(|&c| c > 0) {
                periods.push(v);
            }
        }
        let mut l = LinearSet { base, periods };
        l.normalize();
        out.push(l);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(base: &[u64], periods: &[&[u64]]) -> LinearSet {
        LinearSet {
            base: base.to_vec(),
            periods: periods.iter().map(|p| p.to_vec()).collect(),
        }
    }

    #[test]
    fn membership_in_diagonal() {
        // {(n,n)}
        let s = SemilinearSet::from_parts(2, vec![ls(&[0, 0], &[&[1, 1]])]);
        assert!(s.member(&[3, 3]).unwrap());
        assert!(!s.member(&[2, 3]).unwrap());
        assert!(s.member(&[0, 0]).unwrap());
    }

    #[test]
    fn intersect_diagonal_with_n_one() {
        // {(n,n)} and {(n,1)}
        let diag = SemilinearSet::from_parts(2, vec![ls(&[0, 0], &[&[1, 1]])]);
        let n1 = SemilinearSet::from_parts(2, vec![ls(&[0, 1], &[&[1, 0]])]);
        let i = diag.intersect(&n1).unwrap();
        // Exactly {(1,1)}: cross-check membership on a grid.
        for x in 0..=6u64 {
            for y in 0..=6u64 {
                let expect = x == y && y == 1;
                assert_eq!(i.member(&[x, y]).unwrap(), expect, "at ({x},{y})");
            }
        }
    }

    #[test]
    fn intersect_agrees_with_pointwise_membership() {
        let s1 = SemilinearSet::from_parts(
            2,
            vec![ls(&[1, 0], &[&[2, 1]]), ls(&[0, 3], &[&[1, 1], &[0, 2]])],
        );
        let s2 = SemilinearSet::from_parts(2, vec![ls(&[0, 0], &[&[1, 2], &[3, 0]])]);
        let i = s1.intersect(&s2).unwrap();
        for x in 0..=10u64 {
            for y in 0..=10u64 {
                let v = [x, y];
                let expect = s1.member(&v).unwrap() && s2.member(&v).unwrap();
                assert_eq!(i.member(&v).unwrap(), expect, "at ({x},{y})");
            }
        }
    }

    #[test]
    fn star_of_two_points_fills_the_grid() {
        let s = SemilinearSet::from_parts(2, vec![ls(&[1, 0], &[]), ls(&[0, 1], &[])]);
        let star = s.star();
        for x in 0..=5u64 {
            for y in 0..=5u64 {
                assert!(star.member(&[x, y]).unwrap());
            }
        }
    }

    #[test]
    fn star_matches_bounded_sums() {
        // star of {(1,0) + span{(0,1)}} is {0} plus {(k,j) : k >= 1}.
        let s = SemilinearSet::from_parts(2, vec![ls(&[1, 0], &[&[0, 1]])]);
        let star = s.star();
        for x in 0..=5u64 {
            for y in 0..=5u64 {
                let expect = (x == 0 && y == 0) || x >= 1;
                assert_eq!(star.member(&[x, y]).unwrap(), expect, "at ({x},{y})");
            }
        }
    }

    #[test]
    fn sum_is_minkowski() {
        let a = SemilinearSet::point(vec![1, 2]);
        let b = SemilinearSet::from_parts(2, vec![ls(&[0, 1], &[&[1, 0]])]);
        let c = a.sum(&b).unwrap();
        for x in 0..=6u64 {
            for y in 0..=6u64 {
                let expect = y == 3 && x >= 1;
                assert_eq!(c.member(&[x, y]).unwrap(), expect);
            }
        }
    }

    #[test]
    fn empty_behaves_as_annihilator() {
        let e = SemilinearSet::empty(2);
        let s = SemilinearSet::point(vec![1, 1]);
        assert!(e.sum(&s).unwrap().is_empty());
        assert!(e.intersect(&s).unwrap().is_empty());
        assert_eq!(e.star().parts.len(), 1, "empty star is {{0}}");
        assert!(s.intersect(&e).unwrap().is_empty());
    }

    #[test]
    fn linear_map_law() {
        let s = SemilinearSet::from_parts(2, vec![ls(&[1, 2], &[&[1, 0], &[0, 1]])]);
        // project to first coordinate doubled
        let m = vec![vec![2, 0]];
        let mapped = s.linear_map(&m).unwrap();
        for x in 1..=5u64 {
            for y in 2..=5u64 {
                assert!(s.member(&[x, y]).unwrap());
                assert!(mapped.member(&[2 * x]).unwrap());
            }
        }
    }
}
