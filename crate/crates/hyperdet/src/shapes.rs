//! Integer partitions, two-layer plane partitions ⟨λ, μ⟩ marking forced-zero
//! regions of the two faces of a 2 x (k+1) x k hypermatrix, the staircase Δ,
//! containment, and enumeration of all subshapes of Δ.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShapesError {
    #[error("parts {0:?} are not weakly decreasing")]
    NotDecreasing(Vec<usize>),
    #[error("part {part} exceeds the box height {box_height}")]
    BoxExceeded { part: usize, box_height: usize },
    #[error("second layer is not contained in the first")]
    NotNested,
    #[error("invalid shape: {0}")]
    Parse(String),
}

/// A weakly decreasing list of nonnegative parts of fixed length, bounded by
/// a box height. The empty partition is the all-zeros list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerPartition {
    parts: Vec<usize>,
    box_height: usize,
}

impl fmt::Debug for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntegerPartition({self})")
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl IntegerPartition {
    pub fn new(parts: Vec<usize>, box_height: usize) -> Result<Self, ShapesError> {
        if parts.windows(2).any(|w| w[1] > w[0]) {
            return Err(ShapesError::NotDecreasing(parts));
        }
        if let Some(&first) = parts.first() {
            if first > box_height {
                return Err(ShapesError::BoxExceeded {
                    part: first,
                    box_height,
                });
            }
        }
        Ok(IntegerPartition { parts, box_height })
    }

    pub fn empty(len: usize, box_height: usize) -> Self {
        IntegerPartition {
            parts: vec![0; len],
            box_height,
        }
    }

    /// Parse `"2,1"` or the literal `"empty"`, zero-padded to length `len`.
    pub fn parse(s: &str, len: usize, box_height: usize) -> Result<Self, ShapesError> {
        let s = s.trim();
        if s.is_empty() || s == "empty" {
            return Ok(Self::empty(len, box_height));
        }
        let mut parts = Vec::new();
        for tok in s.split(',') {
            let v: usize = tok
                .trim()
                .parse()
                .map_err(|_| ShapesError::Parse(format!("bad part {tok:?}")))?;
            parts.push(v);
        }
        if parts.len() > len {
            return Err(ShapesError::Parse(format!(
                "expected at most {len} parts, got {}",
                parts.len()
            )));
        }
        parts.resize(len, 0);
        Self::new(parts, box_height)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(|&p| p == 0)
    }

    pub fn box_height(&self) -> usize {
        self.box_height
    }

    /// Part i, 1-based.
    pub fn part(&self, i: usize) -> usize {
        self.parts[i - 1]
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of cells.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// self contains other, componentwise. Lengths must agree.
    pub fn contains(&self, other: &IntegerPartition) -> bool {
        assert_eq!(self.len(), other.len(), "format mismatch");
        self.parts.iter().zip(&other.parts).all(|(a, b)| b <= a)
    }

    /// Conjugate partition in the transposed box: the result has
    /// `box_height` parts bounded by `len`.
    pub fn transpose(&self) -> IntegerPartition {
        let parts = (1..=self.box_height)
            .map(|i| self.parts.iter().filter(|&&p| p >= i).count())
            .collect();
        IntegerPartition {
            parts,
            box_height: self.len(),
        }
    }
}

/// A nested pair ⟨λ, μ⟩ of partitions of length k in a box of height k+1,
/// with μ ⊆ λ. λ marks the forced-zero region of the front face, μ of the
/// back face.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePartition {
    k: usize,
    lam: IntegerPartition,
    mu: IntegerPartition,
}

impl fmt::Debug for PlanePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlanePartition{self}")
    }
}

impl fmt::Display for PlanePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<({}),({})>", self.lam, self.mu)
    }
}

/// Which face of the hypermatrix a cell constraint applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Face {
    Front,
    Back,
}

impl PlanePartition {
    pub fn new(lam: IntegerPartition, mu: IntegerPartition) -> Result<Self, ShapesError> {
        let k = lam.len();
        assert!(k >= 1, "format parameter k must be >= 1");
        assert_eq!(mu.len(), k, "format mismatch: layers have different lengths");
        assert_eq!(lam.box_height(), k + 1, "lambda box height must be k+1");
        assert_eq!(mu.box_height(), k + 1, "mu box height must be k+1");
        if !lam.contains(&mu) {
            return Err(ShapesError::NotNested);
        }
        Ok(PlanePartition { k, lam, mu })
    }

    pub fn from_parts(k: usize, lam: &[usize], mu: &[usize]) -> Result<Self, ShapesError> {
        let lam = IntegerPartition::new(lam.to_vec(), k + 1)?;
        let mu = IntegerPartition::new(mu.to_vec(), k + 1)?;
        Self::new(lam, mu)
    }

    pub fn empty(k: usize) -> Self {
        PlanePartition {
            k,
            lam: IntegerPartition::empty(k, k + 1),
            mu: IntegerPartition::empty(k, k + 1),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lam(&self) -> &IntegerPartition {
        &self.lam
    }

    pub fn mu(&self) -> &IntegerPartition {
        &self.mu
    }

    pub fn size(&self) -> usize {
        self.lam.size() + self.mu.size()
    }

    /// P contains P' layerwise.
    pub fn contains(&self, smaller: &PlanePartition) -> bool {
        assert_eq!(self.k, smaller.k, "format mismatch");
        self.lam.contains(&smaller.lam) && self.mu.contains(&smaller.mu)
    }

    /// Is the 1-based cell (row, col) of the given face inside the
    /// forced-zero region?
    pub fn cell_in_shape(&self, face: Face, row: usize, col: usize) -> bool {
        assert!(
            (1..=self.k + 1).contains(&row) && (1..=self.k).contains(&col),
            "index out of range: ({row}, {col}) for k = {}",
            self.k
        );
        let part = match face {
            Face::Front => self.lam.part(col),
            Face::Back => self.mu.part(col),
        };
        row > self.k + 1 - part
    }
}

/// The staircase Δ: λ = (k, k-1, ..., 1), μ = (k-1, ..., 1, 0). This is the
/// unique maximal shape that still allows nondegenerate hypermatrices.
pub fn staircase_delta(k: usize) -> PlanePartition {
    assert!(k >= 1);
    let lam = IntegerPartition::new((1..=k).rev().collect(), k + 1).unwrap();
    let mu = IntegerPartition::new((0..k).rev().collect(), k + 1).unwrap();
    PlanePartition::new(lam, mu).unwrap()
}

/// Every plane partition P ⊆ Δ for the given k, in lexicographic order of
/// (λ parts, μ parts). The list is deterministic and indexable, so parallel
/// sweeps can shard it by position.
pub fn enumerate_subshapes(k: usize) -> Vec<PlanePartition> {
    let delta = staircase_delta(k);
    let lams = bounded_partitions(delta.lam().parts());
    let mut out = Vec::new();
    for lam in lams {
        let mu_cap: Vec<usize> = delta
            .mu()
            .parts()
            .iter()
            .zip(&lam)
            .map(|(&d, &l)| d.min(l))
            .collect();
        for mu in bounded_partitions(&mu_cap) {
            out.push(
                PlanePartition::from_parts(k, &lam, &mu)
                    .expect("enumeration respects nesting by construction"),
            );
        }
    }
    out
}

/// Weakly decreasing sequences bounded componentwise by `caps`, ascending
/// lexicographically.
pub fn bounded_partitions(caps: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; caps.len()];
    fn rec(caps: &[usize], cur: &mut Vec<usize>, i: usize, prev: usize, out: &mut Vec<Vec<usize>>) {
        if i == caps.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=caps[i].min(prev) {
            cur[i] = v;
            rec(caps, cur, i + 1, v, out);
        }
    }
    rec(caps, &mut cur, 0, usize::MAX, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_create() {
        assert!(IntegerPartition::new(vec![4, 2, 1, 0], 4).is_ok());
        let empty = IntegerPartition::new(vec![0, 0, 0], 5).unwrap();
        assert!(empty.is_empty());
        assert_eq!(
            IntegerPartition::new(vec![1, 2], 4).unwrap_err(),
            ShapesError::NotDecreasing(vec![1, 2])
        );
        assert!(matches!(
            IntegerPartition::new(vec![5, 1], 4).unwrap_err(),
            ShapesError::BoxExceeded { .. }
        ));
    }

    #[test]
    fn transpose_examples() {
        let stair = IntegerPartition::new(vec![2, 1, 0], 3).unwrap();
        assert_eq!(stair.transpose(), stair);
        let empty = IntegerPartition::empty(4, 4);
        assert_eq!(empty.transpose(), empty);
        let lam = IntegerPartition::new(vec![3, 1, 1, 0], 4).unwrap();
        assert_eq!(lam.transpose().parts(), &[3, 1, 1, 0]);
        // column-count oracle on random-ish shapes
        for parts in [vec![4, 2, 1, 0], vec![3, 3, 0, 0], vec![2, 2, 2, 2]] {
            let p = IntegerPartition::new(parts, 4).unwrap();
            let t = p.transpose();
            for i in 1..=4 {
                let count = p.parts().iter().filter(|&&x| x >= i).count();
                assert_eq!(t.part(i), count);
            }
            assert_eq!(t.transpose(), p);
        }
    }

    #[test]
    fn staircase_examples() {
        let d2 = staircase_delta(2);
        assert_eq!(d2.lam().parts(), &[2, 1]);
        assert_eq!(d2.mu().parts(), &[1, 0]);
        let d1 = staircase_delta(1);
        assert_eq!((d1.lam().parts(), d1.mu().parts()), (&[1][..], &[0][..]));
        let d3 = staircase_delta(3);
        assert_eq!(d3.lam().parts(), &[3, 2, 1]);
        assert_eq!(d3.mu().parts(), &[2, 1, 0]);
    }

    #[test]
    fn containment() {
        let d2 = staircase_delta(2);
        assert!(d2.contains(&PlanePartition::empty(2)));
        assert!(d2.contains(&d2));
        let p = PlanePartition::from_parts(2, &[1, 0], &[1, 0]).unwrap();
        let q = PlanePartition::from_parts(2, &[2, 0], &[1, 0]).unwrap();
        assert!(!p.contains(&q));
        assert!(q.contains(&p));
    }

    #[test]
    fn nesting_enforced() {
        assert_eq!(
            PlanePartition::from_parts(2, &[1, 0], &[1, 1]).unwrap_err(),
            ShapesError::NotNested
        );
    }

    #[test]
    fn subshape_counts() {
        assert_eq!(enumerate_subshapes(1).len(), 2);
        assert_eq!(enumerate_subshapes(2).len(), 9);
        // k = 2: exactly three shapes besides Delta have a nonempty second layer
        let d2 = staircase_delta(2);
        let special: Vec<_> = enumerate_subshapes(2)
            .into_iter()
            .filter(|p| *p != d2 && !p.mu().is_empty())
            .collect();
        assert_eq!(special.len(), 3);
        // k = 3: forty such shapes
        let d3 = staircase_delta(3);
        let count3 = enumerate_subshapes(3)
            .iter()
            .filter(|p| **p != d3 && !p.mu().is_empty())
            .count();
        assert_eq!(count3, 40);
    }

    #[test]
    fn subshapes_distinct_and_contained() {
        for k in 1..=4 {
            let delta = staircase_delta(k);
            let shapes = enumerate_subshapes(k);
            let mut seen = std::collections::HashSet::new();
            for p in &shapes {
                assert!(delta.contains(p));
                assert!(seen.insert(p.clone()));
            }
            if k > 1 {
                assert!(shapes.len() > enumerate_subshapes(k - 1).len());
            }
        }
    }

    #[test]
    fn cell_in_shape_examples() {
        let d2 = staircase_delta(2);
        assert!(d2.cell_in_shape(Face::Front, 3, 1));
        assert!(d2.cell_in_shape(Face::Front, 2, 1));
        assert!(!d2.cell_in_shape(Face::Front, 1, 1));
        let empty = PlanePartition::empty(2);
        for row in 1..=3 {
            for col in 1..=2 {
                assert!(!empty.cell_in_shape(Face::Front, row, col));
                assert!(!empty.cell_in_shape(Face::Back, row, col));
            }
        }
        let p = PlanePartition::from_parts(2, &[1, 0], &[1, 0]).unwrap();
        assert!(p.cell_in_shape(Face::Back, 3, 1));
        assert!(!p.cell_in_shape(Face::Back, 2, 1));
    }

    #[test]
    #[should_panic(expected = "index out of range")]
    fn cell_out_of_range_panics() {
        staircase_delta(2).cell_in_shape(Face::Front, 4, 1);
    }

    #[test]
    fn parse_shapes() {
        let lam = IntegerPartition::parse("2,1", 2, 3).unwrap();
        assert_eq!(lam.parts(), &[2, 1]);
        let mu = IntegerPartition::parse("empty", 2, 3).unwrap();
        assert!(mu.is_empty());
        let padded = IntegerPartition::parse("1", 3, 4).unwrap();
        assert_eq!(padded.parts(), &[1, 0, 0]);
        assert!(IntegerPartition::parse("1,2", 2, 3).is_err());
    }
}
