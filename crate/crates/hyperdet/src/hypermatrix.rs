//! The 2 x (k+1) x k hypermatrix, stored as its two (k+1) x k faces, the
//! GL_{k+1} x GL_k action, the standard nondegenerate hypermatrix E, and the
//! nondegeneracy decision.
//!
//! Nondegeneracy of a boundary-format hypermatrix reduces to: every nonzero
//! linear combination c1 * front + c2 * back, with c1, c2 ranging over the
//! algebraic closure, has full rank. We decide that without leaving F_q by
//! looking at the k+1 maximal minors of the pencil x * front + y * back,
//! which are binary forms of degree k: the combination at a projective point
//! drops rank exactly when all minors vanish there, so the hypermatrix is
//! degenerate iff the minors share a projective root. Roots at (1:0) are
//! visible in the x^k coefficients; finite roots over any extension are
//! detected by the gcd of the dehomogenized forms, whose degree does not
//! change under base field extension.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::gf::{embed, Field, FieldElement, GfError, DEFAULT_Q_BOUND};
use crate::linalg::{poly_gcd, FqMatrix, FqPolynomial};
use crate::shapes::PlanePartition;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypermatrixError {
    #[error("closure oracle requires a prime base field")]
    NonPrimeField,
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("invalid hypermatrix literal: {0}")]
    Parse(String),
}

/// A 2 x (k+1) x k hypermatrix as the pair of its faces.
#[derive(Clone, PartialEq, Eq)]
pub struct Hypermatrix {
    k: usize,
    front: FqMatrix,
    back: FqMatrix,
}

impl fmt::Debug for Hypermatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypermatrix k={}\nfront: {:?}back: {:?}", self.k, self.front, self.back)
    }
}

impl Hypermatrix {
    pub fn new(front: FqMatrix, back: FqMatrix) -> Self {
        assert!(front.rows() >= 2 && front.rows() == front.cols() + 1,
            "faces must be (k+1) x k with k >= 1");
        assert_eq!((front.rows(), front.cols()), (back.rows(), back.cols()),
            "faces must share dimensions");
        assert!(front.field() == back.field(), "faces must share the field");
        Hypermatrix {
            k: front.cols(),
            front,
            back,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn front(&self) -> &FqMatrix {
        &self.front
    }

    pub fn back(&self) -> &FqMatrix {
        &self.back
    }

    pub fn field(&self) -> &Arc<Field> {
        self.front.field()
    }

    /// Entry mutation for the brute-force odometers; dimensions never change.
    pub(crate) fn set_entry(
        &mut self,
        face: crate::shapes::Face,
        row0: usize,
        col0: usize,
        v: FieldElement,
    ) {
        match face {
            crate::shapes::Face::Front => self.front.set(row0, col0, v),
            crate::shapes::Face::Back => self.back.set(row0, col0, v),
        }
    }

    /// Parse the literal format
    /// `{"k": 2, "q": "2", "front": [[..], ..], "back": [[..], ..]}`
    /// with entries given as field element indices.
    pub fn from_json_str(s: &str) -> Result<Self, HypermatrixError> {
        let v: Value =
            serde_json::from_str(s).map_err(|e| HypermatrixError::Parse(e.to_string()))?;
        let k = v["k"]
            .as_u64()
            .ok_or_else(|| HypermatrixError::Parse("missing k".into()))? as usize;
        if k < 1 {
            return Err(HypermatrixError::Parse("k must be >= 1".into()));
        }
        let qs = v["q"]
            .as_str()
            .ok_or_else(|| HypermatrixError::Parse("missing q".into()))?;
        let (p, m) = crate::gf::parse_q(qs)?;
        let field = Field::new(p, m)?;
        let face = |name: &str| -> Result<FqMatrix, HypermatrixError> {
            let rows = v[name]
                .as_array()
                .ok_or_else(|| HypermatrixError::Parse(format!("missing face {name}")))?;
            if rows.len() != k + 1 {
                return Err(HypermatrixError::Parse(format!(
                    "face {name} must have {} rows",
                    k + 1
                )));
            }
            let mut data = Vec::with_capacity(k + 1);
            for row in rows {
                let row = row
                    .as_array()
                    .ok_or_else(|| HypermatrixError::Parse("rows must be arrays".into()))?;
                if row.len() != k {
                    return Err(HypermatrixError::Parse(format!(
                        "face {name} must have {k} columns"
                    )));
                }
                let mut out = Vec::with_capacity(k);
                for e in row {
                    let idx = e
                        .as_u64()
                        .ok_or_else(|| HypermatrixError::Parse("entries must be integers".into()))?;
                    if idx >= field.q() as u64 {
                        return Err(HypermatrixError::Parse(format!(
                            "entry {idx} out of range for q = {}",
                            field.q()
                        )));
                    }
                    out.push(idx as u32);
                }
                data.push(out);
            }
            Ok(FqMatrix::from_rows(&data, field.clone()))
        };
        Ok(Hypermatrix::new(face("front")?, face("back")?))
    }

    pub fn to_json_string(&self) -> String {
        let field = self.field();
        let q = if field.m() == 1 {
            field.p().to_string()
        } else {
            format!("{}^{}", field.p(), field.m())
        };
        let dump = |m: &FqMatrix| -> Value {
            Value::Array(
                (0..m.rows())
                    .map(|r| {
                        Value::Array(
                            (0..m.cols())
                                .map(|c| Value::from(m.get(r, c).index()))
                                .collect(),
                        )
                    })
                    .collect(),
            )
        };
        json!({
            "k": self.k,
            "q": q,
            "front": dump(&self.front),
            "back": dump(&self.back),
        })
        .to_string()
    }
}

/// The hypermatrix with a one wherever the middle index equals the sum of the
/// outer ones minus one: identity atop a zero row in front, zero row atop
/// identity in back.
pub fn standard_e(k: usize, field: Arc<Field>) -> Hypermatrix {
    assert!(k >= 1);
    let one = field.one();
    let mut front = FqMatrix::zeros(k + 1, k, field.clone());
    let mut back = FqMatrix::zeros(k + 1, k, field);
    for j in 0..k {
        front.set(j, j, one);
        back.set(j + 1, j, one);
    }
    Hypermatrix::new(front, back)
}

/// The action of (g1, g2) on a hypermatrix: simultaneous row operations by g1
/// and column operations by g2, i.e. each face maps to g1 * face * g2^T.
/// Both matrices must be invertible for this to be a group action; that
/// precondition is the caller's.
pub fn act(g1: &FqMatrix, g2: &FqMatrix, h: &Hypermatrix) -> Hypermatrix {
    assert_eq!((g1.rows(), g1.cols()), (h.k + 1, h.k + 1), "dimension mismatch for g1");
    assert_eq!((g2.rows(), g2.cols()), (h.k, h.k), "dimension mismatch for g2");
    let g2t = g2.transpose();
    Hypermatrix::new(
        g1.matmul(&h.front).matmul(&g2t),
        g1.matmul(&h.back).matmul(&g2t),
    )
}

/// The action of GL_2 along the first direction: replace the faces by linear
/// combinations of themselves with the rows of g0 as coefficients.
pub fn act_face_mix(g0: &FqMatrix, h: &Hypermatrix) -> Hypermatrix {
    assert_eq!((g0.rows(), g0.cols()), (2, 2), "dimension mismatch for g0");
    Hypermatrix::new(
        h.front.lin_comb(g0.get(0, 0), &h.back, g0.get(0, 1)),
        h.front.lin_comb(g0.get(1, 0), &h.back, g0.get(1, 1)),
    )
}

/// One maximal minor of the pencil x * front + y * back: a binary form of
/// degree k in (x, y), stored dehomogenized as f(t) = F(t, 1) together with
/// the x^k coefficient (which equals the t^k coefficient of f).
#[derive(Debug, Clone)]
pub struct PencilForm {
    pub dehom: FqPolynomial,
    pub lead_x: FieldElement,
}

#[derive(Debug, Clone)]
pub struct PencilForms {
    pub forms: Vec<PencilForm>,
}

/// The k+1 maximal minors of x * front + y * back, one for each deleted row,
/// by cofactor expansion over degree-bounded binary-form coefficients.
pub fn pencil_minors(h: &Hypermatrix) -> PencilForms {
    let k = h.k;
    assert!(k <= 12, "pencil minors limited to small formats");
    let field = h.field().clone();
    let rows: Vec<usize> = (0..=k).collect();
    let forms = (0..=k)
        .map(|skip| {
            let sub: Vec<usize> = rows.iter().copied().filter(|&r| r != skip).collect();
            let coeffs = det_form(h, &sub, 0);
            let lead_x = coeffs[k];
            PencilForm {
                dehom: FqPolynomial::new(coeffs, field.clone()),
                lead_x,
            }
        })
        .collect();
    PencilForms { forms }
}

/// Determinant of the pencil submatrix on `rows` x columns `col..`, as the
/// coefficient vector of a homogeneous binary form: index i holds the
/// coefficient of x^i y^(d-i), d = rows.len(). Expansion along the first
/// column.
fn det_form(h: &Hypermatrix, rows: &[usize], col: usize) -> Vec<FieldElement> {
    let f = h.field();
    let d = rows.len();
    if d == 1 {
        // linear entry a x + b y
        return vec![h.back.get(rows[0], col), h.front.get(rows[0], col)];
    }
    let mut out = vec![f.zero(); d + 1];
    let mut sign = f.one();
    for (t, &r) in rows.iter().enumerate() {
        let a = h.front.get(r, col);
        let b = h.back.get(r, col);
        if !a.is_zero() || !b.is_zero() {
            let rest: Vec<usize> = rows
                .iter()
                .copied()
                .enumerate()
                .filter_map(|(i, rr)| (i != t).then_some(rr))
                .collect();
            let minor = det_form(h, &rest, col + 1);
            // (a x + b y) * minor, signed
            let sa = f.mul(sign, a);
            let sb = f.mul(sign, b);
            for (i, &c) in minor.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                out[i + 1] = f.add(out[i + 1], f.mul(sa, c));
                out[i] = f.add(out[i], f.mul(sb, c));
            }
        }
        sign = f.neg(sign);
    }
    out
}

/// Nondegeneracy via the pencil minors: degenerate exactly when the nonzero
/// minors share a projective root over the algebraic closure, which happens
/// when all minors vanish identically, when every nonzero minor loses its
/// x^k coefficient (common root at (1:0)), or when the gcd of the
/// dehomogenized minors is nonconstant. Gcd degree is invariant under field
/// extension, so computing it over F_q decides the closure question.
pub fn is_nondegenerate(h: &Hypermatrix) -> bool {
    let pf = pencil_minors(h);
    let nonzero: Vec<&PencilForm> = pf.forms.iter().filter(|f| !f.dehom.is_zero()).collect();
    if nonzero.is_empty() {
        return false;
    }
    if nonzero.iter().all(|f| f.lead_x.is_zero()) {
        return false;
    }
    let field = h.field().clone();
    let mut g = FqPolynomial::zero(field);
    for form in &nonzero {
        g = poly_gcd(&g, &form.dehom);
        if g.degree() == Some(0) {
            return true;
        }
    }
    g.degree() == Some(0)
}

/// Independent nondegeneracy decision, straight from the definition: check
/// rank(c1 * front + c2 * back) = k for every projective point (c1 : c2)
/// over every extension F_{p^d}, d <= k. Any common root of the degree-k
/// minors lives in such an extension. Restricted to prime base fields to
/// avoid embedding towers.
pub fn is_nondegenerate_oracle(h: &Hypermatrix) -> Result<bool, HypermatrixError> {
    let base = h.field();
    if !base.is_prime_field() {
        return Err(HypermatrixError::NonPrimeField);
    }
    let k = h.k;
    for d in 1..=k as u32 {
        let ext = Field::with_bound(base.p(), d, None, DEFAULT_Q_BOUND)?;
        let front = embed_matrix(&h.front, &ext)?;
        let back = embed_matrix(&h.back, &ext)?;
        // (1 : t) for every t, then (0 : 1)
        for t in ext.elements() {
            if front.lin_comb(ext.one(), &back, t).rank() < k {
                return Ok(false);
            }
        }
        if back.rank() < k {
            return Ok(false);
        }
    }
    Ok(true)
}

fn embed_matrix(m: &FqMatrix, ext: &Arc<Field>) -> Result<FqMatrix, GfError> {
    let mut out = FqMatrix::zeros(m.rows(), m.cols(), ext.clone());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.set(r, c, embed(m.field(), ext, m.get(r, c))?);
        }
    }
    Ok(out)
}

/// Does the hypermatrix vanish on the forced-zero region of P: front zero
/// below row k+1-lambda_c in every column c, back likewise with mu.
pub fn respects(h: &Hypermatrix, p: &PlanePartition) -> bool {
    assert_eq!(h.k, p.k(), "format mismatch");
    let k = h.k;
    for c in 1..=k {
        for r in (k + 1 - p.lam().part(c) + 1)..=(k + 1) {
            if !h.front.get(r - 1, c - 1).is_zero() {
                return false;
            }
        }
        for r in (k + 1 - p.mu().part(c) + 1)..=(k + 1) {
            if !h.back.get(r - 1, c - 1).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{staircase_delta, Face};

    fn f(q: u32) -> Arc<Field> {
        Field::new(q, 1).unwrap()
    }

    #[test]
    fn standard_e_faces() {
        let e = standard_e(3, f(2));
        let front = FqMatrix::from_rows(
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
            f(2),
        );
        let back = FqMatrix::from_rows(
            &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            f(2),
        );
        assert_eq!(e.front(), &front);
        assert_eq!(e.back(), &back);

        let e1 = standard_e(1, f(3));
        assert_eq!(e1.front(), &FqMatrix::from_rows(&[vec![1], vec![0]], f(3)));
        assert_eq!(e1.back(), &FqMatrix::from_rows(&[vec![0], vec![1]], f(3)));
    }

    #[test]
    fn act_identity() {
        let field = f(3);
        let e = standard_e(2, field.clone());
        let h = act(
            &FqMatrix::identity(3, field.clone()),
            &FqMatrix::identity(2, field),
            &e,
        );
        assert_eq!(h, e);
    }

    #[test]
    fn act_worked_example() {
        // diag(a,b,c,d) and a cycled column matrix acting on E, k = 3,
        // with a,b,c,d,x = 1,2,3,4,2 over F_5.
        let field = f(5);
        let (a, b, c, d, x) = (1u32, 2, 3, 4, 2);
        let g1 = FqMatrix::from_rows(
            &[
                vec![a, 0, 0, 0],
                vec![0, b, 0, 0],
                vec![0, 0, c, 0],
                vec![0, 0, 0, d],
            ],
            field.clone(),
        );
        let g2 = FqMatrix::from_rows(&[vec![0, 0, x], vec![1, 0, 0], vec![0, 1, 0]], field.clone());
        let h = act(&g1, &g2, &standard_e(3, field.clone()));
        let cx = (c * x) % 5;
        let dx = (d * x) % 5;
        let front = FqMatrix::from_rows(
            &[
                vec![0, a, 0],
                vec![0, 0, b],
                vec![cx, 0, 0],
                vec![0, 0, 0],
            ],
            field.clone(),
        );
        let back = FqMatrix::from_rows(
            &[
                vec![0, 0, 0],
                vec![0, b, 0],
                vec![0, 0, c],
                vec![dx, 0, 0],
            ],
            field,
        );
        assert_eq!(h.front(), &front);
        assert_eq!(h.back(), &back);
    }

    #[test]
    fn action_law_spot_check() {
        let field = f(3);
        let e = standard_e(2, field.clone());
        let g1 = FqMatrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 1], vec![0, 0, 2]], field.clone());
        let h1 = FqMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![2, 1, 1]], field.clone());
        let g2 = FqMatrix::from_rows(&[vec![1, 1], vec![0, 1]], field.clone());
        let h2 = FqMatrix::from_rows(&[vec![0, 2], vec![1, 0]], field.clone());
        let lhs = act(&g1.matmul(&h1), &g2.matmul(&h2), &e);
        let rhs = act(&g1, &g2, &act(&h1, &h2, &e));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn face_mix() {
        let field = f(2);
        let e = standard_e(2, field.clone());
        assert_eq!(act_face_mix(&FqMatrix::identity(2, field.clone()), &e), e);

        let swap = FqMatrix::from_rows(&[vec![0, 1], vec![1, 0]], field.clone());
        let swapped = act_face_mix(&swap, &e);
        assert_eq!(swapped.front(), e.back());
        assert_eq!(swapped.back(), e.front());
        assert!(is_nondegenerate(&swapped));

        // shear applied to proportional faces leaves the pair degenerate
        let h = Hypermatrix::new(e.front().clone(), e.front().clone());
        let shear = FqMatrix::from_rows(&[vec![1, 1], vec![0, 1]], field);
        assert!(!is_nondegenerate(&act_face_mix(&shear, &h)));
    }

    #[test]
    fn pencil_minors_of_e_k2() {
        let e = standard_e(2, f(2));
        let pf = pencil_minors(&e);
        // deleting rows 1, 2, 3 gives y^2, xy, x^2
        assert_eq!(pf.forms[0].dehom.coeffs().len(), 1); // constant 1 = y^2 dehomogenized
        assert_eq!(pf.forms[1].dehom.coeffs().len(), 2); // t
        assert_eq!(pf.forms[2].dehom.coeffs().len(), 3); // t^2
        assert!(pf.forms[0].lead_x.is_zero());
        assert!(pf.forms[1].lead_x.is_zero());
        assert!(!pf.forms[2].lead_x.is_zero());
        // no projective root shared by all three: the joint gcd is constant
        let mut g = pf.forms[0].dehom.clone();
        for form in &pf.forms[1..] {
            g = poly_gcd(&g, &form.dehom);
        }
        assert_eq!(g.degree(), Some(0));
        assert!(is_nondegenerate(&e));
    }

    #[test]
    fn degenerate_cases() {
        let field = f(2);
        // proportional faces
        let e = standard_e(2, field.clone());
        let h = Hypermatrix::new(e.front().clone(), e.front().clone());
        assert!(!is_nondegenerate(&h));
        // zero column in both faces: all minors vanish identically
        let mut front = e.front().clone();
        let mut back = e.back().clone();
        for r in 0..3 {
            front.set(r, 0, field.zero());
            back.set(r, 0, field.zero());
        }
        let h = Hypermatrix::new(front, back);
        let pf = pencil_minors(&h);
        assert!(pf.forms.iter().all(|f| f.dehom.is_zero()));
        assert!(!is_nondegenerate(&h));
        // zero slice in the second direction (a full row of both faces)
        let mut front = e.front().clone();
        let mut back = e.back().clone();
        for c in 0..2 {
            front.set(0, c, field.zero());
            back.set(0, c, field.zero());
        }
        assert!(!is_nondegenerate(&Hypermatrix::new(front, back)));
    }

    #[test]
    fn e_is_nondegenerate_small_formats() {
        for q in [2u32, 3] {
            for k in 1..=4 {
                let e = standard_e(k, f(q));
                assert!(is_nondegenerate(&e), "E nondegenerate for k={k}, q={q}");
                assert!(is_nondegenerate_oracle(&e).unwrap());
            }
        }
    }

    #[test]
    fn oracle_rejects_non_prime_fields() {
        let f4 = Field::new(2, 2).unwrap();
        let e = standard_e(2, f4);
        assert_eq!(
            is_nondegenerate_oracle(&e).unwrap_err(),
            HypermatrixError::NonPrimeField
        );
    }

    /// Iterate all 2 x (k+1) x k hypermatrices over F_q by odometer.
    fn all_hypermatrices(k: usize, field: &Arc<Field>) -> impl Iterator<Item = Hypermatrix> {
        let q = field.q() as u64;
        let cells = 2 * k * (k + 1);
        let total = q.pow(cells as u32);
        let field = field.clone();
        (0..total).map(move |code| {
            let mut c = code;
            let mut front = FqMatrix::zeros(k + 1, k, field.clone());
            let mut back = FqMatrix::zeros(k + 1, k, field.clone());
            for face in 0..2 {
                for col in 0..k {
                    for row in 0..=k {
                        let v = field.elem((c % q) as u32);
                        c /= q;
                        if face == 0 {
                            front.set(row, col, v);
                        } else {
                            back.set(row, col, v);
                        }
                    }
                }
            }
            Hypermatrix::new(front, back)
        })
    }

    #[test]
    fn gcd_route_matches_oracle_exhaustive_k2_q2() {
        let field = f(2);
        let mut nondeg = 0u32;
        for h in all_hypermatrices(2, &field) {
            let fast = is_nondegenerate(&h);
            assert_eq!(fast, is_nondegenerate_oracle(&h).unwrap());
            nondeg += fast as u32;
        }
        assert_eq!(nondeg, 1008);
    }

    #[test]
    fn gcd_route_matches_oracle_exhaustive_k2_q3() {
        let field = f(3);
        for h in all_hypermatrices(2, &field) {
            assert_eq!(is_nondegenerate(&h), is_nondegenerate_oracle(&h).unwrap());
        }
    }

    #[test]
    fn gcd_route_matches_oracle_random_k3_q2() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x9e3779b97f4a7c15);
        let field = f(2);
        for _ in 0..100_000 {
            let mut front = FqMatrix::zeros(4, 3, field.clone());
            let mut back = FqMatrix::zeros(4, 3, field.clone());
            for r in 0..4 {
                for c in 0..3 {
                    front.set(r, c, field.elem(rng.gen_range(0..2)));
                    back.set(r, c, field.elem(rng.gen_range(0..2)));
                }
            }
            let h = Hypermatrix::new(front, back);
            assert_eq!(is_nondegenerate(&h), is_nondegenerate_oracle(&h).unwrap());
        }
    }

    #[test]
    fn respects_examples() {
        let field = f(2);
        let e3 = standard_e(3, field.clone());
        assert!(respects(&e3, &staircase_delta(3)));
        assert!(respects(&e3, &PlanePartition::empty(3)));

        // the 2 x 5 x 4 shape <(4,2,1,0),(3,2,1,0)> with stars set to one
        let p = PlanePartition::from_parts(4, &[4, 2, 1, 0], &[3, 2, 1, 0]).unwrap();
        let field3 = f(3);
        let mut front = FqMatrix::zeros(5, 4, field3.clone());
        let mut back = FqMatrix::zeros(5, 4, field3.clone());
        for r in 1..=5 {
            for c in 1..=4 {
                if !p.cell_in_shape(Face::Front, r, c) {
                    front.set(r - 1, c - 1, field3.one());
                }
                if !p.cell_in_shape(Face::Back, r, c) {
                    back.set(r - 1, c - 1, field3.elem(2));
                }
            }
        }
        let h = Hypermatrix::new(front.clone(), back.clone());
        assert!(respects(&h, &p));
        // flipping one forced-zero cell breaks it: (5, 1) of the front
        front.set(4, 0, field3.one());
        assert!(!respects(&Hypermatrix::new(front, back), &p));
    }

    #[test]
    fn json_literal_round_trip() {
        let e = standard_e(2, Field::new(2, 2).unwrap());
        let s = e.to_json_string();
        let back = Hypermatrix::from_json_str(&s).unwrap();
        assert_eq!(back, e);

        let parsed = Hypermatrix::from_json_str(
            r#"{"k":1,"q":"3","front":[[2],[0]],"back":[[0],[1]]}"#,
        )
        .unwrap();
        assert_eq!(parsed.k(), 1);
        assert_eq!(parsed.front().get(0, 0).index(), 2);

        assert!(Hypermatrix::from_json_str(r#"{"k":0,"q":"2","front":[[ ]],"back":[[ ]]}"#).is_err());
        assert!(Hypermatrix::from_json_str(
            r#"{"k":1,"q":"2","front":[[7],[0]],"back":[[0],[1]]}"#
        )
        .is_err());
    }
}
