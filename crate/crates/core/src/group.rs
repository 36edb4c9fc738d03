//! Finitely generated abelian groups (and F_p vector spaces) presented by
//! relation matrices, with canonical Smith-basis element forms.
//!
//! A presentation is a quotient R^g / im(relations). The SNF of the relation
//! matrix gives a change of basis in which the group is a direct sum of
//! cyclic factors; element equality is equality of least-nonnegative
//! residues in that basis. Subgroups are handled as generator lists and
//! every membership or inclusion question reduces to exact linear solving.

use crate::matrix::Matrix;
use crate::ring::Ring;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("containment violation: quotient generators not inside subgroup")]
    ContainmentViolation,
    #[error("element is not in the subgroup")]
    NotInSubgroup,
    #[error("matrix does not descend to a homomorphism of presentations")]
    NotAHomomorphism,
}

/// A finitely generated abelian group (or F_p vector space) presented by a
/// relation matrix whose columns are relations among `gens` generators.
#[derive(Clone, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub ring: Ring,
    pub gens: usize,
    pub relations: Matrix,
    /// SNF of the relation matrix: u * relations * v = d.
    snf_u: Matrix,
    snf_d: Vec<BigInt>,
}

impl PartialEq for GroupPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens && self.relations == other.relations
    }
}
impl Eq for GroupPresentation {}

impl fmt::Debug for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// An element of a presented group, stored in generator coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElement {
    pub coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn from_i64(v: &[i64]) -> Self {
        GroupElement { coords: v.iter().map(|&x| BigInt::from(x)).collect() }
    }
}

impl GroupPresentation {
    pub fn new(ring: Ring, gens: usize, relations: Matrix) -> Self {
        assert_eq!(relations.rows, gens, "relation matrix must have one row per generator");
        assert_eq!(relations.ring, ring);
        let snf = relations.smith_normal_form();
        let n = relations.rows.min(relations.cols);
        let mut snf_d: Vec<BigInt> = (0..n).map(|i| snf.d.at(i, i).clone()).collect();
        snf_d.resize(gens, BigInt::zero());
        GroupPresentation { ring, gens, relations, snf_u: snf.u, snf_d }
    }

    /// The free group of rank n (no relations).
    pub fn free(ring: Ring, n: usize) -> Self {
        GroupPresentation::new(ring, n, Matrix::zero(ring, n, 0))
    }

    pub fn trivial(ring: Ring) -> Self {
        GroupPresentation::new(ring, 0, Matrix::zero(ring, 0, 0))
    }

    /// diag(d_1, ..) cyclic presentation; a 0 entry is a free factor.
    pub fn cyclic(ring: Ring, factors: &[i64]) -> Self {
        let n = factors.len();
        let m = Matrix::from_fn(ring, n, n, |r, c| {
            if r == c { BigInt::from(factors[r]) } else { BigInt::zero() }
        });
        GroupPresentation::new(ring, n, m)
    }

    /// Canonical invariant factor list: the nontrivial torsion factors in
    /// divisibility order followed by one 0 per free generator. Unit factors
    /// are dropped so that presentations of isomorphic groups agree.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut tors: Vec<BigInt> = Vec::new();
        let mut free = 0;
        for d in &self.snf_d {
            if d.is_zero() {
                free += 1;
            } else if !d.is_one() {
                tors.push(d.clone());
            }
        }
        if let Ring::Fp(_) = self.ring {
            // over a field every nonzero factor is a unit
            tors.clear();
        }
        for _ in 0..free {
            tors.push(BigInt::zero());
        }
        tors
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors().is_empty()
    }

    /// Free rank (number of zero invariant factors).
    pub fn rank(&self) -> usize {
        self.snf_d.iter().filter(|d| d.is_zero()).count()
    }

    /// Number of elements, None if infinite.
    pub fn cardinality(&self) -> Option<BigInt> {
        match self.ring {
            Ring::Int => {
                if self.rank() > 0 {
                    return None;
                }
                let mut card = BigInt::one();
                for d in &self.snf_d {
                    if !d.is_zero() {
                        card *= d;
                    }
                }
                Some(card)
            }
            Ring::Fp(p) => {
                let mut card = BigInt::one();
                for d in &self.snf_d {
                    if d.is_zero() {
                        card *= BigInt::from(p);
                    }
                }
                Some(card)
            }
        }
    }

    pub fn describe(&self) -> String {
        let fs = self.invariant_factors();
        if fs.is_empty() {
            return "0".to_string();
        }
        let base = match self.ring {
            Ring::Int => "Z",
            Ring::Fp(_) => "F",
        };
        let parts: Vec<String> = fs
            .iter()
            .map(|d| {
                if d.is_zero() {
                    match self.ring {
                        Ring::Int => base.to_string(),
                        Ring::Fp(p) => format!("{base}{p}"),
                    }
                } else {
                    format!("{base}/{d}")
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { coords: vec![BigInt::zero(); self.gens] }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![BigInt::zero(); self.gens];
        coords[i] = BigInt::one();
        GroupElement { coords }
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.gens).map(|i| self.generator(i)).collect()
    }

    /// Canonical form: SNF-basis coordinates reduced to least nonnegative
    /// residues modulo each invariant factor (and mod p over F_p).
    pub fn canonical_form(&self, e: &GroupElement) -> Vec<BigInt> {
        assert_eq!(e.coords.len(), self.gens, "element has wrong length");
        let y = self.snf_u.mul_vec(&e.coords);
        y.iter()
            .zip(&self.snf_d)
            .map(|(yi, di)| {
                if di.is_zero() {
                    self.ring.normalize(yi)
                } else {
                    let r = yi % di;
                    let r = if r.is_negative() { r + di } else { r };
                    self.ring.normalize(&r)
                }
            })
            .collect()
    }

    pub fn is_zero_elt(&self, e: &GroupElement) -> bool {
        self.canonical_form(e).iter().all(|x| x.is_zero())
    }

    pub fn elts_equal(&self, a: &GroupElement, b: &GroupElement) -> bool {
        self.canonical_form(a) == self.canonical_form(b)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| self.ring.normalize(&(x + y))).collect(),
        }
    }

    pub fn neg_elt(&self, a: &GroupElement) -> GroupElement {
        GroupElement { coords: a.coords.iter().map(|x| self.ring.normalize(&(-x))).collect() }
    }

    pub fn scale_elt(&self, k: &BigInt, a: &GroupElement) -> GroupElement {
        GroupElement { coords: a.coords.iter().map(|x| self.ring.normalize(&(x * k))).collect() }
    }

    /// All elements, for finite groups only (used by brute-force oracles).
    pub fn elements(&self) -> Vec<GroupElement> {
        let card = self.cardinality().expect("elements() needs a finite group");
        let card: u64 = card.to_string().parse().expect("group too large to enumerate");
        let mut out = Vec::with_capacity(card as usize);
        // enumerate canonical coordinates and map back through U^{-1}:
        // easier: enumerate multiples of generators directly by BFS
        let mut seen = std::collections::HashSet::new();
        let mut queue = vec![self.zero()];
        seen.insert(self.canonical_form(&self.zero()));
        while let Some(e) = queue.pop() {
            out.push(e.clone());
            for i in 0..self.gens {
                let f = self.add(&e, &self.generator(i));
                let cf = self.canonical_form(&f);
                if seen.insert(cf) {
                    queue.push(f);
                }
            }
        }
        assert_eq!(out.len() as u64, card);
        out
    }

    /// Does e lie in the subgroup spanned by the columns of `span`
    /// (together with the relations)?
    pub fn member_of_span(&self, e: &GroupElement, span: &Matrix) -> bool {
        self.express_in_span(e, span).is_some()
    }

    /// Coefficients expressing e as span * x modulo relations, if possible.
    pub fn express_in_span(&self, e: &GroupElement, span: &Matrix) -> Option<Vec<BigInt>> {
        assert_eq!(span.rows, self.gens);
        let aug = span.hstack(&self.relations);
        let sol = aug.solve(&e.coords)?;
        Some(sol[..span.cols].to_vec())
    }

    /// Generating matrix for the subgroup {x in Z^gens : image of x lies in
    /// span(cols) + relations}, i.e. the full preimage of a span under the
    /// quotient map. Contains the relation lattice.
    pub fn preimage_lattice(&self, span: &Matrix) -> Matrix {
        assert_eq!(span.rows, self.gens);
        // kernel of [I | -span | -relations] projected to the first block
        let id = Matrix::identity(self.ring, self.gens);
        let m = id.hstack(&span.neg()).hstack(&self.relations.neg());
        let k = m.kernel_basis();
        k.submatrix(0..self.gens, 0..k.cols)
    }

    /// Subgroup equality as subgroups of this group (mutual span inclusion).
    pub fn spans_equal(&self, a: &Matrix, b: &Matrix) -> bool {
        self.span_included(a, b) && self.span_included(b, a)
    }

    pub fn span_included(&self, a: &Matrix, b: &Matrix) -> bool {
        if a.cols == 0 {
            return true;
        }
        let aug = b.hstack(&self.relations);
        aug.solve_multi(a).iter().all(|s| s.is_some())
    }

    /// Presentation of the subquotient span(sub) / span(quot), together with
    /// the data needed to map elements in and out.
    pub fn subquotient(&self, sub: &Matrix, quot: &Matrix) -> Result<Subquotient, GroupError> {
        if sub.rows != self.gens || quot.rows != self.gens {
            return Err(GroupError::DimensionMismatch { expected: self.gens, got: sub.rows.max(quot.rows) });
        }
        if !self.span_included(quot, sub) {
            return Err(GroupError::ContainmentViolation);
        }
        // relations among the chosen subgroup generators: all lambda with
        // sub * lambda inside span(quot) + relations
        let k = sub.cols;
        let m = sub.hstack(&quot.neg()).hstack(&self.relations.neg());
        let ker = m.kernel_basis();
        let rel = ker.submatrix(0..k, 0..ker.cols);
        let pres = GroupPresentation::new(self.ring, k, rel);
        Ok(Subquotient { ambient_gens: self.gens, sub: sub.clone(), quot: quot.clone(), pres })
    }

    /// The quotient of this group by the span of the given columns.
    pub fn quotient_by(&self, quot: &Matrix) -> GroupPresentation {
        GroupPresentation::new(self.ring, self.gens, self.relations.hstack(quot))
    }
}

/// A subquotient span(sub)/span(quot) of an ambient presentation, with
/// membership test and coset-representative maps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Subquotient {
    pub ambient_gens: usize,
    pub sub: Matrix,
    pub quot: Matrix,
    pub pres: GroupPresentation,
}

impl Subquotient {
    /// Class of an ambient element; error if it is not in the subgroup.
    pub fn class_of(&self, ambient: &GroupPresentation, e: &GroupElement) -> Result<GroupElement, GroupError> {
        let coeffs = ambient.express_in_span(e, &self.sub).ok_or(GroupError::NotInSubgroup)?;
        Ok(GroupElement { coords: coeffs })
    }

    /// Classes of several ambient elements (columns) with one solve.
    pub fn classes_of(&self, ambient: &GroupPresentation, elts: &Matrix) -> Result<Matrix, GroupError> {
        let aug = self.sub.hstack(&ambient.relations);
        let sols = aug.solve_multi(elts);
        let mut cols = Vec::with_capacity(sols.len());
        for s in sols {
            let s = s.ok_or(GroupError::NotInSubgroup)?;
            cols.push(s[..self.sub.cols].to_vec());
        }
        Ok(Matrix::from_columns(ambient.ring, self.sub.cols, &cols))
    }

    /// A coset representative in the ambient group.
    pub fn representative(&self, e: &GroupElement) -> GroupElement {
        GroupElement { coords: self.sub.mul_vec(&e.coords) }
    }
}

/// A homomorphism between presented groups, given by a matrix on generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Hom {
    pub source: GroupPresentation,
    pub target: GroupPresentation,
    pub matrix: Matrix,
}

impl Hom {
    pub fn new(source: GroupPresentation, target: GroupPresentation, matrix: Matrix) -> Result<Hom, GroupError> {
        if matrix.rows != target.gens || matrix.cols != source.gens {
            return Err(GroupError::DimensionMismatch { expected: target.gens, got: matrix.rows });
        }
        // each source relation must map into the target relation span
        let zero_span = Matrix::zero(source.ring, target.gens, 0);
        let images = matrix.mul(&source.relations);
        if !target.span_included(&images, &zero_span) {
            return Err(GroupError::NotAHomomorphism);
        }
        Ok(Hom { source, target, matrix })
    }

    pub fn zero(source: GroupPresentation, target: GroupPresentation) -> Hom {
        let m = Matrix::zero(source.ring, target.gens, source.gens);
        Hom { matrix: m, source, target }
    }

    pub fn identity(g: &GroupPresentation) -> Hom {
        Hom { source: g.clone(), target: g.clone(), matrix: Matrix::identity(g.ring, g.gens) }
    }

    pub fn apply(&self, e: &GroupElement) -> GroupElement {
        GroupElement { coords: self.matrix.mul_vec(&e.coords) }
    }

    /// other ∘ self (self first).
    pub fn then(&self, other: &Hom) -> Hom {
        assert_eq!(self.target.gens, other.source.gens, "composition mismatch");
        Hom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix),
        }
    }

    /// Generating matrix of the image subgroup in the target.
    pub fn image_span(&self) -> Matrix {
        self.matrix.clone()
    }

    /// Generating matrix for the kernel subgroup in source coordinates.
    pub fn kernel_span(&self) -> Matrix {
        self.source_preimage_of_span(&Matrix::zero(self.matrix.ring, self.target.gens, 0))
    }

    /// Generators of {x in source : self(x) in span + target relations}.
    pub fn source_preimage_of_span(&self, span: &Matrix) -> Matrix {
        let m = self.matrix.hstack(&span.neg()).hstack(&self.target.relations.neg());
        let k = m.kernel_basis();
        k.submatrix(0..self.source.gens, 0..k.cols)
    }

    pub fn is_zero_map(&self) -> bool {
        self.source
            .generators()
            .iter()
            .all(|g| self.target.is_zero_elt(&self.apply(g)))
    }

    pub fn is_surjective(&self) -> bool {
        let id = Matrix::identity(self.matrix.ring, self.target.gens);
        self.target.span_included(&id, &self.matrix)
    }

    pub fn is_injective(&self) -> bool {
        // kernel subgroup contained in 0
        let ker = self.kernel_span();
        let ok = ker.columns().all(|col| self.source.is_zero_elt(&GroupElement { coords: col }));
        ok
    }

    pub fn is_iso(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    /// Solve self(x) = e; None when e is not in the image.
    pub fn preimage(&self, e: &GroupElement) -> Option<GroupElement> {
        let coeffs = self.target.express_in_span(e, &self.matrix)?;
        Some(GroupElement { coords: coeffs })
    }
}

/// Exactness of source --u--> mid --v--> target at mid: im(u) = ker(v).
pub fn is_exact_at(u: &Hom, v: &Hom) -> bool {
    assert_eq!(u.target.gens, v.source.gens);
    let im = u.image_span();
    let ker = v.kernel_span();
    v.source.spans_equal(&im, &ker)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_of_two() {
        // (2): Z -> Z has cokernel Z/2
        let rel = Matrix::from_i64_rows(Ring::Int, &[&[2]]);
        let g = GroupPresentation::new(Ring::Int, 1, rel);
        assert_eq!(g.invariant_factors(), vec![BigInt::from(2)]);
        assert_eq!(g.describe(), "Z/2");
    }

    #[test]
    fn identity_relations_trivial_group() {
        let g = GroupPresentation::new(Ring::Int, 2, Matrix::identity(Ring::Int, 2));
        assert!(g.is_trivial());
    }

    #[test]
    fn diag_2_0_gives_z2_plus_z() {
        let rel = Matrix::from_i64_rows(Ring::Int, &[&[2, 0], &[0, 0]]);
        let g = GroupPresentation::new(Ring::Int, 2, rel);
        assert_eq!(g.invariant_factors(), vec![BigInt::from(2), BigInt::zero()]);
    }

    #[test]
    fn canonical_forms_detect_equality() {
        let g = GroupPresentation::cyclic(Ring::Int, &[4]);
        let a = GroupElement::from_i64(&[1]);
        let b = GroupElement::from_i64(&[5]);
        assert!(g.elts_equal(&a, &b));
        assert!(!g.elts_equal(&a, &GroupElement::from_i64(&[2])));
    }

    #[test]
    fn shuffled_relations_same_invariants() {
        let r1 = Matrix::from_i64_rows(Ring::Int, &[&[2, 0, 4], &[0, 6, 2], &[0, 0, 8]]);
        let r2 = Matrix::from_i64_rows(Ring::Int, &[&[0, 6, 2], &[2, 0, 4], &[0, 0, 8]]);
        let g1 = GroupPresentation::new(Ring::Int, 3, r1);
        let g2 = GroupPresentation::new(Ring::Int, 3, r2);
        assert_eq!(g1.invariant_factors(), g2.invariant_factors());
    }

    #[test]
    fn subquotient_whole_by_zero() {
        let g = GroupPresentation::cyclic(Ring::Int, &[4, 0]);
        let sub = Matrix::identity(Ring::Int, 2);
        let quot = Matrix::zero(Ring::Int, 2, 0);
        let sq = g.subquotient(&sub, &quot).unwrap();
        assert_eq!(sq.pres.invariant_factors(), g.invariant_factors());
    }

    #[test]
    fn subquotient_2z_by_4z() {
        // ambient Z, sub = <2>, quot = <4>: enumerate cosets {0, 2} -> Z/2
        let g = GroupPresentation::free(Ring::Int, 1);
        let sub = Matrix::from_i64_rows(Ring::Int, &[&[2]]);
        let quot = Matrix::from_i64_rows(Ring::Int, &[&[4]]);
        let sq = g.subquotient(&sub, &quot).unwrap();
        assert_eq!(sq.pres.invariant_factors(), vec![BigInt::from(2)]);
    }

    #[test]
    fn subquotient_sub_eq_quot_trivial() {
        let g = GroupPresentation::cyclic(Ring::Int, &[8]);
        let sub = Matrix::from_i64_rows(Ring::Int, &[&[2]]);
        let sq = g.subquotient(&sub, &sub).unwrap();
        assert!(sq.pres.is_trivial());
    }

    #[test]
    fn subquotient_containment_violation() {
        let g = GroupPresentation::free(Ring::Int, 1);
        let sub = Matrix::from_i64_rows(Ring::Int, &[&[4]]);
        let quot = Matrix::from_i64_rows(Ring::Int, &[&[2]]);
        assert_eq!(g.subquotient(&sub, &quot).unwrap_err(), GroupError::ContainmentViolation);
    }

    #[test]
    fn hom_validation() {
        let z2 = GroupPresentation::cyclic(Ring::Int, &[2]);
        let z4 = GroupPresentation::cyclic(Ring::Int, &[4]);
        // Z/2 -> Z/4 by 1 -> 2 is a hom; by 1 -> 1 is not
        assert!(Hom::new(z2.clone(), z4.clone(), Matrix::from_i64_rows(Ring::Int, &[&[2]])).is_ok());
        assert!(Hom::new(z2.clone(), z4.clone(), Matrix::from_i64_rows(Ring::Int, &[&[1]])).is_err());
    }

    #[test]
    fn exactness_check() {
        // Z --2--> Z --proj--> Z/2 is exact at middle
        let z = GroupPresentation::free(Ring::Int, 1);
        let z2 = GroupPresentation::cyclic(Ring::Int, &[2]);
        let u = Hom::new(z.clone(), z.clone(), Matrix::from_i64_rows(Ring::Int, &[&[2]])).unwrap();
        let v = Hom::new(z.clone(), z2, Matrix::from_i64_rows(Ring::Int, &[&[1]])).unwrap();
        assert!(is_exact_at(&u, &v));
    }

    #[test]
    fn elements_enumeration() {
        let g = GroupPresentation::cyclic(Ring::Int, &[2, 3]);
        assert_eq!(g.elements().len(), 6);
        let g = GroupPresentation::free(Ring::Fp(3), 2);
        assert_eq!(g.elements().len(), 9);
    }

    #[test]
    fn subquotient_functorial_on_small_instances() {
        // (S/Q) of (S'/Q') composes to the evident subquotient, checked
        // element-wise on Z/8: S = <2>, Q = <4>; inside S/Q take everything/0
        let g = GroupPresentation::cyclic(Ring::Int, &[8]);
        let sub = Matrix::from_i64_rows(Ring::Int, &[&[2]]);
        let quot = Matrix::from_i64_rows(Ring::Int, &[&[4]]);
        let sq = g.subquotient(&sub, &quot).unwrap();
        for e in g.elements() {
            if g.member_of_span(&e, &sub) {
                let c = sq.class_of(&g, &e).unwrap();
                let r = sq.representative(&c);
                // representative differs from e by an element of span(quot)
                let diff = g.add(&e, &g.neg_elt(&r));
                assert!(g.member_of_span(&diff, &quot));
            }
        }
    }
}
