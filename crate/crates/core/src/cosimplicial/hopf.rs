//! Graded Hopf algebras over a prime field (the base-field fragment of a
//! Hopf algebroid) and the cobar construction: the cosimplicial object
//! Gamma^{tensor s} (x) M whose normalized cochains are the reduced cobar
//! complex computing Ext^{s,t}.

use super::{CosimplicialData, CosimplicialError};
use crate::complex::{ChainComplexData, ChainMapData};
use crate::matrix::Matrix;
use crate::ring::Ring;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum HopfError {
    #[error("coassociativity fails on basis element {0}")]
    NotCoassociative(usize),
    #[error("counit law fails on basis element {0}")]
    CounitLaw(usize),
    #[error("unit must be the first basis element in degree 0")]
    BadUnit,
    #[error("comodule coaction not counital on basis element {0}")]
    BadCoaction(usize),
    #[error("degree bound exceeded: {0}")]
    Bounds(String),
}

/// A graded Hopf algebra over F_p given by structure constants. The basis
/// element 0 is the unit, of degree 0.
#[derive(Clone, Debug)]
pub struct HopfData {
    pub p: u64,
    /// degree of each basis element of Gamma; degrees[0] = 0 (the unit)
    pub degrees: Vec<i64>,
    /// counit values per basis element
    pub counit: Vec<i64>,
    /// coproduct: per basis element, a list of (i, j, coeff) terms g_i (x) g_j
    pub coproduct: Vec<Vec<(usize, usize, i64)>>,
}

/// A graded comodule over the Hopf algebra, by structure constants.
#[derive(Clone, Debug)]
pub struct ComoduleData {
    /// degree of each basis element of M
    pub degrees: Vec<i64>,
    /// coaction: per basis element, a list of (gamma_i, m_j, coeff)
    pub coaction: Vec<Vec<(usize, usize, i64)>>,
}

impl HopfData {
    fn ring(&self) -> Ring {
        Ring::Fp(self.p)
    }

    pub fn validate(&self, t_max: i64) -> Result<(), HopfError> {
        if self.degrees.is_empty() || self.degrees[0] != 0 {
            return Err(HopfError::BadUnit);
        }
        let r = self.ring();
        // counit laws: (eps (x) id) psi = id = (id (x) eps) psi
        for (g, terms) in self.coproduct.iter().enumerate() {
            if self.degrees[g] > t_max {
                continue;
            }
            let mut left = vec![BigInt::zero(); self.degrees.len()];
            let mut right = vec![BigInt::zero(); self.degrees.len()];
            for &(i, j, c) in terms {
                let v = BigInt::from(c);
                left[j] = r.normalize(&(&left[j] + BigInt::from(self.counit[i]) * &v));
                right[i] = r.normalize(&(&right[i] + BigInt::from(self.counit[j]) * &v));
            }
            for (k, (l, rr)) in left.iter().zip(&right).enumerate() {
                let expect = if k == g { BigInt::from(1) } else { BigInt::zero() };
                if r.normalize(l) != r.normalize(&expect) || r.normalize(rr) != r.normalize(&expect) {
                    return Err(HopfError::CounitLaw(g));
                }
            }
        }
        // coassociativity: (psi (x) id) psi = (id (x) psi) psi
        for (g, terms) in self.coproduct.iter().enumerate() {
            if self.degrees[g] > t_max {
                continue;
            }
            let mut lhs: BTreeMap<(usize, usize, usize), BigInt> = BTreeMap::new();
            let mut rhs: BTreeMap<(usize, usize, usize), BigInt> = BTreeMap::new();
            for &(i, j, c) in terms {
                for &(a, b, c2) in &self.coproduct[i] {
                    let e = lhs.entry((a, b, j)).or_insert_with(BigInt::zero);
                    *e = r.normalize(&(&*e + BigInt::from(c) * BigInt::from(c2)));
                }
                for &(a, b, c2) in &self.coproduct[j] {
                    let e = rhs.entry((i, a, b)).or_insert_with(BigInt::zero);
                    *e = r.normalize(&(&*e + BigInt::from(c) * BigInt::from(c2)));
                }
            }
            lhs.retain(|_, v| !v.is_zero());
            rhs.retain(|_, v| !v.is_zero());
            if lhs != rhs {
                return Err(HopfError::NotCoassociative(g));
            }
        }
        Ok(())
    }
}

/// Basis of Gamma^{(x) s} (x) M in internal degree t: words of gamma
/// indices plus an m index.
fn words(h: &HopfData, m: &ComoduleData, s: usize, t: i64) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    let mut word = Vec::new();
    fn rec(
        h: &HopfData,
        m: &ComoduleData,
        s: usize,
        t: i64,
        word: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, usize)>,
    ) {
        if word.len() == s {
            let used: i64 = word.iter().map(|&g| h.degrees[g]).sum();
            for (mi, &md) in m.degrees.iter().enumerate() {
                if used + md == t {
                    out.push((word.clone(), mi));
                }
            }
            return;
        }
        let used: i64 = word.iter().map(|&g| h.degrees[g]).sum();
        for g in 0..h.degrees.len() {
            if used + h.degrees[g] <= t {
                word.push(g);
                rec(h, m, s, t, word, out);
                word.pop();
            }
        }
    }
    rec(h, m, s, t, &mut word, &mut out);
    out
}

/// The cobar cosimplicial abelian group in one internal degree t,
/// truncated at cosimplicial level s_max.
pub fn cobar_cosimplicial(
    h: &HopfData,
    m: &ComoduleData,
    s_max: usize,
    t: i64,
) -> Result<CosimplicialData, CosimplicialError> {
    let ring = h.ring();
    let bases: Vec<Vec<(Vec<usize>, usize)>> = (0..=s_max).map(|s| words(h, m, s, t)).collect();
    let levels: Vec<ChainComplexData> = bases
        .iter()
        .map(|b| ChainComplexData::concentrated(ring, 0, b.len()))
        .collect();
    let index_of = |s: usize, w: &[usize], mi: usize| -> usize {
        bases[s]
            .iter()
            .position(|(ww, mm)| ww == w && *mm == mi)
            .expect("word in basis")
    };
    let mut cofaces = Vec::new();
    for s in 0..s_max {
        let mut dj = Vec::new();
        for i in 0..=s + 1 {
            let mut mat = Matrix::zero(ring, bases[s + 1].len(), bases[s].len());
            for (col, (w, mi)) in bases[s].iter().enumerate() {
                if i == 0 {
                    // insert the unit in front
                    let mut w2 = vec![0usize];
                    w2.extend_from_slice(w);
                    let row = index_of(s + 1, &w2, *mi);
                    let v = mat.at(row, col) + 1;
                    mat.set(row, col, v);
                } else if i <= s {
                    // coproduct on the i-th gamma factor
                    let g = w[i - 1];
                    for &(a, b, c) in &h.coproduct[g] {
                        let mut w2 = w.clone();
                        w2[i - 1] = a;
                        w2.insert(i, b);
                        let row = index_of(s + 1, &w2, *mi);
                        let v = mat.at(row, col) + BigInt::from(c);
                        mat.set(row, col, v);
                    }
                } else {
                    // coaction on m
                    for &(a, mj, c) in &m.coaction[*mi] {
                        let mut w2 = w.clone();
                        w2.push(a);
                        let row = index_of(s + 1, &w2, mj);
                        let v = mat.at(row, col) + BigInt::from(c);
                        mat.set(row, col, v);
                    }
                }
            }
            dj.push(
                ChainMapData::new(levels[s].clone(), levels[s + 1].clone(), 0, vec![mat])
                    .expect("coface matrix"),
            );
        }
        cofaces.push(dj);
    }
    let mut codegeneracies = Vec::new();
    for s in 0..s_max {
        let mut sj = Vec::new();
        for i in 0..=s {
            // apply the counit to the (i+1)-st gamma factor of a level-(s+1) word
            let mut mat = Matrix::zero(ring, bases[s].len(), bases[s + 1].len());
            for (col, (w, mi)) in bases[s + 1].iter().enumerate() {
                let g = w[i];
                let eps = BigInt::from(h.counit[g]);
                if !ring.is_zero(&eps) {
                    let mut w2 = w.clone();
                    w2.remove(i);
                    let row = index_of(s, &w2, *mi);
                    let v = mat.at(row, col) + eps;
                    mat.set(row, col, v);
                }
            }
            sj.push(
                ChainMapData::new(levels[s + 1].clone(), levels[s].clone(), 0, vec![mat])
                    .expect("codegeneracy matrix"),
            );
        }
        codegeneracies.push(sj);
    }
    let out = CosimplicialData { ring, levels, cofaces, codegeneracies };
    out.validate()?;
    Ok(out)
}

/// Ext^{s,t} dimensions (over F_p) from the reduced cobar complex, plus a
/// cross-check that the Tot spectral sequence of the cosimplicial object
/// produces the same groups on its second page.
#[derive(Clone, Debug)]
pub struct ExtTable {
    pub p: u64,
    pub dims: BTreeMap<(usize, i64), usize>,
    pub tot_cross_check: bool,
}

pub fn cobar_ext(h: &HopfData, m: &ComoduleData, s_max: usize, t_max: i64) -> Result<ExtTable, HopfError> {
    h.validate(t_max)?;
    let mut dims = BTreeMap::new();
    let mut cross = true;
    for t in 0..=t_max {
        let a = cobar_cosimplicial(h, m, s_max + 1, t).map_err(|e| HopfError::Bounds(e.to_string()))?;
        let (n, _incl) = a.normalized_cochains().map_err(|e| HopfError::Bounds(e.to_string()))?;
        for s in 0..=s_max {
            let hgy = n.homology(-(s as i64));
            let dim = hgy.pres.invariant_factors().len();
            if dim > 0 {
                dims.insert((s, t), dim);
            }
        }
        // cross-check through the Tot spectral sequence (E_2 page)
        let filt = super::tot_filtration(&a);
        let ss = crate::sseq::SpectralSequence::new(&filt);
        let p2 = ss.page(crate::sseq::PageIndex::R(2));
        for s in 0..=s_max as i64 {
            let got = p2
                .cells
                .get(&(-s, s))
                .map(|c| c.sq.pres.invariant_factors().len())
                .unwrap_or(0);
            let expect = dims.get(&(s as usize, t)).copied().unwrap_or(0);
            if got != expect {
                cross = false;
            }
        }
    }
    Ok(ExtTable { p: h.p, dims, tot_cross_check: cross })
}

/// The exterior Hopf algebra Lambda(x) over F_p with |x| = deg_x and x
/// primitive.
pub fn exterior_hopf(p: u64, deg_x: i64) -> HopfData {
    HopfData {
        p,
        degrees: vec![0, deg_x],
        counit: vec![1, 0],
        // psi(1) = 1 (x) 1; psi(x) = x (x) 1 + 1 (x) x
        coproduct: vec![vec![(0, 0, 1)], vec![(1, 0, 1), (0, 1, 1)]],
    }
}

/// The trivial comodule F_p.
pub fn trivial_comodule() -> ComoduleData {
    ComoduleData { degrees: vec![0], coaction: vec![vec![(0, 0, 1)]] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_validates() {
        let h = exterior_hopf(2, 1);
        h.validate(10).unwrap();
        let h = exterior_hopf(3, 3);
        h.validate(10).unwrap();
    }

    #[test]
    fn cobar_of_exterior_is_h0_tower() {
        // Ext_{Lambda(x)}^{s,t}(F_2, F_2) = F_2 exactly when t = s |x|
        let h = exterior_hopf(2, 1);
        let m = trivial_comodule();
        let table = cobar_ext(&h, &m, 6, 6).unwrap();
        assert!(table.tot_cross_check);
        for s in 0..=6usize {
            for t in 0..=6i64 {
                let expect = usize::from(t == s as i64);
                assert_eq!(table.dims.get(&(s, t)).copied().unwrap_or(0), expect, "({s},{t})");
            }
        }
    }

    #[test]
    fn trivial_hopf_concentrated_in_s0() {
        // Gamma = F_2: Ext concentrated in s = 0
        let h = HopfData { p: 2, degrees: vec![0], counit: vec![1], coproduct: vec![vec![(0, 0, 1)]] };
        let m = trivial_comodule();
        let table = cobar_ext(&h, &m, 4, 3).unwrap();
        for ((s, _t), d) in &table.dims {
            if *s > 0 {
                assert_eq!(*d, 0);
            }
        }
        assert_eq!(table.dims.get(&(0, 0)).copied().unwrap_or(0), 1);
    }

    #[test]
    fn zero_comodule_gives_zero_table() {
        let h = exterior_hopf(2, 1);
        let m = ComoduleData { degrees: vec![], coaction: vec![] };
        let table = cobar_ext(&h, &m, 3, 3).unwrap();
        assert!(table.dims.is_empty());
    }
}
