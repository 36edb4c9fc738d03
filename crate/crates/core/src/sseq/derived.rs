//! Independent reference implementation of the pages by literal derived
//! exact couples. Used only by the test suites as an oracle against the
//! tau-divisibility engine; nothing in the engine depends on this module.
//!
//! Starting from the page-1 couple (A = H(X^s), E = H(Gr^s X)), each
//! derivation replaces A by im(i) and E by ker(d)/im(d), rebuilding the
//! three maps on the new presentations. No tau-divisibility shortcut is
//! used anywhere.

use crate::filtration::FilteredComplexData;
use crate::group::{GroupPresentation, Hom, Subquotient};
use crate::matrix::Matrix;
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// A couple at stage r: j has bidegree (0, r-1), so d_r = j ∘ k has
/// bidegree (-1, r).
pub struct DerivedCouple {
    pub r: i64,
    pub n_lo: i64,
    pub n_hi: i64,
    pub s_lo: i64,
    pub s_hi: i64,
    ring: crate::ring::Ring,
    a: BTreeMap<(i64, i64), GroupPresentation>,
    e: BTreeMap<(i64, i64), GroupPresentation>,
    /// i : A^{n,s} -> A^{n,s-1}
    i_map: BTreeMap<(i64, i64), Hom>,
    /// j : A^{n,s} -> E^{n,s+r-1}
    j_map: BTreeMap<(i64, i64), Hom>,
    /// k : E^{n,s} -> A^{n-1,s+1}
    k_map: BTreeMap<(i64, i64), Hom>,
}

impl DerivedCouple {
    /// The page-1 couple, materialized over a window wide enough to derive
    /// `depth` times.
    pub fn initial(x: &FilteredComplexData, depth: i64) -> Self {
        let (n_min, n_max) = x.degree_window();
        let (n_lo, n_hi) = (n_min, n_max + 1);
        let s_lo = x.s_min - 2 - depth;
        let s_hi = x.s_max + 2 + depth;
        let ring = x.ring;
        let mut a = BTreeMap::new();
        let mut e = BTreeMap::new();
        let mut i_map = BTreeMap::new();
        let mut j_map = BTreeMap::new();
        let mut k_map = BTreeMap::new();
        let mut a_cells = BTreeMap::new();
        for s in s_lo..=s_hi {
            let lvl = x.level(s);
            for n in n_lo..=n_hi {
                a_cells.insert((n, s), lvl.homology(n));
            }
        }
        for s in s_lo..=s_hi {
            for n in n_lo..=n_hi {
                a.insert((n, s), a_cells[&(n, s)].pres.clone());
            }
        }
        for s in s_lo + 1..=s_hi {
            let t = x.transition(s);
            for n in n_lo..=n_hi {
                i_map.insert((n, s), t.induced_hom_with(&a_cells[&(n, s)], &a_cells[&(n, s - 1)]));
            }
        }
        for s in s_lo..=s_hi - 1 {
            let mc = crate::complex::mapping_cone(&x.transition(s + 1));
            for n in n_lo..=n_hi {
                let he = mc.cone.homology(n);
                j_map.insert((n, s), mc.incl.induced_hom_with(&a_cells[&(n, s)], &he));
                let kh = if n - 1 < n_lo {
                    Hom::zero(he.pres.clone(), GroupPresentation::trivial(ring))
                } else {
                    let ha_up = &a_cells[&(n - 1, s + 1)];
                    let ra = x.level(s + 1).rank(n - 1);
                    let mut cols = Vec::new();
                    for jj in 0..he.pres.gens {
                        let rep = he.cycles.column(jj);
                        let a_part: Vec<BigInt> = rep[..ra].to_vec();
                        cols.push(ha_up.class_of(&a_part).coords);
                    }
                    let m = Matrix::from_columns(ring, ha_up.pres.gens, &cols);
                    Hom::new(he.pres.clone(), ha_up.pres.clone(), m).expect("k map")
                };
                k_map.insert((n, s), kh);
                e.insert((n, s), he.pres.clone());
            }
        }
        DerivedCouple { r: 1, n_lo, n_hi, s_lo, s_hi, ring, a, e, i_map, j_map, k_map }
    }

    fn a_pres(&self, n: i64, s: i64) -> GroupPresentation {
        self.a.get(&(n, s)).cloned().unwrap_or_else(|| GroupPresentation::trivial(self.ring))
    }

    pub fn e_pres(&self, n: i64, s: i64) -> GroupPresentation {
        self.e.get(&(n, s)).cloned().unwrap_or_else(|| GroupPresentation::trivial(self.ring))
    }

    fn i_hom(&self, n: i64, s: i64) -> Hom {
        self.i_map
            .get(&(n, s))
            .cloned()
            .unwrap_or_else(|| Hom::zero(self.a_pres(n, s), self.a_pres(n, s - 1)))
    }

    fn j_hom(&self, n: i64, s: i64) -> Hom {
        self.j_map
            .get(&(n, s))
            .cloned()
            .unwrap_or_else(|| Hom::zero(self.a_pres(n, s), self.e_pres(n, s + self.r - 1)))
    }

    fn k_hom(&self, n: i64, s: i64) -> Hom {
        self.k_map
            .get(&(n, s))
            .cloned()
            .unwrap_or_else(|| Hom::zero(self.e_pres(n, s), self.a_pres(n - 1, s + 1)))
    }

    /// d_r = j ∘ k : E^{n,s} -> E^{n-1,s+r}.
    pub fn differential(&self, n: i64, s: i64) -> Hom {
        self.k_hom(n, s).then(&self.j_hom(n - 1, s + 1))
    }

    /// One derivation step: A' = im(i), E' = ker(d)/im(d).
    pub fn derive(&self) -> DerivedCouple {
        let ring = self.ring;
        // shrink the stored window by one on each side so every map stays
        // inside the materialized region
        let s_lo = self.s_lo + 1;
        let s_hi = self.s_hi - 1;
        let mut a = BTreeMap::new();
        let mut e = BTreeMap::new();
        let mut i_map: BTreeMap<(i64, i64), Hom> = BTreeMap::new();
        let mut j_map = BTreeMap::new();
        let mut k_map = BTreeMap::new();

        // A' cells as subquotients im(i) of A, remembering the inclusion data
        let mut a_sub: BTreeMap<(i64, i64), Subquotient> = BTreeMap::new();
        for s in s_lo..=s_hi {
            for n in self.n_lo..=self.n_hi {
                let amb = self.a_pres(n, s);
                let img = self.i_hom(n, s + 1).image_span();
                let sq = amb.subquotient(&img, &Matrix::zero(ring, amb.gens, 0)).expect("image subgroup");
                a.insert((n, s), sq.pres.clone());
                a_sub.insert((n, s), sq);
            }
        }
        // E' cells as ker(d)/im(d) subquotients of E
        let mut e_sub: BTreeMap<(i64, i64), Subquotient> = BTreeMap::new();
        for s in s_lo..=s_hi - 1 {
            for n in self.n_lo..=self.n_hi {
                let amb = self.e_pres(n, s);
                let d_out = self.differential(n, s);
                let d_in = self.differential(n + 1, s - self.r);
                let ker = d_out.kernel_span();
                let img = d_in.image_span();
                let sq = amb.subquotient(&ker, &img).expect("im(d) inside ker(d)");
                e.insert((n, s), sq.pres.clone());
                e_sub.insert((n, s), sq);
            }
        }

        // i' : restriction of i to the images
        for s in s_lo + 1..=s_hi {
            for n in self.n_lo..=self.n_hi {
                let src = &a_sub[&(n, s)];
                let tgt = &a_sub[&(n, s - 1)];
                let i_amb = self.i_hom(n, s);
                let amb_tgt = self.a_pres(n, s - 1);
                // generator representatives are the columns of src.sub
                let images = i_amb.matrix.mul(&src.sub);
                let m = tgt.classes_of(&amb_tgt, &images).expect("i preserves images");
                i_map.insert((n, s), Hom::new(src.pres.clone(), tgt.pres.clone(), m).expect("derived i"));
            }
        }

        // j' : A'^{n,s} -> E'^{n,s+r}; alpha = i(beta) maps to [j(beta)]
        let r_new = self.r + 1;
        for s in s_lo..=s_hi {
            for n in self.n_lo..=self.n_hi {
                let src = &a_sub[&(n, s)];
                let tgt_key = (n, s + r_new - 1);
                let tgt = e_sub.get(&tgt_key);
                let hom = match tgt {
                    None => Hom::zero(
                        src.pres.clone(),
                        e.get(&tgt_key).cloned().unwrap_or_else(|| GroupPresentation::trivial(ring)),
                    ),
                    Some(tgt) => {
                        let i_amb = self.i_hom(n, s + 1);
                        let j_amb = self.j_hom(n, s + 1);
                        let e_amb = self.e_pres(n, s + 1 + self.r - 1);
                        // batch: lift all generators through i, push through j
                        let aug = i_amb.matrix.hstack(&i_amb.target.relations);
                        let sols = aug.solve_multi(&src.sub);
                        let mut betas = Vec::with_capacity(sols.len());
                        for sol in sols {
                            let sol = sol.expect("generator of im(i) lifts");
                            betas.push(sol[..i_amb.source.gens].to_vec());
                        }
                        let beta_m = Matrix::from_columns(ring, i_amb.source.gens, &betas);
                        let images = j_amb.matrix.mul(&beta_m);
                        let m = tgt.classes_of(&e_amb, &images).expect("j(beta) is a d-cycle");
                        Hom::new(src.pres.clone(), tgt.pres.clone(), m).expect("derived j")
                    }
                };
                j_map.insert((n, s), hom);
            }
        }

        // k' : E'^{n,s} -> A'^{n-1,s+1}; a cycle class maps by k
        for s in s_lo..=s_hi - 1 {
            for n in self.n_lo..=self.n_hi {
                let src = &e_sub[&(n, s)];
                let tgt_key = (n - 1, s + 1);
                let hom = if n - 1 < self.n_lo {
                    Hom::zero(src.pres.clone(), GroupPresentation::trivial(ring))
                } else {
                    let tgt = &a_sub[&tgt_key];
                    let k_amb = self.k_hom(n, s);
                    let amb_tgt = self.a_pres(n - 1, s + 1);
                    let images = k_amb.matrix.mul(&src.sub);
                    let m = tgt.classes_of(&amb_tgt, &images).expect("k of a d-cycle lands in im(i)");
                    Hom::new(src.pres.clone(), tgt.pres.clone(), m).expect("derived k")
                };
                k_map.insert((n, s), hom);
            }
        }

        DerivedCouple {
            r: r_new,
            n_lo: self.n_lo,
            n_hi: self.n_hi,
            s_lo,
            s_hi,
            ring,
            a,
            e,
            i_map,
            j_map,
            k_map,
        }
    }

    /// Iso-invariant data of the page cell and its differential at (n,s):
    /// (invariant factors of E_r, of ker d_r, of the subgroup im d_r).
    pub fn cell_invariants(&self, n: i64, s: i64) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
        let e = self.e_pres(n, s);
        let d = self.differential(n, s);
        let ker = d.kernel_span();
        let ker_sq = e.subquotient(&ker, &Matrix::zero(self.ring, e.gens, 0)).expect("kernel subgroup");
        let d_in = self.differential(n + 1, s - self.r);
        let tgt = self.e_pres(n, s);
        let img_sq = tgt
            .subquotient(&d_in.image_span(), &Matrix::zero(self.ring, tgt.gens, 0))
            .expect("image subgroup");
        (
            e.invariant_factors(),
            ker_sq.pres.invariant_factors(),
            img_sq.pres.invariant_factors(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::{adic_filtration_complex, moore_complex};
    use crate::ring::Ring;
    use crate::sseq::{PageIndex, SpectralSequence};

    #[test]
    fn oracle_matches_engine_on_moore() {
        let c = moore_complex(Ring::Int, 4);
        let x = adic_filtration_complex(&c, &BigInt::from(2), 5).unwrap().0;
        let ss = SpectralSequence::new(&x);
        let mut oracle = DerivedCouple::initial(&x, 5);
        for r in 1..=4 {
            let page = ss.page(PageIndex::R(r));
            for (&(n, s), cell) in &page.cells {
                let (e_inv, ker_inv, img_inv) = oracle.cell_invariants(n, s);
                assert_eq!(cell.sq.pres.invariant_factors(), e_inv, "E_{r} at ({n},{s})");
                let d = &page.diffs[&(n, s)];
                let e1 = ss.couple.e_pres(n, s);
                let _ = e1;
                let ker_sq = cell
                    .sq
                    .pres
                    .subquotient(&d.kernel_span(), &Matrix::zero(x.ring, cell.sq.pres.gens, 0))
                    .unwrap();
                assert_eq!(ker_sq.pres.invariant_factors(), ker_inv, "ker d_{r} at ({n},{s})");
                // incoming image
                let src = page.cells.get(&(n + 1, s - r));
                let img_fac = match src {
                    None => vec![],
                    Some(_) => {
                        let d_in = &page.diffs[&(n + 1, s - r)];
                        let img_sq = cell
                            .sq
                            .pres
                            .subquotient(&d_in.image_span(), &Matrix::zero(x.ring, cell.sq.pres.gens, 0))
                            .unwrap();
                        img_sq.pres.invariant_factors()
                    }
                };
                assert_eq!(img_fac, img_inv, "im d_{r} into ({n},{s})");
            }
            oracle = oracle.derive();
        }
    }
}
