//! The tau-Bockstein spectral sequence of a filtered complex, full and
//! truncated.
//!
//! The trigraded spectral sequence is computed by evaluating the
//! tau-Bockstein bifiltration at each fixed weight w, which produces an
//! ordinary filtered complex (the slice): constant at X^w below filtration
//! 0 and X^{w+s} above. The page engine then runs unchanged, and the
//! structure theorems become literal span identities between the slice
//! pages and the pages of X.

use crate::complex::{mapping_cone, ChainMapData};
use crate::filtration::{FilteredComplexData, FiltrationError, ProfileBelow};
use crate::group::{GroupElement, GroupPresentation, Hom};
use crate::matrix::Matrix;
use crate::sseq::{PageIndex, SpectralSequence};
use std::collections::BTreeMap;

/// The full tau-Bockstein spectral sequence: one slice per weight.
pub struct TauBss {
    pub x: FilteredComplexData,
    pub w_lo: i64,
    pub w_hi: i64,
    pub slices: BTreeMap<i64, SpectralSequence>,
}

/// The slice of the tau-Bockstein filtration at weight w: the filtered
/// complex with level s = X^{w+s} for s >= 0, constant below 0.
pub fn bss_slice(x: &FilteredComplexData, w: i64) -> FilteredComplexData {
    let top = (x.s_max - w).max(0);
    let levels: Vec<_> = (0..=top).map(|s| x.level(w + s)).collect();
    let transitions: Vec<_> = (1..=top).map(|s| x.transition(w + s)).collect();
    FilteredComplexData::new(levels, transitions, 0, ProfileBelow::Constant, x.profile_above)
        .expect("bss slice is a filtered complex")
}

impl TauBss {
    pub fn new(x: &FilteredComplexData) -> Self {
        let w_lo = x.s_min - 1;
        let w_hi = x.s_max;
        let mut slices = BTreeMap::new();
        for w in w_lo..=w_hi {
            slices.insert(w, SpectralSequence::new(&bss_slice(x, w)));
        }
        TauBss { x: x.clone(), w_lo, w_hi, slices }
    }

    /// The tri-cell E_r^{n,w,s} as a subquotient presentation.
    pub fn cell(&self, r: PageIndex, n: i64, w: i64, s: i64) -> GroupPresentation {
        if s < 0 {
            return GroupPresentation::trivial(self.x.ring);
        }
        match self.slices.get(&w) {
            None => GroupPresentation::trivial(self.x.ring),
            Some(ss) => {
                let page = ss.page(r);
                page.cells
                    .get(&(n, s))
                    .map(|c| c.sq.pres.clone())
                    .unwrap_or_else(|| GroupPresentation::trivial(self.x.ring))
            }
        }
    }

    /// The abutment pi_{n,w} X = H_n(X^w).
    pub fn abutment(&self, n: i64, w: i64) -> GroupPresentation {
        self.x.level(w).homology(n).pres
    }

    /// taubar : E_r^{n,w,s} -> E_r^{n,w-1,s+1}, induced by the literal
    /// identity on E_1 representatives (the boundary subgroup grows).
    pub fn taubar_hom(&self, r: i64, n: i64, w: i64, s: i64) -> Option<Hom> {
        let src_ss = self.slices.get(&w)?;
        let tgt_ss = self.slices.get(&(w - 1))?;
        let src_page = src_ss.page(PageIndex::R(r));
        let tgt_page = tgt_ss.page(PageIndex::R(r));
        let src = src_page.cells.get(&(n, s))?;
        let tgt = tgt_page.cells.get(&(n, s + 1))?;
        // ambient E_1 groups agree literally
        let e1_src = src_ss.couple.e_pres(n, s);
        let e1_tgt = tgt_ss.couple.e_pres(n, s + 1);
        if e1_src != e1_tgt {
            return None;
        }
        let mut cols = Vec::new();
        for j in 0..src.sq.pres.gens {
            let rep = GroupElement { coords: src.z_span.column(j) };
            let cls = tgt.sq.class_of(&e1_tgt, &rep).ok()?;
            cols.push(cls.coords);
        }
        let m = Matrix::from_columns(self.x.ring, tgt.sq.pres.gens, &cols);
        Hom::new(src.sq.pres.clone(), tgt.sq.pres.clone(), m).ok()
    }
}

/// The k-truncated tau-Bockstein slice at weight w: level s is
/// Cone(X^{w+k} -> X^{w+s}) for 0 <= s <= k-1, zero above, constant below.
pub fn truncated_bss_slice(x: &FilteredComplexData, w: i64, k: i64) -> Result<FilteredComplexData, FiltrationError> {
    if k < 1 {
        return Err(FiltrationError::InvalidTauPower(k));
    }
    let mut levels = Vec::new();
    for s in 0..=k - 1 {
        levels.push(mapping_cone(&x.transition_composite(w + k, w + s)).cone);
    }
    let mut transitions = Vec::new();
    for s in 1..=k - 1 {
        let src = &levels[s as usize];
        let tgt = &levels[(s - 1) as usize];
        let a_id_rank = |deg: i64| x.level(w + k).rank(deg);
        let tb = x.transition(w + s);
        let f = ChainMapData::new(
            src.clone(),
            tgt.clone(),
            src.n_min.min(tgt.n_min),
            (src.n_min.min(tgt.n_min)..=src.n_max.max(tgt.n_max))
                .map(|deg| {
                    Matrix::identity(x.ring, a_id_rank(deg - 1)).block_diag(&tb.map_at(deg))
                })
                .collect(),
        )
        .map_err(|_| FiltrationError::NonCommutingTransition(s))?;
        transitions.push(f);
    }
    FilteredComplexData::new(levels, transitions, 0, ProfileBelow::Constant, crate::filtration::ProfileAbove::Zero)
}

pub struct TruncatedTauBss {
    pub x: FilteredComplexData,
    pub k: i64,
    pub w_lo: i64,
    pub w_hi: i64,
    pub slices: BTreeMap<i64, SpectralSequence>,
}

impl TruncatedTauBss {
    pub fn new(x: &FilteredComplexData, k: i64) -> Result<Self, FiltrationError> {
        let w_lo = x.s_min - 1;
        let w_hi = x.s_max;
        let mut slices = BTreeMap::new();
        for w in w_lo..=w_hi {
            slices.insert(w, SpectralSequence::new(&truncated_bss_slice(x, w, k)?));
        }
        Ok(TruncatedTauBss { x: x.clone(), k, w_lo, w_hi, slices })
    }

    /// The identification of E_1^{n,w,s} with H_n(Gr^{w+s} X) through the
    /// octahedral comparison; an isomorphism for 0 <= s <= k-1.
    pub fn e1_identification(&self, n: i64, w: i64, s: i64) -> Option<Hom> {
        if s < 0 || s > self.k - 1 {
            return None;
        }
        let ss = self.slices.get(&w)?;
        let x = &self.x;
        if s == self.k - 1 {
            // Gr^{k-1} is literally Cone(0 -> T^{k-1}) and T^{k-1} = Gr^{w+k-1} X
            let gr_t = mapping_cone(&ss.couple.x.transition(s + 1)).cone;
            let gr_x = x.associated_graded(w + s);
            let incl = ChainMapData::from_fn(&gr_x, &gr_t, |deg| {
                let pad = gr_t.rank(deg) - gr_x.rank(deg);
                Matrix::zero(x.ring, pad, gr_x.rank(deg)).vstack(&Matrix::identity(x.ring, gr_x.rank(deg)))
            })
            .ok()?;
            let h = incl.induced_hom(n);
            // orient the map from the slice E_1 to H(Gr X): invert
            return invert_iso(&h);
        }
        // psi : cone(transition of T) -> Gr^{w+s} X,
        // ((a',b'),(a,c)) -> (b' + T a, c)
        let t = x.transition_composite(w + self.k, w + s + 1);
        let gr_t = mapping_cone(&ss.couple.x.transition(s + 1)).cone;
        let gr_x = x.associated_graded(w + s);
        let psi = ChainMapData::from_fn(&gr_t, &gr_x, |deg| {
            let r_xn_prev = x.level(w + s + 1).rank(deg - 1);
            let r_xs = x.level(w + s).rank(deg);
            let r_xcap_2 = x.level(w + self.k).rank(deg - 2);
            let r_xcap_1 = x.level(w + self.k).rank(deg - 1);
            let top = Matrix::zero(x.ring, r_xn_prev, r_xcap_2)
                .hstack(&Matrix::identity(x.ring, r_xn_prev))
                .hstack(&t.map_at(deg - 1))
                .hstack(&Matrix::zero(x.ring, r_xn_prev, r_xs));
            let bot = Matrix::zero(x.ring, r_xs, r_xcap_2 + r_xn_prev + r_xcap_1)
                .hstack(&Matrix::identity(x.ring, r_xs));
            top.vstack(&bot)
        })
        .ok()?;
        Some(psi.induced_hom(n))
    }

    pub fn abutment(&self, n: i64, w: i64) -> GroupPresentation {
        // pi_{n,w}(X/tau^k)
        mapping_cone(&self.x.transition_composite(w + self.k, w)).cone.homology(n).pres
    }
}

fn invert_iso(h: &Hom) -> Option<Hom> {
    if !h.is_iso() {
        return None;
    }
    let mut cols = Vec::new();
    for j in 0..h.target.gens {
        let pre = h.preimage(&h.target.generator(j))?;
        cols.push(pre.coords);
    }
    let m = Matrix::from_columns(h.matrix.ring, h.source.gens, &cols);
    Hom::new(h.target.clone(), h.source.clone(), m).ok()
}

/// Report for the correspondence between the tau-BSS and the underlying
/// spectral sequence (structure theorem clauses).
#[derive(Clone, Debug, Default)]
pub struct BssComparisonReport {
    pub clause_i_diffs_match: bool,
    pub clause_ii_targets_taubar_divisible: bool,
    pub clause_iii_cycle_boundary_identifications: bool,
    pub clause_iv_detection_transport: bool,
    pub clause_v_convergence_equivalence: bool,
    pub notes: Vec<String>,
}

impl BssComparisonReport {
    pub fn all_pass(&self) -> bool {
        self.clause_i_diffs_match
            && self.clause_ii_targets_taubar_divisible
            && self.clause_iii_cycle_boundary_identifications
            && self.clause_iv_detection_transport
            && self.clause_v_convergence_equivalence
    }
}

/// Verify the structure-theorem correspondences between the tau-BSS of X
/// and the underlying spectral sequence of X, cell by cell in the window.
pub fn bss_compare_to_sseq(x: &FilteredComplexData) -> BssComparisonReport {
    let bss = TauBss::new(x);
    let under = SpectralSequence::new(x);
    let mut rep = BssComparisonReport {
        clause_i_diffs_match: true,
        clause_ii_targets_taubar_divisible: true,
        clause_iii_cycle_boundary_identifications: true,
        clause_iv_detection_transport: true,
        clause_v_convergence_equivalence: true,
        notes: Vec::new(),
    };
    let r_max = under.couple.stabilization_index() + 1;
    let (n_lo, n_hi) = (under.couple.n_lo, under.couple.n_hi);

    // (iii) literal cycle/boundary identifications:
    // Z_r^{n,w,s} = Z_r^{n,w+s} and B_r^{n,w,s} = B_{min(r,s)}^{n,w+s}
    for (&w, slice) in &bss.slices {
        let top = (x.s_max - w).max(0);
        for s in 0..=top {
            for n in n_lo..=n_hi {
                let e1_slice = slice.couple.e_pres(n, s);
                let e1_under = under.couple.e_pres(n, w + s);
                if e1_slice != e1_under {
                    rep.clause_iii_cycle_boundary_identifications = false;
                    rep.notes.push(format!("E_1 mismatch at ({n},{w},{s})"));
                    continue;
                }
                for r in 0..=r_max {
                    let z_slice = slice.couple.cycles_span(n, s, r);
                    let z_under = under.couple.cycles_span(n, w + s, r);
                    if !e1_under.spans_equal(&z_slice, &z_under) {
                        rep.clause_iii_cycle_boundary_identifications = false;
                        rep.notes.push(format!("Z_{r} mismatch at ({n},{w},{s})"));
                    }
                    let b_slice = slice.couple.boundaries_span(n, s, r);
                    let b_under = under.couple.boundaries_span(n, w + s, r.min(s));
                    if !e1_under.spans_equal(&b_slice, &b_under) {
                        rep.clause_iii_cycle_boundary_identifications = false;
                        rep.notes.push(format!("B_{r} mismatch at ({n},{w},{s})"));
                    }
                }
            }
        }
    }

    // (i) d_r^tau from filtration 0 agrees with the underlying d_r on
    // Z_{r-1}-generators (targets land in the same literal subquotient)
    for (&w, slice) in &bss.slices {
        for r in 1..=r_max {
            let page_slice = slice.page(PageIndex::R(r));
            let page_under = under.page(PageIndex::R(r));
            for n in n_lo..=n_hi {
                let (Some(c_slice), Some(c_under)) =
                    (page_slice.cells.get(&(n, 0)), page_under.cells.get(&(n, w)))
                else {
                    continue;
                };
                if c_slice.z_span != c_under.z_span {
                    // same span, possibly different generator matrices:
                    // compare spans, then compare the diffs through z-gens
                    let e1 = under.couple.e_pres(n, w);
                    if !e1.spans_equal(&c_slice.z_span, &c_under.z_span) {
                        rep.clause_i_diffs_match = false;
                        rep.notes.push(format!("Z-span mismatch at ({n},{w},0) page {r}"));
                        continue;
                    }
                }
                let d_slice = page_slice.diffs.get(&(n, 0));
                let d_under = page_under.diffs.get(&(n, w));
                let (Some(d_slice), Some(d_under)) = (d_slice, d_under) else { continue };
                // target cells: slice (n-1, r) has B_{min(r-1,r)} = B_{r-1},
                // the same literal subquotient as the underlying (n-1, w+r)
                let tgt_slice = page_slice.cells.get(&(n - 1, r));
                let tgt_under = page_under.cells.get(&(n - 1, w + r));
                match (tgt_slice, tgt_under) {
                    (Some(ts), Some(tu)) => {
                        let e1t = under.couple.e_pres(n - 1, w + r);
                        if !e1t.spans_equal(&ts.b_span, &tu.b_span)
                            || !e1t.spans_equal(&ts.z_span, &tu.z_span)
                        {
                            rep.clause_i_diffs_match = false;
                            rep.notes.push(format!("target subquotient mismatch at ({n},{w}) page {r}"));
                            continue;
                        }
                        // compare the differentials generator by generator,
                        // as elements of E_1 modulo the common boundaries
                        for j in 0..c_slice.sq.pres.gens {
                            let z_elt = GroupElement { coords: c_slice.z_span.column(j) };
                            let img_s = ts.sq.representative(&d_slice.apply(&c_slice.sq.pres.generator(j)));
                            let cls_u_src = c_under.sq.class_of(&under.couple.e_pres(n, w), &z_elt)
                                .expect("generator is an (r-1)-cycle");
                            let img_u = tu.sq.representative(&d_under.apply(&cls_u_src));
                            let diff = e1t.add(&img_s, &e1t.neg_elt(&img_u));
                            if !e1t.member_of_span(&diff, &tu.b_span) {
                                rep.clause_i_diffs_match = false;
                                rep.notes.push(format!("d_{r} disagree at ({n},{w},0) gen {j}"));
                            }
                        }
                    }
                    (None, None) => {}
                    _ => {
                        rep.clause_i_diffs_match = false;
                    }
                }
            }
        }
    }

    // (ii) every d_r^tau target is a taubar^r-multiple: taubar is a
    // surjection between consecutive pages, certified per cell
    for (&w, slice) in &bss.slices {
        if !bss.slices.contains_key(&(w - 1)) {
            continue;
        }
        let top = (x.s_max - w).max(0);
        for r in 1..=r_max {
            for n in n_lo..=n_hi {
                for s in 0..=top {
                    if let Some(h) = bss.taubar_hom(r, n, w, s) {
                        if !h.is_surjective() {
                            rep.clause_ii_targets_taubar_divisible = false;
                            rep.notes.push(format!("taubar not surjective at page {r} ({n},{w},{s})"));
                        }
                    }
                }
            }
        }
        let _ = slice;
    }

    // (iv) detection transport: if x detects theta in the slice at w, then
    // taubar.x detects tau.theta in the slice at w-1
    for (&w, slice) in &bss.slices {
        let Some(slice_down) = bss.slices.get(&(w - 1)) else { continue };
        for n in n_lo..=n_hi {
            let abut = bss.abutment(n, w);
            if abut.gens == 0 {
                continue;
            }
            let e1 = slice.couple.e_pres(n, 0);
            for j in 0..e1.gens {
                let xclass = e1.generator(j);
                for g in 0..abut.gens {
                    let theta = abut.generator(g);
                    if let Ok(alpha) = slice.detects(n, 0, &xclass, &theta) {
                        let _ = alpha;
                        // transport: tau . theta in pi_{n,w-1}
                        let tau_theta = x
                            .transition(w)
                            .induced_hom(n)
                            .apply(&theta);
                        // taubar x = the same representative at (n, 1) downstairs
                        match slice_down.detects(n, 1, &xclass, &tau_theta) {
                            Ok(_) => {}
                            Err(e) => {
                                // acceptable only if taubar x dies in E_inf downstairs
                                // while tau.theta is zero
                                let zero = bss.abutment(n, w - 1).is_zero_elt(&tau_theta);
                                if !(zero && matches!(e, crate::sseq::DetectError::DoesNotSurvive)) {
                                    rep.clause_iv_detection_transport = false;
                                    rep.notes.push(format!(
                                        "detection transport failed at ({n},{w}) gen {j}: {e}"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // (v) conditional convergence of every slice matches the underlying
    // spectral sequence; strong convergence follows with RE_infty = 0
    let under_conv = under.comparison_and_convergence();
    for (&w, slice) in &bss.slices {
        let conv = slice.comparison_and_convergence();
        if conv.conditionally_convergent != under_conv.conditionally_convergent {
            rep.clause_v_convergence_equivalence = false;
            rep.notes.push(format!("conditional convergence mismatch at w = {w}"));
        }
        if conv.conditionally_convergent && !conv.strongly_convergent {
            rep.clause_v_convergence_equivalence = false;
            rep.notes.push(format!("slice at w = {w} not strongly convergent despite RE = 0"));
        }
    }
    rep
}

/// The truncation map full -> k on slices: levelwise inclusion of X^{w+s}
/// into Cone(X^{w+k} -> X^{w+s}); returns per-level chain maps.
pub fn truncation_map_full_to_k(
    x: &FilteredComplexData,
    w: i64,
    k: i64,
) -> Result<Vec<ChainMapData>, FiltrationError> {
    let full = bss_slice(x, w);
    let trunc = truncated_bss_slice(x, w, k)?;
    let mut maps = Vec::new();
    for s in 0..=k - 1 {
        let src = full.level(s);
        let tgt = trunc.level(s);
        let f = ChainMapData::from_fn(&src, &tgt, |deg| {
            let pad = x.level(w + k).rank(deg - 1);
            Matrix::zero(x.ring, pad, src.rank(deg)).vstack(&Matrix::identity(x.ring, src.rank(deg)))
        })
        .map_err(|e| FiltrationError::Level { s, source: e })?;
        maps.push(f);
    }
    Ok(maps)
}

/// The truncation map k -> m on slices: A-part transition composite,
/// B-part identity (zero above filtration m-1).
pub fn truncation_map_k_to_m(
    x: &FilteredComplexData,
    w: i64,
    k: i64,
    m: i64,
) -> Result<Vec<ChainMapData>, FiltrationError> {
    assert!(k >= m && m >= 1);
    let big = truncated_bss_slice(x, w, k)?;
    let small = truncated_bss_slice(x, w, m)?;
    let mut maps = Vec::new();
    for s in 0..=k - 1 {
        let src = big.level(s);
        let tgt = small.level(s);
        let f = if s <= m - 1 {
            let ta = x.transition_composite(w + k, w + m);
            ChainMapData::from_fn(&src, &tgt, |deg| {
                ta.map_at(deg - 1).block_diag(&Matrix::identity(x.ring, x.level(w + s).rank(deg)))
            })
            .map_err(|e| FiltrationError::Level { s, source: e })?
        } else {
            ChainMapData::zero_map(&src, &tgt)
        };
        maps.push(f);
    }
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::{adic_filtration_complex, filtered_sphere, moore_complex};
    use crate::ring::Ring;
    use num_bigint::BigInt;

    fn moore_fixture(p: i64, k: u32, s_max: i64) -> FilteredComplexData {
        let c = moore_complex(Ring::Int, p.pow(k));
        adic_filtration_complex(&c, &BigInt::from(p), s_max).unwrap().0
    }

    #[test]
    fn sphere_bss_e1_towers() {
        // E_1 of the filtered sphere: Z . taubar^s at (0, -s, s)
        let x = filtered_sphere(Ring::Int, 0, 0);
        let bss = TauBss::new(&x);
        for w in -1..=0 {
            for s in 0..=1 {
                let cell = bss.cell(PageIndex::R(1), 0, w, s);
                if w + s == 0 && w <= 0 {
                    assert_eq!(cell.describe(), "Z", "({w},{s})");
                } else {
                    assert!(cell.is_trivial(), "({w},{s}): {}", cell.describe());
                }
            }
        }
    }

    #[test]
    fn moore_bss_structure() {
        let x = moore_fixture(2, 2, 5);
        let rep = bss_compare_to_sseq(&x);
        assert!(rep.clause_i_diffs_match, "{:?}", rep.notes);
        assert!(rep.clause_ii_targets_taubar_divisible, "{:?}", rep.notes);
        assert!(rep.clause_iii_cycle_boundary_identifications, "{:?}", rep.notes);
        assert!(rep.clause_iv_detection_transport, "{:?}", rep.notes);
        assert!(rep.clause_v_convergence_equivalence, "{:?}", rep.notes);
    }

    #[test]
    fn truncated_bss_converges_to_mod_tau_k() {
        let x = moore_fixture(2, 2, 5);
        for k in 1..=3 {
            let tr = TruncatedTauBss::new(&x, k).unwrap();
            for (&w, slice) in &tr.slices {
                let conv = slice.comparison_and_convergence();
                assert!(conv.strongly_convergent, "w = {w}, k = {k}");
                // abutment is pi_{n,w} X/tau^k
                for n in 0..=1 {
                    let a = tr.abutment(n, w);
                    let b = slice.abutment(n);
                    assert_eq!(a.invariant_factors(), b.invariant_factors(), "({n},{w}), k={k}");
                }
            }
        }
    }

    #[test]
    fn truncated_e1_identification() {
        let x = moore_fixture(2, 2, 4);
        let k = 2;
        let tr = TruncatedTauBss::new(&x, k).unwrap();
        for w in 0..=2 {
            for s in 0..=k - 1 {
                for n in 0..=1 {
                    let h = tr.e1_identification(n, w, s).expect("identification defined");
                    assert!(h.is_iso(), "({n},{w},{s})");
                }
            }
            // zero beyond k-1
            assert!(tr
                .slices[&w]
                .couple
                .e_pres(0, k)
                .is_trivial());
        }
    }

    #[test]
    fn truncated_differentials_cut_at_k() {
        // k-truncated BSS has no d_r for r >= k (degree reasons), and for
        // r <= k-1 the differentials match the underlying ones
        let x = moore_fixture(2, 2, 5);
        let k = 3;
        let tr = TruncatedTauBss::new(&x, k).unwrap();
        let under = SpectralSequence::new(&x);
        for (&w, slice) in &tr.slices {
            let stab = slice.couple.stabilization_index() + 1;
            for r in k..=stab.max(k) {
                let page = slice.page(PageIndex::R(r));
                for (_, d) in &page.diffs {
                    assert!(d.is_zero_map(), "w = {w}, r = {r}");
                }
            }
            // d_2 in range (k-1 = 2): does the slice at w carry the d_2
            // pattern of the underlying sseq?
            let page2 = slice.page(PageIndex::R(2));
            let upage2 = under.page(PageIndex::R(2));
            if let (Some(d_t), Some(d_u)) = (page2.diffs.get(&(1, 0)), upage2.diffs.get(&(1, w))) {
                assert_eq!(d_t.is_zero_map(), d_u.is_zero_map(), "w = {w}");
            }
        }
    }

    #[test]
    fn truncation_maps_are_chain_maps() {
        let x = moore_fixture(2, 2, 5);
        for w in 0..=2 {
            let maps = truncation_map_full_to_k(&x, w, 3).unwrap();
            for m in maps {
                m.validate().unwrap();
            }
            let maps = truncation_map_k_to_m(&x, w, 3, 1).unwrap();
            for m in maps {
                m.validate().unwrap();
            }
            // the filtration-0 layer of k -> m is the reduction
            // X/tau^k -> X/tau^m at level w
            let maps = truncation_map_k_to_m(&x, w, 3, 2).unwrap();
            let red = x.mod_tau_reduction(3, 2).unwrap();
            let lvl = red.map_at(w);
            assert!(maps[0].maps_equal(&lvl), "w = {w}");
        }
    }

    #[test]
    fn second_page_reindexing_of_bss() {
        // Etilde_{r+1}^{n,w,s} := E_r^{n,w,s+w}: spot check on the sphere
        let x = filtered_sphere(Ring::Int, 0, 0);
        let bss = TauBss::new(&x);
        // cell (0, 0, 0) nonzero; reindexed it sits at s - w = 0
        let c = bss.cell(PageIndex::R(1), 0, 0, 0);
        assert_eq!(c.describe(), "Z");
    }
}
