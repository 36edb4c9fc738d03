//! Verification engine for the structure dictionary between the
//! Z[tau]-module of bigraded homotopy and the underlying spectral
//! sequence: lifts, tau-torsion, detection and generation, in full and
//! truncated versions, together with total-differential tables and the
//! seeded random-instance generator that powers the property suites.
//!
//! Every claim in a report carries a machine-checkable witness: an
//! element, a map or a solvability certificate; reports re-verify
//! independently of the engine that produced them.

pub mod dga;

use crate::filtration::{FilteredComplexData, ProfileBelow, TauCap};
use crate::group::{GroupElement, Hom};
use crate::matrix::Matrix;
use crate::ring::Ring;
use crate::sseq::{PageIndex, SpectralSequence};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum OmnibusError {
    #[error("precondition failed: the filtered complex is not complete")]
    NotComplete,
    #[error("invalid truncation k = {0}")]
    InvalidTruncation(i64),
    #[error("witness re-verification failed: {0}")]
    WitnessFailure(String),
}

/// Survival data for one E_1 generator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassRecord {
    pub n: i64,
    pub s: i64,
    pub gen_index: usize,
    /// the class as an element of E_1^{n,s}
    pub class: GroupElement,
    pub permanent_cycle: bool,
    /// lift witness to pi_{n,s}X when the class is a permanent cycle
    pub lift: Option<GroupElement>,
    /// largest page the class survives to; None means page infinity
    pub survives_to: Option<i64>,
    /// (2a) every lift has nonzero tau^{r-1}-multiple, r the survival page
    pub all_lifts_tau_nonzero: Option<bool>,
    /// (2b) image in the abutment, nonzero for every lift
    pub detected_element: Option<GroupElement>,
    /// (3a) when hit by a d_r: (r, a lift alpha with tau^r alpha = 0)
    pub torsion_lift: Option<(i64, GroupElement)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OmnibusReport {
    /// item (1): im(pi_{n,s}X -> E_1) equals the permanent cycles, per cell
    pub lift_iff_permanent: bool,
    pub records: Vec<ClassRecord>,
    /// item (4): per stem, lifts of permanent-cycle generators generate
    /// pi_{n,*}X (literal generation in the window model)
    pub generation_certified: Vec<(i64, bool)>,
    pub all_pass: bool,
}

/// Full Omnibus verification. Requires a complete filtered complex with
/// vanishing derived infinity-term (automatic in the window model, but
/// asserted with witnesses).
pub fn verify_omnibus(x: &FilteredComplexData) -> Result<OmnibusReport, OmnibusError> {
    if !x.is_complete() {
        return Err(OmnibusError::NotComplete);
    }
    let ss = SpectralSequence::new(x);
    let c = &ss.couple;
    // RE_infinity vanishes with witnesses
    for s in c.s_lo..=c.s_hi - 1 {
        for n in c.n_lo..=c.n_hi {
            let (re, _r0) = ss.re_infty(n, s);
            assert!(re.is_trivial());
        }
    }
    let mut lift_iff_permanent = true;
    let mut records = Vec::new();
    let mut all_pass = true;

    for s in c.s_lo..=c.s_hi - 1 {
        for n in c.n_lo..=c.n_hi {
            let e1 = c.e_pres(n, s);
            if e1.gens == 0 {
                continue;
            }
            let stab = c.cell_stabilization(n, s);
            let z_inf = c.cycles_span(n, s, stab);
            let p = c.proj_hom(n, s);
            // (1) permanent-cycle <=> lift: im(p) = Z_infinity
            if !e1.spans_equal(&p.image_span(), &z_inf) {
                lift_iff_permanent = false;
                all_pass = false;
            }
            for j in 0..e1.gens {
                let xclass = e1.generator(j);
                if e1.is_zero_elt(&xclass) {
                    continue;
                }
                let permanent = e1.member_of_span(&xclass, &z_inf);
                let mut rec = ClassRecord {
                    n,
                    s,
                    gen_index: j,
                    class: xclass.clone(),
                    permanent_cycle: permanent,
                    lift: None,
                    survives_to: None,
                    all_lifts_tau_nonzero: None,
                    detected_element: None,
                    torsion_lift: None,
                };
                if permanent {
                    let alpha = match p.preimage(&xclass) {
                        Some(a) => a,
                        None => {
                            all_pass = false;
                            records.push(rec);
                            continue;
                        }
                    };
                    rec.lift = Some(alpha.clone());
                    // survival page: largest r with nonzero image in E_r
                    let mut survives = None; // None = dies at page 1 (impossible for nonzero)
                    for r in 1..=stab + 1 {
                        let b = c.boundaries_span(n, s, r - 1);
                        if !e1.member_of_span(&xclass, &b) {
                            survives = Some(r);
                        }
                    }
                    let r_x = survives.expect("nonzero class survives at least page 1");
                    let to_infinity = r_x >= stab + 1;
                    rec.survives_to = if to_infinity { None } else { Some(r_x) };
                    // (2a): tau^{r-1} alpha nonzero for EVERY lift:
                    // tau^{r-1}(alpha) not in tau^{r-1}(ker p)
                    let t = c.tau_composite(n, s, s - (r_x - 1));
                    let img = t.apply(&alpha);
                    let bad = t.matrix.mul(&p.kernel_span());
                    let nonzero_all = !t.target.member_of_span(&img, &bad);
                    rec.all_lifts_tau_nonzero = Some(nonzero_all);
                    if !nonzero_all {
                        all_pass = false;
                    }
                    if to_infinity {
                        // (2b): image in the abutment nonzero for every lift
                        let cmap = ss.abutment_map(n, s);
                        let theta = cmap.apply(&alpha);
                        let bad = cmap.matrix.mul(&p.kernel_span());
                        if cmap.target.member_of_span(&theta, &bad) {
                            all_pass = false;
                        } else {
                            rec.detected_element = Some(theta);
                        }
                    }
                    // (3a): hit by a differential: minimal r with x in B_r
                    let b_inf = c.boundaries_span(n, s, stab);
                    if e1.member_of_span(&xclass, &b_inf) {
                        let mut r_hit = stab;
                        for r in 1..=stab {
                            if e1.member_of_span(&xclass, &c.boundaries_span(n, s, r)) {
                                r_hit = r;
                                break;
                            }
                        }
                        // exhibit a lift with tau^{r_hit} alpha = 0
                        let ker = c.tau_composite(n, s, s - r_hit).kernel_span();
                        let p_on_ker = p.matrix.mul(&ker);
                        let sol = e1.express_in_span(&xclass, &p_on_ker);
                        match sol {
                            Some(lambda) => {
                                let alpha_t = GroupElement { coords: ker.mul_vec(&lambda) };
                                // replay both witness properties
                                let is_lift = e1.elts_equal(&p.apply(&alpha_t), &xclass);
                                let killed = c
                                    .tau_composite(n, s, s - r_hit)
                                    .apply(&alpha_t);
                                let is_torsion = c.a_pres(n, s - r_hit).is_zero_elt(&killed);
                                if is_lift && is_torsion {
                                    rec.torsion_lift = Some((r_hit, alpha_t));
                                } else {
                                    all_pass = false;
                                }
                            }
                            None => {
                                all_pass = false;
                            }
                        }
                    }
                }
                records.push(rec);
            }
        }
    }

    // (4) generation: per stem, tau-multiples of the chosen lifts span
    // every pi_{n,s}X in the window
    let mut generation = Vec::new();
    for n in c.n_lo..=c.n_hi {
        let mut lifts: Vec<(i64, GroupElement)> = Vec::new();
        for rec in &records {
            if rec.n == n {
                if let Some(alpha) = &rec.lift {
                    lifts.push((rec.s, alpha.clone()));
                }
            }
        }
        let mut ok = true;
        for s in c.s_lo..=c.s_hi {
            let a = c.a_pres(n, s);
            if a.is_trivial() {
                continue;
            }
            let mut cols = Vec::new();
            for (s_i, alpha) in &lifts {
                if *s_i >= s {
                    let down = c.tau_composite(n, *s_i, s);
                    cols.push(down.apply(alpha).coords);
                }
            }
            let span = Matrix::from_columns(x.ring, a.gens, &cols);
            let all_gens = a.generators().iter().all(|g| a.member_of_span(g, &span));
            ok &= all_gens;
        }
        generation.push((n, ok));
        all_pass &= ok;
    }
    all_pass &= lift_iff_permanent;
    Ok(OmnibusReport { lift_iff_permanent, records, generation_certified: generation, all_pass })
}

/// Truncated Omnibus verification for X/tau^k.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TruncatedOmnibusReport {
    pub k: i64,
    /// (1): im(pi(X/tau^k) -> E_1) = Z_{k-1} per cell
    pub lift_iff_low_cycles: bool,
    /// (2a): every lift of a page-r survivor has nonzero tau^{r-1}-multiple
    pub tau_multiples_nonzero: bool,
    /// (2b): del_k^{k+1} of a lift represents d_k
    pub boundary_represents_dk: bool,
    /// (3): targets of d_r (r < k) admit tau^r-torsion lifts
    pub torsion_lifts: bool,
    /// part 2: the tau^{k-i}(beta) generators span pi(X/tau^k) per cell
    pub generation_certified: bool,
    /// relative version: the i <= k-m generators span ker(X/tau^k -> X/tau^m)
    pub relative_generation_certified: bool,
    /// coarse vanishing/injectivity criteria
    pub coarse_criteria: bool,
    pub all_pass: bool,
}

pub fn verify_truncated_omnibus(
    x: &FilteredComplexData,
    k: i64,
) -> Result<TruncatedOmnibusReport, OmnibusError> {
    if k < 1 {
        return Err(OmnibusError::InvalidTruncation(k));
    }
    let ss = SpectralSequence::new(x);
    let c = &ss.couple;
    // hoisted caches: the mod-tau^i complexes, their reductions to mod tau,
    // the tau-power maps into mod tau^k, level homologies, and page k
    let xi: Vec<FilteredComplexData> =
        (1..=k).map(|i| x.mod_tau(i)).collect::<Result<_, _>>().map_err(|_| OmnibusError::InvalidTruncation(k))?;
    let xk = &xi[(k - 1) as usize];
    let red_i1: Vec<crate::filtration::FilteredMapData> = (1..=k)
        .map(|i| x.mod_tau_reduction(i, 1))
        .collect::<Result<_, _>>()
        .map_err(|_| OmnibusError::InvalidTruncation(k))?;
    let red_k1 = &red_i1[(k - 1) as usize];
    let tau_pow: Vec<crate::filtration::FilteredMapData> = (1..=k)
        .map(|i| x.tau_power_map(k, k - i))
        .collect::<Result<_, _>>()
        .map_err(|_| OmnibusError::InvalidTruncation(k))?;
    let red_km_cache: Vec<crate::filtration::FilteredMapData> = (1..k)
        .map(|m| x.mod_tau_reduction(k, m))
        .collect::<Result<_, _>>()
        .map_err(|_| OmnibusError::InvalidTruncation(k))?;
    let page_k = ss.page(PageIndex::R(k));
    let mut h_cache: BTreeMap<(i64, i64, i64), crate::complex::Homology> = BTreeMap::new();
    for i in 1..=k {
        for s in c.s_lo - k..=c.s_hi + k {
            let lvl = xi[(i - 1) as usize].level(s);
            for n in c.n_lo..=c.n_hi {
                h_cache.insert((i, s, n), lvl.homology(n));
            }
        }
    }
    let h = |i: i64, s: i64, n: i64| -> &crate::complex::Homology { &h_cache[&(i, s, n)] };
    // tau-composite on the homotopy of X/tau^k, through the cached cells
    let tau_k_composite = |n: i64, from: i64, to: i64| -> Hom {
        let mut hom = Hom::identity(&h(k, from, n).pres);
        let mut prev = h(k, from, n);
        for s in (to + 1..=from).rev() {
            let next = h(k, s - 1, n);
            hom = hom.then(&xk.transition(s).induced_hom_with(prev, next));
            prev = next;
        }
        hom
    };

    let mut rep = TruncatedOmnibusReport {
        k,
        lift_iff_low_cycles: true,
        tau_multiples_nonzero: true,
        boundary_represents_dk: true,
        torsion_lifts: true,
        generation_certified: true,
        relative_generation_certified: true,
        coarse_criteria: true,
        all_pass: true,
    };

    for s in c.s_lo..=c.s_hi - 1 {
        for n in c.n_lo..=c.n_hi {
            let e1 = c.e_pres(n, s);
            if e1.gens == 0 {
                continue;
            }
            // homotopy of X/tau^k at (n,s) with the reduction map to E_1
            let hk = h(k, s, n).clone();
            let h1 = h(1, s, n).clone();
            let red_hom = red_k1.map_at(s).induced_hom_with(&hk, &h1);
            // E_1 presentation is the homology of Gr^s = Cone(t_{s+1}),
            // which is literally the X/tau level; identify them
            assert_eq!(h1.pres, e1, "mod-tau level and Gr disagree");
            // (1): image = Z_{k-1}
            let z_low = c.cycles_span(n, s, k - 1);
            if !e1.spans_equal(&red_hom.image_span(), &z_low) {
                rep.lift_iff_low_cycles = false;
            }
            let stab = c.cell_stabilization(n, s);
            for j in 0..e1.gens {
                let xclass = e1.generator(j);
                if e1.is_zero_elt(&xclass) || !e1.member_of_span(&xclass, &z_low) {
                    continue;
                }
                let alpha = match red_hom.preimage(&xclass) {
                    Some(a) => a,
                    None => {
                        rep.lift_iff_low_cycles = false;
                        continue;
                    }
                };
                // survival page r <= k
                let mut r_x = 0;
                for r in 1..=k.min(stab + 1) {
                    let b = c.boundaries_span(n, s, r - 1);
                    if !e1.member_of_span(&xclass, &b) {
                        r_x = r;
                    }
                }
                if r_x >= 1 {
                    // (2a) with the tau-action of X/tau^k
                    let t = tau_k_composite(n, s, s - (r_x - 1));
                    let img = t.apply(&alpha);
                    let bad = t.matrix.mul(&red_hom.kernel_span());
                    if t.target.member_of_span(&img, &bad) {
                        rep.tau_multiples_nonzero = false;
                    }
                }
                // (2b): del_k^{k+1}(alpha) represents d_k(x) when x is a
                // (k-1)-cycle and the target cell exists
                let del = x.total_differential(k, TauCap::Finite(k + 1), n, s);
                let del_img = del.apply(&alpha);
                // d_k(x) in E_k at (n-1, s+k)
                if let (Some(cell_src), Some(cell_tgt)) =
                    (page_k.cells.get(&(n, s)), page_k.cells.get(&(n - 1, s + k)))
                {
                    let e1_tgt = c.e_pres(n - 1, s + k);
                    // del_img lives in pi_{n-1,s+k}(X/tau) = E_1 of the target
                    let dk = &page_k.diffs[&(n, s)];
                    let src_class = cell_src.sq.class_of(&e1, &xclass).expect("x in Z_{k-1}");
                    let dk_val = dk.apply(&src_class);
                    // compare classes in E_k
                    match cell_tgt.sq.class_of(&e1_tgt, &del_img) {
                        Ok(del_class) => {
                            if !cell_tgt.sq.pres.elts_equal(&del_class, &dk_val) {
                                rep.boundary_represents_dk = false;
                            }
                        }
                        Err(_) => {
                            rep.boundary_represents_dk = false;
                        }
                    }
                }
                // (3): hit by d_r with r < k: exhibit tau^r-torsion lift
                for r in 1..k.min(stab + 1) {
                    let b_r = c.boundaries_span(n, s, r);
                    if e1.member_of_span(&xclass, &b_r) {
                        // lifts of x: alpha + ker(red); solve tau^r(alpha + K lam) = 0
                        let ker = red_hom.kernel_span();
                        let t = tau_k_composite(n, s, s - r);
                        let rhs = t.target.neg_elt(&t.apply(&alpha));
                        let sys = t.matrix.mul(&ker).hstack(&t.target.relations);
                        match sys.solve(&rhs.coords) {
                            Some(sol) => {
                                let lam = &sol[..ker.cols];
                                let corr = GroupElement { coords: ker.mul_vec(lam) };
                                let alpha_t = hk.pres.add(&alpha, &corr);
                                // replay
                                let killed = t.apply(&alpha_t);
                                if !t.target.is_zero_elt(&killed) {
                                    rep.torsion_lifts = false;
                                }
                            }
                            None => {
                                rep.torsion_lifts = false;
                            }
                        }
                        break;
                    }
                }
            }

            // part 2 (generation) at (n,s): tau^{k-i}(beta^i_j) generate
            let pi_k = &hk.pres;
            if !pi_k.is_trivial() {
                let mut cols: Vec<Vec<BigInt>> = Vec::new();
                for i in 1..=k {
                    // generators of Z_{i-1}/B_{k-i} at (n, s+k-i)
                    let sc = s + k - i;
                    let e1_up = c.e_pres(n, sc);
                    if e1_up.gens == 0 {
                        continue;
                    }
                    let z = c.cycles_span(n, sc, i - 1);
                    let b = c.boundaries_span(n, sc, k - i);
                    let sq = e1_up.subquotient(&z, &b).expect("B in Z");
                    if sq.pres.is_trivial() {
                        continue;
                    }
                    // lift each generator to pi(X/tau^i) then multiply by tau^{k-i}
                    let hi = h(i, sc, n);
                    let red_i_hom = red_i1[(i - 1) as usize]
                        .map_at(sc)
                        .induced_hom_with(hi, h(1, sc, n));
                    let tau_level = tau_pow[(i - 1) as usize].map_at(s); // source: (X/tau^i)^{s+k-i}
                    let tau_h = tau_level.induced_hom_with(hi, &hk);
                    for jj in 0..sq.pres.gens {
                        let g_e1 = GroupElement { coords: sq.sub.column(jj) };
                        if let Some(beta) = red_i_hom.preimage(&g_e1) {
                            cols.push(tau_h.apply(&beta).coords);
                        }
                    }
                }
                let span = Matrix::from_columns(x.ring, pi_k.gens, &cols);
                let gen_ok = pi_k.generators().iter().all(|g| pi_k.member_of_span(g, &span));
                if !gen_ok {
                    rep.generation_certified = false;
                }
                // relative version for each 1 <= m < k
                for m in 1..k {
                    let red_km = &red_km_cache[(m - 1) as usize];
                    let hm = h(m, s, n);
                    let red_hom_km = red_km.map_at(s).induced_hom_with(&hk, hm);
                    let kernel = red_hom_km.kernel_span();
                    let mut cols: Vec<Vec<BigInt>> = Vec::new();
                    for i in 1..=(k - m) {
                        let sc = s + k - i;
                        let e1_up = c.e_pres(n, sc);
                        if e1_up.gens == 0 {
                            continue;
                        }
                        let z = c.cycles_span(n, sc, i - 1);
                        let b = c.boundaries_span(n, sc, k - i);
                        let sq = e1_up.subquotient(&z, &b).expect("B in Z");
                        if sq.pres.is_trivial() {
                            continue;
                        }
                        let hi = h(i, sc, n);
                        let red_i_hom = red_i1[(i - 1) as usize]
                            .map_at(sc)
                            .induced_hom_with(hi, h(1, sc, n));
                        let tau_h = tau_pow[(i - 1) as usize].map_at(s).induced_hom_with(hi, &hk);
                        for jj in 0..sq.pres.gens {
                            let g_e1 = GroupElement { coords: sq.sub.column(jj) };
                            if let Some(beta) = red_i_hom.preimage(&g_e1) {
                                cols.push(tau_h.apply(&beta).coords);
                            }
                        }
                    }
                    let span = Matrix::from_columns(x.ring, pi_k.gens, &cols);
                    // span must equal the kernel subgroup
                    if !pi_k.spans_equal(&span, &kernel) {
                        rep.relative_generation_certified = false;
                    }
                }
            }

            // coarse criteria
            let all_e1_vanish = (0..k).all(|d| c.e_pres(n, s + d).is_trivial());
            if all_e1_vanish && !hk.pres.is_trivial() {
                rep.coarse_criteria = false;
            }
        }
    }
    rep.all_pass = rep.lift_iff_low_cycles
        && rep.tau_multiples_nonzero
        && rep.boundary_represents_dk
        && rep.torsion_lifts
        && rep.generation_certified
        && rep.relative_generation_certified
        && rep.coarse_criteria;
    Ok(rep)
}


/// Commuting-square report for total differentials vs page differentials.
#[derive(Clone, Debug, Default)]
pub struct TotalDiffReport {
    pub squares_commute: bool,
    pub surjectivity_certified: bool,
    pub truncated_squares_commute: bool,
    pub notes: Vec<String>,
}

/// Verify, for r in 1..=r_max and every cell: the square
///   pi_{n,s}(X/tau^r) --del_r^infty--> pi_{n-1,s+r}X
///        |                                  |
///        v                                  v
///      E_r^{n,s}      --d_r-->         E_r^{n-1,s+r}
/// as a matrix identity, plus the surjectivity of pi(X/tau^r) -> E_r, and
/// the del_r^R variant with target Z_m/B_{r-1}, m = min(r-1, R-r-1).
pub fn total_diff_table(x: &FilteredComplexData, r_max: i64, cap_max: i64) -> TotalDiffReport {
    let ss = SpectralSequence::new(x);
    let c = &ss.couple;
    let mut rep = TotalDiffReport {
        squares_commute: true,
        surjectivity_certified: true,
        truncated_squares_commute: true,
        notes: Vec::new(),
    };
    let x1 = x.mod_tau(1).unwrap();
    for r in 1..=r_max {
        let page = ss.page(PageIndex::R(r));
        let xr = x.mod_tau(r).unwrap();
        let red = x.mod_tau_reduction(r, 1).unwrap();
        for s in c.s_lo..=c.s_hi - 1 {
            for n in c.n_lo..=c.n_hi {
                let Some(cell) = page.cells.get(&(n, s)) else { continue };
                let e1 = c.e_pres(n, s);
                let hk = xr.level(s).homology(n);
                if hk.pres.is_trivial() {
                    continue;
                }
                // left vertical: reduction to E_1 (lands in Z_{r-1}), then class
                let h1 = x1.level(s).homology(n);
                let red_hom = red.map_at(s).induced_hom_with(&hk, &h1);
                // surjectivity onto E_r: image = Z_{r-1}
                let z = c.cycles_span(n, s, r - 1);
                if !e1.spans_equal(&red_hom.image_span(), &z) {
                    rep.surjectivity_certified = false;
                    rep.notes.push(format!("pi(X/tau^{r}) does not cover Z_{} at ({n},{s})", r - 1));
                }
                let del = x.total_differential(r, TauCap::Infinite, n, s);
                let d_r = &page.diffs[&(n, s)];
                let tgt_cell = page.cells.get(&(n - 1, s + r));
                for j in 0..hk.pres.gens {
                    let a = hk.pres.generator(j);
                    let x_e1 = red_hom.apply(&a);
                    let Ok(x_cls) = cell.sq.class_of(&e1, &x_e1) else {
                        rep.surjectivity_certified = false;
                        continue;
                    };
                    let lhs = d_r.apply(&x_cls);
                    // right vertical: del(a) in pi_{n-1,s+r}X, to E_r via p
                    let del_a = del.apply(&a);
                    let p_t = c.proj_hom(n - 1, s + r);
                    let rhs_e1 = p_t.apply(&del_a);
                    match tgt_cell {
                        Some(tc) => match tc.sq.class_of(&c.e_pres(n - 1, s + r), &rhs_e1) {
                            Ok(rhs) => {
                                if !tc.sq.pres.elts_equal(&lhs, &rhs) {
                                    rep.squares_commute = false;
                                    rep.notes.push(format!("square fails at r={r} ({n},{s}) gen {j}"));
                                }
                            }
                            Err(_) => {
                                rep.squares_commute = false;
                                rep.notes.push(format!("p(del) not in Z at r={r} ({n},{s})"));
                            }
                        },
                        None => {
                            if !d_r.target.is_zero_elt(&lhs) {
                                rep.squares_commute = false;
                            }
                        }
                    }
                }
                // truncated square for R in r+1..=cap_max
                for cap in r + 1..=cap_max {
                    let m = (r - 1).min(cap - r - 1);
                    let del_fin = x.total_differential(r, TauCap::Finite(cap), n, s);
                    let e1_t = c.e_pres(n - 1, s + r);
                    if e1_t.gens == 0 {
                        continue;
                    }
                    let z_m = c.cycles_span(n - 1, s + r, m);
                    let b_r1 = c.boundaries_span(n - 1, s + r, r - 1);
                    let Ok(sub_tgt) = e1_t.subquotient(&z_m, &b_r1) else { continue };
                    // right vertical: pi(X/tau^{cap-r}) at (n-1,s+r) -> Z_m/B_{r-1}
                    let x_cr = x.mod_tau(cap - r).unwrap();
                    let h_cr = x_cr.level(s + r).homology(n - 1);
                    let red_cr = x.mod_tau_reduction(cap - r, 1).unwrap();
                    let red_cr_hom = red_cr
                        .map_at(s + r)
                        .induced_hom_with(&h_cr, &x1.level(s + r).homology(n - 1));
                    for j in 0..hk.pres.gens {
                        let a = hk.pres.generator(j);
                        let x_e1 = red_hom.apply(&a);
                        let Ok(x_cls) = cell.sq.class_of(&e1, &x_e1) else { continue };
                        let lhs_er = d_r.apply(&x_cls);
                        // include E_r -> Z_m/B_{r-1}
                        let lhs = match tgt_cell {
                            Some(tc) => {
                                let rep_e1 = tc.sq.representative(&lhs_er);
                                match sub_tgt.class_of(&e1_t, &rep_e1) {
                                    Ok(v) => v,
                                    Err(_) => {
                                        rep.truncated_squares_commute = false;
                                        continue;
                                    }
                                }
                            }
                            None => sub_tgt.pres.zero(),
                        };
                        let del_a = del_fin.apply(&a);
                        let rhs_e1 = red_cr_hom.apply(&del_a);
                        match sub_tgt.class_of(&e1_t, &rhs_e1) {
                            Ok(rhs) => {
                                if !sub_tgt.pres.elts_equal(&lhs, &rhs) {
                                    rep.truncated_squares_commute = false;
                                    rep.notes.push(format!(
                                        "truncated square fails at r={r} R={cap} ({n},{s}) gen {j}"
                                    ));
                                }
                            }
                            Err(_) => {
                                rep.truncated_squares_commute = false;
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}

/// Corollary check: pi_{n,*}X is tau-power torsion free iff no nonzero
/// differential enters stem n (verified in both directions).
pub fn torsion_free_iff_no_incoming(x: &FilteredComplexData) -> bool {
    let ss = SpectralSequence::new(x);
    let c = &ss.couple;
    let r_hi = c.stabilization_index() + 1;
    for n in c.n_lo..=c.n_hi {
        // tau-power torsion in stem n?
        let mut has_torsion = false;
        for s in c.s_lo + 1..=c.s_hi {
            let ker = c.tau_composite(n, s, c.s_lo).kernel_span();
            let a = c.a_pres(n, s);
            if ker.columns().any(|col| !a.is_zero_elt(&GroupElement { coords: col })) {
                has_torsion = true;
            }
        }
        // incoming differentials to stem n?
        let mut incoming = false;
        for r in 1..=r_hi {
            let page = ss.page(PageIndex::R(r));
            for (&(nn, _), d) in &page.diffs {
                if nn == n + 1 && !d.is_zero_map() {
                    incoming = true;
                }
            }
        }
        if has_torsion != incoming {
            return false;
        }
    }
    true
}

/// Parameters for the seeded random generator of filtered complexes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandomParams {
    pub ring: Ring,
    pub degree_lo: i64,
    pub degree_span: i64,
    pub max_rank: usize,
    pub window: i64,
    pub entry_bound: i64,
    /// replace inclusions by composites with random chain endomorphisms
    pub twist: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            ring: Ring::Int,
            degree_lo: 0,
            degree_span: 3,
            max_rank: 3,
            window: 4,
            entry_bound: 2,
            twist: true,
        }
    }
}

/// Deterministic random filtered complex: a free complex with weighted
/// basis and weight-respecting differential; levels are the weight
/// sublattices (a strict filtration), optionally twisted by random chain
/// endomorphisms to produce non-strict transitions.
pub fn random_filtered_complex(seed: u64, params: &RandomParams) -> FilteredComplexData {
    assert!(params.window <= 6 && params.degree_span <= 5 && params.max_rank <= 4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = params.ring;
    let n_lo = params.degree_lo;
    let n_hi = n_lo + params.degree_span;
    let w_max = params.window;

    // weighted basis and weight-respecting differential with d^2 = 0
    let ranks: Vec<usize> = (n_lo..=n_hi).map(|_| rng.gen_range(0..=params.max_rank)).collect();
    let weights: Vec<Vec<i64>> = ranks
        .iter()
        .map(|&r| (0..r).map(|_| rng.gen_range(0..=w_max)).collect())
        .collect();
    let mut diffs: Vec<Matrix> = Vec::new();
    for i in 0..ranks.len() {
        if i == 0 {
            diffs.push(Matrix::zero(ring, 0, ranks[0]));
            continue;
        }
        // allowed targets for a weight-w source: cycles of weight >= w
        let prev_d = &diffs[i - 1];
        let mut cols = Vec::new();
        for j in 0..ranks[i] {
            let w = weights[i][j];
            // sublattice of weight >= w elements in degree i-1
            let idxs: Vec<usize> = (0..ranks[i - 1]).filter(|&t| weights[i - 1][t] >= w).collect();
            let incl = Matrix::from_fn(ring, ranks[i - 1], idxs.len(), |r, c| {
                if r == idxs[c] { BigInt::from(1) } else { BigInt::from(0) }
            });
            let restricted = prev_d.mul(&incl);
            let kern = restricted.kernel_basis();
            let sub_cycles = incl.mul(&kern);
            let mut col = vec![BigInt::zero(); ranks[i - 1]];
            for t in 0..sub_cycles.cols {
                let coef = BigInt::from(rng.gen_range(-params.entry_bound..=params.entry_bound));
                for rr in 0..ranks[i - 1] {
                    col[rr] = ring.normalize(&(&col[rr] + sub_cycles.at(rr, t) * &coef));
                }
            }
            cols.push(col);
        }
        diffs.push(Matrix::from_columns(ring, ranks[i - 1], &cols));
    }
    let total = crate::complex::ChainComplexData { ring, n_min: n_lo, n_max: n_hi, ranks: ranks.clone(), diffs };
    total.validate().expect("weighted construction yields a complex");

    // levels: weight sublattices; transitions: inclusions
    let mut levels = Vec::new();
    let mut incls: Vec<Vec<Matrix>> = Vec::new();
    for s in 0..=w_max {
        let mut lranks = Vec::new();
        let mut lincl = Vec::new();
        for (i, &r) in ranks.iter().enumerate() {
            let idxs: Vec<usize> = (0..r).filter(|&t| weights[i][t] >= s).collect();
            lranks.push(idxs.len());
            lincl.push(Matrix::from_fn(ring, r, idxs.len(), |rr, cc| {
                if rr == idxs[cc] { BigInt::from(1) } else { BigInt::from(0) }
            }));
        }
        // differential restricted to the sublattice
        let mut ldiffs = Vec::new();
        for i in 0..ranks.len() {
            if i == 0 {
                ldiffs.push(Matrix::zero(ring, 0, lranks[0]));
            } else {
                let d_sub = total.diffs[i].mul(&lincl[i]);
                // solve incl_{i-1} * x = d_sub columnwise (weights only grow)
                let mut cols = Vec::new();
                for ccc in 0..d_sub.cols {
                    cols.push(lincl[i - 1].solve(&d_sub.column(ccc)).expect("weight respected"));
                }
                ldiffs.push(Matrix::from_columns(ring, lranks[i - 1], &cols));
            }
        }
        let lvl = crate::complex::ChainComplexData {
            ring,
            n_min: n_lo,
            n_max: n_hi,
            ranks: lranks,
            diffs: ldiffs,
        };
        lvl.validate().expect("level is a complex");
        levels.push(lvl);
        incls.push(lincl);
    }
    let mut transitions = Vec::new();
    for s in 1..=w_max as usize {
        let src = &levels[s];
        let tgt = &levels[s - 1];
        let maps: Vec<Matrix> = (0..ranks.len())
            .map(|i| {
                // express the weight>=s basis in the weight>=s-1 basis
                let mut cols = Vec::new();
                for ccc in 0..incls[s][i].cols {
                    cols.push(incls[s - 1][i].solve(&incls[s][i].column(ccc)).expect("nested"));
                }
                Matrix::from_columns(ring, incls[s - 1][i].cols, &cols)
            })
            .collect();
        let f = crate::complex::ChainMapData::new(src.clone(), tgt.clone(), n_lo, maps)
            .expect("inclusion is a chain map");
        transitions.push(f);
    }

    // optional twist: postcompose transitions with random chain endos
    if params.twist && rng.gen_bool(0.5) {
        for s in 1..=w_max as usize {
            if !rng.gen_bool(0.4) {
                continue;
            }
            let tgt = levels[s - 1].clone();
            // random chain endomorphism of the target: solve the chain-map
            // equations; the solution space always contains the scalars
            if let Some(endo) = random_chain_endo(&tgt, &mut rng, params.entry_bound) {
                transitions[s - 1] = transitions[s - 1].then(&endo);
            }
        }
    }
    FilteredComplexData::new(levels, transitions, 0, ProfileBelow::Constant, crate::filtration::ProfileAbove::Zero)
        .expect("random instance is valid")
}

/// A random chain endomorphism sampled from the solution lattice of the
/// chain-map equations.
fn random_chain_endo(
    c: &crate::complex::ChainComplexData,
    rng: &mut ChaCha8Rng,
    bound: i64,
) -> Option<crate::complex::ChainMapData> {
    // unknowns: entries of f_n for each degree; equations: d f = f d
    let degs: Vec<i64> = c.degrees().collect();
    let sizes: Vec<usize> = degs.iter().map(|&n| c.rank(n) * c.rank(n)).collect();
    let total: usize = sizes.iter().sum();
    if total == 0 {
        return None;
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for &n in &degs {
        // d_n f_n - f_{n-1} d_n = 0: target rank(n-1) x rank(n) equations
        let rn = c.rank(n);
        let rn1 = c.rank(n - 1);
        if rn == 0 || rn1 == 0 {
            continue;
        }
        let d = c.diff(n);
        for a in 0..rn1 {
            for b in 0..rn {
                let mut row = vec![BigInt::zero(); total];
                // d f term: sum_k d[a,k] f_n[k,b]
                let off_n = offset(&degs, &sizes, n);
                for k in 0..rn {
                    row[off_n + k * rn + b] = d.at(a, k).clone();
                }
                // -(f_{n-1} d) term: -sum_k f_{n-1}[a,k] d[k,b]
                if let Some(off_n1) = offset_opt(&degs, &sizes, n - 1) {
                    for k in 0..rn1 {
                        let v = &row[off_n1 + a * rn1 + k] - d.at(k, b);
                        row[off_n1 + a * rn1 + k] = v;
                    }
                }
                rows.push(row);
            }
        }
    }
    let sys = if rows.is_empty() {
        Matrix::zero(c.ring, 0, total)
    } else {
        Matrix::from_rows(c.ring, rows)
    };
    let kern = sys.kernel_basis();
    if kern.cols == 0 {
        return None;
    }
    let mut sol = vec![BigInt::zero(); total];
    for t in 0..kern.cols {
        let coef = BigInt::from(rng.gen_range(-bound..=bound));
        for r in 0..total {
            sol[r] = c.ring.normalize(&(&sol[r] + kern.at(r, t) * &coef));
        }
    }
    let maps: Vec<Matrix> = degs
        .iter()
        .map(|&n| {
            let rn = c.rank(n);
            let off = offset(&degs, &sizes, n);
            Matrix::from_fn(c.ring, rn, rn, |a, b| sol[off + a * rn + b].clone())
        })
        .collect();
    crate::complex::ChainMapData::new(c.clone(), c.clone(), degs[0], maps).ok()
}

fn offset(degs: &[i64], sizes: &[usize], n: i64) -> usize {
    offset_opt(degs, sizes, n).expect("degree in range")
}

fn offset_opt(degs: &[i64], sizes: &[usize], n: i64) -> Option<usize> {
    let idx = degs.iter().position(|&d| d == n)?;
    Some(sizes[..idx].iter().sum())
}

/// Build the standard seeded corpus.
pub fn corpus(count: u64, base_seed: u64) -> Vec<(u64, FilteredComplexData)> {
    let mut out = Vec::new();
    for i in 0..count {
        let seed = base_seed + i;
        let ring = match i % 3 {
            0 => Ring::Int,
            1 => Ring::Fp(2),
            _ => Ring::Fp(3),
        };
        let params = RandomParams {
            ring,
            degree_lo: 0,
            degree_span: 2 + (i % 2) as i64,
            max_rank: 2 + (i % 2) as usize,
            window: 3 + (i % 3) as i64,
            entry_bound: 2,
            twist: true,
        };
        out.push((seed, random_filtered_complex(seed, &params)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::{adic_filtration_complex, filtered_sphere, moore_complex};

    fn moore_fixture(p: i64, k: u32, s_max: i64) -> FilteredComplexData {
        let c = moore_complex(Ring::Int, p.pow(k));
        adic_filtration_complex(&c, &BigInt::from(p), s_max).unwrap().0
    }

    #[test]
    fn generator_is_deterministic_and_valid() {
        let p = RandomParams::default();
        let a = random_filtered_complex(42, &p);
        let b = random_filtered_complex(42, &p);
        assert_eq!(a, b);
        for (seed, x) in corpus(30, 1000) {
            let _ = seed;
            // validity is enforced by the constructor; spot-check graded
            assert!(x.s_max >= x.s_min);
        }
    }

    #[test]
    fn omnibus_on_sphere() {
        let x = filtered_sphere(Ring::Int, 0, 0);
        let rep = verify_omnibus(&x).unwrap();
        assert!(rep.all_pass);
        // pi is free of rank one on the sphere
        assert!(rep.generation_certified.iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn omnibus_on_moore() {
        let x = moore_fixture(2, 2, 6);
        let rep = verify_omnibus(&x).unwrap();
        assert!(rep.all_pass);
        // item (3a): there are tau^2-torsion lifts (classes hit by d_2)
        let has_tau2 = rep.records.iter().any(|r| matches!(&r.torsion_lift, Some((2, _))));
        assert!(has_tau2, "expected tau^2-torsion lifts");
    }

    #[test]
    fn omnibus_requires_completeness() {
        // constant filtration on the Moore complex is not complete
        let c = moore_complex(Ring::Int, 4);
        let lvl = vec![c.clone(), c.clone()];
        let t = crate::complex::ChainMapData::identity(&c);
        let x = FilteredComplexData::new(
            lvl,
            vec![t],
            0,
            ProfileBelow::Constant,
            crate::filtration::ProfileAbove::Constant,
        )
        .unwrap();
        assert_eq!(verify_omnibus(&x).unwrap_err(), OmnibusError::NotComplete);
    }

    #[test]
    fn truncated_omnibus_on_moore() {
        let x = moore_fixture(2, 2, 5);
        for k in 1..=3 {
            let rep = verify_truncated_omnibus(&x, k).unwrap();
            assert!(rep.all_pass, "k = {k}: {rep:?}");
        }
    }

    #[test]
    fn total_diff_squares_on_moore() {
        let x = moore_fixture(2, 2, 5);
        let rep = total_diff_table(&x, 3, 4);
        assert!(rep.squares_commute, "{:?}", rep.notes);
        assert!(rep.surjectivity_certified, "{:?}", rep.notes);
        assert!(rep.truncated_squares_commute, "{:?}", rep.notes);
    }

    #[test]
    fn torsion_corollary_on_fixtures() {
        assert!(torsion_free_iff_no_incoming(&filtered_sphere(Ring::Int, 0, 0)));
        assert!(torsion_free_iff_no_incoming(&moore_fixture(2, 2, 5)));
        assert!(torsion_free_iff_no_incoming(&moore_fixture(3, 1, 4)));
    }

    #[test]
    fn omnibus_on_small_corpus() {
        for (seed, x) in corpus(6, 500) {
            let rep = verify_omnibus(&x).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(rep.all_pass, "seed {seed}");
            let rep = verify_truncated_omnibus(&x, 2).unwrap();
            assert!(rep.all_pass, "seed {seed} truncated");
            assert!(torsion_free_iff_no_incoming(&x), "seed {seed} corollary");
        }
    }
}
