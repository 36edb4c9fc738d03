//! Filtered rings: tau-modules with bilinear multiplication, and
//! generators-and-relations reports certified up to the window bound.

use super::{TauModuleData, TauModuleError, TauProfileAbove};
use crate::group::{GroupElement, GroupPresentation, Hom};
use crate::matrix::Matrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A tau-module with bilinear multiplication maps
/// M^{a,s} (x) M^{b,t} -> M^{a+b,s+t} and a unit in bidegree (0,0).
///
/// The table for a pair of cells is a matrix whose column i*gens2 + j is
/// the product of generator i of the first cell with generator j of the
/// second, in the coordinates of the target cell.
#[derive(Clone, Debug)]
pub struct FilteredRingData {
    pub module: TauModuleData,
    pub mult: BTreeMap<((i64, i64), (i64, i64)), Matrix>,
    pub unit: GroupElement,
}

impl FilteredRingData {
    pub fn new(
        module: TauModuleData,
        mult: BTreeMap<((i64, i64), (i64, i64)), Matrix>,
        unit: GroupElement,
    ) -> Result<Self, TauModuleError> {
        let r = FilteredRingData { module, mult, unit };
        r.validate()?;
        Ok(r)
    }

    fn table(&self, a: i64, s: i64, b: i64, t: i64) -> Option<&Matrix> {
        self.mult.get(&((a, s), (b, t)))
    }

    /// Product of elements x in M^{a,s} and y in M^{b,t}, landing in
    /// M^{a+b, s+t}. Factors below the window are pushed up through the
    /// constant profile and the result is brought back down by tau.
    pub fn product(
        &self,
        a: i64,
        s: i64,
        x: &GroupElement,
        b: i64,
        t: i64,
        y: &GroupElement,
    ) -> Result<GroupElement, TauModuleError> {
        let m = &self.module;
        let sc = s.max(m.s_min);
        let tc = t.max(m.s_min);
        if sc > m.s_max || tc > m.s_max || sc + tc > m.s_max {
            return Err(TauModuleError::WindowTooSmall(format!(
                "product at filtrations ({s},{t}) leaves the window"
            )));
        }
        let table = self.table(a, sc, b, tc).ok_or_else(|| {
            TauModuleError::BadMultiplication(format!("missing table for ({a},{sc}) x ({b},{tc})"))
        })?;
        let g2 = m.cell(b, tc).gens;
        let mut acc = m.cell(a + b, sc + tc).zero();
        for (i, xi) in x.coords.iter().enumerate() {
            for (j, yj) in y.coords.iter().enumerate() {
                let col = table.column(i * g2 + j);
                let term = GroupElement {
                    coords: col.iter().map(|c| m.ring.normalize(&(c * xi * yj))).collect(),
                };
                acc = m.cell(a + b, sc + tc).add(&acc, &term);
            }
        }
        // bring the product down by the filtration clamp
        let down = (sc - s) + (tc - t);
        let tgt_from = sc + tc;
        Ok(m.tau_composite(a + b, tgt_from, tgt_from - down).apply(&acc))
    }

    fn validate(&self) -> Result<(), TauModuleError> {
        let m = &self.module;
        let ring = m.ring;
        if m.n_lo < 0 || m.s_min != 0 {
            return Err(TauModuleError::BadMultiplication(
                "ring window must start at filtration 0 with nonnegative stems".into(),
            ));
        }
        // tables present and bilinear over the relations
        for (&((a, s), (b, t)), table) in &self.mult {
            let c1 = m.cell(a, s);
            let c2 = m.cell(b, t);
            let tgt = m.cell(a + b, s + t);
            if table.rows != tgt.gens || table.cols != c1.gens * c2.gens {
                return Err(TauModuleError::BadMultiplication(format!(
                    "table shape for ({a},{s}) x ({b},{t})"
                )));
            }
            for rel in c1.relations.columns() {
                for j in 0..c2.gens {
                    let mut acc = tgt.zero();
                    for (i, ri) in rel.iter().enumerate() {
                        let col = table.column(i * c2.gens + j);
                        let term =
                            GroupElement { coords: col.iter().map(|c| ring.normalize(&(c * ri))).collect() };
                        acc = tgt.add(&acc, &term);
                    }
                    if !tgt.is_zero_elt(&acc) {
                        return Err(TauModuleError::BadMultiplication(format!(
                            "not bilinear over relations at ({a},{s}) x ({b},{t})"
                        )));
                    }
                }
            }
            for rel in c2.relations.columns() {
                for i in 0..c1.gens {
                    let mut acc = tgt.zero();
                    for (j, rj) in rel.iter().enumerate() {
                        let col = table.column(i * c2.gens + j);
                        let term =
                            GroupElement { coords: col.iter().map(|c| ring.normalize(&(c * rj))).collect() };
                        acc = tgt.add(&acc, &term);
                    }
                    if !tgt.is_zero_elt(&acc) {
                        return Err(TauModuleError::BadMultiplication(format!(
                            "not bilinear over relations at ({a},{s}) x ({b},{t})"
                        )));
                    }
                }
            }
        }
        // unitality, tau-linearity, graded commutativity, associativity on
        // generators (within the window)
        let unit_cell = m.cell(0, 0);
        let _ = unit_cell;
        for a in m.n_lo..=m.n_hi {
            for s in 0..=m.s_max {
                let c = m.cell(a, s);
                if c.is_trivial() {
                    continue;
                }
                for g in c.generators() {
                    let p = self.product(0, 0, &self.unit, a, s, &g)?;
                    if !c.elts_equal(&p, &g) {
                        return Err(TauModuleError::BadMultiplication("unit law fails".into()));
                    }
                }
            }
        }
        for (&((a, s), (b, t)), _) in &self.mult {
            let c1 = m.cell(a, s);
            let c2 = m.cell(b, t);
            let tgt = m.cell(a + b, s + t);
            for g in c1.generators() {
                for h in c2.generators() {
                    let gh = self.product(a, s, &g, b, t, &h)?;
                    // Koszul sign on the stem grading
                    if self.table(b, t, a, s).is_some() {
                        let hg = self.product(b, t, &h, a, s, &g)?;
                        let sign = if (a * b) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                        let hg_signed = tgt.scale_elt(&sign, &hg);
                        if !tgt.elts_equal(&gh, &hg_signed) {
                            return Err(TauModuleError::BadMultiplication(format!(
                                "graded commutativity fails at ({a},{s}) x ({b},{t})"
                            )));
                        }
                    }
                    // tau-linearity: tau(g . h) = (tau g) . h when the
                    // shifted table exists
                    if s >= 1 && self.table(a, s - 1, b, t).is_some() {
                        let lhs = m.tau_composite(a + b, s + t, s + t - 1).apply(&gh);
                        let tg = m.tau_hom(a, s).apply(&g);
                        let rhs = self.product(a, s - 1, &tg, b, t, &h)?;
                        if !m.cell(a + b, s + t - 1).elts_equal(&lhs, &rhs) {
                            return Err(TauModuleError::BadMultiplication(format!(
                                "tau-linearity fails at ({a},{s}) x ({b},{t})"
                            )));
                        }
                    }
                }
            }
        }
        // associativity on generator triples within the window
        for (&((a, s), (b, t)), _) in &self.mult {
            for (&((b2, t2), (c2, u2)), _) in &self.mult {
                if (b2, t2) != (b, t) {
                    continue;
                }
                if a + b + c2 > m.n_hi || s + t + u2 > m.s_max {
                    continue;
                }
                if self.table(a + b, s + t, c2, u2).is_none() || self.table(a, s, b2 + c2, t2 + u2).is_none() {
                    continue;
                }
                let ca = m.cell(a, s);
                let cb = m.cell(b, t);
                let cc = m.cell(c2, u2);
                let tgt = m.cell(a + b + c2, s + t + u2);
                for g in ca.generators() {
                    for h in cb.generators() {
                        for k in cc.generators() {
                            let left = self.product(a + b, s + t, &self.product(a, s, &g, b, t, &h)?, c2, u2, &k)?;
                            let right = self.product(a, s, &g, b + c2, t + u2, &self.product(b, t, &h, c2, u2, &k)?)?;
                            if !tgt.elts_equal(&left, &right) {
                                return Err(TauModuleError::BadMultiplication(format!(
                                    "associativity fails at ({a},{s}),({b},{t}),({c2},{u2})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A tau-polynomial monomial tau^a * g_1^{e_1} ... g_k^{e_k}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub tau_power: i64,
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn bidegree(&self, gens: &[RingGenerator]) -> (i64, i64) {
        let stem: i64 = self.exps.iter().zip(gens).map(|(&e, g)| e as i64 * g.stem).sum();
        let filt: i64 = self.exps.iter().zip(gens).map(|(&e, g)| e as i64 * g.filt).sum();
        (stem, filt - self.tau_power)
    }

    pub fn product_filt(&self, gens: &[RingGenerator]) -> i64 {
        self.exps.iter().zip(gens).map(|(&e, g)| e as i64 * g.filt).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            tau_power: self.tau_power + other.tau_power,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn display(&self, gens: &[RingGenerator]) -> String {
        let mut parts = Vec::new();
        if self.tau_power == 1 {
            parts.push("tau".to_string());
        } else if self.tau_power > 1 {
            parts.push(format!("tau^{}", self.tau_power));
        }
        for (e, g) in self.exps.iter().zip(gens) {
            match e {
                0 => {}
                1 => parts.push(g.name.clone()),
                _ => parts.push(format!("{}^{}", g.name, e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[derive(Clone, Debug)]
pub struct RingGenerator {
    pub name: String,
    pub stem: i64,
    pub filt: i64,
    pub elt: GroupElement,
}

#[derive(Clone, Debug)]
pub struct RingRelation {
    pub stem: i64,
    pub filt: i64,
    /// coefficient per monomial (parallel to the monomial list at this
    /// bidegree as produced by `monomials_at`)
    pub coeffs: Vec<(BigInt, Monomial)>,
}

impl RingRelation {
    pub fn display(&self, gens: &[RingGenerator]) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| {
                if c.is_one() {
                    m.display(gens)
                } else {
                    format!("{}*{}", c, m.display(gens))
                }
            })
            .collect();
        format!("{} = 0", terms.join(" + "))
    }
}

#[derive(Clone, Debug)]
pub struct RingPresentationReport {
    pub generators: Vec<RingGenerator>,
    pub relations: Vec<RingRelation>,
    /// per bidegree: monomial count and certification that the monomial
    /// quotient matches the module
    pub dims_certified: bool,
    pub window_note: String,
}

/// Generators-and-relations of a filtered ring as a Z[tau]-algebra,
/// certified (by bidegree-wise dimension count) up to the window bound.
pub fn present_filtered_ring(r: &FilteredRingData) -> Result<RingPresentationReport, TauModuleError> {
    let m = &r.module;
    if m.n_lo < 0 {
        return Err(TauModuleError::WindowTooSmall("negative stems unsupported in reports".into()));
    }
    // 1. find generators: indecomposables Q = M / (proper products + tau from above)
    let mut gens: Vec<RingGenerator> = Vec::new();
    let mut gen_count = 0usize;
    for n in 0..=m.n_hi {
        for s in 0..=m.s_max {
            let cell = m.cell(n, s);
            if cell.is_trivial() {
                continue;
            }
            // decomposables: the unit span (at its own bidegree), tau from
            // above, and all proper cell products
            let mut dec_cols: Vec<Vec<BigInt>> = Vec::new();
            if (n, s) == (0, 0) {
                dec_cols.push(r.unit.coords.clone());
            }
            let tau_above = m.tau_hom(n, s + 1);
            for col in tau_above.image_span().columns() {
                dec_cols.push(col);
            }
            for a in 0..=n {
                for t in 0..=s {
                    let b = n - a;
                    let u = s - t;
                    let proper = (a > 0 || t > 0) && (b > 0 || u > 0);
                    if !proper {
                        continue;
                    }
                    if let Some(table) = r.table(a, t, b, u) {
                        for c in table.columns() {
                            dec_cols.push(c);
                        }
                    }
                }
            }
            let dec = Matrix::from_columns(m.ring, cell.gens, &dec_cols);
            let q = cell.quotient_by(&dec);
            // new generators: lift one per nontrivial invariant factor of Q
            let needed = q.invariant_factors().len();
            if needed == 0 {
                continue;
            }
            // choose lifts: greedily take cell generators (and sums) whose
            // classes generate Q
            let mut chosen: Vec<GroupElement> = Vec::new();
            let mut span_cols: Vec<Vec<BigInt>> = dec_cols.clone();
            for cand in cell.generators() {
                let span = Matrix::from_columns(m.ring, cell.gens, &span_cols);
                if !cell.member_of_span(&cand, &span) {
                    span_cols.push(cand.coords.clone());
                    chosen.push(cand);
                }
            }
            // the cell generators always span the cell, hence Q
            for elt in chosen {
                gen_count += 1;
                gens.push(RingGenerator { name: format!("g{gen_count}"), stem: n, filt: s, elt });
            }
        }
    }
    // 2. relations: raw syzygy lattices per bidegree, then a fixpoint of
    // pruning against implied relations (relation * monomial in both the
    // multiplicative and the tau direction), then a final minimization
    let mut dims_certified = true;
    let mut raw: BTreeMap<(i64, i64), (Vec<Monomial>, Matrix)> = BTreeMap::new();
    for n in 0..=m.n_hi {
        for s in 0..=m.s_max {
            let cell = m.cell(n, s);
            let monos = monomials_at_bidegree(&gens, n, s, m.s_max);
            if monos.is_empty() {
                if !cell.is_trivial() {
                    dims_certified = false;
                }
                continue;
            }
            let mut eval_cols = Vec::new();
            for mono in &monos {
                eval_cols.push(evaluate_monomial(r, &gens, mono)?.coords);
            }
            let eval = Matrix::from_columns(m.ring, cell.gens, &eval_cols);
            let free = GroupPresentation::free(m.ring, monos.len());
            let hom = Hom::new(free.clone(), cell.clone(), eval)
                .expect("evaluation is a homomorphism from a free group");
            let gen_ok = hom.is_surjective();
            let k_span = hom.kernel_span();
            let quo = free.quotient_by(&k_span);
            dims_certified &= gen_ok && quo.invariant_factors() == cell.invariant_factors();
            raw.insert((n, s), (monos, k_span));
        }
    }

    let implied_at = |relations: &[RingRelation], skip: Option<usize>, n: i64, s: i64, monos: &[Monomial]| {
        let mut implied_cols: Vec<Vec<BigInt>> = Vec::new();
        for (idx, rel) in relations.iter().enumerate() {
            if Some(idx) == skip || rel.stem > n {
                continue;
            }
            for mu in monomials_at_bidegree(&gens, n - rel.stem, s - rel.filt, m.s_max) {
                let mut vec = vec![BigInt::zero(); monos.len()];
                let mut ok = true;
                for (c, mono) in &rel.coeffs {
                    let prod = mono.mul(&mu);
                    match monos.iter().position(|mm| *mm == prod) {
                        Some(i) => vec[i] = m.ring.normalize(&(&vec[i] + c)),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    implied_cols.push(vec);
                }
            }
        }
        Matrix::from_columns(m.ring, monos.len(), &implied_cols)
    };

    let mut relations: Vec<RingRelation> = Vec::new();
    for _pass in 0..8 {
        let mut added = false;
        for (&(n, s), (monos, k_span)) in &raw {
            let free = GroupPresentation::free(m.ring, monos.len());
            let implied = implied_at(&relations, None, n, s, monos);
            let sq = free.subquotient(k_span, &implied).expect("implied relations are relations");
            for j in 0..sq.pres.gens {
                let cls = sq.pres.generator(j);
                if sq.pres.is_zero_elt(&cls) {
                    continue;
                }
                let vec = sq.representative(&cls);
                let coeffs: Vec<(BigInt, Monomial)> = vec
                    .coords
                    .iter()
                    .zip(monos)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, mm)| (c.clone(), mm.clone()))
                    .collect();
                if coeffs.is_empty() {
                    continue;
                }
                relations.push(RingRelation { stem: n, filt: s, coeffs });
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    // minimization: drop any relation implied by the others (tau-multiples
    // of higher-filtration relations go first)
    let mut keep: Vec<bool> = vec![true; relations.len()];
    let mut order_idx: Vec<usize> = (0..relations.len()).collect();
    order_idx.sort_by_key(|&i| (relations[i].stem, relations[i].filt));
    for &i in order_idx.iter() {
        let rel = &relations[i];
        let Some((monos, _)) = raw.get(&(rel.stem, rel.filt)) else { continue };
        let current: Vec<RingRelation> = relations
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && keep[*j])
            .map(|(_, r)| r.clone())
            .collect();
        let implied = implied_at(&current, None, rel.stem, rel.filt, monos);
        let mut vec = vec![BigInt::zero(); monos.len()];
        for (c, mono) in &rel.coeffs {
            if let Some(idx) = monos.iter().position(|mm| mm == mono) {
                vec[idx] = c.clone();
            }
        }
        let free = GroupPresentation::free(m.ring, monos.len());
        if free.member_of_span(&GroupElement { coords: vec }, &implied) {
            keep[i] = false;
        }
    }
    let relations: Vec<RingRelation> = relations
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(r, _)| r)
        .collect();

    let window_note = format!(
        "presentation certified for stems <= {} and filtrations <= {} ({:?} above)",
        m.n_hi, m.s_max, profile_name(&m.profile_above)
    );
    Ok(RingPresentationReport { generators: gens, relations, dims_certified, window_note })
}

fn profile_name(p: &TauProfileAbove) -> &'static str {
    match p {
        TauProfileAbove::Zero => "zero",
        TauProfileAbove::ConstantIdentity => "constant",
        TauProfileAbove::Adic(_) => "adic",
    }
}


/// All monomials of bidegree exactly (n, s) whose underlying product stays
/// inside the filtration window (so they can be evaluated).
pub fn monomials_at(
    gens: &[RingGenerator],
    n: i64,
    s: i64,
    s_max: i64,
    _cell: &GroupPresentation,
) -> Vec<Monomial> {
    monomials_at_bidegree(gens, n, s, s_max)
}

pub fn monomials_at_bidegree(gens: &[RingGenerator], n: i64, s: i64, s_max: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if n < 0 {
        return out;
    }
    let mut exps = vec![0u32; gens.len()];
    enumerate(gens, 0, n, 0, &mut exps, &mut out, s, s_max);
    out
}

fn enumerate(
    gens: &[RingGenerator],
    idx: usize,
    stem_left: i64,
    filt_acc: i64,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
    s: i64,
    s_max: i64,
) {
    if idx == gens.len() {
        if stem_left != 0 {
            return;
        }
        // tau-power to land at filtration s
        let a = filt_acc - s;
        if a < 0 {
            return;
        }
        if filt_acc > s_max {
            return;
        }
        out.push(Monomial { tau_power: a, exps: exps.clone() });
        return;
    }
    let g = &gens[idx];
    let max_e = if g.stem > 0 {
        stem_left / g.stem
    } else if g.filt > 0 {
        (s_max - filt_acc) / g.filt
    } else {
        // generators in bidegree (0,0) beyond the unit are capped by the
        // exponent of the cell; desk-scale cap
        8
    };
    for e in 0..=max_e.max(0) {
        let stem_used = e * g.stem;
        let filt_used = e * g.filt;
        if stem_used > stem_left || filt_acc + filt_used > s_max {
            break;
        }
        exps[idx] = e as u32;
        enumerate(gens, idx + 1, stem_left - stem_used, filt_acc + filt_used, exps, out, s, s_max);
    }
    exps[idx] = 0;
}

/// Evaluate a monomial in the ring.
pub fn evaluate_monomial(
    r: &FilteredRingData,
    gens: &[RingGenerator],
    mono: &Monomial,
) -> Result<GroupElement, TauModuleError> {
    let m = &r.module;
    let mut acc = r.unit.clone();
    let mut stem = 0i64;
    let mut filt = 0i64;
    for (e, g) in mono.exps.iter().zip(gens) {
        for _ in 0..*e {
            acc = r.product(stem, filt, &acc, g.stem, g.filt, &g.elt)?;
            stem += g.stem;
            filt += g.filt;
        }
    }
    Ok(m.tau_composite(stem, filt, filt - mono.tau_power).apply(&acc))
}

/// The raw relation lattice among the monomials at a bidegree (columns are
/// relation vectors). Used by tests to compare against expected relations.
pub fn relation_lattice_at(
    r: &FilteredRingData,
    gens: &[RingGenerator],
    n: i64,
    s: i64,
) -> Result<(Vec<Monomial>, Matrix), TauModuleError> {
    let m = &r.module;
    let cell = m.cell(n, s);
    let monos = monomials_at_bidegree(gens, n, s, m.s_max);
    let mut eval_cols = Vec::new();
    for mono in &monos {
        eval_cols.push(evaluate_monomial(r, gens, mono)?.coords);
    }
    let eval = Matrix::from_columns(m.ring, cell.gens, &eval_cols);
    let free = GroupPresentation::free(m.ring, monos.len());
    let hom = Hom::new(free, cell, eval).expect("evaluation hom");
    Ok((monos, hom.kernel_span()))
}

/// The p-adic filtration of Z as a filtered ring.
pub fn padic_ring_fixture(p: i64, s_max: i64) -> FilteredRingData {
    let z = GroupPresentation::free(crate::ring::Ring::Int, 1);
    let module = TauModuleData::adic_module(&z, &BigInt::from(p), s_max);
    let mut mult = BTreeMap::new();
    for s in 0..=s_max {
        for t in 0..=s_max {
            if s + t <= s_max {
                mult.insert(((0, s), (0, t)), Matrix::identity(crate::ring::Ring::Int, 1));
            }
        }
    }
    let unit = GroupElement::from_i64(&[1]);
    FilteredRingData::new(module, mult, unit).expect("p-adic ring fixture")
}

/// The subadditive example: A = Z[eta,nu]/(2 eta, 8 nu, 4 nu = eta^3) with
/// |eta| = (1,1), |nu| = (3,1) and the multiplicative filtration generated
/// by those filtations. Window: stems <= 3, filtrations <= 4.
pub fn subadditive_ring_fixture() -> FilteredRingData {
    use crate::ring::Ring;
    let ring = Ring::Int;
    let s_max = 4i64;
    let mut cells: BTreeMap<(i64, i64), GroupPresentation> = BTreeMap::new();
    let mut tau: BTreeMap<(i64, i64), Hom> = BTreeMap::new();
    // stem 0: Z at s = 0, zero above
    // stem 1: Z/2 (eta) at s <= 1, zero above
    // stem 2: Z/2 (eta^2) at s <= 2, zero above
    // stem 3: Z/8 (nu) at s <= 1; Z/2 (eta^3 = 4nu) at s = 2,3; zero above
    for s in 0..=s_max {
        cells.insert((0, s), if s == 0 { GroupPresentation::free(ring, 1) } else { GroupPresentation::trivial(ring) });
        cells.insert((1, s), if s <= 1 { GroupPresentation::cyclic(ring, &[2]) } else { GroupPresentation::trivial(ring) });
        cells.insert((2, s), if s <= 2 { GroupPresentation::cyclic(ring, &[2]) } else { GroupPresentation::trivial(ring) });
        let c3 = if s <= 1 {
            GroupPresentation::cyclic(ring, &[8])
        } else if s <= 3 {
            GroupPresentation::cyclic(ring, &[2])
        } else {
            GroupPresentation::trivial(ring)
        };
        cells.insert((3, s), c3);
    }
    for n in 0..=3i64 {
        for s in 1..=s_max {
            let src = cells[&(n, s)].clone();
            let tgt = cells[&(n, s - 1)].clone();
            let mat = if src.is_trivial() || tgt.is_trivial() {
                Matrix::zero(ring, tgt.gens, src.gens)
            } else if n == 3 && s == 2 {
                // Z/2 = <4 nu> into Z/8: 1 -> 4
                Matrix::from_i64_rows(ring, &[&[4]])
            } else {
                Matrix::identity(ring, src.gens.min(tgt.gens))
            };
            let mat = if mat.rows != tgt.gens || mat.cols != src.gens {
                Matrix::zero(ring, tgt.gens, src.gens)
            } else {
                mat
            };
            tau.insert((n, s), Hom::new(src, tgt, mat).expect("subadditive tau"));
        }
    }
    let module = TauModuleData {
        ring,
        n_lo: 0,
        n_hi: 3,
        s_min: 0,
        s_max,
        cells,
        tau,
        profile_below: crate::filtration::ProfileBelow::Constant,
        profile_above: TauProfileAbove::Zero,
    };
    // multiplication tables; elements per stem: 1, eta, eta^2, nu/eta^3
    let mut mult: BTreeMap<((i64, i64), (i64, i64)), Matrix> = BTreeMap::new();
    let nontrivial: Vec<(i64, i64)> = module
        .cells
        .iter()
        .filter(|(_, c)| !c.is_trivial())
        .map(|(&k, _)| k)
        .collect();
    for &(a, s) in &nontrivial {
        for &(b, t) in &nontrivial {
            let (n2, s2) = (a + b, s + t);
            if n2 > 3 || s2 > s_max {
                continue;
            }
            let tgt = module.cell(n2, s2);
            // generator-product value in the target cell
            let val: Vec<i64> = if tgt.is_trivial() {
                vec![]
            } else {
                match (a, b) {
                    (0, _) | (_, 0) => vec![1],
                    // eta * eta = eta^2 (sign immaterial: 2 eta^2 = 0)
                    (1, 1) => vec![1],
                    // eta * eta^2 = eta^3; in stem 3 cells: 4 in Z/8, 1 in Z/2
                    (1, 2) | (2, 1) => {
                        if s2 <= 1 {
                            vec![4]
                        } else {
                            vec![1]
                        }
                    }
                    _ => vec![],
                }
            };
            if tgt.is_trivial() {
                mult.insert(((a, s), (b, t)), Matrix::zero(ring, 0, module.cell(a, s).gens * module.cell(b, t).gens));
            } else if !val.is_empty() {
                let mat = Matrix::from_i64_rows(ring, &[&[val[0]]]);
                mult.insert(((a, s), (b, t)), mat);
            }
        }
    }
    let unit = GroupElement::from_i64(&[1]);
    FilteredRingData::new(module, mult, unit).expect("subadditive ring fixture")
}

/// The trivial filtration of Z: everything in filtration exactly 0, so the
/// associated tau-algebra is the polynomial ring Z[tau].
pub fn trivial_z_ring_fixture(s_max: i64) -> FilteredRingData {
    use crate::ring::Ring;
    let ring = Ring::Int;
    let mut cells = BTreeMap::new();
    let mut tau = BTreeMap::new();
    for s in 0..=s_max {
        cells.insert(
            (0, s),
            if s == 0 { GroupPresentation::free(ring, 1) } else { GroupPresentation::trivial(ring) },
        );
        if s > 0 {
            let src = cells[&(0, s)].clone();
            let tgt = cells[&(0, s - 1)].clone();
            let m = Matrix::zero(ring, tgt.gens, src.gens);
            tau.insert((0, s), Hom::new(src, tgt, m).expect("trivial tau"));
        }
    }
    let module = TauModuleData {
        ring,
        n_lo: 0,
        n_hi: 0,
        s_min: 0,
        s_max,
        cells,
        tau,
        profile_below: crate::filtration::ProfileBelow::Constant,
        profile_above: TauProfileAbove::Zero,
    };
    let mut mult = BTreeMap::new();
    mult.insert(((0, 0), (0, 0)), Matrix::identity(ring, 1));
    let unit = GroupElement::from_i64(&[1]);
    FilteredRingData::new(module, mult, unit).expect("trivial ring fixture")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padic_presentation() {
        let r = padic_ring_fixture(2, 4);
        let rep = present_filtered_ring(&r).unwrap();
        assert!(rep.dims_certified, "dims certified");
        // one generator in bidegree (0,1)
        assert_eq!(rep.generators.len(), 1);
        assert_eq!((rep.generators[0].stem, rep.generators[0].filt), (0, 1));
        // the relation tau*g = p (up to sign of the lattice generator)
        assert_eq!(rep.relations.len(), 1, "relations: {:?}", rep.relations);
        let rel = &rep.relations[0];
        assert_eq!((rel.stem, rel.filt), (0, 0));
        // evaluate: the relation must involve the monomials 1 and tau*g
        let names: Vec<String> = rel.coeffs.iter().map(|(c, m)| format!("{c}*{}", m.display(&rep.generators))).collect();
        let joined = names.join(" + ");
        assert!(joined.contains("tau*g1") || joined.contains("tau*g1"), "{joined}");
    }

    #[test]
    fn trivial_filtration_is_free_tau_algebra() {
        let r = trivial_z_ring_fixture(3);
        let rep = present_filtered_ring(&r).unwrap();
        assert!(rep.dims_certified);
        assert!(rep.generators.is_empty(), "generators: {:?}", rep.generators);
        assert!(rep.relations.is_empty(), "relations: {:?}", rep.relations);
    }

    #[test]
    fn subadditive_presentation() {
        let r = subadditive_ring_fixture();
        let rep = present_filtered_ring(&r).unwrap();
        assert!(rep.dims_certified);
        // generators eta at (1,1) and nu at (3,1)
        let mut bidegs: Vec<(i64, i64)> = rep.generators.iter().map(|g| (g.stem, g.filt)).collect();
        bidegs.sort();
        assert_eq!(bidegs, vec![(1, 1), (3, 1)]);
        // minimal relations: 2 eta at (1,1) and 4 nu = tau^2 eta^3 at (3,1);
        // the classical 8 nu = 0 is implied (8 nu = 2 tau^2 eta^3 = 0)
        let mut rel_bidegs: Vec<(i64, i64)> = rep.relations.iter().map(|r| (r.stem, r.filt)).collect();
        rel_bidegs.sort();
        assert_eq!(rel_bidegs, vec![(1, 1), (3, 1)], "relations: {:#?}",
            rep.relations.iter().map(|r| r.display(&rep.generators)).collect::<Vec<_>>());
        // 8 nu evaluates to zero in the module
        let nu = rep.generators.iter().find(|g| g.stem == 3).unwrap();
        let eight_nu = r.module.cell(3, 1).scale_elt(&BigInt::from(8), &nu.elt);
        assert!(r.module.cell(3, 1).is_zero_elt(&eight_nu));
    }
}
