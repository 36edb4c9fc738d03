//! (Semi)cosimplicial abelian groups and complexes: normalized and
//! unnormalized cochains, right Kan extension along the injective
//! subcategory, the Tot filtration of the associated double complex, and
//! cosimplicial decalage with its page shift.

pub mod hopf;

use crate::complex::{ChainComplexData, ChainMapData};
use crate::filtration::{pad_to_window, FilteredComplexData, ProfileAbove, ProfileBelow};
use crate::matrix::Matrix;
use crate::ring::Ring;
use num_bigint::BigInt;
use num_traits::One;

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum CosimplicialError {
    #[error("cosimplicial identity fails: {0}")]
    Identity(String),
    #[error("normalized cochains require codegeneracies")]
    MissingCodegeneracies,
    #[error("levels must share the ring")]
    RingMismatch,
    #[error("chain map data invalid at level {0}")]
    BadLevel(usize),
}

/// A monotone map [a] -> [b], stored by its values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monotone(pub Vec<usize>);

impl Monotone {
    pub fn source_dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_surjective_onto(&self, b: usize) -> bool {
        let mut hit = vec![false; b + 1];
        for &v in &self.0 {
            hit[v] = true;
        }
        hit.iter().all(|&h| h)
    }

    pub fn compose(&self, then: &Monotone) -> Monotone {
        Monotone(self.0.iter().map(|&v| then.0[v]).collect())
    }

    /// Elementary coface map delta^i : [n] -> [n+1] (skips i).
    pub fn coface(n: usize, i: usize) -> Monotone {
        Monotone((0..=n).map(|v| if v < i { v } else { v + 1 }).collect())
    }

    /// Elementary codegeneracy sigma^i : [n] -> [n-1] (repeats i).
    pub fn codegeneracy(n: usize, i: usize) -> Monotone {
        Monotone((0..=n).map(|v| if v <= i { v } else { v - 1 }).collect())
    }

    /// Epi-mono factorization: self = incl after surj.
    pub fn epi_mono(&self, target: usize) -> (Monotone, Monotone, usize) {
        // image values sorted
        let mut img: Vec<usize> = self.0.clone();
        img.dedup();
        let k = img.len() - 1;
        // surjection [a] ->> [k]
        let surj = Monotone(self.0.iter().map(|&v| img.iter().position(|&w| w == v).unwrap()).collect());
        // injection [k] -> [target]
        let incl = Monotone(img);
        let _ = target;
        (surj, incl, k)
    }

    /// Decompose an injective monotone map as a composite of cofaces;
    /// returns the missing values in descending order, so that
    /// incl = coface(m_1) . coface(m_2) ... applied left to right in
    /// ascending order of application.
    pub fn missing_values(&self, target: usize) -> Vec<usize> {
        let mut missing: Vec<usize> = (0..=target).filter(|v| !self.0.contains(v)).collect();
        missing.sort();
        missing
    }

    /// Duplicated positions of a surjection: the i with f(i) = f(i+1).
    pub fn duplicated_positions(&self) -> Vec<usize> {
        (0..self.0.len() - 1).filter(|&i| self.0[i] == self.0[i + 1]).collect()
    }
}

/// Cosimplicial (or semicosimplicial, when codegeneracies are absent)
/// chain complexes, truncated at level m. An abelian-group-valued object
/// is the special case of levels concentrated in chain degree 0.
#[derive(Clone, Debug)]
pub struct CosimplicialData {
    pub ring: Ring,
    /// levels A^0 .. A^m
    pub levels: Vec<ChainComplexData>,
    /// cofaces[j][i] = d^i : A^{j} -> A^{j+1}, 0 <= i <= j+1
    pub cofaces: Vec<Vec<ChainMapData>>,
    /// codegeneracies[j][i] = s^i : A^{j+1} -> A^{j}, 0 <= i <= j;
    /// empty for semicosimplicial data
    pub codegeneracies: Vec<Vec<ChainMapData>>,
}

impl CosimplicialData {
    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_cosimplicial(&self) -> bool {
        !self.codegeneracies.is_empty() || self.truncation() == 0
    }

    pub fn validate(&self) -> Result<(), CosimplicialError> {
        let m = self.truncation();
        assert_eq!(self.cofaces.len(), m);
        for (j, dj) in self.cofaces.iter().enumerate() {
            if dj.len() != j + 2 {
                return Err(CosimplicialError::Identity(format!("coface count at {j}")));
            }
            for d in dj {
                d.validate().map_err(|_| CosimplicialError::BadLevel(j))?;
            }
        }
        // coface identities d^j d^i = d^i d^{j-1} for i < j
        for lvl in 0..m.saturating_sub(1) {
            for i in 0..=lvl + 1 {
                for j in i + 1..=lvl + 2 {
                    let lhs = self.cofaces[lvl][i].then(&self.cofaces[lvl + 1][j]);
                    let rhs = self.cofaces[lvl][j - 1].then(&self.cofaces[lvl + 1][i]);
                    if !lhs.maps_equal(&rhs) {
                        return Err(CosimplicialError::Identity(format!(
                            "d^{j} d^{i} != d^{i} d^{} at level {lvl}",
                            j - 1
                        )));
                    }
                }
            }
        }
        if self.is_cosimplicial() && m > 0 {
            assert_eq!(self.codegeneracies.len(), m);
            for (j, sj) in self.codegeneracies.iter().enumerate() {
                if sj.len() != j + 1 {
                    return Err(CosimplicialError::Identity(format!("codegeneracy count at {j}")));
                }
            }
            // s^j s^i = s^i s^{j+1} for i <= j (maps A^{l+2} -> A^l)
            for lvl in 0..m - 1 {
                for i in 0..=lvl {
                    for j in i..=lvl {
                        let lhs = self.codegeneracies[lvl + 1][i].then(&self.codegeneracies[lvl][j]);
                        let rhs = self.codegeneracies[lvl + 1][j + 1].then(&self.codegeneracies[lvl][i]);
                        if !lhs.maps_equal(&rhs) {
                            return Err(CosimplicialError::Identity(format!(
                                "s^{j} s^{i} fails at level {lvl}"
                            )));
                        }
                    }
                }
            }
            // mixed identities: s^j d^i
            for lvl in 0..m {
                for j in 0..=lvl {
                    for i in 0..=lvl + 1 {
                        let di_sj = self.cofaces[lvl][i].then(&self.codegeneracies[lvl][j]);
                        let expect: Option<ChainMapData> = if i < j {
                            // d^i s^{j-1}
                            Some(self.codegeneracies[lvl - 1][j - 1].then(&self.cofaces[lvl - 1][i]))
                        } else if i == j || i == j + 1 {
                            Some(ChainMapData::identity(&self.levels[lvl]))
                        } else {
                            // i > j+1: d^{i-1} s^j
                            if lvl >= 1 {
                                Some(self.codegeneracies[lvl - 1][j].then(&self.cofaces[lvl - 1][i - 1]))
                            } else {
                                None
                            }
                        };
                        if let Some(e) = expect {
                            if !di_sj.maps_equal(&e) {
                                return Err(CosimplicialError::Identity(format!(
                                    "s^{j} d^{i} fails at level {lvl}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// A constant cosimplicial object on one complex.
    pub fn constant(c: &ChainComplexData, m: usize) -> CosimplicialData {
        let levels = vec![c.clone(); m + 1];
        let cofaces = (0..m).map(|j| vec![ChainMapData::identity(c); j + 2]).collect();
        let codegeneracies = (0..m).map(|j| vec![ChainMapData::identity(c); j + 1]).collect();
        CosimplicialData { ring: c.ring, levels, cofaces, codegeneracies }
    }

    /// The alternating-sum cochain differential C^j -> C^{j+1}.
    fn alternating_sum(&self, j: usize) -> ChainMapData {
        let src = &self.levels[j];
        let tgt = &self.levels[j + 1];
        let lo = src.n_min.min(tgt.n_min);
        let hi = src.n_max.max(tgt.n_max);
        let maps: Vec<Matrix> = (lo..=hi)
            .map(|n| {
                let mut acc = Matrix::zero(self.ring, tgt.rank(n), src.rank(n));
                for (i, d) in self.cofaces[j].iter().enumerate() {
                    let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    acc = acc.add(&d.map_at(n).scale(&sign));
                }
                acc
            })
            .collect();
        ChainMapData::new(src.clone(), tgt.clone(), lo, maps).expect("alternating sum is a chain map")
    }

    /// Unnormalized cochain complex for abelian-group-valued data
    /// (all levels concentrated in chain degree 0): C^j sits in
    /// homological degree -j.
    pub fn unnormalized_cochains(&self) -> ChainComplexData {
        let m = self.truncation();
        for lvl in &self.levels {
            assert!(lvl.n_min == 0 && lvl.n_max == 0, "group-valued levels expected");
        }
        let ranks: Vec<usize> = (0..=m).rev().map(|j| self.levels[j].rank(0)).collect();
        let mut diffs: Vec<Matrix> = Vec::new();
        for (pos, j) in (0..=m).rev().enumerate() {
            if pos == 0 {
                diffs.push(Matrix::zero(self.ring, 0, ranks[0]));
            } else {
                // differential from degree -j to degree -(j+1): the
                // alternating sum C^j -> C^{j+1}
                diffs.push(self.alternating_sum(j).map_at(0));
            }
        }
        ChainComplexData::new(self.ring, -(m as i64), ranks, diffs).expect("cochain complex")
    }

    /// Normalized cochain lattice N^j (kernel of all codegeneracies) per
    /// level, with its inclusion into the level; group-valued data only.
    pub fn normalized_lattices(&self) -> Result<Vec<Matrix>, CosimplicialError> {
        if !self.is_cosimplicial() {
            return Err(CosimplicialError::MissingCodegeneracies);
        }
        let m = self.truncation();
        let mut out = Vec::new();
        for j in 0..=m {
            let rank = self.levels[j].rank(0);
            if j == 0 {
                out.push(Matrix::identity(self.ring, rank));
                continue;
            }
            let mut stacked: Option<Matrix> = None;
            for i in 0..j {
                let s = self.codegeneracies[j - 1][i].map_at(0);
                stacked = Some(match stacked {
                    None => s,
                    Some(prev) => prev.vstack(&s),
                });
            }
            out.push(stacked.unwrap().kernel_basis());
        }
        Ok(out)
    }

    /// Normalized cochain complex (group-valued, cosimplicial).
    pub fn normalized_cochains(&self) -> Result<(ChainComplexData, ChainMapData), CosimplicialError> {
        let lattices = self.normalized_lattices()?;
        let m = self.truncation();
        let ranks: Vec<usize> = (0..=m).rev().map(|j| lattices[j].cols).collect();
        let mut diffs: Vec<Matrix> = Vec::new();
        for (pos, j) in (0..=m).rev().enumerate() {
            if pos == 0 {
                diffs.push(Matrix::zero(self.ring, 0, ranks[0]));
            } else {
                // restrict the alternating sum to the normalized lattices
                let alt = self.alternating_sum(j).map_at(0);
                let restricted = alt.mul(&lattices[j]);
                let mut cols = Vec::new();
                for c in 0..restricted.cols {
                    cols.push(
                        lattices[j + 1]
                            .solve(&restricted.column(c))
                            .expect("alternating sum preserves the normalized lattice"),
                    );
                }
                diffs.push(Matrix::from_columns(self.ring, lattices[j + 1].cols, &cols));
            }
        }
        let n = ChainComplexData::new(self.ring, -(m as i64), ranks, diffs).expect("normalized cochains");
        let c = self.unnormalized_cochains();
        let incl = ChainMapData::from_fn(&n, &c, |deg| {
            let j = (-deg) as usize;
            if deg > 0 || j > m {
                Matrix::zero(self.ring, c.rank(deg), n.rank(deg))
            } else {
                lattices[j].clone()
            }
        })
        .expect("inclusion of normalized cochains");
        Ok((n, incl))
    }

    /// Apply a general monotone map through the stored structure maps.
    pub fn structure_map(&self, phi: &Monotone, target_level: usize) -> ChainMapData {
        let src_level = phi.source_dim();
        // factor phi = cofaces after codegeneracies
        let dups = phi.duplicated_positions();
        let mut f = ChainMapData::identity(&self.levels[src_level]);
        let mut cur = src_level;
        // apply codegeneracies for duplicated positions, highest first
        for &i in dups.iter().rev() {
            let s = &self.codegeneracies[cur - 1][i.min(cur - 1)];
            f = f.then(s);
            cur -= 1;
        }
        // now an injective map from [cur] to [target_level]
        // compute the injective part: image values of phi
        let mut img: Vec<usize> = phi.0.clone();
        img.dedup();
        let incl = Monotone(img);
        for &mv in incl.missing_values(target_level).iter() {
            let d = &self.cofaces[cur][mv.min(cur + 1)];
            f = f.then(d);
            cur += 1;
        }
        assert_eq!(cur, target_level);
        f
    }
}

/// All monotone surjections [n] ->> [k].
pub fn surjections(n: usize, k: usize) -> Vec<Monotone> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    // monotone surjection determined by the k positions where it steps
    fn rec(values: &mut Vec<usize>, pos: usize, n: usize, k: usize, out: &mut Vec<Monotone>) {
        if pos == n + 1 {
            if values[n] == k {
                out.push(Monotone(values.clone()));
            }
            return;
        }
        let prev = values[pos - 1];
        for v in [prev, prev + 1] {
            if v <= k {
                values.push(v);
                rec(values, pos + 1, n, k, out);
                values.pop();
            }
        }
    }
    let mut values = vec![0usize];
    rec(&mut values, 1, n, k, &mut out);
    out
}

/// Right Kan extension of a semicosimplicial object along the inclusion of
/// the injective subcategory: (j_* A)^n is the product over all
/// surjections [n] ->> [k] of A^k, with structure maps assembled from the
/// epi-mono factorization. The result is cosimplicial (certified).
pub fn kan_extend(a: &CosimplicialData) -> Result<CosimplicialData, CosimplicialError> {
    let m = a.truncation();
    let ring = a.ring;
    // common degree window
    let (n_min, n_max) = (a.levels[0].n_min, a.levels[0].n_max);
    // basis of (j_*A)^n: for each surjection sigma: [n] ->> [k], a copy of A^k
    let mut level_surjs: Vec<Vec<(Monotone, usize)>> = Vec::new();
    for n in 0..=m {
        let mut list = Vec::new();
        for k in 0..=n.min(m) {
            for s in surjections(n, k) {
                list.push((s, k));
            }
        }
        level_surjs.push(list);
    }
    let mut levels = Vec::new();
    for n in 0..=m {
        let mut ranks = vec![0usize; (n_max - n_min + 1) as usize];
        for (_, k) in &level_surjs[n] {
            for (i, deg) in (n_min..=n_max).enumerate() {
                ranks[i] += a.levels[*k].rank(deg);
            }
        }
        // block-diagonal differential
        let mut diffs = Vec::new();
        for (i, deg) in (n_min..=n_max).enumerate() {
            if i == 0 {
                diffs.push(Matrix::zero(ring, 0, ranks[0]));
            } else {
                let mut d: Option<Matrix> = None;
                for (_, k) in &level_surjs[n] {
                    let блок = a.levels[*k].diff(deg);
                    d = Some(match d {
                        None => блок,
                        Some(prev) => prev.block_diag(&блок),
                    });
                }
                diffs.push(d.unwrap_or_else(|| Matrix::zero(ring, 0, 0)));
            }
        }
        let lvl = ChainComplexData { ring, n_min, n_max, ranks, diffs };
        lvl.validate().expect("kan level");
        levels.push(lvl);
    }
    // structure map for phi: [n] -> [n']: component into the sigma'-factor
    // is A(iota) . proj_{sigma''} where sigma' . phi = iota . sigma''
    let offsets = |n: usize, deg: i64| -> Vec<usize> {
        let mut offs = Vec::new();
        let mut acc = 0;
        for (_, k) in &level_surjs[n] {
            offs.push(acc);
            acc += a.levels[*k].rank(deg);
        }
        offs
    };
    let build_map = |phi: &Monotone, n: usize, n2: usize| -> ChainMapData {
        let maps: Vec<Matrix> = (n_min..=n_max)
            .map(|deg| {
                let mut mat = Matrix::zero(ring, levels[n2].rank(deg), levels[n].rank(deg));
                let offs_src = offsets(n, deg);
                let offs_tgt = offsets(n2, deg);
                for (ti, (sigma_p, _kp)) in level_surjs[n2].iter().enumerate() {
                    let comp = phi.compose(sigma_p);
                    let (sigma_pp, iota, kpp) = comp.epi_mono(0);
                    // find sigma'' in the source list
                    let si = level_surjs[n]
                        .iter()
                        .position(|(s, k)| *k == kpp && s == &sigma_pp)
                        .expect("factorization surjection present");
                    // A(iota): A^{k''} -> A^{k'} via stored cofaces
                    let mut f = ChainMapData::identity(&a.levels[kpp]);
                    let mut cur = kpp;
                    let target_k = level_surjs[n2][ti].1;
                    for &mv in iota.missing_values(target_k).iter() {
                        f = f.then(&a.cofaces[cur][mv]);
                        cur += 1;
                    }
                    let fm = f.map_at(deg);
                    for r in 0..fm.rows {
                        for c in 0..fm.cols {
                            mat.set(offs_tgt[ti] + r, offs_src[si] + c, fm.at(r, c).clone());
                        }
                    }
                }
                mat
            })
            .collect();
        ChainMapData::new(levels[n].clone(), levels[n2].clone(), n_min, maps)
            .expect("kan structure map is a chain map")
    };
    let mut cofaces = Vec::new();
    let mut codegeneracies = Vec::new();
    for j in 0..m {
        let mut dj = Vec::new();
        for i in 0..=j + 1 {
            dj.push(build_map(&Monotone::coface(j, i), j, j + 1));
        }
        cofaces.push(dj);
        let mut sj = Vec::new();
        for i in 0..=j {
            sj.push(build_map(&Monotone::codegeneracy(j + 1, i), j + 1, j));
        }
        codegeneracies.push(sj);
    }
    let out = CosimplicialData { ring, levels, cofaces, codegeneracies };
    out.validate()?;
    Ok(out)
}

/// The normalized-lattice data of a cosimplicial complex, per level and
/// chain degree.
fn normalized_chain_lattices(a: &CosimplicialData) -> Vec<Vec<Matrix>> {
    let m = a.truncation();
    let (n_min, n_max) = (a.levels[0].n_min, a.levels[0].n_max);
    let mut out = Vec::new();
    for j in 0..=m {
        let mut per_degree = Vec::new();
        for deg in n_min..=n_max {
            let rank = a.levels[j].rank(deg);
            if j == 0 || !a.is_cosimplicial() {
                per_degree.push(Matrix::identity(a.ring, rank));
                continue;
            }
            let mut stacked: Option<Matrix> = None;
            for i in 0..j {
                let s = a.codegeneracies[j - 1][i].map_at(deg);
                stacked = Some(match stacked {
                    None => s,
                    Some(prev) => prev.vstack(&s),
                });
            }
            per_degree.push(stacked.map(|s| s.kernel_basis()).unwrap_or_else(|| Matrix::identity(a.ring, rank)));
        }
        out.push(per_degree);
    }
    out
}

/// The total complex of the (normalized) double complex of a cosimplicial
/// complex: degree n holds the sum over s of N^s in chain degree n+s, with
/// differential delta + (-1)^s d.
pub fn tot_complex(a: &CosimplicialData) -> ChainComplexData {
    let m = a.truncation() as i64;
    let (n_min, n_max) = (a.levels[0].n_min, a.levels[0].n_max);
    let ring = a.ring;
    let lattices = normalized_chain_lattices(a);
    let lat = |s: i64, t: i64| -> &Matrix {
        &lattices[s as usize][(t - n_min) as usize]
    };
    let in_range = |s: i64, t: i64| s >= 0 && s <= m && t >= n_min && t <= n_max;
    // total degree n: components (s, t = n + s)
    let tot_lo = n_min - m;
    let tot_hi = n_max;
    let comp_list = |n: i64| -> Vec<(i64, i64)> {
        (0..=m).map(|s| (s, n + s)).filter(|&(s, t)| in_range(s, t)).collect()
    };
    let rank_of = |n: i64| -> usize { comp_list(n).iter().map(|&(s, t)| lat(s, t).cols).sum() };
    let mut ranks = Vec::new();
    let mut diffs = Vec::new();
    for n in tot_lo..=tot_hi {
        ranks.push(rank_of(n));
        if n == tot_lo {
            diffs.push(Matrix::zero(ring, 0, rank_of(n)));
            continue;
        }
        let src = comp_list(n);
        let tgt = comp_list(n - 1);
        let mut mat = Matrix::zero(ring, rank_of(n - 1), rank_of(n));
        let offset = |list: &[(i64, i64)], key: (i64, i64)| -> Option<usize> {
            let mut acc = 0;
            for &(s, t) in list {
                if (s, t) == key {
                    return Some(acc);
                }
                acc += lat(s, t).cols;
            }
            None
        };
        for &(s, t) in &src {
            let k_src = lat(s, t);
            // vertical: (-1)^s d : (s,t) -> (s, t-1)
            if in_range(s, t - 1) {
                if let Some(off_r) = offset(&tgt, (s, t - 1)) {
                    let off_c = offset(&src, (s, t)).unwrap();
                    let d = a.levels[s as usize].diff(t);
                    let restricted = d.mul(k_src);
                    for c in 0..restricted.cols {
                        let sol = lat(s, t - 1)
                            .solve(&restricted.column(c))
                            .expect("vertical differential preserves N");
                        let sign = if s.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
                        for (r, v) in sol.iter().enumerate() {
                            mat.set(off_r + r, off_c + c, ring.normalize(&(v * &sign)));
                        }
                    }
                }
            }
            // horizontal: delta = sum (-1)^i d^i : (s,t) -> (s+1, t)
            if in_range(s + 1, t) {
                if let Some(off_r) = offset(&tgt, (s + 1, t)) {
                    let off_c = offset(&src, (s, t)).unwrap();
                    let alt = a.alternating_sum(s as usize).map_at(t);
                    let restricted = alt.mul(k_src);
                    for c in 0..restricted.cols {
                        let sol = lat(s + 1, t)
                            .solve(&restricted.column(c))
                            .expect("alternating sum preserves N");
                        for (r, v) in sol.iter().enumerate() {
                            mat.set(off_r + r, off_c + c, v.clone());
                        }
                    }
                }
            }
        }
        diffs.push(mat);
    }
    let tot = ChainComplexData { ring, n_min: tot_lo, n_max: tot_hi, ranks, diffs };
    tot.validate().expect("total complex");
    tot
}

/// The Tot filtration: the codegree filtration on the total complex, as a
/// strict filtered complex, constant from filtration 0 onwards and zero
/// above the truncation.
pub fn tot_filtration(a: &CosimplicialData) -> FilteredComplexData {
    let m = a.truncation() as i64;
    let (n_min, n_max) = (a.levels[0].n_min, a.levels[0].n_max);
    let ring = a.ring;
    let lattices = normalized_chain_lattices(a);
    let lat = |s: i64, t: i64| -> &Matrix { &lattices[s as usize][(t - n_min) as usize] };
    let in_range = |s: i64, t: i64| s >= 0 && s <= m && t >= n_min && t <= n_max;
    let tot_lo = n_min - m;
    let tot_hi = n_max;

    let build_level = |sigma: i64| -> ChainComplexData {
        let comp_list = |n: i64| -> Vec<(i64, i64)> {
            (sigma.max(0)..=m).map(|s| (s, n + s)).filter(|&(s, t)| in_range(s, t)).collect()
        };
        let rank_of = |n: i64| -> usize { comp_list(n).iter().map(|&(s, t)| lat(s, t).cols).sum() };
        let mut ranks = Vec::new();
        let mut diffs = Vec::new();
        for n in tot_lo..=tot_hi {
            ranks.push(rank_of(n));
            if n == tot_lo {
                diffs.push(Matrix::zero(ring, 0, rank_of(n)));
                continue;
            }
            let src = comp_list(n);
            let tgt = comp_list(n - 1);
            let mut mat = Matrix::zero(ring, rank_of(n - 1), rank_of(n));
            let offset = |list: &[(i64, i64)], key: (i64, i64)| -> Option<usize> {
                let mut acc = 0;
                for &(s, t) in list {
                    if (s, t) == key {
                        return Some(acc);
                    }
                    acc += lat(s, t).cols;
                }
                None
            };
            for &(s, t) in &src {
                let k_src = lat(s, t);
                if in_range(s, t - 1) {
                    if let Some(off_r) = offset(&tgt, (s, t - 1)) {
                        let off_c = offset(&src, (s, t)).unwrap();
                        let d = a.levels[s as usize].diff(t);
                        let restricted = d.mul(k_src);
                        for c in 0..restricted.cols {
                            let sol = lat(s, t - 1).solve(&restricted.column(c)).expect("vertical");
                            let sign = if s.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
                            for (r, v) in sol.iter().enumerate() {
                                mat.set(off_r + r, off_c + c, ring.normalize(&(v * &sign)));
                            }
                        }
                    }
                }
                if in_range(s + 1, t) {
                    if let Some(off_r) = offset(&tgt, (s + 1, t)) {
                        let off_c = offset(&src, (s, t)).unwrap();
                        let alt = a.alternating_sum(s as usize).map_at(t);
                        let restricted = alt.mul(k_src);
                        for c in 0..restricted.cols {
                            let sol = lat(s + 1, t).solve(&restricted.column(c)).expect("horizontal");
                            for (r, v) in sol.iter().enumerate() {
                                mat.set(off_r + r, off_c + c, v.clone());
                            }
                        }
                    }
                }
            }
            diffs.push(mat);
        }
        let lvl = ChainComplexData { ring, n_min: tot_lo, n_max: tot_hi, ranks, diffs };
        lvl.validate().expect("tot level");
        lvl
    };

    let levels: Vec<ChainComplexData> = (0..=m).map(build_level).collect();
    let mut transitions = Vec::new();
    for sigma in 1..=m {
        let src = &levels[sigma as usize];
        let tgt = &levels[(sigma - 1) as usize];
        // inclusion: components s >= sigma sit inside components s >= sigma-1
        let maps: Vec<Matrix> = (tot_lo..=tot_hi)
            .map(|n| {
                let src_list: Vec<(i64, i64)> =
                    (sigma..=m).map(|s| (s, n + s)).filter(|&(s, t)| in_range(s, t)).collect();
                let tgt_list: Vec<(i64, i64)> =
                    (sigma - 1..=m).map(|s| (s, n + s)).filter(|&(s, t)| in_range(s, t)).collect();
                let mut mat = Matrix::zero(ring, tgt.rank(n), src.rank(n));
                let mut off_c = 0;
                for &(s, t) in &src_list {
                    let mut off_r = 0;
                    for &(s2, t2) in &tgt_list {
                        if (s2, t2) == (s, t) {
                            for i in 0..lat(s, t).cols {
                                mat.set(off_r + i, off_c + i, BigInt::one());
                            }
                        }
                        off_r += lat(s2, t2).cols;
                    }
                    off_c += lat(s, t).cols;
                }
                mat
            })
            .collect();
        transitions.push(
            ChainMapData::new(src.clone(), tgt.clone(), tot_lo, maps).expect("tot transition"),
        );
    }
    FilteredComplexData::new(levels, transitions, 0, ProfileBelow::Constant, ProfileAbove::Zero)
        .expect("tot filtration")
}

/// Cosimplicial decalage: level sigma is Tot of the levelwise good
/// truncation tau_{>= sigma}.
pub fn decalage(a: &CosimplicialData) -> FilteredComplexData {
    let (n_min, n_max) = (a.levels[0].n_min, a.levels[0].n_max);
    let ring = a.ring;
    let m = a.truncation();
    // truncated cosimplicial object per sigma, with comparison maps
    let build_truncated = |sigma: i64| -> CosimplicialData {
        let pieces: Vec<(ChainComplexData, ChainMapData)> =
            a.levels.iter().map(|lvl| lvl.truncate_above(sigma)).collect();
        let levels: Vec<ChainComplexData> =
            pieces.iter().map(|(t, _)| pad_to_window(t, n_min, n_max + 1)).collect();
        // induced structure maps: solve through the kernel bases
        let induce = |f: &ChainMapData, src_i: usize, tgt_i: usize| -> ChainMapData {
            let src = &levels[src_i];
            let tgt = &levels[tgt_i];
            let maps: Vec<Matrix> = (n_min..=n_max + 1)
                .map(|deg| {
                    if deg > sigma {
                        f.map_at(deg)
                    } else if deg == sigma {
                        // kernel coordinates on both sides
                        let k_src = a.levels[src_i].diff(sigma).kernel_basis();
                        let k_tgt = a.levels[tgt_i].diff(sigma).kernel_basis();
                        let img = f.map_at(sigma).mul(&k_src);
                        let mut cols = Vec::new();
                        for c in 0..img.cols {
                            cols.push(k_tgt.solve(&img.column(c)).expect("chain map preserves cycles"));
                        }
                        Matrix::from_columns(ring, k_tgt.cols, &cols)
                    } else {
                        Matrix::zero(ring, tgt.rank(deg), src.rank(deg))
                    }
                })
                .collect();
            ChainMapData::new(src.clone(), tgt.clone(), n_min, maps).expect("truncated structure map")
        };
        let cofaces: Vec<Vec<ChainMapData>> = (0..m)
            .map(|j| (0..=j + 1).map(|i| induce(&a.cofaces[j][i], j, j + 1)).collect())
            .collect();
        let codegeneracies: Vec<Vec<ChainMapData>> = if a.is_cosimplicial() && m > 0 {
            (0..m)
                .map(|j| (0..=j).map(|i| induce(&a.codegeneracies[j][i], j + 1, j)).collect())
                .collect()
        } else {
            Vec::new()
        };
        CosimplicialData { ring, levels, cofaces, codegeneracies }
    };
    let sig_lo = n_min;
    let sig_hi = n_max + 1;
    let tots: Vec<ChainComplexData> = (sig_lo..=sig_hi)
        .map(|sigma| tot_complex(&build_truncated(sigma)))
        .collect();
    // common degree window for all Tot levels
    let lo = tots.iter().map(|t| t.n_min).min().unwrap();
    let hi = tots.iter().map(|t| t.n_max).max().unwrap();
    let padded: Vec<ChainComplexData> = tots.iter().map(|t| pad_to_window(t, lo, hi)).collect();
    // transitions: induced by tau_{>= sigma} -> tau_{>= sigma-1} levelwise;
    // on N-lattices this is componentwise, with the degree-sigma component
    // expressed through the kernel bases
    let mut transitions = Vec::new();
    for sigma in sig_lo + 1..=sig_hi {
        let upper = build_truncated(sigma);
        let lower = build_truncated(sigma - 1);
        let lat_u = normalized_chain_lattices(&upper);
        let lat_l = normalized_chain_lattices(&lower);
        let src = &padded[(sigma - sig_lo) as usize];
        let tgt = &padded[(sigma - 1 - sig_lo) as usize];
        let mu = upper.truncation() as i64;
        let (u_min, u_max) = (upper.levels[0].n_min, upper.levels[0].n_max);
        let in_range_u = |s: i64, t: i64| s >= 0 && s <= mu && t >= u_min && t <= u_max;
        let maps: Vec<Matrix> = (lo..=hi)
            .map(|n| {
                let src_list: Vec<(i64, i64)> = (0..=mu)
                    .map(|s| (s, n + s))
                    .filter(|&(s, t)| in_range_u(s, t) && lat_u[s as usize][(t - u_min) as usize].cols > 0)
                    .collect();
                let tgt_list: Vec<(i64, i64)> = (0..=mu)
                    .map(|s| (s, n + s))
                    .filter(|&(s, t)| in_range_u(s, t) && lat_l[s as usize][(t - u_min) as usize].cols > 0)
                    .collect();
                let mut mat = Matrix::zero(ring, tgt.rank(n), src.rank(n));
                let mut off_c = 0;
                for &(s, t) in &src_list {
                    let ku = &lat_u[s as usize][(t - u_min) as usize];
                    // levelwise comparison tau_{>=sigma} -> tau_{>=sigma-1}
                    let cmp_lvl: Matrix = if t > sigma {
                        Matrix::identity(ring, a.levels[s as usize].rank(t))
                    } else if t == sigma {
                        // ker(d_sigma) into full module
                        a.levels[s as usize].diff(sigma).kernel_basis()
                    } else {
                        Matrix::zero(ring, lower.levels[s as usize].rank(t), 0)
                    };
                    let mut off_r = 0;
                    for &(s2, t2) in &tgt_list {
                        let kl = &lat_l[s2 as usize][(t2 - u_min) as usize];
                        if (s2, t2) == (s, t) && ku.cols > 0 && kl.cols > 0 {
                            // express cmp(ku) in kl coordinates
                            let img = cmp_lvl.mul(ku);
                            for c in 0..img.cols {
                                let sol = kl.solve(&img.column(c)).expect("N preserved by truncation map");
                                for (r, v) in sol.iter().enumerate() {
                                    mat.set(off_r + r, off_c + c, v.clone());
                                }
                            }
                        }
                        off_r += kl.cols;
                    }
                    off_c += ku.cols;
                }
                mat
            })
            .collect();
        transitions.push(ChainMapData::new(src.clone(), tgt.clone(), lo, maps).expect("decalage transition"));
    }
    FilteredComplexData::new(padded, transitions, sig_lo, ProfileBelow::Constant, ProfileAbove::Zero)
        .expect("decalage filtration")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sseq::{PageIndex, SpectralSequence};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// A random truncated cosimplicial abelian group obtained by applying
    /// a functor... simplest robust recipe: Kan-extend a random
    /// semicosimplicial object (which is always cosimplicial), or take
    /// levelwise products of the constant one. Here: Kan extension.
    fn random_semicosimplicial(seed: u64, m: usize) -> CosimplicialData {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = if seed % 2 == 0 { Ring::Int } else { Ring::Fp(3) };
        let levels: Vec<ChainComplexData> = (0..=m)
            .map(|_| ChainComplexData::concentrated(ring, 0, rng.gen_range(0..=2)))
            .collect();
        // cofaces: arbitrary matrices satisfying the coface identities are
        // hard to sample directly; use "constant + border" style: maps
        // built from a fixed matrix family that satisfies the identities.
        // A clean family: A^j = B^{tensor...}; simplest: A^j free on one
        // generator with all cofaces equal. Use rank-1 levels with random
        // equal cofaces when ranks match, else zero.
        let mut cofaces = Vec::new();
        for j in 0..m {
            let mut dj = Vec::new();
            for _i in 0..=j + 1 {
                let f = ChainMapData::from_fn(&levels[j], &levels[j + 1], |deg| {
                    if deg == 0 {
                        Matrix::from_fn(ring, levels[j + 1].rank(0), levels[j].rank(0), |_r, _c| {
                            BigInt::from(1)
                        })
                    } else {
                        Matrix::zero(ring, levels[j + 1].rank(deg), levels[j].rank(deg))
                    }
                })
                .unwrap();
                dj.push(f);
            }
            cofaces.push(dj);
        }
        let a = CosimplicialData { ring, levels, cofaces, codegeneracies: vec![] };
        a.validate().expect("semicosimplicial fixture");
        a
    }

    #[test]
    fn constant_cosimplicial_cochains() {
        let z = ChainComplexData::concentrated(Ring::Int, 0, 1);
        let m = 3i64;
        let a = CosimplicialData::constant(&z, m as usize);
        a.validate().unwrap();
        let (n, incl) = a.normalized_cochains().unwrap();
        // N = Z in degree 0 only
        assert_eq!(n.rank(0), 1);
        for d in 1..=m {
            assert_eq!(n.rank(-d), 0, "degree -{d}");
        }
        let c = a.unnormalized_cochains();
        // C has homology Z in degree 0 below the truncation cap; the cap
        // level itself carries the uncancelled degenerate part
        assert_eq!(c.homology(0).pres.describe(), "Z");
        for d in 1..m {
            assert!(c.homology(-d).pres.is_trivial(), "degree -{d}");
        }
        incl.validate().unwrap();
        // N -> C is a quasi-iso in degrees above the truncation cap
        assert!(incl.is_quasi_iso_in_range(-(m - 1), 0));
    }

    #[test]
    fn surjection_counts() {
        // # monotone surjections [n] ->> [k] = C(n, k)
        assert_eq!(surjections(3, 1).len(), 3);
        assert_eq!(surjections(4, 2).len(), 6);
        assert_eq!(surjections(2, 2).len(), 1);
        assert_eq!(surjections(2, 3).len(), 0);
    }

    #[test]
    fn kan_extension_of_point() {
        // A with A^0 = Z only: j_*A is the constant cosimplicial Z
        let ring = Ring::Int;
        let m = 3;
        let levels: Vec<ChainComplexData> = (0..=m)
            .map(|j| ChainComplexData::concentrated(ring, 0, if j == 0 { 1 } else { 0 }))
            .collect();
        let cofaces = (0..m)
            .map(|j| {
                (0..=j + 1)
                    .map(|_| ChainMapData::zero_map(&levels[j], &levels[j + 1]))
                    .collect()
            })
            .collect();
        let a = CosimplicialData { ring, levels, cofaces, codegeneracies: vec![] };
        let ka = kan_extend(&a).unwrap();
        for n in 0..=m {
            assert_eq!(ka.levels[n].rank(0), 1, "level {n}");
        }
    }

    #[test]
    fn kan_extension_rank_formula() {
        // A^0 = Z, A^1 = Z: level n of j_*A has rank 1 + n
        let ring = Ring::Int;
        let m = 3;
        let levels: Vec<ChainComplexData> = (0..=m)
            .map(|j| ChainComplexData::concentrated(ring, 0, usize::from(j <= 1)))
            .collect();
        let mut cofaces: Vec<Vec<ChainMapData>> = Vec::new();
        for j in 0..m {
            cofaces.push(
                (0..=j + 1)
                    .map(|_| {
                        ChainMapData::from_fn(&levels[j], &levels[j + 1], |deg| {
                            Matrix::zero(ring, levels[j + 1].rank(deg), levels[j].rank(deg))
                        })
                        .unwrap()
                    })
                    .collect(),
            );
        }
        let a = CosimplicialData { ring, levels, cofaces, codegeneracies: vec![] };
        let ka = kan_extend(&a).unwrap();
        for n in 0..=m {
            assert_eq!(ka.levels[n].rank(0), 1 + n, "level {n}");
        }
    }

    #[test]
    fn n_into_c_quasi_iso_on_kan_extensions() {
        for seed in 0..10 {
            let a = random_semicosimplicial(seed, 3);
            let ka = kan_extend(&a).unwrap();
            let (_n, incl) = ka.normalized_cochains().unwrap();
            // valid range: degrees above the truncation cap
            assert!(incl.is_quasi_iso_in_range(-2, 0), "seed {seed}");
        }
    }

    #[test]
    fn tot_filtration_of_groups_has_cochain_e2() {
        // levels concentrated in chain degree 0: the Tot SS is the cochain
        // complex SS: E_1^{n,s} = N^s at n = -s with d_1 the cochain
        // differential
        let a = kan_extend(&random_semicosimplicial(2, 3)).unwrap();
        let filt = tot_filtration(&a);
        let ss = SpectralSequence::new(&filt);
        let (ncx, _) = a.normalized_cochains().unwrap();
        let p1 = ss.page(PageIndex::R(1));
        for s in 0..=3i64 {
            let cell = p1.cells.get(&(-s, s));
            let expect = ncx.rank(-s);
            let got = cell.map(|c| c.sq.pres.rank()).unwrap_or(0);
            assert_eq!(got, expect, "cell (-{s},{s})");
            // d_1 corresponds to the cochain differential: compare the
            // homology of the rows
        }
        // E_2 = cohomology of N
        let p2 = ss.page(PageIndex::R(2));
        for s in 0..=3i64 {
            let cell = p2.cells.get(&(-s, s));
            let expect = ncx.homology(-s).pres.invariant_factors();
            let got = cell
                .map(|c| c.sq.pres.invariant_factors())
                .unwrap_or_default();
            assert_eq!(got, expect, "E_2 at (-{s},{s})");
        }
    }

    #[test]
    fn tot_of_complexes_matches_direct_total_homology() {
        // levelwise Whitehead-style: constant cosimplicial complex; the
        // Tot filtration colimit is the total complex and the abutment is
        // its homology
        let c = crate::filtration::moore_complex(Ring::Int, 4);
        let a = CosimplicialData::constant(&c, 2);
        let filt = tot_filtration(&a);
        let tot = tot_complex(&a);
        let colim = filt.colimit_complex();
        for n in -2..=2 {
            assert_eq!(
                colim.homology(n).pres.invariant_factors(),
                tot.homology(n).pres.invariant_factors()
            );
            // constant cosimplicial object: Tot ~ the complex itself
            assert_eq!(
                tot.homology(n).pres.invariant_factors(),
                c.homology(n).pres.invariant_factors(),
                "degree {n}"
            );
        }
        assert!(filt.is_complete());
    }

    #[test]
    fn decalage_page_shift_on_constant() {
        let c = crate::filtration::moore_complex(Ring::Int, 4);
        let a = CosimplicialData::constant(&c, 2);
        let dec = decalage(&a);
        let tot = tot_filtration(&a);
        let ss_dec = SpectralSequence::new(&dec);
        let ss_tot = SpectralSequence::new(&tot);
        for r in 1..=3 {
            let p_dec = ss_dec.page(PageIndex::R(r));
            let p_tot = ss_tot.page(PageIndex::R(r + 1));
            for (&(n, s), cell) in &p_dec.cells {
                let tgt = p_tot.cells.get(&(n, s - n));
                let got = cell.sq.pres.invariant_factors();
                let expect = tgt.map(|c| c.sq.pres.invariant_factors()).unwrap_or_default();
                assert_eq!(got, expect, "r={r} ({n},{s})");
            }
            for (&(n, s), cell) in &p_tot.cells {
                if cell.sq.pres.is_trivial() {
                    continue;
                }
                let back = p_dec.cells.get(&(n, s + n));
                assert!(back.is_some(), "r={r} tot cell ({n},{s}) missing in dec");
            }
        }
    }

    #[test]
    fn decalage_complete_and_colimit_correct() {
        let a = kan_extend(&random_semicosimplicial(4, 2)).unwrap();
        let dec = decalage(&a);
        assert!(dec.is_complete());
        let tot = tot_complex(&a);
        let colim = dec.colimit_complex();
        for n in tot.n_min..=tot.n_max {
            assert_eq!(
                colim.homology(n).pres.invariant_factors(),
                tot.homology(n).pres.invariant_factors(),
                "degree {n}"
            );
        }
    }
}
