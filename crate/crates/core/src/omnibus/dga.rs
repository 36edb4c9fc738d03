//! Strict multiplicative filtrations of DG-rings with free underlying
//! modules, at chain level: the representative-level multiplication is
//! then exact and canonical, which is what the filtered Leibniz rule and
//! the hidden-extension derivations need.
//!
//! The filtration is encoded by a weight on the chosen basis: F^s is the
//! span of the basis elements of weight >= s. The differential must not
//! decrease weight and the product must be weight-superadditive, so every
//! F^s is a subcomplex and F^s . F^t lands in F^{s+t}.

use crate::complex::{ChainComplexData, Homology};
use crate::filtration::{FilteredComplexData, ProfileAbove, ProfileBelow};
use crate::matrix::Matrix;
use crate::ring::Ring;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum DgaError {
    #[error("not a chain-level derivation: Leibniz fails at degrees ({0},{1})")]
    NotDerivation(i64, i64),
    #[error("filtration is not multiplicative at degrees ({0},{1})")]
    NotMultiplicative(i64, i64),
    #[error("differential decreases the weight at degree {0}")]
    WeightDecreasing(i64),
    #[error("product not associative at degrees ({0},{1},{2})")]
    NotAssociative(i64, i64, i64),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
}

/// A DG-ring on a weighted free basis.
#[derive(Clone, Debug)]
pub struct FilteredDga {
    pub complex: ChainComplexData,
    /// weights[i][j] = weight of the j-th basis element in degree n_min+i
    pub weights: Vec<Vec<i64>>,
    /// multiplication tables per degree pair (a,b): target-rank x (rank_a * rank_b)
    pub mult: BTreeMap<(i64, i64), Matrix>,
    /// unit vector in degree 0
    pub unit: Vec<BigInt>,
}

impl FilteredDga {
    pub fn new(
        complex: ChainComplexData,
        weights: Vec<Vec<i64>>,
        mult: BTreeMap<(i64, i64), Matrix>,
        unit: Vec<BigInt>,
    ) -> Result<Self, DgaError> {
        let dga = FilteredDga { complex, weights, mult, unit };
        dga.validate()?;
        Ok(dga)
    }

    pub fn ring(&self) -> Ring {
        self.complex.ring
    }

    fn weight_of_index(&self, n: i64, j: usize) -> i64 {
        self.weights[(n - self.complex.n_min) as usize][j]
    }

    /// The least weight of a basis element supporting the vector
    /// (infinity for zero).
    pub fn weight_of(&self, n: i64, v: &[BigInt]) -> Option<i64> {
        let mut w: Option<i64> = None;
        for (j, x) in v.iter().enumerate() {
            if !self.ring().is_zero(x) {
                let wj = self.weight_of_index(n, j);
                w = Some(w.map_or(wj, |cur: i64| cur.min(wj)));
            }
        }
        w
    }

    pub fn product_vec(&self, a: i64, x: &[BigInt], b: i64, y: &[BigInt]) -> Vec<BigInt> {
        let tgt_rank = self.complex.rank(a + b);
        let mut out = vec![BigInt::zero(); tgt_rank];
        let Some(table) = self.mult.get(&(a, b)) else { return out };
        let rb = self.complex.rank(b);
        for (i, xi) in x.iter().enumerate() {
            if self.ring().is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if self.ring().is_zero(yj) {
                    continue;
                }
                for r in 0..tgt_rank {
                    let v = &out[r] + table.at(r, i * rb + j) * xi * yj;
                    out[r] = self.ring().normalize(&v);
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<(), DgaError> {
        let c = &self.complex;
        assert_eq!(self.weights.len(), c.ranks.len());
        for (i, w) in self.weights.iter().enumerate() {
            assert_eq!(w.len(), c.ranks[i], "weight count in degree {}", c.n_min + i as i64);
        }
        // differential does not decrease weight
        for n in c.n_min + 1..=c.n_max {
            let d = c.diff(n);
            for j in 0..c.rank(n) {
                let w = self.weight_of_index(n, j);
                let col = d.column(j);
                if let Some(wd) = self.weight_of(n - 1, &col) {
                    if wd < w {
                        return Err(DgaError::WeightDecreasing(n));
                    }
                }
            }
        }
        // weight superadditivity of products and the chain Leibniz rule
        for (&(a, b), table) in &self.mult {
            let rb = c.rank(b);
            for i in 0..c.rank(a) {
                for j in 0..rb {
                    let col = table.column(i * rb + j);
                    if let Some(wp) = self.weight_of(a + b, &col) {
                        if wp < self.weight_of_index(a, i) + self.weight_of_index(b, j) {
                            return Err(DgaError::NotMultiplicative(a, b));
                        }
                    }
                }
            }
            // d(xy) = dx . y + (-1)^a x . dy on basis pairs
            for i in 0..c.rank(a) {
                for j in 0..rb {
                    let mut x = vec![BigInt::zero(); c.rank(a)];
                    x[i] = BigInt::one();
                    let mut y = vec![BigInt::zero(); rb];
                    y[j] = BigInt::one();
                    let xy = self.product_vec(a, &x, b, &y);
                    let d_xy = c.diff(a + b).mul_vec(&xy);
                    let dx = c.diff(a).mul_vec(&x);
                    let dy = c.diff(b).mul_vec(&y);
                    let t1 = self.product_vec(a - 1, &dx, b, &y);
                    let sign = if a.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
                    let t2 = self.product_vec(a, &x, b - 1, &dy);
                    let rhs: Vec<BigInt> = t1
                        .iter()
                        .zip(&t2)
                        .map(|(u, v)| self.ring().normalize(&(u + &sign * v)))
                        .collect();
                    if d_xy != rhs {
                        return Err(DgaError::NotDerivation(a, b));
                    }
                }
            }
        }
        // associativity on basis triples where tables exist
        for (&(a, b), _) in &self.mult {
            for (&(b2, cdeg), _) in &self.mult {
                if b2 != b || self.mult.get(&(a + b, cdeg)).is_none() || self.mult.get(&(a, b + cdeg)).is_none() {
                    continue;
                }
                for i in 0..c.rank(a) {
                    for j in 0..c.rank(b) {
                        for k in 0..c.rank(cdeg) {
                            let e = |len: usize, idx: usize| {
                                let mut v = vec![BigInt::zero(); len];
                                v[idx] = BigInt::one();
                                v
                            };
                            let x = e(c.rank(a), i);
                            let y = e(c.rank(b), j);
                            let z = e(c.rank(cdeg), k);
                            let left = self.product_vec(a + b, &self.product_vec(a, &x, b, &y), cdeg, &z);
                            let right = self.product_vec(a, &x, b + cdeg, &self.product_vec(b, &y, cdeg, &z));
                            if left != right {
                                return Err(DgaError::NotAssociative(a, b, cdeg));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Index sets of basis elements of weight >= s, per degree.
    fn level_indices(&self, s: i64) -> Vec<Vec<usize>> {
        self.weights
            .iter()
            .map(|ws| (0..ws.len()).filter(|&j| ws[j] >= s).collect())
            .collect()
    }

    /// The quotient complex F^s / F^{s+n} on the monomial basis with
    /// weights in [s, s+n).
    pub fn quotient_complex(&self, s: i64, n: i64) -> (ChainComplexData, Vec<Vec<usize>>) {
        let c = &self.complex;
        let idx: Vec<Vec<usize>> = self
            .weights
            .iter()
            .map(|ws| (0..ws.len()).filter(|&j| ws[j] >= s && ws[j] < s + n).collect())
            .collect();
        let ranks: Vec<usize> = idx.iter().map(|v| v.len()).collect();
        let mut diffs = Vec::new();
        for (i, deg) in c.degrees().enumerate() {
            if i == 0 {
                diffs.push(Matrix::zero(c.ring, 0, ranks[0]));
                continue;
            }
            let d = c.diff(deg);
            let m = Matrix::from_fn(c.ring, ranks[i - 1], ranks[i], |r, cc| {
                d.at(idx[i - 1][r], idx[i][cc]).clone()
            });
            diffs.push(m);
        }
        let q = ChainComplexData { ring: c.ring, n_min: c.n_min, n_max: c.n_max, ranks, diffs };
        q.validate().expect("weight quotient is a complex");
        (q, idx)
    }

    /// Project a full chain vector to quotient coordinates (weights in
    /// [s, s+n)), and include quotient coordinates back as a chain vector.
    /// Out-of-window degrees are zero on both sides.
    pub fn project(&self, n_deg: i64, idx: &[Vec<usize>], v: &[BigInt]) -> Vec<BigInt> {
        if n_deg < self.complex.n_min || n_deg > self.complex.n_max {
            return vec![];
        }
        let i = (n_deg - self.complex.n_min) as usize;
        idx[i].iter().map(|&j| v[j].clone()).collect()
    }

    pub fn include(&self, n_deg: i64, idx: &[Vec<usize>], v: &[BigInt]) -> Vec<BigInt> {
        if n_deg < self.complex.n_min || n_deg > self.complex.n_max {
            return vec![];
        }
        let i = (n_deg - self.complex.n_min) as usize;
        let mut out = vec![BigInt::zero(); self.complex.rank(n_deg)];
        for (pos, &j) in idx[i].iter().enumerate() {
            out[j] = v[pos].clone();
        }
        out
    }

    /// pi_{m,s}(R/tau^n) = H_m(F^s/F^{s+n}).
    pub fn homotopy_mod_tau(&self, m: i64, s: i64, n: i64) -> (Homology, ChainComplexData, Vec<Vec<usize>>) {
        let (q, idx) = self.quotient_complex(s, n);
        (q.homology(m), q, idx)
    }

    /// The total differential del_n^N at (m, s): the connecting map of
    /// F^{s+n}/F^{s+N} -> F^s/F^{s+N} -> F^s/F^{s+n}, computed by the snake:
    /// lift a cycle to F^s, apply d, read off in F^{s+n}/F^{s+N}.
    /// N = i64::MAX stands for infinity (target F^{s+n} itself).
    pub fn total_differential_rep(
        &self,
        n: i64,
        cap: i64,
        m: i64,
        s: i64,
        idx_src: &[Vec<usize>],
        cycle: &[BigInt],
    ) -> Vec<BigInt> {
        // include into F^s-coordinates (full complex vector), differentiate
        let full = self.include(m, idx_src, cycle);
        let d_full = self.complex.diff(m).mul_vec(&full);
        // the result has weight >= s+n; read in the target window
        let tgt_idx: Vec<Vec<usize>> = self
            .weights
            .iter()
            .map(|ws| {
                (0..ws.len())
                    .filter(|&j| ws[j] >= s + n && (cap == i64::MAX || ws[j] < s + cap))
                    .collect()
            })
            .collect();
        // sanity: nothing of weight < s+n may survive
        let low: Vec<usize> = (0..self.complex.rank(m - 1))
            .filter(|&j| self.weight_of_index(m - 1, j) < s + n && !self.ring().is_zero(&d_full[j]))
            .collect();
        assert!(low.is_empty(), "boundary dropped below the filtration window");
        self.project(m - 1, &tgt_idx, &d_full)
    }

    /// The strict filtered complex of this DGA on [0, s_max].
    pub fn filtration(&self, s_max: i64) -> FilteredComplexData {
        let c = &self.complex;
        let mut levels = Vec::new();
        let mut all_idx = Vec::new();
        for s in 0..=s_max {
            let idx = self.level_indices(s);
            let ranks: Vec<usize> = idx.iter().map(|v| v.len()).collect();
            let mut diffs = Vec::new();
            for (i, deg) in c.degrees().enumerate() {
                if i == 0 {
                    diffs.push(Matrix::zero(c.ring, 0, ranks[0]));
                } else {
                    let d = c.diff(deg);
                    diffs.push(Matrix::from_fn(c.ring, ranks[i - 1], ranks[i], |r, cc| {
                        d.at(idx[i - 1][r], idx[i][cc]).clone()
                    }));
                }
            }
            let lvl = ChainComplexData { ring: c.ring, n_min: c.n_min, n_max: c.n_max, ranks, diffs };
            lvl.validate().expect("level");
            levels.push(lvl);
            all_idx.push(idx);
        }
        let mut transitions = Vec::new();
        for s in 1..=s_max as usize {
            let maps: Vec<Matrix> = (0..c.ranks.len())
                .map(|i| {
                    Matrix::from_fn(c.ring, all_idx[s - 1][i].len(), all_idx[s][i].len(), |r, cc| {
                        if all_idx[s - 1][i][r] == all_idx[s][i][cc] {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                })
                .collect();
            transitions.push(
                crate::complex::ChainMapData::new(levels[s].clone(), levels[s - 1].clone(), c.n_min, maps)
                    .expect("inclusion"),
            );
        }
        FilteredComplexData::new(levels, transitions, 0, ProfileBelow::Constant, ProfileAbove::Zero)
            .expect("dga filtration")
    }
}

/// Verdict of a Leibniz check.
#[derive(Clone, Debug, Default)]
pub struct LeibnizReport {
    pub pairs_checked: usize,
    pub derivation_holds: bool,
    pub linearity_holds: bool,
    pub notes: Vec<String>,
}

/// Verify that del_n^{2n} is a derivation on pi_{*,*}(R/tau^n): for all
/// pairs of homology generators x, y in the window,
/// del(xy) = del(x) y + (-1)^{|x|} x del(y), and that del is linear over
/// the homotopy of R itself.
pub fn leibniz_check(dga: &FilteredDga, n: i64, stem_hi: i64, filt_hi: i64) -> LeibnizReport {
    let mut rep = LeibnizReport { pairs_checked: 0, derivation_holds: true, linearity_holds: true, notes: vec![] };
    let c = &dga.complex;
    let cells: Vec<(i64, i64)> = (c.n_min..=stem_hi)
        .flat_map(|m| (0..=filt_hi).map(move |s| (m, s)))
        .collect();
    for &(m1, s1) in &cells {
        let (h1, q1, idx1) = dga.homotopy_mod_tau(m1, s1, n);
        if h1.pres.gens == 0 {
            continue;
        }
        for &(m2, s2) in &cells {
            let (h2, q2, idx2) = dga.homotopy_mod_tau(m2, s2, n);
            if h2.pres.gens == 0 {
                continue;
            }
            let (m3, s3) = (m1 + m2, s1 + s2);
            if m3 > c.n_max || m3 < c.n_min {
                continue;
            }
            let (h3, _q3, idx3) = dga.homotopy_mod_tau(m3 - 1, s3 + n, n);
            let (_h_prod, _qp, idxp) = dga.homotopy_mod_tau(m3, s3, n);
            let _ = (&q1, &q2);
            for a in 0..h1.pres.gens {
                for b in 0..h2.pres.gens {
                    rep.pairs_checked += 1;
                    let x = h1.representative(&h1.pres.generator(a));
                    let y = h2.representative(&h2.pres.generator(b));
                    // product of representatives at full-chain level
                    let xf = dga.include(m1, &idx1, &x);
                    let yf = dga.include(m2, &idx2, &y);
                    let xyf = dga.product_vec(m1, &xf, m2, &yf);
                    let xy = dga.project(m3, &idxp, &xyf);
                    // del(xy)
                    let del_xy = dga.total_differential_rep(n, 2 * n, m3, s3, &idxp, &xy);
                    // del(x) y and x del(y)
                    let del_x = dga.total_differential_rep(n, 2 * n, m1, s1, &idx1, &x);
                    let del_y = dga.total_differential_rep(n, 2 * n, m2, s2, &idx2, &y);
                    // build the target window index [s3+n, s3+2n)
                    let tgt_idx: Vec<Vec<usize>> = dga
                        .weights
                        .iter()
                        .map(|ws| {
                            (0..ws.len()).filter(|&j| ws[j] >= s3 + n && ws[j] < s3 + 2 * n).collect()
                        })
                        .collect();
                    let delx_idx: Vec<Vec<usize>> = dga
                        .weights
                        .iter()
                        .map(|ws| {
                            (0..ws.len()).filter(|&j| ws[j] >= s1 + n && ws[j] < s1 + 2 * n).collect()
                        })
                        .collect();
                    let dely_idx: Vec<Vec<usize>> = dga
                        .weights
                        .iter()
                        .map(|ws| {
                            (0..ws.len()).filter(|&j| ws[j] >= s2 + n && ws[j] < s2 + 2 * n).collect()
                        })
                        .collect();
                    let delx_f = dga.include(m1 - 1, &delx_idx, &del_x);
                    let dely_f = dga.include(m2 - 1, &dely_idx, &del_y);
                    let t1 = dga.product_vec(m1 - 1, &delx_f, m2, &yf);
                    let t2 = dga.product_vec(m1, &xf, m2 - 1, &dely_f);
                    let sign = if m1.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
                    let rhs_f: Vec<BigInt> = t1
                        .iter()
                        .zip(&t2)
                        .map(|(u, v)| dga.ring().normalize(&(u + &sign * v)))
                        .collect();
                    let rhs = dga.project(m3 - 1, &tgt_idx, &rhs_f);
                    let lhs_f = dga.include(m3 - 1, &tgt_idx, &del_xy);
                    let rhs_full = dga.include(m3 - 1, &tgt_idx, &rhs);
                    // compare as homology classes in H_{m3-1}(F^{s3+n}/F^{s3+2n})
                    let diff: Vec<BigInt> = lhs_f
                        .iter()
                        .zip(&rhs_full)
                        .map(|(u, v)| dga.ring().normalize(&(u - v)))
                        .collect();
                    let dd = dga.project(m3 - 1, &idx3_of(dga, s3 + n, n), &diff);
                    let _ = &idx3;
                    let cls = h3.class_of(&dd);
                    if !h3.pres.is_zero_elt(&cls) {
                        rep.derivation_holds = false;
                        rep.notes.push(format!("derivation fails for ({m1},{s1}) x ({m2},{s2})"));
                    }
                }
            }
        }
    }

    // linearity over pi_{*,*}R: del(theta . x) = +- theta . del(x) for
    // homology classes theta of the honest levels F^t
    let filt = dga.filtration(filt_hi + 2 * n);
    for &(m1, s1) in &cells {
        let lvl = filt.level(s1);
        let h_theta = lvl.homology(m1);
        if h_theta.pres.gens == 0 {
            continue;
        }
        for &(m2, s2) in &cells {
            let (h2, _q2, idx2) = dga.homotopy_mod_tau(m2, s2, n);
            if h2.pres.gens == 0 {
                continue;
            }
            let (m3, s3) = (m1 + m2, s1 + s2);
            if m3 > c.n_max || m3 < c.n_min {
                continue;
            }
            for a in 0..h_theta.pres.gens {
                for b in 0..h2.pres.gens {
                    // theta as a full-chain cycle of weight >= s1
                    let th_lvl = h_theta.representative(&h_theta.pres.generator(a));
                    let idx_lvl = dga.level_indices(s1);
                    let th = dga.include(m1, &idx_lvl, &th_lvl);
                    let y = h2.representative(&h2.pres.generator(b));
                    let yf = dga.include(m2, &idx2, &y);
                    let ty_f = dga.product_vec(m1, &th, m2, &yf);
                    let idxp: Vec<Vec<usize>> = dga
                        .weights
                        .iter()
                        .map(|ws| (0..ws.len()).filter(|&j| ws[j] >= s3 && ws[j] < s3 + n).collect())
                        .collect();
                    let ty = dga.project(m3, &idxp, &ty_f);
                    let del_ty = dga.total_differential_rep(n, 2 * n, m3, s3, &idxp, &ty);
                    let del_y = dga.total_differential_rep(n, 2 * n, m2, s2, &idx2, &y);
                    let dely_idx: Vec<Vec<usize>> = dga
                        .weights
                        .iter()
                        .map(|ws| {
                            (0..ws.len()).filter(|&j| ws[j] >= s2 + n && ws[j] < s2 + 2 * n).collect()
                        })
                        .collect();
                    let dely_f = dga.include(m2 - 1, &dely_idx, &del_y);
                    let t_dely = dga.product_vec(m1, &th, m2 - 1, &dely_f);
                    let sign = if m1.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
                    let tgt_idx: Vec<Vec<usize>> = dga
                        .weights
                        .iter()
                        .map(|ws| {
                            (0..ws.len()).filter(|&j| ws[j] >= s3 + n && ws[j] < s3 + 2 * n).collect()
                        })
                        .collect();
                    let lhs_f = dga.include(m3 - 1, &tgt_idx, &del_ty);
                    let rhs_f: Vec<BigInt> = t_dely.iter().map(|v| dga.ring().normalize(&(&sign * v))).collect();
                    let diff: Vec<BigInt> = lhs_f
                        .iter()
                        .zip(&rhs_f)
                        .map(|(u, v)| dga.ring().normalize(&(u - v)))
                        .collect();
                    let (h3, _q, idx3) = dga.homotopy_mod_tau(m3 - 1, s3 + n, n);
                    let dd = dga.project(m3 - 1, &idx3, &diff);
                    let cls = h3.class_of(&dd);
                    if !h3.pres.is_zero_elt(&cls) {
                        rep.linearity_holds = false;
                        rep.notes.push(format!("linearity fails for theta ({m1},{s1}) x ({m2},{s2})"));
                    }
                }
            }
        }
    }
    rep
}

fn idx3_of(dga: &FilteredDga, s: i64, n: i64) -> Vec<Vec<usize>> {
    dga.weights
        .iter()
        .map(|ws| (0..ws.len()).filter(|&j| ws[j] >= s && ws[j] < s + n).collect())
        .collect()
}

/// A derived (possibly hidden) extension.
#[derive(Clone, Debug)]
pub struct DerivedExtension {
    /// the relation theta . del(x) = del(y) verified in pi_{*,*}R
    pub relation_verified: bool,
    /// tau-divisibility bookkeeping: del(x) = tau^r alpha', del(y) = tau^s beta'
    pub r_divisibility: i64,
    pub s_divisibility: i64,
    /// theta . alpha' = tau^{s-r} beta' up to tau^r-divisible elements
    pub jump_relation_verified: bool,
}

/// From a non-hidden product relation t . x = y on the first page and the
/// total differentials of x and y, derive and verify the extension
/// theta . del(x) = del(y) together with its filtration jump.
///
/// x lives at (m1, s1), y at (m1 + mt, s1 + st), t at (mt, st), all on the
/// first page (mod tau); theta is a lift of t to the homotopy of F^{st}.
pub fn hidden_extension_derive(
    dga: &FilteredDga,
    mt: i64,
    st: i64,
    theta_lvl: &[BigInt],
    m1: i64,
    s1: i64,
    x_rep: &[BigInt],
    y_rep: &[BigInt],
) -> Result<DerivedExtension, DgaError> {
    let _ring = dga.ring();
    // verify the hypothesis t . x = y on the first page (mod tau)
    let idx_x = idx3_of(dga, s1, 1);
    let xf = dga.include(m1, &idx_x, &x_rep.to_vec());
    let idx_t = dga.level_indices(st);
    let th = dga.include(mt, &idx_t, &theta_lvl.to_vec());
    let tx = dga.product_vec(mt, &th, m1, &xf);
    let (m2, s2) = (m1 + mt, s1 + st);
    let (hy, _qy, idx_y) = dga.homotopy_mod_tau(m2, s2, 1);
    let tx_q = dga.project(m2, &idx_y, &tx);
    let y_cls = hy.class_of(&y_rep.to_vec());
    let tx_cls = hy.class_of(&tx_q);
    if !hy.pres.elts_equal(&y_cls, &tx_cls) {
        return Err(DgaError::Hypothesis("t.x = y fails on the first page".into()));
    }
    // total differentials into the honest filtration levels
    let dx_full = {
        let full = dga.include(m1, &idx_x, &x_rep.to_vec());
        dga.complex.diff(m1).mul_vec(&full)
    };
    let dy_full = {
        let full = dga.include(m2, &idx_y, &y_rep.to_vec());
        dga.complex.diff(m2).mul_vec(&full)
    };
    // relation theta . del(x) = del(y) as classes in H(F^{s2+1})
    let filt = dga.filtration(weight_cap(dga));
    let lvl = filt.level(s2 + 1);
    let h_t = lvl.homology(m2 - 1);
    let t_dx = dga.product_vec(mt, &th, m1 - 1, &dx_full);
    let idx_lvl = dga.level_indices(s2 + 1);
    let t_dx_lvl = dga.project(m2 - 1, &idx_lvl, &t_dx);
    let dy_lvl = dga.project(m2 - 1, &idx_lvl, &dy_full);
    let cls_tdx = h_t.class_of(&t_dx_lvl);
    let cls_dy = h_t.class_of(&dy_lvl);
    let relation_verified = h_t.pres.elts_equal(&cls_tdx, &cls_dy);

    // tau-divisibility: largest r with del(x) in the image of F^{s1+1+r}
    let r_div = divisibility(dga, m1 - 1, s1 + 1, &dx_full);
    let s_div = divisibility(dga, m2 - 1, s2 + 1, &dy_full);
    // jump relation: theta . alpha' = tau^{s-r} beta' up to tau^r-divisibles,
    // verified at the honest level F^{s1+1+r_div + st}
    let mut jump_ok = true;
    if relation_verified && s_div >= r_div {
        let lvl_a = filt.level(s1 + 1 + r_div);
        let h_a = lvl_a.homology(m1 - 1);
        let idx_a = dga.level_indices(s1 + 1 + r_div);
        let alpha_prime = dga.project(m1 - 1, &idx_a, &dx_full);
        let a_cls = h_a.class_of(&alpha_prime);
        // theta . alpha'
        let t_alpha = dga.product_vec(mt, &th, m1 - 1, &dx_full);
        let lvl_c = filt.level(s2 + 1 + r_div);
        let h_c = lvl_c.homology(m2 - 1);
        let idx_c = dga.level_indices(s2 + 1 + r_div);
        // both sides land in weight >= s2 + 1 + r_div
        let lhs = h_c.class_of(&dga.project(m2 - 1, &idx_c, &t_alpha));
        let rhs = h_c.class_of(&dga.project(m2 - 1, &idx_c, &dy_full));
        // equality up to tau^{r_div}-divisible elements: their difference
        // must come from filtration s2 + 1 + s_div... at least one more
        let diff = h_c.pres.add(&lhs, &h_c.pres.neg_elt(&rhs));
        // image of H(F^{s2+1+r_div+1}) in H(F^{s2+1+r_div})
        let deeper = filt
            .transition(s2 + 2 + r_div)
            .induced_hom(m2 - 1);
        jump_ok = h_c.pres.member_of_span(&diff, &deeper.image_span());
        let _ = a_cls;
    }
    Ok(DerivedExtension {
        relation_verified,
        r_divisibility: r_div,
        s_divisibility: s_div,
        jump_relation_verified: jump_ok,
    })
}

fn weight_cap(dga: &FilteredDga) -> i64 {
    dga.weights.iter().flatten().copied().max().unwrap_or(0) + 1
}

/// Largest r such that the (cycle) vector of weight >= s is homologous in
/// F^s to something of weight >= s + r, capped at the weight range.
fn divisibility(dga: &FilteredDga, m: i64, s: i64, v: &[BigInt]) -> i64 {
    let filt = dga.filtration(weight_cap(dga));
    let mut r = 0;
    loop {
        let next = s + r + 1;
        if next > filt.s_max {
            return r;
        }
        let lvl = filt.level(s);
        let h = lvl.homology(m);
        let idx = dga.level_indices(s);
        let cls = h.class_of(&dga.project(m, &idx, &v.to_vec()));
        let deeper = filt.transition_composite(next, s).induced_hom(m);
        if h.pres.member_of_span(&cls, &deeper.image_span()) {
            r += 1;
        } else {
            return r;
        }
    }
}

/// The Koszul fixture over F_2 (or Z): generators x in degree 0 weight 1
/// and y in degree 1 weight j, with dy = x^k, truncated at x^cap = 0.
pub fn koszul_dga(ring: Ring, k: i64, j: i64, cap: usize) -> FilteredDga {
    assert!(j >= 1 && k >= j && (k as usize) < cap);
    // degree 0 basis: 1, x, ..., x^{cap-1}; degree 1 basis: y, xy, ..., x^{cap-1} y
    let n = cap;
    let ranks = vec![n, n];
    let mut d1 = Matrix::zero(ring, n, n);
    for i in 0..n {
        // d(x^i y) = x^{i+k}
        if i + (k as usize) < n {
            d1.set(i + k as usize, i, BigInt::one());
        }
    }
    let complex = ChainComplexData {
        ring,
        n_min: 0,
        n_max: 1,
        ranks,
        diffs: vec![Matrix::zero(ring, 0, n), d1],
    };
    complex.validate().expect("koszul complex");
    let weights = vec![
        (0..n as i64).collect::<Vec<i64>>(),
        (0..n as i64).map(|i| i + j).collect::<Vec<i64>>(),
    ];
    // multiplication tables
    let mut mult = BTreeMap::new();
    // (0,0): x^a . x^b = x^{a+b}
    let t00 = Matrix::from_fn(ring, n, n * n, |r, c| {
        let (a, b) = (c / n, c % n);
        if a + b == r { BigInt::one() } else { BigInt::zero() }
    });
    mult.insert((0, 0), t00);
    // (0,1): x^a . x^b y = x^{a+b} y ; (1,0) likewise
    let t01 = Matrix::from_fn(ring, n, n * n, |r, c| {
        let (a, b) = (c / n, c % n);
        if a + b == r { BigInt::one() } else { BigInt::zero() }
    });
    mult.insert((0, 1), t01.clone());
    mult.insert((1, 0), t01);
    // (1,1): (x^a y)(x^b y) = 0
    mult.insert((1, 1), Matrix::zero(ring, 0, n * n));
    let mut unit = vec![BigInt::zero(); n];
    unit[0] = BigInt::one();
    FilteredDga::new(complex, weights, mult, unit).expect("koszul dga")
}

/// An integral fixture with two odd generators exercising the Koszul sign:
/// Lambda_Z(y, z) tensor Z[x]/(x^cap), dy = x^a, dz = x^b, weights
/// w(x) = 1, w(y) = w(z) = 1.
pub fn koszul_sign_dga(a: i64, b: i64, cap: usize) -> FilteredDga {
    let ring = Ring::Int;
    let n = cap;
    assert!((a as usize) < n && (b as usize) < n && a >= 1 && b >= 1);
    // degree 0: x^i; degree 1: x^i y | x^i z; degree 2: x^i yz
    let ranks = vec![n, 2 * n, n];
    // d1(x^i y) = x^{i+a}, d1(x^i z) = x^{i+b}
    let mut d1 = Matrix::zero(ring, n, 2 * n);
    for i in 0..n {
        if i + (a as usize) < n {
            d1.set(i + a as usize, i, BigInt::one());
        }
        if i + (b as usize) < n {
            d1.set(i + b as usize, n + i, BigInt::one());
        }
    }
    // d2(x^i yz) = x^{i+a} z - x^{i+b} y
    let mut d2 = Matrix::zero(ring, 2 * n, n);
    for i in 0..n {
        if i + (a as usize) < n {
            d2.set(n + i + a as usize, i, BigInt::one());
        }
        if i + (b as usize) < n {
            d2.set(i + b as usize, i, BigInt::from(-1));
        }
    }
    let complex = ChainComplexData {
        ring,
        n_min: 0,
        n_max: 2,
        ranks,
        diffs: vec![Matrix::zero(ring, 0, n), d1, d2],
    };
    complex.validate().expect("sign koszul complex");
    let weights = vec![
        (0..n as i64).collect::<Vec<i64>>(),
        (0..n as i64).map(|i| i + 1).chain((0..n as i64).map(|i| i + 1)).collect(),
        (0..n as i64).map(|i| i + 2).collect(),
    ];
    let mut mult = BTreeMap::new();
    let t00 = Matrix::from_fn(ring, n, n * n, |r, c| {
        let (i, jj) = (c / n, c % n);
        if i + jj == r { BigInt::one() } else { BigInt::zero() }
    });
    mult.insert((0, 0), t00);
    // x^i . (x^j y | x^j z): index c = i * 2n + col
    let t01 = Matrix::from_fn(ring, 2 * n, n * 2 * n, |r, c| {
        let (i, col) = (c / (2 * n), c % (2 * n));
        let (which, jj) = (col / n, col % n);
        if which * n + i + jj == r && i + jj < n { BigInt::one() } else { BigInt::zero() }
    });
    mult.insert((0, 1), t01);
    // (x^i y | x^i z) . x^j
    let t10 = Matrix::from_fn(ring, 2 * n, 2 * n * n, |r, c| {
        let (col, jj) = (c / n, c % n);
        let (which, i) = (col / n, col % n);
        if which * n + i + jj == r && i + jj < n { BigInt::one() } else { BigInt::zero() }
    });
    mult.insert((1, 0), t10);
    // x^i . x^j yz and x^i yz . x^j
    let t02 = Matrix::from_fn(ring, n, n * n, |r, c| {
        let (i, jj) = (c / n, c % n);
        if i + jj == r { BigInt::one() } else { BigInt::zero() }
    });
    mult.insert((0, 2), t02.clone());
    mult.insert((2, 0), t02);
    // (x^i y | x^i z)(x^j y | x^j z): y.y = 0, z.z = 0, y.z = yz, z.y = -yz
    let t11 = Matrix::from_fn(ring, n, 2 * n * 2 * n, |r, c| {
        let (col1, col2) = (c / (2 * n), c % (2 * n));
        let (w1, i) = (col1 / n, col1 % n);
        let (w2, jj) = (col2 / n, col2 % n);
        if i + jj != r || i + jj >= n {
            return BigInt::zero();
        }
        match (w1, w2) {
            (0, 1) => BigInt::one(),        // y . z = yz
            (1, 0) => BigInt::from(-1),     // z . y = -yz
            _ => BigInt::zero(),
        }
    });
    mult.insert((1, 1), t11);
    // products with degree 2 on (1,2),(2,1),(2,2) vanish (y yz = 0 etc.)
    mult.insert((1, 2), Matrix::zero(ring, 0, 2 * n * n));
    mult.insert((2, 1), Matrix::zero(ring, 0, n * 2 * n));
    mult.insert((2, 2), Matrix::zero(ring, 0, n * n));
    let mut unit = vec![BigInt::zero(); n];
    unit[0] = BigInt::one();
    FilteredDga::new(complex, weights, mult, unit).expect("sign koszul dga")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_dga_validates() {
        for k in 1..=3 {
            let dga = koszul_dga(Ring::Fp(2), k, 1, 10);
            let filt = dga.filtration(8);
            assert!(filt.is_strict());
        }
        let dga = koszul_sign_dga(1, 2, 9);
        let filt = dga.filtration(8);
        assert!(filt.is_strict());
    }

    #[test]
    fn leibniz_on_koszul_f2() {
        for k in 1..=3 {
            let dga = koszul_dga(Ring::Fp(2), k, 1, 12);
            for n in 1..=3 {
                let rep = leibniz_check(&dga, n, 1, 3);
                assert!(rep.derivation_holds, "k={k} n={n}: {:?}", rep.notes);
                assert!(rep.linearity_holds, "k={k} n={n}: {:?}", rep.notes);
                assert!(rep.pairs_checked > 0, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn leibniz_on_integral_sign_fixture() {
        let dga = koszul_sign_dga(1, 2, 10);
        for n in 1..=2 {
            let rep = leibniz_check(&dga, n, 2, 2);
            assert!(rep.derivation_holds, "n={n}: {:?}", rep.notes);
            assert!(rep.linearity_holds, "n={n}: {:?}", rep.notes);
        }
    }

    #[test]
    fn padic_dga_all_boundaries_vanish() {
        // zero differential: all totals vanish, identities trivially hold
        let dga = koszul_dga(Ring::Fp(2), 3, 1, 6);
        // degree-0 part has zero differential; a derivation check on the
        // degree-0 pairs amounts to 0 = 0
        let rep = leibniz_check(&dga, 1, 0, 2);
        assert!(rep.derivation_holds);
    }

    #[test]
    fn hidden_extension_on_koszul() {
        // F_2[x]/(x^cap) with dy = x^2: take t = x on the first page;
        // x . y = xy gives del(xy) = x . del(y) (a transported extension)
        let dga = koszul_dga(Ring::Fp(2), 2, 1, 10);
        // x at (0, 1): representative in level coordinates of F^1
        let idx1 = dga.level_indices(1);
        let mut theta = vec![BigInt::zero(); idx1[0].len()];
        // find the position of basis x (index 1 in degree 0)
        let pos = idx1[0].iter().position(|&j| j == 1).unwrap();
        theta[pos] = BigInt::one();
        // x-class on page one at (0,1): weight-1 slice of degree 0
        let idx_x = idx3_of(&dga, 1, 1);
        let mut x_rep = vec![BigInt::zero(); idx_x[0].len()];
        let posx = idx_x[0].iter().position(|&j| j == 1).unwrap();
        x_rep[posx] = BigInt::one();
        // y-class at (1, 1): y has weight 1
        let idx_yq = idx3_of(&dga, 2, 1);
        let mut y_rep = vec![BigInt::zero(); idx_yq[1].len()];
        let posy = idx_yq[1].iter().position(|&j| j == 1).unwrap(); // xy
        y_rep[posy] = BigInt::one();
        let ext = hidden_extension_derive(&dga, 0, 1, &theta, 1, 1, &x_rep, &y_rep).unwrap();
        assert!(ext.relation_verified);
        assert!(ext.jump_relation_verified);
    }
}
