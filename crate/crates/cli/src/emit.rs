//! Deterministic emitters: CSV page tables, JSON reports and static SVG
//! charts in the Adams convention (stem horizontal, filtration vertical).
//! Identical input and flags must produce identical bytes.

use exss_core::group::GroupPresentation;
use exss_core::sseq::{PageData, PageIndex, SpectralSequence};
use num_traits::Zero;
use serde_json::{json, Map, Value};

fn factors_string(pres: &GroupPresentation) -> String {
    let fs = pres.invariant_factors();
    if fs.is_empty() {
        "0".to_string()
    } else {
        fs.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(";")
    }
}

/// One CSV block per page: columns n, s, invariant_factors, d_targets.
pub fn pages_csv(ss: &SpectralSequence, r_lo: i64, r_hi: i64, second_indexing: bool) -> String {
    let mut out = String::from("page,n,s,invariant_factors,d_targets\n");
    for r in r_lo..=r_hi {
        let page = ss.page(PageIndex::R(r));
        let page = if second_indexing { page.reindex_second_page() } else { page };
        let label = if second_indexing { format!("~{}", r + 1) } else { r.to_string() };
        for (&(n, s), cell) in &page.cells {
            if cell.sq.pres.is_trivial() {
                continue;
            }
            let d = &page.diffs[&(n, s)];
            let mut targets = Vec::new();
            if !d.is_zero_map() {
                for j in 0..cell.sq.pres.gens {
                    let img = d.apply(&cell.sq.pres.generator(j));
                    let canon = d.target.canonical_form(&img);
                    if canon.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let xs: Vec<String> = canon.iter().map(|x| x.to_string()).collect();
                    targets.push(format!("g{j}->[{}]", xs.join(" ")));
                }
            }
            out.push_str(&format!(
                "{label},{n},{s},{},{}\n",
                factors_string(&cell.sq.pres),
                targets.join("|")
            ));
        }
    }
    out
}

/// JSON view of a page range.
pub fn pages_json(ss: &SpectralSequence, r_lo: i64, r_hi: i64, second_indexing: bool) -> Value {
    let mut pages = Vec::new();
    for r in r_lo..=r_hi {
        let page = ss.page(PageIndex::R(r));
        let page = if second_indexing { page.reindex_second_page() } else { page };
        let mut cells = Vec::new();
        for (&(n, s), cell) in &page.cells {
            if cell.sq.pres.is_trivial() {
                continue;
            }
            let d = &page.diffs[&(n, s)];
            let mut m = Map::new();
            m.insert("n".into(), json!(n));
            m.insert("s".into(), json!(s));
            m.insert("group".into(), json!(cell.sq.pres.describe()));
            m.insert("invariant_factors".into(), json!(factors_string(&cell.sq.pres)));
            if !d.is_zero_map() {
                m.insert("d_matrix".into(), json!(matrix_rows(&d.matrix)));
            }
            cells.push(Value::Object(m));
        }
        pages.push(json!({
            "r": if second_indexing { r + 1 } else { r },
            "indexing": if second_indexing { "second" } else { "first" },
            "cells": cells,
        }));
    }
    json!({ "pages": pages })
}

pub fn matrix_rows(m: &exss_core::matrix::Matrix) -> Vec<Vec<String>> {
    (0..m.rows)
        .map(|r| (0..m.cols).map(|c| m.at(r, c).to_string()).collect())
        .collect()
}

/// Static SVG chart of one page in the Adams convention: one dot per
/// generator, torsion annotated, d_r arrows.
pub fn page_svg(page: &PageData, r_label: &str) -> String {
    let cell = 60i64;
    let dot_gap = 10i64;
    let mut n_lo = i64::MAX;
    let mut n_hi = i64::MIN;
    let mut s_lo = i64::MAX;
    let mut s_hi = i64::MIN;
    for (&(n, s), c) in &page.cells {
        if c.sq.pres.is_trivial() {
            continue;
        }
        n_lo = n_lo.min(n);
        n_hi = n_hi.max(n);
        s_lo = s_lo.min(s);
        s_hi = s_hi.max(s);
    }
    if n_lo > n_hi {
        // empty page: a bare grid
        return format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"120\" height=\"120\" viewBox=\"0 0 120 120\">\n<!-- page {r_label}: empty -->\n<rect x=\"0\" y=\"0\" width=\"120\" height=\"120\" fill=\"white\" stroke=\"gray\"/>\n</svg>\n"
        );
    }
    let w = (n_hi - n_lo + 2) * cell;
    let h = (s_hi - s_lo + 2) * cell;
    let cx = |n: i64| (n - n_lo) * cell + cell;
    let cy = |s: i64| h - ((s - s_lo) * cell + cell);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    out.push_str(&format!("<!-- spectral sequence page {r_label}; x: stem, y: filtration -->\n"));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    ));
    // grid lines
    for n in n_lo..=n_hi + 1 {
        let x = cx(n) - cell / 2;
        out.push_str(&format!(
            "<line x1=\"{x}\" y1=\"0\" x2=\"{x}\" y2=\"{h}\" stroke=\"#eeeeee\"/>\n"
        ));
    }
    for s in s_lo..=s_hi + 1 {
        let y = cy(s) + cell / 2;
        out.push_str(&format!(
            "<line x1=\"0\" y1=\"{y}\" x2=\"{w}\" y2=\"{y}\" stroke=\"#eeeeee\"/>\n"
        ));
    }
    // axis labels
    for n in n_lo..=n_hi {
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"gray\">{}</text>\n",
            cx(n) - 3,
            h - 4,
            n
        ));
    }
    for s in s_lo..=s_hi {
        out.push_str(&format!(
            "<text x=\"2\" y=\"{}\" font-size=\"10\" fill=\"gray\">{}</text>\n",
            cy(s) + 3,
            s
        ));
    }
    // dots and torsion annotations
    for (&(n, s), c) in &page.cells {
        let fs = c.sq.pres.invariant_factors();
        if fs.is_empty() {
            continue;
        }
        let k = fs.len() as i64;
        for (i, f) in fs.iter().enumerate() {
            let x = cx(n) + (i as i64 - (k - 1) / 2) * dot_gap - if k % 2 == 0 { dot_gap / 2 } else { 0 };
            let y = cy(s);
            out.push_str(&format!("<circle cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"black\"/>\n"));
            if !f.is_zero() {
                out.push_str(&format!(
                    "<text x=\"{}\" y=\"{}\" font-size=\"8\" fill=\"#3355bb\">{}</text>\n",
                    x + 4,
                    y - 4,
                    f
                ));
            }
        }
    }
    // differential arrows
    for (&(n, s), d) in &page.diffs {
        if d.is_zero_map() {
            continue;
        }
        let (bn, bs) = page.differential_bidegree();
        let (tn, ts) = (n + bn, s + bs);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#cc3333\" stroke-width=\"1\"/>\n",
            cx(n),
            cy(s),
            cx(tn),
            cy(ts)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"8\" fill=\"#cc3333\">d{}</text>\n",
            (cx(n) + cx(tn)) / 2 + 2,
            (cy(s) + cy(ts)) / 2,
            r_label
        ));
    }
    out.push_str("</svg>\n");
    out
}
