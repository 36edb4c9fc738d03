//! Batch front end: parse instance files, dispatch computations, emit page
//! tables, tau-module reports, omnibus reports and Adams-indexed charts.
//!
//! Exit codes: 0 success, 2 validation failure (schema, dimensions,
//! d^2 != 0, non-chain transitions), 3 precondition failure (e.g. the
//! omnibus verifier on an incomplete instance).

mod emit;
mod fixtures;
mod schema;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand};
use exss_core::cosimplicial::hopf::cobar_ext;
use exss_core::cosimplicial::{decalage, tot_filtration};
use exss_core::filtration::{FilteredComplexData, TauCap};
use exss_core::omnibus::{total_diff_table, verify_omnibus, verify_truncated_omnibus, OmnibusError};
use exss_core::sseq::{PageIndex, SpectralSequence};
use exss_core::taubss::{bss_compare_to_sseq, TauBss, TruncatedTauBss};
use exss_core::taumod::TauModuleData;
use serde_json::json;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "exss", about = "Exact spectral sequence engine for filtered chain complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Compute spectral sequence pages of a filtered instance
    Pages {
        instance: PathBuf,
        /// page range, e.g. 1..3 (inclusive)
        #[arg(long, default_value = "1..3")]
        pages: String,
        /// reindex to second-page indexing
        #[arg(long)]
        reindex: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the bigraded homotopy as a Z[tau]-module
    TauModule {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the Omnibus dictionary (full, and truncated for k <= depth)
    Omnibus {
        instance: PathBuf,
        #[arg(long, default_value = "3")]
        depth: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The tau-Bockstein spectral sequence (full or truncated)
    Bockstein {
        instance: PathBuf,
        #[arg(long)]
        truncated: Option<i64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Total differentials and their commuting squares
    TotalDiffs {
        instance: PathBuf,
        #[arg(long, default_value = "3")]
        max_r: i64,
        #[arg(long, default_value = "5")]
        max_cap: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tot filtration of a cosimplicial payload
    Tot {
        instance: PathBuf,
        #[arg(long, default_value = "1..2")]
        pages: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cosimplicial decalage with the page-shift comparison
    Decalage {
        instance: PathBuf,
        #[arg(long, default_value = "3")]
        max_r: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cobar Ext table of a Hopf payload
    Ext {
        instance: PathBuf,
        /// cohomological range, e.g. 0..8
        #[arg(long, default_value = "0..8")]
        range: String,
        #[arg(long, default_value = "8")]
        t_max: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit an SVG chart of one page
    Chart {
        instance: PathBuf,
        #[arg(long, default_value = "1")]
        page: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the canonical fixture files into a directory
    MakeFixtures { dir: PathBuf },
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() != 2 {
        bail!("range must look like a..b, got {s:?}");
    }
    Ok((parts[0].parse()?, parts[1].parse()?))
}

fn write_out(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => {
            std::fs::write(p, content)?;
            Ok(())
        }
    }
}

fn load_filtration(path: &PathBuf) -> Result<FilteredComplexData> {
    let inst = schema::parse_instance(path)?;
    let sec = inst
        .filtration
        .ok_or_else(|| anyhow!("{}: no filtration section", path.display()))?;
    schema::filtration_of(&sec)
}

/// Exit code 3 marker for mathematical precondition failures.
#[derive(Debug)]
struct Precondition(String);

impl std::fmt::Display for Precondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}
impl std::error::Error for Precondition {}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Pages { instance, pages, reindex, format, out } => {
            let x = load_filtration(&instance)?;
            let (r_lo, r_hi) = parse_range(&pages)?;
            if r_lo < 1 || r_hi < r_lo {
                bail!("pages: invalid range");
            }
            let second = match reindex.as_deref() {
                None => false,
                Some("second") => true,
                Some(other) => bail!("--reindex: unknown mode {other:?}"),
            };
            let ss = SpectralSequence::new(&x);
            let content = match format {
                Format::Csv => emit::pages_csv(&ss, r_lo, r_hi, second),
                Format::Json => serde_json::to_string_pretty(&emit::pages_json(&ss, r_lo, r_hi, second))? + "\n",
                Format::Svg => {
                    let page = ss.page(PageIndex::R(r_lo));
                    let page = if second { page.reindex_second_page() } else { page };
                    emit::page_svg(&page, &r_lo.to_string())
                }
            };
            write_out(&out, &content)
        }
        Command::TauModule { instance, format, out } => {
            let x = load_filtration(&instance)?;
            let m = TauModuleData::from_filtration(&x);
            let mut cells = Vec::new();
            for n in m.n_lo..=m.n_hi {
                for s in m.s_min..=m.s_max {
                    let c = m.cell(n, s);
                    if c.is_trivial() {
                        continue;
                    }
                    cells.push(json!({
                        "n": n,
                        "s": s,
                        "group": c.describe(),
                        "tau": emit::matrix_rows(&m.tau_hom(n, s).matrix),
                        "gr": m.gr(n, s).describe(),
                    }));
                }
            }
            let mut stems = Vec::new();
            for n in m.n_lo..=m.n_hi {
                let (complete, witness) = m.is_derived_complete(n);
                stems.push(json!({
                    "n": n,
                    "derived_complete": complete,
                    "witness": witness,
                    "collapse": m.tau_collapse(n).describe(),
                }));
            }
            let v = json!({
                "strict": m.is_strict(),
                "tau_invertible": m.is_tau_invertible(),
                "cells": cells,
                "stems": stems,
            });
            let content = match format {
                Format::Json => serde_json::to_string_pretty(&v)? + "\n",
                _ => bail!("tau-module supports --format json"),
            };
            write_out(&out, &content)
        }
        Command::Omnibus { instance, depth, out } => {
            let x = load_filtration(&instance)?;
            let full = match verify_omnibus(&x) {
                Ok(r) => r,
                Err(OmnibusError::NotComplete) => {
                    return Err(anyhow!(Precondition("omnibus: the instance is not complete".into())));
                }
                Err(e) => return Err(anyhow!("{e}")),
            };
            let mut truncated = Vec::new();
            for k in 1..=depth.max(1) {
                let rep = verify_truncated_omnibus(&x, k).map_err(|e| anyhow!("{e}"))?;
                truncated.push(json!({
                    "k": k,
                    "all_pass": rep.all_pass,
                    "lift_iff_low_cycles": rep.lift_iff_low_cycles,
                    "tau_multiples_nonzero": rep.tau_multiples_nonzero,
                    "boundary_represents_dk": rep.boundary_represents_dk,
                    "torsion_lifts": rep.torsion_lifts,
                    "generation_certified": rep.generation_certified,
                    "relative_generation_certified": rep.relative_generation_certified,
                    "coarse_criteria": rep.coarse_criteria,
                }));
            }
            let v = json!({
                "all_pass": full.all_pass,
                "lift_iff_permanent": full.lift_iff_permanent,
                "generation": full.generation_certified,
                "records": full.records.iter().map(|r| json!({
                    "n": r.n,
                    "s": r.s,
                    "gen": r.gen_index,
                    "permanent_cycle": r.permanent_cycle,
                    "survives_to": r.survives_to.map(|x| x.to_string()).unwrap_or_else(|| "infinity".into()),
                    "all_lifts_tau_nonzero": r.all_lifts_tau_nonzero,
                    "torsion_lift_order": r.torsion_lift.as_ref().map(|(k, _)| *k),
                    "lift": r.lift.as_ref().map(|a| a.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                })).collect::<Vec<_>>(),
                "truncated": truncated,
            });
            write_out(&out, &(serde_json::to_string_pretty(&v)? + "\n"))
        }
        Command::Bockstein { instance, truncated, format, out } => {
            let x = load_filtration(&instance)?;
            let v = match truncated {
                None => {
                    let bss = TauBss::new(&x);
                    let cmp = bss_compare_to_sseq(&x);
                    let mut cells = Vec::new();
                    for (&w, slice) in &bss.slices {
                        let page = slice.page(PageIndex::R(1));
                        for (&(n, s), cell) in &page.cells {
                            if cell.sq.pres.is_trivial() || s < 0 {
                                continue;
                            }
                            cells.push(json!({
                                "n": n, "w": w, "s": s,
                                "group": cell.sq.pres.describe(),
                            }));
                        }
                    }
                    json!({
                        "kind": "full",
                        "e1_cells": cells,
                        "comparison": {
                            "diffs_match": cmp.clause_i_diffs_match,
                            "targets_taubar_divisible": cmp.clause_ii_targets_taubar_divisible,
                            "cycle_boundary_identifications": cmp.clause_iii_cycle_boundary_identifications,
                            "detection_transport": cmp.clause_iv_detection_transport,
                            "convergence_equivalence": cmp.clause_v_convergence_equivalence,
                            "all_pass": cmp.all_pass(),
                            "notes": cmp.notes,
                        }
                    })
                }
                Some(k) => {
                    let tr = TruncatedTauBss::new(&x, k).map_err(|e| anyhow!("{e}"))?;
                    let mut cells = Vec::new();
                    for (&w, slice) in &tr.slices {
                        let page = slice.page(PageIndex::R(1));
                        for (&(n, s), cell) in &page.cells {
                            if cell.sq.pres.is_trivial() || s < 0 {
                                continue;
                            }
                            cells.push(json!({
                                "n": n, "w": w, "s": s,
                                "group": cell.sq.pres.describe(),
                            }));
                        }
                    }
                    json!({ "kind": "truncated", "k": k, "e1_cells": cells })
                }
            };
            let content = match format {
                Format::Json => serde_json::to_string_pretty(&v)? + "\n",
                _ => bail!("bockstein supports --format json"),
            };
            write_out(&out, &content)
        }
        Command::TotalDiffs { instance, max_r, max_cap, out } => {
            let x = load_filtration(&instance)?;
            let rep = total_diff_table(&x, max_r, max_cap);
            let ss = SpectralSequence::new(&x);
            let c = &ss.couple;
            let mut tables = Vec::new();
            for n in c.n_lo..=c.n_hi {
                for s in c.s_lo..=c.s_hi - 1 {
                    for r in 1..=max_r {
                        let del = x.total_differential(r, TauCap::Infinite, n, s);
                        if del.is_zero_map() {
                            continue;
                        }
                        tables.push(json!({
                            "n": n, "s": s, "r": r,
                            "matrix": emit::matrix_rows(&del.matrix),
                            "source": del.source.describe(),
                            "target": del.target.describe(),
                        }));
                    }
                }
            }
            let v = json!({
                "squares_commute": rep.squares_commute,
                "surjectivity_certified": rep.surjectivity_certified,
                "truncated_squares_commute": rep.truncated_squares_commute,
                "notes": rep.notes,
                "nonzero_total_differentials": tables,
            });
            write_out(&out, &(serde_json::to_string_pretty(&v)? + "\n"))
        }
        Command::Tot { instance, pages, format, out } => {
            let inst = schema::parse_instance(&instance)?;
            let sec = inst
                .cosimplicial
                .ok_or_else(|| anyhow!("{}: no cosimplicial section", instance.display()))?;
            let a = schema::cosimplicial_of(&sec)?;
            let filt = tot_filtration(&a);
            let (r_lo, r_hi) = parse_range(&pages)?;
            let ss = SpectralSequence::new(&filt);
            let content = match format {
                Format::Csv => emit::pages_csv(&ss, r_lo, r_hi, false),
                Format::Json => serde_json::to_string_pretty(&emit::pages_json(&ss, r_lo, r_hi, false))? + "\n",
                Format::Svg => emit::page_svg(&ss.page(PageIndex::R(r_lo)), &r_lo.to_string()),
            };
            write_out(&out, &content)
        }
        Command::Decalage { instance, max_r, out } => {
            let inst = schema::parse_instance(&instance)?;
            let sec = inst
                .cosimplicial
                .ok_or_else(|| anyhow!("{}: no cosimplicial section", instance.display()))?;
            let a = schema::cosimplicial_of(&sec)?;
            let dec = decalage(&a);
            let tot = tot_filtration(&a);
            let ss_dec = SpectralSequence::new(&dec);
            let ss_tot = SpectralSequence::new(&tot);
            let mut shifts = Vec::new();
            let mut all_match = true;
            for r in 1..=max_r {
                let p_dec = ss_dec.page(PageIndex::R(r));
                let p_tot = ss_tot.page(PageIndex::R(r + 1));
                for (&(n, s), cell) in &p_dec.cells {
                    let got = cell.sq.pres.invariant_factors();
                    let expect = p_tot
                        .cells
                        .get(&(n, s - n))
                        .map(|c| c.sq.pres.invariant_factors())
                        .unwrap_or_default();
                    let matches = got == expect;
                    all_match &= matches;
                    if !got.is_empty() || !expect.is_empty() {
                        shifts.push(json!({
                            "r": r, "n": n, "s": s,
                            "dec": cell.sq.pres.describe(),
                            "tot_shifted": matches,
                        }));
                    }
                }
            }
            let v = json!({
                "complete": dec.is_complete(),
                "page_shift_holds": all_match,
                "cells": shifts,
            });
            write_out(&out, &(serde_json::to_string_pretty(&v)? + "\n"))
        }
        Command::Ext { instance, range, t_max, format, out } => {
            let inst = schema::parse_instance(&instance)?;
            let sec = inst.hopf.ok_or_else(|| anyhow!("{}: no hopf section", instance.display()))?;
            let (h, m) = schema::hopf_of(&sec)?;
            let (s_lo, s_hi) = parse_range(&range)?;
            if s_lo != 0 {
                bail!("ext: the range must start at 0");
            }
            let table = cobar_ext(&h, &m, s_hi as usize, t_max).map_err(|e| anyhow!("{e}"))?;
            let content = match format {
                Format::Csv => {
                    let mut outp = String::from("s,t,dim\n");
                    for (&(s, t), &d) in &table.dims {
                        outp.push_str(&format!("{s},{t},{d}\n"));
                    }
                    outp
                }
                Format::Json => {
                    let rows: Vec<_> = table
                        .dims
                        .iter()
                        .map(|(&(s, t), &d)| json!({"s": s, "t": t, "dim": d}))
                        .collect();
                    serde_json::to_string_pretty(&json!({
                        "p": table.p,
                        "tot_cross_check": table.tot_cross_check,
                        "dims": rows,
                    }))? + "\n"
                }
                Format::Svg => bail!("ext supports csv or json"),
            };
            write_out(&out, &content)
        }
        Command::Chart { instance, page, out } => {
            let x = load_filtration(&instance)?;
            let ss = SpectralSequence::new(&x);
            let p = ss.page(PageIndex::R(page));
            write_out(&out, &emit::page_svg(&p, &page.to_string()))
        }
        Command::MakeFixtures { dir } => fixtures::write_fixtures(&dir),
    }
}

fn main() {
    match run() {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.downcast_ref::<Precondition>().is_some() { 3 } else { 2 };
            std::process::exit(code);
        }
    }
}
