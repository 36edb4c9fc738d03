//! The JSON instance format (versioned, "format": 1) and its conversion
//! into validated core data. Parse errors carry locations: syntax errors
//! come with line/column from the JSON parser, semantic errors name the
//! offending path.

use anyhow::{anyhow, bail, Context, Result};
use exss_core::complex::{ChainComplexData, ChainMapData};
use exss_core::cosimplicial::hopf::{ComoduleData, HopfData};
use exss_core::cosimplicial::CosimplicialData;
use exss_core::filtration::{FilteredComplexData, ProfileAbove, ProfileBelow};
use exss_core::matrix::Matrix;
use exss_core::ring::Ring;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filtration: Option<FiltrationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cosimplicial: Option<CosimplicialSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hopf: Option<HopfSection>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationSection {
    pub ring: RingSpec,
    /// [n_min, n_max]
    pub degree_window: [i64; 2],
    /// [s_min, s_max]
    pub window: [i64; 2],
    pub profiles: Profiles,
    pub levels: Vec<LevelSpec>,
    /// transitions[i] : level s_min+i+1 -> level s_min+i, one matrix per degree
    pub transitions: Vec<Vec<Vec<Vec<i64>>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingSpec {
    Name(String),
    Fp { fp: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profiles {
    pub below: String,
    pub above: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    pub ranks: Vec<usize>,
    /// diffs[i] : degree n_min+i -> n_min+i-1 (the first is empty)
    pub diffs: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosimplicialSection {
    pub ring: RingSpec,
    pub degree_window: [i64; 2],
    pub levels: Vec<LevelSpec>,
    /// cofaces[j][i] : level j -> level j+1, one matrix per degree
    pub cofaces: Vec<Vec<Vec<Vec<Vec<i64>>>>>,
    /// absent for semicosimplicial data
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codegeneracies: Option<Vec<Vec<Vec<Vec<Vec<i64>>>>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfSection {
    pub p: u64,
    pub degrees: Vec<i64>,
    pub counit: Vec<i64>,
    /// coproduct[g] = [[i, j, coeff], ...]
    pub coproduct: Vec<Vec<[i64; 3]>>,
    pub comodule: ComoduleSection,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComoduleSection {
    pub degrees: Vec<i64>,
    /// coaction[m] = [[gamma, m', coeff], ...]
    pub coaction: Vec<Vec<[i64; 3]>>,
}

fn ring_of(spec: &RingSpec) -> Result<Ring> {
    match spec {
        RingSpec::Name(s) if s == "Z" => Ok(Ring::Int),
        RingSpec::Name(s) => bail!("ring: unknown ring {s:?} (use \"Z\" or {{\"fp\": p}})"),
        RingSpec::Fp { fp } => {
            if *fp < 2 {
                bail!("ring.fp: {fp} is not a prime");
            }
            Ok(Ring::Fp(*fp))
        }
    }
}

fn matrix_of(ring: Ring, rows: usize, cols: usize, data: &[Vec<i64>], path: &str) -> Result<Matrix> {
    if data.len() != rows {
        bail!("{path}: expected {rows} rows, found {}", data.len());
    }
    for (r, row) in data.iter().enumerate() {
        if row.len() != cols {
            bail!("{path}[{r}]: expected {cols} entries, found {}", row.len());
        }
    }
    Ok(Matrix::from_fn(ring, rows, cols, |r, c| BigInt::from(data[r][c])))
}

fn complex_of(ring: Ring, n_min: i64, n_max: i64, lvl: &LevelSpec, path: &str) -> Result<ChainComplexData> {
    let span = (n_max - n_min + 1) as usize;
    if lvl.ranks.len() != span {
        bail!("{path}.ranks: expected {span} entries for the degree window");
    }
    if lvl.diffs.len() != span {
        bail!("{path}.diffs: expected {span} matrices for the degree window");
    }
    let mut diffs = Vec::new();
    for i in 0..span {
        let rows = if i == 0 { 0 } else { lvl.ranks[i - 1] };
        diffs.push(matrix_of(ring, rows, lvl.ranks[i], &lvl.diffs[i], &format!("{path}.diffs[{i}]"))?);
    }
    ChainComplexData::new(ring, n_min, lvl.ranks.clone(), diffs)
        .map_err(|e| anyhow!("{path}: {e}"))
}

pub fn filtration_of(sec: &FiltrationSection) -> Result<FilteredComplexData> {
    let ring = ring_of(&sec.ring)?;
    let [n_min, n_max] = sec.degree_window;
    let [s_min, s_max] = sec.window;
    let expected_levels = (s_max - s_min + 1).max(0) as usize;
    if sec.levels.len() != expected_levels {
        bail!("levels: expected {expected_levels} levels for the filtration window");
    }
    if sec.transitions.len() + 1 != sec.levels.len() {
        bail!("transitions: expected {} (one per adjacent pair)", sec.levels.len() - 1);
    }
    let below = match sec.profiles.below.as_str() {
        "constant" => ProfileBelow::Constant,
        "zero" => ProfileBelow::Zero,
        other => bail!("profiles.below: unknown profile {other:?}"),
    };
    let above = match sec.profiles.above.as_str() {
        "constant" => ProfileAbove::Constant,
        "zero" => ProfileAbove::Zero,
        other => bail!("profiles.above: unknown profile {other:?}"),
    };
    let levels: Vec<ChainComplexData> = sec
        .levels
        .iter()
        .enumerate()
        .map(|(i, l)| complex_of(ring, n_min, n_max, l, &format!("levels[{i}]")))
        .collect::<Result<_>>()?;
    let mut transitions = Vec::new();
    for (i, t) in sec.transitions.iter().enumerate() {
        let src = &levels[i + 1];
        let tgt = &levels[i];
        let span = (n_max - n_min + 1) as usize;
        if t.len() != span {
            bail!("transitions[{i}]: expected {span} per-degree matrices");
        }
        let mut maps = Vec::new();
        for (d, mat) in t.iter().enumerate() {
            let deg = n_min + d as i64;
            maps.push(matrix_of(ring, tgt.rank(deg), src.rank(deg), mat, &format!("transitions[{i}][{d}]"))?);
        }
        transitions.push(
            ChainMapData::new(src.clone(), tgt.clone(), n_min, maps)
                .map_err(|e| anyhow!("transitions[{i}]: {e}"))?,
        );
    }
    FilteredComplexData::new(levels, transitions, s_min, below, above)
        .map_err(|e| anyhow!("filtration: {e}"))
}

pub fn cosimplicial_of(sec: &CosimplicialSection) -> Result<CosimplicialData> {
    let ring = ring_of(&sec.ring)?;
    let [n_min, n_max] = sec.degree_window;
    let levels: Vec<ChainComplexData> = sec
        .levels
        .iter()
        .enumerate()
        .map(|(i, l)| complex_of(ring, n_min, n_max, l, &format!("cosimplicial.levels[{i}]")))
        .collect::<Result<_>>()?;
    let m = levels.len() - 1;
    if sec.cofaces.len() != m {
        bail!("cosimplicial.cofaces: expected {m} groups");
    }
    let span = (n_max - n_min + 1) as usize;
    let read_maps = |group: &Vec<Vec<Vec<i64>>>, src: &ChainComplexData, tgt: &ChainComplexData, path: String| -> Result<ChainMapData> {
        if group.len() != span {
            bail!("{path}: expected {span} per-degree matrices");
        }
        let mut maps = Vec::new();
        for (d, mat) in group.iter().enumerate() {
            let deg = n_min + d as i64;
            maps.push(matrix_of(ring, tgt.rank(deg), src.rank(deg), mat, &format!("{path}[{d}]"))?);
        }
        ChainMapData::new(src.clone(), tgt.clone(), n_min, maps).map_err(|e| anyhow!("{path}: {e}"))
    };
    let mut cofaces = Vec::new();
    for (j, group) in sec.cofaces.iter().enumerate() {
        if group.len() != j + 2 {
            bail!("cosimplicial.cofaces[{j}]: expected {} maps", j + 2);
        }
        let mut dj = Vec::new();
        for (i, g) in group.iter().enumerate() {
            dj.push(read_maps(g, &levels[j], &levels[j + 1], format!("cosimplicial.cofaces[{j}][{i}]"))?);
        }
        cofaces.push(dj);
    }
    let codegeneracies = match &sec.codegeneracies {
        None => Vec::new(),
        Some(groups) => {
            if groups.len() != m {
                bail!("cosimplicial.codegeneracies: expected {m} groups");
            }
            let mut out = Vec::new();
            for (j, group) in groups.iter().enumerate() {
                if group.len() != j + 1 {
                    bail!("cosimplicial.codegeneracies[{j}]: expected {} maps", j + 1);
                }
                let mut sj = Vec::new();
                for (i, g) in group.iter().enumerate() {
                    sj.push(read_maps(
                        g,
                        &levels[j + 1],
                        &levels[j],
                        format!("cosimplicial.codegeneracies[{j}][{i}]"),
                    )?);
                }
                out.push(sj);
            }
            out
        }
    };
    let data = CosimplicialData { ring, levels, cofaces, codegeneracies };
    data.validate().map_err(|e| anyhow!("cosimplicial: {e}"))?;
    Ok(data)
}

pub fn hopf_of(sec: &HopfSection) -> Result<(HopfData, ComoduleData)> {
    let to_terms = |v: &Vec<[i64; 3]>| -> Vec<(usize, usize, i64)> {
        v.iter().map(|[a, b, c]| (*a as usize, *b as usize, *c)).collect()
    };
    let h = HopfData {
        p: sec.p,
        degrees: sec.degrees.clone(),
        counit: sec.counit.clone(),
        coproduct: sec.coproduct.iter().map(to_terms).collect(),
    };
    let m = ComoduleData {
        degrees: sec.comodule.degrees.clone(),
        coaction: sec.comodule.coaction.iter().map(to_terms).collect(),
    };
    Ok((h, m))
}

/// Parse and validate an instance file; errors carry a location.
pub fn parse_instance(path: &std::path::Path) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let inst: InstanceFile = serde_json::from_str(&text).map_err(|e| {
        anyhow!("{}:{}:{}: {e}", path.display(), e.line(), e.column())
    })?;
    if inst.format != 1 {
        bail!("{}: unsupported format {} (expected 1)", path.display(), inst.format);
    }
    Ok(inst)
}
