//! Canonical instance fixtures: built programmatically from the core
//! constructors and serialized to the JSON instance format, so the shipped
//! files double as schema documentation and golden-test inputs.

use crate::schema::{
    ComoduleSection, CosimplicialSection, FiltrationSection, HopfSection, InstanceFile, LevelSpec,
    Profiles, RingSpec,
};
use anyhow::Result;
use exss_core::complex::ChainComplexData;
use exss_core::cosimplicial::CosimplicialData;
use exss_core::filtration::{
    adic_filtration_complex, filtered_sphere, moore_complex, FilteredComplexData, ProfileAbove,
    ProfileBelow,
};
use exss_core::matrix::Matrix;
use exss_core::ring::Ring;
use num_bigint::BigInt;
use std::path::Path;

fn matrix_rows_i64(m: &Matrix) -> Vec<Vec<i64>> {
    (0..m.rows)
        .map(|r| {
            (0..m.cols)
                .map(|c| {
                    let s = m.at(r, c).to_string();
                    s.parse::<i64>().expect("fixture entries fit in i64")
                })
                .collect()
        })
        .collect()
}

fn level_spec(c: &ChainComplexData) -> LevelSpec {
    let ranks: Vec<usize> = c.degrees().map(|n| c.rank(n)).collect();
    let diffs: Vec<Vec<Vec<i64>>> = c
        .degrees()
        .enumerate()
        .map(|(i, n)| {
            if i == 0 {
                vec![]
            } else {
                matrix_rows_i64(&c.diff(n))
            }
        })
        .collect();
    LevelSpec { ranks, diffs }
}

fn ring_spec(r: Ring) -> RingSpec {
    match r {
        Ring::Int => RingSpec::Name("Z".to_string()),
        Ring::Fp(p) => RingSpec::Fp { fp: p },
    }
}

pub fn filtration_section(x: &FilteredComplexData) -> FiltrationSection {
    let (n_min, n_max) = x.degree_window();
    let levels: Vec<LevelSpec> = (x.s_min..=x.s_max).map(|s| level_spec(&x.level(s))).collect();
    let transitions: Vec<Vec<Vec<Vec<i64>>>> = (x.s_min + 1..=x.s_max)
        .map(|s| {
            let t = x.transition(s);
            (n_min..=n_max).map(|n| matrix_rows_i64(&t.map_at(n))).collect()
        })
        .collect();
    FiltrationSection {
        ring: ring_spec(x.ring),
        degree_window: [n_min, n_max],
        window: [x.s_min, x.s_max],
        profiles: Profiles {
            below: match x.profile_below {
                ProfileBelow::Constant => "constant".into(),
                ProfileBelow::Zero => "zero".into(),
            },
            above: match x.profile_above {
                ProfileAbove::Zero => "zero".into(),
                ProfileAbove::Constant => "constant".into(),
            },
        },
        levels,
        transitions,
    }
}

fn cosimplicial_section(a: &CosimplicialData) -> CosimplicialSection {
    let (n_min, n_max) = (a.levels[0].n_min, a.levels[0].n_max);
    let per_degree = |f: &exss_core::complex::ChainMapData| -> Vec<Vec<Vec<i64>>> {
        (n_min..=n_max).map(|n| matrix_rows_i64(&f.map_at(n))).collect()
    };
    CosimplicialSection {
        ring: ring_spec(a.ring),
        degree_window: [n_min, n_max],
        levels: a.levels.iter().map(level_spec).collect(),
        cofaces: a.cofaces.iter().map(|dj| dj.iter().map(per_degree).collect()).collect(),
        codegeneracies: if a.is_cosimplicial() && !a.codegeneracies.is_empty() {
            Some(a.codegeneracies.iter().map(|sj| sj.iter().map(per_degree).collect()).collect())
        } else {
            None
        },
    }
}

pub fn sphere_fixture() -> InstanceFile {
    InstanceFile {
        format: 1,
        name: Some("filtered (0,0)-sphere".into()),
        filtration: Some(filtration_section(&filtered_sphere(Ring::Int, 0, 0))),
        cosimplicial: None,
        hopf: None,
    }
}

pub fn moore_p2_fixture() -> InstanceFile {
    let c = moore_complex(Ring::Int, 4);
    let x = adic_filtration_complex(&c, &BigInt::from(2), 6).unwrap().0;
    InstanceFile {
        format: 1,
        name: Some("2-adic filtration of the mod-4 Moore complex".into()),
        filtration: Some(filtration_section(&x)),
        cosimplicial: None,
        hopf: None,
    }
}

pub fn padic_z_fixture() -> InstanceFile {
    let c = ChainComplexData::concentrated(Ring::Int, 0, 1);
    let x = adic_filtration_complex(&c, &BigInt::from(2), 4).unwrap().0;
    InstanceFile {
        format: 1,
        name: Some("2-adic filtration of Z".into()),
        filtration: Some(filtration_section(&x)),
        cosimplicial: None,
        hopf: None,
    }
}

pub fn constant_z_fixture() -> InstanceFile {
    // constant filtration: not complete, used to exercise exit code 3
    let c = ChainComplexData::concentrated(Ring::Int, 0, 1);
    let levels = vec![c.clone(), c.clone()];
    let t = exss_core::complex::ChainMapData::identity(&c);
    let x = FilteredComplexData::new(levels, vec![t], 0, ProfileBelow::Constant, ProfileAbove::Constant)
        .unwrap();
    InstanceFile {
        format: 1,
        name: Some("constant filtration of Z (incomplete)".into()),
        filtration: Some(filtration_section(&x)),
        cosimplicial: None,
        hopf: None,
    }
}

pub fn exterior_fixture() -> InstanceFile {
    InstanceFile {
        format: 1,
        name: Some("exterior Hopf algebra Lambda(x) over F_2, |x| = 1".into()),
        filtration: None,
        cosimplicial: None,
        hopf: Some(HopfSection {
            p: 2,
            degrees: vec![0, 1],
            counit: vec![1, 0],
            coproduct: vec![vec![[0, 0, 1]], vec![[1, 0, 1], [0, 1, 1]]],
            comodule: ComoduleSection { degrees: vec![0], coaction: vec![vec![[0, 0, 1]]] },
        }),
    }
}

pub fn cosimplicial_demo_fixture() -> InstanceFile {
    let c = moore_complex(Ring::Int, 4);
    let a = CosimplicialData::constant(&c, 2);
    InstanceFile {
        format: 1,
        name: Some("constant cosimplicial mod-4 Moore complex, truncation 2".into()),
        filtration: None,
        cosimplicial: Some(cosimplicial_section(&a)),
        hopf: None,
    }
}

pub fn write_fixtures(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let fixtures: Vec<(&str, InstanceFile)> = vec![
        ("sphere.json", sphere_fixture()),
        ("moore_p2.json", moore_p2_fixture()),
        ("padic_z.json", padic_z_fixture()),
        ("constant_z.json", constant_z_fixture()),
        ("exterior.json", exterior_fixture()),
        ("cosimplicial_demo.json", cosimplicial_demo_fixture()),
    ];
    for (name, inst) in fixtures {
        let path = dir.join(name);
        std::fs::write(&path, serde_json::to_string_pretty(&inst)? + "\n")?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
