#![allow(dead_code)]

use std::path::PathBuf;

use codense::finset::{FinSet, SetMap, SetObj};
use codense::finvec::{all_vectors, Field, FinVec, LinMap, Matrix, VecObj};
use codense::io::{load_diagram, AnyDiagram};
use codense::{compute_limit, mediating_morphism, Budget, Cone, Diagram};
use rand::Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Every fixture with its expected limit size (elements or dimension),
/// worked out by hand.
pub const EXPECTED: &[(&str, usize)] = &[
    ("commuting-triangle", 2),
    ("conflicting-constants", 0),
    ("coordinate-3-q2", 3),
    ("equalizer", 2),
    ("fixed-line-q5", 1),
    ("fixed-points", 2),
    ("graph-q2", 2),
    ("parallel-q2", 1),
    ("partition-quotient-3", 3),
    ("product", 6),
    ("pullback", 3),
    ("pullback-q3", 2),
    ("swap-cycle", 0),
    ("three-point-4", 4),
];

pub fn fixtures() -> Vec<(String, AnyDiagram)> {
    let mut out: Vec<(String, AnyDiagram)> = std::fs::read_dir(fixture_dir())
        .expect("fixture dir")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let d = load_diagram(&p).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, d)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Compatible families by walking the full product of node sets.
pub fn brute_families(d: &Diagram<FinSet>) -> Vec<Vec<usize>> {
    let sizes: Vec<usize> = d.objects().iter().map(|x| x.size()).collect();
    if sizes.contains(&0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; sizes.len()];
    loop {
        if d.arrows().all(|(e, f)| f.apply(cur[e.src]) == cur[e.dst]) {
            out.push(cur.clone());
        }
        let mut i = cur.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < sizes[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Compatible tuples by walking the whole direct sum of the node spaces.
/// Tuples are returned as per-node blocks.
pub fn brute_solutions(d: &Diagram<FinVec>) -> Vec<Vec<Vec<u8>>> {
    let field = *d.tag();
    let dims: Vec<usize> = d.objects().iter().map(|x| x.dim()).collect();
    let total: usize = dims.iter().sum();
    all_vectors(field, total)
        .map(|v| {
            let mut blocks = Vec::new();
            let mut o = 0;
            for &k in &dims {
                blocks.push(v[o..o + k].to_vec());
                o += k;
            }
            blocks
        })
        .filter(|b| d.arrows().all(|(e, f)| f.apply(&b[e.src]) == b[e.dst]))
        .collect()
}

pub const UNIQUENESS_LIMIT: u128 = 100_000;

/// Draws `cones` random cones over `d` from the oracle's families, checks that
/// each factors through the computed limit with all leg equations holding,
/// and, where the candidates can be listed, that exactly one map does.
/// Returns the number of cones whose uniqueness was checked exhaustively.
pub fn fuzz_set_cones(d: &Diagram<FinSet>, cones: usize, rng: &mut impl Rng) -> Result<usize, String> {
    let lim = compute_limit(d, Budget::default()).map_err(|e| e.to_string())?;
    let families = brute_families(d);
    if lim.apex.size() != families.len() {
        return Err(format!("limit has {} elements, oracle {}", lim.apex.size(), families.len()));
    }
    let mut exhaustive = 0;
    for _ in 0..cones {
        let a = if families.is_empty() { 0 } else { rng.gen_range(0..=4) };
        let apex = SetObj::new(a);
        let picks: Vec<usize> = (0..a).map(|_| rng.gen_range(0..families.len())).collect();
        let legs = (0..d.node_count())
            .map(|n| SetMap::new(apex, *d.object(n), picks.iter().map(|&p| families[p][n]).collect()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let cone = Cone { apex, legs };
        let m = mediating_morphism(d, &lim, &cone).map_err(|e| format!("no mediating map: {e}"))?;
        for (n, leg) in cone.legs.iter().enumerate() {
            for x in 0..a {
                if lim.projections[n].apply(m.apply(x)) != leg.apply(x) {
                    return Err(format!("leg equation fails at node {n}, element {x}"));
                }
            }
        }
        let l = lim.apex.size() as u128;
        if l.pow(a as u32) <= UNIQUENESS_LIMIT {
            let count = codense::finset::all_maps(apex, lim.apex)
                .iter()
                .filter(|t| {
                    (0..d.node_count()).all(|n| {
                        (0..a).all(|x| lim.projections[n].apply(t.apply(x)) == cone.legs[n].apply(x))
                    })
                })
                .count();
            if count != 1 {
                return Err(format!("{count} maps satisfy the leg equations"));
            }
            exhaustive += 1;
        }
    }
    Ok(exhaustive)
}

/// Linear version of [`fuzz_set_cones`]: each apex basis vector goes to a
/// random compatible tuple.
pub fn fuzz_vec_cones(d: &Diagram<FinVec>, cones: usize, rng: &mut impl Rng) -> Result<usize, String> {
    let field: Field = *d.tag();
    let lim = compute_limit(d, Budget::default()).map_err(|e| e.to_string())?;
    let solutions = brute_solutions(d);
    let expected = (field.q() as usize).pow(lim.apex.dim() as u32);
    if solutions.len() != expected {
        return Err(format!("oracle has {} solutions, limit dimension {}", solutions.len(), lim.apex.dim()));
    }
    let mut exhaustive = 0;
    for _ in 0..cones {
        let a = rng.gen_range(0..=3);
        let apex = VecObj::new(field, a);
        let picks: Vec<usize> = (0..a).map(|_| rng.gen_range(0..solutions.len())).collect();
        let legs = (0..d.node_count())
            .map(|n| {
                let x = *d.object(n);
                let mut m = Matrix::zeros(field, x.dim(), a);
                for (c, &p) in picks.iter().enumerate() {
                    for (r, &v) in solutions[p][n].iter().enumerate() {
                        m.set(r, c, v);
                    }
                }
                LinMap::new(apex, x, m)
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let cone = Cone { apex, legs };
        let m = mediating_morphism(d, &lim, &cone).map_err(|e| format!("no mediating map: {e}"))?;
        for (n, leg) in cone.legs.iter().enumerate() {
            if lim.projections[n].matrix().mul(m.matrix()) != *leg.matrix() {
                return Err(format!("leg equation fails at node {n}"));
            }
        }
        if Matrix::count(field, lim.apex.dim(), a) <= UNIQUENESS_LIMIT {
            let count = Matrix::all(field, lim.apex.dim(), a)
                .filter(|t| {
                    lim.projections
                        .iter()
                        .zip(&cone.legs)
                        .all(|(p, leg)| p.matrix().mul(t) == *leg.matrix())
                })
                .count();
            if count != 1 {
                return Err(format!("{count} maps satisfy the leg equations"));
            }
            exhaustive += 1;
        }
    }
    Ok(exhaustive)
}

pub fn fuzz_any(d: &AnyDiagram, cones: usize, rng: &mut impl Rng) -> Result<usize, String> {
    match d {
        AnyDiagram::Set(d) => fuzz_set_cones(d, cones, rng),
        AnyDiagram::Vec(d) => fuzz_vec_cones(d, cones, rng),
    }
}

pub fn limit_size(d: &AnyDiagram) -> usize {
    match d {
        AnyDiagram::Set(d) => compute_limit(d, Budget::default()).unwrap().apex.size(),
        AnyDiagram::Vec(d) => compute_limit(d, Budget::default()).unwrap().apex.dim(),
    }
}

/// Bell numbers from the Bell triangle.
pub fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}
