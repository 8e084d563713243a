//! The coordinate-subspace diagram: lines `K_x` and planes `L_Y` for all
//! 2-subsets `Y`, joined by restriction maps, with `F^n` as its limit.

use serde_json::json;

use super::field::Field;
use super::matrix::Matrix;
use super::space::{FinVec, LinMap, VecObj};
use crate::diagram::{compute_limit, mediating_morphism, Budget, Cone, Diagram};
use crate::error::{Error, Result};
use crate::report::{Anchor, Report};

fn coordinate_rows(field: Field, n: usize, coords: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(field, coords.len(), n);
    for (r, &c) in coords.iter().enumerate() {
        m.set(r, c, 1);
    }
    m
}

/// Builds the diagram and the cone of coordinate restrictions out of `F^n`.
pub fn coordinate_subspace_diagram(field: Field, n: usize) -> Result<(Diagram<FinVec>, Cone<FinVec>)> {
    let line = VecObj::new(field, 1);
    let plane = VecObj::new(field, 2);
    let whole = VecObj::new(field, n);
    let mut b = Diagram::<FinVec>::builder(field);
    let mut legs = Vec::new();
    let lines: Vec<usize> = (0..n)
        .map(|x| {
            legs.push(LinMap::new(whole, line, coordinate_rows(field, n, &[x])).expect("shape"));
            b.node(format!("K{x}"), line)
        })
        .collect();
    for x in 0..n {
        for y in x + 1..n {
            let node = b.node(format!("L{x}_{y}"), plane);
            legs.push(LinMap::new(whole, plane, coordinate_rows(field, n, &[x, y])).expect("shape"));
            for (slot, &c) in [x, y].iter().enumerate() {
                let restrict = LinMap::new(plane, line, coordinate_rows(field, 2, &[slot]))?;
                b.edge(format!("f_{x}_{y}->{c}"), node, lines[c], restrict);
            }
        }
    }
    Ok((b.build()?, Cone { apex: whole, legs }))
}

/// Checks that the coordinate restrictions out of `F^n` form a limit cone.
pub fn coordinate_limit_check(field: Field, n: usize) -> Result<Report> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "coordinate diagram needs 2 <= n <= 4, got {n}"
        )));
    }
    let (d, cone) = coordinate_subspace_diagram(field, n)?;
    let lim = compute_limit(&d, Budget::default())?;
    let mut report = Report::new(
        "coordinate-limit",
        Anchor::new(
            "coordinate-subspace limit",
            "the space of functions on n is the limit of its coordinate lines and coordinate \
             planes under restriction",
        ),
    )
    .metric("q", field.q())
    .metric("n", n)
    .metric("nodes", d.node_count())
    .metric("edges", d.edge_count())
    .metric("limit_dim", lim.apex.dim())
    .note(
        "finite analogue: every function on a finite index set has finite support, so only the \
         cone and limit machinery is exercised",
    );
    match mediating_morphism(&d, &lim, &cone) {
        Ok(m) if m.is_invertible() => {}
        Ok(m) => report.fail(json!({ "q": field.q(), "n": n, "mediating": m.matrix().to_rows() })),
        Err(e) => report.fail(json!({ "q": field.q(), "n": n, "error": e.to_string() })),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::check_cone;

    #[test]
    fn shape_counts() {
        let f2 = Field::new(2).unwrap();
        let (d, cone) = coordinate_subspace_diagram(f2, 3).unwrap();
        assert_eq!(d.node_count(), 6);
        assert_eq!(d.edge_count(), 6);
        assert!(check_cone(&d, &cone).unwrap());
    }

    #[test]
    fn limit_dimension() {
        for q in [2, 3] {
            for n in 2..=4 {
                let r = coordinate_limit_check(Field::new(q).unwrap(), n).unwrap();
                assert!(r.is_pass(), "{r}");
                assert_eq!(r.metric_u64("limit_dim"), Some(n as u64));
            }
        }
        assert!(coordinate_limit_check(Field::new(2).unwrap(), 5).is_err());
    }
}
