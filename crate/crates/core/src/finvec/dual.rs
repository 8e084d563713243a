//! Dualization and the double-dualization monad.
//!
//! `X*` is carried by the same coordinate space as `X` through the dual
//! basis: a functional `φ` has coordinates `(φ(e_1), …, φ(e_n))`. With that
//! identification fixed, every structure map below is an honest matrix,
//! computed by evaluating the defining formula on basis vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::field::Field;
use super::matrix::Matrix;
use super::space::{LinMap, VecObj};
use crate::error::{Error, Result};
use crate::report::{Anchor, Report};

/// Largest dimension [`dd_monad`] builds components for.
pub const MONAD_DIM_BOUND: usize = 4;

/// Applies the functional with dual-basis coordinates `phi` to `x`.
pub fn eval_functional(field: Field, phi: &[u8], x: &[u8]) -> u8 {
    phi.iter()
        .zip(x)
        .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
}

fn basis_vector(n: usize, i: usize) -> Vec<u8> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// `f*: Y* → X*, φ ↦ φ ∘ f`.
pub fn dual_map(f: &LinMap) -> LinMap {
    let field = f.field();
    let (n, m) = (f.dom().dim(), f.cod().dim());
    let mut mat = Matrix::zeros(field, n, m);
    for i in 0..m {
        let phi = basis_vector(m, i);
        // coordinates of φ ∘ f are its values on the basis of X
        for j in 0..n {
            let image = f.apply(&basis_vector(n, j));
            mat.set(j, i, eval_functional(field, &phi, &image));
        }
    }
    LinMap::new(f.cod(), f.dom(), mat).expect("dual map shape")
}

/// `f**: X** → Y**, x ↦ (u ↦ x(u ∘ f))`.
pub fn dd_on_map(f: &LinMap) -> LinMap {
    let dd = dual_map(&dual_map(f));
    debug_assert_eq!(dd.matrix(), f.matrix(), "double dual differs from the original matrix");
    dd
}

/// `η_X: X → X**, x ↦ ev_x`.
pub fn unit_component(x: VecObj) -> LinMap {
    let field = x.field();
    let n = x.dim();
    let mut mat = Matrix::zeros(field, n, n);
    for j in 0..n {
        let point = basis_vector(n, j);
        // ev_x has coordinates (ev_x(e_1*), …, ev_x(e_n*))
        for i in 0..n {
            mat.set(i, j, eval_functional(field, &basis_vector(n, i), &point));
        }
    }
    LinMap::new(x, x, mat).expect("unit shape")
}

/// `μ_X: X**** → X**`, the dual of `η_{X*}`.
pub fn mult_component(x: VecObj) -> LinMap {
    dual_map(&unit_component(x))
}

/// Unit and multiplication components indexed by dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadComponents {
    pub field: Field,
    pub unit: Vec<LinMap>,
    pub mult: Vec<LinMap>,
}

impl MonadComponents {
    pub fn unit(&self, dim: usize) -> &LinMap {
        &self.unit[dim]
    }

    pub fn mult(&self, dim: usize) -> &LinMap {
        &self.mult[dim]
    }

    pub fn max_dim(&self) -> usize {
        self.unit.len() - 1
    }

    /// The structure `(kη, k⁻¹μ)` for a nonzero scalar `k`.
    pub fn rescaled(&self, k: u8) -> MonadComponents {
        let kinv = self.field.inv(k);
        MonadComponents {
            field: self.field,
            unit: self.unit.iter().map(|u| u.scale(k)).collect(),
            mult: self.mult.iter().map(|m| m.scale(kinv)).collect(),
        }
    }
}

pub fn dd_monad(field: Field, max_dim: usize) -> Result<MonadComponents> {
    if max_dim > MONAD_DIM_BOUND {
        return Err(Error::BoundExceeded {
            what: "double-dual monad dimension",
            value: max_dim,
            bound: MONAD_DIM_BOUND,
        });
    }
    let spaces = (0..=max_dim).map(|n| VecObj::new(field, n));
    Ok(MonadComponents {
        field,
        unit: spaces.clone().map(unit_component).collect(),
        mult: spaces.map(mult_component).collect(),
    })
}

/// First violated monad law at `dim`, if any.
pub fn monad_law_violation(m: &MonadComponents, dim: usize) -> Option<&'static str> {
    let eta = m.unit(dim);
    let mu = m.mult(dim);
    let id = LinMap::identity(VecObj::new(m.field, dim));
    // every iterated dual of F^dim is F^dim again, so components at the
    // same dimension serve T X, T T X, …
    let eta_t = m.unit(dim);
    let t_eta = dd_on_map(eta);
    let mu_t = m.mult(dim);
    let t_mu = dd_on_map(mu);
    if mu.after(eta_t).ok()? != id {
        return Some("left unit");
    }
    if mu.after(&t_eta).ok()? != id {
        return Some("right unit");
    }
    if mu.after(&t_mu).ok()? != mu.after(mu_t).ok()? {
        return Some("associativity");
    }
    None
}

/// First naturality square of `η` or `μ` that fails for `f`.
pub fn naturality_violation(m: &MonadComponents, f: &LinMap) -> Option<&'static str> {
    let (a, b) = (f.dom().dim(), f.cod().dim());
    let ff = dd_on_map(f);
    let ffff = dd_on_map(&ff);
    if m.unit(b).after(f).ok()? != ff.after(m.unit(a)).ok()? {
        return Some("unit naturality");
    }
    if m.mult(b).after(&ffff).ok()? != ff.after(m.mult(a)).ok()? {
        return Some("mult naturality");
    }
    None
}

fn all_maps_upto(field: Field, max: usize) -> impl Iterator<Item = LinMap> {
    (0..=max).flat_map(move |a| {
        (0..=max).flat_map(move |b| Matrix::all(field, b, a).map(LinMap::from_matrix))
    })
}

/// Number of random maps touching dimension 3 in [`dd_monad_check`].
pub const SAMPLED_MAPS: usize = 120;

/// Verifies invertibility and naturality of `η`, naturality of `μ`, the monad
/// laws, and that every rescaling `(kη, k⁻¹μ)` with `k ≠ 0` is again a monad
/// with pairwise distinct units. Naturality is exhaustive for dimensions
/// ≤ 2 and sampled with `seed` for maps touching dimension 3.
pub fn dd_monad_check(field: Field, max_dim: usize, seed: u64) -> Result<Report> {
    let m = dd_monad(field, max_dim)?;
    let mut report = Report::new(
        "dd-monad",
        Anchor::new(
            "double-dualization monad",
            "x ↦ ev_x is a natural isomorphism in finite dimension, (−)** with unit ev and \
             multiplication dual to ev is a monad, and so is every rescaling (kη, k⁻¹μ) with k ≠ 0",
        ),
    )
    .metric("q", field.q())
    .metric("max_dim", max_dim)
    .seed(seed);

    for n in 0..=max_dim {
        if !m.unit(n).is_invertible() {
            report.fail(json!({ "law": "unit invertible", "dim": n }));
        }
        if dd_on_map(m.unit(n)).matrix() != m.unit(n).matrix() {
            report.fail(json!({ "law": "double dual of unit", "dim": n }));
        }
    }

    let exhaustive_dim = max_dim.min(2);
    let mut exhaustive = 0usize;
    for f in all_maps_upto(field, exhaustive_dim) {
        exhaustive += 1;
        if dd_on_map(&f).matrix() != f.matrix() {
            report.fail(json!({ "law": "f** = f", "matrix": f.matrix().to_rows() }));
        }
        if let Some(law) = naturality_violation(&m, &f) {
            report.fail(json!({ "law": law, "matrix": f.matrix().to_rows(), "dom": f.dom().dim() }));
        }
    }
    report.set_metric("maps_exhaustive", exhaustive);

    let mut sampled = 0usize;
    if max_dim >= 3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SAMPLED_MAPS {
            let (a, b) = match rng.gen_range(0..3) {
                0 => (3, 3),
                1 => (3, rng.gen_range(0..=3)),
                _ => (rng.gen_range(0..=3), 3),
            };
            let data = (0..a * b).map(|_| rng.gen_range(0..field.q())).collect();
            let f = LinMap::from_matrix(Matrix::new(field, b, a, data));
            sampled += 1;
            if let Some(law) = naturality_violation(&m, &f) {
                report.fail(json!({ "law": law, "matrix": f.matrix().to_rows(), "dom": a }));
            }
        }
    }
    report.set_metric("maps_sampled", sampled);

    for n in 0..=max_dim {
        if let Some(law) = monad_law_violation(&m, n) {
            report.fail(json!({ "law": law, "dim": n, "k": 1 }));
        }
    }

    let scaled: Vec<(u8, MonadComponents)> =
        field.units().map(|k| (k, m.rescaled(k))).collect();
    for (k, mk) in &scaled {
        for n in 0..=max_dim.min(2) {
            if let Some(law) = monad_law_violation(mk, n) {
                report.fail(json!({ "law": law, "dim": n, "k": k }));
            }
        }
        for f in all_maps_upto(field, max_dim.min(2)) {
            if let Some(law) = naturality_violation(mk, &f) {
                report.fail(json!({ "law": law, "k": k, "matrix": f.matrix().to_rows() }));
            }
        }
    }
    if max_dim >= 1 {
        for (i, (k, mk)) in scaled.iter().enumerate() {
            for (l, ml) in &scaled[i + 1..] {
                if mk.unit(1) == ml.unit(1) {
                    report.fail(json!({ "law": "distinct rescaled units", "k": k, "l": l }));
                }
            }
        }
    }
    report.set_metric("scalars", scaled.len());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn dual_is_transpose() {
        let row = LinMap::from_matrix(Matrix::new(f(2), 1, 2, vec![1, 1]));
        let d = dual_map(&row);
        assert_eq!(d.matrix(), &Matrix::new(f(2), 2, 1, vec![1, 1]));
        let id = LinMap::identity(VecObj::new(f(3), 3));
        assert_eq!(dual_map(&id), id);
    }

    #[test]
    fn dual_is_contravariant() {
        let field = f(2);
        for a in 0..=2 {
            for b in 0..=2 {
                for c in 0..=2 {
                    for fm in Matrix::all(field, b, a) {
                        for gm in Matrix::all(field, c, b) {
                            let ff = LinMap::from_matrix(fm.clone());
                            let g = LinMap::from_matrix(gm);
                            let lhs = dual_map(&g.after(&ff).unwrap());
                            let rhs = dual_map(&ff).after(&dual_map(&g)).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn double_dual_is_functorial() {
        for q in [2, 3] {
            let field = f(q);
            for fm in Matrix::all(field, 2, 2) {
                for gm in Matrix::all(field, 1, 2) {
                    let ff = LinMap::from_matrix(fm.clone());
                    let g = LinMap::from_matrix(gm);
                    assert_eq!(
                        dd_on_map(&g.after(&ff).unwrap()),
                        dd_on_map(&g).after(&dd_on_map(&ff)).unwrap()
                    );
                }
            }
        }
        let zero = LinMap::zero(VecObj::new(f(3), 2), VecObj::new(f(3), 3));
        assert_eq!(dd_on_map(&zero), zero);
    }

    #[test]
    fn unit_at_dimension_zero() {
        let m = dd_monad(f(2), 2).unwrap();
        assert_eq!(m.unit(0).matrix().shape(), (0, 0));
        assert!(m.unit(0).is_invertible());
        assert!(dd_monad(f(2), 5).is_err());
    }

    #[test]
    fn unit_laws_all_dims() {
        for q in [2, 3] {
            let m = dd_monad(f(q), 4).unwrap();
            for n in 0..=4 {
                assert!(m.unit(n).is_invertible());
                assert_eq!(monad_law_violation(&m, n), None);
            }
        }
    }

    #[test]
    fn wrong_rescaling_breaks_unit_law() {
        let m = dd_monad(f(3), 2).unwrap();
        let bad = MonadComponents {
            field: m.field,
            unit: m.unit.iter().map(|u| u.scale(2)).collect(),
            mult: m.mult.clone(),
        };
        assert_eq!(monad_law_violation(&bad, 1), Some("left unit"));
    }

    #[test]
    fn full_check_passes() {
        let r = dd_monad_check(f(3), 3, 11).unwrap();
        assert!(r.is_pass(), "{r}");
        assert!(r.metric_u64("maps_sampled").unwrap() >= 100);
    }
}
