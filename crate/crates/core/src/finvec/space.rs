use super::field::Field;
use super::matrix::Matrix;
use crate::diagram::{Budget, Carrier, Category, Cone, Diagram, FiniteHoms, FiniteLimits, LimitData};
use crate::error::{Error, Result};

/// The coordinate space `F_q^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VecObj {
    field: Field,
    dim: usize,
}

impl VecObj {
    pub const fn new(field: Field, dim: usize) -> Self {
        VecObj { field, dim }
    }

    pub fn field(self) -> Field {
        self.field
    }

    pub fn dim(self) -> usize {
        self.dim
    }
}

/// A linear map, acting on column vectors by its `cod.dim × dom.dim` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinMap {
    dom: VecObj,
    cod: VecObj,
    matrix: Matrix,
}

impl LinMap {
    pub fn new(dom: VecObj, cod: VecObj, matrix: Matrix) -> Result<Self> {
        if dom.field != cod.field || matrix.field() != dom.field {
            return Err(Error::TypeMismatch("linear map mixes fields".into()));
        }
        if matrix.shape() != (cod.dim, dom.dim) {
            return Err(Error::TypeMismatch(format!(
                "{}x{} matrix for a map F^{} -> F^{}",
                matrix.rows(),
                matrix.cols(),
                dom.dim,
                cod.dim
            )));
        }
        Ok(LinMap { dom, cod, matrix })
    }

    /// The map between coordinate spaces given by `matrix`.
    pub fn from_matrix(matrix: Matrix) -> Self {
        let f = matrix.field();
        LinMap {
            dom: VecObj::new(f, matrix.cols()),
            cod: VecObj::new(f, matrix.rows()),
            matrix,
        }
    }

    pub fn identity(x: VecObj) -> Self {
        LinMap::from_matrix(Matrix::identity(x.field, x.dim))
    }

    pub fn zero(dom: VecObj, cod: VecObj) -> Self {
        LinMap {
            dom,
            cod,
            matrix: Matrix::zeros(dom.field, cod.dim, dom.dim),
        }
    }

    pub fn dom(&self) -> VecObj {
        self.dom
    }

    pub fn cod(&self) -> VecObj {
        self.cod
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn field(&self) -> Field {
        self.dom.field
    }

    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        self.matrix.apply(v)
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &LinMap) -> Result<LinMap> {
        if f.cod != self.dom {
            return Err(Error::TypeMismatch(format!(
                "cannot compose a map out of F^{} after a map into F^{}",
                self.dom.dim, f.cod.dim
            )));
        }
        Ok(LinMap {
            dom: f.dom,
            cod: self.cod,
            matrix: self.matrix.mul(&f.matrix),
        })
    }

    pub fn scale(&self, k: u8) -> LinMap {
        LinMap {
            matrix: self.matrix.scale(k),
            ..self.clone()
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.is_invertible()
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.cod.dim
    }
}

/// Category tag for finite-dimensional spaces over a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FinVec;

impl Category for FinVec {
    type Tag = Field;
    type Obj = VecObj;
    type Mor = LinMap;

    fn dom(f: &LinMap) -> VecObj {
        f.dom
    }

    fn cod(f: &LinMap) -> VecObj {
        f.cod
    }

    fn identity(x: &VecObj) -> LinMap {
        LinMap::identity(*x)
    }

    fn compose(g: &LinMap, f: &LinMap) -> Result<LinMap> {
        g.after(f)
    }

    fn check_object(field: &Field, x: &VecObj) -> Result<()> {
        if x.field != *field {
            return Err(Error::MalformedDiagram(format!(
                "space over F_{} in a diagram over F_{}",
                x.field.q(),
                field.q()
            )));
        }
        Ok(())
    }
}

impl FiniteHoms for FinVec {
    fn hom_count(a: &VecObj, b: &VecObj) -> u128 {
        Matrix::count(a.field, b.dim, a.dim)
    }

    fn hom(a: &VecObj, b: &VecObj) -> Vec<LinMap> {
        Matrix::all(a.field, b.dim, a.dim)
            .map(|m| LinMap {
                dom: *a,
                cod: *b,
                matrix: m,
            })
            .collect()
    }
}

/// Node offsets into the stacked coordinate vector of a diagram.
fn offsets(d: &Diagram<FinVec>) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(d.node_count());
    let mut total = 0;
    for x in d.objects() {
        offs.push(total);
        total += x.dim;
    }
    (offs, total)
}

/// The stacked system `M_e · x_src − x_dst = 0`, one row block per edge.
pub fn constraint_matrix(d: &Diagram<FinVec>) -> Matrix {
    let field = *d.tag();
    let (offs, total) = offsets(d);
    let rows: usize = d.arrows().map(|(_, f)| f.cod.dim).sum();
    let mut m = Matrix::zeros(field, rows, total);
    let mut r0 = 0;
    for (e, f) in d.arrows() {
        let mat = &f.matrix;
        for i in 0..mat.rows() {
            for j in 0..mat.cols() {
                let c = offs[e.src] + j;
                let v = field.add(m.get(r0 + i, c), mat.get(i, j));
                m.set(r0 + i, c, v);
            }
            let c = offs[e.dst] + i;
            let v = field.sub(m.get(r0 + i, c), 1);
            m.set(r0 + i, c, v);
        }
        r0 += mat.rows();
    }
    m
}

impl FiniteLimits for FinVec {
    fn limit(d: &Diagram<FinVec>, _budget: Budget) -> Result<LimitData<FinVec>> {
        let field = *d.tag();
        let basis = constraint_matrix(d).kernel_basis();
        let (offs, _) = offsets(d);
        let apex = VecObj::new(field, basis.cols());
        let projections = d
            .objects()
            .iter()
            .zip(&offs)
            .map(|(&x, &o)| LinMap {
                dom: apex,
                cod: x,
                matrix: basis.row_block(o, x.dim),
            })
            .collect();
        Ok(LimitData {
            apex,
            carrier: Carrier::Subspace(basis),
            projections,
        })
    }

    fn factor(lim: &LimitData<FinVec>, cone: &Cone<FinVec>) -> Result<LinMap> {
        let Carrier::Subspace(basis) = &lim.carrier else {
            return Err(Error::TypeMismatch("linear limit without a basis".into()));
        };
        let field = lim.apex.field;
        let stacked = Matrix::vstack(
            &cone.legs.iter().map(|l| l.matrix.clone()).collect::<Vec<_>>(),
            field,
            cone.apex.dim,
        );
        let m = basis.solve(&stacked).ok_or(Error::NoFactorization)?;
        LinMap::new(cone.apex, lim.apex, m)
    }

    fn is_iso(f: &LinMap) -> bool {
        f.is_invertible()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{compute_limit, mediating_morphism};

    fn f2() -> Field {
        Field::new(2).unwrap()
    }

    #[test]
    fn graph_of_a_map_has_domain_dimension() {
        let v = VecObj::new(f2(), 2);
        let w = VecObj::new(f2(), 1);
        let mut b = Diagram::<FinVec>::builder(f2());
        let a = b.node("V", v);
        let c = b.node("W", w);
        b.edge("f", a, c, LinMap::new(v, w, Matrix::new(f2(), 1, 2, vec![1, 1])).unwrap());
        let d = b.build().unwrap();
        let lim = compute_limit(&d, Budget::default()).unwrap();
        assert_eq!(lim.apex.dim(), 2);
    }

    #[test]
    fn empty_shape_is_zero_space() {
        let d = Diagram::<FinVec>::builder(f2()).build().unwrap();
        assert_eq!(compute_limit(&d, Budget::default()).unwrap().apex.dim(), 0);
    }

    #[test]
    fn zero_space_cone_factors_as_zero() {
        let v = VecObj::new(f2(), 2);
        let mut b = Diagram::<FinVec>::builder(f2());
        b.node("V", v);
        let d = b.build().unwrap();
        let lim = compute_limit(&d, Budget::default()).unwrap();
        let zero = VecObj::new(f2(), 0);
        let cone = Cone {
            apex: zero,
            legs: vec![LinMap::zero(zero, v)],
        };
        let m = mediating_morphism(&d, &lim, &cone).unwrap();
        assert_eq!(m, LinMap::zero(zero, lim.apex));
    }

    #[test]
    fn mixed_fields_rejected() {
        let f3 = Field::new(3).unwrap();
        let mut b = Diagram::<FinVec>::builder(f2());
        b.node("V", VecObj::new(f3, 1));
        assert!(b.build().is_err());
        assert!(LinMap::new(
            VecObj::new(f2(), 2),
            VecObj::new(f2(), 1),
            Matrix::zeros(f2(), 2, 1)
        )
        .is_err());
    }
}
