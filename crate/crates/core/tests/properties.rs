use codense::corpus::random_set3_diagram;
use codense::finset::{
    coarsening_map, is_coarser, partition_of_map, FinSet, Partition, SetMap, SetObj,
};
use codense::finvec::{dual_map, dd_on_map, Field, LinMap, Matrix};
use codense::io::{parse_diagram, AnyDiagram, DiagramFile};
use codense::Category;
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u32, 3, 5]).prop_map(|q| Field::new(q).unwrap())
}

fn matrix(field: Field, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(0..field.q(), rows * cols)
        .prop_map(move |d| Matrix::new(field, rows, cols, d))
}

fn any_matrix() -> impl Strategy<Value = Matrix> {
    (field(), 0usize..=4, 0usize..=4).prop_flat_map(|(f, r, c)| matrix(f, r, c))
}

fn set_map(dom: usize, cod: usize) -> impl Strategy<Value = SetMap> {
    prop::collection::vec(0..cod, dom).prop_map(move |t| SetMap::from_table(cod, t).unwrap())
}

fn labels() -> impl Strategy<Value = Vec<usize>> {
    (1usize..=6).prop_flat_map(|n| prop::collection::vec(0..n, n))
}

proptest! {
    #[test]
    fn rank_nullity(m in any_matrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(k.cols(), m.cols() - m.rank());
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn transpose_is_an_involution_and_keeps_rank(m in any_matrix()) {
        prop_assert_eq!(m.transpose().transpose(), m.clone());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn solve_recovers_consistent_systems(
        (a, x) in (field(), 1usize..=4, 1usize..=4, 1usize..=3)
            .prop_flat_map(|(f, r, c, k)| (matrix(f, r, c), matrix(f, c, k)))
    ) {
        let b = a.mul(&x);
        let y = a.solve(&b).expect("b lies in the column space");
        prop_assert_eq!(a.mul(&y), b);
    }

    #[test]
    fn dual_reverses_composition(
        (f, g) in (field(), 0usize..=3, 0usize..=3, 0usize..=3)
            .prop_flat_map(|(q, a, b, c)| (matrix(q, b, a), matrix(q, c, b)))
    ) {
        let (f, g) = (LinMap::from_matrix(f), LinMap::from_matrix(g));
        let gf = g.after(&f).unwrap();
        prop_assert_eq!(dual_map(&gf), dual_map(&f).after(&dual_map(&g)).unwrap());
        prop_assert_eq!(dd_on_map(&gf), gf);
    }

    #[test]
    fn set_composition_is_associative(
        (f, g, h) in (0usize..=4, 1usize..=4, 1usize..=4, 1usize..=4)
            .prop_flat_map(|(a, b, c, d)| (set_map(a, b), set_map(b, c), set_map(c, d)))
    ) {
        let left = FinSet::compose(&h, &FinSet::compose(&g, &f).unwrap()).unwrap();
        let right = FinSet::compose(&FinSet::compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(FinSet::compose(&f, &SetMap::identity(SetObj::new(f.dom().size()))).unwrap(), f);
    }

    #[test]
    fn partitions_are_canonical(l in labels(), perm_seed in any::<u64>()) {
        let p = Partition::from_labels(&l);
        // relabel blocks by a permutation of label values
        let n = l.len();
        let shift = (perm_seed as usize) % n.max(1);
        let relabelled: Vec<usize> = l.iter().map(|&x| (x + shift) % n.max(1)).collect();
        prop_assert_eq!(Partition::from_labels(&relabelled), p.clone());
        prop_assert_eq!(partition_of_map(&p.quotient_map()), p);
    }

    #[test]
    fn coarsening_map_exists_iff_coarser(a in labels(), b_seed in prop::collection::vec(0usize..6, 6)) {
        let n = a.len();
        let p1 = Partition::from_labels(&a);
        let b: Vec<usize> = b_seed[..n].to_vec();
        let p2 = Partition::from_labels(&b);
        let coarser = is_coarser(&p2, &p1).unwrap();
        let map = coarsening_map(&p1, &p2).unwrap();
        prop_assert_eq!(coarser, map.is_some());
        if let Some(u) = map {
            prop_assert_eq!(u.after(&p1.quotient_map()).unwrap(), p2.quotient_map());
        }
    }

    #[test]
    fn diagram_files_round_trip(seed in any::<u64>()) {
        let d = random_set3_diagram(seed, 6, 12).unwrap();
        let text = DiagramFile::from_set_diagram(&d).to_canonical_string();
        let back = parse_diagram(&text).unwrap();
        prop_assert_eq!(&back, &AnyDiagram::Set(d));
        prop_assert_eq!(back.to_file().to_canonical_string(), text);
    }
}
